//! Diary-based generation of spatio-temporal human-mobility trajectories.
//!
//! The pipeline separates *when* people move from *where* they go:
//!
//! 1. [`ingestion`] turns raw time-stamped records into abstract
//!    trajectories (one abstract location per time slot).
//! 2. [`diary`] learns a Markov diary model from those trajectories and
//!    generates routine / non-routine diaries from it (plus the RD and WT
//!    baseline diary generators).
//! 3. [`trajectory`] chooses physical locations on a weighted
//!    [`tessellation`] via d-EPR, SWIM or LATP.
//! 4. [`engine`] composes a diary generator with a trajectory generator to
//!    emit sampled trajectories for whole agent populations.
//! 5. [`measures`] and [`evaluation`] compute the standard mobility
//!    measures and score synthetic populations against reference data.
//! 6. [`clustering`] groups typical weeks with DBSCAN under edit distance.
//!
//! All stochastic entry points take explicit seeds or caller-owned RNGs;
//! identical inputs always produce identical outputs.

pub mod clustering;
pub mod diary;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod formats;
pub mod ingestion;
pub mod measures;
pub mod rng;
pub mod tessellation;
pub mod trajectory;

pub use error::{Error, Result};
pub use tessellation::{
    CoordinateSystem, GravityMatrix, Location, LocationId, WeightedTessellation,
};
