//! Mobility diaries: the routine / non-routine token language, the Markov
//! diary model and its learner, and the RD / WT baseline diary generators.

mod baselines;
mod language;
mod learner;
mod model;

pub use baselines::{rd_generate, wt_generate, wt_generate_with, WaitingTimeSampler};
pub use language::{validate_diary, DiaryToken, MobilityDiary};
pub use learner::{mdl_learn, TypicalDiary};
pub use model::{DiaryState, DiaryTransition, MarkovDiaryModel};
