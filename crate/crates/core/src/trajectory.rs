//! Spatial location-choice generators: d-EPR, SWIM and LATP.
//!
//! Each generator answers one question: given an agent's spatial history,
//! which location does she visit next? None of them ever returns the
//! current location; consecutive diary runs are different locations by
//! construction of the diary language.

use crate::error::{Error, Result};
use crate::rng::weighted_choice;
use crate::tessellation::{GravityMatrix, LocationId, WeightedTessellation};
use rand::Rng;
use std::collections::BTreeMap;

/// An agent's spatial history: where she is, where home is, and how many
/// slots she has spent in every location visited so far.
#[derive(Clone, Debug)]
pub struct AgentSpatialState {
    pub current: LocationId,
    pub home: LocationId,
    visit_counts: BTreeMap<LocationId, u64>,
    total_visits: u64,
}

impl AgentSpatialState {
    /// Fresh agent at home, with the single seed visit.
    pub fn start_at_home(home: LocationId) -> Self {
        let mut visit_counts = BTreeMap::new();
        visit_counts.insert(home, 1);
        Self {
            current: home,
            home,
            visit_counts,
            total_visits: 1,
        }
    }

    /// Explicit state for tests and resumed simulations; `current` and
    /// `home` must have counts.
    pub fn with_history(
        current: LocationId,
        home: LocationId,
        visit_counts: BTreeMap<LocationId, u64>,
    ) -> Result<Self> {
        if !visit_counts.contains_key(&current) || !visit_counts.contains_key(&home) {
            return Err(Error::ConfigMismatch(
                "current and home must appear in visit counts".into(),
            ));
        }
        if visit_counts.values().any(|&c| c == 0) {
            return Err(Error::ConfigMismatch(
                "visit counts must be positive".into(),
            ));
        }
        let total_visits = visit_counts.values().sum();
        Ok(Self {
            current,
            home,
            visit_counts,
            total_visits,
        })
    }

    /// Record `slots` slots spent at `loc` and move there.
    pub fn record_stay(&mut self, loc: LocationId, slots: u64) {
        *self.visit_counts.entry(loc).or_insert(0) += slots;
        self.total_visits += slots;
        self.current = loc;
    }

    /// Number of distinct visited locations (N in the exploration law).
    pub fn distinct_count(&self) -> usize {
        self.visit_counts.len()
    }

    pub fn visit_counts(&self) -> &BTreeMap<LocationId, u64> {
        &self.visit_counts
    }
}

/// Probability of exploring rather than returning: `rho * N^(-gamma)`.
pub fn exploration_probability(rho: f64, gamma: f64, distinct_count: usize) -> f64 {
    rho * (distinct_count.max(1) as f64).powf(-gamma)
}

/// A location-choice mechanism. Implementations are pure functions of
/// `(state, shared immutable data, rng)` and are safe to call from one
/// worker per agent concurrently.
pub trait TrajectoryGenerator: Sync {
    /// Choose the next location; never the current one.
    fn next_location(
        &self,
        state: &AgentSpatialState,
        rng: &mut dyn rand::RngCore,
    ) -> Result<LocationId>;

    /// Deterministic highest-weight candidate under this generator's
    /// steady-state (exploration) weights, skipping `forbidden` ids.
    /// Engine fallback for degenerate tessellations.
    fn best_candidate(
        &self,
        state: &AgentSpatialState,
        forbidden: &[LocationId],
    ) -> Option<LocationId>;

    fn name(&self) -> &'static str;
}

// ── d-EPR ───────────────────────────────────────────────────────────────

/// Density-aware exploration and preferential return.
///
/// With probability `rho * N^(-gamma)` the agent explores, drawing the
/// next location from the gravity row of the current one; otherwise she
/// returns to a previously visited location proportionally to its visit
/// count. An all-zero gravity row falls back to relevance-proportional
/// sampling; an empty return candidate set (nothing visited but the
/// current location) falls through to exploration.
#[derive(Clone, Debug)]
pub struct Depr<'a> {
    pub gravity: &'a GravityMatrix,
    pub tessellation: &'a WeightedTessellation,
    pub rho: f64,
    pub gamma: f64,
}

impl<'a> Depr<'a> {
    pub fn new(
        gravity: &'a GravityMatrix,
        tessellation: &'a WeightedTessellation,
        rho: f64,
        gamma: f64,
    ) -> Result<Self> {
        if rho.is_nan() || gamma.is_nan() || rho <= 0.0 || rho > 1.0 || gamma < 0.0 {
            return Err(Error::ConfigMismatch(format!(
                "d-EPR requires rho in (0,1] and gamma >= 0, got rho={rho} gamma={gamma}"
            )));
        }
        if gravity.len() != tessellation.len() {
            return Err(Error::ConfigMismatch(format!(
                "gravity matrix built on {} locations, tessellation has {}",
                gravity.len(),
                tessellation.len()
            )));
        }
        Ok(Self {
            gravity,
            tessellation,
            rho,
            gamma,
        })
    }

    fn explore(
        &self,
        state: &AgentSpatialState,
        rng: &mut dyn rand::RngCore,
    ) -> Result<LocationId> {
        let row = self.gravity.row(state.current);
        let total: f64 = row.iter().sum();
        match weighted_choice(row.iter().copied(), total, rng) {
            Some(j) => Ok(LocationId(j as u32)),
            // Zero row: the current location has zero relevance. Fall back
            // to collective relevance, excluding the current location.
            None => self
                .tessellation
                .sample_by_relevance_excluding(state.current, rng),
        }
    }

    fn preferential_return(
        &self,
        state: &AgentSpatialState,
        rng: &mut dyn rand::RngCore,
    ) -> Option<LocationId> {
        let current = state.current;
        let total: u64 = state
            .visit_counts()
            .iter()
            .filter(|(&l, _)| l != current)
            .map(|(_, &c)| c)
            .sum();
        if total == 0 {
            return None;
        }
        let idx = weighted_choice(
            state
                .visit_counts()
                .iter()
                .map(|(&l, &c)| if l == current { 0.0 } else { c as f64 }),
            total as f64,
            rng,
        )?;
        state.visit_counts().keys().nth(idx).copied()
    }
}

impl TrajectoryGenerator for Depr<'_> {
    fn next_location(
        &self,
        state: &AgentSpatialState,
        rng: &mut dyn rand::RngCore,
    ) -> Result<LocationId> {
        let p_new = exploration_probability(self.rho, self.gamma, state.distinct_count());
        if rng.random::<f64>() < p_new {
            self.explore(state, rng)
        } else {
            match self.preferential_return(state, rng) {
                Some(j) => Ok(j),
                None => self.explore(state, rng),
            }
        }
    }

    fn best_candidate(
        &self,
        state: &AgentSpatialState,
        forbidden: &[LocationId],
    ) -> Option<LocationId> {
        let row = self.gravity.row(state.current);
        argmax_skipping(row.iter().copied(), state.current, forbidden)
    }

    fn name(&self) -> &'static str {
        "depr"
    }
}

// ── SWIM ────────────────────────────────────────────────────────────────

/// Location preference mixing closeness-to-home with collective relevance:
/// `w(L) = alpha * 1/(1 + d(home, L))^2 + (1 - alpha) * r_norm(L)`.
///
/// Relevance is min-max normalized to [0, 1] over the whole tessellation
/// so the two terms share a scale and `alpha` keeps its meaning.
#[derive(Clone, Debug)]
pub struct Swim<'a> {
    pub tessellation: &'a WeightedTessellation,
    pub alpha: f64,
    relevance_norm: Vec<f64>,
}

impl<'a> Swim<'a> {
    pub fn new(tessellation: &'a WeightedTessellation, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::ConfigMismatch(format!(
                "SWIM requires alpha in [0,1], got {alpha}"
            )));
        }
        let rel: Vec<f64> = tessellation
            .locations()
            .iter()
            .map(|l| l.relevance)
            .collect();
        let (min, max) = rel
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &r| {
                (lo.min(r), hi.max(r))
            });
        let relevance_norm = if max > min {
            rel.iter().map(|&r| (r - min) / (max - min)).collect()
        } else if max > 0.0 {
            vec![1.0; rel.len()]
        } else {
            vec![0.0; rel.len()]
        };
        Ok(Self {
            tessellation,
            alpha,
            relevance_norm,
        })
    }

    fn weight(&self, state: &AgentSpatialState, id: usize) -> f64 {
        let d = self
            .tessellation
            .distance(state.home, LocationId(id as u32))
            .expect("home id valid");
        let kernel = 1.0 / (1.0 + d).powi(2);
        self.alpha * kernel + (1.0 - self.alpha) * self.relevance_norm[id]
    }
}

impl TrajectoryGenerator for Swim<'_> {
    fn next_location(
        &self,
        state: &AgentSpatialState,
        rng: &mut dyn rand::RngCore,
    ) -> Result<LocationId> {
        let n = self.tessellation.len();
        let current = state.current.0 as usize;
        let weights: Vec<f64> = (0..n)
            .map(|j| {
                if j == current {
                    0.0
                } else {
                    self.weight(state, j)
                }
            })
            .collect();
        let total: f64 = weights.iter().sum();
        match weighted_choice(weights.iter().copied(), total, rng) {
            Some(j) => Ok(LocationId(j as u32)),
            None => self
                .tessellation
                .sample_by_relevance_excluding(state.current, rng),
        }
    }

    fn best_candidate(
        &self,
        state: &AgentSpatialState,
        forbidden: &[LocationId],
    ) -> Option<LocationId> {
        let weights = (0..self.tessellation.len()).map(|j| self.weight(state, j));
        argmax_skipping(weights, state.current, forbidden)
    }

    fn name(&self) -> &'static str {
        "swim"
    }
}

// ── LATP ────────────────────────────────────────────────────────────────

/// Least-action trip planning: `w(L) = 1 / distance(current, L)^a`.
///
/// Candidates coincident with the current location are excluded; if every
/// candidate coincides the tessellation is degenerate and an error is
/// returned.
#[derive(Clone, Debug)]
pub struct Latp<'a> {
    pub tessellation: &'a WeightedTessellation,
    pub exponent: f64,
}

impl<'a> Latp<'a> {
    pub fn new(tessellation: &'a WeightedTessellation, exponent: f64) -> Result<Self> {
        if exponent.is_nan() || exponent <= 0.0 {
            return Err(Error::ConfigMismatch(format!(
                "LATP requires a positive exponent, got {exponent}"
            )));
        }
        Ok(Self {
            tessellation,
            exponent,
        })
    }

    fn weights(&self, state: &AgentSpatialState) -> Vec<f64> {
        let n = self.tessellation.len();
        (0..n)
            .map(|j| {
                if j == state.current.0 as usize {
                    return 0.0;
                }
                let d = self
                    .tessellation
                    .distance(state.current, LocationId(j as u32))
                    .expect("ids valid");
                if d > 0.0 {
                    d.powf(-self.exponent)
                } else {
                    0.0
                }
            })
            .collect()
    }
}

impl TrajectoryGenerator for Latp<'_> {
    fn next_location(
        &self,
        state: &AgentSpatialState,
        rng: &mut dyn rand::RngCore,
    ) -> Result<LocationId> {
        let weights = self.weights(state);
        let total: f64 = weights.iter().sum();
        weighted_choice(weights.iter().copied(), total, rng)
            .map(|j| LocationId(j as u32))
            .ok_or(Error::DegenerateDistance {
                a: state.current.0,
                b: state.current.0,
            })
    }

    fn best_candidate(
        &self,
        state: &AgentSpatialState,
        forbidden: &[LocationId],
    ) -> Option<LocationId> {
        argmax_skipping(self.weights(state).into_iter(), state.current, forbidden)
    }

    fn name(&self) -> &'static str {
        "latp"
    }
}

/// Index of the highest positive weight, skipping `current` and
/// `forbidden`; ties go to the smaller id.
fn argmax_skipping(
    weights: impl Iterator<Item = f64>,
    current: LocationId,
    forbidden: &[LocationId],
) -> Option<LocationId> {
    let mut best: Option<(usize, f64)> = None;
    for (j, w) in weights.enumerate() {
        let id = LocationId(j as u32);
        if id == current || forbidden.contains(&id) || w.is_nan() || w <= 0.0 {
            continue;
        }
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((j, w));
        }
    }
    best.map(|(j, _)| LocationId(j as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::agent_rng;
    use crate::tessellation::{planar, GravityMatrix};

    fn counts(pairs: &[(u32, u64)]) -> BTreeMap<LocationId, u64> {
        pairs.iter().map(|&(l, c)| (LocationId(l), c)).collect()
    }

    #[test]
    fn exploration_probability_at_one_location_is_rho() {
        assert_eq!(exploration_probability(0.6, 0.21, 1), 0.6);
        let p4 = exploration_probability(0.6, 0.21, 4);
        assert!((p4 - 0.6 * 4.0f64.powf(-0.21)).abs() < 1e-15);
    }

    #[test]
    fn depr_return_is_count_proportional() {
        // Current is a third location so exclusion does not distort the
        // A:B = 3:1 ratio.
        let t = planar(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (2.0, 0.0, 1.0)]).unwrap();
        let g = GravityMatrix::build(&t).unwrap();
        // Vanishing rho: the return branch effectively always fires.
        let depr = Depr::new(&g, &t, 1e-12, 0.21).unwrap();
        let state = AgentSpatialState::with_history(
            LocationId(2),
            LocationId(2),
            counts(&[(0, 3), (1, 1), (2, 5)]),
        )
        .unwrap();
        let mut rng = agent_rng(13, 0);
        let n = 100_000;
        let mut hits = [0u64; 3];
        for _ in 0..n {
            hits[depr.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        assert_eq!(hits[2], 0, "never returns the current location");
        let fa = hits[0] as f64 / n as f64;
        assert!((fa - 0.75).abs() < 0.01, "A frequency {fa}");
    }

    #[test]
    fn depr_exploration_follows_gravity_row() {
        // Collinear x = 0,1,2 with unit relevance: row of location 0 is
        // (0, 1/4.5, 0.25/4.5), renormalized (0.8, 0.2).
        let t = planar(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (2.0, 0.0, 1.0)]).unwrap();
        let g = GravityMatrix::build(&t).unwrap();
        // rho = 1, gamma = 0: always explore.
        let depr = Depr::new(&g, &t, 1.0, 0.0).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(17, 0);
        let n = 100_000;
        let mut hits = [0u64; 3];
        for _ in 0..n {
            hits[depr.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        assert_eq!(hits[0], 0);
        let f1 = hits[1] as f64 / n as f64;
        let f2 = hits[2] as f64 / n as f64;
        assert!((f1 - 0.8).abs() < 0.01, "f1 {f1}");
        assert!((f2 - 0.2).abs() < 0.01, "f2 {f2}");
    }

    #[test]
    fn depr_zero_relevance_row_falls_back_to_relevance() {
        // Current location has zero relevance: its gravity row is all zero.
        let t = planar(&[(0.0, 0.0, 0.0), (1.0, 0.0, 1.0), (2.0, 0.0, 3.0)]).unwrap();
        let g = GravityMatrix::build(&t).unwrap();
        let depr = Depr::new(&g, &t, 1.0, 0.0).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(19, 0);
        let mut hits = [0u64; 3];
        for _ in 0..40_000 {
            hits[depr.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        assert_eq!(hits[0], 0);
        let f2 = hits[2] as f64 / 40_000.0;
        assert!((f2 - 0.75).abs() < 0.02, "relevance fallback skewed: {f2}");
    }

    #[test]
    fn depr_empty_return_set_explores() {
        // Only the current location was ever visited; the return branch is
        // empty and must fall through to exploration.
        let t = planar(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]).unwrap();
        let g = GravityMatrix::build(&t).unwrap();
        let depr = Depr::new(&g, &t, 1e-12, 0.21).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(23, 0);
        for _ in 0..100 {
            assert_eq!(depr.next_location(&state, &mut rng).unwrap(), LocationId(1));
        }
    }

    #[test]
    fn swim_pure_relevance_limit() {
        // alpha = 0 with relevances (0, 1, 3): min-max normalized weights
        // (0, 1/3, 1); over non-current candidates the frequencies are
        // (0, 0.25, 0.75).
        let t = planar(&[(0.0, 0.0, 0.0), (1.0, 0.0, 1.0), (2.0, 0.0, 3.0)]).unwrap();
        let swim = Swim::new(&t, 0.0).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(29, 0);
        let n = 100_000;
        let mut hits = [0u64; 3];
        for _ in 0..n {
            hits[swim.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        assert_eq!(hits[0], 0);
        assert!((hits[1] as f64 / n as f64 - 0.25).abs() < 0.01);
        assert!((hits[2] as f64 / n as f64 - 0.75).abs() < 0.01);
    }

    #[test]
    fn swim_pure_distance_limit() {
        // alpha = 1: only the home kernel matters, relevance ignored.
        // Candidates at d = 1 and d = 3 from home: kernel 1/4 and 1/16.
        let t = planar(&[(0.0, 0.0, 1.0), (1.0, 0.0, 999.0), (3.0, 0.0, 999.0)]).unwrap();
        let swim = Swim::new(&t, 1.0).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(31, 0);
        let n = 100_000;
        let mut hits = [0u64; 3];
        for _ in 0..n {
            hits[swim.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        let expect1 = (1.0 / 4.0) / (1.0 / 4.0 + 1.0 / 16.0);
        assert!((hits[1] as f64 / n as f64 - expect1).abs() < 0.01);
    }

    #[test]
    fn swim_symmetric_candidates_split_evenly() {
        // Home is current; two candidates equidistant with equal relevance.
        let t = planar(&[(0.0, 0.0, 2.0), (0.0, 2.0, 1.0), (0.0, -2.0, 1.0)]).unwrap();
        let swim = Swim::new(&t, 0.75).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(37, 0);
        let n = 100_000;
        let mut hits = [0u64; 3];
        for _ in 0..n {
            hits[swim.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        let f1 = hits[1] as f64 / n as f64;
        assert!((f1 - 0.5).abs() < 0.01, "split {f1}");
    }

    #[test]
    fn latp_two_candidates_hand_probabilities() {
        // Distances 1 and 2 with a = 1.5: p = (1, 2^-1.5) normalized.
        let t = planar(&[(0.0, 0.0, 1.0), (1.0, 0.0, 1.0), (2.0, 0.0, 1.0)]).unwrap();
        let latp = Latp::new(&t, 1.5).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(41, 0);
        let n = 100_000;
        let mut hits = [0u64; 3];
        for _ in 0..n {
            hits[latp.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        let p1 = 1.0 / (1.0 + 2.0f64.powf(-1.5));
        assert!((hits[1] as f64 / n as f64 - p1).abs() < 0.01);
        assert!((hits[2] as f64 / n as f64 - (1.0 - p1)).abs() < 0.01);
    }

    #[test]
    fn latp_single_candidate_always_chosen() {
        let t = planar(&[(0.0, 0.0, 1.0), (5.0, 0.0, 1.0)]).unwrap();
        let latp = Latp::new(&t, 1.5).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(43, 0);
        for _ in 0..50 {
            assert_eq!(latp.next_location(&state, &mut rng).unwrap(), LocationId(1));
        }
    }

    #[test]
    fn latp_equidistant_candidates_uniform() {
        let t = planar(&[
            (0.0, 0.0, 1.0),
            (1.0, 0.0, 1.0),
            (-1.0, 0.0, 1.0),
            (0.0, 1.0, 1.0),
            (0.0, -1.0, 1.0),
        ])
        .unwrap();
        let latp = Latp::new(&t, 1.5).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(47, 0);
        let n = 100_000;
        let mut hits = [0u64; 5];
        for _ in 0..n {
            hits[latp.next_location(&state, &mut rng).unwrap().0 as usize] += 1;
        }
        for &h in &hits[1..] {
            assert!((h as f64 / n as f64 - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn latp_coincident_candidates_excluded_or_error() {
        let t = planar(&[(0.0, 0.0, 1.0), (0.0, 0.0, 1.0), (1.0, 0.0, 1.0)]).unwrap();
        let latp = Latp::new(&t, 1.5).unwrap();
        let state = AgentSpatialState::start_at_home(LocationId(0));
        let mut rng = agent_rng(53, 0);
        for _ in 0..50 {
            // Location 1 coincides with current location 0: excluded.
            assert_eq!(latp.next_location(&state, &mut rng).unwrap(), LocationId(2));
        }
        let degenerate = planar(&[(0.0, 0.0, 1.0), (0.0, 0.0, 1.0)]).unwrap();
        let latp2 = Latp::new(&degenerate, 1.5).unwrap();
        assert!(matches!(
            latp2.next_location(&state, &mut rng),
            Err(Error::DegenerateDistance { .. })
        ));
    }

    #[test]
    fn generators_never_return_current_and_are_deterministic() {
        let t = planar(&[
            (0.0, 0.0, 2.0),
            (1.0, 0.5, 1.0),
            (2.0, -1.0, 4.0),
            (3.0, 2.0, 1.0),
        ])
        .unwrap();
        let g = GravityMatrix::build(&t).unwrap();
        let depr = Depr::new(&g, &t, 0.6, 0.21).unwrap();
        let swim = Swim::new(&t, 0.75).unwrap();
        let latp = Latp::new(&t, 1.5).unwrap();
        let gens: [&dyn TrajectoryGenerator; 3] = [&depr, &swim, &latp];
        let state = AgentSpatialState::with_history(
            LocationId(1),
            LocationId(0),
            counts(&[(0, 4), (1, 2), (2, 1)]),
        )
        .unwrap();
        for gen in gens {
            for seed in 0..200u64 {
                let a = gen.next_location(&state, &mut agent_rng(seed, 0)).unwrap();
                let b = gen.next_location(&state, &mut agent_rng(seed, 0)).unwrap();
                assert_ne!(a, state.current, "{} returned current", gen.name());
                assert_eq!(a, b, "{} not deterministic", gen.name());
            }
        }
    }

    #[test]
    fn exploration_frequency_tracks_power_law() {
        // Disjoint outcome sets: visited locations carry zero relevance, so
        // gravity rows never point at them; unvisited ones carry relevance.
        // Exploration is observed exactly when an unvisited location comes
        // back.
        let mut pts = vec![(0.0, 0.0, 1.0)]; // current, relevant
        for i in 0..9 {
            pts.push((1.0 + i as f64, 0.0, 0.0)); // visited, zero relevance
        }
        for i in 0..10 {
            pts.push((20.0 + i as f64, 0.0, 1.0)); // unvisited, relevant
        }
        let t = planar(&pts).unwrap();
        let g = GravityMatrix::build(&t).unwrap();
        let depr = Depr::new(&g, &t, 0.6, 0.21).unwrap();

        for n_distinct in [2usize, 4, 8] {
            let mut vc = counts(&[(0, 1)]);
            for i in 0..(n_distinct - 1) as u32 {
                vc.insert(LocationId(1 + i), 1);
            }
            let state = AgentSpatialState::with_history(LocationId(0), LocationId(0), vc).unwrap();
            assert_eq!(state.distinct_count(), n_distinct);
            let mut rng = agent_rng(61, n_distinct as u64);
            let trials = 20_000;
            let mut explored = 0u64;
            for _ in 0..trials {
                let j = depr.next_location(&state, &mut rng).unwrap();
                if j.0 >= 10 {
                    explored += 1;
                }
            }
            let p = exploration_probability(0.6, 0.21, n_distinct);
            let f = explored as f64 / trials as f64;
            let band = 2.5758 * (p * (1.0 - p) / trials as f64).sqrt();
            assert!(
                (f - p).abs() <= band,
                "N={n_distinct}: freq {f} vs p {p} (band {band})"
            );
        }
    }
}
