//! The Markov diary model: a 2P-state chain over (slot-of-period, routine).

use crate::diary::language::{DiaryToken, MobilityDiary};
use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A chain state: slot-of-period `hour` in `[0, P)` plus whether the
/// individual is at the typical location.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DiaryState {
    pub hour: u32,
    pub routine: bool,
}

impl DiaryState {
    pub fn new(hour: u32, routine: bool) -> Self {
        Self { hour, routine }
    }
}

/// A transition target. `tau` is the stay duration in slots: 1 for routine
/// targets (advance one slot), `1..=P` for non-routine targets, whose hour
/// is `(hour + tau) mod P`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct DiaryTransition {
    pub to: DiaryState,
    pub tau: u32,
}

pub(crate) type CountRow = BTreeMap<DiaryTransition, u64>;
pub(crate) type Counts = BTreeMap<DiaryState, CountRow>;

/// Row-stochastic transition structure over the 2P states, learned from
/// abstract trajectories (or loaded from serialized form).
///
/// States never observed in the data have no row; generation falls back to
/// the deterministic `(h, .) -> ((h+1) mod P, routine)` transition for them,
/// so a walk can never stall.
#[derive(Clone, Debug)]
pub struct MarkovDiaryModel {
    period: u32,
    slot_seconds: u32,
    counts: Counts,
    rows: BTreeMap<DiaryState, Vec<(DiaryTransition, f64)>>,
}

impl MarkovDiaryModel {
    /// Normalize raw transition counts into a model.
    pub(crate) fn from_counts(counts: Counts, period: u32, slot_seconds: u32) -> Self {
        let mut rows = BTreeMap::new();
        for (state, row) in &counts {
            let total: u64 = row.values().sum();
            if total == 0 {
                continue;
            }
            let normalized: Vec<(DiaryTransition, f64)> = row
                .iter()
                .map(|(t, &c)| (*t, c as f64 / total as f64))
                .collect();
            rows.insert(*state, normalized);
        }
        Self {
            period,
            slot_seconds,
            counts,
            rows,
        }
    }

    /// Build directly from probability rows (ground-truth chains in tests,
    /// deserialization). Rows are validated: probabilities in [0, 1],
    /// sums within 1e-9 of 1, hours within the period, targets consistent.
    pub fn from_rows(
        rows: BTreeMap<DiaryState, Vec<(DiaryTransition, f64)>>,
        period: u32,
        slot_seconds: u32,
    ) -> Result<Self> {
        for (state, row) in &rows {
            if state.hour >= period {
                return Err(Error::ModelFormat(format!(
                    "state hour {} outside period {period}",
                    state.hour
                )));
            }
            let mut sum = 0.0;
            for (t, p) in row {
                if !(0.0..=1.0).contains(p) || !p.is_finite() {
                    return Err(Error::ModelFormat(format!("probability {p} out of range")));
                }
                if t.to.hour >= period || t.tau == 0 || t.tau > period {
                    return Err(Error::ModelFormat(format!(
                        "invalid transition target ({}, {}) tau {}",
                        t.to.hour, t.to.routine as u8, t.tau
                    )));
                }
                let expect_hour = if t.to.routine {
                    (state.hour + 1) % period
                } else {
                    (state.hour + t.tau) % period
                };
                if t.to.hour != expect_hour {
                    return Err(Error::ModelFormat(format!(
                        "target hour {} inconsistent with tau {} from hour {}",
                        t.to.hour, t.tau, state.hour
                    )));
                }
                sum += p;
            }
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::ModelFormat(format!(
                    "row ({}, {}) sums to {sum}, expected 1",
                    state.hour, state.routine as u8
                )));
            }
        }
        Ok(Self {
            period,
            slot_seconds,
            counts: Counts::new(),
            rows,
        })
    }

    pub fn period(&self) -> u32 {
        self.period
    }

    pub fn slot_seconds(&self) -> u32 {
        self.slot_seconds
    }

    /// Raw transition counts (empty for models loaded from disk).
    pub fn counts(&self) -> &BTreeMap<DiaryState, BTreeMap<DiaryTransition, u64>> {
        &self.counts
    }

    /// The normalized row of a state, if it was ever observed.
    pub fn row(&self, state: DiaryState) -> Option<&[(DiaryTransition, f64)]> {
        self.rows.get(&state).map(|v| v.as_slice())
    }

    pub fn states(&self) -> impl Iterator<Item = DiaryState> + '_ {
        self.rows.keys().copied()
    }

    /// Deterministic fallback for states with no observed transitions:
    /// return to routine at the next slot.
    pub fn fallback_transition(&self, state: DiaryState) -> DiaryTransition {
        DiaryTransition {
            to: DiaryState::new((state.hour + 1) % self.period, true),
            tau: 1,
        }
    }

    fn sample_transition<R: Rng + ?Sized>(
        &self,
        state: DiaryState,
        rng: &mut R,
    ) -> DiaryTransition {
        match self.rows.get(&state) {
            Some(row) if !row.is_empty() => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                for (t, p) in row {
                    acc += p;
                    if u < acc {
                        return *t;
                    }
                }
                row.last().unwrap().0
            }
            _ => self.fallback_transition(state),
        }
    }

    /// Generate a diary of exactly `n_slots` slots starting from `start`.
    ///
    /// Routine states emit `1`s; non-routine targets emit a separator and a
    /// run of `tau` `0`s; every transition that changes location inserts a
    /// separator. The final run is truncated at `n_slots`.
    pub fn generate<R: Rng + ?Sized>(
        &self,
        n_slots: usize,
        start: DiaryState,
        rng: &mut R,
    ) -> MobilityDiary {
        assert!(n_slots >= 1, "n_slots must be >= 1");
        let mut tokens = Vec::with_capacity(n_slots + n_slots / 4);
        let mut emitted = 0usize;
        let mut state = start;
        tokens.push(if start.routine {
            DiaryToken::Routine
        } else {
            DiaryToken::NonRoutine
        });
        emitted += 1;

        while emitted < n_slots {
            let t = self.sample_transition(state, rng);
            if t.to.routine {
                if !state.routine {
                    tokens.push(DiaryToken::Separator);
                }
                tokens.push(DiaryToken::Routine);
                emitted += 1;
            } else {
                // Leaving for (or moving between) non-typical locations
                // always changes location.
                tokens.push(DiaryToken::Separator);
                let run = (t.tau as usize).min(n_slots - emitted);
                for _ in 0..run {
                    tokens.push(DiaryToken::NonRoutine);
                }
                emitted += run;
            }
            state = t.to;
        }

        MobilityDiary::new(tokens, self.slot_seconds)
            .expect("generated token stream is a valid diary word")
    }

    /// Serialize to the interchange JSON document.
    pub fn to_json(&self) -> serde_json::Value {
        let doc = ModelDoc::from(self);
        serde_json::to_value(doc).expect("model serialization cannot fail")
    }

    /// Parse and re-validate the interchange JSON document.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let doc: ModelDoc =
            serde_json::from_value(value.clone()).map_err(|e| Error::ModelFormat(e.to_string()))?;
        doc.into_model()
    }
}

// ── interchange format ──────────────────────────────────────────────────

#[derive(Serialize, Deserialize)]
struct ModelDoc {
    period: u32,
    slot_seconds: u32,
    rows: Vec<RowDoc>,
}

#[derive(Serialize, Deserialize)]
struct RowDoc {
    state: (u32, u8),
    transitions: Vec<TransitionDoc>,
}

#[derive(Serialize, Deserialize)]
struct TransitionDoc {
    to: (u32, u8),
    tau: u32,
    p: f64,
}

impl From<&MarkovDiaryModel> for ModelDoc {
    fn from(m: &MarkovDiaryModel) -> Self {
        let rows = m
            .rows
            .iter()
            .map(|(state, row)| RowDoc {
                state: (state.hour, state.routine as u8),
                transitions: row
                    .iter()
                    .map(|(t, p)| TransitionDoc {
                        to: (t.to.hour, t.to.routine as u8),
                        tau: t.tau,
                        p: *p,
                    })
                    .collect(),
            })
            .collect();
        ModelDoc {
            period: m.period,
            slot_seconds: m.slot_seconds,
            rows,
        }
    }
}

impl ModelDoc {
    fn into_model(self) -> Result<MarkovDiaryModel> {
        if self.period == 0 {
            return Err(Error::ModelFormat("period must be positive".into()));
        }
        let mut rows = BTreeMap::new();
        for row in self.rows {
            let state = DiaryState::new(row.state.0, row.state.1 != 0);
            let transitions: Vec<(DiaryTransition, f64)> = row
                .transitions
                .into_iter()
                .map(|t| {
                    (
                        DiaryTransition {
                            to: DiaryState::new(t.to.0, t.to.1 != 0),
                            tau: t.tau,
                        },
                        t.p,
                    )
                })
                .collect();
            if rows.insert(state, transitions).is_some() {
                return Err(Error::ModelFormat(format!(
                    "duplicate row for state ({}, {})",
                    row.state.0, row.state.1
                )));
            }
        }
        MarkovDiaryModel::from_rows(rows, self.period, self.slot_seconds)
    }
}
