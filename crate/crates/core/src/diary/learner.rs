//! MDL: learn the Markov diary model from abstract trajectories.

use crate::diary::model::{Counts, DiaryState, DiaryTransition, MarkovDiaryModel};
use crate::error::{Error, Result};
use crate::ingestion::{AbstractLocation, AbstractTrajectory};
use rayon::prelude::*;

/// The typical (routine) diary of one individual.
///
/// The default learner uses the simplest form, a constant home location;
/// per-slot typical diaries are accepted everywhere but not produced by any
/// built-in learner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TypicalDiary {
    /// The same location at every slot.
    Constant(AbstractLocation),
    /// An explicit per-slot location sequence.
    PerSlot(Vec<AbstractLocation>),
}

impl TypicalDiary {
    /// Typical location at `slot`, or `None` past the end of a per-slot diary.
    pub fn location_at(&self, slot: usize) -> Option<AbstractLocation> {
        match self {
            TypicalDiary::Constant(w) => Some(*w),
            TypicalDiary::PerSlot(v) => v.get(slot).copied(),
        }
    }

    /// The constant-home diary of a trajectory: its most frequent abstract
    /// location, ties to the smaller id.
    pub fn most_frequent_home(traj: &AbstractTrajectory) -> Self {
        let mut counts = std::collections::BTreeMap::new();
        for &loc in &traj.slots {
            *counts.entry(loc).or_insert(0u64) += 1;
        }
        let home = counts
            .iter()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&loc, _)| loc)
            .unwrap_or(0);
        TypicalDiary::Constant(home)
    }
}

/// Length of the maximal run of equal values starting at `from`.
fn run_length(slots: &[AbstractLocation], from: usize) -> usize {
    let v = slots[from];
    slots[from..].iter().take_while(|&&x| x == v).count()
}

/// Scan one trajectory, accumulating the four transition kinds.
///
/// A slot is *typical* when its abstract location equals the typical
/// diary's location there. Every consecutive slot pair is classified:
///
/// - typical -> typical: a routine advance;
/// - typical -> non-typical: a routine break, with `tau` the length of the
///   run of identical locations starting at the next slot;
/// - non-typical -> typical: a return to routine;
/// - non-typical -> a *different* non-typical location: a move between
///   non-typical stays, again with the run length as `tau`. An unchanged
///   location is the continuation of the current stay, not a transition.
///
/// Hours are reduced modulo the period, offset by the trajectory's phase
/// so slot-of-period keeps its wall-clock meaning; runs truncated by the
/// end of the trajectory count with their observed length, and stays
/// longer than the period are recorded at `tau = period`.
fn count_user(traj: &AbstractTrajectory, typical: &TypicalDiary, period: u32) -> Result<Counts> {
    let slots = &traj.slots;
    let n = slots.len();
    let mut counts = Counts::new();
    if n < 2 {
        return Ok(counts);
    }
    let phase = traj.phase(period) as usize;
    let p = period as usize;
    let typ = |i: usize| -> Result<bool> {
        typical
            .location_at(i)
            .map(|w| w == slots[i])
            .ok_or_else(|| {
                Error::ConfigMismatch(format!(
                    "typical diary of user {} shorter than trajectory ({} < {})",
                    traj.user,
                    i,
                    slots.len()
                ))
            })
    };
    let mut bump = |state: DiaryState, t: DiaryTransition| {
        *counts.entry(state).or_default().entry(t).or_insert(0) += 1;
    };

    for s in 0..n - 1 {
        let cur = typ(s)?;
        let nxt = typ(s + 1)?;
        let h = ((phase + s) % p) as u32;
        match (cur, nxt) {
            (true, true) | (false, true) => {
                bump(
                    DiaryState::new(h, cur),
                    DiaryTransition {
                        to: DiaryState::new((h + 1) % period, true),
                        tau: 1,
                    },
                );
            }
            (cur_routine, false) => {
                if !cur_routine && slots[s + 1] == slots[s] {
                    continue; // still in the same stay
                }
                let tau = (run_length(slots, s + 1) as u32).min(period);
                bump(
                    DiaryState::new(h, cur_routine),
                    DiaryTransition {
                        to: DiaryState::new((h + tau) % period, false),
                        tau,
                    },
                );
            }
        }
    }
    Ok(counts)
}

fn merge_counts(mut into: Counts, from: Counts) -> Counts {
    for (state, row) in from {
        let dst = into.entry(state).or_default();
        for (t, c) in row {
            *dst.entry(t).or_insert(0) += c;
        }
    }
    into
}

/// Learn a Markov diary model from a corpus of abstract trajectories.
///
/// `typicals` pairs with `trajectories` index-by-index. All trajectories
/// must share the slot length; `period` is the number of slots per cycle
/// (24 for hourly slots and daily periodicity). Users are processed in
/// parallel; counts merge associatively so the result is deterministic.
pub fn mdl_learn(
    trajectories: &[AbstractTrajectory],
    typicals: &[TypicalDiary],
    period: u32,
) -> Result<MarkovDiaryModel> {
    if trajectories.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if trajectories.len() != typicals.len() {
        return Err(Error::ConfigMismatch(format!(
            "{} trajectories but {} typical diaries",
            trajectories.len(),
            typicals.len()
        )));
    }
    if period == 0 {
        return Err(Error::ConfigMismatch("period must be positive".into()));
    }
    let slot_seconds = trajectories[0].slot_seconds;
    if let Some(t) = trajectories.iter().find(|t| t.slot_seconds != slot_seconds) {
        return Err(Error::ConfigMismatch(format!(
            "user {} has slot length {}, expected {}",
            t.user, t.slot_seconds, slot_seconds
        )));
    }

    let counts = trajectories
        .par_iter()
        .zip(typicals.par_iter())
        .map(|(traj, typical)| count_user(traj, typical, period))
        .try_reduce(Counts::new, |a, b| Ok(merge_counts(a, b)))?;

    Ok(MarkovDiaryModel::from_counts(counts, period, slot_seconds))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn traj(slots: Vec<AbstractLocation>) -> AbstractTrajectory {
        AbstractTrajectory {
            user: 1,
            slot_seconds: 3600,
            start_slot_epoch: 0,
            slots,
        }
    }

    fn get(m: &MarkovDiaryModel, h: u32, r: bool, h2: u32, r2: bool, tau: u32) -> u64 {
        m.counts()
            .get(&DiaryState::new(h, r))
            .and_then(|row| {
                row.get(&DiaryTransition {
                    to: DiaryState::new(h2, r2),
                    tau,
                })
            })
            .copied()
            .unwrap_or(0)
    }

    #[test]
    fn pure_routine_learns_identity_rows() {
        let t = traj(vec![7; 48]);
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(7)], 24).unwrap();
        for h in 0..24 {
            let row = m.row(DiaryState::new(h, true)).unwrap();
            assert_eq!(row.len(), 1);
            let (t, p) = row[0];
            assert_eq!(t.to, DiaryState::new((h + 1) % 24, true));
            assert_eq!(p, 1.0);
        }
    }

    #[test]
    fn hand_trace_period_four() {
        // <w,w,x,x,w> against constant w, P = 4:
        // (0,1)->(1,1); (1,1)->(3,0) tau 2; (3,0)->(0,1).
        let t = traj(vec![0, 0, 1, 1, 0]);
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(0)], 4).unwrap();
        assert_eq!(get(&m, 0, true, 1, true, 1), 1);
        assert_eq!(get(&m, 1, true, 3, false, 2), 1);
        assert_eq!(get(&m, 3, false, 0, true, 1), 1);
        let total: u64 = m.counts().values().flat_map(|r| r.values()).copied().sum();
        assert_eq!(total, 3);
        for s in m.states() {
            let sum: f64 = m.row(s).unwrap().iter().map(|(_, p)| p).sum();
            assert!((sum - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn worked_corpus_trace() {
        // <A,A,A,A,B,B> with home A: three routine advances plus one
        // (3,1)->(5,0) with tau 2.
        let t = traj(vec![0, 0, 0, 0, 1, 1]);
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(0)], 24).unwrap();
        assert_eq!(get(&m, 0, true, 1, true, 1), 1);
        assert_eq!(get(&m, 1, true, 2, true, 1), 1);
        assert_eq!(get(&m, 2, true, 3, true, 1), 1);
        assert_eq!(get(&m, 3, true, 5, false, 2), 1);
    }

    #[test]
    fn mid_stay_start_counts_no_entry_transition() {
        // Starts away from home inside a stay: only the return is observed.
        let t = traj(vec![5, 5, 5, 0]);
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(0)], 24).unwrap();
        assert_eq!(get(&m, 2, false, 3, true, 1), 1);
        let total: u64 = m.counts().values().flat_map(|r| r.values()).copied().sum();
        assert_eq!(total, 1);
    }

    #[test]
    fn consecutive_nontypical_runs_count_separately() {
        // home, x, x, y, home: (0,1)->(2,0) tau2, (2,0)->(3,0) tau1, (3,0)->(0,1).
        let t = traj(vec![0, 1, 1, 2, 0]);
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(0)], 4).unwrap();
        assert_eq!(get(&m, 0, true, 2, false, 2), 1);
        assert_eq!(get(&m, 2, false, 3, false, 1), 1);
        assert_eq!(get(&m, 3, false, 0, true, 1), 1);
    }

    #[test]
    fn stays_longer_than_period_are_capped() {
        let mut slots = vec![0];
        slots.extend(vec![9; 6]); // 6-slot stay, period 4
        slots.push(0);
        let t = traj(slots);
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(0)], 4).unwrap();
        // tau capped at 4: (0,1) -> ((0+4) % 4, 0) = (0,0).
        assert_eq!(get(&m, 0, true, 0, false, 4), 1);
        // Return from the end of the run at slot 6 (hour 6 % 4 = 2).
        assert_eq!(get(&m, 2, false, 3, true, 1), 1);
    }

    #[test]
    fn phase_offsets_hours() {
        // Trajectory starting at 02:00 epoch: slot 0 is hour 2.
        let t = AbstractTrajectory {
            user: 1,
            slot_seconds: 3600,
            start_slot_epoch: 7200,
            slots: vec![4, 4],
        };
        let m = mdl_learn(&[t], &[TypicalDiary::Constant(4)], 24).unwrap();
        assert_eq!(get(&m, 2, true, 3, true, 1), 1);
    }

    #[test]
    fn empty_corpus_is_rejected() {
        assert!(matches!(mdl_learn(&[], &[], 24), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn mismatched_slot_lengths_are_rejected() {
        let a = traj(vec![0, 0]);
        let mut b = traj(vec![0, 0]);
        b.slot_seconds = 60;
        assert!(matches!(
            mdl_learn(
                &[a, b],
                &[TypicalDiary::Constant(0), TypicalDiary::Constant(0)],
                24
            ),
            Err(Error::ConfigMismatch(_))
        ));
    }

    #[test]
    fn most_frequent_home_breaks_ties_low() {
        let t = traj(vec![2, 1, 1, 2, 3]);
        assert_eq!(
            TypicalDiary::most_frequent_home(&t),
            TypicalDiary::Constant(1)
        );
    }
}
