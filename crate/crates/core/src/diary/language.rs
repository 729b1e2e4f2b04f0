//! The diary token language.
//!
//! A diary is a word over `{1, 0, |}`: `1` marks a slot spent at the
//! typical location, `0` a slot at a non-typical location, and `|` a trip.
//! Runs of equal symbols between separators are stays at a single
//! location, so every location change is marked by exactly one separator;
//! consecutive `0`-runs separated by `|` are *different* non-typical
//! locations. The final run may be left unterminated.

use crate::error::{Error, Result};
use crate::ingestion::AbstractTrajectory;
use serde::{Deserialize, Serialize};

/// One diary symbol.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DiaryToken {
    /// `1`: the individual is at the typical location of the slot.
    Routine,
    /// `0`: the individual is away from the typical location.
    NonRoutine,
    /// `|`: a trip between two different locations.
    Separator,
}

/// True iff `tokens` is a valid diary word.
///
/// Rules: separators never lead the sequence, never appear twice in a row,
/// and two different non-separator symbols never touch (a location change
/// always goes through a separator). The empty sequence is valid, and the
/// last run needs no terminating separator.
pub fn validate_diary(tokens: &[DiaryToken]) -> bool {
    use DiaryToken::*;
    let mut prev: Option<DiaryToken> = None;
    for &t in tokens {
        match (prev, t) {
            (None, Separator) => return false,
            (Some(Separator), Separator) => return false,
            (Some(Routine), NonRoutine) | (Some(NonRoutine), Routine) => return false,
            _ => {}
        }
        prev = Some(t);
    }
    true
}

/// A validated diary: token word plus its slot geometry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MobilityDiary {
    tokens: Vec<DiaryToken>,
    slot_count: usize,
    slot_seconds: u32,
}

impl MobilityDiary {
    /// Wrap a token sequence, rejecting words outside the language.
    pub fn new(tokens: Vec<DiaryToken>, slot_seconds: u32) -> Result<Self> {
        if !validate_diary(&tokens) {
            return Err(Error::InvalidDiary);
        }
        let slot_count = tokens
            .iter()
            .filter(|t| !matches!(t, DiaryToken::Separator))
            .count();
        Ok(Self {
            tokens,
            slot_count,
            slot_seconds,
        })
    }

    pub fn tokens(&self) -> &[DiaryToken] {
        &self.tokens
    }

    /// Number of non-separator tokens, i.e. time slots covered.
    pub fn slot_count(&self) -> usize {
        self.slot_count
    }

    pub fn slot_seconds(&self) -> u32 {
        self.slot_seconds
    }

    /// Render as a compact string, e.g. `11|00|0|1`.
    pub fn to_compact_string(&self) -> String {
        self.tokens
            .iter()
            .map(|t| match t {
                DiaryToken::Routine => '1',
                DiaryToken::NonRoutine => '0',
                DiaryToken::Separator => '|',
            })
            .collect()
    }

    /// Expand into an abstract trajectory: routine slots become `home`,
    /// and every non-routine run gets a fresh abstract location, so
    /// consecutive runs are different locations exactly as the separators
    /// say. Slot 0 is anchored at epoch 0.
    pub fn to_abstract_trajectory(&self, user: u64, home: u32) -> AbstractTrajectory {
        let mut slots = Vec::with_capacity(self.slot_count);
        let mut next_id = home;
        let mut in_run = false;
        for &t in &self.tokens {
            match t {
                DiaryToken::Routine => {
                    slots.push(home);
                    in_run = false;
                }
                DiaryToken::NonRoutine => {
                    if !in_run {
                        in_run = true;
                        next_id += 1;
                    }
                    slots.push(next_id);
                }
                DiaryToken::Separator => {
                    in_run = false;
                }
            }
        }
        AbstractTrajectory {
            user,
            slot_seconds: self.slot_seconds,
            start_slot_epoch: 0,
            slots,
        }
    }

    /// Parse the compact form; the inverse of [`Self::to_compact_string`].
    pub fn from_compact_str(s: &str, slot_seconds: u32) -> Result<Self> {
        let tokens = s
            .chars()
            .map(|c| match c {
                '1' => Ok(DiaryToken::Routine),
                '0' => Ok(DiaryToken::NonRoutine),
                '|' => Ok(DiaryToken::Separator),
                other => Err(Error::DataFormat {
                    line: 0,
                    msg: format!("invalid diary symbol {other:?}"),
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(tokens, slot_seconds)
    }
}
