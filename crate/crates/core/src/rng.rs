//! Deterministic RNG streams and weighted sampling.
//!
//! Every stochastic component takes a caller-owned RNG. Agents get
//! independent streams derived from the master seed and the agent index,
//! so a population is reproducible regardless of scheduling order.

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

/// 64-bit fractional golden-ratio constant; spreads consecutive agent
/// indices uniformly across the seed space.
const SEED_MIX: u64 = 0x9e37_79b9_7f4a_7c15;

/// Derive the per-agent RNG stream for `agent_index` under `master_seed`.
pub fn agent_rng(master_seed: u64, agent_index: u64) -> SmallRng {
    SmallRng::seed_from_u64(master_seed ^ agent_index.wrapping_mul(SEED_MIX))
}

/// Sample an index proportionally to `weights`. `total` must equal the sum
/// of all weights (callers usually have it on hand already).
///
/// Returns `None` when no weight is positive. Zero-weight entries are never
/// selected.
pub fn weighted_choice<R: Rng + ?Sized>(
    weights: impl Iterator<Item = f64>,
    total: f64,
    rng: &mut R,
) -> Option<usize> {
    if total.is_nan() || total <= 0.0 {
        return None;
    }
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last_positive = None;
    for (i, w) in weights.enumerate() {
        if w > 0.0 {
            acc += w;
            last_positive = Some(i);
            if u < acc {
                return Some(i);
            }
        }
    }
    // Float rounding can leave u marginally above the accumulated sum.
    last_positive
}
