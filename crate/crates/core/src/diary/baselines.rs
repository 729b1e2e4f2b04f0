//! Baseline diary generators: RD (perpetual motion) and WT (power-law
//! waiting times with exponential cutoff).

use crate::diary::language::{DiaryToken, MobilityDiary};
use rand::Rng;

/// Random Diary: one trip every slot. `N = 3` yields `0|0|0|`.
pub fn rd_generate(n_slots: usize, slot_seconds: u32) -> MobilityDiary {
    assert!(n_slots >= 1);
    let mut tokens = Vec::with_capacity(2 * n_slots);
    for _ in 0..n_slots {
        tokens.push(DiaryToken::NonRoutine);
        tokens.push(DiaryToken::Separator);
    }
    MobilityDiary::new(tokens, slot_seconds).expect("RD output is always valid")
}

/// Inverse-transform sampler for waiting times distributed as
/// `P(dt) ~ dt^(-1-beta) * exp(-dt / tau)`, truncated to
/// `[1 slot, 7 days]`.
///
/// The CDF is discretized on a log-spaced grid and integrated with the
/// trapezoid rule; sampling inverts it with a binary search plus linear
/// interpolation inside the segment.
#[derive(Clone, Debug)]
pub struct WaitingTimeSampler {
    grid: Vec<f64>,
    cdf: Vec<f64>,
    slot_seconds: u32,
}

const WT_GRID_POINTS: usize = 4096;
const WT_MAX_SECONDS: f64 = 7.0 * 86_400.0;

impl WaitingTimeSampler {
    pub fn new(beta: f64, tau_hours: f64, slot_seconds: u32) -> Self {
        assert!(beta > 0.0 && tau_hours > 0.0 && slot_seconds > 0);
        let tau_s = tau_hours * 3600.0;
        let lo = slot_seconds as f64;
        let hi = WT_MAX_SECONDS.max(lo * 2.0);
        let density = |x: f64| x.powf(-1.0 - beta) * (-x / tau_s).exp();

        let log_lo = lo.ln();
        let step = (hi.ln() - log_lo) / (WT_GRID_POINTS - 1) as f64;
        let grid: Vec<f64> = (0..WT_GRID_POINTS)
            .map(|i| (log_lo + step * i as f64).exp())
            .collect();
        let mut cdf = vec![0.0; WT_GRID_POINTS];
        for i in 1..WT_GRID_POINTS {
            let (a, b) = (grid[i - 1], grid[i]);
            cdf[i] = cdf[i - 1] + 0.5 * (density(a) + density(b)) * (b - a);
        }
        let total = cdf[WT_GRID_POINTS - 1];
        for c in &mut cdf {
            *c /= total;
        }
        Self {
            grid,
            cdf,
            slot_seconds,
        }
    }

    /// Draw one waiting time in seconds.
    pub fn sample_seconds<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>();
        let i = self.cdf.partition_point(|&c| c < u).max(1);
        let (c0, c1) = (self.cdf[i - 1], self.cdf[i]);
        let (x0, x1) = (self.grid[i - 1], self.grid[i]);
        if c1 > c0 {
            x0 + (x1 - x0) * (u - c0) / (c1 - c0)
        } else {
            x0
        }
    }

    /// Draw one stay length in whole slots (at least 1).
    pub fn sample_slots<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let dt = self.sample_seconds(rng);
        ((dt / self.slot_seconds as f64).round() as usize).max(1)
    }
}

/// Waiting-time diary: separator-terminated non-routine runs whose lengths
/// follow the truncated power law; the final run is cut at `n_slots`.
pub fn wt_generate<R: Rng + ?Sized>(
    n_slots: usize,
    beta: f64,
    tau_hours: f64,
    slot_seconds: u32,
    rng: &mut R,
) -> MobilityDiary {
    let sampler = WaitingTimeSampler::new(beta, tau_hours, slot_seconds);
    wt_generate_with(&sampler, n_slots, rng)
}

/// Same as [`wt_generate`] but reusing a prebuilt sampler (the engine
/// shares one across the whole population).
pub fn wt_generate_with<R: Rng + ?Sized>(
    sampler: &WaitingTimeSampler,
    n_slots: usize,
    rng: &mut R,
) -> MobilityDiary {
    assert!(n_slots >= 1);
    let mut tokens = Vec::with_capacity(n_slots + n_slots / 2);
    let mut emitted = 0usize;
    while emitted < n_slots {
        let run = sampler.sample_slots(rng).min(n_slots - emitted);
        for _ in 0..run {
            tokens.push(DiaryToken::NonRoutine);
        }
        tokens.push(DiaryToken::Separator);
        emitted += run;
    }
    MobilityDiary::new(tokens, sampler.slot_seconds).expect("WT output is always valid")
}
