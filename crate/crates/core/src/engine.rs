//! The composition loop: a diary generator plus a trajectory generator
//! over a tessellation yields sampled trajectories for a population.

use crate::diary::DiaryToken;
use crate::diary::{
    rd_generate, wt_generate_with, DiaryState, MarkovDiaryModel, MobilityDiary, WaitingTimeSampler,
};
use crate::error::{Error, Result};
use crate::rng::agent_rng;
use crate::tessellation::{GravityMatrix, LocationId, WeightedTessellation};
use crate::trajectory::{AgentSpatialState, Depr, Latp, Swim, TrajectoryGenerator};
use rand::rngs::SmallRng;
use rand::Rng;
use rayon::prelude::*;

/// Slot-indexed sequence of physical locations for one agent.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledTrajectory {
    pub agent: u64,
    pub slot_seconds: u32,
    pub slots: Vec<LocationId>,
}

/// A diary source for the engine. Implementations must be deterministic
/// given the RNG stream.
pub trait DiaryGenerator: Sync {
    fn generate(&self, n_slots: usize, rng: &mut SmallRng) -> MobilityDiary;
    fn name(&self) -> &'static str;
}

/// Markov-diary generation starting at home at slot-of-period 0.
pub struct MdDiary<'a> {
    pub model: &'a MarkovDiaryModel,
    pub start: DiaryState,
}

impl<'a> MdDiary<'a> {
    pub fn new(model: &'a MarkovDiaryModel) -> Self {
        Self {
            model,
            start: DiaryState::new(0, true),
        }
    }
}

impl DiaryGenerator for MdDiary<'_> {
    fn generate(&self, n_slots: usize, rng: &mut SmallRng) -> MobilityDiary {
        self.model.generate(n_slots, self.start, rng)
    }
    fn name(&self) -> &'static str {
        "md"
    }
}

/// Perpetual-motion baseline.
pub struct RdDiary {
    pub slot_seconds: u32,
}

impl DiaryGenerator for RdDiary {
    fn generate(&self, n_slots: usize, _rng: &mut SmallRng) -> MobilityDiary {
        rd_generate(n_slots, self.slot_seconds)
    }
    fn name(&self) -> &'static str {
        "rd"
    }
}

/// Waiting-time baseline; the sampler is shared across the population.
pub struct WtDiary {
    pub sampler: WaitingTimeSampler,
}

impl WtDiary {
    pub fn new(beta: f64, tau_hours: f64, slot_seconds: u32) -> Self {
        Self {
            sampler: WaitingTimeSampler::new(beta, tau_hours, slot_seconds),
        }
    }
}

impl DiaryGenerator for WtDiary {
    fn generate(&self, n_slots: usize, rng: &mut SmallRng) -> MobilityDiary {
        wt_generate_with(&self.sampler, n_slots, rng)
    }
    fn name(&self) -> &'static str {
        "wt"
    }
}

/// Which diary generator a simulation uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DiaryKind {
    Md,
    Rd,
    Wt,
}

/// Which trajectory generator a simulation uses.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TrajectoryKind {
    Depr,
    Swim,
    Latp,
}

/// Tunable generator parameters, defaulting to the standard constants.
#[derive(Clone, Copy, Debug)]
pub struct GeneratorParams {
    /// d-EPR exploration scale.
    pub rho: f64,
    /// d-EPR exploration exponent.
    pub gamma: f64,
    /// SWIM distance/relevance mixing weight.
    pub alpha: f64,
    /// LATP distance exponent.
    pub latp_exponent: f64,
    /// WT waiting-time power-law exponent offset.
    pub wt_beta: f64,
    /// WT exponential cutoff in hours.
    pub wt_tau_hours: f64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        Self {
            rho: 0.6,
            gamma: 0.21,
            alpha: 0.75,
            latp_exponent: 1.5,
            wt_beta: 0.8,
            wt_tau_hours: 17.0,
        }
    }
}

/// Full configuration of one simulation run.
#[derive(Clone, Debug)]
pub struct SimulationConfig {
    pub n_agents: u64,
    pub n_slots: usize,
    pub slot_seconds: u32,
    pub diary: DiaryKind,
    pub trajectory: TrajectoryKind,
    pub params: GeneratorParams,
    pub seed: u64,
    /// How many times a non-routine draw that lands on home is retried
    /// before falling back to the generator's best non-home candidate.
    pub home_resample_limit: u32,
}

impl SimulationConfig {
    pub fn new(
        n_agents: u64,
        n_slots: usize,
        slot_seconds: u32,
        diary: DiaryKind,
        trajectory: TrajectoryKind,
        seed: u64,
    ) -> Self {
        Self {
            n_agents,
            n_slots,
            slot_seconds,
            diary,
            trajectory,
            params: GeneratorParams::default(),
            seed,
            home_resample_limit: 16,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_agents < 1 {
            return Err(Error::ConfigMismatch("n_agents must be >= 1".into()));
        }
        if self.n_slots < 1 {
            return Err(Error::ConfigMismatch("n_slots must be >= 1".into()));
        }
        if self.slot_seconds == 0 {
            return Err(Error::ConfigMismatch(
                "slot_seconds must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Map every abstract location of a typical diary to a physical location,
/// relevance-proportionally; identical abstract locations share one draw.
///
/// Abstract locations are materialized in first-appearance order, so the
/// mapping is deterministic for a fixed RNG stream.
pub fn materialize_typical_diary<R: Rng + ?Sized>(
    typical_slots: &[u32],
    t: &WeightedTessellation,
    rng: &mut R,
) -> Result<Vec<LocationId>> {
    let mut mapping: std::collections::BTreeMap<u32, LocationId> = Default::default();
    let mut out = Vec::with_capacity(typical_slots.len());
    for &w in typical_slots {
        let phys = match mapping.get(&w) {
            Some(&p) => p,
            None => {
                let p = t.sample_by_relevance(rng)?;
                mapping.insert(w, p);
                p
            }
        };
        out.push(phys);
    }
    Ok(out)
}

/// Generate one agent's sampled trajectory from a diary.
///
/// Routine slots emit the agent's home; each non-routine run triggers one
/// trajectory-generator call whose choice fills the whole run. The chosen
/// location must differ from home: draws landing on home are retried up to
/// `home_resample_limit` times, then replaced by the generator's
/// highest-weight non-home candidate.
fn roll_out_diary<T: TrajectoryGenerator + ?Sized>(
    agent: u64,
    diary: &MobilityDiary,
    home: LocationId,
    traj_gen: &T,
    home_resample_limit: u32,
    rng: &mut SmallRng,
) -> Result<SampledTrajectory> {
    let mut state = AgentSpatialState::start_at_home(home);
    let mut slots: Vec<LocationId> = Vec::with_capacity(diary.slot_count());
    let tokens = diary.tokens();
    let mut i = 0usize;
    while i < tokens.len() {
        match tokens[i] {
            DiaryToken::Separator => {
                i += 1;
            }
            DiaryToken::Routine => {
                slots.push(home);
                state.record_stay(home, 1);
                i += 1;
            }
            DiaryToken::NonRoutine => {
                let mut run = 0usize;
                while i + run < tokens.len() && tokens[i + run] == DiaryToken::NonRoutine {
                    run += 1;
                }
                let chosen = choose_non_home(
                    agent,
                    slots.len(),
                    &state,
                    home,
                    traj_gen,
                    home_resample_limit,
                    rng,
                )?;
                for _ in 0..run {
                    slots.push(chosen);
                }
                state.record_stay(chosen, run as u64);
                i += run;
            }
        }
    }
    Ok(SampledTrajectory {
        agent,
        slot_seconds: diary.slot_seconds(),
        slots,
    })
}

fn choose_non_home<T: TrajectoryGenerator + ?Sized>(
    agent: u64,
    slot: usize,
    state: &AgentSpatialState,
    home: LocationId,
    traj_gen: &T,
    home_resample_limit: u32,
    rng: &mut SmallRng,
) -> Result<LocationId> {
    let wrap = |e: Error| Error::Generation {
        agent,
        slot,
        source: Box::new(e),
    };
    for _ in 0..=home_resample_limit {
        let l = traj_gen.next_location(state, rng).map_err(wrap)?;
        if l != home {
            return Ok(l);
        }
    }
    traj_gen
        .best_candidate(state, &[home])
        .ok_or_else(|| wrap(Error::EmptyRelevance))
}

/// Run the full composition loop for a population.
///
/// Each agent draws its own RNG stream from the master seed, so output is
/// reproducible and identical under any worker-thread count. The typical
/// diary is the constant home location, materialized per agent by
/// relevance.
pub fn run_ditras<D, T>(
    diary_gen: &D,
    traj_gen: &T,
    t: &WeightedTessellation,
    config: &SimulationConfig,
) -> Result<Vec<SampledTrajectory>>
where
    D: DiaryGenerator + ?Sized,
    T: TrajectoryGenerator + ?Sized,
{
    config.validate()?;
    (0..config.n_agents)
        .into_par_iter()
        .map(|agent| {
            let mut rng = agent_rng(config.seed, agent);
            let home = materialize_typical_diary(&[0], t, &mut rng)?[0];
            let diary = diary_gen.generate(config.n_slots, &mut rng);
            roll_out_diary(
                agent,
                &diary,
                home,
                traj_gen,
                config.home_resample_limit,
                &mut rng,
            )
        })
        .collect()
}

/// Build the configured generators and run the simulation. The Markov
/// model is required for [`DiaryKind::Md`] and must agree with the
/// configured slot length.
pub fn run_simulation(
    config: &SimulationConfig,
    t: &WeightedTessellation,
    md_model: Option<&MarkovDiaryModel>,
) -> Result<Vec<SampledTrajectory>> {
    config.validate()?;
    let gravity;
    let traj_gen: Box<dyn TrajectoryGenerator> = match config.trajectory {
        TrajectoryKind::Depr => {
            gravity = GravityMatrix::build(t)?;
            Box::new(Depr::new(
                &gravity,
                t,
                config.params.rho,
                config.params.gamma,
            )?)
        }
        TrajectoryKind::Swim => Box::new(Swim::new(t, config.params.alpha)?),
        TrajectoryKind::Latp => Box::new(Latp::new(t, config.params.latp_exponent)?),
    };
    let diary_gen: Box<dyn DiaryGenerator> = match config.diary {
        DiaryKind::Md => {
            let model = md_model
                .ok_or_else(|| Error::ConfigMismatch("MD diary requires a learned model".into()))?;
            if model.slot_seconds() != config.slot_seconds {
                return Err(Error::ConfigMismatch(format!(
                    "model slot length {} differs from configured {}",
                    model.slot_seconds(),
                    config.slot_seconds
                )));
            }
            Box::new(MdDiary::new(model))
        }
        DiaryKind::Rd => Box::new(RdDiary {
            slot_seconds: config.slot_seconds,
        }),
        DiaryKind::Wt => Box::new(WtDiary::new(
            config.params.wt_beta,
            config.params.wt_tau_hours,
            config.slot_seconds,
        )),
    };
    run_ditras(diary_gen.as_ref(), traj_gen.as_ref(), t, config)
}
