//! `ditras generate`: run the composition loop for a population.

use crate::manifest::ManifestBuilder;
use crate::CliError;
use clap::{Args, ValueEnum};
use ditras::diary::MarkovDiaryModel;
use ditras::engine::{run_simulation, DiaryKind, SimulationConfig, TrajectoryKind};
use ditras::formats;
use std::path::PathBuf;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DiaryArg {
    Md,
    Rd,
    Wt,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TrajectoryArg {
    Depr,
    Swim,
    Latp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    /// One row per slot: agent_id,slot_index,location_id,lat,lon.
    Full,
    /// Run-length rows: agent_id,start_slot,end_slot,location_id.
    Runs,
}

#[derive(Args)]
pub struct GenerateArgs {
    /// Tessellation CSV (location_id,lat,lon,relevance).
    #[arg(long)]
    pub tessellation: PathBuf,

    /// Interpret tessellation coordinates as planar kilometers
    /// (header location_id,x,y,relevance).
    #[arg(long)]
    pub planar: bool,

    /// Merge coincident tessellation centroids, summing relevances.
    #[arg(long)]
    pub merge_coincident: bool,

    /// Diary generator.
    #[arg(long, value_enum)]
    pub diary: DiaryArg,

    /// Learned model JSON; required with --diary md.
    #[arg(long)]
    pub model: Option<PathBuf>,

    /// Trajectory generator.
    #[arg(long, value_enum)]
    pub trajectory: TrajectoryArg,

    #[arg(long)]
    pub agents: u64,

    #[arg(long)]
    pub slots: usize,

    #[arg(long, default_value_t = 3600)]
    pub slot_seconds: u32,

    /// Master seed; omitted, one is drawn and recorded in the manifest.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Worker threads (0 = all cores). Output is identical for any value.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,

    #[arg(long, value_enum, default_value_t = OutputFormat::Full)]
    pub format: OutputFormat,

    /// d-EPR exploration scale.
    #[arg(long, default_value_t = 0.6)]
    pub rho: f64,

    /// d-EPR exploration exponent.
    #[arg(long, default_value_t = 0.21)]
    pub gamma: f64,

    /// SWIM mixing weight.
    #[arg(long, default_value_t = 0.75)]
    pub alpha: f64,

    /// LATP distance exponent.
    #[arg(long, default_value_t = 1.5)]
    pub latp_exponent: f64,

    /// WT waiting-time exponent (P(dt) ~ dt^(-1-beta) exp(-dt/tau)).
    #[arg(long, default_value_t = 0.8)]
    pub beta: f64,

    /// WT cutoff in hours.
    #[arg(long, default_value_t = 17.0)]
    pub tau_hours: f64,

    /// Output directory for trajectories.csv and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: GenerateArgs) -> Result<(), CliError> {
    if args.agents == 0 || args.slots == 0 {
        return Err(CliError::Config("need at least 1 agent and 1 slot".into()));
    }
    if args.diary == DiaryArg::Md && args.model.is_none() {
        return Err(CliError::Config("--diary md requires --model".into()));
    }
    super::ensure_out_dir(&args.out_dir)?;
    let seed = super::resolve_seed(args.seed);

    let mut manifest = ManifestBuilder::new("generate");
    manifest.input(&args.tessellation)?;
    if let Some(model) = &args.model {
        manifest.input(model)?;
    }
    manifest
        .param("agents", args.agents)
        .param("slots", args.slots)
        .param("slot_seconds", args.slot_seconds)
        .param("planar", args.planar)
        .param("merge_coincident", args.merge_coincident)
        .param("threads", args.threads)
        .param(
            "format",
            match args.format {
                OutputFormat::Full => "full",
                OutputFormat::Runs => "runs",
            },
        )
        .param(
            "diary",
            match args.diary {
                DiaryArg::Md => "md",
                DiaryArg::Rd => "rd",
                DiaryArg::Wt => "wt",
            },
        )
        .param(
            "trajectory",
            match args.trajectory {
                TrajectoryArg::Depr => "depr",
                TrajectoryArg::Swim => "swim",
                TrajectoryArg::Latp => "latp",
            },
        )
        .param("rho", args.rho)
        .param("gamma", args.gamma)
        .param("alpha", args.alpha)
        .param("latp_exponent", args.latp_exponent)
        .param("beta", args.beta)
        .param("tau_hours", args.tau_hours)
        .seed(seed);

    let tessellation =
        super::load_tessellation(&args.tessellation, args.planar, args.merge_coincident)?;

    let model = match &args.model {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let value: serde_json::Value = serde_json::from_str(&text)
                .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
            Some(MarkovDiaryModel::from_json(&value)?)
        }
        None => None,
    };

    let mut config = SimulationConfig::new(
        args.agents,
        args.slots,
        args.slot_seconds,
        match args.diary {
            DiaryArg::Md => DiaryKind::Md,
            DiaryArg::Rd => DiaryKind::Rd,
            DiaryArg::Wt => DiaryKind::Wt,
        },
        match args.trajectory {
            TrajectoryArg::Depr => TrajectoryKind::Depr,
            TrajectoryArg::Swim => TrajectoryKind::Swim,
            TrajectoryArg::Latp => TrajectoryKind::Latp,
        },
        seed,
    );
    config.params.rho = args.rho;
    config.params.gamma = args.gamma;
    config.params.alpha = args.alpha;
    config.params.latp_exponent = args.latp_exponent;
    config.params.wt_beta = args.beta;
    config.params.wt_tau_hours = args.tau_hours;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads)
        .build()
        .map_err(|e| CliError::Config(e.to_string()))?;
    let population = pool.install(|| run_simulation(&config, &tessellation, model.as_ref()))?;

    let out = args.out_dir.join("trajectories.csv");
    match args.format {
        OutputFormat::Full => formats::write_sampled_csv(&out, &population, &tessellation)?,
        OutputFormat::Runs => formats::write_sampled_runs_csv(&out, &population)?,
    }
    manifest.write(&args.out_dir)?;
    Ok(())
}
