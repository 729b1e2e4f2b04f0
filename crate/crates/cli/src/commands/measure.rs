//! `ditras measure`: distribution CSVs plus a summary for one population.

use crate::manifest::ManifestBuilder;
use crate::CliError;
use clap::Args;
use ditras::formats;
use ditras::measures::{self, MeasureKind};
use std::path::PathBuf;

#[derive(Args)]
pub struct MeasureArgs {
    /// Sampled trajectory CSV (full or run-length format).
    #[arg(long)]
    pub trajectories: PathBuf,

    /// Tessellation CSV the trajectories refer to.
    #[arg(long)]
    pub tessellation: PathBuf,

    #[arg(long)]
    pub planar: bool,

    #[arg(long, default_value_t = 3600)]
    pub slot_seconds: u32,

    /// Comma-separated measure names; defaults to all nine.
    #[arg(long, value_delimiter = ',')]
    pub measures: Vec<String>,

    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: MeasureArgs) -> Result<(), CliError> {
    let kinds: Vec<MeasureKind> = if args.measures.is_empty() {
        MeasureKind::ALL.to_vec()
    } else {
        args.measures
            .iter()
            .map(|name| {
                MeasureKind::from_name(name)
                    .ok_or_else(|| CliError::Config(format!("unknown measure {name:?}")))
            })
            .collect::<Result<_, _>>()?
    };
    super::ensure_out_dir(&args.out_dir)?;
    let mut manifest = ManifestBuilder::new("measure");
    manifest.input(&args.trajectories)?;
    manifest.input(&args.tessellation)?;
    manifest
        .param("slot_seconds", args.slot_seconds)
        .param(
            "measures",
            kinds.iter().map(|k| k.name()).collect::<Vec<_>>(),
        )
        .param("planar", args.planar);

    let tessellation = super::load_tessellation(&args.tessellation, args.planar, false)?;
    let population = formats::read_sampled_csv(&args.trajectories, args.slot_seconds)?;
    if population.is_empty() {
        return Err(CliError::Data("no trajectories in input".into()));
    }

    let mut summary = serde_json::Map::new();
    for kind in kinds {
        let samples = measures::measure_samples(kind, &population, &tessellation)?;
        let entry = match measures::population_distribution(kind, &population, &tessellation) {
            Ok(dist) => {
                formats::write_distribution_csv(
                    &args.out_dir.join(format!("{}.csv", kind.name())),
                    &dist,
                )?;
                let mean = samples.iter().sum::<f64>() / samples.len() as f64;
                serde_json::json!({ "samples": samples.len(), "mean": mean })
            }
            // Degenerate population for this measure (say, no trips at
            // all): report it rather than fail the whole run.
            Err(ditras::Error::EmptyDistribution) => {
                serde_json::json!({ "samples": 0, "mean": null })
            }
            Err(e) => return Err(e.into()),
        };
        summary.insert(kind.name().to_string(), entry);
    }
    std::fs::write(
        args.out_dir.join("summary.json"),
        serde_json::to_string_pretty(&serde_json::Value::Object(summary)).unwrap(),
    )?;
    manifest.write(&args.out_dir)?;
    Ok(())
}
