mod cluster;
mod compare;
mod generate;
mod learn;
mod measure;

use crate::CliError;
use clap::Subcommand;
use ditras::formats;
use ditras::WeightedTessellation;
use std::path::Path;

#[derive(Subcommand)]
pub enum Command {
    /// Learn a Markov diary model from raw time-stamped records.
    Learn(learn::LearnArgs),
    /// Generate synthetic trajectories for a population of agents.
    Generate(generate::GenerateArgs),
    /// Compute mobility-measure distributions of a trajectory file.
    Measure(measure::MeasureArgs),
    /// Score model trajectory files against a reference on all measures.
    Compare(compare::CompareArgs),
    /// Cluster typical weeks extracted from abstract trajectories.
    Cluster(cluster::ClusterArgs),
}

pub fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Learn(args) => learn::run(args),
        Command::Generate(args) => generate::run(args),
        Command::Measure(args) => measure::run(args),
        Command::Compare(args) => compare::run(args),
        Command::Cluster(args) => cluster::run(args),
    }
}

/// Load a tessellation, optionally merging coincident centroids first.
pub(crate) fn load_tessellation(
    path: &Path,
    planar: bool,
    merge_coincident: bool,
) -> Result<WeightedTessellation, CliError> {
    let t = formats::read_tessellation_csv(path, planar)?;
    if merge_coincident {
        let (merged, absorbed) = t.merge_coincident()?;
        if absorbed > 0 {
            eprintln!("merged {absorbed} coincident locations");
        }
        Ok(merged)
    } else {
        Ok(t)
    }
}

pub(crate) fn ensure_out_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir)?;
    Ok(())
}

/// The run's seed: the explicit one, or a fresh OS-entropy draw (always
/// recorded in the manifest; printed so the run can be reproduced).
pub(crate) fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let s: u64 = rand::random();
            eprintln!("no --seed given; drew {s}");
            s
        }
    }
}
