//! `ditras compare`: the model-vs-reference scorecard.

use crate::manifest::ManifestBuilder;
use crate::CliError;
use clap::Args;
use ditras::evaluation::scorecard;
use ditras::formats;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct CompareArgs {
    /// Reference trajectory CSV.
    #[arg(long)]
    pub reference: PathBuf,

    /// Model population as name=path; repeatable.
    #[arg(long = "model", value_parser = parse_model, required = true)]
    pub models: Vec<(String, PathBuf)>,

    #[arg(long)]
    pub tessellation: PathBuf,

    #[arg(long)]
    pub planar: bool,

    #[arg(long, default_value_t = 3600)]
    pub slot_seconds: u32,

    #[arg(long)]
    pub out_dir: PathBuf,
}

fn parse_model(s: &str) -> Result<(String, PathBuf), String> {
    match s.split_once('=') {
        Some((name, path)) if !name.is_empty() && !path.is_empty() => {
            Ok((name.to_string(), PathBuf::from(path)))
        }
        _ => Err(format!("expected name=path, got {s:?}")),
    }
}

pub fn run(args: CompareArgs) -> Result<(), CliError> {
    super::ensure_out_dir(&args.out_dir)?;
    let mut manifest = ManifestBuilder::new("compare");
    manifest.input(&args.reference)?;
    manifest.input(&args.tessellation)?;
    for (_, path) in &args.models {
        manifest.input(path)?;
    }
    manifest
        .param("slot_seconds", args.slot_seconds)
        .param("planar", args.planar)
        .param(
            "models",
            args.models
                .iter()
                .map(|(n, p)| format!("{n}={}", p.display()))
                .collect::<Vec<_>>(),
        );

    let tessellation = super::load_tessellation(&args.tessellation, args.planar, false)?;
    let reference = formats::read_sampled_csv(&args.reference, args.slot_seconds)?;
    let models: Vec<(String, Vec<ditras::engine::SampledTrajectory>)> = args
        .models
        .iter()
        .map(|(name, path)| {
            formats::read_sampled_csv(Path::new(path), args.slot_seconds)
                .map(|pop| (name.clone(), pop))
        })
        .collect::<Result<_, _>>()?;

    let report = scorecard(&models, &reference, &tessellation)?;
    std::fs::write(args.out_dir.join("scorecard.csv"), report.to_csv_string())?;
    std::fs::write(args.out_dir.join("scorecard.txt"), report.to_table_string())?;
    manifest.write(&args.out_dir)?;
    Ok(())
}
