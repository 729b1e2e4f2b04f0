//! `ditras cluster`: typical-week extraction, DBSCAN, silhouette report.

use crate::manifest::ManifestBuilder;
use crate::CliError;
use clap::Args;
use ditras::clustering::{
    dbscan, extract_typical_week, medoid, silhouette_samples, TypicalWeek, NOISE,
};
use ditras::formats;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

#[derive(Args)]
pub struct ClusterArgs {
    /// Abstract trajectory CSV (user_id,slot_index,abstract_location),
    /// hourly slots.
    #[arg(long)]
    pub trajectories: PathBuf,

    /// Neighborhood radius in edit-distance units.
    #[arg(long, default_value_t = 70.0)]
    pub eps: f64,

    /// Minimum neighborhood size (the point itself included) of a core point.
    #[arg(long, default_value_t = 4)]
    pub min_pts: usize,

    #[arg(long)]
    pub out_dir: PathBuf,
}

pub fn run(args: ClusterArgs) -> Result<(), CliError> {
    if args.min_pts == 0 {
        return Err(CliError::Config("min-pts must be at least 1".into()));
    }
    if args.eps < 0.0 {
        return Err(CliError::Config("eps must be non-negative".into()));
    }
    super::ensure_out_dir(&args.out_dir)?;
    let mut manifest = ManifestBuilder::new("cluster");
    manifest.input(&args.trajectories)?;
    manifest
        .param("eps", args.eps)
        .param("min_pts", args.min_pts);

    let trajectories = formats::read_abstract_trajectories_csv(&args.trajectories, 3600)?;
    let mut weeks: Vec<TypicalWeek> = Vec::new();
    let mut skipped_short = 0usize;
    for traj in &trajectories {
        match extract_typical_week(traj) {
            Ok(week) => weeks.push(week),
            Err(ditras::Error::InsufficientHistory { .. }) => skipped_short += 1,
            Err(e) => return Err(e.into()),
        }
    }
    if weeks.is_empty() {
        return Err(CliError::Data(format!(
            "no user covers a full week ({skipped_short} too short)"
        )));
    }
    manifest
        .param("users_clustered", weeks.len())
        .param("users_skipped_short", skipped_short);

    let labels = dbscan(&weeks, args.eps, args.min_pts);
    let silhouettes = silhouette_samples(&weeks, &labels).ok();

    let mut report =
        std::io::BufWriter::new(std::fs::File::create(args.out_dir.join("clusters.csv"))?);
    writeln!(report, "user_id,cluster_label,silhouette")?;
    for (i, week) in weeks.iter().enumerate() {
        let s = silhouettes
            .as_ref()
            .and_then(|v| v[i])
            .map(|s| s.to_string())
            .unwrap_or_default();
        writeln!(report, "{},{},{s}", week.user, labels[i])?;
    }
    report.flush()?;

    let mut sizes: BTreeMap<i32, usize> = BTreeMap::new();
    for &l in &labels {
        *sizes.entry(l).or_insert(0) += 1;
    }
    let clusters: Vec<serde_json::Value> = sizes
        .iter()
        .map(|(&label, &size)| {
            let medoid_week = if label == NOISE {
                None
            } else {
                medoid(&weeks, &labels, label).map(|i| weeks[i].slots.clone())
            };
            serde_json::json!({
                "label": label,
                "size": size,
                "medoid_week": medoid_week,
            })
        })
        .collect();
    let mean_silhouette = silhouettes.map(|v| {
        let scored: Vec<f64> = v.into_iter().flatten().collect();
        scored.iter().sum::<f64>() / scored.len() as f64
    });
    let summary = serde_json::json!({
        "users": weeks.len(),
        "skipped_short": skipped_short,
        "noise": sizes.get(&NOISE).copied().unwrap_or(0),
        "mean_silhouette": mean_silhouette,
        "clusters": clusters,
    });
    std::fs::write(
        args.out_dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).unwrap(),
    )?;
    manifest.write(&args.out_dir)?;
    Ok(())
}
