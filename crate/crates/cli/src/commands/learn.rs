//! `ditras learn`: raw records -> filters -> slot assignment -> MDL.

use crate::manifest::ManifestBuilder;
use crate::CliError;
use clap::Args;
use ditras::diary::{mdl_learn, TypicalDiary};
use ditras::formats;
use ditras::ingestion::{assign_slots, filter_cdr_locations, RawRecord};
use ditras::Error;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Args)]
pub struct LearnArgs {
    /// Raw records CSV (user_id,lat,lon,timestamp).
    #[arg(long)]
    pub records: PathBuf,

    /// Output directory for model.json and manifest.json.
    #[arg(long)]
    pub out_dir: PathBuf,

    /// Time slot length in seconds.
    #[arg(long, default_value_t = 3600)]
    pub slot_seconds: u32,

    /// Slots per period of the Markov model (24 = daily for hourly slots).
    #[arg(long, default_value_t = 24)]
    pub period: u32,

    /// Discard a user's locations with visitation frequency <= this.
    #[arg(long, default_value_t = 0.005)]
    pub min_loc_freq: f64,

    /// Keep users making at least this many calls per hour over the
    /// observation span.
    #[arg(long, default_value_t = 0.5)]
    pub min_call_rate: f64,

    /// Also write the abstract trajectories the model was learned from.
    #[arg(long)]
    pub write_abstract: bool,
}

pub fn run(args: LearnArgs) -> Result<(), CliError> {
    if args.slot_seconds == 0 || args.period == 0 {
        return Err(CliError::Config(
            "slot-seconds and period must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&args.min_loc_freq) {
        return Err(CliError::Config("min-loc-freq must be in [0,1]".into()));
    }
    super::ensure_out_dir(&args.out_dir)?;
    let mut manifest = ManifestBuilder::new("learn");
    manifest.input(&args.records)?;
    manifest
        .param("slot_seconds", args.slot_seconds)
        .param("period", args.period)
        .param("min_loc_freq", args.min_loc_freq)
        .param("min_call_rate", args.min_call_rate)
        .param("write_abstract", args.write_abstract);

    let users = formats::read_raw_records_csv(&args.records)?;
    if users.is_empty() {
        return Err(Error::EmptyCorpus.into());
    }

    // Observation span in fractional days, over the whole dataset.
    let (min_ts, max_ts) = users
        .values()
        .flatten()
        .fold((i64::MAX, i64::MIN), |(lo, hi), r| {
            (lo.min(r.timestamp), hi.max(r.timestamp))
        });
    let span_days = ((max_ts - min_ts).max(1) as f64) / 86_400.0;
    manifest.param("observation_days", span_days);

    let mut trajectories = Vec::new();
    let mut typicals = Vec::new();
    let mut dropped_single_location = 0usize;
    let mut dropped_inactive = 0usize;
    for (user, records) in &users {
        // Per-user location filter on visitation frequency.
        let mut counts: BTreeMap<(u64, u64), u64> = BTreeMap::new();
        for r in records {
            *counts.entry((r.x.to_bits(), r.y.to_bits())).or_insert(0) += 1;
        }
        let filtered = filter_cdr_locations(&counts, args.min_loc_freq);
        if filtered.flagged {
            dropped_single_location += 1;
            continue;
        }
        let kept: Vec<RawRecord> = records
            .iter()
            .filter(|r| filtered.kept.contains_key(&(r.x.to_bits(), r.y.to_bits())))
            .copied()
            .collect();

        // Activity filter on the surviving call volume.
        let rate = kept.len() as f64 / (24.0 * span_days);
        if rate < args.min_call_rate {
            dropped_inactive += 1;
            continue;
        }

        let traj = assign_slots(&kept, args.slot_seconds).map_err(|e| match e {
            Error::EmptyUser(_) => Error::EmptyUser(*user),
            other => other,
        })?;
        typicals.push(TypicalDiary::most_frequent_home(&traj));
        trajectories.push(traj);
    }
    eprintln!(
        "{} users kept ({dropped_single_location} single-location, {dropped_inactive} inactive dropped)",
        trajectories.len()
    );
    manifest
        .param("users_kept", trajectories.len())
        .param("users_dropped_single_location", dropped_single_location)
        .param("users_dropped_inactive", dropped_inactive);

    if trajectories.is_empty() {
        return Err(Error::EmptyCorpus.into());
    }

    let model = mdl_learn(&trajectories, &typicals, args.period)?;
    let json = serde_json::to_string_pretty(&model.to_json()).expect("model is serializable");
    std::fs::write(args.out_dir.join("model.json"), json)?;

    if args.write_abstract {
        formats::write_abstract_trajectories_csv(
            &args.out_dir.join("abstract_trajectories.csv"),
            &trajectories,
        )?;
    }
    manifest.write(&args.out_dir)?;
    Ok(())
}
