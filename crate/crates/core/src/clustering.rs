//! Routine analysis: typical weeks, edit distance, density-based
//! clustering and silhouette scoring.

use crate::error::{Error, Result};
use crate::ingestion::{AbstractLocation, AbstractTrajectory};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Hours in a week.
pub const WEEK_HOURS: usize = 168;

/// One individual's typical week: 168 hourly slots, each holding the modal
/// abstract location at that hour of the week.
///
/// Slots are canonicalized: ids are relabeled in first-appearance order, so
/// two users with the same *shape* of routine compare as identical even
/// though their raw per-user ids are arbitrary.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypicalWeek {
    pub user: u64,
    pub slots: Vec<AbstractLocation>,
}

impl TypicalWeek {
    /// Build directly from a 168-slot sequence (test fixtures, external
    /// sources); canonicalizes the alphabet.
    pub fn from_slots(user: u64, slots: Vec<AbstractLocation>) -> Result<Self> {
        if slots.len() != WEEK_HOURS {
            return Err(Error::InsufficientHistory {
                got: slots.len(),
                need: WEEK_HOURS,
            });
        }
        Ok(Self {
            user,
            slots: canonicalize(&slots),
        })
    }
}

fn canonicalize(slots: &[AbstractLocation]) -> Vec<AbstractLocation> {
    let mut map: BTreeMap<AbstractLocation, AbstractLocation> = BTreeMap::new();
    let mut next = 0;
    slots
        .iter()
        .map(|&s| {
            *map.entry(s).or_insert_with(|| {
                let id = next;
                next += 1;
                id
            })
        })
        .collect()
}

/// Extract the typical week of an hourly trajectory spanning at least one
/// week: per hour-of-week, the modal location across all observed weeks,
/// ties broken by overall frequency then smaller id.
pub fn extract_typical_week(traj: &AbstractTrajectory) -> Result<TypicalWeek> {
    if traj.slot_seconds != 3600 {
        return Err(Error::ConfigMismatch(format!(
            "typical weeks need hourly slots, got {} s",
            traj.slot_seconds
        )));
    }
    if traj.slots.len() < WEEK_HOURS {
        return Err(Error::InsufficientHistory {
            got: traj.slots.len(),
            need: WEEK_HOURS,
        });
    }
    let mut overall: BTreeMap<AbstractLocation, u64> = BTreeMap::new();
    for &l in &traj.slots {
        *overall.entry(l).or_insert(0) += 1;
    }
    let offset = traj.start_slot_epoch.div_euclid(3600);
    let mut per_hour: Vec<BTreeMap<AbstractLocation, u64>> = vec![BTreeMap::new(); WEEK_HOURS];
    for (i, &l) in traj.slots.iter().enumerate() {
        let h = (offset + i as i64).rem_euclid(WEEK_HOURS as i64) as usize;
        *per_hour[h].entry(l).or_insert(0) += 1;
    }
    let slots: Vec<AbstractLocation> = per_hour
        .iter()
        .map(|counts| {
            let mut best: Option<(u64, u64, AbstractLocation)> = None;
            for (&id, &c) in counts {
                let key = (c, overall[&id]);
                // Strict > keeps the smaller id (ascending iteration) on ties.
                if best.is_none_or(|(bc, bo, _)| key > (bc, bo)) {
                    best = Some((key.0, key.1, id));
                }
            }
            // A full-week trajectory covers every hour of the week.
            best.expect("every hour of week observed").2
        })
        .collect();
    Ok(TypicalWeek {
        user: traj.user,
        slots: canonicalize(&slots),
    })
}

/// Standard Levenshtein distance (unit costs) between two symbol slices.
pub fn edit_distance(a: &[AbstractLocation], b: &[AbstractLocation]) -> u32 {
    if a.is_empty() {
        return b.len() as u32;
    }
    if b.is_empty() {
        return a.len() as u32;
    }
    let mut prev: Vec<u32> = (0..=b.len() as u32).collect();
    let mut cur = vec![0u32; b.len() + 1];
    for (i, &ca) in a.iter().enumerate() {
        cur[0] = i as u32 + 1;
        for (j, &cb) in b.iter().enumerate() {
            let sub = prev[j] + u32::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Levenshtein distance between two typical weeks (at most 168).
pub fn levenshtein(a: &TypicalWeek, b: &TypicalWeek) -> u32 {
    edit_distance(&a.slots, &b.slots)
}

/// Noise label assigned by [`dbscan`].
pub const NOISE: i32 = -1;

fn pairwise_distances(points: &[TypicalWeek]) -> Vec<u32> {
    let n = points.len();
    let mut d = vec![0u32; n * n];
    let rows: Vec<Vec<u32>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| {
                    if j > i {
                        levenshtein(&points[i], &points[j])
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();
    for (i, row) in rows.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if j > i {
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
    }
    d
}

/// Density-based clustering of typical weeks under the Levenshtein metric.
///
/// Classic core-point expansion in index order: labels are deterministic
/// given the input order. A point's eps-neighborhood includes itself.
/// Returns one label per point, `-1` for noise.
pub fn dbscan(points: &[TypicalWeek], eps: f64, min_pts: usize) -> Vec<i32> {
    assert!(eps >= 0.0 && min_pts >= 1);
    let n = points.len();
    let dist = pairwise_distances(points);
    let neighbors =
        |i: usize| -> Vec<usize> { (0..n).filter(|&j| dist[i * n + j] as f64 <= eps).collect() };

    const UNCLASSIFIED: i32 = -2;
    let mut labels = vec![UNCLASSIFIED; n];
    let mut cluster = 0i32;
    for p in 0..n {
        if labels[p] != UNCLASSIFIED {
            continue;
        }
        let seeds = neighbors(p);
        if seeds.len() < min_pts {
            labels[p] = NOISE;
            continue;
        }
        labels[p] = cluster;
        let mut queue: std::collections::VecDeque<usize> = seeds.into();
        while let Some(q) = queue.pop_front() {
            if labels[q] == NOISE {
                labels[q] = cluster; // border point
            }
            if labels[q] != UNCLASSIFIED {
                continue;
            }
            labels[q] = cluster;
            let qn = neighbors(q);
            if qn.len() >= min_pts {
                queue.extend(qn);
            }
        }
        cluster += 1;
    }
    labels
}

/// Per-point silhouette coefficients under the Levenshtein metric: `None`
/// for noise points, 0 for points in singleton clusters by convention.
/// Requires at least two non-noise clusters.
pub fn silhouette_samples(points: &[TypicalWeek], labels: &[i32]) -> Result<Vec<Option<f64>>> {
    assert_eq!(points.len(), labels.len());
    let clusters: std::collections::BTreeSet<i32> =
        labels.iter().copied().filter(|&l| l >= 0).collect();
    if clusters.len() < 2 {
        return Err(Error::UndefinedSilhouette);
    }
    let n = points.len();
    let dist = pairwise_distances(points);
    let members: BTreeMap<i32, Vec<usize>> = clusters
        .iter()
        .map(|&c| {
            (
                c,
                (0..n).filter(|&i| labels[i] == c).collect::<Vec<usize>>(),
            )
        })
        .collect();

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let li = labels[i];
        if li < 0 {
            out.push(None);
            continue;
        }
        let own = &members[&li];
        if own.len() == 1 {
            out.push(Some(0.0));
            continue;
        }
        let a = own
            .iter()
            .filter(|&&j| j != i)
            .map(|&j| dist[i * n + j] as f64)
            .sum::<f64>()
            / (own.len() - 1) as f64;
        let b = members
            .iter()
            .filter(|(&c, _)| c != li)
            .map(|(_, m)| m.iter().map(|&j| dist[i * n + j] as f64).sum::<f64>() / m.len() as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        out.push(Some(if denom > 0.0 { (b - a) / denom } else { 0.0 }));
    }
    Ok(out)
}

/// Mean silhouette coefficient over non-noise points.
pub fn silhouette(points: &[TypicalWeek], labels: &[i32]) -> Result<f64> {
    let samples = silhouette_samples(points, labels)?;
    let scored: Vec<f64> = samples.into_iter().flatten().collect();
    Ok(scored.iter().sum::<f64>() / scored.len() as f64)
}

/// Index of the cluster's medoid: the member minimizing the summed
/// distance to the other members (ties to the smaller index).
pub fn medoid(points: &[TypicalWeek], labels: &[i32], cluster: i32) -> Option<usize> {
    let members: Vec<usize> = (0..points.len())
        .filter(|&i| labels[i] == cluster)
        .collect();
    members
        .iter()
        .min_by_key(|&&i| {
            members
                .iter()
                .map(|&j| levenshtein(&points[i], &points[j]) as u64)
                .sum::<u64>()
        })
        .copied()
}

/// Each point's distance to its `k`-th nearest neighbor (self excluded),
/// sorted ascending. The sorted profile is the usual aid for picking the
/// clustering radius: look for the elbow.
pub fn knee_profile(points: &[TypicalWeek], k: usize) -> Result<Vec<f64>> {
    let n = points.len();
    if n <= k {
        return Err(Error::InsufficientPoints { got: n, k });
    }
    let dist = pairwise_distances(points);
    let mut out: Vec<f64> = (0..n)
        .map(|i| {
            let mut ds: Vec<u32> = (0..n)
                .filter(|&j| j != i)
                .map(|j| dist[i * n + j])
                .collect();
            ds.sort_unstable();
            ds[k - 1] as f64
        })
        .collect();
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(out)
}
