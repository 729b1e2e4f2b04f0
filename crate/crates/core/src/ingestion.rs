//! From raw time-stamped records to abstract mobility trajectories.
//!
//! Covers slot assignment (one abstract location per time slot), the CDR
//! activity filters, GPS trip segmentation and tessellation snapping.

use crate::error::{Error, Result};
use crate::tessellation::{LocationId, WeightedTessellation};
use std::collections::BTreeMap;

/// Abstract location: a per-user placeholder id with no geographic meaning,
/// assigned in first-appearance order.
pub type AbstractLocation = u32;

/// One raw observation of one user.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RawRecord {
    pub user: u64,
    pub x: f64,
    pub y: f64,
    pub timestamp: i64,
}

/// Slot-indexed sequence of abstract locations for one user.
///
/// Slot boundaries are aligned to absolute epoch multiples of
/// `slot_seconds`, so `start_slot_epoch` is always a multiple of the slot
/// length; slot `i` covers `[start_slot_epoch + i*t, start_slot_epoch + (i+1)*t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AbstractTrajectory {
    pub user: u64,
    pub slot_seconds: u32,
    pub start_slot_epoch: i64,
    pub slots: Vec<AbstractLocation>,
}

impl AbstractTrajectory {
    /// Hour-of-period of slot 0, used to keep the slot-of-day meaning of
    /// Markov states when a trajectory does not start on a period boundary.
    pub fn phase(&self, period: u32) -> u32 {
        let slots_per_epoch = self.start_slot_epoch.div_euclid(self.slot_seconds as i64);
        slots_per_epoch.rem_euclid(period as i64) as u32
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    a.div_euclid(b)
}

/// Assign one abstract location to every time slot of a single user.
///
/// Per slot: a single visited location wins outright; with several, the one
/// with the most records in the slot wins; ties go to the location with the
/// highest frequency over the user's whole record, then to the smaller
/// abstract id. Slots with no records inherit the previous slot's location;
/// empty slots before the first observation are trimmed.
///
/// `records` must belong to one user and be sorted by timestamp.
pub fn assign_slots(records: &[RawRecord], slot_seconds: u32) -> Result<AbstractTrajectory> {
    assert!(slot_seconds > 0, "slot_seconds must be positive");
    let first = records.first().ok_or(Error::EmptyUser(0))?;
    let user = first.user;
    debug_assert!(
        records.windows(2).all(|w| w[0].timestamp <= w[1].timestamp),
        "records must be sorted by timestamp"
    );

    // Abstract ids in first-appearance order; overall frequency per id.
    let mut by_coord: BTreeMap<(u64, u64), AbstractLocation> = BTreeMap::new();
    let mut overall: Vec<u64> = Vec::new();
    let mut ids = Vec::with_capacity(records.len());
    for r in records {
        let key = (r.x.to_bits(), r.y.to_bits());
        let id = *by_coord.entry(key).or_insert_with(|| {
            overall.push(0);
            (overall.len() - 1) as AbstractLocation
        });
        overall[id as usize] += 1;
        ids.push(id);
    }

    let t = slot_seconds as i64;
    let first_slot = floor_div(records[0].timestamp, t);
    let last_slot = floor_div(records[records.len() - 1].timestamp, t);
    let n_slots = (last_slot - first_slot + 1) as usize;

    // Records per slot.
    let mut per_slot: Vec<Vec<AbstractLocation>> = vec![Vec::new(); n_slots];
    for (r, &id) in records.iter().zip(&ids) {
        let s = (floor_div(r.timestamp, t) - first_slot) as usize;
        per_slot[s].push(id);
    }

    let mut slots = Vec::with_capacity(n_slots);
    let mut prev: AbstractLocation = 0;
    for (i, slot_records) in per_slot.iter().enumerate() {
        let chosen = if slot_records.is_empty() {
            debug_assert!(i > 0, "first slot holds the first record by construction");
            prev
        } else {
            let mut counts: BTreeMap<AbstractLocation, u64> = BTreeMap::new();
            for &id in slot_records {
                *counts.entry(id).or_default() += 1;
            }
            // Most records in slot, then overall frequency, then smaller id.
            // BTreeMap iterates ids ascending, and strict > keeps the first
            // (smallest) id on full ties.
            let mut best = (0u64, 0u64, 0 as AbstractLocation);
            let mut first_pick = true;
            for (&id, &c) in &counts {
                let key = (c, overall[id as usize]);
                if first_pick || key > (best.0, best.1) {
                    best = (key.0, key.1, id);
                    first_pick = false;
                }
            }
            best.2
        };
        slots.push(chosen);
        prev = chosen;
    }

    Ok(AbstractTrajectory {
        user,
        slot_seconds,
        start_slot_epoch: first_slot * t,
        slots,
    })
}

/// Result of the per-user location-frequency filter.
#[derive(Clone, Debug, PartialEq)]
pub struct FilteredLocations<K> {
    /// Locations whose visitation frequency exceeded the threshold.
    pub kept: BTreeMap<K, u64>,
    /// True when at most one location survived: the user carries no
    /// mobility signal and should be discarded.
    pub flagged: bool,
}

/// Drop a user's locations with visitation frequency `n_i / N <= min_freq`.
pub fn filter_cdr_locations<K: Ord + Clone>(
    counts: &BTreeMap<K, u64>,
    min_freq: f64,
) -> FilteredLocations<K> {
    let total: u64 = counts.values().sum();
    let kept: BTreeMap<K, u64> = counts
        .iter()
        .filter(|(_, &n)| total > 0 && (n as f64 / total as f64) > min_freq)
        .map(|(k, &n)| (k.clone(), n))
        .collect();
    let flagged = kept.len() <= 1;
    FilteredLocations { kept, flagged }
}

/// Keep users whose call rate `N / (hours * days)` reaches `min_rate`
/// (inclusive).
pub fn filter_active_users(
    call_counts: &BTreeMap<u64, u64>,
    hours: f64,
    days: f64,
    min_rate: f64,
) -> Vec<u64> {
    assert!(hours > 0.0 && days > 0.0);
    call_counts
        .iter()
        .filter(|(_, &n)| n as f64 / (hours * days) >= min_rate)
        .map(|(&u, _)| u)
        .collect()
}

/// One timestamped GPS observation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GpsPoint {
    pub x: f64,
    pub y: f64,
    pub timestamp: i64,
}

/// A trip extracted from a GPS track: origin and destination points with
/// their times.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trip {
    pub origin: GpsPoint,
    pub destination: GpsPoint,
}

impl Trip {
    pub fn start(&self) -> i64 {
        self.origin.timestamp
    }
    pub fn end(&self) -> i64 {
        self.destination.timestamp
    }
}

/// Split a time-sorted GPS track into trips at stops.
///
/// Whenever the gap between consecutive points exceeds `stop_threshold`
/// seconds, the first point ends a trip and the second starts the next.
/// Fewer than 2 points yield no trips.
pub fn segment_gps_trips(points: &[GpsPoint], stop_threshold: i64) -> Vec<Trip> {
    assert!(stop_threshold > 0);
    if points.len() < 2 {
        return Vec::new();
    }
    let mut trips = Vec::new();
    let mut start = 0usize;
    for i in 1..points.len() {
        if points[i].timestamp - points[i - 1].timestamp > stop_threshold {
            trips.push(Trip {
                origin: points[start],
                destination: points[i - 1],
            });
            start = i;
        }
    }
    trips.push(Trip {
        origin: points[start],
        destination: points[points.len() - 1],
    });
    trips
}

/// Assign a point to the nearest tessellation centroid (ties to smaller id).
pub fn snap_to_tessellation(x: f64, y: f64, t: &WeightedTessellation) -> LocationId {
    t.nearest(x, y)
}

/// Keep vehicles averaging at least `min_trips_per_day` over the
/// observation period. `observation_days` counts calendar days of the
/// whole period, fractional days allowed.
pub fn vehicle_is_active(n_trips: usize, observation_days: f64, min_trips_per_day: f64) -> bool {
    assert!(observation_days > 0.0);
    n_trips as f64 / observation_days >= min_trips_per_day
}
