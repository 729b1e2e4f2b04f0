//! CSV interchange formats.
//!
//! All readers are hand-rolled line parsers so malformed rows can be
//! reported with their 1-based line number (header included). Writers emit
//! deterministic bytes: floats use Rust's shortest-roundtrip formatting.

use crate::engine::SampledTrajectory;
use crate::error::{Error, Result};
use crate::ingestion::{AbstractTrajectory, RawRecord};
use crate::tessellation::{CoordinateSystem, Location, LocationId, WeightedTessellation};
use std::collections::BTreeMap;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

fn bad(line: usize, msg: impl Into<String>) -> Error {
    Error::DataFormat {
        line,
        msg: msg.into(),
    }
}

fn parse<T: std::str::FromStr>(field: &str, line: usize, what: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| bad(line, format!("cannot parse {what} from {field:?}")))
}

fn open_lines(path: &Path) -> Result<impl Iterator<Item = std::io::Result<String>>> {
    let file = std::fs::File::open(path)?;
    Ok(BufReader::new(file).lines())
}

/// Read a tessellation CSV.
///
/// Header `location_id,lat,lon,relevance` (geographic) or
/// `location_id,x,y,relevance` with `planar = true`. Ids must be
/// contiguous from 0 in file order.
pub fn read_tessellation_csv(path: &Path, planar: bool) -> Result<WeightedTessellation> {
    let expected = if planar {
        "location_id,x,y,relevance"
    } else {
        "location_id,lat,lon,relevance"
    };
    let mut lines = open_lines(path)?;
    let header = lines
        .next()
        .ok_or_else(|| bad(1, "empty tessellation file"))??;
    if header.trim() != expected {
        return Err(bad(
            1,
            format!("expected header {expected:?}, got {header:?}"),
        ));
    }
    let mut locations = Vec::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(
                line_no,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let id: u32 = parse(fields[0], line_no, "location_id")?;
        if id as usize != locations.len() {
            return Err(bad(
                line_no,
                format!(
                    "ids must be contiguous from 0; expected {}, got {id}",
                    locations.len()
                ),
            ));
        }
        locations.push(Location {
            id: LocationId(id),
            x: parse(fields[1], line_no, "coordinate")?,
            y: parse(fields[2], line_no, "coordinate")?,
            relevance: parse(fields[3], line_no, "relevance")?,
        });
    }
    let system = if planar {
        CoordinateSystem::Planar
    } else {
        CoordinateSystem::Geographic
    };
    WeightedTessellation::new(locations, system)
}

/// Write a tessellation CSV (inverse of [`read_tessellation_csv`]).
pub fn write_tessellation_csv(path: &Path, t: &WeightedTessellation) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    let header = match t.coordinate_system() {
        CoordinateSystem::Geographic => "location_id,lat,lon,relevance",
        CoordinateSystem::Planar => "location_id,x,y,relevance",
    };
    writeln!(w, "{header}")?;
    for loc in t.locations() {
        writeln!(w, "{},{},{},{}", loc.id, loc.x, loc.y, loc.relevance)?;
    }
    w.flush()?;
    Ok(())
}

/// Read raw records grouped per user, each user's records sorted by
/// timestamp (stable, so equal timestamps keep file order).
/// Header: `user_id,lat,lon,timestamp`.
pub fn read_raw_records_csv(path: &Path) -> Result<BTreeMap<u64, Vec<RawRecord>>> {
    let mut lines = open_lines(path)?;
    // A zero-byte file is an empty corpus, not a malformed one.
    let header = match lines.next() {
        None => return Ok(BTreeMap::new()),
        Some(h) => h?,
    };
    if header.trim() != "user_id,lat,lon,timestamp" {
        return Err(bad(
            1,
            format!("expected header \"user_id,lat,lon,timestamp\", got {header:?}"),
        ));
    }
    let mut users: BTreeMap<u64, Vec<RawRecord>> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(bad(
                line_no,
                format!("expected 4 fields, got {}", fields.len()),
            ));
        }
        let user: u64 = parse(fields[0], line_no, "user_id")?;
        users.entry(user).or_default().push(RawRecord {
            user,
            x: parse(fields[1], line_no, "coordinate")?,
            y: parse(fields[2], line_no, "coordinate")?,
            timestamp: parse(fields[3], line_no, "timestamp")?,
        });
    }
    for records in users.values_mut() {
        records.sort_by_key(|r| r.timestamp);
    }
    Ok(users)
}

/// Write abstract trajectories as `user_id,slot_index,abstract_location`.
pub fn write_abstract_trajectories_csv(
    path: &Path,
    trajectories: &[AbstractTrajectory],
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "user_id,slot_index,abstract_location")?;
    for t in trajectories {
        for (i, &loc) in t.slots.iter().enumerate() {
            writeln!(w, "{},{},{}", t.user, i, loc)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Read abstract trajectories written by [`write_abstract_trajectories_csv`].
/// Slot indices per user must be dense and ascending from 0; the slot
/// length is supplied by the caller (the format does not carry it).
pub fn read_abstract_trajectories_csv(
    path: &Path,
    slot_seconds: u32,
) -> Result<Vec<AbstractTrajectory>> {
    let mut lines = open_lines(path)?;
    let header = lines
        .next()
        .ok_or_else(|| bad(1, "empty trajectory file"))??;
    if header.trim() != "user_id,slot_index,abstract_location" {
        return Err(bad(
            1,
            format!("expected header \"user_id,slot_index,abstract_location\", got {header:?}"),
        ));
    }
    let mut users: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(bad(
                line_no,
                format!("expected 3 fields, got {}", fields.len()),
            ));
        }
        let user: u64 = parse(fields[0], line_no, "user_id")?;
        let slot: usize = parse(fields[1], line_no, "slot_index")?;
        let loc: u32 = parse(fields[2], line_no, "abstract_location")?;
        let slots = users.entry(user).or_default();
        if slot != slots.len() {
            return Err(bad(
                line_no,
                format!("user {user}: expected slot {}, got {slot}", slots.len()),
            ));
        }
        slots.push(loc);
    }
    Ok(users
        .into_iter()
        .map(|(user, slots)| AbstractTrajectory {
            user,
            slot_seconds,
            start_slot_epoch: 0,
            slots,
        })
        .collect())
}

/// Write sampled trajectories, one row per slot:
/// `agent_id,slot_index,location_id,lat,lon`.
pub fn write_sampled_csv(
    path: &Path,
    trajectories: &[SampledTrajectory],
    t: &WeightedTessellation,
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "agent_id,slot_index,location_id,lat,lon")?;
    for traj in trajectories {
        for (i, &loc) in traj.slots.iter().enumerate() {
            let l = t.get(loc)?;
            writeln!(w, "{},{},{},{},{}", traj.agent, i, loc, l.x, l.y)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Write sampled trajectories in the compact run-length form:
/// `agent_id,start_slot,end_slot,location_id` (end inclusive).
pub fn write_sampled_runs_csv(path: &Path, trajectories: &[SampledTrajectory]) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "agent_id,start_slot,end_slot,location_id")?;
    for traj in trajectories {
        let mut start = 0usize;
        for i in 0..traj.slots.len() {
            let last = i + 1 == traj.slots.len();
            if last || traj.slots[i + 1] != traj.slots[i] {
                writeln!(w, "{},{},{},{}", traj.agent, start, i, traj.slots[i])?;
                start = i + 1;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Read sampled trajectories in either the full or the run-length format,
/// sniffed from the header. Slot indices per agent must be dense from 0.
pub fn read_sampled_csv(path: &Path, slot_seconds: u32) -> Result<Vec<SampledTrajectory>> {
    let mut lines = open_lines(path)?;
    let header = lines
        .next()
        .ok_or_else(|| bad(1, "empty trajectory file"))??;
    let runs = match header.trim() {
        "agent_id,slot_index,location_id,lat,lon" => false,
        "agent_id,start_slot,end_slot,location_id" => true,
        other => {
            return Err(bad(1, format!("unrecognized trajectory header {other:?}")));
        }
    };
    let mut agents: BTreeMap<u64, Vec<LocationId>> = BTreeMap::new();
    for (i, line) in lines.enumerate() {
        let line_no = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if runs {
            if fields.len() != 4 {
                return Err(bad(
                    line_no,
                    format!("expected 4 fields, got {}", fields.len()),
                ));
            }
            let agent: u64 = parse(fields[0], line_no, "agent_id")?;
            let start: usize = parse(fields[1], line_no, "start_slot")?;
            let end: usize = parse(fields[2], line_no, "end_slot")?;
            let loc: u32 = parse(fields[3], line_no, "location_id")?;
            let slots = agents.entry(agent).or_default();
            if start != slots.len() || end < start {
                return Err(bad(
                    line_no,
                    format!("run [{start},{end}] not dense from {}", slots.len()),
                ));
            }
            slots.extend(std::iter::repeat_n(LocationId(loc), end - start + 1));
        } else {
            if fields.len() != 5 {
                return Err(bad(
                    line_no,
                    format!("expected 5 fields, got {}", fields.len()),
                ));
            }
            let agent: u64 = parse(fields[0], line_no, "agent_id")?;
            let slot: usize = parse(fields[1], line_no, "slot_index")?;
            let loc: u32 = parse(fields[2], line_no, "location_id")?;
            let slots = agents.entry(agent).or_default();
            if slot != slots.len() {
                return Err(bad(
                    line_no,
                    format!("agent {agent}: expected slot {}, got {slot}", slots.len()),
                ));
            }
            slots.push(LocationId(loc));
        }
    }
    Ok(agents
        .into_iter()
        .map(|(agent, slots)| SampledTrajectory {
            agent,
            slot_seconds,
            slots,
        })
        .collect())
}

/// Write a distribution as `bin_left,bin_right,density` rows.
pub fn write_distribution_csv(
    path: &Path,
    dist: &crate::measures::MeasureDistribution,
) -> Result<()> {
    let mut w = BufWriter::new(std::fs::File::create(path)?);
    writeln!(w, "bin_left,bin_right,density")?;
    for (e, d) in dist.edges.windows(2).zip(&dist.densities) {
        writeln!(w, "{},{},{}", e[0], e[1], d)?;
    }
    w.flush()?;
    Ok(())
}
