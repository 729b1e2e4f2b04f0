//! Weighted spatial tessellation: the discrete location space.
//!
//! A tessellation is a set of locations, each reduced to its centroid and
//! carrying a non-negative relevance weight (call counts, stop counts,
//! population, ...). It provides distances, relevance-proportional
//! sampling and the gravity probability matrix used by preferential
//! exploration.

use crate::error::{Error, Result};
use crate::rng::weighted_choice;
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Mean Earth radius in kilometers (IUGG).
pub const EARTH_RADIUS_KM: f64 = 6371.0088;

/// Index of a location in the tessellation. Ids are contiguous from 0.
#[derive(
    Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize, Default,
)]
pub struct LocationId(pub u32);

impl std::fmt::Display for LocationId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// How location coordinates are interpreted.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum CoordinateSystem {
    /// `x` = latitude in degrees, `y` = longitude in degrees;
    /// distances are great-circle (haversine) kilometers.
    Geographic,
    /// `x`, `y` in kilometers on a plane; distances are Euclidean.
    Planar,
}

/// One location: centroid coordinates plus relevance weight.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Location {
    pub id: LocationId,
    pub x: f64,
    pub y: f64,
    pub relevance: f64,
}

/// The weighted spatial tessellation.
///
/// Immutable after construction; safe to share across generation workers.
#[derive(Clone, Debug)]
pub struct WeightedTessellation {
    locations: Vec<Location>,
    coordinate_system: CoordinateSystem,
    total_relevance: f64,
}

impl WeightedTessellation {
    /// Validates and builds a tessellation.
    ///
    /// Requirements: at least 2 locations, ids contiguous `0..n` in order,
    /// all relevances finite and non-negative, at least one positive.
    pub fn new(locations: Vec<Location>, coordinate_system: CoordinateSystem) -> Result<Self> {
        if locations.len() < 2 {
            return Err(Error::InvalidTessellation(format!(
                "need at least 2 locations, got {}",
                locations.len()
            )));
        }
        let mut total_relevance = 0.0;
        for (i, loc) in locations.iter().enumerate() {
            if loc.id.0 as usize != i {
                return Err(Error::InvalidTessellation(format!(
                    "ids must be contiguous from 0: position {i} holds id {}",
                    loc.id
                )));
            }
            if !loc.x.is_finite() || !loc.y.is_finite() {
                return Err(Error::InvalidTessellation(format!(
                    "location {} has non-finite coordinates",
                    loc.id
                )));
            }
            if loc.relevance < 0.0 || !loc.relevance.is_finite() {
                return Err(Error::InvalidTessellation(format!(
                    "location {} has invalid relevance {}",
                    loc.id, loc.relevance
                )));
            }
            total_relevance += loc.relevance;
        }
        if total_relevance <= 0.0 {
            return Err(Error::EmptyRelevance);
        }
        Ok(Self {
            locations,
            coordinate_system,
            total_relevance,
        })
    }

    pub fn len(&self) -> usize {
        self.locations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.locations.is_empty()
    }

    pub fn coordinate_system(&self) -> CoordinateSystem {
        self.coordinate_system
    }

    pub fn locations(&self) -> &[Location] {
        &self.locations
    }

    pub fn get(&self, id: LocationId) -> Result<&Location> {
        self.locations
            .get(id.0 as usize)
            .ok_or(Error::InvalidLocation {
                id: id.0,
                len: self.locations.len(),
            })
    }

    pub fn relevance(&self, id: LocationId) -> Result<f64> {
        Ok(self.get(id)?.relevance)
    }

    /// Distance between two locations in kilometers.
    ///
    /// Great-circle under [`CoordinateSystem::Geographic`], Euclidean under
    /// [`CoordinateSystem::Planar`]. Symmetric, non-negative, zero iff the
    /// centroids coincide (or `a == b`).
    pub fn distance(&self, a: LocationId, b: LocationId) -> Result<f64> {
        let la = self.get(a)?;
        let lb = self.get(b)?;
        Ok(self.distance_between(la, lb))
    }

    fn distance_between(&self, a: &Location, b: &Location) -> f64 {
        match self.coordinate_system {
            CoordinateSystem::Geographic => haversine_km(a.x, a.y, b.x, b.y),
            CoordinateSystem::Planar => ((a.x - b.x).powi(2) + (a.y - b.y).powi(2)).sqrt(),
        }
    }

    /// Distance from an arbitrary point (same coordinate convention) to a location.
    pub fn distance_to_point(&self, x: f64, y: f64, id: LocationId) -> Result<f64> {
        let l = self.get(id)?;
        Ok(match self.coordinate_system {
            CoordinateSystem::Geographic => haversine_km(x, y, l.x, l.y),
            CoordinateSystem::Planar => ((x - l.x).powi(2) + (y - l.y).powi(2)).sqrt(),
        })
    }

    /// Nearest centroid to the point; ties broken by smaller id.
    pub fn nearest(&self, x: f64, y: f64) -> LocationId {
        let mut best = LocationId(0);
        let mut best_d = f64::INFINITY;
        for loc in &self.locations {
            let d = match self.coordinate_system {
                CoordinateSystem::Geographic => haversine_km(x, y, loc.x, loc.y),
                CoordinateSystem::Planar => ((x - loc.x).powi(2) + (y - loc.y).powi(2)).sqrt(),
            };
            if d < best_d {
                best_d = d;
                best = loc.id;
            }
        }
        best
    }

    /// Draw a location id with probability `r_j / Σ r`.
    pub fn sample_by_relevance<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<LocationId> {
        weighted_choice(
            self.locations.iter().map(|l| l.relevance),
            self.total_relevance,
            rng,
        )
        .map(|i| LocationId(i as u32))
        .ok_or(Error::EmptyRelevance)
    }

    /// Relevance-proportional draw over all locations except `exclude`.
    pub fn sample_by_relevance_excluding<R: Rng + ?Sized>(
        &self,
        exclude: LocationId,
        rng: &mut R,
    ) -> Result<LocationId> {
        let total = self.total_relevance - self.get(exclude)?.relevance;
        weighted_choice(
            self.locations
                .iter()
                .map(|l| if l.id == exclude { 0.0 } else { l.relevance }),
            total,
            rng,
        )
        .map(|i| LocationId(i as u32))
        .ok_or(Error::EmptyRelevance)
    }

    /// Merge locations sharing exact coordinates, summing their relevances.
    ///
    /// The survivor of each group is the smallest id; ids are then
    /// re-indexed contiguously in the survivors' original order. Returns the
    /// merged tessellation and how many locations were absorbed.
    pub fn merge_coincident(&self) -> Result<(WeightedTessellation, usize)> {
        use std::collections::HashMap;
        let mut index: HashMap<(u64, u64), usize> = HashMap::new();
        let mut merged: Vec<Location> = Vec::with_capacity(self.locations.len());
        for loc in &self.locations {
            let key = (loc.x.to_bits(), loc.y.to_bits());
            match index.get(&key) {
                Some(&i) => merged[i].relevance += loc.relevance,
                None => {
                    index.insert(key, merged.len());
                    merged.push(*loc);
                }
            }
        }
        let absorbed = self.locations.len() - merged.len();
        for (i, loc) in merged.iter_mut().enumerate() {
            loc.id = LocationId(i as u32);
        }
        let t = WeightedTessellation::new(merged, self.coordinate_system)?;
        Ok((t, absorbed))
    }
}

/// Great-circle distance in kilometers between two (lat, lon) points in degrees.
pub fn haversine_km(lat1: f64, lon1: f64, lat2: f64, lon2: f64) -> f64 {
    let (phi1, phi2) = (lat1.to_radians(), lat2.to_radians());
    let dphi = (lat2 - lat1).to_radians();
    let dlambda = (lon2 - lon1).to_radians();
    let a = (dphi / 2.0).sin().powi(2) + phi1.cos() * phi2.cos() * (dlambda / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_KM * a.sqrt().min(1.0).asin()
}

/// Trip-probability matrix of the gravity model.
///
/// Entry `(i, j)`, `i != j`, is proportional to `r_i * r_j / d_ij^2`; the
/// whole matrix is normalized so that all entries sum to 1 (global
/// normalization, not row normalization). The diagonal is zero.
#[derive(Clone, Debug)]
pub struct GravityMatrix {
    n: usize,
    probs: Vec<f64>,
}

impl GravityMatrix {
    /// Build the dense matrix from a tessellation.
    ///
    /// Fails with [`Error::DegenerateDistance`] when two distinct locations
    /// share coordinates (the inverse-square weight would be infinite);
    /// use [`WeightedTessellation::merge_coincident`] first if that is
    /// expected in the data.
    pub fn build(t: &WeightedTessellation) -> Result<Self> {
        let n = t.len();
        let locs = t.locations();
        let mut probs = vec![0.0f64; n * n];
        let mut z = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                let d = t.distance_by_index(i, j);
                if d <= 0.0 {
                    return Err(Error::DegenerateDistance {
                        a: i as u32,
                        b: j as u32,
                    });
                }
                let w = locs[i].relevance * locs[j].relevance / (d * d);
                probs[i * n + j] = w;
                probs[j * n + i] = w;
                z += 2.0 * w;
            }
        }
        if z <= 0.0 {
            return Err(Error::EmptyRelevance);
        }
        for p in &mut probs {
            *p /= z;
        }
        Ok(Self { n, probs })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Probability of the directed trip `from -> to`.
    pub fn prob(&self, from: LocationId, to: LocationId) -> f64 {
        self.probs[from.0 as usize * self.n + to.0 as usize]
    }

    /// The (unrenormalized) row of trip probabilities out of `from`.
    pub fn row(&self, from: LocationId) -> &[f64] {
        let i = from.0 as usize * self.n;
        &self.probs[i..i + self.n]
    }

    /// Sum of every entry; 1 up to rounding by construction.
    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

impl WeightedTessellation {
    // Index-based distance for the O(n^2) gravity build, bypassing id
    // validation in the hot loop.
    fn distance_by_index(&self, i: usize, j: usize) -> f64 {
        self.distance_between(&self.locations[i], &self.locations[j])
    }
}

/// Convenience constructor used throughout the tests: planar tessellation
/// from `(x_km, y_km, relevance)` triples.
pub fn planar(points: &[(f64, f64, f64)]) -> Result<WeightedTessellation> {
    let locations = points
        .iter()
        .enumerate()
        .map(|(i, &(x, y, relevance))| Location {
            id: LocationId(i as u32),
            x,
            y,
            relevance,
        })
        .collect();
    WeightedTessellation::new(locations, CoordinateSystem::Planar)
}

/// Geographic tessellation from `(lat, lon, relevance)` triples.
pub fn geographic(points: &[(f64, f64, f64)]) -> Result<WeightedTessellation> {
    let locations = points
        .iter()
        .enumerate()
        .map(|(i, &(x, y, relevance))| Location {
            id: LocationId(i as u32),
            x,
            y,
            relevance,
        })
        .collect();
    WeightedTessellation::new(locations, CoordinateSystem::Geographic)
}
