//! Ideal unimodal-surface simulator.
//!
//! On the ideal surface the distortion of a candidate is its Euclidean
//! distance to the true vector, and exactly zero there. Injecting this
//! oracle into the real search implementations (same memoization, ties and
//! clipping) yields per-position search-point counts for every algorithm
//! and distribution-weighted averages, directly certifying the production
//! search code.

use crate::error::{Error, Result};
use crate::frame::{in_window, MotionVector};
use crate::mvstats::{quarter_fold, ProbabilityTable, QuarterTable};
use crate::search::{run_search, Algorithm, CostOracle};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// A unimodal cost landscape with a unique zero at `true_mv`.
#[derive(Debug, Clone, Copy)]
pub struct IdealSurface {
    pub true_mv: MotionVector,
    pub range: i32,
}

/// Euclidean distance from `candidate` to the surface minimum.
pub fn ideal_cost(surface: IdealSurface, candidate: MotionVector) -> f64 {
    candidate.distance_to(surface.true_mv)
}

impl CostOracle for IdealSurface {
    fn cost(&self, candidate: MotionVector) -> Option<f64> {
        in_window(candidate, self.range).then(|| ideal_cost(*self, candidate))
    }
}

/// Per-position search-point counts over the window, plus the vector each
/// run actually found.
#[derive(Debug, Clone, Serialize)]
pub struct NspMap {
    pub alg: Algorithm,
    pub range: i32,
    /// Quarter maps hold `(range+1)^2` entries for placements `(+dx, +dy)`;
    /// full maps hold `(2*range+1)^2` entries from `-range`.
    pub quarter: bool,
    pub counts: Vec<u32>,
    pub found: Vec<MotionVector>,
}

impl NspMap {
    fn placements(range: i32, quarter: bool) -> Vec<MotionVector> {
        if quarter {
            (0..=range)
                .flat_map(|dy| (0..=range).map(move |dx| MotionVector::new(dx, dy)))
                .collect()
        } else {
            (-range..=range)
                .flat_map(|dy| (-range..=range).map(move |dx| MotionVector::new(dx, dy)))
                .collect()
        }
    }

    pub fn side(&self) -> usize {
        if self.quarter {
            (self.range + 1) as usize
        } else {
            (2 * self.range + 1) as usize
        }
    }

    pub fn count_at(&self, dx: i32, dy: i32) -> u32 {
        let (col, row) = if self.quarter {
            (dx as usize, dy as usize)
        } else {
            ((dx + self.range) as usize, (dy + self.range) as usize)
        };
        self.counts[row * self.side() + col]
    }

    /// Placements where the search did not land exactly on the true vector.
    pub fn misses(&self) -> Vec<(MotionVector, MotionVector)> {
        Self::placements(self.range, self.quarter)
            .into_iter()
            .zip(&self.found)
            .filter(|(truth, got)| *truth != **got)
            .map(|(truth, got)| (truth, *got))
            .collect()
    }

    /// Full-map positions whose count differs from an axis reflection.
    /// Tie-order effects make small asymmetries legitimate, so this is
    /// reporting material rather than an invariant; `None` for quarter maps.
    pub fn axis_asymmetries(&self) -> Option<Vec<(i32, i32)>> {
        if self.quarter {
            return None;
        }
        let mut out = Vec::new();
        for dy in -self.range..=self.range {
            for dx in -self.range..=self.range {
                let c = self.count_at(dx, dy);
                if c != self.count_at(-dx, dy) || c != self.count_at(dx, -dy) {
                    out.push((dx, dy));
                }
            }
        }
        Some(out)
    }

    /// Integer grid CSV, rows dy ascending.
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        let side = self.side();
        for row in 0..side {
            let cells: Vec<String> = (0..side)
                .map(|col| self.counts[row * side + col].to_string())
                .collect();
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Runs `alg` once per true-vector placement of the window (quarter or
/// full); placements are independent and evaluated in parallel.
pub fn nsp_map(alg: Algorithm, range: i32, quarter: bool) -> NspMap {
    let placements = NspMap::placements(range, quarter);
    let results: Vec<(u32, MotionVector)> = placements
        .par_iter()
        .map(|&true_mv| {
            let surface = IdealSurface { true_mv, range };
            let out = run_search(alg, &surface, range);
            (out.nsp, out.mv)
        })
        .collect();
    NspMap {
        alg,
        range,
        quarter,
        counts: results.iter().map(|r| r.0).collect(),
        found: results.iter().map(|r| r.1).collect(),
    }
}

/// Entry-wise comparison against a shipped reference map. Returns
/// `(dx, dy, ours, reference)` for each differing quarter-window entry, or
/// `None` when no reference is shipped for the algorithm.
pub fn compare_with_reference(map: &NspMap) -> Option<Vec<(i32, i32, u32, u32)>> {
    use crate::reference_stats as refs;
    if !map.quarter || map.range != 7 {
        return None;
    }
    let table = match map.alg {
        Algorithm::Dcds => refs::IDEAL_NSP_DCDS,
        Algorithm::Ds => refs::IDEAL_NSP_DS,
        Algorithm::Cds => refs::IDEAL_NSP_CDS,
        Algorithm::Ntss => refs::IDEAL_NSP_NTSS,
        _ => return None,
    };
    let mut diffs = Vec::new();
    for dy in 0..=7 {
        for dx in 0..=7 {
            let ours = map.count_at(dx, dy);
            let want = table[dy as usize][dx as usize];
            if ours != want {
                diffs.push((dx, dy, ours, want));
            }
        }
    }
    Some(diffs)
}

/// A labeled partition of the full window with one probability mass per
/// region, distributed uniformly over the region's cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RegionSpec {
    pub range: i32,
    pub regions: Vec<Region>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Region {
    pub label: String,
    pub mass: f64,
    pub cells: Vec<(i32, i32)>,
}

impl RegionSpec {
    pub fn from_json_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let spec: RegionSpec =
            serde_json::from_reader(r).map_err(|e| Error::RegionFile(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    /// The partition must tile the window exactly and carry non-negative
    /// masses with positive total.
    pub fn validate(&self) -> Result<()> {
        let side = (2 * self.range + 1) as usize;
        let mut seen = vec![false; side * side];
        for region in &self.regions {
            if region.mass < 0.0 || !region.mass.is_finite() {
                return Err(Error::RegionFile(format!(
                    "region '{}' has an invalid mass",
                    region.label
                )));
            }
            for &(dx, dy) in &region.cells {
                if !in_window(MotionVector::new(dx, dy), self.range) {
                    return Err(Error::RegionFile(format!(
                        "region '{}' cell ({dx},{dy}) outside the +/-{} window",
                        region.label, self.range
                    )));
                }
                let i = (dy + self.range) as usize * side + (dx + self.range) as usize;
                if seen[i] {
                    return Err(Error::RegionFile(format!(
                        "cell ({dx},{dy}) assigned to more than one region"
                    )));
                }
                seen[i] = true;
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::RegionFile(
                "regions do not cover the whole window".into(),
            ));
        }
        let total: f64 = self.regions.iter().map(|r| r.mass).sum();
        if total <= 0.0 {
            return Err(Error::RegionFile("total region mass is zero".into()));
        }
        Ok(())
    }

    /// Per-cell weight table implied by the partition.
    pub fn to_table(&self) -> Result<ProbabilityTable> {
        self.validate()?;
        let side = (2 * self.range + 1) as usize;
        let mut cells = vec![0.0f64; side * side];
        for region in &self.regions {
            if region.cells.is_empty() {
                continue;
            }
            let per_cell = region.mass / region.cells.len() as f64;
            for &(dx, dy) in &region.cells {
                cells[(dy + self.range) as usize * side + (dx + self.range) as usize] = per_cell;
            }
        }
        ProbabilityTable::from_weights(self.range, cells)
    }
}

/// A stand-in six-part partition: concentric square rings at center
/// distances 0-1, 2, 3, 4, 5 and 6+. The true region geometry behind the
/// center-biased masses is configurable via a region file; this default is
/// not normative. The default masses are the textbook center-biased split
/// 0.4 / 0.2 / 0.2 / 0.1 / 0.1 / 0.
pub fn default_ring_partition(range: i32) -> RegionSpec {
    let ring = |mv: MotionVector| -> usize {
        let d = mv.dx.abs().max(mv.dy.abs());
        match d {
            0 | 1 => 0,
            2 => 1,
            3 => 2,
            4 => 3,
            5 => 4,
            _ => 5,
        }
    };
    let masses = [0.4, 0.2, 0.2, 0.1, 0.1, 0.0];
    let mut regions: Vec<Region> = masses
        .iter()
        .enumerate()
        .map(|(i, &mass)| Region {
            label: format!("ring{}", i + 1),
            mass,
            cells: Vec::new(),
        })
        .collect();
    for dy in -range..=range {
        for dx in -range..=range {
            let mv = MotionVector::new(dx, dy);
            regions[ring(mv).min(5)].cells.push((dx, dy));
        }
    }
    regions.retain(|r| !r.cells.is_empty());
    RegionSpec { range, regions }
}

/// Weighting scheme for the average number of search points.
pub enum AnspWeights<'a> {
    Uniform,
    /// Full-window per-cell weights; folded automatically for quarter maps.
    Table(&'a ProbabilityTable),
    /// Quarter-window weights; unfolded uniformly for full maps.
    Quarter(&'a QuarterTable),
    Regions(&'a RegionSpec),
}

/// Distribution-weighted average of a search-point map.
pub fn ansp(map: &NspMap, weights: AnspWeights<'_>) -> Result<f64> {
    let side = map.side();
    let w: Vec<f64> = match weights {
        AnspWeights::Uniform => vec![1.0 / (side * side) as f64; side * side],
        AnspWeights::Table(t) => {
            if t.range() != map.range {
                return Err(Error::InvalidArgument(
                    "weight table range differs from the map range".into(),
                ));
            }
            if map.quarter {
                normalized(quarter_fold(t).cells())
            } else {
                t.cells().to_vec()
            }
        }
        AnspWeights::Quarter(q) => {
            if q.range() != map.range {
                return Err(Error::InvalidArgument(
                    "weight table range differs from the map range".into(),
                ));
            }
            if map.quarter {
                normalized(q.cells())
            } else {
                unfold(q)
            }
        }
        AnspWeights::Regions(spec) => {
            if spec.range != map.range {
                return Err(Error::InvalidArgument(
                    "region file range differs from the map range".into(),
                ));
            }
            let t = spec.to_table()?;
            if map.quarter {
                normalized(quarter_fold(&t).cells())
            } else {
                t.cells().to_vec()
            }
        }
    };
    Ok(w.iter()
        .zip(&map.counts)
        .map(|(wi, &n)| wi * n as f64)
        .sum())
}

fn normalized(cells: &[f64]) -> Vec<f64> {
    let total: f64 = cells.iter().sum();
    cells.iter().map(|c| c / total).collect()
}

/// Spreads each quarter cell's mass equally over its 1, 2 or 4 full-window
/// preimages.
fn unfold(q: &QuarterTable) -> Vec<f64> {
    let r = q.range();
    let side = (2 * r + 1) as usize;
    let mut cells = vec![0.0f64; side * side];
    let total = q.total();
    for ady in 0..=r {
        for adx in 0..=r {
            let mut targets = Vec::with_capacity(4);
            for sx in [-1i32, 1] {
                for sy in [-1i32, 1] {
                    let (dx, dy) = (adx * sx, ady * sy);
                    let i = (dy + r) as usize * side + (dx + r) as usize;
                    if !targets.contains(&i) {
                        targets.push(i);
                    }
                }
            }
            let share = q.cell(adx, ady) / total / targets.len() as f64;
            for i in targets {
                cells[i] += share;
            }
        }
    }
    cells
}
