//! Motion-vector probability statistics.
//!
//! The pipeline starts from full-search motion fields (the "true" vectors),
//! accumulates them into a normalized window distribution, and derives the
//! quarter-folded table, 1-D marginals, regional probabilities, conditional
//! distributions and first-step search efficiencies. Tables serialize to CSV
//! (one row per dy, columns dx ascending, 6 fractional digits) and to JSON.

use crate::error::{Error, Result};
use crate::frame::{in_window, Frame, MotionField, MotionVector, SearchConfig};
use crate::search::{estimate_frame, Algorithm, BlockCostOracle, CostOracle};
use serde::{Deserialize, Serialize};
use std::io::Write;

/// Normalized probability table over the full `(2r+1)^2` search window.
/// Cells are stored row-major with dy as the row coordinate, both axes
/// ascending from `-range`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbabilityTable {
    range: i32,
    cells: Vec<f64>,
}

impl ProbabilityTable {
    /// Builds a table from raw non-negative weights, normalizing the total
    /// mass to 1.
    pub fn from_weights(range: i32, cells: Vec<f64>) -> Result<Self> {
        let side = (2 * range + 1) as usize;
        if range < 1 || cells.len() != side * side {
            return Err(Error::InvalidArgument(format!(
                "expected {} cells for range {range}",
                side * side
            )));
        }
        if cells.iter().any(|&c| c < 0.0 || !c.is_finite()) {
            return Err(Error::InvalidArgument(
                "table cells must be finite and non-negative".into(),
            ));
        }
        let total: f64 = cells.iter().sum();
        if total <= 0.0 {
            return Err(Error::EmptyInput("table has zero total mass".into()));
        }
        let cells = cells.into_iter().map(|c| c / total).collect();
        Ok(Self { range, cells })
    }

    pub fn range(&self) -> i32 {
        self.range
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn cell(&self, dx: i32, dy: i32) -> f64 {
        debug_assert!(in_window(MotionVector::new(dx, dy), self.range));
        let side = (2 * self.range + 1) as usize;
        self.cells[(dy + self.range) as usize * side + (dx + self.range) as usize]
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    /// Sum of the cells at `offsets`.
    pub fn mass_over(&self, offsets: &[MotionVector]) -> f64 {
        offsets.iter().map(|mv| self.cell(mv.dx, mv.dy)).sum()
    }

    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        write_grid_csv(w, self.range, |dx, dy| self.cell(dx, dy))
    }

    pub fn write_json<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        serde_json::to_writer(&mut *w, self)?;
        w.write_all(b"\n")?;
        Ok(())
    }

    pub fn from_json_reader<R: std::io::Read>(r: R) -> Result<Self> {
        let raw: ProbabilityTable = serde_json::from_reader(r)?;
        ProbabilityTable::from_weights(raw.range, raw.cells)
    }
}

/// Quarter-folded table indexed by `(|dx|, |dy|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuarterTable {
    range: i32,
    cells: Vec<f64>,
}

impl QuarterTable {
    pub fn from_cells(range: i32, cells: Vec<f64>) -> Result<Self> {
        let side = (range + 1) as usize;
        if range < 1 || cells.len() != side * side {
            return Err(Error::InvalidArgument(format!(
                "expected {} quarter cells for range {range}",
                side * side
            )));
        }
        Ok(Self { range, cells })
    }

    pub fn range(&self) -> i32 {
        self.range
    }

    pub fn cell(&self, dx: i32, dy: i32) -> f64 {
        debug_assert!((0..=self.range).contains(&dx) && (0..=self.range).contains(&dy));
        self.cells[dy as usize * (self.range + 1) as usize + dx as usize]
    }

    pub fn cells(&self) -> &[f64] {
        &self.cells
    }

    pub fn total(&self) -> f64 {
        self.cells.iter().sum()
    }

    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        for dy in 0..=self.range {
            let row: Vec<String> = (0..=self.range)
                .map(|dx| format!("{:.6}", self.cell(dx, dy)))
                .collect();
            writeln!(w, "{}", row.join(","))?;
        }
        Ok(())
    }
}

fn write_grid_csv<W: Write + ?Sized>(
    w: &mut W,
    range: i32,
    cell: impl Fn(i32, i32) -> f64,
) -> Result<()> {
    for dy in -range..=range {
        let row: Vec<String> = (-range..=range)
            .map(|dx| format!("{:.6}", cell(dx, dy)))
            .collect();
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}

/// Accumulates the motion vectors of full-search fields into a normalized
/// window distribution.
pub fn mv_histogram(fields: &[MotionField], range: i32) -> Result<ProbabilityTable> {
    let side = (2 * range + 1) as usize;
    let mut counts = vec![0.0f64; side * side];
    let mut total = 0usize;
    for field in fields {
        for mv in &field.vectors {
            if !in_window(*mv, range) {
                return Err(Error::InvalidArgument(format!(
                    "vector {mv} outside the +/-{range} window"
                )));
            }
            counts[(mv.dy + range) as usize * side + (mv.dx + range) as usize] += 1.0;
            total += 1;
        }
    }
    if total == 0 {
        return Err(Error::EmptyInput("no motion vectors to accumulate".into()));
    }
    ProbabilityTable::from_weights(range, counts)
}

/// Folds the four quadrants onto `(|dx|, |dy|)`; total mass is preserved.
pub fn quarter_fold(table: &ProbabilityTable) -> QuarterTable {
    let r = table.range();
    let mut cells = vec![0.0f64; ((r + 1) * (r + 1)) as usize];
    for dy in -r..=r {
        for dx in -r..=r {
            cells[(dy.abs() * (r + 1) + dx.abs()) as usize] += table.cell(dx, dy);
        }
    }
    QuarterTable { range: r, cells }
}

/// The four 1-D views of a window distribution: accumulated marginals
/// `Ax`/`Ay` and on-axis slices `Bx`/`By`, each indexed by `d in -range..=range`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Marginals {
    pub range: i32,
    pub ax: Vec<f64>,
    pub ay: Vec<f64>,
    pub bx: Vec<f64>,
    pub by: Vec<f64>,
}

impl Marginals {
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "d,ax,ay,bx,by")?;
        for (i, d) in (-self.range..=self.range).enumerate() {
            writeln!(
                w,
                "{d},{:.6},{:.6},{:.6},{:.6}",
                self.ax[i], self.ay[i], self.bx[i], self.by[i]
            )?;
        }
        Ok(())
    }
}

pub fn marginals(table: &ProbabilityTable) -> Marginals {
    let r = table.range();
    let n = (2 * r + 1) as usize;
    let mut m = Marginals {
        range: r,
        ax: vec![0.0; n],
        ay: vec![0.0; n],
        bx: vec![0.0; n],
        by: vec![0.0; n],
    };
    for d in -r..=r {
        let i = (d + r) as usize;
        for o in -r..=r {
            m.ax[i] += table.cell(d, o);
            m.ay[i] += table.cell(o, d);
        }
        m.bx[i] = table.cell(d, 0);
        m.by[i] = table.cell(0, d);
    }
    m
}

/// Accumulated probabilities of the five central regions used to compare
/// first-step pattern supports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegionalProbs {
    /// 5x5 square: `|dx| <= 2 && |dy| <= 2`.
    pub sq5: f64,
    /// 5x5 diamond: `|dx| + |dy| <= 2`.
    pub diamond5: f64,
    /// 5x5 cross: the two axes out to distance 2.
    pub cross5: f64,
    /// 3x3 square.
    pub sq3: f64,
    /// 5x3 flat diamond: the 7-point horizontal cross support.
    pub flat: f64,
}

pub fn regional_probs(table: &ProbabilityTable) -> Result<RegionalProbs> {
    if table.range() < 2 {
        return Err(Error::InvalidArgument(
            "regional probabilities need range >= 2".into(),
        ));
    }
    let mut p = RegionalProbs {
        sq5: 0.0,
        diamond5: 0.0,
        cross5: 0.0,
        sq3: 0.0,
        flat: 0.0,
    };
    for dy in -2..=2 {
        for dx in -2..=2i32 {
            let c = table.cell(dx, dy);
            if dx.abs() <= 2 && dy.abs() <= 2 {
                p.sq5 += c;
            }
            if dx.abs() + dy.abs() <= 2 {
                p.diamond5 += c;
            }
            if (dy == 0 && dx.abs() <= 2) || (dx == 0 && dy.abs() <= 2) {
                p.cross5 += c;
            }
            if dx.abs() <= 1 && dy.abs() <= 1 {
                p.sq3 += c;
            }
            if (dy == 0 && dx.abs() <= 2) || (dx == 0 && dy.abs() <= 1) {
                p.flat += c;
            }
        }
    }
    Ok(p)
}

/// First-step search efficiency of a pattern over a window distribution:
/// covered probability mass divided by the number of pattern points.
pub fn search_efficiency(table: &ProbabilityTable, pattern: &[MotionVector]) -> Result<f64> {
    if pattern.is_empty() {
        return Err(Error::EmptyInput("empty pattern".into()));
    }
    if pattern.iter().any(|mv| !in_window(*mv, table.range())) {
        return Err(Error::InvalidArgument(
            "pattern offset outside the table window".into(),
        ));
    }
    Ok(table.mass_over(pattern) / pattern.len() as f64)
}

/// Least-squares fit of a window-discretized normal density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalFit {
    pub mu: f64,
    pub sigma: f64,
    /// Sum of squared residuals at the optimum.
    pub residual: f64,
}

/// Fits `N(mu, sigma)` sampled at integer displacements and renormalized
/// over the window to a 1-D distribution of odd length `2r+1`.
///
/// The fit minimizes the unweighted sum of squared differences by a coarse
/// grid scan refined with coordinate golden-section passes; the procedure is
/// deterministic. An input concentrated on a single cell reports that cell
/// as the mean with `sigma = 0`.
pub fn normal_fit(values: &[f64]) -> Result<NormalFit> {
    if values.len() < 3 || values.len().is_multiple_of(2) {
        return Err(Error::InvalidArgument(
            "expected an odd number of samples (2*range+1) >= 3".into(),
        ));
    }
    if values.iter().any(|v| *v < 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument(
            "distribution values must be finite and non-negative".into(),
        ));
    }
    let total: f64 = values.iter().sum();
    if total <= 0.0 {
        return Err(Error::EmptyInput("all-zero distribution".into()));
    }
    let r = (values.len() / 2) as i32;
    let p: Vec<f64> = values.iter().map(|v| v / total).collect();

    let support: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    if support.len() == 1 {
        return Ok(NormalFit {
            mu: (support[0] as i32 - r) as f64,
            sigma: 0.0,
            residual: 0.0,
        });
    }

    let sse = |mu: f64, sigma: f64| -> f64 {
        let mut g = Vec::with_capacity(p.len());
        let mut sum = 0.0;
        for d in -r..=r {
            let z = (d as f64 - mu) / sigma;
            let e = (-0.5 * z * z).exp();
            g.push(e);
            sum += e;
        }
        if sum <= 0.0 {
            return f64::INFINITY;
        }
        g.iter()
            .zip(&p)
            .map(|(gi, pi)| {
                let d = gi / sum - pi;
                d * d
            })
            .sum()
    };

    // Coarse grid over (mu, sigma) to land in the right basin.
    let sigma_grid: Vec<f64> = (0..120)
        .map(|i| 0.02 * ((2.0 * r as f64) / 0.02f64).powf(i as f64 / 119.0))
        .collect();
    let mu_step = r as f64 / 40.0;
    let mu_grid: Vec<f64> = (-40..=40).map(|i| i as f64 * mu_step).collect();
    let mut best: (f64, f64, f64) = (0.0, sigma_grid[0], f64::INFINITY);
    for &sg in &sigma_grid {
        for &mg in &mu_grid {
            let e = sse(mg, sg);
            let better =
                e < best.2 - 1e-18 || ((e - best.2).abs() <= 1e-18 && mg.abs() < best.0.abs());
            if better {
                best = (mg, sg, e);
            }
        }
    }

    let golden = |mut lo: f64, mut hi: f64, f: &dyn Fn(f64) -> f64| -> f64 {
        const PHI: f64 = 0.618_033_988_749_894_8;
        let mut a = hi - PHI * (hi - lo);
        let mut b = lo + PHI * (hi - lo);
        let (mut fa, mut fb) = (f(a), f(b));
        for _ in 0..90 {
            if fa <= fb {
                hi = b;
                b = a;
                fb = fa;
                a = hi - PHI * (hi - lo);
                fa = f(a);
            } else {
                lo = a;
                a = b;
                fa = fb;
                b = lo + PHI * (hi - lo);
                fb = f(b);
            }
        }
        0.5 * (lo + hi)
    };

    // An exactly symmetric input pins the mean at zero and leaves a 1-D
    // problem in sigma.
    let n = p.len();
    if (0..n / 2).all(|i| p[i] == p[n - 1 - i]) {
        let sigma = golden(best.1 / 2.0, best.1 * 2.0, &|sg| sse(0.0, sg));
        return Ok(NormalFit {
            mu: 0.0,
            sigma,
            residual: sse(0.0, sigma),
        });
    }

    // Deterministic Nelder-Mead on (mu, ln sigma); the log keeps sigma
    // positive and evens out the valley curvature.
    let f = |v: [f64; 2]| sse(v[0], v[1].exp());
    let mut simplex = [
        [best.0, best.1.ln()],
        [best.0 + mu_step, best.1.ln()],
        [best.0, best.1.ln() + 0.25],
    ];
    let mut values = simplex.map(f);
    for _ in 0..800 {
        // Order ascending by value.
        let mut idx = [0usize, 1, 2];
        idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = idx.map(|i| simplex[i]);
        values = idx.map(|i| values[i]);
        let diameter = (0..2)
            .map(|d| {
                (simplex[0][d] - simplex[1][d])
                    .abs()
                    .max((simplex[0][d] - simplex[2][d]).abs())
            })
            .fold(0.0f64, f64::max);
        if diameter < 1e-12 {
            break;
        }
        let centroid = [
            0.5 * (simplex[0][0] + simplex[1][0]),
            0.5 * (simplex[0][1] + simplex[1][1]),
        ];
        let reflect = |t: f64| {
            [
                centroid[0] + t * (centroid[0] - simplex[2][0]),
                centroid[1] + t * (centroid[1] - simplex[2][1]),
            ]
        };
        let xr = reflect(1.0);
        let fr = f(xr);
        if fr < values[0] {
            let xe = reflect(2.0);
            let fe = f(xe);
            if fe < fr {
                simplex[2] = xe;
                values[2] = fe;
            } else {
                simplex[2] = xr;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = xr;
            values[2] = fr;
        } else {
            let xc = reflect(-0.5);
            let fc = f(xc);
            if fc < values[2] {
                simplex[2] = xc;
                values[2] = fc;
            } else {
                for i in 1..3 {
                    simplex[i] = [
                        0.5 * (simplex[i][0] + simplex[0][0]),
                        0.5 * (simplex[i][1] + simplex[0][1]),
                    ];
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    let mut idx = [0usize, 1, 2];
    idx.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let (mu, sigma) = (simplex[idx[0]][0], simplex[idx[0]][1].exp());

    Ok(NormalFit {
        mu,
        sigma,
        residual: sse(mu, sigma),
    })
}

/// Per-block observations backing the conditional distributions: the
/// full-search true vector plus the distortions evaluated over the
/// first-step point set `S`. Later queries recompute the step-1 best point
/// from these stored costs instead of touching pixels again.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionalSample {
    pub true_mv: MotionVector,
    /// `(position, cost)` pairs over the feasible part of S, in probe order.
    pub s_costs: Vec<(MotionVector, f64)>,
}

impl ConditionalSample {
    /// Step-1 best point: first strict minimum over the stored order.
    pub fn step1_bmp(&self) -> Option<MotionVector> {
        let mut best: Option<(MotionVector, f64)> = None;
        for &(mv, c) in &self.s_costs {
            if best.is_none_or(|(_, bc)| c < bc) {
                best = Some((mv, c));
            }
        }
        best.map(|(mv, _)| mv)
    }
}

/// Evaluates the point set `S` and the full-search oracle on every block of
/// the frame pair.
pub fn collect_conditional_samples(
    current: &Frame,
    reference: &Frame,
    cfg: &SearchConfig,
    s_points: &[MotionVector],
) -> Result<Vec<ConditionalSample>> {
    if s_points.is_empty() {
        return Err(Error::EmptyInput("empty first-step point set".into()));
    }
    let oracle_field = estimate_frame(Algorithm::Fs, current, reference, cfg)?;
    let bs = cfg.block_size;
    let mut out = Vec::with_capacity(oracle_field.block_count());
    for row in 0..oracle_field.rows {
        for col in 0..oracle_field.cols {
            let origin = (col * bs, row * bs);
            let oracle = BlockCostOracle::new(current, reference, origin, *cfg);
            let s_costs = s_points
                .iter()
                .filter_map(|&mv| oracle.cost(mv).map(|c| (mv, c)))
                .collect();
            out.push(ConditionalSample {
                true_mv: oracle_field.vector(col, row),
                s_costs,
            });
        }
    }
    Ok(out)
}

/// Distribution of the true vector over the window, conditioned on the
/// step-1 best point being `condition`.
pub fn prior_conditional(
    samples: &[ConditionalSample],
    range: i32,
    condition: MotionVector,
) -> Result<ProbabilityTable> {
    let side = (2 * range + 1) as usize;
    let mut counts = vec![0.0f64; side * side];
    let mut n = 0usize;
    for s in samples {
        if s.step1_bmp() == Some(condition) {
            let mv = s.true_mv;
            counts[(mv.dy + range) as usize * side + (mv.dx + range) as usize] += 1.0;
            n += 1;
        }
    }
    if n == 0 {
        return Err(Error::EmptyCondition(format!(
            "no block's first step settled on {condition}"
        )));
    }
    ProbabilityTable::from_weights(range, counts)
}

/// Distribution of the step-1 best point over `S`, conditioned on the true
/// vector lying in `region`.
pub fn posterior_conditional(
    samples: &[ConditionalSample],
    range: i32,
    region: &[MotionVector],
) -> Result<ProbabilityTable> {
    if region.is_empty() {
        return Err(Error::EmptyCondition("empty conditioning region".into()));
    }
    let side = (2 * range + 1) as usize;
    let mut counts = vec![0.0f64; side * side];
    let mut n = 0usize;
    for s in samples {
        if region.contains(&s.true_mv) {
            if let Some(bmp) = s.step1_bmp() {
                counts[(bmp.dy + range) as usize * side + (bmp.dx + range) as usize] += 1.0;
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(Error::EmptyCondition(
            "no block's true vector lies in the region".into(),
        ));
    }
    ProbabilityTable::from_weights(range, counts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn delta_table(range: i32, at: (i32, i32)) -> ProbabilityTable {
        let side = (2 * range + 1) as usize;
        let mut cells = vec![0.0; side * side];
        cells[(at.1 + range) as usize * side + (at.0 + range) as usize] = 1.0;
        ProbabilityTable::from_weights(range, cells).unwrap()
    }

    fn field_of(vectors: Vec<MotionVector>) -> MotionField {
        let n = vectors.len();
        MotionField {
            cols: n,
            rows: 1,
            vectors,
            per_block_cost: vec![0.0; n],
            per_block_nsp: vec![1; n],
        }
    }

    #[test]
    fn histogram_single_vector_is_a_delta() {
        let f = field_of(vec![MotionVector::new(3, -2)]);
        let t = mv_histogram(&[f], 7).unwrap();
        assert_eq!(t.cell(3, -2), 1.0);
        assert!((t.total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn histogram_two_vectors_split_mass() {
        let f = field_of(vec![MotionVector::ZERO, MotionVector::new(2, 0)]);
        let t = mv_histogram(&[f], 7).unwrap();
        assert_eq!(t.cell(0, 0), 0.5);
        assert_eq!(t.cell(2, 0), 0.5);
    }

    #[test]
    fn histogram_rejects_empty_input() {
        assert!(mv_histogram(&[], 7).is_err());
        assert!(mv_histogram(&[field_of(vec![])], 7).is_err());
    }

    #[test]
    fn quarter_fold_merges_symmetric_mass() {
        let side = 15usize;
        let mut cells = vec![0.0; side * side];
        for (dx, dy) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            cells[(dy + 7) as usize * side + (dx + 7) as usize] = 0.25;
        }
        let t = ProbabilityTable::from_weights(7, cells).unwrap();
        let q = quarter_fold(&t);
        assert!((q.cell(1, 1) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quarter_fold_axis_example() {
        let side = 15usize;
        let mut cells = vec![0.0; side * side];
        cells[7 * side + 7] = 0.6;
        cells[7 * side + 5] = 0.3; // (-2, 0)
        cells[7 * side + 9] = 0.1; // (2, 0)
        let t = ProbabilityTable::from_weights(7, cells).unwrap();
        let q = quarter_fold(&t);
        assert!((q.cell(2, 0) - 0.4).abs() < 1e-12);
        assert!((q.cell(0, 0) - 0.6).abs() < 1e-12);
    }

    #[test]
    fn marginals_of_a_delta() {
        let t = delta_table(7, (0, 0));
        let m = marginals(&t);
        assert_eq!(m.ax[7], 1.0);
        assert_eq!(m.ay[7], 1.0);
        assert_eq!(m.bx[7], 1.0);
        assert_eq!(m.by[7], 1.0);
        assert_eq!(m.ax[0], 0.0);
    }

    #[test]
    fn regional_probs_uniform_table_counts_cells() {
        let side = 15usize;
        let t = ProbabilityTable::from_weights(7, vec![1.0; side * side]).unwrap();
        let p = regional_probs(&t).unwrap();
        let u = 1.0 / 225.0;
        assert!((p.sq5 - 25.0 * u).abs() < 1e-12);
        assert!((p.diamond5 - 13.0 * u).abs() < 1e-12);
        assert!((p.cross5 - 9.0 * u).abs() < 1e-12);
        assert!((p.sq3 - 9.0 * u).abs() < 1e-12);
        assert!((p.flat - 7.0 * u).abs() < 1e-12);
    }

    #[test]
    fn regional_probs_delta_at_center_is_all_ones() {
        let p = regional_probs(&delta_table(7, (0, 0))).unwrap();
        for v in [p.sq5, p.diamond5, p.cross5, p.sq3, p.flat] {
            assert_eq!(v, 1.0);
        }
    }

    #[test]
    fn search_efficiency_uniform() {
        let side = 15usize;
        let t = ProbabilityTable::from_weights(7, vec![1.0; side * side]).unwrap();
        let pattern: Vec<MotionVector> =
            crate::patterns::pattern_offsets(crate::patterns::PatternKind::Cross5)
                .iter()
                .map(|p| p.offset)
                .collect();
        let eta = search_efficiency(&t, &pattern).unwrap();
        assert!((eta - 1.0 / 225.0).abs() < 1e-12);
        assert!(search_efficiency(&t, &[]).is_err());
    }

    #[test]
    fn normal_fit_delta_reports_zero_sigma() {
        let mut vals = vec![0.0; 15];
        vals[7] = 1.0;
        let fit = normal_fit(&vals).unwrap();
        assert_eq!(fit.mu, 0.0);
        assert_eq!(fit.sigma, 0.0);
        assert_eq!(fit.residual, 0.0);
    }

    #[test]
    fn normal_fit_symmetric_input_has_zero_mean() {
        let mut vals = vec![0.0; 15];
        for (i, d) in (-7i32..=7).enumerate() {
            vals[i] = (-0.5 * (d as f64 / 1.5).powi(2)).exp();
        }
        let fit = normal_fit(&vals).unwrap();
        assert!(fit.mu.abs() < 1e-9, "mu = {}", fit.mu);
    }

    #[test]
    fn normal_fit_round_trip_recovers_parameters() {
        let (mu, sigma) = (0.0667, 0.206);
        let mut vals = vec![0.0; 15];
        for (i, d) in (-7i32..=7).enumerate() {
            let z = (d as f64 - mu) / sigma;
            vals[i] = (-0.5 * z * z).exp();
        }
        let total: f64 = vals.iter().sum();
        for v in &mut vals {
            *v /= total;
        }
        let fit = normal_fit(&vals).unwrap();
        assert!((fit.mu - mu).abs() < 1e-3, "mu = {}", fit.mu);
        assert!((fit.sigma - sigma).abs() < 1e-3, "sigma = {}", fit.sigma);
    }

    #[test]
    fn conditional_sample_bmp_is_first_strict_minimum() {
        let s = ConditionalSample {
            true_mv: MotionVector::ZERO,
            s_costs: vec![
                (MotionVector::new(0, 0), 5.0),
                (MotionVector::new(1, 0), 5.0),
                (MotionVector::new(2, 0), 3.0),
            ],
        };
        assert_eq!(s.step1_bmp(), Some(MotionVector::new(2, 0)));
    }

    #[test]
    fn prior_conditional_errors_on_unattained_condition() {
        let samples = vec![ConditionalSample {
            true_mv: MotionVector::ZERO,
            s_costs: vec![(MotionVector::ZERO, 0.0)],
        }];
        assert!(prior_conditional(&samples, 7, MotionVector::new(2, 0)).is_err());
    }

    #[test]
    fn posterior_over_whole_window_sums_to_one() {
        let samples: Vec<ConditionalSample> = (0..4)
            .map(|i| ConditionalSample {
                true_mv: MotionVector::new(i % 2, 0),
                s_costs: vec![
                    (MotionVector::new(i % 2, 0), 0.0),
                    (MotionVector::ZERO, 1.0),
                ],
            })
            .collect();
        let window: Vec<MotionVector> = (-7..=7)
            .flat_map(|dy| (-7..=7).map(move |dx| MotionVector::new(dx, dy)))
            .collect();
        let t = posterior_conditional(&samples, 7, &window).unwrap();
        assert!((t.total() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn csv_uses_six_decimals_row_per_dy() {
        let t = delta_table(1, (1, -1));
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(
            text,
            "0.000000,0.000000,1.000000\n0.000000,0.000000,0.000000\n0.000000,0.000000,0.000000\n"
        );
    }

    #[test]
    fn json_round_trip() {
        let t = delta_table(2, (1, 1));
        let mut buf = Vec::new();
        t.write_json(&mut buf).unwrap();
        let back = ProbabilityTable::from_json_reader(buf.as_slice()).unwrap();
        assert_eq!(back, t);
    }

    proptest! {
        #[test]
        fn fold_preserves_mass_and_marginals_sum_to_one(
            weights in proptest::collection::vec(0.0f64..10.0, 225)
        ) {
            prop_assume!(weights.iter().sum::<f64>() > 0.0);
            let t = ProbabilityTable::from_weights(7, weights).unwrap();
            let q = quarter_fold(&t);
            prop_assert!((q.total() - 1.0).abs() < 1e-9);
            let m = marginals(&t);
            prop_assert!((m.ax.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            prop_assert!((m.ay.iter().sum::<f64>() - 1.0).abs() < 1e-9);
            for i in 0..m.ax.len() {
                prop_assert!(m.ax[i] + 1e-12 >= m.bx[i]);
                prop_assert!(m.ay[i] + 1e-12 >= m.by[i]);
            }
            prop_assert_eq!(m.bx[7], t.cell(0, 0));
            prop_assert_eq!(m.by[7], t.cell(0, 0));
        }

        #[test]
        fn regional_monotonicity(weights in proptest::collection::vec(0.0f64..10.0, 225)) {
            prop_assume!(weights.iter().sum::<f64>() > 0.0);
            let t = ProbabilityTable::from_weights(7, weights).unwrap();
            let p = regional_probs(&t).unwrap();
            prop_assert!(p.sq3 <= p.diamond5 + 1e-12);
            prop_assert!(p.diamond5 <= p.sq5 + 1e-12);
            prop_assert!(p.cross5 <= p.sq5 + 1e-12);
        }
    }
}
