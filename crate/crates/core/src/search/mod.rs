//! Block-matching search algorithms with exact search-point accounting.
//!
//! All algorithms share one engine: a memo table over the search window
//! (each candidate's distortion is computed at most once per block), a
//! strict-improvement best-so-far rule, and the canonical pattern point
//! order from [`crate::patterns`]. The number of search points (NSP) of a
//! block search is the number of distinct candidates whose distortion was
//! actually computed; candidates outside the window or outside the
//! reference frame are skipped silently and never counted.

mod drivers;

use crate::error::{Error, Result};
use crate::frame::{in_window, sad, ssd, CostKind, Frame, MotionField, MotionVector, SearchConfig};
use crate::patterns::PatternKind;
use rayon::prelude::*;
use serde::Serialize;

/// Identifiers of the implemented search algorithms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Fs,
    Tss,
    Ntss,
    Fourss,
    Bbgds,
    Ds,
    HexbsH,
    HexbsV,
    Cds,
    Dcds,
    DcdsS,
}

impl Algorithm {
    pub const ALL: [Algorithm; 11] = [
        Algorithm::Fs,
        Algorithm::Tss,
        Algorithm::Ntss,
        Algorithm::Fourss,
        Algorithm::Bbgds,
        Algorithm::Ds,
        Algorithm::HexbsH,
        Algorithm::HexbsV,
        Algorithm::Cds,
        Algorithm::Dcds,
        Algorithm::DcdsS,
    ];

    /// Every algorithm except full search.
    pub const FAST: [Algorithm; 10] = [
        Algorithm::Tss,
        Algorithm::Ntss,
        Algorithm::Fourss,
        Algorithm::Bbgds,
        Algorithm::Ds,
        Algorithm::HexbsH,
        Algorithm::HexbsV,
        Algorithm::Cds,
        Algorithm::Dcds,
        Algorithm::DcdsS,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Algorithm::Fs => "fs",
            Algorithm::Tss => "tss",
            Algorithm::Ntss => "ntss",
            Algorithm::Fourss => "4ss",
            Algorithm::Bbgds => "bbgds",
            Algorithm::Ds => "ds",
            Algorithm::HexbsH => "hexbs-h",
            Algorithm::HexbsV => "hexbs-v",
            Algorithm::Cds => "cds",
            Algorithm::Dcds => "dcds",
            Algorithm::DcdsS => "dcds-s",
        }
    }

    pub fn parse(id: &str) -> Result<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.id() == id)
            .ok_or_else(|| Error::UnknownAlgorithm(id.to_string()))
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// A source of block-distortion values for window candidates.
///
/// Returns `None` for infeasible candidates (outside the search window or
/// displacing the block outside the reference frame). Feasible costs must be
/// exactly comparable; integer accumulators and IEEE square roots of small
/// integers both qualify.
pub trait CostOracle: Sync {
    fn cost(&self, candidate: MotionVector) -> Option<f64>;
}

/// Pixel-domain oracle: SAD (or SSD) between the current block and the
/// displaced reference block.
pub struct BlockCostOracle<'a> {
    current: &'a Frame,
    reference: &'a Frame,
    origin: (usize, usize),
    cfg: SearchConfig,
}

impl<'a> BlockCostOracle<'a> {
    pub fn new(
        current: &'a Frame,
        reference: &'a Frame,
        origin: (usize, usize),
        cfg: SearchConfig,
    ) -> Self {
        Self {
            current,
            reference,
            origin,
            cfg,
        }
    }

    fn feasible(&self, mv: MotionVector) -> bool {
        if !in_window(mv, self.cfg.search_range) {
            return false;
        }
        let (bx, by) = self.origin;
        let bs = self.cfg.block_size as i64;
        let rx = bx as i64 + mv.dx as i64;
        let ry = by as i64 + mv.dy as i64;
        rx >= 0
            && ry >= 0
            && rx + bs <= self.reference.width() as i64
            && ry + bs <= self.reference.height() as i64
    }
}

impl CostOracle for BlockCostOracle<'_> {
    fn cost(&self, candidate: MotionVector) -> Option<f64> {
        if !self.feasible(candidate) {
            return None;
        }
        let raw = match self.cfg.cost_kind {
            CostKind::Mad => sad(
                self.current,
                self.reference,
                self.origin,
                candidate,
                self.cfg.block_size,
            ),
            CostKind::Mse => ssd(
                self.current,
                self.reference,
                self.origin,
                candidate,
                self.cfg.block_size,
            ),
        };
        raw.ok().map(|v| v as f64)
    }
}

/// Memo table over the search window: each candidate position is evaluated
/// at most once per block search, across all steps and patterns.
pub struct EvaluatedSet {
    range: i32,
    side: usize,
    cells: Vec<Option<f64>>,
    evaluated: u32,
}

impl EvaluatedSet {
    pub fn new(range: i32) -> Self {
        let side = (2 * range + 1) as usize;
        Self {
            range,
            side,
            cells: vec![None; side * side],
            evaluated: 0,
        }
    }

    fn index(&self, mv: MotionVector) -> Option<usize> {
        if !in_window(mv, self.range) {
            return None;
        }
        let col = (mv.dx + self.range) as usize;
        let row = (mv.dy + self.range) as usize;
        Some(row * self.side + col)
    }

    pub fn get(&self, mv: MotionVector) -> Option<f64> {
        self.index(mv).and_then(|i| self.cells[i])
    }

    pub fn contains(&self, mv: MotionVector) -> bool {
        self.get(mv).is_some()
    }

    fn insert(&mut self, mv: MotionVector, cost: f64) {
        let i = self
            .index(mv)
            .expect("memoized candidate must be in-window");
        debug_assert!(self.cells[i].is_none());
        self.cells[i] = Some(cost);
        self.evaluated += 1;
    }

    /// Number of distinct positions evaluated so far.
    pub fn len(&self) -> u32 {
        self.evaluated
    }

    pub fn is_empty(&self) -> bool {
        self.evaluated == 0
    }
}

/// One entry of a search trace: the candidates newly evaluated while a
/// pattern instance (or window scan) was centered at `center`.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub step: usize,
    /// `None` for the full-search raster scan.
    pub pattern: Option<PatternKind>,
    pub center: MotionVector,
    /// Absolute candidate positions evaluated for the first time here.
    pub evaluated: Vec<MotionVector>,
}

/// Result of one block search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub mv: MotionVector,
    /// Raw distortion of `mv` (SAD/SSD accumulator, or the injected oracle's
    /// value).
    pub final_cost: f64,
    /// Distinct candidate positions whose distortion was computed.
    pub nsp: u32,
    pub trace: Vec<TraceStep>,
}

/// Shared search state: memoized costs, strict-improvement best point and
/// the step trace.
pub(crate) struct Searcher<'a> {
    oracle: &'a dyn CostOracle,
    memo: EvaluatedSet,
    best: MotionVector,
    best_cost: f64,
    found: bool,
    trace: Vec<TraceStep>,
}

impl<'a> Searcher<'a> {
    pub(crate) fn new(oracle: &'a dyn CostOracle, range: i32) -> Self {
        Self {
            oracle,
            memo: EvaluatedSet::new(range),
            best: MotionVector::ZERO,
            best_cost: f64::INFINITY,
            found: false,
            trace: Vec::new(),
        }
    }

    pub(crate) fn begin_step(&mut self, pattern: Option<PatternKind>, center: MotionVector) {
        let step = self.trace.len();
        self.trace.push(TraceStep {
            step,
            pattern,
            center,
            evaluated: Vec::new(),
        });
    }

    /// Evaluates a candidate unless it is memoized or infeasible. A strictly
    /// smaller cost displaces the current best point; ties never do.
    pub(crate) fn probe(&mut self, mv: MotionVector) {
        if self.memo.contains(mv) {
            return;
        }
        let Some(cost) = self.oracle.cost(mv) else {
            return;
        };
        self.memo.insert(mv, cost);
        self.trace
            .last_mut()
            .expect("probe outside a trace step")
            .evaluated
            .push(mv);
        if cost < self.best_cost {
            self.best_cost = cost;
            self.best = mv;
            self.found = true;
        }
    }

    /// Probes every point of `kind` centered on `center`, in canonical order,
    /// as a new trace step.
    pub(crate) fn probe_pattern(&mut self, kind: PatternKind, center: MotionVector) {
        self.begin_step(Some(kind), center);
        for p in crate::patterns::pattern_offsets(kind) {
            self.probe(center.offset(p.offset));
        }
    }

    pub(crate) fn best(&self) -> MotionVector {
        self.best
    }

    pub(crate) fn memo_cost(&self, mv: MotionVector) -> Option<f64> {
        self.memo.get(mv)
    }

    pub(crate) fn finish(self) -> SearchOutcome {
        debug_assert!(self.found, "no feasible candidate was ever evaluated");
        SearchOutcome {
            mv: self.best,
            final_cost: self.best_cost,
            nsp: self.memo.len(),
            trace: self.trace,
        }
    }
}

/// Runs one block search with the chosen algorithm.
pub fn run_search(alg: Algorithm, oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    match alg {
        Algorithm::Fs => drivers::full_search(oracle, range),
        Algorithm::Tss => drivers::tss(oracle, range),
        Algorithm::Ntss => drivers::ntss(oracle, range),
        Algorithm::Fourss => drivers::fourss(oracle, range),
        Algorithm::Bbgds => drivers::bbgds(oracle, range),
        Algorithm::Ds => drivers::ds(oracle, range),
        Algorithm::HexbsH => drivers::hexbs(oracle, range, PatternKind::HexH),
        Algorithm::HexbsV => drivers::hexbs(oracle, range, PatternKind::HexV),
        Algorithm::Cds => drivers::cds(oracle, range),
        Algorithm::Dcds => drivers::dcds(oracle, range, false),
        Algorithm::DcdsS => drivers::dcds(oracle, range, true),
    }
}

fn check_pair(current: &Frame, reference: &Frame, cfg: &SearchConfig) -> Result<()> {
    cfg.validate()?;
    if current.width() != reference.width() || current.height() != reference.height() {
        return Err(Error::DimensionMismatch(
            current.width(),
            current.height(),
            reference.width(),
            reference.height(),
        ));
    }
    if !current.tiles_by(cfg.block_size) {
        return Err(Error::FrameTiling {
            width: current.width(),
            height: current.height(),
            block_size: cfg.block_size,
        });
    }
    Ok(())
}

/// Runs `alg` on every block of the frame and returns the raw per-block
/// outcomes in raster order. Blocks are independent; the loop is
/// data-parallel and the result order does not depend on the worker count.
pub fn estimate_frame_outcomes(
    alg: Algorithm,
    current: &Frame,
    reference: &Frame,
    cfg: &SearchConfig,
) -> Result<Vec<SearchOutcome>> {
    check_pair(current, reference, cfg)?;
    let cols = current.width() / cfg.block_size;
    let rows = current.height() / cfg.block_size;
    let outcomes = (0..cols * rows)
        .into_par_iter()
        .map(|i| {
            let origin = ((i % cols) * cfg.block_size, (i / cols) * cfg.block_size);
            let oracle = BlockCostOracle::new(current, reference, origin, *cfg);
            run_search(alg, &oracle, cfg.search_range)
        })
        .collect();
    Ok(outcomes)
}

/// Runs `alg` on every block and aggregates vectors, final costs and NSP.
pub fn estimate_frame(
    alg: Algorithm,
    current: &Frame,
    reference: &Frame,
    cfg: &SearchConfig,
) -> Result<MotionField> {
    let outcomes = estimate_frame_outcomes(alg, current, reference, cfg)?;
    let cols = current.width() / cfg.block_size;
    let rows = current.height() / cfg.block_size;
    Ok(MotionField {
        cols,
        rows,
        vectors: outcomes.iter().map(|o| o.mv).collect(),
        per_block_cost: outcomes.iter().map(|o| o.final_cost).collect(),
        per_block_nsp: outcomes.iter().map(|o| o.nsp).collect(),
    })
}

/// Runs `f` inside a bounded rayon pool. `threads == 0` keeps the caller's
/// pool. Outputs are merged by index everywhere, so results are identical
/// for any worker count.
pub fn with_threads<R: Send>(threads: usize, f: impl FnOnce() -> R + Send) -> R {
    if threads == 0 {
        f()
    } else {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("failed to build worker pool")
            .install(f)
    }
}
