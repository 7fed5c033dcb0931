//! Block-matching motion estimation toolkit.
//!
//! The crate implements the directional cross diamond search (DCDS) and its
//! simplified variant next to the classic fast block-matching algorithms
//! (TSS, NTSS, 4SS, BBGDS, DS, both hexagon orientations and CDS), all over
//! one shared engine with exact search-point accounting. Around the
//! searches it provides:
//!
//! - motion-vector probability statistics (2-D/quarter/1-D distributions,
//!   regional probabilities, conditional distributions, normal fits and
//!   first-step search efficiencies),
//! - an ideal unimodal-surface simulator producing per-position
//!   search-point maps and distribution-weighted averages,
//! - motion compensation, PSNR and full-search oracle comparison in a
//!   frame-by-frame benchmark harness,
//! - Y4M / raw YUV ingestion and deterministic synthetic sequences,
//! - the `blockmatch` CLI (`estimate`, `bench`, `stats`, `ideal`).

pub mod cli;
pub mod error;
pub mod eval;
pub mod frame;
pub mod idealsim;
pub mod ingest;
pub mod mvstats;
pub mod patterns;
pub mod reference_stats;
pub mod search;

pub use error::{Error, Result};
pub use frame::{
    in_window, mad, mse_block, sad, ssd, CostKind, Frame, MotionField, MotionVector, SearchConfig,
};
pub use search::{
    estimate_frame, estimate_frame_outcomes, run_search, with_threads, Algorithm, BlockCostOracle,
    CostOracle, EvaluatedSet, SearchOutcome, TraceStep,
};
