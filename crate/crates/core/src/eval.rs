//! Motion compensation, frame-quality metrics, oracle comparison and the
//! per-frame benchmark series.
//!
//! Each benchmarked frame is estimated against the previous original frame
//! (estimation quality, not closed-loop coding). Full search always runs as
//! the oracle; every algorithm's vectors are measured against it by mean
//! Euclidean distance and exact-hit rate.

use crate::error::{Error, Result};
use crate::frame::{mad, CostKind, Frame, MotionField, SearchConfig};
use crate::search::{estimate_frame, Algorithm};
use serde::Serialize;
use std::io::Write;

/// Reconstructs a frame by copying every block from the reference displaced
/// by its motion vector.
pub fn compensate(reference: &Frame, field: &MotionField, cfg: &SearchConfig) -> Result<Frame> {
    let bs = cfg.block_size;
    let (w, h) = (field.cols * bs, field.rows * bs);
    if w != reference.width() || h != reference.height() {
        return Err(Error::DimensionMismatch(
            w,
            h,
            reference.width(),
            reference.height(),
        ));
    }
    let mut luma = vec![0u8; w * h];
    for row in 0..field.rows {
        for col in 0..field.cols {
            let mv = field.vector(col, row);
            let sx = col * bs;
            let sy = row * bs;
            let rx = sx as i64 + mv.dx as i64;
            let ry = sy as i64 + mv.dy as i64;
            if rx < 0 || ry < 0 || rx + bs as i64 > w as i64 || ry + bs as i64 > h as i64 {
                return Err(Error::OutOfBounds {
                    dx: mv.dx,
                    dy: mv.dy,
                });
            }
            for line in 0..bs {
                let src = &reference.row(ry as usize + line)[rx as usize..rx as usize + bs];
                let dst_off = (sy + line) * w + sx;
                luma[dst_off..dst_off + bs].copy_from_slice(src);
            }
        }
    }
    Frame::new(w, h, luma)
}

/// Mean squared sample difference over two whole frames.
pub fn frame_mse(a: &Frame, b: &Frame) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let mut total = 0u64;
    for (x, y) in a.luma().iter().zip(b.luma()) {
        let d = *x as i64 - *y as i64;
        total += (d * d) as u64;
    }
    Ok(total as f64 / (a.width() * a.height()) as f64)
}

/// Mean absolute sample difference over two whole frames.
pub fn frame_mad(a: &Frame, b: &Frame) -> Result<f64> {
    if a.width() != b.width() || a.height() != b.height() {
        return Err(Error::DimensionMismatch(
            a.width(),
            a.height(),
            b.width(),
            b.height(),
        ));
    }
    let total: u64 = a
        .luma()
        .iter()
        .zip(b.luma())
        .map(|(x, y)| (*x as i64 - *y as i64).unsigned_abs())
        .sum();
    Ok(total as f64 / (a.width() * a.height()) as f64)
}

/// Peak signal-to-noise ratio in dB for 8-bit samples; identical frames
/// yield the infinity sentinel (serialized as "inf").
pub fn psnr(a: &Frame, b: &Frame) -> Result<f64> {
    let mse = frame_mse(a, b)?;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (255.0f64 * 255.0 / mse).log10())
}

/// Mean Euclidean distance to the oracle vectors and the fraction of blocks
/// that match them exactly.
pub fn oracle_compare(field: &MotionField, oracle: &MotionField) -> Result<(f64, f64)> {
    if field.cols != oracle.cols || field.rows != oracle.rows {
        return Err(Error::DimensionMismatch(
            field.cols,
            field.rows,
            oracle.cols,
            oracle.rows,
        ));
    }
    let n = field.block_count() as f64;
    let mut dist = 0.0;
    let mut hits = 0usize;
    for (a, b) in field.vectors.iter().zip(&oracle.vectors) {
        dist += a.distance_to(*b);
        if a == b {
            hits += 1;
        }
    }
    Ok((dist / n, hits as f64 / n))
}

/// Per-algorithm metrics of one estimated frame.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct AlgMetrics {
    pub mad: f64,
    pub mse: f64,
    pub nsp: f64,
    pub psnr_db: f64,
    pub dist: f64,
    pub prob: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FrameReport {
    pub frame: usize,
    pub records: Vec<(Algorithm, AlgMetrics)>,
}

#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub frames: Vec<FrameReport>,
    /// Sequence averages over all benchmarked frames (frame 0 has no
    /// reference and is excluded).
    pub averages: Vec<(Algorithm, AlgMetrics)>,
}

impl BenchReport {
    /// Mean NSP of one algorithm over the sequence.
    pub fn mean_nsp(&self, alg: Algorithm) -> Option<f64> {
        self.averages
            .iter()
            .find(|(a, _)| *a == alg)
            .map(|(_, m)| m.nsp)
    }

    /// Fixed-schema CSV: one row per frame per algorithm, then sequence
    /// average rows with "avg" in the frame column.
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> Result<()> {
        writeln!(w, "frame,algorithm,mad,mse,nsp,psnr_db,dist,prob")?;
        for report in &self.frames {
            for (alg, m) in &report.records {
                write_row(w, &report.frame.to_string(), *alg, m)?;
            }
        }
        for (alg, m) in &self.averages {
            write_row(w, "avg", *alg, m)?;
        }
        Ok(())
    }
}

fn write_row<W: Write + ?Sized>(
    w: &mut W,
    frame: &str,
    alg: Algorithm,
    m: &AlgMetrics,
) -> Result<()> {
    writeln!(
        w,
        "{frame},{alg},{:.6},{:.6},{:.6},{:.6},{:.6},{:.6}",
        m.mad, m.mse, m.nsp, m.psnr_db, m.dist, m.prob
    )?;
    Ok(())
}

fn measure(
    current: &Frame,
    reference: &Frame,
    field: &MotionField,
    oracle: &MotionField,
    cfg: &SearchConfig,
) -> Result<AlgMetrics> {
    let comp = compensate(reference, field, cfg)?;
    let mse = frame_mse(current, &comp)?;
    let (dist, prob) = oracle_compare(field, oracle)?;
    Ok(AlgMetrics {
        mad: frame_mad(current, &comp)?,
        mse,
        nsp: field.mean_nsp(),
        psnr_db: if mse == 0.0 {
            f64::INFINITY
        } else {
            10.0 * (255.0f64 * 255.0 / mse).log10()
        },
        dist,
        prob,
    })
}

/// Runs the requested algorithms (full search is always added as the
/// oracle) on every consecutive frame pair of the stream.
pub fn run_benchmark<I>(
    frames: I,
    algorithms: &[Algorithm],
    cfg: &SearchConfig,
) -> Result<BenchReport>
where
    I: IntoIterator<Item = Result<Frame>>,
{
    let mut algs = vec![Algorithm::Fs];
    for &a in algorithms {
        if !algs.contains(&a) {
            algs.push(a);
        }
    }

    let mut reports: Vec<FrameReport> = Vec::new();
    let mut prev: Option<Frame> = None;
    for (index, frame) in frames.into_iter().enumerate() {
        let frame = frame?;
        if let Some(reference) = prev.take() {
            let fs_field = estimate_frame(Algorithm::Fs, &frame, &reference, cfg)?;
            let mut records = Vec::with_capacity(algs.len());
            for &alg in &algs {
                let field = if alg == Algorithm::Fs {
                    fs_field.clone()
                } else {
                    estimate_frame(alg, &frame, &reference, cfg)?
                };
                records.push((alg, measure(&frame, &reference, &field, &fs_field, cfg)?));
            }
            reports.push(FrameReport {
                frame: index,
                records,
            });
        }
        prev = Some(frame);
    }
    if reports.is_empty() {
        return Err(Error::EmptyInput(
            "benchmark needs at least two frames".into(),
        ));
    }

    let n = reports.len() as f64;
    let averages = algs
        .iter()
        .enumerate()
        .map(|(i, &alg)| {
            let mut sum = AlgMetrics {
                mad: 0.0,
                mse: 0.0,
                nsp: 0.0,
                psnr_db: 0.0,
                dist: 0.0,
                prob: 0.0,
            };
            for r in &reports {
                let m = r.records[i].1;
                sum.mad += m.mad;
                sum.mse += m.mse;
                sum.nsp += m.nsp;
                sum.psnr_db += m.psnr_db;
                sum.dist += m.dist;
                sum.prob += m.prob;
            }
            (
                alg,
                AlgMetrics {
                    mad: sum.mad / n,
                    mse: sum.mse / n,
                    nsp: sum.nsp / n,
                    psnr_db: sum.psnr_db / n,
                    dist: sum.dist / n,
                    prob: sum.prob / n,
                },
            )
        })
        .collect();

    Ok(BenchReport {
        frames: reports,
        averages,
    })
}

/// Reporting transform for per-block search costs: MAD for SAD accumulators,
/// per-sample MSE for SSD accumulators.
pub fn report_cost(raw: f64, cfg: &SearchConfig) -> f64 {
    match cfg.cost_kind {
        CostKind::Mad => mad(raw as u64, cfg.block_size),
        CostKind::Mse => raw / (cfg.block_size * cfg.block_size) as f64,
    }
}

/// True when the expected fast-search ordering holds; callers surface a
/// warning (not a failure) otherwise.
pub fn nsp_ordering_holds(report: &BenchReport) -> Option<bool> {
    let dcds = report.mean_nsp(Algorithm::Dcds)?;
    let cds = report.mean_nsp(Algorithm::Cds)?;
    Some(dcds < cds && cds < 225.0)
}
