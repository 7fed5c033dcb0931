//! Cross-module integration: searches feeding statistics, compensation and
//! conditionals.

use blockmatch::eval::{compensate, frame_mad, psnr};
use blockmatch::ingest::{synth_sequence, SynthKind};
use blockmatch::mvstats::{
    collect_conditional_samples, mv_histogram, prior_conditional, quarter_fold,
};
use blockmatch::patterns::{pattern_offsets, PatternKind};
use blockmatch::{estimate_frame, Algorithm, MotionVector, SearchConfig};

fn interior(col: usize, row: usize, cols: usize, rows: usize, v: (i32, i32), bs: usize) -> bool {
    let (bx, by) = ((col * bs) as i32, (row * bs) as i32);
    bx + v.0 >= 0
        && by + v.1 >= 0
        && bx + v.0 + bs as i32 <= (cols * bs) as i32
        && by + v.1 + bs as i32 <= (rows * bs) as i32
}

/// Every fast algorithm pins the exact shift on interior blocks of a small
/// translation.
#[test]
fn full_suite_recovers_a_small_translation() {
    let cfg = SearchConfig::default();
    let frames = synth_sequence(SynthKind::Translate(1, 0), 64, 64, 10);
    for t in 1..frames.len() {
        for alg in Algorithm::ALL {
            let field = estimate_frame(alg, &frames[t], &frames[t - 1], &cfg).unwrap();
            for row in 0..field.rows {
                for col in 0..field.cols {
                    if !interior(col, row, field.cols, field.rows, (1, 0), cfg.block_size) {
                        continue;
                    }
                    assert_eq!(
                        field.vector(col, row),
                        MotionVector::new(1, 0),
                        "{alg} frame {t} block ({col},{row})"
                    );
                }
            }
        }
    }
}

/// Compensating with the estimated field reconstructs a translated frame
/// exactly on interior blocks, and the frame-level MAD agrees with the
/// per-block search costs.
#[test]
fn compensation_is_consistent_with_search_costs() {
    let cfg = SearchConfig::default();
    let frames = synth_sequence(SynthKind::Noise(11), 64, 64, 2);
    let field = estimate_frame(Algorithm::Fs, &frames[1], &frames[0], &cfg).unwrap();
    let comp = compensate(&frames[0], &field, &cfg).unwrap();
    let mad_from_frame = frame_mad(&frames[1], &comp).unwrap();
    let mad_from_costs =
        field.per_block_cost.iter().sum::<f64>() / (frames[1].width() * frames[1].height()) as f64;
    assert!((mad_from_frame - mad_from_costs).abs() < 1e-9);
}

#[test]
fn compensated_translation_is_lossless_where_reachable() {
    let cfg = SearchConfig::default();
    let frames = synth_sequence(SynthKind::Translate(3, 0), 64, 64, 2);
    let field = estimate_frame(Algorithm::Dcds, &frames[1], &frames[0], &cfg).unwrap();
    let comp = compensate(&frames[0], &field, &cfg).unwrap();
    // Interior content matches exactly; seam-column blocks cannot.
    for y in 0..64usize {
        for x in 0..48usize {
            assert_eq!(comp.sample(x, y), frames[1].sample(x, y), "({x},{y})");
        }
    }
    assert!(psnr(&frames[1], &comp).unwrap() > 20.0);
}

/// The statistics pipeline over full-search fields: a translation shows up
/// as the dominant histogram cell and as a prior-conditional delta.
#[test]
fn stats_pipeline_on_a_translation() {
    let cfg = SearchConfig::default();
    let frames = synth_sequence(SynthKind::Translate(2, 0), 64, 64, 2);
    let field = estimate_frame(Algorithm::Fs, &frames[1], &frames[0], &cfg).unwrap();
    let table = mv_histogram(&[field], cfg.search_range).unwrap();
    let quarter = quarter_fold(&table);
    assert!(quarter.cell(2, 0) >= 0.75);

    let s_points: Vec<MotionVector> = pattern_offsets(PatternKind::Cross5)
        .iter()
        .map(|p| p.offset)
        .collect();
    let samples = collect_conditional_samples(&frames[1], &frames[0], &cfg, &s_points).unwrap();
    let prior = prior_conditional(&samples, cfg.search_range, MotionVector::new(2, 0)).unwrap();
    assert_eq!(prior.cell(2, 0), 1.0);

    // Dominated first-step positions carry no true-vector mass: every
    // stored first-step cost above the winning one has a zero cell.
    for sample in &samples {
        if sample.step1_bmp() != Some(MotionVector::new(2, 0)) {
            continue;
        }
        let best = sample
            .s_costs
            .iter()
            .map(|(_, c)| *c)
            .fold(f64::INFINITY, f64::min);
        for (mv, cost) in &sample.s_costs {
            if *cost > best {
                assert_eq!(prior.cell(mv.dx, mv.dy), 0.0);
            }
        }
    }

    // The true vector lies inside S here, so conditioning the first-step
    // winner on it gives a delta as well.
    let posterior = blockmatch::mvstats::posterior_conditional(
        &samples,
        cfg.search_range,
        &[MotionVector::new(2, 0)],
    )
    .unwrap();
    assert_eq!(posterior.cell(2, 0), 1.0);
}
