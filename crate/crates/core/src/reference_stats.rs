//! Shipped reference statistics.
//!
//! The motion-vector distribution tables here are averages measured over a
//! corpus of eighteen standard test sequences (video conferencing, sports
//! and panning content) with 16x16 blocks and a +/-7 window; they let the
//! statistics and efficiency queries run without the original footage. The
//! search-point maps are the per-position counts of several fast algorithms
//! on the ideal unimodal surface as tabulated in the original algorithm
//! literature; entries at tie-sensitive positions may legitimately differ
//! between implementations (see `idealsim::compare_with_reference`).

use crate::frame::MotionVector;
use crate::mvstats::{ProbabilityTable, QuarterTable};
use crate::patterns::{pattern_offsets, PatternKind};

/// Quarter-window 2-D distribution, rows `|dy| = 0..=7`, columns `|dx| = 0..=7`.
pub const QUARTER_DISTRIBUTION: [[f64; 8]; 8] = [
    [
        0.5805, 0.1280, 0.0591, 0.0170, 0.0072, 0.0054, 0.0026, 0.0076,
    ],
    [
        0.0572, 0.0242, 0.0092, 0.0051, 0.0041, 0.0029, 0.0020, 0.0049,
    ],
    [
        0.0067, 0.0062, 0.0034, 0.0031, 0.0017, 0.0011, 0.0010, 0.0027,
    ],
    [
        0.0031, 0.0029, 0.0019, 0.0022, 0.0012, 0.0009, 0.0008, 0.0021,
    ],
    [
        0.0022, 0.0018, 0.0014, 0.0012, 0.0010, 0.0006, 0.0007, 0.0018,
    ],
    [
        0.0012, 0.0016, 0.0009, 0.0011, 0.0007, 0.0005, 0.0005, 0.0018,
    ],
    [
        0.0024, 0.0012, 0.0008, 0.0009, 0.0010, 0.0005, 0.0007, 0.0016,
    ],
    [
        0.0015, 0.0014, 0.0010, 0.0016, 0.0012, 0.0011, 0.0012, 0.0052,
    ],
];

/// 1-D accumulated marginal along x (`Ax`), `d = -7..=7`.
pub const MARGINAL_AX: [f64; 15] = [
    0.0117, 0.0042, 0.0060, 0.0083, 0.0114, 0.0241, 0.0909, 0.6547, 0.0762, 0.0536, 0.0208, 0.0099,
    0.0069, 0.0052, 0.0160,
];

/// 1-D accumulated marginal along y (`Ay`), `d = -7..=7`.
pub const MARGINAL_AY: [f64; 15] = [
    0.0065, 0.0049, 0.0035, 0.0048, 0.0070, 0.0122, 0.0549, 0.8074, 0.0548, 0.0137, 0.0082, 0.0058,
    0.0048, 0.0039, 0.0078,
];

/// On-axis slice along x (`Bx`), `d = -7..=7`.
pub const MARGINAL_BX: [f64; 15] = [
    0.0042, 0.0013, 0.0028, 0.0037, 0.0049, 0.0151, 0.0718, 0.5805, 0.0562, 0.0440, 0.0121, 0.0035,
    0.0026, 0.0013, 0.0034,
];

/// On-axis slice along y (`By`), `d = -7..=7`.
pub const MARGINAL_BY: [f64; 15] = [
    0.0010, 0.0015, 0.0006, 0.0011, 0.0016, 0.0031, 0.0295, 0.5805, 0.0277, 0.0035, 0.0015, 0.0011,
    0.0006, 0.0008, 0.0006,
];

/// Central 5x5 of the full (unfolded) distribution, rows `dy = -2..=2`,
/// columns `dx = -2..=2`.
pub const CENTRAL_5X5: [[f64; 5]; 5] = [
    [0.0008, 0.0013, 0.0031, 0.0014, 0.0008],
    [0.0025, 0.0056, 0.0295, 0.0048, 0.0021],
    [0.0151, 0.0718, 0.5805, 0.0562, 0.0440],
    [0.0024, 0.0068, 0.0277, 0.0070, 0.0021],
    [0.0008, 0.0018, 0.0035, 0.0017, 0.0010],
];

/// Reference per-position search-point counts on the ideal surface,
/// quarter window, rows `dy = 0..=7`. The DCDS block is reproduced exactly
/// by this implementation; the other maps depend on each algorithm's
/// unstated tie rules and are shipped for entry-wise comparison reports.
pub const IDEAL_NSP_DCDS: [[u32; 8]; 8] = [
    [7, 10, 11, 11, 15, 15, 17, 17],
    [11, 13, 14, 17, 17, 20, 19, 20],
    [11, 16, 14, 20, 17, 23, 19, 23],
    [15, 17, 17, 20, 20, 23, 23, 23],
    [15, 20, 23, 23, 26, 26, 28, 26],
    [18, 20, 20, 23, 23, 26, 26, 27],
    [18, 22, 25, 25, 28, 28, 30, 29],
    [19, 21, 21, 25, 29, 28, 31, 29],
];

pub const IDEAL_NSP_DS: [[u32; 8]; 8] = [
    [13, 13, 18, 18, 23, 23, 27, 27],
    [13, 16, 16, 21, 21, 26, 26, 27],
    [18, 16, 19, 19, 24, 24, 28, 28],
    [18, 21, 19, 22, 22, 27, 27, 28],
    [23, 21, 24, 22, 25, 25, 29, 29],
    [23, 26, 24, 27, 25, 28, 28, 29],
    [27, 26, 28, 27, 29, 28, 29, 29],
    [27, 27, 28, 28, 29, 29, 29, 27],
];

pub const IDEAL_NSP_CDS: [[u32; 8]; 8] = [
    [9, 11, 19, 19, 25, 25, 29, 29],
    [11, 17, 17, 23, 23, 28, 28, 29],
    [19, 17, 22, 22, 26, 26, 30, 30],
    [19, 23, 22, 25, 25, 29, 29, 30],
    [25, 23, 26, 25, 28, 28, 31, 31],
    [25, 28, 26, 29, 28, 31, 31, 31],
    [29, 28, 30, 29, 31, 31, 32, 32],
    [29, 29, 30, 30, 31, 31, 32, 30],
];

pub const IDEAL_NSP_NTSS: [[u32; 8]; 8] = [
    [17, 20, 20, 33, 33, 33, 33, 33],
    [20, 22, 22, 33, 33, 33, 33, 33],
    [20, 22, 22, 22, 33, 33, 33, 33],
    [33, 33, 22, 33, 33, 33, 33, 33],
    [33, 33, 33, 33, 33, 33, 33, 33],
    [33, 33, 33, 33, 33, 33, 33, 33],
    [33, 33, 33, 33, 33, 33, 33, 33],
    [33, 33, 33, 33, 33, 33, 33, 33],
];

/// Full `+/-7` distribution fixture: the measured central 5x5 embedded at
/// the origin, with the unmeasured remainder of the mass spread uniformly
/// over the far corner quadrants (`|dx| >= 3 && |dy| >= 3`) so that the
/// table is normalized without disturbing any central region, axis slice or
/// first-step pattern support.
pub fn fixture_table() -> ProbabilityTable {
    let range = 7i32;
    let side = (2 * range + 1) as usize;
    let mut cells = vec![0.0f64; side * side];
    let mut central = 0.0;
    for (row, line) in CENTRAL_5X5.iter().enumerate() {
        for (col, &v) in line.iter().enumerate() {
            let dx = col as i32 - 2;
            let dy = row as i32 - 2;
            cells[(dy + range) as usize * side + (dx + range) as usize] = v;
            central += v;
        }
    }
    let far: Vec<usize> = (-range..=range)
        .flat_map(|dy| (-range..=range).map(move |dx| (dx, dy)))
        .filter(|&(dx, dy): &(i32, i32)| dx.abs() >= 3 && dy.abs() >= 3)
        .map(|(dx, dy)| (dy + range) as usize * side + (dx + range) as usize)
        .collect();
    let residual = (1.0 - central) / far.len() as f64;
    for i in far {
        cells[i] = residual;
    }
    ProbabilityTable::from_weights(range, cells).expect("fixture table is well-formed")
}

/// The quarter-window fixture as a weight table (renormalized; the published
/// rounding makes the raw sum drift a few 1e-4 from one).
pub fn fixture_quarter() -> QuarterTable {
    let total: f64 = QUARTER_DISTRIBUTION.iter().flatten().sum();
    let cells = QUARTER_DISTRIBUTION
        .iter()
        .flatten()
        .map(|v| v / total)
        .collect();
    QuarterTable::from_cells(7, cells).expect("fixture quarter table is well-formed")
}

/// The five first-step pattern supports compared by the efficiency table.
pub fn first_step_patterns() -> Vec<(&'static str, Vec<MotionVector>)> {
    let offs = |k: PatternKind| pattern_offsets(k).iter().map(|p| p.offset).collect();
    vec![
        ("square3", offs(PatternKind::Square3)),
        ("diamond-large", offs(PatternKind::DiamondLarge)),
        ("cross5", offs(PatternKind::Cross5)),
        ("hex-h", offs(PatternKind::HexH)),
        ("hcsp", offs(PatternKind::Hcsp)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvstats::{marginals, regional_probs, search_efficiency};

    #[test]
    fn fixture_is_normalized_and_matches_central_data() {
        let t = fixture_table();
        assert!((t.total() - 1.0).abs() < 1e-9);
        assert!((t.cell(0, 0) - 0.5805).abs() < 1e-12);
        assert!((t.cell(-2, 0) - 0.0151).abs() < 1e-12);
        assert!((t.cell(1, 2) - 0.0017).abs() < 1e-12);
    }

    #[test]
    fn fixture_axis_slices_match_the_published_row() {
        let m = marginals(&fixture_table());
        let want = [0.0151, 0.0718, 0.5805, 0.0562, 0.0440];
        for (i, d) in (-2i32..=2).enumerate() {
            assert!((m.bx[(d + 7) as usize] - want[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn fixture_regional_probabilities() {
        let p = regional_probs(&fixture_table()).unwrap();
        assert!((p.sq5 - 0.8745).abs() < 1e-3);
        assert!((p.diamond5 - 0.8557).abs() < 1e-3);
        assert!((p.cross5 - 0.8315).abs() < 1e-3);
        assert!((p.sq3 - 0.7899).abs() < 1e-3);
        assert!((p.flat - 0.8248).abs() < 1e-3);
    }

    #[test]
    fn fixture_first_step_efficiencies() {
        let t = fixture_table();
        let want = [
            ("square3", 0.0878),
            ("diamond-large", 0.0745),
            ("cross5", 0.0924),
            ("hex-h", 0.0922),
            ("hcsp", 0.1178),
        ];
        for ((name, pattern), (wname, weta)) in first_step_patterns().iter().zip(want) {
            assert_eq!(*name, wname);
            let eta = search_efficiency(&t, pattern).unwrap();
            assert!((eta - weta).abs() < 1e-4, "{name}: {eta}");
        }
    }

    #[test]
    fn fixture_is_horizontally_center_biased() {
        let m = marginals(&fixture_table());
        let off_axis = |v: &[f64]| {
            v.iter()
                .enumerate()
                .filter(|(i, _)| *i != 7)
                .map(|(_, x)| x)
                .sum::<f64>()
        };
        assert!(off_axis(&m.bx) > off_axis(&m.by));
    }

    #[test]
    fn quarter_fixture_sums_to_one() {
        assert!((fixture_quarter().total() - 1.0).abs() < 1e-9);
    }
}
