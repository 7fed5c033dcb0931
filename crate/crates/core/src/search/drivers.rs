//! The individual search algorithms, expressed over the shared engine.

use super::{CostOracle, SearchOutcome, Searcher};
use crate::frame::MotionVector;
use crate::patterns::{middle_points, role_of, switch_one, switch_two, PatternKind};

const ORIGIN: MotionVector = MotionVector::ZERO;

/// Exhaustive scan of the window in raster order (dy outer, dx inner).
/// The first strict minimum wins, so ties resolve to the raster-earliest
/// candidate.
pub(super) fn full_search(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    s.begin_step(None, ORIGIN);
    for dy in -range..=range {
        for dx in -range..=range {
            s.probe(MotionVector::new(dx, dy));
        }
    }
    s.finish()
}

/// Directional cross diamond search.
///
/// Step 1 evaluates the horizontal cross at the window origin and stops if
/// the best point is the center. Otherwise the directional diamonds take
/// over: switching strategy one picks the first diamond from the direction
/// of the best point, switching strategy two flips the diamond whenever the
/// best point lands on a near point and keeps it on a distant point. Once a
/// diamond's center is best, the two middle points of its long wing settle
/// the final vector. `simplified` checks only the middle point on the side
/// of the cheaper distant point (ties take the lexicographically smaller
/// offset by `(dy, dx)`).
pub(super) fn dcds(oracle: &dyn CostOracle, range: i32, simplified: bool) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    s.probe_pattern(PatternKind::Hcsp, ORIGIN);
    if s.best() == ORIGIN {
        return s.finish();
    }

    let mut kind = switch_one(s.best()).expect("cross best point lies on an axis");
    loop {
        let center = s.best();
        s.probe_pattern(kind, center);
        let best = s.best();
        if best == center {
            break;
        }
        // The strict-improvement rule guarantees the new best is one of the
        // points just probed, so it has a role within the current pattern.
        let off = MotionVector::new(best.dx - center.dx, best.dy - center.dy);
        let role = role_of(kind, off).expect("best moved to a non-pattern point");
        kind = switch_two(kind, role).expect("role is near or distant");
    }

    let center = s.best();
    let mids = middle_points(kind).expect("final pattern is a directional diamond");
    s.begin_step(Some(kind), center);
    if simplified {
        let (d_lo, d_hi) = match kind {
            PatternKind::Hdsp => (MotionVector::new(-2, 0), MotionVector::new(2, 0)),
            _ => (MotionVector::new(0, -2), MotionVector::new(0, 2)),
        };
        let c_lo = s.memo_cost(center.offset(d_lo));
        let c_hi = s.memo_cost(center.offset(d_hi));
        // A clipped distant point counts as infinitely costly; a full tie
        // falls back to the lexicographically smaller middle offset, which
        // the canonical ordering puts first.
        let pick = match (c_lo, c_hi) {
            (None, Some(_)) => mids[1],
            (Some(a), Some(b)) if b < a => mids[1],
            _ => mids[0],
        };
        s.probe(center.offset(pick));
    } else {
        for m in mids {
            s.probe(center.offset(m));
        }
    }
    s.finish()
}

/// Largest power-of-two step not exceeding the range; 4 for the classic
/// +/-7 window.
fn initial_square_step(range: i32) -> i32 {
    let mut s = 1;
    while s * 2 <= range {
        s *= 2;
    }
    s
}

/// Three-step search: squares of halving arm length, recentered on the best
/// point after each stage.
pub(super) fn tss(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    let mut step = initial_square_step(range);
    s.probe_pattern(PatternKind::SquareTss(step), ORIGIN);
    while step > 1 {
        step /= 2;
        s.probe_pattern(PatternKind::SquareTss(step), s.best());
    }
    s.finish()
}

/// New three-step search: the TSS start augmented with the unit ring and a
/// halfway stop. A best point on the ring is refined with one 3x3 step; a
/// best point on the outer square falls back to the TSS schedule.
pub(super) fn ntss(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    let step0 = initial_square_step(range);
    s.probe_pattern(PatternKind::NtssAugment, ORIGIN);
    s.probe_pattern(PatternKind::SquareTss(step0), ORIGIN);
    let best = s.best();
    if best == ORIGIN {
        return s.finish();
    }
    if best.dx.abs() <= 1 && best.dy.abs() <= 1 {
        s.probe_pattern(PatternKind::Square3, best);
        return s.finish();
    }
    let mut step = step0 / 2;
    while step >= 1 {
        s.probe_pattern(PatternKind::SquareTss(step), s.best());
        step /= 2;
    }
    s.finish()
}

/// Four-step search: at most three placements of the 9-point 5x5 pattern,
/// then a closing 3x3 square.
pub(super) fn fourss(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    let mut center = ORIGIN;
    s.probe_pattern(PatternKind::FourssStep, center);
    let mut placements = 1;
    while s.best() != center && placements < 3 {
        center = s.best();
        s.probe_pattern(PatternKind::FourssStep, center);
        placements += 1;
    }
    s.probe_pattern(PatternKind::Square3, s.best());
    s.finish()
}

/// Block-based gradient descent: 3x3 squares recentered until the center
/// holds.
pub(super) fn bbgds(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    let mut center = ORIGIN;
    s.probe_pattern(PatternKind::Square3, center);
    while s.best() != center {
        center = s.best();
        s.probe_pattern(PatternKind::Square3, center);
    }
    s.finish()
}

/// Diamond search: large diamonds until the center holds, then the small
/// diamond.
pub(super) fn ds(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    let mut center = ORIGIN;
    s.probe_pattern(PatternKind::DiamondLarge, center);
    while s.best() != center {
        center = s.best();
        s.probe_pattern(PatternKind::DiamondLarge, center);
    }
    s.probe_pattern(PatternKind::DiamondSmall, s.best());
    s.finish()
}

/// Hexagon-based search in either orientation: hexagons until the center
/// holds, then the small diamond.
pub(super) fn hexbs(oracle: &dyn CostOracle, range: i32, hex: PatternKind) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    let mut center = ORIGIN;
    s.probe_pattern(hex, center);
    while s.best() != center {
        center = s.best();
        s.probe_pattern(hex, center);
    }
    s.probe_pattern(PatternKind::DiamondSmall, s.best());
    s.finish()
}

/// Cross diamond search: the 9-point cross with a halfway stop, a small
/// diamond completion around an inner best point with a second stop, then
/// the diamond-search schedule.
pub(super) fn cds(oracle: &dyn CostOracle, range: i32) -> SearchOutcome {
    let mut s = Searcher::new(oracle, range);
    s.probe_pattern(PatternKind::Cross5, ORIGIN);
    let best = s.best();
    if best == ORIGIN {
        return s.finish();
    }
    if best.dx.abs() + best.dy.abs() == 1 {
        // Complete the small diamond around the inner cross point; only the
        // two side points are new.
        s.probe_pattern(PatternKind::DiamondSmall, best);
        if s.best() == best {
            return s.finish();
        }
    }
    let mut center = s.best();
    s.probe_pattern(PatternKind::DiamondLarge, center);
    while s.best() != center {
        center = s.best();
        s.probe_pattern(PatternKind::DiamondLarge, center);
    }
    s.probe_pattern(PatternKind::DiamondSmall, s.best());
    s.finish()
}
