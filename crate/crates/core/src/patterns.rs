//! Search-pattern catalog.
//!
//! Every search algorithm draws its candidate offsets from this catalog so
//! that evaluation order, point roles and search-point accounting follow one
//! mechanism. The canonical point order (center first, then ascending
//! `(|dy|, |dx|, dy, dx)`) is normative: combined with strict-improvement
//! comparison it fixes all tie behavior.

use crate::error::{Error, Result};
use crate::frame::MotionVector;
use serde::{Deserialize, Serialize};

/// Role of a point inside its pattern. Directional diamond patterns call the
/// distance-2 points on the long wing "distant" and the distance-1 points on
/// the short wing "near".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PointRole {
    Center,
    Near,
    Distant,
    Other,
}

/// The closed set of pattern shapes used across the algorithm suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternKind {
    /// Horizontal cross: long horizontal arms (+-1, +-2), short vertical arms (+-1).
    Hcsp,
    /// Horizontal diamond: distant points at (+-2,0), near points at (0,+-1).
    Hdsp,
    /// Vertical diamond: distant points at (0,+-2), near points at (+-1,0).
    Vdsp,
    /// 9-point cross covering the 5x5 axes (first step of CDS).
    Cross5,
    /// 9-point large diamond (DS).
    DiamondLarge,
    /// 5-point small diamond (final step of DS/CDS/HEXBS).
    DiamondSmall,
    /// Horizontal hexagon (h-HEXBS).
    HexH,
    /// Vertical hexagon (v-HEXBS).
    HexV,
    /// 3x3 square (BBGDS, final step of 4SS/NTSS).
    Square3,
    /// 9-point square with arm length `step` (TSS stages).
    SquareTss(i32),
    /// The unit ring NTSS adds around the TSS start; same support as Square3.
    NtssAugment,
    /// 9-point square with arm length 2 (4SS stages).
    FourssStep,
}

impl std::fmt::Display for PatternKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PatternKind::Hcsp => write!(f, "hcsp"),
            PatternKind::Hdsp => write!(f, "hdsp"),
            PatternKind::Vdsp => write!(f, "vdsp"),
            PatternKind::Cross5 => write!(f, "cross5"),
            PatternKind::DiamondLarge => write!(f, "diamond-large"),
            PatternKind::DiamondSmall => write!(f, "diamond-small"),
            PatternKind::HexH => write!(f, "hex-h"),
            PatternKind::HexV => write!(f, "hex-v"),
            PatternKind::Square3 => write!(f, "square3"),
            PatternKind::SquareTss(s) => write!(f, "square-tss{s}"),
            PatternKind::NtssAugment => write!(f, "ntss-augment"),
            PatternKind::FourssStep => write!(f, "fourss-step"),
        }
    }
}

/// A pattern offset with its role annotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternPoint {
    pub offset: MotionVector,
    pub role: PointRole,
}

fn raw_offsets(kind: PatternKind) -> Vec<(i32, i32)> {
    match kind {
        PatternKind::Hcsp => vec![(0, 0), (1, 0), (-1, 0), (2, 0), (-2, 0), (0, 1), (0, -1)],
        PatternKind::Hdsp => vec![(0, 0), (2, 0), (-2, 0), (0, 1), (0, -1)],
        PatternKind::Vdsp => vec![(0, 0), (0, 2), (0, -2), (1, 0), (-1, 0)],
        PatternKind::Cross5 => vec![
            (0, 0),
            (1, 0),
            (-1, 0),
            (2, 0),
            (-2, 0),
            (0, 1),
            (0, -1),
            (0, 2),
            (0, -2),
        ],
        PatternKind::DiamondLarge => vec![
            (0, 0),
            (2, 0),
            (-2, 0),
            (0, 2),
            (0, -2),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ],
        PatternKind::DiamondSmall => vec![(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)],
        PatternKind::HexH => vec![(0, 0), (2, 0), (-2, 0), (1, 2), (-1, 2), (1, -2), (-1, -2)],
        PatternKind::HexV => vec![(0, 0), (0, 2), (0, -2), (2, 1), (2, -1), (-2, 1), (-2, -1)],
        PatternKind::Square3 | PatternKind::NtssAugment => square(1),
        PatternKind::SquareTss(step) => square(step.max(1)),
        PatternKind::FourssStep => square(2),
    }
}

fn square(s: i32) -> Vec<(i32, i32)> {
    let mut v = vec![(0, 0)];
    for dy in [-s, 0, s] {
        for dx in [-s, 0, s] {
            if (dx, dy) != (0, 0) {
                v.push((dx, dy));
            }
        }
    }
    v
}

fn role_for(offset: (i32, i32)) -> PointRole {
    match offset.0 * offset.0 + offset.1 * offset.1 {
        0 => PointRole::Center,
        1 => PointRole::Near,
        4 => PointRole::Distant,
        _ => PointRole::Other,
    }
}

/// Canonical ordered points of a pattern: center first, remaining points
/// ascending by `(|dy|, |dx|, dy, dx)`.
pub fn pattern_offsets(kind: PatternKind) -> Vec<PatternPoint> {
    let mut rest: Vec<(i32, i32)> = raw_offsets(kind)
        .into_iter()
        .filter(|&p| p != (0, 0))
        .collect();
    rest.sort_by_key(|&(dx, dy)| (dy.abs(), dx.abs(), dy, dx));
    std::iter::once((0, 0))
        .chain(rest)
        .map(|(dx, dy)| PatternPoint {
            offset: MotionVector::new(dx, dy),
            role: role_for((dx, dy)),
        })
        .collect()
}

/// Looks up the role of `offset` within `kind`, if it is a pattern point.
pub fn role_of(kind: PatternKind, offset: MotionVector) -> Option<PointRole> {
    raw_offsets(kind)
        .into_iter()
        .find(|&(dx, dy)| dx == offset.dx && dy == offset.dy)
        .map(role_for)
}

/// The two distance-1 positions along a directional diamond's long wing,
/// evaluated in the final search step.
pub fn middle_points(kind: PatternKind) -> Result<[MotionVector; 2]> {
    match kind {
        PatternKind::Hdsp => Ok([MotionVector::new(-1, 0), MotionVector::new(1, 0)]),
        PatternKind::Vdsp => Ok([MotionVector::new(0, -1), MotionVector::new(0, 1)]),
        other => Err(Error::UnsupportedPattern(other.to_string())),
    }
}

/// Switching strategy one: after the first cross step, a horizontal
/// best-matched point selects the horizontal diamond, a vertical one the
/// vertical diamond.
pub fn switch_one(bmp_offset: MotionVector) -> Result<PatternKind> {
    if bmp_offset == MotionVector::ZERO {
        return Err(Error::InvalidArgument(
            "switch_one is undefined for the pattern center (halfway stop already fired)".into(),
        ));
    }
    if bmp_offset.dy == 0 {
        Ok(PatternKind::Hdsp)
    } else if bmp_offset.dx == 0 {
        Ok(PatternKind::Vdsp)
    } else {
        Err(Error::InvalidArgument(format!(
            "switch_one expects a cross point, got {bmp_offset}"
        )))
    }
}

/// Switching strategy two: a best-matched point on a near point flips to the
/// other directional diamond; a distant point keeps the current pattern.
pub fn switch_two(current: PatternKind, bmp_role: PointRole) -> Result<PatternKind> {
    let other = match current {
        PatternKind::Hdsp => PatternKind::Vdsp,
        PatternKind::Vdsp => PatternKind::Hdsp,
        k => return Err(Error::UnsupportedPattern(k.to_string())),
    };
    match bmp_role {
        PointRole::Near => Ok(other),
        PointRole::Distant => Ok(current),
        _ => Err(Error::InvalidArgument(
            "switch_two expects a near or distant point".into(),
        )),
    }
}
