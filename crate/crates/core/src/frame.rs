//! Frames, blocks, search configuration and block-distortion costs.
//!
//! Motion estimation runs on 8-bit luma planes only. A candidate motion
//! vector `(dx, dy)` pairs the block at `(x, y)` in the current frame with
//! the block at `(x+dx, y+dy)` in the reference frame.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// An 8-bit luma plane.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    luma: Vec<u8>,
}

impl Frame {
    /// Builds a frame, validating that `luma` holds exactly `width * height`
    /// samples.
    pub fn new(width: usize, height: usize, luma: Vec<u8>) -> Result<Self> {
        let expected = width * height;
        if luma.len() != expected {
            return Err(Error::LumaLength {
                width,
                height,
                expected,
                actual: luma.len(),
            });
        }
        Ok(Self {
            width,
            height,
            luma,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn luma(&self) -> &[u8] {
        &self.luma
    }

    #[inline]
    pub fn sample(&self, x: usize, y: usize) -> u8 {
        self.luma[y * self.width + x]
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[u8] {
        &self.luma[y * self.width..(y + 1) * self.width]
    }

    /// Crops to the largest `block_size`-aligned sub-frame anchored at the
    /// top-left corner. Returns an error when even one block does not fit.
    pub fn crop_to_multiple(&self, block_size: usize) -> Result<Frame> {
        let w = (self.width / block_size) * block_size;
        let h = (self.height / block_size) * block_size;
        if w == 0 || h == 0 {
            return Err(Error::FrameTiling {
                width: self.width,
                height: self.height,
                block_size,
            });
        }
        if w == self.width && h == self.height {
            return Ok(self.clone());
        }
        let mut luma = Vec::with_capacity(w * h);
        for y in 0..h {
            luma.extend_from_slice(&self.row(y)[..w]);
        }
        Frame::new(w, h, luma)
    }

    /// True when the frame is an exact grid of `block_size` x `block_size`
    /// blocks.
    pub fn tiles_by(&self, block_size: usize) -> bool {
        block_size > 0
            && self.width.is_multiple_of(block_size)
            && self.height.is_multiple_of(block_size)
            && self.width > 0
            && self.height > 0
    }
}

/// Block distortion measure selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum CostKind {
    /// Mean absolute difference; searches compare the raw SAD accumulator.
    #[default]
    Mad,
    /// Mean square error; searches compare the raw sum of squared differences.
    Mse,
}

/// Search parameters shared by every algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub block_size: usize,
    pub search_range: i32,
    pub cost_kind: CostKind,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            block_size: 16,
            search_range: 7,
            cost_kind: CostKind::Mad,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.block_size < 1 {
            return Err(Error::InvalidConfig("block_size must be >= 1".into()));
        }
        if self.search_range < 1 {
            return Err(Error::InvalidConfig("search_range must be >= 1".into()));
        }
        Ok(())
    }
}

/// Integer pixel displacement of a block between two frames.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize,
)]
pub struct MotionVector {
    pub dx: i32,
    pub dy: i32,
}

impl MotionVector {
    pub const ZERO: MotionVector = MotionVector { dx: 0, dy: 0 };

    pub const fn new(dx: i32, dy: i32) -> Self {
        Self { dx, dy }
    }

    pub fn offset(self, other: MotionVector) -> MotionVector {
        MotionVector::new(self.dx + other.dx, self.dy + other.dy)
    }

    /// Euclidean length of the difference to `other`.
    pub fn distance_to(self, other: MotionVector) -> f64 {
        let dx = (self.dx - other.dx) as f64;
        let dy = (self.dy - other.dy) as f64;
        (dx * dx + dy * dy).sqrt()
    }
}

impl std::fmt::Display for MotionVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.dx, self.dy)
    }
}

/// True iff the candidate lies inside the +/-`search_range` window.
pub fn in_window(candidate: MotionVector, search_range: i32) -> bool {
    candidate.dx.abs() <= search_range && candidate.dy.abs() <= search_range
}

/// Per-frame grid of block results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MotionField {
    pub cols: usize,
    pub rows: usize,
    /// Row-major block vectors, `cols * rows` entries.
    pub vectors: Vec<MotionVector>,
    /// Final raw BDM values (SAD or SSD accumulator, exact in f64).
    pub per_block_cost: Vec<f64>,
    /// Number of distinct candidates evaluated per block.
    pub per_block_nsp: Vec<u32>,
}

impl MotionField {
    pub fn block_count(&self) -> usize {
        self.cols * self.rows
    }

    pub fn vector(&self, col: usize, row: usize) -> MotionVector {
        self.vectors[row * self.cols + col]
    }

    pub fn mean_nsp(&self) -> f64 {
        mean(self.per_block_nsp.iter().map(|&n| n as f64))
    }

    pub fn mean_cost(&self) -> f64 {
        mean(self.per_block_cost.iter().copied())
    }
}

fn mean(it: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for v in it {
        sum += v;
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

/// Sum of absolute differences between the block at `block_origin` in
/// `current` and the same-size block displaced by `candidate` in `reference`.
///
/// The accumulator is exact; no saturation occurs for any block size of
/// practical interest (255 * block_size^2 fits easily in u64).
pub fn sad(
    current: &Frame,
    reference: &Frame,
    block_origin: (usize, usize),
    candidate: MotionVector,
    block_size: usize,
) -> Result<u64> {
    let (rx, ry) = displaced_origin(current, reference, block_origin, candidate, block_size)?;
    let (bx, by) = block_origin;
    let mut total = 0u64;
    for row in 0..block_size {
        let cur = &current.row(by + row)[bx..bx + block_size];
        let rfr = &reference.row(ry + row)[rx..rx + block_size];
        let mut acc = 0u32;
        for (a, b) in cur.iter().zip(rfr) {
            acc += (*a as i32 - *b as i32).unsigned_abs();
        }
        total += acc as u64;
    }
    Ok(total)
}

/// Sum of squared differences over the block; `mse_block` divides by the
/// block area.
pub fn ssd(
    current: &Frame,
    reference: &Frame,
    block_origin: (usize, usize),
    candidate: MotionVector,
    block_size: usize,
) -> Result<u64> {
    let (rx, ry) = displaced_origin(current, reference, block_origin, candidate, block_size)?;
    let (bx, by) = block_origin;
    let mut total = 0u64;
    for row in 0..block_size {
        let cur = &current.row(by + row)[bx..bx + block_size];
        let rfr = &reference.row(ry + row)[rx..rx + block_size];
        let mut acc = 0u64;
        for (a, b) in cur.iter().zip(rfr) {
            let d = *a as i64 - *b as i64;
            acc += (d * d) as u64;
        }
        total += acc;
    }
    Ok(total)
}

/// Mean absolute difference from a raw SAD value. Rank-equivalent to SAD, so
/// searches compare SAD and convert only for reporting.
pub fn mad(sad_value: u64, block_size: usize) -> f64 {
    sad_value as f64 / (block_size * block_size) as f64
}

/// Mean squared sample difference over the block.
pub fn mse_block(
    current: &Frame,
    reference: &Frame,
    block_origin: (usize, usize),
    candidate: MotionVector,
    block_size: usize,
) -> Result<f64> {
    let total = ssd(current, reference, block_origin, candidate, block_size)?;
    Ok(total as f64 / (block_size * block_size) as f64)
}

/// Resolves and bounds-checks the displaced block origin in the reference
/// frame. The block itself must lie inside `current`.
fn displaced_origin(
    current: &Frame,
    reference: &Frame,
    block_origin: (usize, usize),
    candidate: MotionVector,
    block_size: usize,
) -> Result<(usize, usize)> {
    let (bx, by) = block_origin;
    debug_assert!(bx + block_size <= current.width() && by + block_size <= current.height());
    let rx = bx as i64 + candidate.dx as i64;
    let ry = by as i64 + candidate.dy as i64;
    if rx < 0
        || ry < 0
        || rx + block_size as i64 > reference.width() as i64
        || ry + block_size as i64 > reference.height() as i64
    {
        return Err(Error::OutOfBounds {
            dx: candidate.dx,
            dy: candidate.dy,
        });
    }
    Ok((rx as usize, ry as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn frame_from(vals: &[u8], w: usize, h: usize) -> Frame {
        Frame::new(w, h, vals.to_vec()).unwrap()
    }

    fn flat(w: usize, h: usize, v: u8) -> Frame {
        Frame::new(w, h, vec![v; w * h]).unwrap()
    }

    #[test]
    fn sad_identical_blocks_is_zero() {
        let f = flat(16, 16, 77);
        assert_eq!(sad(&f, &f, (0, 0), MotionVector::ZERO, 16).unwrap(), 0);
    }

    #[test]
    fn sad_hand_summed_2x2() {
        let cur = frame_from(&[1, 2, 3, 4], 2, 2);
        let rfr = frame_from(&[0, 2, 3, 6], 2, 2);
        assert_eq!(sad(&cur, &rfr, (0, 0), MotionVector::ZERO, 2).unwrap(), 3);
    }

    #[test]
    fn sad_constant_blocks() {
        let cur = flat(16, 16, 5);
        let rfr = flat(16, 16, 7);
        assert_eq!(
            sad(&cur, &rfr, (0, 0), MotionVector::ZERO, 16).unwrap(),
            512
        );
    }

    #[test]
    fn sad_out_of_bounds_candidate() {
        let f = flat(16, 16, 0);
        let err = sad(&f, &f, (0, 0), MotionVector::new(-1, 0), 16);
        assert!(matches!(err, Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn mad_is_sad_over_block_area() {
        assert_eq!(mad(0, 16), 0.0);
        assert_eq!(mad(512, 16), 2.0);
        assert_eq!(mad(256, 16), 1.0);
    }

    #[test]
    fn mse_examples() {
        let a = flat(4, 4, 5);
        let b = flat(4, 4, 7);
        assert_eq!(
            mse_block(&a, &a, (0, 0), MotionVector::ZERO, 4).unwrap(),
            0.0
        );
        assert_eq!(
            mse_block(&a, &b, (0, 0), MotionVector::ZERO, 4).unwrap(),
            4.0
        );
        let cur = frame_from(&[1, 2, 3, 4], 2, 2);
        let rfr = frame_from(&[0, 2, 3, 6], 2, 2);
        assert_eq!(
            mse_block(&cur, &rfr, (0, 0), MotionVector::ZERO, 2).unwrap(),
            1.25
        );
    }

    #[test]
    fn window_membership() {
        assert!(in_window(MotionVector::new(7, 7), 7));
        assert!(!in_window(MotionVector::new(8, 0), 7));
        assert!(in_window(MotionVector::new(-7, 3), 7));
    }

    #[test]
    fn luma_length_is_validated() {
        assert!(matches!(
            Frame::new(4, 4, vec![0; 15]),
            Err(Error::LumaLength { .. })
        ));
    }

    #[test]
    fn crop_to_block_multiple() {
        let f = flat(37, 21, 9);
        let c = f.crop_to_multiple(16).unwrap();
        assert_eq!((c.width(), c.height()), (32, 16));
        assert!(f.crop_to_multiple(64).is_err());
    }

    proptest! {
        #[test]
        fn sad_symmetry_and_identity(a in proptest::collection::vec(0u8..=255, 16), b in proptest::collection::vec(0u8..=255, 16)) {
            let fa = frame_from(&a, 4, 4);
            let fb = frame_from(&b, 4, 4);
            let ab = sad(&fa, &fb, (0, 0), MotionVector::ZERO, 4).unwrap();
            let ba = sad(&fb, &fa, (0, 0), MotionVector::ZERO, 4).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(sad(&fa, &fa, (0, 0), MotionVector::ZERO, 4).unwrap(), 0);
        }

        #[test]
        fn sad_triangle_inequality(a in proptest::collection::vec(0u8..=255, 16), b in proptest::collection::vec(0u8..=255, 16), c in proptest::collection::vec(0u8..=255, 16)) {
            let fa = frame_from(&a, 4, 4);
            let fb = frame_from(&b, 4, 4);
            let fc = frame_from(&c, 4, 4);
            let ab = sad(&fa, &fb, (0, 0), MotionVector::ZERO, 4).unwrap();
            let bc = sad(&fb, &fc, (0, 0), MotionVector::ZERO, 4).unwrap();
            let ac = sad(&fa, &fc, (0, 0), MotionVector::ZERO, 4).unwrap();
            prop_assert!(ac <= ab + bc);
        }

        #[test]
        fn mad_preserves_sad_ordering(s1 in 0u64..100_000, s2 in 0u64..100_000) {
            let (m1, m2) = (mad(s1, 16), mad(s2, 16));
            prop_assert_eq!(s1.cmp(&s2), m1.partial_cmp(&m2).unwrap());
        }
    }
}
