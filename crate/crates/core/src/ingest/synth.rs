//! Deterministic synthetic sequences for tests and benchmarks.

use crate::frame::Frame;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

/// One period of the texture wave, amplitude 50.
const WAVE: [i32; 16] = [
    0, 19, 35, 46, 50, 46, 35, 19, 0, -19, -35, -46, -50, -46, -35, -19,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SynthKind {
    /// Repeats one textured frame.
    Static,
    /// Shifts the textured base by `(dx, dy)` per frame, wrapping around the
    /// frame edges.
    Translate(i32, i32),
    /// Independent uniform noise per frame from a seeded generator; two runs
    /// with the same seed are bitwise identical.
    Noise(u64),
}

/// The separable wave texture sampled with an integer shift.
///
/// Its block SAD under pure translation splits into two per-axis terms that
/// strictly increase with the displacement error (up to the quarter-period
/// where the pattern-reachable region ends), so window searches descend
/// straight to the true shift. Frame sides that are multiples of 16 keep
/// the texture seamless under the wrap-around shift.
fn textured(width: usize, height: usize, shift_x: i32, shift_y: i32) -> Frame {
    let mut luma = Vec::with_capacity(width * height);
    for y in 0..height {
        let wy = WAVE[(y as i32 + shift_y).rem_euclid(16) as usize];
        for x in 0..width {
            let wx = WAVE[(x as i32 + shift_x).rem_euclid(16) as usize];
            luma.push((128 + wx + wy) as u8);
        }
    }
    Frame::new(width, height, luma).expect("constructed length matches")
}

/// Generates `frames` deterministic frames of the chosen kind.
pub fn synth_sequence(kind: SynthKind, width: usize, height: usize, frames: usize) -> Vec<Frame> {
    match kind {
        SynthKind::Static => {
            let f = textured(width, height, 0, 0);
            vec![f; frames]
        }
        SynthKind::Translate(dx, dy) => (0..frames)
            .map(|t| textured(width, height, t as i32 * dx, t as i32 * dy))
            .collect(),
        SynthKind::Noise(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..frames)
                .map(|_| {
                    let mut luma = vec![0u8; width * height];
                    rng.fill_bytes(&mut luma);
                    Frame::new(width, height, luma).expect("constructed length matches")
                })
                .collect()
        }
    }
}
