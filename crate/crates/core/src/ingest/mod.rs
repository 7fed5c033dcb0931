//! Video ingestion (Y4M and headerless planar YUV) and deterministic
//! synthetic sequences.
//!
//! Readers stream one luma frame at a time; chroma planes are read and
//! discarded. Only 8-bit depth is supported.

mod raw;
mod synth;
mod y4m;

pub use raw::{RawFormat, RawReader};
pub use synth::{synth_sequence, SynthKind};
pub use y4m::{write_y4m, Y4mReader};

use crate::error::Result;
use crate::frame::Frame;
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

/// Where a sequence comes from and how to decode it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum SequenceSource {
    Y4m {
        path: PathBuf,
    },
    Raw {
        path: PathBuf,
        width: usize,
        height: usize,
        format: RawFormat,
    },
    Synth {
        kind: SynthKind,
        width: usize,
        height: usize,
        frames: usize,
    },
}

/// A streaming iterator of decoded luma frames.
pub enum FrameStream {
    Y4m(Y4mReader<std::io::BufReader<std::fs::File>>),
    Raw(RawReader),
    Synth(std::vec::IntoIter<Frame>),
}

impl Iterator for FrameStream {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        match self {
            FrameStream::Y4m(r) => r.next(),
            FrameStream::Raw(r) => r.next(),
            FrameStream::Synth(it) => it.next().map(Ok),
        }
    }
}

impl SequenceSource {
    pub fn open(&self) -> Result<FrameStream> {
        match self {
            SequenceSource::Y4m { path } => Ok(FrameStream::Y4m(Y4mReader::open(path)?)),
            SequenceSource::Raw {
                path,
                width,
                height,
                format,
            } => Ok(FrameStream::Raw(RawReader::open(
                path, *width, *height, *format,
            )?)),
            SequenceSource::Synth {
                kind,
                width,
                height,
                frames,
            } => Ok(FrameStream::Synth(
                synth_sequence(*kind, *width, *height, *frames).into_iter(),
            )),
        }
    }

    /// Frame count when it is knowable up front (raw and synthetic inputs).
    pub fn frame_count(&self) -> Result<Option<usize>> {
        match self {
            SequenceSource::Y4m { .. } => Ok(None),
            SequenceSource::Raw {
                path,
                width,
                height,
                format,
            } => Ok(Some(raw::frame_count(path, *width, *height, *format)?)),
            SequenceSource::Synth { frames, .. } => Ok(Some(*frames)),
        }
    }
}
