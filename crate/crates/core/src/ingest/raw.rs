//! Headerless planar YUV reading.

use crate::error::{Error, Result};
use crate::frame::Frame;
use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RawFormat {
    /// Planar 4:2:0, frame stride `w*h*3/2`.
    Yuv420,
    /// Luma only, frame stride `w*h`.
    YOnly,
}

impl RawFormat {
    fn stride(self, width: usize, height: usize) -> Result<u64> {
        match self {
            RawFormat::Yuv420 => {
                if !width.is_multiple_of(2) || !height.is_multiple_of(2) {
                    return Err(Error::InvalidArgument(
                        "4:2:0 raw input needs even dimensions".into(),
                    ));
                }
                Ok((width * height) as u64 * 3 / 2)
            }
            RawFormat::YOnly => Ok((width * height) as u64),
        }
    }
}

/// Number of whole frames in the file; errors when the length is not an
/// exact multiple of the frame stride.
pub fn frame_count<P: AsRef<Path>>(
    path: P,
    width: usize,
    height: usize,
    format: RawFormat,
) -> Result<usize> {
    let stride = format.stride(width, height)?;
    let len = std::fs::metadata(path)?.len();
    if len % stride != 0 {
        return Err(Error::RawLength { len, stride });
    }
    Ok((len / stride) as usize)
}

/// Streaming luma reader over a headerless planar file.
pub struct RawReader {
    inner: BufReader<File>,
    width: usize,
    height: usize,
    format: RawFormat,
    remaining: usize,
    frame_idx: usize,
}

impl RawReader {
    pub fn open<P: AsRef<Path>>(
        path: P,
        width: usize,
        height: usize,
        format: RawFormat,
    ) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidArgument("zero raw dimensions".into()));
        }
        let remaining = frame_count(&path, width, height, format)?;
        Ok(Self {
            inner: BufReader::new(File::open(path)?),
            width,
            height,
            format,
            remaining,
            frame_idx: 0,
        })
    }

    pub fn frame_count(&self) -> usize {
        self.remaining + self.frame_idx
    }

    fn read_frame(&mut self) -> Result<Option<Frame>> {
        if self.remaining == 0 {
            return Ok(None);
        }
        let mut luma = vec![0u8; self.width * self.height];
        self.inner
            .read_exact(&mut luma)
            .map_err(|_| Error::TruncatedFrame(self.frame_idx))?;
        if self.format == RawFormat::Yuv420 {
            let mut chroma = vec![0u8; self.width * self.height / 2];
            self.inner
                .read_exact(&mut chroma)
                .map_err(|_| Error::TruncatedFrame(self.frame_idx))?;
        }
        self.remaining -= 1;
        self.frame_idx += 1;
        Ok(Some(Frame::new(self.width, self.height, luma)?))
    }
}

impl Iterator for RawReader {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        self.read_frame().transpose()
    }
}
