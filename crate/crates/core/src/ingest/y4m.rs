//! Y4M (YUV4MPEG2) reading and a minimal mono writer.

use crate::error::{Error, Result};
use crate::frame::Frame;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

const MAGIC: &str = "YUV4MPEG2";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Chroma {
    /// Any 8-bit 420 family (420, 420jpeg, 420mpeg2, 420paldv).
    C420,
    Mono,
}

/// Streaming Y4M luma reader. Chroma planes are skipped per the declared
/// subsampling; FRAME delimiter lines may carry parameters.
pub struct Y4mReader<R: BufRead> {
    inner: R,
    width: usize,
    height: usize,
    chroma: Chroma,
    frame_idx: usize,
}

impl Y4mReader<BufReader<File>> {
    pub fn open<P: AsRef<Path>>(path: P) -> Result<Self> {
        Y4mReader::new(BufReader::new(File::open(path)?))
    }
}

impl<R: BufRead> Y4mReader<R> {
    pub fn new(mut inner: R) -> Result<Self> {
        let header = read_line(&mut inner)?.ok_or(Error::Y4mBadMagic)?;
        let mut tokens = header.split(' ').filter(|t| !t.is_empty());
        if tokens.next() != Some(MAGIC) {
            return Err(Error::Y4mBadMagic);
        }
        let mut width = None;
        let mut height = None;
        let mut chroma = Chroma::C420;
        for token in tokens {
            let (tag, value) = token.split_at(1);
            match tag {
                "W" => width = Some(parse_dim(value)?),
                "H" => height = Some(parse_dim(value)?),
                "C" => {
                    chroma = match value {
                        "420" | "420jpeg" | "420mpeg2" | "420paldv" => Chroma::C420,
                        "mono" => Chroma::Mono,
                        other => return Err(Error::Y4mColorspace(other.to_string())),
                    }
                }
                // Frame rate, interlacing, aspect and extensions do not
                // affect luma extraction.
                "F" | "I" | "A" | "X" => {}
                _ => return Err(Error::Y4mHeader(format!("unknown parameter '{token}'"))),
            }
        }
        let width = width.ok_or_else(|| Error::Y4mHeader("missing W parameter".into()))?;
        let height = height.ok_or_else(|| Error::Y4mHeader("missing H parameter".into()))?;
        if chroma == Chroma::C420 && (width % 2 != 0 || height % 2 != 0) {
            return Err(Error::Y4mHeader("4:2:0 stream with odd dimensions".into()));
        }
        Ok(Self {
            inner,
            width,
            height,
            chroma,
            frame_idx: 0,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    fn read_frame(&mut self) -> Result<Option<Frame>> {
        let Some(line) = read_line(&mut self.inner)? else {
            return Ok(None);
        };
        if line != "FRAME" && !line.starts_with("FRAME ") {
            return Err(Error::Y4mHeader(format!(
                "expected FRAME marker, got '{line}'"
            )));
        }
        let mut luma = vec![0u8; self.width * self.height];
        self.inner
            .read_exact(&mut luma)
            .map_err(|_| Error::TruncatedFrame(self.frame_idx))?;
        if self.chroma == Chroma::C420 {
            let chroma_len = (self.width / 2) * (self.height / 2) * 2;
            let mut sink = vec![0u8; chroma_len];
            self.inner
                .read_exact(&mut sink)
                .map_err(|_| Error::TruncatedFrame(self.frame_idx))?;
        }
        self.frame_idx += 1;
        Ok(Some(Frame::new(self.width, self.height, luma)?))
    }
}

impl<R: BufRead> Iterator for Y4mReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        self.read_frame().transpose()
    }
}

fn parse_dim(value: &str) -> Result<usize> {
    let v: usize = value
        .parse()
        .map_err(|_| Error::Y4mHeader(format!("bad dimension '{value}'")))?;
    if v == 0 {
        return Err(Error::Y4mHeader("zero dimension".into()));
    }
    Ok(v)
}

/// Reads a 0x0A-terminated header line; `None` at a clean end of stream.
fn read_line<R: BufRead>(r: &mut R) -> Result<Option<String>> {
    let mut buf = Vec::new();
    let n = r.read_until(b'\n', &mut buf)?;
    if n == 0 {
        return Ok(None);
    }
    if buf.last() == Some(&b'\n') {
        buf.pop();
    }
    String::from_utf8(buf)
        .map(Some)
        .map_err(|_| Error::Y4mHeader("non-ASCII header".into()))
}

/// Writes luma-only frames as a mono Y4M stream. Parsing the output yields
/// the input frames bit-exactly, which doubles as a debug check for the
/// reader.
pub fn write_y4m<W: Write>(w: &mut W, frames: &[Frame]) -> Result<()> {
    let Some(first) = frames.first() else {
        return Err(Error::EmptyInput("no frames to write".into()));
    };
    writeln!(
        w,
        "{MAGIC} W{} H{} F25:1 Ip A1:1 Cmono",
        first.width(),
        first.height()
    )?;
    for frame in frames {
        if frame.width() != first.width() || frame.height() != first.height() {
            return Err(Error::DimensionMismatch(
                frame.width(),
                frame.height(),
                first.width(),
                first.height(),
            ));
        }
        writeln!(w, "FRAME")?;
        w.write_all(frame.luma())?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reader(bytes: &[u8]) -> Result<Y4mReader<BufReader<&[u8]>>> {
        Y4mReader::new(BufReader::new(bytes))
    }

    #[test]
    fn minimal_mono_stream() {
        let bytes = b"YUV4MPEG2 W2 H2 Cmono\nFRAME\n\x0a\x14\x1e\x28";
        let frames: Vec<Frame> = reader(bytes).unwrap().map(|f| f.unwrap()).collect();
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].luma(), &[10, 20, 30, 40]);
    }

    #[test]
    fn c420_chroma_is_skipped() {
        let mut bytes = b"YUV4MPEG2 W2 H2 F30:1 C420jpeg\nFRAME\n".to_vec();
        bytes.extend_from_slice(&[10, 20, 30, 40]); // luma
        bytes.extend_from_slice(&[7, 9]); // cb, cr
        let frames: Vec<Frame> = reader(&bytes).unwrap().map(|f| f.unwrap()).collect();
        assert_eq!(frames[0].luma(), &[10, 20, 30, 40]);
    }

    #[test]
    fn bad_magic() {
        assert!(matches!(
            reader(b"JUNK W2 H2\n").err(),
            Some(Error::Y4mBadMagic)
        ));
    }

    #[test]
    fn missing_dimensions() {
        assert!(matches!(
            reader(b"YUV4MPEG2 W2\n").err(),
            Some(Error::Y4mHeader(_))
        ));
    }

    #[test]
    fn unsupported_colorspace() {
        assert!(matches!(
            reader(b"YUV4MPEG2 W2 H2 C444\n").err(),
            Some(Error::Y4mColorspace(_))
        ));
        assert!(matches!(
            reader(b"YUV4MPEG2 W2 H2 C420p10\n").err(),
            Some(Error::Y4mColorspace(_))
        ));
    }

    #[test]
    fn truncated_second_frame() {
        let mut bytes = b"YUV4MPEG2 W2 H2 Cmono\nFRAME\n".to_vec();
        bytes.extend_from_slice(&[1, 2, 3, 4]);
        bytes.extend_from_slice(b"FRAME\n");
        bytes.extend_from_slice(&[5, 6]); // short payload
        let results: Vec<_> = reader(&bytes).unwrap().collect();
        assert!(results[0].is_ok());
        assert!(matches!(results[1], Err(Error::TruncatedFrame(1))));
    }

    #[test]
    fn frame_marker_with_parameters() {
        let bytes = b"YUV4MPEG2 W2 H1 Cmono\nFRAME Xtag\n\x01\x02";
        let frames: Vec<Frame> = reader(bytes).unwrap().map(|f| f.unwrap()).collect();
        assert_eq!(frames[0].luma(), &[1, 2]);
    }

    #[test]
    fn write_then_parse_round_trips_luma() {
        let frames = vec![
            Frame::new(4, 2, (0u8..8).collect()).unwrap(),
            Frame::new(4, 2, (100u8..108).collect()).unwrap(),
        ];
        let mut buf = Vec::new();
        write_y4m(&mut buf, &frames).unwrap();
        let back: Vec<Frame> = reader(&buf).unwrap().map(|f| f.unwrap()).collect();
        assert_eq!(back, frames);
    }
}
