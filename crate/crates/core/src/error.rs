use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("luma plane has {actual} samples, expected {expected} ({width}x{height})")]
    LumaLength {
        width: usize,
        height: usize,
        expected: usize,
        actual: usize,
    },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error(
        "frame {width}x{height} is not tiled by {block_size}x{block_size} blocks (use --crop)"
    )]
    FrameTiling {
        width: usize,
        height: usize,
        block_size: usize,
    },

    #[error("frame dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),

    #[error("candidate block displaced by ({dx},{dy}) falls outside the reference frame")]
    OutOfBounds { dx: i32, dy: i32 },

    #[error("pattern kind {0} does not support this operation")]
    UnsupportedPattern(String),

    #[error("{0}")]
    InvalidArgument(String),

    #[error("unknown algorithm id '{0}'")]
    UnknownAlgorithm(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("no block satisfies the conditioning event: {0}")]
    EmptyCondition(String),

    #[error("not a Y4M stream: bad magic")]
    Y4mBadMagic,

    #[error("malformed Y4M header: {0}")]
    Y4mHeader(String),

    #[error("unsupported Y4M colorspace '{0}' (only 420-family and mono)")]
    Y4mColorspace(String),

    #[error("truncated frame payload (frame {0})")]
    TruncatedFrame(usize),

    #[error("raw file length {len} is not a multiple of the frame stride {stride}")]
    RawLength { len: u64, stride: u64 },

    #[error("malformed region file: {0}")]
    RegionFile(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
