use std::fmt;

/// Errors from image decoding, histogram construction, and threshold search.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// PGM magic number, dimensions, or header tokens could not be parsed.
    MalformedHeader(String),
    /// PGM maxval exceeds 255; only 8-bit grayscale is supported.
    UnsupportedMaxval(u32),
    /// Pixel data ended before `width * height` samples were read.
    TruncatedData { expected: usize, got: usize },
    /// An ASCII sample does not fit in 8 bits.
    InvalidSample(u32),
    /// Image constructed with inconsistent dimensions or pixel buffer.
    InvalidImage(String),
    /// The 3x3 neighborhood average needs at least a 3x3 image.
    ImageTooSmall { width: usize, height: usize },
    /// The entropic index must be a positive finite real.
    InvalidQ(f64),
    /// No threshold candidate splits the histogram into two nonempty classes.
    DegenerateHistogram,
    /// A histogram with zero total mass.
    EmptyHistogram,
    /// Synthetic image parameters out of range.
    InvalidParams(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::MalformedHeader(msg) => write!(f, "malformed PGM header: {msg}"),
            Error::UnsupportedMaxval(v) => write!(f, "unsupported maxval {v} (must be <= 255)"),
            Error::TruncatedData { expected, got } => {
                write!(
                    f,
                    "truncated pixel data: expected {expected} samples, got {got}"
                )
            }
            Error::InvalidSample(v) => write!(f, "sample value {v} does not fit in 8 bits"),
            Error::InvalidImage(msg) => write!(f, "invalid image: {msg}"),
            Error::ImageTooSmall { width, height } => {
                write!(
                    f,
                    "image {width}x{height} is too small for a 3x3 neighborhood"
                )
            }
            Error::InvalidQ(q) => write!(f, "entropic index q = {q} is not a positive real"),
            Error::DegenerateHistogram => {
                write!(
                    f,
                    "degenerate histogram: no candidate separates two classes"
                )
            }
            Error::EmptyHistogram => write!(f, "histogram has zero total mass"),
            Error::InvalidParams(msg) => write!(f, "invalid generator parameters: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
