//! 8-bit grayscale rasters, PGM (P2/P5) decoding and encoding, and binarization.
//!
//! Both netpbm variants are supported for input and output: P2 (ASCII
//! samples) and P5 (one raw byte per sample, maxval <= 255). Header comments
//! starting with `#` are skipped. Images with maxval below 255 are accepted
//! and their values are used as-is, without rescaling.

use crate::error::{Error, Result};

/// An 8-bit grayscale image stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl GrayImage {
    /// Builds an image from row-major pixel data.
    ///
    /// Both dimensions must be positive and `pixels.len()` must equal
    /// `width * height`.
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidImage(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width
            .checked_mul(height)
            .ok_or_else(|| Error::InvalidImage("dimension product overflows".into()))?;
        if pixels.len() != expected {
            return Err(Error::InvalidImage(format!(
                "{}x{} needs {} pixels, got {}",
                width,
                height,
                expected,
                pixels.len()
            )));
        }
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    /// Pixel at column `x`, row `y`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y * self.width + x]
    }
}

/// A binarized image whose pixels are restricted to {0, 255}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryImage {
    inner: GrayImage,
}

impl BinaryImage {
    /// Wraps a grayscale image after checking that every pixel is 0 or 255.
    pub fn new(img: GrayImage) -> Result<Self> {
        if let Some(&bad) = img.pixels.iter().find(|&&p| p != 0 && p != 255) {
            return Err(Error::InvalidImage(format!(
                "binary image contains value {bad}, expected only 0 or 255"
            )));
        }
        Ok(BinaryImage { inner: img })
    }

    pub fn width(&self) -> usize {
        self.inner.width
    }

    pub fn height(&self) -> usize {
        self.inner.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.inner.pixels
    }

    /// Borrows the raster as a plain grayscale image (for encoding or
    /// re-thresholding).
    pub fn as_gray(&self) -> &GrayImage {
        &self.inner
    }
}

/// PGM encoding variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PgmVariant {
    /// ASCII "plain" encoding.
    P2,
    /// Binary "raw" encoding, one byte per sample.
    P5,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

fn is_pgm_whitespace(b: u8) -> bool {
    matches!(b, b' ' | b'\t' | b'\r' | b'\n' | 0x0b | 0x0c)
}

impl<'a> Cursor<'a> {
    fn new(bytes: &'a [u8]) -> Self {
        Cursor { bytes, pos: 0 }
    }

    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if is_pgm_whitespace(b) {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        while self.pos < self.bytes.len() && !is_pgm_whitespace(self.bytes[self.pos]) {
            self.pos += 1;
        }
        if self.pos > start {
            Some(&self.bytes[start..self.pos])
        } else {
            None
        }
    }

    fn number(&mut self, what: &str) -> Result<u64> {
        let tok = self
            .token()
            .ok_or_else(|| Error::MalformedHeader(format!("missing {what}")))?;
        parse_ascii_number(tok)
            .ok_or_else(|| Error::MalformedHeader(format!("invalid {what} token")))
    }
}

fn parse_ascii_number(tok: &[u8]) -> Option<u64> {
    if tok.is_empty() {
        return None;
    }
    let mut value: u64 = 0;
    for &b in tok {
        if !b.is_ascii_digit() {
            return None;
        }
        value = value.checked_mul(10)?.checked_add((b - b'0') as u64)?;
    }
    Some(value)
}

/// Decodes a P2 or P5 PGM byte stream into a grayscale image.
///
/// The same raster encoded as P2 and as P5 decodes to identical images.
pub fn read_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let mut cur = Cursor::new(bytes);
    let magic = cur
        .token()
        .ok_or_else(|| Error::MalformedHeader("missing magic number".into()))?;
    let raw = match magic {
        b"P2" => false,
        b"P5" => true,
        other => {
            return Err(Error::MalformedHeader(format!(
                "unsupported magic {:?}",
                String::from_utf8_lossy(other)
            )))
        }
    };

    let width = cur.number("width")? as usize;
    let height = cur.number("height")? as usize;
    if width == 0 || height == 0 {
        return Err(Error::MalformedHeader(format!(
            "dimensions must be positive, got {width}x{height}"
        )));
    }
    let maxval = cur.number("maxval")?;
    if maxval == 0 {
        return Err(Error::MalformedHeader("maxval must be positive".into()));
    }
    if maxval > 255 {
        return Err(Error::UnsupportedMaxval(maxval as u32));
    }
    let expected = width
        .checked_mul(height)
        .ok_or_else(|| Error::MalformedHeader("dimension product overflows".into()))?;

    let pixels = if raw {
        // Exactly one whitespace byte separates the maxval from the raster.
        match bytes.get(cur.pos) {
            Some(&b) if is_pgm_whitespace(b) => cur.pos += 1,
            _ => {
                return Err(Error::MalformedHeader(
                    "missing whitespace between maxval and raster".into(),
                ))
            }
        }
        let data = &bytes[cur.pos..];
        if data.len() < expected {
            return Err(Error::TruncatedData {
                expected,
                got: data.len(),
            });
        }
        data[..expected].to_vec()
    } else {
        let mut pixels = Vec::with_capacity(expected);
        while pixels.len() < expected {
            let tok = match cur.token() {
                Some(tok) => tok,
                None => {
                    return Err(Error::TruncatedData {
                        expected,
                        got: pixels.len(),
                    })
                }
            };
            let value = parse_ascii_number(tok)
                .ok_or_else(|| Error::MalformedHeader("invalid sample token".into()))?;
            if value > 255 {
                return Err(Error::InvalidSample(value as u32));
            }
            pixels.push(value as u8);
        }
        pixels
    };

    GrayImage::new(width, height, pixels)
}

/// Encodes a grayscale image as PGM with maxval 255.
///
/// P2 output places one image row per text line; P5 output writes exactly
/// one whitespace byte after the maxval, then the raw samples.
/// `read_pgm(write_pgm(img, v))` reproduces `img` for both variants.
pub fn write_pgm(img: &GrayImage, variant: PgmVariant) -> Vec<u8> {
    let magic = match variant {
        PgmVariant::P2 => "P2",
        PgmVariant::P5 => "P5",
    };
    let mut out = format!("{}\n{} {}\n255\n", magic, img.width, img.height).into_bytes();
    match variant {
        PgmVariant::P2 => {
            use std::fmt::Write;
            let mut line = String::new();
            for row in img.pixels.chunks(img.width) {
                line.clear();
                for (i, &p) in row.iter().enumerate() {
                    if i > 0 {
                        line.push(' ');
                    }
                    let _ = write!(line, "{p}");
                }
                line.push('\n');
                out.extend_from_slice(line.as_bytes());
            }
        }
        PgmVariant::P5 => out.extend_from_slice(&img.pixels),
    }
    out
}

/// Thresholds an image: pixels `<= t` map to 0, pixels `> t` map to 255.
pub fn binarize(img: &GrayImage, t: u8) -> BinaryImage {
    let pixels = img
        .pixels
        .iter()
        .map(|&p| if p <= t { 0 } else { 255 })
        .collect();
    BinaryImage {
        inner: GrayImage {
            width: img.width,
            height: img.height,
            pixels,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_ascii_pgm() {
        let img = read_pgm(b"P2\n2 2\n255\n0 255 128 7\n").unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 2);
        assert_eq!(img.pixels(), &[0, 255, 128, 7]);
    }

    #[test]
    fn ascii_and_raw_decode_identically() {
        let ascii = read_pgm(b"P2\n2 2\n255\n0 255 128 7\n").unwrap();
        let raw = read_pgm(b"P5\n2 2\n255\n\x00\xff\x80\x07").unwrap();
        assert_eq!(ascii, raw);
    }

    #[test]
    fn header_comments_are_skipped() {
        let img = read_pgm(b"P2\n# a comment\n2 1 # trailing\n255\n3 4\n").unwrap();
        assert_eq!(img.pixels(), &[3, 4]);
        let raw = read_pgm(b"P5\n# c\n2 1\n# d\n255\n\x03\x04").unwrap();
        assert_eq!(raw.pixels(), &[3, 4]);
    }

    #[test]
    fn truncated_ascii_data_is_rejected() {
        let err = read_pgm(b"P2\n3 3\n255\n0 1 2 3 4 5 6 7\n").unwrap_err();
        assert_eq!(
            err,
            Error::TruncatedData {
                expected: 9,
                got: 8
            }
        );
    }

    #[test]
    fn truncated_raw_data_is_rejected() {
        let err = read_pgm(b"P5\n2 2\n255\n\x00\x01\x02").unwrap_err();
        assert_eq!(
            err,
            Error::TruncatedData {
                expected: 4,
                got: 3
            }
        );
    }

    #[test]
    fn oversized_maxval_is_rejected() {
        let err = read_pgm(b"P2\n1 1\n65535\n12\n").unwrap_err();
        assert_eq!(err, Error::UnsupportedMaxval(65535));
    }

    #[test]
    fn small_maxval_values_are_used_as_is() {
        let img = read_pgm(b"P2\n2 1\n100\n0 100\n").unwrap();
        assert_eq!(img.pixels(), &[0, 100]);
    }

    #[test]
    fn bad_magic_is_rejected() {
        assert!(matches!(
            read_pgm(b"P6\n1 1\n255\n\x00"),
            Err(Error::MalformedHeader(_))
        ));
        assert!(matches!(read_pgm(b""), Err(Error::MalformedHeader(_))));
    }

    #[test]
    fn oversigned_ascii_sample_is_rejected() {
        let err = read_pgm(b"P2\n1 1\n255\n300\n").unwrap_err();
        assert_eq!(err, Error::InvalidSample(300));
    }

    #[test]
    fn writes_single_pixel_ascii() {
        let img = GrayImage::new(1, 1, vec![0]).unwrap();
        assert_eq!(write_pgm(&img, PgmVariant::P2), b"P2\n1 1\n255\n0\n");
    }

    #[test]
    fn writes_raw_payload_bytes() {
        let img = GrayImage::new(2, 1, vec![5, 250]).unwrap();
        let bytes = write_pgm(&img, PgmVariant::P5);
        assert_eq!(&bytes[..bytes.len() - 2], b"P5\n2 1\n255\n");
        assert_eq!(&bytes[bytes.len() - 2..], &[0x05, 0xFA]);
    }

    #[test]
    fn binarize_splits_at_threshold() {
        let img = GrayImage::new(2, 1, vec![10, 200]).unwrap();
        assert_eq!(binarize(&img, 100).pixels(), &[0, 255]);
    }

    #[test]
    fn binarize_at_255_clears_everything() {
        let img = GrayImage::new(3, 1, vec![0, 128, 255]).unwrap();
        assert_eq!(binarize(&img, 255).pixels(), &[0, 0, 0]);
    }

    #[test]
    fn binarize_at_zero_keeps_only_zero_low() {
        let img = GrayImage::new(2, 1, vec![0, 1]).unwrap();
        assert_eq!(binarize(&img, 0).pixels(), &[0, 255]);
    }

    #[test]
    fn rebinarizing_a_binary_image_stays_binary() {
        let img = GrayImage::new(4, 1, vec![3, 77, 200, 255]).unwrap();
        let bin = binarize(&img, 90);
        for t in [0u8, 1, 100, 254] {
            let again = binarize(bin.as_gray(), t);
            assert!(again.pixels().iter().all(|&p| p == 0 || p == 255));
        }
    }

    #[test]
    fn binary_image_rejects_intermediate_values() {
        let img = GrayImage::new(2, 1, vec![0, 17]).unwrap();
        assert!(BinaryImage::new(img).is_err());
    }

    #[test]
    fn image_constructor_checks_shape() {
        assert!(GrayImage::new(0, 3, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![1, 2, 3]).is_err());
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        ((1usize..24), (1usize..24)).prop_flat_map(|(w, h)| {
            proptest::collection::vec(any::<u8>(), w * h)
                .prop_map(move |pixels| GrayImage::new(w, h, pixels).unwrap())
        })
    }

    proptest! {
        #[test]
        fn roundtrip_is_identity(img in arb_image()) {
            prop_assert_eq!(&read_pgm(&write_pgm(&img, PgmVariant::P2)).unwrap(), &img);
            prop_assert_eq!(&read_pgm(&write_pgm(&img, PgmVariant::P5)).unwrap(), &img);
        }

        #[test]
        fn binarize_is_monotone(img in arb_image(), t1 in any::<u8>(), t2 in any::<u8>()) {
            let (lo, hi) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
            let at_lo = binarize(&img, lo);
            let at_hi = binarize(&img, hi);
            // Raising the threshold never flips a pixel from 0 back to 255.
            for (a, b) in at_lo.pixels().iter().zip(at_hi.pixels()) {
                prop_assert!(!(*a == 0 && *b == 255));
            }
        }
    }
}
