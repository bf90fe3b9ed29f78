//! The joint (gray value, 3x3 local average) histogram and its summed-area
//! prefix tables.
//!
//! For every pixel with a complete 3x3 neighborhood, the pair
//! `(f(x, y), g(x, y))` is tallied, where `g` is the floor of the
//! neighborhood mean. The resulting 256x256 probability mass function
//! `p(i, j)` is the input to the entropy criterion. Two summed-area tables,
//! one over `p` and one over `p^q` (over `p ln p` when q = 1), let any
//! rectangle sum be evaluated with four lookups, so each threshold
//! candidate costs O(1) instead of a double loop over gray levels.

use crate::error::{Error, Result};
use crate::imgio::GrayImage;

/// Number of gray levels per axis.
pub const LEVELS: usize = 256;

/// Width of the border excluded from histogram accumulation, in average
/// image pixels. 1 means every pixel with a complete 3x3 window counts;
/// set to 2 to also drop the outermost ring of averaged pixels.
pub(crate) const INTERIOR_MARGIN: usize = 1;

/// The 3x3 neighborhood average image, two pixels smaller than its source
/// in each dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvgImage {
    width: usize,
    height: usize,
    values: Vec<u8>,
}

impl AvgImage {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Average at interior coordinates; `(x, y)` indexes the average grid,
    /// which corresponds to source pixel `(x + 1, y + 1)`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.values[y * self.width + x]
    }
}

/// Computes `g(x, y) = floor(mean of the 3x3 neighborhood)` for every pixel
/// that has a complete neighborhood, i.e. everything at least one pixel
/// away from the border.
pub fn neighborhood_average(img: &GrayImage) -> Result<AvgImage> {
    let (w, h) = (img.width(), img.height());
    if w < 3 || h < 3 {
        return Err(Error::ImageTooSmall {
            width: w,
            height: h,
        });
    }
    let (ow, oh) = (w - 2, h - 2);
    let mut values = Vec::with_capacity(ow * oh);
    let pixels = img.pixels();
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let mut sum = 0u32;
            for dy in 0..3 {
                let row = (y + dy - 1) * w + (x - 1);
                sum += pixels[row] as u32 + pixels[row + 1] as u32 + pixels[row + 2] as u32;
            }
            values.push((sum / 9) as u8);
        }
    }
    Ok(AvgImage {
        width: ow,
        height: oh,
        values,
    })
}

/// Joint counts and probability mass function over (gray value, local
/// average) pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct JointHistogram {
    counts: Vec<u64>,
    pmf: Vec<f64>,
    total: u64,
}

impl JointHistogram {
    /// Convenience constructor chaining [`neighborhood_average`] and
    /// [`build_joint_histogram`].
    pub fn from_image(img: &GrayImage) -> Result<Self> {
        let avg = neighborhood_average(img)?;
        Ok(build_joint_histogram(img, &avg))
    }

    /// Builds a histogram directly from a 256x256 grid of counts
    /// (row index = gray value, column index = average).
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        assert_eq!(counts.len(), LEVELS * LEVELS, "counts grid must be 256x256");
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyHistogram);
        }
        let pmf = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(JointHistogram { counts, pmf, total })
    }

    #[inline]
    pub fn count(&self, i: u8, j: u8) -> u64 {
        self.counts[i as usize * LEVELS + j as usize]
    }

    /// Probability of the pair (gray value `i`, average `j`).
    #[inline]
    pub fn p(&self, i: u8, j: u8) -> f64 {
        self.pmf[i as usize * LEVELS + j as usize]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    /// CSV dump of the nonzero cells: one `i,j,count,p` line per cell,
    /// sorted by (i, j), probabilities with 13 significant digits.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        for i in 0..LEVELS {
            for j in 0..LEVELS {
                let c = self.counts[i * LEVELS + j];
                if c != 0 {
                    let _ = writeln!(out, "{},{},{},{:.12e}", i, j, c, self.pmf[i * LEVELS + j]);
                }
            }
        }
        out
    }
}

/// Accumulates the joint histogram of `img` against its average image.
///
/// `avg` must have been produced from `img` by [`neighborhood_average`].
/// The pmf is normalized by the number of accumulated interior pixels, so
/// it sums to 1.
pub fn build_joint_histogram(img: &GrayImage, avg: &AvgImage) -> JointHistogram {
    assert_eq!(
        (avg.width, avg.height),
        (img.width() - 2, img.height() - 2),
        "average image does not match the source image"
    );
    accumulate(img, avg, INTERIOR_MARGIN)
}

fn accumulate(img: &GrayImage, avg: &AvgImage, margin: usize) -> JointHistogram {
    debug_assert!(margin >= 1);
    let skip = margin - 1;
    let mut counts = vec![0u64; LEVELS * LEVELS];
    let mut total = 0u64;
    for ay in skip..avg.height.saturating_sub(skip) {
        for ax in skip..avg.width.saturating_sub(skip) {
            let f = img.get(ax + 1, ay + 1);
            let g = avg.get(ax, ay);
            counts[f as usize * LEVELS + g as usize] += 1;
            total += 1;
        }
    }
    let pmf = counts.iter().map(|&c| c as f64 / total as f64).collect();
    JointHistogram { counts, pmf, total }
}

/// Which summed-area table a rectangle sum reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    /// Sums of `p`.
    P,
    /// Sums of `p^q`, or of `p ln p` when the tables were built with q = 1.
    Pq,
}

/// Summed-area tables over `p` and `p^q` (257x257, with a zero halo row and
/// column), plus an exact integer table over the raw counts used for
/// validity tests.
#[derive(Debug, Clone)]
pub struct PrefixTables {
    q: f64,
    total: u64,
    cum_p: Vec<f64>,
    cum_pq: Vec<f64>,
    cum_n: Vec<u64>,
}

const TDIM: usize = LEVELS + 1;

#[inline]
fn pow_q(p: f64, q: f64) -> f64 {
    // 0^q is taken as 0 for every q > 0.
    if p > 0.0 {
        p.powf(q)
    } else {
        0.0
    }
}

#[inline]
fn p_ln_p(p: f64) -> f64 {
    // 0 ln 0 is taken as 0.
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

fn summed_area_f64(values: impl Fn(usize) -> f64) -> Vec<f64> {
    let mut cum = vec![0.0f64; TDIM * TDIM];
    for i in 0..LEVELS {
        let mut row = 0.0;
        for j in 0..LEVELS {
            row += values(i * LEVELS + j);
            cum[(i + 1) * TDIM + (j + 1)] = cum[i * TDIM + (j + 1)] + row;
        }
    }
    cum
}

fn summed_area_u64(values: &[u64]) -> Vec<u64> {
    let mut cum = vec![0u64; TDIM * TDIM];
    for i in 0..LEVELS {
        let mut row = 0u64;
        for j in 0..LEVELS {
            row += values[i * LEVELS + j];
            cum[(i + 1) * TDIM + (j + 1)] = cum[i * TDIM + (j + 1)] + row;
        }
    }
    cum
}

/// Builds the summed-area tables for entropic index `q`.
///
/// For q = 1 the second table stores cumulative `p ln p` so the Shannon
/// criterion can reuse the same O(1) rectangle machinery.
pub fn build_prefix_tables(hist: &JointHistogram, q: f64) -> Result<PrefixTables> {
    validate_q(q)?;
    let pmf = hist.pmf();
    let cum_p = summed_area_f64(|idx| pmf[idx]);
    let cum_pq = if q == 1.0 {
        summed_area_f64(|idx| p_ln_p(pmf[idx]))
    } else {
        summed_area_f64(|idx| pow_q(pmf[idx], q))
    };
    let cum_n = summed_area_u64(hist.counts());
    Ok(PrefixTables {
        q,
        total: hist.total(),
        cum_p,
        cum_pq,
        cum_n,
    })
}

pub(crate) fn validate_q(q: f64) -> Result<()> {
    if !q.is_finite() || q <= 0.0 {
        return Err(Error::InvalidQ(q));
    }
    Ok(())
}

impl PrefixTables {
    pub fn q(&self) -> f64 {
        self.q
    }

    pub(crate) fn total(&self) -> u64 {
        self.total
    }

    /// Rebuilds only the `p^q` table for a new index, reusing the tables
    /// over `p` and the counts. `hist` must be the histogram these tables
    /// were built from.
    pub fn with_new_q(&self, hist: &JointHistogram, q: f64) -> Result<PrefixTables> {
        validate_q(q)?;
        assert_eq!(
            hist.total(),
            self.total,
            "histogram does not match the tables"
        );
        let pmf = hist.pmf();
        let cum_pq = if q == 1.0 {
            summed_area_f64(|idx| p_ln_p(pmf[idx]))
        } else {
            summed_area_f64(|idx| pow_q(pmf[idx], q))
        };
        Ok(PrefixTables {
            q,
            total: self.total,
            cum_p: self.cum_p.clone(),
            cum_pq,
            cum_n: self.cum_n.clone(),
        })
    }

    /// Cumulative sum of `p` over `i < a, j < b`; `a` and `b` range over
    /// `0..=256`.
    #[inline]
    pub fn cum_p(&self, a: usize, b: usize) -> f64 {
        self.cum_p[a * TDIM + b]
    }

    /// Cumulative sum of `p^q` (or `p ln p` at q = 1) over `i < a, j < b`.
    #[inline]
    pub fn cum_pq(&self, a: usize, b: usize) -> f64 {
        self.cum_pq[a * TDIM + b]
    }

    /// Sum over the inclusive gray-level rectangle `[i0, i1] x [j0, j1]`
    /// by four-corner inclusion-exclusion.
    #[inline]
    pub fn rect_sum(&self, which: TableKind, i0: u8, i1: u8, j0: u8, j1: u8) -> f64 {
        debug_assert!(i0 <= i1 && j0 <= j1);
        let tbl = match which {
            TableKind::P => &self.cum_p,
            TableKind::Pq => &self.cum_pq,
        };
        let (a0, a1) = (i0 as usize, i1 as usize + 1);
        let (b0, b1) = (j0 as usize, j1 as usize + 1);
        tbl[a1 * TDIM + b1] - tbl[a0 * TDIM + b1] - tbl[a1 * TDIM + b0] + tbl[a0 * TDIM + b0]
    }

    /// Exact count of accumulated pixels in the inclusive rectangle.
    #[inline]
    pub(crate) fn rect_count(&self, i0: u8, i1: u8, j0: u8, j1: u8) -> u64 {
        let (a0, a1) = (i0 as usize, i1 as usize + 1);
        let (b0, b1) = (j0 as usize, j1 as usize + 1);
        self.cum_n[a1 * TDIM + b1] + self.cum_n[a0 * TDIM + b0]
            - self.cum_n[a0 * TDIM + b1]
            - self.cum_n[a1 * TDIM + b0]
    }
}
