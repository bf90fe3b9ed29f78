//! One-dimensional Tsallis/Shannon entropic thresholding over the plain
//! gray-level histogram, as a comparison baseline.
//!
//! The criterion is the 2D one collapsed to a single index: classes
//! `[0, t]` and `[t+1, 255]` normalized by `P(t)` and `1 - P(t)`. Unlike
//! the 2D case the normalizers are exact here (every pixel falls in one of
//! the two classes), so the q -> 1 limit genuinely recovers the Shannon
//! criterion at every candidate.

use crate::error::{Error, Result};
use crate::histogram::{validate_q, LEVELS};
use crate::imgio::GrayImage;

/// Plain 256-bin gray-level histogram with its probability mass function.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram1D {
    counts: Vec<u64>,
    pmf: Vec<f64>,
    total: u64,
}

impl Histogram1D {
    /// Builds a histogram from raw 256-bin counts.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        assert_eq!(counts.len(), LEVELS, "histogram must have 256 bins");
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::EmptyHistogram);
        }
        let pmf = counts.iter().map(|&c| c as f64 / total as f64).collect();
        Ok(Histogram1D { counts, pmf, total })
    }

    #[inline]
    pub fn count(&self, v: u8) -> u64 {
        self.counts[v as usize]
    }

    #[inline]
    pub fn p(&self, v: u8) -> f64 {
        self.pmf[v as usize]
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }
}

/// Tallies every pixel of the image; no border exclusion.
pub fn build_histogram_1d(img: &GrayImage) -> Histogram1D {
    let mut counts = vec![0u64; LEVELS];
    for &p in img.pixels() {
        counts[p as usize] += 1;
    }
    Histogram1D::from_counts(counts).expect("images are nonempty")
}

/// A 1D threshold and the criterion value it attains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold1d {
    pub t_star: u8,
    pub criterion: f64,
}

/// Maximizes the pseudo-additive two-class criterion over the 256 cut
/// points; q = 1 uses the Shannon form. Ties break toward the smallest t.
pub fn find_threshold_1d(hist: &Histogram1D, q: f64) -> Result<Threshold1d> {
    validate_q(q)?;

    // Prefix sums over p and p^q (p ln p at q = 1); index k covers bins < k.
    let mut cum_p = [0.0f64; LEVELS + 1];
    let mut cum_w = [0.0f64; LEVELS + 1];
    let mut cum_n = [0u64; LEVELS + 1];
    for v in 0..LEVELS {
        let p = hist.pmf[v];
        let w = if p > 0.0 {
            if q == 1.0 {
                p * p.ln()
            } else {
                p.powf(q)
            }
        } else {
            0.0
        };
        cum_p[v + 1] = cum_p[v] + p;
        cum_w[v + 1] = cum_w[v] + w;
        cum_n[v + 1] = cum_n[v] + hist.counts[v];
    }
    let total_w = cum_w[LEVELS];

    let mut best = f64::NEG_INFINITY;
    let mut best_t = 0u8;
    for t in 0..LEVELS {
        let n_low = cum_n[t + 1];
        if n_low == 0 || n_low == hist.total {
            continue;
        }
        let p_low = cum_p[t + 1];
        let w_low = cum_w[t + 1];
        let w_high = total_w - w_low;
        let value = if q == 1.0 {
            let s_a = p_low.ln() - w_low / p_low;
            let s_b = (1.0 - p_low).ln() - w_high / (1.0 - p_low);
            s_a + s_b
        } else {
            let s_a = (1.0 - w_low / p_low.powf(q)) / (q - 1.0);
            let s_b = (1.0 - w_high / (1.0 - p_low).powf(q)) / (q - 1.0);
            s_a + s_b + (1.0 - q) * s_a * s_b
        };
        if value > best {
            best = value;
            best_t = t as u8;
        }
    }

    if best == f64::NEG_INFINITY {
        return Err(Error::DegenerateHistogram);
    }
    Ok(Threshold1d {
        t_star: best_t,
        criterion: best,
    })
}
