//! Exhaustive search for the criterion-maximizing threshold, over the full
//! (t, s) grid or restricted to the diagonal t = s.
//!
//! Every candidate is scored in O(1) through the prefix tables, so a FULL
//! search costs 256^2 evaluations and a DIAGONAL search 256, both dominated
//! by the table build. Ties are broken toward the lexicographically
//! smallest (t, s); scanning in ascending order with a strict comparison
//! makes that automatic and keeps results deterministic.

use crate::entropy::{criterion, ThresholdPair};
use crate::error::{Error, Result};
use crate::histogram::{build_prefix_tables, validate_q, JointHistogram, PrefixTables, LEVELS};

/// Candidate set to scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMode {
    /// All 256 x 256 threshold pairs.
    Full,
    /// Only the 256 pairs with t = s.
    Diagonal,
}

impl SearchMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            SearchMode::Full => "full",
            SearchMode::Diagonal => "diag",
        }
    }
}

/// The selected threshold pair and the criterion value it attains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdResult {
    pub t_star: u8,
    pub s_star: u8,
    /// Entropic index the search ran with.
    pub q: f64,
    /// Criterion value at the optimum; always finite.
    pub criterion: f64,
    pub mode: SearchMode,
    /// Number of candidates scored, including invalid ones.
    pub candidates_evaluated: usize,
}

/// Dense grid of criterion values for one q; invalid candidates hold
/// negative infinity.
#[derive(Debug, Clone)]
pub struct CriterionSurface {
    q: f64,
    values: Vec<f64>,
}

impl CriterionSurface {
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Criterion value at candidate (t, s); negative infinity marks an
    /// invalid split.
    #[inline]
    pub fn value(&self, t: u8, s: u8) -> f64 {
        self.values[t as usize * LEVELS + s as usize]
    }

    /// Best candidate over the whole grid, ties toward the smallest (t, s).
    /// `None` when every candidate is invalid.
    pub fn argmax(&self) -> Option<(u8, u8, f64)> {
        let mut best: Option<(u8, u8, f64)> = None;
        for t in 0..LEVELS {
            for s in 0..LEVELS {
                let v = self.values[t * LEVELS + s];
                if v > best.map_or(f64::NEG_INFINITY, |(_, _, b)| b) {
                    best = Some((t as u8, s as u8, v));
                }
            }
        }
        best
    }

    /// Best diagonal candidate, ties toward the smallest t.
    pub fn diagonal_argmax(&self) -> Option<(u8, f64)> {
        let mut best: Option<(u8, f64)> = None;
        for t in 0..LEVELS {
            let v = self.values[t * LEVELS + t];
            if v > best.map_or(f64::NEG_INFINITY, |(_, b)| b) {
                best = Some((t as u8, v));
            }
        }
        best
    }

    /// CSV dump: one `t,s,value` line per candidate, row-major with t
    /// outer, and the literal `-inf` for invalid candidates.
    pub fn to_csv(&self) -> String {
        use std::fmt::Write;
        let mut out = String::with_capacity(self.values.len() * 12);
        for t in 0..LEVELS {
            for s in 0..LEVELS {
                let _ = writeln!(out, "{},{},{}", t, s, self.values[t * LEVELS + s]);
            }
        }
        out
    }
}

/// Finds the criterion-maximizing threshold for entropic index `q`.
///
/// q = 1 scores candidates with the Shannon criterion, every other positive
/// q with the Tsallis criterion. Fails with `DegenerateHistogram` when no
/// candidate in the mode's scan set splits the histogram (for example on a
/// constant image).
pub fn find_threshold(hist: &JointHistogram, q: f64, mode: SearchMode) -> Result<ThresholdResult> {
    let tables = build_prefix_tables(hist, q)?;
    find_threshold_from_tables(&tables, mode)
}

/// Same as [`find_threshold`] but reuses prebuilt prefix tables, so a q
/// sweep over one image only pays for the `p^q` table rebuild.
pub fn find_threshold_from_tables(
    tables: &PrefixTables,
    mode: SearchMode,
) -> Result<ThresholdResult> {
    let mut best = f64::NEG_INFINITY;
    let mut best_pair = ThresholdPair::new(0, 0);
    let mut evaluated = 0usize;

    let mut consider = |pair: ThresholdPair, evaluated: &mut usize| {
        *evaluated += 1;
        let value = criterion(tables, pair);
        if value > best {
            best = value;
            best_pair = pair;
        }
    };

    match mode {
        SearchMode::Full => {
            for t in 0..LEVELS {
                for s in 0..LEVELS {
                    consider(ThresholdPair::new(t as u8, s as u8), &mut evaluated);
                }
            }
        }
        SearchMode::Diagonal => {
            for t in 0..LEVELS {
                consider(ThresholdPair::new(t as u8, t as u8), &mut evaluated);
            }
        }
    }

    if best == f64::NEG_INFINITY {
        return Err(Error::DegenerateHistogram);
    }
    Ok(ThresholdResult {
        t_star: best_pair.t,
        s_star: best_pair.s,
        q: tables.q(),
        criterion: best,
        mode,
        candidates_evaluated: evaluated,
    })
}

/// Scores every candidate pair for inspection or dumping.
pub fn criterion_surface(hist: &JointHistogram, q: f64) -> Result<CriterionSurface> {
    validate_q(q)?;
    let tables = build_prefix_tables(hist, q)?;
    Ok(criterion_surface_from_tables(&tables))
}

/// Same as [`criterion_surface`] with prebuilt tables.
pub fn criterion_surface_from_tables(tables: &PrefixTables) -> CriterionSurface {
    let mut values = Vec::with_capacity(LEVELS * LEVELS);
    for t in 0..LEVELS {
        for s in 0..LEVELS {
            values.push(criterion(tables, ThresholdPair::new(t as u8, s as u8)));
        }
    }
    CriterionSurface {
        q: tables.q(),
        values,
    }
}
