//! Class probabilities, Tsallis and Shannon class entropies, and the
//! pseudo-additive combination for a threshold candidate (t, s).
//!
//! A candidate splits the 2D histogram into four quadrants. The object
//! class is the quadrant `[0, t] x [0, s]` with mass `P2`; the background
//! class is the opposite quadrant `[t+1, 255] x [s+1, 255]`, normalized by
//! the approximation `P4 ~ 1 - P2` (the two off-diagonal quadrants, which
//! hold edge and noise pairs, are ignored). Class entropies are
//!
//! ```text
//! S_q^A = (1 - sum_{A} (p / P2)^q) / (q - 1)
//! S_q^B = (1 - sum_{B} (p / (1 - P2))^q) / (q - 1)
//! ```
//!
//! and are combined with the pseudo-additive rule
//! `S_q(A+B) = S_q(A) + S_q(B) + (1 - q) S_q(A) S_q(B)`. At q = 1 a
//! dedicated Shannon path computes `S^A + S^B` with
//! `S^A = ln P2 - (sum_A p ln p) / P2` and the analogous expression with
//! `1 - P2` for the background; this avoids the 1 / (q - 1) cancellation
//! entirely.
//!
//! A candidate is valid exactly when `0 < P2 < 1`; everywhere else the
//! combined criterion is reported as negative infinity so search code can
//! skip it without special cases. When the background quadrant is empty
//! but `P2 < 1`, the formulas are applied as written, which yields
//! `S_q^B = 1 / (q - 1)` (and `ln(1 - P2)` at q = 1).

use crate::histogram::{PrefixTables, TableKind};

/// A candidate threshold pair: `t` cuts the pixel value axis, `s` cuts the
/// local average axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ThresholdPair {
    pub t: u8,
    pub s: u8,
}

impl ThresholdPair {
    pub fn new(t: u8, s: u8) -> Self {
        ThresholdPair { t, s }
    }
}

/// Entropies of the object class (`s_a`) and background class (`s_b`) at a
/// candidate, together with the object-class probability `p2`.
///
/// When `valid` is false the candidate does not split the histogram
/// (`P2` is 0 or 1) and the entropy fields must not be consumed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassEntropies {
    pub s_a: f64,
    pub s_b: f64,
    pub p2: f64,
    pub valid: bool,
}

const INVALID: ClassEntropies = ClassEntropies {
    s_a: 0.0,
    s_b: 0.0,
    p2: 0.0,
    valid: false,
};

#[inline]
fn quadrant2(tables: &PrefixTables, kind: TableKind, pair: ThresholdPair) -> f64 {
    tables.rect_sum(kind, 0, pair.t, 0, pair.s)
}

#[inline]
fn quadrant4(tables: &PrefixTables, kind: TableKind, pair: ThresholdPair) -> f64 {
    if pair.t == 255 || pair.s == 255 {
        0.0
    } else {
        tables.rect_sum(kind, pair.t + 1, 255, pair.s + 1, 255)
    }
}

/// Split validity is decided on the exact integer counts, so candidates at
/// the histogram boundary cannot be misclassified by float rounding.
#[inline]
fn split_counts(tables: &PrefixTables, pair: ThresholdPair) -> (u64, u64) {
    (tables.rect_count(0, pair.t, 0, pair.s), tables.total())
}

/// The object-class probability `P2(t, s) = sum_{i <= t, j <= s} p(i, j)`.
pub fn class_probability_p2(tables: &PrefixTables, pair: ThresholdPair) -> f64 {
    quadrant2(tables, TableKind::P, pair)
}

/// Tsallis class entropies at `pair` for the index the tables were built
/// with, which must not be 1.
pub fn tsallis_class_entropies(tables: &PrefixTables, pair: ThresholdPair) -> ClassEntropies {
    let q = tables.q();
    debug_assert!(q != 1.0, "use shannon_class_entropies for q = 1");
    let (n2, total) = split_counts(tables, pair);
    if n2 == 0 || n2 == total {
        return INVALID;
    }
    let p2 = quadrant2(tables, TableKind::P, pair);
    let a_pow = quadrant2(tables, TableKind::Pq, pair);
    let b_pow = quadrant4(tables, TableKind::Pq, pair);
    let s_a = (1.0 - a_pow / p2.powf(q)) / (q - 1.0);
    let s_b = (1.0 - b_pow / (1.0 - p2).powf(q)) / (q - 1.0);
    ClassEntropies {
        s_a,
        s_b,
        p2,
        valid: true,
    }
}

/// Shannon class entropies at `pair`; the tables must have been built with
/// q = 1 so the `Pq` table holds cumulative `p ln p`.
pub fn shannon_class_entropies(tables: &PrefixTables, pair: ThresholdPair) -> ClassEntropies {
    debug_assert!(tables.q() == 1.0, "tables must be built with q = 1");
    let (n2, total) = split_counts(tables, pair);
    if n2 == 0 || n2 == total {
        return INVALID;
    }
    let p2 = quadrant2(tables, TableKind::P, pair);
    let a_ln = quadrant2(tables, TableKind::Pq, pair);
    let b_ln = quadrant4(tables, TableKind::Pq, pair);
    let s_a = p2.ln() - a_ln / p2;
    let s_b = (1.0 - p2).ln() - b_ln / (1.0 - p2);
    ClassEntropies {
        s_a,
        s_b,
        p2,
        valid: true,
    }
}

/// Combines class entropies with the pseudo-additive rule; at q = 1 this
/// degenerates to the plain sum. Invalid candidates map to negative
/// infinity.
pub fn combine_pseudo_additive(e: &ClassEntropies, q: f64) -> f64 {
    if !e.valid {
        return f64::NEG_INFINITY;
    }
    if q == 1.0 {
        e.s_a + e.s_b
    } else {
        e.s_a + e.s_b + (1.0 - q) * e.s_a * e.s_b
    }
}

/// The combined criterion at `pair`, dispatching on the index the tables
/// were built with (q = 1 takes the Shannon path).
pub fn criterion(tables: &PrefixTables, pair: ThresholdPair) -> f64 {
    let q = tables.q();
    let e = if q == 1.0 {
        shannon_class_entropies(tables, pair)
    } else {
        tsallis_class_entropies(tables, pair)
    };
    combine_pseudo_additive(&e, q)
}

/// Largest gap `|P4 - (1 - P2)|` over all valid candidates: how much mass
/// the background normalizer approximation ignores in the worst case.
pub fn approximation_gap(tables: &PrefixTables) -> f64 {
    let mut worst = 0.0f64;
    for t in 0..=255u8 {
        for s in 0..=255u8 {
            let pair = ThresholdPair::new(t, s);
            let (n2, total) = split_counts(tables, pair);
            if n2 == 0 || n2 == total {
                continue;
            }
            let p2 = quadrant2(tables, TableKind::P, pair);
            let p4 = quadrant4(tables, TableKind::P, pair);
            worst = worst.max((p4 - (1.0 - p2)).abs());
        }
    }
    worst
}
