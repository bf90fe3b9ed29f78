//! Grayscale image binarization by two-dimensional Tsallis entropy
//! maximization.
//!
//! The pipeline: decode an 8-bit grayscale image, compute the 3x3
//! neighborhood average of every interior pixel, tally the joint
//! (gray value, local average) histogram, and pick the threshold pair
//! (t, s) whose two classes maximize the pseudo-additive sum of Tsallis
//! entropies of order q. Summed-area tables over `p` and `p^q` make every
//! candidate an O(1) evaluation, so a full 256 x 256 grid search and the
//! diagonal t = s restriction are both cheap. q = 1 is handled by a
//! dedicated Shannon code path, and fractional q around 0.1 is the
//! recommended operating regime; a plain 1D entropic threshold is included
//! as a baseline.
//!
//! ```
//! use tsallis2d::{binarize, find_threshold, GrayImage, JointHistogram, SearchMode};
//!
//! // A bright 3x3 block on a dark 6x6 field.
//! let pixels: Vec<u8> = (0..36)
//!     .map(|i| {
//!         let (x, y) = (i % 6, i / 6);
//!         if (2..5).contains(&x) && (2..5).contains(&y) { 200 } else { 40 }
//!     })
//!     .collect();
//! let img = GrayImage::new(6, 6, pixels).unwrap();
//!
//! let hist = JointHistogram::from_image(&img).unwrap();
//! let result = find_threshold(&hist, 0.5, SearchMode::Diagonal).unwrap();
//! assert!(result.t_star >= 40 && result.t_star < 200);
//!
//! let binary = binarize(&img, result.t_star);
//! assert_eq!(binary.pixels().iter().filter(|&&p| p == 255).count(), 9);
//! ```

pub mod baseline1d;
pub mod entropy;
mod error;
pub mod histogram;
pub mod imgio;
pub mod search;
pub mod synth;

pub use error::{Error, Result};
pub use histogram::{
    build_joint_histogram, build_prefix_tables, neighborhood_average, AvgImage, JointHistogram,
    PrefixTables, TableKind,
};
pub use imgio::{binarize, read_pgm, write_pgm, BinaryImage, GrayImage, PgmVariant};
pub use search::{
    criterion_surface, find_threshold, CriterionSurface, SearchMode, ThresholdResult,
};
