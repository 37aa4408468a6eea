//! Standard deviation versus Gini mean difference.
//!
//! The crate computes SD and GMD for parametric laws, runs hazard-rate and
//! log-concavity diagnostics, and certifies which of the two dispersion
//! measures dominates. Every certificate carries the independently computed
//! sign of `SD - GMD`, and a Monte Carlo / brute-force oracle is provided for
//! cross-checking.
//!
//! ```
//! use dispersion_core::{dispersion, dist, ordering};
//!
//! let d = dist::make_distribution(&"gpd:alpha=0.25".parse().unwrap()).unwrap();
//! let r = dispersion::report(&d).unwrap();
//! assert!(r.diff > 0.36);
//! let v = ordering::classify(&d).unwrap();
//! assert_eq!(v.verdict, ordering::Verdict::SdDominates);
//! ```

pub mod dispersion;
pub mod dist;
pub mod error;
pub mod hazard;
mod lattice;
pub mod oracle;
pub mod ordering;
pub mod quad;
pub mod special;

pub use dist::{Distribution, Family, FamilySpec, Kind, Side, Support};
pub use error::{Error, Result};
