//! Balance and Abelian complexity of the Tribonacci word and its m-bonacci
//! relatives.
//!
//! - [`word`]: substitutions, fixed-point prefixes, incidence matrices.
//! - [`factors`]: exact distinct-factor scans with saturation certificates.
//! - [`abelian`]: Parikh vectors, Abelian complexity, balance, desubstitution.
//! - [`numeration`]: Tribonacci numbers and Zeckendorf-Tribonacci digits.
//! - [`spectral`]: eigendata of the incidence matrix and discrepancy bounds.
//! - [`special`]: right special and bispecial factors, Central(n), B(n).

pub mod abelian;
pub mod error;
pub mod factors;
pub mod numeration;
pub mod special;
pub mod spectral;
pub mod word;

pub use error::{Error, Result};
pub use factors::{FactorIndex, SaturationRule, ScanConfig};
pub use word::{Morphism, Symbol, WordBuffer};
