//! Exact Gamma-class computations for Calabi-Yau hypersurfaces in smooth
//! toric Fano varieties, and the mirror-side holomorphic period.
//!
//! Two independent routes meet here. The A-side expands the Chern class of
//! the anticanonical hypersurface in the toric cohomology ring and applies the
//! multiplicative sequence of `1/Gamma(1+z)`. The B-side builds the period
//! series from a Mori basis and replaces factorials by Gamma functions,
//! expanding at the origin over the formal ring `Q[gamma, zeta(2), zeta(3), ...]`.
//! [`verify`] compares both.

pub mod cli;
pub mod error;
pub mod exactnum;
pub mod gammaseq;
pub mod input;
pub mod periods;
pub mod series;
pub mod toric;
pub mod verify;

pub use error::{Error, Result};
pub use exactnum::{BigRat, TransScalar};
pub use series::{LinForm, TruncSeries};
