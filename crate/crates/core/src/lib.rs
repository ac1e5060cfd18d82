//! Numerical laboratory for boundary geometry and squeezing-function bounds
//! of explicit domains in C^n: Levi classification, support scans, the
//! anchoring/shearing/dilating rescaling pipeline along approach sequences,
//! Kobayashi-distance estimates via analytic disc chains, and the
//! constructive embedding chain that yields squeezing lower bounds.

pub mod boundary;
pub mod domains;
pub mod error;
pub mod hartogs;
pub mod kobayashi;
pub mod numeric;
pub mod polyalg;
pub mod scaling;
pub mod squeeze;

pub use error::{Error, Result};
pub use numeric::C;
pub use polyalg::{AffineMap, HermitianMatrix, MixedPolynomial, MultiIndex};
