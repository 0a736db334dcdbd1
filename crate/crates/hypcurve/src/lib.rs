//! Determinantal and spectrahedral representations of plane hyperbolic curves.
//!
//! Given a hyperbolic ternary form `f` and an interlacer `g`, the [`dixon`]
//! module constructs a symmetric linear matrix pencil `M = xA + yB + zC` with
//! `det(M) = gamma * f * h` (extra factor `h` a product of real lines),
//! `M(e)` positive definite, and spectrahedron equal to the hyperbolicity
//! region of `f`. The surrounding modules provide the polynomial arithmetic,
//! real-root and interlacing machinery, plane-curve intersection theory,
//! independent certification, exact rational representations, and Bezout
//! sum-of-squares extraction this construction needs.

pub mod error;
pub mod scalar;

pub mod linalg;
pub mod roots;

pub mod forms;
pub mod univariate;

pub mod curves;
pub mod hyperbolic;

pub mod dixon;

pub mod certify;
pub mod rationalize;
pub mod sosbez;

pub mod render;

pub use error::{Error, Result};
pub use scalar::{Cplx, Mode, Scalar, DEFAULT_PRECISION};
