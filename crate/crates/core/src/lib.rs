//! Exact lower bounds for the simplexity of the n-cube.
//!
//! The crate is organised around the objects the bounds are built from:
//!
//! * [`geometry`]: 0/1-simplices, exact volumes, column profiles and the
//!   determinant inequalities they satisfy.
//! * [`enumeration`]: exhaustive streaming of all 0/1-simplices of the cube,
//!   grouped into LP constraint classes, plus the maximal determinant `rho(n)`.
//! * [`bounds`]: closed-form lower bounds (Euclidean, Hadamard-type, the
//!   hyperbolic-volume expression, and the asymptotic `(n+1)^((n-1)/2)` bound).
//! * [`lp`]: the exact min-max weight program and the analytic log-weights.
//! * [`dissection`]: verification of explicit dissections and of the slice
//!   volume invariants they must satisfy.

pub mod bounds;
pub mod dissection;
pub mod enumeration;
mod error;
pub mod geometry;
pub mod lp;
pub mod rational;

pub use error::{Error, Result};
pub use geometry::{Simplex01, Vertex01};
pub use num_rational::BigRational;
