//! Scalar special functions and the fixed-point ratio solver.

mod bessel;
mod solve;

pub use bessel::bessel_j0;
pub(crate) use bessel::j0_unchecked;
pub use solve::{maximize_ratio, ConcaveFn, SolverConfig};
