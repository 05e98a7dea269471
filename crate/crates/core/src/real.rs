//! Scalar abstraction used throughout the crate.
//!
//! All numeric code is generic over [`Real`], which is satisfied by `f32`
//! and `f64`. Concrete aliases for the common `f64` instantiation live at
//! the crate root.

use num_traits::{FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
///
/// `nalgebra::RealField` supplies the elementary functions and makes
/// `Complex<T>` usable in matrix decompositions; the `num_traits`
/// conversions let literals and counts be lifted into `T`.
pub trait Real: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy {
    /// Lift an `f64` literal into `T`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lift a count into `T`.
    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T: nalgebra::RealField + FromPrimitive + ToPrimitive + Copy> Real for T {}

/// Machine epsilon of `T`, computed once where needed.
pub fn machine_epsilon<T: Real>() -> T {
    let one = T::one();
    let two = T::lit(2.0);
    let mut eps = T::one();
    while one + eps / two > one {
        eps /= two;
    }
    eps
}

/// log2(e), the nat-to-bit conversion factor.
pub fn log2_e<T: Real>() -> T {
    T::lit(std::f64::consts::LOG2_E)
}
