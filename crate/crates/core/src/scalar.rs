//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type the linear algebra is generic over (`f32` or `f64`).
///
/// Default tolerances scale with the precision of the type; `f64` uses the
/// values quoted throughout the crate docs.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Unitarity defect accepted for a certified [`UnitaryMatrix`](crate::UnitaryMatrix).
    fn unitarity_tol() -> Self;
    /// Allowed deviation of a Schmidt spectrum's sum from one.
    fn normalization_tol() -> Self;
    /// Residual accepted for closed-form (exactly constructed) families.
    fn exact_family_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }
}

impl Real for f64 {
    fn unitarity_tol() -> Self {
        1e-10
    }
    fn normalization_tol() -> Self {
        1e-12
    }
    fn exact_family_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn unitarity_tol() -> Self {
        1e-4
    }
    fn normalization_tol() -> Self {
        1e-5
    }
    fn exact_family_tol() -> Self {
        1e-4
    }
}

/// Complex amplitude over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;
