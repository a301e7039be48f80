//! Real scalar abstraction.
//!
//! Every kernel in this crate is written against [`RealScalar`], the real
//! field underlying the complex entries. `f64` is the working precision of
//! the verifiers; `f32` is supported for the kernels themselves.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point type usable as the component type of matrix entries.
pub trait RealScalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Lossy conversion from an `f64` literal or tolerance.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 value representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl RealScalar for f32 {}
impl RealScalar for f64 {}

/// Complex entry type over a real scalar.
pub type Scalar<T> = Complex<T>;

pub(crate) fn cabs2<T: RealScalar>(z: Complex<T>) -> T {
    z.re * z.re + z.im * z.im
}

pub(crate) fn is_finite<T: RealScalar>(z: Complex<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Unit-modulus phase of `z`, or 1 when `z` is zero.
pub(crate) fn phase<T: RealScalar>(z: Complex<T>) -> Complex<T> {
    let r = z.norm();
    if r == T::zero() {
        Complex::new(T::one(), T::zero())
    } else {
        z / r
    }
}

/// Sign of a real number with `sign(0) = 1`.
pub(crate) fn sign_nonzero<T: RealScalar>(x: T) -> T {
    if x < T::zero() {
        -T::one()
    } else {
        T::one()
    }
}
