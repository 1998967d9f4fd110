//! Scalar abstraction for the numeric kernels.
//!
//! Everything in this crate is written against [`Real`], a bundle of the
//! `num-traits` bounds the algorithms actually need. The crate root exports
//! concrete `f64` aliases; `f32` instantiates too, but the documented
//! tolerances assume double precision.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rustfft::FftNum;

/// Floating-point base type of every vector, matrix and measure weight.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
    + FftNum
{
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Default
        + Send
        + Sync
        + 'static
        + FftNum
{
}

/// Lift an `f64` constant into the working precision.
#[inline]
pub fn real<F: Real>(x: f64) -> F {
    F::from_f64(x).expect("constant not representable in scalar type")
}

/// Shorthand for a complex scalar over the working precision.
pub type C<F> = Complex<F>;

/// Compensated (Kahan) accumulator.
///
/// All reductions that feed an exactness check run through this type, in a
/// fixed order, so results do not depend on evaluation schedule.
#[derive(Clone, Copy, Debug)]
pub struct Kahan<F> {
    sum: F,
    carry: F,
}

impl<F: Real> Default for Kahan<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Real> Kahan<F> {
    pub fn new() -> Self {
        Kahan { sum: F::zero(), carry: F::zero() }
    }

    #[inline]
    pub fn add(&mut self, x: F) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> F {
        self.sum
    }
}

/// Kahan accumulator for complex values (independent parts).
#[derive(Clone, Copy, Debug)]
pub struct KahanComplex<F> {
    re: Kahan<F>,
    im: Kahan<F>,
}

impl<F: Real> Default for KahanComplex<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Real> KahanComplex<F> {
    pub fn new() -> Self {
        KahanComplex { re: Kahan::new(), im: Kahan::new() }
    }

    #[inline]
    pub fn add(&mut self, z: C<F>) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    #[inline]
    pub fn value(&self) -> C<F> {
        Complex::new(self.re.value(), self.im.value())
    }
}

/// Compensated sum of an iterator of real values.
pub fn kahan_sum<F: Real>(values: impl IntoIterator<Item = F>) -> F {
    let mut acc = Kahan::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
