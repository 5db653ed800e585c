//! Scalar abstraction shared by every numeric module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex number over a [`Real`] scalar.
pub type Cplx<T> = Complex<T>;

/// `true` when both components are finite.
#[inline]
pub fn is_finite_c<T: Real>(z: Cplx<T>) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `ln(exp(a) + exp(b))` without overflow.
#[inline]
pub fn log_add_exp<T: Real>(a: T, b: T) -> T {
    if a == T::neg_infinity() {
        return b;
    }
    if b == T::neg_infinity() {
        return a;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Streaming log-sum-exp accumulator with a running maximum.
#[derive(Clone, Copy, Debug)]
pub struct LogSumExp<T> {
    max: T,
    scaled: T,
}

impl<T: Real> Default for LogSumExp<T> {
    fn default() -> Self {
        Self::new()
    }
}

impl<T: Real> LogSumExp<T> {
    pub fn new() -> Self {
        Self {
            max: T::neg_infinity(),
            scaled: T::zero(),
        }
    }

    #[inline]
    pub fn push(&mut self, x: T) {
        if x == T::neg_infinity() {
            return;
        }
        if x <= self.max {
            self.scaled = self.scaled + (x - self.max).exp();
        } else {
            self.scaled = self.scaled * (self.max - x).exp() + T::one();
            self.max = x;
        }
    }

    /// Current value of `ln Σ exp(x)`; `-inf` when empty.
    #[inline]
    pub fn value(&self) -> T {
        if self.max == T::neg_infinity() {
            T::neg_infinity()
        } else {
            self.max + self.scaled.ln()
        }
    }
}

/// Pairwise (cascade) summation; the result does not depend on how the
/// slice was produced, only on its order.
pub fn pairwise_sum<T: Real>(xs: &[T]) -> T {
    const LEAF: usize = 32;
    if xs.len() <= LEAF {
        return xs.iter().fold(T::zero(), |acc, &x| acc + x);
    }
    let mid = xs.len() / 2;
    pairwise_sum(&xs[..mid]) + pairwise_sum(&xs[mid..])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_add_exp_matches_direct() {
        let v: f64 = log_add_exp(1.0_f64.ln(), 2.0_f64.ln());
        assert!((v - 3.0_f64.ln()).abs() < 1e-15);
        assert_eq!(log_add_exp(f64::NEG_INFINITY, 0.5), 0.5);
    }

    #[test]
    fn streaming_lse_handles_huge_spread() {
        let mut acc = LogSumExp::<f64>::new();
        for x in [-2000.0, -1000.0, -1000.0] {
            acc.push(x);
        }
        assert!((acc.value() - (-1000.0 + 2.0_f64.ln())).abs() < 1e-12);
        assert_eq!(LogSumExp::<f64>::new().value(), f64::NEG_INFINITY);
    }

    #[test]
    fn pairwise_sum_small_and_large() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500_500.0);
        assert_eq!(pairwise_sum::<f32>(&[]), 0.0);
    }
}
