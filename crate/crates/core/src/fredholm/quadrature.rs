//! Gauss–Legendre rules and complex quadrature rules along contours.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`,
/// nodes ascending. Computed in `f64` by Newton iteration on the three-term
/// recurrence.
pub fn gauss_legendre(order: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if order == 0 {
        return Err(Error::Domain("quadrature order must be positive".into()));
    }
    let n = order;
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { z } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = nf * (z * p - pm1) / (z * z - 1.0);
            let dz = p / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            z = 0.0;
            dp = 1.0;
        }
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    if n == 1 {
        x[0] = 0.0;
        w[0] = 2.0;
    }
    Ok((x, w))
}

/// Nodes on a contour with complex weights `z'(t) · w_GL`, so that
/// `Σ f(z_k) ω_k ≈ ∫ f(z) dz` along the oriented contour.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule<T> {
    pub nodes: Vec<Cplx<T>>,
    pub weights: Vec<Cplx<T>>,
}

impl<T: Real> QuadratureRule<T> {
    pub fn new(nodes: Vec<Cplx<T>>, weights: Vec<Cplx<T>>) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::Domain("node and weight counts differ".into()));
        }
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ f(z_k) ω_k`.
    pub fn integrate(&self, mut f: impl FnMut(Cplx<T>) -> Cplx<T>) -> Cplx<T> {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (&z, &w)| {
                acc + f(z) * w
            })
    }

    /// Fallible version of [`QuadratureRule::integrate`].
    pub fn try_integrate(&self, mut f: impl FnMut(Cplx<T>) -> Result<Cplx<T>>) -> Result<Cplx<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&z, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(z)? * w;
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_polynomials_exactly() {
        for order in [1usize, 2, 5, 16, 48, 96] {
            let (x, w) = gauss_legendre(order).unwrap();
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
            for deg in 0..(2 * order).min(40) {
                let num: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((num - exact).abs() < 1e-13, "order {order} degree {deg}");
            }
            assert!(x.windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn smooth_integrand() {
        let (x, w) = gauss_legendre(20).unwrap();
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.exp()).sum();
        assert!((v - (1.0_f64.exp() - (-1.0_f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn zero_order_rejected() {
        assert!(gauss_legendre(0).is_err());
    }
}
