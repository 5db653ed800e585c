//! Saddle-point data of the fluctuation theorem.
//!
//! `H(z) = ln Γ(z) - c ln Γ(z+γ) + μ z`. The critical point `z*` is the zero
//! of `H''(z) = ψ₁(z) - c ψ₁(z+γ)` on `(0, ∞)`, `μ = c ψ(z*+γ) - ψ(z*)` makes
//! `z*` a double critical point, and `ḡ = -H'''(z*)` sets the cube-root scale.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::specfn::polygamma_unchecked;

/// Bracket scanned for the sign change of `H''`.
pub const BRACKET: (f64, f64) = (1e-10, 1e3);
const SCAN_POINTS: usize = 1300;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticConstants<T> {
    pub c: T,
    pub gamma: T,
    /// `⌈cn⌉/n` when tied to a finite `n`, otherwise equal to `c`.
    pub c_n_tilde: T,
    pub z_star: T,
    pub mu: T,
    pub g_bar: T,
}

impl<T: Real> AsymptoticConstants<T> {
    /// Constants for aspect ratio `c` and shape `gamma`, with `c_n_tilde`
    /// recorded for size `n`.
    pub fn for_finite_n(c: T, gamma: T, n: usize) -> Result<Self> {
        let mut k = critical_constants(c, gamma)?;
        let nf = T::from_usize_lossy(n);
        k.c_n_tilde = (c * nf).ceil() / nf;
        Ok(k)
    }

    /// `H^{(order)}(z)` with these constants (`c`, not `c_n_tilde`).
    pub fn h(&self, order: u32, z: T) -> Result<T> {
        h_derivative(order, z, self.c, self.gamma, self.mu)
    }
}

/// Derivatives of `H` of order 0 to 3 at `z > 0`.
pub fn h_derivative<T: Real>(order: u32, z: T, c: T, gamma: T, mu: T) -> Result<T> {
    if !(z > T::zero()) || !z.is_finite() {
        return Err(Error::Domain(format!("H needs z > 0, got {z}")));
    }
    if !(gamma > T::zero()) {
        return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    let zg = z + gamma;
    Ok(match order {
        0 => crate::specfn::ln_gamma(z)? - c * crate::specfn::ln_gamma(zg)? + mu * z,
        1 => polygamma_unchecked(0, z) - c * polygamma_unchecked(0, zg) + mu,
        2 => polygamma_unchecked(1, z) - c * polygamma_unchecked(1, zg),
        3 => polygamma_unchecked(2, z) - c * polygamma_unchecked(2, zg),
        k => return Err(Error::UnsupportedOrder(k)),
    })
}

fn h2<T: Real>(z: T, c: T, gamma: T) -> T {
    polygamma_unchecked(1, z) - c * polygamma_unchecked(1, z + gamma)
}

fn scan_grid<T: Real>() -> impl Iterator<Item = T> {
    let (lo, hi) = (BRACKET.0.ln(), BRACKET.1.ln());
    (0..=SCAN_POINTS).map(move |k| T::lit((lo + (hi - lo) * k as f64 / SCAN_POINTS as f64).exp()))
}

/// Number of sign changes of `H''` seen on the geometric scan of the bracket.
pub fn h2_sign_changes<T: Real>(c: T, gamma: T) -> usize {
    let mut prev: Option<bool> = None;
    let mut changes = 0;
    for z in scan_grid::<T>() {
        let pos = h2(z, c, gamma) > T::zero();
        if let Some(p) = prev {
            if p != pos {
                changes += 1;
            }
        }
        prev = Some(pos);
    }
    changes
}

fn check_params<T: Real>(c: T, gamma: T) -> Result<()> {
    if !(c > T::one()) || !c.is_finite() {
        return Err(Error::Domain(format!("c must be > 1, got {c}")));
    }
    if !(gamma > T::zero()) || !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be > 0, got {gamma}")));
    }
    Ok(())
}

/// Locates `z*` by a geometric sign-change scan of `(1e-10, 1e3)` followed by
/// bisection down to adjacent floating-point values.
pub fn critical_point<T: Real>(c: T, gamma: T) -> Result<T> {
    check_params(c, gamma)?;
    let no_root = || Error::NoCriticalPoint {
        c: c.to_f64_lossy(),
        gamma: gamma.to_f64_lossy(),
    };
    let mut prev: Option<(T, T)> = None;
    let mut bracket = None;
    for z in scan_grid::<T>() {
        let v = h2(z, c, gamma);
        if !v.is_finite() {
            continue;
        }
        if let Some((zp, vp)) = prev {
            if vp > T::zero() && v <= T::zero() {
                bracket = Some((zp, z));
                break;
            }
        }
        prev = Some((z, v));
    }
    let (mut lo, mut hi) = bracket.ok_or_else(no_root)?;
    for _ in 0..400 {
        let mid = lo + (hi - lo) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if h2(mid, c, gamma) > T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // pick the endpoint with the smaller residual
    Ok(if h2(lo, c, gamma).abs() <= h2(hi, c, gamma).abs() {
        lo
    } else {
        hi
    })
}

/// `(z*, μ, ḡ)` for aspect ratio `c > 1` and shape `gamma`.
pub fn critical_constants<T: Real>(c: T, gamma: T) -> Result<AsymptoticConstants<T>> {
    let z = critical_point(c, gamma)?;
    let mu = c * polygamma_unchecked(0, z + gamma) - polygamma_unchecked(0, z);
    let g_bar = c * polygamma_unchecked(2, z + gamma) - polygamma_unchecked(2, z);
    if !(g_bar > T::zero()) {
        return Err(Error::Numerical(format!("nonpositive cube scale {g_bar}")));
    }
    Ok(AsymptoticConstants {
        c,
        gamma,
        c_n_tilde: c,
        z_star: z,
        mu,
        g_bar,
    })
}

/// Zero-temperature limit `-γ μ` evaluated at `γ = 1e-4`, `c = 1 + alpha`.
pub fn fpp_consistency<T: Real>(alpha: T) -> Result<T> {
    if !(alpha > T::zero()) {
        return Err(Error::Domain(format!("alpha must be > 0, got {alpha}")));
    }
    let gamma = T::lit(1e-4);
    let k = critical_constants(T::one() + alpha, gamma)?;
    Ok(-gamma * k.mu)
}
