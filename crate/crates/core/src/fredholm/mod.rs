//! Fredholm determinants for the Laplace transform of the partition function
//! and its scaling limit.
//!
//! All four kernels share one shape,
//!
//! `K(v₁, v₂) = (1/2πi) ∫ dw/(w - v₂) · S(v₁ - w) · exp(Φ(w) - Φ(v₁))`,
//!
//! with `S(x) = π / sin(πx)` for the finite and pre-limit kernels and
//! `S(x) = 1/x` for the limit kernel. The phase `Φ` is
//! `z ln s + Σ_i ln Γ(b_i + z) - Σ_j ln Γ(z - a_j)` at finite size and
//! `(ḡ/6) z³ - r z` in the limit. The operator acts on `L²` of the `v`
//! contour with measure `dv / 2πi`.

pub mod contour;
pub mod formula;
pub mod kernel;
pub mod linalg;
pub mod quadrature;
pub mod sklyanin;
pub mod tracy_widom;

pub use contour::{build_contour, graded_breaks, Contour, ContourKind, Piece};
pub use formula::{det_matrix_formula, det_matrix_formula_default, det_matrix_formula_richardson};
pub use kernel::{
    finite_lt_contours, kernel_finite_lt, kernel_limit, kernel_prelimit, nystrom_det,
    nystrom_det_finite_lt, nystrom_det_rule, prelimit_contours, prelimit_det, KernelSpec,
    KernelVariant,
};
pub use quadrature::{gauss_legendre, QuadratureRule};
pub use sklyanin::{sklyanin_lt, sklyanin_truncation};
pub use tracy_widom::{
    limit_contours, limit_det, tracy_widom_cdf, tracy_widom_cdf_with, TracyWidomTable,
    DEFAULT_TRUNCATION, MAX_TRUNCATION, TAIL_FLOOR, TW_ORDER, TW_RANGE, UPPER_TAIL_FLOOR,
};

use crate::asymptotics::AsymptoticConstants;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default Gauss–Legendre order per contour piece.
pub const DEFAULT_ORDER: usize = 48;

/// Analytic parameters of the finite-size determinant representations.
///
/// `s` is stored through `ln s`; `ln s = -∞` encodes `s = 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ParameterSet<T> {
    a: Vec<T>,
    b: Vec<T>,
    gamma: Option<T>,
    delta1: T,
    delta2: T,
    ln_s: T,
    r: T,
    mu: T,
    c_n_tilde: T,
}

impl<T: Real> ParameterSet<T> {
    /// Parameters `a` (length `n`), `b` (length `h ≥ n`) and `ln s`, with
    /// `δ₁ < δ₂` placed at the thirds of `(max|a_j|, min(min b_i, 1/2))`.
    pub fn new(a: Vec<T>, b: Vec<T>, ln_s: T) -> Result<Self> {
        let n = a.len();
        let h = b.len();
        if n == 0 || h < n {
            return Err(Error::Domain(format!("need h >= n >= 1, got n={n}, h={h}")));
        }
        let lo = a.iter().fold(T::zero(), |m, x| m.max(x.abs()));
        let hi = b.iter().fold(T::lit(0.5), |m, &x| m.min(x));
        if !(hi > lo) {
            return Err(Error::Domain(format!(
                "no admissible contours: max|a| = {lo} is not below min(min b, 1/2) = {hi}"
            )));
        }
        let third = (hi - lo) / T::lit(3.0);
        let p = Self {
            a,
            b,
            gamma: None,
            delta1: lo + third,
            delta2: lo + third + third,
            ln_s,
            r: T::zero(),
            mu: T::zero(),
            c_n_tilde: T::from_usize_lossy(h) / T::from_usize_lossy(n),
        };
        p.validate()?;
        Ok(p)
    }

    /// Distinct perturbation of the homogeneous polymer:
    /// `a_j = ε j`, `b_i = γ - ε i`.
    pub fn polymer(n: usize, h: usize, gamma: T, eps: T, ln_s: T) -> Result<Self> {
        let a = (1..=n).map(|j| eps * T::from_usize_lossy(j)).collect();
        let b = (1..=h)
            .map(|i| gamma - eps * T::from_usize_lossy(i))
            .collect();
        let mut p = Self::new(a, b, ln_s)?;
        p.gamma = Some(gamma);
        Ok(p)
    }

    /// The homogeneous polymer `a_j = 0`, `b_i = γ`.
    pub fn homogeneous(n: usize, h: usize, gamma: T, ln_s: T) -> Result<Self> {
        let mut p = Self::new(vec![T::zero(); n], vec![gamma; h], ln_s)?;
        p.gamma = Some(gamma);
        Ok(p)
    }

    /// Homogeneous parameters at size `n` with `h = ⌈cn⌉` and
    /// `ln s = -nμ - r n^{1/3}`.
    pub fn prelimit(constants: &AsymptoticConstants<T>, n: usize, r: T) -> Result<Self> {
        let nf = T::from_usize_lossy(n);
        let h = (constants.c * nf)
            .ceil()
            .to_usize()
            .ok_or_else(|| Error::Domain("h overflows".into()))?;
        let ln_s = -nf * constants.mu - r * nf.cbrt();
        let mut p = Self::homogeneous(n, h, constants.gamma, ln_s)?;
        p.r = r;
        p.mu = constants.mu;
        p.c_n_tilde = T::from_usize_lossy(h) / nf;
        Ok(p)
    }

    /// Replaces `δ₁, δ₂`, re-checking admissibility.
    pub fn with_deltas(mut self, delta1: T, delta2: T) -> Result<Self> {
        self.delta1 = delta1;
        self.delta2 = delta2;
        self.validate()?;
        Ok(self)
    }

    /// Replaces the Laplace variable.
    pub fn with_s(mut self, s: T) -> Result<Self> {
        if !(s >= T::zero()) || !s.is_finite() {
            return Err(Error::Domain(format!("s must be >= 0, got {s}")));
        }
        self.ln_s = s.ln();
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let (d1, d2) = (self.delta1, self.delta2);
        if !(d1 > T::zero() && d1 < d2 && d1 < T::one() - d2) {
            return Err(Error::Domain(format!(
                "need 0 < δ₁ < min(δ₂, 1-δ₂); got δ₁={d1}, δ₂={d2}"
            )));
        }
        if let Some(a) = self.a.iter().find(|x| !(x.abs() < d1)) {
            return Err(Error::Domain(format!(
                "|a_j| = {} is not below δ₁ = {d1}",
                a.abs()
            )));
        }
        if let Some(b) = self.b.iter().find(|&&x| !(x > d2)) {
            return Err(Error::Domain(format!("b_i = {b} is not above δ₂ = {d2}")));
        }
        if self.ln_s.is_nan() || self.ln_s == T::infinity() {
            return Err(Error::Domain("s must be finite and >= 0".into()));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.a.len()
    }

    pub fn h(&self) -> usize {
        self.b.len()
    }

    pub fn a(&self) -> &[T] {
        &self.a
    }

    pub fn b(&self) -> &[T] {
        &self.b
    }

    pub fn gamma(&self) -> Option<T> {
        self.gamma
    }

    pub fn delta1(&self) -> T {
        self.delta1
    }

    pub fn delta2(&self) -> T {
        self.delta2
    }

    pub fn ln_s(&self) -> T {
        self.ln_s
    }

    pub fn s(&self) -> T {
        self.ln_s.exp()
    }

    pub fn r(&self) -> T {
        self.r
    }

    pub fn mu(&self) -> T {
        self.mu
    }

    pub fn c_n_tilde(&self) -> T {
        self.c_n_tilde
    }

    /// `true` when `s = 0`, where every determinant equals 1.
    pub fn s_is_zero(&self) -> bool {
        self.ln_s == T::neg_infinity()
    }
}
