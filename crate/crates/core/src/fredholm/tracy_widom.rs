//! The limit kernel determinant and the GUE Tracy–Widom distribution.
//!
//! For `r < 0` the phase `(ḡ/6)z³ - rz` has saddles at `±i√(2|r|/ḡ)` and
//! is purely imaginary on the imaginary axis. The contours therefore run
//! vertically between the saddles at `Re z = ∓η` before leaving along the
//! wedge directions; on straight wedges the kernel entries would reach
//! `e^{(2/3)(2|r|)^{3/2}/√ḡ}` and swamp the tiny left-tail values.

use std::sync::OnceLock;

use num_complex::Complex;
use rayon::prelude::*;

use super::contour::{graded_breaks, Contour, Piece};
use super::kernel::{nystrom_det_rule, KernelSpec};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Range over which [`tracy_widom_cdf`] is provided.
pub const TW_RANGE: (f64, f64) = (-15.0, 10.0);

/// Default wedge truncation `M`.
pub const DEFAULT_TRUNCATION: f64 = 12.0;

/// Largest accepted truncation; the integrand is below `1e-300` long before.
pub const MAX_TRUNCATION: f64 = 100.0;

/// Gauss–Legendre nodes per panel.
pub const TW_ORDER: usize = 24;

/// Values below this are returned as 0. The quadrature error is absolute,
/// a few 1e-17 in the left tail, and exceeds `F` itself left of about -11.
pub const TAIL_FLOOR: f64 = 1e-30;

/// Values within this of 1 are returned as 1; near 1 the roundoff is a few
/// 1e-15.
pub const UPPER_TAIL_FLOOR: f64 = 1e-12;

/// Half-gap between the `v` and `w` contours.
const ETA: f64 = 0.25;

/// First leg panel and the longest vertical panel.
const PANEL: f64 = 1.0;

/// Upward contour: vertical from `x - i y` to `x + i y` when `y > 0`, with
/// legs of length `m` leaving its ends at angles `±angle`.
fn vertical_wedge<T: Real>(x: T, y: T, angle: T, m: T) -> Result<Contour<T>> {
    let up = Complex::from_polar(T::one(), angle);
    let top = Complex::new(x, y);
    let bottom = Complex::new(x, -y);
    let breaks = graded_breaks(T::lit(PANEL).min(m), m);
    let mut pieces: Vec<Piece<T>> = breaks
        .windows(2)
        .rev()
        .map(|w| Piece::Segment {
            from: bottom + up.conj() * w[1],
            to: bottom + up.conj() * w[0],
        })
        .collect();
    if y > T::zero() {
        let count = (T::lit(2.0) * y / T::lit(PANEL))
            .ceil()
            .to_usize()
            .unwrap_or(1)
            .max(1);
        let step = T::lit(2.0) * y / T::from_usize_lossy(count);
        for k in 0..count {
            let lo = -y + step * T::from_usize_lossy(k);
            let hi = if k + 1 == count { y } else { lo + step };
            pieces.push(Piece::Segment {
                from: Complex::new(x, lo),
                to: Complex::new(x, hi),
            });
        }
    }
    pieces.extend(breaks.windows(2).map(|w| Piece::Segment {
        from: top + up * w[0],
        to: top + up * w[1],
    }));
    Contour::new(pieces, false, Some(m))
}

/// Contours `(v, w)` for the limit kernel truncated at radius `m` from the
/// points where they leave the vertical part.
pub fn limit_contours<T: Real>(g_bar: T, r: T, m: T) -> Result<(Contour<T>, Contour<T>)> {
    if !(g_bar > T::zero()) || !g_bar.is_finite() {
        return Err(Error::Domain(format!("ḡ must be positive, got {g_bar}")));
    }
    if !(m > T::zero() && m <= T::lit(MAX_TRUNCATION)) {
        return Err(Error::Domain(format!(
            "truncation must lie in (0, {MAX_TRUNCATION}], got {m}"
        )));
    }
    let y = (T::lit(2.0) * (-r).max(T::zero()) / g_bar).sqrt();
    let third = T::PI() / T::lit(3.0);
    let eta = T::lit(ETA);
    let v = vertical_wedge(-eta, y, T::lit(2.0) * third, m)?;
    let w = vertical_wedge(eta, y, third, m)?;
    Ok((v, w))
}

/// `det(I + K)` for the limit kernel with parameters `(ḡ, r)`, truncation
/// `m` and `order` nodes per panel.
pub fn limit_det<T: Real>(g_bar: T, r: T, m: T, order: usize) -> Result<T> {
    if !r.is_finite() {
        return Err(Error::Domain(format!("r must be finite, got {r}")));
    }
    let (v, w) = limit_contours(g_bar, r, m)?;
    let spec = KernelSpec::limit(g_bar, r, w.rule(order)?)?;
    let d = nystrom_det_rule(&spec, &v.rule(order)?)?;
    Ok(d)
}

fn check_range<T: Real>(x: T) -> Result<()> {
    let (lo, hi) = TW_RANGE;
    if x >= T::lit(lo) && x <= T::lit(hi) {
        Ok(())
    } else {
        Err(Error::Range {
            x: x.to_f64_lossy(),
            lo,
            hi,
        })
    }
}

/// `F_GUE(x)` for `x` in [`TW_RANGE`].
pub fn tracy_widom_cdf<T: Real>(x: T) -> Result<T> {
    tracy_widom_cdf_with(x, T::lit(DEFAULT_TRUNCATION), TW_ORDER)
}

/// `F_GUE(x)` with explicit truncation and quadrature order, clamped to
/// `[0, 1]`, flushed to 0 below [`TAIL_FLOOR`] and to 1 within
/// [`UPPER_TAIL_FLOOR`] of 1.
pub fn tracy_widom_cdf_with<T: Real>(x: T, m: T, order: usize) -> Result<T> {
    check_range(x)?;
    let d = limit_det(T::lit(2.0), x, m, order)?;
    if d < T::lit(TAIL_FLOOR) {
        return Ok(T::zero());
    }
    if T::one() - d < T::lit(UPPER_TAIL_FLOOR) {
        return Ok(T::one());
    }
    Ok(d)
}

/// Natural cubic spline of `F_GUE` on a uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TracyWidomTable<T> {
    lo: T,
    step: T,
    values: Vec<T>,
    second: Vec<T>,
}

impl<T: Real> TracyWidomTable<T> {
    /// Tabulates `F_GUE` on `lo, lo + step, …, hi` (inside [`TW_RANGE`]).
    pub fn build(lo: T, hi: T, step: T, m: T, order: usize) -> Result<Self> {
        check_range(lo)?;
        check_range(hi)?;
        if !(step > T::zero()) || !(hi > lo) {
            return Err(Error::Domain("need lo < hi and a positive step".into()));
        }
        let count = ((hi - lo) / step).round().to_usize().unwrap_or(0);
        if count < 3 {
            return Err(Error::Domain("table needs at least four points".into()));
        }
        let step = (hi - lo) / T::from_usize_lossy(count);
        let values = (0..=count)
            .into_par_iter()
            .map(|k| tracy_widom_cdf_with(lo + step * T::from_usize_lossy(k), m, order))
            .collect::<Result<Vec<T>>>()?;
        Self::from_values(lo, step, values)
    }

    /// Spline through `values` at `lo + k·step`.
    pub fn from_values(lo: T, step: T, values: Vec<T>) -> Result<Self> {
        let n = values.len();
        if n < 4 {
            return Err(Error::Domain("table needs at least four points".into()));
        }
        // tridiagonal system for interior second derivatives, h uniform
        let mut second = vec![T::zero(); n];
        let mut diag = vec![T::lit(4.0); n];
        let mut rhs = vec![T::zero(); n];
        let six_h2 = T::lit(6.0) / (step * step);
        for i in 1..n - 1 {
            rhs[i] = (values[i + 1] - values[i] * T::lit(2.0) + values[i - 1]) * six_h2;
        }
        for i in 2..n - 1 {
            let f = T::one() / diag[i - 1];
            diag[i] = diag[i] - f;
            rhs[i] = rhs[i] - rhs[i - 1] * f;
        }
        for i in (1..n - 1).rev() {
            let next = if i + 1 < n - 1 {
                second[i + 1]
            } else {
                T::zero()
            };
            second[i] = (rhs[i] - next) / diag[i];
        }
        Ok(Self {
            lo,
            step,
            values,
            second,
        })
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.lo + self.step * T::from_usize_lossy(self.values.len() - 1)
    }

    pub fn step(&self) -> T {
        self.step
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Interpolated `F_GUE(x)`, clamped to `[0, 1]`.
    pub fn eval(&self, x: T) -> Result<T> {
        let (lo, hi) = (self.lo, self.hi());
        if !(x >= lo && x <= hi) {
            return Err(Error::Range {
                x: x.to_f64_lossy(),
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
            });
        }
        let last = self.values.len() - 2;
        let i = ((x - lo) / self.step)
            .floor()
            .to_usize()
            .unwrap_or(0)
            .min(last);
        let h = self.step;
        let t = (x - lo) / h - T::from_usize_lossy(i);
        let u = T::one() - t;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (m0, m1) = (self.second[i], self.second[i + 1]);
        let y =
            u * y0 + t * y1 + ((u * u * u - u) * m0 + (t * t * t - t) * m1) * h * h / T::lit(6.0);
        Ok(y.max(T::zero()).min(T::one()))
    }

    /// `∫ x dF` over the table, `hi·F(hi) - lo·F(lo) - ∫ F`.
    pub fn mean(&self) -> T {
        let h = self.step;
        let n = self.values.len();
        let mut integral = T::zero();
        for i in 0..n - 1 {
            integral = integral + (self.values[i] + self.values[i + 1]) * h / T::lit(2.0)
                - (self.second[i] + self.second[i + 1]) * h * h * h / T::lit(24.0);
        }
        self.hi() * self.values[n - 1] - self.lo * self.values[0] - integral
    }
}

impl TracyWidomTable<f64> {
    /// Process-wide table over [`TW_RANGE`] with spacing 0.05, built on
    /// first use.
    pub fn standard() -> Result<&'static Self> {
        static TABLE: OnceLock<std::result::Result<TracyWidomTable<f64>, Error>> = OnceLock::new();
        TABLE
            .get_or_init(|| Self::build(TW_RANGE.0, TW_RANGE.1, 0.05, DEFAULT_TRUNCATION, TW_ORDER))
            .as_ref()
            .map_err(Clone::clone)
    }
}
