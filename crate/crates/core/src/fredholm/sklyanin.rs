//! Direct quadrature of the Whittaker–Plancherel integral for `n ≤ 2`.
//!
//! `E e^{-s/t} = ∫ Π_{i,j} Γ(a_i - λ_j) Π_j s^{λ_j - a_j} Π_i Γ(b_i + λ_j)/Γ(b_i + a_j)
//! · Π_{i≠j} Γ(λ_i - λ_j)^{-1} dλ / ((2πi)^n n!)`
//!
//! over vertical lines `Re λ_j = c`. The integrand is entire in the strip
//! `-min b < Re λ < min a`, so any `c` inside it gives the same value; the
//! midpoint keeps the gamma poles as far away as possible.

use num_complex::Complex;

use super::contour::graded_breaks;
use super::quadrature::gauss_legendre;
use super::ParameterSet;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Cplx, Real};
use crate::specfn::ln_gamma;
use crate::specfn::ln_gamma_complex;

/// Required ratio of the integrand at the truncation to its peak.
const TAIL_TOL: f64 = 1e-10;

/// Truncation height from the exponential decay rate `(h - n + 2)π/2` of
/// the integrand in each variable.
pub fn sklyanin_truncation<T: Real>(params: &ParameterSet<T>) -> T {
    let rate = T::from_usize_lossy(params.h() - params.n() + 2) * T::FRAC_PI_2();
    (T::lit(40.0) / rate).max(T::lit(8.0))
}

/// One-variable log factor `Σ_i ln Γ(a_i - λ) + λ ln s + Σ_i ln Γ(b_i + λ)`.
fn ln_single<T: Real>(params: &ParameterSet<T>, lam: Cplx<T>) -> Result<Cplx<T>> {
    let mut acc = lam * params.ln_s();
    for &a in params.a() {
        acc = acc + ln_gamma_complex(Complex::new(a, T::zero()) - lam)?;
    }
    for &b in params.b() {
        acc = acc + ln_gamma_complex(lam + b)?;
    }
    Ok(acc)
}

/// `Σ_j (a_j ln s + Σ_i ln Γ(b_i + a_j))`.
fn ln_normaliser<T: Real>(params: &ParameterSet<T>) -> Result<T> {
    let mut acc = T::zero();
    for &a in params.a() {
        acc = acc + a * params.ln_s();
        for &b in params.b() {
            acc = acc + ln_gamma(a + b)?;
        }
    }
    Ok(acc)
}

/// Heights `y` and weights of a graded Gauss–Legendre rule on `[-t, t]`.
fn line_rule<T: Real>(t: T, order: usize) -> Result<(Vec<T>, Vec<T>)> {
    let (x, w) = gauss_legendre(order)?;
    let breaks = graded_breaks(T::lit(0.5).min(t), t);
    let mut ys = Vec::new();
    let mut ws = Vec::new();
    let mut panels: Vec<(T, T)> = breaks.windows(2).rev().map(|p| (-p[1], -p[0])).collect();
    panels.extend(breaks.windows(2).map(|p| (p[0], p[1])));
    for (lo, hi) in panels {
        let half = (hi - lo) / T::lit(2.0);
        let mid = (hi + lo) / T::lit(2.0);
        for (&xi, &wi) in x.iter().zip(&w) {
            ys.push(mid + half * T::lit(xi));
            ws.push(half * T::lit(wi));
        }
    }
    Ok((ys, ws))
}

/// `E e^{-s/t_{m1}}` for `n ∈ {1, 2}` by tensor-product quadrature on
/// `c + i[-t, t]`, with `order` nodes per panel.
pub fn sklyanin_lt<T: Real>(params: &ParameterSet<T>, truncation: T, order: usize) -> Result<T> {
    let n = params.n();
    if !(1..=2).contains(&n) {
        return Err(Error::Domain(format!(
            "direct quadrature supports n ≤ 2, got n = {n}"
        )));
    }
    if params.s_is_zero() {
        return Ok(T::one());
    }
    if !(truncation > T::zero()) {
        return Err(Error::Domain(format!(
            "truncation must be positive, got {truncation}"
        )));
    }
    let a = params.a();
    if n == 2 && a[0] == a[1] {
        return Err(Error::Degenerate("a_1 = a_2".into()));
    }
    let min_a = a.iter().fold(T::infinity(), |m, &x| m.min(x));
    let min_b = params.b().iter().fold(T::infinity(), |m, &x| m.min(x));
    let shift = (min_a - min_b) / T::lit(2.0);
    let norm = ln_normaliser(params)?;

    let (ys, ws) = line_rule(truncation, order)?;
    let u: Vec<Cplx<T>> = ys
        .iter()
        .map(|&y| {
            ln_single(params, Complex::new(shift, y)).map(|z| z - norm / T::from_usize_lossy(n))
        })
        .collect::<Result<_>>()?;
    let edge =
        ln_single(params, Complex::new(shift, truncation))?.re - norm / T::from_usize_lossy(n);
    let peak = u.iter().fold(T::neg_infinity(), |m, z| m.max(z.re));
    // measure dλ/(2πi) = dy/2π per variable
    let two_pi = T::TAU();
    let value = if n == 1 {
        let tail = (edge - peak).exp();
        if tail > T::lit(TAIL_TOL) {
            return Err(Error::Truncation {
                tail: tail.to_f64_lossy(),
                tol: TAIL_TOL,
            });
        }
        let terms: Vec<T> = u.iter().zip(&ws).map(|(z, &w)| z.exp().re * w).collect();
        pairwise_sum(&terms) / two_pi
    } else {
        // 1/(Γ(d)Γ(-d)) = -d sin(πd)/π with d = λ₁ - λ₂ = i(y₁ - y₂)
        let cross = |d: T| d * (T::PI() * d).sinh() / T::PI();
        let tail =
            (T::lit(2.0) * edge - T::lit(2.0) * peak).exp() * cross(truncation).max(T::one());
        let joint_tail =
            (edge + peak).exp() * cross(truncation).max(T::one()) / (T::lit(2.0) * peak).exp();
        if tail.max(joint_tail) > T::lit(TAIL_TOL) {
            return Err(Error::Truncation {
                tail: tail.max(joint_tail).to_f64_lossy(),
                tol: TAIL_TOL,
            });
        }
        let mut rows = Vec::with_capacity(ys.len());
        for (i, (&y1, &w1)) in ys.iter().zip(&ws).enumerate() {
            let mut row = Vec::with_capacity(ys.len());
            for (j, (&y2, &w2)) in ys.iter().zip(&ws).enumerate() {
                row.push((u[i] + u[j]).exp().re * cross(y1 - y2) * w1 * w2);
            }
            rows.push(pairwise_sum(&row));
        }
        pairwise_sum(&rows) / (two_pi * two_pi * T::lit(2.0))
    };
    Ok(value)
}
