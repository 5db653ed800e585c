//! The `n × n` determinant obtained by factoring the finite kernel twice.

use num_complex::Complex;

use super::kernel::finite_lt_contours;
use super::linalg::CMatrix;
use super::quadrature::QuadratureRule;
use super::ParameterSet;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::specfn::ln_gamma_complex;

fn c<T: Real>(x: T) -> Cplx<T> {
    Complex::new(x, T::zero())
}

/// `det[δ_{jℓ} + (1/2πi) ∫ f_j(w) g_ℓ(w) dw]` over the `w` rule, with
/// `f_j(w) = 1/(w - a_j)` and
/// `g_ℓ(w) = C_ℓ G(w) π / sin(π(a_ℓ - w))`,
/// `C_ℓ = Π_{r≠ℓ} Γ(a_ℓ - a_r) / F_s(a_ℓ)`, `G = F_s / Π_j Γ(· - a_j)`.
pub fn det_matrix_formula<T: Real>(
    params: &ParameterSet<T>,
    w_rule: &QuadratureRule<T>,
) -> Result<T> {
    if params.s_is_zero() {
        return Ok(T::one());
    }
    let a = params.a();
    let b = params.b();
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            if a[i] == a[j] {
                return Err(Error::Degenerate(format!(
                    "a_{} = a_{} = {}; perturb to distinct values and extrapolate",
                    i + 1,
                    j + 1,
                    a[i]
                )));
            }
        }
    }
    let ln_s = params.ln_s();
    let ln_f = |z: Cplx<T>| -> Result<Cplx<T>> {
        let mut acc = z * ln_s;
        for &bi in b {
            acc = acc + ln_gamma_complex(z + bi)?;
        }
        Ok(acc)
    };
    let mut ln_c = Vec::with_capacity(n);
    for l in 0..n {
        let mut acc = -ln_f(c(a[l]))?;
        for r in 0..n {
            if r != l {
                acc = acc + ln_gamma_complex(c(a[l] - a[r]))?;
            }
        }
        ln_c.push(acc);
    }
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    let mut m = CMatrix::identity(n);
    for (&w, &om) in w_rule.nodes.iter().zip(&w_rule.weights) {
        let mut ln_g = ln_f(w)?;
        for &aj in a {
            ln_g = ln_g - ln_gamma_complex(w - aj)?;
        }
        let f: Vec<Cplx<T>> = a.iter().map(|&aj| (w - aj).inv()).collect();
        for l in 0..n {
            let sine = ((c(a[l]) - w) * T::PI()).sin();
            if sine.norm() < T::lit(1e-14) {
                return Err(Error::Contour(format!("w node {w} hits a sine pole")));
            }
            let g = (ln_c[l] + ln_g).exp() * T::PI() / sine;
            for j in 0..n {
                m.add_to(j, l, f[j] * g * om / two_pi_i);
            }
        }
    }
    let det = m.det();
    if !crate::scalar::is_finite_c(det) {
        return Err(Error::Numerical("non-finite determinant".into()));
    }
    if det.im.abs() >= T::lit(1e-8) * (T::one() + det.norm()) {
        return Err(Error::ImaginaryResidue {
            value: det.re.to_f64_lossy(),
            imag: det.im.to_f64_lossy(),
        });
    }
    Ok(det.re)
}

/// [`det_matrix_formula`] on the default `ℓ_{δ₂}` rule with `order` nodes per
/// panel.
pub fn det_matrix_formula_default<T: Real>(params: &ParameterSet<T>, order: usize) -> Result<T> {
    if params.s_is_zero() {
        return Ok(T::one());
    }
    let (_, w) = finite_lt_contours(params)?;
    det_matrix_formula(params, &w.rule(order)?)
}

/// The homogeneous polymer value `a_j = 0`, `b_i = γ` extrapolated from
/// the perturbed parameters `a_j = εj`, `b_i = γ - εi` at `ε, ε/2, ε/4`,
/// eliminating the `O(ε)` and `O(ε²)` terms:
/// `(8D(ε/4) - 6D(ε/2) + D(ε)) / 3`.
pub fn det_matrix_formula_richardson<T: Real>(
    n: usize,
    h: usize,
    gamma: T,
    eps: T,
    ln_s: T,
    order: usize,
) -> Result<T> {
    if !(eps > T::zero()) {
        return Err(Error::Domain(format!("ε must be positive, got {eps}")));
    }
    let at =
        |e: T| det_matrix_formula_default(&ParameterSet::polymer(n, h, gamma, e, ln_s)?, order);
    let d1 = at(eps)?;
    let d2 = at(eps / T::lit(2.0))?;
    let d4 = at(eps / T::lit(4.0))?;
    Ok((d4 * T::lit(8.0) - d2 * T::lit(6.0) + d1) / T::lit(3.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{nystrom_det_finite_lt, DEFAULT_ORDER};

    #[test]
    fn one_by_one_closed_form() {
        let p = ParameterSet::new(vec![0.3_f64], vec![0.7], 0.0).unwrap();
        let d = det_matrix_formula_default(&p, DEFAULT_ORDER).unwrap();
        assert!((d - 0.5).abs() < 1e-8, "{d}");
    }

    #[test]
    fn matches_nystrom() {
        let p = ParameterSet::new(vec![0.01_f64, 0.02], vec![0.49, 0.48, 0.47], 0.0).unwrap();
        let a = det_matrix_formula_default(&p, DEFAULT_ORDER).unwrap();
        let b = nystrom_det_finite_lt(&p, DEFAULT_ORDER).unwrap();
        assert!((a - b).abs() < 1e-6 * b.abs(), "{a} vs {b}");
    }

    #[test]
    fn coincident_parameters_rejected() {
        let p = ParameterSet::homogeneous(2, 3, 0.5_f64, 0.0).unwrap();
        assert!(matches!(
            det_matrix_formula_default(&p, 16),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn richardson_matches_homogeneous_nystrom() {
        let ln_s = 0.0_f64;
        let r1 = det_matrix_formula_richardson(2, 3, 0.5, 1e-2, ln_s, DEFAULT_ORDER).unwrap();
        let r2 = det_matrix_formula_richardson(2, 3, 0.5, 5e-3, ln_s, DEFAULT_ORDER).unwrap();
        let exact = nystrom_det_finite_lt(
            &ParameterSet::homogeneous(2, 3, 0.5, ln_s).unwrap(),
            DEFAULT_ORDER,
        )
        .unwrap();
        assert!((r1 - r2).abs() < 1e-6, "{r1} vs {r2}");
        assert!((r2 - exact).abs() < 1e-6, "{r2} vs {exact}");
    }
}
