//! Kernel evaluation and Nyström discretisation.

use num_complex::Complex;

use super::contour::{build_contour, graded_breaks, Contour, ContourKind, Piece};
use super::linalg::{matmul, CMatrix};
use super::quadrature::QuadratureRule;
use super::{ParameterSet, DEFAULT_ORDER};
use crate::asymptotics::AsymptoticConstants;
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};
use crate::specfn::ln_gamma_complex;

const COLLISION: f64 = 1e-14;
const IMAG_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelVariant {
    FiniteLt,
    Prelimit,
    Limit,
    TwReference,
}

/// The phase `Φ` of the kernel.
#[derive(Clone, Debug, PartialEq)]
enum Phase<T> {
    /// `z ln s + Σ m ln Γ(z + b) - Σ m ln Γ(z - a)` over `(shift, multiplicity)` lists.
    Gamma {
        ln_s: T,
        num: Vec<(T, T)>,
        den: Vec<(T, T)>,
    },
    /// `(ḡ/6) z³ - r z`.
    Cubic { g_bar: T, r: T },
}

fn group<T: Real>(xs: &[T]) -> Vec<(T, T)> {
    let mut out: Vec<(T, T)> = Vec::new();
    for &x in xs {
        match out.iter_mut().find(|(v, _)| *v == x) {
            Some(e) => e.1 = e.1 + T::one(),
            None => out.push((x, T::one())),
        }
    }
    out
}

impl<T: Real> Phase<T> {
    fn eval(&self, z: Cplx<T>) -> Result<Cplx<T>> {
        match self {
            Phase::Gamma { ln_s, num, den } => {
                let mut acc = z * *ln_s;
                for &(b, m) in num {
                    acc = acc + ln_gamma_complex(z + b)? * m;
                }
                for &(a, m) in den {
                    acc = acc - ln_gamma_complex(z - a)? * m;
                }
                Ok(acc)
            }
            Phase::Cubic { g_bar, r } => Ok(z * z * z * (*g_bar / T::lit(6.0)) - z * *r),
        }
    }

    fn vanishes(&self) -> bool {
        matches!(self, Phase::Gamma { ln_s, .. } if *ln_s == T::neg_infinity())
    }
}

/// `1 / sin(z)`, stable for large `|Im z|`.
fn csc<T: Real>(z: Cplx<T>) -> Cplx<T> {
    let two_i = Complex::new(T::zero(), T::lit(2.0));
    if z.im > T::lit(20.0) {
        let e = (z * Complex::i()).exp();
        -two_i * e / (Complex::new(T::one(), T::zero()) - e * e)
    } else if z.im < T::lit(-20.0) {
        let e = (-z * Complex::i()).exp();
        two_i * e / (Complex::new(T::one(), T::zero()) - e * e)
    } else {
        z.sin().inv()
    }
}

/// A kernel together with the quadrature of its inner `w` integral.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelSpec<T> {
    variant: KernelVariant,
    phase: Phase<T>,
    w_rule: QuadratureRule<T>,
}

impl<T: Real> KernelSpec<T> {
    /// The finite-size Laplace-transform kernel.
    pub fn finite_lt(params: &ParameterSet<T>, w_rule: QuadratureRule<T>) -> Self {
        Self {
            variant: KernelVariant::FiniteLt,
            phase: Phase::Gamma {
                ln_s: params.ln_s(),
                num: group(params.b()),
                den: group(params.a()),
            },
            w_rule,
        }
    }

    /// The pre-limit kernel at size `n` and fluctuation coordinate `r`:
    /// `exp{n(H_n(v₁) - H_n(w)) - r n^{1/3}(w - v₁)}` with
    /// `H_n(z) = ln Γ(z) - c̃_n ln Γ(γ+z) + μz`, `c̃_n = ⌈cn⌉/n`.
    pub fn prelimit(
        constants: &AsymptoticConstants<T>,
        n: usize,
        r: T,
        w_rule: QuadratureRule<T>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be positive".into()));
        }
        let nf = T::from_usize_lossy(n);
        let h = (constants.c * nf).ceil();
        Ok(Self {
            variant: KernelVariant::Prelimit,
            phase: Phase::Gamma {
                ln_s: -nf * constants.mu - r * nf.cbrt(),
                num: vec![(constants.gamma, h)],
                den: vec![(T::zero(), nf)],
            },
            w_rule,
        })
    }

    /// The limit kernel `exp{(ḡ/6)(w³ - v₁³) + r(v₁ - w)} / (v₁ - w)`.
    pub fn limit(g_bar: T, r: T, w_rule: QuadratureRule<T>) -> Result<Self> {
        if !(g_bar > T::zero()) {
            return Err(Error::Domain(format!("ḡ must be positive, got {g_bar}")));
        }
        Ok(Self {
            variant: KernelVariant::Limit,
            phase: Phase::Cubic { g_bar, r },
            w_rule,
        })
    }

    /// The limit kernel at `ḡ = 2`, whose determinant is `F_GUE(r)`.
    pub fn tw_reference(r: T, w_rule: QuadratureRule<T>) -> Self {
        Self {
            variant: KernelVariant::TwReference,
            phase: Phase::Cubic {
                g_bar: T::lit(2.0),
                r,
            },
            w_rule,
        }
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    pub fn w_rule(&self) -> &QuadratureRule<T> {
        &self.w_rule
    }

    fn cross(&self, x: Cplx<T>) -> Result<Cplx<T>> {
        match self.variant {
            KernelVariant::FiniteLt | KernelVariant::Prelimit => {
                let px = x * T::PI();
                let s = px.sin();
                if s.norm() < T::lit(COLLISION) {
                    return Err(Error::Contour(format!("sine pole hit at v1 - w = {x}")));
                }
                Ok(csc(px) * T::PI())
            }
            KernelVariant::Limit | KernelVariant::TwReference => {
                if x.norm() < T::lit(COLLISION) {
                    return Err(Error::Contour("v and w contours intersect".into()));
                }
                Ok(x.inv())
            }
        }
    }

    fn phase_at(&self, nodes: &[Cplx<T>]) -> Result<Vec<Cplx<T>>> {
        nodes.iter().map(|&z| self.phase.eval(z)).collect()
    }

    /// `K(v₁, v₂)`.
    pub fn eval(&self, v1: Cplx<T>, v2: Cplx<T>) -> Result<Cplx<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        if self.phase.vanishes() {
            return Ok(zero);
        }
        let pv = self.phase.eval(v1)?;
        let two_pi_i = Complex::new(T::zero(), T::TAU());
        let mut acc = zero;
        for (&w, &om) in self.w_rule.nodes.iter().zip(&self.w_rule.weights) {
            let d = w - v2;
            if d.norm() < T::lit(COLLISION) {
                return Err(Error::Contour("w node coincides with v2".into()));
            }
            acc = acc + self.cross(v1 - w)? * (self.phase.eval(w)? - pv).exp() * om / d;
        }
        Ok(acc / two_pi_i)
    }
}

/// `K^{LT}(v₁, v₂)` for the finite-size parameters.
pub fn kernel_finite_lt<T: Real>(
    v1: Cplx<T>,
    v2: Cplx<T>,
    params: &ParameterSet<T>,
    w_rule: &QuadratureRule<T>,
) -> Result<Cplx<T>> {
    KernelSpec::finite_lt(params, w_rule.clone()).eval(v1, v2)
}

/// `K_{n,r}(v₁, v₂)`.
pub fn kernel_prelimit<T: Real>(
    v1: Cplx<T>,
    v2: Cplx<T>,
    constants: &AsymptoticConstants<T>,
    n: usize,
    r: T,
    w_rule: &QuadratureRule<T>,
) -> Result<Cplx<T>> {
    KernelSpec::prelimit(constants, n, r, w_rule.clone())?.eval(v1, v2)
}

/// The limit kernel.
pub fn kernel_limit<T: Real>(
    v1: Cplx<T>,
    v2: Cplx<T>,
    g_bar: T,
    r: T,
    w_rule: &QuadratureRule<T>,
) -> Result<Cplx<T>> {
    KernelSpec::limit(g_bar, r, w_rule.clone())?.eval(v1, v2)
}

/// `det(I + K)` on `L²(contour, dv/2πi)` with `order` Gauss–Legendre nodes
/// per piece.
pub fn nystrom_det<T: Real>(
    kernel: &KernelSpec<T>,
    contour: &Contour<T>,
    order: usize,
) -> Result<T> {
    if order < 4 {
        return Err(Error::Domain(format!(
            "quadrature order must be >= 4, got {order}"
        )));
    }
    nystrom_det_rule(kernel, &contour.rule(order)?)
}

/// `det(δ_jk + K(v_j, v_k) ν_k)` with `ν_k` the `v` weights over `2πi`.
///
/// `K = A·B` with `A_{jk} = S(v_j - w_k) e^{Φ(w_k) - Φ(v_j)} ω_k / 2πi` and
/// `B_{kl} = 1 / (w_k - v_l)`, so the matrix costs one exponential per
/// `(v, w)` pair.
pub fn nystrom_det_rule<T: Real>(kernel: &KernelSpec<T>, v_rule: &QuadratureRule<T>) -> Result<T> {
    if kernel.phase.vanishes() {
        return Ok(T::one());
    }
    let nv = v_rule.len();
    let w_rule = &kernel.w_rule;
    let nw = w_rule.len();
    let two_pi_i = Complex::new(T::zero(), T::TAU());
    let pv = kernel.phase_at(&v_rule.nodes)?;
    let pw = kernel.phase_at(&w_rule.nodes)?;
    let mut a = Vec::with_capacity(nv * nw);
    for j in 0..nv {
        let vj = v_rule.nodes[j];
        for k in 0..nw {
            let e = (pw[k] - pv[j]).exp();
            let val = if e.re == T::zero() && e.im == T::zero() {
                e
            } else {
                kernel.cross(vj - w_rule.nodes[k])? * e * w_rule.weights[k] / two_pi_i
            };
            a.push(val);
        }
    }
    let mut b = Vec::with_capacity(nw * nv);
    for k in 0..nw {
        for l in 0..nv {
            let d = w_rule.nodes[k] - v_rule.nodes[l];
            if d.norm() < T::lit(COLLISION) {
                return Err(Error::Contour("v and w contours intersect".into()));
            }
            b.push(v_rule.weights[l] / (two_pi_i * d));
        }
    }
    if a.iter().any(|z| !crate::scalar::is_finite_c(*z)) {
        return Err(Error::Numerical("kernel overflow on the contours".into()));
    }
    let k = matmul(&a, &b, nv, nw, nv);
    let mut m = CMatrix::identity(nv);
    for j in 0..nv {
        for l in 0..nv {
            m.add_to(j, l, k[j * nv + l]);
        }
    }
    let det = m.det();
    if !crate::scalar::is_finite_c(det) {
        return Err(Error::Numerical("non-finite determinant".into()));
    }
    if det.im.abs() >= T::lit(IMAG_TOL) * (T::one() + det.norm()) {
        return Err(Error::ImaginaryResidue {
            value: det.re.to_f64_lossy(),
            imag: det.im.to_f64_lossy(),
        });
    }
    Ok(det.re)
}

/// Height past which the `w` integrand of the finite kernel is negligible:
/// at least 50, extended until the integrand at `±T` drops below `1e-14` of
/// its largest sampled value.
fn line_truncation<T: Real>(params: &ParameterSet<T>) -> Result<T> {
    let phase = Phase::Gamma {
        ln_s: params.ln_s(),
        num: group(params.b()),
        den: group(params.a()),
    };
    let v = Complex::new(params.delta1(), T::zero());
    let pv = phase.eval(v)?;
    let mag = |y: T| -> Result<T> {
        let w = Complex::new(params.delta2(), y);
        let sine = csc((v - w) * T::PI()).norm() * T::PI();
        Ok((phase.eval(w)? - pv).re.exp() * sine / (w - v).norm())
    };
    let mut t = T::lit(50.0);
    loop {
        let mut peak = T::zero();
        let steps = 400;
        for k in 0..=steps {
            let y = t * T::from_usize_lossy(k) / T::from_usize_lossy(steps);
            peak = peak.max(mag(y)?).max(mag(-y)?);
        }
        let tail = mag(t)?.max(mag(-t)?);
        if tail <= T::lit(1e-14) * peak {
            return Ok(t);
        }
        if t > T::lit(1e4) {
            return Err(Error::Truncation {
                tail: (tail / peak).to_f64_lossy(),
                tol: 1e-14,
            });
        }
        t = t * T::lit(2.0);
    }
}

/// Default contours of the finite kernel: the circle `C_{δ₁}` for `v` and
/// the truncated line `ℓ_{δ₂}` for `w`.
pub fn finite_lt_contours<T: Real>(params: &ParameterSet<T>) -> Result<(Contour<T>, Contour<T>)> {
    let v = build_contour(ContourKind::Circle {
        radius: params.delta1(),
    })?;
    let w = build_contour(ContourKind::Line {
        delta: params.delta2(),
        truncation: line_truncation(params)?,
        panel: params.delta2() - params.delta1(),
    })?;
    Ok((v, w))
}

/// `det(I + K^{LT})` on the default contours with `order` nodes per piece.
pub fn nystrom_det_finite_lt<T: Real>(params: &ParameterSet<T>, order: usize) -> Result<T> {
    if params.s_is_zero() {
        return Ok(T::one());
    }
    let (v, w) = finite_lt_contours(params)?;
    let spec = KernelSpec::finite_lt(params, w.rule(order)?);
    nystrom_det(&spec, &v, order)
}

/// Steepest-descent contours for the pre-limit kernel at size `n`.
///
/// The `w` contour is the wedge from `z* + γ n^{-1/3}` at angles `±π/3`
/// continued vertically; the `v` contour leaves `z*` at angles `±2π/3` and
/// closes through a point left of 0. Leg lengths are capped so that
/// translating the `v` contour by 1 keeps it strictly to the right of the
/// `w` contour, which is what keeps the sine poles `w = v₁ ± 1` from being
/// crossed when deforming away from `C_{δ₁}` and `ℓ_{δ₂}`.
pub fn prelimit_contours<T: Real>(
    constants: &AsymptoticConstants<T>,
    n: usize,
) -> Result<(Contour<T>, Contour<T>)> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let (z, g, c) = (constants.z_star, constants.gamma, constants.c);
    let nf = T::from_usize_lossy(n);
    let off = g / nf.cbrt();
    if !(z + off < T::one()) {
        return Err(Error::Contour(format!(
            "critical point z* = {z} too far right for pole-free deformation"
        )));
    }
    let nominal_len = T::lit(2.0) * g / (c - T::one());
    let leg = nominal_len.min(T::lit(0.45) * (T::one() - off));
    let left = (-nominal_len).max((z + off - T::one()) / T::lit(2.0));
    let third = T::PI() / T::lit(3.0);
    let up_v = Complex::from_polar(T::one(), T::lit(2.0) * third);
    let vertex = Complex::new(z, T::zero());
    let top = vertex + up_v * leg;
    let bottom = vertex + up_v.conj() * leg;
    let lpt = Complex::new(left, T::zero());
    let breaks = graded_breaks(leg / T::lit(8.0), leg);
    let mut pieces: Vec<Piece<T>> = breaks
        .windows(2)
        .map(|w| Piece::Segment {
            from: vertex + up_v * w[0],
            to: vertex + up_v * w[1],
        })
        .collect();
    pieces.push(Piece::Segment { from: top, to: lpt });
    pieces.push(Piece::Segment {
        from: lpt,
        to: bottom,
    });
    pieces.extend(breaks.windows(2).rev().map(|w| Piece::Segment {
        from: vertex + up_v.conj() * w[1],
        to: vertex + up_v.conj() * w[0],
    }));
    let v = Contour::new(pieces, true, None)?;

    // w: graded legs near the vertex, then vertical lines
    let wv = Complex::new(z + off, T::zero());
    let up_w = Complex::from_polar(T::one(), third);
    let w_top = wv + up_w * leg;
    let h = (c * nf).ceil();
    let rate = (h - nf + T::lit(2.0)) * T::FRAC_PI_2();
    let height = w_top.im + T::lit(40.0) / rate;
    let mut wp: Vec<Piece<T>> = Vec::new();
    let vbreaks = graded_breaks(leg / T::lit(4.0), height - w_top.im);
    for win in vbreaks.windows(2).rev() {
        wp.push(Piece::Segment {
            from: Complex::new(w_top.re, -w_top.im - win[1]),
            to: Complex::new(w_top.re, -w_top.im - win[0]),
        });
    }
    for win in breaks.windows(2).rev() {
        wp.push(Piece::Segment {
            from: wv + up_w.conj() * win[1],
            to: wv + up_w.conj() * win[0],
        });
    }
    for win in breaks.windows(2) {
        wp.push(Piece::Segment {
            from: wv + up_w * win[0],
            to: wv + up_w * win[1],
        });
    }
    for win in vbreaks.windows(2) {
        wp.push(Piece::Segment {
            from: Complex::new(w_top.re, w_top.im + win[0]),
            to: Complex::new(w_top.re, w_top.im + win[1]),
        });
    }
    let w = Contour::new(wp, false, Some(height))?;
    Ok((v, w))
}

/// `det(I + K_{n,r})` on the steepest-descent contours.
pub fn prelimit_det<T: Real>(
    constants: &AsymptoticConstants<T>,
    n: usize,
    r: T,
    order: usize,
) -> Result<T> {
    let (v, w) = prelimit_contours(constants, n)?;
    let spec = KernelSpec::prelimit(constants, n, r, w.rule(order)?)?;
    nystrom_det(&spec, &v, order)
}

/// Default order, re-exported for callers that do not tune quadrature.
pub const fn default_order() -> usize {
    DEFAULT_ORDER
}
