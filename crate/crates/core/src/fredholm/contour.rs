//! Piecewise-smooth contours and the specific curves used by the determinant
//! formulas.

use num_complex::Complex;

use super::quadrature::{gauss_legendre, QuadratureRule};
use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

/// A smooth arc parametrised over `t ∈ [0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Piece<T> {
    Segment {
        from: Cplx<T>,
        to: Cplx<T>,
    },
    /// `center + radius · e^{i(start + sweep·t)}`.
    Arc {
        center: Cplx<T>,
        radius: T,
        start: T,
        sweep: T,
    },
}

impl<T: Real> Piece<T> {
    pub fn point(&self, t: T) -> Cplx<T> {
        match *self {
            Piece::Segment { from, to } => from + (to - from) * t,
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => center + Complex::from_polar(radius, start + sweep * t),
        }
    }

    pub fn derivative(&self, t: T) -> Cplx<T> {
        match *self {
            Piece::Segment { from, to } => to - from,
            Piece::Arc {
                radius,
                start,
                sweep,
                ..
            } => Complex::from_polar(radius * sweep, start + sweep * t) * Complex::i(),
        }
    }

    pub fn start(&self) -> Cplx<T> {
        self.point(T::zero())
    }

    pub fn end(&self) -> Cplx<T> {
        self.point(T::one())
    }

    fn reversed(&self) -> Self {
        match *self {
            Piece::Segment { from, to } => Piece::Segment { from: to, to: from },
            Piece::Arc {
                center,
                radius,
                start,
                sweep,
            } => Piece::Arc {
                center,
                radius,
                start: start + sweep,
                sweep: -sweep,
            },
        }
    }
}

/// An oriented chain of pieces, each ending where the next starts.
#[derive(Clone, Debug, PartialEq)]
pub struct Contour<T> {
    pieces: Vec<Piece<T>>,
    closed: bool,
    truncation: Option<T>,
}

impl<T: Real> Contour<T> {
    /// Chains `pieces`; consecutive pieces must meet (up to rounding).
    pub fn new(pieces: Vec<Piece<T>>, closed: bool, truncation: Option<T>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::Domain("contour needs at least one piece".into()));
        }
        let tol = T::lit(1e-9);
        let scale = pieces
            .iter()
            .map(|p| p.start().norm())
            .fold(T::one(), T::max);
        for w in pieces.windows(2) {
            if (w[0].end() - w[1].start()).norm() > tol * scale {
                return Err(Error::Domain("contour pieces are not continuous".into()));
            }
        }
        if closed && (pieces[pieces.len() - 1].end() - pieces[0].start()).norm() > tol * scale {
            return Err(Error::Domain(
                "closed contour does not return to its start".into(),
            ));
        }
        Ok(Self {
            pieces,
            closed,
            truncation,
        })
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn truncation(&self) -> Option<T> {
        self.truncation
    }

    pub fn start(&self) -> Cplx<T> {
        self.pieces[0].start()
    }

    pub fn end(&self) -> Cplx<T> {
        self.pieces[self.pieces.len() - 1].end()
    }

    /// Same curve, opposite orientation.
    pub fn reversed(&self) -> Self {
        Self {
            pieces: self.pieces.iter().rev().map(Piece::reversed).collect(),
            closed: self.closed,
            truncation: self.truncation,
        }
    }

    /// Gauss–Legendre rule with `order` nodes on every piece.
    pub fn rule(&self, order: usize) -> Result<QuadratureRule<T>> {
        let (x, w) = gauss_legendre(order)?;
        let half = T::lit(0.5);
        let mut nodes = Vec::with_capacity(order * self.pieces.len());
        let mut weights = Vec::with_capacity(order * self.pieces.len());
        for p in &self.pieces {
            for (&xi, &wi) in x.iter().zip(&w) {
                let t = (T::lit(xi) + T::one()) * half;
                nodes.push(p.point(t));
                weights.push(p.derivative(t) * (T::lit(wi) * half));
            }
        }
        QuadratureRule::new(nodes, weights)
    }
}

/// Breakpoints `0, d, 3d, 7d, …` (panel widths doubling) ending exactly at
/// `total`; a short last panel is merged into its predecessor.
pub fn graded_breaks<T: Real>(first: T, total: T) -> Vec<T> {
    let mut out = vec![T::zero()];
    let mut width = first;
    let mut at = T::zero();
    while at + width < total {
        at = at + width;
        out.push(at);
        width = width * T::lit(2.0);
    }
    if out.len() > 1 && total - at < T::lit(0.5) * width / T::lit(2.0) {
        out.pop();
    }
    out.push(total);
    out
}

/// Segments along the ray `origin + dir · t`, `t` following `breaks`
/// (outward when `outward`, otherwise inward toward `origin`).
fn ray<T: Real>(origin: Cplx<T>, dir: Cplx<T>, breaks: &[T], outward: bool) -> Vec<Piece<T>> {
    let mut pieces: Vec<Piece<T>> = breaks
        .windows(2)
        .map(|w| Piece::Segment {
            from: origin + dir * w[0],
            to: origin + dir * w[1],
        })
        .collect();
    if !outward {
        pieces = pieces.iter().rev().map(Piece::reversed).collect();
    }
    pieces
}

/// Kinds of contour the library knows how to build.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ContourKind<T> {
    /// Circle of the given radius about 0, counter-clockwise, in four arcs.
    Circle { radius: T },
    /// `delta + i[-truncation, truncation]` upward, split into panels whose
    /// heights double away from the real axis starting from `panel`.
    Line { delta: T, truncation: T, panel: T },
    /// Closed steepest-descent contour through `z*` for the variable `v`:
    /// for `c ≤ 5/2`, legs of length `2γ/(c-1)` at angles `±2π/3` joined to
    /// the point `-2γ/(c-1)`; for `c > 5/2`, legs of length
    /// `6γ/(5(√c-1))` closed by an arc centred at `z*`. Positive orientation.
    SteepestV { z_star: T, gamma: T, c: T },
    /// Contour for `w`: legs of length `leg` from `z* + γ n^{-1/3}` at angles
    /// `±π/3`, continued by vertical lines up to `|Im w| = truncation`.
    SteepestW {
        z_star: T,
        gamma: T,
        n: usize,
        leg: T,
        truncation: T,
    },
    /// Wedge `vertex + [0, m] e^{±2πi/3}`, upward.
    WedgeV { m: T, vertex: T, panel: T },
    /// Wedge `offset + [0, m] e^{±iπ/3}`, upward.
    WedgeW { m: T, offset: T, panel: T },
}

fn positive<T: Real>(name: &str, x: T) -> Result<()> {
    if x > T::zero() && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be positive, got {x}")))
    }
}

/// Builds the contour described by `kind`.
pub fn build_contour<T: Real>(kind: ContourKind<T>) -> Result<Contour<T>> {
    let zero = T::zero();
    let c0 = |re: T| Complex::new(re, zero);
    let third = T::PI() / T::lit(3.0);
    match kind {
        ContourKind::Circle { radius } => {
            positive("radius", radius)?;
            let quarter = T::FRAC_PI_2();
            let pieces = (0..4)
                .map(|k| Piece::Arc {
                    center: c0(zero),
                    radius,
                    start: quarter * T::from_usize_lossy(k) - T::PI(),
                    sweep: quarter,
                })
                .collect();
            Contour::new(pieces, true, None)
        }
        ContourKind::Line {
            delta,
            truncation,
            panel,
        } => {
            positive("truncation", truncation)?;
            positive("panel", panel)?;
            let breaks = graded_breaks(panel, truncation);
            let mut pieces = ray(c0(delta), -Complex::i(), &breaks, false);
            pieces.extend(ray(c0(delta), Complex::i(), &breaks, true));
            Contour::new(pieces, false, Some(truncation))
        }
        ContourKind::SteepestV { z_star, gamma, c } => {
            positive("z*", z_star)?;
            positive("gamma", gamma)?;
            if !(c > T::one()) {
                return Err(Error::Domain(format!("c must be > 1, got {c}")));
            }
            let vertex = c0(z_star);
            let up = Complex::from_polar(T::one(), T::lit(2.0) * third);
            let down = up.conj();
            if c <= T::lit(2.5) {
                let len = T::lit(2.0) * gamma / (c - T::one());
                let left = c0(-len);
                let pieces = vec![
                    Piece::Segment {
                        from: vertex,
                        to: vertex + up * len,
                    },
                    Piece::Segment {
                        from: vertex + up * len,
                        to: left,
                    },
                    Piece::Segment {
                        from: left,
                        to: vertex + down * len,
                    },
                    Piece::Segment {
                        from: vertex + down * len,
                        to: vertex,
                    },
                ];
                Contour::new(pieces, true, None)
            } else {
                let len = T::lit(6.0) * gamma / (T::lit(5.0) * (c.sqrt() - T::one()));
                let pieces = vec![
                    Piece::Segment {
                        from: vertex,
                        to: vertex + up * len,
                    },
                    Piece::Arc {
                        center: vertex,
                        radius: len,
                        start: T::lit(2.0) * third,
                        sweep: T::lit(2.0) * third,
                    },
                    Piece::Segment {
                        from: vertex + down * len,
                        to: vertex,
                    },
                ];
                Contour::new(pieces, true, None)
            }
        }
        ContourKind::SteepestW {
            z_star,
            gamma,
            n,
            leg,
            truncation,
        } => {
            positive("z*", z_star)?;
            positive("gamma", gamma)?;
            positive("leg", leg)?;
            if n == 0 {
                return Err(Error::Domain("n must be positive".into()));
            }
            let off = gamma / T::from_usize_lossy(n).cbrt();
            let vertex = c0(z_star + off);
            let up = Complex::from_polar(leg, third);
            let top = vertex + up;
            let bottom = vertex + up.conj();
            if !(truncation > top.im) {
                return Err(Error::Domain(
                    "truncation must exceed the leg height".into(),
                ));
            }
            let pieces = vec![
                Piece::Segment {
                    from: Complex::new(bottom.re, -truncation),
                    to: bottom,
                },
                Piece::Segment {
                    from: bottom,
                    to: vertex,
                },
                Piece::Segment {
                    from: vertex,
                    to: top,
                },
                Piece::Segment {
                    from: top,
                    to: Complex::new(top.re, truncation),
                },
            ];
            Contour::new(pieces, false, Some(truncation))
        }
        ContourKind::WedgeV { m, vertex, panel } => {
            positive("M", m)?;
            positive("panel", panel)?;
            let breaks = graded_breaks(panel, m);
            let up = Complex::from_polar(T::one(), T::lit(2.0) * third);
            let mut pieces = ray(c0(vertex), up.conj(), &breaks, false);
            pieces.extend(ray(c0(vertex), up, &breaks, true));
            Contour::new(pieces, false, Some(m))
        }
        ContourKind::WedgeW { m, offset, panel } => {
            positive("M", m)?;
            positive("offset", offset)?;
            positive("panel", panel)?;
            let breaks = graded_breaks(panel, m);
            let up = Complex::from_polar(T::one(), third);
            let mut pieces = ray(c0(offset), up.conj(), &breaks, false);
            pieces.extend(ray(c0(offset), up, &breaks, true));
            Contour::new(pieces, false, Some(m))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn circle_winding_number() {
        let c = build_contour(ContourKind::Circle { radius: 0.1_f64 }).unwrap();
        assert!(c.is_closed());
        let rule = c.rule(48).unwrap();
        let wind = rule.integrate(|z| (z * Complex::new(0.0, 2.0 * PI)).inv());
        assert!((wind - 1.0).norm() < 1e-10);
        assert!(rule.integrate(|_| Complex::new(1.0, 0.0)).norm() < 1e-12);
        // off-centre point outside the circle
        let out = rule.integrate(|z| ((z - 0.3) * Complex::new(0.0, 2.0 * PI)).inv());
        assert!(out.norm() < 1e-10);
    }

    #[test]
    fn wedge_endpoints() {
        let c = build_contour(ContourKind::WedgeV {
            m: 3.0_f64,
            vertex: 0.0,
            panel: 0.5,
        })
        .unwrap();
        let e = Complex::from_polar(3.0, 2.0 * PI / 3.0);
        assert!((c.end() - e).norm() < 1e-12);
        assert!((c.start() - e.conj()).norm() < 1e-12);
        assert!(c.pieces().iter().any(|p| p.end().norm() < 1e-15));
        let w = build_contour(ContourKind::WedgeW {
            m: 3.0_f64,
            offset: 0.5,
            panel: 0.5,
        })
        .unwrap();
        assert!((w.end() - (Complex::from_polar(3.0, PI / 3.0) + 0.5)).norm() < 1e-12);
    }

    #[test]
    fn steepest_v_small_c_geometry() {
        let z = 0.2;
        let c = build_contour(ContourKind::SteepestV {
            z_star: z,
            gamma: 0.1,
            c: 2.0_f64,
        })
        .unwrap();
        let p = c.pieces();
        assert_eq!(p.len(), 4);
        assert!((p[0].start() - z).norm() < 1e-15);
        let leg = p[0].end() - p[0].start();
        assert!((leg.norm() - 0.2).abs() < 1e-14);
        assert!((leg.arg() - 2.0 * PI / 3.0).abs() < 1e-14);
        assert!((p[1].end() + 0.2).norm() < 1e-15);
        // positive orientation: winding number 1 about a point inside
        let rule = c.rule(32).unwrap();
        let wind = rule.integrate(|v| ((v - 0.0) * Complex::new(0.0, 2.0 * PI)).inv());
        assert!((wind - 1.0).norm() < 1e-8);
    }

    #[test]
    fn steepest_v_large_c_has_arc() {
        let c = build_contour(ContourKind::SteepestV {
            z_star: 0.1,
            gamma: 0.1,
            c: 4.0_f64,
        })
        .unwrap();
        assert!(matches!(c.pieces()[1], Piece::Arc { .. }));
        let len = 6.0 * 0.1 / 5.0;
        assert!(((c.pieces()[0].end() - 0.1).norm() - len).abs() < 1e-14);
    }

    #[test]
    fn steepest_w_shape() {
        let c = build_contour(ContourKind::SteepestW {
            z_star: 0.3,
            gamma: 0.2,
            n: 8,
            leg: 0.4,
            truncation: 5.0_f64,
        })
        .unwrap();
        let v = c.pieces()[1].end();
        assert!((v.re - 0.4).abs() < 1e-14 && v.im == 0.0);
        assert!((c.end().im - 5.0).abs() < 1e-14);
        assert!((c.start().im + 5.0).abs() < 1e-14);
    }

    #[test]
    fn line_integrates_gaussian() {
        let c = build_contour(ContourKind::Line {
            delta: 0.0_f64,
            truncation: 12.0,
            panel: 0.5,
        })
        .unwrap();
        let rule = c.rule(24).unwrap();
        // ∫ e^{z²} dz along iℝ = i√π
        let v = rule.integrate(|z| (z * z).exp());
        assert!((v - Complex::new(0.0, PI.sqrt())).norm() < 1e-12);
    }

    #[test]
    fn graded_breaks_end_exactly() {
        let b = graded_breaks(0.5_f64, 12.0);
        assert_eq!(b[0], 0.0);
        assert_eq!(*b.last().unwrap(), 12.0);
        assert!(b.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_contour(ContourKind::Circle { radius: -1.0_f64 }).is_err());
        assert!(build_contour(ContourKind::SteepestV {
            z_star: 0.1,
            gamma: 0.1,
            c: 0.5_f64
        })
        .is_err());
        assert!(Contour::new(
            vec![
                Piece::Segment {
                    from: Complex::new(0.0_f64, 0.0),
                    to: Complex::new(1.0, 0.0)
                },
                Piece::Segment {
                    from: Complex::new(2.0, 0.0),
                    to: Complex::new(3.0, 0.0)
                }
            ],
            false,
            None
        )
        .is_err());
    }

    #[test]
    fn reversal_flips_integral() {
        let c = build_contour(ContourKind::Circle { radius: 0.5_f64 }).unwrap();
        let f = |z: Complex<f64>| z.inv();
        let a = c.rule(16).unwrap().integrate(f);
        let b = c.reversed().rule(16).unwrap().integrate(f);
        assert!((a + b).norm() < 1e-12);
    }
}
