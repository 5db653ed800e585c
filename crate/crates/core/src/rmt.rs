//! Random-matrix oracle: Hermitian eigenvalues by cyclic Jacobi rotations and
//! the smallest eigenvalue of a complex Wishart (Laguerre unitary) matrix.

use num_complex::Complex;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::scalar::{Cplx, Real};

const MAX_SWEEPS: usize = 100;
const MAX_DIM: usize = 64;

/// Hermitian matrix; only the upper triangle (diagonal included) is stored,
/// so `A = A*` holds by construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix<T> {
    n: usize,
    upper: Vec<Cplx<T>>,
}

impl<T: Real> HermitianMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            upper: vec![Complex::new(T::zero(), T::zero()); n * (n + 1) / 2],
        }
    }

    /// Builds the matrix from `f(i, j)` evaluated on `i <= j`; the imaginary
    /// part of diagonal values is discarded.
    pub fn from_upper(n: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut a = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                a.set(i, j, f(i, j));
            }
        }
        a
    }

    pub fn from_diagonal(d: &[T]) -> Self {
        Self::from_upper(d.len(), |i, j| {
            if i == j {
                Complex::new(d[i], T::zero())
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn index(&self, i: usize, j: usize) -> usize {
        // row-major packing of the upper triangle
        i * self.n - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        if i <= j {
            self.upper[self.index(i, j)]
        } else {
            self.upper[self.index(j, i)].conj()
        }
    }

    /// Sets entry `(i, j)` and implicitly `(j, i)` to the conjugate.
    pub fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        let (i, j, v) = if i <= j { (i, j, v) } else { (j, i, v.conj()) };
        let v = if i == j {
            Complex::new(v.re, T::zero())
        } else {
            v
        };
        let k = self.index(i, j);
        self.upper[k] = v;
    }

    pub fn trace(&self) -> T {
        (0..self.n)
            .map(|i| self.get(i, i).re)
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn frobenius_norm(&self) -> T {
        let mut s = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                s = s + self.get(i, j).norm_sqr();
            }
        }
        s.sqrt()
    }

    pub fn to_dense(&self) -> Vec<Vec<Cplx<T>>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j)).collect())
            .collect()
    }
}

fn off_norm<T: Real>(a: &[Vec<Cplx<T>>]) -> T {
    let mut s = T::zero();
    for (i, row) in a.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            if i != j {
                s = s + v.norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// All eigenvalues in ascending order.
pub fn hermitian_eigenvalues<T: Real>(mat: &HermitianMatrix<T>) -> Result<Vec<T>> {
    let n = mat.dim();
    if n > MAX_DIM {
        return Err(Error::Domain(format!("dimension {n} exceeds {MAX_DIM}")));
    }
    let mut a = mat.to_dense();
    let scale = mat.frobenius_norm();
    let tol = T::lit(1e-12).max(T::lit(4.0) * T::epsilon()) * scale;
    let mut sweeps = 0;
    while off_norm(&a) > tol {
        if sweeps == MAX_SWEEPS {
            return Err(Error::Numerical(format!(
                "Jacobi did not converge in {MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, p, q);
            }
        }
    }
    let mut ev: Vec<T> = (0..n).map(|i| a[i][i].re).collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
    Ok(ev)
}

/// One complex Jacobi rotation annihilating `a[p][q]`.
fn rotate<T: Real>(a: &mut [Vec<Cplx<T>>], p: usize, q: usize) {
    let n = a.len();
    let b = a[p][q];
    let nb = b.norm();
    if nb == T::zero() {
        return;
    }
    // make a[p][q] real and positive: column q by e^{-iφ}, row q by e^{iφ}
    let ph = b.unscale(nb);
    let ph_c = ph.conj();
    for row in a.iter_mut() {
        row[q] = row[q] * ph_c;
    }
    for v in a[q].iter_mut() {
        *v = *v * ph;
    }
    let app = a[p][p].re;
    let aqq = a[q][q].re;
    let tau = (aqq - app) / (T::lit(2.0) * nb);
    let t = if tau >= T::zero() {
        T::one() / (tau + (T::one() + tau * tau).sqrt())
    } else {
        -T::one() / (-tau + (T::one() + tau * tau).sqrt())
    };
    let c = T::one() / (T::one() + t * t).sqrt();
    let s = t * c;
    for row in a.iter_mut() {
        let (xp, xq) = (row[p], row[q]);
        row[p] = xp * c - xq * s;
        row[q] = xp * s + xq * c;
    }
    for k in 0..n {
        let (xp, xq) = (a[p][k], a[q][k]);
        a[p][k] = xp * c - xq * s;
        a[q][k] = xp * s + xq * c;
    }
    let zero = Complex::new(T::zero(), T::zero());
    a[p][q] = zero;
    a[q][p] = zero;
    a[p][p].im = T::zero();
    a[q][q].im = T::zero();
}

/// `X X*` for an `n × h` matrix of standard complex Gaussians
/// (real and imaginary parts i.i.d. N(0, 1/2), so `|x|²` is Exp(1)).
pub fn sample_wishart<T: Real, R: Rng + ?Sized>(
    n: usize,
    h: usize,
    rng: &mut R,
) -> Result<HermitianMatrix<T>> {
    if n == 0 || h < n {
        return Err(Error::Domain(format!(
            "Wishart needs h >= n >= 1, got n={n}, h={h}"
        )));
    }
    let half = std::f64::consts::FRAC_1_SQRT_2;
    let x: Vec<Cplx<T>> = (0..n * h)
        .map(|_| {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            Complex::new(T::lit(re * half), T::lit(im * half))
        })
        .collect();
    Ok(HermitianMatrix::from_upper(n, |i, j| {
        (0..h).fold(Complex::new(T::zero(), T::zero()), |acc, k| {
            acc + x[i * h + k] * x[j * h + k].conj()
        })
    }))
}

/// Smallest eigenvalue of an `n × n` complex Wishart matrix with `h` degrees
/// of freedom. Its law has density `∝ Δ(λ)² Π λ_i^{h-n} e^{-λ_i}`.
pub fn wishart_min_eig<T: Real, R: Rng + ?Sized>(n: usize, h: usize, rng: &mut R) -> Result<T> {
    let a = sample_wishart(n, h, rng)?;
    let ev = hermitian_eigenvalues(&a)?;
    let min = ev[0];
    if !(min > T::zero()) {
        return Err(Error::Numerical(format!(
            "nonpositive Wishart eigenvalue {min}"
        )));
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    /// Determinant by Gaussian elimination with partial pivoting.
    fn det(mut m: Vec<Vec<Complex<f64>>>) -> Complex<f64> {
        let n = m.len();
        let mut d = Complex::new(1.0, 0.0);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&x, &y| m[x][k].norm().total_cmp(&m[y][k].norm()))
                .unwrap();
            if p != k {
                m.swap(p, k);
                d = -d;
            }
            let piv = m[k][k];
            d *= piv;
            if piv.norm() == 0.0 {
                return Complex::new(0.0, 0.0);
            }
            for i in k + 1..n {
                let f = m[i][k] / piv;
                for j in k..n {
                    let t = m[k][j];
                    m[i][j] -= f * t;
                }
            }
        }
        d
    }

    #[test]
    fn diagonal_sorted() {
        let a = HermitianMatrix::from_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(hermitian_eigenvalues(&a).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn two_by_two_closed_form() {
        let b = Complex::new(0.3_f64, -1.1);
        let a =
            HermitianMatrix::from_upper(2, |i, j| if i == j { Complex::new(2.0, 0.0) } else { b });
        let ev = hermitian_eigenvalues(&a).unwrap();
        assert!((ev[0] - (2.0 - b.norm())).abs() < 1e-14);
        assert!((ev[1] - (2.0 + b.norm())).abs() < 1e-14);
    }

    #[test]
    fn storage_is_conjugate_symmetric() {
        let mut a = HermitianMatrix::<f64>::zeros(3);
        a.set(2, 0, Complex::new(1.0, 2.0));
        assert_eq!(a.get(0, 2), Complex::new(1.0, -2.0));
        a.set(1, 1, Complex::new(4.0, 9.0));
        assert_eq!(a.get(1, 1), Complex::new(4.0, 0.0));
    }

    #[test]
    fn random_matrix_trace_and_charpoly() {
        let mut rng = stream(31, 0);
        let a: HermitianMatrix<f64> = sample_wishart(5, 5, &mut rng).unwrap();
        let b = HermitianMatrix::from_upper(5, |i, j| {
            a.get(i, j) - Complex::new(if i == j { 3.0 } else { 0.0 }, 0.0)
        });
        let ev = hermitian_eigenvalues(&b).unwrap();
        let sum: f64 = ev.iter().sum();
        assert!((sum - b.trace()).abs() < 1e-10 * b.trace().abs().max(1.0));
        for &l in &ev {
            let mut m = b.to_dense();
            for (i, row) in m.iter_mut().enumerate() {
                row[i] -= l;
            }
            assert!(det(m).norm() < 1e-8, "charpoly at {l}");
        }
    }

    #[test]
    fn wishart_eigenvalues_positive() {
        let mut rng = stream(32, 0);
        for _ in 0..50 {
            let ev =
                hermitian_eigenvalues(&sample_wishart::<f64, _>(4, 6, &mut rng).unwrap()).unwrap();
            assert!(ev[0] > 0.0);
        }
    }

    #[test]
    fn one_dimensional_wishart_is_gamma() {
        let h = 4;
        let n_draws = 100_000;
        let mut rng = stream(33, 0);
        let mean = (0..n_draws)
            .map(|_| wishart_min_eig::<f64, _>(1, h, &mut rng).unwrap())
            .sum::<f64>()
            / n_draws as f64;
        assert!((mean - h as f64).abs() < 4.0 * (h as f64 / n_draws as f64).sqrt());
    }

    #[test]
    fn marchenko_pastur_lower_edge() {
        let n = 40;
        let mut rng = stream(34, 0);
        let x: f64 = wishart_min_eig(n, 2 * n, &mut rng).unwrap();
        let edge = (2.0_f64.sqrt() - 1.0).powi(2);
        assert!((x / n as f64 - edge).abs() < 0.08, "{}", x / n as f64);
    }

    #[test]
    fn rejects_bad_shapes() {
        let mut rng = stream(0, 0);
        assert!(wishart_min_eig::<f64, _>(3, 2, &mut rng).is_err());
        assert!(hermitian_eigenvalues(&HermitianMatrix::<f64>::zeros(65)).is_err());
    }
}
