//! Dense complex linear algebra needed by the determinant routines.

use num_complex::Complex;

use crate::scalar::{Cplx, Real};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    n: usize,
    data: Vec<Cplx<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Complex::new(T::zero(), T::zero()); n * n];
        for i in 0..n {
            data[i * n + i] = Complex::new(T::one(), T::zero());
        }
        Self { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Cplx<T>) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Cplx<T> {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Cplx<T>) {
        self.data[i * self.n + j] = v;
    }

    #[inline]
    pub fn add_to(&mut self, i: usize, j: usize, v: Cplx<T>) {
        self.data[i * self.n + j] = self.data[i * self.n + j] + v;
    }

    /// Determinant by LU factorisation with partial pivoting.
    pub fn det(mut self) -> Cplx<T> {
        let n = self.n;
        let mut det = Complex::new(T::one(), T::zero());
        for k in 0..n {
            let mut p = k;
            let mut best = self.data[k * n + k].norm();
            for i in k + 1..n {
                let v = self.data[i * n + k].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == T::zero() {
                return Complex::new(T::zero(), T::zero());
            }
            if p != k {
                for j in 0..n {
                    self.data.swap(k * n + j, p * n + j);
                }
                det = -det;
            }
            let piv = self.data[k * n + k];
            det = det * piv;
            let inv = piv.inv();
            for i in k + 1..n {
                let f = self.data[i * n + k] * inv;
                if f.re == T::zero() && f.im == T::zero() {
                    continue;
                }
                let (top, bottom) = self.data.split_at_mut(i * n);
                let pivot_row = &top[k * n..k * n + n];
                let row = &mut bottom[..n];
                for j in k + 1..n {
                    row[j] = row[j] - f * pivot_row[j];
                }
            }
        }
        det
    }
}

/// `A · B` for row-major `a` (`r × k`) and `b` (`k × c`).
pub fn matmul<T: Real>(a: &[Cplx<T>], b: &[Cplx<T>], r: usize, k: usize, c: usize) -> Vec<Cplx<T>> {
    let mut out = vec![Complex::new(T::zero(), T::zero()); r * c];
    for i in 0..r {
        let orow = &mut out[i * c..(i + 1) * c];
        for l in 0..k {
            let x = a[i * k + l];
            let brow = &b[l * c..(l + 1) * c];
            for (o, &y) in orow.iter_mut().zip(brow) {
                *o = *o + x * y;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_permutation() {
        assert_eq!(CMatrix::<f64>::identity(4).det(), Complex::new(1.0, 0.0));
        let p = CMatrix::from_fn(2, |i, j| Complex::new(if i != j { 1.0 } else { 0.0 }, 0.0));
        assert_eq!(p.det(), Complex::new(-1.0, 0.0));
    }

    #[test]
    fn vandermonde_determinant() {
        let x = [0.3, -1.2, 2.0, 0.7];
        let z: Vec<Complex<f64>> = x.iter().map(|&v| Complex::new(v, 0.5 * v)).collect();
        let m = CMatrix::from_fn(4, |i, j| z[i].powu(j as u32));
        let mut expect = Complex::new(1.0, 0.0);
        for i in 0..4 {
            for j in i + 1..4 {
                expect *= z[j] - z[i];
            }
        }
        assert!((m.det() - expect).norm() < 1e-12);
    }

    #[test]
    fn singular_is_zero() {
        let m = CMatrix::from_fn(3, |i, _| Complex::new(i as f64, 0.0));
        assert!(m.det().norm() < 1e-15);
    }

    #[test]
    fn matmul_small() {
        let a: Vec<Complex<f64>> = [1.0, 2.0, 3.0, 4.0]
            .iter()
            .map(|&x| Complex::new(x, 0.0))
            .collect();
        let b: Vec<Complex<f64>> = [0.0, 1.0, 1.0, 0.0]
            .iter()
            .map(|&x| Complex::new(x, 0.0))
            .collect();
        let c = matmul(&a, &b, 2, 2, 2);
        let re: Vec<f64> = c.iter().map(|z| z.re).collect();
        assert_eq!(re, vec![2.0, 1.0, 4.0, 3.0]);
    }
}
