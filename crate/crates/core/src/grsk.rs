//! Geometric RSK from its defining non-intersecting path sums.
//!
//! For an `h × n` positive matrix `W`, `τ_r(h, k)` is the sum over r-tuples of
//! vertex-disjoint up/right paths in the first `k` columns, from
//! `(1,1), …, (1,r)` to `(h,k-r+1), …, (h,k)`, of the product of `w` over the
//! cells they visit. The image `T(W)` satisfies, along each diagonal,
//! `t_{h-r+1,k-r+1} ⋯ t_{h,k} = τ_r(h,k)`, so successive ratios peel off one
//! entry at a time: `t_{h-r+1,k-r+1} = τ_r(h,k) / τ_{r-1}(h,k)`. These cells
//! have `i - j ≥ h - n`; the others come from `T(Wᵗ) = T(W)ᵗ`.
//!
//! Evaluation is exhaustive and only meant for small matrices.

use crate::error::{Error, Result};
use crate::polymer::{partition_log, Grid, PolymerInstance};
use crate::scalar::{LogSumExp, Real};

/// Largest number of path tuples `ln_tau` will visit.
pub const TUPLE_BUDGET: f64 = 1e6;

/// The image `T(W)`, stored as logarithms of its entries.
#[derive(Clone, Debug, PartialEq)]
pub struct GrskImage<T> {
    ln_t: Grid<T>,
}

impl<T: Real> GrskImage<T> {
    pub fn h(&self) -> usize {
        self.ln_t.rows()
    }

    pub fn n(&self) -> usize {
        self.ln_t.cols()
    }

    /// Entry `t_{ij}` (0-based).
    pub fn get(&self, i: usize, j: usize) -> T {
        self.ln_t.get(i, j).exp()
    }

    pub fn ln_get(&self, i: usize, j: usize) -> T {
        self.ln_t.get(i, j)
    }

    pub fn ln_t(&self) -> &Grid<T> {
        &self.ln_t
    }

    pub fn t(&self) -> Grid<T> {
        self.ln_t.map(T::exp)
    }

    pub fn transpose(&self) -> Self {
        Self {
            ln_t: self.ln_t.transpose(),
        }
    }
}

fn ln_matrix<T: Real>(w: &Grid<T>) -> Result<Grid<T>> {
    if w.rows() == 0 || w.cols() == 0 {
        return Err(Error::Domain("empty matrix".into()));
    }
    if w.as_slice()
        .iter()
        .any(|&x| !(x > T::zero() && x.is_finite()))
    {
        return Err(Error::Domain("entries must be positive and finite".into()));
    }
    if w.rows() * w.cols() > 64 {
        return Err(Error::Domain(
            "matrix too large for path enumeration (more than 64 cells)".into(),
        ));
    }
    Ok(w.map(T::ln))
}

/// Up/right paths in the first `k` columns from `(0, s)` to `(h-1, e)`, as
/// (cell bitmask, log-weight) pairs.
fn paths<T: Real>(lw: &Grid<T>, k: usize, s: usize, e: usize) -> Vec<(u64, T)> {
    let h = lw.rows();
    let mut out = Vec::new();
    if e < s {
        return out;
    }
    // DFS over step sequences
    let mut stack = vec![(0usize, s, 1u64 << (s), lw.get(0, s))];
    while let Some((i, j, mask, acc)) = stack.pop() {
        if i == h - 1 && j == e {
            out.push((mask, acc));
            continue;
        }
        if j < e {
            let bit = 1u64 << (i * k + j + 1);
            stack.push((i, j + 1, mask | bit, acc + lw.get(i, j + 1)));
        }
        if i < h - 1 {
            let bit = 1u64 << ((i + 1) * k + j);
            stack.push((i + 1, j, mask | bit, acc + lw.get(i + 1, j)));
        }
    }
    out
}

fn ln_tau_of_logs<T: Real>(lw: &Grid<T>, k: usize, r: usize) -> Result<T> {
    let (h, n) = (lw.rows(), lw.cols());
    if k == 0 || k > n || r > h.min(k) {
        return Err(Error::Domain(format!(
            "need 1 <= k <= n and r <= min(h, k); got k={k}, r={r}, h={h}, n={n}"
        )));
    }
    if r == 0 {
        return Ok(T::zero());
    }
    let lists: Vec<Vec<(u64, T)>> = (0..r).map(|l| paths(lw, k, l, k - r + l)).collect();
    let count = lists.iter().map(|l| l.len() as f64).product::<f64>();
    if count > TUPLE_BUDGET {
        return Err(Error::Size {
            count,
            budget: TUPLE_BUDGET,
        });
    }
    let mut acc = LogSumExp::new();
    fn dfs<T: Real>(
        lists: &[Vec<(u64, T)>],
        level: usize,
        used: u64,
        partial: T,
        acc: &mut LogSumExp<T>,
    ) {
        if level == lists.len() {
            acc.push(partial);
            return;
        }
        for &(mask, lw) in &lists[level] {
            if mask & used == 0 {
                dfs(lists, level + 1, used | mask, partial + lw, acc);
            }
        }
    }
    dfs(&lists, 0, 0, T::zero(), &mut acc);
    let v = acc.value();
    if v == T::neg_infinity() {
        return Err(Error::Numerical("no non-intersecting path tuple".into()));
    }
    Ok(v)
}

/// `ln τ_r(h, k)` for `1 ≤ k ≤ n`, `0 ≤ r ≤ min(h, k)` (`τ₀ = 1`).
pub fn ln_tau<T: Real>(w: &Grid<T>, k: usize, r: usize) -> Result<T> {
    ln_tau_of_logs(&ln_matrix(w)?, k, r)
}

/// `τ_r(h, k)`.
pub fn tau<T: Real>(w: &Grid<T>, k: usize, r: usize) -> Result<T> {
    Ok(ln_tau(w, k, r)?.exp())
}

/// Fills the cells with `i - j ≥ h - n` from the ratio ladder.
fn fill_lower<T: Real>(lw: &Grid<T>, out: &mut Grid<T>, filled: &mut Grid<bool>) -> Result<()> {
    let (h, n) = (lw.rows(), lw.cols());
    for k in 1..=n {
        let mut prev = T::zero();
        for r in 1..=h.min(k) {
            let cur = ln_tau_of_logs(lw, k, r)?;
            let (i, j) = (h - r, k - r);
            out.set(i, j, cur - prev);
            filled.set(i, j, true);
            prev = cur;
        }
    }
    Ok(())
}

/// The full image `T(W)`.
pub fn grsk_map<T: Real>(w: &Grid<T>) -> Result<GrskImage<T>> {
    let lw = ln_matrix(w)?;
    let (h, n) = (lw.rows(), lw.cols());
    let mut out = Grid::filled(h, n, T::zero());
    let mut filled = Grid::filled(h, n, false);
    fill_lower(&lw, &mut out, &mut filled)?;
    let lwt = lw.transpose();
    let mut out_t = Grid::filled(n, h, T::zero());
    let mut filled_t = Grid::filled(n, h, false);
    fill_lower(&lwt, &mut out_t, &mut filled_t)?;
    for i in 0..h {
        for j in 0..n {
            if !filled.get(i, j) {
                debug_assert!(filled_t.get(j, i));
                out.set(i, j, out_t.get(j, i));
            }
        }
    }
    Ok(GrskImage { ln_t: out })
}

/// `ln Σ_{φ ∈ Φ_{m,n}} Π g_{ij}` with `g_{ij} = 1/w_{i+j-1, n-j+1}`
/// (1-based), `m = h - n + 1`. Equals `-ln t_{m1}` of `T(W)`.
pub fn complement_partition<T: Real>(w: &Grid<T>) -> Result<T> {
    let (h, n) = (w.rows(), w.cols());
    if n == 0 || h < n {
        return Err(Error::Domain(format!("need h >= n >= 1, got h={h}, n={n}")));
    }
    if w.as_slice()
        .iter()
        .any(|&x| !(x > T::zero() && x.is_finite()))
    {
        return Err(Error::Domain("entries must be positive and finite".into()));
    }
    let m = h - n + 1;
    let lg = Grid::from_fn(m, n, |i, j| -w.get(i + j, n - 1 - j).ln());
    Ok(partition_log(&PolymerInstance::from_ln_weights(lg)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;
    use proptest::prelude::*;
    use rand::Rng;

    fn random(h: usize, n: usize, seed: u64) -> Grid<f64> {
        let mut rng = stream(seed, 0);
        Grid::from_fn(h, n, |_, _| 0.2 + 2.0 * rng.random::<f64>())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn single_cell() {
        let w: Grid<f64> = Grid::from_rows(&[vec![2.5]]).unwrap();
        assert!((tau(&w, 1, 1).unwrap() - 2.5).abs() < 1e-15);
        assert!((grsk_map(&w).unwrap().get(0, 0) - 2.5).abs() < 1e-15);
    }

    #[test]
    fn two_by_two_single_path_sum() {
        let w = Grid::from_rows(&[vec![1.5, 2.0], vec![3.0, 0.5]]).unwrap();
        let (w11, w12, w21, w22) = (1.5, 2.0, 3.0, 0.5);
        let expect = w11 * w21 * w22 + w11 * w12 * w22;
        assert!(rel(tau(&w, 2, 1).unwrap(), expect) < 1e-14);
    }

    #[test]
    fn full_tuple_is_total_product() {
        let w = random(4, 3, 1);
        let total: f64 = w.as_slice().iter().product();
        assert!(rel(tau(&w, 3, 3).unwrap(), total) < 1e-12);
    }

    #[test]
    fn corner_entry_is_polymer_sum() {
        // t_{hn} = τ₁(h, n) = the single-path sum over the whole array
        let w = random(3, 3, 2);
        let img = grsk_map(&w).unwrap();
        let mut z = 0.0;
        // direct: up/right paths from (0,0) to (2,2)
        fn walk(w: &Grid<f64>, i: usize, j: usize, acc: f64, z: &mut f64) {
            let acc = acc * w.get(i, j);
            if i == w.rows() - 1 && j == w.cols() - 1 {
                *z += acc;
                return;
            }
            if i + 1 < w.rows() {
                walk(w, i + 1, j, acc, z);
            }
            if j + 1 < w.cols() {
                walk(w, i, j + 1, acc, z);
            }
        }
        walk(&w, 0, 0, 1.0, &mut z);
        assert!(rel(img.get(2, 2), z) < 1e-12);
    }

    #[test]
    fn diagonal_products_round_trip() {
        let w = random(3, 3, 3);
        let img = grsk_map(&w).unwrap();
        for k in 1..=3 {
            for r in 1..=k {
                let prod: f64 = (0..r).map(|l| img.get(3 - r + l, k - r + l)).product();
                assert!(rel(prod, tau(&w, k, r).unwrap()) < 1e-12);
            }
        }
    }

    #[test]
    fn single_column_complement() {
        let w = random(4, 1, 4);
        let img = grsk_map(&w).unwrap();
        let prod: f64 = w.as_slice().iter().product();
        assert!(rel(img.get(3, 0), prod) < 1e-12);
        assert!((complement_partition(&w).unwrap() + img.ln_get(3, 0)).abs() < 1e-12);
    }

    #[test]
    fn square_complement_is_antidiagonal() {
        let w = random(3, 3, 5);
        let z: f64 = (0..3).map(|j| 1.0 / w.get(j, 2 - j)).sum();
        let img = grsk_map(&w).unwrap();
        assert!(rel(complement_partition(&w).unwrap(), z.ln()) < 1e-12);
        assert!(rel(1.0 / img.get(0, 0), z) < 1e-12);
    }

    #[test]
    fn five_by_three_complement() {
        let w = random(5, 3, 6);
        let img = grsk_map(&w).unwrap();
        assert!((complement_partition(&w).unwrap() + img.ln_get(2, 0)).abs() < 1e-10);
    }

    #[test]
    fn argument_checks() {
        let w = random(2, 3, 7);
        assert!(ln_tau(&w, 4, 1).is_err());
        assert!(ln_tau(&w, 3, 3).is_err());
        assert!(complement_partition(&w).is_err());
        assert!(grsk_map(&Grid::filled(2, 2, -1.0)).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn transpose_equivariance(h in 1usize..5, n in 1usize..5, seed in any::<u64>()) {
            let w = random(h, n, seed);
            let a = grsk_map(&w.transpose()).unwrap();
            let b = grsk_map(&w).unwrap().transpose();
            for i in 0..n {
                for j in 0..h {
                    prop_assert!(rel(a.get(i, j), b.get(i, j)) < 1e-10);
                }
            }
        }

        #[test]
        fn complement_identity(h in 1usize..7, n in 1usize..4, seed in any::<u64>()) {
            prop_assume!(h >= n);
            let w = random(h, n, seed);
            let img = grsk_map(&w).unwrap();
            let z = complement_partition(&w).unwrap();
            let t = img.ln_get(h - n, 0);
            prop_assert!((z + t).abs() <= 1e-10 * z.abs().max(1.0));
            for v in img.t().as_slice() {
                prop_assert!(*v > 0.0);
            }
        }
    }
}
