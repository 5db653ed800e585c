//! The strict-weak path ensemble: partition function and first-passage
//! dynamic programs, brute-force enumeration oracles and instance sampling.
//!
//! A path through an `m × n` array is a nondecreasing sequence
//! `1 ≤ j₁ ≤ … ≤ j_m ≤ n`; it visits cell `(i, j_i)` of every row `i`. Both
//! endpoints are free. Internally everything is 0-based.

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{LogSumExp, Real};
use crate::specfn::GammaSampler;

/// Largest path count the enumeration oracles accept.
pub const ENUMERATION_BUDGET: f64 = 1e6;

/// Dense row-major matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Copy> Grid<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    /// Builds a grid from nested rows; all rows must share one length.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

/// An `m × n` array of positive weights `g_{ij}` with its distribution data.
///
/// Weights are stored as logarithms: with shapes as small as `1e-3` a gamma
/// variate is routinely below the smallest positive `f64`, while its log is
/// perfectly representable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolymerInstance<T> {
    m: usize,
    n: usize,
    gamma: Option<T>,
    ln_weights: Grid<T>,
    shape_matrix: Option<Grid<T>>,
}

impl<T: Real> PolymerInstance<T> {
    /// Instance from explicit positive weights.
    pub fn from_weights(weights: &Grid<T>) -> Result<Self> {
        if weights
            .as_slice()
            .iter()
            .any(|&w| !(w > T::zero() && w.is_finite()))
        {
            return Err(Error::Domain("weights must be positive and finite".into()));
        }
        Self::from_ln_weights(weights.map(T::ln))
    }

    /// Instance from log-weights; every entry must be finite.
    pub fn from_ln_weights(ln_weights: Grid<T>) -> Result<Self> {
        if ln_weights.rows() == 0 || ln_weights.cols() == 0 {
            return Err(Error::Domain("instance needs m, n >= 1".into()));
        }
        if ln_weights.as_slice().iter().any(|l| !l.is_finite()) {
            return Err(Error::Domain("log-weights must be finite".into()));
        }
        Ok(Self {
            m: ln_weights.rows(),
            n: ln_weights.cols(),
            gamma: None,
            ln_weights,
            shape_matrix: None,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Common shape parameter, when all weights share one.
    pub fn gamma(&self) -> Option<T> {
        self.gamma
    }

    pub fn shape_matrix(&self) -> Option<&Grid<T>> {
        self.shape_matrix.as_ref()
    }

    pub fn ln_weights(&self) -> &Grid<T> {
        &self.ln_weights
    }

    #[inline]
    pub fn ln_weight(&self, i: usize, j: usize) -> T {
        self.ln_weights.get(i, j)
    }

    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> T {
        self.ln_weights.get(i, j).exp()
    }
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || n == 0 {
        return Err(Error::Domain(format!(
            "dimensions must be >= 1, got {m}x{n}"
        )));
    }
    Ok(())
}

/// `m × n` instance with i.i.d. Gamma(`gamma`) weights, filled row by row.
pub fn sample_instance<T: Real, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    gamma: T,
    rng: &mut R,
) -> Result<PolymerInstance<T>> {
    check_dims(m, n)?;
    let sampler = GammaSampler::new(gamma)?;
    let ln_weights = Grid::from_fn(m, n, |_, _| sampler.sample_ln(rng));
    let mut inst = PolymerInstance::from_ln_weights(ln_weights)?;
    inst.gamma = Some(gamma);
    Ok(inst)
}

/// Shapes `a_{n-j+1} + b_{i+j-1}` (1-based) of the general-parameter instance.
pub fn general_shape_matrix<T: Real>(a: &[T], b: &[T]) -> Result<Grid<T>> {
    let n = a.len();
    let h = b.len();
    if n == 0 {
        return Err(Error::Domain("a must be nonempty".into()));
    }
    if h < n {
        return Err(Error::Domain(format!("need h >= n, got h={h}, n={n}")));
    }
    let m = h - n + 1;
    let shapes = Grid::from_fn(m, n, |i, j| a[n - 1 - j] + b[i + j]);
    for (&aj, bi) in a.iter().flat_map(|aj| b.iter().map(move |bi| (aj, bi))) {
        if !(aj + *bi > T::zero()) {
            return Err(Error::Domain(format!(
                "nonpositive shape a+b = {}",
                aj + *bi
            )));
        }
    }
    Ok(shapes)
}

/// Instance with independent `g_{ij} ~ Gamma(a_{n-j+1} + b_{i+j-1})`,
/// `m = h - n + 1`; the law of `1/w_{i+j-1, n-j+1}` when
/// `1/w_{rs} ~ Gamma(a_s + b_r)`.
pub fn sample_instance_general<T: Real, R: Rng + ?Sized>(
    a: &[T],
    b: &[T],
    rng: &mut R,
) -> Result<PolymerInstance<T>> {
    let shapes = general_shape_matrix(a, b)?;
    let samplers: Vec<GammaSampler<T>> = shapes
        .as_slice()
        .iter()
        .map(|&k| GammaSampler::new(k))
        .collect::<Result<_>>()?;
    let ln_weights = Grid::from_fn(shapes.rows(), shapes.cols(), |i, j| {
        samplers[i * shapes.cols() + j].sample_ln(rng)
    });
    let mut inst = PolymerInstance::from_ln_weights(ln_weights)?;
    let first = shapes.get(0, 0);
    if shapes.as_slice().iter().all(|&k| k == first) {
        inst.gamma = Some(first);
    }
    inst.shape_matrix = Some(shapes);
    Ok(inst)
}

/// `m × n` matrix of unit-rate exponential costs.
pub fn sample_exponential_costs<T: Real, R: Rng + ?Sized>(
    m: usize,
    n: usize,
    rng: &mut R,
) -> Result<Grid<T>> {
    check_dims(m, n)?;
    Ok(Grid::from_fn(m, n, |_, _| {
        let x: f64 = Exp1.sample(rng);
        T::lit(x)
    }))
}

/// `ln Z_{m,n}` by the prefix log-sum-exp recursion, `O(mn)`.
pub fn partition_log<T: Real>(inst: &PolymerInstance<T>) -> T {
    let (m, n) = (inst.m, inst.n);
    let mut prev: Vec<T> = inst.ln_weights.row(0).to_vec();
    let mut cur = vec![T::zero(); n];
    for i in 1..m {
        let mut acc = LogSumExp::new();
        for j in 0..n {
            acc.push(prev[j]);
            cur[j] = inst.ln_weight(i, j) + acc.value();
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let mut total = LogSumExp::new();
    for &l in &prev {
        total.push(l);
    }
    total.value()
}

/// `f_{m,n} = min over paths of the summed costs`, by min-plus recursion.
pub fn fpp_min<T: Real>(costs: &Grid<T>) -> T {
    let (m, n) = (costs.rows(), costs.cols());
    let mut prev: Vec<T> = costs.row(0).to_vec();
    let mut cur = vec![T::zero(); n];
    for i in 1..m {
        let mut best = T::infinity();
        for j in 0..n {
            best = best.min(prev[j]);
            cur[j] = costs.get(i, j) + best;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev.into_iter().fold(T::infinity(), T::min)
}

/// Number of paths, `binomial(n + m - 1, m)`, as a float.
pub fn path_count(m: usize, n: usize) -> f64 {
    let mut c = 1.0_f64;
    for k in 1..=m {
        c = c * (n - 1 + k) as f64 / k as f64;
    }
    c
}

fn check_budget(m: usize, n: usize) -> Result<()> {
    let count = path_count(m, n);
    if count > ENUMERATION_BUDGET {
        return Err(Error::Size {
            count,
            budget: ENUMERATION_BUDGET,
        });
    }
    Ok(())
}

/// Calls `f` on every path (0-based column per row) in lexicographic order.
pub fn for_each_path(m: usize, n: usize, mut f: impl FnMut(&[usize])) {
    if m == 0 || n == 0 {
        return;
    }
    let mut path = vec![0usize; m];
    loop {
        f(&path);
        // advance: rightmost position that can still grow
        let Some(k) = (0..m).rev().find(|&k| path[k] + 1 < n) else {
            return;
        };
        let v = path[k] + 1;
        for p in &mut path[k..] {
            *p = v;
        }
    }
}

/// `ln Z_{m,n}` by enumerating every path.
pub fn brute_force_partition<T: Real>(inst: &PolymerInstance<T>) -> Result<T> {
    check_budget(inst.m, inst.n)?;
    let mut acc = LogSumExp::new();
    for_each_path(inst.m, inst.n, |p| {
        let s = p
            .iter()
            .enumerate()
            .fold(T::zero(), |s, (i, &j)| s + inst.ln_weight(i, j));
        acc.push(s);
    });
    Ok(acc.value())
}

/// Minimum path cost by enumerating every path.
pub fn brute_force_fpp<T: Real>(costs: &Grid<T>) -> Result<T> {
    check_budget(costs.rows(), costs.cols())?;
    let mut best = T::infinity();
    for_each_path(costs.rows(), costs.cols(), |p| {
        let s = p
            .iter()
            .enumerate()
            .fold(T::zero(), |s, (i, &j)| s + costs.get(i, j));
        best = best.min(s);
    });
    Ok(best)
}
