//! Empirical distributions, Kolmogorov–Smirnov distances and Monte-Carlo
//! Laplace transforms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polymer::{partition_log, sample_instance_general};
use crate::rng::{stream, GENERATOR_ID};
use crate::scalar::{pairwise_sum, Real};

/// Smallest replica count accepted by [`mc_laplace`].
pub const MIN_REPLICAS: usize = 1000;

/// Sorted Monte-Carlo sample with the seed it was drawn from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSample<T> {
    values: Vec<T>,
    base_seed: u64,
    generator_id: String,
}

impl<T: Real> EmpiricalSample<T> {
    /// Sorts `values`; NaN is rejected.
    pub fn new(
        mut values: Vec<T>,
        base_seed: u64,
        generator_id: impl Into<String>,
    ) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("sample contains NaN".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("NaN filtered"));
        Ok(Self {
            values,
            base_seed,
            generator_id: generator_id.into(),
        })
    }

    /// Sample drawn with the crate's generator.
    pub fn from_draws(values: Vec<T>, base_seed: u64) -> Result<Self> {
        Self::new(values, base_seed, GENERATOR_ID)
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn count(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn base_seed(&self) -> u64 {
        self.base_seed
    }

    pub fn generator_id(&self) -> &str {
        &self.generator_id
    }

    /// Right-continuous ECDF, `#{v ≤ x} / N`.
    pub fn ecdf(&self, x: T) -> T {
        if self.values.is_empty() {
            return T::zero();
        }
        let k = self.values.partition_point(|&v| v <= x);
        T::from_usize_lossy(k) / T::from_usize_lossy(self.values.len())
    }

    /// Applies `f` to every value (re-sorting afterwards).
    pub fn map(&self, f: impl FnMut(T) -> T) -> Result<Self> {
        Self::new(
            self.values.iter().copied().map(f).collect(),
            self.base_seed,
            self.generator_id.clone(),
        )
    }

    /// Mean and standard error of the mean.
    pub fn mean_se(&self) -> Result<(T, T)> {
        mean_se(&self.values)
    }
}

/// Mean and standard error with pairwise summation.
pub fn mean_se<T: Real>(xs: &[T]) -> Result<(T, T)> {
    if xs.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = T::from_usize_lossy(xs.len());
    let mean = pairwise_sum(xs) / n;
    if xs.len() == 1 {
        return Ok((mean, T::zero()));
    }
    let sq: Vec<T> = xs.iter().map(|&x| (x - mean) * (x - mean)).collect();
    let var = pairwise_sum(&sq) / (n - T::one());
    Ok((mean, (var / n).sqrt()))
}

/// `sup_x |F_N(x) - F(x)|`, checking both sides of every jump.
pub fn ks_one_sample<T: Real>(sample: &EmpiricalSample<T>, cdf: impl Fn(T) -> T) -> Result<T> {
    let n = sample.count();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let nf = T::from_usize_lossy(n);
    let mut d = T::zero();
    for (i, &x) in sample.values.iter().enumerate() {
        let f = cdf(x);
        let above = T::from_usize_lossy(i + 1) / nf - f;
        let below = f - T::from_usize_lossy(i) / nf;
        d = d.max(above).max(below);
    }
    Ok(d)
}

/// `sup_x |F_x(t) - F_y(t)|` by a merge scan over both sorted samples.
pub fn ks_two_sample<T: Real>(x: &EmpiricalSample<T>, y: &EmpiricalSample<T>) -> Result<T> {
    let (xs, ys) = (x.values(), y.values());
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::EmptySample);
    }
    let (nx, ny) = (T::from_usize_lossy(xs.len()), T::from_usize_lossy(ys.len()));
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < xs.len() && j < ys.len() {
        let t = xs[i].min(ys[j]);
        while i < xs.len() && xs[i] <= t {
            i += 1;
        }
        while j < ys.len() && ys[j] <= t {
            j += 1;
        }
        d = d.max((T::from_usize_lossy(i) / nx - T::from_usize_lossy(j) / ny).abs());
    }
    Ok(d)
}

/// Asymptotic Kolmogorov quantile `√(-ln(α/2)/2)`.
pub fn kolmogorov_quantile(alpha: f64) -> f64 {
    (-(alpha / 2.0).ln() / 2.0).sqrt()
}

/// One-sample critical value at level `alpha` for `n` draws.
pub fn ks_critical_one_sample(n: usize, alpha: f64) -> f64 {
    kolmogorov_quantile(alpha) / (n as f64).sqrt()
}

/// Two-sample critical value at level `alpha`.
pub fn ks_critical_two_sample(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    kolmogorov_quantile(alpha) * ((n + m) / (n * m)).sqrt()
}

/// Monte-Carlo estimate of `E e^{-sZ}` for the general-parameter polymer,
/// with its standard error. Replica `i` draws from `stream(base_seed, i)`.
pub fn mc_laplace<T: Real>(
    a: &[T],
    b: &[T],
    s: T,
    replicas: usize,
    base_seed: u64,
) -> Result<(T, T)> {
    if replicas < MIN_REPLICAS {
        return Err(Error::Domain(format!(
            "need at least {MIN_REPLICAS} replicas, got {replicas}"
        )));
    }
    if !(s >= T::zero()) || !s.is_finite() {
        return Err(Error::Domain(format!("s must be finite and >= 0, got {s}")));
    }
    crate::polymer::general_shape_matrix(a, b)?;
    if s == T::zero() {
        return Ok((T::one(), T::zero()));
    }
    let ln_s = s.ln();
    let draws = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(base_seed, i);
            let inst = sample_instance_general(a, b, &mut rng)?;
            Ok((-(ln_s + partition_log(&inst)).exp()).exp())
        })
        .collect::<Result<Vec<T>>>()?;
    mean_se(&draws)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;
    use rand_distr::{Distribution, Exp1};

    fn sample(v: Vec<f64>) -> EmpiricalSample<f64> {
        EmpiricalSample::from_draws(v, 0).unwrap()
    }

    #[test]
    fn single_point_against_uniform() {
        let d = ks_one_sample(&sample(vec![0.5]), |x| x.clamp(0.0, 1.0)).unwrap();
        assert_eq!(d, 0.5);
    }

    #[test]
    fn exact_quantiles() {
        let n = 200;
        let v: Vec<f64> = (1..=n).map(|i| (i as f64 - 0.5) / n as f64).collect();
        let d = ks_one_sample(&sample(v), |x| x).unwrap();
        assert!((d - 0.5 / n as f64).abs() < 1e-15);
    }

    #[test]
    fn uniform_draws_pass() {
        let mut rng = stream(11, 0);
        let n = 100_000;
        let v: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let d = ks_one_sample(&sample(v), |x| x).unwrap();
        assert!(d < ks_critical_one_sample(n, 0.001));
        assert!((ks_critical_one_sample(n, 0.001) * (n as f64).sqrt() - 1.95).abs() < 0.01);
    }

    #[test]
    fn two_sample_edge_cases() {
        let x = sample(vec![0.0]);
        let y = sample(vec![1.0]);
        assert_eq!(ks_two_sample(&x, &y).unwrap(), 1.0);
        let z = sample(vec![0.3, 0.1, 0.2]);
        assert_eq!(ks_two_sample(&z, &z).unwrap(), 0.0);
        assert!(ks_two_sample(&sample(vec![]), &z).is_err());
        assert!(ks_one_sample(&sample(vec![]), |x| x).is_err());
    }

    #[test]
    fn independent_exponentials_pass() {
        let n = 100_000;
        let mut r1 = stream(5, 1);
        let mut r2 = stream(5, 2);
        let x: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut r1)).collect();
        let y: Vec<f64> = (0..n).map(|_| Exp1.sample(&mut r2)).collect();
        let d = ks_two_sample(&sample(x), &sample(y)).unwrap();
        let crit = ks_critical_two_sample(n, n, 0.01);
        assert!((crit - 0.00728).abs() < 2e-5);
        assert!(d < crit, "{d}");
    }

    #[test]
    fn laplace_zero_and_closed_form() {
        assert_eq!(
            mc_laplace(&[0.3_f64], &[0.7], 0.0, 1000, 1).unwrap(),
            (1.0, 0.0)
        );
        let (m, se) = mc_laplace(&[0.3_f64], &[0.7], 1.0, 200_000, 9).unwrap();
        assert!((m - 0.5).abs() < 3.0 * se, "{m} ± {se}");
        assert!(mc_laplace(&[0.3_f64], &[0.7], 1.0, 10, 9).is_err());
    }

    #[test]
    fn laplace_is_thread_independent() {
        let run = || mc_laplace(&[0.01_f64, 0.02], &[0.49, 0.48, 0.47], 1.0, 2000, 3).unwrap();
        let a = run();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(3)
            .build()
            .unwrap();
        let b = pool.install(run);
        assert_eq!(a, b);
    }

    proptest! {
        #[test]
        fn ecdf_properties(v in proptest::collection::vec(-10.0f64..10.0, 1..40), x in -12.0f64..12.0) {
            let s = sample(v);
            let f = s.ecdf(x);
            prop_assert!((0.0..=1.0).contains(&f));
            prop_assert!(s.ecdf(x + 0.5) >= f);
            prop_assert_eq!(s.ecdf(12.0), 1.0);
            prop_assert_eq!(s.ecdf(-12.0), 0.0);
            // the jump at the smallest point belongs to the point itself
            let p = s.values()[0];
            prop_assert!(s.ecdf(p) >= 1.0 / s.count() as f64);
            prop_assert_eq!(s.ecdf(p - 1e-9), 0.0);
        }

        #[test]
        fn two_sample_symmetric_and_invariant(
            x in proptest::collection::vec(-5.0f64..5.0, 1..30),
            y in proptest::collection::vec(-5.0f64..5.0, 1..30),
        ) {
            let (sx, sy) = (sample(x), sample(y));
            let d = ks_two_sample(&sx, &sy).unwrap();
            prop_assert_eq!(d, ks_two_sample(&sy, &sx).unwrap());
            let tx = sx.map(|t| t.exp() * 3.0 + t).unwrap();
            let ty = sy.map(|t| t.exp() * 3.0 + t).unwrap();
            prop_assert!((ks_two_sample(&tx, &ty).unwrap() - d).abs() < 1e-12);
        }
    }
}
