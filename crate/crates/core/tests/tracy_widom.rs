//! Properties of the limit-kernel determinant and the GUE Tracy–Widom
//! distribution function.

use gamma_polymer::fredholm::{
    limit_det, tracy_widom_cdf, tracy_widom_cdf_with, DEFAULT_TRUNCATION, TW_ORDER,
};
use proptest::prelude::*;
use rayon::prelude::*;

#[test]
fn monotone_on_fine_grid() {
    let xs: Vec<f64> = (0..1000).map(|k| -15.0 + 25.0 * k as f64 / 999.0).collect();
    let f: Vec<f64> = xs
        .par_iter()
        .map(|&x| tracy_widom_cdf(x).unwrap())
        .collect();
    for (k, w) in f.windows(2).enumerate() {
        assert!(
            w[1] >= w[0],
            "F decreases between {} and {}",
            xs[k],
            xs[k + 1]
        );
    }
    assert!(f[0] < 1e-8 && (f[999] - 1.0).abs() < 1e-8);
}

#[test]
fn truncation_eight_matches_twelve() {
    let worst = (0..=26)
        .map(|k| -8.0 + 0.5 * k as f64)
        .map(|x| {
            (tracy_widom_cdf_with(x, 8.0, TW_ORDER).unwrap() - tracy_widom_cdf(x).unwrap()).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst:e}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn scale_covariance(g_idx in 0usize..3, r in -4.0..3.0f64) {
        let g = [0.5, 2.0, 8.0][g_idx];
        let lhs = limit_det(g, r, DEFAULT_TRUNCATION, TW_ORDER).unwrap();
        let rhs = tracy_widom_cdf((2.0_f64 / g).cbrt() * r).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-8, "ḡ = {}, r = {}: {} vs {}", g, r, lhs, rhs);
    }
}
