//! Agreement between the determinant routes and their convergence in the
//! quadrature order.

use gamma_polymer::fredholm::{
    det_matrix_formula_default, nystrom_det_finite_lt, sklyanin_lt, sklyanin_truncation,
    ParameterSet,
};
use proptest::prelude::*;

/// Admissible parameters: `0 <= a_j < 0.15` distinct, `b_i` in `[0.2, 0.9]`.
fn params() -> impl Strategy<Value = ParameterSet<f64>> {
    (1usize..=3, 0usize..=2)
        .prop_flat_map(|(n, extra)| {
            (
                proptest::collection::vec(0.0..0.15f64, n),
                proptest::collection::vec(0.2..0.9f64, n + extra),
                -1.5..1.5f64,
            )
        })
        .prop_filter("distinct a", |(a, _, _)| {
            a.iter()
                .enumerate()
                .all(|(i, x)| a[..i].iter().all(|y| (x - y).abs() > 0.01))
        })
        .prop_map(|(a, b, ln_s)| ParameterSet::new(a, b, ln_s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn routes_agree(p in params()) {
        let nys = nystrom_det_finite_lt(&p, 48).unwrap();
        let mat = det_matrix_formula_default(&p, 48).unwrap();
        prop_assert!((nys - mat).abs() < 1e-8, "{} vs {}", nys, mat);
        prop_assert!(nys > 0.0 && nys < 1.0);
        if p.n() <= 2 {
            let skl = sklyanin_lt(&p, sklyanin_truncation(&p), 48).unwrap();
            prop_assert!((nys - skl).abs() < 1e-8, "{} vs {}", nys, skl);
        }
    }

    #[test]
    fn order_doubling_converges(p in params()) {
        let d: Vec<f64> = [16, 32, 64].iter().map(|&k| nystrom_det_finite_lt(&p, k).unwrap()).collect();
        let (coarse, fine) = ((d[0] - d[2]).abs(), (d[1] - d[2]).abs());
        prop_assert!(fine <= coarse + 1e-13, "{:?}", d);
        prop_assert!(fine < 1e-9, "{:?}", d);
    }

    #[test]
    fn decreasing_in_s(p in params(), ds in 0.1..2.0f64) {
        let q = ParameterSet::new(p.a().to_vec(), p.b().to_vec(), p.ln_s() + ds).unwrap();
        prop_assert!(nystrom_det_finite_lt(&q, 32).unwrap() < nystrom_det_finite_lt(&p, 32).unwrap());
    }
}

#[test]
fn single_site_is_gamma_transform() {
    // E e^{-s g}, g ~ Gamma(a + b): (1 + s)^{-(a+b)}
    for &(a, b, s) in &[(0.1_f64, 0.4, 0.5_f64), (0.0, 1.3, 3.0)] {
        let p = ParameterSet::new(vec![a], vec![b], s.ln()).unwrap();
        let want = (1.0 + s).powf(-(a + b));
        assert!((nystrom_det_finite_lt(&p, 48).unwrap() - want).abs() < 1e-10);
    }
}
