use gamma_polymer::fredholm::{
    det_matrix_formula_default, nystrom_det_finite_lt, sklyanin_lt, sklyanin_truncation,
    ParameterSet,
};
use gamma_polymer::stats::{mc_laplace, MIN_REPLICAS};
use serde_json::json;

use super::{need_positive, stream_index, Report, MAX_ORDER};
use crate::cli::LaplaceArgs;
use crate::error::{config, Result};
use crate::output::{Cell, Table};

pub const DEFAULT_REPLICAS: usize = 1_000_000;
pub const ROUTE_TOL: f64 = 1e-5;
pub const SIGMAS: f64 = 3.0;

pub fn validate(args: &LaplaceArgs, replicas: usize) -> Result<Vec<ParameterSet<f64>>> {
    need_positive("gamma", args.gamma)?;
    need_positive("eps", args.eps)?;
    if args.n == 0 || args.h < args.n {
        return Err(config(format!(
            "need 1 <= n <= h, got n = {}, h = {}",
            args.n, args.h
        )));
    }
    if !(4..=MAX_ORDER).contains(&args.order) {
        return Err(config(format!(
            "order must lie in 4..={MAX_ORDER}, got {}",
            args.order
        )));
    }
    if replicas < MIN_REPLICAS {
        return Err(config(format!("need at least {MIN_REPLICAS} replicas")));
    }
    if args.s.is_empty() {
        return Err(config("empty s grid"));
    }
    args.s
        .iter()
        .map(|&s| {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(config(format!("s must be finite and >= 0, got {s}")));
            }
            ParameterSet::polymer(args.n, args.h, args.gamma, args.eps, s.ln())
                .map_err(|e| config(format!("inadmissible parameters at s = {s}: {e}")))
        })
        .collect()
}

pub fn run(args: &LaplaceArgs, replicas: usize, seed: u64) -> Result<Report> {
    let params = validate(args, replicas)?;
    let mut table = Table::new(
        "",
        &[
            "s",
            "mc_mean",
            "mc_se",
            "nystrom",
            "matrix_formula",
            "sklyanin",
            "closed_form",
            "max_route_gap",
            "flagged",
        ],
    );
    let mut failures = Vec::new();
    let mut worst_gap: f64 = 0.0;
    let mut worst_z: f64 = 0.0;
    for (k, (p, &s)) in params.iter().zip(&args.s).enumerate() {
        let (mean, se) = mc_laplace(
            p.a(),
            p.b(),
            s,
            replicas,
            seed ^ stream_index(k as u64 + 1, 0),
        )?;
        let mut routes = vec![
            nystrom_det_finite_lt(p, args.order)?,
            det_matrix_formula_default(p, args.order)?,
        ];
        let skl = if args.n <= 2 {
            let v = sklyanin_lt(p, sklyanin_truncation(p), args.order)?;
            routes.push(v);
            Some(v)
        } else {
            None
        };
        let closed = (args.n == 1 && args.h == 1).then(|| (1.0 + s).powf(-args.gamma));
        if let Some(c) = closed {
            routes.push(c);
        }
        let hi = routes.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = routes.iter().cloned().fold(f64::INFINITY, f64::min);
        let gap = hi - lo;
        worst_gap = worst_gap.max(gap);
        let mut flagged = false;
        if gap >= ROUTE_TOL {
            flagged = true;
            failures.push(format!("s = {s}: determinant routes differ by {gap:e}"));
        }
        for &v in &routes {
            let dev = (v - mean).abs();
            if se > 0.0 {
                worst_z = worst_z.max(dev / se);
            }
            if dev > SIGMAS * se && dev > 1e-12 {
                flagged = true;
                failures.push(format!(
                    "s = {s}: determinant {v} outside {mean} ± {SIGMAS}·{se}"
                ));
            }
        }
        table.push(vec![
            s.into(),
            mean.into(),
            se.into(),
            routes[0].into(),
            routes[1].into(),
            skl.map_or(Cell::Empty, Cell::from),
            closed.map_or(Cell::Empty, Cell::from),
            gap.into(),
            flagged.into(),
        ]);
    }
    Ok(Report {
        tables: vec![table],
        constants: Vec::new(),
        statistics: json!({
            "replicas": replicas,
            "max_route_gap": worst_gap,
            "max_standardised_deviation": worst_z,
        }),
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(n: usize, h: usize, s: Vec<f64>) -> LaplaceArgs {
        LaplaceArgs {
            n,
            h,
            gamma: 0.5,
            eps: 0.01,
            s,
            order: 32,
        }
    }

    #[test]
    fn single_site_matches_closed_form() {
        let rep = run(&args(1, 1, vec![0.0, 1.0]), 20_000, 4).unwrap();
        assert!(rep.failures.is_empty(), "{:?}", rep.failures);
        let t = &rep.tables[0];
        let nys: Vec<f64> = t
            .column("nystrom")
            .unwrap()
            .iter()
            .map(|c| c.as_f64().unwrap())
            .collect();
        assert!((nys[0] - 1.0).abs() < 1e-8);
        assert!((nys[1] - 2f64.powf(-0.5)).abs() < 1e-8);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(validate(&args(3, 2, vec![1.0]), 10_000).is_err());
        assert!(validate(&args(1, 1, vec![-1.0]), 10_000).is_err());
        assert!(validate(&args(1, 1, vec![1.0]), 10).is_err());
    }
}
