use gamma_polymer::asymptotics::critical_constants;
use serde_json::json;

use super::{need_positive, Report};
use crate::cli::ConstantsArgs;
use crate::error::{config, Result};
use crate::output::{Cell, Table};
use crate::summary::ConstantsEcho;

pub const HEADER: [&str; 11] = [
    "c",
    "gamma",
    "z_star",
    "mu",
    "g_bar",
    "z_star_sqrtc_minus_1_over_gamma",
    "gamma_mu_plus_sqrtc_minus_1_sq",
    "gamma3_g_bar",
    "gamma3_g_bar_over_limit",
    "status",
    "error",
];

pub fn validate(args: &ConstantsArgs) -> Result<()> {
    if args.c.is_empty() || args.gamma.is_empty() {
        return Err(config("c and gamma grids must be nonempty"));
    }
    for &c in &args.c {
        if !(c > 1.0) || !c.is_finite() {
            return Err(config(format!("c must be > 1, got {c}")));
        }
    }
    for &g in &args.gamma {
        need_positive("gamma", g)?;
    }
    Ok(())
}

/// Small-γ limit of `γ³ ḡ`: `2(√c - 1)³(1 - c^{-1/2})`.
pub fn g_bar_limit(c: f64) -> f64 {
    let r = c.sqrt() - 1.0;
    2.0 * r * r * r * (1.0 - 1.0 / c.sqrt())
}

pub fn run(args: &ConstantsArgs) -> Result<Report> {
    validate(args)?;
    let mut table = Table::new("", &HEADER);
    let mut constants = Vec::new();
    let mut failures = Vec::new();
    for &c in &args.c {
        for &g in &args.gamma {
            let r = c.sqrt() - 1.0;
            match critical_constants(c, g) {
                Ok(k) => {
                    let g3 = g * g * g * k.g_bar;
                    table.push(vec![
                        c.into(),
                        g.into(),
                        k.z_star.into(),
                        k.mu.into(),
                        k.g_bar.into(),
                        (k.z_star * r / g).into(),
                        (g * k.mu + r * r).into(),
                        g3.into(),
                        (g3 / g_bar_limit(c)).into(),
                        "ok".into(),
                        Cell::Empty,
                    ]);
                    constants.push(ConstantsEcho::from(&k));
                }
                Err(e) => {
                    failures.push(format!("c={c}, gamma={g}: {e}"));
                    let mut row = vec![c.into(), g.into()];
                    row.extend(std::iter::repeat_n(Cell::Empty, 7));
                    row.push("failed".into());
                    row.push(e.to_string().into());
                    table.push(row);
                }
            }
        }
    }
    Ok(Report {
        statistics: json!({ "cells": table.rows.len(), "failed_cells": failures.len() }),
        tables: vec![table],
        constants,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_gamma_columns() {
        let args = ConstantsArgs {
            c: vec![2.0, 4.0],
            gamma: vec![1e-3],
        };
        let rep = run(&args).unwrap();
        assert!(rep.failures.is_empty());
        let t = &rep.tables[0];
        for row in &t.rows {
            assert!((row[5].as_f64().unwrap() - 1.0).abs() < 0.01);
            assert!(row[6].as_f64().unwrap().abs() < 2e-3);
            assert!((row[8].as_f64().unwrap() - 1.0).abs() < 0.02);
        }
        // c = 4: z*/γ → 1/(√4 - 1) = 1
        let z_over_gamma = t.rows[1][2].as_f64().unwrap() / 1e-3;
        assert!((z_over_gamma - 1.0).abs() < 0.01);
    }

    #[test]
    fn rejects_bad_grid() {
        let args = ConstantsArgs {
            c: vec![0.5],
            gamma: vec![0.1],
        };
        assert!(run(&args).is_err());
    }
}
