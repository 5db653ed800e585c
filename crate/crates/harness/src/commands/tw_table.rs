use gamma_polymer::fredholm::{tracy_widom_cdf_with, MAX_TRUNCATION, TW_RANGE};
use rayon::prelude::*;
use serde_json::json;

use super::{need_positive, Report, MAX_ORDER};
use crate::cli::TwTableArgs;
use crate::error::{config, Result};
use crate::output::Table;

pub fn validate(args: &TwTableArgs) -> Result<()> {
    let (lo, hi) = TW_RANGE;
    if let Some(r) = args
        .r_grid
        .values()
        .iter()
        .find(|r| !(lo..=hi).contains(*r))
    {
        return Err(config(format!(
            "r = {r} outside the tabulated range [{lo}, {hi}]"
        )));
    }
    need_positive("M", args.m)?;
    if args.m > MAX_TRUNCATION {
        return Err(config(format!(
            "M must not exceed {MAX_TRUNCATION}, got {}",
            args.m
        )));
    }
    if !(4..=MAX_ORDER).contains(&args.order) {
        return Err(config(format!(
            "order must lie in 4..={MAX_ORDER}, got {}",
            args.order
        )));
    }
    Ok(())
}

pub fn run(args: &TwTableArgs) -> Result<Report> {
    validate(args)?;
    let values = args
        .r_grid
        .values()
        .par_iter()
        .map(|&r| tracy_widom_cdf_with(r, args.m, args.order))
        .collect::<gamma_polymer::Result<Vec<f64>>>()?;
    let mut table = Table::new("", &["r", "f_gue"]);
    for (&r, &f) in args.r_grid.values().iter().zip(&values) {
        table.push(vec![r.into(), f.into()]);
    }
    let monotone = values.windows(2).all(|w| w[1] >= w[0]);
    let mut failures = Vec::new();
    if !monotone {
        failures.push("tabulated distribution function decreases".into());
    }
    Ok(Report {
        tables: vec![table],
        constants: Vec::new(),
        statistics: json!({
            "points": values.len(),
            "monotone": monotone,
            "first": values.first(),
            "last": values.last(),
        }),
        failures,
    })
}
