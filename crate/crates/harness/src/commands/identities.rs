use gamma_polymer::grsk::{complement_partition, grsk_map};
use gamma_polymer::polymer::{
    brute_force_fpp, brute_force_partition, fpp_min, partition_log, sample_exponential_costs,
    sample_instance, Grid, PolymerInstance,
};
use gamma_polymer::rng::stream;
use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::{stream_index, Report};
use crate::cli::IdentitiesArgs;
use crate::error::{config, Result};
use crate::output::Table;

pub const GRSK_TOL: f64 = 1e-10;
pub const DP_TOL: f64 = 1e-12;

pub fn validate(args: &IdentitiesArgs) -> Result<()> {
    if args.matrices == 0 || args.instances == 0 {
        return Err(config("matrices and instances must be positive"));
    }
    if !(1..=3).contains(&args.max_n) || !(args.max_n..=6).contains(&args.max_h) {
        return Err(config(format!(
            "need 1 <= max-n <= 3 and max-n <= max-h <= 6, got {} and {}",
            args.max_n, args.max_h
        )));
    }
    if !(1..=8).contains(&args.max_side) {
        return Err(config(format!(
            "max-side must be in 1..=8, got {}",
            args.max_side
        )));
    }
    Ok(())
}

/// `ln binomial(n, k)` as a sum of logarithms.
fn ln_binomial(n: usize, k: usize) -> f64 {
    (1..=k)
        .map(|i| ((n - k + i) as f64).ln() - (i as f64).ln())
        .sum()
}

struct GrskCheck {
    h: usize,
    n: usize,
    complement: f64,
    transpose: f64,
    mass: f64,
    positive: bool,
    matrix: Vec<Vec<f64>>,
}

fn grsk_check(
    seed: u64,
    index: u64,
    max_h: usize,
    max_n: usize,
) -> gamma_polymer::Result<GrskCheck> {
    let mut rng = stream(seed, stream_index(0, index));
    let n = rng.random_range(1..=max_n);
    let h = rng.random_range(n..=max_h);
    let w: Grid<f64> = Grid::from_fn(h, n, |_, _| rng.random_range(0.2..3.0));
    let img = grsk_map(&w)?;
    let m = h - n + 1;
    let complement = (complement_partition(&w)? + img.ln_get(m - 1, 0)).abs();
    let img_t = grsk_map(&w.transpose())?;
    let mut transpose: f64 = 0.0;
    for i in 0..h {
        for j in 0..n {
            transpose = transpose.max((img_t.ln_get(j, i) - img.ln_get(i, j)).abs());
        }
    }
    let diag: f64 = (1..=n).map(|r| img.ln_get(h - r, n - r)).sum();
    let total: f64 = w.as_slice().iter().map(|x| x.ln()).sum();
    let mass = (diag - total).abs() / total.abs().max(1.0);
    let positive = img.t().as_slice().iter().all(|&t| t > 0.0);
    Ok(GrskCheck {
        h,
        n,
        complement,
        transpose,
        mass,
        positive,
        matrix: w.to_rows(),
    })
}

fn dp_check(
    seed: u64,
    index: u64,
    max_side: usize,
) -> gamma_polymer::Result<(usize, usize, f64, f64)> {
    let mut rng = stream(seed, stream_index(1, index));
    let m = rng.random_range(1..=max_side);
    let n = rng.random_range(1..=max_side);
    let gamma: f64 = rng.random_range(0.3..2.0);
    let inst = sample_instance(m, n, gamma, &mut rng)?;
    let (a, b) = (partition_log(&inst), brute_force_partition(&inst)?);
    let costs: Grid<f64> = sample_exponential_costs(m, n, &mut rng)?;
    let (c, d) = (fpp_min(&costs), brute_force_fpp(&costs)?);
    Ok((
        m,
        n,
        (a - b).abs() / b.abs().max(1.0),
        (c - d).abs() / d.abs().max(1.0),
    ))
}

pub fn run(args: &IdentitiesArgs, seed: u64) -> Result<Report> {
    validate(args)?;
    let mut failures = Vec::new();
    let mut offending = Vec::new();

    let mut paths = Table::new(
        "paths",
        &["m", "n", "partition_log", "ln_binomial", "abs_error"],
    );
    let mut path_err: f64 = 0.0;
    for m in 1..=8 {
        for n in 1..=8 {
            let unit = PolymerInstance::from_weights(&Grid::filled(m, n, 1.0))?;
            let (z, exact) = (partition_log(&unit), ln_binomial(n + m - 1, m));
            path_err = path_err.max((z - exact).abs());
            paths.push(vec![
                m.into(),
                n.into(),
                z.into(),
                exact.into(),
                (z - exact).abs().into(),
            ]);
        }
    }
    if path_err >= DP_TOL {
        failures.push(format!("path-count identity error {path_err:e}"));
    }

    let grsk = (0..args.matrices as u64)
        .into_par_iter()
        .map(|i| grsk_check(seed, i, args.max_h, args.max_n))
        .collect::<gamma_polymer::Result<Vec<_>>>()?;
    let mut table = Table::new(
        "grsk",
        &[
            "index",
            "h",
            "n",
            "complement_error",
            "transpose_error",
            "mass_error",
            "positive",
        ],
    );
    let (mut ce, mut te, mut me) = (0.0_f64, 0.0_f64, 0.0_f64);
    for (i, g) in grsk.iter().enumerate() {
        ce = ce.max(g.complement);
        te = te.max(g.transpose);
        me = me.max(g.mass);
        if g.complement >= GRSK_TOL || g.transpose >= GRSK_TOL || g.mass >= GRSK_TOL || !g.positive
        {
            failures.push(format!(
                "gRSK identity violated for matrix {i}: {:?}",
                g.matrix
            ));
            offending.push(json!(g.matrix));
        }
        table.push(vec![
            i.into(),
            g.h.into(),
            g.n.into(),
            g.complement.into(),
            g.transpose.into(),
            g.mass.into(),
            g.positive.into(),
        ]);
    }

    let dp = (0..args.instances as u64)
        .into_par_iter()
        .map(|i| dp_check(seed, i, args.max_side))
        .collect::<gamma_polymer::Result<Vec<_>>>()?;
    let mut dp_table = Table::new(
        "dp",
        &["index", "m", "n", "partition_rel_error", "fpp_rel_error"],
    );
    let (mut pe, mut fe) = (0.0_f64, 0.0_f64);
    for (i, &(m, n, a, b)) in dp.iter().enumerate() {
        pe = pe.max(a);
        fe = fe.max(b);
        if a >= DP_TOL || b >= DP_TOL {
            failures.push(format!(
                "recursion and enumeration disagree on instance {i} ({m}x{n})"
            ));
        }
        dp_table.push(vec![i.into(), m.into(), n.into(), a.into(), b.into()]);
    }

    Ok(Report {
        tables: vec![table, dp_table, paths],
        constants: Vec::new(),
        statistics: json!({
            "max_path_count_error": path_err,
            "max_complement_error": ce,
            "max_transpose_error": te,
            "max_mass_error": me,
            "max_partition_rel_error": pe,
            "max_fpp_rel_error": fe,
            "offending_matrices": offending,
        }),
        failures,
    })
}
