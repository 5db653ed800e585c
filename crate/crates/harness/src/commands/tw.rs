use gamma_polymer::asymptotics::critical_constants;
use gamma_polymer::fredholm::{TracyWidomTable, TW_RANGE};
use gamma_polymer::polymer::{partition_log, sample_instance};
use gamma_polymer::rng::stream;
use gamma_polymer::stats::{ks_one_sample, EmpiricalSample};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::lln::rows_for;
use super::{need_positive, stream_index, Report};
use crate::cli::TwArgs;
use crate::error::{config, Result};
use crate::output::Table;
use crate::summary::ConstantsEcho;

pub const DEFAULT_REPLICAS: usize = 10_000;

/// Candidate scales `σ` as functions of `ḡ`; the second one comes from the
/// change of variables in the limit kernel.
pub const CANDIDATES: [(&str, f64); 3] = [
    ("g_half_pow_third", 1.0 / 3.0),
    ("g_half_pow_minus_third", -1.0 / 3.0),
    ("g_half_cubed", 3.0),
];
pub const DERIVED: &str = "g_half_pow_minus_third";

pub fn scale(g_bar: f64, exponent: f64) -> f64 {
    (g_bar / 2.0).powf(exponent)
}

/// `F_GUE` on the whole line, saturating outside the tabulated range.
pub fn f_gue(table: &TracyWidomTable<f64>, x: f64) -> f64 {
    let (lo, hi) = TW_RANGE;
    if x <= lo {
        0.0
    } else if x >= hi {
        1.0
    } else {
        table.eval(x).expect("inside the table")
    }
}

pub fn validate(args: &TwArgs, replicas: usize) -> Result<()> {
    need_positive("alpha", args.alpha)?;
    if args.gamma.is_empty() || args.n.is_empty() || args.n.contains(&0) {
        return Err(config("gamma and n lists must be nonempty, n positive"));
    }
    for &g in &args.gamma {
        need_positive("gamma", g)?;
    }
    if replicas == 0 {
        return Err(config("replicas must be positive"));
    }
    Ok(())
}

/// `(ln Z_{⌈αn⌉,n} - nμ) / n^{1/3}` over `replicas` independent instances.
pub fn fluctuations(
    alpha: f64,
    gamma: f64,
    mu: f64,
    n: usize,
    replicas: usize,
    seed: u64,
    block: u64,
) -> Result<Vec<f64>> {
    let m = rows_for(alpha, n);
    let nf = n as f64;
    let xs = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, stream_index(block, i));
            let inst = sample_instance(m, n, gamma, &mut rng)?;
            Ok((partition_log(&inst) - nf * mu) / nf.cbrt())
        })
        .collect::<gamma_polymer::Result<Vec<f64>>>()?;
    Ok(xs)
}

pub fn run(args: &TwArgs, replicas: usize, seed: u64) -> Result<Report> {
    validate(args, replicas)?;
    let c = 1.0 + args.alpha;
    let mut failures = Vec::new();
    let mut constants = Vec::new();
    let mut ks_table = Table::new(
        "ks",
        &[
            "gamma",
            "n",
            "m",
            "candidate",
            "sigma",
            "ks",
            "mean_x",
            "se_x",
        ],
    );
    let mut ecdf_table = Table::new("ecdf", &["gamma", "n", "candidate", "r", "ecdf", "f_gue"]);
    let mut per_gamma = Vec::new();
    let mut solved = Vec::new();
    for (gi, &gamma) in args.gamma.iter().enumerate() {
        match critical_constants(c, gamma) {
            Ok(k) => solved.push((gi, gamma, k)),
            Err(e) => failures.push(format!("constants at c = {c}, gamma = {gamma}: {e}")),
        }
    }
    let tw = if solved.is_empty() {
        None
    } else {
        Some(TracyWidomTable::standard()?)
    };
    for (gi, gamma, k) in solved {
        let tw = tw.expect("built when some constants solved");
        constants.push(ConstantsEcho::from(&k));
        // ks[candidate][n index]
        let mut ks = vec![Vec::new(); CANDIDATES.len()];
        for (ni, &n) in args.n.iter().enumerate() {
            let block = (gi * args.n.len() + ni) as u64;
            let xs = fluctuations(args.alpha, gamma, k.mu, n, replicas, seed, block)?;
            let sample = EmpiricalSample::from_draws(xs, seed)?;
            let (mean, se) = sample.mean_se()?;
            for (ci, &(label, exponent)) in CANDIDATES.iter().enumerate() {
                let sigma = scale(k.g_bar, exponent);
                let d = ks_one_sample(&sample, |x| f_gue(tw, sigma * x))?;
                ks[ci].push(d);
                ks_table.push(vec![
                    gamma.into(),
                    n.into(),
                    rows_for(args.alpha, n).into(),
                    label.into(),
                    sigma.into(),
                    d.into(),
                    mean.into(),
                    se.into(),
                ]);
                for &r in args.r_grid.values() {
                    ecdf_table.push(vec![
                        gamma.into(),
                        n.into(),
                        label.into(),
                        r.into(),
                        sample.ecdf(r / sigma).into(),
                        f_gue(tw, r).into(),
                    ]);
                }
            }
        }
        let last = args.n.len() - 1;
        let best = (0..CANDIDATES.len())
            .min_by(|&a, &b| ks[a][last].total_cmp(&ks[b][last]))
            .expect("candidates nonempty");
        let trend = &ks[best];
        per_gamma.push(json!({
            "gamma": gamma,
            "winner": CANDIDATES[best].0,
            "winner_ks": trend,
            "winner_ks_decreasing": trend.windows(2).all(|w| w[1] < w[0]),
            "winner_final_ks": trend[last],
            "winners_by_n": (0..=last)
                .map(|j| {
                    let b = (0..CANDIDATES.len()).min_by(|&a, &b| ks[a][j].total_cmp(&ks[b][j])).expect("nonempty");
                    CANDIDATES[b].0
                })
                .collect::<Vec<_>>(),
        }));
    }
    let winners: Vec<String> = per_gamma
        .iter()
        .filter_map(|g| g["winner"].as_str().map(String::from))
        .collect();
    let consistent = !winners.is_empty() && winners.iter().all(|w| *w == winners[0]);
    let statistics = json!({
        "candidates": CANDIDATES.iter().map(|c| c.0).collect::<Vec<_>>(),
        "derived_candidate": DERIVED,
        "per_gamma": Value::Array(per_gamma),
        "winner_consistent_across_gamma": consistent,
        "derived_candidate_wins_everywhere": consistent && winners[0] == DERIVED,
    });
    Ok(Report {
        tables: vec![ks_table, ecdf_table],
        constants,
        statistics,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scales() {
        assert!((scale(16.0, 1.0 / 3.0) - 2.0).abs() < 1e-15);
        assert!((scale(16.0, -1.0 / 3.0) - 0.5).abs() < 1e-15);
        assert_eq!(scale(4.0, 3.0), 8.0);
    }

    #[test]
    fn fluctuations_are_reproducible() {
        let a = fluctuations(1.0, 0.5, -1.0, 5, 20, 7, 0).unwrap();
        let b = fluctuations(1.0, 0.5, -1.0, 5, 20, 7, 0).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, fluctuations(1.0, 0.5, -1.0, 5, 20, 7, 1).unwrap());
    }
}
