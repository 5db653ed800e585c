use gamma_polymer::polymer::{fpp_min, sample_exponential_costs};
use gamma_polymer::rmt::wishart_min_eig;
use gamma_polymer::rng::stream;
use gamma_polymer::stats::{ks_critical_two_sample, ks_two_sample, EmpiricalSample};
use rayon::prelude::*;
use serde_json::json;

use super::{stream_index, Report};
use crate::cli::LueArgs;
use crate::error::{config, Result};
use crate::output::Table;

pub const DEFAULT_REPLICAS: usize = 100_000;
pub const LEVEL: f64 = 0.01;

pub fn validate(args: &LueArgs, replicas: usize) -> Result<()> {
    if args.m == 0 || args.n == 0 || args.m + args.n - 1 > 12 {
        return Err(config(format!(
            "need m, n >= 1 and m + n - 1 <= 12, got m = {}, n = {}",
            args.m, args.n
        )));
    }
    if replicas == 0 {
        return Err(config("replicas must be positive"));
    }
    Ok(())
}

pub fn run(args: &LueArgs, replicas: usize, seed: u64) -> Result<Report> {
    validate(args, replicas)?;
    let (m, n) = (args.m, args.n);
    let fpp = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, stream_index(0, i));
            Ok(fpp_min(&sample_exponential_costs::<f64, _>(
                m, n, &mut rng,
            )?))
        })
        .collect::<gamma_polymer::Result<Vec<f64>>>()?;
    let eig = (0..replicas as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(seed, stream_index(1, i));
            wishart_min_eig::<f64, _>(n, m + n - 1, &mut rng)
        })
        .collect::<gamma_polymer::Result<Vec<f64>>>()?;
    let fpp = EmpiricalSample::from_draws(fpp, seed)?;
    let eig = EmpiricalSample::from_draws(eig, seed)?;
    let d = ks_two_sample(&fpp, &eig)?;
    let crit = ks_critical_two_sample(replicas, replicas, LEVEL);
    let (fm, fs) = fpp.mean_se()?;
    let (em, es) = eig.mean_se()?;
    let mut table = Table::new(
        "",
        &[
            "m",
            "n",
            "replicas",
            "fpp_mean",
            "fpp_se",
            "eig_mean",
            "eig_se",
            "ks",
            "critical_1pct",
            "rejected",
        ],
    );
    table.push(vec![
        m.into(),
        n.into(),
        replicas.into(),
        fm.into(),
        fs.into(),
        em.into(),
        es.into(),
        d.into(),
        crit.into(),
        (d >= crit).into(),
    ]);
    Ok(Report {
        tables: vec![table],
        constants: Vec::new(),
        statistics: json!({ "ks": d, "critical": crit, "level": LEVEL, "rejected": d >= crit }),
        failures: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cell_is_exponential_both_ways() {
        let rep = run(&LueArgs { m: 1, n: 1 }, 20_000, 8).unwrap();
        assert_eq!(rep.statistics["rejected"], false);
    }

    #[test]
    fn size_limit() {
        assert!(validate(&LueArgs { m: 7, n: 7 }, 10).is_err());
    }
}
