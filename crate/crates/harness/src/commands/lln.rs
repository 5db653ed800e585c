use gamma_polymer::polymer::{fpp_min, sample_exponential_costs};
use gamma_polymer::rng::stream;
use gamma_polymer::stats::mean_se;
use rayon::prelude::*;
use serde_json::json;

use super::{need_positive, stream_index, Report};
use crate::cli::LlnArgs;
use crate::error::{config, Result};
use crate::output::Table;

pub const DEFAULT_REPLICAS: usize = 100;

/// `(√(1+α) - 1)²`.
pub fn lln_limit(alpha: f64) -> f64 {
    let r = (1.0 + alpha).sqrt() - 1.0;
    r * r
}

pub fn rows_for(alpha: f64, n: usize) -> usize {
    (alpha * n as f64).ceil() as usize
}

pub fn validate(args: &LlnArgs, replicas: usize) -> Result<()> {
    need_positive("alpha", args.alpha)?;
    if args.n.is_empty() || args.n.contains(&0) {
        return Err(config("n list must be nonempty and positive"));
    }
    if replicas < 2 {
        return Err(config("need at least two replicas"));
    }
    Ok(())
}

pub fn run(args: &LlnArgs, replicas: usize, seed: u64) -> Result<Report> {
    validate(args, replicas)?;
    let target = lln_limit(args.alpha);
    let mut table = Table::new("", &["n", "m", "mean", "se", "limit", "relative_deviation"]);
    let mut deviations = Vec::new();
    for (k, &n) in args.n.iter().enumerate() {
        let m = rows_for(args.alpha, n);
        let draws = (0..replicas as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = stream(seed, stream_index(k as u64, i));
                let costs = sample_exponential_costs::<f64, _>(m, n, &mut rng)?;
                Ok(fpp_min(&costs) / n as f64)
            })
            .collect::<gamma_polymer::Result<Vec<f64>>>()?;
        let (mean, se) = mean_se(&draws)?;
        let dev = (mean - target).abs() / target;
        deviations.push(dev);
        table.push(vec![
            n.into(),
            m.into(),
            mean.into(),
            se.into(),
            target.into(),
            dev.into(),
        ]);
    }
    let monotone = deviations.windows(2).all(|w| w[1] <= w[0]);
    Ok(Report {
        tables: vec![table],
        constants: Vec::new(),
        statistics: json!({
            "limit": target,
            "relative_deviations": deviations,
            "deviation_monotone": monotone,
        }),
        failures: Vec::new(),
    })
}
