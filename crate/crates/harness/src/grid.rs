//! Parsing of numeric grids given on the command line.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Either `lo:hi:step` (inclusive) or a comma-separated list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RGrid(pub Vec<f64>);

impl RGrid {
    pub fn values(&self) -> &[f64] {
        &self.0
    }
}

impl FromStr for RGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| format!("bad number {t:?}: {e}"))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let values = match parts.as_slice() {
            [lo, hi, step] => {
                let (lo, hi, step) = (num(lo)?, num(hi)?, num(step)?);
                if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
                    return Err(format!("bad range {s:?}: need lo <= hi and step > 0"));
                }
                let count = ((hi - lo) / step + 1e-9).floor() as usize;
                if count > 1_000_000 {
                    return Err(format!("range {s:?} has too many points"));
                }
                (0..=count).map(|k| lo + step * k as f64).collect()
            }
            [list] => list.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
            _ => return Err(format!("bad grid {s:?}: use lo:hi:step or a comma list")),
        };
        if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
            return Err(format!("bad grid {s:?}"));
        }
        Ok(RGrid(values))
    }
}

impl std::fmt::Display for RGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}
