//! Subcommand implementations. Each validates its configuration, runs, and
//! returns tables plus summary statistics without touching the filesystem.

pub mod constants;
pub mod identities;
pub mod laplace;
pub mod lln;
pub mod lue;
pub mod tw;
pub mod tw_table;

use serde_json::Value;

use crate::output::Table;
use crate::summary::ConstantsEcho;

/// Largest quadrature order accepted on the command line.
pub const MAX_ORDER: usize = 512;

/// Result of one subcommand.
#[derive(Clone, Debug)]
pub struct Report {
    pub tables: Vec<Table>,
    pub constants: Vec<ConstantsEcho>,
    pub statistics: Value,
    pub failures: Vec<String>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

/// Stream index for replica `i` of block `block`, keeping blocks disjoint.
pub(crate) fn stream_index(block: u64, i: u64) -> u64 {
    (block << 32) | i
}

pub(crate) fn need_positive(name: &str, x: f64) -> crate::Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(crate::error::config(format!(
            "{name} must be positive, got {x}"
        )))
    }
}
