use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::Alpha;
use crate::report::Tolerance;

/// Settings shared by the verification suites.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub alphas: Vec<Alpha>,
    /// Largest total degree `m + n` in the quadrature suites.
    pub max_degree: u32,
    /// Gauss–Hermite nodes per real axis for polynomial integrands.
    pub nodes_per_axis: usize,
    /// Replaces every per-check tolerance when set.
    pub tolerance: Option<Tolerance>,
    pub seed: u64,
    /// Degree bound for the exact identity sweeps; `None` uses the
    /// per-identity defaults.
    pub identity_max_degree: Option<u32>,
}

pub const DEFAULT_SEED: u64 = 20_160_524;

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            alphas: [0.25, 0.5, 0.75]
                .into_iter()
                .map(|a| Alpha::new(a).expect("valid default alpha"))
                .collect(),
            max_degree: 5,
            nodes_per_axis: 12,
            tolerance: None,
            seed: DEFAULT_SEED,
            identity_max_degree: None,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() {
            return Err(Error::Domain("at least one alpha is required".into()));
        }
        // H̃_{m,n} H̃_{p,q} has degree ≤ 2·max_degree in each real variable.
        let needed = self.max_degree as usize + 1;
        if self.nodes_per_axis < needed {
            return Err(Error::Domain(format!(
                "{} nodes per axis cannot integrate degree {} products exactly; need at least {needed}",
                self.nodes_per_axis,
                2 * self.max_degree
            )));
        }
        if self.nodes_per_axis > crate::quadrature::MAX_NODES {
            return Err(Error::Range(format!(
                "at most {} nodes per axis",
                crate::quadrature::MAX_NODES
            )));
        }
        Ok(())
    }

    /// The configured override, or the check's own tolerance.
    pub fn tol(&self, default: Tolerance) -> Tolerance {
        self.tolerance.unwrap_or(default)
    }
}
