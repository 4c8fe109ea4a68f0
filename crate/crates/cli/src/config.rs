use std::collections::BTreeMap;
use std::path::Path;

use fourier_gls::{make_group, ChainMode, Exponent};
use serde::{Deserialize, Serialize};

use crate::psi_spec::PsiSpec;
use crate::CliError;

/// Tolerance names and defaults. Relative except for `inversion`, `fft`
/// (scaled by the largest modulus) and `tail` (absolute probability slack).
pub const DEFAULT_TOLERANCES: [(&str, f64); 8] = [
    ("inversion", 1e-10),
    ("fft", 1e-9),
    ("hy", 1e-9),
    ("hy-conjugate", 1e-9),
    ("hy-dual", 1e-9),
    ("theorem21", 1e-8),
    ("theorem22", 1e-8),
    ("tail", 1e-12),
];

/// Which suites run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Suites {
    pub inversion: bool,
    pub hy: bool,
    pub hy_conjugate: bool,
    pub hy_dual: bool,
    pub theorem21: bool,
    pub theorem22: bool,
    pub tail: bool,
}

impl Default for Suites {
    fn default() -> Self {
        Suites {
            inversion: true,
            hy: true,
            hy_conjugate: false,
            hy_dual: true,
            theorem21: true,
            theorem22: false,
            tail: true,
        }
    }
}

impl Suites {
    pub fn all() -> Self {
        Suites {
            inversion: true,
            hy: true,
            hy_conjugate: true,
            hy_dual: true,
            theorem21: true,
            theorem22: true,
            tail: true,
        }
    }
}

fn default_pool() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    /// Invariant factor lists.
    pub groups: Vec<Vec<usize>>,
    /// Total masses `A` of `X`.
    #[serde(alias = "A_values")]
    pub a_values: Vec<f64>,
    /// `(p, q)` pairs; each suite keeps the pairs in its own domain.
    pub exponent_grid: Vec<(Exponent, Exponent)>,
    pub psi_specs: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default)]
    pub mode: ChainMode,
    /// Size of the random family behind `natural` weights.
    #[serde(default = "default_pool")]
    pub pool: usize,
    #[serde(default)]
    pub suites: Suites,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let grid = [
            (2.0, 2.0),
            (1.5, 3.0),
            (2.0, 4.0),
            (3.0, 6.0),
            (4.0, 4.0),
            (1.25, 5.0),
            (1.0, f64::INFINITY),
            (1.0, 2.0),
            (1.5, 1.5),
            (1.2, 4.0),
        ];
        SuiteConfig {
            groups: vec![vec![8], vec![8, 3], vec![16, 9]],
            a_values: vec![0.5, 1.0, 4.0],
            exponent_grid: grid
                .iter()
                .map(|&(p, q)| (Exponent::new(p).unwrap(), Exponent::new(q).unwrap()))
                .collect(),
            psi_specs: ["const:1", "power:1", "power:0.5", "natural"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            trials: 10,
            seed: 20240101,
            tolerances: BTreeMap::new(),
            mode: ChainMode::AsDerived,
            pool: default_pool(),
            suites: Suites::default(),
        }
    }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        let cfg: SuiteConfig = toml::from_str(text).map_err(|e| CliError::config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.groups.is_empty() {
            return Err(CliError::config("no groups"));
        }
        for g in &self.groups {
            make_group(g).map_err(|e| CliError::config(format!("group {g:?}: {e}")))?;
        }
        if self.a_values.is_empty() {
            return Err(CliError::config("no masses in a_values"));
        }
        if let Some(a) = self.a_values.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(CliError::config(format!(
                "mass {a} is not positive and finite"
            )));
        }
        if self.exponent_grid.is_empty() {
            return Err(CliError::config("empty exponent grid"));
        }
        if self.trials == 0 {
            return Err(CliError::config("trials must be at least 1"));
        }
        if self.pool == 0 {
            return Err(CliError::config("pool must be at least 1"));
        }
        for s in &self.psi_specs {
            s.parse::<PsiSpec>()?;
        }
        for (name, &tol) in &self.tolerances {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == name) {
                return Err(CliError::config(format!("unknown tolerance {name:?}")));
            }
            if !(tol.is_finite() && tol >= 0.0) {
                return Err(CliError::config(format!(
                    "tolerance {name} = {tol} is not >= 0"
                )));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, t)| *t)
                .expect("known tolerance name")
        })
    }

    /// Sets every tolerance to `tol`.
    pub fn override_tolerances(&mut self, tol: f64) {
        self.tolerances = DEFAULT_TOLERANCES
            .iter()
            .map(|(n, _)| (n.to_string(), tol))
            .collect();
    }

    pub fn specs(&self) -> Vec<PsiSpec> {
        self.psi_specs
            .iter()
            .map(|s| s.parse().expect("validated"))
            .collect()
    }
}
