use std::collections::BTreeMap;
use std::path::Path;

use fourier_gls::CheckRecord;
use serde::Serialize;

use crate::config::SuiteConfig;
use crate::CliError;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub pass: usize,
    pub fail: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema: u32,
    pub version: String,
    pub config: SuiteConfig,
    pub summary: BTreeMap<String, Tally>,
    /// Setups that could not run (e.g. a factorization that does not exist).
    pub errors: Vec<String>,
    pub passed: bool,
    pub records: Vec<CheckRecord>,
    pub wall_time_s: f64,
}

impl Report {
    pub fn new(
        config: SuiteConfig,
        records: Vec<CheckRecord>,
        errors: Vec<String>,
        wall_time_s: f64,
    ) -> Self {
        let mut summary: BTreeMap<String, Tally> = BTreeMap::new();
        for r in &records {
            let t = summary.entry(r.name.clone()).or_default();
            if r.pass {
                t.pass += 1;
            } else {
                t.fail += 1;
            }
        }
        let passed = errors.is_empty() && records.iter().all(|r| r.pass);
        Report {
            schema: SCHEMA,
            version: env!("CARGO_PKG_VERSION").to_owned(),
            config,
            summary,
            errors,
            passed,
            records,
            wall_time_s,
        }
    }

    pub fn failures(&self) -> usize {
        self.summary.values().map(|t| t.fail).sum()
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n").map_err(|e| CliError::io(path, e))
    }

    /// One line per check name, then any setup errors.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        for (name, t) in &self.summary {
            out.push_str(&format!(
                "{name:<16} pass {:>7}  fail {:>7}\n",
                t.pass, t.fail
            ));
        }
        for e in &self.errors {
            out.push_str(&format!("error: {e}\n"));
        }
        out.push_str(&format!(
            "{} in {:.2} s\n",
            if self.passed { "PASS" } else { "FAIL" },
            self.wall_time_s
        ));
        out
    }
}
