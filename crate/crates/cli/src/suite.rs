//! Suite runner. Every random draw comes from a ChaCha stream keyed by the
//! seed and the (suite, group, mass, weight, trial) indices, so results do not
//! depend on evaluation order.

use std::time::Instant;

use fourier_gls::hy::{verify_hy_conjugate_with, verify_hy_dual_with, verify_hy_with};
use fourier_gls::theorems::Chain;
use fourier_gls::{
    factorize_trivial, fourier_fast, fourier_forward, in_domain_q, in_domain_q_hat, make_group,
    make_measure_pair, tail_check, Case, ChainOptions, CheckRecord, Exponent, FiniteAbelianGroup,
    GroupFunction, MeasuredDualPair, Side,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::SuiteConfig;
use crate::psi_spec::PsiSpec;
use crate::report::Report;
use crate::CliError;

/// Largest order at which the naive transform is run against the FFT path.
pub const NAIVE_LIMIT: usize = 1024;

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
enum Stream {
    Inversion = 1,
    Hy = 2,
    Conjugate = 3,
    Theorem21 = 4,
    Theorem22 = 5,
    Tail = 6,
    Pool = 7,
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent generator for one `(seed, keys)` combination.
pub fn trial_rng(seed: u64, keys: &[u64]) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(keys.iter().fold(0, |h, &k| splitmix(h ^ k)));
    rng
}

struct Run<'a> {
    cfg: &'a SuiteConfig,
    groups: Vec<FiniteAbelianGroup>,
    specs: Vec<PsiSpec>,
    records: Vec<CheckRecord>,
    errors: Vec<String>,
}

impl Run<'_> {
    fn rng(&self, stream: Stream, keys: &[usize]) -> ChaCha8Rng {
        let mut all = vec![stream as u64];
        all.extend(keys.iter().map(|&k| k as u64));
        trial_rng(self.cfg.seed, &all)
    }

    fn random(&self, pair: &MeasuredDualPair, stream: Stream, keys: &[usize]) -> GroupFunction {
        GroupFunction::random(pair, Side::X, &mut self.rng(stream, keys))
    }

    fn pairs_where(&self, pred: fn(Exponent, Exponent) -> bool) -> Vec<(Exponent, Exponent)> {
        self.cfg
            .exponent_grid
            .iter()
            .copied()
            .filter(|&(p, q)| pred(p, q))
            .collect()
    }

    /// `(index, pair)` for the configured masses.
    fn compact_pairs(
        &self,
        g: &FiniteAbelianGroup,
    ) -> Result<Vec<(usize, MeasuredDualPair)>, CliError> {
        self.cfg
            .a_values
            .iter()
            .enumerate()
            .map(|(i, &a)| Ok((i, make_measure_pair(g, a)?)))
            .collect()
    }

    /// Counting measure first (`B = 1`), then the configured masses.
    fn discrete_pairs(
        &self,
        g: &FiniteAbelianGroup,
    ) -> Result<Vec<(usize, MeasuredDualPair)>, CliError> {
        let mut out = vec![(0, MeasuredDualPair::counting(g))];
        for (i, pair) in self.compact_pairs(g)? {
            out.push((i + 1, pair));
        }
        Ok(out)
    }

    fn push(&mut self, r: fourier_gls::Result<CheckRecord>, context: &str) {
        match r {
            Ok(r) => self.records.push(r),
            Err(e) => self.errors.push(format!("{context}: {e}")),
        }
    }

    fn inversion(&mut self) -> Result<(), CliError> {
        let tol = self.cfg.tolerance("inversion");
        let fft_tol = self.cfg.tolerance("fft");
        for gi in 0..self.groups.len() {
            let g = self.groups[gi].clone();
            for (ai, pair) in self.compact_pairs(&g)? {
                for t in 0..self.cfg.trials {
                    let f = self.random(&pair, Stream::Inversion, &[gi, ai, t]);
                    let fhat = fourier_fast(&f)?;
                    let back = fourier_fast(&fhat)?;
                    let scale = f.max_modulus();
                    let r =
                        CheckRecord::absolute("inversion", back.max_abs_diff(&f), 0.0, tol * scale)
                            .with("N", g.order() as f64)
                            .with("A", pair.mass_x())
                            .with("trial", t as f64);
                    self.records.push(r);
                    if g.order() <= NAIVE_LIMIT {
                        let naive = fourier_forward(&f)?;
                        let r = CheckRecord::absolute(
                            "fft",
                            fhat.max_abs_diff(&naive),
                            0.0,
                            fft_tol * naive.max_modulus(),
                        )
                        .with("N", g.order() as f64)
                        .with("A", pair.mass_x())
                        .with("trial", t as f64);
                        self.records.push(r);
                    }
                }
            }
        }
        Ok(())
    }

    fn hy(&mut self) -> Result<(), CliError> {
        let tol = self.cfg.tolerance("hy");
        let grid = self.pairs_where(in_domain_q);
        for gi in 0..self.groups.len() {
            let g = self.groups[gi].clone();
            for (ai, pair) in self.compact_pairs(&g)? {
                for t in 0..self.cfg.trials {
                    let f = self.random(&pair, Stream::Hy, &[gi, ai, t]);
                    let fhat = fourier_fast(&f)?;
                    for &(p, q) in &grid {
                        let r = verify_hy_with(&f, &fhat, p, q, tol);
                        self.push(r, "hy");
                    }
                }
            }
        }
        Ok(())
    }

    /// Conjugate-domain checks in the discrete normalization.
    fn conjugate(&mut self, conjugate: bool, dual: bool) -> Result<(), CliError> {
        let tol_c = self.cfg.tolerance("hy-conjugate");
        let tol_d = self.cfg.tolerance("hy-dual");
        let grid = self.pairs_where(in_domain_q_hat);
        for gi in 0..self.groups.len() {
            let pair = MeasuredDualPair::counting(&self.groups[gi]);
            for t in 0..self.cfg.trials {
                let f = self.random(&pair, Stream::Conjugate, &[gi, t]);
                let fhat = fourier_fast(&f)?;
                for &(p, q) in &grid {
                    if conjugate {
                        let r = verify_hy_conjugate_with(&f, &fhat, p, q, tol_c);
                        self.push(r, "hy-conjugate");
                    }
                    if dual {
                        let r = verify_hy_dual_with(&f, &fhat, p, q, tol_d);
                        self.push(r, "hy-dual");
                    }
                }
            }
        }
        Ok(())
    }

    fn chain_runs(&mut self, case: Case) -> Result<(), CliError> {
        let (name, stream, default_lo) = match case {
            Case::Compact => ("theorem21", Stream::Theorem21, 1.0),
            Case::Discrete => ("theorem22", Stream::Theorem22, 2.0),
        };
        let opts = ChainOptions {
            tolerance: self.cfg.tolerance(name),
            ..ChainOptions::default()
        };
        for gi in 0..self.groups.len() {
            let g = self.groups[gi].clone();
            let pairs = match case {
                Case::Compact => self.compact_pairs(&g)?,
                Case::Discrete => self.discrete_pairs(&g)?,
            };
            for (ai, pair) in pairs {
                for si in 0..self.specs.len() {
                    let spec = self.specs[si];
                    let context =
                        format!("{name} {:?} A={} psi={spec}", g.factors(), pair.mass_x());
                    let family = if spec.is_natural() {
                        let mut pool = Vec::with_capacity(self.cfg.pool);
                        for k in 0..self.cfg.pool {
                            let f = self.random(&pair, Stream::Pool, &[stream as usize, gi, ai, k]);
                            pool.push(match case {
                                Case::Compact => f,
                                Case::Discrete => fourier_fast(&f)?,
                            });
                        }
                        Some(pool)
                    } else {
                        None
                    };
                    let chain = spec
                        .build(default_lo, family.as_deref())
                        .map_err(|e| e.to_string())
                        .and_then(|psi| {
                            let fact = factorize_trivial(&psi, &pair, case, self.cfg.mode)
                                .map_err(|e| e.to_string())?;
                            Chain::new(&psi, &fact, &pair, opts).map_err(|e| e.to_string())
                        });
                    let chain = match chain {
                        Ok(c) => c,
                        Err(e) => {
                            self.errors.push(format!("{context}: {e}"));
                            continue;
                        }
                    };
                    for t in 0..self.cfg.trials {
                        let f = self.random(&pair, stream, &[gi, ai, si, t]);
                        match chain.verify(&f) {
                            Ok(recs) => self.records.extend(recs),
                            Err(e) => self.errors.push(format!("{context}: {e}")),
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn tail(&mut self) -> Result<(), CliError> {
        let tol = self.cfg.tolerance("tail");
        for gi in 0..self.groups.len() {
            let pair = MeasuredDualPair::normalized(&self.groups[gi]);
            for si in 0..self.specs.len() {
                let spec = self.specs[si];
                for t in 0..self.cfg.trials {
                    let f = self.random(&pair, Stream::Tail, &[gi, si, t]);
                    let context = format!("tail {:?} psi={spec}", self.groups[gi].factors());
                    let psi = match spec.build(1.0, Some(std::slice::from_ref(&f))) {
                        Ok(psi) => psi,
                        Err(e) => {
                            self.errors.push(format!("{context}: {e}"));
                            break;
                        }
                    };
                    match tail_check(&f, &psi) {
                        Ok(recs) => self.records.extend(recs.into_iter().map(|mut r| {
                            r.tolerance = tol;
                            r.pass = r.slack >= -tol;
                            r.with("trial", t as f64)
                        })),
                        Err(e) => self.errors.push(format!("{context}: {e}")),
                    }
                }
            }
        }
        Ok(())
    }
}

/// Runs the enabled suites. Numerical setup failures are collected in the
/// report; only an invalid config is an `Err`.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let start = Instant::now();
    let groups = cfg
        .groups
        .iter()
        .map(|f| make_group(f))
        .collect::<fourier_gls::Result<Vec<_>>>()?;
    let mut run = Run {
        cfg,
        groups,
        specs: cfg.specs(),
        records: Vec::new(),
        errors: Vec::new(),
    };
    let s = &cfg.suites;
    if s.inversion {
        run.inversion()?;
    }
    if s.hy {
        run.hy()?;
    }
    if s.hy_conjugate || s.hy_dual {
        run.conjugate(s.hy_conjugate, s.hy_dual)?;
    }
    if s.theorem21 {
        run.chain_runs(Case::Compact)?;
    }
    if s.theorem22 {
        run.chain_runs(Case::Discrete)?;
    }
    if s.tail {
        run.tail()?;
    }
    Ok(Report::new(
        cfg.clone(),
        run.records,
        run.errors,
        start.elapsed().as_secs_f64(),
    ))
}
