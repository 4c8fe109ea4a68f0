//! Factorizations of truncated fundamental functions and the two GLS-to-GLS
//! bounds for the Fourier transform: compact normalization (`X -> Y`) and
//! discrete normalization (`Y -> X`), each with its chain of per-exponent
//! intermediate inequalities.
//!
//! Both chains come in two flavours. [`ChainMode::AsDerived`] (the default)
//! uses the exponent ranges allowed by the Hausdorff-Young domains and the
//! powers of `A`, `B` that follow from them. [`ChainMode::AsWritten`] keeps
//! the ranges `p <= t(q)` and `q >= s(p)` and the powers in the published
//! statement, for comparison.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::fourier::{fourier_fast, GroupFunction};
use crate::gls::{fundamental_function, gls_norm, truncated_fundamental, PsiFunction, Support};
use crate::group::{MeasuredDualPair, Side};
use crate::hy::{in_domain_q, in_domain_q_hat};
use crate::norms::{conjugate_exponent, lp_norm, s_of_p, t_of_q, Exponent};
use crate::record::CheckRecord;
use crate::sup::Chart;

/// Identity tolerance accepted by [`Factorization::new`].
pub const FACTORIZATION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Case {
    /// Weight on the `X` side, bound for `f^` in the `nu`-space.
    Compact,
    /// Weight on the `Y` side, bound for `f` in the `kappa`-space.
    Discrete,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChainMode {
    #[default]
    AsDerived,
    AsWritten,
}

impl fmt::Display for ChainMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChainMode::AsDerived => "as-derived",
            ChainMode::AsWritten => "as-written",
        })
    }
}

impl FromStr for ChainMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "as-derived" => Ok(ChainMode::AsDerived),
            "as-written" => Ok(ChainMode::AsWritten),
            _ => domain(format!("unknown chain mode {s:?}")),
        }
    }
}

fn inf_to(p: f64) -> Exponent {
    Exponent::new(p).expect("exponent ranges are positive")
}

/// Exponent range `[s1, s2]` of the weight's variable over which the inner
/// supremum runs for the outer exponent `e` (`q` in the compact case, `p` in
/// the discrete one). Intersect with the weight's support before use.
pub fn admissible_range(case: Case, mode: ChainMode, e: f64) -> Result<(f64, f64)> {
    let e = Exponent::new(e)?;
    Ok(match (case, mode) {
        (Case::Compact, ChainMode::AsDerived) => (conjugate_exponent(e)?.value(), f64::INFINITY),
        (Case::Compact, ChainMode::AsWritten) => (1.0, t_of_q(e)?.value()),
        (Case::Discrete, ChainMode::AsDerived) => (2.0, conjugate_exponent(e)?.value()),
        (Case::Discrete, ChainMode::AsWritten) => (s_of_p(e)?.value(), f64::INFINITY),
    })
}

/// Default exponent domain of the factorization for a weight with support `s`.
pub fn default_domain(case: Case, mode: ChainMode, s: Support) -> Result<Support> {
    match (case, mode) {
        // Need q' <= sup of the support, i.e. q >= hi'.
        (Case::Compact, ChainMode::AsDerived) => {
            let lo = 2f64.max(conjugate_exponent(inf_to(s.hi()))?.value());
            if lo.is_infinite() {
                return domain(format!("no q >= 2 reaches the support {s}"));
            }
            Support::from(lo)
        }
        (Case::Compact, ChainMode::AsWritten) => Support::from(2.0),
        // Need p' >= lo, i.e. p <= lo'.
        (Case::Discrete, ChainMode::AsDerived) => {
            let hi = 2f64.min(conjugate_exponent(inf_to(s.lo()))?.value());
            if hi < 1.0 {
                return domain(format!("no p in [1, 2] reaches the support {s}"));
            }
            Support::closed(1.0, hi)
        }
        (Case::Discrete, ChainMode::AsWritten) => Support::closed(1.0, 2.0),
    }
}

/// `delta` of the truncated fundamental function being factorized:
/// `A` in the compact case, `1/B` in the discrete one.
fn target_delta(case: Case, pair: &MeasuredDualPair) -> f64 {
    match case {
        Case::Compact => pair.mass_x(),
        Case::Discrete => 1.0 / pair.mass_y(),
    }
}

fn target(psi: &PsiFunction, case: Case, mode: ChainMode, delta: f64, e: f64) -> Result<f64> {
    let (s1, s2) = admissible_range(case, mode, e)?;
    truncated_fundamental(psi, delta, s1, s2)
}

/// A pair `(theta, nu)` on a common exponent domain whose ratio reproduces the
/// truncated fundamental function of `psi` at every point of the domain:
/// `(theta_A, nu_A)` in the compact case, `(tau_B, kappa_B)` in the discrete one.
#[derive(Debug, Clone)]
pub struct Factorization {
    case: Case,
    mode: ChainMode,
    theta: PsiFunction,
    nu: PsiFunction,
    mass: f64,
    residual: f64,
}

impl Factorization {
    /// Validates the identity `theta / nu = target` on `nu`'s grid.
    pub fn new(
        theta: PsiFunction,
        nu: PsiFunction,
        psi: &PsiFunction,
        pair: &MeasuredDualPair,
        case: Case,
        mode: ChainMode,
    ) -> Result<Self> {
        if theta.support() != nu.support() {
            return Err(Error::InvalidFactorization(format!(
                "components live on {} and {}",
                theta.support(),
                nu.support()
            )));
        }
        let delta = target_delta(case, pair);
        let mut residual = 0.0f64;
        for (&e, &n) in nu.grid().iter().zip(nu.grid_values()) {
            if !n.is_finite() {
                continue;
            }
            let t = target(psi, case, mode, delta, e)
                .map_err(|err| Error::InvalidFactorization(format!("at {e}: {err}")))?;
            let got = theta.eval(e) / n;
            residual = residual.max((got - t).abs() / t);
        }
        if !(residual <= FACTORIZATION_TOL) {
            return Err(Error::InvalidFactorization(format!(
                "identity residual {residual:e} exceeds {FACTORIZATION_TOL:e}"
            )));
        }
        Ok(Factorization {
            case,
            mode,
            theta,
            nu,
            mass: pair.mass_x(),
            residual,
        })
    }

    pub fn case(&self) -> Case {
        self.case
    }

    pub fn mode(&self) -> ChainMode {
        self.mode
    }

    /// `theta_A` or `tau_B`.
    pub fn theta(&self) -> &PsiFunction {
        &self.theta
    }

    /// `nu_A` or `kappa_B`.
    pub fn nu(&self) -> &PsiFunction {
        &self.nu
    }

    pub fn domain(&self) -> Support {
        self.nu.support()
    }

    pub fn residual(&self) -> f64 {
        self.residual
    }

    fn check_pair(&self, pair: &MeasuredDualPair, case: Case) -> Result<()> {
        if self.case != case {
            return domain(format!("factorization is for the {:?} case", self.case));
        }
        if pair.mass_x() != self.mass {
            return domain(format!(
                "factorization was built for A = {}, got A = {}",
                self.mass,
                pair.mass_x()
            ));
        }
        Ok(())
    }
}

/// `theta = 1`, `nu = 1 / target` on the default domain.
pub fn factorize_trivial(
    psi: &PsiFunction,
    pair: &MeasuredDualPair,
    case: Case,
    mode: ChainMode,
) -> Result<Factorization> {
    let dom = default_domain(case, mode, psi.support())?;
    factorize_trivial_on(psi, pair, case, mode, dom)
}

/// [`factorize_trivial`] on an explicit exponent domain.
pub fn factorize_trivial_on(
    psi: &PsiFunction,
    pair: &MeasuredDualPair,
    case: Case,
    mode: ChainMode,
    dom: Support,
) -> Result<Factorization> {
    let delta = target_delta(case, pair);
    let invalid = |err: Error| Error::InvalidFactorization(err.to_string());
    let theta = PsiFunction::constant(1.0, dom).map_err(invalid)?;
    let weight = psi.clone();
    let name = match case {
        Case::Compact => "nu",
        Case::Discrete => "kappa",
    };
    let nu = PsiFunction::new(format!("{name}[{}]", psi.name()), dom, move |e| {
        target(&weight, case, mode, delta, e).map_or(f64::NAN, |t| 1.0 / t)
    })
    .map_err(invalid)?;
    Factorization::new(theta, nu, psi, pair, case, mode)
}

/// `A * phi[G theta](A^-1)` (as derived) or `A * phi[G theta](A)` (as written).
pub fn theorem21_bound(fact: &Factorization, pair: &MeasuredDualPair) -> Result<f64> {
    fact.check_pair(pair, Case::Compact)?;
    let a = pair.mass_x();
    let delta = match fact.mode {
        ChainMode::AsDerived => 1.0 / a,
        ChainMode::AsWritten => a,
    };
    Ok(a * fundamental_function(&fact.theta, delta)?)
}

/// `B^-1 * phi[G tau](B)` (as derived) or `B^-1 * phi[G tau](B^-1)` (as written).
pub fn theorem22_bound(fact: &Factorization, pair: &MeasuredDualPair) -> Result<f64> {
    fact.check_pair(pair, Case::Discrete)?;
    let b = pair.mass_y();
    let delta = match fact.mode {
        ChainMode::AsDerived => b,
        ChainMode::AsWritten => 1.0 / b,
    };
    Ok(fundamental_function(&fact.theta, delta)? / b)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChainOptions {
    /// Number of outer exponents at which the intermediate step is recorded.
    pub record_points: usize,
    pub tolerance: f64,
}

impl Default for ChainOptions {
    fn default() -> Self {
        ChainOptions {
            record_points: 17,
            tolerance: 1e-8,
        }
    }
}

struct Step {
    e: f64,
    coeff: f64,
    in_domain: bool,
}

/// Everything of a chain run that does not depend on the function.
pub struct Chain {
    case: Case,
    mode: ChainMode,
    psi: PsiFunction,
    fact: Factorization,
    pair: MeasuredDualPair,
    steps: Vec<Step>,
    bound: f64,
    tolerance: f64,
}

impl Chain {
    pub fn new(
        psi: &PsiFunction,
        fact: &Factorization,
        pair: &MeasuredDualPair,
        opts: ChainOptions,
    ) -> Result<Self> {
        let case = fact.case;
        let mode = fact.mode;
        let bound = match case {
            Case::Compact => theorem21_bound(fact, pair)?,
            Case::Discrete => theorem22_bound(fact, pair)?,
        };
        let dom = fact.domain();
        let chart = if dom.hi().is_infinite() {
            Chart::Reciprocal
        } else {
            Chart::Log
        };
        let delta = target_delta(case, pair);
        let support = psi.support();
        let mut steps = Vec::new();
        for e in chart.nodes(dom.lo(), dom.hi(), opts.record_points) {
            let (s1, s2) = admissible_range(case, mode, e)?;
            let phi = truncated_fundamental(psi, delta, s1, s2)?;
            let (a, b) = support.clip(s1, s2).expect("range checked by the sup");
            let ex = inf_to(e);
            let (lo, hi) = (inf_to(a), inf_to(b));
            let e_recip = ex.recip();
            let (coeff, in_domain) = match case {
                Case::Compact => {
                    let m = pair.mass_x();
                    let power = match mode {
                        ChainMode::AsDerived => m.powf(-e_recip),
                        ChainMode::AsWritten => m.powf(e_recip),
                    };
                    (power / phi, in_domain_q(lo, ex) && in_domain_q(hi, ex))
                }
                Case::Discrete => {
                    let m = pair.mass_y();
                    let power = match mode {
                        ChainMode::AsDerived => m.powf(e_recip - 2.0),
                        ChainMode::AsWritten => m.powf(e_recip),
                    };
                    (
                        power / phi,
                        in_domain_q_hat(ex, lo) && in_domain_q_hat(ex, hi),
                    )
                }
            };
            if mode == ChainMode::AsDerived && !in_domain {
                return domain(format!(
                    "exponent range [{a}, {b}] at {e} leaves the domain"
                ));
            }
            steps.push(Step {
                e,
                coeff,
                in_domain,
            });
        }
        Ok(Chain {
            case,
            mode,
            psi: psi.clone(),
            fact: fact.clone(),
            pair: pair.clone(),
            steps,
            bound,
            tolerance: opts.tolerance,
        })
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    /// Step records in ascending outer exponent, then the final record.
    pub fn verify(&self, f: &GroupFunction) -> Result<Vec<CheckRecord>> {
        if f.side() != Side::X {
            return domain("chain checks take a function on X");
        }
        if f.pair() != &self.pair {
            return domain("function and factorization use different measure pairs");
        }
        let fhat = fourier_fast(f)?;
        let (weighted, other, name, var, inner) = match self.case {
            Case::Compact => (f, &fhat, "theorem21", "q", "p"),
            Case::Discrete => (&fhat, f, "theorem22", "p", "q"),
        };
        let norm = gls_norm(weighted, &self.psi);
        let mass = self.pair.total_mass(weighted.side());
        let mut out = Vec::with_capacity(self.steps.len() + 1);
        for s in &self.steps {
            let lhs = lp_norm(other, inf_to(s.e)) / mass;
            let r =
                CheckRecord::relative(format!("{name}-step"), lhs, s.coeff * norm, self.tolerance)
                    .with(var, s.e)
                    .with("in_domain", s.in_domain)
                    .with("inner", inner);
            out.push(self.tag(r));
        }
        let lhs = gls_norm(other, self.fact.nu());
        let r = CheckRecord::relative(name, lhs, self.bound * norm, self.tolerance)
            .with("bound", self.bound)
            .with("weighted_norm", norm)
            .with(
                "rhs_norm",
                match self.case {
                    Case::Compact => "gls(f, psi)",
                    Case::Discrete => "gls(f^, psi)",
                },
            );
        out.push(self.tag(r));
        Ok(out)
    }

    fn tag(&self, r: CheckRecord) -> CheckRecord {
        r.with("mode", self.mode.to_string())
            .with("psi", self.psi.name())
            .with("A", self.pair.mass_x())
            .with("N", self.pair.group().order() as f64)
    }
}

/// Compact-case chain: per-`q` steps `A^-1 |f^|_q <= c(q) ||f||_psi` and the
/// final `||f^||_nu <= theorem21_bound * ||f||_psi`.
pub fn verify_theorem21(
    f: &GroupFunction,
    psi: &PsiFunction,
    fact: &Factorization,
    pair: &MeasuredDualPair,
    opts: ChainOptions,
) -> Result<Vec<CheckRecord>> {
    if fact.case != Case::Compact {
        return domain("compact chain needs a compact-case factorization");
    }
    Chain::new(psi, fact, pair, opts)?.verify(f)
}

/// Discrete-case chain with `psi` weighting `f^`: per-`p` steps
/// `B^-1 |f|_p <= c(p) ||f^||_psi` and the final
/// `||f||_kappa <= theorem22_bound * ||f^||_psi`.
pub fn verify_theorem22(
    f: &GroupFunction,
    psi: &PsiFunction,
    fact: &Factorization,
    pair: &MeasuredDualPair,
    opts: ChainOptions,
) -> Result<Vec<CheckRecord>> {
    if fact.case != Case::Discrete {
        return domain("discrete chain needs a discrete-case factorization");
    }
    Chain::new(psi, fact, pair, opts)?.verify(f)
}
