//! Hausdorff-Young domains and sharp constants, the inequality checks, an
//! operator-norm search and growth scans outside the domain.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{domain, Result};
use crate::fourier::{fourier_fast, GroupFunction};
use crate::group::{make_measure_pair, FiniteAbelianGroup, MeasuredDualPair, Side};
use crate::norms::{lp_norm, lp_norm_raw, Exponent};
use crate::record::CheckRecord;

/// Slack allowed on the boundary lines of the domains.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Default relative tolerance of the inequality checks.
pub const HY_REL_TOL: f64 = 1e-9;

/// `1/p + 1/q <= 1` and `q >= 2`.
pub fn in_domain_q(p: Exponent, q: Exponent) -> bool {
    p.recip() + q.recip() <= 1.0 + BOUNDARY_TOL && q.value() >= 2.0 - BOUNDARY_TOL
}

/// `1/p + 1/q >= 1` and `p <= 2`.
pub fn in_domain_q_hat(p: Exponent, q: Exponent) -> bool {
    p.recip() + q.recip() >= 1.0 - BOUNDARY_TOL && p.value() <= 2.0 + BOUNDARY_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    InQ,
    InQHat,
    Both,
    Neither,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::InQ => "in_q",
            Classification::InQHat => "in_q_hat",
            Classification::Both => "both",
            Classification::Neither => "neither",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentPair {
    pub p: Exponent,
    pub q: Exponent,
    pub class: Classification,
}

impl ExponentPair {
    pub fn new(p: Exponent, q: Exponent) -> Self {
        let class = match (in_domain_q(p, q), in_domain_q_hat(p, q)) {
            (true, true) => Classification::Both,
            (true, false) => Classification::InQ,
            (false, true) => Classification::InQHat,
            (false, false) => Classification::Neither,
        };
        ExponentPair { p, q, class }
    }

    pub fn from_values(p: f64, q: f64) -> Result<Self> {
        Ok(Self::new(Exponent::new(p)?, Exponent::new(q)?))
    }

    pub fn in_q(&self) -> bool {
        matches!(self.class, Classification::InQ | Classification::Both)
    }

    pub fn in_q_hat(&self) -> bool {
        matches!(self.class, Classification::InQHat | Classification::Both)
    }
}

fn check_mass(name: &str, m: f64) -> Result<()> {
    if m.is_finite() && m > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be positive and finite, got {m}"))
    }
}

/// `K(p, q) = A^(1 - 1/p - 1/q)` on `Q`, infinite elsewhere.
pub fn k_const(p: Exponent, q: Exponent, mass: f64) -> Result<f64> {
    check_mass("A", mass)?;
    Ok(if in_domain_q(p, q) {
        mass.powf(1.0 - p.recip() - q.recip())
    } else {
        f64::INFINITY
    })
}

/// `K^(q, p) = B^(1/p + 1/q - 1)` on the conjugate domain, infinite elsewhere.
pub fn k_hat_const(q: Exponent, p: Exponent, dual_mass: f64) -> Result<f64> {
    check_mass("B", dual_mass)?;
    Ok(if in_domain_q_hat(p, q) {
        dual_mass.powf(p.recip() + q.recip() - 1.0)
    } else {
        f64::INFINITY
    })
}

fn expect_x(f: &GroupFunction) -> Result<()> {
    if f.side() != Side::X {
        return domain("inequality checks take a function on X");
    }
    Ok(())
}

fn tag(r: CheckRecord, p: Exponent, q: Exponent, pair: &MeasuredDualPair) -> CheckRecord {
    r.with("p", p)
        .with("q", q)
        .with("A", pair.mass_x())
        .with("N", pair.group().order() as f64)
}

/// `|f^|_q <= K(p, q) |f|_p` for `(p, q)` in `Q`.
pub fn verify_hy(f: &GroupFunction, p: Exponent, q: Exponent) -> Result<CheckRecord> {
    expect_x(f)?;
    verify_hy_with(f, &fourier_fast(f)?, p, q, HY_REL_TOL)
}

/// [`verify_hy`] with a precomputed transform.
pub fn verify_hy_with(
    f: &GroupFunction,
    fhat: &GroupFunction,
    p: Exponent,
    q: Exponent,
    rel_tol: f64,
) -> Result<CheckRecord> {
    if !in_domain_q(p, q) {
        return domain(format!("({p}, {q}) lies outside Q; no bound to check"));
    }
    let k = k_const(p, q, f.pair().mass_x())?;
    let r = CheckRecord::relative("hy", lp_norm(fhat, q), k * lp_norm(f, p), rel_tol);
    Ok(tag(r, p, q, f.pair()))
}

/// `|f|_p <= K^(q, p) |f^|_q` for `(p, q)` in the conjugate domain, in the
/// direction displayed for the conjugate statement.
pub fn verify_hy_conjugate(f: &GroupFunction, p: Exponent, q: Exponent) -> Result<CheckRecord> {
    expect_x(f)?;
    verify_hy_conjugate_with(f, &fourier_fast(f)?, p, q, HY_REL_TOL)
}

pub fn verify_hy_conjugate_with(
    f: &GroupFunction,
    fhat: &GroupFunction,
    p: Exponent,
    q: Exponent,
    rel_tol: f64,
) -> Result<CheckRecord> {
    if !in_domain_q_hat(p, q) {
        return domain(format!("({p}, {q}) lies outside the conjugate domain"));
    }
    let k = k_hat_const(q, p, f.pair().mass_y())?;
    let r = CheckRecord::relative("hy-conjugate", lp_norm(f, p), k * lp_norm(fhat, q), rel_tol);
    Ok(tag(r, p, q, f.pair()))
}

/// `|f^|_q <= K^(q, p) |f|_p` on the conjugate domain: the transform bound
/// that does hold there, with the point mass as extremal.
pub fn verify_hy_dual(f: &GroupFunction, p: Exponent, q: Exponent) -> Result<CheckRecord> {
    expect_x(f)?;
    verify_hy_dual_with(f, &fourier_fast(f)?, p, q, HY_REL_TOL)
}

pub fn verify_hy_dual_with(
    f: &GroupFunction,
    fhat: &GroupFunction,
    p: Exponent,
    q: Exponent,
    rel_tol: f64,
) -> Result<CheckRecord> {
    if !in_domain_q_hat(p, q) {
        return domain(format!("({p}, {q}) lies outside the conjugate domain"));
    }
    let k = k_hat_const(q, p, f.pair().mass_y())?;
    let r = CheckRecord::relative("hy-dual", lp_norm(fhat, q), k * lp_norm(f, p), rel_tol);
    Ok(tag(r, p, q, f.pair()))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpnormConfig {
    pub random_starts: usize,
    pub max_iter: usize,
    pub seed: u64,
    /// Stop a start once the log-ratio gains less than this per step.
    pub min_gain: f64,
}

impl Default for OpnormConfig {
    fn default() -> Self {
        OpnormConfig {
            random_starts: 4,
            max_iter: 200,
            seed: 0,
            min_gain: 1e-13,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OpnormResult {
    pub estimate: f64,
    pub witness: GroupFunction,
    /// Label of the start that produced the witness.
    pub start: String,
    pub starts: usize,
    /// False when some start hit `max_iter` while still improving.
    pub converged: bool,
}

/// Subgroup indicators along single axes, the chirp and the catalog basics.
fn seed_catalog(pair: &MeasuredDualPair) -> Vec<(String, GroupFunction)> {
    let one = Complex64::new(1.0, 0.0);
    let g = pair.group();
    let mut out = vec![
        (
            "constant".to_owned(),
            GroupFunction::constant(pair, Side::X, one).expect("finite"),
        ),
        (
            "point-mass".to_owned(),
            GroupFunction::point_mass(pair, Side::X, &g.zero(), one).expect("zero is valid"),
        ),
    ];
    for (axis, &n) in g.factors().iter().enumerate() {
        for d in (2..n).filter(|d| n % d == 0) {
            let f = GroupFunction::from_fn(pair, Side::X, |x| {
                if x.residues()[axis] % d == 0 {
                    one
                } else {
                    Complex64::default()
                }
            })
            .expect("finite");
            out.push((format!("subgroup:{axis}:{d}"), f));
        }
    }
    out.push(("chirp".to_owned(), chirp(pair)));
    out
}

/// Tensor product of per-axis chirps `exp(pi i x (x + n mod 2) / n)`, whose
/// transform has constant modulus `A / sqrt(N)`.
pub fn chirp(pair: &MeasuredDualPair) -> GroupFunction {
    let factors = pair.group().factors().to_vec();
    GroupFunction::from_fn(pair, Side::X, |x| {
        let phase: f64 = x
            .residues()
            .iter()
            .zip(&factors)
            .map(|(&r, &n)| {
                let k = ((r * (r + n % 2)) % (2 * n)) as f64;
                std::f64::consts::PI * k / n as f64
            })
            .sum();
        Complex64::from_polar(1.0, phase)
    })
    .expect("finite")
}

fn smooth(z: Complex64, eps2: f64) -> f64 {
    (z.norm_sqr() + eps2).sqrt()
}

struct Ascent<'a> {
    pair: &'a MeasuredDualPair,
    p: f64,
    q: f64,
}

impl Ascent<'_> {
    fn log_ratio(&self, f: &GroupFunction) -> (f64, GroupFunction) {
        let fhat = fourier_fast(f).expect("side X");
        let num = lp_norm_raw(fhat.values(), fhat.atom(), self.q);
        let den = lp_norm_raw(f.values(), f.atom(), self.p);
        ((num / den).ln(), fhat)
    }

    fn normalize(&self, f: &GroupFunction) -> GroupFunction {
        let n = lp_norm_raw(f.values(), f.atom(), self.p);
        f.scaled(Complex64::new(1.0 / n, 0.0))
    }

    /// Ascent direction of the smoothed log-ratio, in `conj(f)` coordinates.
    fn gradient(&self, f: &GroupFunction, fhat: &GroupFunction) -> Vec<Complex64> {
        let scale = f.max_modulus().max(fhat.max_modulus());
        let eps2 = (1e-8 * scale).powi(2);
        let (p, q) = (self.p, self.q);
        let h: Vec<Complex64> = fhat
            .values()
            .iter()
            .map(|&z| z * smooth(z, eps2).powf(q - 2.0))
            .collect();
        let s_q = fhat.atom()
            * fhat
                .values()
                .iter()
                .map(|&z| smooth(z, eps2).powf(q))
                .sum::<f64>();
        let s_p = f.atom()
            * f.values()
                .iter()
                .map(|&z| smooth(z, eps2).powf(p))
                .sum::<f64>();
        let h = GroupFunction::new(self.pair, Side::Y, h).expect("finite");
        let back = fourier_fast(&h).expect("side Y");
        let a = f.atom() / 2.0;
        back.values()
            .iter()
            .zip(f.values())
            .map(|(&b, &z)| (b / s_q - z * smooth(z, eps2).powf(p - 2.0) / s_p) * a)
            .collect()
    }

    /// Returns the final log-ratio, the normalized iterate and whether it settled.
    fn run(&self, start: &GroupFunction, cfg: &OpnormConfig) -> (f64, GroupFunction, bool) {
        let mut f = self.normalize(start);
        let (mut value, mut fhat) = self.log_ratio(&f);
        if !(self.p.is_finite() && self.q.is_finite()) {
            return (value, f, true);
        }
        let mut eta = 0.25;
        for _ in 0..cfg.max_iter {
            let grad = self.gradient(&f, &fhat);
            let gmax = grad.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if gmax == 0.0 || !gmax.is_finite() {
                return (value, f, true);
            }
            let unit = f.max_modulus() / gmax;
            let mut improved = false;
            while eta > 1e-12 {
                let step = Complex64::new(eta * unit, 0.0);
                let moved: Vec<Complex64> = f
                    .values()
                    .iter()
                    .zip(&grad)
                    .map(|(&z, &g)| z + g * step)
                    .collect();
                let Ok(candidate) = GroupFunction::new(self.pair, Side::X, moved) else {
                    eta *= 0.5;
                    continue;
                };
                if candidate.is_zero() {
                    eta *= 0.5;
                    continue;
                }
                let candidate = self.normalize(&candidate);
                let (v, ch) = self.log_ratio(&candidate);
                if v > value {
                    let gain = v - value;
                    f = candidate;
                    fhat = ch;
                    value = v;
                    eta = (eta * 1.5).min(1.0);
                    improved = gain >= cfg.min_gain;
                    break;
                }
                eta *= 0.5;
            }
            if !improved {
                return (value, f, true);
            }
        }
        (value, f, false)
    }
}

/// Best ratio `|f^|_q / |f|_p` found by smoothed gradient ascent from the
/// witness catalog and then seeded random starts. Never exceeds the true
/// operator norm beyond round-off, since every candidate is an actual ratio.
pub fn opnorm_search(
    pair: &MeasuredDualPair,
    p: Exponent,
    q: Exponent,
    cfg: &OpnormConfig,
) -> Result<OpnormResult> {
    if !in_domain_q(p, q) {
        return domain(format!(
            "({p}, {q}) lies outside Q where the norm is unbounded; use unboundedness_scan"
        ));
    }
    let ascent = Ascent {
        pair,
        p: p.value(),
        q: q.value(),
    };
    let mut starts = seed_catalog(pair);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for k in 0..cfg.random_starts {
        starts.push((
            format!("random:{k}"),
            GroupFunction::random(pair, Side::X, &mut rng),
        ));
    }
    let mut best: Option<(f64, GroupFunction, String)> = None;
    let mut converged = true;
    let count = starts.len();
    for (label, start) in starts {
        let (v, f, done) = ascent.run(&start, cfg);
        converged &= done;
        if best.as_ref().is_none_or(|(b, _, _)| v > *b) {
            best = Some((v, f, label));
        }
    }
    let (v, witness, start) = best.expect("catalog is never empty");
    Ok(OpnormResult {
        estimate: v.exp(),
        witness,
        start,
        starts: count,
        converged,
    })
}

/// Witnesses used to exhibit growth outside `Q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Witness {
    /// `N * 1{0}`: ratio `A^(1-1/p-1/q) N^(1/p+1/q-1)`.
    PointMass,
    /// [`chirp`]: ratio `A^(1-1/p-1/q) N^(1/q-1/2)`.
    Chirp,
}

impl Witness {
    /// Exponent of `N` in the witness ratio at fixed `A`.
    pub fn growth(self, p: Exponent, q: Exponent) -> f64 {
        match self {
            Witness::PointMass => p.recip() + q.recip() - 1.0,
            Witness::Chirp => q.recip() - 0.5,
        }
    }

    /// The witness whose ratio grows fastest in `N`; ties go to the point mass.
    pub fn fastest(p: Exponent, q: Exponent) -> Self {
        if Witness::Chirp.growth(p, q) > Witness::PointMass.growth(p, q) {
            Witness::Chirp
        } else {
            Witness::PointMass
        }
    }

    pub fn build(self, pair: &MeasuredDualPair) -> GroupFunction {
        let n = pair.group().order() as f64;
        match self {
            Witness::PointMass => GroupFunction::point_mass(
                pair,
                Side::X,
                &pair.group().zero(),
                Complex64::new(n, 0.0),
            )
            .expect("zero is valid"),
            Witness::Chirp => chirp(pair),
        }
    }
}

/// Measured `|f^|_q / |f|_p` of a witness.
pub fn witness_ratio(pair: &MeasuredDualPair, p: Exponent, q: Exponent, w: Witness) -> Result<f64> {
    let f = w.build(pair);
    let fhat = fourier_fast(&f)?;
    Ok(lp_norm(&fhat, q) / lp_norm(&f, p))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub n: usize,
    pub ratio: f64,
    pub witness: Witness,
}

/// Witness ratios along a group family at fixed `A` for `(p, q)` outside `Q`,
/// where the operator norm is claimed infinite.
pub fn unboundedness_scan(
    p: Exponent,
    q: Exponent,
    family: &[FiniteAbelianGroup],
    mass: f64,
) -> Result<Vec<ScanRow>> {
    if in_domain_q(p, q) {
        return domain(format!("({p}, {q}) lies in Q where the norm is bounded"));
    }
    if family.is_empty() {
        return domain("scan needs at least one group");
    }
    let w = Witness::fastest(p, q);
    family
        .iter()
        .map(|g| {
            let pair = make_measure_pair(g, mass)?;
            Ok(ScanRow {
                n: g.order(),
                ratio: witness_ratio(&pair, p, q, w)?,
                witness: w,
            })
        })
        .collect()
}
