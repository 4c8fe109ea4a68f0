//! Weight functions `psi`, grand Lebesgue norms `sup_p |f|_p / psi(p)`, natural
//! functions, fundamental functions and the exponential tail bound.

use std::f64::consts::E;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::fourier::GroupFunction;
use crate::hy::BOUNDARY_TOL;
use crate::norms::{lp_norm_raw, Moduli};
use crate::record::CheckRecord;
use crate::sup::{refine_max, Chart, Sup};

/// Grid size used by weight functions unless asked otherwise.
pub const DEFAULT_GRID_POINTS: usize = 512;

/// An exponent interval `[lo, hi)` or `[lo, hi]`; `hi` may be infinite
/// (always open then). A closed interval with `lo == hi` is a single exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support {
    lo: f64,
    hi: f64,
    closed: bool,
}

impl Support {
    /// `[lo, hi)`.
    pub fn half_open(lo: f64, hi: f64) -> Result<Self> {
        Self::build(lo, hi, false)
    }

    /// `[lo, hi]`.
    pub fn closed(lo: f64, hi: f64) -> Result<Self> {
        Self::build(lo, hi, true)
    }

    /// `[lo, inf)`.
    pub fn from(lo: f64) -> Result<Self> {
        Self::build(lo, f64::INFINITY, false)
    }

    pub fn singleton(p: f64) -> Result<Self> {
        Self::build(p, p, true)
    }

    fn build(lo: f64, hi: f64, closed: bool) -> Result<Self> {
        if !(lo.is_finite() && lo >= 1.0) {
            return domain(format!(
                "support must start at a finite exponent >= 1, got {lo}"
            ));
        }
        if hi.is_nan() || hi < lo || (hi == lo && !closed) {
            return domain(format!("empty support [{lo}, {hi})"));
        }
        let closed = closed && hi.is_finite();
        Ok(Support { lo, hi, closed })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn is_singleton(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, p: f64) -> bool {
        p >= self.lo && (p < self.hi || (self.closed && p == self.hi))
    }

    pub fn chart(&self) -> Chart {
        if self.hi.is_infinite() {
            Chart::Reciprocal
        } else {
            Chart::Log
        }
    }

    /// `[s1, s2]` intersected with the closure of the support, or `None`.
    /// Ranges that miss the support by a relative `BOUNDARY_TOL` (conjugate
    /// exponents computed in floating point) snap to the nearest support end.
    pub fn clip(&self, s1: f64, s2: f64) -> Option<(f64, f64)> {
        let a = s1.max(self.lo);
        let b = s2.min(self.hi);
        if a <= b {
            return Some((a, b));
        }
        if a - b > BOUNDARY_TOL * a {
            return None;
        }
        let end = if a == self.lo { a } else { b };
        Some((end, end))
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_singleton() {
            write!(f, "{{{}}}", self.lo)
        } else if self.closed {
            write!(f, "[{}, {}]", self.lo, self.hi)
        } else {
            write!(f, "[{}, {})", self.lo, self.hi)
        }
    }
}

type Eval = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A weight of the class `Psi(b)`: positive, bounded below and continuous on
/// its support. Values on a fixed grid are cached at construction so that
/// every supremum taken against this weight is reproducible.
///
/// For an open upper end the last grid node is the end itself; the value there
/// is read as the limit `psi(b-)` and may be infinite.
#[derive(Clone)]
pub struct PsiFunction {
    name: String,
    support: Support,
    eval: Eval,
    nodes: Vec<f64>,
    values: Vec<f64>,
    irregular_steps: usize,
}

impl fmt::Debug for PsiFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PsiFunction")
            .field("name", &self.name)
            .field("support", &self.support)
            .field("grid_points", &self.nodes.len())
            .finish()
    }
}

impl PsiFunction {
    pub fn new(
        name: impl Into<String>,
        support: Support,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::with_grid(name, support, eval, DEFAULT_GRID_POINTS)
    }

    pub fn with_grid(
        name: impl Into<String>,
        support: Support,
        eval: impl Fn(f64) -> f64 + Send + Sync + 'static,
        points: usize,
    ) -> Result<Self> {
        Self::from_arc(name.into(), support, Arc::new(eval), points)
    }

    fn from_arc(name: String, support: Support, eval: Eval, points: usize) -> Result<Self> {
        let nodes = support.chart().nodes(support.lo, support.hi, points.max(2));
        let values: Vec<f64> = nodes.iter().map(|&p| eval(p)).collect();
        let interior = if support.closed || support.is_singleton() {
            values.len()
        } else {
            values.len() - 1
        };
        let interior = interior.max(1);
        for (p, v) in nodes.iter().zip(&values).take(interior) {
            if !(v.is_finite() && *v > 0.0) {
                return Err(Error::DegenerateWeight(format!(
                    "{name}: value {v} at p = {p} is not positive and finite"
                )));
            }
        }
        // Heuristic continuity flag: a relative step larger than ten grid
        // spacings and ten times both neighbouring steps.
        let chart = support.chart();
        let rel: Vec<f64> = nodes[..interior]
            .windows(2)
            .zip(values[..interior].windows(2))
            .map(|(p, v)| {
                let dt = (chart.to_t(p[1]) - chart.to_t(p[0])).abs();
                (v[1] - v[0]).abs() / v[0].min(v[1]) / dt.max(f64::EPSILON)
            })
            .collect();
        let irregular_steps = (0..rel.len())
            .filter(|&i| {
                let left = if i > 0 { rel[i - 1] } else { 0.0 };
                let right = rel.get(i + 1).copied().unwrap_or(0.0);
                rel[i] > 10.0 && rel[i] > 10.0 * left.max(right)
            })
            .count();
        Ok(PsiFunction {
            name,
            support,
            eval,
            nodes,
            values,
            irregular_steps,
        })
    }

    /// `psi(p) = c`.
    pub fn constant(c: f64, support: Support) -> Result<Self> {
        Self::new(format!("const:{c}"), support, move |_| c)
    }

    /// `psi(p) = p^k`.
    pub fn power(k: f64, support: Support) -> Result<Self> {
        Self::new(format!("power:{k}"), support, move |p| p.powf(k))
    }

    /// `psi(p) = exp(rate * p)`.
    pub fn exponential(rate: f64, support: Support) -> Result<Self> {
        Self::new(format!("exp:{rate}"), support, move |p| (rate * p).exp())
    }

    /// Single-exponent weight: the grand Lebesgue norm reduces to `|f|_p0 / value`.
    pub fn singleton(p0: f64, value: f64) -> Result<Self> {
        Self::new(
            format!("singleton:{p0}"),
            Support::singleton(p0)?,
            move |_| value,
        )
    }

    /// `c * psi`.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        let inner = self.eval.clone();
        Self::from_arc(
            format!("{c}*{}", self.name),
            self.support,
            Arc::new(move |p| c * inner(p)),
            self.nodes.len(),
        )
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn support(&self) -> Support {
        self.support
    }

    pub fn eval(&self, p: f64) -> f64 {
        (self.eval)(p)
    }

    pub fn grid(&self) -> &[f64] {
        &self.nodes
    }

    pub fn grid_values(&self) -> &[f64] {
        &self.values
    }

    /// Number of adjacent grid pairs whose relative change looks like a jump.
    pub fn irregular_steps(&self) -> usize {
        self.irregular_steps
    }

    /// Smallest value over the finite grid values.
    pub fn inf_on_grid(&self) -> f64 {
        self.values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .fold(f64::INFINITY, f64::min)
    }

    /// `sup_{p in [s1, s2] ∩ support} num(p) / psi(p)`; `None` when the range
    /// misses the support.
    pub fn sup_ratio(&self, s1: f64, s2: f64, num: &dyn Fn(f64) -> f64) -> Option<Sup> {
        let (a, b) = self.support.clip(s1, s2)?;
        let ratio = |p: f64, psi: f64| -> f64 {
            if psi.is_infinite() && psi > 0.0 {
                0.0
            } else {
                num(p) / psi
            }
        };
        let mut nodes = Vec::with_capacity(self.nodes.len() + 2);
        let mut values = Vec::with_capacity(self.nodes.len() + 2);
        let first = self.nodes.partition_point(|&p| p < a);
        let last = self.nodes.partition_point(|&p| p <= b);
        if self.nodes.get(first) != Some(&a) {
            nodes.push(a);
            values.push(ratio(a, self.eval(a)));
        }
        for i in first..last {
            nodes.push(self.nodes[i]);
            values.push(ratio(self.nodes[i], self.values[i]));
        }
        if nodes.last() != Some(&b) {
            nodes.push(b);
            values.push(ratio(b, self.eval(b)));
        }
        Some(refine_max(self.support.chart(), &nodes, &values, &|p| {
            ratio(p, self.eval(p))
        }))
    }
}

/// `||f|| = sup_{p in support} |f|_p / psi(p)`.
///
/// A single-exponent weight gives exactly `lp_norm(f, p0) / psi(p0)`.
pub fn gls_norm(f: &GroupFunction, psi: &PsiFunction) -> f64 {
    gls_norm_raw(f.values(), f.atom(), psi)
}

pub(crate) fn gls_norm_raw(values: &[Complex64], atom: f64, psi: &PsiFunction) -> f64 {
    if values.iter().all(|z| z.re == 0.0 && z.im == 0.0) {
        return 0.0;
    }
    let s = psi.support();
    if s.is_singleton() {
        return lp_norm_raw(values, atom, s.lo) / psi.grid_values()[0];
    }
    let moduli = Moduli::new(values, atom);
    psi.sup_ratio(s.lo, s.hi, &|p| moduli.norm(p))
        .map(|s| s.value)
        .unwrap_or(0.0)
}

/// `psi_W(p) = sup_{f in W} |f|_p`, the weight that puts every member of the
/// family in the unit ball and at least one on its boundary.
pub fn natural_function(family: &[GroupFunction], support: Support) -> Result<PsiFunction> {
    natural_function_with_grid(family, support, DEFAULT_GRID_POINTS)
}

pub fn natural_function_with_grid(
    family: &[GroupFunction],
    support: Support,
    points: usize,
) -> Result<PsiFunction> {
    if family.is_empty() {
        return domain("natural function of an empty family");
    }
    if family.iter().all(GroupFunction::is_zero) {
        return Err(Error::DegenerateWeight(
            "natural function of an all-zero family is trivial".into(),
        ));
    }
    let members: Vec<Moduli> = family
        .iter()
        .map(|f| Moduli::new(f.values(), f.atom()))
        .collect();
    PsiFunction::with_grid(
        format!("natural:{}", family.len()),
        support,
        move |p| members.iter().map(|m| m.norm(p)).fold(0.0, f64::max),
        points,
    )
}

fn check_delta(delta: f64) -> Result<()> {
    if delta.is_finite() && delta > 0.0 {
        Ok(())
    } else {
        domain(format!("fundamental function needs delta > 0, got {delta}"))
    }
}

fn delta_pow(delta: f64, p: f64) -> f64 {
    if p.is_infinite() {
        1.0
    } else {
        delta.powf(1.0 / p)
    }
}

/// `phi(delta) = sup_p delta^(1/p) / psi(p)` over the whole support.
pub fn fundamental_function(psi: &PsiFunction, delta: f64) -> Result<f64> {
    let s = psi.support();
    truncated_fundamental(psi, delta, s.lo, s.hi)
}

/// The fundamental function with the exponent restricted to `[s1, s2]`.
/// Covers both the lower (`[s, b)`) and upper (`[1, s]`) truncations.
pub fn truncated_fundamental(psi: &PsiFunction, delta: f64, s1: f64, s2: f64) -> Result<f64> {
    check_delta(delta)?;
    if s1.is_nan() || s2.is_nan() {
        return domain("truncation range has NaN ends");
    }
    psi.sup_ratio(s1, s2, &|p| delta_pow(delta, p))
        .map(|s| s.value)
        .ok_or_else(|| {
            Error::Domain(format!(
                "truncation range [{s1}, {s2}] misses the support {}",
                psi.support()
            ))
        })
}

/// The tail functional `v(p) = p ln psi(p)` and its Legendre conjugate
/// `v*(u) = sup_p (p u - v(p))`.
#[derive(Debug, Clone)]
pub struct TailModel {
    psi: PsiFunction,
}

impl TailModel {
    pub fn new(psi: PsiFunction) -> Self {
        TailModel { psi }
    }

    pub fn psi(&self) -> &PsiFunction {
        &self.psi
    }

    pub fn v(&self, p: f64) -> f64 {
        p * self.psi.eval(p).ln()
    }

    pub fn v_star(&self, u: f64) -> f64 {
        let nodes = self.psi.grid();
        let values = self.psi.grid_values();
        let finite_end = nodes.len() - usize::from(nodes.last().is_some_and(|p| p.is_infinite()));
        if finite_end < nodes.len() {
            // p -> inf: p (u - ln psi(p)) diverges upward once u > ln psi(inf).
            let limit = values[nodes.len() - 1];
            if limit.is_finite() && u > limit.ln() {
                return f64::INFINITY;
            }
        }
        let objective = |p: f64| {
            if p.is_infinite() {
                f64::NEG_INFINITY
            } else {
                p * u - self.v(p)
            }
        };
        let grid_vals: Vec<f64> = nodes[..finite_end]
            .iter()
            .zip(&values[..finite_end])
            .map(|(&p, &psi)| p * u - p * psi.ln())
            .collect();
        refine_max(
            self.psi.support().chart(),
            &nodes[..finite_end],
            &grid_vals,
            &objective,
        )
        .value
    }

    /// Convexity and monotonicity of `v*` on an ascending sample, with a small
    /// absolute slack for the refinement.
    pub fn shape_check(&self, us: &[f64]) -> bool {
        let vs: Vec<f64> = us.iter().map(|&u| self.v_star(u)).collect();
        let slack = |a: f64, b: f64| 1e-9 * (1.0 + a.abs().max(b.abs()));
        let monotone = vs.windows(2).all(|w| w[1] >= w[0] - slack(w[0], w[1]));
        let convex = us.windows(3).zip(vs.windows(3)).all(|(u, v)| {
            if v.iter().any(|x| !x.is_finite()) {
                return true;
            }
            let w = (u[1] - u[0]) / (u[2] - u[0]);
            v[1] <= (1.0 - w) * v[0] + w * v[2] + slack(v[0], v[2])
        });
        monotone && convex
    }
}

/// `P(|zeta| > y) <= exp(-v*(ln(y / ||zeta||)))` for `y >= e ||zeta||`, capped at 1.
pub fn tail_bound(model: &TailModel, norm: f64, y: f64) -> Result<f64> {
    if !(norm.is_finite() && norm > 0.0) {
        return domain(format!("tail bound needs a positive norm, got {norm}"));
    }
    if !(y >= E * norm) {
        return Err(Error::Range(format!(
            "tail bound is only asserted for y >= e * norm = {}, got {y}",
            E * norm
        )));
    }
    let v = model.v_star((y / norm).ln());
    Ok((-v).exp().min(1.0))
}

/// Exact tail measures of `f` on a probability space against [`tail_bound`],
/// one record per level `y >= e ||f||`.
pub fn tail_check(f: &GroupFunction, psi: &PsiFunction) -> Result<Vec<CheckRecord>> {
    let mass = f.pair().total_mass(f.side());
    if mass != 1.0 {
        return domain(format!(
            "tail check needs a probability measure, total mass is {mass}"
        ));
    }
    let norm = gls_norm(f, psi);
    if norm == 0.0 {
        return domain("tail check needs a nonzero function");
    }
    let model = TailModel::new(psi.clone());
    let atom = f.atom();
    let mut moduli: Vec<f64> = f.values().iter().map(|z| z.norm()).collect();
    moduli.sort_by(|a, b| b.total_cmp(a));

    let y0 = E * norm;
    let y1 = y0.max(moduli[0]) * 1.25;
    let mut levels: Vec<f64> = (0..48)
        .map(|k| y0 * (y1 / y0).powf(k as f64 / 47.0))
        .collect();
    // Just below each large modulus, where the measure jumps.
    let mut distinct = moduli.clone();
    distinct.dedup();
    levels.extend(
        distinct
            .iter()
            .map(|&m| m * (1.0 - 1e-12))
            .filter(|&y| y >= y0)
            .take(64),
    );
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    levels
        .into_iter()
        .map(|y| {
            let count = moduli.iter().take_while(|&&m| m > y).count();
            let measure = count as f64 * atom;
            let bound = tail_bound(&model, norm, y)?;
            Ok(CheckRecord::absolute("tail", measure, bound, 1e-12)
                .with("y", y)
                .with("norm", norm)
                .with("psi", psi.name()))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, make_measure_pair, MeasuredDualPair, Side};
    use crate::norms::{lp_norm, Exponent};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn unit_pair(factors: &[usize]) -> MeasuredDualPair {
        make_measure_pair(&make_group(factors).unwrap(), 1.0).unwrap()
    }

    fn one_from(lo: f64) -> PsiFunction {
        PsiFunction::constant(1.0, Support::from(lo).unwrap()).unwrap()
    }

    #[test]
    fn support_validation() {
        assert!(Support::half_open(0.5, 2.0).is_err());
        assert!(Support::half_open(2.0, 2.0).is_err());
        assert!(Support::half_open(3.0, 2.0).is_err());
        assert!(Support::singleton(2.0).unwrap().is_singleton());
        let s = Support::from(1.0).unwrap();
        assert!(s.contains(1e300) && !s.contains(f64::INFINITY) && !s.contains(0.9));
        assert_eq!(s.clip(2.0, 4.0), Some((2.0, 4.0)));
        assert_eq!(Support::closed(1.0, 2.0).unwrap().clip(3.0, 4.0), None);
        let s = Support::singleton(12.0).unwrap();
        assert_eq!(s.clip(2.0, 12.0 - 1e-14), Some((12.0, 12.0)));
        assert_eq!(s.clip(12.0 + 1e-14, 20.0), Some((12.0, 12.0)));
        assert_eq!(s.clip(2.0, 11.9), None);
    }

    #[test]
    fn weight_validation() {
        let s = Support::from(1.0).unwrap();
        assert!(matches!(
            PsiFunction::new("neg", s, |p| 2.0 - p),
            Err(Error::DegenerateWeight(_))
        ));
        assert!(PsiFunction::constant(0.0, s).is_err());
        // Infinite limit at the open end is admitted.
        let psi = PsiFunction::power(1.0, s).unwrap();
        assert_eq!(*psi.grid_values().last().unwrap(), f64::INFINITY);
        assert_eq!(psi.inf_on_grid(), 1.0);
        assert_eq!(psi.irregular_steps(), 0);
        let jumpy = PsiFunction::new("step", Support::closed(1.0, 3.0).unwrap(), |p| {
            if p < 2.0 {
                1.0
            } else {
                100.0
            }
        })
        .unwrap();
        assert_eq!(jumpy.irregular_steps(), 1);
    }

    #[test]
    fn gls_norm_of_constant() {
        let pair = unit_pair(&[6]);
        let f = GroupFunction::constant(&pair, Side::X, Complex64::new(3.0, 4.0)).unwrap();
        assert!((gls_norm(&f, &one_from(1.0)) - 5.0).abs() <= 1e-14);
        assert_eq!(
            gls_norm(&GroupFunction::zeros(&pair, Side::X), &one_from(1.0)),
            0.0
        );
    }

    #[test]
    fn singleton_weight_is_lebesgue_norm() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pair = make_measure_pair(&make_group(&[5, 4]).unwrap(), 3.0).unwrap();
        let f = GroupFunction::random(&pair, Side::X, &mut rng);
        for p0 in [1.0, 1.5, 2.0, 7.25] {
            let psi = PsiFunction::singleton(p0, 1.0).unwrap();
            assert_eq!(gls_norm(&f, &psi), lp_norm(&f, Exponent::new(p0).unwrap()));
        }
    }

    #[test]
    fn natural_function_normalizes_family() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let pair = unit_pair(&[8, 3]);
        let family: Vec<GroupFunction> = (0..3)
            .map(|_| GroupFunction::random(&pair, Side::X, &mut rng))
            .collect();
        let psi = natural_function(&family, Support::from(1.0).unwrap()).unwrap();
        for (p, v) in psi.grid().iter().zip(psi.grid_values()) {
            let direct = family
                .iter()
                .map(|f| lp_norm(f, Exponent::new(*p).unwrap()))
                .fold(0.0, f64::max);
            assert!((v - direct).abs() <= 1e-14 * direct);
        }
        let norms: Vec<f64> = family.iter().map(|f| gls_norm(f, &psi)).collect();
        assert!(norms.iter().all(|&n| n <= 1.0 + 1e-9));
        assert!(norms.iter().cloned().fold(0.0, f64::max) >= 1.0 - 1e-9);

        let single = natural_function(&family[..1], Support::from(1.0).unwrap()).unwrap();
        assert!((gls_norm(&family[0], &single) - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn natural_function_of_constants() {
        let pair = unit_pair(&[4]);
        let fam = [
            GroupFunction::constant(&pair, Side::X, c(-2.0)).unwrap(),
            GroupFunction::constant(&pair, Side::X, c(0.5)).unwrap(),
        ];
        let psi = natural_function(&fam, Support::from(1.0).unwrap()).unwrap();
        assert!(psi.grid_values().iter().all(|&v| (v - 2.0).abs() <= 1e-15));
    }

    #[test]
    fn natural_function_errors() {
        let pair = unit_pair(&[4]);
        let s = Support::from(1.0).unwrap();
        assert!(matches!(natural_function(&[], s), Err(Error::Domain(_))));
        let z = GroupFunction::zeros(&pair, Side::X);
        assert!(matches!(
            natural_function(&[z.clone(), z], s),
            Err(Error::DegenerateWeight(_))
        ));
    }

    #[test]
    fn fundamental_examples() {
        let one = one_from(1.0);
        assert!((fundamental_function(&one, 4.0).unwrap() - 4.0).abs() <= 1e-15);
        assert!((fundamental_function(&one, 1.0).unwrap() - 1.0).abs() <= 1e-15);
        // delta < 1: sup is the limit p -> inf, i.e. 1.
        assert_eq!(fundamental_function(&one, 0.25).unwrap(), 1.0);

        let lin = PsiFunction::power(1.0, Support::from(1.0).unwrap()).unwrap();
        let v = fundamental_function(&lin, (-2.0f64).exp()).unwrap();
        let exact = (-1.0f64).exp() / 2.0;
        assert!((v - exact).abs() <= 1e-6 * exact, "{v}");

        assert!(fundamental_function(&one, 0.0).is_err());
        assert!(fundamental_function(&one, -1.0).is_err());
    }

    #[test]
    fn truncated_examples() {
        let one = one_from(1.0);
        assert!((truncated_fundamental(&one, 16.0, 2.0, 4.0).unwrap() - 4.0).abs() <= 1e-15);
        let odd = PsiFunction::new("odd", Support::from(1.0).unwrap(), |p| {
            1.0 + (p - 3.0).powi(2)
        })
        .unwrap();
        assert!((truncated_fundamental(&odd, 1.0, 2.0, 5.0).unwrap() - 1.0).abs() <= 1e-12);
        assert!((truncated_fundamental(&odd, 1.0, 5.0, 6.0).unwrap() - 0.2).abs() <= 1e-15);

        let lin = PsiFunction::power(1.0, Support::from(2.0).unwrap()).unwrap();
        let v = truncated_fundamental(&lin, (-2.0f64).exp(), 2.0, f64::INFINITY).unwrap();
        assert!((v - (-1.0f64).exp() / 2.0).abs() <= 1e-15);

        let closed = PsiFunction::constant(1.0, Support::closed(1.0, 2.0).unwrap()).unwrap();
        assert!(truncated_fundamental(&closed, 2.0, 3.0, 4.0).is_err());
        assert_eq!(
            truncated_fundamental(&one, 3.0, 1.0, f64::INFINITY).unwrap(),
            fundamental_function(&one, 3.0).unwrap()
        );
    }

    #[test]
    fn tail_bound_analytic_case() {
        let model =
            TailModel::new(PsiFunction::exponential(1.0, Support::from(1.0).unwrap()).unwrap());
        // v(p) = p^2, v*(u) = u^2 / 4 for u >= 2.
        for u in [2.0, 3.0, 5.5] {
            assert!((model.v_star(u) - u * u / 4.0).abs() <= 1e-9 * u * u);
        }
        let b = tail_bound(&model, 1.0, (2.0f64).exp()).unwrap();
        assert!((b - (-1.0f64).exp()).abs() <= 1e-6);
        let norm = 0.37;
        let b2 = tail_bound(&model, norm, norm * (2.0f64).exp()).unwrap();
        assert!((b2 - (-1.0f64).exp()).abs() <= 1e-6);
        assert!(model.shape_check(&[1.0, 1.5, 2.0, 3.0, 4.0, 6.0]));
    }

    #[test]
    fn tail_bound_scale_and_monotonicity() {
        let model = TailModel::new(PsiFunction::power(0.5, Support::from(1.0).unwrap()).unwrap());
        for y in [3.0, 5.0, 10.0, 40.0] {
            let a = tail_bound(&model, 2.0, 2.0 * y).unwrap();
            let b = tail_bound(&model, 1.0, y).unwrap();
            assert!((a - b).abs() <= 1e-15);
        }
        let ys = [2.8, 3.0, 4.0, 8.0, 16.0, 100.0];
        let bs: Vec<f64> = ys
            .iter()
            .map(|&y| tail_bound(&model, 1.0, y).unwrap())
            .collect();
        assert!(bs.windows(2).all(|w| w[0] >= w[1]));
        assert!(matches!(tail_bound(&model, 1.0, 2.0), Err(Error::Range(_))));
    }

    #[test]
    fn tail_check_bounded_function_is_trivial() {
        let pair = unit_pair(&[16]);
        let f = GroupFunction::from_fn(&pair, Side::X, |x| c(1.0 + x.residues()[0] as f64 / 16.0))
            .unwrap();
        let recs = tail_check(&f, &one_from(1.0)).unwrap();
        assert!(!recs.is_empty());
        assert!(recs.iter().all(|r| r.lhs == 0.0 && r.pass));
    }

    #[test]
    fn tail_check_two_valued_function() {
        let pair = unit_pair(&[1024]);
        let f = GroupFunction::from_fn(&pair, Side::X, |x| {
            c(if x.residues()[0] < 8 { 40.0 } else { 1.0 })
        })
        .unwrap();
        let psi = natural_function(std::slice::from_ref(&f), Support::from(1.0).unwrap()).unwrap();
        let recs = tail_check(&f, &psi).unwrap();
        assert!(recs.iter().any(|r| r.lhs > 0.0));
        assert!(
            recs.iter().all(|r| r.pass),
            "{:?}",
            recs.iter().find(|r| !r.pass)
        );

        let loose = psi.scaled(0.5).unwrap();
        assert!((gls_norm(&f, &loose) - 2.0).abs() <= 1e-12);
        assert!(tail_check(&f, &loose).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn tail_check_requires_probability() {
        let pair = make_measure_pair(&make_group(&[4]).unwrap(), 2.0).unwrap();
        let f = GroupFunction::constant(&pair, Side::X, c(1.0)).unwrap();
        assert!(matches!(
            tail_check(&f, &one_from(1.0)),
            Err(Error::Domain(_))
        ));
    }
}
