//! Lebesgue (quasi-)norms against the Haar measure of a function's side, and
//! exponent arithmetic.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::fourier::GroupFunction;

/// An exponent in `(0, inf]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value > 0.0 {
            Ok(Exponent(value))
        } else {
            domain(format!("exponent must be positive, got {value}"))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `1/p` with `1/inf = 0`.
    pub fn recip(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Exponent::new(value)
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0)
        }
    }
}

impl<'de> Deserialize<'de> for Exponent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        let v = match Raw::deserialize(d)? {
            Raw::Num(v) => v,
            Raw::Text(s) => match s.as_str() {
                "inf" | "infinity" => f64::INFINITY,
                _ => s.parse().map_err(serde::de::Error::custom)?,
            },
        };
        Exponent::new(v).map_err(serde::de::Error::custom)
    }
}

/// Neumaier-compensated sum.
pub fn compensated_sum(terms: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `(atom * sum |v|^p)^(1/p)`, max modulus for `p = inf`.
///
/// Terms are scaled by the largest modulus first so large `p` cannot overflow.
pub(crate) fn lp_norm_raw(values: &[num_complex::Complex64], atom: f64, p: f64) -> f64 {
    let m = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    if p.is_infinite() {
        return m;
    }
    let s = if p == 2.0 {
        compensated_sum(values.iter().map(|z| {
            let r = z.norm() / m;
            r * r
        }))
    } else {
        compensated_sum(values.iter().map(|z| (z.norm() / m).powf(p)))
    };
    m * (atom * s).powf(1.0 / p)
}

/// Moduli prepared for many `L_p` evaluations of one vector: each norm costs
/// one `exp` per entry instead of a modulus and a `powf`.
#[derive(Debug, Clone)]
pub(crate) struct Moduli {
    max: f64,
    atom: f64,
    /// `ln(|v| / max)`, entries equal to zero dropped.
    logs: Vec<f64>,
}

impl Moduli {
    pub(crate) fn new(values: &[num_complex::Complex64], atom: f64) -> Self {
        let max = values.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let logs = if max == 0.0 {
            Vec::new()
        } else {
            values
                .iter()
                .map(|z| z.norm())
                .filter(|&r| r > 0.0)
                .map(|r| (r / max).ln())
                .collect()
        };
        Moduli { max, atom, logs }
    }

    pub(crate) fn norm(&self, p: f64) -> f64 {
        if self.max == 0.0 {
            return 0.0;
        }
        if p.is_infinite() {
            return self.max;
        }
        let s = compensated_sum(self.logs.iter().map(|l| (p * l).exp()));
        self.max * (self.atom * s).powf(1.0 / p)
    }
}

/// `|f|_p` against the measure of `f`'s side.
pub fn lp_norm(f: &GroupFunction, p: Exponent) -> f64 {
    lp_norm_raw(f.values(), f.atom(), p.value())
}

/// `p' = p / (p - 1)`, with `1' = inf` and `inf' = 1`.
pub fn conjugate_exponent(p: Exponent) -> Result<Exponent> {
    let v = p.value();
    if v < 1.0 {
        return domain(format!("conjugate exponent needs p >= 1, got {v}"));
    }
    Ok(if v == 1.0 {
        Exponent::INFINITY
    } else if v.is_infinite() {
        Exponent::ONE
    } else {
        Exponent(v / (v - 1.0))
    })
}

/// `t(q) = min(q', 2)` for `q >= 2`.
pub fn t_of_q(q: Exponent) -> Result<Exponent> {
    if q.value() < 2.0 {
        return domain(format!("t(q) needs q >= 2, got {q}"));
    }
    let c = conjugate_exponent(q)?;
    Ok(if c.value() < 2.0 { c } else { Exponent::TWO })
}

/// `s(p) = max(p', 2)` for `1 <= p <= 2`.
pub fn s_of_p(p: Exponent) -> Result<Exponent> {
    if !(1.0..=2.0).contains(&p.value()) {
        return domain(format!("s(p) needs 1 <= p <= 2, got {p}"));
    }
    let c = conjugate_exponent(p)?;
    Ok(if c.value() > 2.0 { c } else { Exponent::TWO })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{make_group, make_measure_pair, Side};
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    fn func(factors: &[usize], a: f64, values: Vec<Complex64>) -> GroupFunction {
        let pair = make_measure_pair(&make_group(factors).unwrap(), a).unwrap();
        GroupFunction::new(&pair, Side::X, values).unwrap()
    }

    #[test]
    fn exponent_validation() {
        assert!(Exponent::new(0.0).is_err());
        assert!(Exponent::new(-1.0).is_err());
        assert!(Exponent::new(f64::NAN).is_err());
        assert!(Exponent::new(0.25).is_ok());
        assert!(Exponent::new(f64::INFINITY).unwrap().is_infinite());
        assert_eq!(Exponent::INFINITY.recip(), 0.0);
        assert_eq!(Exponent::INFINITY.to_string(), "inf");
    }

    #[test]
    fn lp_norm_examples() {
        let c = Complex64::new(-2.0, 1.5);
        let f = func(&[5, 3], 1.0, vec![c; 15]);
        for p in [0.5, 1.0, 2.0, 3.7, f64::INFINITY] {
            assert!((lp_norm(&f, e(p)) - 2.5).abs() <= 1e-15);
        }
        let f = func(
            &[2],
            1.0,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        );
        assert!((lp_norm(&f, Exponent::TWO) - 0.5f64.sqrt()).abs() <= 1e-15);
        let f = func(
            &[2],
            1.0,
            vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, -4.0)],
        );
        assert_eq!(lp_norm(&f, Exponent::INFINITY), 4.0);
        let z = func(&[3], 2.0, vec![Complex64::new(0.0, 0.0); 3]);
        assert_eq!(lp_norm(&z, e(1.5)), 0.0);
    }

    #[test]
    fn large_exponent_does_not_overflow() {
        let f = func(
            &[3],
            1.0,
            vec![
                Complex64::new(1e200, 0.0),
                Complex64::new(0.5e200, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        let v = lp_norm(&f, e(64.0));
        assert!(v.is_finite() && v > 0.9e200 && v <= 1e200);
    }

    #[test]
    fn large_p_approaches_sup() {
        let f = func(
            &[6],
            1.0,
            (0..6).map(|k| Complex64::new(k as f64, 1.0)).collect(),
        );
        let sup = lp_norm(&f, Exponent::INFINITY);
        let near = lp_norm(&f, e(1024.0));
        assert!((near - sup).abs() <= 0.01 * sup);
    }

    #[test]
    fn prepared_moduli_agree() {
        let f = func(
            &[7],
            2.0,
            (0..7)
                .map(|k| Complex64::new(k as f64 - 3.0, 0.5 * k as f64))
                .collect(),
        );
        let m = Moduli::new(f.values(), f.atom());
        for p in [0.3, 1.0, 2.0, 5.5, 300.0, f64::INFINITY] {
            let direct = lp_norm(&f, e(p));
            assert!((m.norm(p) - direct).abs() <= 1e-14 * direct, "{p}");
        }
        let z = func(&[3], 1.0, vec![Complex64::new(0.0, 0.0); 3]);
        assert_eq!(Moduli::new(z.values(), 1.0).norm(2.0), 0.0);
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(conjugate_exponent(e(2.0)).unwrap(), e(2.0));
        assert!((conjugate_exponent(e(1.5)).unwrap().value() - 3.0).abs() <= 1e-15);
        assert_eq!(conjugate_exponent(e(1.0)).unwrap(), Exponent::INFINITY);
        assert_eq!(
            conjugate_exponent(Exponent::INFINITY).unwrap(),
            Exponent::ONE
        );
        assert!(conjugate_exponent(e(0.5)).is_err());
    }

    #[test]
    fn t_and_s_examples() {
        assert_eq!(t_of_q(e(2.0)).unwrap(), e(2.0));
        assert!((t_of_q(e(3.0)).unwrap().value() - 1.5).abs() <= 1e-15);
        assert_eq!(t_of_q(Exponent::INFINITY).unwrap(), Exponent::ONE);
        assert!(t_of_q(e(1.9)).is_err());

        assert_eq!(s_of_p(e(2.0)).unwrap(), e(2.0));
        assert!((s_of_p(e(1.5)).unwrap().value() - 3.0).abs() <= 1e-15);
        assert_eq!(s_of_p(e(1.0)).unwrap(), Exponent::INFINITY);
        assert!(s_of_p(e(2.5)).is_err());
        assert!(s_of_p(e(0.9)).is_err());
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(compensated_sum(terms), 2.0);
    }

    fn values_strategy() -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 12)
            .prop_map(|v| v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect())
    }

    proptest! {
        #[test]
        fn homogeneity(values in values_strategy(), p in 0.2f64..20.0,
                       cr in -5.0f64..5.0, ci in -5.0f64..5.0) {
            let f = func(&[4, 3], 2.5, values);
            let c = Complex64::new(cr, ci);
            let lhs = lp_norm(&f.scaled(c), e(p));
            let rhs = c.norm() * lp_norm(&f, e(p));
            prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
        }

        #[test]
        fn monotone_in_p_on_probability_space(values in values_strategy(),
                                              p1 in 0.2f64..30.0, dp in 0.0f64..30.0) {
            let f = func(&[12], 1.0, values);
            prop_assert!(lp_norm(&f, e(p1)) <= lp_norm(&f, e(p1 + dp)) + 1e-12);
        }

        #[test]
        fn conjugation_is_an_involution(p in 1.0f64..1e6) {
            let back = conjugate_exponent(conjugate_exponent(e(p)).unwrap()).unwrap();
            prop_assert!((back.value() - p).abs() <= 1e-9 * p);
        }
    }
}
