//! Text form of weight functions: `kind[:param][@lo,hi]`.
//!
//! Kinds are `const:c`, `power:k`, `exp:r`, `singleton:p0` and `natural`
//! (built from a family supplied by the caller). `hi` may be `inf`.

use std::fmt;
use std::str::FromStr;

use fourier_gls::{natural_function, GroupFunction, PsiFunction, Support};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PsiKind {
    Const(f64),
    Power(f64),
    Exp(f64),
    Singleton(f64),
    Natural,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiSpec {
    pub kind: PsiKind,
    pub support: Option<(f64, f64)>,
}

fn num(s: &str) -> Result<f64, CliError> {
    match s.trim() {
        "inf" | "infinity" => Ok(f64::INFINITY),
        t => t
            .parse()
            .map_err(|e| CliError::config(format!("bad number {s:?} in weight spec: {e}"))),
    }
}

impl FromStr for PsiSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let (head, support) = match s.split_once('@') {
            Some((h, r)) => {
                let (lo, hi) = r
                    .split_once(',')
                    .ok_or_else(|| CliError::config(format!("support in {s:?} needs lo,hi")))?;
                (h, Some((num(lo)?, num(hi)?)))
            }
            None => (s, None),
        };
        let (name, param) = match head.split_once(':') {
            Some((n, p)) => (n.trim(), Some(num(p)?)),
            None => (head.trim(), None),
        };
        let need = |p: Option<f64>| {
            p.ok_or_else(|| CliError::config(format!("weight kind {name:?} needs a parameter")))
        };
        let kind = match name {
            "const" => PsiKind::Const(need(param)?),
            "power" => PsiKind::Power(need(param)?),
            "exp" => PsiKind::Exp(need(param)?),
            "singleton" => PsiKind::Singleton(need(param)?),
            "natural" if param.is_none() => PsiKind::Natural,
            _ => return Err(CliError::config(format!("unknown weight spec {s:?}"))),
        };
        if matches!(kind, PsiKind::Singleton(_)) && support.is_some() {
            return Err(CliError::config(
                "a singleton weight carries its own support",
            ));
        }
        Ok(PsiSpec { kind, support })
    }
}

impl fmt::Display for PsiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            PsiKind::Const(c) => write!(f, "const:{c}")?,
            PsiKind::Power(k) => write!(f, "power:{k}")?,
            PsiKind::Exp(r) => write!(f, "exp:{r}")?,
            PsiKind::Singleton(p) => write!(f, "singleton:{p}")?,
            PsiKind::Natural => f.write_str("natural")?,
        }
        if let Some((lo, hi)) = self.support {
            write!(f, "@{lo},{hi}")?;
        }
        Ok(())
    }
}

impl PsiSpec {
    pub fn is_natural(&self) -> bool {
        self.kind == PsiKind::Natural
    }

    /// The explicit support, or `[default_lo, inf)`.
    pub fn support(&self, default_lo: f64) -> Result<Support, CliError> {
        if let PsiKind::Singleton(p) = self.kind {
            return Ok(Support::singleton(p)?);
        }
        Ok(match self.support {
            Some((lo, hi)) => Support::half_open(lo, hi)?,
            None => Support::from(default_lo)?,
        })
    }

    /// Builds the weight; `family` is only read by `natural`.
    pub fn build(
        &self,
        default_lo: f64,
        family: Option<&[GroupFunction]>,
    ) -> Result<PsiFunction, CliError> {
        let s = self.support(default_lo)?;
        Ok(match self.kind {
            PsiKind::Const(c) => PsiFunction::constant(c, s)?,
            PsiKind::Power(k) => PsiFunction::power(k, s)?,
            PsiKind::Exp(r) => PsiFunction::exponential(r, s)?,
            PsiKind::Singleton(p) => PsiFunction::singleton(p, 1.0)?,
            PsiKind::Natural => {
                let fam = family
                    .ok_or_else(|| CliError::config("natural weight needs a function family"))?;
                natural_function(fam, s)?
            }
        })
    }
}
