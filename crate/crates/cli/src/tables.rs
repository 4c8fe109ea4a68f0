//! CSV tables: witness ratios along `Z_N` and fundamental-function values.
//! Numbers are written with 17 significant digits and `.` as decimal mark.

use std::fmt::Write as _;
use std::path::Path;

use fourier_gls::hy::{witness_ratio, Witness};
use fourier_gls::{
    k_const, make_measure_pair, truncated_fundamental, Exponent, FiniteAbelianGroup,
};

use crate::psi_spec::PsiSpec;
use crate::CliError;

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanLine {
    pub n: usize,
    pub p: f64,
    pub q: f64,
    pub mass: f64,
    pub ratio: f64,
    pub k: f64,
}

/// Witness ratio on every cyclic group `Z_N`, `n_min <= N <= n_max`.
///
/// The witness is the one with the fastest growth in `N`, so outside `Q` the
/// ratios blow up; inside `Q` they stay at or below `K`.
pub fn scan_table(
    p: Exponent,
    q: Exponent,
    mass: f64,
    n_min: usize,
    n_max: usize,
) -> Result<Vec<ScanLine>, CliError> {
    let lo = n_min.max(2);
    if lo > n_max {
        return Err(CliError::config(format!(
            "empty group family {n_min}..={n_max}"
        )));
    }
    let k = k_const(p, q, mass)?;
    let w = Witness::fastest(p, q);
    (lo..=n_max)
        .map(|n| {
            let pair = make_measure_pair(&FiniteAbelianGroup::cyclic(n)?, mass)?;
            Ok(ScanLine {
                n,
                p: p.value(),
                q: q.value(),
                mass,
                ratio: witness_ratio(&pair, p, q, w)?,
                k,
            })
        })
        .collect()
}

pub fn scan_csv(rows: &[ScanLine]) -> String {
    let mut out = String::from("N,p,q,A,ratio,K_or_inf\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.n,
            fmt_num(r.p),
            fmt_num(r.q),
            fmt_num(r.mass),
            fmt_num(r.ratio),
            fmt_num(r.k)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalLine {
    pub delta: f64,
    pub s1: f64,
    pub s2: f64,
    pub phi: f64,
}

/// `phi(delta)` restricted to `range` (the whole support by default), rows in
/// ascending `delta`.
pub fn fundamental_table(
    spec: &PsiSpec,
    deltas: &[f64],
    range: Option<(f64, f64)>,
) -> Result<Vec<FundamentalLine>, CliError> {
    if deltas.is_empty() {
        return Err(CliError::config("empty delta grid"));
    }
    let psi = spec.build(1.0, None)?;
    let (s1, s2) = range.unwrap_or((psi.support().lo(), psi.support().hi()));
    let mut deltas = deltas.to_vec();
    deltas.sort_by(f64::total_cmp);
    deltas
        .into_iter()
        .map(|delta| {
            Ok(FundamentalLine {
                delta,
                s1,
                s2,
                phi: truncated_fundamental(&psi, delta, s1, s2)?,
            })
        })
        .collect()
}

pub fn fundamental_csv(rows: &[FundamentalLine]) -> String {
    let mut out = String::from("delta,s1,s2,phi\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_num(r.delta),
            fmt_num(r.s1),
            fmt_num(r.s2),
            fmt_num(r.phi)
        );
    }
    out
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(v: f64) -> Exponent {
        Exponent::new(v).unwrap()
    }

    #[test]
    fn number_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2f64.sqrt(), 1e-300, 12345.678] {
            assert_eq!(fmt_num(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(fmt_num(f64::INFINITY), "inf");
    }

    #[test]
    fn scan_outside_and_inside() {
        let rows = scan_table(e(1.0), e(2.0), 1.0, 2, 64).unwrap();
        assert_eq!(rows.len(), 63);
        for r in &rows {
            assert!((r.ratio - (r.n as f64).sqrt()).abs() <= 1e-12 * r.ratio);
            assert_eq!(r.k, f64::INFINITY);
        }
        let rows = scan_table(e(2.0), e(2.0), 1.0, 2, 16).unwrap();
        assert!(rows
            .iter()
            .all(|r| (r.ratio - 1.0).abs() <= 1e-12 && r.k == 1.0));
        assert!(scan_table(e(2.0), e(2.0), 1.0, 9, 8).is_err());
        let csv = scan_csv(&rows[..1]);
        assert!(csv.starts_with("N,p,q,A,ratio,K_or_inf\n2,2.0000000000000000e0,"));
    }

    #[test]
    fn fundamental_rows() {
        let spec: PsiSpec = "const:1".parse().unwrap();
        let rows = fundamental_table(&spec, &[4.0, 1.0, 2.0], None).unwrap();
        let phis: Vec<f64> = rows.iter().map(|r| r.phi).collect();
        assert_eq!(phis, vec![1.0, 2.0, 4.0]);
        assert!(fundamental_table(&spec, &[], None).is_err());
        assert!(fundamental_table(&spec, &[0.0], None).is_err());
        let rows = fundamental_table(&spec, &[16.0], Some((2.0, 4.0))).unwrap();
        assert_eq!(rows[0].phi, 4.0);
    }
}
