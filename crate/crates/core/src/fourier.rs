//! Functions on `X` or `Y` and the Fourier transform between them.
//!
//! The forward transform is `f^(gamma) = sum_x f(x) gamma(-x) alpha({x})` and the
//! inverse is `f(x) = sum_gamma g(gamma) gamma(x) beta({gamma})`. Two routes are
//! provided: the character sums ([`fourier_forward`], [`fourier_inverse`]), kept
//! as the reference, and [`fourier_fast`], which runs one cyclic FFT per
//! invariant factor.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::{FftDirection, FftPlanner};

use crate::error::{domain, Result};
use crate::group::{FiniteAbelianGroup, GroupElement, MeasuredDualPair, Side};

/// A complex function on one side of a measured dual pair, indexed like the
/// group elements.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFunction {
    pair: MeasuredDualPair,
    side: Side,
    values: Vec<Complex64>,
}

impl GroupFunction {
    pub fn new(pair: &MeasuredDualPair, side: Side, values: Vec<Complex64>) -> Result<Self> {
        let n = pair.group().order();
        if values.len() != n {
            return domain(format!("expected {n} values, got {}", values.len()));
        }
        if let Some(i) = values
            .iter()
            .position(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return domain(format!("value at index {i} is not finite"));
        }
        Ok(GroupFunction {
            pair: pair.clone(),
            side,
            values,
        })
    }

    pub fn from_fn(
        pair: &MeasuredDualPair,
        side: Side,
        mut f: impl FnMut(&GroupElement) -> Complex64,
    ) -> Result<Self> {
        let values = pair.group().elements().map(|x| f(&x)).collect();
        Self::new(pair, side, values)
    }

    pub fn constant(pair: &MeasuredDualPair, side: Side, c: Complex64) -> Result<Self> {
        Self::new(pair, side, vec![c; pair.group().order()])
    }

    pub fn zeros(pair: &MeasuredDualPair, side: Side) -> Self {
        Self::constant(pair, side, Complex64::new(0.0, 0.0)).expect("zero is finite")
    }

    /// `c` at `at`, zero elsewhere.
    pub fn point_mass(
        pair: &MeasuredDualPair,
        side: Side,
        at: &GroupElement,
        c: Complex64,
    ) -> Result<Self> {
        let i = pair.group().index_of(at)?;
        let mut values = vec![Complex64::new(0.0, 0.0); pair.group().order()];
        values[i] = c;
        Self::new(pair, side, values)
    }

    /// Independent standard normal real and imaginary parts.
    pub fn random<R: Rng + ?Sized>(pair: &MeasuredDualPair, side: Side, rng: &mut R) -> Self {
        let values = (0..pair.group().order())
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        Self::new(pair, side, values).expect("normal samples are finite")
    }

    pub fn pair(&self) -> &MeasuredDualPair {
        &self.pair
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.pair.group()
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// Mass of one point on this function's side.
    pub fn atom(&self) -> f64 {
        self.pair.atom(self.side)
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        self.map(|z| z * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GroupFunction {
            pair: self.pair.clone(),
            side: self.side,
            values: self.values.iter().map(|&z| f(z)).collect(),
        }
    }

    /// `a * self + b * other`; both must live on the same side of the same pair.
    pub fn combine(&self, a: Complex64, other: &GroupFunction, b: Complex64) -> Result<Self> {
        if self.side != other.side || self.pair != other.pair {
            return domain("linear combination of functions on different spaces");
        }
        Ok(GroupFunction {
            pair: self.pair.clone(),
            side: self.side,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&x, &y)| a * x + b * y)
                .collect(),
        })
    }

    /// Largest pointwise distance to `other`.
    pub fn max_abs_diff(&self, other: &GroupFunction) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

fn expect_side(f: &GroupFunction, side: Side) -> Result<()> {
    if f.side != side {
        return domain(format!(
            "function lives on {:?}, expected {:?}",
            f.side, side
        ));
    }
    Ok(())
}

/// Forward transform by direct character sums. `O(N^2)`.
pub fn fourier_forward(f: &GroupFunction) -> Result<GroupFunction> {
    expect_side(f, Side::X)?;
    Ok(naive(f, true))
}

/// Inverse transform by direct character sums. `O(N^2)`.
pub fn fourier_inverse(g: &GroupFunction) -> Result<GroupFunction> {
    expect_side(g, Side::Y)?;
    Ok(naive(g, false))
}

fn naive(f: &GroupFunction, forward: bool) -> GroupFunction {
    let group = f.group();
    let factors = group.factors();
    let strides = group.strides();
    let atom = f.atom();
    let mut tables: Vec<Vec<Complex64>> = factors
        .iter()
        .map(|&n| vec![Complex64::default(); n])
        .collect();
    let mut out = Vec::with_capacity(group.order());
    for gamma in group.elements() {
        for (j, (&n, table)) in factors.iter().zip(tables.iter_mut()).enumerate() {
            let g = gamma.residues()[j];
            let roots = group.roots(j);
            for (x, t) in table.iter_mut().enumerate() {
                let w = roots[(g * x) % n];
                *t = if forward { w.conj() } else { w };
            }
        }
        out.push(contract(&f.values, &tables, strides, 0, 0) * atom);
    }
    GroupFunction {
        pair: f.pair.clone(),
        side: f.side.dual(),
        values: out,
    }
}

/// `sum_x values[x] * prod_j tables[j][x_j]` over the block starting at `offset`.
fn contract(
    values: &[Complex64],
    tables: &[Vec<Complex64>],
    strides: &[usize],
    axis: usize,
    offset: usize,
) -> Complex64 {
    let table = &tables[axis];
    if axis + 1 == tables.len() {
        let line = &values[offset..offset + table.len()];
        line.iter().zip(table).map(|(v, t)| v * t).sum()
    } else {
        let stride = strides[axis];
        table
            .iter()
            .enumerate()
            .map(|(x, t)| t * contract(values, tables, strides, axis + 1, offset + x * stride))
            .sum()
    }
}

/// Transform to the other side with per-axis FFTs: forward for a function on
/// `X`, inverse for a function on `Y`. Same atom weighting as the reference path.
pub fn fourier_fast(f: &GroupFunction) -> Result<GroupFunction> {
    let group = f.group();
    let direction = match f.side {
        Side::X => FftDirection::Forward,
        Side::Y => FftDirection::Inverse,
    };
    let mut data = f.values.clone();
    let mut planner = FftPlanner::<f64>::new();
    let n_total = group.order();
    for (&n, &stride) in group.factors().iter().zip(group.strides()) {
        let fft = planner.plan_fft(n, direction);
        let mut line = vec![Complex64::default(); n];
        let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
        let block = n * stride;
        for base in (0..n_total).step_by(block) {
            for inner in 0..stride {
                let start = base + inner;
                for (k, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + k * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (k, v) in line.iter().enumerate() {
                    data[start + k * stride] = *v;
                }
            }
        }
    }
    let atom = f.atom();
    for z in &mut data {
        *z *= atom;
    }
    Ok(GroupFunction {
        pair: f.pair.clone(),
        side: f.side.dual(),
        values: data,
    })
}
