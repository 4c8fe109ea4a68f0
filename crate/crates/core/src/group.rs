//! Finite abelian groups in invariant-factor form, their characters, and the
//! dual pair of Haar measures.
//!
//! A group `Z_{n_1} x ... x Z_{n_k}` is self-dual: a character is labelled by a
//! tuple `gamma` of the same shape and acts as
//! `x -> exp(2 pi i sum_j gamma_j x_j / n_j)`. Elements are stored in row-major
//! order, the last factor varying fastest.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Largest group order accepted by [`make_group`].
pub const DEFAULT_MAX_ORDER: usize = 1 << 20;

/// Which side of the duality a function lives on: the group `X` or its dual `Y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn dual(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }
}

/// An element of the group (or of its dual) as a tuple of residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    residues: Vec<usize>,
}

impl GroupElement {
    /// Wraps raw residues. Range checks happen when the element is used with a group.
    pub fn new(residues: Vec<usize>) -> Self {
        GroupElement { residues }
    }

    pub fn residues(&self) -> &[usize] {
        &self.residues
    }
}

impl From<Vec<usize>> for GroupElement {
    fn from(residues: Vec<usize>) -> Self {
        GroupElement::new(residues)
    }
}

struct GroupData {
    factors: Vec<usize>,
    order: usize,
    strides: Vec<usize>,
    roots: Vec<Vec<Complex64>>,
}

/// `Z_{n_1} x ... x Z_{n_k}` with every `n_j >= 2`.
///
/// Cheap to clone; the root-of-unity tables are shared.
#[derive(Clone)]
pub struct FiniteAbelianGroup {
    inner: Arc<GroupData>,
}

impl fmt::Debug for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteAbelianGroup")
            .field("factors", &self.inner.factors)
            .field("order", &self.inner.order)
            .finish()
    }
}

impl PartialEq for FiniteAbelianGroup {
    fn eq(&self, other: &Self) -> bool {
        self.inner.factors == other.inner.factors
    }
}

/// Builds a group from its invariant factors with the default order limit.
pub fn make_group(factors: &[usize]) -> Result<FiniteAbelianGroup> {
    FiniteAbelianGroup::with_max_order(factors, DEFAULT_MAX_ORDER)
}

/// `exp(2 pi i k / n)`, exact at multiples of a quarter turn.
pub(crate) fn unit_root(k: usize, n: usize) -> Complex64 {
    let k = k % n;
    if (4 * k).is_multiple_of(n) {
        return match 4 * k / n {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
    }
    let (s, c) = (TAU * k as f64 / n as f64).sin_cos();
    Complex64::new(c, s)
}

impl FiniteAbelianGroup {
    pub fn with_max_order(factors: &[usize], max_order: usize) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::EmptyFactors);
        }
        let mut order = 1usize;
        for (index, &factor) in factors.iter().enumerate() {
            if factor < 2 {
                return Err(Error::FactorTooSmall { index, factor });
            }
            order = match order.checked_mul(factor) {
                Some(n) if n <= max_order => n,
                _ => {
                    return Err(Error::OrderOverflow {
                        index,
                        factor,
                        limit: max_order,
                    })
                }
            };
        }
        let mut strides = vec![1usize; factors.len()];
        for j in (0..factors.len().saturating_sub(1)).rev() {
            strides[j] = strides[j + 1] * factors[j + 1];
        }
        let roots = factors
            .iter()
            .map(|&n| (0..n).map(|k| unit_root(k, n)).collect())
            .collect();
        Ok(FiniteAbelianGroup {
            inner: Arc::new(GroupData {
                factors: factors.to_vec(),
                order,
                strides,
                roots,
            }),
        })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        make_group(&[n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.inner.factors
    }

    pub fn order(&self) -> usize {
        self.inner.order
    }

    pub fn rank(&self) -> usize {
        self.inner.factors.len()
    }

    pub(crate) fn strides(&self) -> &[usize] {
        &self.inner.strides
    }

    /// The table `exp(2 pi i k / n_axis)`, `k = 0..n_axis`.
    pub(crate) fn roots(&self, axis: usize) -> &[Complex64] {
        &self.inner.roots[axis]
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        x.residues.len() == self.rank()
            && x.residues.iter().zip(self.factors()).all(|(&r, &n)| r < n)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if x.residues.len() != self.rank() {
            return domain(format!(
                "element {:?} has {} residues, group has rank {}",
                x.residues,
                x.residues.len(),
                self.rank()
            ));
        }
        for (j, (&r, &n)) in x.residues.iter().zip(self.factors()).enumerate() {
            if r >= n {
                return domain(format!("residue {r} at position {j} is not below {n}"));
            }
        }
        Ok(())
    }

    /// Validated element from residues.
    pub fn element(&self, residues: &[usize]) -> Result<GroupElement> {
        let x = GroupElement::new(residues.to_vec());
        self.check(&x)?;
        Ok(x)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement::new(vec![0; self.rank()])
    }

    pub fn index_of(&self, x: &GroupElement) -> Result<usize> {
        self.check(x)?;
        Ok(x.residues
            .iter()
            .zip(self.strides())
            .map(|(r, s)| r * s)
            .sum())
    }

    pub fn element_at(&self, index: usize) -> Result<GroupElement> {
        if index >= self.order() {
            return domain(format!(
                "index {index} out of range for order {}",
                self.order()
            ));
        }
        let residues = self
            .factors()
            .iter()
            .zip(self.strides())
            .map(|(&n, &s)| (index / s) % n)
            .collect();
        Ok(GroupElement::new(residues))
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        (0..self.order()).map(move |i| self.element_at(i).expect("index in range"))
    }

    pub fn add(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(GroupElement::new(
            x.residues
                .iter()
                .zip(&y.residues)
                .zip(self.factors())
                .map(|((a, b), n)| (a + b) % n)
                .collect(),
        ))
    }

    /// Componentwise `(n_j - x_j) mod n_j`.
    pub fn negate(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(GroupElement::new(
            x.residues
                .iter()
                .zip(self.factors())
                .map(|(&r, &n)| (n - r) % n)
                .collect(),
        ))
    }

    /// `gamma(x) = exp(2 pi i sum_j gamma_j x_j / n_j)`.
    pub fn character(&self, gamma: &GroupElement, x: &GroupElement) -> Result<Complex64> {
        self.check(gamma)?;
        self.check(x)?;
        Ok(self.character_unchecked(&gamma.residues, &x.residues))
    }

    pub(crate) fn character_unchecked(&self, gamma: &[usize], x: &[usize]) -> Complex64 {
        gamma
            .iter()
            .zip(x)
            .zip(self.factors())
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (j, ((&g, &x), &n))| {
                acc * self.roots(j)[(g * x) % n]
            })
    }
}

/// The Haar measures `alpha` on `X` and `beta` on `Y`, scaled so that the
/// inversion formula holds: every point of `X` weighs `A / N`, every point of
/// `Y` weighs `1 / A`, hence `beta(Y) = N / A`.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasuredDualPair {
    group: FiniteAbelianGroup,
    mass: f64,
    x_atom: f64,
    y_atom: f64,
    dual_mass: f64,
}

pub fn make_measure_pair(group: &FiniteAbelianGroup, mass: f64) -> Result<MeasuredDualPair> {
    if !(mass.is_finite() && mass > 0.0) {
        return domain(format!(
            "total mass A must be positive and finite, got {mass}"
        ));
    }
    let n = group.order() as f64;
    Ok(MeasuredDualPair {
        group: group.clone(),
        mass,
        x_atom: mass / n,
        y_atom: 1.0 / mass,
        dual_mass: n / mass,
    })
}

impl MeasuredDualPair {
    /// Compact model: `alpha(X) = 1`.
    pub fn normalized(group: &FiniteAbelianGroup) -> Self {
        make_measure_pair(group, 1.0).expect("unit mass is valid")
    }

    /// Discrete model: counting measure on `X`, so `alpha(X) = N` and `beta(Y) = 1`.
    pub fn counting(group: &FiniteAbelianGroup) -> Self {
        make_measure_pair(group, group.order() as f64).expect("order is a valid mass")
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    /// `A = alpha(X)`.
    pub fn mass_x(&self) -> f64 {
        self.mass
    }

    /// `B = beta(Y)`.
    pub fn mass_y(&self) -> f64 {
        self.dual_mass
    }

    pub fn x_atom(&self) -> f64 {
        self.x_atom
    }

    pub fn y_atom(&self) -> f64 {
        self.y_atom
    }

    pub fn atom(&self, side: Side) -> f64 {
        match side {
            Side::X => self.x_atom,
            Side::Y => self.y_atom,
        }
    }

    pub fn total_mass(&self, side: Side) -> f64 {
        match side {
            Side::X => self.mass,
            Side::Y => self.dual_mass,
        }
    }
}
