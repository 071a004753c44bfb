//! Exact arithmetic and lattice primitives: extended integers, rationals,
//! lattice points and integral boxes.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational number in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// An exact integer or one of the two infinities.
///
/// The derived order is the intended total order: `NegInf < Finite(_) < PosInf`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExtInt {
    NegInf,
    Finite(BigInt),
    PosInf,
}

impl ExtInt {
    pub fn finite(v: impl Into<BigInt>) -> Self {
        ExtInt::Finite(v.into())
    }

    pub fn zero() -> Self {
        ExtInt::Finite(BigInt::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtInt::Finite(_))
    }

    pub fn as_finite(&self) -> Option<&BigInt> {
        match self {
            ExtInt::Finite(v) => Some(v),
            _ => None,
        }
    }

    /// Sum with infinity absorption. `+inf + -inf` is an error.
    pub fn checked_add(&self, other: &ExtInt) -> Result<ExtInt> {
        use ExtInt::*;
        match (self, other) {
            (PosInf, NegInf) | (NegInf, PosInf) => Err(Error::OppositeInfinities),
            (PosInf, _) | (_, PosInf) => Ok(PosInf),
            (NegInf, _) | (_, NegInf) => Ok(NegInf),
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
        }
    }

    pub fn checked_sub(&self, other: &ExtInt) -> Result<ExtInt> {
        self.checked_add(&-other.clone())
    }

    /// Exact comparison against a rational value.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        match self {
            ExtInt::NegInf => Ordering::Less,
            ExtInt::PosInf => Ordering::Greater,
            ExtInt::Finite(v) => Rational::from_integer(v.clone()).cmp(r),
        }
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.as_finite().map(|v| Rational::from_integer(v.clone()))
    }
}

/// `a + b` over extended integers.
pub fn ext_add(a: &ExtInt, b: &ExtInt) -> Result<ExtInt> {
    a.checked_add(b)
}

impl Neg for ExtInt {
    type Output = ExtInt;
    fn neg(self) -> ExtInt {
        match self {
            ExtInt::NegInf => ExtInt::PosInf,
            ExtInt::PosInf => ExtInt::NegInf,
            ExtInt::Finite(v) => ExtInt::Finite(-v),
        }
    }
}

impl From<BigInt> for ExtInt {
    fn from(v: BigInt) -> Self {
        ExtInt::Finite(v)
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        ExtInt::Finite(BigInt::from(v))
    }
}

impl fmt::Display for ExtInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtInt::NegInf => f.write_str("-inf"),
            ExtInt::PosInf => f.write_str("+inf"),
            ExtInt::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// Largest integer not above `r`.
pub fn floor(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Smallest integer not below `r`.
pub fn ceil(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

pub fn int_to_rat(v: &BigInt) -> Rational {
    Rational::from_integer(v.clone())
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A point of Z^n.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticePoint(pub Vec<BigInt>);

impl LatticePoint {
    pub fn new(coords: Vec<BigInt>) -> Self {
        LatticePoint(coords)
    }

    pub fn from_i64(coords: &[i64]) -> Self {
        LatticePoint(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(n: usize) -> Self {
        LatticePoint(vec![BigInt::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn add(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatticePoint) -> LatticePoint {
        LatticePoint(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Adds a displacement given as small integers.
    pub fn offset(&self, d: &[i8]) -> LatticePoint {
        LatticePoint(self.0.iter().zip(d).map(|(a, &b)| a + BigInt::from(b)).collect())
    }

    pub fn dot(&self, other: &LatticePoint) -> BigInt {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn dot_rational(&self, p: &[Rational]) -> Rational {
        self.0
            .iter()
            .zip(p)
            .map(|(a, b)| b * int_to_rat(a))
            .fold(Rational::zero(), |acc, t| acc + t)
    }

    pub fn to_rational(&self) -> Vec<Rational> {
        self.0.iter().map(int_to_rat).collect()
    }

    /// Sup-norm distance.
    pub fn dist_inf(&self, other: &LatticePoint) -> BigInt {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl fmt::Display for LatticePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

/// `[lower, upper]_R` with integer or infinite endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegralBox {
    lower: Vec<ExtInt>,
    upper: Vec<ExtInt>,
}

impl IntegralBox {
    pub fn new(lower: Vec<ExtInt>, upper: Vec<ExtInt>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        for (j, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if *lo == ExtInt::PosInf || *hi == ExtInt::NegInf || lo > hi {
                return Err(Error::InvalidBox(format!("coordinate {}: [{lo}, {hi}]", j + 1)));
            }
        }
        Ok(IntegralBox { lower, upper })
    }

    /// The whole space R^n.
    pub fn unbounded(n: usize) -> Self {
        IntegralBox {
            lower: vec![ExtInt::NegInf; n],
            upper: vec![ExtInt::PosInf; n],
        }
    }

    /// Finite box from integer bounds.
    pub fn from_bounds(lower: &[i64], upper: &[i64]) -> Result<Self> {
        Self::new(
            lower.iter().map(|&v| ExtInt::from(v)).collect(),
            upper.iter().map(|&v| ExtInt::from(v)).collect(),
        )
    }

    /// The box `[floor(p), ceil(p)]`.
    pub fn rounding_box(p: &[Rational]) -> Self {
        IntegralBox {
            lower: p.iter().map(|r| ExtInt::Finite(floor(r))).collect(),
            upper: p.iter().map(|r| ExtInt::Finite(ceil(r))).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[ExtInt] {
        &self.lower
    }

    pub fn upper(&self) -> &[ExtInt] {
        &self.upper
    }

    pub fn is_bounded(&self) -> bool {
        self.lower.iter().chain(&self.upper).all(ExtInt::is_finite)
    }

    pub fn contains(&self, p: &[Rational]) -> Result<bool> {
        if p.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: p.len(),
            });
        }
        Ok(p.iter()
            .zip(&self.lower)
            .zip(&self.upper)
            .all(|((v, lo), hi)| lo.cmp_rational(v) != Ordering::Greater && hi.cmp_rational(v) != Ordering::Less))
    }

    pub fn contains_point(&self, p: &LatticePoint) -> Result<bool> {
        self.contains(&p.to_rational())
    }

    /// Intersection, or `None` when empty.
    pub fn intersect(&self, other: &IntegralBox) -> Option<IntegralBox> {
        let lower: Vec<ExtInt> = self
            .lower
            .iter()
            .zip(&other.lower)
            .map(|(a, b)| a.clone().max(b.clone()))
            .collect();
        let upper: Vec<ExtInt> = self
            .upper
            .iter()
            .zip(&other.upper)
            .map(|(a, b)| a.clone().min(b.clone()))
            .collect();
        IntegralBox::new(lower, upper).ok()
    }

    /// All integer points of a bounded box, in lexicographic order.
    pub fn lattice_points(&self) -> Option<Vec<LatticePoint>> {
        let lo: Vec<BigInt> = self
            .lower
            .iter()
            .map(|v| v.as_finite().cloned())
            .collect::<Option<_>>()?;
        let hi: Vec<BigInt> = self
            .upper
            .iter()
            .map(|v| v.as_finite().cloned())
            .collect::<Option<_>>()?;
        Some(grid(&lo, &hi))
    }
}

/// `boxContains`: whether `p` lies in `b`.
pub fn box_contains(b: &IntegralBox, p: &[Rational]) -> Result<bool> {
    b.contains(p)
}

/// Integer grid `lo..=hi` in lexicographic order.
pub fn grid(lo: &[BigInt], hi: &[BigInt]) -> Vec<LatticePoint> {
    let mut out = vec![Vec::<BigInt>::new()];
    for (l, h) in lo.iter().zip(hi) {
        let mut next = Vec::new();
        for prefix in &out {
            let mut v = l.clone();
            while &v <= h {
                let mut q = prefix.clone();
                q.push(v.clone());
                next.push(q);
                v += 1;
            }
        }
        out = next;
    }
    out.into_iter().map(LatticePoint).collect()
}

/// All displacement vectors in {-1,0,+1}^n, lexicographic, including zero.
pub fn unit_displacements(n: usize) -> Vec<Vec<i8>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(out.len() * 3);
        for prefix in &out {
            for d in [-1i8, 0, 1] {
                let mut q: Vec<i8> = prefix.clone();
                q.push(d);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub(crate) fn rational_is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}
