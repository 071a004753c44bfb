use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{ExtInt, IntegralBox, LatticePoint, Rational};
use crate::error::{Error, Result};

/// Integer-valued function on Z^n with a finite effective domain.
///
/// Points missing from the table take the value `+inf` (or `-inf` when the
/// table is read as a concave function).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableFunction {
    dim: usize,
    entries: BTreeMap<LatticePoint, BigInt>,
}

impl TableFunction {
    pub fn new(dim: usize, entries: BTreeMap<LatticePoint, BigInt>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidFunction("empty effective domain".into()));
        }
        if dim == 0 {
            return Err(Error::InvalidFunction("dimension must be at least 1".into()));
        }
        if let Some(bad) = entries.keys().find(|k| k.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        Ok(TableFunction { dim, entries })
    }

    pub fn from_pairs<I>(dim: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticePoint, BigInt)>,
    {
        Self::new(dim, pairs.into_iter().collect())
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(dim: usize, pairs: &[(&[i64], i64)]) -> Result<Self> {
        Self::from_pairs(
            dim,
            pairs.iter().map(|(p, v)| (LatticePoint::from_i64(p), BigInt::from(*v))),
        )
    }

    /// Tabulates `g` on the integer points of a bounded box, skipping points
    /// where `g` returns `None`.
    pub fn tabulate<F>(bx: &IntegralBox, mut g: F) -> Result<Self>
    where
        F: FnMut(&LatticePoint) -> Option<BigInt>,
    {
        let pts = bx
            .lattice_points()
            .ok_or_else(|| Error::InvalidBox("tabulation needs a bounded box".into()))?;
        let entries = pts.into_iter().filter_map(|x| g(&x).map(|v| (x, v))).collect();
        Self::new(bx.dim(), entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, x: &LatticePoint) -> Option<&BigInt> {
        self.entries.get(x)
    }

    pub fn contains(&self, x: &LatticePoint) -> bool {
        self.entries.contains_key(x)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LatticePoint, &BigInt)> {
        self.entries.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &LatticePoint> {
        self.entries.keys()
    }

    pub fn entries(&self) -> &BTreeMap<LatticePoint, BigInt> {
        &self.entries
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }

    /// `f(x)` with `+inf` outside the effective domain.
    pub fn evaluate(&self, x: &LatticePoint) -> Result<ExtInt> {
        self.check_dim(x.dim())?;
        Ok(self
            .entries
            .get(x)
            .map_or(ExtInt::PosInf, |v| ExtInt::Finite(v.clone())))
    }

    /// Same table read as a concave function (`-inf` outside the domain).
    pub fn evaluate_concave(&self, x: &LatticePoint) -> Result<ExtInt> {
        self.check_dim(x.dim())?;
        Ok(self
            .entries
            .get(x)
            .map_or(ExtInt::NegInf, |v| ExtInt::Finite(v.clone())))
    }

    /// Integral conjugate `max { <p,x> - f(x) : x in dom f }`.
    pub fn conjugate(&self, p: &LatticePoint) -> Result<BigInt> {
        self.check_dim(p.dim())?;
        Ok(self
            .entries
            .iter()
            .map(|(x, v)| p.dot(x) - v)
            .max()
            .expect("nonempty domain"))
    }

    /// Points attaining the conjugate at `p`.
    pub fn conjugate_argmax(&self, p: &LatticePoint) -> Result<(BigInt, Vec<LatticePoint>)> {
        let best = self.conjugate(p)?;
        let arg = self
            .entries
            .iter()
            .filter(|(x, v)| p.dot(x) - *v == best)
            .map(|(x, _)| x.clone())
            .collect();
        Ok((best, arg))
    }

    /// Conjugate at a rational vector.
    pub fn conjugate_rational(&self, p: &[Rational]) -> Result<Rational> {
        self.check_dim(p.len())?;
        Ok(self
            .entries
            .iter()
            .map(|(x, v)| x.dot_rational(p) - Rational::from_integer(v.clone()))
            .max()
            .expect("nonempty domain"))
    }

    /// Concave conjugate `min { <p,x> - g(x) : x in dom g }` of the table read
    /// as a concave function.
    pub fn concave_conjugate(&self, p: &LatticePoint) -> Result<BigInt> {
        self.check_dim(p.dim())?;
        Ok(self
            .entries
            .iter()
            .map(|(x, v)| p.dot(x) - v)
            .min()
            .expect("nonempty domain"))
    }

    pub fn min_value(&self) -> &BigInt {
        self.entries.values().min().expect("nonempty domain")
    }

    pub fn max_value(&self) -> &BigInt {
        self.entries.values().max().expect("nonempty domain")
    }

    /// `max f - min f` over the domain.
    pub fn value_spread(&self) -> BigInt {
        self.max_value() - self.min_value()
    }

    /// Smallest box containing the effective domain.
    pub fn bounding_box(&self) -> IntegralBox {
        let mut lo: Vec<BigInt> = self.entries.keys().next().unwrap().0.clone();
        let mut hi = lo.clone();
        for x in self.entries.keys() {
            for j in 0..self.dim {
                if x.0[j] < lo[j] {
                    lo[j] = x.0[j].clone();
                }
                if x.0[j] > hi[j] {
                    hi[j] = x.0[j].clone();
                }
            }
        }
        IntegralBox::new(
            lo.into_iter().map(ExtInt::Finite).collect(),
            hi.into_iter().map(ExtInt::Finite).collect(),
        )
        .expect("lo <= hi by construction")
    }

    /// Pointwise sum with another function given as a closure returning
    /// `None` outside its domain.
    pub fn add_fn<F>(&self, mut g: F) -> Result<TableFunction>
    where
        F: FnMut(&LatticePoint) -> Option<BigInt>,
    {
        let entries: BTreeMap<_, _> = self
            .entries
            .iter()
            .filter_map(|(x, v)| g(x).map(|w| (x.clone(), v + w)))
            .collect();
        if entries.is_empty() {
            return Err(Error::EmptyIntersection);
        }
        Self::new(self.dim, entries)
    }

    /// `x -> f(x) + <c,x>`.
    pub fn add_linear(&self, c: &LatticePoint) -> TableFunction {
        TableFunction {
            dim: self.dim,
            entries: self.entries.iter().map(|(x, v)| (x.clone(), v + c.dot(x))).collect(),
        }
    }

    pub fn negated(&self) -> TableFunction {
        TableFunction {
            dim: self.dim,
            entries: self.entries.iter().map(|(x, v)| (x.clone(), -v)).collect(),
        }
    }

    /// Table of the integral conjugate over the integer points of a bounded box.
    pub fn conjugate_table(&self, dual_box: &IntegralBox) -> Result<TableFunction> {
        self.check_dim(dual_box.dim())?;
        Self::tabulate(dual_box, |p| Some(self.conjugate(p).expect("dims checked")))
    }

    pub fn is_zero_everywhere(&self) -> bool {
        self.entries.values().all(|v| v.is_zero())
    }

    /// Largest absolute value in the table.
    pub fn max_abs_value(&self) -> BigInt {
        self.entries.values().map(|v| v.abs()).max().unwrap()
    }
}
