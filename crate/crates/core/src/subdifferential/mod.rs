//! Subdifferentials of integer-valued functions: the local inequality system,
//! its box-aware projections, exact Fourier-Motzkin elimination, vertex
//! enumeration and integral subgradient extraction.

mod extract;
mod fm;
mod iq;
mod vertices;

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{int_to_rat, unit_displacements, ExtInt, IntegralBox, LatticePoint, Rational};
use crate::error::{Error, Result};
use crate::functions::TableFunction;

pub use extract::{
    integral_subgradient_in_box, integral_subgradient_with_trace, membership_check, round_subgradient, ExtractionStep,
    ExtractionTrace,
};
pub use fm::{
    fm_reduced_system, fm_tail_system, generic_fourier_motzkin, project_onto_tail, regions_equal, FmLevel,
    RationalSystem,
};
pub use iq::{build_iq, projection_interval, Interval, IqRow, IqSystem};
pub use vertices::enumerate_vertices;

/// One inequality `<a, p> <= b` with `a` in {-1,0,+1}^n.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Row {
    pub a: Vec<i8>,
    pub b: BigInt,
}

impl Row {
    pub fn new(a: Vec<i8>, b: impl Into<BigInt>) -> Self {
        Row { a, b: b.into() }
    }

    pub fn lhs(&self, p: &[Rational]) -> Rational {
        self.a.iter().zip(p).filter(|(c, _)| **c != 0).fold(
            Rational::zero(),
            |acc, (c, v)| {
                if *c > 0 {
                    acc + v
                } else {
                    acc - v
                }
            },
        )
    }

    pub fn satisfied_by(&self, p: &[Rational]) -> bool {
        self.lhs(p) <= int_to_rat(&self.b)
    }
}

impl fmt::Display for Row {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_linear(f, &self.a, 1)?;
        write!(f, " <= {}", self.b)
    }
}

/// Writes `sum a_j p_{offset+j}`, or `0` when all coefficients vanish.
pub(crate) fn write_linear(f: &mut fmt::Formatter<'_>, a: &[i8], offset: usize) -> fmt::Result {
    let mut first = true;
    for (j, &c) in a.iter().enumerate() {
        if c == 0 {
            continue;
        }
        let var = format!("p{}", j + offset);
        match (first, c > 0) {
            (true, true) => write!(f, "{var}")?,
            (true, false) => write!(f, "-{var}")?,
            (false, true) => write!(f, " + {var}")?,
            (false, false) => write!(f, " - {var}")?,
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// `A p <= b` together with an integral box (trivial when absent).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InequalitySystem {
    dim: usize,
    rows: Vec<Row>,
    bx: IntegralBox,
}

impl InequalitySystem {
    pub fn new(dim: usize, rows: Vec<Row>, bx: Option<IntegralBox>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.a.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.a.len(),
            });
        }
        if rows.iter().flat_map(|r| &r.a).any(|c| !(-1..=1).contains(c)) {
            return Err(Error::InvalidFunction("row coefficients must be in {-1,0,1}".into()));
        }
        let bx = bx.unwrap_or_else(|| IntegralBox::unbounded(dim));
        if bx.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bx.dim(),
            });
        }
        Ok(InequalitySystem { dim, rows, bx })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn bounding_box(&self) -> &IntegralBox {
        &self.bx
    }

    pub fn with_box(&self, bx: IntegralBox) -> Result<Self> {
        Self::new(self.dim, self.rows.clone(), Some(bx))
    }

    pub fn without_box(&self) -> Self {
        InequalitySystem {
            dim: self.dim,
            rows: self.rows.clone(),
            bx: IntegralBox::unbounded(self.dim),
        }
    }

    /// Whether `p` satisfies every row and the box.
    pub fn contains(&self, p: &[Rational]) -> bool {
        p.len() == self.dim && self.rows.iter().all(|r| r.satisfied_by(p)) && self.bx.contains(p).unwrap_or(false)
    }

    /// All rows and finite box bounds as one rational system `M p <= c`.
    pub fn to_rational(&self) -> RationalSystem {
        let mut rows: Vec<(Vec<Rational>, Rational)> = self
            .rows
            .iter()
            .map(|r| {
                (
                    r.a.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect(),
                    int_to_rat(&r.b),
                )
            })
            .collect();
        for j in 0..self.dim {
            let unit = |s: i64| {
                let mut v = vec![Rational::zero(); self.dim];
                v[j] = Rational::from_integer(BigInt::from(s));
                v
            };
            if let ExtInt::Finite(u) = &self.bx.upper()[j] {
                rows.push((unit(1), int_to_rat(u)));
            }
            if let ExtInt::Finite(l) = &self.bx.lower()[j] {
                rows.push((unit(-1), -int_to_rat(l)));
            }
        }
        RationalSystem::new(self.dim, rows)
    }
}

/// The system `<d, p> <= f(x+d) - f(x)` over `d in {-1,0,+1}^n \ {0}` with
/// `x + d in dom f`, describing the subdifferential of `f` at `x`.
pub fn build_subgradient_system(f: &TableFunction, x: &LatticePoint) -> Result<InequalitySystem> {
    let fx = match f.evaluate(x)? {
        ExtInt::Finite(v) => v,
        _ => return Err(Error::PointOutsideDomain(x.to_string())),
    };
    let rows = unit_displacements(f.dim())
        .into_iter()
        .filter(|d| d.iter().any(|&c| c != 0))
        .filter_map(|d| {
            let v = f.get(&x.offset(&d))?;
            Some(Row { b: v - &fx, a: d })
        })
        .collect();
    InequalitySystem::new(f.dim(), rows, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use std::collections::BTreeSet;

    fn rows(spec: &[(&[i8], i64)]) -> BTreeSet<Row> {
        spec.iter().map(|(a, b)| Row::new(a.to_vec(), *b)).collect()
    }

    #[test]
    fn ex49_system() {
        let sys = build_subgradient_system(&fixtures::ex49(), &LatticePoint::zero(2)).unwrap();
        let got: BTreeSet<Row> = sys.rows().iter().cloned().collect();
        let want = rows(&[
            (&[1, 1], 4),
            (&[1, -1], 4),
            (&[-1, 1], 2),
            (&[-1, -1], 3),
            (&[1, 0], 4),
            (&[-1, 0], 2),
            (&[0, 1], 3),
            (&[0, -1], 3),
        ]);
        assert_eq!(got, want);
        assert_eq!(sys.rows().len(), 8);
    }

    #[test]
    fn r46_system() {
        let sys = build_subgradient_system(&fixtures::r46(), &LatticePoint::zero(3)).unwrap();
        let got: BTreeSet<Row> = sys.rows().iter().cloned().collect();
        assert_eq!(got, rows(&[(&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]));
    }

    #[test]
    fn single_point_and_outside() {
        let f = TableFunction::from_i64(2, &[(&[3, 3], 7)]).unwrap();
        let sys = build_subgradient_system(&f, &LatticePoint::from_i64(&[3, 3])).unwrap();
        assert!(sys.rows().is_empty());
        assert!(matches!(
            build_subgradient_system(&f, &LatticePoint::zero(2)),
            Err(Error::PointOutsideDomain(_))
        ));
    }

    #[test]
    fn row_display() {
        assert_eq!(Row::new(vec![1, -1, 0], 4).to_string(), "p1 - p2 <= 4");
        assert_eq!(Row::new(vec![0, 0, -1], -2).to_string(), "-p3 <= -2");
    }
}
