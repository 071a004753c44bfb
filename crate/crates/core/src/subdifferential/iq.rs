use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{int_to_rat, ExtInt, IntegralBox, Rational};
use crate::error::{Error, Result};
use crate::subdifferential::{write_linear, InequalitySystem, RationalSystem};

/// Row `constant + <coeffs, (p_l, ..., p_n)> <= b` of IQ(l), where the
/// constant folds the box bounds of the eliminated variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqRow {
    /// `sum_{J+} alpha_j - sum_{J-} beta_j`; `NegInf` makes the row vacuous.
    pub constant: ExtInt,
    pub coeffs: Vec<i8>,
    pub b: BigInt,
    /// Index of the originating row of the subgradient system.
    pub source: usize,
}

impl IqRow {
    pub fn is_vacuous(&self) -> bool {
        self.constant == ExtInt::NegInf
    }

    /// `b - constant`, the effective right-hand side (None when vacuous).
    pub fn rhs(&self) -> Option<BigInt> {
        self.constant.as_finite().map(|c| &self.b - c)
    }
}

/// The system IQ(l) in the variables `p_l, ..., p_n` (l is 1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IqSystem {
    pub level: usize,
    pub dim: usize,
    /// Rows with coefficient +1 on `p_l`.
    pub plus: Vec<IqRow>,
    /// Rows with coefficient -1 on `p_l`.
    pub minus: Vec<IqRow>,
    /// Rows not involving `p_l`.
    pub zero: Vec<IqRow>,
    /// Rows whose folded constant is `-inf`; trivially true and left out of
    /// every computation.
    pub vacuous: Vec<IqRow>,
    /// `alpha_j <= p_j <= beta_j` for `j = l..n`.
    pub lower: Vec<ExtInt>,
    pub upper: Vec<ExtInt>,
}

impl IqSystem {
    /// `|I| + 2(n - l + 1)`.
    pub fn row_count(&self) -> usize {
        self.plus.len() + self.minus.len() + self.zero.len() + self.vacuous.len() + 2 * self.lower.len()
    }

    /// Non-vacuous rows and finite box bounds as `M q <= c` over `q = (p_l..p_n)`.
    pub fn to_rational(&self) -> RationalSystem {
        let k = self.dim - self.level + 1;
        let mut rows = Vec::new();
        for r in self.plus.iter().chain(&self.minus).chain(&self.zero) {
            if let Some(rhs) = r.rhs() {
                rows.push((
                    r.coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect(),
                    int_to_rat(&rhs),
                ));
            }
        }
        for j in 0..k {
            let unit = |s: i64| {
                let mut v = vec![Rational::zero(); k];
                v[j] = Rational::from_integer(s.into());
                v
            };
            if let ExtInt::Finite(u) = &self.upper[j] {
                rows.push((unit(1), int_to_rat(u)));
            }
            if let ExtInt::Finite(l) = &self.lower[j] {
                rows.push((unit(-1), -int_to_rat(l)));
            }
        }
        RationalSystem::new(k, rows)
    }

    /// Constant rows (no variable left) that fail; only possible at `l = n`
    /// or for rows with all trailing coefficients zero.
    pub fn violated_constant_rows(&self) -> Vec<&IqRow> {
        self.zero
            .iter()
            .filter(|r| r.coeffs.iter().all(|&c| c == 0))
            .filter(|r| r.rhs().is_some_and(|rhs| rhs < BigInt::zero()))
            .collect()
    }
}

impl fmt::Display for IqSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in self.plus.iter().chain(&self.minus).chain(&self.zero) {
            write!(f, "{} + ", r.constant)?;
            write_linear(f, &r.coeffs, self.level)?;
            writeln!(f, " <= {}", r.b)?;
        }
        for (j, (lo, hi)) in self.lower.iter().zip(&self.upper).enumerate() {
            writeln!(f, "{lo} <= p{} <= {hi}", j + self.level)?;
        }
        Ok(())
    }
}

/// Builds IQ(`level`) from the subgradient system and the box (1-based level).
pub fn build_iq(sys: &InequalitySystem, bx: &IntegralBox, level: usize) -> Result<IqSystem> {
    let n = sys.dim();
    if level == 0 || level > n {
        return Err(Error::InvalidBox(format!("level {level} outside 1..={n}")));
    }
    if bx.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bx.dim(),
        });
    }
    let l = level - 1;
    let mut out = IqSystem {
        level,
        dim: n,
        plus: Vec::new(),
        minus: Vec::new(),
        zero: Vec::new(),
        vacuous: Vec::new(),
        lower: bx.lower()[l..].to_vec(),
        upper: bx.upper()[l..].to_vec(),
    };
    for (idx, row) in sys.rows().iter().enumerate() {
        let mut constant = ExtInt::zero();
        for j in 0..l {
            let term = match row.a[j] {
                1 => bx.lower()[j].clone(),
                -1 => -bx.upper()[j].clone(),
                _ => continue,
            };
            // alpha_j < +inf and beta_j > -inf, so no opposite infinities here.
            constant = constant.checked_add(&term)?;
        }
        let iq = IqRow {
            constant,
            coeffs: row.a[l..].to_vec(),
            b: row.b.clone(),
            source: idx,
        };
        if iq.is_vacuous() {
            out.vacuous.push(iq);
        } else {
            match row.a[l] {
                1 => out.plus.push(iq),
                -1 => out.minus.push(iq),
                _ => out.zero.push(iq),
            }
        }
    }
    Ok(out)
}

/// Closed interval with possibly infinite ends (`None` is infinite).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

impl Interval {
    pub fn unbounded() -> Self {
        Interval {
            lower: None,
            upper: None,
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!((&self.lower, &self.upper), (Some(l), Some(u)) if l > u)
    }

    pub fn contains(&self, v: &Rational) -> bool {
        self.lower.as_ref().is_none_or(|l| l <= v) && self.upper.as_ref().is_none_or(|u| v <= u)
    }

    pub(crate) fn tighten_lower(&mut self, v: Rational) {
        if self.lower.as_ref().is_none_or(|l| v > *l) {
            self.lower = Some(v);
        }
    }

    pub(crate) fn tighten_upper(&mut self, v: Rational) {
        if self.upper.as_ref().is_none_or(|u| v < *u) {
            self.upper = Some(v);
        }
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.lower {
            Some(l) => write!(f, "[{l}, ")?,
            None => write!(f, "(-inf, ")?,
        }
        match &self.upper {
            Some(u) => write!(f, "{u}]"),
            None => write!(f, "+inf)"),
        }
    }
}

fn tail_dot(coeffs: &[i8], tail: &[Rational]) -> Rational {
    coeffs.iter().zip(tail).fold(Rational::zero(), |acc, (&c, v)| match c {
        1 => acc + v,
        -1 => acc - v,
        _ => acc,
    })
}

/// Interval for `p_l` given `tail = (p_{l+1}, ..., p_n)`.
pub fn projection_interval(iq: &IqSystem, tail: &[Rational]) -> Result<Interval> {
    let expected = iq.dim - iq.level;
    if tail.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: tail.len(),
        });
    }
    let mut iv = Interval::unbounded();
    if let ExtInt::Finite(a) = &iq.lower[0] {
        iv.tighten_lower(int_to_rat(a));
    }
    if let ExtInt::Finite(b) = &iq.upper[0] {
        iv.tighten_upper(int_to_rat(b));
    }
    for r in &iq.plus {
        let rhs = r.rhs().expect("vacuous rows are kept apart");
        iv.tighten_upper(int_to_rat(&rhs) - tail_dot(&r.coeffs[1..], tail));
    }
    for r in &iq.minus {
        let rhs = r.rhs().expect("vacuous rows are kept apart");
        iv.tighten_lower(tail_dot(&r.coeffs[1..], tail) - int_to_rat(&rhs));
    }
    Ok(iv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, LatticePoint};
    use crate::fixtures;
    use crate::subdifferential::build_subgradient_system;

    fn ex49_box() -> IntegralBox {
        IntegralBox::new(
            vec![ExtInt::from(2), ExtInt::from(-4)],
            vec![ExtInt::PosInf, ExtInt::from(4)],
        )
        .unwrap()
    }

    #[test]
    fn ex49_level_two() {
        let sys = build_subgradient_system(&fixtures::ex49(), &LatticePoint::zero(2)).unwrap();
        let iq = build_iq(&sys, &ex49_box(), 2).unwrap();
        assert_eq!(iq.row_count(), 8 + 2);
        // Plus rows: 2 + p2 <= 4 and p2 <= 3 survive, -inf + p2 <= 2 is vacuous.
        let plus: Vec<_> = iq.plus.iter().map(|r| (r.constant.clone(), r.b.clone())).collect();
        assert!(plus.contains(&(ExtInt::from(2), 4.into())));
        assert!(plus.contains(&(ExtInt::from(0), 3.into())));
        assert_eq!(iq.vacuous.len(), 3);
        let iv = projection_interval(&iq, &[]).unwrap();
        assert_eq!(
            iv,
            Interval {
                lower: Some(rat(-2, 1)),
                upper: Some(rat(2, 1))
            }
        );
    }

    #[test]
    fn ex49_level_one() {
        let sys = build_subgradient_system(&fixtures::ex49(), &LatticePoint::zero(2)).unwrap();
        let iq = build_iq(&sys, &ex49_box(), 1).unwrap();
        assert!(iq.vacuous.is_empty());
        assert_eq!(iq.plus.len() + iq.minus.len() + iq.zero.len(), 8);
        let iv = projection_interval(&iq, &[rat(0, 1)]).unwrap();
        assert_eq!(
            iv,
            Interval {
                lower: Some(rat(2, 1)),
                upper: Some(rat(4, 1))
            }
        );
    }

    #[test]
    fn trivial_box_makes_folded_rows_vacuous() {
        let sys = build_subgradient_system(&fixtures::r47(), &LatticePoint::zero(3)).unwrap();
        let bx = IntegralBox::unbounded(3);
        for level in 1..=3 {
            let iq = build_iq(&sys, &bx, level).unwrap();
            assert_eq!(iq.row_count(), sys.rows().len() + 2 * (3 - level + 1));
            for r in iq.plus.iter().chain(&iq.minus).chain(&iq.zero) {
                assert!(sys.rows()[r.source].a[..level - 1].iter().all(|&c| c == 0));
            }
            for r in &iq.vacuous {
                assert!(sys.rows()[r.source].a[..level - 1].iter().any(|&c| c != 0));
            }
        }
        let iq = build_iq(&sys, &bx, 1).unwrap();
        assert!(projection_interval(&iq, &[rat(5, 1), rat(5, 1)]).unwrap().is_empty());
    }

    #[test]
    fn no_rows_unbounded() {
        let sys = InequalitySystem::new(2, vec![], None).unwrap();
        let iq = build_iq(&sys, &IntegralBox::unbounded(2), 2).unwrap();
        assert_eq!(projection_interval(&iq, &[]).unwrap(), Interval::unbounded());
    }
}
