use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{int_to_rat, Rational};
use crate::lp::{maximize_over, polyhedron_feasible, MaxOutcome};
use crate::subdifferential::{write_linear, InequalitySystem, Interval};

/// `M p <= c` with rational data, kept in a canonical form: every row is
/// scaled so that its first nonzero coefficient is +-1, parallel rows keep
/// only the tightest right-hand side, trivially true rows are dropped, and
/// an infeasible constant row is stored as `0 <= -1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalSystem {
    dim: usize,
    rows: Vec<(Vec<Rational>, Rational)>,
}

impl RationalSystem {
    pub fn new(dim: usize, rows: Vec<(Vec<Rational>, Rational)>) -> Self {
        let mut best: BTreeMap<Vec<Rational>, Rational> = BTreeMap::new();
        for (a, b) in rows {
            assert_eq!(a.len(), dim, "row length");
            let (a, b) = match a.iter().find(|v| !v.is_zero()) {
                None => {
                    if !b.is_negative() {
                        continue;
                    }
                    (a, -Rational::from_integer(BigInt::from(1)))
                }
                Some(lead) => {
                    let s = lead.abs();
                    (a.iter().map(|v| v / &s).collect(), b / s)
                }
            };
            best.entry(a)
                .and_modify(|cur| {
                    if b < *cur {
                        *cur = b.clone();
                    }
                })
                .or_insert(b);
        }
        RationalSystem {
            dim,
            rows: best.into_iter().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[(Vec<Rational>, Rational)] {
        &self.rows
    }

    pub fn is_feasible(&self) -> bool {
        let (m, c): (Vec<_>, Vec<_>) = self.rows.iter().cloned().unzip();
        polyhedron_feasible(&m, &c, self.dim)
    }

    pub fn contains(&self, p: &[Rational]) -> bool {
        self.rows
            .iter()
            .all(|(a, b)| a.iter().zip(p).fold(Rational::zero(), |acc, (x, y)| acc + x * y) <= *b)
    }

    /// `max <objective, p>` over the region.
    pub fn maximize(&self, objective: &[Rational]) -> MaxOutcome {
        let (m, c): (Vec<_>, Vec<_>) = self.rows.iter().cloned().unzip();
        maximize_over(&m, &c, objective)
    }

    /// Drops the first `k` coordinates, which must not occur in any row.
    fn drop_leading(&self, k: usize) -> RationalSystem {
        debug_assert!(self.rows.iter().all(|(a, _)| a[..k].iter().all(Zero::is_zero)));
        RationalSystem::new(
            self.dim - k,
            self.rows.iter().map(|(a, b)| (a[k..].to_vec(), b.clone())).collect(),
        )
    }
}

impl fmt::Display for RationalSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, b) in &self.rows {
            let mut first = true;
            for (j, c) in a.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                if !first {
                    f.write_str(" + ")?;
                }
                write!(f, "({c})p{}", j + 1)?;
                first = false;
            }
            if first {
                f.write_str("0")?;
            }
            writeln!(f, " <= {b}")?;
        }
        Ok(())
    }
}

/// One exact Fourier-Motzkin step eliminating variable `var` (0-based).
pub fn generic_fourier_motzkin(sys: &RationalSystem, var: usize) -> RationalSystem {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    let mut out = Vec::new();
    for (a, b) in &sys.rows {
        if a[var].is_positive() {
            pos.push((a, b));
        } else if a[var].is_negative() {
            neg.push((a, b));
        } else {
            out.push((a.clone(), b.clone()));
        }
    }
    for (a, b) in &pos {
        for (c, d) in &neg {
            let s = -&c[var];
            let t = &a[var];
            let row: Vec<Rational> = a.iter().zip(c.iter()).map(|(x, y)| x * &s + y * t).collect();
            out.push((row, *b * &s + *d * t));
        }
    }
    RationalSystem::new(sys.dim, out)
}

/// Projection onto `(p_level, ..., p_n)` (1-based level) by eliminating the
/// leading variables in order.
pub fn project_onto_tail(sys: &RationalSystem, level: usize) -> RationalSystem {
    let mut cur = sys.clone();
    for v in 0..level - 1 {
        cur = generic_fourier_motzkin(&cur, v);
    }
    cur.drop_leading(level - 1)
}

/// Whether two systems over the same variables describe the same region:
/// both empty, or every row of each is valid on the other.
pub fn regions_equal(a: &RationalSystem, b: &RationalSystem) -> bool {
    assert_eq!(a.dim, b.dim);
    let (fa, fb) = (a.is_feasible(), b.is_feasible());
    if !fa || !fb {
        return fa == fb;
    }
    let implied = |from: &RationalSystem, to: &RationalSystem| {
        to.rows.iter().all(|(row, rhs)| match from.maximize(row) {
            MaxOutcome::Optimal(v) => v <= *rhs,
            MaxOutcome::Unbounded => false,
            MaxOutcome::Infeasible => true,
        })
    };
    implied(a, b) && implied(b, a)
}

/// Bounds on `p_level` from the rows whose first nonzero coefficient is at
/// `level`, in terms of the later variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FmLevel {
    pub level: usize,
    /// `p_level >= <coeffs, tail> - b`.
    pub lower: Vec<(Vec<i8>, BigInt)>,
    /// `p_level <= b - <coeffs, tail>`.
    pub upper: Vec<(Vec<i8>, BigInt)>,
}

impl FmLevel {
    pub fn interval(&self, tail: &[Rational]) -> Interval {
        let dot = |c: &[i8]| {
            c.iter().zip(tail).fold(Rational::zero(), |acc, (&s, v)| match s {
                1 => acc + v,
                -1 => acc - v,
                _ => acc,
            })
        };
        let mut iv = Interval::unbounded();
        for (c, b) in &self.lower {
            iv.tighten_lower(dot(c) - int_to_rat(b));
        }
        for (c, b) in &self.upper {
            iv.tighten_upper(int_to_rat(b) - dot(c));
        }
        iv
    }

    /// The two-sided bound as rows over `(p_level, ..., p_n)`.
    fn rows(&self) -> Vec<(Vec<Rational>, Rational)> {
        let conv = |lead: i64, c: &[i8]| {
            std::iter::once(Rational::from_integer(lead.into()))
                .chain(c.iter().map(|&s| Rational::from_integer(s.into())))
                .collect::<Vec<_>>()
        };
        let mut out: Vec<_> = self.upper.iter().map(|(c, b)| (conv(1, c), int_to_rat(b))).collect();
        out.extend(self.lower.iter().map(|(c, b)| (conv(-1, c), int_to_rat(b))));
        out
    }
}

impl fmt::Display for FmLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        struct Term<'a>(&'a [i8], &'a BigInt, usize, bool);
        impl fmt::Display for Term<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let Term(c, b, off, lower) = *self;
                let zero = c.iter().all(|&s| s == 0);
                if lower {
                    if zero {
                        return write!(f, "{}", -b);
                    }
                    write_linear(f, c, off)?;
                    if b.is_negative() {
                        write!(f, " + {}", -b)
                    } else {
                        write!(f, " - {b}")
                    }
                } else {
                    if zero {
                        return write!(f, "{b}");
                    }
                    let neg: Vec<i8> = c.iter().map(|s| -s).collect();
                    write_linear(f, &neg, off)?;
                    if b.is_negative() {
                        write!(f, " - {}", -b)
                    } else {
                        write!(f, " + {b}")
                    }
                }
            }
        }
        let off = self.level + 1;
        f.write_str("max{")?;
        for (i, (c, b)) in self.lower.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", Term(c, b, off, true))?;
        }
        write!(f, "}} <= p{} <= min{{", self.level)?;
        for (i, (c, b)) in self.upper.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", Term(c, b, off, false))?;
        }
        f.write_str("}")
    }
}

/// The reduced system: for each level, bounds from the rows whose first
/// nonzero entry sits at that level. The box of `sys` is ignored.
pub fn fm_reduced_system(sys: &InequalitySystem) -> Vec<FmLevel> {
    let n = sys.dim();
    let mut levels: Vec<FmLevel> = (1..=n)
        .map(|level| FmLevel {
            level,
            lower: Vec::new(),
            upper: Vec::new(),
        })
        .collect();
    for row in sys.rows() {
        let Some(l) = row.a.iter().position(|&c| c != 0) else {
            continue;
        };
        let tail = row.a[l + 1..].to_vec();
        if row.a[l] > 0 {
            levels[l].upper.push((tail, row.b.clone()));
        } else {
            levels[l].lower.push((tail, row.b.clone()));
        }
    }
    levels
}

/// The last `n - level + 1` reduced inequalities as a system over `(p_level, ..., p_n)`.
pub fn fm_tail_system(levels: &[FmLevel], level: usize) -> RationalSystem {
    let n = levels.len();
    let k = n - level + 1;
    let mut rows = Vec::new();
    for lv in &levels[level - 1..] {
        let pad = lv.level - level;
        for (a, b) in lv.rows() {
            let mut full = vec![Rational::zero(); pad];
            full.extend(a);
            rows.push((full, b));
        }
    }
    RationalSystem::new(k, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ExtInt, IntegralBox, LatticePoint};
    use crate::fixtures;
    use crate::subdifferential::build_subgradient_system;

    fn r(v: i64) -> Rational {
        rat(v, 1)
    }

    fn interval_system(lo: i64, hi: i64) -> RationalSystem {
        RationalSystem::new(1, vec![(vec![r(1)], r(hi)), (vec![r(-1)], r(-lo))])
    }

    #[test]
    fn eliminate_single_variable() {
        let sys = RationalSystem::new(1, vec![(vec![r(1)], r(1)), (vec![r(-1)], r(0))]);
        let out = generic_fourier_motzkin(&sys, 0);
        assert!(out.rows().is_empty());
        assert!(out.is_feasible());
        let bad = RationalSystem::new(1, vec![(vec![r(1)], r(0)), (vec![r(-1)], r(-1))]);
        let out = generic_fourier_motzkin(&bad, 0);
        assert_eq!(out.rows().len(), 1);
        assert!(!out.is_feasible());
    }

    #[test]
    fn ex49_projections() {
        let sys = build_subgradient_system(&fixtures::ex49(), &LatticePoint::zero(2)).unwrap();
        let free = project_onto_tail(&sys.to_rational(), 2);
        assert!(regions_equal(&free, &interval_system(-3, 3)));
        let bx = IntegralBox::new(
            vec![ExtInt::from(2), ExtInt::from(-4)],
            vec![ExtInt::PosInf, ExtInt::from(4)],
        )
        .unwrap();
        let boxed = project_onto_tail(&sys.with_box(bx).unwrap().to_rational(), 2);
        assert!(regions_equal(&boxed, &interval_system(-2, 2)));
        assert!(!regions_equal(&boxed, &interval_system(-3, 3)));
    }

    #[test]
    fn ex49_reduced() {
        let sys = build_subgradient_system(&fixtures::ex49(), &LatticePoint::zero(2)).unwrap();
        let levels = fm_reduced_system(&sys);
        assert_eq!(
            levels[1].interval(&[]),
            Interval {
                lower: Some(r(-3)),
                upper: Some(r(3))
            }
        );
        let mut lower: Vec<String> = levels[0].lower.iter().map(|(c, b)| format!("{c:?}|{b}")).collect();
        lower.sort();
        assert_eq!(lower, vec!["[-1]|3", "[0]|2", "[1]|2"]);
        let mut upper: Vec<String> = levels[0].upper.iter().map(|(c, b)| format!("{c:?}|{b}")).collect();
        upper.sort();
        assert_eq!(upper, vec!["[-1]|4", "[0]|4", "[1]|4"]);
        // p2 = 1: max{-1, -4, -2} <= p1 <= min{3, 5, 4}
        assert_eq!(
            levels[0].interval(&[r(1)]),
            Interval {
                lower: Some(r(-1)),
                upper: Some(r(3))
            }
        );
        let full = sys.to_rational();
        assert!(regions_equal(&fm_tail_system(&levels, 1), &full));
    }

    #[test]
    fn empty_system_is_unbounded() {
        let sys = InequalitySystem::new(3, vec![], None).unwrap();
        for lv in fm_reduced_system(&sys) {
            assert_eq!(lv.interval(&vec![r(0); 3 - lv.level]), Interval::unbounded());
        }
    }

    #[test]
    fn r46_last_level_unbounded() {
        let sys = build_subgradient_system(&fixtures::r46(), &LatticePoint::zero(3)).unwrap();
        let levels = fm_reduced_system(&sys);
        assert!(levels[2].lower.is_empty() && levels[2].upper.is_empty());
        assert_eq!(levels[2].interval(&[]), Interval::unbounded());
    }

    #[test]
    fn display_reduced_level() {
        let sys = build_subgradient_system(&fixtures::ex49(), &LatticePoint::zero(2)).unwrap();
        let levels = fm_reduced_system(&sys);
        assert_eq!(levels[1].to_string(), "max{-3} <= p2 <= min{3}");
    }

    #[test]
    fn canonical_rows() {
        let sys = RationalSystem::new(
            2,
            vec![
                (vec![r(2), r(2)], r(4)),
                (vec![r(1), r(1)], r(3)),
                (vec![r(0), r(0)], r(5)),
            ],
        );
        assert_eq!(sys.rows(), &[(vec![r(1), r(1)], r(2))]);
    }
}
