//! Minimization of `f - Psi`, integral duality certificates and the
//! weak/strong duality audits around them.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{int_to_rat, unit_displacements, ExtInt, IntegralBox, LatticePoint, Rational};
use crate::error::{Error, Result};
use crate::functions::{Orientation, SeparableFunction, TableFunction};
use crate::lp::{solve_standard, LinearProgram, LpOutcome, Relation};
use crate::subdifferential::integral_subgradient_in_box;

/// A concave function that can be evaluated and conjugated exactly.
pub trait ConcaveFunction: Sync {
    fn dim(&self) -> usize;
    /// `None` outside the domain.
    fn concave_value(&self, x: &LatticePoint) -> Option<BigInt>;
    /// `min { <p,x> - g(x) }`.
    fn concave_conjugate_at(&self, p: &LatticePoint) -> Result<ExtInt>;
}

impl ConcaveFunction for SeparableFunction {
    fn dim(&self) -> usize {
        SeparableFunction::dim(self)
    }

    fn concave_value(&self, x: &LatticePoint) -> Option<BigInt> {
        self.value(x)
    }

    fn concave_conjugate_at(&self, p: &LatticePoint) -> Result<ExtInt> {
        if self.orientation() != Orientation::Concave {
            return Err(Error::InvalidFunction("expected a concave separable function".into()));
        }
        self.conjugate(p)
    }
}

/// A table read as a concave function.
impl ConcaveFunction for TableFunction {
    fn dim(&self) -> usize {
        TableFunction::dim(self)
    }

    fn concave_value(&self, x: &LatticePoint) -> Option<BigInt> {
        self.get(x).cloned()
    }

    fn concave_conjugate_at(&self, p: &LatticePoint) -> Result<ExtInt> {
        self.concave_conjugate(p).map(ExtInt::Finite)
    }
}

fn check_dims(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch { expected: a, found: b });
    }
    Ok(())
}

/// Exhaustive minimum of `f - psi` over `dom f`; ties go to the
/// lexicographically smallest point.
pub fn minimize_difference<G: ConcaveFunction + ?Sized>(f: &TableFunction, psi: &G) -> Result<(LatticePoint, BigInt)> {
    check_dims(f.dim(), psi.dim())?;
    let entries: Vec<(&LatticePoint, &BigInt)> = f.iter().collect();
    entries
        .par_iter()
        .filter_map(|(x, v)| psi.concave_value(x).map(|w| (*v - w, (*x).clone())))
        .min()
        .map(|(v, x)| (x, v))
        .ok_or(Error::EmptyIntersection)
}

/// `f(x) <= f(x+d)` for every `d in {-1,0,1}^n` with `x+d in dom f`.
pub fn local_minimum_check(f: &TableFunction, x: &LatticePoint) -> Result<bool> {
    let fx = match f.evaluate(x)? {
        ExtInt::Finite(v) => v,
        _ => return Err(Error::PointOutsideDomain(x.to_string())),
    };
    Ok(unit_displacements(f.dim())
        .iter()
        .filter_map(|d| f.get(&x.offset(d)))
        .all(|v| fx <= *v))
}

/// Exhaustive re-checks recorded with a certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateTrace {
    /// `<p*, x*> - f(x*) = f•(p*)`, i.e. `x*` maximizes `<p*,.> - f`.
    pub primal_argmax: bool,
    /// `<p*, x*> - Psi(x*) = Psi°(p*)`, i.e. `x*` minimizes `<p*,.> - Psi`.
    pub concave_argmin: bool,
    /// The box `-∂Phi(x*)` with `Phi = -Psi` that `p*` was drawn from.
    pub dual_box: IntegralBox,
    pub conjugate_f: BigInt,
    pub conjugate_psi: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualityCertificate {
    pub primal_point: LatticePoint,
    pub dual_point: LatticePoint,
    pub primal_value: BigInt,
    pub dual_value: BigInt,
    pub trace: CertificateTrace,
}

impl DualityCertificate {
    /// Re-validates the certificate from evaluations only.
    pub fn verify(&self, f: &TableFunction, psi: &SeparableFunction) -> Result<bool> {
        let x = &self.primal_point;
        let p = &self.dual_point;
        let (fx, px) = match (f.get(x), psi.value(x)) {
            (Some(a), Some(b)) => (a.clone(), b),
            _ => return Ok(false),
        };
        let fc = f.conjugate(p)?;
        let pc = match psi.concave_conjugate_at(p)? {
            ExtInt::Finite(v) => v,
            _ => return Ok(false),
        };
        let px_dot = p.dot(x);
        Ok(&px_dot - &fx == fc
            && &px_dot - &px == pc
            && &fx - &px == self.primal_value
            && &pc - &fc == self.dual_value
            && self.primal_value == self.dual_value)
    }
}

/// Computes `x*`, the box `B = -∂Phi(x*)` and an integral `p* in ∂f(x*) ∩ B`,
/// then verifies both optimality conditions and the value equality.
pub fn fenchel_certificate(f: &TableFunction, psi: &SeparableFunction) -> Result<DualityCertificate> {
    if psi.orientation() != Orientation::Concave {
        return Err(Error::InvalidFunction("expected a concave separable function".into()));
    }
    let (x, primal_value) = minimize_difference(f, psi)?;
    let dual_box = psi.negated().subdifferential_box(&x)?;
    let p = match integral_subgradient_in_box(f, &x, &dual_box) {
        Ok(Some(p)) => p,
        Ok(None) => {
            return Err(Error::InternalInfeasible(format!(
                "no integral subgradient of f at {x} in the box"
            )))
        }
        Err(Error::NotIntegrallyConvex(msg)) => return Err(Error::InternalInfeasible(msg)),
        Err(e) => return Err(e),
    };
    let conjugate_f = f.conjugate(&p)?;
    let conjugate_psi = match psi.conjugate(&p)? {
        ExtInt::Finite(v) => v,
        other => {
            return Err(Error::InternalInfeasible(format!(
                "concave conjugate is {other} at {p}"
            )))
        }
    };
    let fx = f.get(&x).expect("minimizer lies in dom f").clone();
    let px = psi.value(&x).expect("minimizer lies in dom psi");
    let dot = p.dot(&x);
    let trace = CertificateTrace {
        primal_argmax: &dot - &fx == conjugate_f,
        concave_argmin: &dot - &px == conjugate_psi,
        dual_box,
        conjugate_f: conjugate_f.clone(),
        conjugate_psi: conjugate_psi.clone(),
    };
    let dual_value = &conjugate_psi - &conjugate_f;
    if !trace.primal_argmax || !trace.concave_argmin || dual_value != primal_value {
        return Err(Error::InternalInfeasible(format!(
            "certificate check failed at x* = {x}, p* = {p}"
        )));
    }
    Ok(DualityCertificate {
        primal_point: x,
        dual_point: p,
        primal_value,
        dual_value,
        trace,
    })
}

/// `g°(p) - f•(p) <= min(f - g)` at every sample. Vacuous when the domains
/// do not meet.
pub fn weak_duality_audit<G: ConcaveFunction + ?Sized>(
    f: &TableFunction,
    g: &G,
    samples: &[LatticePoint],
) -> Result<bool> {
    let min = match minimize_difference(f, g) {
        Ok((_, v)) => v,
        Err(Error::EmptyIntersection) => return Ok(true),
        Err(e) => return Err(e),
    };
    for p in samples {
        let lhs = g
            .concave_conjugate_at(p)?
            .checked_sub(&ExtInt::Finite(f.conjugate(p)?))?;
        if lhs > ExtInt::Finite(min.clone()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rational with infinities, ordered `-inf < finite < +inf`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtRational {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl From<ExtInt> for ExtRational {
    fn from(v: ExtInt) -> Self {
        match v {
            ExtInt::NegInf => ExtRational::NegInf,
            ExtInt::Finite(v) => ExtRational::Finite(int_to_rat(&v)),
            ExtInt::PosInf => ExtRational::PosInf,
        }
    }
}

impl From<i64> for ExtRational {
    fn from(v: i64) -> Self {
        ExtRational::Finite(Rational::from_integer(v.into()))
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInf => f.write_str("-inf"),
            ExtRational::Finite(v) => write!(f, "{v}"),
            ExtRational::PosInf => f.write_str("+inf"),
        }
    }
}

/// How conjugates of finite tables are read.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConjugateMode {
    /// The tables are the functions themselves.
    Exact,
    /// The tables are windows onto functions on all of Z^n: a conjugate value
    /// counts as finite only when some optimizer lies strictly inside the
    /// bounding box, and is `±inf` otherwise.
    Window,
}

fn strictly_inside(bx: &IntegralBox, x: &LatticePoint) -> bool {
    x.coords()
        .iter()
        .enumerate()
        .all(|(j, c)| ExtInt::Finite(c.clone()) > bx.lower()[j] && ExtInt::Finite(c.clone()) < bx.upper()[j])
}

fn convex_conjugate_mode(f: &TableFunction, p: &LatticePoint, mode: ConjugateMode) -> Result<ExtInt> {
    let (best, arg) = f.conjugate_argmax(p)?;
    if mode == ConjugateMode::Window {
        let bb = f.bounding_box();
        if !arg.iter().any(|x| strictly_inside(&bb, x)) {
            return Ok(ExtInt::PosInf);
        }
    }
    Ok(ExtInt::Finite(best))
}

fn concave_conjugate_mode(g: &TableFunction, p: &LatticePoint, mode: ConjugateMode) -> Result<ExtInt> {
    let best = g.concave_conjugate(p)?;
    if mode == ConjugateMode::Window {
        let bb = g.bounding_box();
        let inside = g.iter().any(|(x, v)| p.dot(x) - v == best && strictly_inside(&bb, x));
        if !inside {
            return Ok(ExtInt::NegInf);
        }
    }
    Ok(ExtInt::Finite(best))
}

/// `min f¯(x) - g¯(x)` over real `x`, with `f¯` the convex and `g¯` the
/// concave envelope of the tables, as one mixture LP.
pub fn continuous_minimum(f: &TableFunction, g: &TableFunction) -> Result<ExtRational> {
    check_dims(f.dim(), g.dim())?;
    let n = f.dim();
    let fl: Vec<_> = f.iter().collect();
    let gl: Vec<_> = g.iter().collect();
    let cols = fl.len() + gl.len();
    let mut a = Vec::with_capacity(n + 2);
    for j in 0..n {
        let mut row = Vec::with_capacity(cols);
        row.extend(fl.iter().map(|(y, _)| int_to_rat(&y.0[j])));
        row.extend(gl.iter().map(|(y, _)| -int_to_rat(&y.0[j])));
        a.push(row);
    }
    let mut ones_f = vec![Rational::one(); fl.len()];
    ones_f.extend(vec![Rational::zero(); gl.len()]);
    let mut ones_g = vec![Rational::zero(); fl.len()];
    ones_g.extend(vec![Rational::one(); gl.len()]);
    a.push(ones_f);
    a.push(ones_g);
    let mut b = vec![Rational::zero(); n];
    b.push(Rational::one());
    b.push(Rational::one());
    let mut c: Vec<Rational> = fl.iter().map(|(_, v)| int_to_rat(v)).collect();
    c.extend(gl.iter().map(|(_, v)| -int_to_rat(v)));
    Ok(match solve_standard(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => ExtRational::Finite(value),
        LpOutcome::Infeasible => ExtRational::PosInf,
        LpOutcome::Unbounded => ExtRational::NegInf,
    })
}

/// `max g¯°(p) - f¯•(p)` over real `p`, as an LP in `(p, s, t)`:
/// maximize `t - s` with `<p,y> - s <= f(y)` and `<p,y> - t >= g(y)`.
pub fn continuous_dual_maximum(f: &TableFunction, g: &TableFunction) -> Result<ExtRational> {
    check_dims(f.dim(), g.dim())?;
    let n = f.dim();
    let mut lp = LinearProgram::new();
    for _ in 0..n {
        lp.add_var(true, Rational::zero());
    }
    let s = lp.add_var(true, Rational::one());
    let t = lp.add_var(true, -Rational::one());
    let row = |y: &LatticePoint, col: usize| {
        let mut r: Vec<Rational> = y.0.iter().map(int_to_rat).collect();
        r.extend([Rational::zero(), Rational::zero()]);
        r[col] = -Rational::one();
        r
    };
    for (y, v) in f.iter() {
        lp.add_constraint(row(y, s), Relation::Le, int_to_rat(v));
    }
    for (y, v) in g.iter() {
        lp.add_constraint(row(y, t), Relation::Ge, int_to_rat(v));
    }
    Ok(match lp.minimize() {
        LpOutcome::Optimal { value, .. } => ExtRational::Finite(-value),
        LpOutcome::Unbounded => ExtRational::PosInf,
        LpOutcome::Infeasible => ExtRational::NegInf,
    })
}

/// `min{f - g}`, `min{f¯ - g¯}`, `max{g¯° - f¯•}` and `max{g° - f•}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapReport {
    pub discrete_min: ExtInt,
    pub continuous_min: ExtRational,
    pub continuous_max: ExtRational,
    pub discrete_max: ExtInt,
    pub minimizer: Option<LatticePoint>,
    pub maximizer: Option<LatticePoint>,
}

impl GapReport {
    pub fn chain(&self) -> [ExtRational; 4] {
        [
            self.discrete_min.clone().into(),
            self.continuous_min.clone(),
            self.continuous_max.clone(),
            self.discrete_max.clone().into(),
        ]
    }
}

/// Four-value chain for a convex table `f` and a concave table `g`, with
/// the integer dual scanned over `dual_box`. Only `n = 2` is supported.
pub fn counterexample_gap_report(
    f: &TableFunction,
    g: &TableFunction,
    dual_box: &IntegralBox,
    mode: ConjugateMode,
) -> Result<GapReport> {
    check_dims(f.dim(), g.dim())?;
    check_dims(f.dim(), dual_box.dim())?;
    if f.dim() > 2 {
        return Err(Error::UnsupportedDimension {
            supported: 2,
            found: f.dim(),
        });
    }
    let duals = dual_box
        .lattice_points()
        .ok_or_else(|| Error::InvalidBox("dual box must be bounded".into()))?;
    let (minimizer, discrete_min) = match minimize_difference(f, g) {
        Ok((x, v)) => (Some(x), ExtInt::Finite(v)),
        Err(Error::EmptyIntersection) => (None, ExtInt::PosInf),
        Err(e) => return Err(e),
    };
    let continuous_min = continuous_minimum(f, g)?;
    let continuous_max = continuous_dual_maximum(f, g)?;
    let values: Vec<ExtInt> = duals
        .par_iter()
        .map(|p| {
            let gc = concave_conjugate_mode(g, p, mode)?;
            let fc = convex_conjugate_mode(f, p, mode)?;
            Ok(match (gc, fc) {
                (ExtInt::Finite(a), ExtInt::Finite(b)) => ExtInt::Finite(a - b),
                _ => ExtInt::NegInf,
            })
        })
        .collect::<Result<_>>()?;
    let mut discrete_max = ExtInt::NegInf;
    let mut maximizer = None;
    for (p, v) in duals.iter().zip(values) {
        if v > discrete_max {
            discrete_max = v;
            maximizer = Some(p.clone());
        }
    }
    Ok(GapReport {
        discrete_min,
        continuous_min,
        continuous_max,
        discrete_max,
        minimizer,
        maximizer,
    })
}

/// `min f¯ - Psi¯` over the reals, with `Psi` tabulated on the bounding box
/// of `dom f`.
pub fn continuous_minimum_separable(f: &TableFunction, psi: &SeparableFunction) -> Result<ExtRational> {
    if psi.orientation() != Orientation::Concave {
        return Err(Error::InvalidFunction("expected a concave separable function".into()));
    }
    match psi.tabulate(&f.bounding_box()) {
        Ok(g) => continuous_minimum(f, &g),
        Err(_) => Ok(ExtRational::PosInf),
    }
}

/// Min-max for a table `g = f•|_D` of a conjugate of an integrally convex `f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateClassCertificate {
    /// Minimizer of `g - Psi` over the table.
    pub primal_point: LatticePoint,
    /// Maximizer of `Psi° - f` over `dom f` (`f = g•` by biconjugacy).
    pub dual_point: LatticePoint,
    pub primal_value: BigInt,
    pub dual_value: BigInt,
    /// Whether the conjugate of the truncated table reproduces `f` on `dom f`.
    pub table_biconjugate_exact: bool,
}

/// Evaluates both sides of `min{g - Psi} = max{Psi° - g•}` exhaustively,
/// using the generating function `f` for `g•`.
pub fn conjugate_class_certificate(
    g: &TableFunction,
    psi: &SeparableFunction,
    f: &TableFunction,
) -> Result<ConjugateClassCertificate> {
    check_dims(g.dim(), f.dim())?;
    if psi.orientation() != Orientation::Concave {
        return Err(Error::InvalidFunction("expected a concave separable function".into()));
    }
    let (primal_point, primal_value) = minimize_difference(g, psi)?;
    let mut best: Option<(BigInt, LatticePoint)> = None;
    for (p, fp) in f.iter() {
        if let ExtInt::Finite(c) = psi.conjugate(p)? {
            let v = c - fp;
            if best.as_ref().is_none_or(|(b, _)| v > *b) {
                best = Some((v, p.clone()));
            }
        }
    }
    let (dual_value, dual_point) = best.ok_or_else(|| Error::BoxTooSmall("Psi° is -inf on dom f".into()))?;
    if primal_value != dual_value {
        return Err(Error::BoxTooSmall(format!(
            "table minimum {primal_value} differs from dual maximum {dual_value}"
        )));
    }
    let table_biconjugate_exact = f.iter().all(|(p, fp)| g.conjugate(p).is_ok_and(|v| v == *fp));
    Ok(ConjugateClassCertificate {
        primal_point,
        dual_point,
        primal_value,
        dual_value,
        table_biconjugate_exact,
    })
}

/// Dual maximum over a finite box, with a note on whether it stabilizes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualMaximum {
    /// `Psi° - f•` is `-inf` on the whole box.
    NegInf,
    /// Same value on the box and on the box grown by one in every direction.
    Stable(BigInt),
    /// Still increasing when the box grows.
    Growing,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinitenessReport {
    pub dual_max: DualMaximum,
    pub primal_finite: bool,
    pub holds: bool,
}

fn dual_max_over(f: &TableFunction, psi: &SeparableFunction, bx: &IntegralBox) -> Result<ExtInt> {
    let pts = bx
        .lattice_points()
        .ok_or_else(|| Error::InvalidBox("dual box must be bounded".into()))?;
    let mut best = ExtInt::NegInf;
    for p in pts {
        if let ExtInt::Finite(c) = psi.conjugate(&p)? {
            best = best.max(ExtInt::Finite(c - f.conjugate(&p)?));
        }
    }
    Ok(best)
}

fn grown(bx: &IntegralBox) -> Result<IntegralBox> {
    let one = ExtInt::from(1);
    IntegralBox::new(
        bx.lower().iter().map(|l| l.checked_sub(&one)).collect::<Result<_>>()?,
        bx.upper().iter().map(|u| u.checked_add(&one)).collect::<Result<_>>()?,
    )
}

/// A finite dual maximum forces `dom f ∩ dom Psi` to be nonempty.
pub fn finiteness_propagation_check(
    f: &TableFunction,
    psi: &SeparableFunction,
    dual_box: &IntegralBox,
) -> Result<FinitenessReport> {
    check_dims(f.dim(), psi.dim())?;
    let inner = dual_max_over(f, psi, dual_box)?;
    let dual_max = match inner {
        ExtInt::Finite(v) => match dual_max_over(f, psi, &grown(dual_box)?)? {
            ExtInt::Finite(w) if w.cmp(&v) == Ordering::Equal => DualMaximum::Stable(v),
            _ => DualMaximum::Growing,
        },
        _ => DualMaximum::NegInf,
    };
    let primal_finite = f.domain().any(|x| psi.in_domain(x));
    let holds = !matches!(dual_max, DualMaximum::Stable(_)) || primal_finite;
    Ok(FinitenessReport {
        dual_max,
        primal_finite,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::fixtures;
    use crate::functions::generate;
    use crate::functions::{PieceShape, UnivariatePiece};
    use crate::integral_convexity::{is_integrally_convex_function, IcMode};
    use proptest::prelude::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn minimize_fixtures() {
        let (f, g) = fixtures::e35();
        let (x, v) = minimize_difference(&f, &g).unwrap();
        assert_eq!(v, b(0));
        // Oracle: lexicographically smallest zero of |a+b-1| - 1 + |a-b|.
        let mut want = None;
        'outer: for a in -3..=3i64 {
            for bb in -3..=3i64 {
                if (a + bb - 1).abs() - 1 + (a - bb).abs() == 0 {
                    want = Some(LatticePoint::from_i64(&[a, bb]));
                    break 'outer;
                }
            }
        }
        assert_eq!(Some(x), want);
        let (f, g) = fixtures::e36();
        assert_eq!(minimize_difference(&f, &g).unwrap().1, b(0));
        let zero = SeparableFunction::zero(2, Orientation::Concave);
        assert_eq!(
            minimize_difference(&fixtures::ex49(), &zero).unwrap(),
            (LatticePoint::zero(2), b(0))
        );
    }

    #[test]
    fn empty_intersection() {
        let f = TableFunction::from_i64(1, &[(&[5], 0)]).unwrap();
        let psi = SeparableFunction::new(
            Orientation::Concave,
            vec![UnivariatePiece::breakpoints(0, &[0, 0]).unwrap()],
        )
        .unwrap();
        assert_eq!(minimize_difference(&f, &psi), Err(Error::EmptyIntersection));
    }

    #[test]
    fn local_minimum_examples() {
        let f = fixtures::ex49();
        assert!(local_minimum_check(&f, &LatticePoint::zero(2)).unwrap());
        assert!(!local_minimum_check(&f, &LatticePoint::from_i64(&[1, 1])).unwrap());
        let single = TableFunction::from_i64(2, &[(&[4, 4], 9)]).unwrap();
        assert!(local_minimum_check(&single, &LatticePoint::from_i64(&[4, 4])).unwrap());
        assert!(matches!(
            local_minimum_check(&single, &LatticePoint::zero(2)),
            Err(Error::PointOutsideDomain(_))
        ));
    }

    #[test]
    fn ex49_with_l1() {
        let f = fixtures::ex49();
        let psi = SeparableFunction::neg_l1(2, 1);
        let cert = fenchel_certificate(&f, &psi).unwrap();
        assert_eq!(cert.primal_point, LatticePoint::zero(2));
        assert_eq!(cert.primal_value, b(0));
        assert_eq!(cert.dual_value, b(0));
        assert_eq!(
            cert.trace.dual_box,
            IntegralBox::from_bounds(&[-1, -1], &[1, 1]).unwrap()
        );
        // Oracle: integer p in [-1,1]^2 that satisfy the eight subgradient rows.
        let rows = [
            (1, 1, 4),
            (1, -1, 4),
            (-1, 1, 2),
            (-1, -1, 3),
            (1, 0, 4),
            (-1, 0, 2),
            (0, 1, 3),
            (0, -1, 3),
        ];
        let p: Vec<i64> = cert.dual_point.coords().iter().map(|c| c.try_into().unwrap()).collect();
        assert!(p.iter().all(|c| c.abs() <= 1));
        assert!(rows.iter().all(|(u, v, c)| u * p[0] + v * p[1] <= *c));
        // The pick rule takes lower endpoints first.
        assert_eq!(cert.dual_point, LatticePoint::from_i64(&[-1, -1]));
        assert!(cert.verify(&f, &psi).unwrap());
    }

    #[test]
    fn linear_psi_gives_negated_conjugate() {
        let f = fixtures::ex49();
        let psi = SeparableFunction::zero(2, Orientation::Concave);
        let cert = fenchel_certificate(&f, &psi).unwrap();
        assert_eq!(cert.dual_value, -f.conjugate(&LatticePoint::zero(2)).unwrap());
        let single = TableFunction::from_i64(2, &[(&[2, -1], 7)]).unwrap();
        let cert = fenchel_certificate(&single, &psi).unwrap();
        assert_eq!(cert.primal_point, LatticePoint::from_i64(&[2, -1]));
        assert_eq!(cert.primal_value, b(7));
        assert_eq!(cert.dual_value, b(7));
    }

    #[test]
    fn convex_psi_rejected() {
        let psi = SeparableFunction::zero(2, Orientation::Convex);
        assert!(matches!(
            fenchel_certificate(&fixtures::ex49(), &psi),
            Err(Error::InvalidFunction(_))
        ));
    }

    #[test]
    fn weak_duality_examples() {
        let (f, g) = fixtures::e35();
        assert_eq!(g.concave_conjugate(&LatticePoint::zero(2)).unwrap(), b(-1));
        assert_eq!(f.conjugate(&LatticePoint::zero(2)).unwrap(), b(0));
        assert!(weak_duality_audit(&f, &g, &[LatticePoint::zero(2)]).unwrap());
        let (f, g) = fixtures::e36();
        let st: Vec<LatticePoint> = [[0, 0], [1, 1], [1, 0], [0, 1]]
            .iter()
            .map(|p| LatticePoint::from_i64(p))
            .collect();
        assert!(weak_duality_audit(&f, &g, &st).unwrap());
    }

    #[test]
    fn e35_chain() {
        let (f, g) = fixtures::e35();
        let r = counterexample_gap_report(&f, &g, &generate::symmetric_box(2, 3), ConjugateMode::Window).unwrap();
        assert_eq!(r.chain(), [0.into(), (-1).into(), (-1).into(), (-1).into()]);
        assert_eq!(r.maximizer, Some(LatticePoint::zero(2)));
    }

    #[test]
    fn e36_chain() {
        let (f, g) = fixtures::e36();
        let r = counterexample_gap_report(&f, &g, &generate::symmetric_box(2, 3), ConjugateMode::Window).unwrap();
        assert_eq!(r.chain(), [0.into(), 0.into(), 0.into(), ExtRational::NegInf]);
    }

    #[test]
    fn window_conjugates_match_closed_sets() {
        // S and T from the definitions of f and g, checked on [-2,2]^2.
        let (f, g) = fixtures::e35();
        for p in generate::symmetric_box(2, 2).lattice_points().unwrap() {
            let c: Vec<i64> = p.coords().iter().map(|v| v.try_into().unwrap()).collect();
            let in_s = c[0] == c[1] && c[0].abs() <= 1;
            let in_t = c[0] == -c[1] && c[0].abs() <= 1;
            let fc = convex_conjugate_mode(&f, &p, ConjugateMode::Window).unwrap();
            let gc = concave_conjugate_mode(&g, &p, ConjugateMode::Window).unwrap();
            assert_eq!(fc, if in_s { ExtInt::from(c[0]) } else { ExtInt::PosInf }, "{p}");
            assert_eq!(gc, if in_t { ExtInt::from(-1) } else { ExtInt::NegInf }, "{p}");
        }
    }

    #[test]
    fn gap_rejects_dimension_three() {
        let f = fixtures::r47();
        assert!(matches!(
            counterexample_gap_report(&f, &f, &generate::symmetric_box(3, 1), ConjugateMode::Exact),
            Err(Error::UnsupportedDimension { .. })
        ));
    }

    #[test]
    fn ic_pair_chain_is_flat() {
        let f = generate::random_2separable(11, 2, 2, false);
        let psi = generate::random_separable_concave(5, 2, false);
        let g = psi.tabulate(&f.bounding_box()).unwrap();
        let r = counterexample_gap_report(&f, &g, &generate::symmetric_box(2, 12), ConjugateMode::Exact).unwrap();
        let c = r.chain();
        assert!(c.iter().all(|v| *v == c[0]), "{c:?}");
    }

    #[test]
    fn continuous_legs_on_small_case() {
        // f = |x| on {-1,0,1}, g = 0 on {0, 1}: min of f¯ - g¯ is 0 at x = 0.
        let f = TableFunction::from_i64(1, &[(&[-1], 1), (&[0], 0), (&[1], 1)]).unwrap();
        let g = TableFunction::from_i64(1, &[(&[0], 0), (&[1], 0)]).unwrap();
        assert_eq!(continuous_minimum(&f, &g).unwrap(), 0.into());
        assert_eq!(continuous_dual_maximum(&f, &g).unwrap(), 0.into());
        let far = TableFunction::from_i64(1, &[(&[5], 0)]).unwrap();
        assert_eq!(continuous_minimum(&f, &far).unwrap(), ExtRational::PosInf);
        assert_eq!(continuous_dual_maximum(&f, &far).unwrap(), ExtRational::PosInf);
        let half = TableFunction::from_i64(1, &[(&[0], 0), (&[1], 1)]).unwrap();
        let neg = TableFunction::from_i64(1, &[(&[0], 0), (&[1], 2)]).unwrap();
        assert_eq!(continuous_minimum(&half, &neg).unwrap(), (-1).into());
        assert_eq!(ExtRational::Finite(rat(1, 2)).to_string(), "1/2");
    }

    #[test]
    fn conjugate_class_ex49() {
        let f = fixtures::ex49();
        let g = f.conjugate_table(&generate::symmetric_box(2, 5)).unwrap();
        let psi = SeparableFunction::zero(2, Orientation::Concave);
        let c = conjugate_class_certificate(&g, &psi, &f).unwrap();
        // With Psi = 0 both sides are min f• = -f(0).
        assert_eq!(c.primal_value, -f.get(&LatticePoint::zero(2)).unwrap());
        assert_eq!(c.dual_value, c.primal_value);
        assert!(c.table_biconjugate_exact);
    }

    #[test]
    fn conjugate_class_box_too_small() {
        let f = fixtures::ex49();
        let g = f.conjugate_table(&generate::symmetric_box(2, 5)).unwrap();
        // Psi strongly rewarding far points pushes the minimizer of g - Psi off the box.
        let psi = SeparableFunction::linear(&LatticePoint::from_i64(&[4, 0]), Orientation::Concave);
        let out = conjugate_class_certificate(&g, &psi, &f);
        // Oracle: dual side max over p in dom f of Psi°(p) - f(p) needs p = (4,0),
        // which is outside dom f, so Psi° is -inf there.
        assert!(matches!(out, Err(Error::BoxTooSmall(_))));
    }

    #[test]
    fn finiteness_examples() {
        let f = fixtures::ex49();
        let psi = SeparableFunction::neg_l1(2, 1);
        let r = finiteness_propagation_check(&f, &psi, &generate::symmetric_box(2, 4)).unwrap();
        assert!(matches!(r.dual_max, DualMaximum::Stable(_)));
        assert!(r.primal_finite && r.holds);
        let f = TableFunction::from_i64(1, &[(&[0], 0)]).unwrap();
        let psi = SeparableFunction::new(
            Orientation::Concave,
            vec![UnivariatePiece::new(PieceShape::Breakpoints(vec![b(0)]), ExtInt::from(5), ExtInt::from(5)).unwrap()],
        )
        .unwrap();
        let r = finiteness_propagation_check(&f, &psi, &generate::symmetric_box(1, 4)).unwrap();
        assert_eq!(r.dual_max, DualMaximum::Growing);
        assert!(!r.primal_finite && r.holds);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn strong_duality_2separable(seed in 0u64..10_000, n in 1usize..=3, restrict in any::<bool>()) {
            let f = generate::random_2separable(seed, n, 2, restrict);
            let psi = generate::random_separable_concave(seed ^ 0x5eed, n, true);
            let cert = fenchel_certificate(&f, &psi).unwrap();
            prop_assert_eq!(&cert.primal_value, &cert.dual_value);
            prop_assert!(cert.verify(&f, &psi).unwrap());
            // Oracle: brute-force minimum of f - Psi.
            let m = f.iter().filter_map(|(x, v)| psi.value(x).map(|w| v - w)).min().unwrap();
            prop_assert_eq!(cert.primal_value, m);
        }

        #[test]
        fn weak_duality_random(seed in 0u64..10_000) {
            let f = generate::random_table(seed, 2, 2, 6, 0.7);
            let psi = generate::random_separable_concave(seed, 2, true);
            let samples: Vec<LatticePoint> = generate::symmetric_box(2, 4).lattice_points().unwrap();
            prop_assert!(weak_duality_audit(&f, &psi, &samples).unwrap());
        }

        #[test]
        fn local_equals_global_for_ic(seed in 0u64..10_000) {
            let f = generate::random_2separable(seed, 2, 2, true);
            prop_assert!(is_integrally_convex_function(&f, IcMode::DomainAndDistanceTwo).holds);
            let min = f.min_value().clone();
            for (x, v) in f.iter() {
                prop_assert_eq!(local_minimum_check(&f, x).unwrap(), *v == min);
            }
        }

        #[test]
        fn discrete_equals_continuous_minimum(seed in 0u64..10_000) {
            let f = generate::random_2separable(seed, 2, 2, true);
            let psi = generate::random_separable_concave(seed.wrapping_mul(7), 2, true);
            let (_, m) = minimize_difference(&f, &psi).unwrap();
            prop_assert_eq!(continuous_minimum_separable(&f, &psi).unwrap(), ExtRational::Finite(int_to_rat(&m)));
        }
    }
}
