//! Integral neighborhoods, the local convex extension and integral
//! convexity checks for sets and functions.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{ceil, floor, grid, int_to_rat, rational_is_integer, LatticePoint, Rational};
use crate::error::Result;
use crate::functions::{generate, SeparableFunction, TableFunction};
use crate::lp::{solve_standard, LpOutcome};

/// Integer points `y` with `floor(z) <= y <= ceil(z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborhoodSystem {
    pub center: Vec<Rational>,
    pub members: Vec<LatticePoint>,
}

pub fn integral_neighborhood(z: &[Rational]) -> NeighborhoodSystem {
    let lo: Vec<BigInt> = z.iter().map(floor).collect();
    let hi: Vec<BigInt> = z.iter().map(ceil).collect();
    NeighborhoodSystem {
        center: z.to_vec(),
        members: grid(&lo, &hi),
    }
}

/// `min sum l_y f(y)` over convex combinations of `points` equal to `z`.
/// `None` means infeasible (`+inf`).
fn envelope_lp<'a, I>(f: &TableFunction, z: &[Rational], points: I, local: bool) -> Option<Rational>
where
    I: IntoIterator<Item = &'a LatticePoint>,
{
    let pts: Vec<(&LatticePoint, &BigInt)> = points.into_iter().filter_map(|y| f.get(y).map(|v| (y, v))).collect();
    if pts.is_empty() {
        return None;
    }
    // Inside a cell the integral coordinates are fixed, so only the others
    // need equality rows.
    let rows: Vec<usize> = (0..z.len())
        .filter(|&j| !local || !rational_is_integer(&z[j]))
        .collect();
    let fixed_ok = |y: &LatticePoint| {
        (0..z.len())
            .filter(|j| !rows.contains(j))
            .all(|j| int_to_rat(&y.0[j]) == z[j])
    };
    let pts: Vec<_> = pts.into_iter().filter(|(y, _)| fixed_ok(y)).collect();
    if pts.is_empty() {
        return None;
    }
    let mut a: Vec<Vec<Rational>> = rows
        .iter()
        .map(|&j| pts.iter().map(|(y, _)| int_to_rat(&y.0[j])).collect())
        .collect();
    a.push(vec![Rational::one(); pts.len()]);
    let mut b: Vec<Rational> = rows.iter().map(|&j| z[j].clone()).collect();
    b.push(Rational::one());
    let c: Vec<Rational> = pts.iter().map(|(_, v)| int_to_rat(v)).collect();
    match solve_standard(&a, &b, &c) {
        LpOutcome::Optimal { value, .. } => Some(value),
        _ => None,
    }
}

/// Local convex extension `f~(z)`; `None` stands for `+inf`.
pub fn local_extension(f: &TableFunction, z: &[Rational]) -> Option<Rational> {
    if z.len() != f.dim() {
        return None;
    }
    if z.iter().all(rational_is_integer) {
        let x = LatticePoint(z.iter().map(floor).collect());
        return f.get(&x).map(int_to_rat);
    }
    let nb = integral_neighborhood(z);
    envelope_lp(f, z, &nb.members, true)
}

/// Convex envelope `f¯(z)` from an LP over the whole domain.
pub fn convex_envelope(f: &TableFunction, z: &[Rational]) -> Option<Rational> {
    if z.len() != f.dim() {
        return None;
    }
    envelope_lp(f, z, f.domain(), false)
}

/// Local extension of a separable function, by tabulating it on the cell of `z`.
pub fn local_extension_separable(phi: &SeparableFunction, z: &[Rational]) -> Option<Rational> {
    let nb = integral_neighborhood(z);
    let entries = nb
        .members
        .into_iter()
        .filter_map(|y| phi.value(&y).map(|v| (y, v)))
        .collect::<std::collections::BTreeMap<_, _>>();
    let t = TableFunction::new(z.len(), entries).ok()?;
    local_extension(&t, z)
}

fn midpoint(x: &LatticePoint, y: &LatticePoint) -> Vec<Rational> {
    x.0.iter()
        .zip(&y.0)
        .map(|(a, b)| Rational::new(a + b, BigInt::from(2)))
        .collect()
}

/// Unordered pairs `(x, y)` with `y < x`, `x` taken in decreasing and `y` in
/// increasing lexicographic order.
fn ordered_pairs<'a>(pts: &[&'a LatticePoint]) -> Vec<(&'a LatticePoint, &'a LatticePoint)> {
    let mut out = Vec::new();
    for (i, x) in pts.iter().enumerate().rev() {
        for y in &pts[..i] {
            out.push((*x, *y));
        }
    }
    out
}

/// Result of a set check; on failure, the pair whose midpoint escapes the
/// local hull.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetCheck {
    pub holds: bool,
    pub pair: Option<(LatticePoint, LatticePoint)>,
    pub witness: Option<Vec<Rational>>,
}

/// Whether `s` is integrally convex.
///
/// Uses the midpoint criterion on the indicator function: for all
/// `x, y in S` with `|x-y|_inf >= 2`, `(x+y)/2` must lie in
/// `conv(S ∩ N((x+y)/2))`. This is exact in every dimension.
pub fn is_integrally_convex_set(s: &BTreeSet<LatticePoint>) -> SetCheck {
    let indicator = match TableFunction::from_pairs(
        s.iter().next().map_or(1, LatticePoint::dim),
        s.iter().map(|x| (x.clone(), BigInt::zero())),
    ) {
        Ok(t) => t,
        Err(_) => {
            return SetCheck {
                holds: true,
                pair: None,
                witness: None,
            }
        }
    };
    let pts: Vec<&LatticePoint> = s.iter().collect();
    let two = BigInt::from(2);
    let bad = ordered_pairs(&pts)
        .into_par_iter()
        .find_first(|(x, y)| x.dist_inf(y) >= two && local_extension(&indicator, &midpoint(x, y)).is_none());
    match bad {
        None => SetCheck {
            holds: true,
            pair: None,
            witness: None,
        },
        Some((x, y)) => SetCheck {
            holds: false,
            witness: Some(midpoint(x, y)),
            pair: Some((x.clone(), y.clone())),
        },
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcMode {
    /// Domain check plus midpoint inequality for `|x-y|_inf = 2`.
    DomainAndDistanceTwo,
    /// Midpoint inequality for all `|x-y|_inf >= 2`.
    AllFarPairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcFailure {
    pub x: LatticePoint,
    pub y: LatticePoint,
    pub midpoint: Vec<Rational>,
    /// `f~` at the midpoint (`None` is `+inf`).
    pub local_value: Option<Rational>,
    /// `(f(x) + f(y)) / 2`.
    pub bound: Rational,
    /// True when the failure came from the domain check.
    pub domain: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IcCheck {
    pub holds: bool,
    pub failure: Option<IcFailure>,
}

fn midpoint_failure(f: &TableFunction, x: &LatticePoint, y: &LatticePoint) -> Option<IcFailure> {
    let mid = midpoint(x, y);
    let bound = Rational::new(f.get(x)? + f.get(y)?, BigInt::from(2));
    let local = local_extension(f, &mid);
    let ok = matches!(&local, Some(v) if *v <= bound);
    (!ok).then(|| IcFailure {
        x: x.clone(),
        y: y.clone(),
        midpoint: mid,
        local_value: local,
        bound,
        domain: false,
    })
}

/// Integral convexity of a function with finite domain.
pub fn is_integrally_convex_function(f: &TableFunction, mode: IcMode) -> IcCheck {
    let pts: Vec<&LatticePoint> = f.domain().collect();
    let two = BigInt::from(2);
    if mode == IcMode::DomainAndDistanceTwo {
        let dom: BTreeSet<LatticePoint> = f.domain().cloned().collect();
        let set = is_integrally_convex_set(&dom);
        if let Some((x, y)) = set.pair {
            let mid = set.witness.unwrap();
            let bound = Rational::new(f.get(&x).unwrap() + f.get(&y).unwrap(), two);
            return IcCheck {
                holds: false,
                failure: Some(IcFailure {
                    local_value: local_extension(f, &mid),
                    x,
                    y,
                    midpoint: mid,
                    bound,
                    domain: true,
                }),
            };
        }
    }
    let failure = ordered_pairs(&pts).into_par_iter().find_map_first(|(x, y)| {
        let d = x.dist_inf(y);
        let relevant = match mode {
            IcMode::DomainAndDistanceTwo => d == two,
            IcMode::AllFarPairs => d >= two,
        };
        if relevant {
            midpoint_failure(f, x, y)
        } else {
            None
        }
    });
    IcCheck {
        holds: failure.is_none(),
        failure,
    }
}

/// All points of the bounding box of `f`'s domain whose coordinates are
/// integers or half-integers.
pub fn half_integer_points(f: &TableFunction) -> Vec<Vec<Rational>> {
    let bb = f.bounding_box();
    let lo: Vec<BigInt> = bb.lower().iter().map(|v| v.as_finite().unwrap() * 2).collect();
    let hi: Vec<BigInt> = bb.upper().iter().map(|v| v.as_finite().unwrap() * 2).collect();
    grid(&lo, &hi)
        .into_iter()
        .map(|p| p.0.into_iter().map(|c| Rational::new(c, BigInt::from(2))).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopeSumReport {
    pub holds: bool,
    /// First sample where `(f+Phi)~ != f~ + Phi~`, with both sides.
    pub failure: Option<(Vec<Rational>, Option<Rational>, Option<Rational>)>,
}

/// Checks `(f + Phi)~(z) = f~(z) + Phi~(z)` at every sample.
pub fn envelope_sum_check(
    f: &TableFunction,
    phi: &SeparableFunction,
    samples: &[Vec<Rational>],
) -> Result<EnvelopeSumReport> {
    let sum = f.add_fn(|x| phi.value(x))?;
    let failure = samples.par_iter().find_map_first(|z| {
        let lhs = local_extension(&sum, z);
        let rhs = match (local_extension(f, z), local_extension_separable(phi, z)) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        (lhs != rhs).then(|| (z.clone(), lhs, rhs))
    });
    Ok(EnvelopeSumReport {
        holds: failure.is_none(),
        failure,
    })
}

/// Draws random tables on `[-r, r]^n` until one is not integrally convex and
/// satisfies `accept`. Returns the seed offset used and the table.
pub fn sample_non_ic<F>(
    seed: u64,
    n: usize,
    r: i64,
    vmax: i64,
    max_tries: u64,
    accept: F,
) -> Option<(u64, TableFunction)>
where
    F: Fn(&TableFunction) -> bool,
{
    (0..max_tries).find_map(|t| {
        let f = generate::random_table(seed.wrapping_add(t), n, r, vmax, 1.0);
        let ic = is_integrally_convex_function(&f, IcMode::DomainAndDistanceTwo).holds;
        (!ic && accept(&f)).then_some((t, f))
    })
}
