//! Bisubmodular functions on `3^N`: the defining inequality, the polyhedron
//! `P(f)`, convolution with a box and exhaustive checks of the two min-max
//! formulas for `z(N)` and `z(A) - z(B)`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{grid, int_to_rat, unit_displacements, ExtInt, IntegralBox, LatticePoint, Rational};
use crate::error::{Error, Result};
use crate::functions::{Orientation, PieceShape, SeparableFunction, UnivariatePiece};

/// A pair `(X, Y)` of disjoint subsets of `{0..n-1}`, as `e_X - e_Y`.
pub type SignedSet = Vec<i8>;

/// `e_X - e_Y` from index lists.
pub fn signed_from_sets(n: usize, x: &[usize], y: &[usize]) -> Result<SignedSet> {
    let mut v = vec![0i8; n];
    for &i in x {
        if i >= n {
            return Err(Error::InvalidFunction(format!(
                "element {i} outside ground set of size {n}"
            )));
        }
        v[i] = 1;
    }
    for &i in y {
        if i >= n {
            return Err(Error::InvalidFunction(format!(
                "element {i} outside ground set of size {n}"
            )));
        }
        if v[i] == 1 {
            return Err(Error::InvalidFunction(format!("element {i} in both X and Y")));
        }
        v[i] = -1;
    }
    Ok(v)
}

/// `(X, Y)` index lists of a signed vector.
pub fn sets_of(s: &[i8]) -> (Vec<usize>, Vec<usize>) {
    let pick = |sign: i8| (0..s.len()).filter(|&i| s[i] == sign).collect();
    (pick(1), pick(-1))
}

fn index_of(s: &[i8]) -> usize {
    s.iter().fold(0, |acc, &c| acc * 3 + (c + 1) as usize)
}

fn meet(a: &[i8], b: &[i8]) -> SignedSet {
    a.iter().zip(b).map(|(&x, &y)| if x == y { x } else { 0 }).collect()
}

fn join(a: &[i8], b: &[i8]) -> SignedSet {
    a.iter().zip(b).map(|(&x, &y)| (x + y).signum()).collect()
}

/// Disjoint `(X, Y)` given as element lists.
pub type SetPair = (Vec<usize>, Vec<usize>);

/// Integer function on `3^N` with `f(∅, ∅) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisubFunction {
    n: usize,
    /// Values in lexicographic order of the signed vectors.
    values: Vec<BigInt>,
}

impl BisubFunction {
    pub fn from_fn(n: usize, mut g: impl FnMut(&[i8]) -> BigInt) -> Result<Self> {
        let values: Vec<BigInt> = unit_displacements(n).iter().map(|s| g(s)).collect();
        Self::from_values(n, values)
    }

    /// Values listed in lexicographic order of `{-1,0,1}^n`.
    pub fn from_values(n: usize, values: Vec<BigInt>) -> Result<Self> {
        if values.len() != 3usize.pow(n as u32) {
            return Err(Error::InvalidFunction(format!(
                "expected {} values, found {}",
                3usize.pow(n as u32),
                values.len()
            )));
        }
        let f = BisubFunction { n, values };
        if !f.value(&vec![0; n]).is_zero() {
            return Err(Error::InvalidFunction("f(∅, ∅) must be 0".into()));
        }
        Ok(f)
    }

    /// From `((X, Y), value)` entries covering all of `3^N` exactly once.
    pub fn from_pairs(n: usize, pairs: &[(SetPair, BigInt)]) -> Result<Self> {
        let mut slots: Vec<Option<BigInt>> = vec![None; 3usize.pow(n as u32)];
        for ((x, y), v) in pairs {
            let s = signed_from_sets(n, x, y)?;
            let slot = &mut slots[index_of(&s)];
            if slot.is_some() {
                return Err(Error::InvalidFunction(format!("duplicate entry for {x:?}, {y:?}")));
            }
            *slot = Some(v.clone());
        }
        let values = slots
            .into_iter()
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::InvalidFunction("table must cover all of 3^N".into()))?;
        Self::from_values(n, values)
    }

    /// `w(X, Y) = beta(X) - alpha(Y)`.
    pub fn box_function(alpha: &[i64], beta: &[i64]) -> Result<Self> {
        check_bounds(alpha, beta)?;
        Self::from_fn(alpha.len(), |s| {
            s.iter()
                .enumerate()
                .map(|(i, &c)| match c {
                    1 => BigInt::from(beta[i]),
                    -1 => -BigInt::from(alpha[i]),
                    _ => BigInt::zero(),
                })
                .sum()
        })
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn value(&self, s: &[i8]) -> &BigInt {
        &self.values[index_of(s)]
    }

    /// `(signed vector, value)` in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (SignedSet, &BigInt)> {
        unit_displacements(self.n).into_iter().zip(&self.values)
    }

    /// `f({i}, ∅)` and `f(∅, {i})`, the bounds `-f(∅,{i}) <= z_i <= f({i},∅)`.
    fn singleton_bounds(&self, i: usize) -> (BigInt, BigInt) {
        let mut e = vec![0i8; self.n];
        e[i] = -1;
        let lo = -self.value(&e);
        e[i] = 1;
        (lo, self.value(&e).clone())
    }
}

fn check_bounds(alpha: &[i64], beta: &[i64]) -> Result<()> {
    if alpha.len() != beta.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: beta.len(),
        });
    }
    if alpha.iter().zip(beta).any(|(a, b)| a > b) {
        return Err(Error::InvalidBox("alpha must not exceed beta".into()));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BisubCheck {
    pub holds: bool,
    /// First violating pair `((X1,Y1), (X2,Y2))`.
    pub violation: Option<(SignedSet, SignedSet)>,
}

/// Checks `f(x) + f(y) >= f(x ⊓ y) + f(x ⊔ y)` over all pairs.
pub fn is_bisubmodular(f: &BisubFunction) -> BisubCheck {
    let all = unit_displacements(f.n);
    let violation = all.par_iter().enumerate().find_map_first(|(i, a)| {
        all[i..].iter().find_map(|b| {
            let lhs = f.value(a) + f.value(b);
            let rhs = f.value(&meet(a, b)) + f.value(&join(a, b));
            (lhs < rhs).then(|| (a.clone(), b.clone()))
        })
    });
    BisubCheck {
        holds: violation.is_none(),
        violation,
    }
}

/// `z(X) - z(Y) <= f(X, Y)` for every `(X, Y)`.
pub fn polyhedron_membership(f: &BisubFunction, z: &[Rational]) -> Result<bool> {
    if z.len() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: z.len(),
        });
    }
    Ok(f.iter().all(|(s, v)| signed_dot(&s, z) <= int_to_rat(v)))
}

fn signed_dot(s: &[i8], z: &[Rational]) -> Rational {
    s.iter().zip(z).fold(Rational::zero(), |acc, (&c, v)| match c {
        1 => acc + v,
        -1 => acc - v,
        _ => acc,
    })
}

fn signed_dot_int(s: &[i8], z: &[BigInt]) -> BigInt {
    s.iter().zip(z).fold(BigInt::zero(), |acc, (&c, v)| match c {
        1 => acc + v,
        -1 => acc - v,
        _ => acc,
    })
}

/// All integer points of `P(f) ∩ box`. The singleton rows always give finite
/// bounds, so the enumeration is finite for every table.
pub fn enumerate_integer_points(f: &BisubFunction, bx: &IntegralBox) -> Result<BTreeSet<LatticePoint>> {
    if bx.dim() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: bx.dim(),
        });
    }
    let mut lo = Vec::with_capacity(f.n);
    let mut hi = Vec::with_capacity(f.n);
    for i in 0..f.n {
        let (l, h) = f.singleton_bounds(i);
        let l = match &bx.lower()[i] {
            ExtInt::Finite(b) if *b > l => b.clone(),
            _ => l,
        };
        let h = match &bx.upper()[i] {
            ExtInt::Finite(b) if *b < h => b.clone(),
            _ => h,
        };
        if l > h {
            return Ok(BTreeSet::new());
        }
        lo.push(l);
        hi.push(h);
    }
    Ok(grid(&lo, &hi)
        .into_par_iter()
        .filter(|z| f.iter().all(|(s, v)| signed_dot_int(&s, z.coords()) <= *v))
        .collect::<Vec<_>>()
        .into_iter()
        .collect())
}

/// Both sides of a min-max identity with their witnesses.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinMaxReport {
    pub lhs: BigInt,
    pub rhs: BigInt,
    /// Integer point attaining the maximum.
    pub primal_witness: LatticePoint,
    /// `(X, Y)` attaining the minimum.
    pub dual_witness: SignedSet,
    pub holds: bool,
}

fn min_over_pairs(f: &BisubFunction, cost: impl Fn(&[i8]) -> BigInt) -> (BigInt, SignedSet) {
    f.iter().map(|(s, v)| (v + cost(&s), s)).min().expect("3^N is nonempty")
}

/// `max{z(N) : z in P(f) ∩ Z^n, z <= w}` against
/// `min{f(X,Y) + w(N \ X) + w(Y)}`.
pub fn minmax_cgk(f: &BisubFunction, w: &LatticePoint) -> Result<MinMaxReport> {
    if w.dim() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: w.dim(),
        });
    }
    let bx = IntegralBox::new(
        vec![ExtInt::NegInf; f.n],
        w.coords().iter().cloned().map(ExtInt::Finite).collect(),
    )?;
    let pts = enumerate_integer_points(f, &bx)?;
    let (lhs, primal_witness) = pts
        .into_iter()
        .map(|z| (z.coords().iter().sum::<BigInt>(), z))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .ok_or_else(|| Error::InfeasiblePrecondition("no z in P(f) with z <= w".into()))?;
    let (rhs, dual_witness) = min_over_pairs(f, |s| {
        (0..f.n)
            .map(|i| match s[i] {
                1 => BigInt::zero(),
                0 => w.0[i].clone(),
                _ => &w.0[i] * 2,
            })
            .sum()
    });
    Ok(MinMaxReport {
        holds: lhs == rhs,
        lhs,
        rhs,
        primal_witness,
        dual_witness,
    })
}

/// `max{z(A) - z(B) : z in P(f) ∩ Z^n, alpha <= z <= beta}` against
/// `min{f(X,Y) + beta(A\X) + beta(Y\B) - alpha(B\Y) - alpha(X\A)}`, where
/// `ab = e_A - e_B`.
pub fn minmax_fp(f: &BisubFunction, alpha: &[i64], beta: &[i64], ab: &[i8]) -> Result<MinMaxReport> {
    check_bounds(alpha, beta)?;
    if alpha.len() != f.n || ab.len() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: if alpha.len() != f.n { alpha.len() } else { ab.len() },
        });
    }
    let bx = IntegralBox::from_bounds(alpha, beta)?;
    let pts = enumerate_integer_points(f, &bx)?;
    let (lhs, primal_witness) = pts
        .into_iter()
        .map(|z| (signed_dot_int(ab, z.coords()), z))
        .max_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)))
        .ok_or_else(|| Error::InfeasiblePrecondition("P(f) misses the box".into()))?;
    let (rhs, dual_witness) = min_over_pairs(f, |s| box_correction(ab, s, alpha, beta));
    Ok(MinMaxReport {
        holds: lhs == rhs,
        lhs,
        rhs,
        primal_witness,
        dual_witness,
    })
}

/// `beta(A\X) + beta(Y\B) - alpha(B\Y) - alpha(X\A)`.
fn box_correction(ab: &[i8], xy: &[i8], alpha: &[i64], beta: &[i64]) -> BigInt {
    let mut total = 0i64;
    for i in 0..ab.len() {
        let (a, b) = (ab[i] == 1, ab[i] == -1);
        let (x, y) = (xy[i] == 1, xy[i] == -1);
        if a && !x {
            total += beta[i];
        }
        if y && !b {
            total += beta[i];
        }
        if b && !y {
            total -= alpha[i];
        }
        if x && !a {
            total -= alpha[i];
        }
    }
    BigInt::from(total)
}

/// Convolution `f ∘ w_{alpha beta}`. Fails when `P(f)` misses the box, since
/// the result would not vanish at `(∅, ∅)`.
pub fn box_convolution(f: &BisubFunction, alpha: &[i64], beta: &[i64]) -> Result<BisubFunction> {
    check_bounds(alpha, beta)?;
    if alpha.len() != f.n {
        return Err(Error::DimensionMismatch {
            expected: f.n,
            found: alpha.len(),
        });
    }
    let values: Vec<BigInt> = unit_displacements(f.n)
        .iter()
        .map(|ab| min_over_pairs(f, |s| box_correction(ab, s, alpha, beta)).0)
        .collect();
    if !values[index_of(&vec![0; f.n])].is_zero() {
        return Err(Error::InfeasiblePrecondition("P(f) misses the box".into()));
    }
    let out = BisubFunction { n: f.n, values };
    if is_bisubmodular(f).holds && !is_bisubmodular(&out).holds {
        return Err(Error::InternalInfeasible("convolution is not bisubmodular".into()));
    }
    Ok(out)
}

/// Checks `z in P(f ∘ w)` iff `z in P(f)` and `alpha <= z <= beta` at every sample.
pub fn convolution_audit(
    f: &BisubFunction,
    conv: &BisubFunction,
    alpha: &[i64],
    beta: &[i64],
    samples: &[Vec<Rational>],
) -> Result<bool> {
    let bx = IntegralBox::from_bounds(alpha, beta)?;
    for z in samples {
        let left = polyhedron_membership(conv, z)?;
        let right = polyhedron_membership(f, z)? && bx.contains(z)?;
        if left != right {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Half-integer points of `[lo, hi]^n`.
pub fn half_integer_samples(n: usize, lo: i64, hi: i64) -> Vec<Vec<Rational>> {
    grid(&vec![BigInt::from(2 * lo); n], &vec![BigInt::from(2 * hi); n])
        .into_iter()
        .map(|p| p.0.into_iter().map(|c| Rational::new(c, BigInt::from(2))).collect())
        .collect()
}

/// Separable concave `Psi` with kinks at `1` on `A`, `-1` on `B` and `0`
/// elsewhere, slope `beta_i` to the left and `alpha_i` to the right.
pub fn build_psi_from_signed_pair(ab: &[i8], alpha: &[i64], beta: &[i64]) -> Result<SeparableFunction> {
    check_bounds(alpha, beta)?;
    if ab.len() != alpha.len() {
        return Err(Error::DimensionMismatch {
            expected: alpha.len(),
            found: ab.len(),
        });
    }
    let pieces = (0..ab.len())
        .map(|i| {
            UnivariatePiece::on_z(PieceShape::Kinked {
                k0: BigInt::from(ab[i]),
                value: BigInt::zero(),
                left_slope: BigInt::from(beta[i]),
                right_slope: BigInt::from(alpha[i]),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    SeparableFunction::new(Orientation::Concave, pieces)
}

/// Random bisubmodular function: a box function plus monotone coverage
/// terms on the support, then random unit perturbations kept only when the
/// inequality survives.
pub fn random_bisubmodular(seed: u64, n: usize) -> BisubFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alpha = Vec::with_capacity(n);
    let mut beta = Vec::with_capacity(n);
    for _ in 0..n {
        let a: i64 = rng.gen_range(-3..=2);
        alpha.push(a);
        beta.push(a + rng.gen_range(0..=3));
    }
    let mut covers: Vec<(Vec<bool>, i64)> = Vec::new();
    for _ in 0..rng.gen_range(0..=2) {
        let t: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        covers.push((t, rng.gen_range(0..=2)));
    }
    let base = BisubFunction::box_function(&alpha, &beta).expect("alpha <= beta");
    let mut f = BisubFunction::from_fn(n, |s| {
        let cover: i64 = covers
            .iter()
            .filter(|(t, _)| s.iter().zip(t).any(|(&c, &hit)| c != 0 && hit))
            .map(|(_, c)| c)
            .sum();
        base.value(s) + cover
    })
    .expect("normalized");
    let all = unit_displacements(n);
    for _ in 0..4 * n {
        let idx = rng.gen_range(0..all.len());
        if all[idx].iter().all(|&c| c == 0) {
            continue;
        }
        let mut g = f.clone();
        g.values[idx] += if rng.gen_bool(0.5) { 1 } else { -1 };
        if is_bisubmodular(&g).holds {
            f = g;
        }
    }
    f
}

/// Pure rejection sampling: uniform tables with values in `[-vmax, vmax]`
/// until one is bisubmodular.
pub fn rejection_sample_bisubmodular(seed: u64, n: usize, vmax: i64, max_tries: u64) -> Option<BisubFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..max_tries).find_map(|_| {
        let f = BisubFunction::from_fn(n, |s| {
            if s.iter().all(|&c| c == 0) {
                BigInt::zero()
            } else {
                BigInt::from(rng.gen_range(-vmax..=vmax))
            }
        })
        .expect("normalized");
        is_bisubmodular(&f).holds.then_some(f)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn one_elem(a: i64, b: i64) -> BisubFunction {
        BisubFunction::from_pairs(
            1,
            &[
                ((vec![], vec![]), 0.into()),
                ((vec![0], vec![]), a.into()),
                ((vec![], vec![0]), b.into()),
            ],
        )
        .unwrap()
    }

    /// Independent check straight from the set-based inequality.
    fn oracle_bisub(f: &BisubFunction) -> bool {
        let n = f.ground_size();
        let all = unit_displacements(n);
        let val = |x: &[usize], y: &[usize]| f.value(&signed_from_sets(n, x, y).unwrap()).clone();
        for a in &all {
            for b in &all {
                let (x1, y1) = sets_of(a);
                let (x2, y2) = sets_of(b);
                let xi: Vec<usize> = x1.iter().copied().filter(|i| x2.contains(i)).collect();
                let yi: Vec<usize> = y1.iter().copied().filter(|i| y2.contains(i)).collect();
                let xu: BTreeSet<usize> = x1.iter().chain(&x2).copied().collect();
                let yu: BTreeSet<usize> = y1.iter().chain(&y2).copied().collect();
                let xj: Vec<usize> = xu.difference(&yu).copied().collect();
                let yj: Vec<usize> = yu.difference(&xu).copied().collect();
                if val(&x1, &y1) + val(&x2, &y2) < val(&xi, &yi) + val(&xj, &yj) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn single_element() {
        assert!(is_bisubmodular(&one_elem(2, 1)).holds);
        assert!(is_bisubmodular(&one_elem(2, -2)).holds);
        assert!(!is_bisubmodular(&one_elem(2, -3)).holds);
        let f = one_elem(2, 1);
        assert!(polyhedron_membership(&f, &[rat(2, 1)]).unwrap());
        assert!(!polyhedron_membership(&f, &[rat(3, 1)]).unwrap());
        let pts = enumerate_integer_points(&f, &IntegralBox::unbounded(1)).unwrap();
        let want: BTreeSet<_> = (-1..=2).map(|v| LatticePoint::from_i64(&[v])).collect();
        assert_eq!(pts, want);
    }

    #[test]
    fn two_element_example() {
        let f = BisubFunction::from_fn(2, |s| if s == [1, -1] { (-1).into() } else { 0.into() }).unwrap();
        assert_eq!(is_bisubmodular(&f).holds, oracle_bisub(&f));
        assert!(!is_bisubmodular(&f).holds);
    }

    #[test]
    fn box_function_polyhedron() {
        let w = BisubFunction::box_function(&[-1, 0], &[2, 1]).unwrap();
        assert!(is_bisubmodular(&w).holds);
        let pts = enumerate_integer_points(&w, &IntegralBox::unbounded(2)).unwrap();
        let want: BTreeSet<_> = IntegralBox::from_bounds(&[-1, 0], &[2, 1])
            .unwrap()
            .lattice_points()
            .unwrap()
            .into_iter()
            .collect();
        assert_eq!(pts, want);
        assert!(matches!(
            BisubFunction::box_function(&[1], &[0]),
            Err(Error::InvalidBox(_))
        ));
    }

    #[test]
    fn zero_membership_iff_nonnegative() {
        let f = one_elem(2, -1);
        assert!(!polyhedron_membership(&f, &[rat(0, 1)]).unwrap());
        assert!(polyhedron_membership(&one_elem(0, 3), &[rat(0, 1)]).unwrap());
    }

    #[test]
    fn cgk_single_element() {
        let r = minmax_cgk(&one_elem(2, 1), &LatticePoint::from_i64(&[5])).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (2.into(), 2.into()));
        assert_eq!(r.dual_witness, vec![1]);
        assert!(matches!(
            minmax_cgk(&one_elem(2, 1), &LatticePoint::from_i64(&[-2])),
            Err(Error::InfeasiblePrecondition(_))
        ));
    }

    #[test]
    fn cgk_huge_w() {
        let f = random_bisubmodular(3, 3);
        let r = minmax_cgk(&f, &LatticePoint::from_i64(&[1000, 1000, 1000])).unwrap();
        assert!(r.holds);
        assert_eq!(r.dual_witness, vec![1, 1, 1]);
        assert_eq!(&r.rhs, f.value(&[1, 1, 1]));
    }

    #[test]
    fn fp_specializes_to_cgk() {
        let f = one_elem(2, 1);
        let fp = minmax_fp(&f, &[-10], &[5], &[1]).unwrap();
        let cgk = minmax_cgk(&f, &LatticePoint::from_i64(&[5])).unwrap();
        assert_eq!(fp.lhs, cgk.lhs);
        assert_eq!(fp.rhs, cgk.rhs);
        let empty = minmax_fp(&f, &[-10], &[10], &[0]).unwrap();
        assert_eq!(empty.lhs, BigInt::zero());
        assert!(empty.holds);
    }

    #[test]
    fn psi_pieces() {
        let psi = build_psi_from_signed_pair(&[1, -1, 0], &[1, 0, -2], &[3, 2, 1]).unwrap();
        let p0 = &psi.pieces()[0];
        assert_eq!(p0.value(&2.into(), Orientation::Concave), Some(1.into()));
        assert_eq!(p0.value(&0.into(), Orientation::Concave), Some((-3).into()));
        assert_eq!(psi.pieces()[2].value(&0.into(), Orientation::Concave), Some(0.into()));
    }

    #[test]
    fn psi_identity_on_signed_pairs() {
        let (alpha, beta) = ([-1i64, 2], [3i64, 2]);
        let ab = signed_from_sets(2, &[0], &[1]).unwrap();
        let psi = build_psi_from_signed_pair(&ab, &alpha, &beta).unwrap();
        for xy in unit_displacements(2) {
            let x = LatticePoint::new(xy.iter().map(|&c| BigInt::from(c)).collect());
            // beta(A\X) + beta(Y\B) - alpha(B\Y) - alpha(X\A), written out per element.
            let (xs, ys) = sets_of(&xy);
            let mut want = 0;
            if !xs.contains(&0) {
                want += beta[0];
            }
            if ys.contains(&0) {
                want += beta[0];
            }
            if !ys.contains(&1) {
                want -= alpha[1];
            }
            if xs.contains(&1) {
                want -= alpha[1];
            }
            assert_eq!(-psi.value(&x).unwrap(), BigInt::from(want), "{xy:?}");
        }
    }

    #[test]
    fn convolution_with_huge_box_is_identity() {
        let f = random_bisubmodular(8, 2);
        let conv = box_convolution(&f, &[-100, -100], &[100, 100]).unwrap();
        assert_eq!(conv, f);
    }

    #[test]
    fn convolution_of_boxes() {
        let w = BisubFunction::box_function(&[-2, -1], &[1, 3]).unwrap();
        let conv = box_convolution(&w, &[-1, -3], &[2, 2]).unwrap();
        assert_eq!(conv, BisubFunction::box_function(&[-1, -1], &[1, 2]).unwrap());
        assert!(matches!(
            box_convolution(&w, &[5, 5], &[6, 6]),
            Err(Error::InfeasiblePrecondition(_))
        ));
    }

    #[test]
    fn rejection_sampler_finds_instances() {
        let f = rejection_sample_bisubmodular(1, 2, 3, 10_000).unwrap();
        assert!(oracle_bisub(&f));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn checker_matches_oracle(seed in 0u64..100_000, n in 1usize..=2) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = BisubFunction::from_fn(n, |s| {
                if s.iter().all(|&c| c == 0) { BigInt::zero() } else { rand::Rng::gen_range(&mut rng, -2..=3).into() }
            }).unwrap();
            prop_assert_eq!(is_bisubmodular(&f).holds, oracle_bisub(&f));
        }

        #[test]
        fn generator_is_bisubmodular(seed in 0u64..100_000, n in 1usize..=3) {
            prop_assert!(oracle_bisub(&random_bisubmodular(seed, n)));
        }

        #[test]
        fn enumeration_matches_filter(seed in 0u64..100_000) {
            let f = random_bisubmodular(seed, 2);
            let bx = IntegralBox::from_bounds(&[-3, -3], &[3, 3]).unwrap();
            let got = enumerate_integer_points(&f, &bx).unwrap();
            let want: BTreeSet<_> = bx.lattice_points().unwrap().into_iter()
                .filter(|z| polyhedron_membership(&f, &z.to_rational()).unwrap())
                .collect();
            prop_assert_eq!(got, want);
        }

        #[test]
        fn cgk_equality(seed in 0u64..100_000, w in proptest::collection::vec(-3i64..=3, 2)) {
            let f = random_bisubmodular(seed, 2);
            match minmax_cgk(&f, &LatticePoint::from_i64(&w)) {
                Ok(r) => prop_assert!(r.holds, "{:?}", r),
                Err(Error::InfeasiblePrecondition(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }

        #[test]
        fn fp_equality_all_pairs(seed in 0u64..100_000) {
            let f = random_bisubmodular(seed, 2);
            for ab in unit_displacements(2) {
                match minmax_fp(&f, &[-2, -2], &[2, 2], &ab) {
                    Ok(r) => prop_assert!(r.holds, "{:?} {:?}", ab, r),
                    Err(Error::InfeasiblePrecondition(_)) => {}
                    Err(e) => prop_assert!(false, "{e}"),
                }
            }
        }

        #[test]
        fn convolution_audit_holds(seed in 0u64..100_000) {
            let f = random_bisubmodular(seed, 2);
            let (alpha, beta) = ([-2i64, -1], [1i64, 2]);
            match box_convolution(&f, &alpha, &beta) {
                Ok(conv) => {
                    prop_assert!(is_bisubmodular(&conv).holds);
                    let samples = half_integer_samples(2, -4, 4);
                    prop_assert!(convolution_audit(&f, &conv, &alpha, &beta, &samples).unwrap());
                }
                Err(Error::InfeasiblePrecondition(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
