use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::lp::MaxOutcome;
use crate::subdifferential::InequalitySystem;

/// Unique solution of the square system `m x = c`, if any.
fn solve_square(mut m: Vec<Vec<Rational>>, mut c: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        c.swap(col, piv);
        let inv = Rational::one() / &m[col][col];
        for v in m[col].iter_mut() {
            *v *= &inv;
        }
        c[col] *= &inv;
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            let prow = m[col].clone();
            for (v, p) in m[r].iter_mut().zip(&prow) {
                *v -= &factor * p;
            }
            let cc = c[col].clone();
            c[r] -= factor * cc;
        }
    }
    Some(c)
}

fn for_each_subset(len: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    if k > len {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        visit(&idx);
        // rightmost position that can still move
        let mut i = k;
        while i > 0 && idx[i - 1] == len - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All vertices of a bounded region (rows plus finite box bounds), in
/// lexicographic order. Empty regions have no vertices.
pub fn enumerate_vertices(sys: &InequalitySystem) -> Result<Vec<Vec<Rational>>> {
    let rs = sys.to_rational();
    let n = sys.dim();
    if !rs.is_feasible() {
        return Ok(Vec::new());
    }
    for j in 0..n {
        for s in [1i64, -1] {
            let mut e = vec![Rational::zero(); n];
            e[j] = Rational::from_integer(s.into());
            if rs.maximize(&e) == MaxOutcome::Unbounded {
                return Err(Error::UnboundedRegion);
            }
        }
    }
    let rows = rs.rows();
    let mut found = BTreeSet::new();
    for_each_subset(rows.len(), n, |pick| {
        let m = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let c = pick.iter().map(|&i| rows[i].1.clone()).collect();
        if let Some(v) = solve_square(m, c) {
            if rs.contains(&v) {
                found.insert(v);
            }
        }
    });
    Ok(found.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, IntegralBox, LatticePoint};
    use crate::fixtures;
    use crate::subdifferential::build_subgradient_system;

    #[test]
    fn subsets_count() {
        let mut count = 0;
        for_each_subset(6, 3, |_| count += 1);
        assert_eq!(count, 20);
        let mut all = Vec::new();
        for_each_subset(3, 3, |s| all.push(s.to_vec()));
        assert_eq!(all, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn r47_vertices() {
        let sys = build_subgradient_system(&fixtures::r47(), &LatticePoint::zero(3)).unwrap();
        let v = enumerate_vertices(&sys).unwrap();
        assert_eq!(v.len(), 14);
        let integral = v.iter().filter(|p| p.iter().all(|c| c.is_integer())).count();
        assert_eq!(integral, 6);
        for p in v.iter().filter(|p| !p.iter().all(|c| c.is_integer())) {
            assert!(p.iter().all(|c| *c == rat(1, 2) || *c == rat(-1, 2)));
        }
    }

    #[test]
    fn r45_single_vertex() {
        let sys = build_subgradient_system(&fixtures::r45(), &LatticePoint::zero(3)).unwrap();
        assert_eq!(enumerate_vertices(&sys).unwrap(), vec![vec![rat(1, 2); 3]]);
    }

    #[test]
    fn unit_square_and_unbounded() {
        let sys = InequalitySystem::new(2, vec![], Some(IntegralBox::from_bounds(&[0, 0], &[1, 1]).unwrap())).unwrap();
        assert_eq!(enumerate_vertices(&sys).unwrap().len(), 4);
        let sys = build_subgradient_system(&fixtures::r46(), &LatticePoint::zero(3)).unwrap();
        assert_eq!(enumerate_vertices(&sys), Err(Error::UnboundedRegion));
    }
}
