//! Exact rational linear programming: a dense two-phase simplex with Bland's
//! anti-cycling rule, plus helpers for polyhedra given as `M p <= b`.

use num_traits::{One, Signed, Zero};

use crate::arith::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rational, solution: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    obj: Vec<Rational>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        &self.rows[i][self.width]
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let piv = self.rows[r][c].clone();
        if !piv.is_one() {
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v = &*v / &piv;
                }
            }
        }
        let prow = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        if !self.obj[c].is_zero() {
            let factor = self.obj[c].clone();
            for (v, p) in self.obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &factor * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations over columns `0..allowed`. Returns false when
    /// the objective is unbounded below.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let entering = (0..allowed).find(|&j| self.obj[j].is_negative());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][c];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }
}

/// Solves `min c.y  s.t.  A y = b, y >= 0` exactly.
pub fn solve_standard(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let k = c.len();
    if m == 0 {
        // Only sign constraints: bounded iff c >= 0.
        if c.iter().any(|v| v.is_negative()) {
            return LpOutcome::Unbounded;
        }
        return LpOutcome::Optimal {
            value: Rational::zero(),
            solution: vec![Rational::zero(); k],
        };
    }
    let width = k + m;
    let mut rows = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        assert_eq!(row.len(), k, "constraint row has wrong length");
        let flip = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if flip { -v.clone() } else { v.clone() }).collect();
        r.extend((0..m).map(|j| if j == i { Rational::one() } else { Rational::zero() }));
        r.push(if flip { -bi.clone() } else { bi.clone() });
        rows.push(r);
    }
    // Phase one objective: sum of artificials, expressed in non-basic terms.
    let mut obj = vec![Rational::zero(); width + 1];
    for r in &rows {
        for j in 0..k {
            obj[j] -= &r[j];
        }
        obj[width] -= &r[width];
    }
    let mut t = Tableau {
        rows,
        obj,
        basis: (k..k + m).collect(),
        width,
    };
    t.optimize(width);
    if !t.obj[width].is_zero() {
        return LpOutcome::Infeasible;
    }
    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= k {
            match (0..k).find(|&j| !t.rows[i][j].is_zero()) {
                Some(j) => {
                    t.pivot(i, j);
                    i += 1;
                }
                None => {
                    t.rows.remove(i);
                    t.basis.remove(i);
                }
            }
        } else {
            i += 1;
        }
    }
    // Phase two.
    let mut obj = vec![Rational::zero(); width + 1];
    obj[..k].clone_from_slice(c);
    for (r, &bj) in t.rows.iter().zip(&t.basis) {
        let cb = &c[bj];
        if cb.is_zero() {
            continue;
        }
        for j in 0..=width {
            if !r[j].is_zero() {
                obj[j] -= cb * &r[j];
            }
        }
    }
    t.obj = obj;
    if !t.optimize(k) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Rational::zero(); k];
    for (i, &bj) in t.basis.iter().enumerate() {
        solution[bj] = t.rows[i][width].clone();
    }
    let value = c
        .iter()
        .zip(&solution)
        .fold(Rational::zero(), |acc, (ci, yi)| acc + ci * yi);
    LpOutcome::Optimal { value, solution }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

/// A general linear program `min c.x` over free or nonnegative variables.
#[derive(Clone, Debug, Default)]
pub struct LinearProgram {
    free: Vec<bool>,
    objective: Vec<Rational>,
    constraints: Vec<(Vec<Rational>, Relation, Rational)>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a variable and returns its index.
    pub fn add_var(&mut self, free: bool, cost: Rational) -> usize {
        self.free.push(free);
        self.objective.push(cost);
        for (row, _, _) in &mut self.constraints {
            row.push(Rational::zero());
        }
        self.free.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.free.len()
    }

    pub fn add_constraint(&mut self, coeffs: Vec<Rational>, rel: Relation, rhs: Rational) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.constraints.push((coeffs, rel, rhs));
    }

    pub fn minimize(&self) -> LpOutcome {
        let n = self.num_vars();
        // Column layout: one column per nonnegative variable, two per free one,
        // then one slack per inequality.
        let mut col_of = Vec::with_capacity(n);
        let mut cols = 0;
        for &f in &self.free {
            col_of.push(cols);
            cols += if f { 2 } else { 1 };
        }
        let slack_base = cols;
        let slacks = self.constraints.iter().filter(|(_, r, _)| *r != Relation::Eq).count();
        let total = cols + slacks;
        let mut a = Vec::with_capacity(self.constraints.len());
        let mut b = Vec::with_capacity(self.constraints.len());
        let mut s = 0;
        for (coeffs, rel, rhs) in &self.constraints {
            let mut row = vec![Rational::zero(); total];
            for (v, coef) in coeffs.iter().enumerate() {
                row[col_of[v]] = coef.clone();
                if self.free[v] {
                    row[col_of[v] + 1] = -coef.clone();
                }
            }
            match rel {
                Relation::Le => {
                    row[slack_base + s] = Rational::one();
                    s += 1;
                }
                Relation::Ge => {
                    row[slack_base + s] = -Rational::one();
                    s += 1;
                }
                Relation::Eq => {}
            }
            a.push(row);
            b.push(rhs.clone());
        }
        let mut c = vec![Rational::zero(); total];
        for (v, cost) in self.objective.iter().enumerate() {
            c[col_of[v]] = cost.clone();
            if self.free[v] {
                c[col_of[v] + 1] = -cost.clone();
            }
        }
        match solve_standard(&a, &b, &c) {
            LpOutcome::Optimal { value, solution } => {
                let x = (0..n)
                    .map(|v| {
                        let mut val = solution[col_of[v]].clone();
                        if self.free[v] {
                            val -= &solution[col_of[v] + 1];
                        }
                        val
                    })
                    .collect();
                LpOutcome::Optimal { value, solution: x }
            }
            other => other,
        }
    }
}

/// Outcome of maximizing a linear form over `{p : M p <= b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxOutcome {
    Infeasible,
    Unbounded,
    Optimal(Rational),
}

/// Whether `{p : M p <= b}` is nonempty, via the Farkas alternative
/// `y >= 0, M^T y = 0, b.y < 0`.
pub fn polyhedron_feasible(m: &[Vec<Rational>], b: &[Rational], dim: usize) -> bool {
    if m.is_empty() {
        return true;
    }
    let rows = m.len();
    let mut a: Vec<Vec<Rational>> = (0..dim).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
    a.push(vec![Rational::one(); rows]);
    let mut rhs = vec![Rational::zero(); dim];
    rhs.push(Rational::one());
    match solve_standard(&a, &rhs, b) {
        LpOutcome::Optimal { value, .. } => !value.is_negative(),
        _ => true,
    }
}

/// `max a.p  s.t.  M p <= b`, solved through the dual `min b.y, M^T y = a, y >= 0`.
pub fn maximize_over(m: &[Vec<Rational>], b: &[Rational], objective: &[Rational]) -> MaxOutcome {
    let dim = objective.len();
    if !polyhedron_feasible(m, b, dim) {
        return MaxOutcome::Infeasible;
    }
    let rows = m.len();
    let a: Vec<Vec<Rational>> = (0..dim).map(|j| (0..rows).map(|i| m[i][j].clone()).collect()).collect();
    if rows == 0 {
        return if objective.iter().all(Zero::is_zero) {
            MaxOutcome::Optimal(Rational::zero())
        } else {
            MaxOutcome::Unbounded
        };
    }
    match solve_standard(&a, objective, b) {
        LpOutcome::Optimal { value, .. } => MaxOutcome::Optimal(value),
        LpOutcome::Infeasible => MaxOutcome::Unbounded,
        LpOutcome::Unbounded => MaxOutcome::Infeasible,
    }
}
