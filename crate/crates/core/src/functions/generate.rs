//! Seeded generators of integer-valued test functions.

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{ExtInt, IntegralBox, LatticePoint};
use crate::error::{Error, Result};
use crate::functions::{Orientation, PieceShape, SeparableFunction, TableFunction, UnivariatePiece};

/// Pieces of a 2-separable convex function
/// `sum phi_i(x_i) + sum phi_ij(x_i - x_j) + sum psi_ij(x_i + x_j)`.
#[derive(Clone, Debug, Default)]
pub struct TwoSeparableSpec {
    pub univariate: Vec<(usize, UnivariatePiece)>,
    pub differences: Vec<(usize, usize, UnivariatePiece)>,
    pub sums: Vec<(usize, usize, UnivariatePiece)>,
}

impl TwoSeparableSpec {
    fn validate(&self, n: usize) -> Result<()> {
        let pieces = self
            .univariate
            .iter()
            .map(|(i, p)| (*i, *i, p))
            .chain(self.differences.iter().map(|(i, j, p)| (*i, *j, p)))
            .chain(self.sums.iter().map(|(i, j, p)| (*i, *j, p)));
        for (i, j, p) in pieces {
            if i >= n || j >= n {
                return Err(Error::InvalidFunction(
                    "index out of range in 2-separable spec".to_string(),
                ));
            }
            SeparableFunction::new(Orientation::Convex, vec![p.clone()])?;
        }
        for (i, j, _) in self.differences.iter().chain(&self.sums) {
            if i == j {
                return Err(Error::InvalidFunction("pair terms need i != j".into()));
            }
        }
        Ok(())
    }

    /// Value at `x`, or `None` when some piece is infinite.
    pub fn value(&self, x: &LatticePoint) -> Option<BigInt> {
        let c = x.coords();
        let mut total = BigInt::zero();
        for (i, p) in &self.univariate {
            total += p.value(&c[*i], Orientation::Convex)?;
        }
        for (i, j, p) in &self.differences {
            total += p.value(&(&c[*i] - &c[*j]), Orientation::Convex)?;
        }
        for (i, j, p) in &self.sums {
            total += p.value(&(&c[*i] + &c[*j]), Orientation::Convex)?;
        }
        Some(total)
    }
}

/// Tabulates a 2-separable convex function on a bounded box.
pub fn generate_2separable(spec: &TwoSeparableSpec, bx: &IntegralBox) -> Result<TableFunction> {
    spec.validate(bx.dim())?;
    TableFunction::tabulate(bx, |x| spec.value(x))
}

/// Random convex breakpoint piece on `[lo, hi]` with slopes in `[-smax, smax]`.
pub fn random_convex_piece<R: Rng>(rng: &mut R, lo: i64, hi: i64, smax: i64) -> UnivariatePiece {
    let len = (hi - lo + 1) as usize;
    let mut slopes: Vec<i64> = (1..len).map(|_| rng.gen_range(-smax..=smax)).collect();
    slopes.sort_unstable();
    let mut values = Vec::with_capacity(len);
    let mut v = rng.gen_range(-3..=3);
    values.push(v);
    for s in slopes {
        v += s;
        values.push(v);
    }
    UnivariatePiece::breakpoints(lo, &values).expect("length matches")
}

/// Random 2-separable convex function on the box `[-r, r]^n`.
///
/// With `restrict_domains` some pieces get a shorter domain around 0, so the
/// effective domain is a proper subset of the box that still contains 0.
pub fn random_2separable(seed: u64, n: usize, r: i64, restrict_domains: bool) -> TableFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut spec = TwoSeparableSpec::default();
    let shrink = |rng: &mut ChaCha8Rng, lo: i64, hi: i64| {
        if restrict_domains && rng.gen_bool(0.3) {
            (rng.gen_range(lo..=0), rng.gen_range(0..=hi))
        } else {
            (lo, hi)
        }
    };
    for i in 0..n {
        let (lo, hi) = shrink(&mut rng, -r, r);
        spec.univariate.push((i, random_convex_piece(&mut rng, lo, hi, 3)));
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            if rng.gen_bool(0.5) {
                let (lo, hi) = shrink(&mut rng, -2 * r, 2 * r);
                spec.differences.push((i, j, random_convex_piece(&mut rng, lo, hi, 2)));
            }
            if rng.gen_bool(0.4) {
                let (lo, hi) = shrink(&mut rng, -2 * r, 2 * r);
                spec.sums.push((i, j, random_convex_piece(&mut rng, lo, hi, 2)));
            }
        }
    }
    let bx = IntegralBox::from_bounds(&vec![-r; n], &vec![r; n]).unwrap();
    generate_2separable(&spec, &bx).expect("origin is always in the domain")
}

/// Random symmetric diagonally dominant integer matrix with nonnegative diagonal.
#[allow(clippy::needless_range_loop)]
pub fn random_diag_dominant<R: Rng>(rng: &mut R, n: usize, qmax: i64) -> Vec<Vec<i64>> {
    let mut q = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.gen_range(-qmax..=qmax);
            q[i][j] = v;
            q[j][i] = v;
        }
    }
    for i in 0..n {
        let off: i64 = (0..n).filter(|&j| j != i).map(|j| q[i][j].abs()).sum();
        q[i][i] = off + rng.gen_range(0..=2);
    }
    q
}

/// `x^T Q x` tabulated on a bounded box.
pub fn quadratic_form_table(q: &[Vec<i64>], bx: &IntegralBox) -> Result<TableFunction> {
    let n = q.len();
    if bx.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bx.dim(),
        });
    }
    TableFunction::tabulate(bx, |x| {
        let c = x.coords();
        let mut total = BigInt::zero();
        for i in 0..n {
            for j in 0..n {
                total += BigInt::from(q[i][j]) * &c[i] * &c[j];
            }
        }
        Some(total)
    })
}

/// Random diagonally dominant quadratic on `[-r, r]^n`.
pub fn random_diag_dominant_quadratic(seed: u64, n: usize, r: i64) -> TableFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_diag_dominant(&mut rng, n, 2);
    let bx = IntegralBox::from_bounds(&vec![-r; n], &vec![r; n]).unwrap();
    quadratic_form_table(&q, &bx).unwrap()
}

/// Arbitrary random table on `[-r, r]^n`, values in `[-vmax, vmax]`, each
/// point kept with probability `density` (the origin is always kept).
pub fn random_table(seed: u64, n: usize, r: i64, vmax: i64, density: f64) -> TableFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bx = IntegralBox::from_bounds(&vec![-r; n], &vec![r; n]).unwrap();
    let origin = LatticePoint::zero(n);
    TableFunction::tabulate(&bx, |x| {
        let keep = *x == origin || rng.gen_bool(density);
        let v = rng.gen_range(-vmax..=vmax);
        keep.then(|| BigInt::from(v))
    })
    .unwrap()
}

/// Random concave piece on all of Z, drawn from the closed forms.
pub fn random_concave_piece<R: Rng>(rng: &mut R) -> UnivariatePiece {
    let k0 = BigInt::from(rng.gen_range(-2..=2));
    let shape = match rng.gen_range(0..4) {
        0 => PieceShape::Abs {
            alpha: rng.gen_range(0..=3).into(),
            k0,
        },
        1 => PieceShape::Quad {
            beta: rng.gen_range(1..=2).into(),
            k0,
        },
        2 => PieceShape::Linear {
            slope: rng.gen_range(-3..=3).into(),
        },
        _ => {
            let right: i64 = rng.gen_range(-3..=2);
            PieceShape::Kinked {
                k0,
                value: rng.gen_range(-2..=2).into(),
                left_slope: (right + rng.gen_range(0..=3)).into(),
                right_slope: right.into(),
            }
        }
    };
    UnivariatePiece::on_z(shape).unwrap()
}

/// Random separable concave function; with `finite_pieces` some pieces are
/// concave breakpoint tables on a window `[-w, w]`.
pub fn random_separable_concave(seed: u64, n: usize, finite_pieces: bool) -> SeparableFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pieces = (0..n)
        .map(|_| {
            if finite_pieces && rng.gen_bool(0.3) {
                let w = rng.gen_range(0..=2);
                random_convex_piece(&mut rng, -w, w, 3).negated()
            } else {
                random_concave_piece(&mut rng)
            }
        })
        .collect();
    SeparableFunction::new(Orientation::Concave, pieces).expect("pieces are concave")
}

/// Box `[-r, r]^n`.
pub fn symmetric_box(n: usize, r: i64) -> IntegralBox {
    IntegralBox::new(vec![ExtInt::from(-r); n], vec![ExtInt::from(r); n]).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(lo: i64, hi: i64) -> UnivariatePiece {
        let v: Vec<i64> = (lo..=hi).map(|k| k * k).collect();
        UnivariatePiece::breakpoints(lo, &v).unwrap()
    }

    #[test]
    fn two_separable_direct_value() {
        let spec = TwoSeparableSpec {
            univariate: vec![(0, sq(-2, 2)), (1, sq(-2, 2))],
            differences: vec![(0, 1, sq(-4, 4))],
            sums: vec![],
        };
        let f = generate_2separable(&spec, &symmetric_box(2, 2)).unwrap();
        assert_eq!(f.get(&LatticePoint::from_i64(&[1, -1])), Some(&BigInt::from(6)));
        assert_eq!(f.len(), 25);
    }

    #[test]
    fn two_separable_zero() {
        let zero = UnivariatePiece::breakpoints(-4, &[0; 9]).unwrap();
        let spec = TwoSeparableSpec {
            univariate: vec![(0, zero.clone()), (1, zero.clone())],
            differences: vec![(0, 1, zero.clone())],
            sums: vec![(1, 0, zero)],
        };
        let f = generate_2separable(&spec, &symmetric_box(2, 2)).unwrap();
        assert!(f.is_zero_everywhere());
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(random_2separable(7, 3, 1, true), random_2separable(7, 3, 1, true));
        assert_eq!(
            random_diag_dominant_quadratic(3, 2, 2),
            random_diag_dominant_quadratic(3, 2, 2)
        );
        assert_eq!(
            random_separable_concave(5, 3, true),
            random_separable_concave(5, 3, true)
        );
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn diag_dominant_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let q = random_diag_dominant(&mut rng, 3, 3);
            for i in 0..3 {
                let off: i64 = (0..3).filter(|&j| j != i).map(|j| q[i][j].abs()).sum();
                assert!(q[i][i] >= off);
                for j in 0..3 {
                    assert_eq!(q[i][j], q[j][i]);
                }
            }
        }
    }
}
