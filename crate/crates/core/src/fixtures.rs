//! Small reference instances used by tests, the CLI and the shipped
//! instance files.

use num_bigint::BigInt;

use crate::arith::{IntegralBox, LatticePoint};
use crate::functions::TableFunction;

/// 3x3 table on `{-1,0,1}^2` with a non-trivial subdifferential at the origin.
pub fn ex49() -> TableFunction {
    TableFunction::from_i64(
        2,
        &[
            (&[-1, 1], 2),
            (&[0, 1], 3),
            (&[1, 1], 4),
            (&[-1, 0], 2),
            (&[0, 0], 0),
            (&[1, 0], 4),
            (&[-1, -1], 3),
            (&[0, -1], 3),
            (&[1, -1], 4),
        ],
    )
    .unwrap()
}

/// `(x1+x2+x3)/2` on `{0, ±(1,1,0), ±(0,1,1), ±(1,0,1)}`; not integrally convex.
pub fn r45() -> TableFunction {
    let mut pts = vec![(vec![0i64, 0, 0], 0i64)];
    for d in [[1, 1, 0], [0, 1, 1], [1, 0, 1]] {
        pts.push((d.to_vec(), 1));
        pts.push((d.iter().map(|v| -v).collect(), -1));
    }
    TableFunction::from_pairs(
        3,
        pts.into_iter()
            .map(|(p, v)| (LatticePoint::from_i64(&p), BigInt::from(v))),
    )
    .unwrap()
}

/// Origin with value 0 and the three points `(1,1,0), (0,1,1), (1,0,1)` with value 1.
pub fn r46() -> TableFunction {
    TableFunction::from_i64(3, &[(&[0, 0, 0], 0), (&[1, 1, 0], 1), (&[0, 1, 1], 1), (&[1, 0, 1], 1)]).unwrap()
}

/// 0 at the origin, 1 elsewhere on `{x in {-1,0,1}^3 : |x|_1 <= 2}`.
pub fn r47() -> TableFunction {
    let bx = IntegralBox::from_bounds(&[-1, -1, -1], &[1, 1, 1]).unwrap();
    TableFunction::tabulate(&bx, |x| {
        let l1: BigInt = x.coords().iter().map(|c| c * c).sum();
        if l1 > BigInt::from(2) {
            None
        } else if l1 == BigInt::from(0) {
            Some(BigInt::from(0))
        } else {
            Some(BigInt::from(1))
        }
    })
    .unwrap()
}

fn on_square(r: i64, g: impl Fn(i64, i64) -> i64) -> TableFunction {
    let bx = IntegralBox::from_bounds(&[-r, -r], &[r, r]).unwrap();
    TableFunction::tabulate(&bx, |x| {
        let a: i64 = (&x.coords()[0]).try_into().unwrap();
        let b: i64 = (&x.coords()[1]).try_into().unwrap();
        Some(BigInt::from(g(a, b)))
    })
    .unwrap()
}

/// `f = |x1+x2-1|` and concave `g = 1 - |x1-x2|`, tabulated on `[-3,3]^2`.
pub fn e35() -> (TableFunction, TableFunction) {
    (
        on_square(3, |a, b| (a + b - 1).abs()),
        on_square(3, |a, b| 1 - (a - b).abs()),
    )
}

/// `f = max(0, x1+x2)` and concave `g = min(x1, x2)`, tabulated on `[-3,3]^2`.
pub fn e36() -> (TableFunction, TableFunction) {
    (on_square(3, |a, b| (a + b).max(0)), on_square(3, |a, b| a.min(b)))
}
