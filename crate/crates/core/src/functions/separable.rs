use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::arith::{ExtInt, IntegralBox, LatticePoint};
use crate::error::{Error, Result};
use crate::functions::TableFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Convex,
    Concave,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Convex => Orientation::Concave,
            Orientation::Concave => Orientation::Convex,
        }
    }

    fn outside(self) -> ExtInt {
        match self {
            Orientation::Convex => ExtInt::PosInf,
            Orientation::Concave => ExtInt::NegInf,
        }
    }
}

/// Shape of a univariate piece.
///
/// `Abs` and `Quad` store magnitudes: the piece is `alpha|k-k0|` (resp.
/// `beta(k-k0)^2`) in convex orientation and its negative in concave
/// orientation. The other shapes store literal values.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PieceShape {
    /// Values at `lo, lo+1, ..., hi` of a finite domain.
    Breakpoints(Vec<BigInt>),
    Abs {
        alpha: BigInt,
        k0: BigInt,
    },
    Quad {
        beta: BigInt,
        k0: BigInt,
    },
    Linear {
        slope: BigInt,
    },
    /// `value + left_slope (k-k0)` for `k <= k0`, `value + right_slope (k-k0)` for `k >= k0`.
    Kinked {
        k0: BigInt,
        value: BigInt,
        left_slope: BigInt,
        right_slope: BigInt,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnivariatePiece {
    shape: PieceShape,
    lo: ExtInt,
    hi: ExtInt,
}

impl UnivariatePiece {
    /// Validates domain and shape, but not orientation (see [`SeparableFunction::new`]).
    pub fn new(shape: PieceShape, lo: ExtInt, hi: ExtInt) -> Result<Self> {
        if lo == ExtInt::PosInf || hi == ExtInt::NegInf || lo > hi {
            return Err(Error::InvalidFunction(format!("bad piece domain [{lo}, {hi}]")));
        }
        let finite = lo.is_finite() && hi.is_finite();
        if !finite && (lo.is_finite() || hi.is_finite()) {
            return Err(Error::InvalidFunction(
                "piece domain must be all of Z or a finite interval".into(),
            ));
        }
        match &shape {
            PieceShape::Breakpoints(values) => {
                if !finite {
                    return Err(Error::InvalidFunction("breakpoint pieces need a finite domain".into()));
                }
                let len = hi.as_finite().unwrap() - lo.as_finite().unwrap() + 1;
                if len != BigInt::from(values.len()) {
                    return Err(Error::InvalidFunction(format!(
                        "breakpoint piece has {} values for a domain of length {len}",
                        values.len()
                    )));
                }
            }
            PieceShape::Abs { alpha, .. } if alpha.is_negative() => {
                return Err(Error::InvalidFunction("abs_form needs alpha >= 0".into()));
            }
            PieceShape::Quad { beta, .. } if *beta < BigInt::from(1) => {
                return Err(Error::InvalidFunction("quad_form needs beta >= 1".into()));
            }
            _ => {}
        }
        Ok(UnivariatePiece { shape, lo, hi })
    }

    /// Piece on all of Z.
    pub fn on_z(shape: PieceShape) -> Result<Self> {
        Self::new(shape, ExtInt::NegInf, ExtInt::PosInf)
    }

    pub fn breakpoints(lo: i64, values: &[i64]) -> Result<Self> {
        let hi = lo + values.len() as i64 - 1;
        Self::new(
            PieceShape::Breakpoints(values.iter().map(|&v| BigInt::from(v)).collect()),
            ExtInt::from(lo),
            ExtInt::from(hi),
        )
    }

    pub fn shape(&self) -> &PieceShape {
        &self.shape
    }

    pub fn lower(&self) -> &ExtInt {
        &self.lo
    }

    pub fn upper(&self) -> &ExtInt {
        &self.hi
    }

    pub fn in_domain(&self, k: &BigInt) -> bool {
        self.lo.cmp(&ExtInt::Finite(k.clone())).is_le() && self.hi >= ExtInt::Finite(k.clone())
    }

    fn has_finite_domain(&self) -> bool {
        self.lo.is_finite()
    }

    /// Value at `k`, or `None` outside the domain.
    pub fn value(&self, k: &BigInt, orientation: Orientation) -> Option<BigInt> {
        if !self.in_domain(k) {
            return None;
        }
        let sign = |v: BigInt| match orientation {
            Orientation::Convex => v,
            Orientation::Concave => -v,
        };
        Some(match &self.shape {
            PieceShape::Breakpoints(values) => {
                let idx: usize = (k - self.lo.as_finite().unwrap()).try_into().ok()?;
                values[idx].clone()
            }
            PieceShape::Abs { alpha, k0 } => sign(alpha * (k - k0).abs()),
            PieceShape::Quad { beta, k0 } => {
                let t = k - k0;
                sign(beta * &t * &t)
            }
            PieceShape::Linear { slope } => slope * k,
            PieceShape::Kinked {
                k0,
                value,
                left_slope,
                right_slope,
            } => {
                let t = k - k0;
                let s = if t.is_negative() { left_slope } else { right_slope };
                value + s * t
            }
        })
    }

    fn check_orientation(&self, orientation: Orientation) -> Result<()> {
        let ok = match (&self.shape, orientation) {
            (PieceShape::Breakpoints(v), o) => v.windows(3).all(|w| {
                let second = &w[0] + &w[2] - BigInt::from(2) * &w[1];
                match o {
                    Orientation::Convex => !second.is_negative(),
                    Orientation::Concave => !second.is_positive(),
                }
            }),
            (
                PieceShape::Kinked {
                    left_slope,
                    right_slope,
                    ..
                },
                o,
            ) => match o {
                Orientation::Convex => left_slope <= right_slope,
                Orientation::Concave => left_slope >= right_slope,
            },
            _ => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidFunction(format!(
                "piece is not {}",
                match orientation {
                    Orientation::Convex => "convex",
                    Orientation::Concave => "concave",
                }
            )))
        }
    }

    /// The same function with the opposite sign (orientation flips with it).
    pub fn negated(&self) -> UnivariatePiece {
        let shape = match &self.shape {
            PieceShape::Breakpoints(v) => PieceShape::Breakpoints(v.iter().map(|x| -x).collect()),
            PieceShape::Linear { slope } => PieceShape::Linear { slope: -slope },
            PieceShape::Kinked {
                k0,
                value,
                left_slope,
                right_slope,
            } => PieceShape::Kinked {
                k0: k0.clone(),
                value: -value,
                left_slope: -left_slope,
                right_slope: -right_slope,
            },
            other => other.clone(),
        };
        UnivariatePiece {
            shape,
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    /// `max { k l - phi(k) }` for this piece read in convex orientation.
    pub fn convex_conjugate(&self, l: &BigInt) -> ExtInt {
        if self.has_finite_domain() {
            return self
                .finite_domain()
                .into_iter()
                .map(|k| {
                    let v = self.value(&k, Orientation::Convex).unwrap();
                    &k * l - v
                })
                .max()
                .map_or(ExtInt::NegInf, ExtInt::Finite);
        }
        match &self.shape {
            PieceShape::Abs { alpha, k0 } => {
                if l.abs() <= *alpha {
                    ExtInt::Finite(k0 * l)
                } else {
                    ExtInt::PosInf
                }
            }
            PieceShape::Quad { beta, k0 } => {
                let t = (l + beta).div_floor(&(BigInt::from(2) * beta));
                ExtInt::Finite(k0 * l + &t * (l - beta * &t))
            }
            PieceShape::Linear { slope } => {
                if l == slope {
                    ExtInt::zero()
                } else {
                    ExtInt::PosInf
                }
            }
            PieceShape::Kinked {
                k0,
                value,
                left_slope,
                right_slope,
            } => {
                if left_slope <= l && l <= right_slope {
                    ExtInt::Finite(k0 * l - value)
                } else {
                    ExtInt::PosInf
                }
            }
            PieceShape::Breakpoints(_) => unreachable!("breakpoint domains are finite"),
        }
    }

    /// `min { k l - psi(k) }` for this piece read in concave orientation.
    pub fn concave_conjugate(&self, l: &BigInt) -> ExtInt {
        -self.negated().convex_conjugate(&-l)
    }

    fn finite_domain(&self) -> Vec<BigInt> {
        let (Some(lo), Some(hi)) = (self.lo.as_finite(), self.hi.as_finite()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut k = lo.clone();
        while &k <= hi {
            out.push(k.clone());
            k += 1;
        }
        out
    }
}

/// `Phi(x) = sum_i phi_i(x_i)` with all pieces sharing one orientation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparableFunction {
    orientation: Orientation,
    pieces: Vec<UnivariatePiece>,
}

impl SeparableFunction {
    pub fn new(orientation: Orientation, pieces: Vec<UnivariatePiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidFunction("no pieces".into()));
        }
        for p in &pieces {
            p.check_orientation(orientation)?;
        }
        Ok(SeparableFunction { orientation, pieces })
    }

    pub fn zero(n: usize, orientation: Orientation) -> Self {
        Self::linear(&LatticePoint::zero(n), orientation)
    }

    /// `<c, x>` on all of Z^n.
    pub fn linear(c: &LatticePoint, orientation: Orientation) -> Self {
        SeparableFunction {
            orientation,
            pieces: c
                .coords()
                .iter()
                .map(|s| UnivariatePiece::on_z(PieceShape::Linear { slope: s.clone() }).unwrap())
                .collect(),
        }
    }

    /// `-alpha |x|_1`, concave.
    pub fn neg_l1(n: usize, alpha: i64) -> Self {
        let piece = UnivariatePiece::on_z(PieceShape::Abs {
            alpha: BigInt::from(alpha),
            k0: BigInt::zero(),
        })
        .unwrap();
        SeparableFunction {
            orientation: Orientation::Concave,
            pieces: vec![piece; n],
        }
    }

    pub fn dim(&self) -> usize {
        self.pieces.len()
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn pieces(&self) -> &[UnivariatePiece] {
        &self.pieces
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: n,
            });
        }
        Ok(())
    }

    /// Value at `x`, or `None` outside the domain.
    pub fn value(&self, x: &LatticePoint) -> Option<BigInt> {
        let mut total = BigInt::zero();
        for (piece, k) in self.pieces.iter().zip(x.coords()) {
            total += piece.value(k, self.orientation)?;
        }
        Some(total)
    }

    /// `Phi(x)`, with `+inf` (convex) or `-inf` (concave) outside the domain.
    pub fn evaluate(&self, x: &LatticePoint) -> Result<ExtInt> {
        self.check_dim(x.dim())?;
        Ok(self.value(x).map_or_else(|| self.orientation.outside(), ExtInt::Finite))
    }

    pub fn in_domain(&self, x: &LatticePoint) -> bool {
        x.dim() == self.dim() && self.pieces.iter().zip(x.coords()).all(|(p, k)| p.in_domain(k))
    }

    pub fn negated(&self) -> SeparableFunction {
        SeparableFunction {
            orientation: self.orientation.flipped(),
            pieces: self.pieces.iter().map(UnivariatePiece::negated).collect(),
        }
    }

    /// Conjugate in the sense matching the orientation: `sum_i psi_i°(p_i)`
    /// (concave) or `sum_i phi_i•(p_i)` (convex).
    pub fn conjugate(&self, p: &LatticePoint) -> Result<ExtInt> {
        self.check_dim(p.dim())?;
        let mut total = ExtInt::zero();
        for (piece, l) in self.pieces.iter().zip(p.coords()) {
            let term = match self.orientation {
                Orientation::Concave => piece.concave_conjugate(l),
                Orientation::Convex => piece.convex_conjugate(l),
            };
            total = total.checked_add(&term)?;
        }
        Ok(total)
    }

    /// `-∂Phi(x)` as a box, for convex `Phi`.
    pub fn subdifferential_box(&self, x: &LatticePoint) -> Result<IntegralBox> {
        if self.orientation != Orientation::Convex {
            return Err(Error::InvalidFunction(
                "subdifferential box needs a convex separable function".into(),
            ));
        }
        self.check_dim(x.dim())?;
        if !self.in_domain(x) {
            return Err(Error::PointOutsideDomain(x.to_string()));
        }
        let mut lower = Vec::with_capacity(self.dim());
        let mut upper = Vec::with_capacity(self.dim());
        for (piece, k) in self.pieces.iter().zip(x.coords()) {
            let here = piece.value(k, Orientation::Convex).unwrap();
            lower.push(
                piece
                    .value(&(k + 1), Orientation::Convex)
                    .map_or(ExtInt::NegInf, |r| ExtInt::Finite(&here - r)),
            );
            upper.push(
                piece
                    .value(&(k - 1), Orientation::Convex)
                    .map_or(ExtInt::PosInf, |l| ExtInt::Finite(l - &here)),
            );
        }
        IntegralBox::new(lower, upper)
    }

    /// Smallest box containing the domain.
    pub fn domain_box(&self) -> IntegralBox {
        IntegralBox::new(
            self.pieces.iter().map(|p| p.lo.clone()).collect(),
            self.pieces.iter().map(|p| p.hi.clone()).collect(),
        )
        .expect("piece domains are valid intervals")
    }

    /// Values on the integer points of a bounded box that lie in the domain.
    pub fn tabulate(&self, bx: &IntegralBox) -> Result<TableFunction> {
        self.check_dim(bx.dim())?;
        TableFunction::tabulate(bx, |x| self.value(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn quad(beta: i64, k0: i64) -> UnivariatePiece {
        UnivariatePiece::on_z(PieceShape::Quad {
            beta: beta.into(),
            k0: k0.into(),
        })
        .unwrap()
    }

    fn abs(alpha: i64, k0: i64) -> UnivariatePiece {
        UnivariatePiece::on_z(PieceShape::Abs {
            alpha: alpha.into(),
            k0: k0.into(),
        })
        .unwrap()
    }

    // Plain i64 brute force on a window, returning None when the objective
    // is still improving at the window edge (unbounded).
    fn brute_convex_conj(phi: impl Fn(i64) -> i64, l: i64, center: i64, m: i64) -> Option<i64> {
        let obj = |k: i64| k * l - phi(k);
        let (a, b) = (center - m, center + m);
        if obj(a - 1) > obj(a) || obj(b + 1) > obj(b) {
            return None;
        }
        (a..=b).map(obj).max()
    }

    #[test]
    fn evaluate_concave_quadratic() {
        let psi = SeparableFunction::new(Orientation::Concave, vec![quad(1, 0), quad(1, 0)]).unwrap();
        assert_eq!(
            psi.evaluate(&LatticePoint::from_i64(&[1, -2])).unwrap(),
            ExtInt::from(-5)
        );
    }

    #[test]
    fn concave_conjugate_examples() {
        assert_eq!(quad(1, 0).concave_conjugate(&BigInt::from(3)), ExtInt::from(-2));
        assert_eq!(abs(2, 0).concave_conjugate(&BigInt::from(3)), ExtInt::NegInf);
        assert_eq!(abs(2, 0).concave_conjugate(&BigInt::from(1)), ExtInt::from(0));
        let lin = UnivariatePiece::on_z(PieceShape::Linear { slope: 4.into() }).unwrap();
        assert_eq!(lin.concave_conjugate(&BigInt::from(4)), ExtInt::from(0));
        assert_eq!(lin.concave_conjugate(&BigInt::from(5)), ExtInt::NegInf);
    }

    #[test]
    fn closed_forms_match_brute_force() {
        for k0 in -5i64..=5 {
            for l in -5i64..=5 {
                for alpha in 0i64..=5 {
                    let want = brute_convex_conj(|k| alpha * (k - k0).abs(), l, k0, 40);
                    let got = abs(alpha, k0).convex_conjugate(&l.into());
                    assert_eq!(got, want.map_or(ExtInt::PosInf, ExtInt::from), "abs {alpha} {k0} {l}");
                }
                for beta in 1i64..=5 {
                    let want = brute_convex_conj(|k| beta * (k - k0) * (k - k0), l, k0, 40).unwrap();
                    assert_eq!(quad(beta, k0).convex_conjugate(&l.into()), ExtInt::from(want));
                }
                // beta = 1: k0 l + floor(l/2) ceil(l/2)
                let fl = l.div_euclid(2);
                let cl = -(-l).div_euclid(2);
                assert_eq!(quad(1, k0).convex_conjugate(&l.into()), ExtInt::from(k0 * l + fl * cl));
            }
        }
    }

    #[test]
    fn kinked_conjugates() {
        let kink = |v: i64, sl: i64, sr: i64| {
            UnivariatePiece::on_z(PieceShape::Kinked {
                k0: 1.into(),
                value: v.into(),
                left_slope: sl.into(),
                right_slope: sr.into(),
            })
            .unwrap()
        };
        for l in -6i64..=6 {
            let p = kink(2, -1, 3);
            let want = brute_convex_conj(|k| 2 + if k < 1 { -(k - 1) } else { 3 * (k - 1) }, l, 1, 40);
            assert_eq!(p.convex_conjugate(&l.into()), want.map_or(ExtInt::PosInf, ExtInt::from));
            let q = kink(0, 3, 1);
            let psi = |k: i64| if k < 1 { 3 * (k - 1) } else { k - 1 };
            let want = brute_convex_conj(|k| -psi(k), -l, 1, 40).map(|v| -v);
            assert_eq!(
                q.concave_conjugate(&l.into()),
                want.map_or(ExtInt::NegInf, ExtInt::from)
            );
        }
    }

    #[test]
    fn breakpoint_conjugate_is_exhaustive() {
        let p = UnivariatePiece::breakpoints(-1, &[3, 0, 1, 5]).unwrap();
        for l in -4i64..=4 {
            let want = [(-1, 3), (0, 0), (1, 1), (2, 5)]
                .iter()
                .map(|(k, v)| k * l - v)
                .max()
                .unwrap();
            assert_eq!(p.convex_conjugate(&l.into()), ExtInt::from(want));
        }
    }

    #[test]
    fn subdifferential_box_examples() {
        let sq = SeparableFunction::new(Orientation::Convex, vec![quad(1, 0)]).unwrap();
        let b = sq.subdifferential_box(&LatticePoint::from_i64(&[0])).unwrap();
        assert_eq!(b, IntegralBox::from_bounds(&[-1], &[1]).unwrap());
        let ab = SeparableFunction::new(Orientation::Convex, vec![abs(2, 0)]).unwrap();
        let b = ab.subdifferential_box(&LatticePoint::from_i64(&[3])).unwrap();
        assert_eq!(b, IntegralBox::from_bounds(&[-2], &[-2]).unwrap());
        let bp = SeparableFunction::new(
            Orientation::Convex,
            vec![UnivariatePiece::breakpoints(0, &[0, 1, 3, 6, 10, 15]).unwrap()],
        )
        .unwrap();
        let b = bp.subdifferential_box(&LatticePoint::from_i64(&[0])).unwrap();
        assert_eq!(b.upper()[0], ExtInt::PosInf);
        assert_eq!(b.lower()[0], ExtInt::from(-1));
        assert!(matches!(
            bp.subdifferential_box(&LatticePoint::from_i64(&[9])),
            Err(Error::PointOutsideDomain(_))
        ));
    }

    #[test]
    fn rejects_bad_pieces() {
        assert!(SeparableFunction::new(
            Orientation::Convex,
            vec![UnivariatePiece::breakpoints(0, &[0, 2, 1]).unwrap()]
        )
        .is_err());
        assert!(UnivariatePiece::new(PieceShape::Linear { slope: 1.into() }, ExtInt::from(0), ExtInt::PosInf).is_err());
        assert!(UnivariatePiece::on_z(PieceShape::Quad {
            beta: 0.into(),
            k0: 0.into()
        })
        .is_err());
    }

    proptest! {
        #[test]
        fn subdifferential_box_is_exact(
            beta in 1i64..3, k0 in -2i64..2, x in -2i64..2, alpha in 0i64..4,
        ) {
            let phi = SeparableFunction::new(
                Orientation::Convex,
                vec![quad(beta, k0), abs(alpha, -k0)],
            ).unwrap();
            let xp = LatticePoint::from_i64(&[x, x]);
            let b = phi.subdifferential_box(&xp).unwrap();
            let fx = phi.value(&xp).unwrap();
            // -p in the subdifferential, checked on a window around x
            for p1 in -12i64..=12 {
                for p2 in [-(alpha + 1), -alpha, 0, alpha, alpha + 1] {
                    let p = LatticePoint::from_i64(&[p1, p2]);
                    let mut ok = true;
                    for y1 in x - 2..=x + 2 {
                        for y2 in x - 2..=x + 2 {
                            let y = LatticePoint::from_i64(&[y1, y2]);
                            let lhs = phi.value(&y).unwrap() - &fx;
                            if lhs < -(p.dot(&y.sub(&xp))) {
                                ok = false;
                            }
                        }
                    }
                    prop_assert_eq!(ok, b.contains_point(&p).unwrap(), "p={}", p);
                }
            }
        }
    }
}
