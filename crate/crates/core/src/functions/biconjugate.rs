use num_bigint::BigInt;

use crate::arith::{ExtInt, IntegralBox, LatticePoint};
use crate::error::{Error, Result};
use crate::functions::TableFunction;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiconjugateReport {
    pub holds: bool,
    /// Slopes were enumerated on `[-radius, radius]^n`.
    pub radius: BigInt,
    /// First point (in lexicographic order) with `f••(x) != f(x)`, with both values.
    pub violation: Option<(LatticePoint, BigInt, BigInt)>,
}

/// Compares `f••` with `f` on `dom f`, enumerating slopes in the box of
/// radius `max f - min f`.
///
/// In strict mode a mismatch is reported as `NotIntegrallyConvex`.
pub fn biconjugate_check(f: &TableFunction, strict: bool) -> Result<BiconjugateReport> {
    let n = f.dim();
    let radius = f.value_spread();
    let bx = IntegralBox::new(
        vec![ExtInt::Finite(-radius.clone()); n],
        vec![ExtInt::Finite(radius.clone()); n],
    )?;
    let slopes = bx.lattice_points().expect("bounded");
    let conj: Vec<(LatticePoint, BigInt)> = slopes
        .into_iter()
        .map(|p| {
            let v = f.conjugate(&p).expect("dims match");
            (p, v)
        })
        .collect();
    let mut violation = None;
    for (x, fx) in f.iter() {
        let bi = conj
            .iter()
            .map(|(p, v)| p.dot(x) - v)
            .max()
            .expect("slope box is nonempty");
        if &bi != fx {
            violation = Some((x.clone(), bi, fx.clone()));
            break;
        }
    }
    if strict {
        if let Some((x, bi, fx)) = &violation {
            return Err(Error::NotIntegrallyConvex(format!(
                "biconjugate at {x} is {bi}, function value {fx}"
            )));
        }
    }
    Ok(BiconjugateReport {
        holds: violation.is_none(),
        radius,
        violation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn ex49_holds() {
        let r = biconjugate_check(&fixtures::ex49(), true).unwrap();
        assert!(r.holds);
        assert_eq!(r.radius, BigInt::from(4));
    }

    #[test]
    fn r45_fails() {
        let f = fixtures::r45();
        let r = biconjugate_check(&f, false).unwrap();
        assert!(!r.holds);
        let (x, bi, fx) = r.violation.unwrap();
        assert!(bi < fx);
        assert!(f.contains(&x));
        assert!(matches!(
            biconjugate_check(&f, true),
            Err(Error::NotIntegrallyConvex(_))
        ));
    }

    #[test]
    fn single_point() {
        let f = TableFunction::from_i64(1, &[(&[0], 5)]).unwrap();
        assert!(biconjugate_check(&f, true).unwrap().holds);
    }
}
