use num_bigint::BigInt;

use crate::arith::{int_to_rat, ExtInt, IntegralBox, LatticePoint, Rational};
use crate::error::{Error, Result};
use crate::functions::TableFunction;
use crate::subdifferential::{build_iq, build_subgradient_system, projection_interval, Interval};

/// `f(y) - f(x) >= <p, y - x>` for every `y in dom f`.
pub fn membership_check(f: &TableFunction, x: &LatticePoint, p: &[Rational]) -> Result<bool> {
    if p.len() != f.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: p.len(),
        });
    }
    let fx = match f.evaluate(x)? {
        ExtInt::Finite(v) => v,
        _ => return Err(Error::PointOutsideDomain(x.to_string())),
    };
    Ok(f.iter()
        .all(|(y, fy)| int_to_rat(&(fy - &fx)) >= y.sub(x).dot_rational(p)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionStep {
    pub level: usize,
    pub interval: Interval,
    pub chosen: Option<BigInt>,
}

/// Back-substitution record, from level n down to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtractionTrace {
    pub steps: Vec<ExtractionStep>,
    /// `None` when the subdifferential misses the box.
    pub result: Option<LatticePoint>,
}

fn pick(iv: &Interval) -> BigInt {
    // Endpoints are integers: all data and earlier picks are integral.
    if let Some(l) = &iv.lower {
        return l.to_integer();
    }
    if let Some(u) = &iv.upper {
        return u.to_integer();
    }
    BigInt::from(0)
}

/// Integral subgradient in `bx` by back-substitution through the IQ
/// intervals, with the full trace.
pub fn integral_subgradient_with_trace(
    f: &TableFunction,
    x: &LatticePoint,
    bx: &IntegralBox,
) -> Result<ExtractionTrace> {
    let sys = build_subgradient_system(f, x)?;
    let n = f.dim();
    if bx.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: bx.dim(),
        });
    }
    let mut tail: Vec<BigInt> = Vec::with_capacity(n);
    let mut steps = Vec::with_capacity(n);
    for level in (1..=n).rev() {
        let iq = build_iq(&sys, bx, level)?;
        let tail_r: Vec<Rational> = tail.iter().map(int_to_rat).collect();
        let interval = projection_interval(&iq, &tail_r)?;
        let blocked = level == n && !iq.violated_constant_rows().is_empty();
        if interval.is_empty() || blocked {
            steps.push(ExtractionStep {
                level,
                interval,
                chosen: None,
            });
            if level == n {
                return Ok(ExtractionTrace { steps, result: None });
            }
            return Err(Error::NotIntegrallyConvex(format!(
                "empty interval for p{level} during back-substitution at {x}"
            )));
        }
        let v = pick(&interval);
        steps.push(ExtractionStep {
            level,
            interval,
            chosen: Some(v.clone()),
        });
        tail.insert(0, v);
    }
    let p = LatticePoint(tail);
    let pr = p.to_rational();
    if !membership_check(f, x, &pr)? || !bx.contains(&pr)? {
        return Err(Error::NotIntegrallyConvex(format!(
            "extracted {p} is not a subgradient at {x}"
        )));
    }
    Ok(ExtractionTrace { steps, result: Some(p) })
}

/// An integer point of `∂f(x) ∩ bx`, or `None` when the intersection is empty.
pub fn integral_subgradient_in_box(
    f: &TableFunction,
    x: &LatticePoint,
    bx: &IntegralBox,
) -> Result<Option<LatticePoint>> {
    Ok(integral_subgradient_with_trace(f, x, bx)?.result)
}

/// Integer subgradient `q` with `floor(p) <= q <= ceil(p)` for a subgradient `p`.
pub fn round_subgradient(f: &TableFunction, x: &LatticePoint, p: &[Rational]) -> Result<LatticePoint> {
    if !membership_check(f, x, p)? {
        return Err(Error::InfeasiblePrecondition(format!("p is not a subgradient at {x}")));
    }
    integral_subgradient_in_box(f, x, &IntegralBox::rounding_box(p))?
        .ok_or_else(|| Error::NotIntegrallyConvex(format!("no integral subgradient near p at {x}")))
}
