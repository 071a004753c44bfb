//! JSON instance files and reports.
//!
//! Integers are written as decimal strings, infinities as `"-inf"`/`"+inf"`
//! and rationals as `"num/den"` (or `"n"` when integral). Object keys come
//! out sorted, and table entries are listed in lexicographic order, so
//! serialization is canonical.

use std::collections::{BTreeMap, BTreeSet};
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use crate::arith::{ExtInt, IntegralBox, LatticePoint, Rational};
use crate::bisubmodular::{sets_of, BisubFunction};
use crate::error::{Error, Result};
use crate::functions::{Orientation, PieceShape, SeparableFunction, TableFunction, UnivariatePiece};

/// Everything a command may read from an instance file.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Instance {
    pub dimension: usize,
    pub table: Option<TableFunction>,
    /// A second table read as a concave function.
    pub concave_table: Option<TableFunction>,
    pub separable: Option<SeparableFunction>,
    pub bx: Option<IntegralBox>,
    pub bisub: Option<BisubFunction>,
    pub point: Option<LatticePoint>,
    pub flags: BTreeSet<String>,
}

fn sem(text: &str, key: &str, message: impl Into<String>) -> Error {
    // Point at the first occurrence of the key, if any.
    let needle = format!("\"{key}\"");
    let (line, column) = match text.find(&needle) {
        Some(off) => {
            let before = &text[..off];
            let line = before.matches('\n').count() + 1;
            let column = off - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        }
        None => (0, 0),
    };
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn bad(message: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: message.into(),
    }
}

pub fn int_json(v: &BigInt) -> Value {
    Value::String(v.to_string())
}

pub fn ext_json(v: &ExtInt) -> Value {
    Value::String(v.to_string())
}

pub fn rat_json(v: &Rational) -> Value {
    Value::String(v.to_string())
}

pub fn point_json(p: &LatticePoint) -> Value {
    Value::Array(p.coords().iter().map(int_json).collect())
}

pub fn rat_vec_json(p: &[Rational]) -> Value {
    Value::Array(p.iter().map(rat_json).collect())
}

pub fn box_json(b: &IntegralBox) -> Value {
    json!({
        "lower": b.lower().iter().map(ext_json).collect::<Vec<_>>(),
        "upper": b.upper().iter().map(ext_json).collect::<Vec<_>>(),
    })
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| bad(format!("not an integer: {s:?}"))),
        Value::Number(n) if n.is_i64() || n.is_u64() => Ok(BigInt::from_str(&n.to_string()).unwrap()),
        other => Err(bad(format!("expected an integer, found {other}"))),
    }
}

pub fn parse_ext(v: &Value) -> Result<ExtInt> {
    match v {
        Value::String(s) if s == "+inf" || s == "inf" => Ok(ExtInt::PosInf),
        Value::String(s) if s == "-inf" => Ok(ExtInt::NegInf),
        other => parse_int(other).map(ExtInt::Finite),
    }
}

pub fn parse_rat(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => match s.split_once('/') {
            Some((n, d)) => {
                let n = BigInt::from_str(n.trim()).map_err(|_| bad(format!("bad numerator in {s:?}")))?;
                let d = BigInt::from_str(d.trim()).map_err(|_| bad(format!("bad denominator in {s:?}")))?;
                if d == BigInt::from(0) {
                    return Err(bad(format!("zero denominator in {s:?}")));
                }
                Ok(Rational::new(n, d))
            }
            None => parse_int(v).map(Rational::from_integer),
        },
        other => parse_int(other).map(Rational::from_integer),
    }
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(format!("{what} must be a list")))
}

pub fn parse_point(v: &Value) -> Result<LatticePoint> {
    Ok(LatticePoint::new(
        array(v, "point")?.iter().map(parse_int).collect::<Result<_>>()?,
    ))
}

pub fn parse_rat_vec(v: &Value) -> Result<Vec<Rational>> {
    array(v, "vector")?.iter().map(parse_rat).collect()
}

pub fn parse_box(v: &Value) -> Result<IntegralBox> {
    let side = |k: &str| -> Result<Vec<ExtInt>> {
        array(v.get(k).ok_or_else(|| bad(format!("box needs \"{k}\"")))?, k)?
            .iter()
            .map(parse_ext)
            .collect()
    };
    IntegralBox::new(side("lower")?, side("upper")?)
}

pub fn table_json(t: &TableFunction) -> Value {
    Value::Array(t.iter().map(|(x, v)| json!([point_json(x), int_json(v)])).collect())
}

pub fn parse_table(dim: usize, v: &Value) -> Result<TableFunction> {
    let mut entries = BTreeMap::new();
    for e in array(v, "table")? {
        let pair = array(e, "table entry")?;
        if pair.len() != 2 {
            return Err(bad("table entries are [point, value] pairs"));
        }
        let x = parse_point(&pair[0])?;
        if x.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: x.dim(),
            });
        }
        if entries.insert(x.clone(), parse_int(&pair[1])?).is_some() {
            return Err(bad(format!("duplicate table point {x}")));
        }
    }
    TableFunction::new(dim, entries)
}

fn piece_json(p: &UnivariatePiece) -> Value {
    let (shape, params) = match p.shape() {
        PieceShape::Breakpoints(vs) => (
            "breakpoints",
            json!({ "values": vs.iter().map(int_json).collect::<Vec<_>>() }),
        ),
        PieceShape::Abs { alpha, k0 } => ("abs", json!({ "alpha": int_json(alpha), "k0": int_json(k0) })),
        PieceShape::Quad { beta, k0 } => ("quad", json!({ "beta": int_json(beta), "k0": int_json(k0) })),
        PieceShape::Linear { slope } => ("linear", json!({ "slope": int_json(slope) })),
        PieceShape::Kinked {
            k0,
            value,
            left_slope,
            right_slope,
        } => (
            "kinked",
            json!({
                "k0": int_json(k0),
                "value": int_json(value),
                "left_slope": int_json(left_slope),
                "right_slope": int_json(right_slope),
            }),
        ),
    };
    json!({
        "shape": shape,
        "domain": [ext_json(p.lower()), ext_json(p.upper())],
        "params": params,
    })
}

fn parse_piece(v: &Value) -> Result<UnivariatePiece> {
    let shape = v
        .get("shape")
        .and_then(Value::as_str)
        .ok_or_else(|| bad("piece needs a \"shape\""))?;
    let params = v.get("params").cloned().unwrap_or(json!({}));
    let param = |k: &str| -> Result<BigInt> {
        parse_int(
            params
                .get(k)
                .ok_or_else(|| bad(format!("{shape} piece needs param \"{k}\"")))?,
        )
    };
    let (lo, hi) = match v.get("domain") {
        None => (ExtInt::NegInf, ExtInt::PosInf),
        Some(d) => {
            let d = array(d, "domain")?;
            if d.len() != 2 {
                return Err(bad("domain is [lo, hi]"));
            }
            (parse_ext(&d[0])?, parse_ext(&d[1])?)
        }
    };
    let shape = match shape {
        "breakpoints" => PieceShape::Breakpoints(
            array(
                params.get("values").ok_or_else(|| bad("breakpoints need \"values\""))?,
                "values",
            )?
            .iter()
            .map(parse_int)
            .collect::<Result<_>>()?,
        ),
        "abs" => PieceShape::Abs {
            alpha: param("alpha")?,
            k0: param("k0")?,
        },
        "quad" => PieceShape::Quad {
            beta: param("beta")?,
            k0: param("k0")?,
        },
        "linear" => PieceShape::Linear { slope: param("slope")? },
        "kinked" => PieceShape::Kinked {
            k0: param("k0")?,
            value: param("value")?,
            left_slope: param("left_slope")?,
            right_slope: param("right_slope")?,
        },
        other => return Err(bad(format!("unknown piece shape {other:?}"))),
    };
    UnivariatePiece::new(shape, lo, hi)
}

pub fn separable_json(s: &SeparableFunction) -> Value {
    json!({
        "orientation": match s.orientation() {
            Orientation::Convex => "convex",
            Orientation::Concave => "concave",
        },
        "pieces": s.pieces().iter().map(piece_json).collect::<Vec<_>>(),
    })
}

pub fn parse_separable(v: &Value) -> Result<SeparableFunction> {
    let orientation = match v.get("orientation").and_then(Value::as_str) {
        Some("convex") => Orientation::Convex,
        Some("concave") | None => Orientation::Concave,
        Some(other) => return Err(bad(format!("unknown orientation {other:?}"))),
    };
    let pieces = array(
        v.get("pieces").ok_or_else(|| bad("separable needs \"pieces\""))?,
        "pieces",
    )?
    .iter()
    .map(parse_piece)
    .collect::<Result<_>>()?;
    SeparableFunction::new(orientation, pieces)
}

/// `{"X": [...], "Y": [...]}` with 1-based element labels.
pub fn signed_set_json(s: &[i8]) -> Value {
    let (x, y) = sets_of(s);
    json!({
        "X": x.iter().map(|i| i + 1).collect::<Vec<_>>(),
        "Y": y.iter().map(|i| i + 1).collect::<Vec<_>>(),
    })
}

fn parse_labels(v: &Value) -> Result<Vec<usize>> {
    array(v, "element list")?
        .iter()
        .map(|e| {
            let i = parse_int(e)?;
            let i: usize = (&i).try_into().map_err(|_| bad(format!("bad element label {i}")))?;
            i.checked_sub(1).ok_or_else(|| bad("element labels start at 1"))
        })
        .collect()
}

pub fn bisub_json(f: &BisubFunction) -> Value {
    Value::Array(
        f.iter()
            .map(|(s, v)| {
                let (x, y) = sets_of(&s);
                json!([
                    [
                        x.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        y.iter().map(|i| i + 1).collect::<Vec<_>>()
                    ],
                    int_json(v)
                ])
            })
            .collect(),
    )
}

pub fn parse_bisub(n: usize, v: &Value) -> Result<BisubFunction> {
    let mut pairs = Vec::new();
    for e in array(v, "bisub")? {
        let e = array(e, "bisub entry")?;
        if e.len() != 2 {
            return Err(bad("bisub entries are [[X, Y], value]"));
        }
        let xy = array(&e[0], "[X, Y]")?;
        if xy.len() != 2 {
            return Err(bad("bisub entries are [[X, Y], value]"));
        }
        pairs.push(((parse_labels(&xy[0])?, parse_labels(&xy[1])?), parse_int(&e[1])?));
    }
    BisubFunction::from_pairs(n, &pairs)
}

impl Instance {
    /// Parses an instance document. Syntax errors carry serde's position;
    /// semantic errors point at the offending top-level key.
    pub fn parse(text: &str) -> Result<Instance> {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let obj = root
            .as_object()
            .ok_or_else(|| sem(text, "", "instance must be an object"))?;
        let known = [
            "dimension",
            "table",
            "concave_table",
            "separable",
            "box",
            "bisub",
            "point",
            "flags",
        ];
        if let Some(k) = obj.keys().find(|k| !known.contains(&k.as_str())) {
            return Err(sem(text, k, format!("unknown key {k:?}")));
        }
        let dimension = obj
            .get("dimension")
            .ok_or_else(|| sem(text, "dimension", "missing \"dimension\""))
            .and_then(|v| {
                let d = parse_int(v).map_err(|e| sem(text, "dimension", e.to_string()))?;
                usize::try_from(&d).map_err(|_| sem(text, "dimension", "dimension must be a small nonnegative integer"))
            })?;
        let wrap = |key: &str, r: Result<()>| {
            r.map_err(|e| match e {
                Error::Parse { .. }
                | Error::DimensionMismatch { .. }
                | Error::InvalidBox(_)
                | Error::InvalidFunction(_) => sem(text, key, e.to_string()),
                other => other,
            })
        };
        let mut inst = Instance {
            dimension,
            ..Default::default()
        };
        if let Some(v) = obj.get("table") {
            wrap("table", parse_table(dimension, v).map(|t| inst.table = Some(t)))?;
        }
        if let Some(v) = obj.get("concave_table") {
            wrap(
                "concave_table",
                parse_table(dimension, v).map(|t| inst.concave_table = Some(t)),
            )?;
        }
        if let Some(v) = obj.get("separable") {
            wrap(
                "separable",
                parse_separable(v).and_then(|s| {
                    if s.dim() != dimension {
                        return Err(Error::DimensionMismatch {
                            expected: dimension,
                            found: s.dim(),
                        });
                    }
                    inst.separable = Some(s);
                    Ok(())
                }),
            )?;
        }
        if let Some(v) = obj.get("box") {
            wrap(
                "box",
                parse_box(v).and_then(|b| {
                    if b.dim() != dimension {
                        return Err(Error::DimensionMismatch {
                            expected: dimension,
                            found: b.dim(),
                        });
                    }
                    inst.bx = Some(b);
                    Ok(())
                }),
            )?;
        }
        if let Some(v) = obj.get("bisub") {
            wrap("bisub", parse_bisub(dimension, v).map(|b| inst.bisub = Some(b)))?;
        }
        if let Some(v) = obj.get("point") {
            wrap(
                "point",
                parse_point(v).and_then(|p| {
                    if p.dim() != dimension {
                        return Err(Error::DimensionMismatch {
                            expected: dimension,
                            found: p.dim(),
                        });
                    }
                    inst.point = Some(p);
                    Ok(())
                }),
            )?;
        }
        if let Some(v) = obj.get("flags") {
            let flags = v
                .as_array()
                .and_then(|a| {
                    a.iter()
                        .map(|f| f.as_str().map(str::to_owned))
                        .collect::<Option<BTreeSet<_>>>()
                })
                .ok_or_else(|| sem(text, "flags", "flags must be a list of strings"))?;
            inst.flags = flags;
        }
        Ok(inst)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("dimension".into(), Value::String(self.dimension.to_string()));
        if let Some(t) = &self.table {
            m.insert("table".into(), table_json(t));
        }
        if let Some(t) = &self.concave_table {
            m.insert("concave_table".into(), table_json(t));
        }
        if let Some(s) = &self.separable {
            m.insert("separable".into(), separable_json(s));
        }
        if let Some(b) = &self.bx {
            m.insert("box".into(), box_json(b));
        }
        if let Some(b) = &self.bisub {
            m.insert("bisub".into(), bisub_json(b));
        }
        if let Some(p) = &self.point {
            m.insert("point".into(), point_json(p));
        }
        if !self.flags.is_empty() {
            m.insert("flags".into(), json!(self.flags));
        }
        Value::Object(m)
    }

    pub fn to_canonical_string(&self) -> String {
        canonical_string(&self.to_json())
    }
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Command output envelope.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub command: String,
    pub status: String,
    pub payload: Value,
    pub elapsed_us: u128,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "status": self.status,
            "payload": self.payload,
            "elapsed_us": self.elapsed_us.to_string(),
        })
    }

    pub fn parse(text: &str) -> Result<Report> {
        let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_str)
                .map(str::to_owned)
                .ok_or_else(|| sem(text, k, format!("report needs \"{k}\"")))
        };
        Ok(Report {
            command: field("command")?,
            status: field("status")?,
            payload: v.get("payload").cloned().unwrap_or(Value::Null),
            elapsed_us: field("elapsed_us")?
                .parse()
                .map_err(|_| sem(text, "elapsed_us", "elapsed_us must be an integer string"))?,
        })
    }
}
