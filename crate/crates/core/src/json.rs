//! JSON wire formats for varieties, classes, cones, semigroups, verdicts and
//! witness reports.
//!
//! Rationals travel as `"p/q"` strings (plain integers are accepted on
//! input), polynomials as ascending coefficient arrays.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cone_engine::{
    ConeError, Evidence, Pairing, PolyhedralityVerdict, RationalCone, SemigroupBasis, Sublattice,
    WitnessKind, MAX_INPUT_COORD, MAX_INPUT_RANK,
};
use crate::exactnum::{format_rational, parse_rational, ExactError, Poly, QuadExtScalar, Q};
use crate::ns_lattice::{
    AbstractVariety, EndRing, Factor, HermitianClass, HomEntry, NSClass, NsError, ProductVariety,
    VarietyPresentation,
};
use crate::witnesses::{BmRecord, SlopeCertificate, WitnessReport};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("malformed JSON: {0}")]
    Syntax(String),
    #[error("invalid document: {0}")]
    Invalid(String),
    #[error(transparent)]
    Ns(#[from] NsError),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        Self::Syntax(e.to_string())
    }
}

fn from_value<T: for<'de> Deserialize<'de>>(v: &Value) -> Result<T, JsonError> {
    T::deserialize(v).map_err(|e| JsonError::Invalid(e.to_string()))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum RationalDoc {
    Int(i64),
    Text(String),
}

impl RationalDoc {
    fn value(&self) -> Result<Q, JsonError> {
        match self {
            Self::Int(n) => Ok(Q::from_integer((*n).into())),
            Self::Text(s) => Ok(parse_rational(s)?),
        }
    }
}

fn rationals(v: &[RationalDoc]) -> Result<Vec<Q>, JsonError> {
    v.iter().map(RationalDoc::value).collect()
}

fn rational_value(q: &Q) -> Value {
    Value::String(format_rational(q))
}

pub fn int_value(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => json!(v),
        None => Value::String(n.to_string()),
    }
}

/// Integer coefficients ascending; non-integral polynomials use strings.
pub fn poly_value(p: &Poly) -> Value {
    match p.integer_coeffs() {
        Some(c) => Value::Array(c.iter().map(int_value).collect()),
        None => Value::Array(p.coeffs().iter().map(rational_value).collect()),
    }
}

pub fn parse_poly(v: &Value) -> Result<Poly, JsonError> {
    let docs: Vec<RationalDoc> = from_value(v)?;
    Ok(Poly::new(rationals(&docs)?))
}

// ---------------------------------------------------------------- varieties

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
enum VarietyDoc {
    #[serde(rename = "product")]
    Product(ProductDoc),
    #[serde(rename = "abstract")]
    Abstract(AbstractDoc),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProductDoc {
    factors: Vec<FactorDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FactorDoc {
    id: String,
    end: EndDoc,
    mult: usize,
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct EndDoc {
    kind: String,
    #[serde(rename = "D", default, skip_serializing_if = "Option::is_none")]
    d: Option<i64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct AbstractDoc {
    rank: usize,
    dim: usize,
    tensor: Value,
    ample: Vec<RationalDoc>,
    #[serde(default)]
    simple: bool,
}

fn flatten_tensor(v: &Value, out: &mut Vec<BigInt>) -> Result<(), JsonError> {
    match v {
        Value::Array(items) => items.iter().try_for_each(|x| flatten_tensor(x, out)),
        Value::Number(n) => {
            let i = n
                .as_i64()
                .ok_or_else(|| JsonError::Invalid(format!("tensor entry {n} is not an integer")))?;
            out.push(i.into());
            Ok(())
        }
        other => Err(JsonError::Invalid(format!(
            "tensor entry {other} is not an integer"
        ))),
    }
}

fn end_ring(doc: &EndDoc) -> Result<EndRing, JsonError> {
    match (doc.kind.as_str(), doc.d) {
        ("Z", None) => Ok(EndRing::Integers),
        ("cm", Some(d)) => Ok(EndRing::cm(d)?),
        ("cm", None) => Err(JsonError::Invalid(
            "cm endomorphism ring needs a discriminant D".into(),
        )),
        ("Z", Some(_)) => Err(JsonError::Invalid("kind Z takes no discriminant".into())),
        (k, _) => Err(JsonError::Invalid(format!(
            "unknown endomorphism kind {k:?}"
        ))),
    }
}

pub fn parse_variety(v: &Value) -> Result<VarietyPresentation, JsonError> {
    match from_value::<VarietyDoc>(v)? {
        VarietyDoc::Product(p) => {
            let factors = p
                .factors
                .iter()
                .map(|f| Ok(Factor::new(f.id.clone(), end_ring(&f.end)?, f.mult)))
                .collect::<Result<Vec<_>, JsonError>>()?;
            Ok(ProductVariety::new(factors)?.into())
        }
        VarietyDoc::Abstract(a) => {
            let mut tensor = Vec::new();
            flatten_tensor(&a.tensor, &mut tensor)?;
            let ample = rationals(&a.ample)?;
            Ok(AbstractVariety::new(a.rank, a.dim, tensor, ample, a.simple)?.into())
        }
    }
}

/// Parses and validates a serialized presentation.
pub fn build_variety(text: &str) -> Result<VarietyPresentation, JsonError> {
    parse_variety(&serde_json::from_str(text)?)
}

pub fn variety_value(x: &VarietyPresentation) -> Value {
    match x {
        VarietyPresentation::Product(p) => {
            let factors: Vec<Value> = p
                .factors()
                .iter()
                .map(|f| {
                    let end = match f.end {
                        EndRing::Integers => json!({"kind": "Z"}),
                        EndRing::Cm { discriminant } => json!({"kind": "cm", "D": discriminant}),
                    };
                    json!({"id": f.id, "end": end, "mult": f.mult})
                })
                .collect();
            json!({"product": {"factors": factors}})
        }
        VarietyPresentation::Abstract(a) => json!({"abstract": {
            "rank": a.rank(),
            "dim": a.dim(),
            "tensor": a.tensor().iter().map(int_value).collect::<Vec<_>>(),
            "ample": a.ample().iter().map(rational_value).collect::<Vec<_>>(),
            "simple": a.is_simple(),
        }}),
    }
}

// ------------------------------------------------------------------ classes

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
enum ClassDoc {
    #[serde(rename = "matrix")]
    Matrix(Vec<Vec<EntryDoc>>),
    #[serde(rename = "coords")]
    Coords(Vec<RationalDoc>),
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EntryDoc {
    Int(i64),
    Pair {
        a: i64,
        #[serde(default)]
        b: i64,
    },
}

pub fn parse_class(v: &Value) -> Result<NSClass, JsonError> {
    match from_value::<ClassDoc>(v)? {
        ClassDoc::Matrix(rows) => {
            let rows = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|e| match e {
                            EntryDoc::Int(a) => HomEntry::int(*a),
                            EntryDoc::Pair { a, b } => HomEntry::new(*a, *b),
                        })
                        .collect()
                })
                .collect();
            Ok(NSClass::Matrix(HermitianClass::from_rows(rows)?))
        }
        ClassDoc::Coords(c) => Ok(NSClass::Coords(rationals(&c)?)),
    }
}

/// Parses a class and checks it against `x`.
pub fn build_class(text: &str, x: &VarietyPresentation) -> Result<NSClass, JsonError> {
    let c = parse_class(&serde_json::from_str(text)?)?;
    c.validate(x)?;
    Ok(c)
}

pub fn class_value(c: &NSClass) -> Value {
    match c {
        NSClass::Matrix(m) => {
            let rows: Vec<Value> = m
                .rows()
                .iter()
                .map(|r| {
                    Value::Array(
                        r.iter()
                            .map(|e| json!({"a": int_value(&e.a), "b": int_value(&e.b)}))
                            .collect(),
                    )
                })
                .collect();
            json!({"matrix": rows})
        }
        NSClass::Coords(c) => json!({"coords": c.iter().map(rational_value).collect::<Vec<_>>()}),
    }
}

pub fn parse_classes(v: &Value) -> Result<Vec<NSClass>, JsonError> {
    let items: Vec<Value> = from_value(v)?;
    items.iter().map(parse_class).collect()
}

// ---------------------------------------------------------- scalars & cones

pub fn scalar_value(s: &QuadExtScalar) -> Value {
    serde_json::to_value(s).expect("scalars serialize")
}

pub fn parse_scalar(v: &Value) -> Result<QuadExtScalar, JsonError> {
    QuadExtScalar::deserialize(v).map_err(|e| JsonError::Invalid(e.to_string()))
}

#[derive(Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct ConeDoc {
    rank: usize,
    rays: Vec<Vec<i64>>,
}

fn bounded(rows: &[Vec<i64>]) -> Result<(), JsonError> {
    match rows
        .iter()
        .flatten()
        .find(|x| x.unsigned_abs() > MAX_INPUT_COORD as u64)
    {
        Some(x) => Err(JsonError::Invalid(format!(
            "coordinate {x} exceeds the input bound {MAX_INPUT_COORD}"
        ))),
        None => Ok(()),
    }
}

fn rank_bounded(rank: usize) -> Result<usize, JsonError> {
    if rank > MAX_INPUT_RANK {
        return Err(JsonError::Invalid(format!(
            "rank {rank} exceeds the input bound {MAX_INPUT_RANK}"
        )));
    }
    Ok(rank)
}

pub fn parse_cone(v: &Value) -> Result<RationalCone, JsonError> {
    let d: ConeDoc = from_value(v)?;
    bounded(&d.rays)?;
    Ok(RationalCone::new(rank_bounded(d.rank)?, d.rays)?)
}

pub fn cone_value(c: &RationalCone) -> Value {
    json!({"rank": c.rank(), "rays": c.rays()})
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SemigroupDoc {
    rank: usize,
    generators: Vec<Vec<i64>>,
    // informational fields written by the CLI
    #[serde(default)]
    #[allow(dead_code)]
    index: Option<u64>,
    #[serde(default)]
    #[allow(dead_code)]
    verified_box: Option<i64>,
}

pub fn parse_semigroup(v: &Value) -> Result<SemigroupBasis, JsonError> {
    let d: SemigroupDoc = from_value(v)?;
    bounded(&d.generators)?;
    Ok(SemigroupBasis::new(rank_bounded(d.rank)?, d.generators)?)
}

pub fn semigroup_value(s: &SemigroupBasis, index: Option<u64>) -> Value {
    let mut v = json!({"rank": s.rank(), "generators": s.elements()});
    if let Some(i) = index {
        v["index"] = json!(i);
    }
    v
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SublatticeDoc {
    #[serde(default)]
    rank: Option<usize>,
    basis: Vec<Vec<i64>>,
}

pub fn parse_sublattice(v: &Value) -> Result<Sublattice, JsonError> {
    let d: SublatticeDoc = from_value(v)?;
    bounded(&d.basis)?;
    let rank = d
        .rank
        .or_else(|| d.basis.first().map(Vec::len))
        .ok_or_else(|| {
            JsonError::Invalid("empty sublattice basis needs an explicit rank".into())
        })?;
    Ok(Sublattice::new(rank_bounded(rank)?, d.basis)?)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairingDoc {
    gram: Vec<Vec<i64>>,
}

pub fn parse_pairing(v: &Value) -> Result<Pairing, JsonError> {
    let d: PairingDoc = from_value(v)?;
    bounded(&d.gram)?;
    rank_bounded(d.gram.len())?;
    Ok(Pairing::new(d.gram)?)
}

/// Slope candidates: an array of `[a, b]` pairs.
pub fn parse_pairs(v: &Value) -> Result<Vec<(BigInt, BigInt)>, JsonError> {
    let pairs: Vec<(i64, i64)> = from_value(v)?;
    Ok(pairs
        .into_iter()
        .map(|(a, b)| (a.into(), b.into()))
        .collect())
}

// ------------------------------------------------------------------ verdicts

pub fn verdict_value(v: &PolyhedralityVerdict) -> Value {
    match &v.evidence {
        Evidence::Basis(b) => json!({
            "polyhedral": v.polyhedral,
            "basis": b.iter().map(class_value).collect::<Vec<_>>(),
        }),
        Evidence::Witness { kind, factor } => json!({
            "polyhedral": v.polyhedral,
            "witness": kind.wire_name(),
            "factor": factor,
        }),
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerdictDoc {
    polyhedral: bool,
    #[serde(default)]
    basis: Option<Vec<Value>>,
    #[serde(default)]
    witness: Option<String>,
    #[serde(default)]
    factor: Option<String>,
    /// Present when the witness was requested alongside the verdict.
    #[serde(default)]
    report: Option<Value>,
}

pub fn parse_verdict(v: &Value) -> Result<PolyhedralityVerdict, JsonError> {
    let d: VerdictDoc = from_value(v)?;
    if let Some(r) = &d.report {
        if d.witness.is_none() {
            return Err(JsonError::Invalid("report without a witness".into()));
        }
        parse_report(r)?;
    }
    let evidence = match (d.basis, d.witness, d.factor) {
        (Some(b), None, None) if d.polyhedral => {
            Evidence::Basis(b.iter().map(parse_class).collect::<Result<_, _>>()?)
        }
        (None, Some(w), Some(factor)) if !d.polyhedral => Evidence::Witness {
            kind: WitnessKind::from_wire(&w)
                .ok_or_else(|| JsonError::Invalid(format!("unknown witness {w:?}")))?,
            factor,
        },
        _ => {
            return Err(JsonError::Invalid(
                "verdict needs a basis or a witness".into(),
            ))
        }
    };
    Ok(PolyhedralityVerdict {
        polyhedral: d.polyhedral,
        evidence,
    })
}

// ------------------------------------------------------------------- reports

pub fn bm_value(r: &BmRecord) -> Value {
    json!({
        "kind": "prop3",
        "m": r.m,
        "n": r.n,
        "class": class_value(&r.class),
        "charpoly": poly_value(&r.charpoly),
        "divergence": int_value(&r.divergence_value),
        "intersections": r.intersections.iter().map(rational_value).collect::<Vec<_>>(),
        "checks": {
            "charpoly": r.charpoly_matches,
            "beta_relation": r.beta_relation_checked,
            "alpha_correspondence": r.alpha_correspondence_checked,
            "restriction": r.restriction_is_generator,
            "nef": r.nef,
        },
    })
}

pub fn slope_value(c: &SlopeCertificate) -> Value {
    json!({
        "kind": "prop2",
        "s": scalar_value(&c.s),
        "minpoly": Value::Array(c.minpoly.coeffs.iter().map(int_value).collect()),
        "q": c.q.as_ref().map(rational_value).unwrap_or(Value::Null),
        "epsilon": scalar_value(&c.epsilon),
        "approx": [int_value(&c.approx.0), int_value(&c.approx.1)],
        "l1": class_value(&c.l1),
        "l2": class_value(&c.l2),
        "ample_class": class_value(&c.ample_class),
    })
}

pub fn report_value(r: &WitnessReport) -> Value {
    match r {
        WitnessReport::Family(b) => bm_value(b),
        WitnessReport::Slope(c) => slope_value(c),
    }
}

/// The fields every report carries, re-read from JSON.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReportSummary {
    Family {
        m: u64,
        class: NSClass,
        charpoly: Poly,
        divergence: BigInt,
    },
    Slope {
        s: QuadExtScalar,
        minpoly: Vec<BigInt>,
        q: Option<Q>,
        approx: (BigInt, BigInt),
    },
}

#[derive(Debug, Deserialize)]
struct ReportDoc {
    kind: String,
    #[serde(default)]
    m: Option<u64>,
    #[serde(default)]
    class: Option<Value>,
    #[serde(default)]
    charpoly: Option<Value>,
    #[serde(default)]
    divergence: Option<i64>,
    #[serde(default)]
    s: Option<Value>,
    #[serde(default)]
    minpoly: Option<Vec<i64>>,
    #[serde(default)]
    q: Option<String>,
    #[serde(default)]
    approx: Option<(i64, i64)>,
}

fn need<T>(x: Option<T>, what: &str) -> Result<T, JsonError> {
    x.ok_or_else(|| JsonError::Invalid(format!("report is missing {what}")))
}

pub fn parse_report(v: &Value) -> Result<ReportSummary, JsonError> {
    let d: ReportDoc = from_value(v)?;
    match d.kind.as_str() {
        "prop3" => Ok(ReportSummary::Family {
            m: need(d.m, "m")?,
            class: parse_class(&need(d.class, "class")?)?,
            charpoly: parse_poly(&need(d.charpoly, "charpoly")?)?,
            divergence: need(d.divergence, "divergence")?.into(),
        }),
        "prop2" => Ok(ReportSummary::Slope {
            s: parse_scalar(&need(d.s, "s")?)?,
            minpoly: need(d.minpoly, "minpoly")?
                .into_iter()
                .map(BigInt::from)
                .collect(),
            q: d.q.as_deref().map(parse_rational).transpose()?,
            approx: {
                let (a, b) = need(d.approx, "approx")?;
                (a.into(), b.into())
            },
        }),
        k => Err(JsonError::Invalid(format!("unknown report kind {k:?}"))),
    }
}
