//! JSON file formats for models, piecewise-linear functions and Skolem
//! definitions, and JSON renderings of the library's reports.
//!
//! Rationals are written as `"p/q"` strings. Report objects are built with
//! `serde_json::Map`, whose keys are sorted, so output is stable.

use std::collections::BTreeMap;

use convexqe_core::classify::{ClassificationReport, CutKind, FValuational, Pluslike, PluslikeFailure};
use convexqe_core::convex::{SkolemCase, SkolemDefinition};
use convexqe_core::lab::{ChoiceViolation, ObstructionWitness, SkolemFailure, SkolemReport, ThresholdComparison};
use convexqe_core::model::{Assignment, Entry, Interval, Irrational, ModelDescriptor, Point, ThresholdOrder, UInterp};
use convexqe_core::pl::{BinaryPiece, Piece, PlBinary, PlUnary};
use convexqe_core::rational::{format_rational, parse_rational, Rational};
use convexqe_core::syntax::{parse_formula, parse_term, Term};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("not a rational: {0:?}")]
    Rational(String),
    #[error("unknown irrational constant {0:?}")]
    Irrational(String),
    #[error("in {field}: {message}")]
    Field { field: &'static str, message: String },
}

fn field(field: &'static str, e: impl ToString) -> FormatError {
    FormatError::Field { field, message: e.to_string() }
}

pub fn rational(s: &str) -> Result<Rational, FormatError> {
    parse_rational(s).ok_or_else(|| FormatError::Rational(s.into()))
}

pub fn rational_json(q: &Rational) -> Value {
    Value::String(format_rational(q))
}

pub fn point_json(p: &Point) -> Value {
    Value::Array(p.0.iter().map(rational_json).collect())
}

fn point_from(xs: &[String]) -> Result<Point, FormatError> {
    xs.iter().map(|s| rational(s)).collect::<Result<_, _>>().map(Point)
}

/// Parses `1/2,0,-3` into a point.
pub fn point_from_text(s: &str) -> Result<Point, FormatError> {
    s.split(',').map(rational).collect::<Result<_, _>>().map(Point)
}

pub fn assignment_json(a: &Assignment) -> Value {
    Value::Object(a.iter().map(|(k, p)| (k.clone(), point_json(p))).collect())
}

pub fn interval_json(iv: &Interval) -> Value {
    json!({ "lo": rational_json(&iv.lo), "hi": rational_json(&iv.hi) })
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EntryFile {
    Text(String),
    Irrational { irrational: String },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
enum UFile {
    Subgroup { level: usize },
    DownwardCut { threshold: Vec<EntryFile>, strict: bool },
    Symmetric { threshold: Vec<EntryFile>, strict: bool },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    dim: usize,
    #[serde(rename = "U")]
    u: UFile,
    e_in: Vec<String>,
    e_out: Vec<String>,
}

fn entry_from(e: &EntryFile) -> Result<Entry, FormatError> {
    match e {
        EntryFile::Text(s) if s == "+inf" || s == "inf" => Ok(Entry::PlusInf),
        EntryFile::Text(s) if s == "-inf" => Ok(Entry::MinusInf),
        EntryFile::Text(s) => rational(s).map(Entry::Rational),
        EntryFile::Irrational { irrational } => irrational_from(irrational).map(Entry::Irrational),
    }
}

fn irrational_from(s: &str) -> Result<Irrational, FormatError> {
    if s == "pi" {
        return Ok(Irrational::Pi);
    }
    s.strip_prefix("sqrt(")
        .and_then(|r| r.strip_suffix(')'))
        .and_then(parse_rational)
        .and_then(Irrational::sqrt)
        .ok_or_else(|| FormatError::Irrational(s.into()))
}

fn entry_to(e: &Entry) -> EntryFile {
    match e {
        Entry::Rational(q) => EntryFile::Text(format_rational(q)),
        Entry::Irrational(i) => EntryFile::Irrational { irrational: i.to_string() },
        Entry::PlusInf => EntryFile::Text("+inf".into()),
        Entry::MinusInf => EntryFile::Text("-inf".into()),
    }
}

pub fn model_from_str(text: &str) -> Result<ModelDescriptor, FormatError> {
    let file: ModelFile = serde_json::from_str(text)?;
    let threshold = |t: &[EntryFile]| t.iter().map(entry_from).collect::<Result<Vec<_>, _>>();
    let u = match &file.u {
        UFile::Subgroup { level } => UInterp::Subgroup { level: *level },
        UFile::DownwardCut { threshold: t, strict } => {
            UInterp::DownwardCut { threshold: threshold(t)?, strict: *strict }
        }
        UFile::Symmetric { threshold: t, strict } => UInterp::Symmetric { threshold: threshold(t)?, strict: *strict },
    };
    ModelDescriptor::new(file.dim, u, point_from(&file.e_in)?, point_from(&file.e_out)?).map_err(|e| field("model", e))
}

pub fn model_json(m: &ModelDescriptor) -> Value {
    let threshold = |t: &[Entry]| t.iter().map(entry_to).collect();
    let u = match m.u() {
        UInterp::Subgroup { level } => UFile::Subgroup { level: *level },
        UInterp::DownwardCut { threshold: t, strict } => {
            UFile::DownwardCut { threshold: threshold(t), strict: *strict }
        }
        UInterp::Symmetric { threshold: t, strict } => UFile::Symmetric { threshold: threshold(t), strict: *strict },
    };
    let strings = |p: &Point| p.0.iter().map(format_rational).collect();
    let file = ModelFile { dim: m.dim(), u, e_in: strings(m.e_in()), e_out: strings(m.e_out()) };
    serde_json::to_value(file).expect("model files serialize")
}

fn closed_term(s: &str) -> Result<Term, FormatError> {
    parse_term(s).map_err(|e| field("intercept", e))
}

fn term_text(t: &Term) -> String {
    match t.as_rational() {
        Some(q) => format_rational(q),
        None => t.to_string(),
    }
}

#[derive(Serialize, Deserialize)]
struct PieceFile {
    slope: String,
    intercept: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct UnaryFile {
    breakpoints: Vec<String>,
    pieces: Vec<PieceFile>,
}

pub fn pl_unary_from_str(text: &str) -> Result<PlUnary, FormatError> {
    let file: UnaryFile = serde_json::from_str(text)?;
    let breakpoints = file.breakpoints.iter().map(|s| rational(s)).collect::<Result<_, _>>()?;
    let pieces = file
        .pieces
        .iter()
        .map(|p| Ok(Piece::new(rational(&p.slope)?, closed_term(&p.intercept)?)))
        .collect::<Result<_, FormatError>>()?;
    PlUnary::new(breakpoints, pieces).map_err(|e| field("function", e))
}

pub fn pl_unary_json(f: &PlUnary) -> Value {
    let file = UnaryFile {
        breakpoints: f.breakpoints().iter().map(format_rational).collect(),
        pieces: f
            .pieces()
            .iter()
            .map(|p| PieceFile { slope: format_rational(&p.slope), intercept: term_text(&p.intercept) })
            .collect(),
    };
    serde_json::to_value(file).expect("functions serialize")
}

#[derive(Serialize, Deserialize)]
struct BinaryPieceFile {
    dx: String,
    dy: String,
    intercept: String,
}

/// A binary function affine on the strips `b_(i-1) <= a*x + b*y <= b_i`;
/// the direction `(a, b)` defaults to `(1, 1)`.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BinaryFile {
    #[serde(default)]
    direction: Option<[String; 2]>,
    breakpoints: Vec<String>,
    pieces: Vec<BinaryPieceFile>,
}

pub fn pl_binary_from_str(text: &str) -> Result<PlBinary, FormatError> {
    let file: BinaryFile = serde_json::from_str(text)?;
    let direction = match &file.direction {
        Some([a, b]) => (rational(a)?, rational(b)?),
        None => (Rational::from_integer(1.into()), Rational::from_integer(1.into())),
    };
    let breakpoints = file.breakpoints.iter().map(|s| rational(s)).collect::<Result<_, _>>()?;
    let pieces = file
        .pieces
        .iter()
        .map(|p| Ok(BinaryPiece::new(rational(&p.dx)?, rational(&p.dy)?, closed_term(&p.intercept)?)))
        .collect::<Result<_, FormatError>>()?;
    PlBinary::new(direction, breakpoints, pieces).map_err(|e| field("function", e))
}

pub fn pl_binary_json(f: &PlBinary) -> Value {
    let (a, b) = f.direction();
    let file = BinaryFile {
        direction: Some([format_rational(a), format_rational(b)]),
        breakpoints: f.breakpoints().iter().map(format_rational).collect(),
        pieces: f
            .pieces()
            .iter()
            .map(|p| BinaryPieceFile {
                dx: format_rational(&p.dx),
                dy: format_rational(&p.dy),
                intercept: term_text(&p.intercept),
            })
            .collect(),
    };
    serde_json::to_value(file).expect("functions serialize")
}

#[derive(Serialize, Deserialize)]
struct CaseFile {
    guard: String,
    witness: String,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum SkolemFile {
    Cases(Vec<CaseFile>),
    Report { target: String, definition: Vec<CaseFile> },
}

/// Reads a definition written as a list of `{guard, witness}` cases, or as
/// the `skolemize` report, which also names the target. `target` applies to
/// the bare list.
pub fn skolem_from_str(text: &str, target: &str) -> Result<SkolemDefinition, FormatError> {
    let (target, cases) = match serde_json::from_str(text)? {
        SkolemFile::Cases(cases) => (target.to_string(), cases),
        SkolemFile::Report { target, definition } => (target, definition),
    };
    let cases = cases
        .iter()
        .map(|c| {
            Ok(SkolemCase {
                guard: parse_formula(&c.guard).map_err(|e| field("guard", e))?,
                witness: parse_term(&c.witness).map_err(|e| field("witness", e))?,
            })
        })
        .collect::<Result<_, FormatError>>()?;
    Ok(SkolemDefinition { target, cases })
}

pub fn skolem_cases_json(sk: &SkolemDefinition) -> Value {
    let cases: Vec<CaseFile> =
        sk.cases.iter().map(|c| CaseFile { guard: c.guard.to_string(), witness: c.witness.to_string() }).collect();
    serde_json::to_value(cases).expect("cases serialize")
}

pub fn cut_kind_name(k: CutKind) -> &'static str {
    match k {
        CutKind::RationalCut => "RationalCut",
        CutKind::IrrationalValuational => "IrrationalValuational",
        CutKind::IrrationalNonvaluational => "IrrationalNonvaluational",
    }
}

/// The classification report. For a nonvaluational cut, the falsifier is
/// shown at `eps = e_n`.
pub fn classification_json(m: &ModelDescriptor, r: &ClassificationReport) -> Value {
    let falsifier = r.falsifier.as_ref().map(|f| {
        let eps = Point::unit(m.dim(), m.dim() - 1);
        json!({ "epsilon": point_json(&eps), "point": f.find(&eps).as_ref().map(point_json) })
    });
    json!({
        "cut_kind": cut_kind_name(r.cut_kind),
        "epsilon_witness": r.epsilon_witness.as_ref().map(point_json),
        "falsifier": falsifier,
        "stabilizer_level": r.stabilizer_level,
        "uniquely_realizable": r.uniquely_realizable,
    })
}

fn order_name(o: ThresholdOrder) -> &'static str {
    match o {
        ThresholdOrder::Below => "below",
        ThresholdOrder::Equal => "equal",
        ThresholdOrder::Above => "above",
    }
}

fn comparison_json(c: &ThresholdComparison) -> Value {
    json!({
        "point": point_json(&c.point),
        "order": order_name(c.order),
        "interval": c.interval.as_ref().map(interval_json),
    })
}

pub fn obstruction_json(w: &ObstructionWitness) -> Value {
    json!({
        "point": point_json(&w.point),
        "image": point_json(&w.image),
        "violation": format!("{:?}", w.violation),
        "certificate": w.certificate.iter().map(comparison_json).collect::<Vec<_>>(),
    })
}

pub fn choice_json(v: &ChoiceViolation) -> Value {
    match v {
        ChoiceViolation::NoValidOutput { point, value } => json!({
            "kind": "NoValidOutput",
            "point": point_json(point),
            "value": value.as_ref().map(point_json),
        }),
        ChoiceViolation::SplitFiber { a, b, fa, fb } => json!({
            "kind": "SplitFiber",
            "a": point_json(a),
            "b": point_json(b),
            "fa": point_json(fa),
            "fb": point_json(fb),
        }),
    }
}

pub fn skolem_report_json(r: &SkolemReport) -> Value {
    let counterexample = r.counterexample.as_ref().map(|c| {
        let failure = match &c.failure {
            SkolemFailure::NoGuardFired => json!({ "kind": "NoGuardFired" }),
            SkolemFailure::WitnessFails { case, witness } => {
                json!({ "kind": "WitnessFails", "case": case, "witness": point_json(witness) })
            }
        };
        json!({ "assignment": assignment_json(&c.assignment), "failure": failure })
    });
    json!({
        "samples": r.samples,
        "solvable": r.solvable,
        "passed": r.passed,
        "counterexample": counterexample,
    })
}

fn pair_json(p: &(Rational, Rational)) -> Value {
    json!([rational_json(&p.0), rational_json(&p.1)])
}

pub fn pluslike_json(p: &Pluslike) -> Value {
    match p {
        Pluslike::Pluslike => json!({ "pluslike": true }),
        Pluslike::Violation { reason, witness } => {
            let (kind, index) = match reason {
                PluslikeFailure::Discontinuous { left } => ("Discontinuous", left),
                PluslikeFailure::NotIncreasingInX { piece } => ("NotIncreasingInX", piece),
                PluslikeFailure::NotIncreasingInY { piece } => ("NotIncreasingInY", piece),
            };
            json!({
                "pluslike": false,
                "reason": { "kind": kind, "index": index },
                "witness": witness.iter().map(pair_json).collect::<Vec<_>>(),
            })
        }
    }
}

pub fn f_valuational_json(v: &FValuational) -> Value {
    match v {
        FValuational::Yes { epsilon } => json!({ "f_valuational": true, "epsilon": point_json(epsilon) }),
        FValuational::No { falsifiers } => json!({
            "f_valuational": false,
            "falsifiers": falsifiers
                .iter()
                .map(|(eps, a)| json!({ "epsilon": point_json(eps), "point": point_json(a) }))
                .collect::<Vec<_>>(),
        }),
    }
}

/// Builds an assignment from `name=coords` pairs.
pub fn assignment_from_pairs(pairs: &[String]) -> Result<Assignment, FormatError> {
    let mut out = BTreeMap::new();
    for pair in pairs {
        let (name, value) =
            pair.split_once('=').ok_or_else(|| field("assignment", format!("expected name=value in {pair:?}")))?;
        out.insert(name.trim().to_string(), point_from_text(value)?);
    }
    Ok(out)
}
