//! Solve reports as JSON documents and as text.
//!
//! Every report has the same top-level fields whatever the objective or
//! outcome; absent parts are `null` or empty lists.

use std::fmt::Write as _;

use invmaxian::rational::{to_exact_string, to_f64};
use invmaxian::{Certificate, EdgeSign, NormalizedInstance, Rational, Side, SolveReport};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::format::InstanceFile;

pub const OPTIMAL: &str = "OPTIMAL";
pub const INFEASIBLE: &str = "INFEASIBLE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub approx: f64,
}

impl ExactValue {
    pub fn new(value: &Rational) -> Self {
        ExactValue { exact: to_exact_string(value), approx: to_f64(value) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanEntry {
    pub edge: Value,
    /// `+` for a lengthened edge, `-` for a shortened one.
    pub sign: String,
    pub amount: String,
    pub new_length: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub leaf: Value,
    pub side: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportDoc {
    pub status: String,
    pub objective: String,
    pub pair: Option<[Value; 2]>,
    pub cost: Option<ExactValue>,
    pub plan: Vec<PlanEntry>,
    pub violations: Vec<Violation>,
    pub certificate: Option<Value>,
}

fn side_name(side: Side) -> String {
    side.to_string()
}

fn side_ref(file: &InstanceFile, leaf: usize, side: Side) -> Value {
    json!({ "leaf": file.vertex_ids[leaf].to_json(), "side": side_name(side) })
}

fn certificate_json(file: &InstanceFile, norm: &NormalizedInstance, cert: &Certificate) -> Value {
    let edge = |e: usize| file.edge_ids[e].to_json();
    let exact = |x: &Rational| Value::from(to_exact_string(x));
    let mut doc = match cert {
        Certificate::Lp(c) => {
            let rows: Vec<Value> = c
                .row_duals
                .iter()
                .zip(&norm.rows)
                .filter(|(y, _)| !y.is_zero())
                .map(|(y, row)| {
                    let mut r = side_ref(file, row.leaf, row.side);
                    r["dual"] = exact(y);
                    r
                })
                .collect();
            let bounds: Vec<Value> = c
                .bound_duals
                .iter()
                .enumerate()
                .filter(|(_, w)| !w.is_zero())
                .map(|(e, w)| json!({ "edge": edge(e), "dual": exact(w) }))
                .collect();
            json!({ "dual_objective": exact(&c.objective), "pivots": c.pivots, "row_duals": rows, "bound_duals": bounds })
        }
        Certificate::Star(s) => json!({
            "case": s.case.number(),
            "z": exact(&s.z),
            "presolve_cost": exact(&s.presolve_cost),
            "interval": [exact(&s.interval.0), exact(&s.interval.1)],
        }),
        Certificate::Chebyshev(t) => json!({
            "ladder_len": t.ladder_len,
            "i0": t.i0,
            "bracket": [exact(&t.bracket.0), exact(&t.bracket.1)],
            "budget": exact(&t.budget),
            "tight_row": t.tight.map(|(leaf, side)| side_ref(file, leaf, side)),
        }),
        Certificate::Bottleneck(t) => json!({
            "threshold": exact(&t.threshold),
            "ladder_len": t.ladder.len(),
            "probes": t.probes.iter().map(|(c, ok)| json!({ "threshold": exact(c), "feasible": ok })).collect::<Vec<_>>(),
        }),
        Certificate::HammingSum(t) => json!({
            "selection": t.selection.iter().map(|&e| edge(e)).collect::<Vec<_>>(),
            "nodes": t.nodes,
            "initial_incumbent": exact(&t.initial_incumbent),
        }),
    };
    doc["kind"] = Value::from(cert.kind());
    doc
}

pub fn optimal_doc(file: &InstanceFile, norm: &NormalizedInstance, report: &SolveReport) -> ReportDoc {
    let lengths = norm.new_lengths(&report.plan);
    let plan = (0..norm.edge_count())
        .map(|e| PlanEntry {
            edge: file.edge_ids[e].to_json(),
            sign: match norm.signs[e] {
                EdgeSign::Increase => "+".into(),
                EdgeSign::Decrease => "-".into(),
            },
            amount: to_exact_string(&report.plan.amounts[e]),
            new_length: to_exact_string(&lengths[e]),
        })
        .collect();
    let (a, b) = report.pair;
    ReportDoc {
        status: OPTIMAL.into(),
        objective: report.objective.name().into(),
        pair: Some([file.vertex_ids[a].to_json(), file.vertex_ids[b].to_json()]),
        cost: Some(ExactValue::new(&report.cost)),
        plan,
        violations: Vec::new(),
        certificate: Some(certificate_json(file, norm, &report.certificate)),
    }
}

pub fn infeasible_doc(
    file: &InstanceFile,
    objective: invmaxian::Objective,
    pair: Option<(usize, usize)>,
    violations: &[(usize, Side)],
) -> ReportDoc {
    ReportDoc {
        status: INFEASIBLE.into(),
        objective: objective.name().into(),
        pair: pair.map(|(a, b)| [file.vertex_ids[a].to_json(), file.vertex_ids[b].to_json()]),
        cost: None,
        plan: Vec::new(),
        violations: violations
            .iter()
            .map(|&(leaf, side)| Violation { leaf: file.vertex_ids[leaf].to_json(), side: side_name(side) })
            .collect(),
        certificate: None,
    }
}

fn id_text(value: &Value) -> String {
    match value {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Human-readable form: rationals as `p/q` with a decimal approximation.
pub fn render_text(doc: &ReportDoc) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "status: {}", doc.status);
    let _ = writeln!(out, "objective: {}", doc.objective);
    if let Some([a, b]) = &doc.pair {
        let _ = writeln!(out, "pair: {} {}", id_text(a), id_text(b));
    }
    if let Some(cost) = &doc.cost {
        let _ = writeln!(out, "cost: {} (~ {})", cost.exact, cost.approx);
    }
    let moved: Vec<&PlanEntry> = doc.plan.iter().filter(|p| p.amount != "0").collect();
    if !moved.is_empty() {
        let _ = writeln!(out, "modified edges:");
        for p in moved {
            let approx = invmaxian::rational::parse_rational(&p.amount).map(|x| to_f64(&x)).unwrap_or(f64::NAN);
            let _ = writeln!(out, "  {} {}{} (~ {}) -> length {}", id_text(&p.edge), p.sign, p.amount, approx, p.new_length);
        }
    }
    if !doc.violations.is_empty() {
        let _ = writeln!(out, "violating leaves:");
        for v in &doc.violations {
            let _ = writeln!(out, "  {} ({})", id_text(&v.leaf), v.side);
        }
    }
    if let Some(cert) = &doc.certificate {
        let kind = cert.get("kind").and_then(Value::as_str).unwrap_or("?");
        let _ = writeln!(out, "certificate: {kind}");
    }
    out
}
