//! Human-readable and JSON renderings of a solve.
//!
//! Indices are 1-based in every rendering. Rationals are written as `p/q`,
//! or as a bare integer when the denominator is one.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use transport_core::hungarian::SolveTrace;
use transport_core::{
    DualCertificate, Matrix, OptimalityReport, Rational, TransportInstance, TransportPlan,
};

use crate::Method;

/// Everything a `solve` run produced.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub method: Method,
    pub instance: TransportInstance,
    pub plan: TransportPlan,
    pub cost: Rational,
    pub certificate: Option<(DualCertificate, OptimalityReport)>,
    pub trace: Option<SolveTrace>,
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|i| strings(m.row(i))).collect()
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn indent(block: &str, pad: &str) -> String {
    block.lines().map(|l| format!("{pad}{l}\n")).collect()
}

fn plan_line(plan: &TransportPlan) -> String {
    plan.iter()
        .map(|(&(i, j), q)| format!("x({},{})={}", i + 1, j + 1, q))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn render_text(out: &SolveOutcome) -> String {
    let inst = &out.instance;
    let mut s = String::new();
    let _ = writeln!(s, "method: {}", out.method.name());
    let _ = writeln!(
        s,
        "instance: {} x {}, eta = {}",
        inst.rows(),
        inst.cols(),
        inst.eta()
    );
    if let Some(trace) = &out.trace {
        for (k, it) in trace.iterations.iter().enumerate() {
            let _ = writeln!(s, "iteration {}", k + 1);
            let _ = writeln!(s, "  reduced matrix:");
            s.push_str(&indent(&it.reduced.to_string(), "    "));
            let _ = writeln!(
                s,
                "  cover: {}, weight {}, max flow {}",
                it.cover, it.cover.weight, it.max_flow
            );
            match &it.delta {
                Some(d) => {
                    let _ = writeln!(s, "  delta: {d}");
                }
                None => {
                    let _ = writeln!(
                        s,
                        "  cover weight equals eta, zero entries carry an optimal plan"
                    );
                }
            }
        }
        match &trace.greedy_plan {
            Some(p) => {
                let _ = writeln!(s, "greedy zero assignment: {}", plan_line(p));
            }
            None => {
                let _ = writeln!(s, "greedy zero assignment: stuck, using the flow plan");
            }
        }
    }
    let _ = writeln!(s, "plan:");
    for (&(i, j), q) in out.plan.iter() {
        let _ = writeln!(s, "  x({},{}) = {}", i + 1, j + 1, q);
    }
    let _ = writeln!(s, "cost: {}", out.cost);
    if let Some((cert, report)) = &out.certificate {
        let _ = writeln!(s, "certificate:");
        let _ = writeln!(s, "  alpha: {}", strings(&cert.alpha).join(" "));
        let _ = writeln!(s, "  beta: {}", strings(&cert.beta).join(" "));
        match &report.violation {
            None => {
                let _ = writeln!(s, "  verdict: optimal");
            }
            Some(v) => {
                let _ = writeln!(s, "  verdict: not optimal, {v}");
                let _ = writeln!(
                    s,
                    "note: the certificate for this {} plan fails, so the plan is not proven optimal",
                    out.method.name()
                );
            }
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonReport {
    pub instance: JsonInstance,
    pub method: String,
    pub plan: Vec<JsonPlanEntry>,
    pub cost: String,
    pub certificate: Option<JsonCertificate>,
    pub trace: Vec<JsonIteration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonInstance {
    pub rows: usize,
    pub cols: usize,
    pub cost: Vec<Vec<String>>,
    pub supply: Vec<String>,
    pub demand: Vec<String>,
    pub eta: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonPlanEntry {
    pub row: usize,
    pub col: usize,
    pub quantity: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonCertificate {
    pub alpha: Vec<String>,
    pub beta: Vec<String>,
    pub optimal: bool,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonIteration {
    pub iteration: usize,
    pub reduced: Vec<Vec<String>>,
    pub cover_rows: Vec<usize>,
    pub cover_cols: Vec<usize>,
    pub cover_weight: u64,
    pub max_flow: u64,
    pub delta: Option<String>,
}

pub fn json_report(out: &SolveOutcome) -> JsonReport {
    let inst = &out.instance;
    JsonReport {
        instance: JsonInstance {
            rows: inst.rows(),
            cols: inst.cols(),
            cost: matrix_strings(inst.cost()),
            supply: strings(inst.supply()),
            demand: strings(inst.demand()),
            eta: inst.eta().to_string(),
        },
        method: out.method.name().to_string(),
        plan: out
            .plan
            .iter()
            .map(|(&(i, j), q)| JsonPlanEntry {
                row: i + 1,
                col: j + 1,
                quantity: q.to_string(),
            })
            .collect(),
        cost: out.cost.to_string(),
        certificate: out
            .certificate
            .as_ref()
            .map(|(cert, report)| JsonCertificate {
                alpha: strings(&cert.alpha),
                beta: strings(&cert.beta),
                optimal: report.is_optimal(),
                violation: report.violation.as_ref().map(ToString::to_string),
            }),
        trace: out
            .trace
            .iter()
            .flat_map(|t| &t.iterations)
            .enumerate()
            .map(|(k, it)| JsonIteration {
                iteration: k + 1,
                reduced: matrix_strings(&it.reduced),
                cover_rows: one_based(&it.cover.rows),
                cover_cols: one_based(&it.cover.cols),
                cover_weight: it.cover.weight,
                max_flow: it.max_flow,
                delta: it.delta.as_ref().map(ToString::to_string),
            })
            .collect(),
    }
}

pub fn render_json(out: &SolveOutcome) -> String {
    let mut s = serde_json::to_string_pretty(&json_report(out)).expect("report serializes");
    s.push('\n');
    s
}
