//! Outcome and scan report documents with JSON and plain-text writers.
//!
//! JSON field order follows the struct declarations and map keys are
//! ordered, so serialization is stable; parse(emit(doc)) == doc.

use serde::{Deserialize, Serialize};

use crate::general;
use crate::scan::{Counterexample, EquivalenceReport, ProbeReport, ScanReport};
use crate::solver;
use crate::types::{
    Condition, ConditionStatus, ConditionStatusKind, FailureReason, FreeParam, IndexParity, Mode,
    OutcomeKind, PatchSpec, SingularityClass, SolveOutcome,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub n: usize,
    pub edges: Vec<i64>,
}

/// Family block of an outcome document. `intervals` lists the admissible
/// integer values per parameter as inclusive endpoints, which pins down the
/// open-bound reading for consumers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyDocument {
    pub k0: FreeParam,
    pub k1: FreeParam,
    pub intervals: [[i64; 2]; 2],
    pub count: u64,
}

/// Full solve report: the echoed instance, the outcome, diagnostics and the
/// materialized solutions with their singularity classes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDocument {
    pub spec: SpecEcho,
    pub mode: Mode,
    pub ccable: bool,
    pub outcome: String,
    pub tessellation_equivalent: bool,
    pub solution_count: u64,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub reasons: Vec<FailureReason>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub solutions: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub singularities: Vec<SingularityClass>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<FamilyDocument>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub conditions: Option<Vec<ConditionStatus>>,
}

/// Builds the report for a solve, materializing at most `limit` solutions.
pub fn outcome_document(
    spec: &PatchSpec,
    mode: Mode,
    outcome: &SolveOutcome,
    limit: usize,
) -> OutcomeDocument {
    let solutions = general::enumerate_solutions(outcome, limit);
    let singularities = solutions.iter().map(|s| s.classify()).collect();
    let reasons = match &outcome.kind {
        OutcomeKind::Infeasible(reasons) => reasons.clone(),
        _ => Vec::new(),
    };
    let family = outcome.as_family().map(|f| FamilyDocument {
        k0: f.params()[0],
        k1: f.params()[1],
        intervals: [
            [f.params()[0].min_value(), f.params()[0].max_value()],
            [f.params()[1].min_value(), f.params()[1].max_value()],
        ],
        count: f.solution_count(),
    });
    OutcomeDocument {
        spec: SpecEcho {
            n: spec.n(),
            edges: spec.edges().to_vec(),
        },
        mode,
        ccable: outcome.is_ccable(),
        outcome: match &outcome.kind {
            OutcomeKind::Infeasible(_) => "infeasible".into(),
            OutcomeKind::Unique(_) => "unique".into(),
            OutcomeKind::Family(_) => "family".into(),
        },
        tessellation_equivalent: outcome.tessellation_equivalent,
        solution_count: outcome.solution_count(),
        reasons,
        solutions: solutions.iter().map(|s| s.values().to_vec()).collect(),
        singularities,
        family,
        conditions: solver::condition_report(spec).ok(),
    }
}

fn csv(values: &[i64]) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn condition_label(condition: &Condition) -> String {
    let parity = |p: &IndexParity| match p {
        IndexParity::Even => "even",
        IndexParity::Odd => "odd",
    };
    match condition {
        Condition::Parity => "parity (total)".into(),
        Condition::SubsetParity { subset } => format!("parity ({} sides)", parity(subset)),
        Condition::SignInequality { index } => format!("sign s_{index}"),
        Condition::SystemEquality { system } => format!("equality ({} system)", parity(system)),
        Condition::ParamGap {
            param,
            lower_from,
            upper_from,
        } => format!("gap k_{param} (s_{lower_from} < s_{upper_from})"),
    }
}

fn status_label(status: ConditionStatusKind) -> &'static str {
    match status {
        ConditionStatusKind::SatisfiedStrictly => "strict",
        ConditionStatusKind::SatisfiedAsEquality => "equality",
        ConditionStatusKind::Violated => "VIOLATED",
    }
}

fn singularity_label(class: &SingularityClass) -> String {
    match class {
        SingularityClass::Interior => "interior".into(),
        SingularityClass::Boundary { spoke } => format!("boundary (side split {spoke})"),
        SingularityClass::Corner { corner } => format!("corner {corner}"),
        SingularityClass::Degenerate { zeros } => {
            format!(
                "degenerate (zeros at {})",
                zeros
                    .iter()
                    .map(|z| z.to_string())
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    }
}

fn reason_label(reason: &FailureReason) -> String {
    let parity = |p: &IndexParity| match p {
        IndexParity::Even => "even",
        IndexParity::Odd => "odd",
    };
    match reason {
        FailureReason::ParityViolation { total } => {
            format!("total edge count {total} is odd")
        }
        FailureReason::SubsetParityViolation { subset, sum } => {
            format!("{}-indexed sides sum to {sum}, which is odd", parity(subset))
        }
        FailureReason::InequalityViolation { index, lhs, rhs } => {
            format!("sign condition s_{index}: needs {lhs} > {rhs}")
        }
        FailureReason::EqualitySystemViolation { system, lhs, rhs } => {
            format!("{} system needs {lhs} = {rhs}", parity(system))
        }
        FailureReason::EdgeCountBelowMinimum { index, value } => {
            format!("side {index} has only {value} edges")
        }
        FailureReason::SideCountBelowTwo { n } => format!("only {n} sides"),
    }
}

fn outcome_text(doc: &OutcomeDocument) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "patch: n={} edges={}\n",
        doc.spec.n,
        csv(&doc.spec.edges)
    ));
    out.push_str(&format!("mode: {}\n", doc.mode));
    out.push_str(&format!(
        "outcome: {} ({} solution{})\n",
        doc.outcome,
        doc.solution_count,
        if doc.solution_count == 1 { "" } else { "s" }
    ));
    if let Some(family) = &doc.family {
        out.push_str(&format!(
            "family: k0 in {} k1 in {}  (integer picks {}..={} x {}..={})\n",
            family.k0,
            family.k1,
            family.intervals[0][0],
            family.intervals[0][1],
            family.intervals[1][0],
            family.intervals[1][1],
        ));
    }
    for (s, class) in doc.solutions.iter().zip(&doc.singularities) {
        out.push_str(&format!(
            "  s = ({})  singularity: {}\n",
            csv(s),
            singularity_label(class)
        ));
    }
    for reason in &doc.reasons {
        out.push_str(&format!("  violated: {}\n", reason_label(reason)));
    }
    if let Some(conditions) = &doc.conditions {
        out.push_str("conditions:\n");
        for c in conditions {
            out.push_str(&format!(
                "  {:<28} lhs={:<6} rhs={:<6} {}\n",
                condition_label(&c.condition),
                c.lhs,
                c.rhs,
                status_label(c.status)
            ));
        }
    }
    out
}

/// Serializes an outcome document in the requested format.
pub fn write_outcome_report(doc: &OutcomeDocument, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
            text.push('\n');
            text
        }
        ReportFormat::Text => outcome_text(doc),
    }
}

/// Brute-force enumeration report for the oracle workflow.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleDocument {
    pub spec: SpecEcho,
    pub mode: Mode,
    pub solution_count: u64,
    pub solutions: Vec<Vec<i64>>,
}

/// Serializes an oracle document in the requested format.
pub fn write_oracle_report(doc: &OracleDocument, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
            text.push('\n');
            text
        }
        ReportFormat::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "oracle: n={} edges={} mode={} solutions={}\n",
                doc.spec.n,
                csv(&doc.spec.edges),
                doc.mode,
                doc.solution_count
            ));
            for s in &doc.solutions {
                out.push_str(&format!("  s = ({})\n", csv(s)));
            }
            out
        }
    }
}

/// Combined scan output: the aggregate report plus whichever verifications
/// were requested.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ScanDocument {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub scan: Option<ScanReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub oracle_equivalence: Option<EquivalenceReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub uniqueness_violations: Option<Vec<Counterexample>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub feasibility_violations: Option<Vec<Counterexample>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub equalities: Option<ProbeReport>,
}

impl ScanDocument {
    /// True when no verification found anything wrong.
    pub fn is_clean(&self) -> bool {
        self.scan
            .as_ref()
            .is_none_or(|r| r.counterexamples.is_empty())
            && self
                .oracle_equivalence
                .as_ref()
                .is_none_or(|r| r.mismatches.is_empty())
            && self
                .uniqueness_violations
                .as_ref()
                .is_none_or(|v| v.is_empty())
            && self
                .feasibility_violations
                .as_ref()
                .is_none_or(|v| v.is_empty())
    }
}

fn scan_text(doc: &ScanDocument) -> String {
    let mut out = String::new();
    if let Some(r) = &doc.scan {
        out.push_str(&format!(
            "scan: n={} e in [{}..{}] mode={}\n",
            r.range.n, r.range.e_min, r.range.e_max, r.range.mode
        ));
        out.push_str(&format!("  instances:      {}\n", r.total_instances));
        out.push_str(&format!("  parity passing: {}\n", r.parity_passing));
        out.push_str(&format!("  quadrangulable: {}\n", r.ccable));
        out.push_str("  multiplicity histogram (solutions -> instances):\n");
        for (k, v) in &r.solution_multiplicity {
            out.push_str(&format!("    {k:>6} -> {v}\n"));
        }
        out.push_str("  zero-count histogram (zeros -> solutions):\n");
        for (k, v) in &r.zero_count {
            out.push_str(&format!("    {k:>6} -> {v}\n"));
        }
        for c in &r.counterexamples {
            out.push_str(&format!(
                "  counterexample: edges={} {}\n",
                csv(&c.edges),
                c.detail
            ));
        }
    }
    if let Some(r) = &doc.oracle_equivalence {
        out.push_str(&format!(
            "oracle equivalence: checked={} skipped={} mismatches={}\n",
            r.checked,
            r.skipped.len(),
            r.mismatches.len()
        ));
        for m in &r.mismatches {
            out.push_str(&format!("  mismatch: edges={} {}\n", csv(&m.edges), m.detail));
        }
    }
    if let Some(v) = &doc.uniqueness_violations {
        out.push_str(&format!("uniqueness violations: {}\n", v.len()));
        for c in v {
            out.push_str(&format!("  edges={} {}\n", csv(&c.edges), c.detail));
        }
    }
    if let Some(v) = &doc.feasibility_violations {
        out.push_str(&format!("feasibility violations: {}\n", v.len()));
        for c in v {
            out.push_str(&format!("  edges={} {}\n", csv(&c.edges), c.detail));
        }
    }
    if let Some(p) = &doc.equalities {
        out.push_str(&format!(
            "equality probe: max zero-count {}\n",
            p.max_zero_count
        ));
        out.push_str("  zero-count histogram (zeros -> solutions):\n");
        for (k, v) in &p.zero_histogram {
            out.push_str(&format!("    {k:>6} -> {v}\n"));
        }
        for (edges, s) in &p.extremal {
            out.push_str(&format!("  extremal: edges={} s=({})\n", csv(edges), csv(s)));
        }
    }
    out
}

/// Serializes a scan document in the requested format.
pub fn write_scan_report(doc: &ScanDocument, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut text = serde_json::to_string_pretty(doc).expect("document serializes");
            text.push('\n');
            text
        }
        ReportFormat::Text => scan_text(doc),
    }
}
