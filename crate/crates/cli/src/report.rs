//! Serializable reports. Every rational appears as an exact `"n/d"` string
//! next to a decimal rendering.

use std::fmt::Write as _;

use robustnp_core::hypotheses::{Check, HypothesisReport, Witness};
use robustnp_core::minimax::{BetaCriterion, RepresentationForm, RepresentationReport};
use robustnp_core::rational::to_f64;
use robustnp_core::{format_rational, Rational, Space, TestFunction, Threshold};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Num {
    pub exact: String,
    pub decimal: f64,
}

impl From<&Rational> for Num {
    fn from(r: &Rational) -> Self {
        Self { exact: format_rational(r), decimal: to_f64(r) }
    }
}

pub fn num(r: &Rational) -> Num {
    r.into()
}

/// `"inf"` for the infinite threshold.
pub fn threshold_text(t: &Threshold) -> String {
    match t {
        Threshold::Finite(v) => format_rational(v),
        Threshold::Infinite => "inf".into(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomValue {
    pub atom: String,
    pub value: Num,
}

pub fn test_values(space: &Space, x: &TestFunction) -> Vec<AtomValue> {
    let labels = space.atoms().iter().cloned().chain(space.has_tail().then(|| "tail".to_string()));
    labels.zip(x.to_variables()).map(|(atom, v)| AtomValue { atom, value: num(&v) }).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomClassEntry {
    pub atom: String,
    pub class: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepresentationSummary {
    pub form: String,
    pub verdict: bool,
    pub kappa: Option<String>,
    pub kappa_formula: Option<String>,
    pub classification: Vec<AtomClassEntry>,
    pub violations: Vec<String>,
    pub precondition_holds: Option<bool>,
    pub gamma_consistent: bool,
    /// Degenerate form: number of reference charges checked.
    pub references: usize,
    pub note: Option<String>,
}

impl RepresentationSummary {
    pub fn from_reports(space: &Space, reports: &[RepresentationReport]) -> Self {
        let first = &reports[0];
        let label = |a: usize| space.atoms()[a].clone();
        Self {
            form: match first.form {
                RepresentationForm::Threshold => "threshold".into(),
                RepresentationForm::Degenerate => "degenerate".into(),
            },
            verdict: reports.iter().all(|r| r.verdict),
            kappa: first.kappa.as_ref().map(threshold_text),
            kappa_formula: first.kappa_formula.as_ref().map(threshold_text),
            classification: first
                .classification
                .iter()
                .enumerate()
                .map(|(a, c)| AtomClassEntry { atom: label(a), class: c.as_str().into() })
                .collect(),
            violations: reports.iter().flat_map(|r| r.violations.iter().map(|&a| label(a))).collect(),
            precondition_holds: first.precondition_holds,
            gamma_consistent: reports.iter().all(|r| r.gamma_consistent),
            references: if first.form == RepresentationForm::Degenerate { reports.len() } else { 0 },
            note: None,
        }
    }

    pub fn skipped(note: impl Into<String>) -> Self {
        Self {
            form: "none".into(),
            verdict: false,
            kappa: None,
            kappa_formula: None,
            classification: Vec::new(),
            violations: Vec::new(),
            precondition_holds: None,
            gamma_consistent: false,
            references: 0,
            note: Some(note.into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSummary {
    pub beta: Num,
    pub predicts_slack: bool,
    pub criterion_holds: bool,
    pub matches_full_case: bool,
}

impl From<&BetaCriterion> for BetaSummary {
    fn from(b: &BetaCriterion) -> Self {
        Self {
            beta: num(&b.beta),
            predicts_slack: b.predicts_slack,
            criterion_holds: b.holds,
            matches_full_case: b.matches_full_case,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub holds: bool,
    pub witness: Option<String>,
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::TailSequence { null_limit, alternative_limit } => format!(
            "canonical tail sequence: null limit {}, alternative limit {}",
            format_rational(null_limit),
            format_rational(alternative_limit)
        ),
        Witness::Shaving { k, level, shaved } => {
            format!("shaving by 1/{k}: {} -> {}", format_rational(level), format_rational(shaved))
        }
        Witness::SupportGap { member } => format!("null member {member} has no mass where the test is positive"),
        Witness::TailMember { member, tail_mass } => {
            format!("member {member} has tail mass {}", format_rational(tail_mass))
        }
    }
}

impl From<&Check> for CheckEntry {
    fn from(c: &Check) -> Self {
        Self { holds: c.holds, witness: c.witness.as_ref().map(witness_text) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesesSummary {
    pub h1: CheckEntry,
    pub h2: CheckEntry,
    pub h3: CheckEntry,
    pub continuity_p: CheckEntry,
    pub continuity_q: CheckEntry,
}

impl From<&HypothesisReport> for HypothesesSummary {
    fn from(r: &HypothesisReport) -> Self {
        let h2 = r.h2_at.iter().map(|(_, c)| c).find(|c| !c.holds).or(r.h2_at.first().map(|(_, c)| c));
        Self {
            h1: (&r.h1).into(),
            h2: h2.map(CheckEntry::from).unwrap_or(CheckEntry { holds: true, witness: None }),
            h3: (&r.h3).into(),
            continuity_p: (&r.continuity_p).into(),
            continuity_q: (&r.continuity_q).into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateSummary {
    pub valid: bool,
    pub primal_objective: Num,
    pub dual_objective: Num,
    pub residuals_checked: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub value: Num,
    pub agrees: bool,
    pub optimal_vertices: usize,
    pub enumeration_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub command: String,
    pub description: Option<String>,
    pub alpha: Num,
    pub value: Num,
    pub test: Vec<AtomValue>,
    pub attained_level: Num,
    pub case: String,
    pub countable_case: String,
    pub min_level: Num,
    pub q_weights: Vec<Num>,
    pub p_weights: Vec<Num>,
    pub lambda: Num,
    pub gamma_countable: Num,
    pub beta: Option<BetaSummary>,
    pub representation: RepresentationSummary,
    pub hypotheses: HypothesesSummary,
    pub certificate: CertificateSummary,
    pub oracle: Option<OracleSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NpReport {
    pub command: String,
    pub description: Option<String>,
    pub alpha: Num,
    pub kappa: String,
    pub b: Num,
    pub test: Vec<AtomValue>,
    pub attained_level: Num,
    pub power: Num,
    pub level_slack: bool,
    pub oracle: Option<OracleSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub size: usize,
    pub value: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub command: String,
    pub generator: String,
    pub alpha: Num,
    pub rows: Vec<SweepRow>,
    pub non_monotone: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub command: String,
    pub description: Option<String>,
    pub hypotheses: HypothesesSummary,
    pub certificate: CertificateSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Solve(Box<SolveReport>),
    Np(NpReport),
    Sweep(SweepReport),
    Check(CheckReport),
}

fn row(out: &mut String, key: &str, value: impl std::fmt::Display) {
    let _ = writeln!(out, "{key:<22}{value}");
}

fn num_text(n: &Num) -> String {
    format!("{} ({:.6})", n.exact, n.decimal)
}

fn check_text(c: &CheckEntry) -> String {
    match &c.witness {
        Some(w) if !c.holds => format!("false [{w}]"),
        _ => c.holds.to_string(),
    }
}

fn hypotheses_table(out: &mut String, h: &HypothesesSummary) {
    row(out, "H1", check_text(&h.h1));
    row(out, "H2 at test", check_text(&h.h2));
    row(out, "H3", check_text(&h.h3));
    row(out, "continuity (null)", check_text(&h.continuity_p));
    row(out, "continuity (alt)", check_text(&h.continuity_q));
}

fn certificate_table(out: &mut String, c: &CertificateSummary) {
    let status = match &c.error {
        Some(e) => format!("INVALID: {e}"),
        None => format!("valid, {} residuals exactly zero", c.residuals_checked),
    };
    row(out, "certificate", status);
    row(out, "dual objective", num_text(&c.dual_objective));
}

fn oracle_table(out: &mut String, o: &Option<OracleSummary>) {
    if let Some(o) = o {
        row(
            out,
            "oracle",
            format!(
                "{} ({}; {} optimal vertices of {})",
                num_text(&o.value),
                if o.agrees { "agrees" } else { "MISMATCH" },
                o.optimal_vertices,
                o.enumeration_size
            ),
        );
    }
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports always serialize");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Solve(r) => {
                if let Some(d) = &r.description {
                    let _ = writeln!(out, "{d}");
                }
                row(&mut out, "alpha", num_text(&r.alpha));
                row(&mut out, "value", num_text(&r.value));
                row(&mut out, "attained level", num_text(&r.attained_level));
                row(&mut out, "case", &r.case);
                row(&mut out, "minimal optimal level", num_text(&r.min_level));
                row(&mut out, "lambda", num_text(&r.lambda));
                if let Some(b) = &r.beta {
                    row(&mut out, "beta", format!("{} (criterion {})", num_text(&b.beta), b.criterion_holds));
                }
                let rep = &r.representation;
                let verdict = match &rep.note {
                    Some(n) => format!("skipped: {n}"),
                    None => format!(
                        "{} form, verdict {}, kappa {}",
                        rep.form,
                        rep.verdict,
                        rep.kappa.as_deref().unwrap_or("-")
                    ),
                };
                row(&mut out, "representation", verdict);
                hypotheses_table(&mut out, &r.hypotheses);
                certificate_table(&mut out, &r.certificate);
                oracle_table(&mut out, &r.oracle);
                let _ = writeln!(out, "\n{:<12}{:<14}{:<12}class", "atom", "test", "decimal");
                for (i, v) in r.test.iter().enumerate() {
                    let class = rep.classification.get(i).map(|c| c.class.as_str()).unwrap_or("-");
                    let _ = writeln!(out, "{:<12}{:<14}{:<12.6}{}", v.atom, v.value.exact, v.value.decimal, class);
                }
            }
            Report::Np(r) => {
                row(&mut out, "alpha", num_text(&r.alpha));
                row(&mut out, "kappa", &r.kappa);
                row(&mut out, "b", num_text(&r.b));
                row(&mut out, "power", num_text(&r.power));
                row(&mut out, "attained level", num_text(&r.attained_level));
                row(&mut out, "level slack", r.level_slack);
                oracle_table(&mut out, &r.oracle);
                let _ = writeln!(out, "\n{:<12}{:<14}decimal", "atom", "test");
                for v in &r.test {
                    let _ = writeln!(out, "{:<12}{:<14}{:.6}", v.atom, v.value.exact, v.value.decimal);
                }
            }
            Report::Sweep(r) => {
                let _ = writeln!(out, "generator {} at alpha {}", r.generator, r.alpha.exact);
                let _ = writeln!(out, "{:<8}{:<24}decimal", "N", "value");
                for row in &r.rows {
                    let _ = writeln!(out, "{:<8}{:<24}{:.12}", row.size, row.value.exact, row.value.decimal);
                }
                if !r.non_monotone.is_empty() {
                    let _ = writeln!(out, "not increasing at sizes {:?}", r.non_monotone);
                }
            }
            Report::Check(r) => {
                if let Some(d) = &r.description {
                    let _ = writeln!(out, "{d}");
                }
                hypotheses_table(&mut out, &r.hypotheses);
                certificate_table(&mut out, &r.certificate);
            }
        }
        out
    }
}
