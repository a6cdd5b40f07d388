//! The JSON report document and its plain-text rendering.
//!
//! Every float is rounded to 12 significant digits before serialization so
//! output is stable across platforms; rationals are added when the value
//! reconstructs with a denominator of at most 10^6.

use std::fmt::Write as _;

use fuzzmark_core::comparison::{CohortResult, Ranking};
use fuzzmark_core::rational::{format_ratio, reconstruct, MAX_DENOMINATOR};
use fuzzmark_core::voskoglou::{ProfileRelation, StateMembership};
use fuzzmark_core::{LevelDistribution, ModelKind};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

/// Rounds to 12 significant digits; `-0` becomes `0`.
pub fn sig12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x.is_finite() { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

/// Plain-text number: 12 significant digits, no trailing zeros.
pub fn fmt_num(x: f64) -> String {
    format!("{}", sig12(x))
}

pub fn rational_string(x: f64) -> Option<String> {
    reconstruct(x, MAX_DENOMINATOR).map(|r| format_ratio(&r))
}

/// `5/3 (1.66666666667)`, or just the decimal when no small rational fits.
pub fn fmt_exact(x: f64) -> String {
    match rational_string(x) {
        Some(r) if r.contains('/') => format!("{r} ({})", fmt_num(x)),
        _ => fmt_num(x),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema: u32,
    pub tool: String,
    pub version: String,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub model: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub cohorts: Vec<CohortReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ranking: Option<RankingReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub profiles: Option<ProfilesReport>,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        Self {
            schema: SCHEMA_VERSION,
            tool: "fuzzmark".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            model: None,
            cohorts: Vec::new(),
            ranking: None,
            profiles: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Number {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rational: Option<String>,
}

impl Number {
    pub fn new(x: f64) -> Self {
        Self {
            value: sig12(x),
            rational: rational_string(x),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelWeight {
    pub label: String,
    pub weight: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CentroidReport {
    pub x: Number,
    pub y: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortStats {
    pub gpa: f64,
    pub quality_of_knowledge: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortReport {
    pub label: String,
    pub levels: Vec<LevelWeight>,
    pub centroid: CentroidReport,
    pub threshold: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub stats: Option<CohortStats>,
}

impl CohortReport {
    pub fn from_result(c: &CohortResult) -> Self {
        let d = c.distribution();
        let p = c.centroid();
        Self {
            label: c.label().to_string(),
            levels: d
                .labels()
                .iter()
                .zip(d.weights())
                .map(|(label, &w)| LevelWeight {
                    label: label.clone(),
                    weight: Number::new(w),
                })
                .collect(),
            centroid: CentroidReport {
                x: Number::new(p.x),
                y: Number::new(p.y),
            },
            threshold: sig12(c.threshold()),
            stats: letter_grade_stats(d).map(|(gpa, q)| CohortStats {
                gpa: sig12(gpa),
                quality_of_knowledge: sig12(q),
            }),
        }
    }
}

/// Grade points of a letter label; `+`/`-` suffixes are ignored.
fn grade_points(label: &str) -> Option<f64> {
    let base = label.trim_end_matches(['+', '-']);
    match base {
        "A" => Some(4.0),
        "B" => Some(3.0),
        "C" => Some(2.0),
        "D" => Some(1.0),
        "E" | "F" => Some(0.0),
        _ => None,
    }
}

/// `(GPA, share of B-or-better)` when every level is a letter grade.
pub fn letter_grade_stats(d: &LevelDistribution) -> Option<(f64, f64)> {
    let points: Option<Vec<f64>> = d.labels().iter().map(|l| grade_points(l)).collect();
    let points = points?;
    let gpa = points.iter().zip(d.weights()).map(|(p, w)| p * w).sum();
    let quality = points
        .iter()
        .zip(d.weights())
        .filter(|(&p, _)| p >= 3.0)
        .map(|(_, w)| w)
        .sum();
    Some((gpa, quality))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub position: usize,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub better: String,
    pub worse: String,
    pub rule: String,
    pub at_threshold: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingReport {
    pub order: Vec<RankEntry>,
    pub verdicts: Vec<VerdictReport>,
}

impl RankingReport {
    pub fn from_ranking(r: &Ranking) -> Self {
        Self {
            order: r
                .order
                .iter()
                .map(|c| RankEntry {
                    position: c.position,
                    label: c.label.clone(),
                })
                .collect(),
            verdicts: r
                .verdicts
                .iter()
                .map(|v| VerdictReport {
                    better: v.better.clone(),
                    worse: v.worse.clone(),
                    rule: v.rule.to_string(),
                    at_threshold: v.at_threshold,
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub state: usize,
    pub counts: Vec<u64>,
    pub degrees: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub profile: String,
    pub degree: Number,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfilesReport {
    pub states: Vec<StateReport>,
    pub top: Vec<ProfileEntry>,
    pub total_degree: f64,
}

impl ProfilesReport {
    pub fn new(
        states: &[(StateMembership, [u64; 5])],
        relation: &ProfileRelation,
        top: &[(fuzzmark_core::voskoglou::Profile, f64)],
    ) -> Self {
        Self {
            states: states
                .iter()
                .map(|(m, counts)| StateReport {
                    state: m.state().index(),
                    counts: counts.to_vec(),
                    degrees: m.degrees().iter().map(|&d| sig12(d)).collect(),
                })
                .collect(),
            top: top
                .iter()
                .map(|((x, y, z), d)| ProfileEntry {
                    profile: format!("{x}{y}{z}"),
                    degree: Number::new(*d),
                })
                .collect(),
            total_degree: sig12(relation.total()),
        }
    }
}

fn model_description(model: ModelKind) -> &'static str {
    match model {
        ModelKind::Rectangular => "rectangular",
        ModelKind::TrapezoidalUnit => "trapezoidal, base 1",
        ModelKind::TrapezoidalBase10 => "trapezoidal, base 10",
    }
}

/// Human-readable summary of `analyze` output.
pub fn analyze_text(model: ModelKind, cohort: &CohortResult) -> String {
    let mut out = String::new();
    let d = cohort.distribution();
    let p = cohort.centroid();
    let (xs, ys) = if model == ModelKind::Rectangular {
        ("x", "y")
    } else {
        ("X", "Y")
    };
    writeln!(out, "model      {} ({})", model, model_description(model)).unwrap();
    let levels: Vec<String> = d
        .labels()
        .iter()
        .zip(d.weights())
        .map(|(l, &w)| format!("{l}={}", rational_string(w).unwrap_or_else(|| fmt_num(w))))
        .collect();
    writeln!(out, "levels     {}", levels.join(" ")).unwrap();
    writeln!(
        out,
        "centroid   {xs}={}, {ys}={}",
        fmt_exact(p.x),
        fmt_exact(p.y)
    )
    .unwrap();
    writeln!(out, "threshold  {}", fmt_num(cohort.threshold())).unwrap();
    out
}

/// Human-readable ranking table for `compare`.
pub fn compare_text(model: ModelKind, cohorts: &[CohortResult], ranking: &Ranking) -> String {
    let mut out = String::new();
    writeln!(out, "model {} ({})", model, model_description(model)).unwrap();
    let width = cohorts
        .iter()
        .map(|c| c.label().len())
        .max()
        .unwrap_or(6)
        .max(6);
    writeln!(
        out,
        "{:<4} {:<width$} {:>24} {:>24} {:>5} {:>8}",
        "rank", "cohort", "x", "y", "gpa", "quality"
    )
    .unwrap();
    for entry in &ranking.order {
        let c = cohorts
            .iter()
            .find(|c| c.label() == entry.label)
            .expect("ranked cohort exists");
        let p = c.centroid();
        let (gpa, quality) = match letter_grade_stats(c.distribution()) {
            Some((g, q)) => (format!("{g:.1}"), format!("{q:.3}")),
            None => ("-".into(), "-".into()),
        };
        writeln!(
            out,
            "{:<4} {:<width$} {:>24} {:>24} {:>5} {:>8}",
            entry.position,
            c.label(),
            fmt_exact(p.x),
            fmt_exact(p.y),
            gpa,
            quality
        )
        .unwrap();
    }
    writeln!(out, "verdicts").unwrap();
    for v in &ranking.verdicts {
        let relation = if v.rule.as_str() == "TIE" { "=" } else { ">" };
        let flag = if v.at_threshold { " (at midline)" } else { "" };
        writeln!(
            out,
            "  {} {relation} {}  {}{flag}",
            v.better, v.worse, v.rule
        )
        .unwrap();
    }
    out
}

pub fn profiles_text(report: &ProfilesReport) -> String {
    let mut out = String::new();
    writeln!(out, "state  a        b        c        d        e").unwrap();
    for s in &report.states {
        let cells: Vec<String> = s
            .degrees
            .iter()
            .map(|d| format!("{:<8}", fmt_num(*d)))
            .collect();
        writeln!(out, "A{}     {}", s.state, cells.join(" ").trim_end()).unwrap();
    }
    writeln!(out, "top profiles").unwrap();
    for p in &report.top {
        let shown = p
            .degree
            .rational
            .clone()
            .unwrap_or_else(|| fmt_num(p.degree.value));
        writeln!(
            out,
            "  ({}) {}",
            p.profile
                .chars()
                .map(String::from)
                .collect::<Vec<_>>()
                .join(","),
            shown
        )
        .unwrap();
    }
    writeln!(out, "sum of degrees {}", fmt_num(report.total_degree)).unwrap();
    out
}
