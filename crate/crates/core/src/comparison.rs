//! Ranking cohorts by their centroids.
//!
//! A larger abscissa always wins. When two abscissas agree, the ordinate
//! breaks the tie: above the figure's horizontal midpoint a higher centroid
//! is better, below it a lower one is.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::fuzzy_core::{CentroidPoint, LevelDistribution, ModelKind};

/// Coordinate tolerance for equality in [`compare`].
pub const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct CohortResult {
    label: String,
    distribution: LevelDistribution,
    centroid: CentroidPoint,
    model: ModelKind,
}

impl CohortResult {
    pub fn evaluate(
        label: impl Into<String>,
        distribution: LevelDistribution,
        model: ModelKind,
    ) -> Self {
        let centroid = model.centroid(&distribution);
        Self {
            label: label.into(),
            distribution,
            centroid,
            model,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn distribution(&self) -> &LevelDistribution {
        &self.distribution
    }

    pub fn centroid(&self) -> CentroidPoint {
        self.centroid
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn threshold(&self) -> f64 {
        midline_threshold(self.model, self.distribution.len())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    HigherX,
    HigherYAboveMid,
    LowerYBelowMid,
    Tie,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::HigherX => "HIGHER_X",
            Rule::HigherYAboveMid => "HIGHER_Y_ABOVE_MID",
            Rule::LowerYBelowMid => "LOWER_Y_BELOW_MID",
            Rule::Tie => "TIE",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Outcome of comparing `a` against `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    /// `Greater` when `a` performs better.
    pub outcome: Ordering,
    pub rule: Rule,
    /// Set when the shared abscissa sits on the midline, where both
    /// ordinate rules apply; the higher ordinate wins there.
    pub at_threshold: bool,
}

/// Midpoint of the figure's horizontal extent for `n` levels.
pub fn midline_threshold(model: ModelKind, n: usize) -> f64 {
    model.extent(n) / 2.0
}

fn check_comparable(a: &CohortResult, b: &CohortResult) -> Result<()> {
    if a.model != b.model {
        return Err(Error::IncomparableCohorts(format!(
            "{} uses {} but {} uses {}",
            a.label, a.model, b.label, b.model
        )));
    }
    if a.distribution.len() != b.distribution.len() {
        return Err(Error::IncomparableCohorts(format!(
            "{} has {} levels but {} has {}",
            a.label,
            a.distribution.len(),
            b.label,
            b.distribution.len()
        )));
    }
    Ok(())
}

/// Ordinate rule for a shared abscissa `x`: `(sign, rule, at_threshold)`.
fn ordinate_rule(x: f64, threshold: f64) -> (f64, Rule, bool) {
    if (x - threshold).abs() <= TOLERANCE {
        (1.0, Rule::HigherYAboveMid, true)
    } else if x > threshold {
        (1.0, Rule::HigherYAboveMid, false)
    } else {
        (-1.0, Rule::LowerYBelowMid, false)
    }
}

pub fn compare(a: &CohortResult, b: &CohortResult) -> Result<Verdict> {
    check_comparable(a, b)?;
    let (ca, cb) = (a.centroid, b.centroid);
    if (ca.x - cb.x).abs() > TOLERANCE {
        return Ok(Verdict {
            outcome: ca.x.total_cmp(&cb.x),
            rule: Rule::HigherX,
            at_threshold: false,
        });
    }
    let shared_x = (ca.x + cb.x) / 2.0;
    let (sign, rule, at_threshold) = ordinate_rule(shared_x, a.threshold());
    if (ca.y - cb.y).abs() <= TOLERANCE {
        return Ok(Verdict {
            outcome: Ordering::Equal,
            rule: Rule::Tie,
            at_threshold,
        });
    }
    Ok(Verdict {
        outcome: (sign * ca.y).total_cmp(&(sign * cb.y)),
        rule,
        at_threshold,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedCohort {
    pub label: String,
    /// 1-based; tied cohorts share a position.
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairVerdict {
    pub better: String,
    pub worse: String,
    pub rule: Rule,
    pub at_threshold: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranking {
    /// Best first.
    pub order: Vec<RankedCohort>,
    /// Every pair `(i, j)` with `i` ranked before `j`; for ties `better` is the
    /// earlier one in `order`.
    pub verdicts: Vec<PairVerdict>,
}

impl Ranking {
    pub fn labels(&self) -> Vec<&str> {
        self.order.iter().map(|c| c.label.as_str()).collect()
    }
}

/// Orders cohorts best-first.
///
/// Cohorts are first sorted by abscissa; runs whose abscissas agree within
/// [`TOLERANCE`] of the run's leader are then ordered by signed ordinate.
/// Input order is kept among exact ties.
pub fn rank(cohorts: &[CohortResult]) -> Result<Ranking> {
    let first = cohorts
        .first()
        .ok_or_else(|| Error::IncomparableCohorts("no cohorts to rank".into()))?;
    for c in &cohorts[1..] {
        check_comparable(first, c)?;
    }
    let threshold = first.threshold();

    let mut idx: Vec<usize> = (0..cohorts.len()).collect();
    idx.sort_by(|&i, &j| cohorts[j].centroid.x.total_cmp(&cohorts[i].centroid.x));

    let mut sorted = Vec::with_capacity(idx.len());
    let mut start = 0;
    while start < idx.len() {
        let lead_x = cohorts[idx[start]].centroid.x;
        let mut end = start + 1;
        while end < idx.len() && (lead_x - cohorts[idx[end]].centroid.x).abs() <= TOLERANCE {
            end += 1;
        }
        let mut run = idx[start..end].to_vec();
        let run_x = run.iter().map(|&i| cohorts[i].centroid.x).sum::<f64>() / run.len() as f64;
        let (sign, _, _) = ordinate_rule(run_x, threshold);
        run.sort_by(|&i, &j| {
            (sign * cohorts[j].centroid.y).total_cmp(&(sign * cohorts[i].centroid.y))
        });
        sorted.extend(run);
        start = end;
    }

    let mut order: Vec<RankedCohort> = Vec::with_capacity(sorted.len());
    for (k, &i) in sorted.iter().enumerate() {
        let position = match k {
            0 => 1,
            _ if compare(&cohorts[sorted[k - 1]], &cohorts[i])?.rule == Rule::Tie => {
                order[k - 1].position
            }
            _ => k + 1,
        };
        order.push(RankedCohort {
            label: cohorts[i].label.clone(),
            position,
        });
    }

    let mut verdicts = Vec::new();
    for (a, &i) in sorted.iter().enumerate() {
        for &j in &sorted[a + 1..] {
            let v = compare(&cohorts[i], &cohorts[j])?;
            let (better, worse) = if v.outcome == Ordering::Less {
                (j, i)
            } else {
                (i, j)
            };
            verdicts.push(PairVerdict {
                better: cohorts[better].label.clone(),
                worse: cohorts[worse].label.clone(),
                rule: v.rule,
                at_threshold: v.at_threshold,
            });
        }
    }
    Ok(Ranking { order, verdicts })
}
