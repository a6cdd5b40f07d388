//! Acquisition-level fuzzy sets and the profile relation over three learning states.
//!
//! Each state (interpretation, generalization, categorization) is a fuzzy set
//! over the five acquisition levels `a..e`, with degree equal to the share of
//! students at that level. The profile relation assigns every triple of
//! levels the product of the three state degrees.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AcquisitionLevel {
    /// Negligible.
    A,
    /// Low.
    B,
    /// Intermediate.
    C,
    /// High.
    D,
    /// Complete.
    E,
}

impl AcquisitionLevel {
    pub const ALL: [AcquisitionLevel; 5] = [
        AcquisitionLevel::A,
        AcquisitionLevel::B,
        AcquisitionLevel::C,
        AcquisitionLevel::D,
        AcquisitionLevel::E,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> char {
        (b'a' + self as u8) as char
    }

    pub fn description(self) -> &'static str {
        match self {
            AcquisitionLevel::A => "negligible",
            AcquisitionLevel::B => "low",
            AcquisitionLevel::C => "intermediate",
            AcquisitionLevel::D => "high",
            AcquisitionLevel::E => "complete",
        }
    }
}

impl fmt::Display for AcquisitionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LearningState {
    Interpretation = 1,
    Generalization = 2,
    Categorization = 3,
}

impl LearningState {
    pub const ALL: [LearningState; 3] = [
        LearningState::Interpretation,
        LearningState::Generalization,
        LearningState::Categorization,
    ];

    pub fn from_index(i: usize) -> Result<Self> {
        match i {
            1 => Ok(LearningState::Interpretation),
            2 => Ok(LearningState::Generalization),
            3 => Ok(LearningState::Categorization),
            _ => Err(Error::ShapeMismatch(format!(
                "state index {i} not in 1..=3"
            ))),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

/// Degrees of one learning state over the five acquisition levels.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMembership {
    state: LearningState,
    degrees: [f64; 5],
}

impl StateMembership {
    pub fn state(&self) -> LearningState {
        self.state
    }

    pub fn degree(&self, level: AcquisitionLevel) -> f64 {
        self.degrees[level.index()]
    }

    pub fn degrees(&self) -> &[f64; 5] {
        &self.degrees
    }
}

/// `degree(x) = counts[x] / total` for each acquisition level.
pub fn membership_from_counts(
    state: LearningState,
    counts: [u64; 5],
    total: u64,
) -> Result<StateMembership> {
    if total == 0 {
        return Err(Error::EmptyDistribution);
    }
    let sum: u64 = counts.iter().sum();
    if sum != total {
        return Err(Error::ShapeMismatch(format!(
            "state {} counts sum to {sum}, expected {total}",
            state.index()
        )));
    }
    let n = total as f64;
    Ok(StateMembership {
        state,
        degrees: counts.map(|c| c as f64 / n),
    })
}

pub type Profile = (AcquisitionLevel, AcquisitionLevel, AcquisitionLevel);

/// Product-membership relation on the 125 level triples.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileRelation {
    degrees: [[[f64; 5]; 5]; 5],
}

impl ProfileRelation {
    pub fn degree(&self, (x, y, z): Profile) -> f64 {
        self.degrees[x.index()][y.index()][z.index()]
    }

    /// All triples in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = (Profile, f64)> + '_ {
        AcquisitionLevel::ALL.into_iter().flat_map(move |x| {
            AcquisitionLevel::ALL.into_iter().flat_map(move |y| {
                AcquisitionLevel::ALL
                    .into_iter()
                    .map(move |z| ((x, y, z), self.degree((x, y, z))))
            })
        })
    }

    pub fn total(&self) -> f64 {
        self.iter().map(|(_, d)| d).sum()
    }

    /// Sums out the other two coordinates, leaving the degrees of `state`.
    pub fn marginal(&self, state: LearningState) -> [f64; 5] {
        let mut out = [0.0; 5];
        for ((x, y, z), d) in self.iter() {
            let keep = match state {
                LearningState::Interpretation => x,
                LearningState::Generalization => y,
                LearningState::Categorization => z,
            };
            out[keep.index()] += d;
        }
        out
    }
}

pub fn profile_relation(
    a1: &StateMembership,
    a2: &StateMembership,
    a3: &StateMembership,
) -> Result<ProfileRelation> {
    for (m, expected) in [a1, a2, a3].into_iter().zip(LearningState::ALL) {
        if m.state != expected {
            return Err(Error::ShapeMismatch(format!(
                "expected state {} in position {}, got state {}",
                expected.index(),
                expected.index(),
                m.state.index()
            )));
        }
    }
    let mut degrees = [[[0.0; 5]; 5]; 5];
    for (x, plane) in degrees.iter_mut().enumerate() {
        for (y, row) in plane.iter_mut().enumerate() {
            for (z, d) in row.iter_mut().enumerate() {
                *d = a1.degrees[x] * a2.degrees[y] * a3.degrees[z];
            }
        }
    }
    Ok(ProfileRelation { degrees })
}

/// The `k` highest-degree triples; equal degrees keep lexicographic order.
pub fn top_profiles(r: &ProfileRelation, k: usize) -> Vec<(Profile, f64)> {
    let mut all: Vec<_> = r.iter().collect();
    all.sort_by(|a, b| b.1.total_cmp(&a.1));
    all.truncate(k);
    all
}
