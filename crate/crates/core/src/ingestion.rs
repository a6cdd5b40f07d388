//! Score rosters, grade bands and score fuzzification.
//!
//! A score near the boundary between two bands belongs to both levels. Within
//! `crossover` points of a boundary `t` the upper level's degree rises
//! linearly from 0 at `t - w` to 1 at `t + w`, and the lower level keeps the
//! complement, so the two degrees always sum to 1.

use std::collections::HashSet;
use std::io::Read;

use crate::error::{Error, Result};
use crate::fuzzy_core::LevelDistribution;

pub const DEFAULT_CROSSOVER: f64 = 1.5;

#[derive(Debug, Clone, PartialEq)]
pub struct RosterRecord {
    pub student: String,
    pub score: f64,
    /// 1-based line in the source, header included.
    pub line: usize,
}

/// Reads a `student,score` CSV roster.
pub fn parse_roster<R: Read>(input: R) -> Result<Vec<RosterRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let headers = reader.headers().map_err(|e| csv_error(e, 1))?;
    if headers.len() != 2 || &headers[0] != "student" || &headers[1] != "score" {
        return Err(Error::Parse {
            line: 1,
            message: format!(
                "expected header `student,score`, got `{}`",
                headers.iter().collect::<Vec<_>>().join(",")
            ),
        });
    }
    let mut seen = HashSet::new();
    let mut records = Vec::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(e, 0))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let student = row[0].to_string();
        if student.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty student id".into(),
            });
        }
        let score: f64 = row[1].parse().map_err(|_| Error::Parse {
            line,
            message: format!("score {:?} is not a number", &row[1]),
        })?;
        if !(0.0..=100.0).contains(&score) {
            return Err(Error::Range { line, score });
        }
        if !seen.insert(student.clone()) {
            return Err(Error::DuplicateStudent { line, student });
        }
        records.push(RosterRecord {
            student,
            score,
            line,
        });
    }
    Ok(records)
}

fn csv_error(e: csv::Error, fallback_line: usize) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line() as usize);
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => {
            format!("expected {expected_len} fields, found {len}")
        }
        _ => e.to_string(),
    };
    Error::Parse { line, message }
}

/// A whole level and the lowest score it covers.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
}

/// A `+`/`-` refinement inside one band, used for display only.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBand {
    pub label: String,
    pub lo: f64,
    pub hi: f64,
    /// Index of the enclosing band.
    pub parent: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradeBandScheme {
    bands: Vec<Band>,
    sub_bands: Vec<SubBand>,
    crossover: f64,
}

impl Default for GradeBandScheme {
    /// `C = 0-69`, `B = 70-82`, `A = 83-100`, crossover 1.5.
    fn default() -> Self {
        Self::new(
            vec![
                band("C", 0.0, 69.0),
                band("B", 70.0, 82.0),
                band("A", 83.0, 100.0),
            ],
            DEFAULT_CROSSOVER,
        )
        .expect("default scheme is valid")
    }
}

fn band(label: &str, lo: f64, hi: f64) -> Band {
    Band {
        label: label.to_string(),
        lo,
        hi,
    }
}

impl GradeBandScheme {
    /// Bands must be ascending and cover `[0, 100]`; consecutive bands either
    /// touch (`0-70`, `70-85`) or follow integer notation (`0-69`, `70-82`).
    /// The boundary between two bands is the upper band's `lo`.
    pub fn new(bands: Vec<Band>, crossover: f64) -> Result<Self> {
        let invalid = |m: String| Err(Error::InvalidScheme(m));
        if bands.is_empty() {
            return invalid("no bands".into());
        }
        for (i, b) in bands.iter().enumerate() {
            if !(b.lo <= b.hi) || !b.lo.is_finite() || !b.hi.is_finite() {
                return invalid(format!(
                    "band {} has empty interval {}-{}",
                    b.label, b.lo, b.hi
                ));
            }
            if bands[..i].iter().any(|o| o.label == b.label) {
                return invalid(format!("duplicate level {}", b.label));
            }
        }
        if bands[0].lo != 0.0 {
            return invalid(format!("first band starts at {}, not 0", bands[0].lo));
        }
        if bands[bands.len() - 1].hi != 100.0 {
            return invalid(format!(
                "last band ends at {}, not 100",
                bands[bands.len() - 1].hi
            ));
        }
        for pair in bands.windows(2) {
            let (lower, upper) = (&pair[0], &pair[1]);
            let gap = upper.lo - lower.hi;
            let integer_step = gap == 1.0 && lower.hi.fract() == 0.0 && upper.lo.fract() == 0.0;
            if gap != 0.0 && !integer_step {
                return invalid(format!(
                    "bands {} ({}-{}) and {} ({}-{}) neither touch nor follow each other",
                    lower.label, lower.lo, lower.hi, upper.label, upper.lo, upper.hi
                ));
            }
        }
        if !(crossover >= 0.0 && crossover.is_finite()) {
            return invalid(format!("crossover must be nonnegative, got {crossover}"));
        }
        let scheme = Self {
            bands,
            sub_bands: Vec::new(),
            crossover,
        };
        let narrowest = (0..scheme.bands.len())
            .map(|i| scheme.upper_edge(i) - scheme.bands[i].lo)
            .fold(f64::INFINITY, f64::min);
        if scheme.bands.len() > 1 && !(crossover < narrowest / 2.0) {
            return invalid(format!(
                "crossover {crossover} must be less than half the narrowest band ({narrowest})"
            ));
        }
        Ok(scheme)
    }

    pub fn with_sub_bands(mut self, subs: Vec<(String, f64, f64)>) -> Result<Self> {
        for (label, lo, hi) in subs {
            let parent = self
                .bands
                .iter()
                .position(|b| b.lo <= lo && hi <= b.hi && lo <= hi)
                .ok_or_else(|| {
                    Error::InvalidScheme(format!(
                        "sub-band {label} ({lo}-{hi}) lies outside every band"
                    ))
                })?;
            self.sub_bands.push(SubBand {
                label,
                lo,
                hi,
                parent,
            });
        }
        Ok(self)
    }

    /// Parses the key-value config format:
    ///
    /// ```text
    /// level C = 0-69
    /// level B = 70-82
    /// level A = 83-100
    /// sub B+ = 80-82
    /// crossover = 1.5
    /// ```
    ///
    /// `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut bands = Vec::new();
        let mut subs = Vec::new();
        let mut crossover = DEFAULT_CROSSOVER;
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parse_err = |message: String| Error::Parse {
                line: line_no,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected `key = value`, got {line:?}")))?;
            let key = key.trim();
            let value = value.trim();
            let mut words = key.split_whitespace();
            match (words.next(), words.next(), words.next()) {
                (Some("crossover"), None, None) => {
                    crossover = value
                        .parse()
                        .map_err(|_| parse_err(format!("crossover {value:?} is not a number")))?;
                }
                (Some(kind @ ("level" | "sub")), Some(label), None) => {
                    let (lo, hi) = parse_range(value)
                        .ok_or_else(|| parse_err(format!("bad range {value:?}")))?;
                    if kind == "level" {
                        bands.push(band(label, lo, hi));
                    } else {
                        subs.push((label.to_string(), lo, hi));
                    }
                }
                _ => return Err(parse_err(format!("unknown key {key:?}"))),
            }
        }
        Self::new(bands, crossover)?.with_sub_bands(subs)
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    pub fn crossover(&self) -> f64 {
        self.crossover
    }

    pub fn labels(&self) -> Vec<String> {
        self.bands.iter().map(|b| b.label.clone()).collect()
    }

    /// Interior boundaries, ascending.
    pub fn boundaries(&self) -> Vec<f64> {
        self.bands[1..].iter().map(|b| b.lo).collect()
    }

    fn upper_edge(&self, i: usize) -> f64 {
        self.bands.get(i + 1).map_or(100.0, |b| b.lo)
    }

    fn band_index(&self, score: f64) -> usize {
        self.bands.iter().rposition(|b| b.lo <= score).unwrap_or(0)
    }

    /// Crisp label for display, refined by sub-bands when one matches.
    pub fn display_grade(&self, score: f64) -> &str {
        let i = self.band_index(score);
        self.sub_bands
            .iter()
            .find(|s| s.parent == i && s.lo <= score && score <= s.hi)
            .map_or(&self.bands[i].label, |s| &s.label)
    }
}

fn parse_range(s: &str) -> Option<(f64, f64)> {
    let (lo, hi) = s.split_once('-')?;
    Some((lo.trim().parse().ok()?, hi.trim().parse().ok()?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelDegree {
    pub level: String,
    pub degree: f64,
}

/// One student's membership across levels; only nonzero degrees are stored,
/// worst level first.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyGradeAssignment {
    pub student: String,
    pub memberships: Vec<LevelDegree>,
}

impl FuzzyGradeAssignment {
    pub fn degree(&self, level: &str) -> f64 {
        self.memberships
            .iter()
            .find(|m| m.level == level)
            .map_or(0.0, |m| m.degree)
    }
}

/// Membership of `score` in the scheme's levels.
pub fn fuzzify_score(
    student: impl Into<String>,
    score: f64,
    scheme: &GradeBandScheme,
) -> FuzzyGradeAssignment {
    let w = scheme.crossover;
    let i = scheme.band_index(score);
    let split = |lower: usize, t: f64| {
        let upper_degree = (score - (t - w)) / (2.0 * w);
        vec![
            LevelDegree {
                level: scheme.bands[lower].label.clone(),
                degree: 1.0 - upper_degree,
            },
            LevelDegree {
                level: scheme.bands[lower + 1].label.clone(),
                degree: upper_degree,
            },
        ]
    };
    let memberships = match (scheme.bands.get(i + 1), i.checked_sub(1)) {
        (Some(next), _) if w > 0.0 && score > next.lo - w => split(i, next.lo),
        (_, Some(prev)) if w > 0.0 && score < scheme.bands[i].lo + w => {
            split(prev, scheme.bands[i].lo)
        }
        _ => vec![LevelDegree {
            level: scheme.bands[i].label.clone(),
            degree: 1.0,
        }],
    };
    FuzzyGradeAssignment {
        student: student.into(),
        memberships,
    }
}

/// Average membership per level across students.
pub fn aggregate(
    assignments: &[FuzzyGradeAssignment],
    labels: &[String],
) -> Result<LevelDistribution> {
    if assignments.is_empty() {
        return Err(Error::EmptyDistribution);
    }
    let mut mass = vec![0.0; labels.len()];
    for a in assignments {
        for m in &a.memberships {
            let k = labels.iter().position(|l| *l == m.level).ok_or_else(|| {
                Error::ShapeMismatch(format!(
                    "student {} has unknown level {}",
                    a.student, m.level
                ))
            })?;
            mass[k] += m.degree;
        }
    }
    // The totals already sum to the student count; normalizing divides by it.
    LevelDistribution::new(labels.iter().cloned(), &mass)
}

/// Fuzzifies every record and aggregates them over the scheme's levels.
pub fn roster_distribution(
    records: &[RosterRecord],
    scheme: &GradeBandScheme,
) -> Result<LevelDistribution> {
    let assignments: Vec<_> = records
        .iter()
        .map(|r| fuzzify_score(r.student.clone(), r.score, scheme))
        .collect();
    aggregate(&assignments, &scheme.labels())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_single_row() {
        let r = parse_roster("student,score\ns1,85\n".as_bytes()).unwrap();
        assert_eq!(
            r,
            vec![RosterRecord {
                student: "s1".into(),
                score: 85.0,
                line: 2
            }]
        );
    }

    #[test]
    fn quoted_fields() {
        let r = parse_roster("student,score\n\"Doe, J\",\"72.5\"\n".as_bytes()).unwrap();
        assert_eq!(r[0].student, "Doe, J");
        assert_eq!(r[0].score, 72.5);
    }

    #[test]
    fn roster_errors() {
        assert_eq!(
            parse_roster("student,score\ns1,101\n".as_bytes()),
            Err(Error::Range {
                line: 2,
                score: 101.0
            })
        );
        assert!(matches!(
            parse_roster("student,score\ns1,80\ns2,abc\n".as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_roster("student,score\ns1,80\ns2,1,2\n".as_bytes()),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(matches!(
            parse_roster("name,grade\ns1,80\n".as_bytes()),
            Err(Error::Parse { line: 1, .. })
        ));
        assert_eq!(
            parse_roster("student,score\ns1,80\ns1,90\n".as_bytes()),
            Err(Error::DuplicateStudent {
                line: 3,
                student: "s1".into()
            })
        );
    }

    #[test]
    fn default_scheme() {
        let s = GradeBandScheme::default();
        assert_eq!(s.labels(), ["C", "B", "A"]);
        assert_eq!(s.boundaries(), [70.0, 83.0]);
    }

    #[test]
    fn parses_scheme_config() {
        let text = "# three levels\nlevel C = 0-69\nlevel B = 70-82\nlevel A = 83-100\nsub B- = 70-74\nsub B+ = 79-82\ncrossover = 1.5\n";
        let s = GradeBandScheme::parse(text).unwrap();
        assert_eq!(
            s,
            GradeBandScheme::default()
                .with_sub_bands(vec![("B-".into(), 70.0, 74.0), ("B+".into(), 79.0, 82.0),])
                .unwrap()
        );
        assert_eq!(s.display_grade(72.0), "B-");
        assert_eq!(s.display_grade(76.0), "B");
        assert_eq!(s.display_grade(80.0), "B+");
        assert_eq!(s.display_grade(100.0), "A");
    }

    #[test]
    fn scheme_errors() {
        assert!(matches!(
            GradeBandScheme::parse("level C = 0-50\nlevel A = 60-100"),
            Err(Error::InvalidScheme(_))
        ));
        assert!(matches!(
            GradeBandScheme::parse("level C = 5-50\nlevel A = 50-100"),
            Err(Error::InvalidScheme(_))
        ));
        assert!(matches!(
            GradeBandScheme::parse("level C = 0-50\nlevel A = 50-99"),
            Err(Error::InvalidScheme(_))
        ));
        assert!(matches!(
            GradeBandScheme::parse("level C = 0-50\nlevel A = 50-100\ncrossover = 25"),
            Err(Error::InvalidScheme(_))
        ));
        assert!(matches!(
            GradeBandScheme::parse("level C = 0-100\nlevel C = 0-100"),
            Err(Error::InvalidScheme(_))
        ));
        assert!(matches!(
            GradeBandScheme::parse("level C 0-100"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            GradeBandScheme::parse("\ncolour = red"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            GradeBandScheme::parse("level C = 0-50\nlevel A = 50-100\nsub Z = 40-60"),
            Err(Error::InvalidScheme(_))
        ));
    }

    #[test]
    fn fuzzify_examples() {
        let s = GradeBandScheme::default();
        let inside = fuzzify_score("y", 76.0, &s);
        assert_eq!(
            inside.memberships,
            vec![LevelDegree {
                level: "B".into(),
                degree: 1.0
            }]
        );

        // Three quarters of the way through the C/B crossover [68.5, 71.5].
        let z = fuzzify_score("z", 70.75, &s);
        assert_eq!(z.degree("C"), 0.25);
        assert_eq!(z.degree("B"), 0.75);

        let edge = fuzzify_score("t", 83.0, &s);
        assert_eq!((edge.degree("B"), edge.degree("A")), (0.5, 0.5));

        assert_eq!(fuzzify_score("lo", 0.0, &s).degree("C"), 1.0);
        assert_eq!(fuzzify_score("hi", 100.0, &s).degree("A"), 1.0);
        // crossover edges are crisp
        assert_eq!(fuzzify_score("e", 68.5, &s).memberships.len(), 1);
        assert_eq!(fuzzify_score("e", 71.5, &s).memberships.len(), 1);
    }

    #[test]
    fn aggregate_examples() {
        let labels: Vec<String> = ["C", "B", "A"].map(String::from).to_vec();
        let s = GradeBandScheme::default();
        let d = aggregate(&[fuzzify_score("a", 95.0, &s)], &labels).unwrap();
        assert_eq!(d.weights(), [0.0, 0.0, 1.0]);

        let d = aggregate(
            &[fuzzify_score("z", 70.75, &s), fuzzify_score("y", 76.0, &s)],
            &labels,
        )
        .unwrap();
        assert_eq!(d.weights(), [0.125, 0.875, 0.0]);

        assert_eq!(aggregate(&[], &labels), Err(Error::EmptyDistribution));
        let other = GradeBandScheme::parse("level F = 0-50\nlevel P = 50-100").unwrap();
        assert!(matches!(
            aggregate(&[fuzzify_score("x", 10.0, &other)], &labels),
            Err(Error::ShapeMismatch(_))
        ));
    }
}
