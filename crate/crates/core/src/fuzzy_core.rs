//! Level distributions and the closed-form centroid models.
//!
//! Two figures are built over an ordered set of achievement levels:
//!
//! * the rectangular model places a unit-width bar of height `y_i` over
//!   `[i-1, i]`;
//! * the trapezoidal model places an isosceles trapezoid of lower base `b`,
//!   upper base `0.4 b` and height `y_i` at pitch `0.7 b`, so neighbours share
//!   `0.3 b` of their bases.
//!
//! Trapezoids are treated as independent point masses located at their own
//! centroids; the overlap is counted once per cell.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Upper base as a fraction of the lower base.
pub const UPPER_BASE_RATIO: f64 = 0.4;
/// Distance between the left edges of adjacent trapezoids, as a fraction of the lower base.
pub const PITCH_RATIO: f64 = 0.7;
/// Shared base length of adjacent trapezoids, as a fraction of the lower base.
pub const OVERLAP_RATIO: f64 = 0.3;

const NORMALIZATION_TOL: f64 = 1e-12;

/// Ordered, normalized weights over achievement levels, worst level first.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelDistribution {
    labels: Vec<String>,
    weights: Vec<f64>,
}

impl LevelDistribution {
    /// Builds a distribution from raw nonnegative masses (counts or fractions),
    /// dividing by their total.
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>, raw: &[f64]) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() != raw.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels but {} weights",
                labels.len(),
                raw.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::ShapeMismatch(format!(
                    "duplicate level label {label:?}"
                )));
            }
        }
        if let Some((index, &value)) = raw
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(Error::NegativeWeight { index, value });
        }
        let total: f64 = raw.iter().sum();
        if total <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        let weights = raw.iter().map(|v| v / total).collect::<Vec<_>>();
        debug_assert!((weights.iter().sum::<f64>() - 1.0).abs() <= NORMALIZATION_TOL);
        Ok(Self { labels, weights })
    }

    /// Distribution with generated labels `L1..Ln`, or `C, B, A` when n = 3.
    pub fn from_raw(raw: &[f64]) -> Result<Self> {
        Self::new(default_labels(raw.len()), raw)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `(1-based level, weight)` pairs.
    pub fn levels(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.weights.iter().enumerate().map(|(i, &w)| (i + 1, w))
    }

    fn sum_of_squares(&self) -> f64 {
        self.weights.iter().map(|y| y * y).sum()
    }
}

/// Level names used when none are supplied.
pub fn default_labels(n: usize) -> Vec<String> {
    if n == 3 {
        ["C", "B", "A"].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=n).map(|i| format!("L{i}")).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentroidPoint {
    pub x: f64,
    pub y: f64,
}

impl CentroidPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// Largest coordinate-wise absolute difference.
    pub fn max_deviation(&self, other: &CentroidPoint) -> f64 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }
}

impl fmt::Display for CentroidPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModelKind {
    Rectangular,
    TrapezoidalBase10,
    TrapezoidalUnit,
}

impl ModelKind {
    pub const ALL: [ModelKind; 3] = [
        ModelKind::Rectangular,
        ModelKind::TrapezoidalBase10,
        ModelKind::TrapezoidalUnit,
    ];

    /// Lower base of one trapezoid, `None` for the rectangular model.
    pub fn trapezoid_base(self) -> Option<f64> {
        match self {
            ModelKind::Rectangular => None,
            ModelKind::TrapezoidalBase10 => Some(10.0),
            ModelKind::TrapezoidalUnit => Some(1.0),
        }
    }

    /// Horizontal extent `[0, end]` of the figure for `n` levels.
    pub fn extent(self, n: usize) -> f64 {
        let n = n as f64;
        match self.trapezoid_base() {
            None => n,
            Some(b) => PITCH_RATIO * b * (n - 1.0) + b,
        }
    }

    /// Short CLI name.
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Rectangular => "rect",
            ModelKind::TrapezoidalBase10 => "trap10",
            ModelKind::TrapezoidalUnit => "trap",
        }
    }

    pub fn centroid(self, d: &LevelDistribution) -> CentroidPoint {
        match self {
            ModelKind::Rectangular => rectangular_centroid(d),
            _ => trapezoidal_centroid(d, self).expect("trapezoidal kind"),
        }
    }
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rect" | "rectangular" => Ok(ModelKind::Rectangular),
            "trap" | "trapezoidal" => Ok(ModelKind::TrapezoidalUnit),
            "trap10" => Ok(ModelKind::TrapezoidalBase10),
            other => Err(Error::WrongModel(other.to_string())),
        }
    }
}

/// Centroid of the bar figure: unit-width bars of height `y_i` over `[i-1, i]`.
pub fn rectangular_centroid(d: &LevelDistribution) -> CentroidPoint {
    let total: f64 = d.weights.iter().sum();
    let odd_moment: f64 = d.levels().map(|(i, y)| (2 * i - 1) as f64 * y).sum();
    CentroidPoint {
        x: 0.5 * odd_moment / total,
        y: 0.5 * d.sum_of_squares() / total,
    }
}

/// One trapezoid of the trapezoidal figure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapezoidCell {
    /// 1-based level index.
    pub index: usize,
    pub x_lo: f64,
    pub x_hi: f64,
    pub lower_base: f64,
    pub upper_base: f64,
    pub height: f64,
    pub mass: f64,
}

impl TrapezoidCell {
    pub fn center_x(&self) -> f64 {
        self.x_lo + self.lower_base / 2.0
    }

    pub fn centroid_y(&self) -> f64 {
        trapezoid_centroid_ordinate(self.upper_base, self.lower_base, self.height)
            .expect("cell proportions are valid")
    }

    pub fn centroid(&self) -> CentroidPoint {
        CentroidPoint::new(self.center_x(), self.centroid_y())
    }

    /// Corners counter-clockwise from the lower left.
    pub fn vertices(&self) -> [(f64, f64); 4] {
        let inset = (self.lower_base - self.upper_base) / 2.0;
        [
            (self.x_lo, 0.0),
            (self.x_hi, 0.0),
            (self.x_hi - inset, self.height),
            (self.x_lo + inset, self.height),
        ]
    }
}

/// Geometry of the `index`-th trapezoid for lower base `base` and height `height`.
pub fn trapezoid_cell(index: usize, base: f64, height: f64) -> Result<TrapezoidCell> {
    if index == 0 {
        return Err(Error::InvalidGeometry("cell index is 1-based".into()));
    }
    if !(base > 0.0 && base.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "base must be positive, got {base}"
        )));
    }
    if !(height >= 0.0 && height.is_finite()) {
        return Err(Error::InvalidGeometry(format!(
            "height must be nonnegative, got {height}"
        )));
    }
    let x_lo = PITCH_RATIO * base * (index - 1) as f64;
    Ok(TrapezoidCell {
        index,
        x_lo,
        x_hi: x_lo + base,
        lower_base: base,
        upper_base: UPPER_BASE_RATIO * base,
        height,
        mass: PITCH_RATIO * base * height,
    })
}

/// Height of a trapezoid's centroid above its lower base `b`, with upper base `a`.
pub fn trapezoid_centroid_ordinate(a: f64, b: f64, h: f64) -> Result<f64> {
    if !(b > 0.0) || !(a >= 0.0) || !(h >= 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "need b > 0, a >= 0, h >= 0 (a={a}, b={b}, h={h})"
        )));
    }
    if a > b {
        return Err(Error::InvalidGeometry(format!(
            "upper base {a} exceeds lower base {b}"
        )));
    }
    Ok(h * (b + 2.0 * a) / (3.0 * (a + b)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub mass: f64,
    pub x: f64,
    pub y: f64,
}

impl PointMass {
    pub const fn new(mass: f64, x: f64, y: f64) -> Self {
        Self { mass, x, y }
    }
}

/// Mass-weighted mean position of a system of point masses.
pub fn composite_center_of_mass(points: &[PointMass]) -> Result<CentroidPoint> {
    if let Some(p) = points.iter().find(|p| !(p.mass >= 0.0)) {
        return Err(Error::InvalidGeometry(format!("negative mass {}", p.mass)));
    }
    let total: f64 = points.iter().map(|p| p.mass).sum();
    if !(total > 0.0) {
        return Err(Error::EmptyDistribution);
    }
    let mx: f64 = points.iter().map(|p| p.mass * p.x).sum();
    let my: f64 = points.iter().map(|p| p.mass * p.y).sum();
    Ok(CentroidPoint::new(mx / total, my / total))
}

/// The trapezoid cells of `d` under a trapezoidal model, one per level.
pub fn trapezoid_cells(d: &LevelDistribution, kind: ModelKind) -> Result<Vec<TrapezoidCell>> {
    let base = kind
        .trapezoid_base()
        .ok_or_else(|| Error::WrongModel(kind.to_string()))?;
    d.levels()
        .map(|(i, y)| trapezoid_cell(i, base, y))
        .collect()
}

/// Closed-form centroid of the trapezoidal figure.
///
/// With `sum y_i = 1` the cell system reduces to
/// `X = 0.7 b sum(i y_i) - 0.2 b` and `Y = (3/7) sum(y_i^2)` for both bases.
pub fn trapezoidal_centroid(d: &LevelDistribution, kind: ModelKind) -> Result<CentroidPoint> {
    let base = kind
        .trapezoid_base()
        .ok_or_else(|| Error::WrongModel(kind.to_string()))?;
    let level_moment: f64 = d.levels().map(|(i, y)| i as f64 * y).sum();
    Ok(CentroidPoint {
        x: PITCH_RATIO * base * level_moment - 0.2 * base,
        y: 3.0 / 7.0 * d.sum_of_squares(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(raw: &[f64]) -> LevelDistribution {
        LevelDistribution::from_raw(raw).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12
    }

    #[test]
    fn normalizes_class_counts() {
        let d = dist(&[10.0, 0.0, 50.0]);
        assert_eq!(d.labels(), ["C", "B", "A"]);
        assert!(close(d.weights()[0], 1.0 / 6.0));
        assert_eq!(d.weights()[1], 0.0);
        assert!(close(d.weights()[2], 5.0 / 6.0));

        let d = dist(&[0.0, 20.0, 40.0]);
        assert!(close(d.weights()[1], 1.0 / 3.0));
        assert!(close(d.weights()[2], 2.0 / 3.0));

        let d = LevelDistribution::new(["X"], &[7.0]).unwrap();
        assert_eq!(d.weights(), [1.0]);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            LevelDistribution::from_raw(&[0.0, 0.0]),
            Err(Error::EmptyDistribution)
        );
        assert!(matches!(
            LevelDistribution::from_raw(&[1.0, -0.5]),
            Err(Error::NegativeWeight { index: 1, .. })
        ));
        assert!(matches!(
            LevelDistribution::new(["C", "B"], &[1.0]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            LevelDistribution::new(["B", "B"], &[1.0, 1.0]),
            Err(Error::ShapeMismatch(_))
        ));
        assert!(matches!(
            LevelDistribution::from_raw(&[f64::NAN]),
            Err(Error::NegativeWeight { .. })
        ));
        assert_eq!(
            LevelDistribution::from_raw(&[]),
            Err(Error::EmptyDistribution)
        );
    }

    #[test]
    fn rectangular_single_level() {
        for n in 1..6 {
            for i in 1..=n {
                let mut raw = vec![0.0; n];
                raw[i - 1] = 1.0;
                let c = rectangular_centroid(&dist(&raw));
                assert_eq!(c, CentroidPoint::new((2 * i - 1) as f64 / 2.0, 0.5));
            }
        }
    }

    #[test]
    fn rectangular_class_examples() {
        let c1 = rectangular_centroid(&dist(&[10.0, 0.0, 50.0]));
        assert!(close(c1.x, 13.0 / 6.0) && close(c1.y, 13.0 / 36.0));
        let c2 = rectangular_centroid(&dist(&[0.0, 20.0, 40.0]));
        assert!(close(c2.x, 13.0 / 6.0) && close(c2.y, 5.0 / 18.0));
    }

    #[test]
    fn cell_geometry() {
        let c = trapezoid_cell(1, 10.0, 1.0).unwrap();
        assert_eq!((c.x_lo, c.x_hi), (0.0, 10.0));
        assert_eq!(c.center_x(), 5.0);
        assert_eq!(c.upper_base, 4.0);
        assert_eq!(c.mass, 7.0);

        let c = trapezoid_cell(3, 10.0, 5.0 / 6.0).unwrap();
        assert!(close(c.center_x(), 19.0));
        assert!(close(c.mass, 35.0 / 6.0));

        let c = trapezoid_cell(2, 1.0, 1.0 / 3.0).unwrap();
        assert!(close(c.center_x(), 1.2));
        assert!(close(c.mass, 7.0 / 30.0));

        assert!(matches!(
            trapezoid_cell(1, 0.0, 1.0),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(matches!(
            trapezoid_cell(1, -1.0, 1.0),
            Err(Error::InvalidGeometry(_))
        ));
        assert!(matches!(
            trapezoid_cell(0, 1.0, 1.0),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn adjacent_cells_overlap_by_thirty_percent() {
        for base in [1.0, 10.0, 2.5] {
            let left = trapezoid_cell(4, base, 1.0).unwrap();
            let right = trapezoid_cell(5, base, 1.0).unwrap();
            assert!((left.x_hi - right.x_lo - OVERLAP_RATIO * base).abs() < 1e-12);
        }
    }

    #[test]
    fn ordinate_limits() {
        let y = 0.37;
        assert!(close(
            trapezoid_centroid_ordinate(4.0, 10.0, y).unwrap(),
            3.0 / 7.0 * y
        ));
        assert_eq!(trapezoid_centroid_ordinate(2.0, 2.0, 1.0).unwrap(), 0.5);
        assert!(close(
            trapezoid_centroid_ordinate(0.0, 1.0, 1.0).unwrap(),
            1.0 / 3.0
        ));
        assert!(matches!(
            trapezoid_centroid_ordinate(5.0, 4.0, 1.0),
            Err(Error::InvalidGeometry(_))
        ));
    }

    #[test]
    fn composite_examples() {
        let c = composite_center_of_mass(&[
            PointMass::new(1.0, 0.0, 0.0),
            PointMass::new(1.0, 2.0, 2.0),
        ])
        .unwrap();
        assert_eq!(c, CentroidPoint::new(1.0, 1.0));
        let c = composite_center_of_mass(&[PointMass::new(2.0, 3.0, 1.0)]).unwrap();
        assert_eq!(c, CentroidPoint::new(3.0, 1.0));
        assert_eq!(
            composite_center_of_mass(&[PointMass::new(0.0, 1.0, 1.0)]),
            Err(Error::EmptyDistribution)
        );
        assert_eq!(composite_center_of_mass(&[]), Err(Error::EmptyDistribution));
    }

    #[test]
    fn composite_of_class_one_cells_matches_closed_form() {
        let d = dist(&[10.0, 0.0, 50.0]);
        let points = [
            PointMass::new(7.0 / 6.0, 5.0, 3.0 / 7.0 / 6.0),
            PointMass::new(7.0 * 5.0 / 6.0, 19.0, 3.0 / 7.0 * 5.0 / 6.0),
        ];
        let composite = composite_center_of_mass(&points).unwrap();
        let closed = trapezoidal_centroid(&d, ModelKind::TrapezoidalBase10).unwrap();
        assert!(composite.max_deviation(&closed) <= 1e-12);
        assert!(close(closed.x, 50.0 / 3.0));
    }

    #[test]
    fn trapezoidal_examples() {
        let unit = ModelKind::TrapezoidalUnit;
        let c1 = trapezoidal_centroid(&dist(&[10.0, 0.0, 50.0]), unit).unwrap();
        assert!(close(c1.x, 5.0 / 3.0) && close(c1.y, 13.0 / 42.0));
        let c2 = trapezoidal_centroid(&dist(&[0.0, 20.0, 40.0]), unit).unwrap();
        assert!(close(c2.x, 5.0 / 3.0) && close(c2.y, 10.0 / 42.0));
        for i in 1..=4 {
            let mut raw = vec![0.0; 4];
            raw[i - 1] = 3.0;
            let c = trapezoidal_centroid(&dist(&raw), unit).unwrap();
            assert!(close(c.x, 0.7 * i as f64 - 0.2));
            assert!(close(c.y, 3.0 / 7.0));
        }
        assert!(matches!(
            trapezoidal_centroid(&dist(&[1.0]), ModelKind::Rectangular),
            Err(Error::WrongModel(_))
        ));
    }

    #[test]
    fn model_names_round_trip() {
        for kind in ModelKind::ALL {
            assert_eq!(kind.as_str().parse::<ModelKind>().unwrap(), kind);
        }
        assert!("hex".parse::<ModelKind>().is_err());
        assert_eq!(ModelKind::TrapezoidalUnit.extent(3), 2.4);
        assert_eq!(ModelKind::TrapezoidalBase10.extent(3), 24.0);
    }
}
