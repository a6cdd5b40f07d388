//! First-principles centroids used to check the closed forms.
//!
//! Nothing here calls the closed-form centroid functions: figures are built
//! from raw vertices, measured with the shoelace formula, or integrated
//! numerically with the midpoint rule.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fuzzy_core::{CentroidPoint, LevelDistribution, ModelKind};

const DEGENERATE_AREA: f64 = 1e-15;

/// Default number of midpoint-rule cells.
pub const DEFAULT_CELLS: usize = 100_000;

/// Simple polygon with counter-clockwise vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<(f64, f64)>,
}

impl Polygon {
    /// Accepts either orientation and stores counter-clockwise. Repeated
    /// consecutive vertices are dropped.
    pub fn new(vertices: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v: Vec<(f64, f64)> = Vec::new();
        for p in vertices {
            if !(p.0.is_finite() && p.1.is_finite()) {
                return Err(Error::InvalidGeometry(format!("non-finite vertex {p:?}")));
            }
            if v.last() != Some(&p) {
                v.push(p);
            }
        }
        while v.len() > 1 && v.first() == v.last() {
            v.pop();
        }
        if v.len() < 3 {
            return Err(Error::DegenerateFigure(format!(
                "{} distinct vertices",
                v.len()
            )));
        }
        let area = signed_area(&v);
        if area.abs() <= DEGENERATE_AREA {
            return Err(Error::DegenerateFigure(format!("area {area}")));
        }
        if area < 0.0 {
            v.reverse();
        }
        if let Some((i, j)) = first_crossing(&v) {
            return Err(Error::InvalidGeometry(format!("edges {i} and {j} cross")));
        }
        Ok(Self { vertices: v })
    }

    /// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
    pub fn rectangle(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        Self::new([(x0, y0), (x1, y0), (x1, y1), (x0, y1)])
    }

    pub fn vertices(&self) -> &[(f64, f64)] {
        &self.vertices
    }

    fn edges(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }
}

fn signed_area(v: &[(f64, f64)]) -> f64 {
    let n = v.len();
    (0..n)
        .map(|i| {
            let (x0, y0) = v[i];
            let (x1, y1) = v[(i + 1) % n];
            x0 * y1 - x1 * y0
        })
        .sum::<f64>()
        / 2.0
}

fn orient(a: (f64, f64), b: (f64, f64), c: (f64, f64)) -> f64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// First pair of non-adjacent edges that properly cross.
fn first_crossing(v: &[(f64, f64)]) -> Option<(usize, usize)> {
    let n = v.len();
    for i in 0..n {
        let (a, b) = (v[i], v[(i + 1) % n]);
        for j in i + 2..n {
            if i == 0 && j == n - 1 {
                continue;
            }
            let (c, d) = (v[j], v[(j + 1) % n]);
            let d1 = orient(a, b, c);
            let d2 = orient(a, b, d);
            let d3 = orient(c, d, a);
            let d4 = orient(c, d, b);
            if d1 * d2 < 0.0 && d3 * d4 < 0.0 {
                return Some((i, j));
            }
        }
    }
    None
}

/// Area and centroid by the shoelace vertex formulas.
pub fn polygon_area_centroid(p: &Polygon) -> Result<(f64, CentroidPoint)> {
    let (mut area2, mut cx, mut cy) = (0.0, 0.0, 0.0);
    for ((x0, y0), (x1, y1)) in p.edges() {
        let cross = x0 * y1 - x1 * y0;
        area2 += cross;
        cx += (x0 + x1) * cross;
        cy += (y0 + y1) * cross;
    }
    let area = area2 / 2.0;
    if area <= DEGENERATE_AREA {
        return Err(Error::DegenerateFigure(format!("area {area}")));
    }
    Ok((
        area,
        CentroidPoint::new(cx / (3.0 * area2), cy / (3.0 * area2)),
    ))
}

/// Polygons with densities whose masses add, overlaps included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MassedFigure {
    parts: Vec<(Polygon, f64)>,
}

impl MassedFigure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, polygon: Polygon, density: f64) -> Result<()> {
        if !(density > 0.0 && density.is_finite()) {
            return Err(Error::InvalidGeometry(format!(
                "density must be positive, got {density}"
            )));
        }
        self.parts.push((polygon, density));
        Ok(())
    }

    pub fn parts(&self) -> &[(Polygon, f64)] {
        &self.parts
    }

    pub fn mass(&self) -> Result<f64> {
        self.parts
            .iter()
            .map(|(p, rho)| polygon_area_centroid(p).map(|(a, _)| rho * a))
            .sum()
    }

    /// Center of mass of the parts taken as independent bodies.
    pub fn centroid(&self) -> Result<CentroidPoint> {
        let (mut m, mut mx, mut my) = (0.0, 0.0, 0.0);
        for (p, rho) in &self.parts {
            let (area, c) = polygon_area_centroid(p)?;
            let mass = rho * area;
            m += mass;
            mx += mass * c.x;
            my += mass * c.y;
        }
        if !(m > 0.0) {
            return Err(Error::DegenerateFigure("figure has no parts".into()));
        }
        Ok(CentroidPoint::new(mx / m, my / m))
    }
}

/// Neumaier-compensated running sum.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn total(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Midpoint-rule centroid of the region between the x-axis and `height`
/// over `[x_lo, x_hi]`.
///
/// Each vertical strip of width `dx` and height `h` at `x` contributes area
/// `h dx`, x-moment `x h dx` and y-moment `h^2/2 dx`.
pub fn integrate_centroid<F: Fn(f64) -> f64>(
    height: F,
    x_lo: f64,
    x_hi: f64,
    cells: usize,
) -> Result<CentroidPoint> {
    integrate_centroid_piecewise(height, &[x_lo, x_hi], cells)
}

/// Like [`integrate_centroid`], with cell edges forced onto `breakpoints`.
///
/// The `cells` budget is split across segments in proportion to their width
/// (at least one cell each). Jumps in `height` should sit on breakpoints;
/// the midpoint rule is only first-order across a jump inside a cell.
pub fn integrate_centroid_piecewise<F: Fn(f64) -> f64>(
    height: F,
    breakpoints: &[f64],
    cells: usize,
) -> Result<CentroidPoint> {
    let ascending = breakpoints.windows(2).all(|w| w[1] > w[0]);
    if cells == 0 || breakpoints.len() < 2 || !ascending {
        return Err(Error::InvalidGeometry(format!(
            "need cells >= 1 and ascending breakpoints (cells={cells}, {breakpoints:?})"
        )));
    }
    let span = breakpoints[breakpoints.len() - 1] - breakpoints[0];
    let (mut area, mut mx, mut my) = (
        CompensatedSum::default(),
        CompensatedSum::default(),
        CompensatedSum::default(),
    );
    for seg in breakpoints.windows(2) {
        let (lo, hi) = (seg[0], seg[1]);
        let n = ((cells as f64 * (hi - lo) / span).round() as usize).max(1);
        let dx = (hi - lo) / n as f64;
        for k in 0..n {
            let x = lo + (k as f64 + 0.5) * dx;
            let h = height(x);
            if !(h >= 0.0) {
                return Err(Error::InvalidGeometry(format!(
                    "negative height {h} at x={x}"
                )));
            }
            area.add(h * dx);
            mx.add(x * h * dx);
            my.add(h * h / 2.0 * dx);
        }
    }
    let area = area.total();
    if !(area > DEGENERATE_AREA) {
        return Err(Error::DegenerateFigure("zero area under profile".into()));
    }
    Ok(CentroidPoint::new(mx.total() / area, my.total() / area))
}

/// Height of the bar chart of `d` at `x`.
pub fn bar_height(d: &LevelDistribution, x: f64) -> f64 {
    if x < 0.0 {
        return 0.0;
    }
    d.weights().get(x.floor() as usize).copied().unwrap_or(0.0)
}

/// Quadrature centroid of the bar chart of `d`, one breakpoint per level edge.
pub fn integrate_bar_chart(d: &LevelDistribution, cells: usize) -> Result<CentroidPoint> {
    let edges: Vec<f64> = (0..=d.len()).map(|i| i as f64).collect();
    integrate_centroid_piecewise(|x| bar_height(d, x), &edges, cells)
}

/// Bar chart of `d`: height `y_i` over `[i-1, i]`.
///
/// Runs of consecutive nonzero bars become one staircase polygon; zero-height
/// levels split the figure into separate parts.
pub fn rectangular_figure(d: &LevelDistribution) -> Result<MassedFigure> {
    let heights = d.weights();
    let mut figure = MassedFigure::new();
    let mut i = 0;
    while i < heights.len() {
        if heights[i] == 0.0 {
            i += 1;
            continue;
        }
        let start = i;
        while i < heights.len() && heights[i] > 0.0 {
            i += 1;
        }
        figure.push(staircase(start, &heights[start..i])?, 1.0)?;
    }
    Ok(figure)
}

/// Outline of adjacent positive bars starting at abscissa `start`.
fn staircase(start: usize, heights: &[f64]) -> Result<Polygon> {
    let x0 = start as f64;
    let x1 = (start + heights.len()) as f64;
    let mut v = vec![(x0, 0.0), (x1, 0.0)];
    for (k, &h) in heights.iter().enumerate().rev() {
        let right = x0 + (k + 1) as f64;
        let left = x0 + k as f64;
        v.push((right, h));
        v.push((left, h));
    }
    Polygon::new(dedupe_collinear(v))
}

fn dedupe_collinear(v: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for p in v {
        if out.last() == Some(&p) {
            continue;
        }
        if out.len() >= 2 {
            let a = out[out.len() - 2];
            let b = out[out.len() - 1];
            if orient(a, b, p) == 0.0 {
                out.pop();
            }
        }
        out.push(p);
    }
    out
}

/// Corners of the `index`-th trapezoid (1-based) for lower base `base`.
///
/// Lower base `[0.7 b (i-1), 0.7 b (i-1) + b]`, upper base inset by `0.3 b` on
/// each side.
pub fn trapezoid_polygon(index: usize, base: f64, height: f64) -> Result<Polygon> {
    let x_lo = 0.7 * base * (index as f64 - 1.0);
    let x_hi = x_lo + base;
    Polygon::new([
        (x_lo, 0.0),
        (x_hi, 0.0),
        (x_hi - 0.3 * base, height),
        (x_lo + 0.3 * base, height),
    ])
}

/// One unit-density trapezoid per nonzero level of `d`.
pub fn trapezoidal_figure(d: &LevelDistribution, base: f64) -> Result<MassedFigure> {
    if !(base > 0.0) {
        return Err(Error::InvalidGeometry(format!(
            "base must be positive, got {base}"
        )));
    }
    let mut figure = MassedFigure::new();
    for (k, &y) in d.weights().iter().enumerate() {
        if y > 0.0 {
            figure.push(trapezoid_polygon(k + 1, base, y)?, 1.0)?;
        }
    }
    Ok(figure)
}

/// The model's figure for `d`, built from vertices.
pub fn figure(d: &LevelDistribution, model: ModelKind) -> Result<MassedFigure> {
    match model {
        ModelKind::Rectangular => rectangular_figure(d),
        ModelKind::TrapezoidalBase10 => trapezoidal_figure(d, 10.0),
        ModelKind::TrapezoidalUnit => trapezoidal_figure(d, 1.0),
    }
}

/// Random distribution over 1..=`max_levels` levels with roughly a fifth of
/// levels empty.
pub fn random_distribution<R: Rng>(rng: &mut R, max_levels: usize) -> LevelDistribution {
    let n = rng.gen_range(1..=max_levels.max(1));
    loop {
        let raw: Vec<f64> = (0..n)
            .map(|_| {
                if rng.gen_bool(0.2) {
                    0.0
                } else {
                    rng.gen_range(0.0..100.0)
                }
            })
            .collect();
        if let Ok(d) = LevelDistribution::from_raw(&raw) {
            return d;
        }
    }
}

/// Worst closed-form versus oracle disagreement found by [`sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct Deviation {
    pub sample: usize,
    pub model: ModelKind,
    pub weights: Vec<f64>,
    pub closed_form: CentroidPoint,
    pub oracle: CentroidPoint,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub samples: usize,
    pub seed: u64,
    /// Largest deviation for each model, in [`ModelKind::ALL`] order.
    pub per_model: Vec<(ModelKind, f64)>,
    pub worst: Option<Deviation>,
}

impl SweepReport {
    pub fn max_deviation(&self) -> f64 {
        self.worst.as_ref().map_or(0.0, |w| w.deviation)
    }
}

/// Compares every closed form against its vertex-built figure over `samples`
/// seeded random distributions with up to 10 levels.
pub fn sweep(samples: usize, seed: u64) -> Result<SweepReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_model: Vec<(ModelKind, f64)> = ModelKind::ALL.iter().map(|&m| (m, 0.0)).collect();
    let mut worst: Option<Deviation> = None;
    for sample in 0..samples {
        let d = random_distribution(&mut rng, 10);
        for (model, max) in per_model.iter_mut() {
            let closed_form = model.centroid(&d);
            let oracle = figure(&d, *model)?.centroid()?;
            let deviation = closed_form.max_deviation(&oracle);
            *max = max.max(deviation);
            if worst.as_ref().is_none_or(|w| deviation > w.deviation) {
                worst = Some(Deviation {
                    sample,
                    model: *model,
                    weights: d.weights().to_vec(),
                    closed_form,
                    oracle,
                    deviation,
                });
            }
        }
    }
    Ok(SweepReport {
        samples,
        seed,
        per_model,
        worst,
    })
}
