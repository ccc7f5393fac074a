use std::collections::HashMap;
use std::f64::consts::TAU;
use std::path::Path;

use nalgebra::Vector3;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::CurveError;

pub type Point = Vector3<f64>;

/// Thresholds used by curve validation, in curve units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub eps_reg: f64,
    pub eps_emb: f64,
    /// Number of parameter samples used by the scans.
    pub samples: usize,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            eps_reg: 1e-6,
            eps_emb: 1e-3,
            samples: 2000,
        }
    }
}

/// A closed curve parametrized by `[0, 1)`.
///
/// Either a trigonometric polynomial per coordinate or a closed polyline,
/// interpolated by a periodic cubic spline in the vertex index. An optional
/// `warp` `a` with `|a| < 1` composes the curve with the circle
/// diffeomorphism `t + a sin(2 pi t) / (2 pi)`, which changes the speed but
/// not the image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CurveJson", into = "CurveJson")]
pub struct KnotCurve {
    shape: Shape,
    warp: f64,
    arclength: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Fourier {
        constant: Point,
        /// `harmonics[k - 1][c] = (a, b)` for `a cos 2 pi k t + b sin 2 pi k t`.
        harmonics: Vec<[[f64; 2]; 3]>,
    },
    Polyline {
        points: Vec<Point>,
        /// Second derivatives of the spline at the points.
        second: Vec<Point>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
enum CurveJson {
    Fourier {
        #[serde(default, skip_serializing_if = "is_origin")]
        constant: [f64; 3],
        harmonics: Vec<[[f64; 2]; 3]>,
        #[serde(default, skip_serializing_if = "is_zero")]
        warp: f64,
    },
    Polyline {
        points: Vec<[f64; 3]>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        arclength: Option<Vec<f64>>,
        #[serde(default, skip_serializing_if = "is_zero")]
        warp: f64,
    },
}

fn is_origin(c: &[f64; 3]) -> bool {
    c.iter().all(|&x| x == 0.0)
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

impl TryFrom<CurveJson> for KnotCurve {
    type Error = CurveError;

    fn try_from(j: CurveJson) -> Result<Self, CurveError> {
        let (curve, warp) = match j {
            CurveJson::Fourier {
                constant,
                harmonics,
                warp,
            } => (KnotCurve::fourier(constant, harmonics)?, warp),
            CurveJson::Polyline {
                points,
                arclength,
                warp,
            } => {
                let mut c = KnotCurve::polyline(&points)?;
                if let Some(table) = arclength {
                    c = c.with_arclength(table)?;
                }
                (c, warp)
            }
        };
        if warp == 0.0 {
            Ok(curve)
        } else {
            curve.reparametrized(warp)
        }
    }
}

impl From<KnotCurve> for CurveJson {
    fn from(c: KnotCurve) -> Self {
        match c.shape {
            Shape::Fourier {
                constant,
                harmonics,
            } => CurveJson::Fourier {
                constant: constant.into(),
                harmonics,
                warp: c.warp,
            },
            Shape::Polyline { points, .. } => CurveJson::Polyline {
                points: points.iter().map(|&p| p.into()).collect(),
                arclength: c.arclength,
                warp: c.warp,
            },
        }
    }
}

impl KnotCurve {
    pub fn fourier(constant: [f64; 3], harmonics: Vec<[[f64; 2]; 3]>) -> Result<Self, CurveError> {
        let finite = constant.iter().all(|x| x.is_finite())
            && harmonics.iter().flatten().flatten().all(|x| x.is_finite());
        if !finite {
            return Err(CurveError::InvalidParams("non-finite coefficient".into()));
        }
        if harmonics.iter().flatten().flatten().all(|&x| x == 0.0) {
            return Err(CurveError::InvalidParams("constant curve".into()));
        }
        Ok(KnotCurve {
            shape: Shape::Fourier {
                constant: constant.into(),
                harmonics,
            },
            warp: 0.0,
            arclength: None,
        })
    }

    /// Closed polyline through `points`; a repeated final point is dropped.
    pub fn polyline(points: &[[f64; 3]]) -> Result<Self, CurveError> {
        let mut pts: Vec<Point> = points.iter().map(|&p| p.into()).collect();
        if pts.len() > 1 && pts.first() == pts.last() {
            pts.pop();
        }
        if pts.len() < 3 {
            return Err(CurveError::InvalidParams(
                "a polyline needs at least 3 points".into(),
            ));
        }
        if pts.iter().any(|p| !p.iter().all(|x| x.is_finite())) {
            return Err(CurveError::InvalidParams("non-finite point".into()));
        }
        let second = periodic_spline(&pts);
        Ok(KnotCurve {
            shape: Shape::Polyline {
                points: pts,
                second,
            },
            warp: 0.0,
            arclength: None,
        })
    }

    /// Attaches per-segment arclengths to a polyline.
    pub fn with_arclength(mut self, table: Vec<f64>) -> Result<Self, CurveError> {
        let Shape::Polyline { points, .. } = &self.shape else {
            return Err(CurveError::InvalidParams(
                "arclength table requires a polyline".into(),
            ));
        };
        if table.len() != points.len() || table.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(CurveError::InvalidParams(
                "arclength table must hold one positive length per segment".into(),
            ));
        }
        self.arclength = Some(table);
        Ok(self)
    }

    /// Same image traversed with the speed profile `1 + a cos 2 pi t`.
    pub fn reparametrized(&self, a: f64) -> Result<Self, CurveError> {
        if a.is_nan() || a.abs() >= 1.0 {
            return Err(CurveError::InvalidParams(format!(
                "warp {a} must satisfy |a| < 1"
            )));
        }
        if self.warp != 0.0 {
            return Err(CurveError::InvalidParams("curve is already warped".into()));
        }
        let mut c = self.clone();
        c.warp = a;
        Ok(c)
    }

    /// Image scaled by `factor` about the origin.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut c = self.clone();
        match &mut c.shape {
            Shape::Fourier {
                constant,
                harmonics,
            } => {
                *constant *= factor;
                for x in harmonics.iter_mut().flatten().flatten() {
                    *x *= factor;
                }
            }
            Shape::Polyline { points, second } => {
                for p in points.iter_mut().chain(second.iter_mut()) {
                    *p *= factor;
                }
            }
        }
        if let Some(t) = &mut c.arclength {
            for x in t.iter_mut() {
                *x *= factor.abs();
            }
        }
        c
    }

    pub fn load(path: &Path) -> Result<Self, CurveError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CurveError::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        serde_json::from_str(text).map_err(|e| CurveError::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curves serialize")
    }

    pub fn is_polyline(&self) -> bool {
        matches!(self.shape, Shape::Polyline { .. })
    }

    pub fn arclength_table(&self) -> Option<&[f64]> {
        self.arclength.as_deref()
    }

    /// Vertices of a polyline curve.
    pub fn points(&self) -> Option<&[Point]> {
        match &self.shape {
            Shape::Polyline { points, .. } => Some(points),
            Shape::Fourier { .. } => None,
        }
    }

    fn warp_param(&self, t: f64) -> (f64, f64) {
        if self.warp == 0.0 {
            (t, 1.0)
        } else {
            let (s, c) = (TAU * t).sin_cos();
            (t + self.warp * s / TAU, 1.0 + self.warp * c)
        }
    }

    pub fn position(&self, t: f64) -> Point {
        let (u, _) = self.warp_param(t);
        self.base(u).0
    }

    pub fn velocity(&self, t: f64) -> Point {
        let (u, du) = self.warp_param(t);
        self.base(u).1 * du
    }

    /// Position and velocity together.
    pub fn frame(&self, t: f64) -> (Point, Point) {
        let (u, du) = self.warp_param(t);
        let (p, v) = self.base(u);
        (p, v * du)
    }

    fn base(&self, t: f64) -> (Point, Point) {
        match &self.shape {
            Shape::Fourier {
                constant,
                harmonics,
            } => {
                let mut p = *constant;
                let mut v = Point::zeros();
                for (k, h) in harmonics.iter().enumerate() {
                    let w = TAU * (k + 1) as f64;
                    let (s, c) = (w * t).sin_cos();
                    for (axis, &[a, b]) in h.iter().enumerate() {
                        p[axis] += a * c + b * s;
                        v[axis] += w * (b * c - a * s);
                    }
                }
                (p, v)
            }
            Shape::Polyline { points, second } => {
                let n = points.len();
                let u = t.rem_euclid(1.0) * n as f64;
                let i = (u.floor() as usize).min(n - 1);
                let s = u - i as f64;
                let j = (i + 1) % n;
                let r = 1.0 - s;
                let (p0, p1, m0, m1) = (points[i], points[j], second[i], second[j]);
                let p =
                    p0 * r + p1 * s + m0 * ((r * r * r - r) / 6.0) + m1 * ((s * s * s - s) / 6.0);
                let dp =
                    p1 - p0 - m0 * ((3.0 * r * r - 1.0) / 6.0) + m1 * ((3.0 * s * s - 1.0) / 6.0);
                (p, dp * n as f64)
            }
        }
    }

    /// Positions at `t = k / n`.
    pub fn sample(&self, n: usize) -> Vec<Point> {
        (0..n).map(|k| self.position(k as f64 / n as f64)).collect()
    }

    /// Largest distance between two of 512 sample points.
    pub fn diameter(&self) -> f64 {
        let pts = self.sample(512);
        let mut best: f64 = 0.0;
        for (a, p) in pts.iter().enumerate() {
            for q in &pts[a + 1..] {
                best = best.max((p - q).norm());
            }
        }
        best
    }

    pub fn length(&self) -> f64 {
        match (&self.arclength, self.warp) {
            (Some(t), _) => neumaier(t.iter().copied()),
            _ => *cumulative_length(self, length_cells(self))
                .last()
                .expect("nonempty"),
        }
    }

    /// Checks regularity and embeddedness.
    pub fn validate(&self, tol: &Tolerances) -> Result<(), CurveError> {
        let n = self.scan_samples(tol);
        for k in 0..n {
            let t = k as f64 / n as f64;
            let speed = self.velocity(t).norm();
            if speed.is_nan() || speed <= tol.eps_reg {
                return Err(CurveError::NotRegular { t, speed });
            }
        }
        let pts = self.sample(n);
        if let Some((s, t, distance)) = self_approach(&pts, tol.eps_emb) {
            return Err(CurveError::NotEmbedded { s, t, distance });
        }
        Ok(())
    }

    fn scan_samples(&self, tol: &Tolerances) -> usize {
        match &self.shape {
            Shape::Polyline { points, .. } => tol.samples.max(4 * points.len()),
            Shape::Fourier { harmonics, .. } => tol.samples.max(64 * harmonics.len()),
        }
    }
}

/// Checks that two curves stay at least `tol.eps_emb` apart.
pub(crate) fn check_disjoint(
    a: &KnotCurve,
    b: &KnotCurve,
    tol: &Tolerances,
) -> Result<(), CurveError> {
    let pa = a.sample(a.scan_samples(tol));
    let pb = b.sample(b.scan_samples(tol));
    let segs_b: Vec<(Point, Point)> = (0..pb.len())
        .map(|k| (pb[k], pb[(k + 1) % pb.len()]))
        .collect();
    let reach = max_segment(&pa).max(max_segment(&pb)) + tol.eps_emb;
    let grid = SegmentGrid::new(&segs_b, reach);
    let mut best = f64::INFINITY;
    for k in 0..pa.len() {
        let (p, q) = (pa[k], pa[(k + 1) % pa.len()]);
        for idx in grid.near((p + q) / 2.0) {
            let (r, s) = segs_b[idx];
            best = best.min(segment_distance(p, q, r, s));
        }
    }
    if best <= tol.eps_emb {
        Err(CurveError::CurvesIntersect { distance: best })
    } else {
        Ok(())
    }
}

/// Closest approach between segments that are far apart along the curve,
/// if it falls below `eps`.
fn self_approach(pts: &[Point], eps: f64) -> Option<(f64, f64, f64)> {
    let n = pts.len();
    let segs: Vec<(Point, Point)> = (0..n).map(|k| (pts[k], pts[(k + 1) % n])).collect();
    let lens: Vec<f64> = segs.iter().map(|(p, q)| (q - p).norm()).collect();
    let mut cum = vec![0.0; n + 1];
    for k in 0..n {
        cum[k + 1] = cum[k] + lens[k];
    }
    let total = cum[n];
    let longest = lens.iter().copied().fold(0.0, f64::max);
    let window = (10.0 * eps).max(4.0 * longest);
    let grid = SegmentGrid::new(&segs, longest + eps);
    let mut worst: Option<(f64, f64, f64)> = None;
    for a in 0..n {
        let (p, q) = segs[a];
        for b in grid.near((p + q) / 2.0) {
            if b <= a {
                continue;
            }
            // arclength between the nearer ends of the two segments
            let gap = (cum[b] - cum[a + 1]).max(0.0);
            let around = (total - cum[b + 1] + cum[a]).max(0.0);
            if gap.min(around) < window {
                continue;
            }
            let d = segment_distance(p, q, segs[b].0, segs[b].1);
            if d <= eps && worst.is_none_or(|w| d < w.2) {
                worst = Some((a as f64 / n as f64, b as f64 / n as f64, d));
            }
        }
    }
    worst
}

fn max_segment(pts: &[Point]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|k| (pts[(k + 1) % n] - pts[k]).norm())
        .fold(0.0, f64::max)
}

/// Uniform grid over segment midpoints.
struct SegmentGrid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
}

impl SegmentGrid {
    /// `reach` bounds the midpoint distance of any pair worth testing.
    fn new(segs: &[(Point, Point)], reach: f64) -> Self {
        let cell = reach.max(f64::MIN_POSITIVE);
        let mut cells: HashMap<[i64; 3], Vec<usize>> = HashMap::new();
        for (k, (p, q)) in segs.iter().enumerate() {
            cells.entry(key((p + q) / 2.0, cell)).or_default().push(k);
        }
        SegmentGrid { cell, cells }
    }

    fn near(&self, m: Point) -> impl Iterator<Item = usize> + '_ {
        let [x, y, z] = key(m, self.cell);
        (-1..=1)
            .flat_map(move |dx| {
                (-1..=1).flat_map(move |dy| (-1..=1).map(move |dz| [x + dx, y + dy, z + dz]))
            })
            .filter_map(|k| self.cells.get(&k))
            .flatten()
            .copied()
    }
}

fn key(p: Point, cell: f64) -> [i64; 3] {
    [
        (p.x / cell).floor() as i64,
        (p.y / cell).floor() as i64,
        (p.z / cell).floor() as i64,
    ]
}

/// Distance between segments `[p1, q1]` and `[p2, q2]`.
pub(crate) fn segment_distance(p1: Point, q1: Point, p2: Point, q2: Point) -> f64 {
    let d1 = q1 - p1;
    let d2 = q2 - p2;
    let r = p1 - p2;
    let a = d1.dot(&d1);
    let e = d2.dot(&d2);
    let f = d2.dot(&r);
    let tiny = 1e-300;
    let (s, t) = if a <= tiny && e <= tiny {
        (0.0, 0.0)
    } else if a <= tiny {
        (0.0, (f / e).clamp(0.0, 1.0))
    } else {
        let c = d1.dot(&r);
        if e <= tiny {
            ((-c / a).clamp(0.0, 1.0), 0.0)
        } else {
            let b = d1.dot(&d2);
            let denom = a * e - b * b;
            let mut s = if denom > 0.0 {
                ((b * f - c * e) / denom).clamp(0.0, 1.0)
            } else {
                0.0
            };
            let mut t = (b * s + f) / e;
            if t < 0.0 {
                t = 0.0;
                s = (-c / a).clamp(0.0, 1.0);
            } else if t > 1.0 {
                t = 1.0;
                s = ((b - c) / a).clamp(0.0, 1.0);
            }
            (s, t)
        }
    };
    (p1 + d1 * s - (p2 + d2 * t)).norm()
}

/// Second derivatives of the periodic cubic spline with unit knot spacing.
fn periodic_spline(p: &[Point]) -> Vec<Point> {
    let n = p.len();
    let rhs: Vec<Point> = (0..n)
        .map(|i| (p[(i + 1) % n] - p[i] * 2.0 + p[(i + n - 1) % n]) * 6.0)
        .collect();
    solve_cyclic(n, &rhs)
}

/// Solves the cyclic system `x[i-1] + 4 x[i] + x[i+1] = r[i]` by
/// Sherman-Morrison on top of a tridiagonal solve.
fn solve_cyclic(n: usize, r: &[Point]) -> Vec<Point> {
    let gamma = -4.0;
    let mut diag = vec![4.0; n];
    diag[0] -= gamma;
    diag[n - 1] -= 1.0 / gamma;
    let x = solve_tridiagonal(&diag, r);
    let mut u = vec![Point::zeros(); n];
    u[0] = Point::repeat(gamma);
    u[n - 1] = Point::repeat(1.0);
    let z = solve_tridiagonal(&diag, &u);
    let vx = x[0] + x[n - 1] / gamma;
    let vz = z[0] + z[n - 1] / gamma;
    let factor = vx.component_div(&(Point::repeat(1.0) + vz));
    x.iter()
        .zip(&z)
        .map(|(xi, zi)| xi - zi.component_mul(&factor))
        .collect()
}

/// Thomas algorithm with unit off-diagonals.
fn solve_tridiagonal(diag: &[f64], r: &[Point]) -> Vec<Point> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![Point::zeros(); n];
    c[0] = 1.0 / diag[0];
    d[0] = r[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - c[i - 1];
        c[i] = 1.0 / m;
        d[i] = (r[i] - d[i - 1]) / m;
    }
    let mut x = vec![Point::zeros(); n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - x[i + 1] * c[i];
    }
    x
}

const GL_NODES: [f64; 5] = [
    -0.906_179_845_938_664,
    -0.538_469_310_105_683,
    0.0,
    0.538_469_310_105_683,
    0.906_179_845_938_664,
];
const GL_WEIGHTS: [f64; 5] = [
    0.236_926_885_056_189,
    0.478_628_670_499_366,
    0.568_888_888_888_889,
    0.478_628_670_499_366,
    0.236_926_885_056_189,
];

fn gauss_legendre(k: &KnotCurve, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    GL_NODES
        .iter()
        .zip(GL_WEIGHTS)
        .map(|(x, w)| w * k.velocity(mid + half * x).norm())
        .sum::<f64>()
        * half
}

fn length_cells(k: &KnotCurve) -> usize {
    match &k.shape {
        Shape::Polyline { points, .. } => 8 * points.len(),
        Shape::Fourier { harmonics, .. } => 4096.max(64 * harmonics.len()),
    }
}

/// Arclength from 0 to `j / cells`, for `j = 0..=cells`.
fn cumulative_length(k: &KnotCurve, cells: usize) -> Vec<f64> {
    let mut cum = Vec::with_capacity(cells + 1);
    let mut acc = Neumaier::default();
    cum.push(0.0);
    for j in 0..cells {
        acc.add(gauss_legendre(
            k,
            j as f64 / cells as f64,
            (j + 1) as f64 / cells as f64,
        ));
        cum.push(acc.sum());
    }
    cum
}

/// `n` points equally spaced in arclength, starting at `t = 0`.
///
/// The result is a polyline carrying the original arclength of each segment.
/// Resampling a curve that already has such a table uses the table, so a
/// second resampling with the same `n` reproduces the points.
pub fn resample_arclength(k: &KnotCurve, n: usize) -> Result<KnotCurve, CurveError> {
    if n < 3 {
        return Err(CurveError::InvalidParams(
            "resampling needs at least 3 points".into(),
        ));
    }
    let params: Vec<f64> = match (&k.shape, &k.arclength, k.warp) {
        (Shape::Polyline { points, .. }, Some(table), 0.0) => {
            let m = points.len();
            let mut cum = vec![0.0; m + 1];
            let mut acc = Neumaier::default();
            for (i, &x) in table.iter().enumerate() {
                acc.add(x);
                cum[i + 1] = acc.sum();
            }
            let total = cum[m];
            (0..n)
                .map(|j| {
                    let s = total * j as f64 / n as f64;
                    let i = cum
                        .partition_point(|&c| c <= s)
                        .saturating_sub(1)
                        .min(m - 1);
                    (i as f64 + (s - cum[i]) / table[i]) / m as f64
                })
                .collect()
        }
        _ => {
            let cells = length_cells(k);
            let cum = cumulative_length(k, cells);
            let total = cum[cells];
            (0..n)
                .map(|j| invert_length(k, &cum, total * j as f64 / n as f64))
                .collect()
        }
    };
    let total = k.length();
    let points: Vec<[f64; 3]> = params.iter().map(|&t| k.position(t).into()).collect();
    KnotCurve::polyline(&points)?.with_arclength(vec![total / n as f64; n])
}

/// Parameter at which the arclength from 0 equals `s`.
fn invert_length(k: &KnotCurve, cum: &[f64], s: f64) -> f64 {
    let cells = cum.len() - 1;
    let j = cum
        .partition_point(|&c| c <= s)
        .saturating_sub(1)
        .min(cells - 1);
    let (lo, hi) = (j as f64 / cells as f64, (j + 1) as f64 / cells as f64);
    let (mut a, mut b) = (lo, hi);
    let mut t = lo + (hi - lo) * (s - cum[j]) / (cum[j + 1] - cum[j]);
    for _ in 0..50 {
        let f = cum[j] + gauss_legendre(k, lo, t) - s;
        if f.abs() <= 1e-15 * cum[cells].max(1.0) {
            break;
        }
        if f > 0.0 {
            b = t;
        } else {
            a = t;
        }
        let step = t - f / k.velocity(t).norm();
        t = if step > a && step < b {
            step
        } else {
            0.5 * (a + b)
        };
    }
    t
}

/// Compensated (Neumaier) summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn sum(&self) -> f64 {
        self.sum + self.comp
    }
}

pub(crate) fn neumaier(it: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = Neumaier::default();
    for x in it {
        acc.add(x);
    }
    acc.sum()
}

/// The `(p, q)` torus knot on a torus with radii `R > r > 0`.
pub fn make_torus_knot(p: u32, q: u32, big_r: f64, r: f64) -> Result<KnotCurve, CurveError> {
    if p < 1 || q < 1 {
        return Err(CurveError::InvalidParams(
            "p and q must be at least 1".into(),
        ));
    }
    if p.gcd(&q) != 1 {
        return Err(CurveError::InvalidParams(format!("gcd({p}, {q}) != 1")));
    }
    if !(r > 0.0 && big_r > r && big_r.is_finite()) {
        return Err(CurveError::InvalidParams("need R > r > 0".into()));
    }
    let (p, q) = (p as i64, q as i64);
    let top = (p + q) as usize;
    let mut constant = [0.0; 3];
    let mut harmonics = vec![[[0.0; 2]; 3]; top];
    // cos(qa) cos(pa) and cos(qa) sin(pa) split into the harmonics p + q and p - q
    let mut add = |k: i64, axis: usize, cos: f64, sin: f64| {
        if k == 0 {
            constant[axis] += cos;
        } else {
            let sign = k.signum() as f64;
            let h = &mut harmonics[k.unsigned_abs() as usize - 1][axis];
            h[0] += cos;
            h[1] += sign * sin;
        }
    };
    add(p, 0, big_r, 0.0);
    add(p + q, 0, r / 2.0, 0.0);
    add(p - q, 0, r / 2.0, 0.0);
    add(p, 1, 0.0, big_r);
    add(p + q, 1, 0.0, r / 2.0);
    add(p - q, 1, 0.0, r / 2.0);
    add(q, 2, 0.0, r);
    let curve = KnotCurve::fourier(constant, harmonics)?;
    curve.validate(&Tolerances::default())?;
    Ok(curve)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn circle() -> KnotCurve {
        KnotCurve::fourier([0.0; 3], vec![[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]]).unwrap()
    }

    #[test]
    fn torus_knot_matches_closed_form() {
        let k = make_torus_knot(2, 3, 2.0, 0.5).unwrap();
        for t in [0.0, 0.1, 0.37, 0.8] {
            let (a, b) = (TAU * 3.0 * t, TAU * 2.0 * t);
            let expect = Point::new(
                (2.0 + 0.5 * a.cos()) * b.cos(),
                (2.0 + 0.5 * a.cos()) * b.sin(),
                0.5 * a.sin(),
            );
            assert_abs_diff_eq!((k.position(t) - expect).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn torus_knot_params() {
        assert!(matches!(
            make_torus_knot(1, 0, 2.0, 1.0),
            Err(CurveError::InvalidParams(_))
        ));
        assert!(matches!(
            make_torus_knot(2, 4, 2.0, 1.0),
            Err(CurveError::InvalidParams(_))
        ));
        assert!(matches!(
            make_torus_knot(2, 3, 1.0, 1.0),
            Err(CurveError::InvalidParams(_))
        ));
        let unknot = make_torus_knot(1, 1, 2.0, 0.5).unwrap();
        assert_abs_diff_eq!(unknot.position(0.0).x, 2.5, epsilon = 1e-12);
    }

    #[test]
    fn velocity_matches_difference_quotient() {
        let k = make_torus_knot(2, 3, 2.0, 0.5)
            .unwrap()
            .reparametrized(0.4)
            .unwrap();
        let h = 1e-6;
        for t in [0.05, 0.5, 0.93] {
            let fd = (k.position(t + h) - k.position(t - h)) / (2.0 * h);
            assert_abs_diff_eq!((fd - k.velocity(t)).norm(), 0.0, epsilon = 1e-6);
        }
    }

    #[test]
    fn spline_interpolates_and_is_smooth() {
        let pts: Vec<[f64; 3]> = circle().sample(40).iter().map(|&p| p.into()).collect();
        let k = KnotCurve::polyline(&pts).unwrap();
        for (i, p) in pts.iter().enumerate() {
            assert_abs_diff_eq!(
                (k.position(i as f64 / 40.0) - Point::from(*p)).norm(),
                0.0,
                epsilon = 1e-12
            );
        }
        // first derivative continuous at a knot
        let t = 7.0 / 40.0;
        assert_abs_diff_eq!(
            (k.velocity(t - 1e-12) - k.velocity(t + 1e-12)).norm(),
            0.0,
            epsilon = 1e-6
        );
        // close to the circle in between
        assert_abs_diff_eq!(k.position(0.5 / 40.0).norm(), 1.0, epsilon = 1e-5);
    }

    #[test]
    fn circle_resamples_to_square() {
        let sq = resample_arclength(&circle(), 4).unwrap();
        let pts = sq.points().unwrap();
        for k in 0..4 {
            assert_abs_diff_eq!(
                (pts[(k + 1) % 4] - pts[k]).norm(),
                2f64.sqrt(),
                epsilon = 1e-9
            );
        }
        let total: f64 = sq.arclength_table().unwrap().iter().sum();
        assert_abs_diff_eq!(total, TAU, epsilon = 1e-9);
    }

    #[test]
    fn resampling_is_idempotent() {
        let k = make_torus_knot(2, 3, 2.0, 0.5)
            .unwrap()
            .reparametrized(0.3)
            .unwrap();
        let once = resample_arclength(&k, 300).unwrap();
        let twice = resample_arclength(&once, 300).unwrap();
        for (a, b) in once.points().unwrap().iter().zip(twice.points().unwrap()) {
            assert!((a - b).norm() < 1e-9);
        }
        assert!((once.length() - k.length()).abs() < 1e-6 * k.length());
    }

    #[test]
    fn validation_flags_crossings() {
        // a planar figure eight crosses itself
        let eight = KnotCurve::fourier(
            [0.0; 3],
            vec![
                [[0.0, 1.0], [0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.5], [0.0, 0.0]],
            ],
        )
        .unwrap();
        assert!(matches!(
            eight.validate(&Tolerances::default()),
            Err(CurveError::NotEmbedded { .. })
        ));
        assert!(circle().validate(&Tolerances::default()).is_ok());
    }

    #[test]
    fn validation_flags_stalls() {
        // x = cos^3-like cusp: speed vanishes at t = 0
        let cusp = KnotCurve::fourier(
            [0.0; 3],
            vec![
                [[0.0, 1.0], [1.0, 0.0], [0.0, 0.0]],
                [[0.0, -0.5], [-0.5, 0.0], [0.0, 0.0]],
            ],
        )
        .unwrap();
        assert!(matches!(
            cusp.validate(&Tolerances::default()),
            Err(CurveError::NotRegular { .. })
        ));
    }

    #[test]
    fn json_round_trip() {
        let k = make_torus_knot(2, 3, 2.0, 0.5)
            .unwrap()
            .reparametrized(0.2)
            .unwrap();
        let back = KnotCurve::from_json(&k.to_json()).unwrap();
        assert_eq!(back, k);
        let text = r#"{"type":"polyline","points":[[1,0,0],[0,1,0],[-1,0,0],[0,-1,0]]}"#;
        let sq = KnotCurve::from_json(text).unwrap();
        assert!(sq.is_polyline());
        assert!(KnotCurve::from_json(r#"{"type":"polyline","points":[[1,0,0]]}"#).is_err());
    }

    #[test]
    fn scaling() {
        let k = make_torus_knot(2, 3, 2.0, 0.5).unwrap();
        let s = k.scaled(2.0);
        assert_abs_diff_eq!(
            (s.position(0.3) - k.position(0.3) * 2.0).norm(),
            0.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(s.diameter(), 2.0 * k.diameter(), epsilon = 1e-9);
    }
}
