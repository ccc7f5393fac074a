use std::collections::HashMap;

use nalgebra::{Vector2, Vector3};
use serde::{Deserialize, Serialize};

use super::{CurveError, KnotCurve};

/// One crossing of a based knot diagram: the parameters at which the knot
/// passes over and under, and the crossing sign.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub over: f64,
    pub under: f64,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct GaussDiagram {
    pub crossings: Vec<Crossing>,
}

impl GaussDiagram {
    pub fn new(crossings: Vec<Crossing>) -> Result<Self, CurveError> {
        let d = GaussDiagram { crossings };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<(), CurveError> {
        let bad = |msg: String| Err(CurveError::InconsistentDiagram(msg));
        let mut params = Vec::with_capacity(2 * self.crossings.len());
        for (k, c) in self.crossings.iter().enumerate() {
            if c.sign != 1 && c.sign != -1 {
                return bad(format!("crossing {k} has sign {}", c.sign));
            }
            for t in [c.over, c.under] {
                if !(0.0..1.0).contains(&t) {
                    return bad(format!("crossing {k} has parameter {t} outside [0, 1)"));
                }
            }
            params.push(c.over);
            params.push(c.under);
        }
        params.sort_by(f64::total_cmp);
        if params.windows(2).any(|w| w[0] == w[1]) {
            return bad("repeated parameter".into());
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// The sequence of `(crossing index, is_over)` met from the base point.
    pub fn gauss_code(&self) -> Vec<(usize, bool)> {
        let mut occ: Vec<(f64, usize, bool)> = self
            .crossings
            .iter()
            .enumerate()
            .flat_map(|(k, c)| [(c.over, k, true), (c.under, k, false)])
            .collect();
        occ.sort_by(|a, b| a.0.total_cmp(&b.0));
        occ.into_iter().map(|(_, k, o)| (k, o)).collect()
    }

    /// Gauss code with crossings renumbered by first appearance, plus signs.
    pub fn signature(&self) -> Vec<(usize, bool, i8)> {
        let mut ids: HashMap<usize, usize> = HashMap::new();
        self.gauss_code()
            .into_iter()
            .map(|(k, o)| {
                let next = ids.len();
                let id = *ids.entry(k).or_insert(next);
                (id, o, self.crossings[k].sign)
            })
            .collect()
    }

    /// Moves the base point to parameter `base`.
    pub fn rotated(&self, base: f64) -> GaussDiagram {
        let shift = |t: f64| (t - base).rem_euclid(1.0);
        GaussDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    over: shift(c.over),
                    under: shift(c.under),
                    sign: c.sign,
                })
                .collect(),
        }
    }

    /// Mirror image through the projection plane.
    pub fn mirrored(&self) -> GaussDiagram {
        GaussDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    over: c.under,
                    under: c.over,
                    sign: -c.sign,
                })
                .collect(),
        }
    }

    /// Same diagram traversed backwards.
    pub fn reversed(&self) -> GaussDiagram {
        let flip = |t: f64| if t == 0.0 { 0.0 } else { 1.0 - t };
        GaussDiagram {
            crossings: self
                .crossings
                .iter()
                .map(|c| Crossing {
                    over: flip(c.over),
                    under: flip(c.under),
                    sign: c.sign,
                })
                .collect(),
        }
    }

    /// Adds a small curl right after parameter `at`.
    pub fn with_kink(
        &self,
        at: f64,
        sign: i8,
        over_first: bool,
    ) -> Result<GaussDiagram, CurveError> {
        let next = self
            .gauss_code()
            .iter()
            .map(|&(k, o)| {
                if o {
                    self.crossings[k].over
                } else {
                    self.crossings[k].under
                }
            })
            .find(|&t| t > at)
            .unwrap_or(1.0);
        let a = at + (next - at) / 3.0;
        let b = at + 2.0 * (next - at) / 3.0;
        let (over, under) = if over_first { (a, b) } else { (b, a) };
        let mut crossings = self.crossings.clone();
        crossings.push(Crossing { over, under, sign });
        GaussDiagram::new(crossings)
    }

    pub fn from_json(text: &str) -> Result<Self, CurveError> {
        let d: GaussDiagram =
            serde_json::from_str(text).map_err(|e| CurveError::Parse(e.to_string()))?;
        d.validate()?;
        Ok(d)
    }
}

const START_SEGMENTS: usize = 2000;
const MAX_DOUBLINGS: u32 = 7;

/// Projects `k` along `direction` and reads off its based Gauss diagram.
///
/// The viewer sits at `+direction`; a crossing is positive when the
/// projected under-strand points to the left of the over-strand.
pub fn project_to_diagram(k: &KnotCurve, direction: [f64; 3]) -> Result<GaussDiagram, CurveError> {
    let d = Vector3::from(direction);
    let norm = d.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        return Err(CurveError::InvalidParams(
            "projection direction must be nonzero".into(),
        ));
    }
    let d = d / norm;
    let helper = if d.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = (helper - d * helper.dot(&d)).normalize();
    let e2 = d.cross(&e1);
    let scale = k.diameter();
    let mut history: Vec<Vec<(usize, bool, i8)>> = Vec::new();
    let mut n = START_SEGMENTS;
    for _ in 0..=MAX_DOUBLINGS {
        let diagram = crossings_at(k, n, &e1, &e2, &d, scale)?;
        let sig = diagram.signature();
        history.push(sig);
        let h = history.len();
        if h >= 3 && history[h - 1] == history[h - 2] && history[h - 2] == history[h - 3] {
            return Ok(diagram);
        }
        n *= 2;
    }
    Err(CurveError::DegenerateProjection(
        "crossing set did not stabilize under refinement".into(),
    ))
}

fn crossings_at(
    k: &KnotCurve,
    n: usize,
    e1: &Vector3<f64>,
    e2: &Vector3<f64>,
    d: &Vector3<f64>,
    scale: f64,
) -> Result<GaussDiagram, CurveError> {
    let pts = k.sample(n);
    let flat: Vec<Vector2<f64>> = pts
        .iter()
        .map(|p| Vector2::new(p.dot(e1), p.dot(e2)))
        .collect();
    let height: Vec<f64> = pts.iter().map(|p| p.dot(d)).collect();
    let seg = |a: usize| (flat[a], flat[(a + 1) % n] - flat[a]);
    let cell = (0..n)
        .map(|a| seg(a).1.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let key = |p: Vector2<f64>| [(p.x / cell).floor() as i64, (p.y / cell).floor() as i64];
    let mut grid: HashMap<[i64; 2], Vec<usize>> = HashMap::new();
    for a in 0..n {
        let (p, v) = seg(a);
        grid.entry(key(p + v / 2.0)).or_default().push(a);
    }
    let mut found: Vec<(Crossing, Vector2<f64>)> = Vec::new();
    for a in 0..n {
        let (p, v) = seg(a);
        let [x, y] = key(p + v / 2.0);
        for dx in -1..=1 {
            for dy in -1..=1 {
                let Some(list) = grid.get(&[x + dx, y + dy]) else {
                    continue;
                };
                for &b in list {
                    let gap = (b + n - a) % n;
                    if b <= a || gap <= 1 || gap == n - 1 {
                        continue;
                    }
                    let (q, w) = seg(b);
                    let cross = v.perp(&w);
                    let r = q - p;
                    let s = r.perp(&w) / cross;
                    let u = r.perp(&v) / cross;
                    if cross == 0.0 || !(0.0..1.0).contains(&s) || !(0.0..1.0).contains(&u) {
                        continue;
                    }
                    if cross.abs() < 1e-9 * v.norm() * w.norm() {
                        return Err(CurveError::DegenerateProjection(format!(
                            "tangency near parameters {} and {}",
                            a as f64 / n as f64,
                            b as f64 / n as f64
                        )));
                    }
                    let ha = height[a] + s * (height[(a + 1) % n] - height[a]);
                    let hb = height[b] + u * (height[(b + 1) % n] - height[b]);
                    if (ha - hb).abs() < 1e-9 * scale {
                        return Err(CurveError::DegenerateProjection(
                            "the curve meets itself along the projection line".into(),
                        ));
                    }
                    let ta = (a as f64 + s) / n as f64;
                    let tb = (b as f64 + u) / n as f64;
                    let (over, under, t_over, t_under) = if ha > hb {
                        (ta, tb, v, w)
                    } else {
                        (tb, ta, w, v)
                    };
                    let sign = if t_over.perp(&t_under) > 0.0 { 1 } else { -1 };
                    found.push((Crossing { over, under, sign }, p + v * s));
                }
            }
        }
    }
    let tol = 1e-7 * scale;
    for (i, (_, x)) in found.iter().enumerate() {
        if found[i + 1..].iter().any(|(_, y)| (x - y).norm() < tol) {
            return Err(CurveError::DegenerateProjection("triple point".into()));
        }
    }
    GaussDiagram::new(found.into_iter().map(|(c, _)| c).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::knot::make_torus_knot;

    #[test]
    fn circle_has_no_crossings() {
        let c = KnotCurve::fourier([0.0; 3], vec![[[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]]).unwrap();
        let d = project_to_diagram(&c, [0.3, 0.2, 1.0]).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn trefoil_from_above() {
        let k = make_torus_knot(2, 3, 2.0, 0.5).unwrap();
        let d = project_to_diagram(&k, [0.01, 0.02, 1.0]).unwrap();
        assert_eq!(d.len(), 3);
        // this embedding is the left-handed trefoil
        assert_eq!(d.writhe(), -3);
        let mirror = k.scaled(-1.0);
        let m = project_to_diagram(&mirror, [0.01, 0.02, 1.0]).unwrap();
        assert_eq!(m.writhe(), 3);
        assert!(m.crossings.iter().all(|c| c.sign == 1));
    }

    #[test]
    fn diagram_validation() {
        let c = |over, under, sign| Crossing { over, under, sign };
        assert!(GaussDiagram::new(vec![c(0.1, 0.2, 2)]).is_err());
        assert!(GaussDiagram::new(vec![c(0.1, 0.1, 1)]).is_err());
        assert!(GaussDiagram::new(vec![c(0.1, 1.0, 1)]).is_err());
        assert!(
            GaussDiagram::from_json(r#"{"crossings":[{"over":0.1,"under":0.6,"sign":-1}]}"#)
                .is_ok()
        );
    }

    #[test]
    fn kink_changes_writhe_only_locally() {
        let d = GaussDiagram::new(vec![Crossing {
            over: 0.2,
            under: 0.7,
            sign: 1,
        }])
        .unwrap();
        let k = d.with_kink(0.3, -1, true).unwrap();
        assert_eq!(k.writhe(), 0);
        assert_eq!(
            k.gauss_code(),
            vec![(0, true), (1, true), (1, false), (0, false)]
        );
    }
}
