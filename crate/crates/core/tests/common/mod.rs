//! Independent reference computations shared by the integration tests.
//! They use the closed form of the shipped trefoil and textbook formulas
//! rather than the library's curve and form machinery.
#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type V3 = [f64; 3];

pub fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn norm(a: V3) -> f64 {
    dot(a, a).sqrt()
}

/// A closed curve given by position and velocity in closed form.
pub trait Curve: Sync {
    fn at(&self, t: f64) -> (V3, V3);
}

/// `((R + r cos 3u) cos 2u, (R + r cos 3u) sin 2u, r sin 3u)` with `u = 2 pi t`.
pub struct Trefoil {
    pub big_r: f64,
    pub r: f64,
}

impl Curve for Trefoil {
    fn at(&self, t: f64) -> (V3, V3) {
        let u = TAU * t;
        let (s2, c2) = (2.0 * u).sin_cos();
        let (s3, c3) = (3.0 * u).sin_cos();
        let rho = self.big_r + self.r * c3;
        let drho = -3.0 * self.r * s3;
        let p = [rho * c2, rho * s2, self.r * s3];
        let v = [
            TAU * (drho * c2 - 2.0 * rho * s2),
            TAU * (drho * s2 + 2.0 * rho * c2),
            TAU * 3.0 * self.r * c3,
        ];
        (p, v)
    }
}

pub struct Circle;

impl Curve for Circle {
    fn at(&self, t: f64) -> (V3, V3) {
        let (s, c) = (TAU * t).sin_cos();
        ([c, s, 0.0], [-TAU * s, TAU * c, 0.0])
    }
}

/// Gauss writhe density `(T(s) x T(t)) . (g(s) - g(t)) / (4 pi |g(s) - g(t)|^3)`.
pub fn writhe_density(a: (V3, V3), b: (V3, V3)) -> f64 {
    let d = sub(a.0, b.0);
    let r = norm(d);
    dot(cross(a.1, b.1), d) / (4.0 * PI * r * r * r)
}

fn nodes(c: &dyn Curve, n: usize) -> Vec<(V3, V3)> {
    (0..n).map(|i| c.at((i as f64 + 0.5) / n as f64)).collect()
}

/// Writhe by the off-diagonal midpoint rule, extrapolated from `n / 2`.
pub fn writhe(c: &dyn Curve, n: usize) -> f64 {
    let rule = |n: usize| {
        let p = nodes(c, n);
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    total += writhe_density(p[i], p[j]);
                }
            }
        }
        total / (n * n) as f64
    };
    (4.0 * rule(n) - rule(n / 2)) / 3.0
}

/// Integral of the two-chord diagram with crossing chords over cyclically
/// ordered quadruples: `-4 * sum_{a<b<c<d} w(a,c) w(b,d)`, by suffix sums on
/// an `n` grid, extrapolated from `n / 2` (first-order rule).
pub fn crossed_chords(c: &dyn Curve, n: usize) -> f64 {
    let rule = |n: usize| {
        let p = nodes(c, n);
        let w: Vec<Vec<f64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            writhe_density(p[i], p[j])
                        }
                    })
                    .collect()
            })
            .collect();
        // tail[j][k] = sum_{l > k} w[j][l]
        let mut total = 0.0;
        let mut tail = vec![0.0; n];
        let mut tails: Vec<Vec<f64>> = vec![Vec::new(); n];
        for j in 0..n {
            let mut acc = 0.0;
            for k in (0..n).rev() {
                tail[k] = acc;
                acc += w[j][k];
            }
            tails[j] = tail.clone();
        }
        for k in 0..n {
            // inner[i] = sum_{i < j < k} tail[j][k]
            let mut inner = 0.0;
            for i in (0..k).rev() {
                total += w[i][k] * inner;
                inner += tails[i][k];
            }
        }
        -4.0 * total / (n as f64).powi(4)
    };
    2.0 * rule(n) - rule(n / 2)
}

/// Monte Carlo value of the tripod graph: three knot points in cyclic order
/// joined to one point of space. Knot parameters are drawn independently
/// and uniformly (the cyclic order is an indicator), the spatial point from
/// a Cauchy-type radial law around a random knot point.
pub fn tripod(c: &dyn Curve, scale: f64, samples: u64, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r0 = scale;
    let batches = 32;
    let per = samples / batches;
    let mut means = Vec::new();
    for _ in 0..batches {
        let mut acc = 0.0;
        for _ in 0..per {
            let t: [f64; 3] = [rng.random(), rng.random(), rng.random()];
            let ordered = (t[1] - t[0]).rem_euclid(1.0) < (t[2] - t[0]).rem_euclid(1.0);
            let k = [c.at(t[0]), c.at(t[1]), c.at(t[2])];
            let center = k[rng.random_range(0..3)].0;
            let r = r0 * (0.5 * PI * rng.random::<f64>()).tan();
            let z = 2.0 * rng.random::<f64>() - 1.0;
            let phi = TAU * rng.random::<f64>();
            let s = (1.0 - z * z).sqrt();
            let x = [
                center[0] + r * s * phi.cos(),
                center[1] + r * s * phi.sin(),
                center[2] + r * z,
            ];
            if !ordered {
                continue;
            }
            let radial = |d: f64| 2.0 * r0 / (PI * (r0 * r0 + d * d) * 4.0 * PI * d * d);
            let q: f64 = k.iter().map(|(p, _)| radial(norm(sub(x, *p)))).sum::<f64>() / 3.0;
            // rows a_k = (v_k x (x - p_k)) / (4 pi |x - p_k|^3); integrand -det
            let rows: Vec<V3> = k
                .iter()
                .map(|(p, v)| {
                    let f = sub(x, *p);
                    let r = norm(f);
                    let m = cross(*v, f);
                    let s = 1.0 / (4.0 * PI * r * r * r);
                    [m[0] * s, m[1] * s, m[2] * s]
                })
                .collect();
            acc += -dot(rows[0], cross(rows[1], rows[2])) / q;
        }
        means.push(acc / per as f64);
    }
    let mean = means.iter().sum::<f64>() / batches as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (batches - 1) as f64;
    (mean, (var / batches as f64).sqrt())
}
