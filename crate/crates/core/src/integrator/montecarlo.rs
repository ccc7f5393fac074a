use std::f64::consts::{PI, TAU};

use nalgebra::Vector3;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::forms::{gauss_two_form, wedge_top, ConfigPoint, Configuration, MAX_DIM};
use super::{IntegralEstimate, IntegratorError, Method};
use crate::cocycle::{q, verify_cocycle};
use crate::graph::{examples, format_rational, DecoratedGraph, Flavor, GraphSum};
use crate::knot::curve::{neumaier, Neumaier};
use crate::knot::{KnotCurve, Tolerances};

/// Tuning of the Monte Carlo estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McSettings {
    /// Number of independent batches used for the error estimate.
    pub batches: usize,
    /// Kernel scale as a fraction of the curve diameter.
    pub r0_factor: f64,
    /// Collision guard as a fraction of the curve diameter.
    pub eps_coll_factor: f64,
}

impl Default for McSettings {
    fn default() -> Self {
        McSettings {
            batches: 64,
            r0_factor: 0.1,
            eps_coll_factor: 1e-9,
        }
    }
}

/// Consecutive rejections after which a configuration is reported as stuck.
const MAX_REJECTIONS: usize = 10_000;

struct Sampler<'a> {
    curve: &'a KnotCurve,
    n_ext: usize,
    edges: Vec<(usize, usize)>,
    /// For each internal vertex, the knot vertices its kernel mixes over.
    centers: Vec<Vec<usize>>,
    simplex_density: f64,
    r0: f64,
    eps_coll: f64,
    dim: usize,
}

impl Sampler<'_> {
    /// One weighted sample, or `None` when the guard rejects it.
    fn draw(&self, rng: &mut ChaCha8Rng) -> Result<Option<f64>, IntegratorError> {
        let n = self.n_ext;
        let t1: f64 = rng.random();
        let mut offsets: Vec<f64> = (1..n).map(|_| rng.random()).collect();
        offsets.sort_by(f64::total_cmp);
        let mut points: Vec<ConfigPoint> = std::iter::once(t1)
            .chain(offsets.iter().map(|u| (t1 + u).fract()))
            .map(|t| {
                let (p, v) = self.curve.frame(t);
                ConfigPoint::on_knot(p, v)
            })
            .collect();
        let mut density = self.simplex_density;
        for centers in &self.centers {
            let c = centers[rng.random_range(0..centers.len())];
            let u: f64 = rng.random();
            let r = self.r0 * u / (1.0 - u);
            let z: f64 = 2.0 * rng.random::<f64>() - 1.0;
            let phi: f64 = TAU * rng.random::<f64>();
            let s = (1.0 - z * z).max(0.0).sqrt();
            let x = points[c].position + Vector3::new(s * phi.cos(), s * phi.sin(), z) * r;
            let q: f64 = centers
                .iter()
                .map(|&c| self.kernel((x - points[c].position).norm()))
                .sum::<f64>()
                / centers.len() as f64;
            density *= q;
            points.push(ConfigPoint::free(x));
        }
        let too_close = self
            .edges
            .iter()
            .any(|&(i, j)| (points[i].position - points[j].position).norm() < self.eps_coll);
        if too_close || !density.is_finite() {
            return Ok(None);
        }
        let conf = Configuration::new(points, self.eps_coll)?;
        let forms = self
            .edges
            .iter()
            .map(|&(i, j)| gauss_two_form(&conf, i, j))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Some(wedge_top(&forms, self.dim)? / density))
    }

    /// Spatial density of a point at distance `r` from a kernel center.
    fn kernel(&self, r: f64) -> f64 {
        self.r0 / (4.0 * PI * r * r * (self.r0 + r).powi(2))
    }

    fn batch(&self, seed: u64, index: usize, count: u64) -> Result<f64, IntegratorError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let mut acc = Neumaier::default();
        let mut done = 0;
        let mut rejected = 0;
        while done < count {
            match self.draw(&mut rng)? {
                Some(w) => {
                    acc.add(w);
                    done += 1;
                    rejected = 0;
                }
                None => {
                    rejected += 1;
                    if rejected > MAX_REJECTIONS {
                        return Err(IntegratorError::CoincidentPoints {
                            i: 0,
                            j: 0,
                            distance: self.eps_coll,
                        });
                    }
                }
            }
        }
        Ok(acc.sum())
    }
}

fn check_graph(g: &DecoratedGraph) -> Result<(), IntegratorError> {
    let unsupported = |msg: &str| Err(IntegratorError::UnsupportedGraph(format!("{g}: {msg}")));
    if g.flavor() != Flavor::Knot {
        return unsupported("not a knot graph");
    }
    if !g.is_trivalent() {
        return unsupported("not trivalent");
    }
    if g.has_internal_loop() {
        return unsupported("has an internal loop");
    }
    if g.n_vertices() > 4 || g.n_ext() + 3 * g.n_int() > MAX_DIM {
        return unsupported("too many vertices");
    }
    Ok(())
}

/// Monte Carlo estimate of the configuration-space integral of a loop-free
/// trivalent knot graph with the default [`McSettings`].
pub fn a_gamma_mc(
    g: &DecoratedGraph,
    k: &KnotCurve,
    n_samples: u64,
    seed: u64,
) -> Result<IntegralEstimate, IntegratorError> {
    a_gamma_mc_with(g, k, n_samples, seed, &McSettings::default())
}

/// Knot parameters are drawn uniformly from the cyclically ordered tuples
/// `t_1 < ... < t_n` (starting anywhere on the circle). Each internal
/// vertex is drawn around one of its knot neighbours with radial law
/// `r = r0 u / (1 - u)`.
pub fn a_gamma_mc_with(
    g: &DecoratedGraph,
    k: &KnotCurve,
    n_samples: u64,
    seed: u64,
    settings: &McSettings,
) -> Result<IntegralEstimate, IntegratorError> {
    check_graph(g)?;
    let batches = settings.batches;
    if batches < 2 || n_samples < batches as u64 {
        return Err(IntegratorError::InvalidParams(format!(
            "need at least {batches} samples and 2 batches"
        )));
    }
    k.validate(&Tolerances::default())?;
    let diameter = k.diameter();
    let n_ext = g.n_ext();
    let centers = (n_ext + 1..=g.n_vertices())
        .map(|v| {
            let mut c: Vec<usize> = g
                .edges()
                .iter()
                .filter_map(|&(a, b)| match (a == v, b == v) {
                    (true, _) if g.is_external(b) => Some(b - 1),
                    (_, true) if g.is_external(a) => Some(a - 1),
                    _ => None,
                })
                .collect();
            c.sort_unstable();
            c.dedup();
            if c.is_empty() {
                c = (0..n_ext).collect();
            }
            c
        })
        .collect();
    let sampler = Sampler {
        curve: k,
        n_ext,
        edges: g.edges().iter().map(|&(a, b)| (a - 1, b - 1)).collect(),
        centers,
        simplex_density: (1..n_ext).map(|x| x as f64).product(),
        r0: settings.r0_factor * diameter,
        eps_coll: settings.eps_coll_factor * diameter,
        dim: n_ext + 3 * g.n_int(),
    };
    let per = n_samples / batches as u64;
    let extra = n_samples % batches as u64;
    let counts: Vec<u64> = (0..batches as u64)
        .map(|b| per + u64::from(b < extra))
        .collect();
    let sums = counts
        .par_iter()
        .enumerate()
        .map(|(b, &count)| sampler.batch(seed, b, count))
        .collect::<Result<Vec<f64>, _>>()?;
    let means: Vec<f64> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &c)| s / c as f64)
        .collect();
    let value = neumaier(sums.iter().copied()) / n_samples as f64;
    let mean_of_means = neumaier(means.iter().copied()) / batches as f64;
    let var = neumaier(means.iter().map(|m| (m - mean_of_means).powi(2))) / (batches - 1) as f64;
    Ok(IntegralEstimate {
        value,
        std_error: (var / batches as f64).sqrt(),
        n_samples,
        seed,
        method: Method::MonteCarlo,
    })
}

/// `1/4 (chords) - 1/3 (tripod) + 1/2 (bubble)`: the order-two knot cocycle.
pub fn order_two_cocycle() -> GraphSum {
    let mut s = GraphSum::from_graph(&examples::knot_chords(), q(1, 4));
    s.add_graph(&examples::knot_tripod(), q(-1, 3));
    s.add_graph(&examples::knot_bubble(), q(1, 2));
    s
}

/// One term of a cocycle evaluation; `estimate` is `None` for terms with an
/// internal loop, which are not integrated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermEstimate {
    pub graph: DecoratedGraph,
    pub coeff: String,
    pub estimate: Option<IntegralEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct V2Estimate {
    pub total: IntegralEstimate,
    pub terms: Vec<TermEstimate>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Seed of term `index`, derived from the run seed.
pub(crate) fn term_seed(seed: u64, index: usize) -> u64 {
    splitmix64(seed ^ splitmix64(index as u64 + 1))
}

/// Overall sign of the invariant relative to the cocycle integrals. Chosen
/// so that the order-two invariant grows with the Casson invariant.
pub const ORIENTATION: f64 = -1.0;

/// Evaluates an even-order trivalent knot cocycle term by term.
///
/// Terms with internal loops are skipped. In flat space such a term carries
/// a doubled internal edge whose forms wedge to zero.
pub fn v2_breakdown(
    k: &KnotCurve,
    cocycle: &GraphSum,
    n_samples: u64,
    seed: u64,
) -> Result<V2Estimate, IntegratorError> {
    let grade = cocycle.grade().map_err(|(a, b)| {
        IntegratorError::UnsupportedGraph(format!("mixed grades {a:?} and {b:?}"))
    })?;
    if let Some((ord, _)) = grade {
        if ord % 2 != 0 {
            return Err(IntegratorError::UnsupportedGraph(format!(
                "odd order {ord}"
            )));
        }
    }
    for (g, _) in cocycle.iter() {
        if g.flavor() != Flavor::Knot || !g.is_trivalent() {
            return Err(IntegratorError::UnsupportedGraph(format!(
                "{g}: not a trivalent knot graph"
            )));
        }
    }
    if !verify_cocycle(cocycle).map_err(|e| IntegratorError::UnsupportedGraph(e.to_string()))? {
        return Err(IntegratorError::NotACocycle);
    }
    let mut terms = Vec::new();
    let mut value = Neumaier::default();
    let mut var = Neumaier::default();
    let mut total_samples = 0;
    for (index, (g, c)) in cocycle.iter().enumerate() {
        let estimate = if g.has_internal_loop() {
            None
        } else {
            let e = a_gamma_mc(g, k, n_samples, term_seed(seed, index))?;
            let cf = ORIENTATION * c.to_f64().expect("finite coefficient");
            value.add(cf * e.value);
            var.add((cf * e.std_error).powi(2));
            total_samples += e.n_samples;
            Some(e)
        };
        terms.push(TermEstimate {
            graph: g.clone(),
            coeff: format_rational(c),
            estimate,
        });
    }
    Ok(V2Estimate {
        total: IntegralEstimate {
            value: value.sum(),
            std_error: var.sum().sqrt(),
            n_samples: total_samples,
            seed,
            method: Method::MonteCarlo,
        },
        terms,
    })
}

/// The cocycle's integral on `k` (errors combined in quadrature).
pub fn v2_invariant(
    k: &KnotCurve,
    cocycle: &GraphSum,
    n_samples: u64,
    seed: u64,
) -> Result<IntegralEstimate, IntegratorError> {
    Ok(v2_breakdown(k, cocycle, n_samples, seed)?.total)
}
