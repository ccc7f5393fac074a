use nalgebra::Vector3;
use rayon::prelude::*;

use super::forms::gauss_density;
use super::{IntegralEstimate, IntegratorError, Method};
use crate::knot::curve::{check_disjoint, neumaier};
use crate::knot::{KnotCurve, Tolerances};

type Samples = Vec<(Vector3<f64>, Vector3<f64>)>;

fn midpoint_samples(k: &KnotCurve, n: usize) -> Samples {
    (0..n)
        .map(|i| k.frame((i as f64 + 0.5) / n as f64))
        .collect()
}

/// Midpoint rule for the Gauss form between points of `a` and `b`,
/// skipping equal indices when `skip_diagonal` is set.
fn midpoint(a: &Samples, b: &Samples, skip_diagonal: bool) -> f64 {
    let n = a.len();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let (p, dp) = a[i];
            neumaier(
                b.iter()
                    .enumerate()
                    .filter(|&(j, _)| !(skip_diagonal && i == j))
                    .map(|(_, (q, dq))| {
                        // coordinates (s, t): the source moves with -dp, the target with dq
                        gauss_density(&(q - p), &-dp, dq)
                    }),
            )
        })
        .collect();
    neumaier(rows) / (n * n) as f64
}

fn check_grid(grid: usize) -> Result<(), IntegratorError> {
    if grid < 8 || !grid.is_multiple_of(2) {
        return Err(IntegratorError::InvalidParams(format!(
            "grid must be even and at least 8, got {grid}"
        )));
    }
    Ok(())
}

/// Richardson step for a second-order rule.
fn richardson(fine: f64, coarse: f64, grid: usize) -> IntegralEstimate {
    IntegralEstimate {
        value: (4.0 * fine - coarse) / 3.0,
        std_error: (fine - coarse).abs() / 3.0,
        n_samples: (grid * grid) as u64,
        seed: 0,
        method: Method::Quadrature,
    }
}

/// Self-linking (writhe) integral over the full torus of parameter pairs.
///
/// Product midpoint rule on `grid x grid` nodes with the diagonal nodes left
/// out, extrapolated against the half grid.
pub fn sln_integral(k: &KnotCurve, grid: usize) -> Result<IntegralEstimate, IntegratorError> {
    check_grid(grid)?;
    k.validate(&Tolerances::default())?;
    let fine = midpoint_samples(k, grid);
    let coarse = midpoint_samples(k, grid / 2);
    Ok(richardson(
        midpoint(&fine, &fine, true),
        midpoint(&coarse, &coarse, true),
        grid,
    ))
}

/// Gauss linking integral of two disjoint closed curves.
pub fn linking_integral(
    k1: &KnotCurve,
    k2: &KnotCurve,
    grid: usize,
) -> Result<IntegralEstimate, IntegratorError> {
    check_grid(grid)?;
    let tol = Tolerances::default();
    k1.validate(&tol)?;
    k2.validate(&tol)?;
    check_disjoint(k1, k2, &tol)?;
    let (a, b) = (midpoint_samples(k1, grid), midpoint_samples(k2, grid));
    let (ca, cb) = (
        midpoint_samples(k1, grid / 2),
        midpoint_samples(k2, grid / 2),
    );
    Ok(richardson(
        midpoint(&a, &b, false),
        midpoint(&ca, &cb, false),
        grid,
    ))
}
