//! Acceptance run: one `PASS` or `FAIL` line per criterion, with the
//! measured quantities. Exits with status 1 if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use graphflow::cocycle::{coordinates, delta_matrix, q};
use graphflow::graph::examples;
use graphflow::integrator::{
    linking_integral, order_two_cocycle, sln_integral, v2_breakdown, v2_invariant,
};
use graphflow::knot::{
    a2_oracle, bundled_curve, casson_invariant, conway_polynomial, project_to_diagram,
    DEFAULT_DIRECTIONS,
};
use graphflow::{
    delta, delta_sum, enumerate, verify_cocycle, DecoratedGraph, Flavor, GraphSum,
    IntegralEstimate, Limits,
};
use num_rational::BigRational;
use num_traits::{Signed, Zero};

const SAMPLES: u64 = 10_000_000;

struct Report {
    failures: usize,
}

impl Report {
    fn check(
        &mut self,
        id: u32,
        name: &str,
        f: impl FnOnce() -> Result<String, String>,
        budget: Duration,
    ) {
        let start = Instant::now();
        let outcome = f();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if elapsed <= budget => (true, d),
            Ok(d) => (false, format!("{d}; over the time budget of {budget:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            self.failures += 1;
        }
        let tag = if ok { "PASS" } else { "FAIL" };
        println!(
            "{tag} [{id}] {name}: {detail} ({:.2} s)",
            elapsed.as_secs_f64()
        );
    }
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn abs_coeff(s: &GraphSum, g: &DecoratedGraph) -> BigRational {
    s.coefficient(g).abs()
}

fn sum(terms: &[(DecoratedGraph, BigRational)]) -> GraphSum {
    let mut s = GraphSum::new();
    for (g, c) in terms {
        s.add_graph(g, c.clone());
    }
    s
}

fn manifold_cocycle() -> GraphSum {
    sum(&[
        (examples::manifold_k4(), q(-1, 12)),
        (examples::manifold_double_square(), q(1, 4)),
    ])
}

fn exact_combinatorics() -> Result<String, String> {
    ensure(
        delta(&examples::theta()).is_empty(),
        "delta(theta) is not zero",
    )?;
    let target = examples::manifold_contracted();
    let d1 = delta(&examples::manifold_k4());
    let d2 = delta(&examples::manifold_double_square());
    ensure(
        d1.len() == 1 && abs_coeff(&d1, &target) == q(6, 1),
        format!("delta K4 = {d1}"),
    )?;
    ensure(
        d2.len() == 1 && abs_coeff(&d2, &target) == q(2, 1),
        format!("delta double square = {d2}"),
    )?;
    ensure(
        verify_cocycle(&manifold_cocycle()).unwrap(),
        "manifold combination is not closed",
    )?;
    let (f1, f2) = (examples::knot_fork(), examples::knot_fork_bubble());
    let k1 = delta(&examples::knot_chords());
    let k2 = delta(&examples::knot_tripod());
    let k3 = delta(&examples::knot_bubble());
    ensure(
        k1.len() == 1 && abs_coeff(&k1, &f1) == q(4, 1),
        format!("delta chords = {k1}"),
    )?;
    ensure(
        k2.len() == 2 && abs_coeff(&k2, &f1) == q(3, 1) && abs_coeff(&k2, &f2) == q(3, 1),
        format!("delta tripod = {k2}"),
    )?;
    ensure(
        k3.len() == 1 && abs_coeff(&k3, &f2) == q(2, 1),
        format!("delta bubble = {k3}"),
    )?;
    ensure(
        verify_cocycle(&order_two_cocycle()).unwrap(),
        "knot combination is not closed",
    )?;
    Ok(format!(
        "delta K4 = {d1}, delta chords = {k1}, delta tripod = {k2}, delta bubble = {k3}"
    ))
}

fn delta_squared() -> Result<String, String> {
    let limits = Limits::default();
    let mut checked = 0;
    for flavor in [Flavor::Manifold, Flavor::Knot] {
        for ord in 1..=3 {
            for deg in 0..=2 * ord - 2 {
                for g in enumerate(flavor, ord, deg, true, &limits).map_err(|e| e.to_string())? {
                    let d2 = delta_sum(&delta(&g));
                    ensure(d2.is_empty(), format!("delta^2 {g} = {d2}"))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} graphs, order 1..3, degrees 0..2*ord-2"))
}

fn kernels() -> Result<String, String> {
    let mut out = Vec::new();
    for (flavor, cocycle) in [
        (Flavor::Manifold, manifold_cocycle()),
        (Flavor::Knot, order_two_cocycle()),
    ] {
        let dm = delta_matrix(flavor, 2, &Limits::default()).map_err(|e| e.to_string())?;
        let v = coordinates(&dm.basis0, &cocycle).map_err(|e| e.to_string())?;
        let image = dm.matrix.mul_vec(&v).map_err(|e| e.to_string())?;
        ensure(
            image.iter().all(Zero::is_zero),
            format!("{flavor}: m v != 0"),
        )?;
        out.push(format!(
            "{flavor} {}x{} rank {}",
            dm.matrix.rows(),
            dm.matrix.cols(),
            dm.matrix.rank()
        ));
    }
    Ok(format!("m v = 0 exactly ({})", out.join(", ")))
}

fn linking() -> Result<String, String> {
    let c = |n: &str| bundled_curve(n).unwrap();
    let hopf = linking_integral(&c("hopf_a"), &c("hopf_b"), 1024).map_err(|e| e.to_string())?;
    let apart =
        linking_integral(&c("unlinked_a"), &c("unlinked_b"), 1024).map_err(|e| e.to_string())?;
    let msg = format!("Hopf {:.12}, unlinked {:.3e}", hopf.value, apart.value);
    ensure(
        (hopf.value - 1.0).abs() < 1e-3 && apart.value.abs() < 1e-4,
        msg.clone(),
    )?;
    Ok(msg)
}

fn self_linking() -> Result<String, String> {
    let circle =
        sln_integral(&bundled_curve("circle").unwrap(), 1024).map_err(|e| e.to_string())?;
    let trefoil = bundled_curve("trefoil").unwrap();
    let a = sln_integral(&trefoil, 1024).map_err(|e| e.to_string())?;
    let b = sln_integral(
        &trefoil.reparametrized(0.5).map_err(|e| e.to_string())?,
        1024,
    )
    .map_err(|e| e.to_string())?;
    let (diff, sigma) = a.difference(&b);
    let msg = format!(
        "circle {:.3e}, trefoil {:.10} vs reparametrized {:.10} (diff {diff:.2e}, 3 sigma {:.2e})",
        circle.value,
        a.value,
        b.value,
        3.0 * sigma
    );
    ensure(
        circle.value.abs() < 1e-6 && diff.abs() <= 3.0 * sigma,
        msg.clone(),
    )?;
    Ok(msg)
}

fn j(name: &str, scale: f64, seed: u64) -> Result<IntegralEstimate, String> {
    let k = bundled_curve(name).unwrap().scaled(scale);
    v2_invariant(&k, &order_two_cocycle(), SAMPLES, seed).map_err(|e| e.to_string())
}

fn fmt(e: &IntegralEstimate) -> String {
    format!("{:.5} +- {:.5}", e.value, e.std_error)
}

fn a2_values() -> Result<String, String> {
    let mut out = Vec::new();
    for (name, expected) in [("circle", 0), ("trefoil", 1), ("figure_eight", -1)] {
        let k = bundled_curve(name).unwrap();
        let a2 = casson_invariant(&k, &DEFAULT_DIRECTIONS).map_err(|e| format!("{name}: {e}"))?;
        ensure(
            a2 == expected,
            format!("{name}: a2 = {a2}, expected {expected}"),
        )?;
        for d in DEFAULT_DIRECTIONS {
            let diagram = project_to_diagram(&k, d).map_err(|e| e.to_string())?;
            for c in &diagram.crossings {
                let rotated =
                    a2_oracle(&diagram.rotated(c.under + 1e-9)).map_err(|e| e.to_string())?;
                ensure(
                    rotated == expected,
                    format!("{name}: base-point dependence"),
                )?;
            }
            let conway = conway_polynomial(&diagram).map_err(|e| e.to_string())?;
            ensure(
                conway.coefficient(2) == expected,
                format!("{name}: Conway {conway}"),
            )?;
        }
        out.push(format!("{name} {a2}"));
    }
    Ok(format!(
        "{} over {} directions, all base points, Conway agrees",
        out.join(", "),
        DEFAULT_DIRECTIONS.len()
    ))
}

fn determinism() -> Result<String, String> {
    let k = bundled_curve("trefoil").unwrap();
    let run = |threads: usize| -> Result<String, String> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| e.to_string())?;
        pool.install(|| {
            let v2 =
                v2_breakdown(&k, &order_two_cocycle(), 100_000, 42).map_err(|e| e.to_string())?;
            let sln = sln_integral(&k, 256).map_err(|e| e.to_string())?;
            serde_json::to_string(&(v2, sln)).map_err(|e| e.to_string())
        })
    };
    let first = run(1)?;
    ensure(first == run(1)?, "repeated run differs")?;
    ensure(first == run(4)?, "run with 4 threads differs")?;
    Ok(format!(
        "{} bytes identical across repeats and thread counts",
        first.len()
    ))
}

fn main() -> ExitCode {
    let mut r = Report { failures: 0 };
    r.check(
        1,
        "exact coboundaries",
        exact_combinatorics,
        Duration::from_secs(1),
    );
    r.check(
        2,
        "delta squared vanishes",
        delta_squared,
        Duration::from_secs(60),
    );
    r.check(
        3,
        "kernels contain the cocycles",
        kernels,
        Duration::from_secs(60),
    );
    r.check(4, "linking integrals", linking, Duration::from_secs(30));
    r.check(
        5,
        "self-linking integral",
        self_linking,
        Duration::from_secs(60),
    );

    let start = Instant::now();
    let estimates = (|| -> Result<_, String> {
        Ok((
            j("circle", 1.0, 1)?,
            j("trefoil", 1.0, 2)?,
            j("trefoil_perturbed", 1.0, 3)?,
            j("trefoil", 2.0, 4)?,
        ))
    })();
    let spent = start.elapsed();
    let (unknot, trefoil, perturbed, scaled) = match estimates {
        Ok(e) => (Some(e.0), Some(e.1), Some(e.2), Some(e.3)),
        Err(e) => {
            println!("integration failed: {e}");
            (None, None, None, None)
        }
    };
    let ready = unknot.is_some();
    r.check(
        6,
        "order-two invariant separates trefoil from unknot",
        || {
            let (u, t) = (unknot.ok_or("no estimate")?, trefoil.ok_or("no estimate")?);
            let (d, s) = t.difference(&u);
            let msg = format!(
                "J(trefoil) {} - J(unknot) {} = {d:.5} +- {s:.5}, {} samples per term, integration {:.1} s",
                fmt(&t),
                fmt(&u),
                SAMPLES,
                spent.as_secs_f64()
            );
            ensure((d - 1.0).abs() <= 0.05, msg.clone())?;
            Ok(msg)
        },
        Duration::from_secs(1800).saturating_sub(spent),
    );
    r.check(
        7,
        "invariance across embeddings and scaling",
        || {
            let (t, p, s) = (trefoil.ok_or("no estimate")?, perturbed.ok_or("no estimate")?, scaled.ok_or("no estimate")?);
            let (d1, s1) = t.difference(&p);
            let (d2, s2) = t.difference(&s);
            let msg = format!(
                "perturbed {} (diff {d1:.5}, 3 sigma {:.5}), scaled x2 {} (diff {d2:.5}, 3 sigma {:.5})",
                fmt(&p),
                3.0 * s1,
                fmt(&s),
                3.0 * s2
            );
            ensure(ready && d1.abs() <= 3.0 * s1 && d2.abs() <= 3.0 * s2, msg.clone())?;
            Ok(msg)
        },
        Duration::MAX,
    );
    r.check(
        8,
        "Casson invariant from diagrams",
        a2_values,
        Duration::from_secs(60),
    );
    r.check(
        9,
        "bit-identical reruns",
        determinism,
        Duration::from_secs(120),
    );

    if r.failures == 0 {
        println!("acceptance: all criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {} criteria failed", r.failures);
        ExitCode::FAILURE
    }
}
