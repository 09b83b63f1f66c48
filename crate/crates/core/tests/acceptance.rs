//! Acceptance criteria AC1–AC10. Each criterion runs alone, in order, so its
//! wall-clock time is measured without contention; one line is printed per
//! criterion and the process fails if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sonic_patch::boundary::{compute_trace, region_corners, BoundarySpec};
use sonic_patch::gas::{eigenvalues, eigenvalues_from_velocity, velocity_from_angles, AngleState, GasParams};
use sonic_patch::hodograph::SolverParams;
use sonic_patch::pipeline::{run_pipeline, PipelineRun, RunOptions};
use sonic_patch::verify::{
    analytic_oracle_residuals, convergence_study, holder_fit, manufactured_problem, OracleField, CLOSED_FORM_RESIDUAL_TOL, HODOGRAPH_EXPONENT_FLOOR,
    MANUFACTURED_RATIO_RANGE, ORACLE_RESIDUAL_TOL, ORACLE_SELF_TOL, PHYSICAL_EXPONENT_FLOOR,
};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn solve(dt: f64) -> Result<PipelineRun, String> {
    run_pipeline(&BoundarySpec::reference(), &GasParams::air(), &RunOptions::new(SolverParams::new(dt))).map_err(|e| e.to_string())
}

fn ac1_boundary_identity() -> Outcome {
    let gas = GasParams::air();
    let mut worst = 0.0f64;
    for spec in [BoundarySpec::reference(), BoundarySpec::reference().with_samples(2049).unwrap()] {
        let trace = compute_trace(&spec, &gas).map_err(|e| e.to_string())?;
        worst = worst.max(trace.identity_defect());
    }
    ensure(worst < 1e-12, format!("identity defect {worst:e}"))?;
    Ok(format!("max |a + b - 2 sqrt(1 - varpi^2) d| = {worst:e}"))
}

fn ac2_eigenvalues() -> Outcome {
    let gas = GasParams::air();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut worst, mut compared, mut vertical) = (0.0f64, 0usize, 0usize);
    for _ in 0..1000 {
        let theta = rng.gen_range(-1.5..1.5);
        let varpi = rng.gen_range(0.05..0.999);
        let angles = AngleState::new(theta, varpi, &gas).map_err(|e| e.to_string())?;
        let vel = velocity_from_angles(theta, varpi, &gas).map_err(|e| e.to_string())?;
        let (ap, am) = eigenvalues(&angles);
        let (lp, lm) = eigenvalues_from_velocity(vel.u, vel.v, vel.c);
        for (a, l) in [(ap, lp), (am, lm)] {
            match (a.value(), l.value()) {
                (Some(a), Some(l)) => {
                    worst = worst.max((a - l).abs() / (1.0 + l.abs()));
                    compared += 1;
                }
                _ => vertical += 1,
            }
        }
    }
    ensure(worst < 1e-10, format!("eigenvalue defect {worst:e}"))?;
    ensure(compared >= 1990, format!("only {compared} finite slopes compared"))?;
    Ok(format!("{compared} slopes, max relative defect {worst:e}, {vertical} vertical"))
}

fn ac3_oracle() -> Outcome {
    let gas = GasParams::air();
    let field = OracleField::random(1000, 3, &gas);
    let rep = analytic_oracle_residuals(&field, &gas);
    ensure(rep.samples == 1000, format!("{} samples", rep.samples))?;
    ensure(rep.angle_residual < ORACLE_RESIDUAL_TOL, format!("angle-form residual {:e}", rep.angle_residual))?;
    ensure(rep.self_test_passed(ORACLE_SELF_TOL), format!("self test: {rep:?}"))?;
    Ok(format!(
        "angle-form residual {:e}; euler {:e}, irrotational {:e}, bernoulli {:e}",
        rep.angle_residual, rep.euler_residual, rep.irrotational_residual, rep.bernoulli_residual
    ))
}

fn ac4_bounds() -> Outcome {
    let mut notes = Vec::new();
    for dt in [4e-3, 2e-3, 1e-3] {
        let run = solve(dt)?;
        let d = &run.diagnostics;
        let c = &d.constants;
        let gas = GasParams::air();
        let t0 = run.geometry.t0;
        let k0 = (gas.kappa + 2.0) / (gas.kappa - gas.kappa * t0 * t0);
        ensure((c.k0 - k0).abs() <= 1e-12 * k0, format!("k0 {} vs {k0}", c.k0))?;
        let (lo, hi) = (c.m_bar_0 / 2.0, 2.0 * k0.exp() * c.big_m_bar_0);
        let sol = &run.solution;
        let mut count = 0usize;
        for k in 0..=sol.mesh.last_marched() {
            for (&u, &v) in sol.u_bar[k].iter().zip(&sol.v_bar[k]) {
                ensure(u > 0.0 && v > 0.0, format!("non-positive value at dt = {dt}, level {k}"))?;
                ensure(u >= lo && u <= hi && v >= lo && v <= hi, format!("bound violated at dt = {dt}, level {k}: ({u}, {v}) outside [{lo}, {hi}]"))?;
                count += 1;
            }
        }
        ensure(d.bound_violations == 0 && d.positivity_violations == 0, format!("diagnostics report violations at dt = {dt}"))?;
        notes.push(format!("dt={dt}: {count} nodes in [{lo:.4}, {hi:.3e}]"));
    }
    Ok(notes.join("; "))
}

fn ac5_closure() -> Outcome {
    let mut defects = Vec::new();
    let mut notes = Vec::new();
    for dt in [4e-3, 2e-3, 1e-3] {
        let run = solve(dt)?;
        let sol = &run.solution;
        let line = sol.sonic.as_ref().ok_or("not closed")?;
        let last = sol.mesh.last_marched();
        let t_min = sol.mesh.levels[last];
        let w_max = sol.w_bar.iter().flatten().fold(0.0f64, |m, w| m.max(w.abs()));
        let ratio = sol.u_bar[last].iter().zip(&sol.v_bar[last]).map(|(u, v)| (u - v).abs() / t_min).fold(0.0, f64::max) / (1.5 * w_max);
        ensure(ratio <= 1.0, format!("|U-V|/t_min exceeds 1.5 max|W| at dt = {dt} (ratio {ratio})"))?;
        ensure(line.w_bar.iter().all(|w| w.is_finite()), "non-finite W on t = 0")?;
        let seed = run.trace.samples().iter().fold(0.0f64, |m, s| m.max(s.w_bar_bnd.abs()));
        let w0 = line.w_bar.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        ensure(w0 <= 3.0 * seed, format!("max |W(0,.)| = {w0} exceeds 3x the seed scale {seed}"))?;
        defects.push(line.closure_defect);
        notes.push(format!("dt={dt}: ratio {ratio:.3}, defect {:.3e}, W0/seed {:.3}", line.closure_defect, w0 / seed));
    }
    ensure(defects.windows(2).all(|w| w[1] < w[0]), format!("closure defect not decreasing: {defects:?}"))?;
    Ok(notes.join("; "))
}

fn ac6_manufactured() -> Outcome {
    let gas = GasParams::air();
    let trace = compute_trace(&BoundarySpec::reference(), &gas).map_err(|e| e.to_string())?;
    let geom = region_corners(&trace, &gas).map_err(|e| e.to_string())?;
    let rep = manufactured_problem(&trace, &geom, &gas, 64, 0.02).map_err(|e| e.to_string())?;
    let (lo, hi) = MANUFACTURED_RATIO_RANGE;
    ensure(rep.ratio >= lo && rep.ratio <= hi, format!("ratio {}", rep.ratio))?;
    Ok(format!("error ratio {:.4} (order {:.3}), wrong-sign error {:.1e}x larger", rep.ratio, rep.order, rep.wrong_sign_factor))
}

fn ac7_residual() -> Outcome {
    let table = convergence_study(&BoundarySpec::reference(), &GasParams::air(), 3, 8e-3).map_err(|e| e.to_string())?;
    let e = table.entry("residual").ok_or("no residual entry")?;
    ensure(e.monotone && e.min_order >= 1.0, format!("residual orders {:?}", e.orders))?;
    let worst = table.rows.iter().map(|r| r.closed_form_residual).fold(0.0, f64::max);
    ensure(worst < CLOSED_FORM_RESIDUAL_TOL, format!("closed-form residual {worst:e}"))?;
    let orders: Vec<String> = e.orders.iter().map(|o| format!("{o:.3}")).collect();
    Ok(format!("discrete residual orders [{}]; closed-form max {worst:e}", orders.join(", ")))
}

fn ac8_geometry() -> Outcome {
    let run = solve(1e-3)?;
    let mut interior = 0usize;
    for node in run.patch.iter().filter(|n| n.t > 0.0) {
        ensure(node.jacobian > 0.0, format!("j = {} at char {} t = {}", node.jacobian, node.char_id, node.t))?;
    }
    let last = run.patch.levels.len() - 1;
    for (k, row) in run.patch.nodes.iter().enumerate() {
        // interior: off the wall, off the E'-characteristic, off t = 0
        if k == last || row.len() < 3 {
            continue;
        }
        for n in &row[1..row.len() - 1] {
            let g = &n.grad;
            let inner = g.theta_x * g.varpi_y - g.theta_y * g.varpi_x;
            ensure(inner < 0.0, format!("inner product {inner} at char {} t = {}", n.char_id, n.t))?;
            interior += 1;
        }
    }
    for (name, curve) in [("PD", &run.curves.pd), ("DE", &run.curves.de)] {
        ensure(curve.windows(2).all(|w| w[1].theta < w[0].theta), format!("theta not strictly decreasing along {name}"))?;
    }
    ensure(run.checks.failures.is_empty(), format!("{:?}", run.checks.failures))?;
    let table = convergence_study(&BoundarySpec::reference(), &GasParams::air(), 3, 8e-3).map_err(|e| e.to_string())?;
    let e = table.entry("de_slope_defect").ok_or("no slope entry")?;
    ensure(e.monotone && e.min_order >= 1.0, format!("slope defect orders {:?}", e.orders))?;
    let orders: Vec<String> = e.orders.iter().map(|o| format!("{o:.3}")).collect();
    Ok(format!("min j {:.3e}; {interior} interior inner products < 0; DE slope orders [{}]", run.checks.min_jacobian, orders.join(", ")))
}

fn ac9_holder() -> Outcome {
    let samples: Vec<(f64, f64)> = (0..=512).map(|i| i as f64 / 512.0).map(|t| (t, t.cbrt())).collect();
    let synthetic = holder_fit(&samples, 1.0 / 3.0).map_err(|e| e.to_string())?;
    ensure((synthetic.exponent - 1.0 / 3.0).abs() <= 0.01, format!("synthetic exponent {}", synthetic.exponent))?;
    let run = solve(1e-3)?;
    let hodo = run.diagnostics.holder_exponent("u_bar").ok_or("no u_bar fit")?;
    ensure(hodo >= HODOGRAPH_EXPONENT_FLOOR, format!("u_bar exponent {hodo}"))?;
    let fits: Vec<f64> = run.checks.holder_pd.iter().map(|h| h.fit.as_ref().map_or(f64::NAN, |f| f.exponent)).collect();
    ensure(fits.len() == 4 && fits.iter().all(|&e| e >= PHYSICAL_EXPONENT_FLOOR), format!("physical exponents {fits:?}"))?;
    let phys = fits.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(format!("synthetic {:.4}; u_bar(0,.) {hodo:.3}; physical gradients min {phys:.3}", synthetic.exponent))
}

fn ac10_wall_reproduction() -> Outcome {
    let spec = BoundarySpec::reference();
    let mut notes = Vec::new();
    for dt in [1.6e-2, 8e-3, 4e-3] {
        let run = solve(dt)?;
        let mut worst = 0.0f64;
        for p in &run.curves.pe {
            let theta = spec.wall.dphi(p.x).atan();
            worst = worst.max((p.y - spec.wall.phi(p.x)).abs()).max((p.theta - theta).abs()).max((p.varpi - spec.varpi.varpi(p.x)).abs());
        }
        ensure(worst <= 1e-12, format!("wall mismatch {worst:e} at dt = {dt}"))?;
        ensure(run.checks.pe_error <= 1e-12, format!("reported wall error {:e}", run.checks.pe_error))?;
        notes.push(format!("dt={dt}: {worst:e}"));
    }
    Ok(notes.join("; "))
}

fn main() -> ExitCode {
    let criteria: [(&str, &str, Duration, fn() -> Outcome); 10] = [
        ("AC1", "boundary identity", Duration::from_secs(1), ac1_boundary_identity),
        ("AC2", "eigenvalue equivalence", Duration::from_secs(1), ac2_eigenvalues),
        ("AC3", "analytic oracle", Duration::from_secs(5), ac3_oracle),
        ("AC4", "a-priori bounds", Duration::from_secs(30), ac4_bounds),
        ("AC5", "degenerate-line closure", Duration::from_secs(30), ac5_closure),
        ("AC6", "manufactured-solution order", Duration::from_secs(10), ac6_manufactured),
        ("AC7", "physical residual convergence", Duration::from_secs(60), ac7_residual),
        ("AC8", "geometry invariants", Duration::from_secs(30), ac8_geometry),
        ("AC9", "Hölder diagnostics", Duration::from_secs(30), ac9_holder),
        ("AC10", "wall reproduction", Duration::from_secs(1), ac10_wall_reproduction),
    ];
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let result = run();
        let elapsed = start.elapsed();
        let verdict = match result {
            Ok(detail) if elapsed <= limit => format!("PASS {id} {name} ({:.2} s): {detail}", elapsed.as_secs_f64()),
            Ok(detail) => format!("FAIL {id} {name} ({:.2} s > {:.0} s limit): {detail}", elapsed.as_secs_f64(), limit.as_secs_f64()),
            Err(msg) => format!("FAIL {id} {name} ({:.2} s): {msg}", elapsed.as_secs_f64()),
        };
        if verdict.starts_with("FAIL") {
            failed += 1;
        }
        println!("{verdict}");
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
