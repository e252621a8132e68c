// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits nonzero on any FAIL.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;

use decogate::bounds::{assess, required_tau, ShorScenario, DEFAULT_FEASIBILITY_THRESHOLD};
use decogate::config::RunConfig;
use decogate::dynamics::{compare_evolutions, HamiltonianSpec};
use decogate::fidelity::{fidelity_one_bit, fidelity_two_bit, Method};
use decogate::gates::{one_bit_unitary, GateContext};
use decogate::statemath::{ComplexMatrix, DensityMatrix};
use decogate::sweep::{fit_loglog_slope, run_sweep, Gate, SweepMethod, SweepSpec};
use decogate::validation::{
    monte_carlo_checks, quadrature_checks, run_validation, unitary_limit_checks, Check,
    ValidationOptions, DEFAULT_SAMPLES, ORACLE_GRID,
};

type Outcome = Result<String, String>;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn checks_outcome(checks: &[Check]) -> Outcome {
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("{} / {}: {}", c.group, c.name, c.detail))
        .collect();
    ensure(
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} checks", checks.len())
        } else {
            failed.join("; ")
        },
    )
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn unitary_limit() -> Outcome {
    let ctx = GateContext::new(1e5, 0.1, 20, 0.0, 0.0).map_err(|e| e.to_string())?;
    let one =
        fidelity_one_bit(PI / ctx.omega, &ctx, Method::Analytic).map_err(|e| e.to_string())?;
    let two = fidelity_two_bit(&ctx, Method::Analytic).map_err(|e| e.to_string())?;
    let worst = (one.fidelity - 1.0).abs().max((two.fidelity - 1.0).abs());
    ensure(worst <= 1e-12, format!("max |F-1| = {worst:.1e}"))?;
    checks_outcome(&unitary_limit_checks())
}

fn closed_forms_vs_oracles() -> Outcome {
    let mut checks = quadrature_checks(&ORACLE_GRID);
    checks.extend(monte_carlo_checks(&ORACLE_GRID, DEFAULT_SAMPLES, 2026));
    checks_outcome(&checks)
}

fn one_bit_reference_regime() -> Outcome {
    let ctx = GateContext::new(1e5, 0.1, 20, 0.0, 1e-8).map_err(|e| e.to_string())?;
    let t = PI / ctx.omega;
    let analytic = fidelity_one_bit(t, &ctx, Method::Analytic).map_err(|e| e.to_string())?;
    let mc = fidelity_one_bit(
        t,
        &ctx,
        Method::MonteCarlo {
            samples: 10_000_000,
            seed: 1,
        },
    )
    .map_err(|e| e.to_string())?;
    let infidelity = analytic.one_minus_f;
    let z = (mc.fidelity - analytic.fidelity).abs() / mc.stderr;
    let detail = format!(
        "1-F = {infidelity:.4e}, |analytic-mc| = {z:.2} sigma, margin over 1e-6 = {:.0}x",
        infidelity / 1e-6
    );
    ensure(
        (infidelity - 5.886e-4).abs() < 5e-7 && z < 5.0 && infidelity > 100.0 * 1e-6,
        detail,
    )
}

fn loglog_structure() -> Outcome {
    let base = GateContext::new(1e5, 0.1, 20, 0.0, 0.0).map_err(|e| e.to_string())?;
    let mut details = Vec::new();
    let mut ok = true;
    for gate in [Gate::OneBit, Gate::TwoBit] {
        let f = gate.frequency(&base);
        let spec = SweepSpec {
            gate,
            tau_min: 1e-5 / f,
            tau_max: 1e-3 / f,
            points: 20,
            context: base,
            method: SweepMethod::Analytic,
            mc_samples: 0,
        };
        let rows = run_sweep(&spec, 0).map_err(|e| e.to_string())?;
        let fit = fit_loglog_slope(&rows).map_err(|e| e.to_string())?;
        ok &= (fit.slope - 2.0).abs() <= 0.05 && fit.r_squared > 0.9999;
        details.push(format!(
            "{gate}: slope {:.4}, r2 {:.7}",
            fit.slope, fit.r_squared
        ));
    }
    ensure(ok, details.join(", "))
}

fn shor_verdict() -> Outcome {
    let cfg = RunConfig::default();
    let s = ShorScenario::new(4, cfg.omega, cfg.eta, cfg.tau).map_err(|e| e.to_string())?;
    let r = assess(&s, DEFAULT_FEASIBILITY_THRESHOLD).map_err(|e| e.to_string())?;
    // N_a = 20, Ω' = 1e4/√20, γ = 2Ω'²τ, op = 4π/Ω', ops = 40³.
    let omega_prime = 1e4 / 20f64.sqrt();
    let gamma = 2.0 * 5e6 * 1e-8;
    let total = 64_000.0 * 4.0 * PI / omega_prime;
    let ok = r.n_ions == 20
        && rel(r.gamma, gamma) < 1e-9
        && rel(r.gamma, 0.1) < 1e-9
        && rel(r.decoherence_time, 10.0) < 1e-9
        && rel(r.total_time, total) < 1e-9
        && rel(r.total_time, 359.670_514_229_27) < 1e-9
        && rel(r.ratio, total * gamma) < 1e-9
        && !r.feasible;
    ensure(
        ok,
        format!(
            "gamma {} /s, decoherence {} s, total {:.6e} s, ratio {:.4}, feasible {}",
            r.gamma, r.decoherence_time, r.total_time, r.ratio, r.feasible
        ),
    )
}

fn required_stability() -> Outcome {
    let tau = required_tau(1e5, 1e-6).map_err(|e| e.to_string())?;
    let improvement = 1e-8 / tau;
    ensure(
        (1e-11..=3e-11).contains(&tau) && improvement >= 300.0,
        format!("tau = {tau:.4e} s, improvement over 1e-8 s = {improvement:.0}x"),
    )
}

fn truncation_breakdown() -> Outcome {
    let omega = 1e5;
    let h = HamiltonianSpec::new(one_bit_unitary_generator(omega)).map_err(|e| e.to_string())?;
    let rho0 = DensityMatrix::basis_state(2, 0);
    let t_end = PI / omega;
    let grid: Vec<f64> = (1..=40).map(|k| t_end * k as f64 / 40.0).collect();
    let small =
        compare_evolutions(&h, &rho0, &grid, 1e-3 / omega, None).map_err(|e| e.to_string())?;
    let large =
        compare_evolutions(&h, &rho0, &grid, 1e-1 / omega, None).map_err(|e| e.to_string())?;
    let (d_small, d_large) = (small.max_trace_distance(), large.max_trace_distance());
    ensure(
        d_small < 1e-5 && d_large > 1e-3,
        format!("max trace distance {d_small:.2e} at 1e-3, {d_large:.2e} at 1e-1"),
    )
}

/// Carrier Hamiltonian `(Ω/2)(σ₊ + σ₋)` at φ = 0, checked against the
/// generator of the library's pulse unitary.
fn one_bit_unitary_generator(omega: f64) -> ComplexMatrix {
    let half = C64::new(omega / 2.0, 0.0);
    let h = ComplexMatrix::from_rows(&[
        vec![C64::new(0.0, 0.0), half],
        vec![half, C64::new(0.0, 0.0)],
    ])
    .expect("square");
    let eps = 1e-6;
    let u = one_bit_unitary(eps, 0.0);
    let generator = (&u - &ComplexMatrix::identity(2)).scale(C64::new(0.0, omega / eps));
    assert!(
        generator.max_abs_diff(&h) < 1e-3 * omega,
        "carrier Hamiltonian mismatch"
    );
    h
}

fn structural_invariants() -> Outcome {
    let report = run_validation(&ValidationOptions::default());
    checks_outcome(&report.checks)
}

fn main() -> ExitCode {
    let criteria = [
        Criterion {
            id: 1,
            title: "unitary-limit exactness",
            budget: Duration::from_secs(1),
            run: unitary_limit,
        },
        Criterion {
            id: 2,
            title: "closed forms vs oracles",
            budget: Duration::from_secs(120),
            run: closed_forms_vs_oracles,
        },
        Criterion {
            id: 3,
            title: "one-bit reference regime",
            budget: Duration::from_secs(120),
            run: one_bit_reference_regime,
        },
        Criterion {
            id: 4,
            title: "log-log slope structure",
            budget: Duration::from_secs(30),
            run: loglog_structure,
        },
        Criterion {
            id: 5,
            title: "four-bit factoring verdict",
            budget: Duration::from_secs(1),
            run: shor_verdict,
        },
        Criterion {
            id: 6,
            title: "required laser stability",
            budget: Duration::from_secs(1),
            run: required_stability,
        },
        Criterion {
            id: 7,
            title: "master-equation truncation",
            budget: Duration::from_secs(30),
            run: truncation_breakdown,
        },
        Criterion {
            id: 8,
            title: "structural invariants",
            budget: Duration::from_secs(120),
            run: structural_invariants,
        },
    ];
    let mut failures = 0;
    for c in criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (passed, detail) = match outcome {
            Ok(d) if elapsed <= c.budget => (true, d),
            Ok(d) => (false, format!("{d}; over time budget {:?}", c.budget)),
            Err(d) => (false, d),
        };
        failures += usize::from(!passed);
        println!(
            "criterion {} {:<28} {}  ({:.2?})  {}",
            c.id,
            c.title,
            if passed { "PASS" } else { "FAIL" },
            elapsed,
            detail
        );
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
