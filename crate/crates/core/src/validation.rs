// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Self-validation suite: every closed form against adaptive quadrature and
//! Monte Carlo, plus structural invariants of the averaged evolution.
//!
//! Each check yields a [`Check`]. Numerical failures inside a check (for
//! example too few samples for an estimator) are reported as failed checks
//! rather than propagated, so a suite run always produces a full table.

#![allow(clippy::redundant_closure_call)]

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64 as C64;
use rand_distr::Distribution;

use crate::decoherence::montecarlo::{mc_average_parallel, parallel_moments, AreaSampler};
use crate::decoherence::{
    averaged_phase_factor, evolve_energy_basis, kernel_integrals, AreaDistribution, Kernels,
    TimeDistribution,
};
use crate::dynamics::{exact_map, HamiltonianSpec};
use crate::error::Result;
use crate::fidelity::{
    appendix_one_f0000, appendix_one_tensor, appendix_two_tensor, fidelity_one_bit,
    fidelity_two_bit, mc_two_bit_tensor, quadrature_two_bit_tensor, rbar_one_bit, rbar_two_bit_mc,
    Method, TWO_BIT_GAUSS_NODES,
};
use crate::gates::GateContext;
use crate::statemath::{validate_density, ComplexMatrix, DensityMatrix};

/// Agreement required between a closed form and quadrature.
pub const QUADRATURE_TOL: f64 = 1e-9;
/// Agreement required between a closed form and a sampled estimate.
pub const SIGMA_LIMIT: f64 = 5.0;
/// Dimensionless `Ωτ` (one-bit) or `Ω'τ` (two-bit) values checked.
pub const ORACLE_GRID: [f64; 4] = [1e-4, 1e-3, 1e-2, 1e-1];
/// Default samples per Monte Carlo check.
pub const DEFAULT_SAMPLES: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub group: &'static str,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn from_result(group: &'static str, name: String, r: Result<(bool, String)>) -> Self {
        match r {
            Ok((passed, detail)) => Self {
                group,
                name,
                passed,
                detail,
            },
            Err(e) => Self {
                group,
                name,
                passed: false,
                detail: format!("error: {e}"),
            },
        }
    }
}

fn within(value: f64, limit: f64, unit: &str) -> (bool, String) {
    let shown = if limit >= 1.0 {
        format!("{limit}")
    } else {
        format!("{limit:.0e}")
    };
    (
        value <= limit,
        format!("max {value:.3e}{unit} (limit {shown}{unit})"),
    )
}

fn sigmas(diff: f64, stderr: f64) -> f64 {
    if stderr > 0.0 {
        diff / stderr
    } else if diff <= 1e-12 {
        0.0
    } else {
        f64::INFINITY
    }
}

/// Seed for check number `k` of a run rooted at `seed`.
fn sub_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Reference parameters: `Ω = 1e5`, `η = 0.1`, `N_a = 20`.
pub fn reference_context() -> GateContext {
    GateContext::new(1e5, 0.1, 20, 0.0, 0.0).expect("reference parameters are valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidationOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for ValidationOptions {
    fn default() -> Self {
        Self {
            samples: DEFAULT_SAMPLES,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    /// Fixed-width pass/fail table followed by a summary line.
    pub fn table(&self) -> String {
        let width = self
            .checks
            .iter()
            .map(|c| c.group.len() + c.name.len() + 3)
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for c in &self.checks {
            let label = format!("{} / {}", c.group, c.name);
            let mark = if c.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{mark}  {label:<width$}  {}", c.detail);
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            self.checks.len(),
            self.checks.len() - failed,
            failed
        );
        out
    }
}

/// Both gate fidelities at `τ = 0`, every evaluation route.
pub fn unitary_limit_checks() -> Vec<Check> {
    let ctx = reference_context();
    let methods = [
        ("analytic", Method::Analytic),
        ("quadrature", Method::Quadrature),
        (
            "monte carlo",
            Method::MonteCarlo {
                samples: 1000,
                seed: 0,
            },
        ),
    ];
    let mut out = Vec::new();
    for (label, m) in methods {
        out.push(Check::from_result(
            "unitary limit",
            format!("one-bit {label}"),
            (|| {
                let f = fidelity_one_bit(PI / ctx.omega, &ctx, m)?.fidelity;
                Ok(within((f - 1.0).abs(), 1e-12, ""))
            })(),
        ));
        out.push(Check::from_result(
            "unitary limit",
            format!("two-bit {label}"),
            (|| {
                let f = fidelity_two_bit(&ctx, m)?.fidelity;
                Ok(within((f - 1.0).abs(), 1e-12, ""))
            })(),
        ));
    }
    out
}

fn kernel_times(ctx: &GateContext) -> [(&'static str, f64); 2] {
    let wp = ctx.omega_prime();
    [("pi/omega'", PI / wp), ("2pi/omega'", 2.0 * PI / wp)]
}

/// Closed forms against adaptive quadrature (product Gauss rule for the
/// three-pulse tensor).
pub fn quadrature_checks(grid: &[f64]) -> Vec<Check> {
    let ctx = reference_context();
    let wp = ctx.omega_prime();
    let mut out = Vec::new();
    for &x in grid {
        out.push(Check::from_result(
            "quadrature",
            format!("F00 omega*tau={x:.0e}"),
            (|| {
                let t = PI / ctx.omega;
                let c = ctx.with_tau(x / ctx.omega);
                let d = AreaDistribution::new(t, c.tau, c.omega)?;
                let q = d.expect(|a| (0.5 * (a - c.omega * t)).cos().powi(2))?;
                Ok(within(
                    (q.value - appendix_one_f0000(t, &c)).abs(),
                    QUADRATURE_TOL,
                    "",
                ))
            })(),
        ));
        out.push(Check::from_result(
            "quadrature",
            format!("phase factor omega*tau={x:.0e}"),
            (|| {
                let t = PI / ctx.omega;
                let tau = x / ctx.omega;
                let d = TimeDistribution::new(t, tau)?;
                let q = d.expect(|tp| C64::from_polar(1.0, -ctx.omega * tp))?;
                let closed = averaged_phase_factor(ctx.omega, t, tau);
                Ok(within((q.value - closed).norm(), QUADRATURE_TOL, ""))
            })(),
        ));
        for (label, t) in kernel_times(&ctx) {
            out.push(Check::from_result(
                "quadrature",
                format!("kernels t={label} omega'*tau={x:.0e}"),
                (|| {
                    let tau = x / wp;
                    let closed = kernel_integrals(t, wp, tau).as_array();
                    let d = AreaDistribution::new(t, tau, wp)?;
                    let mut worst: f64 = 0.0;
                    for (k, want) in closed.iter().enumerate() {
                        let q = d.expect(|a| Kernels::integrands(a)[k])?;
                        worst = worst.max((q.value - want).abs());
                    }
                    Ok(within(worst, QUADRATURE_TOL, ""))
                })(),
            ));
        }
        out.push(Check::from_result(
            "quadrature",
            format!("two-bit elements omega'*tau={x:.0e}"),
            (|| {
                let c = ctx.with_tau(x / wp);
                let closed = appendix_two_tensor(&c)?;
                let quad = quadrature_two_bit_tensor(&c, TWO_BIT_GAUSS_NODES)?;
                let worst = closed
                    .known()
                    .map(|([ip, i, jp, j], z)| {
                        (z - quad.get(ip, i, jp, j).unwrap_or_default()).norm()
                    })
                    .fold(0.0, f64::max);
                Ok(within(worst, QUADRATURE_TOL, ""))
            })(),
        ));
    }
    out
}

/// Closed forms against Monte Carlo estimates at `samples` draws.
pub fn monte_carlo_checks(grid: &[f64], samples: usize, seed: u64) -> Vec<Check> {
    let ctx = reference_context();
    let wp = ctx.omega_prime();
    let mut out = Vec::new();
    let mut k = 0u64;
    let mut next_seed = || {
        k += 1;
        sub_seed(seed, k)
    };
    for &x in grid {
        let s = next_seed();
        out.push(Check::from_result(
            "monte carlo",
            format!("F00 omega*tau={x:.0e}"),
            (|| {
                let t = PI / ctx.omega;
                let c = ctx.with_tau(x / ctx.omega);
                let d = AreaDistribution::new(t, c.tau, c.omega)?;
                let est = mc_average_parallel(
                    |a| (0.5 * (a - c.omega * t)).cos().powi(2),
                    &d,
                    samples,
                    s,
                )?;
                Ok(within(
                    est.sigmas_from(appendix_one_f0000(t, &c)),
                    SIGMA_LIMIT,
                    "σ",
                ))
            })(),
        ));
        for (label, t) in kernel_times(&ctx) {
            let s = next_seed();
            out.push(Check::from_result(
                "monte carlo",
                format!("kernels t={label} omega'*tau={x:.0e}"),
                (|| {
                    let tau = x / wp;
                    let closed = kernel_integrals(t, wp, tau).as_array();
                    let sampler = AreaSampler::new(&AreaDistribution::new(t, tau, wp)?)?;
                    if samples < 2 {
                        return Err(crate::error::invalid("samples", "need at least 2 samples"));
                    }
                    let (m, _) = parallel_moments(samples, s, 5, |rng, o| {
                        o.copy_from_slice(&Kernels::integrands(sampler.sample(rng)));
                    });
                    let worst = (0..5)
                        .map(|i| m.estimate(i).sigmas_from(closed[i]))
                        .fold(0.0, f64::max);
                    Ok(within(worst, SIGMA_LIMIT, "σ"))
                })(),
            ));
        }
        let s = next_seed();
        out.push(Check::from_result(
            "monte carlo",
            format!("two-bit elements omega'*tau={x:.0e}"),
            (|| {
                let c = ctx.with_tau(x / wp);
                let closed = appendix_two_tensor(&c)?;
                let est = mc_two_bit_tensor(&c, samples, s)?;
                let worst = closed
                    .known()
                    .map(|([ip, i, jp, j], z)| est.sigmas(ip, i, jp, j, z))
                    .fold(0.0, f64::max);
                Ok(within(worst, SIGMA_LIMIT, "σ"))
            })(),
        ));
    }
    let s = next_seed();
    out.push(Check::from_result(
        "monte carlo",
        "one-bit fidelity omega*tau=1e-3".into(),
        (|| {
            let c = ctx.with_tau(1e-3 / ctx.omega);
            let t = PI / ctx.omega;
            let a = fidelity_one_bit(t, &c, Method::Analytic)?;
            let m = fidelity_one_bit(t, &c, Method::MonteCarlo { samples, seed: s })?;
            Ok(within(
                sigmas((a.fidelity - m.fidelity).abs(), m.stderr),
                SIGMA_LIMIT,
                "σ",
            ))
        })(),
    ));
    let s = next_seed();
    out.push(Check::from_result(
        "monte carlo",
        "two-bit fidelity omega'*tau=1e-3".into(),
        (|| {
            let c = ctx.with_tau(1e-3 / wp);
            let a = fidelity_two_bit(&c, Method::Analytic)?;
            let m = fidelity_two_bit(&c, Method::MonteCarlo { samples, seed: s })?;
            Ok(within(
                sigmas((a.fidelity - m.fidelity).abs(), m.stderr),
                SIGMA_LIMIT,
                "σ",
            ))
        })(),
    ));
    out
}

fn pseudo_hermitian(n: usize, salt: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n);
    for r in 0..n {
        for c in r..n {
            let phase = salt + (r * 7 + c * 13) as f64;
            let re = 1e4 * (1.3 * phase).sin();
            let im = if r == c {
                0.0
            } else {
                1e4 * (0.7 * phase).cos()
            };
            m[(r, c)] = C64::new(re, im);
            m[(c, r)] = C64::new(re, -im);
        }
    }
    m
}

fn pseudo_state(n: usize, salt: f64) -> DensityMatrix {
    let v: Vec<C64> = (0..n)
        .map(|k| C64::new((salt + k as f64).sin(), (2.0 * salt + 3.0 * k as f64).cos()))
        .collect();
    DensityMatrix::pure(&v)
}

/// Invariants of the averaging map and the Γ-distribution.
pub fn structural_checks(samples: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let ctx = reference_context();

    out.push(Check::from_result(
        "structure",
        "phase factor semigroup".into(),
        (|| {
            let mut worst: f64 = 0.0;
            for &omega in &[1e3, 1e5, -2.5e5] {
                for &tau in &[1e-10, 1e-8, 1e-6] {
                    for &(t1, t2) in &[(1e-6, 3e-6), (2e-5, 5e-5), (1e-4, 1e-4)] {
                        let joint = averaged_phase_factor(omega, t1 + t2, tau);
                        let split = averaged_phase_factor(omega, t1, tau)
                            * averaged_phase_factor(omega, t2, tau);
                        worst = worst.max((joint - split).norm());
                    }
                }
            }
            Ok(within(worst, 1e-12, ""))
        })(),
    ));

    out.push(Check::from_result(
        "structure",
        "diagonal conservation".into(),
        (|| {
            let mut changed = 0usize;
            for n in 2..6 {
                let rho = pseudo_state(n, n as f64);
                let energies: Vec<f64> = (0..n).map(|k| 1e4 * (k as f64 - 1.3).powi(2)).collect();
                for &(t, tau) in &[(1e-4, 1e-8), (1e-3, 1e-6), (5e-2, 1e-5)] {
                    let ev = evolve_energy_basis(&rho, &energies, t, tau)?;
                    changed += (0..n)
                        .filter(|&k| ev.matrix[(k, k)] != rho.matrix[(k, k)])
                        .count();
                }
            }
            Ok((changed == 0, format!("{changed} diagonal entries changed")))
        })(),
    ));

    out.push(Check::from_result(
        "structure",
        "Γ normalization and moments".into(),
        (|| {
            let mut worst_norm: f64 = 0.0;
            let mut worst_moment: f64 = 0.0;
            for &(t, tau) in &[
                (1.0, 2.0),
                (1.0, 1.0),
                (1.0, 0.1),
                (1.0, 1e-3),
                (PI / 1e5, 1e-8),
            ] {
                let d = TimeDistribution::new(t, tau)?;
                let norm = d.expect(|_| 1.0)?.value;
                let mean = d.expect(|x| x)?.value;
                let second = d.expect(|x| (x - t) * (x - t))?.value;
                worst_norm = worst_norm.max((norm - 1.0).abs());
                worst_moment = worst_moment
                    .max(((mean - d.mean()) / d.mean()).abs())
                    .max(((second - d.variance()) / d.variance()).abs());
            }
            let ok = worst_norm <= 1e-8 && worst_moment <= 1e-6;
            Ok((
                ok,
                format!("normalization {worst_norm:.2e} (1e-8), moments {worst_moment:.2e} (1e-6)"),
            ))
        })(),
    ));

    out.push(Check::from_result(
        "structure",
        "area moments by sampling".into(),
        (|| {
            let t = PI / ctx.omega;
            let d = AreaDistribution::new(t, 1e-6, ctx.omega)?;
            let mean = mc_average_parallel(|a| a, &d, samples, sub_seed(seed, 101))?;
            let var =
                mc_average_parallel(|a| (a - d.mean()).powi(2), &d, samples, sub_seed(seed, 102))?;
            let worst = mean
                .sigmas_from(d.mean())
                .max(var.sigmas_from(d.variance()));
            Ok(within(worst, SIGMA_LIMIT, "σ"))
        })(),
    ));

    out.push(Check::from_result(
        "structure",
        "density validity".into(),
        (|| {
            let mut bad = Vec::new();
            for n in [2usize, 3, 5] {
                let h = HamiltonianSpec::new(pseudo_hermitian(n, 0.37 * n as f64))?;
                let rho = pseudo_state(n, 1.1 * n as f64);
                for &(t, tau) in &[(1e-4, 1e-8), (1e-3, 1e-6), (1e-2, 1e-4)] {
                    if !validate_density(&exact_map(&h, &rho, t, tau)?).is_valid() {
                        bad.push(format!("exact_map n={n} t={t:e}"));
                    }
                }
            }
            for &x in &ORACLE_GRID {
                let c = ctx.with_tau(x / ctx.omega);
                for i in 0..2 {
                    let r = rbar_one_bit(i, i, PI / ctx.omega, &c)?;
                    if !validate_density(&DensityMatrix::new(r)).is_valid() {
                        bad.push(format!("one-bit rbar i={i} x={x:e}"));
                    }
                }
            }
            let c = ctx.with_tau(1e-2 / ctx.omega_prime());
            let r = rbar_two_bit_mc(&c, samples.clamp(1, 20_000), sub_seed(seed, 103))?;
            for i in 0..4 {
                if !validate_density(&DensityMatrix::new(r[i * 4 + i].clone())).is_valid() {
                    bad.push(format!("two-bit rbar i={i}"));
                }
            }
            Ok((
                bad.is_empty(),
                if bad.is_empty() {
                    "all valid".into()
                } else {
                    bad.join("; ")
                },
            ))
        })(),
    ));

    out.push(Check::from_result(
        "structure",
        "tensor conjugation symmetry".into(),
        (|| {
            let mut worst: f64 = 0.0;
            for &x in &ORACLE_GRID {
                let one = appendix_one_tensor(PI / ctx.omega, &ctx.with_tau(x / ctx.omega))?;
                let c = ctx.with_tau(x / ctx.omega_prime());
                worst = worst
                    .max(one.conjugation_asymmetry())
                    .max(appendix_two_tensor(&c)?.conjugation_asymmetry())
                    .max(
                        quadrature_two_bit_tensor(&c, TWO_BIT_GAUSS_NODES)?.conjugation_asymmetry(),
                    );
            }
            let c = ctx.with_tau(1e-2 / ctx.omega_prime());
            let sampled = mc_two_bit_tensor(&c, samples.clamp(2, 20_000), sub_seed(seed, 104))?;
            worst = worst.max(sampled.tensor.conjugation_asymmetry());
            Ok(within(worst, 1e-12, ""))
        })(),
    ));

    out.push(Check::from_result(
        "structure",
        "averaged map trace relations".into(),
        (|| {
            let mut worst: f64 = 0.0;
            for &x in &ORACLE_GRID {
                let c = ctx.with_tau(x / ctx.omega);
                for i in 0..2 {
                    for ip in 0..2 {
                        let tr = rbar_one_bit(i, ip, 2.3 / ctx.omega, &c)?.trace();
                        let want = if i == ip { 1.0 } else { 0.0 };
                        worst = worst.max((tr - want).norm());
                    }
                }
            }
            let c = ctx.with_tau(1e-2 / ctx.omega_prime());
            let r = rbar_two_bit_mc(&c, samples.clamp(1, 5_000), sub_seed(seed, 105))?;
            for ip in 0..4 {
                for i in 0..4 {
                    let want = if i == ip { 1.0 } else { 0.0 };
                    worst = worst.max((r[ip * 4 + i].trace() - want).norm());
                }
            }
            Ok(within(worst, 1e-12, ""))
        })(),
    ));

    out
}

/// The complete suite.
pub fn run_validation(opts: &ValidationOptions) -> ValidationReport {
    let mut checks = unitary_limit_checks();
    checks.extend(quadrature_checks(&ORACLE_GRID));
    checks.extend(monte_carlo_checks(&ORACLE_GRID, opts.samples, opts.seed));
    checks.extend(structural_checks(opts.samples, opts.seed));
    ValidationReport { checks }
}
