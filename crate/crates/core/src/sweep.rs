// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Gate infidelity over a logarithmic grid of correlation times, and the
//! log-log slope of `1 - F` against the fractional pulse-area error.
//!
//! Each gate uses its own abscissa: `√(τ/t_ref)` with `t_ref = π/Ω` for the
//! one-bit π rotation and `t_ref = π/Ω'` for the two-bit gate.

use std::f64::consts::PI;
use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::fidelity::{fidelity_one_bit, fidelity_two_bit, fractional_error, Method};
use crate::gates::GateContext;

/// CSV header written by [`write_csv`].
pub const CSV_HEADER: &str = "gate,tau,omega_tau,fractional_error,one_minus_fidelity,stderr";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Gate {
    #[serde(rename = "one-bit")]
    OneBit,
    #[serde(rename = "two-bit")]
    TwoBit,
}

impl Gate {
    pub fn token(self) -> &'static str {
        match self {
            Gate::OneBit => "one-bit",
            Gate::TwoBit => "two-bit",
        }
    }

    /// Pulse frequency setting the abscissa: `Ω` or `Ω'`.
    pub fn frequency(self, ctx: &GateContext) -> f64 {
        match self {
            Gate::OneBit => ctx.omega,
            Gate::TwoBit => ctx.omega_prime(),
        }
    }

    /// π-pulse duration used as `t_ref`.
    pub fn reference_time(self, ctx: &GateContext) -> f64 {
        PI / self.frequency(ctx)
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepMethod {
    Analytic,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec {
    pub gate: Gate,
    pub tau_min: f64,
    pub tau_max: f64,
    pub points: usize,
    pub context: GateContext,
    pub method: SweepMethod,
    pub mc_samples: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::TooFewPoints);
        }
        if !(self.tau_min > 0.0 && self.tau_max.is_finite()) {
            return Err(invalid("tau_min", "must be positive and finite"));
        }
        if !(self.tau_max > self.tau_min) {
            return Err(Error::EmptyRange);
        }
        self.context.validate()
    }

    /// Log-spaced grid with exact endpoints.
    pub fn taus(&self) -> Vec<f64> {
        let (lo, hi) = (self.tau_min.ln(), self.tau_max.ln());
        let last = self.points - 1;
        (0..self.points)
            .map(|k| match k {
                0 => self.tau_min,
                k if k == last => self.tau_max,
                k => (lo + (hi - lo) * k as f64 / last as f64).exp(),
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub tau: f64,
    pub omega_tau: f64,
    pub fractional_error: f64,
    pub one_minus_f: f64,
    pub stderr: f64,
}

/// Seed of grid point `k`, decorrelated from neighbouring roots.
fn point_seed(root: u64, k: usize) -> u64 {
    root ^ (k as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

/// Evaluates every grid point (concurrently) and returns rows by ascending τ.
pub fn run_sweep(spec: &SweepSpec, seed: u64) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    let gate = spec.gate;
    let t_ref = gate.reference_time(&spec.context);
    let freq = gate.frequency(&spec.context);
    spec.taus()
        .into_par_iter()
        .enumerate()
        .map(|(k, tau)| {
            let ctx = spec.context.with_tau(tau);
            let method = match spec.method {
                SweepMethod::Analytic => Method::Analytic,
                SweepMethod::MonteCarlo => Method::MonteCarlo {
                    samples: spec.mc_samples,
                    seed: point_seed(seed, k),
                },
            };
            let r = match gate {
                Gate::OneBit => fidelity_one_bit(t_ref, &ctx, method)?,
                Gate::TwoBit => fidelity_two_bit(&ctx, method)?,
            };
            Ok(SweepRow {
                tau,
                omega_tau: freq * tau,
                fractional_error: fractional_error(t_ref, tau)?,
                one_minus_f: r.one_minus_f,
                stderr: r.stderr,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogLogFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// Least squares of `log₁₀(1 - F)` against `log₁₀(fractional_error)`.
pub fn fit_loglog_slope(rows: &[SweepRow]) -> Result<LogLogFit> {
    if rows.len() < 3 {
        return Err(Error::TooFewRows(rows.len()));
    }
    let mut pts = Vec::with_capacity(rows.len());
    for (row, r) in rows.iter().enumerate() {
        if !(r.fractional_error > 0.0) {
            return Err(Error::NonPositive {
                row,
                field: "fractional_error",
                value: r.fractional_error,
            });
        }
        if !(r.one_minus_f > 0.0) {
            return Err(Error::NonPositive {
                row,
                field: "one_minus_f",
                value: r.one_minus_f,
            });
        }
        pts.push((r.fractional_error.log10(), r.one_minus_f.log10()));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(invalid("rows", "fractional errors are all equal"));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    Ok(LogLogFit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    })
}

/// Writes the sweep as CSV: header, one row per point with 12 significant
/// digits, a metadata comment, and the fit comment if given.
pub fn write_csv<W: Write>(
    mut w: W,
    spec: &SweepSpec,
    rows: &[SweepRow],
    fit: Option<&LogLogFit>,
) -> io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{:.11e},{:.11e},{:.11e},{:.11e},{:.11e}",
            spec.gate, r.tau, r.omega_tau, r.fractional_error, r.one_minus_f, r.stderr
        )?;
    }
    let t_ref = match spec.gate {
        Gate::OneBit => "pi/omega",
        Gate::TwoBit => "pi/omega_prime",
    };
    let method = match spec.method {
        SweepMethod::Analytic => "analytic".to_string(),
        SweepMethod::MonteCarlo => format!("monte_carlo samples={}", spec.mc_samples),
    };
    writeln!(
        w,
        "# abscissa=sqrt(tau/t_ref) t_ref={t_ref} method={method}"
    )?;
    if let Some(f) = fit {
        writeln!(w, "# slope={:.11e} r2={:.11e}", f.slope, f.r_squared)?;
    }
    Ok(())
}
