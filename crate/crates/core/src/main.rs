// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use decogate::bounds::{assess, ShorScenario, DEFAULT_FEASIBILITY_THRESHOLD};
use decogate::config::{parse_count, RunConfig};
use decogate::dynamics::{compare_evolutions, HamiltonianSpec};
use decogate::fidelity::{fidelity_one_bit, fidelity_two_bit, Method};
use decogate::gates::GateContext;
use decogate::report::{parse_matrix_json, write_evolution_csv, FidelityParams, FidelityReport};
use decogate::statemath::{hermitian_eigen, DensityMatrix};
use decogate::sweep::{fit_loglog_slope, run_sweep, write_csv, Gate, SweepMethod, SweepSpec};
use decogate::validation::{run_validation, ValidationOptions};
use decogate::Error;

/// Γ-distributed evolution-time decoherence for trapped-ion gates.
#[derive(Parser, Debug)]
#[command(name = "decogate", version)]
struct Cli {
    /// Root seed for Monte Carlo sampling.
    #[arg(long, global = true, value_parser = count)]
    seed: Option<u64>,
    /// Output file (default: standard output).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// `key = value` file overriding built-in defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Averaged gate fidelity as JSON.
    Fidelity(FidelityArgs),
    /// Infidelity over a log-spaced τ grid as CSV.
    Sweep(SweepArgs),
    /// Feasibility of factoring an L-bit number as JSON.
    Shor(ShorArgs),
    /// Exact averaged evolution versus the second-order master equation.
    Evolve(EvolveArgs),
    /// Closed forms against quadrature and sampling oracles.
    Validate(ValidateArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum GateArg {
    OneBit,
    TwoBit,
}

impl From<GateArg> for Gate {
    fn from(g: GateArg) -> Self {
        match g {
            GateArg::OneBit => Gate::OneBit,
            GateArg::TwoBit => Gate::TwoBit,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum FidelityMethodArg {
    Analytic,
    Mc,
    Quadrature,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum SweepMethodArg {
    Analytic,
    Mc,
}

#[derive(Args, Debug, Clone, Copy)]
struct Physics {
    /// Carrier Rabi frequency Ω (rad/s).
    #[arg(long)]
    omega: Option<f64>,
    /// Lamb-Dicke parameter η.
    #[arg(long)]
    eta: Option<f64>,
    /// Number of ions in the trap.
    #[arg(long, value_parser = count_u32)]
    ions: Option<u32>,
    /// Correlation time τ (s).
    #[arg(long)]
    tau: Option<f64>,
    /// Laser phase φ (rad).
    #[arg(long, default_value_t = 0.0)]
    phi: f64,
}

impl Physics {
    fn context(&self, cfg: &RunConfig) -> Result<GateContext, Failure> {
        GateContext::new(
            self.omega.unwrap_or(cfg.omega),
            self.eta.unwrap_or(cfg.eta),
            self.ions.unwrap_or(cfg.n_ions),
            self.phi,
            self.tau.unwrap_or(cfg.tau),
        )
        .map_err(Failure::from)
    }
}

#[derive(Args, Debug)]
struct FidelityArgs {
    #[arg(long, value_enum)]
    gate: GateArg,
    #[arg(long, value_enum, default_value = "analytic")]
    method: FidelityMethodArg,
    /// Pulse duration (s); one-bit gate only.
    #[arg(long, conflicts_with = "rotation")]
    time: Option<f64>,
    /// Rotation angle, e.g. `pi`, `pi/2`, `2pi` or radians; one-bit gate only.
    #[arg(long, value_parser = angle)]
    rotation: Option<f64>,
    #[command(flatten)]
    physics: Physics,
    /// Monte Carlo draws.
    #[arg(long, value_parser = count, default_value = "1e6")]
    samples: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    #[arg(long, value_enum)]
    gate: GateArg,
    /// Smallest τ (s).
    #[arg(long)]
    tau_min: f64,
    /// Largest τ (s).
    #[arg(long)]
    tau_max: f64,
    #[arg(long, value_parser = count, default_value = "20")]
    points: u64,
    #[arg(long, value_enum, default_value = "analytic")]
    method: SweepMethodArg,
    /// Monte Carlo draws per point.
    #[arg(long, value_parser = count, default_value = "1e5")]
    samples: u64,
    /// Append the log-log fit of 1-F against the fractional error.
    #[arg(long)]
    fit: bool,
    #[command(flatten)]
    physics: Physics,
}

#[derive(Args, Debug)]
struct ShorArgs {
    /// Bits L of the number to factor.
    #[arg(long, value_parser = count_u32)]
    bits: u32,
    /// Largest acceptable total_time/decoherence_time.
    #[arg(long, default_value_t = DEFAULT_FEASIBILITY_THRESHOLD)]
    threshold: f64,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    eta: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
}

#[derive(Args, Debug)]
struct EvolveArgs {
    /// JSON matrix file: list of rows, each entry `[re, im]` (rad/s).
    #[arg(long)]
    hamiltonian: PathBuf,
    /// Final time (s).
    #[arg(long)]
    t: f64,
    #[arg(long)]
    tau: Option<f64>,
    /// Integrator step (s); chosen from the spectral norm when absent.
    #[arg(long)]
    dt: Option<f64>,
    /// Grid points spanning (0, t].
    #[arg(long, value_parser = count, default_value = "20")]
    points: u64,
    /// Start in the lowest eigenstate of H instead of basis state 0.
    #[arg(long)]
    eigen_initial: bool,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Monte Carlo draws per statistical check.
    #[arg(long, value_parser = count, default_value = "1e6")]
    samples: u64,
}

fn count(s: &str) -> Result<u64, String> {
    parse_count(s).ok_or_else(|| format!("expected a nonnegative integer, got `{s}`"))
}

fn count_u32(s: &str) -> Result<u32, String> {
    u32::try_from(count(s)?).map_err(|_| format!("`{s}` is out of range"))
}

fn angle(s: &str) -> Result<f64, String> {
    let t = s.trim().to_ascii_lowercase().replace('π', "pi");
    let bad = || format!("expected an angle such as `pi`, `pi/2` or `1.57`, got `{s}`");
    let Some(pos) = t.find("pi") else {
        return t.parse().map_err(|_| bad());
    };
    let (head, tail) = (t[..pos].trim().trim_end_matches('*'), t[pos + 2..].trim());
    let factor = match head {
        "" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| bad())?,
    };
    let divisor = match tail {
        "" => 1.0,
        d => d
            .strip_prefix('/')
            .and_then(|d| d.trim().parse::<f64>().ok())
            .ok_or_else(bad)?,
    };
    Ok(factor * PI / divisor)
}

/// Exit status with the message shown on standard error.
enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::TooFewPoints
            | Error::EmptyRange
            | Error::DimensionMismatch { .. }
            | Error::NotHermitian(_) => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let res = match out {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => io::stdout()
            .write_all(bytes)
            .map_err(|e| format!("cannot write output: {e}")),
    };
    res.map_err(Failure::Runtime)
}

fn json_line<T: serde::Serialize>(v: &T) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(v).expect("report types serialize");
    s.push('\n');
    s.into_bytes()
}

fn cmd_fidelity(a: &FidelityArgs, cfg: &RunConfig) -> Result<Vec<u8>, Failure> {
    let ctx = a.physics.context(cfg)?;
    let gate = Gate::from(a.gate);
    let samples = usize::try_from(a.samples).map_err(|_| usage("--samples is out of range"))?;
    let method = match a.method {
        FidelityMethodArg::Analytic => Method::Analytic,
        FidelityMethodArg::Quadrature => Method::Quadrature,
        FidelityMethodArg::Mc => Method::MonteCarlo {
            samples,
            seed: cfg.seed,
        },
    };
    let result = match gate {
        Gate::OneBit => {
            let t = match (a.time, a.rotation) {
                (Some(t), None) => t,
                (None, Some(theta)) => theta / ctx.omega,
                _ => return Err(usage("the one-bit gate needs --time or --rotation")),
            };
            fidelity_one_bit(t, &ctx, method)?
        }
        Gate::TwoBit => {
            if a.time.is_some() || a.rotation.is_some() {
                return Err(usage(
                    "--time and --rotation apply to the one-bit gate only",
                ));
            }
            fidelity_two_bit(&ctx, method)?
        }
    };
    let mc = matches!(method, Method::MonteCarlo { .. });
    let report = FidelityReport {
        gate,
        method: result.method,
        fidelity: result.fidelity,
        one_minus_fidelity: result.one_minus_f,
        stderr: result.stderr,
        params: FidelityParams {
            omega: ctx.omega,
            eta: ctx.eta,
            n_ions: ctx.n_ions,
            phi: ctx.phi,
            tau: ctx.tau,
            time: result.nominal_time,
            samples: mc.then_some(a.samples),
            seed: mc.then_some(cfg.seed),
        },
    };
    Ok(json_line(&report))
}

fn cmd_sweep(a: &SweepArgs, cfg: &RunConfig) -> Result<Vec<u8>, Failure> {
    let context = a.physics.context(&RunConfig {
        tau: 0.0,
        ..cfg.clone()
    })?;
    let spec = SweepSpec {
        gate: a.gate.into(),
        tau_min: a.tau_min,
        tau_max: a.tau_max,
        points: usize::try_from(a.points).map_err(|_| usage("--points is out of range"))?,
        context,
        method: match a.method {
            SweepMethodArg::Analytic => SweepMethod::Analytic,
            SweepMethodArg::Mc => SweepMethod::MonteCarlo,
        },
        mc_samples: usize::try_from(a.samples).map_err(|_| usage("--samples is out of range"))?,
    };
    let rows = run_sweep(&spec, cfg.seed)?;
    let fit = if a.fit {
        Some(fit_loglog_slope(&rows)?)
    } else {
        None
    };
    let mut buf = Vec::new();
    write_csv(&mut buf, &spec, &rows, fit.as_ref()).expect("writing to memory");
    Ok(buf)
}

fn cmd_shor(a: &ShorArgs, cfg: &RunConfig) -> Result<Vec<u8>, Failure> {
    if !(a.threshold > 0.0) {
        return Err(usage("--threshold must be positive"));
    }
    let s = ShorScenario::new(
        a.bits,
        a.omega.unwrap_or(cfg.omega),
        a.eta.unwrap_or(cfg.eta),
        a.tau.unwrap_or(cfg.tau),
    )?;
    Ok(json_line(&assess(&s, a.threshold)?))
}

fn cmd_evolve(a: &EvolveArgs, cfg: &RunConfig) -> Result<Vec<u8>, Failure> {
    let path = a.hamiltonian.display();
    let text = fs::read_to_string(&a.hamiltonian)
        .map_err(|e| usage(format!("cannot read {path}: {e}")))?;
    let matrix = parse_matrix_json(&text).map_err(|e| usage(format!("{path}: {e}")))?;
    let h = HamiltonianSpec::new(matrix)?;
    if !(a.t > 0.0 && a.t.is_finite()) {
        return Err(usage("--t must be positive"));
    }
    if a.points < 1 {
        return Err(usage("--points must be at least 1"));
    }
    let tau = a.tau.unwrap_or(cfg.tau);
    let rho0 = if a.eigen_initial {
        DensityMatrix::pure(&hermitian_eigen(&h.matrix)?.vectors.column(0))
    } else {
        DensityMatrix::basis_state(h.dim(), 0)
    };
    let n = a.points as f64;
    let grid: Vec<f64> = (1..=a.points).map(|k| a.t * k as f64 / n).collect();
    let cmp = compare_evolutions(&h, &rho0, &grid, tau, a.dt)?;
    let mut buf = Vec::new();
    write_evolution_csv(&mut buf, &cmp).expect("writing to memory");
    Ok(buf)
}

fn cmd_validate(a: &ValidateArgs, cfg: &RunConfig) -> Result<(Vec<u8>, bool), Failure> {
    let samples = usize::try_from(a.samples).map_err(|_| usage("--samples is out of range"))?;
    if samples < 2 {
        return Err(usage("--samples must be at least 2"));
    }
    let report = run_validation(&ValidationOptions {
        samples,
        seed: cfg.seed,
    });
    Ok((report.table().into_bytes(), report.all_passed()))
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let mut cfg = RunConfig::default();
    if let Some(p) = &cli.config {
        let text = fs::read_to_string(p)
            .map_err(|e| usage(format!("cannot read {}: {e}", p.display())))?;
        cfg.apply_text(&text)
            .map_err(|e| usage(format!("{}: {e}", p.display())))?;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = cli.out {
        cfg.output_path = Some(o);
    }
    let (bytes, ok) = match &cli.command {
        Command::Fidelity(a) => (cmd_fidelity(a, &cfg)?, true),
        Command::Sweep(a) => (cmd_sweep(a, &cfg)?, true),
        Command::Shor(a) => (cmd_shor(a, &cfg)?, true),
        Command::Evolve(a) => (cmd_evolve(a, &cfg)?, true),
        Command::Validate(a) => cmd_validate(a, &cfg)?,
    };
    emit(cfg.output_path.as_deref(), &bytes)?;
    if !ok {
        eprintln!("error: validation failed");
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
