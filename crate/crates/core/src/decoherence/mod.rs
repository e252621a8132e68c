// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Non-dissipative decoherence from a Γ-distributed evolution time.
//!
//! The averaged state is `ρ̄(t) = ∫ P(t, t') e^{-iLt'} ρ(0) dt'` where
//! `P(t, ·)` is a Γ-density with shape `t/τ` and scale `τ`. Its mean is `t`
//! and its variance `τt`, so `τ → 0` recovers unitary evolution. In the
//! energy basis every coherence picks up the characteristic function of
//! `P`:
//!
//! ```text
//! ρ̄_nm(t) = (1 + iω_nm τ)^{-t/τ} ρ_nm(0) = e^{-γ_nm t} e^{-iν_nm t} ρ_nm(0)
//! γ = ln(1 + ω²τ²) / 2τ,    ν = arctan(ωτ) / τ
//! ```
//!
//! The same law applied to a fluctuating Rabi frequency turns the pulse area
//! `A` into a Γ variable with shape `t/τ` and scale `Ωτ`
//! ([`AreaDistribution`]).
//!
//! A frequently quoted form of the decay rate reads `ln(1 + ω²τ)`; it is not
//! dimensionally consistent and disagrees with the characteristic function,
//! so the `ω²τ²` form is used throughout.

pub mod montecarlo;
pub mod quadrature;
pub mod special;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::statemath::DensityMatrix;

pub use montecarlo::{
    mc_average, mc_average_parallel, sample_area, stream, AreaSampler, McEstimate,
};
use quadrature::QuadResult;
use special::gamma_ln_pdf;

/// Distribution of the effective evolution time `t'` for nominal time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeDistribution {
    /// Nominal evolution time (s).
    pub t: f64,
    /// Scaling time (s).
    pub tau: f64,
}

impl TimeDistribution {
    pub fn new(t: f64, tau: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(invalid(
                "t",
                format!("must be positive and finite, got {t}"),
            ));
        }
        if !(tau >= 0.0 && tau.is_finite()) {
            return Err(invalid(
                "tau",
                format!("must be nonnegative and finite, got {tau}"),
            ));
        }
        Ok(Self { t, tau })
    }

    pub fn shape(&self) -> f64 {
        self.t / self.tau
    }

    pub fn mean(&self) -> f64 {
        self.t
    }

    pub fn variance(&self) -> f64 {
        self.tau * self.t
    }

    /// `E[f(t')]` by adaptive quadrature.
    pub fn expect<T: quadrature::QuadValue>(&self, f: impl Fn(f64) -> T) -> Result<QuadResult<T>> {
        if self.tau == 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        Ok(quadrature::gamma_expectation(self.shape(), self.tau, f))
    }
}

/// Distribution of the pulse area `A = ∫Ω(ξ)dξ` for a pulse of nominal
/// duration `t` and mean Rabi frequency `omega_mean`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaDistribution {
    pub t: f64,
    pub tau: f64,
    /// Mean Rabi frequency (rad/s).
    pub omega_mean: f64,
}

impl AreaDistribution {
    pub fn new(t: f64, tau: f64, omega_mean: f64) -> Result<Self> {
        TimeDistribution::new(t, tau)?;
        if !(omega_mean > 0.0 && omega_mean.is_finite()) {
            return Err(invalid(
                "omega_mean",
                format!("must be positive, got {omega_mean}"),
            ));
        }
        Ok(Self { t, tau, omega_mean })
    }

    pub fn shape(&self) -> f64 {
        self.t / self.tau
    }

    pub fn scale(&self) -> f64 {
        self.omega_mean * self.tau
    }

    /// `⟨A⟩ = Ωt`.
    pub fn mean(&self) -> f64 {
        self.omega_mean * self.t
    }

    /// `σ²(A) = Ω² t τ`.
    pub fn variance(&self) -> f64 {
        self.omega_mean * self.omega_mean * self.t * self.tau
    }

    /// `σ(A)/⟨A⟩ = √(τ/t)`.
    pub fn fractional_error(&self) -> f64 {
        (self.tau / self.t).sqrt()
    }

    pub fn expect<T: quadrature::QuadValue>(&self, f: impl Fn(f64) -> T) -> Result<QuadResult<T>> {
        if self.tau == 0.0 {
            return Err(Error::DegenerateDistribution);
        }
        Ok(quadrature::gamma_expectation(self.shape(), self.scale(), f))
    }
}

/// Density of the effective evolution time, `P(t, t')` (1/s).
pub fn pdf_time(d: &TimeDistribution, t_prime: f64) -> Result<f64> {
    if d.tau == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    if t_prime < 0.0 {
        return Err(invalid("t_prime", "must be nonnegative"));
    }
    Ok(gamma_ln_pdf(d.shape(), d.tau, t_prime).exp())
}

/// Density of the pulse area, `P(t, A)`.
pub fn pdf_area(d: &AreaDistribution, a: f64) -> Result<f64> {
    Ok(ln_pdf_area(d, a)?.exp())
}

/// Natural log of [`pdf_area`]; stays finite far into the tails.
pub fn ln_pdf_area(d: &AreaDistribution, a: f64) -> Result<f64> {
    if d.tau == 0.0 {
        return Err(Error::DegenerateDistribution);
    }
    if a < 0.0 {
        return Err(invalid("a", "must be nonnegative"));
    }
    Ok(gamma_ln_pdf(d.shape(), d.scale(), a))
}

/// Decay rate and shifted frequency of one energy-basis coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayChannel {
    pub omega_nm: f64,
    /// 1/s
    pub gamma: f64,
    /// rad/s
    pub nu: f64,
}

/// `γ = ln(1 + ω²τ²)/2τ`, `ν = arctan(ωτ)/τ`; the `τ = 0` limit is `(0, ω)`.
pub fn decay_rates(omega_nm: f64, tau: f64) -> DecayChannel {
    if tau == 0.0 {
        return DecayChannel {
            omega_nm,
            gamma: 0.0,
            nu: omega_nm,
        };
    }
    let x = omega_nm * tau;
    DecayChannel {
        omega_nm,
        gamma: (x * x).ln_1p() / (2.0 * tau),
        nu: x.atan() / tau,
    }
}

/// `E[e^{-iωt'}] = (1 + iωτ)^{-t/τ}`, evaluated in polar form on the
/// principal branch. Equals `e^{-iωt}` at `τ = 0` and exactly 1 at `ω = 0`.
pub fn averaged_phase_factor(omega: f64, t: f64, tau: f64) -> C64 {
    if omega == 0.0 || t == 0.0 {
        return C64::new(1.0, 0.0);
    }
    if tau == 0.0 {
        return C64::from_polar(1.0, -omega * t);
    }
    let x = omega * tau;
    let k = t / tau;
    C64::new(-k * 0.5 * (x * x).ln_1p(), -k * x.atan()).exp()
}

/// Applies the averaged evolution to a state given in the energy eigenbasis,
/// `ρ̄_nm = (1 + i(E_n - E_m)τ)^{-t/τ} ρ_nm`. Energies are in rad/s (ħ = 1).
pub fn evolve_energy_basis(
    rho0: &DensityMatrix,
    energies: &[f64],
    t: f64,
    tau: f64,
) -> Result<DensityMatrix> {
    let n = rho0.dim();
    if energies.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: energies.len(),
        });
    }
    if t < 0.0 || tau < 0.0 {
        return Err(invalid("t/tau", "must be nonnegative"));
    }
    let mut out = rho0.clone();
    for r in 0..n {
        for c in 0..n {
            if r == c {
                continue;
            }
            let f = averaged_phase_factor(energies[r] - energies[c], t, tau);
            out.matrix[(r, c)] *= f;
        }
    }
    Ok(out)
}

/// Γ-averaged trigonometric kernels of a sideband pulse with nominal duration
/// `t` and mean frequency `Ω'`:
///
/// ```text
/// C1 = E[cos(A/2)]   S1 = E[sin(A/2)]
/// C2 = E[cos²(A/2)]  S2 = E[sin²(A/2)]  Z = E[sin(A/2)cos(A/2)]
/// ```
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernels {
    pub c1: f64,
    pub s1: f64,
    pub c2: f64,
    pub s2: f64,
    pub z: f64,
}

impl Kernels {
    pub fn as_array(&self) -> [f64; 5] {
        [self.c1, self.s1, self.c2, self.s2, self.z]
    }

    pub const NAMES: [&'static str; 5] = ["C1", "S1", "C2", "S2", "Z"];

    /// The five integrands, in the order of [`Kernels::as_array`].
    pub fn integrands(a: f64) -> [f64; 5] {
        let (s, c) = (0.5 * a).sin_cos();
        [c, s, c * c, s * s, s * c]
    }
}

/// Closed forms of the averaged pulse kernels (valid for any `Ω'τ`).
pub fn kernel_integrals(t: f64, omega_prime: f64, tau: f64) -> Kernels {
    if tau == 0.0 {
        let (s, c) = (0.5 * omega_prime * t).sin_cos();
        return Kernels {
            c1: c,
            s1: s,
            c2: c * c,
            s2: s * s,
            z: s * c,
        };
    }
    // E[e^{iA}] and E[e^{iA/2}] via the characteristic function of Γ.
    let full = averaged_phase_factor(-omega_prime, t, tau);
    let half = averaged_phase_factor(-0.5 * omega_prime, t, tau);
    Kernels {
        c1: half.re,
        s1: half.im,
        c2: 0.5 * (1.0 + full.re),
        s2: 0.5 * (1.0 - full.re),
        z: 0.5 * full.im,
    }
}
