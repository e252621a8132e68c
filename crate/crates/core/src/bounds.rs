// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Feasibility of factoring an `L`-bit number on an ion-trap machine.
//!
//! With `N_a = 5L` ions the sideband frequency is `Ω' = ηΩ/√(5L)` and the
//! decoherence rate `γ = 2Ω'²τ`. One logical operation takes
//! `4π√(5L)/(ηΩ)` and about `(10L)³` of them are needed. The computation
//! is feasible when `total_time · γ` stays below a threshold.
//!
//! Note that `ratio = 8π(10L)³ ηΩτ/√(5L)` grows with `Ω` and `η`: faster
//! pulses shorten the run but raise `γ` quadratically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default upper bound on `total_time · γ` for a feasible run.
pub const DEFAULT_FEASIBILITY_THRESHOLD: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShorScenario {
    pub bits: u32,
    pub omega: f64,
    pub eta: f64,
    pub tau: f64,
}

impl ShorScenario {
    pub fn new(bits: u32, omega: f64, eta: f64, tau: f64) -> Result<Self> {
        let s = Self {
            bits,
            omega,
            eta,
            tau,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.bits < 1 {
            return Err(invalid("bits", "must be at least 1"));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(invalid("omega", "must be positive and finite"));
        }
        if !(self.eta > 0.0 && self.eta.is_finite()) {
            return Err(invalid("eta", "must be positive and finite"));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(invalid("tau", "must be nonnegative and finite"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub n_ions: u64,
    pub omega_prime: f64,
    pub gamma: f64,
    /// `1/γ`; infinite when `τ = 0` (written as `null` in JSON).
    #[serde(with = "infinite_as_null")]
    pub decoherence_time: f64,
    pub op_time: f64,
    pub n_ops: u64,
    pub total_time: f64,
    pub ratio: f64,
    pub feasible: bool,
}

mod infinite_as_null {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else {
            s.serialize_none()
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::INFINITY))
    }
}

pub fn assess(s: &ShorScenario, feasibility_threshold: f64) -> Result<FeasibilityReport> {
    s.validate()?;
    if !(feasibility_threshold > 0.0) {
        return Err(invalid("feasibility_threshold", "must be positive"));
    }
    let l = u64::from(s.bits);
    let n_ions = 5 * l;
    let root = (n_ions as f64).sqrt();
    let omega_prime = s.eta * s.omega / root;
    let gamma = 2.0 * omega_prime * omega_prime * s.tau;
    let op_time = 4.0 * PI * root / (s.eta * s.omega);
    let n_ops = (10 * l).pow(3);
    let total_time = op_time * n_ops as f64;
    let ratio = total_time * gamma;
    Ok(FeasibilityReport {
        n_ions,
        omega_prime,
        gamma,
        decoherence_time: 1.0 / gamma,
        op_time,
        n_ops,
        total_time,
        ratio,
        feasible: ratio < feasibility_threshold,
    })
}

/// Correlation time at which a π rotation reaches `1 - F = target_error`
/// under the first-order law `1 - F ≈ (3π/16)Ωτ`.
pub fn required_tau(omega: f64, target_error: f64) -> Result<f64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(invalid("omega", "must be positive and finite"));
    }
    if !(target_error > 0.0 && target_error <= 1.0) {
        return Err(invalid("target_error", "must lie in (0, 1]"));
    }
    Ok(16.0 * target_error / (3.0 * PI * omega))
}
