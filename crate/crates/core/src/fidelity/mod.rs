// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Averaged process operators and gate fidelities.
//!
//! For input states `|i>` the averaged gate produces
//! `R̄_{i'i} = E[U(A)|i><i'|U(A)†]`. Comparing with the ideal unitary `U₀`
//! gives the fidelity tensor
//!
//! ```text
//! F^{i'i}_{j'j} = <j'| U₀† R̄_{i'i} U₀ |j>
//! ```
//!
//! and the input-averaged gate fidelity is the fixed contraction
//!
//! ```text
//! F = w_d Σ_i F^{ii}_{ii} + w_o Σ_{i≠j} (F^{ii}_{jj} + F^{ji}_{ij})
//! ```
//!
//! with `(w_d, w_o) = (3/8, 1/8)` for one qubit and `(1/8, 1/24)` for two.
//!
//! Writing `a_{ji} = <j|U₀†U(A)|i>` for one realization, the tensor is
//! `E[a_{j'i} conj(a_{ji'})]`, which is what the sampling and quadrature
//! routes evaluate.

mod one_bit;
mod two_bit;

pub use one_bit::{
    appendix_one_f0000, appendix_one_tensor, fidelity_one_bit, one_bit_amplitudes, rbar_one_bit,
};
pub use two_bit::{
    appendix_two_tensor, fidelity_mc_two_bit, fidelity_two_bit, mc_two_bit_tensor,
    quadrature_two_bit_tensor, rbar_two_bit_mc, two_bit_amplitudes, TensorEstimate,
    TWO_BIT_GAUSS_NODES,
};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::decoherence::AreaDistribution;
use crate::error::{invalid, Result};
use crate::gates::GateContext;

/// Input-average weights `(diagonal, off-diagonal)` for one qubit.
pub const ONE_BIT_WEIGHTS: (f64, f64) = (3.0 / 8.0, 1.0 / 8.0);
/// Input-average weights `(diagonal, off-diagonal)` for two qubits.
pub const TWO_BIT_WEIGHTS: (f64, f64) = (1.0 / 8.0, 1.0 / 24.0);

/// Four-index tensor `F^{i'i}_{j'j}` over `n_states` logical inputs.
///
/// Elements without a value (closed forms cover only the families the
/// fidelity contraction needs) read as `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTensor {
    n_states: usize,
    values: Vec<Option<C64>>,
}

impl FidelityTensor {
    pub fn empty(n_states: usize) -> Self {
        Self {
            n_states,
            values: vec![None; n_states.pow(4)],
        }
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    fn offset(&self, ip: usize, i: usize, jp: usize, j: usize) -> usize {
        let n = self.n_states;
        assert!(
            ip < n && i < n && jp < n && j < n,
            "tensor index out of range"
        );
        ((ip * n + i) * n + jp) * n + j
    }

    /// `F^{ip i}_{jp j}`.
    pub fn get(&self, ip: usize, i: usize, jp: usize, j: usize) -> Option<C64> {
        self.values[self.offset(ip, i, jp, j)]
    }

    pub fn set(&mut self, ip: usize, i: usize, jp: usize, j: usize, value: C64) {
        let k = self.offset(ip, i, jp, j);
        self.values[k] = Some(value);
    }

    pub fn set_real(&mut self, ip: usize, i: usize, jp: usize, j: usize, value: f64) {
        self.set(ip, i, jp, j, C64::new(value, 0.0));
    }

    /// Tensor of one realization from its amplitude matrix
    /// `a[j][i] = <j|U₀†U|i>`.
    pub fn from_amplitudes<R: AsRef<[C64]>>(a: &[R]) -> Self {
        let n = a.len();
        let mut t = Self::empty(n);
        for ip in 0..n {
            for i in 0..n {
                for jp in 0..n {
                    for j in 0..n {
                        t.set(ip, i, jp, j, a[jp].as_ref()[i] * a[j].as_ref()[ip].conj());
                    }
                }
            }
        }
        t
    }

    /// All `(i', i, j', j)` with a value.
    pub fn known(&self) -> impl Iterator<Item = ([usize; 4], C64)> + '_ {
        let n = self.n_states;
        self.values.iter().enumerate().filter_map(move |(k, v)| {
            v.map(|z| ([k / (n * n * n), (k / (n * n)) % n, (k / n) % n, k % n], z))
        })
    }

    /// Largest `|F^{i'i}_{j'j} - conj(F^{ii'}_{jj'})|` over pairs where both
    /// elements are known.
    pub fn conjugation_asymmetry(&self) -> f64 {
        self.known()
            .filter_map(|([ip, i, jp, j], z)| self.get(i, ip, j, jp).map(|w| (z - w.conj()).norm()))
            .fold(0.0, f64::max)
    }

    /// Weighted contraction; fails if a needed element has no value.
    pub fn contract(&self, (w_diag, w_off): (f64, f64)) -> Result<f64> {
        let n = self.n_states;
        let need = |ip, i, jp, j| {
            self.get(ip, i, jp, j).ok_or_else(|| {
                invalid(
                    "tensor",
                    format!("element F^{{{ip}{i}}}_{{{jp}{j}}} has no value"),
                )
            })
        };
        let mut diag = C64::new(0.0, 0.0);
        let mut off = C64::new(0.0, 0.0);
        for i in 0..n {
            diag += need(i, i, i, i)?;
            for j in 0..n {
                if i != j {
                    off += need(i, i, j, j)? + need(j, i, i, j)?;
                }
            }
        }
        Ok((diag * w_diag + off * w_off).re)
    }
}

/// Contraction of a single realization's amplitude matrix; equals
/// `FidelityTensor::from_amplitudes(a).contract(weights)` without building
/// the tensor.
pub fn amplitude_fidelity<R: AsRef<[C64]>>(a: &[R], (w_diag, w_off): (f64, f64)) -> f64 {
    let n = a.len();
    let at = |j: usize, i: usize| a[j].as_ref()[i];
    let mut diag = 0.0;
    let mut off = 0.0;
    for i in 0..n {
        diag += at(i, i).norm_sqr();
        for j in 0..n {
            if i != j {
                off += at(j, i).norm_sqr() + (at(i, i) * at(j, j).conj()).re;
            }
        }
    }
    w_diag * diag + w_off * off
}

/// How a fidelity was evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MethodKind {
    Analytic,
    MonteCarlo,
    Quadrature,
}

/// Evaluation route for a gate fidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    /// Closed-form tensor elements.
    Analytic,
    /// Numerical integration over the area distribution(s).
    Quadrature,
    /// Sampling of pulse areas.
    MonteCarlo { samples: usize, seed: u64 },
}

impl Method {
    pub fn kind(&self) -> MethodKind {
        match self {
            Method::Analytic => MethodKind::Analytic,
            Method::Quadrature => MethodKind::Quadrature,
            Method::MonteCarlo { .. } => MethodKind::MonteCarlo,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateFidelityResult {
    pub fidelity: f64,
    pub one_minus_f: f64,
    pub method: MethodKind,
    /// Zero for deterministic methods.
    pub stderr: f64,
    pub context: GateContext,
    /// Gate duration (s); for the two-bit gate the sum of the three pulses.
    pub nominal_time: f64,
}

impl GateFidelityResult {
    pub(crate) fn new(
        fidelity: f64,
        method: MethodKind,
        stderr: f64,
        context: GateContext,
        nominal_time: f64,
    ) -> Self {
        Self {
            fidelity,
            one_minus_f: 1.0 - fidelity,
            method,
            stderr,
            context,
            nominal_time,
        }
    }
}

/// Fractional error of the pulse area, `σ(A)/⟨A⟩ = √(τ/t)`.
pub fn fractional_error(t: f64, tau: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid("t", "must be positive"));
    }
    if !(tau >= 0.0) {
        return Err(invalid("tau", "must be nonnegative"));
    }
    Ok((tau / t).sqrt())
}

/// `σ²(A)/σ²(A')` between a carrier π-pulse and a sideband π-pulse at the
/// same τ; equals `Ω/Ω' = √N_a/η`.
pub fn pi_pulse_variance_ratio(ctx: &GateContext) -> Result<f64> {
    let tau = if ctx.tau > 0.0 { ctx.tau } else { 1.0 };
    let wp = ctx.omega_prime();
    let carrier = AreaDistribution::new(std::f64::consts::PI / ctx.omega, tau, ctx.omega)?;
    let sideband = AreaDistribution::new(std::f64::consts::PI / wp, tau, wp)?;
    Ok(carrier.variance() / sideband.variance())
}
