// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Trapped-ion gate actions parameterized by pulse area.
//!
//! The one-bit gate is a carrier rotation of a single ion. The two-bit gate
//! is the three-pulse sideband sequence on ion 1 (π, `q = 0`), ion 2 (2π,
//! `q = 1`) and ion 1 again (π, `q = 0`), acting on the 18-state space of two
//! three-level ions and a centre-of-mass mode truncated to phonons {0, 1}.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::statemath::{BasisLabel, ComplexMatrix, Level, TWO_ION_DIM};

/// Physical parameters of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateContext {
    /// Mean carrier Rabi frequency Ω (rad/s).
    pub omega: f64,
    /// Lamb–Dicke parameter η.
    pub eta: f64,
    /// Number of ions in the trap, N_a.
    pub n_ions: u32,
    /// Laser phase φ (rad).
    pub phi: f64,
    /// Scaling time τ (s).
    pub tau: f64,
}

impl GateContext {
    pub fn new(omega: f64, eta: f64, n_ions: u32, phi: f64, tau: f64) -> Result<Self> {
        let ctx = Self {
            omega,
            eta,
            n_ions,
            phi,
            tau,
        };
        ctx.validate()?;
        Ok(ctx)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(invalid(
                "omega",
                format!("must be positive, got {}", self.omega),
            ));
        }
        if !(self.eta > 0.0 && self.eta < 1.0) {
            return Err(invalid(
                "eta",
                format!("must lie in (0, 1), got {}", self.eta),
            ));
        }
        if self.n_ions < 1 {
            return Err(invalid("n_ions", "must be at least 1"));
        }
        if !self.phi.is_finite() {
            return Err(invalid("phi", "must be finite"));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(invalid(
                "tau",
                format!("must be nonnegative, got {}", self.tau),
            ));
        }
        Ok(())
    }

    /// Sideband Rabi frequency `Ω' = ηΩ/√N_a`.
    pub fn omega_prime(&self) -> f64 {
        self.eta * self.omega / (self.n_ions as f64).sqrt()
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self { tau, ..self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ion {
    One,
    Two,
}

/// Laser polarization: `Q0` drives `g ↔ e`, `Q1` drives `g ↔ e'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarization {
    Q0,
    Q1,
}

impl Polarization {
    fn excited(self) -> Level {
        match self {
            Polarization::Q0 => Level::E,
            Polarization::Q1 => Level::EPrime,
        }
    }
}

/// One red-sideband pulse of the two-bit sequence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseStep {
    pub target: Ion,
    pub polarization: Polarization,
    /// Nominal area `Ω' t_k`.
    pub nominal_area: f64,
    pub phase: f64,
}

/// Steps I, II, III of the universal two-bit gate.
pub fn universal_sequence() -> [PulseStep; 3] {
    [
        PulseStep {
            target: Ion::One,
            polarization: Polarization::Q0,
            nominal_area: PI,
            phase: 0.0,
        },
        PulseStep {
            target: Ion::Two,
            polarization: Polarization::Q1,
            nominal_area: 2.0 * PI,
            phase: 0.0,
        },
        PulseStep {
            target: Ion::One,
            polarization: Polarization::Q0,
            nominal_area: PI,
            phase: 0.0,
        },
    ]
}

/// Single-qubit rotation in the basis `(|g>, |e>)`:
/// `U|g> = cos(A/2)|g> - i e^{iφ} sin(A/2)|e>`,
/// `U|e> = cos(A/2)|e> - i e^{-iφ} sin(A/2)|g>`.
pub fn one_bit_unitary(area: f64, phi: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * area).sin_cos();
    let mi = C64::new(0.0, -1.0);
    let mut u = ComplexMatrix::zeros(2);
    u[(0, 0)] = C64::new(c, 0.0);
    u[(1, 1)] = C64::new(c, 0.0);
    u[(1, 0)] = mi * C64::from_polar(s, phi);
    u[(0, 1)] = mi * C64::from_polar(s, -phi);
    u
}

/// Ideal one-bit gate after nominal time `t`: rotation by `Ωt`.
pub fn ideal_one_bit_gate(t: f64, ctx: &GateContext) -> ComplexMatrix {
    one_bit_unitary(ctx.omega * t, ctx.phi)
}

/// Index pairs `(|x>_n|0>, |g>_n|1>)` coupled by a pulse, `x` being the
/// level selected by the polarization; the spectator ion is left as is.
fn coupled_pairs(step: &PulseStep) -> impl Iterator<Item = (usize, usize)> + '_ {
    let excited = step.polarization.excited();
    Level::ALL.into_iter().map(move |other| {
        let (up, down) = match step.target {
            Ion::One => (
                BasisLabel::new(excited, other, 0),
                BasisLabel::new(Level::G, other, 1),
            ),
            Ion::Two => (
                BasisLabel::new(other, excited, 0),
                BasisLabel::new(other, Level::G, 1),
            ),
        };
        (up.index(), down.index())
    })
}

/// Propagator of one sideband pulse with the given (fluctuating) area.
///
/// Within each coupled pair the generator is σ_x-like, so the pulse is the
/// 2×2 rotation `|x,0> → c|x,0> - i s e^{iφ}|g,1>`,
/// `|g,1> → c|g,1> - i s e^{-iφ}|x,0>` with `c, s = cos, sin(A/2)`. All other
/// basis states (including `|x,1>`, whose partner would need two phonons) are
/// left unchanged.
pub fn pulse_unitary(step: &PulseStep, area: f64) -> ComplexMatrix {
    let (s, c) = (0.5 * area).sin_cos();
    let mi = C64::new(0.0, -1.0);
    let mut u = ComplexMatrix::identity(TWO_ION_DIM);
    for (up, down) in coupled_pairs(step) {
        u[(up, up)] = C64::new(c, 0.0);
        u[(down, down)] = C64::new(c, 0.0);
        u[(down, up)] = mi * C64::from_polar(s, step.phase);
        u[(up, down)] = mi * C64::from_polar(s, -step.phase);
    }
    u
}

/// Applies [`pulse_unitary`] to a state vector in place.
pub fn apply_pulse(step: &PulseStep, area: f64, psi: &mut [C64]) {
    debug_assert_eq!(psi.len(), TWO_ION_DIM);
    let (s, c) = (0.5 * area).sin_cos();
    let mi = C64::new(0.0, -1.0);
    let to_down = mi * C64::from_polar(s, step.phase);
    let to_up = mi * C64::from_polar(s, -step.phase);
    for (up, down) in coupled_pairs(step) {
        let (a, b) = (psi[up], psi[down]);
        psi[up] = a * c + b * to_up;
        psi[down] = b * c + a * to_down;
    }
}

/// `U_III(A3) U_II(A2) U_I(A1)` for the universal sequence.
pub fn composite_unitary(areas: [f64; 3]) -> ComplexMatrix {
    let seq = universal_sequence();
    let mut u = ComplexMatrix::identity(TWO_ION_DIM);
    for (step, area) in seq.iter().zip(areas) {
        u = &pulse_unitary(step, area) * &u;
    }
    u
}

/// The target gate `|ε1>|ε2>|0> → (-1)^{ε1ε2}|ε1>|ε2>|0>`, identity elsewhere.
pub fn ideal_two_bit_gate() -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(TWO_ION_DIM);
    let ee0 = BasisLabel::new(Level::E, Level::E, 0).index();
    u[(ee0, ee0)] = C64::new(-1.0, 0.0);
    u
}

/// Sign of the ideal gate on logical state `i` (0..4).
pub(crate) fn ideal_two_bit_sign(i: usize) -> f64 {
    if i == 3 {
        -1.0
    } else {
        1.0
    }
}
