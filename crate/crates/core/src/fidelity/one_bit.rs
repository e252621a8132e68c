// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64 as C64;
use rand_distr::Distribution;

use super::{amplitude_fidelity, FidelityTensor, GateFidelityResult, Method, ONE_BIT_WEIGHTS};
use crate::decoherence::montecarlo::{parallel_moments, AreaSampler};
use crate::decoherence::{kernel_integrals, AreaDistribution};
use crate::error::{invalid, Result};
use crate::gates::{ideal_one_bit_gate, one_bit_unitary, GateContext};
use crate::statemath::ComplexMatrix;

fn check_time(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(invalid("t", "must be positive and finite"))
    }
}

fn check_state(name: &'static str, i: usize) -> Result<()> {
    if i < 2 {
        Ok(())
    } else {
        Err(invalid(
            name,
            format!("one-bit state index must be 0 or 1, got {i}"),
        ))
    }
}

/// `R̄_{i'i}(t) = E[U(A)|i><i'|U(A)†]` for a carrier pulse of nominal
/// duration `t`.
///
/// With `U(A) = cos(A/2) I + sin(A/2) M` the entries only involve
/// `E[cos²]`, `E[sin²]` and `E[sin cos]` of `A/2`, which are closed forms.
pub fn rbar_one_bit(i: usize, i_prime: usize, t: f64, ctx: &GateContext) -> Result<ComplexMatrix> {
    check_state("i", i)?;
    check_state("i_prime", i_prime)?;
    if !(t >= 0.0) {
        return Err(invalid("t", "must be nonnegative"));
    }
    ctx.validate()?;
    let k = kernel_integrals(t, ctx.omega, ctx.tau);
    let m = one_bit_unitary(std::f64::consts::PI, ctx.phi);
    let delta = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
    let mut r = ComplexMatrix::zeros(2);
    for row in 0..2 {
        for col in 0..2 {
            let m_ri = m[(row, i)];
            let m_ci = m[(col, i_prime)].conj();
            let d_ri = delta(row, i);
            let d_ci = delta(col, i_prime);
            r[(row, col)] = C64::new(d_ri * d_ci * k.c2, 0.0)
                + (m_ci * d_ri + m_ri * d_ci) * k.z
                + m_ri * m_ci * k.s2;
        }
    }
    Ok(r)
}

/// Closed form of `F^{00}_{00} = E[cos²((A - Ωt)/2)]`.
pub fn appendix_one_f0000(t: f64, ctx: &GateContext) -> f64 {
    let wt = ctx.omega * t;
    if ctx.tau == 0.0 {
        return 1.0;
    }
    let x = ctx.omega * ctx.tau;
    let k = t / ctx.tau;
    let damping = (-0.5 * k * (x * x).ln_1p()).exp();
    let ka = k * x.atan();
    0.5 * (1.0 + damping * (wt.cos() * ka.cos() + wt.sin() * ka.sin()))
}

/// One-bit fidelity tensor. The named elements use [`appendix_one_f0000`];
/// the rest come from [`rbar_one_bit`].
pub fn appendix_one_tensor(t: f64, ctx: &GateContext) -> Result<FidelityTensor> {
    check_time(t)?;
    let mut tensor = rbar_tensor(t, ctx)?;
    let f = appendix_one_f0000(t, ctx);
    for (ip, i, jp, j) in [(0, 0, 0, 0), (1, 1, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)] {
        tensor.set_real(ip, i, jp, j, f);
    }
    tensor.set_real(1, 1, 0, 0, 1.0 - f);
    tensor.set_real(0, 0, 1, 1, 1.0 - f);
    Ok(tensor)
}

/// Every element as `<j'|U₀† R̄_{i'i} U₀|j>`.
pub(crate) fn rbar_tensor(t: f64, ctx: &GateContext) -> Result<FidelityTensor> {
    let u0 = ideal_one_bit_gate(t, ctx);
    let u0d = u0.adjoint();
    let mut tensor = FidelityTensor::empty(2);
    for ip in 0..2 {
        for i in 0..2 {
            let rotated = &(&u0d * &rbar_one_bit(i, ip, t, ctx)?) * &u0;
            for jp in 0..2 {
                for j in 0..2 {
                    tensor.set(ip, i, jp, j, rotated[(jp, j)]);
                }
            }
        }
    }
    Ok(tensor)
}

/// `a[j][i] = <j|U₀†U(A)|i>` for one realized area.
pub fn one_bit_amplitudes(area: f64, t: f64, ctx: &GateContext) -> Vec<Vec<C64>> {
    let w = &ideal_one_bit_gate(t, ctx).adjoint() * &one_bit_unitary(area, ctx.phi);
    (0..2)
        .map(|j| (0..2).map(|i| w[(j, i)]).collect())
        .collect()
}

/// Input-averaged fidelity of a carrier pulse of nominal duration `t`.
pub fn fidelity_one_bit(t: f64, ctx: &GateContext, method: Method) -> Result<GateFidelityResult> {
    check_time(t)?;
    ctx.validate()?;
    let sample = |a: f64| amplitude_fidelity(&one_bit_amplitudes(a, t, ctx), ONE_BIT_WEIGHTS);
    let (fidelity, stderr) = match method {
        Method::Analytic => (appendix_one_tensor(t, ctx)?.contract(ONE_BIT_WEIGHTS)?, 0.0),
        _ if ctx.tau == 0.0 => (sample(ctx.omega * t), 0.0),
        Method::Quadrature => {
            let d = AreaDistribution::new(t, ctx.tau, ctx.omega)?;
            (d.expect(sample)?.value, 0.0)
        }
        Method::MonteCarlo { samples, seed } => {
            if samples < 2 {
                return Err(invalid("samples", "need at least 2 samples"));
            }
            let sampler = AreaSampler::new(&AreaDistribution::new(t, ctx.tau, ctx.omega)?)?;
            let (m, _) = parallel_moments(samples, seed, 1, |rng, out| {
                out[0] = sample(sampler.sample(rng));
            });
            let est = m.estimate(0);
            (est.mean, est.stderr)
        }
    };
    Ok(GateFidelityResult::new(
        fidelity,
        method.kind(),
        stderr,
        *ctx,
        t,
    ))
}
