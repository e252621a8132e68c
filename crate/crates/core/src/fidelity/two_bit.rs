// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rand_chacha::ChaCha8Rng;
use rand_distr::Distribution;
use rayon::prelude::*;

use super::{
    amplitude_fidelity, FidelityTensor, GateFidelityResult, Method, MethodKind, TWO_BIT_WEIGHTS,
};
use crate::decoherence::montecarlo::{parallel_moments, stream, AreaSampler, Moments, SHARDS};
use crate::decoherence::quadrature::gamma_gauss_rule;
use crate::decoherence::{kernel_integrals, AreaDistribution};
use crate::error::{invalid, Result};
use crate::gates::{apply_pulse, ideal_two_bit_sign, universal_sequence, GateContext};
use crate::statemath::{BasisLabel, ComplexMatrix, TWO_ION_DIM};

/// Nodes per pulse of the product Gauss rule used by the quadrature route.
pub const TWO_BIT_GAUSS_NODES: usize = 24;

/// Minimum sample count for the sampled two-bit fidelity.
const MIN_SAMPLES: usize = 1000;

/// Nominal durations of the three pulses.
fn step_times(ctx: &GateContext) -> [f64; 3] {
    let wp = ctx.omega_prime();
    [PI / wp, 2.0 * PI / wp, PI / wp]
}

fn nominal_areas() -> [f64; 3] {
    [PI, 2.0 * PI, PI]
}

fn logical_indices() -> [usize; 4] {
    BasisLabel::logical_two_bit().map(|b| b.index())
}

type State = [C64; TWO_ION_DIM];
type Amplitudes = [[C64; 4]; 4];

/// Output states `W|i>` of the composite pulse for the four logical inputs.
fn logical_outputs(areas: [f64; 3]) -> [State; 4] {
    let seq = universal_sequence();
    logical_indices().map(|k| {
        let mut psi = [C64::new(0.0, 0.0); TWO_ION_DIM];
        psi[k] = C64::new(1.0, 0.0);
        for (step, &a) in seq.iter().zip(&areas) {
            apply_pulse(step, a, &mut psi);
        }
        psi
    })
}

fn amplitude_array(areas: [f64; 3]) -> Amplitudes {
    let out = logical_outputs(areas);
    let idx = logical_indices();
    std::array::from_fn(|j| std::array::from_fn(|i| out[i][idx[j]] * ideal_two_bit_sign(j)))
}

/// `a[j][i] = <j|U₀†W(A₁,A₂,A₃)|i>` on the logical subspace.
pub fn two_bit_amplitudes(areas: [f64; 3]) -> Vec<Vec<C64>> {
    amplitude_array(areas).iter().map(|r| r.to_vec()).collect()
}

struct TripleSampler([AreaSampler; 3]);

impl TripleSampler {
    fn new(ctx: &GateContext) -> Result<Self> {
        let wp = ctx.omega_prime();
        let [a, b, c] = step_times(ctx);
        let make = |t| AreaSampler::new(&AreaDistribution::new(t, ctx.tau, wp)?);
        Ok(Self([make(a)?, make(b)?, make(c)?]))
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> [f64; 3] {
        [
            self.0[0].sample(rng),
            self.0[1].sample(rng),
            self.0[2].sample(rng),
        ]
    }
}

/// Two-bit tensor from the closed-form kernels. Only the families entering
/// the fidelity contraction are filled in.
pub fn appendix_two_tensor(ctx: &GateContext) -> Result<FidelityTensor> {
    ctx.validate()?;
    let wp = ctx.omega_prime();
    let [t1, t2, _] = step_times(ctx);
    let k1 = kernel_integrals(t1, wp, ctx.tau);
    let k2 = kernel_integrals(t2, wp, ctx.tau);
    let (c1, s1, c2, s2, z) = (k1.c1, k1.s1, k1.c2, k1.s2, k1.z);

    let mut f = FidelityTensor::empty(4);
    for (ip, i, jp, j) in [(0, 0, 0, 0), (1, 1, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)] {
        f.set_real(ip, i, jp, j, 1.0);
    }
    f.set_real(2, 2, 2, 2, c2 * c2 + s2 * s2 * k2.c2 - 2.0 * z * z * k2.c1);
    f.set_real(3, 3, 3, 3, c2 * c2 + s2 * s2 - 2.0 * z * z);

    let f20 = c1 * c1 - s1 * s1 * k2.c1;
    for (ip, i, jp, j) in [(2, 0, 0, 2), (0, 2, 2, 0), (2, 1, 1, 2), (1, 2, 2, 1)] {
        f.set_real(ip, i, jp, j, f20);
    }
    let f30 = -c1 * c1 + s1 * s1;
    for (ip, i, jp, j) in [(3, 0, 0, 3), (0, 3, 3, 0), (3, 1, 1, 3), (1, 3, 3, 1)] {
        f.set_real(ip, i, jp, j, f30);
    }
    let f32 = -c2 * c2 - s2 * s2 * k2.c1 + z * z + z * z * k2.c1;
    f.set_real(3, 2, 2, 3, f32);
    f.set_real(2, 3, 3, 2, f32);

    for i in 0..4 {
        for j in 0..4 {
            if i != j {
                f.set_real(i, i, j, j, 0.0);
            }
        }
    }
    f.set_real(3, 3, 2, 3, 0.0);
    Ok(f)
}

/// Full two-bit tensor by a product Gauss rule over the three pulse areas.
pub fn quadrature_two_bit_tensor(ctx: &GateContext, nodes: usize) -> Result<FidelityTensor> {
    ctx.validate()?;
    if nodes == 0 {
        return Err(invalid("nodes", "must be positive"));
    }
    let rules: Vec<Vec<(f64, f64)>> = if ctx.tau == 0.0 {
        nominal_areas().iter().map(|&a| vec![(a, 1.0)]).collect()
    } else {
        let wp = ctx.omega_prime();
        step_times(ctx)
            .iter()
            .map(|&t| {
                let d = AreaDistribution::new(t, ctx.tau, wp)?;
                Ok(gamma_gauss_rule(d.shape(), d.scale(), nodes))
            })
            .collect::<Result<_>>()?
    };
    let partial: Vec<Vec<C64>> = rules[0]
        .par_iter()
        .map(|&(a1, w1)| {
            let mut acc = vec![C64::new(0.0, 0.0); 256];
            for &(a2, w2) in &rules[1] {
                for &(a3, w3) in &rules[2] {
                    let w = w1 * w2 * w3;
                    let t = FidelityTensor::from_amplitudes(&amplitude_array([a1, a2, a3]));
                    for (k, (_, z)) in t.known().enumerate() {
                        acc[k] += z * w;
                    }
                }
            }
            acc
        })
        .collect();
    let mut tensor = FidelityTensor::empty(4);
    for k in 0..256 {
        let z: C64 = partial.iter().map(|p| p[k]).sum();
        tensor.set(k / 64, (k / 16) % 4, (k / 4) % 4, k % 4, z);
    }
    Ok(tensor)
}

/// Sampled tensor with a standard error per element (modulus of the
/// complex standard error).
#[derive(Debug, Clone)]
pub struct TensorEstimate {
    pub tensor: FidelityTensor,
    stderr: Vec<f64>,
}

impl TensorEstimate {
    pub fn stderr(&self, ip: usize, i: usize, jp: usize, j: usize) -> f64 {
        self.stderr[((ip * 4 + i) * 4 + jp) * 4 + j]
    }

    /// `|estimate - value|` in standard errors; exact agreement with zero
    /// spread counts as zero.
    pub fn sigmas(&self, ip: usize, i: usize, jp: usize, j: usize, value: C64) -> f64 {
        let est = self
            .tensor
            .get(ip, i, jp, j)
            .expect("sampled tensor is complete");
        let diff = (est - value).norm();
        let se = self.stderr(ip, i, jp, j);
        if se > 0.0 {
            diff / se
        } else if diff <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Samples the full 256-element two-bit tensor from `n` independent
/// area triples.
pub fn mc_two_bit_tensor(ctx: &GateContext, n: usize, seed: u64) -> Result<TensorEstimate> {
    ctx.validate()?;
    if n < 2 {
        return Err(invalid("n", "need at least 2 samples"));
    }
    let fill = |areas: [f64; 3], out: &mut [f64]| {
        let a = amplitude_array(areas);
        let mut k = 0;
        for ip in 0..4 {
            for i in 0..4 {
                for jp in 0..4 {
                    for j in 0..4 {
                        let z = a[jp][i] * a[j][ip].conj();
                        out[k] = z.re;
                        out[k + 1] = z.im;
                        k += 2;
                    }
                }
            }
        }
    };
    let m = if ctx.tau == 0.0 {
        let mut m = Moments::new(512);
        let mut buf = vec![0.0; 512];
        fill(nominal_areas(), &mut buf);
        m.push(&buf);
        m.push(&buf);
        m
    } else {
        let sampler = TripleSampler::new(ctx)?;
        parallel_moments(n, seed, 512, |rng, out| fill(sampler.draw(rng), out)).0
    };
    let mut tensor = FidelityTensor::empty(4);
    let mut stderr = vec![0.0; 256];
    for (k, se) in stderr.iter_mut().enumerate() {
        let z = C64::new(m.mean()[2 * k], m.mean()[2 * k + 1]);
        tensor.set(k / 64, (k / 16) % 4, (k / 4) % 4, k % 4, z);
        *se = m.stderr(2 * k).hypot(m.stderr(2 * k + 1));
    }
    Ok(TensorEstimate { tensor, stderr })
}

/// Sampled two-bit fidelity; the standard error comes from the spread of
/// the per-shard means.
pub fn fidelity_mc_two_bit(ctx: &GateContext, n: usize, seed: u64) -> Result<GateFidelityResult> {
    ctx.validate()?;
    if n < MIN_SAMPLES {
        return Err(invalid("n", format!("need at least {MIN_SAMPLES} samples")));
    }
    let time = 4.0 * PI / ctx.omega_prime();
    let sample = |areas| amplitude_fidelity(&amplitude_array(areas), TWO_BIT_WEIGHTS);
    if ctx.tau == 0.0 {
        return Ok(GateFidelityResult::new(
            sample(nominal_areas()),
            MethodKind::MonteCarlo,
            0.0,
            *ctx,
            time,
        ));
    }
    let sampler = TripleSampler::new(ctx)?;
    let (total, shards) =
        parallel_moments(n, seed, 1, |rng, out| out[0] = sample(sampler.draw(rng)));
    let mean = total.mean()[0];
    let k = shards.len() as f64;
    let spread: f64 = shards
        .iter()
        .map(|s| (s.mean()[0] - mean).powi(2))
        .sum::<f64>()
        / (k - 1.0);
    let stderr = (spread / k).sqrt();
    Ok(GateFidelityResult::new(
        mean,
        MethodKind::MonteCarlo,
        stderr,
        *ctx,
        time,
    ))
}

/// Input-averaged fidelity of the universal two-bit gate.
pub fn fidelity_two_bit(ctx: &GateContext, method: Method) -> Result<GateFidelityResult> {
    ctx.validate()?;
    let time = 4.0 * PI / ctx.omega_prime();
    let fidelity = match method {
        Method::Analytic => appendix_two_tensor(ctx)?.contract(TWO_BIT_WEIGHTS)?,
        Method::Quadrature => {
            quadrature_two_bit_tensor(ctx, TWO_BIT_GAUSS_NODES)?.contract(TWO_BIT_WEIGHTS)?
        }
        Method::MonteCarlo { samples, seed } => return fidelity_mc_two_bit(ctx, samples, seed),
    };
    Ok(GateFidelityResult::new(
        fidelity,
        method.kind(),
        0.0,
        *ctx,
        time,
    ))
}

/// Sampled `R̄_{i'i} = E[W|i><i'|W†]` on the full 18-dimensional space,
/// returned in the order `i' * 4 + i`.
pub fn rbar_two_bit_mc(ctx: &GateContext, n: usize, seed: u64) -> Result<Vec<ComplexMatrix>> {
    ctx.validate()?;
    if n == 0 {
        return Err(invalid("n", "must be positive"));
    }
    let accumulate = |acc: &mut [ComplexMatrix], areas: [f64; 3]| {
        let out = logical_outputs(areas);
        for ip in 0..4 {
            for i in 0..4 {
                let m = &mut acc[ip * 4 + i];
                for r in 0..TWO_ION_DIM {
                    for c in 0..TWO_ION_DIM {
                        m[(r, c)] += out[i][r] * out[ip][c].conj();
                    }
                }
            }
        }
    };
    let empty = || vec![ComplexMatrix::zeros(TWO_ION_DIM); 16];
    let sums = if ctx.tau == 0.0 {
        let mut acc = empty();
        accumulate(&mut acc, nominal_areas());
        return Ok(acc);
    } else {
        let sampler = TripleSampler::new(ctx)?;
        let shards: Vec<Vec<ComplexMatrix>> = (0..SHARDS)
            .into_par_iter()
            .map(|k| {
                let quota = n / SHARDS + usize::from(k < n % SHARDS);
                let mut rng = stream(seed, k as u64);
                let mut acc = empty();
                for _ in 0..quota {
                    accumulate(&mut acc, sampler.draw(&mut rng));
                }
                acc
            })
            .collect();
        let mut total = empty();
        for shard in &shards {
            for (t, s) in total.iter_mut().zip(shard) {
                *t = &*t + s;
            }
        }
        total
    };
    let inv = C64::new(1.0 / n as f64, 0.0);
    Ok(sums.iter().map(|m| m.scale(inv)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statemath::{validate_density, DensityMatrix};

    fn ctx_at(omega_prime_tau: f64) -> GateContext {
        let c = GateContext::new(1e5, 0.1, 20, 0.0, 0.0).unwrap();
        c.with_tau(omega_prime_tau / c.omega_prime())
    }

    #[test]
    fn unitary_limit_elements() {
        let t = appendix_two_tensor(&ctx_at(0.0)).unwrap();
        for idx in [
            (2, 2, 2, 2),
            (3, 3, 3, 3),
            (2, 0, 0, 2),
            (3, 0, 0, 3),
            (3, 2, 2, 3),
        ] {
            let z = t.get(idx.0, idx.1, idx.2, idx.3).unwrap();
            assert!((z - C64::new(1.0, 0.0)).norm() < 1e-12, "{idx:?} = {z}");
        }
        for m in [
            Method::Analytic,
            Method::Quadrature,
            Method::MonteCarlo {
                samples: 1000,
                seed: 0,
            },
        ] {
            let f = fidelity_two_bit(&ctx_at(0.0), m).unwrap().fidelity;
            assert!((f - 1.0).abs() < 1e-12, "{m:?}: {f}");
        }
    }

    #[test]
    fn amplitudes_at_nominal_areas_are_identity() {
        let a = two_bit_amplitudes(nominal_areas());
        for (j, row) in a.iter().enumerate() {
            for (i, z) in row.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((z - C64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn closed_form_matches_quadrature() {
        for &x in &[1e-5, 1e-3, 3e-2, 1e-1] {
            let c = ctx_at(x);
            let closed = appendix_two_tensor(&c).unwrap();
            let quad = quadrature_two_bit_tensor(&c, TWO_BIT_GAUSS_NODES).unwrap();
            for ([ip, i, jp, j], z) in closed.known() {
                let w = quad.get(ip, i, jp, j).unwrap();
                assert!(
                    (z - w).norm() < 1e-11,
                    "x={x} F^{ip}{i}_{jp}{j}: {z} vs {w}"
                );
            }
            assert!(quad.conjugation_asymmetry() < 1e-12);
            let fa = fidelity_two_bit(&c, Method::Analytic).unwrap().fidelity;
            let fq = fidelity_two_bit(&c, Method::Quadrature).unwrap().fidelity;
            assert!((fa - fq).abs() < 1e-9);
        }
    }

    #[test]
    fn first_order_asymptote() {
        let c = ctx_at(1e-3);
        let r = fidelity_two_bit(&c, Method::Analytic).unwrap();
        assert!(
            (r.one_minus_f - 1.18e-3).abs() < 0.01e-3,
            "{}",
            r.one_minus_f
        );
        for &x in &[1e-5, 1e-4] {
            let r = fidelity_two_bit(&ctx_at(x), Method::Analytic).unwrap();
            let coeff = r.one_minus_f / x;
            assert!(
                (coeff / (3.0 * PI / 8.0) - 1.0).abs() < 2e-3,
                "x={x} coeff={coeff}"
            );
        }
    }

    #[test]
    fn sampled_tensor_matches_closed_form() {
        let c = ctx_at(1e-3);
        let est = mc_two_bit_tensor(&c, 200_000, 9).unwrap();
        let closed = appendix_two_tensor(&c).unwrap();
        for ([ip, i, jp, j], z) in closed.known() {
            assert!(est.sigmas(ip, i, jp, j, z) < 5.0, "F^{ip}{i}_{jp}{j}");
        }
        assert!(est.tensor.conjugation_asymmetry() < 1e-12);
    }

    #[test]
    fn sampled_fidelity_matches_closed_form() {
        let c = ctx_at(1e-3);
        let a = fidelity_two_bit(&c, Method::Analytic).unwrap();
        let mc = fidelity_mc_two_bit(&c, 200_000, 4).unwrap();
        assert!(mc.stderr > 0.0);
        assert!(
            (mc.fidelity - a.fidelity).abs() < 5.0 * mc.stderr,
            "{mc:?} vs {a:?}"
        );
        let tiny = fidelity_mc_two_bit(&c.with_tau(1e-20), 1000, 4).unwrap();
        assert!((tiny.fidelity - 1.0).abs() < 1e-9);
        assert!(fidelity_mc_two_bit(&c, 999, 4).is_err());
    }

    #[test]
    fn sampled_rbar_is_a_state_and_trace_preserving() {
        let c = ctx_at(1e-2);
        let r = rbar_two_bit_mc(&c, 5000, 2).unwrap();
        for ip in 0..4 {
            for i in 0..4 {
                let m = &r[ip * 4 + i];
                let want = if i == ip { 1.0 } else { 0.0 };
                assert!((m.trace() - C64::new(want, 0.0)).norm() < 1e-12);
                if i == ip {
                    let report = validate_density(&DensityMatrix::new(m.clone()));
                    assert!(report.is_valid(), "i={i}: {report:?}");
                }
            }
        }
    }
}
