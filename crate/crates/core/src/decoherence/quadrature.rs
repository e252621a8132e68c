// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Quadrature oracles: globally adaptive Gauss–Kronrod integration, Γ-weighted
//! expectations with controlled tail truncation, and Gauss rules for the
//! Γ weight built by Golub–Welsch.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64 as C64;

use super::special::{gamma_ln_pdf, gamma_ln_upper_tail_bound};
use crate::statemath::{hermitian_eigen, ComplexMatrix};

/// Absolute tolerance used by the Γ-expectation oracle.
pub const ORACLE_ABS_TOL: f64 = 1e-10;
/// Upper bound on the probability mass dropped beyond the integration range.
pub const TAIL_MASS_LIMIT: f64 = 1e-12;

const MAX_INTERVALS: usize = 4000;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Values that can be integrated: reals and complex numbers.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self>
{
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for C64 {
    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy)]
pub struct QuadResult<T> {
    pub value: T,
    /// Sum of the per-interval |Kronrod - Gauss| estimates.
    pub error: f64,
    pub intervals: usize,
    pub converged: bool,
}

struct Segment<T> {
    a: f64,
    b: f64,
    value: T,
    error: f64,
}

impl<T> PartialEq for Segment<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T> Eq for Segment<T> {}
impl<T> PartialOrd for Segment<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T> Ord for Segment<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<T: QuadValue>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for (j, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[j];
        if j % 2 == 1 {
            gauss = gauss + pair * WG[j / 2];
        }
    }
    let value = kronrod * half;
    let err = ((kronrod - gauss) * half).magnitude();
    (value, err)
}

/// Integrates `f` over `[breaks[0], breaks[last]]`, starting from the given
/// partition and always bisecting the segment with the largest error
/// estimate, until the total estimate drops below `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T: QuadValue>(
    f: impl Fn(f64) -> T,
    breaks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> QuadResult<T> {
    assert!(breaks.len() >= 2, "need at least one interval");
    let mut heap = BinaryHeap::new();
    let mut total = T::zero();
    let mut total_err = 0.0;
    for w in breaks.windows(2) {
        if w[1] <= w[0] {
            continue;
        }
        let (value, error) = gk15(&f, w[0], w[1]);
        total = total + value;
        total_err += error;
        heap.push(Segment {
            a: w[0],
            b: w[1],
            value,
            error,
        });
    }
    let mut converged = false;
    loop {
        let tol = abs_tol.max(rel_tol * total.magnitude());
        if total_err <= tol {
            converged = true;
            break;
        }
        if heap.len() >= MAX_INTERVALS {
            break;
        }
        let Some(worst) = heap.pop() else { break };
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Interval exhausted at machine precision.
            heap.push(Segment {
                error: 0.0,
                ..worst
            });
            total_err -= worst.error;
            continue;
        }
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        total = total - worst.value + v1 + v2;
        total_err += e1 + e2 - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
        });
    }
    // Re-sum from the segments to shed accumulated update drift.
    let mut value = T::zero();
    let mut error = 0.0;
    let intervals = heap.len();
    let mut segs = heap.into_vec();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    for s in segs {
        value = value + s.value;
        error += s.error;
    }
    QuadResult {
        value,
        error,
        intervals,
        converged,
    }
}

/// Integration range and initial partition for a Γ(shape, scale) weight.
#[derive(Debug, Clone)]
pub struct GammaSupport {
    pub breaks: Vec<f64>,
    /// Bound on the probability mass beyond the last breakpoint.
    pub tail_bound: f64,
}

/// Partition of `[0, hi]` resolving the bulk of Γ(shape, scale) on a grid of
/// half standard deviations, with `hi` pushed out until the Chernoff bound on
/// the dropped tail is below [`TAIL_MASS_LIMIT`].
pub fn gamma_support(shape: f64, scale: f64) -> GammaSupport {
    let mean = shape * scale;
    let sd = shape.sqrt() * scale;
    let lo = (mean - 12.0 * sd).max(0.0);
    let mut hi = mean + 12.0 * sd;
    let ln_limit = TAIL_MASS_LIMIT.ln();
    while gamma_ln_upper_tail_bound(shape, scale, hi) > ln_limit {
        hi += 4.0 * sd.max(scale);
    }
    let mut breaks = Vec::new();
    if lo > 0.0 {
        breaks.push(0.0);
    }
    let bulk_hi = (mean + 12.0 * sd).min(hi);
    let n_bulk = 48;
    for i in 0..=n_bulk {
        breaks.push(lo + (bulk_hi - lo) * i as f64 / n_bulk as f64);
    }
    if hi > bulk_hi {
        breaks.push(hi);
    }
    let tail_bound = gamma_ln_upper_tail_bound(shape, scale, hi).exp();
    GammaSupport { breaks, tail_bound }
}

/// `E[f(X)]` for `X ~ Γ(shape, scale)` by adaptive quadrature.
pub fn gamma_expectation<T: QuadValue>(
    shape: f64,
    scale: f64,
    f: impl Fn(f64) -> T,
) -> QuadResult<T> {
    let support = gamma_support(shape, scale);
    integrate(
        |x| {
            let p = gamma_ln_pdf(shape, scale, x).exp();
            if p == 0.0 {
                T::zero()
            } else {
                f(x) * p
            }
        },
        &support.breaks,
        ORACLE_ABS_TOL,
        0.0,
    )
}

/// `n`-point Gauss rule for the Γ(shape, scale) probability measure
/// (generalized Gauss–Laguerre with α = shape − 1), built from the
/// eigendecomposition of its Jacobi matrix. Weights sum to one.
pub fn gamma_gauss_rule(shape: f64, scale: f64, n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let alpha = shape - 1.0;
    // Centre the diagonal on the shape so that large shapes keep precision.
    let mut jac = ComplexMatrix::zeros(n);
    for j in 0..n {
        jac[(j, j)] = C64::new(2.0 * j as f64 + 1.0 + alpha - shape, 0.0);
        if j > 0 {
            let b = ((j as f64) * (j as f64 + alpha)).sqrt();
            jac[(j, j - 1)] = C64::new(b, 0.0);
            jac[(j - 1, j)] = C64::new(b, 0.0);
        }
    }
    let eig = hermitian_eigen(&jac).expect("Jacobi matrix is real symmetric");
    (0..n)
        .map(|k| {
            let x = (eig.values[k] + shape) * scale;
            let w = eig.vectors[(0, k)].norm_sqr();
            (x, w)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn integrates_polynomial_and_oscillatory() {
        let r = integrate(|x: f64| x * x, &[0.0, 3.0], 1e-14, 0.0);
        assert!((r.value - 9.0).abs() < 1e-13);
        let r = integrate(|x: f64| (50.0 * x).cos(), &[0.0, PI], 1e-12, 0.0);
        assert!(r.converged);
        assert!(r.value.abs() < 1e-11);
    }

    #[test]
    fn integrates_endpoint_singularity() {
        let r = integrate(|x: f64| 1.0 / x.sqrt(), &[0.0, 1.0], 1e-11, 0.0);
        assert!(r.converged);
        assert!((r.value - 2.0).abs() < 1e-10, "{}", r.value);
    }

    #[test]
    fn complex_integrand() {
        let r = integrate(|x: f64| C64::new(0.0, x).exp(), &[0.0, PI], 1e-13, 0.0);
        assert!((r.value - C64::new(0.0, 2.0)).norm() < 1e-12);
    }

    #[test]
    fn gamma_support_tail_is_small() {
        for &shape in &[0.5, 1.0, 10.0, 3141.59] {
            let s = gamma_support(shape, 2.0);
            assert!(s.tail_bound < TAIL_MASS_LIMIT, "shape {shape}");
        }
    }

    #[test]
    fn gauss_rule_moments() {
        for &(shape, scale) in &[(0.5, 1.0), (3.0, 0.2), (3141.59, 1e-3), (62_831.85, 1e-4)] {
            let rule = gamma_gauss_rule(shape, scale, 20);
            let m0: f64 = rule.iter().map(|&(_, w)| w).sum();
            let m1: f64 = rule.iter().map(|&(x, w)| x * w).sum();
            let m2: f64 = rule
                .iter()
                .map(|&(x, w)| (x - shape * scale).powi(2) * w)
                .sum();
            assert!((m0 - 1.0).abs() < 1e-12, "shape {shape}: {m0}");
            assert!((m1 / (shape * scale) - 1.0).abs() < 1e-12);
            assert!((m2 / (shape * scale * scale) - 1.0).abs() < 1e-8);
        }
    }
}
