// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Averaged evolution under a static Hamiltonian.
//!
//! [`exact_map`] applies the Γ-averaged propagator through the spectral
//! decomposition of `H`: in the energy basis each coherence picks up
//! `(1 + i(E_n - E_m)τ)^{-t/τ}`. [`me2_integrate`] instead integrates the
//! second-order master equation
//!
//! ```text
//! dρ/dt = -i[H, ρ] - (τ/2)[H, [H, ρ]]
//! ```
//!
//! which agrees with the exact map to leading order in `‖H‖τ`.
//! Units: `ħ = 1`, energies in rad/s.

use rayon::prelude::*;

use crate::decoherence::evolve_energy_basis;
use crate::error::{invalid, Error, Result};
use crate::statemath::{hermitian_eigen, BasisLabel, ComplexMatrix, DensityMatrix, HERMITIAN_TOL};

/// Largest entrywise change tolerated when `dt` is halved.
pub const STEP_CHANGE_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct HamiltonianSpec {
    pub matrix: ComplexMatrix,
    pub basis: Option<Vec<BasisLabel>>,
}

impl HamiltonianSpec {
    /// Checks Hermiticity relative to the largest entry, then stores the
    /// Hermitian part.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let err = matrix.hermiticity_error();
        if !matrix.is_finite() || err > HERMITIAN_TOL * matrix.max_abs().max(1.0) {
            return Err(Error::NotHermitian(err));
        }
        let mut matrix = matrix;
        matrix.symmetrize();
        Ok(Self {
            matrix,
            basis: None,
        })
    }

    pub fn with_basis(matrix: ComplexMatrix, basis: Vec<BasisLabel>) -> Result<Self> {
        if basis.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                got: basis.len(),
            });
        }
        Ok(Self {
            basis: Some(basis),
            ..Self::new(matrix)?
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> Result<f64> {
        let e = hermitian_eigen(&self.matrix)?;
        Ok(e.values.iter().map(|v| v.abs()).fold(0.0, f64::max))
    }
}

fn check_dims(h: &HamiltonianSpec, rho0: &DensityMatrix) -> Result<()> {
    if h.dim() != rho0.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: rho0.dim(),
        });
    }
    Ok(())
}

/// Γ-averaged evolution of `rho0` for nominal time `t`.
pub fn exact_map(
    h: &HamiltonianSpec,
    rho0: &DensityMatrix,
    t: f64,
    tau: f64,
) -> Result<DensityMatrix> {
    check_dims(h, rho0)?;
    let eig = hermitian_eigen(&h.matrix)?;
    let v = &eig.vectors;
    let vd = v.adjoint();
    let in_energy = DensityMatrix::new(&(&vd * &rho0.matrix) * v);
    let evolved = evolve_energy_basis(&in_energy, &eig.values, t, tau)?;
    let mut out = &(v * &evolved.matrix) * &vd;
    out.symmetrize();
    Ok(DensityMatrix {
        matrix: out,
        basis: rho0.basis.clone(),
    })
}

/// `min(1e-3/‖H‖, t/1000)`.
pub fn default_dt(h: &HamiltonianSpec, t: f64) -> Result<f64> {
    let norm = h.spectral_norm()?;
    let by_norm = if norm > 0.0 {
        1e-3 / norm
    } else {
        f64::INFINITY
    };
    Ok(by_norm.min(t / 1000.0))
}

fn me2_rhs(h: &ComplexMatrix, rho: &ComplexMatrix, tau: f64) -> ComplexMatrix {
    let c = h.commutator(rho);
    let unitary = c.scale(num_complex::Complex64::new(0.0, -1.0));
    if tau == 0.0 {
        return unitary;
    }
    let damping = h
        .commutator(&c)
        .scale(num_complex::Complex64::new(-0.5 * tau, 0.0));
    &unitary + &damping
}

fn rk4(h: &ComplexMatrix, rho0: &ComplexMatrix, t: f64, tau: f64, steps: usize) -> ComplexMatrix {
    use num_complex::Complex64 as C64;
    let dt = t / steps as f64;
    let half = C64::new(0.5 * dt, 0.0);
    let full = C64::new(dt, 0.0);
    let sixth = C64::new(dt / 6.0, 0.0);
    let two = C64::new(2.0, 0.0);
    let mut rho = rho0.clone();
    for _ in 0..steps {
        let k1 = me2_rhs(h, &rho, tau);
        let k2 = me2_rhs(h, &(&rho + &k1.scale(half)), tau);
        let k3 = me2_rhs(h, &(&rho + &k2.scale(half)), tau);
        let k4 = me2_rhs(h, &(&rho + &k3.scale(full)), tau);
        let sum = &(&(&k1 + &k2.scale(two)) + &k3.scale(two)) + &k4;
        rho = &rho + &sum.scale(sixth);
        rho.symmetrize();
    }
    rho
}

/// Integrates the second-order master equation with classical RK4.
///
/// The step is rounded down so that a whole number of steps spans `t`. The
/// run is repeated with half the step; if the two results differ by more
/// than [`STEP_CHANGE_LIMIT`] entrywise the call fails. The finer result is
/// returned.
pub fn me2_integrate(
    h: &HamiltonianSpec,
    rho0: &DensityMatrix,
    t: f64,
    tau: f64,
    dt: f64,
) -> Result<DensityMatrix> {
    check_dims(h, rho0)?;
    if !(dt > 0.0) || !(dt <= t) {
        return Err(invalid("dt", "must satisfy 0 < dt <= t"));
    }
    if !(tau >= 0.0) {
        return Err(invalid("tau", "must be nonnegative"));
    }
    let steps = (t / dt).ceil() as usize;
    let coarse = rk4(&h.matrix, &rho0.matrix, t, tau, steps);
    let fine = rk4(&h.matrix, &rho0.matrix, t, tau, 2 * steps);
    let change = coarse.max_abs_diff(&fine);
    if !(change <= STEP_CHANGE_LIMIT) {
        return Err(Error::StepSizeTooLarge {
            change,
            limit: STEP_CHANGE_LIMIT,
        });
    }
    Ok(DensityMatrix {
        matrix: fine,
        basis: rho0.basis.clone(),
    })
}

/// Exact versus second-order evolution on a time grid.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct EvolutionComparison {
    pub times: Vec<f64>,
    pub trace_distance: Vec<f64>,
    pub max_offdiag_error: Vec<f64>,
}

impl EvolutionComparison {
    pub fn max_trace_distance(&self) -> f64 {
        self.trace_distance.iter().copied().fold(0.0, f64::max)
    }
}

/// Runs both evolutions at every grid time. `dt` defaults per time point to
/// [`default_dt`]; an explicit step is capped at the grid time.
pub fn compare_evolutions(
    h: &HamiltonianSpec,
    rho0: &DensityMatrix,
    t_grid: &[f64],
    tau: f64,
    dt: Option<f64>,
) -> Result<EvolutionComparison> {
    if t_grid.is_empty() {
        return Err(invalid("t_grid", "must not be empty"));
    }
    if t_grid.iter().any(|&t| !(t > 0.0)) || t_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("t_grid", "must be positive and strictly ascending"));
    }
    let rows: Vec<(f64, f64)> = t_grid
        .par_iter()
        .map(|&t| {
            let step = match dt {
                Some(d) => d.min(t),
                None => default_dt(h, t)?,
            };
            let exact = exact_map(h, rho0, t, tau)?;
            let me2 = me2_integrate(h, rho0, t, tau, step)?;
            let n = exact.dim();
            let mut off: f64 = 0.0;
            for r in 0..n {
                for c in 0..n {
                    if r != c {
                        off = off.max((exact.matrix[(r, c)] - me2.matrix[(r, c)]).norm());
                    }
                }
            }
            Ok((exact.trace_distance(&me2)?, off))
        })
        .collect::<Result<_>>()?;
    Ok(EvolutionComparison {
        times: t_grid.to_vec(),
        trace_distance: rows.iter().map(|r| r.0).collect(),
        max_offdiag_error: rows.iter().map(|r| r.1).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fidelity::appendix_one_f0000;
    use crate::gates::GateContext;
    use crate::statemath::validate_density;
    use num_complex::Complex64 as C64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    const OMEGA: f64 = 1e5;

    fn sigma_x_h() -> HamiltonianSpec {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = C64::new(0.5 * OMEGA, 0.0);
        m[(1, 0)] = C64::new(0.5 * OMEGA, 0.0);
        HamiltonianSpec::new(m).unwrap()
    }

    fn ground() -> DensityMatrix {
        DensityMatrix::basis_state(2, 0)
    }

    fn unitary_evolution(h: &HamiltonianSpec, rho: &DensityMatrix, t: f64) -> ComplexMatrix {
        let e = hermitian_eigen(&h.matrix).unwrap();
        let phases: Vec<C64> = e
            .values
            .iter()
            .map(|&v| C64::from_polar(1.0, -v * t))
            .collect();
        let u = &(&e.vectors * &ComplexMatrix::from_diag(&phases)) * &e.vectors.adjoint();
        &(&u * &rho.matrix) * &u.adjoint()
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::zeros(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            HamiltonianSpec::new(m),
            Err(Error::NotHermitian(_))
        ));
    }

    #[test]
    fn commuting_state_is_stationary() {
        let h = HamiltonianSpec::new(ComplexMatrix::from_real_diag(&[1e4, -3e4, 2e4])).unwrap();
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.2, 0.5, 0.3]));
        for &(t, tau) in &[(1e-4, 1e-8), (3e-3, 1e-6), (1e-5, 0.0)] {
            assert!(
                exact_map(&h, &rho, t, tau)
                    .unwrap()
                    .matrix
                    .max_abs_diff(&rho.matrix)
                    < 1e-15
            );
            let dt = default_dt(&h, t).unwrap();
            let m = me2_integrate(&h, &rho, t, tau, dt).unwrap();
            assert!(m.matrix.max_abs_diff(&rho.matrix) < 1e-15);
        }
    }

    #[test]
    fn zero_tau_is_unitary() {
        let h = sigma_x_h();
        for &t in &[0.3 / OMEGA, PI / OMEGA, 4.0 / OMEGA] {
            let u = unitary_evolution(&h, &ground(), t);
            let exact = exact_map(&h, &ground(), t, 0.0).unwrap();
            assert!(exact.matrix.max_abs_diff(&u) < 1e-10);
            let me2 = me2_integrate(&h, &ground(), t, 0.0, default_dt(&h, t).unwrap()).unwrap();
            assert!(me2.matrix.max_abs_diff(&exact.matrix) < 1e-8);
        }
    }

    #[test]
    fn excited_population_is_the_gate_element() {
        let ctx = GateContext::new(OMEGA, 0.1, 20, 0.0, 1e-8).unwrap();
        let t = PI / OMEGA;
        let rho = exact_map(&sigma_x_h(), &ground(), t, ctx.tau).unwrap();
        let f00 = appendix_one_f0000(t, &ctx);
        assert!((rho.matrix[(1, 1)].re - f00).abs() < 1e-12);
        assert!((rho.matrix[(1, 1)].re - 0.999_215_2).abs() < 1e-7);
        assert!(validate_density(&rho).is_valid());
    }

    #[test]
    fn second_order_decay_factor() {
        let h = sigma_x_h();
        let tau = 1e-2 / OMEGA;
        let t = PI / OMEGA;
        let e = hermitian_eigen(&h.matrix).unwrap();
        let to_energy = |m: &ComplexMatrix| &(&e.vectors.adjoint() * m) * &e.vectors;
        let start = to_energy(&ground().matrix)[(0, 1)].norm();
        let exact = to_energy(&exact_map(&h, &ground(), t, tau).unwrap().matrix)[(0, 1)].norm();
        let me2 = me2_integrate(&h, &ground(), t, tau, default_dt(&h, t).unwrap()).unwrap();
        let approx = to_energy(&me2.matrix)[(0, 1)].norm();
        let gamma = (OMEGA * tau).powi(2).ln_1p() / (2.0 * tau);
        assert!((exact / start - (-gamma * t).exp()).abs() < 1e-14);
        assert!((approx / start - exact / start).abs() < 1e-3);
    }

    #[test]
    fn comparison_thresholds() {
        let h = sigma_x_h();
        let grid: Vec<f64> = (1..=20).map(|k| k as f64 * PI / OMEGA / 20.0).collect();
        let unitary = compare_evolutions(&h, &ground(), &grid, 0.0, None).unwrap();
        assert!(unitary.max_trace_distance() < 1e-8);
        let small = compare_evolutions(&h, &ground(), &grid, 1e-3 / OMEGA, None).unwrap();
        assert!(small.max_trace_distance() < 1e-5, "{small:?}");
        let large = compare_evolutions(&h, &ground(), &[PI / OMEGA], 1e-1 / OMEGA, None).unwrap();
        assert!(large.trace_distance[0] > 1e-3, "{large:?}");
        assert!(large
            .trace_distance
            .iter()
            .chain(&large.max_offdiag_error)
            .all(|&d| d >= 0.0));
    }

    #[test]
    fn coarse_step_is_reported() {
        let h = sigma_x_h();
        let t = 50.0 / OMEGA;
        let err = me2_integrate(&h, &ground(), t, 0.0, t).unwrap_err();
        assert!(matches!(err, Error::StepSizeTooLarge { .. }));
        assert!(me2_integrate(&h, &ground(), t, 0.0, 2.0 * t).is_err());
    }

    fn random_hermitian(entries: &[(f64, f64)], n: usize) -> ComplexMatrix {
        let mut m = ComplexMatrix::zeros(n);
        let mut k = 0;
        for r in 0..n {
            for c in r..n {
                let (re, im) = entries[k];
                k += 1;
                m[(r, c)] = C64::new(re, if r == c { 0.0 } else { im });
                m[(c, r)] = m[(r, c)].conj();
            }
        }
        m
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_map_is_a_state_and_a_semigroup(
            entries in prop::collection::vec((-1e4f64..1e4, -1e4f64..1e4), 6),
            psi in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 3),
            t1 in 1e-5f64..1e-3,
            t2 in 1e-5f64..1e-3,
            log_tau in -8.0f64..-5.0,
        ) {
            let h = HamiltonianSpec::new(random_hermitian(&entries, 3)).unwrap();
            let v: Vec<C64> = psi.iter().map(|&(a, b)| C64::new(a, b) + 1e-3).collect();
            let rho = DensityMatrix::pure(&v);
            let tau = 10f64.powf(log_tau);
            let once = exact_map(&h, &rho, t1 + t2, tau).unwrap();
            let twice = exact_map(&h, &exact_map(&h, &rho, t1, tau).unwrap(), t2, tau).unwrap();
            prop_assert!(once.matrix.max_abs_diff(&twice.matrix) < 1e-11);
            prop_assert!(validate_density(&once).is_valid());
            let e = hermitian_eigen(&h.matrix).unwrap();
            let pops = |m: &ComplexMatrix| {
                let r = &(&e.vectors.adjoint() * m) * &e.vectors;
                (0..3).map(|k| r[(k, k)].re).collect::<Vec<_>>()
            };
            for (a, b) in pops(&rho.matrix).iter().zip(pops(&once.matrix)) {
                prop_assert!((a - b).abs() < 1e-12);
            }
        }

        #[test]
        fn me2_preserves_trace_and_hermiticity(
            entries in prop::collection::vec((-1e4f64..1e4, -1e4f64..1e4), 3),
            t in 1e-5f64..3e-4,
            log_tau in -9.0f64..-6.0,
        ) {
            let h = HamiltonianSpec::new(random_hermitian(&entries, 2)).unwrap();
            let tau = 10f64.powf(log_tau);
            let out = me2_integrate(&h, &ground(), t, tau, default_dt(&h, t).unwrap()).unwrap();
            prop_assert!((out.matrix.trace() - C64::new(1.0, 0.0)).norm() < 1e-10);
            prop_assert!(out.matrix.hermiticity_error() < 1e-12);
        }
    }
}
