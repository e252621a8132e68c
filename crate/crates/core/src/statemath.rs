// Copyright 2026 The decogate Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex linear algebra on the small Hilbert spaces used by the gate
//! models (dimension 18 at most).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Entrywise `max |m - m^dag|` allowed for a density matrix.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Allowed `|Tr rho - 1|`.
pub const TRACE_TOL: f64 = 1e-12;
/// Smallest eigenvalue still accepted as positive semidefinite.
pub const EIGEN_FLOOR: f64 = -1e-10;

const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix in row-major dense storage.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        Self {
            dim,
            data: vec![C64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let d: Vec<C64> = diag.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_diag(&d)
    }

    /// Builds a matrix from rows. Fails if the rows do not form a square
    /// array or contain non-finite values.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(crate::error::invalid("matrix", "no rows"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        let m = Self { dim, data };
        if !m.is_finite() {
            return Err(crate::error::invalid("matrix", "non-finite entry"));
        }
        Ok(m)
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        let n = a.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = a[i] * b[j].conj();
            }
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |m - m^dag|` entrywise.
    pub fn hermiticity_error(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Replaces the matrix by `(m + m^dag) / 2`.
    pub fn symmetrize(&mut self) {
        let n = self.dim;
        for i in 0..n {
            self[(i, i)].im = 0.0;
            for j in (i + 1)..n {
                let avg = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
                self[(i, j)] = avg;
                self[(j, i)] = avg.conj();
            }
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| {
                let row = &self.data[i * self.dim..(i + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    /// `max |self - other|` entrywise.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix product dimension mismatch");
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker (tensor) product `a ⊗ b`.
pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (na, nb) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(na * nb);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Spectral decomposition `m = V diag(values) V^dag` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Eigenvectors stored as columns.
    pub vectors: ComplexMatrix,
}

impl Eigen {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let d = ComplexMatrix::from_real_diag(&self.values);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

/// Hermiticity tolerance scaled to the matrix magnitude.
fn hermitian_tolerance(m: &ComplexMatrix) -> f64 {
    HERMITIAN_TOL * m.max_abs().max(1.0)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Each rotation first removes the phase of the pivot `m[p][q]` and then
/// applies the real symmetric Jacobi rotation that annihilates it.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<Eigen> {
    let herr = m.hermiticity_error();
    if herr > hermitian_tolerance(m) {
        return Err(Error::NotHermitian(herr));
    }
    let n = m.dim();
    let mut a = m.clone();
    a.symmetrize();
    let mut v = ComplexMatrix::identity(n);

    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let mut converged = n == 1;
    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                let g = apq.norm();
                if g <= 1e-300 || g <= 1e-18 * scale {
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    continue;
                }
                let phase = apq / g;
                let zeta = (a[(q, q)].re - a[(p, p)].re) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let t = if zeta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // R = diag(1, conj(phase)) * [[c, s], [-s, c]]
                let r_pp = C64::new(c, 0.0);
                let r_pq = C64::new(s, 0.0);
                let r_qp = -phase.conj() * s;
                let r_qq = phase.conj() * c;

                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * r_pp + akq * r_qp;
                    a[(k, q)] = akp * r_pq + akq * r_qq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = r_pp.conj() * apk + r_qp.conj() * aqk;
                    a[(q, k)] = r_pq.conj() * apk + r_qq.conj() * aqk;
                }
                a[(p, q)] = C64::new(0.0, 0.0);
                a[(q, p)] = C64::new(0.0, 0.0);
                a[(p, p)].im = 0.0;
                a[(q, q)].im = 0.0;

                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * r_pp + vkq * r_qp;
                    v[(k, q)] = vkp * r_pq + vkq * r_qq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence(JACOBI_MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new_col)] = v[(k, old_col)];
        }
    }
    Ok(Eigen { values, vectors })
}

/// Electronic level of one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Level {
    G,
    E,
    /// Auxiliary level reached by the `q = 1` polarization.
    EPrime,
}

impl Level {
    pub const ALL: [Level; 3] = [Level::G, Level::E, Level::EPrime];

    pub fn index(self) -> usize {
        match self {
            Level::G => 0,
            Level::E => 1,
            Level::EPrime => 2,
        }
    }
}

/// Label of a basis state of the two-ion register plus the bus phonon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisLabel {
    pub ion1: Level,
    pub ion2: Level,
    /// Phonon number of the centre-of-mass mode, 0 or 1.
    pub phonon: u8,
}

/// Dimension of the truncated two-ion + phonon space (3 x 3 x 2).
pub const TWO_ION_DIM: usize = 18;

impl BasisLabel {
    pub const fn new(ion1: Level, ion2: Level, phonon: u8) -> Self {
        Self { ion1, ion2, phonon }
    }

    /// Position in the 18-dimensional product basis (ion1 major, phonon minor).
    pub fn index(&self) -> usize {
        debug_assert!(self.phonon <= 1);
        (self.ion1.index() * 3 + self.ion2.index()) * 2 + self.phonon as usize
    }

    pub fn from_index(idx: usize) -> Self {
        assert!(idx < TWO_ION_DIM, "basis index {idx} out of range");
        let phonon = (idx % 2) as u8;
        let ions = idx / 2;
        Self {
            ion1: Level::ALL[ions / 3],
            ion2: Level::ALL[ions % 3],
            phonon,
        }
    }

    /// All 18 labels in index order.
    pub fn two_ion_basis() -> Vec<BasisLabel> {
        (0..TWO_ION_DIM).map(Self::from_index).collect()
    }

    /// Logical input states `|gg0>, |ge0>, |eg0>, |ee0>` in that order.
    pub fn logical_two_bit() -> [BasisLabel; 4] {
        use Level::*;
        [
            BasisLabel::new(G, G, 0),
            BasisLabel::new(G, E, 0),
            BasisLabel::new(E, G, 0),
            BasisLabel::new(E, E, 0),
        ]
    }

    /// The one-bit basis `|g>, |e>` (ion 1 only).
    pub fn one_bit_basis() -> Vec<BasisLabel> {
        vec![
            BasisLabel::new(Level::G, Level::G, 0),
            BasisLabel::new(Level::E, Level::G, 0),
        ]
    }
}

/// A density matrix, optionally tagged with basis labels.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    pub matrix: ComplexMatrix,
    pub basis: Option<Vec<BasisLabel>>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Self {
        Self {
            matrix,
            basis: None,
        }
    }

    pub fn with_basis(matrix: ComplexMatrix, basis: Vec<BasisLabel>) -> Result<Self> {
        if basis.len() != matrix.dim() {
            return Err(Error::DimensionMismatch {
                expected: matrix.dim(),
                got: basis.len(),
            });
        }
        Ok(Self {
            matrix,
            basis: Some(basis),
        })
    }

    /// `|psi><psi|` for a (not necessarily normalized) vector; normalizes.
    pub fn pure(psi: &[C64]) -> Self {
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = psi.iter().map(|z| z / norm).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// Projector onto basis state `k` of a `dim`-dimensional space.
    pub fn basis_state(dim: usize, k: usize) -> Self {
        let mut m = ComplexMatrix::zeros(dim);
        m[(k, k)] = C64::new(1.0, 0.0);
        Self::new(m)
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Trace distance `½ Tr|a - b|`.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let mut diff = &self.matrix - &other.matrix;
        diff.symmetrize();
        let eig = hermitian_eigen(&diff)?;
        Ok(0.5 * eig.values.iter().map(|v| v.abs()).sum::<f64>())
    }
}

/// Outcome of [`validate_density`] with the measured violation magnitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityReport {
    pub finite: bool,
    pub hermiticity_error: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

impl DensityReport {
    pub fn hermitian(&self) -> bool {
        self.finite && self.hermiticity_error <= HERMITIAN_TOL
    }

    pub fn unit_trace(&self) -> bool {
        self.finite && self.trace_error <= TRACE_TOL
    }

    pub fn positive(&self) -> bool {
        self.finite && self.min_eigenvalue >= EIGEN_FLOOR
    }

    pub fn is_valid(&self) -> bool {
        self.hermitian() && self.unit_trace() && self.positive()
    }
}

/// Checks Hermiticity, unit trace and positivity of a density matrix.
pub fn validate_density(rho: &DensityMatrix) -> DensityReport {
    let m = &rho.matrix;
    let finite = m.is_finite();
    if !finite {
        return DensityReport {
            finite,
            hermiticity_error: f64::NAN,
            trace_error: f64::NAN,
            min_eigenvalue: f64::NAN,
        };
    }
    let hermiticity_error = m.hermiticity_error();
    let tr = m.trace();
    let trace_error = (tr - C64::new(1.0, 0.0)).norm();
    // Positivity is judged on the Hermitian part; the Hermiticity check above
    // reports any anti-Hermitian component separately.
    let mut h = m.clone();
    h.symmetrize();
    let min_eigenvalue = match hermitian_eigen(&h) {
        Ok(e) => e.values[0],
        Err(_) => f64::NAN,
    };
    DensityReport {
        finite,
        hermiticity_error,
        trace_error,
        min_eigenvalue,
    }
}
