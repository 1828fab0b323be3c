//! Fixed-size 4x4 complex matrix machinery for two-qubit states.
//!
//! Basis order is |00>, |01>, |10>, |11>, row-major. The partial transpose
//! always acts on the second qubit.

use nalgebra::{Complex, Matrix2, Matrix4, Vector4};
use serde::{Deserialize, Serialize};

use crate::error::StateError;

pub type C64 = Complex<f64>;
pub type Matrix2c = Matrix2<C64>;
pub type Matrix4c = Matrix4<C64>;
pub type Ket = Vector4<C64>;

/// Tolerances applied when a matrix is validated as a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max allowed |m_ij - conj(m_ji)|.
    pub hermitian: f64,
    /// Max allowed |tr m - 1|.
    pub trace: f64,
    /// Smallest eigenvalue accepted as positive semidefinite.
    pub psd_floor: f64,
}

pub const VALIDATION: Tolerances = Tolerances {
    hermitian: 1e-12,
    trace: 1e-12,
    psd_floor: -1e-10,
};

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn r(re: f64) -> C64 {
    Complex::new(re, 0.0)
}

/// Pauli matrix sigma_i for i in 0..=3 (sigma_0 is the identity).
pub fn pauli(i: usize) -> Matrix2c {
    let (o, z) = (r(1.0), r(0.0));
    match i {
        0 => Matrix2::new(o, z, z, o),
        1 => Matrix2::new(z, o, o, z),
        2 => Matrix2::new(z, c(0.0, -1.0), c(0.0, 1.0), z),
        3 => Matrix2::new(o, z, z, -o),
        _ => panic!("pauli index {i} out of range"),
    }
}

pub fn kron(a: &Matrix2c, b: &Matrix2c) -> Matrix4c {
    Matrix4c::from_fn(|row, col| a[(row / 2, col / 2)] * b[(row % 2, col % 2)])
}

fn hermiticity_deviation(m: &Matrix4c) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..4 {
        for j in i..4 {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

fn check_finite(m: &Matrix4c) -> Result<(), StateError> {
    for row in 0..4 {
        for col in 0..4 {
            let z = m[(row, col)];
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(StateError::NonFinite { row, col });
            }
        }
    }
    Ok(())
}

fn sorted_eigenvalues(m: &Matrix4c) -> [f64; 4] {
    let ev = m.symmetric_eigenvalues();
    let mut out = [ev[0], ev[1], ev[2], ev[3]];
    out.sort_by(|a, b| a.total_cmp(b));
    out
}

/// Ascending eigenvalues of a Hermitian 4x4 matrix.
pub fn hermitian_eigenvalues(m: &Matrix4c) -> Result<[f64; 4], StateError> {
    check_finite(m)?;
    let deviation = hermiticity_deviation(m);
    if deviation > VALIDATION.hermitian {
        return Err(StateError::NotHermitian { deviation });
    }
    Ok(sorted_eigenvalues(m))
}

/// A validated two-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    m: Matrix4c,
}

impl DensityMatrix {
    pub fn from_elements(entries: [[C64; 4]; 4]) -> Result<Self, StateError> {
        Self::from_matrix(Matrix4c::from_fn(|i, j| entries[i][j]))
    }

    pub fn from_matrix(m: Matrix4c) -> Result<Self, StateError> {
        let ev = hermitian_eigenvalues(&m)?;
        let deviation = (m.trace() - r(1.0)).norm();
        if deviation > VALIDATION.trace {
            return Err(StateError::TraceNotOne { deviation });
        }
        if ev[0] < VALIDATION.psd_floor {
            return Err(StateError::NotPositiveSemidefinite { min_eigenvalue: ev[0] });
        }
        Ok(Self { m })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            m: Matrix4c::identity() * r(0.25),
        }
    }

    /// Projector onto `ket`, normalized.
    pub fn pure(ket: &Ket) -> Result<Self, StateError> {
        let norm = ket.norm();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(StateError::TraceNotOne { deviation: 1.0 });
        }
        let v = ket / r(norm);
        Self::from_matrix(v * v.adjoint())
    }

    pub fn bell(kind: Bell) -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let ket = match kind {
            Bell::PhiPlus => Ket::new(r(h), r(0.0), r(0.0), r(h)),
            Bell::PhiMinus => Ket::new(r(h), r(0.0), r(0.0), r(-h)),
            Bell::PsiPlus => Ket::new(r(0.0), r(h), r(h), r(0.0)),
            Bell::PsiMinus => Ket::new(r(0.0), r(h), r(-h), r(0.0)),
        };
        Self { m: ket * ket.adjoint() }
    }

    /// Convex combination `sum_k w_k rho_k`; weights must be nonnegative.
    pub fn mix(parts: &[(f64, &DensityMatrix)]) -> Result<Self, StateError> {
        let m = parts
            .iter()
            .fold(Matrix4c::zeros(), |acc, (w, rho)| acc + rho.m * r(*w));
        Self::from_matrix(m)
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    pub fn entries(&self) -> [[C64; 4]; 4] {
        let mut out = [[r(0.0); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                *z = self.m[(i, j)];
            }
        }
        out
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        sorted_eigenvalues(&self.m)
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.eigenvalues().iter().filter(|&&x| x > tol).count()
    }

    pub fn purity(&self) -> f64 {
        (self.m * self.m).trace().re
    }

    /// Expectation value <psi|rho|psi> for a normalized ket.
    pub fn expectation(&self, ket: &Ket) -> f64 {
        (ket.adjoint() * self.m * ket)[(0, 0)].re
    }

    /// `U rho U^dagger` with `U = ua (x) ub`.
    pub fn apply_local(&self, ua: &Matrix2c, ub: &Matrix2c) -> Self {
        let u = kron(ua, ub);
        Self {
            m: u * self.m * u.adjoint(),
        }
    }

    /// Principal square root, with eigenvalues clamped at zero.
    pub fn sqrt(&self) -> Matrix4c {
        let eig = self.m.symmetric_eigen();
        let roots = eig.eigenvalues.map(|x| r(x.max(0.0).sqrt()));
        let v = eig.eigenvectors;
        v * Matrix4c::from_diagonal(&roots) * v.adjoint()
    }

    /// Wraps a matrix that is a state by construction (closed-form mixtures).
    pub(crate) fn from_trusted(m: Matrix4c) -> Self {
        Self { m }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bell {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// A Hermitian 4x4 matrix with no trace or positivity constraint (holds rho^Gamma).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix4 {
    m: Matrix4c,
}

impl HermitianMatrix4 {
    pub fn new(m: Matrix4c) -> Result<Self, StateError> {
        check_finite(&m)?;
        let deviation = hermiticity_deviation(&m);
        if deviation > VALIDATION.hermitian {
            return Err(StateError::NotHermitian { deviation });
        }
        Ok(Self { m })
    }

    pub fn matrix(&self) -> &Matrix4c {
        &self.m
    }

    pub fn eigenvalues(&self) -> [f64; 4] {
        sorted_eigenvalues(&self.m)
    }

    pub fn trace(&self) -> f64 {
        self.m.trace().re
    }

    pub fn determinant(&self) -> f64 {
        self.m.determinant().re
    }

    pub fn partial_transpose(&self) -> Self {
        Self {
            m: transpose_second(&self.m),
        }
    }
}

fn transpose_second(m: &Matrix4c) -> Matrix4c {
    let mut out = Matrix4c::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + l, 2 * k + j)] = m[(2 * i + j, 2 * k + l)];
                }
            }
        }
    }
    out
}

/// rho^Gamma: transpose of the second qubit's indices.
pub fn partial_transpose(rho: &DensityMatrix) -> HermitianMatrix4 {
    HermitianMatrix4 {
        m: transpose_second(&rho.m),
    }
}

/// Largest entrywise modulus of `a - b`.
pub fn max_entry_diff(a: &Matrix4c, b: &Matrix4c) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// The moments `pi_n = tr[(rho^Gamma)^n]`, n = 1..4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSet {
    pub pi1: f64,
    pub pi2: f64,
    pub pi3: f64,
    pub pi4: f64,
}

impl MomentSet {
    pub fn from_eigenvalues(ev: &[f64; 4]) -> Self {
        let power_sum = |n: i32| ev.iter().map(|x| x.powi(n)).sum::<f64>();
        Self {
            pi1: power_sum(1),
            pi2: power_sum(2),
            pi3: power_sum(3),
            pi4: power_sum(4),
        }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.pi1, self.pi2, self.pi3, self.pi4]
    }
}

/// Trace powers of rho^Gamma computed from explicit matrix products.
pub fn moments(rho: &DensityMatrix) -> MomentSet {
    let g = transpose_second(&rho.m);
    let g2 = g * g;
    MomentSet {
        pi1: g.trace().re,
        pi2: g2.trace().re,
        pi3: (g2 * g).trace().re,
        pi4: (g2 * g2).trace().re,
    }
}

/// Pauli-basis coordinates: local Bloch vectors `s`, `p` and correlations `beta`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochForm {
    pub s: [f64; 3],
    pub p: [f64; 3],
    pub beta: [[f64; 3]; 3],
}

fn pauli_expectation(rho: &Matrix4c, i: usize, j: usize) -> f64 {
    (kron(&pauli(i), &pauli(j)) * rho).trace().re
}

pub fn bloch_decompose(rho: &DensityMatrix) -> BlochForm {
    let mut b = BlochForm::default();
    for i in 0..3 {
        b.s[i] = pauli_expectation(&rho.m, i + 1, 0);
        b.p[i] = pauli_expectation(&rho.m, 0, i + 1);
        for j in 0..3 {
            b.beta[i][j] = pauli_expectation(&rho.m, i + 1, j + 1);
        }
    }
    b
}

/// Inverse Pauli expansion; fails if the coordinates do not describe a state.
pub fn bloch_compose(b: &BlochForm) -> Result<DensityMatrix, StateError> {
    let mut m = Matrix4c::identity();
    for i in 0..3 {
        m += kron(&pauli(i + 1), &pauli(0)) * r(b.s[i]);
        m += kron(&pauli(0), &pauli(i + 1)) * r(b.p[i]);
        for j in 0..3 {
            m += kron(&pauli(i + 1), &pauli(j + 1)) * r(b.beta[i][j]);
        }
    }
    DensityMatrix::from_matrix(m * r(0.25))
}
