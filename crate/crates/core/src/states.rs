//! Quantum states, probability distributions, and their entropies.
//!
//! All entropies are in bits (base-2 logarithms throughout the crate).

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermiticity_defect, projector, CMat, CVec, C64};

/// Tolerance for the Hermiticity and unit-trace checks of a state.
pub const STATE_TOL: f64 = 1e-10;
/// Eigenvalues in `[-STATE_TOL, 0)` are treated as floating-point noise and
/// clipped to zero; anything below is genuine negativity and rejected.
const EIG_CLIP: f64 = 1e-10;
/// Spectrum entries below this are dropped from entropy sums.
const ENTROPY_CUTOFF: f64 = 1e-12;

/// A Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMat,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positivity (up to `STATE_TOL`).
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}x{}",
                mat.nrows(),
                mat.ncols()
            )));
        }
        let defect = hermiticity_defect(&mat);
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::TraceNotOne(tr.re));
        }
        let eigs = hermitian_eigenvalues(&mat);
        if eigs[0] < -EIG_CLIP {
            return Err(Error::NegativeEigenvalue(eigs[0]));
        }
        Ok(Self { mat })
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self {
            mat: CMat::identity(d, d).scale(1.0 / d as f64),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        Self {
            mat: projector(psi.amplitudes()),
        }
    }

    /// Diagonal state with the given spectrum.
    pub fn from_distribution(p: &ProbabilityVector) -> Self {
        let n = p.len();
        let mut mat = CMat::zeros(n, n);
        for (i, &w) in p.weights().iter().enumerate() {
            mat[(i, i)] = C64::new(w, 0.0);
        }
        Self { mat }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Spectrum in ascending order, with floating-point noise clipped at zero.
    pub fn eigenvalues(&self) -> DVector<f64> {
        hermitian_eigenvalues(&self.mat).map(|v| if v < 0.0 { 0.0 } else { v })
    }
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: CVec,
}

impl PureState {
    pub fn new(amplitudes: CVec) -> Result<Self> {
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized(norm));
        }
        Ok(Self { amplitudes })
    }

    /// Computational basis state |k⟩.
    pub fn basis(d: usize, k: usize) -> Self {
        let mut v = CVec::zeros(d);
        v[k] = C64::new(1.0, 0.0);
        Self { amplitudes: v }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &CVec {
        &self.amplitudes
    }

    /// ⟨ψ| M |ψ⟩, returning the real part.
    pub fn expectation(&self, m: &CMat) -> f64 {
        let mv = m * &self.amplitudes;
        self.amplitudes.dotc(&mv).re
    }
}

/// Nonnegative weights summing to one.
///
/// Weights within `1e-12` below zero (or above one) are clamped; anything
/// further out is rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    weights: Vec<f64>,
}

impl ProbabilityVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        let mut clamped = Vec::with_capacity(weights.len());
        for &w in &weights {
            if !(-1e-12..=1.0 + 1e-12).contains(&w) {
                return Err(Error::InvalidDistribution(format!(
                    "weight {w} outside [0, 1]"
                )));
            }
            clamped.push(w.clamp(0.0, 1.0));
        }
        let sum: f64 = clamped.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidDistribution(format!(
                "weights sum to {sum}, expected 1"
            )));
        }
        Ok(Self { weights: clamped })
    }

    pub fn uniform(n: usize) -> Self {
        Self {
            weights: vec![1.0 / n as f64; n],
        }
    }

    /// Distribution concentrated on index `k`.
    pub fn point_mass(n: usize, k: usize) -> Self {
        let mut w = vec![0.0; n];
        w[k] = 1.0;
        Self { weights: w }
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Shannon entropy in bits, with `0 log 0 := 0`.
pub fn shannon_entropy(p: &ProbabilityVector) -> f64 {
    entropy_of_spectrum(p.weights())
}

/// Von Neumann entropy of a density matrix, in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    hermitian_entropy(rho.matrix())
}

/// Entropy of the spectrum of a Hermitian operator (symmetrized internally).
///
/// Intended for operators that are density matrices up to numerical noise;
/// eigenvalues below the cutoff are dropped.
pub fn hermitian_entropy(m: &CMat) -> f64 {
    let eigs = hermitian_eigenvalues(m);
    entropy_of_spectrum(eigs.as_slice())
}

fn entropy_of_spectrum(vals: &[f64]) -> f64 {
    vals.iter()
        .filter(|&&v| v > ENTROPY_CUTOFF)
        .map(|&v| -v * v.log2())
        .sum()
}

const PAULI: [[(f64, f64); 4]; 3] = [
    // σ1 = X
    [(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
    // σ2 = Y
    [(0.0, 0.0), (0.0, -1.0), (0.0, 1.0), (0.0, 0.0)],
    // σ3 = Z
    [(1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)],
];

fn pauli(k: usize) -> CMat {
    CMat::from_fn(2, 2, |i, j| {
        let (re, im) = PAULI[k][i * 2 + j];
        C64::new(re, im)
    })
}

/// Qubit state from its Bloch vector, `ρ = (1 + r·σ)/2`.
///
/// Vectors marginally outside the unit ball (within `1e-12`) are rescaled
/// onto it; anything longer is rejected.
pub fn bloch_to_density(r: [f64; 3]) -> Result<DensityMatrix> {
    let norm = (r[0] * r[0] + r[1] * r[1] + r[2] * r[2]).sqrt();
    if norm > 1.0 + 1e-12 {
        return Err(Error::BlochOutOfBall(norm));
    }
    let scale = if norm > 1.0 { 1.0 / norm } else { 1.0 };
    let mut mat = CMat::identity(2, 2);
    for (k, &component) in r.iter().enumerate() {
        mat += pauli(k).scale(component * scale);
    }
    DensityMatrix::new(mat.scale(0.5))
}

/// Bloch vector of a qubit state, `r_k = tr(ρ σ_k)`.
pub fn density_to_bloch(rho: &DensityMatrix) -> Result<[f64; 3]> {
    if rho.dim() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "Bloch parametrization requires dimension 2, got {}",
            rho.dim()
        )));
    }
    let mut r = [0.0; 3];
    for (k, component) in r.iter_mut().enumerate() {
        *component = (pauli(k) * rho.matrix()).trace().re;
    }
    Ok(r)
}
