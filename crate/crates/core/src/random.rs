//! Seeded sampling of Haar-distributed states and unitaries.
//!
//! Every stochastic routine takes an explicit RNG so runs are reproducible;
//! [`split_seed`] derives independent per-batch streams from one root seed.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec, C64};
use crate::states::{DensityMatrix, ProbabilityVector, PureState};

/// Deterministically derives the seed for sub-stream `stream` of `seed`
/// (SplitMix64 finalizer).
pub fn split_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn standard_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

/// Haar-random pure state: a vector of independent standard complex
/// Gaussians, normalized.
pub fn haar_random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<PureState> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let mut v = CVec::from_fn(d, |_, _| standard_complex(rng));
    let norm = v.norm();
    v /= C64::new(norm, 0.0);
    PureState::new(v)
}

/// Haar-random unitary via QR of a Ginibre matrix.
///
/// Each column of Q is rescaled by the phase of the matching diagonal entry
/// of R, which makes the distribution exactly Haar rather than merely
/// orthogonalized Gaussian.
pub fn haar_random_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<CMat> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    let g = CMat::from_fn(d, d, |_, _| standard_complex(rng));
    let qr = g.qr();
    let r = qr.r();
    let mut u = qr.q();
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 {
            rjj / rjj.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..d {
            u[(i, j)] *= phase;
        }
    }
    Ok(u)
}

/// Random density matrix `L L† / tr(L L†)` with Ginibre factor `L`
/// (the Hilbert-Schmidt ensemble).
pub fn random_density_matrix<R: Rng + ?Sized>(d: usize, rng: &mut R) -> DensityMatrix {
    let l = CMat::from_fn(d, d, |_, _| standard_complex(rng));
    let mut rho = &l * l.adjoint();
    let tr = rho.trace().re;
    rho /= C64::new(tr, 0.0);
    DensityMatrix::new(rho).expect("Gram matrix normalized by its trace is a state")
}

/// Random probability vector (flat Dirichlet: normalized exponentials).
pub fn random_probability_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ProbabilityVector {
    let mut w: Vec<f64> = (0..n)
        .map(|_| {
            let u: f64 = rng.random();
            -(1.0 - u).ln()
        })
        .collect();
    let sum: f64 = w.iter().sum();
    for v in &mut w {
        *v /= sum;
    }
    ProbabilityVector::new(w).expect("normalized positive weights form a distribution")
}
