//! Dense complex linear algebra used by every other module.
//!
//! Matrices are small (at most a few hundred rows), so everything is kept
//! dense and exact index conventions matter more than asymptotics. Composite
//! indices follow the convention `(a, b) -> a * d_b + b` with the first
//! subsystem outermost.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};

pub type C64 = Complex<f64>;
pub type CMat = DMatrix<C64>;
pub type CVec = DVector<C64>;

pub const ONE: C64 = Complex::new(1.0, 0.0);
pub const ZERO: C64 = Complex::new(0.0, 0.0);

/// Which subsystem survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    A,
    B,
}

pub fn identity(d: usize) -> CMat {
    CMat::identity(d, d)
}

/// Conjugate transpose.
pub fn dagger(a: &CMat) -> CMat {
    a.adjoint()
}

/// Largest absolute deviation from Hermiticity, `max_ij |a_ij - conj(a_ji)|`.
pub fn hermiticity_defect(a: &CMat) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let dev = (a[(i, j)] - a[(j, i)].conj()).norm();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Largest entrywise absolute difference between two matrices.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    let mut worst = 0.0_f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            let dev = (a[(i, j)] - b[(i, j)]).norm();
            if dev > worst {
                worst = dev;
            }
        }
    }
    worst
}

/// Eigenvalues and eigenvectors of a Hermitian matrix.
///
/// The input is symmetrized as `(H + H†)/2` before decomposition so that
/// floating-point asymmetry cannot leak imaginary parts into the spectrum.
/// Eigenvalues are returned in ascending order with matching eigenvector
/// columns.
pub fn hermitian_eigen(h: &CMat) -> (DVector<f64>, CMat) {
    let sym = (h + h.adjoint()).scale(0.5);
    let eig = sym.symmetric_eigen();
    sort_eigen(eig.eigenvalues, eig.eigenvectors)
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(h: &CMat) -> DVector<f64> {
    let sym = (h + h.adjoint()).scale(0.5);
    let mut vals: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    DVector::from_vec(vals)
}

fn sort_eigen(values: DVector<f64>, vectors: CMat) -> (DVector<f64>, CMat) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].partial_cmp(&values[j]).unwrap());
    let sorted_vals = DVector::from_iterator(n, order.iter().map(|&i| values[i]));
    let mut sorted_vecs = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        sorted_vecs.set_column(dst, &vectors.column(src));
    }
    (sorted_vals, sorted_vecs)
}

/// Schatten-1 norm: the sum of singular values.
///
/// Computed from the Hermitian dilation `[[0, A], [A†, 0]]`, whose spectrum
/// is `{±σ_i}`; this keeps one accurate code path for Hermitian and
/// non-Hermitian inputs alike.
pub fn trace_norm(a: &CMat) -> f64 {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "trace_norm expects a square matrix");
    let mut dilation = CMat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            dilation[(i, n + j)] = a[(i, j)];
            dilation[(n + i, j)] = a[(j, i)].conj();
        }
    }
    let eigs = dilation.symmetric_eigenvalues();
    eigs.iter().map(|v| v.abs()).sum::<f64>() / 2.0
}

/// Kronecker product with the left factor's indices outermost:
/// `(A ⊗ B)[(i_a, i_b), (j_a, j_b)] = A[i_a, j_a] B[i_b, j_b]`.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Partial trace of an operator on a bipartite space of dimension `da * db`.
pub fn partial_trace(x: &CMat, da: usize, db: usize, keep: Keep) -> Result<CMat> {
    let n = da * db;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, expected {n}x{n} for subsystems {da}x{db}",
            x.nrows(),
            x.ncols()
        )));
    }
    match keep {
        Keep::A => {
            let mut out = CMat::zeros(da, da);
            for a in 0..da {
                for b in 0..da {
                    let mut acc = ZERO;
                    for k in 0..db {
                        acc += x[(a * db + k, b * db + k)];
                    }
                    out[(a, b)] = acc;
                }
            }
            Ok(out)
        }
        Keep::B => {
            let mut out = CMat::zeros(db, db);
            for k in 0..db {
                for l in 0..db {
                    let mut acc = ZERO;
                    for a in 0..da {
                        acc += x[(a * db + k, a * db + l)];
                    }
                    out[(k, l)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Projector onto a column vector, `v v†`.
pub fn projector(v: &CVec) -> CMat {
    let n = v.len();
    CMat::from_fn(n, n, |i, j| v[i] * v[j].conj())
}
