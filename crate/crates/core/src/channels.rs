//! Channels and super-operators: depolarizing channels, Weyl-covariant
//! channels, mixers, the inversion map, and the Choi calculus tying them
//! together.
//!
//! The canonical internal representation is the normalized Choi state
//! `C = (Id ⊗ Φ)|Ω⟩⟨Ω|` with `|Ω⟩ = Σ_i |ii⟩/√d`. Choi matrices combine
//! linearly and represent maps with no Kraus form (negative mixing weights,
//! the inversion map), which a Kraus-based representation could not.
//! Complete positivity and trace preservation are checked eagerly at
//! construction and recorded as flags; construction itself never rejects a
//! non-CP map unless the specific constructor promises to.

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_eigen, hermitian_eigenvalues, hermiticity_defect, identity, max_abs_diff,
    partial_trace, projector, CMat, CVec, Keep, C64,
};
use crate::states::{DensityMatrix, ProbabilityVector};

/// A Choi matrix is considered positive semidefinite down to this eigenvalue.
pub const CP_TOL: f64 = 1e-9;
/// Tolerance on `tr_out(choi) = 1/d_in` for the trace-preservation flag.
pub const TP_TOL: f64 = 1e-9;

/// Phase-space point `z = (x, y)` labelling the Weyl operator `U^x V^y`.
///
/// Labels are enumerated row-major with `x` outermost, so `z = (x, y)` has
/// flat index `x * d + y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeylLabel {
    pub x: usize,
    pub y: usize,
}

impl WeylLabel {
    pub fn new(x: usize, y: usize) -> Self {
        Self { x, y }
    }

    pub fn index(&self, d: usize) -> usize {
        self.x * d + self.y
    }

    /// All d² labels in canonical order.
    pub fn all(d: usize) -> impl Iterator<Item = WeylLabel> {
        (0..d * d).map(move |k| WeylLabel::new(k / d, k % d))
    }
}

fn root_of_unity(d: usize, exponent: usize) -> C64 {
    // Exact values at the half turn keep qubit Weyl operators free of
    // spurious 1e-16 imaginary parts.
    let k = exponent % d;
    if k == 0 {
        return C64::new(1.0, 0.0);
    }
    if 2 * k == d {
        return C64::new(-1.0, 0.0);
    }
    let angle = 2.0 * std::f64::consts::PI * k as f64 / d as f64;
    C64::new(angle.cos(), angle.sin())
}

/// Weyl operator `W_(x,y) = U^x V^y` in the computational basis, where
/// `U|e_j⟩ = |e_(j+1 mod d)⟩` and `V|e_j⟩ = e^(2πi j/d)|e_j⟩`.
pub fn weyl_operator(d: usize, z: WeylLabel) -> Result<CMat> {
    if d < 2 {
        return Err(Error::DimensionTooSmall(d));
    }
    if z.x >= d || z.y >= d {
        return Err(Error::WeylLabelOutOfRange { x: z.x, y: z.y, d });
    }
    let mut w = CMat::zeros(d, d);
    for j in 0..d {
        w[((j + z.x) % d, j)] = root_of_unity(d, z.y * j);
    }
    Ok(w)
}

/// The normalized maximally entangled vector `|Ω⟩ = Σ_i |ii⟩ / √d`.
pub fn maximally_entangled_state(d: usize) -> CVec {
    let mut v = CVec::zeros(d * d);
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[i * d + i] = amp;
    }
    v
}

pub fn maximally_entangled_projector(d: usize) -> CMat {
    projector(&maximally_entangled_state(d))
}

/// Dimension `d` together with a probability distribution over the d²
/// phase-space labels; the canonical form of a Weyl-covariant channel
/// `ρ ↦ Σ_z p_z W_z ρ W_z†`.
#[derive(Debug, Clone, PartialEq)]
pub struct WccSpec {
    d: usize,
    p: ProbabilityVector,
}

impl WccSpec {
    pub fn new(d: usize, p: ProbabilityVector) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if p.len() != d * d {
            return Err(Error::InvalidDistribution(format!(
                "expected {} weights for dimension {d}, got {}",
                d * d,
                p.len()
            )));
        }
        Ok(Self { d, p })
    }

    /// The depolarizing channel written as a Weyl mixture:
    /// weight `(1 + (d²-1)λ)/d²` on the identity label and `(1-λ)/d²`
    /// elsewhere.
    pub fn depolarizing(d: usize, lambda: f64) -> Result<Self> {
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        let min = lambda_min_for(d);
        if !(min - 1e-12..=1.0 + 1e-12).contains(&lambda) {
            return Err(Error::LambdaOutOfRange {
                lambda,
                min,
                max: 1.0,
            });
        }
        let n = (d * d) as f64;
        let mut w = vec![(1.0 - lambda) / n; d * d];
        w[0] = (1.0 + (n - 1.0) * lambda) / n;
        Ok(Self {
            d,
            p: ProbabilityVector::new(w)?,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn probabilities(&self) -> &ProbabilityVector {
        &self.p
    }

    /// Distribution of the mixer `λ Φ_q + (1-λ) D_0` in canonical Weyl form:
    /// `p_z = (1 + (d² q_z - 1) λ)/d²`.
    ///
    /// Fails when `λ` leaves the completely positive window of this channel
    /// family.
    pub fn mixer_distribution(&self, lambda: f64) -> Result<ProbabilityVector> {
        let (lo, hi) = wcc_cp_bounds(self.p.weights(), self.d);
        if lambda < lo - 1e-12 || lambda > hi + 1e-12 {
            return Err(Error::LambdaOutOfRange {
                lambda,
                min: lo,
                max: hi,
            });
        }
        let n = (self.d * self.d) as f64;
        let w = self
            .p
            .weights()
            .iter()
            .map(|&q| ((1.0 + (n * q - 1.0) * lambda) / n).clamp(0.0, 1.0))
            .collect();
        ProbabilityVector::new(w)
    }
}

/// Raw completely-positive window `[λ_m({q_z}), λ_M({q_z})]` of the mixer
/// family over a Weyl mixture `q`; either end may be infinite (uniform `q`).
pub(crate) fn wcc_cp_bounds(q: &[f64], d: usize) -> (f64, f64) {
    let n = (d * d) as f64;
    let mut lo = f64::NEG_INFINITY;
    let mut hi = f64::INFINITY;
    for &qz in q {
        let slope = 1.0 - n * qz;
        if slope < 0.0 {
            lo = lo.max(1.0 / slope);
        } else if slope > 0.0 {
            hi = hi.min(1.0 / slope);
        }
    }
    (lo, hi)
}

pub(crate) fn lambda_min_for(d: usize) -> f64 {
    -1.0 / ((d * d) as f64 - 1.0)
}

/// A linear map on operators, stored as its normalized Choi matrix with
/// dimension metadata. Possibly non-CP; the flags record what the spectrum
/// and the partial trace said at construction time.
#[derive(Debug, Clone)]
pub struct ChannelRep {
    d_in: usize,
    d_out: usize,
    choi: CMat,
    min_choi_eigenvalue: f64,
    tp_defect: f64,
}

impl ChannelRep {
    fn from_parts(d_in: usize, d_out: usize, choi: CMat) -> Self {
        let choi = (&choi + choi.adjoint()).scale(0.5);
        let min_choi_eigenvalue = hermitian_eigenvalues(&choi)[0];
        let reduced = partial_trace(&choi, d_in, d_out, Keep::A)
            .expect("Choi dimensions are consistent by construction");
        let tp_defect = max_abs_diff(&reduced, &identity(d_in).scale(1.0 / d_in as f64));
        Self {
            d_in,
            d_out,
            choi,
            min_choi_eigenvalue,
            tp_defect,
        }
    }

    /// Wraps an externally supplied Choi matrix.
    pub fn from_choi(d_in: usize, d_out: usize, choi: CMat) -> Result<Self> {
        let n = d_in * d_out;
        if choi.nrows() != n || choi.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix is {}x{}, expected {n}x{n}",
                choi.nrows(),
                choi.ncols()
            )));
        }
        let defect = hermiticity_defect(&choi);
        if defect > 1e-8 {
            return Err(Error::NotHermitian(defect));
        }
        Ok(Self::from_parts(d_in, d_out, choi))
    }

    pub fn identity_channel(d: usize) -> Self {
        Self::from_parts(d, d, maximally_entangled_projector(d))
    }

    /// The channel sending every input to the maximally mixed state.
    pub fn completely_depolarizing(d: usize) -> Self {
        let n = d * d;
        Self::from_parts(d, d, identity(n).scale(1.0 / n as f64))
    }

    /// Depolarizing channel `λ Id + (1-λ) D_0`; rejects `λ` outside the
    /// completely positive interval `[-1/(d²-1), 1]`.
    pub fn depolarizing(d: usize, lambda: f64) -> Result<Self> {
        let min = lambda_min_for(d);
        if d < 2 {
            return Err(Error::DimensionTooSmall(d));
        }
        if !(min - 1e-12..=1.0 + 1e-12).contains(&lambda) {
            return Err(Error::LambdaOutOfRange {
                lambda,
                min,
                max: 1.0,
            });
        }
        Ok(Self::depolarizing_unchecked(d, lambda))
    }

    /// Depolarizing combination for arbitrary real `λ`; callers inspect the
    /// CP flag. Needed for probing the boundary of the admissible interval.
    pub fn depolarizing_unchecked(d: usize, lambda: f64) -> Self {
        assert!(d >= 2, "dimension must be at least 2");
        let n = d * d;
        let mut choi = maximally_entangled_projector(d).scale(lambda);
        choi += identity(n).scale((1.0 - lambda) / n as f64);
        Self::from_parts(d, d, choi)
    }

    /// Weyl-covariant channel `ρ ↦ Σ_z p_z W_z ρ W_z†` from its canonical
    /// distribution.
    pub fn from_wcc(spec: &WccSpec) -> Self {
        let d = spec.d();
        let n = d * d;
        let mut choi = CMat::zeros(n, n);
        for z in WeylLabel::all(d) {
            let pz = spec.probabilities().weights()[z.index(d)];
            if pz == 0.0 {
                continue;
            }
            let w = weyl_operator(d, z).expect("labels from WeylLabel::all are in range");
            // (1 ⊗ W_z)|Ω⟩ has components W_z[k, i]/√d at composite index (i, k).
            let mut v = CVec::zeros(n);
            let scale = 1.0 / (d as f64).sqrt();
            for i in 0..d {
                for k in 0..d {
                    v[i * d + k] = w[(k, i)] * C64::new(scale, 0.0);
                }
            }
            choi += projector(&v).scale(pz);
        }
        Self::from_parts(d, d, choi)
    }

    /// Mixer `λ Φ + (1-λ) D_0` for any real `λ`; the base map must be
    /// trace-preserving and square. Complete positivity is recorded, not
    /// enforced: negative `λ` is legitimate whenever the Choi stays PSD.
    pub fn mixer(base: &ChannelRep, lambda: f64) -> Result<Self> {
        if base.d_in != base.d_out {
            return Err(Error::DimensionMismatch(format!(
                "mixer needs a square map, got {} -> {}",
                base.d_in, base.d_out
            )));
        }
        if !base.is_tp() {
            return Err(Error::NotTracePreserving(base.tp_defect));
        }
        let n = base.d_in * base.d_in;
        let mut choi = base.choi.scale(lambda);
        choi += identity(n).scale((1.0 - lambda) / n as f64);
        Ok(Self::from_parts(base.d_in, base.d_in, choi))
    }

    /// The inversion through the maximally mixed state, `Λ = -Id + 2 D_0`.
    /// Not completely positive; `Λ ∘ Λ = Id`.
    pub fn inversion(d: usize) -> Self {
        assert!(d >= 2, "dimension must be at least 2");
        let n = d * d;
        let mut choi = maximally_entangled_projector(d).scale(-1.0);
        choi += identity(n).scale(2.0 / n as f64);
        Self::from_parts(d, d, choi)
    }

    /// Unitary conjugation channel `ρ ↦ U ρ U†`.
    pub fn unitary(u: &CMat) -> Result<Self> {
        let d = u.nrows();
        if u.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "unitary must be square, got {}x{}",
                u.nrows(),
                u.ncols()
            )));
        }
        let defect = max_abs_diff(&(u.adjoint() * u), &identity(d));
        if defect > 1e-9 {
            return Err(Error::Spec(format!(
                "matrix is not unitary (U†U deviates by {defect:.3e})"
            )));
        }
        let omega = maximally_entangled_state(d);
        let mut v = CVec::zeros(d * d);
        for i in 0..d {
            for k in 0..d {
                // (1 ⊗ U)|Ω⟩
                v[i * d + k] = u[(k, i)] * omega[i * d + i];
            }
        }
        Ok(Self::from_parts(d, d, projector(&v)))
    }

    /// Complementary channel of a Weyl-covariant channel: the system is
    /// coupled to a d²-dimensional environment prepared in `Σ_z √p_z |z⟩`
    /// through `U_SE = Σ_z W_z ⊗ |z⟩⟨z|`, and the system is traced out.
    /// Maps d-dimensional inputs to d²-dimensional outputs.
    pub fn complementary_wcc(spec: &WccSpec) -> Self {
        let d = spec.d();
        let n = d * d;
        let p = spec.probabilities().weights();
        // Kraus operators M_i = (⟨i|_S ⊗ 1_E) V with V = U_SE (1 ⊗ |ψ⟩_E):
        // (M_i)[z, j] = √p_z ⟨i| W_z |j⟩.
        let mut kraus = Vec::with_capacity(d);
        for i in 0..d {
            let mut m = CMat::zeros(n, d);
            for z in WeylLabel::all(d) {
                let amp = p[z.index(d)].sqrt();
                if amp == 0.0 {
                    continue;
                }
                let w = weyl_operator(d, z).expect("labels in range");
                for j in 0..d {
                    m[(z.index(d), j)] = w[(i, j)] * C64::new(amp, 0.0);
                }
            }
            kraus.push(m);
        }
        let choi = choi_from_kraus(&kraus, d, n);
        Self::from_parts(d, n, choi)
    }

    pub fn d_in(&self) -> usize {
        self.d_in
    }

    pub fn d_out(&self) -> usize {
        self.d_out
    }

    pub fn choi(&self) -> &CMat {
        &self.choi
    }

    pub fn min_choi_eigenvalue(&self) -> f64 {
        self.min_choi_eigenvalue
    }

    pub fn tp_defect(&self) -> f64 {
        self.tp_defect
    }

    pub fn is_cp(&self) -> bool {
        self.min_choi_eigenvalue >= -CP_TOL
    }

    pub fn is_tp(&self) -> bool {
        self.tp_defect <= TP_TOL
    }

    pub fn is_cptp(&self) -> bool {
        self.is_cp() && self.is_tp()
    }

    /// Action on an arbitrary operator, reconstructed from the Choi matrix:
    /// `Φ(X) = d · tr_A[(Xᵀ ⊗ 1) C]`.
    pub fn apply_operator(&self, x: &CMat) -> Result<CMat> {
        if x.nrows() != self.d_in || x.ncols() != self.d_in {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, channel input dimension is {}",
                x.nrows(),
                x.ncols(),
                self.d_in
            )));
        }
        let mut out = CMat::zeros(self.d_out, self.d_out);
        for k in 0..self.d_out {
            for l in 0..self.d_out {
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.d_in {
                    for j in 0..self.d_in {
                        acc += x[(i, j)] * self.choi[(i * self.d_out + k, j * self.d_out + l)];
                    }
                }
                out[(k, l)] = acc * C64::new(self.d_in as f64, 0.0);
            }
        }
        Ok(out)
    }

    /// Action on a state. For CP-TP maps the output is again a valid state;
    /// for maps like the inversion it is Hermitian and unit-trace but may
    /// fail positivity.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<CMat> {
        self.apply_operator(rho.matrix())
    }

    /// Extended action `(Id_A ⊗ Φ)(X)` on an operator over `C^dA ⊗ C^d_in`.
    pub fn apply_extended(&self, x: &CMat, da: usize) -> Result<CMat> {
        let n_in = da * self.d_in;
        if x.nrows() != n_in || x.ncols() != n_in {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, expected {n_in}x{n_in}",
                x.nrows(),
                x.ncols()
            )));
        }
        let n_out = da * self.d_out;
        let mut out = CMat::zeros(n_out, n_out);
        for a in 0..da {
            for b in 0..da {
                for k in 0..self.d_out {
                    for l in 0..self.d_out {
                        let mut acc = C64::new(0.0, 0.0);
                        for i in 0..self.d_in {
                            for j in 0..self.d_in {
                                acc += self.choi[(i * self.d_out + k, j * self.d_out + l)]
                                    * x[(a * self.d_in + i, b * self.d_in + j)];
                            }
                        }
                        out[(a * self.d_out + k, b * self.d_out + l)] =
                            acc * C64::new(self.d_in as f64, 0.0);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Composition `self ∘ before`, computed by applying `self` to the
    /// output slot of the Choi matrix of `before`.
    pub fn compose(&self, before: &ChannelRep) -> Result<Self> {
        if self.d_in != before.d_out {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose: inner dimensions {} and {} differ",
                self.d_in, before.d_out
            )));
        }
        let choi = self.apply_extended(&before.choi, before.d_in)?;
        Ok(Self::from_parts(before.d_in, self.d_out, choi))
    }

    /// Canonical Kraus operators from the eigendecomposition of the Choi
    /// matrix; eigenvalues below 1e-10 are dropped. Fails on non-CP maps.
    pub fn kraus_operators(&self) -> Result<Vec<CMat>> {
        if !self.is_cp() {
            return Err(Error::NotCompletelyPositive(self.min_choi_eigenvalue));
        }
        let (vals, vecs) = hermitian_eigen(&self.choi);
        let mut kraus = Vec::new();
        for k in 0..vals.len() {
            if vals[k] <= 1e-10 {
                continue;
            }
            let scale = (self.d_in as f64 * vals[k]).sqrt();
            let mut m = CMat::zeros(self.d_out, self.d_in);
            for i in 0..self.d_in {
                for a in 0..self.d_out {
                    m[(a, i)] = vecs[(i * self.d_out + a, k)] * C64::new(scale, 0.0);
                }
            }
            kraus.push(m);
        }
        Ok(kraus)
    }

    /// Choi spectrum in descending order.
    pub fn cj_spectrum(&self) -> Vec<f64> {
        let mut vals: Vec<f64> = hermitian_eigenvalues(&self.choi).iter().copied().collect();
        vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
        vals
    }
}

/// Choi matrix `Σ_k w_k w_k†` with `w_k = (1 ⊗ M_k)|Ω⟩`.
fn choi_from_kraus(kraus: &[CMat], d_in: usize, d_out: usize) -> CMat {
    let n = d_in * d_out;
    let scale = C64::new(1.0 / (d_in as f64).sqrt(), 0.0);
    let mut choi = CMat::zeros(n, n);
    for m in kraus {
        let mut w = CVec::zeros(n);
        for i in 0..d_in {
            for a in 0..d_out {
                w[i * d_out + a] = m[(a, i)] * scale;
            }
        }
        choi += projector(&w);
    }
    choi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dagger, tensor, trace_norm};
    use crate::random::{
        haar_random_unitary, random_density_matrix, random_probability_vector,
    };
    use crate::states::hermitian_entropy;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_wcc(d: usize, rng: &mut ChaCha8Rng) -> WccSpec {
        WccSpec::new(d, random_probability_vector(d * d, rng)).unwrap()
    }

    #[test]
    fn weyl_identity_label() {
        for d in 2..=4 {
            let w = weyl_operator(d, WeylLabel::new(0, 0)).unwrap();
            assert_eq!(max_abs_diff(&w, &identity(d)), 0.0);
        }
    }

    #[test]
    fn weyl_qubit_operators_are_paulis() {
        let x = weyl_operator(2, WeylLabel::new(1, 0)).unwrap();
        let z = weyl_operator(2, WeylLabel::new(0, 1)).unwrap();
        let pauli_x = CMat::from_fn(2, 2, |i, j| {
            if i != j {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let pauli_z = CMat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(1.0, 0.0),
            (1, 1) => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        assert_eq!(max_abs_diff(&x, &pauli_x), 0.0);
        assert_eq!(max_abs_diff(&z, &pauli_z), 0.0);
    }

    #[test]
    fn weyl_orthogonality_relation() {
        let d = 3;
        for z in WeylLabel::all(d) {
            for w in WeylLabel::all(d) {
                let wz = weyl_operator(d, z).unwrap();
                let ww = weyl_operator(d, w).unwrap();
                let overlap = (wz * dagger(&ww)).trace();
                let expected = if z == w { d as f64 } else { 0.0 };
                assert!((overlap - C64::new(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn weyl_completeness_relation() {
        // (1/d²) Σ_z W_z X W_z† = tr(X) 1/d
        let d = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x = random_density_matrix(d, &mut rng).into_matrix();
        let mut acc = CMat::zeros(d, d);
        for z in WeylLabel::all(d) {
            let w = weyl_operator(d, z).unwrap();
            acc += &w * &x * dagger(&w);
        }
        acc /= C64::new((d * d) as f64, 0.0);
        let expected = identity(d).scale(x.trace().re / d as f64);
        assert!(max_abs_diff(&acc, &expected) < 1e-12);
    }

    #[test]
    fn weyl_rejects_out_of_range_label() {
        assert!(weyl_operator(2, WeylLabel::new(2, 0)).is_err());
    }

    #[test]
    fn depolarizing_at_one_is_identity_channel() {
        let dc = ChannelRep::depolarizing(3, 1.0).unwrap();
        assert!(max_abs_diff(dc.choi(), &maximally_entangled_projector(3)) < 1e-12);
        assert!(dc.is_cptp());
    }

    #[test]
    fn depolarizing_at_zero_erases_everything() {
        let dc = ChannelRep::depolarizing(3, 0.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let rho = random_density_matrix(3, &mut rng);
        let out = dc.apply(&rho).unwrap();
        assert!(max_abs_diff(&out, &identity(3).scale(1.0 / 3.0)) < 1e-12);
    }

    #[test]
    fn depolarizing_boundary_touches_zero_eigenvalue() {
        let dc = ChannelRep::depolarizing(3, -1.0 / 8.0).unwrap();
        assert!(dc.min_choi_eigenvalue().abs() < 1e-10);
        assert!(dc.is_cp());
    }

    #[test]
    fn depolarizing_rejects_out_of_range_lambda() {
        assert!(matches!(
            ChannelRep::depolarizing(3, -0.2),
            Err(Error::LambdaOutOfRange { .. })
        ));
        assert!(ChannelRep::depolarizing(3, 1.1).is_err());
    }

    #[test]
    fn depolarizing_unchecked_flags_non_cp() {
        let dc = ChannelRep::depolarizing_unchecked(3, -0.2);
        assert!(!dc.is_cp());
        assert!(dc.is_tp());
    }

    #[test]
    fn wcc_point_mass_is_identity_channel() {
        let spec = WccSpec::new(3, ProbabilityVector::point_mass(9, 0)).unwrap();
        let phi = ChannelRep::from_wcc(&spec);
        assert!(max_abs_diff(phi.choi(), ChannelRep::identity_channel(3).choi()) < 1e-12);
    }

    #[test]
    fn wcc_uniform_is_completely_depolarizing() {
        let spec = WccSpec::new(2, ProbabilityVector::uniform(4)).unwrap();
        let phi = ChannelRep::from_wcc(&spec);
        assert!(max_abs_diff(phi.choi(), ChannelRep::completely_depolarizing(2).choi()) < 1e-12);
    }

    #[test]
    fn depolarizing_equals_its_weyl_mixture_form() {
        for (d, lambda) in [(2, -0.2), (3, -0.125), (3, 0.4), (4, 0.9)] {
            let direct = ChannelRep::depolarizing(d, lambda).unwrap();
            let as_wcc = ChannelRep::from_wcc(&WccSpec::depolarizing(d, lambda).unwrap());
            assert!(max_abs_diff(direct.choi(), as_wcc.choi()) < 1e-12);
        }
    }

    #[test]
    fn wcc_commutes_with_weyl_conjugation() {
        let d = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec = random_wcc(d, &mut rng);
        let phi = ChannelRep::from_wcc(&spec);
        let rho = random_density_matrix(d, &mut rng);
        for z in WeylLabel::all(d) {
            let w = weyl_operator(d, z).unwrap();
            let conjugated = &w * rho.matrix() * dagger(&w);
            let lhs = phi.apply_operator(&conjugated).unwrap();
            let rhs = &w * phi.apply(&rho).unwrap() * dagger(&w);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
        }
    }

    #[test]
    fn mixer_of_identity_is_depolarizing() {
        for lambda in [-0.25, 0.0, 0.6, 1.0] {
            let mixer = ChannelRep::mixer(&ChannelRep::identity_channel(2), lambda).unwrap();
            let dc = ChannelRep::depolarizing_unchecked(2, lambda);
            assert!(max_abs_diff(mixer.choi(), dc.choi()) < 1e-12);
        }
    }

    #[test]
    fn nested_mixers_multiply_their_parameters() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let phi = ChannelRep::from_wcc(&random_wcc(2, &mut rng));
        for (lambda1, lambda) in [(0.7, 0.5), (0.9, -0.3), (-0.2, 0.8)] {
            let inner = ChannelRep::mixer(&phi, lambda1).unwrap();
            let nested = ChannelRep::mixer(&inner, lambda).unwrap();
            let flat = ChannelRep::mixer(&phi, lambda * lambda1).unwrap();
            assert!(max_abs_diff(nested.choi(), flat.choi()) < 1e-12);
        }
    }

    #[test]
    fn mixer_over_depolarizing_is_depolarizing() {
        let base = ChannelRep::depolarizing(3, 0.5).unwrap();
        let mixed = ChannelRep::mixer(&base, -0.2).unwrap();
        let expected = ChannelRep::depolarizing(3, -0.1).unwrap();
        assert!(max_abs_diff(mixed.choi(), expected.choi()) < 1e-12);
    }

    #[test]
    fn mixer_rejects_non_trace_preserving_base() {
        // Half the identity channel: CP but not TP.
        let half = ChannelRep::from_choi(
            2,
            2,
            maximally_entangled_projector(2).scale(0.5),
        )
        .unwrap();
        assert!(matches!(
            ChannelRep::mixer(&half, 0.5),
            Err(Error::NotTracePreserving(_))
        ));
    }

    #[test]
    fn inversion_spectrum_and_involution() {
        for d in [2_usize, 3] {
            let inv = ChannelRep::inversion(d);
            let expected_min = 2.0 / (d * d) as f64 - 1.0;
            assert_abs_diff_eq!(inv.min_choi_eigenvalue(), expected_min, epsilon = 1e-10);
            assert!(!inv.is_cp());
            assert!(inv.is_tp());
            let double = inv.compose(&inv).unwrap();
            assert!(max_abs_diff(double.choi(), ChannelRep::identity_channel(d).choi()) < 1e-12);
        }
    }

    #[test]
    fn inversion_swaps_reciprocal_pair_members() {
        // Λ ∘ D_{+|λ|} = D_{-|λ|}
        for d in [2_usize, 3] {
            let x = 0.8 / ((d * d) as f64 - 1.0);
            let plus = ChannelRep::depolarizing(d, x).unwrap();
            let minus = ChannelRep::depolarizing(d, -x).unwrap();
            let mapped = ChannelRep::inversion(d).compose(&plus).unwrap();
            assert!(max_abs_diff(mapped.choi(), minus.choi()) < 1e-12);
        }
    }

    #[test]
    fn inversion_preserves_distances() {
        let d = 3;
        let inv = ChannelRep::inversion(d);
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..10 {
            let r1 = random_density_matrix(d, &mut rng);
            let r2 = random_density_matrix(d, &mut rng);
            let lhs = trace_norm(&(inv.apply(&r1).unwrap() - inv.apply(&r2).unwrap()));
            let rhs = trace_norm(&(r1.matrix() - r2.matrix()));
            assert!((lhs - rhs).abs() < 1e-10);
        }
    }

    #[test]
    fn inversion_outputs_are_hermitian_unit_trace_but_not_always_states() {
        // Λ(ρ) = 2/d - ρ sends a pure state to spectrum {2/d - 1, (2/d)^(d-1)},
        // which leaves the state set for d ≥ 3. For d = 2 it is the spin flip,
        // positive on all inputs yet still not completely positive.
        let inv3 = ChannelRep::inversion(3);
        let pure3 = DensityMatrix::from_pure(&crate::states::PureState::basis(3, 0));
        let out = inv3.apply(&pure3).unwrap();
        assert!(crate::linalg::hermiticity_defect(&out) < 1e-12);
        assert!((out.trace() - C64::new(1.0, 0.0)).norm() < 1e-12);
        assert!(matches!(
            DensityMatrix::new(out),
            Err(Error::NegativeEigenvalue(_))
        ));

        let inv2 = ChannelRep::inversion(2);
        let pure2 = DensityMatrix::from_pure(&crate::states::PureState::basis(2, 0));
        let flipped = DensityMatrix::new(inv2.apply(&pure2).unwrap()).unwrap();
        let mut orthogonal = CMat::zeros(2, 2);
        orthogonal[(1, 1)] = C64::new(1.0, 0.0);
        assert!(max_abs_diff(flipped.matrix(), &orthogonal) < 1e-12);
        assert!(!inv2.is_cp());
    }

    #[test]
    fn identity_channel_acts_trivially() {
        let id = ChannelRep::identity_channel(3);
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let rho = random_density_matrix(3, &mut rng);
        assert!(max_abs_diff(&id.apply(&rho).unwrap(), rho.matrix()) < 1e-12);
    }

    #[test]
    fn depolarizing_action_on_basis_projector() {
        let dc = ChannelRep::depolarizing(3, -0.125).unwrap();
        let mut rho = CMat::zeros(3, 3);
        rho[(0, 0)] = C64::new(1.0, 0.0);
        let out = dc
            .apply(&DensityMatrix::new(rho).unwrap())
            .unwrap();
        let mut expected = CMat::zeros(3, 3);
        expected[(0, 0)] = C64::new(0.25, 0.0);
        expected[(1, 1)] = C64::new(0.375, 0.0);
        expected[(2, 2)] = C64::new(0.375, 0.0);
        assert!(max_abs_diff(&out, &expected) < 1e-12);
    }

    #[test]
    fn convex_combinations_of_mixers_combine_parameters() {
        // p D_{λ1} + (1-p) D_{λ2} = D_{p λ1 + (1-p) λ2}, as channel actions.
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let phi = ChannelRep::from_wcc(&random_wcc(2, &mut rng));
        let (l1, l2, p) = (0.8, -0.1, 0.3);
        let m1 = ChannelRep::mixer(&phi, l1).unwrap();
        let m2 = ChannelRep::mixer(&phi, l2).unwrap();
        let blend = ChannelRep::mixer(&phi, p * l1 + (1.0 - p) * l2).unwrap();
        let rho = random_density_matrix(2, &mut rng);
        let lhs = m1.apply(&rho).unwrap().scale(p) + m2.apply(&rho).unwrap().scale(1.0 - p);
        assert!(max_abs_diff(&lhs, &blend.apply(&rho).unwrap()) < 1e-12);
        assert!(max_abs_diff(
            &(m1.choi().scale(p) + m2.choi().scale(1.0 - p)),
            blend.choi()
        ) < 1e-12);
    }

    #[test]
    fn extended_identity_leaves_states_alone() {
        let id = ChannelRep::identity_channel(2);
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let joint = random_density_matrix(6, &mut rng);
        let out = id.apply_extended(joint.matrix(), 3).unwrap();
        assert!(max_abs_diff(&out, joint.matrix()) < 1e-12);
    }

    #[test]
    fn extended_action_on_omega_reproduces_choi() {
        let mut rng = ChaCha8Rng::seed_from_u64(20);
        let phi = ChannelRep::from_wcc(&random_wcc(2, &mut rng));
        let omega = maximally_entangled_projector(2);
        let ext = phi.apply_extended(&omega, 2).unwrap();
        assert!(max_abs_diff(&ext, phi.choi()) < 1e-12);
    }

    #[test]
    fn local_depolarizing_contracts_product_pairs() {
        // With a shared ancilla factor the reduced difference vanishes and
        // the contraction is exact: ||(Id ⊗ D_λ)(ρ1 - ρ2)||_1 = |λ| ||ρ1 - ρ2||_1.
        let d = 2;
        let lambda = -0.25;
        let dc = ChannelRep::depolarizing(d, lambda).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let shared = random_density_matrix(d, &mut rng);
        let b1 = random_density_matrix(d, &mut rng);
        let b2 = random_density_matrix(d, &mut rng);
        let rho1 = tensor(shared.matrix(), b1.matrix());
        let rho2 = tensor(shared.matrix(), b2.matrix());
        let out1 = dc.apply_extended(&rho1, d).unwrap();
        let out2 = dc.apply_extended(&rho2, d).unwrap();
        let lhs = trace_norm(&(out1 - out2));
        let rhs = lambda.abs() * trace_norm(&(rho1 - rho2));
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn composition_of_depolarizing_multiplies_parameters() {
        let a = ChannelRep::depolarizing(3, 0.7).unwrap();
        let b = ChannelRep::depolarizing(3, -0.1).unwrap();
        let composed = a.compose(&b).unwrap();
        let expected = ChannelRep::depolarizing(3, -0.07).unwrap();
        assert!(max_abs_diff(composed.choi(), expected.choi()) < 1e-12);
    }

    #[test]
    fn depolarizing_after_mixer_rescales_mixer() {
        // D_λ ∘ D^(Φ)_{λ1} = D^(Φ)_{λ λ1}
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        let phi = ChannelRep::from_wcc(&random_wcc(2, &mut rng));
        let (lambda, lambda1) = (0.6, 0.9);
        let mixer = ChannelRep::mixer(&phi, lambda1).unwrap();
        let dc = ChannelRep::depolarizing(2, lambda).unwrap();
        let composed = dc.compose(&mixer).unwrap();
        let expected = ChannelRep::mixer(&phi, lambda * lambda1).unwrap();
        assert!(max_abs_diff(composed.choi(), expected.choi()) < 1e-12);
    }

    #[test]
    fn identity_composition_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        let phi = ChannelRep::from_wcc(&random_wcc(3, &mut rng));
        let id = ChannelRep::identity_channel(3);
        let composed = id.compose(&phi).unwrap();
        assert!(max_abs_diff(composed.choi(), phi.choi()) < 1e-12);
    }

    #[test]
    fn kraus_of_identity_is_single_identity() {
        let kraus = ChannelRep::identity_channel(3).kraus_operators().unwrap();
        assert_eq!(kraus.len(), 1);
        // Up to a global phase.
        let phase = kraus[0][(0, 0)] / kraus[0][(0, 0)].norm();
        let fixed = kraus[0].map(|v| v / phase);
        assert!(max_abs_diff(&fixed, &identity(3)) < 1e-10);
    }

    #[test]
    fn kraus_reconstruction_matches_channel_action() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let phi = ChannelRep::from_wcc(&random_wcc(3, &mut rng));
        let kraus = phi.kraus_operators().unwrap();
        // Completeness: Σ M† M = 1.
        let mut completeness = CMat::zeros(3, 3);
        for m in &kraus {
            completeness += dagger(m) * m;
        }
        assert!(max_abs_diff(&completeness, &identity(3)) < 1e-9);
        let rho = random_density_matrix(3, &mut rng);
        let mut rebuilt = CMat::zeros(3, 3);
        for m in &kraus {
            rebuilt += m * rho.matrix() * dagger(m);
        }
        assert!(max_abs_diff(&rebuilt, &phi.apply(&rho).unwrap()) < 1e-10);
    }

    #[test]
    fn kraus_rank_of_interior_depolarizing_is_full() {
        let d = 3;
        let dc = ChannelRep::depolarizing(d, 0.5).unwrap();
        assert_eq!(dc.kraus_operators().unwrap().len(), d * d);
    }

    #[test]
    fn kraus_rejects_non_cp_maps() {
        assert!(matches!(
            ChannelRep::inversion(2).kraus_operators(),
            Err(Error::NotCompletelyPositive(_))
        ));
    }

    #[test]
    fn complementary_wcc_diagonalizes_the_distribution() {
        let d = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        let spec = random_wcc(d, &mut rng);
        let comp = ChannelRep::complementary_wcc(&spec);
        assert_eq!(comp.d_out(), d * d);
        assert!(comp.is_cptp());
        let out = comp.apply(&DensityMatrix::maximally_mixed(d)).unwrap();
        let mut expected = CMat::zeros(d * d, d * d);
        for (z, &pz) in spec.probabilities().weights().iter().enumerate() {
            expected[(z, z)] = C64::new(pz, 0.0);
        }
        assert!(max_abs_diff(&out, &expected) < 1e-10);
        // Entropy of the complementary output at 1/d is H({p_z}).
        let h: f64 = spec
            .probabilities()
            .weights()
            .iter()
            .filter(|&&p| p > 1e-12)
            .map(|&p| -p * p.log2())
            .sum();
        assert_abs_diff_eq!(hermitian_entropy(&out), h, epsilon = 1e-10);
    }

    #[test]
    fn tracing_out_environment_recovers_the_wcc() {
        // Explicit Stinespring contraction as an independent oracle.
        let d = 2;
        let n = d * d;
        let mut rng = ChaCha8Rng::seed_from_u64(32);
        let spec = random_wcc(d, &mut rng);
        let rho = random_density_matrix(d, &mut rng);

        let mut u_se = CMat::zeros(d * n, d * n);
        for z in WeylLabel::all(d) {
            let w = weyl_operator(d, z).unwrap();
            let zi = z.index(d);
            for i in 0..d {
                for j in 0..d {
                    // (W_z)_S ⊗ |z⟩⟨z|_E with the system index outermost
                    u_se[(i * n + zi, j * n + zi)] = w[(i, j)];
                }
            }
        }
        let mut env = CVec::zeros(n);
        for (z, &pz) in spec.probabilities().weights().iter().enumerate() {
            env[z] = C64::new(pz.sqrt(), 0.0);
        }
        let joint = tensor(rho.matrix(), &projector(&env));
        let evolved = &u_se * joint * dagger(&u_se);
        let system_out = partial_trace(&evolved, d, n, Keep::A).unwrap();

        let phi = ChannelRep::from_wcc(&spec);
        assert!(max_abs_diff(&system_out, &phi.apply(&rho).unwrap()) < 1e-10);
    }

    #[test]
    fn cj_spectrum_of_wcc_is_its_distribution() {
        let mut rng = ChaCha8Rng::seed_from_u64(34);
        for d in [2_usize, 3] {
            let spec = random_wcc(d, &mut rng);
            let got = ChannelRep::from_wcc(&spec).cj_spectrum();
            let mut expected = spec.probabilities().weights().to_vec();
            expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (g, e) in got.iter().zip(expected.iter()) {
                assert!((g - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn cj_spectrum_of_identity_channel() {
        let spec = ChannelRep::identity_channel(3).cj_spectrum();
        assert!((spec[0] - 1.0).abs() < 1e-12);
        for &v in &spec[1..] {
            assert!(v.abs() < 1e-12);
        }
    }

    #[test]
    fn cj_spectrum_of_depolarizing_matches_weyl_mixture() {
        let (d, lambda) = (3, -0.1);
        let got = ChannelRep::depolarizing(d, lambda).unwrap().cj_spectrum();
        let mut expected = WccSpec::depolarizing(d, lambda)
            .unwrap()
            .probabilities()
            .weights()
            .to_vec();
        expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for (g, e) in got.iter().zip(expected.iter()) {
            assert!((g - e).abs() < 1e-10);
        }
    }

    #[test]
    fn unitality_of_depolarizing_channels() {
        for d in [2_usize, 3, 4] {
            let mixed = DensityMatrix::maximally_mixed(d);
            for &lambda in &[lambda_min_for(d), -0.05, 0.0, 0.3, 1.0] {
                if lambda < lambda_min_for(d) {
                    continue;
                }
                let dc = ChannelRep::depolarizing(d, lambda).unwrap();
                let out = dc.apply(&mixed).unwrap();
                assert!(max_abs_diff(&out, mixed.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn depolarizing_commutes_with_unitary_conjugation() {
        let d = 3;
        let dc = ChannelRep::depolarizing(d, -0.125).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(36);
        for _ in 0..50 {
            let u = haar_random_unitary(d, &mut rng).unwrap();
            let rho = random_density_matrix(d, &mut rng);
            let conj = &u * rho.matrix() * dagger(&u);
            let lhs = dc.apply_operator(&conj).unwrap();
            let rhs = &u * dc.apply(&rho).unwrap() * dagger(&u);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
        }
    }

    #[test]
    fn depolarizing_contracts_distances_exactly() {
        let d = 3;
        let mut rng = ChaCha8Rng::seed_from_u64(38);
        for &lambda in &[-0.125, 0.125] {
            let dc = ChannelRep::depolarizing(d, lambda).unwrap();
            for _ in 0..10 {
                let r1 = random_density_matrix(d, &mut rng);
                let r2 = random_density_matrix(d, &mut rng);
                let lhs = trace_norm(&(dc.apply(&r1).unwrap() - dc.apply(&r2).unwrap()));
                let rhs = lambda.abs() * trace_norm(&(r1.matrix() - r2.matrix()));
                assert!((lhs - rhs).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn reciprocal_pair_displacement_has_factor_two() {
        // The two outputs sit symmetrically about 1/d, so their separation is
        // twice either one's distance from it.
        let d = 3;
        let x = 0.1;
        let plus = ChannelRep::depolarizing(d, x).unwrap();
        let minus = ChannelRep::depolarizing(d, -x).unwrap();
        let mixed = identity(d).scale(1.0 / d as f64);
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        for _ in 0..10 {
            let rho = random_density_matrix(d, &mut rng);
            let op = plus.apply(&rho).unwrap();
            let om = minus.apply(&rho).unwrap();
            let gap = trace_norm(&(&op - &om));
            assert!((gap - 2.0 * trace_norm(&(&op - &mixed))).abs() < 1e-10);
            assert!((gap - 2.0 * trace_norm(&(&om - &mixed))).abs() < 1e-10);
        }
    }

    #[test]
    fn weyl_unitary_after_wcc_translates_the_mixture() {
        // W_w Φ_q(ρ) W_w† is again Weyl-covariant with weights shifted by w;
        // the commutation phases cancel inside the sandwich. This is what
        // makes the translated depolarizing mixtures equivalent channels.
        let d = 2;
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        let spec = random_wcc(d, &mut rng);
        let phi = ChannelRep::from_wcc(&spec);
        for w in WeylLabel::all(d) {
            let conj = ChannelRep::unitary(&weyl_operator(d, w).unwrap()).unwrap();
            let relabeled = conj.compose(&phi).unwrap();
            let mut shifted = vec![0.0; d * d];
            for z in WeylLabel::all(d) {
                let target = WeylLabel::new((z.x + w.x) % d, (z.y + w.y) % d);
                shifted[target.index(d)] = spec.probabilities().weights()[z.index(d)];
            }
            let expected = ChannelRep::from_wcc(
                &WccSpec::new(d, ProbabilityVector::new(shifted).unwrap()).unwrap(),
            );
            assert!(max_abs_diff(relabeled.choi(), expected.choi()) < 1e-12);
        }
    }

    #[test]
    fn unitary_constructor_rejects_non_unitary_input() {
        let mut m = identity(2);
        m[(0, 0)] = C64::new(0.5, 0.0);
        assert!(ChannelRep::unitary(&m).is_err());
    }

    #[test]
    fn qubit_depolarizing_scales_bloch_vectors() {
        use crate::states::{bloch_to_density, density_to_bloch};
        let lambda = -0.25;
        let dc = ChannelRep::depolarizing(2, lambda).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        for _ in 0..10 {
            let rho = random_density_matrix(2, &mut rng);
            let r_in = density_to_bloch(&rho).unwrap();
            let out = DensityMatrix::new(dc.apply(&rho).unwrap()).unwrap();
            let r_out = density_to_bloch(&out).unwrap();
            for k in 0..3 {
                assert!((r_out[k] - lambda * r_in[k]).abs() < 1e-12);
            }
            // Same statement through the inverse parametrization.
            let scaled = bloch_to_density(r_out).unwrap();
            assert!(max_abs_diff(scaled.matrix(), out.matrix()) < 1e-12);
        }
    }

    #[test]
    fn mixer_distribution_matches_mixer_channel() {
        // The mixer over a Weyl mixture is again a Weyl mixture with
        // p_z = (1 + (d² q_z - 1)λ)/d².
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for d in [2_usize, 3] {
            let spec = random_wcc(d, &mut rng);
            let phi = ChannelRep::from_wcc(&spec);
            let (lo, hi) = wcc_cp_bounds(spec.probabilities().weights(), d);
            for &lambda in &[lo, 0.5 * lo, 0.3 * hi, hi] {
                let mixed = ChannelRep::mixer(&phi, lambda).unwrap();
                let p = spec.mixer_distribution(lambda).unwrap();
                let as_wcc = ChannelRep::from_wcc(&WccSpec::new(d, p).unwrap());
                assert!(max_abs_diff(mixed.choi(), as_wcc.choi()) < 1e-12);
            }
        }
    }

    proptest! {
        #[test]
        fn prop_wcc_channels_are_cptp(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let d = 2 + (seed % 2) as usize;
            let phi = ChannelRep::from_wcc(&random_wcc(d, &mut rng));
            prop_assert!(phi.is_cptp());
            let rho = random_density_matrix(d, &mut rng);
            let out = phi.apply(&rho).unwrap();
            prop_assert!(DensityMatrix::new(out).is_ok());
        }
    }
}
