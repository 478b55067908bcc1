//! Independent numerical verification of the closed forms: mutual-information
//! maximization, minimum-output-entropy search, Monte-Carlo Haar averages,
//! and channel twirling.
//!
//! Nothing in this module consults a capacity formula; values are produced by
//! direct optimization or sampling over the channel action, so agreement with
//! the `capacities` module is evidence rather than tautology.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::channels::{maximally_entangled_state, ChannelRep};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, projector, CMat, CVec, C64};
use crate::random::{haar_random_pure, haar_random_unitary, split_seed};
use crate::states::{hermitian_entropy, DensityMatrix, PureState};

/// Outcome of a multi-start optimization run.
#[derive(Debug, Clone)]
pub struct OptimizationResult {
    pub optimum_value: f64,
    pub optimizer_state: DensityMatrix,
    /// Total number of coordinate sweeps across all restarts.
    pub iterations: usize,
    /// Whether the best restart terminated with a sub-tolerance sweep
    /// improvement (rather than exhausting its iteration budget).
    pub converged: bool,
    pub restarts_used: usize,
}

/// Sample mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_err: f64,
}

fn ensure_cptp(phi: &ChannelRep) -> Result<()> {
    if !phi.is_cp() {
        return Err(Error::NotCompletelyPositive(phi.min_choi_eigenvalue()));
    }
    if !phi.is_tp() {
        return Err(Error::NotTracePreserving(phi.tp_defect()));
    }
    Ok(())
}

/// Quantum mutual information `I(ρ, Φ) = S(ρ) + S(Φ(ρ)) - S((Id ⊗ Φ)|ρ⟩⟨ρ|)`,
/// with `|ρ⟩` a purification of ρ over an ancilla of dimension rank(ρ).
pub fn mutual_information(rho: &DensityMatrix, phi: &ChannelRep) -> Result<f64> {
    ensure_cptp(phi)?;
    if rho.dim() != phi.d_in() {
        return Err(Error::DimensionMismatch(format!(
            "state dimension {} does not match channel input {}",
            rho.dim(),
            phi.d_in()
        )));
    }
    Ok(mutual_information_unchecked(rho.matrix(), phi))
}

/// Hot path shared with the optimizer; assumes a CP-TP channel and a valid
/// state matrix.
fn mutual_information_unchecked(rho: &CMat, phi: &ChannelRep) -> f64 {
    let d = phi.d_in();
    let (vals, vecs) = hermitian_eigen(rho);

    let mut s_in = 0.0;
    let mut kept: Vec<usize> = Vec::new();
    for k in 0..vals.len() {
        if vals[k] > 1e-12 {
            kept.push(k);
            s_in -= vals[k] * vals[k].log2();
        }
    }
    let rank = kept.len().max(1);

    // Purification with ancilla index outermost: |ρ⟩ = Σ_i √ν_i |i⟩|v_i⟩.
    let mut purification = CVec::zeros(rank * d);
    for (slot, &k) in kept.iter().enumerate() {
        let amp = vals[k].sqrt();
        for s in 0..d {
            purification[slot * d + s] = vecs[(s, k)] * C64::new(amp, 0.0);
        }
    }
    if kept.is_empty() {
        // Degenerate all-zero input cannot occur for unit-trace matrices;
        // guard keeps the arithmetic total anyway.
        purification[0] = C64::new(1.0, 0.0);
    }

    let output = phi
        .apply_operator(rho)
        .expect("dimension checked by caller");
    let s_out = hermitian_entropy(&output);

    let extended = phi
        .apply_extended(&projector(&purification), rank)
        .expect("purification dimensions are consistent");
    let s_ext = hermitian_entropy(&extended);

    s_in + s_out - s_ext
}

/// Adaptive coordinate search: cycles through coordinates trying ±step with
/// greedy expansion, halving the step after sweeps without improvement.
/// Returns (best point, best value, sweeps, converged).
fn compass_maximize<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: Vec<f64>,
    tol: f64,
    max_sweeps: usize,
) -> (Vec<f64>, f64, usize, bool) {
    let mut x = x0;
    let mut fx = f(&x);
    let mut step = 0.25;
    let step_floor = 1e-7;
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_sweeps {
        sweeps += 1;
        let before = fx;
        let mut improved = false;
        for k in 0..x.len() {
            for sign in [1.0, -1.0] {
                let delta = sign * step;
                x[k] += delta;
                let trial = f(&x);
                if trial > fx {
                    fx = trial;
                    improved = true;
                    // Ride the improving direction while it lasts.
                    for _ in 0..60 {
                        x[k] += delta;
                        let more = f(&x);
                        if more > fx {
                            fx = more;
                        } else {
                            x[k] -= delta;
                            break;
                        }
                    }
                    break;
                }
                x[k] -= delta;
            }
        }
        if !improved {
            step *= 0.5;
        }
        if step < step_floor && fx - before < tol {
            converged = true;
            break;
        }
    }
    (x, fx, sweeps, converged)
}

fn factor_to_state(x: &[f64], d: usize) -> Option<CMat> {
    let mut l = CMat::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            let k = 2 * (i * d + j);
            l[(i, j)] = C64::new(x[k], x[k + 1]);
        }
    }
    let mut rho = &l * l.adjoint();
    let tr = rho.trace().re;
    if tr < 1e-12 {
        return None;
    }
    rho /= C64::new(tr, 0.0);
    Some(rho)
}

fn state_to_factor_params(l: &CMat, d: usize) -> Vec<f64> {
    let mut x = vec![0.0; 2 * d * d];
    for i in 0..d {
        for j in 0..d {
            let k = 2 * (i * d + j);
            x[k] = l[(i, j)].re;
            x[k + 1] = l[(i, j)].im;
        }
    }
    x
}

/// Maximizes `I(ρ, Φ)` over density matrices parametrized as `L L†/tr(L L†)`.
///
/// One start sits at the maximally mixed state, the rest reshape Haar-random
/// pure states on the doubled space into factors. The reported value is the
/// best seen across all restarts.
pub fn maximize_mutual_information(
    phi: &ChannelRep,
    tol: f64,
    restarts: usize,
    seed: u64,
) -> Result<OptimizationResult> {
    ensure_cptp(phi)?;
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(restarts >= 1, "at least one restart required");
    let d = phi.d_in();
    let max_sweeps = 400;

    let mut best_x: Option<Vec<f64>> = None;
    let mut best_val = f64::NEG_INFINITY;
    let mut best_converged = false;
    let mut total_sweeps = 0;

    for r in 0..restarts {
        let x0 = if r == 0 {
            let scale = 1.0 / (d as f64).sqrt();
            state_to_factor_params(&CMat::identity(d, d).scale(scale), d)
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, r as u64));
            let psi = haar_random_pure(d * d, &mut rng)?;
            let mut l = CMat::zeros(d, d);
            for i in 0..d {
                for j in 0..d {
                    l[(i, j)] = psi.amplitudes()[i * d + j];
                }
            }
            state_to_factor_params(&l, d)
        };
        let objective = |x: &[f64]| match factor_to_state(x, d) {
            Some(rho) => mutual_information_unchecked(&rho, phi),
            None => f64::NEG_INFINITY,
        };
        let (x, val, sweeps, converged) = compass_maximize(objective, x0, tol, max_sweeps);
        total_sweeps += sweeps;
        if val > best_val {
            best_val = val;
            best_x = Some(x);
            best_converged = converged;
        }
    }

    let x = best_x.expect("at least one restart ran");
    let rho = factor_to_state(&x, d).expect("optimizer never leaves the feasible set");
    Ok(OptimizationResult {
        optimum_value: best_val,
        optimizer_state: DensityMatrix::new(rho)
            .expect("normalized Gram matrix is a valid state"),
        iterations: total_sweeps,
        converged: best_converged,
        restarts_used: restarts,
    })
}

/// Minimizes the output entropy `S(Φ(|ψ⟩⟨ψ|))` over pure states by projected
/// coordinate descent on the unit sphere (minimizing over pure inputs is
/// sufficient because entropy is concave on mixtures).
pub fn min_output_entropy(
    phi: &ChannelRep,
    tol: f64,
    restarts: usize,
    seed: u64,
) -> Result<OptimizationResult> {
    ensure_cptp(phi)?;
    assert!(tol > 0.0, "tolerance must be positive");
    assert!(restarts >= 1, "at least one restart required");
    let d = phi.d_in();
    let max_sweeps = 400;

    let params_to_state = |x: &[f64]| -> Option<CVec> {
        let mut v = CVec::zeros(d);
        for i in 0..d {
            v[i] = C64::new(x[2 * i], x[2 * i + 1]);
        }
        let norm = v.norm();
        if norm < 1e-9 {
            return None;
        }
        Some(v / C64::new(norm, 0.0))
    };

    let mut best_x: Option<Vec<f64>> = None;
    let mut best_val = f64::INFINITY;
    let mut best_converged = false;
    let mut total_sweeps = 0;

    for r in 0..restarts {
        let x0 = if r == 0 {
            let mut x = vec![0.0; 2 * d];
            x[0] = 1.0;
            x
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(split_seed(seed, 1000 + r as u64));
            let psi = haar_random_pure(d, &mut rng)?;
            let mut x = vec![0.0; 2 * d];
            for i in 0..d {
                x[2 * i] = psi.amplitudes()[i].re;
                x[2 * i + 1] = psi.amplitudes()[i].im;
            }
            x
        };
        let objective = |x: &[f64]| match params_to_state(x) {
            Some(psi) => {
                let out = phi
                    .apply_operator(&projector(&psi))
                    .expect("dimensions fixed");
                -hermitian_entropy(&out)
            }
            None => f64::NEG_INFINITY,
        };
        let (x, neg_val, sweeps, converged) = compass_maximize(objective, x0, tol, max_sweeps);
        total_sweeps += sweeps;
        if -neg_val < best_val {
            best_val = -neg_val;
            best_x = Some(x);
            best_converged = converged;
        }
    }

    let x = best_x.expect("at least one restart ran");
    let psi = params_to_state(&x).expect("optimizer never leaves the sphere");
    Ok(OptimizationResult {
        optimum_value: best_val,
        optimizer_state: DensityMatrix::from_pure(&PureState::new(psi)?),
        iterations: total_sweeps,
        converged: best_converged,
        restarts_used: restarts,
    })
}

/// Monte-Carlo estimate of the average input-output fidelity
/// `∫ dμ(ψ) ⟨ψ|Φ(|ψ⟩⟨ψ|)|ψ⟩` over Haar-random pure states.
pub fn mc_average_fidelity(phi: &ChannelRep, n: usize, seed: u64) -> Result<MonteCarloEstimate> {
    ensure_cptp(phi)?;
    assert!(n >= 1000, "at least 1000 samples required");
    let d = phi.d_in();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    // Welford accumulation: the naive sum-of-squares formula loses half the
    // mantissa to cancellation, which matters when the samples are constant.
    let mut mean = 0.0;
    let mut m2 = 0.0;
    for k in 0..n {
        let psi = haar_random_pure(d, &mut rng)?;
        let out = phi.apply_operator(&projector(psi.amplitudes()))?;
        let f = psi.expectation(&out);
        let delta = f - mean;
        mean += delta / (k + 1) as f64;
        m2 += delta * (f - mean);
    }
    let nf = n as f64;
    let var = (m2 / (nf - 1.0)).max(0.0);
    Ok(MonteCarloEstimate {
        mean,
        std_err: (var / nf).sqrt(),
    })
}

/// Monte-Carlo twirl `∫ dμ(U) U† Φ(U · U†) U`, averaged at the Choi level.
///
/// The conjugated channel has Choi `(Uᵀ ⊗ U†) C (Uᵀ ⊗ U†)†`, so each sample
/// is a single sandwich. The average approaches the depolarizing projection
/// of Φ as the sample count grows.
pub fn twirl_channel_mc(phi: &ChannelRep, n: usize, seed: u64) -> Result<ChannelRep> {
    ensure_cptp(phi)?;
    assert!(n >= 1000, "at least 1000 samples required");
    if phi.d_in() != phi.d_out() {
        return Err(Error::DimensionMismatch(format!(
            "twirl needs a square channel, got {} -> {}",
            phi.d_in(),
            phi.d_out()
        )));
    }
    let d = phi.d_in();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = CMat::zeros(d * d, d * d);
    for _ in 0..n {
        let u = haar_random_unitary(d, &mut rng)?;
        let sandwich = u.transpose().kronecker(&u.adjoint());
        acc += &sandwich * phi.choi() * sandwich.adjoint();
    }
    acc /= C64::new(n as f64, 0.0);
    ChannelRep::from_choi(d, d, acc)
}

/// Affine coordinate of a channel's Choi matrix along the depolarizing
/// family: `λ̂ = (d² ⟨Ω|C|Ω⟩ - 1)/(d² - 1)`.
pub fn dc_projection_lambda(phi: &ChannelRep) -> f64 {
    let d = phi.d_in();
    let omega = maximally_entangled_state(d);
    let overlap = omega.dotc(&(phi.choi() * &omega)).re;
    ((d * d) as f64 * overlap - 1.0) / ((d * d) as f64 - 1.0)
}

/// Sample a random Weyl-covariant channel; shared by tests and the
/// verification suites.
pub fn random_wcc_channel<R: Rng + ?Sized>(
    d: usize,
    rng: &mut R,
) -> (crate::channels::WccSpec, ChannelRep) {
    let p = crate::random::random_probability_vector(d * d, rng);
    let spec = crate::channels::WccSpec::new(d, p).expect("sampled distribution has length d²");
    let phi = ChannelRep::from_wcc(&spec);
    (spec, phi)
}

/// Sample a generic CP-TP channel by drawing a Wishart matrix on the doubled
/// space and renormalizing its input marginal: with `W = G G†` and
/// `R = tr_out(W)`, the Choi matrix `(R^{-1/2} ⊗ 1) W (R^{-1/2} ⊗ 1) / d` is
/// positive with the correct partial trace.
pub fn random_cptp_channel<R: Rng + ?Sized>(d: usize, kraus_rank: usize, rng: &mut R) -> ChannelRep {
    use rand_distr::{Distribution, StandardNormal};
    let n = d * d;
    let g = CMat::from_fn(n, kraus_rank, |_, _| {
        C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let w = &g * g.adjoint();
    let marginal = crate::linalg::partial_trace(&w, d, d, crate::linalg::Keep::A)
        .expect("Wishart matrix lives on the doubled space");
    let (vals, vecs) = hermitian_eigen(&marginal);
    let mut inv_sqrt = CMat::zeros(d, d);
    for k in 0..d {
        let col = CVec::from_column_slice(vecs.column(k).as_slice());
        inv_sqrt += projector(&col).scale(1.0 / vals[k].sqrt());
    }
    let whitener = inv_sqrt.kronecker(&crate::linalg::identity(d));
    let choi = (&whitener * w * whitener.adjoint()).scale(1.0 / d as f64);
    ChannelRep::from_choi(d, d, choi).expect("whitened Wishart matrix is a Choi matrix")
}
