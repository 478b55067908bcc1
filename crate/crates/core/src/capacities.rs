//! Closed-form classical capacities of depolarizing and Weyl-covariant
//! channels, completely positive parameter windows, asymmetry ratios, and
//! fidelity formulas.
//!
//! Everything here is a deterministic scalar formula; the `oracles` module
//! provides the independent numerical checks.
//!
//! There is deliberately no unassisted-capacity entry point for general
//! Weyl-covariant channels: the single-letter formula requires additivity of
//! the minimum output entropy, which is established for depolarizing
//! channels but open for the wider class beyond d = 2. (For qubit unital
//! channels the unassisted capacity is known and is symmetric under
//! inversion of the mixing parameter, so no qubit UA asymmetry exists in
//! any case.) The entanglement-assisted capacity is additive for every
//! channel, which is why [`c_ea_wcc`] can exist.

use serde::{Serialize, Serializer};

use crate::channels::{wcc_cp_bounds, ChannelRep, WccSpec};
use crate::error::{Error, Result};
use crate::states::{shannon_entropy, ProbabilityVector};

// ---------------------------------------------------------------------------
// Report types
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CapacityKind {
    #[serde(rename = "UA")]
    Unassisted,
    #[serde(rename = "EA")]
    EntanglementAssisted,
    #[serde(rename = "Q_EA")]
    QuantumEntanglementAssisted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CapacityMethod {
    ClosedForm,
    Oracle,
}

/// One capacity evaluation: which channel, which capacity, how many bits,
/// and how the number was obtained.
#[derive(Debug, Clone, Serialize)]
pub struct CapacityReport {
    pub channel_desc: String,
    pub kind: CapacityKind,
    pub value: f64,
    pub method: CapacityMethod,
}

fn serialize_extended_real<S: Serializer>(v: &f64, s: S) -> std::result::Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
    } else {
        s.serialize_f64(*v)
    }
}

/// Completely positive window of a mixer family, `λ ∈ [lambda_min, lambda_max]`.
///
/// Either end is infinite exactly when the base distribution is uniform, in
/// which case every real parameter yields the same completely depolarizing
/// channel; the JSON form uses the strings "inf"/"-inf" for those ends.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CpRange {
    #[serde(serialize_with = "serialize_extended_real")]
    pub lambda_min: f64,
    #[serde(serialize_with = "serialize_extended_real")]
    pub lambda_max: f64,
    #[serde(serialize_with = "serialize_extended_real")]
    pub reciprocal_bound: f64,
}

impl CpRange {
    fn new(lambda_min: f64, lambda_max: f64) -> Self {
        Self {
            lambda_min,
            lambda_max,
            reciprocal_bound: lambda_min.abs().min(lambda_max.abs()),
        }
    }
}

// ---------------------------------------------------------------------------
// Depolarizing-channel capacities
// ---------------------------------------------------------------------------

/// Lower end of the admissible depolarizing interval, `-1/(d²-1)`.
pub fn lambda_min_dc(d: usize) -> f64 {
    assert!(d >= 2, "dimension must be at least 2");
    -1.0 / ((d * d) as f64 - 1.0)
}

fn check_dc_lambda(d: usize, lambda: f64) -> Result<()> {
    let min = lambda_min_dc(d);
    if !(min - 1e-12..=1.0 + 1e-12).contains(&lambda) {
        return Err(Error::LambdaOutOfRange {
            lambda,
            min,
            max: 1.0,
        });
    }
    Ok(())
}

/// Shannon entropy of the output spectrum `{(1+(n-1)λ)/n, ((1-λ)/n)^(n-1)}`.
///
/// This distribution stays valid for every λ down to `-1/(d²-1)` when `n`
/// is taken to be `d²`, which is what the entanglement-assisted formula
/// needs; the public entry points enforce their own windows.
fn output_spectrum_entropy(n: usize, lambda: f64) -> f64 {
    let nf = n as f64;
    let big = ((1.0 + (nf - 1.0) * lambda) / nf).clamp(0.0, 1.0);
    let small = ((1.0 - lambda) / nf).clamp(0.0, 1.0);
    let mut weights = vec![small; n];
    weights[0] = big;
    let p = ProbabilityVector::new(weights)
        .expect("depolarizing output spectrum is a distribution in range");
    shannon_entropy(&p)
}

/// Minimum output entropy of the depolarizing channel, in bits.
pub fn smin_dc(d: usize, lambda: f64) -> Result<f64> {
    check_dc_lambda(d, lambda)?;
    Ok(output_spectrum_entropy(d, lambda))
}

/// Unassisted classical capacity `log d - S_min`.
pub fn c_ua_dc(d: usize, lambda: f64) -> Result<f64> {
    check_dc_lambda(d, lambda)?;
    Ok((d as f64).log2() - output_spectrum_entropy(d, lambda))
}

/// Entanglement-assisted classical capacity: the unassisted formula
/// evaluated in dimension d², i.e. `2 log d - H({p_z(λ)})` with `{p_z(λ)}`
/// the channel's Weyl mixture. Valid on the full window `[λ_m(d), 1]`.
pub fn c_ea_dc(d: usize, lambda: f64) -> Result<f64> {
    check_dc_lambda(d, lambda)?;
    Ok(2.0 * (d as f64).log2() - output_spectrum_entropy(d * d, lambda))
}

/// Entanglement-assisted capacity of a Weyl-covariant channel,
/// `2 log d - H({p_z})`.
pub fn c_ea_wcc(spec: &WccSpec) -> f64 {
    2.0 * (spec.d() as f64).log2() - shannon_entropy(spec.probabilities())
}

/// Entanglement-assisted quantum capacity, half the classical one.
pub fn q_ea(c_ea: f64) -> Result<f64> {
    if c_ea < 0.0 {
        return Err(Error::NegativeValue(c_ea));
    }
    Ok(c_ea / 2.0)
}

// ---------------------------------------------------------------------------
// CP windows and asymmetry ratios
// ---------------------------------------------------------------------------

/// Completely positive window of the mixer family over the Weyl mixture `q`:
/// `λ_m = max_(q_z > 1/d²) 1/(1 - d² q_z)`, `λ_M = min_(q_z < 1/d²) 1/(1 - d² q_z)`.
pub fn cp_range_wcc(q: &ProbabilityVector, d: usize) -> Result<CpRange> {
    if q.len() != d * d {
        return Err(Error::InvalidDistribution(format!(
            "expected {} weights for dimension {d}, got {}",
            d * d,
            q.len()
        )));
    }
    let (lo, hi) = wcc_cp_bounds(q.weights(), d);
    Ok(CpRange::new(lo, hi))
}

/// Relative capacity gap between the two members of a reciprocal
/// depolarizing pair, `(C(-|λ|) - C(+|λ|)) / C(+|λ|)`.
pub fn asymmetry_ratio_dc(d: usize, abs_lambda: f64, kind: CapacityKind) -> Result<f64> {
    if abs_lambda == 0.0 {
        return Err(Error::UndefinedRatio(
            "ratio is 0/0 at zero depolarization".into(),
        ));
    }
    let bound = lambda_min_dc(d).abs();
    if abs_lambda < 0.0 || abs_lambda > bound + 1e-12 {
        return Err(Error::LambdaOutOfRange {
            lambda: abs_lambda,
            min: 0.0,
            max: bound,
        });
    }
    let cap = |lambda: f64| -> Result<f64> {
        match kind {
            CapacityKind::Unassisted => c_ua_dc(d, lambda),
            CapacityKind::EntanglementAssisted => c_ea_dc(d, lambda),
            CapacityKind::QuantumEntanglementAssisted => q_ea(c_ea_dc(d, lambda)?),
        }
    };
    let plus = cap(abs_lambda)?;
    let minus = cap(-abs_lambda)?;
    Ok((minus - plus) / plus)
}

/// Entanglement-assisted asymmetry ratio of the reciprocal mixer pair over a
/// Weyl mixture `q`, evaluated from the mixture distributions
/// `(1 ± (d² q_z - 1)|λ|)/d²`.
pub fn asymmetry_ratio_wcc_ea(q: &ProbabilityVector, d: usize, abs_lambda: f64) -> Result<f64> {
    if abs_lambda == 0.0 {
        return Err(Error::UndefinedRatio(
            "ratio is 0/0 at zero mixing".into(),
        ));
    }
    let range = cp_range_wcc(q, d)?;
    if abs_lambda < 0.0 || abs_lambda > range.reciprocal_bound + 1e-12 {
        return Err(Error::LambdaOutOfRange {
            lambda: abs_lambda,
            min: 0.0,
            max: range.reciprocal_bound,
        });
    }
    let spec = WccSpec::new(d, q.clone())?;
    let p_plus = spec.mixer_distribution(abs_lambda)?;
    let p_minus = spec.mixer_distribution(-abs_lambda)?;
    let log_d = (d as f64).log2();
    let c_plus = 2.0 * log_d - shannon_entropy(&p_plus);
    let c_minus = 2.0 * log_d - shannon_entropy(&p_minus);
    if c_plus.abs() <= 1e-12 {
        return Err(Error::UndefinedRatio(format!(
            "denominator capacity is {c_plus:.3e}"
        )));
    }
    Ok((c_minus - c_plus) / c_plus)
}

// ---------------------------------------------------------------------------
// Fidelities
// ---------------------------------------------------------------------------

/// Input-output fidelity of the depolarizing channel on any pure state,
/// `f(λ) = (1 + (d-1)λ)/d`.
pub fn mover_fidelity(d: usize, lambda: f64) -> Result<f64> {
    check_dc_lambda(d, lambda)?;
    Ok((1.0 + (d as f64 - 1.0) * lambda) / d as f64)
}

/// Average input-output fidelity over Haar-random pure inputs, computed from
/// a Kraus decomposition as `(Σ_k |tr M_k|² + d) / (d(d+1))`.
pub fn avg_output_fidelity(phi: &ChannelRep) -> Result<f64> {
    if phi.d_in() != phi.d_out() {
        return Err(Error::DimensionMismatch(format!(
            "average fidelity needs equal input/output dimensions, got {} -> {}",
            phi.d_in(),
            phi.d_out()
        )));
    }
    if !phi.is_tp() {
        return Err(Error::NotTracePreserving(phi.tp_defect()));
    }
    let kraus = phi.kraus_operators()?;
    let d = phi.d_in() as f64;
    let trace_sum: f64 = kraus.iter().map(|m| m.trace().norm_sqr()).sum();
    Ok((trace_sum + d) / (d * (d + 1.0)))
}
