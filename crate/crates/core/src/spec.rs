//! JSON channel descriptions, the wire format consumed by the command-line
//! front end.
//!
//! ```json
//! {"type":"dc","d":3,"lambda":-0.125}
//! {"type":"wcc","d":2,"p":[0.7,0.1,0.1,0.1]}
//! {"type":"mixer","base":{"type":"wcc","d":2,"p":[0.7,0.1,0.1,0.1]},"lambda":0.5}
//! ```
//!
//! Specs are rejected when the resulting Choi matrix is not positive
//! semidefinite, unless `"allow_non_cp":true` is set on the object.

use serde::{Deserialize, Serialize};

use crate::channels::{maximally_entangled_state, weyl_operator, ChannelRep, WccSpec, WeylLabel};
use crate::error::{Error, Result};
use crate::linalg::{projector, CMat, CVec};
use crate::states::ProbabilityVector;

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ChannelSpec {
    Dc {
        d: usize,
        lambda: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        allow_non_cp: bool,
    },
    Wcc {
        d: usize,
        /// d² weights over phase-space labels, row-major with x outermost.
        p: Vec<f64>,
        #[serde(default, skip_serializing_if = "is_false")]
        allow_non_cp: bool,
    },
    Mixer {
        base: Box<ChannelSpec>,
        lambda: f64,
        #[serde(default, skip_serializing_if = "is_false")]
        allow_non_cp: bool,
    },
}

impl ChannelSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("channel specs always serialize")
    }

    pub fn dimension(&self) -> usize {
        match self {
            ChannelSpec::Dc { d, .. } | ChannelSpec::Wcc { d, .. } => *d,
            ChannelSpec::Mixer { base, .. } => base.dimension(),
        }
    }

    pub fn allows_non_cp(&self) -> bool {
        match self {
            ChannelSpec::Dc { allow_non_cp, .. }
            | ChannelSpec::Wcc { allow_non_cp, .. }
            | ChannelSpec::Mixer { allow_non_cp, .. } => *allow_non_cp,
        }
    }

    /// Builds the channel, enforcing complete positivity unless the spec
    /// opts out.
    pub fn build(&self) -> Result<ChannelRep> {
        match self {
            ChannelSpec::Dc {
                d,
                lambda,
                allow_non_cp,
            } => {
                if *d < 2 {
                    return Err(Error::DimensionTooSmall(*d));
                }
                if *allow_non_cp {
                    Ok(ChannelRep::depolarizing_unchecked(*d, *lambda))
                } else {
                    ChannelRep::depolarizing(*d, *lambda)
                }
            }
            ChannelSpec::Wcc { d, p, allow_non_cp } => {
                if *d < 2 {
                    return Err(Error::DimensionTooSmall(*d));
                }
                if p.len() != d * d {
                    return Err(Error::InvalidDistribution(format!(
                        "expected {} weights for dimension {d}, got {}",
                        d * d,
                        p.len()
                    )));
                }
                let sum: f64 = p.iter().sum();
                if (sum - 1.0).abs() > 1e-10 {
                    return Err(Error::InvalidDistribution(format!(
                        "weights sum to {sum}, expected 1"
                    )));
                }
                if p.iter().any(|&w| w < -1e-12) {
                    if *allow_non_cp {
                        return weyl_quasi_mixture(*d, p);
                    }
                    let worst = p.iter().cloned().fold(f64::INFINITY, f64::min);
                    return Err(Error::NotCompletelyPositive(worst));
                }
                let dist = ProbabilityVector::new(p.clone())?;
                Ok(ChannelRep::from_wcc(&WccSpec::new(*d, dist)?))
            }
            ChannelSpec::Mixer {
                base,
                lambda,
                allow_non_cp,
            } => {
                let base_rep = base.build()?;
                let mixed = ChannelRep::mixer(&base_rep, *lambda)?;
                if !allow_non_cp && !mixed.is_cp() {
                    return Err(Error::NotCompletelyPositive(mixed.min_choi_eigenvalue()));
                }
                Ok(mixed)
            }
        }
    }

    /// Reduces the spec to its canonical Weyl mixture `(d, {p_z})`, the form
    /// the entanglement-assisted capacity formula consumes. Fails if the
    /// described map is not a channel.
    pub fn effective_weyl_mixture(&self) -> Result<(usize, ProbabilityVector)> {
        match self {
            ChannelSpec::Dc { d, lambda, .. } => {
                if *d < 2 {
                    return Err(Error::DimensionTooSmall(*d));
                }
                let spec = WccSpec::depolarizing(*d, *lambda)?;
                Ok((*d, spec.probabilities().clone()))
            }
            ChannelSpec::Wcc { d, p, .. } => {
                if *d < 2 {
                    return Err(Error::DimensionTooSmall(*d));
                }
                if p.len() != d * d {
                    return Err(Error::InvalidDistribution(format!(
                        "expected {} weights for dimension {d}, got {}",
                        d * d,
                        p.len()
                    )));
                }
                if let Some(&worst) = p
                    .iter()
                    .filter(|&&w| w < -1e-12)
                    .min_by(|a, b| a.partial_cmp(b).unwrap())
                {
                    // Negative Weyl weights mean a non-PSD Choi matrix, not a
                    // malformed spec.
                    return Err(Error::NotCompletelyPositive(worst));
                }
                Ok((*d, ProbabilityVector::new(p.clone())?))
            }
            ChannelSpec::Mixer { base, lambda, .. } => {
                let (d, q) = base.effective_weyl_mixture()?;
                let spec = WccSpec::new(d, q)?;
                Ok((d, spec.mixer_distribution(*lambda)?))
            }
        }
    }
}

/// Weyl combination with possibly negative weights; only reachable through
/// `allow_non_cp`.
fn weyl_quasi_mixture(d: usize, weights: &[f64]) -> Result<ChannelRep> {
    let n = d * d;
    let omega = maximally_entangled_state(d);
    let mut choi = CMat::zeros(n, n);
    for z in WeylLabel::all(d) {
        let wz = weights[z.index(d)];
        if wz == 0.0 {
            continue;
        }
        let w = weyl_operator(d, z)?;
        let mut v = CVec::zeros(n);
        for i in 0..d {
            for k in 0..d {
                v[i * d + k] = w[(k, i)] * omega[i * d + i];
            }
        }
        choi += projector(&v).scale(wz);
    }
    ChannelRep::from_choi(d, d, choi)
}
