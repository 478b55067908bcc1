//! Shared fixtures for the benchmark targets.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use recap_core::channels::{ChannelRep, WccSpec};
use recap_core::random::random_probability_vector;
use recap_core::DensityMatrix;

pub fn seeded_rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xBE7C)
}

pub fn fixture_wcc(d: usize) -> (WccSpec, ChannelRep) {
    let mut rng = seeded_rng();
    let spec = WccSpec::new(d, random_probability_vector(d * d, &mut rng))
        .expect("fixture distribution is valid");
    let phi = ChannelRep::from_wcc(&spec);
    (spec, phi)
}

pub fn fixture_state(d: usize) -> DensityMatrix {
    let mut rng = seeded_rng();
    recap_core::random::random_density_matrix(d, &mut rng)
}
