//! Self-verification suites: every structural identity of the channel
//! algebra plus the oracle/closed-form cross-checks, packaged for the
//! command-line `verify` subcommand.
//!
//! All randomness is derived from the root seed through [`split_seed`] with
//! one stream per check, so reports are byte-identical across runs with the
//! same seed and suite.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::capacities::{
    asymmetry_ratio_dc, asymmetry_ratio_wcc_ea, avg_output_fidelity, c_ea_dc, c_ea_wcc, c_ua_dc,
    cp_range_wcc, lambda_min_dc, mover_fidelity, smin_dc, CapacityKind,
};
use crate::channels::{weyl_operator, ChannelRep, WccSpec, WeylLabel};
use crate::linalg::{dagger, identity, max_abs_diff, trace_norm, CMat, C64};
use crate::oracles::{
    dc_projection_lambda, maximize_mutual_information, mc_average_fidelity, min_output_entropy,
    mutual_information, random_wcc_channel, twirl_channel_mc,
};
use crate::random::{
    haar_random_unitary, random_density_matrix, random_probability_vector,
    split_seed,
};
use crate::states::{DensityMatrix, ProbabilityVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Fast,
    Full,
}

impl Suite {
    fn name(&self) -> &'static str {
        match self {
            Suite::Fast => "fast",
            Suite::Full => "full",
        }
    }
}

/// One named check: passes when `residual <= tolerance`.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }
}

struct Runner {
    seed: u64,
    stream: u64,
    checks: Vec<CheckResult>,
}

impl Runner {
    fn new(seed: u64) -> Self {
        Self {
            seed,
            stream: 0,
            checks: Vec::new(),
        }
    }

    fn rng(&mut self) -> ChaCha8Rng {
        self.stream += 1;
        ChaCha8Rng::seed_from_u64(split_seed(self.seed, self.stream))
    }

    fn push(&mut self, name: &str, residual: f64, tolerance: f64) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            residual,
            tolerance,
            passed: residual <= tolerance,
        });
    }

    fn report(self, suite: Suite) -> SuiteReport {
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let failed = self.checks.len() - passed;
        SuiteReport {
            suite: suite.name().to_string(),
            seed: self.seed,
            total: self.checks.len(),
            passed,
            failed,
            checks: self.checks,
        }
    }
}

fn choi_distance(a: &ChannelRep, b: &ChannelRep) -> f64 {
    max_abs_diff(a.choi(), b.choi())
}

pub fn run_suite(suite: Suite, seed: u64) -> SuiteReport {
    let mut r = Runner::new(seed);
    let full = suite == Suite::Full;

    // --- operator algebra -------------------------------------------------

    {
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            for z in WeylLabel::all(d) {
                for w in WeylLabel::all(d) {
                    let wz = weyl_operator(d, z).unwrap();
                    let ww = weyl_operator(d, w).unwrap();
                    let overlap = (wz * dagger(&ww)).trace();
                    let expected = if z == w { d as f64 } else { 0.0 };
                    worst = worst.max((overlap - C64::new(expected, 0.0)).norm());
                }
            }
        }
        r.push("weyl_orthogonality", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let x = random_density_matrix(d, &mut rng).into_matrix();
            let mut acc = CMat::zeros(d, d);
            for z in WeylLabel::all(d) {
                let w = weyl_operator(d, z).unwrap();
                acc += &w * &x * dagger(&w);
            }
            acc /= C64::new((d * d) as f64, 0.0);
            let expected = identity(d).scale(x.trace().re / d as f64);
            worst = worst.max(max_abs_diff(&acc, &expected));
        }
        r.push("weyl_completeness", worst, 1e-12);
    }

    // --- depolarizing-channel structure ------------------------------------

    {
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let mixed = DensityMatrix::maximally_mixed(d);
            for k in 0..=4 {
                let lambda = lambda_min_dc(d) + k as f64 / 4.0 * (1.0 - lambda_min_dc(d));
                let dc = ChannelRep::depolarizing(d, lambda).unwrap();
                worst = worst.max(max_abs_diff(&dc.apply(&mixed).unwrap(), mixed.matrix()));
            }
        }
        r.push("dc_unitality", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let d = 3;
        let dc = ChannelRep::depolarizing(d, lambda_min_dc(d)).unwrap();
        let mut worst = 0.0_f64;
        for _ in 0..50 {
            let u = haar_random_unitary(d, &mut rng).unwrap();
            let rho = random_density_matrix(d, &mut rng);
            let lhs = dc
                .apply_operator(&(&u * rho.matrix() * dagger(&u)))
                .unwrap();
            let rhs = &u * dc.apply(&rho).unwrap() * dagger(&u);
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
        r.push("dc_unitary_covariance", worst, 1e-10);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let x = 0.8 * lambda_min_dc(d).abs();
            for &lambda in &[x, -x] {
                let dc = ChannelRep::depolarizing(d, lambda).unwrap();
                for _ in 0..25 {
                    let r1 = random_density_matrix(d, &mut rng);
                    let r2 = random_density_matrix(d, &mut rng);
                    let lhs = trace_norm(&(dc.apply(&r1).unwrap() - dc.apply(&r2).unwrap()));
                    let rhs = lambda.abs() * trace_norm(&(r1.matrix() - r2.matrix()));
                    worst = worst.max((lhs - rhs).abs());
                }
            }
        }
        r.push("dc_distance_contraction", worst, 1e-10);
    }

    {
        let mut rng = r.rng();
        let d = 2;
        let (spec, phi) = random_wcc_channel(d, &mut rng);
        let bound = cp_range_wcc(spec.probabilities(), d)
            .unwrap()
            .reciprocal_bound;
        let x = 0.9 * bound.min(5.0);
        let mut worst = 0.0_f64;
        for &lambda in &[x, -x] {
            let mixer = ChannelRep::mixer(&phi, lambda).unwrap();
            for _ in 0..25 {
                let r1 = random_density_matrix(d, &mut rng);
                let r2 = random_density_matrix(d, &mut rng);
                let lhs = trace_norm(&(mixer.apply(&r1).unwrap() - mixer.apply(&r2).unwrap()));
                let rhs = lambda.abs()
                    * trace_norm(&(phi.apply(&r1).unwrap() - phi.apply(&r2).unwrap()));
                worst = worst.max((lhs - rhs).abs());
            }
        }
        r.push("mixer_distance_contraction", worst, 1e-10);
    }

    {
        // Output separation of a reciprocal pair is twice the displacement
        // from the maximally mixed state.
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let x = 0.9 * lambda_min_dc(d).abs();
            let plus = ChannelRep::depolarizing(d, x).unwrap();
            let minus = ChannelRep::depolarizing(d, -x).unwrap();
            let mixed = identity(d).scale(1.0 / d as f64);
            for _ in 0..25 {
                let rho = random_density_matrix(d, &mut rng);
                let op = plus.apply(&rho).unwrap();
                let om = minus.apply(&rho).unwrap();
                let gap = trace_norm(&(&op - &om));
                worst = worst.max((gap - 2.0 * trace_norm(&(&op - &mixed))).abs());
                worst = worst.max((gap - 2.0 * trace_norm(&(&om - &mixed))).abs());
            }
        }
        r.push("reciprocal_displacement_factor_two", worst, 1e-10);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for _ in 0..30 {
            let d = if rng.next_u32().is_multiple_of(2) { 2 } else { 3 };
            let span = 1.0 - lambda_min_dc(d);
            let l1 = lambda_min_dc(d) + span * rng.random::<f64>();
            let l2 = lambda_min_dc(d) + span * rng.random::<f64>();
            let a = ChannelRep::depolarizing(d, l1).unwrap();
            let b = ChannelRep::depolarizing(d, l2).unwrap();
            let composed = a.compose(&b).unwrap();
            let expected = ChannelRep::depolarizing_unchecked(d, l1 * l2);
            worst = worst.max(choi_distance(&composed, &expected));
        }
        r.push("dc_semigroup", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for _ in 0..30 {
            let d = 2;
            let span = 1.0 - lambda_min_dc(d);
            let l1 = lambda_min_dc(d) + span * rng.random::<f64>();
            let l2 = lambda_min_dc(d) + span * rng.random::<f64>();
            let p: f64 = rng.random();
            let blend = ChannelRep::depolarizing_unchecked(d, p * l1 + (1.0 - p) * l2);
            let direct = ChannelRep::depolarizing(d, l1)
                .unwrap()
                .choi()
                .scale(p)
                + ChannelRep::depolarizing(d, l2).unwrap().choi().scale(1.0 - p);
            worst = worst.max(max_abs_diff(&direct, blend.choi()));
        }
        r.push("dc_convexity", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for _ in 0..30 {
            let d = 2;
            let (_, phi) = random_wcc_channel(d, &mut rng);
            let l1 = 2.0 * rng.random::<f64>() - 1.0;
            let l2 = 2.0 * rng.random::<f64>() - 1.0;
            let p: f64 = rng.random();
            let m1 = ChannelRep::mixer(&phi, l1).unwrap();
            let m2 = ChannelRep::mixer(&phi, l2).unwrap();
            let blend = ChannelRep::mixer(&phi, p * l1 + (1.0 - p) * l2).unwrap();
            let direct = m1.choi().scale(p) + m2.choi().scale(1.0 - p);
            worst = worst.max(max_abs_diff(&direct, blend.choi()));
        }
        r.push("mixer_convexity", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for _ in 0..30 {
            let d = 2;
            let (_, phi) = random_wcc_channel(d, &mut rng);
            let span = 1.0 - lambda_min_dc(d);
            let lambda = lambda_min_dc(d) + span * rng.random::<f64>();
            let l1 = 2.0 * rng.random::<f64>() - 1.0;
            let dc = ChannelRep::depolarizing(d, lambda).unwrap();
            let mixer = ChannelRep::mixer(&phi, l1).unwrap();
            let composed = dc.compose(&mixer).unwrap();
            let expected = ChannelRep::mixer(&phi, lambda * l1).unwrap();
            worst = worst.max(choi_distance(&composed, &expected));
        }
        r.push("dc_after_mixer_semigroup", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for _ in 0..30 {
            let d = 2;
            let (_, phi) = random_wcc_channel(d, &mut rng);
            let l1 = 2.0 * rng.random::<f64>() - 1.0;
            let lambda = 2.0 * rng.random::<f64>() - 1.0;
            let nested =
                ChannelRep::mixer(&ChannelRep::mixer(&phi, l1).unwrap(), lambda).unwrap();
            let flat = ChannelRep::mixer(&phi, lambda * l1).unwrap();
            worst = worst.max(choi_distance(&nested, &flat));
        }
        r.push("mixer_composition_identity", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for _ in 0..30 {
            let d = 2;
            let (spec, phi) = random_wcc_channel(d, &mut rng);
            let bounds = cp_range_wcc(spec.probabilities(), d).unwrap();
            let lambda = bounds.lambda_min
                + (bounds.lambda_max - bounds.lambda_min) * rng.random::<f64>();
            let mixed = ChannelRep::mixer(&phi, lambda).unwrap();
            let p = spec.mixer_distribution(lambda).unwrap();
            let as_wcc = ChannelRep::from_wcc(&WccSpec::new(d, p).unwrap());
            worst = worst.max(choi_distance(&mixed, &as_wcc));
        }
        r.push("mixer_of_wcc_is_wcc", worst, 1e-12);
    }

    {
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let x = 0.9 * lambda_min_dc(d).abs();
            let inv = ChannelRep::inversion(d);
            let plus = ChannelRep::depolarizing(d, x).unwrap();
            let minus = ChannelRep::depolarizing(d, -x).unwrap();
            worst = worst.max(choi_distance(&inv.compose(&plus).unwrap(), &minus));
            worst = worst.max(choi_distance(
                &inv.compose(&inv).unwrap(),
                &ChannelRep::identity_channel(d),
            ));
        }
        r.push("inversion_identities", worst, 1e-12);
    }

    {
        let mut rng = r.rng();
        let d = 3;
        let inv = ChannelRep::inversion(d);
        let mut worst = 0.0_f64;
        for _ in 0..25 {
            let r1 = random_density_matrix(d, &mut rng);
            let r2 = random_density_matrix(d, &mut rng);
            let lhs = trace_norm(&(inv.apply(&r1).unwrap() - inv.apply(&r2).unwrap()));
            let rhs = trace_norm(&(r1.matrix() - r2.matrix()));
            worst = worst.max((lhs - rhs).abs());
        }
        r.push("inversion_isometry", worst, 1e-10);
    }

    // --- completely positive boundaries ------------------------------------

    {
        let top = if full { 6 } else { 4 };
        let mut boundary = 0.0_f64;
        let mut outside = f64::NEG_INFINITY;
        for d in 2..=top {
            let edge = lambda_min_dc(d);
            boundary = boundary.max(
                ChannelRep::depolarizing(d, edge)
                    .unwrap()
                    .min_choi_eigenvalue()
                    .abs(),
            );
            outside = outside.max(
                ChannelRep::depolarizing_unchecked(d, edge - 1e-6).min_choi_eigenvalue(),
            );
        }
        r.push("dc_cp_boundary", boundary, 1e-10);
        // Just outside the window the Choi must be visibly negative.
        r.push("dc_cp_boundary_outside", outside, -1e-8);
    }

    {
        let mut rng = r.rng();
        let d = 2;
        let n = (d * d) as f64;
        let mut worst = 0.0_f64;
        let mut tested = 0;
        while tested < 5 {
            let q = random_probability_vector(d * d, &mut rng);
            if q.weights().iter().any(|&w| (n * w - 1.0).abs() < 0.05) {
                continue;
            }
            tested += 1;
            let spec = WccSpec::new(d, q.clone()).unwrap();
            let phi = ChannelRep::from_wcc(&spec);
            let range = cp_range_wcc(&q, d).unwrap();
            for &endpoint in &[range.lambda_min, range.lambda_max] {
                let at = ChannelRep::mixer(&phi, endpoint).unwrap();
                worst = worst.max((-at.min_choi_eigenvalue()).max(0.0));
                let beyond =
                    ChannelRep::mixer(&phi, endpoint + 1e-6 * endpoint.signum()).unwrap();
                if beyond.min_choi_eigenvalue() >= -1e-9 {
                    worst = worst.max(1.0);
                }
            }
        }
        r.push("wcc_mixer_cp_window", worst, 1e-9);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            for _ in 0..5 {
                let (spec, phi) = random_wcc_channel(d, &mut rng);
                let got = phi.cj_spectrum();
                let mut expected = spec.probabilities().weights().to_vec();
                expected.sort_by(|a, b| b.partial_cmp(a).unwrap());
                for (g, e) in got.iter().zip(expected.iter()) {
                    worst = worst.max((g - e).abs());
                }
            }
        }
        r.push("cj_spectrum_is_weyl_mixture", worst, 1e-10);
    }

    {
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            for &lambda in &[lambda_min_dc(d), -0.05, 0.3, 1.0] {
                let direct = ChannelRep::depolarizing(d, lambda).unwrap();
                let as_wcc = ChannelRep::from_wcc(&WccSpec::depolarizing(d, lambda).unwrap());
                worst = worst.max(choi_distance(&direct, &as_wcc));
            }
        }
        r.push("dc_as_weyl_mixture", worst, 1e-12);
    }

    // --- capacity orderings -------------------------------------------------

    {
        let mut most_negative = 0.0_f64;
        let mut qubit_ua = 0.0_f64;
        for d in 2..=10 {
            let edge = lambda_min_dc(d).abs();
            for k in 1..=50 {
                let x = edge * k as f64 / 50.0;
                for kind in [CapacityKind::Unassisted, CapacityKind::EntanglementAssisted] {
                    let a = asymmetry_ratio_dc(d, x, kind).unwrap();
                    most_negative = most_negative.max(-a);
                    if d == 2 && kind == CapacityKind::Unassisted {
                        qubit_ua = qubit_ua.max(a.abs());
                    }
                }
            }
        }
        r.push("capacity_asymmetry_nonnegative", most_negative, 1e-12);
        r.push("qubit_ua_asymmetry_zero", qubit_ua, 1e-12);
    }

    {
        let d = 3;
        let grid: Vec<f64> = (0..=8)
            .map(|k| lambda_min_dc(d) + k as f64 / 8.0 * (1.0 - lambda_min_dc(d)))
            .collect();
        let mut violation = 0.0_f64;
        for &l1 in &grid {
            for &l2 in &grid {
                for cap in [c_ua_dc, c_ea_dc] {
                    let joint = cap(d, l1 * l2).unwrap();
                    let bound = cap(d, l1).unwrap().min(cap(d, l2).unwrap());
                    violation = violation.max(joint - bound);
                }
            }
        }
        r.push("capacity_composition_ordering", violation, 1e-9);

        let mut convexity = 0.0_f64;
        for &l1 in &grid {
            for &l2 in &grid {
                for &p in &[0.25, 0.5, 0.75] {
                    for cap in [c_ua_dc, c_ea_dc] {
                        let lhs = cap(d, p * l1 + (1.0 - p) * l2).unwrap();
                        let rhs = p * cap(d, l1).unwrap() + (1.0 - p) * cap(d, l2).unwrap();
                        convexity = convexity.max(lhs - rhs);
                    }
                }
            }
        }
        r.push("capacity_convexity", convexity, 1e-9);

        let mut gap = 0.0_f64;
        for d in [2usize, 3, 5] {
            for k in 0..=20 {
                let lambda = lambda_min_dc(d) + k as f64 / 20.0 * (1.0 - lambda_min_dc(d));
                gap = gap.max(c_ua_dc(d, lambda).unwrap() - c_ea_dc(d, lambda).unwrap());
            }
        }
        r.push("ea_dominates_ua", gap, 1e-9);
    }

    {
        // Coarse simplex scan: the largest ratio must be 1 and must sit on a
        // depolarizing mixture pattern (three equal weights below 1/4).
        let res = if full { 21 } else { 11 };
        let mut best = f64::NEG_INFINITY;
        let mut best_q = [0.0_f64; 4];
        let mut has_negative = false;
        for i in 0..res {
            for j in 0..res {
                for k in 0..res {
                    let q1 = i as f64 / (res - 1) as f64;
                    let q2 = j as f64 / (res - 1) as f64;
                    let q3 = k as f64 / (res - 1) as f64;
                    let q0 = 1.0 - q1 - q2 - q3;
                    if q0 < -1e-12 {
                        continue;
                    }
                    let q =
                        ProbabilityVector::new(vec![q0.max(0.0), q1, q2, q3]).unwrap();
                    let bound = cp_range_wcc(&q, 2).unwrap().reciprocal_bound;
                    if !bound.is_finite() {
                        continue;
                    }
                    if let Ok(a) = asymmetry_ratio_wcc_ea(&q, 2, bound) {
                        if a < 0.0 {
                            has_negative = true;
                        }
                        if a > best {
                            best = a;
                            best_q = [q0.max(0.0), q1, q2, q3];
                        }
                    }
                }
            }
        }
        let mut sorted = best_q;
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let pattern_defect = (sorted[0] - sorted[1])
            .abs()
            .max((sorted[1] - sorted[2]).abs())
            .max((sorted[3] - (1.0 - 3.0 * sorted[0])).abs());
        let mut residual = (best - 1.0).abs().max(pattern_defect);
        if !has_negative {
            residual = residual.max(1.0);
        }
        r.push("simplex_maximum_at_depolarizing_point", residual, 1e-9);
    }

    // --- oracle cross-checks -------------------------------------------------

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        let counts: &[(usize, usize)] = if full { &[(2, 6), (3, 3)] } else { &[(2, 3), (3, 2)] };
        for &(d, reps) in counts {
            for k in 0..reps {
                let (spec, phi) = random_wcc_channel(d, &mut rng);
                let oracle = maximize_mutual_information(
                    &phi,
                    1e-8,
                    2,
                    split_seed(seed, 7000 + (d * 100 + k) as u64),
                )
                .unwrap();
                worst = worst.max((oracle.optimum_value - c_ea_wcc(&spec)).abs());
            }
        }
        r.push("ea_oracle_vs_closed_form_wcc", worst, 1e-6);
    }

    {
        let mut worst = 0.0_f64;
        let mut cases = vec![(2usize, -1.0 / 3.0), (3, -0.125), (3, 0.5)];
        if full {
            cases.push((4, lambda_min_dc(4)));
            cases.push((4, 0.3));
        }
        for (k, (d, lambda)) in cases.into_iter().enumerate() {
            let phi = ChannelRep::depolarizing(d, lambda).unwrap();
            let oracle =
                maximize_mutual_information(&phi, 1e-8, 2, split_seed(seed, 7100 + k as u64))
                    .unwrap();
            worst = worst.max((oracle.optimum_value - c_ea_dc(d, lambda).unwrap()).abs());
        }
        r.push("ea_oracle_vs_closed_form_dc", worst, 1e-6);
    }

    {
        let mut rng = r.rng();
        let d = 2;
        let (_, phi) = random_wcc_channel(d, &mut rng);
        let at_mixed = mutual_information(&DensityMatrix::maximally_mixed(d), &phi).unwrap();
        let mut excess = 0.0_f64;
        for _ in 0..100 {
            let rho = random_density_matrix(d, &mut rng);
            excess = excess.max(mutual_information(&rho, &phi).unwrap() - at_mixed);
        }
        r.push("wcc_maximizer_is_maximally_mixed", excess, 1e-9);
    }

    {
        let mut worst = 0.0_f64;
        for (k, lambda) in [-0.125, 0.0, 0.5].into_iter().enumerate() {
            let phi = ChannelRep::depolarizing(3, lambda).unwrap();
            let oracle =
                min_output_entropy(&phi, 1e-8, 2, split_seed(seed, 7200 + k as u64)).unwrap();
            worst = worst.max((oracle.optimum_value - smin_dc(3, lambda).unwrap()).abs());
        }
        r.push("smin_oracle_vs_closed_form_dc", worst, 1e-6);
    }

    {
        let mut rng = r.rng();
        let n = if full { 100_000 } else { 10_000 };
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            for k in 0..2 {
                let (spec, phi) = random_wcc_channel(d, &mut rng);
                let est = mc_average_fidelity(
                    &phi,
                    n,
                    split_seed(seed, 7300 + (d * 10 + k) as u64),
                )
                .unwrap();
                let closed =
                    (d as f64 * spec.probabilities().weights()[0] + 1.0) / (d as f64 + 1.0);
                worst = worst.max((est.mean - closed).abs() / (3.0 * est.std_err.max(1e-300)));
            }
        }
        r.push("mc_fidelity_within_three_sigma", worst, 1.0);
    }

    {
        // Same agreement for Choi-sampled channels, where the average
        // fidelity has no shortcut and the Kraus-trace form carries it alone.
        let mut rng = r.rng();
        let n = if full { 50_000 } else { 10_000 };
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let phi = crate::oracles::random_cptp_channel(d, d * d, &mut rng);
            let closed = avg_output_fidelity(&phi).unwrap();
            let est =
                mc_average_fidelity(&phi, n, split_seed(seed, 7350 + d as u64)).unwrap();
            worst = worst.max((est.mean - closed).abs() / (3.0 * est.std_err.max(1e-300)));
        }
        r.push("mc_fidelity_generic_channels", worst, 1.0);
    }

    {
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            let lambda = 0.7 * lambda_min_dc(d);
            let phi = ChannelRep::depolarizing(d, lambda).unwrap();
            let est =
                mc_average_fidelity(&phi, 1000, split_seed(seed, 7400 + d as u64)).unwrap();
            worst = worst.max((est.mean - mover_fidelity(d, lambda).unwrap()).abs());
            worst = worst.max(est.std_err);
        }
        r.push("mover_fidelity_constant_on_pure_states", worst, 1e-10);
    }

    {
        let mut rng = r.rng();
        let mut worst = 0.0_f64;
        for d in [2usize, 3] {
            for _ in 0..5 {
                let (spec, phi) = random_wcc_channel(d, &mut rng);
                let closed =
                    (d as f64 * spec.probabilities().weights()[0] + 1.0) / (d as f64 + 1.0);
                worst = worst.max((avg_output_fidelity(&phi).unwrap() - closed).abs());
            }
        }
        r.push("avg_fidelity_kraus_trace_form", worst, 1e-10);
    }

    {
        let mut rng = r.rng();
        let d = 2;
        let (_, phi) = random_wcc_channel(d, &mut rng);
        let n = if full { 100_000 } else { 10_000 };
        let tol = if full { 5e-3 } else { 2e-2 };
        let twirled = twirl_channel_mc(&phi, n, split_seed(seed, 7500)).unwrap();
        let dc = ChannelRep::depolarizing_unchecked(d, dc_projection_lambda(&twirled));
        let mut residual = trace_norm(&(twirled.choi() - dc.choi()));
        let f_gap =
            (avg_output_fidelity(&phi).unwrap() - avg_output_fidelity(&twirled).unwrap()).abs();
        residual = residual.max(f_gap);
        r.push("twirl_projects_onto_depolarizing", residual, tol);
    }

    r.report(suite)
}
