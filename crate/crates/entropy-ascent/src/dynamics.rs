//! The steepest-entropy-ascent rate law and its entropy production.
//!
//! For in-support probabilities the rate of change is a ratio of
//! determinants,
//!
//! ```text
//!             1   | p_j ln p_j   p_j      e_j p_j  |
//! dp_j/dt = - - · | Σ p ln p     1        Σ e p    |  /  | 1      Σ e p  |
//!             τ   | Σ e p ln p   Σ e p    Σ e² p   |     | Σ e p  Σ e² p |
//! ```
//!
//! with every sum restricted to the support set, and out-of-support entries
//! held at zero. The same vector solves a constrained steepest-ascent
//! projection: `dp_j/dt = -(1/τ)(p_j ln p_j + α p_j + β̃ e_j p_j)` with
//! `(α, β̃)` chosen so the rates conserve normalization and energy. Both
//! Both forms are implemented here ([`sea_rate`] expands the determinants
//! by first-row cofactors, [`sea_rate_oracle`] solves the 2×2 multiplier
//! system by elimination) and they must agree to rounding.
//!
//! Both evaluations shift the energies by the current mean before forming
//! the moment sums. The shift leaves every determinant, and hence the rate,
//! exactly invariant (it adds multiples of one row/column to another) while
//! removing the catastrophic cancellation the raw moments suffer when the
//! support is small or the levels are clustered.

use crate::spectrum::EnergySpectrum;
use crate::state::{stable_sum, ModelConstants, StateDistribution};
use crate::{Error, Result};

/// Energy-variance cutoff factor: below `1e-13·range²` the state carries all
/// its probability at a single energy value and the rate is declared zero,
/// avoiding 0/0 in the determinant ratio.
const VARIANCE_CUTOFF_FACTOR: f64 = 1e-13;

/// The rates `dp/dt` of a state; zero outside the state's support.
#[derive(Debug, Clone, PartialEq)]
pub struct RateVector {
    rates: Vec<f64>,
}

impl RateVector {
    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.rates
    }

    pub fn linf_norm(&self) -> f64 {
        self.rates.iter().fold(0.0, |m, r| m.max(r.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.rates.iter().all(|&r| r == 0.0)
    }
}

/// Support-restricted moment sums of a state, with energies centered on the
/// current mean energy.
pub(crate) struct Moments {
    /// Σ e p (the uncentered mean energy).
    pub mean_energy: f64,
    /// Σ p ln p.
    pub p_log_p: f64,
    /// Σ ê p with ê = e − mean; zero up to rounding, carried honestly.
    pub centered_e: f64,
    /// Σ ê² p (the energy variance, equal to the 2×2 Gram determinant).
    pub centered_e2: f64,
    /// Σ ê p ln p.
    pub centered_e_log_p: f64,
}

impl Moments {
    pub(crate) fn compute(probs: &[f64], support: &[usize], levels: &[f64]) -> Self {
        let n = support.len();
        let mean_energy = stable_sum(support.iter().map(|&i| levels[i] * probs[i]), n);
        let p_log_p = stable_sum(
            support.iter().map(|&i| probs[i] * probs[i].ln()),
            n,
        );
        let centered_e = stable_sum(
            support.iter().map(|&i| (levels[i] - mean_energy) * probs[i]),
            n,
        );
        let centered_e2 = stable_sum(
            support.iter().map(|&i| {
                let d = levels[i] - mean_energy;
                d * d * probs[i]
            }),
            n,
        );
        let centered_e_log_p = stable_sum(
            support.iter().map(|&i| (levels[i] - mean_energy) * probs[i] * probs[i].ln()),
            n,
        );
        Self {
            mean_energy,
            p_log_p,
            centered_e,
            centered_e2,
            centered_e_log_p,
        }
    }

    /// The 2×2 Gram determinant `Σe²p − (Σep)²` in centered form.
    pub(crate) fn gram2(&self) -> f64 {
        self.centered_e2 - self.centered_e * self.centered_e
    }
}

fn variance_cutoff(spectrum_range: f64) -> f64 {
    VARIANCE_CUTOFF_FACTOR * spectrum_range * spectrum_range
}

/// Determinant-form rate evaluation on raw slices; shared with the
/// integrator, which calls it on Runge–Kutta stage vectors.
pub(crate) fn rate_core(
    probs: &[f64],
    support: &[usize],
    levels: &[f64],
    spectrum_range: f64,
    tau: f64,
) -> Vec<f64> {
    let mut rates = vec![0.0; probs.len()];
    let m = Moments::compute(probs, support, levels);
    let d2 = m.gram2();
    if d2 <= variance_cutoff(spectrum_range) {
        return rates; // degenerate support: equilibrium by convention
    }
    // First-row cofactor minors of the centered 3×3; constant across j.
    let minor_12 = m.p_log_p * m.centered_e2 - m.centered_e_log_p * m.centered_e;
    let minor_13 = m.p_log_p * m.centered_e - m.centered_e_log_p;
    for &j in support {
        let p = probs[j];
        let e_hat = levels[j] - m.mean_energy;
        let det3 = p * p.ln() * d2 - p * minor_12 + e_hat * p * minor_13;
        rates[j] = -det3 / (tau * d2);
    }
    rates
}

/// Steepest-entropy-ascent rates via the determinant ratio.
///
/// Returns the zero vector when the in-support energy variance falls below
/// the degeneracy cutoff (all probability at one energy value). Entries
/// outside the support are exactly zero; the in-support rates sum to zero
/// and are orthogonal to the energies, so normalization and energy are
/// conserved by construction.
pub fn sea_rate(
    state: &StateDistribution,
    spectrum: &EnergySpectrum,
    constants: &ModelConstants,
) -> Result<RateVector> {
    if state.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), actual: state.len() });
    }
    Ok(RateVector {
        rates: rate_core(
            state.probs(),
            state.support(),
            spectrum.levels(),
            spectrum.range(),
            constants.tau(),
        ),
    })
}

/// Steepest-entropy-ascent rates via the Lagrange-multiplier system.
///
/// Solves the 2×2 system that enforces `Σ dp/dt = 0` and `Σ e dp/dt = 0`
/// by Gaussian elimination with partial pivoting, then assembles
/// `dp_j/dt = -(1/τ) p_j (ln p_j + α + β̃ ê_j)`. Agrees with [`sea_rate`]
/// by Cramer's rule; the two assemblies are kept as independent paths so
/// each checks the other.
pub fn sea_rate_oracle(
    state: &StateDistribution,
    spectrum: &EnergySpectrum,
    constants: &ModelConstants,
) -> Result<RateVector> {
    if state.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), actual: state.len() });
    }
    let probs = state.probs();
    let levels = spectrum.levels();
    let mut rates = vec![0.0; probs.len()];
    let m = Moments::compute(probs, state.support(), levels);
    if m.gram2() <= variance_cutoff(spectrum.range()) {
        return Ok(RateVector { rates });
    }
    // System matrix [[1, Σêp], [Σêp, Σê²p]], right side [−Σp ln p, −Σê p ln p].
    let (a11, a12, a21, a22) = (1.0, m.centered_e, m.centered_e, m.centered_e2);
    let (r1, r2) = (-m.p_log_p, -m.centered_e_log_p);
    let (alpha, beta_tilde) = solve_2x2(a11, a12, a21, a22, r1, r2);
    for &j in state.support() {
        let p = probs[j];
        let e_hat = levels[j] - m.mean_energy;
        rates[j] = -(p.ln() + alpha + beta_tilde * e_hat) * p / constants.tau();
    }
    Ok(RateVector { rates })
}

/// 2×2 Gaussian elimination with partial pivoting.
fn solve_2x2(a11: f64, a12: f64, a21: f64, a22: f64, r1: f64, r2: f64) -> (f64, f64) {
    if a21.abs() > a11.abs() {
        // swap rows
        let f = a11 / a21;
        let u22 = a12 - f * a22;
        let y = (r1 - f * r2) / u22;
        let x = (r2 - a22 * y) / a21;
        (x, y)
    } else {
        let f = a21 / a11;
        let u22 = a22 - f * a12;
        let y = (r2 - f * r1) / u22;
        let x = (r1 - a12 * y) / a11;
        (x, y)
    }
}

/// The rate of entropy generation, a ratio of Gram determinants:
///
/// ```text
///            k   | Σ p (ln p)²   Σ p ln p   Σ e p ln p |
/// dS/dt  =   - · | Σ p ln p      1          Σ e p      |  /  G₂   ≥  0
///            τ   | Σ e p ln p    Σ e p      Σ e² p     |
/// ```
///
/// where `G₂` is the same 2×2 Gram determinant as in the rate law. The 3×3
/// matrix is the Gram matrix of the vectors `(ln p·√p, √p, e·√p)`, so the
/// ratio is non-negative; it vanishes exactly at (partially) canonical
/// states. Returns zero for degenerate support.
///
/// The evaluation centers both `e` on the mean energy and `ln p` on
/// `Σ p ln p` before expanding; these shifts leave the Gram determinant
/// exactly unchanged and remove the cancellation between the otherwise
/// large diagonal products.
pub fn entropy_production(
    state: &StateDistribution,
    spectrum: &EnergySpectrum,
    constants: &ModelConstants,
) -> Result<f64> {
    if state.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), actual: state.len() });
    }
    let probs = state.probs();
    let levels = spectrum.levels();
    let support = state.support();
    let n = support.len();
    let m = Moments::compute(probs, support, levels);
    let g2 = m.gram2();
    if g2 <= variance_cutoff(spectrum.range()) {
        return Ok(0.0);
    }
    // Center ln p on its mean as well, carrying the tiny residual cross
    // moments honestly through the full cofactor expansion.
    let f_mean = m.p_log_p;
    let w = stable_sum(
        support.iter().map(|&i| probs[i] * (probs[i].ln() - f_mean)),
        n,
    );
    let q = stable_sum(
        support.iter().map(|&i| {
            let d = probs[i].ln() - f_mean;
            d * d * probs[i]
        }),
        n,
    );
    let g = stable_sum(
        support
            .iter()
            .map(|&i| (levels[i] - m.mean_energy) * probs[i] * (probs[i].ln() - f_mean)),
        n,
    );
    let u = m.centered_e;
    let v = m.centered_e2;
    let g3 = q * (v - u * u) - w * (w * v - u * g) + g * (w * u - g);
    Ok(constants.k() * g3 / (constants.tau() * g2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{energy, ValidationMode};
    use proptest::prelude::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn consts() -> ModelConstants {
        ModelConstants::default()
    }

    /// Literal evaluation of the rate law in raw (uncentered) variables,
    /// expanding the full 3×3 by the rule of Sarrus. Independent of the
    /// implementation path; only used on well-conditioned states.
    fn literal_rate(state: &StateDistribution, spectrum: &EnergySpectrum, tau: f64) -> Vec<f64> {
        let p = state.probs();
        let e = spectrum.levels();
        let sup = state.support();
        let s_plnp: f64 = sup.iter().map(|&i| p[i] * p[i].ln()).sum();
        let s_ep: f64 = sup.iter().map(|&i| e[i] * p[i]).sum();
        let s_e2p: f64 = sup.iter().map(|&i| e[i] * e[i] * p[i]).sum();
        let s_eplnp: f64 = sup.iter().map(|&i| e[i] * p[i] * p[i].ln()).sum();
        let det2 = s_e2p - s_ep * s_ep;
        let mut rates = vec![0.0; p.len()];
        for &j in sup {
            let (a, b, c) = (p[j] * p[j].ln(), p[j], e[j] * p[j]);
            let det3 = a * (1.0 * s_e2p - s_ep * s_ep) - b * (s_plnp * s_e2p - s_eplnp * s_ep)
                + c * (s_plnp * s_ep - s_eplnp);
            rates[j] = -det3 / (tau * det2);
        }
        rates
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateDistribution {
        // exponential spacings give a uniform draw from the simplex
        let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
        StateDistribution::new(raw, ValidationMode::Lenient).unwrap()
    }

    fn random_spectrum(rng: &mut ChaCha8Rng, n: usize) -> EnergySpectrum {
        EnergySpectrum::new((0..n).map(|_| rng.gen_range(0.0..10.0)).collect()).unwrap()
    }

    #[test]
    fn uniform_state_is_stationary() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0, 5.0]).unwrap();
        let state = StateDistribution::uniform(4).unwrap();
        let r = sea_rate(&state, &spec, &consts()).unwrap();
        assert!(r.linf_norm() <= 1e-12, "uniform rate = {}", r.linf_norm());
    }

    #[test]
    fn two_level_states_are_stationary() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let e0: f64 = rng.gen_range(0.0..10.0);
            let e1: f64 = rng.gen_range(0.0..10.0);
            if (e0 - e1).abs() < 1e-6 {
                continue;
            }
            let spec = EnergySpectrum::new(vec![e0, e1]).unwrap();
            let state = random_state(&mut rng, 2);
            let r = sea_rate(&state, &spec, &consts()).unwrap();
            assert!(
                r.linf_norm() <= 1e-12,
                "two-level rate {} for e=({e0},{e1}) p={:?}",
                r.linf_norm(),
                state.probs()
            );
        }
    }

    #[test]
    fn pure_state_is_stationary() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let state = StateDistribution::pure(3, 1).unwrap();
        assert!(sea_rate(&state, &spec, &consts()).unwrap().is_zero());
        assert!(sea_rate_oracle(&state, &spec, &consts()).unwrap().is_zero());
        assert_eq!(entropy_production(&state, &spec, &consts()).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_spectrum_gives_zero_rate() {
        let spec = EnergySpectrum::new(vec![2.0, 2.0, 2.0]).unwrap();
        let state = StateDistribution::validate(vec![0.5, 0.2, 0.3]).unwrap();
        assert!(sea_rate(&state, &spec, &consts()).unwrap().is_zero());
    }

    #[test]
    fn reference_three_level_rate() {
        // hand-checked case: p pulled toward the canonical state of E = 0.8
        let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let state = StateDistribution::validate(vec![0.5, 0.2, 0.3]).unwrap();
        let r = sea_rate(&state, &spec, &consts()).unwrap();
        let rates = r.rates();
        assert!(rates[0] < 0.0 && rates[1] > 0.0 && rates[2] < 0.0);

        let sum: f64 = rates.iter().sum();
        let e_sum: f64 = rates.iter().zip(spec.levels()).map(|(r, e)| r * e).sum();
        assert!(sum.abs() <= 1e-12);
        assert!(e_sum.abs() <= 1e-12 * spec.range());

        // determinant form vs multiplier form
        let oracle = sea_rate_oracle(&state, &spec, &consts()).unwrap();
        for (a, b) in rates.iter().zip(oracle.rates()) {
            assert!((a - b).abs() <= 1e-12);
        }

        // literal raw-variable evaluation
        let lit = literal_rate(&state, &spec, 1.0);
        for (a, b) in rates.iter().zip(&lit) {
            assert!((a - b).abs() <= 1e-10, "{a} vs {b}");
        }
    }

    #[test]
    fn rate_scales_inversely_with_tau() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let state = StateDistribution::validate(vec![0.5, 0.2, 0.3]).unwrap();
        let r1 = sea_rate(&state, &spec, &consts()).unwrap();
        let r2 = sea_rate(&state, &spec, &ModelConstants::new(1.0, 2.0).unwrap()).unwrap();
        for (a, b) in r1.rates().iter().zip(r2.rates()) {
            assert!((a - 2.0 * b).abs() < 1e-14);
        }
    }

    #[test]
    fn canonical_states_are_stationary() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0, 3.5]).unwrap();
        for beta in [-2.0, -0.5, 0.0, 0.7, 3.0] {
            let weights: Vec<f64> = spec.levels().iter().map(|e| (-beta * e).exp()).collect();
            let state = StateDistribution::new(weights, ValidationMode::Lenient).unwrap();
            let r = sea_rate_oracle(&state, &spec, &consts()).unwrap();
            assert!(r.linf_norm() <= 1e-12, "beta={beta}: {}", r.linf_norm());
            let prod = entropy_production(&state, &spec, &consts()).unwrap();
            assert!(prod.abs() <= 1e-12, "beta={beta}: production {prod}");
        }
    }

    #[test]
    fn production_matches_chain_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let n = rng.gen_range(2..=8);
            let spec = random_spectrum(&mut rng, n);
            let state = random_state(&mut rng, n);
            let prod = entropy_production(&state, &spec, &consts()).unwrap();
            let rates = sea_rate(&state, &spec, &consts()).unwrap();
            // dS/dt = −k Σ ṗ ln p (the Σ ṗ term vanishes)
            let chain: f64 = -state
                .support()
                .iter()
                .map(|&i| rates.rates()[i] * state.probs()[i].ln())
                .sum::<f64>();
            assert!(
                (prod - chain).abs() <= 1e-10,
                "production {prod} vs chain rule {chain}"
            );
            assert!(prod >= -1e-12);
        }
    }

    #[test]
    fn determinant_and_multiplier_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut worst: f64 = 0.0;
        for _ in 0..1000 {
            let n = rng.gen_range(2..=8);
            let spec = random_spectrum(&mut rng, n);
            let state = random_state(&mut rng, n);
            let a = sea_rate(&state, &spec, &consts()).unwrap();
            let b = sea_rate_oracle(&state, &spec, &consts()).unwrap();
            let gap = a
                .rates()
                .iter()
                .zip(b.rates())
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst = worst.max(gap);
        }
        assert!(worst < 1e-10, "worst oracle gap {worst}");
    }

    #[test]
    fn literal_determinant_agrees_on_moderate_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let n = rng.gen_range(3..=6);
            let spec = random_spectrum(&mut rng, n);
            if spec.range() < 0.5 {
                continue;
            }
            let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..1.0)).collect();
            let state = StateDistribution::new(raw, ValidationMode::Lenient).unwrap();
            let r = sea_rate(&state, &spec, &consts()).unwrap();
            let lit = literal_rate(&state, &spec, 1.0);
            for (a, b) in r.rates().iter().zip(&lit) {
                assert!((a - b).abs() <= 1e-10, "{a} vs literal {b}");
            }
        }
    }

    #[test]
    fn out_of_support_rates_are_exactly_zero() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap();
        let state = StateDistribution::validate(vec![0.6, 0.0, 0.4]).unwrap();
        let r = sea_rate(&state, &spec, &consts()).unwrap();
        assert_eq!(r.rates()[1], 0.0);
        assert!(r.rates()[0] != 0.0);
    }

    #[test]
    fn length_mismatch_is_an_error() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0]).unwrap();
        let state = StateDistribution::uniform(3).unwrap();
        assert!(sea_rate(&state, &spec, &consts()).is_err());
        assert!(sea_rate_oracle(&state, &spec, &consts()).is_err());
        assert!(entropy_production(&state, &spec, &consts()).is_err());
    }

    proptest! {
        #[test]
        fn rates_conserve_normalization_and_energy(
            raw in proptest::collection::vec(1e-4..1.0f64, 3..9),
            seed in 0u64..1000,
        ) {
            let n = raw.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spectrum(&mut rng, n);
            let state = StateDistribution::new(raw, ValidationMode::Lenient).unwrap();
            let r = sea_rate(&state, &spec, &consts()).unwrap();
            let sum: f64 = r.rates().iter().sum();
            let e_sum: f64 = r.rates().iter().zip(spec.levels()).map(|(r, e)| r * e).sum();
            prop_assert!(sum.abs() <= 1e-12);
            prop_assert!(e_sum.abs() <= 1e-12 * (1.0 + spec.range()));
        }

        #[test]
        fn production_is_nonnegative(
            raw in proptest::collection::vec(1e-6..1.0f64, 2..9),
            seed in 0u64..1000,
        ) {
            let n = raw.len();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let spec = random_spectrum(&mut rng, n);
            let state = StateDistribution::new(raw, ValidationMode::Lenient).unwrap();
            let prod = entropy_production(&state, &spec, &consts()).unwrap();
            prop_assert!(prod >= -1e-12, "negative production {prod}");
        }
    }

    #[test]
    fn energy_mean_consistency() {
        // Moments.mean_energy must equal the energy functional
        let spec = EnergySpectrum::new(vec![0.3, 1.1, 4.2]).unwrap();
        let state = StateDistribution::validate(vec![0.2, 0.5, 0.3]).unwrap();
        let m = Moments::compute(state.probs(), state.support(), spec.levels());
        assert!((m.mean_energy - energy(&state, &spec).unwrap()).abs() < 1e-15);
    }
}
