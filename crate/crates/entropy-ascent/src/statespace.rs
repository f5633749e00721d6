//! The energy–entropy diagram.
//!
//! For fixed amounts and volume, every state of the gas projects to a point
//! of the (E, S) plane. The feasible region is bounded below by `S = 0`
//! (the states of mechanics) and above by the concave curve `S_max(E)` of
//! stable equilibrium states; every interior point is the projection of
//! infinitely many nonequilibrium states. A bounded spectrum gives the
//! boundary two branches meeting at the apex `(mean e, k ln N)`: the
//! familiar rising β > 0 branch and a falling β < 0 (negative-temperature)
//! branch absent from systems with unbounded energy.
//!
//! On top of the diagram this module answers the classic availability
//! questions: the adiabatic availability `E − E_min(S)` (the energy drop to
//! the minimum-energy state of equal entropy), the available energy
//! `Ω = (E − E_ref) − T_R (S − S_ref)` relative to a reservoir at `T_R`
//! (with the mutual-equilibrium canonical state as reference), and the
//! Maxwell-demon question: does any state of lower energy and no lower
//! entropy exist at all?
//!
//! Entropies here are in nats (`k = 1`).

use crate::equilibrium::{beta_from_energy, canonical_energy, canonical_entropy};
use crate::spectrum::EnergySpectrum;
use crate::state::StateDistribution;
use crate::{Error, Result};

/// How far the sampled β grid reaches into the tails, as a multiple of
/// 1/range. exp(−36) ≈ 2e-16 puts the deepest samples within rounding of
/// the spectrum endpoints.
const TAIL_DEPTH: f64 = 36.0;

/// Outermost point of the compressed grid coordinate.
const U_MAX: f64 = 0.999;

/// Slack accepted on the entropy side of boundary queries.
const FEASIBILITY_SLACK: f64 = 1e-9;

/// One sampled stable-equilibrium state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveSample {
    pub energy: f64,
    pub entropy: f64,
    pub beta: f64,
}

/// Which side of the apex a point's energy falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BetaBranch {
    Positive,
    Zero,
    Negative,
}

/// The sampled `S_max(E)` boundary of the feasible (E, S) region.
///
/// Samples are strictly increasing in energy. Between samples the boundary
/// is interpolated by monotone piecewise cubics whose node slopes are the
/// exact thermodynamic derivatives `dS/dE = β`; below the first and above
/// the last sample the curve closes linearly onto the exact endpoint
/// entropies `ln g` set by the degeneracies of the extreme levels.
#[derive(Debug, Clone)]
pub struct DiagramCurve {
    samples: Vec<CurveSample>,
    spectrum: EnergySpectrum,
    apex: usize,
    entropy_at_min: f64,
    entropy_at_max: f64,
}

/// A heat reservoir, characterized by its strictly positive temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReservoirSpec {
    temperature: f64,
}

impl ReservoirSpec {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature.is_finite() && temperature > 0.0) {
            return Err(Error::Domain(format!(
                "reservoir temperature {temperature} must be strictly positive"
            )));
        }
        Ok(Self { temperature })
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }
}

/// Outcome of the Maxwell-demon feasibility check.
#[derive(Debug, Clone)]
pub struct FeasibilityVerdict {
    pub feasible: bool,
    /// A stable state achieving lower energy at no lower entropy, when one exists.
    pub witness: Option<StateDistribution>,
    pub witness_energy: Option<f64>,
    /// Branch of the queried point.
    pub branch: BetaBranch,
}

/// Sample the stable-equilibrium boundary.
///
/// β is sampled uniformly in an artanh-compressed coordinate covering both
/// signs, which resolves the flat apex and the steep exponential tails with
/// one grid; the apex β = 0 is always included exactly. A spectrum with a
/// single distinct energy yields the degenerate one-point curve.
pub fn smax_curve(spectrum: &EnergySpectrum, n_samples: usize) -> Result<DiagramCurve> {
    let full: Vec<usize> = (0..spectrum.len()).collect();
    if spectrum.is_degenerate() {
        let e = spectrum.min_level();
        let s = (spectrum.len() as f64).ln();
        return Ok(DiagramCurve {
            samples: vec![CurveSample { energy: e, entropy: s, beta: 0.0 }],
            spectrum: spectrum.clone(),
            apex: 0,
            entropy_at_min: s,
            entropy_at_max: s,
        });
    }
    if n_samples < 3 {
        return Err(Error::Domain("need at least 3 samples for a two-branch curve".into()));
    }

    let range = spectrum.range();
    let beta_scale = TAIL_DEPTH / (range * U_MAX.atanh());

    // uniform grid in u = tanh(β/scale); replace the u closest to zero by
    // exactly zero so the apex is always a sample
    let mut us: Vec<f64> = (0..n_samples)
        .map(|j| -U_MAX + 2.0 * U_MAX * j as f64 / (n_samples - 1) as f64)
        .collect();
    let nearest = us
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.abs().total_cmp(&b.abs()))
        .map(|(i, _)| i)
        .expect("non-empty grid");
    us[nearest] = 0.0;

    let mut samples: Vec<CurveSample> = Vec::with_capacity(n_samples);
    // ascending u is descending β, hence ascending E
    for &u in us.iter() {
        let beta = -beta_scale * u.atanh();
        let energy = canonical_energy(beta, spectrum, &full)?;
        let entropy = canonical_entropy(beta, spectrum, &full)?;
        // exponential-tail samples can saturate to equal energies in f64;
        // keep the samples strictly increasing
        if samples.last().is_none_or(|prev| energy > prev.energy) {
            samples.push(CurveSample { energy, entropy, beta });
        }
    }
    let apex = samples
        .iter()
        .position(|s| s.beta == 0.0)
        .expect("apex sample survives deduplication");

    Ok(DiagramCurve {
        samples,
        spectrum: spectrum.clone(),
        apex,
        entropy_at_min: (spectrum.ground_degeneracy() as f64).ln(),
        entropy_at_max: (spectrum.top_degeneracy() as f64).ln(),
    })
}

impl DiagramCurve {
    pub fn samples(&self) -> &[CurveSample] {
        &self.samples
    }

    pub fn spectrum(&self) -> &EnergySpectrum {
        &self.spectrum
    }

    /// The apex sample (β = 0): maximum entropy over all energies.
    pub fn apex(&self) -> CurveSample {
        self.samples[self.apex]
    }

    pub fn is_degenerate(&self) -> bool {
        self.samples.len() == 1
    }

    /// Interpolated boundary entropy at energy `e` (clamped to the spectrum
    /// range).
    pub fn smax_at(&self, e: f64) -> f64 {
        if self.is_degenerate() {
            return self.samples[0].entropy;
        }
        let e_min = self.spectrum.min_level();
        let e_max = self.spectrum.max_level();
        if e <= e_min {
            return self.entropy_at_min;
        }
        if e >= e_max {
            return self.entropy_at_max;
        }
        let first = &self.samples[0];
        if e <= first.energy {
            let t = (e - e_min) / (first.energy - e_min);
            return self.entropy_at_min + t * (first.entropy - self.entropy_at_min);
        }
        let last = self.samples.last().expect("non-empty");
        if e >= last.energy {
            let t = (e - last.energy) / (e_max - last.energy);
            return last.entropy + t * (self.entropy_at_max - last.entropy);
        }
        let hi = self.samples.partition_point(|s| s.energy < e);
        let (a, b) = (&self.samples[hi - 1], &self.samples[hi]);
        hermite_monotone(e, a, b)
    }

    /// Branch of a given energy relative to the apex.
    pub fn branch_of(&self, e: f64) -> BetaBranch {
        let apex_e = self.samples[self.apex].energy;
        let tol = 1e-12 * self.spectrum.range().max(1.0);
        if (e - apex_e).abs() <= tol {
            BetaBranch::Zero
        } else if e < apex_e {
            BetaBranch::Positive
        } else {
            BetaBranch::Negative
        }
    }

    /// Smallest energy whose boundary entropy reaches `s` (the β ≥ 0
    /// branch). Bracketed on the sample grid, then bisected on the exact
    /// canonical entropy within the bracketing cell.
    fn min_energy_at_entropy(&self, s: f64) -> Result<f64> {
        let peak = self.samples[self.apex].entropy;
        if s > peak + FEASIBILITY_SLACK {
            return Err(Error::Domain(format!("entropy {s} above the curve peak {peak}")));
        }
        if s >= peak {
            return Ok(self.samples[self.apex].energy);
        }
        if s <= self.entropy_at_min {
            return Ok(self.spectrum.min_level());
        }
        let full: Vec<usize> = (0..self.spectrum.len()).collect();
        // entropy decreases along increasing β; expand past the deepest
        // sample if the grid does not reach s
        let mut beta_lo = 0.0_f64; // S(0) = peak ≥ s
        let mut beta_hi = self.samples[0].beta;
        if canonical_entropy(beta_hi, &self.spectrum, &full)? > s {
            let mut guard = 0;
            while canonical_entropy(beta_hi, &self.spectrum, &full)? > s {
                beta_lo = beta_hi;
                beta_hi *= 2.0;
                guard += 1;
                if guard > 100 {
                    break;
                }
            }
        } else {
            // refine the bracket using the sampled branch
            for w in self.samples[..=self.apex].windows(2) {
                if w[0].entropy <= s && s <= w[1].entropy {
                    beta_lo = w[1].beta;
                    beta_hi = w[0].beta;
                    break;
                }
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (beta_lo + beta_hi);
            if canonical_entropy(mid, &self.spectrum, &full)? > s {
                beta_lo = mid;
            } else {
                beta_hi = mid;
            }
            if (beta_hi - beta_lo).abs() <= f64::EPSILON * beta_hi.abs() {
                break;
            }
        }
        canonical_energy(0.5 * (beta_lo + beta_hi), &self.spectrum, &full)
    }
}

/// Cubic Hermite between two curve samples with the exact node slopes
/// `dS/dE = β`, run through the Fritsch–Carlson monotonicity safeguard so
/// interpolation cannot overshoot the concave boundary.
fn hermite_monotone(e: f64, a: &CurveSample, b: &CurveSample) -> f64 {
    let h = b.energy - a.energy;
    let delta = (b.entropy - a.entropy) / h;
    let (mut m0, mut m1) = (a.beta, b.beta);
    if delta == 0.0 {
        m0 = 0.0;
        m1 = 0.0;
    } else {
        let alpha = m0 / delta;
        let beta = m1 / delta;
        if alpha < 0.0 {
            m0 = 0.0;
        }
        if beta < 0.0 {
            m1 = 0.0;
        }
        let s = alpha * alpha + beta * beta;
        if s > 9.0 {
            let scale = 3.0 / s.sqrt();
            m0 = scale * alpha * delta;
            m1 = scale * beta * delta;
        }
    }
    let t = (e - a.energy) / h;
    let t2 = t * t;
    let t3 = t2 * t;
    a.entropy * (2.0 * t3 - 3.0 * t2 + 1.0)
        + h * m0 * (t3 - 2.0 * t2 + t)
        + b.entropy * (-2.0 * t3 + 3.0 * t2)
        + h * m1 * (t3 - t2)
}

/// Is `(E, S)` the projection of any state? True iff the energy lies in the
/// spectrum range and `0 ≤ S ≤ S_max(E)`, boundaries included.
pub fn is_feasible_point(e: f64, s: f64, curve: &DiagramCurve) -> bool {
    let e_tol = 1e-12 * curve.spectrum().range().max(1.0);
    if e < curve.spectrum().min_level() - e_tol || e > curve.spectrum().max_level() + e_tol {
        return false;
    }
    s >= -FEASIBILITY_SLACK && s <= curve.smax_at(e) + FEASIBILITY_SLACK
}

/// Adiabatic availability: the energy drop to the minimum-energy state of
/// equal entropy, `E − E_min(S)`, with `E_min` found on the β > 0 branch.
/// Non-negative for every feasible point; zero exactly on that branch.
pub fn adiabatic_availability(e: f64, s: f64, curve: &DiagramCurve) -> Result<f64> {
    if !is_feasible_point(e, s, curve) {
        return Err(Error::Domain(format!("point (E = {e}, S = {s}) is not feasible")));
    }
    let e_min = curve.min_energy_at_entropy(s)?;
    // on-boundary queries can land a rounding step below zero
    Ok((e - e_min).max(0.0))
}

/// Generalized available energy relative to a reservoir at `T_R`:
/// `Ω = (E − E_ref) − T_R (S − S_ref)`, where the reference is the
/// mutual-equilibrium state, the canonical state at the reservoir
/// temperature. Non-negative; zero only at the reference point.
pub fn available_energy(
    e: f64,
    s: f64,
    reservoir: &ReservoirSpec,
    spectrum: &EnergySpectrum,
) -> Result<f64> {
    let full: Vec<usize> = (0..spectrum.len()).collect();
    let beta_r = 1.0 / reservoir.temperature();
    let e_ref = canonical_energy(beta_r, spectrum, &full)?;
    let s_ref = canonical_entropy(beta_r, spectrum, &full)?;
    Ok((e - e_ref) - reservoir.temperature() * (s - s_ref))
}

/// The Maxwell-demon check: from a state projecting to `(E₀, S₀)`, does any
/// state with `E < E₀` and `S ≥ S₀` exist at the same amounts and volume?
///
/// Geometrically: is there an `E′ < E₀` with `S_max(E′) ≥ S₀`? The answer
/// is no exactly when the point sits on the β ≥ 0 stable branch (or at its
/// foot, the pure ground state); every interior point, and every stable
/// state on the β < 0 branch of a bounded spectrum, admits a witness. The
/// witness returned is the canonical state halfway between `E_min(S₀)` and
/// the queried energy (capped at the apex).
pub fn demon_check(e0: f64, s0: f64, curve: &DiagramCurve) -> Result<FeasibilityVerdict> {
    if !is_feasible_point(e0, s0, curve) {
        return Err(Error::Domain(format!("point (E = {e0}, S = {s0}) is not feasible")));
    }
    let branch = curve.branch_of(e0);
    if curve.is_degenerate() {
        return Ok(FeasibilityVerdict {
            feasible: false,
            witness: None,
            witness_energy: None,
            branch,
        });
    }
    let e_floor = curve.min_energy_at_entropy(s0.max(0.0))?;
    let e_cap = e0.min(curve.apex().energy);
    let margin = 1e-9 * curve.spectrum().range().max(1.0);
    if e_floor >= e_cap - margin {
        return Ok(FeasibilityVerdict {
            feasible: false,
            witness: None,
            witness_energy: None,
            branch,
        });
    }
    let witness_energy = 0.5 * (e_floor + e_cap);
    let full: Vec<usize> = (0..curve.spectrum().len()).collect();
    let witness = beta_from_energy(witness_energy, curve.spectrum(), &full)?;
    Ok(FeasibilityVerdict {
        feasible: true,
        witness: Some(witness.distribution().clone()),
        witness_energy: Some(witness_energy),
        branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::canonical_full;
    use crate::integrate::{integrate, IntegratorConfig};
    use crate::optimize::{maximize_on_energy_shell, tilt_to_energy};
    use crate::state::{energy, entropy, ModelConstants, StateDistribution, ValidationMode};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spec012() -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap()
    }

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> StateDistribution {
        let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
        StateDistribution::new(raw, ValidationMode::Lenient).unwrap()
    }

    #[test]
    fn two_level_curve_peaks_at_half() {
        let spec = EnergySpectrum::new(vec![0.0, 1.0]).unwrap();
        let curve = smax_curve(&spec, 129).unwrap();
        let apex = curve.apex();
        assert_eq!(apex.beta, 0.0);
        assert!((apex.energy - 0.5).abs() < 1e-12);
        assert!((apex.entropy - 2.0_f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn three_level_apex_is_ln3_at_mean() {
        let curve = smax_curve(&spec012(), 512).unwrap();
        let apex = curve.apex();
        assert!((apex.energy - 1.0).abs() < 1e-9);
        assert!((apex.entropy - 3.0_f64.ln()).abs() < 1e-9);
        // interpolated query at the apex energy agrees
        assert!((curve.smax_at(1.0) - 3.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn sampled_curve_is_concave() {
        // chord slopes must be non-increasing (second differences ≤ 0 up to
        // the stated tolerance) across the full two-branch curve
        let curve = smax_curve(&spec012(), 512).unwrap();
        let tol = 1e-8 * (3.0_f64).ln();
        let slopes: Vec<f64> = curve
            .samples()
            .windows(2)
            .map(|w| (w[1].entropy - w[0].entropy) / (w[1].energy - w[0].energy))
            .collect();
        for w in slopes.windows(2) {
            assert!(w[1] <= w[0] + tol, "convex kink: {} then {}", w[0], w[1]);
        }
    }

    #[test]
    fn interpolation_brackets_exact_boundary() {
        // The Hermite interpolant of the concave boundary with exact node
        // slopes lies above the true curve: it may overestimate slightly
        // (most near the apex, and in relative terms in the exponential
        // tails where S itself is tiny) but must never undercut it; that
        // one-sidedness is what makes boundary points always feasible and
        // dominance hold for interior states.
        let spec = spec012();
        let curve = smax_curve(&spec, 512).unwrap();
        let full = [0usize, 1, 2];
        let mut worst_under: f64 = 0.0;
        let mut worst_over_bulk: f64 = 0.0;
        let mut worst_over_rel: f64 = 0.0;
        let mut beta = -17.9;
        while beta <= 17.9 {
            let e = canonical_energy(beta, &spec, &full).unwrap();
            let s = canonical_entropy(beta, &spec, &full).unwrap();
            let diff = curve.smax_at(e) - s;
            worst_under = worst_under.max(-diff);
            if s >= 0.01 {
                worst_over_bulk = worst_over_bulk.max(diff);
            }
            worst_over_rel = worst_over_rel.max(diff / s.max(1e-300));
            beta += 0.00173;
        }
        assert!(worst_under <= 1e-12, "interpolant undercut the boundary by {worst_under}");
        assert!(worst_over_bulk <= 2e-9, "bulk overestimate {worst_over_bulk}");
        assert!(worst_over_rel <= 0.05, "tail relative overestimate {worst_over_rel}");
    }

    #[test]
    fn feasibility_examples() {
        let curve = smax_curve(&spec012(), 512).unwrap();
        // the S = 0 line is feasible across the whole energy range
        for e in [0.0, 0.3, 1.0, 1.7, 2.0] {
            assert!(is_feasible_point(e, 0.0, &curve), "S=0 at E={e}");
        }
        // above the apex entropy is not
        assert!(!is_feasible_point(1.0, 3.0_f64.ln() + 0.1, &curve));
        // outside the energy range is not
        assert!(!is_feasible_point(2.1, 0.1, &curve));
        assert!(!is_feasible_point(-0.1, 0.0, &curve));
    }

    #[test]
    fn random_states_are_feasible_and_dominated() {
        let spec = spec012();
        let curve = smax_curve(&spec, 512).unwrap();
        let k = ModelConstants::default();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for _ in 0..10_000 {
            let state = random_state(&mut rng, 3);
            let e = energy(&state, &spec).unwrap();
            let s = entropy(&state, &k);
            assert!(s <= curve.smax_at(e) + 1e-9, "dominance violated at ({e}, {s})");
            assert!(is_feasible_point(e, s, &curve));
        }
    }

    #[test]
    fn availability_examples() {
        let spec = spec012();
        let curve = smax_curve(&spec, 512).unwrap();

        // a stable state on the β > 0 branch has nothing below it
        let e = canonical_energy(1.3, &spec, &[0, 1, 2]).unwrap();
        let s = canonical_entropy(1.3, &spec, &[0, 1, 2]).unwrap();
        let avail = adiabatic_availability(e, s, &curve).unwrap();
        assert!(avail.abs() < 1e-9, "boundary availability {avail}");

        // pure state at the top of a two-level spectrum: drop to the ground
        let spec2 = EnergySpectrum::new(vec![0.0, 1.0]).unwrap();
        let curve2 = smax_curve(&spec2, 257).unwrap();
        let avail = adiabatic_availability(1.0, 0.0, &curve2).unwrap();
        assert!((avail - 1.0).abs() < 1e-9);

        // interior state: strictly positive, between 0 and E − e_min
        let avail = adiabatic_availability(1.0, 0.9503, &curve).unwrap();
        assert!(avail > 0.0 && avail < 1.0, "interior availability {avail}");

        // entropy above the peak is a domain error
        assert!(adiabatic_availability(1.0, 1.2, &curve).is_err());
    }

    #[test]
    fn availability_inverse_matches_grid_oracle() {
        // independent oracle: dense grid scan for the smallest energy whose
        // boundary entropy reaches the target
        let spec = spec012();
        let curve = smax_curve(&spec, 512).unwrap();
        let s_target = 0.9503;
        let full = [0usize, 1, 2];
        let mut best = f64::INFINITY;
        let mut beta = 40.0;
        while beta >= 0.0 {
            let s = canonical_entropy(beta, &spec, &full).unwrap();
            if s >= s_target {
                best = canonical_energy(beta, &spec, &full).unwrap();
                break;
            }
            beta -= 1e-4;
        }
        let avail = adiabatic_availability(1.0, s_target, &curve).unwrap();
        assert!(
            (avail - (1.0 - best)).abs() < 1e-4,
            "availability {avail} vs grid oracle {}",
            1.0 - best
        );
    }

    #[test]
    fn exergy_zero_at_reference_and_positive_elsewhere() {
        let spec = spec012();
        let k = ModelConstants::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for t_r in [0.3, 1.0, 3.0] {
            let reservoir = ReservoirSpec::new(t_r).unwrap();
            let reference = canonical_full(1.0 / t_r, &spec).unwrap();
            let e_ref = energy(&reference, &spec).unwrap();
            let s_ref = entropy(&reference, &k);
            let at_ref = available_energy(e_ref, s_ref, &reservoir, &spec).unwrap();
            assert!(at_ref.abs() <= 1e-10, "Ω at reference = {at_ref}");

            for _ in 0..10_000 {
                let state = random_state(&mut rng, 3);
                let e = energy(&state, &spec).unwrap();
                let s = entropy(&state, &k);
                let omega = available_energy(e, s, &reservoir, &spec).unwrap();
                assert!(omega >= -1e-10, "Ω = {omega} at T_R = {t_r}");
            }
        }
    }

    #[test]
    fn exergy_decreases_along_sea_trajectory() {
        // isolated relaxation: ΔE = 0, so each entropy increment lowers Ω
        // by exactly T_R·ΔS
        let spec = spec012();
        let k = ModelConstants::default();
        let reservoir = ReservoirSpec::new(1.0).unwrap();
        let initial = StateDistribution::validate(vec![0.5, 0.2, 0.3]).unwrap();
        let traj =
            integrate(&initial, &spec, &k, &IntegratorConfig::rk4(0.01, 10.0, 10).unwrap())
                .unwrap();
        let omegas: Vec<f64> = traj
            .points()
            .iter()
            .map(|p| available_energy(p.energy, p.entropy, &reservoir, &spec).unwrap())
            .collect();
        for w in omegas.windows(2) {
            assert!(w[1] < w[0], "Ω must strictly decrease: {} -> {}", w[0], w[1]);
        }
    }

    #[test]
    fn reversible_permutation_changes_omega_only_through_energy() {
        // a probability permutation holds S fixed, so ΔΩ = ΔE exactly
        let spec = spec012();
        let k = ModelConstants::default();
        let reservoir = ReservoirSpec::new(0.7).unwrap();
        let state = StateDistribution::validate(vec![0.5, 0.2, 0.3]).unwrap();
        let permuted = state.permuted(&[2, 0, 1]).unwrap();
        let (e1, s1) = (energy(&state, &spec).unwrap(), entropy(&state, &k));
        let (e2, s2) = (energy(&permuted, &spec).unwrap(), entropy(&permuted, &k));
        assert_eq!(s1, s2);
        let o1 = available_energy(e1, s1, &reservoir, &spec).unwrap();
        let o2 = available_energy(e2, s2, &reservoir, &spec).unwrap();
        assert!(((e1 - e2) - (o1 - o2)).abs() <= 1e-12);
    }

    #[test]
    fn entropy_from_availability_is_reservoir_independent() {
        // recover S from Ω via the defining relation for several reservoirs;
        // all must agree with the direct functional
        let spec = spec012();
        let k = ModelConstants::default();
        let state = StateDistribution::validate(vec![0.45, 0.3, 0.25]).unwrap();
        let e = energy(&state, &spec).unwrap();
        let s_direct = entropy(&state, &k);
        for t_r in [0.3, 1.0, 3.0] {
            let reservoir = ReservoirSpec::new(t_r).unwrap();
            let full = [0usize, 1, 2];
            let e_ref = canonical_energy(1.0 / t_r, &spec, &full).unwrap();
            let s_ref = canonical_entropy(1.0 / t_r, &spec, &full).unwrap();
            let omega = available_energy(e, s_direct, &reservoir, &spec).unwrap();
            let s_recovered = s_ref + ((e - e_ref) - omega) / t_r;
            assert!(
                (s_recovered - s_direct).abs() <= 1e-10,
                "T_R = {t_r}: S {s_recovered} vs {s_direct}"
            );
        }
    }

    #[test]
    fn demon_verdicts() {
        let spec = spec012();
        let curve = smax_curve(&spec, 512).unwrap();
        let full = [0usize, 1, 2];
        let k = ModelConstants::default();

        // stable β > 0 state: infeasible
        let e = canonical_energy(0.9, &spec, &full).unwrap();
        let s = canonical_entropy(0.9, &spec, &full).unwrap();
        let verdict = demon_check(e, s, &curve).unwrap();
        assert!(!verdict.feasible);
        assert_eq!(verdict.branch, BetaBranch::Positive);

        // interior nonequilibrium state: feasible with a verifiable witness
        let state = StateDistribution::validate(vec![0.2, 0.6, 0.2]).unwrap();
        let (e0, s0) = (energy(&state, &spec).unwrap(), entropy(&state, &k));
        assert!((e0 - 1.0).abs() < 1e-12);
        let verdict = demon_check(e0, s0, &curve).unwrap();
        assert!(verdict.feasible);
        let witness = verdict.witness.unwrap();
        let we = energy(&witness, &spec).unwrap();
        let ws = entropy(&witness, &k);
        assert!(we < e0, "witness energy {we} ≥ {e0}");
        assert!(ws >= s0, "witness entropy {ws} < {s0}");

        // stable state on the β < 0 branch: feasible (the finite-spectrum
        // branch falls, so lower-energy states of higher entropy exist)
        let e = canonical_energy(-0.9, &spec, &full).unwrap();
        let s = canonical_entropy(-0.9, &spec, &full).unwrap();
        let verdict = demon_check(e, s, &curve).unwrap();
        assert!(verdict.feasible);
        assert_eq!(verdict.branch, BetaBranch::Negative);

        // pure ground state: nothing below
        let verdict = demon_check(0.0, 0.0, &curve).unwrap();
        assert!(!verdict.feasible);

        // infeasible input point is rejected
        assert!(demon_check(1.0, 1.2, &curve).is_err());
    }

    #[test]
    fn degenerate_spectrum_gives_one_point_curve() {
        let spec = EnergySpectrum::new(vec![2.0, 2.0]).unwrap();
        let curve = smax_curve(&spec, 512).unwrap();
        assert!(curve.is_degenerate());
        assert_eq!(curve.samples().len(), 1);
        assert!(is_feasible_point(2.0, 0.3, &curve));
        assert!(!is_feasible_point(2.0, 1.0, &curve)); // above ln 2
        let verdict = demon_check(2.0, 0.1, &curve).unwrap();
        assert!(!verdict.feasible);
    }

    #[test]
    fn constrained_maximizer_is_unique_from_many_starts() {
        // projected gradient ascent from 20 random interior starts on the
        // E = 0.8 shell all converge to the same distribution
        let spec = spec012();
        let levels = spec.levels().to_vec();
        let shannon = |p: &[f64]| -> f64 {
            -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let mut endpoints: Vec<Vec<f64>> = Vec::new();
        for _ in 0..20 {
            let raw = random_state(&mut rng, 3);
            let start = tilt_to_energy(raw.probs(), &levels, 0.8);
            let result = maximize_on_energy_shell(&shannon, &levels, &start, 5000);
            endpoints.push(result.state);
        }
        for pair in endpoints.windows(2) {
            let gap = pair[0]
                .iter()
                .zip(&pair[1])
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(gap < 1e-6, "two maximizer endpoints differ by {gap}");
        }
    }

    #[test]
    fn curve_invariant_entropy_matches_beta() {
        // every sample's entropy is the canonical entropy at its β
        let spec = spec012();
        let curve = smax_curve(&spec, 64).unwrap();
        let full = [0usize, 1, 2];
        for s in curve.samples() {
            let expect = canonical_entropy(s.beta, &spec, &full).unwrap();
            assert!((s.entropy - expect).abs() < 1e-12);
        }
    }
}
