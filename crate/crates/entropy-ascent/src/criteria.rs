//! A validator harness for candidate entropy functionals.
//!
//! Any expression claiming to be the entropy must clear eight criteria:
//!
//! 1. well defined for every system and every state;
//! 2. invariant under reversible adiabatic processes and non-decreasing
//!    under irreversible ones;
//! 3. additive over independent systems;
//! 4. non-negative, vanishing on the states of mechanics;
//! 5. a unique maximizer at given energy;
//! 6. a concave, smooth maximized value as a function of energy;
//! 7. equal thermodynamic potentials across a composite at the joint
//!    maximum;
//! 8. agreement with the established equilibrium relations.
//!
//! The harness operationalizes each criterion at the distribution level:
//! reversible adiabatic processes become probability permutations,
//! irreversible ones doubly-stochastic mixing (and, for the Shannon
//! functional, steepest-entropy-ascent trajectories). Criterion 8 is
//! stated for ideal-gas relations that a finite-level model cannot
//! express; it is replaced by its desk-scale surrogate, the canonical
//! identity
//! `S = ln Z + βE`, and marked not-applicable for candidates whose
//! constrained maximizers are not canonical.
//!
//! Every failure records a concrete counterexample that can be replayed
//! standalone; a fixed seed makes the whole report reproducible
//! byte-for-byte. Shannon's functional passes all eight checks; the
//! bundled foils each break a different criterion (Tsallis and the
//! quadratic lose additivity, Hartley loses maximizer uniqueness).

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::equilibrium::{beta_from_energy, canonical_energy, canonical_entropy, Beta};
use crate::integrate::{integrate, IntegratorConfig};
use crate::optimize::{maximize_on_energy_shell, tilt_to_energy};
use crate::spectrum::EnergySpectrum;
use crate::state::{ModelConstants, StateDistribution, ValidationMode};
use crate::{Error, Result};

/// A named entropy functional under test.
#[derive(Clone)]
pub struct EntropyCandidate {
    name: String,
    parameters: Vec<(String, f64)>,
    functional: Arc<dyn Fn(&StateDistribution) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for EntropyCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EntropyCandidate")
            .field("name", &self.name)
            .field("parameters", &self.parameters)
            .finish()
    }
}

impl EntropyCandidate {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn parameters(&self) -> &[(String, f64)] {
        &self.parameters
    }

    pub fn evaluate(&self, state: &StateDistribution) -> f64 {
        (self.functional)(state)
    }

    /// `-Σ p ln p` in nats.
    pub fn shannon() -> Self {
        Self {
            name: "shannon".into(),
            parameters: vec![],
            functional: Arc::new(|s| crate::state::entropy(s, &ModelConstants::default())),
        }
    }

    /// `(1 − Σ p^q)/(q − 1)`.
    pub fn tsallis(q: f64) -> Result<Self> {
        if !(q.is_finite() && q != 1.0) {
            return Err(Error::Domain(format!("tsallis parameter q = {q} must differ from 1")));
        }
        Ok(Self {
            name: "tsallis".into(),
            parameters: vec![("q".into(), q)],
            functional: Arc::new(move |s| {
                let power: f64 = s.support().iter().map(|&i| s.probs()[i].powf(q)).sum();
                (1.0 - power) / (q - 1.0)
            }),
        })
    }

    /// `ln(Σ p^α)/(1 − α)`.
    pub fn renyi(alpha: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha != 1.0) {
            return Err(Error::Domain(format!("renyi parameter α = {alpha} must differ from 1")));
        }
        Ok(Self {
            name: "renyi".into(),
            parameters: vec![("alpha".into(), alpha)],
            functional: Arc::new(move |s| {
                let power: f64 = s.support().iter().map(|&i| s.probs()[i].powf(alpha)).sum();
                power.ln() / (1.0 - alpha)
            }),
        })
    }

    /// `ln |support|`.
    pub fn hartley() -> Self {
        Self {
            name: "hartley".into(),
            parameters: vec![],
            functional: Arc::new(|s| (s.support_size() as f64).ln()),
        }
    }

    /// `1 − Σ p²`.
    pub fn quadratic() -> Self {
        Self {
            name: "quadratic".into(),
            parameters: vec![],
            functional: Arc::new(|s| {
                1.0 - s.support().iter().map(|&i| s.probs()[i] * s.probs()[i]).sum::<f64>()
            }),
        }
    }

    /// A user-supplied functional.
    pub fn custom(
        name: impl Into<String>,
        parameters: Vec<(String, f64)>,
        functional: impl Fn(&StateDistribution) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self { name: name.into(), parameters, functional: Arc::new(functional) }
    }
}

/// The bundled candidates: Shannon plus four foils.
pub fn builtin_candidates() -> Vec<EntropyCandidate> {
    vec![
        EntropyCandidate::shannon(),
        EntropyCandidate::tsallis(2.0).expect("q = 2 is valid"),
        EntropyCandidate::renyi(2.0).expect("alpha = 2 is valid"),
        EntropyCandidate::hartley(),
        EntropyCandidate::quadratic(),
    ]
}

/// Look up a candidate by name, with optional parameter overrides.
pub fn candidate_by_name(
    name: &str,
    q: Option<f64>,
    alpha: Option<f64>,
) -> Result<EntropyCandidate> {
    match name {
        "shannon" => Ok(EntropyCandidate::shannon()),
        "tsallis" => EntropyCandidate::tsallis(q.unwrap_or(2.0)),
        "renyi" => EntropyCandidate::renyi(alpha.unwrap_or(2.0)),
        "hartley" => Ok(EntropyCandidate::hartley()),
        "quadratic" => Ok(EntropyCandidate::quadratic()),
        other => Err(Error::Domain(format!("unknown entropy candidate '{other}'"))),
    }
}

/// Per-criterion outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not-applicable",
        }
    }
}

/// A concrete, standalone-replayable witness of a criterion failure.
#[derive(Debug, Clone, PartialEq)]
pub enum Counterexample {
    /// The functional returned a non-finite value.
    NonFinite { state: Vec<f64>, value: f64 },
    /// A probability permutation changed the value.
    PermutationChange { state: Vec<f64>, permutation: Vec<usize>, before: f64, after: f64 },
    /// Doubly-stochastic mixing (average of the stored permutations)
    /// decreased the value.
    MixingDecrease { state: Vec<f64>, permutations: Vec<Vec<usize>>, before: f64, after: f64 },
    /// The value decreased between two consecutive trajectory samples.
    TrajectoryDecrease { state_before: Vec<f64>, state_after: Vec<f64>, before: f64, after: f64 },
    /// S(p ⊗ q) differs from S(p) + S(q).
    Additivity { p: Vec<f64>, q: Vec<f64>, joint: f64, sum: f64 },
    /// A negative value, or a nonzero value on a pure state.
    NegativeOrPureNonzero { state: Vec<f64>, value: f64 },
    /// Two distinct states of equal energy attaining the same maximal value.
    NonUniqueMaximizer {
        levels: Vec<f64>,
        energy: f64,
        state_a: Vec<f64>,
        state_b: Vec<f64>,
        value_a: f64,
        value_b: f64,
    },
    /// Three maximized values with a convex middle point.
    ConvexityBump { levels: Vec<f64>, energies: [f64; 3], values: [f64; 3] },
    /// Mismatched boundary slopes at the joint composite maximum.
    PotentialMismatch { split_energy: f64, slope_a: f64, slope_b: f64 },
    /// Failure of S = ln Z + βE on a canonical state.
    IdentityViolation { levels: Vec<f64>, beta: f64, functional: f64, identity: f64 },
}

impl Counterexample {
    /// Re-run the recorded failure from its stored inputs. Returns true when
    /// the failure still reproduces.
    pub fn replay(&self, candidate: &EntropyCandidate) -> bool {
        let eval = |raw: &[f64]| -> f64 {
            let state = StateDistribution::new(raw.to_vec(), ValidationMode::Lenient)
                .expect("recorded state is valid");
            candidate.evaluate(&state)
        };
        match self {
            Counterexample::NonFinite { state, .. } => !eval(state).is_finite(),
            Counterexample::PermutationChange { state, permutation, .. } => {
                let before = eval(state);
                let permuted: Vec<f64> = permutation.iter().map(|&j| state[j]).collect();
                let after = eval(&permuted);
                (after - before).abs() > PERMUTATION_TOL * (1.0 + before.abs())
            }
            Counterexample::MixingDecrease { state, permutations, .. } => {
                let before = eval(state);
                let mixed = apply_mixing(state, permutations);
                let after = eval(&mixed);
                after < before - MIXING_TOL
            }
            Counterexample::TrajectoryDecrease { state_before, state_after, .. } => {
                eval(state_after) < eval(state_before) - TRAJECTORY_TOL
            }
            Counterexample::Additivity { p, q, .. } => {
                let sp = StateDistribution::new(p.clone(), ValidationMode::Lenient).unwrap();
                let sq = StateDistribution::new(q.clone(), ValidationMode::Lenient).unwrap();
                let joint = candidate.evaluate(&sp.product(&sq));
                let sum = candidate.evaluate(&sp) + candidate.evaluate(&sq);
                (joint - sum).abs() > ADDITIVITY_TOL * (1.0 + sum.abs())
            }
            Counterexample::NegativeOrPureNonzero { state, .. } => {
                let v = eval(state);
                let support = state.iter().filter(|&&p| p > 0.0).count();
                if support == 1 {
                    v.abs() > EXACT_TOL
                } else {
                    v < -EXACT_TOL
                }
            }
            Counterexample::NonUniqueMaximizer { levels, energy, state_a, state_b, .. } => {
                let ea: f64 = state_a.iter().zip(levels).map(|(p, e)| p * e).sum();
                let eb: f64 = state_b.iter().zip(levels).map(|(p, e)| p * e).sum();
                let va = eval(state_a);
                let vb = eval(state_b);
                let gap = state_a
                    .iter()
                    .zip(state_b)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                (ea - energy).abs() < 1e-6
                    && (eb - energy).abs() < 1e-6
                    && gap > UNIQUENESS_TOL
                    && (va - vb).abs() <= 1e-6 * (1.0 + va.abs())
            }
            Counterexample::ConvexityBump { levels, energies, .. } => {
                let values = [
                    maximized_value(candidate, levels, energies[0]),
                    maximized_value(candidate, levels, energies[1]),
                    maximized_value(candidate, levels, energies[2]),
                ];
                let scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                values[0] - 2.0 * values[1] + values[2] > CONCAVITY_TOL * scale
            }
            Counterexample::PotentialMismatch { slope_a, slope_b, .. } => {
                (slope_a - slope_b).abs() > POTENTIAL_TOL
            }
            Counterexample::IdentityViolation { levels, beta, .. } => {
                let spectrum = EnergySpectrum::new(levels.clone()).expect("recorded spectrum");
                let full: Vec<usize> = (0..spectrum.len()).collect();
                let state =
                    crate::equilibrium::canonical_distribution(*beta, &spectrum, &full).unwrap();
                let functional = candidate.evaluate(&state);
                let z = crate::equilibrium::partition_function(*beta, &spectrum, &full).unwrap();
                let e = canonical_energy(*beta, &spectrum, &full).unwrap();
                let identity = z.ln_unshifted(*beta) + beta * e;
                (functional - identity).abs() > IDENTITY_TOL * (1.0 + identity.abs())
            }
        }
    }
}

/// Result of one operationalized criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionResult {
    pub index: u8,
    pub name: &'static str,
    pub verdict: Verdict,
    pub detail: String,
    pub counterexample: Option<Counterexample>,
}

/// Full report for one candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct CriteriaReport {
    pub candidate: String,
    pub parameters: Vec<(String, f64)>,
    pub spectrum: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub results: Vec<CriterionResult>,
}

impl CriteriaReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.verdict != Verdict::Fail)
    }

    pub fn result(&self, index: u8) -> &CriterionResult {
        &self.results[index as usize - 1]
    }

    /// Fixed-width human-readable table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("candidate: {}", self.candidate));
        for (name, value) in &self.parameters {
            out.push_str(&format!(" ({name} = {value})"));
        }
        out.push('\n');
        out.push_str(&format!("seed: {}  trials: {}\n", self.seed, self.trials));
        out.push_str("criterion                      verdict         detail\n");
        for r in &self.results {
            out.push_str(&format!(
                "({}) {:<26} {:<15} {}\n",
                r.index,
                r.name,
                r.verdict.as_str(),
                r.detail
            ));
        }
        out
    }
}

const EXACT_TOL: f64 = 1e-12;
const PERMUTATION_TOL: f64 = 1e-12;
const MIXING_TOL: f64 = 1e-12;
const TRAJECTORY_TOL: f64 = 1e-10;
const ADDITIVITY_TOL: f64 = 1e-10;
const UNIQUENESS_TOL: f64 = 1e-6;
const CONCAVITY_TOL: f64 = 1e-6;
const POTENTIAL_TOL: f64 = 1e-3;
const IDENTITY_TOL: f64 = 1e-10;
/// L∞ threshold deciding whether a candidate's constrained maximizer is the
/// canonical state (criterion 8 applicability).
const CANONICAL_MATCH_TOL: f64 = 1e-4;

fn random_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| -rng.gen::<f64>().ln()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

fn random_permutation(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// Apply the doubly-stochastic matrix `(1/m) Σ P_σ` to a vector by averaging
/// the permuted copies. Averaging permutation matrices guarantees exact
/// bistochasticity.
fn apply_mixing(p: &[f64], permutations: &[Vec<usize>]) -> Vec<f64> {
    let m = permutations.len() as f64;
    let mut mixed = vec![0.0; p.len()];
    for perm in permutations {
        for (i, &j) in perm.iter().enumerate() {
            mixed[i] += p[j] / m;
        }
    }
    mixed
}

fn eval_raw(candidate: &EntropyCandidate, raw: &[f64]) -> f64 {
    match StateDistribution::new(raw.to_vec(), ValidationMode::Lenient) {
        Ok(state) => candidate.evaluate(&state),
        Err(_) => f64::NAN,
    }
}

/// Maximized value at fixed energy from the deterministic canonical start
/// (used where a smooth, reproducible M(E) is needed).
fn maximized_value(candidate: &EntropyCandidate, levels: &[f64], energy: f64) -> f64 {
    let spectrum = EnergySpectrum::new(levels.to_vec()).expect("valid levels");
    let full: Vec<usize> = (0..levels.len()).collect();
    let start = beta_from_energy(energy, &spectrum, &full)
        .expect("interior energy")
        .distribution()
        .probs()
        .to_vec();
    let start = interior_start(&start, levels, energy);
    let f = |p: &[f64]| eval_raw(candidate, p);
    maximize_on_energy_shell(&f, levels, &start, 2000).value
}

/// Mix a shell state with enough uniform weight to make it full-support,
/// then tilt back onto the shell.
fn interior_start(p: &[f64], levels: &[f64], energy: f64) -> Vec<f64> {
    let n = p.len() as f64;
    let mixed: Vec<f64> = p.iter().map(|&x| 0.999 * x + 0.001 / n).collect();
    tilt_to_energy(&mixed, levels, energy)
}

/// Run the eight operationalized criteria against one candidate.
///
/// The spectrum steers the energy-structured checks (5)–(8) and the SEA
/// trajectory sub-check; at least three levels spanning two distinct
/// energies are required so the fixed-energy shell has interior dimension.
/// `trials ≥ 100` controls the sampling density of the distribution-level
/// checks. The same seed always yields the identical report.
pub fn run_criteria(
    candidate: &EntropyCandidate,
    spectrum: &EnergySpectrum,
    trials: usize,
    seed: u64,
) -> Result<CriteriaReport> {
    if trials < 100 {
        return Err(Error::Domain(format!("trials = {trials}, need at least 100")));
    }
    if spectrum.len() < 3 || spectrum.is_degenerate() {
        return Err(Error::Domain(
            "criteria harness needs at least 3 levels with 2 distinct energies".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let results = vec![
        check_well_defined(candidate, trials, &mut rng),
        check_adiabatic(candidate, spectrum, trials, &mut rng),
        check_additivity(candidate, trials, &mut rng),
        check_nonnegative(candidate, trials, &mut rng),
        check_unique_maximizer(candidate, spectrum, &mut rng),
        check_concavity(candidate, spectrum),
        check_equal_potentials(candidate, spectrum),
        check_canonical_identity(candidate, spectrum, &mut rng),
    ];
    Ok(CriteriaReport {
        candidate: candidate.name().to_string(),
        parameters: candidate.parameters().to_vec(),
        spectrum: spectrum.levels().to_vec(),
        trials,
        seed,
        results,
    })
}

fn check_well_defined(
    candidate: &EntropyCandidate,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> CriterionResult {
    let sizes = [1usize, 2, 3, 8, 64];
    let mut tested = 0usize;
    for &n in &sizes {
        let mut probes: Vec<Vec<f64>> = vec![vec![1.0 / n as f64; n]];
        let mut pure = vec![0.0; n];
        pure[0] = 1.0;
        probes.push(pure);
        if n > 1 {
            // boundary state: zeros on half the entries
            let mut half = vec![0.0; n];
            let m = n.div_ceil(2);
            for p in half.iter_mut().take(m) {
                *p = 1.0 / m as f64;
            }
            probes.push(half);
        }
        for _ in 0..trials / 20 {
            probes.push(random_simplex(rng, n));
        }
        for probe in probes {
            tested += 1;
            let v = eval_raw(candidate, &probe);
            if !v.is_finite() {
                return CriterionResult {
                    index: 1,
                    name: "well-defined",
                    verdict: Verdict::Fail,
                    detail: format!("non-finite value {v} on an N = {n} state"),
                    counterexample: Some(Counterexample::NonFinite { state: probe, value: v }),
                };
            }
        }
    }
    CriterionResult {
        index: 1,
        name: "well-defined",
        verdict: Verdict::Pass,
        detail: format!("finite on {tested} states across N in {{1,2,3,8,64}}"),
        counterexample: None,
    }
}

fn check_adiabatic(
    candidate: &EntropyCandidate,
    spectrum: &EnergySpectrum,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> CriterionResult {
    // (a) reversible: permutations leave the value unchanged
    for _ in 0..trials {
        let n = rng.gen_range(2..=6);
        let state = random_simplex(rng, n);
        let perm = random_permutation(rng, n);
        let before = eval_raw(candidate, &state);
        let permuted: Vec<f64> = perm.iter().map(|&j| state[j]).collect();
        let after = eval_raw(candidate, &permuted);
        if (after - before).abs() > PERMUTATION_TOL * (1.0 + before.abs()) {
            return CriterionResult {
                index: 2,
                name: "adiabatic-monotone",
                verdict: Verdict::Fail,
                detail: format!("permutation changed the value: {before} -> {after}"),
                counterexample: Some(Counterexample::PermutationChange {
                    state,
                    permutation: perm,
                    before,
                    after,
                }),
            };
        }
    }
    // (b) irreversible: doubly-stochastic mixing never lowers the value
    for _ in 0..trials {
        let n = rng.gen_range(2..=6);
        let state = random_simplex(rng, n);
        let m = rng.gen_range(2..=5);
        let permutations: Vec<Vec<usize>> = (0..m).map(|_| random_permutation(rng, n)).collect();
        let mixed = apply_mixing(&state, &permutations);
        let before = eval_raw(candidate, &state);
        let after = eval_raw(candidate, &mixed);
        if after < before - MIXING_TOL {
            return CriterionResult {
                index: 2,
                name: "adiabatic-monotone",
                verdict: Verdict::Fail,
                detail: format!("mixing lowered the value: {before} -> {after}"),
                counterexample: Some(Counterexample::MixingDecrease {
                    state,
                    permutations,
                    before,
                    after,
                }),
            };
        }
    }
    // (c) for the Shannon functional the irreversible family also includes
    // the steepest-entropy-ascent flow itself
    let mut sea_note = "";
    if candidate.name() == "shannon" {
        sea_note = "; non-decreasing along a steepest-entropy-ascent trajectory";
        let constants = ModelConstants::default();
        let initial = StateDistribution::new(
            random_simplex(rng, spectrum.len()),
            ValidationMode::Lenient,
        )
        .expect("simplex draw is valid");
        let config = IntegratorConfig::rk4(constants.tau() / 100.0, 10.0 * constants.tau(), 10)
            .expect("valid config");
        let trajectory = integrate(&initial, spectrum, &constants, &config)
            .expect("relaxation run cannot abort");
        for w in trajectory.points().windows(2) {
            let before = candidate.evaluate(&w[0].state);
            let after = candidate.evaluate(&w[1].state);
            if after < before - TRAJECTORY_TOL {
                return CriterionResult {
                    index: 2,
                    name: "adiabatic-monotone",
                    verdict: Verdict::Fail,
                    detail: format!("value fell along the flow: {before} -> {after}"),
                    counterexample: Some(Counterexample::TrajectoryDecrease {
                        state_before: w[0].state.probs().to_vec(),
                        state_after: w[1].state.probs().to_vec(),
                        before,
                        after,
                    }),
                };
            }
        }
    }
    CriterionResult {
        index: 2,
        name: "adiabatic-monotone",
        verdict: Verdict::Pass,
        detail: format!(
            "invariant under {trials} permutations, non-decreasing under {trials} bistochastic mixings{sea_note}"
        ),
        counterexample: None,
    }
}

fn check_additivity(
    candidate: &EntropyCandidate,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> CriterionResult {
    let mut pairs: Vec<(Vec<f64>, Vec<f64>)> = vec![(vec![0.5, 0.5], vec![0.5, 0.5])];
    for _ in 0..trials {
        let np = rng.gen_range(2..=4);
        let nq = rng.gen_range(2..=4);
        pairs.push((random_simplex(rng, np), random_simplex(rng, nq)));
    }
    for (p, q) in pairs {
        let sp = StateDistribution::new(p.clone(), ValidationMode::Lenient).unwrap();
        let sq = StateDistribution::new(q.clone(), ValidationMode::Lenient).unwrap();
        let joint = candidate.evaluate(&sp.product(&sq));
        let sum = candidate.evaluate(&sp) + candidate.evaluate(&sq);
        if (joint - sum).abs() > ADDITIVITY_TOL * (1.0 + sum.abs()) {
            return CriterionResult {
                index: 3,
                name: "additive",
                verdict: Verdict::Fail,
                detail: format!("S(p⊗q) = {joint} but S(p) + S(q) = {sum}"),
                counterexample: Some(Counterexample::Additivity { p, q, joint, sum }),
            };
        }
    }
    CriterionResult {
        index: 3,
        name: "additive",
        verdict: Verdict::Pass,
        detail: format!("additive on {} product pairs", trials + 1),
        counterexample: None,
    }
}

fn check_nonnegative(
    candidate: &EntropyCandidate,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> CriterionResult {
    for &n in &[1usize, 2, 3, 8, 64] {
        for index in [0, n - 1] {
            let mut pure = vec![0.0; n];
            pure[index] = 1.0;
            let v = eval_raw(candidate, &pure);
            if v.abs() > EXACT_TOL {
                return CriterionResult {
                    index: 4,
                    name: "non-negative-pure-zero",
                    verdict: Verdict::Fail,
                    detail: format!("pure state of N = {n} has value {v}"),
                    counterexample: Some(Counterexample::NegativeOrPureNonzero {
                        state: pure,
                        value: v,
                    }),
                };
            }
        }
    }
    for _ in 0..trials {
        let n = rng.gen_range(2..=8);
        let state = random_simplex(rng, n);
        let v = eval_raw(candidate, &state);
        if v < -EXACT_TOL {
            return CriterionResult {
                index: 4,
                name: "non-negative-pure-zero",
                verdict: Verdict::Fail,
                detail: format!("negative value {v}"),
                counterexample: Some(Counterexample::NegativeOrPureNonzero { state, value: v }),
            };
        }
    }
    CriterionResult {
        index: 4,
        name: "non-negative-pure-zero",
        verdict: Verdict::Pass,
        detail: "zero on pure states, non-negative elsewhere".into(),
        counterexample: None,
    }
}

fn check_unique_maximizer(
    candidate: &EntropyCandidate,
    spectrum: &EnergySpectrum,
    rng: &mut ChaCha8Rng,
) -> CriterionResult {
    let levels = spectrum.levels();
    let energy = 0.5 * (spectrum.min_level() + spectrum.mean_level());
    let f = |p: &[f64]| eval_raw(candidate, p);
    let mut endpoints: Vec<(Vec<f64>, f64)> = Vec::new();
    for _ in 0..20 {
        let raw = random_simplex(rng, spectrum.len());
        let start = tilt_to_energy(&raw, levels, energy);
        let result = maximize_on_energy_shell(&f, levels, &start, 5000);
        endpoints.push((result.state, result.value));
    }
    // the criterion fails when two runs settle on distinct states of equal
    // value (a flat maximum), not when one merely converged worse
    for i in 0..endpoints.len() {
        for j in i + 1..endpoints.len() {
            let (sa, va) = &endpoints[i];
            let (sb, vb) = &endpoints[j];
            let gap = sa.iter().zip(sb).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if gap > UNIQUENESS_TOL && (va - vb).abs() <= 1e-6 * (1.0 + va.abs()) {
                return CriterionResult {
                    index: 5,
                    name: "unique-maximizer",
                    verdict: Verdict::Fail,
                    detail: format!(
                        "two maximizers {gap:.3e} apart share the value {va} at E = {energy}"
                    ),
                    counterexample: Some(Counterexample::NonUniqueMaximizer {
                        levels: levels.to_vec(),
                        energy,
                        state_a: sa.clone(),
                        state_b: sb.clone(),
                        value_a: *va,
                        value_b: *vb,
                    }),
                };
            }
        }
    }
    CriterionResult {
        index: 5,
        name: "unique-maximizer",
        verdict: Verdict::Pass,
        detail: format!("20 ascent runs at E = {energy} agree within {UNIQUENESS_TOL:.0e}"),
        counterexample: None,
    }
}

fn check_concavity(candidate: &EntropyCandidate, spectrum: &EnergySpectrum) -> CriterionResult {
    let levels = spectrum.levels();
    let lo = spectrum.min_level() + 0.15 * spectrum.range();
    let hi = spectrum.min_level() + 0.85 * spectrum.range();
    let n_grid = 9;
    let energies: Vec<f64> =
        (0..n_grid).map(|i| lo + (hi - lo) * i as f64 / (n_grid - 1) as f64).collect();
    let values: Vec<f64> =
        energies.iter().map(|&e| maximized_value(candidate, levels, e)).collect();
    let scale = 1.0 + values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for i in 1..n_grid - 1 {
        let bump = values[i - 1] - 2.0 * values[i] + values[i + 1];
        if bump > CONCAVITY_TOL * scale {
            return CriterionResult {
                index: 6,
                name: "concave-boundary",
                verdict: Verdict::Fail,
                detail: format!("convex second difference {bump:.3e} at E = {}", energies[i]),
                counterexample: Some(Counterexample::ConvexityBump {
                    levels: levels.to_vec(),
                    energies: [energies[i - 1], energies[i], energies[i + 1]],
                    values: [values[i - 1], values[i], values[i + 1]],
                }),
            };
        }
    }
    CriterionResult {
        index: 6,
        name: "concave-boundary",
        verdict: Verdict::Pass,
        detail: format!("maximized value concave over {n_grid} energies"),
        counterexample: None,
    }
}

fn check_equal_potentials(
    candidate: &EntropyCandidate,
    spectrum: &EnergySpectrum,
) -> CriterionResult {
    // composite of the given system with a scaled copy of itself
    let levels_a = spectrum.levels().to_vec();
    let levels_b: Vec<f64> = spectrum.levels().iter().map(|e| 0.7 * e + 0.05).collect();
    let e_a_mid = 0.5 * (spectrum.min_level() + spectrum.mean_level());
    let b_min = levels_b.iter().copied().fold(f64::INFINITY, f64::min);
    let b_mean = levels_b.iter().sum::<f64>() / levels_b.len() as f64;
    let e_total = e_a_mid + 0.5 * (b_min + b_mean);

    let m_a = |e: f64| maximized_value(candidate, &levels_a, e);
    let m_b = |e: f64| maximized_value(candidate, &levels_b, e);
    let b_max = levels_b.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = (spectrum.min_level()).max(e_total - b_max);
    let hi = (spectrum.max_level()).min(e_total - b_min);
    let pad = 1e-3 * (hi - lo);
    let objective = |e_a: f64| m_a(e_a) + m_b(e_total - e_a);
    let split = golden_section_max(&objective, lo + pad, hi - pad, 60);

    // compare the boundary slopes (the inverse temperatures) at the optimum;
    // a flat objective lets the search drift to a bracket edge, so keep the
    // difference stencil strictly inside the feasible interval
    let h = 5e-3 * (hi - lo);
    let split = split.clamp(lo + 2.0 * h, hi - 2.0 * h);
    let slope_a = (m_a(split + h) - m_a(split - h)) / (2.0 * h);
    let slope_b = (m_b(e_total - split + h) - m_b(e_total - split - h)) / (2.0 * h);
    if (slope_a - slope_b).abs() > POTENTIAL_TOL {
        return CriterionResult {
            index: 7,
            name: "equal-potentials",
            verdict: Verdict::Fail,
            detail: format!("boundary slopes differ at the optimum: {slope_a} vs {slope_b}"),
            counterexample: Some(Counterexample::PotentialMismatch {
                split_energy: split,
                slope_a,
                slope_b,
            }),
        };
    }
    CriterionResult {
        index: 7,
        name: "equal-potentials",
        verdict: Verdict::Pass,
        detail: format!(
            "joint maximum at E_A = {split:.6}; slope gap {:.2e}",
            (slope_a - slope_b).abs()
        ),
        counterexample: None,
    }
}

fn check_canonical_identity(
    candidate: &EntropyCandidate,
    spectrum: &EnergySpectrum,
    rng: &mut ChaCha8Rng,
) -> CriterionResult {
    // applicability: the candidate's constrained maximizer must be the
    // canonical state, from the canonical start and from random starts alike
    let levels = spectrum.levels();
    let full: Vec<usize> = (0..spectrum.len()).collect();
    let energy = 0.5 * (spectrum.min_level() + spectrum.mean_level());
    let canonical = beta_from_energy(energy, spectrum, &full)
        .expect("interior energy")
        .distribution()
        .probs()
        .to_vec();
    let f = |p: &[f64]| eval_raw(candidate, p);
    let mut starts = vec![interior_start(&canonical, levels, energy)];
    for _ in 0..2 {
        starts.push(tilt_to_energy(&random_simplex(rng, spectrum.len()), levels, energy));
    }
    for start in starts {
        let endpoint = maximize_on_energy_shell(&f, levels, &start, 2000).state;
        let gap = endpoint
            .iter()
            .zip(&canonical)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap > CANONICAL_MATCH_TOL {
            return CriterionResult {
                index: 8,
                name: "canonical-identity",
                verdict: Verdict::NotApplicable,
                detail: format!(
                    "constrained maximizer is non-canonical (L∞ gap {gap:.2e}); surrogate skipped"
                ),
                counterexample: None,
            };
        }
    }
    // surrogate for the equilibrium relations: S = ln Z + βE on canonical states
    let scale = 1.0 / spectrum.range();
    for factor in [-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
        let beta = factor * scale;
        let state = crate::equilibrium::canonical_distribution(beta, spectrum, &full)
            .expect("canonical state");
        let functional = candidate.evaluate(&state);
        let identity = canonical_entropy(beta, spectrum, &full).expect("canonical entropy");
        if (functional - identity).abs() > IDENTITY_TOL * (1.0 + identity.abs()) {
            return CriterionResult {
                index: 8,
                name: "canonical-identity",
                verdict: Verdict::Fail,
                detail: format!("S = {functional} but ln Z + βE = {identity} at β = {beta}"),
                counterexample: Some(Counterexample::IdentityViolation {
                    levels: levels.to_vec(),
                    beta,
                    functional,
                    identity,
                }),
            };
        }
    }
    CriterionResult {
        index: 8,
        name: "canonical-identity",
        verdict: Verdict::Pass,
        detail: "S = ln Z + βE holds on the canonical family".into(),
        counterexample: None,
    }
}

fn golden_section_max(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, iters: usize) -> f64 {
    let inv_phi = 0.618_033_988_749_894_9;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..iters {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

/// Record of the two-subsystem joint entropy maximization.
#[derive(Debug, Clone, PartialEq)]
pub struct CompositeTemperatureRecord {
    pub e_a: f64,
    pub e_b: f64,
    pub beta_a: f64,
    pub beta_b: f64,
    /// |1/T_A − 1/T_B| in k = 1 units (equal to |β_A − β_B|).
    pub inverse_temperature_gap: f64,
    pub entropy_total: f64,
    /// Whether the gap meets the 1e-6 equality tolerance.
    pub matched: bool,
}

/// Maximize `S_A(E_A) + S_B(E_total − E_A)` over the energy split and
/// compare the inverse temperatures of the two subsystems at the optimum.
///
/// A golden-section search on the summed boundary entropies locates the
/// maximum; because that maximum is flat to second order, the split is then
/// polished on the first-order condition `β_A(E_A) = β_B(E_total − E_A)`,
/// whose left side falls and right side rises in `E_A`. Inverse
/// temperatures are compared (rather than temperatures) so the β = 0 apex
/// is an ordinary point.
pub fn composite_temperature_check(
    spectrum_a: &EnergySpectrum,
    spectrum_b: &EnergySpectrum,
    e_total: f64,
) -> Result<CompositeTemperatureRecord> {
    if spectrum_a.is_degenerate() || spectrum_b.is_degenerate() {
        return Err(Error::DegenerateSpectrum);
    }
    let full_a: Vec<usize> = (0..spectrum_a.len()).collect();
    let full_b: Vec<usize> = (0..spectrum_b.len()).collect();
    let lo = spectrum_a.min_level().max(e_total - spectrum_b.max_level());
    let hi = spectrum_a.max_level().min(e_total - spectrum_b.min_level());
    if lo >= hi {
        return Err(Error::Domain(format!(
            "total energy {e_total} leaves no feasible split (E_A in [{lo}, {hi}])"
        )));
    }
    let pad = 1e-9 * (hi - lo);
    let (a, b) = (lo + pad, hi - pad);

    let entropy_sum = |e_a: f64| -> f64 {
        let s_a =
            canonical_entropy(beta_of(spectrum_a, &full_a, e_a), spectrum_a, &full_a)
                .expect("interior split");
        let s_b = canonical_entropy(
            beta_of(spectrum_b, &full_b, e_total - e_a),
            spectrum_b,
            &full_b,
        )
        .expect("interior split");
        s_a + s_b
    };
    let coarse = golden_section_max(&entropy_sum, a, b, 80);

    // first-order polish: β_A(E_A) − β_B(E_total − E_A) is strictly
    // decreasing with a sign change across the optimum
    let gap =
        |e_a: f64| beta_of(spectrum_a, &full_a, e_a) - beta_of(spectrum_b, &full_b, e_total - e_a);
    let (mut root_lo, mut root_hi) = (a, b);
    if gap(root_lo) < 0.0 || gap(root_hi) > 0.0 {
        // no interior sign change: fall back to the golden result
        return Ok(record_at(spectrum_a, spectrum_b, e_total, coarse));
    }
    for _ in 0..200 {
        let mid = 0.5 * (root_lo + root_hi);
        if gap(mid) > 0.0 {
            root_lo = mid;
        } else {
            root_hi = mid;
        }
        if (root_hi - root_lo).abs() <= f64::EPSILON * root_hi.abs().max(1.0) {
            break;
        }
    }
    let split = 0.5 * (root_lo + root_hi);
    Ok(record_at(spectrum_a, spectrum_b, e_total, split))
}

fn beta_of(spectrum: &EnergySpectrum, support: &[usize], e: f64) -> f64 {
    match beta_from_energy(e, spectrum, support).map(|s| s.beta()) {
        Ok(Beta::Finite(b)) => b,
        // endpoint splits only arise from the padded bracket boundaries
        Ok(Beta::PlusInfinity) => f64::MAX,
        Ok(Beta::MinusInfinity) => f64::MIN,
        Err(_) => f64::NAN,
    }
}

fn record_at(
    spectrum_a: &EnergySpectrum,
    spectrum_b: &EnergySpectrum,
    e_total: f64,
    e_a: f64,
) -> CompositeTemperatureRecord {
    let full_a: Vec<usize> = (0..spectrum_a.len()).collect();
    let full_b: Vec<usize> = (0..spectrum_b.len()).collect();
    let beta_a = beta_of(spectrum_a, &full_a, e_a);
    let beta_b = beta_of(spectrum_b, &full_b, e_total - e_a);
    let entropy_total = canonical_entropy(beta_a, spectrum_a, &full_a).unwrap_or(f64::NAN)
        + canonical_entropy(beta_b, spectrum_b, &full_b).unwrap_or(f64::NAN);
    let gap = (beta_a - beta_b).abs();
    CompositeTemperatureRecord {
        e_a,
        e_b: e_total - e_a,
        beta_a,
        beta_b,
        inverse_temperature_gap: gap,
        entropy_total,
        matched: gap <= 1e-6,
    }
}
