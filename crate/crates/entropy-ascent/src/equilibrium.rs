//! Canonical and partially canonical equilibrium states.
//!
//! Over a support set `J` the equilibrium distribution is canonical,
//!
//! ```text
//! p_j = exp(-β e_j) / Σ_{i∈J} exp(-β e_i),      j ∈ J,
//! ```
//!
//! and `β` is fixed by the energy: `Σ e_j p_j(β) = E`. When `J` is the full
//! spectrum this is the unique stable equilibrium state at energy `E`; on a
//! proper subset it is a partial equilibrium: stationary under the
//! equation of motion but not the entropy maximizer over the whole
//! spectrum.
//!
//! `E ↦ β` is a strictly decreasing bijection from the open interval
//! `(min e, max e)` onto the whole real line: energies above the in-support
//! mean map to negative `β` (negative temperature), and the interval
//! endpoints map to the flagged values `β = ±∞`, the two zero-temperature
//! stable states of a bounded spectrum.

use crate::spectrum::EnergySpectrum;
use crate::state::{stable_sum, ModelConstants, StateDistribution, ValidationMode};
use crate::{Error, Result};

/// Inverse temperature, with explicit flags for the spectrum endpoints so
/// no arithmetic path ever multiplies by a floating-point infinity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    /// The zero-temperature limit at the bottom of the spectrum (E = min e).
    PlusInfinity,
    /// The zero-temperature limit at the top of the spectrum (E = max e).
    MinusInfinity,
}

impl Beta {
    pub fn is_finite(&self) -> bool {
        matches!(self, Beta::Finite(_))
    }

    /// The finite value, if any.
    pub fn value(&self) -> Option<f64> {
        match self {
            Beta::Finite(b) => Some(*b),
            _ => None,
        }
    }
}

/// Temperature `T = 1/(kβ)`, with `β = 0` flagged as infinite rather than
/// produced by a division by zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Temperature {
    Finite(f64),
    Infinite,
}

impl Temperature {
    pub fn value(&self) -> Option<f64> {
        match self {
            Temperature::Finite(t) => Some(*t),
            Temperature::Infinite => None,
        }
    }

    fn from_beta(beta: Beta, k: f64) -> Self {
        match beta {
            Beta::Finite(0.0) => Temperature::Infinite,
            Beta::Finite(b) => Temperature::Finite(1.0 / (k * b)),
            // third law: the two endpoint states sit at zero temperature,
            // approached from above and from below
            Beta::PlusInfinity => Temperature::Finite(0.0),
            Beta::MinusInfinity => Temperature::Finite(-0.0),
        }
    }
}

/// A partition function evaluated with an overflow-safe energy shift:
/// `value = Σ exp(-β (e_i - shift))` with the shift chosen so every
/// exponent is non-positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PartitionFunction {
    value: f64,
    shift: f64,
}

impl PartitionFunction {
    /// The shifted sum Σ exp(−β(e_i − shift)); always finite.
    pub fn shifted_value(&self) -> f64 {
        self.value
    }

    /// The energy shift that was subtracted from every level.
    pub fn shift(&self) -> f64 {
        self.shift
    }

    /// ln of the unshifted partition function, `ln Z = ln Z_shifted − β·shift`.
    pub fn ln_unshifted(&self, beta: f64) -> f64 {
        self.value.ln() - beta * self.shift
    }

    /// The unshifted partition function; may overflow to infinity for
    /// extreme `β·shift`, which is exactly what the shifted form avoids.
    pub fn unshifted(&self, beta: f64) -> f64 {
        self.ln_unshifted(beta).exp()
    }
}

/// A solved equilibrium: `β`, `T`, `Z`, and the canonical distribution
/// over the requested support.
#[derive(Debug, Clone)]
pub struct EquilibriumSolution {
    beta: Beta,
    temperature: Temperature,
    partition: PartitionFunction,
    distribution: StateDistribution,
    support: Vec<usize>,
}

impl EquilibriumSolution {
    pub fn beta(&self) -> Beta {
        self.beta
    }

    /// Temperature in the `k = 1` convention of this module.
    pub fn temperature(&self) -> Temperature {
        self.temperature
    }

    pub fn partition_function(&self) -> PartitionFunction {
        self.partition
    }

    pub fn distribution(&self) -> &StateDistribution {
        &self.distribution
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }
}

/// Verdict of [`is_equilibrium`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EquilibriumVerdict {
    /// Canonical over the full spectrum: the unique stable equilibrium.
    Stable,
    /// Canonical over a proper subset of the spectrum.
    Partial,
    /// Not an equilibrium state.
    None,
}

fn check_support(spectrum: &EnergySpectrum, support: &[usize]) -> Result<()> {
    if support.is_empty() {
        return Err(Error::Domain("empty support".into()));
    }
    for &i in support {
        if i >= spectrum.len() {
            return Err(Error::Domain(format!(
                "support index {i} out of range for spectrum of length {}",
                spectrum.len()
            )));
        }
    }
    if support.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("support indices must be strictly increasing".into()));
    }
    Ok(())
}

/// Shifted partition function `Σ_{i∈support} exp(-β (e_i − shift))`.
///
/// The shift is the in-support level that maximizes `-β e` (the minimum
/// level for `β ≥ 0`, the maximum for `β < 0`), so every exponent is ≤ 0
/// and the sum stays in `[1, m]` no matter how large `|β|·range` grows.
pub fn partition_function(
    beta: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
) -> Result<PartitionFunction> {
    check_support(spectrum, support)?;
    if !beta.is_finite() {
        return Err(Error::Domain(format!("non-finite beta {beta}")));
    }
    let shift = if beta >= 0.0 {
        spectrum.min_over(support)
    } else {
        spectrum.max_over(support)
    };
    let value = stable_sum(
        support
            .iter()
            .map(|&i| (-beta * (spectrum.levels()[i] - shift)).exp()),
        support.len(),
    );
    Ok(PartitionFunction { value, shift })
}

/// The canonical distribution `p_j ∝ exp(-β e_j)` over a support set.
pub fn canonical_distribution(
    beta: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
) -> Result<StateDistribution> {
    let z = partition_function(beta, spectrum, support)?;
    let mut probs = vec![0.0; spectrum.len()];
    for &i in support {
        probs[i] = (-beta * (spectrum.levels()[i] - z.shift)).exp() / z.value;
    }
    // Weights below the support threshold are snapped off by validation;
    // the surviving support is the physically resolvable one.
    StateDistribution::new(probs, ValidationMode::Strict)
}

/// The canonical distribution over the full spectrum.
pub fn canonical_full(beta: f64, spectrum: &EnergySpectrum) -> Result<StateDistribution> {
    let support: Vec<usize> = (0..spectrum.len()).collect();
    canonical_distribution(beta, spectrum, &support)
}

/// Energy and energy-variance of the canonical state at `beta`.
fn canonical_energy_and_variance(
    beta: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
) -> (f64, f64) {
    let shift = if beta >= 0.0 {
        spectrum.min_over(support)
    } else {
        spectrum.max_over(support)
    };
    let weights: Vec<f64> = support
        .iter()
        .map(|&i| (-beta * (spectrum.levels()[i] - shift)).exp())
        .collect();
    let z = stable_sum(weights.iter().copied(), weights.len());
    let energy = stable_sum(
        support
            .iter()
            .zip(&weights)
            .map(|(&i, w)| spectrum.levels()[i] * w / z),
        weights.len(),
    );
    let variance = stable_sum(
        support.iter().zip(&weights).map(|(&i, w)| {
            let d = spectrum.levels()[i] - energy;
            d * d * w / z
        }),
        weights.len(),
    );
    (energy, variance)
}

/// Solve `Σ e_i p_i(β) = E` for `β` over a support set.
///
/// `E` must lie in the closed interval spanned by the in-support levels.
/// Interior energies have a unique finite root because `dE/dβ = -Var(e) < 0`;
/// the root is located by doubling an initial bracket of width `1/range`
/// until the residual changes sign, then polished by a Newton/bisection
/// hybrid. Energies exactly at an endpoint return the degenerate
/// distribution concentrated on the extremal levels with `β` flagged `±∞`.
pub fn beta_from_energy(
    energy_target: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
) -> Result<EquilibriumSolution> {
    check_support(spectrum, support)?;
    if !energy_target.is_finite() {
        return Err(Error::Domain(format!("non-finite energy {energy_target}")));
    }
    let lo = spectrum.min_over(support);
    let hi = spectrum.max_over(support);

    if lo == hi {
        // single energy value: every admissible state has E = lo and the
        // canonical family collapses to the uniform distribution
        if energy_target != lo {
            return Err(Error::Domain(format!(
                "energy {energy_target} outside degenerate level {lo}"
            )));
        }
        let distribution = StateDistribution::uniform_over(spectrum.len(), support)?;
        let partition = PartitionFunction { value: support.len() as f64, shift: lo };
        return Ok(EquilibriumSolution {
            beta: Beta::Finite(0.0),
            temperature: Temperature::Infinite,
            partition,
            distribution,
            support: support.to_vec(),
        });
    }

    if energy_target < lo || energy_target > hi {
        return Err(Error::Domain(format!(
            "energy {energy_target} outside spectrum range [{lo}, {hi}]"
        )));
    }
    if energy_target == lo || energy_target == hi {
        return Ok(endpoint_solution(energy_target, spectrum, support, energy_target == lo));
    }

    let mean = stable_sum(support.iter().map(|&i| spectrum.levels()[i]), support.len())
        / support.len() as f64;
    let beta = if energy_target == mean {
        0.0
    } else {
        solve_beta(energy_target, spectrum, support, hi - lo)?
    };

    let partition = partition_function(beta, spectrum, support)?;
    let distribution = canonical_distribution(beta, spectrum, support)?;
    Ok(EquilibriumSolution {
        beta: Beta::Finite(beta),
        temperature: Temperature::from_beta(Beta::Finite(beta), 1.0),
        partition,
        distribution,
        support: support.to_vec(),
    })
}

fn endpoint_solution(
    energy_target: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
    at_bottom: bool,
) -> EquilibriumSolution {
    let extremal: Vec<usize> = support
        .iter()
        .copied()
        .filter(|&i| spectrum.levels()[i] == energy_target)
        .collect();
    let distribution =
        StateDistribution::uniform_over(spectrum.len(), &extremal).expect("non-empty extremal set");
    let beta = if at_bottom { Beta::PlusInfinity } else { Beta::MinusInfinity };
    EquilibriumSolution {
        beta,
        temperature: Temperature::from_beta(beta, 1.0),
        // in the β → ±∞ limit the shifted partition function counts the
        // degeneracy of the extremal level
        partition: PartitionFunction { value: extremal.len() as f64, shift: energy_target },
        distribution,
        support: support.to_vec(),
    }
}

/// Energy offset `E(β) − ref` and variance, with the offset accumulated
/// directly as `Σ (e_i − ref) w_i / z`. Near a spectrum endpoint the offset
/// is tiny while `E` itself is O(1); forming it directly keeps full relative
/// precision where `E − ref` would cancel catastrophically.
fn canonical_energy_offset(
    beta: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
    reference: f64,
) -> (f64, f64) {
    let shift = if beta >= 0.0 {
        spectrum.min_over(support)
    } else {
        spectrum.max_over(support)
    };
    let weights: Vec<f64> = support
        .iter()
        .map(|&i| (-beta * (spectrum.levels()[i] - shift)).exp())
        .collect();
    let z = stable_sum(weights.iter().copied(), weights.len());
    let offset = stable_sum(
        support
            .iter()
            .zip(&weights)
            .map(|(&i, w)| (spectrum.levels()[i] - reference) * w / z),
        weights.len(),
    );
    let energy = reference + offset;
    let variance = stable_sum(
        support.iter().zip(&weights).map(|(&i, w)| {
            let d = spectrum.levels()[i] - energy;
            d * d * w / z
        }),
        weights.len(),
    );
    (offset, variance)
}

fn solve_beta(
    energy_target: f64,
    spectrum: &EnergySpectrum,
    support: &[usize],
    scale: f64,
) -> Result<f64> {
    // Root-find on the offset from the nearer extreme level. The target
    // offset is an exact f64 subtraction, and the canonical offset is formed
    // without cancellation, so the residual keeps relative precision all the
    // way into the exponential tails.
    let lo = spectrum.min_over(support);
    let hi = spectrum.max_over(support);
    let reference = if (energy_target - lo).abs() <= (hi - energy_target).abs() { lo } else { hi };
    let target_offset = energy_target - reference;
    let residual =
        |beta: f64| canonical_energy_offset(beta, spectrum, support, reference).0 - target_offset;

    // bracket: residual is strictly decreasing, positive for very negative β
    let mut lo_beta = -1.0 / scale;
    let mut hi_beta = 1.0 / scale;
    let mut f_lo = residual(lo_beta);
    let mut f_hi = residual(hi_beta);
    let mut guard = 0;
    while f_lo < 0.0 {
        hi_beta = lo_beta;
        f_hi = f_lo;
        lo_beta *= 2.0;
        f_lo = residual(lo_beta);
        guard += 1;
        if guard > 4200 {
            return Err(Error::Domain("beta bracket expansion failed".into()));
        }
    }
    while f_hi > 0.0 {
        lo_beta = hi_beta;
        f_lo = f_hi;
        hi_beta *= 2.0;
        f_hi = residual(hi_beta);
        guard += 1;
        if guard > 4200 {
            return Err(Error::Domain("beta bracket expansion failed".into()));
        }
    }
    let _ = (f_lo, f_hi);

    // Newton from the bracket midpoint, falling back to bisection whenever
    // the step would leave the bracket.
    let tol = 1e-13 * target_offset.abs().max(1e-300);
    let mut beta = 0.5 * (lo_beta + hi_beta);
    for _ in 0..200 {
        let (offset, var) = canonical_energy_offset(beta, spectrum, support, reference);
        let f = offset - target_offset;
        if f.abs() <= tol {
            return Ok(beta);
        }
        if f > 0.0 {
            lo_beta = beta;
        } else {
            hi_beta = beta;
        }
        let newton = beta + f / var;
        beta = if var > 0.0 && newton > lo_beta.min(hi_beta) && newton < lo_beta.max(hi_beta) {
            newton
        } else {
            0.5 * (lo_beta + hi_beta)
        };
        if (hi_beta - lo_beta).abs() <= f64::EPSILON * beta.abs() {
            return Ok(beta);
        }
    }
    Ok(beta)
}

/// Temperature of the stable equilibrium state at energy `E`, `T = 1/(kβ(E))`.
///
/// Equals the derivative `dE/dS` along the stable-equilibrium boundary.
/// Negative above the spectral mean; `β = 0` is signalled as
/// [`Temperature::Infinite`] rather than divided by.
pub fn temperature_of_stable_state(
    energy_target: f64,
    spectrum: &EnergySpectrum,
    constants: &ModelConstants,
) -> Result<Temperature> {
    let support: Vec<usize> = (0..spectrum.len()).collect();
    let solution = beta_from_energy(energy_target, spectrum, &support)?;
    Ok(Temperature::from_beta(solution.beta, constants.k()))
}

/// Classify a state as stable equilibrium, partial equilibrium, or neither.
///
/// A state is an equilibrium iff it is canonical over its own support at
/// the `β` fixed by its own energy; it is *stable* only when that support
/// is the whole spectrum.
pub fn is_equilibrium(
    state: &StateDistribution,
    spectrum: &EnergySpectrum,
    tol: f64,
) -> Result<EquilibriumVerdict> {
    if state.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), actual: state.len() });
    }
    let support = state.support();
    let energy = crate::state::energy(state, spectrum)?;
    let solution = beta_from_energy(energy, spectrum, support)?;
    let dist = state.linf_distance(solution.distribution());
    if dist > tol {
        return Ok(EquilibriumVerdict::None);
    }
    if support.len() == spectrum.len() {
        Ok(EquilibriumVerdict::Stable)
    } else {
        Ok(EquilibriumVerdict::Partial)
    }
}

/// Entropy of the canonical state at `beta` (k = 1), through the identity
/// `S = ln Z_shifted + β(E − shift)` in its overflow-safe form.
pub fn canonical_entropy(beta: f64, spectrum: &EnergySpectrum, support: &[usize]) -> Result<f64> {
    let z = partition_function(beta, spectrum, support)?;
    let (energy, _) = canonical_energy_and_variance(beta, spectrum, support);
    Ok(z.value.ln() + beta * (energy - z.shift))
}

/// Energy of the canonical state at `beta` (overflow-safe).
pub fn canonical_energy(beta: f64, spectrum: &EnergySpectrum, support: &[usize]) -> Result<f64> {
    check_support(spectrum, support)?;
    Ok(canonical_energy_and_variance(beta, spectrum, support).0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics;
    use crate::state::{energy, entropy};

    fn spec01() -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0]).unwrap()
    }

    fn spec012() -> EnergySpectrum {
        EnergySpectrum::new(vec![0.0, 1.0, 2.0]).unwrap()
    }

    fn full(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn partition_at_beta_zero_counts_support() {
        let z = partition_function(0.0, &spec012(), &[0, 2]).unwrap();
        assert_eq!(z.shifted_value(), 2.0);
        let z = partition_function(0.0, &spec012(), &full(3)).unwrap();
        assert_eq!(z.shifted_value(), 3.0);
    }

    #[test]
    fn partition_two_level_closed_form() {
        // levels (0,1), β = ln 3: Z = 1 + 1/3 = 4/3, shift = 0
        let z = partition_function(3.0_f64.ln(), &spec01(), &full(2)).unwrap();
        assert_eq!(z.shift(), 0.0);
        assert!((z.shifted_value() - 4.0 / 3.0).abs() < 1e-15);
        assert!((z.unshifted(3.0_f64.ln()) - 4.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn partition_large_beta_approaches_ground_degeneracy() {
        let spec = EnergySpectrum::new(vec![0.5, 0.5, 1.0, 2.0]).unwrap();
        let z = partition_function(5000.0, &spec, &full(4)).unwrap();
        assert!((z.shifted_value() - 2.0).abs() < 1e-300);
        assert_eq!(z.shift(), 0.5);
        // negative β shifts by the top level instead
        let z = partition_function(-5000.0, &spec, &full(4)).unwrap();
        assert!((z.shifted_value() - 1.0).abs() < 1e-300);
        assert_eq!(z.shift(), 2.0);
    }

    #[test]
    fn canonical_examples() {
        let uniform = canonical_distribution(0.0, &spec012(), &full(3)).unwrap();
        for &p in uniform.probs() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }

        let p = canonical_distribution(3.0_f64.ln(), &spec01(), &full(2)).unwrap();
        assert!((p.probs()[0] - 0.75).abs() < 1e-15);
        assert!((p.probs()[1] - 0.25).abs() < 1e-15);

        // negative β inverts the mass toward the upper level
        let q = canonical_distribution(-(3.0_f64.ln()), &spec01(), &full(2)).unwrap();
        assert!((q.probs()[0] - 0.25).abs() < 1e-15);
        assert!((q.probs()[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn canonical_respects_support() {
        let p = canonical_distribution(1.0, &spec012(), &[0, 2]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
        assert_eq!(p.support(), &[0, 2]);
    }

    #[test]
    fn beta_from_energy_midpoint_is_zero() {
        let sol = beta_from_energy(0.5, &spec01(), &full(2)).unwrap();
        assert_eq!(sol.beta(), Beta::Finite(0.0));
        assert_eq!(sol.temperature(), Temperature::Infinite);
    }

    #[test]
    fn beta_from_energy_closed_form() {
        // exp(−β)/(1+exp(−β)) = 1/4  ⇒  β = ln 3
        let sol = beta_from_energy(0.25, &spec01(), &full(2)).unwrap();
        let beta = sol.beta().value().unwrap();
        assert!((beta - 3.0_f64.ln()).abs() < 1e-10, "beta = {beta}");
    }

    #[test]
    fn beta_from_energy_reproduces_energy() {
        let spec = spec012();
        let sol = beta_from_energy(0.8, &spec, &full(3)).unwrap();
        let e = energy(sol.distribution(), &spec).unwrap();
        assert!((e - 0.8).abs() <= 1e-10 * 0.8);
    }

    #[test]
    fn beta_round_trip() {
        // 1e-8 relative-or-absolute: at |β| near 20 the canonical energy
        // sits within a few ulps of the extreme level, so the recovered β
        // is limited by the f64 quantization of E itself.
        let spec = spec01();
        let sup = full(2);
        let mut b = -20.0;
        while b <= 20.0 {
            let p = canonical_distribution(b, &spec, &sup).unwrap();
            let e = energy(&p, &spec).unwrap();
            let sol = beta_from_energy(e, &spec, &sup).unwrap();
            let back = sol.beta().value().unwrap();
            assert!(
                (back - b).abs() <= 1e-8 * b.abs().max(1.0),
                "beta {b} -> E {e} -> {back}"
            );
            b += 0.5;
        }
    }

    #[test]
    fn endpoint_energies_are_flagged() {
        let spec = EnergySpectrum::new(vec![0.0, 0.0, 1.0, 2.0]).unwrap();
        let sol = beta_from_energy(0.0, &spec, &full(4)).unwrap();
        assert_eq!(sol.beta(), Beta::PlusInfinity);
        assert_eq!(sol.temperature(), Temperature::Finite(0.0));
        // ground level is doubly degenerate: mass splits across it
        assert_eq!(sol.distribution().probs(), &[0.5, 0.5, 0.0, 0.0]);

        let sol = beta_from_energy(2.0, &spec, &full(4)).unwrap();
        assert_eq!(sol.beta(), Beta::MinusInfinity);
        assert_eq!(sol.distribution().probs(), &[0.0, 0.0, 0.0, 1.0]);
    }

    #[test]
    fn out_of_range_energy_is_domain_error() {
        assert!(beta_from_energy(1.5, &spec01(), &full(2)).is_err());
        assert!(beta_from_energy(-0.1, &spec01(), &full(2)).is_err());
    }

    #[test]
    fn energy_of_beta_is_strictly_decreasing() {
        let spec = EnergySpectrum::new(vec![0.0, 0.7, 1.3, 4.0]).unwrap();
        let sup = full(4);
        // strict decrease on a grid where consecutive values are resolvable
        let mut last = f64::INFINITY;
        let mut b = -6.0;
        while b <= 6.0 {
            let (e, _) = canonical_energy_and_variance(b, &spec, &sup);
            assert!(e < last, "E(β) not decreasing at β = {b}");
            last = e;
            b += 0.25;
        }
        // and never increasing even deep in the saturated tails
        let mut last = f64::INFINITY;
        let mut b = -40.0;
        while b <= 40.0 {
            let (e, _) = canonical_energy_and_variance(b, &spec, &sup);
            assert!(e <= last, "E(β) increased at β = {b}");
            last = e;
            b += 0.5;
        }
    }

    #[test]
    fn canonical_identity_entropy() {
        // S = ln Z_unshifted + β E, in k = 1 units
        let spec = EnergySpectrum::new(vec![0.0, 0.7, 1.3, 4.0]).unwrap();
        let sup = full(4);
        let k = ModelConstants::default();
        for beta in [-3.0, -1.0, -0.2, 0.0, 0.4, 1.7, 6.0] {
            let p = canonical_distribution(beta, &spec, &sup).unwrap();
            let z = partition_function(beta, &spec, &sup).unwrap();
            let e = energy(&p, &spec).unwrap();
            let s = entropy(&p, &k);
            let identity = z.ln_unshifted(beta) + beta * e;
            assert!(
                (s - identity).abs() <= 1e-10,
                "beta {beta}: S {s} vs identity {identity}"
            );
            let s_direct = canonical_entropy(beta, &spec, &sup).unwrap();
            assert!((s - s_direct).abs() <= 1e-10);
        }
    }

    #[test]
    fn canonical_states_are_sea_fixed_points() {
        let spec = EnergySpectrum::new(vec![0.0, 0.7, 1.3, 4.0]).unwrap();
        let k = ModelConstants::default();
        for beta in [-2.0, 0.0, 0.5, 3.0] {
            let p = canonical_full(beta, &spec).unwrap();
            let r = dynamics::sea_rate(&p, &spec, &k).unwrap();
            assert!(r.linf_norm() <= 1e-12, "beta {beta}: rate {}", r.linf_norm());
        }
    }

    #[test]
    fn temperature_sign_and_flags() {
        let spec = spec012();
        let k = ModelConstants::default();
        let t = temperature_of_stable_state(0.5, &spec, &k).unwrap();
        assert!(t.value().unwrap() > 0.0);
        let t = temperature_of_stable_state(1.5, &spec, &k).unwrap();
        assert!(t.value().unwrap() < 0.0);
        let t = temperature_of_stable_state(1.0, &spec, &k).unwrap();
        assert_eq!(t, Temperature::Infinite);
    }

    #[test]
    fn temperature_matches_boundary_derivative() {
        // finite-difference dE/dS along the stable boundary vs 1/(kβ)
        let spec = spec012();
        let sup = full(3);
        let k = ModelConstants::default();
        let e0 = 0.6;
        let sol = beta_from_energy(e0, &spec, &sup).unwrap();
        let beta = sol.beta().value().unwrap();
        let t_expected = 1.0 / beta;

        // two nearby boundary points separated by ~1e-5 in entropy
        let de = 1e-5 * t_expected.abs();
        let s_plus = canonical_entropy(
            beta_from_energy(e0 + de, &spec, &sup).unwrap().beta().value().unwrap(),
            &spec,
            &sup,
        )
        .unwrap();
        let s_minus = canonical_entropy(
            beta_from_energy(e0 - de, &spec, &sup).unwrap().beta().value().unwrap(),
            &spec,
            &sup,
        )
        .unwrap();
        let t_fd = 2.0 * de / (s_plus - s_minus);
        let t = temperature_of_stable_state(e0, &spec, &k).unwrap().value().unwrap();
        assert!((t - t_fd).abs() <= 1e-4, "T {t} vs finite difference {t_fd}");
    }

    #[test]
    fn equilibrium_verdicts() {
        let spec = spec012();
        let tol = 1e-9;

        let stable = canonical_full(0.7, &spec).unwrap();
        assert_eq!(is_equilibrium(&stable, &spec, tol).unwrap(), EquilibriumVerdict::Stable);

        let partial = canonical_distribution(0.7, &spec, &[0, 2]).unwrap();
        assert_eq!(is_equilibrium(&partial, &spec, tol).unwrap(), EquilibriumVerdict::Partial);

        let neither = StateDistribution::validate(vec![0.5, 0.2, 0.3]).unwrap();
        assert_eq!(is_equilibrium(&neither, &spec, tol).unwrap(), EquilibriumVerdict::None);

        // a pure state is canonical over its singleton support
        let pure = StateDistribution::pure(3, 1).unwrap();
        assert_eq!(is_equilibrium(&pure, &spec, tol).unwrap(), EquilibriumVerdict::Partial);
    }

    #[test]
    fn degenerate_support_equilibrium() {
        let spec = EnergySpectrum::new(vec![1.0, 1.0, 2.0]).unwrap();
        let sol = beta_from_energy(1.0, &spec, &[0, 1]).unwrap();
        assert_eq!(sol.beta(), Beta::Finite(0.0));
        assert_eq!(sol.distribution().probs(), &[0.5, 0.5, 0.0]);
    }

    #[test]
    fn stiff_beta_round_trip() {
        // tight levels push β to large magnitudes; the solver must not stall
        let spec = EnergySpectrum::new(vec![0.0, 0.01]).unwrap();
        let sup = full(2);
        let p = canonical_distribution(800.0, &spec, &sup).unwrap();
        let e = energy(&p, &spec).unwrap();
        let sol = beta_from_energy(e, &spec, &sup).unwrap();
        let back = sol.beta().value().unwrap();
        assert!((back - 800.0).abs() / 800.0 < 1e-6, "back = {back}");
    }
}
