//! Probability distributions over energy eigenstates and the two
//! functionals that drive everything else:
//!
//! ```text
//! E = Σ e_i p_i        S = -k Σ p_i ln p_i
//! ```
//!
//! A [`StateDistribution`] carries an explicit support set. Entries outside
//! the support are bitwise `0.0`, never merely small: the equation of motion
//! keeps initially-zero probabilities at zero, and that property is enforced
//! structurally here rather than left to floating-point underflow.

use crate::{Error, Result, NEGATIVE_SLACK, SUM_TOLERANCE, SUPPORT_EPS};
use crate::spectrum::EnergySpectrum;

/// How [`StateDistribution::new`] treats input that is not normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationMode {
    /// Reject vectors whose sum deviates from 1 by more than `SUM_TOLERANCE`.
    Strict,
    /// Accept any vector with positive total mass and rescale it to sum 1.
    Lenient,
}

/// Model constants: the entropy unit `k` and the dissipation time `τ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelConstants {
    k: f64,
    tau: f64,
}

impl ModelConstants {
    pub fn new(k: f64, tau: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0) {
            return Err(Error::InvalidConstant { name: "k", value: k });
        }
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidConstant { name: "tau", value: tau });
        }
        Ok(Self { k, tau })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }
}

impl Default for ModelConstants {
    /// Entropy in nats, unit dissipation time.
    fn default() -> Self {
        Self { k: 1.0, tau: 1.0 }
    }
}

/// A probability vector over energy eigenstates with an explicit support set.
///
/// Invariants, enforced at construction:
/// - every entry lies in `[0, 1]` and the entries sum to 1 within rounding;
/// - entries at indices outside `support` are exactly `0.0`;
/// - the support is non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct StateDistribution {
    probs: Vec<f64>,
    support: Vec<usize>,
}

impl StateDistribution {
    /// Validate a raw probability vector.
    ///
    /// Entries below the support threshold are snapped to exactly 0 and the
    /// remainder is renormalized. Negative entries within rounding slack of
    /// zero are treated as zero; anything more negative, non-finite input,
    /// and all-zero vectors are rejected. In strict mode the input must
    /// already sum to 1 within `SUM_TOLERANCE`; in lenient mode any positive
    /// total mass is rescaled.
    pub fn new(probs: Vec<f64>, mode: ValidationMode) -> Result<Self> {
        let mut probs = probs;
        if probs.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidProbability { index: i, value: *p });
            }
            if *p < -NEGATIVE_SLACK {
                return Err(Error::InvalidProbability { index: i, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = stable_sum(probs.iter().copied(), probs.len());
        if sum <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        if mode == ValidationMode::Strict && (sum - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::NotNormalized { sum, tolerance: SUM_TOLERANCE });
        }
        for p in probs.iter_mut() {
            *p /= sum;
        }
        // Snap sub-threshold entries to a bitwise zero, then renormalize the
        // survivors so the support holds all the mass.
        for p in probs.iter_mut() {
            if *p < SUPPORT_EPS {
                *p = 0.0;
            }
        }
        let kept: f64 = stable_sum(probs.iter().copied(), probs.len());
        if kept <= 0.0 {
            return Err(Error::EmptyDistribution);
        }
        for p in probs.iter_mut() {
            if *p != 0.0 {
                *p /= kept;
            }
        }
        let support: Vec<usize> = probs
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(i, _)| i)
            .collect();
        Ok(Self { probs, support })
    }

    /// Strict-mode shorthand.
    pub fn validate(probs: Vec<f64>) -> Result<Self> {
        Self::new(probs, ValidationMode::Strict)
    }

    /// The pure state concentrated on level `index`.
    pub fn pure(n: usize, index: usize) -> Result<Self> {
        if index >= n {
            return Err(Error::Domain(format!("pure-state index {index} out of range for n = {n}")));
        }
        let mut probs = vec![0.0; n];
        probs[index] = 1.0;
        Ok(Self { probs, support: vec![index] })
    }

    /// The uniform distribution over all `n` levels.
    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
            support: (0..n).collect(),
        })
    }

    /// The uniform distribution over an index subset of `n` levels.
    pub fn uniform_over(n: usize, support: &[usize]) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        let mut seen = vec![false; n];
        for &i in support {
            if i >= n {
                return Err(Error::Domain(format!("support index {i} out of range for n = {n}")));
            }
            if seen[i] {
                return Err(Error::Domain(format!("duplicate support index {i}")));
            }
            seen[i] = true;
        }
        let mut probs = vec![0.0; n];
        let w = 1.0 / support.len() as f64;
        for &i in support {
            probs[i] = w;
        }
        let mut support = support.to_vec();
        support.sort_unstable();
        Ok(Self { probs, support })
    }

    /// Construct from parts already known to satisfy the invariants.
    /// Used by the integrator, which must not re-snap mid-trajectory values.
    pub(crate) fn from_parts_unchecked(probs: Vec<f64>, support: Vec<usize>) -> Self {
        debug_assert!(support.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(support.iter().all(|&i| probs[i] > 0.0));
        debug_assert!(
            probs
                .iter()
                .enumerate()
                .all(|(i, &p)| p > 0.0 || !support.contains(&i))
        );
        debug_assert!((stable_sum(probs.iter().copied(), probs.len()) - 1.0).abs() < 1e-9);
        Self { probs, support }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.support.len()
    }

    pub fn is_pure(&self) -> bool {
        self.support.len() == 1
    }

    /// L∞ distance between two distributions of equal length.
    pub fn linf_distance(&self, other: &Self) -> f64 {
        assert_eq!(self.probs.len(), other.probs.len());
        self.probs
            .iter()
            .zip(&other.probs)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// The product distribution of two independent states (length m·n).
    ///
    /// Entry `(i, j)` maps to flat index `i * other.len() + j`. Products of
    /// in-support entries are kept exactly, however small, so additivity
    /// checks see the true tensor state.
    pub fn product(&self, other: &Self) -> Self {
        let n = other.len();
        let mut probs = vec![0.0; self.len() * n];
        let mut support = Vec::with_capacity(self.support.len() * other.support.len());
        for &i in &self.support {
            for &j in &other.support {
                let idx = i * n + j;
                probs[idx] = self.probs[i] * other.probs[j];
                support.push(idx);
            }
        }
        support.sort_unstable();
        Self { probs, support }
    }

    /// Apply a permutation: entry `i` of the result is `probs[perm[i]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.len() {
            return Err(Error::LengthMismatch { expected: self.len(), actual: perm.len() });
        }
        let probs: Vec<f64> = perm.iter().map(|&j| self.probs[j]).collect();
        let support: Vec<usize> = {
            let mut s: Vec<usize> = probs
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(i, _)| i)
                .collect();
            s.sort_unstable();
            s
        };
        Ok(Self { probs, support })
    }
}

/// `p ln p` with the boundary convention `0 ln 0 = 0`.
///
/// Accepts `p` in `[0, 1]` with rounding slack of `1e-12` on both ends;
/// anything further out is a domain error. Never returns NaN.
pub fn xlogx(p: f64) -> Result<f64> {
    if !p.is_finite() || !(-NEGATIVE_SLACK..=1.0 + NEGATIVE_SLACK).contains(&p) {
        return Err(Error::Domain(format!("xlogx argument {p} outside [0, 1]")));
    }
    if p <= 0.0 {
        return Ok(0.0);
    }
    let p = p.min(1.0);
    Ok(p * p.ln())
}

/// Shannon-type entropy `S = -k Σ p_i ln p_i`, in units of `k`.
///
/// Non-negative by construction: every in-support term `p ln p` is ≤ 0.
/// Terms are summed in value-sorted order, so permuting the entries of a
/// state changes nothing, not even the final ulp.
pub fn entropy(state: &StateDistribution, constants: &ModelConstants) -> f64 {
    let mut terms: Vec<f64> = state
        .support()
        .iter()
        .map(|&i| {
            let p = state.probs()[i];
            p * p.ln()
        })
        .collect();
    terms.sort_by(f64::total_cmp);
    let s = stable_sum(terms.into_iter(), state.support_size());
    -constants.k() * s
}

/// Mean energy `E = Σ e_i p_i`.
pub fn energy(state: &StateDistribution, spectrum: &EnergySpectrum) -> Result<f64> {
    if state.len() != spectrum.len() {
        return Err(Error::LengthMismatch { expected: spectrum.len(), actual: state.len() });
    }
    Ok(stable_sum(
        state.support().iter().map(|&i| spectrum.levels()[i] * state.probs()[i]),
        state.support_size(),
    ))
}

/// Neumaier-compensated sum for long vectors, plain fold otherwise.
///
/// The compensated path engages above 64 terms, where accumulated rounding
/// in the moment sums would start to matter for the determinant ratios.
pub(crate) fn stable_sum(terms: impl Iterator<Item = f64>, n: usize) -> f64 {
    if n <= 64 {
        return terms.sum();
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for t in terms {
        let next = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - next) + t;
        } else {
            comp += (t - next) + sum;
        }
        sum = next;
    }
    sum + comp
}
