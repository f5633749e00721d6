//! Single-particle energy spectra.

use crate::{Error, Result};

/// An ordered list of single-particle energy eigenvalues.
///
/// Degenerate eigenvalues are repeated as distinct entries; the list need
/// not be sorted. Probabilistic states over the spectrum are index-aligned
/// with `levels`.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergySpectrum {
    levels: Vec<f64>,
}

impl EnergySpectrum {
    /// Build a spectrum from raw eigenvalues. Rejects empty and non-finite input.
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::Domain("spectrum must have at least one level".into()));
        }
        if let Some((i, &v)) = levels.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite level at index {i}: {v}")));
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    pub fn min_level(&self) -> f64 {
        self.levels.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max_level(&self) -> f64 {
        self.levels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Arithmetic mean of the levels; the energy of the uniform state.
    pub fn mean_level(&self) -> f64 {
        self.levels.iter().sum::<f64>() / self.levels.len() as f64
    }

    /// max − min; the natural energy scale of the spectrum.
    pub fn range(&self) -> f64 {
        self.max_level() - self.min_level()
    }

    /// Number of entries equal to the minimum level (ground degeneracy).
    pub fn ground_degeneracy(&self) -> usize {
        let lo = self.min_level();
        self.levels.iter().filter(|&&e| e == lo).count()
    }

    /// Number of entries equal to the maximum level.
    pub fn top_degeneracy(&self) -> usize {
        let hi = self.max_level();
        self.levels.iter().filter(|&&e| e == hi).count()
    }

    /// True when every level carries the same energy.
    pub fn is_degenerate(&self) -> bool {
        self.range() == 0.0
    }

    /// Minimum level over an index subset.
    pub fn min_over(&self, support: &[usize]) -> f64 {
        support
            .iter()
            .map(|&i| self.levels[i])
            .fold(f64::INFINITY, f64::min)
    }

    /// Maximum level over an index subset.
    pub fn max_over(&self, support: &[usize]) -> f64 {
        support
            .iter()
            .map(|&i| self.levels[i])
            .fold(f64::NEG_INFINITY, f64::max)
    }
}
