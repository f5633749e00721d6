//! Constrained maximization on the energy shell of the simplex:
//! maximize `f(p)` subject to `Σp = 1`, `Σ e p = E`, `p > 0`.
//!
//! Projected gradient ascent with numerical gradients and a backtracking
//! line search. Generic over the functional so the criteria harness can
//! drive arbitrary entropy candidates through the same machinery.

use crate::state::stable_sum;

const POSITIVITY_FLOOR: f64 = 1e-12;

pub(crate) struct ShellMax {
    pub state: Vec<f64>,
    pub value: f64,
}

/// Project a direction onto the tangent space {Σd = 0, Σ e d = 0}.
fn project_direction(grad: &[f64], levels: &[f64]) -> Vec<f64> {
    let n = grad.len() as f64;
    let e_mean = levels.iter().sum::<f64>() / n;
    let centered: Vec<f64> = levels.iter().map(|e| e - e_mean).collect();
    let ee: f64 = centered.iter().map(|c| c * c).sum();
    let b = if ee > 0.0 {
        centered.iter().zip(grad).map(|(c, g)| c * g).sum::<f64>() / ee
    } else {
        0.0
    };
    let shifted_mean =
        grad.iter().zip(&centered).map(|(g, c)| g - b * c).sum::<f64>() / n;
    grad.iter()
        .zip(&centered)
        .map(|(g, c)| g - b * c - shifted_mean)
        .collect()
}

fn numerical_gradient(f: &dyn Fn(&[f64]) -> f64, p: &[f64]) -> Vec<f64> {
    let mut grad = vec![0.0; p.len()];
    let mut work = p.to_vec();
    for i in 0..p.len() {
        let h = (1e-7 * p[i].max(1e-4)).min(0.4 * p[i]);
        let orig = work[i];
        work[i] = orig + h;
        let up = f(&work);
        work[i] = orig - h;
        let down = f(&work);
        work[i] = orig;
        grad[i] = (up - down) / (2.0 * h);
    }
    grad
}

/// Maximize `f` on the energy shell from an interior full-support start.
///
/// The start must already satisfy the constraints; every iterate stays on
/// the shell because the search direction is the constraint-tangent
/// projection of the gradient. A functional with zero gradient (Hartley in
/// the interior) simply stays at the start, which is exactly the behavior
/// the non-uniqueness check relies on.
pub(crate) fn maximize_on_energy_shell(
    f: &dyn Fn(&[f64]) -> f64,
    levels: &[f64],
    start: &[f64],
    max_iters: usize,
) -> ShellMax {
    let mut p = start.to_vec();
    let mut value = f(&p);
    for _ in 0..max_iters {
        let grad = numerical_gradient(f, &p);
        let dir = project_direction(&grad, levels);
        let dir_norm = dir.iter().fold(0.0f64, |m, d| m.max(d.abs()));
        if dir_norm <= 1e-9 {
            break;
        }
        let mut t = 0.25 / dir_norm;
        // shrink until the candidate stays interior
        loop {
            let violates = p
                .iter()
                .zip(&dir)
                .any(|(pi, di)| pi + t * di <= POSITIVITY_FLOOR);
            if !violates {
                break;
            }
            t *= 0.5;
            if t < 1e-18 {
                break;
            }
        }
        let mut improved = false;
        while t >= 1e-18 {
            let candidate: Vec<f64> = p.iter().zip(&dir).map(|(pi, di)| pi + t * di).collect();
            let cand_value = f(&candidate);
            if cand_value > value {
                p = candidate;
                value = cand_value;
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if !improved {
            break;
        }
    }
    ShellMax { state: p, value }
}

/// Exponentially tilt a full-support distribution to a prescribed energy:
/// `p_i(θ) ∝ p_i exp(-θ e_i)`, with `θ` solved by bracketing and bisection.
/// The target must lie strictly inside the range of the in-support levels.
pub(crate) fn tilt_to_energy(probs: &[f64], levels: &[f64], energy_target: f64) -> Vec<f64> {
    let tilted = |theta: f64| -> Vec<f64> {
        let shift = if theta >= 0.0 {
            levels.iter().copied().fold(f64::INFINITY, f64::min)
        } else {
            levels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        };
        let w: Vec<f64> = probs
            .iter()
            .zip(levels)
            .map(|(p, e)| p * (-theta * (e - shift)).exp())
            .collect();
        let z = stable_sum(w.iter().copied(), w.len());
        w.into_iter().map(|x| x / z).collect()
    };
    let energy_of = |theta: f64| -> f64 {
        let p = tilted(theta);
        stable_sum(p.iter().zip(levels).map(|(p, e)| p * e), p.len())
    };
    let range = levels.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - levels.iter().copied().fold(f64::INFINITY, f64::min);
    let mut lo = -1.0 / range;
    let mut hi = 1.0 / range;
    let mut guard = 0;
    while energy_of(lo) < energy_target {
        hi = lo;
        lo *= 2.0;
        guard += 1;
        if guard > 300 {
            break;
        }
    }
    while energy_of(hi) > energy_target {
        lo = hi;
        hi *= 2.0;
        guard += 1;
        if guard > 300 {
            break;
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if energy_of(mid) > energy_target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    tilted(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::beta_from_energy;
    use crate::state::stable_sum;

    #[test]
    fn shannon_maximizer_is_canonical() {
        let levels = [0.0, 1.0, 2.0];
        let shannon = |p: &[f64]| -> f64 {
            -p.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum::<f64>()
        };
        let start = tilt_to_energy(&[0.5, 0.1, 0.4], &levels, 0.8);
        let result = maximize_on_energy_shell(&shannon, &levels, &start, 5000);
        let spec = crate::spectrum::EnergySpectrum::new(levels.to_vec()).unwrap();
        let target = beta_from_energy(0.8, &spec, &[0, 1, 2]).unwrap();
        for (a, b) in result.state.iter().zip(target.distribution().probs()) {
            assert!((a - b).abs() < 1e-6, "maximizer {a} vs canonical {b}");
        }
    }

    #[test]
    fn tilt_hits_target_energy() {
        let levels = [0.0, 1.0, 2.0, 3.0];
        let p = tilt_to_energy(&[0.25, 0.25, 0.25, 0.25], &levels, 0.6);
        let e = stable_sum(p.iter().zip(&levels).map(|(p, e)| p * e), 4);
        assert!((e - 0.6).abs() < 1e-10, "tilted energy {e}");
        let sum: f64 = p.iter().sum();
        assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn projection_is_tangent() {
        let levels = [0.0, 1.0, 5.0];
        let d = project_direction(&[3.0, -1.0, 0.5], &levels);
        let s: f64 = d.iter().sum();
        let se: f64 = d.iter().zip(&levels).map(|(d, e)| d * e).sum();
        assert!(s.abs() < 1e-12);
        assert!(se.abs() < 1e-12);
    }
}
