//! Frozen support: initially zero probabilities stay exactly zero.
//!
//! A state supported on levels {0, 1, 3} of a four-level spectrum relaxes
//! to the *partially* canonical distribution over those three levels: a
//! stationary state, but not the stable equilibrium. the frozen level never
//! acquires probability, and the limiting entropy stays strictly below the
//! full-spectrum maximum at the same energy.
//!
//! (With only two in-support levels nothing would even move: normalization
//! and energy pin a two-point distribution completely, so every such state
//! is already its own partial equilibrium.)
//!
//! ```bash
//! cargo run --example partial_equilibrium
//! ```

use entropy_ascent::equilibrium::{beta_from_energy, is_equilibrium, EquilibriumVerdict};
use entropy_ascent::integrate::{integrate, IntegratorConfig};
use entropy_ascent::state::{energy, entropy};
use entropy_ascent::{EnergySpectrum, ModelConstants, StateDistribution};

fn main() -> entropy_ascent::Result<()> {
    let spectrum = EnergySpectrum::new(vec![0.0, 1.0, 2.0, 3.0])?;
    let constants = ModelConstants::default();
    let initial = StateDistribution::validate(vec![0.5, 0.2, 0.0, 0.3])?;
    println!("initial state  : {:?}", initial.probs());
    println!("initial support: {:?}", initial.support());

    let config = IntegratorConfig::rk4(0.01, 50.0, 500)?;
    let trajectory = integrate(&initial, &spectrum, &constants, &config)?;
    for point in trajectory.points() {
        assert_eq!(point.state.probs()[2], 0.0, "excluded level must stay at exactly zero");
    }
    let final_state = &trajectory.last().state;
    println!("final state    : {:?}", final_state.probs());

    // the limit is canonical over {0, 1, 3} at the conserved energy
    let e0 = energy(&initial, &spectrum)?;
    let partial = beta_from_energy(e0, &spectrum, &[0, 1, 3])?;
    println!("partial target : {:?}", partial.distribution().probs());
    println!("distance       : {:.3e}", final_state.linf_distance(partial.distribution()));
    println!("verdict        : {:?}", is_equilibrium(final_state, &spectrum, 1e-6)?);
    assert_eq!(is_equilibrium(final_state, &spectrum, 1e-6)?, EquilibriumVerdict::Partial);

    // the stable state at the same energy spreads over all four levels and
    // carries strictly more entropy
    let stable = beta_from_energy(e0, &spectrum, &[0, 1, 2, 3])?;
    println!();
    println!("partial-equilibrium entropy: {:.9}", entropy(final_state, &constants));
    println!("stable-equilibrium entropy : {:.9}", entropy(stable.distribution(), &constants));
    Ok(())
}
