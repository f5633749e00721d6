//! Adiabatic availability and available energy relative to a reservoir.
//!
//! The adiabatic availability of a state is the energy drop to the
//! minimum-energy state of equal entropy. The available energy Ω relative
//! to a reservoir at T_R is (E − E_ref) − T_R (S − S_ref), referenced to
//! the mutual-equilibrium canonical state; along an isolated relaxation the
//! energy is constant, so every increment of generated entropy destroys
//! exactly T_R times that much available energy.
//!
//! ```bash
//! cargo run --example availability
//! ```

use entropy_ascent::integrate::{integrate, IntegratorConfig};
use entropy_ascent::state::{energy, entropy};
use entropy_ascent::statespace::{adiabatic_availability, available_energy, smax_curve, ReservoirSpec};
use entropy_ascent::{EnergySpectrum, ModelConstants, StateDistribution};

fn main() -> entropy_ascent::Result<()> {
    let spectrum = EnergySpectrum::new(vec![0.0, 1.0, 2.0])?;
    let constants = ModelConstants::default();
    let curve = smax_curve(&spectrum, 512)?;

    let state = StateDistribution::validate(vec![0.2, 0.6, 0.2])?;
    let (e0, s0) = (energy(&state, &spectrum)?, entropy(&state, &constants));
    println!("state {:?}: (E, S) = ({e0:.6}, {s0:.6})", state.probs());
    println!("adiabatic availability: {:.6}", adiabatic_availability(e0, s0, &curve)?);

    let reservoir = ReservoirSpec::new(1.0)?;
    println!("available energy (T_R = 1): {:.6}", available_energy(e0, s0, &reservoir, &spectrum)?);

    // Ω falls monotonically while the isolated gas generates entropy
    let trajectory =
        integrate(&state, &spectrum, &constants, &IntegratorConfig::rk4(0.01, 6.0, 100)?)?;
    println!();
    println!("{:>6} {:>12} {:>14}", "t", "S", "omega(T_R=1)");
    for point in trajectory.points() {
        let omega = available_energy(point.energy, point.entropy, &reservoir, &spectrum)?;
        println!("{:6.2} {:12.8} {:14.10}", point.t, point.entropy, omega);
    }

    // at the reservoir's own canonical state nothing is available
    let reference = entropy_ascent::equilibrium::canonical_full(1.0, &spectrum)?;
    let (er, sr) = (energy(&reference, &spectrum)?, entropy(&reference, &constants));
    println!();
    println!("omega at the mutual-equilibrium reference: {:.3e}", available_energy(er, sr, &reservoir, &spectrum)?);
    Ok(())
}
