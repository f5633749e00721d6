//! Relax a three-level Boltzmann gas to stable equilibrium.
//!
//! Starting from p = (0.5, 0.2, 0.3) over levels (0, 1, 2), the equation of
//! motion conserves the energy E = 0.8 and climbs in entropy until it
//! reaches the canonical distribution at that energy.
//!
//! ```bash
//! cargo run --example relaxation
//! ```

use entropy_ascent::equilibrium::beta_from_energy;
use entropy_ascent::integrate::{integrate, IntegratorConfig};
use entropy_ascent::{EnergySpectrum, ModelConstants, StateDistribution};

fn main() -> entropy_ascent::Result<()> {
    let spectrum = EnergySpectrum::new(vec![0.0, 1.0, 2.0])?;
    let constants = ModelConstants::default();
    let initial = StateDistribution::validate(vec![0.5, 0.2, 0.3])?;

    let config = IntegratorConfig::rk4(constants.tau() / 100.0, 50.0 * constants.tau(), 100)?;
    let trajectory = integrate(&initial, &spectrum, &constants, &config)?;

    println!("{:>8} {:>10} {:>10} {:>10} {:>12} {:>12} {:>12}", "t", "p0", "p1", "p2", "E", "S", "dS/dt");
    for point in trajectory.points().iter().step_by(5) {
        let p = point.state.probs();
        println!(
            "{:8.2} {:10.6} {:10.6} {:10.6} {:12.9} {:12.9} {:12.3e}",
            point.t, p[0], p[1], p[2], point.energy, point.entropy, point.entropy_rate
        );
    }

    let target = beta_from_energy(trajectory.initial().energy, &spectrum, &[0, 1, 2])?;
    let distance = trajectory.last().state.linf_distance(target.distribution());
    println!();
    println!("energy drift      : {:.3e}", trajectory.max_energy_drift());
    println!("mass drift        : {:.3e}", trajectory.max_normalization_drift());
    println!("beta at E = 0.8   : {:?}", target.beta());
    println!("L-inf to canonical: {distance:.3e}");
    Ok(())
}
