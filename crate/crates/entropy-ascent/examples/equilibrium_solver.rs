//! Canonical thermodynamics of a finite spectrum: β(E), T(E), Z.
//!
//! Sweeps the energy across the range of a four-level spectrum. Energies
//! below the spectral mean have β > 0; the mean itself sits at β = 0
//! (infinite temperature); energies above the mean live on the
//! negative-temperature branch of the bounded spectrum.
//!
//! ```bash
//! cargo run --example equilibrium_solver
//! ```

use entropy_ascent::equilibrium::{beta_from_energy, Beta, Temperature};
use entropy_ascent::state::entropy;
use entropy_ascent::{EnergySpectrum, ModelConstants};

fn main() -> entropy_ascent::Result<()> {
    let spectrum = EnergySpectrum::new(vec![0.0, 0.5, 1.0, 3.0])?;
    let support: Vec<usize> = (0..spectrum.len()).collect();
    let constants = ModelConstants::default();

    println!("levels: {:?}  (mean = {})", spectrum.levels(), spectrum.mean_level());
    println!("{:>8} {:>14} {:>14} {:>12} {:>12}", "E", "beta", "T", "Z(shifted)", "S");
    let mut e = 0.1;
    while e < 2.95 {
        let sol = beta_from_energy(e, &spectrum, &support)?;
        let beta_text = match sol.beta() {
            Beta::Finite(b) => format!("{b:14.8}"),
            Beta::PlusInfinity => format!("{:>14}", "+inf"),
            Beta::MinusInfinity => format!("{:>14}", "-inf"),
        };
        let t_text = match sol.temperature() {
            Temperature::Finite(t) => format!("{t:14.8}"),
            Temperature::Infinite => format!("{:>14}", "infinite"),
        };
        println!(
            "{:8.3} {} {} {:12.6} {:12.8}",
            e,
            beta_text,
            t_text,
            sol.partition_function().shifted_value(),
            entropy(sol.distribution(), &constants),
        );
        e += 0.2;
    }

    // the endpoints are the two zero-temperature stable states of a
    // bounded spectrum
    for e in [0.0, 3.0] {
        let sol = beta_from_energy(e, &spectrum, &support)?;
        println!("E = {e}: beta = {:?}, distribution = {:?}", sol.beta(), sol.distribution().probs());
    }
    Ok(())
}
