//! The Maxwell-demon feasibility check on the energy–entropy diagram.
//!
//! The demon's task (extract only energy, leaving entropy no lower) asks
//! for a state with E' < E₀ and S' ≥ S₀. From a stable equilibrium
//! state on the β > 0 branch no such state exists. From a nonequilibrium
//! state even an incompetent demon succeeds, and the check produces the
//! witness. On the negative-temperature branch of a bounded spectrum the
//! boundary itself falls, so stable states there are fair game too.
//!
//! ```bash
//! cargo run --example maxwell_demon
//! ```

use entropy_ascent::equilibrium::{canonical_energy, canonical_entropy};
use entropy_ascent::state::{energy, entropy};
use entropy_ascent::statespace::{demon_check, smax_curve};
use entropy_ascent::{EnergySpectrum, ModelConstants, StateDistribution};

fn main() -> entropy_ascent::Result<()> {
    let spectrum = EnergySpectrum::new(vec![0.0, 1.0, 2.0])?;
    let constants = ModelConstants::default();
    let curve = smax_curve(&spectrum, 512)?;
    let full = [0usize, 1, 2];

    // 1. stable state at positive temperature: nothing below
    let e = canonical_energy(0.9, &spectrum, &full)?;
    let s = canonical_entropy(0.9, &spectrum, &full)?;
    let verdict = demon_check(e, s, &curve)?;
    println!("stable state at beta = 0.9, (E, S) = ({e:.6}, {s:.6})");
    println!("  feasible: {}  branch: {:?}", verdict.feasible, verdict.branch);

    // 2. interior nonequilibrium state: energy extraction at no entropy cost
    let state = StateDistribution::validate(vec![0.2, 0.6, 0.2])?;
    let (e0, s0) = (energy(&state, &spectrum)?, entropy(&state, &constants));
    let verdict = demon_check(e0, s0, &curve)?;
    println!();
    println!("interior state {:?}, (E, S) = ({e0:.6}, {s0:.6})", state.probs());
    println!("  feasible: {}  branch: {:?}", verdict.feasible, verdict.branch);
    if let (Some(witness), Some(we)) = (&verdict.witness, verdict.witness_energy) {
        let ws = entropy(witness, &constants);
        println!("  witness at E' = {we:.6} with S' = {ws:.6} (extracts {:.6})", e0 - we);
    }

    // 3. stable state at negative temperature: the falling branch betrays it
    let e = canonical_energy(-0.9, &spectrum, &full)?;
    let s = canonical_entropy(-0.9, &spectrum, &full)?;
    let verdict = demon_check(e, s, &curve)?;
    println!();
    println!("stable state at beta = -0.9, (E, S) = ({e:.6}, {s:.6})");
    println!("  feasible: {}  branch: {:?}", verdict.feasible, verdict.branch);
    Ok(())
}
