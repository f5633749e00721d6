//! The energy–entropy diagram of a three-level gas.
//!
//! Every state projects into the region between S = 0 and the concave
//! boundary S_max(E); each boundary point is one stable equilibrium state.
//! The finite spectrum adds the falling negative-temperature branch to the
//! right of the apex.
//!
//! ```bash
//! cargo run --example energy_entropy_diagram
//! ```

use entropy_ascent::state::{energy, entropy};
use entropy_ascent::statespace::{is_feasible_point, smax_curve};
use entropy_ascent::{EnergySpectrum, ModelConstants, StateDistribution};

fn main() -> entropy_ascent::Result<()> {
    let spectrum = EnergySpectrum::new(vec![0.0, 1.0, 2.0])?;
    let curve = smax_curve(&spectrum, 512)?;
    let apex = curve.apex();
    println!("samples: {}   apex: (E = {}, S = {:.9})", curve.samples().len(), apex.energy, apex.entropy);

    // a coarse slice of the boundary, both branches
    println!("{:>8} {:>12} {:>12}", "E", "S_max", "beta");
    let mut e = 0.1;
    while e < 2.0 {
        println!("{:8.2} {:12.8} {:>12}", e, curve.smax_at(e), branch_text(&curve, e));
        e += 0.19;
    }

    // feasibility: the whole S = 0 line is reachable, the region above the
    // boundary is not, and every actual state lands inside
    assert!(is_feasible_point(0.3, 0.0, &curve));
    assert!(!is_feasible_point(1.0, apex.entropy + 0.1, &curve));
    let constants = ModelConstants::default();
    let state = StateDistribution::validate(vec![0.25, 0.5, 0.25])?;
    let (e_state, s_state) = (energy(&state, &spectrum)?, entropy(&state, &constants));
    println!();
    println!("state {:?}: (E, S) = ({e_state}, {s_state:.6})", state.probs());
    println!("feasible: {}", is_feasible_point(e_state, s_state, &curve));
    println!("gap to boundary: {:.6}", curve.smax_at(e_state) - s_state);
    Ok(())
}

fn branch_text(curve: &entropy_ascent::statespace::DiagramCurve, e: f64) -> &'static str {
    match curve.branch_of(e) {
        entropy_ascent::statespace::BetaBranch::Positive => "beta > 0",
        entropy_ascent::statespace::BetaBranch::Zero => "beta = 0",
        entropy_ascent::statespace::BetaBranch::Negative => "beta < 0",
    }
}
