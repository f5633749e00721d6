//! Subcommand implementations.

use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{Map, Value};

use super::config::{RunConfig, SweepConfig};
use super::output::{
    beta_value, diagram_csv, diagram_svg, float_array, number, temperature_value, to_json_string,
    trajectory_csv,
};
use super::{CliError, Flags};
use crate::criteria::{candidate_by_name, run_criteria, Counterexample, CriteriaReport};
use crate::equilibrium::beta_from_energy;
use crate::integrate::{integrate, Trajectory};
use crate::spectrum::EnergySpectrum;
use crate::state::{energy, entropy, ModelConstants, StateDistribution, ValidationMode};
use crate::statespace::{demon_check, is_feasible_point, smax_curve, BetaBranch};
use crate::SUM_TOLERANCE;

fn write_file(path: &str, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = Path::new(path).parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .map_err(|e| CliError::Io(format!("cannot create '{}': {e}", parent.display())))?;
        }
    }
    std::fs::write(path, contents)
        .map_err(|e| CliError::Io(format!("cannot write '{path}': {e}")))
}

fn emit(path: Option<&str>, contents: &str) -> Result<(), CliError> {
    match path {
        Some(path) => write_file(path, contents),
        None => {
            print!("{contents}");
            Ok(())
        }
    }
}

fn levels_from(flags: &Flags) -> Result<EnergySpectrum, CliError> {
    let levels = flags
        .f64_list("levels")?
        .ok_or_else(|| CliError::Usage("missing required flag --levels".into()))?;
    Ok(EnergySpectrum::new(levels)?)
}

/// Run one simulation described by a config file and write its trajectory
/// CSV and summary JSON.
pub fn simulate(flags: &Flags) -> Result<(), CliError> {
    let mut config = RunConfig::load(flags.require("config")?)?;
    if let Some(t_end) = flags.f64_opt("t-end")? {
        config.integrator.t_end = Some(t_end);
    }
    if let Some(base) = flags.get("out") {
        config.outputs.trajectory_csv = Some(format!("{base}.csv"));
        config.outputs.summary_json = Some(format!("{base}.json"));
    }
    let (csv_path, json_path) = (
        config.outputs.trajectory_csv.clone().unwrap_or_else(|| "trajectory.csv".into()),
        config.outputs.summary_json.clone().unwrap_or_else(|| "summary.json".into()),
    );
    let (trajectory, summary) = run_simulation(&config)?;
    write_file(&csv_path, &trajectory_csv(&trajectory))?;
    write_file(&json_path, &to_json_string(&summary))?;
    Ok(())
}

/// Shared by `simulate` and `sweep`: integrate and assemble the summary.
fn run_simulation(config: &RunConfig) -> Result<(Trajectory, Value), CliError> {
    let spectrum = config.spectrum()?;
    let constants = config.constants()?;
    let initial = config.initial_state(&spectrum)?;
    let integrator = config.integrator(&constants)?;
    let trajectory = integrate(&initial, &spectrum, &constants, &integrator)?;

    // the relaxation target: canonical over the initial support at the
    // conserved energy
    let support = initial.support().to_vec();
    let e0 = trajectory.initial().energy;
    let target = beta_from_energy(e0, &spectrum, &support)?;
    let final_state = &trajectory.last().state;
    let linf = final_state.linf_distance(target.distribution());

    let mut summary = Map::new();
    summary.insert("L_inf_to_canonical".into(), number(linf));
    summary.insert("beta_of_E".into(), beta_value(target.beta()));
    summary.insert("final_state".into(), float_array(final_state.probs()));
    summary.insert("max_energy_drift".into(), number(trajectory.max_energy_drift()));
    summary.insert("min_dSdt".into(), number(trajectory.min_entropy_rate()));
    Ok((trajectory, Value::Object(summary)))
}

/// Solve β from energy and print the equilibrium record.
pub fn equilibrium(flags: &Flags) -> Result<(), CliError> {
    let spectrum = levels_from(flags)?;
    let e = flags
        .f64_opt("energy")?
        .ok_or_else(|| CliError::Usage("missing required flag --energy".into()))?;
    let support = flags
        .usize_list("support")?
        .unwrap_or_else(|| (0..spectrum.len()).collect());
    let solution = beta_from_energy(e, &spectrum, &support)?;

    // report the unshifted Z when it is representable; the shifted value
    // (with its energy shift absorbed) is the fallback for extreme β
    let z = solution.partition_function();
    let z_value = match solution.beta().value() {
        Some(beta) if z.unshifted(beta).is_finite() => z.unshifted(beta),
        _ => z.shifted_value(),
    };
    let mut record = Map::new();
    record.insert("Z".into(), number(z_value));
    record.insert("beta".into(), beta_value(solution.beta()));
    record.insert("distribution".into(), float_array(solution.distribution().probs()));
    record.insert(
        "entropy".into(),
        number(entropy(solution.distribution(), &ModelConstants::default())),
    );
    record.insert("temperature".into(), temperature_value(solution.temperature()));
    emit(flags.get("out"), &to_json_string(&Value::Object(record)))
}

/// Emit the sampled stable-equilibrium boundary as CSV (and optionally SVG).
pub fn diagram(flags: &Flags) -> Result<(), CliError> {
    let spectrum = levels_from(flags)?;
    if spectrum.is_degenerate() {
        return Err(CliError::Usage(
            "diagram needs at least two distinct levels".into(),
        ));
    }
    let n_samples = flags.usize_opt("samples")?.unwrap_or(512);
    let curve = smax_curve(&spectrum, n_samples)?;

    // tool-side concavity scan before anything is written
    let tol = 1e-8 * curve.apex().entropy.max(1.0);
    let slopes: Vec<f64> = curve
        .samples()
        .windows(2)
        .map(|w| (w[1].entropy - w[0].entropy) / (w[1].energy - w[0].energy))
        .collect();
    for w in slopes.windows(2) {
        if w[1] > w[0] + tol {
            return Err(CliError::Numerical(format!(
                "sampled curve failed the concavity scan: slope rose from {} to {}",
                w[0], w[1]
            )));
        }
    }

    emit(flags.get("out"), &diagram_csv(&curve))?;
    if let Some(svg_path) = flags.get("svg") {
        write_file(svg_path, &diagram_svg(&curve))?;
    }
    Ok(())
}

/// Maxwell-demon feasibility check for a state or an explicit (E, S) pair.
pub fn demon(flags: &Flags) -> Result<(), CliError> {
    let spectrum = levels_from(flags)?;
    let constants = ModelConstants::default();
    let (e0, s0) = match (flags.f64_list("state")?, flags.f64_opt("energy")?, flags.f64_opt("entropy")?)
    {
        (Some(probs), None, None) => {
            let sum: f64 = probs.iter().sum();
            if (sum - 1.0).abs() > SUM_TOLERANCE {
                eprintln!("warning: state probabilities sum to {sum}; normalizing");
            }
            let state = StateDistribution::new(probs, ValidationMode::Lenient)?;
            (energy(&state, &spectrum)?, entropy(&state, &constants))
        }
        (None, Some(e), Some(s)) => (e, s),
        _ => {
            return Err(CliError::Usage(
                "demon needs either --state or both --energy and --entropy".into(),
            ))
        }
    };
    let n_samples = flags.usize_opt("samples")?.unwrap_or(512);
    let curve = smax_curve(&spectrum, n_samples)?;
    if !is_feasible_point(e0, s0, &curve) {
        return Err(CliError::Usage(format!(
            "point (E = {e0}, S = {s0}) is outside the feasible region"
        )));
    }
    let verdict = demon_check(e0, s0, &curve)?;

    let mut record = Map::new();
    record.insert(
        "branch".into(),
        Value::String(
            match verdict.branch {
                BetaBranch::Positive => "positive",
                BetaBranch::Zero => "zero",
                BetaBranch::Negative => "negative",
            }
            .into(),
        ),
    );
    record.insert("feasible".into(), Value::Bool(verdict.feasible));
    record.insert(
        "witness_distribution".into(),
        verdict.witness.as_ref().map_or(Value::Null, |w| float_array(w.probs())),
    );
    record.insert(
        "witness_energy".into(),
        verdict.witness_energy.map_or(Value::Null, number),
    );
    emit(flags.get("out"), &to_json_string(&Value::Object(record)))
}

/// Run the eight-criteria harness and emit the report (JSON to the output,
/// human-readable table to stderr).
pub fn criteria(flags: &Flags) -> Result<(), CliError> {
    let name = flags.require("candidate")?;
    let candidate = candidate_by_name(name, flags.f64_opt("q")?, flags.f64_opt("alpha")?)?;
    let levels = flags.f64_list("levels")?.unwrap_or_else(|| vec![0.0, 1.0, 2.0]);
    let spectrum = EnergySpectrum::new(levels)?;
    let trials = flags.usize_opt("trials")?.unwrap_or(200);
    let seed = flags.u64_opt("seed")?.unwrap_or(0);
    let report = run_criteria(&candidate, &spectrum, trials, seed)?;
    eprint!("{}", report.table());
    emit(flags.get("out"), &to_json_string(&report_value(&report)))
}

fn report_value(report: &CriteriaReport) -> Value {
    let mut root = Map::new();
    root.insert("candidate".into(), Value::String(report.candidate.clone()));
    let criteria: Vec<Value> = report
        .results
        .iter()
        .map(|r| {
            let mut entry = Map::new();
            entry.insert(
                "counterexample".into(),
                r.counterexample.as_ref().map_or(Value::Null, counterexample_value),
            );
            entry.insert("detail".into(), Value::String(r.detail.clone()));
            entry.insert("index".into(), Value::from(r.index));
            entry.insert("name".into(), Value::String(r.name.into()));
            entry.insert("verdict".into(), Value::String(r.verdict.as_str().into()));
            Value::Object(entry)
        })
        .collect();
    root.insert("criteria".into(), Value::Array(criteria));
    let params: BTreeMap<String, Value> =
        report.parameters.iter().map(|(k, v)| (k.clone(), number(*v))).collect();
    root.insert("parameters".into(), Value::Object(params.into_iter().collect()));
    root.insert("seed".into(), Value::from(report.seed));
    root.insert("spectrum".into(), float_array(&report.spectrum));
    root.insert("trials".into(), Value::from(report.trials as u64));
    Value::Object(root)
}

fn counterexample_value(ce: &Counterexample) -> Value {
    let mut map = Map::new();
    match ce {
        Counterexample::NonFinite { state, value } => {
            map.insert("kind".into(), Value::String("non-finite".into()));
            map.insert("state".into(), float_array(state));
            map.insert(
                "value".into(),
                if value.is_finite() { number(*value) } else { Value::String(value.to_string()) },
            );
        }
        Counterexample::PermutationChange { state, permutation, before, after } => {
            map.insert("kind".into(), Value::String("permutation-change".into()));
            map.insert("state".into(), float_array(state));
            map.insert(
                "permutation".into(),
                Value::Array(permutation.iter().map(|&i| Value::from(i as u64)).collect()),
            );
            map.insert("before".into(), number(*before));
            map.insert("after".into(), number(*after));
        }
        Counterexample::MixingDecrease { state, permutations, before, after } => {
            map.insert("kind".into(), Value::String("mixing-decrease".into()));
            map.insert("state".into(), float_array(state));
            map.insert(
                "permutations".into(),
                Value::Array(
                    permutations
                        .iter()
                        .map(|p| {
                            Value::Array(p.iter().map(|&i| Value::from(i as u64)).collect())
                        })
                        .collect(),
                ),
            );
            map.insert("before".into(), number(*before));
            map.insert("after".into(), number(*after));
        }
        Counterexample::TrajectoryDecrease { state_before, state_after, before, after } => {
            map.insert("kind".into(), Value::String("trajectory-decrease".into()));
            map.insert("state_before".into(), float_array(state_before));
            map.insert("state_after".into(), float_array(state_after));
            map.insert("before".into(), number(*before));
            map.insert("after".into(), number(*after));
        }
        Counterexample::Additivity { p, q, joint, sum } => {
            map.insert("kind".into(), Value::String("additivity".into()));
            map.insert("p".into(), float_array(p));
            map.insert("q".into(), float_array(q));
            map.insert("joint".into(), number(*joint));
            map.insert("sum".into(), number(*sum));
        }
        Counterexample::NegativeOrPureNonzero { state, value } => {
            map.insert("kind".into(), Value::String("negative-or-pure-nonzero".into()));
            map.insert("state".into(), float_array(state));
            map.insert("value".into(), number(*value));
        }
        Counterexample::NonUniqueMaximizer { levels, energy, state_a, state_b, value_a, value_b } => {
            map.insert("kind".into(), Value::String("non-unique-maximizer".into()));
            map.insert("levels".into(), float_array(levels));
            map.insert("energy".into(), number(*energy));
            map.insert("state_a".into(), float_array(state_a));
            map.insert("state_b".into(), float_array(state_b));
            map.insert("value_a".into(), number(*value_a));
            map.insert("value_b".into(), number(*value_b));
        }
        Counterexample::ConvexityBump { levels, energies, values } => {
            map.insert("kind".into(), Value::String("convexity-bump".into()));
            map.insert("levels".into(), float_array(levels));
            map.insert("energies".into(), float_array(energies));
            map.insert("values".into(), float_array(values));
        }
        Counterexample::PotentialMismatch { split_energy, slope_a, slope_b } => {
            map.insert("kind".into(), Value::String("potential-mismatch".into()));
            map.insert("split_energy".into(), number(*split_energy));
            map.insert("slope_a".into(), number(*slope_a));
            map.insert("slope_b".into(), number(*slope_b));
        }
        Counterexample::IdentityViolation { levels, beta, functional, identity } => {
            map.insert("kind".into(), Value::String("identity-violation".into()));
            map.insert("levels".into(), float_array(levels));
            map.insert("beta".into(), number(*beta));
            map.insert("functional".into(), number(*functional));
            map.insert("identity".into(), number(*identity));
        }
    }
    Value::Object(map)
}

/// Run the base simulation once per varied value, concurrently, each point
/// writing its own pair of files, plus an index of the whole sweep.
pub fn sweep(flags: &Flags) -> Result<(), CliError> {
    let sweep_config = SweepConfig::load(flags.require("config")?)?;
    if sweep_config.vary.values.is_empty() {
        return Err(CliError::Usage("sweep needs at least one value".into()));
    }
    let out_dir = &sweep_config.out_dir;
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create '{out_dir}': {e}")))?;

    let points: Vec<(usize, f64, RunConfig)> = sweep_config
        .vary
        .values
        .iter()
        .enumerate()
        .map(|(i, &v)| sweep_config.point(v).map(|c| (i, v, c)))
        .collect::<Result<_, _>>()?;

    let results: Vec<Result<(), CliError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = points
            .iter()
            .map(|(i, _, config)| {
                let csv_path = format!("{out_dir}/point_{i:03}.csv");
                let json_path = format!("{out_dir}/point_{i:03}.json");
                scope.spawn(move || {
                    let (trajectory, summary) = run_simulation(config)?;
                    write_file(&csv_path, &trajectory_csv(&trajectory))?;
                    write_file(&json_path, &to_json_string(&summary))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    // numerical failures dominate the exit code; otherwise first error wins
    let mut first_error = None;
    for result in results {
        if let Err(e) = result {
            if matches!(e, CliError::Numerical(_)) {
                return Err(e);
            }
            first_error.get_or_insert(e);
        }
    }
    if let Some(e) = first_error {
        return Err(e);
    }

    let mut index = Map::new();
    index.insert("field".into(), Value::String(sweep_config.vary.field.clone()));
    index.insert(
        "points".into(),
        Value::Array(
            points
                .iter()
                .map(|(i, v, _)| {
                    let mut entry = Map::new();
                    entry.insert("csv".into(), Value::String(format!("point_{i:03}.csv")));
                    entry.insert("summary".into(), Value::String(format!("point_{i:03}.json")));
                    entry.insert("value".into(), number(*v));
                    Value::Object(entry)
                })
                .collect(),
        ),
    );
    write_file(&format!("{out_dir}/sweep.json"), &to_json_string(&Value::Object(index)))
}
