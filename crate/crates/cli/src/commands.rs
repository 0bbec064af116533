use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use irreality::bloch::{to_bloch, GellMannBasis};
use irreality::bounds::nmin_report;
use irreality::channels::monitor;
use irreality::experiments::{
    emit_sweep_csv, format_significant, qubit_observable, qutrit_initial_state, qutrit_observable,
    qutrit_sweep, random_instance, spin1_operators, write_atomic, CSV_DIGITS,
};
use irreality::validate::run_all;
use irreality::{BlochVector, ProjectiveObservable, Result};
use serde_json::{json, Value};

use crate::config::{Format, RunConfig, System};

/// Reference value of the qutrit sweep at `φ = π/2, n = 1`.
const REFERENCE_CELL: f64 = 0.015;

/// Returns the process exit code on success.
pub fn run(cfg: &RunConfig) -> Result<u8> {
    match cfg {
        RunConfig::Sweep {
            phi_grid,
            n_max,
            output,
        } => sweep(phi_grid, *n_max, output),
        RunConfig::Evolve {
            system,
            n,
            format,
            output,
        } => evolve(system, *n, *format, output.as_deref()),
        RunConfig::Nmin {
            system,
            delta,
            output,
        } => nmin(system, *delta, output.as_deref()),
        RunConfig::Validate { cfg, output } => {
            let outcomes = run_all(cfg)?;
            let mut lines = Vec::with_capacity(outcomes.len());
            let mut all_passed = true;
            for o in &outcomes {
                all_passed &= o.passed();
                let status = if o.passed() { "PASS" } else { "FAIL" };
                println!(
                    "{status} {} trials={} worst={:e}",
                    o.name, o.trials, o.worst
                );
                let counterexample = o.counterexample.as_ref().map(|c| {
                    json!({"trial": c.trial, "detail": c.detail})
                });
                if let Some(c) = &counterexample {
                    println!("  counterexample: {c}");
                }
                lines.push(json!({
                    "suite": o.name,
                    "passed": o.passed(),
                    "trials": o.trials,
                    "worst": o.worst,
                    "counterexample": counterexample,
                }));
            }
            if let Some(path) = output {
                write_atomic(path, jsonl(&lines).as_bytes())?;
            }
            Ok(if all_passed { 0 } else { 1 })
        }
    }
}

fn jsonl(values: &[Value]) -> String {
    values.iter().map(|v| format!("{v}\n")).collect()
}

fn sweep(phi_grid: &[f64], n_max: usize, output: &Path) -> Result<u8> {
    let grid = qutrit_sweep(phi_grid, n_max)?;
    emit_sweep_csv(&grid, output)?;
    println!(
        "wrote {} rows ({} angles x {} steps) to {}",
        grid.cell_count(),
        grid.phi_values.len(),
        grid.n_values.len(),
        output.display()
    );
    if let Some(i) = grid.phi_values.iter().position(|&p| p == FRAC_PI_2) {
        let value = grid.value(i, 0);
        println!(
            "phi=pi/2 n=1: {} nats (reference {REFERENCE_CELL}, deviation {:+e})",
            format_significant(value, CSV_DIGITS),
            value - REFERENCE_CELL
        );
    }
    Ok(0)
}

struct Setup {
    basis: GellMannBasis,
    r0: BlochVector,
    a: ProjectiveObservable,
    b: ProjectiveObservable,
    x: ProjectiveObservable,
}

fn build(system: &System) -> Result<Setup> {
    match system {
        System::Qubit(q) => {
            let basis = GellMannBasis::new(2)?;
            let obs = |v: [f64; 3]| ProjectiveObservable::from_hermitian(&qubit_observable(v), &basis);
            Ok(Setup {
                r0: BlochVector::from_slice(2, &q.r0)?,
                a: obs(q.a)?,
                b: obs(q.b)?,
                x: obs(q.x)?,
                basis,
            })
        }
        System::Qutrit { phi } => {
            let basis = GellMannBasis::new(3)?;
            let (sx, _, sz) = spin1_operators();
            Ok(Setup {
                r0: to_bloch(&qutrit_initial_state(), &basis)?,
                a: ProjectiveObservable::from_hermitian(&qutrit_observable(*phi), &basis)?,
                b: ProjectiveObservable::from_hermitian(&sz, &basis)?,
                x: ProjectiveObservable::from_hermitian(&sx, &basis)?,
                basis,
            })
        }
        System::Random { d, seed } => {
            let basis = GellMannBasis::new(*d)?;
            let inst = random_instance(*d, *seed)?;
            Ok(Setup {
                r0: to_bloch(&inst.rho, &basis)?,
                a: inst.a,
                b: inst.b,
                x: inst.x,
                basis,
            })
        }
    }
}

const EVOLVE_HEADER: &str = "n,bloch_norm,epsilon,epsilon_valid,irreality_nats,bound_nats";

fn evolve(system: &System, n: usize, format: Format, output: Option<&Path>) -> Result<u8> {
    let s = build(system)?;
    let traj = monitor(&s.basis, &s.r0, &s.a, &s.b, n, &s.x)?;
    let mut out = String::new();
    match format {
        Format::Csv => {
            out.push_str(EVOLVE_HEADER);
            out.push('\n');
            for step in &traj.steps {
                let f = |x: f64| format_significant(x, CSV_DIGITS);
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    step.n,
                    f(step.norm),
                    f(step.epsilon),
                    step.epsilon_valid,
                    f(step.irreality),
                    f(step.bound_rhs)
                ));
            }
        }
        Format::Jsonl => {
            let rows: Vec<Value> = traj
                .steps
                .iter()
                .map(|step| {
                    json!({
                        "n": step.n,
                        "bloch_norm": step.norm,
                        "epsilon": step.epsilon,
                        "epsilon_valid": step.epsilon_valid,
                        "irreality_nats": step.irreality,
                        "bound_nats": step.bound_rhs,
                    })
                })
                .collect();
            out = jsonl(&rows);
        }
    }
    match output {
        Some(path) => write_atomic(path, out.as_bytes())?,
        None => print!("{out}"),
    }
    Ok(0)
}

fn nmin(system: &System, delta: f64, output: Option<&Path>) -> Result<u8> {
    let s = build(system)?;
    let report = nmin_report(&s.basis, &s.r0, &s.a, &s.b, &s.x, delta)?;
    let n_min = if report.n_min.is_finite() {
        json!(report.n_min)
    } else {
        json!("infinity")
    };
    let mut line = json!({
        "d": s.basis.dim(),
        "delta": report.delta,
        "g_d": report.g_d,
        "o_eps": report.o_eps,
        "initial_norm": report.initial_norm,
        "residual": report.residual,
        "n_min": n_min,
        "evaluated_at": report.evaluated_at,
        "achieved_irreality": report.irreality,
        "bound_at_evaluation": report.ineq2_rhs,
        "horizon": report.horizon,
    });
    if !report.n_min.is_finite() {
        line["note"] = json!(
            "no contraction (O(eps) = 1): the bound never drops below delta"
        );
    }
    let text = format!("{line}\n");
    print!("{text}");
    if let Some(path) = output {
        write_atomic(path, text.as_bytes())?;
    }
    Ok(0)
}
