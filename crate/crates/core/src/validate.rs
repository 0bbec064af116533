//! Seeded property suites: oracle equivalences and inequality checks.
//!
//! Each suite draws its own ChaCha stream from the shared seed, so a failing
//! trial is reproducible from `(seed, suite, trial)` alone.

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bloch::{build_gellmann, from_bloch, to_bloch, BlochVector, ProjectiveObservable};
use crate::bounds::{g_factor, irreality, nmin_report, qubit_irreality_bound};
use crate::channels::{monitor, phi_map, simplex_projector, stinespring_check};
use crate::experiments::{fourier_unitary, qubit_closed_form, qubit_observable};
use crate::kernel::{binary_entropy, relative_entropy, schatten_norm, von_neumann_entropy};
use crate::random::{haar_unitary, random_ball_point, random_observable, random_state, random_unit_vector};
use crate::{Error, Result};

/// Settings shared by every suite.
#[derive(Debug, Clone)]
pub struct ValidateConfig {
    pub seed: u64,
    pub trials: usize,
    /// Restricts dimension-generic suites to a single `d`.
    pub dim: Option<usize>,
    /// Tolerance for oracle equalities and bound checks.
    pub tolerance: f64,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 200,
            dim: None,
            tolerance: 1e-10,
        }
    }
}

/// First failing trial of a suite.
#[derive(Debug, Clone, PartialEq)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub trials: usize,
    /// Largest observed `lhs - rhs` (bounds) or deviation (identities).
    pub worst: f64,
    pub counterexample: Option<Counterexample>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

type Trial = dyn Fn(&mut ChaCha8Rng, &ValidateConfig) -> Result<(f64, bool, String)>;

struct Suite {
    name: &'static str,
    run: Box<Trial>,
}

fn dims(cfg: &ValidateConfig, default: &[usize]) -> Vec<usize> {
    match cfg.dim {
        Some(d) => vec![d],
        None => default.to_vec(),
    }
}

fn pick<R: Rng>(rng: &mut R, choices: &[usize]) -> usize {
    choices[rng.random_range(0..choices.len())]
}

fn suites() -> Vec<Suite> {
    vec![
        Suite {
            name: "oracle_equivalence",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3, 4]));
                let basis = build_gellmann(d)?;
                let rho = random_state(d, rng)?;
                let a = random_observable(d, &basis, rng)?;
                let b = random_observable(d, &basis, rng)?;
                let r = to_bloch(&rho, &basis)?;
                let rb = simplex_projector(&b).apply(&simplex_projector(&a).apply(&r)?)?;
                let via_bloch = from_bloch(&rb, &basis)?;
                let direct = phi_map(&phi_map(&rho, &a)?, &b)?;
                let dev = (via_bloch.matrix() - direct.matrix()).camax();
                Ok((dev, dev <= cfg.tolerance, format!("d={d} deviation={dev:e}")))
            }),
        },
        Suite {
            name: "stinespring",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3]));
                let basis = build_gellmann(d)?;
                let rho = random_state(d, rng)?;
                let a = random_observable(d, &basis, rng)?;
                let dev = stinespring_check(&rho, &a)?;
                Ok((dev, dev <= cfg.tolerance, format!("d={d} deviation={dev:e}")))
            }),
        },
        Suite {
            name: "irreality_identity",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3]));
                let basis = build_gellmann(d)?;
                let rho = random_state(d, rng)?;
                let x = random_observable(d, &basis, rng)?;
                let i = irreality(&x, &rho)?;
                let rel = relative_entropy(&rho, &phi_map(&rho, &x)?)?;
                let dev = (i - rel).abs();
                let ok = dev <= cfg.tolerance && i >= -cfg.tolerance;
                Ok((dev, ok, format!("d={d} irreality={i} relative_entropy={rel}")))
            }),
        },
        Suite {
            name: "theorem_bound",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3]));
                let n = rng.random_range(1..=8);
                let basis = build_gellmann(d)?;
                let rho = random_state(d, rng)?;
                let a = random_observable(d, &basis, rng)?;
                let b = random_observable(d, &basis, rng)?;
                let x = random_observable(d, &basis, rng)?;
                let traj = monitor(&basis, &to_bloch(&rho, &basis)?, &a, &b, n, &x)?;
                let step = traj.steps.last().expect("n >= 1");
                let excess = step.irreality - step.bound_rhs;
                let ok = if step.norm < 1e-12 {
                    step.irreality.abs() < cfg.tolerance
                } else {
                    excess <= cfg.tolerance
                };
                Ok((excess, ok, format!(
                    "d={d} n={n} irreality={} bound={} norm={}",
                    step.irreality, step.bound_rhs, step.norm
                )))
            }),
        },
        Suite {
            name: "fannes_audenaert",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3, 4]));
                let rho = random_state(d, rng)?;
                let sigma = random_state(d, rng)?;
                let t = 0.5 * schatten_norm(&(rho.matrix() - sigma.matrix()), 1)?;
                let lhs = (von_neumann_entropy(&rho)? - von_neumann_entropy(&sigma)?).abs();
                let rhs = t * ((d - 1) as f64).ln() + binary_entropy(t.min(1.0))?;
                Ok((lhs - rhs, lhs <= rhs + cfg.tolerance, format!("d={d} T={t} lhs={lhs} rhs={rhs}")))
            }),
        },
        Suite {
            name: "continuity_chain",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3, 4]));
                let basis = build_gellmann(d)?;
                let r1 = to_bloch(&random_state(d, rng)?, &basis)?;
                let r2 = to_bloch(&random_state(d, rng)?, &basis)?;
                let lhs = (von_neumann_entropy(&from_bloch(&r2, &basis)?)?
                    - von_neumann_entropy(&from_bloch(&r1, &basis)?)?)
                .abs();
                let rhs = g_factor(d)? * (r2.vector() - r1.vector()).norm().sqrt();
                Ok((lhs - rhs, lhs <= rhs + cfg.tolerance, format!("d={d} lhs={lhs} rhs={rhs}")))
            }),
        },
        Suite {
            name: "holder",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &dims(cfg, &[2, 3, 4]));
                let diff = random_state(d, rng)?.into_matrix() - random_state(d, rng)?.into_matrix();
                let one = schatten_norm(&diff, 1)?;
                let two = schatten_norm(&diff, 2)?;
                let rhs = (d as f64).sqrt() * two;
                Ok((one - rhs, one <= rhs + cfg.tolerance, format!("d={d} ||.||_1={one} sqrt(d)||.||_2={rhs}")))
            }),
        },
        Suite {
            name: "binary_entropy_sqrt",
            run: Box::new(|rng, cfg| {
                let t: f64 = rng.random();
                let lhs = binary_entropy(t)?;
                let rhs = (2.0 * t).sqrt();
                Ok((lhs - rhs, lhs <= rhs + cfg.tolerance, format!("T={t}")))
            }),
        },
        Suite {
            name: "qubit_closed_form",
            run: Box::new(qubit_trial),
        },
        Suite {
            name: "nmin_sufficiency",
            run: Box::new(|rng, _cfg| {
                let d = pick(rng, &[2, 3]);
                let delta = if rng.random::<bool>() { 0.1 } else { 0.01 };
                let basis = build_gellmann(d)?;
                let rho = random_state(d, rng)?;
                let a = random_observable(d, &basis, rng)?;
                let b = random_observable(d, &basis, rng)?;
                let x = random_observable(d, &basis, rng)?;
                let report = nmin_report(&basis, &to_bloch(&rho, &basis)?, &a, &b, &x, delta)?;
                if !(report.o_eps < 1.0 - 1e-6) {
                    return Ok((0.0, true, "skipped: O(eps) ~ 1".into()));
                }
                let excess = report.irreality - delta;
                Ok((excess, excess <= 0.0, format!(
                    "d={d} delta={delta} n_min={} irreality={}",
                    report.n_min, report.irreality
                )))
            }),
        },
        Suite {
            name: "mub_one_shot",
            run: Box::new(|rng, cfg| {
                let d = pick(rng, &[2, 3]);
                let basis = build_gellmann(d)?;
                let u = haar_unitary(d, rng);
                let eig: Vec<f64> = (0..d).map(|i| i as f64 - (d as f64 - 1.0) / 2.0).collect();
                let a = ProjectiveObservable::from_eigenbasis(&eig, &u, &basis)?;
                let b = ProjectiveObservable::from_eigenbasis(&eig, &(&u * fourier_unitary(d)), &basis)?;
                let rho = random_state(d, rng)?;
                let r1 = simplex_projector(&b).apply(&simplex_projector(&a).apply(&to_bloch(&rho, &basis)?)?)?;
                let mut worst = r1.norm();
                let rho1 = from_bloch(&r1, &basis)?;
                for _ in 0..10 {
                    let x = random_observable(d, &basis, rng)?;
                    worst = worst.max(irreality(&x, &rho1)?.abs());
                }
                Ok((worst, r1.norm() < 1e-12 && worst <= cfg.tolerance, format!("d={d} worst={worst:e}")))
            }),
        },
    ]
}

fn qubit_trial(rng: &mut ChaCha8Rng, cfg: &ValidateConfig) -> Result<(f64, bool, String)> {
    let basis = build_gellmann(2)?;
    let to3 = |v: nalgebra::DVector<f64>| Vector3::new(v[0], v[1], v[2]);
    let a = to3(random_unit_vector(3, rng));
    let b = to3(random_unit_vector(3, rng));
    let x = to3(random_unit_vector(3, rng));
    let r0 = random_ball_point(rng);
    let n = rng.random_range(1..=10);
    let obs = |v: &Vector3<f64>| ProjectiveObservable::from_hermitian(&qubit_observable([v.x, v.y, v.z]), &basis);
    let (oa, ob, ox) = (obs(&a)?, obs(&b)?, obs(&x)?);
    let traj = monitor(&basis, &BlochVector::from_slice(2, r0.as_slice())?, &oa, &ob, n, &ox)?;
    let step = traj.steps.last().expect("n >= 1");
    let closed = qubit_closed_form(&r0, &a, &b, n)?;
    let dev = (closed.vector() - step.r.vector()).camax();
    let bound = qubit_irreality_bound(a.dot(&r0).clamp(-1.0, 1.0), a.dot(&b).clamp(-1.0, 1.0), x.dot(&b).clamp(-1.0, 1.0), n)?;
    let excess = step.irreality - bound;
    let ok = dev <= 1e-12 && excess <= cfg.tolerance;
    Ok((dev.max(excess), ok, format!(
        "n={n} a={a:?} b={b:?} x={x:?} r0={r0:?} closed_form_dev={dev:e} irreality={} bound={bound}",
        step.irreality
    )))
}

/// Names of all suites in execution order.
pub fn suite_names() -> Vec<&'static str> {
    suites().into_iter().map(|s| s.name).collect()
}

/// Runs every suite and returns one outcome per suite.
pub fn run_all(cfg: &ValidateConfig) -> Result<Vec<SuiteOutcome>> {
    if !(cfg.tolerance > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {}",
            cfg.tolerance
        )));
    }
    if let Some(d) = cfg.dim {
        if !(2..=16).contains(&d) {
            return Err(Error::InvalidArgument(format!("d = {d} outside [2, 16]")));
        }
    }
    let mut outcomes = Vec::new();
    for (stream, suite) in suites().into_iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(stream as u64);
        let mut worst = f64::NEG_INFINITY;
        let mut counterexample = None;
        for trial in 0..cfg.trials {
            let (value, ok, detail) = (suite.run)(&mut rng, cfg)?;
            worst = worst.max(value);
            if !ok {
                counterexample = Some(Counterexample { trial, detail });
                break;
            }
        }
        outcomes.push(SuiteOutcome {
            name: suite.name,
            trials: cfg.trials,
            worst,
            counterexample,
        });
    }
    Ok(outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_suites_pass() {
        let cfg = ValidateConfig {
            trials: 40,
            ..ValidateConfig::default()
        };
        for outcome in run_all(&cfg).unwrap() {
            assert!(outcome.passed(), "{outcome:?}");
        }
    }

    #[test]
    fn rejects_nonpositive_tolerance() {
        let cfg = ValidateConfig {
            tolerance: -1.0,
            ..ValidateConfig::default()
        };
        assert!(run_all(&cfg).is_err());
    }

    #[test]
    fn absurdly_tight_tolerance_reports_counterexample() {
        let cfg = ValidateConfig {
            trials: 5,
            tolerance: 1e-300,
            ..ValidateConfig::default()
        };
        let outcomes = run_all(&cfg).unwrap();
        let oracle = outcomes.iter().find(|o| o.name == "oracle_equivalence").unwrap();
        assert!(!oracle.passed());
        assert_eq!(oracle.counterexample.as_ref().unwrap().trial, 0);
    }
}
