use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "irreality", version, about = "Irreality decay under sequential pairwise monitoring")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Qutrit angle sweep of the maximal irreality, written as CSV.
    Sweep(SweepArgs),
    /// Per-step trajectory: norm, contraction ratio, irreality and bound.
    Evolve(SystemArgs),
    /// Steps needed to bring the irreality bound below --delta.
    Nmin(SystemArgs),
    /// Seeded oracle-equivalence and inequality suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Number of uniform angles on [0, π/2].
    #[arg(long, default_value_t = 64)]
    phi_points: usize,
    /// Sweep a single angle instead of the uniform grid.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    #[arg(short, long, default_value = "sweep.csv")]
    output: PathBuf,
    /// Interpret --phi in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// Qudit dimension; 2 and 3 use the built-in configurations, larger
    /// values draw a seeded random instance.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Angle between the two monitored observables.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    phi: f64,
    #[arg(long)]
    degrees: bool,
    /// Number of monitoring rounds (evolve).
    #[arg(long, default_value_t = 10)]
    n_max: usize,
    /// Target irreality in nats (nmin).
    #[arg(long, default_value_t = 0.01, allow_hyphen_values = true)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Qubit initial Bloch vector, `x,y,z`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    r0: Option<[f64; 3]>,
    /// Qubit direction of A, `x,y,z`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    a: Option<[f64; 3]>,
    /// Qubit direction of B, `x,y,z`; defaults to A rotated by --phi about y.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    b: Option<[f64; 3]>,
    /// Qubit direction of the tracked observable X, `x,y,z`.
    #[arg(long, value_parser = parse_vec3, allow_hyphen_values = true)]
    x: Option<[f64; 3]>,
    #[arg(short, long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trials: usize,
    /// Restrict dimension-generic suites to one dimension.
    #[arg(long)]
    d: Option<usize>,
    /// Tolerance for identities and bounds.
    #[arg(long, default_value_t = 1e-10, allow_hyphen_values = true)]
    tolerance: f64,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; 3];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|e| format!("{p:?}: {e}"))?;
    }
    Ok(out)
}

#[derive(Debug)]
pub struct UsageError(pub String);

/// Qubit configuration given as Bloch-sphere directions.
#[derive(Debug, Clone)]
pub struct QubitSetup {
    pub r0: [f64; 3],
    pub a: [f64; 3],
    pub b: [f64; 3],
    pub x: [f64; 3],
}

#[derive(Debug, Clone)]
pub enum System {
    Qubit(QubitSetup),
    /// `S_z = -1` eigenstate, `A = S_z cos φ + S_x sin φ`, `B = S_z`, `X = S_x`.
    Qutrit { phi: f64 },
    Random { d: usize, seed: u64 },
}

#[derive(Debug, Clone)]
pub enum RunConfig {
    Sweep {
        phi_grid: Vec<f64>,
        n_max: usize,
        output: PathBuf,
    },
    Evolve {
        system: System,
        n: usize,
        format: Format,
        output: Option<PathBuf>,
    },
    Nmin {
        system: System,
        delta: f64,
        output: Option<PathBuf>,
    },
    Validate {
        cfg: irreality::validate::ValidateConfig,
        output: Option<PathBuf>,
    },
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

fn to_radians(phi: f64, degrees: bool) -> f64 {
    if degrees {
        phi.to_radians()
    } else {
        phi
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn check_phi(phi: f64) -> Result<(), UsageError> {
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-12).contains(&phi) {
        return usage(format!("--phi {phi} rad outside [0, π/2]"));
    }
    Ok(())
}

impl SystemArgs {
    fn system(&self) -> Result<System, UsageError> {
        if !(2..=16).contains(&self.d) {
            return usage(format!("--d {} outside [2, 16]", self.d));
        }
        let phi = to_radians(self.phi, self.degrees);
        match self.d {
            2 => {
                let a = self.a.unwrap_or([0.0, 0.0, 1.0]);
                let b = self.b.unwrap_or_else(|| rotate_about_y(&a, phi));
                let setup = QubitSetup {
                    r0: self.r0.unwrap_or([0.0, 0.0, 1.0]),
                    a,
                    b,
                    x: self.x.unwrap_or([1.0, 0.0, 0.0]),
                };
                for (name, v) in [("--a", &setup.a), ("--b", &setup.b), ("--x", &setup.x)] {
                    if (norm3(v) - 1.0).abs() > 1e-9 {
                        return usage(format!("{name} must be a unit vector"));
                    }
                }
                if norm3(&setup.r0) > 1.0 + 1e-12 {
                    return usage("--r0 must lie in the unit ball");
                }
                Ok(System::Qubit(setup))
            }
            3 => {
                check_phi(phi)?;
                Ok(System::Qutrit { phi })
            }
            d => Ok(System::Random { d, seed: self.seed }),
        }
    }
}

fn rotate_about_y(v: &[f64; 3], phi: f64) -> [f64; 3] {
    let (s, c) = phi.sin_cos();
    [c * v[0] + s * v[2], v[1], -s * v[0] + c * v[2]]
}

impl Cli {
    pub fn into_run_config(self) -> Result<RunConfig, UsageError> {
        match self.command {
            Command::Sweep(args) => {
                if args.n_max < 1 {
                    return usage("--n-max must be at least 1");
                }
                let phi_grid = match args.phi {
                    Some(phi) => {
                        let phi = to_radians(phi, args.degrees);
                        check_phi(phi)?;
                        vec![phi.min(std::f64::consts::FRAC_PI_2)]
                    }
                    None => irreality::experiments::default_phi_grid(args.phi_points)
                        .map_err(|e| UsageError(e.to_string()))?,
                };
                Ok(RunConfig::Sweep {
                    phi_grid,
                    n_max: args.n_max,
                    output: args.output,
                })
            }
            Command::Evolve(args) => {
                if args.n_max < 1 {
                    return usage("--n-max must be at least 1");
                }
                Ok(RunConfig::Evolve {
                    system: args.system()?,
                    n: args.n_max,
                    format: args.format,
                    output: args.output,
                })
            }
            Command::Nmin(args) => {
                if !(args.delta > 0.0) {
                    return usage(format!("--delta must be positive, got {}", args.delta));
                }
                Ok(RunConfig::Nmin {
                    system: args.system()?,
                    delta: args.delta,
                    output: args.output,
                })
            }
            Command::Validate(args) => {
                if !(args.tolerance > 0.0) {
                    return usage(format!("--tolerance must be positive, got {}", args.tolerance));
                }
                if args.trials < 1 {
                    return usage("--trials must be at least 1");
                }
                if let Some(d) = args.d {
                    if !(2..=16).contains(&d) {
                        return usage(format!("--d {d} outside [2, 16]"));
                    }
                }
                Ok(RunConfig::Validate {
                    cfg: irreality::validate::ValidateConfig {
                        seed: args.seed,
                        trials: args.trials,
                        dim: args.d,
                        tolerance: args.tolerance,
                    },
                    output: args.output,
                })
            }
        }
    }
}
