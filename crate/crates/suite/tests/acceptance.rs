//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any
//! criterion fails.

use std::f64::consts::{FRAC_PI_2, LN_2};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use irreality::bloch::{build_gellmann, from_bloch, to_bloch, ProjectiveObservable};
use irreality::bounds::{hbin_bound_check, ineq2_rhs, irreality, nmin_report, qubit_irreality_bound};
use irreality::channels::{monitor, phi_map, simplex_projector, stinespring_check};
use irreality::experiments::{
    default_phi_grid, fourier_unitary, qubit_closed_form, qubit_observable, qutrit_sweep,
};
use irreality::kernel::{binary_entropy, schatten_norm, von_neumann_entropy};
use irreality::random::{
    haar_unitary, random_ball_point, random_observable, random_pure_state, random_state,
    random_unit_vector,
};
use irreality::{BlochVector, CMatrix, DensityMatrix, Result};
use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Verdict {
    passed: bool,
    detail: String,
}

fn verdict(passed: bool, detail: impl Into<String>) -> Result<Verdict> {
    Ok(Verdict {
        passed,
        detail: detail.into(),
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn max_modulus(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn ms(t: Duration) -> String {
    format!("{:.1} ms", t.as_secs_f64() * 1e3)
}

fn unit3(v: nalgebra::DVector<f64>) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

fn qubit_obs(v: &Vector3<f64>) -> Result<ProjectiveObservable> {
    let basis = build_gellmann(2)?;
    ProjectiveObservable::from_hermitian(&qubit_observable([v.x, v.y, v.z]), &basis)
}

/// `(ΦB ΦA)^n ρ` computed on density matrices.
fn dephase_rounds(
    rho: &DensityMatrix,
    a: &ProjectiveObservable,
    b: &ProjectiveObservable,
    n: usize,
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    for _ in 0..n {
        out = phi_map(&phi_map(&out, a)?, b)?;
    }
    Ok(out)
}

fn reference_cell() -> Result<Verdict> {
    let start = Instant::now();
    let grid = qutrit_sweep(&default_phi_grid(64)?, 10)?;
    let elapsed = start.elapsed();
    let i = grid.phi_values.len() - 1;
    assert_eq!(grid.phi_values[i], FRAC_PI_2);
    let value = grid.value(i, 0);
    let ok = (value - 0.015).abs() <= 0.002 && elapsed < Duration::from_secs(1);
    verdict(
        ok,
        format!("I(π/2, n=1) = {value:.6} nats, target 0.015 ± 0.002; sweep took {}", ms(elapsed)),
    )
}

fn oracle_equivalence() -> Result<Verdict> {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in [2, 3, 4] {
        let basis = build_gellmann(d)?;
        let mut rng = rng(1000 + d as u64);
        for _ in 0..200 {
            let rho = random_state(d, &mut rng)?;
            let a = random_observable(d, &basis, &mut rng)?;
            let b = random_observable(d, &basis, &mut rng)?;
            let r = to_bloch(&rho, &basis)?;
            let pair = simplex_projector(&b).matrix() * simplex_projector(&a).matrix();
            let rb = BlochVector::new(d, pair * r.vector())?;
            let via_bloch = from_bloch(&rb, &basis)?;
            let direct = phi_map(&phi_map(&rho, &a)?, &b)?;
            worst = worst.max(max_modulus(&(via_bloch.matrix() - direct.matrix())));
        }
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-10 && elapsed < Duration::from_secs(30),
        format!("600 cases, max entrywise deviation {worst:.2e} (tol 1e-10), {}", ms(elapsed)),
    )
}

fn stinespring() -> Result<Verdict> {
    let mut worst = 0.0f64;
    for d in [2, 3] {
        let basis = build_gellmann(d)?;
        let mut rng = rng(2000 + d as u64);
        for _ in 0..100 {
            let rho = random_state(d, &mut rng)?;
            let a = random_observable(d, &basis, &mut rng)?;
            worst = worst.max(stinespring_check(&rho, &a)?);
        }
    }
    verdict(worst <= 1e-10, format!("200 cases, max deviation {worst:.2e} (tol 1e-10)"))
}

fn theorem_bound() -> Result<Verdict> {
    let mut rng = rng(3000);
    let mut worst = f64::NEG_INFINITY;
    let mut centred = 0;
    let mut failure = None;
    for trial in 0..500 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let basis = build_gellmann(d)?;
        let rho = random_state(d, &mut rng)?;
        let a = random_observable(d, &basis, &mut rng)?;
        let b = random_observable(d, &basis, &mut rng)?;
        let x = random_observable(d, &basis, &mut rng)?;
        let n = rng.random_range(1..=8);
        let rho_n = dephase_rounds(&rho, &a, &b, n)?;
        let r_n = to_bloch(&rho_n, &basis)?;
        let i = irreality(&x, &rho_n)?;
        let (excess, ok) = if r_n.norm() < 1e-12 {
            centred += 1;
            (i, i < 1e-10)
        } else {
            let rhs = ineq2_rhs(&r_n, &x, &simplex_projector(&x))?;
            (i - rhs, i <= rhs + 1e-10)
        };
        worst = worst.max(excess);
        if !ok && failure.is_none() {
            failure = Some(format!("; first failure at trial {trial} (d={d}, n={n})"));
        }
    }
    verdict(
        failure.is_none(),
        format!(
            "500 trials ({centred} at the centre), max(lhs - rhs) = {worst:.3e}{}",
            failure.unwrap_or_default()
        ),
    )
}

fn nmin_sufficiency() -> Result<Verdict> {
    let mut rng = rng(4000);
    let mut checked = 0;
    let mut skipped = 0;
    let mut largest_n = 0;
    let mut worst_ratio = 0.0f64;
    let mut failure = None;
    for trial in 0..100 {
        let d = if trial % 2 == 0 { 2 } else { 3 };
        let basis = build_gellmann(d)?;
        let rho = random_state(d, &mut rng)?;
        let a = random_observable(d, &basis, &mut rng)?;
        let b = random_observable(d, &basis, &mut rng)?;
        let x = random_observable(d, &basis, &mut rng)?;
        let r0 = to_bloch(&rho, &basis)?;
        for delta in [0.1, 0.01] {
            let report = nmin_report(&basis, &r0, &a, &b, &x, delta)?;
            if report.o_eps >= 1.0 - 1e-6 {
                skipped += 1;
                continue;
            }
            let n = (report.n_min.ceil() as usize).max(1);
            let achieved = irreality(&x, &dephase_rounds(&rho, &a, &b, n)?)?;
            checked += 1;
            largest_n = largest_n.max(n);
            worst_ratio = worst_ratio.max(achieved / delta);
            if achieved > delta && failure.is_none() {
                failure = Some(format!(
                    "; trial {trial} d={d} δ={delta}: I = {achieved:.3e} at n = {n}"
                ));
            }
        }
    }
    verdict(
        failure.is_none() && checked > 0,
        format!(
            "{checked} (trial, δ) checks, {skipped} skipped with O(ε) ≈ 1, largest n = {largest_n}, \
             max I/δ = {worst_ratio:.3e}{}",
            failure.unwrap_or_default()
        ),
    )
}

fn qubit_closed_form_criterion() -> Result<Verdict> {
    let basis = build_gellmann(2)?;
    let mut rng = rng(5000);
    let mut worst_r = 0.0f64;
    let mut worst_excess = f64::NEG_INFINITY;
    for _ in 0..200 {
        let r0 = random_ball_point(&mut rng);
        let a_hat = unit3(random_unit_vector(3, &mut rng));
        let b_hat = unit3(random_unit_vector(3, &mut rng));
        let x_hat = unit3(random_unit_vector(3, &mut rng));
        let (a, b, x) = (qubit_obs(&a_hat)?, qubit_obs(&b_hat)?, qubit_obs(&x_hat)?);
        let r0_vec = BlochVector::from_slice(2, r0.as_slice())?;
        let traj = monitor(&basis, &r0_vec, &a, &b, 10, &x)?;
        for step in &traj.steps {
            let expected = qubit_closed_form(&r0, &a_hat, &b_hat, step.n)?;
            worst_r = worst_r.max((step.r.vector() - expected.vector()).amax());
            let bound = qubit_irreality_bound(
                a_hat.dot(&r0).clamp(-1.0, 1.0),
                a_hat.dot(&b_hat).clamp(-1.0, 1.0),
                x_hat.dot(&b_hat).clamp(-1.0, 1.0),
                step.n,
            )?;
            worst_excess = worst_excess.max(step.irreality - bound);
        }
    }
    verdict(
        worst_r <= 1e-12 && worst_excess <= 1e-10,
        format!(
            "200 configs x 10 steps, max |r_n - closed form| = {worst_r:.2e} (tol 1e-12), \
             max(I - bound) = {worst_excess:.2e} (tol 1e-10)"
        ),
    )
}

fn mub_one_shot() -> Result<Verdict> {
    let mut rng = rng(6000);
    let mut worst_norm = 0.0f64;
    let mut worst_i = 0.0f64;
    let mut pairs = 0;

    let z = qubit_obs(&Vector3::z())?;
    let xq = qubit_obs(&Vector3::x())?;
    let mut cases: Vec<(usize, ProjectiveObservable, ProjectiveObservable)> = vec![(2, z, xq)];
    let basis3 = build_gellmann(3)?;
    let f = fourier_unitary(3);
    for k in 0..5 {
        let u = if k == 0 { CMatrix::identity(3, 3) } else { haar_unitary(3, &mut rng) };
        let a = ProjectiveObservable::from_eigenbasis(&[1.0, 0.0, -1.0], &u, &basis3)?;
        let b = ProjectiveObservable::from_eigenbasis(&[1.0, 0.0, -1.0], &(&u * &f), &basis3)?;
        cases.push((3, a, b));
    }

    for (d, a, b) in &cases {
        let basis = build_gellmann(*d)?;
        for _ in 0..10 {
            pairs += 1;
            let rho = if pairs % 2 == 0 {
                random_pure_state(*d, &mut rng)?
            } else {
                random_state(*d, &mut rng)?
            };
            let rho_1 = dephase_rounds(&rho, a, b, 1)?;
            worst_norm = worst_norm.max(to_bloch(&rho_1, &basis)?.norm());
            for _ in 0..10 {
                let x = random_observable(*d, &basis, &mut rng)?;
                worst_i = worst_i.max(irreality(&x, &rho_1)?.abs());
            }
        }
    }
    verdict(
        worst_norm < 1e-12 && worst_i < 1e-10,
        format!(
            "{} pairs x {pairs} states: max ||r_1|| = {worst_norm:.2e}, max |I| over 10 X each = {worst_i:.2e}",
            cases.len()
        ),
    )
}

fn inequality_suites() -> Result<Verdict> {
    let mut rng = rng(7000);
    let mut notes = Vec::new();
    let mut all_ok = true;

    // Entropy continuity on random pairs, half of them close together.
    let mut fannes_worst = f64::NEG_INFINITY;
    for k in 0..1000 {
        let d = 2 + k % 3;
        let rho = random_state(d, &mut rng)?;
        let sigma = if k % 2 == 0 {
            random_state(d, &mut rng)?
        } else {
            let t: f64 = rng.random::<f64>() * 0.1;
            let other = random_state(d, &mut rng)?;
            let mix = rho.matrix() * num_complex::Complex64::new(1.0 - t, 0.0)
                + other.matrix() * num_complex::Complex64::new(t, 0.0);
            DensityMatrix::new(mix)?
        };
        let t = 0.5 * schatten_norm(&(rho.matrix() - sigma.matrix()), 1)?;
        let lhs = (von_neumann_entropy(&rho)? - von_neumann_entropy(&sigma)?).abs();
        let rhs = t * ((d - 1) as f64).ln() + binary_entropy(t.min(1.0))?;
        fannes_worst = fannes_worst.max(lhs - rhs);
    }
    let ok = fannes_worst <= 1e-10;
    all_ok &= ok;
    notes.push(format!("continuity {} (max excess {fannes_worst:.2e})", tag(ok)));

    let mut holder_worst = f64::NEG_INFINITY;
    for k in 0..1000 {
        let d = 2 + k % 4;
        let diff = random_state(d, &mut rng)?.into_matrix() - random_state(d, &mut rng)?.into_matrix();
        let lhs = schatten_norm(&diff, 1)?;
        let rhs = (d as f64).sqrt() * schatten_norm(&diff, 2)?;
        holder_worst = holder_worst.max(lhs - rhs);
    }
    let ok = holder_worst <= 1e-12;
    all_ok &= ok;
    notes.push(format!("norm comparison {} (max excess {holder_worst:.2e})", tag(ok)));

    let mut hbin_worst = f64::NEG_INFINITY;
    for k in 0..=100_000 {
        let t = k as f64 / 100_000.0;
        hbin_worst = hbin_worst.max(binary_entropy(t)? - (2.0 * t).sqrt());
    }
    let ok = hbin_worst <= 0.0;
    all_ok &= ok;
    notes.push(format!("H(T) <= sqrt(2T) {} (max excess {hbin_worst:.2e})", tag(ok)));

    let (lhs, rhs) = hbin_bound_check(1.0, 0.0)?;
    let tight = (lhs - rhs).abs() <= 1e-12 && (lhs - LN_2).abs() <= 1e-12;
    let mut violations = Vec::new();
    let mut qubit_worst = f64::NEG_INFINITY;
    for i in 0..=50 {
        for j in 0..=100 {
            let (lambda, mu) = (i as f64 / 50.0, -1.0 + j as f64 / 50.0);
            let (lhs, rhs) = hbin_bound_check(lambda, mu)?;
            qubit_worst = qubit_worst.max(lhs - rhs);
            if lhs > rhs + 1e-12 {
                violations.push(format!("(λ={lambda}, μ={mu:+.2}) by {:.2e}", lhs - rhs));
            }
        }
    }
    for _ in 0..1000 {
        let (lambda, mu) = (rng.random::<f64>(), rng.random_range(-1.0..=1.0));
        let (lhs, rhs) = hbin_bound_check(lambda, mu)?;
        qubit_worst = qubit_worst.max(lhs - rhs);
        if lhs > rhs + 1e-12 {
            violations.push(format!("random (λ={lambda:.4}, μ={mu:+.4}) by {:.2e}", lhs - rhs));
        }
    }
    let ok = tight && violations.is_empty();
    all_ok &= ok;
    notes.push(format!(
        "qubit H_bin bound {} (tight at μ=0, λ=1: {tight}; max excess {qubit_worst:.2e}; violations: {})",
        tag(ok),
        if violations.is_empty() { "none".to_string() } else { violations.join(", ") }
    ));

    verdict(all_ok, notes.join("; "))
}

fn sweep_shape() -> Result<Verdict> {
    let grid = qutrit_sweep(&default_phi_grid(64)?, 10)?;
    let (np, nn) = (grid.phi_values.len(), grid.n_values.len());
    let slack = 1e-12;

    let mut n_worst = 0.0f64;
    for i in 1..np {
        for j in 1..nn {
            n_worst = n_worst.max(grid.value(i, j) - grid.value(i, j - 1));
        }
    }
    let n_ok = n_worst <= slack;

    let mut phi_worst = 0.0f64;
    let mut phi_where = None;
    let mut phi_violations = 0;
    for j in 0..nn {
        for i in 1..np {
            let rise = grid.value(i, j) - grid.value(i - 1, j);
            if rise > slack {
                phi_violations += 1;
            }
            if rise > phi_worst {
                phi_worst = rise;
                phi_where = Some((grid.phi_values[i], grid.n_values[j]));
            }
        }
    }
    let phi_ok = phi_violations == 0;

    let column_worst = (0..nn)
        .map(|j| (grid.value(0, j) - 3f64.ln()).abs())
        .fold(0.0, f64::max);
    let column_ok = column_worst <= 1e-10;

    let phi_note = match phi_where {
        Some((phi, n)) if !phi_ok => format!(
            "{phi_violations} rising steps, largest {phi_worst:.2e} at φ={phi:.4}, n={n}"
        ),
        _ => "no rising step".into(),
    };
    verdict(
        n_ok && phi_ok && column_ok,
        format!(
            "nonincreasing in n {} (max rise {n_worst:.2e}); nonincreasing in φ {} ({phi_note}); \
             φ=0 column = ln 3 {} (max deviation {column_worst:.2e})",
            tag(n_ok),
            tag(phi_ok),
            tag(column_ok)
        ),
    )
}

fn tag(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAILS"
    }
}

fn main() -> ExitCode {
    type Criterion = fn() -> Result<Verdict>;
    let criteria: [(&str, Criterion); 9] = [
        ("reference value at φ = π/2, n = 1", reference_cell),
        ("Bloch projector vs dephasing oracle", oracle_equivalence),
        ("Stinespring dilation identity", stinespring),
        ("continuity bound on irreality", theorem_bound),
        ("n_min sufficiency", nmin_sufficiency),
        ("qubit closed form and bound", qubit_closed_form_criterion),
        ("MUB one-shot classicality", mub_one_shot),
        ("inequality suites", inequality_suites),
        ("qutrit sweep shape", sweep_shape),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let (ok, detail) = match check() {
            Ok(v) => (v.passed, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} {name}: {detail} [{}]",
            if ok { "PASS" } else { "FAIL" },
            ms(start.elapsed())
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
