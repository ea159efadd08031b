//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process exits non-zero if any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qse_core::channels::{apply_local_b, apply_local_b_affine};
use qse_core::correlations::{concurrence, discord_b_numeric, discord_x_state, DiscordOptions};
use qse_core::decomposition::{build_preparation, needle_decompose};
use qse_core::families::{bell_diagonal_spectrum, damped_bell_diagonal, is_physical_bell_diagonal};
use qse_core::linalg::{max_abs_diff, pauli, CMat2};
use qse_core::nalgebra::{Matrix3, Vector3};
use qse_core::random;
use qse_core::steering::{contains_origin, ellipsoid_size, is_radial_segment, steering_ellipsoid, Ellipsoid};
use qse_core::sweep::{linear_grid, ORIGIN_TOL};
use qse_core::Side;
use qse_toolkit::demo::needle_demo;
use qse_toolkit::formats::StateSpec;
use qse_toolkit::scan::{argmax_delta_d, run_c3_scan, run_p_scan, ChannelFamily, PGrid, ScanConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within_time(elapsed: Duration, budget: Duration) -> Result<(), String> {
    if elapsed <= budget {
        Ok(())
    } else {
        Err(format!("took {elapsed:.2?}, budget {budget:?}"))
    }
}

fn ellipsoid_deviation(e: &Ellipsoid, center: Vector3<f64>, semiaxes: [f64; 3]) -> f64 {
    let shape = Matrix3::from_diagonal(&Vector3::from(semiaxes.map(|s| s * s)));
    (e.center.0 - center).amax().max((e.shape_matrix() - shape).amax())
}

fn closed_form_ellipsoids() -> Outcome {
    let mut r = rng(1);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let c = random::bell_diagonal_c(&mut r);
        let p = r.random::<f64>();
        let s = damped_bell_diagonal(c, p).map_err(|e| e.to_string())?;
        let [c1, c2, c3] = c.map(f64::abs);
        let e_b = steering_ellipsoid(&s, Side::B);
        let q = (1.0 - p).sqrt();
        worst = worst.max(ellipsoid_deviation(&e_b, Vector3::new(0.0, 0.0, p), [q * c1, q * c2, (1.0 - p) * c3]));
        let e_a = steering_ellipsoid(&s, Side::A);
        let k = (1.0 + p).sqrt();
        worst = worst.max(ellipsoid_deviation(
            &e_a,
            Vector3::new(0.0, 0.0, -p * c[2] / (1.0 + p)),
            [c1 / k, c2 / k, c3 / (1.0 + p)],
        ));
    }
    within_time(start.elapsed(), Duration::from_secs(1))?;
    check(worst <= 1e-9, format!("50 states, worst deviation {worst:.2e}, {:.2?}", start.elapsed()))
}

fn origin_threshold() -> Outcome {
    let grid = linear_grid(0.0, 1.0, 1001);
    let step = grid[1] - grid[0];
    let mut lines = Vec::new();
    let mut ok = true;
    for c3 in [0.1, 0.5, 0.9] {
        let threshold = c3 / (1.0 + c3);
        let inside: Vec<bool> = grid
            .iter()
            .map(|&p| {
                let s = damped_bell_diagonal([0.3, -0.2, c3], p).expect("physical");
                contains_origin(&steering_ellipsoid(&s, Side::B), ORIGIN_TOL)
            })
            .collect();
        // a single flip, from inside to outside, within one grid step of the threshold
        let flips: Vec<usize> = (1..grid.len()).filter(|&i| inside[i] != inside[i - 1]).collect();
        let good = inside[0]
            && flips.len() == 1
            && !inside[flips[0]]
            && grid[flips[0] - 1] <= threshold + step
            && grid[flips[0]] >= threshold - step;
        ok &= good;
        lines.push(format!(
            "c3={c3}: threshold {threshold:.5}, flip at {}",
            flips.first().map_or("none".into(), |&i| format!("{:.3}", grid[i]))
        ));
    }
    check(ok, lines.join("; "))
}

fn theorem_both_directions() -> Outcome {
    let start = Instant::now();
    let opts = DiscordOptions::default();
    let mut r = rng(3);
    let (mut discordant, mut bad_forward) = (0, 0);
    for _ in 0..500 {
        let s = random::needle_state(&mut r);
        if discord_b_numeric(&s, &opts).discord > 1e-4 {
            discordant += 1;
            if is_radial_segment(&steering_ellipsoid(&s, Side::B), 1e-8) {
                bad_forward += 1;
            }
        }
    }
    let (mut bad_reverse, mut worst_qc): (usize, f64) = (0, 0.0);
    for _ in 0..500 {
        let s = random::quantum_classical(&mut r);
        let d = discord_b_numeric(&s, &opts).discord;
        worst_qc = worst_qc.max(d);
        if d >= 1e-6 || !is_radial_segment(&steering_ellipsoid(&s, Side::B), 1e-8) {
            bad_reverse += 1;
        }
    }
    within_time(start.elapsed(), Duration::from_secs(300))?;
    check(
        bad_forward == 0 && bad_reverse == 0,
        format!(
            "forward: {discordant}/500 discordant, {bad_forward} radial; reverse: {bad_reverse}/500 violations, max discord {worst_qc:.2e}; {:.2?}",
            start.elapsed()
        ),
    )
}

fn constructive_preparation() -> Outcome {
    let mut r = rng(4);
    let (mut worst_residual, mut worst_tp): (f64, f64) = (0.0, 0.0);
    let mut failures = 0;
    for _ in 0..500 {
        let s = random::needle_state(&mut r);
        match needle_decompose(&s) {
            Ok(dec) => {
                let recipe = build_preparation(&dec);
                worst_residual = worst_residual.max(recipe.residual(&s));
                let tp = recipe
                    .channel
                    .kraus()
                    .iter()
                    .fold(CMat2::zeros(), |acc, k| acc + k.adjoint() * k);
                worst_tp = worst_tp.max(max_abs_diff(&tp, &pauli(0)));
            }
            Err(_) => failures += 1,
        }
    }
    check(
        failures == 0 && worst_residual <= 1e-9 && worst_tp <= 1e-10,
        format!("500 needles, {failures} undecomposable, worst residual {worst_residual:.2e}, worst TP defect {worst_tp:.2e}"),
    )
}

fn length_monotonicity() -> Outcome {
    let mut r = rng(5);
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for k in 0..2000 {
        let s = if k < 1000 {
            random::needle_state(&mut r)
        } else {
            random::bell_diagonal(&mut r)
        };
        let out = apply_local_b(&s, &random::channel(&mut r));
        for side in [Side::A, Side::B] {
            let before = ellipsoid_size(&steering_ellipsoid(&s, side)).length;
            let after = ellipsoid_size(&steering_ellipsoid(&out, side)).length;
            worst = worst.max(after - before);
            if after > before + 1e-9 {
                violations += 1;
            }
        }
    }
    check(violations == 0, format!("2000 pairs, {violations} violations, max growth {worst:+.2e}"))
}

fn ad_scan(c: [f64; 3]) -> Result<Vec<(f64, f64)>, String> {
    let cfg = ScanConfig {
        state: StateSpec::BellDiag { c },
        channel: ChannelFamily::Ad,
        grid: PGrid::default(),
        seed: 0,
    };
    let rows = run_p_scan(&cfg).map_err(|e| e.to_string())?;
    Ok(rows.iter().map(|r| (r.p, r.discord)).collect())
}

fn damping_curves() -> Outcome {
    let created = ad_scan([0.7, 0.0, 0.0])?;
    let d0 = created[0].1;
    let band: Vec<(f64, f64)> = created
        .iter()
        .copied()
        .filter(|&(p, _)| (0.05 - 1e-12..=0.95 + 1e-12).contains(&p))
        .collect();
    let low: Vec<(f64, f64)> = band.iter().copied().filter(|&(_, d)| d <= 1e-3).collect();
    let min_band = band.iter().map(|&(_, d)| d).fold(f64::INFINITY, f64::min);

    let decaying = ad_scan([0.7, -0.3, 0.0])?;
    let rises = decaying.windows(2).filter(|w| w[1].1 > w[0].1 + 1e-6).count();

    let mut detail = format!(
        "c=(0.7,0,0): D(0)={d0:.1e}, min on [0.05,0.95] {min_band:.4e}, {} of {} points <= 1e-3",
        low.len(),
        band.len()
    );
    if let Some(&(p, d)) = low.first() {
        let (p_last, d_last) = low[low.len() - 1];
        detail += &format!(" (first p={p} D={d:.4e}, last p={p_last} D={d_last:.4e})");
    }
    detail += &format!("; c=(0.7,-0.3,0): {rises} increases");
    check(d0 <= 1e-9 && low.is_empty() && rises == 0, detail)
}

fn valley_and_concurrence_anchors() -> Outcome {
    let rows = run_c3_scan(0.9, -0.1, &linear_grid(0.0, 0.2, 21), ChannelFamily::Ad, &PGrid::default(), 0)
        .map_err(|e| e.to_string())?;
    let (c3, summary) = argmax_delta_d(&rows).ok_or("no physical c3 on the grid")?;
    let c_early = concurrence(&damped_bell_diagonal([0.9, -0.1, 0.09], 0.01).map_err(|e| e.to_string())?);
    let c_zero = concurrence(&damped_bell_diagonal([0.9, -0.1, 0.09], 0.0).map_err(|e| e.to_string())?);
    // concurrence of a Bell-diagonal state: max(0, 2 λ_max − 1)
    let lambda = bell_diagonal_spectrum([0.9, -0.1, 0.09]);
    let oracle = (2.0 * lambda.iter().copied().fold(f64::NEG_INFINITY, f64::max) - 1.0).max(0.0);
    check(
        (c3 - 0.09).abs() <= 0.02 && (c_early - 0.04).abs() <= 0.005 && (c_zero - oracle).abs() <= 1e-6 && (oracle - 0.045).abs() <= 1e-6,
        format!(
            "argmax c3 = {c3:.2} (delta D {:.3e}, peak at p = {:.3}; reported only, the quoted peak is 0.93); C(p=0.01) = {c_early:.5}; C(p=0) = {c_zero:.7} vs oracle {oracle:.7}",
            summary.delta_d, summary.p_peak
        ),
    )
}

fn needle_example() -> Outcome {
    let d = needle_demo(0.1).map_err(|e| e.to_string())?;
    check(
        (d.l1 - 1.272_792_206_135_785_6).abs() <= 1e-9
            && (d.l2 - std::f64::consts::SQRT_2).abs() <= 1e-9
            && d.forward_impossible(),
        format!("l1 = {:.12}, l2 = {:.12}, rho1 -> rho2 excluded: {}", d.l1, d.l2, d.forward_impossible()),
    )
}

fn oracle_agreement() -> Outcome {
    let opts = DiscordOptions::default();
    let mut r = rng(9);
    let mut worst_discord: f64 = 0.0;
    for _ in 0..500 {
        let s = random::x_state(&mut r);
        let analytic = discord_x_state(&s).map_err(|e| e.to_string())?.discord;
        worst_discord = worst_discord.max((discord_b_numeric(&s, &opts).discord - analytic).abs());
    }
    let mut worst_channel: f64 = 0.0;
    for _ in 0..1000 {
        let s = random::density(&mut r);
        let ch = random::channel(&mut r);
        let affine = apply_local_b_affine(&s, &ch).map_err(|e| e.to_string())?;
        worst_channel = worst_channel.max(max_abs_diff(apply_local_b(&s, &ch).density(), affine.density()));
    }
    check(
        worst_discord <= 1e-4 && worst_channel <= 1e-10,
        format!("X-state discord gap {worst_discord:.2e} (500), Kraus vs affine {worst_channel:.2e} (1000)"),
    )
}

fn no_sudden_death() -> Outcome {
    let mut tested = 0;
    let mut problems = Vec::new();
    let grid = linear_grid(0.0, 1.0, 201);
    for a in [0.2, 0.5, 0.8, 1.0] {
        for c in [[a, -a, 1.0], [a, a, -1.0]] {
            if !is_physical_bell_diagonal(c) {
                continue;
            }
            tested += 1;
            for &p in grid.iter().filter(|&&p| p < 1.0) {
                let conc = concurrence(&damped_bell_diagonal(c, p).map_err(|e| e.to_string())?);
                if conc <= 0.0 {
                    problems.push(format!("{c:?}: C=0 at p={p}"));
                    break;
                }
            }
            let vol = |p| {
                damped_bell_diagonal(c, p).map(|s| ellipsoid_size(&steering_ellipsoid(&s, Side::A)).volume)
            };
            let (late, end) = (vol(1.0 - 1e-6).map_err(|e| e.to_string())?, vol(1.0).map_err(|e| e.to_string())?);
            if !(late > 0.0 && end == 0.0) {
                problems.push(format!("{c:?}: vol(1-1e-6)={late:.2e}, vol(1)={end:.2e}"));
            }
        }
    }
    check(
        tested >= 4 && problems.is_empty(),
        format!("{tested} states with |c3| = 1; {}", if problems.is_empty() { "no issues".into() } else { problems.join("; ") }),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("ellipsoid closed forms under amplitude damping", closed_form_ellipsoids),
        ("origin leaves E_B at p = c3/(1+c3)", origin_threshold),
        ("discord iff non-radial needle, both directions", theorem_both_directions),
        ("constructive preparation of needle states", constructive_preparation),
        ("ellipsoid lengths never grow under channels on B", length_monotonicity),
        ("discord curves under amplitude damping", damping_curves),
        ("valley-to-peak argmax and concurrence anchors", valley_and_concurrence_anchors),
        ("needle length example", needle_example),
        ("analytic and numeric oracles agree", oracle_agreement),
        ("no finite-time loss of entanglement for |c3| = 1", no_sudden_death),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let tag = if outcome.is_ok() { "PASS" } else { "FAIL" };
        let detail = outcome.unwrap_or_else(|e| {
            failed += 1;
            e
        });
        println!("{tag} criterion {:>2} ({name}) [{:.2?}]: {detail}", i + 1, start.elapsed());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
