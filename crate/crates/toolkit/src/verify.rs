//! Randomised verification of the library's invariants.
//!
//! Every trial draws from its own ChaCha stream, keyed by the master seed,
//! the suite index and the trial index. Results therefore do not depend on
//! how rayon schedules the trials.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use qse_core::channels::{
    affine_channel, amplitude_damping, apply_local_b, apply_local_b_affine, classify, compose,
    dephasing, depolarizing, ChannelClass, QubitChannel,
};
use qse_core::correlations::{
    concurrence, discord_b_numeric, discord_x_state, mutual_information, trace_distance,
    DiscordOptions,
};
use qse_core::decomposition::{build_preparation, needle_decompose};
use qse_core::families::damped_bell_diagonal;
use qse_core::linalg::{eigvalsh4, max_abs_diff, pauli, CMat2};
use qse_core::nalgebra::{Matrix3, Vector3};
use qse_core::pauli::{density_from_theta, theta_from_density};
use qse_core::random;
use qse_core::steering::{ellipsoid_size, is_radial_segment, steered_state, steering_ellipsoid};
use qse_core::sweep::linear_grid;
use qse_core::{BlochVector, Side, TwoQubitState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    pub trials: usize,
    pub seed: u64,
    /// Added to every post-channel length in the monotonicity suite. Only
    /// useful to show that the harness can fail.
    pub length_inflation: f64,
}

impl VerifyOptions {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            length_inflation: 0.0,
        }
    }
}

/// Outcome of one trial: `excess` is how far the checked quantity went past
/// its bound (non-positive when the trial passes). Yes/no checks count as 1
/// when they fail and do not contribute otherwise.
#[derive(Debug, Clone, Copy)]
struct Trial {
    excess: f64,
}

impl Trial {
    fn bound(value: f64, limit: f64) -> Self {
        Self {
            excess: value - limit,
        }
    }

    fn holds(cond: bool) -> Self {
        Self {
            excess: if cond { f64::NEG_INFINITY } else { 1.0 },
        }
    }

    fn and(self, other: Trial) -> Self {
        Self {
            excess: self.excess.max(other.excess),
        }
    }

    fn passed(&self) -> bool {
        self.excess <= 0.0
    }
}

type SuiteFn = fn(&mut ChaCha8Rng, &VerifyOptions) -> Trial;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub trials: usize,
    pub failures: usize,
    /// Largest excess over the bound (≤ 0 when every trial passed, −∞ for
    /// suites made only of yes/no checks that all held).
    pub worst_excess: f64,
    pub worst_trial: usize,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteReport::passed)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.suites {
            let worst = if s.worst_excess.is_finite() {
                format!("{:+.3e} (trial {})", s.worst_excess, s.worst_trial)
            } else {
                "n/a".to_owned()
            };
            writeln!(
                f,
                "{:<6} {:<34} {:>5}/{:<5} worst excess {worst}",
                if s.passed() { "PASS" } else { "FAIL" },
                s.name,
                s.trials - s.failures,
                s.trials,
            )?;
        }
        let failed = self.suites.iter().filter(|s| !s.passed()).count();
        write!(
            f,
            "seed {}: {} suites, {} failed",
            self.seed,
            self.suites.len(),
            failed
        )
    }
}

const SUITES: &[(&str, SuiteFn)] = &[
    ("theta_round_trip", theta_round_trip),
    ("theta_borders_and_range", theta_borders_and_range),
    ("trace_distance_contraction", trace_distance_contraction),
    ("kraus_affine_agreement", kraus_affine_agreement),
    ("amplitude_damping_choi_psd", amplitude_damping_choi_psd),
    ("classification_vs_discord", classification_vs_discord),
    ("slocc_invariance", slocc_invariance),
    ("dimension_equals_rank_minus_one", dimension_equals_rank_minus_one),
    ("marginal_inside_ellipsoid", marginal_inside_ellipsoid),
    ("steered_states_inside_ellipsoid", steered_states_inside_ellipsoid),
    ("length_monotonicity", length_monotonicity),
    ("zero_discord_iff_radial", zero_discord_iff_radial),
    ("x_state_vs_numeric_discord", x_state_vs_numeric_discord),
    ("discord_local_unitary_invariance", discord_local_unitary_invariance),
    ("mutual_information_data_processing", mutual_information_data_processing),
    ("concurrence_monotone_under_damping", concurrence_monotone_under_damping),
    ("needle_preparation_round_trip", needle_preparation_round_trip),
    ("discordant_needles_non_radial", discordant_needles_non_radial),
];

pub fn suite_names() -> impl Iterator<Item = &'static str> {
    SUITES.iter().map(|(n, _)| *n)
}

fn trial_rng(seed: u64, suite: usize, trial: usize) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(((suite as u64) << 32) | trial as u64);
    r
}

/// Runs every suite (or only those whose name contains `filter`).
pub fn run_verify(opts: &VerifyOptions, filter: Option<&str>) -> VerifyReport {
    let suites = SUITES
        .iter()
        .enumerate()
        .filter(|(_, (name, _))| filter.is_none_or(|f| name.contains(f)))
        .map(|(idx, (name, check))| {
            let results: Vec<Trial> = (0..opts.trials)
                .into_par_iter()
                .map(|t| check(&mut trial_rng(opts.seed, idx, t), opts))
                .collect();
            let (worst_trial, worst) = results
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, r)| {
                    if r.excess > acc.1 {
                        (i, r.excess)
                    } else {
                        acc
                    }
                });
            SuiteReport {
                name,
                trials: opts.trials,
                failures: results.iter().filter(|r| !r.passed()).count(),
                worst_excess: worst,
                worst_trial,
            }
        })
        .collect();
    VerifyReport {
        seed: opts.seed,
        suites,
    }
}

fn random_state(r: &mut ChaCha8Rng) -> TwoQubitState {
    match r.random_range(0..4) {
        0 => random::density(r),
        1 => random::needle_state(r),
        2 => random::x_state(r),
        _ => random::bell_diagonal(r),
    }
}

fn theta_round_trip(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let th = theta_from_density(s.density()).expect("Hermitian input");
    let back = density_from_theta(&th).expect("valid state");
    Trial::bound(max_abs_diff(back.density(), s.density()), 1e-12)
        .and(Trial::holds(s.theta().get(0, 0) == 1.0))
}

fn theta_borders_and_range(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let th = s.theta();
    let border = (s.reduced(Side::A).bloch().0 - th.a())
        .norm()
        .max((s.reduced(Side::B).bloch().0 - th.b()).norm());
    Trial::bound(border, 1e-14).and(Trial::bound(th.matrix().amax(), 1.0 + 1e-12))
}

fn trace_distance_contraction(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let (s1, s2) = (random::density(r), random::density(r));
    let ch = random::channel(r);
    let before = trace_distance(s1.density(), s2.density());
    let after = trace_distance(
        apply_local_b(&s1, &ch).density(),
        apply_local_b(&s2, &ch).density(),
    );
    Trial::bound(after, before + 1e-10)
}

fn kraus_affine_agreement(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let ch = random::channel(r);
    match apply_local_b_affine(&s, &ch) {
        Ok(affine) => Trial::bound(max_abs_diff(apply_local_b(&s, &ch).density(), affine.density()), 1e-10),
        Err(_) => Trial::holds(false),
    }
}

fn amplitude_damping_choi_psd(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let ch = amplitude_damping(r.random::<f64>()).expect("p in range");
    Trial::bound(-eigvalsh4(&ch.choi())[0], 1e-10)
}

/// A channel of each class: a random isometry, a unital map, or a
/// measure-and-prepare map along a random axis.
fn classified_channel(r: &mut ChaCha8Rng) -> QubitChannel {
    let rotate = |ch: QubitChannel, u: CMat2| {
        compose(&ch, &QubitChannel::unitary(u).expect("unitary"))
    };
    match r.random_range(0..4) {
        0 => random::channel(r),
        1 => amplitude_damping(r.random_range(0.05..0.95)).expect("p in range"),
        2 => {
            let base = if r.random::<bool>() {
                depolarizing(r.random::<f64>()).expect("p in range")
            } else {
                dephasing(r.random::<f64>()).expect("p in range")
            };
            rotate(base, random::unitary2(r))
        }
        _ => {
            let s = r.random_range(-1.0..1.0f64);
            let tau = (1.0 - s.abs()) * r.random_range(-1.0..1.0);
            let m = Matrix3::from_diagonal(&Vector3::new(0.0, 0.0, s));
            let base = affine_channel(&m, &Vector3::new(0.0, 0.0, tau)).expect("classical channel");
            rotate(base, random::unitary2(r))
        }
    }
}

fn classification_vs_discord(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let ch = classified_channel(r);
    let opts = DiscordOptions {
        grid_theta: 24,
        grid_phi: 48,
        ..DiscordOptions::default()
    };
    let largest = (0..200)
        .map(|_| {
            let out = apply_local_b(&random::quantum_classical(r), &ch);
            discord_b_numeric(&out, &opts).discord
        })
        .fold(0.0, f64::max);
    match classify(&ch) {
        ChannelClass::Unital | ChannelClass::CompletelyDecohering => Trial::bound(largest, 1e-6),
        ChannelClass::DiscordCreating => Trial::bound(1e-4, largest),
    }
}

fn slocc_invariance(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random::density(r);
    let m = random::slocc(r);
    let moved = s.local_operation(&pauli(0), &m).expect("invertible operator");
    let (e, f) = (steering_ellipsoid(&s, Side::A), steering_ellipsoid(&moved, Side::A));
    let dev = (e.center.0 - f.center.0)
        .norm()
        .max((e.semiaxes - f.semiaxes).amax())
        .max((e.shape_matrix() - f.shape_matrix()).amax());
    Trial::bound(dev, 1e-8).and(Trial::holds(e.dim == f.dim))
}

fn dimension_equals_rank_minus_one(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let rank = s.theta().rank(1e-9);
    Trial::holds(
        steering_ellipsoid(&s, Side::A).dim + 1 == rank
            && steering_ellipsoid(&s, Side::B).dim + 1 == rank,
    )
}

fn marginal_inside_ellipsoid(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    Trial::holds(steering_ellipsoid(&s, Side::A).contains(&s.reduced(Side::A).bloch().0, 1e-9))
}

fn steered_states_inside_ellipsoid(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let mut ok = true;
    for side in [Side::A, Side::B] {
        let e = steering_ellipsoid(&s, side);
        for _ in 0..16 {
            let x = BlochVector(random::unit_vector(r));
            if let Ok(out) = steered_state(&s, &x, side) {
                ok &= e.contains(&out.bloch.0, 1e-9);
            }
        }
    }
    Trial::holds(ok)
}

fn length_monotonicity(r: &mut ChaCha8Rng, opts: &VerifyOptions) -> Trial {
    let s = if r.random::<bool>() {
        random::needle_family_state(r, false)
    } else {
        random::bell_diagonal(r)
    };
    let out = apply_local_b(&s, &random::channel(r));
    [Side::A, Side::B]
        .into_iter()
        .map(|side| {
            let before = ellipsoid_size(&steering_ellipsoid(&s, side)).length;
            let after = ellipsoid_size(&steering_ellipsoid(&out, side)).length + opts.length_inflation;
            Trial::bound(after, before + 1e-9)
        })
        .fold(Trial { excess: f64::NEG_INFINITY }, Trial::and)
}

fn zero_discord_iff_radial(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let radial = r.random::<bool>();
    let s = random::needle_family_state(r, radial);
    let is_radial = is_radial_segment(&steering_ellipsoid(&s, Side::B), 1e-8);
    let zero = discord_b_numeric(&s, &DiscordOptions::default()).discord < 1e-6;
    Trial::holds(zero == is_radial)
}

fn x_state_vs_numeric_discord(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random::x_state(r);
    let numeric = discord_b_numeric(&s, &DiscordOptions::default()).discord;
    match discord_x_state(&s) {
        Ok(analytic) => Trial::bound((numeric - analytic.discord).abs(), 1e-4),
        Err(_) => Trial::holds(false),
    }
}

fn discord_local_unitary_invariance(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let moved = s
        .local_operation(&random::unitary2(r), &random::unitary2(r))
        .expect("unitaries");
    let opts = DiscordOptions::default();
    let d0 = discord_b_numeric(&s, &opts).discord;
    let d1 = discord_b_numeric(&moved, &opts).discord;
    Trial::bound((d0 - d1).abs(), 1e-8)
}

fn mutual_information_data_processing(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random_state(r);
    let out = apply_local_b(&s, &random::channel(r));
    Trial::bound(mutual_information(&out), mutual_information(&s) + 1e-9)
}

fn concurrence_monotone_under_damping(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let c = random::bell_diagonal_c(r);
    let cs: Vec<f64> = linear_grid(0.0, 1.0, 100)
        .into_iter()
        .map(|p| concurrence(&damped_bell_diagonal(c, p).expect("valid c")))
        .collect();
    cs.windows(2)
        .map(|w| Trial::bound(w[1], w[0] + 1e-9))
        .fold(Trial { excess: f64::NEG_INFINITY }, Trial::and)
}

fn needle_preparation_round_trip(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random::needle_state(r);
    let dec = match needle_decompose(&s) {
        Ok(d) => d,
        Err(_) => return Trial::holds(false),
    };
    let recipe = build_preparation(&dec);
    let tp = recipe
        .channel
        .kraus()
        .iter()
        .fold(CMat2::zeros(), |acc, k| acc + k.adjoint() * k);
    Trial::bound(recipe.residual(&s), 1e-9)
        .and(Trial::bound(max_abs_diff(&tp, &pauli(0)), 1e-10))
        .and(Trial::holds(
            steering_ellipsoid(&s, Side::A).dim == 1 && steering_ellipsoid(&s, Side::B).dim == 1,
        ))
}

fn discordant_needles_non_radial(r: &mut ChaCha8Rng, _: &VerifyOptions) -> Trial {
    let s = random::needle_state(r);
    let discordant = discord_b_numeric(&s, &DiscordOptions::default()).discord > 1e-4;
    Trial::holds(!discordant || !is_radial_segment(&steering_ellipsoid(&s, Side::B), 1e-8))
}
