//! Entropic and entanglement measures. All entropies are in bits.
//!
//! B-side discord is `D = S(ρ_B) − S(ρ_AB) + min_n Σ± p± S(ρ_A^±)`, minimised
//! over rank-1 projective measurements `{½(I ± n·σ)}` on B. The post-measurement
//! states of A are the steered states `(a ± T n)/(1 ± b·n)`, so each
//! evaluation only needs the Θ blocks.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{Matrix2, Matrix3, Vector2, Vector3};

use crate::linalg::{self, eigvalsh2, kron, pauli, qubit_entropy_from_radius, xlog2x, CMat2, CMat4};
use crate::optimize::{golden_section, nelder_mead, NelderMeadOptions};
use crate::pauli::{BlochVector, Side, TwoQubitState};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Hermitian operators whose spectrum the measures below are built on.
pub trait HermitianOperator {
    /// Eigenvalues, ascending.
    fn eigenvalues(&self) -> Vec<f64>;
    /// Spectrum of `self − other`.
    fn difference_eigenvalues(&self, other: &Self) -> Vec<f64>;
}

impl HermitianOperator for CMat2 {
    fn eigenvalues(&self) -> Vec<f64> {
        eigvalsh2(self).to_vec()
    }

    fn difference_eigenvalues(&self, other: &Self) -> Vec<f64> {
        eigvalsh2(&(self - other)).to_vec()
    }
}

impl HermitianOperator for CMat4 {
    fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh4(self).iter().copied().collect()
    }

    fn difference_eigenvalues(&self, other: &Self) -> Vec<f64> {
        linalg::eigvalsh4(&(self - other)).iter().copied().collect()
    }
}

impl HermitianOperator for crate::SingleQubitState {
    fn eigenvalues(&self) -> Vec<f64> {
        HermitianOperator::eigenvalues(self.density())
    }

    fn difference_eigenvalues(&self, other: &Self) -> Vec<f64> {
        self.density().difference_eigenvalues(other.density())
    }
}

impl HermitianOperator for TwoQubitState {
    fn eigenvalues(&self) -> Vec<f64> {
        HermitianOperator::eigenvalues(self.density())
    }

    fn difference_eigenvalues(&self, other: &Self) -> Vec<f64> {
        self.density().difference_eigenvalues(other.density())
    }
}

/// `−Σ λ log₂ λ` with `0 log 0 = 0`.
pub fn von_neumann_entropy<H: HermitianOperator + ?Sized>(rho: &H) -> f64 {
    rho.eigenvalues().into_iter().map(xlog2x).sum()
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)`
pub fn mutual_information(state: &TwoQubitState) -> f64 {
    von_neumann_entropy(&state.reduced(Side::A)) + von_neumann_entropy(&state.reduced(Side::B))
        - von_neumann_entropy(state)
}

/// `½ tr|r₁ − r₂|`
pub fn trace_distance<H: HermitianOperator + ?Sized>(r1: &H, r2: &H) -> f64 {
    0.5 * r1
        .difference_eigenvalues(r2)
        .into_iter()
        .map(f64::abs)
        .sum::<f64>()
}

/// Wootters concurrence `max(0, λ₁ − λ₂ − λ₃ − λ₄)`, with `λᵢ` the
/// decreasing square roots of the spectrum of `ρ ρ̃`, `ρ̃ = (σ_y⊗σ_y) ρ* (σ_y⊗σ_y)`.
pub fn concurrence(state: &TwoQubitState) -> f64 {
    let rho = state.density();
    let yy = kron(&pauli(2), &pauli(2));
    let flipped = yy * rho.conjugate() * yy;
    let root = linalg::sqrtm_psd4(rho);
    // √ρ ρ̃ √ρ is Hermitian PSD and shares its spectrum with ρ ρ̃.
    let r = linalg::eigvalsh4(&(root * flipped * root));
    let mut l: Vec<f64> = r.iter().map(|x| x.max(0.0).sqrt()).collect();
    l.sort_by(|a, b| b.total_cmp(a));
    (l[0] - l[1] - l[2] - l[3]).max(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiscordMethod {
    NumericProjective,
    AnalyticXState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    /// Bits, clipped at zero.
    pub discord: f64,
    /// Bloch direction `n` of the optimal measurement `{½(I ± n·σ)}` on B.
    pub minimizing_direction: BlochVector,
    /// Minimal post-measurement entropy `Σ± p± S(ρ_A^±)`.
    pub conditional_entropy: f64,
    pub method: DiscordMethod,
}

/// Settings for [`discord_b_numeric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordOptions {
    /// Polar samples over the hemisphere `θ ∈ [0, π/2]`.
    pub grid_theta: usize,
    /// Azimuthal samples over `φ ∈ [0, 2π)`.
    pub grid_phi: usize,
    /// Function-value tolerance of the simplex refinement.
    pub refine_tol: f64,
    /// Number of simplex refinements started from distinct grid minima.
    pub restarts: usize,
    /// Seeds the orientation of each refinement simplex.
    pub seed: u64,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            grid_theta: 64,
            grid_phi: 128,
            refine_tol: 1e-8,
            restarts: 5,
            seed: 0x5eed_d15c,
        }
    }
}

/// Θ blocks needed for conditional entropies after measuring B.
#[derive(Debug, Clone, Copy)]
struct MeasurementModel {
    a: Vector3<f64>,
    b: Vector3<f64>,
    t: Matrix3<f64>,
}

impl MeasurementModel {
    fn new(state: &TwoQubitState) -> Self {
        let th = state.theta();
        Self {
            a: th.a(),
            b: th.b(),
            t: th.t(),
        }
    }

    /// `Σ± p± S(ρ_A^±)` for the measurement along unit vector `n`.
    fn conditional_entropy(&self, n: &Vector3<f64>) -> f64 {
        let bn = self.b.dot(n);
        let tn = self.t * n;
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let w = 1.0 + sign * bn;
            if w <= 1e-300 {
                continue;
            }
            let r = (self.a + tn * sign).norm() / w;
            total += 0.5 * w * qubit_entropy_from_radius(r);
        }
        total
    }
}

fn base_entropies(state: &TwoQubitState) -> f64 {
    von_neumann_entropy(&state.reduced(Side::B)) - von_neumann_entropy(state)
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Orthonormal pair spanning the tangent plane at unit vector `n`.
fn tangent_basis(n: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
    let helper = if n.x.abs() < 0.9 {
        Vector3::x()
    } else {
        Vector3::y()
    };
    let e1 = (helper - n * n.dot(&helper)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// B-side discord by grid search over the measurement hemisphere followed by
/// Nelder–Mead refinement in tangent coordinates.
pub fn discord_b_numeric(state: &TwoQubitState, opts: &DiscordOptions) -> DiscordResult {
    let model = MeasurementModel::new(state);
    let n_theta = opts.grid_theta.max(2);
    let n_phi = opts.grid_phi.max(1);

    let mut samples: Vec<(f64, Vector3<f64>)> = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = 0.5 * PI * i as f64 / (n_theta - 1) as f64;
        // the pole is a single direction
        let phis = if i == 0 { 1 } else { n_phi };
        for j in 0..phis {
            let phi = 2.0 * PI * j as f64 / n_phi as f64;
            let n = BlochVector::from_angles(theta, phi).0;
            samples.push((model.conditional_entropy(&n), n));
        }
    }
    samples.sort_by(|x, y| x.0.total_cmp(&y.0));

    // distinct starting points: at least ~2 grid spacings apart, with n ≡ -n
    let spacing = 0.5 * PI / (n_theta - 1) as f64;
    let min_sep = (3.0 * spacing).cos();
    let mut starts: Vec<Vector3<f64>> = Vec::new();
    for (_, n) in &samples {
        if starts.len() >= opts.restarts.max(1) {
            break;
        }
        if starts.iter().all(|s| s.dot(n).abs() < min_sep) {
            starts.push(*n);
        }
    }

    let mut best_value = samples[0].0;
    let mut best_dir = samples[0].1;
    let nm = NelderMeadOptions {
        f_tol: opts.refine_tol,
        x_tol: 1e-9,
        max_evals: 4000,
        initial_step: 2.0 * spacing,
    };
    let mut rng = opts.seed;
    for start in starts {
        let (e1, e2) = tangent_basis(&start);
        let angle = (splitmix64(&mut rng) >> 11) as f64 / (1u64 << 53) as f64 * 2.0 * PI;
        let (s, c) = angle.sin_cos();
        let u1 = e1 * c + e2 * s;
        let u2 = e2 * c - e1 * s;
        let direction = |x: &[f64]| (start + u1 * x[0] + u2 * x[1]).normalize();
        let res = nelder_mead(|x| model.conditional_entropy(&direction(x)), &[0.0, 0.0], &nm);
        if res.f < best_value {
            best_value = res.f;
            best_dir = direction(&res.x);
        }
    }

    DiscordResult {
        discord: (base_entropies(state) + best_value).max(0.0),
        minimizing_direction: BlochVector(canonical_direction(best_dir)),
        conditional_entropy: best_value,
        method: DiscordMethod::NumericProjective,
    }
}

/// `n` and `−n` describe the same measurement; pick the upper hemisphere.
fn canonical_direction(n: Vector3<f64>) -> Vector3<f64> {
    let flip = if n.z.abs() > 1e-12 {
        n.z < 0.0
    } else if n.x.abs() > 1e-12 {
        n.x < 0.0
    } else {
        n.y < 0.0
    };
    if flip {
        -n
    } else {
        n
    }
}

/// Largest modulus among entries outside the X pattern (anti-diagonal plus diagonal).
pub fn off_x_magnitude(rho: &CMat4) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            if i != j && i + j != 3 {
                worst = worst.max(rho[(i, j)].norm());
            }
        }
    }
    worst
}

/// B-side discord of an X-state.
///
/// For X-states `a` and `b` lie on z and `T` is block diagonal (xy block plus
/// `T₃₃`). For polar angle `θ` the post-measurement radii are maximised, and
/// the entropy minimised, by the azimuth of the leading right singular vector
/// of the xy block, which leaves a one-parameter problem. The σ_z (`θ = 0`)
/// and σ_x-type (`θ = π/2`) candidates are evaluated in closed form and the
/// interior is searched by a scan plus golden-section refinement.
pub fn discord_x_state(state: &TwoQubitState) -> Result<DiscordResult> {
    let max_off_x = off_x_magnitude(state.density());
    if max_off_x > 1e-10 {
        return Err(Error::NotXState { max_off_x });
    }
    let th = state.theta();
    let a3 = th.get(3, 0);
    let b3 = th.get(0, 3);
    let t33 = th.get(3, 3);
    let t_xy = Matrix2::new(th.get(1, 1), th.get(1, 2), th.get(2, 1), th.get(2, 2));
    let svd = t_xy.svd(false, true);
    let (k, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, &s)| if s > acc.1 { (i, s) } else { acc });
    let s1 = svd.singular_values[k];
    let v1: Vector2<f64> = svd.v_t.expect("requested V^T").row(k).transpose();

    let cond = |theta: f64| -> f64 {
        let (st, ct) = theta.sin_cos();
        let mut total = 0.0;
        for sign in [1.0, -1.0] {
            let w = 1.0 + sign * b3 * ct;
            if w <= 1e-300 {
                continue;
            }
            let z = a3 + sign * t33 * ct;
            let r = (s1 * s1 * st * st + z * z).sqrt() / w;
            total += 0.5 * w * qubit_entropy_from_radius(r);
        }
        total
    };

    let half_pi = 0.5 * PI;
    let mut best_theta = 0.0;
    let mut best_value = cond(0.0);
    let at_equator = cond(half_pi);
    if at_equator < best_value {
        best_theta = half_pi;
        best_value = at_equator;
    }
    const SCAN: usize = 256;
    let step = half_pi / SCAN as f64;
    let mut scan_best = (0usize, f64::INFINITY);
    for i in 0..=SCAN {
        let v = cond(i as f64 * step);
        if v < scan_best.1 {
            scan_best = (i, v);
        }
    }
    let lo = (scan_best.0 as f64 - 1.0).max(0.0) * step;
    let hi = ((scan_best.0 + 1) as f64 * step).min(half_pi);
    let (theta_in, value_in) = golden_section(cond, lo, hi, 1e-12);
    if value_in < best_value {
        best_theta = theta_in;
        best_value = value_in;
    }

    let (st, ct) = best_theta.sin_cos();
    let n = Vector3::new(st * v1.x, st * v1.y, ct);
    Ok(DiscordResult {
        discord: (base_entropies(state) + best_value).max(0.0),
        minimizing_direction: BlochVector(canonical_direction(n)),
        conditional_entropy: best_value,
        method: DiscordMethod::AnalyticXState,
    })
}

/// X-state path when the density matrix has X shape, numeric otherwise.
pub fn discord_b(state: &TwoQubitState, opts: &DiscordOptions) -> DiscordResult {
    discord_x_state(state).unwrap_or_else(|_| discord_b_numeric(state, opts))
}

/// Conditional entropy for a given measurement direction on B; exposed for
/// diagnostics and tests.
pub fn conditional_entropy_b(state: &TwoQubitState, n: &BlochVector) -> f64 {
    MeasurementModel::new(state).conditional_entropy(&n.0.normalize())
}
