//! Needle states as two product terms, and their local preparation.
//!
//! When `rank Θ = 2` the state is `p₀ ρ₀ᴬ⊗ρ₀ᴮ + p₁ ρ₁ᴬ⊗ρ₁ᴮ`. Taking `ρᵢᴮ` at the
//! two ends of `E_B` fixes the B factors; the A factors then follow from a
//! linear solve against `Θ = Σ Xᵢ b̃ᵢᵀ` with `b̃ᵢ = (1, βᵢ)` and `Xᵢ = pᵢ (1, αᵢ)`.
//!
//! Given such a split, measuring nothing and relabelling is enough: the
//! quantum-classical state `Σ pᵢ ρᵢᴬ⊗|i⟩⟨i|` is mapped onto the input by a
//! channel on B that sends `|i⟩⟨i|` to `ρᵢᴮ`.

use alloc::string::ToString;
use alloc::vec::Vec;

use nalgebra::{Matrix2, Matrix4, Matrix4x2, Vector3, Vector4};

use crate::channels::{apply_local_b, QubitChannel};
use crate::correlations::{discord_b_numeric, DiscordOptions};
use crate::linalg::{eigh2, re, C64, CMat2, CMat4, ZERO};
use crate::pauli::{SingleQubitState, TwoQubitState};
use crate::steering::{is_radial_segment, steering_ellipsoid};
use crate::{Error, Result, Side};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Relative singular-value threshold for `rank Θ`.
pub const RANK_REL_TOL: f64 = 1e-9;
/// Maximum entry-wise mismatch accepted for the linear solve and reconstruction.
pub const RESIDUAL_TOL: f64 = 1e-9;
/// Smallest admissible weight of a product term.
pub const PROBABILITY_FLOOR: f64 = 1e-10;
/// Discord above this counts as discordant in [`verify_theorem`].
pub const DISCORD_TOL: f64 = 1e-6;
/// Cross-product tolerance for radiality in [`verify_theorem`].
pub const RADIAL_TOL: f64 = 1e-8;

/// `ρ = Σᵢ pᵢ ρᵢᴬ⊗ρᵢᴮ` with two terms.
#[derive(Debug, Clone, PartialEq)]
pub struct NeedleDecomposition {
    pub p: [f64; 2],
    pub rho_a: [SingleQubitState; 2],
    pub rho_b: [SingleQubitState; 2],
    /// Largest entry of `|Σ pᵢ ρᵢᴬ⊗ρᵢᴮ − ρ|`.
    pub residual: f64,
}

impl NeedleDecomposition {
    pub fn reconstruct(&self) -> CMat4 {
        (0..2).fold(CMat4::zeros(), |acc, i| {
            acc + TwoQubitState::product(&self.rho_a[i], &self.rho_b[i]).density() * re(self.p[i])
        })
    }
}

fn max_entry(m: &CMat4) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

fn bloch_state(v: &Vector3<f64>, what: &str) -> Result<SingleQubitState> {
    let n = v.norm();
    if n > 1.0 + RESIDUAL_TOL {
        return Err(Error::DecompositionInfeasible(alloc::format!(
            "{what} has Bloch length {n}"
        )));
    }
    let clipped = if n > 1.0 { v / n } else { *v };
    SingleQubitState::from_bloch(&clipped)
}

/// Splits a `rank Θ = 2` state into two product terms whose B parts sit at
/// the ends of `E_B`.
pub fn needle_decompose(state: &TwoQubitState) -> Result<NeedleDecomposition> {
    let theta = state.theta().matrix();
    let rank = state.theta().rank(RANK_REL_TOL);
    if rank != 2 {
        return Err(Error::NotANeedleState { rank });
    }
    let e_b = steering_ellipsoid(state, Side::B);
    if e_b.dim != 1 {
        return Err(Error::DecompositionInfeasible(alloc::format!(
            "rank-2 state with a {}-dimensional E_B",
            e_b.dim
        )));
    }
    let (beta0, beta1) = e_b.endpoints();
    let b = Matrix4x2::from_columns(&[
        Vector4::new(1.0, beta0.x, beta0.y, beta0.z),
        Vector4::new(1.0, beta1.x, beta1.y, beta1.z),
    ]);
    let gram: Matrix2<f64> = b.transpose() * b;
    let gram_inv = gram.try_inverse().ok_or_else(|| {
        Error::DecompositionInfeasible("segment endpoints coincide".to_string())
    })?;
    let x = theta * b * gram_inv;
    let fit: Matrix4<f64> = x * b.transpose();
    let solve_residual = (fit - theta).amax();
    if solve_residual > RESIDUAL_TOL {
        return Err(Error::DecompositionInfeasible(alloc::format!(
            "least-squares residual {solve_residual:e}"
        )));
    }

    let mut p = [0.0; 2];
    let mut rho_a = Vec::with_capacity(2);
    let mut rho_b = Vec::with_capacity(2);
    for (i, beta) in [beta0, beta1].iter().enumerate() {
        let col = x.column(i);
        p[i] = col[0];
        if p[i] < PROBABILITY_FLOOR {
            return Err(Error::DecompositionInfeasible(alloc::format!(
                "weight p{i} = {:e}",
                p[i]
            )));
        }
        let alpha = Vector3::new(col[1], col[2], col[3]) / p[i];
        rho_a.push(bloch_state(&alpha, "A component")?);
        rho_b.push(bloch_state(beta, "B component")?);
    }
    let [a0, a1]: [SingleQubitState; 2] = rho_a.try_into().expect("two components");
    let [b0, b1]: [SingleQubitState; 2] = rho_b.try_into().expect("two components");
    if (a0.bloch().0 - a1.bloch().0).norm() <= RESIDUAL_TOL {
        return Err(Error::DecompositionInfeasible(
            "A components coincide".to_string(),
        ));
    }
    let mut dec = NeedleDecomposition {
        p,
        rho_a: [a0, a1],
        rho_b: [b0, b1],
        residual: 0.0,
    };
    dec.residual = max_entry(&(dec.reconstruct() - state.density()));
    if dec.residual > RESIDUAL_TOL {
        return Err(Error::DecompositionInfeasible(alloc::format!(
            "reconstruction residual {:e}",
            dec.residual
        )));
    }
    Ok(dec)
}

/// Everything needed to prepare a needle state locally on B.
#[derive(Debug, Clone, PartialEq)]
pub struct PreparationRecipe {
    /// `Σ pᵢ ρᵢᴬ⊗|i⟩⟨i|`, classical on B in the computational basis.
    pub classical_state: TwoQubitState,
    /// Sends `|i⟩⟨i|` to `ρᵢᴮ`.
    pub channel: QubitChannel,
    /// Largest eigenvalue `λᵢ` of `ρᵢᴮ`.
    pub lambda: [f64; 2],
    /// Eigenvector of `ρᵢᴮ` for `λᵢ`.
    pub psi: [[C64; 2]; 2],
    /// Eigenvector of `ρᵢᴮ` for `1 − λᵢ`.
    pub psi_perp: [[C64; 2]; 2],
}

impl PreparationRecipe {
    /// The state the recipe produces.
    pub fn prepared(&self) -> TwoQubitState {
        apply_local_b(&self.classical_state, &self.channel)
    }

    /// Largest entry-wise deviation of [`Self::prepared`] from `target`.
    pub fn residual(&self, target: &TwoQubitState) -> f64 {
        max_entry(&(self.prepared().density() - target.density()))
    }
}

/// Kraus weights below this are dropped (pure `ρᵢᴮ` need only one operator).
const KRAUS_WEIGHT_DROP: f64 = 1e-14;

/// Builds `Λ(X) = Σ Eⱼ X Eⱼ†` with `E = √λᵢ |ψᵢ⟩⟨i|, √(1−λᵢ) |ψᵢ^⊥⟩⟨i|`.
pub fn build_preparation(dec: &NeedleDecomposition) -> PreparationRecipe {
    let mut lambda = [0.0; 2];
    let mut psi = [[ZERO; 2]; 2];
    let mut psi_perp = [[ZERO; 2]; 2];
    let mut kraus = Vec::with_capacity(4);
    for i in 0..2 {
        let (vals, vecs) = eigh2(dec.rho_b[i].density());
        lambda[i] = vals[1].clamp(0.0, 1.0);
        psi[i] = [vecs[(0, 1)], vecs[(1, 1)]];
        psi_perp[i] = [vecs[(0, 0)], vecs[(1, 0)]];
        for (weight, ket) in [(lambda[i], psi[i]), (1.0 - lambda[i], psi_perp[i])] {
            if weight < KRAUS_WEIGHT_DROP {
                continue;
            }
            let s = re(weight.sqrt());
            let mut k = CMat2::zeros();
            k[(0, i)] = ket[0] * s;
            k[(1, i)] = ket[1] * s;
            kraus.push(k);
        }
    }

    let basis = [
        SingleQubitState::from_bloch(&Vector3::z()).expect("pure |0>"),
        SingleQubitState::from_bloch(&-Vector3::z()).expect("pure |1>"),
    ];
    let parts: Vec<TwoQubitState> = (0..2)
        .map(|i| TwoQubitState::product(&dec.rho_a[i], &basis[i]))
        .collect();
    let total = dec.p[0] + dec.p[1];
    let classical_state = TwoQubitState::mixture(&[
        (dec.p[0] / total, &parts[0]),
        (dec.p[1] / total, &parts[1]),
    ])
    .expect("convex weights");

    PreparationRecipe {
        classical_state,
        channel: QubitChannel::from_kraus_unchecked(kraus),
        lambda,
        psi,
        psi_perp,
    }
}

/// Outcome of checking the needle theorem on one state.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    pub theta_rank: usize,
    pub e_b_dim: usize,
    pub e_b_radial: bool,
    pub discord: f64,
    /// `None` when the decomposition succeeded.
    pub decomposition_error: Option<Error>,
    /// Round-trip residual of the preparation, when one was built.
    pub preparation_residual: Option<f64>,
    /// The theorem speaks about states whose `E_B` is at most a segment.
    pub applicable: bool,
    /// `(discordant ∧ locally preparable) ⇔ (E_B a non-radial segment)`.
    pub consistent: bool,
}

impl TheoremReport {
    pub fn discordant(&self) -> bool {
        self.discord > DISCORD_TOL
    }

    pub fn preparable(&self) -> bool {
        self.preparation_residual
            .is_some_and(|r| r <= RESIDUAL_TOL)
    }

    pub fn nonradial_needle(&self) -> bool {
        self.e_b_dim == 1 && !self.e_b_radial
    }
}

/// Computes geometry, discord and constructive preparation for `state`.
pub fn verify_theorem(state: &TwoQubitState) -> TheoremReport {
    verify_theorem_with(state, &DiscordOptions::default())
}

pub fn verify_theorem_with(state: &TwoQubitState, opts: &DiscordOptions) -> TheoremReport {
    let theta_rank = state.theta().rank(RANK_REL_TOL);
    let e_b = steering_ellipsoid(state, Side::B);
    let e_b_radial = is_radial_segment(&e_b, RADIAL_TOL);
    let discord = discord_b_numeric(state, opts).discord;
    let (decomposition_error, preparation_residual) = match needle_decompose(state) {
        Ok(dec) => (None, Some(build_preparation(&dec).residual(state))),
        Err(e) => (Some(e), None),
    };
    let mut report = TheoremReport {
        theta_rank,
        e_b_dim: e_b.dim,
        e_b_radial,
        discord,
        decomposition_error,
        preparation_residual,
        applicable: e_b.dim <= 1,
        consistent: false,
    };
    report.consistent =
        (report.discordant() && report.preparable()) == report.nonradial_needle();
    report
}
