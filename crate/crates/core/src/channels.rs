//! Single-qubit CPTP channels acting on qubit B.
//!
//! Every channel carries both a Kraus list and its affine Bloch-ball action
//! `r ↦ M r + t`. On the Θ matrix of a two-qubit state, acting on B gives
//! `b' = M b + t` and `T' = T Mᵀ + a tᵀ`.

use alloc::vec::Vec;

use nalgebra::{Matrix3, Vector3};

use crate::linalg::{self, bloch_of, lift_b, pauli, re, trace2, CMat2, CMat4, ONE, ZERO};
use crate::pauli::{PauliTheta, SingleQubitState, TwoQubitState};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Allowed deviation of `Σ K†K` from the identity.
pub const TP_TOL: f64 = 1e-10;
/// Most negative Choi eigenvalue accepted.
pub const CHOI_TOL: f64 = 1e-10;
/// Choi eigenvalues at or below this are dropped when extracting Kraus operators.
pub const KRAUS_DROP: f64 = 1e-12;
/// `|t|` at or below this counts as unital.
pub const UNITAL_TOL: f64 = 1e-10;
/// Singular values of `M` below this fraction of the largest count as zero.
pub const SINGULAR_REL_TOL: f64 = 1e-9;
/// Allowed `|t × u|` for a translation parallel to the surviving axis `u`.
pub const PARALLEL_TOL: f64 = 1e-10;

/// The three-way split of qubit channels by their effect on B-side discord
/// of quantum-classical inputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChannelClass {
    /// `t = 0`: maps the maximally mixed state to itself.
    Unital,
    /// At most one surviving Bloch axis and a translation along it: all
    /// outputs commute.
    CompletelyDecohering,
    /// Everything else; some quantum-classical input acquires discord.
    DiscordCreating,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitChannel {
    kraus: Vec<CMat2>,
    m: Matrix3<f64>,
    t: Vector3<f64>,
}

impl QubitChannel {
    pub fn identity() -> Self {
        Self::from_kraus_unchecked(alloc::vec![pauli(0)])
    }

    /// Unitary channel `ρ ↦ U ρ U†`; `u` must be unitary within [`TP_TOL`].
    pub fn unitary(u: CMat2) -> Result<Self> {
        channel_from_kraus(alloc::vec![u])
    }

    pub(crate) fn from_kraus_unchecked(kraus: Vec<CMat2>) -> Self {
        let apply = |x: &CMat2| -> CMat2 {
            kraus
                .iter()
                .fold(CMat2::zeros(), |acc, k| acc + k * x * k.adjoint())
        };
        let t = bloch_of(&apply(&pauli(0))) * 0.5;
        let mut m = Matrix3::zeros();
        for j in 0..3 {
            let col = bloch_of(&apply(&pauli(j + 1))) * 0.5;
            m.set_column(j, &col);
        }
        Self { kraus, m, t }
    }

    pub fn kraus(&self) -> &[CMat2] {
        &self.kraus
    }

    /// Linear part of the Bloch-ball action.
    pub fn m(&self) -> &Matrix3<f64> {
        &self.m
    }

    /// Translation part of the Bloch-ball action.
    pub fn t(&self) -> &Vector3<f64> {
        &self.t
    }

    /// `Σ K X K†` for an arbitrary 2×2 operator.
    pub fn apply_operator(&self, x: &CMat2) -> CMat2 {
        self.kraus
            .iter()
            .fold(CMat2::zeros(), |acc, k| acc + k * x * k.adjoint())
    }

    pub fn apply_state(&self, rho: &SingleQubitState) -> SingleQubitState {
        let out = linalg::hermitize2(&self.apply_operator(rho.density()));
        let tr = trace2(&out).re;
        // Kraus sets are trace preserving within TP_TOL, so rescaling is a
        // rounding-level correction.
        SingleQubitState::from_bloch(&(bloch_of(&out) / tr))
            .expect("CPTP output is a state")
    }

    /// `M r + t`
    pub fn apply_bloch(&self, r: &Vector3<f64>) -> Vector3<f64> {
        self.m * r + self.t
    }

    /// Choi matrix `J = Σ_{ij} |i⟩⟨j| ⊗ Λ(|i⟩⟨j|)`.
    pub fn choi(&self) -> CMat4 {
        choi_of(|x| self.apply_operator(x))
    }

    pub fn class(&self) -> ChannelClass {
        classify(self)
    }
}

fn choi_of(apply: impl Fn(&CMat2) -> CMat2) -> CMat4 {
    let mut j = CMat4::zeros();
    for i in 0..2 {
        for k in 0..2 {
            let mut unit = CMat2::zeros();
            unit[(i, k)] = ONE;
            let out = apply(&unit);
            for a in 0..2 {
                for b in 0..2 {
                    j[(2 * i + a, 2 * k + b)] = out[(a, b)];
                }
            }
        }
    }
    j
}

/// Kraus operators from a PSD Choi matrix: `K = √λ · unvec(v)` for each
/// eigenpair with `λ > KRAUS_DROP`, largest first.
fn kraus_from_choi(j: &CMat4) -> Vec<CMat2> {
    let (vals, vecs) = linalg::eigh4(j);
    let mut out = Vec::new();
    for idx in (0..4).rev() {
        let lambda = vals[idx];
        if lambda <= KRAUS_DROP {
            continue;
        }
        let s = lambda.sqrt();
        let v = vecs.column(idx);
        // J_{(i,a),(k,b)} = Σ K_{a i} conj(K_{b k}), so vec(K)_{2i+a} = K_{a i}
        let k = CMat2::from_fn(|a, i| v[2 * i + a] * s);
        out.push(k);
    }
    out
}

/// Validates a Kraus list (1–4 operators) and derives its affine view.
pub fn channel_from_kraus(kraus: Vec<CMat2>) -> Result<QubitChannel> {
    if kraus.is_empty() || kraus.len() > 4 {
        return Err(Error::KrausCount(kraus.len()));
    }
    if kraus
        .iter()
        .any(|k| k.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()))
    {
        return Err(Error::DomainError("non-finite Kraus entry".into()));
    }
    let completeness = kraus
        .iter()
        .fold(CMat2::zeros(), |acc, k| acc + k.adjoint() * k);
    let defect = (completeness - pauli(0))
        .iter()
        .fold(0.0f64, |acc, z| acc.max(z.norm()));
    if defect > TP_TOL {
        return Err(Error::NotTracePreserving { defect });
    }
    let ch = QubitChannel::from_kraus_unchecked(kraus);
    let min_eigenvalue = linalg::eigvalsh4(&ch.choi())[0];
    if min_eigenvalue < -CHOI_TOL {
        return Err(Error::NotCompletelyPositive { min_eigenvalue });
    }
    Ok(ch)
}

/// Amplitude damping with decay probability `p` (`p = 1 - e^{-γt}`):
/// Kraus `{diag(1, √(1-p)), √p |0⟩⟨1|}`, affine `M = diag(√(1-p), √(1-p), 1-p)`,
/// `t = (0, 0, p)`.
pub fn amplitude_damping(p: f64) -> Result<QubitChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(alloc::format!(
            "damping probability {p} outside [0, 1]"
        )));
    }
    let e0 = CMat2::new(ONE, ZERO, ZERO, re((1.0 - p).sqrt()));
    let e1 = CMat2::new(ZERO, re(p.sqrt()), ZERO, ZERO);
    let mut ch = QubitChannel::from_kraus_unchecked(alloc::vec![e0, e1]);
    let s = (1.0 - p).sqrt();
    ch.m = Matrix3::from_diagonal(&Vector3::new(s, s, 1.0 - p));
    ch.t = Vector3::new(0.0, 0.0, p);
    Ok(ch)
}

/// Isotropic shrink `M = (1-p) I`, `t = 0`.
pub fn depolarizing(p: f64) -> Result<QubitChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(alloc::format!(
            "depolarizing probability {p} outside [0, 1]"
        )));
    }
    affine_channel(&Matrix3::identity().scale(1.0 - p), &Vector3::zeros())
}

/// Phase damping `M = diag(1-p, 1-p, 1)`, `t = 0`.
pub fn dephasing(p: f64) -> Result<QubitChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::DomainError(alloc::format!(
            "dephasing probability {p} outside [0, 1]"
        )));
    }
    affine_channel(
        &Matrix3::from_diagonal(&Vector3::new(1.0 - p, 1.0 - p, 1.0)),
        &Vector3::zeros(),
    )
}

/// `Λ(½(w I + r·σ)) = ½(w I + (w t + M r)·σ)` for complex `w`, `r`.
fn affine_apply_operator(m: &Matrix3<f64>, t: &Vector3<f64>, x: &CMat2) -> CMat2 {
    let w = trace2(x);
    let mut r = [ZERO; 3];
    for (k, rk) in r.iter_mut().enumerate() {
        *rk = linalg::trace2(&(x * pauli(k + 1)));
    }
    let mut out = pauli(0) * w;
    for i in 0..3 {
        let mut coeff = w * t[i];
        for k in 0..3 {
            coeff += r[k] * m[(i, k)];
        }
        out += pauli(i + 1) * coeff;
    }
    out * re(0.5)
}

/// Channel with Bloch action `r ↦ M r + t`, if that action is completely
/// positive. Kraus operators come from the Choi eigendecomposition.
pub fn affine_channel(m: &Matrix3<f64>, t: &Vector3<f64>) -> Result<QubitChannel> {
    if !m.iter().chain(t.iter()).all(|x| x.is_finite()) {
        return Err(Error::DomainError("non-finite affine parameters".into()));
    }
    let j = choi_of(|x| affine_apply_operator(m, t, x));
    let min_eigenvalue = linalg::eigvalsh4(&j)[0];
    if min_eigenvalue < -CHOI_TOL {
        return Err(Error::NotCompletelyPositive { min_eigenvalue });
    }
    let kraus = kraus_from_choi(&j);
    let mut ch = QubitChannel::from_kraus_unchecked(kraus);
    ch.m = *m;
    ch.t = *t;
    Ok(ch)
}

/// `second ∘ first`, reduced to a minimal Kraus set. Affine view
/// `(M₂M₁, M₂t₁ + t₂)`.
pub fn compose(first: &QubitChannel, second: &QubitChannel) -> QubitChannel {
    let apply = |x: &CMat2| second.apply_operator(&first.apply_operator(x));
    let kraus = kraus_from_choi(&choi_of(apply));
    let mut ch = QubitChannel::from_kraus_unchecked(kraus);
    ch.m = second.m * first.m;
    ch.t = second.m * first.t + second.t;
    ch
}

/// `(I ⊗ Λ)(ρ)` by Kraus conjugation on the B factor.
pub fn apply_local_b(state: &TwoQubitState, ch: &QubitChannel) -> TwoQubitState {
    let rho = state.density();
    let out = ch.kraus.iter().fold(CMat4::zeros(), |acc, k| {
        let kk = lift_b(k);
        acc + kk * rho * kk.adjoint()
    });
    TwoQubitState::from_density_normalized(out).expect("CPTP output is a state")
}

/// `(I ⊗ Λ)(ρ)` through the Θ transform `Θ' = Θ Rᵀ`, `R = (1, 0; t, M)`.
pub fn apply_local_b_theta(theta: &PauliTheta, ch: &QubitChannel) -> PauliTheta {
    let a = theta.a();
    let b = theta.b();
    let t = theta.t();
    let b_new = ch.m * b + ch.t;
    let t_new = t * ch.m.transpose() + a * ch.t.transpose();
    PauliTheta::from_blocks(&a, &b_new, &t_new)
}

/// Affine-route counterpart of [`apply_local_b`].
pub fn apply_local_b_affine(state: &TwoQubitState, ch: &QubitChannel) -> Result<TwoQubitState> {
    crate::pauli::density_from_theta(&apply_local_b_theta(state.theta(), ch))
}

/// Sorts a channel into [`ChannelClass`]. Classification uses the singular
/// values of `M`, so it is insensitive to unitaries before or after.
pub fn classify(ch: &QubitChannel) -> ChannelClass {
    if ch.t.norm() <= UNITAL_TOL {
        return ChannelClass::Unital;
    }
    let (s, u, _) = linalg::svd3(&ch.m);
    let nonzero = if s[0] <= f64::EPSILON {
        0
    } else {
        s.iter().filter(|&&x| x > SINGULAR_REL_TOL * s[0]).count()
    };
    match nonzero {
        0 => ChannelClass::CompletelyDecohering,
        1 if ch.t.cross(&u.column(0).into_owned()).norm() <= PARALLEL_TOL => {
            ChannelClass::CompletelyDecohering
        }
        _ => ChannelClass::DiscordCreating,
    }
}
