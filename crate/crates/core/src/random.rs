//! Random states, channels and local operators for property checks.
//!
//! Every sampler takes the generator explicitly, so results are reproducible
//! from a seeded RNG.

use alloc::vec::Vec;

use nalgebra::Vector3;
use rand::Rng;
use rand_distr::{Exp1, StandardNormal};

use crate::channels::{channel_from_kraus, QubitChannel};
use crate::families;
use crate::linalg::{re, C64, CMat2, CMat4};
use crate::pauli::{SingleQubitState, TwoQubitState};
use crate::steering::steering_ellipsoid;
use crate::Side;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(gaussian(rng), gaussian(rng))
}

/// Uniformly distributed unit vector.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    loop {
        let v = Vector3::new(gaussian(rng), gaussian(rng), gaussian(rng));
        let n = v.norm();
        if n > 1e-8 {
            return v / n;
        }
    }
}

/// Uniform point in the Bloch ball.
pub fn bloch_in_ball<R: Rng + ?Sized>(rng: &mut R) -> Vector3<f64> {
    unit_vector(rng) * rng.random::<f64>().cbrt()
}

pub fn mixed_qubit<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitState {
    SingleQubitState::from_bloch(&bloch_in_ball(rng)).expect("inside the ball")
}

pub fn pure_qubit<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitState {
    SingleQubitState::from_bloch(&unit_vector(rng)).expect("on the sphere")
}

/// Mixed with probability ½, pure otherwise.
pub fn any_qubit<R: Rng + ?Sized>(rng: &mut R) -> SingleQubitState {
    if rng.random::<bool>() {
        mixed_qubit(rng)
    } else {
        pure_qubit(rng)
    }
}

/// Haar-random element of SU(2) from a uniform unit quaternion.
pub fn unitary2<R: Rng + ?Sized>(rng: &mut R) -> CMat2 {
    let q = loop {
        let q = nalgebra::Vector4::new(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
        let n = q.norm();
        if n > 1e-8 {
            break q / n;
        }
    };
    CMat2::new(
        C64::new(q[0], q[1]),
        C64::new(q[2], q[3]),
        C64::new(-q[2], q[3]),
        C64::new(q[0], -q[1]),
    )
}

/// Hilbert–Schmidt random two-qubit state `GG†/tr(GG†)`.
pub fn density<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let g = CMat4::from_fn(|_, _| complex_gaussian(rng));
    let m = g * g.adjoint();
    let tr = (0..4).map(|i| m[(i, i)].re).sum::<f64>();
    TwoQubitState::from_density_normalized(m / re(tr)).expect("positive by construction")
}

/// Random CPTP channel from a Stinespring isometry with a 1–4 dimensional
/// environment (so 1–4 Kraus operators).
pub fn channel<R: Rng + ?Sized>(rng: &mut R) -> QubitChannel {
    let env = rng.random_range(1..=4usize);
    loop {
        // columns of a 2env × 2 isometry by Gram–Schmidt
        let mut v0: Vec<C64> = (0..2 * env).map(|_| complex_gaussian(rng)).collect();
        let mut v1: Vec<C64> = (0..2 * env).map(|_| complex_gaussian(rng)).collect();
        let norm = |v: &[C64]| v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let n0 = norm(&v0);
        if n0 < 1e-8 {
            continue;
        }
        v0.iter_mut().for_each(|z| *z /= n0);
        let overlap: C64 = v0.iter().zip(&v1).map(|(a, b)| a.conj() * b).sum();
        for (b, a) in v1.iter_mut().zip(&v0) {
            *b -= a * overlap;
        }
        let n1 = norm(&v1);
        if n1 < 1e-8 {
            continue;
        }
        v1.iter_mut().for_each(|z| *z /= n1);
        let kraus: Vec<CMat2> = (0..env)
            .map(|j| CMat2::new(v0[2 * j], v1[2 * j], v0[2 * j + 1], v1[2 * j + 1]))
            .collect();
        if let Ok(ch) = channel_from_kraus(kraus) {
            return ch;
        }
    }
}

/// Correlation vector `c` of a Bell-diagonal state with a flat-Dirichlet spectrum.
pub fn bell_diagonal_c<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    let w: [f64; 4] = core::array::from_fn(|_| rng.sample::<f64, _>(Exp1));
    let total: f64 = w.iter().sum();
    let l = w.map(|x| x / total);
    [
        l[2] + l[3] - l[0] - l[1],
        l[1] + l[3] - l[0] - l[2],
        l[1] + l[2] - l[0] - l[3],
    ]
}

pub fn bell_diagonal<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    families::bell_diagonal(bell_diagonal_c(rng)).expect("spectrum is a distribution")
}

/// Random `(c, p)` for the amplitude-damped Bell-diagonal family.
pub fn damped_bell_parameters<R: Rng + ?Sized>(rng: &mut R) -> ([f64; 3], f64) {
    (bell_diagonal_c(rng), rng.random::<f64>())
}

/// `p₀ ρ₀ᴬ⊗ρ₀ᴮ + p₁ ρ₁ᴬ⊗ρ₁ᴮ`, resampled until `rank Θ = 2` and `E_B` is a
/// genuine segment.
pub fn needle_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    loop {
        let p0 = rng.random_range(0.05..0.95);
        let (a0, b0, a1, b1) = (any_qubit(rng), any_qubit(rng), any_qubit(rng), any_qubit(rng));
        if (a0.bloch().0 - a1.bloch().0).norm() < 0.05 || (b0.bloch().0 - b1.bloch().0).norm() < 0.05 {
            continue;
        }
        let s = families::two_term_mixture(p0, &a0, &b0, &a1, &b1).expect("valid weight");
        if s.theta().rank(1e-6) == 2 && steering_ellipsoid(&s, Side::B).dim == 1 {
            return s;
        }
    }
}

/// Member of the needle family `½|+⟩⟨+|⊗ρ⁺ + ½|0⟩⟨0|⊗ρ⁰`. With `radial`, the
/// two B Bloch vectors are made parallel, which puts the segment on a line
/// through the origin.
pub fn needle_family_state<R: Rng + ?Sized>(rng: &mut R, radial: bool) -> TwoQubitState {
    let plus = any_qubit(rng);
    let zero = if radial {
        let dir = plus.bloch().0;
        let scale = rng.random_range(-1.0..1.0);
        let v = if dir.norm() > 1e-8 {
            dir * scale
        } else {
            unit_vector(rng) * scale
        };
        SingleQubitState::from_bloch(&v).expect("inside the ball")
    } else {
        any_qubit(rng)
    };
    families::needle_family(&plus, &zero).expect("valid components")
}

/// Quantum-classical state in a random orthonormal basis on B.
pub fn quantum_classical<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let p0 = rng.random::<f64>();
    let (a0, a1) = (any_qubit(rng), any_qubit(rng));
    families::quantum_classical(p0, &a0, &a1, &unitary2(rng)).expect("valid basis")
}

/// X-shaped density matrix (diagonal plus anti-diagonal) with random
/// populations and coherences kept inside the positivity bounds.
pub fn x_state<R: Rng + ?Sized>(rng: &mut R) -> TwoQubitState {
    let w: [f64; 4] = core::array::from_fn(|_| rng.sample::<f64, _>(Exp1));
    let total: f64 = w.iter().sum();
    let d = w.map(|x| x / total);
    let coherence = |rng: &mut R, bound: f64| {
        let r = bound * rng.random::<f64>();
        let phase = rng.random_range(0.0..core::f64::consts::TAU);
        C64::from_polar(r, phase)
    };
    let z = coherence(rng, (d[0] * d[3]).sqrt());
    let y = coherence(rng, (d[1] * d[2]).sqrt());
    let mut rho = CMat4::from_diagonal(&nalgebra::Vector4::from(d.map(re)));
    rho[(0, 3)] = z;
    rho[(3, 0)] = z.conj();
    rho[(1, 2)] = y;
    rho[(2, 1)] = y.conj();
    TwoQubitState::from_density_normalized(rho).expect("positive by construction")
}

/// Random invertible local operator (complex Gaussian, resampled if nearly singular).
pub fn slocc<R: Rng + ?Sized>(rng: &mut R) -> CMat2 {
    loop {
        let m = CMat2::from_fn(|_, _| complex_gaussian(rng));
        let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
        if det.norm() > 0.1 {
            return m;
        }
    }
}
