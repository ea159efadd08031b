//! Named two-qubit state families.

use nalgebra::Vector3;

use crate::channels::{amplitude_damping, apply_local_b};
use crate::linalg::{re, CMat2, ONE, ZERO};
use crate::pauli::{density_from_theta, PauliTheta, SingleQubitState, TwoQubitState};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// `|0⟩⟨0|`
pub fn ket_zero() -> SingleQubitState {
    SingleQubitState::pure([ONE, ZERO]).expect("nonzero ket")
}

/// `|1⟩⟨1|`
pub fn ket_one() -> SingleQubitState {
    SingleQubitState::pure([ZERO, ONE]).expect("nonzero ket")
}

/// `|+⟩⟨+|`
pub fn ket_plus() -> SingleQubitState {
    SingleQubitState::pure([ONE, ONE]).expect("nonzero ket")
}

/// Spectrum of the Bell-diagonal state with correlations `c`, in the order
/// singlet, (1 - c₁ + c₂ + c₃), (1 + c₁ - c₂ + c₃), (1 + c₁ + c₂ - c₃), each over 4.
pub fn bell_diagonal_spectrum(c: [f64; 3]) -> [f64; 4] {
    let [c1, c2, c3] = c;
    [
        0.25 * (1.0 - c1 - c2 - c3),
        0.25 * (1.0 - c1 + c2 + c3),
        0.25 * (1.0 + c1 - c2 + c3),
        0.25 * (1.0 + c1 + c2 - c3),
    ]
}

pub fn is_physical_bell_diagonal(c: [f64; 3]) -> bool {
    c.iter().all(|x| x.is_finite())
        && bell_diagonal_spectrum(c)
            .iter()
            .all(|&l| l >= -crate::pauli::PSD_TOL)
}

/// `¼(I⊗I + Σ cᵢ σᵢ⊗σᵢ)`
pub fn bell_diagonal(c: [f64; 3]) -> Result<TwoQubitState> {
    density_from_theta(&PauliTheta::bell_diagonal(c))
}

/// Bell-diagonal state with amplitude damping of strength `p` on qubit B.
pub fn damped_bell_diagonal(c: [f64; 3], p: f64) -> Result<TwoQubitState> {
    let state = bell_diagonal(c)?;
    Ok(apply_local_b(&state, &amplitude_damping(p)?))
}

/// `p₀ ρ₀ᴬ⊗ρ₀ᴮ + (1-p₀) ρ₁ᴬ⊗ρ₁ᴮ`
pub fn two_term_mixture(
    p0: f64,
    a0: &SingleQubitState,
    b0: &SingleQubitState,
    a1: &SingleQubitState,
    b1: &SingleQubitState,
) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::DomainError(alloc::format!(
            "weight {p0} outside [0, 1]"
        )));
    }
    let first = TwoQubitState::product(a0, b0);
    let second = TwoQubitState::product(a1, b1);
    TwoQubitState::mixture(&[(p0, &first), (1.0 - p0, &second)])
}

/// `½|+⟩⟨+|⊗ρ_B⁺ + ½|0⟩⟨0|⊗ρ_B⁰`, whose `E_B` is the segment between the two
/// B Bloch vectors.
pub fn needle_family(rho_b_plus: &SingleQubitState, rho_b_zero: &SingleQubitState) -> Result<TwoQubitState> {
    two_term_mixture(0.5, &ket_plus(), rho_b_plus, &ket_zero(), rho_b_zero)
}

/// Quantum-classical state `p₀ ρ₀ᴬ⊗|φ₀⟩⟨φ₀| + p₁ ρ₁ᴬ⊗|φ₁⟩⟨φ₁|`, with
/// `|φ_i⟩` the columns of the unitary `basis`.
pub fn quantum_classical(
    p0: f64,
    a0: &SingleQubitState,
    a1: &SingleQubitState,
    basis: &CMat2,
) -> Result<TwoQubitState> {
    let phi0 = SingleQubitState::pure([basis[(0, 0)], basis[(1, 0)]])?;
    let phi1 = SingleQubitState::pure([basis[(0, 1)], basis[(1, 1)]])?;
    two_term_mixture(p0, a0, &phi0, a1, &phi1)
}

/// `(1-δ)(½|+⟩⟨+|⊗|1⟩⟨1| + ½|0⟩⟨0|⊗|0⟩⟨0|) + δ ρ_A⊗I/2`: a noisy needle
/// state whose `E_A` has length `√2(1-δ)`.
pub fn noisy_needle_example(delta: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::DomainError(alloc::format!(
            "delta {delta} outside [0, 1]"
        )));
    }
    let base = needle_family(&ket_one(), &ket_zero())?;
    let rho_a = base.reduced(crate::Side::A);
    let noise = TwoQubitState::product(&rho_a, &SingleQubitState::maximally_mixed());
    TwoQubitState::mixture(&[(1.0 - delta, &base), (delta, &noise)])
}

/// `½|+⟩⟨+|⊗|φ_δ⟩⟨φ_δ| + ½|0⟩⟨0|⊗|0⟩⟨0|` with `|φ_δ⟩ = δ|0⟩ + √(1-δ²)|1⟩`:
/// a needle state whose `E_A` has length `√2`.
pub fn tilted_needle_example(delta: f64) -> Result<TwoQubitState> {
    if !(0.0..=1.0).contains(&delta) {
        return Err(Error::DomainError(alloc::format!(
            "delta {delta} outside [0, 1]"
        )));
    }
    let phi = SingleQubitState::pure([re(delta), re((1.0 - delta * delta).sqrt())])?;
    needle_family(&phi, &ket_zero())
}

/// Bloch vector of `|+⟩` averaged with `|0⟩`: the A marginal of the needle family.
pub fn needle_family_marginal_a() -> Vector3<f64> {
    Vector3::new(0.5, 0.0, 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Side;
    use approx::assert_abs_diff_eq;

    #[test]
    fn spectrum_sums_to_one() {
        let s = bell_diagonal_spectrum([0.9, -0.1, 0.09]);
        assert_abs_diff_eq!(s.iter().sum::<f64>(), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(s[2], 0.5225, epsilon = 1e-15);
        assert!(is_physical_bell_diagonal([-1.0, -1.0, -1.0]));
        assert!(!is_physical_bell_diagonal([1.0, 1.0, 1.0]));
    }

    #[test]
    fn needle_family_marginals() {
        let s = needle_family(&ket_one(), &ket_zero()).unwrap();
        assert_abs_diff_eq!(
            s.reduced(Side::A).bloch().vector(),
            needle_family_marginal_a(),
            epsilon = 1e-15
        );
        assert_abs_diff_eq!(s.reduced(Side::B).bloch().vector(), Vector3::zeros(), epsilon = 1e-15);
    }

    #[test]
    fn damped_bell_b_marginal() {
        let s = damped_bell_diagonal([0.9, -0.1, 0.09], 0.3).unwrap();
        assert_abs_diff_eq!(
            s.reduced(Side::B).bloch().vector(),
            Vector3::new(0.0, 0.0, 0.3),
            epsilon = 1e-15
        );
    }

    #[test]
    fn length_examples_share_marginal() {
        let r1 = noisy_needle_example(0.1).unwrap();
        let r2 = tilted_needle_example(0.1).unwrap();
        assert_abs_diff_eq!(
            r1.reduced(Side::A).bloch().vector(),
            r2.reduced(Side::A).bloch().vector(),
            epsilon = 1e-15
        );
    }
}
