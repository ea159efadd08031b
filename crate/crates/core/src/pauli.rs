//! One- and two-qubit states in density-matrix and Pauli-coefficient form.
//!
//! A two-qubit state is expanded as `ρ = ¼ Σ Θ_{μν} σ_μ ⊗ σ_ν`, with the real
//! 4×4 coefficient matrix in block form `Θ = (1, bᵀ; a, T)`: `a` and `b` are
//! the reduced Bloch vectors and `T` the correlation matrix.

use alloc::format;
use core::ops::Deref;

use nalgebra::{Matrix3, Matrix4, Vector3, Vector4};

use crate::linalg::{
    self, bloch_of, eigvalsh2, eigvalsh4, hermiticity_defect2, hermiticity_defect4, kron, pauli,
    qubit_operator, re, trace2, trace4, CMat2, CMat4, C64,
};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// Hermiticity and trace tolerance for accepted states.
pub const STATE_TOL: f64 = 1e-12;
/// Most negative eigenvalue accepted as rounding noise.
pub const PSD_TOL: f64 = 1e-10;

/// Which qubit of the pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// Vector of Pauli expectation values `(⟨σ₁⟩, ⟨σ₂⟩, ⟨σ₃⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector(pub Vector3<f64>);

impl BlochVector {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self(Vector3::new(x, y, z))
    }

    pub fn zero() -> Self {
        Self(Vector3::zeros())
    }

    /// Unit vector along the given spherical angles.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Self::new(st * cp, st * sp, ct)
    }

    pub fn vector(&self) -> Vector3<f64> {
        self.0
    }

    pub fn is_pure(&self, tol: f64) -> bool {
        (self.0.norm() - 1.0).abs() <= tol
    }
}

impl Deref for BlochVector {
    type Target = Vector3<f64>;

    fn deref(&self) -> &Vector3<f64> {
        &self.0
    }
}

impl From<Vector3<f64>> for BlochVector {
    fn from(v: Vector3<f64>) -> Self {
        Self(v)
    }
}

/// The real coefficient matrix `Θ_{μν} = tr(ρ σ_μ ⊗ σ_ν)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PauliTheta(Matrix4<f64>);

impl PauliTheta {
    /// Wraps a raw matrix; no physicality check is made here.
    pub fn from_matrix(m: Matrix4<f64>) -> Self {
        Self(m)
    }

    pub fn from_blocks(a: &Vector3<f64>, b: &Vector3<f64>, t: &Matrix3<f64>) -> Self {
        let mut m = Matrix4::zeros();
        m[(0, 0)] = 1.0;
        for i in 0..3 {
            m[(i + 1, 0)] = a[i];
            m[(0, i + 1)] = b[i];
            for j in 0..3 {
                m[(i + 1, j + 1)] = t[(i, j)];
            }
        }
        Self(m)
    }

    /// `diag(1, c₁, c₂, c₃)`, the Bell-diagonal coefficient matrix.
    pub fn bell_diagonal(c: [f64; 3]) -> Self {
        Self(Matrix4::from_diagonal(&Vector4::new(1.0, c[0], c[1], c[2])))
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    pub fn get(&self, mu: usize, nu: usize) -> f64 {
        self.0[(mu, nu)]
    }

    /// Bloch vector of qubit A (column block).
    pub fn a(&self) -> Vector3<f64> {
        Vector3::new(self.0[(1, 0)], self.0[(2, 0)], self.0[(3, 0)])
    }

    /// Bloch vector of qubit B (row block).
    pub fn b(&self) -> Vector3<f64> {
        Vector3::new(self.0[(0, 1)], self.0[(0, 2)], self.0[(0, 3)])
    }

    /// Correlation block `T_{ij} = tr(ρ σ_i ⊗ σ_j)`.
    pub fn t(&self) -> Matrix3<f64> {
        self.0.fixed_view::<3, 3>(1, 1).into_owned()
    }

    /// Coefficients of the state with the qubits exchanged: `Θᵀ`.
    pub fn swapped(&self) -> Self {
        Self(self.0.transpose())
    }

    /// Numerical rank with a singular-value threshold relative to the largest.
    pub fn rank(&self, rel_tol: f64) -> usize {
        linalg::rank4(&self.0, rel_tol)
    }

    /// `ρ = ¼ Σ Θ_{μν} σ_μ ⊗ σ_ν` without any validity check.
    pub fn to_density_unchecked(&self) -> CMat4 {
        let mut rho = CMat4::zeros();
        for mu in 0..4 {
            for nu in 0..4 {
                let c = self.0[(mu, nu)];
                if c != 0.0 {
                    rho += kron(&pauli(mu), &pauli(nu)).scale(0.25 * c);
                }
            }
        }
        rho
    }
}

/// Defects of a candidate 4×4 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidationReport {
    pub hermiticity_defect: f64,
    pub trace_defect: f64,
    pub min_eigenvalue: f64,
    pub finite: bool,
}

impl ValidationReport {
    pub fn hermitian(&self) -> bool {
        self.hermiticity_defect <= STATE_TOL
    }

    pub fn unit_trace(&self) -> bool {
        self.trace_defect <= STATE_TOL
    }

    pub fn positive(&self) -> bool {
        self.min_eigenvalue >= -PSD_TOL
    }

    pub fn passes(&self) -> bool {
        self.finite && self.hermitian() && self.unit_trace() && self.positive()
    }
}

/// Reports Hermiticity, trace and positivity defects of `rho`.
pub fn validate_state(rho: &CMat4) -> ValidationReport {
    let finite = rho.iter().all(|z| z.re.is_finite() && z.im.is_finite());
    if !finite {
        return ValidationReport {
            hermiticity_defect: f64::INFINITY,
            trace_defect: f64::INFINITY,
            min_eigenvalue: f64::NEG_INFINITY,
            finite,
        };
    }
    let tr = trace4(rho);
    ValidationReport {
        hermiticity_defect: hermiticity_defect4(rho),
        trace_defect: (tr - C64::new(1.0, 0.0)).norm(),
        min_eigenvalue: eigvalsh4(rho)[0],
        finite,
    }
}

/// A validated two-qubit density matrix with its cached Θ view.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoQubitState {
    rho: CMat4,
    theta: PauliTheta,
}

impl TwoQubitState {
    /// Accepts `rho` only if it passes [`validate_state`] as is.
    pub fn from_density(rho: CMat4) -> Result<Self> {
        let report = validate_state(&rho);
        if !report.finite {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        if !report.hermitian() {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {:.3e})",
                report.hermiticity_defect
            )));
        }
        if !report.unit_trace() {
            return Err(Error::InvalidState(format!(
                "trace defect {:.3e}",
                report.trace_defect
            )));
        }
        if !report.positive() {
            return Err(Error::NotAState {
                min_eigenvalue: report.min_eigenvalue,
            });
        }
        let rho = linalg::hermitize4(&rho);
        let theta = theta_of(&rho);
        Ok(Self { rho, theta })
    }

    /// Symmetrises, clips eigenvalues in `[-1e-10, 0)` to zero and rescales to
    /// unit trace. Larger negativity or a vanishing trace is an error.
    pub fn from_density_normalized(rho: CMat4) -> Result<Self> {
        if !rho.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let h = linalg::hermitize4(&rho);
        let tr = trace4(&h).re;
        if tr <= PSD_TOL {
            return Err(Error::InvalidState(format!("trace {tr:.3e} is not positive")));
        }
        let h = h.unscale(tr);
        let (vals, vecs) = linalg::eigh4(&h);
        if vals[0] < -PSD_TOL {
            return Err(Error::NotAState {
                min_eigenvalue: vals[0],
            });
        }
        let rho = if vals[0] < 0.0 {
            let mut d = CMat4::zeros();
            let mut total = 0.0;
            for i in 0..4 {
                let v = vals[i].max(0.0);
                total += v;
                d[(i, i)] = re(v);
            }
            linalg::hermitize4(&(vecs * d * vecs.adjoint()).unscale(total))
        } else {
            h
        };
        let theta = theta_of(&rho);
        Ok(Self { rho, theta })
    }

    /// Equivalent to [`density_from_theta`].
    pub fn from_theta(theta: &PauliTheta) -> Result<Self> {
        density_from_theta(theta)
    }

    pub fn product(a: &SingleQubitState, b: &SingleQubitState) -> Self {
        let rho = kron(a.density(), b.density());
        let theta = theta_of(&rho);
        Self { rho, theta }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; the weights are renormalised.
    pub fn mixture(parts: &[(f64, &TwoQubitState)]) -> Result<Self> {
        let total: f64 = parts.iter().map(|(w, _)| *w).sum();
        if parts.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) || total <= 0.0 {
            return Err(Error::DomainError("mixture weights must be nonnegative".into()));
        }
        let mut rho = CMat4::zeros();
        for (w, s) in parts {
            rho += s.rho.scale(*w / total);
        }
        Self::from_density_normalized(rho)
    }

    pub fn density(&self) -> &CMat4 {
        &self.rho
    }

    pub fn theta(&self) -> &PauliTheta {
        &self.theta
    }

    /// Eigenvalues of ρ, ascending.
    pub fn eigenvalues(&self) -> Vector4<f64> {
        eigvalsh4(&self.rho)
    }

    pub fn reduced(&self, side: Side) -> SingleQubitState {
        reduced_state(self, side)
    }

    /// The same state with qubits A and B exchanged.
    pub fn swapped(&self) -> Self {
        let mut rho = CMat4::zeros();
        let swap = |i: usize| (i % 2) * 2 + i / 2;
        for i in 0..4 {
            for j in 0..4 {
                rho[(swap(i), swap(j))] = self.rho[(i, j)];
            }
        }
        Self {
            rho,
            theta: self.theta.swapped(),
        }
    }

    /// `(U_A ⊗ U_B) ρ (U_A ⊗ U_B)†` for any pair of 2×2 matrices, renormalised.
    /// Used both for local unitaries and for (invertible) SLOCC operators.
    pub fn local_operation(&self, op_a: &CMat2, op_b: &CMat2) -> Result<Self> {
        let k = kron(op_a, op_b);
        Self::from_density_normalized(k * self.rho * k.adjoint())
    }
}

/// Θ of a state already known to have unit trace; `Θ₀₀` is pinned to 1.
fn theta_of(rho: &CMat4) -> PauliTheta {
    let mut theta = raw_theta(rho);
    theta.0[(0, 0)] = 1.0;
    theta
}

fn raw_theta(rho: &CMat4) -> PauliTheta {
    let mut m = Matrix4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            m[(mu, nu)] = trace4(&(rho * kron(&pauli(mu), &pauli(nu)))).re;
        }
    }
    PauliTheta(m)
}

/// `Θ_{μν} = tr(ρ σ_μ ⊗ σ_ν)` for a raw matrix; rejects non-Hermitian input.
pub fn theta_from_density(rho: &CMat4) -> Result<PauliTheta> {
    let defect = hermiticity_defect4(rho);
    if defect.is_nan() || defect > STATE_TOL {
        return Err(Error::InvalidState(format!(
            "not Hermitian (defect {defect:.3e})"
        )));
    }
    Ok(raw_theta(rho))
}

/// Inverse map `ρ = ¼ Σ Θ_{μν} σ_μ ⊗ σ_ν`. Not every real matrix with
/// `Θ₀₀ = 1` is a state; negative spectra are reported as [`Error::NotAState`].
pub fn density_from_theta(theta: &PauliTheta) -> Result<TwoQubitState> {
    let t00 = theta.get(0, 0);
    if t00.is_nan() || (t00 - 1.0).abs() > STATE_TOL {
        return Err(Error::InvalidState(format!("Θ₀₀ = {t00}, expected 1")));
    }
    if !theta.matrix().iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidState("non-finite coefficients".into()));
    }
    let rho = theta.to_density_unchecked();
    let min_eigenvalue = eigvalsh4(&rho)[0];
    if min_eigenvalue < -PSD_TOL {
        return Err(Error::NotAState { min_eigenvalue });
    }
    Ok(TwoQubitState {
        rho,
        theta: *theta,
    })
}

/// Partial trace onto one qubit.
pub fn reduced_state(state: &TwoQubitState, side: Side) -> SingleQubitState {
    let rho = match side {
        Side::A => linalg::trace_out_b(&state.rho),
        Side::B => linalg::trace_out_a(&state.rho),
    };
    SingleQubitState {
        rho: linalg::hermitize2(&rho),
    }
}

/// A validated 2×2 density matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitState {
    rho: CMat2,
}

impl SingleQubitState {
    pub fn from_density(rho: CMat2) -> Result<Self> {
        if !rho.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let defect = hermiticity_defect2(&rho);
        if defect > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = trace2(&rho);
        if (tr - C64::new(1.0, 0.0)).norm() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {}", tr.re)));
        }
        let min_eigenvalue = eigvalsh2(&rho)[0];
        if min_eigenvalue < -PSD_TOL {
            return Err(Error::NotAState { min_eigenvalue });
        }
        Ok(Self {
            rho: linalg::hermitize2(&rho),
        })
    }

    /// State with Bloch vector `r`; `|r|` up to `1 + 1e-10` is accepted and
    /// pulled back onto the sphere.
    pub fn from_bloch(r: &Vector3<f64>) -> Result<Self> {
        let n = r.norm();
        if !n.is_finite() || n > 1.0 + PSD_TOL {
            return Err(Error::NotAState {
                min_eigenvalue: 0.5 * (1.0 - n),
            });
        }
        let r = if n > 1.0 { r / n } else { *r };
        Ok(Self {
            rho: qubit_operator(1.0, &r),
        })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalised) ket.
    pub fn pure(ket: [C64; 2]) -> Result<Self> {
        let n2 = ket[0].norm_sqr() + ket[1].norm_sqr();
        if n2.is_nan() || n2 <= 0.0 || !n2.is_finite() {
            return Err(Error::InvalidState("zero ket".into()));
        }
        let mut rho = CMat2::zeros();
        for i in 0..2 {
            for j in 0..2 {
                rho[(i, j)] = ket[i] * ket[j].conj() / n2;
            }
        }
        Ok(Self { rho })
    }

    pub fn maximally_mixed() -> Self {
        Self {
            rho: qubit_operator(1.0, &Vector3::zeros()),
        }
    }

    pub fn density(&self) -> &CMat2 {
        &self.rho
    }

    pub fn bloch(&self) -> BlochVector {
        BlochVector(bloch_of(&self.rho))
    }

    /// Eigenvalues, ascending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        eigvalsh2(&self.rho)
    }
}
