//! Quantum steering ellipsoids.
//!
//! Projecting B onto the pure state with Bloch vector `x` steers A to
//! `(a + T x)/(1 + b·x)`. After the SLOCC normalisation `S_B = (2ρ_B)^{-1/2}`
//! the B marginal vanishes and the set of steered states is the ellipsoid
//! `E_A = {a' + T' x : |x| ≤ 1}`. `E_B` follows by exchanging the roles of the
//! qubits (`a ↔ b`, `T → Tᵀ`).

use core::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::linalg::{self, CMat2};
use crate::pauli::{BlochVector, Side, TwoQubitState};
use crate::{Error, Result};
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

/// `1 - |r|²` at or below this marks a pure marginal.
pub const PURITY_TOL: f64 = 1e-12;
/// Semiaxes below this fraction of the largest count as zero.
pub const SEMIAXIS_REL_TOL: f64 = 1e-9;
/// Absolute floor for a nonzero semiaxis.
pub const SEMIAXIS_ABS_TOL: f64 = 1e-12;

/// A (possibly degenerate) ellipsoid `{center + Σ sᵢ yᵢ uᵢ : |y| ≤ 1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ellipsoid {
    pub center: BlochVector,
    /// Descending.
    pub semiaxes: Vector3<f64>,
    /// Columns are the axis directions matching `semiaxes`.
    pub axes: Matrix3<f64>,
    /// Number of nonzero semiaxes.
    pub dim: usize,
}

impl Ellipsoid {
    pub fn point(center: Vector3<f64>) -> Self {
        Self {
            center: BlochVector(center),
            semiaxes: Vector3::zeros(),
            axes: Matrix3::identity(),
            dim: 0,
        }
    }

    /// Ellipsoid traced out by `center + L x` for `|x| ≤ 1`.
    pub fn from_linear_map(center: Vector3<f64>, l: &Matrix3<f64>) -> Self {
        let (s, mut u, _) = linalg::svd3(l);
        canonicalize_axes(&mut u);
        let dim = count_nonzero(&s);
        Self {
            center: BlochVector(center),
            semiaxes: s,
            axes: u,
            dim,
        }
    }

    /// `U diag(s²) Uᵀ`, independent of axis order and sign conventions.
    pub fn shape_matrix(&self) -> Matrix3<f64> {
        let s2 = self.semiaxes.component_mul(&self.semiaxes);
        self.axes * Matrix3::from_diagonal(&s2) * self.axes.transpose()
    }

    /// Surface/interior point for axis coordinates `y` (`|y| ≤ 1` is inside).
    pub fn point_at(&self, y: &Vector3<f64>) -> Vector3<f64> {
        self.center.0 + self.axes * self.semiaxes.component_mul(y)
    }

    /// The two ends of the longest axis.
    pub fn endpoints(&self) -> (Vector3<f64>, Vector3<f64>) {
        let half = self.axes.column(0) * self.semiaxes[0];
        (self.center.0 + half, self.center.0 - half)
    }

    /// Membership with tolerance: the point must lie within `tol` of the affine
    /// span, and its normalised axis coordinates must have norm ≤ `1 + tol`.
    pub fn contains(&self, p: &Vector3<f64>, tol: f64) -> bool {
        let z = self.axes.transpose() * (p - self.center.0);
        let mut r2 = 0.0;
        for i in 0..3 {
            if i < self.dim {
                let y = z[i] / self.semiaxes[i];
                r2 += y * y;
            } else if z[i].abs() > tol {
                return false;
            }
        }
        r2.sqrt() <= 1.0 + tol
    }
}

fn count_nonzero(s: &Vector3<f64>) -> usize {
    if s[0] <= SEMIAXIS_ABS_TOL {
        return 0;
    }
    s.iter()
        .filter(|&&x| x > SEMIAXIS_REL_TOL * s[0] && x > SEMIAXIS_ABS_TOL)
        .count()
}

/// First clearly nonzero component of each axis made positive.
fn canonicalize_axes(u: &mut Matrix3<f64>) {
    for j in 0..3 {
        let mut col = u.column_mut(j);
        if let Some(first) = col.iter().copied().find(|x| x.abs() > 1e-12) {
            if first < 0.0 {
                col.neg_mut();
            }
        }
    }
}

/// Probability and post-measurement Bloch vector of the steered qubit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteeredOutcome {
    pub probability: f64,
    pub bloch: BlochVector,
}

/// Blocks `(own, other, correlation)` with the correlation oriented so that
/// measuring the other qubit along `x` contributes `correlation · x`.
fn oriented_blocks(state: &TwoQubitState, steered: Side) -> (Vector3<f64>, Vector3<f64>, Matrix3<f64>) {
    let th = state.theta();
    match steered {
        Side::A => (th.a(), th.b(), th.t()),
        Side::B => (th.b(), th.a(), th.t().transpose()),
    }
}

/// Outcome of projecting the *other* qubit onto the pure state with unit
/// Bloch vector `x`, as seen on `steered_side`.
pub fn steered_state(state: &TwoQubitState, x: &BlochVector, steered_side: Side) -> Result<SteeredOutcome> {
    if (x.norm() - 1.0).abs() > 1e-10 {
        return Err(Error::DomainError(alloc::format!(
            "measurement direction has norm {}",
            x.norm()
        )));
    }
    let (own, other, corr) = oriented_blocks(state, steered_side);
    let weight = 1.0 + other.dot(&x.0);
    let probability = 0.5 * weight;
    if probability < 1e-12 {
        return Err(Error::ZeroProbabilityOutcome { probability });
    }
    Ok(SteeredOutcome {
        probability,
        bloch: BlochVector((own + corr * x.0) / weight),
    })
}

/// `(2ρ)^{-1/2}` for the reduced state on `side`.
pub fn slocc_operator(state: &TwoQubitState, side: Side) -> Result<CMat2> {
    let reduced = state.reduced(side);
    let r = reduced.bloch().norm();
    if 1.0 - r * r <= PURITY_TOL {
        return Err(Error::ProductStateDegenerate);
    }
    Ok(linalg::inv_sqrtm_pd2(&(reduced.density() * linalg::re(2.0))))
}

/// Applies `(2ρ_side)^{-1/2}` on `side` and renormalises, which sends that
/// side's Bloch vector to zero and leaves the other side's ellipsoid alone.
pub fn slocc_normalize(state: &TwoQubitState, side: Side) -> Result<TwoQubitState> {
    let s = slocc_operator(state, side)?;
    let id = linalg::pauli(0);
    match side {
        Side::A => state.local_operation(&s, &id),
        Side::B => state.local_operation(&id, &s),
    }
}

/// The steering ellipsoid of `side`. A pure marginal on the other side means
/// a product state, whose ellipsoid is the single point of `side`'s marginal.
pub fn steering_ellipsoid(state: &TwoQubitState, side: Side) -> Ellipsoid {
    let (own, other, _) = oriented_blocks(state, side);
    if 1.0 - other.norm_squared() <= PURITY_TOL {
        return Ellipsoid::point(own);
    }
    let normalized = slocc_normalize(state, side.other())
        .expect("mixed marginal admits SLOCC normalisation");
    let (center, _, corr) = oriented_blocks(&normalized, side);
    Ellipsoid::from_linear_map(center, &corr)
}

/// A segment (or point) whose supporting line passes through the origin:
/// `|e₀ × e₁| ≤ tol` for the two endpoints.
pub fn is_radial_segment(e: &Ellipsoid, tol: f64) -> bool {
    match e.dim {
        0 => true,
        1 => {
            let (p, q) = e.endpoints();
            p.cross(&q).norm() <= tol
        }
        _ => false,
    }
}

/// Length `2 s₁` of a needle or point.
pub fn needle_length(e: &Ellipsoid) -> Result<f64> {
    if e.dim > 1 {
        return Err(Error::NotANeedle { dim: e.dim });
    }
    Ok(if e.dim == 0 { 0.0 } else { 2.0 * e.semiaxes[0] })
}

/// Whether the origin is in the ellipsoid: first within `tol` of its affine
/// span, then inside the body.
pub fn contains_origin(e: &Ellipsoid, tol: f64) -> bool {
    e.contains(&Vector3::zeros(), tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipsoidSize {
    /// `2 s₁`
    pub length: f64,
    /// `4π s₁ s₂`. Only the product matters for comparisons; the constant
    /// mirrors the volume's so that both scale the same way with the sphere.
    pub area: f64,
    /// `4π/3 s₁ s₂ s₃`
    pub volume: f64,
}

pub fn ellipsoid_size(e: &Ellipsoid) -> EllipsoidSize {
    let s = e.semiaxes;
    let keep = |i: usize| if i < e.dim { s[i] } else { 0.0 };
    EllipsoidSize {
        length: 2.0 * keep(0),
        area: 4.0 * PI * keep(0) * keep(1),
        volume: 4.0 * PI / 3.0 * keep(0) * keep(1) * keep(2),
    }
}
