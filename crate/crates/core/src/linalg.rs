//! Small dense helpers for 2×2 and 4×4 complex matrices.
//!
//! Index convention: σ₀..σ₃ = I, X, Y, Z; two-qubit basis ordering
//! |00⟩, |01⟩, |10⟩, |11⟩ with qubit A as the left tensor factor.

use nalgebra::{Matrix2, Matrix3, Matrix4, SMatrix, Vector3, Vector4};
use num_complex::Complex;
#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;

pub type C64 = Complex<f64>;
pub type CMat2 = Matrix2<C64>;
pub type CMat4 = Matrix4<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Largest entry-wise modulus of `a − b`.
pub fn max_abs_diff<const R: usize, const C: usize>(a: &SMatrix<C64, R, C>, b: &SMatrix<C64, R, C>) -> f64 {
    a.iter().zip(b.iter()).fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

#[inline]
pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Pauli matrix σ_μ, μ ∈ {0, 1, 2, 3}.
pub fn pauli(mu: usize) -> CMat2 {
    match mu {
        0 => CMat2::new(ONE, ZERO, ZERO, ONE),
        1 => CMat2::new(ZERO, ONE, ONE, ZERO),
        2 => CMat2::new(ZERO, -I, I, ZERO),
        3 => CMat2::new(ONE, ZERO, ZERO, -ONE),
        _ => panic!("Pauli index {mu} out of range"),
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMat2, b: &CMat2) -> CMat4 {
    let mut out = CMat4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// `I ⊗ b`
pub fn lift_b(b: &CMat2) -> CMat4 {
    kron(&pauli(0), b)
}

/// `a ⊗ I`
pub fn lift_a(a: &CMat2) -> CMat4 {
    kron(a, &pauli(0))
}

/// Trace over qubit B, leaving the 2×2 state of A.
pub fn trace_out_b(rho: &CMat4) -> CMat2 {
    let mut out = CMat2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = rho[(2 * i, 2 * j)] + rho[(2 * i + 1, 2 * j + 1)];
        }
    }
    out
}

/// Trace over qubit A, leaving the 2×2 state of B.
pub fn trace_out_a(rho: &CMat4) -> CMat2 {
    let mut out = CMat2::zeros();
    for k in 0..2 {
        for l in 0..2 {
            out[(k, l)] = rho[(k, l)] + rho[(2 + k, 2 + l)];
        }
    }
    out
}

pub fn hermitize4(m: &CMat4) -> CMat4 {
    (m + m.adjoint()).scale(0.5)
}

pub fn hermitize2(m: &CMat2) -> CMat2 {
    (m + m.adjoint()).scale(0.5)
}

/// Largest entry modulus of `m - m†`.
pub fn hermiticity_defect4(m: &CMat4) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn hermiticity_defect2(m: &CMat2) -> f64 {
    (m - m.adjoint()).iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Eigen-decomposition of a Hermitian 4×4 matrix, eigenvalues ascending.
///
/// The input is symmetrised first, so tiny anti-Hermitian rounding is ignored.
pub fn eigh4(m: &CMat4) -> (Vector4<f64>, CMat4) {
    let eig = hermitize4(m).symmetric_eigen();
    let mut order = [0usize, 1, 2, 3];
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut values = Vector4::zeros();
    let mut vectors = CMat4::zeros();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = eig.eigenvalues[src];
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian 4×4 matrix, ascending.
pub fn eigvalsh4(m: &CMat4) -> Vector4<f64> {
    eigh4(m).0
}

/// Closed-form eigenvalues of a Hermitian 2×2 matrix, ascending.
pub fn eigvalsh2(m: &CMat2) -> [f64; 2] {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let off = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
    let mean = 0.5 * (a + d);
    let half_gap = (0.25 * (a - d) * (a - d) + off.norm_sqr()).sqrt();
    [mean - half_gap, mean + half_gap]
}

/// Eigen-decomposition of a Hermitian 2×2 matrix, eigenvalues ascending.
pub fn eigh2(m: &CMat2) -> ([f64; 2], CMat2) {
    let eig = hermitize2(m).symmetric_eigen();
    let (lo, hi) = if eig.eigenvalues[0] <= eig.eigenvalues[1] {
        (0, 1)
    } else {
        (1, 0)
    };
    let mut vectors = CMat2::zeros();
    vectors.set_column(0, &eig.eigenvectors.column(lo));
    vectors.set_column(1, &eig.eigenvectors.column(hi));
    ([eig.eigenvalues[lo], eig.eigenvalues[hi]], vectors)
}

/// Principal square root of a Hermitian PSD 4×4 matrix; negative rounding
/// eigenvalues are clipped to zero.
pub fn sqrtm_psd4(m: &CMat4) -> CMat4 {
    let (vals, vecs) = eigh4(m);
    let mut d = CMat4::zeros();
    for i in 0..4 {
        d[(i, i)] = re(vals[i].max(0.0).sqrt());
    }
    vecs * d * vecs.adjoint()
}

/// `m^{-1/2}` for a positive-definite Hermitian 2×2 matrix.
pub fn inv_sqrtm_pd2(m: &CMat2) -> CMat2 {
    let (vals, vecs) = eigh2(m);
    let d = CMat2::new(re(1.0 / vals[0].sqrt()), ZERO, ZERO, re(1.0 / vals[1].sqrt()));
    vecs * d * vecs.adjoint()
}

pub fn trace4(m: &CMat4) -> C64 {
    m.diagonal().iter().sum()
}

pub fn trace2(m: &CMat2) -> C64 {
    m[(0, 0)] + m[(1, 1)]
}

/// Bloch vector `(tr ρσ₁, tr ρσ₂, tr ρσ₃)` of a 2×2 operator.
pub fn bloch_of(m: &CMat2) -> Vector3<f64> {
    Vector3::new(
        2.0 * m[(0, 1)].re,
        2.0 * m[(1, 0)].im,
        (m[(0, 0)] - m[(1, 1)]).re,
    )
}

/// `½(w·I + r·σ)`
pub fn qubit_operator(weight: f64, r: &Vector3<f64>) -> CMat2 {
    CMat2::new(
        re(0.5 * (weight + r.z)),
        C64::new(0.5 * r.x, -0.5 * r.y),
        C64::new(0.5 * r.x, 0.5 * r.y),
        re(0.5 * (weight - r.z)),
    )
}

/// Binary entropy in bits, `H(q) = -q log₂ q - (1-q) log₂(1-q)`.
pub fn binary_entropy(q: f64) -> f64 {
    xlog2x(q) + xlog2x(1.0 - q)
}

/// `-x log₂ x` with the `0·log 0 = 0` convention; nonpositive input gives 0.
#[inline]
pub fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Entropy (bits) of a qubit whose Bloch vector has length `r`.
#[inline]
pub fn qubit_entropy_from_radius(r: f64) -> f64 {
    let r = r.clamp(0.0, 1.0);
    binary_entropy(0.5 * (1.0 + r))
}

/// Singular values (descending) and the matching left singular vectors of a
/// real 3×3 matrix, as columns.
pub fn svd3(m: &Matrix3<f64>) -> (Vector3<f64>, Matrix3<f64>, Matrix3<f64>) {
    let svd = m.svd(true, true);
    let u = svd.u.expect("requested U");
    let v_t = svd.v_t.expect("requested V^T");
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
    let mut s = Vector3::zeros();
    let mut uu = Matrix3::zeros();
    let mut vv = Matrix3::zeros();
    for (dst, &src) in order.iter().enumerate() {
        s[dst] = svd.singular_values[src];
        uu.set_column(dst, &u.column(src));
        vv.set_column(dst, &v_t.row(src).transpose());
    }
    (s, uu, vv)
}

/// Singular values of a real 4×4 matrix, descending.
pub fn singular_values4(m: &Matrix4<f64>) -> Vector4<f64> {
    let mut s = m.singular_values();
    s.as_mut_slice().sort_by(|a, b| b.total_cmp(a));
    s
}

/// Numerical rank with a threshold relative to the largest singular value.
pub fn rank4(m: &Matrix4<f64>, rel_tol: f64) -> usize {
    let s = singular_values4(m);
    if s[0] == 0.0 {
        return 0;
    }
    s.iter().filter(|&&x| x > rel_tol * s[0]).count()
}
