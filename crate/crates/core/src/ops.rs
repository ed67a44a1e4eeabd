//! Two-qubit operators in the canonical product basis.
//!
//! The basis ordering is `{|11>, |10>, |01>, |00>}` everywhere in the crate:
//! index `2 * a + b` where `a` and `b` are 0 for an excited qubit and 1 for a
//! ground-state qubit. Qubit 1 is the left tensor factor.
//!
//! Superoperators act on column-stacked density matrices, so `rho -> A rho B`
//! is represented by `B^T (x) A`.

use nalgebra::{Matrix2, Matrix4, SMatrix, SVector};
use num_complex::Complex64;

pub type C64 = Complex64;
/// A 4x4 operator on the two-qubit Hilbert space.
pub type Op = Matrix4<C64>;
/// A 16x16 superoperator acting on column-stacked 4x4 matrices.
pub type SuperOp = SMatrix<C64, 16, 16>;
/// A column-stacked 4x4 matrix.
pub type VecOp = SVector<C64, 16>;

pub(crate) fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Single-qubit `sigma_z` in the `{|1>, |0>}` ordering.
pub fn sz() -> Matrix2<C64> {
    Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0))
}

pub fn sx() -> Matrix2<C64> {
    Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0))
}

pub fn sy() -> Matrix2<C64> {
    // sigma_y |0> = i|1>, sigma_y |1> = -i|0>
    Matrix2::new(c(0.0), I, -I, c(0.0))
}

/// Lowering operator `|0><1|`.
pub fn sminus() -> Matrix2<C64> {
    Matrix2::new(c(0.0), c(0.0), c(1.0), c(0.0))
}

pub fn splus() -> Matrix2<C64> {
    sminus().adjoint()
}

pub fn id2() -> Matrix2<C64> {
    Matrix2::identity()
}

pub fn kron2(a: &Matrix2<C64>, b: &Matrix2<C64>) -> Op {
    a.kronecker(b)
}

/// Lift a single-qubit operator onto qubit `q` (1 or 2).
pub fn on_qubit(q: usize, a: &Matrix2<C64>) -> Op {
    match q {
        1 => kron2(a, &id2()),
        2 => kron2(&id2(), a),
        _ => panic!("qubit index must be 1 or 2, got {q}"),
    }
}

pub fn identity() -> Op {
    Op::identity()
}

pub fn commutator(a: &Op, b: &Op) -> Op {
    a * b - b * a
}

pub fn anticommutator(a: &Op, b: &Op) -> Op {
    a * b + b * a
}

/// Superoperator of `rho -> left * rho * right`.
pub fn sandwich(left: &Op, right: &Op) -> SuperOp {
    right.transpose().kronecker(left)
}

/// Superoperator of `rho -> -i [h, rho]`.
pub fn commutator_superop(h: &Op) -> SuperOp {
    let id = identity();
    (sandwich(h, &id) - sandwich(&id, h)) * (-I)
}

pub fn vectorize(m: &Op) -> VecOp {
    VecOp::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &VecOp) -> Op {
    Op::from_column_slice(v.as_slice())
}

/// Row vector `r` with `r . vec(rho) = Tr(rho)`.
pub fn trace_row() -> SMatrix<C64, 1, 16> {
    let mut r = SMatrix::<C64, 1, 16>::zeros();
    for k in 0..4 {
        r[k * 4 + k] = c(1.0);
    }
    r
}

pub fn max_abs<const R: usize, const C: usize>(m: &SMatrix<C64, R, C>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_residual(m: &Op) -> f64 {
    max_abs(&(m - m.adjoint()))
}

/// Orthonormal Hermitian basis `sigma_a (x) sigma_b / 2` of the operator space.
pub fn pauli_basis() -> [Op; 16] {
    let singles = [id2(), sx(), sy(), sz()];
    let mut out = [Op::zeros(); 16];
    for (a, pa) in singles.iter().enumerate() {
        for (b, pb) in singles.iter().enumerate() {
            out[4 * a + b] = kron2(pa, pb) * c(0.5);
        }
    }
    out
}

/// Real matrix of a Hermiticity-preserving superoperator in the Pauli basis.
pub fn real_representation(l: &SuperOp) -> SMatrix<f64, 16, 16> {
    let basis = pauli_basis();
    let mut out = SMatrix::<f64, 16, 16>::zeros();
    for (j, pj) in basis.iter().enumerate() {
        let image = unvectorize(&(l * vectorize(pj)));
        for (i, pi) in basis.iter().enumerate() {
            out[(i, j)] = (pi * image).trace().re;
        }
    }
    out
}
