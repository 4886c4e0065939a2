use crate::algebra::Rational;

use super::linalg::{kernel, SparseVec};

/// Dimension of the global sections of `O(n)`.
///
/// A section is a pair of polynomials `p(z)`, `q(w)` with
/// `p(z) = z^n q(1/z)` on the overlap. Both are taken of degree at most
/// `|n| + 2` and the space of solutions is computed as a kernel.
pub fn borel_weil_dim(n: i64) -> usize {
    let d = n.unsigned_abs() as i64 + 2;
    // unknowns: p_0..p_d, then q_0..q_d; one equation per exponent of z
    let mut columns: Vec<SparseVec<i64>> = Vec::new();
    for i in 0..=d {
        columns.push(SparseVec::from([(i, Rational::one())]));
    }
    for j in 0..=d {
        columns.push(SparseVec::from([(n - j, Rational::from(-1))]));
    }
    kernel(&columns).len()
}
