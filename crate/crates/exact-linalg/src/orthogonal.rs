//! Integer orthogonal bases of nullspaces.

use exact_rings::rational::primitive_integer_row;
use exact_rings::Rational;
use num_bigint::BigInt;
use num_traits::Zero;

use crate::field::nullspace;

/// Pairwise-orthogonal primitive integer vectors spanning `{x : M′x = 0}`,
/// the direction space of `{y : M′y = b′}`. Gram–Schmidt runs over `Q`
/// against the already-scaled integer vectors, which keeps entries small.
pub fn integer_orthogonal_basis(matrix: &[Vec<Rational>], cols: usize) -> Vec<Vec<BigInt>> {
    let mut out: Vec<Vec<BigInt>> = Vec::new();
    let mut norms: Vec<BigInt> = Vec::new();
    for v in nullspace(matrix, cols, &Rational::zero()) {
        let mut u = v.clone();
        for (q, nq) in out.iter().zip(&norms) {
            let d: Rational = v.iter().zip(q).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * Rational::from_integer(y.clone())).sum();
            if d.is_zero() {
                continue;
            }
            let f = d / Rational::from_integer(nq.clone());
            for (x, y) in u.iter_mut().zip(q) {
                *x -= &f * Rational::from_integer(y.clone());
            }
        }
        let q = primitive_integer_row(&u);
        norms.push(q.iter().map(|x| x * x).sum());
        out.push(q);
    }
    out
}
