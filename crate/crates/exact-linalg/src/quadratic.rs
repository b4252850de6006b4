//! `Z[√q]` systems via the integer split.
//!
//! Writing `M = M₁ + M₂√q`, `b = b₁ + b₂√q` and `x = y + z√q`, the system
//! `Mx = b` holds iff
//!
//! ```text
//! M₁y + qM₂z = b₁
//! M₂y +  M₁z = b₂
//! ```
//!
//! because `1, √q` are independent over `Q`.

use exact_rings::{QuadElem, QuadRing};
use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::LinalgError;
use crate::integer::solve_integer_system;
use crate::system::LinearSystem;

/// The doubled integer system in unknowns `(y, z)`.
pub fn doubled_integer_system(sys: &LinearSystem<QuadElem>) -> Result<(LinearSystem<BigInt>, u64), LinalgError> {
    let q = match sys.context() {
        Some(e) => e.q(),
        None => return Ok((LinearSystem::new(vec![], vec![], 2 * sys.cols())?, 0)),
    };
    if sys.matrix().iter().flatten().chain(sys.rhs()).any(|e| e.q() != q) {
        return Err(LinalgError::RingMismatch);
    }
    let n = sys.cols();
    let qb = BigInt::from(q);
    let mut rows = Vec::with_capacity(2 * sys.rows());
    let mut rhs = Vec::with_capacity(2 * sys.rows());
    for (row, b) in sys.matrix().iter().zip(sys.rhs()) {
        let mut top: Vec<BigInt> = row.iter().map(|e| e.a.clone()).collect();
        top.extend(row.iter().map(|e| &e.b * &qb));
        let mut bottom: Vec<BigInt> = row.iter().map(|e| e.b.clone()).collect();
        bottom.extend(row.iter().map(|e| e.a.clone()));
        rows.push(top);
        rhs.push(b.a.clone());
        rows.push(bottom);
        rhs.push(b.b.clone());
    }
    Ok((LinearSystem::new(rows, rhs, 2 * n)?, q))
}

/// A solution with every coordinate in `Z[√q]`, or `None`.
///
/// `ring` supplies the context when the system has no entries at all.
pub fn solve_quadratic_int_system(
    sys: &LinearSystem<QuadElem>,
    ring: &QuadRing,
) -> Result<Option<Vec<QuadElem>>, LinalgError> {
    if sys.context().is_some_and(|e| e.q() != ring.q()) {
        return Err(LinalgError::RingMismatch);
    }
    let n = sys.cols();
    if sys.context().is_some() && sys.matrix().iter().flatten().all(|e| e.b.is_zero()) {
        // M has no √q part: My = b₁ and Mz = b₂ separately
        if sys.matrix().iter().flatten().chain(sys.rhs()).any(|e| e.q() != ring.q()) {
            return Err(LinalgError::RingMismatch);
        }
        let m: Vec<Vec<BigInt>> = sys.matrix().iter().map(|r| r.iter().map(|e| e.a.clone()).collect()).collect();
        let half = |part: fn(&QuadElem) -> &BigInt| {
            let s = LinearSystem::new(m.clone(), sys.rhs().iter().map(|e| part(e).clone()).collect(), n).expect("same shape");
            solve_integer_system(&s)
        };
        let Some(y) = half(|e| &e.a) else { return Ok(None) };
        let Some(z) = half(|e| &e.b) else { return Ok(None) };
        return Ok(Some(y.into_iter().zip(z).map(|(a, b)| ring.elem(a, b)).collect()));
    }
    let (doubled, _) = doubled_integer_system(sys)?;
    Ok(solve_integer_system(&doubled).map(|yz| (0..n).map(|i| ring.elem(yz[i].clone(), yz[n + i].clone())).collect()))
}
