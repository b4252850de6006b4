//! Column-style Hermite normal form with the unimodular transform tracked.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::IntMatrix;

/// `h = m · u` with `u` unimodular.
///
/// `h` is a lower staircase: pivot `t` sits at `(pivots[t], t)`, is positive,
/// everything above it in column `t` is zero, and the entries to its left in
/// the pivot row lie in `[0, pivot)`. Columns from `pivots.len()` on are zero,
/// so the matching columns of `u` span the integer kernel of `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnHnf {
    pub h: IntMatrix,
    pub u: IntMatrix,
    pub pivots: Vec<usize>,
}

impl ColumnHnf {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns of `u` that `m` sends to zero.
    pub fn kernel(&self) -> Vec<Vec<BigInt>> {
        let n = self.u.len();
        (self.rank()..n).map(|j| (0..n).map(|i| self.u[i][j].clone()).collect()).collect()
    }
}

fn col_combine(m: &mut IntMatrix, k: usize, j: usize, c: [&BigInt; 4]) {
    // (col_k, col_j) ← (c0·col_k + c1·col_j, c2·col_k + c3·col_j)
    for row in m.iter_mut() {
        let (xk, xj) = (row[k].clone(), row[j].clone());
        row[k] = c[0] * &xk + c[1] * &xj;
        row[j] = c[2] * &xk + c[3] * &xj;
    }
}

fn col_axpy(m: &mut IntMatrix, dst: usize, f: &BigInt, src: usize) {
    // col_dst −= f · col_src
    for row in m.iter_mut() {
        let s = &row[src] * f;
        row[dst] -= s;
    }
}

fn col_negate(m: &mut IntMatrix, k: usize) {
    for row in m.iter_mut() {
        row[k] = -&row[k];
    }
}

/// Hermite normal form of an `rows × cols` matrix (`cols` is needed when
/// there are no rows).
pub fn column_hnf(m: &[Vec<BigInt>], cols: usize) -> ColumnHnf {
    let mut h: IntMatrix = m.to_vec();
    let mut u: IntMatrix = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut k = 0;
    for i in 0..h.len() {
        if k == cols {
            break;
        }
        for j in (k + 1)..cols {
            if h[i][j].is_zero() {
                continue;
            }
            let (a, b) = (h[i][k].clone(), h[i][j].clone());
            let e = a.extended_gcd(&b);
            let (ag, bg) = (&a / &e.gcd, &b / &e.gcd);
            let nbg = -bg;
            // det [[x, -b/g], [y, a/g]] = (xa + yb)/g = 1
            let c = [&e.x, &e.y, &nbg, &ag];
            col_combine(&mut h, k, j, c);
            col_combine(&mut u, k, j, c);
        }
        if h[i][k].is_zero() {
            continue;
        }
        if h[i][k].is_negative() {
            col_negate(&mut h, k);
            col_negate(&mut u, k);
        }
        let piv = h[i][k].clone();
        for j in 0..k {
            let f = h[i][j].div_floor(&piv);
            if !f.is_zero() {
                col_axpy(&mut h, j, &f, k);
                col_axpy(&mut u, j, &f, k);
            }
        }
        pivots.push(i);
        k += 1;
    }
    ColumnHnf { h, u, pivots }
}

/// Determinant by fraction-free Bareiss elimination.
pub fn determinant(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    let mut a: IntMatrix = m.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    if n == 0 {
        BigInt::one()
    } else {
        sign * &a[n - 1][n - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
        let inner = b.len();
        let cols = b.first().map_or(0, Vec::len);
        a.iter()
            .map(|r| (0..cols).map(|j| (0..inner).map(|t| &r[t] * &b[t][j]).sum()).collect())
            .collect()
    }

    #[test]
    fn examples() {
        let id = mat(&[&[1, 0], &[0, 1]]);
        let r = column_hnf(&id, 2);
        assert_eq!((r.h.clone(), r.u.clone()), (id.clone(), id));
        let r = column_hnf(&mat(&[&[2, 1]]), 2);
        assert_eq!(r.h, mat(&[&[1, 0]]));
        assert!(determinant(&r.u).abs().is_one());
        assert_eq!(column_hnf(&mat(&[&[4, 6]]), 2).h, mat(&[&[2, 0]]));
    }

    #[test]
    fn staircase_and_kernel() {
        let m = mat(&[&[2, 4, 6], &[1, 3, 5], &[0, 0, 0], &[3, 7, 11]]);
        let r = column_hnf(&m, 3);
        assert_eq!(mul(&m, &r.u), r.h);
        assert!(determinant(&r.u).abs().is_one());
        assert_eq!(r.rank(), 2);
        for v in r.kernel() {
            let col: IntMatrix = v.into_iter().map(|x| vec![x]).collect();
            assert!(mul(&m, &col).iter().all(|row| row[0].is_zero()));
        }
        for (t, &p) in r.pivots.iter().enumerate() {
            assert!(r.h[p][t].is_positive());
            for j in 0..t {
                assert!(!r.h[p][j].is_negative() && r.h[p][j] < r.h[p][t]);
            }
        }
    }

    #[test]
    fn bareiss() {
        assert_eq!(determinant(&mat(&[&[2, 1], &[1, 3]])), BigInt::from(5));
        assert_eq!(determinant(&mat(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&mat(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }
}
