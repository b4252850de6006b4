use exact_rings::{column_hnf, ColumnHnf};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::system::LinearSystem;

/// Column-style HNF `H = M·U` (see [`ColumnHnf`]).
pub fn hermite_normal_form(matrix: &[Vec<BigInt>], cols: usize) -> ColumnHnf {
    column_hnf(matrix, cols)
}

/// An integer solution of `Mx = b`, or `None` when there is none.
///
/// With `H = MU` lower staircase, substitute `x = Uy` and solve `Hy = b`
/// top-down: each pivot row fixes one `y_t` (which must divide exactly),
/// every other row must already balance. Non-pivot `y`s are set to zero.
pub fn solve_integer_system(sys: &LinearSystem<BigInt>) -> Option<Vec<BigInt>> {
    solve_with_kernel(sys.matrix(), sys.rhs(), sys.cols()).map(|(x, _)| x)
}

/// As [`solve_integer_system`], also returning a basis of the integer
/// kernel of `M`.
///
/// Rows with a `±1` entry are eliminated first by exact substitution (a
/// unimodular change of variables), so HNF only sees what is left. Hull
/// equalities are mostly of that shape, and HNF on them directly suffers
/// badly from coefficient growth.
pub fn solve_with_kernel(m: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let mut rows: Vec<Vec<BigInt>> = m.to_vec();
    let mut rhs: Vec<BigInt> = b.to_vec();
    // (row, column) pairs: row solved for its unit column
    let mut eliminated: Vec<(usize, usize)> = Vec::new();
    let mut used_row = vec![false; rows.len()];
    let mut used_col = vec![false; cols];
    loop {
        let pick = (0..rows.len())
            .filter(|&i| !used_row[i])
            .filter_map(|i| {
                let c = (0..cols).find(|&c| !used_col[c] && rows[i][c].magnitude().is_one())?;
                Some((rows[i].iter().filter(|a| !a.is_zero()).count(), i, c))
            })
            .min();
        let Some((_, i, c)) = pick else { break };
        // normalise to x_c + Σ a_j x_j = b_i
        if rows[i][c].is_negative() {
            rows[i].iter_mut().for_each(|a| *a = -&*a);
            rhs[i] = -&rhs[i];
        }
        let support: Vec<usize> = (0..cols).filter(|&j| !rows[i][j].is_zero()).collect();
        for k in 0..rows.len() {
            if k == i || rows[k][c].is_zero() {
                continue;
            }
            let f = rows[k][c].clone();
            for &j in &support {
                let d = &f * &rows[i][j];
                rows[k][j] -= d;
            }
            let d = &f * &rhs[i];
            rhs[k] -= d;
        }
        used_row[i] = true;
        used_col[c] = true;
        eliminated.push((i, c));
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !used_col[c]).collect();
    let rest: Vec<usize> = (0..rows.len()).filter(|&i| !used_row[i]).collect();
    let reduced: Vec<Vec<BigInt>> = rest.iter().map(|&i| free.iter().map(|&c| rows[i][c].clone()).collect()).collect();
    let reduced_rhs: Vec<BigInt> = rest.iter().map(|&i| rhs[i].clone()).collect();
    let (xf, kf) = hnf_solve(&reduced, &reduced_rhs, free.len())?;
    // pivot rows mention only free columns besides their own
    let lift = |vals: &[BigInt], with_rhs: bool| -> Vec<BigInt> {
        let mut x = vec![BigInt::zero(); cols];
        for (v, &c) in vals.iter().zip(&free) {
            x[c] = v.clone();
        }
        for &(i, c) in &eliminated {
            let s: BigInt = free.iter().map(|&j| &rows[i][j] * &x[j]).sum();
            x[c] = if with_rhs { &rhs[i] - s } else { -s };
        }
        x
    };
    let x = lift(&xf, true);
    let kernel = kf.iter().map(|k| lift(k, false)).collect();
    Some((x, kernel))
}

fn hnf_solve(m: &[Vec<BigInt>], b: &[BigInt], cols: usize) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    if cols == 0 {
        return b.iter().all(|x| x.is_zero()).then(|| (vec![], vec![]));
    }
    let hnf = column_hnf(m, cols);
    let mut y = vec![BigInt::zero(); cols];
    let mut t = 0;
    for (i, row) in hnf.h.iter().enumerate() {
        let known: BigInt = (0..t).map(|s| &row[s] * &y[s]).sum();
        let rest = &b[i] - known;
        if t < hnf.rank() && hnf.pivots[t] == i {
            let (q, r) = rest.div_rem(&row[t]);
            if !r.is_zero() {
                return None;
            }
            y[t] = q;
            t += 1;
        } else if !rest.is_zero() {
            return None;
        }
    }
    let x = (0..cols).map(|i| (0..hnf.rank()).map(|s| &hnf.u[i][s] * &y[s]).sum()).collect();
    Some((x, hnf.kernel()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(m: &[&[i64]], b: &[i64]) -> LinearSystem<BigInt> {
        let cols = m.first().map_or(0, |r| r.len());
        LinearSystem::new(
            m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect(),
            b.iter().map(|&x| BigInt::from(x)).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn examples() {
        assert_eq!(solve_integer_system(&sys(&[&[2]], &[4])), Some(vec![BigInt::from(2)]));
        assert_eq!(solve_integer_system(&sys(&[&[2]], &[3])), None);
        assert_eq!(
            solve_integer_system(&sys(&[&[1, 2], &[3, 4]], &[5, 11])),
            Some(vec![BigInt::from(1), BigInt::from(2)])
        );
    }

    #[test]
    fn rational_but_not_integral() {
        // x + y = 1, x − y = 0 only has x = y = 1/2
        assert_eq!(solve_integer_system(&sys(&[&[1, 1], &[1, -1]], &[1, 0])), None);
        let s = sys(&[&[6, 10, 15]], &[1]);
        let x = solve_integer_system(&s).unwrap();
        assert!(s.is_solution(&x));
    }

    #[test]
    fn hnf_examples() {
        let h = hermite_normal_form(&[vec![BigInt::from(4), BigInt::from(6)]], 2);
        assert_eq!(h.h, vec![vec![BigInt::from(2), BigInt::zero()]]);
    }

    #[test]
    fn kernel_after_unit_elimination() {
        // x − y + 2z = 1, 3y + 6z = 3
        let m: Vec<Vec<BigInt>> = [[1, -1, 2], [0, 3, 6]].iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        let b = [1, 3].map(BigInt::from);
        let (x, k) = solve_with_kernel(&m, &b, 3).unwrap();
        let s = LinearSystem::new(m.to_vec(), b.to_vec(), 3).unwrap();
        assert!(s.is_solution(&x));
        assert_eq!(k.len(), 1);
        let zero = LinearSystem::new(m.to_vec(), vec![BigInt::zero(); 2], 3).unwrap();
        assert!(zero.is_solution(&k[0]) && k[0].iter().any(|v| !v.is_zero()));
    }
}
