//! Gauss–Jordan elimination over any exact field.

use exact_rings::Field;

use crate::error::LinalgError;
use crate::system::LinearSystem;

#[derive(Clone, Debug, PartialEq)]
pub enum FieldSolution<T> {
    /// A particular solution and a basis of the direction space.
    Feasible { x: Vec<T>, nullspace: Vec<Vec<T>> },
    /// `y` with `yᵀM = 0` and `yᵀb ≠ 0`.
    Infeasible { certificate: Vec<T> },
}

impl<T> FieldSolution<T> {
    pub fn solution(&self) -> Option<&[T]> {
        match self {
            FieldSolution::Feasible { x, .. } => Some(x),
            FieldSolution::Infeasible { .. } => None,
        }
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
/// `width` limits pivot search to the first `width` columns, so augmented
/// columns ride along without being pivoted on.
pub(crate) fn rref_in_place<T: Field>(rows: &mut [Vec<T>], width: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inverse().expect("nonzero field element");
        for v in rows[r].iter_mut().skip(c) {
            *v = v.times(&inv);
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero_elem() {
                continue;
            }
            let f = row[c].clone();
            for (v, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !p.is_zero_elem() {
                    *v = v.minus(&f.times(p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of `{x : Mx = 0}`, one vector per free column.
pub fn nullspace<T: Field>(matrix: &[Vec<T>], cols: usize, proto: &T) -> Vec<Vec<T>> {
    let mut rows = matrix.to_vec();
    let pivots = rref_in_place(&mut rows, cols);
    free_basis(&rows, &pivots, cols, proto)
}

fn free_basis<T: Field>(rows: &[Vec<T>], pivots: &[usize], cols: usize, proto: &T) -> Vec<Vec<T>> {
    let zero = proto.zero_like();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![zero.clone(); cols];
            v[f] = proto.one_like();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = rows[k][f].negated();
            }
            v
        })
        .collect()
}

pub fn rank<T: Field>(matrix: &[Vec<T>], cols: usize) -> usize {
    let mut rows = matrix.to_vec();
    rref_in_place(&mut rows, cols).len()
}

/// Solves `Mx = b` exactly, or returns a row combination proving that no
/// solution exists.
pub fn solve_field_system<T: Field>(sys: &LinearSystem<T>) -> Result<FieldSolution<T>, LinalgError> {
    let proto = sys.context().ok_or(LinalgError::NoContext)?.clone();
    Ok(solve_field_system_with(sys, &proto))
}

/// As [`solve_field_system`], taking the ring context explicitly (needed
/// when the system has no rows).
pub fn solve_field_system_with<T: Field>(sys: &LinearSystem<T>, proto: &T) -> FieldSolution<T> {
    let (m, n) = (sys.rows(), sys.cols());
    let zero = proto.zero_like();
    let one = proto.one_like();
    let augmented = |with_identity: bool| -> Vec<Vec<T>> {
        sys.matrix()
            .iter()
            .zip(sys.rhs())
            .enumerate()
            .map(|(i, (r, b))| {
                let mut row = r.clone();
                row.push(b.clone());
                if with_identity {
                    row.extend((0..m).map(|k| if k == i { one.clone() } else { zero.clone() }));
                }
                row
            })
            .collect()
    };
    let mut rows = augmented(false);
    let pivots = rref_in_place(&mut rows, n);
    if rows.iter().skip(pivots.len()).any(|r| !r[n].is_zero_elem()) {
        // redo with the row operations recorded, for the certificate
        let mut rows = augmented(true);
        let pivots = rref_in_place(&mut rows, n);
        let bad = rows.iter().skip(pivots.len()).find(|r| !r[n].is_zero_elem()).expect("same elimination");
        return FieldSolution::Infeasible { certificate: bad[n + 1..].to_vec() };
    }
    let mut x = vec![zero; n];
    for (k, &p) in pivots.iter().enumerate() {
        x[p] = rows[k][n].clone();
    }
    let trimmed: Vec<Vec<T>> = rows.iter().map(|r| r[..n].to_vec()).collect();
    let nullspace = free_basis(&trimmed, &pivots, n, proto);
    FieldSolution::Feasible { x, nullspace }
}
