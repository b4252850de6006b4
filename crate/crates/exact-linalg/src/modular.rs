//! Linear systems over `Z/MZ` for arbitrary `M`.
//!
//! Relaxation systems are large but clause-local, so a sparse elimination
//! that only pivots on units (entries coprime to `M`) handles nearly all of
//! the work; for prime `M` it handles all of it. Whatever remains has only
//! non-unit entries and is diagonalised densely with unimodular row and
//! column operations, after which each equation reads `d·y ≡ c (mod M)`.

use std::collections::{BTreeMap, BTreeSet};

use exact_rings::ModInt;
use num_integer::Integer;

use crate::error::LinalgError;
use crate::system::LinearSystem;

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn submod(a: u64, b: u64, m: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Solves `Mx = b` over `Z/MZ`; `None` if no solution exists.
pub fn solve_mod_system(sys: &LinearSystem<ModInt>) -> Result<Option<Vec<ModInt>>, LinalgError> {
    let Some(ctx) = sys.context() else {
        return if sys.cols() == 0 { Ok(Some(vec![])) } else { Err(LinalgError::NoContext) };
    };
    let m = ctx.modulus();
    if sys.matrix().iter().flatten().chain(sys.rhs()).any(|e| e.modulus() != m) {
        return Err(LinalgError::RingMismatch);
    }
    let rows: Vec<BTreeMap<usize, u64>> = sys
        .matrix()
        .iter()
        .map(|r| r.iter().enumerate().filter(|(_, e)| e.value() != 0).map(|(j, e)| (j, e.value())).collect())
        .collect();
    let rhs: Vec<u64> = sys.rhs().iter().map(|e| e.value()).collect();
    Ok(solve_sparse(rows, rhs, sys.cols(), m)
        .map(|x| x.into_iter().map(|v| ModInt::new(v as i128, m).expect("positive modulus")).collect()))
}

/// Sparse entry point on raw residues; rows map column → nonzero value.
pub(crate) fn solve_sparse(mut rows: Vec<BTreeMap<usize, u64>>, mut rhs: Vec<u64>, cols: usize, m: u64) -> Option<Vec<u64>> {
    if m == 1 {
        return Some(vec![0; cols]);
    }
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for &j in r.keys() {
            col_rows[j].insert(i);
        }
    }
    let mut is_pivot_row = vec![false; rows.len()];
    let mut pivot_order: Vec<(usize, usize)> = Vec::new();
    let mut pending: BTreeSet<usize> = (0..rows.len()).collect();
    while let Some(r) = pending.pop_first() {
        let choice = rows[r]
            .iter()
            .filter(|(_, &v)| v.gcd(&m) == 1)
            .min_by_key(|(&j, _)| (col_rows[j].len(), j))
            .map(|(&j, &v)| (j, v));
        let Some((c, v)) = choice else {
            if rows[r].is_empty() && rhs[r] != 0 {
                return None;
            }
            continue;
        };
        let inv = inv_mod(v, m).expect("unit");
        for x in rows[r].values_mut() {
            *x = mulmod(*x, inv, m);
        }
        rhs[r] = mulmod(rhs[r], inv, m);
        is_pivot_row[r] = true;
        pivot_order.push((r, c));
        let pivot_row: Vec<(usize, u64)> = rows[r].iter().map(|(&j, &x)| (j, x)).collect();
        let targets: Vec<usize> = col_rows[c].iter().copied().filter(|&i| i != r && !is_pivot_row[i]).collect();
        for i in targets {
            let f = rows[i][&c];
            for &(j, x) in &pivot_row {
                let cur = rows[i].get(&j).copied().unwrap_or(0);
                let new = submod(cur, mulmod(f, x, m), m);
                if new == 0 {
                    rows[i].remove(&j);
                    col_rows[j].remove(&i);
                } else {
                    if cur == 0 {
                        col_rows[j].insert(i);
                    }
                    rows[i].insert(j, new);
                }
            }
            rhs[i] = submod(rhs[i], mulmod(f, rhs[r], m), m);
            pending.insert(i);
        }
    }

    let mut x = vec![0u64; cols];
    let residual: Vec<usize> = (0..rows.len()).filter(|&i| !is_pivot_row[i]).collect();
    for &i in &residual {
        if rows[i].is_empty() && rhs[i] != 0 {
            return None;
        }
    }
    let res_rows: Vec<usize> = residual.into_iter().filter(|&i| !rows[i].is_empty()).collect();
    if !res_rows.is_empty() {
        let res_cols: Vec<usize> =
            res_rows.iter().flat_map(|&i| rows[i].keys().copied()).collect::<BTreeSet<_>>().into_iter().collect();
        let pos: BTreeMap<usize, usize> = res_cols.iter().enumerate().map(|(k, &j)| (j, k)).collect();
        let dense: Vec<Vec<u64>> = res_rows
            .iter()
            .map(|&i| {
                let mut row = vec![0u64; res_cols.len()];
                for (j, &v) in &rows[i] {
                    row[pos[j]] = v;
                }
                row
            })
            .collect();
        let b: Vec<u64> = res_rows.iter().map(|&i| rhs[i]).collect();
        let y = solve_dense(dense, b, m)?;
        for (k, &j) in res_cols.iter().enumerate() {
            x[j] = y[k];
        }
    }
    for &(r, c) in pivot_order.iter().rev() {
        let mut v = rhs[r];
        for (&j, &a) in &rows[r] {
            if j != c {
                v = submod(v, mulmod(a, x[j], m), m);
            }
        }
        x[c] = v;
    }
    Some(x)
}

/// Dense solve over `Z/MZ` by diagonalising with unimodular row and column
/// operations (`P A V = D`), so `x = V y` with `D y = P b`.
pub(crate) fn solve_dense(mut a: Vec<Vec<u64>>, mut b: Vec<u64>, m: u64) -> Option<Vec<u64>> {
    let k = a.len();
    let p = a.first().map_or(0, Vec::len);
    let mut v: Vec<Vec<u64>> = (0..p).map(|i| (0..p).map(|j| u64::from(i == j) % m).collect()).collect();
    let mut rank = 0;
    for t in 0..k.min(p) {
        let Some((pi, pj)) = (t..k).flat_map(|i| (t..p).map(move |j| (i, j))).find(|&(i, j)| a[i][j] != 0) else {
            break;
        };
        a.swap(t, pi);
        b.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..k {
                if a[i][t] != 0 {
                    row_gcd_step(&mut a, &mut b, t, i, m);
                    dirty = true;
                }
            }
            for j in t + 1..p {
                if a[t][j] != 0 {
                    col_gcd_step(&mut a, &mut v, t, j, m);
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
        rank = t + 1;
    }
    if (rank..k).any(|i| b[i] != 0) {
        return None;
    }
    let mut y = vec![0u64; p];
    for t in 0..rank {
        let d = a[t][t];
        let g = d.gcd(&m);
        if b[t] % g != 0 {
            return None;
        }
        let mg = m / g;
        y[t] = if mg == 1 { 0 } else { mulmod(b[t] / g, inv_mod((d / g) % mg, mg).expect("coprime"), mg) };
    }
    Some((0..p).map(|i| (0..p).fold(0u64, |acc, j| (acc + mulmod(v[i][j], y[j], m)) % m)).collect())
}

/// Unimodular 2×2 combination of rows `t` and `i` that zeroes `a[i][t]`.
fn row_gcd_step(a: &mut [Vec<u64>], b: &mut [u64], t: usize, i: usize, m: u64) {
    let (x, y, u, w) = gcd_coeffs(a[t][t], a[i][t], m);
    for j in 0..a[t].len() {
        let (s, r) = (a[t][j], a[i][j]);
        a[t][j] = (mulmod(x, s, m) + mulmod(y, r, m)) % m;
        a[i][j] = (mulmod(u, s, m) + mulmod(w, r, m)) % m;
    }
    let (s, r) = (b[t], b[i]);
    b[t] = (mulmod(x, s, m) + mulmod(y, r, m)) % m;
    b[i] = (mulmod(u, s, m) + mulmod(w, r, m)) % m;
}

fn col_gcd_step(a: &mut [Vec<u64>], v: &mut [Vec<u64>], t: usize, j: usize, m: u64) {
    let (x, y, u, w) = gcd_coeffs(a[t][t], a[t][j], m);
    for row in a.iter_mut().chain(v.iter_mut()) {
        let (s, r) = (row[t], row[j]);
        row[t] = (mulmod(x, s, m) + mulmod(y, r, m)) % m;
        row[j] = (mulmod(u, s, m) + mulmod(w, r, m)) % m;
    }
}

/// `[[x, y], [u, w]]` with determinant 1 sending `(s, r)` to `(gcd, 0)`,
/// entries reduced mod `m`. A zero `s` is handled as a swap.
fn gcd_coeffs(s: u64, r: u64, m: u64) -> (u64, u64, u64, u64) {
    let red = |z: i128| z.rem_euclid(m as i128) as u64;
    // plain elimination when the pivot already divides: the pivot column
    // stays untouched, so the clearing loop cannot cycle
    if s != 0 && r % s == 0 {
        return (1, 0, red(-((r / s) as i128)), 1);
    }
    let e = (s as i128).extended_gcd(&(r as i128));
    let g = e.gcd;
    (red(e.x), red(e.y), red(-(r as i128) / g), red(s as i128 / g))
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::Scalar;

    fn sys(mat: &[&[i128]], b: &[i128], m: u64) -> LinearSystem<ModInt> {
        let cols = mat.first().map_or(0, |r| r.len());
        LinearSystem::new(
            mat.iter().map(|r| r.iter().map(|&x| ModInt::new(x, m).unwrap()).collect()).collect(),
            b.iter().map(|&x| ModInt::new(x, m).unwrap()).collect(),
            cols,
        )
        .unwrap()
    }

    #[test]
    fn prime_modulus() {
        let s = sys(&[&[3]], &[1], 7);
        assert_eq!(solve_mod_system(&s).unwrap().unwrap()[0].value(), 5);
        let s = sys(&[&[1, 1, 1], &[1, -1, 2]], &[1, 2], 7);
        let x = solve_mod_system(&s).unwrap().unwrap();
        assert!(s.is_solution(&x));
    }

    #[test]
    fn composite_modulus_needs_the_dense_path() {
        // 2x + 4y ≡ 2, 4x + 2y ≡ 4 (mod 6)
        let s = sys(&[&[2, 4], &[4, 2]], &[2, 4], 6);
        let x = solve_mod_system(&s).unwrap().unwrap();
        assert!(s.is_solution(&x));
        // 2x ≡ 1 (mod 4) has no solution
        assert_eq!(solve_mod_system(&sys(&[&[2]], &[1], 4)).unwrap(), None);
        // 3x ≡ 0, x ≡ 1 (mod 9): x = 1 fails 3 ≠ 0
        assert_eq!(solve_mod_system(&sys(&[&[3], &[1]], &[0, 1], 9)).unwrap(), None);
    }

    #[test]
    fn brute_force_agreement_mod_12() {
        let m = 12u64;
        let mut state = 12345u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 33) % m
        };
        for _ in 0..300 {
            let a: Vec<Vec<i128>> = (0..2).map(|_| (0..2).map(|_| next() as i128).collect()).collect();
            let b: Vec<i128> = (0..2).map(|_| next() as i128).collect();
            let rows: Vec<&[i128]> = a.iter().map(|r| r.as_slice()).collect();
            let s = sys(&rows, &b, m);
            let brute = (0..m).any(|x| {
                (0..m).any(|y| {
                    let v = [ModInt::new(x as i128, m).unwrap(), ModInt::new(y as i128, m).unwrap()];
                    s.is_solution(&v)
                })
            });
            let got = solve_mod_system(&s).unwrap();
            assert_eq!(got.is_some(), brute, "{a:?} {b:?}");
            if let Some(x) = got {
                assert!(s.is_solution(&x));
                assert!(x.iter().all(|e| e.modulus() == m && !e.is_zero_elem() || e.value() == 0));
            }
        }
    }
}
