//! H-representation of the convex hull of a small integer point set.
//!
//! Brute force over `r`-subsets, `r` the hull dimension: a facet contains
//! `r` affinely independent points, and its normal is the unique direction
//! (within the hull's span) orthogonal to their differences. Meant for
//! relation images with a handful of tuples; callers fall back to an
//! extended formulation when the subset count exceeds their budget.

use std::collections::HashSet;

use exact_rings::rational::primitive_integer_row;
use exact_rings::Rational;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use crate::field::nullspace;
use crate::system::InequalitySystem;

fn binomial_capped(n: usize, k: usize, cap: u64) -> Option<u64> {
    let mut acc: u64 = 1;
    for i in 0..k as u64 {
        acc = acc.checked_mul(n as u64 - i)? / (i + 1);
        if acc > cap {
            return None;
        }
    }
    Some(acc)
}

fn combinations(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else { return };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Bareiss determinant; `None` on overflow.
fn det_i128(mut m: Vec<Vec<i128>>) -> Option<i128> {
    let n = m.len();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return Some(0) };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].checked_mul(m[k][k])?.checked_sub(m[i][k].checked_mul(m[k][j])?)?;
                m[i][j] = t / prev;
            }
        }
        prev = m[k][k];
    }
    Some(sign * m.last().map_or(1, |r| r[n - 1]))
}

/// Normal of the hyperplane through `proj[s]` within the span, by signed
/// minors. `Some(None)` if the points are affinely dependent, `None` on
/// overflow.
fn small_normal(proj: &[Vec<i128>], s: &[usize]) -> Option<Option<Vec<BigInt>>> {
    let r = s.len();
    let g: Vec<Vec<i128>> = s[1..]
        .iter()
        .map(|&k| proj[k].iter().zip(&proj[s[0]]).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let mut lam = Vec::with_capacity(r);
    for j in 0..r {
        let minor: Vec<Vec<i128>> = g.iter().map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect()).collect();
        let d = det_i128(minor)?;
        lam.push(if j % 2 == 0 { d } else { -d });
    }
    let g = lam.iter().fold(0i128, |acc, &x| gcd_i128(acc, x));
    if g == 0 {
        return Some(None);
    }
    Some(Some(lam.into_iter().map(|x| BigInt::from(x / g)).collect()))
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Whether every point lies on the `≤` / `≥` side of `lam · x = lam · proj[base]`.
fn small_sides(proj: &[Vec<i128>], lam: &[BigInt], base: usize) -> Option<(bool, bool)> {
    let lam: Vec<i128> = lam.iter().map(|x| x.to_i128()).collect::<Option<_>>()?;
    let val = |p: &Vec<i128>| -> Option<i128> {
        lam.iter().zip(p).try_fold(0i128, |acc, (l, x)| acc.checked_add(l.checked_mul(*x)?))
    };
    let c = val(&proj[base])?;
    let (mut le, mut ge) = (true, true);
    for p in proj {
        let v = val(p)?;
        le &= v <= c;
        ge &= v >= c;
        if !le && !ge {
            break;
        }
    }
    Some((le, ge))
}

/// Adds multiples of the hull's equalities to `row` (coefficients then
/// right-hand side) while that increases its number of zero coefficients.
fn sparsify(mut row: Vec<Rational>, equalities: &[(Vec<Rational>, Rational)]) -> Vec<Rational> {
    let zeros = |r: &[Rational]| r[..r.len() - 1].iter().filter(|x| x.is_zero()).count();
    for (u, b) in equalities {
        let mut best = (zeros(&row), None);
        for (j, uj) in u.iter().enumerate() {
            if uj.is_zero() || row[j].is_zero() {
                continue;
            }
            let t = -&row[j] / uj;
            let cand: Vec<Rational> =
                row[..u.len()].iter().zip(u).map(|(a, x)| a + &t * x).chain(std::iter::once(&row[u.len()] + &t * b)).collect();
            let z = zeros(&cand);
            if z > best.0 {
                best = (z, Some(cand));
            }
        }
        if let (_, Some(c)) = best {
            row = c;
        }
    }
    row
}

fn to_rat(v: &[BigInt]) -> Vec<Rational> {
    v.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

/// Facet inequalities (plus the hull's equalities, as opposite pairs) of
/// `conv(points)`, or `None` if more than `max_subsets` candidate subsets
/// would need checking. Rows are primitive integer vectors.
pub fn convex_hull_facets(points: &[Vec<BigInt>], cols: usize, max_subsets: u64) -> Option<InequalitySystem> {
    let mut out = InequalitySystem::empty(cols);
    let Some(p0) = points.first() else {
        out.push(vec![Rational::zero(); cols], -Rational::one());
        return Some(out);
    };
    // integer spanning set of the direction space
    let mut dirs: Vec<Vec<BigInt>> = Vec::new();
    let mut echelon: Vec<Vec<Rational>> = Vec::new();
    for p in &points[1..] {
        let d: Vec<BigInt> = p.iter().zip(p0).map(|(a, b)| a - b).collect();
        let mut trial = echelon.clone();
        trial.push(to_rat(&d));
        if crate::field::rank(&trial, cols) > echelon.len() {
            echelon = trial;
            dirs.push(d);
        }
    }
    let r = dirs.len();
    let mut equalities: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for u in nullspace(&echelon, cols, &Rational::zero()) {
        let u = primitive_integer_row(&u);
        let rhs: BigInt = u.iter().zip(p0).map(|(a, b)| a * b).sum();
        out.push_equality(to_rat(&u), Rational::from_integer(rhs.clone()));
        equalities.push((to_rat(&u), Rational::from_integer(rhs)));
    }
    if r == 0 {
        return Some(out);
    }
    binomial_capped(points.len(), r, max_subsets)?;

    // coordinates inside the hull's span
    let proj: Vec<Vec<Rational>> = points
        .iter()
        .map(|p| dirs.iter().map(|d| Rational::from_integer(d.iter().zip(p).map(|(a, b)| a * b).sum())).collect())
        .collect();
    let small: Option<Vec<Vec<i128>>> =
        proj.iter().map(|p| p.iter().map(|x| x.to_integer().to_i128()).collect()).collect();
    let mut seen: HashSet<Vec<BigInt>> = HashSet::new();
    combinations(points.len(), r, |s| {
        let lam = match small.as_ref().map(|sm| small_normal(sm, s)) {
            Some(Some(None)) => return,
            Some(Some(Some(l))) => l,
            _ => {
                let g: Vec<Vec<Rational>> = s[1..]
                    .iter()
                    .map(|&k| proj[k].iter().zip(&proj[s[0]]).map(|(a, b)| a - b).collect())
                    .collect();
                let ns = nullspace(&g, r, &Rational::zero());
                if ns.len() != 1 {
                    return;
                }
                primitive_integer_row(&ns[0])
            }
        };
        let val = |k: usize| -> Rational {
            lam.iter().zip(&proj[k]).map(|(l, x)| Rational::from_integer(l.clone()) * x).sum()
        };
        let (le, ge) = match small.as_ref().and_then(|sm| small_sides(sm, &lam, s[0])) {
            Some(sides) => sides,
            None => {
                let c = val(s[0]);
                let (mut le, mut ge) = (true, true);
                for k in 0..points.len() {
                    let v = val(k);
                    le &= v <= c;
                    ge &= v >= c;
                }
                (le, ge)
            }
        };
        if !le && !ge {
            return;
        }
        let sign = if le { BigInt::one() } else { -BigInt::one() };
        let w: Vec<BigInt> = (0..cols).map(|j| lam.iter().zip(&dirs).map(|(l, d)| l * &d[j]).sum::<BigInt>() * &sign).collect();
        let rhs: BigInt = w.iter().zip(&points[s[0]]).map(|(a, b)| a * b).sum();
        let mut key = to_rat(&w);
        key.push(Rational::from_integer(rhs));
        let key = primitive_integer_row(&sparsify(key, &equalities));
        if seen.insert(key.clone()) {
            let (row, b) = key.split_at(cols);
            out.push(to_rat(row), Rational::from_integer(b[0].clone()));
        }
    });
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    fn pts(v: &[&[i64]]) -> Vec<Vec<BigInt>> {
        v.iter().map(|p| p.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn square_and_segment() {
        let sq = convex_hull_facets(&pts(&[&[0, 0], &[1, 0], &[0, 1], &[1, 1]]), 2, 1000).unwrap();
        assert_eq!(sq.rows(), 4);
        assert!(sq.contains(&[rat(1, 2), rat(1, 2)]));
        assert!(!sq.contains(&[rat(3, 2), rat(1, 2)]));

        // NEQ: {(0,1), (1,0)} → x + y = 1 plus two endpoint facets
        let seg = convex_hull_facets(&pts(&[&[0, 1], &[1, 0]]), 2, 1000).unwrap();
        assert_eq!(seg.rows(), 4);
        assert!(seg.contains(&[rat(1, 3), rat(2, 3)]));
        assert!(!seg.contains(&[rat(1, 3), rat(1, 3)]));
        assert!(!seg.contains(&[rat(-1, 3), rat(4, 3)]));
    }

    #[test]
    fn hamming_slice() {
        // {x ∈ {0,1}⁴ : Ham(x) = 2}: Σx = 2 and 0 ≤ x ≤ 1
        let mut p = Vec::new();
        for m in 0u32..16 {
            if m.count_ones() == 2 {
                p.push((0..4).map(|i| BigInt::from((m >> i) & 1)).collect());
            }
        }
        let h = convex_hull_facets(&p, 4, 10_000).unwrap();
        assert_eq!(h.rows(), 2 + 8);
        assert!(h.contains(&vec![rat(1, 2); 4]));
        // bounds come out as single-variable rows
        assert_eq!(h.matrix().iter().filter(|r| r.iter().filter(|x| !x.is_zero()).count() == 1).count(), 8);
        assert!(convex_hull_facets(&p, 4, 2).is_none());
    }

    #[test]
    fn single_point_and_empty() {
        let h = convex_hull_facets(&pts(&[&[2, 3]]), 2, 10).unwrap();
        assert!(h.contains(&[rat(2, 1), rat(3, 1)]));
        assert!(!h.contains(&[rat(2, 1), rat(4, 1)]));
        let e = convex_hull_facets(&[], 2, 10).unwrap();
        assert!(!e.contains(&[rat(0, 1), rat(0, 1)]));
    }
}
