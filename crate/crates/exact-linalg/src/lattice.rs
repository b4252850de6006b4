//! Linear systems over `Z^b/J`.
//!
//! For an ideal `J = d₁Z × ⋯ × d_bZ` the quotient splits as `Π Z/d_iZ`,
//! so a system over full-ring variables decouples into `b` modular systems.
//! Variables restricted to the subring `R′ = {k·(1, …, 1)}` tie the
//! coordinates together; then every coordinate equation (mod `d_i`) is
//! scaled by `N/d_i`, `N = lcm(d_i)`, into one system mod `N`.
//!
//! The general route, valid for any full-rank lattice, lifts to `Z`: each
//! variable becomes `b` integers (or one integer for `R′`), each equation
//! gets `b` slack integers multiplying the generators of `J`, and the result
//! goes to the HNF solver.

use std::collections::BTreeMap;
use std::sync::Arc;

use exact_rings::{LatticeIdeal, LatticeQuotientElem};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::LinalgError;
use crate::integer::solve_integer_system;
use crate::modular::solve_sparse;
use crate::system::{LinearSystem, VarDomain};

fn lattice_of(sys: &LinearSystem<LatticeQuotientElem>) -> Result<Option<Arc<LatticeIdeal>>, LinalgError> {
    let Some(ctx) = sys.context() else { return Ok(None) };
    let j = ctx.lattice().clone();
    for e in sys.matrix().iter().flatten().chain(sys.rhs()) {
        if !Arc::ptr_eq(e.lattice(), &j) && **e.lattice() != *j {
            return Err(LinalgError::RingMismatch);
        }
    }
    Ok(Some(j))
}

fn ones_multiple(k: &BigInt, j: &Arc<LatticeIdeal>) -> LatticeQuotientElem {
    LatticeQuotientElem::new(&vec![k.clone(); j.dim()], j.clone())
}

/// Solves a system over `Z^b/J` (`J` an ideal), honouring each column's
/// [`VarDomain`].
pub fn solve_lattice_quotient_system(
    sys: &LinearSystem<LatticeQuotientElem>,
) -> Result<Option<Vec<LatticeQuotientElem>>, LinalgError> {
    let Some(j) = lattice_of(sys)? else {
        return if sys.cols() == 0 { Ok(Some(vec![])) } else { Err(LinalgError::NoContext) };
    };
    if !j.is_ideal() {
        return Err(LinalgError::NotAnIdeal);
    }
    let d: Vec<u64> = j.diag().iter().map(|x| x.to_u64().expect("quotient fits in u64")).collect();
    let b = d.len();
    let n = sys.cols();
    let coord = |e: &LatticeQuotientElem, i: usize| e.vector()[i].to_u64().expect("canonical");
    let restricted = sys.domains().iter().any(|&v| v == VarDomain::OnesSubring);

    if !restricted {
        let mut sol = vec![vec![BigInt::zero(); b]; n];
        for (i, &di) in d.iter().enumerate() {
            if di == 1 {
                continue;
            }
            let rows = sys
                .matrix()
                .iter()
                .map(|r| r.iter().enumerate().map(|(c, e)| (c, coord(e, i))).filter(|&(_, v)| v != 0).collect())
                .collect();
            let rhs = sys.rhs().iter().map(|e| coord(e, i)).collect();
            let Some(x) = solve_sparse(rows, rhs, n, di) else { return Ok(None) };
            for (c, v) in x.into_iter().enumerate() {
                sol[c][i] = BigInt::from(v);
            }
        }
        return Ok(Some(sol.iter().map(|v| LatticeQuotientElem::new(v, j.clone())).collect()));
    }

    let big_n = d.iter().fold(1u64, |acc, &x| acc.lcm(&x));
    // unknown layout: full columns take b slots, restricted columns one
    let mut offset = Vec::with_capacity(n);
    let mut width = 0;
    for &dom in sys.domains() {
        offset.push(width);
        width += if dom == VarDomain::Full { b } else { 1 };
    }
    let mut rows: Vec<BTreeMap<usize, u64>> = Vec::new();
    let mut rhs = Vec::new();
    let mulmod = |a: u64, c: u64| ((a as u128 * c as u128) % big_n as u128) as u64;
    for (row, rb) in sys.matrix().iter().zip(sys.rhs()) {
        for (i, &di) in d.iter().enumerate() {
            if di == 1 {
                continue;
            }
            let s = big_n / di;
            let mut eq: BTreeMap<usize, u64> = BTreeMap::new();
            for (c, e) in row.iter().enumerate() {
                let v = mulmod(coord(e, i), s);
                if v == 0 {
                    continue;
                }
                let slot = match sys.domains()[c] {
                    VarDomain::Full => offset[c] + i,
                    VarDomain::OnesSubring => offset[c],
                };
                let cur = eq.entry(slot).or_insert(0);
                *cur = (*cur + v) % big_n;
                if *cur == 0 {
                    eq.remove(&slot);
                }
            }
            rows.push(eq);
            rhs.push(mulmod(coord(rb, i), s));
        }
    }
    let Some(x) = solve_sparse(rows, rhs, width, big_n) else { return Ok(None) };
    Ok(Some(
        sys.domains()
            .iter()
            .enumerate()
            .map(|(c, dom)| match dom {
                VarDomain::Full => {
                    let v: Vec<BigInt> = (0..b).map(|i| BigInt::from(x[offset[c] + i])).collect();
                    LatticeQuotientElem::new(&v, j.clone())
                }
                VarDomain::OnesSubring => ones_multiple(&BigInt::from(x[offset[c]]), &j),
            })
            .collect(),
    ))
}

enum Action<'a> {
    /// coordinatewise product with a representative
    Diagonal(&'a [BigInt]),
    /// multiplication by an integer
    Scalar(&'a BigInt),
}

impl Action<'_> {
    fn coeff(&self, i: usize) -> &BigInt {
        match self {
            Action::Diagonal(v) => &v[i],
            Action::Scalar(k) => k,
        }
    }
}

fn lift_and_solve<'a>(
    coeffs: impl Fn(usize, usize) -> Action<'a>,
    rhs: &[LatticeQuotientElem],
    cols: usize,
    domains: &[VarDomain],
    j: &Arc<LatticeIdeal>,
) -> Option<Vec<LatticeQuotientElem>> {
    let b = j.dim();
    let m = rhs.len();
    let mut offset = Vec::with_capacity(cols);
    let mut width = 0;
    for &dom in domains {
        offset.push(width);
        width += if dom == VarDomain::Full { b } else { 1 };
    }
    let slack0 = width;
    width += m * b;
    let g = j.generators();
    let mut rows = Vec::with_capacity(m * b);
    let mut rb = Vec::with_capacity(m * b);
    for r in 0..m {
        for i in 0..b {
            let mut row = vec![BigInt::zero(); width];
            for c in 0..cols {
                let a = coeffs(r, c);
                let slot = match domains[c] {
                    VarDomain::Full => offset[c] + i,
                    VarDomain::OnesSubring => offset[c],
                };
                row[slot] += a.coeff(i);
            }
            for t in 0..b {
                row[slack0 + r * b + t] = g[i][t].clone();
            }
            rows.push(row);
            rb.push(rhs[r].vector()[i].clone());
        }
    }
    let lifted = LinearSystem::new(rows, rb, width).expect("consistent shape");
    let x = solve_integer_system(&lifted)?;
    Some(
        domains
            .iter()
            .enumerate()
            .map(|(c, dom)| match dom {
                VarDomain::Full => LatticeQuotientElem::new(&x[offset[c]..offset[c] + b], j.clone()),
                VarDomain::OnesSubring => ones_multiple(&x[offset[c]], j),
            })
            .collect(),
    )
}

/// Same contract as [`solve_lattice_quotient_system`], always through the
/// integer lift. Coefficients act coordinatewise on their canonical
/// representatives, which is only coset-independent when `J` is an ideal.
pub fn solve_lattice_quotient_by_lifting(
    sys: &LinearSystem<LatticeQuotientElem>,
) -> Result<Option<Vec<LatticeQuotientElem>>, LinalgError> {
    let Some(j) = lattice_of(sys)? else {
        return if sys.cols() == 0 { Ok(Some(vec![])) } else { Err(LinalgError::NoContext) };
    };
    let m = sys.matrix();
    Ok(lift_and_solve(|r, c| Action::Diagonal(m[r][c].vector()), sys.rhs(), sys.cols(), sys.domains(), &j))
}

/// `Σ_c k_rc · x_c = b_r` in `Z^b/J` with integer coefficients, for any
/// full-rank lattice `J` (ideal or not).
pub fn solve_lattice_module_system(
    matrix: &[Vec<BigInt>],
    rhs: &[LatticeQuotientElem],
    domains: &[VarDomain],
    lattice: &Arc<LatticeIdeal>,
) -> Result<Option<Vec<LatticeQuotientElem>>, LinalgError> {
    let cols = domains.len();
    if matrix.len() != rhs.len() {
        return Err(LinalgError::Dimension { expected: matrix.len(), got: rhs.len() });
    }
    if let Some(r) = matrix.iter().find(|r| r.len() != cols) {
        return Err(LinalgError::Dimension { expected: cols, got: r.len() });
    }
    if rhs.iter().any(|e| **e.lattice() != **lattice) {
        return Err(LinalgError::RingMismatch);
    }
    Ok(lift_and_solve(|r, c| Action::Scalar(&matrix[r][c]), rhs, cols, domains, lattice))
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::Scalar;

    fn elem(v: &[i64], j: &Arc<LatticeIdeal>) -> LatticeQuotientElem {
        LatticeQuotientElem::from_i64(v, j.clone())
    }

    #[test]
    fn examples() {
        let z7 = Arc::new(LatticeIdeal::diagonal(&[7]).unwrap());
        let s = LinearSystem::new(vec![vec![elem(&[3], &z7)]], vec![elem(&[1], &z7)], 1).unwrap();
        let x = solve_lattice_quotient_system(&s).unwrap().unwrap();
        assert_eq!(x, vec![elem(&[5], &z7)]);
        assert_eq!(solve_lattice_quotient_by_lifting(&s).unwrap().unwrap(), x);

        let s = LinearSystem::new(vec![vec![elem(&[1], &z7)]], vec![elem(&[0], &z7)], 1).unwrap();
        assert_eq!(solve_lattice_quotient_system(&s).unwrap().unwrap(), vec![elem(&[0], &z7)]);

        // x + x = (1, 0) over Z²/2Z²
        let d2 = Arc::new(LatticeIdeal::diagonal(&[2, 2]).unwrap());
        let s = LinearSystem::new(vec![vec![elem(&[2, 2], &d2)]], vec![elem(&[1, 0], &d2)], 1).unwrap();
        assert_eq!(solve_lattice_quotient_system(&s).unwrap(), None);
        assert_eq!(solve_lattice_quotient_by_lifting(&s).unwrap(), None);
    }

    #[test]
    fn ones_subring_restriction() {
        // x·(1,1) = (1,0) in Z²/(2Z × 3Z): x = 3 works as a full-ring element
        // times identity, but x restricted to R′ = {k(1,1)} needs k ≡ 1 (2)
        // and k ≡ 0 (3), i.e. k = 3.
        let j = Arc::new(LatticeIdeal::diagonal(&[2, 3]).unwrap());
        let s = LinearSystem::new(vec![vec![elem(&[1, 1], &j)]], vec![elem(&[1, 0], &j)], 1)
            .unwrap()
            .with_domains(vec![VarDomain::OnesSubring])
            .unwrap();
        let x = solve_lattice_quotient_system(&s).unwrap().unwrap();
        assert_eq!(x, vec![elem(&[3, 3], &j)]);
        assert!(s.is_solution(&x));
        assert_eq!(solve_lattice_quotient_by_lifting(&s).unwrap().unwrap(), x);

        // (1,0)·x = (1,1) is unsolvable for x ∈ R′... and for any x at all
        let s = LinearSystem::new(vec![vec![elem(&[1, 0], &j)]], vec![elem(&[1, 1], &j)], 1).unwrap();
        assert_eq!(solve_lattice_quotient_system(&s).unwrap(), None);

        // R′ ⊊ R: 2x = (0,1) over Z²/(4Z × 3Z): full ring has x = (0, 2);
        // restricted needs 2k ≡ 0 (4), 2k ≡ 1 (3): k = 2 ⇒ (2, 2)·2 = (0,1) ✓
        let j = Arc::new(LatticeIdeal::diagonal(&[4, 3]).unwrap());
        let s = LinearSystem::new(vec![vec![elem(&[2, 2], &j)]], vec![elem(&[0, 1], &j)], 1)
            .unwrap()
            .with_domains(vec![VarDomain::OnesSubring])
            .unwrap();
        let x = solve_lattice_quotient_system(&s).unwrap().unwrap();
        assert!(s.is_solution(&x));
        assert_eq!(x[0].vector()[0], x[0].vector()[1].clone() % BigInt::from(4));
    }

    #[test]
    fn module_systems_over_non_ideal_lattices() {
        // J spanned by (2,0), (1,3): index 6, cyclic
        let j = Arc::new(LatticeIdeal::new(vec![
            vec![BigInt::from(2), BigInt::from(1)],
            vec![BigInt::from(0), BigInt::from(3)],
        ]).unwrap());
        let target = elem(&[1, 0], &j);
        let m = vec![vec![BigInt::from(5)]];
        let x = solve_lattice_module_system(&m, &[target.clone()], &[VarDomain::Full], &j).unwrap().unwrap();
        assert_eq!(x[0].scale(&BigInt::from(5)), target);
        assert!(solve_lattice_quotient_system(
            &LinearSystem::new(vec![vec![target.clone()]], vec![target.clone()], 1).unwrap()
        )
        .is_err());
        let zero = target.zero_like();
        assert_eq!(
            solve_lattice_module_system(&[vec![BigInt::from(6)]], &[target], &[VarDomain::Full], &j).unwrap(),
            None
        );
        assert!(zero.is_zero_elem());
    }
}
