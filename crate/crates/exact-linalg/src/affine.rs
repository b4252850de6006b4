//! Affine hull and a relative-interior point of `{x : Mx ≤ b}`.
//!
//! Implicit equalities are found with one LP per round rather than one per
//! row: with the known equalities `E` solved as `x = x_p + N t`, maximise a
//! common slack `s ≤ 1` over the remaining rows. A positive optimum gives the
//! interior point directly; a zero optimum means every row with a positive
//! dual is tight on the whole polyhedron, so those rows join `E`.

use std::collections::HashMap;

use exact_rings::Rational;
use num_traits::{One, Signed, Zero};

use crate::field::solve_field_system_with;
use crate::simplex::{maximize, LpOutcome};
use crate::system::{InequalitySystem, LinearSystem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineHullResult {
    /// Linearly independent rows `M′` with `Aff(K) = {y : M′y = b′}`.
    pub equalities: Vec<Vec<Rational>>,
    pub equality_rhs: Vec<Rational>,
    /// `y₀`: satisfies `M′y₀ = b′` and has positive slack on every row of
    /// the input that is not flagged implicit.
    pub interior: Vec<Rational>,
    /// Per input row: tight on the whole polyhedron.
    pub implicit: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AffineHull {
    Empty,
    Hull(AffineHullResult),
}

impl AffineHull {
    pub fn hull(&self) -> Option<&AffineHullResult> {
        match self {
            AffineHull::Empty => None,
            AffineHull::Hull(h) => Some(h),
        }
    }
    pub fn is_empty(&self) -> bool {
        matches!(self, AffineHull::Empty)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).filter(|(x, _)| !x.is_zero()).map(|(x, y)| x * y).sum()
}

pub fn affine_hull_and_interior(sys: &InequalitySystem) -> AffineHull {
    let (m, n) = (sys.rows(), sys.cols());
    let (a, b) = (sys.matrix(), sys.rhs());
    let mut implicit = vec![false; m];
    // the later row of a syntactic `a·x ≤ b`, `−a·x ≤ −b` pair adds nothing
    let mut redundant = vec![false; m];
    let mut seen: HashMap<(&[Rational], &Rational), usize> = HashMap::new();
    let negated: Vec<(Vec<Rational>, Rational)> = a.iter().zip(b).map(|(r, v)| (r.iter().map(|x| -x).collect(), -v)).collect();
    for i in 0..m {
        if a[i].iter().all(Zero::is_zero) {
            if b[i].is_negative() {
                return AffineHull::Empty;
            }
            implicit[i] = b[i].is_zero();
            continue;
        }
        if let Some(&j) = seen.get(&(negated[i].0.as_slice(), &negated[i].1)) {
            implicit[i] = true;
            implicit[j] = true;
            redundant[i] = true;
        }
        seen.insert((&a[i], &b[i]), i);
    }

    let zero = Rational::zero();
    let interior = loop {
        let eq: Vec<usize> = (0..m).filter(|&i| implicit[i] && !redundant[i]).collect();
        let esys = LinearSystem::new(eq.iter().map(|&i| a[i].clone()).collect(), eq.iter().map(|&i| b[i].clone()).collect(), n)
            .expect("rows have n columns");
        let (xp, basis) = match solve_field_system_with(&esys, &zero) {
            crate::FieldSolution::Infeasible { .. } => return AffineHull::Empty,
            crate::FieldSolution::Feasible { x, nullspace } => (x, nullspace),
        };
        // rows restricted to the current affine subspace
        let mut lp_rows = Vec::new();
        for i in 0..m {
            if implicit[i] {
                continue;
            }
            let slack = &b[i] - dot(&a[i], &xp);
            let red: Vec<Rational> = basis.iter().map(|q| dot(&a[i], q)).collect();
            if red.iter().all(Zero::is_zero) {
                if slack.is_negative() {
                    return AffineHull::Empty;
                }
                implicit[i] = slack.is_zero();
            } else {
                lp_rows.push((i, red, slack));
            }
        }
        if lp_rows.is_empty() {
            break xp;
        }
        let d = basis.len();
        let mut lp_a: Vec<Vec<Rational>> = lp_rows
            .iter()
            .map(|(_, red, _)| {
                let mut r = red.clone();
                r.push(Rational::one());
                r
            })
            .collect();
        let mut lp_b: Vec<Rational> = lp_rows.iter().map(|(_, _, s)| s.clone()).collect();
        let mut cap = vec![zero.clone(); d];
        cap.push(Rational::one());
        lp_a.push(cap.clone());
        lp_b.push(Rational::one());
        let mut c = vec![zero.clone(); d];
        c.push(Rational::one());
        let LpOutcome::Optimal { x: t, value, duals } = maximize(&lp_a, &lp_b, &c, &zero) else {
            unreachable!("slack LP is feasible and bounded");
        };
        if value.is_negative() {
            return AffineHull::Empty;
        }
        if value.is_positive() {
            let mut y = xp;
            for (tk, q) in t.iter().zip(&basis) {
                if !tk.is_zero() {
                    for (yv, qv) in y.iter_mut().zip(q) {
                        *yv += tk * qv;
                    }
                }
            }
            break y;
        }
        for ((i, _, _), y) in lp_rows.iter().zip(&duals) {
            if y.is_positive() {
                implicit[*i] = true;
            }
        }
    };

    let keep: Vec<bool> = implicit.iter().zip(&redundant).map(|(i, r)| *i && !r).collect();
    let (equalities, equality_rhs) = independent_rows(a, b, &keep);
    AffineHull::Hull(AffineHullResult { equalities, equality_rhs, interior, implicit })
}

/// Greedy maximal linearly independent subset of the flagged rows.
fn independent_rows(a: &[Vec<Rational>], b: &[Rational], keep: &[bool]) -> (Vec<Vec<Rational>>, Vec<Rational>) {
    let mut echelon: Vec<(usize, Vec<Rational>)> = Vec::new();
    let (mut rows, mut rhs) = (Vec::new(), Vec::new());
    for i in (0..a.len()).filter(|&i| keep[i]) {
        let mut v = a[i].clone();
        for (p, e) in &echelon {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { continue };
        let inv = v[p].recip();
        v.iter_mut().for_each(|x| *x *= &inv);
        echelon.push((p, v));
        rows.push(a[i].clone());
        rhs.push(b[i].clone());
    }
    (rows, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    fn check(sys: &InequalitySystem, h: &AffineHullResult) {
        for (r, v) in h.equalities.iter().zip(&h.equality_rhs) {
            assert_eq!(&dot(r, &h.interior), v);
        }
        for (s, imp) in sys.slacks(&h.interior).iter().zip(&h.implicit) {
            if *imp {
                assert!(s.is_zero());
            } else {
                assert!(s.is_positive());
            }
        }
    }

    #[test]
    fn examples() {
        let s = InequalitySystem::from_i64(&[&[1], &[-1]], &[1, -1]).unwrap();
        let AffineHull::Hull(h) = affine_hull_and_interior(&s) else { panic!() };
        assert_eq!(h.interior, vec![rat(1, 1)]);
        assert_eq!(h.equalities.len(), 1);
        check(&s, &h);

        let s = InequalitySystem::from_i64(&[&[1, 1], &[-1, -1], &[-1, 0], &[0, -1]], &[1, -1, 0, 0]).unwrap();
        let AffineHull::Hull(h) = affine_hull_and_interior(&s) else { panic!() };
        assert_eq!(h.equalities.len(), 1);
        assert_eq!(h.implicit, vec![true, true, false, false]);
        check(&s, &h);

        let s = InequalitySystem::from_i64(&[&[1], &[-1]], &[-1, 0]).unwrap();
        assert!(affine_hull_and_interior(&s).is_empty());
    }

    #[test]
    fn hidden_equalities() {
        // x + y ≤ 2, x ≥ 1, y ≥ 1: the single point (1,1), no syntactic pair
        let s = InequalitySystem::from_i64(&[&[1, 1], &[-1, 0], &[0, -1], &[1, -1]], &[2, -1, -1, 5]).unwrap();
        let AffineHull::Hull(h) = affine_hull_and_interior(&s) else { panic!() };
        assert_eq!(h.interior, vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(h.implicit, vec![true, true, true, false]);
        assert_eq!(h.equalities.len(), 2);
        check(&s, &h);

        // 2x ≤ 2 and −x ≤ −1 scale-differ but still pin x; z free
        let s = InequalitySystem::from_i64(&[&[2, 0], &[-1, 0], &[0, 1]], &[2, -1, 7]).unwrap();
        let AffineHull::Hull(h) = affine_hull_and_interior(&s) else { panic!() };
        assert_eq!(h.implicit, vec![true, true, false]);
        check(&s, &h);
    }

    #[test]
    fn full_dimensional_and_trivial() {
        let s = InequalitySystem::from_i64(&[&[1, 0], &[0, 1], &[-1, -1]], &[1, 1, 0]).unwrap();
        let AffineHull::Hull(h) = affine_hull_and_interior(&s) else { panic!() };
        assert!(h.equalities.is_empty());
        check(&s, &h);
        let AffineHull::Hull(h) = affine_hull_and_interior(&InequalitySystem::empty(3)) else { panic!() };
        assert_eq!(h.interior.len(), 3);
    }
}
