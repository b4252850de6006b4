use std::cmp::Ordering;

use exact_linalg::{
    affine_hull_and_interior, integer_orthogonal_basis, solve_quadratic_int_system, AffineHull, InequalitySystem,
    LinearSystem, LpOutcome,
};
use exact_rings::rational::{ceil_int, common_denominator};
use exact_rings::{balanced_sum, dense_element, QuadElem, QuadRat, QuadRing, Rational};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::lp_maximize_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Error)]
pub enum Reject {
    #[error("empty polyhedron")]
    Empty,
    #[error("no ring point on affine hull")]
    NoRingPointOnHull,
}

/// Intermediate values, kept for inspection and for tests.
#[derive(Clone, Debug, PartialEq)]
pub struct Transcript {
    /// Ring point on the affine hull.
    pub x0: Vec<QuadElem>,
    /// Rational relative-interior point.
    pub y0: Vec<Rational>,
    pub basis: Vec<Vec<BigInt>>,
    /// `y₀ − x₀ = Σ αᵢ qᵢ`.
    pub alpha: Vec<QuadRat>,
    pub beta: Vec<QuadElem>,
    pub epsilon: Rational,
    /// Rows tight on the whole polyhedron.
    pub implicit: Vec<bool>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingFeasiblePoint {
    pub point: Vec<QuadElem>,
    pub transcript: Transcript,
}

/// Scales `row·x ≤ rhs` to integer coefficients.
fn integer_row(row: &[Rational], rhs: &Rational) -> (Vec<BigInt>, BigInt) {
    let l = common_denominator(row.iter().chain(std::iter::once(rhs)));
    let scale = Rational::from_integer(l);
    (row.iter().map(|a| (a * &scale).to_integer()).collect(), (rhs * &scale).to_integer())
}

fn dot_quad(row: &[BigInt], z: &[QuadElem], ring: &QuadRing) -> QuadElem {
    let terms: Vec<QuadElem> = row.iter().zip(z).filter(|(a, _)| !a.is_zero()).map(|(a, v)| v.scale(a)).collect();
    balanced_sum(terms).unwrap_or_else(|| ring.zero())
}

/// Exact check of `Mz ≤ b` at a ring point.
pub fn satisfies_exactly(sys: &InequalitySystem, z: &[QuadElem], ring: &QuadRing) -> bool {
    z.len() == sys.cols()
        && sys.matrix().iter().zip(sys.rhs()).all(|(row, b)| {
            let (ints, bi) = integer_row(row, b);
            dot_quad(&ints, z, ring).cmp_rational(&Rational::from_integer(bi)) != Ordering::Greater
        })
}

pub fn ring_feasible_point(sys: &InequalitySystem, ring: &QuadRing) -> Result<RingFeasiblePoint, Reject> {
    let n = sys.cols();
    let AffineHull::Hull(hull) = affine_hull_and_interior(sys) else { return Err(Reject::Empty) };
    let y0 = hull.interior;

    // a ring point on the hull
    let (eq_m, eq_b): (Vec<Vec<QuadElem>>, Vec<QuadElem>) = hull
        .equalities
        .iter()
        .zip(&hull.equality_rhs)
        .map(|(row, b)| {
            let (ints, bi) = integer_row(row, b);
            (ints.into_iter().map(|a| ring.int(a)).collect(), ring.int(bi))
        })
        .unzip();
    let eq_sys = LinearSystem::new(eq_m, eq_b, n).expect("rows have n columns");
    let x0 = solve_quadratic_int_system(&eq_sys, ring)
        .expect("single ring")
        .ok_or(Reject::NoRingPointOnHull)?;

    let basis = integer_orthogonal_basis(&hull.equalities, n);
    if basis.is_empty() {
        let transcript =
            Transcript { x0: x0.clone(), y0, basis, alpha: vec![], beta: vec![], epsilon: Rational::zero(), implicit: hull.implicit };
        return Ok(RingFeasiblePoint { point: x0, transcript });
    }

    // y₀ − x₀ = Σ αᵢ qᵢ, exactly, since y₀ − x₀ lies in the direction space
    let alpha: Vec<QuadRat> = basis
        .iter()
        .map(|qv| {
            let norm: BigInt = qv.iter().map(|x| x * x).sum();
            let ry: Rational = qv.iter().zip(&y0).filter(|(a, _)| !a.is_zero()).map(|(a, y)| Rational::from_integer(a.clone()) * y).sum();
            let rx = dot_quad(qv, &x0, ring);
            QuadRat::from_elem(-rx).add_rational(&ry).mul_rational(&Rational::new(BigInt::one(), norm))
        })
        .collect();

    // every non-implicit row keeps positive slack when y₀ moves by
    // Σ (βᵢ − αᵢ) qᵢ with |βᵢ − αᵢ| < ε
    let delta = sys
        .matrix()
        .iter()
        .zip(sys.slacks(&y0))
        .zip(&hull.implicit)
        .filter(|(_, imp)| !**imp)
        .map(|((row, s), _)| {
            let l1: Rational = row.iter().map(|a| a.abs()).sum();
            s / (l1 + Rational::one())
        })
        .min()
        .unwrap_or_else(Rational::one);
    let max_norm: BigInt = basis.iter().map(|qv| qv.iter().map(|x| x * x).sum::<BigInt>()).max().expect("nonempty");
    let epsilon = delta / Rational::from_integer(max_norm * BigInt::from(n));

    let k = ceil_int(&(Rational::from_integer(BigInt::from(2)) / &epsilon));
    let kr = Rational::from_integer(k.clone());
    let beta: Vec<QuadElem> = alpha
        .iter()
        .map(|a| {
            let f = a.mul_rational(&kr).floor();
            let lo = Rational::new(&f - 1, k.clone());
            let hi = Rational::new(&f + 1, k.clone());
            dense_element(&lo, &hi, ring).expect("nonempty bracket").elem
        })
        .collect();

    let point: Vec<QuadElem> = (0..n)
        .map(|j| {
            let mut terms = vec![x0[j].clone()];
            terms.extend(beta.iter().zip(&basis).filter(|(_, qv)| !qv[j].is_zero()).map(|(b, qv)| b.scale(&qv[j])));
            balanced_sum(terms).expect("nonempty")
        })
        .collect();
    assert!(satisfies_exactly(sys, &point, ring), "rounded point left the polyhedron");
    let transcript = Transcript { x0, y0, basis, alpha, beta, epsilon, implicit: hull.implicit };
    Ok(RingFeasiblePoint { point, transcript })
}

#[derive(Clone, Debug, PartialEq)]
pub enum RingMaximum {
    Unbounded,
    /// Best ring point found, its objective value, and the rational LP
    /// optimum (the supremum over ring points).
    Found { point: RingFeasiblePoint, value: QuadRat, supremum: Rational },
}

/// Binary search on the objective level: each probe adds `cᵀx ≥ t` and asks
/// for a ring point. Stops after `steps` halvings or when a probe attains the
/// supremum.
pub fn ring_maximize(
    sys: &InequalitySystem,
    objective: &[Rational],
    ring: &QuadRing,
    steps: u32,
) -> Result<RingMaximum, Reject> {
    let value_of = |p: &[QuadElem]| -> QuadRat {
        let l = common_denominator(objective);
        let ints: Vec<BigInt> = objective.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        QuadRat::from_elem(dot_quad(&ints, p, ring)).mul_rational(&Rational::new(BigInt::one(), l))
    };
    let mut best = ring_feasible_point(sys, ring)?;
    let sup = match lp_maximize_rational(sys, objective) {
        LpOutcome::Unbounded => return Ok(RingMaximum::Unbounded),
        LpOutcome::Infeasible => unreachable!("a ring point exists"),
        LpOutcome::Optimal { value, .. } => value,
    };
    let mut best_value = value_of(&best.point);
    let neg: Vec<Rational> = objective.iter().map(|c| -c).collect();
    let mut lo = Rational::from_integer(best_value.floor()).min(sup.clone());
    let mut hi = sup.clone();
    for _ in 0..steps {
        if best_value.cmp_rational(&sup) == Ordering::Equal {
            break;
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        let mut probe = sys.clone();
        probe.push(neg.clone(), -mid.clone());
        match ring_feasible_point(&probe, ring) {
            Ok(p) => {
                let v = value_of(&p.point);
                if v > best_value {
                    best_value = v;
                    best = RingFeasiblePoint { point: p.point, transcript: p.transcript };
                }
                lo = mid;
            }
            Err(_) => hi = mid,
        }
    }
    Ok(RingMaximum::Found { point: best, value: best_value, supremum: sup })
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    fn z2() -> QuadRing {
        QuadRing::new(2).unwrap()
    }

    #[test]
    fn examples() {
        let ring = z2();
        let s = InequalitySystem::from_i64(&[&[1], &[-1]], &[1, 0]).unwrap();
        let p = ring_feasible_point(&s, &ring).unwrap();
        assert!(satisfies_exactly(&s, &p.point, &ring));
        let t = &p.transcript;
        let rebuilt = t.beta.iter().zip(&t.basis).fold(t.x0[0].clone(), |acc, (b, q)| acc + b.scale(&q[0]));
        assert_eq!(rebuilt, p.point[0]);

        let half = InequalitySystem::new(vec![vec![rat(1, 1)], vec![rat(-1, 1)]], vec![rat(1, 2), rat(-1, 2)], 1).unwrap();
        assert_eq!(ring_feasible_point(&half, &ring), Err(Reject::NoRingPointOnHull));
        let empty = InequalitySystem::from_i64(&[&[1], &[-1]], &[-1, 0]).unwrap();
        assert_eq!(ring_feasible_point(&empty, &ring), Err(Reject::Empty));
    }

    #[test]
    fn thin_strip_off_the_integers() {
        // 1/3 < x < 2/5 holds no integer, but Z[√2] is dense
        let ring = z2();
        let s = InequalitySystem::new(vec![vec![rat(1, 1)], vec![rat(-1, 1)]], vec![rat(2, 5), rat(-1, 3)], 1).unwrap();
        let p = ring_feasible_point(&s, &ring).unwrap();
        assert!(!p.point[0].is_integer());
        assert_eq!(p.point[0].cmp_rational(&rat(1, 3)), Ordering::Greater);
        assert_eq!(p.point[0].cmp_rational(&rat(2, 5)), Ordering::Less);
    }

    #[test]
    fn point_hull_and_planes() {
        let ring = QuadRing::new(3).unwrap();
        // x = 2, y = 3 − x, 0 ≤ z ≤ 1/2
        let mut s = InequalitySystem::empty(3);
        s.push_equality(vec![rat(1, 1), rat(0, 1), rat(0, 1)], rat(2, 1));
        s.push_equality(vec![rat(1, 1), rat(1, 1), rat(0, 1)], rat(3, 1));
        s.push(vec![rat(0, 1), rat(0, 1), rat(1, 1)], rat(1, 2));
        s.push(vec![rat(0, 1), rat(0, 1), rat(-1, 1)], rat(0, 1));
        let p = ring_feasible_point(&s, &ring).unwrap();
        assert_eq!(p.point[0], ring.int(2));
        assert_eq!(p.point[1], ring.int(1));
        assert!(satisfies_exactly(&s, &p.point, &ring));

        // x + y = 1/2 has no solution in Z[√3]²... but x − y = 1/2 neither;
        // 2x + 2y = 2 does
        let mut s = InequalitySystem::empty(2);
        s.push_equality(vec![rat(2, 1), rat(2, 1)], rat(2, 1));
        s.push(vec![rat(-1, 1), rat(0, 1)], rat(0, 1));
        s.push(vec![rat(0, 1), rat(-1, 1)], rat(0, 1));
        let p = ring_feasible_point(&s, &ring).unwrap();
        assert!(satisfies_exactly(&s, &p.point, &ring));
        assert_eq!(p.transcript.basis.len(), 1);
    }

    #[test]
    fn maximize_approaches_the_supremum() {
        let ring = z2();
        // max x s.t. x ≤ 1/2: supremum 1/2, never attained in Z[√2]
        let s = InequalitySystem::new(vec![vec![rat(1, 1)], vec![rat(-1, 1)]], vec![rat(1, 2), rat(0, 1)], 1).unwrap();
        let RingMaximum::Found { value, supremum, .. } = ring_maximize(&s, &[rat(1, 1)], &ring, 20).unwrap() else { panic!() };
        assert_eq!(supremum, rat(1, 2));
        assert_eq!(value.cmp_rational(&rat(1, 2)), Ordering::Less);
        assert_eq!(value.cmp_rational(&(rat(1, 2) - rat(1, 1 << 19))), Ordering::Greater);
        let open = InequalitySystem::from_i64(&[&[-1]], &[0]).unwrap();
        assert_eq!(ring_maximize(&open, &[rat(1, 1)], &ring, 5).unwrap(), RingMaximum::Unbounded);
    }
}
