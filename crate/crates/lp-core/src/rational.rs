use exact_linalg::{maximize, InequalitySystem, LpOutcome};
use exact_rings::Rational;
use num_traits::Zero;

/// A point of `{x : Mx ≤ b}`, or `None` when it is empty.
pub fn lp_feasible_rational(sys: &InequalitySystem) -> Option<Vec<Rational>> {
    let c = vec![Rational::zero(); sys.cols()];
    match maximize(sys.matrix(), sys.rhs(), &c, &Rational::zero()) {
        LpOutcome::Optimal { x, .. } => Some(x),
        LpOutcome::Infeasible => None,
        LpOutcome::Unbounded => unreachable!("zero objective"),
    }
}

pub fn lp_maximize_rational(sys: &InequalitySystem, objective: &[Rational]) -> LpOutcome<Rational> {
    assert_eq!(objective.len(), sys.cols(), "objective length");
    maximize(sys.matrix(), sys.rhs(), objective, &Rational::zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    #[test]
    fn examples() {
        let s = InequalitySystem::from_i64(&[&[1], &[-1]], &[1, 0]).unwrap();
        let x = lp_feasible_rational(&s).unwrap();
        assert!(s.contains(&x));
        let s = InequalitySystem::from_i64(&[&[1], &[-1]], &[-1, 0]).unwrap();
        assert_eq!(lp_feasible_rational(&s), None);
        let s = InequalitySystem::from_i64(&[&[2, 1], &[-1, 0], &[0, -1]], &[3, 0, 0]).unwrap();
        let LpOutcome::Optimal { value, .. } = lp_maximize_rational(&s, &[rat(1, 1), rat(1, 1)]) else { panic!() };
        assert_eq!(value, rat(3, 1));
    }
}
