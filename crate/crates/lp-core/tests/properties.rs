use std::cmp::Ordering;

use exact_rings::{rat, QuadRing, Rational, Scalar};
use lp_core::{lp_feasible_rational, ring_feasible_point, satisfies_exactly, InequalitySystem};
use num_traits::Signed;
use proptest::prelude::*;

/// Rows `a` with small rational entries; `b = a·p + s` for a planted integer
/// point `p`, where `s` is zero (a tight row), a fraction or an integer.
/// Some rows come as opposite pairs, which pins the point to a hyperplane.
fn planted() -> impl Strategy<Value = (InequalitySystem, Vec<i64>)> {
    (1usize..=6, 1usize..=12)
        .prop_flat_map(|(n, m)| {
            (
                prop::collection::vec(-3i64..=3, n),
                prop::collection::vec((prop::collection::vec((-5i64..=5, 1i64..=4), n), 0i64..=4, 1i64..=3, any::<bool>()), m),
            )
        })
        .prop_map(|(p, rows)| {
            let n = p.len();
            let mut sys = InequalitySystem::empty(n);
            for (coeffs, s_num, s_den, pair) in rows {
                let a: Vec<Rational> = coeffs.iter().map(|&(x, d)| rat(x, d)).collect();
                let ap: Rational = a.iter().zip(&p).map(|(x, &v)| x * rat(v, 1)).sum();
                if pair {
                    sys.push_equality(a, ap);
                } else {
                    sys.push(a, ap + rat(s_num, s_den));
                }
            }
            (sys, p)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn planted_systems_accept_in_z_sqrt2((sys, p) in planted()) {
        let ring = QuadRing::new(2).unwrap();
        let pr: Vec<Rational> = p.iter().map(|&v| rat(v, 1)).collect();
        prop_assert!(sys.contains(&pr));
        let out = ring_feasible_point(&sys, &ring).unwrap();
        prop_assert!(satisfies_exactly(&sys, &out.point, &ring));
        for z in &out.point {
            prop_assert_eq!(z.q(), 2);
            prop_assert_ne!(z.cmp_rational(&rat(1, 2)), Ordering::Equal);
            prop_assert_ne!(z.cmp_rational(&rat(1, 3)), Ordering::Equal);
        }
        // transcript: z₀ = x₀ + Σ βᵢ qᵢ
        let t = &out.transcript;
        for j in 0..sys.cols() {
            let z = t.beta.iter().zip(&t.basis).fold(t.x0[j].clone(), |acc, (b, q)| acc + b.scale(&q[j]));
            prop_assert_eq!(&z, &out.point[j]);
        }
        // |βᵢ − αᵢ| < ε
        for (a, b) in t.alpha.iter().zip(&t.beta) {
            let diff = exact_rings::QuadRat::from_elem(b.clone()).minus(a);
            prop_assert_eq!(diff.cmp_rational(&t.epsilon), Ordering::Less);
            prop_assert_eq!(diff.cmp_rational(&-t.epsilon.clone()), Ordering::Greater);
        }
        // strict slack survives on every row that is strict at y₀
        let ys = sys.slacks(&t.y0);
        for (i, (row, b)) in sys.matrix().iter().zip(sys.rhs()).enumerate() {
            if ys[i].is_positive() {
                // strict ⟺ the reversed row fails
                let reversed = InequalitySystem::new(vec![row.iter().map(|x| -x).collect()], vec![-b.clone()], sys.cols()).unwrap();
                prop_assert!(!satisfies_exactly(&reversed, &out.point, &ring));
            }
        }
    }

    #[test]
    fn rational_feasibility_substitutes((sys, _) in planted()) {
        let x = lp_feasible_rational(&sys).unwrap();
        prop_assert!(sys.contains(&x));
    }
}

#[test]
fn infeasible_after_cut() {
    let s = InequalitySystem::from_i64(&[&[1, 1], &[-1, 0], &[0, -1]], &[-1, 0, 0]).unwrap();
    assert_eq!(lp_feasible_rational(&s), None);
}
