mod common;

use std::collections::BTreeMap;

use exact_rings::{quad_floor, rat, LatticeIdeal, LatticeQuotientElem, ModInt, QuadRat, QuadRing};
use num_bigint::BigInt;
use proptest::prelude::*;
use rounding_pipelines::*;
use std::sync::Arc;

fn weights_case() -> impl Strategy<Value = (Vec<u64>, Vec<u64>, u64, u64)> {
    (1usize..6, 1u64..6).prop_flat_map(|(m, modulus)| {
        (
            prop::collection::vec(0u64..20, m).prop_filter("some mass", |v| v.iter().any(|&x| x > 0)),
            prop::collection::vec(0..modulus, m),
            Just(modulus),
            0u64..400,
        )
    })
}

proptest! {
    #[test]
    fn construct_weights_invariants((raw, residues, modulus, extra) in weights_case()) {
        let m = raw.len() as u64;
        let total: u64 = raw.iter().sum();
        let alpha: Vec<QuadRat> = raw.iter().map(|&x| QuadRat::from_rational(&rat(x as i64, total as i64), 2)).collect();
        let class = residues.iter().sum::<u64>() % modulus;
        let l = modulus * m + extra * modulus + class;
        let w = construct_weights(&alpha, &residues, l, modulus).unwrap();
        prop_assert_eq!(w.iter().sum::<u64>(), l);
        for t in 0..raw.len() {
            prop_assert_eq!(w[t] % modulus, residues[t]);
            // |w − αL| ≤ 2Mm, in integers: |w·total − raw·L| ≤ 2Mm·total
            let dev = (w[t] as i128 * total as i128 - raw[t] as i128 * l as i128).abs();
            prop_assert!(dev <= (2 * modulus * m * total) as i128);
            if raw[t] == 0 && residues[t] == 0 {
                prop_assert_eq!(w[t], 0);
            }
        }
    }

    #[test]
    fn wrong_class_is_rejected((raw, residues, modulus, extra) in weights_case()) {
        prop_assume!(modulus > 1);
        let total: u64 = raw.iter().sum();
        let alpha: Vec<QuadRat> = raw.iter().map(|&x| QuadRat::from_rational(&rat(x as i64, total as i64), 2)).collect();
        let class = residues.iter().sum::<u64>() % modulus;
        let l = modulus * raw.len() as u64 + extra * modulus + (class + 1) % modulus;
        let rejected = matches!(construct_weights(&alpha, &residues, l, modulus), Err(PipelineError::Residue { .. }));
        prop_assert!(rejected);
    }

    /// The didactic rounding and its one-block regional recast agree.
    #[test]
    fn thrper_matches_regional(a in -50i64..50, b in -40i64..40, w in 0i64..2) {
        let Family::ThrPer(f) = common::g_family() else { unreachable!() };
        let g = f.to_regional().unwrap();
        let r = f.ring().clone();
        let v = r.elem(a, b);
        let j = Arc::new(LatticeIdeal::diagonal(&[2]).unwrap());
        let x = round_thrper(&v, &ModInt::new(w as i128, 2).unwrap(), &f).unwrap();
        let y = round_regper(&[v], &LatticeQuotientElem::from_i64(&[w], j), &g).unwrap();
        prop_assert_eq!(x, y);
    }

    #[test]
    fn thrper_members_match_regional(ham in 0u64..60, extra in 0u64..30) {
        let f = common::g_family();
        let Family::ThrPer(inner) = &f else { unreachable!() };
        let g = Family::RegPer(inner.to_regional().unwrap());
        let l = 2 * (ham + extra) + 1;
        let counts = vec![vec![l - ham, ham]];
        prop_assert_eq!(f.eval_counts(&counts).unwrap(), g.eval_counts(&counts).unwrap());
    }

    /// On two colours the simplex family `1[x₁ > τ]` is the threshold family.
    #[test]
    fn simplex_on_two_colours_is_threshold(b in -25i64..25, l in 1u64..40, ones in 0u64..40) {
        let r = QuadRing::new(2).unwrap();
        // the fractional part of b√2
        let v = r.elem(-quad_floor(&r.elem(0, b)), b);
        let x1 = Polynomial::linear(&[rat(0, 1), rat(1, 1)], rat(-1, 2));
        let cell = |label, rel| Cell { label, ineqs: vec![Inequality { poly: x1.clone(), rel }] };
        let spec = PartitionSpec::new(vec![r.clone(); 2], vec![cell(1, Rel::Gt), cell(0, Rel::Lt)], None).unwrap();
        let maps: BTreeMap<usize, PeriodicMap> = [0, 1].into_iter().map(|k| (k, PeriodicMap::constant(2, k))).collect();
        let s = SimplexFamily::new(r.clone(), spec, maps, vec![0, 0], Arities::odd()).unwrap();
        let Family::Threshold(t) = common::maj() else { unreachable!() };
        let j = Arc::new(LatticeIdeal::diagonal(&[1, 1]).unwrap());
        let w = LatticeQuotientElem::new(&[BigInt::from(0), BigInt::from(0)], j);
        let pt = [r.one() - v.clone(), v.clone()];
        prop_assert_eq!(round_simplex(&pt, &w, &s).unwrap(), round_threshold(&v, &t).unwrap());
        // and so are the members, at odd arities
        let l = 2 * l + 1;
        let ones = ones.min(l);
        let sf = Family::Simplex(s);
        let counts = vec![vec![l - ones, ones]];
        prop_assert_eq!(sf.eval_counts(&counts).unwrap(), common::maj().eval_counts(&counts).unwrap());
    }
}
