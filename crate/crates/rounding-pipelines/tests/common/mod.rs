#![allow(dead_code)]

use std::collections::BTreeMap;

use exact_rings::{rat, QuadRing};
use pcsp_model::*;
use rounding_pipelines::*;

pub fn ham(t: &[usize]) -> usize {
    t.iter().filter(|&&x| x == 1).count()
}

fn boolean(constraints: Vec<(&str, Relation, Relation)>) -> PromiseTemplate {
    template(PromiseDomain::identity(2), constraints)
}

fn template(domain: PromiseDomain, constraints: Vec<(&str, Relation, Relation)>) -> PromiseTemplate {
    let cs = constraints.into_iter().map(|(name, p, q)| Constraint { name: name.into(), p, q }).collect();
    PromiseTemplate::new(domain, cs).unwrap()
}

pub fn didactic() -> PromiseTemplate {
    let p = Relation::from_predicate(6, 2, |t| ham(t) == 3);
    let q = Relation::from_predicate(6, 4, |y| {
        let all_in = |s: &[usize]| y.iter().all(|v| s.contains(v));
        !all_in(&[0, 3]) && !all_in(&[1, 2]) && y.iter().sum::<usize>() % 2 == 1
    });
    template(PromiseDomain::numeric(2, 4, vec![0, 1]).unwrap(), vec![("P", p, q)])
}

pub fn two_sat() -> PromiseTemplate {
    let or = Relation::from_predicate(2, 2, |t| ham(t) >= 1);
    let neq = Relation::from_predicate(2, 2, |t| t[0] != t[1]);
    boolean(vec![("OR", or.clone(), or), ("NEQ", neq.clone(), neq)])
}

/// Equations over `Z/7` restricted to `{0,1}`, against their images under
/// `h = 1[· = 1]`: `x₁+x₂+x₃ ≡ 1`, `x₁ − x₂ ≡ 0`, `x₁+…+x₄ ≡ 2`.
pub fn mod7() -> PromiseTemplate {
    let image = |k: usize, c: usize| {
        Relation::from_predicate(k, 2, |y| {
            // some a ∈ (Z/7)^k with Σa ≡ c and h(a) = y: the zeros of y may
            // take any value ≠ 1
            let ones = ham(y);
            let free = k - ones;
            (0..6usize.pow(free as u32)).any(|mut code| {
                let mut s = ones;
                for _ in 0..free {
                    s += [0, 2, 3, 4, 5, 6][code % 6];
                    code /= 6;
                }
                s % 7 == c
            })
        })
    };
    let a1 = Relation::from_predicate(3, 2, |t| ham(t) == 1);
    let a2 = Relation::from_predicate(2, 2, |t| t[0] == t[1]);
    let a3 = Relation::from_predicate(4, 2, |t| ham(t) == 2);
    boolean(vec![("A1", a1, image(3, 1)), ("A2", a2.clone(), a2), ("A3", a3, image(4, 2))])
}

pub fn f2_affine() -> PromiseTemplate {
    let odd = Relation::from_predicate(3, 2, |t| ham(t) % 2 == 1);
    let even = Relation::from_predicate(3, 2, |t| ham(t) % 2 == 0);
    boolean(vec![("ODD", odd.clone(), odd), ("EVEN", even.clone(), even)])
}

pub fn one_in_three() -> PromiseTemplate {
    let p = Relation::from_predicate(3, 2, |t| ham(t) == 1);
    let nae = Relation::from_predicate(3, 2, |t| ham(t) % 3 != 0);
    boolean(vec![("1IN3", p, nae)])
}

pub fn rainbow() -> PromiseTemplate {
    let p = Relation::from_predicate(3, 3, |t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2]);
    let nae = Relation::from_predicate(3, 2, |t| ham(t) % 3 != 0);
    template(PromiseDomain::numeric(3, 2, vec![1, 0, 0]).unwrap(), vec![("RAINBOW", p, nae)])
}

fn r2() -> QuadRing {
    QuadRing::new(2).unwrap()
}

pub fn maj() -> Family {
    Family::Threshold(ThresholdFamily::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![0, 0, 1, 1], r2(), Arities::odd()).unwrap())
}

pub fn g_family() -> Family {
    Family::ThrPer(
        ThrPerFamily::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![2, 2], vec![vec![0, 3], vec![2, 1]], 1, r2(), Arities::odd())
            .unwrap(),
    )
}

pub fn mod7_family() -> Family {
    Family::Periodic(PeriodicFamily::new(7, vec![0, 1, 0, 0, 0, 0, 0], 1, Arities::new(7, vec![1]).unwrap()).unwrap())
}

pub fn par() -> Family {
    Family::Periodic(PeriodicFamily::new(2, vec![0, 1], 1, Arities::odd()).unwrap())
}

pub fn malt() -> Family {
    let d = Polynomial::linear(&[rat(1, 1), rat(-1, 1)], rat(0, 1));
    let cell = |label, rel| Cell { label, ineqs: vec![Inequality { poly: d.clone(), rel }] };
    let spec = PartitionSpec::new(
        vec![r2(), QuadRing::new(3).unwrap()],
        vec![cell(0, Rel::Lt), cell(1, Rel::Gt)],
        Some(vec![0, 1, 0, 1]),
    )
    .unwrap();
    Family::RegPer(RegPerFamily::regional(spec, Arities::odd()).unwrap())
}

/// `1[x₁ > 1/3]` on the simplex over three colours.
pub fn rainbow_family() -> Family {
    let x1 = Polynomial::linear(&[rat(1, 1), rat(0, 1), rat(0, 1)], rat(-1, 3));
    let cell = |label, rel| Cell { label, ineqs: vec![Inequality { poly: x1.clone(), rel }] };
    let spec = PartitionSpec::new(vec![r2(); 3], vec![cell(1, Rel::Gt), cell(0, Rel::Lt)], None).unwrap();
    let maps: BTreeMap<usize, PeriodicMap> = [0, 1].into_iter().map(|l| (l, PeriodicMap::constant(3, l))).collect();
    Family::Simplex(SimplexFamily::new(r2(), spec, maps, vec![0, 0, 0], Arities::new(3, vec![1, 2]).unwrap()).unwrap())
}
