//! Built-in templates and polymorphism families.
//!
//! Templates and families live in separate namespaces; an [`Entry`] pairs
//! one of each. Entries marked unsound are kept on purpose: their family
//! passes at small arities and fails further up, which makes them useful
//! regression cases for `check-pol`.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use exact_rings::{rat, QuadRing};
use pcsp_model::{check_polymorphism, Constraint, Label, PolymorphismVerdict, PromiseDomain, PromiseTemplate, Relation};
use rounding_pipelines::{
    Arities, Cell, Family, Inequality, PartitionSpec, PeriodicFamily, PeriodicMap, Polynomial, RegPerFamily, Rel,
    SimplexFamily, ThrPerFamily, ThresholdFamily,
};

use crate::error::CliError;

#[derive(Clone, Debug)]
pub struct Entry {
    pub template: &'static str,
    pub family: &'static str,
    /// the family solves the template at every valid arity
    pub sound: bool,
    pub notes: &'static str,
}

pub const ENTRIES: &[Entry] = &[
    Entry {
        template: "didactic",
        family: "fam-gL",
        sound: true,
        notes: "3-of-6 ones vs. odd-sum words avoiding {0,3}^6 and {1,2}^6; g_L for odd L",
    },
    Entry { template: "two-sat", family: "fam-maj", sound: true, notes: "2-SAT with disequalities; majority" },
    Entry {
        template: "two-plus-eps-sat",
        family: "fam-maj",
        sound: false,
        notes: "at least 2 of 5 vs. at least 1 of 5; MAJ_3 works, MAJ_5 does not",
    },
    Entry {
        template: "threshold",
        family: "fam-thr",
        sound: true,
        notes: "weight <= 2 / >= 3 of 4, relaxed to <= 3 / >= 1; threshold 2/3 at L not divisible by 3",
    },
    Entry { template: "mod7", family: "fam-mod7", sound: true, notes: "equations over Z/7 restricted to {0,1}; h = 1[x = 1]" },
    Entry { template: "one-in-three", family: "fam-malt", sound: true, notes: "1-in-3 vs. not-all-equal; alternating threshold" },
    Entry { template: "rainbow3", family: "fam-rainbow", sound: true, notes: "rainbow 3-colouring vs. 2-colouring; 1[x_1 > 1/3]" },
    Entry {
        template: "rainbow3",
        family: "fam-rainbow-sum",
        sound: false,
        notes: "colour sum <= 9L/4; fine at L = 1, fails at L = 3",
    },
    Entry { template: "f2-affine", family: "fam-par", sound: true, notes: "odd/even parity of three bits; x - y + z" },
];

pub const TEMPLATES: &[&str] =
    &["didactic", "two-sat", "two-plus-eps-sat", "threshold", "mod7", "one-in-three", "rainbow3", "f2-affine"];

pub const FAMILIES: &[&str] =
    &["fam-gL", "fam-maj", "fam-thr", "fam-mod7", "fam-malt", "fam-rainbow", "fam-rainbow-sum", "fam-par"];

fn ham(t: &[usize]) -> usize {
    t.iter().filter(|&&x| x == 1).count()
}

fn build(domain: PromiseDomain, constraints: Vec<(&str, Relation, Relation)>) -> PromiseTemplate {
    let cs = constraints.into_iter().map(|(name, p, q)| Constraint { name: name.into(), p, q }).collect();
    PromiseTemplate::new(domain, cs).expect("built-in template")
}

fn boolean(constraints: Vec<(&str, Relation, Relation)>) -> PromiseTemplate {
    build(PromiseDomain::identity(2), constraints)
}

fn at_least(k: usize, arity: usize) -> Relation {
    Relation::from_predicate(arity, 2, |t| ham(t) >= k)
}

fn at_most(k: usize, arity: usize) -> Relation {
    Relation::from_predicate(arity, 2, |t| ham(t) <= k)
}

fn nae3() -> Relation {
    Relation::from_predicate(3, 2, |t| ham(t) % 3 != 0)
}

fn didactic() -> PromiseTemplate {
    let p = Relation::from_predicate(6, 2, |t| ham(t) == 3);
    let q = Relation::from_predicate(6, 4, |y| {
        let all_in = |s: &[usize]| y.iter().all(|v| s.contains(v));
        !all_in(&[0, 3]) && !all_in(&[1, 2]) && y.iter().sum::<usize>() % 2 == 1
    });
    build(PromiseDomain::numeric(2, 4, vec![0, 1]).expect("domain"), vec![("P", p, q)])
}

fn two_sat() -> PromiseTemplate {
    let neq = Relation::from_predicate(2, 2, |t| t[0] != t[1]);
    boolean(vec![("OR", at_least(1, 2), at_least(1, 2)), ("NEQ", neq.clone(), neq)])
}

fn two_plus_eps_sat() -> PromiseTemplate {
    let neq = Relation::from_predicate(2, 2, |t| t[0] != t[1]);
    boolean(vec![("C", at_least(2, 5), at_least(1, 5)), ("NEQ", neq.clone(), neq)])
}

fn threshold() -> PromiseTemplate {
    boolean(vec![("LO", at_most(2, 4), at_most(3, 4)), ("HI", at_least(3, 4), at_least(1, 4))])
}

/// Image of `Σa ≡ c (mod 7)`, `a ∈ (Z/7)^k`, under `h = 1[· = 1]`: the zeros
/// of `y` stand for any residue other than 1.
fn mod7_image(k: usize, c: usize) -> Relation {
    Relation::from_predicate(k, 2, |y| {
        let ones = ham(y);
        let free = (k - ones) as u32;
        (0..6usize.pow(free)).any(|mut code| {
            let mut s = ones;
            for _ in 0..free {
                s += [0, 2, 3, 4, 5, 6][code % 6];
                code /= 6;
            }
            s % 7 == c
        })
    })
}

fn mod7() -> PromiseTemplate {
    let eq = Relation::from_predicate(2, 2, |t| t[0] == t[1]);
    boolean(vec![
        ("A1", Relation::from_predicate(3, 2, |t| ham(t) == 1), mod7_image(3, 1)),
        ("A2", eq.clone(), eq),
        ("A3", Relation::from_predicate(4, 2, |t| ham(t) == 2), mod7_image(4, 2)),
    ])
}

fn one_in_three() -> PromiseTemplate {
    boolean(vec![("1IN3", Relation::from_predicate(3, 2, |t| ham(t) == 1), nae3())])
}

fn rainbow3() -> PromiseTemplate {
    let p = Relation::from_predicate(3, 3, |t| t[0] != t[1] && t[1] != t[2] && t[0] != t[2]);
    let domain = PromiseDomain::new(vec![Label::from(1), Label::from(2), Label::from(3)], vec![Label::from(0), Label::from(1)], vec![1, 0, 0]).expect("domain");
    build(domain, vec![("RAINBOW", p, nae3())])
}

fn f2_affine() -> PromiseTemplate {
    let odd = Relation::from_predicate(3, 2, |t| ham(t) % 2 == 1);
    let even = Relation::from_predicate(3, 2, |t| ham(t) % 2 == 0);
    boolean(vec![("ODD", odd.clone(), odd), ("EVEN", even.clone(), even)])
}

fn r2() -> QuadRing {
    QuadRing::new(2).expect("2 is not a square")
}

fn half() -> Vec<exact_rings::Rational> {
    vec![rat(0, 1), rat(1, 2), rat(1, 1)]
}

fn fam_gl() -> Family {
    // below half: 0 on even weight, 3 on odd; above: 2 on even, 1 on odd
    let f = ThrPerFamily::new(half(), vec![2, 2], vec![vec![0, 3], vec![2, 1]], 1, r2(), Arities::odd());
    Family::ThrPer(f.expect("fam-gL"))
}

fn fam_maj() -> Family {
    Family::Threshold(ThresholdFamily::new(half(), vec![0, 0, 1, 1], r2(), Arities::odd()).expect("fam-maj"))
}

fn fam_thr() -> Family {
    let arities = Arities::new(3, vec![1, 2]).expect("arities");
    Family::Threshold(ThresholdFamily::new(vec![rat(0, 1), rat(2, 3), rat(1, 1)], vec![0, 0, 1, 1], r2(), arities).expect("fam-thr"))
}

fn fam_mod7() -> Family {
    let arities = Arities::new(7, vec![1]).expect("arities");
    Family::Periodic(PeriodicFamily::new(7, vec![0, 1, 0, 0, 0, 0, 0], 1, arities).expect("fam-mod7"))
}

fn fam_par() -> Family {
    Family::Periodic(PeriodicFamily::new(2, vec![0, 1], 1, Arities::odd()).expect("fam-par"))
}

/// Two blocks over `Z[√2]` and `Z[√3]`; 1 iff the first block is heavier,
/// with a corner table for the points of `{0,1}²`.
fn fam_malt() -> Family {
    let d = Polynomial::linear(&[rat(1, 1), rat(-1, 1)], rat(0, 1));
    let cell = |label, rel| Cell { label, ineqs: vec![Inequality { poly: d.clone(), rel }] };
    let spec = PartitionSpec::new(
        vec![r2(), QuadRing::new(3).expect("3 is not a square")],
        vec![cell(0, Rel::Lt), cell(1, Rel::Gt)],
        Some(vec![0, 1, 0, 1]),
    )
    .expect("fam-malt partition");
    Family::RegPer(RegPerFamily::regional(spec, Arities::odd()).expect("fam-malt"))
}

fn simplex_family(poly: Polynomial, above: usize, below: usize, arities: Arities) -> Family {
    let cell = |label, rel| Cell { label, ineqs: vec![Inequality { poly: poly.clone(), rel }] };
    let spec = PartitionSpec::new(vec![r2(); 3], vec![cell(above, Rel::Gt), cell(below, Rel::Lt)], None).expect("partition");
    let maps: BTreeMap<usize, PeriodicMap> = [0, 1].into_iter().map(|l| (l, PeriodicMap::constant(3, l))).collect();
    Family::Simplex(SimplexFamily::new(r2(), spec, maps, vec![0, 0, 0], arities).expect("simplex family"))
}

fn fam_rainbow() -> Family {
    let x1 = Polynomial::linear(&[rat(1, 1), rat(0, 1), rat(0, 1)], rat(-1, 3));
    simplex_family(x1, 1, 0, Arities::new(3, vec![1, 2]).expect("arities"))
}

fn fam_rainbow_sum() -> Family {
    let sum = Polynomial::linear(&[rat(1, 1), rat(2, 1), rat(3, 1)], rat(-9, 4));
    simplex_family(sum, 0, 1, Arities::new(4, vec![1, 2, 3]).expect("arities"))
}

pub fn template(name: &str) -> Option<PromiseTemplate> {
    Some(match name {
        "didactic" => didactic(),
        "two-sat" => two_sat(),
        "two-plus-eps-sat" => two_plus_eps_sat(),
        "threshold" => threshold(),
        "mod7" => mod7(),
        "one-in-three" => one_in_three(),
        "rainbow3" => rainbow3(),
        "f2-affine" => f2_affine(),
        _ => return None,
    })
}

pub fn family(name: &str) -> Option<Family> {
    Some(match name {
        "fam-gL" => fam_gl(),
        "fam-maj" => fam_maj(),
        "fam-thr" => fam_thr(),
        "fam-mod7" => fam_mod7(),
        "fam-malt" => fam_malt(),
        "fam-rainbow" => fam_rainbow(),
        "fam-rainbow-sum" => fam_rainbow_sum(),
        "fam-par" => fam_par(),
        _ => return None,
    })
}

/// Checks `f_L` against `tmpl` by brute force at the family's smallest
/// arity that reproduces its residue.
pub fn self_check(tmpl: &PromiseTemplate, fam: &Family) -> Result<PolymorphismVerdict, CliError> {
    fam.check_template(tmpl)?;
    let l = fam.arity_at_least(fam.block_count() as u64) as usize;
    let f = fam.member(l)?;
    Ok(check_polymorphism(tmpl, &f, &fam.blocks(l))?)
}

/// Every entry, self-checked once per process.
pub fn entries() -> Result<&'static [Entry], &'static CliError> {
    static CHECKED: OnceLock<Result<(), CliError>> = OnceLock::new();
    CHECKED
        .get_or_init(|| {
            for e in ENTRIES {
                let (t, f) = (template(e.template).expect("listed"), family(e.family).expect("listed"));
                if let PolymorphismVerdict::Counterexample { .. } = self_check(&t, &f)? {
                    return Err(CliError::CorpusSelfCheck { template: e.template, family: e.family });
                }
            }
            Ok(())
        })
        .as_ref()
        .map(|()| ENTRIES)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_resolve() {
        for t in TEMPLATES {
            assert!(template(t).is_some(), "{t}");
        }
        for f in FAMILIES {
            assert!(family(f).is_some(), "{f}");
        }
        for e in ENTRIES {
            assert!(TEMPLATES.contains(&e.template) && FAMILIES.contains(&e.family));
        }
    }

    #[test]
    fn entries_self_check() {
        assert_eq!(entries().unwrap().len(), ENTRIES.len());
    }

    #[test]
    fn didactic_sizes() {
        let t = didactic();
        assert_eq!(t.constraint(0).p.len(), 20);
        // 4^6 words, minus the two 2-letter alphabets (which overlap nowhere),
        // then half of the rest have odd sum
        let q = t.constraint(0).q.len();
        let brute = (0..4usize.pow(6))
            .filter(|&w| {
                let y: Vec<usize> = (0..6).map(|i| w / 4usize.pow(i) % 4).collect();
                let in_set = |s: [usize; 2]| y.iter().all(|v| s.contains(v));
                !in_set([0, 3]) && !in_set([1, 2]) && y.iter().sum::<usize>() % 2 == 1
            })
            .count();
        assert_eq!(q, brute);
        assert_eq!(q, (4096 - 2 * 64) / 2);
    }
}
