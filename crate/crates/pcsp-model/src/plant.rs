use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::ModelError;
use crate::instance::{Assignment, Clause, Instance, Side};
use crate::template::PromiseTemplate;
use crate::Value;

const TRIES_PER_CLAUSE: usize = 10_000;

/// A random instance with `m` clauses over `n` variables, together with a
/// witness over `D` satisfying it.
///
/// The witness is uniform over `D^n`. Each clause picks a constraint and a
/// tuple of `P_i` uniformly, then distinct variables whose witness values
/// spell out that tuple; a draw that cannot be realised is retried.
pub fn plant_satisfiable_instance(
    tmpl: &PromiseTemplate,
    n: usize,
    m: usize,
    seed: u64,
) -> Result<(Instance, Assignment), ModelError> {
    if let Some(c) = tmpl.constraints().iter().find(|c| c.p.is_empty()) {
        return Err(ModelError::EmptyRelation(c.name.clone()));
    }
    if n < tmpl.max_arity() {
        return Err(ModelError::TooFewVariables { needed: tmpl.max_arity(), n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = tmpl.domain().d_size();
    let witness: Vec<Value> = (0..n).map(|_| rng.gen_range(0..d)).collect();
    let mut by_value: Vec<Vec<usize>> = vec![Vec::new(); d];
    for (v, &x) in witness.iter().enumerate() {
        by_value[x].push(v);
    }

    let k = tmpl.constraints().len();
    let mut clauses = Vec::with_capacity(m);
    for _ in 0..m {
        let clause = (0..TRIES_PER_CLAUSE).find_map(|_| {
            let i = rng.gen_range(0..k);
            let tuple = tmpl.constraint(i).p.tuples().choose(&mut rng)?;
            let mut vars = Vec::with_capacity(tuple.len());
            for &x in tuple {
                let pool = &by_value[x];
                let fresh: Vec<usize> = pool.iter().copied().filter(|v| !vars.contains(v)).collect();
                vars.push(*fresh.choose(&mut rng)?);
            }
            Some(Clause { constraint: i, vars })
        });
        clauses.push(clause.ok_or(ModelError::PlantingFailed)?);
    }
    let inst = Instance::new(tmpl, n, clauses)?;
    Ok((inst, Assignment { side: Side::P, values: witness }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::verify_assignment;
    use crate::template::{Constraint, PromiseDomain, Relation};

    fn one_in_three() -> PromiseTemplate {
        let p = Relation::from_predicate(3, 2, |t| t.iter().sum::<usize>() == 1);
        let q = Relation::from_predicate(3, 2, |t| t.iter().sum::<usize>() % 3 != 0);
        PromiseTemplate::new(PromiseDomain::identity(2), vec![Constraint { name: "R".into(), p, q }]).unwrap()
    }

    #[test]
    fn witness_satisfies_and_seed_is_reproducible() {
        let t = one_in_three();
        let (inst, w) = plant_satisfiable_instance(&t, 10, 20, 3).unwrap();
        assert_eq!(inst.clauses().len(), 20);
        assert!(verify_assignment(&t, &inst, &w).unwrap().is_satisfied());
        assert_eq!(plant_satisfiable_instance(&t, 10, 20, 3).unwrap().0, inst);
        for c in inst.clauses() {
            let mut v = c.vars.clone();
            v.sort_unstable();
            v.dedup();
            assert_eq!(v.len(), 3);
        }
    }

    #[test]
    fn zero_clauses_and_errors() {
        let t = one_in_three();
        assert_eq!(plant_satisfiable_instance(&t, 3, 0, 1).unwrap().0.clauses().len(), 0);
        assert!(matches!(plant_satisfiable_instance(&t, 2, 1, 1), Err(ModelError::TooFewVariables { .. })));
        let empty = Relation::new("E", 2, vec![]).unwrap();
        let full = Relation::from_predicate(2, 2, |_| true);
        let t2 =
            PromiseTemplate::new(PromiseDomain::identity(2), vec![Constraint { name: "E".into(), p: empty, q: full }])
                .unwrap();
        assert_eq!(plant_satisfiable_instance(&t2, 4, 1, 1), Err(ModelError::EmptyRelation("E".into())));
    }
}
