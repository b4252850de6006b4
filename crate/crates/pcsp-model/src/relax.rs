//! Basic LP and affine relaxations of an instance.
//!
//! Column layout, both relaxations: the `n` variables first (`k` columns
//! each for the LP), then per-clause multiplier blocks in clause order, then
//! (LP only, extended encoding) per-variable multipliers for `Conv(g(D))`.

use std::collections::{HashMap, HashSet};
use std::ops::Range;

use exact_linalg::{convex_hull_facets, InequalitySystem, LinearSystem, VarDomain};
use exact_rings::{Rational, Scalar};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::ModelError;
use crate::instance::Instance;
use crate::template::PromiseTemplate;

/// Default bound on the subsets `convex_hull_facets` may examine per hull.
pub const DEFAULT_FACET_BUDGET: u64 = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicLp {
    pub system: InequalitySystem,
    n: usize,
    k: usize,
    clause_multipliers: Vec<Option<Range<usize>>>,
}

impl BasicLp {
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn k(&self) -> usize {
        self.k
    }
    /// The `k` coordinates of variable `i` in a solution vector.
    pub fn vector<'a, T>(&self, sol: &'a [T], i: usize) -> &'a [T] {
        &sol[i * self.k..(i + 1) * self.k]
    }
    /// Columns of clause `j`'s convex multipliers, one per tuple of `P_i`
    /// in relation order; `None` when the clause was encoded by facets.
    pub fn clause_multipliers(&self, j: usize) -> Option<Range<usize>> {
        self.clause_multipliers[j].clone()
    }
}

type SparseRow = Vec<(usize, Rational)>;

struct Rows {
    rows: Vec<(SparseRow, Rational)>,
    seen: HashSet<(Vec<(usize, Rational)>, Rational)>,
}

impl Rows {
    fn push(&mut self, mut row: SparseRow, rhs: Rational) {
        row.sort_by_key(|e| e.0);
        let mut merged: SparseRow = Vec::with_capacity(row.len());
        for (c, a) in row {
            match merged.last_mut() {
                Some((lc, la)) if *lc == c => *la += a,
                _ => merged.push((c, a)),
            }
        }
        merged.retain(|(_, a)| !a.is_zero());
        if self.seen.insert((merged.clone(), rhs.clone())) {
            self.rows.push((merged, rhs));
        }
    }

    fn push_eq(&mut self, row: SparseRow, rhs: Rational) {
        let neg = row.iter().map(|(c, a)| (*c, -a)).collect();
        self.push(row, rhs.clone());
        self.push(neg, -rhs);
    }

    /// `x_cols ∈ conv(points)` through fresh multipliers starting at `first`.
    fn extended(&mut self, cols: &[usize], points: &[Vec<BigInt>], first: usize) {
        for t in 0..points.len() {
            self.push(vec![(first + t, -Rational::one())], Rational::zero());
        }
        self.push_eq((0..points.len()).map(|t| (first + t, Rational::one())).collect(), Rational::one());
        for (a, &col) in cols.iter().enumerate() {
            let mut row = vec![(col, Rational::one())];
            row.extend(points.iter().enumerate().map(|(t, p)| (first + t, -Rational::from_integer(p[a].clone()))));
            self.push_eq(row, Rational::zero());
        }
    }

    fn facets(&mut self, cols: &[usize], hull: &InequalitySystem) {
        for (row, b) in hull.matrix().iter().zip(hull.rhs()) {
            self.push(cols.iter().zip(row).map(|(&c, a)| (c, a.clone())).collect(), b.clone());
        }
    }

    fn into_system(self, cols: usize) -> InequalitySystem {
        let mut sys = InequalitySystem::empty(cols);
        for (row, b) in self.rows {
            let mut dense = vec![Rational::zero(); cols];
            for (c, a) in row {
                dense[c] = a;
            }
            sys.push(dense, b);
        }
        sys
    }
}

fn encoding_points(g: &[Vec<i64>], tuples: &[Vec<usize>]) -> Vec<Vec<BigInt>> {
    tuples.iter().map(|t| t.iter().flat_map(|&x| g[x].iter().map(|&v| BigInt::from(v))).collect()).collect()
}

fn check_encoding(tmpl: &PromiseTemplate, g: &[Vec<i64>]) -> Result<usize, ModelError> {
    let d = tmpl.domain().d_size();
    if g.len() != d {
        return Err(ModelError::EncodingLength { expected: d, got: g.len() });
    }
    let k = g.first().map_or(0, Vec::len);
    if g.iter().any(|v| v.len() != k) {
        return Err(ModelError::EncodingLength { expected: k, got: g.iter().map(Vec::len).find(|&l| l != k).unwrap() });
    }
    Ok(k)
}

fn build(tmpl: &PromiseTemplate, inst: &Instance, g: &[Vec<i64>], budget: Option<u64>) -> Result<BasicLp, ModelError> {
    let k = check_encoding(tmpl, g)?;
    let n = inst.n();
    let hull_of = |pts: &[Vec<BigInt>], dim: usize| budget.and_then(|b| convex_hull_facets(pts, dim, b));

    let domain_tuples: Vec<Vec<usize>> = (0..tmpl.domain().d_size()).map(|d| vec![d]).collect();
    let domain_points = encoding_points(g, &domain_tuples);
    let domain_hull = hull_of(&domain_points, k);
    let mut hulls: HashMap<usize, (Vec<Vec<BigInt>>, Option<InequalitySystem>)> = HashMap::new();
    for c in inst.clauses() {
        hulls.entry(c.constraint).or_insert_with(|| {
            let rel = &tmpl.constraint(c.constraint).p;
            let pts = encoding_points(g, rel.tuples());
            let h = hull_of(&pts, rel.arity() * k);
            (pts, h)
        });
    }

    let mut next = n * k;
    let mut clause_multipliers = Vec::with_capacity(inst.clauses().len());
    for c in inst.clauses() {
        let (pts, h) = &hulls[&c.constraint];
        if h.is_some() {
            clause_multipliers.push(None);
        } else {
            clause_multipliers.push(Some(next..next + pts.len()));
            next += pts.len();
        }
    }
    let domain_first = next;
    if domain_hull.is_none() {
        next += n * domain_points.len();
    }

    let mut rows = Rows { rows: Vec::new(), seen: HashSet::new() };
    for i in 0..n {
        let cols: Vec<usize> = (i * k..(i + 1) * k).collect();
        match &domain_hull {
            Some(h) => rows.facets(&cols, h),
            None => rows.extended(&cols, &domain_points, domain_first + i * domain_points.len()),
        }
    }
    for (c, mult) in inst.clauses().iter().zip(&clause_multipliers) {
        let cols: Vec<usize> = c.vars.iter().flat_map(|&v| v * k..(v + 1) * k).collect();
        let (pts, h) = &hulls[&c.constraint];
        match (h, mult) {
            (Some(h), _) => rows.facets(&cols, h),
            (None, Some(r)) => rows.extended(&cols, pts, r.start),
            (None, None) => unreachable!("multipliers allocated above"),
        }
    }
    Ok(BasicLp { system: rows.into_system(next), n, k, clause_multipliers })
}

/// The Basic LP with every membership `(v_{j₁}, …) ∈ Conv(g(P_i))` and
/// `v_i ∈ Conv(g(D))` written through convex multipliers `λ ≥ 0`, `Σλ = 1`.
/// `g[d]` is the integer `k`-vector of domain value `d`.
pub fn build_basic_lp(tmpl: &PromiseTemplate, inst: &Instance, g: &[Vec<i64>]) -> Result<BasicLp, ModelError> {
    build(tmpl, inst, g, None)
}

/// The same relaxation over the `v` columns alone, with each hull written as
/// its facet inequalities. Hulls whose facet enumeration would exceed
/// `budget` subsets fall back to multipliers. Duplicate rows are dropped.
pub fn build_basic_lp_facets(
    tmpl: &PromiseTemplate,
    inst: &Instance,
    g: &[Vec<i64>],
    budget: u64,
) -> Result<BasicLp, ModelError> {
    build(tmpl, inst, g, Some(budget))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AffineRelaxation<T> {
    pub system: LinearSystem<T>,
    n: usize,
    clause_multipliers: Vec<Range<usize>>,
}

impl<T> AffineRelaxation<T> {
    pub fn n(&self) -> usize {
        self.n
    }
    /// Columns of clause `j`'s affine multipliers, in relation order.
    pub fn clause_multipliers(&self, j: usize) -> Range<usize> {
        self.clause_multipliers[j].clone()
    }
}

/// Per clause: `w_{j_c} = Σ_t r_{j,t} · g(t_c)` for each position `c`, and
/// `Σ_t r_{j,t} = 1`, with the multipliers confined to `multipliers`.
/// `g[d]` is the ring element of domain value `d`.
pub fn build_affine_relaxation<T: Scalar>(
    tmpl: &PromiseTemplate,
    inst: &Instance,
    g: &[T],
    multipliers: VarDomain,
) -> Result<AffineRelaxation<T>, ModelError> {
    let d = tmpl.domain().d_size();
    if g.len() != d {
        return Err(ModelError::EncodingLength { expected: d, got: g.len() });
    }
    let n = inst.n();
    let mut ranges = Vec::with_capacity(inst.clauses().len());
    let mut cols = n;
    for c in inst.clauses() {
        let p = tmpl.constraint(c.constraint).p.len();
        ranges.push(cols..cols + p);
        cols += p;
    }
    let mut domains = vec![VarDomain::Full; n];
    domains.resize(cols, multipliers);
    let Some(proto) = g.first() else {
        let sys = LinearSystem::new(vec![], vec![], cols).expect("empty system").with_domains(domains).expect("sized");
        return Ok(AffineRelaxation { system: sys, n, clause_multipliers: ranges });
    };
    let zero = proto.zero_like();
    let one = proto.one_like();
    let mut matrix = Vec::new();
    let mut rhs = Vec::new();
    for (c, r) in inst.clauses().iter().zip(&ranges) {
        let tuples = tmpl.constraint(c.constraint).p.tuples();
        for (pos, &v) in c.vars.iter().enumerate() {
            let mut row = vec![zero.clone(); cols];
            row[v] = one.clone();
            for (t, tup) in tuples.iter().enumerate() {
                row[r.start + t] = g[tup[pos]].negated();
            }
            matrix.push(row);
            rhs.push(zero.clone());
        }
        let mut row = vec![zero.clone(); cols];
        for col in r.clone() {
            row[col] = one.clone();
        }
        matrix.push(row);
        rhs.push(one.clone());
    }
    let system = LinearSystem::new(matrix, rhs, cols).expect("consistent shape").with_domains(domains).expect("sized");
    Ok(AffineRelaxation { system, n, clause_multipliers: ranges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Clause;
    use crate::template::{Constraint, PromiseDomain, Relation};
    use exact_linalg::{maximize, solve_mod_system, LpOutcome};
    use exact_rings::{rat, ModInt};

    fn neq() -> PromiseTemplate {
        let r = Relation::from_predicate(2, 2, |t| t[0] != t[1]);
        PromiseTemplate::new(PromiseDomain::identity(2), vec![Constraint { name: "NEQ".into(), p: r.clone(), q: r }])
            .unwrap()
    }

    fn feasible(sys: &InequalitySystem) -> bool {
        let c = vec![Rational::zero(); sys.cols()];
        !matches!(maximize(sys.matrix(), sys.rhs(), &c, &Rational::zero()), LpOutcome::Infeasible)
    }

    fn ident() -> Vec<Vec<i64>> {
        vec![vec![0], vec![1]]
    }

    #[test]
    fn neq_projects_to_the_segment() {
        let t = neq();
        let inst = Instance::new(&t, 2, vec![Clause { constraint: 0, vars: vec![0, 1] }]).unwrap();
        for lp in [build_basic_lp(&t, &inst, &ident()).unwrap(), build_basic_lp_facets(&t, &inst, &ident(), 1000).unwrap()] {
            let sys = &lp.system;
            let cols = sys.cols();
            // (v₁, v₂) feasible iff v₁ + v₂ = 1 and 0 ≤ v₁ ≤ 1
            for (v1, v2, ok) in [(rat(1, 3), rat(2, 3), true), (rat(1, 2), rat(1, 3), false), (rat(3, 2), rat(-1, 2), false)]
            {
                let mut fixed = sys.clone();
                let mut e = vec![Rational::zero(); cols];
                e[0] = Rational::one();
                fixed.push_equality(e.clone(), v1.clone());
                e[0] = Rational::zero();
                e[1] = Rational::one();
                fixed.push_equality(e, v2.clone());
                assert_eq!(feasible(&fixed), ok, "({v1}, {v2})");
            }
        }
    }

    #[test]
    fn facet_form_has_only_variable_columns() {
        let t = neq();
        let inst = Instance::new(&t, 3, vec![Clause { constraint: 0, vars: vec![0, 1] }]).unwrap();
        let lp = build_basic_lp_facets(&t, &inst, &ident(), 1000).unwrap();
        assert_eq!(lp.system.cols(), 3);
        assert_eq!(lp.clause_multipliers(0), None);
        let ext = build_basic_lp(&t, &inst, &ident()).unwrap();
        assert_eq!(ext.system.cols(), 3 + 2 + 3 * 2);
        assert_eq!(ext.clause_multipliers(0), Some(3..5));
        // empty instance: only the per-variable domain rows
        let empty = build_basic_lp(&t, &Instance::empty(2), &ident()).unwrap();
        assert_eq!(empty.system.cols(), 2 + 2 * 2);
        assert!(build_basic_lp(&t, &inst, &[vec![0]]).is_err());
    }

    #[test]
    fn affine_parity_system() {
        let t = neq();
        let inst = Instance::new(&t, 2, vec![Clause { constraint: 0, vars: vec![0, 1] }]).unwrap();
        let g = vec![ModInt::new(0, 2).unwrap(), ModInt::new(1, 2).unwrap()];
        let rel = build_affine_relaxation(&t, &inst, &g, VarDomain::Full).unwrap();
        assert_eq!(rel.system.rows(), 3);
        assert_eq!(rel.clause_multipliers(0), 2..4);
        let sol = solve_mod_system(&rel.system).unwrap().unwrap();
        assert_eq!(sol[0].value() + sol[1].value(), 1);
        let empty = build_affine_relaxation(&t, &Instance::empty(2), &g, VarDomain::Full).unwrap();
        assert_eq!(empty.system.rows(), 0);
    }
}
