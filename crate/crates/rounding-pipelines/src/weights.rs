//! The integer-weight construction behind the sandwich argument, used as a
//! test oracle: from a relaxation solution for one clause, build weights
//! `w_t` (how many copies of each tuple of `P_i` to stack), evaluate the
//! family member on the stacked rows column by column, and compare with
//! the rounded values.

use std::cmp::Ordering;

use exact_linalg::{maximize, LpOutcome};
use exact_rings::{quad_floor, QuadElem, QuadRat, Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use pcsp_model::{Instance, PromiseTemplate, Relation, Value};

use crate::error::PipelineError;
use crate::family::{block_sizes, Family};
use crate::partition::PartitionSpec;
use crate::solve::Solution;

/// Nonnegative integers `w` with `Σw = l`, `w_t ≡ residues_t (mod modulus)`
/// and `|w_t − α_t·l| ≤ 2·modulus·m`. Tuples with `α_t = 0` keep weight 0
/// when the modulus is 1.
pub fn construct_weights(alpha: &[QuadRat], residues: &[u64], l: u64, modulus: u64) -> Result<Vec<u64>, PipelineError> {
    let m = alpha.len();
    if residues.len() != m {
        return Err(PipelineError::WeightShape(residues.len(), m));
    }
    if modulus == 0 {
        return Err(PipelineError::ZeroModulus);
    }
    let Some(first) = alpha.first() else { return Err(PipelineError::NotConvex) };
    let total = alpha[1..].iter().fold(first.clone(), |a, x| a.plus(x));
    if alpha.iter().any(|a| a.sign() == Ordering::Less) || total != first.one_like() {
        return Err(PipelineError::NotConvex);
    }
    let res_sum: u128 = residues.iter().map(|&r| u128::from(r % modulus)).sum();
    if res_sum % u128::from(modulus) != u128::from(l % modulus) {
        return Err(PipelineError::Residue { residue: format!("{residues:?} mod {modulus}") });
    }
    if (l as u128) < u128::from(modulus) * m as u128 {
        return Err(PipelineError::LTooSmall);
    }
    let lr = Rational::from_integer(BigInt::from(l));
    let big_m = BigInt::from(modulus);
    let targets: Vec<QuadRat> = alpha.iter().map(|a| a.mul_rational(&lr)).collect();
    // the largest value ≤ α_t·l in the right class, lifted to be nonnegative
    let mut w: Vec<BigInt> = targets
        .iter()
        .zip(residues)
        .map(|(t, &r)| {
            let f = t.floor();
            let mut x = &f - (&f - BigInt::from(r)).mod_floor(&big_m);
            if x.is_negative_big() {
                x += &big_m;
            }
            x
        })
        .collect();
    let mut deficit = BigInt::from(l) - w.iter().sum::<BigInt>();
    let gap = |t: usize, w: &[BigInt]| targets[t].add_rational(&-Rational::from_integer(w[t].clone()));
    while deficit.is_positive_big() {
        // the most under-weighted tuple with α > 0
        let t = (0..m)
            .filter(|&t| !alpha[t].is_zero_elem())
            .max_by(|&a, &b| gap(a, &w).partial_cmp(&gap(b, &w)).expect("same field"))
            .expect("Σα = 1");
        w[t] += &big_m;
        deficit -= &big_m;
    }
    while deficit.is_negative_big() {
        let t = (0..m)
            .filter(|&t| w[t] >= big_m)
            .min_by(|&a, &b| gap(a, &w).partial_cmp(&gap(b, &w)).expect("same field"))
            .expect("Σw > l ≥ modulus·m");
        w[t] -= &big_m;
        deficit += &big_m;
    }
    Ok(w.iter().map(|x| x.to_u64().expect("0 ≤ w ≤ l")).collect())
}

trait BigSign {
    fn is_negative_big(&self) -> bool;
    fn is_positive_big(&self) -> bool;
}

impl BigSign for BigInt {
    fn is_negative_big(&self) -> bool {
        self.sign() == num_bigint::Sign::Minus
    }
    fn is_positive_big(&self) -> bool {
        self.sign() == num_bigint::Sign::Plus
    }
}

/// Per-block weights for a regional-periodic clause over `J = diag(moduli)`.
/// `multipliers[t]` is the affine multiplier `r_t ∈ Z^b/J` of tuple `t`;
/// block `j` needs `w_{j,t} ≡ (r_t · r̂)_j (mod d_j)`.
pub fn construct_block_weights(
    alphas: &[Vec<QuadRat>],
    multipliers: &[Vec<u64>],
    residue: &[u64],
    sizes: &[u64],
    moduli: &[u64],
) -> Result<Vec<Vec<u64>>, PipelineError> {
    (0..moduli.len())
        .map(|j| {
            let d = moduli[j];
            let res: Vec<u64> = multipliers.iter().map(|r| ((r[j] as u128 * residue[j] as u128) % d as u128) as u64).collect();
            construct_weights(&alphas[j], &res, sizes[j], d)
        })
        .collect()
}

/// Column-wise value of the family member on the rows of `p`, tuple `t`
/// stacked `weights[ℓ][t]` times in block `ℓ`.
pub fn weighted_apply_oracle(p: &Relation, weights: &[Vec<u64>], fam: &Family) -> Result<Vec<Value>, PipelineError> {
    let d = fam.domain_size();
    (0..p.arity())
        .map(|c| {
            let counts: Vec<Vec<u64>> = weights
                .iter()
                .map(|wb| {
                    let mut cnt = vec![0u64; d];
                    for (tup, &w) in p.tuples().iter().zip(wb) {
                        cnt[tup[c]] += w;
                    }
                    cnt
                })
                .collect();
            fam.eval_counts(&counts)
        })
        .collect()
}

/// Convex weights `α` over the tuples of `p` with
/// `Σ_t α_t g(t_c) = point[c]` for each position `c`.
pub fn convex_decomposition(p: &Relation, g: &[Vec<i64>], point: &[&[QuadElem]]) -> Result<Vec<QuadRat>, PipelineError> {
    let Some(proto) = point.first().and_then(|v| v.first()) else { return Err(PipelineError::NotInHull) };
    let zero = QuadRat::from_elem(proto.zero_like());
    let one = zero.one_like();
    let int = |x: i64| QuadRat::from_rational(&Rational::from_integer(x.into()), proto.q());
    let m = p.len();
    let mut a: Vec<Vec<QuadRat>> = Vec::new();
    let mut b: Vec<QuadRat> = Vec::new();
    let mut eq = |row: Vec<QuadRat>, rhs: QuadRat| {
        a.push(row.iter().map(|x| x.negated()).collect());
        b.push(rhs.negated());
        a.push(row);
        b.push(rhs);
    };
    for (c, v) in point.iter().enumerate() {
        for (e, x) in v.iter().enumerate() {
            eq(p.tuples().iter().map(|t| int(g[t[c]][e])).collect(), QuadRat::from_elem(x.clone()));
        }
    }
    eq(vec![one.clone(); m], one.clone());
    for t in 0..m {
        let mut row = vec![zero.clone(); m];
        row[t] = one.negated();
        a.push(row);
        b.push(zero.clone());
    }
    match maximize(&a, &b, &vec![zero.clone(); m], &zero) {
        LpOutcome::Optimal { x, .. } => Ok(x),
        _ => Err(PipelineError::NotInHull),
    }
}

/// One clause pushed through the weight construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ClauseSandwich {
    pub l: u64,
    pub block_sizes: Vec<u64>,
    /// convex weights per block (one LP point per block)
    pub alphas: Vec<Vec<QuadRat>>,
    /// `weights[ℓ][t]`
    pub weights: Vec<Vec<u64>>,
    /// the member of arity `l` applied to the stacked rows
    pub tuple: Vec<Value>,
    /// the solver's values at the clause's variables
    pub rounded: Vec<Value>,
}

/// Builds weights for clause `j` of a solved instance at arity `l` and
/// evaluates the family member on them.
pub fn sandwich_clause(
    tmpl: &PromiseTemplate,
    inst: &Instance,
    fam: &Family,
    sol: &Solution,
    j: usize,
    l: u64,
) -> Result<ClauseSandwich, PipelineError> {
    let clause = &inst.clauses()[j];
    let p = &tmpl.constraint(clause.constraint).p;
    let m = p.len();
    let b = fam.block_count();
    let alphas: Vec<Vec<QuadRat>> = match &sol.lp {
        Some(lp) => lp
            .points
            .iter()
            .map(|pt| {
                let coords: Vec<&[QuadElem]> = clause.vars.iter().map(|&v| lp.lp.vector(pt, v)).collect();
                convex_decomposition(p, &lp.embedding, &coords)
            })
            .collect::<Result<_, _>>()?,
        None => {
            let u = QuadRat::from_rational(&Rational::new(BigInt::one(), BigInt::from(m)), 2);
            vec![vec![u; m]]
        }
    };
    let multipliers = match &sol.affine {
        Some(a) => a.clause_multipliers(j),
        None => vec![vec![0]; m],
    };
    let sizes = block_sizes(l, b);
    let weights = match fam {
        Family::Threshold(_) => vec![construct_weights(&alphas[0], &vec![0; m], l, 1)?],
        Family::Periodic(f) => {
            let res: Vec<u64> = multipliers.iter().map(|r| r[0] * f.residue() % f.modulus()).collect();
            vec![construct_weights(&alphas[0], &res, l, f.modulus())?]
        }
        Family::ThrPer(f) => {
            let res: Vec<u64> = multipliers.iter().map(|r| r[0] * f.residue() % f.period()).collect();
            vec![construct_weights(&alphas[0], &res, l, f.period())?]
        }
        Family::RegPer(f) => {
            let mult = if sol.affine.is_some() { multipliers } else { vec![vec![0; b]; m] };
            construct_block_weights(&alphas, &mult, f.residue(), &sizes, f.moduli())?
        }
        Family::Simplex(f) => {
            // r_t = c_t·(1, …, 1) and r̂ = l·(1, …, 1), so w_t ≡ c_t·l modulo
            // the order of (1, …, 1)
            let o = f.ones_order();
            let res: Vec<u64> = multipliers
                .iter()
                .map(|r| {
                    let c = f.ones_multiplier(r).expect("multipliers lie in R′");
                    ((c as u128 * l as u128) % o as u128) as u64
                })
                .collect();
            vec![construct_weights(&alphas[0], &res, l, o)?]
        }
    };
    let tuple = weighted_apply_oracle(p, &weights, fam)?;
    let rounded = clause.vars.iter().map(|&v| sol.assignment.values[v]).collect();
    Ok(ClauseSandwich { l, block_sizes: sizes, alphas, weights, tuple, rounded })
}

/// `v` to within 2⁻⁴⁰, robust to cancellation in `a + b√q`.
fn approx(v: &QuadElem) -> f64 {
    let k = BigInt::from(1u64 << 40);
    quad_floor(&v.scale(&k)).to_f64().unwrap_or(f64::MAX) / (1u64 << 40) as f64
}

/// `l∞` distance from `x` to every cell boundary, bounded below by
/// `|p(x)| / Σ|c|·deg` per polynomial; points of `{0,1}^b` use the corner
/// table and count as far.
fn partition_margin(spec: &PartitionSpec, x: &[f64]) -> f64 {
    if spec.corners().is_some() && x.iter().all(|&c| c == 0.0 || c == 1.0) {
        return 1.0;
    }
    let mut m = 1.0f64;
    for ineq in spec.cells().iter().flat_map(|c| &c.ineqs) {
        let (mut val, mut lip) = (0.0, 0.0);
        for (c, e) in ineq.poly.terms() {
            let c = c.to_f64().unwrap_or(f64::MAX);
            val += c * e.iter().zip(x).map(|(&k, &xi)| xi.powi(k as i32)).product::<f64>();
            lip += c.abs() * e.iter().sum::<u32>() as f64;
        }
        if lip > 0.0 {
            m = m.min(val.abs() / lip);
        }
    }
    m
}

/// How far the LP points of clause `j` sit from the family's boundaries.
fn margin(fam: &Family, sol: &Solution, vars: &[usize]) -> f64 {
    let Some(lp) = &sol.lp else { return 1.0 };
    let coord = |p: usize, v: usize| -> Vec<f64> { lp.lp.vector(&lp.points[p], v).iter().map(approx).collect() };
    let mut m = 1.0f64;
    for &v in vars {
        m = m.min(match fam {
            Family::Threshold(_) | Family::ThrPer(_) => {
                let x = coord(0, v)[0];
                let ts = match fam {
                    Family::Threshold(f) => f.thresholds(),
                    Family::ThrPer(f) => f.thresholds(),
                    _ => unreachable!(),
                };
                ts.iter().map(|t| (x - t.to_f64().unwrap_or(0.0)).abs()).filter(|d| *d > 0.0).fold(1.0, f64::min)
            }
            Family::RegPer(f) => {
                let x: Vec<f64> = (0..f.partition().dim()).map(|p| coord(p, v)[0]).collect();
                partition_margin(f.partition(), &x)
            }
            Family::Simplex(f) => partition_margin(f.partition(), &coord(0, v)),
            Family::Periodic(_) => 1.0,
        });
    }
    m
}

/// A valid arity at which [`sandwich_clause`] is expected to reproduce the
/// rounded values of clause `j`: large enough that moving each column's
/// counts by the at most `2·M·m` the weight construction allows per tuple
/// cannot cross a cell boundary. Chosen in floating point; everything
/// downstream is exact, so a bad choice shows up as a mismatch, never as a
/// false pass.
pub fn sandwich_arity(tmpl: &PromiseTemplate, inst: &Instance, fam: &Family, sol: &Solution, j: usize) -> u64 {
    let clause = &inst.clauses()[j];
    let tuples = tmpl.constraint(clause.constraint).p.len() as u64;
    let modulus = match fam {
        Family::Threshold(_) => 1,
        Family::Periodic(f) => f.modulus(),
        Family::ThrPer(f) => f.period(),
        Family::RegPer(f) => f.moduli().iter().product(),
        Family::Simplex(f) => f.ones_order(),
    };
    let b = fam.block_count() as u64;
    let dev = 2.0 * modulus as f64 * (tuples * tuples) as f64;
    let m = margin(fam, sol, &clause.vars);
    let lo = (4.0 * b as f64 * dev / m).min(1e15) as u64 + 10 * modulus * tuples * b;
    fam.arity_at_least(lo)
}
