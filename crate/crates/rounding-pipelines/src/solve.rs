//! Relax-and-round: solve each relaxation the family calls for over its
//! ring, then round every variable through the family's `h`.
//!
//! | family    | Basic LP                      | affine relaxation                      |
//! |-----------|-------------------------------|----------------------------------------|
//! | threshold | `g(d) = d` over `Z[√q]`       | —                                      |
//! | periodic  | —                             | `Z/M`, `g(1) = r`                      |
//! | thr-per   | `g(d) = d` over `Z[√q]`       | `Z/lcm(M)`, `g(1) = r`                 |
//! | regional  | `g(d) = d`, once per ring     | `Z^b/J`, `g(1) = r̂`                    |
//! | simplex   | `g(d) = e^d` over `Z[√q]`     | `Z^D/J`, `g(d) = r̂e^d`, multipliers in `R′` |
//!
//! Rejection is a verdict, not an error: some relaxation has no point over
//! its ring, so `Ψ_P` is unsatisfiable.

use num_bigint::BigInt;
use std::fmt;
use std::sync::Arc;

use exact_linalg::{solve_lattice_quotient_system, solve_mod_system, VarDomain};
use exact_rings::{LatticeIdeal, LatticeQuotientElem, ModInt, QuadElem, QuadRing, Scalar};
use lp_core::{ring_feasible_point, Reject};
use pcsp_model::{
    build_affine_relaxation, build_basic_lp_facets, AffineRelaxation, Assignment, BasicLp, Instance, PromiseTemplate, Side,
    Value, DEFAULT_FACET_BUDGET,
};

use crate::error::PipelineError;
use crate::family::Family;
use crate::round::quotient_ideal;

/// The Basic LP and one ring point per ring.
#[derive(Clone, Debug, PartialEq)]
pub struct LpStage {
    pub lp: BasicLp,
    /// `g(d)` as used to build the LP
    pub embedding: Vec<Vec<i64>>,
    pub rings: Vec<QuadRing>,
    pub points: Vec<Vec<QuadElem>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum AffineStage {
    Modular { relaxation: AffineRelaxation<ModInt>, solution: Vec<ModInt> },
    Lattice { relaxation: AffineRelaxation<LatticeQuotientElem>, solution: Vec<LatticeQuotientElem> },
}

impl AffineStage {
    /// Clause `j`'s affine multipliers as canonical integer vectors.
    pub fn clause_multipliers(&self, j: usize) -> Vec<Vec<u64>> {
        use num_traits::ToPrimitive;
        match self {
            AffineStage::Modular { relaxation, solution } => {
                solution[relaxation.clause_multipliers(j)].iter().map(|x| vec![x.value()]).collect()
            }
            AffineStage::Lattice { relaxation, solution } => solution[relaxation.clause_multipliers(j)]
                .iter()
                .map(|x| x.vector().iter().map(|c| c.to_u64().expect("canonical")).collect())
                .collect(),
        }
    }

    /// Variable `i`'s value as a canonical integer vector.
    pub fn value(&self, i: usize) -> Vec<u64> {
        use num_traits::ToPrimitive;
        match self {
            AffineStage::Modular { solution, .. } => vec![solution[i].value()],
            AffineStage::Lattice { solution, .. } => solution[i].vector().iter().map(|c| c.to_u64().expect("canonical")).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub assignment: Assignment,
    pub lp: Option<LpStage>,
    pub affine: Option<AffineStage>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rejection {
    BasicLp { q: u64, reason: Reject },
    Affine,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rejection::BasicLp { q, reason } => write!(f, "basic LP over Z[√{q}]: {reason}"),
            Rejection::Affine => write!(f, "affine relaxation has no solution"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Solved(Box<Solution>),
    Rejected(Rejection),
}

impl Outcome {
    pub fn solution(&self) -> Option<&Solution> {
        match self {
            Outcome::Solved(s) => Some(s),
            Outcome::Rejected(_) => None,
        }
    }
}

fn boolean_embedding() -> Vec<Vec<i64>> {
    vec![vec![0], vec![1]]
}

fn unit_embedding(d: usize) -> Vec<Vec<i64>> {
    (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect()
}

/// `g` for the family's Basic LP, if it has one.
pub fn lp_embedding(fam: &Family) -> Option<Vec<Vec<i64>>> {
    match fam {
        Family::Periodic(_) => None,
        Family::Simplex(f) => Some(unit_embedding(f.partition().dim())),
        _ => Some(boolean_embedding()),
    }
}

/// The family's Basic LP over `inst`, in facet form.
pub fn basic_lp(tmpl: &PromiseTemplate, inst: &Instance, fam: &Family) -> Result<Option<BasicLp>, PipelineError> {
    fam.check_template(tmpl)?;
    lp_embedding(fam).map(|g| Ok(build_basic_lp_facets(tmpl, inst, &g, DEFAULT_FACET_BUDGET)?)).transpose()
}

/// An affine relaxation over `Z/M` or over `Z^b/J`.
#[derive(Clone, Debug, PartialEq)]
pub enum AffineSystem {
    /// `zero` fixes the ring even when there are no equations
    Modular { relaxation: AffineRelaxation<ModInt>, zero: ModInt },
    Lattice { relaxation: AffineRelaxation<LatticeQuotientElem>, zero: LatticeQuotientElem },
}

/// The family's affine relaxation over `inst`, if it has one.
pub fn affine_relaxation(tmpl: &PromiseTemplate, inst: &Instance, fam: &Family) -> Result<Option<AffineSystem>, PipelineError> {
    fam.check_template(tmpl)?;
    let modular = |modulus: u64, residue: u64| -> Result<AffineSystem, PipelineError> {
        let g = [ModInt::new(0, modulus)?, ModInt::new(i128::from(residue), modulus)?];
        let relaxation = build_affine_relaxation(tmpl, inst, &g, VarDomain::Full)?;
        Ok(AffineSystem::Modular { relaxation, zero: g[0] })
    };
    Ok(Some(match fam {
        Family::Threshold(_) => return Ok(None),
        Family::Periodic(f) => modular(f.modulus(), f.residue())?,
        Family::ThrPer(f) => modular(f.period(), f.residue())?,
        Family::RegPer(f) => {
            let j = quotient_ideal(f.moduli());
            let r: Vec<i64> = f.residue().iter().map(|&x| x as i64).collect();
            let g = [LatticeQuotientElem::from_i64(&vec![0; r.len()], j.clone()), LatticeQuotientElem::from_i64(&r, j)];
            let relaxation = build_affine_relaxation(tmpl, inst, &g, VarDomain::Full)?;
            AffineSystem::Lattice { relaxation, zero: g[0].zero_like() }
        }
        Family::Simplex(f) => {
            let d = f.partition().dim();
            let j = quotient_ideal(f.moduli());
            let g: Vec<LatticeQuotientElem> = (0..d).map(|i| scaled_unit(d, i, f.residue(), &j)).collect();
            let relaxation = build_affine_relaxation(tmpl, inst, &g, VarDomain::OnesSubring)?;
            AffineSystem::Lattice { relaxation, zero: g[0].zero_like() }
        }
    }))
}

fn lp_stage(
    tmpl: &PromiseTemplate,
    inst: &Instance,
    fam: &Family,
    rings: Vec<QuadRing>,
) -> Result<Result<LpStage, Rejection>, PipelineError> {
    let embedding = lp_embedding(fam).expect("family has a Basic LP");
    let lp = build_basic_lp_facets(tmpl, inst, &embedding, DEFAULT_FACET_BUDGET)?;
    let mut points = Vec::with_capacity(rings.len());
    for ring in &rings {
        match ring_feasible_point(&lp.system, ring) {
            Ok(p) => points.push(p.point),
            Err(reason) => return Ok(Err(Rejection::BasicLp { q: ring.q(), reason })),
        }
    }
    Ok(Ok(LpStage { lp, embedding, rings, points }))
}

/// Solves the affine relaxation; `None` when it has no solution.
fn affine_stage(system: AffineSystem) -> Result<Option<AffineStage>, PipelineError> {
    Ok(match system {
        AffineSystem::Modular { relaxation, zero } => {
            let solution = if relaxation.system.rows() == 0 {
                Some(vec![zero; relaxation.system.cols()])
            } else {
                solve_mod_system(&relaxation.system)?
            };
            solution.map(|solution| AffineStage::Modular { relaxation, solution })
        }
        AffineSystem::Lattice { relaxation, zero } => {
            let solution = if relaxation.system.rows() == 0 || zero.lattice().index() == BigInt::from(1) {
                // nothing to solve, or the zero ring: 0 solves everything
                Some(vec![zero; relaxation.system.cols()])
            } else {
                solve_lattice_quotient_system(&relaxation.system)?
            };
            solution.map(|solution| AffineStage::Lattice { relaxation, solution })
        }
    })
}

fn scaled_unit(d: usize, i: usize, r: &[u64], j: &Arc<LatticeIdeal>) -> LatticeQuotientElem {
    let v: Vec<i64> = (0..d).map(|k| if k == i { r[k] as i64 } else { 0 }).collect();
    LatticeQuotientElem::from_i64(&v, j.clone())
}

/// Solves `inst` with the family's relaxations and rounding.
pub fn solve(tmpl: &PromiseTemplate, inst: &Instance, fam: &Family) -> Result<Outcome, PipelineError> {
    fam.check_template(tmpl)?;
    let n = inst.n();
    macro_rules! stage {
        ($e:expr) => {
            match $e? {
                Ok(s) => s,
                Err(r) => return Ok(Outcome::Rejected(r)),
            }
        };
    }
    let lp = match fam {
        Family::Periodic(_) => None,
        Family::RegPer(f) => Some(stage!(lp_stage(tmpl, inst, fam, f.partition().rings().to_vec()))),
        Family::Simplex(f) => Some(stage!(lp_stage(tmpl, inst, fam, vec![f.ring().clone()]))),
        Family::Threshold(f) => Some(stage!(lp_stage(tmpl, inst, fam, vec![f.ring().clone()]))),
        Family::ThrPer(f) => Some(stage!(lp_stage(tmpl, inst, fam, vec![f.ring().clone()]))),
    };
    let affine = match affine_relaxation(tmpl, inst, fam)? {
        Some(system) => match affine_stage(system)? {
            Some(a) => Some(a),
            None => return Ok(Outcome::Rejected(Rejection::Affine)),
        },
        None => None,
    };
    let lattice = |i: usize| match &affine {
        Some(AffineStage::Lattice { solution, .. }) => &solution[i],
        _ => unreachable!("lattice stage"),
    };
    let point = |i: usize| -> Vec<QuadElem> {
        let lp = lp.as_ref().expect("LP stage");
        lp.points.iter().map(|p| p[i].clone()).collect()
    };
    let values: Vec<Value> = (0..n)
        .map(|i| match fam {
            Family::Threshold(f) => f.round(&point(i)[0]),
            Family::Periodic(f) => Ok(f.labels()[affine.as_ref().expect("affine stage").value(i)[0] as usize]),
            Family::ThrPer(f) => f.round(&point(i)[0], affine.as_ref().expect("affine stage").value(i)[0]),
            Family::RegPer(f) => crate::round::round_regper(&point(i), lattice(i), f),
            Family::Simplex(f) => {
                let lp = lp.as_ref().expect("LP stage");
                crate::round::round_simplex(lp.lp.vector(&lp.points[0], i), lattice(i), f)
            }
        })
        .collect::<Result<_, _>>()?;
    Ok(Outcome::Solved(Box::new(Solution { assignment: Assignment { side: Side::Q, values }, lp, affine })))
}
