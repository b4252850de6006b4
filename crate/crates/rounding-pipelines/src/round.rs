//! The rounding maps `h` of each family.

use exact_rings::{LatticeIdeal, LatticeQuotientElem, ModInt, QuadElem, Rational, Scalar};
use num_traits::{One, ToPrimitive};
use pcsp_model::Value;

use crate::error::PipelineError;
use crate::family::{PeriodicFamily, RegPerFamily, SimplexFamily, ThrPerFamily, ThresholdFamily};
use crate::partition::PartitionSpec;

/// `h(v) = η(0)` for `v ≤ 0`, `η(i)` on `(τ_{i−1}, τ_i)`, `η(k+1)` for
/// `v ≥ 1`.
pub fn round_threshold(v: &QuadElem, fam: &ThresholdFamily) -> Result<Value, PipelineError> {
    fam.round(v)
}

pub fn round_periodic(w: &ModInt, fam: &PeriodicFamily) -> Result<Value, PipelineError> {
    if w.modulus() != fam.modulus() {
        return Err(PipelineError::ModulusMismatch);
    }
    Ok(fam.labels()[w.value() as usize])
}

/// `η_i(w mod M_i)` for the interval `i` holding `v`; `w ∈ Z/lcm(M)`.
pub fn round_thrper(v: &QuadElem, w: &ModInt, fam: &ThrPerFamily) -> Result<Value, PipelineError> {
    if w.modulus() != fam.period() {
        return Err(PipelineError::ModulusMismatch);
    }
    fam.round(v, w.value())
}

/// `Part` at a ring point; `None` is ⊥.
pub fn evaluate_partition(pt: &[QuadElem], spec: &PartitionSpec) -> Result<Option<usize>, PipelineError> {
    spec.evaluate(pt)
}

fn check_quotient(w: &LatticeQuotientElem, moduli: &[u64]) -> Result<(), PipelineError> {
    let d = w.lattice().diag();
    let same = w.lattice().is_ideal()
        && d.len() == moduli.len()
        && d.iter().zip(moduli).all(|(x, &m)| x.to_u64() == Some(m));
    if same {
        Ok(())
    } else {
        Err(PipelineError::ModulusMismatch)
    }
}

/// `M_k(w mod J_k)` with `k = Part(pt)`.
pub fn round_regper(pt: &[QuadElem], w: &LatticeQuotientElem, fam: &RegPerFamily) -> Result<Value, PipelineError> {
    check_quotient(w, fam.moduli())?;
    let k = fam.partition().evaluate(pt)?.ok_or(PipelineError::RemovedBoundary)?;
    Ok(fam.maps()[&k].lookup(w.vector()))
}

/// As [`round_regper`] on the simplex; the coordinates must sum to 1.
pub fn round_simplex(pt: &[QuadElem], w: &LatticeQuotientElem, fam: &SimplexFamily) -> Result<Value, PipelineError> {
    check_quotient(w, fam.moduli())?;
    let Some(first) = pt.first() else { return Err(PipelineError::NotOnSimplex) };
    let sum = pt[1..].iter().fold(first.clone(), |a, x| a.plus(x));
    if sum.cmp_rational(&Rational::one()).is_ne() {
        return Err(PipelineError::NotOnSimplex);
    }
    let k = fam.partition().evaluate(pt)?.ok_or(PipelineError::RemovedBoundary)?;
    Ok(fam.maps()[&k].lookup(w.vector()))
}

/// `Z^b/J` for a diagonal `J`.
pub fn quotient_ideal(moduli: &[u64]) -> std::sync::Arc<LatticeIdeal> {
    std::sync::Arc::new(LatticeIdeal::diagonal(moduli).expect("positive moduli"))
}
