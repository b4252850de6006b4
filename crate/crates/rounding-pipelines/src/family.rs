//! The polymorphism families, their members `f_L`, and the family JSON.
//!
//! Boolean families (threshold, periodic, threshold-periodic, regional)
//! read the count of `1`s; the simplex family reads the whole count vector.
//! Counts are per block: `counts[ℓ][d]` is how often `d` occurs in block `ℓ`.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::BTreeMap;

use exact_rings::rational::serde_rational_vec;
use exact_rings::{QuadElem, QuadRing, Rational};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use pcsp_model::{round_robin_blocks, BlockFunction, PromiseTemplate, Value};
use serde::{Deserialize, Serialize};

use crate::arity::{lcm, Arities};
use crate::error::PipelineError;
use crate::partition::{cells_from_doc, cells_to_doc, corners_from_doc, corners_to_doc, CellDoc, PartitionSpec};

fn check_thresholds(ts: &[Rational]) -> Result<(), PipelineError> {
    let ok = ts.len() >= 2
        && ts[0].is_zero()
        && ts[ts.len() - 1] == Rational::from_integer(1.into())
        && ts.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(PipelineError::Thresholds);
    }
    // a rational lies in Z[√q] iff it is an integer
    if let Some(t) = ts[1..ts.len() - 1].iter().find(|t| t.is_integer()) {
        return Err(PipelineError::ThresholdInRing(t.to_string()));
    }
    Ok(())
}

/// Interval `i ∈ 1..=k` holding `0 < ham < l`, i.e. `lτ_{i−1} < ham ≤ lτ_i`.
/// A count landing exactly on an interior threshold goes to the lower
/// interval; valid arities never produce one.
fn count_interval(ts: &[Rational], ham: u64, l: u64) -> usize {
    let x = Rational::new(ham.into(), l.into());
    (1..ts.len()).find(|&i| x <= ts[i]).expect("ham < l")
}

/// Where a ring point falls relative to the thresholds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Region {
    Low,
    /// `τ_{i−1} < v < τ_i`, `1 ≤ i ≤ k`
    Interval(usize),
    High,
}

fn point_region(ts: &[Rational], v: &QuadElem) -> Region {
    if v.cmp_rational(&ts[0]) != Ordering::Greater {
        return Region::Low;
    }
    if v.cmp_rational(&ts[ts.len() - 1]) != Ordering::Less {
        return Region::High;
    }
    Region::Interval((1..ts.len()).find(|&i| v.cmp_rational(&ts[i]) == Ordering::Less).expect("v < 1"))
}

fn check_ring(ring: &QuadElem, fam: &QuadRing) -> Result<(), PipelineError> {
    if ring.q() != fam.q() {
        return Err(exact_rings::RingError::RingMismatch.into());
    }
    Ok(())
}

fn boolean_ham(counts: &[Vec<u64>]) -> (u64, u64) {
    let c = &counts[0];
    (c[1], c[0] + c[1])
}

/// `THR_{T,η,L}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdFamily {
    thresholds: Vec<Rational>,
    labels: Vec<Value>,
    ring: QuadRing,
    arities: Arities,
}

impl ThresholdFamily {
    /// `labels` is `η(0), …, η(k+1)` for thresholds `τ₀ … τ_k`.
    pub fn new(thresholds: Vec<Rational>, labels: Vec<Value>, ring: QuadRing, arities: Arities) -> Result<Self, PipelineError> {
        check_thresholds(&thresholds)?;
        if labels.len() != thresholds.len() + 1 {
            return Err(PipelineError::LabelCount { expected: thresholds.len() + 1, got: labels.len() });
        }
        Ok(ThresholdFamily { thresholds, labels, ring, arities })
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }
    pub fn labels(&self) -> &[Value] {
        &self.labels
    }
    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }

    fn eval(&self, ham: u64, l: u64) -> Value {
        if ham == 0 {
            self.labels[0]
        } else if ham == l {
            self.labels[self.labels.len() - 1]
        } else {
            self.labels[count_interval(&self.thresholds, ham, l)]
        }
    }

    pub fn round(&self, v: &QuadElem) -> Result<Value, PipelineError> {
        check_ring(v, &self.ring)?;
        Ok(match point_region(&self.thresholds, v) {
            Region::Low => self.labels[0],
            Region::Interval(i) => self.labels[i],
            Region::High => self.labels[self.labels.len() - 1],
        })
    }
}

/// `PER_{M,η,L}` with the residue `r ≡ L (mod M)` used by the solver.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicFamily {
    modulus: u64,
    labels: Vec<Value>,
    residue: u64,
    arities: Arities,
}

impl PeriodicFamily {
    pub fn new(modulus: u64, labels: Vec<Value>, residue: u64, arities: Arities) -> Result<Self, PipelineError> {
        if modulus == 0 {
            return Err(PipelineError::ZeroModulus);
        }
        if labels.len() as u64 != modulus {
            return Err(PipelineError::LabelCount { expected: modulus as usize, got: labels.len() });
        }
        let fam = PeriodicFamily { modulus, labels, residue: residue % modulus, arities };
        check_attained(&fam.arities, lcm(fam.arities.modulus, modulus), 1, |l| l % modulus == fam.residue, || {
            fam.residue.to_string()
        })?;
        Ok(fam)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn labels(&self) -> &[Value] {
        &self.labels
    }
    pub fn residue(&self) -> u64 {
        self.residue
    }

    fn eval(&self, ham: u64) -> Value {
        self.labels[(ham % self.modulus) as usize]
    }
}

/// Some valid `L` in `[start, start + period)` must satisfy `hit`.
fn check_attained(
    arities: &Arities,
    period: u64,
    start: u64,
    hit: impl Fn(u64) -> bool,
    shown: impl Fn() -> String,
) -> Result<(), PipelineError> {
    if arities.range(start, start + period - 1).any(hit) {
        Ok(())
    } else {
        Err(PipelineError::Residue { residue: shown() })
    }
}

/// `THR-PER_{T,M,H,L}`; the residue is taken modulo `lcm(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThrPerFamily {
    thresholds: Vec<Rational>,
    moduli: Vec<u64>,
    maps: Vec<Vec<Value>>,
    residue: u64,
    ring: QuadRing,
    arities: Arities,
}

impl ThrPerFamily {
    /// `maps[i−1]` is `η_i : Z/M_i → E` for the interval `(τ_{i−1}, τ_i)`.
    pub fn new(
        thresholds: Vec<Rational>,
        moduli: Vec<u64>,
        maps: Vec<Vec<Value>>,
        residue: u64,
        ring: QuadRing,
        arities: Arities,
    ) -> Result<Self, PipelineError> {
        check_thresholds(&thresholds)?;
        let k = thresholds.len() - 1;
        if moduli.len() != k || maps.len() != k {
            return Err(PipelineError::LabelCount { expected: k, got: moduli.len().min(maps.len()) });
        }
        for (m, eta) in moduli.iter().zip(&maps) {
            if *m == 0 {
                return Err(PipelineError::ZeroModulus);
            }
            if eta.len() as u64 != *m {
                return Err(PipelineError::LabelCount { expected: *m as usize, got: eta.len() });
            }
        }
        let period = moduli.iter().fold(1, |a, &m| lcm(a, m));
        let fam = ThrPerFamily { thresholds, moduli, maps, residue: residue % period, ring, arities };
        check_attained(&fam.arities, lcm(fam.arities.modulus, period), 1, |l| l % period == fam.residue, || {
            fam.residue.to_string()
        })?;
        Ok(fam)
    }

    pub fn thresholds(&self) -> &[Rational] {
        &self.thresholds
    }
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }
    pub fn maps(&self) -> &[Vec<Value>] {
        &self.maps
    }
    pub fn residue(&self) -> u64 {
        self.residue
    }
    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }
    /// `lcm(M₁, …, M_k)`, the modulus of the affine relaxation.
    pub fn period(&self) -> u64 {
        self.moduli.iter().fold(1, |a, &m| lcm(a, m))
    }

    fn eta(&self, i: usize, w: u64) -> Value {
        self.maps[i - 1][(w % self.moduli[i - 1]) as usize]
    }

    fn eval(&self, ham: u64, l: u64) -> Value {
        let k = self.moduli.len();
        if ham == 0 {
            self.eta(1, 0)
        } else if ham == l {
            self.eta(k, l)
        } else {
            self.eta(count_interval(&self.thresholds, ham, l), ham)
        }
    }

    /// `h(v, w)`; `w` is a residue modulo [`Self::period`].
    pub fn round(&self, v: &QuadElem, w: u64) -> Result<Value, PipelineError> {
        check_ring(v, &self.ring)?;
        let k = self.moduli.len();
        Ok(match point_region(&self.thresholds, v) {
            Region::Low => self.eta(1, w),
            Region::Interval(i) => self.eta(i, w),
            Region::High => self.eta(k, w),
        })
    }

    /// The same function as a one-block regional-periodic family: one cell
    /// per interval, labelled `i − 1`, with `M_{i−1} = η_i`.
    pub fn to_regional(&self) -> Result<RegPerFamily, PipelineError> {
        use crate::partition::{Cell, Inequality, Polynomial, Rel};
        let k = self.moduli.len();
        let one = Rational::from_integer(1.into());
        let cells = (1..=k)
            .map(|i| {
                let mut ineqs = vec![];
                if i > 1 {
                    ineqs.push(Inequality { poly: Polynomial::linear(&[one.clone()], -self.thresholds[i - 1].clone()), rel: Rel::Gt });
                }
                if i < k {
                    ineqs.push(Inequality { poly: Polynomial::linear(&[one.clone()], -self.thresholds[i].clone()), rel: Rel::Lt });
                }
                Cell { label: i - 1, ineqs }
            })
            .collect();
        let partition = PartitionSpec::new(vec![self.ring.clone()], cells, Some(vec![0, k - 1]))?;
        let maps = (0..k).map(|i| Ok((i, PeriodicMap::new(vec![self.moduli[i]], self.maps[i].clone())?))).collect::<Result<_, PipelineError>>()?;
        RegPerFamily::new(partition, maps, vec![self.residue], self.arities.clone())
    }
}

/// `M_k : Z^b/J_k → E` with `J_k = diag(moduli)`, tabulated with the first
/// coordinate varying fastest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicMap {
    moduli: Vec<u64>,
    values: Vec<Value>,
}

impl PeriodicMap {
    pub fn new(moduli: Vec<u64>, values: Vec<Value>) -> Result<Self, PipelineError> {
        if moduli.contains(&0) {
            return Err(PipelineError::ZeroModulus);
        }
        let order = moduli.iter().try_fold(1usize, |a, &m| a.checked_mul(m as usize));
        if order != Some(values.len()) {
            return Err(PipelineError::MapSize { label: usize::MAX, expected: order.unwrap_or(usize::MAX), got: values.len() });
        }
        Ok(PeriodicMap { moduli, values })
    }

    /// `J_k = Z^b`: a single value.
    pub fn constant(b: usize, value: Value) -> Self {
        PeriodicMap { moduli: vec![1; b], values: vec![value] }
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }
    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn lookup(&self, w: &[BigInt]) -> Value {
        let mut idx = 0usize;
        for (x, &m) in w.iter().zip(&self.moduli).rev() {
            let r = x.mod_floor(&BigInt::from(m)).to_usize().expect("reduced");
            idx = idx * m as usize + r;
        }
        self.values[idx]
    }

    fn lookup_counts(&self, w: &[u64]) -> Value {
        let mut idx = 0usize;
        for (x, &m) in w.iter().zip(&self.moduli).rev() {
            idx = idx * m as usize + (x % m) as usize;
        }
        self.values[idx]
    }
}

fn check_maps(partition: &PartitionSpec, maps: &BTreeMap<usize, PeriodicMap>, dim: usize) -> Result<Vec<u64>, PipelineError> {
    for l in partition.labels() {
        if !maps.contains_key(&l) {
            return Err(PipelineError::MissingMap(l));
        }
    }
    for (&label, m) in maps {
        if m.moduli.len() != dim {
            return Err(PipelineError::MapSize { label, expected: dim, got: m.moduli.len() });
        }
    }
    // ideals of Z^b are diagonal, so ⋂ J_k = diag(lcm_k d_{k,j})
    Ok((0..dim).map(|j| maps.values().fold(1, |a, m| lcm(a, m.moduli[j]))).collect())
}

/// Sizes of the round-robin blocks of `0..l`.
pub fn block_sizes(l: u64, b: usize) -> Vec<u64> {
    let b64 = b as u64;
    (0..b64).map(|j| if l > j { (l - j).div_ceil(b64) } else { 0 }).collect()
}

/// `REG-PER_{Part,B,M}` over round-robin blocks; plain `REG` is the case
/// `J_k = Z^b`, `M_k ≡ k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegPerFamily {
    partition: PartitionSpec,
    maps: BTreeMap<usize, PeriodicMap>,
    /// `J = ⋂ J_k` as a diagonal
    moduli: Vec<u64>,
    residue: Vec<u64>,
    arities: Arities,
}

impl RegPerFamily {
    pub fn new(
        partition: PartitionSpec,
        maps: BTreeMap<usize, PeriodicMap>,
        residue: Vec<u64>,
        arities: Arities,
    ) -> Result<Self, PipelineError> {
        let b = partition.dim();
        let moduli = check_maps(&partition, &maps, b)?;
        if residue.len() != b {
            return Err(PipelineError::PointDimension { expected: b, got: residue.len() });
        }
        let residue: Vec<u64> = residue.iter().zip(&moduli).map(|(r, m)| r % m).collect();
        let fam = RegPerFamily { partition, maps, moduli, residue, arities };
        let period = lcm(fam.arities.modulus, b as u64 * fam.moduli.iter().fold(1, |a, &m| lcm(a, m)));
        check_attained(&fam.arities, period, b as u64, |l| fam.residue_of(l) == fam.residue, || format!("{:?}", fam.residue))?;
        Ok(fam)
    }

    /// Plain regional family: the partition's labels are the outputs.
    pub fn regional(partition: PartitionSpec, arities: Arities) -> Result<Self, PipelineError> {
        let b = partition.dim();
        let maps = partition.labels().into_iter().map(|l| (l, PeriodicMap::constant(b, l))).collect();
        Self::new(partition, maps, vec![0; b], arities)
    }

    pub fn is_plain_regional(&self) -> bool {
        self.moduli.iter().all(|&m| m == 1) && self.maps.iter().all(|(&k, m)| m.values == [k])
    }

    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }
    pub fn maps(&self) -> &BTreeMap<usize, PeriodicMap> {
        &self.maps
    }
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }
    pub fn residue(&self) -> &[u64] {
        &self.residue
    }

    /// `(|B₁|, …, |B_b|) mod J` for round-robin blocks of `0..l`.
    pub fn residue_of(&self, l: u64) -> Vec<u64> {
        block_sizes(l, self.partition.dim()).iter().zip(&self.moduli).map(|(s, m)| s % m).collect()
    }

    fn eval(&self, counts: &[Vec<u64>]) -> Result<Value, PipelineError> {
        let l: u64 = counts.iter().flatten().sum();
        let hams: Vec<u64> = counts.iter().map(|c| c[1]).collect();
        let pt: Vec<Rational> = counts
            .iter()
            .map(|c| {
                let size = c[0] + c[1];
                if size == 0 {
                    None
                } else {
                    Some(Rational::new(c[1].into(), size.into()))
                }
            })
            .collect::<Option<_>>()
            .ok_or(PipelineError::PartitionUndefined(l as usize))?;
        let k = self.partition.evaluate_rational(&pt)?.ok_or(PipelineError::PartitionUndefined(l as usize))?;
        Ok(self.maps[&k].lookup_counts(&hams))
    }
}

/// `SIMPLEX_{Part,L,M}`: the partition lives on the simplex of count
/// frequencies, one coordinate per element of `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexFamily {
    ring: QuadRing,
    partition: PartitionSpec,
    maps: BTreeMap<usize, PeriodicMap>,
    moduli: Vec<u64>,
    residue: Vec<u64>,
    arities: Arities,
}

impl SimplexFamily {
    pub fn new(
        ring: QuadRing,
        partition: PartitionSpec,
        maps: BTreeMap<usize, PeriodicMap>,
        residue: Vec<u64>,
        arities: Arities,
    ) -> Result<Self, PipelineError> {
        let d = partition.dim();
        if partition.rings().iter().any(|r| r != &ring) {
            return Err(exact_rings::RingError::RingMismatch.into());
        }
        let moduli = check_maps(&partition, &maps, d)?;
        if residue.len() != d {
            return Err(PipelineError::PointDimension { expected: d, got: residue.len() });
        }
        let residue: Vec<u64> = residue.iter().zip(&moduli).map(|(r, m)| r % m).collect();
        let fam = SimplexFamily { ring, partition, maps, moduli, residue, arities };
        if fam.ones_multiplier(&fam.residue).is_none() {
            return Err(PipelineError::ResidueNotInOnes);
        }
        let period = lcm(fam.arities.modulus, fam.ones_order());
        check_attained(&fam.arities, period, 1, |l| fam.residue_of(l) == fam.residue, || format!("{:?}", fam.residue))?;
        Ok(fam)
    }

    pub fn ring(&self) -> &QuadRing {
        &self.ring
    }
    pub fn partition(&self) -> &PartitionSpec {
        &self.partition
    }
    pub fn maps(&self) -> &BTreeMap<usize, PeriodicMap> {
        &self.maps
    }
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }
    pub fn residue(&self) -> &[u64] {
        &self.residue
    }

    /// Additive order of `(1, …, 1)` in `Z^D/J`.
    pub fn ones_order(&self) -> u64 {
        self.moduli.iter().fold(1, |a, &m| lcm(a, m))
    }

    /// `c ∈ [0, ones_order)` with `c·(1, …, 1) ≡ v (mod J)`, if any.
    pub fn ones_multiplier(&self, v: &[u64]) -> Option<u64> {
        (0..self.ones_order()).find(|&c| v.iter().zip(&self.moduli).all(|(x, m)| c % m == x % m))
    }

    pub fn residue_of(&self, l: u64) -> Vec<u64> {
        self.moduli.iter().map(|m| l % m).collect()
    }

    fn eval(&self, counts: &[Vec<u64>]) -> Result<Value, PipelineError> {
        let c = &counts[0];
        let l: u64 = c.iter().sum();
        if l == 0 {
            return Err(PipelineError::PartitionUndefined(0));
        }
        let pt: Vec<Rational> = c.iter().map(|&x| Rational::new(x.into(), l.into())).collect();
        let k = self.partition.evaluate_rational(&pt)?.ok_or(PipelineError::PartitionUndefined(l as usize))?;
        Ok(self.maps[&k].lookup_counts(c))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Threshold(ThresholdFamily),
    Periodic(PeriodicFamily),
    ThrPer(ThrPerFamily),
    RegPer(RegPerFamily),
    Simplex(SimplexFamily),
}

impl Family {
    pub fn arities(&self) -> &Arities {
        match self {
            Family::Threshold(f) => &f.arities,
            Family::Periodic(f) => &f.arities,
            Family::ThrPer(f) => &f.arities,
            Family::RegPer(f) => &f.arities,
            Family::Simplex(f) => &f.arities,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Family::Threshold(_) => "thr",
            Family::Periodic(_) => "per",
            Family::ThrPer(_) => "thrper",
            Family::RegPer(f) if f.is_plain_regional() => "reg",
            Family::RegPer(_) => "regper",
            Family::Simplex(_) => "simplex",
        }
    }

    /// Size of `D` the family is defined over.
    pub fn domain_size(&self) -> usize {
        match self {
            Family::Simplex(f) => f.partition.dim(),
            _ => 2,
        }
    }

    fn output_labels(&self) -> Vec<Value> {
        match self {
            Family::Threshold(f) => f.labels.clone(),
            Family::Periodic(f) => f.labels.clone(),
            Family::ThrPer(f) => f.maps.concat(),
            Family::RegPer(f) => f.maps.values().flat_map(|m| m.values.clone()).collect(),
            Family::Simplex(f) => f.maps.values().flat_map(|m| m.values.clone()).collect(),
        }
    }

    /// The family's domain and outputs fit the template's `D` and `E`.
    pub fn check_template(&self, tmpl: &PromiseTemplate) -> Result<(), PipelineError> {
        let d = tmpl.domain().d_size();
        if d != self.domain_size() {
            return Err(PipelineError::DomainSize { expected: self.domain_size(), got: d });
        }
        let e = tmpl.domain().e_size();
        match self.output_labels().into_iter().find(|&v| v >= e) {
            Some(v) => Err(PipelineError::LabelRange(v)),
            None => Ok(()),
        }
    }

    /// Number of blocks of each member.
    pub fn block_count(&self) -> usize {
        match self {
            Family::RegPer(f) => f.partition.dim(),
            _ => 1,
        }
    }

    pub fn blocks(&self, l: usize) -> Vec<Vec<usize>> {
        round_robin_blocks(l, self.block_count())
    }

    /// `L` is a valid arity and reproduces the residue the solver uses.
    pub fn residue_matches(&self, l: u64) -> bool {
        self.arities().contains(l)
            && match self {
                Family::Threshold(_) => true,
                Family::Periodic(f) => l % f.modulus == f.residue,
                Family::ThrPer(f) => l % f.period() == f.residue,
                Family::RegPer(f) => f.residue_of(l) == f.residue,
                Family::Simplex(f) => f.residue_of(l) == f.residue,
            }
    }

    /// The least `L ≥ lo` passing [`Self::residue_matches`].
    pub fn arity_at_least(&self, lo: u64) -> u64 {
        (lo.max(1)..).find(|&l| self.residue_matches(l)).expect("the residue is attained by some valid arity")
    }

    /// `f_L` at the given per-block counts.
    pub fn eval_counts(&self, counts: &[Vec<u64>]) -> Result<Value, PipelineError> {
        match self {
            Family::Threshold(f) => {
                let (h, l) = boolean_ham(counts);
                Ok(f.eval(h, l))
            }
            Family::Periodic(f) => Ok(f.eval(boolean_ham(counts).0)),
            Family::ThrPer(f) => {
                let (h, l) = boolean_ham(counts);
                Ok(f.eval(h, l))
            }
            Family::RegPer(f) => f.eval(counts),
            Family::Simplex(f) => f.eval(counts),
        }
    }

    /// The member `f_L`, tabulated over its blocks.
    pub fn member(&self, l: usize) -> Result<BlockFunction, PipelineError> {
        if l == 0 {
            return Err(PipelineError::PartitionUndefined(0));
        }
        let sizes: Vec<usize> = self.blocks(l).iter().map(Vec::len).collect();
        let failure = RefCell::new(None);
        let f = BlockFunction::tabulate(&sizes, self.domain_size(), |c| match self.eval_counts(c) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0
            }
        })?;
        match failure.into_inner() {
            Some(e) => Err(e),
            None => Ok(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDoc {
    pub q: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapDoc {
    pub label: usize,
    pub moduli: Vec<u64>,
    pub values: Vec<Value>,
}

fn default_ring() -> RingDoc {
    RingDoc { q: 2 }
}

/// Family JSON. Outputs are indices into `E`; domain values are indices
/// into `D`. Absent rings default to `Z[√2]`, and to `Z[√p]` over the
/// primes 2, 3, 5, … for multi-block regional families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FamilyDoc {
    Thr {
        #[serde(default = "default_ring")]
        ring: RingDoc,
        #[serde(with = "serde_rational_vec")]
        thresholds: Vec<Rational>,
        labels: Vec<Value>,
        arities: Arities,
    },
    Per {
        modulus: u64,
        labels: Vec<Value>,
        residue: u64,
        arities: Arities,
    },
    Thrper {
        #[serde(default = "default_ring")]
        ring: RingDoc,
        #[serde(with = "serde_rational_vec")]
        thresholds: Vec<Rational>,
        moduli: Vec<u64>,
        maps: Vec<Vec<Value>>,
        residue: u64,
        arities: Arities,
    },
    Reg {
        #[serde(default)]
        rings: Vec<RingDoc>,
        dim: usize,
        cells: Vec<CellDoc>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        corners: BTreeMap<String, usize>,
        arities: Arities,
    },
    Regper {
        #[serde(default)]
        rings: Vec<RingDoc>,
        dim: usize,
        cells: Vec<CellDoc>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        corners: BTreeMap<String, usize>,
        maps: Vec<MapDoc>,
        residue: Vec<u64>,
        arities: Arities,
    },
    Simplex {
        #[serde(default = "default_ring")]
        ring: RingDoc,
        dim: usize,
        cells: Vec<CellDoc>,
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        corners: BTreeMap<String, usize>,
        maps: Vec<MapDoc>,
        residue: Vec<u64>,
        arities: Arities,
    },
}

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

fn regional_rings(docs: &[RingDoc], dim: usize) -> Result<Vec<QuadRing>, PipelineError> {
    if docs.is_empty() {
        if dim > PRIMES.len() {
            return Err(PipelineError::PointDimension { expected: PRIMES.len(), got: dim });
        }
        return PRIMES[..dim].iter().map(|&p| Ok(QuadRing::new(p)?)).collect();
    }
    if docs.len() != dim {
        return Err(PipelineError::PointDimension { expected: dim, got: docs.len() });
    }
    docs.iter().map(|r| Ok(QuadRing::new(r.q)?)).collect()
}

fn maps_from_doc(docs: &[MapDoc]) -> Result<BTreeMap<usize, PeriodicMap>, PipelineError> {
    docs.iter()
        .map(|m| {
            let map = PeriodicMap::new(m.moduli.clone(), m.values.clone()).map_err(|e| match e {
                PipelineError::MapSize { expected, got, .. } => PipelineError::MapSize { label: m.label, expected, got },
                e => e,
            })?;
            Ok((m.label, map))
        })
        .collect()
}

fn maps_to_doc(maps: &BTreeMap<usize, PeriodicMap>) -> Vec<MapDoc> {
    maps.iter().map(|(&label, m)| MapDoc { label, moduli: m.moduli.clone(), values: m.values.clone() }).collect()
}

impl TryFrom<&FamilyDoc> for Family {
    type Error = PipelineError;
    fn try_from(doc: &FamilyDoc) -> Result<Self, PipelineError> {
        Ok(match doc {
            FamilyDoc::Thr { ring, thresholds, labels, arities } => Family::Threshold(ThresholdFamily::new(
                thresholds.clone(),
                labels.clone(),
                QuadRing::new(ring.q)?,
                Arities::new(arities.modulus, arities.residues.clone())?,
            )?),
            FamilyDoc::Per { modulus, labels, residue, arities } => Family::Periodic(PeriodicFamily::new(
                *modulus,
                labels.clone(),
                *residue,
                Arities::new(arities.modulus, arities.residues.clone())?,
            )?),
            FamilyDoc::Thrper { ring, thresholds, moduli, maps, residue, arities } => Family::ThrPer(ThrPerFamily::new(
                thresholds.clone(),
                moduli.clone(),
                maps.clone(),
                *residue,
                QuadRing::new(ring.q)?,
                Arities::new(arities.modulus, arities.residues.clone())?,
            )?),
            FamilyDoc::Reg { rings, dim, cells, corners, arities } => {
                let p = PartitionSpec::new(regional_rings(rings, *dim)?, cells_from_doc(*dim, cells)?, corners_from_doc(*dim, corners)?)?;
                Family::RegPer(RegPerFamily::regional(p, Arities::new(arities.modulus, arities.residues.clone())?)?)
            }
            FamilyDoc::Regper { rings, dim, cells, corners, maps, residue, arities } => {
                let p = PartitionSpec::new(regional_rings(rings, *dim)?, cells_from_doc(*dim, cells)?, corners_from_doc(*dim, corners)?)?;
                Family::RegPer(RegPerFamily::new(
                    p,
                    maps_from_doc(maps)?,
                    residue.clone(),
                    Arities::new(arities.modulus, arities.residues.clone())?,
                )?)
            }
            FamilyDoc::Simplex { ring, dim, cells, corners, maps, residue, arities } => {
                let r = QuadRing::new(ring.q)?;
                let p = PartitionSpec::new(vec![r.clone(); *dim], cells_from_doc(*dim, cells)?, corners_from_doc(*dim, corners)?)?;
                Family::Simplex(SimplexFamily::new(
                    r,
                    p,
                    maps_from_doc(maps)?,
                    residue.clone(),
                    Arities::new(arities.modulus, arities.residues.clone())?,
                )?)
            }
        })
    }
}

impl From<&Family> for FamilyDoc {
    fn from(f: &Family) -> Self {
        let rings = |p: &PartitionSpec| p.rings().iter().map(|r| RingDoc { q: r.q() }).collect();
        match f {
            Family::Threshold(t) => FamilyDoc::Thr {
                ring: RingDoc { q: t.ring.q() },
                thresholds: t.thresholds.clone(),
                labels: t.labels.clone(),
                arities: t.arities.clone(),
            },
            Family::Periodic(p) => {
                FamilyDoc::Per { modulus: p.modulus, labels: p.labels.clone(), residue: p.residue, arities: p.arities.clone() }
            }
            Family::ThrPer(t) => FamilyDoc::Thrper {
                ring: RingDoc { q: t.ring.q() },
                thresholds: t.thresholds.clone(),
                moduli: t.moduli.clone(),
                maps: t.maps.clone(),
                residue: t.residue,
                arities: t.arities.clone(),
            },
            Family::RegPer(r) if r.is_plain_regional() => FamilyDoc::Reg {
                rings: rings(&r.partition),
                dim: r.partition.dim(),
                cells: cells_to_doc(r.partition.cells()),
                corners: corners_to_doc(r.partition.dim(), r.partition.corners()),
                arities: r.arities.clone(),
            },
            Family::RegPer(r) => FamilyDoc::Regper {
                rings: rings(&r.partition),
                dim: r.partition.dim(),
                cells: cells_to_doc(r.partition.cells()),
                corners: corners_to_doc(r.partition.dim(), r.partition.corners()),
                maps: maps_to_doc(&r.maps),
                residue: r.residue.clone(),
                arities: r.arities.clone(),
            },
            Family::Simplex(s) => FamilyDoc::Simplex {
                ring: RingDoc { q: s.ring.q() },
                dim: s.partition.dim(),
                cells: cells_to_doc(s.partition.cells()),
                corners: corners_to_doc(s.partition.dim(), s.partition.corners()),
                maps: maps_to_doc(&s.maps),
                residue: s.residue.clone(),
                arities: s.arities.clone(),
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    fn maj() -> ThresholdFamily {
        ThresholdFamily::new(vec![rat(0, 1), rat(1, 2), rat(1, 1)], vec![0, 0, 1, 1], QuadRing::new(2).unwrap(), Arities::odd())
            .unwrap()
    }

    #[test]
    fn threshold_validation() {
        let r = QuadRing::new(2).unwrap();
        assert_eq!(
            ThresholdFamily::new(vec![rat(0, 1), rat(1, 1)], vec![0, 1], r.clone(), Arities::all()),
            Err(PipelineError::LabelCount { expected: 3, got: 2 })
        );
        assert_eq!(
            ThresholdFamily::new(vec![rat(0, 1), rat(2, 3), rat(1, 2), rat(1, 1)], vec![0; 5], r.clone(), Arities::all()),
            Err(PipelineError::Thresholds)
        );
        assert!(ThresholdFamily::new(vec![rat(0, 1), rat(1, 1)], vec![0, 1, 1], r, Arities::all()).is_ok());
    }

    #[test]
    fn maj_member_counts() {
        let f = Family::Threshold(maj());
        let at = |h: u64, l: u64| f.eval_counts(&[vec![l - h, h]]).unwrap();
        assert_eq!((at(0, 5), at(2, 5), at(3, 5), at(5, 5)), (0, 0, 1, 1));
        // the tie at L = 4 goes to the lower interval
        assert_eq!(at(2, 4), 0);
    }

    #[test]
    fn periodic_residue_must_be_attained() {
        assert!(PeriodicFamily::new(7, vec![0, 1, 0, 0, 0, 0, 0], 1, Arities::new(7, vec![1]).unwrap()).is_ok());
        assert!(matches!(
            PeriodicFamily::new(7, vec![0; 7], 2, Arities::new(7, vec![1]).unwrap()),
            Err(PipelineError::Residue { .. })
        ));
        // odd L reach every residue mod 7
        assert!(PeriodicFamily::new(7, vec![0; 7], 2, Arities::odd()).is_ok());
    }

    #[test]
    fn block_sizes_match_round_robin() {
        for l in 0..12u64 {
            for b in 1..4 {
                let rr: Vec<u64> = round_robin_blocks(l as usize, b).iter().map(|v| v.len() as u64).collect();
                assert_eq!(block_sizes(l, b), rr);
            }
        }
    }

    #[test]
    fn periodic_map_lookup() {
        let m = PeriodicMap::new(vec![2, 3], (0..6).collect()).unwrap();
        assert_eq!(m.lookup(&[BigInt::from(1), BigInt::from(2)]), 5);
        assert_eq!(m.lookup(&[BigInt::from(-1), BigInt::from(4)]), 3);
        assert_eq!(m.lookup_counts(&[3, 4]), 3);
        assert!(PeriodicMap::new(vec![2, 2], vec![0; 3]).is_err());
    }
}
