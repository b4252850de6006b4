//! Full-rank lattices `J ⊆ Z^b` and the finite quotients `Z^b/J`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::RingError;
use crate::hnf::column_hnf;
use crate::scalar::Scalar;
use crate::IntMatrix;

/// A full-rank sublattice of `Z^b`, generated by the columns of a `b×b`
/// matrix, with its column HNF cached.
///
/// The HNF of a full-rank square matrix is lower triangular with a positive
/// diagonal, which makes `Π H_ii` the index and the box `Π [0, H_ii)` a set
/// of coset representatives.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr", into = "LatticeRepr")]
pub struct LatticeIdeal {
    generators: IntMatrix,
    hnf: IntMatrix,
}

/// JSON form: row-major generator matrix of decimal strings.
#[derive(Serialize, Deserialize)]
struct LatticeRepr(Vec<Vec<String>>);

impl TryFrom<LatticeRepr> for LatticeIdeal {
    type Error = RingError;
    fn try_from(r: LatticeRepr) -> Result<Self, RingError> {
        let m = r
            .0
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.trim().parse::<BigInt>().map_err(|_| RingError::Parse(s.clone())))
                    .collect()
            })
            .collect::<Result<IntMatrix, _>>()?;
        LatticeIdeal::new(m)
    }
}

impl From<LatticeIdeal> for LatticeRepr {
    fn from(l: LatticeIdeal) -> Self {
        LatticeRepr(l.generators.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect())
    }
}

impl PartialEq for LatticeIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.hnf == other.hnf
    }
}
impl Eq for LatticeIdeal {}

impl LatticeIdeal {
    pub fn new(generators: IntMatrix) -> Result<Self, RingError> {
        let b = generators.len();
        if let Some(bad) = generators.iter().find(|r| r.len() != b) {
            return Err(RingError::Dimension { expected: b, got: bad.len() });
        }
        let res = column_hnf(&generators, b);
        if res.rank() < b {
            return Err(RingError::InfiniteQuotient);
        }
        Ok(LatticeIdeal { generators, hnf: res.h })
    }

    /// `m₁Z × ⋯ × m_bZ`.
    pub fn diagonal(moduli: &[u64]) -> Result<Self, RingError> {
        let b = moduli.len();
        Self::new(
            (0..b)
                .map(|i| (0..b).map(|j| if i == j { BigInt::from(moduli[i]) } else { BigInt::zero() }).collect())
                .collect(),
        )
    }

    /// `Z^b` itself: the quotient is the zero ring.
    pub fn whole(b: usize) -> Self {
        Self::diagonal(&vec![1; b]).expect("identity has full rank")
    }

    pub fn dim(&self) -> usize {
        self.hnf.len()
    }

    pub fn generators(&self) -> &IntMatrix {
        &self.generators
    }

    pub fn hnf(&self) -> &IntMatrix {
        &self.hnf
    }

    pub fn diag(&self) -> Vec<BigInt> {
        (0..self.dim()).map(|i| self.hnf[i][i].clone()).collect()
    }

    /// `|Z^b / J|`.
    pub fn index(&self) -> BigInt {
        self.diag().iter().product()
    }

    /// Lattices closed under coordinatewise products are exactly the
    /// products `m₁Z × ⋯ × m_bZ`, i.e. those with diagonal HNF. Only then is
    /// `Z^b/J` a ring rather than just a group.
    pub fn is_ideal(&self) -> bool {
        self.hnf.iter().enumerate().all(|(i, row)| row.iter().enumerate().all(|(j, x)| i == j || x.is_zero()))
    }

    /// Reduces `v` into the fundamental box `0 ≤ v_i < H_ii`.
    pub fn canonicalize(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        let mut w = v.to_vec();
        for i in 0..self.dim() {
            let f = w[i].div_floor(&self.hnf[i][i]);
            if !f.is_zero() {
                for (k, row) in self.hnf.iter().enumerate().skip(i) {
                    w[k] -= &f * &row[i];
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.canonicalize(v).iter().all(Zero::is_zero)
    }

    /// Every canonical representative, in lexicographic order.
    pub fn representatives(&self) -> Vec<Vec<BigInt>> {
        let d: Vec<u64> = self.diag().iter().map(|x| x.to_u64().expect("small quotient")).collect();
        let mut out = vec![vec![]];
        for &m in &d {
            out = out
                .into_iter()
                .flat_map(|p: Vec<BigInt>| {
                    (0..m).map(move |x| {
                        let mut q = p.clone();
                        q.push(BigInt::from(x));
                        q
                    })
                })
                .collect();
        }
        out
    }

    /// Additive order of `(1, …, 1)` in `Z^b/J`.
    pub fn order_of_ones(&self) -> BigInt {
        if self.is_ideal() {
            return self.diag().iter().fold(BigInt::one(), |acc, m| acc.lcm(m));
        }
        let ones = vec![BigInt::one(); self.dim()];
        let mut k = BigInt::one();
        loop {
            let v: Vec<BigInt> = ones.iter().map(|x| x * &k).collect();
            if self.contains(&v) {
                return k;
            }
            k += 1;
        }
    }
}

impl fmt::Display for LatticeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lattice(hnf={:?})", self.hnf.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
    }
}

/// `J₁ ∩ ⋯ ∩ J_s`. Pairwise: `v = G₁x = G₂y` iff `(x, y)` is in the kernel
/// of `[G₁ | −G₂]`, so `G₁` applied to the top half of a kernel basis
/// generates the intersection.
pub fn intersect_ideals(ideals: &[LatticeIdeal]) -> Result<LatticeIdeal, RingError> {
    let (first, rest) = ideals.split_first().ok_or(RingError::Dimension { expected: 1, got: 0 })?;
    let mut acc = first.clone();
    for j in rest {
        if j.dim() != acc.dim() {
            return Err(RingError::Dimension { expected: acc.dim(), got: j.dim() });
        }
        acc = intersect_pair(&acc, j)?;
    }
    Ok(acc)
}

fn intersect_pair(j1: &LatticeIdeal, j2: &LatticeIdeal) -> Result<LatticeIdeal, RingError> {
    let b = j1.dim();
    let (g1, g2) = (&j1.hnf, &j2.hnf);
    let m: IntMatrix = (0..b).map(|i| g1[i].iter().cloned().chain(g2[i].iter().map(|x| -x)).collect()).collect();
    let kernel = column_hnf(&m, 2 * b).kernel();
    let gens: IntMatrix =
        (0..b).map(|i| kernel.iter().map(|k| (0..b).map(|t| &g1[i][t] * &k[t]).sum()).collect()).collect();
    LatticeIdeal::new(gens)
}

/// A coset of `Z^b/J`, stored as its canonical representative.
#[derive(Clone, Debug)]
pub struct LatticeQuotientElem {
    vector: Vec<BigInt>,
    lattice: Arc<LatticeIdeal>,
}

impl LatticeQuotientElem {
    pub fn new(v: &[BigInt], lattice: Arc<LatticeIdeal>) -> Self {
        LatticeQuotientElem { vector: lattice.canonicalize(v), lattice }
    }

    pub fn from_i64(v: &[i64], lattice: Arc<LatticeIdeal>) -> Self {
        Self::new(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>(), lattice)
    }

    pub fn vector(&self) -> &[BigInt] {
        &self.vector
    }

    pub fn lattice(&self) -> &Arc<LatticeIdeal> {
        &self.lattice
    }

    /// Image under the projection `Z^b/J → Z^b/J'` for `J ⊆ J'`.
    pub fn reduce_to(&self, coarser: Arc<LatticeIdeal>) -> Self {
        Self::new(&self.vector, coarser)
    }

    /// Multiplies by an integer (well defined for any lattice).
    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(&self.vector.iter().map(|x| x * k).collect::<Vec<_>>(), self.lattice.clone())
    }

    fn check(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice,
            "ring mismatch"
        );
    }

    fn zip(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        self.check(other);
        let v: Vec<BigInt> = self.vector.iter().zip(&other.vector).map(|(x, y)| f(x, y)).collect();
        Self::new(&v, self.lattice.clone())
    }
}

/// `canonicalize(v)` agrees exactly when the cosets agree.
impl PartialEq for LatticeQuotientElem {
    fn eq(&self, other: &Self) -> bool {
        self.vector == other.vector && (Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice)
    }
}
impl Eq for LatticeQuotientElem {}

impl std::hash::Hash for LatticeQuotientElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vector.hash(state);
    }
}

impl fmt::Display for LatticeQuotientElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.vector.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl Scalar for LatticeQuotientElem {
    fn zero_like(&self) -> Self {
        LatticeQuotientElem { vector: vec![BigInt::zero(); self.vector.len()], lattice: self.lattice.clone() }
    }
    fn one_like(&self) -> Self {
        Self::new(&vec![BigInt::one(); self.vector.len()], self.lattice.clone())
    }
    fn is_zero_elem(&self) -> bool {
        self.vector.iter().all(Zero::is_zero)
    }
    fn plus(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x + y)
    }
    fn minus(&self, o: &Self) -> Self {
        self.zip(o, |x, y| x - y)
    }
    /// Coordinatewise product; only meaningful when the lattice is an ideal.
    fn times(&self, o: &Self) -> Self {
        debug_assert!(self.lattice.is_ideal(), "product in a non-ideal quotient");
        self.zip(o, |x, y| x * y)
    }
    fn negated(&self) -> Self {
        Self::new(&self.vector.iter().map(|x| -x).collect::<Vec<_>>(), self.lattice.clone())
    }
    fn unit_inverse(&self) -> Option<Self> {
        if !self.lattice.is_ideal() {
            return None;
        }
        let d = self.lattice.diag();
        let mut inv = Vec::with_capacity(d.len());
        for (x, m) in self.vector.iter().zip(&d) {
            let e = x.extended_gcd(m);
            if !e.gcd.abs().is_one() && !m.is_one() {
                return None;
            }
            inv.push(e.x);
        }
        Some(Self::new(&inv, self.lattice.clone()))
    }
    fn from_int_like(&self, n: i64) -> Self {
        Self::new(&vec![BigInt::from(n); self.vector.len()], self.lattice.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn lat(rows: &[&[i64]]) -> LatticeIdeal {
        LatticeIdeal::new(rows.iter().map(|r| v(r)).collect()).unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let d2 = LatticeIdeal::diagonal(&[2, 2]).unwrap();
        assert_eq!(d2.canonicalize(&v(&[3, 5])), v(&[1, 1]));
        assert_eq!(d2.canonicalize(&v(&[0, 0])), v(&[0, 0]));
        // columns (2,0) and (1,3)
        let j = lat(&[&[2, 1], &[0, 3]]);
        let c = j.canonicalize(&v(&[4, 6]));
        let diff: Vec<BigInt> = v(&[4, 6]).iter().zip(&c).map(|(a, b)| a - b).collect();
        // brute-force membership: diff = s·(2,0) + t·(1,3)
        let hit = (-10..=10).any(|s| (-10..=10).any(|t| diff == v(&[2 * s + t, 3 * t])));
        assert!(hit);
        assert_eq!(j.index(), BigInt::from(6));
        assert!(!j.is_ideal());
    }

    #[test]
    fn rank_deficient_is_rejected() {
        assert_eq!(LatticeIdeal::new(vec![v(&[1, 2]), v(&[2, 4])]).unwrap_err(), RingError::InfiniteQuotient);
        assert_eq!(
            LatticeIdeal::new(vec![v(&[1, 2])]).unwrap_err(),
            RingError::Dimension { expected: 1, got: 2 }
        );
    }

    #[test]
    fn intersection_examples() {
        let j2 = LatticeIdeal::diagonal(&[2]).unwrap();
        let j3 = LatticeIdeal::diagonal(&[3]).unwrap();
        assert_eq!(intersect_ideals(&[j2.clone(), j3]).unwrap(), LatticeIdeal::diagonal(&[6]).unwrap());
        assert_eq!(intersect_ideals(&[j2.clone(), j2.clone()]).unwrap(), j2);
        let a = LatticeIdeal::diagonal(&[2, 4]).unwrap();
        let b = LatticeIdeal::diagonal(&[4, 2]).unwrap();
        let c = intersect_ideals(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(c.index(), BigInt::from(16));
        for x in 0..8 {
            for y in 0..8 {
                let p = v(&[x, y]);
                assert_eq!(c.contains(&p), a.contains(&p) && b.contains(&p));
            }
        }
    }

    #[test]
    fn quotient_ring_ops() {
        let j = Arc::new(LatticeIdeal::diagonal(&[2, 3]).unwrap());
        let x = LatticeQuotientElem::from_i64(&[1, 2], j.clone());
        assert_eq!(x.plus(&x), LatticeQuotientElem::from_i64(&[0, 1], j.clone()));
        assert_eq!(x.times(&x), LatticeQuotientElem::from_i64(&[1, 1], j.clone()));
        assert_eq!(x.unit_inverse().unwrap().times(&x), x.one_like());
        assert_eq!(LatticeQuotientElem::from_i64(&[0, 1], j.clone()).unit_inverse(), None);
        assert_eq!(j.order_of_ones(), BigInt::from(6));
        assert_eq!(j.representatives().len(), 6);
    }

    #[test]
    fn json_is_row_major_strings() {
        let j = lat(&[&[2, 1], &[0, 3]]);
        let s = serde_json::to_string(&j).unwrap();
        assert_eq!(s, r#"[["2","1"],["0","3"]]"#);
        let back: LatticeIdeal = serde_json::from_str(&s).unwrap();
        assert_eq!(back, j);
        assert!(serde_json::from_str::<LatticeIdeal>(r#"[["1","2"],["2","4"]]"#).is_err());
    }
}
