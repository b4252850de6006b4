//! Open partitions of `[0,1]^b` given by polynomial cells.
//!
//! A cell is a conjunction of strict inequalities `p(x) < 0` / `p(x) > 0`
//! with rational coefficients. Ring points are evaluated exactly through
//! [`MultiQuad`], so coordinates from different quadratic rings can meet in
//! one polynomial. An optional corner table overrides the cells on
//! `{0,1}^b` (integer open partitions).

use std::cmp::Ordering;
use std::collections::BTreeMap;

use exact_rings::rational::serde_rational;
use exact_rings::{quad_floor, MultiQuad, QuadElem, QuadRing, Rational};
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::PipelineError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Rel {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = ">")]
    Gt,
}

/// `Σ c · Π xᵢ^{eᵢ}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    terms: Vec<(Rational, Vec<u32>)>,
}

impl Polynomial {
    pub fn new(dim: usize, terms: Vec<(Rational, Vec<u32>)>) -> Result<Self, PipelineError> {
        if let Some((_, e)) = terms.iter().find(|(_, e)| e.len() != dim) {
            return Err(PipelineError::ExponentLength { expected: dim, got: e.len() });
        }
        Ok(Polynomial { terms })
    }

    /// `Σ cᵢ xᵢ + c₀`.
    pub fn linear(coeffs: &[Rational], constant: Rational) -> Self {
        let dim = coeffs.len();
        let mut terms: Vec<(Rational, Vec<u32>)> = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let mut e = vec![0; dim];
                e[i] = 1;
                (c.clone(), e)
            })
            .collect();
        if !constant.is_zero() {
            terms.push((constant, vec![0; dim]));
        }
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[(Rational, Vec<u32>)] {
        &self.terms
    }

    pub fn eval(&self, x: &[MultiQuad]) -> MultiQuad {
        self.terms.iter().fold(MultiQuad::zero(), |acc, (c, e)| {
            let mono = e
                .iter()
                .zip(x)
                .filter(|(&k, _)| k > 0)
                .fold(MultiQuad::rational(c.clone()), |m, (&k, xi)| m.mul(&xi.pow(k)));
            acc.add(&mono)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Inequality {
    pub poly: Polynomial,
    pub rel: Rel,
}

impl Inequality {
    fn holds(&self, x: &[MultiQuad]) -> bool {
        let s = self.poly.eval(x).sign();
        match self.rel {
            Rel::Lt => s == Ordering::Less,
            Rel::Gt => s == Ordering::Greater,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cell {
    pub label: usize,
    pub ineqs: Vec<Inequality>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionSpec {
    rings: Vec<QuadRing>,
    cells: Vec<Cell>,
    /// indexed by the corner's bitmask, coordinate `i` ↔ bit `i`
    corners: Option<Vec<usize>>,
}

impl PartitionSpec {
    pub fn new(rings: Vec<QuadRing>, cells: Vec<Cell>, corners: Option<Vec<usize>>) -> Result<Self, PipelineError> {
        let dim = rings.len();
        for c in &cells {
            for i in &c.ineqs {
                if let Some((_, e)) = i.poly.terms.iter().find(|(_, e)| e.len() != dim) {
                    return Err(PipelineError::ExponentLength { expected: dim, got: e.len() });
                }
            }
        }
        if let Some(t) = &corners {
            if dim >= usize::BITS as usize || t.len() != 1 << dim {
                return Err(PipelineError::CornerKey(format!("{} entries", t.len())));
            }
        }
        Ok(PartitionSpec { rings, cells, corners })
    }

    pub fn dim(&self) -> usize {
        self.rings.len()
    }
    pub fn rings(&self) -> &[QuadRing] {
        &self.rings
    }
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }
    pub fn corners(&self) -> Option<&[usize]> {
        self.corners.as_deref()
    }

    /// Every label the partition can produce.
    pub fn labels(&self) -> Vec<usize> {
        let mut l: Vec<usize> =
            self.cells.iter().map(|c| c.label).chain(self.corners.iter().flatten().copied()).collect();
        l.sort_unstable();
        l.dedup();
        l
    }

    fn classify(&self, x: &[MultiQuad], corner: Option<usize>) -> Result<Option<usize>, PipelineError> {
        if let (Some(t), Some(mask)) = (&self.corners, corner) {
            return Ok(Some(t[mask]));
        }
        let mut hit = None;
        for c in &self.cells {
            if c.ineqs.iter().all(|i| i.holds(x)) {
                if hit.is_some() {
                    return Err(PipelineError::CellsOverlap);
                }
                hit = Some(c.label);
            }
        }
        Ok(hit)
    }

    fn check_dim(&self, got: usize) -> Result<(), PipelineError> {
        if got != self.dim() {
            return Err(PipelineError::PointDimension { expected: self.dim(), got });
        }
        Ok(())
    }

    /// `Part` at a ring point. Coordinates outside `[0,1]` are clamped to the
    /// nearer endpoint. `None` only if no cell contains the point.
    pub fn evaluate(&self, pt: &[QuadElem]) -> Result<Option<usize>, PipelineError> {
        self.check_dim(pt.len())?;
        let mut corner = Some(0usize);
        let x: Vec<MultiQuad> = pt
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let r = if v.cmp_rational(&Rational::zero()) != Ordering::Greater {
                    Some(false)
                } else if v.cmp_rational(&Rational::one()) != Ordering::Less {
                    Some(true)
                } else {
                    None
                };
                match r {
                    Some(bit) => {
                        corner = corner.map(|m| m | (usize::from(bit) << i));
                        MultiQuad::rational(if bit { Rational::one() } else { Rational::zero() })
                    }
                    None => {
                        corner = None;
                        MultiQuad::from_quad(v)
                    }
                }
            })
            .collect();
        self.classify(&x, corner)
    }

    /// `Part̄` at a rational point of `[0,1]^b`: the corner table on
    /// `{0,1}^b`, otherwise the unique cell containing the point, or `None`
    /// (⊥) when the point lies on a cell boundary.
    pub fn evaluate_rational(&self, pt: &[Rational]) -> Result<Option<usize>, PipelineError> {
        self.check_dim(pt.len())?;
        let mut corner = Some(0usize);
        for (i, v) in pt.iter().enumerate() {
            if v.is_one() {
                corner = corner.map(|m| m | (1 << i));
            } else if !v.is_zero() {
                corner = None;
            }
        }
        let x: Vec<MultiQuad> = pt.iter().map(|v| MultiQuad::rational(v.clone())).collect();
        self.classify(&x, corner)
    }

    /// Randomised sanity check: `samples` ring points of `[0,1]^b` must each
    /// fall in exactly one cell, and every corner must get a label.
    pub fn sample_check(&self, samples: usize, seed: u64) -> Result<(), PipelineError> {
        let b = self.dim();
        for mask in 0..(1usize << b.min(16)) {
            let pt: Vec<Rational> =
                (0..b).map(|i| if mask >> i & 1 == 1 { Rational::one() } else { Rational::zero() }).collect();
            if self.evaluate_rational(&pt)?.is_none() {
                return Err(PipelineError::Uncovered(format!("corner {mask:b}")));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            let pt: Vec<QuadElem> = self
                .rings
                .iter()
                .map(|r| {
                    // {b√q} for a random b is a dense, non-rational point of (0, 1)
                    let b: i64 = rng.gen_range(-1_000_000..=1_000_000);
                    let b = if b == 0 { 1 } else { b };
                    let s = r.elem(0, b);
                    r.elem(-quad_floor(&s), b)
                })
                .collect();
            if self.evaluate(&pt)?.is_none() {
                let shown: Vec<String> = pt.iter().map(|p| p.to_string()).collect();
                return Err(PipelineError::Uncovered(shown.join(", ")));
            }
        }
        Ok(())
    }
}

/// Partition JSON pieces.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermDoc(#[serde(with = "serde_rational")] pub Rational, pub Vec<u32>);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IneqDoc {
    pub poly: Vec<TermDoc>,
    pub rel: Rel,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CellDoc {
    pub label: usize,
    pub ineqs: Vec<IneqDoc>,
}

pub(crate) fn cells_from_doc(dim: usize, docs: &[CellDoc]) -> Result<Vec<Cell>, PipelineError> {
    docs.iter()
        .map(|c| {
            let ineqs = c
                .ineqs
                .iter()
                .map(|i| {
                    let terms = i.poly.iter().map(|t| (t.0.clone(), t.1.clone())).collect();
                    Ok(Inequality { poly: Polynomial::new(dim, terms)?, rel: i.rel })
                })
                .collect::<Result<_, PipelineError>>()?;
            Ok(Cell { label: c.label, ineqs })
        })
        .collect()
}

pub(crate) fn cells_to_doc(cells: &[Cell]) -> Vec<CellDoc> {
    cells
        .iter()
        .map(|c| CellDoc {
            label: c.label,
            ineqs: c
                .ineqs
                .iter()
                .map(|i| IneqDoc {
                    poly: i.poly.terms.iter().map(|(c, e)| TermDoc(c.clone(), e.clone())).collect(),
                    rel: i.rel,
                })
                .collect(),
        })
        .collect()
}

/// Corner keys are bit strings, coordinate 1 first: `"10"` is `(1, 0)`.
pub(crate) fn corners_from_doc(dim: usize, doc: &BTreeMap<String, usize>) -> Result<Option<Vec<usize>>, PipelineError> {
    if doc.is_empty() {
        return Ok(None);
    }
    if dim >= 16 {
        return Err(PipelineError::CornerKey("dimension too large for a corner table".into()));
    }
    let mut table = vec![None; 1 << dim];
    for (k, &v) in doc {
        if k.len() != dim || !k.bytes().all(|c| c == b'0' || c == b'1') {
            return Err(PipelineError::CornerKey(k.clone()));
        }
        let mask = k.bytes().enumerate().fold(0usize, |m, (i, c)| m | (usize::from(c == b'1') << i));
        table[mask] = Some(v);
    }
    table
        .into_iter()
        .enumerate()
        .map(|(m, v)| v.ok_or_else(|| PipelineError::CornerKey(format!("missing {}", corner_key(dim, m)))))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn corner_key(dim: usize, mask: usize) -> String {
    (0..dim).map(|i| if mask >> i & 1 == 1 { '1' } else { '0' }).collect()
}

pub(crate) fn corners_to_doc(dim: usize, corners: Option<&[usize]>) -> BTreeMap<String, usize> {
    corners.into_iter().flat_map(|t| t.iter().enumerate().map(move |(m, &v)| (corner_key(dim, m), v))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    fn lt(poly: Polynomial) -> Inequality {
        Inequality { poly, rel: Rel::Lt }
    }
    fn gt(poly: Polynomial) -> Inequality {
        Inequality { poly, rel: Rel::Gt }
    }

    fn malt() -> PartitionSpec {
        let d = Polynomial::linear(&[rat(1, 1), rat(-1, 1)], rat(0, 1));
        PartitionSpec::new(
            vec![QuadRing::new(2).unwrap(), QuadRing::new(3).unwrap()],
            vec![Cell { label: 0, ineqs: vec![lt(d.clone())] }, Cell { label: 1, ineqs: vec![gt(d)] }],
            Some(vec![0, 1, 0, 1]),
        )
        .unwrap()
    }

    #[test]
    fn malt_cells_across_rings() {
        let p = malt();
        let (r2, r3) = (&p.rings()[0], &p.rings()[1]);
        // √2 − 1 ≈ 0.414 against 2 − √3 ≈ 0.268: x > y
        assert_eq!(p.evaluate(&[r2.elem(-1, 1), r3.elem(2, -1)]), Ok(Some(1)));
        assert_eq!(p.evaluate(&[r2.elem(-1, 1), r3.elem(-1, 1)]), Ok(Some(0)));
        assert_eq!(p.evaluate(&[r2.one(), r3.one()]), Ok(Some(1)));
        assert_eq!(p.evaluate(&[r2.zero(), r3.zero()]), Ok(Some(0)));
        // clamped to the (1, 1) corner
        assert_eq!(p.evaluate(&[r2.int(2), r3.int(1)]), Ok(Some(1)));
        assert_eq!(p.evaluate_rational(&[rat(1, 3), rat(1, 3)]), Ok(None));
        assert_eq!(p.evaluate_rational(&[rat(1, 3), rat(1, 2)]), Ok(Some(0)));
        p.sample_check(2000, 1).unwrap();
    }

    #[test]
    fn circle_partition() {
        let r = QuadRing::new(2).unwrap();
        let half = rat(1, 2);
        let sq = |e: Vec<u32>| (rat(1, 1), e);
        // (x − ½)² + (y − ½)² − 1/13
        let disc = Polynomial::new(
            2,
            vec![sq(vec![2, 0]), (rat(-1, 1), vec![1, 0]), sq(vec![0, 2]), (rat(-1, 1), vec![0, 1]), (rat(1, 2) - rat(1, 13), vec![0, 0])],
        )
        .unwrap();
        let x = Polynomial::linear(&[rat(1, 1), rat(0, 1)], -half.clone());
        let y = Polynomial::linear(&[rat(0, 1), rat(1, 1)], -half);
        let quad = |label, sx: Rel, sy: Rel| Cell {
            label,
            ineqs: vec![
                Inequality { poly: x.clone(), rel: sx },
                Inequality { poly: y.clone(), rel: sy },
                gt(disc.clone()),
            ],
        };
        let p = PartitionSpec::new(
            vec![r.clone(), r.clone()],
            vec![
                quad(0, Rel::Lt, Rel::Lt),
                quad(1, Rel::Lt, Rel::Gt),
                quad(2, Rel::Gt, Rel::Lt),
                quad(3, Rel::Gt, Rel::Gt),
                Cell { label: 4, ineqs: vec![lt(disc)] },
            ],
            None,
        )
        .unwrap();
        // 2(√2 − 3/2)² = 2(17/4 − 3√2) ≈ 0.0147 < 1/13
        assert_eq!(p.evaluate(&[r.elem(-1, 1), r.elem(-1, 1)]), Ok(Some(4)));
        assert_eq!(p.evaluate(&[r.zero(), r.one()]), Ok(Some(1)));
        assert_eq!(p.evaluate(&[r.elem(2, -1), r.elem(-1, 1)]), Ok(Some(4)));
        p.sample_check(2000, 2).unwrap();
        assert_eq!(p.evaluate_rational(&[rat(1, 2), rat(1, 10)]), Ok(None));
    }

    #[test]
    fn overlap_is_reported() {
        let r = QuadRing::new(2).unwrap();
        let p = PartitionSpec::new(
            vec![r.clone()],
            vec![
                Cell { label: 0, ineqs: vec![lt(Polynomial::linear(&[rat(1, 1)], rat(-2, 3)))] },
                Cell { label: 1, ineqs: vec![gt(Polynomial::linear(&[rat(1, 1)], rat(-1, 3)))] },
            ],
            None,
        )
        .unwrap();
        assert_eq!(p.evaluate(&[r.elem(2, -1)]), Err(PipelineError::CellsOverlap));
        assert!(p.sample_check(5000, 3).is_err());
    }

    #[test]
    fn corner_docs_round_trip() {
        let doc: BTreeMap<String, usize> = [("00", 0), ("10", 1), ("01", 0), ("11", 1)].map(|(k, v)| (k.to_string(), v)).into();
        let t = corners_from_doc(2, &doc).unwrap().unwrap();
        assert_eq!(t, vec![0, 1, 0, 1]);
        assert_eq!(corners_to_doc(2, Some(&t)), doc);
        let mut short = doc.clone();
        short.remove("11");
        assert!(corners_from_doc(2, &short).is_err());
    }
}
