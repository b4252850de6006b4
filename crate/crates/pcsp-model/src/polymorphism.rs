//! Brute-force polymorphism checks for block-symmetric functions.
//!
//! A function `f: D^L → E` is block-symmetric for a partition of `[L]` into
//! blocks when its value depends only on how many times each `d ∈ D` occurs
//! inside each block. Applying `f` column-wise to `L` rows of `P_i` then
//! depends only on the multiset of rows assigned to each block, so it
//! suffices to enumerate one multiset per block instead of `|P_i|^L` tuples.

use crate::error::ModelError;
use crate::template::PromiseTemplate;
use crate::Value;

/// Bound on the number of multiset combinations a check may visit.
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;
const TABLE_LIMIT: usize = 1 << 24;

/// A block-symmetric `f: D^L → E`, tabulated on per-block count vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFunction {
    block_sizes: Vec<usize>,
    domain: usize,
    /// stride of block `ℓ` in the flattened table
    strides: Vec<usize>,
    table: Vec<Value>,
}

impl BlockFunction {
    /// Evaluates `f` on every combination of count vectors; `counts[ℓ][d]` is
    /// the number of positions in block `ℓ` holding `d`.
    pub fn tabulate(
        block_sizes: &[usize],
        domain: usize,
        f: impl Fn(&[Vec<u64>]) -> Value,
    ) -> Result<Self, ModelError> {
        if domain == 0 {
            return Err(ModelError::TableShape);
        }
        let mut strides = Vec::with_capacity(block_sizes.len());
        let mut total: usize = 1;
        for &s in block_sizes {
            strides.push(total);
            let radix = (s + 1).checked_pow(domain as u32 - 1).ok_or(ModelError::ArityTooLarge)?;
            total = total.checked_mul(radix).filter(|&t| t <= TABLE_LIMIT).ok_or(ModelError::ArityTooLarge)?;
        }
        let mut table = vec![Value::MAX; total];
        let mut counts: Vec<Vec<u64>> = block_sizes.iter().map(|_| vec![0; domain]).collect();
        fill(block_sizes, &strides, 0, 0, &mut counts, &mut table, &f);
        Ok(BlockFunction { block_sizes: block_sizes.to_vec(), domain, strides, table })
    }

    pub fn block_sizes(&self) -> &[usize] {
        &self.block_sizes
    }
    pub fn arity(&self) -> usize {
        self.block_sizes.iter().sum()
    }

    fn offset(&self, block: usize, counts: &[u64]) -> usize {
        let radix = self.block_sizes[block] + 1;
        counts[..self.domain - 1].iter().rev().fold(0, |acc, &c| acc * radix + c as usize)
    }

    /// `f` at the given per-block counts.
    pub fn eval(&self, counts: &[Vec<u64>]) -> Value {
        assert_eq!(counts.len(), self.block_sizes.len(), "block count mismatch");
        let idx: usize = counts.iter().enumerate().map(|(l, c)| self.strides[l] * self.offset(l, c)).sum();
        self.table[idx]
    }

    /// `f` at an explicit `L`-tuple, given the blocks as position lists.
    pub fn eval_tuple(&self, blocks: &[Vec<usize>], x: &[Value]) -> Value {
        let counts: Vec<Vec<u64>> = blocks
            .iter()
            .map(|b| {
                let mut c = vec![0; self.domain];
                for &p in b {
                    c[x[p]] += 1;
                }
                c
            })
            .collect();
        self.eval(&counts)
    }
}

fn fill(
    sizes: &[usize],
    strides: &[usize],
    block: usize,
    base: usize,
    counts: &mut Vec<Vec<u64>>,
    table: &mut [Value],
    f: &dyn Fn(&[Vec<u64>]) -> Value,
) {
    if block == sizes.len() {
        table[base] = f(counts);
        return;
    }
    let d = counts[block].len();
    // compositions of sizes[block] into d parts
    fn comps(
        i: usize,
        left: usize,
        radix: usize,
        acc: usize,
        cur: &mut Vec<u64>,
        out: &mut Vec<(Vec<u64>, usize)>,
    ) {
        let d = cur.len();
        if i == d - 1 {
            cur[i] = left as u64;
            out.push((cur.clone(), acc));
            return;
        }
        for c in 0..=left {
            cur[i] = c as u64;
            comps(i + 1, left - c, radix, acc + c * radix.pow(i as u32), cur, out);
        }
    }
    let mut all = Vec::new();
    comps(0, sizes[block], sizes[block] + 1, 0, &mut vec![0; d], &mut all);
    for (c, off) in all {
        counts[block] = c;
        fill(sizes, strides, block + 1, base + strides[block] * off, counts, table, f);
    }
}

/// Positions `0..L` dealt round-robin into `b` blocks: position `p` goes to
/// block `p mod b`.
pub fn round_robin_blocks(l: usize, b: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); b];
    for p in 0..l {
        out[p % b].push(p);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolymorphismVerdict {
    Verified,
    /// `rows` are `L` tuples of `P_constraint`, listed by position; applying
    /// `f` to each column gives `output ∉ Q_constraint`.
    Counterexample { constraint: usize, rows: Vec<Vec<Value>>, output: Vec<Value> },
}

impl PolymorphismVerdict {
    pub fn is_verified(&self) -> bool {
        matches!(self, PolymorphismVerdict::Verified)
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Checks `f(P_i) ⊆ Q_i` for every constraint by multiset enumeration. The
/// first counterexample in enumeration order is reported.
pub fn check_polymorphism(
    tmpl: &PromiseTemplate,
    f: &BlockFunction,
    blocks: &[Vec<usize>],
) -> Result<PolymorphismVerdict, ModelError> {
    let l = f.arity();
    let mut seen = vec![false; l];
    if blocks.len() != f.block_sizes.len() {
        return Err(ModelError::InvalidBlocks(l));
    }
    for (b, &s) in blocks.iter().zip(&f.block_sizes) {
        if b.len() != s {
            return Err(ModelError::InvalidBlocks(l));
        }
        for &p in b {
            if p >= l || std::mem::replace(&mut seen[p], true) {
                return Err(ModelError::InvalidBlocks(l));
            }
        }
    }
    if f.domain != tmpl.domain().d_size() || f.table.iter().any(|&v| v != Value::MAX && v >= tmpl.domain().e_size()) {
        return Err(ModelError::TableShape);
    }
    let work: u128 = tmpl
        .constraints()
        .iter()
        .map(|c| {
            let p = c.p.len() as u128;
            f.block_sizes
                .iter()
                .map(|&s| if p == 0 { 0 } else { binomial(p + s as u128 - 1, s as u128) })
                .fold(1u128, |a, x| a.saturating_mul(x))
        })
        .fold(0u128, |a, x| a.saturating_add(x));
    if work > BRUTE_FORCE_LIMIT {
        return Err(ModelError::ArityTooLarge);
    }

    for (i, c) in tmpl.constraints().iter().enumerate() {
        if c.p.is_empty() && l > 0 {
            continue;
        }
        let mut walk = Walk {
            f,
            rows: c.p.tuples(),
            q: &c.q,
            arity: c.p.arity(),
            col_index: vec![0; c.p.arity()],
            chosen: vec![Vec::new(); blocks.len()],
            output: vec![0; c.p.arity()],
        };
        if walk.run(0, 0, f.block_sizes.first().copied().unwrap_or(0)) {
            let mut rows = vec![Vec::new(); l];
            for (b, chosen) in blocks.iter().zip(&walk.chosen) {
                for (&p, &r) in b.iter().zip(chosen) {
                    rows[p] = c.p.tuples()[r].clone();
                }
            }
            return Ok(PolymorphismVerdict::Counterexample { constraint: i, rows, output: walk.output });
        }
    }
    Ok(PolymorphismVerdict::Verified)
}

struct Walk<'a> {
    f: &'a BlockFunction,
    rows: &'a [Vec<Value>],
    q: &'a crate::template::Relation,
    arity: usize,
    /// per column, table index accumulated so far
    col_index: Vec<usize>,
    chosen: Vec<Vec<usize>>,
    output: Vec<Value>,
}

impl Walk<'_> {
    /// Returns true when a counterexample has been found (state left in place).
    fn run(&mut self, block: usize, start: usize, remaining: usize) -> bool {
        let nblocks = self.f.block_sizes.len();
        if block == nblocks {
            for c in 0..self.arity {
                self.output[c] = self.f.table[self.col_index[c]];
            }
            return !self.q.contains(&self.output);
        }
        if remaining == 0 {
            let next = self.f.block_sizes.get(block + 1).copied().unwrap_or(0);
            return self.run(block + 1, 0, next);
        }
        let radix = self.f.block_sizes[block] + 1;
        let stride = self.f.strides[block];
        let top = self.f.domain - 1;
        for r in start..self.rows.len() {
            let row = &self.rows[r];
            for c in 0..self.arity {
                if row[c] < top {
                    self.col_index[c] += stride * radix.pow(row[c] as u32);
                }
            }
            self.chosen[block].push(r);
            if self.run(block, r, remaining - 1) {
                return true;
            }
            self.chosen[block].pop();
            for c in 0..self.arity {
                if row[c] < top {
                    self.col_index[c] -= stride * radix.pow(row[c] as u32);
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::{Constraint, PromiseDomain, Relation};

    fn two_sat() -> PromiseTemplate {
        let p1 = Relation::new("P1", 2, vec![vec![1, 1], vec![1, 0], vec![0, 1]]).unwrap();
        let p2 = Relation::new("P2", 2, vec![vec![1, 0], vec![0, 1]]).unwrap();
        PromiseTemplate::new(
            PromiseDomain::identity(2),
            vec![
                Constraint { name: "P1".into(), p: p1.clone(), q: p1 },
                Constraint { name: "P2".into(), p: p2.clone(), q: p2 },
            ],
        )
        .unwrap()
    }

    fn majority(l: usize) -> BlockFunction {
        BlockFunction::tabulate(&[l], 2, |c| usize::from(2 * c[0][1] > l as u64)).unwrap()
    }

    #[test]
    fn majority_on_two_sat() {
        let t = two_sat();
        assert!(check_polymorphism(&t, &majority(3), &round_robin_blocks(3, 1)).unwrap().is_verified());
    }

    #[test]
    fn corrupted_q_gives_witness() {
        // Q = {(0,1)} alone would violate φ(P) ⊆ Q under φ = id, so the
        // corrupted pair is built with φ ≡ 0 and Q = {(0,0), (0,1)}
        let p = Relation::from_predicate(2, 2, |t| t[0] != t[1]);
        let q = Relation::new("Q", 2, vec![vec![0, 0], vec![0, 1]]).unwrap();
        let t2 = PromiseTemplate::new(
            PromiseDomain::numeric(2, 2, vec![0, 0]).unwrap(),
            vec![Constraint { name: "NEQ".into(), p, q }],
        )
        .unwrap();
        let f = majority(3);
        match check_polymorphism(&t2, &f, &round_robin_blocks(3, 1)).unwrap() {
            PolymorphismVerdict::Counterexample { constraint, rows, output } => {
                assert_eq!(constraint, 0);
                assert_eq!(rows.len(), 3);
                let cols: Vec<Value> =
                    (0..2).map(|c| f.eval_tuple(&round_robin_blocks(3, 1), &[rows[0][c], rows[1][c], rows[2][c]])).collect();
                assert_eq!(cols, output);
                assert!(!t2.constraint(0).q.contains(&output));
            }
            PolymorphismVerdict::Verified => panic!("expected a counterexample"),
        }
    }

    #[test]
    fn table_lookup_matches_function() {
        let f = BlockFunction::tabulate(&[2, 3], 3, |c| (c[0][0] + 2 * c[1][2]) as usize % 4).unwrap();
        assert_eq!(f.eval(&[vec![2, 0, 0], vec![0, 0, 3]]), 0);
        assert_eq!(f.eval(&[vec![1, 1, 0], vec![1, 1, 1]]), 3);
        let blocks = round_robin_blocks(5, 2);
        assert_eq!(blocks, vec![vec![0, 2, 4], vec![1, 3]]);
    }

    #[test]
    fn guard_and_shape_errors() {
        let t = two_sat();
        assert_eq!(
            check_polymorphism(&t, &majority(3), &[vec![0, 1, 1]]),
            Err(ModelError::InvalidBlocks(3))
        );
        let all = Relation::from_predicate(6, 2, |_| true);
        let wide = PromiseTemplate::new(
            PromiseDomain::identity(2),
            vec![Constraint { name: "ALL".into(), p: all.clone(), q: all }],
        )
        .unwrap();
        // C(64 + 9, 10) multisets
        assert_eq!(check_polymorphism(&wide, &majority(10), &round_robin_blocks(10, 1)), Err(ModelError::ArityTooLarge));
    }
}
