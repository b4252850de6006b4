//! Exact two-phase simplex for `max cᵀx` subject to `Ax ≤ b`, `x` free.
//!
//! Dictionary form. Free variables are pivoted into the basis up front and
//! never leave it; their rows take no part in ratio tests. A free variable
//! whose column vanishes on every remaining row is pinned at zero. Phase I
//! uses a single auxiliary variable. Pricing is Dantzig's rule until a run
//! of degenerate pivots, then Bland's rule for the rest of the solve.

use std::cmp::Ordering;

use exact_rings::OrderedField;

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome<T> {
    Infeasible,
    Unbounded,
    /// `duals ≥ 0` with `Aᵀy = c` and `bᵀy = value`.
    Optimal { x: Vec<T>, value: T, duals: Vec<T> },
}

impl<T> LpOutcome<T> {
    pub fn optimal_point(&self) -> Option<&[T]> {
        match self {
            LpOutcome::Optimal { x, .. } => Some(x),
            _ => None,
        }
    }
}

const DEGENERATE_RUN: usize = 50;

struct Dictionary<T> {
    /// `x_basic[i] = rows[i][0] + Σ_k rows[i][k+1] · x_nonbasic[k]`
    rows: Vec<Vec<T>>,
    basic: Vec<usize>,
    nonbasic: Vec<usize>,
    /// rows whose basic variable is free
    free_row: Vec<bool>,
    /// nonbasic positions that may never enter
    pinned: Vec<bool>,
    obj: Vec<T>,
    bland: bool,
    degenerate: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Pivoted,
}

impl<T: OrderedField> Dictionary<T> {
    fn pivot(&mut self, r: usize, k: usize) {
        let a = self.rows[r][k + 1].clone();
        let inv = a.inverse().expect("pivot is nonzero").negated();
        // solve row r for the entering variable
        let mut new_r: Vec<T> = self.rows[r].iter().map(|v| v.times(&inv)).collect();
        new_r[k + 1] = inv.negated();
        let apply = |row: &mut Vec<T>| {
            let c = row[k + 1].clone();
            if c.is_zero_elem() {
                return;
            }
            for (l, (v, p)) in row.iter_mut().zip(&new_r).enumerate() {
                if l == k + 1 {
                    *v = c.times(p);
                } else if !p.is_zero_elem() {
                    *v = v.plus(&c.times(p));
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                apply(row);
            }
        }
        apply(&mut self.obj);
        self.rows[r] = new_r;
        std::mem::swap(&mut self.basic[r], &mut self.nonbasic[k]);
    }

    fn entering(&self) -> Option<usize> {
        let candidates = (0..self.nonbasic.len()).filter(|&k| !self.pinned[k] && self.obj[k + 1].is_positive_elem());
        if self.bland {
            candidates.min_by_key(|&k| self.nonbasic[k])
        } else {
            candidates.max_by(|&x, &y| self.obj[x + 1].compare(&self.obj[y + 1]).then(self.nonbasic[y].cmp(&self.nonbasic[x])))
        }
    }

    fn leaving(&self, k: usize) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (i, row) in self.rows.iter().enumerate() {
            if self.free_row[i] || !row[k + 1].is_negative_elem() {
                continue;
            }
            let ratio = row[0].divided(&row[k + 1].negated()).expect("nonzero");
            let better = match &best {
                None => true,
                Some((j, t)) => match ratio.compare(t) {
                    Ordering::Less => true,
                    Ordering::Equal => self.basic[i] < self.basic[*j],
                    Ordering::Greater => false,
                },
            };
            if better {
                best = Some((i, ratio));
            }
        }
        best.map(|(i, _)| i)
    }

    fn step(&mut self) -> Step {
        let Some(k) = self.entering() else { return Step::Optimal };
        let Some(r) = self.leaving(k) else { return Step::Unbounded };
        if self.rows[r][0].is_zero_elem() {
            self.degenerate += 1;
            if self.degenerate > DEGENERATE_RUN {
                self.bland = true;
            }
        } else {
            self.degenerate = 0;
        }
        self.pivot(r, k);
        Step::Pivoted
    }

    fn run(&mut self) -> Step {
        loop {
            match self.step() {
                Step::Pivoted => continue,
                s => return s,
            }
        }
    }
}

/// Maximises `cᵀx` over `{x : Ax ≤ b}`.
pub fn maximize<T: OrderedField>(a: &[Vec<T>], b: &[T], c: &[T], proto: &T) -> LpOutcome<T> {
    let m = a.len();
    let n = c.len();
    assert_eq!(b.len(), m, "rhs length");
    let zero = proto.zero_like();
    let one = proto.one_like();
    // slack_i = b_i − a_i·x ; variables: x_j → j, slack_i → n + i, aux → n + m
    let aux = n + m;
    let rows: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            assert_eq!(row.len(), n, "row length");
            let mut d = Vec::with_capacity(n + 2);
            d.push(bi.clone());
            d.extend(row.iter().map(|v| v.negated()));
            d.push(zero.clone());
            d
        })
        .collect();
    let mut nonbasic: Vec<usize> = (0..n).collect();
    nonbasic.push(aux);
    let mut dict = Dictionary {
        rows,
        basic: (n..n + m).collect(),
        nonbasic,
        free_row: vec![false; m],
        pinned: vec![false; n + 1],
        obj: vec![zero.clone(); n + 2],
        bland: false,
        degenerate: 0,
    };

    // free variables into the basis
    for k in 0..n {
        let pick = (0..m)
            .filter(|&i| !dict.free_row[i] && !dict.rows[i][k + 1].is_zero_elem())
            .min_by_key(|&i| dict.basic[i]);
        match pick {
            Some(r) => {
                dict.pivot(r, k);
                dict.free_row[r] = true;
            }
            None => dict.pinned[k] = true,
        }
    }
    // slacks now sit at the positions the free variables vacated
    for k in 0..n {
        if dict.nonbasic[k] >= n {
            dict.pinned[k] = false;
        }
    }
    let aux_pos = n;

    // phase I
    let worst = (0..m)
        .filter(|&i| !dict.free_row[i] && dict.rows[i][0].is_negative_elem())
        .min_by(|&x, &y| dict.rows[x][0].compare(&dict.rows[y][0]));
    if let Some(r) = worst {
        for (i, row) in dict.rows.iter_mut().enumerate() {
            if !dict.free_row[i] {
                row[aux_pos + 1] = one.clone();
            }
        }
        dict.obj[aux_pos + 1] = one.negated();
        dict.pivot(r, aux_pos);
        match dict.run() {
            Step::Optimal => {}
            _ => unreachable!("phase I is bounded"),
        }
        if dict.obj[0].is_negative_elem() {
            return LpOutcome::Infeasible;
        }
        if let Some(r) = dict.basic.iter().position(|&v| v == aux) {
            let k = (0..dict.nonbasic.len())
                .find(|&k| !dict.pinned[k] && !dict.rows[r][k + 1].is_zero_elem());
            match k {
                Some(k) => dict.pivot(r, k),
                None => {
                    dict.rows.remove(r);
                    dict.basic.remove(r);
                    dict.free_row.remove(r);
                }
            }
        }
    }
    // drop the auxiliary column
    let k_aux = dict.nonbasic.iter().position(|&v| v == aux).expect("aux is nonbasic");
    for row in &mut dict.rows {
        row.remove(k_aux + 1);
    }
    dict.nonbasic.remove(k_aux);
    dict.pinned.remove(k_aux);

    // phase II objective in terms of the nonbasic variables
    let width = dict.nonbasic.len() + 1;
    let mut obj = vec![zero.clone(); width];
    for (k, &v) in dict.nonbasic.iter().enumerate() {
        if v < n {
            obj[k + 1] = obj[k + 1].plus(&c[v]);
        }
    }
    for (i, &v) in dict.basic.iter().enumerate() {
        if v < n && !c[v].is_zero_elem() {
            for (o, d) in obj.iter_mut().zip(&dict.rows[i]) {
                *o = o.plus(&c[v].times(d));
            }
        }
    }
    dict.obj = obj;
    dict.bland = false;
    dict.degenerate = 0;
    if (0..dict.nonbasic.len()).any(|k| dict.pinned[k] && !dict.obj[k + 1].is_zero_elem()) {
        return LpOutcome::Unbounded;
    }
    if let Step::Unbounded = dict.run() {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![zero.clone(); n];
    for (i, &v) in dict.basic.iter().enumerate() {
        if v < n {
            x[v] = dict.rows[i][0].clone();
        }
    }
    let mut duals = vec![zero; m];
    for (k, &v) in dict.nonbasic.iter().enumerate() {
        if (n..n + m).contains(&v) {
            duals[v - n] = dict.obj[k + 1].negated();
        }
    }
    LpOutcome::Optimal { x, value: dict.obj[0].clone(), duals }
}
