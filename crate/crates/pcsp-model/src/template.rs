use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::Value;

/// External name of a domain element: a JSON integer or string.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Label {
    Int(i64),
    Text(String),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(i) => write!(f, "{i}"),
            Label::Text(s) => f.write_str(s),
        }
    }
}

impl From<i64> for Label {
    fn from(i: i64) -> Self {
        Label::Int(i)
    }
}

fn index_labels(labels: &[Label], domain: char) -> Result<HashMap<Label, Value>, ModelError> {
    let mut idx = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if idx.insert(l.clone(), i).is_some() {
            return Err(ModelError::DuplicateLabel { domain, label: l.to_string() });
        }
    }
    Ok(idx)
}

/// `(D, E, φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromiseDomain {
    d: Vec<Label>,
    e: Vec<Label>,
    phi: Vec<Value>,
    d_index: HashMap<Label, Value>,
    e_index: HashMap<Label, Value>,
}

impl PromiseDomain {
    pub fn new(d: Vec<Label>, e: Vec<Label>, phi: Vec<Value>) -> Result<Self, ModelError> {
        if phi.len() != d.len() {
            return Err(ModelError::PhiLength { expected: d.len(), got: phi.len() });
        }
        if let Some(&v) = phi.iter().find(|&&v| v >= e.len()) {
            return Err(ModelError::ValueRange { side: 'E', value: v });
        }
        let d_index = index_labels(&d, 'D')?;
        let e_index = index_labels(&e, 'E')?;
        Ok(PromiseDomain { d, e, phi, d_index, e_index })
    }

    /// `D = {0, …, d−1}`, `E = {0, …, e−1}` with integer labels.
    pub fn numeric(d: usize, e: usize, phi: Vec<Value>) -> Result<Self, ModelError> {
        let labels = |k: usize| (0..k as i64).map(Label::Int).collect();
        Self::new(labels(d), labels(e), phi)
    }

    /// `D = E = {0, …, d−1}`, `φ = id`.
    pub fn identity(d: usize) -> Self {
        Self::numeric(d, d, (0..d).collect()).expect("identity domain")
    }

    pub fn d_labels(&self) -> &[Label] {
        &self.d
    }
    pub fn e_labels(&self) -> &[Label] {
        &self.e
    }
    pub fn d_size(&self) -> usize {
        self.d.len()
    }
    pub fn e_size(&self) -> usize {
        self.e.len()
    }
    pub fn phi(&self) -> &[Value] {
        &self.phi
    }

    pub fn d_value(&self, l: &Label) -> Result<Value, ModelError> {
        self.d_index.get(l).copied().ok_or_else(|| ModelError::UnknownLabel { domain: 'D', label: l.to_string() })
    }
    pub fn e_value(&self, l: &Label) -> Result<Value, ModelError> {
        self.e_index.get(l).copied().ok_or_else(|| ModelError::UnknownLabel { domain: 'E', label: l.to_string() })
    }
}

/// A set of tuples of one arity, kept in insertion order.
#[derive(Clone, Debug)]
pub struct Relation {
    arity: usize,
    tuples: Vec<Vec<Value>>,
    members: HashSet<Vec<Value>>,
}

impl PartialEq for Relation {
    fn eq(&self, other: &Self) -> bool {
        self.arity == other.arity && self.members == other.members
    }
}
impl Eq for Relation {}

impl Relation {
    pub fn new(name: &str, arity: usize, tuples: Vec<Vec<Value>>) -> Result<Self, ModelError> {
        if arity == 0 {
            return Err(ModelError::ZeroArity);
        }
        let mut members = HashSet::with_capacity(tuples.len());
        for t in &tuples {
            if t.len() != arity {
                return Err(ModelError::TupleLength { relation: name.to_owned(), arity, got: t.len() });
            }
            if !members.insert(t.clone()) {
                return Err(ModelError::DuplicateTuple(name.to_owned()));
            }
        }
        Ok(Relation { arity, tuples, members })
    }

    /// All tuples over `{0, …, size−1}` accepted by `keep`, in lexicographic order.
    pub fn from_predicate(arity: usize, size: usize, keep: impl Fn(&[Value]) -> bool) -> Self {
        let mut tuples = Vec::new();
        let mut t = vec![0; arity];
        'outer: loop {
            if keep(&t) {
                tuples.push(t.clone());
            }
            for i in (0..arity).rev() {
                t[i] += 1;
                if t[i] < size {
                    continue 'outer;
                }
                t[i] = 0;
            }
            break;
        }
        Relation::new("predicate", arity, tuples).expect("distinct by construction")
    }

    pub fn arity(&self) -> usize {
        self.arity
    }
    pub fn tuples(&self) -> &[Vec<Value>] {
        &self.tuples
    }
    pub fn len(&self) -> usize {
        self.tuples.len()
    }
    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }
    pub fn contains(&self, t: &[Value]) -> bool {
        self.members.contains(t)
    }
}

/// One promise constraint `(P_i, Q_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub p: Relation,
    pub q: Relation,
}

/// `(Γ_P, Γ_Q)` over a promise domain; `φ(P_i) ⊆ Q_i` holds for every `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromiseTemplate {
    domain: PromiseDomain,
    constraints: Vec<Constraint>,
    by_name: HashMap<String, usize>,
}

impl PromiseTemplate {
    pub fn new(domain: PromiseDomain, constraints: Vec<Constraint>) -> Result<Self, ModelError> {
        let mut by_name = HashMap::new();
        for (i, c) in constraints.iter().enumerate() {
            if by_name.insert(c.name.clone(), i).is_some() {
                return Err(ModelError::DuplicateConstraint(c.name.clone()));
            }
            if c.p.arity() != c.q.arity() {
                return Err(ModelError::TupleLength { relation: c.name.clone(), arity: c.p.arity(), got: c.q.arity() });
            }
            if let Some(&v) = c.p.tuples().iter().flatten().find(|&&v| v >= domain.d_size()) {
                return Err(ModelError::ValueRange { side: 'D', value: v });
            }
            if let Some(&v) = c.q.tuples().iter().flatten().find(|&&v| v >= domain.e_size()) {
                return Err(ModelError::ValueRange { side: 'E', value: v });
            }
            let phi = domain.phi();
            if c.p.tuples().iter().any(|t| !c.q.contains(&t.iter().map(|&x| phi[x]).collect::<Vec<_>>())) {
                return Err(ModelError::NotPromise(c.name.clone()));
            }
        }
        Ok(PromiseTemplate { domain, constraints, by_name })
    }

    pub fn domain(&self) -> &PromiseDomain {
        &self.domain
    }
    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }
    pub fn constraint(&self, i: usize) -> &Constraint {
        &self.constraints[i]
    }
    pub fn constraint_index(&self, name: &str) -> Result<usize, ModelError> {
        self.by_name.get(name).copied().ok_or_else(|| ModelError::UnknownConstraint(name.to_owned()))
    }
    pub fn max_arity(&self) -> usize {
        self.constraints.iter().map(|c| c.p.arity()).max().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DomainsDoc {
    #[serde(rename = "D")]
    pub d: Vec<Label>,
    #[serde(rename = "E")]
    pub e: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    pub name: String,
    pub arity: usize,
    #[serde(rename = "P")]
    pub p: Vec<Vec<Label>>,
    #[serde(rename = "Q")]
    pub q: Vec<Vec<Label>>,
}

/// JSON form: `{domains: {D, E}, phi, constraints: [{name, arity, P, Q}]}`,
/// with `phi` listing `φ(d)` for each `d` in `D` order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateDoc {
    pub domains: DomainsDoc,
    pub phi: Vec<Label>,
    pub constraints: Vec<ConstraintDoc>,
}

impl TryFrom<TemplateDoc> for PromiseTemplate {
    type Error = ModelError;
    fn try_from(doc: TemplateDoc) -> Result<Self, ModelError> {
        let e_index = index_labels(&doc.domains.e, 'E')?;
        let phi = doc
            .phi
            .iter()
            .map(|l| e_index.get(l).copied().ok_or_else(|| ModelError::UnknownLabel { domain: 'E', label: l.to_string() }))
            .collect::<Result<Vec<_>, _>>()?;
        let domain = PromiseDomain::new(doc.domains.d, doc.domains.e, phi)?;
        let constraints = doc
            .constraints
            .into_iter()
            .map(|c| {
                let conv = |rows: &[Vec<Label>], f: &dyn Fn(&Label) -> Result<Value, ModelError>| {
                    rows.iter().map(|r| r.iter().map(f).collect::<Result<Vec<_>, _>>()).collect::<Result<Vec<_>, _>>()
                };
                let p = Relation::new(&c.name, c.arity, conv(&c.p, &|l| domain.d_value(l))?)?;
                let q = Relation::new(&c.name, c.arity, conv(&c.q, &|l| domain.e_value(l))?)?;
                Ok(Constraint { name: c.name, p, q })
            })
            .collect::<Result<Vec<_>, ModelError>>()?;
        PromiseTemplate::new(domain, constraints)
    }
}

impl From<&PromiseTemplate> for TemplateDoc {
    fn from(t: &PromiseTemplate) -> Self {
        let d = t.domain.d_labels();
        let e = t.domain.e_labels();
        TemplateDoc {
            domains: DomainsDoc { d: d.to_vec(), e: e.to_vec() },
            phi: t.domain.phi().iter().map(|&v| e[v].clone()).collect(),
            constraints: t
                .constraints
                .iter()
                .map(|c| ConstraintDoc {
                    name: c.name.clone(),
                    arity: c.p.arity(),
                    p: c.p.tuples().iter().map(|r| r.iter().map(|&v| d[v].clone()).collect()).collect(),
                    q: c.q.tuples().iter().map(|r| r.iter().map(|&v| e[v].clone()).collect()).collect(),
                })
                .collect(),
        }
    }
}
