use serde::{Deserialize, Serialize};

use crate::error::ModelError;
use crate::template::{Label, PromiseTemplate};
use crate::Value;

/// `P_i(x_{v₁}, …)`; variables are 0-based here and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clause {
    pub constraint: usize,
    pub vars: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    n: usize,
    clauses: Vec<Clause>,
}

impl Instance {
    pub fn new(tmpl: &PromiseTemplate, n: usize, clauses: Vec<Clause>) -> Result<Self, ModelError> {
        for (j, c) in clauses.iter().enumerate() {
            if c.constraint >= tmpl.constraints().len() {
                return Err(ModelError::UnknownConstraint(format!("#{}", c.constraint)));
            }
            let arity = tmpl.constraint(c.constraint).p.arity();
            if c.vars.len() != arity {
                return Err(ModelError::ClauseArity { clause: j + 1, arity, got: c.vars.len() });
            }
            if let Some(&v) = c.vars.iter().find(|&&v| v >= n) {
                return Err(ModelError::VariableRange { var: v + 1, n });
            }
        }
        Ok(Instance { n, clauses })
    }

    pub fn empty(n: usize) -> Self {
        Instance { n, clauses: vec![] }
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn from_doc(doc: &InstanceDoc, tmpl: &PromiseTemplate) -> Result<Self, ModelError> {
        let clauses = doc
            .clauses
            .iter()
            .map(|c| {
                let vars = c
                    .vars
                    .iter()
                    .map(|&v| if v == 0 || v > doc.n { Err(ModelError::VariableRange { var: v, n: doc.n }) } else { Ok(v - 1) })
                    .collect::<Result<_, _>>()?;
                Ok(Clause { constraint: tmpl.constraint_index(&c.c)?, vars })
            })
            .collect::<Result<_, ModelError>>()?;
        Instance::new(tmpl, doc.n, clauses)
    }

    pub fn to_doc(&self, tmpl: &PromiseTemplate) -> InstanceDoc {
        InstanceDoc {
            n: self.n,
            clauses: self
                .clauses
                .iter()
                .map(|c| ClauseDoc {
                    c: tmpl.constraint(c.constraint).name.clone(),
                    vars: c.vars.iter().map(|v| v + 1).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClauseDoc {
    pub c: String,
    pub vars: Vec<usize>,
}

/// JSON form: `{n, clauses: [{c: name, vars: [1-based…]}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub n: usize,
    #[serde(default)]
    pub clauses: Vec<ClauseDoc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    P,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub side: Side,
    pub values: Vec<Value>,
}

impl Assignment {
    pub fn from_doc(doc: &AssignmentDoc, tmpl: &PromiseTemplate) -> Result<Self, ModelError> {
        let dom = tmpl.domain();
        let values = doc
            .values
            .iter()
            .map(|l| match doc.side {
                Side::P => dom.d_value(l),
                Side::Q => dom.e_value(l),
            })
            .collect::<Result<_, _>>()?;
        Ok(Assignment { side: doc.side, values })
    }

    pub fn to_doc(&self, tmpl: &PromiseTemplate) -> AssignmentDoc {
        let labels = match self.side {
            Side::P => tmpl.domain().d_labels(),
            Side::Q => tmpl.domain().e_labels(),
        };
        AssignmentDoc { side: self.side, values: self.values.iter().map(|&v| labels[v].clone()).collect() }
    }

    /// `φ` applied pointwise; identity on Q-side assignments.
    pub fn to_q_side(&self, tmpl: &PromiseTemplate) -> Assignment {
        match self.side {
            Side::Q => self.clone(),
            Side::P => Assignment { side: Side::Q, values: self.values.iter().map(|&v| tmpl.domain().phi()[v]).collect() },
        }
    }
}

/// JSON form: `{side: "P" | "Q", values: [labels…]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDoc {
    pub side: Side,
    pub values: Vec<Label>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Satisfied,
    /// 0-based index of the first clause whose tuple is outside its relation.
    Violated { clause: usize },
}

impl Verdict {
    pub fn is_satisfied(self) -> bool {
        self == Verdict::Satisfied
    }
}

pub fn verify_assignment(tmpl: &PromiseTemplate, inst: &Instance, asg: &Assignment) -> Result<Verdict, ModelError> {
    if asg.values.len() != inst.n() {
        return Err(ModelError::AssignmentLength { expected: inst.n(), got: asg.values.len() });
    }
    let (size, side) = match asg.side {
        Side::P => (tmpl.domain().d_size(), 'D'),
        Side::Q => (tmpl.domain().e_size(), 'E'),
    };
    if let Some(&v) = asg.values.iter().find(|&&v| v >= size) {
        return Err(ModelError::ValueRange { side, value: v });
    }
    let mut tuple = Vec::new();
    for (j, c) in inst.clauses().iter().enumerate() {
        tuple.clear();
        tuple.extend(c.vars.iter().map(|&v| asg.values[v]));
        let con = tmpl.constraint(c.constraint);
        let rel = if asg.side == Side::P { &con.p } else { &con.q };
        if !rel.contains(&tuple) {
            return Ok(Verdict::Violated { clause: j });
        }
    }
    Ok(Verdict::Satisfied)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::template::{Constraint, PromiseDomain, Relation};

    fn neq() -> PromiseTemplate {
        let r = Relation::from_predicate(2, 2, |t| t[0] != t[1]);
        PromiseTemplate::new(PromiseDomain::identity(2), vec![Constraint { name: "NEQ".into(), p: r.clone(), q: r }])
            .unwrap()
    }

    #[test]
    fn docs_round_trip_and_validate() {
        let t = neq();
        let doc: InstanceDoc = serde_json::from_str(r#"{"n":3,"clauses":[{"c":"NEQ","vars":[1,3]}]}"#).unwrap();
        let inst = Instance::from_doc(&doc, &t).unwrap();
        assert_eq!(inst.clauses()[0].vars, vec![0, 2]);
        assert_eq!(inst.to_doc(&t), doc);
        let bad: InstanceDoc = serde_json::from_str(r#"{"n":3,"clauses":[{"c":"NEQ","vars":[0,3]}]}"#).unwrap();
        assert_eq!(Instance::from_doc(&bad, &t), Err(ModelError::VariableRange { var: 0, n: 3 }));
        let short: InstanceDoc = serde_json::from_str(r#"{"n":3,"clauses":[{"c":"NEQ","vars":[1]}]}"#).unwrap();
        assert!(matches!(Instance::from_doc(&short, &t), Err(ModelError::ClauseArity { .. })));
        let empty: InstanceDoc = serde_json::from_str(r#"{"n":0}"#).unwrap();
        assert_eq!(Instance::from_doc(&empty, &t).unwrap().clauses().len(), 0);
    }

    #[test]
    fn verify_reports_first_violation() {
        let t = neq();
        let inst = Instance::new(
            &t,
            3,
            vec![Clause { constraint: 0, vars: vec![0, 1] }, Clause { constraint: 0, vars: vec![1, 2] }],
        )
        .unwrap();
        let good = Assignment { side: Side::Q, values: vec![0, 1, 0] };
        assert_eq!(verify_assignment(&t, &inst, &good), Ok(Verdict::Satisfied));
        let bad = Assignment { side: Side::P, values: vec![0, 1, 1] };
        assert_eq!(verify_assignment(&t, &inst, &bad), Ok(Verdict::Violated { clause: 1 }));
        let out = Assignment { side: Side::P, values: vec![0, 1, 2] };
        assert_eq!(verify_assignment(&t, &inst, &out), Err(ModelError::ValueRange { side: 'D', value: 2 }));
        assert!(verify_assignment(&t, &Instance::empty(0), &Assignment { side: Side::Q, values: vec![] })
            .unwrap()
            .is_satisfied());
    }

    #[test]
    fn assignment_docs() {
        let t = neq();
        let doc: AssignmentDoc = serde_json::from_str(r#"{"side":"Q","values":[1,0]}"#).unwrap();
        let a = Assignment::from_doc(&doc, &t).unwrap();
        assert_eq!(a.values, vec![1, 0]);
        assert_eq!(serde_json::to_string(&a.to_doc(&t)).unwrap(), r#"{"side":"Q","values":[1,0]}"#);
        let bad: AssignmentDoc = serde_json::from_str(r#"{"side":"Q","values":[2]}"#).unwrap();
        assert!(Assignment::from_doc(&bad, &t).is_err());
    }
}
