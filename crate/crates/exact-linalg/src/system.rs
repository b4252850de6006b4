use exact_rings::rational::{serde_rational_matrix, serde_rational_vec};
use exact_rings::{Rational, Scalar};
use serde::{Deserialize, Serialize};

use crate::error::LinalgError;

/// Which ring a solution coordinate must lie in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VarDomain {
    /// The whole coefficient ring.
    #[default]
    Full,
    /// The subring generated by the multiplicative identity
    /// (`{k·(1, …, 1)}` inside `Z^b/J`).
    OnesSubring,
}

/// `M x = b` over a ring, with a per-variable domain tag.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSystem<T> {
    matrix: Vec<Vec<T>>,
    rhs: Vec<T>,
    cols: usize,
    domains: Vec<VarDomain>,
}

impl<T: Scalar> LinearSystem<T> {
    pub fn new(matrix: Vec<Vec<T>>, rhs: Vec<T>, cols: usize) -> Result<Self, LinalgError> {
        if matrix.len() != rhs.len() {
            return Err(LinalgError::Dimension { expected: matrix.len(), got: rhs.len() });
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::Dimension { expected: cols, got: r.len() });
        }
        Ok(LinearSystem { matrix, rhs, cols, domains: vec![VarDomain::Full; cols] })
    }

    pub fn with_domains(mut self, domains: Vec<VarDomain>) -> Result<Self, LinalgError> {
        if domains.len() != self.cols {
            return Err(LinalgError::Dimension { expected: self.cols, got: domains.len() });
        }
        self.domains = domains;
        Ok(self)
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.matrix
    }
    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn domains(&self) -> &[VarDomain] {
        &self.domains
    }

    /// Any element of the system, to copy the ring context from.
    pub fn context(&self) -> Option<&T> {
        self.rhs.first().or_else(|| self.matrix.iter().flatten().next())
    }

    /// `M x − b`.
    pub fn residual(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols, "dimension mismatch");
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().zip(x).fold(b.negated(), |acc, (a, v)| acc.plus(&a.times(v))))
            .collect()
    }

    pub fn is_solution(&self, x: &[T]) -> bool {
        x.len() == self.cols && self.residual(x).iter().all(Scalar::is_zero_elem)
    }
}

/// `M x ≤ b` with rational data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "IneqRepr", into = "IneqRepr")]
pub struct InequalitySystem {
    matrix: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    cols: usize,
}

#[derive(Serialize, Deserialize)]
struct IneqRepr {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vars: Option<usize>,
    #[serde(with = "serde_rational_matrix")]
    matrix: Vec<Vec<Rational>>,
    #[serde(with = "serde_rational_vec")]
    rhs: Vec<Rational>,
}

impl TryFrom<IneqRepr> for InequalitySystem {
    type Error = LinalgError;
    fn try_from(r: IneqRepr) -> Result<Self, LinalgError> {
        let cols = r.vars.or_else(|| r.matrix.first().map(Vec::len)).unwrap_or(0);
        InequalitySystem::new(r.matrix, r.rhs, cols)
    }
}

impl From<InequalitySystem> for IneqRepr {
    fn from(s: InequalitySystem) -> Self {
        IneqRepr { vars: Some(s.cols), matrix: s.matrix, rhs: s.rhs }
    }
}

impl InequalitySystem {
    pub fn new(matrix: Vec<Vec<Rational>>, rhs: Vec<Rational>, cols: usize) -> Result<Self, LinalgError> {
        if matrix.len() != rhs.len() {
            return Err(LinalgError::Dimension { expected: matrix.len(), got: rhs.len() });
        }
        if let Some(r) = matrix.iter().find(|r| r.len() != cols) {
            return Err(LinalgError::Dimension { expected: cols, got: r.len() });
        }
        Ok(InequalitySystem { matrix, rhs, cols })
    }

    pub fn empty(cols: usize) -> Self {
        InequalitySystem { matrix: vec![], rhs: vec![], cols }
    }

    /// Convenience for tests and fixtures: integer numerators over a common
    /// denominator of 1.
    pub fn from_i64(matrix: &[&[i64]], rhs: &[i64]) -> Result<Self, LinalgError> {
        let cols = matrix.first().map_or(0, |r| r.len());
        let m = matrix.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
        let b = rhs.iter().map(|&x| Rational::from_integer(x.into())).collect();
        Self::new(m, b, cols)
    }

    pub fn push(&mut self, row: Vec<Rational>, rhs: Rational) {
        assert_eq!(row.len(), self.cols, "dimension mismatch");
        self.matrix.push(row);
        self.rhs.push(rhs);
    }

    /// Adds `row·x = rhs` as two opposite inequalities.
    pub fn push_equality(&mut self, row: Vec<Rational>, rhs: Rational) {
        let neg: Vec<Rational> = row.iter().map(|x| -x).collect();
        self.push(row, rhs.clone());
        self.push(neg, -rhs);
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.matrix
    }
    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }
    pub fn rows(&self) -> usize {
        self.matrix.len()
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// `b − M x` for a rational point.
    pub fn slacks(&self, x: &[Rational]) -> Vec<Rational> {
        self.matrix
            .iter()
            .zip(&self.rhs)
            .map(|(row, b)| row.iter().zip(x).fold(b.clone(), |acc, (a, v)| acc - a * v))
            .collect()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.cols && self.slacks(x).iter().all(|s| *s >= Rational::from_integer(0.into()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_rings::rat;

    #[test]
    fn json_round_trip() {
        let s = InequalitySystem::new(vec![vec![rat(1, 1)], vec![rat(-1, 1)]], vec![rat(1, 2), rat(-1, 2)], 1).unwrap();
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, r#"{"vars":1,"matrix":[["1"],["-1"]],"rhs":["1/2","-1/2"]}"#);
        let back: InequalitySystem = serde_json::from_str(r#"{"matrix":[["1"],[-1]],"rhs":["1/2","-1/2"]}"#).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<InequalitySystem>(r#"{"matrix":[["1"]],"rhs":[]}"#).is_err());
    }

    #[test]
    fn residuals() {
        let sys = LinearSystem::new(vec![vec![rat(1, 1), rat(2, 1)]], vec![rat(5, 1)], 2).unwrap();
        assert!(sys.is_solution(&[rat(1, 1), rat(2, 1)]));
        assert!(!sys.is_solution(&[rat(1, 1)]));
        assert!(LinearSystem::new(vec![vec![rat(1, 1)]], vec![], 1).is_err());
    }
}
