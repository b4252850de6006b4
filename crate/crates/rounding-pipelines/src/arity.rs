use serde::{Deserialize, Serialize};

use crate::error::PipelineError;

/// The arities at which a family is claimed to be a polymorphism:
/// `L ≥ 1` with `L mod modulus ∈ residues`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Arities {
    pub modulus: u64,
    pub residues: Vec<u64>,
}

impl Arities {
    pub fn new(modulus: u64, mut residues: Vec<u64>) -> Result<Self, PipelineError> {
        if modulus == 0 {
            return Err(PipelineError::ZeroModulus);
        }
        residues.iter_mut().for_each(|r| *r %= modulus);
        residues.sort_unstable();
        residues.dedup();
        if residues.is_empty() {
            return Err(PipelineError::NoArities);
        }
        Ok(Arities { modulus, residues })
    }

    pub fn all() -> Self {
        Arities { modulus: 1, residues: vec![0] }
    }

    pub fn odd() -> Self {
        Arities { modulus: 2, residues: vec![1] }
    }

    pub fn contains(&self, l: u64) -> bool {
        l >= 1 && self.residues.contains(&(l % self.modulus))
    }

    /// Valid arities in `[lo, hi]`, ascending.
    pub fn range(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        (lo.max(1)..=hi).filter(|&l| self.contains(l))
    }

    /// Smallest valid arity `≥ lo`.
    pub fn at_least(&self, lo: u64) -> u64 {
        (lo.max(1)..).find(|&l| self.contains(l)).expect("residues are nonempty")
    }
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn odd_progression() {
        let a = Arities::odd();
        assert!(a.contains(1) && a.contains(9) && !a.contains(4) && !a.contains(0));
        assert_eq!(a.range(1, 9).collect::<Vec<_>>(), vec![1, 3, 5, 7, 9]);
        assert_eq!(a.at_least(100), 101);
        assert_eq!(Arities::new(7, vec![8]).unwrap().residues, vec![1]);
        assert_eq!(Arities::new(3, vec![]), Err(PipelineError::NoArities));
    }
}
