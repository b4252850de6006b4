use crate::scalar::Scalar;

/// Sums by pairing neighbours level by level, so intermediate values stay
/// close to the size of the final result instead of growing along a chain.
///
/// Returns `None` on an empty input: with context-carrying rings there is no
/// zero to return without an element to copy it from.
pub fn balanced_sum<T: Scalar>(items: Vec<T>) -> Option<T> {
    let mut level = items;
    if level.is_empty() {
        return None;
    }
    while level.len() > 1 {
        let mut next = Vec::with_capacity(level.len().div_ceil(2));
        let mut it = level.into_iter();
        while let Some(x) = it.next() {
            match it.next() {
                Some(y) => next.push(x.plus(&y)),
                None => next.push(x),
            }
        }
        level = next;
    }
    level.pop()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn sums_match_sequential() {
        let xs: Vec<BigInt> = (1..=17).map(BigInt::from).collect();
        assert_eq!(balanced_sum(xs), Some(BigInt::from(153)));
        assert_eq!(balanced_sum(Vec::<BigInt>::new()), None);
    }
}
