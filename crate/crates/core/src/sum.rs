//! Order-fixed summation.
//!
//! Every reduction in this crate goes through [`pairwise_sum`], whose
//! association tree depends only on the input length. Results are therefore
//! bit-identical no matter how the terms were produced or how many threads
//! produced them, as long as they are presented in the same order.

use std::ops::Add;

const LEAF: usize = 8;

/// Sums `terms` with a fixed binary tree (leaves of up to eight terms summed
/// left to right).
pub fn pairwise_sum<T>(terms: &[T]) -> T
where
    T: Copy + Default + Add<Output = T>,
{
    if terms.len() <= LEAF {
        return terms.iter().fold(T::default(), |acc, &t| acc + t);
    }
    let mid = terms.len() / 2;
    pairwise_sum(&terms[..mid]) + pairwise_sum(&terms[mid..])
}
