//! Exact binomial coefficients and the lexical ranking of fixed-weight
//! binary vectors (the combinatorial number system).
//!
//! Bit positions are labelled `n - 1` (leftmost) down to `0` (rightmost).
//! A vector with ones at positions `i_1 > i_2 > ... > i_k` has rank
//! `C(i_1, k) + C(i_2, k - 1) + ... + C(i_k, 1)`, which is its index in the
//! lexically sorted list of all length-`n` weight-`k` vectors.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Result, WomError};

/// `n` choose `k`, exactly. Zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    // acc = C(n - k + i, i) after step i, so every division is exact.
    for i in 1..=k {
        acc *= n - k + i;
        acc /= i;
    }
    acc
}

/// A binary vector of length `n` together with its weight.
///
/// Bits are stored leftmost first: `bits()[0]` is position `n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WeightedBitVector {
    bits: Vec<bool>,
    weight: usize,
}

impl WeightedBitVector {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        let weight = bits.iter().filter(|&&b| b).count();
        WeightedBitVector { bits, weight }
    }

    /// All-zero vector of length `n`.
    pub fn zeros(n: usize) -> Self {
        WeightedBitVector {
            bits: vec![false; n],
            weight: 0,
        }
    }

    /// Builds a vector from the labels of its one positions (0 = rightmost).
    pub fn from_positions(n: usize, positions: &[usize]) -> Result<Self> {
        let mut bits = vec![false; n];
        for &p in positions {
            if p >= n {
                return Err(WomError::InvalidArgument(format!(
                    "bit position {p} out of range for length {n}"
                )));
            }
            bits[n - 1 - p] = true;
        }
        Ok(Self::from_bits(bits))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    /// Bits, leftmost first.
    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Position labels of the ones, in decreasing order.
    pub fn positions(&self) -> impl Iterator<Item = usize> + '_ {
        let n = self.bits.len();
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(idx, _)| n - 1 - idx)
    }

    /// Storage indices (leftmost = 0) of the ones, in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(idx, _)| idx)
    }
}

impl fmt::Display for WeightedBitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for WeightedBitVector {
    type Err = WomError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(WomError::InvalidArgument(format!(
                    "unexpected character {other:?} in bit string"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(bits))
    }
}

/// Lexical index of `u` among all vectors of its length and weight.
pub fn rank(u: &WeightedBitVector) -> BigUint {
    let k = u.weight() as u64;
    u.positions()
        .enumerate()
        .fold(BigUint::zero(), |acc, (j, pos)| {
            acc + binomial(pos as u64, k - j as u64)
        })
}

/// Inverse of [`rank`]: the length-`n` weight-`k` vector with the given index.
pub fn unrank(index: &BigUint, n: usize, k: usize) -> Result<WeightedBitVector> {
    let total = binomial(n as u64, k as u64);
    if *index >= total {
        return Err(WomError::IndexOutOfRange {
            index: index.clone(),
            bound: total,
        });
    }
    let mut rest = index.clone();
    let mut left = k as u64;
    let mut bits = vec![false; n];
    // Scanning positions downward, the first position whose binomial fits is
    // the largest such one.
    for (idx, bit) in bits.iter_mut().enumerate() {
        if left == 0 {
            break;
        }
        let pos = (n - 1 - idx) as u64;
        let c = binomial(pos, left);
        if c <= rest {
            rest -= c;
            *bit = true;
            left -= 1;
        }
    }
    debug_assert!(rest.is_zero() && left == 0);
    Ok(WeightedBitVector { bits, weight: k })
}
