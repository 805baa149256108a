//! Bijection between message integers and write payloads.
//!
//! A write picks `k` slots of a window of `h` zero symbols and gives each a
//! value in `1..=q`. Messages are numbered block by block, `k` ascending; inside
//! a block the combination is the major digit (lexical rank of the slot mask)
//! and the symbol values form a base-`q` number whose most significant digit
//! sits in the leftmost written slot.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::combinadic::{binomial, rank, unrank, WeightedBitVector};
use crate::error::{Result, WomError};

/// `sum_{k=kmin}^{kmax} C(h,k) q^k`, with `kmax` clipped to `h`.
pub(crate) fn window_sum(h: u64, q: u64, kmin: u64, kmax: u64) -> BigUint {
    let kmax = kmax.min(h);
    if kmin > kmax {
        return BigUint::zero();
    }
    let mut total = BigUint::zero();
    // term = C(h, k) q^k, stepped with C(h, k+1) = C(h, k) (h-k) / (k+1).
    let mut term = BigUint::one();
    for k in 0..=kmax {
        if k >= kmin {
            total += &term;
        }
        term = term * (h - k) * q / (k + 1);
    }
    total
}

/// The zero symbols available to one write and the rules for filling them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WriteWindow {
    /// Number of slots.
    pub h: u64,
    /// Values per written slot.
    pub q: u64,
    pub kmin: u64,
    pub kmax: u64,
}

impl WriteWindow {
    pub fn new(h: u64, q: u64, kmin: u64, kmax: u64) -> Result<Self> {
        if q == 0 || kmin > kmax || kmax > h {
            return Err(WomError::InvalidArgument(format!(
                "malformed window h={h} q={q} k in {kmin}..={kmax}"
            )));
        }
        Ok(WriteWindow { h, q, kmin, kmax })
    }

    /// Window of a first write: `h1` slots, values `1..=2^m-1`, up to `h1-h2` written.
    pub fn first(h1: u64, h2: u64, m: u32) -> Self {
        WriteWindow {
            h: h1,
            q: (1u64 << m) - 1,
            kmin: 0,
            kmax: h1 - h2,
        }
    }

    /// Window of an intermediate write: values `1..=2^m-2`, between 1 and `hi-hnext` written.
    pub fn middle(hi: u64, hnext: u64, m: u32) -> Self {
        WriteWindow {
            h: hi,
            q: (1u64 << m) - 2,
            kmin: 1,
            kmax: hi - hnext,
        }
    }

    fn block_size(&self, k: u64) -> BigUint {
        binomial(self.h, k) * num_traits::pow(BigUint::from(self.q), k as usize)
    }
}

/// Number of distinct payloads a window admits.
pub fn window_capacity(w: &WriteWindow) -> BigUint {
    window_sum(w.h, w.q, w.kmin, w.kmax)
}

/// Which slots a write fills and with which values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WritePayload {
    /// Written slots, leftmost slot first.
    pub mask: WeightedBitVector,
    /// Values of the written slots, in slot order, each in `1..=q`.
    pub digits: Vec<u32>,
}

impl WritePayload {
    pub fn k(&self) -> usize {
        self.mask.weight()
    }

    /// Symbol value of every window slot, 0 for untouched ones.
    pub fn slot_values(&self) -> Vec<u32> {
        let mut out = vec![0; self.mask.len()];
        for (slot, &d) in self.mask.ones().zip(&self.digits) {
            out[slot] = d;
        }
        out
    }

    /// Inverse of [`slot_values`](Self::slot_values).
    pub fn from_slot_values(values: &[u32]) -> Self {
        let mask = WeightedBitVector::from_bits(values.iter().map(|&x| x != 0).collect());
        let digits = values.iter().copied().filter(|&x| x != 0).collect();
        WritePayload { mask, digits }
    }
}

/// `value` as exactly `len` base-`q` digits, most significant first.
fn to_base(mut value: BigUint, q: u64, len: usize) -> Vec<u32> {
    let q = BigUint::from(q);
    let mut out = vec![0u32; len];
    for slot in out.iter_mut().rev() {
        let (quot, rem) = value.div_rem(&q);
        *slot = rem.to_u32().expect("digit below q fits in u32");
        value = quot;
    }
    debug_assert!(value.is_zero());
    out
}

fn from_base(digits: impl IntoIterator<Item = u64>, q: u64) -> BigUint {
    digits
        .into_iter()
        .fold(BigUint::zero(), |acc, d| acc * q + d)
}

pub fn message_to_payload(message: &BigUint, w: &WriteWindow) -> Result<WritePayload> {
    let mut rest = message.clone();
    for k in w.kmin..=w.kmax {
        let block = w.block_size(k);
        if rest < block {
            let values = num_traits::pow(BigUint::from(w.q), k as usize);
            let (combo, value_index) = rest.div_rem(&values);
            let mask = unrank(&combo, w.h as usize, k as usize)?;
            let digits = to_base(value_index, w.q, k as usize)
                .into_iter()
                .map(|d| d + 1)
                .collect();
            return Ok(WritePayload { mask, digits });
        }
        rest -= block;
    }
    Err(WomError::IndexOutOfRange {
        index: message.clone(),
        bound: window_capacity(w),
    })
}

pub fn payload_to_message(p: &WritePayload, w: &WriteWindow) -> Result<BigUint> {
    let k = p.k() as u64;
    if p.mask.len() as u64 != w.h {
        return Err(WomError::SizeMismatch {
            expected: w.h as usize,
            found: p.mask.len(),
        });
    }
    if k < w.kmin || k > w.kmax {
        return Err(WomError::InvalidArgument(format!(
            "payload writes {k} slots, window allows {}..={}",
            w.kmin, w.kmax
        )));
    }
    if p.digits.len() as u64 != k {
        return Err(WomError::SizeMismatch {
            expected: k as usize,
            found: p.digits.len(),
        });
    }
    if let Some(&d) = p.digits.iter().find(|&&d| d == 0 || u64::from(d) > w.q) {
        return Err(WomError::InvalidArgument(format!(
            "symbol value {d} outside 1..={}",
            w.q
        )));
    }
    let offset: BigUint = (w.kmin..k).map(|j| w.block_size(j)).sum();
    let values = num_traits::pow(BigUint::from(w.q), k as usize);
    let value_index = from_base(p.digits.iter().map(|&d| u64::from(d) - 1), w.q);
    Ok(offset + rank(&p.mask) * values + value_index)
}

/// Last-write codeword for `message`: `message + 1` in base `2^m - 1`,
/// `ht` digits, most significant first.
pub fn last_write_encode(message: &BigUint, ht: u64, m: u32) -> Result<Vec<u32>> {
    let q = (1u64 << m) - 1;
    let bound = num_traits::pow(BigUint::from(q), ht as usize) - 1u32;
    if *message >= bound {
        return Err(WomError::IndexOutOfRange {
            index: message.clone(),
            bound,
        });
    }
    Ok(to_base(message + 1u32, q, ht as usize))
}

pub fn last_write_decode(digits: &[u32], m: u32) -> Result<BigUint> {
    let q = (1u64 << m) - 1;
    if let Some(&d) = digits.iter().find(|&&d| u64::from(d) >= q) {
        return Err(WomError::Corrupt(format!(
            "last-write symbol value {d} outside 0..={}",
            q - 1
        )));
    }
    if digits.iter().all(|&d| d == 0) {
        return Err(WomError::Corrupt("all-zero last-write codeword".into()));
    }
    Ok(from_base(digits.iter().map(|&d| u64::from(d)), q) - 1u32)
}
