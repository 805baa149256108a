//! Code parameter planning.
//!
//! A code is described by the symbol width `m` (wits per symbol), one message
//! cardinality `v_i` per write and a strictly decreasing sequence of window
//! sizes `h_1 > ... > h_t > 0`. Window `h_i` is the number of zero symbols the
//! `i`-th write gets to work with; `h_1` symbols (`m * h_1` wits) make up the
//! whole memory.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;

use crate::error::{Result, WomError};
use crate::message_codec::window_sum;

/// Widest symbol supported. Symbol values are kept in a `u32`.
pub const MAX_SYMBOL_WIDTH: u32 = 16;

/// Upper bound on any single window increment during planning.
pub const MAX_SEARCH_STEPS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeParams {
    /// Wits per symbol.
    pub m: u32,
    /// Message cardinality of each write, first write first.
    pub v: Vec<BigUint>,
    /// Window sizes, `h[0]` being the total number of symbols.
    pub h: Vec<u64>,
}

impl CodeParams {
    /// Builds parameters and rejects them unless they describe a valid code.
    pub fn new(m: u32, v: Vec<BigUint>, h: Vec<u64>) -> Result<Self> {
        let p = CodeParams { m, v, h };
        let violations = validate(&p);
        if violations.is_empty() {
            Ok(p)
        } else {
            Err(WomError::InvalidParams(violations))
        }
    }

    /// Number of writes.
    pub fn writes(&self) -> usize {
        self.v.len()
    }

    /// Number of symbols in the memory.
    pub fn symbols(&self) -> u64 {
        self.h.first().copied().unwrap_or(0)
    }

    /// Number of wits in the memory.
    pub fn wits(&self) -> u64 {
        u64::from(self.m) * self.symbols()
    }

    /// All-ones symbol value.
    pub fn erased_value(&self) -> u32 {
        (1u32 << self.m) - 1
    }

    /// Window size of generation `g` (1-based).
    pub fn window(&self, g: usize) -> u64 {
        self.h[g - 1]
    }

    /// Cardinality of generation `g` (1-based).
    pub fn cardinality(&self, g: usize) -> &BigUint {
        &self.v[g - 1]
    }

    /// Number of distinct messages generation `g` can carry.
    pub fn generation_capacity(&self, g: usize) -> BigUint {
        let t = self.writes();
        if g == t {
            capacity_last(self.h[g - 1], self.m)
        } else if g == 1 {
            capacity_first(self.h[0], self.h[1], self.m)
        } else {
            capacity_middle(self.h[g - 1], self.h[g], self.m)
        }
    }
}

fn alphabet(m: u32) -> u64 {
    (1u64 << m) - 1
}

/// Messages a first write can carry: `sum_{k=0}^{h1-h2} C(h1,k) (2^m-1)^k`.
pub fn capacity_first(h1: u64, h2: u64, m: u32) -> BigUint {
    window_sum(h1, alphabet(m), 0, h1.saturating_sub(h2))
}

/// Messages an intermediate write can carry: `sum_{k=1}^{hi-hnext} C(hi,k) (2^m-2)^k`.
pub fn capacity_middle(hi: u64, hnext: u64, m: u32) -> BigUint {
    window_sum(hi, alphabet(m) - 1, 1, hi.saturating_sub(hnext))
}

/// Messages the last write can carry: `(2^m-1)^ht - 1`.
pub fn capacity_last(ht: u64, m: u32) -> BigUint {
    num_traits::pow(BigUint::from(alphabet(m)), ht as usize) - BigUint::one()
}

/// A failed validity condition on a [`CodeParams`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    SymbolWidth {
        m: u32,
    },
    NoWrites,
    LengthMismatch {
        v_len: usize,
        h_len: usize,
    },
    CardinalityTooSmall {
        generation: usize,
    },
    /// `h_g <= h_{g+1}`.
    NotDecreasing {
        generation: usize,
    },
    /// `h_t == 0`.
    EmptyLastWindow,
    FirstCapacity {
        capacity: BigUint,
        required: BigUint,
    },
    MiddleCapacity {
        generation: usize,
        capacity: BigUint,
        required: BigUint,
    },
    LastCapacity {
        capacity: BigUint,
        required: BigUint,
    },
}

impl Violation {
    /// Which of the four code conditions (a)-(d) failed, if any.
    pub fn condition(&self) -> Option<char> {
        match self {
            Violation::NotDecreasing { .. } | Violation::EmptyLastWindow => Some('a'),
            Violation::FirstCapacity { .. } => Some('b'),
            Violation::MiddleCapacity { .. } => Some('c'),
            Violation::LastCapacity { .. } => Some('d'),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SymbolWidth { m } => {
                write!(f, "symbol width m={m} outside 2..={MAX_SYMBOL_WIDTH}")
            }
            Violation::NoWrites => write!(f, "at least one write is required"),
            Violation::LengthMismatch { v_len, h_len } => {
                write!(f, "{v_len} cardinalities but {h_len} window sizes")
            }
            Violation::CardinalityTooSmall { generation } => {
                write!(f, "cardinality of write {generation} must be at least 2")
            }
            Violation::NotDecreasing { generation } => write!(
                f,
                "condition (a): h{} must exceed h{}",
                generation,
                generation + 1
            ),
            Violation::EmptyLastWindow => write!(f, "condition (a): last window must be positive"),
            Violation::FirstCapacity { capacity, required } => write!(
                f,
                "condition (b): first write holds {capacity} messages, needs {required}"
            ),
            Violation::MiddleCapacity {
                generation,
                capacity,
                required,
            } => write!(
                f,
                "condition (c): write {generation} holds {capacity} messages, needs {required}"
            ),
            Violation::LastCapacity { capacity, required } => write!(
                f,
                "condition (d): last write holds {capacity} messages, needs {required}"
            ),
        }
    }
}

/// Checks every validity condition; an empty result means the code exists.
pub fn validate(p: &CodeParams) -> Vec<Violation> {
    let mut out = Vec::new();
    if !(2..=MAX_SYMBOL_WIDTH).contains(&p.m) {
        out.push(Violation::SymbolWidth { m: p.m });
    }
    if p.v.is_empty() {
        out.push(Violation::NoWrites);
    }
    if p.v.len() != p.h.len() {
        out.push(Violation::LengthMismatch {
            v_len: p.v.len(),
            h_len: p.h.len(),
        });
    }
    for (i, v) in p.v.iter().enumerate() {
        if *v < BigUint::from(2u32) {
            out.push(Violation::CardinalityTooSmall { generation: i + 1 });
        }
    }
    if !out.is_empty() {
        return out;
    }

    let t = p.h.len();
    for i in 0..t - 1 {
        if p.h[i] <= p.h[i + 1] {
            out.push(Violation::NotDecreasing { generation: i + 1 });
        }
    }
    if p.h[t - 1] == 0 {
        out.push(Violation::EmptyLastWindow);
    }

    if t > 1 {
        let cap = capacity_first(p.h[0], p.h[1], p.m);
        if cap < p.v[0] {
            out.push(Violation::FirstCapacity {
                capacity: cap,
                required: p.v[0].clone(),
            });
        }
    }
    for i in 1..t.saturating_sub(1) {
        let cap = capacity_middle(p.h[i], p.h[i + 1], p.m);
        if cap < p.v[i] {
            out.push(Violation::MiddleCapacity {
                generation: i + 1,
                capacity: cap,
                required: p.v[i].clone(),
            });
        }
    }
    let cap = capacity_last(p.h[t - 1], p.m);
    if cap < p.v[t - 1] {
        out.push(Violation::LastCapacity {
            capacity: cap,
            required: p.v[t - 1].clone(),
        });
    }
    out
}

fn check_inputs(m: u32, v: &[BigUint]) -> Result<()> {
    let probe = CodeParams {
        m,
        v: v.to_vec(),
        h: vec![0; v.len()],
    };
    let bad: Vec<_> = validate(&probe)
        .into_iter()
        .filter(|x| x.condition().is_none())
        .collect();
    if bad.is_empty() {
        Ok(())
    } else {
        Err(WomError::InvalidParams(bad))
    }
}

/// Smallest `h >= 1` whose last-write capacity reaches `v`.
fn last_window(v: &BigUint, m: u32, generation: usize) -> Result<u64> {
    let q = BigUint::from(alphabet(m));
    let mut power = q.clone();
    let mut h = 1u64;
    while &power - 1u32 < *v {
        if h >= MAX_SEARCH_STEPS {
            return Err(WomError::SearchLimit {
                generation,
                limit: MAX_SEARCH_STEPS,
            });
        }
        power *= &q;
        h += 1;
    }
    Ok(h)
}

/// Smallest `delta >= start` with `capacity(next + delta, next) >= v`.
fn min_increment(
    next: u64,
    v: &BigUint,
    start: u64,
    generation: usize,
    capacity: impl Fn(u64, u64) -> BigUint,
) -> Result<u64> {
    let mut delta = start;
    while capacity(next + delta, next) < *v {
        delta += 1;
        if delta > MAX_SEARCH_STEPS {
            return Err(WomError::SearchLimit {
                generation,
                limit: MAX_SEARCH_STEPS,
            });
        }
    }
    Ok(delta)
}

fn middle_window(next: u64, v: &BigUint, m: u32, generation: usize) -> Result<u64> {
    let d = min_increment(next, v, 1, generation, |a, b| capacity_middle(a, b, m))?;
    Ok(next + d)
}

fn first_window(next: u64, v: &BigUint, m: u32) -> Result<u64> {
    let d = min_increment(next, v, 0, 1, |a, b| capacity_first(a, b, m))?;
    Ok(next + d)
}

/// Greedy planning in reverse write order: the last window is the smallest
/// that fits `v_t`, then each earlier window is the smallest extension of the
/// following one that fits its cardinality.
pub fn plan(m: u32, v: &[BigUint]) -> Result<CodeParams> {
    check_inputs(m, v)?;
    let t = v.len();
    let mut h = vec![0u64; t];
    h[t - 1] = last_window(&v[t - 1], m, t)?;
    for i in (1..t.saturating_sub(1)).rev() {
        h[i] = middle_window(h[i + 1], &v[i], m, i + 1)?;
    }
    if t > 1 {
        h[0] = first_window(h[1], &v[0], m)?;
    }
    Ok(CodeParams {
        m,
        v: v.to_vec(),
        h,
    })
}

/// Plans for `t = 1..=max_writes` writes of the same cardinality.
///
/// Equivalent to calling [`plan`] for each `t`, but the shared tail
/// `h_t, h_{t-1}, ..., h_2` is computed once.
pub fn plan_uniform_series(m: u32, v: &BigUint, max_writes: usize) -> Result<Vec<CodeParams>> {
    if max_writes == 0 {
        return Ok(Vec::new());
    }
    check_inputs(m, std::slice::from_ref(v))?;
    // tail[j] is the window j steps before the last one.
    let mut tail = vec![last_window(v, m, max_writes)?];
    for j in 1..max_writes.saturating_sub(1) {
        let next = middle_window(tail[j - 1], v, m, max_writes - j)?;
        tail.push(next);
    }
    let mut out = Vec::with_capacity(max_writes);
    for t in 1..=max_writes {
        let h = if t == 1 {
            vec![tail[0]]
        } else {
            let mut h: Vec<u64> = tail[..t - 1].iter().rev().copied().collect();
            h.insert(0, first_window(h[0], v, m)?);
            h
        };
        out.push(CodeParams {
            m,
            v: vec![v.clone(); t],
            h,
        });
    }
    Ok(out)
}
