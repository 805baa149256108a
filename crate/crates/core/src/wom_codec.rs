//! The position modulation code over symbol images.
//!
//! Each write first soft-erases: every nonzero symbol is raised to the
//! all-ones value, and surplus zeros (highest indices first) are erased too
//! until exactly the generation's window of zeros remains. The message is then
//! written into that window. The generation is recovered from the number of
//! zero symbols alone.

use num_bigint::BigUint;

use crate::error::{Result, WomError};
use crate::message_codec::{
    last_write_decode, last_write_encode, message_to_payload, payload_to_message, WritePayload,
    WriteWindow,
};
use crate::planner::{validate, CodeParams};

/// Current symbol values of a memory, index 0 leftmost.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemoryImage {
    params: CodeParams,
    symbols: Vec<u32>,
}

/// A decoded memory: which write it holds and the message written.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerationReading {
    pub generation: usize,
    pub message: BigUint,
}

impl MemoryImage {
    /// The all-zero image of a fresh memory.
    pub fn fresh(params: CodeParams) -> Result<Self> {
        let n = params.symbols() as usize;
        Self::from_symbols(params, vec![0; n])
    }

    pub fn from_symbols(params: CodeParams, symbols: Vec<u32>) -> Result<Self> {
        let violations = validate(&params);
        if !violations.is_empty() {
            return Err(WomError::InvalidParams(violations));
        }
        if symbols.len() as u64 != params.symbols() {
            return Err(WomError::SizeMismatch {
                expected: params.symbols() as usize,
                found: symbols.len(),
            });
        }
        let erased = params.erased_value();
        if let Some(&s) = symbols.iter().find(|&&s| s > erased) {
            return Err(WomError::InvalidArgument(format!(
                "symbol value {s} exceeds {erased}"
            )));
        }
        Ok(MemoryImage { params, symbols })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u32> {
        self.symbols
    }

    /// Number of zero symbols.
    pub fn zeros(&self) -> u64 {
        self.symbols.iter().filter(|&&s| s == 0).count() as u64
    }

    /// Number of symbols retired by erasure, `h_1 - h_g` in generation `g`.
    /// First-generation data symbols may hold the all-ones value, so this is
    /// not a count of all-ones symbols.
    pub fn erased(&self) -> u64 {
        if self.is_fresh() {
            return 0;
        }
        let g = self.detect_generation();
        self.params.symbols() - self.params.window(g)
    }

    pub fn is_fresh(&self) -> bool {
        self.symbols.iter().all(|&s| s == 0)
    }

    fn with_symbols(&self, symbols: Vec<u32>) -> Self {
        MemoryImage {
            params: self.params.clone(),
            symbols,
        }
    }

    /// Generation implied by the zero count `k0`: 1 if `k0 >= h_2`, `i` if
    /// `h_i > k0 >= h_{i+1}`, `t` if `k0 < h_t`.
    pub fn detect_generation(&self) -> usize {
        let t = self.params.writes();
        let k0 = self.zeros();
        let h = &self.params.h;
        if t == 1 || k0 >= h[1] {
            return 1;
        }
        (2..t).find(|&i| k0 >= h[i]).unwrap_or(t)
    }

    /// Generation the next [`encode_write`](Self::encode_write) will use.
    ///
    /// A fresh image is always written as generation 1, so a first write of
    /// message 0 (which leaves the image untouched) does not consume a write.
    pub fn next_generation(&self) -> Result<usize> {
        if self.is_fresh() {
            return Ok(1);
        }
        let g = self.detect_generation() + 1;
        if g > self.params.writes() {
            return Err(WomError::Exhausted {
                writes: self.params.writes(),
            });
        }
        Ok(g)
    }

    /// Soft erase down to exactly `target` zero symbols.
    pub fn erase_to(&self, target: u64) -> Result<Self> {
        let available = self.zeros();
        if available < target {
            return Err(WomError::NotEnoughZeros {
                needed: target,
                available,
            });
        }
        let erased = self.params.erased_value();
        let mut surplus = available - target;
        let mut symbols: Vec<u32> = self
            .symbols
            .iter()
            .map(|&s| if s == 0 { 0 } else { erased })
            .collect();
        for s in symbols.iter_mut().rev() {
            if surplus == 0 {
                break;
            }
            if *s == 0 {
                *s = erased;
                surplus -= 1;
            }
        }
        Ok(self.with_symbols(symbols))
    }

    /// Writes `message` as the next generation.
    pub fn encode_write(&self, message: &BigUint) -> Result<Self> {
        let p = &self.params;
        let g = self.next_generation()?;
        let t = p.writes();
        if message >= p.cardinality(g) {
            return Err(WomError::MessageOutOfRange {
                generation: g,
                message: message.clone(),
                bound: p.cardinality(g).clone(),
            });
        }

        if g == 1 && t > 1 {
            let w = WriteWindow::first(p.h[0], p.h[1], p.m);
            let payload = message_to_payload(message, &w)?;
            return Ok(self.with_symbols(payload.slot_values()));
        }

        let base = self.erase_to(p.window(g))?;
        let values = if g == t {
            last_write_encode(message, p.window(g), p.m)?
        } else {
            let w = WriteWindow::middle(p.window(g), p.window(g + 1), p.m);
            message_to_payload(message, &w)?.slot_values()
        };
        let mut symbols = base.symbols;
        let slots: Vec<usize> = (0..symbols.len()).filter(|&i| symbols[i] == 0).collect();
        for (slot, value) in slots.into_iter().zip(values) {
            symbols[slot] = value;
        }
        Ok(self.with_symbols(symbols))
    }

    /// Recovers the generation and message held by the image.
    pub fn decode(&self) -> Result<GenerationReading> {
        if self.is_fresh() {
            return Ok(GenerationReading {
                generation: 1,
                message: BigUint::from(0u32),
            });
        }
        let p = &self.params;
        let t = p.writes();
        let g = self.detect_generation();
        let corrupt = |e: WomError| match e {
            WomError::Corrupt(_) => e,
            other => WomError::Corrupt(format!("generation {g}: {other}")),
        };

        let message = if g == 1 && t > 1 {
            let w = WriteWindow::first(p.h[0], p.h[1], p.m);
            payload_to_message(&WritePayload::from_slot_values(&self.symbols), &w)
                .map_err(corrupt)?
        } else {
            let erased = p.erased_value();
            let window: Vec<u32> = self
                .symbols
                .iter()
                .copied()
                .filter(|&s| s != erased)
                .collect();
            if window.len() as u64 != p.window(g) {
                return Err(WomError::Corrupt(format!(
                    "generation {g} expects {} unerased symbols, found {}",
                    p.window(g),
                    window.len()
                )));
            }
            if g == t {
                last_write_decode(&window, p.m)?
            } else {
                let w = WriteWindow::middle(p.window(g), p.window(g + 1), p.m);
                payload_to_message(&WritePayload::from_slot_values(&window), &w).map_err(corrupt)?
            }
        };

        if message >= *p.cardinality(g) {
            return Err(WomError::Corrupt(format!(
                "decoded message {message} exceeds cardinality {} of generation {g}",
                p.cardinality(g)
            )));
        }
        Ok(GenerationReading {
            generation: g,
            message,
        })
    }
}
