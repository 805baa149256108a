//! Wit-level write-once memory.
//!
//! Symbol `j` occupies wits `j*m .. (j+1)*m`, most significant bit at the
//! lowest wit index. Wits only ever go from 0 to 1; any image that would need a
//! 1 cleared is refused.
//!
//! # State file
//!
//! A device is persisted as six newline-terminated ASCII lines:
//!
//! ```text
//! pmwom-state 1
//! m 2
//! t 2
//! v 7 2
//! h 2 1
//! wits 0011
//! ```
//!
//! Cardinalities are decimal, and the wit string lists wit 0 first.

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{Result, WomError};
use crate::planner::CodeParams;
use crate::wom_codec::{GenerationReading, MemoryImage};

pub const STATE_HEADER: &str = "pmwom-state 1";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitArray {
    bits: Vec<bool>,
    programs_issued: u64,
}

impl WitArray {
    /// `n` unprogrammed wits.
    pub fn new(n: usize) -> Self {
        WitArray {
            bits: vec![false; n],
            programs_issued: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn programs_issued(&self) -> u64 {
        self.programs_issued
    }

    /// Sets the listed wits to 1. Already-set wits are left alone.
    pub fn program(&mut self, positions: &[usize]) -> Result<()> {
        if let Some(&p) = positions.iter().find(|&&p| p >= self.bits.len()) {
            return Err(WomError::IndexOutOfRange {
                index: BigUint::from(p),
                bound: BigUint::from(self.bits.len()),
            });
        }
        for &p in positions {
            self.bits[p] = true;
        }
        self.programs_issued += 1;
        Ok(())
    }

    /// Programs whatever wits `img` needs. Fails without touching the array
    /// if that would require clearing a wit.
    pub fn apply_image(&mut self, img: &MemoryImage) -> Result<()> {
        let target = render(img.symbols(), img.params().m);
        if target.len() != self.bits.len() {
            return Err(WomError::SizeMismatch {
                expected: self.bits.len(),
                found: target.len(),
            });
        }
        if let Some(wit) = (0..target.len()).find(|&i| self.bits[i] && !target[i]) {
            return Err(WomError::WriteOnceViolation { wit });
        }
        let delta: Vec<usize> = (0..target.len())
            .filter(|&i| target[i] && !self.bits[i])
            .collect();
        if !delta.is_empty() {
            self.program(&delta)?;
        }
        Ok(())
    }

    pub fn read_image(&self, params: &CodeParams) -> Result<MemoryImage> {
        let m = params.m as usize;
        let expected = params.wits() as usize;
        if self.bits.len() != expected {
            return Err(WomError::SizeMismatch {
                expected,
                found: self.bits.len(),
            });
        }
        let symbols = self
            .bits
            .chunks(m)
            .map(|group| group.iter().fold(0u32, |acc, &b| acc << 1 | u32::from(b)))
            .collect();
        MemoryImage::from_symbols(params.clone(), symbols)
    }
}

/// Wit pattern of a symbol sequence.
pub fn render(symbols: &[u32], m: u32) -> Vec<bool> {
    symbols
        .iter()
        .flat_map(|&s| (0..m).rev().map(move |bit| s >> bit & 1 == 1))
        .collect()
}

impl fmt::Display for WitArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for WitArray {
    type Err = WomError;

    fn from_str(s: &str) -> Result<Self> {
        let bits = s
            .bytes()
            .map(|c| match c {
                b'0' => Ok(false),
                b'1' => Ok(true),
                _ => Err(WomError::Corrupt(format!(
                    "wit string contains {:?}",
                    c as char
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WitArray {
            bits,
            programs_issued: 0,
        })
    }
}

/// A memory bound to a code: the unit that gets persisted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Device {
    params: CodeParams,
    wits: WitArray,
}

impl Device {
    pub fn new(params: CodeParams) -> Result<Self> {
        // Validates the parameters.
        MemoryImage::fresh(params.clone())?;
        let wits = WitArray::new(params.wits() as usize);
        Ok(Device { params, wits })
    }

    pub fn params(&self) -> &CodeParams {
        &self.params
    }

    pub fn wits(&self) -> &WitArray {
        &self.wits
    }

    pub fn image(&self) -> Result<MemoryImage> {
        self.wits.read_image(&self.params)
    }

    /// Encodes `message` as the next write and programs the wits.
    pub fn write(&mut self, message: &BigUint) -> Result<usize> {
        let current = self.image()?;
        let generation = current.next_generation()?;
        let next = current.encode_write(message)?;
        self.wits.apply_image(&next)?;
        Ok(generation)
    }

    pub fn read(&self) -> Result<GenerationReading> {
        self.image()?.decode()
    }

    pub fn to_state_string(&self) -> String {
        let join = |xs: Vec<String>| xs.join(" ");
        format!(
            "{STATE_HEADER}\nm {}\nt {}\nv {}\nh {}\nwits {}\n",
            self.params.m,
            self.params.writes(),
            join(self.params.v.iter().map(|x| x.to_string()).collect()),
            join(self.params.h.iter().map(|x| x.to_string()).collect()),
            self.wits
        )
    }

    pub fn parse_state(text: &str) -> Result<Self> {
        let corrupt = |msg: String| WomError::Corrupt(msg);
        let body = text
            .strip_suffix('\n')
            .ok_or_else(|| corrupt("state file must end with a newline".into()))?;
        let lines: Vec<&str> = body.split('\n').collect();
        if lines.first() != Some(&STATE_HEADER) {
            return Err(corrupt(format!("missing {STATE_HEADER:?} header")));
        }
        if lines.len() != 6 {
            return Err(corrupt(format!("expected 6 lines, found {}", lines.len())));
        }
        let field = |line: &str, key: &str| -> Result<String> {
            line.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .map(str::to_owned)
                .ok_or_else(|| corrupt(format!("expected {key:?} line, found {line:?}")))
        };
        let num = |s: &str| -> Result<u64> {
            s.parse().map_err(|_| corrupt(format!("bad integer {s:?}")))
        };
        let m = num(&field(lines[1], "m")?)?;
        let t = num(&field(lines[2], "t")?)? as usize;
        let v = field(lines[3], "v")?
            .split(' ')
            .map(|s| {
                BigUint::parse_bytes(s.as_bytes(), 10)
                    .ok_or_else(|| corrupt(format!("bad cardinality {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let h = field(lines[4], "h")?
            .split(' ')
            .map(num)
            .collect::<Result<Vec<_>>>()?;
        let wits: WitArray = field(lines[5], "wits")?.parse()?;
        if v.len() != t || h.len() != t {
            return Err(corrupt(format!(
                "t = {t} but {} cardinalities and {} windows",
                v.len(),
                h.len()
            )));
        }
        let m = u32::try_from(m).map_err(|_| corrupt(format!("bad symbol width {m}")))?;
        let params = CodeParams::new(m, v, h).map_err(|e| corrupt(e.to_string()))?;
        if wits.len() as u64 != params.wits() {
            return Err(corrupt(format!(
                "wit string has {} wits, code needs {}",
                wits.len(),
                params.wits()
            )));
        }
        Ok(Device { params, wits })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| WomError::Corrupt(format!("{}: {e}", path.display())))?;
        Self::parse_state(&text)
    }

    /// Replaces `path` atomically: the new state is written to a temporary
    /// file in the same directory and renamed over the old one.
    pub fn save(&self, path: &Path) -> std::io::Result<()> {
        let dir = match path.parent() {
            Some(d) if !d.as_os_str().is_empty() => d,
            _ => Path::new("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
        tmp.write_all(self.to_state_string().as_bytes())?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }
}
