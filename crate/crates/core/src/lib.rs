//! Position modulation codes for rewriting write-once memories.
//!
//! A write-once memory is an array of wits that start at 0 and can only be
//! programmed to 1. The position modulation code groups `m` wits into a
//! symbol and stores each write in *which* zero symbols get written and with
//! what values, soft-erasing used symbols to all-ones between writes.
//!
//! - [`combinadic`]: exact binomials and lexical rank/unrank of weight-`k` vectors.
//! - [`planner`]: window sizes `h_1 > ... > h_t` for given cardinalities.
//! - [`message_codec`]: message integer <-> write payload.
//! - [`wom_codec`]: multi-write encode/decode over symbol images.
//! - [`wom_device`]: wit-level simulator and state file.
//! - [`bounds`]: lower bound on wit counts, rates, and other code families.
//! - [`cli`]: the `pmwom` command line.

pub mod bounds;
pub mod cli;
pub mod combinadic;
pub mod error;
pub mod message_codec;
pub mod planner;
pub mod wom_codec;
pub mod wom_device;

pub use error::{ErrorKind, Result, WomError};
pub use planner::CodeParams;
pub use wom_codec::{GenerationReading, MemoryImage};
pub use wom_device::{Device, WitArray};
