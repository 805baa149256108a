//! Lower bounds on wit counts, code rates and the rates of other rewriting
//! code families.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::combinadic::binomial;
use crate::error::{Result, WomError};
use crate::planner::{plan_uniform_series, CodeParams};

/// Smallest `d` with `sum_{i=0}^{d} C(zeros + d, i) >= v`.
///
/// The extra wits a write of cardinality `v` needs on top of `zeros` wits that
/// must remain unprogrammed for later writes.
pub fn delta(v: &BigUint, zeros: u64) -> u64 {
    let mut d = 0u64;
    loop {
        if reach(zeros + d, d) >= *v {
            return d;
        }
        d += 1;
    }
}

/// `sum_{i=0}^{d} C(n, i)`.
fn reach(n: u64, d: u64) -> BigUint {
    reach_u128(n, d).map_or_else(|| (0..=d).map(|i| binomial(n, i)).sum(), BigUint::from)
}

fn reach_u128(n: u64, d: u64) -> Option<u128> {
    let mut term = 1u128;
    let mut total = 1u128;
    for i in 0..d.min(n) {
        term = term.checked_mul(u128::from(n - i))? / u128::from(i + 1);
        total = total.checked_add(term)?;
    }
    Some(total)
}

/// Lower bound on the wits of any code writing cardinalities `v`, in order:
/// `Z_0 = 0`, `Z(v_1..v_t) = Z(v_2..v_t) + delta(v_1, Z(v_2..v_t))`.
pub fn z_bound(v: &[BigUint]) -> u64 {
    v.iter().rev().fold(0, |z, vi| z + delta(vi, z))
}

/// `log2(x)` for `x > 0`, accurate to double precision for any size.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.to_u64().expect("fits in 64 bits") as f64).log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_u64().expect("top 64 bits") as f64;
    top.log2() + shift as f64
}

/// Total bits written over all writes.
pub fn total_bits(v: &[BigUint]) -> f64 {
    v.iter().map(log2_big).sum()
}

/// Bits per wit: `log2(v_1 ... v_t) / n`.
pub fn rate(p: &CodeParams) -> f64 {
    total_bits(&p.v) / p.wits() as f64
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    /// Lower bound on the wits of any code with these cardinalities.
    pub z: u64,
    pub h1: u64,
    pub n: u64,
    pub rate: f64,
    /// Rate no code with these cardinalities can exceed: `log2(prod v) / z`.
    pub optimal_rate_bound: f64,
    /// `h1 <= z`, which makes the rate at least half the optimum for `m = 2`.
    pub half_optimal_ok: bool,
    /// Whether `half_optimal_ok` is a proven guarantee (`m = 2`).
    pub guaranteed: bool,
}

pub fn check_half_optimal(p: &CodeParams) -> BoundReport {
    let z = z_bound(&p.v);
    let h1 = p.symbols();
    BoundReport {
        z,
        h1,
        n: p.wits(),
        rate: rate(p),
        optimal_rate_bound: total_bits(&p.v) / z as f64,
        half_optimal_ok: h1 <= z,
        guaranteed: p.m == 2,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scheme {
    PositionModulation,
    FiatShamir,
    RivestShamirLinear,
    Cohen,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [
        Scheme::PositionModulation,
        Scheme::FiatShamir,
        Scheme::RivestShamirLinear,
        Scheme::Cohen,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Scheme::PositionModulation => "position_modulation",
            Scheme::FiatShamir => "fiat_shamir",
            Scheme::RivestShamirLinear => "rivest_shamir_linear",
            Scheme::Cohen => "cohen",
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

/// `<3>^t/(t+1)` ternary code.
pub fn fiat_shamir_rate(t: u64) -> f64 {
    t as f64 * 3f64.log2() / (t + 1) as f64
}

/// `<v>^(1+v/4)/(v-1)` linear code, expressed in its number of writes
/// (`v = 4(t-1)`). Defined for `t >= 2`.
pub fn rivest_shamir_linear_rate(t: u64) -> Option<f64> {
    if t < 2 {
        return None;
    }
    let v = 4 * (t - 1);
    Some(t as f64 * (v as f64).log2() / (v - 1) as f64)
}

/// Number of writes of the `<2^r>^(2^(r-2)+2)/(2^r-1)` code.
pub fn cohen_writes(r: u32) -> u64 {
    (1u64 << (r - 2)) + 2
}

/// Rate of the `<2^r>^(2^(r-2)+2)/(2^r-1)` code, `r >= 4`.
pub fn cohen_rate(r: u32) -> Option<f64> {
    if !(4..=62).contains(&r) {
        return None;
    }
    Some(cohen_writes(r) as f64 * r as f64 / ((1u64 << r) - 1) as f64)
}

/// `r` of the code with exactly `t` writes, if there is one.
pub fn cohen_r_for_writes(t: u64) -> Option<u32> {
    (4..=62).find(|&r| cohen_writes(r) == t)
}

/// Rate of the `m = 2` position modulation code writing `v` `t` times.
pub fn position_modulation_rate(t: usize, v: &BigUint) -> Result<f64> {
    let series = plan_uniform_series(2, v, t)?;
    let p = series
        .last()
        .ok_or_else(|| WomError::InvalidArgument("at least one write is required".into()))?;
    Ok(rate(p))
}

/// Rates of every scheme: position modulation and the ternary and linear
/// codes at `t` writes, the Cohen code at parameter `r`.
pub fn comparator_rates(t: u64, r: u32, v: &BigUint) -> Result<Vec<(Scheme, f64)>> {
    if t == 0 {
        return Err(WomError::InvalidArgument("t must be at least 1".into()));
    }
    let cohen = cohen_rate(r)
        .ok_or_else(|| WomError::InvalidArgument(format!("Cohen code needs r >= 4, got {r}")))?;
    let mut out = vec![
        (
            Scheme::PositionModulation,
            position_modulation_rate(t as usize, v)?,
        ),
        (Scheme::FiatShamir, fiat_shamir_rate(t)),
    ];
    if let Some(x) = rivest_shamir_linear_rate(t) {
        out.push((Scheme::RivestShamirLinear, x));
    }
    out.push((Scheme::Cohen, cohen));
    Ok(out)
}

/// One row of the rate curves: every scheme at `t` writes, where defined.
#[derive(Debug, Clone, PartialEq)]
pub struct RateRow {
    pub t: u64,
    pub position_modulation: f64,
    pub fiat_shamir: f64,
    pub rivest_shamir_linear: Option<f64>,
    pub cohen: Option<f64>,
}

impl RateRow {
    /// Largest comparator rate defined at this `t`.
    pub fn best_comparator(&self) -> f64 {
        [
            Some(self.fiat_shamir),
            self.rivest_shamir_linear,
            self.cohen,
        ]
        .into_iter()
        .flatten()
        .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Rate curves for `t = 1..=max_writes`, position modulation at `m = 2`.
pub fn rate_curves(v: &BigUint, max_writes: usize) -> Result<Vec<RateRow>> {
    let plans = plan_uniform_series(2, v, max_writes)?;
    Ok(plans
        .iter()
        .map(|p| {
            let t = p.writes() as u64;
            RateRow {
                t,
                position_modulation: rate(p),
                fiat_shamir: fiat_shamir_rate(t),
                rivest_shamir_linear: rivest_shamir_linear_rate(t),
                cohen: cohen_r_for_writes(t).and_then(cohen_rate),
            }
        })
        .collect())
}

/// Best published low-complexity `<v>^t/n` codes for `t = 2..=10`, with the
/// rates as printed alongside them. Reference data only; these codes are not
/// implemented here.
pub const KNOWN_CODES: [(u64, &str, f64); 9] = [
    (2, "<26>^2/7", 1.34),
    (3, "<63>^3/12", 1.49),
    (4, "<7>^4/7", 1.60),
    (5, "<11>^5/11", 1.57),
    (6, "<16>^6/15", 1.60),
    (7, "<15>^7/15", 1.82),
    (8, "<15>^8/19", 1.65),
    (9, "<15>^9/21", 1.67),
    (10, "<15>^10/24", 1.63),
];
