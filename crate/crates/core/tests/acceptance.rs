//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use pmwom::bounds::{
    check_half_optimal, delta, fiat_shamir_rate, rate, rate_curves, rivest_shamir_linear_rate,
    z_bound,
};
use pmwom::cli::PlanReport;
use pmwom::combinadic::{binomial, rank, unrank, WeightedBitVector};
use pmwom::planner::{plan, plan_uniform_series, validate};
use pmwom::{Device, ErrorKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

const RATE_TOLERANCE: f64 = 1e-3;

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

fn pow2(bits: u32) -> BigUint {
    BigUint::one() << bits
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn example_one() -> Outcome {
    let v = vec![pow2(56); 10];
    let p = plan(2, &v).map_err(|e| e.to_string())?;
    let want = [139u64, 130, 120, 110, 99, 88, 76, 64, 51, 36];
    check(p.h == want, || format!("h = {:?}, want {want:?}", p.h))?;
    check(p.wits() == 278, || format!("n = {}, want 278", p.wits()))?;
    let r = rate(&p);
    check((r - 2.014).abs() <= RATE_TOLERANCE, || {
        format!("rate {r:.5} outside 2.014 +/- {RATE_TOLERANCE}")
    })?;
    check(validate(&p).is_empty(), || "plan fails validation".into())?;
    Ok(format!("h = {:?}, n = 278, rate = {r:.4}", p.h))
}

fn table_sizes() -> Outcome {
    let want: [(u64, &str); 9] = [
        (98, "1.14"),
        (124, "1.35"),
        (150, "1.49"),
        (172, "1.63"),
        (196, "1.71"),
        (216, "1.81"),
        (238, "1.88"),
        (258, "1.95"),
        (278, "2.01"),
    ];
    let plans = plan_uniform_series(2, &pow2(56), 10).map_err(|e| e.to_string())?;
    for (i, &(n, r)) in want.iter().enumerate() {
        let t = i + 2;
        let p = &plans[t - 1];
        let got = format!("{:.2}", rate(p));
        check(p.wits() == n && got == r, || {
            format!(
                "t = {t}: n = {} rate {got}, want n = {n} rate {r}",
                p.wits()
            )
        })?;
    }
    Ok("t = 2..10 sizes and two-decimal rates all match".into())
}

fn suffix_stability() -> Outcome {
    let plans = plan_uniform_series(2, &pow2(56), 11).map_err(|e| e.to_string())?;
    let h9 = &plans[8].h;
    let h10 = &plans[9].h;
    let h11 = &plans[10].h;
    check(h9[1..] == h10[2..], || {
        format!("t = 9 tail {:?} vs t = 10 tail {:?}", &h9[1..], &h10[2..])
    })?;
    check(h11[2..] == h10[1..], || {
        format!("t = 11 tail {:?} vs t = 10 tail {:?}", &h11[2..], &h10[1..])
    })?;
    for t in 2..=11 {
        let p = &plans[t - 1];
        let prev = &plans[t - 2];
        check(p.h[1..] == plans[10].h[11 - t + 1..], || {
            format!("t = {t}: h_t..h_2 differ from the t = 11 tail")
        })?;
        check(p.h.len() == prev.h.len() + 1, || "length".into())?;
    }
    let literal = h9[..] == h10[1..];
    Ok(format!(
        "h_t..h_2 identical across t = 2..11 (t = 10 tail {:?} reappears in t = 11); \
         full t = 9 list equal to last 9 of t = 10: {literal} (h_1 differs: {} vs {})",
        &h10[1..],
        h9[0],
        h10[1]
    ))
}

fn larger_symbols() -> Outcome {
    let p = plan(3, &[pow2(56), pow2(56)]).map_err(|e| e.to_string())?;
    check(p.wits() <= 96, || format!("n = {} exceeds 96", p.wits()))?;
    let report = PlanReport::new(p.clone());
    let note = report.discrepancy();
    check(p.wits() == 96 || note.is_some(), || {
        "size differs from the published 96 but no discrepancy is reported".into()
    })?;
    Ok(format!(
        "h = {:?}, n = {}; {}",
        p.h,
        p.wits(),
        note.unwrap_or_else(|| "matches the published size".into())
    ))
}

fn combinadic() -> Outcome {
    let u: WeightedBitVector = "0101100".parse().map_err(|e| format!("{e:?}"))?;
    check(rank(&u) == big(15), || format!("rank = {}", rank(&u)))?;
    let back = unrank(&big(15), 7, 3).map_err(|e| e.to_string())?;
    check(back == u, || format!("unrank(15) = {back}"))?;
    let mut checked = 0u64;
    for n in 0..=12usize {
        for k in 0..=n {
            // independent oracle: all weight-k vectors sorted by their
            // descending position lists, compared colexicographically
            let mut all: Vec<Vec<usize>> = (0u32..1 << n)
                .filter(|x| x.count_ones() as usize == k)
                .map(|x| {
                    let mut pos: Vec<usize> = (0..n).filter(|&i| x >> i & 1 == 1).collect();
                    pos.reverse();
                    pos
                })
                .collect();
            all.sort();
            check(
                all.len() == binomial(n as u64, k as u64).to_usize().unwrap(),
                || format!("C({n},{k}) mismatch"),
            )?;
            for (i, pos) in all.iter().enumerate() {
                let w = WeightedBitVector::from_positions(n, pos).map_err(|e| e.to_string())?;
                check(rank(&w) == big(i as u64), || {
                    format!("rank of {w} is not {i}")
                })?;
                let r = unrank(&big(i as u64), n, k).map_err(|e| e.to_string())?;
                check(r == w, || format!("unrank({i}, {n}, {k}) = {r}, want {w}"))?;
                checked += 1;
            }
            check(unrank(&binomial(n as u64, k as u64), n, k).is_err(), || {
                format!("unrank(C({n},{k})) accepted")
            })?;
        }
    }
    Ok(format!(
        "rank(0101100) = 15; bijection verified on {checked} vectors, n <= 12"
    ))
}

fn random_lifecycles() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let codes = 120;
    let mut writes = 0u64;
    for c in 0..codes {
        let m = rng.gen_range(2..=3u32);
        let t = rng.gen_range(1..=6usize);
        let v: Vec<BigUint> = (0..t).map(|_| big(rng.gen_range(2..=1u64 << 16))).collect();
        let p = plan(m, &v).map_err(|e| format!("code {c}: {e}"))?;
        let mut dev = Device::new(p.clone()).map_err(|e| e.to_string())?;
        let mut g = 1usize;
        while g <= t {
            let msg = big(rng.gen_range(0..v[g - 1].to_u64().unwrap()));
            let before = dev.wits().bits().to_vec();
            let written = dev
                .write(&msg)
                .map_err(|e| format!("code {c} gen {g}: {e}"))?;
            writes += 1;
            check(written == g, || {
                format!("code {c}: wrote generation {written}, want {g}")
            })?;
            let after = dev.wits().bits();
            check(before.iter().zip(after).all(|(&b, &a)| !b || a), || {
                format!("code {c}: a wit was cleared")
            })?;
            let r = dev.read().map_err(|e| e.to_string())?;
            check(r.generation == g && r.message == msg, || {
                format!(
                    "code {c}: read ({}, {}), want ({g}, {msg})",
                    r.generation, r.message
                )
            })?;
            // a zero first message leaves the memory fresh
            if !(g == 1 && msg == big(0)) {
                g += 1;
            }
        }
        let err = dev.write(&big(0)).err();
        check(err.map(|e| e.kind()) == Some(ErrorKind::Exhausted), || {
            format!("code {c}: write past the last generation not refused")
        })?;
        let reloaded = Device::parse_state(&dev.to_state_string()).map_err(|e| e.to_string())?;
        check(reloaded.wits().bits() == dev.wits().bits(), || {
            format!("code {c}: state roundtrip")
        })?;
    }
    Ok(format!(
        "{codes} codes, {writes} writes, 0 write-once violations, all reads exact"
    ))
}

fn small_code_exhaustive() -> Outcome {
    let p = plan(2, &[big(7), big(2)]).map_err(|e| e.to_string())?;
    check(p.h == [2, 1], || format!("h = {:?}", p.h))?;
    // reachable states of the <7,2>/4 code, listed by hand from the rules:
    // first write: k = 0 then one nonzero symbol, rightmost slot first
    let first: [[u32; 2]; 7] = [[0, 0], [0, 1], [0, 2], [0, 3], [1, 0], [2, 0], [3, 0]];
    let second = |s: [u32; 2], m2: u32| -> [u32; 2] {
        let z = s.iter().position(|&x| x == 0).unwrap();
        let mut out = [3, 3];
        out[z] = m2 + 1;
        out
    };
    let mut seen: HashMap<Vec<u32>, (usize, u64)> = HashMap::new();
    let mut agree = 0;
    for m1 in 0..7u64 {
        for m2 in 0..2u64 {
            let mut dev = Device::new(p.clone()).map_err(|e| e.to_string())?;
            dev.write(&big(m1)).map_err(|e| e.to_string())?;
            let s1 = first[m1 as usize];
            let img = dev.image().map_err(|e| e.to_string())?;
            check(img.symbols() == s1, || {
                format!("M1 = {m1}: {:?} vs {s1:?}", img.symbols())
            })?;
            seen.insert(s1.to_vec(), (1, m1));
            dev.write(&big(m2)).map_err(|e| e.to_string())?;
            let (s2, g2) = if m1 == 0 {
                (first[m2 as usize], 1)
            } else {
                (second(s1, m2 as u32), 2)
            };
            let img = dev.image().map_err(|e| e.to_string())?;
            check(img.symbols() == s2, || {
                format!("({m1}, {m2}): {:?} vs {s2:?}", img.symbols())
            })?;
            let r = dev.read().map_err(|e| e.to_string())?;
            check(r.generation == g2 && r.message == big(m2), || {
                format!("({m1}, {m2}): read ({}, {})", r.generation, r.message)
            })?;
            if let Some(&prev) = seen.get(s2.as_slice()) {
                check(prev == (g2, m2), || format!("state {s2:?} is ambiguous"))?;
            }
            seen.insert(s2.to_vec(), (g2, m2));
            agree += 1;
        }
    }
    Ok(format!(
        "{agree}/14 sequences agree; {} distinct reachable states",
        seen.len()
    ))
}

fn random_cardinality(rng: &mut ChaCha8Rng, max_bits: u32) -> BigUint {
    let bits = rng.gen_range(1..=max_bits);
    let hi = if bits == 64 { u64::MAX } else { 1u64 << bits };
    big(rng.gen_range(2..=hi.max(2)))
}

fn half_optimal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0008);
    let mut cases = vec![vec![pow2(56); 10]];
    for _ in 0..200 {
        let t = rng.gen_range(1..=8usize);
        cases.push((0..t).map(|_| random_cardinality(&mut rng, 40)).collect());
    }
    let mut worst = f64::INFINITY;
    for v in &cases {
        let p = plan(2, v).map_err(|e| e.to_string())?;
        let b = check_half_optimal(&p);
        check(p.symbols() <= b.z, || {
            format!("{:?}: h1 = {} > Z = {}", v, p.symbols(), b.z)
        })?;
        check(b.rate >= 0.5 * b.optimal_rate_bound - 1e-12, || {
            format!(
                "{v:?}: rate {} below half of {}",
                b.rate, b.optimal_rate_bound
            )
        })?;
        worst = worst.min(b.rate / b.optimal_rate_bound);
    }
    let first = check_half_optimal(&plan(2, &cases[0]).unwrap());
    Ok(format!(
        "{} codes; example h1 = {} <= Z = {}; worst rate/bound = {worst:.3}",
        cases.len(),
        first.h1,
        first.z
    ))
}

fn lower_bound_examples() -> Outcome {
    let z = z_bound(&[big(26), big(26)]);
    check(z == 7, || format!("Z(26, 26) = {z}"))?;
    for v in 2u64..=1 << 20 {
        let want = 64 - (v - 1).leading_zeros() as u64;
        let got = delta(&big(v), 0);
        check(got == want, || {
            format!("delta({v}, 0) = {got}, want {want}")
        })?;
    }
    Ok("Z(26, 26) = 7; delta(v, 0) = ceil(log2 v) for v in 2..=2^20".into())
}

fn rate_comparison() -> Outcome {
    for t in 1..=10_000u64 {
        let r = fiat_shamir_rate(t);
        check(r < 1.59, || {
            format!("three-write-per-two-wits rate {r} at t = {t}")
        })?;
    }
    for t in 2..=50u64 {
        let r = rivest_shamir_linear_rate(t).unwrap();
        check(r < 2.0, || format!("linear rate {r} at t = {t}"))?;
    }
    let tmax = 1100;
    let rows = rate_curves(&pow2(32), tmax).map_err(|e| e.to_string())?;
    let mut margin = f64::INFINITY;
    let mut cohen_points = 0;
    for row in rows.iter().filter(|r| r.t >= 10) {
        let best = row.best_comparator();
        check(row.position_modulation > best, || {
            format!("t = {}: {} <= {best}", row.t, row.position_modulation)
        })?;
        margin = margin.min(row.position_modulation - best);
        cohen_points += row.cohen.is_some() as usize;
    }
    let at = |t: usize| rows[t - 1].position_modulation;
    Ok(format!(
        "position modulation ahead for t = 10..={tmax} ({cohen_points} coset points), \
         min margin {margin:.3}; rate {:.3} at t = 10, {:.3} at t = 1000",
        at(10),
        at(1000)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("example code <2^56>^10", example_one),
        ("uniform table t = 2..10", table_sizes),
        ("suffix stability", suffix_stability),
        ("m = 3, two writes", larger_symbols),
        ("combinadic rank/unrank", combinadic),
        ("random device lifecycles", random_lifecycles),
        ("<7,2>/4 exhaustive", small_code_exhaustive),
        ("half-optimality", half_optimal),
        ("lower bound", lower_bound_examples),
        ("rate comparison", rate_comparison),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
