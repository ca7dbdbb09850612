//! Acceptance criteria. Each prints one PASS/FAIL line; the test fails if any
//! criterion does.

use std::time::{Duration, Instant};

use heavy::contfrac::{CFExpansion, Rotation};
use heavy::dimension::{
    almost_sure_constant, closed_form_period2, construct_cf_for_dimension, dim_estimate_rotation,
    lower_bound_process,
};
use heavy::discrepancy::xi_sums;
use heavy::exactnum::{parse_surd, BigRational, QuadSurd, DEFAULT_BITS};
use heavy::figure::figure_batch;
use heavy::heavyset::{
    k_heavy_criterion, k_heavy_simulate, partial_sums, rational_heavy_set,
    rational_heavy_set_renormalized, strictly_heavy_point, word_reduce, Interval, IntervalSet,
    SignedWord, Verdict,
};
use heavy::renorm::run;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err(e: heavy::Error) -> String {
    e.to_string()
}

fn reduced(qmax: u64) -> impl Iterator<Item = (u64, u64)> {
    (2..=qmax).flat_map(|q| (1..q).filter(move |p| p.gcd(&q) == 1).map(move |p| (p, q)))
}

/// `2q²` points of `(0, 1/2)` that avoid every multiple of `1/(4q)`.
fn samples(q: u64) -> Vec<QuadSurd> {
    let den = (8 * q * q) as i64;
    (0..2 * q * q)
        .map(|j| QuadSurd::ratio(2 * j as i64 + 1, den))
        .collect()
}

fn c1_dimension_golden() -> Check {
    let golden = 3f64.ln() / (3.0 + 2.0 * 2f64.sqrt()).ln();
    let r = Rotation::parse("[(2)]").map_err(err)?;
    let est = dim_estimate_rotation(&r, 20, DEFAULT_BITS).map_err(err)?;
    let v = est.last().value.mid_f64();
    ensure(
        (v - golden).abs() < 1e-3,
        format!("estimate {v} vs {golden}"),
    )?;
    let cf = closed_form_period2(1, 2).map_err(err)?.value.mid_f64();
    ensure(
        (cf - golden).abs() < 1e-12,
        format!("closed form {cf} vs {golden}"),
    )?;
    Ok(format!(
        "depth 20 value {v:.15}, closed form {cf:.15}, log3/log(3+2√2) = {golden:.15}"
    ))
}

fn c2_degenerate_structure() -> Check {
    let r = Rotation::parse("[3;(2)]").map_err(err)?;
    for d in 1..=8 {
        let s = run(&r, d).map_err(err)?;
        ensure(
            s.depth() == d,
            format!("reached depth {} of {d}", s.depth()),
        )?;
        ensure(
            s.complete_count() == 1,
            format!("{} complete islands at depth {d}", s.complete_count()),
        )?;
    }
    let target = parse_surd("(2 - sqrt(2))/4").map_err(err)?;
    let p = strictly_heavy_point(&r, 1e-10).map_err(err)?;
    ensure(
        p.enclosure.contains_surd(&target),
        "enclosure misses (2-√2)/4",
    )?;
    ensure(
        p.enclosure.width_f64() <= 1e-10,
        format!("width {}", p.enclosure.width_f64()),
    )?;
    Ok(format!(
        "one complete island at depths 1..8; point width {:.2e}",
        p.enclosure.width_f64()
    ))
}

fn c3_oracle_equivalence() -> Check {
    let (mut fractions, mut points, mut mismatches) = (0, 0, 0);
    for (p, q) in reduced(50) {
        let grid = rational_heavy_set(p, q).map_err(err)?;
        let hybrid = rational_heavy_set_renormalized(p, q).map_err(err)?;
        for x in samples(q) {
            points += 1;
            if grid.contains(&x) != hybrid.contains(&x) {
                mismatches += 1;
            }
        }
        fractions += 1;
    }
    ensure(mismatches == 0, format!("{mismatches} mismatches"))?;
    Ok(format!(
        "{fractions} fractions, {points} points, 0 mismatches"
    ))
}

/// Heavy at `x` by direct summation over one period.
fn brute_heavy(x: &QuadSurd, p: u64, q: u64) -> bool {
    let alpha = QuadSurd::ratio(p as i64, q as i64);
    partial_sums(x, &alpha, q).unwrap().iter().all(|&s| s >= 0)
}

fn c4_rational_goldens() -> Check {
    let r = |a: i64, b: i64| QuadSurd::ratio(a, b);
    let first = |s: &IntervalSet| s.intervals().first().cloned();
    let h2 = rational_heavy_set(1, 2).map_err(err)?;
    ensure(
        h2.intervals() == [Interval::closed(r(0, 1), r(1, 2))],
        format!("H_1/2 = {h2}"),
    )?;
    let mut notes = Vec::new();
    for (p, q, lead) in [(1u64, 3u64, r(1, 6)), (2, 5, r(1, 10))] {
        let h = rational_heavy_set(p, q).map_err(err)?;
        ensure(
            first(&h) == Some(Interval::closed(r(0, 1), lead.clone())),
            format!("H_{p}/{q} = {h}"),
        )?;
        // every grid point and cell midpoint against direct summation
        for j in 0..=(8 * q) {
            let x = r(j as i64, (16 * q) as i64);
            ensure(
                h.contains(&x) == brute_heavy(&x, p, q),
                format!("H_{p}/{q} disagrees with summation at {x}"),
            )?;
        }
        notes.push(format!("H_{p}/{q} = {h}"));
    }
    let half = r(1, 2);
    let mut pairs = 0;
    for (p, q) in reduced(50) {
        let a = rational_heavy_set(p, q).map_err(err)?;
        let b = rational_heavy_set(q - p, q).map_err(err)?;
        for x in samples(q) {
            ensure(
                a.contains(&x) == b.contains(&(&half - &x)),
                format!("mirror fails for {p}/{q} at {x}"),
            )?;
        }
        pairs += 1;
    }
    Ok(format!(
        "H_1/2 = {h2}; {}; mirror holds for {pairs} fractions",
        notes.join("; ")
    ))
}

fn c5_discrepancy() -> Check {
    let alpha = parse_surd("sqrt(2) - 1").map_err(err)?;
    let s = xi_sums(&alpha, 33_460, &QuadSurd::zero()).map_err(err)?;
    ensure(s.values.len() == 33_461, "wrong length")?;
    ensure(
        s.min_value >= 0,
        format!("ξ({}) = {}", s.argmin, s.min_value),
    )?;
    Ok(format!(
        "min ξ = {} at n = {}, ξ(33460) = {}",
        s.min_value, s.argmin, s.values[33_460]
    ))
}

/// Eventually periodic expansion with `a_1, a_3, …` divisible by `k`, or with
/// exactly one of them (inside the first period) broken.
fn k_expansion(rng: &mut ChaCha8Rng, k: u64, violate: bool) -> CFExpansion {
    let pre = 2 * rng.gen_range(0..=1usize);
    let per = 2 * rng.gen_range(1..=2usize);
    let mut all: Vec<u64> = (0..pre + per)
        .map(|i| {
            if i % 2 == 0 {
                k * rng.gen_range(1..=3)
            } else {
                rng.gen_range(1..=5)
            }
        })
        .collect();
    if violate {
        let i = 2 * rng.gen_range(0..(pre + per) / 2);
        all[i] = k * rng.gen_range(0..=2) + rng.gen_range(1..k);
    }
    let period = all.split_off(pre);
    CFExpansion::periodic(all, period).unwrap()
}

fn c6_k_heavy() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b68);
    let mut max_witness = 0;
    for i in 0..100 {
        let k = 2 + (i % 3) as u64;
        let violate = i >= 50;
        let cf = k_expansion(&mut rng, k, violate);
        let crit = k_heavy_criterion(&cf, k).map_err(err)?;
        ensure(
            crit.holds != violate,
            format!("criterion misjudges {cf} (k = {k})"),
        )?;
        let alpha = cf.value().map_err(err)?;
        let n = if violate { 1_000_000 } else { 10_000 };
        match k_heavy_simulate(&alpha, k, n).map_err(err)? {
            Verdict::NotHeavy(w) if violate => max_witness = max_witness.max(w),
            Verdict::Heavy(_) if !violate => {}
            v => return Err(format!("{cf} (k = {k}): {v}")),
        }
    }
    Ok(format!(
        "50 satisfying α clean to N = 10^4; 50 violating α have witnesses (largest n = {max_witness})"
    ))
}

fn c7_constant() -> Check {
    let c = almost_sure_constant().map_err(err)?;
    let lo = BigRational::new(285.into(), 10_000.into());
    let hi = BigRational::new(287.into(), 10_000.into());
    let floor = BigRational::new(28.into(), 1000.into());
    ensure(
        *c.lo() > lo && *c.hi() < hi,
        format!("[{}, {}]", c.lo_f64(), c.hi_f64()),
    )?;
    ensure(*c.lo() > floor, "lower end not above 0.028")?;
    Ok(format!("[{:.9}, {:.9}]", c.lo_f64(), c.hi_f64()))
}

fn c8_words() -> Check {
    let len = 14;
    let mut nonneg = 0;
    for bits in 0..(1u64 << len) {
        let w = SignedWord::from_bits(bits, len);
        let letters: Vec<i64> = (0..len)
            .map(|i| if bits >> i & 1 == 1 { 1 } else { -1 })
            .collect();
        let direct = letters
            .iter()
            .scan(0, |s, &l| {
                *s += l;
                Some(*s)
            })
            .min()
            .unwrap()
            >= 0;
        let reduced_ok = !word_reduce(&w).to_string().contains('B');
        ensure(
            direct == w.is_prefix_nonnegative() && direct == reduced_ok,
            format!("disagreement on {w}"),
        )?;
        nonneg += direct as u32;
    }
    Ok(format!(
        "all 16384 words agree ({nonneg} prefix-nonnegative)"
    ))
}

fn c9_figure() -> Check {
    let fig = figure_batch(100, true).map_err(err)?;
    ensure(
        fig.strips.len() == 3043,
        format!("{} strips", fig.strips.len()),
    )?;
    let empty = fig.empty_strips();
    ensure(empty.is_empty(), format!("empty strips: {empty:?}"))?;
    ensure(
        fig.svg.matches("data-alpha=").count() == 3043,
        "SVG strip count differs",
    )?;
    Ok(format!(
        "3043 nonempty strips, {} bytes of SVG",
        fig.svg.len()
    ))
}

fn c10_substitutes() -> Check {
    let mut worst = 0f64;
    for t in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let c = construct_cf_for_dimension(t, 80).map_err(err)?;
        ensure(
            c.error <= 0.02,
            format!("target {t}: error {} at depth {}", c.error, c.depth),
        )?;
        worst = worst.max(c.error);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x1b);
    let mut steps = 0;
    for _ in 0..1000 {
        let len = rng.gen_range(3..=60);
        let prefix: Vec<u64> = (0..len)
            .map(|_| {
                if rng.gen_bool(0.3) {
                    1
                } else {
                    rng.gen_range(1..=12)
                }
            })
            .collect();
        let trace = lower_bound_process(&prefix, 64).map_err(err)?;
        for (i, s) in trace.steps.iter().enumerate() {
            let i = i + 1;
            ensure(
                i < s.consumed && s.consumed <= 3 * i + 1,
                format!("m({i}) = {} on {prefix:?}", s.consumed),
            )?;
        }
        steps += trace.steps.len();
    }
    Ok(format!(
        "construction error ≤ {worst:.2e} for all five targets; {steps} lower-bound steps within bounds"
    ))
}

#[test]
fn acceptance_criteria() {
    type Criterion = (u32, &'static str, Option<Duration>, fn() -> Check);
    let secs = |s| Some(Duration::from_secs(s));
    let criteria: [Criterion; 10] = [
        (1, "dimension golden value", secs(1), c1_dimension_golden),
        (2, "degenerate structure", secs(1), c2_degenerate_structure),
        (3, "oracle equivalence", secs(30), c3_oracle_equivalence),
        (
            4,
            "rational goldens and mirror symmetry",
            None,
            c4_rational_goldens,
        ),
        (5, "discrepancy nonnegativity", secs(10), c5_discrepancy),
        (6, "k-heavy cross-validation", None, c6_k_heavy),
        (7, "constant certification", None, c7_constant),
        (8, "word-reduction oracle", None, c8_words),
        (9, "figure batch", secs(60), c9_figure),
        (10, "property substitutes", None, c10_substitutes),
    ];
    let mut failed = Vec::new();
    for (id, name, limit, f) in criteria {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if took > l => Err(format!("took {took:.2?}, limit {l:.0?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail} ({took:.2?})"),
            Err(detail) => {
                println!("criterion {id:>2} FAIL  {name}: {detail} ({took:.2?})");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
