//! Acceptance scenarios, one line per criterion. Every run uses a 1024-bit
//! precision ceiling.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_integer::Roots;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use nilseq_core::automaton::{
    baum_sweet, constant, contains_pattern, finite_set_acceptor, from_prohibited_patterns, kernel, powers_acceptor,
    thue_morse,
};
use nilseq_core::genpoly::{
    equidistribution_test, floor_poly_mod, kernel_census, parse_gp, weak_periodicity_search, GpSequence, IntSequence,
    WeakPeriodicity,
};
use nilseq_core::ip::{contains_fs, power_generators};
use nilseq_core::numeric::{ExactReal, PrecisionPolicy};
use nilseq_core::orbit::{compare_orbit, heisenberg_fracpart, residue_indicator, TorusSkewSystem};
use nilseq_core::recurrence::{
    best_approximations, cubic_terms, fibonacci_scan, mwzor_checks, pisot_cubic_check, pisot_gp_set, term_checks,
    PisotThreshold, QuadraticParams,
};
use nilseq_core::sparsity::{
    classify, ips_witness, normalize_arith_progression, BasicSet, Classification, Counter, VerySparseDecomposition,
};
use nilseq_core::{Dfao, DigitWord};

type Check = Result<String, Box<dyn std::error::Error>>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+).into());
        }
    };
}

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::with_max_bits(1024)
}

fn word(s: &str) -> DigitWord {
    DigitWord::parse(2, s).expect("binary word")
}

fn pattern(sets: &[&str]) -> VerySparseDecomposition {
    let sets = sets.iter().map(|s| BasicSet::parse(2, s).expect("basic set")).collect();
    VerySparseDecomposition::new(2, sets)
}

fn sorted_difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let bs: BTreeSet<u64> = b.iter().copied().collect();
    a.iter().copied().filter(|x| !bs.contains(x)).collect()
}

fn c1_thue_morse_kernel() -> Check {
    let tm = thue_morse();
    let k = kernel(&tm)?;
    ensure!(k.size == 2, "kernel has {} classes", k.size);
    let mut seen = BTreeSet::new();
    for t in 0..=6u32 {
        for r in 0..1u64 << t {
            let row: Vec<u32> = (0..256u64).map(|n| tm.eval((n << t) + r)).collect();
            seen.insert(row);
        }
    }
    ensure!(seen.len() == 2, "prefix oracle sees {} subsequences", seen.len());
    Ok("2 classes; prefix oracle over 127 subsequences agrees".into())
}

fn c2_powers_of_two() -> Check {
    let a = powers_acceptor(2);
    let Classification::VerySparse(d) = classify(&a)? else {
        return Err("not very sparse".into());
    };
    ensure!(d.rank == 1, "rank {}", d.rank);
    let members = d.members_below(1 << 40);
    let expected: BTreeSet<u128> = (0..40).map(|l| 1u128 << l).collect();
    ensure!(members == expected, "enumeration differs from {{2^l}}");
    let mut counter = Counter::new(&a)?;
    for j in 0..=30usize {
        let nu = counter.count_below_power(j);
        ensure!(nu == j as u128, "nu(2^{j}) = {nu}");
        ensure!(d.count_between(0, 1 << j) == j, "enumeration count at 2^{j}");
    }
    let brute = (0..1u64 << 20).filter(|&n| a.eval(n) == 1).count();
    ensure!(brute == 20, "brute nu(2^20) = {brute}");
    Ok("VerySparse rank 1; 40 members below 2^40; nu(2^j) = j for j <= 30".into())
}

fn c3_baum_sweet_ips() -> Check {
    let bs = baum_sweet();
    ensure!(
        matches!(classify(&bs)?, Classification::ConditionI(_)),
        "not Condition (i)"
    );
    let horizon = 100_000u64;
    let w = ips_witness(&bs, horizon, 10)?;
    let k = BigUint::from(w.base);
    let kl = k.pow(w.l as u32).to_u128().ok_or("k^l too large")?;
    let km = k.pow(w.m as u32).to_u128().ok_or("k^m too large")?;
    let (p, r1, r2) = (
        w.p.to_u128().ok_or("p")?,
        w.r1.to_u128().ok_or("r1")?,
        w.r2.to_u128().ok_or("r2")?,
    );
    let bad = (0..=horizon as u128).into_par_iter().find_first(|&n| {
        let x = bs.eval_u128(kl * n + p);
        x != bs.eval_u128(km * n + r1) || x != bs.eval_u128(km * n + r2)
    });
    ensure!(bad.is_none(), "identity fails at n = {bad:?}");
    let mut sums = 0usize;
    for t in 1..=10usize {
        for mask in 1u32..1 << t {
            let mut v = w.shifts[t].clone();
            for (i, g) in w.generators.iter().take(t).enumerate() {
                if mask >> i & 1 == 1 {
                    v += g;
                }
            }
            ensure!(bs.eval_big(&v) == 1, "shifted sum {v} is not a member");
            sums += 1;
        }
    }
    Ok(format!(
        "ConditionI; identities (l, m, p, r1, r2) = ({}, {}, {p}, {r1}, {r2}) hold for n <= 10^5; {sums} shifted sums are members",
        w.l, w.m
    ))
}

fn growth_suite() -> Vec<(&'static str, Dfao)> {
    let to = |d: VerySparseDecomposition| d.to_acceptor().expect("pattern acceptor");
    vec![
        ("powers of 2", powers_acceptor(2)),
        (
            "finite {5, 9, 12}",
            finite_set_acceptor(2, &[5, 9, 12]).expect("finite"),
        ),
        ("1 0* 1 0* 1", to(pattern(&["1 (0)* 1 (0)* 1"]))),
        ("1 (01)* 1 0*", to(pattern(&["1 (01)* 1 (0)*"]))),
        ("1 1*", to(pattern(&["1 (1)*"]))),
        ("empty", constant(2, 0)),
        ("Baum-Sweet", baum_sweet()),
        ("Thue-Morse", thue_morse()),
        ("11-free", from_prohibited_patterns(2, &[word("11")]).expect("11-free")),
        ("contains 11", contains_pattern(2, &word("11")).expect("contains 11")),
    ]
}

fn c4_growth_gap() -> Check {
    let upper = 21u128.pow(8);
    let lower = 2f64.powf(0.2 * 20.0);
    let mut parts = Vec::new();
    for (name, a) in growth_suite() {
        let nu = Counter::new(&a)?.count_below_power(20);
        let brute = (0..1u64 << 20).into_par_iter().filter(|&n| a.eval(n) == 1).count() as u128;
        ensure!(nu == brute, "{name}: counter {nu} vs brute {brute}");
        let sparse = classify(&a)?.is_very_sparse();
        if sparse {
            ensure!(nu <= upper, "{name}: VerySparse with nu(2^20) = {nu}");
        } else {
            ensure!(nu as f64 >= lower, "{name}: ConditionI with nu(2^20) = {nu}");
        }
        ensure!(!(nu > upper && (nu as f64) < lower), "{name} lies in the gap");
        parts.push(format!("{name}: {} {nu}", if sparse { "VS" } else { "CI" }));
    }
    Ok(parts.join("; "))
}

/// `‖nφ‖ < 1/(2n)` in integers: some `m ≡ n (mod 2)` has `|n√5 − m| < 1/n`.
fn fib_oracle(n: u64) -> bool {
    if n == 0 {
        return true;
    }
    let n = n as u128;
    let n4x5 = 5 * n * n * n * n;
    let lo = (5 * n * n).sqrt();
    [lo, lo + 1].into_iter().filter(|m| m % 2 == n % 2).any(|m| {
        if m * m <= 5 * n * n {
            n4x5 < (m * n + 1) * (m * n + 1)
        } else {
            m * n >= 1 && (m * n - 1) * (m * n - 1) < n4x5
        }
    })
}

fn c5_fibonacci() -> Check {
    let params = QuadraticParams::new(1)?;
    let horizon = 1_000_000u64;
    let hi = fibonacci_scan(&params, horizon, &policy())?;
    let lo = fibonacci_scan(&params, horizon, &PrecisionPolicy::with_max_bits(256))?;
    ensure!(
        hi.head == lo.head && hi.extra == lo.extra,
        "head differs between 256 and 1024 bits"
    );
    let oracle: Vec<u64> = (0..=horizon).into_par_iter().filter(|&n| fib_oracle(n)).collect();
    ensure!(hi.members == oracle, "members differ from the integer oracle");
    let mut fib = vec![0u64, 1];
    while fib[fib.len() - 1] + fib[fib.len() - 2] <= horizon {
        fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
    }
    fib.dedup();
    let head = sorted_difference(&fib, &oracle);
    let extra = sorted_difference(&oracle, &fib);
    ensure!(hi.head == head, "head {:?} vs brute force {head:?}", hi.head);
    ensure!(
        extra.is_empty() && hi.extra.is_empty(),
        "members outside the recurrence: {extra:?}"
    );
    let checks = term_checks(&params, &BigInt::from(10u32).pow(12), &policy())?;
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut fi = (0f64, 1f64);
    let mut worst = 0f64;
    for i in 0..=40usize {
        if i >= 20 {
            let c = checks.iter().find(|c| c.index == i).ok_or("missing term check")?;
            ensure!(c.term == format!("{}", fi.0 as u64), "term {i} is {}", c.term);
            ensure!(
                (c.normalized - 0.4472).abs() <= 1e-4,
                "n_{i}|n_i phi| = {}",
                c.normalized
            );
            let closed = fi.0 * phi.powi(-(i as i32));
            ensure!(
                (c.normalized - closed).abs() < 1e-9,
                "term {i}: {} vs {closed}",
                c.normalized
            );
            worst = worst.max((c.normalized - 0.4472).abs());
        }
        fi = (fi.1, fi.0 + fi.1);
    }
    Ok(format!(
        "{} members = {} Fibonacci numbers minus head {:?}; same at 256 bits; max |n_i||n_i phi|| - 0.4472| = {worst:.2e}",
        hi.members.len(),
        fib.len(),
        hi.head
    ))
}

fn c6_pisot() -> Check {
    let qmax = 100_000u64;
    let p = pisot_cubic_check(1, 0)?;
    let flagged: Vec<u64> = best_approximations(&p, qmax)?.iter().map(|r| r.q).collect();
    let terms: Vec<u64> = cubic_terms(1, 0, 100)
        .iter()
        .filter_map(|t| t.to_u64())
        .filter(|&t| (1..=qmax).contains(&t))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let (only_flagged, only_terms) = (sorted_difference(&flagged, &terms), sorted_difference(&terms, &flagged));
    let tail = qmax / 100;
    ensure!(
        only_flagged.iter().chain(&only_terms).all(|&q| q < tail),
        "best approximations and R_n disagree above {tail}: {only_flagged:?} / {only_terms:?}"
    );
    let ratios = mwzor_checks(&p, 5, 20)?;
    ensure!(ratios.len() == 16, "{} ratio checks", ratios.len());
    for r in &ratios {
        ensure!((0.99..=1.01).contains(&r.ratio), "ratio {} at n = {}", r.ratio, r.n);
    }
    let members = |threshold: &PisotThreshold| -> Result<Vec<u64>, nilseq_core::Error> {
        let gp = pisot_gp_set(&p, threshold);
        let pol = policy();
        let hits: Vec<(u64, bool)> = (1..=qmax)
            .into_par_iter()
            .map(|q| Ok((q, gp.predicate.eval(&BigInt::from(q), &pol)?)))
            .collect::<Result<_, nilseq_core::Error>>()?;
        Ok(hits.into_iter().filter(|h| h.1).map(|h| h.0).collect())
    };
    let gp = members(&PisotThreshold::default())?;
    let (only_gp, only_best) = (sorted_difference(&gp, &flagged), sorted_difference(&flagged, &gp));
    ensure!(
        only_gp.iter().chain(&only_best).all(|&q| q < tail),
        "GP predicate and best approximations disagree above {tail}: {only_gp:?} / {only_best:?}"
    );
    let literal = members(&PisotThreshold::Literal)?;
    Ok(format!(
        "{} best approximations; vs R_n: +{only_flagged:?} -{only_terms:?}; ratios in [{:.5}, {:.5}]; GP (kappa 3/2) vs flags: +{only_gp:?} -{only_best:?}; literal h^2 < 1/g: {} members, {} flags missed",
        flagged.len(),
        ratios.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min),
        ratios.iter().map(|r| r.ratio).fold(0.0, f64::max),
        literal.len(),
        sorted_difference(&flagged, &literal).len(),
    ))
}

/// `⌊√2n² + n/3⌋ mod 2` in integers: `⌊(⌊3√2n²⌋ + n)/3⌋`.
fn skew_oracle(n: u64) -> u64 {
    let n = n as u128;
    let a = (18 * n * n * n * n).sqrt();
    (((a + n) / 3) % 2) as u64
}

fn c7_skew() -> Check {
    let pol = policy();
    let coeffs = vec![
        ExactReal::int(0),
        ExactReal::rational(num_rational::BigRational::new(1.into(), 3.into())),
        ExactReal::int(2).sqrt()?,
    ];
    let sys = TorusSkewSystem::from_polynomial(&coeffs, 2)?;
    let z = sys.start(&pol)?;
    let cmp = compare_orbit(&sys, &z, 10_000, &pol)?;
    ensure!(
        cmp.max_discrepancy <= 2f64.powi(-40),
        "discrepancy {}",
        cmp.max_discrepancy
    );
    let n_max = 100_000u64;
    let f = floor_poly_mod(&coeffs, 2, pol)?;
    let vals = f.prefix(n_max + 1)?;
    let bad = (0..=n_max).into_par_iter().find_first(|&n| {
        let r = vals[n as usize];
        r as u64 != skew_oracle(n) || (residue_indicator(&sys, &z, r as u64, n, &pol) != Ok(1))
    });
    ensure!(bad.is_none(), "residue mismatch at n = {bad:?}");
    Ok(format!(
        "orbit vs closed form: max discrepancy {:.1e}, {} exact matches for n <= 10^4; residues match for n <= 10^5",
        cmp.max_discrepancy, cmp.exact_matches
    ))
}

fn c8_heisenberg() -> Check {
    let pol = policy();
    let (a, b) = (ExactReal::int(2).sqrt()?, ExactReal::int(3).sqrt()?);
    let bad = (0..=10_000u64)
        .into_par_iter()
        .map(|n| heisenberg_fracpart(&a, &b, n, &pol).map(|h| (n, h.agree)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .find(|h| !h.1);
    ensure!(bad.is_none(), "routes disagree at n = {:?}", bad.map(|h| h.0));
    Ok("closed form and lattice reduction agree for 0 <= n <= 10^4".into())
}

fn c9_weak_periodicity() -> Check {
    let pol = policy();
    let rational = GpSequence::new(parse_gp("(floor (+ (* 3/7 n n) 1/2))")?, Some(5), pol);
    let w = weak_periodicity_search(&rational, 98, 512, 100_000)?;
    let WeakPeriodicity::Witness { q, r, s } = w else {
        return Err("no witness for (3/7)n^2 + 1/2".into());
    };
    ensure!(q <= 98 && r != s, "witness ({q}, {r}, {s})");
    let vals = rational.prefix(q * 2_000 + r.max(s) + 1)?;
    for n in 0..2_000u64 {
        ensure!(
            vals[(q * n + r) as usize] == vals[(q * n + s) as usize],
            "witness fails at n = {n}"
        );
    }
    let irrational = GpSequence::new(parse_gp("(floor (* (sqrt 2) n n))")?, Some(2), pol);
    let e = weak_periodicity_search(&irrational, 64, 512, 100_000)?;
    ensure!(e == WeakPeriodicity::Exhausted, "floor(sqrt2 n^2) mod 2 gave {e:?}");
    Ok(format!(
        "witness (q, r, s) = ({q}, {r}, {s}); floor(sqrt2 n^2) mod 2 exhausted"
    ))
}

fn c10_bfree() -> Check {
    let a = from_prohibited_patterns(2, &[word("11")])?;
    let gen = power_generators(4, 1, 16)?;
    let r = contains_fs(&a, &gen, 16)?;
    ensure!(
        r.holds && r.checked == 65535,
        "holds = {}, checked = {}",
        r.holds,
        r.checked
    );
    let bad = (1u64..1 << 16).find(|mask| {
        let v: u64 = (0..16).filter(|i| mask >> i & 1 == 1).map(|i| 4u64 << (2 * i)).sum();
        (v & (v >> 1)) != 0 || a.eval(v) != 1
    });
    ensure!(bad.is_none(), "sum for mask {bad:?} is not 11-free");
    Ok("65535 finite sums of 4^i (i <= 16) are 11-free".into())
}

fn c11_normal_form() -> Check {
    let d = pattern(&["1 (0)* 1 (0)* 1"]);
    let nf = normalize_arith_progression(&d)?;
    let bound = 1u128 << 40;
    let input = d.members_below(bound);
    let mut closed = BTreeSet::new();
    for a in 0..40u32 {
        for b in 0..40u32 {
            let v = (1u128 << (a + b + 2)) + (1u128 << (b + 1)) + 1;
            if v < bound {
                closed.insert(v);
            }
        }
    }
    ensure!(
        input == closed,
        "digit enumeration differs from 2^(a+b+2) + 2^(b+1) + 1"
    );
    let expected: BTreeSet<u128> = input.into_iter().filter(|x| x % nf.n == nf.r).collect();
    let got = nf.members_below(bound);
    ensure!(
        got == expected,
        "normal form has {} members, expected {}",
        got.len(),
        expected.len()
    );
    Ok(format!(
        "n = {}, r = {}, {} branches; {} members on [0, 2^40) match",
        nf.n,
        nf.r,
        nf.branches.len(),
        got.len()
    ))
}

fn c12_equidistribution() -> Check {
    let pol = policy();
    let n = 100_000u64;
    let e = parse_gp("(* (sqrt 2) n (floor (* (sqrt 3) n)))")?;
    let r = equidistribution_test(&e, 1, &ExactReal::int(1), n, 10, &pol)?;
    ensure!(r.star_discrepancy < 0.02, "star discrepancy {}", r.star_discrepancy);
    let s2 = 2f64.sqrt();
    let mut pts: Vec<f64> = (1..=n)
        .map(|m| {
            let fl = (3 * (m as u128) * (m as u128)).sqrt() as f64;
            let x = s2 * m as f64 * fl;
            x - x.floor()
        })
        .collect();
    pts.sort_by(f64::total_cmp);
    let len = pts.len() as f64;
    let oracle = pts
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i as f64 + 1.0) / len - x).max(x - i as f64 / len))
        .fold(0.0, f64::max);
    ensure!(
        (oracle - r.star_discrepancy).abs() < 1e-3,
        "f64 oracle {oracle} vs {}",
        r.star_discrepancy
    );
    let seq = GpSequence::new(
        parse_gp("(floor (* (sqrt 2) n (floor (* (sqrt 3) n))))")?,
        Some(10),
        pol,
    );
    let c = kernel_census(&seq, 2, 10, 32, 100_000_000)?;
    ensure!(c.distinct > 50, "{} kernel classes", c.distinct);
    Ok(format!(
        "D*_N = {:.5} (f64 oracle {oracle:.5}); {} kernel classes at depth 10",
        r.star_discrepancy, c.distinct
    ))
}

type Criterion = (&'static str, u64, fn() -> Check);

fn main() {
    let criteria: [Criterion; 12] = [
        ("Thue-Morse kernel has two classes", 1, c1_thue_morse_kernel),
        ("powers of 2 are very sparse of rank 1", 5, c2_powers_of_two),
        (
            "Baum-Sweet satisfies Condition (i) with an IPS witness",
            30,
            c3_baum_sweet_ips,
        ),
        ("growth gap on ten automata", 60, c4_growth_gap),
        ("Fibonacci numbers as a generalised polynomial set", 60, c5_fibonacci),
        ("Pisot recurrence and best approximations", 600, c6_pisot),
        ("skew torus represents sqrt2 n^2 + n/3 mod 2", 60, c7_skew),
        ("Heisenberg fractional parts by two routes", 30, c8_heisenberg),
        ("weak periodicity contrast", 300, c9_weak_periodicity),
        ("finite sums of 4^i are 11-free", 10, c10_bfree),
        ("normal form of the rank-2 fixture", 30, c11_normal_form),
        ("equidistribution and kernel growth", 300, c12_equidistribution),
    ];
    let mut failed = 0;
    for (i, (title, limit, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f));
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(Ok(d)) if took <= Duration::from_secs(*limit) => (true, d),
            Ok(Ok(d)) => (false, format!("over the {limit} s limit: {d}")),
            Ok(Err(e)) => (false, e.to_string()),
            Err(_) => (false, "panicked".to_string()),
        };
        failed += usize::from(!ok);
        println!(
            "{} {:>2} {title} ({:.2} s, limit {limit} s): {detail}",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            took.as_secs_f64()
        );
    }
    println!("{} of 12 criteria pass", 12 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
