use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::*;
use crate::numeric::{ExactReal, PrecisionPolicy};

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

fn q(n: i64) -> num_rational::BigRational {
    num_rational::BigRational::from_integer(n.into())
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

#[test]
fn fibonacci_members() {
    let p = QuadraticParams::new(1).unwrap();
    let pred = fibonacci_like_set(&p);
    for n in [1u64, 2, 3, 5, 8, 13] {
        assert!(pred.eval(&big(n), &policy()).unwrap(), "n = {n}");
    }
    assert!(!pred.eval(&big(4), &policy()).unwrap());
    let checks = term_checks(&p, &BigInt::from(10u64).pow(12), &policy()).unwrap();
    let i30 = checks.iter().find(|c| c.index == 30).unwrap();
    assert!((i30.normalized - 1.0 / 5f64.sqrt()).abs() < 1e-6);
}

#[test]
fn recurrence_terms_examples() {
    let fib: Vec<u64> = quadratic_terms(1, 8).iter().map(|x| x.to_u64().unwrap()).collect();
    assert_eq!(fib, vec![0, 1, 1, 2, 3, 5, 8, 13]);
    let r: Vec<i64> = cubic_terms(1, 0, 9).iter().map(|x| x.to_i64().unwrap()).collect();
    assert_eq!(r, vec![1, 1, 1, 2, 3, 4, 6, 9, 13]);
    let r: Vec<i64> = cubic_terms(2, -1, 6).iter().map(|x| x.to_i64().unwrap()).collect();
    assert_eq!(r, vec![1, 2, 3, 5, 9, 16]);
}

#[test]
fn legendre_inclusion_and_tail() {
    for a in 1..=3u64 {
        let p = QuadraticParams::new(a).unwrap();
        let scan = fibonacci_scan(&p, 200_000, &policy()).unwrap();
        assert!(scan.extra.is_empty(), "a = {a}: {:?}", scan.extra);
        // Brute-force oracle in f64 on a small range, away from the threshold.
        let alpha = p.alpha.to_f64();
        for n in 1..2000u64 {
            let x = n as f64 * alpha;
            let v = 2.0 * n as f64 * (x - x.round()).abs();
            if (v - 1.0).abs() > 1e-6 {
                assert_eq!(scan.members.binary_search(&n).is_ok(), v < 1.0, "a = {a}, n = {n}");
            }
        }
        let checks = term_checks(&p, &BigInt::from(10u64).pow(12), &policy()).unwrap();
        let i0 = tail_start(&checks).unwrap();
        let strict = PrecisionPolicy::with_max_bits(1024);
        let again = term_checks(&p, &BigInt::from(10u64).pow(12), &strict).unwrap();
        assert_eq!(tail_start(&again), Some(i0));
    }
}

#[test]
fn lawnmower_constant_schedule_matches_quadratic() {
    let lm = Lawnmower::new(&[2]).unwrap();
    let q = QuadraticParams::new(2).unwrap();
    let diff = lm.alpha.sub(&q.alpha).add(&ExactReal::int(2));
    assert!(diff.is_exact_zero());
    let terms = lm.terms(8);
    assert_eq!(terms, quadratic_terms(2, 8));
    let mixed = Lawnmower::new(&[2, 3]).unwrap();
    let t: Vec<u64> = mixed.terms(6).iter().map(|x| x.to_u64().unwrap()).collect();
    assert_eq!(t, vec![0, 1, 2, 7, 16, 55]);
    let (extra, _) = mixed.compare(5000, &policy()).unwrap();
    assert!(extra.is_empty());
    assert!(Lawnmower::new(&[1, 2]).is_err());
}

#[test]
fn pisot_check_examples() {
    let p = pisot_cubic_check(1, 0).unwrap();
    assert!((p.beta.to_f64() - 1.465_571_231_876_768).abs() < 1e-12);
    assert!(pisot_cubic_check(2, -1).is_ok());
    assert!(pisot_cubic_check(0, 2).is_err());
    assert!(pisot_cubic_check(1, -1).is_err());
    // Vieta: 2 Re α + β = a, |α|² + 2 Re α · β = −b, |α|²β = 1.
    for (a, b) in [(1, 0), (2, -1), (1, 1), (2, 0), (3, 2)] {
        let p = pisot_cubic_check(a, b).unwrap();
        let abs_sq = p.alpha_re.mul(&p.alpha_re).add(&p.alpha_im_sq);
        assert_eq!(abs_sq.mul(&p.beta).as_rational(), Some(q(1)));
        assert_eq!(p.alpha_re.scale(&q(2)).add(&p.beta).as_rational(), Some(q(a)));
        let e2 = abs_sq.add(&p.alpha_re.mul(&p.beta).scale(&q(2)));
        assert_eq!(e2.as_rational(), Some(q(-b)));
        assert_eq!(p.alpha_im_sq.sign(), Ordering::Greater);
        assert_eq!(abs_sq.add_rational(&q(-1)).sign(), Ordering::Less);
    }
}

#[test]
fn rauzy_norm_examples() {
    let p = pisot_cubic_check(1, 0).unwrap();
    let z = rauzy_norm(&p, &ExactReal::zero(), &ExactReal::zero()).unwrap();
    assert!(z.is_exact_zero());
    let e1 = rauzy_norm(&p, &ExactReal::one(), &ExactReal::zero()).unwrap();
    assert!((e1.to_f64() - 0.826_031_357_654_187).abs() < 1e-12);
    let e2 = rauzy_norm(&p, &ExactReal::zero(), &ExactReal::one()).unwrap();
    assert!((e2.to_f64() - 1.0 / 1.465_571_231_876_768).abs() < 1e-12);
}

/// Independent oracle: f64 scan with an exhaustive lattice box.
fn brute_best(a: i64, b: i64, q_max: u64) -> Vec<u64> {
    let p = pisot_cubic_check(a, b).unwrap();
    let beta = p.beta.to_f64();
    let re = p.c_re.to_f64();
    let im = p.alpha_im_sq.to_f64().sqrt();
    let mut best = f64::INFINITY;
    let mut out = Vec::new();
    for q in 1..=q_max {
        let (y1, y2) = (q as f64 / beta, q as f64 / (beta * beta));
        let mut m = f64::INFINITY;
        for p1 in y1.round() as i64 - 3..=y1.round() as i64 + 3 {
            for p2 in y2.round() as i64 - 3..=y2.round() as i64 + 3 {
                let (x1, x2) = (y1 - p1 as f64, y2 - p2 as f64);
                let r = re * x1 + x2 / beta;
                m = m.min((r * r + im * im * x1 * x1).sqrt());
            }
        }
        if m < best - 1e-9 {
            best = m;
            out.push(q);
        }
    }
    out
}

#[test]
fn best_approximations_match_recurrence() {
    let p = pisot_cubic_check(1, 0).unwrap();
    let recs = best_approximations(&p, 10_000).unwrap();
    let flagged: Vec<u64> = recs.iter().map(|r| r.q).collect();
    assert_eq!(flagged[0], 1);
    assert_eq!(flagged, brute_best(1, 0, 10_000));
    let r: Vec<u64> = cubic_terms(1, 0, 40)
        .iter()
        .map(|x| x.to_u64().unwrap())
        .filter(|&x| x <= 10_000)
        .collect();
    let only_flagged: Vec<u64> = flagged.iter().copied().filter(|q| !r.contains(q)).collect();
    let only_r: Vec<u64> = r.iter().copied().filter(|q| !flagged.contains(q)).collect();
    let recs2 = best_approximations(&p, 20_000).unwrap();
    let flagged2: Vec<u64> = recs2.iter().map(|r| r.q).filter(|&q| q <= 10_000).collect();
    assert_eq!(flagged, flagged2);
    // The difference lives at the start of the sequence.
    assert!(only_flagged.iter().all(|&q| q < 10));
    assert!(only_r.iter().all(|&q| q < 10));
    let ratios = mwzor_checks(&p, 5, 20).unwrap();
    for c in ratios {
        assert!((c.ratio - 1.0).abs() < 0.01, "n = {}", c.n);
        assert!(c.exact);
    }
}

#[test]
fn pisot_predicate_on_recurrence() {
    let p = pisot_cubic_check(1, 0).unwrap();
    let gp = pisot_gp_set(&p, &PisotThreshold::default());
    let lit = pisot_gp_set(&p, &PisotThreshold::Literal);
    let r = cubic_terms(1, 0, 26);
    for (n, q) in r.iter().enumerate().take(26).skip(10) {
        assert!(gp.predicate.eval(q, &policy()).unwrap(), "R_{n}");
        assert!(!gp.predicate.eval(&(q + 1), &policy()).unwrap(), "R_{n} + 1");
        // h²·g equals 1 exactly at R_n, so the strict literal form fails.
        let m = lit.predicate.margin(q, &policy()).unwrap();
        assert!(m.is_exact_zero(), "R_{n}");
        assert!(!lit.predicate.eval(q, &policy()).unwrap());
    }
    let low = PrecisionPolicy::with_max_bits(256);
    let high = PrecisionPolicy::with_max_bits(1024);
    for q in 1..3000u64 {
        assert_eq!(
            gp.predicate.eval(&big(q), &low).unwrap(),
            gp.predicate.eval(&big(q), &high).unwrap()
        );
    }
}

#[test]
fn nearest_power_translation() {
    let p = pisot_cubic_check(1, 0).unwrap();
    let rep = nearest_power_set_equiv(&p, 10, 40, &policy()).unwrap();
    assert!(rep.u_nonzero);
    assert!(rep.all_hold);
    // Oracle (80-digit mpmath): |R_31 − uβ³¹| ≈ 1.1110e-3, below 1e-3 from n = 32 on.
    assert!((rep.deviations[31].1 - 1.110_983e-3).abs() < 1e-8);
    assert_eq!(rep.small_from, Some(32));
    assert!((rep.u.parse::<f64>().unwrap() - 0.611_491_991_950_812_5).abs() < 1e-14);
}
