use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::automaton::thue_morse;
use crate::error::Error;
use crate::numeric::{ExactReal, PrecisionPolicy};

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::default()
}

fn big(n: i64) -> BigInt {
    BigInt::from(n)
}

const WORKED: &str =
    "(+ 2 (* (sqrt 2) (pow (floor (+ (* (sqrt 3) (pow n 2)) (/ 1 7))) 2)) (* n (floor (+ (pow n 3) pi))))";

#[test]
fn worked_example() {
    let f = parse_gp(WORKED).unwrap();
    let v0 = f.eval(&big(0), &policy()).unwrap();
    assert_eq!(v0.exact_integer, Some(big(2)));
    let v1 = f.eval(&big(1), &policy()).unwrap();
    assert!(v1.exact_integer.is_none());
    assert!((v1.to_f64() - (6.0 + std::f64::consts::SQRT_2)).abs() < 1e-12);
    assert!(v1.enclosure.accurate_to(60));
    // Independent oracle for n = 2..20 in f64 (arguments stay far from integers).
    for n in 2..20i64 {
        let x = n as f64;
        let a = (3f64.sqrt() * x * x + 1.0 / 7.0).floor();
        let b = (x * x * x + std::f64::consts::PI).floor();
        let want = 2.0 + 2f64.sqrt() * a * a + x * b;
        let got = f.eval(&big(n), &policy()).unwrap().to_f64();
        assert!((got - want).abs() / want < 1e-12, "n = {n}");
    }
}

#[test]
fn floor_of_scaled_sqrt() {
    let e = parse_gp("(floor (* (sqrt 2) 5))").unwrap();
    assert_eq!(e.eval_int(&big(0), &policy()).unwrap(), big(7));
}

#[test]
fn derived_forms_at_rational_points() {
    let p = policy();
    for num in -12..=12i64 {
        let x = BigRational::new(num.into(), 4.into());
        let c = GpExpr::constant(ExactReal::rational(x.clone()));
        let near = c.nearest().eval_int(&big(0), &p).unwrap();
        let want = (x.clone() + BigRational::new(1.into(), 2.into())).floor().to_integer();
        assert_eq!(near, want, "nearest at {x}");
        let frac = c.frac().eval_real(&big(0), &p).unwrap();
        assert_eq!(frac.as_rational().unwrap(), &(x.clone() - x.floor()));
        let dist = c.dist().eval_real(&big(0), &p).unwrap();
        let d = x.clone() - BigRational::from_integer(want);
        let d = if d < BigRational::from_integer(0.into()) { -d } else { d };
        assert_eq!(dist.as_rational().unwrap(), &d, "dist at {x}");
        let ceil = c.ceil().eval_int(&big(0), &p).unwrap();
        assert_eq!(ceil, x.ceil().to_integer());
    }
}

#[test]
fn exact_integer_argument_without_fast_path_is_reported() {
    // sqrt2*sqrt3 - sqrt6 is zero but lives in no single field.
    let e = parse_gp("(floor (- (* (sqrt 2) (sqrt 3)) (sqrt 6)))").unwrap();
    let small = PrecisionPolicy::with_max_bits(256);
    match e.eval(&big(0), &small) {
        Err(Error::PrecisionExhausted { subexpr, bits }) => {
            assert_eq!(bits, 256);
            assert!(subexpr.contains("floor"));
        }
        other => panic!("expected PrecisionExhausted, got {other:?}"),
    }
    // Same-field cancellation is exact.
    let ok = parse_gp("(floor (- (* (sqrt 2) (sqrt 8)) 4))").unwrap();
    assert_eq!(ok.eval_int(&big(0), &small).unwrap(), big(0));
}

#[test]
fn indicator_examples() {
    let p = policy();
    let s2 = ExactReal::int(2).sqrt().unwrap();
    let h = parse_gp("(- n 3)").unwrap();
    let g = indicator_zero_set(&h, &s2);
    assert_eq!(g.eval_int(&big(3), &p).unwrap(), big(1));
    assert_eq!(g.eval_int(&big(4), &p).unwrap(), big(0));
    let zero = GpExpr::int(0);
    let g0 = indicator_zero_set(&zero, &s2);
    for n in 0..5 {
        assert_eq!(g0.eval_int(&big(n), &p).unwrap(), big(1));
    }
    let h2 = parse_gp("(* (sqrt 2) n)").unwrap();
    let w = window_indicator(&h2, &ExactReal::int(0), &ExactReal::int(1), &s2).unwrap();
    for n in 0..50 {
        assert_eq!(w.eval_int(&big(n), &p).unwrap(), big((n == 0) as i64));
    }
}

#[test]
fn indicator_matches_semantic_twin() {
    let p = policy();
    let theta = ExactReal::int(3).sqrt().unwrap();
    let h = parse_gp("(- (floor (* (sqrt 2) n)) (* 2 (floor (* (/ 1 2) (floor (* (sqrt 2) n))))))").unwrap();
    let formal = GpSequence::new(indicator_zero_set(&h, &theta), None, p);
    let twin = ZeroSetTwin::new(h, p);
    let cmp = set_compare(&formal, &twin, 0, 2000).unwrap();
    assert_eq!(cmp.disagreements, 0);
}

#[test]
fn floor_poly_mod_examples() {
    let p = policy();
    let half = ExactReal::ratio(1, 2).unwrap();
    let s = floor_poly_mod(&[ExactReal::zero(), half], 2, p).unwrap();
    assert_eq!(s.prefix(6).unwrap(), vec![0, 0, 1, 1, 0, 0]);
    let s2 = ExactReal::int(2).sqrt().unwrap();
    let s = floor_poly_mod(&[ExactReal::zero(), s2], 2, p).unwrap();
    assert_eq!(s.prefix(8).unwrap(), vec![0, 1, 0, 0, 1, 1, 0, 1]);
    assert_eq!(s.at(5).unwrap(), 1);
    let third = ExactReal::ratio(1, 3).unwrap();
    let s = floor_poly_mod(&[third, ExactReal::zero(), ExactReal::zero()], 2, p).unwrap();
    assert!(s.prefix(20).unwrap().iter().all(|v| *v == 0));
    assert!(floor_poly_mod(&[ExactReal::one()], 1, p).is_err());
}

#[test]
fn weak_periodicity_examples() {
    let alt = FnSequence::new("alternating", |n| Ok((n % 2) as i64));
    let w = weak_periodicity_search(&alt, 8, 8, 1000).unwrap();
    assert_eq!(w, WeakPeriodicity::Witness { q: 1, r: 0, s: 2 });
    assert!(w.verify(&alt, 1000).unwrap());
    let tm = DfaoSequence(thue_morse());
    let w = weak_periodicity_search(&tm, 8, 8, 4096).unwrap();
    assert_eq!(w, WeakPeriodicity::Witness { q: 4, r: 1, s: 2 });
    assert!(w.verify(&tm, 4096).unwrap());
}

#[test]
fn weak_periodicity_finds_every_short_period() {
    for period in 1..=12u64 {
        let seq = FnSequence::new("periodic", move |n| Ok(((n % period) * 7 % 5) as i64));
        let w = weak_periodicity_search(&seq, 12, 16, 2000).unwrap();
        let WeakPeriodicity::Witness { q, .. } = w else {
            panic!("period {period} not found");
        };
        assert!(q <= period);
        assert!(w.verify(&seq, 2000).unwrap());
    }
}

#[test]
fn kernel_census_examples() {
    let tm = DfaoSequence(thue_morse());
    let c = kernel_census(&tm, 2, 6, 64, 1 << 20).unwrap();
    assert_eq!(c.distinct, 2);
    let one = FnSequence::new("one", |_| Ok(1));
    assert_eq!(kernel_census(&one, 2, 4, 16, 1 << 20).unwrap().distinct, 1);
    let s2 = ExactReal::int(2).sqrt().unwrap();
    let beatty = floor_poly_mod(&[ExactReal::zero(), s2], 2, policy()).unwrap();
    let c = kernel_census(&beatty, 2, 10, 64, 1 << 20).unwrap();
    for w in c.by_depth.windows(2) {
        assert!(w[1] > w[0]);
    }
    assert!(c.distinct > 10);
}

#[test]
fn density_examples() {
    let one = FnSequence::new("one", |_| Ok(1));
    let r = density_estimate(&one, &[10, 1000], 4, 10_000, 7).unwrap();
    assert!(r.natural.iter().all(|s| s.density == 1.0));
    assert!(r.banach.iter().all(|s| s.density == 1.0));
    let pow2 = FnSequence::new("powers of two", |n| Ok((n != 0 && n & (n - 1) == 0) as i64));
    let r = density_estimate(&pow2, &[1 << 20], 2, 1 << 10, 1).unwrap();
    let brute = (0..1u64 << 20).filter(|n| n.is_power_of_two()).count() as u64;
    assert_eq!(r.natural[0].count, brute);
    assert_eq!(brute, 20);
}

#[test]
fn bohr_set_density() {
    let e = parse_gp("(floor (* 10 (dist (* (sqrt 2) n))))").unwrap();
    let p = policy();
    let ind = FnSequence::new("dist < 0.1", move |n| {
        Ok((e.eval_int(&big(n as i64), &p)? == big(0)) as i64)
    });
    let r = density_estimate(&ind, &[100_000], 0, 0, 0).unwrap();
    assert!((r.natural[0].density - 0.2).abs() < 0.01);
}

#[test]
fn equidistribution_examples() {
    let p = policy();
    let one = ExactReal::one();
    let lin = parse_gp("(* (sqrt 2) n)").unwrap();
    let r = equidistribution_test(&lin, 1, &one, 20_000, 10, &p).unwrap();
    assert!(r.star_discrepancy < 0.01);
    let half = parse_gp("(/ n 2)").unwrap();
    let r = equidistribution_test(&half, 1, &one, 1000, 4, &p).unwrap();
    assert_eq!(r.histogram, vec![500, 0, 500, 0]);
}

#[test]
fn set_compare_examples() {
    let zero = FnSequence::new("zero", |_| Ok(0));
    let one = FnSequence::new("one", |_| Ok(1));
    assert_eq!(set_compare(&zero, &zero, 0, 100).unwrap().disagreements, 0);
    let r = set_compare(&zero, &one, 0, 100).unwrap();
    assert_eq!(r.disagreements, 100);
    assert_eq!(r.only_in_second, 100);
}

#[test]
fn parse_errors_carry_lines() {
    match parse_gp("(+ 1\n (bogus 2))") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    assert!(parse_gp("(/ n n)").is_err());
    assert!(parse_gp("(floor n").is_err());
    assert!(parse_gp("(sqrt -2)").is_err());
}

#[test]
fn algebraic_constants_parse() {
    let e = parse_gp("(floor (* 1000 (root (poly -1 -1 -1 1) 1 2)))").unwrap();
    assert_eq!(e.eval_int(&big(0), &policy()).unwrap(), big(1839));
    let phi = parse_gp("(- (* phi phi) phi)").unwrap();
    assert_eq!(phi.eval_int(&big(0), &policy()).unwrap(), big(1));
}

#[test]
fn refinement_is_nested() {
    let e = parse_gp("(* (sqrt 2) (floor (* (sqrt 3) n)))").unwrap();
    for n in [5i64, 77, 1234] {
        let v = e.eval_real(&big(n), &policy()).unwrap();
        let a = v.enclosure(64).unwrap();
        let b = v.enclosure(128).unwrap();
        assert!(a.lo <= b.lo && b.hi <= a.hi);
    }
}
