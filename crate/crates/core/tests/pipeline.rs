use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;

use nilseq_core::automaton::{contains_pattern, from_prohibited_patterns, kernel, minimize};
use nilseq_core::genpoly::{floor_poly_mod, parse_gp, GpSequence, IntSequence};
use nilseq_core::ip::{contains_fs, power_generators};
use nilseq_core::numeric::{ExactReal, PrecisionPolicy};
use nilseq_core::orbit::heisenberg_fracpart;
use nilseq_core::sparsity::{classify, ips_witness, Classification, Counter};
use nilseq_core::{Dfao, DigitWord};

fn policy() -> PrecisionPolicy {
    PrecisionPolicy::with_max_bits(1024)
}

fn binary_word() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::bool::ANY, 1..5).prop_map(|v| v.iter().map(|&b| if b { '1' } else { '0' }).collect())
}

fn pattern_automaton() -> impl Strategy<Value = (String, Dfao)> {
    (prop::collection::vec(binary_word(), 1..3), prop::bool::ANY).prop_map(|(words, avoid)| {
        let ws: Vec<DigitWord> = words.iter().map(|w| DigitWord::parse(2, w).unwrap()).collect();
        let a = if avoid {
            from_prohibited_patterns(2, &ws).unwrap()
        } else {
            contains_pattern(2, &ws[0]).unwrap()
        };
        (format!("{} {words:?}", if avoid { "avoid" } else { "contains" }), a)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classification_matches_enumeration((label, a) in pattern_automaton()) {
        let bound = 1u64 << 12;
        let brute: BTreeSet<u128> = (0..bound).filter(|&n| a.eval(n) == 1).map(u128::from).collect();
        let mut counter = Counter::new(&a).unwrap();
        prop_assert_eq!(counter.count_below(bound as u128), brute.len() as u128, "{}", label);
        match classify(&a).unwrap() {
            Classification::VerySparse(d) => {
                prop_assert_eq!(&d.members_below(bound as u128), &brute, "{}", label);
                let back = d.to_acceptor().unwrap();
                prop_assert!((0..bound).all(|n| back.eval(n) == a.eval(n)), "{}", label);
            }
            Classification::ConditionI(c) => {
                prop_assert!(c.check(), "{}", label);
                prop_assert!(ips_witness(&a, 500, 6).is_ok(), "{}", label);
            }
        }
    }

    #[test]
    fn text_format_round_trips((_label, a) in pattern_automaton()) {
        let b = Dfao::from_text(&a.to_text()).unwrap();
        prop_assert!((0..4096u64).all(|n| a.eval(n) == b.eval(n)));
        let m = minimize(&a);
        prop_assert!((0..4096u64).all(|n| a.eval(n) == m.eval(n)));
        prop_assert_eq!(kernel(&a).unwrap().size, kernel(&m).unwrap().size);
    }

    #[test]
    fn fs_containment_matches_enumeration(words in prop::collection::vec(binary_word(), 1..3), k in 2u32..5) {
        let ws: Vec<DigitWord> = words.iter().map(|w| DigitWord::parse(2, w).unwrap()).collect();
        let a = from_prohibited_patterns(2, &ws).unwrap();
        let gen = power_generators(k, 1, 8).unwrap();
        let r = contains_fs(&a, &gen, 8).unwrap();
        let k = k as u128;
        let all = (1u32..1 << 8).all(|mask| {
            let v: u128 = (0..8).filter(|i| mask >> i & 1 == 1).map(|i| k.pow(i + 1)).sum();
            a.eval_u128(v) == 1
        });
        prop_assert_eq!(r.holds, all);
        prop_assert_eq!(r.checked == 255, all);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn floor_poly_mod_matches_expression(
        c0 in (0i64..20, 1i64..9),
        c1 in (0i64..20, 1i64..9),
        root in prop::sample::select(vec![2i64, 3, 5, 7]),
        m in 2u64..7,
    ) {
        let p = policy();
        let coeffs = vec![
            ExactReal::rational(BigRational::new(c0.0.into(), c0.1.into())),
            ExactReal::rational(BigRational::new(c1.0.into(), c1.1.into())),
            ExactReal::int(root).sqrt().unwrap(),
        ];
        let src = format!(
            "(floor (+ {}/{} (+ (* {}/{} n) (* (sqrt {root}) n n))))",
            c0.0, c0.1, c1.0, c1.1
        );
        let direct = GpSequence::new(parse_gp(&src).unwrap(), Some(m), p);
        let f = floor_poly_mod(&coeffs, m, p).unwrap();
        prop_assert_eq!(f.prefix(300).unwrap(), direct.prefix(300).unwrap(), "{}", src);
    }

    #[test]
    fn heisenberg_routes_agree(
        ra in prop::sample::select(vec![2i64, 3, 5, 6, 7]),
        rb in prop::sample::select(vec![2i64, 3, 5, 10, 11]),
        n in 0u64..3000,
    ) {
        let (a, b) = (ExactReal::int(ra).sqrt().unwrap(), ExactReal::int(rb).sqrt().unwrap());
        let h = heisenberg_fracpart(&a, &b, n, &policy()).unwrap();
        prop_assert!(h.agree, "sqrt {} sqrt {} n {}", ra, rb, n);
    }
}
