use std::collections::BTreeSet;

use proptest::prelude::*;

use super::*;
use crate::automaton::{baum_sweet, constant, from_prohibited_patterns};
use crate::digits::DigitWord;
use crate::sparsity::ips_witness;

fn gens(v: &[u128]) -> IpGenerators {
    IpGenerators::new(v.to_vec()).unwrap()
}

fn free_of(pattern: &str) -> crate::Dfao {
    from_prohibited_patterns(2, &[DigitWord::parse(2, pattern).unwrap()]).unwrap()
}

/// Subset sums by direct bit iteration.
fn brute_sums(g: &[u128]) -> BTreeSet<u128> {
    (1u32..1 << g.len())
        .map(|m| (0..g.len()).filter(|i| m >> i & 1 == 1).map(|i| g[i]).sum())
        .collect()
}

#[test]
fn finite_sum_examples() {
    assert_eq!(finite_sums(&gens(&[1, 2, 4]), 3).unwrap(), (1..=7).collect::<Vec<_>>());
    assert_eq!(finite_sums(&gens(&[5]), 1).unwrap(), vec![5]);
    assert_eq!(finite_sums(&gens(&[2, 2]), 2).unwrap(), vec![2, 4]);
    assert!(finite_sums(&gens(&[1, 2]), 3).is_err());
    assert!(IpGenerators::new(vec![1, 0]).is_err());
}

#[test]
fn super_increasing_sums_are_distinct() {
    for (k, t) in [(2, 2), (3, 1), (10, 1)] {
        let g = power_generators(k, t, 12).unwrap();
        assert!(g.gens().windows(2).all(|w| w[1] > w[0]));
        assert_eq!(finite_sums(&g, 12).unwrap().len(), (1 << 12) - 1);
    }
}

#[test]
fn shifted_sum_examples() {
    let zero = IpsFamily::new(gens(&[1, 2, 4]), vec![0; 3]);
    let values: BTreeSet<u128> = shifted_finite_sums(&zero, 3).unwrap().iter().map(|s| s.value).collect();
    assert_eq!(values, finite_sums(&gens(&[1, 2, 4]), 3).unwrap().into_iter().collect());

    let seven = IpsFamily::new(gens(&[1, 2]), vec![7, 7]);
    let at_two: Vec<u128> = shifted_finite_sums(&seven, 2)
        .unwrap()
        .into_iter()
        .filter(|s| s.t == 2)
        .map(|s| s.value)
        .collect();
    assert_eq!(at_two, vec![8, 9, 10]);
}

#[test]
fn witness_family_lies_in_source_set() {
    let bs = baum_sweet();
    let w = ips_witness(&bs, 2_000, 10).unwrap();
    let fam = IpsFamily::from_witness(&w).unwrap();
    let sums = shifted_finite_sums(&fam, 10).unwrap();
    assert_eq!(sums.len(), (1..=10).map(|t| (1usize << t) - 1).sum::<usize>());
    for s in &sums {
        assert_eq!(bs.eval_u128(s.value), 1, "t = {}, α = {:?}", s.t, s.alpha);
        let n = fam.generators.n_alpha(&s.alpha).unwrap() + fam.shifts[s.t - 1];
        assert_eq!(n, s.value);
    }
}

#[test]
fn contains_fs_examples() {
    let a = free_of("11");
    let g = power_generators(2, 2, 16).unwrap();
    let check = contains_fs(&a, &g, 16).unwrap();
    assert!(check.holds);
    assert_eq!(check.checked, 65_535);

    let check = contains_fs(&a, &gens(&[1, 2]), 2).unwrap();
    assert!(!check.holds);
    assert_eq!(check.first_failure, Some((vec![1, 2], 3)));

    let one = constant(2, 1);
    assert!(contains_fs(&one, &gens(&[3, 3, 17, 100]), 4).unwrap().holds);
}

#[test]
fn contains_fs_accepts_sequences() {
    let seq = crate::genpoly::DfaoSequence(free_of("11"));
    let g = power_generators(2, 2, 8).unwrap();
    assert!(contains_fs(&SeqMembership(seq), &g, 8).unwrap().holds);
    let odd = FnMembership::new("odd", |n| n % 2 == 1);
    let check = contains_fs(&odd, &gens(&[1, 3, 5]), 3).unwrap();
    assert_eq!(check.first_failure, Some((vec![1, 2], 4)));
}

#[test]
fn divisibility_examples() {
    let no_zeros = free_of("000");
    let ob = divisibility_obstruction(&no_zeros, 2, 3, 1 << 20).unwrap();
    assert!(ob.confirmed);
    assert_eq!(ob.counterexample, None);

    let ob = divisibility_obstruction(&constant(2, 1), 2, 3, 1 << 20).unwrap();
    assert_eq!(ob.counterexample, Some(8));
    let ob = divisibility_obstruction(&baum_sweet(), 2, 2, 1 << 20).unwrap();
    assert_eq!(ob.counterexample, Some(4));
}

#[test]
fn pigeonhole_finds_multiples() {
    let g = gens(&[3, 5, 7]);
    assert_eq!(pigeonhole_multiple(&g, 4), Some(vec![1, 2]));
    let g = power_generators(3, 1, 8).unwrap();
    let alpha = pigeonhole_multiple(&g, 8).unwrap();
    assert_eq!(g.n_alpha(&alpha).unwrap() % 8, 0);
}

#[test]
fn fixture_is_ips_and_blocks_translates() {
    let fam = ips_fixture(10).unwrap();
    for s in shifted_finite_sums(&fam, 10).unwrap() {
        assert!(ips_fixture_member(s.value), "{s:?}");
    }
    let ob = pair_obstruction(64, 8);
    assert_eq!(ob.violation, None);
    assert!(ob.pairs_checked > 100_000);
    // Without the size condition small blocks do produce sums in the set:
    // 36 ∈ B_1, 132 ∈ B_2, a = 20.
    assert!(ips_fixture_member(36) && ips_fixture_member(132));
    assert!(ips_fixture_member(36 + 132 - 20));
}

proptest! {
    #[test]
    fn sums_match_brute_force(g in prop::collection::vec(1u128..1000, 1..10)) {
        let got: BTreeSet<u128> = finite_sums(&gens(&g), g.len()).unwrap().into_iter().collect();
        prop_assert!(got.len() < 1 << g.len());
        prop_assert_eq!(got, brute_sums(&g));
    }

    #[test]
    fn constant_shift_translates(g in prop::collection::vec(1u128..1000, 1..8), c in 0u128..1000) {
        let d = g.len();
        let fam = IpsFamily::new(gens(&g), vec![c; d]);
        let shifted: BTreeSet<u128> = shifted_finite_sums(&fam, d)
            .unwrap()
            .into_iter()
            .map(|s| s.value)
            .collect();
        let plain: BTreeSet<u128> = finite_sums(&gens(&g), d).unwrap().into_iter().map(|x| x + c).collect();
        prop_assert_eq!(shifted, plain);
    }

    #[test]
    fn containment_is_monotone(g in prop::collection::vec(1u128..200, 1..9), m in 2u128..6) {
        let pred = FnMembership::new("not divisible", move |n| n % m != 0);
        let g = gens(&g);
        let holds: Vec<bool> = (1..=g.len()).map(|d| contains_fs(&pred, &g, d).unwrap().holds).collect();
        for d in 1..holds.len() {
            prop_assert!(!holds[d] || holds[d - 1]);
        }
    }
}
