//! Ready-made automata and pattern-set builders. All builders read most
//! significant digit first and are leading-zero invariant.

use std::collections::{BTreeSet, HashMap, VecDeque};

use super::transform::minimize;
use super::{Dfao, ReadingOrder};
use crate::digits::DigitWord;
use crate::error::{Error, Result};

/// Single-state automaton with constant output.
pub fn constant(base: u32, value: u32) -> Dfao {
    Dfao::from_parts(base, ReadingOrder::Msd, 0, vec![0; base as usize], vec![value])
}

/// Thue–Morse: parity of the binary digit sum.
pub fn thue_morse() -> Dfao {
    Dfao::new(2, ReadingOrder::Msd, 0, vec![vec![0, 1], vec![1, 0]], vec![0, 1]).unwrap()
}

/// Acceptor of `{k^l : l ≥ 0}`: states start, seen-1, dead.
pub fn powers_acceptor(base: u32) -> Dfao {
    let k = base as usize;
    let mut start = vec![2; k];
    start[0] = 0;
    start[1] = 1;
    let mut seen = vec![2; k];
    seen[0] = 1;
    Dfao::new(base, ReadingOrder::Msd, 0, vec![start, seen, vec![2; k]], vec![0, 1, 0]).unwrap()
}

/// `a_n = n mod m`, read in base `base`.
pub fn residue(base: u32, modulus: u32) -> Dfao {
    assert!(modulus >= 1);
    let rows = (0..modulus)
        .map(|r| {
            (0..base)
                .map(|d| ((r as u64 * base as u64 + d as u64) % modulus as u64) as usize)
                .collect()
        })
        .collect();
    Dfao::new(base, ReadingOrder::Msd, 0, rows, (0..modulus).collect()).unwrap()
}

/// Baum–Sweet in the form `f(n) = 0` iff `(n)_2` contains `1 0^l 1` with `l`
/// odd. Trailing zero blocks are not between two ones and never matter.
///
/// States: 0 = nothing read yet, 1 = even zero run since the last 1,
/// 2 = odd zero run since the last 1, 3 = dead.
pub fn baum_sweet() -> Dfao {
    Dfao::new(
        2,
        ReadingOrder::Msd,
        0,
        vec![vec![0, 1], vec![2, 1], vec![1, 3], vec![3, 3]],
        vec![1, 1, 1, 0],
    )
    .unwrap()
}

/// Indicator of `B`-free numbers: output 1 iff `(n)_k` contains no
/// `b ∈ patterns` as a factor. Built by Aho–Corasick factor tracking, with a
/// pre-state that skips leading zeros.
pub fn from_prohibited_patterns(base: u32, patterns: &[DigitWord]) -> Result<Dfao> {
    for p in patterns {
        if p.is_empty() {
            return Err(Error::invalid("prohibited patterns must be nonempty"));
        }
        if p.base() != base {
            return Err(Error::invalid("pattern base differs from automaton base"));
        }
    }
    let k = base as usize;
    // Trie.
    let mut goto: Vec<Vec<Option<usize>>> = vec![vec![None; k]];
    let mut terminal = vec![false];
    for p in patterns {
        let mut node = 0;
        for &d in p.digits() {
            node = match goto[node][d as usize] {
                Some(next) => next,
                None => {
                    goto.push(vec![None; k]);
                    terminal.push(false);
                    let id = goto.len() - 1;
                    goto[node][d as usize] = Some(id);
                    id
                }
            };
        }
        terminal[node] = true;
    }
    // Failure links, BFS order.
    let n = goto.len();
    let mut fail = vec![0usize; n];
    let mut delta = vec![vec![0usize; k]; n];
    let mut queue = VecDeque::new();
    for d in 0..k {
        match goto[0][d] {
            Some(c) => {
                delta[0][d] = c;
                queue.push_back(c);
            }
            None => delta[0][d] = 0,
        }
    }
    while let Some(u) = queue.pop_front() {
        terminal[u] = terminal[u] || terminal[fail[u]];
        for d in 0..k {
            match goto[u][d] {
                Some(c) => {
                    fail[c] = delta[fail[u]][d];
                    delta[u][d] = c;
                    queue.push_back(c);
                }
                None => delta[u][d] = delta[fail[u]][d],
            }
        }
    }
    // Assemble: state 0 = pre (leading zeros), 1 = dead, 2 + node = trie node.
    let dead = 1;
    let map = |node: usize| if terminal[node] { dead } else { node + 2 };
    let mut rows = Vec::with_capacity(n + 2);
    let mut outputs = Vec::with_capacity(n + 2);
    let mut pre = vec![0usize; k];
    for d in 1..k {
        pre[d] = map(delta[0][d]);
    }
    rows.push(pre);
    outputs.push(1);
    rows.push(vec![dead; k]);
    outputs.push(0);
    for node in 0..n {
        rows.push((0..k).map(|d| map(delta[node][d])).collect());
        outputs.push(if terminal[node] { 0 } else { 1 });
    }
    Ok(minimize(&Dfao::new(base, ReadingOrder::Msd, 0, rows, outputs)?))
}

/// Indicator of numbers whose expansion contains `pattern` as a factor.
pub fn contains_pattern(base: u32, pattern: &DigitWord) -> Result<Dfao> {
    Ok(from_prohibited_patterns(base, std::slice::from_ref(pattern))?.map_outputs(|o| 1 - o))
}

/// One piece of a digit pattern: a literal word or a starred word `u^*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PatternPart {
    Lit(DigitWord),
    Star(DigitWord),
}

/// Acceptor (MSD) of the union of the languages `0^* p` for each pattern
/// `p`, each a concatenation of literal and starred words. The set of values
/// is `∪ {[w_0 u_1^{l_1} w_1 …]_k}`.
pub fn pattern_acceptor(base: u32, patterns: &[Vec<PatternPart>]) -> Result<Dfao> {
    // NFA: state 0 carries the leading-zero loop; each pattern is a chain of
    // states with ε-moves across starred blocks.
    let k = base as usize;
    let mut eps: Vec<Vec<usize>> = vec![vec![]];
    let mut edges: Vec<Vec<(u32, usize)>> = vec![vec![(0, 0)]];
    let mut accepting: Vec<bool> = vec![false];
    let new_state = |eps: &mut Vec<Vec<usize>>, edges: &mut Vec<Vec<(u32, usize)>>, acc: &mut Vec<bool>| {
        eps.push(vec![]);
        edges.push(vec![]);
        acc.push(false);
        eps.len() - 1
    };
    for pat in patterns {
        let mut cur = new_state(&mut eps, &mut edges, &mut accepting);
        eps[0].push(cur);
        for part in pat {
            let (word, star) = match part {
                PatternPart::Lit(w) => (w, false),
                PatternPart::Star(w) => (w, true),
            };
            if word.base() != base {
                return Err(Error::invalid("pattern base differs from automaton base"));
            }
            let entry = cur;
            for &d in word.digits() {
                let nxt = new_state(&mut eps, &mut edges, &mut accepting);
                edges[cur].push((d, nxt));
                cur = nxt;
            }
            if star {
                // `entry` ε→ `cur` and `cur` ε→ `entry`: loop of the word.
                let exit = new_state(&mut eps, &mut edges, &mut accepting);
                eps[entry].push(exit);
                eps[cur].push(entry);
                cur = exit;
            }
        }
        accepting[cur] = true;
    }
    let closure = |set: BTreeSet<usize>| -> BTreeSet<usize> {
        let mut out = set.clone();
        let mut stack: Vec<usize> = set.into_iter().collect();
        while let Some(s) = stack.pop() {
            for &t in &eps[s] {
                if out.insert(t) {
                    stack.push(t);
                }
            }
        }
        out
    };
    let start = closure(BTreeSet::from([0]));
    let mut index: HashMap<BTreeSet<usize>, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    index.insert(start, 0);
    let mut rows: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let mut row = vec![0; k];
        for (d, slot) in row.iter_mut().enumerate() {
            let mut next = BTreeSet::new();
            for &s in &sets[i] {
                for &(dd, t) in &edges[s] {
                    if dd as usize == d {
                        next.insert(t);
                    }
                }
            }
            let next = closure(next);
            let id = match index.get(&next) {
                Some(&id) => id,
                None => {
                    sets.push(next.clone());
                    index.insert(next, sets.len() - 1);
                    sets.len() - 1
                }
            };
            *slot = id;
        }
        rows.push(row);
        i += 1;
    }
    let outputs = sets
        .iter()
        .map(|s| u32::from(s.iter().any(|&q| accepting[q])))
        .collect();
    Ok(minimize(&Dfao::new(base, ReadingOrder::Msd, 0, rows, outputs)?))
}

/// Acceptor of a finite set of numbers.
pub fn finite_set_acceptor(base: u32, members: &[u128]) -> Result<Dfao> {
    let pats: Vec<Vec<PatternPart>> = members
        .iter()
        .map(|&m| vec![PatternPart::Lit(DigitWord::expansion(m, base))])
        .collect();
    if pats.is_empty() {
        return Ok(constant(base, 0));
    }
    pattern_acceptor(base, &pats)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> DigitWord {
        DigitWord::parse(2, s).unwrap()
    }

    fn bs_oracle(n: u64) -> u32 {
        // Every maximal zero block between two ones must have even length.
        let s = format!("{n:b}");
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i] == b'1' {
                let mut j = i + 1;
                while j < bytes.len() && bytes[j] == b'0' {
                    j += 1;
                }
                if j < bytes.len() && (j - i - 1) % 2 == 1 {
                    return 0;
                }
                i = j;
            } else {
                i += 1;
            }
        }
        1
    }

    #[test]
    fn baum_sweet_matches_block_oracle() {
        let bs = baum_sweet();
        assert_eq!(bs.eval(0), 1);
        assert_eq!(bs.eval(4), 1);
        assert_eq!(bs.eval(2), 1);
        assert_eq!(bs.eval(5), 0);
        for n in 0..1 << 14 {
            assert_eq!(bs.eval(n), bs_oracle(n), "n = {n}");
        }
        let first: Vec<u64> = (0..16).filter(|&n| bs.eval(n) == 1).collect();
        assert_eq!(first, vec![0, 1, 2, 3, 4, 6, 7, 8, 9, 12, 14, 15]);
    }

    #[test]
    fn eleven_free() {
        let a = from_prohibited_patterns(2, &[w("11")]).unwrap();
        assert_eq!(a.eval(5), 1);
        assert_eq!(a.eval(3), 0);
        for n in 0..1 << 16u64 {
            assert_eq!(a.eval(n), u32::from(n & (n >> 1) == 0));
        }
    }

    #[test]
    fn empty_pattern_set_is_constant_one() {
        let a = from_prohibited_patterns(3, &[]).unwrap();
        assert_eq!(a.num_states(), 1);
        assert!((0..500).all(|n| a.eval(n) == 1));
    }

    #[test]
    fn zero_patterns_ignore_leading_zeros() {
        let a = from_prohibited_patterns(2, &[w("000")]).unwrap();
        assert!(a.verify_zero_invariance(1 << 10));
        assert_eq!(a.eval(1), 1);
        assert_eq!(a.eval(8), 0);
        assert_eq!(a.eval(9), 1);
    }

    #[test]
    fn powers_and_residues() {
        let p = powers_acceptor(2);
        for n in 0..5000u64 {
            assert_eq!(p.eval(n), u32::from(n.is_power_of_two()));
        }
        let r = residue(3, 5);
        for n in 0..1000u64 {
            assert_eq!(r.eval(n) as u64, n % 5);
        }
    }

    #[test]
    fn pattern_acceptor_two_pumps() {
        let pat = vec![
            PatternPart::Lit(w("1")),
            PatternPart::Star(w("0")),
            PatternPart::Lit(w("1")),
            PatternPart::Star(w("0")),
            PatternPart::Lit(w("1")),
        ];
        let a = pattern_acceptor(2, &[pat]).unwrap();
        for n in 0..1 << 12u64 {
            let s = format!("{n:b}");
            let ones = s.matches('1').count();
            let expect = ones == 3 && s.ends_with('1');
            assert_eq!(a.eval(n) == 1, expect, "n = {n}");
        }
        assert!(a.verify_zero_invariance(1 << 10));
    }

    #[test]
    fn finite_sets() {
        let a = finite_set_acceptor(2, &[3, 10, 17]).unwrap();
        let got: Vec<u64> = (0..100).filter(|&n| a.eval(n) == 1).collect();
        assert_eq!(got, vec![3, 10, 17]);
    }
}
