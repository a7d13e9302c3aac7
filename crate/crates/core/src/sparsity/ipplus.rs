//! Factor universality and translated IP-sets.

use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::graph::promising_mask;
use crate::automaton::{minimize, to_lsd, to_msd, Dfao, DEFAULT_STATE_BUDGET};
use crate::digits::DigitWord;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorReport {
    pub universal: bool,
    /// A shortest word that is not a factor of any accepted expansion.
    pub missing: Option<DigitWord>,
}

/// Is every word a factor of `(n)_k` for some `n` with `a_n = 1`?
pub fn factor_universality(dfao: &Dfao) -> Result<bool> {
    Ok(factor_report(dfao, DEFAULT_STATE_BUDGET)?.universal)
}

/// Subset construction over the factor-closure automaton. Reading starts in
/// any state reached by a word with a nonzero first digit, or in a virtual
/// "nothing read yet" state that only accepts a nonzero digit; a word is a
/// factor iff some run ends in a co-accepting state.
pub fn factor_report(dfao: &Dfao, budget: usize) -> Result<FactorReport> {
    dfao.require_binary()?;
    let a = minimize(&to_msd(dfao)?);
    let k = a.base();
    let n = a.num_states();
    let co = promising_mask(&a);
    // States reachable by a nonempty word whose first digit is nonzero.
    let mut inner = vec![false; n];
    let mut queue: VecDeque<usize> = VecDeque::new();
    for d in 1..k {
        let t = a.step(a.initial(), d);
        if !inner[t] {
            inner[t] = true;
            queue.push_back(t);
        }
    }
    while let Some(s) = queue.pop_front() {
        for d in 0..k {
            let t = a.step(s, d);
            if !inner[t] {
                inner[t] = true;
                queue.push_back(t);
            }
        }
    }
    // Subset elements: Some(state) or None for the virtual start.
    let start: BTreeSet<Option<usize>> = (0..n)
        .filter(|&s| inner[s])
        .map(Some)
        .chain(std::iter::once(None))
        .collect();
    let accepting = |set: &BTreeSet<Option<usize>>| {
        set.iter().any(|e| match e {
            Some(s) => co[*s],
            None => co[a.initial()],
        })
    };
    let mut index: HashMap<BTreeSet<Option<usize>>, usize> = HashMap::new();
    let mut sets = vec![start.clone()];
    let mut pred: Vec<Option<(usize, u32)>> = vec![None];
    index.insert(start, 0);
    let mut i = 0;
    while i < sets.len() {
        if !accepting(&sets[i]) {
            let mut w = Vec::new();
            let mut cur = i;
            while let Some((p, d)) = pred[cur] {
                w.push(d);
                cur = p;
            }
            w.reverse();
            return Ok(FactorReport {
                universal: false,
                missing: Some(DigitWord::new(k, w)?),
            });
        }
        for d in 0..k {
            let next: BTreeSet<Option<usize>> = sets[i]
                .iter()
                .filter_map(|e| match e {
                    Some(s) => Some(Some(a.step(*s, d))),
                    None if d != 0 => Some(Some(a.step(a.initial(), d))),
                    None => None,
                })
                .collect();
            if !index.contains_key(&next) {
                if sets.len() >= budget {
                    return Err(Error::budget("factor universality subsets", budget));
                }
                index.insert(next.clone(), sets.len());
                sets.push(next);
                pred.push(Some((i, d)));
            }
        }
        i += 1;
    }
    Ok(FactorReport {
        universal: true,
        missing: None,
    })
}

/// `N + FS(n_i)` inside the set, from the two-state diagram
/// `s --0^l--> s'`, `s --v--> s`, `s' --0^l--> s'`, `s' --v--> s`
/// in the LSD automaton, where `v = [m]_k^R` has length exactly `l`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpPlusWitness {
    pub base: u32,
    pub automaton: Dfao,
    pub s: usize,
    pub s_prime: usize,
    pub l: usize,
    pub m: BigUint,
    /// `(N)_k^R`, the word reaching `s`.
    pub shift_word: DigitWord,
    pub shift: BigUint,
    pub generators: Vec<BigUint>,
    pub verified_depth: usize,
}

impl IpPlusWitness {
    /// Re-checks the diagram and every `N + n_α` with `α ⊆ [depth]`.
    pub fn verify(&self, dfao: &Dfao, depth: usize) -> Result<()> {
        let a = &self.automaton;
        let k = self.base;
        let mut v: Vec<u32> = DigitWord::expansion_big(&self.m, k).digits().to_vec();
        v.reverse();
        let zeros = vec![0u32; self.l];
        let run = |s: usize, w: &[u32]| a.run(s, w.iter().copied());
        let diagram = v.len() == self.l
            && run(self.s, &zeros) == self.s_prime
            && run(self.s, &v) == self.s
            && run(self.s_prime, &zeros) == self.s_prime
            && run(self.s_prime, &v) == self.s
            && a.output_of(self.s) == 1
            && run(a.initial(), self.shift_word.digits()) == self.s;
        if !diagram {
            return Err(Error::VerificationFailed("IP+ diagram".into()));
        }
        let depth = depth.min(self.generators.len());
        for mask in 0u64..(1u64 << depth) {
            let mut x = self.shift.clone();
            for (i, g) in self.generators.iter().enumerate().take(depth) {
                if mask >> i & 1 == 1 {
                    x += g;
                }
            }
            if dfao.eval_big(&x) != 1 {
                return Err(Error::VerificationFailed(format!("N + n_α = {x} is not a member")));
            }
        }
        Ok(())
    }
}

fn lsd_value(digits: &[u32], k: u32) -> BigUint {
    digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * k + d)
}

/// BFS over (state, last digit nonzero) pairs; returns a shortest word from
/// `from` to `to` that is empty or ends in a nonzero digit (nonempty if
/// `nonempty`).
fn word_ending_nonzero(a: &Dfao, from: usize, to: usize, nonempty: bool) -> Option<Vec<u32>> {
    let n = a.num_states();
    let key = |s: usize, f: bool| 2 * s + f as usize;
    let mut pred: Vec<Option<(usize, u32)>> = vec![None; 2 * n];
    let mut seen = vec![false; 2 * n];
    let start = key(from, !nonempty);
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x == key(to, true) {
            let mut w = Vec::new();
            let mut cur = x;
            while cur != start {
                let (p, d) = pred[cur].unwrap();
                w.push(d);
                cur = p;
            }
            w.reverse();
            return Some(w);
        }
        let s = x / 2;
        for d in 0..a.base() {
            let y = key(a.step(s, d), d != 0);
            if !seen[y] {
                seen[y] = true;
                pred[y] = Some((x, d));
                queue.push_back(y);
            }
        }
    }
    None
}

pub fn ip_plus_witness(dfao: &Dfao, depth: usize) -> Result<IpPlusWitness> {
    let report = factor_report(dfao, DEFAULT_STATE_BUDGET)?;
    if !report.universal {
        return Err(Error::NoWitness(format!(
            "hypothesis fails: {} is not a factor of any member",
            report.missing.map(|w| w.to_string()).unwrap_or_default()
        )));
    }
    let a = minimize(&to_lsd(dfao)?);
    let k = a.base();
    for s in 0..a.num_states() {
        if a.output_of(s) != 1 {
            continue;
        }
        let Some(x) = word_ending_nonzero(&a, a.initial(), s, false) else {
            continue;
        };
        // Orbit of s under the digit 0: preperiod and period.
        let mut orbit = vec![s];
        let (pre, period) = loop {
            let t = a.step(*orbit.last().unwrap(), 0);
            if let Some(i) = orbit.iter().position(|&q| q == t) {
                break (i, orbit.len() - i);
            }
            orbit.push(t);
        };
        let p = pre.max(1).div_ceil(period) * period;
        let s_prime = a.run(s, std::iter::repeat_n(0, p));
        let Some(w) = word_ending_nonzero(&a, s_prime, s, true) else {
            continue;
        };
        let mut block = vec![0u32; p];
        block.extend_from_slice(&w);
        let v: Vec<u32> = block.repeat(p);
        let l = v.len();
        let m = lsd_value(&v, k);
        let h = x.len();
        let kb = BigUint::from(k);
        let generators = (0..depth.max(1)).map(|i| &m * kb.pow((l * i + h) as u32)).collect();
        let wit = IpPlusWitness {
            base: k,
            automaton: a.clone(),
            s,
            s_prime,
            l,
            m,
            shift: lsd_value(&x, k),
            shift_word: DigitWord::new(k, x)?,
            generators,
            verified_depth: depth,
        };
        wit.verify(dfao, depth)?;
        return Ok(wit);
    }
    Err(Error::NoWitness(
        "no accepting state admits the two-state diagram".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{baum_sweet, constant, contains_pattern, from_prohibited_patterns};

    fn w(s: &str) -> DigitWord {
        DigitWord::parse(2, s).unwrap()
    }

    #[test]
    fn universality_examples() {
        assert!(factor_universality(&constant(2, 1)).unwrap());
        let r = factor_report(&baum_sweet(), 1000).unwrap();
        assert!(!r.universal);
        assert_eq!(r.missing.unwrap().to_string(), "101");
        let r = factor_report(&from_prohibited_patterns(2, &[w("11")]).unwrap(), 1000).unwrap();
        assert_eq!(r.missing.unwrap().to_string(), "11");
        assert!(!factor_universality(&constant(2, 0)).unwrap());
    }

    #[test]
    fn ip_plus_examples() {
        let c = constant(2, 1);
        ip_plus_witness(&c, 10).unwrap();
        let a = contains_pattern(2, &w("101")).unwrap();
        assert!(factor_universality(&a).unwrap());
        let wit = ip_plus_witness(&a, 10).unwrap();
        assert_eq!(wit.verified_depth, 10);
        assert!(matches!(ip_plus_witness(&baum_sweet(), 10), Err(Error::NoWitness(_))));
    }
}
