//! Explicit pumping words.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::transform::to_msd;
use super::Dfao;
use crate::digits::DigitWord;
use crate::error::{Error, Result};

/// Words with `a_{[u0 v^t u1]_k} = value` for every `t ≥ 0`; all stored most
/// significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PumpingWitness {
    pub u0: DigitWord,
    pub v: DigitWord,
    pub u1: DigitWord,
    pub value: u32,
}

impl PumpingWitness {
    pub fn word(&self, t: usize) -> DigitWord {
        self.u0.concat(&self.v.repeat(t)).concat(&self.u1)
    }

    pub fn holds_for(&self, dfao: &Dfao, t_max: usize) -> bool {
        (0..=t_max).all(|t| dfao.eval_word(&self.word(t)) == self.value)
    }
}

/// Shortest words (BFS, digits in increasing order) from `from` to every
/// state, as predecessor links.
fn bfs(dfao: &Dfao, from: usize) -> Vec<Option<(usize, u32)>> {
    let mut pred = vec![None; dfao.num_states()];
    let mut seen = vec![false; dfao.num_states()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for d in 0..dfao.base() {
            let t = dfao.step(s, d);
            if !seen[t] {
                seen[t] = true;
                pred[t] = Some((s, d));
                queue.push_back(t);
            }
        }
    }
    pred
}

fn path(pred: &[Option<(usize, u32)>], from: usize, to: usize) -> Vec<u32> {
    let mut digits = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, d) = pred[cur].expect("target reachable");
        digits.push(d);
        cur = p;
    }
    digits.reverse();
    digits
}

fn reaches(pred: &[Option<(usize, u32)>], from: usize, to: usize) -> bool {
    to == from || pred[to].is_some()
}

/// Leading-zero pump flag, total length, then the words `u0, v, u1`.
type CandidateKey = (bool, usize, Vec<u32>, Vec<u32>, Vec<u32>);

/// Finds `u0, v, u1` with `v` nonempty. Candidates are built from a state `q`
/// on a cycle: `u0` reaches `q`, `v` is a shortest cycle through `q` starting
/// with a chosen digit, and `u1` leads from `q` to an output-`value` state.
/// Pumps that only repeat leading zeros are used last; among the rest the
/// shortest total length wins, ties broken lexicographically. The result is
/// re-verified for `t ≤ 8`.
pub fn pumping_witness(dfao: &Dfao, value: u32) -> Result<PumpingWitness> {
    let a = to_msd(dfao)?;
    let k = a.base();
    let from_start = bfs(&a, a.initial());
    let mut best: Option<(CandidateKey, PumpingWitness)> = None;
    for q in a.reachable() {
        let from_q = bfs(&a, q);
        let Some(target) = (0..a.num_states())
            .filter(|&s| a.output_of(s) == value && reaches(&from_q, q, s))
            .min_by_key(|&s| (path(&from_q, q, s).len(), path(&from_q, q, s)))
        else {
            continue;
        };
        let x = path(&from_start, a.initial(), q);
        let z = path(&from_q, q, target);
        for d in 0..k {
            let after = a.step(q, d);
            let back = bfs(&a, after);
            if !reaches(&back, after, q) {
                continue;
            }
            let mut y = vec![d];
            y.extend(path(&back, after, q));
            let degenerate = x.iter().chain(y.iter()).all(|&c| c == 0);
            let key = (degenerate, x.len() + y.len() + z.len(), x.clone(), y.clone(), z.clone());
            if best.as_ref().is_none_or(|(bk, _)| key < *bk) {
                let w = PumpingWitness {
                    u0: DigitWord::new(k, x.clone())?,
                    v: DigitWord::new(k, y)?,
                    u1: DigitWord::new(k, z.clone())?,
                    value,
                };
                best = Some((key, w));
            }
        }
    }
    let (_, w) = best.ok_or_else(|| Error::NoWitness(format!("no pumpable word with output {value}")))?;
    if !w.holds_for(dfao, 8) {
        return Err(Error::VerificationFailed(format!(
            "pumping witness ({}, {}, {}) fails",
            w.u0, w.v, w.u1
        )));
    }
    Ok(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{constant, powers_acceptor, thue_morse};

    #[test]
    fn powers_of_two() {
        let w = pumping_witness(&powers_acceptor(2), 1).unwrap();
        assert_eq!(w.u0.to_string(), "1");
        assert_eq!(w.v.to_string(), "0");
        assert!(w.u1.is_empty());
        assert!(w.holds_for(&powers_acceptor(2), 64));
    }

    #[test]
    fn thue_morse_and_constant() {
        let tm = thue_morse();
        let w = pumping_witness(&tm, 1).unwrap();
        assert!(w.holds_for(&tm, 64));
        let c = constant(2, 1);
        let w = pumping_witness(&c, 1).unwrap();
        assert!(!w.v.is_empty());
        assert!(pumping_witness(&c, 0).is_err());
    }
}
