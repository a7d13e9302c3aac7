//! The dichotomy for `{n : a_n = 1}`: either some promising state carries two
//! distinct return words of equal length (Condition (i)), or the set is a
//! finite union of basic very sparse sets.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::graph::PromisingGraph;
use super::pattern::{BasicSet, VerySparseDecomposition};
use crate::automaton::{minimize, to_lsd, Dfao};
use crate::digits::DigitWord;
use crate::error::{Error, Result};

/// Default cap on the number of condensation paths enumerated.
pub const DEFAULT_PATH_BUDGET: usize = 200_000;

/// Condition (i) certificate. `automaton` is the minimized LSD automaton the
/// words refer to; `prefix`, `v1`, `v2` hold digits in feeding order (least
/// significant first).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionI {
    pub automaton: Dfao,
    pub state: usize,
    pub prefix: DigitWord,
    pub v1: DigitWord,
    pub v2: DigitWord,
}

impl ConditionI {
    /// Re-checks `v1 ≠ v2`, `|v1| = |v2|`, both return to `state`, the state
    /// is reached by `prefix` and is promising.
    pub fn check(&self) -> bool {
        let a = &self.automaton;
        let run = |s: usize, w: &DigitWord| a.run(s, w.digits().iter().copied());
        self.v1 != self.v2
            && self.v1.len() == self.v2.len()
            && !self.v1.is_empty()
            && run(self.state, &self.v1) == self.state
            && run(self.state, &self.v2) == self.state
            && run(a.initial(), &self.prefix) == self.state
            && super::graph::promising_mask(a)[self.state]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    VerySparse(VerySparseDecomposition),
    ConditionI(ConditionI),
}

impl Classification {
    pub fn is_very_sparse(&self) -> bool {
        matches!(self, Classification::VerySparse(_))
    }

    pub fn variant_name(&self) -> &'static str {
        match self {
            Classification::VerySparse(_) => "VerySparse",
            Classification::ConditionI(_) => "ConditionI",
        }
    }
}

pub fn classify(dfao: &Dfao) -> Result<Classification> {
    classify_with_budget(dfao, DEFAULT_PATH_BUDGET)
}

pub fn classify_with_budget(dfao: &Dfao, path_budget: usize) -> Result<Classification> {
    dfao.require_binary()?;
    let a = minimize(&to_lsd(dfao)?);
    let g = PromisingGraph::build(&a)?;
    let k = a.base();
    // A vertex with two edges inside its component sits on two distinct
    // cycles; otherwise every component is a single vertex or a plain cycle.
    for &s in &g.vertices {
        let inner = g.internal_digits(&a, s);
        if inner.len() >= 2 {
            let c1 = return_word(&a, &g, s, inner[0]);
            let c2 = return_word(&a, &g, s, inner[1]);
            let (l1, l2) = (c1.len(), c2.len());
            let v1 = DigitWord::new(k, c1.repeat(l2))?;
            let v2 = DigitWord::new(k, c2.repeat(l1))?;
            let prefix = DigitWord::new(k, shortest_word(&a, a.initial(), s))?;
            let w = ConditionI {
                automaton: a,
                state: s,
                prefix,
                v1,
                v2,
            };
            if !w.check() {
                return Err(Error::VerificationFailed("Condition (i) witness".into()));
            }
            return Ok(Classification::ConditionI(w));
        }
    }
    Ok(Classification::VerySparse(decompose(&a, &g, path_budget)?))
}

/// Very sparse decomposition; fails if the automaton satisfies Condition (i).
pub fn very_sparse_decomposition(dfao: &Dfao) -> Result<VerySparseDecomposition> {
    match classify(dfao)? {
        Classification::VerySparse(d) => Ok(d),
        Classification::ConditionI(_) => Err(Error::invalid("the set is not very sparse (Condition (i) holds)")),
    }
}

/// `d` followed by the shortest path back to `s` inside its component.
fn return_word(a: &Dfao, g: &PromisingGraph, s: usize, d: u32) -> Vec<u32> {
    let c = g.component[s];
    let start = a.step(s, d);
    let mut word = vec![d];
    word.extend(shortest_path_where(a, start, s, |t| g.component[t] == c));
    word
}

fn shortest_word(a: &Dfao, from: usize, to: usize) -> Vec<u32> {
    shortest_path_where(a, from, to, |_| true)
}

fn shortest_path_where(a: &Dfao, from: usize, to: usize, allowed: impl Fn(usize) -> bool) -> Vec<u32> {
    let n = a.num_states();
    let mut pred: Vec<Option<(usize, u32)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        if s == to {
            break;
        }
        for d in 0..a.base() {
            let t = a.step(s, d);
            if !seen[t] && allowed(t) {
                seen[t] = true;
                pred[t] = Some((s, d));
                queue.push_back(t);
            }
        }
    }
    let mut out = Vec::new();
    let mut cur = to;
    while cur != from {
        let (p, d) = pred[cur].expect("path exists");
        out.push(d);
        cur = p;
    }
    out.reverse();
    out
}

#[derive(Clone)]
enum LsdPart {
    Lit(Vec<u32>),
    Star(Vec<u32>),
}

/// Enumerates condensation paths. Inside a cycle component entered at `e`,
/// the words leading to an exit `x` are `c(e)^l · seg(e, x)`.
fn decompose(a: &Dfao, g: &PromisingGraph, budget: usize) -> Result<VerySparseDecomposition> {
    let k = a.base();
    let mut found: Vec<Vec<LsdPart>> = Vec::new();
    if g.is_promising(a.initial()) {
        let mut stack: Vec<(usize, Vec<LsdPart>)> = vec![(a.initial(), Vec::new())];
        while let Some((entry, prefix)) = stack.pop() {
            let comp = g.component[entry].unwrap();
            let cyclic = !g.internal_digits(a, entry).is_empty();
            // (exit, word from entry to exit)
            let mut exits = vec![(entry, Vec::new())];
            let mut cycle = Vec::new();
            if cyclic {
                let mut s = entry;
                loop {
                    let d = g.internal_digits(a, s)[0];
                    cycle.push(d);
                    s = a.step(s, d);
                    if s == entry {
                        break;
                    }
                    exits.push((s, cycle.clone()));
                }
            }
            for (x, seg) in exits {
                let mut here = prefix.clone();
                if cyclic {
                    here.push(LsdPart::Star(cycle.clone()));
                }
                here.push(LsdPart::Lit(seg));
                if a.output_of(x) == 1 {
                    found.push(here.clone());
                    if found.len() > budget {
                        return Err(Error::budget("very sparse decomposition paths", budget));
                    }
                }
                for d in 0..k {
                    let t = a.step(x, d);
                    if g.is_promising(t) && g.component[t] != Some(comp) {
                        let mut next = here.clone();
                        next.push(LsdPart::Lit(vec![d]));
                        stack.push((t, next));
                    }
                }
            }
        }
    }
    // Reverse to most-significant-first patterns.
    let sets = found
        .into_iter()
        .map(|parts| {
            let mut lits = vec![Vec::new()];
            let mut pumps = Vec::new();
            for p in parts.into_iter().rev() {
                match p {
                    LsdPart::Lit(mut w) => {
                        w.reverse();
                        lits.last_mut().unwrap().extend(w);
                    }
                    LsdPart::Star(mut w) => {
                        w.reverse();
                        pumps.push(DigitWord::new(k, w).unwrap());
                        lits.push(Vec::new());
                    }
                }
            }
            let lits = lits.into_iter().map(|w| DigitWord::new(k, w).unwrap()).collect();
            BasicSet::new(k, lits, pumps).unwrap()
        })
        .collect();
    Ok(VerySparseDecomposition::new(k, sets))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{
        baum_sweet, constant, finite_set_acceptor, from_prohibited_patterns, pattern_acceptor, powers_acceptor,
        PatternPart,
    };

    #[test]
    fn powers_of_two_very_sparse() {
        let Classification::VerySparse(d) = classify(&powers_acceptor(2)).unwrap() else {
            panic!("expected very sparse");
        };
        assert_eq!(d.rank, 1);
        assert_eq!(d.basic_sets.len(), 1);
        assert_eq!(d.basic_sets[0].to_string(), "1 (0)*");
    }

    #[test]
    fn baum_sweet_condition_i() {
        let c = classify(&baum_sweet()).unwrap();
        let Classification::ConditionI(w) = c else { panic!() };
        assert!(w.check());
    }

    #[test]
    fn trivial_cases() {
        let Classification::VerySparse(d) = classify(&constant(2, 0)).unwrap() else {
            panic!()
        };
        assert!(d.is_empty());
        let f = finite_set_acceptor(2, &[5, 9, 12]).unwrap();
        let Classification::VerySparse(d) = classify(&f).unwrap() else {
            panic!()
        };
        assert_eq!(d.rank, 0);
        assert_eq!(d.members_below(1 << 20).into_iter().collect::<Vec<_>>(), vec![5, 9, 12]);
        assert!(!classify(&from_prohibited_patterns(2, &[]).unwrap())
            .unwrap()
            .is_very_sparse());
    }

    #[test]
    fn rank_two_fixture() {
        let w = |s: &str| DigitWord::parse(2, s).unwrap();
        let pat = vec![
            PatternPart::Lit(w("1")),
            PatternPart::Star(w("0")),
            PatternPart::Lit(w("1")),
            PatternPart::Star(w("0")),
            PatternPart::Lit(w("1")),
        ];
        let a = pattern_acceptor(2, &[pat]).unwrap();
        let d = very_sparse_decomposition(&a).unwrap();
        assert_eq!(d.rank, 2);
        let members = d.members_below(1 << 16);
        for n in 0..1u64 << 16 {
            assert_eq!(members.contains(&(n as u128)), a.eval(n) == 1);
        }
    }
}
