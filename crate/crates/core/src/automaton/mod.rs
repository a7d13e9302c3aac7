//! Finite k-automata with output (DFAOs).
//!
//! A [`Dfao`] reads the base-k expansion of `n` in its declared
//! [`ReadingOrder`] and emits the output symbol of the state it stops in.
//! Automata are immutable once built; every transformation returns a new one.

mod builders;
mod format;
mod kernel;
mod pumping;
mod transform;

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::digits::{digits_msd, DigitWord};
use crate::error::{Error, Result};

pub use builders::*;
pub use kernel::{kernel, kernel_with_budget, KernelClass, KernelReport};
pub use pumping::{pumping_witness, PumpingWitness};
pub use transform::{
    base_power, minimize, product, reverse_reading, reverse_reading_with_budget, to_lsd, to_msd, trim,
};

/// Default cap on states produced by subset-style constructions.
pub const DEFAULT_STATE_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReadingOrder {
    /// Most significant digit first.
    Msd,
    /// Least significant digit first.
    Lsd,
}

impl ReadingOrder {
    pub fn flipped(self) -> Self {
        match self {
            ReadingOrder::Msd => ReadingOrder::Lsd,
            ReadingOrder::Lsd => ReadingOrder::Msd,
        }
    }
}

/// A deterministic finite automaton with output over the digit alphabet
/// `{0, …, base-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dfao {
    base: u32,
    order: ReadingOrder,
    initial: usize,
    /// Row-major transition table: `delta[s * base + d]`.
    delta: Vec<usize>,
    output: Vec<u32>,
}

impl Dfao {
    /// Builds an automaton from one transition row per state.
    pub fn new(
        base: u32,
        order: ReadingOrder,
        initial: usize,
        rows: Vec<Vec<usize>>,
        output: Vec<u32>,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::invalid("base must be at least 2"));
        }
        let n = rows.len();
        if n == 0 {
            return Err(Error::invalid("automaton needs at least one state"));
        }
        if output.len() != n {
            return Err(Error::invalid(format!(
                "{} output symbols for {n} states",
                output.len()
            )));
        }
        if initial >= n {
            return Err(Error::invalid(format!("initial state {initial} out of range")));
        }
        let mut delta = Vec::with_capacity(n * base as usize);
        for (s, row) in rows.iter().enumerate() {
            if row.len() != base as usize {
                return Err(Error::invalid(format!(
                    "state {s} has {} transitions, expected {base}",
                    row.len()
                )));
            }
            if let Some(t) = row.iter().find(|&&t| t >= n) {
                return Err(Error::invalid(format!("state {s} points to missing state {t}")));
            }
            delta.extend_from_slice(row);
        }
        Ok(Dfao {
            base,
            order,
            initial,
            delta,
            output,
        })
    }

    pub(crate) fn from_parts(
        base: u32,
        order: ReadingOrder,
        initial: usize,
        delta: Vec<usize>,
        output: Vec<u32>,
    ) -> Self {
        debug_assert_eq!(delta.len(), output.len() * base as usize);
        Dfao {
            base,
            order,
            initial,
            delta,
            output,
        }
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn order(&self) -> ReadingOrder {
        self.order
    }

    pub fn initial(&self) -> usize {
        self.initial
    }

    pub fn num_states(&self) -> usize {
        self.output.len()
    }

    pub fn outputs(&self) -> &[u32] {
        &self.output
    }

    pub fn output_of(&self, state: usize) -> u32 {
        self.output[state]
    }

    #[inline]
    pub fn step(&self, state: usize, digit: u32) -> usize {
        self.delta[state * self.base as usize + digit as usize]
    }

    /// `δ̃(state, word)`, feeding `digits` in the given sequence.
    pub fn run<I: IntoIterator<Item = u32>>(&self, state: usize, digits: I) -> usize {
        digits.into_iter().fold(state, |s, d| self.step(s, d))
    }

    /// Output alphabet actually used by some state.
    pub fn alphabet(&self) -> BTreeSet<u32> {
        self.output.iter().copied().collect()
    }

    /// True if every output is 0 or 1.
    pub fn is_binary(&self) -> bool {
        self.output.iter().all(|&o| o <= 1)
    }

    pub(crate) fn require_binary(&self) -> Result<()> {
        if self.is_binary() {
            Ok(())
        } else {
            Err(Error::invalid("operation needs a {0,1}-valued automaton"))
        }
    }

    /// `a_n`.
    pub fn eval(&self, n: u64) -> u32 {
        self.eval_u128(n as u128)
    }

    pub fn eval_u128(&self, n: u128) -> u32 {
        let k = self.base as u128;
        let state = match self.order {
            ReadingOrder::Lsd => {
                let mut s = self.initial;
                let mut m = n;
                while m > 0 {
                    s = self.step(s, (m % k) as u32);
                    m /= k;
                }
                s
            }
            ReadingOrder::Msd => {
                let mut buf = [0u32; 128];
                let mut len = 0;
                let mut m = n;
                while m > 0 {
                    buf[len] = (m % k) as u32;
                    m /= k;
                    len += 1;
                }
                buf[..len].iter().rev().fold(self.initial, |s, &d| self.step(s, d))
            }
        };
        self.output[state]
    }

    pub fn eval_big(&self, n: &BigUint) -> u32 {
        match n.to_u128() {
            Some(m) => self.eval_u128(m),
            None => self.eval_word(&DigitWord::expansion_big(n, self.base)),
        }
    }

    /// Output on the number `[word]_k`, where `word` is stored most significant
    /// digit first. Leading zeros in `word` are fed to the automaton as-is.
    pub fn eval_word(&self, word: &DigitWord) -> u32 {
        debug_assert_eq!(word.base(), self.base);
        let state = match self.order {
            ReadingOrder::Msd => self.run(self.initial, word.digits().iter().copied()),
            ReadingOrder::Lsd => self.run(self.initial, word.digits().iter().rev().copied()),
        };
        self.output[state]
    }

    /// Runs the automaton on a word given in its own reading order.
    pub fn eval_reading(&self, digits: &[u32]) -> u32 {
        self.output[self.run(self.initial, digits.iter().copied())]
    }

    /// Checks that padding `(n)_k` with up to three zeros on the significant
    /// end never changes the output, for all `n < horizon`.
    pub fn verify_zero_invariance(&self, horizon: u64) -> bool {
        (0..horizon).all(|n| {
            let msd = digits_msd(n as u128, self.base);
            let plain = self.eval(n);
            (1..=3).all(|pad| {
                let mut padded = vec![0u32; pad];
                padded.extend_from_slice(&msd);
                let word = DigitWord::new(self.base, padded).expect("digits in range");
                self.eval_word(&word) == plain
            })
        })
    }

    /// Applies `f` to every output symbol.
    pub fn map_outputs(&self, f: impl Fn(u32) -> u32) -> Dfao {
        Dfao {
            output: self.output.iter().map(|&o| f(o)).collect(),
            ..self.clone()
        }
    }

    /// States reachable from the initial state, in BFS order.
    pub fn reachable(&self) -> Vec<usize> {
        let mut seen = vec![false; self.num_states()];
        let mut order = vec![self.initial];
        seen[self.initial] = true;
        let mut i = 0;
        while i < order.len() {
            let s = order[i];
            for d in 0..self.base {
                let t = self.step(s, d);
                if !seen[t] {
                    seen[t] = true;
                    order.push(t);
                }
            }
            i += 1;
        }
        order
    }

    /// Structural equality after canonical renumbering of the reachable part.
    pub fn is_isomorphic(&self, other: &Dfao) -> bool {
        trim(self) == trim(other)
    }

    pub fn to_text(&self) -> String {
        format::to_text(self)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        format::parse(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thue_morse_values() {
        let tm = thue_morse();
        assert_eq!(tm.eval(0), 0);
        assert_eq!(tm.eval(11), 1);
        assert_eq!(tm.eval(3), 0);
        for n in 0..4096u64 {
            assert_eq!(tm.eval(n), n.count_ones() % 2);
        }
    }

    #[test]
    fn lsd_and_msd_agree_on_symmetric_machine() {
        let tm = thue_morse();
        let lsd = Dfao::new(2, ReadingOrder::Lsd, 0, vec![vec![0, 1], vec![1, 0]], vec![0, 1]).unwrap();
        for n in 0..1000 {
            assert_eq!(tm.eval(n), lsd.eval(n));
        }
    }

    #[test]
    fn zero_invariance_checks() {
        assert!(thue_morse().verify_zero_invariance(512));
        assert!(constant(3, 5).verify_zero_invariance(100));
        // Reading a leading 0 moves to a state with a different output.
        let bad = Dfao::new(2, ReadingOrder::Msd, 0, vec![vec![1, 0], vec![1, 1]], vec![0, 1]).unwrap();
        assert!(!bad.verify_zero_invariance(16));
    }

    #[test]
    fn rejects_malformed() {
        assert!(Dfao::new(2, ReadingOrder::Msd, 0, vec![vec![0]], vec![0]).is_err());
        assert!(Dfao::new(2, ReadingOrder::Msd, 0, vec![vec![0, 3]], vec![0]).is_err());
        assert!(Dfao::new(2, ReadingOrder::Msd, 2, vec![vec![0, 0]], vec![0]).is_err());
    }

    #[test]
    fn eval_word_respects_padding() {
        let tm = thue_morse();
        let w = DigitWord::parse(2, "0001011").unwrap();
        assert_eq!(tm.eval_word(&w), 1);
    }
}
