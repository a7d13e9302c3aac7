//! Basic very sparse sets `{[w_0 u_1^{l_1} w_1 … u_r^{l_r} w_r]_k}` and their
//! finite unions.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::automaton::{pattern_acceptor, Dfao, PatternPart};
use crate::digits::DigitWord;
use crate::error::{Error, Result};

/// One basic set. `lits` has one more entry than `pumps`; every pump is
/// nonempty. Words are most significant digit first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasicSet {
    pub base: u32,
    pub lits: Vec<DigitWord>,
    pub pumps: Vec<DigitWord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Part {
    Lit(Vec<u32>),
    Star(Vec<u32>),
}

impl BasicSet {
    pub fn new(base: u32, lits: Vec<DigitWord>, pumps: Vec<DigitWord>) -> Result<Self> {
        if lits.len() != pumps.len() + 1 {
            return Err(Error::invalid("a basic set needs one more literal than pumps"));
        }
        if pumps.iter().any(|p| p.is_empty()) {
            return Err(Error::invalid("pumps must be nonempty"));
        }
        if lits.iter().chain(pumps.iter()).any(|w| w.base() != base) {
            return Err(Error::invalid("mixed bases in basic set"));
        }
        Ok(BasicSet { base, lits, pumps })
    }

    /// Parses `"1 (0)* 1 (0)* 1"`: bare tokens are literals, `(w)*` pumps.
    pub fn parse(base: u32, text: &str) -> Result<Self> {
        let mut parts = Vec::new();
        for tok in text.split_whitespace() {
            if let Some(inner) = tok.strip_prefix('(').and_then(|t| t.strip_suffix(")*")) {
                parts.push(Part::Star(DigitWord::parse(base, inner)?.digits().to_vec()));
            } else {
                parts.push(Part::Lit(DigitWord::parse(base, tok)?.digits().to_vec()));
            }
        }
        Self::from_parts(base, &parts)
    }

    pub fn rank(&self) -> usize {
        self.pumps.len()
    }

    fn parts(&self) -> Vec<Part> {
        let mut out = Vec::with_capacity(2 * self.pumps.len() + 1);
        for (i, lit) in self.lits.iter().enumerate() {
            out.push(Part::Lit(lit.digits().to_vec()));
            if let Some(p) = self.pumps.get(i) {
                out.push(Part::Star(p.digits().to_vec()));
            }
        }
        out
    }

    fn from_parts(base: u32, parts: &[Part]) -> Result<Self> {
        let mut lits = vec![Vec::new()];
        let mut pumps = Vec::new();
        for p in parts {
            match p {
                Part::Lit(w) => lits.last_mut().unwrap().extend_from_slice(w),
                Part::Star(w) => {
                    pumps.push(DigitWord::new(base, w.clone())?);
                    lits.push(Vec::new());
                }
            }
        }
        let lits = lits
            .into_iter()
            .map(|w| DigitWord::new(base, w))
            .collect::<Result<_>>()?;
        BasicSet::new(base, lits, pumps)
    }

    pub fn pattern_parts(&self) -> Vec<PatternPart> {
        self.parts()
            .into_iter()
            .map(|p| match p {
                Part::Lit(w) => PatternPart::Lit(DigitWord::new(self.base, w).unwrap()),
                Part::Star(w) => PatternPart::Star(DigitWord::new(self.base, w).unwrap()),
            })
            .collect()
    }

    /// The word with pump exponents `exps`.
    pub fn word(&self, exps: &[usize]) -> DigitWord {
        assert_eq!(exps.len(), self.pumps.len());
        let mut w = self.lits[0].clone();
        for (i, &e) in exps.iter().enumerate() {
            w = w.concat(&self.pumps[i].repeat(e)).concat(&self.lits[i + 1]);
        }
        w
    }

    /// All members below `bound`, in increasing order.
    pub fn members_below(&self, bound: u128) -> Vec<u128> {
        let mut out = BTreeSet::new();
        let parts = self.parts();
        enumerate(&parts, 0, 0, self.base as u128, bound, &mut out);
        out.into_iter().collect()
    }

    /// Drops pumps that can only add leading zeros, then applies the collapse
    /// `u^* u^e u^* = u^e u^*`. Both rewrites keep the value set unchanged.
    pub fn simplified(&self) -> BasicSet {
        let mut lits: Vec<Vec<u32>> = self.lits.iter().map(|w| w.digits().to_vec()).collect();
        let mut pumps: Vec<Vec<u32>> = self.pumps.iter().map(|w| w.digits().to_vec()).collect();
        let zero = |w: &[u32]| w.iter().all(|&d| d == 0);
        while !pumps.is_empty() && zero(&pumps[0]) && zero(&lits[0]) {
            pumps.remove(0);
            let first = lits.remove(0);
            lits[0].splice(0..0, first);
        }
        let mut j = 0;
        while j + 1 < pumps.len() {
            if pumps[j] == pumps[j + 1] && is_power_of(&lits[j + 1], &pumps[j]) {
                let mid = lits.remove(j + 1);
                lits[j].extend(mid);
                pumps.remove(j + 1);
            } else {
                j += 1;
            }
        }
        let w = |v: Vec<u32>| DigitWord::new(self.base, v).unwrap();
        BasicSet {
            base: self.base,
            lits: lits.into_iter().map(w).collect(),
            pumps: pumps.into_iter().map(w).collect(),
        }
    }

    /// Basic sets whose words `y` satisfy `y·u ∈ 0^* L`, where `L` is this
    /// set's language: together they describe `{n : [(n)_k u]_k ∈ self}`.
    pub fn right_quotient(&self, u: &DigitWord) -> Vec<BasicSet> {
        let mut out = Vec::new();
        quotient(self.parts(), u.digits(), &mut out);
        let mut sets: Vec<BasicSet> = out
            .into_iter()
            .map(|p| BasicSet::from_parts(self.base, &p).unwrap())
            .collect();
        sets.sort();
        sets.dedup();
        sets
    }
}

fn is_power_of(w: &[u32], p: &[u32]) -> bool {
    !p.is_empty() && w.len().is_multiple_of(p.len()) && w.chunks(p.len()).all(|c| c == p)
}

fn enumerate(parts: &[Part], idx: usize, value: u128, k: u128, bound: u128, out: &mut BTreeSet<u128>) {
    if value >= bound {
        return;
    }
    let Some(part) = parts.get(idx) else {
        out.insert(value);
        return;
    };
    let push = |mut v: u128, w: &[u32]| -> Option<u128> {
        for &d in w {
            v = v.checked_mul(k)?.checked_add(d as u128)?;
            if v >= bound {
                return None;
            }
        }
        Some(v)
    };
    match part {
        Part::Lit(w) => {
            if let Some(v) = push(value, w) {
                enumerate(parts, idx + 1, v, k, bound, out);
            }
        }
        Part::Star(w) => {
            let mut v = value;
            loop {
                enumerate(parts, idx + 1, v, k, bound, out);
                if v == 0 && w.iter().all(|&d| d == 0) {
                    break;
                }
                match push(v, w) {
                    Some(next) => v = next,
                    None => break,
                }
            }
        }
    }
}

fn quotient(mut parts: Vec<Part>, u: &[u32], out: &mut Vec<Vec<Part>>) {
    if u.is_empty() {
        out.push(parts);
        return;
    }
    let Some(last) = parts.pop() else {
        // Whatever is left of `u` must be leading zeros.
        if u.iter().all(|&d| d == 0) {
            out.push(Vec::new());
        }
        return;
    };
    match last {
        Part::Lit(c) => {
            if c.len() <= u.len() {
                if u.ends_with(&c) {
                    quotient(parts, &u[..u.len() - c.len()], out);
                }
            } else if c.ends_with(u) {
                parts.push(Part::Lit(c[..c.len() - u.len()].to_vec()));
                out.push(parts);
            }
        }
        Part::Star(w) => {
            // Zero copies.
            quotient(parts.clone(), u, out);
            // At least one copy: strip one from the right.
            if w.len() <= u.len() {
                if u.ends_with(&w) {
                    parts.push(Part::Star(w.clone()));
                    quotient(parts, &u[..u.len() - w.len()], out);
                }
            } else if w.ends_with(u) {
                let rest = w[..w.len() - u.len()].to_vec();
                parts.push(Part::Star(w));
                parts.push(Part::Lit(rest));
                out.push(parts);
            }
        }
    }
}

impl fmt::Display for BasicSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, lit) in self.lits.iter().enumerate() {
            if !lit.is_empty() {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{lit}")?;
                first = false;
            }
            if let Some(p) = self.pumps.get(i) {
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "({p})*")?;
                first = false;
            }
        }
        if first {
            write!(f, "ε")?;
        }
        Ok(())
    }
}

/// Finite union of basic sets, with the rank after simplification.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerySparseDecomposition {
    pub base: u32,
    pub basic_sets: Vec<BasicSet>,
    pub rank: usize,
}

impl VerySparseDecomposition {
    /// Simplifies and deduplicates the given sets.
    pub fn new(base: u32, sets: Vec<BasicSet>) -> Self {
        let mut basic_sets: Vec<BasicSet> = sets.iter().map(BasicSet::simplified).collect();
        basic_sets.sort();
        basic_sets.dedup();
        let rank = basic_sets.iter().map(BasicSet::rank).max().unwrap_or(0);
        VerySparseDecomposition { base, basic_sets, rank }
    }

    pub fn is_empty(&self) -> bool {
        self.basic_sets.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    pub fn members_below(&self, bound: u128) -> BTreeSet<u128> {
        self.basic_sets.iter().flat_map(|b| b.members_below(bound)).collect()
    }

    /// `|E ∩ [lo, hi)|` by digit enumeration.
    pub fn count_between(&self, lo: u128, hi: u128) -> usize {
        self.members_below(hi).range(lo..).count()
    }

    /// MSD acceptor of the same set, built independently from the patterns.
    pub fn to_acceptor(&self) -> Result<Dfao> {
        let pats: Vec<Vec<PatternPart>> = self.basic_sets.iter().map(BasicSet::pattern_parts).collect();
        if pats.is_empty() {
            return Ok(crate::automaton::constant(self.base, 0));
        }
        pattern_acceptor(self.base, &pats)
    }

    /// Shape constant `C` of the window bound `C·(log_k N + 2)^r`.
    pub fn window_constant(&self) -> f64 {
        let max_pump = self
            .basic_sets
            .iter()
            .flat_map(|b| &b.pumps)
            .map(|p| p.len())
            .max()
            .unwrap_or(0);
        let max_lit = self
            .basic_sets
            .iter()
            .flat_map(|b| &b.lits)
            .map(|p| p.len())
            .max()
            .unwrap_or(0);
        2.0 * self.basic_sets.len().max(1) as f64 * ((max_pump + max_lit + 1) as f64).powi(self.rank as i32)
    }
}

impl fmt::Display for VerySparseDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basic_sets.iter().map(|b| format!("[{b}]")).collect();
        write!(f, "base {} rank {}: {}", self.base, self.rank, parts.join(" ∪ "))
    }
}

/// Exact window count together with the shape bound it must respect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowCount {
    pub start: u128,
    pub len: u128,
    pub count: usize,
    pub bound: f64,
}

impl WindowCount {
    pub fn within_bound(&self) -> bool {
        self.count as f64 <= self.bound
    }
}

/// `|E ∩ [M, M+N)|` and the bound `C·(log_k N + 2)^r`.
pub fn window_count(decomp: &VerySparseDecomposition, start: u128, len: u128) -> WindowCount {
    let count = decomp.count_between(start, start.saturating_add(len));
    let log = (len.max(1) as f64).ln() / (decomp.base as f64).ln();
    let bound = decomp.window_constant() * (log + 2.0).powi(decomp.rank as i32);
    WindowCount {
        start,
        len,
        count,
        bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BasicSet {
        BasicSet::parse(2, s).unwrap()
    }

    #[test]
    fn enumeration_and_display() {
        let p = bs("1 (0)*");
        assert_eq!(p.members_below(100), vec![1, 2, 4, 8, 16, 32, 64]);
        assert_eq!(p.to_string(), "1 (0)*");
        let two = bs("1 (0)* 1 (0)* 1");
        let brute: Vec<u128> = (0..4096u128).filter(|n| n.count_ones() == 3 && n % 2 == 1).collect();
        assert_eq!(two.members_below(4096), brute);
    }

    #[test]
    fn leading_zero_pumps_are_dropped() {
        let p = bs("(0)* 1 (0)*").simplified();
        assert_eq!(p.rank(), 1);
        assert_eq!(p.members_below(1000), bs("1 (0)*").members_below(1000));
    }

    #[test]
    fn collapse_rule() {
        let p = bs("1 (0)* 00 (0)* 1");
        let s = p.simplified();
        assert_eq!(s.rank(), 1);
        assert_eq!(s.members_below(1 << 20), p.members_below(1 << 20));
        let q = bs("1 (0)* 1 (0)* 1").simplified();
        assert_eq!(q.rank(), 2);
    }

    #[test]
    fn quotient_matches_suffix_filter() {
        for (pat, suffix) in [
            ("1 (0)*", "0"),
            ("1 (0)* 1 (0)* 1", "0101"),
            ("(10)* 1 (01)*", "101"),
            ("1 (0)* 1", "00"),
        ] {
            let p = bs(pat);
            let u = DigitWord::parse(2, suffix).unwrap();
            let s = u.len() as u32;
            let r = u.value_u128().unwrap();
            let expect: Vec<u128> = p
                .members_below(1 << 24)
                .into_iter()
                .filter(|n| n % (1 << s) == r)
                .collect();
            let mut got = BTreeSet::new();
            for q in p.right_quotient(&u) {
                for y in q.members_below(1 << 24) {
                    let n = (y << s) + r;
                    if n < 1 << 24 {
                        got.insert(n);
                    }
                }
            }
            assert_eq!(got.into_iter().collect::<Vec<_>>(), expect, "{pat} / {suffix}");
        }
    }

    #[test]
    fn windows() {
        let d = VerySparseDecomposition::new(2, vec![bs("1 (0)*")]);
        let w = window_count(&d, 1_000_000, 1_000_000);
        assert_eq!(w.count, 1);
        assert!(w.within_bound());
        assert!(window_count(&d, 77, 1).count <= 1);
    }
}
