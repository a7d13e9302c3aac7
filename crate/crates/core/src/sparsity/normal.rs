//! Arithmetic-progression normal form of an infinite very sparse set, and a
//! replay of the reduction to `{k^l}`.

use std::collections::BTreeSet;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::pattern::{BasicSet, VerySparseDecomposition};
use crate::digits::DigitWord;
use crate::error::{Error, Result};

/// One branch `{[v w^l u]_K : l ≥ 0}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Branch {
    pub v: DigitWord,
    pub w: DigitWord,
    pub u: DigitWord,
}

impl Branch {
    pub fn as_basic_set(&self) -> BasicSet {
        let base = self.w.base();
        BasicSet::new(base, vec![self.v.clone(), self.u.clone()], vec![self.w.clone()]).unwrap()
    }
}

/// `E ∩ (nℤ + r) = ⋃ branches`, all words in base `K = k^block`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormalForm {
    pub source_base: u32,
    pub block: usize,
    pub base: u32,
    pub n: u128,
    pub r: u128,
    pub branches: Vec<Branch>,
    pub verified_bound: u128,
}

impl NormalForm {
    pub fn members_below(&self, bound: u128) -> BTreeSet<u128> {
        self.branches
            .iter()
            .flat_map(|b| b.as_basic_set().members_below(bound))
            .collect()
    }

    /// Compares against `E ∩ (nℤ + r)` on `[0, bound)`.
    pub fn verify(&self, decomp: &VerySparseDecomposition, bound: u128) -> Result<()> {
        let expect: BTreeSet<u128> = decomp
            .members_below(bound)
            .into_iter()
            .filter(|x| x % self.n == self.r % self.n)
            .collect();
        let got = self.members_below(bound);
        if expect != got {
            let diff: Vec<u128> = expect.symmetric_difference(&got).take(5).copied().collect();
            return Err(Error::VerificationFailed(format!(
                "normal form differs from E ∩ ({}ℤ + {}) at {diff:?}",
                self.n, self.r
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct Pat {
    lits: Vec<Vec<u32>>,
    pumps: Vec<Vec<u32>>,
}

impl Pat {
    fn from_set(b: &BasicSet) -> Self {
        Pat {
            lits: b.lits.iter().map(|w| w.digits().to_vec()).collect(),
            pumps: b.pumps.iter().map(|w| w.digits().to_vec()).collect(),
        }
    }
}

/// Step 2: every pump `u` becomes `u^{M/|u|}`; the residue of the exponent
/// moves into the preceding literal.
fn equalize(p: &Pat, m: usize) -> Vec<Pat> {
    let mut out = vec![Pat {
        lits: vec![p.lits[0].clone()],
        pumps: vec![],
    }];
    for (i, u) in p.pumps.iter().enumerate() {
        let q = m / u.len();
        let mut next = Vec::new();
        for base in &out {
            for j in 0..q {
                let mut b = base.clone();
                b.lits.last_mut().unwrap().extend(u.repeat(j));
                b.pumps.push(u.repeat(q));
                b.lits.push(p.lits[i + 1].clone());
                next.push(b);
            }
        }
        out = next;
    }
    out
}

/// Step 3: from the right, rotate each pump so the literal after it has
/// length divisible by `M`: `w^l v = w'(w''w')^{l-1}w''v` for `l ≥ 1`, plus
/// the `l = 0` branch. Finally pad the first literal with zeros.
fn align(p: Pat, m: usize) -> Vec<Pat> {
    fn go(p: Pat, j: usize, m: usize, out: &mut Vec<Pat>) {
        if j == 0 {
            let mut p = p;
            let pad = (m - p.lits[0].len() % m) % m;
            p.lits[0].splice(0..0, std::iter::repeat_n(0, pad));
            out.push(p);
            return;
        }
        let i = j - 1;
        let rho = p.lits[i + 1].len() % m;
        if rho == 0 {
            go(p, i, m, out);
            return;
        }
        // l = 0: drop the pump and merge its neighbours.
        let mut zero = p.clone();
        zero.pumps.remove(i);
        let after = zero.lits.remove(i + 1);
        zero.lits[i].extend(after);
        go(zero, i, m, out);
        // l ≥ 1.
        let w = &p.pumps[i];
        let cut = w.len() - (m - rho);
        let (w1, w2) = (w[..cut].to_vec(), w[cut..].to_vec());
        let mut one = p.clone();
        one.lits[i].extend_from_slice(&w1);
        let mut rotated = w2.clone();
        rotated.extend_from_slice(&w1);
        one.pumps[i] = rotated;
        one.lits[i + 1].splice(0..0, w2);
        go(one, i, m, out);
    }
    let mut out = Vec::new();
    let j = p.pumps.len();
    go(p, j, m, &mut out);
    out
}

fn to_block(w: &[u32], k: u32, m: usize) -> DigitWord {
    DigitWord::new(k, w.to_vec()).unwrap().to_block_base(m)
}

/// Runs the rewriting pipeline and verifies the result by enumeration on
/// `[0, 2^40)`.
pub fn normalize_arith_progression(decomp: &VerySparseDecomposition) -> Result<NormalForm> {
    normalize_with_bound(decomp, 1u128 << 40)
}

pub fn normalize_with_bound(decomp: &VerySparseDecomposition, bound: u128) -> Result<NormalForm> {
    if decomp.is_finite() {
        return Err(Error::invalid("normal form needs an infinite very sparse set"));
    }
    let k = decomp.base;
    // (1) common pump length.
    let m = decomp
        .basic_sets
        .iter()
        .flat_map(|b| b.pumps.iter().map(|p| p.len()))
        .fold(1usize, |acc, l| acc.lcm(&l));
    let big = (k as u64)
        .checked_pow(m as u32)
        .filter(|&b| b <= u32::MAX as u64)
        .ok_or_else(|| Error::invalid("block base k^M too large"))? as u32;
    // (2)–(4) equal pump lengths, aligned literals, base k^M.
    let mut sets = Vec::new();
    for b in &decomp.basic_sets {
        for e in equalize(&Pat::from_set(b), m) {
            for p in align(e, m) {
                let lits = p.lits.iter().map(|w| to_block(w, k, m)).collect();
                let pumps = p.pumps.iter().map(|w| to_block(w, k, m)).collect();
                // (5) collapse repeated single-letter pumps.
                sets.push(BasicSet::new(big, lits, pumps)?.simplified());
            }
        }
    }
    sets.sort();
    sets.dedup();
    let lifted = VerySparseDecomposition::new(big, sets);
    // (6) separating word from the set with the most pumps.
    let lead = lifted
        .basic_sets
        .iter()
        .max_by_key(|b| (b.rank(), std::cmp::Reverse(*b)))
        .cloned()
        .ok_or_else(|| Error::invalid("empty decomposition"))?;
    let t_max = lifted
        .basic_sets
        .iter()
        .flat_map(|b| b.lits.iter().map(|w| w.len()))
        .max()
        .unwrap_or(0);
    for e in 1..=t_max + 1 {
        let mut u = DigitWord::empty(big);
        for (i, pump) in lead.pumps.iter().enumerate() {
            u = u.concat(&pump.repeat(e)).concat(&lead.lits[i + 1]);
        }
        let Some(nf) = try_separator(&lifted, &u, k, m, bound) else {
            continue;
        };
        nf.verify(decomp, bound)?;
        return Ok(nf);
    }
    Err(Error::VerificationFailed(
        "no separating word produced single-pump branches".into(),
    ))
}

fn try_separator(lifted: &VerySparseDecomposition, u: &DigitWord, k: u32, m: usize, bound: u128) -> Option<NormalForm> {
    let big = lifted.base;
    let n = (big as u128).checked_pow(u.len() as u32)?;
    let r = u.value_u128()?;
    let mut branches = Vec::new();
    let mut common: Option<DigitWord> = None;
    let mut points = Vec::new();
    for b in &lifted.basic_sets {
        for q in b.right_quotient(u) {
            // Every surviving language must be `v w^*` (possibly `v w^* w^j`);
            // single words are allowed if some branch already covers them.
            if q.rank() == 0 {
                points.push(q.lits[0].clone());
                continue;
            }
            if q.rank() != 1 {
                return None;
            }
            let w = q.pumps[0].clone();
            let tail = q.lits[1].digits();
            if !(tail.is_empty() || (tail.len() % w.len() == 0 && tail.chunks(w.len()).all(|c| c == w.digits()))) {
                return None;
            }
            if common.as_ref().is_some_and(|c| *c != w) {
                return None;
            }
            common = Some(w.clone());
            branches.push(Branch {
                v: q.lits[0].concat(&DigitWord::new(big, tail.to_vec()).unwrap()),
                w,
                u: u.clone(),
            });
        }
    }
    if branches.is_empty() {
        return None;
    }
    // A point `y` with `y·w = v` for a branch `(v, w)` extends that branch
    // by one step: `{y w^l}` = `{y} ∪ {v w^l}`.
    loop {
        let mut merged = false;
        points.retain(|y| {
            let Some(b) = branches.iter_mut().find(|b| y.concat(&b.w).value() == b.v.value()) else {
                return true;
            };
            b.v = y.clone();
            merged = true;
            false
        });
        if !merged {
            break;
        }
    }
    let covered = |y: &DigitWord| {
        let target = y.value();
        branches
            .iter()
            .any(|b| (0..=y.len() / b.w.len().max(1) + 1).any(|j| b.v.concat(&b.w.repeat(j)).value() == target))
    };
    if !points.iter().all(covered) {
        return None;
    }
    branches.sort();
    branches.dedup();
    Some(NormalForm {
        source_base: k,
        block: m,
        base: big,
        n,
        r,
        branches,
        verified_bound: bound,
    })
}

/// One step of the reduction replay with its enumeration check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionStep {
    pub name: String,
    pub members: Vec<u128>,
    pub check_passed: bool,
}

/// Replays the set transformations `A ∩ (nℤ+r) → B → C → D` on a normal
/// form: `B = {b_i K^{tl}}` with `b_i = [w] + (K^t - 1)[v_i]`, `C = {x : b_1 x ∈ B}`,
/// and `D = {x ∈ C : x ≡ 1 mod (K'^2 - 1)}` after passing to
/// `K' = K^{t·q}` with `c_i < K'`. Each step is checked against its closed
/// form below `bound`. Proves nothing; it only exercises the reduction.
pub fn reduction_replay(nf: &NormalForm, bound: u128) -> Result<Vec<ReductionStep>> {
    let kk = nf.base as u128;
    let t = nf.branches[0].w.len() as u32;
    let s = nf.branches[0].u.len() as u32;
    let w_val = nf.branches[0].w.value_u128().unwrap();
    let u_val = nf.branches[0].u.value_u128().unwrap();
    let kt = kk.checked_pow(t).ok_or_else(|| Error::invalid("K^t overflow"))?;
    let ks = kk.checked_pow(s).ok_or_else(|| Error::invalid("K^s overflow"))?;
    let a_members: Vec<u128> = nf.members_below(bound).into_iter().collect();
    let mut steps = vec![ReductionStep {
        name: "A ∩ (nZ + r)".into(),
        members: a_members.clone(),
        check_passed: a_members.iter().all(|x| x % nf.n == nf.r % nf.n),
    }];
    // x = [u] + K^s [w] (K^{tl} - 1)/(K^t - 1) + [v] K^{tl+s}
    //   ⇒ (x - [u])(K^t - 1)/K^s + [w] = b K^{tl}.
    let b_map = |x: u128| (x - u_val) / ks * (kt - 1) + w_val;
    let bs: Vec<u128> = nf
        .branches
        .iter()
        .map(|br| w_val + (kt - 1) * br.v.value_u128().unwrap())
        .collect();
    let b_members: BTreeSet<u128> = a_members.iter().map(|&x| b_map(x)).collect();
    let b_ok = b_members.iter().all(|&y| {
        bs.iter().any(|&b| {
            let mut z = b;
            while z < y {
                z *= kt;
            }
            z == y
        })
    });
    steps.push(ReductionStep {
        name: "B".into(),
        members: b_members.iter().copied().collect(),
        check_passed: b_ok && a_members.iter().all(|&x| (x - u_val).is_multiple_of(ks)),
    });
    let b1 = bs[0];
    let c_members: BTreeSet<u128> = b_members.iter().filter(|&&y| y % b1 == 0).map(|&y| y / b1).collect();
    let c_ok = c_members.is_empty() || c_members.contains(&1);
    steps.push(ReductionStep {
        name: "C".into(),
        members: c_members.iter().copied().collect(),
        check_passed: c_ok,
    });
    // Choose q with c_i < K^{tq} for the c_i below the bound, then K' = K^{tq}.
    let c_max = c_members.iter().copied().filter(|&c| c % kt != 0).max().unwrap_or(1);
    let mut kp = kt;
    while kp <= c_max {
        kp = kp.checked_mul(kt).ok_or_else(|| Error::invalid("K' overflow"))?;
    }
    let modulus = kp
        .checked_mul(kp)
        .map(|x| x - 1)
        .ok_or_else(|| Error::invalid("K'^2 overflow"))?;
    let d_members: Vec<u128> = c_members
        .iter()
        .copied()
        .filter(|&x| x % modulus == 1 % modulus)
        .collect();
    let d_ok = d_members.iter().all(|&x| {
        let mut z = 1u128;
        while z < x {
            z = z.saturating_mul(kp * kp);
        }
        z == x
    });
    steps.push(ReductionStep {
        name: "D = {K'^{2l}}".into(),
        members: d_members,
        check_passed: d_ok,
    });
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decomp(pats: &[&str]) -> VerySparseDecomposition {
        VerySparseDecomposition::new(2, pats.iter().map(|p| BasicSet::parse(2, p).unwrap()).collect())
    }

    #[test]
    fn powers_of_two() {
        let nf = normalize_arith_progression(&decomp(&["1 (0)*"])).unwrap();
        assert_eq!((nf.n, nf.r), (2, 0));
        assert_eq!(nf.branches.len(), 1);
        let b = &nf.branches[0];
        assert_eq!(
            (b.v.to_string(), b.w.to_string(), b.u.to_string()),
            ("1".into(), "0".into(), "0".into())
        );
    }

    #[test]
    fn rank_two_fixture() {
        let d = decomp(&["1 (0)* 1 (0)* 1"]);
        let nf = normalize_arith_progression(&d).unwrap();
        assert_eq!((nf.n, nf.r), (16, 5));
        assert!(nf.branches.iter().all(|b| b.as_basic_set().rank() == 1));
    }

    #[test]
    fn mixed_pump_lengths() {
        let d = decomp(&["1 (01)* 1 (0)*", "11 (0)* 1", "101"]);
        let nf = normalize_with_bound(&d, 1 << 30).unwrap();
        assert_eq!(nf.block, 2);
        nf.verify(&d, 1 << 30).unwrap();
    }

    #[test]
    fn finite_input_rejected() {
        assert!(normalize_arith_progression(&decomp(&["101", "11"])).is_err());
    }

    #[test]
    fn replay_on_powers() {
        let nf = normalize_arith_progression(&decomp(&["1 (0)*"])).unwrap();
        let steps = reduction_replay(&nf, 1 << 40).unwrap();
        assert!(steps.iter().all(|s| s.check_passed), "{steps:?}");
    }
}
