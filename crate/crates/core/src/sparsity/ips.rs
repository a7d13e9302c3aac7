//! Shifted finite sums inside sets satisfying Condition (i).

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::classify::{classify, Classification, ConditionI};
use crate::automaton::Dfao;
use crate::error::{Error, Result};

/// `a_{k^l n + p} = a_{k^m n + r_1} = a_{k^m n + r_2}` together with the
/// family `FS(n_i; N_t)` it produces.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpsWitness {
    pub base: u32,
    pub l: usize,
    pub m: usize,
    pub p: BigUint,
    pub r1: BigUint,
    pub r2: BigUint,
    /// `[w_1]^R_k < [w_2]^R_k`, the values of the two return words.
    pub s1: BigUint,
    pub s2: BigUint,
    /// `n_0` with `a_{k^l n_0 + p} = 1`.
    pub n0: BigUint,
    /// `n_1, n_2, …`
    pub generators: Vec<BigUint>,
    /// `N_0, N_1, …`
    pub shifts: Vec<BigUint>,
    pub verified_depth: usize,
    pub verified_horizon: u64,
}

fn lsd_value(digits: &[u32], k: u32) -> BigUint {
    digits.iter().rev().fold(BigUint::zero(), |acc, &d| acc * k + d)
}

impl IpsWitness {
    /// Builds the parameters from a Condition (i) certificate: `v` reaches
    /// the state `s`, `w_1, w_2` return to it, `x` leads from `s` to an
    /// accepting state.
    pub fn from_condition(c: &ConditionI, depth: usize) -> Result<Self> {
        let a = &c.automaton;
        let k = a.base();
        let v = c.prefix.digits();
        let (mut w1, mut w2) = (c.v1.digits().to_vec(), c.v2.digits().to_vec());
        let (mut s1, mut s2) = (lsd_value(&w1, k), lsd_value(&w2, k));
        if s1 > s2 {
            std::mem::swap(&mut s1, &mut s2);
            std::mem::swap(&mut w1, &mut w2);
        }
        let l = v.len();
        let d = w1.len();
        let m = l + d;
        let kb = BigUint::from(k);
        let kl = kb.pow(l as u32);
        let p = lsd_value(v, k);
        let r1 = &p + &kl * &s1;
        let r2 = &p + &kl * &s2;
        let x = accepting_word(a, c.state)
            .ok_or_else(|| Error::VerificationFailed("Condition (i) state is not promising".into()))?;
        let n0 = lsd_value(&x, k);
        let kd = kb.pow(d as u32);
        let diff = &s2 - &s1;
        let generators = (0..depth).map(|i| &kl * kd.pow(i as u32) * &diff).collect();
        // N_t = k^l (k^{td} n_0 + s_1 (k^{td} - 1)/(k^d - 1)) + p
        let shifts = (0..=depth)
            .map(|t| {
                let ktd = kd.pow(t as u32);
                let geo = (&ktd - 1u32) / (&kd - 1u32);
                &kl * (&ktd * &n0 + &s1 * geo) + &p
            })
            .collect();
        Ok(IpsWitness {
            base: k,
            l,
            m,
            p,
            r1,
            r2,
            s1,
            s2,
            n0,
            generators,
            shifts,
            verified_depth: 0,
            verified_horizon: 0,
        })
    }

    /// Every `N_t + Σ_{i∈α} n_i` with `α ⊆ [t]`, `t ≤ depth`.
    pub fn members(&self, depth: usize) -> Vec<BigUint> {
        let mut out = Vec::new();
        for t in 0..=depth.min(self.generators.len()) {
            for mask in 0u64..(1u64 << t) {
                let mut v = self.shifts[t].clone();
                for i in 0..t {
                    if mask >> i & 1 == 1 {
                        v += &self.generators[i];
                    }
                }
                out.push(v);
            }
        }
        out
    }

    /// Checks the three identities for `n ≤ horizon` and membership of all
    /// shifted finite sums to `depth` against `dfao`.
    pub fn verify(&self, dfao: &Dfao, horizon: u64, depth: usize) -> Result<()> {
        let kb = BigUint::from(self.base);
        let kl = kb.pow(self.l as u32);
        let km = kb.pow(self.m as u32);
        let fits = (&km * (horizon + 1) + &self.r2).to_u128().is_some();
        let (kl1, km1, p1, r11, r21) = (
            kl.to_u128(),
            km.to_u128(),
            self.p.to_u128(),
            self.r1.to_u128(),
            self.r2.to_u128(),
        );
        for n in 0..=horizon {
            let (x, y, z) = if fits {
                let n = n as u128;
                (
                    dfao.eval_u128(kl1.unwrap() * n + p1.unwrap()),
                    dfao.eval_u128(km1.unwrap() * n + r11.unwrap()),
                    dfao.eval_u128(km1.unwrap() * n + r21.unwrap()),
                )
            } else {
                (
                    dfao.eval_big(&(&kl * n + &self.p)),
                    dfao.eval_big(&(&km * n + &self.r1)),
                    dfao.eval_big(&(&km * n + &self.r2)),
                )
            };
            if x != y || x != z {
                return Err(Error::VerificationFailed(format!("IPS identity fails at n = {n}")));
            }
        }
        if dfao.eval_big(&(&kl * &self.n0 + &self.p)) != 1 {
            return Err(Error::VerificationFailed("a_{k^l n0 + p} is not 1".into()));
        }
        if let Some(bad) = self.members(depth).into_iter().find(|v| dfao.eval_big(v) != 1) {
            return Err(Error::VerificationFailed(format!(
                "shifted finite sum {bad} is not a member"
            )));
        }
        Ok(())
    }
}

/// Shortest (then smallest) word leading from `s` to an output-1 state.
fn accepting_word(a: &Dfao, s: usize) -> Option<Vec<u32>> {
    let n = a.num_states();
    let mut pred: Vec<Option<(usize, u32)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = std::collections::VecDeque::from([s]);
    while let Some(q) = queue.pop_front() {
        if a.output_of(q) == 1 {
            let mut w = Vec::new();
            let mut cur = q;
            while cur != s {
                let (p, d) = pred[cur].unwrap();
                w.push(d);
                cur = p;
            }
            w.reverse();
            return Some(w);
        }
        for d in 0..a.base() {
            let t = a.step(q, d);
            if !seen[t] {
                seen[t] = true;
                pred[t] = Some((q, d));
                queue.push_back(t);
            }
        }
    }
    None
}

/// Classifies, builds the witness and verifies it; a failure after a
/// Condition (i) classification is a bug and is reported as such.
pub fn ips_witness(dfao: &Dfao, horizon: u64, depth: usize) -> Result<IpsWitness> {
    let c = match classify(dfao)? {
        Classification::ConditionI(c) => c,
        Classification::VerySparse(_) => {
            return Err(Error::NoWitness("the set is very sparse; Condition (i) fails".into()))
        }
    };
    let mut w = IpsWitness::from_condition(&c, depth)?;
    w.verify(dfao, horizon, depth)?;
    w.verified_depth = depth;
    w.verified_horizon = horizon;
    debug_assert!(w.r1 != w.r2 && !w.generators.iter().any(|g| g.is_zero()));
    Ok(w)
}
