//! A shifted-finite-sums set that contains no translate of an IP-set.
//!
//! Base 4, `n_i = 4^i`, `N_t = 2·4^{t+1}`: the block `B_t = {N_t + n_α : ∅ ≠
//! α ⊆ [t]}` consists of the numbers written `2 b_t … b_1 0` with `b_i ∈
//! {0, 1}` not all zero. If `a + FS(m_i) ⊆ E`, infinitely many `a + m_j` lie
//! in pairwise distinct blocks, and then `(a + m_j) + (a + m_k) − a` must lie
//! in `E` too. [`pair_obstruction`] checks that this never happens once the
//! lower block `s` satisfies `4^s > |a|`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::fs::{IpGenerators, IpsFamily};
use crate::error::Result;

/// Family with `depth` generators and shifts.
pub fn ips_fixture(depth: usize) -> Result<IpsFamily> {
    let gens = (1..=depth as u32).map(|i| 4u128.pow(i)).collect();
    let shifts = (1..=depth as u32).map(|t| 2 * 4u128.pow(t + 1)).collect();
    Ok(IpsFamily::new(IpGenerators::new(gens)?, shifts))
}

/// Base-4 expansion of the form `2 {0,1}^t 0` with `t ≥ 1` and a nonzero
/// middle.
pub fn ips_fixture_member(n: u128) -> bool {
    fixture_block(n).is_some()
}

/// The block index `t` of a member.
fn fixture_block(mut n: u128) -> Option<usize> {
    if !n.is_multiple_of(4) {
        return None;
    }
    n /= 4;
    let mut t = 0;
    let mut middle_nonzero = false;
    while n >= 4 {
        match n % 4 {
            0 => {}
            1 => middle_nonzero = true,
            _ => return None,
        }
        n /= 4;
        t += 1;
    }
    (n == 2 && t >= 1 && middle_nonzero).then_some(t)
}

fn block(t: usize) -> Vec<u128> {
    let base = 2 * 4u128.pow(t as u32 + 1);
    (1u128..1 << t)
        .map(|mask| {
            base + (0..t)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| 4u128.pow(i as u32 + 1))
                .sum::<u128>()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairObstruction {
    pub a_max: u128,
    pub t_max: usize,
    pub pairs_checked: u64,
    /// `(a, x, y)` with `x + y − a ∈ E`.
    pub violation: Option<Counterexample>,
}

/// `(a, x, y)` with `x + y − a ∈ E`.
type Counterexample = (i128, u128, u128);

/// For `|a| ≤ a_max`, blocks `s < t ≤ t_max` with `4^s > |a|`, and members
/// `x ∈ B_s`, `y ∈ B_t`: checks `x + y − a ∉ E`.
pub fn pair_obstruction(a_max: u128, t_max: usize) -> PairObstruction {
    let blocks: Vec<Vec<u128>> = (0..=t_max).map(block).collect();
    let a_max = a_max.min(i128::MAX as u128 / 2);
    let results: Vec<(u64, Option<Counterexample>)> = (-(a_max as i128)..=a_max as i128)
        .into_par_iter()
        .map(|a| {
            let mut checked = 0u64;
            for s in 1..t_max {
                if 4u128.pow(s as u32) <= a.unsigned_abs() {
                    continue;
                }
                for t in s + 1..=t_max {
                    for &x in &blocks[s] {
                        for &y in &blocks[t] {
                            checked += 1;
                            let z = (x + y) as i128 - a;
                            if z > 0 && ips_fixture_member(z as u128) {
                                return (checked, Some((a, x, y)));
                            }
                        }
                    }
                }
            }
            (checked, None)
        })
        .collect();
    PairObstruction {
        a_max,
        t_max,
        pairs_checked: results.iter().map(|r| r.0).sum(),
        violation: results.into_iter().find_map(|r| r.1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn blocks_are_members() {
        for t in 1..=6 {
            for x in block(t) {
                assert_eq!(fixture_block(x), Some(t));
            }
        }
        assert!(!ips_fixture_member(2 * 16));
        assert!(!ips_fixture_member(2 * 16 + 4 * 2));
    }
}
