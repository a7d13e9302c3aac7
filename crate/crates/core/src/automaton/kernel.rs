//! The k-kernel of an automatic sequence.

use serde::{Deserialize, Serialize};

use super::transform::{minimize, reverse_reading_with_budget};
use super::{Dfao, ReadingOrder, DEFAULT_STATE_BUDGET};
use crate::error::{Error, Result};

/// One kernel element `(a_{k^t n + r})_n`, named by its first occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelClass {
    pub id: usize,
    /// State of the minimized LSD automaton that generates this subsequence.
    pub state: usize,
    pub level: u32,
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub classes: Vec<KernelClass>,
    /// `index_map[t][r]` is the class of `(a_{k^t n + r})_n`.
    pub index_map: Vec<Vec<usize>>,
    pub size: usize,
}

pub fn kernel(dfao: &Dfao) -> Result<KernelReport> {
    kernel_with_budget(dfao, DEFAULT_STATE_BUDGET)
}

/// Feeding `r` (padded to `t` digits) least significant digit first lands in
/// the state that generates `a_{k^t n + r}`. In a minimized, zero-invariant
/// LSD automaton two states generate the same subsequence iff they are equal,
/// so classes are decided exactly. Levels are explored until one adds nothing.
pub fn kernel_with_budget(dfao: &Dfao, budget: usize) -> Result<KernelReport> {
    let lsd = match dfao.order() {
        ReadingOrder::Lsd => minimize(dfao),
        ReadingOrder::Msd => reverse_reading_with_budget(dfao, budget)?,
    };
    let k = lsd.base() as u64;
    let mut class_of_state = vec![usize::MAX; lsd.num_states()];
    let mut classes = Vec::new();
    let mut index_map = Vec::new();
    let mut level_states = vec![lsd.initial()];
    let mut entries = 0usize;
    for t in 0u32.. {
        let mut fresh = false;
        let mut row = Vec::with_capacity(level_states.len());
        for (r, &s) in level_states.iter().enumerate() {
            if class_of_state[s] == usize::MAX {
                class_of_state[s] = classes.len();
                classes.push(KernelClass {
                    id: classes.len(),
                    state: s,
                    level: t,
                    residue: r as u64,
                });
                fresh = true;
            }
            row.push(class_of_state[s]);
        }
        entries += row.len();
        index_map.push(row);
        if !fresh {
            break;
        }
        if entries + level_states.len() * k as usize > budget {
            return Err(Error::budget("kernel index map", budget));
        }
        // Residues at level t+1: r + d·k^t, so digit d is the outer index.
        let mut next = Vec::with_capacity(level_states.len() * k as usize);
        for d in 0..k as u32 {
            for &s in &level_states {
                next.push(lsd.step(s, d));
            }
        }
        level_states = next;
    }
    let size = classes.len();
    Ok(KernelReport {
        classes,
        index_map,
        size,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{baum_sweet, constant, residue, thue_morse};

    #[test]
    fn sizes() {
        assert_eq!(kernel(&thue_morse()).unwrap().size, 2);
        assert_eq!(kernel(&constant(2, 0)).unwrap().size, 1);
        assert_eq!(kernel(&residue(2, 2)).unwrap().size, 3);
    }

    #[test]
    fn index_map_matches_sampled_subsequences() {
        let a = baum_sweet();
        let rep = kernel(&a).unwrap();
        let sample = |t: u32, r: u64| -> Vec<u32> { (0..256u64).map(|n| a.eval((n << t) + r)).collect() };
        let reps: Vec<Vec<u32>> = rep.classes.iter().map(|c| sample(c.level, c.residue)).collect();
        for (t, row) in rep.index_map.iter().enumerate() {
            assert_eq!(row.len(), 1 << t);
            for (r, &c) in row.iter().enumerate() {
                assert_eq!(sample(t as u32, r as u64), reps[c]);
            }
        }
    }
}
