//! `FS(n_i)` and `FS(n_i; N_t)` enumeration.

use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::membership::Membership;
use crate::error::{Error, Result};
use crate::sparsity::IpsWitness;

pub const DEFAULT_DEPTH: usize = 16;

/// Cap on the number of enumerated sums.
pub const SUM_BUDGET: usize = 1 << 20;

/// Generators `n_1, n_2, …` with `n_α = Σ_{i∈α} n_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpGenerators {
    gens: Vec<u128>,
}

impl IpGenerators {
    pub fn new(gens: Vec<u128>) -> Result<Self> {
        if gens.contains(&0) {
            return Err(Error::invalid("generators must be positive"));
        }
        Ok(IpGenerators { gens })
    }

    pub fn gens(&self) -> &[u128] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// `n_α` for a set of 1-based indices.
    pub fn n_alpha(&self, alpha: &[usize]) -> Result<u128> {
        alpha.iter().try_fold(0u128, |acc, &i| {
            let g = i
                .checked_sub(1)
                .and_then(|j| self.gens.get(j))
                .ok_or_else(|| Error::invalid(format!("index {i} out of range")))?;
            acc.checked_add(*g).ok_or_else(overflow)
        })
    }

    /// `n_α` for every bitmask `α ⊆ [depth]`, indexed by the mask.
    fn table(&self, depth: usize) -> Result<Vec<u128>> {
        if depth > self.gens.len() {
            return Err(Error::invalid(format!(
                "depth {depth} exceeds the {} generators",
                self.gens.len()
            )));
        }
        if depth >= usize::BITS as usize || 1usize << depth > SUM_BUDGET {
            return Err(Error::budget("finite sums", SUM_BUDGET));
        }
        let mut table = vec![0u128; 1 << depth];
        for mask in 1..table.len() {
            let low = mask.trailing_zeros() as usize;
            table[mask] = table[mask & (mask - 1)]
                .checked_add(self.gens[low])
                .ok_or_else(overflow)?;
        }
        Ok(table)
    }
}

fn overflow() -> Error {
    Error::invalid("finite sum overflows u128")
}

fn mask_to_alpha(mask: usize) -> Vec<usize> {
    (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| i + 1)
        .collect()
}

/// `n_i = k^{it}` for `i = 1, …, depth`.
pub fn power_generators(k: u32, t: u32, depth: usize) -> Result<IpGenerators> {
    let gens = (1..=depth as u32)
        .map(|i| (k as u128).checked_pow(i * t).ok_or_else(overflow))
        .collect::<Result<_>>()?;
    IpGenerators::new(gens)
}

/// Sorted, deduplicated `{n_α : ∅ ≠ α ⊆ [depth]}`.
pub fn finite_sums(gen: &IpGenerators, depth: usize) -> Result<Vec<u128>> {
    let mut sums = gen.table(depth)?;
    sums.remove(0);
    sums.par_sort_unstable();
    sums.dedup();
    Ok(sums)
}

/// Shifts `N_1, N_2, …` attached to generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IpsFamily {
    pub generators: IpGenerators,
    /// `shifts[t - 1] = N_t`.
    pub shifts: Vec<u128>,
}

impl IpsFamily {
    pub fn new(generators: IpGenerators, shifts: Vec<u128>) -> Self {
        IpsFamily { generators, shifts }
    }

    /// The family `FS(n_i; N_t)` produced by a structure witness.
    pub fn from_witness(w: &IpsWitness) -> Result<Self> {
        let to_u128 = |x: &num_bigint::BigUint| x.to_u128().ok_or_else(|| Error::invalid("witness value exceeds u128"));
        let gens = w.generators.iter().map(to_u128).collect::<Result<_>>()?;
        let shifts = w.shifts.iter().skip(1).map(to_u128).collect::<Result<_>>()?;
        Ok(IpsFamily::new(IpGenerators::new(gens)?, shifts))
    }

    pub fn max_depth(&self) -> usize {
        self.generators.len().min(self.shifts.len())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftedSum {
    pub t: usize,
    pub alpha: Vec<usize>,
    pub value: u128,
}

/// `n_α + N_t` for `1 ≤ t ≤ depth` and nonempty `α ⊆ [t]`, ordered by `t`
/// and then by the bitmask of `α`.
pub fn shifted_finite_sums(fam: &IpsFamily, depth: usize) -> Result<Vec<ShiftedSum>> {
    if depth > fam.max_depth() {
        return Err(Error::invalid(format!(
            "depth {depth} exceeds the family's {} terms",
            fam.max_depth()
        )));
    }
    if depth >= SUM_BUDGET.trailing_zeros() as usize {
        return Err(Error::budget("shifted finite sums", SUM_BUDGET));
    }
    let table = fam.generators.table(depth)?;
    let mut out = Vec::new();
    for t in 1..=depth {
        let shift = fam.shifts[t - 1];
        for (mask, n) in table.iter().enumerate().take(1 << t).skip(1) {
            out.push(ShiftedSum {
                t,
                alpha: mask_to_alpha(mask),
                value: n.checked_add(shift).ok_or_else(overflow)?,
            });
        }
    }
    Ok(out)
}

/// Outcome of checking `FS(n_1, …, n_depth) ⊆ E`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FsCheck {
    pub depth: usize,
    pub checked: usize,
    pub holds: bool,
    /// First failing `α` in bitmask order, with `n_α`.
    pub first_failure: Option<(Vec<usize>, u128)>,
}

pub fn contains_fs<P: Membership + ?Sized>(pred: &P, gen: &IpGenerators, depth: usize) -> Result<FsCheck> {
    let table = gen.table(depth)?;
    let failure = (1..table.len())
        .into_par_iter()
        .map(|mask| pred.member(table[mask]).map(|ok| (mask, ok)))
        .find_map_first(|r| match r {
            Ok((_, true)) => None,
            other => Some(other),
        })
        .transpose()?;
    Ok(match failure {
        None => FsCheck {
            depth,
            checked: table.len() - 1,
            holds: true,
            first_failure: None,
        },
        Some((mask, _)) => FsCheck {
            depth,
            checked: mask,
            holds: false,
            first_failure: Some((mask_to_alpha(mask), table[mask])),
        },
    })
}

/// Scan for positive multiples of `k^t` in the support below `horizon`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub modulus: u128,
    pub horizon: u128,
    /// No multiple found: the support meets no IP-set below the horizon.
    pub confirmed: bool,
    pub counterexample: Option<u128>,
}

/// Every IP-set contains a multiple of `k^t` (see [`pigeonhole_multiple`]),
/// so a support free of such multiples contains no IP-set. The freeness is
/// checked up to `horizon`.
pub fn divisibility_obstruction<P: Membership + ?Sized>(
    pred: &P,
    k: u32,
    t: u32,
    horizon: u128,
) -> Result<Obstruction> {
    let modulus = (k as u128)
        .checked_pow(t)
        .ok_or_else(|| Error::invalid("k^t overflows u128"))?;
    let count = u64::try_from(horizon.saturating_sub(1) / modulus).map_err(|_| Error::invalid("horizon too large"))?;
    let hit = (1..=count)
        .into_par_iter()
        .map(|j| {
            let n = j as u128 * modulus;
            pred.member(n).map(|ok| (n, ok))
        })
        .find_map_first(|r| match r {
            Ok((_, false)) => None,
            other => Some(other),
        })
        .transpose()?;
    Ok(Obstruction {
        modulus,
        horizon,
        confirmed: hit.is_none(),
        counterexample: hit.map(|(n, _)| n),
    })
}

/// A nonempty block `α = {i+1, …, j}` with `modulus | n_α`, found among the
/// prefix sums of the first `modulus` generators.
pub fn pigeonhole_multiple(gen: &IpGenerators, modulus: u128) -> Option<Vec<usize>> {
    if modulus == 0 {
        return None;
    }
    let mut seen = std::collections::HashMap::from([(0u128, 0usize)]);
    let mut acc = 0u128;
    for (j, g) in gen.gens().iter().enumerate() {
        acc = (acc + g % modulus) % modulus;
        if let Some(&i) = seen.get(&acc) {
            return Some((i + 1..=j + 1).collect());
        }
        seen.insert(acc, j + 1);
    }
    None
}
