//! Structural transformations: trimming, minimization, digit-order reversal,
//! base change and products.

use std::collections::HashMap;

use super::{Dfao, ReadingOrder, DEFAULT_STATE_BUDGET};
use crate::error::{Error, Result};

/// Restricts to reachable states and renumbers them in BFS order
/// (digits visited in increasing order), so equal automata compare equal.
pub fn trim(dfao: &Dfao) -> Dfao {
    let order = dfao.reachable();
    let mut index = vec![usize::MAX; dfao.num_states()];
    for (i, &s) in order.iter().enumerate() {
        index[s] = i;
    }
    let k = dfao.base();
    let mut delta = Vec::with_capacity(order.len() * k as usize);
    let mut output = Vec::with_capacity(order.len());
    for &s in &order {
        for d in 0..k {
            delta.push(index[dfao.step(s, d)]);
        }
        output.push(dfao.output_of(s));
    }
    Dfao::from_parts(k, dfao.order(), 0, delta, output)
}

/// Moore partition refinement followed by canonical renumbering.
pub fn minimize(dfao: &Dfao) -> Dfao {
    let t = trim(dfao);
    let n = t.num_states();
    let k = t.base() as usize;
    // Initial partition by output symbol.
    let mut class: Vec<usize> = {
        let mut ids = HashMap::new();
        t.outputs()
            .iter()
            .map(|o| {
                let next = ids.len();
                *ids.entry(*o).or_insert(next)
            })
            .collect()
    };
    let mut count = class.iter().max().map_or(0, |m| m + 1);
    loop {
        let mut ids: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![0; n];
        for s in 0..n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[s]);
            for d in 0..k {
                sig.push(class[t.step(s, d as u32)]);
            }
            let fresh = ids.len();
            next[s] = *ids.entry(sig).or_insert(fresh);
        }
        let new_count = ids.len();
        class = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    let mut rows = vec![Vec::new(); count];
    let mut output = vec![0; count];
    for s in 0..n {
        let c = class[s];
        if rows[c].is_empty() {
            rows[c] = (0..k).map(|d| class[t.step(s, d as u32)]).collect();
            output[c] = t.output_of(s);
        }
    }
    let delta = rows.into_iter().flatten().collect();
    trim(&Dfao::from_parts(
        t.base(),
        t.order(),
        class[t.initial()],
        delta,
        output,
    ))
}

/// Same sequence, opposite reading order, with the default state budget.
pub fn reverse_reading(dfao: &Dfao) -> Result<Dfao> {
    reverse_reading_with_budget(dfao, DEFAULT_STATE_BUDGET)
}

/// States of the reversed automaton are the maps `f : S → Ω` with
/// `f_y(s) = τ(δ̃(s, y))`, where `y` is the part of the word already read.
/// Reading `d` (which precedes `y` in the original order) sends `f` to
/// `s ↦ f(δ(s, d))`; the output is `f(s_•)`.
pub fn reverse_reading_with_budget(dfao: &Dfao, budget: usize) -> Result<Dfao> {
    let src = trim(dfao);
    let n = src.num_states();
    let k = src.base();
    let start: Vec<u32> = src.outputs().to_vec();
    let mut index: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut funcs = vec![start.clone()];
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < funcs.len() {
        for d in 0..k {
            let f = &funcs[i];
            let g: Vec<u32> = (0..n).map(|s| f[src.step(s, d)]).collect();
            let id = match index.get(&g) {
                Some(&id) => id,
                None => {
                    if funcs.len() >= budget {
                        return Err(Error::budget("reverse_reading", budget));
                    }
                    let id = funcs.len();
                    index.insert(g.clone(), id);
                    funcs.push(g);
                    id
                }
            };
            delta.push(id);
        }
        i += 1;
    }
    let s0 = src.initial();
    let output = funcs.iter().map(|f| f[s0]).collect();
    Ok(minimize(&Dfao::from_parts(k, src.order().flipped(), 0, delta, output)))
}

/// Converts to least-significant-digit-first reading if needed.
pub fn to_lsd(dfao: &Dfao) -> Result<Dfao> {
    match dfao.order() {
        ReadingOrder::Lsd => Ok(dfao.clone()),
        ReadingOrder::Msd => reverse_reading(dfao),
    }
}

/// Converts to most-significant-digit-first reading if needed.
pub fn to_msd(dfao: &Dfao) -> Result<Dfao> {
    match dfao.order() {
        ReadingOrder::Msd => Ok(dfao.clone()),
        ReadingOrder::Lsd => reverse_reading(dfao),
    }
}

/// The same sequence read in base `k^a`: each new digit stands for a block of
/// `a` old digits.
pub fn base_power(dfao: &Dfao, a: u32) -> Result<Dfao> {
    if a == 0 {
        return Err(Error::invalid("base_power needs a ≥ 1"));
    }
    let k = dfao.base() as u64;
    let big = k
        .checked_pow(a)
        .filter(|&b| b <= u32::MAX as u64)
        .ok_or_else(|| Error::invalid("k^a does not fit the digit type"))?;
    let n = dfao.num_states();
    let mut delta = Vec::with_capacity(n * big as usize);
    let mut block = vec![0u32; a as usize];
    for s in 0..n {
        for digit in 0..big {
            // Block digits, most significant first.
            let mut rest = digit;
            for slot in block.iter_mut().rev() {
                *slot = (rest % k) as u32;
                rest /= k;
            }
            let t = match dfao.order() {
                ReadingOrder::Msd => dfao.run(s, block.iter().copied()),
                ReadingOrder::Lsd => dfao.run(s, block.iter().rev().copied()),
            };
            delta.push(t);
        }
    }
    Ok(trim(&Dfao::from_parts(
        big as u32,
        dfao.order(),
        dfao.initial(),
        delta,
        dfao.outputs().to_vec(),
    )))
}

/// Reachable product automaton with outputs `combine(o1, o2)`.
pub fn product(a: &Dfao, b: &Dfao, combine: impl Fn(u32, u32) -> u32) -> Result<Dfao> {
    if a.base() != b.base() {
        return Err(Error::invalid("product of automata with different bases"));
    }
    if a.order() != b.order() {
        return Err(Error::invalid("product of automata with different reading orders"));
    }
    let k = a.base();
    let start = (a.initial(), b.initial());
    let mut index = HashMap::from([(start, 0usize)]);
    let mut pairs = vec![start];
    let mut delta = Vec::new();
    let mut i = 0;
    while i < pairs.len() {
        let (p, q) = pairs[i];
        for d in 0..k {
            let t = (a.step(p, d), b.step(q, d));
            let next = pairs.len();
            let id = *index.entry(t).or_insert(next);
            if id == next {
                pairs.push(t);
            }
            delta.push(id);
        }
        i += 1;
    }
    let output = pairs
        .iter()
        .map(|&(p, q)| combine(a.output_of(p), b.output_of(q)))
        .collect();
    Ok(Dfao::from_parts(k, a.order(), 0, delta, output))
}
