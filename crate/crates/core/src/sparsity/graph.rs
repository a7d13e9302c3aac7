//! Promising states and the strongly connected structure of the graph they
//! span.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::automaton::Dfao;
use crate::error::Result;

/// States from which some word reaches an output-1 state.
pub fn promising_states(dfao: &Dfao) -> Result<Vec<usize>> {
    dfao.require_binary()?;
    Ok(promising_mask(dfao)
        .into_iter()
        .enumerate()
        .filter_map(|(s, p)| p.then_some(s))
        .collect())
}

pub(crate) fn promising_mask(dfao: &Dfao) -> Vec<bool> {
    let n = dfao.num_states();
    let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
    for s in 0..n {
        for d in 0..dfao.base() {
            rev[dfao.step(s, d)].push(s);
        }
    }
    let mut mask: Vec<bool> = (0..n).map(|s| dfao.output_of(s) == 1).collect();
    let mut stack: Vec<usize> = (0..n).filter(|&s| mask[s]).collect();
    while let Some(t) = stack.pop() {
        for &s in &rev[t] {
            if !mask[s] {
                mask[s] = true;
                stack.push(s);
            }
        }
    }
    mask
}

/// The subgraph on promising states with its condensation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromisingGraph {
    pub vertices: Vec<usize>,
    /// `(from, digit, to)` with both endpoints promising.
    pub edges: Vec<(usize, u32, usize)>,
    /// Component id of each automaton state (`None` if not promising).
    pub component: Vec<Option<usize>>,
    /// Components in topological order: edges only go to later components.
    pub components: Vec<Vec<usize>>,
    /// Condensation edges.
    pub dag: Vec<BTreeSet<usize>>,
}

impl PromisingGraph {
    pub fn build(dfao: &Dfao) -> Result<Self> {
        dfao.require_binary()?;
        let mask = promising_mask(dfao);
        let n = dfao.num_states();
        let vertices: Vec<usize> = (0..n).filter(|&s| mask[s]).collect();
        let mut edges = Vec::new();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &s in &vertices {
            for d in 0..dfao.base() {
                let t = dfao.step(s, d);
                if mask[t] {
                    edges.push((s, d, t));
                    succ[s].push(t);
                }
            }
        }
        let comps = tarjan(n, &vertices, &succ);
        // Tarjan emits sinks first; reverse for topological order.
        let components: Vec<Vec<usize>> = comps.into_iter().rev().collect();
        let mut component = vec![None; n];
        for (i, c) in components.iter().enumerate() {
            for &s in c {
                component[s] = Some(i);
            }
        }
        let mut dag = vec![BTreeSet::new(); components.len()];
        for &(s, _, t) in &edges {
            let (a, b) = (component[s].unwrap(), component[t].unwrap());
            if a != b {
                dag[a].insert(b);
            }
        }
        Ok(PromisingGraph {
            vertices,
            edges,
            component,
            components,
            dag,
        })
    }

    pub fn is_promising(&self, state: usize) -> bool {
        self.component[state].is_some()
    }

    /// Digits `d` with `δ(s, d)` in the same component as `s`.
    pub fn internal_digits(&self, dfao: &Dfao, s: usize) -> Vec<u32> {
        let c = self.component[s];
        (0..dfao.base())
            .filter(|&d| c.is_some() && self.component[dfao.step(s, d)] == c)
            .collect()
    }
}

/// Iterative Tarjan; components are returned in reverse topological order.
fn tarjan(n: usize, vertices: &[usize], succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut index = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comps = Vec::new();
    let mut next = 0;
    for &root in vertices {
        if index[root] != usize::MAX {
            continue;
        }
        let mut call: Vec<(usize, usize)> = vec![(root, 0)];
        index[root] = next;
        low[root] = next;
        next += 1;
        stack.push(root);
        on_stack[root] = true;
        while let Some(&(v, i)) = call.last() {
            if i < succ[v].len() {
                let w = succ[v][i];
                call.last_mut().unwrap().1 += 1;
                if index[w] == usize::MAX {
                    index[w] = next;
                    low[w] = next;
                    next += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
            } else {
                call.pop();
                if let Some(&(u, _)) = call.last() {
                    low[u] = low[u].min(low[v]);
                }
                if low[v] == index[v] {
                    let mut comp = Vec::new();
                    loop {
                        let w = stack.pop().unwrap();
                        on_stack[w] = false;
                        comp.push(w);
                        if w == v {
                            break;
                        }
                    }
                    comp.sort_unstable();
                    comps.push(comp);
                }
            }
        }
    }
    comps
}
