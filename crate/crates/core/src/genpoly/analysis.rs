//! Scanners over sequence handles: weak periodicity, kernel census,
//! densities, equidistribution and set comparison.

use std::collections::HashSet;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::expr::GpExpr;
use super::seq::IntSequence;
use crate::error::{Error, Result};
use crate::numeric::{ExactReal, PrecisionPolicy};

/// Outcome of [`weak_periodicity_search`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WeakPeriodicity {
    Witness { q: u64, r: u64, s: u64 },
    Exhausted,
}

impl WeakPeriodicity {
    /// Re-checks a witness by evaluating the sequence term by term.
    pub fn verify(&self, seq: &dyn IntSequence, horizon: u64) -> Result<bool> {
        let WeakPeriodicity::Witness { q, r, s } = *self else {
            return Ok(false);
        };
        let hi = r.max(s);
        let mut n = 0;
        while q * n + hi <= horizon {
            if seq.at(q * n + r)? != seq.at(q * n + s)? {
                return Ok(false);
            }
            n += 1;
        }
        Ok(true)
    }
}

/// Searches for `q, r < s` with `f(qn + r) = f(qn + s)` whenever
/// `qn + s ≤ horizon`. Triples are ordered by `q`, then `s`, then `r`.
pub fn weak_periodicity_search(
    seq: &dyn IntSequence,
    q_max: u64,
    offset_max: u64,
    horizon: u64,
) -> Result<WeakPeriodicity> {
    if q_max == 0 || offset_max == 0 {
        return Err(Error::invalid("q_max and offset_max must be positive"));
    }
    if horizon < q_max * offset_max {
        return Err(Error::invalid("horizon must be at least q_max * offset_max"));
    }
    let f = seq.prefix(horizon + 1)?;
    let found = (1..=q_max).into_par_iter().find_map_first(|q| {
        for s in 1..=offset_max {
            for r in 0..s {
                let mut n = 0;
                let mut ok = true;
                while q * n + s <= horizon {
                    if f[(q * n + r) as usize] != f[(q * n + s) as usize] {
                        ok = false;
                        break;
                    }
                    n += 1;
                }
                if ok {
                    return Some(WeakPeriodicity::Witness { q, r, s });
                }
            }
        }
        None
    });
    Ok(found.unwrap_or(WeakPeriodicity::Exhausted))
}

/// Distinct prefixes of the subsequences `(f(k^t n + r))_n`.
#[derive(Debug, Clone, Serialize)]
pub struct KernelCensus {
    pub k: u64,
    pub prefix_len: u64,
    /// Entry `t`: distinct classes among all levels `≤ t`.
    pub by_depth: Vec<usize>,
    pub distinct: usize,
}

/// Lower bound on the kernel size from finite prefixes.
pub fn kernel_census(seq: &dyn IntSequence, k: u64, depth: u32, prefix_len: u64, budget: u64) -> Result<KernelCensus> {
    if k < 2 || prefix_len == 0 {
        return Err(Error::invalid("kernel census needs k ≥ 2 and a positive prefix"));
    }
    let span = k
        .checked_pow(depth)
        .and_then(|p| p.checked_mul(prefix_len))
        .ok_or_else(|| Error::budget("kernel census span", budget as usize))?;
    if span > budget {
        return Err(Error::budget("kernel census evaluations", budget as usize));
    }
    let f = seq.prefix(span)?;
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut by_depth = Vec::new();
    for t in 0..=depth {
        let kt = k.pow(t);
        for r in 0..kt {
            let sub: Vec<i64> = (0..prefix_len).map(|n| f[(kt * n + r) as usize]).collect();
            seen.insert(sub);
        }
        by_depth.push(seen.len());
    }
    Ok(KernelCensus {
        k,
        prefix_len,
        distinct: seen.len(),
        by_depth,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct DensitySample {
    pub n: u64,
    pub start: u64,
    pub count: u64,
    pub density: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityReport {
    pub natural: Vec<DensitySample>,
    pub banach: Vec<DensitySample>,
    pub seed: u64,
    pub window_count: usize,
    pub window_span: u64,
}

/// Natural density `|E ∩ [0, N)|/N` on the grid, and the largest
/// relative count over `window_count` windows `[M, M + N)` with `M`
/// drawn from `[0, window_span)` (plus `M = 0`).
pub fn density_estimate(
    seq: &dyn IntSequence,
    grid: &[u64],
    window_count: usize,
    window_span: u64,
    seed: u64,
) -> Result<DensityReport> {
    let max = grid.iter().copied().max().unwrap_or(0);
    let f = seq.prefix(max)?;
    let mut prefix = vec![0u64; f.len() + 1];
    for (i, v) in f.iter().enumerate() {
        prefix[i + 1] = prefix[i] + (*v != 0) as u64;
    }
    let natural = grid
        .iter()
        .map(|&n| DensitySample {
            n,
            start: 0,
            count: prefix[n as usize],
            density: if n == 0 {
                0.0
            } else {
                prefix[n as usize] as f64 / n as f64
            },
        })
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut banach = Vec::new();
    for &n in grid {
        let mut starts = vec![0u64];
        for _ in 0..window_count {
            starts.push(if window_span == 0 {
                0
            } else {
                rng.gen_range(0..window_span)
            });
        }
        let counts: Vec<(u64, u64)> = starts
            .par_iter()
            .map(|&m| {
                let c = if m + n <= max {
                    prefix[(m + n) as usize] - prefix[m as usize]
                } else {
                    seq.range(m, n)?.iter().filter(|v| **v != 0).count() as u64
                };
                Ok((m, c))
            })
            .collect::<Result<_>>()?;
        let (start, count) = counts
            .into_iter()
            .max_by_key(|&(m, c)| (c, std::cmp::Reverse(m)))
            .unwrap_or((0, 0));
        banach.push(DensitySample {
            n,
            start,
            count,
            density: if n == 0 { 0.0 } else { count as f64 / n as f64 },
        });
    }
    Ok(DensityReport {
        natural,
        banach,
        seed,
        window_count,
        window_span,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct EquidistReport {
    pub n: u64,
    pub histogram: Vec<u64>,
    pub star_discrepancy: f64,
}

/// Star discrepancy of a finite point set in `[0, 1)`.
pub fn star_discrepancy(points: &mut [f64]) -> f64 {
    points.sort_by(|a, b| a.total_cmp(b));
    let n = points.len() as f64;
    points
        .iter()
        .enumerate()
        .map(|(i, &x)| ((i + 1) as f64 / n - x).max(x - i as f64 / n))
        .fold(0.0, f64::max)
}

/// Histogram and star discrepancy of `{λ·g(an)}` for `0 ≤ n < N`.
pub fn equidistribution_test(
    expr: &GpExpr,
    a: i64,
    lambda: &ExactReal,
    n_max: u64,
    bins: usize,
    policy: &PrecisionPolicy,
) -> Result<EquidistReport> {
    if bins < 2 {
        return Err(Error::invalid("need at least two bins"));
    }
    let mut xs: Vec<f64> = (0..n_max)
        .into_par_iter()
        .map(|n| {
            let v = expr.eval_real(&BigInt::from(a as i128 * n as i128), policy)?;
            let frac = v.mul(lambda).frac(policy)?;
            Ok(frac.to_f64().clamp(0.0, 1.0 - f64::EPSILON))
        })
        .collect::<Result<_>>()?;
    let mut histogram = vec![0u64; bins];
    for &x in &xs {
        histogram[((x * bins as f64) as usize).min(bins - 1)] += 1;
    }
    let star_discrepancy = star_discrepancy(&mut xs);
    Ok(EquidistReport {
        n: n_max,
        histogram,
        star_discrepancy,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SetComparison {
    pub start: u64,
    pub end: u64,
    pub disagreements: u64,
    pub only_in_first: u64,
    pub only_in_second: u64,
    /// All disagreements if at most the sample cap, else the first ones.
    pub samples: Vec<u64>,
    pub truncated: bool,
}

pub const COMPARE_SAMPLE_CAP: usize = 10_000;

/// Symmetric difference of two indicator sequences on `[start, end)`.
pub fn set_compare(a: &dyn IntSequence, b: &dyn IntSequence, start: u64, end: u64) -> Result<SetComparison> {
    let len = end.saturating_sub(start);
    let (fa, fb) = rayon::join(|| a.range(start, len), || b.range(start, len));
    let (fa, fb) = (fa?, fb?);
    let mut out = SetComparison {
        start,
        end,
        disagreements: 0,
        only_in_first: 0,
        only_in_second: 0,
        samples: Vec::new(),
        truncated: false,
    };
    for (i, (x, y)) in fa.iter().zip(&fb).enumerate() {
        let (x, y) = (*x != 0, *y != 0);
        if x == y {
            continue;
        }
        out.disagreements += 1;
        if x {
            out.only_in_first += 1;
        } else {
            out.only_in_second += 1;
        }
        if out.samples.len() < COMPARE_SAMPLE_CAP {
            out.samples.push(start + i as u64);
        } else {
            out.truncated = true;
        }
    }
    Ok(out)
}
