//! Sets of recurrence terms `n_{i+2} = a n_{i+1} + n_i` cut out by
//! `‖nα‖ < 1/(2n)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genpoly::{CmpOp, GpExpr, GpPredicate};
use crate::numeric::{ExactReal, PrecisionPolicy, QPoly};

/// `α = (a + √(a²+4))/2 = [a; a, a, …]`.
#[derive(Debug, Clone)]
pub struct QuadraticParams {
    pub a: u64,
    pub alpha: ExactReal,
}

impl QuadraticParams {
    pub fn new(a: u64) -> Result<Self> {
        if a == 0 {
            return Err(Error::invalid("a must be positive"));
        }
        let a_big = BigInt::from(a);
        let disc = ExactReal::int(&a_big * &a_big + 4).sqrt()?;
        let alpha = ExactReal::int(a_big).add(&disc).mul(&ExactReal::ratio(1, 2)?);
        Ok(QuadraticParams { a, alpha })
    }

    /// `1/√(a²+4)`, the limit of `n_i‖n_i α‖`.
    pub fn limit(&self) -> f64 {
        1.0 / ((self.a * self.a + 4) as f64).sqrt()
    }
}

/// `n_0 = 0, n_1 = 1, n_{i+2} = a n_{i+1} + n_i`.
pub fn quadratic_terms(a: u64, count: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(count);
    for i in 0..count {
        let t = match i {
            0 => BigInt::zero(),
            1 => BigInt::from(1),
            _ => &out[i - 1] * a + &out[i - 2],
        };
        out.push(t);
    }
    out
}

/// Terms not exceeding `limit`, as `u64`.
pub fn quadratic_terms_below(a: u64, limit: u64) -> Vec<u64> {
    let mut out = vec![0u64, 1];
    loop {
        let n = out.len();
        match out[n - 1].checked_mul(a).and_then(|x| x.checked_add(out[n - 2])) {
            Some(t) if t <= limit => out.push(t),
            _ => break,
        }
    }
    out.retain(|&t| t <= limit);
    out.dedup();
    out
}

/// `E′ = {n : 2n·‖nα‖ < 1}` as a predicate in the floor basis.
pub fn fibonacci_like_set(params: &QuadraticParams) -> GpPredicate {
    dist_predicate(&params.alpha)
}

fn dist_predicate(alpha: &ExactReal) -> GpPredicate {
    let n = GpExpr::var();
    let lhs = GpExpr::int(2).mul(&n).mul(&n.scale(alpha.clone()).dist());
    GpPredicate::new(lhs, CmpOp::Lt, GpExpr::int(1))
}

#[derive(Debug, Clone, Serialize)]
pub struct FibScan {
    pub a: u64,
    pub horizon: u64,
    pub members: Vec<u64>,
    pub terms: Vec<u64>,
    /// Terms `≤ horizon` that fail the predicate.
    pub head: Vec<u64>,
    /// Members that are not terms (Legendre says there are none).
    pub extra: Vec<u64>,
    pub exact_evaluations: u64,
}

/// Scans `0 ≤ n ≤ horizon` for members of `E′`. A floating-point screen
/// discards `n` whose value `2n‖nα‖` exceeds 1 by more than a proven
/// error bound; every remaining `n` is decided exactly.
pub fn fibonacci_scan(params: &QuadraticParams, horizon: u64, policy: &PrecisionPolicy) -> Result<FibScan> {
    let pred = fibonacci_like_set(params);
    let alpha_f = params.alpha.to_f64();
    let decided: Vec<(u64, bool, bool)> = (0..=horizon)
        .into_par_iter()
        .filter_map(|n| {
            let nf = n as f64;
            let x = nf * alpha_f;
            let d = (x - x.round()).abs();
            let v = 2.0 * nf * d;
            // |x − nα| ≤ 4·nα·2⁻⁵³, so |v − 2n‖nα‖| ≤ 8n²α·2⁻⁵³ + rounding.
            let err = 8.0 * nf * nf * alpha_f * f64::EPSILON + 1e-12;
            if v > 1.0 + 2.0 * err && err < 0.25 {
                return None;
            }
            Some(pred.eval(&BigInt::from(n), policy).map(|m| (n, m, true)))
        })
        .collect::<Result<_>>()?;
    let members: Vec<u64> = decided.iter().filter(|t| t.1).map(|t| t.0).collect();
    let terms = quadratic_terms_below(params.a, horizon);
    let head = terms
        .iter()
        .copied()
        .filter(|t| members.binary_search(t).is_err())
        .collect();
    let extra = members
        .iter()
        .copied()
        .filter(|m| terms.binary_search(m).is_err())
        .collect();
    Ok(FibScan {
        a: params.a,
        horizon,
        members,
        terms,
        head,
        extra,
        exact_evaluations: decided.len() as u64,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TermCheck {
    pub index: usize,
    pub term: String,
    pub member: bool,
    /// `n_i·‖n_i α‖`.
    pub normalized: f64,
}

/// Predicate values along the terms `n_i ≤ limit`, computed exactly.
pub fn term_checks(params: &QuadraticParams, limit: &BigInt, policy: &PrecisionPolicy) -> Result<Vec<TermCheck>> {
    let pred = fibonacci_like_set(params);
    let terms = quadratic_terms(params.a, 400);
    let mut out = Vec::new();
    for (i, t) in terms.iter().enumerate() {
        if t > limit {
            break;
        }
        if i >= 2 && terms[i - 1] == *t {
            continue;
        }
        let member = pred.eval(t, policy)?;
        let x = params.alpha.mul(&ExactReal::int(t.clone()));
        let normalized = ExactReal::int(t.clone()).mul(&x.dist_to_int(policy)?).to_f64();
        out.push(TermCheck {
            index: i,
            term: t.to_string(),
            member,
            normalized,
        });
    }
    Ok(out)
}

/// Smallest index from which every term `≤ limit` satisfies the predicate.
pub fn tail_start(checks: &[TermCheck]) -> Option<usize> {
    let last_fail = checks.iter().rposition(|c| !c.member);
    match last_fail {
        None => checks.first().map(|c| c.index),
        Some(k) => checks.get(k + 1).map(|c| c.index),
    }
}

/// Recurrence `n_{i+2} = a_{i+2} n_{i+1} + n_i` with a periodic schedule of
/// partial quotients, and the matching badly approximable `α`.
#[derive(Debug, Clone)]
pub struct Lawnmower {
    pub schedule: Vec<u64>,
    pub alpha: ExactReal,
}

impl Lawnmower {
    /// `α = [0; s_0, s_1, …]` with the schedule repeated; each `s_i ≥ 2`.
    pub fn new(schedule: &[u64]) -> Result<Self> {
        if schedule.is_empty() || schedule.iter().any(|&s| s < 2) {
            return Err(Error::invalid("schedule entries must be at least 2"));
        }
        // x = [s0; s1, …] satisfies q x² + (q' − p) x − p' = 0 from the
        // last two convergents of one period.
        let (mut p0, mut p1) = (BigInt::from(1), BigInt::from(schedule[0]));
        let (mut q0, mut q1) = (BigInt::zero(), BigInt::from(1));
        for &s in &schedule[1..] {
            let p2 = &p1 * s + &p0;
            let q2 = &q1 * s + &q0;
            p0 = std::mem::replace(&mut p1, p2);
            q0 = std::mem::replace(&mut q1, q2);
        }
        let poly = QPoly::from_bigints(&[-p0.clone(), &q0 - &p1, q1.clone()]);
        let lo = BigRational::from_integer(schedule[0].into());
        let hi = BigRational::from_integer((schedule[0] + 1).into());
        let x = ExactReal::algebraic(&poly, lo, hi, None)?;
        Ok(Lawnmower {
            schedule: schedule.to_vec(),
            alpha: x.recip()?,
        })
    }

    pub fn terms(&self, count: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = Vec::with_capacity(count);
        for i in 0..count {
            let t = match i {
                0 => BigInt::zero(),
                1 => BigInt::from(1),
                _ => &out[i - 1] * self.schedule[(i - 2) % self.schedule.len()] + &out[i - 2],
            };
            out.push(t);
        }
        out
    }

    pub fn predicate(&self) -> GpPredicate {
        dist_predicate(&self.alpha)
    }

    /// Members of the predicate set on `[0, horizon]` that are not terms,
    /// and terms that are not members. No finiteness is claimed.
    pub fn compare(&self, horizon: u64, policy: &PrecisionPolicy) -> Result<(Vec<u64>, Vec<u64>)> {
        let pred = self.predicate();
        let members: Vec<u64> = (0..=horizon)
            .into_par_iter()
            .map(|n| Ok((n, pred.eval(&BigInt::from(n), policy)?)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|t| t.1)
            .map(|t| t.0)
            .collect();
        let terms: Vec<u64> = self
            .terms(200)
            .iter()
            .filter_map(|t| t.to_u64())
            .filter(|&t| t <= horizon)
            .collect();
        let extra = members.iter().copied().filter(|m| !terms.contains(m)).collect();
        let missing = terms.iter().copied().filter(|t| !members.contains(t)).collect();
        Ok((extra, missing))
    }
}
