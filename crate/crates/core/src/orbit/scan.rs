//! Suffix-constrained hit scans for `‖nα⌊nβ⌋‖ < ε(n)` and horizontal
//! character probes.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::digits::DigitWord;
use crate::error::{Error, Result};
use crate::genpoly::{parse_gp, parse_rational};
use crate::numeric::{ExactReal, PrecisionPolicy};

/// `ε(n) = c` or `ε(n) = c·n^{-γ}` (with `ε(0) = c`).
#[derive(Debug, Clone)]
pub enum EpsilonSchedule {
    Constant(ExactReal),
    Power { c: ExactReal, gamma: BigRational },
}

impl EpsilonSchedule {
    pub fn constant(c: ExactReal) -> Result<Self> {
        check_non_negative(&c)?;
        Ok(EpsilonSchedule::Constant(c))
    }

    pub fn power(c: ExactReal, gamma: BigRational) -> Result<Self> {
        check_non_negative(&c)?;
        if gamma.is_negative() {
            return Err(Error::invalid("the exponent γ must be non-negative"));
        }
        Ok(EpsilonSchedule::Power { c, gamma })
    }

    /// Parses `"0.4"`, `"n^-1/10"` or `"2*n^-0.5"`; the constant may be any
    /// generalised-polynomial constant such as `(sqrt 2)`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let constant = |t: &str| -> Result<ExactReal> {
            parse_gp(t)?
                .as_const()
                .cloned()
                .ok_or_else(|| Error::invalid(format!("`{t}` is not a constant")))
        };
        let Some(pos) = s.find("n^") else {
            return EpsilonSchedule::constant(constant(s)?);
        };
        let head = s[..pos].trim().trim_end_matches('*').trim();
        let c = if head.is_empty() {
            ExactReal::one()
        } else {
            constant(head)?
        };
        let exp = s[pos + 2..].trim();
        let exp = exp
            .strip_prefix('-')
            .ok_or_else(|| Error::invalid("the schedule exponent must be written as n^-γ"))?;
        let gamma = parse_rational(exp.trim_start_matches('(').trim_end_matches(')'))
            .ok_or_else(|| Error::invalid(format!("bad exponent `{exp}`")))?;
        EpsilonSchedule::power(c, gamma)
    }

    fn scale(&self) -> &ExactReal {
        match self {
            EpsilonSchedule::Constant(c) | EpsilonSchedule::Power { c, .. } => c,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scale().is_exact_zero()
    }

    pub fn value_f64(&self, n: u64) -> f64 {
        match self {
            EpsilonSchedule::Constant(c) => c.to_f64(),
            EpsilonSchedule::Power { c, gamma } => {
                if n == 0 {
                    c.to_f64()
                } else {
                    c.to_f64() * (n as f64).powf(-gamma.to_f64().unwrap_or(0.0))
                }
            }
        }
    }

    /// Decides `x < ε(n)` for `x ≥ 0`; with `γ = p/q` this is
    /// `x^q n^p < c^q`.
    pub fn exceeds(&self, x: &ExactReal, n: u64, policy: &PrecisionPolicy) -> Result<bool> {
        match self {
            EpsilonSchedule::Power { c, gamma } if n > 0 && !gamma.is_zero() => {
                let p = gamma
                    .numer()
                    .to_i64()
                    .ok_or_else(|| Error::invalid("exponent too large"))?;
                let q = gamma
                    .denom()
                    .to_i64()
                    .ok_or_else(|| Error::invalid("exponent too large"))?;
                let lhs = x.pow(q)?.mul(&ExactReal::int(n).pow(p)?);
                Ok(lhs.cmp_with(&c.pow(q)?, policy)? == Ordering::Less)
            }
            _ => Ok(x.cmp_with(self.scale(), policy)? == Ordering::Less),
        }
    }
}

fn check_non_negative(c: &ExactReal) -> Result<()> {
    if c.sign(&PrecisionPolicy::default())? == Ordering::Less {
        return Err(Error::invalid("ε must be non-negative"));
    }
    Ok(())
}

impl fmt::Display for EpsilonSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpsilonSchedule::Constant(c) => write!(f, "{c}"),
            EpsilonSchedule::Power { c, gamma } => write!(f, "{c}*n^-{gamma}"),
        }
    }
}

/// Re-checkable record of `‖nα⌊nβ⌋‖ < ε(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct HitCertificate {
    pub n: u64,
    pub floor_n_beta: BigInt,
    /// `‖nα⌊nβ⌋‖` as decimal and as an enclosure.
    pub dist: String,
    pub dist_lo: f64,
    pub dist_hi: f64,
    pub eps: f64,
}

/// Exact decision of `‖nα⌊nβ⌋‖ < ε(n)`, returning the certificate on a hit.
pub fn heisenberg_hit(
    alpha: &ExactReal,
    beta: &ExactReal,
    eps: &EpsilonSchedule,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<Option<HitCertificate>> {
    let nn = ExactReal::int(n);
    let m = nn.mul(beta).floor(policy)?;
    let d = nn.mul(alpha).mul(&ExactReal::int(m.clone())).dist_to_int(policy)?;
    if !eps.exceeds(&d, n, policy)? {
        return Ok(None);
    }
    let iv = d.enclosure(policy.start_bits)?;
    Ok(Some(HitCertificate {
        n,
        floor_n_beta: m,
        dist: iv.to_decimal(20),
        dist_lo: iv.lo.to_f64(),
        dist_hi: iv.hi.to_f64(),
        eps: eps.value_f64(n),
    }))
}

/// Floating-point screen: `Some(b)` only when the margin certainly decides `n`.
pub(super) fn screen(af: f64, bf: f64, eps: &EpsilonSchedule, n: u64) -> Option<bool> {
    let nb = n as f64 * bf;
    let err_b = nb.abs() * 4.0 * f64::EPSILON + 1e-300;
    if (nb - nb.round()).abs() <= err_b {
        return None;
    }
    let x = n as f64 * af * nb.floor();
    let err = x.abs() * 8.0 * f64::EPSILON;
    if err > 1e-4 {
        return None;
    }
    let dist = (x - x.round()).abs();
    let target = eps.value_f64(n);
    if dist > target * (1.0 + 1e-9) + err + 1e-12 {
        Some(false)
    } else if dist < target * (1.0 - 1e-9) - err - 1e-12 {
        Some(true)
    } else {
        None
    }
}

#[derive(Debug, Clone, Serialize)]
pub enum SuffixScan {
    Hit(HitCertificate),
    Exhausted { scanned: u64, n_max: u64 },
}

/// First `n ≤ n_max` whose base-`k` expansion ends with `u` and satisfies
/// `‖nα⌊nβ⌋‖ < ε(n)`.
pub fn suffix_hit_scan(
    alpha: &ExactReal,
    beta: &ExactReal,
    eps: &EpsilonSchedule,
    u: &DigitWord,
    n_max: u64,
    policy: &PrecisionPolicy,
) -> Result<SuffixScan> {
    let k = u.base() as u64;
    let modulus = k
        .checked_pow(u.len() as u32)
        .ok_or_else(|| Error::invalid("suffix too long"))?;
    let r = u.value_u64().ok_or_else(|| Error::invalid("suffix too long"))?;
    // `n = r` itself only ends with `u` when `u` has no leading zero.
    let first = if u.digits().first() == Some(&0) { 1 } else { 0 };
    if r > n_max || eps.is_zero() {
        return Ok(SuffixScan::Exhausted { scanned: 0, n_max });
    }
    let last = (n_max - r) / modulus;
    let (af, bf) = (alpha.to_f64(), beta.to_f64());
    let hit = (first..=last)
        .into_par_iter()
        .map(|j| {
            let n = j * modulus + r;
            if screen(af, bf, eps, n) == Some(false) {
                return Ok(None);
            }
            heisenberg_hit(alpha, beta, eps, n, policy)
        })
        .find_map_first(|r| r.transpose())
        .transpose()?;
    Ok(match hit {
        Some(c) => SuffixScan::Hit(c),
        None => SuffixScan::Exhausted {
            scanned: last + 1 - first,
            n_max,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeReport {
    pub k: u32,
    pub t: u32,
    pub l_bound: i64,
    pub l1: i64,
    pub l2: i64,
    /// `‖k^t(l₁α + l₂β)‖`.
    pub value: String,
    pub value_f64: f64,
    /// The minimum is exactly zero: `1, α, β` are linearly dependent.
    pub degenerate: bool,
    pub below_threshold: bool,
    pub pairs: u64,
}

/// Brute-force minimum of `‖k^t(l₁α + l₂β)‖` over `0 < ‖l‖_∞ ≤ l_bound`.
/// Only one of `±l` is visited. Floating point selects the candidates that
/// could be minimal; those are compared exactly.
pub fn horizontal_character_probe(
    alpha: &ExactReal,
    beta: &ExactReal,
    k: u32,
    t: u32,
    l_bound: i64,
    threshold: &ExactReal,
    policy: &PrecisionPolicy,
) -> Result<ProbeReport> {
    if l_bound < 1 {
        return Err(Error::invalid("l_bound must be at least 1"));
    }
    let kt = ExactReal::int(BigInt::from(k).pow(t));
    let (a, b) = (kt.mul(alpha), kt.mul(beta));
    let (af, bf) = (a.to_f64(), b.to_f64());
    let pairs: Vec<(i64, i64)> = (0..=l_bound)
        .flat_map(|l1| (-l_bound..=l_bound).map(move |l2| (l1, l2)))
        .filter(|&(l1, l2)| l1 > 0 || l2 > 0)
        .collect();
    let err = 2.0 * l_bound as f64 * af.abs().max(bf.abs()) * 4.0 * f64::EPSILON + 1e-300;
    let approx: Vec<f64> = pairs
        .par_iter()
        .map(|&(l1, l2)| {
            let x = l1 as f64 * af + l2 as f64 * bf;
            (x - x.round()).abs()
        })
        .collect();
    let best = approx.iter().copied().fold(f64::INFINITY, f64::min);
    let exact = |&(l1, l2): &(i64, i64)| -> Result<ExactReal> {
        ExactReal::int(l1)
            .mul(&a)
            .add(&ExactReal::int(l2).mul(&b))
            .dist_to_int(policy)
    };
    let mut winner: Option<((i64, i64), ExactReal)> = None;
    for (p, v) in pairs.iter().zip(&approx) {
        if *v > best + 2.0 * err {
            continue;
        }
        let val = exact(p)?;
        let better = match &winner {
            None => true,
            Some((_, w)) => val.cmp_with(w, policy)? == Ordering::Less,
        };
        if better {
            winner = Some((*p, val));
        }
    }
    let ((l1, l2), val) = winner.expect("at least one pair");
    Ok(ProbeReport {
        k,
        t,
        l_bound,
        l1,
        l2,
        value: val.to_decimal(20),
        value_f64: val.to_f64(),
        degenerate: val.is_exact_zero() || val.sign(policy)? == Ordering::Equal,
        below_threshold: val.cmp_with(threshold, policy)? == Ordering::Less,
        pairs: pairs.len() as u64,
    })
}
