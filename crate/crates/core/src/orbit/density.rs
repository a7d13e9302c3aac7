//! Orbit indicators as integer sequences, and windowed density scans.

use std::cmp::Ordering;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::scan::{heisenberg_hit, screen, EpsilonSchedule};
use super::skew::{residue_indicator, TorusSkewSystem};
use crate::error::{Error, Result};
use crate::genpoly::{density_estimate, IntSequence};
use crate::numeric::{ExactReal, PrecisionPolicy};

/// `[{x_0 + nα} ∈ [lo, hi)]` for the rotation by `α`.
pub struct RotationArc {
    alpha: ExactReal,
    start: ExactReal,
    lo: BigRational,
    hi: BigRational,
    policy: PrecisionPolicy,
    floats: (f64, f64, f64, f64),
}

impl RotationArc {
    pub fn new(
        alpha: ExactReal,
        start: ExactReal,
        lo: BigRational,
        hi: BigRational,
        policy: PrecisionPolicy,
    ) -> Result<Self> {
        let zero = BigRational::from_integer(0.into());
        let one = BigRational::from_integer(1.into());
        if lo < zero || hi > one || lo > hi {
            return Err(Error::invalid("arc must satisfy 0 ≤ lo ≤ hi ≤ 1"));
        }
        let floats = (
            alpha.to_f64(),
            start.to_f64(),
            lo.to_f64().unwrap_or(0.0),
            hi.to_f64().unwrap_or(1.0),
        );
        Ok(RotationArc {
            alpha,
            start,
            lo,
            hi,
            policy,
            floats,
        })
    }

    fn exact(&self, n: u64) -> Result<bool> {
        let x = self.start.add(&ExactReal::int(n).mul(&self.alpha)).frac(&self.policy)?;
        let lo = ExactReal::rational(self.lo.clone());
        let hi = ExactReal::rational(self.hi.clone());
        Ok(x.cmp_with(&lo, &self.policy)? != Ordering::Less && x.cmp_with(&hi, &self.policy)? == Ordering::Less)
    }
}

impl IntSequence for RotationArc {
    fn at(&self, n: u64) -> Result<i64> {
        let (a, s, lo, hi) = self.floats;
        let x = s + n as f64 * a;
        let err = (x.abs() + 1.0) * 4.0 * f64::EPSILON;
        let f = x - x.floor();
        let clear = [0.0, 1.0, lo, hi].iter().all(|b| (f - b).abs() > 2.0 * err);
        if clear {
            return Ok((f >= lo && f < hi) as i64);
        }
        Ok(self.exact(n)? as i64)
    }

    fn label(&self) -> String {
        format!("{{{} + n*{}}} in [{}, {})", self.start, self.alpha, self.lo, self.hi)
    }
}

/// `f(n) = [‖nα⌊nβ⌋‖ < ε(n)]`, with the floating-point screen of the
/// suffix scan in front of the exact decision.
pub struct HeisenbergTarget {
    alpha: ExactReal,
    beta: ExactReal,
    eps: EpsilonSchedule,
    policy: PrecisionPolicy,
    af: f64,
    bf: f64,
}

impl HeisenbergTarget {
    pub fn new(alpha: ExactReal, beta: ExactReal, eps: EpsilonSchedule, policy: PrecisionPolicy) -> Self {
        let (af, bf) = (alpha.to_f64(), beta.to_f64());
        HeisenbergTarget {
            alpha,
            beta,
            eps,
            policy,
            af,
            bf,
        }
    }
}

impl IntSequence for HeisenbergTarget {
    fn at(&self, n: u64) -> Result<i64> {
        if let Some(hit) = screen(self.af, self.bf, &self.eps, n) {
            return Ok(hit as i64);
        }
        Ok(heisenberg_hit(&self.alpha, &self.beta, &self.eps, n, &self.policy)?.is_some() as i64)
    }

    fn label(&self) -> String {
        format!("||n*{}*floor(n*{})|| < {}", self.alpha, self.beta, self.eps)
    }
}

/// [`residue_indicator`] as a sequence.
pub struct SkewResidue {
    pub system: TorusSkewSystem,
    pub start: Vec<ExactReal>,
    pub residue: u64,
    pub policy: PrecisionPolicy,
}

impl IntSequence for SkewResidue {
    fn at(&self, n: u64) -> Result<i64> {
        Ok(residue_indicator(&self.system, &self.start, self.residue, n, &self.policy)? as i64)
    }

    fn label(&self) -> String {
        format!("skew orbit in cell {} of {}", self.residue, self.system.modulus())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitDensity {
    pub n: u64,
    pub count: u64,
    pub natural: f64,
    /// Largest relative count over the sampled windows of length `n`.
    pub banach: f64,
    pub banach_start: u64,
    pub window_count: usize,
    pub seed: u64,
}

/// `|E ∩ [0, n)|/n` and the densest of `window_count` seeded windows
/// `[M, M + n)` with `M < 4n`.
pub fn banach_density_scan(seq: &dyn IntSequence, n: u64, window_count: usize, seed: u64) -> Result<OrbitDensity> {
    let report = density_estimate(seq, &[n], window_count, 4 * n, seed)?;
    let (nat, ban) = (&report.natural[0], &report.banach[0]);
    Ok(OrbitDensity {
        n,
        count: nat.count,
        natural: nat.density,
        banach: ban.density,
        banach_start: ban.start,
        window_count,
        seed,
    })
}
