//! Integer sequence handles shared by the scanners.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use super::expr::{zero_test, GpExpr, GpPredicate};
use crate::automaton::Dfao;
use crate::error::{Error, Result};
use crate::numeric::{ExactReal, PrecisionPolicy};

/// A sequence `ℕ → ℤ` evaluated on demand.
pub trait IntSequence: Send + Sync {
    fn at(&self, n: u64) -> Result<i64>;

    fn label(&self) -> String;

    /// First `len` terms, evaluated in parallel.
    fn prefix(&self, len: u64) -> Result<Vec<i64>> {
        (0..len).into_par_iter().map(|n| self.at(n)).collect()
    }

    /// Terms on `[start, start + len)`.
    fn range(&self, start: u64, len: u64) -> Result<Vec<i64>> {
        (start..start + len).into_par_iter().map(|n| self.at(n)).collect()
    }
}

/// Integer-valued generalised polynomial, optionally reduced mod `m`.
pub struct GpSequence {
    expr: GpExpr,
    modulus: Option<u64>,
    policy: PrecisionPolicy,
}

impl GpSequence {
    pub fn new(expr: GpExpr, modulus: Option<u64>, policy: PrecisionPolicy) -> Self {
        GpSequence { expr, modulus, policy }
    }

    pub fn expr(&self) -> &GpExpr {
        &self.expr
    }
}

impl IntSequence for GpSequence {
    fn at(&self, n: u64) -> Result<i64> {
        let v = self.expr.eval_int(&BigInt::from(n), &self.policy)?;
        let v = match self.modulus {
            Some(m) => {
                let m = BigInt::from(m);
                ((v % &m) + &m) % &m
            }
            None => v,
        };
        v.to_i64()
            .ok_or_else(|| Error::invalid("sequence value exceeds 64 bits"))
    }

    fn label(&self) -> String {
        match self.modulus {
            Some(m) => format!("{} mod {m}", self.expr),
            None => self.expr.to_string(),
        }
    }
}

/// `n ↦ ⌊p(n)⌋ mod m` with a growing cache of computed terms.
pub struct FloorPolyMod {
    inner: GpSequence,
    cache: Mutex<Vec<i64>>,
}

impl IntSequence for FloorPolyMod {
    fn at(&self, n: u64) -> Result<i64> {
        if let Some(v) = self.cache.lock().expect("cache").get(n as usize) {
            return Ok(*v);
        }
        self.inner.at(n)
    }

    fn label(&self) -> String {
        self.inner.label()
    }

    fn prefix(&self, len: u64) -> Result<Vec<i64>> {
        let have = self.cache.lock().expect("cache").len() as u64;
        if have < len {
            let more = self.inner.range(have, len - have)?;
            let mut c = self.cache.lock().expect("cache");
            if c.len() as u64 == have {
                c.extend(more);
            }
        }
        Ok(self.cache.lock().expect("cache")[..len as usize].to_vec())
    }
}

/// `n ↦ ⌊Σ c_i n^i⌋ mod m`.
pub fn floor_poly_mod(coeffs: &[ExactReal], m: u64, policy: PrecisionPolicy) -> Result<FloorPolyMod> {
    if m < 2 {
        return Err(Error::invalid("modulus must be at least 2"));
    }
    let expr = GpExpr::polynomial(coeffs).floor();
    Ok(FloorPolyMod {
        inner: GpSequence::new(expr, Some(m), policy),
        cache: Mutex::new(Vec::new()),
    })
}

/// The output sequence of an automaton.
pub struct DfaoSequence(pub Dfao);

impl IntSequence for DfaoSequence {
    fn at(&self, n: u64) -> Result<i64> {
        Ok(self.0.eval(n) as i64)
    }

    fn label(&self) -> String {
        format!("automaton with {} states", self.0.num_states())
    }
}

/// A sequence given by a closure.
pub struct FnSequence<F: Fn(u64) -> Result<i64> + Send + Sync> {
    f: F,
    label: String,
}

impl<F: Fn(u64) -> Result<i64> + Send + Sync> FnSequence<F> {
    pub fn new(label: impl Into<String>, f: F) -> Self {
        FnSequence { f, label: label.into() }
    }
}

impl<F: Fn(u64) -> Result<i64> + Send + Sync> IntSequence for FnSequence<F> {
    fn at(&self, n: u64) -> Result<i64> {
        (self.f)(n)
    }

    fn label(&self) -> String {
        self.label.clone()
    }
}

/// Indicator of `{n : h(n) = 0}` decided by exact sign computation.
pub struct ZeroSetTwin {
    h: GpExpr,
    policy: PrecisionPolicy,
}

impl ZeroSetTwin {
    pub fn new(h: GpExpr, policy: PrecisionPolicy) -> Self {
        ZeroSetTwin { h, policy }
    }
}

impl IntSequence for ZeroSetTwin {
    fn at(&self, n: u64) -> Result<i64> {
        Ok(zero_test(&self.h, &BigInt::from(n), &self.policy)? as i64)
    }

    fn label(&self) -> String {
        format!("[{} = 0]", self.h)
    }
}

/// Indicator of a [`GpPredicate`].
pub struct PredicateSequence {
    pred: GpPredicate,
    policy: PrecisionPolicy,
}

impl PredicateSequence {
    pub fn new(pred: GpPredicate, policy: PrecisionPolicy) -> Self {
        PredicateSequence { pred, policy }
    }
}

impl IntSequence for PredicateSequence {
    fn at(&self, n: u64) -> Result<i64> {
        Ok(self.pred.eval(&BigInt::from(n), &self.policy)? as i64)
    }

    fn label(&self) -> String {
        self.pred.to_string()
    }
}
