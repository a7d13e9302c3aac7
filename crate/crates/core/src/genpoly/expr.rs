//! Generalised-polynomial expressions and their rigorous evaluation.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ExactReal, Interval, PrecisionPolicy};

/// Primitive nodes. Ceil, nearest integer, fractional part and distance
/// to the nearest integer are built from these.
#[derive(Debug)]
pub enum GpNode {
    Const(ExactReal),
    Var,
    Add(GpExpr, GpExpr),
    Mul(GpExpr, GpExpr),
    Floor(GpExpr),
}

/// Shared, immutable expression tree.
#[derive(Debug, Clone)]
pub struct GpExpr(Arc<GpNode>);

/// Result of evaluating an expression at one point.
#[derive(Debug, Clone, Serialize)]
pub struct GpValue {
    #[serde(skip)]
    pub value: ExactReal,
    pub enclosure: Interval,
    pub bits: u32,
    /// Set when the value is proven to be this exact integer.
    pub exact_integer: Option<BigInt>,
}

impl GpValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

fn half() -> ExactReal {
    ExactReal::rational(BigRational::new(1.into(), 2.into()))
}

impl GpExpr {
    fn make(node: GpNode) -> Self {
        GpExpr(Arc::new(node))
    }

    pub fn node(&self) -> &GpNode {
        &self.0
    }

    pub fn constant(x: impl Into<ExactReal>) -> Self {
        GpExpr::make(GpNode::Const(x.into()))
    }

    pub fn int(n: i64) -> Self {
        GpExpr::constant(ExactReal::int(n))
    }

    pub fn var() -> Self {
        GpExpr::make(GpNode::Var)
    }

    pub fn as_const(&self) -> Option<&ExactReal> {
        match &*self.0 {
            GpNode::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn add(&self, o: &GpExpr) -> GpExpr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => GpExpr::constant(a.add(b)),
            (Some(a), _) if a.is_exact_zero() => o.clone(),
            (_, Some(b)) if b.is_exact_zero() => self.clone(),
            _ => GpExpr::make(GpNode::Add(self.clone(), o.clone())),
        }
    }

    pub fn mul(&self, o: &GpExpr) -> GpExpr {
        match (self.as_const(), o.as_const()) {
            (Some(a), Some(b)) => GpExpr::constant(a.mul(b)),
            (Some(a), _) if a.as_rational().is_some_and(|q| q.is_one()) => o.clone(),
            (_, Some(b)) if b.as_rational().is_some_and(|q| q.is_one()) => self.clone(),
            _ => GpExpr::make(GpNode::Mul(self.clone(), o.clone())),
        }
    }

    pub fn floor(&self) -> GpExpr {
        match self.as_const().and_then(|c| c.as_rational()) {
            Some(q) => GpExpr::constant(ExactReal::int(q.floor().to_integer())),
            None => GpExpr::make(GpNode::Floor(self.clone())),
        }
    }

    pub fn scale(&self, c: ExactReal) -> GpExpr {
        GpExpr::constant(c).mul(self)
    }

    pub fn neg(&self) -> GpExpr {
        self.scale(ExactReal::int(-1))
    }

    pub fn sub(&self, o: &GpExpr) -> GpExpr {
        self.add(&o.neg())
    }

    pub fn pow(&self, e: u32) -> GpExpr {
        if e == 0 {
            return GpExpr::int(1);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// `⌈x⌉ = −⌊−x⌋`.
    pub fn ceil(&self) -> GpExpr {
        self.neg().floor().neg()
    }

    /// `⟨⟨x⟩⟩ = ⌊x + 1/2⌋`.
    pub fn nearest(&self) -> GpExpr {
        self.add(&GpExpr::constant(half())).floor()
    }

    /// `{x} = x − ⌊x⌋`.
    pub fn frac(&self) -> GpExpr {
        self.sub(&self.floor())
    }

    /// `‖x‖ = |y|` with `y = x − ⟨⟨x⟩⟩ ∈ [−1/2, 1/2)`, written as
    /// `y·(1 + 2⌊y⌋)` so that only floors are needed.
    pub fn dist(&self) -> GpExpr {
        let y = self.sub(&self.nearest());
        let sign = GpExpr::int(1).add(&GpExpr::int(2).mul(&y.floor()));
        y.mul(&sign)
    }

    pub fn is_constant(&self) -> bool {
        match &*self.0 {
            GpNode::Const(_) => true,
            GpNode::Var => false,
            GpNode::Add(a, b) | GpNode::Mul(a, b) => a.is_constant() && b.is_constant(),
            GpNode::Floor(a) => a.is_constant(),
        }
    }

    /// Number of distinct nodes.
    pub fn size(&self) -> usize {
        let mut seen = std::collections::HashSet::new();
        fn walk(e: &GpExpr, seen: &mut std::collections::HashSet<usize>) {
            if !seen.insert(Arc::as_ptr(&e.0) as usize) {
                return;
            }
            match &*e.0 {
                GpNode::Add(a, b) | GpNode::Mul(a, b) => {
                    walk(a, seen);
                    walk(b, seen);
                }
                GpNode::Floor(a) => walk(a, seen),
                _ => {}
            }
        }
        walk(self, &mut seen);
        seen.len()
    }

    /// Evaluates at `n`, resolving every floor. Floors of exactly known
    /// arguments are exact; others use the precision ladder.
    pub fn eval(&self, n: &BigInt, policy: &PrecisionPolicy) -> Result<GpValue> {
        let mut memo = HashMap::new();
        let value = self.eval_exact(n, policy, &mut memo)?;
        let bits = policy.start_bits;
        let enclosure = value
            .enclosure_within(bits, policy.max_bits)
            .map_err(|_| Error::PrecisionExhausted {
                subexpr: self.to_string(),
                bits: policy.max_bits,
            })?;
        let exact_integer = value.as_rational().filter(|q| q.is_integer()).map(|q| q.to_integer());
        Ok(GpValue {
            value,
            enclosure,
            bits,
            exact_integer,
        })
    }

    /// Exact value at `n` without computing a final enclosure.
    pub fn eval_real(&self, n: &BigInt, policy: &PrecisionPolicy) -> Result<ExactReal> {
        self.eval_exact(n, policy, &mut HashMap::new())
    }

    /// Integer value at `n`; errors if the value is not a proven integer.
    pub fn eval_int(&self, n: &BigInt, policy: &PrecisionPolicy) -> Result<BigInt> {
        let v = self.eval_real(n, policy)?;
        match v.as_rational() {
            Some(q) if q.is_integer() => Ok(q.to_integer()),
            _ => Err(Error::Invalid(format!(
                "{self} is not integer-valued at n = {n} (value {v})"
            ))),
        }
    }

    pub fn eval_i64(&self, n: i64, policy: &PrecisionPolicy) -> Result<i64> {
        self.eval_int(&BigInt::from(n), policy)?
            .to_i64()
            .ok_or_else(|| Error::invalid("value exceeds 64 bits"))
    }

    fn eval_exact(
        &self,
        n: &BigInt,
        policy: &PrecisionPolicy,
        memo: &mut HashMap<usize, ExactReal>,
    ) -> Result<ExactReal> {
        let key = Arc::as_ptr(&self.0) as usize;
        if let Some(v) = memo.get(&key) {
            return Ok(v.clone());
        }
        let v = match &*self.0 {
            GpNode::Const(c) => c.clone(),
            GpNode::Var => ExactReal::int(n.clone()),
            GpNode::Add(a, b) => a.eval_exact(n, policy, memo)?.add(&b.eval_exact(n, policy, memo)?),
            GpNode::Mul(a, b) => a.eval_exact(n, policy, memo)?.mul(&b.eval_exact(n, policy, memo)?),
            GpNode::Floor(a) => {
                let x = a.eval_exact(n, policy, memo)?;
                let f = x.floor(policy).map_err(|e| match e {
                    Error::PrecisionExhausted { bits, .. } => Error::PrecisionExhausted {
                        subexpr: format!("{self} at n = {n}"),
                        bits,
                    },
                    other => other,
                })?;
                ExactReal::int(f)
            }
        };
        memo.insert(key, v.clone());
        Ok(v)
    }

    /// Polynomial `Σ c_i n^i` in Horner form.
    pub fn polynomial(coeffs: &[ExactReal]) -> GpExpr {
        let n = GpExpr::var();
        let mut acc = GpExpr::constant(ExactReal::zero());
        for c in coeffs.iter().rev() {
            acc = acc.mul(&n).add(&GpExpr::constant(c.clone()));
        }
        acc
    }
}

impl fmt::Display for GpExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            GpNode::Const(c) => match c.as_rational() {
                Some(q) => write!(f, "{q}"),
                None => write!(f, "[{c}]"),
            },
            GpNode::Var => write!(f, "n"),
            GpNode::Add(a, b) => write!(f, "(+ {a} {b})"),
            GpNode::Mul(a, b) => write!(f, "(* {a} {b})"),
            GpNode::Floor(a) => write!(f, "(floor {a})"),
        }
    }
}

/// `g(n) = 1 − ⌈{θ·h(n)}⌉`: equals 1 exactly where `h(n) = 0`, provided
/// `θ·h(n)` is never a nonzero integer.
pub fn indicator_zero_set(h: &GpExpr, theta: &ExactReal) -> GpExpr {
    GpExpr::int(1).sub(&h.scale(theta.clone()).frac().ceil())
}

/// `1` exactly where `a ≤ h(n) < b`: the zero set of `⌊(h(n) − a)/(b − a)⌋`.
pub fn window_indicator(h: &GpExpr, a: &ExactReal, b: &ExactReal, theta: &ExactReal) -> Result<GpExpr> {
    let width = b.sub(a);
    let inv = width.recip()?;
    let inner = h.sub(&GpExpr::constant(a.clone())).scale(inv).floor();
    Ok(indicator_zero_set(&inner, theta))
}

/// Semantic twin of [`indicator_zero_set`]: tests `h(n) = 0` directly.
pub fn zero_test(h: &GpExpr, n: &BigInt, policy: &PrecisionPolicy) -> Result<bool> {
    let v = h.eval_real(n, policy)?;
    Ok(v.sign(policy)? == std::cmp::Ordering::Equal)
}

impl From<BigInt> for ExactReal {
    fn from(n: BigInt) -> Self {
        ExactReal::int(n)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CmpOp {
    Lt,
    Le,
    Eq,
}

/// The set `{n : lhs(n) op rhs(n)}`, decided by exact sign computation.
#[derive(Debug, Clone)]
pub struct GpPredicate {
    pub lhs: GpExpr,
    pub op: CmpOp,
    pub rhs: GpExpr,
}

impl GpPredicate {
    pub fn new(lhs: GpExpr, op: CmpOp, rhs: GpExpr) -> Self {
        GpPredicate { lhs, op, rhs }
    }

    pub fn eval(&self, n: &BigInt, policy: &PrecisionPolicy) -> Result<bool> {
        let mut memo = HashMap::new();
        let l = self.lhs.eval_exact(n, policy, &mut memo)?;
        let r = self.rhs.eval_exact(n, policy, &mut memo)?;
        let s = l.cmp_with(&r, policy).map_err(|e| match e {
            Error::PrecisionExhausted { bits, .. } => Error::PrecisionExhausted {
                subexpr: format!("{self} at n = {n}"),
                bits,
            },
            other => other,
        })?;
        Ok(match self.op {
            CmpOp::Lt => s == std::cmp::Ordering::Less,
            CmpOp::Le => s != std::cmp::Ordering::Greater,
            CmpOp::Eq => s == std::cmp::Ordering::Equal,
        })
    }

    /// `lhs − rhs` at `n`, exactly.
    pub fn margin(&self, n: &BigInt, policy: &PrecisionPolicy) -> Result<ExactReal> {
        let mut memo = HashMap::new();
        let l = self.lhs.eval_exact(n, policy, &mut memo)?;
        let r = self.rhs.eval_exact(n, policy, &mut memo)?;
        Ok(l.sub(&r))
    }
}

impl fmt::Display for GpPredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = match self.op {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Eq => "=",
        };
        write!(f, "({op} {} {})", self.lhs, self.rhs)
    }
}
