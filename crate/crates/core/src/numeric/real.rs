//! Exact real numbers: rationals and number-field elements are exact,
//! everything else is a symbolic expression with rigorous enclosures.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::algebraic::AlgebraicRoot;
use super::consts::{e_interval, pi_interval};
use super::field::{FieldElem, NumberField};
use super::interval::{rational_to_decimal, Interval};
use super::poly::QPoly;
use crate::error::{Error, Result};

/// Upper bound on working precision and the ladder start.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub start_bits: u32,
    pub max_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            start_bits: 64,
            max_bits: 4096,
        }
    }
}

impl PrecisionPolicy {
    pub fn with_max_bits(max_bits: u32) -> Self {
        PrecisionPolicy {
            start_bits: 64.min(max_bits),
            max_bits,
        }
    }

    /// 64, 128, 256, … up to and including `max_bits`.
    pub fn ladder(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut b = self.start_bits.max(8);
        while b < self.max_bits {
            out.push(b);
            b = b.saturating_mul(2);
        }
        out.push(self.max_bits.max(8));
        out
    }
}

#[derive(Debug)]
enum Node {
    Rational(BigRational),
    Field(FieldElem),
    Pi,
    E,
    Root(Arc<AlgebraicRoot>),
    Add(ExactReal, ExactReal),
    Mul(ExactReal, ExactReal),
    Neg(ExactReal),
    Recip(ExactReal),
    Sqrt(ExactReal),
}

#[derive(Debug)]
struct Inner {
    node: Node,
    cache: Mutex<Option<(u32, Interval)>>,
    form: OnceLock<LinearForm>,
}

/// Cheaply clonable exact real number.
#[derive(Debug, Clone)]
pub struct ExactReal(Arc<Inner>);

/// `rational + Σ field elements + Σ coeff·atom`, used to detect exact
/// cancellation in sums.
#[derive(Debug, Clone)]
struct LinearForm {
    rational: BigRational,
    fields: BTreeMap<String, FieldElem>,
    atoms: BTreeMap<String, (BigRational, ExactReal)>,
}

impl LinearForm {
    fn scale(mut self, k: &BigRational) -> Self {
        self.rational *= k;
        for f in self.fields.values_mut() {
            *f = f.scale(k);
        }
        for (c, _) in self.atoms.values_mut() {
            *c *= k;
        }
        self
    }

    fn merge(mut self, o: LinearForm) -> Self {
        self.rational += o.rational;
        for (k, f) in o.fields {
            let v = match self.fields.remove(&k) {
                Some(g) => g.add(&f),
                None => f,
            };
            self.fields.insert(k, v);
        }
        for (k, (c, x)) in o.atoms {
            let v = match self.atoms.remove(&k) {
                Some((d, y)) => (d + c, y),
                None => (c, x),
            };
            self.atoms.insert(k, v);
        }
        self
    }

    /// Collapses to a rational or single-field value if possible.
    fn collapse(self) -> Option<ExactReal> {
        if self.atoms.values().any(|(c, _)| !c.is_zero()) {
            return None;
        }
        let live: Vec<FieldElem> = self.fields.into_values().filter(|f| !f.is_zero()).collect();
        match live.len() {
            0 => Some(ExactReal::rational(self.rational)),
            1 => Some(ExactReal::field(live[0].add_rational(&self.rational))),
            _ => None,
        }
    }
}

/// `Σ a_i b_j θ^i η^j` for elements of two different fields, with the
/// mixed monomials `θ^i·η^j` as shared atoms so that sums of such products
/// cancel exactly.
fn field_product(a: &FieldElem, b: &FieldElem) -> ExactReal {
    let power = |x: &FieldElem, i: usize| ExactReal::field(FieldElem::generator(x.field()).pow(i as u64));
    let mut acc = ExactReal::zero();
    for (i, ca) in a.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
        for (j, cb) in b.coeffs().iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let monomial = match (i, j) {
                (0, 0) => ExactReal::one(),
                (_, 0) => power(a, i),
                (0, _) => power(b, j),
                _ => ExactReal::make(Node::Mul(power(a, i), power(b, j))),
            };
            acc = acc.add(&ExactReal::rational(ca * cb).mul(&monomial));
        }
    }
    acc
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn is_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

/// `n = a²·m` with `m` free of square factors below 10⁶ (and of any
/// square factor when `n` is small enough to factor completely).
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut a = BigInt::one();
    let mut m = n.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000);
    while &p * &p <= m && p <= limit {
        let sq = &p * &p;
        while (&m % &sq).is_zero() {
            m /= &sq;
            a *= &p;
        }
        p += 1;
    }
    if is_square(&m) {
        let r = m.sqrt();
        a *= r;
        m = BigInt::one();
    }
    (a, m)
}

impl ExactReal {
    fn make(node: Node) -> Self {
        ExactReal(Arc::new(Inner {
            node,
            cache: Mutex::new(None),
            form: OnceLock::new(),
        }))
    }

    pub fn rational(q: BigRational) -> Self {
        ExactReal::make(Node::Rational(q))
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        ExactReal::rational(BigRational::from_integer(n.into()))
    }

    pub fn ratio(n: i64, d: i64) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("zero denominator"));
        }
        Ok(ExactReal::rational(BigRational::new(n.into(), d.into())))
    }

    pub fn zero() -> Self {
        ExactReal::int(0)
    }

    pub fn one() -> Self {
        ExactReal::int(1)
    }

    /// A number-field element; collapses to a rational when possible.
    pub fn field(x: FieldElem) -> Self {
        match x.as_rational() {
            Some(q) => ExactReal::rational(q),
            None => ExactReal::make(Node::Field(x)),
        }
    }

    pub fn pi() -> Self {
        ExactReal::make(Node::Pi)
    }

    pub fn e() -> Self {
        ExactReal::make(Node::E)
    }

    /// The root of `poly` in `(lo, hi)`. Rational roots come back as
    /// rationals; roots of degree 2 or 3 become number-field generators.
    pub fn algebraic(poly: &QPoly, lo: BigRational, hi: BigRational, name: Option<&str>) -> Result<Self> {
        let p = poly.squarefree();
        let mut rest = p.clone();
        for r in p.rational_roots() {
            if lo < r && r < hi {
                // Bracket validity still matters: exactly one root allowed.
                if p.count_roots(&lo, &hi) != 1 || p.eval(&hi).is_zero() {
                    return Err(Error::invalid("bracket must isolate one root"));
                }
                return Ok(ExactReal::rational(r));
            }
            rest = rest.div_rem(&QPoly::new(vec![-r.clone(), BigRational::one()])).0;
        }
        // Validate against the full polynomial so the bracket is honest.
        AlgebraicRoot::new(&p, lo.clone(), hi.clone())?;
        let root = AlgebraicRoot::new(&rest, lo, hi)?;
        match rest.degree() {
            Some(2) => {
                // x² + px + q has roots (−p ± √(p² − 4q))/2; use the
                // canonical √m field so equal numbers compare exactly.
                let m = rest.monic();
                let (p1, q0) = (m.coeff(1), m.coeff(0));
                let disc = ExactReal::rational(&p1 * &p1 - q0 * rat(4)).sqrt()?;
                let centre = -p1 / rat(2);
                let half = ExactReal::rational(BigRational::new(1.into(), 2.into()));
                let upper = root.bracket().0 > centre;
                let signed = if upper { disc } else { disc.neg() };
                Ok(ExactReal::rational(centre).add(&signed.mul(&half)))
            }
            Some(3) => {
                let label = name.map(str::to_string).unwrap_or_else(|| root.to_string());
                let k = NumberField::new(&rest, root, label)?;
                Ok(ExactReal::field(FieldElem::generator(&k)))
            }
            _ => Ok(ExactReal::make(Node::Root(Arc::new(root)))),
        }
    }

    /// Generator of an existing field.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        ExactReal::field(FieldElem::generator(field))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0.node {
            Node::Rational(q) => Some(q),
            _ => None,
        }
    }

    pub fn as_field(&self) -> Option<&FieldElem> {
        match &self.0.node {
            Node::Field(f) => Some(f),
            _ => None,
        }
    }

    /// True for rationals and number-field elements.
    pub fn is_exact(&self) -> bool {
        matches!(self.0.node, Node::Rational(_) | Node::Field(_))
    }

    pub fn is_exact_zero(&self) -> bool {
        self.as_rational().is_some_and(|q| q.is_zero())
    }

    /// Memoised on composite nodes; an atom's form refers to the atom itself.
    fn linear_form(&self) -> LinearForm {
        let composite = match &self.0.node {
            Node::Add(..) | Node::Neg(_) => true,
            Node::Mul(a, b) => a.as_rational().is_some() || b.as_rational().is_some(),
            _ => false,
        };
        if composite {
            self.0.form.get_or_init(|| self.build_linear_form()).clone()
        } else {
            self.build_linear_form()
        }
    }

    fn build_linear_form(&self) -> LinearForm {
        let mut lf = LinearForm {
            rational: BigRational::zero(),
            fields: BTreeMap::new(),
            atoms: BTreeMap::new(),
        };
        match &self.0.node {
            Node::Rational(q) => lf.rational = q.clone(),
            Node::Field(f) => {
                lf.fields.insert(f.field().key().to_string(), f.clone());
            }
            Node::Add(a, b) => return a.linear_form().merge(b.linear_form()),
            Node::Neg(a) => return a.linear_form().scale(&rat(-1)),
            Node::Mul(a, b) if a.as_rational().is_some() => return b.linear_form().scale(a.as_rational().unwrap()),
            Node::Mul(a, b) if b.as_rational().is_some() => return a.linear_form().scale(b.as_rational().unwrap()),
            _ => {
                lf.atoms.insert(self.to_string(), (rat(1), self.clone()));
            }
        }
        lf
    }

    pub fn add(&self, o: &ExactReal) -> ExactReal {
        match (&self.0.node, &o.0.node) {
            (Node::Rational(a), Node::Rational(b)) => return ExactReal::rational(a + b),
            (Node::Field(a), Node::Rational(b)) => return ExactReal::field(a.add_rational(b)),
            (Node::Rational(a), Node::Field(b)) => return ExactReal::field(b.add_rational(a)),
            (Node::Field(a), Node::Field(b)) if a.field().same(b.field()) => return ExactReal::field(a.add(b)),
            _ => {}
        }
        if self.is_exact_zero() {
            return o.clone();
        }
        if o.is_exact_zero() {
            return self.clone();
        }
        if let Some(x) = self.linear_form().merge(o.linear_form()).collapse() {
            return x;
        }
        ExactReal::make(Node::Add(self.clone(), o.clone()))
    }

    /// `(c, x)` with `self = c·x`, peeling rational factors and negations.
    fn split_scalar(&self) -> (BigRational, ExactReal) {
        match &self.0.node {
            Node::Neg(a) => {
                let (c, x) = a.split_scalar();
                (-c, x)
            }
            Node::Mul(a, b) if a.as_rational().is_some() => {
                let (c, x) = b.split_scalar();
                (c * a.as_rational().unwrap(), x)
            }
            Node::Mul(a, b) if b.as_rational().is_some() => {
                let (c, x) = a.split_scalar();
                (c * b.as_rational().unwrap(), x)
            }
            _ => (rat(1), self.clone()),
        }
    }

    pub fn neg(&self) -> ExactReal {
        match &self.0.node {
            Node::Rational(a) => ExactReal::rational(-a),
            Node::Field(a) => ExactReal::field(a.neg()),
            Node::Neg(a) => a.clone(),
            _ => ExactReal::make(Node::Neg(self.clone())),
        }
    }

    pub fn sub(&self, o: &ExactReal) -> ExactReal {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &ExactReal) -> ExactReal {
        match (&self.0.node, &o.0.node) {
            (Node::Rational(a), Node::Rational(b)) => return ExactReal::rational(a * b),
            (Node::Field(a), Node::Rational(b)) => return ExactReal::field(a.scale(b)),
            (Node::Rational(a), Node::Field(b)) => return ExactReal::field(b.scale(a)),
            (Node::Field(a), Node::Field(b)) if a.field().same(b.field()) => return ExactReal::field(a.mul(b)),
            (Node::Field(a), Node::Field(b)) => {
                return if a.field().key() <= b.field().key() {
                    field_product(a, b)
                } else {
                    field_product(b, a)
                };
            }
            _ => {}
        }
        if self.is_exact_zero() || o.is_exact_zero() {
            return ExactReal::zero();
        }
        if self.as_rational().is_some_and(|q| q.is_one()) {
            return o.clone();
        }
        if o.as_rational().is_some_and(|q| q.is_one()) {
            return self.clone();
        }
        // Pull rational factors to the front so that `(2x)(3y)` and
        // `-(xy)` share the atom `xy`.
        let (c1, a) = self.split_scalar();
        let (c2, b) = o.split_scalar();
        let mut c = c1 * c2;
        let core = match (a.as_rational(), b.as_rational()) {
            (Some(x), Some(y)) => return ExactReal::rational(c * x * y),
            (Some(x), None) => {
                c *= x;
                b
            }
            (None, Some(y)) => {
                c *= y;
                a
            }
            (None, None) => ExactReal::make(Node::Mul(a, b)),
        };
        if c.is_zero() {
            return ExactReal::zero();
        }
        if let Some(f) = core.as_field() {
            return ExactReal::field(f.scale(&c));
        }
        if c.is_one() {
            return core;
        }
        ExactReal::make(Node::Mul(ExactReal::rational(c), core))
    }

    pub fn recip(&self) -> Result<ExactReal> {
        match &self.0.node {
            Node::Rational(q) if q.is_zero() => Err(Error::invalid("division by zero")),
            Node::Rational(q) => Ok(ExactReal::rational(q.recip())),
            Node::Field(f) => Ok(ExactReal::field(f.inv().expect("nonzero field element"))),
            Node::Recip(a) => Ok(a.clone()),
            _ => Ok(ExactReal::make(Node::Recip(self.clone()))),
        }
    }

    pub fn div(&self, o: &ExactReal) -> Result<ExactReal> {
        Ok(self.mul(&o.recip()?))
    }

    pub fn pow(&self, e: i64) -> Result<ExactReal> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut b = base;
        let mut acc = ExactReal::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Square root. Rationals give rationals or quadratic-field generators.
    pub fn sqrt(&self) -> Result<ExactReal> {
        if let Some(q) = self.as_rational() {
            if q.is_negative() {
                return Err(Error::invalid("square root of a negative number"));
            }
            if is_square(q.numer()) && is_square(q.denom()) {
                return Ok(ExactReal::rational(BigRational::new(
                    q.numer().sqrt(),
                    q.denom().sqrt(),
                )));
            }
            // √(p/q) = (a/q)·√m with p·q = a²·m.
            let (a, m) = split_square(&(q.numer() * q.denom()));
            if m.is_one() {
                return Ok(ExactReal::rational(BigRational::new(a, q.denom().clone())));
            }
            let k = NumberField::quadratic(&BigRational::from_integer(m))?;
            let scale = ExactReal::rational(BigRational::new(a, q.denom().clone()));
            return Ok(scale.mul(&ExactReal::generator(&k)));
        }
        if let Some(f) = self.as_field() {
            if f.sign() == Ordering::Less {
                return Err(Error::invalid("square root of a negative number"));
            }
        }
        Ok(ExactReal::make(Node::Sqrt(self.clone())))
    }

    /// Enclosure computed with working precision `w`; `None` when a
    /// division or square root cannot be resolved at this precision.
    fn eval_at(&self, w: u32) -> Option<Interval> {
        if let Some((p, iv)) = self.0.cache.lock().expect("cache").as_ref() {
            if *p >= w {
                return Some(iv.clone());
            }
        }
        let prev = self.0.cache.lock().expect("cache").as_ref().map(|(_, iv)| iv.clone());
        let iv = match &self.0.node {
            Node::Rational(q) => Interval::from_rational(q, w),
            Node::Field(f) => f.enclosure(w),
            Node::Pi => pi_interval(w),
            Node::E => e_interval(w),
            Node::Root(r) => r.enclosure(w),
            Node::Add(a, b) => a.eval_at(w)?.add(&b.eval_at(w)?, w),
            Node::Mul(a, b) => a.eval_at(w)?.mul(&b.eval_at(w)?, w),
            Node::Neg(a) => a.eval_at(w)?.neg(),
            Node::Recip(a) => a.eval_at(w)?.recip(w)?,
            Node::Sqrt(a) => {
                let x = a.eval_at(w)?;
                if x.lo.sign() == num_bigint::Sign::Minus {
                    if x.hi.sign() == num_bigint::Sign::Minus {
                        return None;
                    }
                    // Value is known non-negative; clamp the enclosure.
                    Interval::new(super::interval::Dyadic::zero(), x.hi.clone()).sqrt(w)?
                } else {
                    x.sqrt(w)?
                }
            }
        };
        // Keep successive enclosures nested.
        let iv = match prev {
            Some(p) => iv.intersect(&p),
            None => iv,
        };
        *self.0.cache.lock().expect("cache") = Some((w, iv.clone()));
        Some(iv)
    }

    /// Enclosure with `width ≤ 2^{-bits}·max(1, |x|)`, using working
    /// precision at most `max_work` bits.
    pub fn enclosure_within(&self, bits: u32, max_work: u32) -> Result<Interval> {
        let mut w = bits + 32;
        loop {
            if let Some(iv) = self.eval_at(w.min(max_work)) {
                if iv.accurate_to(bits) {
                    return Ok(iv);
                }
            }
            if w >= max_work {
                return Err(Error::PrecisionExhausted {
                    subexpr: self.to_string(),
                    bits: max_work,
                });
            }
            w = w.saturating_mul(2);
        }
    }

    pub fn enclosure(&self, bits: u32) -> Result<Interval> {
        self.enclosure_within(bits, (bits.saturating_mul(8)).max(1024))
    }

    /// Exact sign. Symbolic values that are exactly zero without being
    /// recognised as such exhaust the budget.
    pub fn sign(&self, policy: &PrecisionPolicy) -> Result<Ordering> {
        match &self.0.node {
            Node::Rational(q) => return Ok(q.cmp(&BigRational::zero())),
            Node::Field(f) => return Ok(f.sign()),
            _ => {}
        }
        for bits in policy.ladder() {
            if let Ok(iv) = self.enclosure_within(bits, policy.max_bits) {
                if let Some(s) = iv.sign() {
                    return Ok(s);
                }
            }
        }
        Err(Error::PrecisionExhausted {
            subexpr: self.to_string(),
            bits: policy.max_bits,
        })
    }

    pub fn cmp_with(&self, o: &ExactReal, policy: &PrecisionPolicy) -> Result<Ordering> {
        self.sub(o).sign(policy)
    }

    /// `⌊x⌋`, exact for rationals and resolved by the precision ladder
    /// otherwise.
    pub fn floor(&self, policy: &PrecisionPolicy) -> Result<BigInt> {
        if let Some(q) = self.as_rational() {
            return Ok(q.floor().to_integer());
        }
        for bits in policy.ladder() {
            if let Ok(iv) = self.enclosure_within(bits, policy.max_bits) {
                if let Some(f) = iv.floor() {
                    // Field elements are irrational here, so an enclosure
                    // with a single floor settles it.
                    return Ok(f);
                }
            }
        }
        Err(Error::PrecisionExhausted {
            subexpr: self.to_string(),
            bits: policy.max_bits,
        })
    }

    /// `{x} = x - ⌊x⌋`.
    pub fn frac(&self, policy: &PrecisionPolicy) -> Result<ExactReal> {
        let f = self.floor(policy)?;
        Ok(self.sub(&ExactReal::int(f)))
    }

    /// Nearest integer, ties rounding up: `⌊x + 1/2⌋`.
    pub fn round(&self, policy: &PrecisionPolicy) -> Result<BigInt> {
        self.add(&ExactReal::rational(BigRational::new(1.into(), 2.into())))
            .floor(policy)
    }

    /// Distance to the nearest integer, `‖x‖`.
    pub fn dist_to_int(&self, policy: &PrecisionPolicy) -> Result<ExactReal> {
        let r = self.round(policy)?;
        let d = self.sub(&ExactReal::int(r));
        Ok(match d.sign(policy)? {
            Ordering::Less => d.neg(),
            _ => d,
        })
    }

    pub fn to_f64(&self) -> f64 {
        match &self.0.node {
            Node::Rational(q) => q.to_f64().unwrap_or(f64::NAN),
            _ => self
                .enclosure_within(60, 4096)
                .map(|iv| iv.midpoint_f64())
                .unwrap_or(f64::NAN),
        }
    }

    /// Decimal string with `digits` fractional digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        match &self.0.node {
            Node::Rational(q) => rational_to_decimal(q, digits),
            _ => {
                let bits = (digits as f64 * 3.33) as u32 + 16;
                match self.enclosure_within(bits, bits * 8 + 1024) {
                    Ok(iv) => iv.to_decimal(digits),
                    Err(_) => "?".to_string(),
                }
            }
        }
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.node {
            Node::Rational(q) => write!(f, "{q}"),
            Node::Field(x) => write!(f, "{x}"),
            Node::Pi => write!(f, "pi"),
            Node::E => write!(f, "e"),
            Node::Root(r) => write!(f, "{r}"),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Mul(a, b) => write!(f, "({a} * {b})"),
            Node::Neg(a) => write!(f, "(-{a})"),
            Node::Recip(a) => write!(f, "(1 / {a})"),
            Node::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::int(n)
    }
}

impl From<BigRational> for ExactReal {
    fn from(q: BigRational) -> Self {
        ExactReal::rational(q)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn policy() -> PrecisionPolicy {
        PrecisionPolicy::default()
    }

    #[test]
    fn field_cancellation_is_exact() {
        let s2 = ExactReal::int(2).sqrt().unwrap();
        let x = s2.mul(&s2).sub(&ExactReal::int(2));
        assert!(x.is_exact_zero());
        let pi = ExactReal::pi();
        let y = pi.add(&s2).sub(&pi).sub(&s2);
        assert!(y.is_exact_zero());
        assert_eq!(y.sign(&policy()).unwrap(), Ordering::Equal);
    }

    #[test]
    fn floors() {
        let p = policy();
        let s2 = ExactReal::int(2).sqrt().unwrap();
        assert_eq!(s2.mul(&ExactReal::int(1000)).floor(&p).unwrap(), BigInt::from(1414));
        let pi = ExactReal::pi();
        assert_eq!(pi.mul(&ExactReal::int(10_000)).floor(&p).unwrap(), BigInt::from(31415));
        assert_eq!(ExactReal::ratio(-7, 2).unwrap().floor(&p).unwrap(), BigInt::from(-4));
        let e = ExactReal::e();
        assert_eq!(e.mul(&ExactReal::int(1000)).floor(&p).unwrap(), BigInt::from(2718));
    }

    #[test]
    fn mixed_field_products_cancel() {
        let s2 = ExactReal::int(2).sqrt().unwrap();
        let s3 = ExactReal::int(3).sqrt().unwrap();
        let a = s2.mul(&ExactReal::int(3)).mul(&s3.mul(&ExactReal::int(5)));
        let b = s3.mul(&ExactReal::int(-15)).mul(&s2);
        assert!(a.add(&b).is_exact_zero());
        let one_s2 = s2.add(&ExactReal::one());
        let x = one_s2.mul(&s3).sub(&s3).sub(&s2.mul(&s3));
        assert!(x.is_exact_zero());
        assert!((a.to_f64() - 15.0 * 6f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn undetectable_zero_exhausts_precision() {
        let s2 = ExactReal::int(2).sqrt().unwrap();
        let s3 = ExactReal::int(3).sqrt().unwrap();
        let s6 = ExactReal::int(6).sqrt().unwrap();
        let z = s2.mul(&s3).sub(&s6);
        let small = PrecisionPolicy::with_max_bits(256);
        match z.sign(&small) {
            Err(Error::PrecisionExhausted { bits, .. }) => assert_eq!(bits, 256),
            other => panic!("expected exhaustion, got {other:?}"),
        }
        assert!(z.floor(&small).is_err());
    }

    #[test]
    fn algebraic_constructor() {
        let phi = ExactReal::algebraic(&QPoly::from_ints(&[-1, -1, 1]), rat(1), rat(2), Some("phi")).unwrap();
        assert!(phi.is_exact());
        let sq = phi.mul(&phi).sub(&phi).sub(&ExactReal::one());
        assert!(sq.is_exact_zero());
        let r = ExactReal::algebraic(&QPoly::from_ints(&[-2, 1, -2, 1]), rat(1), rat(3), None).unwrap();
        assert_eq!(r.as_rational(), Some(&rat(2)));
        let quartic = ExactReal::algebraic(&QPoly::from_ints(&[-2, 0, 0, 0, 1]), rat(1), rat(2), None).unwrap();
        assert!(!quartic.is_exact());
        assert!((quartic.to_f64() - 2f64.powf(0.25)).abs() < 1e-14);
    }

    #[test]
    fn dist_to_int() {
        let p = policy();
        let s2 = ExactReal::int(2).sqrt().unwrap();
        let d = s2.dist_to_int(&p).unwrap();
        assert!((d.to_f64() - (std::f64::consts::SQRT_2 - 1.0)).abs() < 1e-15);
        let x = ExactReal::ratio(7, 4).unwrap();
        assert_eq!(
            x.dist_to_int(&p).unwrap().as_rational(),
            Some(&BigRational::new(1.into(), 4.into()))
        );
    }
}
