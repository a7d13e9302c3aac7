//! Dyadic numbers and outward-rounded intervals.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// `m · 2^e`, kept with `m` odd (or zero with `e = 0`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn new(m: BigInt, e: i64) -> Self {
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            Dyadic {
                m: m >> tz,
                e: e + tz as i64,
            }
        } else {
            Dyadic { m, e }
        }
    }

    pub fn zero() -> Self {
        Dyadic {
            m: BigInt::zero(),
            e: 0,
        }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    pub fn sign(&self) -> Sign {
        self.m.sign()
    }

    /// Position of the leading bit: `|x| ∈ [2^{mag-1}, 2^mag)`.
    pub fn magnitude(&self) -> i64 {
        if self.m.is_zero() {
            i64::MIN / 4
        } else {
            self.m.bits() as i64 + self.e
        }
    }

    fn align(a: &Dyadic, b: &Dyadic) -> (BigInt, BigInt, i64) {
        let e = a.e.min(b.e);
        ((&a.m) << (a.e - e) as usize, (&b.m) << (b.e - e) as usize, e)
    }

    pub fn add(&self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, e) = Self::align(self, o);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, o: &Dyadic) -> Dyadic {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { m: -&self.m, e: self.e }
    }

    pub fn mul(&self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.m * &o.m, self.e + o.e)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return self.clone();
        }
        Dyadic {
            m: self.m.clone(),
            e: self.e + k,
        }
    }

    /// Rounds toward `-∞` keeping `prec` significant bits.
    pub fn round_down(&self, prec: u32) -> Dyadic {
        let bits = self.m.bits();
        if bits <= prec as u64 {
            return self.clone();
        }
        let s = bits - prec as u64;
        Dyadic::new(&self.m >> s as usize, self.e + s as i64)
    }

    /// Rounds toward `+∞` keeping `prec` significant bits.
    pub fn round_up(&self, prec: u32) -> Dyadic {
        self.neg().round_down(prec).neg()
    }

    pub fn floor(&self) -> BigInt {
        if self.e >= 0 {
            &self.m << self.e as usize
        } else {
            &self.m >> (-self.e) as usize
        }
    }

    pub fn ceil(&self) -> BigInt {
        -(self.neg().floor())
    }

    pub fn to_rational(&self) -> BigRational {
        if self.e >= 0 {
            BigRational::from_integer(&self.m << self.e as usize)
        } else {
            BigRational::new(self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }

    /// `⌊q · 2^s⌋ · 2^{-s}` with `s` chosen for about `prec` significant bits.
    pub fn from_rational_down(q: &BigRational, prec: u32) -> Dyadic {
        if q.numer().is_zero() {
            return Dyadic::zero();
        }
        let (n, d) = (q.numer(), q.denom());
        if (d & (d - BigInt::one())).is_zero() {
            // Denominator is a power of two: exact.
            let tz = d.trailing_zeros().unwrap_or(0) as i64;
            return Dyadic::new(n.clone(), -tz).round_down(prec);
        }
        let s = prec as i64 + d.bits() as i64 - n.bits() as i64 + 2;
        let scaled = if s >= 0 {
            (n << s as usize).div_floor(d)
        } else {
            n.div_floor(&(d << (-s) as usize))
        };
        Dyadic::new(scaled, -s)
    }

    pub fn from_rational_up(q: &BigRational, prec: u32) -> Dyadic {
        Dyadic::from_rational_down(&-q, prec).neg()
    }

    pub fn from_f64(x: f64) -> Option<Dyadic> {
        if !x.is_finite() {
            return None;
        }
        let q = BigRational::from_float(x)?;
        Some(Dyadic::from_rational_down(&q, 64))
    }

    pub fn to_f64(&self) -> f64 {
        if self.m.is_zero() {
            return 0.0;
        }
        let bits = self.m.bits() as i64;
        let shift = (bits - 64).max(0);
        let top = (&self.m >> shift as usize).to_f64().unwrap_or(0.0);
        top * 2f64.powi((self.e + shift).clamp(-2000, 2000) as i32)
    }

    /// `⌊self / o⌋` rounded to `prec` bits in the given direction.
    fn div_round(&self, o: &Dyadic, prec: u32, up: bool) -> Dyadic {
        assert!(!o.is_zero(), "division by zero dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let s = (prec as i64 + o.m.bits() as i64 - self.m.bits() as i64 + 2).max(0);
        let num = &self.m << s as usize;
        let q = if up {
            -((-num).div_floor(&o.m))
        } else {
            num.div_floor(&o.m)
        };
        Dyadic::new(q, self.e - o.e - s)
    }

    pub fn div_down(&self, o: &Dyadic, prec: u32) -> Dyadic {
        self.div_round(o, prec, false)
    }

    pub fn div_up(&self, o: &Dyadic, prec: u32) -> Dyadic {
        self.div_round(o, prec, true)
    }

    /// Square root of a non-negative dyadic, rounded down or up.
    fn sqrt_round(&self, prec: u32, up: bool) -> Dyadic {
        assert!(!self.m.is_negative(), "sqrt of negative dyadic");
        if self.is_zero() {
            return Dyadic::zero();
        }
        // sqrt(m 2^e) 2^t = sqrt(m 2^{e+2t}); pick t with e+2t ≥ 0 and enough bits.
        let want = 2 * prec as i64 + 4 - self.m.bits() as i64 - self.e;
        let t = div_ceil2(want).max(div_ceil2(-self.e));
        let shift = self.e + 2 * t;
        let n = &self.m << shift as usize;
        let r = n.sqrt();
        let r = if up && &r * &r != n { r + 1 } else { r };
        Dyadic::new(r, -t)
    }

    pub fn sqrt_down(&self, prec: u32) -> Dyadic {
        self.sqrt_round(prec, false)
    }

    pub fn sqrt_up(&self, prec: u32) -> Dyadic {
        self.sqrt_round(prec, true)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.sign(), other.sign()) {
            (a, b) if a != b => return (a as i8).cmp(&(b as i8)),
            (Sign::NoSign, _) => return Ordering::Equal,
            _ => {}
        }
        let (a, b, _) = Self::align(self, other);
        a.cmp(&b)
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*2^{}", self.m, self.e)
    }
}

fn div_ceil2(x: i64) -> i64 {
    x.div_euclid(2) + x.rem_euclid(2)
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "inverted interval");
        Interval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Interval::point(Dyadic::from_int(n))
    }

    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        Interval {
            lo: Dyadic::from_rational_down(q, prec),
            hi: Dyadic::from_rational_up(q, prec),
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.m.is_positive() && !self.hi.m.is_negative()
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// `Some(sign)` when the interval excludes zero or is the point 0.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.m.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.m.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// `⌊x⌋` if it is the same for every point of the interval.
    pub fn floor(&self) -> Option<BigInt> {
        let a = self.lo.floor();
        (a == self.hi.floor()).then_some(a)
    }

    /// Largest endpoint magnitude, as a power of two exponent.
    pub fn magnitude(&self) -> i64 {
        self.lo.magnitude().max(self.hi.magnitude())
    }

    /// `width ≤ 2^{-bits} · max(1, |x|)`.
    pub fn accurate_to(&self, bits: u32) -> bool {
        let w = self.width();
        if w.is_zero() {
            return true;
        }
        w.magnitude() <= self.magnitude().max(1) - bits as i64
    }

    pub fn add(&self, o: &Interval, prec: u32) -> Interval {
        Interval {
            lo: self.lo.add(&o.lo).round_down(prec),
            hi: self.hi.add(&o.hi).round_up(prec),
        }
    }

    pub fn sub(&self, o: &Interval, prec: u32) -> Interval {
        self.add(&o.neg(), prec)
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: self.hi.neg(),
            hi: self.lo.neg(),
        }
    }

    pub fn mul(&self, o: &Interval, prec: u32) -> Interval {
        let c = [
            self.lo.mul(&o.lo),
            self.lo.mul(&o.hi),
            self.hi.mul(&o.lo),
            self.hi.mul(&o.hi),
        ];
        let lo = c.iter().min().unwrap().round_down(prec);
        let hi = c.iter().max().unwrap().round_up(prec);
        Interval { lo, hi }
    }

    pub fn square(&self, prec: u32) -> Interval {
        if self.contains_zero() {
            let m = if self.lo.neg() > self.hi {
                self.lo.neg()
            } else {
                self.hi.clone()
            };
            Interval {
                lo: Dyadic::zero(),
                hi: m.mul(&m).round_up(prec),
            }
        } else {
            let a = self.lo.mul(&self.lo);
            let b = self.hi.mul(&self.hi);
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            Interval {
                lo: lo.round_down(prec),
                hi: hi.round_up(prec),
            }
        }
    }

    /// `None` if the interval contains zero.
    pub fn recip(&self, prec: u32) -> Option<Interval> {
        if self.contains_zero() {
            return None;
        }
        let one = Dyadic::from_int(1);
        Some(Interval {
            lo: one.div_down(&self.hi, prec),
            hi: one.div_up(&self.lo, prec),
        })
    }

    /// `None` if the interval has negative points.
    pub fn sqrt(&self, prec: u32) -> Option<Interval> {
        if self.lo.m.is_negative() {
            return None;
        }
        Some(Interval {
            lo: self.lo.sqrt_down(prec),
            hi: self.hi.sqrt_up(prec),
        })
    }

    pub fn midpoint_f64(&self) -> f64 {
        (self.lo.to_f64() + self.hi.to_f64()) / 2.0
    }

    /// Hull of two intervals.
    pub fn hull(&self, o: &Interval) -> Interval {
        Interval {
            lo: self.lo.clone().min(o.lo.clone()),
            hi: self.hi.clone().max(o.hi.clone()),
        }
    }

    /// Intersection of two enclosures of the same number.
    pub fn intersect(&self, o: &Interval) -> Interval {
        let lo = self.lo.clone().max(o.lo.clone());
        let hi = self.hi.clone().min(o.hi.clone());
        if lo <= hi {
            Interval { lo, hi }
        } else {
            self.clone()
        }
    }

    /// `[lo, hi]` with each endpoint rounded outward to `prec` bits.
    pub fn rounded(&self, prec: u32) -> Interval {
        Interval {
            lo: self.lo.round_down(prec),
            hi: self.hi.round_up(prec),
        }
    }

    /// Decimal rendering of the midpoint with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        let mid = self.lo.add(&self.hi).mul_pow2(-1).to_rational();
        rational_to_decimal(&mid, digits)
    }
}

/// Fixed-notation decimal with `digits` digits after the point.
pub fn rational_to_decimal(q: &BigRational, digits: usize) -> String {
    let neg = q.is_negative();
    let a = q.abs();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled: BigInt = (a.numer() * &scale * 2 + a.denom()) / (a.denom() * 2);
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int}")
    } else {
        format!("{sign}{int}.{:0>width$}", frac.to_string(), width = digits)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn rounding_is_outward() {
        let third = q(1, 3);
        let iv = Interval::from_rational(&third, 40);
        assert!(iv.lo.to_rational() < third && third < iv.hi.to_rational());
        assert!(iv.accurate_to(38));
        let neg = Interval::from_rational(&q(-7, 3), 40);
        assert!(neg.lo.to_rational() < q(-7, 3) && q(-7, 3) < neg.hi.to_rational());
    }

    #[test]
    fn floor_and_ceil() {
        let x = Dyadic::new(BigInt::from(-5), -1); // -2.5
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        assert_eq!(Dyadic::from_int(7).floor(), BigInt::from(7));
    }

    #[test]
    fn sqrt_two_bracket() {
        let two = Interval::from_int(2);
        let s = two.sqrt(100).unwrap();
        let sq = s.mul(&s, 200);
        assert!(sq.contains(&Dyadic::from_int(2)));
        assert!(s.accurate_to(95));
        assert!((s.midpoint_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
        let quarter = Interval::point(Dyadic::new(BigInt::from(1), -2));
        let h = quarter.sqrt(50).unwrap();
        assert!(h.contains(&Dyadic::new(BigInt::from(1), -1)));
    }

    #[test]
    fn division_brackets() {
        let a = Dyadic::from_int(1);
        let b = Dyadic::from_int(3);
        let lo = a.div_down(&b, 60).to_rational();
        let hi = a.div_up(&b, 60).to_rational();
        assert!(lo < q(1, 3) && q(1, 3) < hi);
    }

    #[test]
    fn decimals() {
        assert_eq!(rational_to_decimal(&q(22, 7), 3), "3.143");
        assert_eq!(rational_to_decimal(&q(-1, 8), 2), "-0.13");
    }
}
