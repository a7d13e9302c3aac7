//! Univariate polynomials over ℚ with Sturm-sequence root isolation.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::interval::{Dyadic, Interval};

/// Coefficients from the constant term upward, with no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QPoly {
    c: Vec<BigRational>,
}

/// A real root given exactly or by an isolating open interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RealRoot {
    Rational(BigRational),
    Isolated { lo: BigRational, hi: BigRational },
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl QPoly {
    pub fn new(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        QPoly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        QPoly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn from_bigints(c: &[BigInt]) -> Self {
        QPoly::new(c.iter().map(|x| BigRational::from_integer(x.clone())).collect())
    }

    pub fn constant(q: BigRational) -> Self {
        QPoly::new(vec![q])
    }

    pub fn x() -> Self {
        QPoly::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.c.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.c.iter().rev().fold(BigRational::zero(), |acc, a| acc * x + a)
    }

    pub fn sign_at(&self, x: &BigRational) -> Ordering {
        self.eval(x).cmp(&BigRational::zero())
    }

    /// Horner evaluation over an interval argument.
    pub fn eval_interval(&self, x: &Interval, prec: u32) -> Interval {
        let mut acc = Interval::from_int(0);
        for a in self.c.iter().rev() {
            acc = acc.mul(x, prec).add(&Interval::from_rational(a, prec), prec);
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        QPoly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, a)| a * rat(i as i64))
                .collect(),
        )
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let n = self.c.len().max(o.c.len());
        QPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &QPoly) -> QPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> QPoly {
        QPoly::new(self.c.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: &BigRational) -> QPoly {
        QPoly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        if self.is_zero() || o.is_zero() {
            return QPoly::new(vec![]);
        }
        let mut c = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        QPoly::new(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, d: &QPoly) -> (QPoly, QPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut r = self.c.clone();
        let mut q = vec![BigRational::zero(); self.c.len().saturating_sub(dd)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = r.last().unwrap() / &lead;
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] -= &f * b;
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(|x| x.is_zero()) {
                r.pop();
            }
        }
        (QPoly::new(q), QPoly::new(r))
    }

    pub fn rem(&self, d: &QPoly) -> QPoly {
        self.div_rem(d).1
    }

    pub fn monic(&self) -> QPoly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn gcd(&self, o: &QPoly) -> QPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended Euclid: `(g, s, t)` with `s·self + t·o = g` monic.
    pub fn xgcd(&self, o: &QPoly) -> (QPoly, QPoly, QPoly) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (QPoly::constant(rat(1)), QPoly::new(vec![]));
        let (mut t0, mut t1) = (QPoly::new(vec![]), QPoly::constant(rat(1)));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let k = r0.lead().recip();
        (r0.scale(&k), s0.scale(&k), t0.scale(&k))
    }

    /// Removes repeated factors.
    pub fn squarefree(&self) -> QPoly {
        if self.degree().unwrap_or(0) < 1 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Primitive integer multiple with positive leading coefficient.
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self.c.iter().fold(BigInt::one(), |acc, a| acc.lcm(a.denom()));
        let ints: Vec<BigInt> = self.c.iter().map(|a| (a * &l).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, a| acc.gcd(a));
        let sign = if self.lead().is_negative() { -1 } else { 1 };
        if g.is_zero() {
            return ints;
        }
        ints.into_iter().map(|a| a / &g * sign).collect()
    }

    pub fn sturm_sequence(&self) -> Vec<QPoly> {
        let mut seq = vec![self.clone(), self.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1]).neg();
            seq.push(r);
        }
        seq.pop();
        seq
    }

    fn sign_changes(seq: &[QPoly], x: &BigRational) -> usize {
        let signs: Vec<Ordering> = seq
            .iter()
            .map(|p| p.sign_at(x))
            .filter(|s| *s != Ordering::Equal)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    fn sign_changes_at_infinity(seq: &[QPoly], positive: bool) -> usize {
        let signs: Vec<Ordering> = seq
            .iter()
            .map(|p| {
                let s = p.lead().cmp(&BigRational::zero());
                let odd = p.degree().unwrap_or(0) % 2 == 1;
                if !positive && odd {
                    s.reverse()
                } else {
                    s
                }
            })
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count_roots(&self, a: &BigRational, b: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes(&seq, b))
    }

    /// Number of distinct real roots.
    pub fn count_real_roots(&self) -> usize {
        let seq = self.sturm_sequence();
        Self::sign_changes_at_infinity(&seq, false).saturating_sub(Self::sign_changes_at_infinity(&seq, true))
    }

    /// Number of distinct real roots greater than `a`.
    pub fn count_roots_above(&self, a: &BigRational) -> usize {
        let seq = self.sturm_sequence();
        Self::sign_changes(&seq, a).saturating_sub(Self::sign_changes_at_infinity(&seq, true))
    }

    /// Cauchy bound: every root has absolute value below it.
    pub fn root_bound(&self) -> BigRational {
        let lead = self.lead().abs();
        let m = self.c[..self.c.len().saturating_sub(1)]
            .iter()
            .map(|a| a.abs() / &lead)
            .max()
            .unwrap_or_else(BigRational::zero);
        m + rat(1)
    }

    /// All distinct real roots in increasing order.
    pub fn real_roots(&self) -> Vec<RealRoot> {
        let p = self.squarefree();
        if p.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let seq = p.sturm_sequence();
        let b = p.root_bound();
        let mut out = Vec::new();
        let mut stack = vec![(-b.clone(), b)];
        while let Some((lo, hi)) = stack.pop() {
            let n = Self::sign_changes(&seq, &lo).saturating_sub(Self::sign_changes(&seq, &hi));
            if n == 0 {
                continue;
            }
            if n == 1 {
                if p.sign_at(&hi) == Ordering::Equal {
                    out.push(RealRoot::Rational(hi));
                    continue;
                }
                if p.sign_at(&lo) != Ordering::Equal {
                    out.push(RealRoot::Isolated { lo, hi });
                    continue;
                }
            }
            let mid = (&lo + &hi) / rat(2);
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
        out.sort_by(|a, b| a.lower().cmp(b.lower()));
        out
    }

    /// Rational roots, found by refining isolating intervals and testing
    /// fractions whose denominator divides the leading coefficient.
    pub fn rational_roots(&self) -> Vec<BigRational> {
        let ints = QPoly::from_bigints(&self.squarefree().primitive_integer());
        let lead = ints.lead().abs().to_integer();
        let divisors = small_divisors(&lead);
        let mut out = Vec::new();
        for r in ints.real_roots() {
            match r {
                RealRoot::Rational(q) => out.push(q),
                RealRoot::Isolated { mut lo, mut hi } => {
                    let target = BigRational::new(BigInt::one(), &lead * &lead * 4 + 1);
                    while &hi - &lo > target {
                        let mid = (&lo + &hi) / rat(2);
                        match ints.sign_at(&mid) {
                            Ordering::Equal => {
                                lo = mid.clone();
                                hi = mid;
                                break;
                            }
                            s if s == ints.sign_at(&lo) => lo = mid,
                            _ => hi = mid,
                        }
                    }
                    if lo == hi {
                        out.push(lo);
                        continue;
                    }
                    'search: for d in &divisors {
                        let dq = BigRational::from_integer(d.clone());
                        let a = (&lo * &dq).ceil().to_integer();
                        let b = (&hi * &dq).floor().to_integer();
                        let mut n = a;
                        while n <= b {
                            let cand = BigRational::new(n.clone(), d.clone());
                            if ints.eval(&cand).is_zero() {
                                out.push(cand);
                                break 'search;
                            }
                            n += 1;
                        }
                    }
                }
            }
        }
        out
    }

    pub fn has_rational_root(&self) -> bool {
        !self.rational_roots().is_empty()
    }

    /// True if the polynomial has degree ≤ 3 and no rational root, hence
    /// is irreducible over ℚ. Higher degrees return `false`.
    pub fn is_certified_irreducible(&self) -> bool {
        match self.degree() {
            Some(1) => true,
            Some(2) | Some(3) => !self.has_rational_root(),
            _ => false,
        }
    }
}

impl RealRoot {
    pub fn lower(&self) -> &BigRational {
        match self {
            RealRoot::Rational(q) => q,
            RealRoot::Isolated { lo, .. } => lo,
        }
    }
}

fn small_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let e = &n / &d;
            if e != d {
                out.push(e);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// Refines `(lo, hi)` around the unique root of `p` by bisection until the
/// width is at most `2^{-bits}·max(1, |lo|)`. Returns `true` if the root
/// turned out to be the exact midpoint.
pub(crate) fn bisect_to(p: &QPoly, lo: &mut BigRational, hi: &mut BigRational, bits: u32) -> bool {
    let two = rat(2);
    let slo = p.sign_at(lo);
    loop {
        if lo == hi {
            return true;
        }
        let scale = if lo.abs() > rat(1) { lo.abs() } else { rat(1) };
        let tol = scale / BigRational::from_integer(BigInt::one() << bits as usize);
        if &*hi - &*lo <= tol {
            return false;
        }
        let mid = (&*lo + &*hi) / &two;
        match p.sign_at(&mid) {
            Ordering::Equal => {
                *lo = mid.clone();
                *hi = mid;
                return true;
            }
            s if s == slo => *lo = mid,
            _ => *hi = mid,
        }
    }
}

/// Interval enclosing the given rational bracket.
pub(crate) fn bracket_interval(lo: &BigRational, hi: &BigRational, prec: u32) -> Interval {
    Interval::new(Dyadic::from_rational_down(lo, prec), Dyadic::from_rational_up(hi, prec))
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, a) in self.c.iter().enumerate().rev() {
            if a.is_zero() {
                continue;
            }
            let neg = a.is_negative();
            let mag = a.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sturm_counts_roots() {
        // x^3 - x^2 - 1: one real root (plastic-like, ≈1.4656).
        let p = QPoly::from_ints(&[-1, 0, -1, 1]);
        assert_eq!(p.count_real_roots(), 1);
        assert_eq!(p.count_roots_above(&rat(1)), 1);
        // (x-1)(x-2)(x+3)
        let q = QPoly::from_ints(&[6, -7, 0, 1]);
        assert_eq!(q.count_real_roots(), 3);
        assert_eq!(q.count_roots(&rat(0), &rat(5)), 2);
        let roots = q.real_roots();
        assert_eq!(roots.len(), 3);
        assert_eq!(q.rational_roots().len(), 3);
    }

    #[test]
    fn rational_roots_with_leading_coefficient() {
        // (2x - 1)(x^2 - 2)
        let p = QPoly::from_ints(&[2, -4, -1, 2]);
        assert_eq!(p.rational_roots(), vec![BigRational::new(1.into(), 2.into())]);
        assert!(!p.is_certified_irreducible());
        assert!(QPoly::from_ints(&[-2, 0, 1]).is_certified_irreducible());
        assert!(QPoly::from_ints(&[-1, -1, 1]).is_certified_irreducible());
    }

    #[test]
    fn division_and_xgcd() {
        let a = QPoly::from_ints(&[-1, 0, 1]);
        let b = QPoly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, QPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        let m = QPoly::from_ints(&[-2, 0, 1]);
        let x = QPoly::from_ints(&[1, 1]);
        let (g, s, _) = x.xgcd(&m);
        assert_eq!(g, QPoly::from_ints(&[1]));
        assert_eq!(s.mul(&x).rem(&m), QPoly::from_ints(&[1]));
    }

    #[test]
    fn bisection_encloses_sqrt2() {
        let p = QPoly::from_ints(&[-2, 0, 1]);
        let (mut lo, mut hi) = (rat(1), rat(2));
        assert!(!bisect_to(&p, &mut lo, &mut hi, 60));
        let iv = bracket_interval(&lo, &hi, 80);
        assert!((iv.midpoint_f64() - std::f64::consts::SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn display() {
        assert_eq!(QPoly::from_ints(&[-1, -1, 0, 1]).to_string(), "x^3 - x - 1");
    }
}
