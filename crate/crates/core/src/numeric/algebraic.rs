//! Real algebraic numbers given by a polynomial and an isolating bracket.

use std::fmt;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::interval::Interval;
use super::poly::{bisect_to, bracket_interval, QPoly};
use crate::error::{Error, Result};

#[derive(Debug)]
struct Bracket {
    lo: BigRational,
    hi: BigRational,
}

/// The unique root of a square-free polynomial inside an open bracket.
/// The bracket is refined lazily and shared between clones.
#[derive(Debug)]
pub struct AlgebraicRoot {
    poly: QPoly,
    index: usize,
    bracket: Mutex<Bracket>,
    cache: Mutex<Option<(u32, Interval)>>,
}

impl AlgebraicRoot {
    /// Validates that the square-free part of `poly` has exactly one root
    /// in `(lo, hi)` and that neither endpoint is a root.
    pub fn new(poly: &QPoly, lo: BigRational, hi: BigRational) -> Result<Self> {
        let p = poly.squarefree();
        if p.degree().unwrap_or(0) < 1 {
            return Err(Error::invalid("algebraic root needs a non-constant polynomial"));
        }
        if lo >= hi {
            return Err(Error::invalid("empty isolating bracket"));
        }
        if p.eval(&lo).is_zero() || p.eval(&hi).is_zero() {
            return Err(Error::invalid("bracket endpoint is a root"));
        }
        let n = p.count_roots(&lo, &hi);
        if n != 1 {
            return Err(Error::Invalid(format!(
                "bracket ({lo}, {hi}) holds {n} roots of {p}, expected exactly one"
            )));
        }
        let below = p.count_roots(&(-p.root_bound()), &lo);
        Ok(AlgebraicRoot {
            poly: p,
            index: below,
            bracket: Mutex::new(Bracket { lo, hi }),
            cache: Mutex::new(None),
        })
    }

    /// The `index`-th smallest real root of `poly`, if irrational.
    pub fn nth_real_root(poly: &QPoly, index: usize) -> Result<Self> {
        let roots = poly.real_roots();
        match roots.get(index) {
            Some(super::poly::RealRoot::Isolated { lo, hi }) => AlgebraicRoot::new(poly, lo.clone(), hi.clone()),
            Some(super::poly::RealRoot::Rational(q)) => {
                Err(Error::Invalid(format!("root {index} of {poly} is rational ({q})")))
            }
            None => Err(Error::Invalid(format!("{poly} has only {} real roots", roots.len()))),
        }
    }

    pub fn poly(&self) -> &QPoly {
        &self.poly
    }

    /// Position among the real roots of the square-free polynomial.
    pub fn index(&self) -> usize {
        self.index
    }

    /// Canonical identity: primitive integer polynomial plus root index.
    pub fn key(&self) -> String {
        let ints: Vec<String> = self.poly.primitive_integer().iter().map(BigInt::to_string).collect();
        format!("[{}]#{}", ints.join(","), self.index)
    }

    /// Enclosure accurate to `bits` relative bits.
    pub fn enclosure(&self, bits: u32) -> Interval {
        if let Some((b, iv)) = self.cache.lock().expect("root cache").as_ref() {
            if *b >= bits {
                return iv.rounded(bits + 8);
            }
        }
        let mut b = self.bracket.lock().expect("bracket lock");
        let Bracket { lo, hi } = &mut *b;
        bisect_to(&self.poly, lo, hi, bits + 2);
        let iv = bracket_interval(lo, hi, bits + 8);
        *self.cache.lock().expect("root cache") = Some((bits, iv.clone()));
        iv
    }

    /// Current bracket (rational endpoints).
    pub fn bracket(&self) -> (BigRational, BigRational) {
        let b = self.bracket.lock().expect("bracket lock");
        (b.lo.clone(), b.hi.clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(60).midpoint_f64()
    }
}

impl fmt::Display for AlgebraicRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "root({}; {})", self.poly, self.index)
    }
}
