//! Exact arithmetic in real number fields `ℚ(θ)` of degree 2 or 3.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebraic::AlgebraicRoot;
use super::interval::Interval;
use super::poly::QPoly;
use crate::error::{Error, Result};

/// `ℚ(θ)` for a real root `θ` of an irreducible polynomial.
#[derive(Debug)]
pub struct NumberField {
    minpoly: QPoly,
    root: AlgebraicRoot,
    name: String,
    key: String,
}

impl NumberField {
    /// `minpoly` must be certified irreducible of degree 2 or 3.
    pub fn new(minpoly: &QPoly, root: AlgebraicRoot, name: impl Into<String>) -> Result<Arc<Self>> {
        let m = minpoly.monic();
        if !matches!(m.degree(), Some(2) | Some(3)) || !m.is_certified_irreducible() {
            return Err(Error::Invalid(format!(
                "{m} is not a certified irreducible polynomial of degree 2 or 3"
            )));
        }
        if root.poly().monic() != m {
            return Err(Error::invalid("root polynomial differs from the minimal polynomial"));
        }
        let key = root.key();
        Ok(Arc::new(NumberField {
            minpoly: m,
            root,
            name: name.into(),
            key,
        }))
    }

    /// `ℚ(√d)` for a positive rational `d` that is not a square.
    pub fn quadratic(d: &BigRational) -> Result<Arc<Self>> {
        if !d.is_positive() {
            return Err(Error::invalid("quadratic field needs a positive radicand"));
        }
        let m = QPoly::new(vec![-d.clone(), BigRational::zero(), BigRational::one()]);
        let hi = if d > &BigRational::one() {
            d.clone()
        } else {
            BigRational::one()
        };
        let root = AlgebraicRoot::new(&m, BigRational::zero(), hi + BigRational::one())?;
        NumberField::new(&m, root, format!("sqrt({d})"))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.degree().unwrap_or(0)
    }

    pub fn minpoly(&self) -> &QPoly {
        &self.minpoly
    }

    pub fn root(&self) -> &AlgebraicRoot {
        &self.root
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn same(&self, o: &NumberField) -> bool {
        self.key == o.key
    }
}

/// Element `c0 + c1 θ + c2 θ²` of a number field.
#[derive(Debug, Clone)]
pub struct FieldElem {
    field: Arc<NumberField>,
    c: QPoly,
}

impl FieldElem {
    pub fn from_poly(field: &Arc<NumberField>, p: &QPoly) -> Self {
        FieldElem {
            field: field.clone(),
            c: p.rem(&field.minpoly),
        }
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        FieldElem::from_poly(field, &QPoly::constant(q))
    }

    pub fn generator(field: &Arc<NumberField>) -> Self {
        FieldElem::from_poly(field, &QPoly::x())
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        (0..self.field.degree()).map(|i| self.c.coeff(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_zero()
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match self.c.degree() {
            None => Some(BigRational::zero()),
            Some(0) => Some(self.c.coeff(0)),
            _ => None,
        }
    }

    fn check(&self, o: &FieldElem) {
        assert!(self.field.same(&o.field), "mixing elements of different fields");
    }

    pub fn add(&self, o: &FieldElem) -> FieldElem {
        self.check(o);
        FieldElem {
            field: self.field.clone(),
            c: self.c.add(&o.c),
        }
    }

    pub fn sub(&self, o: &FieldElem) -> FieldElem {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            c: self.c.neg(),
        }
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        self.check(o);
        FieldElem::from_poly(&self.field, &self.c.mul(&o.c))
    }

    pub fn scale(&self, q: &BigRational) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            c: self.c.scale(q),
        }
    }

    pub fn add_rational(&self, q: &BigRational) -> FieldElem {
        FieldElem {
            field: self.field.clone(),
            c: self.c.add(&QPoly::constant(q.clone())),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<FieldElem> {
        if self.is_zero() {
            return None;
        }
        let (g, s, _) = self.c.xgcd(&self.field.minpoly);
        debug_assert_eq!(g.degree(), Some(0));
        Some(FieldElem::from_poly(&self.field, &s))
    }

    pub fn pow(&self, mut e: u64) -> FieldElem {
        let mut base = self.clone();
        let mut acc = FieldElem::from_rational(&self.field, BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Enclosure accurate to `bits` relative bits.
    pub fn enclosure(&self, bits: u32) -> Interval {
        if let Some(q) = self.as_rational() {
            return Interval::from_rational(&q, bits + 4);
        }
        let mut w = bits + 16;
        loop {
            let theta = self.field.root.enclosure(w);
            let iv = self.c.eval_interval(&theta, w + 8);
            if iv.accurate_to(bits) && (self.is_zero() || !iv.contains_zero()) {
                return iv;
            }
            w = w.saturating_mul(2);
        }
    }

    /// Exact sign; terminates because a nonzero algebraic number has a
    /// nonzero enclosure at some precision.
    pub fn sign(&self) -> Ordering {
        if let Some(q) = self.as_rational() {
            return q.cmp(&BigRational::zero());
        }
        self.enclosure(32).sign().expect("nonzero field element")
    }

    pub fn compare(&self, o: &FieldElem) -> Ordering {
        self.sub(o).sign()
    }

    pub fn to_f64(&self) -> f64 {
        self.enclosure(60).midpoint_f64()
    }
}

impl PartialEq for FieldElem {
    fn eq(&self, o: &Self) -> bool {
        self.field.same(&o.field) && self.c == o.c
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_zero() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        for (i, a) in self.c.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => self.field.name.clone(),
                _ => format!("{}^{i}", self.field.name),
            };
            parts.push(match (i, a.is_one()) {
                (0, _) => a.to_string(),
                (_, true) => var,
                _ => format!("{a}*{var}"),
            });
        }
        write!(f, "({})", parts.join(" + "))
    }
}
