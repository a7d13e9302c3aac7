//! The skew product `T(x_1, …, x_d) = (x_1 + a_d, x_2 + x_1 + a_{d-1}, …,
//! x_d + x_{d-1} + a_1)` on `𝕋^d`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{ExactReal, PrecisionPolicy};

/// Largest `n` for which [`skew_orbit_point`] also iterates the map.
pub const ITERATION_LIMIT: u64 = 10_000;

/// Discrepancy tolerated between the iterated and the closed-form orbit.
pub const AGREEMENT_BITS: u32 = 40;

#[derive(Debug, Clone)]
pub struct TorusSkewSystem {
    /// `a_0, …, a_d`.
    a: Vec<ExactReal>,
    modulus: u64,
}

fn binomial(n: u64, i: usize) -> BigInt {
    let mut c = BigInt::one();
    for j in 0..i as u64 {
        if j >= n {
            return BigInt::zero();
        }
        c = c * (n - j) / (j + 1);
    }
    c
}

impl TorusSkewSystem {
    /// Coefficients `a_0, …, a_d` with `d ≥ 1`.
    pub fn new(a: Vec<ExactReal>, modulus: u64) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::invalid("the skew system needs dimension d ≥ 1"));
        }
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        Ok(TorusSkewSystem { a, modulus })
    }

    /// Expands `p(x)/m = Σ a_i C(x, i)` for `p(x) = Σ c_j x^j`, using
    /// `a_i = Δ^i (p/m)(0)`.
    pub fn from_polynomial(coeffs: &[ExactReal], modulus: u64) -> Result<Self> {
        let mut coeffs = coeffs.to_vec();
        while coeffs.len() > 2 && coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        let d = coeffs.len().saturating_sub(1).max(1);
        let m = ExactReal::int(modulus);
        let values: Vec<ExactReal> = (0..=d as i64)
            .map(|x| {
                let v = coeffs
                    .iter()
                    .rev()
                    .fold(ExactReal::zero(), |acc, c| acc.mul(&ExactReal::int(x)).add(c));
                v.div(&m)
            })
            .collect::<Result<_>>()?;
        let a = (0..=d)
            .map(|i| {
                (0..=i).fold(ExactReal::zero(), |acc, j| {
                    let c = binomial(i as u64, j);
                    let c = if (i - j).is_odd() { -c } else { c };
                    acc.add(&ExactReal::int(c).mul(&values[j]))
                })
            })
            .collect();
        TorusSkewSystem::new(a, modulus)
    }

    pub fn dim(&self) -> usize {
        self.a.len() - 1
    }

    pub fn coefficients(&self) -> &[ExactReal] {
        &self.a
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `z = (0, …, 0, {a_0})`, for which `(T^n z)_d = {p(n)/m}`.
    pub fn start(&self, policy: &PrecisionPolicy) -> Result<Vec<ExactReal>> {
        let mut z = vec![ExactReal::zero(); self.dim()];
        z[self.dim() - 1] = self.a[0].frac(policy)?;
        Ok(z)
    }

    fn check_point(&self, z: &[ExactReal]) -> Result<()> {
        if z.len() != self.dim() {
            return Err(Error::invalid(format!(
                "point has {} coordinates, expected {}",
                z.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// One application of `T`, reduced mod 1.
    pub fn step(&self, x: &[ExactReal], policy: &PrecisionPolicy) -> Result<Vec<ExactReal>> {
        self.check_point(x)?;
        let d = self.dim();
        (0..d)
            .map(|j| {
                let prev = if j == 0 { ExactReal::zero() } else { x[j - 1].clone() };
                x[j].add(&prev).add(&self.a[d - j]).frac(policy)
            })
            .collect()
    }

    /// `(T^n z)_j = Σ_{l ≤ j} z_l C(n, j-l) + Σ_{1 ≤ i ≤ j} a_{d-j+i} C(n, i)`,
    /// reduced mod 1. For `z = (0, …, 0, a_0)` this is the familiar
    /// `z_j + Σ_i a_{d-j+i} C(n, i)`.
    pub fn closed_form(&self, z: &[ExactReal], n: u64, policy: &PrecisionPolicy) -> Result<Vec<ExactReal>> {
        self.check_point(z)?;
        let d = self.dim();
        let binom: Vec<ExactReal> = (0..=d).map(|i| ExactReal::int(binomial(n, i))).collect();
        (1..=d)
            .map(|j| {
                let mut v = ExactReal::zero();
                for l in 1..=j {
                    v = v.add(&z[l - 1].mul(&binom[j - l]));
                }
                for (i, b) in binom.iter().enumerate().take(j + 1).skip(1) {
                    v = v.add(&self.a[d - j + i].mul(b));
                }
                v.frac(policy)
            })
            .collect()
    }

    /// Iterates `T` from `z`. Each state is kept as integer combinations of
    /// `z_1, …, z_d, a_1, …, a_d` plus an integer offset, so expression size
    /// stays bounded however long the orbit runs.
    pub fn orbit<'a>(&'a self, z: &[ExactReal], policy: &'a PrecisionPolicy) -> Result<SkewOrbit<'a>> {
        self.check_point(z)?;
        let d = self.dim();
        let basis: Vec<ExactReal> = z.iter().cloned().chain(self.a[1..].iter().cloned()).collect();
        let coeffs = (0..d)
            .map(|j| {
                let mut c = vec![BigInt::zero(); 2 * d];
                c[j] = BigInt::one();
                c
            })
            .collect();
        Ok(SkewOrbit {
            sys: self,
            policy,
            basis,
            coeffs,
            offsets: vec![BigInt::zero(); d],
            n: 0,
        })
    }
}

/// Successive points `z, Tz, T²z, …`.
pub struct SkewOrbit<'a> {
    sys: &'a TorusSkewSystem,
    policy: &'a PrecisionPolicy,
    basis: Vec<ExactReal>,
    coeffs: Vec<Vec<BigInt>>,
    offsets: Vec<BigInt>,
    n: u64,
}

impl SkewOrbit<'_> {
    fn value(&self, j: usize) -> ExactReal {
        self.coeffs[j]
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .fold(ExactReal::int(self.offsets[j].clone()), |acc, (c, b)| {
                acc.add(&ExactReal::int(c.clone()).mul(b))
            })
    }

    /// Index of the current point.
    pub fn index(&self) -> u64 {
        self.n
    }

    /// The current point, reduced mod 1.
    pub fn point(&mut self) -> Result<Vec<ExactReal>> {
        let d = self.sys.dim();
        let mut out = Vec::with_capacity(d);
        for j in 0..d {
            let v = self.value(j);
            let f = v.floor(self.policy)?;
            self.offsets[j] -= &f;
            out.push(v.sub(&ExactReal::int(f)));
        }
        Ok(out)
    }

    /// Applies `T` once.
    pub fn advance(&mut self) {
        let d = self.sys.dim();
        for j in (1..d).rev() {
            let (lo, hi) = self.coeffs.split_at_mut(j);
            for (c, p) in hi[0].iter_mut().zip(&lo[j - 1]) {
                *c += p;
            }
            let prev = self.offsets[j - 1].clone();
            self.offsets[j] += prev;
        }
        // x_j gains a_{d-j+1}, stored at basis index d + (d - j).
        for j in 0..d {
            self.coeffs[j][d + (d - 1 - j)] += 1;
        }
        self.n += 1;
    }
}

/// `‖x − y‖` on the circle, as an upper bound.
fn circle_gap(x: &ExactReal, y: &ExactReal, policy: &PrecisionPolicy) -> Result<f64> {
    let diff = x.sub(y);
    if diff.is_exact_zero() {
        return Ok(0.0);
    }
    let iv = diff.enclosure(policy.start_bits)?;
    let (lo, hi) = (iv.lo.to_f64(), iv.hi.to_f64());
    let near = |v: f64| (v - v.round()).abs();
    if (lo.round() - hi.round()).abs() > 0.0 {
        return Ok(0.5);
    }
    Ok(near(lo).max(near(hi)))
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitComparison {
    pub n_max: u64,
    /// Largest circle distance between the two computations.
    pub max_discrepancy: f64,
    /// Points where both computations returned the identical exact value.
    pub exact_matches: u64,
}

/// Iterates from `z` up to `n_max` and compares every point with the
/// closed form.
pub fn compare_orbit(
    sys: &TorusSkewSystem,
    z: &[ExactReal],
    n_max: u64,
    policy: &PrecisionPolicy,
) -> Result<OrbitComparison> {
    let mut orbit = sys.orbit(z, policy)?;
    let mut iterated = Vec::with_capacity(n_max as usize + 1);
    loop {
        iterated.push(orbit.point()?);
        if orbit.index() == n_max {
            break;
        }
        orbit.advance();
    }
    let gaps: Vec<(f64, bool)> = iterated
        .par_iter()
        .enumerate()
        .map(|(n, it)| {
            let closed = sys.closed_form(z, n as u64, policy)?;
            let mut worst = 0f64;
            let mut exact = true;
            for (a, b) in it.iter().zip(&closed) {
                exact &= a.sub(b).is_exact_zero();
                worst = worst.max(circle_gap(a, b, policy)?);
            }
            Ok((worst, exact))
        })
        .collect::<Result<_>>()?;
    Ok(OrbitComparison {
        n_max,
        max_discrepancy: gaps.iter().map(|g| g.0).fold(0.0, f64::max),
        exact_matches: gaps.iter().filter(|g| g.1).count() as u64,
    })
}

/// `T^n z` by the closed form; for `n ≤ ITERATION_LIMIT` the orbit is also
/// iterated and must agree within `2^{-40}`.
pub fn skew_orbit_point(
    sys: &TorusSkewSystem,
    z: &[ExactReal],
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<Vec<ExactReal>> {
    let closed = sys.closed_form(z, n, policy)?;
    if n <= ITERATION_LIMIT {
        let mut orbit = sys.orbit(z, policy)?;
        for _ in 0..n {
            orbit.advance();
        }
        let iterated = orbit.point()?;
        for (a, b) in iterated.iter().zip(&closed) {
            if circle_gap(a, b, policy)? > (-(AGREEMENT_BITS as f64)).exp2() {
                return Err(Error::VerificationFailed(format!(
                    "iterated and closed-form orbits differ at n = {n}"
                )));
            }
        }
    }
    Ok(closed)
}

/// `[T^n z ∈ 𝕋^{d-1} × [r/m, (r+1)/m)]`, decided as `⌊m·(T^n z)_d⌋ = r`.
pub fn residue_indicator(
    sys: &TorusSkewSystem,
    z: &[ExactReal],
    r: u64,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<u8> {
    let m = sys.modulus();
    if r >= m {
        return Err(Error::invalid(format!("residue {r} must be below the modulus {m}")));
    }
    let last = sys.closed_form(z, n, policy)?.pop().expect("d ≥ 1");
    let cell = last.mul(&ExactReal::int(m)).floor(policy)?;
    Ok(u8::from(cell == BigInt::from(r)))
}
