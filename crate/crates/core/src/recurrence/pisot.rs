//! The cubic Pisot construction: `β` a root of `x³ − ax² − bx − 1`, the
//! Rauzy norm, best approximations of `θ = (β⁻¹, β⁻²)`, and the
//! generalised-polynomial set cut out by `h(q)²·g(q) < κ`.

use std::cmp::Ordering;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::genpoly::{CmpOp, GpExpr, GpPredicate};
use crate::numeric::{AlgebraicRoot, ExactReal, FieldElem, NumberField, PrecisionPolicy, QPoly};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Certified data for one admissible `(a, b)`.
#[derive(Debug, Clone)]
pub struct PisotCubicParams {
    pub a: i64,
    pub b: i64,
    pub field: Arc<NumberField>,
    pub beta: FieldElem,
    pub beta_inv: FieldElem,
    /// `Re α = (a − β)/2`.
    pub alpha_re: FieldElem,
    /// `(Im α)² = 1/β − (Re α)²`.
    pub alpha_im_sq: FieldElem,
    /// `c = α + b/β`.
    pub c_re: FieldElem,
    pub c_abs_sq: FieldElem,
    /// `m₁² = N(θ)²`, so that `m_{R_n} = m₁|α|ⁿ`.
    pub m1_sq: FieldElem,
    /// `N₀(θ)`: distance from `θ` to the nearest lattice point.
    pub n0_theta_sq: FieldElem,
    /// First index from which `R_n` is strictly increasing (checked on
    /// the first 200 terms).
    pub increasing_from: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PisotSummary {
    pub a: i64,
    pub b: i64,
    pub polynomial: String,
    pub beta: String,
    pub alpha_re: String,
    pub alpha_im: String,
    pub alpha_abs: String,
    pub m1: String,
    pub n0_theta: String,
    pub increasing_from: usize,
}

fn admissible(a: i64, b: i64) -> bool {
    (a >= 0 && 0 <= b && b <= a + 1) || (a >= 2 && b == -1)
}

/// Validates `(a, b)` and certifies that `x³ − ax² − bx − 1` has exactly
/// one real root and that it exceeds 1.
pub fn pisot_cubic_check(a: i64, b: i64) -> Result<PisotCubicParams> {
    if !admissible(a, b) {
        return Err(Error::Invalid(format!(
            "(a, b) = ({a}, {b}) satisfies neither a ≥ 0, 0 ≤ b ≤ a + 1 nor a ≥ 2, b = −1"
        )));
    }
    let p = QPoly::from_ints(&[-1, -b, -a, 1]);
    let real = p.count_real_roots();
    if real != 1 {
        return Err(Error::Invalid(format!("{p} has {real} real roots, expected 1")));
    }
    if p.count_roots_above(&rat(1)) != 1 {
        return Err(Error::Invalid(format!("the real root of {p} does not exceed 1")));
    }
    if !p.is_certified_irreducible() {
        return Err(Error::Invalid(format!("{p} is reducible over Q")));
    }
    let root = AlgebraicRoot::new(&p, rat(1), p.root_bound())?;
    let field = NumberField::new(&p, root, "beta")?;
    let beta = FieldElem::generator(&field);
    let beta_inv = beta.inv().expect("β ≠ 0");
    let half = BigRational::new(1.into(), 2.into());
    let alpha_re = beta.neg().add_rational(&rat(a)).scale(&half);
    let alpha_im_sq = beta_inv.sub(&alpha_re.mul(&alpha_re));
    let b_over_beta = beta_inv.scale(&rat(b));
    let c_re = alpha_re.add(&b_over_beta);
    let c_abs_sq = beta_inv
        .add(&alpha_re.mul(&b_over_beta).scale(&rat(2)))
        .add(&b_over_beta.mul(&b_over_beta));
    let mut params = PisotCubicParams {
        a,
        b,
        field,
        beta: beta.clone(),
        beta_inv: beta_inv.clone(),
        alpha_re,
        alpha_im_sq,
        c_re,
        c_abs_sq,
        m1_sq: beta.clone(),
        n0_theta_sq: beta.clone(),
        increasing_from: 0,
    };
    let t1 = beta_inv.clone();
    let t2 = beta_inv.mul(&beta_inv);
    params.m1_sq = params.norm_sq(&t1, &t2);
    params.n0_theta_sq = params.lattice_min(&BigInt::one())?.1;
    let r = cubic_terms(a, b, 200);
    params.increasing_from = (0..r.len() - 1)
        .rev()
        .take_while(|&i| r[i] < r[i + 1])
        .last()
        .unwrap_or(r.len() - 1);
    Ok(params)
}

/// `R_0 = 1, R_1 = a, R_2 = a² + b, R_n = aR_{n−1} + bR_{n−2} + R_{n−3}`.
pub fn cubic_terms(a: i64, b: i64, count: usize) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = Vec::with_capacity(count);
    for i in 0..count {
        let t = match i {
            0 => BigInt::one(),
            1 => BigInt::from(a),
            2 => BigInt::from(a * a + b),
            _ => &out[i - 1] * a + &out[i - 2] * b + &out[i - 3],
        };
        out.push(t);
    }
    out
}

impl PisotCubicParams {
    /// `N(x)² = |c|²x₁² + 2 Re(c) x₁x₂/β + x₂²/β²`.
    pub fn norm_sq(&self, x1: &FieldElem, x2: &FieldElem) -> FieldElem {
        let t = x2.mul(&self.beta_inv);
        self.c_abs_sq
            .mul(&x1.mul(x1))
            .add(&self.c_re.mul(&x1.mul(&t)).scale(&rat(2)))
            .add(&t.mul(&t))
    }

    /// `qθ − p` in exact coordinates.
    pub fn offset(&self, q: &BigInt, p: (&BigInt, &BigInt)) -> (FieldElem, FieldElem) {
        let qr = BigRational::from_integer(q.clone());
        let x1 = self
            .beta_inv
            .scale(&qr)
            .add_rational(&-BigRational::from_integer(p.0.clone()));
        let x2 = self
            .beta_inv
            .mul(&self.beta_inv)
            .scale(&qr)
            .add_rational(&-BigRational::from_integer(p.1.clone()));
        (x1, x2)
    }

    pub fn beta_real(&self) -> ExactReal {
        ExactReal::field(self.beta.clone())
    }

    pub fn alpha_im(&self) -> ExactReal {
        ExactReal::field(self.alpha_im_sq.clone()).sqrt().expect("(Im α)² > 0")
    }

    pub fn m1(&self) -> ExactReal {
        ExactReal::field(self.m1_sq.clone()).sqrt().expect("m₁² > 0")
    }

    fn f64s(&self) -> NormF64 {
        let beta = self.beta.to_f64();
        NormF64 {
            beta,
            c_re: self.c_re.to_f64(),
            c_im: self.alpha_im_sq.to_f64().sqrt(),
        }
    }

    /// Nearest lattice point to `qθ` under `N` and `N₀(qθ)²`, exactly.
    /// Ties between lattice points resolve to the lexicographically
    /// smallest point.
    pub fn lattice_min(&self, q: &BigInt) -> Result<((BigInt, BigInt), FieldElem)> {
        let f = self.f64s();
        let qf = q.to_f64().ok_or_else(|| Error::invalid("q too large"))?;
        let cands = f.candidates(qf);
        let mut best: Option<((BigInt, BigInt), FieldElem)> = None;
        for (p1, p2, _) in cands {
            let p = (BigInt::from(p1), BigInt::from(p2));
            let (x1, x2) = self.offset(q, (&p.0, &p.1));
            let v = self.norm_sq(&x1, &x2);
            let better = match &best {
                None => true,
                Some((_, bv)) => v.compare(bv) == Ordering::Less,
            };
            if better {
                best = Some((p, v));
            }
        }
        best.ok_or_else(|| Error::invalid("no lattice candidates"))
    }

    pub fn summary(&self) -> PisotSummary {
        let d = |x: &ExactReal| x.to_decimal(12);
        PisotSummary {
            a: self.a,
            b: self.b,
            polynomial: self.field.minpoly().to_string(),
            beta: d(&self.beta_real()),
            alpha_re: d(&ExactReal::field(self.alpha_re.clone())),
            alpha_im: d(&self.alpha_im()),
            alpha_abs: d(&ExactReal::field(self.beta_inv.clone()).sqrt().expect("1/β > 0")),
            m1: d(&self.m1()),
            n0_theta: d(&ExactReal::field(self.n0_theta_sq.clone()).sqrt().expect("positive")),
            increasing_from: self.increasing_from,
        }
    }
}

/// Floating-point copy of the norm used to screen lattice candidates.
#[derive(Debug, Clone, Copy)]
struct NormF64 {
    beta: f64,
    c_re: f64,
    c_im: f64,
}

impl NormF64 {
    fn norm(&self, x1: f64, x2: f64) -> f64 {
        let re = self.c_re * x1 + x2 / self.beta;
        let im = self.c_im * x1;
        (re * re + im * im).sqrt()
    }

    /// Smallest singular value bound: `|det M| / ‖M‖_F`.
    fn sigma_min(&self) -> f64 {
        let det = self.c_im / self.beta;
        let frob = (self.c_re * self.c_re + 1.0 / (self.beta * self.beta) + self.c_im * self.c_im).sqrt();
        det.abs() / frob
    }

    /// Every lattice point whose norm distance to `qθ` could be minimal,
    /// with its floating-point norm.
    fn candidates(&self, q: f64) -> Vec<(i64, i64, f64)> {
        let y1 = q / self.beta;
        let y2 = q / (self.beta * self.beta);
        let v0 = self.norm(y1 - y1.round(), y2 - y2.round());
        let r = v0 / self.sigma_min() * 1.01 + 1e-6;
        let mut out = Vec::new();
        for p1 in (y1 - r).floor() as i64..=(y1 + r).ceil() as i64 {
            for p2 in (y2 - r).floor() as i64..=(y2 + r).ceil() as i64 {
                out.push((p1, p2, self.norm(y1 - p1 as f64, y2 - p2 as f64)));
            }
        }
        out
    }
}

/// One flagged best approximation.
#[derive(Debug, Clone, Serialize)]
pub struct BestApproxRecord {
    pub q: u64,
    pub p: (i64, i64),
    /// `N₀(qθ)`.
    pub value: f64,
    pub value_decimal: String,
}

/// `(q, N₀(qθ))` with the nearest lattice point, exact value kept.
#[derive(Debug, Clone)]
struct Approx {
    q: u64,
    p: (i64, i64),
    value: f64,
    exact: Option<FieldElem>,
}

/// Absolute error bound on the floating-point norm for `q`.
fn f64_tolerance(q: u64) -> f64 {
    1e-12 * (q as f64 + 1.0) + 1e-12
}

fn approx_for(params: &PisotCubicParams, f: &NormF64, q: u64) -> Approx {
    let mut c = f.candidates(q as f64);
    c.sort_by(|x, y| x.2.total_cmp(&y.2));
    let tol = 2.0 * f64_tolerance(q);
    let close = c.iter().take_while(|x| x.2 <= c[0].2 + tol).count();
    if close == 1 {
        return Approx {
            q,
            p: (c[0].0, c[0].1),
            value: c[0].2,
            exact: None,
        };
    }
    let qb = BigInt::from(q);
    let mut best: Option<((i64, i64), FieldElem, f64)> = None;
    for &(p1, p2, v) in &c[..close] {
        let (x1, x2) = params.offset(&qb, (&BigInt::from(p1), &BigInt::from(p2)));
        let e = params.norm_sq(&x1, &x2);
        if best.as_ref().is_none_or(|b| e.compare(&b.1) == Ordering::Less) {
            best = Some(((p1, p2), e, v));
        }
    }
    let (p, e, v) = best.expect("at least one candidate");
    Approx {
        q,
        p,
        value: v,
        exact: Some(e),
    }
}

fn exact_of(params: &PisotCubicParams, a: &mut Approx) -> FieldElem {
    if a.exact.is_none() {
        let (x1, x2) = params.offset(&BigInt::from(a.q), (&BigInt::from(a.p.0), &BigInt::from(a.p.1)));
        a.exact = Some(params.norm_sq(&x1, &x2));
    }
    a.exact.clone().expect("just set")
}

/// Brute-force best approximations of `θ = (β⁻¹, β⁻²)` for `q ≤ q_max`:
/// `q` is flagged iff `N₀(qθ) < N₀(kθ)` for all `1 ≤ k < q`. Floating
/// point decides comparisons only outside a proven error band; the rest
/// are decided exactly in `ℚ(β)`.
pub fn best_approximations(params: &PisotCubicParams, q_max: u64) -> Result<Vec<BestApproxRecord>> {
    if q_max == 0 {
        return Err(Error::invalid("q_max must be positive"));
    }
    let f = params.f64s();
    let approxes: Vec<Approx> = (1..=q_max).into_par_iter().map(|q| approx_for(params, &f, q)).collect();
    let mut records = Vec::new();
    let mut current: Option<Approx> = None;
    for mut a in approxes {
        let is_best = match current.as_mut() {
            None => true,
            Some(cur) => {
                let tol = f64_tolerance(a.q) + f64_tolerance(cur.q);
                if a.value < cur.value - tol {
                    true
                } else if a.value > cur.value + tol {
                    false
                } else {
                    let x = exact_of(params, &mut a);
                    let y = exact_of(params, cur);
                    x.compare(&y) == Ordering::Less
                }
            }
        };
        if is_best {
            let e = exact_of(params, &mut a);
            let dec = ExactReal::field(e).sqrt()?.to_decimal(15);
            records.push(BestApproxRecord {
                q: a.q,
                p: a.p,
                value: a.value,
                value_decimal: dec,
            });
            current = Some(a);
        }
    }
    Ok(records)
}

#[derive(Debug, Clone, Serialize)]
pub struct MwzorCheck {
    pub n: usize,
    pub r_n: String,
    pub ratio: f64,
    /// `N₀(R_nθ)² = m₁²β⁻ⁿ` holds exactly.
    pub exact: bool,
}

/// `m_{R_n} / (m₁|α|ⁿ)` for `n` in the range, with an exact equality test.
pub fn mwzor_checks(params: &PisotCubicParams, n_lo: usize, n_hi: usize) -> Result<Vec<MwzorCheck>> {
    let r = cubic_terms(params.a, params.b, n_hi + 1);
    let mut out = Vec::new();
    for (n, r_n) in r.iter().enumerate().take(n_hi + 1).skip(n_lo) {
        let (_, v) = params.lattice_min(r_n)?;
        let target = params.m1_sq.mul(&params.beta_inv.pow(n as u64));
        let ratio_sq = v.mul(&target.inv().expect("nonzero"));
        out.push(MwzorCheck {
            n,
            r_n: r_n.to_string(),
            ratio: ratio_sq.to_f64().sqrt(),
            exact: ratio_sq.as_rational().is_some_and(|q| q.is_one()),
        });
    }
    Ok(out)
}

/// Threshold used by [`pisot_gp_set`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PisotThreshold {
    /// `h(q)² < 1/g(q)` exactly as written.
    Literal,
    /// `h(q)²·g(q) < κ`.
    Margin(BigRational),
}

impl Default for PisotThreshold {
    fn default() -> Self {
        PisotThreshold::Margin(BigRational::new(3.into(), 2.into()))
    }
}

impl PisotThreshold {
    pub fn kappa(&self) -> BigRational {
        match self {
            PisotThreshold::Literal => rat(1),
            PisotThreshold::Margin(k) => k.clone(),
        }
    }
}

/// The pieces of the construction as generalised polynomials in `q`.
#[derive(Debug, Clone)]
pub struct PisotGp {
    pub g: GpExpr,
    pub h_sq: GpExpr,
    pub predicate: GpPredicate,
}

/// Builds `g(q)`, `h(q)²` and the predicate `h(q)²·g(q) < κ` (for
/// `q ≥ 1` this is `h(q)² < κ/g(q)` since `g(q) > 0`).
pub fn pisot_gp_set(params: &PisotCubicParams, threshold: &PisotThreshold) -> PisotGp {
    let k = |x: &FieldElem| ExactReal::field(x.clone());
    let q = GpExpr::var();
    let ib = params.beta_inv.clone();
    let ib2 = ib.mul(&ib);
    let q_ib = q.scale(k(&ib));
    let q_ib2 = q.scale(k(&ib2));
    let p1 = q_ib.nearest();
    let x = q_ib.sub(&p1);
    let p2 = x.scale(k(&params.beta.mul(&params.c_re))).add(&q_ib2).nearest();
    let y = q_ib2.sub(&p2).scale(k(&ib));
    let h_sq = x
        .mul(&x)
        .scale(k(&params.c_abs_sq))
        .add(&x.mul(&y).scale(k(&params.c_re.scale(&rat(2)))))
        .add(&y.mul(&y));
    let k1 = params.beta.scale(&rat(params.b)).add_rational(&rat(1)).mul(&ib2);
    let inner = q.add(&p1.scale(k(&k1))).add(&q_ib2.nearest().scale(k(&ib)));
    let g = inner.scale(k(&params.m1_sq.inv().expect("m₁ ≠ 0")));
    let predicate = GpPredicate::new(
        h_sq.mul(&g),
        CmpOp::Lt,
        GpExpr::constant(ExactReal::rational(threshold.kappa())),
    );
    PisotGp { g, h_sq, predicate }
}

#[derive(Debug, Clone, Serialize)]
pub struct TranslationCheck {
    pub n: usize,
    pub r_n: String,
    pub s_n: String,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct NearestPowerReport {
    pub u: String,
    pub u_nonzero: bool,
    /// `(n, |R_n − uβⁿ|)`.
    pub deviations: Vec<(usize, f64)>,
    /// First `n` from which every deviation in range is below `10⁻³`.
    pub small_from: Option<usize>,
    pub translation: Vec<TranslationCheck>,
    pub all_hold: bool,
}

/// `u = [R₂ − (a − β)R₁ + R₀/β] / p′(β)`, so that `R_n = uβⁿ + o(1)`.
pub fn dominant_coefficient(params: &PisotCubicParams) -> FieldElem {
    let r = cubic_terms(params.a, params.b, 3);
    let to = |x: &BigInt| BigRational::from_integer(x.clone());
    let b = &params.beta;
    let num = b
        .neg()
        .add_rational(&rat(params.a))
        .scale(&-to(&r[1]))
        .add_rational(&to(&r[2]))
        .add(&params.beta_inv.scale(&to(&r[0])));
    let dp = b
        .mul(b)
        .scale(&rat(3))
        .sub(&b.scale(&rat(2 * params.a)))
        .add_rational(&rat(-params.b));
    num.mul(&dp.inv().expect("p′(β) ≠ 0"))
}

/// Checks `R_n = u·⟨⟨βⁿ⟩⟩ + o(1)` and, for `n_lo ≤ n ≤ n_hi`, that among
/// `m ∈ S_n + [−2, 2]` exactly `m = S_n = ⟨⟨βⁿ⟩⟩` satisfies
/// `⟨⟨um⟩⟩ = R_n` and `‖um‖ < |u|/2`.
pub fn nearest_power_set_equiv(
    params: &PisotCubicParams,
    n_lo: usize,
    n_hi: usize,
    policy: &PrecisionPolicy,
) -> Result<NearestPowerReport> {
    let u = dominant_coefficient(params);
    let u_real = ExactReal::field(u.clone());
    let u_abs = if u.sign() == Ordering::Less {
        u_real.neg()
    } else {
        u_real.clone()
    };
    let half_u = u_abs.mul(&ExactReal::ratio(1, 2)?);
    let r = cubic_terms(params.a, params.b, n_hi + 1);
    let mut deviations = Vec::new();
    let mut translation = Vec::new();
    let mut beta_n = FieldElem::from_rational(&params.field, rat(1));
    for (n, r_n) in r.iter().enumerate() {
        let dev = u
            .mul(&beta_n)
            .neg()
            .add_rational(&BigRational::from_integer(r_n.clone()));
        deviations.push((n, dev.to_f64().abs()));
        if n >= n_lo {
            let s_n = ExactReal::field(beta_n.clone()).round(policy)?;
            let mut holds = true;
            for d in -2i64..=2 {
                let m = &s_n + d;
                let um = u_real.mul(&ExactReal::int(m.clone()));
                let cond =
                    um.round(policy)? == *r_n && um.dist_to_int(policy)?.cmp_with(&half_u, policy)? == Ordering::Less;
                if cond != (d == 0) {
                    holds = false;
                }
            }
            translation.push(TranslationCheck {
                n,
                r_n: r_n.to_string(),
                s_n: s_n.to_string(),
                holds,
            });
        }
        beta_n = beta_n.mul(&params.beta);
    }
    let small_from = deviations
        .iter()
        .rposition(|d| d.1 >= 1e-3)
        .map_or(Some(0), |k| (k + 1 < deviations.len()).then_some(k + 1));
    let all_hold = translation.iter().all(|t| t.holds);
    Ok(NearestPowerReport {
        u: u_real.to_decimal(15),
        u_nonzero: !u.is_zero(),
        deviations,
        small_from,
        translation,
        all_hold,
    })
}

/// `N(x)` for real `x = (x₁, x₂)`.
pub fn rauzy_norm(params: &PisotCubicParams, x1: &ExactReal, x2: &ExactReal) -> Result<ExactReal> {
    let k = |x: &FieldElem| ExactReal::field(x.clone());
    let t = x2.mul(&k(&params.beta_inv));
    let sq = k(&params.c_abs_sq)
        .mul(&x1.mul(x1))
        .add(&k(&params.c_re).mul(&x1.mul(&t)).mul(&ExactReal::int(2)))
        .add(&t.mul(&t));
    if sq.is_exact_zero() {
        return Ok(ExactReal::zero());
    }
    sq.sqrt()
}
