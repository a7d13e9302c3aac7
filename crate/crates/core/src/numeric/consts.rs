//! Enclosures of π and e by fixed-point series.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;

use super::interval::{Dyadic, Interval};

static PI_CACHE: Mutex<Option<(u32, Interval)>> = Mutex::new(None);
static E_CACHE: Mutex<Option<(u32, Interval)>> = Mutex::new(None);

/// `atan(1/x) · 2^s` truncated, plus the number of truncation steps.
fn atan_inv_scaled(x: u32, s: u32) -> (BigInt, i64) {
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = (BigInt::from(1) << s as usize) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: u64 = 0;
    let mut steps = 1i64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k.is_multiple_of(2) {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
        steps += 2;
    }
    (sum, steps + 1)
}

fn cached(cache: &Mutex<Option<(u32, Interval)>>, prec: u32, f: fn(u32) -> Interval) -> Interval {
    let mut c = cache.lock().expect("constant cache");
    if let Some((p, iv)) = c.as_ref() {
        if *p >= prec {
            return iv.rounded(prec + 4);
        }
    }
    let iv = f(prec);
    *c = Some((prec, iv.clone()));
    iv
}

fn pi_uncached(prec: u32) -> Interval {
    let s = prec + 16;
    let (a, ea) = atan_inv_scaled(5, s);
    let (b, eb) = atan_inv_scaled(239, s);
    let p = a * 16 - b * 4;
    let err = BigInt::from(16 * ea + 4 * eb);
    Interval::new(Dyadic::new(&p - &err, -(s as i64)), Dyadic::new(&p + &err, -(s as i64)))
}

fn e_uncached(prec: u32) -> Interval {
    let s = prec + 16;
    let mut term = BigInt::from(1) << s as usize;
    let mut sum = term.clone();
    let mut k = 1u64;
    while !term.is_zero() {
        term /= BigInt::from(k);
        sum += &term;
        k += 1;
    }
    let err = BigInt::from(k + 3);
    Interval::new(
        Dyadic::new(&sum - &err, -(s as i64)),
        Dyadic::new(&sum + &err, -(s as i64)),
    )
}

/// Enclosure of π with about `prec` bits of accuracy.
pub fn pi_interval(prec: u32) -> Interval {
    cached(&PI_CACHE, prec, pi_uncached)
}

/// Enclosure of e with about `prec` bits of accuracy.
pub fn e_interval(prec: u32) -> Interval {
    cached(&E_CACHE, prec, e_uncached)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pi_and_e() {
        let p = pi_interval(200);
        assert!(p.accurate_to(190));
        assert!((p.midpoint_f64() - std::f64::consts::PI).abs() < 1e-15);
        // 355/113 is above π by about 2.7e-7.
        let q = num_rational::BigRational::new(355.into(), 113.into());
        assert!(p.hi.to_rational() < q);
        let e = e_interval(128);
        assert!((e.midpoint_f64() - std::f64::consts::E).abs() < 1e-15);
        assert!(e.accurate_to(120));
    }
}
