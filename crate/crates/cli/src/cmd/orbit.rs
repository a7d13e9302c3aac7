use clap::{Args, Subcommand};
use nilseq_core::genpoly::{floor_poly_mod, IntSequence};
use nilseq_core::numeric::{ExactReal, PrecisionPolicy};
use nilseq_core::orbit::{
    banach_density_scan, compare_orbit, heisenberg_fracpart, horizontal_character_probe, residue_indicator,
    suffix_hit_scan, EpsilonSchedule, HeisenbergTarget, SuffixScan, TorusSkewSystem,
};
use nilseq_core::{DigitWord, Error, Result};
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::Certificate;
use crate::inputs::{parse_const, parse_u64};
use crate::report::{real, to_value, Output, Series};
use crate::Ctx;

pub const RANGE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long, default_value = "(sqrt 2)")]
    pub alpha: String,
    #[arg(long, default_value = "(sqrt 3)")]
    pub beta: String,
}

impl PairArgs {
    fn load(&self) -> Result<(ExactReal, ExactReal)> {
        Ok((parse_const(&self.alpha)?, parse_const(&self.beta)?))
    }
}

#[derive(Debug, Subcommand)]
pub enum OrbitCmd {
    /// Skew product for `p(n)/m`: iteration against the closed form, and
    /// the residue cells against `⌊p(n)⌋ mod m`.
    Skew {
        /// Coefficients `c_0, c_1, …` of `p`, one flag each.
        #[arg(long = "coeff", required = true, allow_hyphen_values = true)]
        coeffs: Vec<String>,
        #[arg(long, default_value_t = 2)]
        modulus: u64,
        #[arg(long, value_parser = parse_u64, default_value = "1000")]
        n_max: u64,
    },
    /// `({-nα}, {nβ}, {nα⌊nβ⌋})` by closed form and by lattice reduction.
    Heis {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, value_parser = parse_u64, conflicts_with = "to")]
        n: Option<u64>,
        #[arg(long, value_parser = parse_u64, default_value = "0")]
        from: u64,
        #[arg(long, value_parser = parse_u64)]
        to: Option<u64>,
    },
    /// First `n` ending in `suffix` with `‖nα⌊nβ⌋‖ < ε(n)`.
    Scan {
        #[command(flatten)]
        pair: PairArgs,
        /// `0.4`, `n^-1/10`, `2*n^-0.5`, …
        #[arg(long, default_value = "n^-1/10")]
        eps: String,
        #[arg(long, default_value = "")]
        suffix: String,
        #[arg(long, default_value_t = 2)]
        base: u32,
        #[arg(long, value_parser = parse_u64, default_value = "10^5")]
        n_max: u64,
    },
    /// Smallest `‖k^t(l₁α + l₂β)‖` over `0 < ‖l‖ ≤ l_bound`.
    Probe {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 3)]
        t: u32,
        #[arg(long, default_value_t = 8)]
        l_bound: i64,
        #[arg(long, default_value = "1/100")]
        threshold: String,
    },
    /// Natural and sampled Banach density of the hit set.
    Density {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, default_value = "n^-1/10")]
        eps: String,
        #[arg(long, value_parser = parse_u64, default_value = "10^4")]
        n: u64,
        #[arg(long, default_value_t = 16)]
        windows: usize,
    },
}

fn frac_output(
    alpha: &str,
    beta: &str,
    a: &ExactReal,
    b: &ExactReal,
    n: u64,
    policy: &PrecisionPolicy,
) -> Result<Output> {
    let h = heisenberg_fracpart(a, b, n, policy)?;
    let coords = h.closed.iter().map(|x| real(x, policy)).collect::<Result<Vec<_>>>()?;
    let gamma: [String; 3] = [h.gamma[0].to_string(), h.gamma[1].to_string(), h.gamma[2].to_string()];
    let res = json!({ "n": n, "coords": coords, "gamma": gamma, "agree": h.agree });
    Ok(Output::new(res).with_cert(Certificate::HeisenbergFrac {
        alpha: alpha.to_string(),
        beta: beta.to_string(),
        n,
        gamma,
    }))
}

pub fn heis_range(
    a: &ExactReal,
    b: &ExactReal,
    from: u64,
    to: u64,
    policy: &PrecisionPolicy,
) -> Result<(bool, Series)> {
    let rows: Vec<(u64, bool, [String; 3])> = (from..to)
        .into_par_iter()
        .map(|n| {
            let h = heisenberg_fracpart(a, b, n, policy)?;
            Ok((n, h.agree, h.decimals))
        })
        .collect::<Result<_>>()?;
    let mut s = Series::new(&["n", "x", "y", "z", "agree"]);
    let mut all = true;
    for (n, ok, d) in rows {
        all &= ok;
        s.push(vec![
            n.to_string(),
            d[0].clone(),
            d[1].clone(),
            d[2].clone(),
            ok.to_string(),
        ]);
    }
    Ok((all, s))
}

pub fn scan_output(
    pair: &PairArgs,
    eps_src: &str,
    suffix: &DigitWord,
    n_max: u64,
    policy: &PrecisionPolicy,
) -> Result<Output> {
    let (a, b) = pair.load()?;
    let eps = EpsilonSchedule::parse(eps_src)?;
    let r = suffix_hit_scan(&a, &b, &eps, suffix, n_max, policy)?;
    let mut out = Output::new(json!({
        "suffix": suffix.to_string(),
        "base": suffix.base(),
        "eps": eps.to_string(),
        "outcome": to_value(&r)?,
    }));
    if let SuffixScan::Hit(h) = &r {
        out = out.with_cert(Certificate::HeisenbergHit {
            alpha: pair.alpha.clone(),
            beta: pair.beta.clone(),
            eps: eps_src.to_string(),
            n: h.n,
        });
    }
    Ok(out)
}

pub fn run(cmd: &OrbitCmd, ctx: &mut Ctx) -> Result<Output> {
    let policy = ctx.policy;
    match cmd {
        OrbitCmd::Skew { coeffs, modulus, n_max } => {
            if *n_max > RANGE_LIMIT {
                return Err(Error::budget("orbit length", RANGE_LIMIT as usize));
            }
            let c = coeffs.iter().map(|s| parse_const(s)).collect::<Result<Vec<_>>>()?;
            let sys = TorusSkewSystem::from_polynomial(&c, *modulus)?;
            let z = sys.start(&policy)?;
            let cmp = compare_orbit(&sys, &z, *n_max, &policy)?;
            let f = floor_poly_mod(&c, *modulus, policy)?;
            let vals = f.prefix(n_max + 1)?;
            let rows: Vec<(u64, i64, u8)> = (0..=*n_max)
                .into_par_iter()
                .map(|n| {
                    let r = vals[n as usize];
                    Ok((n, r, residue_indicator(&sys, &z, r as u64, n, &policy)?))
                })
                .collect::<Result<_>>()?;
            let mismatches: Vec<u64> = rows.iter().filter(|r| r.2 != 1).map(|r| r.0).collect();
            let mut s = Series::new(&["n", "floor_mod", "indicator"]);
            for (n, r, i) in &rows {
                s.push(vec![n.to_string(), r.to_string(), i.to_string()]);
            }
            Ok(Output::new(json!({
                "dimension": sys.dim(),
                "modulus": modulus,
                "comparison": to_value(&cmp)?,
                "residue_mismatches": mismatches,
            }))
            .with_series(s))
        }
        OrbitCmd::Heis { pair, n, from, to } => {
            let (a, b) = pair.load()?;
            if let Some(n) = n {
                return frac_output(&pair.alpha, &pair.beta, &a, &b, *n, &policy);
            }
            let to = to.ok_or_else(|| Error::invalid("give --n or --to"))?;
            if to < *from || to - from > RANGE_LIMIT {
                return Err(Error::budget("orbit range", RANGE_LIMIT as usize));
            }
            let (all, s) = heis_range(&a, &b, *from, to, &policy)?;
            Ok(Output::new(json!({ "from": from, "to": to, "all_agree": all })).with_series(s))
        }
        OrbitCmd::Scan {
            pair,
            eps,
            suffix,
            base,
            n_max,
        } => {
            let u = DigitWord::parse(*base, suffix)?;
            scan_output(pair, eps, &u, *n_max, &policy)
        }
        OrbitCmd::Probe {
            pair,
            k,
            t,
            l_bound,
            threshold,
        } => {
            let (a, b) = pair.load()?;
            let th = parse_const(threshold)?;
            let r = horizontal_character_probe(&a, &b, *k, *t, *l_bound, &th, &policy)?;
            Ok(Output::new(to_value(&r)?))
        }
        OrbitCmd::Density { pair, eps, n, windows } => {
            if *n > RANGE_LIMIT {
                return Err(Error::budget("density window", RANGE_LIMIT as usize));
            }
            let (alpha, beta) = pair.load()?;
            let target = HeisenbergTarget::new(alpha, beta, EpsilonSchedule::parse(eps)?, policy);
            let d = banach_density_scan(&target, *n, *windows, ctx.seed)?;
            Ok(Output::new(to_value(&d)?))
        }
    }
}
