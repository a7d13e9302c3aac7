use std::collections::BTreeSet;

use clap::{Args, Subcommand};
use nilseq_core::recurrence::{
    best_approximations, cubic_terms, fibonacci_scan, mwzor_checks, nearest_power_set_equiv, pisot_cubic_check,
    pisot_gp_set, tail_start, term_checks, PisotThreshold, QuadraticParams,
};
use nilseq_core::{Error, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::Certificate;
use crate::inputs::parse_u64;
use crate::report::{to_value, Output, Series};
use crate::Ctx;

#[derive(Debug, Args)]
pub struct FibArgs {
    /// Recurrence `n_{i+2} = a n_{i+1} + n_i`, `α = [a; a, a, …]`.
    #[arg(long, default_value_t = 1)]
    pub a: u64,
    #[arg(long, value_parser = parse_u64, default_value = "10^6")]
    pub horizon: u64,
    /// Terms up to this value are checked exactly one by one.
    #[arg(long, default_value = "1000000000000000000000000000000")]
    pub term_limit: String,
}

pub fn fib_output(a: u64, horizon: u64, term_limit: &BigInt, ctx: &Ctx) -> Result<Output> {
    let params = QuadraticParams::new(a)?;
    let scan = fibonacci_scan(&params, horizon, &ctx.policy)?;
    let checks = term_checks(&params, term_limit, &ctx.policy)?;
    let head: Vec<u64> = scan.head.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    let mut s = Series::new(&["index", "term", "member", "normalized"]);
    for c in &checks {
        s.push(vec![
            c.index.to_string(),
            c.term.clone(),
            c.member.to_string(),
            format!("{:.12}", c.normalized),
        ]);
    }
    let res = json!({
        "a": a,
        "horizon": horizon,
        "limit": params.limit(),
        "members": scan.members.len(),
        "terms": scan.terms.len(),
        "head": head,
        "extra": scan.extra,
        "finite_difference": head.len() + scan.extra.len(),
        "exact_evaluations": scan.exact_evaluations,
        "tail_start": tail_start(&checks),
        "term_checks": to_value(&checks)?,
    });
    Ok(Output::new(res)
        .with_cert(Certificate::FibonacciSet {
            a,
            horizon,
            members: scan.members,
            head,
            extra: scan.extra,
        })
        .with_series(s))
}

pub fn run_fib(args: &FibArgs, ctx: &mut Ctx) -> Result<Output> {
    let limit: BigInt = args
        .term_limit
        .parse()
        .map_err(|_| Error::invalid("bad --term-limit"))?;
    fib_output(args.a, args.horizon, &limit, ctx)
}

#[derive(Debug, Args)]
pub struct CubicArgs {
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    pub a: i64,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub b: i64,
}

#[derive(Debug, Subcommand)]
pub enum PisotCmd {
    /// Certified parameters, `m_{R_n}` ratios and the nearest-power check.
    Check {
        #[command(flatten)]
        cubic: CubicArgs,
        #[arg(long, default_value_t = 5)]
        n_lo: usize,
        #[arg(long, default_value_t = 20)]
        n_hi: usize,
    },
    /// `R_0, R_1, …`
    Terms {
        #[command(flatten)]
        cubic: CubicArgs,
        #[arg(long, default_value_t = 30)]
        count: usize,
    },
    /// Best approximations of `(β⁻¹, β⁻²)` against the recurrence.
    Bestapprox {
        #[command(flatten)]
        cubic: CubicArgs,
        #[arg(long, value_parser = parse_u64, default_value = "10^5")]
        qmax: u64,
    },
    /// The generalised-polynomial predicate against the best approximations.
    Gpset {
        #[command(flatten)]
        cubic: CubicArgs,
        #[arg(long, value_parser = parse_u64, default_value = "10^4")]
        qmax: u64,
        /// Use `h² < 1/g` as written instead of the `3/2` margin.
        #[arg(long)]
        literal: bool,
    },
}

fn terms_up_to(a: i64, b: i64, qmax: u64) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::new();
    let mut count = 8;
    loop {
        let t = cubic_terms(a, b, count);
        if t.last().and_then(|x| x.to_u64()).is_none_or(|x| x > qmax) {
            out.extend(t.iter().filter_map(|x| x.to_u64()).filter(|&x| x >= 1 && x <= qmax));
            break;
        }
        count *= 2;
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn difference(a: &[u64], b: &[u64]) -> Vec<u64> {
    let bs: BTreeSet<u64> = b.iter().copied().collect();
    a.iter().copied().filter(|x| !bs.contains(x)).collect()
}

pub fn bestapprox_output(a: i64, b: i64, qmax: u64) -> Result<Output> {
    let params = pisot_cubic_check(a, b)?;
    let recs = best_approximations(&params, qmax)?;
    let flagged: Vec<u64> = recs.iter().map(|r| r.q).collect();
    let terms = terms_up_to(a, b, qmax);
    let mut s = Series::new(&["q", "p1", "p2", "value"]);
    for r in &recs {
        s.push(vec![
            r.q.to_string(),
            r.p.0.to_string(),
            r.p.1.to_string(),
            r.value_decimal.clone(),
        ]);
    }
    let res = json!({
        "a": a,
        "b": b,
        "qmax": qmax,
        "flagged": flagged,
        "terms": terms,
        "only_flagged": difference(&flagged, &terms),
        "only_terms": difference(&terms, &flagged),
        "records": to_value(&recs)?,
    });
    Ok(Output::new(res)
        .with_cert(Certificate::BestApprox {
            a,
            b,
            records: recs.iter().map(|r| (r.q, r.p.0, r.p.1)).collect(),
        })
        .with_series(s))
}

pub fn run_pisot(cmd: &PisotCmd, ctx: &mut Ctx) -> Result<Output> {
    let policy = ctx.policy;
    match cmd {
        PisotCmd::Check { cubic, n_lo, n_hi } => {
            let p = pisot_cubic_check(cubic.a, cubic.b)?;
            let ratios = mwzor_checks(&p, *n_lo, *n_hi)?;
            let near = nearest_power_set_equiv(&p, 10, 40, &policy)?;
            Ok(Output::new(json!({
                "summary": to_value(&p.summary())?,
                "ratios": to_value(&ratios)?,
                "ratios_within_1pct": ratios.iter().all(|r| (r.ratio - 1.0).abs() <= 0.01),
                "nearest_power": to_value(&near)?,
            })))
        }
        PisotCmd::Terms { cubic, count } => {
            pisot_cubic_check(cubic.a, cubic.b)?;
            let t = cubic_terms(cubic.a, cubic.b, *count);
            let mut s = Series::new(&["n", "term"]);
            for (i, x) in t.iter().enumerate() {
                s.push(vec![i.to_string(), x.to_string()]);
            }
            let strs: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            Ok(Output::new(json!({ "a": cubic.a, "b": cubic.b, "terms": strs })).with_series(s))
        }
        PisotCmd::Bestapprox { cubic, qmax } => bestapprox_output(cubic.a, cubic.b, *qmax),
        PisotCmd::Gpset { cubic, qmax, literal } => {
            let p = pisot_cubic_check(cubic.a, cubic.b)?;
            let threshold = if *literal {
                PisotThreshold::Literal
            } else {
                PisotThreshold::default()
            };
            let gp = pisot_gp_set(&p, &threshold);
            let members: Vec<u64> = (1..=*qmax)
                .into_par_iter()
                .map(|q| Ok((q, gp.predicate.eval(&BigInt::from(q), &policy)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .filter(|t| t.1)
                .map(|t| t.0)
                .collect();
            let flagged: Vec<u64> = best_approximations(&p, *qmax)?.iter().map(|r| r.q).collect();
            Ok(Output::new(json!({
                "predicate": gp.predicate.to_string(),
                "kappa": threshold.kappa().to_string(),
                "qmax": qmax,
                "members": members,
                "only_predicate": difference(&members, &flagged),
                "only_flagged": difference(&flagged, &members),
            })))
        }
    }
}
