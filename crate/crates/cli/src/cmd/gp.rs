use clap::Subcommand;
use nilseq_core::genpoly::{
    density_estimate, equidistribution_test, kernel_census, parse_gp, set_compare, weak_periodicity_search, GpExpr,
    GpSequence, IntSequence, WeakPeriodicity,
};
use nilseq_core::numeric::PrecisionPolicy;
use nilseq_core::{Error, Result};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;

use crate::certificate::Certificate;
use crate::inputs::{parse_const, parse_list, parse_u64, GpArgs};
use crate::report::{to_value, Output, RealRepr, Series};
use crate::Ctx;

pub const RANGE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Subcommand)]
pub enum GpCmd {
    /// Rigorous value at `n`, or on `[from, to)`.
    Eval {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long, conflicts_with_all = ["from", "to"], allow_hyphen_values = true)]
        n: Option<String>,
        #[arg(long, value_parser = parse_u64, default_value = "0")]
        from: u64,
        #[arg(long, value_parser = parse_u64)]
        to: Option<u64>,
    },
    /// Integer values (optionally mod `m`) on `[from, to)`.
    Scan {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long, value_parser = parse_u64, default_value = "0")]
        from: u64,
        #[arg(long, value_parser = parse_u64)]
        to: u64,
        #[arg(long)]
        modulus: Option<u64>,
    },
    /// Histogram and star discrepancy of `{λ g(an)}`.
    Equidist {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long, default_value_t = 1)]
        a: i64,
        #[arg(long, default_value = "1")]
        lambda: String,
        #[arg(long, value_parser = parse_u64)]
        n: u64,
        #[arg(long, default_value_t = 10)]
        bins: usize,
    },
    /// Symmetric difference of the nonzero sets of two expressions.
    Compare {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long)]
        other: String,
        #[arg(long, value_parser = parse_u64, default_value = "0")]
        from: u64,
        #[arg(long, value_parser = parse_u64)]
        to: u64,
    },
    /// Search for `f(qn + r) = f(qn + s)`.
    Weakper {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, value_parser = parse_u64, default_value = "64")]
        q_max: u64,
        #[arg(long, value_parser = parse_u64, default_value = "512")]
        offset_max: u64,
        #[arg(long, value_parser = parse_u64, default_value = "10^5")]
        horizon: u64,
    },
    /// Distinct kernel prefixes, a lower bound on the kernel size.
    Kernel {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long)]
        modulus: Option<u64>,
        #[arg(long, default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 10)]
        depth: u32,
        #[arg(long, value_parser = parse_u64, default_value = "32")]
        prefix_len: u64,
        #[arg(long, value_parser = parse_u64, default_value = "10^8")]
        budget: u64,
    },
    /// Natural and sampled upper Banach density of the nonzero set.
    Density {
        #[command(flatten)]
        gp: GpArgs,
        #[arg(long)]
        modulus: Option<u64>,
        /// Comma-separated window lengths.
        #[arg(long, default_value = "1000,10000")]
        grid: String,
        #[arg(long, default_value_t = 16)]
        windows: usize,
    },
}

fn check_range(from: u64, to: u64) -> Result<()> {
    if to < from {
        return Err(Error::invalid("--to must not be below --from"));
    }
    if to - from > RANGE_LIMIT {
        return Err(Error::budget("evaluation range", RANGE_LIMIT as usize));
    }
    Ok(())
}

/// Value at `n` with its certificate.
pub fn value_at(
    src: &str,
    e: &GpExpr,
    n: &BigInt,
    policy: &PrecisionPolicy,
) -> Result<(serde_json::Value, Certificate)> {
    let v = e.eval(n, policy)?;
    let repr = RealRepr::new(&v.value, policy)?;
    let exact = v.exact_integer.as_ref().map(|x| x.to_string());
    let res = json!({ "n": n.to_string(), "value": repr, "exact_integer": exact });
    let cert = Certificate::GpValue {
        expr: src.trim().to_string(),
        n: n.to_string(),
        exact_integer: exact,
        value: repr,
    };
    Ok((res, cert))
}

pub fn run(cmd: &GpCmd, ctx: &mut Ctx) -> Result<Output> {
    let policy = ctx.policy;
    match cmd {
        GpCmd::Eval { gp, n, from, to } => {
            let (src, e) = gp.load(ctx)?;
            if let Some(n) = n {
                let n: BigInt = n.parse().map_err(|_| Error::Invalid(format!("bad n `{n}`")))?;
                let (res, cert) = value_at(&src, &e, &n, &policy)?;
                return Ok(Output::new(res).with_cert(cert));
            }
            let to = to.ok_or_else(|| Error::invalid("give --n or --to"))?;
            check_range(*from, to)?;
            let rows: Vec<RealRepr> = (*from..to)
                .into_par_iter()
                .map(|n| RealRepr::new(&e.eval_real(&BigInt::from(n), &policy)?, &policy))
                .collect::<Result<_>>()?;
            let mut s = Series::new(&["n", "decimal"]);
            for (i, r) in rows.iter().enumerate() {
                s.push(vec![(from + i as u64).to_string(), r.decimal.clone()]);
            }
            Ok(Output::new(json!({ "from": from, "to": to, "values": rows })).with_series(s))
        }
        GpCmd::Scan { gp, from, to, modulus } => {
            let (_, e) = gp.load(ctx)?;
            check_range(*from, *to)?;
            let seq = GpSequence::new(e, *modulus, policy);
            let vals = seq.range(*from, to - from)?;
            let mut s = Series::new(&["n", "value"]);
            for (i, v) in vals.iter().enumerate() {
                s.push(vec![(from + i as u64).to_string(), v.to_string()]);
            }
            let nonzero = vals.iter().filter(|v| **v != 0).count();
            Ok(Output::new(json!({
                "sequence": seq.label(),
                "from": from,
                "to": to,
                "nonzero": nonzero,
                "values": vals,
            }))
            .with_series(s))
        }
        GpCmd::Equidist { gp, a, lambda, n, bins } => {
            let (_, e) = gp.load(ctx)?;
            let lam = parse_const(lambda)?;
            let r = equidistribution_test(&e, *a, &lam, *n, *bins, &policy)?;
            let mut s = Series::new(&["bin", "count"]);
            for (i, c) in r.histogram.iter().enumerate() {
                s.push(vec![i.to_string(), c.to_string()]);
            }
            Ok(Output::new(to_value(&r)?).with_series(s))
        }
        GpCmd::Compare { gp, other, from, to } => {
            let (_, e) = gp.load(ctx)?;
            check_range(*from, *to)?;
            let a = GpSequence::new(e, None, policy);
            let b = GpSequence::new(parse_gp(other)?, None, policy);
            let c = set_compare(&a, &b, *from, *to)?;
            Ok(Output::new(to_value(&c)?))
        }
        GpCmd::Weakper {
            gp,
            modulus,
            q_max,
            offset_max,
            horizon,
        } => {
            let (src, e) = gp.load(ctx)?;
            let seq = GpSequence::new(e, *modulus, policy);
            let w = weak_periodicity_search(&seq, *q_max, *offset_max, *horizon)?;
            let mut out = Output::new(json!({
                "sequence": seq.label(),
                "q_max": q_max,
                "offset_max": offset_max,
                "horizon": horizon,
                "outcome": to_value(&w)?,
            }));
            if let WeakPeriodicity::Witness { q, r, s } = w {
                out = out.with_cert(Certificate::WeakPeriodicity {
                    expr: src.trim().to_string(),
                    modulus: *modulus,
                    q,
                    r,
                    s,
                    horizon: *horizon,
                });
            }
            Ok(out)
        }
        GpCmd::Kernel {
            gp,
            modulus,
            k,
            depth,
            prefix_len,
            budget,
        } => {
            let (_, e) = gp.load(ctx)?;
            let seq = GpSequence::new(e, *modulus, policy);
            let c = kernel_census(&seq, *k, *depth, *prefix_len, *budget)?;
            Ok(Output::new(to_value(&c)?))
        }
        GpCmd::Density {
            gp,
            modulus,
            grid,
            windows,
        } => {
            let (_, e) = gp.load(ctx)?;
            let seq = GpSequence::new(e, *modulus, policy);
            let grid: Vec<u64> = parse_list(grid)?.into_iter().map(|x| x as u64).collect();
            let max = grid.iter().copied().max().unwrap_or(0);
            if max > RANGE_LIMIT {
                return Err(Error::budget("density window", RANGE_LIMIT as usize));
            }
            let r = density_estimate(&seq, &grid, *windows, 4 * max, ctx.seed)?;
            Ok(Output::new(to_value(&r)?))
        }
    }
}
