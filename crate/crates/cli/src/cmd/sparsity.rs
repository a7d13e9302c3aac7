use clap::Subcommand;
use nilseq_core::automaton::DEFAULT_STATE_BUDGET;
use nilseq_core::sparsity::{
    classify_with_budget, factor_report, growth_census, ip_plus_witness, ips_witness, normalize_with_bound, power_grid,
    reduction_replay, very_sparse_decomposition, Classification, DEFAULT_PATH_BUDGET,
};
use nilseq_core::{Dfao, Result};
use serde_json::json;

use crate::certificate::Certificate;
use crate::inputs::{parse_count, parse_u64, AutomatonArgs};
use crate::report::{to_value, Output, Series};
use crate::Ctx;

#[derive(Debug, Subcommand)]
pub enum SparsityCmd {
    /// Very sparse decomposition or a condition (i) certificate.
    Classify {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, default_value_t = DEFAULT_PATH_BUDGET)]
        path_budget: usize,
        /// Range on which a decomposition is cross-checked in the certificate.
        #[arg(long, value_parser = parse_u64, default_value = "2^16")]
        check_bound: u64,
    },
    /// Exact counts `ν(k^j)` and the fitted regime.
    Growth {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, default_value_t = 1)]
        j_min: u32,
        #[arg(long, default_value_t = 20)]
        j_max: u32,
    },
    /// IPS witness from condition (i).
    Ips {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, value_parser = parse_u64, default_value = "2000")]
        horizon: u64,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// Factor universality and an IP+ witness.
    Ipplus {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, default_value_t = 10)]
        depth: usize,
    },
    /// `E ∩ (nZ + r)` as a union of rank-one branches.
    Normalize {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, value_parser = parse_count, default_value = "2^20")]
        bound: u128,
        /// Also replay the reduction steps.
        #[arg(long)]
        replay: bool,
    },
}

fn classification_cert(a: &Dfao, c: &Classification, bound: u64) -> Certificate {
    match c {
        Classification::VerySparse(d) => Certificate::VerySparse {
            automaton: a.clone(),
            decomposition: d.clone(),
            bound,
        },
        Classification::ConditionI(ci) => Certificate::ConditionI {
            certificate: ci.clone(),
        },
    }
}

pub fn classify_output(a: &Dfao, label: &str, path_budget: usize, bound: u64) -> Result<Output> {
    let c = classify_with_budget(a, path_budget)?;
    let mut res = json!({ "automaton": label, "classification": c.variant_name() });
    match &c {
        Classification::VerySparse(d) => {
            res["rank"] = json!(d.rank);
            res["decomposition"] = json!(d.to_string());
        }
        Classification::ConditionI(ci) => {
            res["state"] = json!(ci.state);
            res["words"] = json!({
                "prefix": ci.prefix.to_string(),
                "v1": ci.v1.to_string(),
                "v2": ci.v2.to_string(),
            });
        }
    }
    Ok(Output::new(res).with_cert(classification_cert(a, &c, bound)))
}

pub fn run(cmd: &SparsityCmd, ctx: &mut Ctx) -> Result<Output> {
    match cmd {
        SparsityCmd::Classify {
            aut,
            path_budget,
            check_bound,
        } => {
            let a = aut.load(ctx)?;
            classify_output(&a, &aut.describe(), *path_budget, *check_bound)
        }
        SparsityCmd::Growth { aut, j_min, j_max } => {
            let a = aut.load(ctx)?;
            let g = growth_census(&a, &power_grid(a.base(), *j_min, *j_max), ctx.seed)?;
            let mut s = Series::new(&["n", "count"]);
            for (n, c) in &g.samples {
                s.push(vec![n.to_string(), c.to_string()]);
            }
            Ok(Output::new(to_value(&g)?).with_series(s))
        }
        SparsityCmd::Ips { aut, horizon, depth } => {
            let a = aut.load(ctx)?;
            let w = ips_witness(&a, *horizon, *depth)?;
            Ok(Output::new(to_value(&w)?).with_cert(Certificate::IpsWitness {
                automaton: a,
                witness: w,
                horizon: *horizon,
                depth: *depth,
            }))
        }
        SparsityCmd::Ipplus { aut, depth } => {
            let a = aut.load(ctx)?;
            let f = factor_report(&a, DEFAULT_STATE_BUDGET)?;
            let w = ip_plus_witness(&a, *depth)?;
            Ok(
                Output::new(json!({ "factors": to_value(&f)?, "witness": to_value(&w)? })).with_cert(
                    Certificate::IpPlus {
                        automaton: a,
                        witness: w,
                        depth: *depth,
                    },
                ),
            )
        }
        SparsityCmd::Normalize { aut, bound, replay } => {
            let a = aut.load(ctx)?;
            let d = very_sparse_decomposition(&a)?;
            let nf = normalize_with_bound(&d, *bound)?;
            let mut res = json!({ "decomposition": d.to_string(), "normal_form": to_value(&nf)? });
            if *replay {
                res["replay"] = to_value(&reduction_replay(&nf, *bound)?)?;
            }
            Ok(Output::new(res).with_cert(Certificate::NormalForm {
                decomposition: d,
                normal_form: nf,
                bound: *bound,
            }))
        }
    }
}
