use clap::Subcommand;
use nilseq_core::automaton::{
    kernel_with_budget, minimize, pumping_witness, reverse_reading_with_budget, DEFAULT_STATE_BUDGET,
};
use nilseq_core::{Error, ReadingOrder, Result};
use num_bigint::BigUint;
use serde_json::json;

use crate::certificate::Certificate;
use crate::inputs::{parse_u64, AutomatonArgs};
use crate::report::{to_value, Output, Series};
use crate::Ctx;

/// Largest range `automaton eval` will tabulate.
pub const RANGE_LIMIT: u64 = 10_000_000;

#[derive(Debug, Subcommand)]
pub enum AutomatonCmd {
    /// Output at `n`, or on `[from, to)`.
    Eval {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, conflicts_with_all = ["from", "to"])]
        n: Option<String>,
        #[arg(long, value_parser = parse_u64, default_value = "0")]
        from: u64,
        #[arg(long, value_parser = parse_u64)]
        to: Option<u64>,
    },
    /// The k-kernel with its index map.
    Kernel {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    /// Same sequence, opposite reading direction.
    Reverse {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, default_value_t = DEFAULT_STATE_BUDGET)]
        budget: usize,
    },
    Minimize {
        #[command(flatten)]
        aut: AutomatonArgs,
    },
    /// Shape, alphabet and leading-zero invariance.
    Check {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long, value_parser = parse_u64, default_value = "4096")]
        horizon: u64,
    },
    /// Words `u0 v^t u1` that keep the output `value`.
    Pump {
        #[command(flatten)]
        aut: AutomatonArgs,
        #[arg(long)]
        value: u32,
        #[arg(long, default_value_t = 8)]
        t_max: usize,
    },
}

pub fn run(cmd: &AutomatonCmd, ctx: &mut Ctx) -> Result<Output> {
    match cmd {
        AutomatonCmd::Eval { aut, n, from, to } => {
            let a = aut.load(ctx)?;
            if let Some(n) = n {
                let v: BigUint = n.parse().map_err(|_| Error::Invalid(format!("bad n `{n}`")))?;
                return Ok(Output::new(json!({ "n": n, "value": a.eval_big(&v) })));
            }
            let to = to.ok_or_else(|| Error::invalid("give --n or --to"))?;
            if to < *from || to - from > RANGE_LIMIT {
                return Err(Error::budget("evaluation range", RANGE_LIMIT as usize));
            }
            let values: Vec<u32> = (*from..to).map(|n| a.eval(n)).collect();
            let mut s = Series::new(&["n", "value"]);
            for (i, v) in values.iter().enumerate() {
                s.push(vec![(from + i as u64).to_string(), v.to_string()]);
            }
            let nonzero = values.iter().filter(|v| **v != 0).count();
            Ok(Output::new(json!({ "from": from, "to": to, "nonzero": nonzero, "values": values })).with_series(s))
        }
        AutomatonCmd::Kernel { aut, budget } => {
            let a = aut.load(ctx)?;
            let k = kernel_with_budget(&a, *budget)?;
            Ok(Output::new(
                json!({ "automaton": aut.describe(), "size": k.size, "kernel": to_value(&k)? }),
            ))
        }
        AutomatonCmd::Reverse { aut, budget } => {
            let a = aut.load(ctx)?;
            let r = reverse_reading_with_budget(&a, *budget)?;
            Ok(Output::new(json!({ "states": r.num_states(), "text": r.to_text() })))
        }
        AutomatonCmd::Minimize { aut } => {
            let a = aut.load(ctx)?;
            let m = minimize(&a);
            Ok(Output::new(json!({
                "states_before": a.num_states(),
                "states_after": m.num_states(),
                "text": m.to_text(),
            })))
        }
        AutomatonCmd::Check { aut, horizon } => {
            let a = aut.load(ctx)?;
            let order = match a.order() {
                ReadingOrder::Msd => "msd",
                ReadingOrder::Lsd => "lsd",
            };
            Ok(Output::new(json!({
                "base": a.base(),
                "order": order,
                "states": a.num_states(),
                "reachable": a.reachable().len(),
                "alphabet": a.alphabet(),
                "binary": a.is_binary(),
                "zero_invariant": a.verify_zero_invariance(*horizon),
                "horizon": horizon,
            })))
        }
        AutomatonCmd::Pump { aut, value, t_max } => {
            let a = aut.load(ctx)?;
            let w = pumping_witness(&a, *value)?;
            let words: Vec<String> = (0..=(*t_max).min(4)).map(|t| w.word(t).to_string()).collect();
            Ok(
                Output::new(json!({ "witness": to_value(&w)?, "words": words, "t_max": t_max })).with_cert(
                    Certificate::Pumping {
                        automaton: a,
                        witness: w,
                        t_max: *t_max,
                    },
                ),
            )
        }
    }
}
