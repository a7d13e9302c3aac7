use clap::{Args, Subcommand};
use nilseq_core::automaton::Dfao;
use nilseq_core::ip::{
    contains_fs, divisibility_obstruction, finite_sums, ips_fixture, pair_obstruction, power_generators,
    shifted_finite_sums, IpGenerators, DEFAULT_DEPTH,
};
use nilseq_core::{Error, Result};
use serde_json::json;

use crate::certificate::{Certificate, PredicateDef};
use crate::inputs::{builtin_automaton, parse_count, parse_list, AutomatonArgs};
use crate::report::{to_value, Output, Series};
use crate::Ctx;

#[derive(Debug, Args)]
pub struct GenArgs {
    /// Explicit generators `n_1,n_2,…`.
    #[arg(long, conflicts_with = "power")]
    pub gens: Option<String>,
    /// Generators `k^t, k^{2t}, …` for `--power k`.
    #[arg(long)]
    pub power: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub step: u32,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    pub depth: usize,
}

impl GenArgs {
    fn load(&self) -> Result<IpGenerators> {
        match (&self.gens, self.power) {
            (Some(g), _) => {
                let g = parse_list(g)?;
                let d = self.depth.min(g.len());
                IpGenerators::new(g[..d].to_vec())
            }
            (None, Some(k)) => power_generators(k, self.step, self.depth),
            (None, None) => Err(Error::invalid("give --gens or --power")),
        }
    }
}

#[derive(Debug, Args)]
pub struct PredArgs {
    #[command(flatten)]
    pub aut: AutomatonArgs,
    /// Members are the `n` where this expression is nonzero.
    #[arg(long, conflicts_with_all = ["file", "builtin"])]
    pub pred_expr: Option<String>,
}

impl PredArgs {
    fn load(&self, ctx: &mut Ctx) -> Result<PredicateDef> {
        match &self.pred_expr {
            Some(e) => {
                nilseq_core::genpoly::parse_gp(e)?;
                Ok(PredicateDef::Gp { expr: e.clone() })
            }
            None => Ok(PredicateDef::Automaton {
                automaton: self.aut.load(ctx)?,
            }),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum IpCmd {
    /// All finite sums `n_α`.
    Fs {
        #[command(flatten)]
        gen: GenArgs,
    },
    /// Exact check of `FS(n_i) ⊆ E`.
    Check {
        #[command(flatten)]
        gen: GenArgs,
        #[command(flatten)]
        pred: PredArgs,
    },
    /// The block fixture: its shifted family and the pair obstruction.
    Ips {
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, value_parser = parse_count, default_value = "64")]
        a_max: u128,
        #[arg(long, default_value_t = 8)]
        t_max: usize,
    },
    /// Positive multiples of `k^t` avoided by the set.
    Divisibility {
        #[command(flatten)]
        pred: PredArgs,
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        t: u32,
        #[arg(long, value_parser = parse_count, default_value = "2^20")]
        horizon: u128,
    },
}

pub fn bfree_automaton() -> Result<Dfao> {
    builtin_automaton("avoid:2:11")
}

pub fn fs_check_output(pred: PredicateDef, gen: &IpGenerators, depth: usize, ctx: &Ctx) -> Result<Output> {
    let m = pred.membership(&ctx.policy)?;
    let chk = contains_fs(m.as_ref(), gen, depth)?;
    let mut out = Output::new(json!({
        "predicate": m.label(),
        "generators": gen.gens(),
        "check": to_value(&chk)?,
    }));
    if chk.holds {
        out = out.with_cert(Certificate::FsContainment {
            predicate: pred,
            generators: gen.gens()[..depth].to_vec(),
            depth,
        });
    }
    Ok(out)
}

pub fn run(cmd: &IpCmd, ctx: &mut Ctx) -> Result<Output> {
    match cmd {
        IpCmd::Fs { gen } => {
            let g = gen.load()?;
            let sums = finite_sums(&g, g.len())?;
            let mut s = Series::new(&["sum"]);
            for x in &sums {
                s.push(vec![x.to_string()]);
            }
            Ok(Output::new(json!({ "generators": g.gens(), "count": sums.len(), "sums": sums })).with_series(s))
        }
        IpCmd::Check { gen, pred } => {
            let g = gen.load()?;
            let p = pred.load(ctx)?;
            fs_check_output(p, &g, g.len(), ctx)
        }
        IpCmd::Ips { depth, a_max, t_max } => {
            let fam = ips_fixture(*depth)?;
            let pred = PredicateDef::IpsFixture;
            let m = pred.membership(&ctx.policy)?;
            let sums = shifted_finite_sums(&fam, *depth)?;
            let mut bad = None;
            for s in &sums {
                if !m.member(s.value)? {
                    bad = Some(s.value);
                    break;
                }
            }
            let obstruction = pair_obstruction(*a_max, *t_max);
            let mut out = Output::new(json!({
                "family": to_value(&fam)?,
                "shifted_sums": sums.len(),
                "all_members": bad.is_none(),
                "first_non_member": bad,
                "pair_obstruction": to_value(&obstruction)?,
            }));
            if bad.is_none() {
                out = out.with_cert(Certificate::ShiftedFamily {
                    predicate: pred,
                    family: fam,
                    depth: *depth,
                });
            }
            Ok(out)
        }
        IpCmd::Divisibility { pred, k, t, horizon } => {
            let p = pred.load(ctx)?;
            let m = p.membership(&ctx.policy)?;
            let o = divisibility_obstruction(m.as_ref(), *k, *t, *horizon)?;
            Ok(Output::new(json!({
                "predicate": m.label(),
                "obstruction": to_value(&o)?,
            })))
        }
    }
}
