use clap::{Args, ValueEnum};
use nilseq_core::automaton::{baum_sweet, powers_acceptor};
use nilseq_core::ip::power_generators;
use nilseq_core::recurrence::{mwzor_checks, pisot_cubic_check};
use nilseq_core::sparsity::{growth_census, ips_witness, power_grid, DEFAULT_PATH_BUDGET};
use nilseq_core::{DigitWord, Result};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use super::ip::{bfree_automaton, fs_check_output};
use super::orbit::{heis_range, scan_output, PairArgs};
use super::recurrence::{bestapprox_output, fib_output};
use super::sparsity::classify_output;
use crate::certificate::{Certificate, PredicateDef};
use crate::inputs::parse_u64;
use crate::report::{to_value, Output};
use crate::Ctx;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoName {
    Fib,
    Pisot,
    Heisenberg,
    Bfree,
    Dichotomy,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    pub name: DemoName,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<i64>,
    /// Scan length; each demo has its own default.
    #[arg(long, value_parser = parse_u64)]
    pub horizon: Option<u64>,
}

/// Collects sections into one report payload.
struct Bundle {
    name: &'static str,
    sections: Map<String, Value>,
    certificates: Vec<Certificate>,
}

impl Bundle {
    fn new(name: &'static str) -> Self {
        Bundle {
            name,
            sections: Map::new(),
            certificates: Vec::new(),
        }
    }

    fn add(&mut self, key: &str, out: Output) {
        self.sections.insert(key.to_string(), out.results);
        self.certificates.extend(out.certificates);
    }

    fn note(&mut self, key: &str, v: Value) {
        self.sections.insert(key.to_string(), v);
    }

    fn finish(self) -> Output {
        let mut out = Output::new(json!({ "demo": self.name, "sections": Value::Object(self.sections) }));
        out.certificates = self.certificates;
        out
    }
}

pub fn run(args: &DemoArgs, ctx: &mut Ctx) -> Result<Output> {
    match args.name {
        DemoName::Fib => {
            let a = args.a.unwrap_or(1).max(1) as u64;
            let horizon = args.horizon.unwrap_or(100_000);
            let mut b = Bundle::new("fib");
            let limit = BigInt::from(10u32).pow(30);
            b.add("symmetric_difference", fib_output(a, horizon, &limit, ctx)?);
            Ok(b.finish())
        }
        DemoName::Pisot => {
            let (a, bb) = (args.a.unwrap_or(1), args.b.unwrap_or(0));
            let qmax = args.horizon.unwrap_or(10_000);
            let mut b = Bundle::new("pisot");
            let p = pisot_cubic_check(a, bb)?;
            b.note("summary", to_value(&p.summary())?);
            b.add("best_approximations", bestapprox_output(a, bb, qmax)?);
            let ratios = mwzor_checks(&p, 5, 20)?;
            b.note(
                "ratios",
                json!({
                    "checks": to_value(&ratios)?,
                    "within_1pct": ratios.iter().all(|r| (r.ratio - 1.0).abs() <= 0.01),
                }),
            );
            Ok(b.finish())
        }
        DemoName::Heisenberg => {
            let n_max = args.horizon.unwrap_or(500);
            let pair = PairArgs {
                alpha: "(sqrt 2)".into(),
                beta: "(sqrt 3)".into(),
            };
            let (alpha, beta) = (
                crate::inputs::parse_const(&pair.alpha)?,
                crate::inputs::parse_const(&pair.beta)?,
            );
            let mut b = Bundle::new("heisenberg");
            let (all, _) = heis_range(&alpha, &beta, 0, n_max + 1, &ctx.policy)?;
            b.note("fracpart", json!({ "n_max": n_max, "all_agree": all }));
            for s in ["11", "01", "101"] {
                let u = DigitWord::parse(2, s)?;
                b.add(
                    &format!("suffix_{s}"),
                    scan_output(&pair, "n^-1/10", &u, 100_000, &ctx.policy)?,
                );
            }
            Ok(b.finish())
        }
        DemoName::Bfree => {
            let mut b = Bundle::new("bfree");
            let aut = bfree_automaton()?;
            let gen = power_generators(4, 1, 16)?;
            b.add(
                "fs_containment",
                fs_check_output(PredicateDef::Automaton { automaton: aut }, &gen, 16, ctx)?,
            );
            Ok(b.finish())
        }
        DemoName::Dichotomy => {
            let mut b = Bundle::new("dichotomy");
            let p2 = powers_acceptor(2);
            b.add(
                "powers_of_two",
                classify_output(&p2, "powers:2", DEFAULT_PATH_BUDGET, 1 << 16)?,
            );
            let bs = baum_sweet();
            b.add(
                "baum_sweet",
                classify_output(&bs, "baum-sweet", DEFAULT_PATH_BUDGET, 1 << 16)?,
            );
            let horizon = args.horizon.unwrap_or(2000);
            let w = ips_witness(&bs, horizon, 10)?;
            b.note("baum_sweet_ips", to_value(&w)?);
            b.certificates.push(Certificate::IpsWitness {
                automaton: bs.clone(),
                witness: w,
                horizon,
                depth: 10,
            });
            let grid = power_grid(2, 20, 20);
            let g1 = growth_census(&p2, &grid, ctx.seed)?;
            let g2 = growth_census(&bs, &grid, ctx.seed)?;
            b.note(
                "growth_at_2^20",
                json!({ "powers_of_two": g1.samples[0].1.to_string(), "baum_sweet": g2.samples[0].1.to_string() }),
            );
            Ok(b.finish())
        }
    }
}
