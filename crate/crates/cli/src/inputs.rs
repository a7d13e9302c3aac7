//! Argument groups shared by several subcommands and the parsers behind them.

use std::path::PathBuf;

use clap::Args;
use nilseq_core::automaton::{
    baum_sweet, constant, contains_pattern, finite_set_acceptor, from_prohibited_patterns, powers_acceptor, residue,
    thue_morse,
};
use nilseq_core::genpoly::{parse_gp, GpExpr};
use nilseq_core::numeric::ExactReal;
use nilseq_core::sparsity::{BasicSet, VerySparseDecomposition};
use nilseq_core::{Dfao, DigitWord, Error, Result};

use crate::Ctx;

/// Parses `123`, `10^6` or `2^40`.
pub fn parse_count(s: &str) -> std::result::Result<u128, String> {
    let s = s.trim().replace('_', "");
    let bad = || format!("`{s}` is not a count (use e.g. 1000, 10^6, 2^40)");
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u128 = b.parse().map_err(|_| bad())?;
            let e: u32 = e.parse().map_err(|_| bad())?;
            b.checked_pow(e).ok_or_else(bad)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

pub fn parse_u64(s: &str) -> std::result::Result<u64, String> {
    let v = parse_count(s)?;
    u64::try_from(v).map_err(|_| format!("`{s}` exceeds 64 bits"))
}

/// Comma-separated counts.
pub fn parse_list(s: &str) -> Result<Vec<u128>> {
    s.split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| parse_count(t).map_err(Error::Invalid))
        .collect()
}

/// A constant such as `(sqrt 2)`, `1/3` or `pi`.
pub fn parse_const(s: &str) -> Result<ExactReal> {
    parse_gp(s)?
        .as_const()
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("`{s}` is not a constant")))
}

#[derive(Debug, Clone, Args)]
pub struct AutomatonArgs {
    /// Automaton in the line-oriented text format.
    #[arg(long, conflicts_with = "builtin")]
    pub file: Option<PathBuf>,
    /// Built-in automaton: thue-morse, baum-sweet, powers:K, residue:K:M,
    /// constant:K:V, avoid:K:W1,W2, contains:K:W, finite:K:N1,N2,
    /// pattern:K:SET1;SET2 (sets like `1 (0)* 1`).
    #[arg(long)]
    pub builtin: Option<String>,
}

impl AutomatonArgs {
    pub fn load(&self, ctx: &mut Ctx) -> Result<Dfao> {
        match (&self.file, &self.builtin) {
            (Some(path), _) => Dfao::from_text(&ctx.read_file(path)?),
            (None, Some(name)) => builtin_automaton(name),
            (None, None) => Err(Error::invalid("give --file or --builtin")),
        }
    }

    /// Short description for report payloads.
    pub fn describe(&self) -> String {
        match (&self.file, &self.builtin) {
            (Some(p), _) => p.display().to_string(),
            (None, Some(b)) => b.clone(),
            _ => String::new(),
        }
    }
}

fn base_arg(s: &str) -> Result<u32> {
    s.parse()
        .ok()
        .filter(|&k| k >= 2)
        .ok_or_else(|| Error::Invalid(format!("bad base `{s}`")))
}

fn words(base: u32, s: &str) -> Result<Vec<DigitWord>> {
    s.split(',').map(|w| DigitWord::parse(base, w.trim())).collect()
}

pub fn builtin_automaton(desc: &str) -> Result<Dfao> {
    let mut parts = desc.splitn(3, ':');
    let name = parts.next().unwrap_or_default();
    let a1 = parts.next();
    let a2 = parts.next();
    fn need<'a>(desc: &str, x: Option<&'a str>) -> Result<&'a str> {
        x.ok_or_else(|| Error::Invalid(format!("builtin `{desc}` is missing an argument")))
    }
    match name {
        "thue-morse" => Ok(thue_morse()),
        "baum-sweet" => Ok(baum_sweet()),
        "powers" => Ok(powers_acceptor(base_arg(need(desc, a1)?)?)),
        "residue" => {
            let m = need(desc, a2)?.parse().map_err(|_| Error::invalid("bad modulus"))?;
            Ok(residue(base_arg(need(desc, a1)?)?, m))
        }
        "constant" => {
            let v = need(desc, a2)?.parse().map_err(|_| Error::invalid("bad value"))?;
            Ok(constant(base_arg(need(desc, a1)?)?, v))
        }
        "avoid" => {
            let k = base_arg(need(desc, a1)?)?;
            from_prohibited_patterns(k, &words(k, need(desc, a2)?)?)
        }
        "contains" => {
            let k = base_arg(need(desc, a1)?)?;
            contains_pattern(k, &DigitWord::parse(k, need(desc, a2)?)?)
        }
        "finite" => {
            let k = base_arg(need(desc, a1)?)?;
            finite_set_acceptor(k, &parse_list(need(desc, a2)?)?)
        }
        "pattern" => {
            let k = base_arg(need(desc, a1)?)?;
            let sets = need(desc, a2)?
                .split(';')
                .map(|t| BasicSet::parse(k, t))
                .collect::<Result<Vec<_>>>()?;
            VerySparseDecomposition::new(k, sets).to_acceptor()
        }
        _ => Err(Error::Invalid(format!("unknown builtin automaton `{name}`"))),
    }
}

#[derive(Debug, Clone, Args)]
pub struct GpArgs {
    /// Generalised polynomial in prefix notation, e.g. `(floor (* (sqrt 2) n))`.
    #[arg(long, conflicts_with = "expr_file")]
    pub expr: Option<String>,
    /// File holding the expression.
    #[arg(long)]
    pub expr_file: Option<PathBuf>,
}

impl GpArgs {
    pub fn source(&self, ctx: &mut Ctx) -> Result<String> {
        match (&self.expr, &self.expr_file) {
            (Some(e), _) => Ok(e.clone()),
            (None, Some(p)) => ctx.read_file(p),
            (None, None) => Err(Error::invalid("give --expr or --expr-file")),
        }
    }

    pub fn load(&self, ctx: &mut Ctx) -> Result<(String, GpExpr)> {
        let src = self.source(ctx)?;
        let e = parse_gp(&src)?;
        Ok((src, e))
    }
}
