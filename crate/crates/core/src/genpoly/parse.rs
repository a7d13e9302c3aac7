//! Prefix s-expression syntax for generalised polynomials.
//!
//! ```text
//! (+ 2 (* (sqrt 2) (pow (floor (+ (* (sqrt 3) (pow n 2)) (/ 1 7))) 2)))
//! ```
//!
//! Atoms: integers, `p/q`, decimals, `n`, `pi`, `e`, `phi`. Forms: `+ - * /
//! pow floor ceil round frac dist sqrt const root`, where
//! `(root (poly c0 c1 … cd) lo hi)` is the root of `Σ c_i x^i` in `(lo, hi)`.
//! `;` starts a comment.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::expr::GpExpr;
use crate::error::{Error, Result};
use crate::numeric::{ExactReal, QPoly};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Open,
    Close,
    Atom(String),
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn line(&self) -> usize {
        match self {
            Sexp::Atom(_, l) | Sexp::List(_, l) => *l,
        }
    }
}

fn tokenize(src: &str) -> Vec<(Tok, usize)> {
    let mut out = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let line = line.split(';').next().unwrap_or("");
        let mut cur = String::new();
        for ch in line.chars() {
            match ch {
                '(' | ')' | ' ' | '\t' => {
                    if !cur.is_empty() {
                        out.push((Tok::Atom(std::mem::take(&mut cur)), i + 1));
                    }
                    if ch == '(' {
                        out.push((Tok::Open, i + 1));
                    } else if ch == ')' {
                        out.push((Tok::Close, i + 1));
                    }
                }
                _ => cur.push(ch),
            }
        }
        if !cur.is_empty() {
            out.push((Tok::Atom(cur), i + 1));
        }
    }
    out
}

fn read(tokens: &[(Tok, usize)], pos: &mut usize) -> Result<Sexp> {
    let (tok, line) = tokens.get(*pos).cloned().ok_or(Error::Parse {
        line: tokens.last().map_or(1, |t| t.1),
        msg: "unexpected end of input".into(),
    })?;
    *pos += 1;
    match tok {
        Tok::Atom(a) => Ok(Sexp::Atom(a, line)),
        Tok::Close => Err(Error::Parse {
            line,
            msg: "unexpected ')'".into(),
        }),
        Tok::Open => {
            let mut items = Vec::new();
            loop {
                match tokens.get(*pos) {
                    Some((Tok::Close, _)) => {
                        *pos += 1;
                        return Ok(Sexp::List(items, line));
                    }
                    Some(_) => items.push(read(tokens, pos)?),
                    None => {
                        return Err(Error::Parse {
                            line,
                            msg: "unclosed '('".into(),
                        })
                    }
                }
            }
        }
    }
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses an exact rational literal: `12`, `-3/4`, `0.125`.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.parse().ok()?;
        let d: BigInt = b.parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        if b.is_empty() || !b.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let neg = a.starts_with('-');
        let whole: BigInt = if a.is_empty() || a == "-" {
            BigInt::zero()
        } else {
            a.parse().ok()?
        };
        let frac: BigInt = b.parse().ok()?;
        let scale = BigInt::from(10u32).pow(b.len() as u32);
        let f = BigRational::new(frac, scale);
        let w = BigRational::from_integer(whole);
        return Some(if neg { w - f } else { w + f });
    }
    s.parse::<BigInt>().ok().map(BigRational::from_integer)
}

fn constant_of(e: &GpExpr, line: usize) -> Result<ExactReal> {
    e.as_const()
        .cloned()
        .ok_or_else(|| perr(line, "expected a constant expression"))
}

fn build(s: &Sexp) -> Result<GpExpr> {
    match s {
        Sexp::Atom(a, line) => match a.as_str() {
            "n" => Ok(GpExpr::var()),
            "pi" => Ok(GpExpr::constant(ExactReal::pi())),
            "e" => Ok(GpExpr::constant(ExactReal::e())),
            "phi" => {
                let p = QPoly::from_ints(&[-1, -1, 1]);
                let phi = ExactReal::algebraic(
                    &p,
                    BigRational::from_integer(1.into()),
                    BigRational::from_integer(2.into()),
                    Some("phi"),
                )?;
                Ok(GpExpr::constant(phi))
            }
            _ => parse_rational(a)
                .map(|q| GpExpr::constant(ExactReal::rational(q)))
                .ok_or_else(|| perr(*line, format!("unknown atom '{a}'"))),
        },
        Sexp::List(items, line) => {
            let line = *line;
            let (head, args) = match items.split_first() {
                Some((Sexp::Atom(h, _), rest)) => (h.as_str(), rest),
                _ => return Err(perr(line, "expected an operator")),
            };
            let arity = |k: usize| -> Result<()> {
                if args.len() == k {
                    Ok(())
                } else {
                    Err(perr(line, format!("'{head}' takes {k} argument(s)")))
                }
            };
            match head {
                "root" => return build_root(args, line),
                "pow" => {
                    arity(2)?;
                    let base = build(&args[0])?;
                    let k = match &args[1] {
                        Sexp::Atom(a, _) => a.parse::<u32>().ok(),
                        _ => None,
                    }
                    .ok_or_else(|| perr(line, "exponent must be a non-negative integer"))?;
                    return Ok(base.pow(k));
                }
                _ => {}
            }
            let xs: Vec<GpExpr> = args.iter().map(build).collect::<Result<_>>()?;
            match head {
                "+" => {
                    if xs.is_empty() {
                        return Err(perr(line, "'+' needs arguments"));
                    }
                    Ok(xs[1..].iter().fold(xs[0].clone(), |a, b| a.add(b)))
                }
                "*" => {
                    if xs.is_empty() {
                        return Err(perr(line, "'*' needs arguments"));
                    }
                    Ok(xs[1..].iter().fold(xs[0].clone(), |a, b| a.mul(b)))
                }
                "-" => match xs.len() {
                    0 => Err(perr(line, "'-' needs arguments")),
                    1 => Ok(xs[0].neg()),
                    _ => Ok(xs[1..].iter().fold(xs[0].clone(), |a, b| a.sub(b))),
                },
                "/" => {
                    arity(2)?;
                    let d = constant_of(&xs[1], args[1].line())?;
                    let inv = d.recip().map_err(|_| perr(line, "division by zero"))?;
                    Ok(xs[0].scale(inv))
                }
                "floor" => {
                    arity(1)?;
                    Ok(xs[0].floor())
                }
                "ceil" => {
                    arity(1)?;
                    Ok(xs[0].ceil())
                }
                "round" | "nearest" => {
                    arity(1)?;
                    Ok(xs[0].nearest())
                }
                "frac" => {
                    arity(1)?;
                    Ok(xs[0].frac())
                }
                "dist" => {
                    arity(1)?;
                    Ok(xs[0].dist())
                }
                "const" => {
                    arity(1)?;
                    constant_of(&xs[0], line)?;
                    Ok(xs[0].clone())
                }
                "sqrt" => {
                    arity(1)?;
                    let c = constant_of(&xs[0], line)?;
                    let r = c.sqrt().map_err(|e| perr(line, e.to_string()))?;
                    Ok(GpExpr::constant(r))
                }
                other => Err(perr(line, format!("unknown operator '{other}'"))),
            }
        }
    }
}

fn rational_atom(s: &Sexp) -> Result<BigRational> {
    match s {
        Sexp::Atom(a, line) => parse_rational(a).ok_or_else(|| perr(*line, format!("expected a rational, got '{a}'"))),
        other => Err(perr(other.line(), "expected a rational literal")),
    }
}

fn build_root(args: &[Sexp], line: usize) -> Result<GpExpr> {
    if args.len() != 3 {
        return Err(perr(line, "'root' takes (poly c0 … cd) lo hi"));
    }
    let coeffs = match &args[0] {
        Sexp::List(items, _) if matches!(items.first(), Some(Sexp::Atom(h, _)) if h == "poly") => {
            items[1..].iter().map(rational_atom).collect::<Result<Vec<_>>>()?
        }
        _ => return Err(perr(line, "expected (poly c0 … cd)")),
    };
    let lo = rational_atom(&args[1])?;
    let hi = rational_atom(&args[2])?;
    let r = ExactReal::algebraic(&QPoly::new(coeffs), lo, hi, None).map_err(|e| perr(line, e.to_string()))?;
    Ok(GpExpr::constant(r))
}

/// Parses one expression; trailing input is an error.
pub fn parse_gp(src: &str) -> Result<GpExpr> {
    let tokens = tokenize(src);
    if tokens.is_empty() {
        return Err(perr(1, "empty expression"));
    }
    let mut pos = 0;
    let s = read(&tokens, &mut pos)?;
    if pos != tokens.len() {
        return Err(perr(tokens[pos].1, "trailing input after expression"));
    }
    build(&s)
}
