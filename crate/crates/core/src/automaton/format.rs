//! Line-oriented automaton text format:
//!
//! ```text
//! base 2
//! order msd
//! initial 0
//! state 0 output 0 : 0->0 1->1
//! state 1 output 1 : 0->1 1->0
//! ```
//!
//! Blank lines and `#` comments are ignored. States may appear in any order
//! but must be numbered `0..n` without gaps.

use std::fmt::Write;

use super::{Dfao, ReadingOrder};
use crate::error::{Error, Result};

pub(super) fn to_text(a: &Dfao) -> String {
    let mut out = String::new();
    let order = match a.order() {
        ReadingOrder::Msd => "msd",
        ReadingOrder::Lsd => "lsd",
    };
    writeln!(out, "base {}", a.base()).unwrap();
    writeln!(out, "order {order}").unwrap();
    writeln!(out, "initial {}", a.initial()).unwrap();
    for s in 0..a.num_states() {
        write!(out, "state {s} output {} :", a.output_of(s)).unwrap();
        for d in 0..a.base() {
            write!(out, " {d}->{}", a.step(s, d)).unwrap();
        }
        out.push('\n');
    }
    out
}

fn perr(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| perr(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| perr(line, format!("bad {what} `{tok}`")))
}

pub(super) fn parse(text: &str) -> Result<Dfao> {
    let mut base: Option<u32> = None;
    let mut order = ReadingOrder::Msd;
    let mut initial = 0usize;
    let mut states: Vec<Option<(u32, Vec<usize>)>> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap().trim();
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        match toks.next().unwrap() {
            "base" => base = Some(num(line_no, toks.next(), "base")?),
            "order" => {
                order = match toks.next() {
                    Some("msd") => ReadingOrder::Msd,
                    Some("lsd") => ReadingOrder::Lsd,
                    other => return Err(perr(line_no, format!("bad order {other:?}"))),
                }
            }
            "initial" => initial = num(line_no, toks.next(), "initial state")?,
            "state" => {
                let k = base.ok_or_else(|| perr(line_no, "`base` must precede states"))?;
                let id: usize = num(line_no, toks.next(), "state id")?;
                if toks.next() != Some("output") {
                    return Err(perr(line_no, "expected `output`"));
                }
                let out: u32 = num(line_no, toks.next(), "output symbol")?;
                if toks.next() != Some(":") {
                    return Err(perr(line_no, "expected `:`"));
                }
                let mut row = vec![usize::MAX; k as usize];
                for tr in toks {
                    let (d, t) = tr
                        .split_once("->")
                        .ok_or_else(|| perr(line_no, format!("bad transition `{tr}`")))?;
                    let d: u32 = num(line_no, Some(d), "digit")?;
                    let t: usize = num(line_no, Some(t), "target")?;
                    if d >= k {
                        return Err(perr(line_no, format!("digit {d} out of range")));
                    }
                    row[d as usize] = t;
                }
                if let Some(d) = row.iter().position(|&t| t == usize::MAX) {
                    return Err(perr(line_no, format!("state {id} lacks a transition on {d}")));
                }
                if states.len() <= id {
                    states.resize(id + 1, None);
                }
                if states[id].is_some() {
                    return Err(perr(line_no, format!("state {id} defined twice")));
                }
                states[id] = Some((out, row));
            }
            other => return Err(perr(line_no, format!("unknown directive `{other}`"))),
        }
    }

    let base = base.ok_or_else(|| perr(0, "missing `base` line"))?;
    let mut rows = Vec::with_capacity(states.len());
    let mut outputs = Vec::with_capacity(states.len());
    for (i, s) in states.into_iter().enumerate() {
        let (o, r) = s.ok_or_else(|| perr(0, format!("state {i} missing")))?;
        outputs.push(o);
        rows.push(r);
    }
    Dfao::new(base, order, initial, rows, outputs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::{baum_sweet, thue_morse};

    #[test]
    fn round_trip() {
        for a in [thue_morse(), baum_sweet()] {
            let text = a.to_text();
            assert_eq!(parse(&text).unwrap(), a);
        }
    }

    #[test]
    fn comments_and_errors() {
        let ok = "# tm\nbase 2\norder lsd\ninitial 0\nstate 0 output 0 : 0->0 1->1\nstate 1 output 1 : 0->1 1->0\n";
        let a = parse(ok).unwrap();
        assert_eq!(a.order(), ReadingOrder::Lsd);
        assert!(matches!(
            parse("base 2\nstate 0 output 0 : 0->0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(parse("state 0 output 0 : 0->0 1->0\n").is_err());
        assert!(parse("base 2\nfoo\n").is_err());
    }
}
