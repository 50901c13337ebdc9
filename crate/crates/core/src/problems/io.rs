//! Plain-text instance files.
//!
//! Exact cover: a header `N F`, then `N` lines of `F` characters `0`/`1`.
//!
//! Heisenberg: a header `N`, then one `i j Jxx Jyy Jzz` line per edge.
//!
//! Blank lines and lines starting with `#` are ignored in both formats.

use std::fmt::Write as _;
use std::path::Path;

use super::{Coupling, ExactCoverInstance, HeisenbergModel};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Instance {
    Cover(ExactCoverInstance),
    Heisenberg(HeisenbergModel),
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

/// Detects the format from the header's token count.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let (line, header) = content_lines(text)
        .next()
        .ok_or_else(|| parse_err(1, "empty instance file"))?;
    match header.split_whitespace().count() {
        2 => parse_cover(text).map(Instance::Cover),
        1 => parse_heisenberg(text).map(Instance::Heisenberg),
        _ => Err(parse_err(line, "header must be `N F` (cover) or `N` (Heisenberg)")),
    }
}

pub fn read_instance(path: &Path) -> Result<Instance> {
    parse_instance(&std::fs::read_to_string(path)?)
}

pub fn parse_cover(text: &str) -> Result<ExactCoverInstance> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty cover file"))?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(hl, "cover header must be `N F`"));
    }
    let n: usize = parse_num(hl, toks[0], "route count")?;
    let f: usize = parse_num(hl, toks[1], "flight count")?;
    let mut rows = Vec::with_capacity(n);
    for (line, row) in lines {
        if row.len() != f {
            return Err(parse_err(line, format!("expected {f} columns, found {}", row.len())));
        }
        let bits = row
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(parse_err(line, format!("unexpected character {other:?}"))),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(bits);
    }
    if rows.len() != n {
        return Err(parse_err(hl, format!("header promises {n} routes, found {}", rows.len())));
    }
    ExactCoverInstance::new(rows).map_err(|e| parse_err(hl, e.to_string()))
}

pub fn parse_heisenberg(text: &str) -> Result<HeisenbergModel> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty Heisenberg file"))?;
    let n: usize = parse_num(hl, header, "spin count")?;
    let mut edges = Vec::new();
    for (line, row) in lines {
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(parse_err(line, "edge line must be `i j Jxx Jyy Jzz`"));
        }
        edges.push(Coupling {
            i: parse_num(line, toks[0], "spin index")?,
            j: parse_num(line, toks[1], "spin index")?,
            jxx: parse_num(line, toks[2], "coupling")?,
            jyy: parse_num(line, toks[3], "coupling")?,
            jzz: parse_num(line, toks[4], "coupling")?,
        });
    }
    HeisenbergModel::new(n, edges).map_err(|e| parse_err(hl, e.to_string()))
}

pub fn format_cover(inst: &ExactCoverInstance) -> String {
    let mut out = format!("{} {}\n", inst.num_routes(), inst.num_flights());
    for row in inst.rows() {
        out.extend(row.iter().map(|&b| if b { '1' } else { '0' }));
        out.push('\n');
    }
    out
}

pub fn format_heisenberg(model: &HeisenbergModel) -> String {
    let mut out = format!("{}\n", model.num_spins());
    for e in model.edges() {
        writeln!(out, "{} {} {} {} {}", e.i, e.j, e.jxx, e.jyy, e.jzz).unwrap();
    }
    out
}
