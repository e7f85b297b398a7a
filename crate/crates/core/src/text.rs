//! Plain-text formats for networks, update words and digraphs.
//!
//! Network: a header line `q n`, then exactly `q^n` lines; line `i` holds the
//! `n` digits `x_1 ... x_n` of the image of configuration `i`. Digraph: a
//! header line `n`, then one `u v` arc per line. Lines starting with `#` are
//! comments. Coordinates and vertices are 1-based in both formats.

use crate::digraph::InteractionDigraph;
use crate::error::{Error, Result};
use crate::network::{CoordSet, Network, Params, UpdateWord};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("expected a non-negative integer, got {tok:?}")))
}

pub fn parse_network(text: &str) -> Result<Network> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::parse(hline, "header must be \"q n\""));
    }
    let q = parse_usize(hline, fields[0])?;
    let n = parse_usize(hline, fields[1])?;
    let params = Params::new(n, q).map_err(|e| Error::parse(hline, e.to_string()))?;
    let mut table = Vec::with_capacity(params.size());
    let mut last = hline;
    for (lno, line) in lines {
        last = lno;
        if table.len() == params.size() {
            return Err(Error::parse(lno, format!("expected exactly {} image lines", params.size())));
        }
        let digits = line
            .split_whitespace()
            .map(|t| parse_usize(lno, t))
            .collect::<Result<Vec<_>>>()?;
        if digits.len() != n {
            return Err(Error::parse(lno, format!("expected {n} digits, got {}", digits.len())));
        }
        let c = params
            .encode(&digits)
            .map_err(|e| Error::parse(lno, e.to_string()))?;
        table.push(c.0);
    }
    if table.len() != params.size() {
        return Err(Error::parse(
            last,
            format!("expected {} image lines, got {}", params.size(), table.len()),
        ));
    }
    Network::from_table(params, table)
}

pub fn emit_network(f: &Network) -> String {
    let p = f.params();
    let mut out = format!("{} {}\n", p.q(), p.n());
    for &y in f.table() {
        let digits: Vec<String> = p
            .decode(crate::Configuration(y))
            .iter()
            .map(|d| d.to_string())
            .collect();
        out.push_str(&digits.join(" "));
        out.push('\n');
    }
    out
}

/// Parse `"3;3;2"` or `"1,2;3"`. Whitespace is ignored; the empty string is
/// the empty word.
pub fn parse_word(text: &str) -> Result<UpdateWord> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Ok(UpdateWord::empty());
    }
    let mut steps = Vec::new();
    for step in compact.split(';') {
        if step.is_empty() {
            return Err(Error::parse(1, "empty update step"));
        }
        let mut coords = Vec::new();
        for tok in step.split(',') {
            let c = parse_usize(1, tok)?;
            if c == 0 || c > 32 {
                return Err(Error::parse(1, format!("coordinate {c} out of range")));
            }
            coords.push(c - 1);
        }
        steps.push(CoordSet::from_coords(coords));
    }
    Ok(UpdateWord::new(steps))
}

pub fn emit_word(w: &UpdateWord) -> String {
    w.steps()
        .iter()
        .map(|s| {
            s.iter()
                .map(|v| (v + 1).to_string())
                .collect::<Vec<_>>()
                .join(",")
        })
        .collect::<Vec<_>>()
        .join(";")
}

pub fn parse_digraph(text: &str) -> Result<InteractionDigraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let n = parse_usize(hline, header)?;
    if n == 0 {
        return Err(Error::parse(hline, "digraph needs at least one vertex"));
    }
    let mut arcs = Vec::new();
    for (lno, line) in lines {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 2 {
            return Err(Error::parse(lno, "arc lines must be \"u v\""));
        }
        let (u, v) = (parse_usize(lno, f[0])?, parse_usize(lno, f[1])?);
        if u == 0 || v == 0 || u > n || v > n {
            return Err(Error::parse(lno, format!("vertex out of range 1..={n}")));
        }
        arcs.push((u - 1, v - 1));
    }
    InteractionDigraph::new(n, arcs)
}

pub fn emit_digraph(d: &InteractionDigraph) -> String {
    let mut out = format!("{}\n", d.n());
    for (u, v) in d.arcs() {
        out.push_str(&format!("{} {}\n", u + 1, v + 1));
    }
    out
}
