//! Plain-text diagrams. A pipe dream row reads `+ · · +  x3`: one token per
//! cell, `+` for a cross, then the row's variable. A bumpless pipe dream row
//! is a run of box glyphs followed by the variable, e.g. `┌─┼  x2`.
//! Parsing inverts rendering exactly.

use schubword_core::bpd::Tile;

use crate::format::{BpdJson, PipeDreamJson};
use crate::Error;

const CROSS: &str = "+";
const EMPTY: &str = "·";

fn parse_label(token: Option<&str>, line: &str) -> Result<usize, Error> {
    token
        .and_then(|t| t.strip_prefix('x'))
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::Parse(format!("row {line:?} does not end with a variable like x3")))
}

pub fn render_pipe_dream(p: &PipeDreamJson) -> String {
    let mut out = String::new();
    for r in 1..=p.rows {
        let cells: Vec<&str> = (1..=p.cols).map(|c| if p.crosses.contains(&[r, c]) { CROSS } else { EMPTY }).collect();
        out.push_str(&cells.join(" "));
        out.push_str(&format!("  x{}\n", p.labels[r - 1]));
    }
    out
}

pub fn parse_pipe_dream(text: &str) -> Result<PipeDreamJson, Error> {
    let mut crosses = Vec::new();
    let mut labels = Vec::new();
    let mut cols = None;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let (label, cells) = tokens.split_last().ok_or_else(|| Error::Parse("empty row".into()))?;
        let r = labels.len() + 1;
        labels.push(parse_label(Some(label), line)?);
        for (c, t) in cells.iter().enumerate() {
            match *t {
                CROSS => crosses.push([r, c + 1]),
                EMPTY => {}
                other => return Err(Error::Parse(format!("unknown pipe dream cell {other:?}"))),
            }
        }
        if *cols.get_or_insert(cells.len()) != cells.len() {
            return Err(Error::Parse("rows have different lengths".into()));
        }
    }
    Ok(PipeDreamJson { rows: labels.len(), cols: cols.unwrap_or(0), crosses, labels })
}

pub fn render_bpd(b: &BpdJson) -> Result<String, Error> {
    let mut out = String::new();
    for (row, label) in b.tile_rows()?.iter().zip(&b.labels) {
        out.extend(row.iter().map(|t| t.glyph()));
        out.push_str(&format!("  x{label}\n"));
    }
    Ok(out)
}

pub fn parse_bpd(text: &str) -> Result<BpdJson, Error> {
    let mut tiles = Vec::new();
    let mut labels = Vec::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut tokens = line.split_whitespace();
        let glyphs = tokens.next().unwrap_or_default();
        let row = glyphs
            .chars()
            .map(|c| Tile::from_glyph(c).map(|t| t.code().to_string()).ok_or_else(|| Error::Parse(format!("unknown tile glyph {c:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        labels.push(parse_label(tokens.next(), line)?);
        tiles.push(row);
    }
    let k = tiles.first().map_or(0, Vec::len);
    if tiles.iter().any(|r| r.len() != k) {
        return Err(Error::Parse("rows have different lengths".into()));
    }
    Ok(BpdJson { n: tiles.len(), k, tiles, labels })
}
