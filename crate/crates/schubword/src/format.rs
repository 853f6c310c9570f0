//! JSON shapes for words, polynomials, diagrams and matrices, plus the LaTeX
//! renderer. Every shape round-trips through `serde_json`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use schubword_core::bpd::{Bpd, Tile, WordBpd};
use schubword_core::combinat::{Permutation, Word};
use schubword_core::geometry::{format_rational, parse_rational, Field, Matrix};
use schubword_core::pipedream::{PipeDream, WordPipeDream};
use schubword_core::poly::Polynomial;

use crate::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
    Latex,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "text" => Ok(Self::Text),
            "json" => Ok(Self::Json),
            "latex" => Ok(Self::Latex),
            _ => Err(Error::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordJson {
    pub letters: Vec<usize>,
    pub k: usize,
}

impl From<&Word> for WordJson {
    fn from(w: &Word) -> Self {
        Self { letters: w.letters().to_vec(), k: w.k() }
    }
}

impl TryFrom<&WordJson> for Word {
    type Error = Error;

    fn try_from(w: &WordJson) -> Result<Word, Error> {
        Ok(Word::new(w.letters.clone(), w.k)?)
    }
}

/// Exponents split into the `x` and `y` blocks; the coefficient is a decimal
/// string so that it survives any JSON reader.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub coeff: String,
    pub x: Vec<u8>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub y: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub nx: usize,
    pub ny: usize,
    pub terms: Vec<TermJson>,
}

impl From<&Polynomial> for PolynomialJson {
    fn from(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .into_iter()
            .map(|(e, c)| TermJson { coeff: c.to_string(), x: e[..p.nx()].to_vec(), y: e[p.nx()..].to_vec() })
            .collect();
        Self { nx: p.nx(), ny: p.ny(), terms }
    }
}

impl TryFrom<&PolynomialJson> for Polynomial {
    type Error = Error;

    fn try_from(j: &PolynomialJson) -> Result<Polynomial, Error> {
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.x.len() != j.nx || t.y.len() != j.ny {
                return Err(Error::Parse(format!("term exponent lengths must be {} and {}", j.nx, j.ny)));
            }
            let c = BigInt::from_str(&t.coeff).map_err(|_| Error::Parse(format!("bad coefficient {:?}", t.coeff)))?;
            let mut e = t.x.clone();
            e.extend_from_slice(&t.y);
            terms.push((e, c));
        }
        Ok(Polynomial::from_terms(j.nx, j.ny, terms))
    }
}

/// `x_{1}^{2} x_{2} - 3 x_{1} y_{2} + 1`.
pub fn latex(p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (idx, (e, c)) in p.terms().into_iter().enumerate() {
        let sign = if c.is_negative() { "-" } else { "+" };
        if idx == 0 {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            let _ = write!(out, " {sign} ");
        }
        let mut vars = Vec::new();
        for (v, &a) in e.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let name = if v < p.nx() { format!("x_{{{}}}", v + 1) } else { format!("y_{{{}}}", v - p.nx() + 1) };
            vars.push(if a == 1 { name } else { format!("{name}^{{{a}}}") });
        }
        let mag = c.abs();
        match (vars.is_empty(), mag.is_one()) {
            (true, _) => out.push_str(&mag.to_string()),
            (false, true) => out.push_str(&vars.join(" ")),
            (false, false) => {
                let _ = write!(out, "{mag} {}", vars.join(" "));
            }
        }
    }
    out
}

/// Crosses on a `rows × cols` grid; row `r` carries the variable
/// `x_{labels[r-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipeDreamJson {
    pub rows: usize,
    pub cols: usize,
    pub crosses: Vec<[usize; 2]>,
    pub labels: Vec<usize>,
}

impl PipeDreamJson {
    /// Staircase of `w ∈ S_N` drawn on an `(N-1) × (N-1)` grid.
    pub fn from_permutation(p: &PipeDream, w: &Permutation) -> Self {
        let side = w.size().saturating_sub(1).max(1);
        Self { rows: side, cols: side, crosses: p.crosses().iter().map(|&(i, j)| [i, j]).collect(), labels: (1..=side).collect() }
    }

    pub fn from_word(p: &WordPipeDream) -> Self {
        Self { rows: p.n, cols: p.k, crosses: p.crosses.iter().map(|&(i, j)| [i, j]).collect(), labels: p.labels.clone() }
    }
}

/// Tile codes row by row; row `r` carries `x_{labels[r-1]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BpdJson {
    pub n: usize,
    pub k: usize,
    pub tiles: Vec<Vec<String>>,
    pub labels: Vec<usize>,
}

fn tile_codes(rows: Vec<Vec<Tile>>) -> Vec<Vec<String>> {
    rows.into_iter().map(|r| r.into_iter().map(|t| t.code().to_string()).collect()).collect()
}

impl BpdJson {
    pub fn from_permutation(b: &Bpd) -> Self {
        Self { n: b.size(), k: b.size(), tiles: tile_codes(b.rows()), labels: (1..=b.size()).collect() }
    }

    pub fn from_word(b: &WordBpd) -> Self {
        Self { n: b.n, k: b.k, tiles: tile_codes(b.rows()), labels: b.labels.clone() }
    }

    pub fn tile_rows(&self) -> Result<Vec<Vec<Tile>>, Error> {
        self.tiles
            .iter()
            .map(|r| r.iter().map(|c| Tile::from_code(c).ok_or_else(|| Error::Parse(format!("unknown tile code {c:?}")))).collect())
            .collect()
    }

    /// Square diagrams only; validates pipe connectivity.
    pub fn to_bpd(&self) -> Result<Bpd, Error> {
        Ok(Bpd::from_rows(self.tile_rows()?)?)
    }
}

/// Matrix entries as `"n"` or `"n/d"` strings.
pub fn matrix_to_json<F: Field>(m: &Matrix<F>, entry: impl Fn(&F) -> String) -> Vec<Vec<String>> {
    m.row_vecs().iter().map(|r| r.iter().map(&entry).collect()).collect()
}

pub fn rational_matrix_to_json(m: &Matrix<BigRational>) -> Vec<Vec<String>> {
    matrix_to_json(m, format_rational)
}

/// Accepts a JSON array of rows whose entries are integers or rational
/// strings.
pub fn rational_matrix_from_json(text: &str) -> Result<Matrix<BigRational>, Error> {
    let raw: Vec<Vec<serde_json::Value>> = serde_json::from_str(text)?;
    let mut rows = Vec::with_capacity(raw.len());
    for r in raw {
        let mut row = Vec::with_capacity(r.len());
        for v in r {
            let q = match &v {
                serde_json::Value::String(s) => parse_rational(s)?,
                serde_json::Value::Number(n) if n.is_i64() => BigRational::from_integer(BigInt::from(n.as_i64().unwrap())),
                _ => return Err(Error::Parse(format!("matrix entry {v} is neither an integer nor a rational string"))),
            };
            row.push(q);
        }
        rows.push(row);
    }
    Ok(Matrix::from_rows(rows)?)
}
