//! Pattern matrices and the column-by-column reduction of `k × n` matrices
//! to their canonical `U × T` coset representative.
//!
//! `U` is the lower unitriangular group acting on the left and `T` the
//! torus scaling columns on the right. Matrix indices are 0-based; words
//! and pattern coordinates are 1-based.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use crate::combinat::Word;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PatternEntry {
    Zero,
    One,
    Star,
}

impl PatternEntry {
    pub fn glyph(self) -> char {
        match self {
            PatternEntry::Zero => '0',
            PatternEntry::One => '1',
            PatternEntry::Star => '*',
        }
    }
}

/// A `k × n` array over `{0, 1, *}` with exactly one `1` per column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatrix {
    k: usize,
    n: usize,
    entries: Vec<PatternEntry>,
}

impl PatternMatrix {
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Entry at row `i`, column `j`, both 1-indexed.
    pub fn get(&self, i: usize, j: usize) -> PatternEntry {
        self.entries[(i - 1) * self.n + (j - 1)]
    }

    pub fn rows(&self) -> Vec<Vec<PatternEntry>> {
        self.entries.chunks(self.n.max(1)).take(self.k).map(|r| r.to_vec()).collect()
    }

    pub fn star_count(&self) -> usize {
        self.entries.iter().filter(|&&e| e == PatternEntry::Star).count()
    }

    /// 1-indexed `(row, column)` of every star, row-major.
    pub fn stars(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.k {
            for j in 1..=self.n {
                if self.get(i, j) == PatternEntry::Star {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

impl fmt::Display for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.k {
            let mut line = String::new();
            for j in 1..=self.n {
                if j > 1 {
                    line.push(' ');
                }
                line.push(self.get(i, j).glyph());
            }
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Pivots at `(w_j, j)`. An initial column `j` gets stars at rows `i < w_j`
/// whose letter appeared before `j`; a redundant column gets stars at rows
/// whose letter first appeared before the letter `w_j` did.
pub fn pattern_matrix(w: &Word) -> PatternMatrix {
    let (k, n) = (w.k(), w.len());
    let first: Vec<usize> = (0..=k).map(|a| if a == 0 { usize::MAX } else { w.first_occurrence(a).unwrap_or(usize::MAX) }).collect();
    let mut entries = vec![PatternEntry::Zero; k * n];
    for j in 1..=n {
        let wj = w.at(j);
        let initial = first[wj] == j;
        entries[(wj - 1) * n + (j - 1)] = PatternEntry::One;
        for i in 1..=k {
            let star = if initial { i < wj && first[i] < j } else { first[i] < first[wj] };
            if star {
                entries[(i - 1) * n + (j - 1)] = PatternEntry::Star;
            }
        }
    }
    PatternMatrix { k, n, entries }
}

/// Exact field arithmetic. Elements carry whatever context they need (the
/// modulus for `Fp`), so constants are made from an existing element.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_int_like(&self, v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero; callers test first.
    fn inv(&self) -> Self;
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        Zero::zero()
    }
    fn one_like(&self) -> Self {
        One::one()
    }
    fn from_int_like(&self, v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
}

/// Residue modulo an odd prime below `2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    p: u64,
}

/// Accepts odd primes below `2^32`.
pub fn check_modulus(p: u64) -> Result<()> {
    let prime = p > 2 && p <= u32::MAX as u64 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0);
    if prime {
        Ok(())
    } else {
        Err(Error::BadModulus(p))
    }
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Result<Self> {
        check_modulus(p)?;
        Ok(Self::raw(v, p))
    }

    fn raw(v: i64, p: u64) -> Self {
        Self { value: v.rem_euclid(p as i64) as u64, p }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut e: u64) -> Self {
        let mut base = self.value;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        Self { value: acc, p: self.p }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Self { value: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Self { value: 1, p: self.p }
    }
    fn from_int_like(&self, v: i64) -> Self {
        Self::raw(v, self.p)
    }
    fn is_zero(&self) -> bool {
        self.value == 0
    }
    fn add(&self, o: &Self) -> Self {
        Self { value: (self.value + o.value) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Self { value: (self.value + self.p - o.value) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Self { value: self.value * o.value % self.p, p: self.p }
    }
    fn neg(&self) -> Self {
        Self { value: (self.p - self.value) % self.p, p: self.p }
    }
    fn inv(&self) -> Self {
        assert!(self.value != 0, "inverse of zero");
        self.pow(self.p - 2)
    }
}

/// Dense row-major matrix over a field.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 {
            return Err(Error::Shape("empty matrix".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Integer matrix mapped into the field of `template`.
    pub fn from_integers(rows: &[Vec<i64>], template: &F) -> Result<Self> {
        Self::from_rows(rows.iter().map(|row| row.iter().map(|&v| template.from_int_like(v)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_vecs(&self) -> Vec<Vec<F>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn identity(size: usize, template: &F) -> Self {
        let mut data = vec![template.zero_like(); size * size];
        for i in 0..size {
            data[i * size + i] = template.one_like();
        }
        Self { rows: size, cols: size, data }
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::Shape("inner dimensions differ".into()));
        }
        let zero = self.data[0].zero_like();
        let mut data = vec![zero; self.rows * o.cols];
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let cell = &mut data[i * o.cols + j];
                    *cell = cell.add(&a.mul(o.get(t, j)));
                }
            }
        }
        Ok(Self { rows: self.rows, cols: o.cols, data })
    }

    /// Multiplies column `j` by `s[j]`.
    pub fn scale_columns(&self, s: &[F]) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows {
            for (j, f) in s.iter().enumerate() {
                out.data[i * self.cols + j] = self.get(i, j).mul(f);
            }
        }
        out
    }

    /// First zero column, 1-indexed.
    pub fn zero_column(&self) -> Option<usize> {
        (0..self.cols).find(|&j| (0..self.rows).all(|i| self.get(i, j).is_zero())).map(|j| j + 1)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.row_vecs())
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, f: &F) {
        for j in 0..self.cols {
            let v = self.get(target, j).add(&f.mul(self.get(source, j)));
            self.set(target, j, v);
        }
    }

    fn scale_column(&mut self, j: usize, f: &F) {
        for i in 0..self.rows {
            let v = self.get(i, j).mul(f);
            self.set(i, j, v);
        }
    }
}

impl Matrix<BigRational> {
    /// Image modulo `p`; `None` when a denominator vanishes there.
    pub fn reduce_mod(&self, p: u64) -> Result<Option<Matrix<Fp>>> {
        check_modulus(p)?;
        let mut data = Vec::with_capacity(self.data.len());
        for q in &self.data {
            match rational_mod(q, p) {
                Some(v) => data.push(v),
                None => return Ok(None),
            }
        }
        Ok(Some(Matrix { rows: self.rows, cols: self.cols, data }))
    }
}

/// `q mod p`, or `None` if `p` divides the denominator.
pub fn rational_mod(q: &BigRational, p: u64) -> Option<Fp> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_i64()?;
    let den = q.denom().mod_floor(&pb).to_i64()?;
    if den == 0 {
        return None;
    }
    let den = Fp::raw(den, p);
    Some(Fp::raw(num, p).mul(&den.inv()))
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.data.chunks(self.cols) {
            let cells: Vec<String> = row.iter().map(|x| alloc::format!("{x}")).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Rank by Gaussian elimination over the field.
pub fn rank_of_rows<F: Field>(mut rows: Vec<Vec<F>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let inv = rows[rank][c].inv();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = rows[r][c].mul(&inv);
            for t in c..cols {
                let v = rows[r][t].sub(&f.mul(&rows[rank][t]));
                rows[r][t] = v;
            }
        }
        rank += 1;
    }
    rank
}

/// Output of the reduction: the canonical representative, its word, and
/// the column of the working matrix at the moment each pivot was chosen.
#[derive(Clone, Debug, PartialEq)]
pub struct Reduction<F> {
    pub matrix: Matrix<F>,
    pub word: Word,
    pub decisions: Vec<Vec<F>>,
}

/// Column by column: a column with a nonzero entry in an unused row pivots
/// on the smallest such row, clears the rows below it and is scaled to a
/// unit pivot. Otherwise the column is redundant and is scaled so that the
/// nonzero initial row whose letter appeared last reads 1.
pub fn reduction<F: Field>(m: &Matrix<F>) -> Result<Reduction<F>> {
    if let Some(j) = m.zero_column() {
        return Err(Error::ZeroColumn(j));
    }
    let k = m.nrows();
    let mut work = m.clone();
    let mut used = vec![false; k];
    let mut order: Vec<usize> = Vec::new();
    let mut letters = Vec::with_capacity(m.ncols());
    let mut decisions = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        decisions.push(work.column(j));
        let fresh = (0..k).find(|&i| !used[i] && !work.get(i, j).is_zero());
        let pivot = match fresh {
            Some(i) => {
                let inv = work.get(i, j).inv();
                for r in i + 1..k {
                    if !work.get(r, j).is_zero() {
                        let f = work.get(r, j).mul(&inv).neg();
                        work.add_row_multiple(r, i, &f);
                    }
                }
                used[i] = true;
                order.push(i);
                i
            }
            None => *order.iter().rev().find(|&&i| !work.get(i, j).is_zero()).ok_or(Error::NoInitialEntry(j + 1))?,
        };
        let inv = work.get(pivot, j).inv();
        work.scale_column(j, &inv);
        letters.push(pivot + 1);
    }
    Ok(Reduction { matrix: work, word: Word::new(letters, k)?, decisions })
}

/// Agrees with `PM(w)` at every `0` and `1`; stars are free.
pub fn fits_pattern<F: Field>(m: &Matrix<F>, w: &Word) -> bool {
    if m.nrows() != w.k() || m.ncols() != w.len() {
        return false;
    }
    let pm = pattern_matrix(w);
    (0..m.nrows()).all(|i| {
        (0..m.ncols()).all(|j| {
            let x = m.get(i, j);
            match pm.get(i + 1, j + 1) {
                PatternEntry::Zero => x.is_zero(),
                PatternEntry::One => *x == x.one_like(),
                PatternEntry::Star => true,
            }
        })
    })
}

/// Entry range of every sampler.
pub const SAMPLE_BOUND: i64 = 9;

fn sample_entry<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    rng.gen_range(-SAMPLE_BOUND..=SAMPLE_BOUND)
}

fn sample_nonzero<R: Rng + ?Sized>(rng: &mut R) -> i64 {
    loop {
        let v = sample_entry(rng);
        if v != 0 {
            return v;
        }
    }
}

/// `k × n` integers in `[-9, 9]`; zero columns are redrawn.
pub fn random_integer_matrix<R: Rng + ?Sized>(k: usize, n: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let mut rows = vec![vec![0i64; n]; k];
    for j in 0..n {
        loop {
            for row in rows.iter_mut() {
                row[j] = sample_entry(rng);
            }
            if rows.iter().any(|row| row[j] != 0) {
                break;
            }
        }
    }
    rows
}

/// Product of random `k × r` and `r × n` integer matrices, so the rank is
/// at most `r`; a zero left factor and zero columns are redrawn.
pub fn random_low_rank_matrix<R: Rng + ?Sized>(k: usize, n: usize, r: usize, rng: &mut R) -> Vec<Vec<i64>> {
    let a: Vec<Vec<i64>> = loop {
        let a: Vec<Vec<i64>> = (0..k).map(|_| (0..r).map(|_| sample_entry(rng)).collect()).collect();
        if a.iter().flatten().any(|&x| x != 0) {
            break a;
        }
    };
    let mut out = vec![vec![0i64; n]; k];
    for j in 0..n {
        loop {
            let b: Vec<i64> = (0..r).map(|_| sample_entry(rng)).collect();
            for (i, row) in a.iter().enumerate() {
                out[i][j] = row.iter().zip(&b).map(|(x, y)| x * y).sum();
            }
            if out.iter().any(|row| row[j] != 0) {
                break;
            }
        }
    }
    out
}

/// Random element of `U`: unit diagonal, entries below it in `[-9, 9]`.
pub fn random_unitriangular<F: Field, R: Rng + ?Sized>(k: usize, template: &F, rng: &mut R) -> Matrix<F> {
    let mut u = Matrix::identity(k, template);
    for i in 0..k {
        for j in 0..i {
            u.set(i, j, template.from_int_like(sample_entry(rng)));
        }
    }
    u
}

/// Random element of `T`: nonzero integers in `[-9, 9]`. Over `F_p` with
/// `p ≤ 7` a draw may still vanish, so it is redrawn until invertible there.
pub fn random_torus<F: Field, R: Rng + ?Sized>(n: usize, template: &F, rng: &mut R) -> Vec<F> {
    (0..n)
        .map(|_| loop {
            let v = template.from_int_like(sample_nonzero(rng));
            if !v.is_zero() {
                break v;
            }
        })
        .collect()
}

/// The quantities the cell-dimension statements relate, side by side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellReport {
    pub word: Word,
    pub n: usize,
    pub k: usize,
    /// `ℓ(std(conv(w)))`.
    pub length: usize,
    pub star_count: usize,
    /// `k·n − ℓ`, claimed to equal the star count.
    pub kn_minus_length: i64,
    /// `n(k−1) − ℓ`, claimed to equal the cell dimension.
    pub formula_dimension: i64,
    /// `C(n,2) + stars`, claimed to equal the cell dimension.
    pub binomial_plus_stars: i64,
    /// Generic rank of the tangent span of `U·P_w·T`, minus `n`.
    pub empirical_dimension: usize,
    pub prime: u64,
}

impl CellReport {
    /// `(label, lhs, rhs, equal)` for each stated equality.
    pub fn claims(&self) -> Vec<(&'static str, i64, i64, bool)> {
        let stars = self.star_count as i64;
        let emp = self.empirical_dimension as i64;
        let pairs = [
            ("stars = k*n - length", stars, self.kn_minus_length),
            ("binom(n,2) + stars = n(k-1) - length", self.binomial_plus_stars, self.formula_dimension),
            ("empirical = n(k-1) - length", emp, self.formula_dimension),
            ("empirical = binom(n,2) + stars", emp, self.binomial_plus_stars),
            ("empirical = stars", emp, stars),
        ];
        pairs.into_iter().map(|(l, a, b)| (l, a, b, a == b)).collect()
    }

    pub fn consistent(&self) -> bool {
        self.claims().iter().all(|c| c.3)
    }
}

/// Default prime for the empirical dimension.
pub const DEFAULT_PRIME: u64 = 10007;

/// Evaluates every dimension expression for `C_w` and estimates the true
/// dimension over `F_p`. At a sample point `M = u·m(s)` with `m(s)` fitting
/// `PM(w)`, the map `(u', s, t) ↦ u'·m(s)·t` is affine in each coordinate,
/// so the differences along `E_ab` (a > b) acting on the left, along each
/// star, and along each column scaling span its tangent space exactly. The
/// torus fibre accounts for `n` of those dimensions. The largest rank over
/// `trials` random points is reported.
pub fn cell_dimension_report<R: Rng + ?Sized>(w: &Word, p: u64, trials: usize, rng: &mut R) -> Result<CellReport> {
    check_modulus(p)?;
    let (n, k) = (w.len(), w.k());
    let length = w.convexify().standardize().length();
    let pm = pattern_matrix(w);
    let stars = pm.stars();
    let template = Fp::raw(0, p);
    let mut best = 0usize;
    for _ in 0..trials.max(1) {
        let mut m = Matrix { rows: k, cols: n, data: vec![template; k * n] };
        for i in 1..=k {
            for j in 1..=n {
                match pm.get(i, j) {
                    PatternEntry::One => m.set(i - 1, j - 1, template.one_like()),
                    PatternEntry::Star => m.set(i - 1, j - 1, Fp::raw(rng.gen_range(0..p as i64), p)),
                    PatternEntry::Zero => {}
                }
            }
        }
        let u = random_unitriangular(k, &template, rng);
        let point = u.mul(&m)?;
        let mut tangents: Vec<Vec<Fp>> = Vec::new();
        for a in 0..k {
            for b in 0..a {
                // row a gains row b of the point
                let mut v = vec![template; k * n];
                for j in 0..n {
                    v[a * n + j] = *point.get(b, j);
                }
                tangents.push(v);
            }
        }
        for &(i, j) in &stars {
            // u · E_ij
            let mut v = vec![template; k * n];
            for r in 0..k {
                v[r * n + (j - 1)] = *u.get(r, i - 1);
            }
            tangents.push(v);
        }
        for j in 0..n {
            let mut v = vec![template; k * n];
            for r in 0..k {
                v[r * n + j] = *point.get(r, j);
            }
            tangents.push(v);
        }
        best = best.max(rank_of_rows(tangents).saturating_sub(n));
    }
    let (ni, ki, li) = (n as i64, k as i64, length as i64);
    Ok(CellReport {
        word: w.clone(),
        n,
        k,
        length,
        star_count: stars.len(),
        kn_minus_length: ki * ni - li,
        formula_dimension: ni * (ki - 1) - li,
        binomial_plus_stars: ni * (ni - 1) / 2 + stars.len() as i64,
        empirical_dimension: best,
        prime: p,
    })
}

/// Parses `"a"`, `"-a"` or `"a/b"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Shape(alloc::format!("not a rational: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

/// `"n"` for integers, `"n/d"` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        alloc::format!("{}", q.numer())
    } else if q.is_negative() {
        alloc::format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        alloc::format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    fn qmat(rows: &[&[&str]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|s| q(s)).collect()).collect()).unwrap()
    }

    #[test]
    fn pattern_matrix_of_worked_word() {
        let w = Word::parse("2442343", Some(4)).unwrap();
        let pm = pattern_matrix(&w);
        assert_eq!(pm.to_string(), "0 0 0 0 0 0 0\n1 * * 1 * * *\n0 0 0 0 1 0 1\n0 1 1 0 0 1 *\n");
        assert_eq!(pm.star_count(), 6);
    }

    #[test]
    fn star_counts_of_monotone_words() {
        // every earlier letter is smaller in 1234, none is in 4321
        assert_eq!(pattern_matrix(&Word::parse("1234", None).unwrap()).star_count(), 6);
        assert_eq!(pattern_matrix(&Word::parse("4321", None).unwrap()).star_count(), 0);
    }

    #[test]
    fn worked_reduction() {
        let m = Matrix::from_integers(&[vec![1, 2, 3, 1, 1], vec![2, 1, 3, 0, -1], vec![3, -3, 0, 0, 3]], &BigRational::zero()).unwrap();
        let red = reduction(&m).unwrap();
        assert_eq!(red.word.to_string(), "12233");
        let expected = qmat(&[&["1", "-2/3", "-1", "1/3", "1/9"], &["0", "1", "1", "-2/3", "-1/3"], &["0", "0", "0", "1", "1"]]);
        assert_eq!(red.matrix, expected);
        assert!(fits_pattern(&red.matrix, &red.word));
    }

    #[test]
    fn identity_reduces_to_itself() {
        let m = Matrix::from_integers(&[vec![5, 0, 0], vec![0, -2, 0], vec![0, 0, 7]], &BigRational::zero()).unwrap();
        let red = reduction(&m).unwrap();
        assert_eq!(red.word.to_string(), "123");
        assert_eq!(red.matrix, Matrix::identity(3, &BigRational::zero()));
    }

    #[test]
    fn zero_column_is_rejected() {
        let m = Matrix::from_integers(&[vec![1, 0], vec![2, 0]], &BigRational::zero()).unwrap();
        assert_eq!(reduction(&m).unwrap_err(), Error::ZeroColumn(2));
    }

    #[test]
    fn redundant_column_uses_latest_appearing_letter() {
        // letters 2 then 1 appear; a column nonzero in both rows takes 1
        let m = Matrix::from_integers(&[vec![0, 1, 3], vec![1, 0, 4]], &BigRational::zero()).unwrap();
        let red = reduction(&m).unwrap();
        assert_eq!(red.word.to_string(), "211");
        assert!(fits_pattern(&red.matrix, &red.word));
    }

    #[test]
    fn fits_pattern_trivia() {
        let w = Word::parse("2442343", Some(4)).unwrap();
        let zero = Matrix::from_integers(&vec![vec![0; 7]; 4], &BigRational::zero()).unwrap();
        assert!(!fits_pattern(&zero, &w));
        let pm = pattern_matrix(&w);
        let rows = pm.rows().iter().map(|r| r.iter().map(|&e| i64::from(e == PatternEntry::One)).collect()).collect::<Vec<_>>();
        let m = Matrix::from_integers(&rows, &BigRational::zero()).unwrap();
        assert!(fits_pattern(&m, &w));
    }

    #[test]
    fn fp_arithmetic() {
        assert!(check_modulus(2).is_err() && check_modulus(9).is_err());
        let a = Fp::new(3, 7).unwrap();
        assert_eq!(a.mul(&a.inv()).value(), 1);
        assert_eq!(Fp::new(-1, 7).unwrap().value(), 6);
        assert_eq!(rational_mod(&q("1/3"), 7).unwrap().value(), 5);
        assert!(rational_mod(&q("1/7"), 7).is_none());
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "5", "-2/3", "1/9"] {
            assert_eq!(format_rational(&q(s)), s);
        }
        assert_eq!(format_rational(&q("4/-6")), "-2/3");
        assert!(parse_rational("1/0").is_err());
    }

    #[test]
    fn cell_report_of_worked_word() {
        let w = Word::parse("2442343", Some(4)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = cell_dimension_report(&w, DEFAULT_PRIME, 3, &mut rng).unwrap();
        assert_eq!((r.star_count, r.kn_minus_length, r.formula_dimension, r.binomial_plus_stars), (6, 16, 9, 27));
        assert!(!r.consistent());
        assert_eq!((r.length, r.empirical_dimension), (12, 9));
    }

    #[test]
    fn empirical_dimension_tracks_length_formula() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            for k in 1..=3 {
                for w in crate::combinat::all_words(n, k) {
                    let r = cell_dimension_report(&w, DEFAULT_PRIME, 2, &mut rng).unwrap();
                    assert_eq!(r.empirical_dimension as i64, r.formula_dimension, "{w}");
                }
            }
        }
    }

    #[test]
    fn binomial_form_holds_for_permutations() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for w in crate::combinat::Permutation::all(4) {
            let r = cell_dimension_report(&Word::from_permutation(&w), DEFAULT_PRIME, 1, &mut rng).unwrap();
            assert_eq!(r.binomial_plus_stars, r.formula_dimension, "{w}");
        }
    }
}
