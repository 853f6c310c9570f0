//! Integer lattices in `Z^width` kept in row echelon form.
//!
//! Rows are sparse and inserted one at a time; a collision on a leading
//! column is resolved with an extended-gcd combination, so the pivot rows
//! always span the lattice generated so far. After every pivot change the
//! echelon is brought back to reduced Hermite form, which keeps coefficient
//! growth in check. Arithmetic runs in `i128` and restarts in `BigInt` on
//! the first overflow.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type SparseRow<T> = Vec<(u32, T)>;

/// Checked integer arithmetic for the echelon kernel.
pub trait LatticeInt: Clone + Debug + PartialEq {
    fn zero_value() -> Self;
    fn one_value() -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn neg(&self) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_floor(&self, o: &Self) -> Self;
    fn divides(&self, o: &Self) -> bool;
    /// `(g, s, t)` with `g = gcd(a, b) = s a + t b`, `g > 0`.
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)>;
    fn div_exact(&self, o: &Self) -> Self;
    fn from_big(b: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl LatticeInt for i128 {
    fn zero_value() -> Self {
        0
    }
    fn one_value() -> Self {
        1
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        o % self == 0
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if e.gcd < 0 {
            Some((e.gcd.checked_neg()?, e.x.checked_neg()?, e.y.checked_neg()?))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl LatticeInt for BigInt {
    fn zero_value() -> Self {
        Zero::zero()
    }
    fn one_value() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_floor(&self, o: &Self) -> Self {
        Integer::div_floor(self, o)
    }
    fn divides(&self, o: &Self) -> bool {
        Zero::is_zero(&(o % self))
    }
    fn ext_gcd(a: &Self, b: &Self) -> Option<(Self, Self, Self)> {
        let e = a.extended_gcd(b);
        if Signed::is_negative(&e.gcd) {
            Some((-e.gcd, -e.x, -e.y))
        } else {
            Some((e.gcd, e.x, e.y))
        }
    }
    fn div_exact(&self, o: &Self) -> Self {
        self / o
    }
    fn from_big(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// `alpha * x + beta * y`, zeros dropped.
fn combine<T: LatticeInt>(alpha: &T, x: &[(u32, T)], beta: &T, y: &[(u32, T)]) -> Option<SparseRow<T>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let (col, v) = match (x.get(i), y.get(j)) {
            (Some(a), Some(b)) if a.0 == b.0 => {
                i += 1;
                j += 1;
                (a.0, alpha.mul(&a.1)?.add(&beta.mul(&b.1)?)?)
            }
            (Some(a), Some(b)) if a.0 < b.0 => {
                i += 1;
                (a.0, alpha.mul(&a.1)?)
            }
            (Some(a), None) => {
                i += 1;
                (a.0, alpha.mul(&a.1)?)
            }
            (_, Some(b)) => {
                j += 1;
                (b.0, beta.mul(&b.1)?)
            }
            (None, None) => unreachable!(),
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    Some(out)
}

fn negate<T: LatticeInt>(row: &mut SparseRow<T>) -> Option<()> {
    for e in row.iter_mut() {
        e.1 = e.1.neg()?;
    }
    Some(())
}

fn entry<T: LatticeInt>(row: &[(u32, T)], col: u32) -> Option<&T> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|p| &row[p].1)
}

#[derive(Clone, Debug)]
struct Echelon<T> {
    /// `pivots[c]` is the row whose leading column is `c`.
    pivots: Vec<Option<SparseRow<T>>>,
}

impl<T: LatticeInt> Echelon<T> {
    fn new(width: usize) -> Self {
        Self { pivots: vec![None; width] }
    }

    /// Adds a row to the lattice. Returns whether the rank grew. The echelon
    /// stays in reduced Hermite form: entries above and to the right of every
    /// pivot lie in `[0, pivot)`.
    fn insert(&mut self, mut row: SparseRow<T>) -> Option<bool> {
        loop {
            let Some((c, a)) = row.first().cloned() else { return Some(false) };
            let c = c as usize;
            match self.pivots[c].take() {
                None => {
                    if a.is_negative() {
                        negate(&mut row)?;
                    }
                    self.place(c, row)?;
                    return Some(true);
                }
                Some(p) => {
                    let b = p[0].1.clone();
                    if b.divides(&a) {
                        let q = a.div_exact(&b).neg()?;
                        row = combine(&T::one_value(), &row, &q, &p)?;
                        self.pivots[c] = Some(p);
                    } else {
                        let (g, s, t) = T::ext_gcd(&b, &a)?;
                        let new_pivot = combine(&s, &p, &t, &row)?;
                        let rb = b.div_exact(&g);
                        let ra = a.div_exact(&g).neg()?;
                        row = combine(&rb, &row, &ra, &p)?;
                        self.place(c, new_pivot)?;
                    }
                }
            }
        }
    }

    /// Installs `row` as the pivot of column `c`, reducing its tail by the
    /// later pivots and the column-`c` entries of the earlier ones.
    fn place(&mut self, c: usize, mut row: SparseRow<T>) -> Option<()> {
        let mut idx = 1;
        while idx < row.len() {
            let (col, v) = row[idx].clone();
            if let Some(p) = &self.pivots[col as usize] {
                let q = v.div_floor(&p[0].1);
                if !q.is_zero() {
                    row = combine(&T::one_value(), &row, &q.neg()?, p)?;
                    // entries before `col` are untouched, so resume at `col`
                    idx = row.partition_point(|e| e.0 < col);
                    continue;
                }
            }
            idx += 1;
        }
        let lead = row[0].1.clone();
        for r in 0..c {
            let Some(other) = &self.pivots[r] else { continue };
            let Some(v) = entry(other, c as u32) else { continue };
            let q = v.div_floor(&lead);
            if q.is_zero() {
                continue;
            }
            let updated = combine(&T::one_value(), other, &q.neg()?, &row)?;
            self.pivots[r] = Some(updated);
        }
        self.pivots[c] = Some(row);
        Some(())
    }

    /// Reduces `row` against the pivots; `None` in the inner option means
    /// `row` is not in the lattice.
    fn reduce(&self, mut row: SparseRow<T>) -> Option<Option<()>> {
        loop {
            let Some((c, a)) = row.first().cloned() else { return Some(Some(())) };
            let Some(p) = &self.pivots[c as usize] else { return Some(None) };
            if !p[0].1.divides(&a) {
                return Some(None);
            }
            let q = a.div_exact(&p[0].1).neg()?;
            row = combine(&T::one_value(), &row, &q, p)?;
        }
    }

    /// Brings entries above each pivot into `[0, pivot)`.
    fn reduce_above(&mut self) -> Option<()> {
        let cols: Vec<usize> = (0..self.pivots.len()).filter(|&c| self.pivots[c].is_some()).collect();
        for (idx, &c) in cols.iter().enumerate() {
            let p = self.pivots[c].clone().unwrap();
            let lead = p[0].1.clone();
            for &r in &cols[..idx] {
                let row = self.pivots[r].as_ref().unwrap();
                let Some(v) = entry(row, c as u32) else { continue };
                let q = v.div_floor(&lead);
                if q.is_zero() {
                    continue;
                }
                let updated = combine(&T::one_value(), row, &q.neg()?, &p)?;
                self.pivots[r] = Some(updated);
            }
        }
        Some(())
    }

    fn rows(&self) -> impl Iterator<Item = &SparseRow<T>> {
        self.pivots.iter().flatten()
    }
}

#[derive(Clone, Debug)]
enum Store {
    Small(Echelon<i128>),
    Big(Echelon<BigInt>),
}

/// A sublattice of `Z^width` given by an echelon basis.
#[derive(Clone, Debug)]
pub struct IntegerLattice {
    width: usize,
    store: Store,
    generators: Vec<SparseRow<BigInt>>,
}

fn to_small(row: &[(u32, BigInt)]) -> Option<SparseRow<i128>> {
    row.iter().map(|(c, v)| v.to_i128().map(|x| (*c, x))).collect()
}

fn normalize(width: usize, row: Vec<(usize, BigInt)>) -> SparseRow<BigInt> {
    let mut row: Vec<(u32, BigInt)> =
        row.into_iter().filter(|(_, v)| !Zero::is_zero(v)).map(|(c, v)| {
            assert!(c < width, "column {c} outside width {width}");
            (c as u32, v)
        }).collect();
    row.sort_by_key(|e| e.0);
    let mut merged: SparseRow<BigInt> = Vec::with_capacity(row.len());
    for (c, v) in row {
        match merged.last_mut() {
            Some(last) if last.0 == c => last.1 += v,
            _ => merged.push((c, v)),
        }
    }
    merged.retain(|e| !Zero::is_zero(&e.1));
    merged
}

impl IntegerLattice {
    pub fn new(width: usize) -> Self {
        Self { width, store: Store::Small(Echelon::new(width)), generators: Vec::new() }
    }

    /// Lattice generated by sparse rows `(column, value)`.
    pub fn from_rows(width: usize, rows: impl IntoIterator<Item = Vec<(usize, BigInt)>>) -> Self {
        let mut l = Self::new(width);
        for r in rows {
            l.insert(r);
        }
        l
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Adds a generator; returns whether the rank grew.
    pub fn insert(&mut self, row: Vec<(usize, BigInt)>) -> bool {
        let row = normalize(self.width, row);
        self.generators.push(row.clone());
        if let Store::Small(e) = &mut self.store {
            if let Some(grew) = to_small(&row).and_then(|r| e.insert(r)) {
                return grew;
            }
            // overflow: redo everything in BigInt
            let mut big = Echelon::new(self.width);
            for g in &self.generators[..self.generators.len() - 1] {
                big.insert(g.clone()).unwrap();
            }
            self.store = Store::Big(big);
        }
        match &mut self.store {
            Store::Big(e) => e.insert(row).unwrap(),
            Store::Small(_) => unreachable!(),
        }
    }

    pub fn uses_big_integers(&self) -> bool {
        matches!(self.store, Store::Big(_))
    }

    pub fn rank(&self) -> usize {
        match &self.store {
            Store::Small(e) => e.rows().count(),
            Store::Big(e) => e.rows().count(),
        }
    }

    /// `(column, leading entry)` of each echelon row, by column.
    pub fn pivots(&self) -> Vec<(usize, BigInt)> {
        match &self.store {
            Store::Small(e) => e.rows().map(|r| (r[0].0 as usize, r[0].1.to_big())).collect(),
            Store::Big(e) => e.rows().map(|r| (r[0].0 as usize, r[0].1.clone())).collect(),
        }
    }

    pub fn contains(&self, row: Vec<(usize, BigInt)>) -> bool {
        let row = normalize(self.width, row);
        if let Store::Small(e) = &self.store {
            if let Some(res) = to_small(&row).and_then(|r| e.reduce(r)) {
                return res.is_some();
            }
            let mut big = Echelon::new(self.width);
            for r in e.rows() {
                big.pivots[r[0].0 as usize] = Some(r.iter().map(|(c, v)| (*c, v.to_big())).collect());
            }
            return big.reduce(row).unwrap().is_some();
        }
        match &self.store {
            Store::Big(e) => e.reduce(row).unwrap().is_some(),
            Store::Small(_) => unreachable!(),
        }
    }

    pub fn echelon_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        match &self.store {
            Store::Small(e) => e.rows().map(|r| r.iter().map(|(c, v)| (*c as usize, v.to_big())).collect()).collect(),
            Store::Big(e) => e.rows().map(|r| r.iter().map(|(c, v)| (*c as usize, v.clone())).collect()).collect(),
        }
    }

    /// Every generator of `self` lies in `other`.
    pub fn is_sublattice_of(&self, other: &IntegerLattice) -> bool {
        self.width == other.width && self.echelon_rows().into_iter().all(|r| other.contains(r))
    }

    pub fn same_lattice(&self, other: &IntegerLattice) -> bool {
        self.rank() == other.rank() && self.is_sublattice_of(other) && other.is_sublattice_of(self)
    }

    /// Canonical Hermite normal form: positive pivots, entries above each
    /// pivot reduced into `[0, pivot)`.
    pub fn hermite_normal_form(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut big = Echelon::<BigInt>::new(self.width);
        for r in self.echelon_rows() {
            let c = r[0].0;
            big.pivots[c] = Some(r.into_iter().map(|(c, v)| (c as u32, v)).collect());
        }
        big.reduce_above().unwrap();
        big.rows().map(|r| r.iter().map(|(c, v)| (*c as usize, v.clone())).collect()).collect()
    }

    /// Smith invariants of a basis matrix, all of them (including ones).
    pub fn smith_invariants(&self) -> Vec<BigInt> {
        let pivots = self.pivots();
        // product of unit pivots is a unit r×r minor, forcing every invariant to 1
        if pivots.iter().all(|(_, p)| p.is_one()) {
            return vec![BigInt::one(); pivots.len()];
        }
        smith_diagonal(self.echelon_rows(), self.width)
    }

    /// `Z^width / L` has no torsion.
    pub fn quotient_is_torsion_free(&self) -> bool {
        self.smith_invariants().iter().all(|d| d.is_one())
    }
}

/// Dense Smith normal form diagonal of an `r × width` matrix of full row rank.
fn smith_diagonal(rows: Vec<Vec<(usize, BigInt)>>, width: usize) -> Vec<BigInt> {
    let mut m: Vec<Vec<BigInt>> = rows
        .into_iter()
        .map(|r| {
            let mut dense = vec![BigInt::zero(); width];
            for (c, v) in r {
                dense[c] = v;
            }
            dense
        })
        .collect();
    let r = m.len();
    let mut diag = Vec::with_capacity(r);
    for t in 0..r {
        // move a nonzero entry of least magnitude to (t, t) until it divides its row and column
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..width {
                    if !Zero::is_zero(&m[i][j]) && best.map_or(true, |(bi, bj)| m[i][j].abs() < m[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return diag };
            m.swap(t, bi);
            for row in m.iter_mut() {
                row.swap(t, bj);
            }
            let p = m[t][t].clone();
            let mut clean = true;
            for i in t + 1..r {
                let q = Integer::div_floor(&m[i][t], &p);
                if !Zero::is_zero(&q) {
                    for j in t..width {
                        let d = &q * &m[t][j];
                        m[i][j] -= d;
                    }
                }
                clean &= Zero::is_zero(&m[i][t]);
            }
            for j in t + 1..width {
                let q = Integer::div_floor(&m[t][j], &p);
                if !Zero::is_zero(&q) {
                    for i in t..r {
                        let d = &q * &m[i][t];
                        m[i][j] -= d;
                    }
                }
                clean &= Zero::is_zero(&m[t][j]);
            }
            if !clean {
                continue;
            }
            // divisibility of the remaining block
            let bad = (t + 1..r).flat_map(|i| (t + 1..width).map(move |j| (i, j))).find(|&(i, j)| {
                !Zero::is_zero(&(&m[i][j] % &p))
            });
            match bad {
                Some((i, _)) => {
                    for j in t..width {
                        let v = m[i][j].clone();
                        m[t][j] += v;
                    }
                }
                None => {
                    diag.push(p.abs());
                    break;
                }
            }
        }
    }
    diag
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[i64]) -> Vec<(usize, BigInt)> {
        v.iter().enumerate().filter(|(_, &x)| x != 0).map(|(c, &x)| (c, BigInt::from(x))).collect()
    }

    #[test]
    fn gcd_combination_and_torsion() {
        let l = IntegerLattice::from_rows(2, [row(&[2, 1]), row(&[4, 0])]);
        assert_eq!(l.rank(), 2);
        let pivots: Vec<_> = l.pivots().into_iter().map(|(_, p)| p).collect();
        assert_eq!(pivots, [BigInt::from(2), BigInt::from(2)]);
        assert_eq!(l.smith_invariants(), [BigInt::from(1), BigInt::from(4)]);
        assert!(!l.quotient_is_torsion_free());
        let free = IntegerLattice::from_rows(2, [row(&[2, 1])]);
        assert!(free.quotient_is_torsion_free());
        assert!(free.contains(row(&[-4, -2])));
        assert!(!free.contains(row(&[1, 0])));
    }

    #[test]
    fn hermite_form_is_canonical() {
        let a = IntegerLattice::from_rows(3, [row(&[3, 1, 4]), row(&[1, 5, 9]), row(&[2, 6, 5])]);
        let b = IntegerLattice::from_rows(3, [row(&[4, 6, 13]), row(&[1, 5, 9]), row(&[-1, 5, 1])]);
        assert!(a.same_lattice(&b));
        let h = a.hermite_normal_form();
        assert_eq!(h, b.hermite_normal_form());
        // frozen from an independent membership search over the inverse matrix
        let expected = [row(&[1, 1, 41]), row(&[0, 2, 29]), row(&[0, 0, 45])];
        assert_eq!(h, expected);
        assert_eq!(a.smith_invariants(), [BigInt::from(1), BigInt::from(1), BigInt::from(90)]);
        assert!(!a.quotient_is_torsion_free());
    }

    #[test]
    fn overflow_falls_back_to_big_integers() {
        let huge: BigInt = BigInt::from(i128::MAX) * BigInt::from(4);
        let l = IntegerLattice::from_rows(2, [vec![(0, huge.clone()), (1, BigInt::one())], row(&[3, 1])]);
        assert!(l.uses_big_integers());
        assert_eq!(l.rank(), 2);
        let big = IntegerLattice::from_rows(2, [vec![(0, BigInt::from(i128::MAX))], vec![(0, BigInt::from(i128::MAX - 1))]]);
        assert_eq!(big.pivots()[0].1, BigInt::one());
    }
}
