//! Sparse multivariate polynomials with big-integer coefficients in two
//! variable blocks `x_1..x_nx` and `y_1..y_ny`, divided differences, and the
//! Schubert / Grothendieck families of permutations and words.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::combinat::{Permutation, Word};
use crate::error::{Error, Result};

mod packed;

use packed::{Layout, PackedPoly};

/// Exponent vector: the x-block followed by the y-block.
pub type Exponents = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    nx: usize,
    ny: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl Polynomial {
    pub fn zero(nx: usize, ny: usize) -> Self {
        Self { nx, ny, terms: BTreeMap::new() }
    }

    pub fn constant(c: impl Into<BigInt>, nx: usize, ny: usize) -> Self {
        let mut p = Self::zero(nx, ny);
        p.add_term(vec![0; nx + ny], c.into());
        p
    }

    pub fn one(nx: usize, ny: usize) -> Self {
        Self::constant(1, nx, ny)
    }

    /// `x_i` (1-indexed).
    pub fn x(i: usize, nx: usize, ny: usize) -> Self {
        assert!(i >= 1 && i <= nx, "x_{i} outside arity {nx}");
        let mut e = vec![0; nx + ny];
        e[i - 1] = 1;
        Self::monomial(e, BigInt::one(), nx, ny)
    }

    /// `y_j` (1-indexed).
    pub fn y(j: usize, nx: usize, ny: usize) -> Self {
        assert!(j >= 1 && j <= ny, "y_{j} outside arity {ny}");
        let mut e = vec![0; nx + ny];
        e[nx + j - 1] = 1;
        Self::monomial(e, BigInt::one(), nx, ny)
    }

    pub fn monomial(exps: Exponents, c: BigInt, nx: usize, ny: usize) -> Self {
        assert_eq!(exps.len(), nx + ny);
        let mut p = Self::zero(nx, ny);
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nx: usize, ny: usize, terms: impl IntoIterator<Item = (Exponents, BigInt)>) -> Self {
        let mut p = Self::zero(nx, ny);
        for (e, c) in terms {
            assert_eq!(e.len(), nx + ny, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u8]) -> BigInt {
        self.terms.get(exps).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, exps: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            alloc::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Terms in canonical order: ascending total degree, and within a degree
    /// lexicographically descending on `(x-block, y-block)`.
    pub fn terms(&self) -> Vec<(&Exponents, &BigInt)> {
        let mut t: Vec<_> = self.terms.iter().collect();
        t.sort_by(|a, b| canonical_cmp(a.0, b.0));
        t
    }

    pub fn raw_terms(&self) -> impl Iterator<Item = (&Exponents, &BigInt)> {
        self.terms.iter()
    }

    /// Re-embeds into a larger (or equal) arity.
    pub fn with_arity(&self, nx: usize, ny: usize) -> Self {
        if nx == self.nx && ny == self.ny {
            return self.clone();
        }
        assert!(nx >= self.max_x_index() && ny >= self.max_y_index(), "arity would drop variables");
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; nx + ny];
                for i in 0..self.nx.min(nx) {
                    f[i] = e[i];
                }
                for j in 0..self.ny.min(ny) {
                    f[nx + j] = e[self.nx + j];
                }
                (f, c.clone())
            })
            .collect();
        Self { nx, ny, terms }
    }

    /// Largest `i` such that `x_i` occurs (0 if none).
    pub fn max_x_index(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e[..self.nx].iter().rposition(|&a| a > 0).map(|p| p + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn max_y_index(&self) -> usize {
        self.terms
            .keys()
            .filter_map(|e| e[self.nx..].iter().rposition(|&a| a > 0).map(|p| p + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn total_degree(e: &[u8]) -> usize {
        e.iter().map(|&a| a as usize).sum()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| Self::total_degree(e)).max()
    }

    pub fn lowest_degree(&self) -> Option<usize> {
        self.terms.keys().map(|e| Self::total_degree(e)).min()
    }

    pub fn homogeneous_component(&self, d: usize) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| Self::total_degree(e) == d)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self { nx: self.nx, ny: self.ny, terms }
    }

    pub fn lowest_degree_component(&self) -> Self {
        match self.lowest_degree() {
            Some(d) => self.homogeneous_component(d),
            None => self.clone(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.degree() == self.lowest_degree()
    }

    /// Sets every `y_j` to zero and drops the y-block.
    pub fn drop_y(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[self.nx..].iter().all(|&a| a == 0))
            .map(|(e, c)| (e[..self.nx].to_vec(), c.clone()))
            .collect();
        Self { nx: self.nx, ny: 0, terms }
    }

    /// Substitutes `x_r ↦ x_{target[r-1]}`; `target` must be injective into
    /// `1..=nx`.
    pub fn rename_x(&self, target: &[usize]) -> Self {
        assert!(target.len() >= self.max_x_index());
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = vec![0; self.nx + self.ny];
                for (r, &a) in e[..self.nx].iter().enumerate() {
                    if a > 0 {
                        f[target[r] - 1] = a;
                    }
                }
                f[self.nx..].copy_from_slice(&e[self.nx..]);
                (f, c.clone())
            })
            .collect();
        Self { nx: self.nx, ny: self.ny, terms }
    }

    /// `s_i` acting on the x-block: swaps `x_i` and `x_{i+1}`.
    pub fn swap_x(&self, i: usize) -> Self {
        assert!(i + 1 <= self.nx);
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut f = e.clone();
                f.swap(i - 1, i);
                (f, c.clone())
            })
            .collect();
        Self { nx: self.nx, ny: self.ny, terms }
    }

    /// `∂_i f = (f - s_i f) / (x_i - x_{i+1})`, divided exactly by synthetic
    /// division in `x_i` over `Z[x_{i+1}, ...]`.
    pub fn divided_difference(&self, i: usize) -> Result<Self> {
        if i == 0 || i + 1 > self.nx {
            return Err(Error::IndexOutOfRange { index: i, size: self.nx });
        }
        let numerator = self - &self.swap_x(i);
        divide_by_difference(&numerator, i)
    }

    /// Isobaric divided difference `π_i f = ∂_i((1 - x_{i+1}) f)`.
    pub fn isobaric_divided_difference(&self, i: usize) -> Result<Self> {
        if i == 0 || i + 1 > self.nx {
            return Err(Error::IndexOutOfRange { index: i, size: self.nx });
        }
        let factor = &Self::one(self.nx, self.ny) - &Self::x(i + 1, self.nx, self.ny);
        (&factor * self).divided_difference(i)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nx, self.ny);
        }
        let terms = self.terms.iter().map(|(e, d)| (e.clone(), d * c)).collect();
        Self { nx: self.nx, ny: self.ny, terms }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nx, self.ny);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn unify(a: &Self, b: &Self) -> (usize, usize) {
        (a.nx.max(b.nx), a.ny.max(b.ny))
    }
}

fn canonical_cmp(a: &[u8], b: &[u8]) -> Ordering {
    Polynomial::total_degree(a).cmp(&Polynomial::total_degree(b)).then_with(|| b.cmp(a))
}

fn divide_by_difference(num: &Polynomial, i: usize) -> Result<Polynomial> {
    let (a_idx, b_idx) = (i - 1, i);
    // rest monomial -> (power of x_i) -> (power of x_{i+1}) -> coefficient
    let mut grouped: BTreeMap<Exponents, BTreeMap<u8, BTreeMap<u8, BigInt>>> = BTreeMap::new();
    for (e, c) in &num.terms {
        let mut rest = e.clone();
        let (a, b) = (rest[a_idx], rest[b_idx]);
        rest[a_idx] = 0;
        rest[b_idx] = 0;
        grouped.entry(rest).or_default().entry(a).or_default().insert(b, c.clone());
    }
    let mut out = Polynomial::zero(num.nx, num.ny);
    for (rest, by_a) in grouped {
        let top = *by_a.keys().next_back().unwrap();
        // q_{a-1} = c_a + x_{i+1} q_a, from a = top down to 1
        let mut q: BTreeMap<u8, BigInt> = BTreeMap::new();
        for a in (1..=top).rev() {
            let mut next: BTreeMap<u8, BigInt> = q.iter().map(|(&b, c)| (b + 1, c.clone())).collect();
            if let Some(ca) = by_a.get(&a) {
                for (&b, c) in ca {
                    let slot = next.entry(b).or_default();
                    *slot += c;
                }
            }
            next.retain(|_, c| !c.is_zero());
            for (&b, c) in &next {
                let mut e = rest.clone();
                e[a_idx] = a - 1;
                e[b_idx] = b;
                out.add_term(e, c.clone());
            }
            q = next;
        }
        // remainder c_0 + x_{i+1} q_0
        let mut rem: BTreeMap<u8, BigInt> = q.into_iter().map(|(b, c)| (b + 1, c)).collect();
        if let Some(c0) = by_a.get(&0) {
            for (&b, c) in c0 {
                *rem.entry(b).or_default() += c;
            }
        }
        if rem.values().any(|c| !c.is_zero()) {
            return Err(Error::NonzeroRemainder { i });
        }
    }
    Ok(out)
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&Polynomial> for Polynomial {
    fn add_assign(&mut self, rhs: &Polynomial) {
        let (nx, ny) = Polynomial::unify(self, rhs);
        if (nx, ny) != (self.nx, self.ny) {
            *self = self.with_arity(nx, ny);
        }
        if (nx, ny) == (rhs.nx, rhs.ny) {
            for (e, c) in &rhs.terms {
                self.add_term(e.clone(), c.clone());
            }
        } else {
            for (e, c) in rhs.with_arity(nx, ny).terms {
                self.add_term(e, c);
            }
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let terms = self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect();
        Polynomial { nx: self.nx, ny: self.ny, terms }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        let (nx, ny) = Polynomial::unify(self, rhs);
        if (nx, ny) != (self.nx, self.ny) || (nx, ny) != (rhs.nx, rhs.ny) {
            return &self.with_arity(nx, ny) * &rhs.with_arity(nx, ny);
        }
        mul_exact(self, rhs)
    }
}

fn mul_exact(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let mut out = Polynomial::zero(a.nx, a.ny);
    let mut e = vec![0u8; a.nx + a.ny];
    for (ea, ca) in &a.terms {
        for (eb, cb) in &b.terms {
            for ((t, &p), &q) in e.iter_mut().zip(ea).zip(eb) {
                *t = p.checked_add(q).expect("exponent overflow");
            }
            let c = ca * cb;
            match out.terms.get_mut(e.as_slice()) {
                Some(acc) => {
                    *acc += c;
                    if acc.is_zero() {
                        out.terms.remove(e.as_slice());
                    }
                }
                None => {
                    out.terms.insert(e.clone(), c);
                }
            }
        }
    }
    out
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $f(self, rhs: Polynomial) -> Polynomial {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.terms().into_iter().enumerate() {
            let negative = c.is_negative();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mag = c.abs();
            let vars = monomial_text(e, self.nx);
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars)?;
            } else {
                write!(f, "{mag}*{vars}")?;
            }
        }
        Ok(())
    }
}

/// `x1^2*x3*y1`, empty for the unit monomial.
pub fn monomial_text(e: &[u8], nx: usize) -> String {
    let mut parts = Vec::new();
    for (idx, &a) in e.iter().enumerate() {
        if a == 0 {
            continue;
        }
        let name = if idx < nx { format!("x{}", idx + 1) } else { format!("y{}", idx - nx + 1) };
        parts.push(if a == 1 { name } else { format!("{name}^{a}") });
    }
    parts.join("*")
}

/// Which member of the four polynomial families to build.
/// `Σ_D ∏_r f(r, D_r)` over diagrams given row by row (`r` from 1). Rows are
/// absorbed top to bottom and diagrams that agree on every remaining row share
/// one partial sum, so the wide products only happen after the sum collapses.
pub fn row_factored_sum<R: Ord + Clone>(
    diagrams: impl IntoIterator<Item = Vec<R>>,
    nx: usize,
    ny: usize,
    mut row_weight: impl FnMut(usize, &R) -> Polynomial,
) -> Polynomial {
    let diagrams: Vec<Vec<R>> = diagrams.into_iter().collect();
    let mut weights: BTreeMap<(usize, R), Polynomial> = BTreeMap::new();
    let mut weight = |r: usize, row: &R| weights.entry((r, row.clone())).or_insert_with(|| row_weight(r, row)).clone();
    if let Some(layout) = Layout::for_arity(nx, ny) {
        let packed = factored(
            &diagrams,
            || Some(PackedPoly::zero(layout)),
            PackedPoly::one(layout),
            |r, row| PackedPoly::from_polynomial(&weight(r, row).with_arity(nx, ny), layout),
            |a, b| a.add_assign(b),
            |a, b| a.mul(b),
        );
        if let Some(p) = packed {
            return p.to_polynomial(nx, ny);
        }
    }
    factored(
        &diagrams,
        || Some(Polynomial::zero(nx, ny)),
        Polynomial::one(nx, ny),
        |r, row| Some(weight(r, row)),
        |a, b| {
            *a += b;
            Some(())
        },
        |a, b| Some(a * b),
    )
    .expect("exact arithmetic cannot overflow")
}

fn factored<R: Ord + Clone, P: Clone>(
    diagrams: &[Vec<R>],
    zero: impl Fn() -> Option<P>,
    one: P,
    mut weight: impl FnMut(usize, &R) -> Option<P>,
    add: impl Fn(&mut P, &P) -> Option<()>,
    mul: impl Fn(&P, &P) -> Option<P>,
) -> Option<P> {
    let mut level: BTreeMap<&[R], P> = BTreeMap::new();
    for d in diagrams {
        match level.get_mut(d.as_slice()) {
            Some(acc) => add(acc, &one)?,
            None => {
                level.insert(d, one.clone());
            }
        }
    }
    let mut r = 1;
    while level.keys().any(|rows| !rows.is_empty()) {
        let mut next: BTreeMap<&[R], P> = BTreeMap::new();
        for (rows, acc) in level {
            let (rest, term) = match rows.split_first() {
                None => (rows, acc),
                Some((head, rest)) => (rest, mul(&acc, &weight(r, head)?)?),
            };
            match next.get_mut(rest) {
                Some(slot) => add(slot, &term)?,
                None => {
                    next.insert(rest, term);
                }
            }
        }
        level = next;
        r += 1;
    }
    let mut total = zero()?;
    for p in level.values() {
        add(&mut total, p)?;
    }
    Some(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    Schubert,
    Grothendieck,
    DoubleSchubert,
    DoubleGrothendieck,
}

impl Family {
    pub fn is_double(self) -> bool {
        matches!(self, Family::DoubleSchubert | Family::DoubleGrothendieck)
    }

    pub fn is_k_theoretic(self) -> bool {
        matches!(self, Family::Grothendieck | Family::DoubleGrothendieck)
    }

    fn step(self, f: &Polynomial, i: usize) -> Polynomial {
        let r = if self.is_k_theoretic() { f.isobaric_divided_difference(i) } else { f.divided_difference(i) };
        r.expect("divided difference of a polynomial is exact")
    }
}

/// Memo table for the four families, keyed by the permutation with trailing
/// fixed points removed. Owned by the caller; not shared across threads.
#[derive(Clone, Debug, Default)]
pub struct PolyCache {
    tables: BTreeMap<(Family, Vec<usize>), Polynomial>,
    packed: BTreeMap<(Family, Vec<usize>), PackedPoly>,
}

impl PolyCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.tables.len() + self.packed.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty() && self.packed.is_empty()
    }

    /// Polynomial of `w` in `x_1..x_n` (and `y_1..y_n` for double families),
    /// `n` the size of `w`.
    pub fn get(&mut self, family: Family, w: &Permutation) -> Polynomial {
        let n = w.size();
        let core = w.trimmed();
        let p = self.compute(family, &core);
        p.with_arity(n.max(p.nx()), if family.is_double() { n.max(p.ny()) } else { 0 })
    }

    fn compute(&mut self, family: Family, w: &Permutation) -> Polynomial {
        let key = (family, w.values().to_vec());
        if let Some(p) = self.tables.get(&key) {
            return p.clone();
        }
        let n = w.size().max(1);
        match self.compute_packed(family, w) {
            Some(p) => p.to_polynomial(n, if family.is_double() { n } else { 0 }),
            None => self.compute_exact(family, w),
        }
    }

    /// Drops every entry whose permutation is longer than `length`. The
    /// recursion only climbs by code ascents, so a caller that visits
    /// permutations in order of decreasing length can keep just one level.
    pub fn forget_longer_than(&mut self, length: usize) {
        let keep = |k: &(Family, Vec<usize>)| Permutation::new(k.1.clone()).map_or(true, |w| w.length() <= length);
        self.tables.retain(|k, _| keep(k));
        self.packed.retain(|k, _| keep(k));
    }

    /// The same walk as [`Self::compute_exact`] on packed polynomials; `None`
    /// once anything overflows the packing.
    fn compute_packed(&mut self, family: Family, w: &Permutation) -> Option<PackedPoly> {
        let n = w.size().max(1);
        let layout = Layout::for_arity(n, if family.is_double() { n } else { 0 })?;
        let mut chain: Vec<(Permutation, usize)> = Vec::new();
        let mut cur = w.clone();
        let mut base = loop {
            if let Some(p) = self.packed.get(&(family, cur.values().to_vec())) {
                break p.clone();
            }
            let code = cur.lehmer_code();
            match (1..code.len()).find(|&i| code[i - 1] < code[i]) {
                None => {
                    let p = packed_dominant(family, &cur, layout)?;
                    self.packed.insert((family, cur.values().to_vec()), p.clone());
                    break p;
                }
                Some(i) => {
                    let up = cur.swap_positions(i);
                    chain.push((cur, i));
                    cur = up;
                }
            }
        };
        while let Some((v, i)) = chain.pop() {
            base = if family.is_k_theoretic() { base.isobaric_divided_difference(i)? } else { base.divided_difference(i)? };
            self.packed.insert((family, v.values().to_vec()), base.clone());
        }
        Some(base)
    }

    fn compute_exact(&mut self, family: Family, w: &Permutation) -> Polynomial {
        // Walk towards a dominant permutation by code ascents, then unwind.
        let mut chain: Vec<(Permutation, usize)> = Vec::new();
        let mut cur = w.clone();
        let mut base = loop {
            if let Some(p) = self.tables.get(&(family, cur.values().to_vec())) {
                break p.clone();
            }
            let code = cur.lehmer_code();
            match (1..code.len()).find(|&i| code[i - 1] < code[i]) {
                None => {
                    let p = dominant_polynomial(family, &cur);
                    self.tables.insert((family, cur.values().to_vec()), p.clone());
                    break p;
                }
                Some(i) => {
                    let up = cur.swap_positions(i);
                    chain.push((cur, i));
                    cur = up;
                }
            }
        };
        while let Some((v, i)) = chain.pop() {
            let n = v.size();
            let lifted = base.with_arity(base.nx().max(n), if family.is_double() { base.ny().max(n) } else { 0 });
            base = family.step(&lifted, i);
            self.tables.insert((family, v.values().to_vec()), base.clone());
        }
        base
    }
}

fn packed_dominant(family: Family, w: &Permutation, layout: Layout) -> Option<PackedPoly> {
    let mut acc = PackedPoly::one(layout);
    for (i, j) in w.rothe_diagram() {
        let x = PackedPoly::x(layout, i)?;
        let factor = match family {
            Family::Schubert | Family::Grothendieck => x,
            Family::DoubleSchubert => x.sub(&PackedPoly::y(layout, j)?)?,
            Family::DoubleGrothendieck => {
                let y = PackedPoly::y(layout, j)?;
                let mut sum = x.clone();
                sum.add_assign(&y)?;
                sum.sub(&x.mul(&y)?)?
            }
        };
        acc = acc.mul(&factor)?;
    }
    Some(acc)
}

/// Closed form at dominant permutations: a product over the Rothe diagram,
/// which for a dominant permutation is the Young diagram of its code.
fn dominant_polynomial(family: Family, w: &Permutation) -> Polynomial {
    let n = w.size().max(1);
    let ny = if family.is_double() { n } else { 0 };
    let mut acc = Polynomial::one(n, ny);
    for (i, j) in w.rothe_diagram() {
        let x = Polynomial::x(i, n, ny);
        let factor = match family {
            Family::Schubert | Family::Grothendieck => x,
            Family::DoubleSchubert => &x - &Polynomial::y(j, n, ny),
            Family::DoubleGrothendieck => {
                let y = Polynomial::y(j, n, ny);
                &(&x + &y) - &(&x * &y)
            }
        };
        acc = &acc * &factor;
    }
    acc
}

pub fn schubert(w: &Permutation, cache: &mut PolyCache) -> Polynomial {
    cache.get(Family::Schubert, w)
}

pub fn grothendieck(w: &Permutation, cache: &mut PolyCache) -> Polynomial {
    cache.get(Family::Grothendieck, w)
}

pub fn double_schubert(w: &Permutation, cache: &mut PolyCache) -> Polynomial {
    cache.get(Family::DoubleSchubert, w)
}

pub fn double_grothendieck(w: &Permutation, cache: &mut PolyCache) -> Polynomial {
    cache.get(Family::DoubleGrothendieck, w)
}

/// Polynomial of a word `w ∈ [k]^n`: the polynomial of `u = std(conv(w))`,
/// checked to involve only `x_1..x_n` (and `y_1..y_k`), with `x_i ↦ x_{σ(i)}`
/// where `σ` is the associated permutation.
pub fn word_polynomial(family: Family, w: &Word, cache: &mut PolyCache) -> Result<Polynomial> {
    let n = w.len();
    let u = w.convexify().standardize();
    let p = cache.get(family, &u);
    if p.max_x_index() > n {
        return Err(Error::OutsideRectangle(format!(
            "polynomial of {u} (from word {w}) involves x_{} beyond n = {n}",
            p.max_x_index()
        )));
    }
    let ny = if family.is_double() { w.k() } else { 0 };
    if p.max_y_index() > ny {
        return Err(Error::OutsideRectangle(format!(
            "polynomial of {u} (from word {w}) involves y_{} beyond k = {}",
            p.max_y_index(),
            w.k()
        )));
    }
    let p = restrict_arity(&p, n, ny);
    Ok(p.rename_x(w.associated_permutation().values()))
}

fn restrict_arity(p: &Polynomial, nx: usize, ny: usize) -> Polynomial {
    let terms = p.raw_terms().map(|(e, c)| {
        let mut f = vec![0; nx + ny];
        f[..nx].copy_from_slice(&e[..nx]);
        f[nx..].copy_from_slice(&e[p.nx()..p.nx() + ny]);
        (f, c.clone())
    });
    Polynomial::from_terms(nx, ny, terms.collect::<Vec<_>>())
}

pub fn schubert_of_word(w: &Word, cache: &mut PolyCache) -> Result<Polynomial> {
    word_polynomial(Family::Schubert, w, cache)
}

pub fn grothendieck_of_word(w: &Word, cache: &mut PolyCache) -> Result<Polynomial> {
    word_polynomial(Family::Grothendieck, w, cache)
}

/// `e_j(x_1, ..., x_m)` in arity `nx ≥ m`.
pub fn elementary_symmetric(j: usize, m: usize, nx: usize) -> Polynomial {
    assert!(m <= nx);
    let mut out = Polynomial::zero(nx, 0);
    if j > m {
        return out;
    }
    let mut idx: Vec<usize> = (0..j).collect();
    loop {
        let mut e = vec![0; nx];
        for &i in &idx {
            e[i] = 1;
        }
        out.add_term(e, BigInt::one());
        // next j-subset of 0..m in lex order
        let Some(p) = (0..j).rev().find(|&p| idx[p] < m - j + p) else { break };
        idx[p] += 1;
        for q in p + 1..j {
            idx[q] = idx[q - 1] + 1;
        }
    }
    out
}

/// `v^(i) = 1 2 .. î .. n i ∈ S_n`.
pub fn grassmannian_v(i: usize, n: usize) -> Permutation {
    assert!(i >= 1 && i <= n);
    let mut values: Vec<usize> = (1..=n).filter(|&a| a != i).collect();
    values.push(i);
    Permutation::new(values).unwrap()
}

/// Expands `𝔊_{v^(i)}`, `v^(i) ∈ S_n`, in `e_j(x_1..x_{n-1})`. Returns
/// `(j, c_j)` for `j = n-i ..= n-1`; the lowest coefficient is 1 and the
/// signs alternate (zero allowed), otherwise [`Error::LemmaViolation`].
pub fn grassmannian_e_expansion(i: usize, n: usize, cache: &mut PolyCache) -> Result<Vec<(usize, BigInt)>> {
    if i == 0 || i > n {
        return Err(Error::IndexOutOfRange { index: i, size: n });
    }
    let g = grothendieck(&grassmannian_v(i, n), cache);
    let m = n - 1;
    if g.max_x_index() > m {
        return Err(Error::LemmaViolation(format!("𝔊_v involves x_{}", g.max_x_index())));
    }
    let lo = n - i;
    let mut residual = g.clone();
    let mut coeffs = Vec::new();
    for j in lo..=m {
        let mut probe = vec![0u8; n];
        probe[..j].fill(1);
        let c = g.coefficient(&probe);
        residual = &residual - &elementary_symmetric(j, m, n).scale(&c);
        coeffs.push((j, c));
    }
    if !residual.is_zero() {
        return Err(Error::LemmaViolation(format!("𝔊_{} is not in the span of e_{lo}..e_{m}", grassmannian_v(i, n))));
    }
    for (j, c) in &coeffs {
        let ok = if *j == lo { c.is_one() } else { c.is_zero() || (c.is_positive() == ((j - lo) % 2 == 0)) };
        if !ok {
            return Err(Error::LemmaViolation(format!("coefficient {c} on e_{j} breaks the sign pattern")));
        }
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    // ∂_i on a single monomial x_i^a x_{i+1}^b by the geometric-series formula.
    fn monomial_oracle(p: &Polynomial, i: usize) -> Polynomial {
        let mut out = Polynomial::zero(p.nx(), p.ny());
        for (e, c) in p.raw_terms() {
            let (a, b) = (e[i - 1], e[i]);
            let (lo, hi, sign) = if a > b { (b, a, 1) } else { (a, b, -1) };
            for t in 0..hi - lo {
                let mut f = e.clone();
                if sign > 0 {
                    f[i - 1] = a - 1 - t;
                    f[i] = b + t;
                } else {
                    f[i - 1] = a + t;
                    f[i] = b - 1 - t;
                }
                out.add_term(f, c * BigInt::from(sign));
            }
        }
        out
    }

    #[test]
    fn divided_difference_matches_monomial_formula() {
        let x = |i| Polynomial::x(i, 4, 1);
        let y = Polynomial::y(1, 4, 1);
        let f = &(&(&x(1).pow(3) * &x(2)) - &(&x(2).pow(2) * &y)) + &(&x(3) * &Polynomial::constant(5, 4, 1));
        for i in 1..=3 {
            assert_eq!(f.divided_difference(i).unwrap(), monomial_oracle(&f, i));
        }
        assert_eq!(x(1).divided_difference(1).unwrap(), Polynomial::one(4, 1));
    }

    #[test]
    fn small_schubert_values() {
        let mut c = PolyCache::new();
        assert_eq!(schubert(&perm("132"), &mut c).to_string(), "x1 + x2");
        assert_eq!(schubert(&perm("213"), &mut c).to_string(), "x1");
        assert_eq!(schubert(&perm("321"), &mut c).to_string(), "x1^2*x2");
        assert_eq!(grothendieck(&perm("132"), &mut c).to_string(), "x1 + x2 - x1*x2");
        assert_eq!(
            schubert(&perm("24153"), &mut c).to_string(),
            "x1^2*x2^2 + x1^2*x2*x3 + x1^2*x2*x4 + x1*x2^2*x3 + x1*x2^2*x4"
        );
        assert_eq!(double_schubert(&perm("21"), &mut c).to_string(), "x1 - y1");
        assert_eq!(double_grothendieck(&perm("21"), &mut c).to_string(), "x1 + y1 - x1*y1");
    }

    #[test]
    fn grassmannian_examples() {
        let mut c = PolyCache::new();
        let g = grothendieck(&perm("12354"), &mut c);
        let e = |j| elementary_symmetric(j, 4, 5);
        let expected = &(&(&e(1) - &e(2)) + &e(3)) - &e(4);
        assert_eq!(g, expected);
        let s = schubert(&perm("12354"), &mut c);
        assert_eq!(s, e(1));
        let coeffs = grassmannian_e_expansion(4, 5, &mut c).unwrap();
        let values: Vec<i64> = coeffs.iter().map(|(_, c)| i64::try_from(c).unwrap()).collect();
        assert_eq!(values, [1, -1, 1, -1]);
        assert_eq!(coeffs[0].0, 1);
        let single = grassmannian_e_expansion(1, 5, &mut c).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(single[0].0, 4);
        assert!(grassmannian_e_expansion(2, 3, &mut c).unwrap()[0].1.is_one());
    }

    #[test]
    fn word_polynomial_relabels_by_associated_permutation() {
        let mut c = PolyCache::new();
        // the cell of 1221 forces ℓ1 = ℓ4, a diagonal with class x1 + x4
        let w = Word::parse("1221", Some(2)).unwrap();
        assert_eq!(schubert_of_word(&w, &mut c).unwrap().to_string(), "x1 + x4");
        let w = Word::parse("21231", Some(3)).unwrap();
        let s = schubert_of_word(&w, &mut c).unwrap();
        assert_eq!(s.nx(), 5);
        assert_eq!(s.to_string(), "x1^2*x2*x3 + x1^2*x3^2 + x1^2*x3*x5 + x1*x2*x3^2 + x1*x3^2*x5");
    }

    #[test]
    fn elementary_symmetric_counts() {
        assert_eq!(elementary_symmetric(2, 4, 4).len(), 6);
        assert!(elementary_symmetric(5, 4, 4).is_zero());
        assert_eq!(elementary_symmetric(0, 3, 3), Polynomial::one(3, 0));
    }
}
