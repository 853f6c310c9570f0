//! The truncated ring `S_{n,k} = Z[x_1..x_n]/(x_1^k, ..., x_n^k)`, ideals in it
//! as integer lattices on the monomial basis, and the rank, ideal-equality
//! and basis checks for the generalized coinvariant quotient
//! `R_{n,k} = S_{n,k} / (e_{n-k+1}, ..., e_n)`.

pub mod lattice;

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::combinat::{fubini_count, fubini_words, Permutation, Word};
use crate::error::{Error, Result};
use crate::poly::{elementary_symmetric, grassmannian_v, word_polynomial, Family, PolyCache, Polynomial};

pub use lattice::IntegerLattice;

/// Largest `k^n` the checks accept without an explicit override.
pub const DESK_CEILING: u128 = 5000;

pub fn check_ceiling(n: usize, k: usize) -> Result<()> {
    let size = (k as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if size > DESK_CEILING {
        return Err(Error::TooLarge { n, k, size, limit: DESK_CEILING });
    }
    Ok(())
}

/// Monomial basis `x^a`, `0 ≤ a_i < k`, indexed lexicographically with `a_1`
/// most significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Snk {
    pub n: usize,
    pub k: usize,
}

impl Snk {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(k >= 1, "S_(n,k) needs k ≥ 1");
        Self { n, k }
    }

    pub fn dim(&self) -> usize {
        self.k.pow(self.n as u32)
    }

    /// `None` when some exponent reaches `k` (the monomial vanishes).
    pub fn index(&self, exps: &[u8]) -> Option<usize> {
        let mut idx = 0;
        for &a in exps {
            if a as usize >= self.k {
                return None;
            }
            idx = idx * self.k + a as usize;
        }
        Some(idx)
    }

    pub fn exponents(&self, mut idx: usize) -> Vec<u8> {
        let mut e = alloc::vec![0u8; self.n];
        for slot in e.iter_mut().rev() {
            *slot = (idx % self.k) as u8;
            idx /= self.k;
        }
        e
    }

    /// Image of a polynomial in `x_1..x_n` as a sparse coordinate vector.
    pub fn project(&self, p: &Polynomial) -> Result<Vec<(usize, BigInt)>> {
        if p.max_x_index() > self.n || p.max_y_index() > 0 {
            return Err(Error::ArityMismatch(format!("polynomial is not in x_1..x_{}", self.n)));
        }
        let mut out = Vec::new();
        for (e, c) in p.raw_terms() {
            let mut x: Vec<u8> = e[..self.n.min(p.nx())].to_vec();
            x.resize(self.n, 0);
            if let Some(i) = self.index(&x) {
                out.push((i, c.clone()));
            }
        }
        out.sort_by_key(|e| e.0);
        Ok(out)
    }

    pub fn to_polynomial(&self, v: &[(usize, BigInt)]) -> Polynomial {
        Polynomial::from_terms(self.n, 0, v.iter().map(|(i, c)| (self.exponents(*i), c.clone())).collect::<Vec<_>>())
    }

    /// Rows `m · g` for every basis monomial `m`: the additive generators of
    /// the ideal `(g)`.
    pub fn multiples(&self, g: &[(usize, BigInt)]) -> Vec<Vec<(usize, BigInt)>> {
        let terms: Vec<(Vec<u8>, &BigInt)> = g.iter().map(|(i, c)| (self.exponents(*i), c)).collect();
        let mut rows = Vec::new();
        for m in 0..self.dim() {
            let me = self.exponents(m);
            let row: Vec<(usize, BigInt)> = terms
                .iter()
                .filter_map(|(e, c)| {
                    let sum: Vec<u8> = me.iter().zip(e).map(|(a, b)| a + b).collect();
                    self.index(&sum).map(|i| (i, (*c).clone()))
                })
                .collect();
            if !row.is_empty() {
                rows.push(row);
            }
        }
        rows
    }

    pub fn ideal_lattice(&self, gens: &[Polynomial]) -> Result<IntegerLattice> {
        let mut l = IntegerLattice::new(self.dim());
        for g in gens {
            let v = self.project(g)?;
            for row in self.multiples(&v) {
                l.insert(row);
            }
        }
        Ok(l)
    }
}

/// `e_{n-k+1}, ..., e_n` in `x_1..x_n`.
pub fn elementary_generators(n: usize, k: usize) -> Vec<Polynomial> {
    (n + 1 - k.min(n)..=n).map(|j| elementary_symmetric(j, n, n)).collect()
}

/// `𝔊_{v^(i)}` for `v^(i) = 1 .. î .. (n+1) i ∈ S_{n+1}`, `i = 1..k`, viewed in
/// `x_1..x_n`; the lowest-degree part of the i-th one is `e_{n+1-i}`.
pub fn grothendieck_generators(n: usize, k: usize, cache: &mut PolyCache) -> Result<Vec<Polynomial>> {
    (1..=k.min(n))
        .map(|i| {
            let g = cache.get(Family::Grothendieck, &grassmannian_v(i, n + 1));
            if g.max_x_index() > n {
                return Err(Error::OutsideRectangle(format!("𝔊_{} involves x_{}", grassmannian_v(i, n + 1), n + 1)));
            }
            Ok(Polynomial::from_terms(n, 0, g.raw_terms().map(|(e, c)| (e[..n].to_vec(), c.clone())).collect::<Vec<_>>()))
        })
        .collect()
}

/// Outcome of the rank check for `R_{n,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankReport {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub expected: u128,
    pub torsion_free: bool,
}

impl RankReport {
    pub fn passed(&self) -> bool {
        self.rank as u128 == self.expected && self.torsion_free
    }
}

/// Rank and torsion of `R_{n,k}` over `Z`, compared against `k! S(n, k)`.
pub fn rnk_rank(n: usize, k: usize) -> Result<RankReport> {
    check_ceiling(n, k)?;
    let snk = Snk::new(n, k);
    let lattice = snk.ideal_lattice(&elementary_generators(n, k))?;
    Ok(RankReport {
        n,
        k,
        rank: snk.dim() - lattice.rank(),
        expected: fubini_count(n, k),
        torsion_free: lattice.quotient_is_torsion_free(),
    })
}

/// The ideals generated by `a` and by `b` in `S_{n,k}` coincide.
pub fn ideals_equal(n: usize, k: usize, a: &[Polynomial], b: &[Polynomial]) -> Result<bool> {
    check_ceiling(n, k)?;
    let snk = Snk::new(n, k);
    let la = snk.ideal_lattice(a)?;
    let lb = snk.ideal_lattice(b)?;
    Ok(la.same_lattice(&lb))
}

/// Image of `𝔊_w` in `S_{n,k}`.
pub fn k0_class_of_word(w: &Word, cache: &mut PolyCache) -> Result<Vec<(usize, BigInt)>> {
    let p = word_polynomial(Family::Grothendieck, w, cache)?;
    Snk::new(w.len(), w.k()).project(&p)
}

/// Image of `𝔖_w` in `S_{n,k}`.
pub fn cohomology_class_of_word(w: &Word, cache: &mut PolyCache) -> Result<Vec<(usize, BigInt)>> {
    let p = word_polynomial(Family::Schubert, w, cache)?;
    Snk::new(w.len(), w.k()).project(&p)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisReport {
    pub n: usize,
    pub k: usize,
    pub family: Family,
    pub count: usize,
    pub expected: u128,
    /// Classes together with the ideal generate all of `S_{n,k}`.
    pub spans: bool,
}

/// Checks that the classes of the Fubini words of `[k]^n` in `family` form a
/// `Z`-basis of `R_{n,k}`: together with the ideal they generate `Z^{k^n}`,
/// and there are exactly `rank R_{n,k}` of them.
pub fn verify_word_basis(n: usize, k: usize, family: Family, cache: &mut PolyCache) -> Result<BasisReport> {
    check_ceiling(n, k)?;
    let snk = Snk::new(n, k);
    let mut lattice = snk.ideal_lattice(&elementary_generators(n, k))?;
    let quotient_rank = snk.dim() - lattice.rank();
    let mut count = 0;
    let mut first_dependent = None;
    for w in fubini_words(n, k) {
        let v = snk.project(&word_polynomial(family, &w, cache)?)?;
        if !lattice.insert(v) && first_dependent.is_none() {
            first_dependent = Some(w);
        }
        count += 1;
    }
    if let Some(w) = first_dependent {
        return Err(Error::BasisFailure(format!("class of {w} depends on earlier classes modulo the ideal")));
    }
    let spans = lattice.rank() == snk.dim() && lattice.pivots().iter().all(|(_, p)| p.is_one());
    if !spans {
        return Err(Error::BasisFailure(format!(
            "classes of Fubini words in [{k}]^{n} and the ideal generate a proper sublattice"
        )));
    }
    if count != quotient_rank {
        return Err(Error::BasisFailure(format!("{count} classes for a quotient of rank {quotient_rank}")));
    }
    Ok(BasisReport { n, k, family, count, expected: fubini_count(n, k), spans })
}

pub fn verify_grothendieck_basis(n: usize, k: usize, cache: &mut PolyCache) -> Result<BasisReport> {
    verify_word_basis(n, k, Family::Grothendieck, cache)
}

pub fn verify_schubert_basis(n: usize, k: usize, cache: &mut PolyCache) -> Result<BasisReport> {
    verify_word_basis(n, k, Family::Schubert, cache)
}

/// The special word `1 2 .. î .. k k .. k` of length `n` (for `i = k`:
/// `1 .. (k-1)` followed by copies of `k-1`), whose standardized permutation is
/// `v^(i) ∈ S_{n+1}`.
pub fn special_word(i: usize, n: usize, k: usize) -> Word {
    let mut letters: Vec<usize> = (1..=k).filter(|&a| a != i).collect();
    let fill = *letters.last().unwrap_or(&1);
    letters.resize(n, fill);
    Word::new(letters, k).unwrap()
}

pub fn special_permutation(i: usize, n: usize) -> Permutation {
    grassmannian_v(i, n + 1)
}

/// Pairs `(n, k)` with `1 ≤ k ≤ n` and `k^n ≤` [`DESK_CEILING`]; for `k = 1`
/// the ceiling never binds, so `n` is capped at `k1_cap`.
pub fn desk_pairs(k1_cap: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 1..=DESK_CEILING as usize {
        if k >= 2 && (k as u128).pow(k as u32) > DESK_CEILING {
            break;
        }
        let mut n = k.max(1);
        loop {
            if k == 1 && n > k1_cap {
                break;
            }
            if check_ceiling(n, k).is_err() {
                break;
            }
            out.push((n, k));
            n += 1;
        }
    }
    out
}
