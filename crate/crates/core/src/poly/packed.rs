//! Fast path for long polynomial computations: exponent vectors packed five
//! bits per variable into one `u128`, `i128` coefficients in a hash map.
//!
//! When a y-block is present `x_i` and `y_i` sit in adjacent fields, so the
//! arity can grow without repacking. The top bit of every field is a guard:
//! exponents stay below 16, two packed keys add without carries, and a sum
//! that sets a guard bit is an overflow. Every operation that could overflow
//! returns `None`; callers then redo the whole computation with big integers.

use alloc::collections::BTreeMap;
use alloc::vec;

use hashbrown::HashMap;
use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{Exponents, Polynomial};

const BITS: usize = 5;
const FIELDS: usize = 128 / BITS;
const FIELD_MASK: u128 = (1 << BITS) - 1;
const MAX_EXPONENT: u8 = (1 << (BITS - 1)) - 1;

const fn guard_mask() -> u128 {
    let mut m = 0u128;
    let mut f = 0;
    while f < FIELDS {
        m |= 1 << (f * BITS + BITS - 1);
        f += 1;
    }
    m
}

const GUARD: u128 = guard_mask();

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Layout {
    double: bool,
}

impl Layout {
    /// Layout covering `x_1..x_nx` and `y_1..y_ny`, if they fit.
    pub(crate) fn for_arity(nx: usize, ny: usize) -> Option<Self> {
        let fields = if ny > 0 { 2 * nx.max(ny) } else { nx };
        (fields <= FIELDS).then_some(Self { double: ny > 0 })
    }

    fn x_field(self, i: usize) -> usize {
        if self.double {
            2 * (i - 1)
        } else {
            i - 1
        }
    }

    fn y_field(self, j: usize) -> usize {
        2 * (j - 1) + 1
    }
}

fn field(k: u128, f: usize) -> u8 {
    ((k >> (f * BITS)) & FIELD_MASK) as u8
}

fn with_field(k: u128, f: usize, a: u8) -> u128 {
    (k & !(FIELD_MASK << (f * BITS))) | (a as u128) << (f * BITS)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PackedPoly {
    layout: Layout,
    terms: HashMap<u128, i128>,
}

impl PackedPoly {
    pub(crate) fn zero(layout: Layout) -> Self {
        Self { layout, terms: HashMap::new() }
    }

    pub(crate) fn one(layout: Layout) -> Self {
        let mut p = Self::zero(layout);
        p.terms.insert(0, 1);
        p
    }

    fn variable(layout: Layout, f: usize) -> Option<Self> {
        if f >= FIELDS {
            return None;
        }
        let mut p = Self::zero(layout);
        p.terms.insert(1 << (f * BITS), 1);
        Some(p)
    }

    pub(crate) fn x(layout: Layout, i: usize) -> Option<Self> {
        Self::variable(layout, layout.x_field(i))
    }

    pub(crate) fn y(layout: Layout, j: usize) -> Option<Self> {
        if !layout.double {
            return None;
        }
        Self::variable(layout, layout.y_field(j))
    }

    pub(crate) fn from_polynomial(p: &Polynomial, layout: Layout) -> Option<Self> {
        if layout.double != (p.ny > 0) || Layout::for_arity(p.nx, p.ny).is_none() {
            return None;
        }
        let mut terms = HashMap::with_capacity(p.terms.len());
        for (e, c) in &p.terms {
            let mut k = 0u128;
            for (idx, &a) in e.iter().enumerate() {
                if a > MAX_EXPONENT {
                    return None;
                }
                let f = if idx < p.nx { layout.x_field(idx + 1) } else { layout.y_field(idx - p.nx + 1) };
                k = with_field(k, f, a);
            }
            terms.insert(k, c.to_i128()?);
        }
        Some(Self { layout, terms })
    }

    /// Unpacks into `x_1..x_nx`, `y_1..y_ny`; the arity must cover every
    /// variable that occurs.
    pub(crate) fn to_polynomial(&self, nx: usize, ny: usize) -> Polynomial {
        let terms: BTreeMap<Exponents, BigInt> = self
            .terms
            .iter()
            .map(|(&k, &c)| {
                let mut e = vec![0u8; nx + ny];
                for (i, slot) in e[..nx].iter_mut().enumerate() {
                    *slot = field(k, self.layout.x_field(i + 1));
                }
                if self.layout.double {
                    for (j, slot) in e[nx..].iter_mut().enumerate() {
                        *slot = field(k, self.layout.y_field(j + 1));
                    }
                }
                (e, BigInt::from(c))
            })
            .collect();
        let p = Polynomial { nx, ny, terms };
        debug_assert_eq!(p.terms.len(), self.terms.len(), "arity drops variables");
        p
    }

    pub(crate) fn add_assign(&mut self, rhs: &Self) -> Option<()> {
        for (&k, &c) in &rhs.terms {
            let slot = self.terms.entry(k).or_insert(0);
            *slot = slot.checked_add(c)?;
            if *slot == 0 {
                self.terms.remove(&k);
            }
        }
        Some(())
    }

    pub(crate) fn neg(&self) -> Option<Self> {
        let terms = self.terms.iter().map(|(&k, &c)| Some((k, c.checked_neg()?))).collect::<Option<_>>()?;
        Some(Self { layout: self.layout, terms })
    }

    pub(crate) fn sub(&self, rhs: &Self) -> Option<Self> {
        let mut out = self.clone();
        out.add_assign(&rhs.neg()?)?;
        Some(out)
    }

    pub(crate) fn mul(&self, rhs: &Self) -> Option<Self> {
        let mut terms: HashMap<u128, i128> = HashMap::with_capacity(self.terms.len().max(rhs.terms.len()));
        for (&ka, &ca) in &self.terms {
            for (&kb, &cb) in &rhs.terms {
                let k = ka + kb;
                if k & GUARD != 0 {
                    return None;
                }
                let slot = terms.entry(k).or_insert(0);
                *slot = slot.checked_add(ca.checked_mul(cb)?)?;
            }
        }
        terms.retain(|_, c| *c != 0);
        Some(Self { layout: self.layout, terms })
    }

    /// `∂_i` monomial by monomial: for `a > b`,
    /// `x_i^a x_{i+1}^b ↦ Σ_{j < a-b} x_i^{a-1-j} x_{i+1}^{b+j}`; the mirror
    /// image with a minus sign for `a < b`; 0 for `a = b`.
    pub(crate) fn divided_difference(&self, i: usize) -> Option<Self> {
        let (fi, fj) = (self.layout.x_field(i), self.layout.x_field(i + 1));
        if fj >= FIELDS {
            return None;
        }
        let mut terms: HashMap<u128, i128> = HashMap::with_capacity(self.terms.len());
        for (&k, &c) in &self.terms {
            let (a, b) = (field(k, fi), field(k, fj));
            let (hi, lo, c) = match a.cmp(&b) {
                core::cmp::Ordering::Equal => continue,
                core::cmp::Ordering::Greater => (a, b, c),
                core::cmp::Ordering::Less => (b, a, c.checked_neg()?),
            };
            for j in 0..hi - lo {
                let key = with_field(with_field(k, fi, hi - 1 - j), fj, lo + j);
                let slot = terms.entry(key).or_insert(0);
                *slot = slot.checked_add(c)?;
            }
        }
        terms.retain(|_, c| *c != 0);
        Some(Self { layout: self.layout, terms })
    }

    /// `π_i f = ∂_i((1 - x_{i+1}) f)`.
    pub(crate) fn isobaric_divided_difference(&self, i: usize) -> Option<Self> {
        let factor = Self::one(self.layout).sub(&Self::x(self.layout, i + 1)?)?;
        factor.mul(self)?.divided_difference(i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(seed: u64, nx: usize, ny: usize) -> Polynomial {
        // small deterministic pseudo-random polynomial
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (s >> 33) as i64
        };
        let terms: alloc::vec::Vec<(Exponents, BigInt)> = (0..6)
            .map(|_| ((0..nx + ny).map(|_| (next() % 4) as u8).collect(), BigInt::from(next() % 11 - 5)))
            .collect();
        Polynomial::from_terms(nx, ny, terms)
    }

    #[test]
    fn round_trip_and_arithmetic_match_exact() {
        for seed in 0..40 {
            for (nx, ny) in [(3, 0), (4, 0), (3, 3), (4, 2)] {
                let (a, b) = (sample(seed, nx, ny), sample(seed + 1000, nx, ny));
                let layout = Layout::for_arity(nx, ny).unwrap();
                let (pa, pb) = (PackedPoly::from_polynomial(&a, layout).unwrap(), PackedPoly::from_polynomial(&b, layout).unwrap());
                assert_eq!(pa.to_polynomial(nx, ny), a);
                assert_eq!(pa.mul(&pb).unwrap().to_polynomial(nx, ny), super::super::mul_exact(&a, &b));
                assert_eq!(pa.sub(&pb).unwrap().to_polynomial(nx, ny), &a - &b);
                for i in 1..nx {
                    assert_eq!(pa.divided_difference(i).unwrap().to_polynomial(nx, ny), a.divided_difference(i).unwrap());
                    assert_eq!(
                        pa.isobaric_divided_difference(i).unwrap().to_polynomial(nx, ny),
                        a.isobaric_divided_difference(i).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn overflow_is_reported() {
        let layout = Layout::for_arity(2, 0).unwrap();
        let x = PackedPoly::x(layout, 1).unwrap();
        let mut p = PackedPoly::one(layout);
        for _ in 0..MAX_EXPONENT {
            p = p.mul(&x).unwrap();
        }
        assert!(p.mul(&x).is_none());
        let big = Polynomial::constant(BigInt::from(i128::MAX) * 2, 2, 0);
        assert!(PackedPoly::from_polynomial(&big, layout).is_none());
        let c = PackedPoly::from_polynomial(&Polynomial::constant(i128::MAX, 2, 0), layout).unwrap();
        assert!(c.mul(&c).is_none());
        assert!(Layout::for_arity(13, 13).is_none());
        assert!(Layout::for_arity(25, 0).is_some());
    }
}
