//! Classical pipe dreams: finite sets of cross tiles in the positive quadrant,
//! all other tiles being bumps.
//!
//! A cross at `(i, j)` contributes the letter `i + j - 1`; the reading word
//! runs through rows top to bottom and right to left within a row, and the
//! permutation of a diagram is the Demazure product of its reading word.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashSet;

use crate::combinat::{Permutation, Word};
use crate::error::{Error, Result};
use crate::poly::{row_factored_sum, Family, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PipeDream {
    crosses: Vec<(usize, usize)>,
}

impl PipeDream {
    /// Sorts and deduplicates; coordinates are 1-indexed.
    pub fn new(mut crosses: Vec<(usize, usize)>) -> Result<Self> {
        if crosses.iter().any(|&(i, j)| i == 0 || j == 0) {
            return Err(Error::InvalidDiagram("cross coordinates are 1-indexed".into()));
        }
        crosses.sort_unstable();
        crosses.dedup();
        Ok(Self { crosses })
    }

    pub fn crosses(&self) -> &[(usize, usize)] {
        &self.crosses
    }

    pub fn len(&self) -> usize {
        self.crosses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crosses.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.crosses.binary_search(&(i, j)).is_ok()
    }

    /// Smallest `N` with every cross in the staircase `i + j ≤ N`.
    pub fn span(&self) -> usize {
        self.crosses.iter().map(|&(i, j)| i + j).max().unwrap_or(1)
    }

    pub fn reading_word(&self) -> Vec<usize> {
        let mut cells = self.crosses.clone();
        cells.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        cells.into_iter().map(|(i, j)| i + j - 1).collect()
    }

    /// Demazure product of the reading word, without trailing fixed points.
    pub fn permutation(&self) -> Permutation {
        Permutation::demazure_product(&self.reading_word(), 0).trimmed()
    }

    /// Permutation by following pipes from the left edge to the top edge;
    /// a second crossing of the same pair is treated as a bump.
    pub fn trace_permutation(&self) -> Permutation {
        let n = self.span();
        // from_south[j]: label travelling north into the current row at column j
        let mut from_south: Vec<Option<usize>> = vec![None; n + 2];
        let mut crossed = BTreeSet::new();
        for i in (1..=n).rev() {
            let mut from_west = Some(i);
            for j in 1..=n + 1 - i {
                let (w, s) = (from_west, from_south[j]);
                let (north, east) = match (w, s) {
                    (Some(a), Some(b)) if self.contains(i, j) && crossed.insert((a.min(b), a.max(b))) => (s, w),
                    _ => (w, s),
                };
                from_south[j] = north;
                from_west = east;
            }
        }
        let mut values = vec![0; n];
        for (j, label) in from_south.iter().enumerate().skip(1).take(n) {
            if let Some(l) = label {
                values[l - 1] = j;
            }
        }
        Permutation::new(values).expect("pipes exit the top in distinct columns").trimmed()
    }

    pub fn is_reduced(&self) -> bool {
        self.len() == self.permutation().length()
    }

    /// `∏ factor(label(i), j)` over crosses; see [`Family`] for the factors.
    /// K-theoretic weights carry the sign `(-1)^{|P| - ℓ}`.
    pub fn weight(&self, family: Family, labels: &[usize], nx: usize, ny: usize) -> Polynomial {
        let mut acc = Polynomial::one(nx, ny);
        for &(i, j) in &self.crosses {
            acc = &acc * &cross_factor(family, labels[i - 1], j, nx, ny);
        }
        if family.is_k_theoretic() && (self.len() - self.permutation().length()) % 2 == 1 {
            acc = -&acc;
        }
        acc
    }

    /// Chute moves available from this diagram; each result is a new diagram.
    pub fn chute_moves(&self) -> Vec<PipeDream> {
        self.chutes(false)
    }

    /// K-chute moves: like a chute, but the source cross stays.
    pub fn k_chute_moves(&self) -> Vec<PipeDream> {
        self.chutes(true)
    }

    fn chutes(&self, keep_source: bool) -> Vec<PipeDream> {
        let mut out = Vec::new();
        for &(k, jp1) in &self.crosses {
            if jp1 < 2 || self.contains(k + 1, jp1) {
                continue;
            }
            let j = jp1 - 1;
            // scan left through columns fully crossed in rows k, k+1
            let mut i = j;
            while i >= 1 && self.contains(k, i) && self.contains(k + 1, i) {
                i -= 1;
            }
            if i == 0 || self.contains(k, i) || self.contains(k + 1, i) {
                continue;
            }
            let mut crosses = self.crosses.clone();
            if !keep_source {
                crosses.retain(|&c| c != (k, jp1));
            }
            crosses.push((k + 1, i));
            out.push(PipeDream::new(crosses).unwrap());
        }
        out
    }
}

fn cross_factor(family: Family, row: usize, col: usize, nx: usize, ny: usize) -> Polynomial {
    let x = Polynomial::x(row, nx, ny);
    match family {
        Family::Schubert | Family::Grothendieck => x,
        Family::DoubleSchubert => &x - &Polynomial::y(col, nx, ny),
        Family::DoubleGrothendieck => {
            let y = Polynomial::y(col, nx, ny);
            &(&x + &y) - &(&x * &y)
        }
    }
}

/// Column `i` carries `c(w^{-1})_i` top-justified crosses.
pub fn top_pipe_dream(w: &Permutation) -> PipeDream {
    let code = w.inverse().lehmer_code();
    let mut crosses = Vec::new();
    for (c, &h) in code.iter().enumerate() {
        crosses.extend((1..=h).map(|r| (r, c + 1)));
    }
    PipeDream::new(crosses).unwrap()
}

fn closure(w: &Permutation, with_k_moves: bool) -> Vec<PipeDream> {
    if let Some(masks) = mask_closure(w, with_k_moves) {
        let n = w.size();
        let mut out: Vec<PipeDream> = masks.into_iter().map(|m| PipeDream::new(mask_cells(m, n)).unwrap()).collect();
        out.sort();
        return out;
    }
    move_closure(w, with_k_moves)
}

/// Breadth-first closure of the top pipe dream under (K-)chute moves.
fn move_closure(w: &Permutation, with_k_moves: bool) -> Vec<PipeDream> {
    let start = top_pipe_dream(w);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(p) = queue.pop_front() {
        let mut next = p.chute_moves();
        if with_k_moves {
            next.extend(p.k_chute_moves());
        }
        for q in next {
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// The same closure on bitmasks, cell `(r, c)` at bit `(r-1)·N + c-1`, for
/// `N = |w|` with `N² ≤ 128`. `None` when the grid does not fit.
fn mask_closure(w: &Permutation, with_k_moves: bool) -> Option<Vec<u128>> {
    let n = w.size();
    if n * n > 128 {
        return None;
    }
    let bit = |r: usize, c: usize| 1u128 << ((r - 1) * n + c - 1);
    let start = top_pipe_dream(w).crosses().iter().fold(0u128, |m, &(r, c)| m | bit(r, c));
    let mut seen: HashSet<u128> = HashSet::new();
    seen.insert(start);
    let mut stack = vec![start];
    while let Some(m) = stack.pop() {
        let has = |r: usize, c: usize| m & bit(r, c) != 0;
        let mut rest = m;
        while rest != 0 {
            let idx = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (k, jp1) = (idx / n + 1, idx % n + 1);
            if jp1 < 2 {
                continue;
            }
            if k + 1 > n {
                return None;
            }
            if has(k + 1, jp1) {
                continue;
            }
            // scan left through columns fully crossed in rows k, k+1
            let mut i = jp1 - 1;
            while i >= 1 && has(k, i) && has(k + 1, i) {
                i -= 1;
            }
            if i == 0 || has(k, i) || has(k + 1, i) {
                continue;
            }
            // a chute moves the cross; a K-chute also keeps the source
            let kept = m | bit(k + 1, i);
            let moves = [Some(kept & !bit(k, jp1)), with_k_moves.then_some(kept)];
            for q in moves.into_iter().flatten() {
                if seen.insert(q) {
                    stack.push(q);
                }
            }
        }
    }
    Some(seen.into_iter().collect())
}

fn mask_cells(m: u128, n: usize) -> Vec<(usize, usize)> {
    let mut cells = Vec::new();
    let mut rest = m;
    while rest != 0 {
        let idx = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        cells.push((idx / n + 1, idx % n + 1));
    }
    cells
}

/// Reduced pipe dreams of `w`, sorted by cross list.
pub fn reduced_pipe_dreams(w: &Permutation) -> Vec<PipeDream> {
    closure(w, false)
}

/// All (reduced and non-reduced) pipe dreams of `w`, sorted by cross list.
pub fn all_pipe_dreams(w: &Permutation) -> Vec<PipeDream> {
    closure(w, true)
}

/// `Σ_P wt(P)` over the reduced (ordinary families) or all (K-theoretic
/// families) pipe dreams of `w`, in `n = |w|` variables per block.
pub fn pipe_dream_polynomial(family: Family, w: &Permutation) -> Polynomial {
    let n = w.size().max(1);
    let ny = if family.is_double() { n } else { 0 };
    let labels: Vec<usize> = (1..=n).collect();
    let dreams = if family.is_k_theoretic() { all_pipe_dreams(w) } else { reduced_pipe_dreams(w) };
    let rows = dreams.iter().map(|p| cross_rows(p.crosses(), n));
    signed_sum(family, rows, &labels, w.length(), n, ny)
}

/// Column lists of the crosses in rows `1..=n`.
fn cross_rows(crosses: &[(usize, usize)], n: usize) -> Vec<Vec<usize>> {
    let mut rows = vec![Vec::new(); n];
    for &(i, j) in crosses {
        rows[i - 1].push(j);
    }
    rows
}

/// `Σ_P (-1)^{|P| - ℓ} ∏ factor` in the K-theoretic families, plain sum of
/// products otherwise; the sign is spread over rows as `(-1)^{|row|}`.
fn signed_sum(
    family: Family,
    rows: impl IntoIterator<Item = Vec<Vec<usize>>>,
    labels: &[usize],
    length: usize,
    nx: usize,
    ny: usize,
) -> Polynomial {
    let sum = row_factored_sum(rows, nx, ny, |r, cols| {
        let mut acc = Polynomial::one(nx, ny);
        for &j in cols {
            acc = &acc * &cross_factor(family, labels[r - 1], j, nx, ny);
        }
        if family.is_k_theoretic() && cols.len() % 2 == 1 {
            acc = -&acc;
        }
        acc
    });
    if family.is_k_theoretic() && length % 2 == 1 {
        -&sum
    } else {
        sum
    }
}

/// First `k` columns of a pipe dream of `std(conv(w))`, rows relabelled so
/// that row `r` carries the variable `x_{σ(r)}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WordPipeDream {
    pub n: usize,
    pub k: usize,
    pub crosses: Vec<(usize, usize)>,
    pub labels: Vec<usize>,
    pub reduced: bool,
    excess: usize,
}

impl WordPipeDream {
    pub fn weight(&self, family: Family) -> Polynomial {
        let ny = if family.is_double() { self.k } else { 0 };
        let mut acc = Polynomial::one(self.n, ny);
        for &(i, j) in &self.crosses {
            acc = &acc * &cross_factor(family, self.labels[i - 1], j, self.n, ny);
        }
        if family.is_k_theoretic() && self.excess % 2 == 1 {
            acc = -&acc;
        }
        acc
    }
}

/// Truncates a pipe dream of `u = std(conv(w))` to the `n × k` window.
pub fn truncate_to_word(p: &PipeDream, w: &Word) -> Result<WordPipeDream> {
    let length = w.convexify().standardize().length();
    truncate(p, w, length, &w.associated_permutation().into_values())
}

fn truncate(p: &PipeDream, w: &Word, length: usize, labels: &[usize]) -> Result<WordPipeDream> {
    let (n, k) = (w.len(), w.k());
    if let Some(&(i, j)) = p.crosses().iter().find(|&&(i, j)| i > n || j > k) {
        return Err(Error::OutsideRectangle(format!("pipe dream of word {w} has a cross at ({i}, {j})")));
    }
    Ok(WordPipeDream {
        n,
        k,
        crosses: p.crosses().to_vec(),
        labels: labels.to_vec(),
        reduced: p.len() == length,
        excess: p.len() - length,
    })
}

pub fn word_pipe_dreams(w: &Word, reduced_only: bool) -> Result<Vec<WordPipeDream>> {
    let u = w.convexify().standardize();
    let dreams = if reduced_only { reduced_pipe_dreams(&u) } else { all_pipe_dreams(&u) };
    let labels = w.associated_permutation().into_values();
    dreams.iter().map(|p| truncate(p, w, u.length(), &labels)).collect()
}

/// Whether every pipe dream of `std(conv(w))`, reduced or not, lies in the
/// `n × k` window, without building the diagrams; the count on success and
/// the same error as [`word_pipe_dreams`] otherwise.
pub fn check_word_pipe_dreams(w: &Word) -> Result<usize> {
    let u = w.convexify().standardize();
    let Some(masks) = mask_closure(&u, true) else {
        return word_pipe_dreams(w, false).map(|d| d.len());
    };
    let size = u.size();
    let mut window = 0u128;
    for r in 1..=w.len().min(size) {
        for c in 1..=w.k().min(size) {
            window |= 1 << ((r - 1) * size + c - 1);
        }
    }
    let first_bad = masks.iter().filter(|&&m| m & !window != 0).map(|&m| PipeDream::new(mask_cells(m, size)).unwrap()).min();
    match first_bad {
        Some(p) => truncate(&p, w, u.length(), &[]).map(|_| 0),
        None => Ok(masks.len()),
    }
}

pub fn word_pipe_dream_polynomial(family: Family, w: &Word) -> Result<Polynomial> {
    let dreams = word_pipe_dreams(w, !family.is_k_theoretic())?;
    let ny = if family.is_double() { w.k() } else { 0 };
    let labels = w.associated_permutation().into_values();
    let length = w.convexify().standardize().length();
    let rows = dreams.iter().map(|p| cross_rows(&p.crosses, w.len()));
    Ok(signed_sum(family, rows, &labels, length, w.len(), ny))
}

/// Every subset of the staircase `i + j ≤ n` whose Demazure product is `w`.
/// Exponential; meant as an oracle for small `n`.
pub fn brute_force_pipe_dreams(w: &Permutation) -> Vec<PipeDream> {
    let n = w.size();
    let cells: Vec<(usize, usize)> =
        (1..n).flat_map(|i| (1..=n - i).map(move |j| (i, j))).collect();
    let target = w.trimmed();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << cells.len()) {
        let crosses = cells.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &c)| c).collect();
        let p = PipeDream::new(crosses).unwrap();
        if p.permutation() == target {
            out.push(p);
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyCache;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn top_pipe_dream_of_example() {
        let p = top_pipe_dream(&perm("24153"));
        assert_eq!(p.crosses(), [(1, 1), (1, 3), (2, 1), (2, 3)]);
        assert_eq!(p.reading_word(), [3, 1, 4, 2]);
        assert_eq!(p.permutation(), perm("24153"));
        assert_eq!(p.trace_permutation(), perm("24153"));
    }

    #[test]
    fn reduced_pipe_dreams_of_example() {
        let dreams = reduced_pipe_dreams(&perm("24153"));
        assert_eq!(dreams.len(), 5);
        assert!(dreams.iter().all(|p| p.is_reduced() && p.permutation() == perm("24153")));
        assert_eq!(dreams, brute_force_pipe_dreams(&perm("24153")).into_iter().filter(PipeDream::is_reduced).collect::<Vec<_>>());
    }

    #[test]
    fn closures_match_brute_force() {
        for n in 1..=4 {
            for w in Permutation::all(n) {
                let brute = brute_force_pipe_dreams(&w);
                assert_eq!(all_pipe_dreams(&w), brute, "{w}");
                let reduced: Vec<_> = brute.into_iter().filter(PipeDream::is_reduced).collect();
                assert_eq!(reduced_pipe_dreams(&w), reduced, "{w}");
            }
        }
    }

    #[test]
    fn mask_closure_matches_move_closure() {
        let extra = ["1432765", "2143657", "3152746"].map(perm);
        for w in Permutation::all(5).chain(extra) {
            for k in [false, true] {
                assert_eq!(closure(&w, k), move_closure(&w, k), "{w}");
            }
        }
    }

    #[test]
    fn rectangle_check_matches_enumeration() {
        for n in 1..=4 {
            for k in 1..=3 {
                for w in crate::combinat::all_words(n, k) {
                    let full = word_pipe_dreams(&w, false).map(|d| d.len());
                    assert_eq!(check_word_pipe_dreams(&w).ok(), full.ok(), "{w}");
                }
            }
        }
    }

    #[test]
    fn generating_functions_small() {
        let mut cache = PolyCache::new();
        for w in Permutation::all(4) {
            for family in [Family::Schubert, Family::Grothendieck, Family::DoubleSchubert, Family::DoubleGrothendieck] {
                assert_eq!(pipe_dream_polynomial(family, &w), cache.get(family, &w), "{w} {family:?}");
            }
        }
    }

    #[test]
    fn word_truncation_of_example() {
        let w = Word::parse("21231", Some(3)).unwrap();
        let dreams = word_pipe_dreams(&w, true).unwrap();
        assert_eq!(dreams.len(), 5);
        assert_eq!(dreams[0].labels, [1, 3, 2, 5, 4]);
        let mut cache = PolyCache::new();
        assert_eq!(
            word_pipe_dream_polynomial(Family::Schubert, &w).unwrap(),
            crate::poly::schubert_of_word(&w, &mut cache).unwrap()
        );
    }
}
