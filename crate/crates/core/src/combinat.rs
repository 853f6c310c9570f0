//! Permutations in one-line notation and words over `[k]`.
//!
//! Both are 1-indexed: a permutation of size `n` is a rearrangement of
//! `1..=n`, and a word in `[k]^n` has letters in `1..=k`. Positions passed to
//! methods are 1-indexed as well.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    values: Vec<usize>,
}

impl Permutation {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        let n = values.len();
        let mut seen = vec![false; n + 1];
        for &v in &values {
            if v == 0 || v > n || seen[v] {
                return Err(Error::InvalidPermutation(format!("{values:?}")));
            }
            seen[v] = true;
        }
        Ok(Self { values })
    }

    pub fn identity(n: usize) -> Self {
        Self { values: (1..=n).collect() }
    }

    /// The longest element `n (n-1) ... 1`.
    pub fn longest(n: usize) -> Self {
        Self { values: (1..=n).rev().collect() }
    }

    /// Size `n` of the symmetric group this permutation is taken in.
    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn into_values(self) -> Vec<usize> {
        self.values
    }

    /// `w(i)` for 1-indexed `i`; fixed points beyond the size are implicit.
    pub fn at(&self, i: usize) -> usize {
        if i > self.values.len() {
            i
        } else {
            self.values[i - 1]
        }
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.values.len()];
        for (i, &v) in self.values.iter().enumerate() {
            inv[v - 1] = i + 1;
        }
        Self { values: inv }
    }

    /// `(self ∘ other)(i) = self(other(i))`, padded to the larger size.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.size().max(other.size());
        Self { values: (1..=n).map(|i| self.at(other.at(i))).collect() }
    }

    /// Pads with fixed points up to size `n` (no-op if already that large).
    pub fn extended(&self, n: usize) -> Self {
        let mut values = self.values.clone();
        values.extend(values.len() + 1..=n);
        Self { values }
    }

    /// Drops trailing fixed points.
    pub fn trimmed(&self) -> Self {
        let mut values = self.values.clone();
        while values.last() == Some(&values.len()) {
            values.pop();
        }
        Self { values }
    }

    /// Pairs `(i, j)` with `i < j` and `w(i) > w(j)`.
    pub fn inversions(&self) -> Vec<(usize, usize)> {
        let n = self.values.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if self.values[i] > self.values[j] {
                    out.push((i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn length(&self) -> usize {
        self.lehmer_code().iter().sum()
    }

    /// `c_i = #{j > i : w(j) < w(i)}`.
    pub fn lehmer_code(&self) -> Vec<usize> {
        let v = &self.values;
        (0..v.len()).map(|i| v[i + 1..].iter().filter(|&&x| x < v[i]).count()).collect()
    }

    pub fn from_lehmer_code(code: &[usize]) -> Result<Self> {
        let n = code.len();
        let mut avail: Vec<usize> = (1..=n).collect();
        let mut values = Vec::with_capacity(n);
        for &c in code {
            if c >= avail.len() {
                return Err(Error::InvalidPermutation(format!("code {code:?}")));
            }
            values.push(avail.remove(c));
        }
        Ok(Self { values })
    }

    pub fn rank_table(&self) -> RankTable {
        RankTable::new(self)
    }

    /// Right multiplication by `s_i`: swaps the values in positions `i, i+1`.
    pub fn swap_positions(&self, i: usize) -> Self {
        let mut p = self.extended(i + 1);
        p.values.swap(i - 1, i);
        p
    }

    pub fn has_ascent_at(&self, i: usize) -> bool {
        self.at(i) < self.at(i + 1)
    }

    pub fn descents(&self) -> Vec<usize> {
        (1..self.values.len()).filter(|&i| !self.has_ascent_at(i)).collect()
    }

    /// Weakly decreasing Lehmer code, i.e. 132-avoiding.
    pub fn is_dominant(&self) -> bool {
        self.lehmer_code().windows(2).all(|w| w[0] >= w[1])
    }

    /// Rothe diagram `{(i, j) : j < w(i), i < w^{-1}(j)}`, row-major.
    pub fn rothe_diagram(&self) -> Vec<(usize, usize)> {
        let inv = self.inverse();
        let n = self.size();
        let mut cells = Vec::new();
        for i in 1..=n {
            for j in 1..self.at(i) {
                if i < inv.at(j) {
                    cells.push((i, j));
                }
            }
        }
        cells
    }

    /// Demazure (0-Hecke) product `s_{a_1} ⋆ s_{a_2} ⋆ ...`, read left to right.
    pub fn demazure_product(word: &[usize], size: usize) -> Self {
        let top = word.iter().map(|a| a + 1).max().unwrap_or(0).max(size);
        let mut w = Self::identity(top);
        for &a in word {
            if w.values[a - 1] < w.values[a] {
                w.values.swap(a - 1, a);
            }
        }
        w
    }

    /// All permutations of size `n` in lexicographic order.
    pub fn all(n: usize) -> Permutations {
        Permutations { next: Some((1..=n).collect()) }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.values, self.values.len() <= 9)
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::new(parse_letters(s).map_err(|_| Error::InvalidPermutation(s.into()))?)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[usize], compact: bool) -> fmt::Result {
    for (i, l) in letters.iter().enumerate() {
        if i > 0 && !compact {
            f.write_str(",")?;
        }
        write!(f, "{l}")?;
    }
    Ok(())
}

/// Digit strings (`"24153"`) or comma-separated lists (`"10,2,1"`).
pub fn parse_letters(s: &str) -> core::result::Result<Vec<usize>, ()> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse::<usize>().map_err(|_| ())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or(())).collect()
    }
}

/// Lexicographic successor iteration over `S_n`.
pub struct Permutations {
    next: Option<Vec<usize>>,
}

impl Iterator for Permutations {
    type Item = Permutation;

    fn next(&mut self) -> Option<Permutation> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if next_lex(&mut succ) {
            self.next = Some(succ);
        }
        Some(Permutation { values: cur })
    }
}

fn next_lex(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| v[i] < v[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| v[j] > v[i]).unwrap();
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

/// `r_w(p, q) = #{i ≤ p : w(i) ≤ q}` for `0 ≤ p, q ≤ n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankTable {
    n: usize,
    table: Vec<usize>,
}

impl RankTable {
    fn new(w: &Permutation) -> Self {
        let n = w.size();
        let mut table = vec![0; (n + 1) * (n + 1)];
        for p in 1..=n {
            for q in 1..=n {
                let hit = usize::from(w.at(p) == q);
                table[p * (n + 1) + q] = table[(p - 1) * (n + 1) + q] + table[p * (n + 1) + q - 1]
                    - table[(p - 1) * (n + 1) + q - 1]
                    + hit;
            }
        }
        Self { n, table }
    }

    pub fn get(&self, p: usize, q: usize) -> usize {
        self.table[p.min(self.n) * (self.n + 1) + q.min(self.n)]
    }
}

/// A word in `[k]^n`. The alphabet size is part of the value since
/// convexification and standardization depend on it.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<usize>,
    k: usize,
}

impl Word {
    pub fn new(letters: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 && !letters.is_empty() {
            return Err(Error::InvalidWord("empty alphabet".into()));
        }
        if let Some(&letter) = letters.iter().find(|&&l| l == 0 || l > k) {
            return Err(Error::LetterOutOfRange { letter, k });
        }
        Ok(Self { letters, k })
    }

    /// Parses digits or a comma list; `k` defaults to the largest letter.
    pub fn parse(s: &str, k: Option<usize>) -> Result<Self> {
        let letters = parse_letters(s).map_err(|_| Error::InvalidWord(s.into()))?;
        let k = k.unwrap_or_else(|| letters.iter().copied().max().unwrap_or(0));
        Self::new(letters, k)
    }

    pub fn from_permutation(w: &Permutation) -> Self {
        Self { letters: w.values().to_vec(), k: w.size() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn letters(&self) -> &[usize] {
        &self.letters
    }

    /// `w_i` for 1-indexed `i`.
    pub fn at(&self, i: usize) -> usize {
        self.letters[i - 1]
    }

    /// `F_a`: first position of letter `a`, if present.
    pub fn first_occurrence(&self, a: usize) -> Option<usize> {
        self.letters.iter().position(|&l| l == a).map(|p| p + 1)
    }

    /// Positions holding the first copy of their letter.
    pub fn initial_positions(&self) -> Vec<usize> {
        let mut seen = vec![false; self.k + 1];
        let mut out = Vec::new();
        for (i, &l) in self.letters.iter().enumerate() {
            if !seen[l] {
                seen[l] = true;
                out.push(i + 1);
            }
        }
        out
    }

    pub fn redundant_positions(&self) -> Vec<usize> {
        let init = self.initial_positions();
        (1..=self.len()).filter(|p| !init.contains(p)).collect()
    }

    /// Distinct letters in order of first appearance.
    pub fn initial_letters(&self) -> Vec<usize> {
        self.initial_positions().into_iter().map(|p| self.at(p)).collect()
    }

    pub fn distinct_count(&self) -> usize {
        self.initial_positions().len()
    }

    /// Every letter of `[k]` occurs.
    pub fn is_fubini(&self) -> bool {
        self.distinct_count() == self.k
    }

    pub fn is_convex(&self) -> bool {
        let mut seen = vec![false; self.k + 1];
        for (i, &l) in self.letters.iter().enumerate() {
            if seen[l] && self.letters[i - 1] != l {
                return false;
            }
            seen[l] = true;
        }
        true
    }

    /// Same multiset of letters, each grouped into a block, blocks ordered by
    /// first appearance.
    pub fn convexify(&self) -> Self {
        let mut counts = vec![0usize; self.k + 1];
        for &l in &self.letters {
            counts[l] += 1;
        }
        let mut letters = Vec::with_capacity(self.len());
        for l in self.initial_letters() {
            letters.extend(core::iter::repeat(l).take(counts[l]));
        }
        Self { letters, k: self.k }
    }

    /// Lex-minimal `σ ∈ S_n` with `conv(w)_i = w_{σ(i)}`.
    pub fn associated_permutation(&self) -> Permutation {
        let conv = self.convexify();
        let mut used = vec![false; self.len()];
        let values = conv
            .letters
            .iter()
            .map(|&l| {
                let p = (0..self.len()).find(|&p| !used[p] && self.letters[p] == l).unwrap();
                used[p] = true;
                p + 1
            })
            .collect();
        Permutation { values }
    }

    /// Initial positions keep their letter, the r-th redundant position gets
    /// `k + r`, and the missing letters fill positions `n+1, n+2, ...` in
    /// increasing order. Lies in `S_{n+k-m}` where `m` counts distinct letters.
    pub fn standardize(&self) -> Permutation {
        let mut present = vec![false; self.k + 1];
        let mut values = Vec::with_capacity(self.len() + self.k);
        let mut next = self.k;
        for &l in &self.letters {
            if present[l] {
                next += 1;
                values.push(next);
            } else {
                present[l] = true;
                values.push(l);
            }
        }
        values.extend((1..=self.k).filter(|&l| !present[l]));
        Permutation { values }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters, self.k <= 9)
    }
}

/// `S(n, k)`, Stirling numbers of the second kind.
pub fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for _ in 0..n {
        for j in (1..=k).rev() {
            row[j] = row[j - 1] + j as u128 * row[j];
        }
        row[0] = 0;
    }
    row[k]
}

/// Number of Fubini words in `[k]^n`: `k! S(n, k)`.
pub fn fubini_count(n: usize, k: usize) -> u128 {
    (1..=k as u128).product::<u128>() * stirling2(n, k)
}

/// Largest `n` for which [`enumerate_fubini`] materializes a list.
pub const MATERIALIZE_LIMIT: usize = 10;

pub fn enumerate_fubini(n: usize, k: usize) -> Result<Vec<Word>> {
    if n > MATERIALIZE_LIMIT {
        return Err(Error::MaterializationLimit { what: "Fubini words", n });
    }
    Ok(fubini_words(n, k).collect())
}

/// Fubini words of `[k]^n` in lexicographic order, streamed.
pub fn fubini_words(n: usize, k: usize) -> impl Iterator<Item = Word> {
    all_words(n, k).filter(Word::is_fubini)
}

/// All of `[k]^n` in lexicographic order.
pub fn all_words(n: usize, k: usize) -> Words {
    Words { next: (k > 0 || n == 0).then(|| vec![1; n]), k }
}

pub struct Words {
    next: Option<Vec<usize>>,
    k: usize,
}

impl Iterator for Words {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        if let Some(i) = succ.iter().rposition(|&l| l < self.k) {
            succ[i] += 1;
            succ[i + 1..].fill(1);
            self.next = Some(succ);
        }
        Some(Word { letters: cur, k: self.k })
    }
}

/// Renders a list of letters in the shared text format.
pub fn format_letters(letters: &[usize], max_letter: usize) -> String {
    struct L<'a>(&'a [usize], bool);
    impl fmt::Display for L<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_letters(f, self.0, self.1)
        }
    }
    format!("{}", L(letters, max_letter <= 9))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::{BTreeMap, VecDeque};
    use alloc::string::ToString;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    fn word(s: &str, k: usize) -> Word {
        Word::parse(s, Some(k)).unwrap()
    }

    #[test]
    fn convexification_example() {
        let w = word("2442343", 4);
        assert_eq!(w.convexify().to_string(), "2244433");
        assert_eq!(w.initial_positions(), [1, 2, 5]);
        assert_eq!(w.associated_permutation(), perm("1423657"));
        assert_eq!(w.convexify().standardize(), perm("25467381"));
        assert_eq!(perm("25467381").length(), 12);
        assert!(!w.is_convex());
        assert!(w.convexify().is_convex());
    }

    #[test]
    fn second_word_example() {
        let w = word("21231", 3);
        assert_eq!(w.convexify().to_string(), "22113");
        assert_eq!(w.convexify().standardize(), perm("24153"));
        assert_eq!(w.associated_permutation().inverse(), perm("13254"));
    }

    #[test]
    fn associated_permutation_recovers_word() {
        for w in all_words(5, 3) {
            let conv = w.convexify();
            let sigma = w.associated_permutation();
            for i in 1..=w.len() {
                assert_eq!(conv.at(i), w.at(sigma.at(i)));
            }
        }
    }

    #[test]
    fn standardization_of_permutation_word_is_identity_map() {
        for p in Permutation::all(5) {
            assert_eq!(Word::from_permutation(&p).standardize(), p);
        }
    }

    #[test]
    fn codes_and_inversions() {
        let w = perm("24153");
        assert_eq!(w.lehmer_code(), [1, 2, 0, 1, 0]);
        assert_eq!(w.inversions().len(), 4);
        assert_eq!(w.inverse(), perm("31524"));
        assert_eq!(w.inverse().lehmer_code(), [2, 0, 2, 0, 0]);
        for p in Permutation::all(6) {
            assert_eq!(Permutation::from_lehmer_code(&p.lehmer_code()).unwrap(), p);
            assert_eq!(p.rothe_diagram().len(), p.length());
        }
    }

    // Distance from the identity in the Cayley graph generated by adjacent
    // transpositions equals the inversion count.
    #[test]
    fn length_matches_cayley_graph_distance() {
        for n in 1..=6 {
            let mut dist = BTreeMap::new();
            let mut queue = VecDeque::new();
            dist.insert(Permutation::identity(n), 0usize);
            queue.push_back(Permutation::identity(n));
            while let Some(p) = queue.pop_front() {
                let d = dist[&p];
                for i in 1..n {
                    let q = p.swap_positions(i);
                    if !dist.contains_key(&q) {
                        dist.insert(q.clone(), d + 1);
                        queue.push_back(q);
                    }
                }
            }
            assert_eq!(dist.len() as u128, fubini_count(n, n));
            for (p, d) in dist {
                assert_eq!(p.length(), d, "{p}");
                assert_eq!(p.inversions().len(), d);
            }
        }
    }

    #[test]
    fn rank_table_counts() {
        let w = perm("24153");
        let r = w.rank_table();
        for p in 0..=5 {
            for q in 0..=5 {
                let direct = (1..=p).filter(|&i| w.at(i) <= q).count();
                assert_eq!(r.get(p, q), direct);
            }
        }
    }

    #[test]
    fn demazure_product_absorbs_repeats() {
        assert_eq!(Permutation::demazure_product(&[1, 1], 2), perm("21"));
        assert_eq!(Permutation::demazure_product(&[1, 2, 1, 2], 3), perm("321"));
        assert_eq!(Permutation::demazure_product(&[3, 1, 4, 2], 5), perm("24153"));
    }

    #[test]
    fn fubini_counts() {
        assert_eq!(fubini_count(5, 3), 150);
        assert_eq!(fubini_count(4, 4), 24);
        assert_eq!(stirling2(7, 3), 301);
        assert_eq!(fubini_count(5, 5), 120);
        for (n, k) in [(4, 2), (5, 3), (6, 4), (3, 3), (4, 1)] {
            assert_eq!(fubini_words(n, k).count() as u128, fubini_count(n, k));
        }
        assert_eq!(fubini_count(3, 4), 0);
        assert!(enumerate_fubini(11, 2).is_err());
        assert_eq!(fubini_words(11, 2).count(), 2046);
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(perm("10,9,8,7,6,5,4,3,2,1").to_string(), "10,9,8,7,6,5,4,3,2,1");
        assert!("1224".parse::<Permutation>().is_err());
        assert_eq!(Word::parse("12,3", Some(12)).unwrap().to_string(), "12,3");
        assert!(matches!(Word::parse("4", Some(3)), Err(Error::LetterOutOfRange { .. })));
        assert_eq!(Permutation::all(4).count(), 24);
    }

    #[test]
    fn dominance() {
        assert!(perm("321").is_dominant());
        assert!(perm("312").is_dominant());
        assert!(!perm("132").is_dominant());
        assert!(perm("1").is_dominant());
    }
}
