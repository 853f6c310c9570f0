//! Bumpless pipe dreams on an `N × N` grid.
//!
//! One pipe enters the south edge of each column and one leaves the east edge
//! of each row; pipes only travel north and east. The pipe that enters column
//! `c` and leaves row `r` gives `w(r) = c`, so the Rothe diagram BPD of `w`
//! has its SE elbows at `(i, w(i))`.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::combinat::{Permutation, Word};
use crate::error::{Error, Result};
use crate::poly::{row_factored_sum, Family, Polynomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tile {
    Blank,
    Cross,
    Horizontal,
    Vertical,
    /// Connects the south and east sides.
    SeElbow,
    /// Connects the north and west sides.
    NwElbow,
}

impl Tile {
    pub const ALL: [Tile; 6] = [Tile::Blank, Tile::Cross, Tile::Horizontal, Tile::Vertical, Tile::SeElbow, Tile::NwElbow];

    pub fn north(self) -> bool {
        matches!(self, Tile::Cross | Tile::Vertical | Tile::NwElbow)
    }

    pub fn south(self) -> bool {
        matches!(self, Tile::Cross | Tile::Vertical | Tile::SeElbow)
    }

    pub fn east(self) -> bool {
        matches!(self, Tile::Cross | Tile::Horizontal | Tile::SeElbow)
    }

    pub fn west(self) -> bool {
        matches!(self, Tile::Cross | Tile::Horizontal | Tile::NwElbow)
    }

    pub fn is_elbow(self) -> bool {
        matches!(self, Tile::SeElbow | Tile::NwElbow)
    }

    /// JSON tag.
    pub fn code(self) -> &'static str {
        match self {
            Tile::Blank => "BLANK",
            Tile::Cross => "CROSS",
            Tile::Horizontal => "HOR",
            Tile::Vertical => "VER",
            Tile::SeElbow => "SE",
            Tile::NwElbow => "NW",
        }
    }

    pub fn from_code(s: &str) -> Option<Tile> {
        Tile::ALL.into_iter().find(|t| t.code() == s)
    }

    /// Box-drawing glyph.
    pub fn glyph(self) -> char {
        match self {
            Tile::Blank => '·',
            Tile::Cross => '┼',
            Tile::Horizontal => '─',
            Tile::Vertical => '│',
            Tile::SeElbow => '┌',
            Tile::NwElbow => '┘',
        }
    }

    pub fn from_glyph(c: char) -> Option<Tile> {
        Tile::ALL.into_iter().find(|t| t.glyph() == c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bpd {
    n: usize,
    tiles: Vec<Tile>,
}

impl Bpd {
    /// Validates edge matching and the boundary conditions.
    pub fn new(n: usize, tiles: Vec<Tile>) -> Result<Self> {
        if tiles.len() != n * n {
            return Err(Error::InvalidDiagram(format!("expected {} tiles, got {}", n * n, tiles.len())));
        }
        let b = Self { n, tiles };
        b.validate()?;
        Ok(b)
    }

    pub fn from_rows(rows: Vec<Vec<Tile>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDiagram("grid is not square".into()));
        }
        Self::new(n, rows.into_iter().flatten().collect())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Tile at 1-indexed `(row, col)`.
    pub fn get(&self, r: usize, c: usize) -> Tile {
        self.tiles[(r - 1) * self.n + c - 1]
    }

    fn set(&mut self, r: usize, c: usize, t: Tile) {
        self.tiles[(r - 1) * self.n + c - 1] = t;
    }

    pub fn rows(&self) -> Vec<Vec<Tile>> {
        self.tiles.chunks(self.n).map(|c| c.to_vec()).collect()
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        for r in 1..=n {
            for c in 1..=n {
                let t = self.get(r, c);
                let west_in = c > 1 && self.get(r, c - 1).east();
                let south_in = if r == n { true } else { self.get(r + 1, c).north() };
                if t.west() != west_in {
                    return Err(Error::InvalidDiagram(format!("horizontal mismatch entering ({r}, {c})")));
                }
                if t.south() != south_in {
                    return Err(Error::InvalidDiagram(format!("vertical mismatch entering ({r}, {c})")));
                }
                if r == 1 && t.north() {
                    return Err(Error::InvalidDiagram(format!("pipe leaves the north edge at column {c}")));
                }
                if c == n && !t.east() {
                    return Err(Error::InvalidDiagram(format!("no pipe leaves the east edge at row {r}")));
                }
            }
        }
        Ok(())
    }

    /// Cells of the given tile type, row-major.
    pub fn cells_of(&self, t: Tile) -> Vec<(usize, usize)> {
        let n = self.n;
        (1..=n).flat_map(|r| (1..=n).map(move |c| (r, c))).filter(|&(r, c)| self.get(r, c) == t).collect()
    }

    pub fn crossing_count(&self) -> usize {
        self.tiles.iter().filter(|&&t| t == Tile::Cross).count()
    }

    /// Follows pipes from the south edge; a second crossing of a pair that
    /// already crossed is ignored, so the result is the Demazure product.
    pub fn permutation(&self) -> Permutation {
        let n = self.n;
        let mut from_south: Vec<Option<usize>> = (0..=n).map(Some).collect();
        let mut crossed = vec![false; (n + 1) * (n + 1)];
        let mut values = vec![0; n];
        for r in (1..=n).rev() {
            let mut from_west: Option<usize> = None;
            for c in 1..=n {
                let s = from_south[c];
                let (north, east) = match self.get(r, c) {
                    Tile::Blank => (None, None),
                    Tile::Vertical => (s, None),
                    Tile::Horizontal => (None, from_west),
                    Tile::SeElbow => (None, s),
                    Tile::NwElbow => (from_west, None),
                    Tile::Cross => {
                        let (a, b) = (s.unwrap(), from_west.unwrap());
                        let pair = &mut crossed[a.min(b) * (n + 1) + a.max(b)];
                        if !core::mem::replace(pair, true) {
                            (s, from_west)
                        } else {
                            (from_west, s)
                        }
                    }
                };
                from_south[c] = north;
                from_west = east;
            }
            values[r - 1] = from_west.expect("every row exits east");
        }
        Permutation::new(values).expect("east exits carry distinct labels")
    }

    pub fn is_reduced(&self) -> bool {
        self.crossing_count() == self.permutation().length()
    }

    /// Droop moves: an SE elbow at `(i, j)` droops into a blank `(i', j')`
    /// strictly south-east when the rectangle between them holds no other
    /// elbow.
    pub fn droop_moves(&self) -> Vec<Bpd> {
        self.rectangle_moves(Tile::Blank)
            .into_iter()
            .map(|(i, j, i2, j2)| {
                let mut b = self.clone();
                b.rewrite(i, j, i2, j2, Tile::NwElbow);
                debug_assert!(b.validate().is_ok());
                b
            })
            .collect()
    }

    /// K-theoretic droops: the south-east corner is an SE elbow of a second
    /// pipe and becomes a cross. Only moves that keep the Demazure
    /// permutation are returned.
    pub fn k_droop_moves(&self) -> Vec<Bpd> {
        let w = self.permutation();
        self.rectangle_moves(Tile::SeElbow)
            .into_iter()
            .filter_map(|(i, j, i2, j2)| {
                let mut b = self.clone();
                b.rewrite(i, j, i2, j2, Tile::Cross);
                (b.validate().is_ok() && b.permutation() == w).then_some(b)
            })
            .collect()
    }

    fn rectangle_moves(&self, corner: Tile) -> Vec<(usize, usize, usize, usize)> {
        let n = self.n;
        // elbows[r][c]: elbows in rows 1..=r, columns 1..=c
        let mut elbows = vec![0u32; (n + 1) * (n + 1)];
        for r in 1..=n {
            for c in 1..=n {
                elbows[r * (n + 1) + c] = elbows[(r - 1) * (n + 1) + c] + elbows[r * (n + 1) + c - 1]
                    - elbows[(r - 1) * (n + 1) + c - 1]
                    + self.get(r, c).is_elbow() as u32;
            }
        }
        let count = |i: usize, j: usize, i2: usize, j2: usize| {
            elbows[i2 * (n + 1) + j2] + elbows[(i - 1) * (n + 1) + j - 1]
                - elbows[(i - 1) * (n + 1) + j2]
                - elbows[i2 * (n + 1) + j - 1]
        };
        let corner_elbows = 1 + corner.is_elbow() as u32;
        let mut out = Vec::new();
        for (i, j) in self.cells_of(Tile::SeElbow) {
            for i2 in i + 1..=n {
                // the rectangle only grows with i2, so a dirty first column ends the scan
                if count(i, j, i2, j) > 1 {
                    break;
                }
                for j2 in j + 1..=n {
                    let inside = count(i, j, i2, j2);
                    if inside > corner_elbows {
                        break;
                    }
                    if self.get(i2, j2) == corner && inside == corner_elbows {
                        out.push((i, j, i2, j2));
                    }
                }
            }
        }
        out
    }

    // Moves the pipe through (i, j) onto the south and east sides of the
    // rectangle; the interior is untouched.
    fn rewrite(&mut self, i: usize, j: usize, i2: usize, j2: usize, corner: Tile) {
        self.set(i, j, Tile::Blank);
        self.set(i2, j2, corner);
        self.set(i2, j, Tile::SeElbow);
        self.set(i, j2, Tile::SeElbow);
        for r in i + 1..i2 {
            let t = match self.get(r, j) {
                Tile::Vertical => Tile::Blank,
                Tile::Cross => Tile::Horizontal,
                t => t,
            };
            self.set(r, j, t);
            let t = match self.get(r, j2) {
                Tile::Blank => Tile::Vertical,
                Tile::Horizontal => Tile::Cross,
                t => t,
            };
            self.set(r, j2, t);
        }
        for c in j + 1..j2 {
            let t = match self.get(i, c) {
                Tile::Horizontal => Tile::Blank,
                Tile::Cross => Tile::Vertical,
                t => t,
            };
            self.set(i, c, t);
            let t = match self.get(i2, c) {
                Tile::Blank => Tile::Horizontal,
                Tile::Vertical => Tile::Cross,
                t => t,
            };
            self.set(i2, c, t);
        }
    }

    pub fn weight(&self, family: Family, labels: &[usize], nx: usize, ny: usize) -> Polynomial {
        let sign_length = self.permutation().length();
        bpd_weight(family, self.n, self.n, |r, c| self.get(r, c), labels, sign_length, nx, ny)
    }

    pub fn render(&self) -> String {
        self.rows().iter().map(|row| row.iter().map(|t| t.glyph()).collect::<String>()).collect::<Vec<_>>().join("\n")
    }
}

/// Weights over an `rows × cols` window. Blanks contribute `x_i`, `x_i - y_j`
/// or `-(x_i + y_j - x_i y_j)`; NW elbows contribute `1 - x_i` or
/// `(1 - x_i)(1 - y_j)` in the K-theoretic families, and the K-theoretic
/// product is normalised by `(-1)^ℓ`.
#[allow(clippy::too_many_arguments)]
fn bpd_weight(
    family: Family,
    rows: usize,
    cols: usize,
    tile: impl Fn(usize, usize) -> Tile,
    labels: &[usize],
    length: usize,
    nx: usize,
    ny: usize,
) -> Polynomial {
    let mut acc = Polynomial::one(nx, ny);
    for r in 1..=rows {
        let row: Vec<Tile> = (1..=cols).map(|c| tile(r, c)).collect();
        acc = &acc * &row_weight(family, labels[r - 1], &row, nx, ny);
    }
    if family.is_k_theoretic() && length % 2 == 1 {
        acc = -&acc;
    }
    acc
}

fn row_weight(family: Family, label: usize, row: &[Tile], nx: usize, ny: usize) -> Polynomial {
    let one = Polynomial::one(nx, ny);
    let x = Polynomial::x(label, nx, ny);
    let mut acc = one.clone();
    for (c, &t) in (1..).zip(row) {
        let factor = match (t, family) {
            (Tile::Blank, Family::Schubert) => x.clone(),
            (Tile::Blank, Family::DoubleSchubert) => &x - &Polynomial::y(c, nx, ny),
            (Tile::Blank, Family::Grothendieck) => -&x,
            (Tile::Blank, Family::DoubleGrothendieck) => {
                let y = Polynomial::y(c, nx, ny);
                &(&x * &y) - &(&x + &y)
            }
            (Tile::NwElbow, Family::Grothendieck) => &one - &x,
            (Tile::NwElbow, Family::DoubleGrothendieck) => &(&one - &x) * &(&one - &Polynomial::y(c, nx, ny)),
            _ => continue,
        };
        acc = &acc * &factor;
    }
    acc
}

/// [`bpd_weight`] summed over many diagrams of one common length.
fn bpd_sum(
    family: Family,
    diagrams: impl IntoIterator<Item = Vec<Vec<Tile>>>,
    labels: &[usize],
    length: usize,
    nx: usize,
    ny: usize,
) -> Polynomial {
    let sum = row_factored_sum(diagrams, nx, ny, |r, row| row_weight(family, labels[r - 1], row, nx, ny));
    if family.is_k_theoretic() && length % 2 == 1 {
        -&sum
    } else {
        sum
    }
}

/// The Rothe BPD: SE elbows at `(i, w(i))`, each pipe running down to the
/// south edge and right to the east edge.
pub fn diagram_bpd(w: &Permutation) -> Bpd {
    let n = w.size();
    let mut vertical = vec![false; n * n];
    let mut horizontal = vec![false; n * n];
    let mut tiles = vec![Tile::Blank; n * n];
    for i in 1..=n {
        let c = w.at(i);
        tiles[(i - 1) * n + c - 1] = Tile::SeElbow;
        for r in i + 1..=n {
            vertical[(r - 1) * n + c - 1] = true;
        }
        for cc in c + 1..=n {
            horizontal[(i - 1) * n + cc - 1] = true;
        }
    }
    for idx in 0..n * n {
        if tiles[idx] == Tile::SeElbow {
            continue;
        }
        tiles[idx] = match (vertical[idx], horizontal[idx]) {
            (true, true) => Tile::Cross,
            (true, false) => Tile::Vertical,
            (false, true) => Tile::Horizontal,
            (false, false) => Tile::Blank,
        };
    }
    Bpd::new(n, tiles).expect("Rothe BPD is valid")
}

fn closure(w: &Permutation, with_k_moves: bool) -> Vec<Bpd> {
    let start = diagram_bpd(w);
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(b) = queue.pop_front() {
        let mut next = b.droop_moves();
        if with_k_moves {
            next.extend(b.k_droop_moves());
        }
        for q in next {
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// Reduced BPDs of `w`: the droop closure of the Rothe BPD, sorted.
pub fn reduced_bpds(w: &Permutation) -> Vec<Bpd> {
    closure(w, false)
}

/// All BPDs whose Demazure permutation is `w`: closure under droops and
/// K-droops, sorted.
pub fn all_bpds(w: &Permutation) -> Vec<Bpd> {
    closure(w, true)
}

pub fn bpd_polynomial(family: Family, w: &Permutation) -> Polynomial {
    let n = w.size();
    let ny = if family.is_double() { n } else { 0 };
    let labels: Vec<usize> = (1..=n).collect();
    let dreams = if family.is_k_theoretic() { all_bpds(w) } else { reduced_bpds(w) };
    bpd_sum(family, dreams.iter().map(Bpd::rows), &labels, w.length(), n, ny)
}

/// Every valid `n × n` tiling with Demazure permutation `w`, by backtracking
/// over edge-compatible tiles. Exponential; an oracle for small `n`.
pub fn brute_force_bpds(w: &Permutation) -> Vec<Bpd> {
    let n = w.size();
    let mut out = Vec::new();
    let mut tiles = vec![Tile::Blank; n * n];
    fill(n, 0, &mut tiles, &mut |t| {
        let b = Bpd { n, tiles: t.to_vec() };
        if b.permutation() == *w {
            out.push(b);
        }
    });
    out.sort();
    out
}

fn fill(n: usize, idx: usize, tiles: &mut [Tile], emit: &mut impl FnMut(&[Tile])) {
    if idx == n * n {
        // the bottom row must accept a pipe from the south in every column
        if (0..n).all(|c| tiles[(n - 1) * n + c].south()) {
            emit(tiles);
        }
        return;
    }
    let (r, c) = (idx / n, idx % n);
    for t in Tile::ALL {
        let west_in = c > 0 && tiles[idx - 1].east();
        if t.west() != west_in || (r == 0 && t.north()) || (c == n - 1 && !t.east()) {
            continue;
        }
        if r > 0 && tiles[idx - n].south() != t.north() {
            continue;
        }
        tiles[idx] = t;
        fill(n, idx + 1, tiles, emit);
    }
}

/// First `k` columns of a BPD of `std(conv(w))`, rows relabelled by the
/// associated permutation.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WordBpd {
    pub n: usize,
    pub k: usize,
    /// Row-major `n × k` tiles.
    pub tiles: Vec<Tile>,
    pub labels: Vec<usize>,
    pub reduced: bool,
    length: usize,
}

impl WordBpd {
    pub fn get(&self, r: usize, c: usize) -> Tile {
        self.tiles[(r - 1) * self.k + c - 1]
    }

    pub fn rows(&self) -> Vec<Vec<Tile>> {
        self.tiles.chunks(self.k.max(1)).map(|c| c.to_vec()).collect()
    }

    pub fn weight(&self, family: Family) -> Polynomial {
        let ny = if family.is_double() { self.k } else { 0 };
        bpd_weight(family, self.n, self.k, |r, c| self.get(r, c), &self.labels, self.length, self.n, ny)
    }
}

/// Truncates to the `n × k` window; blanks and NW elbows must all lie inside.
pub fn truncate_to_word(b: &Bpd, w: &Word) -> Result<WordBpd> {
    truncate(b, w, b.permutation().length(), &w.associated_permutation().into_values())
}

fn truncate(b: &Bpd, w: &Word, length: usize, labels: &[usize]) -> Result<WordBpd> {
    let (n, k) = (w.len(), w.k());
    for r in 1..=b.size() {
        for c in 1..=b.size() {
            let t = b.get(r, c);
            if (r > n || c > k) && matches!(t, Tile::Blank | Tile::NwElbow) {
                return Err(Error::OutsideRectangle(format!("BPD of word {w} has {t:?} at ({r}, {c})")));
            }
        }
    }
    let tiles = (1..=n).flat_map(|r| (1..=k).map(move |c| (r, c))).map(|(r, c)| b.get(r, c)).collect();
    Ok(WordBpd { n, k, tiles, labels: labels.to_vec(), reduced: b.crossing_count() == length, length })
}

/// BPDs of `std(conv(w))`, each of which has the Demazure permutation
/// `std(conv(w))`, truncated to the `n × k` window.
pub fn word_bpds(w: &Word, reduced_only: bool) -> Result<Vec<WordBpd>> {
    let u = w.convexify().standardize();
    let all = if reduced_only { reduced_bpds(&u) } else { all_bpds(&u) };
    let labels = w.associated_permutation().into_values();
    all.iter().map(|b| truncate(b, w, u.length(), &labels)).collect()
}

pub fn word_bpd_polynomial(family: Family, w: &Word) -> Result<Polynomial> {
    let ny = if family.is_double() { w.k() } else { 0 };
    let labels = w.associated_permutation().into_values();
    let length = w.convexify().standardize().length();
    let dreams = word_bpds(w, !family.is_k_theoretic())?;
    Ok(bpd_sum(family, dreams.iter().map(WordBpd::rows), &labels, length, w.len(), ny))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyCache;
    use alloc::string::ToString;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn rothe_bpd_of_example() {
        let b = diagram_bpd(&perm("24153"));
        assert_eq!(b.cells_of(Tile::SeElbow), [(1, 2), (2, 4), (3, 1), (4, 5), (5, 3)]);
        assert_eq!(b.cells_of(Tile::Blank), [(1, 1), (2, 1), (2, 3), (4, 3)]);
        assert_eq!(b.permutation(), perm("24153"));
        assert!(b.is_reduced());
        let labels = [1, 2, 3, 4, 5];
        assert_eq!(b.weight(Family::Schubert, &labels, 5, 0).to_string(), "x1*x2^2*x4");
    }

    #[test]
    fn reduced_bpds_of_example() {
        let w = perm("24153");
        let all = reduced_bpds(&w);
        assert_eq!(all.len(), 5);
        assert!(all.iter().all(|b| b.is_reduced() && b.permutation() == w));
        let mut cache = PolyCache::new();
        assert_eq!(bpd_polynomial(Family::Schubert, &w), cache.get(Family::Schubert, &w));
    }

    #[test]
    fn closures_match_brute_force() {
        for n in 1..=4 {
            for w in Permutation::all(n) {
                let brute = brute_force_bpds(&w);
                assert_eq!(all_bpds(&w), brute, "{w}");
                let reduced: Vec<_> = brute.into_iter().filter(Bpd::is_reduced).collect();
                assert_eq!(reduced_bpds(&w), reduced, "{w}");
            }
        }
    }

    #[test]
    fn generating_functions_small() {
        let mut cache = PolyCache::new();
        for n in 1..=4 {
            for w in Permutation::all(n) {
                for family in [Family::Schubert, Family::Grothendieck, Family::DoubleSchubert, Family::DoubleGrothendieck] {
                    assert_eq!(bpd_polynomial(family, &w), cache.get(family, &w), "{w} {family:?}");
                }
            }
        }
    }

    #[test]
    fn k_droop_reaches_non_reduced_bpd() {
        // 2143 has one non-reduced BPD, reached from a reduced one by a K-droop
        let w = perm("2143");
        let reduced = reduced_bpds(&w);
        let all = all_bpds(&w);
        assert_eq!((reduced.len(), all.len()), (3, 4));
        let extra: Vec<Bpd> = reduced.iter().flat_map(Bpd::k_droop_moves).collect();
        assert!(!extra.is_empty());
        for b in &extra {
            assert_eq!(b.permutation(), w);
            assert!(!b.is_reduced());
            assert!(all.contains(b) && !reduced.contains(b));
        }
    }

    #[test]
    fn glyphs_round_trip() {
        for t in Tile::ALL {
            assert_eq!(Tile::from_glyph(t.glyph()), Some(t));
            assert_eq!(Tile::from_code(t.code()), Some(t));
        }
    }
}
