//! Batch verification jobs. Each job fans out with rayon and reports in
//! sorted key order, so output is independent of scheduling.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use schubword_core::bpd::{bpd_polynomial, word_bpd_polynomial, word_bpds};
use schubword_core::combinat::{all_words, fubini_words, Permutation, Word};
use schubword_core::geometry::{
    fits_pattern, random_integer_matrix, random_low_rank_matrix, random_torus, random_unitriangular, rational_mod, reduction, Fp, Matrix,
};
use schubword_core::pipedream::{check_word_pipe_dreams, pipe_dream_polynomial, word_pipe_dream_polynomial, PipeDream};
use schubword_core::poly::{word_polynomial, Family, PolyCache, Polynomial};
use schubword_core::rings::{
    elementary_generators, grothendieck_generators, ideals_equal, rnk_rank, verify_grothendieck_basis, verify_schubert_basis,
};
use schubword_core::Error as CoreError;

use crate::Error;

pub const FAMILIES: [Family; 4] = [Family::Schubert, Family::Grothendieck, Family::DoubleSchubert, Family::DoubleGrothendieck];

pub fn family_name(f: Family) -> &'static str {
    match f {
        Family::Schubert => "schubert",
        Family::Grothendieck => "grothendieck",
        Family::DoubleSchubert => "double-schubert",
        Family::DoubleGrothendieck => "double-grothendieck",
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingReport {
    pub n: usize,
    pub k: usize,
    pub rank: usize,
    pub expected: u128,
    pub torsion_free: bool,
    pub ideal_equal: bool,
    pub grothendieck_basis: bool,
    pub schubert_basis: bool,
    pub passed: bool,
}

fn basis_holds(r: Result<schubword_core::rings::BasisReport, CoreError>) -> Result<bool, Error> {
    match r {
        Ok(b) => Ok(b.spans && b.count as u128 == b.expected),
        Err(CoreError::BasisFailure(_)) => Ok(false),
        Err(e) => Err(e.into()),
    }
}

/// Rank and torsion of `R_{n,k}`, equality of the two ideal presentations,
/// and both Fubini bases.
pub fn verify_rings(n: usize, k: usize) -> Result<RingReport, Error> {
    let rank = rnk_rank(n, k)?;
    let mut cache = PolyCache::new();
    let g = grothendieck_generators(n, k, &mut cache)?;
    let ideal_equal = ideals_equal(n, k, &elementary_generators(n, k), &g)?;
    let grothendieck_basis = basis_holds(verify_grothendieck_basis(n, k, &mut cache))?;
    let schubert_basis = basis_holds(verify_schubert_basis(n, k, &mut cache))?;
    let passed = rank.passed() && ideal_equal && grothendieck_basis && schubert_basis;
    Ok(RingReport {
        n,
        k,
        rank: rank.rank,
        expected: rank.expected,
        torsion_free: rank.torsion_free,
        ideal_equal,
        grothendieck_basis,
        schubert_basis,
        passed,
    })
}

/// A failed identity, keyed for sorting.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Mismatch {
    pub model: &'static str,
    pub family: &'static str,
    pub index: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub checked: usize,
    pub mismatches: Vec<Mismatch>,
    /// Words whose diagrams leave the `n × k` window.
    pub rectangle_violations: Vec<String>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.rectangle_violations.is_empty()
    }

    fn merge(mut self, o: IdentityReport) -> IdentityReport {
        self.checked += o.checked;
        self.mismatches.extend(o.mismatches);
        self.rectangle_violations.extend(o.rectangle_violations);
        self
    }

    fn sorted(mut self) -> IdentityReport {
        self.mismatches.sort();
        self.rectangle_violations.sort();
        self
    }
}

/// Pipe dream (`pd`) and bumpless (`bpd`) generating functions of every
/// `w ∈ S_n` against the divided-difference recursion.
pub fn permutation_identities(n: usize, pd: bool, bpd: bool) -> IdentityReport {
    // longest first, so each cache only needs the level above the current one
    let mut perms: Vec<Permutation> = Permutation::all(n).collect();
    perms.sort_by_key(|w| core::cmp::Reverse(w.length()));
    perms
        .par_iter()
        .map_init(PolyCache::new, |cache, w| {
            cache.forget_longer_than(w.length() + 1);
            let mut r = IdentityReport::default();
            for f in FAMILIES {
                let expected = cache.get(f, w);
                let ny = expected.ny();
                let mut run = |model: &'static str, got: Polynomial| {
                    r.checked += 1;
                    if got.with_arity(n, ny) != expected {
                        r.mismatches.push(Mismatch { model, family: family_name(f), index: w.to_string() });
                    }
                };
                if pd {
                    run("pipe-dream", pipe_dream_polynomial(f, w));
                }
                if bpd {
                    run("bpd", bpd_polynomial(f, w));
                }
            }
            r
        })
        .reduce(IdentityReport::default, IdentityReport::merge)
        .sorted()
}

/// Word pipe dream and word BPD generating functions of every Fubini word
/// in `[k]^n`, `k ≤ n`, against the relabelled permutation polynomials.
pub fn word_identities(n: usize) -> IdentityReport {
    let mut words: Vec<(usize, Word)> =
        (1..=n).flat_map(|k| fubini_words(n, k)).map(|w| (w.convexify().standardize().length(), w)).collect();
    words.sort_by_key(|(len, _)| core::cmp::Reverse(*len));
    words
        .par_iter()
        .map_init(PolyCache::new, |cache, (len, w)| {
            cache.forget_longer_than(len + 1);
            let mut r = IdentityReport::default();
            for f in FAMILIES {
                let expected = match word_polynomial(f, w, cache) {
                    Ok(p) => p,
                    Err(_) => {
                        r.rectangle_violations.push(w.to_string());
                        continue;
                    }
                };
                for (model, got) in [("word-pipe-dream", word_pipe_dream_polynomial(f, w)), ("word-bpd", word_bpd_polynomial(f, w))] {
                    r.checked += 1;
                    match got {
                        Ok(p) if p == expected => {}
                        Ok(_) => r.mismatches.push(Mismatch { model, family: family_name(f), index: w.to_string() }),
                        Err(_) => r.rectangle_violations.push(format!("{w} ({model})")),
                    }
                }
            }
            r
        })
        .reduce(IdentityReport::default, IdentityReport::merge)
        .sorted()
}

/// Every pipe dream and BPD (reduced or not) of `std(conv(w))` for all
/// `w ∈ [k]^n`, Fubini or not, keeps its crosses and blanks inside the
/// first `n` rows and `k` columns.
pub fn rectangularity(n: usize, max_k: usize) -> IdentityReport {
    let words: Vec<Word> = (1..=max_k).flat_map(|k| all_words(n, k)).collect();
    words
        .par_iter()
        .map(|w| {
            let mut r = IdentityReport { checked: 2, ..Default::default() };
            if check_word_pipe_dreams(w).is_err() {
                r.rectangle_violations.push(format!("{w} (pipe dream)"));
            }
            if word_bpds(w, false).is_err() {
                r.rectangle_violations.push(format!("{w} (bpd)"));
            }
            r
        })
        .reduce(IdentityReport::default, IdentityReport::merge)
        .sorted()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyResult {
    pub name: &'static str,
    pub samples: usize,
    pub failures: usize,
}

fn sample_polynomial(rng: &mut ChaCha8Rng, nx: usize) -> Polynomial {
    let terms: Vec<(Vec<u8>, BigInt)> =
        (0..rng.gen_range(0..8)).map(|_| ((0..nx).map(|_| rng.gen_range(0..4)).collect(), BigInt::from(rng.gen_range(-5i64..=5)))).collect();
    Polynomial::from_terms(nx, 0, terms)
}

fn sample_permutation(rng: &mut ChaCha8Rng, n: usize) -> Permutation {
    let mut v: Vec<usize> = (1..=n).collect();
    for i in (1..n).rev() {
        v.swap(i, rng.gen_range(0..=i));
    }
    Permutation::new(v).unwrap()
}

/// Top class of `w0 ∈ S_n`: the staircase monomial or its double analogue.
pub fn longest_polynomial(family: Family, n: usize) -> Polynomial {
    let ny = if family.is_double() { n } else { 0 };
    let mut p = Polynomial::one(n, ny);
    for i in 1..n {
        for j in 1..=n - i {
            let x = Polynomial::x(i, n, ny);
            let factor = match family {
                Family::Schubert | Family::Grothendieck => x,
                Family::DoubleSchubert => &x - &Polynomial::y(j, n, ny),
                Family::DoubleGrothendieck => {
                    let y = Polynomial::y(j, n, ny);
                    &(&x + &y) - &(&x * &y)
                }
            };
            p = &p * &factor;
        }
    }
    p
}

/// Climbs from `w` to `w0` through random ascents, then applies the
/// operators back down, so each call follows its own descent path.
pub fn random_path_polynomial(family: Family, w: &Permutation, rng: &mut ChaCha8Rng) -> Polynomial {
    let n = w.size();
    let mut path = Vec::new();
    let mut u = w.clone();
    loop {
        let ascents: Vec<usize> = (1..n).filter(|&i| u.has_ascent_at(i)).collect();
        if ascents.is_empty() {
            break;
        }
        let i = ascents[rng.gen_range(0..ascents.len())];
        path.push(i);
        u = u.swap_positions(i);
    }
    let mut p = longest_polynomial(family, n);
    for &i in path.iter().rev() {
        p = if family.is_k_theoretic() { p.isobaric_divided_difference(i) } else { p.divided_difference(i) }.expect("exact division");
    }
    p
}

fn rational_matrix(rows: &[Vec<i64>]) -> Matrix<BigRational> {
    Matrix::from_integers(rows, &BigRational::zero()).unwrap()
}

/// Runs `samples` independent trials, trial `t` seeded with `seed + t`.
fn trials(name: &'static str, seed: u64, samples: usize, check: impl Fn(&mut ChaCha8Rng) -> bool + Sync) -> PropertyResult {
    let failures = (0..samples as u64).into_par_iter().filter(|t| !check(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(*t)))).count();
    PropertyResult { name, samples, failures }
}

/// The randomized invariant suite; every trial is seeded from `seed`.
pub fn property_suite(seed: u64, samples: usize) -> Vec<PropertyResult> {
    let mut out = vec![
        trials("divided difference squares to zero", seed, samples, |rng| {
            let p = sample_polynomial(rng, 5);
            let i = rng.gen_range(1..5);
            p.divided_difference(i).and_then(|q| q.divided_difference(i)).map(|q| q.is_zero()).unwrap_or(false)
        }),
        trials("isobaric operator is idempotent", seed + 1, samples, |rng| {
            let p = sample_polynomial(rng, 5);
            let i = rng.gen_range(1..5);
            let once = p.isobaric_divided_difference(i).unwrap();
            once.isobaric_divided_difference(i).unwrap() == once
        }),
        trials("lowest degree of grothendieck is schubert", seed + 3, samples, |rng| {
            let n = rng.gen_range(1..=6);
            let w = sample_permutation(rng, n);
            let mut cache = PolyCache::new();
            cache.get(Family::Grothendieck, &w).lowest_degree_component() == cache.get(Family::Schubert, &w)
        }),
        trials("hecke reading agrees with pipe tracing", seed + 4, samples, |rng| {
            let n = rng.gen_range(2..=6);
            let crosses = (1..n).flat_map(|i| (1..=n - i).map(move |j| (i, j))).filter(|_| rng.gen_bool(0.5)).collect::<Vec<_>>();
            let p = PipeDream::new(crosses).unwrap();
            p.permutation() == p.trace_permutation()
        }),
        trials("reduction is invariant under U and T", seed + 5, samples, |rng| {
            let (k, n) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
            let m = rational_matrix(&random_integer_matrix(k, n, rng));
            let q = BigRational::zero();
            let u = random_unitriangular(k, &q, rng);
            let t = random_torus(n, &q, rng);
            let moved = u.mul(&m).unwrap().scale_columns(&t);
            match (reduction(&m), reduction(&moved)) {
                (Ok(a), Ok(b)) => a.word == b.word && a.matrix == b.matrix && fits_pattern(&a.matrix, &a.word),
                _ => false,
            }
        }),
        trials("full column rank gives a fubini word", seed + 6, samples, |rng| {
            let k = rng.gen_range(1..=4);
            let n = k + rng.gen_range(0..=3);
            let m = rational_matrix(&random_integer_matrix(k, n, rng));
            let red = reduction(&m).unwrap();
            red.word.distinct_count() == m.rank() && red.word.is_fubini() == (m.rank() == k)
        }),
        trials("rank deficiency gives a non-fubini word", seed + 7, samples, |rng| {
            let k = rng.gen_range(2..=4);
            let n = rng.gen_range(1..=6);
            let r = rng.gen_range(1..k);
            let m = rational_matrix(&random_low_rank_matrix(k, n, r, rng));
            let red = reduction(&m).unwrap();
            m.rank() < k && !red.word.is_fubini() && fits_pattern(&red.matrix, &red.word)
        }),
        trials("prime-field reduction agrees with rationals", seed + 8, samples, |rng| {
            let p = [3u64, 5, 7][rng.gen_range(0..3)];
            let (k, n) = (rng.gen_range(1..=4), rng.gen_range(1..=6));
            let (ints, red) = loop {
                let ints = random_integer_matrix(k, n, rng);
                let red = reduction(&rational_matrix(&ints)).unwrap();
                let clean = red.decisions.iter().flatten().all(|x| x.is_zero() || rational_mod(x, p).is_some_and(|v| v.value() != 0));
                if clean {
                    break (ints, red);
                }
            };
            let fred = reduction(&Matrix::from_integers(&ints, &Fp::new(0, p).unwrap()).unwrap()).unwrap();
            fred.word == red.word && red.matrix.reduce_mod(p).ok().flatten() == Some(fred.matrix)
        }),
    ];
    for (offset, f) in FAMILIES.into_iter().enumerate() {
        let name = match f {
            Family::Schubert => "descent-path independence (schubert)",
            Family::Grothendieck => "descent-path independence (grothendieck)",
            Family::DoubleSchubert => "descent-path independence (double schubert)",
            Family::DoubleGrothendieck => "descent-path independence (double grothendieck)",
        };
        out.push(trials(name, seed + 20 + offset as u64, samples, move |rng| {
            let n = rng.gen_range(1..=5);
            let w = sample_permutation(rng, n);
            let via_path = random_path_polynomial(f, &w, rng);
            let ny = via_path.ny();
            PolyCache::new().get(f, &w).with_arity(w.size(), ny) == via_path
        }));
    }
    out
}
