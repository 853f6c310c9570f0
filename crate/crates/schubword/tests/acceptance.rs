//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails. Run with `cargo test --test acceptance`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schubword::verify::{permutation_identities, property_suite, rectangularity, verify_rings, word_identities};
use schubword_core::bpd::{reduced_bpds, word_bpds};
use schubword_core::combinat::{Permutation, Word};
use schubword_core::geometry::{cell_dimension_report, parse_rational, pattern_matrix, reduction, Matrix, DEFAULT_PRIME};
use schubword_core::pipedream::{reduced_pipe_dreams, word_pipe_dreams};
use schubword_core::poly::{elementary_symmetric, Family, PolyCache, Polynomial};
use schubword_core::poly::{grothendieck_of_word, schubert_of_word};
use schubword_core::rings::desk_pairs;

/// Per-example budget for the golden and count checks.
const EXAMPLE_BUDGET: Duration = Duration::from_secs(1);
/// Budget for the permutation generating-function suite.
const PERMUTATION_SUITE_BUDGET: Duration = Duration::from_secs(60);
/// Budget for the word generating-function and rectangularity suite.
const WORD_SUITE_BUDGET: Duration = Duration::from_secs(120);
/// Budget for the full ring verification at (n, k) = (5, 3).
const RING_BUDGET_5_3: Duration = Duration::from_secs(600);
/// Largest n checked with classical pipe dreams, and with BPDs.
const PD_MAX_N: usize = 5;
const BPD_MAX_N: usize = 4;
/// Largest word length in the word suite.
const WORD_MAX_N: usize = 5;
/// Samples per randomized property, and the base seed.
const PROPERTY_SAMPLES: usize = 500;
const PROPERTY_SEED: u64 = 2024;
/// Cap on n for k = 1 among the ring pairs (k^n never grows there).
const K1_CAP: usize = 12;

fn poly(nx: usize, terms: &[(i64, [u8; 5])]) -> Polynomial {
    Polynomial::from_terms(nx, 0, terms.iter().map(|(c, e)| (e.to_vec(), BigInt::from(*c))).collect::<Vec<_>>())
}

/// Runs `check` and fails it if it takes longer than `budget`.
fn timed(label: &str, budget: Duration, check: impl FnOnce() -> Result<(), String>) -> Result<(), String> {
    let start = Instant::now();
    let r = check();
    let spent = start.elapsed();
    match r {
        Err(e) => Err(format!("{label}: {e}")),
        Ok(()) if spent > budget => Err(format!("{label}: took {spent:?}, budget {budget:?}")),
        Ok(()) => Ok(()),
    }
}

fn expect<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: T) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got:?}, want {want:?}"))
    }
}

fn word(s: &str, k: usize) -> Word {
    Word::parse(s, Some(k)).unwrap()
}

fn perm(s: &str) -> Permutation {
    s.parse().unwrap()
}

fn criterion_1() -> Result<String, String> {
    let mut cache = PolyCache::new();
    let checks: Vec<(&str, Box<dyn FnOnce(&mut PolyCache) -> Result<(), String>>)> = vec![
        (
            "schubert 24153",
            Box::new(|c: &mut PolyCache| {
                let want = poly(5, &[(1, [2, 2, 0, 0, 0]), (1, [2, 1, 1, 0, 0]), (1, [2, 1, 0, 1, 0]), (1, [1, 2, 1, 0, 0]), (1, [1, 2, 0, 1, 0])]);
                expect("S_24153", c.get(Family::Schubert, &perm("24153")), want)
            }),
        ),
        (
            "grothendieck 12354",
            Box::new(|c: &mut PolyCache| {
                let e = |j| elementary_symmetric(j, 4, 5);
                let want = &(&(&e(1) - &e(2)) + &e(3)) - &e(4);
                expect("G_12354", c.get(Family::Grothendieck, &perm("12354")), want)
            }),
        ),
        (
            "word 2442343",
            Box::new(|_: &mut PolyCache| {
                let w = word("2442343", 4);
                expect("conv", w.convexify().to_string(), "2244433".into())?;
                expect("sigma", w.associated_permutation().to_string(), "1423657".into())?;
                expect("in(w)", w.initial_positions(), vec![1, 2, 5])?;
                expect("std(2244433)", word("2244433", 4).standardize().to_string(), "25467381".into())
            }),
        ),
        (
            "word 21231",
            Box::new(|_: &mut PolyCache| {
                let w = word("21231", 3);
                expect("std(conv)", w.convexify().standardize().to_string(), "24153".into())?;
                expect("sigma inverse", w.associated_permutation().inverse().to_string(), "13254".into())
            }),
        ),
        (
            "polynomials of 21231",
            Box::new(|c: &mut PolyCache| {
                let w = word("21231", 3);
                let low = [(1, [2, 1, 1, 0, 0]), (1, [2, 0, 2, 0, 0]), (1, [1, 1, 2, 0, 0]), (1, [2, 0, 1, 0, 1]), (1, [1, 0, 2, 0, 1])];
                expect("S_21231", schubert_of_word(&w, c).map_err(|e| e.to_string())?, poly(5, &low))?;
                let mut all = low.to_vec();
                all.extend([(2, [2, 1, 2, 0, 1]), (-2, [2, 1, 2, 0, 0]), (-2, [2, 0, 2, 0, 1]), (-1, [2, 1, 1, 0, 1]), (-1, [1, 1, 2, 0, 1])]);
                expect("G_21231", grothendieck_of_word(&w, c).map_err(|e| e.to_string())?, poly(5, &all))
            }),
        ),
        (
            "reduction example",
            Box::new(|_: &mut PolyCache| {
                let m = Matrix::from_integers(&[vec![1, 2, 3, 1, 1], vec![2, 1, 3, 0, -1], vec![3, -3, 0, 0, 3]], &BigRational::zero()).unwrap();
                let red = reduction(&m).map_err(|e| e.to_string())?;
                let want = [["1", "-2/3", "-1", "1/3", "1/9"], ["0", "1", "1", "-2/3", "-1/3"], ["0", "0", "0", "1", "1"]];
                let want = Matrix::from_rows(want.iter().map(|r| r.iter().map(|s| parse_rational(s).unwrap()).collect()).collect()).unwrap();
                expect("word(m)", red.word.to_string(), "12233".into())?;
                expect("R(m)", red.matrix, want)
            }),
        ),
        (
            "pattern matrix of 2442343",
            Box::new(|_: &mut PolyCache| {
                let pm = pattern_matrix(&word("2442343", 4));
                expect("PM", pm.to_string(), "0 0 0 0 0 0 0\n1 * * 1 * * *\n0 0 0 0 1 0 1\n0 1 1 0 0 1 *\n".into())
            }),
        ),
    ];
    let count = checks.len();
    for (label, check) in checks {
        timed(label, EXAMPLE_BUDGET, || check(&mut cache))?;
    }
    Ok(format!("{count} worked examples match exactly"))
}

fn criterion_2() -> Result<String, String> {
    timed("24153", EXAMPLE_BUDGET, || {
        let u = perm("24153");
        expect("reduced pipe dreams of 24153", reduced_pipe_dreams(&u).len(), 5)?;
        expect("reduced BPDs of 24153", reduced_bpds(&u).len(), 5)
    })?;
    timed("21231", EXAMPLE_BUDGET, || {
        let w = word("21231", 3);
        expect("reduced pipe dreams of 21231", word_pipe_dreams(&w, true).map_err(|e| e.to_string())?.len(), 5)?;
        expect("reduced BPDs of 21231", word_bpds(&w, true).map_err(|e| e.to_string())?.len(), 5)
    })?;
    Ok("5 reduced pipe dreams and 5 reduced BPDs for 24153 and for 21231".into())
}

fn criterion_3() -> Result<String, String> {
    let start = Instant::now();
    let mut checked = 0;
    for n in 1..=PD_MAX_N {
        let r = permutation_identities(n, true, n <= BPD_MAX_N);
        if !r.passed() {
            return Err(format!("n = {n}: {:?}", r.mismatches));
        }
        checked += r.checked;
    }
    let spent = start.elapsed();
    if spent > PERMUTATION_SUITE_BUDGET {
        return Err(format!("took {spent:?}, budget {PERMUTATION_SUITE_BUDGET:?}"));
    }
    Ok(format!("{checked} identities (4 families; pipe dreams n <= {PD_MAX_N}, BPDs n <= {BPD_MAX_N}) in {spent:.1?}"))
}

fn criterion_4() -> Result<String, String> {
    let start = Instant::now();
    let mut checked = 0;
    let mut rect = 0;
    for n in 1..=WORD_MAX_N {
        let r = word_identities(n);
        if !r.passed() {
            return Err(format!("n = {n}: mismatches {:?}, violations {:?}", r.mismatches, r.rectangle_violations));
        }
        checked += r.checked;
        let r = rectangularity(n, n);
        if !r.passed() {
            return Err(format!("n = {n}: rectangle violations {:?}", r.rectangle_violations));
        }
        rect += r.checked;
    }
    let spent = start.elapsed();
    if spent > WORD_SUITE_BUDGET {
        return Err(format!("took {spent:?}, budget {WORD_SUITE_BUDGET:?}"));
    }
    Ok(format!("{checked} word identities for Fubini words n <= {WORD_MAX_N}, {rect} rectangularity checks, 0 violations, in {spent:.1?}"))
}

fn criterion_5() -> Result<String, String> {
    let start = Instant::now();
    let pairs = desk_pairs(K1_CAP);
    let mut at_5_3 = None;
    for &(n, k) in &pairs {
        let t = Instant::now();
        let r = verify_rings(n, k).map_err(|e| format!("({n},{k}): {e}"))?;
        if !r.passed {
            return Err(format!("({n},{k}): {r:?}"));
        }
        if (n, k) == (5, 3) {
            at_5_3 = Some(t.elapsed());
        }
    }
    let t53 = at_5_3.ok_or("(5,3) missing from the pairs")?;
    if t53 > RING_BUDGET_5_3 {
        return Err(format!("(5,3) took {t53:?}, budget {RING_BUDGET_5_3:?}"));
    }
    Ok(format!("{} pairs with k^n <= 5000: rank, torsion-free, ideal equality, both bases; (5,3) in {t53:.1?}, total {:.1?}", pairs.len(), start.elapsed()))
}

fn criterion_6() -> Result<String, String> {
    let results = property_suite(PROPERTY_SEED, PROPERTY_SAMPLES);
    let failed: Vec<_> = results.iter().filter(|r| r.failures > 0).collect();
    if !failed.is_empty() {
        return Err(format!("{failed:?}"));
    }
    Ok(format!("{} properties x {PROPERTY_SAMPLES} samples, seed {PROPERTY_SEED}, 0 failures", results.len()))
}

fn criterion_7() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let r = cell_dimension_report(&word("2442343", 4), DEFAULT_PRIME, 3, &mut rng).map_err(|e| e.to_string())?;
    expect("(stars, kn - length, n(k-1) - length)", (r.star_count as i64, r.kn_minus_length, r.formula_dimension), (6, 16, 9))?;
    if r.consistent() {
        return Err("report does not flag the inconsistency".into());
    }
    let broken: Vec<&str> = r.claims().into_iter().filter(|c| !c.3).map(|c| c.0).collect();
    Ok(format!("values 6 / 16 / 9 reproduced; flagged: {}", broken.join("; ")))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<String, String>); 7] = [
        ("worked examples", criterion_1),
        ("pipe dream counts", criterion_2),
        ("permutation generating functions", criterion_3),
        ("word generating functions and rectangularity", criterion_4),
        ("ring verification", criterion_5),
        ("randomized properties", criterion_6),
        ("cell dimension discrepancy", criterion_7),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {} PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {} FAIL {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
