use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schubword_core::bpd::word_bpds;
use schubword_core::combinat::{Permutation, Word};
use schubword_core::geometry::{
    fits_pattern, random_integer_matrix, random_low_rank_matrix, random_torus, random_unitriangular, rational_mod, reduction, Fp, Matrix,
};
use schubword_core::pipedream::{word_pipe_dreams, PipeDream};
use schubword_core::poly::{Family, PolyCache, Polynomial};

fn config(seed: u64) -> Config {
    Config { cases: 500, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn small_permutation() -> impl Strategy<Value = Permutation> {
    (1usize..=5).prop_flat_map(permutation)
}

fn polynomial(nx: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u8..4, nx), -5i64..=5), 0..8)
        .prop_map(move |terms| Polynomial::from_terms(nx, 0, terms.into_iter().map(|(e, c)| (e, BigInt::from(c))).collect::<Vec<_>>()))
}

fn word(max_n: usize, max_k: usize) -> impl Strategy<Value = Word> {
    (1..=max_n, 1..=max_k).prop_flat_map(|(n, k)| prop::collection::vec(1..=k, n).prop_map(move |l| Word::new(l, k).unwrap()))
}

/// Top-class polynomial of `w0 ∈ S_n` for `family`.
fn longest_polynomial(family: Family, n: usize) -> Polynomial {
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

/// Walks up from `w` to `w0` through randomly chosen ascents, then applies
/// the matching operators back down.
fn random_path_polynomial(family: Family, w: &Permutation, rng: &mut ChaCha8Rng) -> Polynomial {
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
        p = if family.is_k_theoretic() { p.isobaric_divided_difference(i) } else { p.divided_difference(i) }.unwrap();
    }
    p
}

proptest! {
    #![proptest_config(config(11))]
    #[test]
    fn divided_difference_squares_to_zero(p in polynomial(5), i in 1usize..5) {
        let once = p.divided_difference(i).unwrap();
        prop_assert!(once.divided_difference(i).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(config(12))]
    #[test]
    fn isobaric_operator_is_idempotent(p in polynomial(5), i in 1usize..5) {
        let once = p.isobaric_divided_difference(i).unwrap();
        prop_assert_eq!(once.isobaric_divided_difference(i).unwrap(), once);
    }
}

proptest! {
    #![proptest_config(config(13))]
    #[test]
    fn recursion_is_path_independent(w in small_permutation(), seed in any::<u64>(), f in 0usize..4) {
        let family = [Family::Schubert, Family::Grothendieck, Family::DoubleSchubert, Family::DoubleGrothendieck][f];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let via_path = random_path_polynomial(family, &w, &mut rng);
        let mut cache = PolyCache::new();
        let cached = cache.get(family, &w);
        let ny = via_path.ny();
        prop_assert_eq!(via_path, cached.with_arity(w.size(), ny));
    }
}

proptest! {
    #![proptest_config(config(14))]
    #[test]
    fn lowest_degree_of_grothendieck_is_schubert(w in (1usize..=6).prop_flat_map(permutation)) {
        let mut cache = PolyCache::new();
        let g = cache.get(Family::Grothendieck, &w);
        let s = cache.get(Family::Schubert, &w);
        prop_assert_eq!(g.lowest_degree_component(), s);
    }
}

proptest! {
    #![proptest_config(config(15))]
    #[test]
    fn hecke_reading_matches_pipe_tracing(n in 2usize..=6, bits in any::<u64>()) {
        let cells: Vec<(usize, usize)> = (1..n).flat_map(|i| (1..=n - i).map(move |j| (i, j))).collect();
        let crosses = cells.iter().enumerate().filter(|(b, _)| bits >> b & 1 == 1).map(|(_, &c)| c).collect();
        let p = PipeDream::new(crosses).unwrap();
        prop_assert_eq!(p.permutation(), p.trace_permutation());
    }
}

fn rational_matrix(rows: &[Vec<i64>]) -> Matrix<BigRational> {
    Matrix::from_integers(rows, &BigRational::zero()).unwrap()
}

proptest! {
    #![proptest_config(config(16))]
    #[test]
    fn reduction_is_invariant_under_u_and_t(k in 1usize..=4, n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rational_matrix(&random_integer_matrix(k, n, &mut rng));
        let q = BigRational::zero();
        let u = random_unitriangular(k, &q, &mut rng);
        let t = random_torus(n, &q, &mut rng);
        let moved = u.mul(&m).unwrap().scale_columns(&t);
        let a = reduction(&m).unwrap();
        let b = reduction(&moved).unwrap();
        prop_assert_eq!(&a.word, &b.word);
        prop_assert_eq!(&a.matrix, &b.matrix);
        prop_assert!(fits_pattern(&a.matrix, &a.word));
    }
}

proptest! {
    #![proptest_config(config(17))]
    #[test]
    fn full_rank_matrices_give_fubini_words(k in 1usize..=4, extra in 0usize..=3, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = k + extra;
        let m = rational_matrix(&random_integer_matrix(k, n, &mut rng));
        let red = reduction(&m).unwrap();
        prop_assert_eq!(red.word.distinct_count(), m.rank());
        prop_assert_eq!(red.word.is_fubini(), m.rank() == k);
        prop_assert!(fits_pattern(&red.matrix, &red.word));
    }
}

proptest! {
    #![proptest_config(config(18))]
    #[test]
    fn rank_deficient_matrices_give_non_fubini_words(k in 2usize..=4, n in 1usize..=6, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let r = rng.gen_range(1..k);
        let m = rational_matrix(&random_low_rank_matrix(k, n, r, &mut rng));
        prop_assert!(m.rank() < k);
        let red = reduction(&m).unwrap();
        prop_assert!(!red.word.is_fubini());
        prop_assert!(fits_pattern(&red.matrix, &red.word));
    }
}

/// Every pivot decision made over `Q` survives reduction mod `p`.
fn nondegenerate_mod(decisions: &[Vec<BigRational>], p: u64) -> bool {
    decisions.iter().flatten().all(|x| match rational_mod(x, p) {
        Some(v) => x.is_zero() || v.value() != 0,
        None => false,
    })
}

proptest! {
    #![proptest_config(config(19))]
    #[test]
    fn prime_field_reduction_agrees_with_rationals(k in 1usize..=4, n in 1usize..=6, pi in 0usize..3, seed in any::<u64>()) {
        let p = [3u64, 5, 7][pi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // resample until the rational run has no pivot vanishing mod p
        let (qm, red) = loop {
            let ints = random_integer_matrix(k, n, &mut rng);
            let qm = rational_matrix(&ints);
            let red = reduction(&qm).unwrap();
            if nondegenerate_mod(&red.decisions, p) {
                break (ints, red);
            }
        };
        let fm = Matrix::from_integers(&qm, &Fp::new(0, p).unwrap()).unwrap();
        let fred = reduction(&fm).unwrap();
        prop_assert_eq!(&fred.word, &red.word);
        prop_assert_eq!(red.matrix.reduce_mod(p).unwrap().unwrap(), fred.matrix);
    }
}

proptest! {
    #![proptest_config(config(20))]
    #[test]
    fn standardization_and_associated_permutation_recover_initial_letters(w in word(8, 5)) {
        let conv = w.convexify();
        let sigma = w.associated_permutation();
        let u = conv.standardize();
        for i in 1..=w.len() {
            prop_assert_eq!(conv.at(i), w.at(sigma.at(i)));
        }
        for p in w.initial_positions() {
            let i = sigma.inverse().at(p);
            prop_assert_eq!(u.at(i), w.at(p));
        }
        prop_assert_eq!(conv.convexify(), conv.clone());
        prop_assert_eq!(conv.associated_permutation(), Permutation::identity(w.len()));
    }
}

proptest! {
    #![proptest_config(Config { cases: 200, ..config(21) })]
    #[test]
    fn word_diagrams_fit_the_rectangle(w in word(6, 3)) {
        // truncation errors if a cross or blank tile falls outside columns 1..k
        prop_assert!(word_pipe_dreams(&w, false).is_ok());
        prop_assert!(word_bpds(&w, false).is_ok());
    }
}
