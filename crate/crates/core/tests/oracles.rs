//! Worked values recomputed by routes that share no code with the library.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use waug_core::enclosure::Enclosure;
use waug_core::idealkit::witness_prop45;
use waug_core::rational::{int, ratio};
use waug_core::sequences::{build_block_sequence, check_prefix_tp, failure_witness, Classification, PrefixSequence, TpConfig};
use waug_core::structures::{ball_table, cayley_ball, Element, LevelSet};
use waug_core::weights::{build_lemma74, build_lemma76, estimate_radii, lemma76};
use waug_core::{Rational, Structure, Weight, WeightSpec};

fn rpow(b: &Rational, e: u64) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= b;
    }
    acc
}

/// Skew-binary digit count: greedy decomposition of `j` into numbers `2^k − 1`.
fn greedy_mersenne_terms(mut j: u64) -> u32 {
    let mut count = 0;
    while j > 0 {
        let mut m = 1u64;
        while 2 * m < j {
            m = 2 * m + 1;
        }
        j -= m;
        count += 1;
    }
    count
}

#[test]
fn lemma76_exponents_are_greedy_mersenne_counts() {
    let w = build_lemma76(&int(2), 1023).unwrap();
    let e = w.exponents().unwrap();
    for (j, (&ej, g)) in e.iter().zip(w.gamma()).enumerate() {
        assert_eq!(ej, greedy_mersenne_terms(j as u64), "j = {j}");
        assert_eq!(*g, rpow(&int(3), u64::from(ej)));
    }
    assert_eq!(e.len(), 1024);
    assert_eq!(w.gamma()[12], int(81));
    assert_eq!(lemma76::marker(4), 15);
}

#[test]
fn lemma76_ratio_bound_by_direct_summation() {
    let w = build_lemma76(&int(2), 1023).unwrap();
    for k in 2..=10u32 {
        let nk = (1u64 << k) - 1;
        let top = w.value(nk as i64).unwrap();
        let below: Rational = (1..nk).map(|j| w.value(j as i64).unwrap()).sum();
        assert!(top / below <= rpow(&ratio(2, 3), u64::from(k - 1)), "k = {k}");
    }
}

/// Sequential scan from `n_{k−1} + 1` for the least `m` with `m·r_k^m < 1`.
#[test]
fn lemma74_boundaries_by_sequential_scan() {
    let rho = int(2);
    let w = build_lemma74(&rho, 7, 128).unwrap();
    let t = |k: usize| ratio(1, k as i64 + 1);
    let mut prev = 0u64;
    for k in 1..=7usize {
        let r = (&rho + t(k)) / (&rho + t(k - 1));
        let mut m = prev + 1;
        let mut p = rpow(&r, m);
        while Rational::from_integer(BigInt::from(m)) * &p >= Rational::one() {
            m += 1;
            p *= &r;
        }
        assert_eq!(w.boundaries()[k - 1], m, "k = {k}");
        prev = m;
    }
}

/// The Lemma 7.4 step function satisfies (7.1) at every block for ρ = 2.
#[test]
fn lemma74_eq71_exactly_for_early_blocks() {
    let rho = int(2);
    let w = build_lemma74(&rho, 6, 128).unwrap();
    for k in 1..=6usize {
        let nk = w.boundaries()[k - 1];
        let after = rpow(&(&rho + w.eps(nk + 1)), nk + 1);
        let before = rpow(&(&rho + w.eps(nk)), nk);
        assert!(after / before <= (&rho + Rational::one()) / int(k as i64), "k = {k}");
    }
}

#[test]
fn block_sequence_from_the_defining_formula() {
    let b = build_block_sequence(&int(2), 3).unwrap();
    assert_eq!(b.boundaries, vec![1, 4, 8]);
    let tau = b.tau.values();
    // τ_j = ρ^{n_k+1} on n_{k−1}+1 < j ≤ n_k+1, with the first block reaching back to j = 1.
    assert_eq!(&tau[..2], &[int(4), int(4)]);
    for j in 3..=5 {
        assert_eq!(tau[j - 1], int(32));
    }
    for j in 6..=9 {
        assert_eq!(tau[j - 1], int(512));
    }
    // τ_{n_k+1} / Σ_{j≤n_k} τ_j recomputed by summation.
    for (k, &nk) in b.boundaries.iter().enumerate().skip(1) {
        let nk = nk as usize;
        let s: Rational = tau[..nk].iter().cloned().sum();
        assert!(&tau[nk] / s <= ratio(1, k as i64 + 1));
    }
}

#[test]
fn geometric_prefix_d_hat() {
    let tau = PrefixSequence::from_fn(10, |n| rpow(&int(2), n)).unwrap();
    let v = check_prefix_tp(&tau, &TpConfig::default());
    assert_eq!(v.d_hat, ratio(512, 511));
    assert_eq!(v.classification, Classification::PrefixConsistent);
    let ones = PrefixSequence::from_fn(100, |_| int(1)).unwrap();
    let v = check_prefix_tp(&ones, &TpConfig::default());
    assert_eq!(v.d_hat, ratio(1, 99));
    assert_eq!(v.classification, Classification::SuspectFail);
}

#[test]
fn constant_sequence_witness_by_formula() {
    let ones = PrefixSequence::from_fn(30, |_| int(1)).unwrap();
    let w = failure_witness(&ones, &int(10)).unwrap().unwrap();
    // T(e^{(J)}) = J − 1 for τ ≡ 1.
    let j = w.x.iter().position(|v| !v.is_zero()).unwrap() + 1;
    assert_eq!(w.t, int(j as i64 - 1));
    assert!(w.t >= int(10));
    let geo = PrefixSequence::from_fn(40, |n| rpow(&int(2), n)).unwrap();
    assert!(failure_witness(&geo, &int(2)).unwrap().is_none());
}

#[test]
fn prop45_sigma_by_direct_summation() {
    let w = witness_prop45(&Structure::free_monoid(1), 100, 10_000).unwrap();
    for n in 1..=100i64 {
        let tail: Rational = (n + 1..=100).map(|j| ratio(1, j * j)).sum();
        assert_eq!(w.sigma[n as usize - 1], tail);
    }
}

#[test]
fn lattice_word_length_by_bfs() {
    let z2 = Structure::lattice(2);
    let ball = cayley_ball(&z2, 4, 10_000).unwrap();
    assert_eq!(ball.level_of(&Element::Vec(vec![2, -1])), Some(3));
    for u in ball.elements() {
        if let Element::Vec(v) = u {
            assert_eq!(ball.level_of(u), Some((v[0].abs() + v[1].abs()) as usize));
        }
    }
}

#[test]
fn free_monoid_ball_has_no_divisions() {
    let t = ball_table(&Structure::free_monoid(1), 2, 100).unwrap();
    let expect: Vec<Element> = (0..=2).map(|n| Element::Word(vec![1; n])).collect();
    assert_eq!(t.ball(2), LevelSet::Finite(&expect));
}

/// `lo¹⁰⁰ ≤ 101² ≤ hi¹⁰⁰` for the enclosure of `ω_N^{1/N}` with `ω_n = (1+n)²`.
#[test]
fn polynomial_root_by_power_comparison() {
    let w = Weight::build(&WeightSpec::RadialPoly { alpha: int(2) }, 128).unwrap();
    let r = estimate_radii(&w, &Structure::integers(), 100, 128, 10_000).unwrap();
    let Enclosure { lo, hi } = r.rho2;
    let target = Rational::from_integer(BigInt::from(101).pow(2u32));
    assert!(rpow(&lo, 100) <= target && target <= rpow(&hi, 100));
    assert!(&hi - &lo < ratio(1, 1 << 40));
}
