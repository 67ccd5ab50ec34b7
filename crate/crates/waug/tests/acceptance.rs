//! The acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines are always printed. The run
//! succeeds exactly when the failing criteria are the documented unattainable
//! set; a criterion in that set that starts passing is also an error.

use std::collections::{BTreeSet, VecDeque};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use waug_core::algebra::{augmentation, convolve, lemma44_check, lemma64_check};
use waug_core::enclosure::Enclosure;
use waug_core::idealkit::{decompose_full, decompose_point, divide_shift, rewrite_pseudofinite, witness_prop45, witness_thm75, ShiftSide};
use waug_core::rational::{format_rational, int, pow, ratio, reciprocal_power_sum};
use waug_core::sequences::{build_block_sequence, check_prefix_tp, failure_witness, tail_functional, PrefixSequence, TpConfig};
use waug_core::structures::{ball_table, cayley_ball, pseudo_finite_within, Family, PseudoFinite, TableMonoid};
use waug_core::weights::{build_lemma74, build_lemma76, tau_and_c, verify_weight_axioms};
use waug_core::{Element, FinElement, Rational, Scalar, Structure, Weight, WeightSpec};

const PREC: u32 = waug_core::DEFAULT_PRECISION;
const CAP: usize = waug_core::DEFAULT_BALL_CAP;

/// Criteria whose statement is false as written; each must fail.
const KNOWN_UNATTAINABLE: &[usize] = &[15];

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rng(criterion: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed_0000 + criterion)
}

fn rand_rational(r: &mut ChaCha8Rng, max: i64) -> Rational {
    ratio(r.random_range(-max..=max), r.random_range(1..=8))
}

fn two_pow() -> Weight {
    Weight::build(&WeightSpec::RadialExp { c: int(2), beta: int(1) }, PREC).unwrap()
}

fn m0() -> Structure {
    Structure::new(Family::ZeroAdjoined(Box::new(Family::Free { rank: 2, monoid: true })), vec![Element::Theta]).unwrap()
}

/// Real element on up to `max_terms` of `points` with random coefficients, shifted at `e` to augmentation zero.
fn zero_augmentation(r: &mut ChaCha8Rng, s: &Structure, points: &[Element], max_terms: usize) -> FinElement {
    let mut f = FinElement::zero();
    for _ in 0..r.random_range(1..=max_terms) {
        let u = points[r.random_range(0..points.len())].clone();
        f.add_term(u, &Scalar::real(rand_rational(r, 9)));
    }
    f.add_term(s.identity(), &-augmentation(&f));
    f
}

fn c1_tail_preserving_positive() -> Outcome {
    let tau = PrefixSequence::from_fn(64, |n| pow(&int(2), n)).unwrap();
    let v = check_prefix_tp(&tau, &TpConfig::default());
    ensure(v.d_hat >= Rational::one(), || format!("D̂ = {} < 1", v.d_hat))?;
    let ceiling = v.d_hat.recip();
    let mut r = rng(1);
    for i in 0..1000 {
        let mut x = vec![Rational::zero(); 64];
        for _ in 0..r.random_range(1..=12) {
            x[r.random_range(0..64)] = ratio(r.random_range(1..=50), r.random_range(1..=7));
        }
        let norm = tau.norm(&x).unwrap();
        let x: Vec<Rational> = x.iter().map(|v| v / &norm).collect();
        ensure(tau.norm(&x).unwrap() <= Rational::one(), || format!("vector {i} not normalized"))?;
        let t = tail_functional(&tau, &x).unwrap();
        ensure(t <= ceiling, || format!("vector {i}: T(x) = {t} > 1/D̂"))?;
    }
    Ok(format!("D̂ = {}, 1000 unit vectors with T(x) ≤ 1/D̂", v.d_hat))
}

fn c2_tail_preserving_negative() -> Outcome {
    let ones = PrefixSequence::from_fn(25, |_| int(1)).unwrap();
    let w = failure_witness(&ones, &int(10)).unwrap().ok_or("no witness within 25 terms")?;
    let support = w.x.iter().filter(|v| !v.is_zero()).count();
    ensure(support <= 25 && w.x.len() <= 25, || format!("support {support}"))?;
    let norm = ones.norm(&w.x).unwrap();
    ensure(norm == w.norm && norm <= Rational::one(), || format!("‖x‖ = {norm}"))?;
    let t = tail_functional(&ones, &w.x).unwrap();
    ensure(t == w.t && t >= int(10), || format!("T(x) = {t}"))?;
    Ok(format!("support {support}, ‖x‖ = {norm}, T(x) = {t}"))
}

fn c3_block_sequence() -> Outcome {
    let b = build_block_sequence(&int(2), 20).unwrap();
    let tau = b.tau.values();
    for (j, t) in tau.iter().enumerate() {
        ensure(*t >= pow(&int(2), j as u64 + 1), || format!("τ_{} < 2^{}", j + 1, j + 1))?;
    }
    ensure(b.below_rho_power.is_none(), || "library reports τ_j < ρ^j".into())?;
    let mut sum = Rational::zero();
    let mut next = 0usize;
    for (k, &nk) in b.boundaries.iter().enumerate() {
        while next < nk as usize {
            sum += &tau[next];
            next += 1;
        }
        let q = &tau[nk as usize] / &sum;
        ensure(q <= ratio(1, k as i64 + 1), || format!("block {}: ratio {q}", k + 1))?;
        ensure(q == b.boundary_ratios[k], || format!("block {}: library ratio differs", k + 1))?;
    }
    ensure(b.ratios_bounded, || "library flag unset".into())?;
    Ok(format!("{} terms, 20 boundary ratios ≤ 1/k", tau.len()))
}

fn c4_lemma61() -> Outcome {
    let cases = [
        (Structure::free_group(2), WeightSpec::RadialPoly { alpha: int(2) }, 6usize),
        (Structure::lattice(2), WeightSpec::RadialExp { c: int(2), beta: int(1) }, 8),
    ];
    let mut checked = 0;
    for (s, spec, depth) in cases {
        let w = Weight::build(&spec, PREC).unwrap();
        let t = tau_and_c(&w, &s, depth, PREC, CAP).unwrap();
        ensure(t.tau.len() == depth && t.lemma61.len() == depth - 1, || "short τ table".into())?;
        ensure(t.lemma61_holds(), || format!("{spec:?}: {:?}", t.lemma61))?;
        checked += t.lemma61.len();
    }
    Ok(format!("τ_n ≤ Cτ_(n+1) at {checked} indices"))
}

fn c5_lemma44() -> Outcome {
    let s = Structure::free_monoid(2);
    let balls = ball_table(&s, 6, CAP).unwrap();
    let points = cayley_ball(&s, 4, CAP).unwrap().elements().to_vec();
    let mut r = rng(5);
    for i in 0..200 {
        let mut g = FinElement::zero();
        for _ in 0..r.random_range(1..=8) {
            g.add_term(points[r.random_range(0..points.len())].clone(), &Scalar::real(rand_rational(&mut r, 9)));
        }
        for x in s.generators() {
            let b = lemma44_check(&s, &balls, &g, x, PREC).unwrap();
            ensure(b.lhs.is_exact() && b.rhs.is_exact(), || format!("g_{i}: inexact sums"))?;
            ensure(b.decision.holds(), || format!("g_{i}, x = {x}: {} > {}", b.lhs.lo, b.rhs.hi))?;
        }
    }
    Ok("400 bounds Σ|σ_n| ≤ 3Σ|g| hold".into())
}

fn c6_lemma64() -> Outcome {
    let s = Structure::lattice(2);
    let w = two_pow();
    let balls = ball_table(&s, 7, CAP).unwrap();
    let t = tau_and_c(&w, &s, 7, PREC, CAP).unwrap();
    let tau: Vec<Enclosure> = t.tau.iter().map(|v| v.enclosure()).collect();
    let c = t.c.enclosure();
    let points = cayley_ball(&s, 5, CAP).unwrap().elements().to_vec();
    let mut r = rng(6);
    for i in 0..100 {
        let mut g = FinElement::zero();
        for _ in 0..r.random_range(1..=8) {
            g.add_term(points[r.random_range(0..points.len())].clone(), &Scalar::real(rand_rational(&mut r, 9)));
        }
        for x in s.generators() {
            let b = lemma64_check(&s, &w, &balls, &tau, &c, &g, x, PREC, CAP).unwrap();
            ensure(b.decision.holds(), || format!("g_{i}, x = {x}: {:?}", b.decision))?;
        }
    }
    Ok(format!("400 bounds Σ τ_n|σ_n| ≤ (2+C)‖g‖ hold, C = {}", c.hi))
}

fn c7_lemma62() -> Outcome {
    let s = Structure::free_group(2);
    let w = two_pow();
    let tau = PrefixSequence::from_fn(7, |n| pow(&int(2), n)).unwrap();
    let d_hat = check_prefix_tp(&tau, &TpConfig::default()).d_hat;
    ensure(d_hat >= Rational::one(), || format!("D̂ = {d_hat}"))?;
    let ball = cayley_ball(&s, 6, CAP).unwrap();
    for u in ball.elements() {
        let p = decompose_point(&s, &w, &int(1), u, PREC, CAP).unwrap();
        let mut target = FinElement::delta(s.identity());
        target.add_term(u.clone(), &-Scalar::one());
        let back = p.decomposition.reconvolve(&s);
        ensure(back == p.decomposition.input && (back == target || back == target.neg()), || format!("u = {u}: reconvolution"))?;
        ensure(p.passed(), || format!("u = {u}: norm bound"))?;
    }
    Ok(format!("{} points with |u| ≤ 6", ball.elements().len()))
}

fn c8_decompose_full() -> Outcome {
    let s = Structure::free_group(2);
    let w = two_pow();
    let points = cayley_ball(&s, 5, CAP).unwrap().elements().to_vec();
    let mut r = rng(8);
    for i in 0..100 {
        let f = zero_augmentation(&mut r, &s, &points, 10);
        let d = decompose_full(&s, &w, &int(1), &f, PREC, CAP).unwrap();
        ensure(d.decomposition.reconvolve(&s) == f, || format!("f_{i}: reconvolution"))?;
        ensure(d.passed(), || format!("f_{i}: s^(i) bound"))?;
    }
    Ok("100 decompositions reconvolve within bound".into())
}

fn c9_divide_shift() -> Outcome {
    let s = Structure::integers();
    let mut r = rng(9);
    for (sign, side) in [(1i64, ShiftSide::Positive), (-1, ShiftSide::Negative)] {
        let points: Vec<Element> = (0..=40).map(|n| Element::Int(sign * n)).collect();
        for i in 0..500 {
            let mut f = FinElement::zero();
            for _ in 0..r.random_range(1..=10) {
                f.add_term(points[r.random_range(1..points.len())].clone(), &Scalar::real(rand_rational(&mut r, 9)));
            }
            f.add_term(Element::Int(0), &-augmentation(&f));
            if f.is_zero() {
                continue;
            }
            let q = divide_shift(&s, &f).unwrap();
            ensure(convolve(&s, &q.quotient, &q.divisor).unwrap() == f, || format!("f_{i} (sign {sign}): reconvolution"))?;
            ensure(q.side == side, || format!("f_{i} (sign {sign}): divided on {:?}", q.side))?;
        }
    }
    Ok("500 on ℤ⁺ and 500 mirrored on ℤ⁻".into())
}

fn c10_lemma74() -> Outcome {
    let l = build_lemma74(&int(2), 50, PREC).unwrap();
    let n50 = *l.boundaries().last().unwrap();
    let rep = verify_weight_axioms(&Weight::Lemma74(l), &Structure::nonneg(), n50 as usize + 1, PREC, CAP).unwrap();
    let cert = rep.lemma74.as_ref().ok_or("no block certificate")?;
    ensure(rep.passed && cert.passed, || format!("axioms: {rep:?}"))?;
    ensure(cert.eq71.len() == 50, || format!("{} eq. (7.1) checks", cert.eq71.len()))?;
    for c in &cert.eq71 {
        ensure(c.exact == Some(true), || format!("k = {}: exact verdict {:?}", c.k, c.exact))?;
    }
    Ok(format!("axioms to n_50+1 = {}, 50 exact block checks", n50 + 1))
}

fn c11_thm75() -> Outcome {
    let k = 10_000usize;
    let w = witness_thm75(&int(2), k, PREC).unwrap();
    let zeta = reciprocal_power_sum(1, k as u64, 2);
    let ceiling = int(3) * &zeta;
    ensure(w.ceiling == ceiling, || "ceiling differs from 3Σ1/k²".into())?;
    ensure(ceiling < ratio(4935, 1000), || "ceiling ≥ 4.935".into())?;
    ensure(w.norm.hi <= ceiling && w.bounded, || format!("‖f‖ ≤ {} exceeds the ceiling", w.norm.hi))?;
    let h = reciprocal_power_sum(1, k as u64, 1);
    ensure(w.divisor_norm == h && h > ratio(19, 2), || "divisor norm is not H_K > 9.5".into())?;
    let out = Command::new(env!("CARGO_BIN_EXE_waug")).args(["ideal", "witness-75", "--rho", "2", "--blocks", "10000"]).output().unwrap();
    let rep: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    ensure(out.status.code() == Some(0) && rep["certified"] == true, || "CLI report not certified".into())?;
    ensure(rep["result"]["flag"] == "bounded element, divergent divisor", || format!("CLI flag {}", rep["result"]["flag"]))?;
    ensure(rep["result"]["divisor_norm"] == format_rational(&h).as_str(), || "CLI divisor norm differs".into())?;
    Ok(format!("‖f‖ ≤ {:.4}, divisor norm H_K ≈ {:.4}", to_f64(&w.norm.hi), to_f64(&h)))
}

fn c12_lemma76() -> Outcome {
    let c = build_lemma76(&int(2), 1023).unwrap().certify();
    ensure(c.star && c.dagger && c.submultiplicative, || format!("star {} dagger {} submult {}", c.star, c.dagger, c.submultiplicative))?;
    ensure(c.violation.is_none(), || format!("{:?}", c.violation))?;
    for k in 2..=10u32 {
        let rc = c.ratios.iter().find(|r| r.k == k).ok_or_else(|| format!("no ratio check at k = {k}"))?;
        ensure(rc.holds && rc.bound == pow(&ratio(2, 3), u64::from(k - 1)), || format!("k = {k}: {} > {}", rc.ratio, rc.bound))?;
    }
    ensure(c.passed, || "certificate not passed".into())?;
    Ok(format!("{} pairs, ratios ≤ (2/3)^(k−1) for k ≤ 10", c.pairs_checked))
}

fn c13_pseudo_finite() -> Outcome {
    let found = |s: &Structure, depth| match pseudo_finite_within(s, depth, CAP).unwrap() {
        PseudoFinite::Found { n, .. } => Some(n),
        PseudoFinite::NotWithinDepth { .. } => None,
    };
    ensure(found(&m0(), 5) == Some(2), || "M⁰ with X = {θ}".into())?;
    let free = Structure::free_monoid(2);
    match pseudo_finite_within(&free, 50, CAP).unwrap() {
        PseudoFinite::NotWithinDepth { depth: 50, .. } => {}
        other => return Err(format!("free monoid: {other:?}")),
    }
    let c5 = Structure::cyclic(5).with_generators(vec![Element::Table(1), Element::Table(4)]).unwrap();
    ensure(found(&c5, 5) == Some(2), || "C₅ with X = {g, g⁴}".into())?;
    Ok("M⁰ at 2, free monoid not within 50, C₅ at 2".into())
}

fn c14_rewrite() -> Outcome {
    let s = m0();
    let balls = ball_table(&s, 2, CAP).unwrap();
    let mut points = vec![Element::Theta];
    for len in 0..=3u32 {
        for code in 0..(1u32 << len) {
            points.push(Element::Word((0..len).map(|i| 1 + ((code >> i) & 1) as i32).collect()));
        }
    }
    ensure(points.iter().all(|u| balls.contains(u, 2)), || "sample points outside B_2".into())?;
    let mut r = rng(14);
    for i in 0..200 {
        let f = zero_augmentation(&mut r, &s, &points, 8);
        let rw = rewrite_pseudofinite(&s, &balls, &f).unwrap();
        ensure(rw.decomposition.reconvolve(&s) == f, || format!("f_{i}: reconvolution"))?;
    }
    Ok("200 rewrites reconvolve".into())
}

fn c15_prop45() -> Outcome {
    let k_max = 100i64;
    let w = witness_prop45(&Structure::free_monoid(1), k_max as usize, CAP).unwrap();
    for k in 1..=k_max {
        let tail: Rational = (k + 1..=k_max).map(|j| ratio(1, j * j)).sum();
        ensure(w.sigma[k as usize - 1] == tail, || format!("σ at k = {k} is not the tail sum"))?;
    }
    // Σ_{j>K} j⁻² < 1/K, so σ_{n_k} + 1/K strictly bounds the untruncated tail from above.
    let refuted: Vec<i64> = (1..=k_max).filter(|&k| &w.sigma[k as usize - 1] + ratio(1, k_max) <= ratio(1, k)).collect();
    let corrected = w.lower_bound_holds && w.diverges_like_harmonic;
    if refuted.is_empty() {
        return Ok("tails match and σ_(n_k) ≥ 1/k".into());
    }
    Err(format!(
        "tails match at all {k_max} levels, but Σ_(j>k) j⁻² < 1/k at {}/{k_max} levels (k = 1: {:.4} < 1); bound 1/(k+1) {}",
        refuted.len(),
        to_f64(&(&w.sigma[0] + ratio(1, k_max))),
        if corrected { "holds" } else { "fails" }
    ))
}

/// Closure of random self-maps of `{0..m}` under composition, identity first.
fn random_monoid(r: &mut ChaCha8Rng) -> Option<TableMonoid> {
    let m = r.random_range(2..=4usize);
    let gens: Vec<Vec<usize>> = (0..r.random_range(1..=2)).map(|_| (0..m).map(|_| r.random_range(0..m)).collect()).collect();
    let mut elems: Vec<Vec<usize>> = vec![(0..m).collect()];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(i) = queue.pop_front() {
        for g in &gens {
            let next: Vec<usize> = elems[i].iter().map(|&p| g[p]).collect();
            if !elems.contains(&next) {
                elems.push(next);
                queue.push_back(elems.len() - 1);
                if elems.len() > 12 {
                    return None;
                }
            }
        }
    }
    let n = elems.len();
    let rows = (0..n)
        .map(|a| (0..n).map(|b| elems.iter().position(|c| (0..m).all(|p| c[p] == elems[b][elems[a][p]])).unwrap()).collect())
        .collect();
    TableMonoid::new(rows).ok()
}

fn c16_ancestry_closure() -> Outcome {
    let mut r = rng(16);
    let mut tables = 0;
    let mut sizes = BTreeSet::new();
    while tables < 20 {
        let Some(t) = random_monoid(&mut r) else { continue };
        let n = t.size();
        let x: Vec<usize> = (0..n).filter(|_| r.random_bool(0.3)).collect();
        let s = Structure::new(Family::Table(t.clone()), x.iter().map(|&i| Element::Table(i)).collect()).unwrap();
        // H_X by closure under u ↦ ux and u ↦ {v : vx = u}.
        let mut h = vec![false; n];
        h[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for u in 0..n {
                for &xi in &x {
                    for v in 0..n {
                        if !h[v] && ((h[u] && t.mul(u, xi) == v) || (h[u] && t.mul(v, xi) == u)) {
                            h[v] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        let balls = ball_table(&s, n + 1, CAP).unwrap();
        let from_balls: BTreeSet<usize> =
            balls.elements().iter().map(|e| if let Element::Table(i) = e { *i } else { unreachable!() }).collect();
        let closure: BTreeSet<usize> = (0..n).filter(|&i| h[i]).collect();
        ensure(from_balls == closure, || format!("table {tables}: balls {from_balls:?} vs closure {closure:?}"))?;
        for &u in &closure {
            for y in 0..n {
                ensure(!h[y] || h[t.mul(y, u)], || format!("table {tables}: H·{u} ⊄ H"))?;
                ensure(!h[t.mul(y, u)] || h[y], || format!("table {tables}: H·{u}⁻¹ ⊄ H at y = {y}"))?;
            }
        }
        sizes.insert(n);
        tables += 1;
    }
    Ok(format!("20 tables, sizes {sizes:?}"))
}

fn write(dir: &Path, name: &str, text: &str) {
    std::fs::write(dir.join(name), text).unwrap();
}

fn c17_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let d = dir.path();
    write(d, "z.json", r#"{"family":"Z"}"#);
    write(d, "z2.json", r#"{"family":"Zd","params":{"dim":2}}"#);
    write(d, "f2.json", r#"{"family":"free","params":{"rank":2}}"#);
    write(d, "m0.json", r#"{"family":"zero_adjoined","params":{"base":{"family":"free","params":{"rank":2,"monoid":true}}},"generators":["theta"]}"#);
    write(d, "poly.json", r#"{"family":"radial_poly","params":{"alpha":"2"}}"#);
    write(d, "exp.json", r#"{"family":"radial_exp","params":{"c":"2"}}"#);
    write(d, "f.json", r#"{"terms":[{"elem":[],"re":"5/2"},{"elem":[1,-2],"re":"-3/2"},{"elem":[2],"re":"-1","im":"1/3"},{"elem":[-1],"im":"-1/3"}]}"#);
    write(d, "g.json", r#"{"terms":[{"elem":[1],"re":"1"},{"elem":[-2,1],"re":"2/3"}]}"#);
    write(d, "zf.json", r#"{"terms":[{"elem":0,"re":"1"},{"elem":3,"re":"-4/3"},{"elem":7,"re":"1/3"}]}"#);
    write(d, "mf.json", r#"{"terms":[{"elem":[],"re":"1"},{"elem":"theta","re":"-2"},{"elem":[1,2],"re":"1"}]}"#);
    write(d, "geo.csv", &(1..=20).map(|n| format!("{n},{},1\n", 1u64 << n)).collect::<String>());
    write(d, "ones.csv", &(1..=30).map(|n| format!("{n},1,1\n")).collect::<String>());
    let p = |name: &str| d.join(name).display().to_string();
    let runs: Vec<Vec<String>> = [
        vec!["structure", "ball", "--spec", &p("z2.json"), "--depth", "4"],
        vec!["structure", "ancestry", "--spec", &p("f2.json"), "--depth", "3", "--at", "[1,-2]"],
        vec!["structure", "pseudofinite", "--spec", &p("m0.json"), "--depth", "4"],
        vec!["weight", "verify", "--spec", &p("z.json"), "--weight", &p("poly.json"), "--depth", "12"],
        vec!["weight", "tau", "--spec", &p("f2.json"), "--weight", &p("exp.json"), "--depth", "4"],
        vec!["weight", "build-l74", "--rho", "2", "--blocks", "12"],
        vec!["weight", "build-l76", "--rho", "2", "--depth", "127"],
        vec!["weight", "radii", "--spec", &p("z.json"), "--weight", &p("poly.json"), "--depth", "40"],
        vec!["tau", "check", "--csv", &p("geo.csv")],
        vec!["tau", "witness", "--csv", &p("ones.csv"), "--target", "10"],
        vec!["tau", "blockseq", "--rho", "2", "--blocks", "6"],
        vec!["tau", "growth", "--csv", &p("geo.csv"), "--target", "1"],
        vec!["element", "convolve", "--spec", &p("f2.json"), "--element", &p("f.json"), "--element", &p("g.json")],
        vec!["element", "norm", "--spec", &p("f2.json"), "--weight", &p("exp.json"), "--element", &p("f.json")],
        vec!["element", "sigma", "--spec", &p("f2.json"), "--element", &p("f.json"), "--depth", "4", "--weight", &p("exp.json")],
        vec!["ideal", "telescope", "--spec", &p("f2.json"), "--element", &p("f.json")],
        vec!["ideal", "decompose-point", "--spec", &p("f2.json"), "--weight", &p("exp.json"), "--at", "[1,2,-1]"],
        vec!["ideal", "decompose-full", "--spec", &p("f2.json"), "--weight", &p("exp.json"), "--element", &p("f.json")],
        vec!["ideal", "divide-shift", "--spec", &p("z.json"), "--element", &p("zf.json")],
        vec!["ideal", "rewrite-pf", "--spec", &p("m0.json"), "--element", &p("mf.json"), "--depth", "2"],
        vec!["ideal", "witness-45", "--spec", &p("f2.json"), "--blocks", "5"],
        vec!["ideal", "witness-75", "--rho", "2", "--blocks", "20"],
    ]
    .into_iter()
    .flat_map(|args| {
        let args: Vec<String> = args.into_iter().map(String::from).collect();
        let mut csv = args.clone();
        csv.extend(["--format".to_string(), "csv".to_string()]);
        [args, csv]
    })
    .collect();
    for args in &runs {
        let go = || Command::new(env!("CARGO_BIN_EXE_waug")).args(args).output().unwrap();
        let (a, b) = (go(), go());
        let line = args.join(" ");
        ensure(matches!(a.status.code(), Some(0 | 1)), || format!("`{line}` exited {:?}: {}", a.status.code(), String::from_utf8_lossy(&a.stderr)))?;
        ensure(!a.stdout.is_empty(), || format!("`{line}` wrote no report"))?;
        ensure(a.stdout == b.stdout && a.status.code() == b.status.code(), || format!("`{line}` differs between runs"))?;
    }
    Ok(format!("{} invocations byte-identical", runs.len()))
}

fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    if r.is_negative() {
        return -to_f64(&-r);
    }
    r.to_f64().unwrap_or(f64::NAN)
}

fn main() {
    let criteria: [Criterion; 17] = [
        ("tail-preserving positive family", c1_tail_preserving_positive),
        ("tail-preserving negative family", c2_tail_preserving_negative),
        ("block sequence", c3_block_sequence),
        ("sphere minima comparison", c4_lemma61),
        ("partial-augmentation bound", c5_lemma44),
        ("weighted partial-augmentation bound", c6_lemma64),
        ("point decomposition", c7_lemma62),
        ("full decomposition", c8_decompose_full),
        ("shift division", c9_divide_shift),
        ("block weight", c10_lemma74),
        ("bounded element, divergent divisor", c11_thm75),
        ("recursive weight", c12_lemma76),
        ("pseudo-finiteness", c13_pseudo_finite),
        ("pseudo-finite rewriting", c14_rewrite),
        ("partial-augmentation witness", c15_prop45),
        ("ancestry closure", c16_ancestry_closure),
        ("determinism", c17_determinism),
    ];
    let mut failed = BTreeSet::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {id:>2} {name}: {detail} [{secs:.2}s]"),
            Err(detail) => {
                failed.insert(id);
                println!("FAIL {id:>2} {name}: {detail} [{secs:.2}s]");
            }
        }
    }
    let known: BTreeSet<usize> = KNOWN_UNATTAINABLE.iter().copied().collect();
    println!("{} passed, {} failed; known unattainable: {known:?}", 17 - failed.len(), failed.len());
    if failed != known {
        eprintln!("failing set {failed:?} differs from the known unattainable set {known:?}");
        std::process::exit(1);
    }
}
