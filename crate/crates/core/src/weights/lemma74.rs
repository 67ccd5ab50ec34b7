//! A weight on `ℤ⁺` with `ω_n^{1/n} → ρ` and block boundaries `n_k` at which
//! `ω_{n_k+1}/ω_{n_k} ≤ (ρ+1)/k`.
//!
//! `ω_n = (ρ + ε(n))ⁿ` with `ε` a non-increasing step function: `ε = 1` on
//! `[0, n_1]` and `ε = t_k = 1/(k+1)` on `[n_k + 1, n_{k+1}]`. Each `n_k` is the
//! least integer above `n_{k−1}` with `ρ + t_k < (1/n_k)^{1/n_k}(ρ + t_{k−1})`,
//! i.e. `n_k r_kⁿᵏ < 1` for `r_k = (ρ+t_k)/(ρ+t_{k−1})`.

use alloc::format;
use core::cmp::Ordering;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::{power_value, WeightValue};
use crate::enclosure::{pow_lower, pow_upper};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Pairs `(i, j)` are checked one by one up to this radius.
pub const EXHAUSTIVE_RADIUS: usize = 96;

/// Blocks with `n_k` up to this are re-verified by exact rational powers.
pub const EXACT_LIMIT: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma74Weight {
    rho: Rational,
    boundaries: Vec<u64>,
    /// `U_k ≥ r_kⁿᵏ` with `n_k U_k < 1`.
    ratio_bounds: Vec<Rational>,
}

/// `t_0 = 1`, `t_k = 1/(k+1)`.
pub fn level(k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(k as u64 + 1))
}

fn block_ratio(rho: &Rational, k: usize) -> Rational {
    (rho + level(k)) / (rho + level(k - 1))
}

/// Certified decision of `m · rᵐ < 1`, returning the upper bound on `rᵐ` that
/// proves it.
fn below_one(r: &Rational, m: u64, prec: u32) -> Result<Option<Rational>> {
    let mm = Rational::from_integer(m.into());
    let one = Rational::one();
    let mut p = prec;
    loop {
        let up = pow_upper(r, m, p);
        if &up * &mm < one {
            return Ok(Some(up));
        }
        if pow_lower(r, m, p) * &mm >= one {
            return Ok(None);
        }
        if p >= prec.saturating_mul(16) {
            return Err(Error::Precision { bits: p, what: format!("n·rⁿ < 1 at n = {m}") });
        }
        p *= 2;
    }
}

/// Gaps between boundaries grow roughly like `k`; the guess only steers the
/// search.
fn extrapolate(prev: u64, gap: u64, k: usize) -> u64 {
    if k < 3 {
        return prev + 1;
    }
    prev + gap + gap / (k as u64 - 2)
}

/// Least `m ≥ start` with `m rᵐ < 1` certified. `log(m rᵐ)` is concave, so on
/// `[start, ∞)` the predicate fails on a prefix and holds afterwards.
fn next_boundary(r: &Rational, start: u64, guess: u64, prec: u32) -> Result<(u64, Rational)> {
    let overflow = || Error::input("block boundary overflow");
    if let Some(u) = below_one(r, start, prec)? {
        return Ok((start, u));
    }
    // Invariant: the predicate fails at `bad` and holds at `good`.
    let mut bad = start;
    let mut found = None;
    if guess > start {
        match below_one(r, guess, prec)? {
            Some(u) => {
                let mut step = 1u64;
                let mut good = guess;
                let mut gu = u;
                loop {
                    let cand = good.saturating_sub(step).max(start);
                    match below_one(r, cand, prec)? {
                        Some(u) => {
                            good = cand;
                            gu = u;
                            step *= 2;
                        }
                        None => {
                            bad = cand;
                            break;
                        }
                    }
                }
                found = Some((good, gu));
            }
            None => bad = guess,
        }
    }
    let (mut good, mut u) = match found {
        Some(f) => f,
        None => {
            let mut step = 1u64;
            loop {
                let cand = bad.checked_add(step).ok_or_else(overflow)?;
                match below_one(r, cand, prec)? {
                    Some(u) => break (cand, u),
                    None => {
                        bad = cand;
                        step *= 2;
                    }
                }
            }
        }
    };
    while good - bad > 1 {
        let mid = bad + (good - bad) / 2;
        match below_one(r, mid, prec)? {
            Some(um) => {
                good = mid;
                u = um;
            }
            None => bad = mid,
        }
    }
    Ok((good, u))
}

pub fn build_lemma74(rho: &Rational, blocks: usize, prec: u32) -> Result<Lemma74Weight> {
    if *rho <= Rational::one() {
        return Err(Error::input("lemma74 needs ρ > 1"));
    }
    if blocks == 0 {
        return Err(Error::input("lemma74 needs at least one block"));
    }
    let mut boundaries = Vec::with_capacity(blocks);
    let mut ratio_bounds = Vec::with_capacity(blocks);
    let mut prev = 0u64;
    let mut gap = 0u64;
    for k in 1..=blocks {
        let r = block_ratio(rho, k);
        let (nk, bound) = next_boundary(&r, prev + 1, extrapolate(prev, gap, k), prec)?;
        gap = nk - prev;
        boundaries.push(nk);
        ratio_bounds.push(bound);
        prev = nk;
    }
    Ok(Lemma74Weight { rho: rho.clone(), boundaries, ratio_bounds })
}

/// Eq. (7.1) at one block, by both routes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Eq71Check {
    pub k: usize,
    pub n_k: u64,
    /// Exact rational verdict, when `n_k ≤ EXACT_LIMIT`.
    pub exact: Option<bool>,
    /// Verdict from the stored bound: `k (ρ+t_k) U_k ≤ ρ+1`.
    pub via_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma74Certificate {
    pub upto: u64,
    pub eps_in_range: bool,
    pub eps_nonincreasing: bool,
    /// `ε(n_k+1) < min{1/k, ε(n_k)}`.
    pub eps_drops: bool,
    pub boundaries_increasing: bool,
    /// `n_k U_k < 1`, and `r_kⁿᵏ ≤ U_k` re-verified exactly where feasible.
    pub choice_bounds: bool,
    pub eq71: Vec<Eq71Check>,
    /// `ω_n > ρⁿ`: from `ε > 0` on every block, plus exact values for small `n`.
    pub above_rho_power: bool,
    /// Submultiplicativity for every pair up to `upto`, which follows from
    /// `ε` non-increasing: `(ρ+ε(m+n))^{m+n} ≤ (ρ+ε(m))^m (ρ+ε(n))^n`.
    pub submultiplicative: bool,
    pub passed: bool,
}

impl Lemma74Weight {
    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn blocks(&self) -> usize {
        self.boundaries.len()
    }

    /// `n_1 < n_2 < … < n_K`.
    pub fn boundaries(&self) -> &[u64] {
        &self.boundaries
    }

    pub fn ratio_bounds(&self) -> &[Rational] {
        &self.ratio_bounds
    }

    /// `r_k = (ρ+t_k)/(ρ+t_{k−1})`.
    pub fn ratio(&self, k: usize) -> Rational {
        block_ratio(&self.rho, k)
    }

    pub fn eps(&self, n: u64) -> Rational {
        level(self.boundaries.partition_point(|&b| b < n))
    }

    pub fn value(&self, n: u64, prec: u32) -> WeightValue {
        power_value(&(&self.rho + self.eps(n)), n, prec)
    }

    /// Lower and upper bounds on `ω_{n_k+1}/ω_{n_k} = (ρ+t_k) r_kⁿᵏ`.
    pub fn block_jump(&self, k: usize, prec: u32) -> (Rational, Rational) {
        let nk = self.boundaries[k - 1];
        let a = &self.rho + level(k);
        let r = self.ratio(k);
        (&a * pow_lower(&r, nk, prec), &a * &self.ratio_bounds[k - 1])
    }

    pub fn certify(&self, upto: u64, prec: u32) -> Result<Lemma74Certificate> {
        let one = Rational::one();
        let kk = self.blocks();
        let levels: Vec<Rational> = (0..=kk).map(level).collect();
        let eps_in_range = levels.iter().all(|t| t.is_positive() && *t <= one);
        let eps_nonincreasing = levels.windows(2).all(|p| p[1] <= p[0]);
        let eps_drops = (1..=kk).all(|k| {
            let inv_k = Rational::new(BigInt::one(), BigInt::from(k as u64));
            levels[k] < inv_k && levels[k] < levels[k - 1]
        });
        let boundaries_increasing =
            self.boundaries.first().is_some_and(|&b| b >= 1) && self.boundaries.windows(2).all(|p| p[0] < p[1]);

        let rho1 = &self.rho + &one;
        let mut choice_bounds = true;
        let mut eq71 = Vec::with_capacity(kk);
        for k in 1..=kk {
            let nk = self.boundaries[k - 1];
            let u = &self.ratio_bounds[k - 1];
            let r = self.ratio(k);
            let a = &self.rho + &levels[k];
            let kr = Rational::from_integer(BigInt::from(k as u64));
            choice_bounds &= u * Rational::from_integer(nk.into()) < one;
            let exact = if nk <= EXACT_LIMIT {
                choice_bounds &= rational::cmp_scaled_pow(&one, &r, nk, u) != Ordering::Greater;
                Some(rational::cmp_scaled_pow(&(&kr * &a), &r, nk, &rho1) != Ordering::Greater)
            } else {
                None
            };
            let via_bound = &kr * &a * u <= rho1;
            eq71.push(Eq71Check { k, n_k: nk, exact, via_bound });
        }
        let mut above_rho_power = levels.iter().all(|t| t.is_positive());
        for n in 1..=(EXHAUSTIVE_RADIUS as u64).min(upto) {
            let v = self.value(n, prec);
            above_rho_power &= v.exact().is_some_and(|v| *v > rational::pow(&self.rho, n));
        }
        let submultiplicative = eps_nonincreasing;
        let passed = eps_in_range
            && eps_nonincreasing
            && eps_drops
            && boundaries_increasing
            && choice_bounds
            && eq71.iter().all(|c| c.via_bound && c.exact != Some(false))
            && above_rho_power
            && submultiplicative;
        Ok(Lemma74Certificate {
            upto,
            eps_in_range,
            eps_nonincreasing,
            eps_drops,
            boundaries_increasing,
            choice_bounds,
            eq71,
            above_rho_power,
            submultiplicative,
            passed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn boundaries_are_least_admissible() {
        let w = build_lemma74(&int(2), 12, 128).unwrap();
        assert_eq!(w.boundaries()[0], 1);
        for k in 2..=12 {
            let nk = w.boundaries()[k - 1];
            let r = w.ratio(k);
            let f = |m: u64| rational::pow(&r, m) * Rational::from_integer(m.into());
            assert!(f(nk) < int(1));
            // Every candidate between the previous boundary and n_k fails.
            for m in (w.boundaries()[k - 2] + 1)..nk {
                assert_ne!(f(m).cmp(&int(1)), Ordering::Less, "k = {k}, m = {m}");
            }
        }
    }

    #[test]
    fn eps_is_a_step_function() {
        let w = build_lemma74(&int(2), 3, 128).unwrap();
        let b = w.boundaries().to_vec();
        assert_eq!(w.eps(0), int(1));
        assert_eq!(w.eps(b[0]), int(1));
        assert_eq!(w.eps(b[0] + 1), ratio(1, 2));
        assert_eq!(w.eps(b[1]), ratio(1, 2));
        assert_eq!(w.eps(b[1] + 1), ratio(1, 3));
    }

    #[test]
    fn certificate_passes_with_both_routes() {
        let w = build_lemma74(&ratio(3, 2), 8, 128).unwrap();
        let c = w.certify(w.boundaries()[7] + 1, 128).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(c.eq71.iter().all(|e| e.exact == Some(true) && e.via_bound));
    }

    #[test]
    fn rejects_rho_at_most_one() {
        assert!(build_lemma74(&int(1), 3, 64).is_err());
    }
}
