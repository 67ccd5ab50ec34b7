//! A weight on `ℤ` of the form `ω_n = ρ^{|n|} γ_n` whose restriction to `ℤ⁺`
//! is not tail-preserving.
//!
//! `γ_j = (ρ+1)^{e_j}` with `e_0..e_3 = 0, 1, 2, 1` and `e_j = 1 + e_{j−n_k}` for
//! `n_k = 2ᵏ − 1 ≤ j < n_{k+1}`. Negative indices use `ω_{−n} = Cⁿ ω_n` with
//! `C = max ω_n/ω_{n+1}` over the table.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma76Weight {
    rho: Rational,
    /// `γ_0..γ_N`.
    gamma: Vec<Rational>,
    /// `e_j` with `γ_j = (ρ+1)^{e_j}`; absent for tables not built by the recursion.
    exponents: Option<Vec<u32>>,
    /// `ω_j` for `0 ≤ j ≤ N`.
    omega: Vec<Rational>,
    c: Rational,
}

/// `n_k = 2ᵏ − 1`.
pub fn marker(k: u32) -> u64 {
    (1u64 << k) - 1
}

fn exponent_table(depth: usize) -> Vec<u32> {
    let mut e = vec![0u32, 1, 2, 1];
    for j in 4..=depth {
        let k = (j as u64 + 1).ilog2();
        e.push(1 + e[j - marker(k) as usize]);
    }
    e.truncate(depth + 1);
    e
}

pub fn build_lemma76(rho: &Rational, depth: usize) -> Result<Lemma76Weight> {
    if *rho <= Rational::one() {
        return Err(Error::input("lemma76 needs ρ > 1"));
    }
    if depth < 4 {
        return Err(Error::input("lemma76 needs depth N ≥ 4"));
    }
    let e = exponent_table(depth);
    let base = rho + Rational::one();
    let gamma = e.iter().map(|&x| rational::pow(&base, x as u64)).collect();
    Lemma76Weight::assemble(rho.clone(), gamma, Some(e))
}

/// One failed pair `γ_{i+j} > γ_i γ_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaViolation {
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioCheck {
    pub k: u32,
    pub n_k: u64,
    pub ratio: Rational,
    pub bound: Rational,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lemma76Certificate {
    pub depth: usize,
    pub seeds: bool,
    pub recursion: bool,
    pub star: bool,
    pub dagger: bool,
    /// Exponent route `e_{i+j} ≤ e_i + e_j`; `None` for foreign tables.
    pub submultiplicative_exponents: Option<bool>,
    /// Rational route `γ_{i+j} ≤ γ_i γ_j`.
    pub submultiplicative: bool,
    pub pairs_checked: u64,
    pub violation: Option<GammaViolation>,
    pub extension_constant: Rational,
    pub ratios: Vec<RatioCheck>,
    pub passed: bool,
}

impl Lemma76Weight {
    /// A weight from an explicit `γ` table, used to exercise the certifier on
    /// tables that do not come from the recursion.
    pub fn from_gamma(rho: &Rational, gamma: Vec<Rational>) -> Result<Self> {
        if *rho <= Rational::one() {
            return Err(Error::input("lemma76 needs ρ > 1"));
        }
        if gamma.len() < 5 {
            return Err(Error::input("lemma76 needs depth N ≥ 4"));
        }
        if gamma.iter().any(|g| *g <= Rational::zero()) {
            return Err(Error::input("γ must be positive"));
        }
        Self::assemble(rho.clone(), gamma, None)
    }

    fn assemble(rho: Rational, gamma: Vec<Rational>, exponents: Option<Vec<u32>>) -> Result<Self> {
        let mut omega = Vec::with_capacity(gamma.len());
        let mut p = Rational::one();
        for g in &gamma {
            omega.push(&p * g);
            p *= &rho;
        }
        let c = omega
            .windows(2)
            .map(|w| &w[0] / &w[1])
            .max()
            .ok_or_else(|| Error::input("empty γ table"))?;
        Ok(Lemma76Weight { rho, gamma, exponents, omega, c })
    }

    pub fn rho(&self) -> &Rational {
        &self.rho
    }

    pub fn depth(&self) -> usize {
        self.gamma.len() - 1
    }

    pub fn gamma(&self) -> &[Rational] {
        &self.gamma
    }

    pub fn exponents(&self) -> Option<&[u32]> {
        self.exponents.as_deref()
    }

    /// `C = max_{0 ≤ n < N} ω_n/ω_{n+1}`.
    pub fn extension_constant(&self) -> &Rational {
        &self.c
    }

    pub fn value(&self, n: i64) -> Result<Rational> {
        let m = n.unsigned_abs() as usize;
        let w = self
            .omega
            .get(m)
            .ok_or_else(|| Error::input(alloc::format!("index {n} outside table depth {}", self.depth())))?;
        Ok(if n >= 0 { w.clone() } else { rational::pow(&self.c, m as u64) * w })
    }

    /// First failing pair in order of `i + j`, then `i`.
    fn first_violation(&self) -> (u64, Option<GammaViolation>) {
        let n = self.depth();
        let mut pairs = 0u64;
        for s in 0..=n {
            for i in 0..=s / 2 {
                pairs += 1;
                if self.gamma[s] > &self.gamma[i] * &self.gamma[s - i] {
                    return (pairs, Some(GammaViolation { i, j: s - i }));
                }
            }
        }
        (pairs, None)
    }

    pub fn certify(&self) -> Lemma76Certificate {
        let n = self.depth();
        let rho1 = &self.rho + Rational::one();
        let g = &self.gamma;
        let seeds = g[0] == Rational::one() && g[1] == rho1 && g[2] == &rho1 * &rho1 && g[3] == rho1;

        let mut recursion = true;
        let mut star = true;
        let mut k = 2u32;
        while marker(k) as usize <= n {
            let nk = marker(k) as usize;
            let next = (marker(k + 1) as usize).min(n + 1);
            for j in nk..next {
                recursion &= g[j] == &rho1 * &g[j - nk];
            }
            for i in 0..k {
                star &= g[nk - i as usize] == rational::pow(&rho1, i as u64 + 1);
            }
            k += 1;
        }
        let dagger = g.windows(2).all(|w| w[0] <= &rho1 * &w[1]);

        let submultiplicative_exponents = self.exponents.as_ref().map(|e| {
            (0..=n).all(|s| (0..=s / 2).all(|i| e[s] <= e[i] + e[s - i]))
        });
        let (pairs_checked, violation) = self.first_violation();
        let submultiplicative = violation.is_none();

        let ratio_base = &self.rho / &rho1;
        let mut ratios = Vec::new();
        let mut prefix = Rational::zero();
        let mut k = 2u32;
        for j in 1..=n {
            if j as u64 == marker(k) {
                let ratio = &self.omega[j] / &prefix;
                let bound = rational::pow(&ratio_base, k as u64 - 1);
                let holds = ratio <= bound;
                ratios.push(RatioCheck { k, n_k: j as u64, ratio, bound, holds });
                k += 1;
            }
            prefix += &self.omega[j];
        }

        let passed = seeds
            && recursion
            && star
            && dagger
            && submultiplicative
            && submultiplicative_exponents != Some(false)
            && ratios.iter().all(|r| r.holds);
        Lemma76Certificate {
            depth: n,
            seeds,
            recursion,
            star,
            dagger,
            submultiplicative_exponents,
            submultiplicative,
            pairs_checked,
            violation,
            extension_constant: self.c.clone(),
            ratios,
            passed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn seeds_and_star() {
        let w = build_lemma76(&int(2), 40).unwrap();
        let g: Vec<Rational> = w.gamma()[..4].to_vec();
        assert_eq!(g, vec![int(1), int(3), int(9), int(3)]);
        assert_eq!(w.gamma()[12], int(81));
        for k in 2..=5 {
            assert_eq!(w.gamma()[marker(k) as usize], int(3));
        }
    }

    #[test]
    fn extension_constant_and_negative_side() {
        let w = build_lemma76(&int(2), 31).unwrap();
        assert_eq!(*w.extension_constant(), ratio(3, 2));
        assert_eq!(w.value(-1).unwrap(), ratio(3, 2) * int(6));
        assert!(w.value(32).is_err());
    }

    #[test]
    fn certificate_passes() {
        let c = build_lemma76(&ratio(5, 2), 127).unwrap().certify();
        assert!(c.passed, "{c:?}");
        assert_eq!(c.ratios.len(), 6);
    }

    #[test]
    fn corrupted_table_is_caught() {
        let mut g = build_lemma76(&int(2), 15).unwrap().gamma().to_vec();
        g[2] = int(1);
        let c = Lemma76Weight::from_gamma(&int(2), g).unwrap().certify();
        assert!(!c.passed);
        assert_eq!(c.violation, Some(GammaViolation { i: 2, j: 2 }));
    }
}
