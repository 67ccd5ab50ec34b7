//! Finite prefixes `τ_1 … τ_N` of positive sequences and tail-preservation
//! diagnostics.
//!
//! Tail-preservation of an infinite sequence is not decidable from a prefix.
//! [`check_prefix_tp`] is a labelled semi-decision; witnesses from
//! [`failure_witness`] and the exact checks of [`growth_check`] are the only
//! certificates.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// `τ_1 … τ_N`, every entry `≥ 1`, `N ≥ 2`. Indices are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSequence {
    values: Vec<Rational>,
}

impl PrefixSequence {
    pub fn new(values: Vec<Rational>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::input("a prefix sequence needs N ≥ 2 entries"));
        }
        if let Some(i) = values.iter().position(|v| *v < Rational::one()) {
            return Err(Error::input(alloc::format!("τ_{} = {} is below 1", i + 1, values[i])));
        }
        Ok(PrefixSequence { values })
    }

    /// `τ_n = f(n)` for `n = 1..=N`.
    pub fn from_fn(n: usize, f: impl Fn(u64) -> Rational) -> Result<Self> {
        Self::new((1..=n as u64).map(f).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `τ_n` for `1 ≤ n ≤ N`.
    pub fn get(&self, n: usize) -> &Rational {
        &self.values[n - 1]
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    /// `‖x‖_τ = Σ τ_n |x_n|`, with `x[n-1] = x_n`.
    pub fn norm(&self, x: &[Rational]) -> Result<Rational> {
        self.check_support(x)?;
        Ok(x.iter().zip(&self.values).map(|(a, t)| a.abs() * t).sum())
    }

    fn check_support(&self, x: &[Rational]) -> Result<()> {
        if x.len() > self.len() {
            return Err(Error::input(alloc::format!(
                "vector of length {} exceeds the prefix length {}",
                x.len(),
                self.len()
            )));
        }
        Ok(())
    }

    /// `Σ_{j≤n} τ_j` for `n = 0..=N`.
    fn prefix_sums(&self) -> Vec<Rational> {
        rational::prefix_sums(&self.values)
    }
}

/// `T(x) = Σ_n τ_n |Σ_{j>n} x_j|`.
pub fn tail_functional(tau: &PrefixSequence, x: &[Rational]) -> Result<Rational> {
    tau.check_support(x)?;
    let mut tail = Rational::zero();
    let mut total = Rational::zero();
    // At step n, `tail = Σ_{j>n} x_j`.
    for n in (1..=x.len()).rev() {
        total += tau.get(n) * tail.abs();
        tail += &x[n - 1];
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    PrefixConsistent,
    SuspectFail,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SuspectReason {
    /// Final-quartile minimum ratio below the threshold.
    BelowThreshold { index: usize, ratio: Rational },
    /// The trailing window of ratios is strictly decreasing with at least the
    /// configured relative drop.
    TrailingDecrease { from: usize, drop: Rational },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpConfig {
    pub threshold: Rational,
    pub window: usize,
    /// Minimum relative drop `(first − last)/first` across the window.
    pub min_drop: Rational,
}

impl Default for TpConfig {
    fn default() -> Self {
        TpConfig { threshold: rational::ratio(1, 1000), window: 10, min_drop: rational::ratio(1, 100) }
    }
}

/// A vector in `c₀₀⁺` with its exact norm and tail functional.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub x: Vec<Rational>,
    pub norm: Rational,
    pub t: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TpVerdict {
    /// `D̂ = min_{1≤n<N} τ_{n+1}/Σ_{j≤n} τ_j`.
    pub d_hat: Rational,
    /// The `n` attaining `D̂` (first one).
    pub argmin: usize,
    /// `ratios[n-1] = τ_{n+1}/Σ_{j≤n} τ_j`.
    pub ratios: Vec<Rational>,
    pub classification: Classification,
    pub reason: Option<SuspectReason>,
    /// `e^{(argmin+1)}/τ_{argmin+1}`: unit norm and `T = 1/D̂`, so it refutes
    /// eq. (5.1) on this prefix for every `D > D̂`.
    pub witness: Witness,
}

pub fn check_prefix_tp(tau: &PrefixSequence, config: &TpConfig) -> TpVerdict {
    let sums = tau.prefix_sums();
    let n_max = tau.len();
    let ratios: Vec<Rational> = (1..n_max).map(|n| tau.get(n + 1) / &sums[n]).collect();
    let (mut argmin, mut d_hat) = (1, ratios[0].clone());
    for (i, r) in ratios.iter().enumerate().skip(1) {
        if *r < d_hat {
            d_hat = r.clone();
            argmin = i + 1;
        }
    }

    let m = ratios.len();
    let quartile = m - m.div_ceil(4);
    let mut reason = ratios[quartile..]
        .iter()
        .enumerate()
        .filter(|(_, r)| **r < config.threshold)
        .min_by(|a, b| a.1.cmp(b.1))
        .map(|(i, r)| SuspectReason::BelowThreshold { index: quartile + i + 1, ratio: r.clone() });
    if reason.is_none() && config.window >= 2 && m >= config.window {
        let tail = &ratios[m - config.window..];
        let decreasing = tail.windows(2).all(|w| w[1] < w[0]);
        let drop = (&tail[0] - &tail[config.window - 1]) / &tail[0];
        if decreasing && drop >= config.min_drop {
            reason = Some(SuspectReason::TrailingDecrease { from: m - config.window + 1, drop });
        }
    }

    let j = argmin + 1;
    let witness = single_coordinate(tau, &sums, j);
    TpVerdict {
        d_hat,
        argmin,
        ratios,
        classification: if reason.is_some() { Classification::SuspectFail } else { Classification::PrefixConsistent },
        reason,
        witness,
    }
}

/// `x = e^{(j)}/τ_j`: `‖x‖_τ = 1` and `T(x) = Σ_{i<j} τ_i / τ_j`.
fn single_coordinate(tau: &PrefixSequence, sums: &[Rational], j: usize) -> Witness {
    let mut x = vec![Rational::zero(); j];
    x[j - 1] = tau.get(j).recip();
    Witness { x, norm: Rational::one(), t: &sums[j - 1] / tau.get(j) }
}

/// First candidate with `‖x‖_τ ≤ 1` and `T(x) ≥ target`: single coordinates
/// `e^{(j)}/τ_j` in order of `j`, then uniform blocks `c·1_{[a,b]}` with
/// `c = 1/Σ_{a≤i≤b} τ_i` in order of `(a, b)`.
///
/// `None` only means this prefix is too short to exhibit the target.
pub fn failure_witness(tau: &PrefixSequence, target: &Rational) -> Result<Option<Witness>> {
    if !target.is_positive() {
        return Err(Error::input("failure_witness needs a positive target"));
    }
    let sums = tau.prefix_sums();
    for j in 1..=tau.len() {
        let w = single_coordinate(tau, &sums, j);
        if w.t >= *target {
            return Ok(Some(w));
        }
    }
    // `Σ_{n≤m} n τ_n`, to evaluate block tails in O(1).
    let mut moments = vec![Rational::zero()];
    for n in 1..=tau.len() {
        let next = &moments[n - 1] + tau.get(n) * Rational::from_integer(BigInt::from(n as u64));
        moments.push(next);
    }
    for a in 1..=tau.len() {
        for b in (a + 1)..=tau.len() {
            let mass = &sums[b] - &sums[a - 1];
            let width = Rational::from_integer(BigInt::from((b - a + 1) as u64));
            // Σ_{n<a} τ_n (b−a+1) + Σ_{a≤n<b} τ_n (b−n), per unit coefficient.
            let bb = Rational::from_integer(BigInt::from(b as u64));
            let raw = &sums[a - 1] * width + bb * (&sums[b - 1] - &sums[a - 1]) - (&moments[b - 1] - &moments[a - 1]);
            let t = raw / &mass;
            if t >= *target {
                let c = mass.recip();
                let mut x = vec![Rational::zero(); b];
                for xi in &mut x[a - 1..] {
                    *xi = c.clone();
                }
                let w = Witness { norm: tau.norm(&x)?, t: tail_functional(tau, &x)?, x };
                debug_assert_eq!(w.t, t);
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthReport {
    pub d: Rational,
    /// First `n` with `τ_{n+1} < D Σ_{j≤n} τ_j`.
    pub hypothesis_failure: Option<usize>,
    /// First `j` with `τ_{j+1} < D(D+1)^{j−1} τ_1`.
    pub conclusion_failure: Option<usize>,
}

impl GrowthReport {
    pub fn hypothesis_holds(&self) -> bool {
        self.hypothesis_failure.is_none()
    }

    pub fn conclusion_holds(&self) -> bool {
        self.conclusion_failure.is_none()
    }
}

pub fn growth_check(tau: &PrefixSequence, d: &Rational) -> Result<GrowthReport> {
    if !d.is_positive() {
        return Err(Error::input("growth_check needs D > 0"));
    }
    let sums = tau.prefix_sums();
    let hypothesis_failure = (1..tau.len()).find(|&n| *tau.get(n + 1) < d * &sums[n]);
    let d1 = d + Rational::one();
    let mut bound = d * tau.get(1);
    let mut conclusion_failure = None;
    for j in 1..tau.len() {
        if *tau.get(j + 1) < bound {
            conclusion_failure = Some(j);
            break;
        }
        bound *= &d1;
    }
    Ok(GrowthReport { d: d.clone(), hypothesis_failure, conclusion_failure })
}

/// The block sequence: `n_0 = −1`, `n_1 = 1`, `n_k = n_{k−1} + k + 1`, and
/// `τ_j = ρ^{n_k+1}` for `n_{k−1}+1 < j ≤ n_k+1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockSequence {
    pub rho: Rational,
    /// `n_1 … n_K`.
    pub boundaries: Vec<u64>,
    pub tau: PrefixSequence,
    /// First `j` with `τ_j < ρ^j`.
    pub below_rho_power: Option<usize>,
    /// `τ_{n_k+1}/Σ_{j≤n_k} τ_j` for `k = 1..=K`.
    pub boundary_ratios: Vec<Rational>,
    /// Every boundary ratio is `≤ 1/k`.
    pub ratios_bounded: bool,
}

pub fn build_block_sequence(rho: &Rational, blocks: usize) -> Result<BlockSequence> {
    if *rho <= Rational::one() {
        return Err(Error::input("block sequence needs ρ > 1"));
    }
    if blocks < 2 {
        return Err(Error::input("block sequence needs K ≥ 2"));
    }
    let mut boundaries = vec![1u64];
    for k in 2..=blocks as u64 {
        let prev = boundaries[boundaries.len() - 1];
        boundaries.push(prev + k + 1);
    }
    let mut values = Vec::new();
    let mut lo = 0u64;
    for &nk in &boundaries {
        let v = rational::pow(rho, nk + 1);
        while lo < nk + 1 {
            values.push(v.clone());
            lo += 1;
        }
    }
    let tau = PrefixSequence::new(values)?;
    let mut power = Rational::one();
    let mut below_rho_power = None;
    for j in 1..=tau.len() {
        power *= rho;
        if *tau.get(j) < power {
            below_rho_power = Some(j);
            break;
        }
    }
    let sums = tau.prefix_sums();
    let boundary_ratios: Vec<Rational> =
        boundaries.iter().map(|&nk| tau.get(nk as usize + 1) / &sums[nk as usize]).collect();
    let ratios_bounded = boundary_ratios
        .iter()
        .enumerate()
        .all(|(i, r)| *r <= Rational::new(BigInt::one(), BigInt::from(i as u64 + 1)));
    Ok(BlockSequence { rho: rho.clone(), boundaries, tau, below_rho_power, boundary_ratios, ratios_bounded })
}
