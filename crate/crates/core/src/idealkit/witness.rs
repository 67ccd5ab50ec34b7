//! Finite truncations of the elements exhibiting non-finite generation.
//!
//! Every recorded quantity is exact, or a rational enclosure, and recomputable
//! from the witness data. Divergence itself is never computed; reports carry a
//! certified lower bound for the untruncated object instead.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::algebra::{omega_norm, sigma_sequence, FinElement};
use crate::enclosure::{decide_lt, pow_enclosure, Decision, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{self, reciprocal_power_sum, Rational, Scalar};
use crate::structures::{ball_table, Element, LevelSet, Structure};
use crate::weights::lemma74::level as lemma74_level;
use crate::weights::{build_lemma74, tau_and_c, Weight};

fn recip(n: u64) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Prop45Witness {
    pub k_max: usize,
    /// `n_k`, strictly increasing with `B_{n_k} ⊋ B_{n_{k−1}}`.
    pub levels: Vec<usize>,
    /// `u_{n_k}`: the first element of `S_{n_k}`.
    pub points: Vec<Element>,
    /// `ζ_K δ_e − Σ_k k⁻² δ_{u_{n_k}}` with `ζ_K = Σ_{j≤K} j⁻²`.
    pub element: FinElement,
    pub zeta: Rational,
    /// `σ_{n_k}(f)` for `k = 1..=K`.
    pub sigma: Vec<Rational>,
    /// `σ_{n_k} = Σ_{j=k+1}^{K} j⁻²` for every `k`.
    pub sigma_matches_tail: bool,
    /// `σ_{n_k} + 1/(K+1)`, a lower bound for the untruncated `Σ_{j>k} j⁻²`.
    pub lower_bounds: Vec<Rational>,
    /// Every lower bound is `≥ 1/(k+1)`.
    pub lower_bound_holds: bool,
    /// `Σ_k lower_bounds ≥ H_{K+1} − 1`, the harmonic floor.
    pub harmonic_floor: Rational,
    pub diverges_like_harmonic: bool,
}

/// The partial-augmentation witness on a monoid that is not pseudo-finite.
pub fn witness_prop45(s: &Structure, k_max: usize, cap: usize) -> Result<Prop45Witness> {
    if k_max == 0 {
        return Err(Error::input("K must be positive"));
    }
    let balls = ball_table(s, k_max, cap)?;
    if let Some(n) = balls.covering_level() {
        return Err(Error::input(format!("B_{n} is the whole monoid: it is pseudo-finite and no witness exists")));
    }
    let mut levels = Vec::with_capacity(k_max);
    let mut points = Vec::with_capacity(k_max);
    for n in 1..=k_max {
        match balls.sphere(n) {
            LevelSet::Finite(sp) if !sp.is_empty() => {
                levels.push(n);
                points.push(sp[0].clone());
            }
            _ => {
                return Err(Error::input(format!(
                    "ancestry balls stop growing at level {n}: X does not pseudo-generate an infinite monoid"
                )))
            }
        }
    }
    let zeta = reciprocal_power_sum(1, k_max as u64, 2);
    let mut element = FinElement::monomial(s.identity(), Scalar::real(zeta.clone()));
    for (k, u) in points.iter().enumerate() {
        let kk = (k + 1) as u64;
        element.add_term(u.clone(), &Scalar::real(-recip(kk * kk)));
    }
    let rep = sigma_sequence(&element, &balls, None, crate::DEFAULT_PRECISION)?;
    let sigma: Vec<Rational> = levels.iter().map(|&n| rep.sigma[n - 1].re.clone()).collect();
    let kk = k_max as u64;
    // Tails Σ_{j=k+1}^{K} j⁻², accumulated from the top.
    let mut tails = alloc::vec![Rational::zero(); k_max];
    for k in (1..k_max).rev() {
        tails[k - 1] = &tails[k] + recip((k as u64 + 1) * (k as u64 + 1));
    }
    let sigma_matches_tail = sigma == tails && rep.sigma.iter().all(Scalar::is_real);
    let lower_bounds: Vec<Rational> = sigma.iter().map(|s| s + recip(kk + 1)).collect();
    let lower_bound_holds = lower_bounds.iter().enumerate().all(|(k, l)| *l >= recip(k as u64 + 2));
    let harmonic_floor = reciprocal_power_sum(2, kk + 1, 1);
    let diverges_like_harmonic = rational::sum(&lower_bounds) >= harmonic_floor;
    Ok(Prop45Witness {
        k_max,
        levels,
        points,
        element,
        zeta,
        sigma,
        sigma_matches_tail,
        lower_bounds,
        lower_bound_holds,
        harmonic_floor,
        diverges_like_harmonic,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonTpWitness {
    pub alpha: Vec<Rational>,
    /// `y_n`: the first minimizer of `ω` on `S_n`.
    pub points: Vec<Element>,
    /// `ζ δ_e − Σ α_n δ_{y_n}` with `ζ = Σ α_n`.
    pub element: FinElement,
    pub norm: Enclosure,
    /// `σ_1 … σ_N`.
    pub sigma: Vec<Rational>,
    /// `σ_n = Σ_{j>n} α_j` for every `n`.
    pub sigma_matches_tails: bool,
    pub tau: Vec<Enclosure>,
    pub c: Enclosure,
    /// `Σ_n τ_n |σ_n|`.
    pub weighted_sigma: Enclosure,
    /// `(2 + C)‖f‖_ω`.
    pub ceiling: Enclosure,
    /// `ceiling < weighted_sigma`: evidence at prefix scale, not a proof.
    pub gap: Decision,
}

/// The element whose partial augmentations escape `ℓ¹(τ)` when `α` is a
/// failure vector for `τ`.
pub fn witness_nontp_element(s: &Structure, w: &Weight, alpha: &[Rational], prec: u32, cap: usize) -> Result<NonTpWitness> {
    if alpha.iter().any(Signed::is_negative) {
        return Err(Error::input("α must be non-negative"));
    }
    if !s.is_group() {
        return Err(Error::unsupported("the partial-augmentation witness needs a group"));
    }
    let n = alpha.len();
    let tr = tau_and_c(w, s, n.max(1), prec, cap)?;
    if tr.tau.len() < n {
        return Err(Error::input(format!("the group has no element of length {}", tr.tau.len() + 1)));
    }
    let points: Vec<Element> = tr.minimizers[..n].to_vec();
    let zeta = rational::sum(alpha);
    let mut element = FinElement::monomial(s.identity(), Scalar::real(zeta));
    for (a, y) in alpha.iter().zip(&points) {
        element.add_term(y.clone(), &Scalar::real(-a));
    }
    let tau: Vec<Enclosure> = tr.tau[..n].iter().map(|t| t.enclosure()).collect();
    let balls = ball_table(s, n, cap)?;
    let rep = sigma_sequence(&element, &balls, Some(&tau), prec)?;
    let sigma: Vec<Rational> = rep.sigma.iter().map(|x| x.re.clone()).collect();
    let mut tail = Rational::zero();
    let mut tails = alloc::vec![Rational::zero(); n];
    for j in (0..n).rev() {
        tails[j] = tail.clone();
        tail += &alpha[j];
    }
    let sigma_matches_tails = sigma == tails;
    let norm = omega_norm(w, s, &element, prec, cap)?;
    let c = tr.c.enclosure();
    let ceiling = c.add(&Enclosure::exact(Rational::from_integer(2.into()))).mul_nonneg(&norm);
    let weighted_sigma = rep.weighted_sum.expect("τ supplied");
    let gap = decide_lt(&ceiling, &weighted_sigma);
    Ok(NonTpWitness {
        alpha: alpha.to_vec(),
        points,
        element,
        norm,
        sigma,
        sigma_matches_tails,
        tau,
        c,
        weighted_sigma,
        ceiling,
        gap,
    })
}

/// One coefficient `α_{n_k+1} = 1/(k ω_{n_k})` with `ω_{n_k} = baseⁿᵏ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm75Term {
    pub k: usize,
    pub n_k: u64,
    /// `ρ + ε(n_k)`.
    pub base: Rational,
    /// `ω_{n_k+1}/(k ω_{n_k})`.
    pub weighted: Enclosure,
    /// `weighted ≤ (ρ+1)/k²` from the stored ratio bound.
    pub within_ceiling: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thm75Witness {
    pub rho: Rational,
    pub blocks: usize,
    pub terms: Vec<Thm75Term>,
    /// `‖f‖_ω = Σ_k ω_{n_k+1}/(k ω_{n_k})`.
    pub norm: Enclosure,
    /// `(ρ+1) Σ_{k≤K} k⁻²`.
    pub ceiling: Rational,
    pub bounded: bool,
    /// `Σ_k |g(n_k)| ω_{n_k} = H_K` for the would-be divisor `g(j−1) = f(j)`.
    pub divisor_norm: Rational,
}

/// `f = Σ_{k≤K} (k ω_{n_k})⁻¹ δ_{n_k+1}` against the Lemma 7.4 weight: the
/// norm stays below `(ρ+1)Σk⁻²` while the divisor's norm is `H_K`.
pub fn witness_thm75(rho: &Rational, blocks: usize, prec: u32) -> Result<Thm75Witness> {
    let w = build_lemma74(rho, blocks, prec)?;
    let rho1 = rho + Rational::one();
    let mut terms = Vec::with_capacity(blocks);
    let mut norm = Enclosure::exact(Rational::zero());
    for k in 1..=blocks {
        let nk = w.boundaries()[k - 1];
        let r = w.ratio(k);
        let top = rho + lemma74_level(k);
        let kk = Rational::from_integer(BigInt::from(k as u64));
        let weighted = pow_enclosure(&r, nk, prec).scale(&(&top / &kk));
        let upper = &top * &w.ratio_bounds()[k - 1] / &kk;
        let within_ceiling = upper <= &rho1 / (&kk * &kk) && weighted.hi <= upper;
        // Dyadic endpoints keep the running sum's denominators small.
        norm = norm.add(&weighted);
        if !norm.is_exact() {
            norm = norm.outward(prec.saturating_mul(2));
        }
        terms.push(Thm75Term { k, n_k: nk, base: rho + lemma74_level(k - 1), weighted, within_ceiling });
    }
    let ceiling = &rho1 * reciprocal_power_sum(1, blocks as u64, 2);
    let bounded = terms.iter().all(|t| t.within_ceiling) && norm.hi <= ceiling;
    Ok(Thm75Witness {
        rho: rho.clone(),
        blocks,
        terms,
        norm,
        ceiling,
        bounded,
        divisor_norm: reciprocal_power_sum(1, blocks as u64, 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::structures::Family;
    use crate::weights::WeightSpec;
    use alloc::boxed::Box;
    use alloc::vec;

    #[test]
    fn prop45_on_one_letter() {
        let m = Structure::free_monoid(1);
        let w = witness_prop45(&m, 12, 1000).unwrap();
        assert!(w.sigma_matches_tail && w.lower_bound_holds && w.diverges_like_harmonic);
        assert_eq!(w.sigma[11], int(0));
        assert_eq!(w.sigma[10], ratio(1, 144));
    }

    #[test]
    fn prop45_refuses_pseudo_finite() {
        let m0 = Structure::new(Family::ZeroAdjoined(Box::new(Family::Free { rank: 2, monoid: true })), vec![Element::Theta])
            .unwrap();
        assert!(matches!(witness_prop45(&m0, 5, 1000), Err(Error::Input(_))));
    }

    #[test]
    fn nontp_gap_on_flat_integers() {
        let z = Structure::integers();
        let w = Weight::build(&WeightSpec::Trivial, 64).unwrap();
        let mut alpha = vec![int(0); 11];
        alpha[10] = int(1);
        let r = witness_nontp_element(&z, &w, &alpha, 64, 1000).unwrap();
        assert_eq!(r.weighted_sigma, Enclosure::exact(int(10)));
        assert_eq!(r.ceiling, Enclosure::exact(int(6)));
        assert_eq!(r.gap, Decision::Holds);
        let zero = witness_nontp_element(&z, &w, &vec![int(0); 4], 64, 1000).unwrap();
        assert!(zero.element.is_zero());
        assert_eq!(zero.gap, Decision::Fails);
    }

    #[test]
    fn thm75_single_block() {
        let w = witness_thm75(&int(2), 1, 128).unwrap();
        // n_1 = 1: ω_2/ω_1 = (5/2)²/3.
        assert_eq!(w.norm, Enclosure::exact(ratio(25, 12)));
        assert_eq!(w.divisor_norm, int(1));
        assert!(w.bounded);
    }
}
