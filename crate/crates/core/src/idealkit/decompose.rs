//! Decompositions over `{δ_e − δ_x : x ∈ X}` on a group with a radial weight.
//!
//! Along a geodesic `u = y_1⋯y_n` with prefixes `p_j = y_1⋯y_j`, the telescoping
//! sum `Σ_j δ_{p_j} * (δ_e − δ_{y_{j+1}}) = δ_e − δ_u` gives
//! `f_x = Σ_{j : y_{j+1} = x} δ_{p_j}`, and `‖f_x‖ ≤ Σ_{j<n} τ_j ≤ τ_n/D`
//! whenever `τ_{m+1} ≥ D Σ_{j≤m} τ_j` holds on the prefix.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{require_zero_augmentation, Decomposition};
use crate::algebra::{omega_norm_cached, unit_difference, BoundCheck, FinElement};
use crate::enclosure::{decide_le, Decision, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{Rational, Scalar};
use crate::structures::{cayley_ball, CayleyBall, Element, Structure};
use crate::weights::{Weight, WeightCache};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDecomposition {
    pub u: Element,
    /// Generator indices of the canonical geodesic.
    pub geodesic: Vec<usize>,
    /// Generators `δ_e − δ_x` in the order of `X`; coefficients `f_x`.
    pub decomposition: Decomposition,
    pub d: Rational,
    /// `Σ_{j<n} τ_j ≤ τ_n/D`, with `τ_0 = ω(e) = 1`.
    pub chain: BoundCheck,
    /// `‖f_x‖_ω ≤ ω(u)/D` for each `x`.
    pub bounds: Vec<BoundCheck>,
}

impl PointDecomposition {
    pub fn passed(&self) -> bool {
        self.chain.decision.holds() && self.bounds.iter().all(|b| b.decision.holds())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullDecomposition {
    /// Coefficients `s⁽ⁱ⁾` on generators `δ_e − δ_{x_i}`.
    pub decomposition: Decomposition,
    pub d: Rational,
    /// `(1/D) Σ_{u≠e} |f(u)| ω(u)`.
    pub bound: Enclosure,
    /// `‖s⁽ⁱ⁾‖_ω ≤ bound` for each `i`.
    pub checks: Vec<BoundCheck>,
    /// Support points in enumeration order (length, then element order).
    pub order: Vec<Element>,
}

impl FullDecomposition {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.decision.holds())
    }
}

struct Context<'a> {
    s: &'a Structure,
    ball: CayleyBall,
    cache: WeightCache<'a>,
    /// `τ_0 … τ_N`.
    tau: Vec<Enclosure>,
    d: Rational,
    prec: u32,
}

impl<'a> Context<'a> {
    fn new(s: &'a Structure, w: &'a Weight, d: &Rational, depth: usize, prec: u32, cap: usize) -> Result<Self> {
        if !s.is_group() {
            return Err(Error::unsupported("geodesic decompositions need a group"));
        }
        if !w.is_radial() {
            return Err(Error::unsupported("geodesic decompositions need a radial weight"));
        }
        if !d.is_positive() {
            return Err(Error::input("D must be positive"));
        }
        let tau = (0..=depth as u64)
            .map(|n| w.radial_value(n, prec).map(|v| v.enclosure()))
            .collect::<Result<Vec<_>>>()?;
        // Eq. (5.1) on the prefix: τ_{m+1} ≥ D Σ_{j=1}^m τ_j.
        let mut acc = Enclosure::exact(Rational::zero());
        for m in 1..depth {
            acc = acc.add(&tau[m]);
            match decide_le(&acc.scale(d), &tau[m + 1]) {
                Decision::Holds => {}
                Decision::Fails => {
                    return Err(Error::Certificate(format!("eq. (5.1) fails with D = {d} at n = {m}")));
                }
                Decision::Undecided => {
                    return Err(Error::Precision { bits: prec, what: format!("eq. (5.1) at n = {m}") });
                }
            }
        }
        Ok(Context { s, ball: cayley_ball(s, depth, cap)?, cache: WeightCache::new(w, s, prec, cap), tau, d: d.clone(), prec })
    }

    fn point(&mut self, u: &Element) -> Result<PointDecomposition> {
        let s = self.s;
        let geodesic = self
            .ball
            .geodesic(u)
            .ok_or_else(|| Error::input(format!("{u} lies outside the searched Cayley ball")))?;
        let gens = s.generators();
        let mut coeffs = alloc::vec![FinElement::zero(); gens.len()];
        let mut prefix = s.identity();
        for &g in &geodesic {
            coeffs[g].add_term(prefix.clone(), &Scalar::one());
            prefix = s.mul(&prefix, &gens[g]);
        }
        debug_assert_eq!(&prefix, u);
        let n = geodesic.len();
        let inv_d = self.d.recip();
        let chain_lhs = self.tau[..n].iter().fold(Enclosure::exact(Rational::zero()), |a, t| a.add(t));
        let chain = BoundCheck::new(chain_lhs, self.tau[n].scale(&inv_d));
        let omega_u = self.cache.get(u)?.enclosure().scale(&inv_d);
        let bounds = coeffs
            .iter()
            .map(|f| Ok(BoundCheck::new(omega_norm_cached(&mut self.cache, f, self.prec)?, omega_u.clone())))
            .collect::<Result<Vec<_>>>()?;
        let mut input = FinElement::delta(s.identity());
        input.add_term(u.clone(), &-Scalar::one());
        let generators = gens.iter().map(|x| unit_difference(s, x)).collect();
        let decomposition = Decomposition::verified(s, input, generators, coeffs)?;
        Ok(PointDecomposition { u: u.clone(), geodesic, decomposition, d: self.d.clone(), chain, bounds })
    }
}

fn word_length(s: &Structure, u: &Element, cap: usize) -> Result<usize> {
    Ok(s.word_length(u, cap)? as usize)
}

/// `δ_e − δ_u = Σ_x f_x * (δ_e − δ_x)` along the canonical geodesic.
pub fn decompose_point(s: &Structure, w: &Weight, d: &Rational, u: &Element, prec: u32, cap: usize) -> Result<PointDecomposition> {
    s.validate(u)?;
    let n = word_length(s, u, cap)?;
    Context::new(s, w, d, n, prec, cap)?.point(u)
}

/// `f = Σ_i s⁽ⁱ⁾ * (δ_e − δ_{x_i})` with `s⁽ⁱ⁾ = −Σ_{u≠e} f(u) f_{x_i}^{(u)}`.
pub fn decompose_full(s: &Structure, w: &Weight, d: &Rational, f: &FinElement, prec: u32, cap: usize) -> Result<FullDecomposition> {
    f.validate(s)?;
    require_zero_augmentation(f)?;
    let e = s.identity();
    let mut order: Vec<(usize, Element)> = f
        .support()
        .filter(|u| **u != e)
        .map(|u| Ok((word_length(s, u, cap)?, u.clone())))
        .collect::<Result<_>>()?;
    order.sort();
    let depth = order.last().map_or(0, |p| p.0);
    let mut ctx = Context::new(s, w, d, depth, prec, cap)?;
    let r = s.generators().len();
    let mut coeffs = alloc::vec![FinElement::zero(); r];
    let mut bound = Enclosure::exact(Rational::zero());
    for (_, u) in &order {
        let c = f.coeff(u);
        let p = ctx.point(u)?;
        for (acc, fx) in coeffs.iter_mut().zip(&p.decomposition.coefficients) {
            *acc = acc.sub(&fx.scale(&c));
        }
        bound = bound.add(&c.abs(prec).mul_nonneg(&ctx.cache.get(u)?.enclosure()));
    }
    let bound = bound.scale(&d.recip());
    let checks = coeffs
        .iter()
        .map(|a| Ok(BoundCheck::new(omega_norm_cached(&mut ctx.cache, a, prec)?, bound.clone())))
        .collect::<Result<Vec<_>>>()?;
    let generators = s.generators().iter().map(|x| unit_difference(s, x)).collect();
    let decomposition = Decomposition::verified(s, f.clone(), generators, coeffs)?;
    Ok(FullDecomposition { decomposition, d: d.clone(), bound, checks, order: order.into_iter().map(|p| p.1).collect() })
}
