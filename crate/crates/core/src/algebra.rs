//! Finitely supported elements of `ℓ¹(S, ω)`: convolution, norms, the
//! augmentation character and the partial augmentations `σ_n`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::enclosure::{decide_le, Decision, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{Rational, Scalar};
use crate::structures::{BallTable, Element, Structure};
use crate::weights::{Weight, WeightCache};

/// `Σ c_u δ_u` with no zero coefficient stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash)]
pub struct FinElement {
    terms: BTreeMap<Element, Scalar>,
}

impl FinElement {
    pub fn zero() -> Self {
        FinElement::default()
    }

    pub fn delta(u: Element) -> Self {
        Self::monomial(u, Scalar::one())
    }

    pub fn monomial(u: Element, c: Scalar) -> Self {
        let mut f = FinElement::zero();
        f.add_term(u, &c);
        f
    }

    /// Sums coefficients of repeated elements.
    pub fn from_terms<I: IntoIterator<Item = (Element, Scalar)>>(terms: I) -> Self {
        let mut f = FinElement::zero();
        for (u, c) in terms {
            f.add_term(u, &c);
        }
        f
    }

    /// `Σ c_u δ_u` with real rational coefficients.
    pub fn real<I: IntoIterator<Item = (Element, Rational)>>(terms: I) -> Self {
        Self::from_terms(terms.into_iter().map(|(u, c)| (u, Scalar::real(c))))
    }

    pub fn add_term(&mut self, u: Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(u.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&u);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Element, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, u: &Element) -> Scalar {
        self.terms.get(u).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &Element> {
        self.terms.keys()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &FinElement) -> FinElement {
        let mut out = self.clone();
        for (u, c) in &other.terms {
            out.add_term(u.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &FinElement) -> FinElement {
        let mut out = self.clone();
        for (u, c) in &other.terms {
            out.add_term(u.clone(), &-c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> FinElement {
        FinElement::from_terms(self.terms.iter().map(|(u, a)| (u.clone(), a * c)))
    }

    pub fn neg(&self) -> FinElement {
        FinElement { terms: self.terms.iter().map(|(u, c)| (u.clone(), -c)).collect() }
    }

    pub fn validate(&self, s: &Structure) -> Result<()> {
        self.terms.keys().try_for_each(|u| s.validate(u))
    }
}

/// `(f*g)(u) = Σ_{st=u} f(s)g(t)`.
pub fn convolve(s: &Structure, f: &FinElement, g: &FinElement) -> Result<FinElement> {
    f.validate(s)?;
    g.validate(s)?;
    Ok(convolve_unchecked(s, f, g))
}

pub(crate) fn convolve_unchecked(s: &Structure, f: &FinElement, g: &FinElement) -> FinElement {
    let mut out = FinElement::zero();
    for (a, x) in &f.terms {
        for (b, y) in &g.terms {
            out.add_term(s.mul(a, b), &(x * y));
        }
    }
    out
}

/// `Σ_u f(u)`.
pub fn augmentation(f: &FinElement) -> Scalar {
    f.terms.values().cloned().sum()
}

/// `Σ_u |f(u)|`.
pub fn l1_norm(f: &FinElement, prec: u32) -> Enclosure {
    f.terms.values().fold(Enclosure::exact(Rational::zero()), |acc, c| acc.add(&c.abs(prec)))
}

/// `‖f‖_ω = Σ_u |f(u)| ω(u)`.
pub fn omega_norm(w: &Weight, s: &Structure, f: &FinElement, prec: u32, cap: usize) -> Result<Enclosure> {
    let mut cache = WeightCache::new(w, s, prec, cap);
    omega_norm_cached(&mut cache, f, prec)
}

pub(crate) fn omega_norm_cached(cache: &mut WeightCache<'_>, f: &FinElement, prec: u32) -> Result<Enclosure> {
    let mut acc = Enclosure::exact(Rational::zero());
    for (u, c) in &f.terms {
        acc = acc.add(&c.abs(prec).mul_nonneg(&cache.get(u)?.enclosure()));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaReport {
    /// `σ_1, …, σ_N` over the recorded ball table.
    pub sigma: Vec<Scalar>,
    /// Least `n ≥ 1` with `supp f ⊆ B_n`, if within the table.
    pub stabilized_at: Option<usize>,
    pub augmentation: Scalar,
    /// `Σ_n |σ_n|`.
    pub abs_sum: Enclosure,
    /// `Σ_n τ_n |σ_n|`, when `τ` is supplied.
    pub weighted_sum: Option<Enclosure>,
}

/// `σ_n(f) = Σ_{u ∈ B_n} f(u)` for `n = 1..=N`, with `τ[n-1] = τ_n` weighting.
pub fn sigma_sequence(f: &FinElement, balls: &BallTable, tau: Option<&[Enclosure]>, prec: u32) -> Result<SigmaReport> {
    let depth = balls.depth();
    if let Some(t) = tau {
        if t.len() < depth {
            return Err(Error::input("τ is shorter than the ball table"));
        }
    }
    // Bucket coefficients by first level; elements outside the table never enter.
    let mut by_level: Vec<Scalar> = alloc::vec![Scalar::zero(); depth + 1];
    let mut outside = false;
    for (u, c) in &f.terms {
        match balls.level_of(u) {
            Some(l) => by_level[l] += c,
            None => outside = true,
        }
    }
    let mut sigma = Vec::with_capacity(depth);
    let mut acc = by_level[0].clone();
    let mut abs_sum = Enclosure::exact(Rational::zero());
    let mut weighted = tau.map(|_| Enclosure::exact(Rational::zero()));
    for n in 1..=depth {
        acc += &by_level[n];
        let a = acc.abs(prec);
        abs_sum = abs_sum.add(&a);
        if let (Some(wsum), Some(t)) = (weighted.as_mut(), tau) {
            *wsum = wsum.add(&t[n - 1].mul_nonneg(&a));
        }
        sigma.push(acc.clone());
    }
    let stabilized_at = if outside {
        None
    } else {
        let top = f.terms.keys().filter_map(|u| balls.level_of(u)).max().unwrap_or(0);
        Some(top.max(1)).filter(|&l| l <= depth)
    };
    Ok(SigmaReport { sigma, stabilized_at, augmentation: augmentation(f), abs_sum, weighted_sum: weighted })
}

/// `lhs ≤ rhs`, decided through enclosures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCheck {
    pub lhs: Enclosure,
    pub rhs: Enclosure,
    pub decision: Decision,
}

impl BoundCheck {
    pub fn new(lhs: Enclosure, rhs: Enclosure) -> Self {
        let decision = decide_le(&lhs, &rhs);
        BoundCheck { lhs, rhs, decision }
    }
}

/// `δ_e − δ_x`.
pub fn unit_difference(s: &Structure, x: &Element) -> FinElement {
    let mut f = FinElement::delta(s.identity());
    f.add_term(x.clone(), &-Scalar::one());
    f
}

/// `Σ_n |σ_n(g*(δ_e−δ_x))| ≤ 3 Σ_u |g(u)|`.
///
/// The table must reach past the support of `g*(δ_e−δ_x)`, where `σ_n`
/// vanishes, so the finite sum is the whole series.
pub fn lemma44_check(s: &Structure, balls: &BallTable, g: &FinElement, x: &Element, prec: u32) -> Result<BoundCheck> {
    let h = convolve(s, g, &unit_difference(s, x))?;
    let rep = sigma_sequence(&h, balls, None, prec)?;
    if rep.stabilized_at.is_none() {
        return Err(Error::input("ball table does not reach the support of g*(δ_e−δ_x)"));
    }
    Ok(BoundCheck::new(rep.abs_sum, l1_norm(g, prec).scale(&Rational::from_integer(3.into()))))
}

/// `Σ_n τ_n |σ_n(g*(δ_e−δ_x))| ≤ (2+C) ‖g‖_ω`, with `τ` and `C` as computed
/// from the same weight and generating set.
#[allow(clippy::too_many_arguments)]
pub fn lemma64_check(
    s: &Structure,
    w: &Weight,
    balls: &BallTable,
    tau: &[Enclosure],
    c: &Enclosure,
    g: &FinElement,
    x: &Element,
    prec: u32,
    cap: usize,
) -> Result<BoundCheck> {
    let h = convolve(s, g, &unit_difference(s, x))?;
    let rep = sigma_sequence(&h, balls, Some(tau), prec)?;
    if rep.stabilized_at.is_none() {
        return Err(Error::input("ball table does not reach the support of g*(δ_e−δ_x)"));
    }
    let two_plus_c = c.add(&Enclosure::exact(Rational::from_integer(2.into())));
    let rhs = two_plus_c.mul_nonneg(&omega_norm(w, s, g, prec, cap)?);
    Ok(BoundCheck::new(rep.weighted_sum.expect("τ supplied"), rhs))
}
