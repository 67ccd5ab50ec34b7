//! Rewriting an augmentation-zero element supported in `B_k` over the
//! generator family built by induction on `k`.
//!
//! Base family: `δ_e − δ_{x_1}` and `δ_{x_i} − δ_{x_{i+1}}`. Each level adds
//! `δ_e − δ_{x_i}` and right translates `p * δ_{x_j}` of the previous family.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use super::{require_zero_augmentation, Decomposition};
use crate::algebra::{augmentation, convolve_unchecked, FinElement};
use crate::error::{Error, Result};
use crate::rational::Scalar;
use crate::structures::{BallTable, Element, Preimage, Structure};

/// A generator of the family, with 1-based generator indices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GenExpr {
    /// `Base(0) = δ_e − δ_{x_1}`, `Base(i) = δ_{x_i} − δ_{x_{i+1}}`.
    Base(usize),
    /// `δ_e − δ_{x_i}`.
    EMinus(usize),
    /// `p * δ_{x_j}`.
    Shift(Box<GenExpr>, usize),
}

impl GenExpr {
    pub fn eval(&self, s: &Structure) -> FinElement {
        let x = |i: usize| s.generators()[i - 1].clone();
        let diff = |a: Element, b: Element| {
            let mut f = FinElement::delta(a);
            f.add_term(b, &-Scalar::one());
            f
        };
        match self {
            GenExpr::Base(0) => diff(s.identity(), x(1)),
            GenExpr::Base(i) => diff(x(*i), x(i + 1)),
            GenExpr::EMinus(i) => diff(s.identity(), x(*i)),
            GenExpr::Shift(p, j) => convolve_unchecked(s, &p.eval(s), &FinElement::delta(x(*j))),
        }
    }

    /// Number of nested translates.
    pub fn depth(&self) -> usize {
        match self {
            GenExpr::Shift(p, _) => 1 + p.depth(),
            _ => 0,
        }
    }
}

impl fmt::Display for GenExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GenExpr::Base(0) => write!(f, "(e - x1)"),
            GenExpr::Base(i) => write!(f, "(x{} - x{})", i, i + 1),
            GenExpr::EMinus(i) => write!(f, "(e - x{i})"),
            GenExpr::Shift(p, j) => write!(f, "{p}*x{j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rewrite {
    /// Least `k` with `supp f ⊆ B_k`.
    pub level: usize,
    /// Generators in `GenExpr` order, each with its coefficient.
    pub exprs: Vec<GenExpr>,
    pub decomposition: Decomposition,
}

struct Ctx<'a> {
    s: &'a Structure,
    balls: &'a BallTable,
}

type Terms = Vec<(GenExpr, FinElement)>;

impl Ctx<'_> {
    fn x(&self, i: usize) -> &Element {
        &self.s.generators()[i]
    }

    /// Telescoping over `v_0 = e, v_i = x_i`; repeated points are counted once.
    fn base(&self, f: &FinElement) -> Terms {
        let e = self.s.identity();
        let r = self.s.generators().len();
        let mut seen = alloc::collections::BTreeSet::from([e.clone()]);
        let mut partial = f.coeff(&e);
        let mut out = Vec::new();
        for i in 0..r {
            if !partial.is_zero() {
                out.push((GenExpr::Base(i), FinElement::monomial(e.clone(), partial.clone())));
            }
            if seen.insert(self.x(i).clone()) {
                partial += &f.coeff(self.x(i));
            }
        }
        out
    }

    fn in_base(&self, f: &FinElement) -> bool {
        let e = self.s.identity();
        f.support().all(|u| *u == e || self.s.generators().contains(u))
    }

    /// BFS-least `u'` in `B_{k−1}` with `u' x = u`.
    fn preimage(&self, u: &Element, x: &Element, k: usize) -> Option<Element> {
        match self.s.div(u, x) {
            Preimage::Universal => Some(self.s.identity()),
            Preimage::Finite(list) => list
                .into_iter()
                .filter(|v| self.balls.contains(v, k - 1))
                .min_by_key(|v| self.balls.rank(v)),
        }
    }

    fn rewrite(&self, f: &FinElement, k: usize) -> Result<Terms> {
        if f.is_zero() {
            return Ok(Vec::new());
        }
        if self.in_base(f) {
            return Ok(self.base(f));
        }
        if k == 0 {
            return Err(Error::input("support escapes B_0"));
        }
        let s = self.s;
        let e = s.identity();
        let r = s.generators().len();
        let mut g = alloc::vec![FinElement::zero(); r];
        let mut g_prime = alloc::vec![FinElement::zero(); r];
        let mut h = alloc::vec![FinElement::zero(); r];
        'points: for (u, c) in f.terms() {
            if *u == e {
                continue;
            }
            for i in 0..r {
                if let Some(v) = self.preimage(u, self.x(i), k) {
                    g[i].add_term(u.clone(), c);
                    g_prime[i].add_term(v, c);
                    continue 'points;
                }
            }
            for i in 0..r {
                if self.balls.contains(&s.mul(u, self.x(i)), k - 1) {
                    h[i].add_term(u.clone(), c);
                    continue 'points;
                }
            }
            return Err(Error::input(format!("{u} is not in B_{k}")));
        }

        let mut out = Vec::new();
        let mut remainder = FinElement::monomial(e.clone(), f.coeff(&e));
        for i in 0..r {
            if g[i].is_zero() {
                continue;
            }
            let phi = augmentation(&g[i]);
            remainder.add_term(self.x(i).clone(), &phi);
            // g_i − φ(g_i)δ_{x_i} = (g_i' − φ(g_i)δ_e) * δ_{x_i}.
            let q = g_prime[i].sub(&FinElement::monomial(e.clone(), phi));
            for (p, a) in self.rewrite(&q, k - 1)? {
                out.push((GenExpr::Shift(Box::new(p), i + 1), a));
            }
        }
        for i in 0..r {
            if h[i].is_zero() {
                continue;
            }
            let phi = augmentation(&h[i]);
            remainder.add_term(e.clone(), &phi);
            // h_i − φδ_e = (h_i − φδ_e)*(δ_e − δ_{x_i}) + (h_i − φδ_e)*δ_{x_i}.
            let q = h[i].sub(&FinElement::monomial(e.clone(), phi));
            let shifted = convolve_unchecked(s, &q, &FinElement::delta(self.x(i).clone()));
            out.push((GenExpr::EMinus(i + 1), q));
            out.extend(self.rewrite(&shifted, k - 1)?);
        }
        out.extend(self.base(&remainder));
        Ok(out)
    }
}

/// Rewrites `f` (augmentation zero, support in the table) over the inductive
/// generator family and verifies the result by reconvolution.
pub fn rewrite_pseudofinite(s: &Structure, balls: &BallTable, f: &FinElement) -> Result<Rewrite> {
    f.validate(s)?;
    require_zero_augmentation(f)?;
    if s.generators().is_empty() {
        return Err(Error::input("empty generating set"));
    }
    let mut level = 0;
    for u in f.support() {
        let l = balls
            .level_of(u)
            .ok_or_else(|| Error::input(format!("{u} is outside B_{}", balls.depth())))?;
        level = level.max(l);
    }
    let ctx = Ctx { s, balls };
    let mut grouped: BTreeMap<GenExpr, FinElement> = BTreeMap::new();
    for (p, a) in ctx.rewrite(f, level)? {
        let slot = grouped.entry(p).or_default();
        *slot = slot.add(&a);
    }
    grouped.retain(|_, a| !a.is_zero());
    let exprs: Vec<GenExpr> = grouped.keys().cloned().collect();
    let generators = exprs.iter().map(|p| p.eval(s)).collect();
    let coefficients = grouped.into_values().collect();
    let decomposition = Decomposition::verified(s, f.clone(), generators, coefficients)?;
    Ok(Rewrite { level, exprs, decomposition })
}
