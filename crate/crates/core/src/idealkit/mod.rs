//! Constructive ideal membership: explicit expressions `f = Σ a_i * g_i` over
//! fixed generator families, and finite witnesses for the non-finitely
//! generated cases.
//!
//! Every [`Decomposition`] is checked by reconvolution when it is built.

mod decompose;
mod rewrite;
mod witness;

pub use decompose::{decompose_full, decompose_point, FullDecomposition, PointDecomposition};
pub use rewrite::{rewrite_pseudofinite, GenExpr, Rewrite};
pub use witness::{
    witness_nontp_element, witness_prop45, witness_thm75, NonTpWitness, Prop45Witness, Thm75Term, Thm75Witness,
};

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::algebra::{augmentation, convolve_unchecked, unit_difference, FinElement};
use crate::error::{Error, Result};
use crate::rational::Scalar;
use crate::structures::{ball_table, Element, Family, Structure};

/// `f = Σ_i a_i * g_i`, verified exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub input: FinElement,
    pub generators: Vec<FinElement>,
    pub coefficients: Vec<FinElement>,
}

impl Decomposition {
    /// Fails with a certificate error unless the terms reconvolve to `input`.
    pub fn verified(
        s: &Structure,
        input: FinElement,
        generators: Vec<FinElement>,
        coefficients: Vec<FinElement>,
    ) -> Result<Self> {
        let d = Decomposition { input, generators, coefficients };
        if d.reconvolve(s) != d.input {
            return Err(Error::Certificate(String::from("decomposition does not reconvolve to its input")));
        }
        Ok(d)
    }

    /// `Σ_i a_i * g_i`.
    pub fn reconvolve(&self, s: &Structure) -> FinElement {
        self.coefficients
            .iter()
            .zip(&self.generators)
            .fold(FinElement::zero(), |acc, (a, g)| acc.add(&convolve_unchecked(s, a, g)))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

pub(crate) fn require_zero_augmentation(f: &FinElement) -> Result<()> {
    let a = augmentation(f);
    if !a.is_zero() {
        return Err(Error::NonZeroAugmentation(format!("{a}")));
    }
    Ok(())
}

/// `f = Σ_i β_i (δ_e − δ_{u_i})` for `f` of augmentation zero, through the
/// partial sums `S_i = α_1 + … + α_i` along `order`:
/// `f = Σ_{i<N} S_i (δ_{u_i} − δ_{u_{i+1}})`, so `β_i = S_{i−1} − S_i`.
///
/// Identity entries of `order` are skipped, since `δ_e − δ_e = 0`.
pub fn telescope(s: &Structure, f: &FinElement, order: &[Element]) -> Result<Decomposition> {
    f.validate(s)?;
    require_zero_augmentation(f)?;
    let listed: BTreeSet<&Element> = order.iter().collect();
    if let Some(u) = f.support().find(|u| !listed.contains(u)) {
        return Err(Error::input(format!("order does not cover support element {u}")));
    }
    let e = s.identity();
    let mut seen = BTreeSet::new();
    let mut generators = Vec::new();
    let mut coefficients = Vec::new();
    let mut partial = Scalar::zero();
    for u in order {
        if !seen.insert(u) {
            return Err(Error::input(format!("order repeats {u}")));
        }
        let prev = partial.clone();
        partial += &f.coeff(u);
        if *u == e {
            continue;
        }
        let beta = &prev - &partial;
        if !beta.is_zero() {
            generators.push(unit_difference(s, u));
            coefficients.push(FinElement::monomial(e.clone(), beta));
        }
    }
    Decomposition::verified(s, f.clone(), generators, coefficients)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftSide {
    /// `f = g * (δ₁ − δ₀)`.
    Positive,
    /// `f = g * (δ₋₁ − δ₀)`.
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftDivision {
    pub side: ShiftSide,
    pub quotient: FinElement,
    pub divisor: FinElement,
}

/// The quotient `g` with `f = g * (δ₁ − δ₀)`, `g(n) = −Σ_{i≤n} f(i)`, for `f`
/// on `ℤ` or `ℤ⁺` with augmentation zero. Support in `ℤ⁻` (and not in `ℤ⁺`)
/// uses the mirrored divisor `δ₋₁ − δ₀`; mixed support on `ℤ` is handled by
/// the positive rule, which is valid for any finite support.
pub fn divide_shift(s: &Structure, f: &FinElement) -> Result<ShiftDivision> {
    if !matches!(s.family(), Family::Integers | Family::NonNeg) {
        return Err(Error::input("divide_shift needs ℤ or ℤ⁺"));
    }
    f.validate(s)?;
    require_zero_augmentation(f)?;
    let points: Vec<(i64, Scalar)> = f
        .terms()
        .iter()
        .map(|(u, c)| match u {
            Element::Int(n) => (*n, c.clone()),
            _ => unreachable!("validated integer element"),
        })
        .collect();
    let negative = !points.is_empty() && points.iter().all(|(n, _)| *n <= 0) && points.iter().any(|(n, _)| *n < 0);
    let (side, sign) = if negative { (ShiftSide::Negative, -1i64) } else { (ShiftSide::Positive, 1) };
    // Walk `m = sign·n` upwards; the quotient lives on `m ∈ [min, max)`.
    let mut quotient = FinElement::zero();
    if let (Some(lo), Some(hi)) = (points.iter().map(|p| sign * p.0).min(), points.iter().map(|p| sign * p.0).max()) {
        let mut partial = Scalar::zero();
        let mut idx: Vec<(i64, &Scalar)> = points.iter().map(|(n, c)| (sign * n, c)).collect();
        idx.sort_by_key(|p| p.0);
        let mut it = idx.into_iter().peekable();
        for m in lo..hi {
            while let Some((_, c)) = it.next_if(|p| p.0 == m) {
                partial += c;
            }
            quotient.add_term(Element::Int(sign * m), &-partial.clone());
        }
    }
    let mut divisor = FinElement::delta(Element::Int(sign));
    divisor.add_term(Element::Int(0), &-Scalar::one());
    if convolve_unchecked(s, &quotient, &divisor) != *f {
        return Err(Error::Certificate(String::from("shift quotient does not reconvolve")));
    }
    Ok(ShiftDivision { side, quotient, divisor })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessityReport {
    /// `X = ⋃ supp h_i`, in element order.
    pub x: Vec<Element>,
    /// `|B_n|` for `n = 0..=depth`; `None` once a ball is infinite.
    pub sizes: Vec<Option<usize>>,
    pub covering_level: Option<usize>,
    pub stalled: bool,
    /// A finite structure whose balls stall below its size: the `h_i` cannot
    /// generate the augmentation ideal.
    pub refuted: bool,
}

/// Ancestry-ball coverage for `X = ⋃ supp h_i`. If finitely many `h_i`
/// generate the augmentation ideal then `X` pseudo-generates `M`, so a stall
/// strictly below `M` refutes generation by these `h_i`.
pub fn pseudo_generation_necessity(s: &Structure, gens: &[FinElement], depth: usize, cap: usize) -> Result<NecessityReport> {
    let mut x = BTreeSet::new();
    for h in gens {
        h.validate(s)?;
        require_zero_augmentation(h)?;
        x.extend(h.support().cloned());
    }
    let x: Vec<Element> = x.into_iter().collect();
    let sx = s.with_generators(x.clone())?;
    let t = ball_table(&sx, depth, cap)?;
    let sizes = (0..=depth).map(|n| t.ball_size(n)).collect();
    let full = s.elements().map(|v| v.len());
    let stalled = t.is_stalled();
    let refuted = stalled && full.is_some_and(|n| t.elements().len() < n);
    Ok(NecessityReport { x, sizes, covering_level: t.covering_level(), stalled, refuted })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use alloc::vec;

    fn w(letters: &[i32]) -> Element {
        Element::Word(letters.to_vec())
    }

    #[test]
    fn telescope_examples() {
        let f2 = Structure::free_group(2);
        let (a, b, e) = (w(&[1]), w(&[2]), w(&[]));
        let f = FinElement::real([(a.clone(), int(1)), (b.clone(), int(1)), (e.clone(), int(-2))]);
        let d = telescope(&f2, &f, &[e.clone(), a.clone(), b.clone()]).unwrap();
        assert_eq!(d.coefficients, vec![FinElement::real([(e.clone(), int(-1))]); 2]);
        let zero = telescope(&f2, &FinElement::zero(), &[]).unwrap();
        assert!(zero.is_empty());
        let uv = FinElement::real([(a.clone(), int(1)), (b.clone(), int(-1))]);
        let d = telescope(&f2, &uv, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(d.generators, vec![unit_difference(&f2, &a), unit_difference(&f2, &b)]);
        assert_eq!(d.coefficients, vec![FinElement::real([(e.clone(), int(-1))]), FinElement::real([(e, int(1))])]);
        assert!(matches!(telescope(&f2, &FinElement::delta(a.clone()), &[a]), Err(Error::NonZeroAugmentation(_))));
    }

    #[test]
    fn shift_division() {
        let z = Structure::integers();
        let i = Element::Int;
        let f = FinElement::real([(i(2), int(1)), (i(0), int(-1))]);
        let q = divide_shift(&z, &f).unwrap();
        assert_eq!(q.quotient, FinElement::real([(i(0), int(1)), (i(1), int(1))]));
        let f = FinElement::real([(i(1), int(1)), (i(0), int(-1))]);
        assert_eq!(divide_shift(&z, &f).unwrap().quotient, FinElement::delta(i(0)));
        let f = FinElement::real([(i(-3), int(2)), (i(-1), int(-2))]);
        let q = divide_shift(&z, &f).unwrap();
        assert_eq!(q.side, ShiftSide::Negative);
        let f = FinElement::real([(i(-3), int(2)), (i(4), int(-2))]);
        assert_eq!(divide_shift(&z, &f).unwrap().side, ShiftSide::Positive);
        assert!(matches!(divide_shift(&z, &FinElement::delta(i(3))), Err(Error::NonZeroAugmentation(_))));
    }

    #[test]
    fn necessity() {
        // C₂×C₂ with a = 1, b = 2, ab = 3.
        let rows = (0..4).map(|x: usize| (0..4).map(|y| x ^ y).collect()).collect();
        let k4 = Structure::new(Family::Table(crate::structures::TableMonoid::new(rows).unwrap()), vec![]).unwrap();
        let h = FinElement::real([(Element::Table(0), int(1)), (Element::Table(1), int(-1))]);
        let r = pseudo_generation_necessity(&k4, &[h], 5, 100).unwrap();
        assert!(r.stalled && r.refuted);
        assert_eq!(r.sizes[5], Some(2));
        let g = FinElement::real([(Element::Table(2), int(1)), (Element::Table(0), int(-1))]);
        let h = FinElement::real([(Element::Table(1), int(1)), (Element::Table(0), int(-1))]);
        let r = pseudo_generation_necessity(&k4, &[h, g], 5, 100).unwrap();
        assert_eq!(r.covering_level, Some(2));
        assert!(!r.refuted);
    }
}
