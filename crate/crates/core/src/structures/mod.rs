//! Finitely generated groups and monoids.
//!
//! A [`Structure`] pairs a family (with its multiplication and set-valued right
//! division) with an ordered generating list `X = (x₁, …, x_r)`. The order of
//! `X` is significant: every breadth-first search explores generators in list
//! order, which makes balls, ancestries and geodesics reproducible.

mod balls;

pub use balls::{
    ball_table, cayley_ball, pseudo_finite_within, BallTable, CayleyBall, LevelSet, Link,
    PseudoFinite, StepKind,
};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// An element in normal form.
///
/// Free-group words are freely reduced sequences of signed 1-based letters
/// (`2` is `b`, `-2` is `b⁻¹`); free-monoid words use positive letters only.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Int(i64),
    Vec(Vec<i64>),
    Word(Vec<i32>),
    Table(usize),
    /// The adjoined zero θ of `M⁰`.
    Theta,
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Int(n) => write!(f, "{n}"),
            Element::Vec(v) => {
                write!(f, "(")?;
                for (i, c) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Element::Word(w) if w.is_empty() => write!(f, "e"),
            Element::Word(w) => {
                for &l in w {
                    let c = letter_name(l.unsigned_abs());
                    if l < 0 {
                        write!(f, "{c}⁻¹")?;
                    } else {
                        write!(f, "{c}")?;
                    }
                }
                Ok(())
            }
            Element::Table(i) => write!(f, "#{i}"),
            Element::Theta => write!(f, "θ"),
        }
    }
}

fn letter_name(l: u32) -> String {
    if (1..=26).contains(&l) {
        String::from(char::from(b'a' + (l - 1) as u8))
    } else {
        format!("x{l}")
    }
}

/// A finite monoid given by a row-major multiplication table; index 0 is `e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMonoid {
    size: usize,
    table: Vec<usize>,
    inverses: Option<Vec<usize>>,
}

impl TableMonoid {
    /// Validates shape, identity and associativity.
    pub fn new(rows: Vec<Vec<usize>>) -> Result<Self> {
        let size = rows.len();
        if size == 0 {
            return Err(Error::input("empty multiplication table"));
        }
        let mut table = Vec::with_capacity(size * size);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(Error::input(format!("table row {i} has length {}, expected {size}", row.len())));
            }
            for &v in row {
                if v >= size {
                    return Err(Error::input(format!("table entry {v} in row {i} out of range")));
                }
            }
            table.extend_from_slice(row);
        }
        for a in 0..size {
            if table[a] != a || table[a * size] != a {
                return Err(Error::input("element 0 is not a two-sided identity"));
            }
        }
        for a in 0..size {
            for b in 0..size {
                let ab = table[a * size + b];
                for c in 0..size {
                    if table[ab * size + c] != table[a * size + table[b * size + c]] {
                        return Err(Error::input(format!("table is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        let inverses = (0..size)
            .map(|a| (0..size).find(|&b| table[a * size + b] == 0 && table[b * size + a] == 0))
            .collect::<Option<Vec<_>>>();
        Ok(TableMonoid { size, table, inverses })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn is_group(&self) -> bool {
        self.inverses.is_some()
    }

    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.size).map(|r| r.to_vec()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    /// `ℤ`.
    Integers,
    /// The monoid `ℤ⁺ = {0, 1, 2, …}` under addition.
    NonNeg,
    /// `ℤᵈ`.
    Lattice { dim: usize },
    /// Free group (`monoid = false`) or free monoid on `rank` letters.
    Free { rank: usize, monoid: bool },
    Table(TableMonoid),
    /// `M⁰ = M ∪ {θ}` with θ absorbing. The base is never itself zero-adjoined.
    ZeroAdjoined(Box<Family>),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Integers => "Z",
            Family::NonNeg => "Zplus",
            Family::Lattice { .. } => "Zd",
            Family::Free { .. } => "free",
            Family::Table(_) => "table",
            Family::ZeroAdjoined(_) => "zero_adjoined",
        }
    }
}

/// Result of a right division `u · x⁻¹ = {v : vx = u}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preimage {
    /// Sorted, duplicate-free.
    Finite(Vec<Element>),
    /// The whole structure; arises only as `θ · θ⁻¹` in an infinite `M⁰`.
    Universal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    family: Family,
    generators: Vec<Element>,
}

impl Structure {
    pub fn new(family: Family, generators: Vec<Element>) -> Result<Self> {
        if let Family::ZeroAdjoined(base) = &family {
            if matches!(**base, Family::ZeroAdjoined(_)) {
                return Err(Error::input("nested zero adjunction"));
            }
        }
        if let Family::Lattice { dim } = family {
            if dim == 0 {
                return Err(Error::input("lattice dimension must be positive"));
            }
        }
        if let Family::Free { rank, .. } = family {
            if rank == 0 || rank > i32::MAX as usize {
                return Err(Error::input("free rank must be positive"));
            }
        }
        let s = Structure { family, generators: Vec::new() };
        for g in &generators {
            s.validate(g)?;
        }
        Ok(Structure { generators, ..s })
    }

    /// `ℤ` with `X = {1, −1}`.
    pub fn integers() -> Self {
        Structure { family: Family::Integers, generators: vec![Element::Int(1), Element::Int(-1)] }
    }

    /// `ℤ⁺` with `X = {1}`.
    pub fn nonneg() -> Self {
        Structure { family: Family::NonNeg, generators: vec![Element::Int(1)] }
    }

    /// `ℤᵈ` with `X = (e₁, −e₁, e₂, −e₂, …)`.
    pub fn lattice(dim: usize) -> Self {
        let mut gens = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            for s in [1, -1] {
                let mut v = vec![0; dim];
                v[i] = s;
                gens.push(Element::Vec(v));
            }
        }
        Structure { family: Family::Lattice { dim }, generators: gens }
    }

    /// Free group with `X = (a, a⁻¹, b, b⁻¹, …)`.
    pub fn free_group(rank: usize) -> Self {
        let gens = (1..=rank as i32).flat_map(|l| [Element::Word(vec![l]), Element::Word(vec![-l])]).collect();
        Structure { family: Family::Free { rank, monoid: false }, generators: gens }
    }

    /// Free monoid with `X = (a, b, …)`.
    pub fn free_monoid(rank: usize) -> Self {
        let gens = (1..=rank as i32).map(|l| Element::Word(vec![l])).collect();
        Structure { family: Family::Free { rank, monoid: true }, generators: gens }
    }

    /// Cyclic group of order `n` as a table, generator `g = 1`.
    pub fn cyclic(n: usize) -> Self {
        let rows = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        let t = TableMonoid::new(rows).expect("cyclic table is a group");
        Structure { family: Family::Table(t), generators: Vec::new() }
    }

    pub fn with_generators(&self, generators: Vec<Element>) -> Result<Self> {
        Structure::new(self.family.clone(), generators)
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    pub fn identity(&self) -> Element {
        identity_of(&self.family)
    }

    pub fn validate(&self, u: &Element) -> Result<()> {
        validate_in(&self.family, u)
    }

    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.validate(a)?;
        self.validate(b)?;
        Ok(mul_in(&self.family, a, b))
    }

    /// Product of two elements already known to be valid.
    pub(crate) fn mul(&self, a: &Element, b: &Element) -> Element {
        mul_in(&self.family, a, b)
    }

    /// `u · x⁻¹ = {v : vx = u}`.
    pub fn right_divide(&self, u: &Element, x: &Element) -> Result<Preimage> {
        self.validate(u)?;
        self.validate(x)?;
        Ok(div_in(&self.family, u, x))
    }

    pub(crate) fn div(&self, u: &Element, x: &Element) -> Preimage {
        div_in(&self.family, u, x)
    }

    pub fn is_group(&self) -> bool {
        match &self.family {
            Family::Integers | Family::Lattice { .. } => true,
            Family::Free { monoid, .. } => !monoid,
            Family::Table(t) => t.is_group(),
            Family::NonNeg | Family::ZeroAdjoined(_) => false,
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.family {
            Family::Table(_) => true,
            Family::ZeroAdjoined(b) => matches!(**b, Family::Table(_)),
            _ => false,
        }
    }

    /// Every `a · x⁻¹` is finite.
    pub fn is_weakly_right_cancellative(&self) -> bool {
        !matches!(self.family, Family::ZeroAdjoined(_)) || self.is_finite()
    }

    /// All elements, in ascending order, for finite structures.
    pub fn elements(&self) -> Option<Vec<Element>> {
        match &self.family {
            Family::Table(t) => Some((0..t.size).map(Element::Table).collect()),
            Family::ZeroAdjoined(b) => match &**b {
                Family::Table(t) => {
                    let mut v: Vec<Element> = (0..t.size).map(Element::Table).collect();
                    v.push(Element::Theta);
                    Some(v)
                }
                _ => None,
            },
            _ => None,
        }
    }

    pub fn inverse(&self, u: &Element) -> Option<Element> {
        match (&self.family, u) {
            (Family::Integers, Element::Int(n)) => Some(Element::Int(-n)),
            (Family::Lattice { .. }, Element::Vec(v)) => Some(Element::Vec(v.iter().map(|c| -c).collect())),
            (Family::Free { monoid: false, .. }, Element::Word(w)) => {
                Some(Element::Word(w.iter().rev().map(|l| -l).collect()))
            }
            (Family::Table(t), Element::Table(i)) => t.inverses.as_ref().map(|inv| Element::Table(inv[*i])),
            _ => None,
        }
    }

    /// `X = X⁻¹` (groups only).
    pub fn is_symmetric(&self) -> bool {
        self.is_group()
            && self
                .generators
                .iter()
                .all(|x| self.inverse(x).is_some_and(|xi| self.generators.contains(&xi)))
    }

    /// Word length `|u|_X` in a group with symmetric `X`: closed form for the
    /// standard generating sets of `ℤ`, `ℤᵈ` and `F_k`, breadth-first search
    /// otherwise.
    pub fn word_length(&self, u: &Element, cap: usize) -> Result<u64> {
        if !self.is_group() {
            return Err(Error::unsupported(format!("word length on the non-group {}", self.family.name())));
        }
        if !self.is_symmetric() {
            return Err(Error::unsupported("word length needs a symmetric generating set"));
        }
        self.validate(u)?;
        if let Some(n) = self.closed_form_length(u) {
            return Ok(n);
        }
        let mut depth = 4;
        loop {
            let ball = cayley_ball(self, depth, cap)?;
            if let Some(n) = ball.level_of(u) {
                return Ok(n as u64);
            }
            if ball.is_exhausted() {
                return Err(Error::input(format!("{u} is not generated by X")));
            }
            depth *= 2;
        }
    }

    /// Length for the standard generating sets, where it has a closed form:
    /// word length for groups, ancestry level for `ℤ⁺` and free monoids.
    pub fn closed_form_length(&self, u: &Element) -> Option<u64> {
        if !self.has_standard_generators() {
            return None;
        }
        match u {
            Element::Int(n) => Some(n.unsigned_abs()),
            Element::Vec(v) => Some(v.iter().map(|c| c.unsigned_abs()).sum()),
            Element::Word(w) => Some(w.len() as u64),
            _ => None,
        }
    }

    fn has_standard_generators(&self) -> bool {
        let standard = match &self.family {
            Family::Integers => Structure::integers(),
            Family::NonNeg => Structure::nonneg(),
            Family::Lattice { dim } => Structure::lattice(*dim),
            Family::Free { rank, monoid: false } => Structure::free_group(*rank),
            Family::Free { rank, monoid: true } => Structure::free_monoid(*rank),
            _ => return false,
        };
        let mut a = self.generators.clone();
        let mut b = standard.generators;
        a.sort();
        a.dedup();
        b.sort();
        a == b
    }

    /// Length used by radial weights: word length on groups, ancestry level on
    /// monoids.
    pub fn radial_length(&self, u: &Element, cap: usize) -> Result<u64> {
        self.validate(u)?;
        if let Some(n) = self.closed_form_length(u) {
            return Ok(n);
        }
        if self.is_group() {
            return self.word_length(u, cap);
        }
        let mut depth = 4;
        loop {
            let ball = ball_table(self, depth, cap)?;
            if let Some(n) = ball.level_of(u) {
                return Ok(n as u64);
            }
            if ball.is_stalled() {
                return Err(Error::input(format!("{u} has no ancestry with respect to X")));
            }
            depth *= 2;
        }
    }
}

fn identity_of(f: &Family) -> Element {
    match f {
        Family::Integers | Family::NonNeg => Element::Int(0),
        Family::Lattice { dim } => Element::Vec(vec![0; *dim]),
        Family::Free { .. } => Element::Word(Vec::new()),
        Family::Table(_) => Element::Table(0),
        Family::ZeroAdjoined(b) => identity_of(b),
    }
}

fn validate_in(f: &Family, u: &Element) -> Result<()> {
    let ok = match (f, u) {
        (Family::Integers, Element::Int(_)) => true,
        (Family::NonNeg, Element::Int(n)) => *n >= 0,
        (Family::Lattice { dim }, Element::Vec(v)) => v.len() == *dim,
        (Family::Free { rank, monoid }, Element::Word(w)) => {
            let r = *rank as i64;
            w.iter().all(|&l| l != 0 && (l as i64).abs() <= r && (!monoid || l > 0))
                && w.windows(2).all(|p| p[0] != -p[1])
        }
        (Family::Table(t), Element::Table(i)) => *i < t.size,
        (Family::ZeroAdjoined(_), Element::Theta) => true,
        (Family::ZeroAdjoined(b), other) => return validate_in(b, other),
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::input(format!("{u:?} is not an element of {}", f.name())))
    }
}

fn mul_in(f: &Family, a: &Element, b: &Element) -> Element {
    match (f, a, b) {
        (Family::ZeroAdjoined(_), Element::Theta, _) | (Family::ZeroAdjoined(_), _, Element::Theta) => {
            Element::Theta
        }
        (Family::ZeroAdjoined(base), a, b) => mul_in(base, a, b),
        (Family::Integers | Family::NonNeg, Element::Int(x), Element::Int(y)) => {
            Element::Int(x.checked_add(*y).expect("integer overflow in product"))
        }
        (Family::Lattice { .. }, Element::Vec(x), Element::Vec(y)) => {
            Element::Vec(x.iter().zip(y).map(|(p, q)| p + q).collect())
        }
        (Family::Free { .. }, Element::Word(x), Element::Word(y)) => {
            let mut w = x.clone();
            for &l in y {
                if w.last() == Some(&-l) {
                    w.pop();
                } else {
                    w.push(l);
                }
            }
            Element::Word(w)
        }
        (Family::Table(t), Element::Table(x), Element::Table(y)) => Element::Table(t.mul(*x, *y)),
        _ => unreachable!("operands validated against the family"),
    }
}

fn div_in(f: &Family, u: &Element, x: &Element) -> Preimage {
    use Preimage::Finite;
    match (f, u, x) {
        (Family::ZeroAdjoined(b), Element::Theta, Element::Theta) => match &**b {
            Family::Table(t) => {
                let mut all: Vec<Element> = (0..t.size).map(Element::Table).collect();
                all.push(Element::Theta);
                Finite(all)
            }
            _ => Preimage::Universal,
        },
        (Family::ZeroAdjoined(_), _, Element::Theta) => Finite(Vec::new()),
        // vx = θ with x ∈ M forces v = θ: M is closed under its own product.
        (Family::ZeroAdjoined(_), Element::Theta, _) => Finite(vec![Element::Theta]),
        (Family::ZeroAdjoined(b), u, x) => div_in(b, u, x),
        (Family::Integers, Element::Int(a), Element::Int(b)) => Finite(vec![Element::Int(a - b)]),
        (Family::NonNeg, Element::Int(a), Element::Int(b)) => {
            if a >= b {
                Finite(vec![Element::Int(a - b)])
            } else {
                Finite(Vec::new())
            }
        }
        (Family::Lattice { .. }, Element::Vec(a), Element::Vec(b)) => {
            Finite(vec![Element::Vec(a.iter().zip(b).map(|(p, q)| p - q).collect())])
        }
        (Family::Free { monoid: false, .. }, u, Element::Word(w)) => {
            let inv = Element::Word(w.iter().rev().map(|l| -l).collect());
            Finite(vec![mul_in(f, u, &inv)])
        }
        (Family::Free { monoid: true, .. }, Element::Word(a), Element::Word(b)) => {
            if a.ends_with(b) {
                Finite(vec![Element::Word(a[..a.len() - b.len()].to_vec())])
            } else {
                Finite(Vec::new())
            }
        }
        (Family::Table(t), Element::Table(a), Element::Table(b)) => {
            Finite((0..t.size).filter(|&v| t.mul(v, *b) == *a).map(Element::Table).collect())
        }
        _ => unreachable!("operands validated against the family"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(letters: &[i32]) -> Element {
        Element::Word(letters.to_vec())
    }

    #[test]
    fn products_in_normal_form() {
        let z = Structure::integers();
        assert_eq!(z.multiply(&Element::Int(2), &Element::Int(3)).unwrap(), Element::Int(5));
        let f2 = Structure::free_group(2);
        assert_eq!(f2.multiply(&w(&[1, 2]), &w(&[-2])).unwrap(), w(&[1]));
        let m0 = Structure::new(Family::ZeroAdjoined(Box::new(Family::Free { rank: 2, monoid: true })), vec![Element::Theta]).unwrap();
        assert_eq!(m0.multiply(&w(&[1]), &Element::Theta).unwrap(), Element::Theta);
    }

    #[test]
    fn identity_is_two_sided() {
        for s in [Structure::integers(), Structure::lattice(3), Structure::free_group(2), Structure::cyclic(5)] {
            let e = s.identity();
            for g in s.generators().iter().chain([&s.identity()]) {
                assert_eq!(s.mul(&e, g), *g);
                assert_eq!(s.mul(g, &e), *g);
            }
        }
    }

    #[test]
    fn right_division_rules() {
        let z = Structure::integers();
        assert_eq!(z.right_divide(&Element::Int(5), &Element::Int(2)).unwrap(), Preimage::Finite(vec![Element::Int(3)]));
        let m0 = Structure::new(Family::ZeroAdjoined(Box::new(Family::Free { rank: 2, monoid: true })), vec![Element::Theta]).unwrap();
        assert_eq!(m0.right_divide(&Element::Theta, &Element::Theta).unwrap(), Preimage::Universal);
        assert_eq!(m0.right_divide(&w(&[1]), &Element::Theta).unwrap(), Preimage::Finite(vec![]));
        let fm = Structure::free_monoid(1);
        assert_eq!(fm.right_divide(&w(&[]), &w(&[1])).unwrap(), Preimage::Finite(vec![]));
        assert_eq!(fm.right_divide(&w(&[1, 1]), &w(&[1])).unwrap(), Preimage::Finite(vec![w(&[1])]));
    }

    #[test]
    fn table_with_zero_divides_by_scan() {
        // {e, a, 0} with a² = 0.
        let t = TableMonoid::new(vec![vec![0, 1, 2], vec![1, 2, 2], vec![2, 2, 2]]).unwrap();
        let s = Structure::new(Family::Table(t), vec![Element::Table(1)]).unwrap();
        assert_eq!(s.right_divide(&Element::Table(1), &Element::Table(2)).unwrap(), Preimage::Finite(vec![]));
        assert_eq!(
            s.right_divide(&Element::Table(2), &Element::Table(1)).unwrap(),
            Preimage::Finite(vec![Element::Table(1), Element::Table(2)])
        );
    }

    #[test]
    fn word_lengths() {
        assert_eq!(Structure::integers().word_length(&Element::Int(-3), 1000).unwrap(), 3);
        assert_eq!(Structure::free_group(2).word_length(&w(&[1, 2, -1]), 1000).unwrap(), 3);
        assert_eq!(Structure::lattice(2).word_length(&Element::Vec(vec![2, -1]), 1000).unwrap(), 3);
        let c5 = Structure::cyclic(5).with_generators(vec![Element::Table(1), Element::Table(4)]).unwrap();
        assert_eq!(c5.word_length(&Element::Table(3), 1000).unwrap(), 2);
        assert!(matches!(Structure::nonneg().word_length(&Element::Int(2), 10), Err(Error::Unsupported(_))));
    }

    #[test]
    fn rejects_invalid_elements() {
        let f2 = Structure::free_group(2);
        assert!(f2.validate(&w(&[1, -1])).is_err());
        assert!(f2.validate(&w(&[3])).is_err());
        assert!(Structure::integers().validate(&Element::Theta).is_err());
        assert!(Structure::lattice(2).validate(&Element::Vec(vec![1])).is_err());
        assert!(TableMonoid::new(vec![vec![0, 1], vec![1, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn non_associative_table_is_rejected() {
        // Identity row/column intact, but (1·1)·2 ≠ 1·(1·2).
        let rows = vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 2]];
        assert!(TableMonoid::new(rows).is_err());
    }
}
