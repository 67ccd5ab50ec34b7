//! Ancestry balls `B_n`, Cayley balls and pseudo-finiteness.
//!
//! `B_n` is built by level-by-level closure: `B_n = {e} ∪ ⋃_x (B_{n−1}·x ∪
//! B_{n−1}·x⁻¹)`, where only the newest sphere needs expanding because
//! `B_{n−2}·x^{±1} ⊆ B_{n−1}`. No group shortcut is taken for monoids; the set
//! product is not associative, so the closure must follow the left-to-right
//! bracketing of the definition.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Element, Preimage, Structure};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    /// `child = parent · x`.
    Multiply,
    /// `child · x = parent`.
    Divide,
}

/// How an element was first reached: from the element at index `from`, via
/// generator `gen`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Link {
    pub from: usize,
    pub gen: usize,
    pub kind: StepKind,
}

/// One ball or sphere.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LevelSet<'a> {
    Finite(&'a [Element]),
    /// The whole structure.
    Universal,
    /// Everything outside the listed finite set.
    CoFinite(&'a [Element]),
}

impl LevelSet<'_> {
    pub fn contains(&self, u: &Element) -> bool {
        match self {
            LevelSet::Finite(s) => s.contains(u),
            LevelSet::Universal => true,
            LevelSet::CoFinite(s) => !s.contains(u),
        }
    }

    pub fn finite(&self) -> Option<&[Element]> {
        match self {
            LevelSet::Finite(s) => Some(s),
            _ => None,
        }
    }
}

/// `B_0 ⊆ B_1 ⊆ … ⊆ B_N` with discovery order and parent links.
///
/// Elements are stored in discovery order, so `B_n` is the prefix
/// `elems[..ends[n]]` and `S_n` the slice between consecutive ends. Once a level
/// becomes universal (only `θ·θ⁻¹` in an infinite `M⁰`) enumeration stops.
#[derive(Debug, Clone)]
pub struct BallTable {
    depth: usize,
    elems: Vec<Element>,
    index: BTreeMap<Element, usize>,
    level: Vec<usize>,
    parent: Vec<Option<Link>>,
    ends: Vec<usize>,
    universal: Option<(usize, Link)>,
    full_size: Option<usize>,
}

pub fn ball_table(s: &Structure, depth: usize, cap: usize) -> Result<BallTable> {
    let e = s.identity();
    let mut t = BallTable {
        depth,
        elems: alloc::vec![e.clone()],
        index: BTreeMap::from([(e, 0)]),
        level: alloc::vec![0],
        parent: alloc::vec![None],
        ends: alloc::vec![1],
        universal: None,
        full_size: s.elements().map(|v| v.len()),
    };
    for n in 1..=depth {
        let start = if n == 1 { 0 } else { t.ends[n - 2] };
        let frontier = start..t.ends[n - 1];
        'expand: for from in frontier {
            for (gen, x) in s.generators().iter().enumerate() {
                let prod = s.mul(&t.elems[from], x);
                t.insert(prod, n, Link { from, gen, kind: StepKind::Multiply }, cap)?;
                match s.div(&t.elems[from], x) {
                    Preimage::Finite(vs) => {
                        for v in vs {
                            t.insert(v, n, Link { from, gen, kind: StepKind::Divide }, cap)?;
                        }
                    }
                    Preimage::Universal => {
                        t.universal = Some((n, Link { from, gen, kind: StepKind::Divide }));
                        break 'expand;
                    }
                }
            }
        }
        t.ends.push(t.elems.len());
        if t.universal.is_some() {
            // Remaining levels are all of M and have empty spheres.
            while t.ends.len() <= depth {
                t.ends.push(t.elems.len());
            }
            break;
        }
    }
    Ok(t)
}

impl BallTable {
    fn insert(&mut self, u: Element, n: usize, link: Link, cap: usize) -> Result<()> {
        if self.index.contains_key(&u) {
            return Ok(());
        }
        if self.elems.len() >= cap {
            return Err(Error::BallCap { cap, depth: n });
        }
        self.index.insert(u.clone(), self.elems.len());
        self.elems.push(u);
        self.level.push(n);
        self.parent.push(Some(link));
        Ok(())
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Level at which `B_n` became the whole structure, for infinite `M⁰`.
    pub fn universal_level(&self) -> Option<usize> {
        self.universal.map(|(n, _)| n)
    }

    /// `B_n`.
    pub fn ball(&self, n: usize) -> LevelSet<'_> {
        let n = n.min(self.depth);
        match self.universal {
            Some((u, _)) if n >= u => LevelSet::Universal,
            _ => LevelSet::Finite(&self.elems[..self.ends[n]]),
        }
    }

    /// `S_n = B_n \ B_{n−1}`.
    pub fn sphere(&self, n: usize) -> LevelSet<'_> {
        if n == 0 {
            return LevelSet::Finite(&self.elems[..1]);
        }
        if n > self.depth {
            return LevelSet::Finite(&[]);
        }
        match self.universal {
            Some((u, _)) if n == u => LevelSet::CoFinite(&self.elems[..self.ends[n - 1]]),
            Some((u, _)) if n > u => LevelSet::Finite(&[]),
            _ => LevelSet::Finite(&self.elems[self.ends[n - 1]..self.ends[n]]),
        }
    }

    /// Enumerated elements in discovery order.
    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    /// Smallest `n ≤ depth` with `u ∈ B_n`.
    pub fn level_of(&self, u: &Element) -> Option<usize> {
        match self.index.get(u) {
            Some(&i) => Some(self.level[i]),
            None => self.universal.map(|(n, _)| n),
        }
    }

    pub fn contains(&self, u: &Element, n: usize) -> bool {
        self.level_of(u).is_some_and(|l| l <= n.min(self.depth))
    }

    /// Discovery rank; elements first reached through a universal level share
    /// the rank just past the enumerated ones.
    pub fn rank(&self, u: &Element) -> Option<usize> {
        match self.index.get(u) {
            Some(&i) => Some(i),
            None => self.universal.map(|_| self.elems.len()),
        }
    }

    /// `|B_n|`, or `None` when `B_n` is infinite.
    pub fn ball_size(&self, n: usize) -> Option<usize> {
        match self.ball(n) {
            LevelSet::Finite(s) => Some(s.len()),
            _ => None,
        }
    }

    /// The last computed sphere is empty, so every deeper one is too.
    pub fn is_stalled(&self) -> bool {
        self.universal.is_none() && self.depth > 0 && self.ends[self.depth] == self.ends[self.depth - 1]
    }

    /// Smallest `n` with `B_n` equal to the whole structure, when it is certain.
    pub fn covering_level(&self) -> Option<usize> {
        if let Some((n, _)) = self.universal {
            return Some(n);
        }
        let size = self.full_size?;
        (0..=self.depth).find(|&n| self.ends[n] == size)
    }

    /// A shortest ancestry `(u, …, e)`, read off the BFS parent links.
    pub fn ancestry(&self, u: &Element) -> Option<Vec<Element>> {
        let mut out = alloc::vec![u.clone()];
        let mut cur = match self.index.get(u) {
            Some(&i) => i,
            None => {
                let (_, link) = self.universal?;
                link.from
            }
        };
        if !self.index.contains_key(u) {
            out.push(self.elems[cur].clone());
        }
        while let Some(link) = self.parent[cur] {
            cur = link.from;
            out.push(self.elems[cur].clone());
        }
        Some(out)
    }

    /// The link by which `u` was reached, if it is not `e`.
    pub fn link_of(&self, u: &Element) -> Option<Link> {
        match self.index.get(u) {
            Some(&i) => self.parent[i],
            None => self.universal.map(|(_, l)| l),
        }
    }
}

/// Multiplication-only breadth-first search in a group: `elems` reached by
/// right-multiplying generators in list order. Parent links give geodesics.
#[derive(Debug, Clone)]
pub struct CayleyBall {
    elems: Vec<Element>,
    index: BTreeMap<Element, usize>,
    level: Vec<usize>,
    parent: Vec<Option<(usize, usize)>>,
    ends: Vec<usize>,
}

pub fn cayley_ball(s: &Structure, depth: usize, cap: usize) -> Result<CayleyBall> {
    let e = s.identity();
    let mut b = CayleyBall {
        elems: alloc::vec![e.clone()],
        index: BTreeMap::from([(e, 0)]),
        level: alloc::vec![0],
        parent: alloc::vec![None],
        ends: alloc::vec![1],
    };
    let mut start = 0;
    for n in 1..=depth {
        let end = b.elems.len();
        for from in start..end {
            for (gen, x) in s.generators().iter().enumerate() {
                let v = s.mul(&b.elems[from], x);
                if b.index.contains_key(&v) {
                    continue;
                }
                if b.elems.len() >= cap {
                    return Err(Error::BallCap { cap, depth: n });
                }
                b.index.insert(v.clone(), b.elems.len());
                b.elems.push(v);
                b.level.push(n);
                b.parent.push(Some((from, gen)));
            }
        }
        b.ends.push(b.elems.len());
        start = end;
    }
    Ok(b)
}

impl CayleyBall {
    pub fn depth(&self) -> usize {
        self.ends.len() - 1
    }

    pub fn level_of(&self, u: &Element) -> Option<usize> {
        self.index.get(u).map(|&i| self.level[i])
    }

    pub fn elements(&self) -> &[Element] {
        &self.elems
    }

    pub fn sphere(&self, n: usize) -> &[Element] {
        match n {
            0 => &self.elems[..1],
            n if n < self.ends.len() => &self.elems[self.ends[n - 1]..self.ends[n]],
            _ => &[],
        }
    }

    pub fn is_exhausted(&self) -> bool {
        let d = self.depth();
        d > 0 && self.ends[d] == self.ends[d - 1]
    }

    /// Generator indices `(i₁, …, i_n)` with `u = x_{i₁}⋯x_{i_n}` and `n = |u|`;
    /// the first geodesic found in generator-list order.
    pub fn geodesic(&self, u: &Element) -> Option<Vec<usize>> {
        let mut cur = *self.index.get(u)?;
        let mut word = Vec::with_capacity(self.level[cur]);
        while let Some((from, gen)) = self.parent[cur] {
            word.push(gen);
            cur = from;
        }
        word.reverse();
        Some(word)
    }
}

/// Outcome of [`pseudo_finite_within`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PseudoFinite {
    /// `B_n` is the whole structure; a proof.
    Found { n: usize, sizes: Vec<Option<usize>> },
    /// No covering level up to the searched depth. `proof` is set when the
    /// reason shows no level ever covers.
    NotWithinDepth { depth: usize, sizes: Vec<Option<usize>>, reason: String, proof: bool },
}

/// Smallest `n ≤ depth` with `B_n = M`.
pub fn pseudo_finite_within(s: &Structure, depth: usize, cap: usize) -> Result<PseudoFinite> {
    if !s.is_finite() && s.is_weakly_right_cancellative() {
        return Ok(PseudoFinite::NotWithinDepth {
            depth,
            sizes: Vec::new(),
            reason: String::from(
                "infinite and weakly right cancellative: every B_n is a finite set, so none is all of M",
            ),
            proof: true,
        });
    }
    let t = ball_table(s, depth, cap)?;
    let sizes: Vec<Option<usize>> = (0..=depth).map(|n| t.ball_size(n)).collect();
    if let Some(n) = t.covering_level() {
        return Ok(PseudoFinite::Found { n, sizes: sizes[..=n].to_vec() });
    }
    let (reason, proof) = if t.is_stalled() {
        (format!("B_n stalls at {} elements", t.elements().len()), true)
    } else if !s.is_finite() {
        (String::from("every computed B_n is finite while the structure is infinite"), false)
    } else {
        (format!("B_{depth} has {} of {} elements", t.elements().len(), s.elements().map_or(0, |v| v.len())), false)
    };
    Ok(PseudoFinite::NotWithinDepth { depth, sizes, reason, proof })
}
