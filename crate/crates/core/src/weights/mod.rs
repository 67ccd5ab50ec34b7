//! Weights `ω: S → [1, ∞)` with `ω(uv) ≤ ω(u)ω(v)`.
//!
//! Values are exact rationals whenever the defining formula is rational in its
//! inputs, and certified [`Enclosure`]s otherwise (fractional powers, or powers
//! too large to expand).

pub mod lemma74;
pub mod lemma76;

pub use lemma74::{build_lemma74, Eq71Check, Lemma74Certificate, Lemma74Weight};
pub use lemma76::{build_lemma76, GammaViolation, Lemma76Certificate, Lemma76Weight, RatioCheck};

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::enclosure::{self, decide_le, Decision, Enclosure};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::structures::{ball_table, Element, Family, LevelSet, Structure};

/// Powers whose exact expansion would exceed this many bits are enclosed.
pub const EXACT_BITS_LIMIT: u64 = 1 << 21;

/// Parsed weight description, before any construction work.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightSpec {
    Trivial,
    /// `(1 + |u|)^α`.
    RadialPoly { alpha: Rational },
    /// `c^{|u|^β}`.
    RadialExp { c: Rational, beta: Rational },
    Lemma74 { rho: Rational, blocks: usize },
    Lemma76 { rho: Rational, depth: usize },
    /// Values per element, falling back to values per length (`radial[n]`).
    ExplicitTable { values: Vec<(Element, Rational)>, radial: Vec<Rational> },
}

#[derive(Debug, Clone)]
pub enum Weight {
    Trivial,
    RadialPoly { alpha: Rational },
    RadialExp { c: Rational, beta: Rational },
    Lemma74(Lemma74Weight),
    Lemma76(Lemma76Weight),
    Explicit { values: BTreeMap<Element, Rational>, radial: Vec<Rational> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightValue {
    Exact(Rational),
    Enclosed(Enclosure),
}

impl WeightValue {
    pub fn enclosure(&self) -> Enclosure {
        match self {
            WeightValue::Exact(r) => Enclosure::exact(r.clone()),
            WeightValue::Enclosed(e) => e.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            WeightValue::Exact(r) => Some(r),
            WeightValue::Enclosed(_) => None,
        }
    }

    pub fn lo(&self) -> &Rational {
        match self {
            WeightValue::Exact(r) => r,
            WeightValue::Enclosed(e) => &e.lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            WeightValue::Exact(r) => r,
            WeightValue::Enclosed(e) => &e.hi,
        }
    }

    fn from_enclosure(e: Enclosure) -> Self {
        if e.is_exact() {
            WeightValue::Exact(e.lo)
        } else {
            WeightValue::Enclosed(e)
        }
    }
}

/// `baseⁿ`, exact unless the expansion is enormous.
pub(crate) fn power_value(base: &Rational, n: u64, prec: u32) -> WeightValue {
    let bits = (base.numer().bits() + base.denom().bits()).saturating_mul(n);
    if bits <= EXACT_BITS_LIMIT {
        WeightValue::Exact(rational::pow(base, n))
    } else {
        WeightValue::Enclosed(enclosure::pow_enclosure(base, n, prec))
    }
}

/// `t^{p/q}` for `t > 0` and `p/q ≥ 0`.
fn rational_power(t: &Rational, exp: &Rational, prec: u32) -> Enclosure {
    let p = u64::try_from(exp.numer().clone()).expect("exponent numerator fits in u64");
    let q = u32::try_from(exp.denom().clone()).expect("exponent denominator fits in u32");
    if t.is_zero() {
        return Enclosure::exact(Rational::zero());
    }
    let tp = rational::pow(t, p);
    enclosure::nth_root(&tp, q, prec)
}

impl Weight {
    pub fn build(spec: &WeightSpec, prec: u32) -> Result<Weight> {
        let one = Rational::one();
        Ok(match spec {
            WeightSpec::Trivial => Weight::Trivial,
            WeightSpec::RadialPoly { alpha } => {
                if alpha.is_negative() {
                    return Err(Error::input("radial_poly needs α ≥ 0"));
                }
                Weight::RadialPoly { alpha: alpha.clone() }
            }
            WeightSpec::RadialExp { c, beta } => {
                if *c < one {
                    return Err(Error::input("radial_exp needs c ≥ 1"));
                }
                if !beta.is_positive() || *beta > one {
                    return Err(Error::input("radial_exp needs β in (0, 1]"));
                }
                Weight::RadialExp { c: c.clone(), beta: beta.clone() }
            }
            WeightSpec::Lemma74 { rho, blocks } => Weight::Lemma74(build_lemma74(rho, *blocks, prec)?),
            WeightSpec::Lemma76 { rho, depth } => Weight::Lemma76(build_lemma76(rho, *depth)?),
            WeightSpec::ExplicitTable { values, radial } => {
                if values.iter().map(|(_, v)| v).chain(radial).any(|v| !v.is_positive()) {
                    return Err(Error::input("explicit weight values must be positive"));
                }
                let mut map = BTreeMap::new();
                for (u, v) in values {
                    if map.insert(u.clone(), v.clone()).is_some() {
                        return Err(Error::input(format!("duplicate weight entry for {u}")));
                    }
                }
                Weight::Explicit { values: map, radial: radial.clone() }
            }
        })
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Weight::Trivial => "trivial",
            Weight::RadialPoly { .. } => "radial_poly",
            Weight::RadialExp { .. } => "radial_exp",
            Weight::Lemma74(_) => "lemma74",
            Weight::Lemma76(_) => "lemma76",
            Weight::Explicit { .. } => "explicit_table",
        }
    }

    /// Constant on spheres of the generating set's length function.
    pub fn is_radial(&self) -> bool {
        match self {
            Weight::Trivial | Weight::RadialPoly { .. } | Weight::RadialExp { .. } => true,
            Weight::Explicit { values, .. } => values.is_empty(),
            Weight::Lemma74(_) | Weight::Lemma76(_) => false,
        }
    }

    /// Value as a function of length, for weights where that is meaningful.
    pub fn radial_value(&self, n: u64, prec: u32) -> Result<WeightValue> {
        match self {
            Weight::Trivial => Ok(WeightValue::Exact(Rational::one())),
            Weight::RadialPoly { alpha } => {
                let base = Rational::from_integer((n + 1).into());
                if alpha.is_integer() {
                    let a = u64::try_from(alpha.to_integer()).map_err(|_| Error::input("α too large"))?;
                    Ok(power_value(&base, a, prec))
                } else {
                    Ok(WeightValue::from_enclosure(rational_power(&base, alpha, prec)))
                }
            }
            Weight::RadialExp { c, beta } => {
                if beta.is_one() {
                    return Ok(power_value(c, n, prec));
                }
                let len = Rational::from_integer(n.into());
                let exponent = rational_power(&len, beta, prec + 16);
                Ok(WeightValue::from_enclosure(enclosure::exp_base(c, &exponent, prec)))
            }
            Weight::Explicit { radial, .. } => radial
                .get(n as usize)
                .cloned()
                .map(WeightValue::Exact)
                .ok_or_else(|| Error::input(format!("explicit weight has no value at length {n}"))),
            Weight::Lemma74(w) => Ok(w.value(n, prec)),
            Weight::Lemma76(w) => w.value(n as i64).map(WeightValue::Exact),
        }
    }

    /// `ω(u)`.
    pub fn eval(&self, s: &Structure, u: &Element, prec: u32, cap: usize) -> Result<WeightValue> {
        s.validate(u)?;
        match self {
            Weight::Lemma74(w) => match (s.family(), u) {
                (Family::NonNeg, Element::Int(n)) => Ok(w.value(*n as u64, prec)),
                _ => Err(Error::unsupported("the Lemma 7.4 weight lives on ℤ⁺")),
            },
            Weight::Lemma76(w) => match (s.family(), u) {
                (Family::NonNeg | Family::Integers, Element::Int(n)) => w.value(*n).map(WeightValue::Exact),
                _ => Err(Error::unsupported("the Lemma 7.6 weight lives on ℤ")),
            },
            Weight::Explicit { values, radial } => match values.get(u) {
                Some(v) => Ok(WeightValue::Exact(v.clone())),
                None if !radial.is_empty() => self.radial_value(s.radial_length(u, cap)?, prec),
                None => Err(Error::input(format!("explicit weight has no value at {u}"))),
            },
            _ => self.radial_value(s.radial_length(u, cap)?, prec),
        }
    }

    /// Whether `ω(u)` is defined; explicit and tabulated weights have a finite
    /// domain.
    pub fn defined_at(&self, s: &Structure, u: &Element, cap: usize) -> bool {
        match self {
            Weight::Explicit { values, radial } => {
                values.contains_key(u)
                    || (!radial.is_empty()
                        && s.radial_length(u, cap).is_ok_and(|n| (n as usize) < radial.len()))
            }
            Weight::Lemma76(w) => matches!(u, Element::Int(n) if n.unsigned_abs() as usize <= w.depth()),
            _ => true,
        }
    }
}

/// Memoizes `ω` on elements, and on lengths for radial weights.
pub(crate) struct WeightCache<'a> {
    w: &'a Weight,
    s: &'a Structure,
    prec: u32,
    cap: usize,
    by_elem: BTreeMap<Element, WeightValue>,
    by_len: BTreeMap<u64, WeightValue>,
}

impl<'a> WeightCache<'a> {
    pub(crate) fn new(w: &'a Weight, s: &'a Structure, prec: u32, cap: usize) -> Self {
        WeightCache { w, s, prec, cap, by_elem: BTreeMap::new(), by_len: BTreeMap::new() }
    }

    pub(crate) fn get(&mut self, u: &Element) -> Result<WeightValue> {
        if let Some(v) = self.by_elem.get(u) {
            return Ok(v.clone());
        }
        let v = if self.w.is_radial() {
            let n = self.s.radial_length(u, self.cap)?;
            match self.by_len.get(&n) {
                Some(v) => v.clone(),
                None => {
                    let v = self.w.radial_value(n, self.prec)?;
                    self.by_len.insert(n, v.clone());
                    v
                }
            }
        } else {
            self.w.eval(self.s, u, self.prec, self.cap)?
        };
        self.by_elem.insert(u.clone(), v.clone());
        Ok(v)
    }
}

/// A violated (or undecidable) instance of `ω(uv) ≤ ω(u)ω(v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairWitness {
    pub u: Element,
    pub v: Element,
    pub lhs: Enclosure,
    pub rhs: Enclosure,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub radius: usize,
    pub ball_size: usize,
    pub identity_is_one: bool,
    pub at_least_one: bool,
    pub pairs_checked: u64,
    /// Pairs whose product lies outside a tabulated weight's domain.
    pub pairs_skipped: u64,
    pub undecided: u64,
    pub violation: Option<PairWitness>,
    /// Present for the Lemma 7.4 weight, whose radius is far beyond exhaustive reach.
    pub lemma74: Option<Lemma74Certificate>,
    pub passed: bool,
}

/// Exhaustive check of `ω(e) = 1`, `ω ≥ 1` and `ω(uv) ≤ ω(u)ω(v)` over `B_R`.
///
/// For the Lemma 7.4 weight the pairs are checked exhaustively only up to
/// [`lemma74::EXHAUSTIVE_RADIUS`]; the full radius is covered by its own
/// certificate (`ε` non-increasing implies submultiplicativity for all pairs).
pub fn verify_weight_axioms(w: &Weight, s: &Structure, radius: usize, prec: u32, cap: usize) -> Result<AxiomReport> {
    if let Weight::Lemma74(l) = w {
        let cert = l.certify(radius as u64, prec)?;
        let mut report = exhaustive_axioms(w, s, radius.min(lemma74::EXHAUSTIVE_RADIUS), prec, cap)?;
        report.radius = radius;
        report.ball_size = radius + 1;
        report.passed = report.passed && cert.passed;
        report.lemma74 = Some(cert);
        return Ok(report);
    }
    exhaustive_axioms(w, s, radius, prec, cap)
}

fn exhaustive_axioms(w: &Weight, s: &Structure, radius: usize, prec: u32, cap: usize) -> Result<AxiomReport> {
    let table = ball_table(s, radius, cap)?;
    let ball = match table.ball(radius) {
        LevelSet::Finite(b) => b.to_vec(),
        _ => return Err(Error::unsupported("weight axioms over an infinite ball")),
    };
    let mut cache = WeightCache::new(w, s, prec, cap);
    let one = Enclosure::exact(Rational::one());
    let e = s.identity();
    let identity_is_one = cache.get(&e)?.exact().is_some_and(|v| v.is_one());
    let mut at_least_one = true;
    let mut values = Vec::with_capacity(ball.len());
    for u in &ball {
        let v = cache.get(u)?.enclosure();
        at_least_one &= decide_le(&one, &v).holds();
        values.push(v);
    }
    let mut report = AxiomReport {
        radius,
        ball_size: ball.len(),
        identity_is_one,
        at_least_one,
        pairs_checked: 0,
        pairs_skipped: 0,
        undecided: 0,
        violation: None,
        lemma74: None,
        passed: false,
    };
    'pairs: for (i, u) in ball.iter().enumerate() {
        for (j, v) in ball.iter().enumerate() {
            let uv = s.mul(u, v);
            if !w.defined_at(s, &uv, cap) {
                report.pairs_skipped += 1;
                continue;
            }
            let lhs = cache.get(&uv)?.enclosure();
            let rhs = values[i].mul_nonneg(&values[j]);
            report.pairs_checked += 1;
            match decide_le(&lhs, &rhs) {
                Decision::Holds => {}
                Decision::Fails => {
                    report.violation = Some(PairWitness { u: u.clone(), v: v.clone(), lhs, rhs });
                    break 'pairs;
                }
                Decision::Undecided => report.undecided += 1,
            }
        }
    }
    report.passed = report.identity_is_one && report.at_least_one && report.violation.is_none() && report.undecided == 0;
    Ok(report)
}

/// `τ_n` and `C` with the Lemma 6.1 check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TauReport {
    /// `τ_1, …, τ_N` (shorter when the structure is exhausted).
    pub tau: Vec<WeightValue>,
    /// First element of each sphere attaining `τ_n`.
    pub minimizers: Vec<Element>,
    pub c: WeightValue,
    /// `τ_n ≤ C τ_{n+1}` for `n = 1, …, N−1`.
    pub lemma61: Vec<Decision>,
}

impl TauReport {
    pub fn lemma61_holds(&self) -> bool {
        self.lemma61.iter().all(|d| d.holds())
    }

    /// Lower endpoints of `τ` (exact values when available).
    pub fn tau_lower(&self) -> Vec<Rational> {
        self.tau.iter().map(|t| t.lo().clone()).collect()
    }
}

/// Sphere minima `τ_n = min_{u ∈ S_n} ω(u)` and `C = max_{x ∈ X} ω(x)`.
pub fn tau_and_c(w: &Weight, s: &Structure, depth: usize, prec: u32, cap: usize) -> Result<TauReport> {
    if s.generators().is_empty() {
        return Err(Error::input("empty generating set"));
    }
    let table = ball_table(s, depth, cap)?;
    let mut cache = WeightCache::new(w, s, prec, cap);
    let mut tau = Vec::new();
    let mut minimizers = Vec::new();
    for n in 1..=depth {
        let sphere = match table.sphere(n) {
            LevelSet::Finite(sp) => sp,
            _ => return Err(Error::unsupported("τ over an infinite sphere")),
        };
        if sphere.is_empty() {
            break;
        }
        let candidates = if w.is_radial() { &sphere[..1] } else { sphere };
        let mut best: Option<(WeightValue, &Element)> = None;
        for u in candidates {
            let v = cache.get(u)?;
            let better = match &best {
                None => true,
                Some((b, _)) => v.hi() < b.hi() || (v.hi() == b.hi() && v.lo() < b.lo()),
            };
            if better {
                best = Some((v, u));
            }
        }
        let (v, u) = best.expect("sphere is non-empty");
        // With enclosures the minimum is enclosed by the endpoint-wise minima.
        let v = if candidates.len() > 1 && matches!(v, WeightValue::Enclosed(_)) {
            let mut lo = v.lo().clone();
            for c in candidates {
                let cv = cache.get(c)?;
                if cv.lo() < &lo {
                    lo = cv.lo().clone();
                }
            }
            WeightValue::from_enclosure(Enclosure::new(lo, v.hi().clone()))
        } else {
            v
        };
        tau.push(v);
        minimizers.push(u.clone());
    }
    let mut c: Option<WeightValue> = None;
    for x in s.generators() {
        let v = cache.get(x)?;
        c = Some(match c {
            None => v,
            Some(cur) => {
                let lo = core::cmp::max(cur.lo(), v.lo()).clone();
                let hi = core::cmp::max(cur.hi(), v.hi()).clone();
                WeightValue::from_enclosure(Enclosure::new(lo, hi))
            }
        });
    }
    let c = c.expect("generating set is non-empty");
    let ce = c.enclosure();
    let lemma61 = tau
        .windows(2)
        .map(|p| decide_le(&p[0].enclosure(), &ce.mul_nonneg(&p[1].enclosure())))
        .collect();
    Ok(TauReport { tau, minimizers, c, lemma61 })
}

/// Finite-`n` root diagnostics for a weight on `ℤ` or `ℤ⁺`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RadiiReport {
    pub n: usize,
    /// `ω_N^{1/N}`.
    pub rho2: Enclosure,
    /// `ω_{−N}^{−1/N}`, on `ℤ` only.
    pub rho1: Option<Enclosure>,
    /// Enclosure of `min_{1≤n≤N} ω_n^{1/n}`.
    pub running_inf: Enclosure,
}

fn root_of(v: &WeightValue, n: u32, prec: u32) -> Enclosure {
    match v {
        WeightValue::Exact(r) => enclosure::nth_root(r, n, prec),
        WeightValue::Enclosed(e) => {
            Enclosure::new(enclosure::nth_root(&e.lo, n, prec).lo, enclosure::nth_root(&e.hi, n, prec).hi)
        }
    }
}

pub fn estimate_radii(w: &Weight, s: &Structure, n: usize, prec: u32, cap: usize) -> Result<RadiiReport> {
    if !matches!(s.family(), Family::Integers | Family::NonNeg) {
        return Err(Error::unsupported("radii are defined for weights on ℤ and ℤ⁺"));
    }
    if n == 0 {
        return Err(Error::input("radius index must be positive"));
    }
    let n32 = u32::try_from(n).map_err(|_| Error::input("radius index too large"))?;
    let mut running: Option<Enclosure> = None;
    let mut last = None;
    for k in 1..=n {
        let v = w.eval(s, &Element::Int(k as i64), prec, cap)?;
        let r = root_of(&v, k as u32, prec);
        running = Some(match running {
            None => r.clone(),
            Some(cur) => cur.min(&r),
        });
        last = Some(r);
    }
    let rho1 = if matches!(s.family(), Family::Integers) {
        let v = w.eval(s, &Element::Int(-(n as i64)), prec, cap)?;
        let r = root_of(&v, n32, prec);
        Some(Enclosure::new(r.hi.recip(), r.lo.recip()))
    } else {
        None
    };
    Ok(RadiiReport {
        n,
        rho2: last.expect("n ≥ 1"),
        rho1,
        running_inf: running.expect("n ≥ 1"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use alloc::vec;

    const P: u32 = 64;
    const CAP: usize = 100_000;

    #[test]
    fn radial_values() {
        let z = Structure::integers();
        let poly = Weight::build(&WeightSpec::RadialPoly { alpha: int(1) }, P).unwrap();
        assert_eq!(poly.eval(&z, &Element::Int(3), P, CAP).unwrap(), WeightValue::Exact(int(4)));
        let f2 = Structure::free_group(2);
        let exp = Weight::build(&WeightSpec::RadialExp { c: int(2), beta: int(1) }, P).unwrap();
        let u = Element::Word(vec![1, 2, 1, 2, 1]);
        assert_eq!(exp.eval(&f2, &u, P, CAP).unwrap(), WeightValue::Exact(int(32)));
    }

    #[test]
    fn fractional_exponents_are_enclosed() {
        let z = Structure::integers();
        let w = Weight::build(&WeightSpec::RadialExp { c: int(2), beta: ratio(1, 2) }, P).unwrap();
        // 2^{√4} = 4 exactly; 2^{√2} is irrational.
        assert_eq!(w.eval(&z, &Element::Int(4), P, CAP).unwrap(), WeightValue::Exact(int(4)));
        let v = w.eval(&z, &Element::Int(2), P, CAP).unwrap().enclosure();
        assert!(v.lo > ratio(266, 100) && v.hi < ratio(267, 100));
    }

    #[test]
    fn parameter_ranges() {
        assert!(Weight::build(&WeightSpec::RadialExp { c: ratio(1, 2), beta: int(1) }, P).is_err());
        assert!(Weight::build(&WeightSpec::RadialExp { c: int(2), beta: int(2) }, P).is_err());
        assert!(Weight::build(&WeightSpec::RadialPoly { alpha: int(-1) }, P).is_err());
    }

    #[test]
    fn trivial_weight_passes_axioms() {
        let r = verify_weight_axioms(&Weight::Trivial, &Structure::free_group(2), 3, P, CAP).unwrap();
        assert!(r.passed);
        assert_eq!(r.pairs_checked, (r.ball_size * r.ball_size) as u64);
    }

    #[test]
    fn tau_on_integers_and_free_group() {
        let exp = Weight::build(&WeightSpec::RadialExp { c: int(2), beta: int(1) }, P).unwrap();
        let t = tau_and_c(&exp, &Structure::integers(), 6, P, CAP).unwrap();
        assert_eq!(t.tau_lower(), (1..=6).map(|n| int(1 << n)).collect::<Vec<_>>());
        assert_eq!(t.c, WeightValue::Exact(int(2)));
        assert!(t.lemma61_holds());
        let poly = Weight::build(&WeightSpec::RadialPoly { alpha: int(2) }, P).unwrap();
        let t = tau_and_c(&poly, &Structure::free_group(2), 4, P, CAP).unwrap();
        assert_eq!(t.tau_lower(), (1..=4).map(|n| int((1 + n) * (1 + n))).collect::<Vec<_>>());
        assert_eq!(t.c, WeightValue::Exact(int(4)));
    }

    #[test]
    fn non_radial_tau_minimizes_over_the_sphere() {
        // ω(m, n) = 2^{|m|} on the sphere S₂ of ℤ².
        let z2 = Structure::lattice(2);
        let ball = ball_table(&z2, 3, CAP).unwrap();
        let values = ball
            .elements()
            .iter()
            .map(|u| match u {
                Element::Vec(v) => (u.clone(), int(1 << v[0].unsigned_abs())),
                _ => unreachable!(),
            })
            .collect();
        let w = Weight::build(&WeightSpec::ExplicitTable { values, radial: vec![] }, P).unwrap();
        let t = tau_and_c(&w, &z2, 2, P, CAP).unwrap();
        assert_eq!(t.tau[1], WeightValue::Exact(int(1)));
        assert_eq!(t.minimizers[1], Element::Vec(vec![0, 2]));
    }

    #[test]
    fn radii_of_geometric_and_polynomial_weights() {
        let z = Structure::integers();
        let exp = Weight::build(&WeightSpec::RadialExp { c: int(2), beta: int(1) }, P).unwrap();
        let r = estimate_radii(&exp, &z, 10, P, CAP).unwrap();
        assert_eq!(r.rho2, Enclosure::exact(int(2)));
        assert_eq!(r.rho1, Some(Enclosure::exact(ratio(1, 2))));
        let poly = Weight::build(&WeightSpec::RadialPoly { alpha: int(2) }, P).unwrap();
        let r = estimate_radii(&poly, &Structure::nonneg(), 100, P, CAP).unwrap();
        let target = int(101 * 101);
        assert!(rational::pow(&r.rho2.lo, 100) <= target && rational::pow(&r.rho2.hi, 100) >= target);
    }
}
