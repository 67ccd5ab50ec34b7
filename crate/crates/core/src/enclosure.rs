//! Certified dyadic enclosures for the few irrational quantities the workbench
//! meets: n-th roots, `|z|` for complex coefficients, fractional powers in the
//! radial exponential weights, and huge integer powers `qⁿ` that are too large
//! to expand exactly.
//!
//! An [`Enclosure`] is a pair of exact rationals `lo ≤ x ≤ hi`. A strict
//! inequality is only ever certified when the enclosures involved do not
//! overlap; callers compare endpoints exactly.

use core::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: Rational,
    pub hi: Rational,
}

impl Enclosure {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        Enclosure { lo, hi }
    }

    pub fn exact(x: Rational) -> Self {
        Enclosure { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &Rational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Certainly `self ≤ other` for every pair of enclosed values.
    pub fn certainly_le(&self, other: &Enclosure) -> bool {
        self.hi <= other.lo
    }

    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    /// Product of two non-negative enclosures.
    pub fn mul_nonneg(&self, other: &Enclosure) -> Enclosure {
        debug_assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Enclosure::new(&self.lo * &other.lo, &self.hi * &other.hi)
    }

    /// Multiplication by a non-negative rational.
    pub fn scale(&self, r: &Rational) -> Enclosure {
        debug_assert!(!r.is_negative());
        Enclosure::new(&self.lo * r, &self.hi * r)
    }

    pub fn min(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(
            core::cmp::min(&self.lo, &other.lo).clone(),
            core::cmp::min(&self.hi, &other.hi).clone(),
        )
    }

    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure::new(
            core::cmp::max(&self.lo, &other.lo).clone(),
            core::cmp::max(&self.hi, &other.hi).clone(),
        )
    }

    /// Widens both endpoints to dyadics with `bits` significant bits. Keeps long
    /// sums of enclosures from accumulating huge denominators.
    pub fn outward(&self, bits: u32) -> Enclosure {
        if self.is_exact() && is_dyadic(&self.lo) {
            return self.clone();
        }
        Enclosure::new(round_down(&self.lo, bits), round_up(&self.hi, bits))
    }
}

/// Three-valued outcome of comparing enclosures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Holds,
    Fails,
    /// The enclosures overlap; nothing is certified.
    Undecided,
}

impl Decision {
    pub fn holds(self) -> bool {
        self == Decision::Holds
    }
}

/// Decides `a ≤ b` for every pair of enclosed values.
pub fn decide_le(a: &Enclosure, b: &Enclosure) -> Decision {
    if a.hi <= b.lo {
        Decision::Holds
    } else if a.lo > b.hi {
        Decision::Fails
    } else {
        Decision::Undecided
    }
}

/// Decides `a < b` for every pair of enclosed values.
pub fn decide_lt(a: &Enclosure, b: &Enclosure) -> Decision {
    if a.hi < b.lo {
        Decision::Holds
    } else if a.lo >= b.hi {
        Decision::Fails
    } else {
        Decision::Undecided
    }
}

fn is_dyadic(r: &Rational) -> bool {
    let d = r.denom();
    d.is_one() || (d.sign() == Sign::Plus && d.trailing_zeros() == Some(d.bits() - 1))
}

/// Positive dyadic `m · 2^e`, used internally for directed-rounding kernels.
#[derive(Debug, Clone)]
struct Dyadic {
    m: BigUint,
    e: i64,
}

impl Dyadic {
    fn from_rational(r: &Rational, bits: u32, up: bool) -> Dyadic {
        debug_assert!(r.is_positive());
        let num = r.numer().magnitude();
        let den = r.denom().magnitude();
        let s = bits as i64 + den.bits() as i64 - num.bits() as i64 + 1;
        let (mut q, rem) = if s >= 0 {
            let n = num << (s as usize);
            (&n / den, &n % den)
        } else {
            let d = den << ((-s) as usize);
            (num / &d, num % &d)
        };
        if up && !rem.is_zero() {
            q += 1u32;
        }
        Dyadic { m: q, e: -s }.truncate(bits, up)
    }

    fn truncate(mut self, bits: u32, up: bool) -> Dyadic {
        let nb = self.m.bits();
        if nb > bits as u64 {
            let sh = nb - bits as u64;
            let lost = self.m.trailing_zeros().is_some_and(|tz| tz < sh);
            self.m >>= sh as usize;
            self.e += sh as i64;
            if up && lost {
                self.m += 1u32;
            }
        }
        self
    }

    fn mul(&self, other: &Dyadic, bits: u32, up: bool) -> Dyadic {
        Dyadic { m: &self.m * &other.m, e: self.e + other.e }.truncate(bits, up)
    }

    fn pow(&self, mut n: u64, bits: u32, up: bool) -> Dyadic {
        let mut acc = Dyadic { m: BigUint::one(), e: 0 };
        let mut sq = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&sq, bits, up);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul(&sq, bits, up);
            }
        }
        acc
    }

    /// Square root rounded in the requested direction.
    fn sqrt(&self, bits: u32, up: bool) -> Dyadic {
        let mut m = self.m.clone();
        let mut e = self.e;
        let want = 2 * bits as u64 + 2;
        let mut k = want.saturating_sub(m.bits());
        if (e - k as i64).rem_euclid(2) != 0 {
            k += 1;
        }
        m <<= k as usize;
        e -= k as i64;
        let s = m.sqrt();
        let exact = &s * &s == m;
        let s = if up && !exact { s + 1u32 } else { s };
        Dyadic { m: s, e: e / 2 }.truncate(bits, up)
    }

    fn to_rational(&self) -> Rational {
        let m = BigInt::from(self.m.clone());
        if self.e >= 0 {
            Rational::from_integer(m << (self.e as usize))
        } else {
            Rational::new(m, BigInt::one() << ((-self.e) as usize))
        }
    }
}

/// Largest dyadic with `bits` significant bits that is `≤ r` (`r > 0`).
pub fn round_down(r: &Rational, bits: u32) -> Rational {
    if !r.is_positive() {
        return r.clone();
    }
    Dyadic::from_rational(r, bits, false).to_rational()
}

/// Smallest dyadic with `bits` significant bits that is `≥ r` (`r > 0`).
pub fn round_up(r: &Rational, bits: u32) -> Rational {
    if !r.is_positive() {
        return r.clone();
    }
    Dyadic::from_rational(r, bits, true).to_rational()
}

fn working_bits(prec: u32, n: u64) -> u32 {
    prec + 2 * (64 - n.leading_zeros()) + 16
}

/// Enclosure of `baseⁿ` (`base > 0`) by directed rounding. Exact for small
/// exponents whose result fits comfortably.
pub fn pow_enclosure(base: &Rational, n: u64, prec: u32) -> Enclosure {
    debug_assert!(base.is_positive());
    let size = (base.numer().bits() + base.denom().bits()).saturating_mul(n);
    if size <= 4 * prec as u64 + 256 {
        return Enclosure::exact(crate::rational::pow(base, n));
    }
    let w = working_bits(prec, n);
    let lo = Dyadic::from_rational(base, w, false).pow(n, w, false);
    let hi = Dyadic::from_rational(base, w, true).pow(n, w, true);
    Enclosure::new(lo.to_rational(), hi.to_rational())
}

/// Upper bound on `baseⁿ` by directed rounding (`base > 0`).
pub fn pow_upper(base: &Rational, n: u64, prec: u32) -> Rational {
    let w = working_bits(prec, n);
    Dyadic::from_rational(base, w, true).pow(n, w, true).to_rational()
}

/// Lower bound on `baseⁿ` by directed rounding (`base > 0`).
pub fn pow_lower(base: &Rational, n: u64, prec: u32) -> Rational {
    let w = working_bits(prec, n);
    Dyadic::from_rational(base, w, false).pow(n, w, false).to_rational()
}

/// `√r` when `r` is the square of a rational.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().magnitude();
    let d = r.denom().magnitude();
    let (sn, sd) = (n.sqrt(), d.sqrt());
    (&sn * &sn == *n && &sd * &sd == *d)
        .then(|| Rational::new(BigInt::from(sn), BigInt::from(sd)))
}

/// Certified enclosure of `t^{1/n}` for `t > 0`, with `hi − lo ≤ 2^{-prec}`
/// whenever the root is at least 1 in magnitude of its denominator.
///
/// The floor root of the scaled integer is computed and then both sides of
/// `rⁿ ≤ X < (r+1)ⁿ` are re-checked by exact power comparison.
pub fn nth_root(t: &Rational, n: u32, prec: u32) -> Enclosure {
    assert!(n >= 1, "root index must be positive");
    assert!(t.is_positive(), "root of a non-positive number");
    if n == 1 {
        return Enclosure::exact(t.clone());
    }
    let u = t.numer().magnitude();
    let v = t.denom().magnitude();
    let combined_bits = v.bits().saturating_mul(n as u64 - 1);
    if combined_bits <= (1 << 22) {
        // t^{1/n} = (u v^{n-1})^{1/n} / v
        let x = (u * num_traits::pow::pow(v.clone(), n as usize - 1)) << (n as usize * prec as usize);
        let (r, exact) = checked_floor_root(&x, n);
        let scale = Rational::from_integer(BigInt::from(v.clone()) << prec as usize);
        let lo = Rational::from_integer(BigInt::from(r.clone())) / &scale;
        if exact {
            return Enclosure::exact(lo);
        }
        let hi = Rational::from_integer(BigInt::from(r + 1u32)) / &scale;
        Enclosure::new(lo, hi)
    } else {
        // Enclose numerator and denominator roots separately.
        let num = nth_root(&Rational::from_integer(BigInt::from(u.clone())), n, prec + 8);
        let den = nth_root(&Rational::from_integer(BigInt::from(v.clone())), n, prec + 8);
        Enclosure::new(&num.lo / &den.hi, &num.hi / &den.lo)
    }
}

/// Floor `n`-th root of `x` with exact verification; the flag reports `rⁿ = x`.
fn checked_floor_root(x: &BigUint, n: u32) -> (BigUint, bool) {
    let r = x.nth_root(n);
    let rn = num_traits::pow::pow(r.clone(), n as usize);
    let above = num_traits::pow::pow(&r + 1u32, n as usize);
    assert!(rn <= *x && above > *x, "floor root verification failed");
    let exact = rn == *x;
    (r, exact)
}

pub fn sqrt(t: &Rational, prec: u32) -> Enclosure {
    if t.is_zero() {
        return Enclosure::exact(Rational::zero());
    }
    match exact_sqrt(t) {
        Some(r) => Enclosure::exact(r),
        None => nth_root(t, 2, prec),
    }
}

/// Enclosure of `c^x` for rational `c ≥ 1` and an enclosure `x ≥ 0`.
///
/// Splits `x` into integer part and a binary fraction and multiplies the
/// matching iterated square roots `c^{2^{-i}}`, rounding each product outward.
pub fn exp_base(c: &Rational, x: &Enclosure, prec: u32) -> Enclosure {
    assert!(c >= &Rational::one(), "base below one");
    assert!(!x.lo.is_negative(), "negative exponent");
    if c.is_one() {
        return Enclosure::exact(Rational::one());
    }
    if x.is_exact() && x.lo.is_integer() {
        let e = x.lo.to_integer();
        let e = u64::try_from(e).expect("exponent fits in u64");
        return pow_enclosure(c, e, prec);
    }
    let w = prec + 32;
    let d = prec + 16;
    // c^{2^{-i}} for i = 1..=d, lower and upper.
    let mut roots_lo = alloc::vec::Vec::with_capacity(d as usize);
    let mut roots_hi = alloc::vec::Vec::with_capacity(d as usize);
    let mut cur_lo = Dyadic::from_rational(c, w, false);
    let mut cur_hi = Dyadic::from_rational(c, w, true);
    for _ in 0..d {
        cur_lo = cur_lo.sqrt(w, false);
        cur_hi = cur_hi.sqrt(w, true);
        roots_lo.push(cur_lo.clone());
        roots_hi.push(cur_hi.clone());
    }
    let side = |y: &Rational, up: bool| -> Rational {
        let floor = y.floor();
        let mut int_part = u64::try_from(floor.to_integer()).expect("exponent fits in u64");
        let frac = y - &floor;
        let scaled = frac * Rational::from_integer(BigInt::one() << d as usize);
        let mut bits_int = if up { scaled.ceil() } else { scaled.floor() }.to_integer();
        let full = BigInt::one() << d as usize;
        if bits_int == full {
            int_part += 1;
            bits_int = BigInt::zero();
        }
        let mut acc = Dyadic::from_rational(&crate::rational::pow(c, int_part), w, up);
        let bits_int = bits_int.magnitude().clone();
        for i in 0..d {
            // bit for 2^{-(i+1)}
            if bits_int.bit((d - 1 - i) as u64) {
                let r = if up { &roots_hi[i as usize] } else { &roots_lo[i as usize] };
                acc = acc.mul(r, w, up);
            }
        }
        acc.to_rational()
    };
    Enclosure::new(side(&x.lo, false), side(&x.hi, true))
}

/// Exact comparison of `qⁿ` with `t`, trying a cheap directed-rounding
/// decision first.
pub fn cmp_pow(q: &Rational, n: u64, t: &Rational, prec: u32) -> Ordering {
    if q.is_positive() && t.is_positive() {
        let w = working_bits(prec, n);
        if Dyadic::from_rational(q, w, true).pow(n, w, true).to_rational() < *t {
            return Ordering::Less;
        }
        if Dyadic::from_rational(q, w, false).pow(n, w, false).to_rational() > *t {
            return Ordering::Greater;
        }
    }
    crate::rational::pow(q, n).cmp(t)
}
