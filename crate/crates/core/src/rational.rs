//! Exact scalars: arbitrary-precision rationals and rational complex numbers.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::enclosure::{self, Enclosure};
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Parses `"p/q"`, `"p"` or `"-p/q"`. A zero denominator is an error.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num
        .parse()
        .map_err(|_| Error::input(format!("malformed rational {s:?}")))?;
    let den: BigInt = den
        .parse()
        .map_err(|_| Error::input(format!("malformed rational {s:?}")))?;
    if den.is_zero() {
        return Err(Error::input(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(num, den))
}

/// Canonical `"p/q"` rendering (always with a denominator, `q ≥ 1`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// `base^exp` for a non-negative integer exponent.
///
/// Numerator and denominator are raised separately: powers of coprime integers
/// stay coprime, so no normalisation is needed.
pub fn pow(base: &Rational, exp: u64) -> Rational {
    Rational::new_raw(int_pow(base.numer(), exp), int_pow(base.denom(), exp))
}

fn int_pow(b: &BigInt, exp: u64) -> BigInt {
    let mut acc = BigInt::one();
    let mut sq = b.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

/// Exact comparison of `c · base^exp` with `d`, without reducing the product.
pub fn cmp_scaled_pow(c: &Rational, base: &Rational, exp: u64, d: &Rational) -> Ordering {
    let lhs = c.numer() * int_pow(base.numer(), exp) * d.denom();
    let rhs = d.numer() * c.denom() * int_pow(base.denom(), exp);
    lhs.cmp(&rhs)
}

/// `Σ_{k=lo}^{hi} 1/k^p` computed exactly over a common denominator.
///
/// Summing term by term with gcd normalisation is quadratic in the size of the
/// partial sums; for the harmonic-type sums used by the witnesses this is the
/// difference between milliseconds and minutes.
pub fn reciprocal_power_sum(lo: u64, hi: u64, p: u32) -> Rational {
    if lo > hi {
        return Rational::zero();
    }
    let mut l = BigUint::one();
    for k in lo..=hi {
        l = l.lcm(&BigUint::from(k));
    }
    let den = num_traits::pow::pow(l, p as usize);
    let mut num = BigUint::zero();
    for k in lo..=hi {
        num += &den / num_traits::pow::pow(BigUint::from(k), p as usize);
    }
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A complex number with exact rational real and imaginary parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    pub re: Rational,
    pub im: Rational,
}

impl Scalar {
    pub fn new(re: Rational, im: Rational) -> Self {
        Scalar { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Scalar { re, im: Rational::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::real(int(n))
    }

    pub fn zero() -> Self {
        Scalar::default()
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, r: &Rational) -> Scalar {
        Scalar::new(&self.re * r, &self.im * r)
    }

    /// `|z|` when it is rational without a square root: real or purely imaginary.
    pub fn abs_exact(&self) -> Option<Rational> {
        if self.im.is_zero() {
            Some(self.re.abs())
        } else if self.re.is_zero() {
            Some(self.im.abs())
        } else {
            let sq = &self.re * &self.re + &self.im * &self.im;
            enclosure::exact_sqrt(&sq)
        }
    }

    /// Certified enclosure of `|z| = √(re² + im²)`.
    pub fn abs(&self, prec: u32) -> Enclosure {
        match self.abs_exact() {
            Some(r) => Enclosure::exact(r),
            None => enclosure::sqrt(&(&self.re * &self.re + &self.im * &self.im), prec),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::real(r)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-&self.re, -&self.im)
    }
}

impl core::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, s| acc + s)
    }
}

/// Exact sum of a slice of rationals.
pub fn sum(values: &[Rational]) -> Rational {
    values.iter().fold(Rational::zero(), |acc, v| acc + v)
}

/// Partial sums `s_0 = 0, s_i = v_1 + ... + v_i`.
pub fn prefix_sums(values: &[Rational]) -> Vec<Rational> {
    let mut out = Vec::with_capacity(values.len() + 1);
    let mut acc = Rational::zero();
    out.push(acc.clone());
    for v in values {
        acc += v;
        out.push(acc.clone());
    }
    out
}
