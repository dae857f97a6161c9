//! Exact integers and rationals, the factorial family, and the [`Scalar`]
//! abstraction that lets the expansion engine run on either exact rationals
//! or `f64`.

use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Arbitrary-precision signed integer.
pub type BigInteger = BigInt;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("double factorial is undefined for {0}")]
    DoubleFactorialDomain(i64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, ArithError> {
        let den = den.into();
        if den.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, exp: i32) -> Result<Self, ArithError> {
        if exp >= 0 {
            Ok(Rational(num_traits::pow(self.0.clone(), exp as usize)))
        } else {
            Ok(Rational(num_traits::pow(self.recip()?.0, exp.unsigned_abs() as usize)))
        }
    }

    /// Nearest `f64`; correct even when numerator and denominator overflow `f64`.
    pub fn to_f64(&self) -> f64 {
        if let Some(v) = self.0.to_f64() {
            return v;
        }
        // Fallback: scale both parts down to 64 significant bits.
        let n = self.numer();
        let d = self.denom();
        let shift_n = n.bits().saturating_sub(64) as i64;
        let shift_d = d.bits().saturating_sub(64) as i64;
        let nf = (n.abs() >> shift_n as usize).to_f64().unwrap_or(f64::NAN);
        let df = (d >> shift_d as usize).to_f64().unwrap_or(f64::NAN);
        let v = nf / df * 2f64.powi((shift_n - shift_d) as i32);
        if n.is_negative() {
            -v
        } else {
            v
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ArithError::Parse(s.to_string());
        let t = s.trim();
        match t.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.parse().map_err(|_| bad())?;
                let d: BigInt = d.parse().map_err(|_| bad())?;
                Rational::new(n, d)
            }
            None => Ok(Rational::from_integer(t.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                Rational(self.0.$m(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$m(&rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$m(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |a, b| a + b)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |a, b| a * b)
    }
}

/// n! for n ≥ 0.
pub fn factorial(n: u32) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// n!! with (−1)!! = 0!! = 1.
pub fn double_factorial(n: i64) -> Result<BigInt, ArithError> {
    if n < -1 {
        return Err(ArithError::DoubleFactorialDomain(n));
    }
    let mut acc = BigInt::one();
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 2;
    }
    Ok(acc)
}

/// (Σ parts)! / ∏ parts!.
pub fn multinomial(parts: &[u32]) -> BigInt {
    let total: u32 = parts.iter().sum();
    let den = parts.iter().fold(BigInt::one(), |acc, &p| acc * factorial(p));
    factorial(total).div_floor(&den)
}

/// C(n, r).
pub fn binomial(n: u32, r: u32) -> BigInt {
    if r > n {
        return BigInt::zero();
    }
    multinomial(&[r, n - r])
}

/// Number semantics the expansion engine is generic over.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_rational(r: &Rational) -> Self;
    /// `None` when `rhs` is zero.
    fn checked_div(&self, rhs: &Self) -> Option<Self>;
    fn is_positive(&self) -> bool;
    fn to_f64(&self) -> f64;

    fn powu(&self, exp: u32) -> Self {
        (0..exp).fold(Self::one(), |acc, _| acc * self.clone())
    }
}

impl Scalar for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn from_rational(r: &Rational) -> Self {
        r.clone()
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        Rational::checked_div(self, rhs).ok()
    }
    fn is_positive(&self) -> bool {
        self.0.is_positive()
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn powu(&self, exp: u32) -> Self {
        Rational(num_traits::pow(self.0.clone(), exp as usize))
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_rational(r: &Rational) -> Self {
        r.to_f64()
    }
    fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if *rhs == 0.0 {
            None
        } else {
            Some(self / rhs)
        }
    }
    fn is_positive(&self) -> bool {
        *self > 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn powu(&self, exp: u32) -> Self {
        self.powi(exp as i32)
    }
}
