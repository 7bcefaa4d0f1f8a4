//! Exact rational scalars.
//!
//! All combinatorial decisions in this crate (walls, admissibility, chamber
//! signs, polytope vertices) are knife-edge comparisons, so they are made in
//! exact arbitrary-precision rational arithmetic. `Rational` wraps
//! [`num_rational::BigRational`] and adds the textual conventions used
//! throughout: values print as `p/q` (or `p` when the denominator is one) and
//! parse from integers, `p/q` fractions, or decimal literals converted
//! exactly (`1.5` becomes `3/2`, never a binary float).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numerator: i64, denominator: i64) -> Self {
        assert!(denominator != 0, "zero denominator");
        Rational(BigRational::new(numerator.into(), denominator.into()))
    }

    pub fn from_integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn from_big(numerator: BigInt, denominator: BigInt) -> Self {
        assert!(!denominator.is_zero(), "zero denominator");
        Rational(BigRational::new(numerator, denominator))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i8 {
        match () {
            _ if self.0.is_zero() => 0,
            _ if self.0.is_positive() => 1,
            _ => -1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rational(self.0.recip())
    }

    /// Nearest double; exactness is already spent by the time callers ask.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::InvalidInput(format!("cannot parse {s:?} as a rational"));
        if s.is_empty() {
            return Err(bad());
        }
        if let Some((num, den)) = s.split_once('/') {
            let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
            let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
            if den.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in {s:?}")));
            }
            return Ok(Rational(BigRational::new(num, den)));
        }
        if let Some((int, frac)) = s.split_once('.') {
            // Decimal literal: p.d1..dk -> (p * 10^k + d) / 10^k, exactly.
            let negative = int.trim_start().starts_with('-');
            let int_omitted = int.is_empty() || int == "-" || int == "+";
            let int_part = if int_omitted {
                BigInt::zero()
            } else {
                BigInt::from_str(int).map_err(|_| bad())?
            };
            if !frac.bytes().all(|b| b.is_ascii_digit()) || (frac.is_empty() && int_omitted) {
                return Err(bad());
            }
            let frac_part = if frac.is_empty() {
                BigInt::zero()
            } else {
                BigInt::from_str(frac).map_err(|_| bad())?
            };
            let scale = BigInt::from(10u8).pow(frac.len() as u32);
            let mut numer = int_part * &scale;
            if negative {
                numer -= frac_part;
            } else {
                numer += frac_part;
            }
            return Ok(Rational(BigRational::new(numer, scale)));
        }
        let n = BigInt::from_str(s).map_err(|_| bad())?;
        Ok(Rational(BigRational::from_integer(n)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::from_str(&s).map_err(D::Error::custom)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::from_integer(value)
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((self.0).$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

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

impl std::iter::Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}
