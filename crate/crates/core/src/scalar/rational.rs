use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn new(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    pub fn from_integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big(numer: BigInt, denom: BigInt) -> Self {
        assert!(!denom.is_zero(), "zero denominator");
        Rational(BigRational::new(numer, denom))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Rational::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }

    /// Integer value if this rational is an integer that fits in an `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// Least common multiple of the denominators of `values`.
    pub fn denominator_lcm<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
        values
            .into_iter()
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Invalid(format!("not a rational number: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rational::from_big(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rational::from_bigint(n))
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_integer(n)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((self.0).$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

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

/// Integers serialize as JSON numbers, everything else as `"p/q"`.
impl serde::Serialize for Rational {
    fn serialize<Ser: serde::Serializer>(
        &self,
        s: Ser,
    ) -> std::result::Result<Ser::Ok, Ser::Error> {
        match self.to_i64() {
            Some(n) => s.serialize_i64(n),
            None => s.collect_str(self),
        }
    }
}
