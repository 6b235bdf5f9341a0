//! Exact coefficient arithmetic.
//!
//! Three scalar kinds are supported: [`Rational`], [`MultiPoly`] and
//! [`RatFunc`]. Every generic routine in the crate is monomorphic in one
//! of them, so a matrix can never mix kinds.

mod poly;
mod ratfunc;
mod rational;
pub mod uni;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use poly::{Monomial, MultiPoly};
pub use ratfunc::RatFunc;
pub use rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScalarKind {
    Rational,
    Poly,
    RatFunc,
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScalarKind::Rational => "rational",
            ScalarKind::Poly => "poly",
            ScalarKind::RatFunc => "ratfunc",
        })
    }
}

/// A commutative ring of exact scalars.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    const KIND: ScalarKind;

    fn from_rational(r: Rational) -> Self;

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n))
    }

    /// `self / d` when the quotient exists in the ring.
    fn exact_div(&self, d: &Self) -> Option<Self>;

    /// Substitute a rational value for the indeterminate `var`. Constants
    /// are returned unchanged.
    fn specialize(&self, var: &str, value: &Rational) -> Option<Rational>;

    fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * self.clone();
        }
        acc
    }
}

/// Scalars in which every nonzero element is invertible.
pub trait FieldScalar: Scalar {
    fn inv(&self) -> Option<Self>;
}

impl Scalar for Rational {
    const KIND: ScalarKind = ScalarKind::Rational;

    fn from_rational(r: Rational) -> Self {
        r
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        d.recip().map(|inv| self * &inv)
    }

    fn specialize(&self, _var: &str, _value: &Rational) -> Option<Rational> {
        Some(self.clone())
    }
}

impl FieldScalar for Rational {
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}

impl Scalar for MultiPoly {
    const KIND: ScalarKind = ScalarKind::Poly;

    fn from_rational(r: Rational) -> Self {
        MultiPoly::constant(r)
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        MultiPoly::exact_div(self, d)
    }

    fn specialize(&self, var: &str, value: &Rational) -> Option<Rational> {
        self.substitute(var, value).constant_value()
    }
}

impl Scalar for RatFunc {
    const KIND: ScalarKind = ScalarKind::RatFunc;

    fn from_rational(r: Rational) -> Self {
        RatFunc::from_poly(MultiPoly::constant(r))
    }

    fn exact_div(&self, d: &Self) -> Option<Self> {
        d.recip().map(|inv| self * &inv)
    }

    fn specialize(&self, var: &str, value: &Rational) -> Option<Rational> {
        let r = self.substitute(var, value)?;
        let n = r.numer().constant_value()?;
        let d = r.denom().constant_value()?;
        Some(&n / &d)
    }
}

impl FieldScalar for RatFunc {
    fn inv(&self) -> Option<Self> {
        self.recip()
    }
}
