use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{MultiPoly, Rational};

/// Quotient of two polynomials with a monic denominator.
///
/// Common factors are cancelled whenever numerator and denominator live
/// in a single variable; otherwise only exact division and leading
/// coefficient normalisation are applied. Equality is decided by
/// cross-multiplication, so it is exact in every case.
#[derive(Clone)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let mut r = RatFunc { num, den };
        r.reduce();
        Some(r)
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        RatFunc {
            num: p,
            den: MultiPoly::one(),
        }
    }

    pub fn numer(&self) -> &MultiPoly {
        &self.num
    }

    pub fn denom(&self) -> &MultiPoly {
        &self.den
    }

    /// The polynomial this function equals, if the denominator is constant.
    pub fn as_poly(&self) -> Option<MultiPoly> {
        self.den
            .constant_value()
            .map(|c| self.num.scale(&c.recip().expect("nonzero denominator")))
    }

    pub fn recip(&self) -> Option<Self> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    /// Evaluate at `var = value`; `None` when the denominator vanishes there.
    pub fn substitute(&self, var: &str, value: &Rational) -> Option<RatFunc> {
        RatFunc::new(
            self.num.substitute(var, value),
            self.den.substitute(var, value),
        )
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = MultiPoly::one();
            return;
        }
        if let Some(g) = self.num.univariate_gcd(&self.den) {
            if !g.is_constant() {
                self.num = self.num.exact_div(&g).expect("gcd divides numerator");
                self.den = self.den.exact_div(&g).expect("gcd divides denominator");
            }
        } else if let Some(q) = self.num.exact_div(&self.den) {
            self.num = q;
            self.den = MultiPoly::one();
        }
        let lc = self.den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        if !lc.is_one() {
            let inv = lc.recip().unwrap();
            self.num = self.num.scale(&inv);
            self.den = self.den.scale(&inv);
        }
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RatFunc {}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &MultiPoly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::from_poly(MultiPoly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RatFunc {
    fn one() -> Self {
        RatFunc::from_poly(MultiPoly::one())
    }
}

impl From<MultiPoly> for RatFunc {
    fn from(p: MultiPoly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &'a RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num - &rhs.num, self.den.clone()).unwrap();
        }
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        RatFunc::new(num, &self.den * &rhs.den).unwrap()
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &'a RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -self.num,
            den: self.den,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> MultiPoly {
        MultiPoly::var("t")
    }

    fn c(n: i64) -> MultiPoly {
        MultiPoly::constant(Rational::from_integer(n))
    }

    #[test]
    fn cancels_common_univariate_factor() {
        // (t^2 - 1) / (2t - 2) = (t + 1)/2
        let r = RatFunc::new(&(&t() * &t()) - &c(1), &(&t() * &c(2)) - &c(2)).unwrap();
        assert!(r.denom().is_one());
        assert_eq!(r.to_string(), "1/2*t + 1/2");
    }

    #[test]
    fn field_identities() {
        let a = RatFunc::new(t(), &t() - &c(1)).unwrap();
        let inv = a.recip().unwrap();
        assert_eq!(&a * &inv, RatFunc::one());
        assert_eq!(&a - &a, RatFunc::zero());
        assert!(RatFunc::new(t(), MultiPoly::zero()).is_none());
    }
}
