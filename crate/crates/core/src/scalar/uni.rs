//! Dense univariate polynomials over the rationals, coefficients stored
//! lowest degree first. Only the handful of routines needed by the
//! rational-function reduction and root finding live here.

use num_traits::{One, Zero};

use super::Rational;

pub type Dense = Vec<Rational>;

pub fn trim(p: &mut Dense) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter()
        .rev()
        .fold(Rational::zero(), |acc, c| &(&acc * x) + c)
}

/// Polynomial division with remainder. Panics on a zero divisor.
pub fn divrem(p: &[Rational], d: &[Rational]) -> (Dense, Dense) {
    let dd = degree(d).expect("division by zero polynomial");
    let mut rem: Dense = p.to_vec();
    trim(&mut rem);
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let lead_inv = d[dd].recip().unwrap();
    let mut quot = vec![Rational::zero(); rem.len() - dd];
    while let Some(rd) = degree(&rem) {
        if rd < dd {
            break;
        }
        let c = &rem[rd] * &lead_inv;
        let shift = rd - dd;
        for (i, di) in d.iter().enumerate().take(dd + 1) {
            rem[shift + i] = &rem[shift + i] - &(&c * di);
        }
        quot[shift] = c;
        trim(&mut rem);
    }
    trim(&mut quot);
    (quot, rem)
}

pub fn make_monic(p: &mut Dense) {
    trim(p);
    if let Some(lc) = p.last().cloned() {
        let inv = lc.recip().unwrap();
        for c in p.iter_mut() {
            *c = &*c * &inv;
        }
    }
}

/// Monic greatest common divisor; `gcd(0, 0) = 0`.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Dense {
    let mut a: Dense = a.to_vec();
    let mut b: Dense = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    make_monic(&mut a);
    a
}

/// Divide out the linear factor `(x - root)`; the caller guarantees it divides.
pub fn deflate(p: &[Rational], root: &Rational) -> Dense {
    let d = vec![-root, Rational::one()];
    divrem(p, &d).0
}
