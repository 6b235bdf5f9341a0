use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::uni::{self, Dense};
use super::Rational;

/// Exponent vector, compared in graded lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial with rational coefficients over named
/// indeterminates.
///
/// The variable list is sorted and contains exactly the variables that
/// occur with a positive exponent, so structural equality is polynomial
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn constant(c: Rational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial(Vec::new()), c);
        }
        MultiPoly {
            vars: Vec::new(),
            terms,
        }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![1]), Rational::one());
        MultiPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// `name^exp` as a polynomial.
    pub fn var_pow(name: &str, exp: u32) -> Self {
        if exp == 0 {
            return MultiPoly::one();
        }
        let mut terms = BTreeMap::new();
        terms.insert(Monomial(vec![exp]), Rational::one());
        MultiPoly {
            vars: vec![name.to_string()],
            terms,
        }
    }

    /// Builds a univariate polynomial from dense coefficients (lowest first).
    pub fn from_dense(name: &str, coeffs: &[Rational]) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                terms.insert(Monomial(vec![e as u32]), c.clone());
            }
        }
        MultiPoly::from_parts(vec![name.to_string()], terms)
    }

    fn from_parts(vars: Vec<String>, terms: BTreeMap<Monomial, Rational>) -> Self {
        let mut p = MultiPoly { vars, terms };
        p.trim_vars();
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.vars.is_empty() {
            Some(
                self.terms
                    .values()
                    .next()
                    .cloned()
                    .unwrap_or_else(Rational::zero),
            )
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    /// Coefficient of the monomial given as (variable, exponent) pairs.
    pub fn coefficient_of(&self, mono: &[(&str, u32)]) -> Rational {
        let mut exps = vec![0u32; self.vars.len()];
        for (name, e) in mono {
            if *e == 0 {
                continue;
            }
            match self.vars.iter().position(|v| v == name) {
                Some(i) => exps[i] = *e,
                None => return Rational::zero(),
            }
        }
        self.terms
            .get(&Monomial(exps))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Dense coefficients if the polynomial involves at most one variable.
    pub fn as_univariate(&self) -> Option<(Option<&str>, Dense)> {
        match self.vars.len() {
            0 => Some((None, self.constant_value().into_iter().collect())),
            1 => {
                let deg = self.total_degree() as usize;
                let mut dense = vec![Rational::zero(); deg + 1];
                for (m, c) in &self.terms {
                    dense[m.0[0] as usize] = c.clone();
                }
                Some((Some(self.vars[0].as_str()), dense))
            }
            _ => None,
        }
    }

    /// Replace `var` by the rational `value`.
    pub fn substitute(&self, var: &str, value: &Rational) -> MultiPoly {
        let Some(idx) = self.vars.iter().position(|v| v == var) else {
            return self.clone();
        };
        let mut out: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in &self.terms {
            let mut exps = m.0.clone();
            let e = exps[idx];
            exps[idx] = 0;
            let c = c * &value.pow(e);
            if c.is_zero() {
                continue;
            }
            let slot = out.entry(Monomial(exps)).or_insert_with(Rational::zero);
            *slot = &*slot + &c;
        }
        out.retain(|_, c| !c.is_zero());
        MultiPoly::from_parts(self.vars.clone(), out)
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero();
        }
        let terms = self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect();
        MultiPoly {
            vars: self.vars.clone(),
            terms,
        }
    }

    pub fn pow(&self, exp: u32) -> MultiPoly {
        let mut acc = MultiPoly::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &MultiPoly) -> Option<MultiPoly> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MultiPoly::zero());
        }
        let vars = merged_vars(&self.vars, &d.vars);
        let mut rem = self.realign(&vars);
        let div = d.realign(&vars);
        let (dm, dc) = div
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))?;
        let dc_inv = dc.recip()?;
        let mut quot: BTreeMap<Monomial, Rational> = BTreeMap::new();
        while let Some((rm, rc)) = rem.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = Monomial(rm.0.iter().zip(&dm.0).map(|(a, b)| a - b).collect());
            let qc = &rc * &dc_inv;
            for (m, c) in &div {
                let prod = Monomial(m.0.iter().zip(&qm.0).map(|(a, b)| a + b).collect());
                let slot = rem.entry(prod.clone()).or_insert_with(Rational::zero);
                *slot = &*slot - &(c * &qc);
                if slot.is_zero() {
                    rem.remove(&prod);
                }
            }
            quot.insert(qm, qc);
        }
        Some(MultiPoly::from_parts(vars, quot))
    }

    fn realign(&self, vars: &[String]) -> BTreeMap<Monomial, Rational> {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).unwrap())
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut e = vec![0u32; vars.len()];
                for (i, &x) in m.0.iter().enumerate() {
                    e[map[i]] = x;
                }
                (Monomial(e), c.clone())
            })
            .collect()
    }

    fn trim_vars(&mut self) {
        let used: Vec<bool> = (0..self.vars.len())
            .map(|i| self.terms.keys().any(|m| m.0[i] > 0))
            .collect();
        if used.iter().all(|&u| u) {
            return;
        }
        let vars = self
            .vars
            .iter()
            .zip(&used)
            .filter(|(_, &u)| u)
            .map(|(v, _)| v.clone())
            .collect();
        let terms = std::mem::take(&mut self.terms)
            .into_iter()
            .map(|(m, c)| {
                let e =
                    m.0.iter()
                        .zip(&used)
                        .filter(|(_, &u)| u)
                        .map(|(x, _)| *x)
                        .collect();
                (Monomial(e), c)
            })
            .collect();
        self.vars = vars;
        self.terms = terms;
    }

    fn combine(&self, other: &MultiPoly, sign: bool) -> MultiPoly {
        let vars = merged_vars(&self.vars, &other.vars);
        let mut terms = self.realign(&vars);
        for (m, c) in other.realign(&vars) {
            let slot = terms.entry(m.clone()).or_insert_with(Rational::zero);
            *slot = if sign { &*slot + &c } else { &*slot - &c };
            if slot.is_zero() {
                terms.remove(&m);
            }
        }
        MultiPoly::from_parts(vars, terms)
    }

    fn product(&self, other: &MultiPoly) -> MultiPoly {
        if self.is_zero() || other.is_zero() {
            return MultiPoly::zero();
        }
        let vars = merged_vars(&self.vars, &other.vars);
        let a = self.realign(&vars);
        let b = other.realign(&vars);
        let mut terms: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &a {
            for (mb, cb) in &b {
                let m = Monomial(ma.0.iter().zip(&mb.0).map(|(x, y)| x + y).collect());
                let slot = terms.entry(m).or_insert_with(Rational::zero);
                *slot = &*slot + &(ca * cb);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        MultiPoly::from_parts(vars, terms)
    }

    /// Compact rendering without spaces, e.g. `t^2-3*t+2`.
    pub fn to_compact_string(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg, spaced) {
                (0, true, _) => out.push('-'),
                (0, false, _) => {}
                (_, true, true) => out.push_str(" - "),
                (_, false, true) => out.push_str(" + "),
                (_, true, false) => out.push('-'),
                (_, false, false) => out.push('+'),
            }
            let mag = c.abs();
            let mono = self.render_monomial(m);
            if mono.is_empty() {
                out.push_str(&mag.to_string());
            } else if mag.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{mag}*{mono}"));
            }
        }
        out
    }

    fn render_monomial(&self, m: &Monomial) -> String {
        m.0.iter()
            .zip(&self.vars)
            .filter(|(e, _)| **e > 0)
            .map(|(e, v)| {
                if *e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

fn merged_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut v: Vec<String> = a.iter().chain(b).cloned().collect();
    v.sort();
    v.dedup();
    v
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for MultiPoly {
    fn zero() -> Self {
        MultiPoly::default()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for MultiPoly {
    fn one() -> Self {
        MultiPoly::constant(Rational::one())
    }
}

impl From<Rational> for MultiPoly {
    fn from(c: Rational) -> Self {
        MultiPoly::constant(c)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.combine(rhs, true)
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.combine(rhs, false)
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &'a MultiPoly) -> MultiPoly {
        self.product(rhs)
    }
}

impl Add for MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: MultiPoly) -> MultiPoly {
        self.combine(&rhs, true)
    }
}

impl Sub for MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: MultiPoly) -> MultiPoly {
        self.combine(&rhs, false)
    }
}

impl Mul for MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: MultiPoly) -> MultiPoly {
        self.product(&rhs)
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

impl MultiPoly {
    /// Dense univariate gcd when both operands share at most one variable.
    pub(crate) fn univariate_gcd(&self, other: &MultiPoly) -> Option<MultiPoly> {
        let (va, a) = self.as_univariate()?;
        let (vb, b) = other.as_univariate()?;
        let var = match (va, vb) {
            (Some(x), Some(y)) if x != y => return None,
            (Some(x), _) | (_, Some(x)) => x.to_string(),
            (None, None) => "t".to_string(),
        };
        let g = uni::gcd(&a, &b);
        Some(MultiPoly::from_dense(&var, &g))
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
    fn printing_is_graded_lex_descending() {
        let p = &(&t().pow(3) - &t().pow(2)) + &c(2);
        assert_eq!(p.to_string(), "t^3 - t^2 + 2");
        assert_eq!(p.to_compact_string(), "t^3-t^2+2");
        let q = (MultiPoly::var("t") - c(1)).scale(&Rational::new(-3, 2));
        assert_eq!(q.to_string(), "-3/2*t + 3/2");
        assert_eq!(MultiPoly::zero().to_string(), "0");
    }

    #[test]
    fn unused_variables_are_dropped() {
        let s = MultiPoly::var("s");
        let p = &(&s + &t()) - &s;
        assert_eq!(p, t());
        assert_eq!(p.vars(), ["t".to_string()]);
    }

    #[test]
    fn exact_division_multivariate() {
        let s = MultiPoly::var("s");
        let a = &s - &t();
        let b = &s + &c(1);
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a), Some(b.clone()));
        assert_eq!(prod.exact_div(&b), Some(a));
        assert_eq!(t().exact_div(&b), None);
    }

    #[test]
    fn substitution() {
        let p = &(&t() * &t()) - &t();
        assert_eq!(p.substitute("t", &Rational::from_integer(3)), c(6));
    }
}
