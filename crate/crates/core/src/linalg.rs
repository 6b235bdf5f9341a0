//! Exact dense linear algebra and univariate root finding.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{uni, FieldScalar, MultiPoly, Rational, Scalar};

/// Row-major matrix over one scalar kind.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    entries: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            entries: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        DenseMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DenseMatrix<T> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn mul(&self, rhs: &DenseMatrix<S>) -> Result<DenseMatrix<S>> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = &rhs[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Kronecker product `self ⊗ rhs`.
    pub fn kronecker(&self, rhs: &DenseMatrix<S>) -> DenseMatrix<S> {
        Self::from_fn(self.rows * rhs.rows, self.cols * rhs.cols, |r, c| {
            self[(r / rhs.rows, c / rhs.cols)].clone() * rhs[(r % rhs.rows, c % rhs.cols)].clone()
        })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination. Only exact
    /// divisions occur, so polynomial entries never leave the ring.
    pub fn determinant(&self) -> Result<S> {
        if !self.is_square() {
            return Err(Error::Dimension(format!(
                "determinant of a {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        if n == 0 {
            return Ok(S::one());
        }
        let mut a = self.clone();
        let mut sign_flip = false;
        let mut prev = S::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(p) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return Ok(S::zero());
                };
                a.swap_rows(k, p);
                sign_flip = !sign_flip;
            }
            let pivot = a[(k, k)].clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v =
                        pivot.clone() * a[(i, j)].clone() - a[(i, k)].clone() * a[(k, j)].clone();
                    a[(i, j)] = v.exact_div(&prev).expect("Bareiss step divides exactly");
                }
                a[(i, k)] = S::zero();
            }
            prev = pivot;
        }
        let d = a[(n - 1, n - 1)].clone();
        Ok(if sign_flip { -d } else { d })
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

impl<S: FieldScalar> DenseMatrix<S> {
    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].inv().expect("nonzero pivot");
            for c in col..self.cols {
                self[(row, c)] = self[(row, c)].clone() * inv.clone();
            }
            for r in 0..self.rows {
                if r == row || self[(r, col)].is_zero() {
                    continue;
                }
                let factor = self[(r, col)].clone();
                for c in col..self.cols {
                    if self[(row, c)].is_zero() {
                        continue;
                    }
                    self[(r, c)] = self[(r, c)].clone() - factor.clone() * self[(row, c)].clone();
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Echelonised basis of the right kernel. Each vector has leading
    /// entry 1 and the leading positions strictly increase.
    pub fn kernel_basis(&self) -> Vec<Vec<S>> {
        let mut a = self.clone();
        let pivots = a.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        if free.is_empty() {
            return Vec::new();
        }
        let raw: Vec<Vec<S>> = free
            .iter()
            .map(|&f| {
                let mut v = vec![S::zero(); self.cols];
                v[f] = S::one();
                for (r, &p) in pivots.iter().enumerate() {
                    v[p] = -a[(r, f)].clone();
                }
                v
            })
            .collect();
        let mut basis = DenseMatrix::from_rows(raw).expect("uniform rows");
        let rank = basis.rref().len();
        (0..rank).map(|r| basis.row(r).to_vec()).collect()
    }

    /// Solve `self * x = b`, returning one solution if any exists.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        let mut aug = DenseMatrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                b[r].clone()
            }
        });
        let pivots = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![S::zero(); self.cols];
        for (r, &p) in pivots.iter().enumerate() {
            x[p] = aug[(r, self.cols)].clone();
        }
        Some(x)
    }
}

impl<S> std::ops::Index<(usize, usize)> for DenseMatrix<S> {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.entries[r * self.cols + c]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for DenseMatrix<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.entries[r * self.cols + c]
    }
}

impl<S: fmt::Debug> fmt::Debug for DenseMatrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{}]", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|c| format!("{:?}", self.entries[r * self.cols + c]))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A rational root together with its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Root {
    pub value: Rational,
    pub multiplicity: u32,
}

/// All rational roots of a univariate polynomial, ascending.
pub fn rational_roots(p: &MultiPoly) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::IdenticallyZero);
    }
    let (_, dense) = p
        .as_univariate()
        .ok_or_else(|| Error::Invalid(format!("{p} is not univariate")))?;
    let mut roots = Vec::new();
    let mut work = dense;
    uni::trim(&mut work);

    let zero_mult = work.iter().take_while(|c| c.is_zero()).count();
    if zero_mult > 0 {
        roots.push(Root {
            value: Rational::zero(),
            multiplicity: zero_mult as u32,
        });
        work.drain(..zero_mult);
    }

    let candidates = root_candidates(&work);
    for cand in candidates {
        let mut mult = 0;
        while uni::degree(&work).is_some_and(|d| d > 0) && uni::eval(&work, &cand).is_zero() {
            work = uni::deflate(&work, &cand);
            mult += 1;
        }
        if mult > 0 {
            roots.push(Root {
                value: cand,
                multiplicity: mult,
            });
        }
    }
    roots.sort();
    Ok(roots)
}

/// Candidates `±a/b` with `a | constant term` and `b | leading coefficient`
/// of the primitive integer multiple of `dense` (constant term nonzero).
fn root_candidates(dense: &[Rational]) -> Vec<Rational> {
    if uni::degree(dense).is_none_or(|d| d == 0) {
        return Vec::new();
    }
    let lcm = Rational::denominator_lcm(dense.iter());
    let ints: Vec<BigInt> = dense
        .iter()
        .map(|c| (c.numer() * &lcm) / c.denom())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    let ints: Vec<BigInt> = ints.iter().map(|c| c / &content).collect();
    let a0 = ints[0].abs();
    let an = ints.iter().rev().find(|c| !c.is_zero()).unwrap().abs();
    let mut out = Vec::new();
    for a in divisors(&a0) {
        for b in divisors(&an) {
            for sign in [1, -1] {
                let r = Rational::from_big(BigInt::from(sign) * &a, b.clone());
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            small.push(d.clone());
            let other = n / &d;
            if other != d {
                large.push(other);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Render a univariate polynomial as a product of its rational linear
/// factors and the remaining cofactor, e.g. `t^2*(t-1)`.
pub fn factored_string(p: &MultiPoly) -> String {
    let Some((Some(var), _)) = p.as_univariate() else {
        return p.to_compact_string();
    };
    let var = var.to_string();
    let Ok(roots) = rational_roots(p) else {
        return "0".into();
    };
    let mut rest = p.clone();
    let mut parts = Vec::new();
    for root in &roots {
        let lin = if root.value.is_zero() {
            MultiPoly::var(&var)
        } else {
            &MultiPoly::var(&var) - &MultiPoly::constant(root.value.clone())
        };
        for _ in 0..root.multiplicity {
            rest = rest.exact_div(&lin).expect("root divides");
        }
        let base = if root.value.is_zero() {
            var.clone()
        } else {
            format!("({})", lin.to_compact_string())
        };
        parts.push(if root.multiplicity == 1 {
            base
        } else {
            format!("{base}^{}", root.multiplicity)
        });
    }
    match rest.constant_value() {
        Some(c) if c.is_one() && !parts.is_empty() => {}
        Some(c) if (-c.clone()).is_one() && !parts.is_empty() => {
            parts[0] = format!("-{}", parts[0]);
        }
        Some(c) => parts.insert(0, c.to_string()),
        None => {
            let s = rest.to_compact_string();
            parts.push(if rest.num_terms() > 1 {
                format!("({s})")
            } else {
                s
            });
        }
    }
    parts.join("*")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n)
    }

    fn t() -> MultiPoly {
        MultiPoly::var("t")
    }

    fn mq(rows: &[&[i64]]) -> DenseMatrix<Rational> {
        DenseMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn determinant_identity_and_repeated_row() {
        assert_eq!(mq(&[&[1, 0], &[0, 1]]).determinant().unwrap(), q(1));
        assert_eq!(
            mq(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]])
                .determinant()
                .unwrap(),
            q(0)
        );
        assert!(mq(&[&[1, 2]]).determinant().is_err());
    }

    #[test]
    fn determinant_of_two_point_gram() {
        let t2 = &t() * &t();
        let m = DenseMatrix::from_rows(vec![vec![t2, t()], vec![t(), t()]]).unwrap();
        let d = m.determinant().unwrap();
        assert_eq!(d, &t().pow(3) - &t().pow(2));
        assert_eq!(factored_string(&d), "t^2*(t-1)");
    }

    #[test]
    fn kernel_examples() {
        let k = mq(&[&[1, 1]]).kernel_basis();
        assert_eq!(k, vec![vec![q(1), q(-1)]]);
        assert!(mq(&[&[1, 0], &[0, 1]]).kernel_basis().is_empty());
        // Gram matrix of the 2-point object at t = 1.
        let g = mq(&[&[1, 1], &[1, 1]]);
        assert_eq!(g.kernel_basis().len(), 1);
    }

    #[test]
    fn roots_examples() {
        let p = &(&t() * &t()) * &(&t() - &MultiPoly::one());
        let r = rational_roots(&p).unwrap();
        assert_eq!(
            r,
            vec![
                Root {
                    value: q(0),
                    multiplicity: 2
                },
                Root {
                    value: q(1),
                    multiplicity: 1
                }
            ]
        );
        let r = rational_roots(&(&t() - &MultiPoly::constant(q(3)))).unwrap();
        assert_eq!(
            r,
            vec![Root {
                value: q(3),
                multiplicity: 1
            }]
        );
        let r = rational_roots(&(&(&t() * &t()) + &MultiPoly::one())).unwrap();
        assert!(r.is_empty());
        assert_eq!(
            rational_roots(&MultiPoly::zero()),
            Err(Error::IdenticallyZero)
        );
    }

    #[test]
    fn roots_with_fractions() {
        // (2t - 7)(3t + 1)
        let a = &t().scale(&q(2)) - &MultiPoly::constant(q(7));
        let b = &t().scale(&q(3)) + &MultiPoly::one();
        let r: Vec<Rational> = rational_roots(&(&a * &b))
            .unwrap()
            .into_iter()
            .map(|r| r.value)
            .collect();
        assert_eq!(r, vec![Rational::new(-1, 3), Rational::new(7, 2)]);
    }
}
