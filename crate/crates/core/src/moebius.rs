//! Möbius functions and Möbius algebras of finite partial semilattices.

use std::sync::Arc;

use crate::backend::{galois_images, require_surjective, RegularCategory};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::scalar::Scalar;

/// A finite poset in which pairs bounded below have a meet. Missing meets
/// stand for the adjoined minimum, which is never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialSemilattice {
    n: usize,
    le: Vec<bool>,
    meet: Vec<Option<usize>>,
}

impl PartialSemilattice {
    /// Builds the table from an order predicate; meets are derived as the
    /// greatest common lower bound. Fails if some bounded pair has no meet.
    pub fn from_order(n: usize, le: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let le: Vec<bool> = (0..n * n).map(|k| le(k / n, k % n)).collect();
        let mut meet = vec![None; n * n];
        for u in 0..n {
            for v in 0..n {
                let lower: Vec<usize> =
                    (0..n).filter(|&w| le[w * n + u] && le[w * n + v]).collect();
                if lower.is_empty() {
                    continue;
                }
                let top = lower
                    .iter()
                    .copied()
                    .find(|&m| lower.iter().all(|&w| le[w * n + m]))
                    .ok_or_else(|| Error::Invalid(format!("elements {u} and {v} have no meet")))?;
                meet[u * n + v] = Some(top);
            }
        }
        Ok(PartialSemilattice { n, le, meet })
    }

    /// Builds the table from explicit order and meet functions.
    pub fn from_tables(
        n: usize,
        le: impl Fn(usize, usize) -> bool,
        meet: impl Fn(usize, usize) -> Option<usize>,
    ) -> Self {
        PartialSemilattice {
            n,
            le: (0..n * n).map(|k| le(k / n, k % n)).collect(),
            meet: (0..n * n).map(|k| meet(k / n, k % n)).collect(),
        }
    }

    /// The lattice `sub(x)` together with its canonical element list.
    pub fn of_subobjects<C: RegularCategory>(
        cat: &C,
        x: usize,
    ) -> Result<(Self, Arc<Vec<C::Sub>>)> {
        let subs = cat.subobjects(x)?;
        let lookup = |s: &C::Sub| subs.binary_search(s).ok();
        let n = subs.len();
        let mut meet = vec![None; n * n];
        for i in 0..n {
            for j in i..n {
                let m = cat
                    .sub_meet(&subs[i], &subs[j])
                    .map(|m| lookup(&m).expect("meet of subobjects is a canonical subobject"));
                meet[i * n + j] = m;
                meet[j * n + i] = m;
            }
        }
        let le = (0..n * n)
            .map(|k| cat.sub_le(&subs[k / n], &subs[k % n]))
            .collect();
        Ok((PartialSemilattice { n, le, meet }, subs))
    }

    /// The chain `0 < 1 < … < k-1`.
    pub fn chain(k: usize) -> Self {
        Self::from_tables(k, |u, v| u <= v, |u, v| Some(u.min(v)))
    }

    /// Subsets of a `k`-set as bitmasks.
    pub fn boolean(k: usize) -> Self {
        Self::from_tables(1 << k, |u, v| u & v == u, |u, v| Some(u & v))
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn le(&self, u: usize, v: usize) -> bool {
        self.le[u * self.n + v]
    }

    pub fn meet(&self, u: usize, v: usize) -> Option<usize> {
        self.meet[u * self.n + v]
    }

    /// Exhaustive check of the meet axioms and `u ≤ v ⟺ u ∧ v = u`.
    pub fn check_axioms(&self) -> Result<()> {
        let n = self.n;
        for u in 0..n {
            if self.meet(u, u) != Some(u) {
                return Err(Error::Invalid(format!("meet not idempotent at {u}")));
            }
            for v in 0..n {
                if self.meet(u, v) != self.meet(v, u) {
                    return Err(Error::Invalid(format!("meet not commutative at ({u},{v})")));
                }
                if self.le(u, v) != (self.meet(u, v) == Some(u)) {
                    return Err(Error::Invalid(format!(
                        "order and meet disagree at ({u},{v})"
                    )));
                }
                for w in 0..n {
                    let left = self.meet(u, v).and_then(|m| self.meet(m, w));
                    let right = self.meet(v, w).and_then(|m| self.meet(u, m));
                    if left != right {
                        return Err(Error::Invalid(format!(
                            "meet not associative at ({u},{v},{w})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Elements sorted so that `u < v` implies `u` comes first.
    fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.n).collect();
        order.sort_by_key(|&v| (0..self.n).filter(|&u| self.le(u, v)).count());
        order
    }

    /// Product in the Möbius algebra, with missing meets sent to 0.
    pub fn algebra_mul<S: Scalar>(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.n];
        for (u, cu) in a.iter().enumerate() {
            if cu.is_zero() {
                continue;
            }
            for (v, cv) in b.iter().enumerate() {
                if cv.is_zero() {
                    continue;
                }
                if let Some(m) = self.meet(u, v) {
                    out[m] = out[m].clone() + cu.clone() * cv.clone();
                }
            }
        }
        out
    }

    /// Basis vector of `u` in the Möbius algebra.
    pub fn basis_vector<S: Scalar>(&self, u: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.n];
        v[u] = S::one();
        v
    }
}

/// Values `μ(u, v)` of the Möbius function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusTable {
    n: usize,
    mu: Vec<i64>,
}

impl MoebiusTable {
    pub fn get(&self, u: usize, v: usize) -> i64 {
        self.mu[u * self.n + v]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Whether zeta · μ is the identity matrix.
    pub fn inverts_zeta(&self, lattice: &PartialSemilattice) -> bool {
        let n = self.n;
        (0..n).all(|u| {
            (0..n).all(|v| {
                let s: i64 = (0..n)
                    .filter(|&w| lattice.le(u, w))
                    .map(|w| self.get(w, v))
                    .sum();
                s == (u == v) as i64
            })
        })
    }
}

/// Inverse of the zeta matrix, via `μ(u,v) = -Σ_{u ≤ w < v} μ(u,w)`.
pub fn moebius(lattice: &PartialSemilattice) -> MoebiusTable {
    let n = lattice.len();
    let order = lattice.linear_extension();
    let mut mu = vec![0i64; n * n];
    for u in 0..n {
        mu[u * n + u] = 1;
        for &v in &order {
            if v == u || !lattice.le(u, v) {
                continue;
            }
            // every w with u ≤ w < v precedes v in `order`
            let s: i64 = (0..n)
                .filter(|&w| w != v && lattice.le(u, w) && lattice.le(w, v))
                .map(|w| mu[u * n + w])
                .sum();
            mu[u * n + v] = -s;
        }
    }
    MoebiusTable { n, mu }
}

/// Coefficient vectors of `p_v = Σ_{u ≤ v} μ(u,v) u`, indexed by `v`.
pub fn lattice_idempotents(lattice: &PartialSemilattice, mu: &MoebiusTable) -> Vec<Vec<i64>> {
    let n = lattice.len();
    (0..n)
        .map(|v| (0..n).map(|u| mu.get(u, v)).collect())
        .collect()
}

fn int_mul(lattice: &PartialSemilattice, a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0i64; lattice.len()];
    for (u, &cu) in a.iter().enumerate().filter(|(_, c)| **c != 0) {
        for (v, &cv) in b.iter().enumerate().filter(|(_, c)| **c != 0) {
            if let Some(m) = lattice.meet(u, v) {
                out[m] += cu * cv;
            }
        }
    }
    out
}

/// Exhaustive check of `p_u ∧ p_v = δ_{uv} p_v`, of `p_u ∧ v = [u ≤ v] p_u`
/// and of `u = Σ_{v ≤ u} p_v`.
pub fn check_idempotents(lattice: &PartialSemilattice, p: &[Vec<i64>]) -> Result<()> {
    let n = lattice.len();
    let zero = vec![0i64; n];
    for u in 0..n {
        for v in 0..n {
            let prod = int_mul(lattice, &p[u], &p[v]);
            let expect = if u == v { &p[v] } else { &zero };
            if &prod != expect {
                return Err(Error::Contract(format!("p_{u} ∧ p_{v} ≠ δ p_{v}")));
            }
            let mut basis = vec![0i64; n];
            basis[v] = 1;
            let prod = int_mul(lattice, &p[u], &basis);
            let expect = if lattice.le(u, v) { &p[u] } else { &zero };
            if &prod != expect {
                return Err(Error::Contract(format!("p_{u} ∧ {v} has the wrong value")));
            }
        }
        let mut sum = vec![0i64; n];
        for v in (0..n).filter(|&v| lattice.le(v, u)) {
            for (s, c) in sum.iter_mut().zip(&p[v]) {
                *s += c;
            }
        }
        let mut basis = vec![0i64; n];
        basis[u] = 1;
        if sum != basis {
            return Err(Error::Contract(format!("Σ_{{v ≤ {u}}} p_v ≠ {u}")));
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct WilfReport<S> {
    /// `det(φ(u ∧ v))` with `φ(∅) = 0`.
    pub det: S,
    /// `φ(p_w)` for every `w`, in lattice order.
    pub factors: Vec<S>,
    pub agrees: bool,
}

/// Computes both sides of `det(φ(u∧v)) = Π_w φ(p_w)`.
pub fn wilf_determinant<S: Scalar>(
    lattice: &PartialSemilattice,
    mu: &MoebiusTable,
    phi: &[S],
) -> Result<WilfReport<S>> {
    let n = lattice.len();
    if phi.len() != n {
        return Err(Error::Dimension(format!(
            "φ has {} values for {n} elements",
            phi.len()
        )));
    }
    let gram = DenseMatrix::from_fn(n, n, |u, v| match lattice.meet(u, v) {
        Some(m) => phi[m].clone(),
        None => S::zero(),
    });
    let det = gram.determinant()?;
    let factors: Vec<S> = (0..n)
        .map(|w| {
            (0..n)
                .filter(|&u| lattice.le(u, w))
                .fold(S::zero(), |acc, u| {
                    acc + S::from_int(mu.get(u, w)) * phi[u].clone()
                })
        })
        .collect();
    let product = factors.iter().fold(S::one(), |acc, f| acc * f.clone());
    Ok(WilfReport {
        agrees: product == det,
        det,
        factors,
    })
}

#[derive(Clone, Debug)]
pub struct StanleyReport {
    /// Index of `m = e_*(l)` in `sub(y)`.
    pub m: usize,
    /// Coefficients of `p^L_{l→m}` over `sub(x)`.
    pub split: Vec<i64>,
    pub holds: bool,
}

/// `p^L_{l→m}` for `m = e_*(l)`, with the identity
/// `p^L_l = e^*(p^M_m) ∧ p^L_{l→m}` checked in `A(sub x)`.
pub fn stanley_split<C: RegularCategory>(cat: &C, e: &C::Mor, l: &C::Sub) -> Result<StanleyReport> {
    require_surjective(cat, e)?;
    let (x, y) = (cat.source(e), cat.target(e));
    let (lat_l, subs_x) = PartialSemilattice::of_subobjects(cat, x)?;
    let (lat_m, subs_y) = PartialSemilattice::of_subobjects(cat, y)?;
    let mu_l = moebius(&lat_l);
    let mu_m = moebius(&lat_m);
    let idx_x = |s: &C::Sub| subs_x.binary_search(s).expect("canonical subobject");
    let idx_y = |s: &C::Sub| subs_y.binary_search(s).expect("canonical subobject");

    let li = idx_x(l);
    let full_y = cat.full_sub(y);
    let (m_sub, _) = galois_images(cat, e, l, &full_y)?;
    let mi = idx_y(&m_sub);

    let mut split = vec![0i64; lat_l.len()];
    for (k, lp) in subs_x.iter().enumerate() {
        if lat_l.le(k, li) && idx_y(&galois_images(cat, e, lp, &full_y)?.0) == mi {
            split[k] = mu_l.get(k, li);
        }
    }

    let mut pulled = vec![0i64; lat_l.len()];
    for (k, v) in subs_y.iter().enumerate() {
        let c = mu_m.get(k, mi);
        if c != 0 {
            let (_, pre) = galois_images(cat, e, l, v)?;
            pulled[idx_x(&pre)] += c;
        }
    }
    let lhs: Vec<i64> = (0..lat_l.len()).map(|u| mu_l.get(u, li)).collect();
    let rhs = int_mul(&lat_l, &pulled, &split);
    Ok(StanleyReport {
        m: mi,
        split,
        holds: lhs == rhs,
    })
}
