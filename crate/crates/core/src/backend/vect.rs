//! Finite-dimensional vector spaces over a prime field F_q.

use std::sync::Arc;

use serde_json::json;

use super::fq::{is_prime, FqMat};
use super::{
    BackendTag, Cospan, ImageFactorization, Limits, Obj, ObjectHandle, Product, RegularCategory,
    Span, SubCache,
};
use crate::error::{Error, Result};

/// Linear map `F_q^src → F_q^tgt` as a `tgt × src` matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LinearMap {
    pub src: usize,
    pub tgt: usize,
    pub m: FqMat,
}

impl LinearMap {
    pub fn new(m: FqMat) -> Self {
        LinearMap {
            src: m.cols(),
            tgt: m.rows(),
            m,
        }
    }
}

/// Subspace of `F_q^ambient`, stored by its reduced row echelon basis.
/// The derived order sorts by ambient, then dimension, then basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Subspace {
    ambient: usize,
    basis: FqMat,
}

impl Subspace {
    /// Span of the given rows.
    pub fn span(q: u32, rows: &FqMat) -> Self {
        Subspace {
            ambient: rows.cols(),
            basis: rows.rref(q).0,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &FqMat {
        &self.basis
    }
}

#[derive(Clone, Debug)]
pub struct FinVectFq {
    q: u32,
    limits: Limits,
    cache: Arc<SubCache<Subspace>>,
}

impl FinVectFq {
    pub fn new(q: u64, limits: Limits) -> Result<Self> {
        if !is_prime(q) || q > u32::MAX as u64 / 2 {
            return Err(Error::Unsupported(format!(
                "field size {q}: only prime fields are implemented"
            )));
        }
        Ok(FinVectFq {
            q: q as u32,
            limits,
            cache: Arc::default(),
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// `q^d`, saturating.
    pub fn cardinality(&self, d: usize) -> u64 {
        (self.q as u64).checked_pow(d as u32).unwrap_or(u64::MAX)
    }

    fn check_dim(&self, d: usize) -> Result<()> {
        let size = self.cardinality(d);
        if size > self.limits.max_qdim {
            return Err(Error::ResourceBound {
                what: format!("subspaces of F_{}^{d}", self.q),
                key: "max_qdim",
                limit: self.limits.max_qdim,
                required: size,
            });
        }
        Ok(())
    }

    pub fn linear_map(&self, m: FqMat) -> LinearMap {
        let q = self.q;
        let data = m.data().iter().map(|v| v % q).collect();
        LinearMap::new(FqMat::from_rows(m.rows(), m.cols(), data))
    }

    /// Annihilator basis of a subspace, as rows.
    fn annihilator(&self, u: &Subspace) -> FqMat {
        if u.dim() == 0 {
            return FqMat::identity(u.ambient);
        }
        u.basis.kernel(self.q)
    }

    /// All reduced row echelon matrices of shape `k × n`.
    fn rref_matrices(&self, k: usize, n: usize) -> Vec<FqMat> {
        let mut out = Vec::new();
        let mut pivots = Vec::with_capacity(k);
        self.pivot_sets(0, k, n, &mut pivots, &mut out);
        out
    }

    fn pivot_sets(
        &self,
        start: usize,
        k: usize,
        n: usize,
        piv: &mut Vec<usize>,
        out: &mut Vec<FqMat>,
    ) {
        if piv.len() == k {
            let mut free = Vec::new();
            for (i, &p) in piv.iter().enumerate() {
                for c in p + 1..n {
                    if !piv.contains(&c) {
                        free.push((i, c));
                    }
                }
            }
            let q = self.q as usize;
            let total = q.pow(free.len() as u32);
            for mut code in 0..total {
                let mut m = FqMat::zeros(k, n);
                for (i, &p) in piv.iter().enumerate() {
                    m.set(i, p, 1);
                }
                for &(i, c) in &free {
                    m.set(i, c, (code % q) as u32);
                    code /= q;
                }
                out.push(m);
            }
            return;
        }
        for p in start..n {
            piv.push(p);
            self.pivot_sets(p + 1, k, n, piv, out);
            piv.pop();
        }
    }
}

impl RegularCategory for FinVectFq {
    type Mor = LinearMap;
    type Sub = Subspace;

    const TAG: BackendTag = BackendTag::Vect;

    fn limits(&self) -> &Limits {
        &self.limits
    }

    fn cache(&self) -> &SubCache<Subspace> {
        &self.cache
    }

    fn source(&self, f: &LinearMap) -> Obj {
        f.src
    }

    fn target(&self, f: &LinearMap) -> Obj {
        f.tgt
    }

    fn identity(&self, x: Obj) -> LinearMap {
        LinearMap::new(FqMat::identity(x))
    }

    fn compose(&self, f: &LinearMap, g: &LinearMap) -> Result<LinearMap> {
        if g.tgt != f.src {
            return Err(Error::EndpointMismatch(format!(
                "compose {}→{} after {}→{}",
                f.src, f.tgt, g.src, g.tgt
            )));
        }
        Ok(LinearMap {
            src: g.src,
            tgt: f.tgt,
            m: f.m.mul(&g.m, self.q),
        })
    }

    fn to_terminal(&self, x: Obj) -> LinearMap {
        LinearMap::new(FqMat::zeros(0, x))
    }

    fn product(&self, x: Obj, y: Obj) -> Product<LinearMap> {
        let n = x + y;
        Product {
            obj: n,
            left: LinearMap::new(FqMat::from_fn(x, n, |r, c| (r == c) as u32)),
            right: LinearMap::new(FqMat::from_fn(y, n, |r, c| (c == x + r) as u32)),
        }
    }

    fn pair(&self, f: &LinearMap, g: &LinearMap) -> Result<LinearMap> {
        if f.src != g.src {
            return Err(Error::EndpointMismatch(
                "pair of maps with distinct sources".into(),
            ));
        }
        Ok(LinearMap::new(f.m.vcat(&g.m)))
    }

    fn pullback(&self, f: &LinearMap, g: &LinearMap) -> Result<Option<Span<LinearMap>>> {
        if f.tgt != g.tgt {
            return Err(Error::EndpointMismatch(
                "pullback of maps with distinct targets".into(),
            ));
        }
        let (x, y) = (f.src, g.src);
        let k = f.m.hcat(&g.m.neg(self.q)).kernel(self.q);
        Ok(Some(Span {
            apex: k.rows(),
            left: LinearMap::new(k.col_slice(0, x).transpose()),
            right: LinearMap::new(k.col_slice(x, x + y).transpose()),
        }))
    }

    fn pushout(&self, e1: &LinearMap, e2: &LinearMap) -> Result<Cospan<LinearMap>> {
        if !self.is_surjective(e1) || !self.is_surjective(e2) {
            return Err(Error::Contract("pushout needs surjections".into()));
        }
        if e1.src != e2.src {
            return Err(Error::EndpointMismatch(
                "pushout of surjections with distinct sources".into(),
            ));
        }
        let (y1, y2) = (e1.tgt, e2.tgt);
        let a =
            e1.m.transpose()
                .hcat(&e2.m.transpose().neg(self.q))
                .kernel(self.q);
        Ok(Cospan {
            apex: a.rows(),
            left: LinearMap::new(a.col_slice(0, y1)),
            right: LinearMap::new(a.col_slice(y1, y1 + y2)),
        })
    }

    fn image(&self, f: &LinearMap) -> ImageFactorization<LinearMap, Subspace> {
        let (r, pivots) = f.m.transpose().rref(self.q);
        let epi = FqMat::from_fn(pivots.len(), f.src, |i, j| f.m.get(pivots[i], j));
        ImageFactorization {
            epi: LinearMap::new(epi),
            mono: Subspace {
                ambient: f.tgt,
                basis: r,
            },
        }
    }

    fn is_surjective(&self, f: &LinearMap) -> bool {
        f.m.rank(self.q) == f.tgt
    }

    fn is_injective(&self, f: &LinearMap) -> bool {
        f.m.rank(self.q) == f.src
    }

    fn sub_ambient(&self, u: &Subspace) -> Obj {
        u.ambient
    }

    fn sub_object(&self, u: &Subspace) -> Obj {
        u.dim()
    }

    fn sub_mono(&self, u: &Subspace) -> LinearMap {
        LinearMap {
            src: u.dim(),
            tgt: u.ambient,
            m: u.basis.transpose(),
        }
    }

    fn full_sub(&self, x: Obj) -> Subspace {
        Subspace {
            ambient: x,
            basis: FqMat::identity(x),
        }
    }

    fn enumerate_subobjects(&self, x: Obj) -> Result<Vec<Subspace>> {
        self.check_dim(x)?;
        let mut out = Vec::new();
        for k in 0..=x {
            for basis in self.rref_matrices(k, x) {
                out.push(Subspace { ambient: x, basis });
            }
        }
        out.sort();
        Ok(out)
    }

    fn sub_le(&self, u: &Subspace, v: &Subspace) -> bool {
        u.ambient == v.ambient && u.basis.vcat(&v.basis).rank(self.q) == v.dim()
    }

    fn sub_meet(&self, u: &Subspace, v: &Subspace) -> Option<Subspace> {
        let ann = self.annihilator(u).vcat(&self.annihilator(v));
        let basis = if ann.rows() == 0 {
            FqMat::identity(u.ambient)
        } else {
            ann.kernel(self.q)
        };
        Some(Subspace {
            ambient: u.ambient,
            basis,
        })
    }

    fn quotients(&self, x: Obj) -> Result<Vec<LinearMap>> {
        let subs = self.subobjects(x)?;
        Ok(subs
            .iter()
            .map(|k| LinearMap::new(self.annihilator(k)))
            .collect())
    }

    fn factors_through(&self, e: &LinearMap, e2: &LinearMap) -> bool {
        e.src == e2.src && e2.m.vcat(&e.m).rank(self.q) == e2.m.rank(self.q)
    }

    fn surjection_exists(&self, a: Obj, b: Obj) -> bool {
        b <= a
    }

    fn homs(&self, x: Obj, y: Obj) -> Result<Vec<LinearMap>> {
        let count = (self.q as u64)
            .checked_pow((x * y) as u32)
            .unwrap_or(u64::MAX);
        self.limits
            .check_psize(format!("linear maps {x}→{y}"), count)?;
        let q = self.q as u64;
        Ok((0..count)
            .map(|mut code| {
                LinearMap::new(FqMat::from_fn(y, x, |_, _| {
                    let v = code % q;
                    code /= q;
                    v as u32
                }))
            })
            .collect())
    }

    fn automorphism_count(&self, x: Obj) -> u128 {
        let q = self.q as u128;
        let qn = q.pow(x as u32);
        (0..x as u32).map(|i| qn - q.pow(i)).product()
    }

    fn describe(&self, x: Obj) -> ObjectHandle {
        ObjectHandle::Vect {
            q: self.q as u64,
            dim: x,
        }
    }

    fn sub_json(&self, u: &Subspace) -> serde_json::Value {
        let rows: Vec<&[u32]> = (0..u.dim()).map(|r| u.basis.row(r)).collect();
        json!({ "basis": rows })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
        let mut num = 1u64;
        let mut den = 1u64;
        for i in 0..k {
            num *= q.pow(n - i) - 1;
            den *= q.pow(i + 1) - 1;
        }
        num / den
    }

    #[test]
    fn subspace_counts_are_gaussian_binomials() {
        for (q, n) in [(2u64, 3usize), (3, 2), (2, 4)] {
            let c = FinVectFq::new(q, Limits::default()).unwrap();
            let subs = c.subobjects(n).unwrap();
            for k in 0..=n {
                let count = subs.iter().filter(|s| s.dim() == k).count() as u64;
                assert_eq!(
                    count,
                    gaussian_binomial(n as u32, k as u32, q),
                    "q={q} n={n} k={k}"
                );
            }
        }
    }

    #[test]
    fn image_factorisation_recomposes() {
        let c = FinVectFq::new(3, Limits::default()).unwrap();
        for f in c.homs(2, 2).unwrap() {
            let img = c.image(&f);
            let back = c.compose(&c.sub_mono(&img.mono), &img.epi).unwrap();
            assert_eq!(back, f);
            assert!(c.is_surjective(&img.epi));
        }
    }

    #[test]
    fn pullback_and_pushout_commute() {
        let c = FinVectFq::new(2, Limits::default()).unwrap();
        let homs = c.homs(2, 1).unwrap();
        for f in &homs {
            for g in &homs {
                let s = c.pullback(f, g).unwrap().unwrap();
                let a = c.compose(f, &s.left).unwrap();
                let b = c.compose(g, &s.right).unwrap();
                assert_eq!(a, b);
                if c.is_surjective(f) && c.is_surjective(g) {
                    let p = c.pushout(f, g).unwrap();
                    let a = c.compose(&p.left, f).unwrap();
                    let b = c.compose(&p.right, g).unwrap();
                    assert_eq!(a, b);
                }
            }
        }
    }

    #[test]
    fn general_linear_group_orders() {
        let c = FinVectFq::new(2, Limits::default()).unwrap();
        assert_eq!(c.automorphism_count(2), 6);
        assert_eq!(c.automorphism_count(3), 168);
        let isos = c
            .homs(2, 2)
            .unwrap()
            .into_iter()
            .filter(|f| c.is_iso(f))
            .count();
        assert_eq!(isos, 6);
    }

    #[test]
    fn composite_prime_rejected() {
        assert!(matches!(
            FinVectFq::new(4, Limits::default()),
            Err(Error::Unsupported(_))
        ));
    }
}
