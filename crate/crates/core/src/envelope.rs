//! The linear category of relations with degree-weighted composition:
//! Hom-space bases, composition, tensor products, duals, traces and
//! endomorphism algebras.

use std::sync::Arc;

use rayon::prelude::*;

use crate::backend::{Obj, Partition, RegularCategory, UnionFind};
use crate::degree::DegreeFunction;
use crate::error::{Error, Result};
use crate::relations::{
    ev_coev, graph_of, legs, tensor_rel, transpose, weighted_compose, Relation, Weighted,
};
use crate::scalar::Scalar;

/// Canonical basis of `Hom([x], [y])`: the subobjects of `x × y`.
#[derive(Clone, Debug)]
pub struct HomSpace<Sub> {
    pub source: Obj,
    pub target: Obj,
    basis: Arc<Vec<Sub>>,
}

impl<Sub: Clone + Ord> HomSpace<Sub> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn relation(&self, i: usize) -> Relation<Sub> {
        Relation {
            left: self.source,
            right: self.target,
            body: self.basis[i].clone(),
        }
    }

    pub fn relations(&self) -> impl Iterator<Item = Relation<Sub>> + '_ {
        (0..self.dim()).map(|i| self.relation(i))
    }

    pub fn index_of(&self, body: &Sub) -> Option<usize> {
        self.basis.binary_search(body).ok()
    }
}

/// A morphism `[source] → [target]` as coefficients over the canonical basis.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearHom<S> {
    pub source: Obj,
    pub target: Obj,
    pub coeffs: Vec<S>,
}

impl<S: Scalar> LinearHom<S> {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, c: &S) -> Self {
        LinearHom {
            source: self.source,
            target: self.target,
            coeffs: self.coeffs.iter().map(|v| v.clone() * c.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if (self.source, self.target) != (other.source, other.target) {
            return Err(Error::EndpointMismatch(
                "sum of morphisms between different objects".into(),
            ));
        }
        Ok(LinearHom {
            source: self.source,
            target: self.target,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    /// Nonzero terms.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &S)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

/// The category of relations of a backend weighted by a degree function.
#[derive(Clone, Debug)]
pub struct Envelope<C, S> {
    cat: C,
    delta: DegreeFunction<S>,
}

impl<C: RegularCategory, S: Scalar> Envelope<C, S> {
    pub fn new(cat: C, delta: DegreeFunction<S>) -> Self {
        Envelope { cat, delta }
    }

    pub fn cat(&self) -> &C {
        &self.cat
    }

    pub fn delta(&self) -> &DegreeFunction<S> {
        &self.delta
    }

    pub fn hom_basis(&self, x: Obj, y: Obj) -> Result<HomSpace<C::Sub>> {
        let basis = self.cat.subobjects(self.cat.product(x, y).obj)?;
        Ok(HomSpace {
            source: x,
            target: y,
            basis,
        })
    }

    pub fn zero(&self, x: Obj, y: Obj) -> Result<LinearHom<S>> {
        let dim = self.hom_basis(x, y)?.dim();
        Ok(LinearHom {
            source: x,
            target: y,
            coeffs: vec![S::zero(); dim],
        })
    }

    /// `coeff · r` as a vector in the canonical basis.
    pub fn from_relation(&self, r: &Relation<C::Sub>, coeff: S) -> Result<LinearHom<S>> {
        let space = self.hom_basis(r.left, r.right)?;
        let i = space
            .index_of(&r.body)
            .ok_or_else(|| Error::Invalid("relation body is not canonical".into()))?;
        let mut coeffs = vec![S::zero(); space.dim()];
        coeffs[i] = coeff;
        Ok(LinearHom {
            source: r.left,
            target: r.right,
            coeffs,
        })
    }

    pub fn basis_element(&self, x: Obj, y: Obj, i: usize) -> Result<LinearHom<S>> {
        let space = self.hom_basis(x, y)?;
        if i >= space.dim() {
            return Err(Error::Dimension(format!(
                "basis index {i} out of range {}",
                space.dim()
            )));
        }
        let mut coeffs = vec![S::zero(); space.dim()];
        coeffs[i] = S::one();
        Ok(LinearHom {
            source: x,
            target: y,
            coeffs,
        })
    }

    /// The diagonal relation.
    pub fn identity(&self, x: Obj) -> Result<LinearHom<S>> {
        self.from_relation(&graph_of(&self.cat, &self.cat.identity(x))?, S::one())
    }

    pub fn weighted(
        &self,
        r: &Relation<C::Sub>,
        s: &Relation<C::Sub>,
    ) -> Result<Option<Weighted<S, C::Sub>>> {
        weighted_compose(&self.cat, &self.delta, r, s)
    }

    /// `G ∘ F` for `F: x → y`, `G: y → z`.
    pub fn compose_hom(&self, g: &LinearHom<S>, f: &LinearHom<S>) -> Result<LinearHom<S>> {
        if f.target != g.source {
            return Err(Error::EndpointMismatch(format!(
                "compose [{}]→[{}] after [{}]→[{}]",
                g.source, g.target, f.source, f.target
            )));
        }
        let sf = self.hom_basis(f.source, f.target)?;
        let sg = self.hom_basis(g.source, g.target)?;
        let out_space = self.hom_basis(f.source, g.target)?;
        let mut out = vec![S::zero(); out_space.dim()];
        for (i, a) in f.terms() {
            let r = sf.relation(i);
            for (j, b) in g.terms() {
                if let Some(w) = self.weighted(&r, &sg.relation(j))? {
                    let k = out_space
                        .index_of(&w.rel.body)
                        .expect("canonical composite");
                    out[k] = out[k].clone() + w.coeff * a.clone() * b.clone();
                }
            }
        }
        Ok(LinearHom {
            source: f.source,
            target: g.target,
            coeffs: out,
        })
    }

    pub fn tensor_hom(&self, f: &LinearHom<S>, g: &LinearHom<S>) -> Result<LinearHom<S>> {
        let sf = self.hom_basis(f.source, f.target)?;
        let sg = self.hom_basis(g.source, g.target)?;
        let src = self.cat.product(f.source, g.source).obj;
        let tgt = self.cat.product(f.target, g.target).obj;
        let out_space = self.hom_basis(src, tgt)?;
        let mut out = vec![S::zero(); out_space.dim()];
        for (i, a) in f.terms() {
            for (j, b) in g.terms() {
                let rel = tensor_rel(&self.cat, &sf.relation(i), &sg.relation(j))?;
                let k = out_space.index_of(&rel.body).expect("canonical tensor");
                out[k] = out[k].clone() + a.clone() * b.clone();
            }
        }
        Ok(LinearHom {
            source: src,
            target: tgt,
            coeffs: out,
        })
    }

    pub fn dual_hom(&self, f: &LinearHom<S>) -> Result<LinearHom<S>> {
        let sf = self.hom_basis(f.source, f.target)?;
        let out_space = self.hom_basis(f.target, f.source)?;
        let mut out = vec![S::zero(); out_space.dim()];
        for (i, a) in f.terms() {
            let rel = transpose(&self.cat, &sf.relation(i))?;
            let k = out_space.index_of(&rel.body).expect("canonical transpose");
            out[k] = a.clone();
        }
        Ok(LinearHom {
            source: f.target,
            target: f.source,
            coeffs: out,
        })
    }

    /// Trace of a single relation `r: x → x` as the closed composite
    /// `ev ∘ (r ⊗ 1) ∘ coev`.
    pub fn relation_trace(&self, r: &Relation<C::Sub>) -> Result<S> {
        if r.left != r.right {
            return Err(Error::EndpointMismatch(
                "trace of a non-endomorphism".into(),
            ));
        }
        let x = r.left;
        let (ev, coev) = ev_coev(&self.cat, x)?;
        let id = graph_of(&self.cat, &self.cat.identity(x))?;
        let middle = tensor_rel(&self.cat, r, &id)?;
        let Some(a) = self.weighted(&coev, &middle)? else {
            return Ok(S::zero());
        };
        let Some(b) = self.weighted(&a.rel, &ev)? else {
            return Ok(S::zero());
        };
        Ok(a.coeff * b.coeff)
    }

    /// `δ(r ∩ Δ → ⋆)`, the closed form of [`Envelope::relation_trace`].
    pub fn relation_trace_direct(&self, r: &Relation<C::Sub>) -> Result<S> {
        if r.left != r.right {
            return Err(Error::EndpointMismatch(
                "trace of a non-endomorphism".into(),
            ));
        }
        let (a, b) = legs(&self.cat, r)?;
        let eq = self.equaliser(&a, &b)?;
        match eq {
            Some(obj) => self.delta.evaluate(&self.cat, &self.cat.to_terminal(obj)),
            None => Ok(S::zero()),
        }
    }

    /// Object of the equaliser of two parallel morphisms, `None` if absent.
    fn equaliser(&self, a: &C::Mor, b: &C::Mor) -> Result<Option<Obj>> {
        let x = self.cat.target(a);
        let id = self.cat.identity(x);
        let diag = self.cat.pair(&id, &id)?;
        let ab = self.cat.pair(a, b)?;
        Ok(self.cat.pullback(&ab, &diag)?.map(|s| s.apex))
    }

    pub fn trace(&self, f: &LinearHom<S>) -> Result<S> {
        if f.source != f.target {
            return Err(Error::EndpointMismatch(
                "trace of a non-endomorphism".into(),
            ));
        }
        let space = self.hom_basis(f.source, f.target)?;
        let mut acc = S::zero();
        for (i, a) in f.terms() {
            acc = acc + a.clone() * self.relation_trace(&space.relation(i))?;
        }
        Ok(acc)
    }

    pub fn dimension(&self, x: Obj) -> Result<S> {
        self.trace(&self.identity(x)?)
    }

    /// Structure constants of `End([x])`, computed in parallel over rows.
    pub fn end_algebra(&self, x: Obj) -> Result<EndAlgebra<S>> {
        let space = self.hom_basis(x, x)?;
        let n = space.dim();
        let rows: Vec<Vec<Option<(usize, S)>>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let a = space.relation(i);
                (0..n)
                    .map(|j| {
                        // b_i · b_j = b_i ∘ b_j: apply b_j first
                        let w = self.weighted(&space.relation(j), &a)?;
                        Ok(w.map(|w| {
                            (
                                space.index_of(&w.rel.body).expect("canonical product"),
                                w.coeff,
                            )
                        }))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<_>>()?;
        let unit_rel = graph_of(&self.cat, &self.cat.identity(x))?;
        let unit = space
            .index_of(&unit_rel.body)
            .expect("diagonal is canonical");
        Ok(EndAlgebra {
            obj: x,
            dim: n,
            products: rows.into_iter().flatten().collect(),
            unit,
        })
    }

    /// `dim End(𝟙) = |sub(⋆)| = 1` and the unit squares to itself.
    pub fn end_unit_check(&self) -> Result<bool> {
        let star = self.cat.terminal();
        let space = self.hom_basis(star, star)?;
        if space.dim() != 1 || self.cat.subobjects(star)?.len() != 1 {
            return Ok(false);
        }
        let id = self.identity(star)?;
        Ok(self.compose_hom(&id, &id)? == id)
    }

    /// Basis relations of `End([x])` whose core is isomorphic to `x`,
    /// returned with whether each one is the graph of an automorphism.
    pub fn full_core_relations(&self, x: Obj) -> Result<Vec<(Relation<C::Sub>, bool)>> {
        let space = self.hom_basis(x, x)?;
        let mut out = Vec::new();
        for r in space.relations() {
            if crate::relations::core(&self.cat, &r)?.obj == x {
                let (a, b) = legs(&self.cat, &r)?;
                let is_graph = self.cat.is_iso(&a) && self.cat.is_iso(&b);
                out.push((r, is_graph));
            }
        }
        Ok(out)
    }
}

/// `End([x])` with sparse structure constants: each product of two basis
/// elements is a multiple of one basis element or zero.
#[derive(Clone, Debug)]
pub struct EndAlgebra<S> {
    pub obj: Obj,
    pub dim: usize,
    products: Vec<Option<(usize, S)>>,
    pub unit: usize,
}

impl<S: Scalar> EndAlgebra<S> {
    /// `b_i · b_j` as `(k, c)` meaning `c · b_k`.
    pub fn product(&self, i: usize, j: usize) -> Option<&(usize, S)> {
        self.products[i * self.dim + j].as_ref()
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> S {
        match self.product(i, j) {
            Some((kk, c)) if *kk == k => c.clone(),
            _ => S::zero(),
        }
    }

    pub fn mul(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, ca) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, cb) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                if let Some((k, c)) = self.product(i, j) {
                    out[*k] = out[*k].clone() + c.clone() * ca.clone() * cb.clone();
                }
            }
        }
        out
    }

    pub fn unit_vector(&self) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[self.unit] = S::one();
        v
    }

    pub fn basis_vector(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// Exhaustive `(b_i b_j) b_k = b_i (b_j b_k)`.
    pub fn is_associative(&self) -> bool {
        let n = self.dim;
        (0..n).into_par_iter().all(|i| {
            (0..n).all(|j| {
                (0..n).all(|k| {
                    let left = self.product(i, j).and_then(|(ij, c1)| {
                        self.product(*ij, k)
                            .map(|(r, c2)| (*r, c1.clone() * c2.clone()))
                    });
                    let right = self.product(j, k).and_then(|(jk, c1)| {
                        self.product(i, *jk)
                            .map(|(r, c2)| (*r, c1.clone() * c2.clone()))
                    });
                    let norm = |p: Option<(usize, S)>| p.filter(|(_, c)| !c.is_zero());
                    norm(left) == norm(right)
                })
            })
        })
    }

    /// Whether the unit acts as identity on both sides.
    pub fn unit_is_identity(&self) -> bool {
        (0..self.dim).all(|i| {
            let e = self.basis_vector(i);
            self.mul(&self.unit_vector(), &e) == e && self.mul(&e, &self.unit_vector()) == e
        })
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> EndAlgebra<T> {
        EndAlgebra {
            obj: self.obj,
            dim: self.dim,
            products: self
                .products
                .iter()
                .map(|p| p.as_ref().map(|(k, c)| (*k, f(c))))
                .collect(),
            unit: self.unit,
        }
    }

    /// Rows `(i, j, k, c)` for every nonzero structure constant.
    pub fn table(&self) -> Vec<(usize, usize, usize, S)> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if let Some((k, c)) = self.product(i, j) {
                    if !c.is_zero() {
                        out.push((i, j, *k, c.clone()));
                    }
                }
            }
        }
        out
    }
}

/// An object of the idempotent completion: `(⊕ summands, p)` with
/// `p² = p`. `blocks[j][i]` is the component `[summands[i]] → [summands[j]]`.
#[derive(Clone, Debug)]
pub struct TObject<S> {
    pub summands: Vec<Obj>,
    pub blocks: Vec<Vec<LinearHom<S>>>,
}

impl<S: Scalar> TObject<S> {
    pub fn new<C: RegularCategory>(
        env: &Envelope<C, S>,
        summands: Vec<Obj>,
        blocks: Vec<Vec<LinearHom<S>>>,
    ) -> Result<Self> {
        let n = summands.len();
        if blocks.len() != n || blocks.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension(
                "idempotent block matrix has the wrong shape".into(),
            ));
        }
        for (j, row) in blocks.iter().enumerate() {
            for (i, b) in row.iter().enumerate() {
                if (b.source, b.target) != (summands[i], summands[j]) {
                    return Err(Error::EndpointMismatch(format!(
                        "block ({j},{i}) has the wrong endpoints"
                    )));
                }
            }
        }
        let obj = TObject { summands, blocks };
        let sq = block_compose(
            env,
            &obj.blocks,
            &obj.blocks,
            &obj.summands,
            &obj.summands,
            &obj.summands,
        )?;
        if sq != obj.blocks {
            return Err(Error::Contract("block matrix is not idempotent".into()));
        }
        Ok(obj)
    }

    /// `([x], 1)`.
    pub fn plain<C: RegularCategory>(env: &Envelope<C, S>, x: Obj) -> Result<Self> {
        Ok(TObject {
            summands: vec![x],
            blocks: vec![vec![env.identity(x)?]],
        })
    }
}

/// `G ∘ F` of block matrices `F: ⊕a → ⊕b`, `G: ⊕b → ⊕c`.
pub fn block_compose<C: RegularCategory, S: Scalar>(
    env: &Envelope<C, S>,
    g: &[Vec<LinearHom<S>>],
    f: &[Vec<LinearHom<S>>],
    a: &[Obj],
    b: &[Obj],
    c: &[Obj],
) -> Result<Vec<Vec<LinearHom<S>>>> {
    let mut out = Vec::with_capacity(c.len());
    for (k, &ck) in c.iter().enumerate() {
        let mut row = Vec::with_capacity(a.len());
        for (i, &ai) in a.iter().enumerate() {
            let mut acc = env.zero(ai, ck)?;
            for j in 0..b.len() {
                acc = acc.add(&env.compose_hom(&g[k][j], &f[j][i])?)?;
            }
            row.push(acc);
        }
        out.push(row);
    }
    Ok(out)
}

/// Diagrammatic composition of set-partition diagrams: `p` on `m + n`
/// points, `q` on `n + k` points. Returns the composite on `m + k` points
/// and the number of components living only in the middle row.
pub fn partition_oracle_compose(
    p: &Partition,
    m: usize,
    n: usize,
    q: &Partition,
    k: usize,
) -> Result<(Partition, usize)> {
    if p.len() != m + n || q.len() != n + k {
        return Err(Error::Dimension("diagram shapes do not match".into()));
    }
    // nodes: top 0..m, middle m..m+n, bottom m+n..m+n+k
    let total = m + n + k;
    let mut uf = UnionFind::new(total);
    let mut first = vec![usize::MAX; p.num_blocks()];
    for (i, &l) in p.labels().iter().enumerate() {
        if first[l] == usize::MAX {
            first[l] = i;
        } else {
            uf.union(first[l], i);
        }
    }
    let mut first = vec![usize::MAX; q.num_blocks()];
    for (i, &l) in q.labels().iter().enumerate() {
        let node = m + i;
        if first[l] == usize::MAX {
            first[l] = node;
        } else {
            uf.union(first[l], node);
        }
    }
    let labels = uf.labels();
    let outer: Vec<usize> = (0..m).chain(m + n..total).map(|i| labels[i]).collect();
    let mut middle_only: Vec<usize> = (m..m + n)
        .map(|i| labels[i])
        .filter(|l| !outer.contains(l))
        .collect();
    middle_only.sort_unstable();
    middle_only.dedup();
    Ok((Partition::from_labels(&outer), middle_only.len()))
}
