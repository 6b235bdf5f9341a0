//! Gram determinants, obstruction elements ω, the non-singularity test,
//! tensor radicals and the block structure of endomorphism algebras.

use std::collections::HashMap;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

use crate::backend::{direct_image, require_surjective, BackendTag, FqMat, Obj, RegularCategory};
use crate::degree::DegreeFunction;
use crate::envelope::{block_compose, EndAlgebra, Envelope, LinearHom, TObject};
use crate::error::{Error, Result};
use crate::linalg::{rational_roots, DenseMatrix};
use crate::moebius::{moebius, PartialSemilattice};
use crate::relations::{is_proper_subquotient, Subquotient};
use crate::scalar::{FieldScalar, MultiPoly, Rational, Scalar};

#[derive(Clone, Debug)]
pub struct OmegaTerm<Sub, S> {
    pub w: Sub,
    pub mu: i64,
    pub delta: S,
}

/// `ω_e = Σ_{w ⊆ x, e(w) = y} μ(w, x) δ(w ↠ y)` with its terms.
#[derive(Clone, Debug)]
pub struct OmegaValue<M, Sub, S> {
    pub e: M,
    pub value: S,
    pub terms: Vec<OmegaTerm<Sub, S>>,
}

pub fn omega<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    e: &C::Mor,
) -> Result<OmegaValue<C::Mor, C::Sub, S>> {
    require_surjective(cat, e)?;
    let ctx = SubLattice::new(cat, cat.source(e))?;
    omega_in(cat, delta, e, &ctx)
}

/// [`omega`] for many surjections, sharing the Möbius table of each source.
pub fn omegas<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    es: &[C::Mor],
) -> Result<Vec<OmegaValue<C::Mor, C::Sub, S>>> {
    let mut ctxs: HashMap<Obj, SubLattice<C::Sub>> = HashMap::new();
    for e in es {
        require_surjective(cat, e)?;
        let x = cat.source(e);
        if let std::collections::hash_map::Entry::Vacant(v) = ctxs.entry(x) {
            v.insert(SubLattice::new(cat, x)?);
        }
    }
    es.par_iter()
        .map(|e| omega_in(cat, delta, e, &ctxs[&cat.source(e)]))
        .collect()
}

struct SubLattice<Sub> {
    subs: Arc<Vec<Sub>>,
    mu_top: Vec<i64>,
}

impl<Sub: Ord> SubLattice<Sub> {
    fn new<C: RegularCategory<Sub = Sub>>(cat: &C, x: Obj) -> Result<Self> {
        let (lattice, subs) = PartialSemilattice::of_subobjects(cat, x)?;
        let mu = moebius(&lattice);
        let top = subs
            .binary_search(&cat.full_sub(x))
            .expect("full subobject is canonical");
        let mu_top = (0..subs.len()).map(|i| mu.get(i, top)).collect();
        Ok(SubLattice { subs, mu_top })
    }
}

fn omega_in<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    e: &C::Mor,
    ctx: &SubLattice<C::Sub>,
) -> Result<OmegaValue<C::Mor, C::Sub, S>> {
    let full_y = cat.full_sub(cat.target(e));
    let mut terms = Vec::new();
    let mut value = S::zero();
    for (w, &m) in ctx.subs.iter().zip(&ctx.mu_top) {
        if m == 0 || direct_image(cat, e, w)? != full_y {
            continue;
        }
        let restricted = cat.image(&cat.compose(e, &cat.sub_mono(w))?).epi;
        let d = delta.evaluate(cat, &restricted)?;
        value = value + S::from_int(m) * d.clone();
        terms.push(OmegaTerm {
            w: w.clone(),
            mu: m,
            delta: d,
        });
    }
    Ok(OmegaValue {
        e: e.clone(),
        value,
        terms,
    })
}

/// Whether the `w = x` term is the only one whose degree equals `δ(e)`,
/// so that `ω_e` cannot vanish identically.
pub fn leading_monomial_unique<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    om: &OmegaValue<C::Mor, C::Sub, S>,
) -> Result<bool> {
    let de = delta.evaluate(cat, &om.e)?;
    let full = cat.full_sub(cat.source(&om.e));
    let hits: Vec<_> = om.terms.iter().filter(|t| t.delta == de).collect();
    Ok(hits.len() == 1 && hits[0].w == full && hits[0].mu == 1)
}

/// Gram matrix `β(u, v) = δ(u ∧ v → ⋆)` on `sub(x)` and its factorisation.
#[derive(Clone, Debug)]
pub struct GramReport<Sub, S> {
    pub x: Obj,
    pub subobjects: Arc<Vec<Sub>>,
    pub matrix: DenseMatrix<S>,
    pub det: S,
    /// `ω_{u ↠ ⋆}` for each `u ∈ sub(x)`, in basis order.
    pub omega_factors: Vec<S>,
    pub factorization_holds: bool,
}

pub fn gram_omega<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    x: Obj,
) -> Result<GramReport<C::Sub, S>> {
    if cat.subobjects(cat.terminal())?.len() != 1 {
        return Err(Error::Unsupported(
            "the terminal object has proper subobjects".into(),
        ));
    }
    let subs = cat.subobjects(x)?;
    let n = subs.len();
    let mut to_star: HashMap<Obj, S> = HashMap::new();
    let mut phi = |obj: Obj| -> Result<S> {
        if let Some(v) = to_star.get(&obj) {
            return Ok(v.clone());
        }
        let v = delta.evaluate(cat, &cat.to_terminal(obj))?;
        to_star.insert(obj, v.clone());
        Ok(v)
    };
    let mut entries = Vec::with_capacity(n * n);
    for u in subs.iter() {
        for v in subs.iter() {
            entries.push(match cat.sub_meet(u, v) {
                Some(m) => phi(cat.sub_object(&m))?,
                None => S::zero(),
            });
        }
    }
    let mut it = entries.into_iter();
    let matrix = DenseMatrix::from_fn(n, n, |_, _| it.next().expect("n² entries"));
    let det = matrix.determinant()?;

    let objects: Vec<Obj> = subs.iter().map(|u| cat.sub_object(u)).collect();
    let mut distinct = objects.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let omegas: HashMap<Obj, S> = distinct
        .par_iter()
        .map(|&o| Ok((o, omega(cat, delta, &cat.to_terminal(o))?.value)))
        .collect::<Result<_>>()?;
    let omega_factors: Vec<S> = objects.iter().map(|o| omegas[o].clone()).collect();
    let product = omega_factors
        .iter()
        .fold(S::one(), |acc, w| acc * w.clone());
    Ok(GramReport {
        x,
        factorization_holds: product == det,
        subobjects: subs,
        matrix,
        det,
        omega_factors,
    })
}

/// Surjections out of `x` (one per quotient class) that admit no
/// factorisation through a strictly intermediate quotient.
pub fn indecomposable_surjections<C: RegularCategory>(cat: &C, x: Obj) -> Result<Vec<C::Mor>> {
    let quotients = cat.quotients(x)?;
    Ok(quotients
        .iter()
        .filter(|e| !cat.is_iso(e))
        .filter(|e| {
            !quotients
                .iter()
                .any(|m| !cat.is_iso(m) && cat.factors_through(e, m) && !cat.factors_through(m, e))
        })
        .cloned()
        .collect())
}

/// ω over every indecomposable surjection with source at most `bound`,
/// for the symbolic member of the backend's family.
#[derive(Clone, Debug, Serialize)]
pub struct SingularReport {
    pub bound: Obj,
    /// `(source, target, ω)` for each distinct endpoint pair.
    pub omegas: Vec<(Obj, Obj, String)>,
    /// Product of the distinct ω.
    pub product: String,
    pub singular_params: Vec<Rational>,
    #[serde(skip)]
    pub omega_polys: Vec<(Obj, Obj, MultiPoly)>,
}

pub fn singular_parameters<C: RegularCategory>(cat: &C, bound: Obj) -> Result<SingularReport> {
    let delta = DegreeFunction::symbolic(C::TAG);
    let mut polys: Vec<(Obj, Obj, MultiPoly)> = Vec::new();
    for x in 0..=bound {
        let es = indecomposable_surjections(cat, x)?;
        for om in omegas(cat, &delta, &es)? {
            let key = (x, cat.target(&om.e));
            let w = om.value;
            match polys.iter().find(|(a, b, _)| (*a, *b) == key) {
                Some((_, _, p)) if *p != w => {
                    return Err(Error::Contract(format!(
                        "ω differs between surjections {}→{}: {p} vs {w}",
                        key.0, key.1
                    )))
                }
                Some(_) => {}
                None => polys.push((key.0, key.1, w)),
            }
        }
    }
    let mut distinct: Vec<&MultiPoly> = Vec::new();
    for (_, _, p) in &polys {
        if !distinct.contains(&p) {
            distinct.push(p);
        }
    }
    let product = distinct.iter().fold(MultiPoly::one(), |acc, p| &acc * *p);
    let singular_params = rational_roots(&product)?
        .into_iter()
        .map(|r| r.value)
        .collect();
    Ok(SingularReport {
        bound,
        omegas: polys
            .iter()
            .map(|(a, b, p)| (*a, *b, p.to_string()))
            .collect(),
        product: product.to_string(),
        singular_params,
        omega_polys: polys,
    })
}

#[derive(Clone, Debug)]
pub struct Verdict<M, S> {
    pub nonsingular: bool,
    pub checked: usize,
    pub witness: Option<(M, S)>,
}

/// Evaluates ω on every indecomposable surjection with source at most
/// `bound` and reports the first vanishing one.
pub fn nonsingularity_verdict<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    bound: Obj,
) -> Result<Verdict<C::Mor, S>> {
    let mut checked = 0;
    for x in 0..=bound {
        let es = indecomposable_surjections(cat, x)?;
        for om in omegas(cat, delta, &es)? {
            checked += 1;
            if om.value.is_zero() {
                return Ok(Verdict {
                    nonsingular: false,
                    checked,
                    witness: Some((om.e, om.value)),
                });
            }
        }
    }
    Ok(Verdict {
        nonsingular: true,
        checked,
        witness: None,
    })
}

#[derive(Clone, Debug)]
pub struct MultiplicativityReport<S> {
    pub composite: S,
    pub product: S,
    pub holds: bool,
}

/// `ω_{e ∘ ē} = ω_e ω_ē` for `ē: x ↠ y`, `e: y ↠ z`.
pub fn omega_multiplicativity_check<C: RegularCategory, S: Scalar>(
    cat: &C,
    delta: &DegreeFunction<S>,
    ebar: &C::Mor,
    e: &C::Mor,
) -> Result<MultiplicativityReport<S>> {
    let composite = omega(cat, delta, &cat.compose(e, ebar)?)?.value;
    let product = omega(cat, delta, e)?.value * omega(cat, delta, ebar)?.value;
    Ok(MultiplicativityReport {
        holds: composite == product,
        composite,
        product,
    })
}

/// Trace pairing `tr(g ∘ f)`; rows run over `Hom(y, x)`, columns over
/// `Hom(x, y)`.
pub fn pairing_matrix<C: RegularCategory, S: Scalar>(
    env: &Envelope<C, S>,
    x: Obj,
    y: Obj,
) -> Result<DenseMatrix<S>> {
    let fs = env.hom_basis(x, y)?;
    let gs = env.hom_basis(y, x)?;
    let end = env.hom_basis(x, x)?;
    let traces: Vec<S> = (0..end.dim())
        .into_par_iter()
        .map(|k| env.relation_trace(&end.relation(k)))
        .collect::<Result<_>>()?;
    let rows: Vec<Vec<S>> = (0..gs.dim())
        .into_par_iter()
        .map(|i| {
            let g = gs.relation(i);
            (0..fs.dim())
                .map(|j| {
                    Ok(match env.weighted(&fs.relation(j), &g)? {
                        Some(w) => {
                            let k = end.index_of(&w.rel.body).expect("canonical composite");
                            w.coeff * traces[k].clone()
                        }
                        None => S::zero(),
                    })
                })
                .collect::<Result<Vec<S>>>()
        })
        .collect::<Result<_>>()?;
    DenseMatrix::from_rows(rows).or_else(|_| Ok(DenseMatrix::zeros(gs.dim(), fs.dim())))
}

#[derive(Clone, Debug)]
pub struct RadicalReport<S> {
    pub hom_dim: usize,
    pub radical_dim: usize,
    /// Basis of the radical in the coordinates of the Hom-space.
    pub basis: Vec<Vec<S>>,
}

/// `𝒩(x, y) = {f : tr(g f) = 0 for all g}`.
pub fn radical<C: RegularCategory, S: FieldScalar>(
    env: &Envelope<C, S>,
    x: Obj,
    y: Obj,
) -> Result<RadicalReport<S>> {
    let m = pairing_matrix(env, x, y)?;
    let hom_dim = env.hom_basis(x, y)?.dim();
    let basis = if m.rows() == 0 {
        (0..hom_dim)
            .map(|i| {
                (0..hom_dim)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect()
    } else {
        m.kernel_basis()
    };
    Ok(RadicalReport {
        hom_dim,
        radical_dim: basis.len(),
        basis,
    })
}

fn flatten<S: Clone>(blocks: &[Vec<LinearHom<S>>]) -> Vec<S> {
    blocks
        .iter()
        .flat_map(|row| row.iter().flat_map(|h| h.coeffs.iter().cloned()))
        .collect()
}

/// Spanning set `q ∘ b ∘ p` of `Hom(X, Y)` for idempotents `p`, `q`.
fn tobject_span<C: RegularCategory, S: FieldScalar>(
    env: &Envelope<C, S>,
    from: &TObject<S>,
    to: &TObject<S>,
) -> Result<Vec<Vec<Vec<LinearHom<S>>>>> {
    let mut out = Vec::new();
    for (j, &yj) in to.summands.iter().enumerate() {
        for (i, &xi) in from.summands.iter().enumerate() {
            let dim = env.hom_basis(xi, yj)?.dim();
            for k in 0..dim {
                let mut blocks = Vec::new();
                for (jj, &y2) in to.summands.iter().enumerate() {
                    let mut row = Vec::new();
                    for (ii, &x2) in from.summands.iter().enumerate() {
                        row.push(if (ii, jj) == (i, j) {
                            env.basis_element(x2, y2, k)?
                        } else {
                            env.zero(x2, y2)?
                        });
                    }
                    blocks.push(row);
                }
                let left = block_compose(
                    env,
                    &blocks,
                    &from.blocks,
                    &from.summands,
                    &from.summands,
                    &to.summands,
                )?;
                let both = block_compose(
                    env,
                    &to.blocks,
                    &left,
                    &from.summands,
                    &to.summands,
                    &to.summands,
                )?;
                out.push(both);
            }
        }
    }
    Ok(out)
}

/// Independent subset of `span` (by flattened coordinates).
fn independent<S: FieldScalar>(span: Vec<Vec<Vec<LinearHom<S>>>>) -> Vec<Vec<Vec<LinearHom<S>>>> {
    let mut kept: Vec<Vec<Vec<LinearHom<S>>>> = Vec::new();
    let mut rows: Vec<Vec<S>> = Vec::new();
    for m in span {
        let v = flatten(&m);
        let mut trial = rows.clone();
        trial.push(v.clone());
        let rank = DenseMatrix::from_rows(trial).map(|d| d.rank()).unwrap_or(0);
        if rank > rows.len() {
            rows.push(v);
            kept.push(m);
        }
    }
    kept
}

/// Radical of `Hom(X, Y)` between objects of the idempotent completion.
/// The basis is expressed in coordinates of an internally chosen basis
/// of `Hom(X, Y)`; only the dimensions are canonical.
pub fn radical_tobjects<C: RegularCategory, S: FieldScalar>(
    env: &Envelope<C, S>,
    from: &TObject<S>,
    to: &TObject<S>,
) -> Result<RadicalReport<S>> {
    let fs = independent(tobject_span(env, from, to)?);
    let gs = independent(tobject_span(env, to, from)?);
    let mut rows = Vec::with_capacity(gs.len());
    for g in &gs {
        let mut row = Vec::with_capacity(fs.len());
        for f in &fs {
            let gf = block_compose(env, g, f, &from.summands, &to.summands, &from.summands)?;
            let mut tr = S::zero();
            for (i, block) in gf.iter().enumerate() {
                tr = tr + env.trace(&block[i])?;
            }
            row.push(tr);
        }
        rows.push(row);
    }
    let hom_dim = fs.len();
    let basis = if rows.is_empty() {
        (0..hom_dim)
            .map(|i| {
                (0..hom_dim)
                    .map(|j| if i == j { S::one() } else { S::zero() })
                    .collect()
            })
            .collect()
    } else {
        DenseMatrix::from_rows(rows)?.kernel_basis()
    };
    Ok(RadicalReport {
        hom_dim,
        radical_dim: basis.len(),
        basis,
    })
}

/// A simple block of a semisimple algebra over ℚ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Block {
    /// `M_d(ℚ)`.
    Split { d: usize },
    /// A block whose center does not split over ℚ.
    Unsplit { dim: usize, center_dim: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockReport {
    pub quotient_dim: usize,
    pub center_dim: usize,
    pub blocks: Vec<Block>,
}

impl BlockReport {
    pub fn split_dims(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .blocks
            .iter()
            .filter_map(|b| match b {
                Block::Split { d } => Some(*d),
                Block::Unsplit { .. } => None,
            })
            .collect();
        d.sort_unstable();
        d
    }

    pub fn sum_of_squares(&self) -> usize {
        self.blocks
            .iter()
            .map(|b| match b {
                Block::Split { d } => d * d,
                Block::Unsplit { dim, .. } => *dim,
            })
            .sum()
    }
}

/// Finite-dimensional algebra with dense structure constants.
struct DenseAlgebra<S> {
    dim: usize,
    /// `mult[i][j]` = coordinates of `b_i b_j`.
    mult: Vec<Vec<Vec<S>>>,
    unit: Vec<S>,
}

impl<S: FieldScalar> DenseAlgebra<S> {
    fn mul(&self, a: &[S], b: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.dim];
        for (i, ca) in a.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            for (j, cb) in b.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                let c = ca.clone() * cb.clone();
                for (o, m) in out.iter_mut().zip(&self.mult[i][j]) {
                    if !m.is_zero() {
                        *o = o.clone() + c.clone() * m.clone();
                    }
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); self.dim];
        v[i] = S::one();
        v
    }

    /// `A / I` for an ideal with basis `ideal`.
    fn quotient(alg: &EndAlgebra<S>, ideal: &[Vec<S>]) -> Result<Self> {
        let n = alg.dim;
        let (pivots, reduced) = if ideal.is_empty() {
            (Vec::new(), DenseMatrix::zeros(0, n))
        } else {
            let mut m = DenseMatrix::from_rows(ideal.to_vec())?;
            let p = m.rref();
            (p, m)
        };
        let keep: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        let project = |v: &[S]| -> Vec<S> {
            let mut v = v.to_vec();
            for (r, &p) in pivots.iter().enumerate() {
                let c = v[p].clone();
                if !c.is_zero() {
                    for (k, x) in v.iter_mut().enumerate() {
                        *x = x.clone() - c.clone() * reduced[(r, k)].clone();
                    }
                }
            }
            keep.iter().map(|&k| v[k].clone()).collect()
        };
        let mult = keep
            .iter()
            .map(|&i| {
                keep.iter()
                    .map(|&j| project(&alg.mul(&alg.basis_vector(i), &alg.basis_vector(j))))
                    .collect()
            })
            .collect();
        Ok(DenseAlgebra {
            dim: keep.len(),
            mult,
            unit: project(&alg.unit_vector()),
        })
    }

    fn from_end(alg: &EndAlgebra<S>) -> Self {
        let n = alg.dim;
        DenseAlgebra {
            dim: n,
            mult: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| alg.mul(&alg.basis_vector(i), &alg.basis_vector(j)))
                        .collect()
                })
                .collect(),
            unit: alg.unit_vector(),
        }
    }

    /// Basis of the center.
    fn center(&self) -> Vec<Vec<S>> {
        let n = self.dim;
        // z = Σ z_k b_k commutes with every b_i
        let mut rows = Vec::with_capacity(n * n);
        for i in 0..n {
            for r in 0..n {
                rows.push(
                    (0..n)
                        .map(|k| self.mult[k][i][r].clone() - self.mult[i][k][r].clone())
                        .collect::<Vec<S>>(),
                );
            }
        }
        if rows.is_empty() {
            return Vec::new();
        }
        DenseMatrix::from_rows(rows)
            .expect("square system")
            .kernel_basis()
    }

    fn span_rank(&self, vecs: &[Vec<S>]) -> usize {
        if vecs.is_empty() {
            return 0;
        }
        DenseMatrix::from_rows(vecs.to_vec())
            .expect("uniform")
            .rank()
    }

    /// `dim(e A)`.
    fn left_ideal_dim(&self, e: &[S]) -> usize {
        let prods: Vec<Vec<S>> = (0..self.dim).map(|i| self.mul(e, &self.basis(i))).collect();
        self.span_rank(&prods)
    }
}

impl DenseAlgebra<Rational> {
    /// Minimal polynomial of `z`, ascending coefficients, monic.
    fn min_poly(&self, z: &[Rational]) -> Vec<Rational> {
        let mut powers = vec![self.unit.clone()];
        loop {
            let next = self.mul(powers.last().unwrap(), z);
            // solve Σ c_k z^k = next
            let m = DenseMatrix::from_fn(self.dim, powers.len(), |r, c| powers[c][r].clone());
            if let Some(c) = m.solve(&next) {
                let mut poly: Vec<Rational> = c.into_iter().map(|v| -v).collect();
                poly.push(Rational::one());
                return poly;
            }
            powers.push(next);
        }
    }

    fn eval_poly(&self, coeffs: &[Rational], z: &[Rational]) -> Vec<Rational> {
        let mut acc = vec![Rational::zero(); self.dim];
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, z);
            for (a, u) in acc.iter_mut().zip(&self.unit) {
                *a = a.clone() + c.clone() * u.clone();
            }
        }
        acc
    }
}

use num_traits::{One, Zero};

fn isqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r.saturating_sub(1)..=r + 1).find(|&d| d * d == n)
}

/// Block decomposition of `A / I` over ℚ through the center: a random
/// central element is split by the rational roots of its minimal
/// polynomial; the part of the center without rational eigenvalues is
/// reported as unsplit.
pub fn semisimple_block_dims(
    alg: &EndAlgebra<Rational>,
    radical_basis: &[Vec<Rational>],
) -> Result<BlockReport> {
    let b = DenseAlgebra::quotient(alg, radical_basis)?;
    let center = b.center();
    let cdim = center.len();
    if b.dim == 0 {
        return Ok(BlockReport {
            quotient_dim: 0,
            center_dim: 0,
            blocks: Vec::new(),
        });
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for attempt in 0..64 {
        let z: Vec<Rational> = if attempt == 0 && cdim == 1 {
            center[0].clone()
        } else {
            let mut z = vec![Rational::zero(); b.dim];
            for c in &center {
                let k = Rational::from_integer(rng.gen_range(-7..=7));
                for (a, v) in z.iter_mut().zip(c) {
                    *a = a.clone() + k.clone() * v.clone();
                }
            }
            z
        };
        let mp = b.min_poly(&z);
        if mp.len() - 1 < cdim {
            continue;
        }
        let poly = MultiPoly::from_dense("z", &mp);
        let roots = rational_roots(&poly)?;
        if roots.iter().any(|r| r.multiplicity > 1) {
            return Err(Error::Contract("quotient algebra is not semisimple".into()));
        }
        let mut blocks = Vec::new();
        let mut rest = b.unit.clone();
        for root in &roots {
            let cofactor = crate::scalar::uni::deflate(&mp, &root.value);
            let scale = crate::scalar::uni::eval(&cofactor, &root.value);
            let mut e = b.eval_poly(&cofactor, &z);
            let inv = scale.recip().expect("simple root");
            for v in e.iter_mut() {
                *v = v.clone() * inv.clone();
            }
            for (r, v) in rest.iter_mut().zip(&e) {
                *r = r.clone() - v.clone();
            }
            let dim = b.left_ideal_dim(&e);
            let cd = b.span_rank(&center.iter().map(|c| b.mul(&e, c)).collect::<Vec<_>>());
            blocks.push(match isqrt(dim) {
                Some(d) if cd == 1 => Block::Split { d },
                _ => Block::Unsplit {
                    dim,
                    center_dim: cd,
                },
            });
        }
        if rest.iter().any(|v| !v.is_zero()) {
            let dim = b.left_ideal_dim(&rest);
            let cd = b.span_rank(&center.iter().map(|c| b.mul(&rest, c)).collect::<Vec<_>>());
            blocks.push(Block::Unsplit {
                dim,
                center_dim: cd,
            });
        }
        return Ok(BlockReport {
            quotient_dim: b.dim,
            center_dim: cdim,
            blocks,
        });
    }
    Err(Error::Contract("no generic central element found".into()))
}

/// Number of partitions of `m`.
pub fn partition_count(m: usize) -> usize {
    let mut p = vec![0usize; m + 1];
    p[0] = 1;
    for part in 1..=m {
        for k in part..=m {
            p[k] += p[k - part];
        }
    }
    p[m]
}

/// Number of conjugacy classes of `GL_d(F_q)`, by brute force.
pub fn gl_conjugacy_classes(q: u32, d: usize, max_elements: u64) -> Result<usize> {
    let total = (q as u64).checked_pow((d * d) as u32).unwrap_or(u64::MAX);
    if total > max_elements {
        return Err(Error::ResourceBound {
            what: format!("matrices of GL_{d}(F_{q})"),
            key: "max_psize",
            limit: max_elements,
            required: total,
        });
    }
    let group: Vec<(FqMat, FqMat)> = (0..total)
        .filter_map(|mut code| {
            let m = FqMat::from_fn(d, d, |_, _| {
                let v = (code % q as u64) as u32;
                code /= q as u64;
                v
            });
            m.inverse(q).map(|inv| (m, inv))
        })
        .collect();
    let index: HashMap<&FqMat, usize> =
        group.iter().enumerate().map(|(i, (m, _))| (m, i)).collect();
    let mut seen = vec![false; group.len()];
    let mut classes = 0;
    for h in 0..group.len() {
        if seen[h] {
            continue;
        }
        classes += 1;
        for (g, g_inv) in &group {
            let c = g.mul(&group[h].0, q).mul(g_inv, q);
            seen[index[&c]] = true;
        }
    }
    Ok(classes)
}

/// `(y, #irreducible representations of Aut(y))` for every `y ⪯ x`.
pub fn predicted_census<C: RegularCategory>(cat: &C, x: Obj, q: u32) -> Result<Vec<(Obj, usize)>> {
    let mut out = Vec::new();
    for y in 0..=x {
        if is_proper_subquotient(cat, y, x)? == Subquotient::NotBelow {
            continue;
        }
        let irreps = match C::TAG {
            BackendTag::SetOp => partition_count(y),
            BackendTag::Vect => gl_conjugacy_classes(q, y, cat.limits().max_psize)?,
        };
        out.push((y, irreps));
    }
    Ok(out)
}

/// Generic-parameter data of `End([x])` over ℚ(t).
#[derive(Clone, Debug, Serialize)]
pub struct SymbolicCensus {
    pub algebra_dim: usize,
    /// Determinant of the trace form, as a polynomial in `t`.
    pub trace_form_det: String,
    pub radical_dim: usize,
    pub center_dim: usize,
}

/// Radical and center dimension of `End([x])` for symbolic `t`. The
/// radical vanishes iff the trace-form determinant is a nonzero
/// polynomial; the center is computed over ℚ(t).
pub fn symbolic_census<C: RegularCategory>(cat: &C, x: Obj) -> Result<SymbolicCensus> {
    let env = Envelope::new(cat.clone(), DegreeFunction::symbolic(C::TAG));
    let form = pairing_matrix(&env, x, x)?;
    let det = form.determinant()?;
    let radical_dim = if det.is_zero() {
        let rf = form.map(|p| crate::scalar::RatFunc::from_poly(p.clone()));
        rf.cols() - rf.rank()
    } else {
        0
    };
    let alg = env
        .end_algebra(x)?
        .map(|p| crate::scalar::RatFunc::from_poly(p.clone()));
    let center_dim = DenseAlgebra::from_end(&alg).center().len();
    Ok(SymbolicCensus {
        algebra_dim: alg.dim,
        trace_form_det: det.to_string(),
        radical_dim,
        center_dim,
    })
}

/// Block data of `End([x]) / 𝒩` at a rational parameter.
pub fn rational_blocks<C: RegularCategory>(
    cat: &C,
    x: Obj,
    t: &Rational,
) -> Result<(RadicalReport<Rational>, BlockReport)> {
    let env = Envelope::new(cat.clone(), DegreeFunction::natural(C::TAG, t.clone()));
    let rad = radical(&env, x, x)?;
    let alg = env.end_algebra(x)?;
    let blocks = semisimple_block_dims(&alg, &rad.basis)?;
    Ok((rad, blocks))
}

/// Sources up to which ω must be nonzero for `End([x])` to be semisimple.
pub fn semisimplicity_bound(x: Obj) -> Obj {
    (2 * x).saturating_sub(1)
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusReport {
    pub x: Obj,
    pub subquotients: Vec<(Obj, usize)>,
    pub predicted_blocks: usize,
    pub symbolic: SymbolicCensus,
    /// Parameter used for the block splitting, verified non-singular.
    pub t: Rational,
    pub blocks: BlockReport,
    pub agrees: bool,
}

/// Compares the predicted number of simple blocks with the center
/// dimension at symbolic `t` and the block split at a rational `t`
/// that passed the non-singularity test.
pub fn simple_census<C: RegularCategory>(
    cat: &C,
    x: Obj,
    q: u32,
    t: &Rational,
) -> Result<CensusReport> {
    let delta = DegreeFunction::natural(C::TAG, t.clone());
    let verdict = nonsingularity_verdict(cat, &delta, semisimplicity_bound(x))?;
    if !verdict.nonsingular {
        return Err(Error::Contract(format!(
            "t = {t} is singular for objects of size {x}"
        )));
    }
    let subquotients = predicted_census(cat, x, q)?;
    let predicted_blocks = subquotients.iter().map(|(_, k)| k).sum();
    let symbolic = symbolic_census(cat, x)?;
    let (rad, blocks) = rational_blocks(cat, x, t)?;
    let agrees = symbolic.radical_dim == 0
        && symbolic.center_dim == predicted_blocks
        && rad.radical_dim == 0
        && blocks.blocks.len() == predicted_blocks
        && blocks.sum_of_squares() == symbolic.algebra_dim;
    Ok(CensusReport {
        x,
        subquotients,
        predicted_blocks,
        symbolic,
        t: t.clone(),
        blocks,
        agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{FinSetOp, FinVectFq, Limits};

    fn t() -> MultiPoly {
        MultiPoly::var("t")
    }

    fn lin(c: i64) -> MultiPoly {
        &t() - &MultiPoly::constant(Rational::from_integer(c))
    }

    #[test]
    fn omega_examples() {
        let cat = FinSetOp::default();
        let e = FinSetOp::from_injection(2, 3, vec![0, 1]).unwrap();
        assert_eq!(
            omega(&cat, &DegreeFunction::setop(t()), &e).unwrap().value,
            lin(2)
        );
        let v = FinVectFq::new(2, Limits::default()).unwrap();
        let p = v.product(1, 1).left;
        assert_eq!(
            omega(&v, &DegreeFunction::vect(t()), &p).unwrap().value,
            lin(2)
        );
        assert_eq!(
            omega(&v, &DegreeFunction::vect(t()), &v.identity(2))
                .unwrap()
                .value,
            MultiPoly::one()
        );
    }

    #[test]
    fn gram_of_two_set() {
        let cat = FinSetOp::default();
        let g = gram_omega(&cat, &DegreeFunction::setop(t()), 2).unwrap();
        assert_eq!(g.det, &t().pow(2) * &lin(1));
        assert!(g.factorization_holds);
        assert_eq!(g.matrix[(0, 0)], t().pow(2));
        let g1 = gram_omega(&cat, &DegreeFunction::setop(t()), 1).unwrap();
        assert_eq!(g1.det, t());
    }

    #[test]
    fn gram_of_f2_line() {
        let cat = FinVectFq::new(2, Limits::default()).unwrap();
        let g = gram_omega(&cat, &DegreeFunction::vect(t()), 1).unwrap();
        assert_eq!(g.det, lin(1));
        assert_eq!(g.omega_factors, vec![MultiPoly::one(), lin(1)]);
    }

    #[test]
    fn indecomposables() {
        let v = FinVectFq::new(2, Limits::default()).unwrap();
        let ind = indecomposable_surjections(&v, 2).unwrap();
        assert_eq!(ind.len(), 3);
        assert!(ind.iter().all(|e| v.defect(e) == 1));
        let s = FinSetOp::default();
        let ind = indecomposable_surjections(&s, 3).unwrap();
        assert_eq!(ind.len(), 3);
        assert!(ind.iter().all(|e| s.defect(e) == 1));
    }

    #[test]
    fn singular_sets() {
        let s = FinSetOp::default();
        let rep = singular_parameters(&s, 4).unwrap();
        let want: Vec<Rational> = (0..=3).map(Rational::from_integer).collect();
        assert_eq!(rep.singular_params, want);
        let v = FinVectFq::new(2, Limits::default()).unwrap();
        let rep = singular_parameters(&v, 3).unwrap();
        let want: Vec<Rational> = [1, 2, 4].into_iter().map(Rational::from_integer).collect();
        assert_eq!(rep.singular_params, want);
    }

    #[test]
    fn half_is_nonsingular() {
        let s = FinSetOp::default();
        let v = nonsingularity_verdict(&s, &DegreeFunction::setop(Rational::new(1, 2)), 4).unwrap();
        assert!(v.nonsingular);
        let v = nonsingularity_verdict(&s, &DegreeFunction::setop(Rational::from_integer(2)), 4)
            .unwrap();
        assert!(!v.nonsingular);
        assert_eq!(s.target(&v.witness.unwrap().0), 2);
    }

    #[test]
    fn end_one_blocks_at_five() {
        let s = FinSetOp::default();
        let (rad, blocks) = rational_blocks(&s, 1, &Rational::from_integer(5)).unwrap();
        assert_eq!(rad.radical_dim, 0);
        assert_eq!(blocks.split_dims(), vec![1, 1]);
    }

    #[test]
    fn partition_numbers_and_gl() {
        assert_eq!(
            (0..6).map(partition_count).collect::<Vec<_>>(),
            vec![1, 1, 2, 3, 5, 7]
        );
        assert_eq!(gl_conjugacy_classes(2, 0, 10_000).unwrap(), 1);
        assert_eq!(gl_conjugacy_classes(2, 1, 10_000).unwrap(), 1);
        assert_eq!(gl_conjugacy_classes(2, 2, 10_000).unwrap(), 3);
        assert_eq!(gl_conjugacy_classes(3, 1, 10_000).unwrap(), 2);
        assert_eq!(gl_conjugacy_classes(2, 3, 10_000).unwrap(), 6);
    }

    #[test]
    fn census_two_set() {
        let s = FinSetOp::default();
        let rep = simple_census(&s, 2, 2, &Rational::new(7, 2)).unwrap();
        assert!(rep.agrees, "{rep:?}");
        assert_eq!(rep.predicted_blocks, 4);
        assert_eq!(rep.blocks.split_dims(), vec![1, 1, 2, 3]);
    }

    #[test]
    fn census_f2_line() {
        let v = FinVectFq::new(2, Limits::default()).unwrap();
        let rep = simple_census(&v, 1, 2, &Rational::from_integer(3)).unwrap();
        assert!(rep.agrees, "{rep:?}");
        assert_eq!(rep.blocks.sum_of_squares(), 5);
    }

    #[test]
    fn end_two_radical_at_singular_points() {
        let s = FinSetOp::default();
        for (t, nonzero) in [(0, true), (1, true), (2, true), (-1, false)] {
            let env = Envelope::new(s.clone(), DegreeFunction::setop(Rational::from_integer(t)));
            assert_eq!(
                radical(&env, 2, 2).unwrap().radical_dim > 0,
                nonzero,
                "t = {t}"
            );
        }
    }
}
