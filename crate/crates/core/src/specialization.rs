//! Uniform functors `P = Hom(X, -)` and the fiber functor `T_P` into
//! matrices over ℚ.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::backend::{Obj, RegularCategory};
use crate::degree::DegreeFunction;
use crate::envelope::{Envelope, LinearHom};
use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::radical::radical;
use crate::relations::{legs, Relation};
use crate::scalar::{Rational, Scalar};

use num_traits::Zero;

/// A finite set with a chosen order: the elements of `P(x)`.
#[derive(Clone, Debug)]
pub struct PSet<M> {
    pub obj: Obj,
    pub elements: Vec<M>,
    index: HashMap<M, usize>,
}

impl<M: Clone + Eq + std::hash::Hash> PSet<M> {
    fn new(obj: Obj, elements: Vec<M>) -> Self {
        let index = elements
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, m)| (m, i))
            .collect();
        PSet {
            obj,
            elements,
            index,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, m: &M) -> Option<usize> {
        self.index.get(m).copied()
    }
}

/// `P(a) = Hom(X, a)`, covariant and left exact. For sets this is
/// `Hom_Set(a, X)`, for vector spaces the linear maps `X → a`.
#[derive(Clone, Debug)]
pub struct UniformFunctor<C: RegularCategory> {
    cat: C,
    x: Obj,
    t: Rational,
}

/// The set map `P(f)` as an index table `P(source) → P(target)`.
pub type SetMapTable = Vec<usize>;

impl<C: RegularCategory> UniformFunctor<C> {
    /// Builds `Hom(x, -)` and certifies uniformity on every surjection
    /// with source of size at most 2.
    pub fn new(cat: C, x: Obj) -> Result<Self> {
        let t = Rational::from_integer(cat.homs(x, 1)?.len() as i64);
        let p = UniformFunctor { cat, x, t };
        for a in 0..=2 {
            for e in p.cat.quotients(a)? {
                if p.fiber_size(&e)?.is_none() && !p.apply(p.cat.target(&e))?.is_empty() {
                    return Err(Error::Contract(format!(
                        "P(e) is not uniform for a surjection {a} ↠ {}",
                        p.cat.target(&e)
                    )));
                }
            }
        }
        Ok(p)
    }

    pub fn cat(&self) -> &C {
        &self.cat
    }

    pub fn x(&self) -> Obj {
        self.x
    }

    /// The parameter at which the natural degree function is adapted:
    /// `|X|` for sets, `q^n` for `X = F_q^n`.
    pub fn adapted_parameter(&self) -> &Rational {
        &self.t
    }

    pub fn apply(&self, a: Obj) -> Result<PSet<C::Mor>> {
        Ok(PSet::new(a, self.cat.homs(self.x, a)?))
    }

    pub fn apply_mor(&self, f: &C::Mor) -> Result<SetMapTable> {
        let src = self.apply(self.cat.source(f))?;
        let tgt = self.apply(self.cat.target(f))?;
        self.apply_between(f, &src, &tgt)
    }

    fn apply_between(
        &self,
        f: &C::Mor,
        src: &PSet<C::Mor>,
        tgt: &PSet<C::Mor>,
    ) -> Result<SetMapTable> {
        src.elements
            .iter()
            .map(|phi| {
                let img = self.cat.compose(f, phi)?;
                tgt.index_of(&img)
                    .ok_or_else(|| Error::Invalid("P(f) left the target listing".into()))
            })
            .collect()
    }

    /// Common fiber size of `P(e)`, or `None` if the fibers differ.
    pub fn fiber_size(&self, e: &C::Mor) -> Result<Option<usize>> {
        let map = self.apply_mor(e)?;
        let n = self.apply(self.cat.target(e))?.len();
        let mut counts = vec![0usize; n];
        for &j in &map {
            counts[j] += 1;
        }
        Ok(match counts.first() {
            Some(&c) if counts.iter().all(|&k| k == c) => Some(c),
            Some(_) => None,
            None => Some(0),
        })
    }
}

/// 0/1 matrix of a set map, rows indexed by the target.
pub fn map_matrix(map: &[usize], target_len: usize) -> DenseMatrix<Rational> {
    let mut m = DenseMatrix::zeros(target_len, map.len());
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = Rational::from_integer(1);
    }
    m
}

/// Whether a commuting square of finite sets is a pullback, tested as
/// `τ₂ᵀ τ₁ = π₂ π₁ᵀ` for `π₁: P → A`, `π₂: P → B`, `τ₁: A → Z`,
/// `τ₂: B → Z`.
pub fn square_identity_holds(
    pi1: &[usize],
    pi2: &[usize],
    tau1: &[usize],
    tau2: &[usize],
    z_len: usize,
) -> bool {
    let a = map_matrix(pi1, tau1.len());
    let b = map_matrix(pi2, tau2.len());
    let t1 = map_matrix(tau1, z_len);
    let t2 = map_matrix(tau2, z_len);
    let lhs = t2.transpose().mul(&t1).expect("shapes");
    let rhs = b.mul(&a.transpose()).expect("shapes");
    lhs == rhs
}

#[derive(Clone, Debug, Serialize)]
pub struct AdaptedReport {
    pub parameter: String,
    pub surjections_checked: usize,
    pub uniform: bool,
    pub adapted: bool,
    pub squares_checked: usize,
    pub left_exact: bool,
    /// `(source, target, degree, fiber size)` of the first failure.
    pub witness: Option<(Obj, Obj, String, usize)>,
}

/// Checks uniformity of `P` and adaptedness of `δ` on all surjections
/// with source at most `bound`, and the pullback identity on the
/// pullback squares of all cospans of surjections among them.
pub fn uniformity_and_adapted_check<C: RegularCategory, S: Scalar>(
    p: &UniformFunctor<C>,
    delta: &DegreeFunction<S>,
    bound: Obj,
) -> Result<AdaptedReport> {
    let cat = p.cat();
    let mut surjections = Vec::new();
    for a in 0..=bound {
        surjections.extend(cat.quotients(a)?);
    }
    let mut uniform = true;
    let mut adapted = true;
    let mut witness = None;
    for e in &surjections {
        if p.apply(cat.target(e))?.is_empty() {
            continue;
        }
        let d = delta.evaluate(cat, e)?;
        match p.fiber_size(e)? {
            Some(s) if d == S::from_int(s as i64) => {}
            fiber => {
                uniform &= fiber.is_some();
                adapted = false;
                if witness.is_none() {
                    witness = Some((
                        cat.source(e),
                        cat.target(e),
                        d.to_string(),
                        fiber.unwrap_or(0),
                    ));
                }
            }
        }
    }
    let mut squares = 0;
    let mut left_exact = true;
    for f in &surjections {
        for g in &surjections {
            if cat.target(f) != cat.target(g) {
                continue;
            }
            let Some(span) = cat.pullback(f, g)? else {
                continue;
            };
            squares += 1;
            let (pp, a, b, z) = (
                p.apply(span.apex)?,
                p.apply(cat.source(f))?,
                p.apply(cat.source(g))?,
                p.apply(cat.target(f))?,
            );
            left_exact &= square_identity_holds(
                &p.apply_between(&span.left, &pp, &a)?,
                &p.apply_between(&span.right, &pp, &b)?,
                &p.apply_between(f, &a, &z)?,
                &p.apply_between(g, &b, &z)?,
                z.len(),
            );
        }
    }
    Ok(AdaptedReport {
        parameter: delta
            .parameter()
            .map_or_else(|| delta.family_name().to_string(), |t| t.to_string()),
        surjections_checked: surjections.len(),
        uniform,
        adapted,
        squares_checked: squares,
        left_exact,
        witness,
    })
}

/// `T_P(F)`: a `|P(y)| × |P(x)|` matrix over ℚ.
#[derive(Clone, Debug, PartialEq)]
pub struct SpecializedHom {
    pub source_dim: usize,
    pub target_dim: usize,
    pub matrix: DenseMatrix<Rational>,
}

impl SpecializedHom {
    pub fn is_integral(&self) -> bool {
        self.matrix.entries().iter().all(|v| v.is_integer())
    }
}

/// `T_P(⟨r⟩) = P(r → y) P(r → x)ᵀ`.
pub fn specialize_relation<C: RegularCategory>(
    p: &UniformFunctor<C>,
    r: &Relation<C::Sub>,
    px: &PSet<C::Mor>,
    py: &PSet<C::Mor>,
) -> Result<DenseMatrix<Rational>> {
    let cat = p.cat();
    let (lx, ly) = legs(cat, r)?;
    let pr = p.apply(cat.source(&lx))?;
    let to_x = p.apply_between(&lx, &pr, px)?;
    let to_y = p.apply_between(&ly, &pr, py)?;
    let mut m: DenseMatrix<Rational> = DenseMatrix::zeros(py.len(), px.len());
    for (i, j) in to_x.into_iter().zip(to_y) {
        m[(j, i)] = m[(j, i)].clone() + Rational::from_integer(1);
    }
    Ok(m)
}

/// Matrices `T_P(b)` for every basis relation `b` of `Hom(x, y)`.
pub fn specialize_basis<C: RegularCategory, S: Scalar>(
    p: &UniformFunctor<C>,
    env: &Envelope<C, S>,
    x: Obj,
    y: Obj,
) -> Result<Vec<DenseMatrix<Rational>>> {
    let (px, py) = (p.apply(x)?, p.apply(y)?);
    let space = env.hom_basis(x, y)?;
    (0..space.dim())
        .into_par_iter()
        .map(|i| specialize_relation(p, &space.relation(i), &px, &py))
        .collect()
}

pub fn specialize<C: RegularCategory>(
    p: &UniformFunctor<C>,
    env: &Envelope<C, Rational>,
    f: &LinearHom<Rational>,
) -> Result<SpecializedHom> {
    let (px, py) = (p.apply(f.source)?, p.apply(f.target)?);
    let space = env.hom_basis(f.source, f.target)?;
    let mut m: DenseMatrix<Rational> = DenseMatrix::zeros(py.len(), px.len());
    for (i, c) in f.terms() {
        let b = specialize_relation(p, &space.relation(i), &px, &py)?;
        for r in 0..m.rows() {
            for k in 0..m.cols() {
                if !b[(r, k)].is_zero() {
                    m[(r, k)] = m[(r, k)].clone() + c.clone() * b[(r, k)].clone();
                }
            }
        }
    }
    Ok(SpecializedHom {
        source_dim: px.len(),
        target_dim: py.len(),
        matrix: m,
    })
}

/// Permutation matrix taking the `P(x × y)` order to the lexicographic
/// order on `P(x) × P(y)`.
fn product_reorder<C: RegularCategory>(
    p: &UniformFunctor<C>,
    x: Obj,
    y: Obj,
) -> Result<DenseMatrix<Rational>> {
    let cat = p.cat();
    let prod = cat.product(x, y);
    let (pxy, px, py) = (p.apply(prod.obj)?, p.apply(x)?, p.apply(y)?);
    let l = p.apply_between(&prod.left, &pxy, &px)?;
    let r = p.apply_between(&prod.right, &pxy, &py)?;
    let map: Vec<usize> = l.iter().zip(&r).map(|(&i, &j)| i * py.len() + j).collect();
    Ok(map_matrix(&map, px.len() * py.len()))
}

#[derive(Clone, Debug, Serialize)]
pub struct FunctorialityReport {
    pub pairs_checked: usize,
    pub tensor_pairs_checked: usize,
    pub duals_checked: usize,
    pub holds: bool,
    /// Basis indices `(i, j)` with `T(b_j ∘ b_i) ≠ T(b_j) T(b_i)`.
    pub witness: Option<(usize, usize)>,
}

/// Exhaustive functoriality on the basis of `End([x])`, tensor
/// compatibility on `End([x]) ⊗ End([1])` basis pairs and duality.
pub fn functoriality_check<C: RegularCategory>(
    p: &UniformFunctor<C>,
    env: &Envelope<C, Rational>,
    x: Obj,
) -> Result<FunctorialityReport> {
    let space = env.hom_basis(x, x)?;
    let mats = specialize_basis(p, env, x, x)?;
    let n = space.dim();
    let failures: Vec<(usize, usize)> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let bi = env.basis_element(x, x, i)?;
            let bj = env.basis_element(x, x, j)?;
            let composite = specialize(p, env, &env.compose_hom(&bj, &bi)?)?;
            Ok((composite.matrix != mats[j].mul(&mats[i])?).then_some((i, j)))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let one = 1;
    let small = specialize_basis(p, env, one, one)?;
    let reorder = product_reorder(p, x, one)?;
    let mut tensor_ok = true;
    let mut tensor_pairs = 0;
    for i in 0..n {
        for (j, sm) in small.iter().enumerate() {
            let f = env.basis_element(x, x, i)?;
            let g = env.basis_element(one, one, j)?;
            let t = specialize(p, env, &env.tensor_hom(&f, &g)?)?.matrix;
            let expected = reorder
                .transpose()
                .mul(&mats[i].kronecker(sm))?
                .mul(&reorder)?;
            tensor_ok &= t == expected;
            tensor_pairs += 1;
        }
    }
    let mut duals_ok = true;
    for (i, m) in mats.iter().enumerate() {
        let d = specialize(p, env, &env.dual_hom(&env.basis_element(x, x, i)?)?)?;
        duals_ok &= d.matrix == m.transpose();
    }
    Ok(FunctorialityReport {
        pairs_checked: n * n,
        tensor_pairs_checked: tensor_pairs,
        duals_checked: n,
        holds: failures.is_empty() && tensor_ok && duals_ok,
        witness: failures.first().copied(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub p_size: usize,
    /// Sizes of `P*(u)` for `u ∈ sub(x)` in canonical order.
    pub pstar_sizes: Vec<usize>,
    /// Number of nonempty `P*(u)`, i.e. of `Aut(X)`-orbits on `P(x)`.
    pub orbits: usize,
    /// Rank of `T_P` on `Hom(𝟙, [x])`.
    pub invariant_rank: usize,
    /// Whether the invariants of `ℚ[P(x)]` have one dimension per orbit.
    pub invariants_match_orbits: bool,
}

/// `Aut(X)`-orbit label of `φ: X → a`: its image subobject. Two maps
/// with the same image `u` differ by an automorphism of `X`, since any
/// two surjections `X ↠ u` do.
fn orbit_class<C: RegularCategory>(cat: &C, phi: &C::Mor) -> C::Sub {
    cat.image(phi).mono
}

/// Splits `P(x)` into the sets `P*(u)` of maps whose image is exactly
/// `u` (the orbits) and compares their number with the rank of `T_P` on
/// `Hom(𝟙, [x])`.
pub fn pstar_and_invariants<C: RegularCategory, S: Scalar>(
    p: &UniformFunctor<C>,
    env: &Envelope<C, S>,
    x: Obj,
) -> Result<OrbitReport> {
    let cat = p.cat();
    let px = p.apply(x)?;
    let subs = cat.subobjects(x)?;
    let class: Vec<usize> = px
        .elements
        .par_iter()
        .map(|phi| {
            subs.binary_search(&orbit_class(cat, phi))
                .expect("canonical image")
        })
        .collect();
    let mut pstar_sizes = vec![0; subs.len()];
    for &c in &class {
        pstar_sizes[c] += 1;
    }
    let orbits = pstar_sizes.iter().filter(|&&s| s > 0).count();

    let cols = specialize_basis(p, env, cat.terminal(), x)?;
    let invariant_rank = if cols.is_empty() || px.is_empty() {
        0
    } else {
        let rows: Vec<Vec<Rational>> = cols.iter().map(|m| m.entries().to_vec()).collect();
        DenseMatrix::from_rows(rows)?.rank()
    };
    Ok(OrbitReport {
        p_size: px.len(),
        pstar_sizes,
        orbits,
        invariant_rank,
        invariants_match_orbits: invariant_rank == orbits,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationReport {
    pub hom_dim: usize,
    pub radical_dim: usize,
    pub quotient_dim: usize,
    /// Rank of `T_P` on `Hom([x], [y])`.
    pub specialization_rank: usize,
    /// `Aut(X)`-orbits on `P(x) × P(y)` = dimension of equivariant maps.
    pub equivariant_dim: usize,
    pub holds: bool,
}

/// `dim Hom([x], [y]) - dim 𝒩([x], [y])` against the dimension of
/// `Aut(X)`-equivariant maps `ℚ[P(x)] → ℚ[P(y)]`.
pub fn interpolation_dim_check<C: RegularCategory>(
    p: &UniformFunctor<C>,
    x: Obj,
    y: Obj,
) -> Result<InterpolationReport> {
    let cat = p.cat();
    let env = Envelope::new(
        cat.clone(),
        DegreeFunction::natural(C::TAG, p.adapted_parameter().clone()),
    );
    let rad = radical(&env, x, y)?;
    let mats = specialize_basis(p, &env, x, y)?;
    let specialization_rank = if mats.is_empty() {
        0
    } else {
        DenseMatrix::from_rows(mats.iter().map(|m| m.entries().to_vec()).collect())?.rank()
    };
    let (px, py) = (p.apply(x)?, p.apply(y)?);
    let mut pairs = Vec::with_capacity(px.len() * py.len());
    for phi in &px.elements {
        for psi in &py.elements {
            pairs.push((phi, psi));
        }
    }
    let classes: Vec<C::Sub> = pairs
        .par_iter()
        .map(|(phi, psi)| Ok(orbit_class(cat, &cat.pair(phi, psi)?)))
        .collect::<Result<_>>()?;
    let equivariant_dim = classes
        .into_iter()
        .collect::<std::collections::HashSet<_>>()
        .len();
    let quotient_dim = rad.hom_dim - rad.radical_dim;
    Ok(InterpolationReport {
        hom_dim: rad.hom_dim,
        radical_dim: rad.radical_dim,
        quotient_dim,
        specialization_rank,
        equivariant_dim,
        holds: quotient_dim == equivariant_dim && specialization_rank == quotient_dim,
    })
}
