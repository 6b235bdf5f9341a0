//! The ambient regular category as a pluggable interface.
//!
//! Both shipped backends are skeletal: an object is determined up to
//! isomorphism by a single natural number (set size, resp. dimension), so
//! objects are plain `usize` values and products are strict
//! concatenations (`x × y` has the `x` block first). Subobjects are kept
//! in canonical form, and equality of canonical forms is equality of
//! subobject classes.

mod fq;
mod setop;
mod vect;

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;
use std::sync::{Arc, RwLock};

use serde::{Deserialize, Serialize};

pub use fq::{inv_mod, is_prime, FqMat};
pub(crate) use setop::UnionFind;
pub use setop::{FinSetOp, Partition, SetMap};
pub use vect::{FinVectFq, LinearMap, Subspace};

use crate::error::{Error, Result};

/// Objects of a skeletal backend: set size or vector-space dimension.
pub type Obj = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendTag {
    #[serde(rename = "setop")]
    SetOp,
    Vect,
}

/// Hard enumeration limits. Each field doubles as the configuration key
/// named in [`Error::ResourceBound`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    /// Largest set whose partitions may be enumerated.
    pub max_setsize: usize,
    /// Largest `q^d` whose subspaces may be enumerated.
    pub max_qdim: u64,
    /// Largest explicit hom-set / `P(x)` / group that may be listed.
    pub max_psize: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_setsize: 8,
            max_qdim: 1 << 12,
            max_psize: 10_000,
        }
    }
}

impl Limits {
    pub(crate) fn check_psize(&self, what: impl Into<String>, size: u64) -> Result<()> {
        if size > self.max_psize {
            return Err(Error::ResourceBound {
                what: what.into(),
                key: "max_psize",
                limit: self.max_psize,
                required: size,
            });
        }
        Ok(())
    }
}

/// `x × y` with its two projections.
#[derive(Clone, Debug)]
pub struct Product<M> {
    pub obj: Obj,
    pub left: M,
    pub right: M,
}

/// A span `x ← apex → y`.
#[derive(Clone, Debug)]
pub struct Span<M> {
    pub apex: Obj,
    pub left: M,
    pub right: M,
}

/// A cospan `y1 → apex ← y2`.
#[derive(Clone, Debug)]
pub struct Cospan<M> {
    pub apex: Obj,
    pub left: M,
    pub right: M,
}

/// `f = mono ∘ epi` with `epi` surjective onto the image object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImageFactorization<M, S> {
    pub epi: M,
    pub mono: S,
}

/// A finite regular category with canonical subobjects.
pub trait RegularCategory: Clone + Send + Sync + 'static {
    type Mor: Clone + PartialEq + Eq + Hash + Debug + Send + Sync;
    type Sub: Clone + PartialEq + Eq + Ord + Hash + Debug + Send + Sync;

    const TAG: BackendTag;

    fn limits(&self) -> &Limits;

    /// Subobject cache shared by clones of the backend.
    fn cache(&self) -> &SubCache<Self::Sub>;

    fn source(&self, f: &Self::Mor) -> Obj;
    fn target(&self, f: &Self::Mor) -> Obj;
    fn identity(&self, x: Obj) -> Self::Mor;

    /// `f ∘ g`; requires `target(g) == source(f)`.
    fn compose(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    fn terminal(&self) -> Obj {
        0
    }

    fn to_terminal(&self, x: Obj) -> Self::Mor;

    fn product(&self, x: Obj, y: Obj) -> Product<Self::Mor>;

    /// The morphism `⟨f, g⟩: p → x × y`.
    fn pair(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Self::Mor>;

    /// Pullback of the cospan `x → z ← y`; `None` encodes the adjoined
    /// initial object.
    fn pullback(&self, f: &Self::Mor, g: &Self::Mor) -> Result<Option<Span<Self::Mor>>>;

    /// Pushout of two surjections with a common source.
    fn pushout(&self, e1: &Self::Mor, e2: &Self::Mor) -> Result<Cospan<Self::Mor>>;

    fn image(&self, f: &Self::Mor) -> ImageFactorization<Self::Mor, Self::Sub>;

    fn is_surjective(&self, f: &Self::Mor) -> bool;
    fn is_injective(&self, f: &Self::Mor) -> bool;

    fn is_iso(&self, f: &Self::Mor) -> bool {
        self.is_surjective(f) && self.is_injective(f)
    }

    fn sub_ambient(&self, u: &Self::Sub) -> Obj;

    /// Domain of the canonical monomorphism representing `u`.
    fn sub_object(&self, u: &Self::Sub) -> Obj;

    fn sub_mono(&self, u: &Self::Sub) -> Self::Mor;

    fn full_sub(&self, x: Obj) -> Self::Sub;

    /// Uncached enumeration of `sub(x)` in canonical order.
    fn enumerate_subobjects(&self, x: Obj) -> Result<Vec<Self::Sub>>;

    /// `sub(x)` in canonical order, cached per object.
    fn subobjects(&self, x: Obj) -> Result<Arc<Vec<Self::Sub>>> {
        if let Some(hit) = self.cache().get(x) {
            return Ok(hit);
        }
        let subs = Arc::new(self.enumerate_subobjects(x)?);
        self.cache().insert(x, subs.clone());
        Ok(subs)
    }

    /// `u ≤ v` in `sub(x)`.
    fn sub_le(&self, u: &Self::Sub, v: &Self::Sub) -> bool;

    /// `u ∧ v = u ×_x v`, absent when the pullback is the adjoined initial
    /// object.
    fn sub_meet(&self, u: &Self::Sub, v: &Self::Sub) -> Option<Self::Sub>;

    /// One surjection out of `x` per quotient class.
    fn quotients(&self, x: Obj) -> Result<Vec<Self::Mor>>;

    /// Whether `e = h ∘ e2` for some `h` (both surjections out of one object).
    fn factors_through(&self, e: &Self::Mor, e2: &Self::Mor) -> bool;

    /// Whether some surjection `a ↠ b` exists.
    fn surjection_exists(&self, a: Obj, b: Obj) -> bool;

    /// All morphisms `x → y`, within `max_psize`.
    fn homs(&self, x: Obj, y: Obj) -> Result<Vec<Self::Mor>>;

    /// `|Aut(x)|`.
    fn automorphism_count(&self, x: Obj) -> u128;

    /// Object size `|x|` for sets, `dim x` for vector spaces.
    fn size(&self, x: Obj) -> u32 {
        x as u32
    }

    /// `size(source) - size(target)` of a surjection: `|B ∖ e(A)|` for
    /// Set-injections, `dim ker e` for linear surjections.
    fn defect(&self, e: &Self::Mor) -> u32 {
        self.size(self.source(e)) - self.size(self.target(e))
    }

    /// Descriptor of an object for reports.
    fn describe(&self, x: Obj) -> ObjectHandle;

    /// Canonical JSON of a subobject.
    fn sub_json(&self, u: &Self::Sub) -> serde_json::Value;
}

/// Read-mostly cache of subobject enumerations. Concurrent inserts of the
/// same key are idempotent.
#[derive(Debug)]
pub struct SubCache<S> {
    inner: RwLock<HashMap<Obj, Arc<Vec<S>>>>,
}

impl<S> Default for SubCache<S> {
    fn default() -> Self {
        SubCache {
            inner: RwLock::new(HashMap::new()),
        }
    }
}

impl<S> SubCache<S> {
    fn get(&self, x: Obj) -> Option<Arc<Vec<S>>> {
        self.inner.read().expect("cache lock").get(&x).cloned()
    }

    fn insert(&self, x: Obj, v: Arc<Vec<S>>) {
        self.inner
            .write()
            .expect("cache lock")
            .entry(x)
            .or_insert(v);
    }
}

/// JSON object descriptor: `{"backend":"setop","size":3}` or
/// `{"backend":"vect","q":2,"dim":2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "backend", rename_all = "lowercase")]
pub enum ObjectHandle {
    #[serde(rename = "setop")]
    SetOp {
        size: usize,
    },
    Vect {
        q: u64,
        dim: usize,
    },
}

impl ObjectHandle {
    pub fn tag(&self) -> BackendTag {
        match self {
            ObjectHandle::SetOp { .. } => BackendTag::SetOp,
            ObjectHandle::Vect { .. } => BackendTag::Vect,
        }
    }

    pub fn obj(&self) -> Obj {
        match self {
            ObjectHandle::SetOp { size } => *size,
            ObjectHandle::Vect { dim, .. } => *dim,
        }
    }
}

/// Galois pair `(e_*(u), e^*(v))` of a surjection `e: x ↠ y`.
pub fn galois_images<C: RegularCategory>(
    cat: &C,
    e: &C::Mor,
    u: &C::Sub,
    v: &C::Sub,
) -> Result<(C::Sub, C::Sub)> {
    Ok((direct_image(cat, e, u)?, inverse_image(cat, e, v)?))
}

/// `e_*(u) = im(u ↣ x ↠ y)`.
pub fn direct_image<C: RegularCategory>(cat: &C, e: &C::Mor, u: &C::Sub) -> Result<C::Sub> {
    require_surjective(cat, e)?;
    let comp = cat.compose(e, &cat.sub_mono(u))?;
    Ok(cat.image(&comp).mono)
}

/// `e^*(v) = x ×_y v`.
pub fn inverse_image<C: RegularCategory>(cat: &C, e: &C::Mor, v: &C::Sub) -> Result<C::Sub> {
    require_surjective(cat, e)?;
    let span = cat
        .pullback(e, &cat.sub_mono(v))?
        .ok_or_else(|| Error::Contract("pullback along a surjection is absent".into()))?;
    Ok(cat.image(&span.left).mono)
}

pub(crate) fn require_surjective<C: RegularCategory>(cat: &C, e: &C::Mor) -> Result<()> {
    if cat.is_surjective(e) {
        Ok(())
    } else {
        Err(Error::Contract(format!("{e:?} is not surjective")))
    }
}

/// Base-change of `e: x ↠ y` along `f: z → y`: the projection
/// `z ×_y x → z`.
pub fn pullback_of<C: RegularCategory>(cat: &C, e: &C::Mor, f: &C::Mor) -> Result<Option<C::Mor>> {
    Ok(cat.pullback(f, e)?.map(|s| s.left))
}
