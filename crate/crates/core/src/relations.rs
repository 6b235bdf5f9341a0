//! The calculus of relations: a relation `x → y` is a subobject of `x × y`.

use serde_json::{json, Value};

use crate::backend::{FinSetOp, Obj, Partition, RegularCategory};
use crate::degree::DegreeFunction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation<Sub> {
    pub left: Obj,
    pub right: Obj,
    pub body: Sub,
}

/// `coeff · rel`; an absent composite is represented by `None` at the
/// call site rather than a zero marker.
#[derive(Clone, Debug, PartialEq)]
pub struct Weighted<S, Sub> {
    pub coeff: S,
    pub rel: Relation<Sub>,
}

pub fn relation<C: RegularCategory>(
    cat: &C,
    left: Obj,
    right: Obj,
    body: C::Sub,
) -> Result<Relation<C::Sub>> {
    let ambient = cat.product(left, right).obj;
    if cat.sub_ambient(&body) != ambient {
        return Err(Error::Dimension(format!(
            "relation body lives in an object of size {} but {left} × {right} has size {ambient}",
            cat.sub_ambient(&body)
        )));
    }
    Ok(Relation { left, right, body })
}

/// The two legs `r → x` and `r → y`.
pub fn legs<C: RegularCategory>(cat: &C, r: &Relation<C::Sub>) -> Result<(C::Mor, C::Mor)> {
    let prod = cat.product(r.left, r.right);
    let m = cat.sub_mono(&r.body);
    Ok((cat.compose(&prod.left, &m)?, cat.compose(&prod.right, &m)?))
}

/// Image of `⟨a, b⟩: p → x × y` as a relation, with the epi part.
fn image_relation<C: RegularCategory>(
    cat: &C,
    a: &C::Mor,
    b: &C::Mor,
) -> Result<(C::Mor, Relation<C::Sub>)> {
    let f = cat.pair(a, b)?;
    let img = cat.image(&f);
    Ok((
        img.epi,
        Relation {
            left: cat.target(a),
            right: cat.target(b),
            body: img.mono,
        },
    ))
}

fn composite_cover<C: RegularCategory>(
    cat: &C,
    r: &Relation<C::Sub>,
    s: &Relation<C::Sub>,
) -> Result<Option<(C::Mor, Relation<C::Sub>)>> {
    if r.right != s.left {
        return Err(Error::EndpointMismatch(format!(
            "relation {}→{} followed by {}→{}",
            r.left, r.right, s.left, s.right
        )));
    }
    let (rx, ry) = legs(cat, r)?;
    let (sy, sz) = legs(cat, s)?;
    let Some(span) = cat.pullback(&ry, &sy)? else {
        return Ok(None);
    };
    let a = cat.compose(&rx, &span.left)?;
    let b = cat.compose(&sz, &span.right)?;
    image_relation(cat, &a, &b).map(Some)
}

/// `s ∘ r = im(r ×_y s → x × z)`.
pub fn classical_compose<C: RegularCategory>(
    cat: &C,
    r: &Relation<C::Sub>,
    s: &Relation<C::Sub>,
) -> Result<Option<Relation<C::Sub>>> {
    Ok(composite_cover(cat, r, s)?.map(|(_, rel)| rel))
}

/// `sr = δ(e) · s∘r` with `e: r ×_y s ↠ s∘r`.
pub fn weighted_compose<S: Scalar, C: RegularCategory>(
    cat: &C,
    delta: &DegreeFunction<S>,
    r: &Relation<C::Sub>,
    s: &Relation<C::Sub>,
) -> Result<Option<Weighted<S, C::Sub>>> {
    match composite_cover(cat, r, s)? {
        None => Ok(None),
        Some((e, rel)) => Ok(Some(Weighted {
            coeff: delta.evaluate(cat, &e)?,
            rel,
        })),
    }
}

/// `⟨f⟩ = δ(r ↠ r̄) r̄` for `f: r → x × y`.
pub fn bracket<S: Scalar, C: RegularCategory>(
    cat: &C,
    delta: &DegreeFunction<S>,
    f: &C::Mor,
    x: Obj,
    y: Obj,
) -> Result<Weighted<S, C::Sub>> {
    let prod = cat.product(x, y);
    if cat.target(f) != prod.obj {
        return Err(Error::EndpointMismatch(format!(
            "bracket of a morphism into {} viewed as {x} × {y}",
            cat.target(f)
        )));
    }
    let a = cat.compose(&prod.left, f)?;
    let b = cat.compose(&prod.right, f)?;
    let (e, rel) = image_relation(cat, &a, &b)?;
    Ok(Weighted {
        coeff: delta.evaluate(cat, &e)?,
        rel,
    })
}

/// Swap of the two factors.
pub fn transpose<C: RegularCategory>(cat: &C, r: &Relation<C::Sub>) -> Result<Relation<C::Sub>> {
    let (a, b) = legs(cat, r)?;
    Ok(image_relation(cat, &b, &a)?.1)
}

/// Image of `⟨1, f⟩: x → x × y`.
pub fn graph_of<C: RegularCategory>(cat: &C, f: &C::Mor) -> Result<Relation<C::Sub>> {
    let id = cat.identity(cat.source(f));
    Ok(image_relation(cat, &id, f)?.1)
}

/// `r ⊗ s: x × y → x′ × y′`.
pub fn tensor_rel<C: RegularCategory>(
    cat: &C,
    r: &Relation<C::Sub>,
    s: &Relation<C::Sub>,
) -> Result<Relation<C::Sub>> {
    let (rx, rx2) = legs(cat, r)?;
    let (sy, sy2) = legs(cat, s)?;
    let p = cat.product(cat.source(&rx), cat.source(&sy));
    let left = cat.pair(&cat.compose(&rx, &p.left)?, &cat.compose(&sy, &p.right)?)?;
    let right = cat.pair(&cat.compose(&rx2, &p.left)?, &cat.compose(&sy2, &p.right)?)?;
    let img = cat.image(&cat.pair(&left, &right)?);
    Ok(Relation {
        left: cat.product(r.left, s.left).obj,
        right: cat.product(r.right, s.right).obj,
        body: img.mono,
    })
}

/// Evaluation `x × x → ⋆` and coevaluation `⋆ → x × x`, both carried by
/// the diagonal.
pub fn ev_coev<C: RegularCategory>(
    cat: &C,
    x: Obj,
) -> Result<(Relation<C::Sub>, Relation<C::Sub>)> {
    let id = cat.identity(x);
    let diag = cat.pair(&id, &id)?;
    let bang = cat.to_terminal(x);
    let xx = cat.target(&diag);
    let ev = image_relation(cat, &diag, &bang)?.1;
    let coev = image_relation(cat, &bang, &diag)?.1;
    debug_assert_eq!((ev.left, coev.right), (xx, xx));
    Ok((ev, coev))
}

/// The core of a relation: the pushout of its two image surjections.
#[derive(Clone, Debug)]
pub struct Core<M, Sub> {
    pub obj: Obj,
    /// Images of `r` in `x` and in `y`.
    pub left_image: Sub,
    pub right_image: Sub,
    /// The pushout legs `x̄ ↠ c` and `ȳ ↠ c`.
    pub from_left: M,
    pub from_right: M,
    /// Relations `x → c` and `c → y` whose composite is `r`.
    pub factor_in: Relation<Sub>,
    pub factor_out: Relation<Sub>,
}

pub fn core<C: RegularCategory>(cat: &C, r: &Relation<C::Sub>) -> Result<Core<C::Mor, C::Sub>> {
    let (a, b) = legs(cat, r)?;
    let ia = cat.image(&a);
    let ib = cat.image(&b);
    let po = cat.pushout(&ia.epi, &ib.epi)?;
    let factor_in = image_relation(cat, &cat.sub_mono(&ia.mono), &po.left)?.1;
    let factor_out = image_relation(cat, &po.right, &cat.sub_mono(&ib.mono))?.1;
    Ok(Core {
        obj: po.apex,
        left_image: ia.mono,
        right_image: ib.mono,
        from_left: po.left,
        from_right: po.right,
        factor_in,
        factor_out,
    })
}

/// Whether the factor relations of a core compose back to `r` with
/// coefficient 1.
pub fn core_factorizes<S: Scalar, C: RegularCategory>(
    cat: &C,
    delta: &DegreeFunction<S>,
    r: &Relation<C::Sub>,
    c: &Core<C::Mor, C::Sub>,
) -> Result<bool> {
    Ok(
        match weighted_compose(cat, delta, &c.factor_in, &c.factor_out)? {
            Some(w) => w.rel == *r && w.coeff.is_one(),
            None => false,
        },
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subquotient {
    /// `y ⋠ x`.
    NotBelow,
    /// `y ≅ x`.
    Equal,
    /// `y ≺ x`.
    Strict,
}

/// Decides `y ⪯ x`: some `x ↢ u ↠ y`.
pub fn is_proper_subquotient<C: RegularCategory>(cat: &C, y: Obj, x: Obj) -> Result<Subquotient> {
    let subs = cat.subobjects(x)?;
    if !subs
        .iter()
        .any(|u| cat.surjection_exists(cat.sub_object(u), y))
    {
        return Ok(Subquotient::NotBelow);
    }
    Ok(if y == x {
        Subquotient::Equal
    } else {
        Subquotient::Strict
    })
}

fn setop_label(i: usize, left: Obj) -> String {
    if i < left {
        format!("x{}", i + 1)
    } else {
        format!("y{}", i - left + 1)
    }
}

/// Canonical JSON of a relation: `{"left","right","partition"}` with
/// labels `x1..`, `y1..`, or `{"left","right","basis"}`.
pub fn relation_json<C: RegularCategory>(cat: &C, r: &Relation<C::Sub>) -> Value {
    let mut body = cat.sub_json(&r.body);
    if let Some(Value::Array(blocks)) = body.get("partition") {
        let labelled: Vec<Vec<String>> = blocks
            .iter()
            .map(|b| {
                b.as_array()
                    .into_iter()
                    .flatten()
                    .filter_map(Value::as_u64)
                    .map(|i| setop_label(i as usize - 1, r.left))
                    .collect()
            })
            .collect();
        body = json!({ "partition": labelled });
    }
    let mut out = json!({
        "left": cat.describe(r.left),
        "right": cat.describe(r.right),
    });
    if let (Value::Object(o), Value::Object(b)) = (&mut out, body) {
        o.extend(b);
    }
    out
}

/// A FinSetOp relation from labelled blocks such as `[["x1","y1"],["x2"]]`.
pub fn setop_relation(
    left: Obj,
    right: Obj,
    blocks: &[Vec<String>],
) -> Result<Relation<Partition>> {
    let parse = |label: &str| -> Result<usize> {
        let bad = || Error::Invalid(format!("bad label {label:?}"));
        let (side, num) = label.split_at(1.min(label.len()));
        let k: usize = num.parse().map_err(|_| bad())?;
        match (side, k) {
            ("x", k) if k >= 1 && k <= left => Ok(k - 1),
            ("y", k) if k >= 1 && k <= right => Ok(left + k - 1),
            _ => Err(bad()),
        }
    };
    let blocks: Vec<Vec<usize>> = blocks
        .iter()
        .map(|b| b.iter().map(|l| parse(l)).collect::<Result<_>>())
        .collect::<Result<_>>()?;
    let body = Partition::from_blocks(left + right, &blocks)?;
    relation(&FinSetOp::default(), left, right, body)
}
