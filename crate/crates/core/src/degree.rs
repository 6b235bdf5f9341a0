//! Degree functions on surjections: the shipped families, axiom
//! validation, and the rank/degree correspondence on vector spaces.

use std::collections::BTreeMap;

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use serde::Serialize;

use crate::backend::{require_surjective, BackendTag, Obj, RegularCategory};
use crate::error::{Error, Result};
use crate::scalar::{MultiPoly, Scalar};

/// Values of a user-supplied degree function, keyed by
/// `(source, target)` of the surjection. Both shipped backends are
/// skeletal and surjections with equal endpoints are conjugate under
/// automorphisms, so this key loses nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeTable<S> {
    values: BTreeMap<(Obj, Obj), S>,
}

impl<S: Scalar> DegreeTable<S> {
    pub fn new(values: BTreeMap<(Obj, Obj), S>) -> Self {
        DegreeTable { values }
    }

    pub fn from_fn(max: Obj, f: impl Fn(Obj, Obj) -> S) -> Self {
        let mut values = BTreeMap::new();
        for a in 0..=max {
            for b in 0..=a {
                values.insert((a, b), f(a, b));
            }
        }
        DegreeTable { values }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Family<S> {
    SetOp(S),
    Vect(S),
    Length(Vec<S>),
    Trivial,
    Table {
        table: DegreeTable<S>,
        validated: bool,
    },
}

/// A degree function `δ` with values in `S`.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeFunction<S> {
    family: Family<S>,
}

impl<S: Scalar> DegreeFunction<S> {
    /// `δ(e) = t^{|B ∖ e(A)|}` on finite sets.
    pub fn setop(t: S) -> Self {
        DegreeFunction {
            family: Family::SetOp(t),
        }
    }

    /// `δ(e) = t^{dim ker e}` on F_q vector spaces.
    pub fn vect(t: S) -> Self {
        DegreeFunction {
            family: Family::Vect(t),
        }
    }

    /// `δ(e) = Π_s t_s^{ℓ_s(ker e)}`; vector spaces have a single simple.
    pub fn length(t: Vec<S>) -> Self {
        DegreeFunction {
            family: Family::Length(t),
        }
    }

    pub fn trivial() -> Self {
        DegreeFunction {
            family: Family::Trivial,
        }
    }

    /// The natural family of a backend with parameter `t`.
    pub fn natural(tag: BackendTag, t: S) -> Self {
        match tag {
            BackendTag::SetOp => Self::setop(t),
            BackendTag::Vect => Self::vect(t),
        }
    }

    /// An unvalidated table. It can be passed to [`validate_degree_axioms`]
    /// but refuses to evaluate until [`DegreeFunction::validated_table`]
    /// accepted it.
    pub fn raw_table(table: DegreeTable<S>) -> Self {
        DegreeFunction {
            family: Family::Table {
                table,
                validated: false,
            },
        }
    }

    /// Accepts a table only if it passes the exhaustive axiom check up to
    /// `bound`.
    pub fn validated_table<C: RegularCategory>(
        cat: &C,
        table: DegreeTable<S>,
        bound: Obj,
    ) -> Result<Self> {
        let raw = Self::raw_table(table);
        let report = validate_degree_axioms(&raw, cat, &Validation::Exhaustive { bound })?;
        if let Some(cx) = report.counterexample {
            return Err(Error::Contract(format!(
                "degree table violates {}: {}",
                cx.axiom, cx.detail
            )));
        }
        let Family::Table { table, .. } = raw.family else {
            unreachable!()
        };
        Ok(DegreeFunction {
            family: Family::Table {
                table,
                validated: true,
            },
        })
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::SetOp(_) => "setop",
            Family::Vect(_) => "vect",
            Family::Length(_) => "length",
            Family::Trivial => "trivial",
            Family::Table { .. } => "table",
        }
    }

    /// The parameter `t` of a one-parameter family.
    pub fn parameter(&self) -> Option<&S> {
        match &self.family {
            Family::SetOp(t) | Family::Vect(t) => Some(t),
            Family::Length(ts) if ts.len() == 1 => Some(&ts[0]),
            _ => None,
        }
    }

    /// Same family with every value passed through `f`.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> DegreeFunction<T> {
        let family = match &self.family {
            Family::SetOp(t) => Family::SetOp(f(t)),
            Family::Vect(t) => Family::Vect(f(t)),
            Family::Length(ts) => Family::Length(ts.iter().map(&f).collect()),
            Family::Trivial => Family::Trivial,
            Family::Table { table, validated } => Family::Table {
                table: DegreeTable {
                    values: table.values.iter().map(|(k, v)| (*k, f(v))).collect(),
                },
                validated: *validated,
            },
        };
        DegreeFunction { family }
    }

    fn unchecked_value<C: RegularCategory>(&self, cat: &C, e: &C::Mor) -> Result<S> {
        let defect = cat.defect(e);
        match (&self.family, C::TAG) {
            (Family::SetOp(t), BackendTag::SetOp) | (Family::Vect(t), BackendTag::Vect) => {
                Ok(t.pow(defect))
            }
            (Family::Length(ts), BackendTag::Vect) => match ts.as_slice() {
                [t] => Ok(t.pow(defect)),
                _ => Err(Error::Invalid(format!(
                    "vector spaces have one simple object, got {} parameters",
                    ts.len()
                ))),
            },
            (Family::Trivial, _) => Ok(S::one()),
            (Family::Table { table, .. }, _) => {
                let key = (cat.source(e), cat.target(e));
                table
                    .values
                    .get(&key)
                    .cloned()
                    .ok_or_else(|| Error::Invalid(format!("degree table has no entry for {key:?}")))
            }
            (_, tag) => Err(Error::Unsupported(format!(
                "{} degree function on the {tag:?} backend",
                self.family_name()
            ))),
        }
    }

    /// `δ(e)` for a surjection `e`.
    pub fn evaluate<C: RegularCategory>(&self, cat: &C, e: &C::Mor) -> Result<S> {
        require_surjective(cat, e)?;
        if let Family::Table {
            validated: false, ..
        } = self.family
        {
            return Err(Error::Contract(
                "degree table has not been validated".into(),
            ));
        }
        self.unchecked_value(cat, e)
    }
}

impl DegreeFunction<MultiPoly> {
    /// The universal member of a backend's family: `t` an indeterminate.
    pub fn symbolic(tag: BackendTag) -> Self {
        Self::natural(tag, MultiPoly::var("t"))
    }
}

/// How [`validate_degree_axioms`] chooses its test cases.
#[derive(Clone, Debug)]
pub enum Validation {
    /// Every object up to `bound`.
    Exhaustive { bound: Obj },
    /// `budget` random cases per axiom among objects up to `bound`.
    Sampled {
        bound: Obj,
        budget: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Counterexample {
    pub axiom: &'static str,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct AxiomReport {
    pub d1_checked: usize,
    pub d2_checked: usize,
    pub d3_checked: usize,
    pub counterexample: Option<Counterexample>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

fn surjections<C: RegularCategory>(cat: &C, x: Obj, y: Obj) -> Result<Vec<C::Mor>> {
    Ok(cat
        .homs(x, y)?
        .into_iter()
        .filter(|e| cat.is_surjective(e))
        .collect())
}

fn pick<T: Clone>(items: Vec<T>, sample: &mut Option<(StdRng, usize)>) -> Vec<T> {
    match sample {
        None => items,
        Some((rng, budget)) => {
            let mut items = items;
            items.shuffle(rng);
            items.truncate(*budget);
            items
        }
    }
}

/// Checks D1 (`δ(1) = 1`), D2 (pullback invariance) and D3
/// (multiplicativity), stopping at the first failure.
pub fn validate_degree_axioms<S: Scalar, C: RegularCategory>(
    delta: &DegreeFunction<S>,
    cat: &C,
    mode: &Validation,
) -> Result<AxiomReport> {
    let (bound, mut sample) = match *mode {
        Validation::Exhaustive { bound } => (bound, None),
        Validation::Sampled {
            bound,
            budget,
            seed,
        } => (bound, Some((StdRng::seed_from_u64(seed), budget))),
    };
    let mut report = AxiomReport {
        d1_checked: 0,
        d2_checked: 0,
        d3_checked: 0,
        counterexample: None,
    };
    let value = |e: &C::Mor| delta.unchecked_value(cat, e);

    for x in 0..=bound {
        report.d1_checked += 1;
        let v = value(&cat.identity(x))?;
        if !v.is_one() {
            report.counterexample = Some(Counterexample {
                axiom: "D1",
                detail: format!("δ(1_{x}) = {v}"),
            });
            return Ok(report);
        }
    }

    let mut all_surj: Vec<C::Mor> = Vec::new();
    for x in 0..=bound {
        for y in 0..=x {
            all_surj.extend(surjections(cat, x, y)?);
        }
    }

    // D2: base change of e: x ↠ y along every f: z → y.
    let mut squares = Vec::new();
    for e in &all_surj {
        let y = cat.target(e);
        for z in 0..=bound {
            for f in cat.homs(z, y)? {
                squares.push((e.clone(), f));
            }
        }
    }
    for (e, f) in pick(squares, &mut sample) {
        let Some(span) = cat.pullback(&f, &e)? else {
            continue;
        };
        report.d2_checked += 1;
        let (a, b) = (value(&e)?, value(&span.left)?);
        if a != b {
            report.counterexample = Some(Counterexample {
                axiom: "D2",
                detail: format!(
                    "δ({e:?}) = {a} but its pullback {:?} along {f:?} has δ = {b}",
                    span.left
                ),
            });
            return Ok(report);
        }
    }

    // D3: every composable pair.
    let mut pairs = Vec::new();
    for e1 in &all_surj {
        for e2 in all_surj
            .iter()
            .filter(|e2| cat.source(e2) == cat.target(e1))
        {
            pairs.push((e1.clone(), e2.clone()));
        }
    }
    for (e1, e2) in pick(pairs, &mut sample) {
        report.d3_checked += 1;
        let comp = cat.compose(&e2, &e1)?;
        let lhs = value(&comp)?;
        let rhs = value(&e2)? * value(&e1)?;
        if lhs != rhs {
            report.counterexample = Some(Counterexample {
                axiom: "D3",
                detail: format!("δ({e2:?} ∘ {e1:?}) = {lhs} ≠ {rhs}"),
            });
            return Ok(report);
        }
    }
    Ok(report)
}

fn require_pointed<C: RegularCategory>() -> Result<()> {
    match C::TAG {
        BackendTag::Vect => Ok(()),
        tag => Err(Error::Unsupported(format!(
            "the {tag:?} backend is not pointed"
        ))),
    }
}

/// Composition series of `x` along a maximal chain of subobjects.
#[derive(Clone, Debug)]
pub struct CompositionSeries<Sub> {
    pub chain: Vec<Sub>,
    /// Sizes of the successive quotients.
    pub factors: Vec<usize>,
}

/// Two composition series of `x`, built by always choosing the first
/// resp. the last covering subobject, with their factor multisets.
pub fn composition_factors<C: RegularCategory>(
    cat: &C,
    x: Obj,
) -> Result<(CompositionSeries<C::Sub>, CompositionSeries<C::Sub>)> {
    require_pointed::<C>()?;
    let subs = cat.subobjects(x)?;
    let series = |choose_last: bool| -> CompositionSeries<C::Sub> {
        let mut chain = vec![subs
            .iter()
            .find(|s| cat.sub_object(s) == 0)
            .expect("zero subobject")
            .clone()];
        loop {
            let cur = chain.last().unwrap().clone();
            let covers: Vec<&C::Sub> = subs
                .iter()
                .filter(|s| **s != cur && cat.sub_le(&cur, s))
                .filter(|s| {
                    !subs
                        .iter()
                        .any(|m| *m != cur && m != *s && cat.sub_le(&cur, m) && cat.sub_le(m, s))
                })
                .collect();
            let next = if choose_last {
                covers.last()
            } else {
                covers.first()
            };
            match next {
                Some(s) => chain.push((*s).clone()),
                None => break,
            }
        }
        let factors = chain
            .windows(2)
            .map(|w| cat.sub_object(&w[1]) - cat.sub_object(&w[0]))
            .collect();
        CompositionSeries { chain, factors }
    };
    Ok((series(false), series(true)))
}

/// Rank functions `ρ` on a pointed backend, `ρ(x) = δ(x ↠ 0)`.
#[derive(Clone, Debug, PartialEq)]
pub enum RankFunction<S> {
    /// `ρ(x) = t^{dim x}`.
    Power(S),
    Trivial,
}

impl<S: Scalar> RankFunction<S> {
    pub fn value(&self, dim: usize) -> S {
        match self {
            RankFunction::Power(t) => t.pow(dim as u32),
            RankFunction::Trivial => S::one(),
        }
    }
}

/// `δ(e) := ρ(ker e)`.
pub fn degree_from_rank<S: Scalar>(rho: &RankFunction<S>) -> DegreeFunction<S> {
    match rho {
        RankFunction::Power(t) => DegreeFunction::vect(t.clone()),
        RankFunction::Trivial => DegreeFunction::trivial(),
    }
}

/// `ρ(x) := δ(x ↠ 0)`; recognises the shipped families by their values
/// on the objects up to `bound`.
pub fn rank_from_degree<S: Scalar, C: RegularCategory>(
    delta: &DegreeFunction<S>,
    cat: &C,
    bound: Obj,
) -> Result<RankFunction<S>> {
    require_pointed::<C>()?;
    let values: Vec<S> = (0..=bound)
        .map(|d| delta.evaluate(cat, &cat.to_terminal(d)))
        .collect::<Result<_>>()?;
    if values.iter().all(|v| v.is_one()) {
        return Ok(RankFunction::Trivial);
    }
    let t = values
        .get(1)
        .cloned()
        .ok_or_else(|| Error::Invalid("bound too small to read off a rank function".into()))?;
    let candidate = RankFunction::Power(t);
    if values
        .iter()
        .enumerate()
        .all(|(d, v)| candidate.value(d) == *v)
    {
        Ok(candidate)
    } else {
        Err(Error::Unsupported(
            "rank function outside the shipped families".into(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::backend::{FinSetOp, FinVectFq, Limits, SetMap};
    use num_traits::One;

    fn t() -> MultiPoly {
        MultiPoly::var("t")
    }

    #[test]
    fn setop_inclusion_two_into_three() {
        let cat = FinSetOp::default();
        let e = FinSetOp::from_injection(2, 3, vec![0, 2]).unwrap();
        assert_eq!(DegreeFunction::setop(t()).evaluate(&cat, &e).unwrap(), t());
        assert!(DegreeFunction::setop(t())
            .evaluate(&cat, &SetMap::new(1, 2, vec![0, 0]).unwrap())
            .is_err());
    }

    #[test]
    fn vect_projection() {
        let cat = FinVectFq::new(2, Limits::default()).unwrap();
        let e = cat.product(1, 1).left;
        assert_eq!(DegreeFunction::vect(t()).evaluate(&cat, &e).unwrap(), t());
        assert!(DegreeFunction::vect(t())
            .evaluate(&cat, &cat.identity(3))
            .unwrap()
            .is_one());
    }

    #[test]
    fn family_mismatch_is_unsupported() {
        let cat = FinSetOp::default();
        let r = DegreeFunction::vect(t()).evaluate(&cat, &cat.identity(1));
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn corrupted_family_fails() {
        let cat = FinSetOp::default();
        let bad = DegreeFunction::raw_table(DegreeTable::from_fn(6, |a, _| t().pow(a as u32)));
        let rep = validate_degree_axioms(&bad, &cat, &Validation::Exhaustive { bound: 3 }).unwrap();
        assert!(!rep.passed());
        assert!(DegreeFunction::validated_table(
            &cat,
            DegreeTable::from_fn(6, |a, _| t().pow(a as u32)),
            3
        )
        .is_err());
        let good = DegreeFunction::validated_table(
            &cat,
            DegreeTable::from_fn(6, |a, b| t().pow((a - b) as u32)),
            3,
        )
        .unwrap();
        assert_eq!(
            good.evaluate(&cat, &cat.to_terminal(2)).unwrap(),
            t().pow(2)
        );
    }

    #[test]
    fn unvalidated_table_refuses() {
        let cat = FinSetOp::default();
        let raw = DegreeFunction::raw_table(DegreeTable::from_fn(2, |_, _| MultiPoly::one()));
        assert!(matches!(
            raw.evaluate(&cat, &cat.identity(1)),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn flags_of_plane() {
        let cat = FinVectFq::new(2, Limits::default()).unwrap();
        let (a, b) = composition_factors(&cat, 2).unwrap();
        assert_ne!(a.chain, b.chain);
        assert_eq!(a.factors, vec![1, 1]);
        assert_eq!(b.factors, vec![1, 1]);
        assert!(composition_factors(&cat, 0).unwrap().0.factors.is_empty());
        assert!(composition_factors(&FinSetOp::default(), 2).is_err());
    }

    #[test]
    fn rank_round_trip() {
        let cat = FinVectFq::new(2, Limits::default()).unwrap();
        let rho = RankFunction::Power(t());
        let delta = degree_from_rank(&rho);
        assert_eq!(delta, DegreeFunction::vect(t()));
        assert_eq!(rank_from_degree(&delta, &cat, 3).unwrap(), rho);
        let triv: DegreeFunction<MultiPoly> = DegreeFunction::trivial();
        assert_eq!(
            rank_from_degree(&triv, &cat, 2).unwrap(),
            RankFunction::Trivial
        );
    }
}
