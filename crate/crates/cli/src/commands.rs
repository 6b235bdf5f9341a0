//! Command dispatch: each subcommand maps onto one family of core
//! operations and produces a [`Report`].

use std::any::Any;
use std::fmt::Write as _;

use num_traits::{One, Zero};
use serde_json::{json, Value};
use tenv_core::backend::{
    BackendTag, FinSetOp, FinVectFq, FqMat, Limits, LinearMap, Obj, RegularCategory, SetMap,
    Subspace,
};
use tenv_core::degree::{validate_degree_axioms, DegreeFunction, DegreeTable, Validation};
use tenv_core::envelope::Envelope;
use tenv_core::linalg::factored_string;
use tenv_core::radical::{
    gram_omega, indecomposable_surjections, nonsingularity_verdict, omega, pairing_matrix, radical,
    semisimplicity_bound, simple_census, singular_parameters,
};
use tenv_core::relations::{relation, relation_json, setop_relation, Relation};
use tenv_core::scalar::{MultiPoly, RatFunc, Rational, Scalar};
use tenv_core::specialization::{
    functoriality_check, interpolation_dim_check, pstar_and_invariants, specialize_basis,
    uniformity_and_adapted_check, UniformFunctor,
};
use tenv_core::Error;

use crate::config::{DEFAULT_SINGULAR_BOUND, DEFAULT_VALIDATION_BOUND};
use crate::scene::{
    DegreeSpec, MorphismData, MorphismSpec, Param, RelationBody, RelationSpec, Scene, SchemaError,
    ValidationMode,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Hom,
    Compose,
    Gram,
    Omega,
    Singular,
    Endalg,
    Radical,
    Census,
    Specialize,
    ValidateDegree,
}

/// One computation rendered three ways.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub json: Value,
    pub tsv: String,
    pub text: String,
}

#[derive(Debug)]
pub enum CliError {
    Schema(SchemaError),
    Core(Error),
    /// The computation ran but a mathematical check failed; the report is
    /// still emitted.
    Verdict(Box<Report>, String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Schema(_) => 2,
            CliError::Core(Error::ResourceBound { .. }) => 3,
            CliError::Core(Error::Contract(_) | Error::IdenticallyZero) => 4,
            CliError::Core(_) => 2,
            CliError::Verdict(..) => 4,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::Schema(e)
    }
}

type Out = std::result::Result<Report, CliError>;

fn missing(pointer: &str, what: &str) -> CliError {
    CliError::Schema(SchemaError {
        pointer: pointer.into(),
        message: format!("this command needs {what}"),
    })
}

/// Backend-specific scene decoding.
pub trait SceneBackend: RegularCategory {
    fn morphism(&self, spec: &MorphismSpec) -> tenv_core::Result<Self::Mor>;
    fn relation(&self, spec: &RelationSpec) -> tenv_core::Result<Relation<Self::Sub>>;
    fn morphism_json(&self, f: &Self::Mor) -> Value;
    fn field(&self) -> u32;
}

impl SceneBackend for FinSetOp {
    fn morphism(&self, spec: &MorphismSpec) -> tenv_core::Result<SetMap> {
        match &spec.data {
            MorphismData::Map(m) => SetMap::new(spec.source, spec.target, m.clone()),
            MorphismData::Matrix(_) => Err(Error::Invalid("setop morphisms are maps".into())),
        }
    }

    fn relation(
        &self,
        spec: &RelationSpec,
    ) -> tenv_core::Result<Relation<tenv_core::backend::Partition>> {
        match &spec.body {
            RelationBody::Partition(blocks) => setop_relation(spec.left, spec.right, blocks),
            RelationBody::Basis(_) => Err(Error::Invalid("setop relations are partitions".into())),
        }
    }

    fn morphism_json(&self, f: &SetMap) -> Value {
        json!({ "source": f.src, "target": f.tgt, "map": f.map })
    }

    fn field(&self) -> u32 {
        0
    }
}

impl SceneBackend for FinVectFq {
    fn morphism(&self, spec: &MorphismSpec) -> tenv_core::Result<LinearMap> {
        match &spec.data {
            MorphismData::Matrix(rows) => Ok(self.linear_map(FqMat::from_rows(
                spec.target,
                spec.source,
                rows.iter().flatten().copied().collect(),
            ))),
            MorphismData::Map(_) => Err(Error::Invalid("vect morphisms are matrices".into())),
        }
    }

    fn relation(&self, spec: &RelationSpec) -> tenv_core::Result<Relation<Subspace>> {
        match &spec.body {
            RelationBody::Basis(rows) => {
                let n = spec.left + spec.right;
                let m = FqMat::from_rows(rows.len(), n, rows.iter().flatten().copied().collect());
                relation(self, spec.left, spec.right, Subspace::span(self.q(), &m))
            }
            RelationBody::Partition(_) => {
                Err(Error::Invalid("vect relations are subspaces".into()))
            }
        }
    }

    fn morphism_json(&self, f: &LinearMap) -> Value {
        let rows: Vec<&[u32]> = (0..f.m.rows()).map(|r| f.m.row(r)).collect();
        json!({ "source": f.src, "target": f.tgt, "matrix": rows })
    }

    fn field(&self) -> u32 {
        self.q()
    }
}

/// Scalar as JSON: integers become numbers, everything else a string.
pub fn scalar_json<S: Scalar>(s: &S) -> Value {
    let text = s.to_string();
    match text.parse::<i64>() {
        Ok(n) => json!(n),
        Err(_) => json!(text),
    }
}

fn factored<S: Scalar + Any>(s: &S) -> String {
    match (s as &dyn Any).downcast_ref::<MultiPoly>() {
        Some(p) if !p.is_zero() => factored_string(p),
        _ => s.to_string(),
    }
}

fn tsv_line(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join("\t"));
    out.push('\n');
}

enum Degree {
    Poly(DegreeFunction<MultiPoly>),
    Rat(DegreeFunction<Rational>),
}

macro_rules! with_degree {
    ($deg:expr, |$d:ident| $body:expr) => {
        match $deg {
            Degree::Poly($d) => $body,
            Degree::Rat($d) => $body,
        }
    };
}

/// Table bound: the largest object for which every pullback needed by
/// the axioms still has a tabulated entry.
fn table_bound(table: &std::collections::BTreeMap<(usize, usize), Rational>) -> usize {
    table.keys().map(|k| k.0).max().unwrap_or(0) / 2
}

fn degree<C: RegularCategory>(scene: &Scene, cat: &C, validated: bool) -> Result<Degree, CliError> {
    Ok(match &scene.degree {
        DegreeSpec::Natural(Param::Symbolic) => Degree::Poly(DegreeFunction::symbolic(C::TAG)),
        DegreeSpec::Natural(Param::Value(t)) => {
            Degree::Rat(DegreeFunction::natural(C::TAG, t.clone()))
        }
        DegreeSpec::Trivial => Degree::Rat(DegreeFunction::trivial()),
        DegreeSpec::Table(t) => {
            let table = DegreeTable::new(t.clone());
            if validated {
                Degree::Rat(DegreeFunction::validated_table(cat, table, table_bound(t))?)
            } else {
                Degree::Rat(DegreeFunction::raw_table(table))
            }
        }
    })
}

fn size(scene: &Scene) -> Result<Obj, CliError> {
    scene
        .size
        .ok_or_else(|| missing("/size", "an object size (--size)"))
}

fn object_json<C: RegularCategory>(cat: &C, x: Obj) -> Value {
    serde_json::to_value(cat.describe(x)).expect("handle serializes")
}

pub fn execute(scene: &Scene, limits: Limits, cmd: Command) -> Out {
    match scene.backend {
        BackendTag::SetOp => run(&FinSetOp::new(limits), scene, cmd),
        BackendTag::Vect => run(&FinVectFq::new(scene.q, limits)?, scene, cmd),
    }
}

fn run<C: SceneBackend>(cat: &C, scene: &Scene, cmd: Command) -> Out {
    match cmd {
        Command::Hom => hom(cat, scene),
        Command::Compose => compose(cat, scene),
        Command::Gram => with_degree!(degree(scene, cat, true)?, |d| gram(cat, scene, &d)),
        Command::Omega => with_degree!(degree(scene, cat, true)?, |d| omega_cmd(cat, scene, &d)),
        Command::Singular => singular(cat, scene),
        Command::Endalg => with_degree!(degree(scene, cat, true)?, |d| endalg(cat, scene, d)),
        Command::Radical => radical_cmd(cat, scene),
        Command::Census => census(cat, scene),
        Command::Specialize => specialize_cmd(cat, scene),
        Command::ValidateDegree => validate(cat, scene),
    }
}

fn hom<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    let x = size(scene)?;
    let y = scene.target.unwrap_or(x);
    let basis = cat.subobjects(cat.product(x, y).obj)?;
    let rels: Vec<Value> = basis
        .iter()
        .map(|b| {
            relation_json(
                cat,
                &Relation {
                    left: x,
                    right: y,
                    body: b.clone(),
                },
            )
        })
        .collect();
    let mut tsv = String::new();
    tsv_line(&mut tsv, &["index".into(), "relation".into()]);
    let mut text = format!("Hom([{x}], [{y}]) has dimension {}\n", rels.len());
    for (i, r) in rels.iter().enumerate() {
        tsv_line(&mut tsv, &[i.to_string(), r.to_string()]);
        let _ = writeln!(text, "  b{i} = {r}");
    }
    Ok(Report {
        json: json!({
            "source": object_json(cat, x),
            "target": object_json(cat, y),
            "dim": rels.len(),
            "basis": rels,
        }),
        tsv,
        text,
    })
}

fn compose<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    if scene.relations.len() != 2 {
        return Err(missing(
            "/relations",
            "exactly two relations r: x → y and s: y → z",
        ));
    }
    let r = cat.relation(&scene.relations[0])?;
    let s = cat.relation(&scene.relations[1])?;
    let result = with_degree!(degree(scene, cat, true)?, |d| {
        tenv_core::relations::weighted_compose(cat, &d, &r, &s)?.map(|w| {
            (
                scalar_json(&w.coeff),
                w.coeff.to_string(),
                relation_json(cat, &w.rel),
            )
        })
    });
    let (json, tsv, text) = match result {
        Some((c, cs, rel)) => (
            json!({ "coefficient": c, "relation": rel }),
            format!("coefficient\trelation\n{cs}\t{rel}\n"),
            format!("s ∘ r = {cs} · {rel}\n"),
        ),
        None => (
            json!({ "coefficient": 0, "relation": Value::Null }),
            "coefficient\trelation\n0\t\n".to_string(),
            "s ∘ r = 0 (empty pullback)\n".to_string(),
        ),
    };
    Ok(Report { json, tsv, text })
}

/// `a * (b) * c` with multi-term factors parenthesised.
fn product_string(factors: &[String]) -> String {
    let shown: Vec<String> = factors
        .iter()
        .filter(|f| f.as_str() != "1")
        .map(|f| {
            if f.contains(' ') {
                format!("({f})")
            } else {
                f.clone()
            }
        })
        .collect();
    if shown.is_empty() {
        "1".into()
    } else {
        shown.join(" * ")
    }
}

fn gram<C: SceneBackend, S: Scalar + Any>(cat: &C, scene: &Scene, d: &DegreeFunction<S>) -> Out {
    let x = size(scene)?;
    let g = gram_omega(cat, d, x)?;
    let n = g.subobjects.len();
    let matrix: Vec<Vec<Value>> = (0..n)
        .map(|i| (0..n).map(|j| scalar_json(&g.matrix[(i, j)])).collect())
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (cat.sub_object(&g.subobjects[i]), i));
    let factors: Vec<Value> = order
        .iter()
        .map(|&i| {
            json!({
                "subobject": cat.sub_json(&g.subobjects[i]),
                "object": object_json(cat, cat.sub_object(&g.subobjects[i])),
                "omega": scalar_json(&g.omega_factors[i]),
            })
        })
        .collect();
    let verdict = if g.factorization_holds {
        "pass"
    } else {
        "fail"
    };
    let det = factored(&g.det);
    let mut tsv = String::new();
    tsv_line(
        &mut tsv,
        &["subobject".into(), "size".into(), "omega".into()],
    );
    for &i in &order {
        tsv_line(
            &mut tsv,
            &[
                cat.sub_json(&g.subobjects[i]).to_string(),
                cat.sub_object(&g.subobjects[i]).to_string(),
                g.omega_factors[i].to_string(),
            ],
        );
    }
    tsv_line(&mut tsv, &["det".into(), String::new(), det.clone()]);
    let omega_str = product_string(
        &order
            .iter()
            .map(|&i| g.omega_factors[i].to_string())
            .collect::<Vec<_>>(),
    );
    let text = format!(
        "Gram matrix of sub([{x}]): {n} x {n}\ndet = {det}\nOmega = {omega_str}\nfactorization: {verdict}\n"
    );
    let report = Report {
        json: json!({
            "object": object_json(cat, x),
            "matrix": matrix,
            "det": det,
            "det_expanded": g.det.to_string(),
            "factors": factors,
            "factorization": verdict,
        }),
        tsv,
        text,
    };
    if g.factorization_holds {
        Ok(report)
    } else {
        Err(CliError::Verdict(
            Box::new(report),
            "det differs from the product of ω factors".into(),
        ))
    }
}

fn omega_cmd<C: SceneBackend, S: Scalar>(cat: &C, scene: &Scene, d: &DegreeFunction<S>) -> Out {
    let surjections = match &scene.morphism {
        Some(m) => vec![cat.morphism(m)?],
        None => indecomposable_surjections(cat, size(scene)?)?,
    };
    let mut rows = Vec::new();
    let mut tsv = String::new();
    let mut text = String::new();
    tsv_line(
        &mut tsv,
        &[
            "source".into(),
            "target".into(),
            "morphism".into(),
            "omega".into(),
        ],
    );
    for e in &surjections {
        let w = omega(cat, d, e)?;
        let mj = cat.morphism_json(e);
        let terms: Vec<Value> = w
            .terms
            .iter()
            .map(|t| json!({ "subobject": cat.sub_json(&t.w), "mu": t.mu, "delta": scalar_json(&t.delta) }))
            .collect();
        rows.push(json!({
            "morphism": mj,
            "source": cat.source(e),
            "target": cat.target(e),
            "omega": scalar_json(&w.value),
            "terms": terms,
        }));
        tsv_line(
            &mut tsv,
            &[
                cat.source(e).to_string(),
                cat.target(e).to_string(),
                mj.to_string(),
                w.value.to_string(),
            ],
        );
        let _ = writeln!(
            text,
            "omega({} ↠ {}) = {}",
            cat.source(e),
            cat.target(e),
            w.value
        );
    }
    Ok(Report {
        json: json!({ "omegas": rows }),
        tsv,
        text,
    })
}

fn singular<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    let bound = scene.max_size.unwrap_or(DEFAULT_SINGULAR_BOUND);
    let rep = singular_parameters(cat, bound)?;
    let params: Vec<Value> = rep.singular_params.iter().map(scalar_json).collect();
    let mut json = json!({ "singular_params": params, "bound": bound });
    let mut tsv = String::new();
    tsv_line(
        &mut tsv,
        &["source".into(), "target".into(), "omega".into()],
    );
    for (a, b, w) in &rep.omegas {
        tsv_line(&mut tsv, &[a.to_string(), b.to_string(), w.clone()]);
    }
    let shown: Vec<String> = rep.singular_params.iter().map(|r| r.to_string()).collect();
    let mut text = format!(
        "singular parameters for sources up to {bound}: {{{}}}\n",
        shown.join(", ")
    );
    if let DegreeSpec::Natural(Param::Value(t)) = &scene.degree {
        let v = nonsingularity_verdict(cat, &DegreeFunction::natural(C::TAG, t.clone()), bound)?;
        let witness = v.witness.as_ref().map(|(e, _)| cat.morphism_json(e));
        json["verdict"] = json!({
            "t": scalar_json(t),
            "nonsingular": v.nonsingular,
            "checked": v.checked,
            "witness": witness,
        });
        let _ = writeln!(
            text,
            "t = {t}: {}",
            if v.nonsingular {
                "non-singular"
            } else {
                "singular"
            }
        );
    }
    Ok(Report { json, tsv, text })
}

fn endalg<C: SceneBackend, S: Scalar>(cat: &C, scene: &Scene, d: DegreeFunction<S>) -> Out {
    let x = size(scene)?;
    let env = Envelope::new(cat.clone(), d);
    let alg = env.end_algebra(x)?;
    let assoc = if alg.is_associative() { "pass" } else { "fail" };
    let unit = if alg.unit_is_identity() {
        "pass"
    } else {
        "fail"
    };
    let header =
        json!({ "object": object_json(cat, x), "dim": alg.dim, "scalar": S::KIND.to_string() });
    let table = alg.table();
    let mut tsv = format!("# {header}\n");
    tsv_line(
        &mut tsv,
        &["i".into(), "j".into(), "k".into(), "coeff".into()],
    );
    for (i, j, k, c) in &table {
        tsv_line(
            &mut tsv,
            &[i.to_string(), j.to_string(), k.to_string(), c.to_string()],
        );
    }
    let rows: Vec<Value> = table
        .iter()
        .map(|(i, j, k, c)| json!([i, j, k, scalar_json(c)]))
        .collect();
    let text = format!(
        "End([{x}]): dimension {}, {} nonzero structure constants\nassociativity: {assoc}\nunit: {unit}\n",
        alg.dim,
        table.len()
    );
    let report = Report {
        json: json!({
            "object": header["object"],
            "dim": alg.dim,
            "scalar": header["scalar"],
            "associativity": assoc,
            "unit": unit,
            "table": rows,
        }),
        tsv,
        text,
    };
    if assoc == "pass" && unit == "pass" {
        Ok(report)
    } else {
        Err(CliError::Verdict(
            Box::new(report),
            "endomorphism algebra axioms failed".into(),
        ))
    }
}

fn radical_cmd<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    let x = size(scene)?;
    let y = scene.target.unwrap_or(x);
    match degree(scene, cat, true)? {
        Degree::Rat(d) => {
            let param = d.parameter().map_or(Value::Null, scalar_json);
            let env = Envelope::new(cat.clone(), d);
            let rad = radical(&env, x, y)?;
            let basis: Vec<Vec<Value>> = rad
                .basis
                .iter()
                .map(|v| v.iter().map(scalar_json).collect())
                .collect();
            let mut tsv = String::new();
            tsv_line(&mut tsv, &["vector".into(), "coordinates".into()]);
            for (i, v) in rad.basis.iter().enumerate() {
                let coords: Vec<String> = v.iter().map(|c| c.to_string()).collect();
                tsv_line(&mut tsv, &[i.to_string(), coords.join(" ")]);
            }
            let text = format!(
                "radical of Hom([{x}], [{y}]) at t = {}: dimension {} of {}\n",
                param, rad.radical_dim, rad.hom_dim
            );
            Ok(Report {
                json: json!({
                    "source": object_json(cat, x),
                    "target": object_json(cat, y),
                    "t": param,
                    "hom_dim": rad.hom_dim,
                    "radical_dim": rad.radical_dim,
                    "basis": basis,
                }),
                tsv,
                text,
            })
        }
        Degree::Poly(d) => {
            let env = Envelope::new(cat.clone(), d);
            let form = pairing_matrix(&env, x, y)?;
            let det = if form.rows() == 0 {
                MultiPoly::one()
            } else {
                form.determinant()?
            };
            let generic = if det.is_zero() {
                form.cols() - form.map(|p| RatFunc::from_poly(p.clone())).rank()
            } else {
                0
            };
            let det_s = factored(&det);
            let text = format!(
                "trace form on Hom([{x}], [{y}]): det = {det_s}\ngeneric radical dimension: {generic}\n"
            );
            Ok(Report {
                json: json!({
                    "source": object_json(cat, x),
                    "target": object_json(cat, y),
                    "t": "t",
                    "hom_dim": form.cols(),
                    "trace_form_det": det_s,
                    "generic_radical_dim": generic,
                }),
                tsv: format!(
                    "hom_dim\ttrace_form_det\tgeneric_radical_dim\n{}\t{det_s}\t{generic}\n",
                    form.cols()
                ),
                text,
            })
        }
    }
}

/// A non-singular parameter for splitting blocks when the scene leaves
/// `t` symbolic.
fn census_parameter<C: RegularCategory>(cat: &C, x: Obj) -> Result<Rational, CliError> {
    let candidates = [
        Rational::new(7, 2),
        Rational::new(1, 2),
        Rational::from_integer(-1),
        Rational::new(-5, 2),
    ];
    for t in candidates {
        let v = nonsingularity_verdict(
            cat,
            &DegreeFunction::natural(C::TAG, t.clone()),
            semisimplicity_bound(x),
        )?;
        if v.nonsingular {
            return Ok(t);
        }
    }
    Err(CliError::Core(Error::Contract(
        "no non-singular candidate parameter".into(),
    )))
}

fn census<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    let x = size(scene)?;
    let t = match &scene.degree {
        DegreeSpec::Natural(Param::Value(t)) => t.clone(),
        DegreeSpec::Natural(Param::Symbolic) => census_parameter(cat, x)?,
        _ => return Err(missing("/degree", "the natural degree family")),
    };
    let rep = simple_census(cat, x, cat.field(), &t)?;
    let json = serde_json::to_value(&rep).expect("census serializes");
    let mut tsv = String::new();
    tsv_line(&mut tsv, &["subquotient".into(), "irreps".into()]);
    for (y, k) in &rep.subquotients {
        tsv_line(&mut tsv, &[y.to_string(), k.to_string()]);
    }
    let dims: Vec<String> = rep
        .blocks
        .split_dims()
        .iter()
        .map(|d| d.to_string())
        .collect();
    let text = format!(
        "End([{x}]): predicted blocks {}, center dimension over Q(t) {}, blocks at t = {t}: [{}], sum of squares {} of {}\ncensus: {}\n",
        rep.predicted_blocks,
        rep.symbolic.center_dim,
        dims.join(", "),
        rep.blocks.sum_of_squares(),
        rep.symbolic.algebra_dim,
        if rep.agrees { "pass" } else { "fail" }
    );
    let report = Report { json, tsv, text };
    if rep.agrees {
        Ok(report)
    } else {
        Err(CliError::Verdict(
            Box::new(report),
            "block census disagrees with the prediction".into(),
        ))
    }
}

fn specialize_cmd<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    let key = if C::TAG == BackendTag::SetOp {
        "/X"
    } else {
        "/n"
    };
    let xs = scene
        .uniform
        .ok_or_else(|| missing(key, "a uniform functor (--X for setop, --n for vect)"))?;
    let x = scene.size.unwrap_or(1);
    let p = UniformFunctor::new(cat.clone(), xs)?;
    let t = match &scene.degree {
        DegreeSpec::Natural(Param::Value(t)) => t.clone(),
        DegreeSpec::Natural(Param::Symbolic) => p.adapted_parameter().clone(),
        _ => return Err(missing("/degree", "the natural degree family")),
    };
    let d = DegreeFunction::natural(C::TAG, t.clone());
    let adapted = uniformity_and_adapted_check(&p, &d, x.max(2))?;
    let env = Envelope::new(cat.clone(), d);
    let func = functoriality_check(&p, &env, x)?;
    let orbits = pstar_and_invariants(&p, &env, x)?;
    let interp = interpolation_dim_check(&p, x, x)?;
    let mats = specialize_basis(&p, &env, x, x)?;
    let mut tsv = String::new();
    tsv_line(
        &mut tsv,
        &["basis".into(), "row".into(), "col".into(), "value".into()],
    );
    for (b, m) in mats.iter().enumerate() {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !m[(r, c)].is_zero() {
                    tsv_line(
                        &mut tsv,
                        &[
                            b.to_string(),
                            r.to_string(),
                            c.to_string(),
                            m[(r, c)].to_string(),
                        ],
                    );
                }
            }
        }
    }
    let verdict = |ok: bool| if ok { "pass" } else { "fail" };
    let text = format!(
        "P = Hom(X, -) with |P([1])| = {}, t = {t}\nadapted: {}\nleft exact: {}\nfunctoriality: {}\nP*-orbits: {} of {} elements, invariant rank {}\ninterpolation: {} = {} ({})\n",
        p.adapted_parameter(),
        verdict(adapted.adapted),
        verdict(adapted.left_exact),
        verdict(func.holds),
        orbits.orbits,
        orbits.p_size,
        orbits.invariant_rank,
        interp.quotient_dim,
        interp.equivariant_dim,
        verdict(interp.holds),
    );
    Ok(Report {
        json: json!({
            "t": scalar_json(&t),
            "adapted_parameter": scalar_json(p.adapted_parameter()),
            "adapted": adapted,
            "functoriality": func,
            "orbits": orbits,
            "interpolation": interp,
        }),
        tsv,
        text,
    })
}

fn validate<C: SceneBackend>(cat: &C, scene: &Scene) -> Out {
    let bound = scene.max_size.unwrap_or(DEFAULT_VALIDATION_BOUND);
    let mode = match scene.validation {
        ValidationMode::Exhaustive => Validation::Exhaustive { bound },
        ValidationMode::Sampled { budget, seed } => Validation::Sampled {
            bound,
            budget,
            seed,
        },
    };
    let (family, report) = with_degree!(degree(scene, cat, false)?, |d| {
        (d.family_name(), validate_degree_axioms(&d, cat, &mode)?)
    });
    let verdict = if report.passed() { "pass" } else { "fail" };
    let mut json = serde_json::to_value(&report).expect("report serializes");
    json["family"] = json!(family);
    json["bound"] = json!(bound);
    json["verdict"] = json!(verdict);
    let tsv = format!(
        "axiom\tchecked\nD1\t{}\nD2\t{}\nD3\t{}\n",
        report.d1_checked, report.d2_checked, report.d3_checked
    );
    let mut text = format!(
        "{family} degree function up to size {bound}: D1 {} cases, D2 {} cases, D3 {} cases: {verdict}\n",
        report.d1_checked, report.d2_checked, report.d3_checked
    );
    if let Some(cx) = &report.counterexample {
        let _ = writeln!(text, "counterexample to {}: {}", cx.axiom, cx.detail);
    }
    let out = Report { json, tsv, text };
    match &report.counterexample {
        None => Ok(out),
        Some(cx) => Err(CliError::Verdict(
            Box::new(out),
            format!("degree function violates {}", cx.axiom),
        )),
    }
}
