//! Scene descriptions: parsing and validation against
//! `schema/scene.schema.json`, with JSON-pointer diagnostics.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{Map, Value};
use tenv_core::backend::{is_prime, BackendTag};
use tenv_core::scalar::Rational;

use crate::config::{Format, LimitOverrides};

/// The published schema.
pub const SCHEMA: &str = include_str!("../schema/scene.schema.json");

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemaError {
    pub pointer: String,
    pub message: String,
}

impl fmt::Display for SchemaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let at = if self.pointer.is_empty() {
            "/"
        } else {
            &self.pointer
        };
        write!(f, "{} (at {at})", self.message)
    }
}

impl std::error::Error for SchemaError {}

type Parse<T> = std::result::Result<T, SchemaError>;

fn err<T>(pointer: &str, message: impl Into<String>) -> Parse<T> {
    Err(SchemaError {
        pointer: pointer.to_string(),
        message: message.into(),
    })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Param {
    Symbolic,
    Value(Rational),
}

#[derive(Clone, Debug, PartialEq)]
pub enum DegreeSpec {
    Natural(Param),
    Trivial,
    Table(BTreeMap<(usize, usize), Rational>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MorphismData {
    Map(Vec<usize>),
    Matrix(Vec<Vec<u32>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismSpec {
    pub source: usize,
    pub target: usize,
    pub data: MorphismData,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelationBody {
    Partition(Vec<Vec<String>>),
    Basis(Vec<Vec<u32>>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationSpec {
    pub left: usize,
    pub right: usize,
    pub body: RelationBody,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    Exhaustive,
    Sampled { budget: usize, seed: u64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scene {
    pub backend: BackendTag,
    pub q: u64,
    pub size: Option<usize>,
    pub target: Option<usize>,
    pub degree: DegreeSpec,
    pub morphism: Option<MorphismSpec>,
    pub relations: Vec<RelationSpec>,
    /// `X` for sets, `n` for vector spaces.
    pub uniform: Option<usize>,
    pub max_size: Option<usize>,
    pub validation: ValidationMode,
    pub limits: LimitOverrides,
    pub format: Option<Format>,
}

struct Obj<'a> {
    ptr: String,
    map: &'a Map<String, Value>,
}

impl<'a> Obj<'a> {
    fn new(ptr: &str, v: &'a Value, allowed: &[&str]) -> Parse<Self> {
        let Some(map) = v.as_object() else {
            return err(ptr, "expected an object");
        };
        for k in map.keys() {
            if !allowed.contains(&k.as_str()) {
                return err(&format!("{ptr}/{k}"), format!("unknown field {k:?}"));
            }
        }
        Ok(Obj {
            ptr: ptr.to_string(),
            map,
        })
    }

    fn at(&self, key: &str) -> String {
        format!("{}/{key}", self.ptr)
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.map.get(key)
    }

    fn usize_opt(&self, key: &str) -> Parse<Option<usize>> {
        self.get(key).map(|v| uint(&self.at(key), v)).transpose()
    }

    fn usize_req(&self, key: &str) -> Parse<usize> {
        match self.get(key) {
            Some(v) => uint(&self.at(key), v),
            None => err(&self.at(key), format!("missing required field {key:?}")),
        }
    }

    fn str_opt(&self, key: &str) -> Parse<Option<&'a str>> {
        match self.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s)),
            Some(_) => err(&self.at(key), "expected a string"),
        }
    }
}

fn uint(ptr: &str, v: &Value) -> Parse<usize> {
    match v.as_u64() {
        Some(n) => usize::try_from(n).or_else(|_| err(ptr, "integer too large")),
        None => err(ptr, "expected a non-negative integer"),
    }
}

fn array<'a>(ptr: &str, v: &'a Value) -> Parse<&'a Vec<Value>> {
    v.as_array()
        .map_or_else(|| err(ptr, "expected an array"), Ok)
}

fn rational(ptr: &str, v: &Value) -> Parse<Rational> {
    match v {
        Value::Number(n) => match n.as_i64() {
            Some(k) => Ok(Rational::from_integer(k)),
            None => err(ptr, "expected an integer or a string \"p/q\""),
        },
        Value::String(s) => s
            .parse()
            .or_else(|_| err(ptr, format!("not a rational number: {s:?}"))),
        _ => err(ptr, "expected an integer or a string \"p/q\""),
    }
}

fn param(ptr: &str, v: &Value) -> Parse<Param> {
    match v {
        Value::String(s) if s.trim() == "t" => Ok(Param::Symbolic),
        _ => rational(ptr, v).map(Param::Value),
    }
}

fn matrix(ptr: &str, v: &Value, q: u64, cols: usize) -> Parse<Vec<Vec<u32>>> {
    array(ptr, v)?
        .iter()
        .enumerate()
        .map(|(r, row)| {
            let rp = format!("{ptr}/{r}");
            let row = array(&rp, row)?;
            if row.len() != cols {
                return err(&rp, format!("expected {cols} entries, found {}", row.len()));
            }
            row.iter()
                .enumerate()
                .map(|(c, x)| {
                    let cp = format!("{rp}/{c}");
                    let x = uint(&cp, x)?;
                    if x as u64 >= q {
                        return err(&cp, format!("entry {x} is not reduced mod {q}"));
                    }
                    Ok(x as u32)
                })
                .collect()
        })
        .collect()
}

fn parse_degree(v: &Value, backend: BackendTag) -> Parse<DegreeSpec> {
    let o = Obj::new("/degree", v, &["family", "t", "entries"])?;
    let family = o.str_opt("family")?.unwrap_or("natural");
    let t = o.get("t").map(|v| param(&o.at("t"), v)).transpose()?;
    let natural_ok = match (family, backend) {
        ("natural", _) | ("setop", BackendTag::SetOp) | ("vect", BackendTag::Vect) => true,
        ("setop", _) | ("vect", _) => {
            return err(
                &o.at("family"),
                format!("family {family:?} does not match the backend"),
            )
        }
        _ => false,
    };
    if natural_ok {
        if o.get("entries").is_some() {
            return err(
                &o.at("entries"),
                "entries are only allowed for the table family",
            );
        }
        return Ok(DegreeSpec::Natural(t.unwrap_or(Param::Symbolic)));
    }
    if t.is_some() {
        return err(&o.at("t"), format!("family {family:?} takes no parameter"));
    }
    match family {
        "trivial" => {
            if o.get("entries").is_some() {
                return err(
                    &o.at("entries"),
                    "entries are only allowed for the table family",
                );
            }
            Ok(DegreeSpec::Trivial)
        }
        "table" => {
            let ptr = o.at("entries");
            let Some(entries) = o.get("entries") else {
                return err(&ptr, "the table family needs entries");
            };
            let mut table = BTreeMap::new();
            for (i, e) in array(&ptr, entries)?.iter().enumerate() {
                let eo = Obj::new(&format!("{ptr}/{i}"), e, &["source", "target", "value"])?;
                let (s, t) = (eo.usize_req("source")?, eo.usize_req("target")?);
                if t > s {
                    return err(&eo.at("target"), "a surjection cannot increase size");
                }
                let Some(value) = eo.get("value") else {
                    return err(&eo.at("value"), "missing required field \"value\"");
                };
                if table
                    .insert((s, t), rational(&eo.at("value"), value)?)
                    .is_some()
                {
                    return err(&eo.ptr, format!("duplicate entry for ({s}, {t})"));
                }
            }
            Ok(DegreeSpec::Table(table))
        }
        other => err(&o.at("family"), format!("unknown degree family {other:?}")),
    }
}

fn parse_morphism(v: &Value, backend: BackendTag, q: u64) -> Parse<MorphismSpec> {
    let o = Obj::new("/morphism", v, &["source", "target", "map", "matrix"])?;
    let (source, target) = (o.usize_req("source")?, o.usize_req("target")?);
    let data = match backend {
        BackendTag::SetOp => {
            if o.get("matrix").is_some() {
                return err(&o.at("matrix"), "setop morphisms are given by \"map\"");
            }
            let Some(map) = o.get("map") else {
                return err(&o.at("map"), "missing required field \"map\"");
            };
            let items = array(&o.at("map"), map)?;
            if items.len() != target {
                return err(
                    &o.at("map"),
                    format!("expected {target} entries, found {}", items.len()),
                );
            }
            let mut out = Vec::with_capacity(target);
            for (i, x) in items.iter().enumerate() {
                let p = format!("{}/{i}", o.at("map"));
                let x = uint(&p, x)?;
                if x >= source {
                    return err(&p, format!("{x} is not an element of a {source}-set"));
                }
                out.push(x);
            }
            MorphismData::Map(out)
        }
        BackendTag::Vect => {
            if o.get("map").is_some() {
                return err(&o.at("map"), "vect morphisms are given by \"matrix\"");
            }
            let Some(m) = o.get("matrix") else {
                return err(&o.at("matrix"), "missing required field \"matrix\"");
            };
            let rows = matrix(&o.at("matrix"), m, q, source)?;
            if rows.len() != target {
                return err(
                    &o.at("matrix"),
                    format!("expected {target} rows, found {}", rows.len()),
                );
            }
            MorphismData::Matrix(rows)
        }
    };
    Ok(MorphismSpec {
        source,
        target,
        data,
    })
}

fn parse_label(ptr: &str, v: &Value, left: usize, right: usize) -> Parse<usize> {
    let Some(s) = v.as_str() else {
        return err(ptr, "expected a label such as \"x1\" or \"y2\"");
    };
    let bad = || {
        err(
            ptr,
            format!("{s:?} is not a label of a {left} → {right} relation"),
        )
    };
    let (side, num) = s.split_at(1.min(s.len()));
    let Ok(k) = num.parse::<usize>() else {
        return bad();
    };
    match side {
        "x" if (1..=left).contains(&k) => Ok(k - 1),
        "y" if (1..=right).contains(&k) => Ok(left + k - 1),
        _ => bad(),
    }
}

fn parse_relation(i: usize, v: &Value, backend: BackendTag, q: u64) -> Parse<RelationSpec> {
    let o = Obj::new(
        &format!("/relations/{i}"),
        v,
        &["left", "right", "partition", "basis"],
    )?;
    let (left, right) = (o.usize_req("left")?, o.usize_req("right")?);
    let body = match backend {
        BackendTag::SetOp => {
            if o.get("basis").is_some() {
                return err(&o.at("basis"), "setop relations are given by \"partition\"");
            }
            let ptr = o.at("partition");
            let Some(p) = o.get("partition") else {
                return err(&ptr, "missing required field \"partition\"");
            };
            let mut seen = vec![false; left + right];
            let mut blocks = Vec::new();
            for (b, block) in array(&ptr, p)?.iter().enumerate() {
                let bp = format!("{ptr}/{b}");
                let items = array(&bp, block)?;
                if items.is_empty() {
                    return err(&bp, "empty block");
                }
                let mut labels = Vec::new();
                for (k, label) in items.iter().enumerate() {
                    let lp = format!("{bp}/{k}");
                    let idx = parse_label(&lp, label, left, right)?;
                    if std::mem::replace(&mut seen[idx], true) {
                        return err(&lp, format!("label {label} appears in more than one place"));
                    }
                    labels.push(label.as_str().unwrap_or_default().to_string());
                }
                blocks.push(labels);
            }
            if let Some(missing) = seen.iter().position(|s| !s) {
                let label = if missing < left {
                    format!("x{}", missing + 1)
                } else {
                    format!("y{}", missing - left + 1)
                };
                return err(&ptr, format!("label {label} is not covered"));
            }
            RelationBody::Partition(blocks)
        }
        BackendTag::Vect => {
            if o.get("partition").is_some() {
                return err(&o.at("partition"), "vect relations are given by \"basis\"");
            }
            let Some(b) = o.get("basis") else {
                return err(&o.at("basis"), "missing required field \"basis\"");
            };
            RelationBody::Basis(matrix(&o.at("basis"), b, q, left + right)?)
        }
    };
    Ok(RelationSpec { left, right, body })
}

fn parse_validation(v: &Value) -> Parse<ValidationMode> {
    let o = Obj::new("/validation", v, &["mode", "budget", "seed"])?;
    match o.str_opt("mode")?.unwrap_or("exhaustive") {
        "exhaustive" => Ok(ValidationMode::Exhaustive),
        "sampled" => Ok(ValidationMode::Sampled {
            budget: o
                .usize_opt("budget")?
                .unwrap_or(crate::config::DEFAULT_SAMPLE_BUDGET),
            seed: o.usize_opt("seed")?.unwrap_or(0) as u64,
        }),
        other => err(&o.at("mode"), format!("unknown validation mode {other:?}")),
    }
}

fn parse_limits(v: &Value) -> Parse<LimitOverrides> {
    let o = Obj::new("/limits", v, &["max_setsize", "max_qdim", "max_psize"])?;
    Ok(LimitOverrides {
        max_setsize: o.usize_opt("max_setsize")?,
        max_qdim: o.usize_opt("max_qdim")?.map(|v| v as u64),
        max_psize: o.usize_opt("max_psize")?.map(|v| v as u64),
    })
}

const FIELDS: &[&str] = &[
    "backend",
    "q",
    "size",
    "dim",
    "target",
    "degree",
    "morphism",
    "relations",
    "X",
    "n",
    "max_size",
    "validation",
    "limits",
    "format",
];

/// Validates a scene given as JSON.
pub fn parse_scene_value(v: &Value) -> Parse<Scene> {
    let o = Obj::new("", v, FIELDS)?;
    let backend = match o.get("backend") {
        Some(Value::String(s)) if s == "setop" => BackendTag::SetOp,
        Some(Value::String(s)) if s == "vect" => BackendTag::Vect,
        Some(Value::String(s)) => return err("/backend", format!("unknown backend {s:?}")),
        Some(_) => return err("/backend", "expected a string"),
        None => return err("/backend", "missing required field \"backend\""),
    };
    let q = match (backend, o.usize_opt("q")?) {
        (BackendTag::SetOp, Some(_)) => return err("/q", "q only applies to the vect backend"),
        (BackendTag::SetOp, None) => 0,
        (BackendTag::Vect, q) => {
            let q = q.unwrap_or(crate::config::DEFAULT_Q as usize) as u64;
            if !is_prime(q) {
                return err("/q", "q must be prime");
            }
            q
        }
    };
    let size = match (o.usize_opt("size")?, o.usize_opt("dim")?) {
        (Some(_), Some(_)) => return err("/dim", "give either size or dim, not both"),
        (_, Some(_)) if backend == BackendTag::SetOp => {
            return err("/dim", "dim only applies to the vect backend")
        }
        (s, d) => s.or(d),
    };
    let uniform = match (backend, o.usize_opt("X")?, o.usize_opt("n")?) {
        (BackendTag::SetOp, _, Some(_)) => return err("/n", "the setop backend takes X, not n"),
        (BackendTag::Vect, Some(_), _) => return err("/X", "the vect backend takes n, not X"),
        (_, x, n) => x.or(n),
    };
    let format = match o.str_opt("format")? {
        None => None,
        Some(f) => Some(f.parse().or_else(|e: String| err("/format", e))?),
    };
    Ok(Scene {
        backend,
        q,
        size,
        target: o.usize_opt("target")?,
        degree: o
            .get("degree")
            .map(|d| parse_degree(d, backend))
            .transpose()?
            .unwrap_or(DegreeSpec::Natural(Param::Symbolic)),
        morphism: o
            .get("morphism")
            .map(|m| parse_morphism(m, backend, q))
            .transpose()?,
        relations: match o.get("relations") {
            None => Vec::new(),
            Some(rs) => array("/relations", rs)?
                .iter()
                .enumerate()
                .map(|(i, r)| parse_relation(i, r, backend, q))
                .collect::<Parse<_>>()?,
        },
        uniform,
        max_size: o.usize_opt("max_size")?,
        validation: o
            .get("validation")
            .map(parse_validation)
            .transpose()?
            .unwrap_or(ValidationMode::Exhaustive),
        limits: o
            .get("limits")
            .map(parse_limits)
            .transpose()?
            .unwrap_or_default(),
        format,
    })
}

/// Parses and validates scene text.
pub fn parse_scene(text: &str) -> Parse<Scene> {
    let v: Value =
        serde_json::from_str(text).or_else(|e| err("", format!("not valid JSON: {e}")))?;
    parse_scene_value(&v)
}
