//! Defaults and their overrides.
//!
//! | setting          | default | scene field          | environment         | flag              |
//! |------------------|---------|----------------------|---------------------|-------------------|
//! | max_setsize      | 8       | `limits.max_setsize` | `TENV_MAX_SETSIZE`  | `--max-setsize`   |
//! | max_qdim         | 4096    | `limits.max_qdim`    | `TENV_MAX_QDIM`     | `--max-qdim`      |
//! | max_psize        | 10000   | `limits.max_psize`   | `TENV_MAX_PSIZE`    | `--max-psize`     |
//! | q                | 2       | `q`                  |                     | `--q`             |
//! | singular bound   | 4       | `max_size`           |                     | `--max-size`      |
//! | validation bound | 3       | `max_size`           |                     | `--max-size`      |
//! | sample budget    | 200     | `validation.budget`  |                     |                   |
//! | format           | json    | `format`             |                     | `--format`        |
//!
//! Later columns win: a flag beats the environment, which beats the
//! scene file, which beats the default.

use std::str::FromStr;

use tenv_core::backend::Limits;

use crate::scene::SchemaError;

pub const DEFAULT_Q: u64 = 2;
pub const DEFAULT_SINGULAR_BOUND: usize = 4;
pub const DEFAULT_VALIDATION_BOUND: usize = 3;
pub const DEFAULT_SAMPLE_BUDGET: usize = 200;
pub const ENV_PREFIX: &str = "TENV_";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Tsv,
    Text,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(Format::Json),
            "tsv" => Ok(Format::Tsv),
            "text" => Ok(Format::Text),
            other => Err(format!(
                "unknown format {other:?}; expected json, tsv or text"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct LimitOverrides {
    pub max_setsize: Option<usize>,
    pub max_qdim: Option<u64>,
    pub max_psize: Option<u64>,
}

impl LimitOverrides {
    fn apply(&self, limits: &mut Limits) {
        if let Some(v) = self.max_setsize {
            limits.max_setsize = v;
        }
        if let Some(v) = self.max_qdim {
            limits.max_qdim = v;
        }
        if let Some(v) = self.max_psize {
            limits.max_psize = v;
        }
    }

    /// Reads `TENV_MAX_*` through `lookup`.
    pub fn from_env(lookup: impl Fn(&str) -> Option<String>) -> Result<Self, SchemaError> {
        fn read<T: FromStr>(
            lookup: &impl Fn(&str) -> Option<String>,
            key: &str,
        ) -> Result<Option<T>, SchemaError> {
            let name = format!("{ENV_PREFIX}{key}");
            match lookup(&name) {
                None => Ok(None),
                Some(v) => v.trim().parse().map(Some).map_err(|_| SchemaError {
                    pointer: format!("env:{name}"),
                    message: format!("{name}={v:?} is not a non-negative integer"),
                }),
            }
        }
        Ok(LimitOverrides {
            max_setsize: read(&lookup, "MAX_SETSIZE")?,
            max_qdim: read(&lookup, "MAX_QDIM")?,
            max_psize: read(&lookup, "MAX_PSIZE")?,
        })
    }
}

/// Default limits, then each override layer in order.
pub fn resolve_limits(layers: &[LimitOverrides]) -> Limits {
    let mut limits = Limits::default();
    for layer in layers {
        layer.apply(&mut limits);
    }
    limits
}

/// The flag that lifts a resource bound named by its configuration key.
pub fn flag_for_key(key: &str) -> String {
    format!("--{}", key.replace('_', "-"))
}

pub fn env_for_key(key: &str) -> String {
    format!("{ENV_PREFIX}{}", key.to_uppercase())
}
