use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};
use tenv_cli::config::{env_for_key, flag_for_key, resolve_limits, Format, LimitOverrides};
use tenv_cli::{emit_report, execute, parse_scene_value, CliError, Command, SchemaError};
use tenv_core::Error;

#[derive(Parser, Debug)]
#[command(
    name = "tenv",
    version,
    about = "Tensor envelopes of finite regular categories"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,

    /// Scene file (JSON); flags override its fields.
    #[arg(long, global = true)]
    scene: Option<PathBuf>,

    /// setop (finite sets, opposite category) or vect (F_q vector spaces).
    #[arg(long, global = true)]
    backend: Option<String>,

    /// Field size for the vect backend.
    #[arg(long, global = true)]
    q: Option<u64>,

    /// Object size (set size or dimension).
    #[arg(long, global = true)]
    size: Option<usize>,

    /// Second object for hom and radical.
    #[arg(long, global = true)]
    target: Option<usize>,

    /// Degree parameter: `t` for symbolic, or a rational such as `7/2`
    /// (also accepted as `t=7/2`).
    #[arg(long, global = true, allow_hyphen_values = true)]
    param: Option<String>,

    /// Largest source object for singular and validate-degree.
    #[arg(long, global = true)]
    max_size: Option<usize>,

    /// Size of X for the setop uniform functor Hom_Set(-, X).
    #[arg(long = "X", global = true)]
    x: Option<usize>,

    /// Dimension n of X = F_q^n for the vect uniform functor.
    #[arg(long, global = true)]
    n: Option<usize>,

    /// Output format.
    #[arg(long, global = true, value_parser = ["json", "tsv", "text"])]
    format: Option<String>,

    /// Largest set whose partitions may be enumerated [env: TENV_MAX_SETSIZE].
    #[arg(long, global = true)]
    max_setsize: Option<usize>,

    /// Largest q^d whose subspaces may be enumerated [env: TENV_MAX_QDIM].
    #[arg(long, global = true)]
    max_qdim: Option<u64>,

    /// Largest hom-set or P(x) that may be listed [env: TENV_MAX_PSIZE].
    #[arg(long, global = true)]
    max_psize: Option<u64>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Cmd {
    /// Basis of Hom([size], [target]).
    Hom,
    /// Weighted composite of the two relations in the scene.
    Compose,
    /// Gram matrix of sub([size]) and its ω factorisation.
    Gram,
    /// ω of the scene morphism, or of every indecomposable surjection out of [size].
    Omega,
    /// Parameters at which some ω vanishes, for sources up to --max-size.
    Singular,
    /// Structure constants of End([size]).
    Endalg,
    /// Radical of the trace form on Hom([size], [target]).
    Radical,
    /// Simple block census of End([size]).
    Census,
    /// Fiber functor of a uniform functor on End([size]).
    Specialize,
    /// Check the degree-function axioms up to --max-size.
    ValidateDegree,
    /// Print the scene JSON schema.
    Schema,
}

impl Cmd {
    fn command(self) -> Option<Command> {
        Some(match self {
            Cmd::Hom => Command::Hom,
            Cmd::Compose => Command::Compose,
            Cmd::Gram => Command::Gram,
            Cmd::Omega => Command::Omega,
            Cmd::Singular => Command::Singular,
            Cmd::Endalg => Command::Endalg,
            Cmd::Radical => Command::Radical,
            Cmd::Census => Command::Census,
            Cmd::Specialize => Command::Specialize,
            Cmd::ValidateDegree => Command::ValidateDegree,
            Cmd::Schema => return None,
        })
    }
}

fn schema_error(pointer: &str, message: String) -> CliError {
    CliError::Schema(SchemaError {
        pointer: pointer.into(),
        message,
    })
}

/// Writes flag values into the scene document so they pass through the
/// same validation as file input.
fn merge_flags(cli: &Cli, scene: &mut Map<String, Value>) {
    if cli.size.is_some() {
        scene.remove("dim");
    }
    let fields = [
        ("backend", cli.backend.as_ref().map(|v| json!(v))),
        ("q", cli.q.map(|v| json!(v))),
        ("size", cli.size.map(|v| json!(v))),
        ("target", cli.target.map(|v| json!(v))),
        ("max_size", cli.max_size.map(|v| json!(v))),
        ("X", cli.x.map(|v| json!(v))),
        ("n", cli.n.map(|v| json!(v))),
        ("format", cli.format.as_ref().map(|v| json!(v))),
    ];
    for (k, v) in fields {
        if let Some(v) = v {
            scene.insert(k.to_string(), v);
        }
    }
    if let Some(p) = &cli.param {
        let t = p.strip_prefix("t=").unwrap_or(p).trim().to_string();
        let degree = scene.entry("degree").or_insert_with(|| json!({}));
        if let Value::Object(d) = degree {
            d.insert("t".into(), json!(t));
        }
    }
}

fn run(cli: &Cli) -> Result<(tenv_cli::Report, Format), (CliError, Format)> {
    let fail = |e: CliError| (e, Format::default());
    let mut doc = match &cli.scene {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                fail(schema_error(
                    "",
                    format!("cannot read {}: {e}", path.display()),
                ))
            })?;
            serde_json::from_str(&text)
                .map_err(|e| fail(schema_error("", format!("not valid JSON: {e}"))))?
        }
        None => json!({}),
    };
    let Value::Object(map) = &mut doc else {
        return Err(fail(schema_error(
            "",
            "a scene must be a JSON object".into(),
        )));
    };
    merge_flags(cli, map);
    let scene = parse_scene_value(&doc).map_err(|e| fail(e.into()))?;
    let env = LimitOverrides::from_env(|k| std::env::var(k).ok()).map_err(|e| fail(e.into()))?;
    let flags = LimitOverrides {
        max_setsize: cli.max_setsize,
        max_qdim: cli.max_qdim,
        max_psize: cli.max_psize,
    };
    let limits = resolve_limits(&[scene.limits, env, flags]);
    let format = scene.format.unwrap_or_default();
    let cmd = cli.command.command().expect("schema handled by caller");
    execute(&scene, limits, cmd)
        .map(|r| (r, format))
        .map_err(|e| (e, format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if matches!(cli.command, Cmd::Schema) {
        print!("{}", tenv_cli::SCHEMA);
        return ExitCode::SUCCESS;
    }
    let mut stdout = std::io::stdout().lock();
    match run(&cli) {
        Ok((report, format)) => {
            let _ = stdout.write_all(emit_report(&report, format).as_bytes());
            ExitCode::SUCCESS
        }
        Err((e, format)) => {
            match &e {
                CliError::Schema(s) => eprintln!("error: {s}"),
                CliError::Core(inner @ Error::ResourceBound { key, required, .. }) => {
                    eprintln!("error: {inner}");
                    eprintln!(
                        "hint: rerun with {} {required} or {}={required}",
                        flag_for_key(key),
                        env_for_key(key)
                    );
                }
                CliError::Core(inner) => eprintln!("error: {inner}"),
                CliError::Verdict(report, msg) => {
                    let _ = stdout.write_all(emit_report(report, format).as_bytes());
                    eprintln!("error: {msg}");
                }
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
