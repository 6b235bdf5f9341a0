//! Library half of the `tenv` command: scene parsing, configuration and
//! command execution, kept separate from argument handling so it can be
//! tested directly.

pub mod commands;
pub mod config;
pub mod scene;

pub use commands::{execute, CliError, Command, Report};
pub use config::Format;
pub use scene::{parse_scene, parse_scene_value, Scene, SchemaError, SCHEMA};

/// Renders a report in the requested format.
pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report.json).expect("json value serializes");
            s.push('\n');
            s
        }
        Format::Tsv => report.tsv.clone(),
        Format::Text => report.text.clone(),
    }
}
