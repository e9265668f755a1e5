use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use spreadlab::{Error, Hypergraph, Result};

use crate::Cli;

/// Resolved configuration recorded at the top of every artifact.
#[derive(Serialize)]
pub struct RunConfig<'a, A: Serialize> {
    pub command: &'static str,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jobs: Option<usize>,
    pub budget_candidates: String,
    pub budget_enumeration: String,
    pub args: &'a A,
}

impl<'a, A: Serialize> RunConfig<'a, A> {
    pub fn new(cli: &Cli, command: &'static str, args: &'a A) -> Self {
        let b = cli.budget();
        RunConfig {
            command,
            version: env!("CARGO_PKG_VERSION"),
            jobs: cli.jobs,
            budget_candidates: b.candidates.to_string(),
            budget_enumeration: b.enumeration.to_string(),
            args,
        }
    }

    /// `# key=value` lines for CSV output.
    pub fn comment_lines(&self) -> Result<String> {
        let value = serde_json::to_value(self).map_err(json_error)?;
        let mut out = String::new();
        flatten_comments("", &value, &mut out);
        Ok(out)
    }
}

fn flatten_comments(prefix: &str, v: &serde_json::Value, out: &mut String) {
    match v {
        serde_json::Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten_comments(&key, v, out);
            }
        }
        serde_json::Value::Null => {}
        serde_json::Value::String(s) => out.push_str(&format!("# {prefix}={s}\n")),
        other => out.push_str(&format!("# {prefix}={other}\n")),
    }
}

/// `{"run": config, ...result}`.
#[derive(Serialize)]
pub struct Envelope<'a, C: Serialize, T: Serialize> {
    pub run: &'a C,
    #[serde(flatten)]
    pub result: T,
}

pub fn json_error(e: serde_json::Error) -> Error {
    Error::Input(format!("JSON: {e}"))
}

pub fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::Input(format!("cannot write output: {e}")))
        }
    }
}

pub fn to_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(json_error)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn read_hypergraph(path: &Path) -> Result<Hypergraph> {
    read_json(path)
}
