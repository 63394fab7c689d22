//! `--config <path>`: a JSON object mirroring the command line.
//!
//! ```json
//! {"command": "audit", "state": "azimuthal:m=1", "pair": "Lz,phi", "nodes": 2048}
//! ```
//!
//! Keys become `--key value` flags (underscores turn into dashes), arrays are
//! joined with commas, `true` becomes a bare flag and `false` or `null` is
//! dropped. Flags given on the command line after the file win.

use std::ffi::OsString;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde_json::Value;

fn scalar(key: &str, v: &Value) -> Result<String> {
    Ok(match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => bail!("config key '{key}': unsupported value {other}"),
    })
}

/// Flags equivalent to the config document, command first.
pub fn config_to_args(doc: &Value) -> Result<Vec<String>> {
    let map = doc.as_object().context("config must be a JSON object")?;
    let command = map.get("command").and_then(Value::as_str).context("config needs a \"command\" string")?;
    let mut args = vec![command.to_string()];
    for (key, v) in map {
        if key == "command" {
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match v {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(|i| scalar(key, i)).collect::<Result<Vec<_>>>()?;
                args.push(flag);
                args.push(parts.join(","));
            }
            other => {
                args.push(flag);
                args.push(scalar(key, other)?);
            }
        }
    }
    Ok(args)
}

/// Replaces `--config <path>` in `raw` with the flags it stands for.
pub fn expand(raw: Vec<OsString>) -> Result<Vec<OsString>> {
    let pos = raw.iter().position(|a| a == "--config" || a.to_string_lossy().starts_with("--config="));
    let Some(pos) = pos else {
        return Ok(raw);
    };
    let mut rest = raw;
    let flag = rest.remove(pos).to_string_lossy().into_owned();
    let path = match flag.strip_prefix("--config=") {
        Some(p) => p.to_string(),
        None => {
            if pos >= rest.len() {
                bail!("--config needs a path");
            }
            rest.remove(pos).to_string_lossy().into_owned()
        }
    };
    let doc = read(Path::new(&path))?;
    let mut out: Vec<OsString> = rest.drain(..1.min(rest.len())).collect();
    out.extend(config_to_args(&doc)?.into_iter().map(OsString::from));
    out.extend(rest);
    Ok(out)
}

fn read(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}
