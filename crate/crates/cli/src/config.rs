//! `--config` files: TOML (or JSON by extension) with the same keys as the
//! command-line flags, turned back into argument lists.

use std::path::Path;

use serde_json::Value;

pub fn load(path: &Path) -> Result<serde_json::Map<String, Value>, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    let value: Value = if path.extension().is_some_and(|x| x == "json") {
        serde_json::from_str(&text).map_err(|e| format!("invalid JSON config: {e}"))?
    } else {
        let t: toml::Value = toml::from_str(&text).map_err(|e| format!("invalid TOML config: {e}"))?;
        serde_json::to_value(t).map_err(|e| format!("invalid config: {e}"))?
    };
    match value {
        Value::Object(m) => Ok(m),
        _ => Err("config must be a table of flag = value pairs".into()),
    }
}

fn scalar(v: &Value) -> Result<String, String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        other => Err(format!("unsupported config value {other}")),
    }
}

/// Command name (if present) and flag arguments. Keys use the flag spelling,
/// with `_` accepted for `-`; arrays become comma lists; `true` booleans
/// become bare flags.
pub fn to_args(map: &serde_json::Map<String, Value>) -> Result<(Option<String>, Vec<String>), String> {
    let mut command = None;
    let mut args = Vec::new();
    for (key, value) in map {
        if key == "command" {
            command = Some(scalar(value)?);
            continue;
        }
        let flag = format!("--{}", key.replace('_', "-"));
        match value {
            Value::Bool(true) => args.push(flag),
            Value::Bool(false) | Value::Null => {}
            Value::Array(items) => {
                let parts = items.iter().map(scalar).collect::<Result<Vec<_>, _>>()?;
                args.push(format!("{flag}={}", parts.join(",")));
            }
            v => args.push(format!("{flag}={}", scalar(v)?)),
        }
    }
    Ok((command, args))
}
