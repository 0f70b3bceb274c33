use serde::Serialize;
use serde_json::{Map, Value};

use crate::cli::Format;

/// Self-describing result of one run.
#[derive(Debug, Serialize)]
pub struct Record {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub samples: usize,
    pub inputs: Value,
    pub rows: Vec<Value>,
    pub notes: Vec<String>,
}

impl Record {
    pub fn new(command: &'static str, seed: u64, samples: usize) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            samples,
            inputs: Value::Object(Map::new()),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn render(&self, format: Format) -> Result<String, String> {
        match format {
            Format::Json => serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(|e| e.to_string()),
            Format::Csv => self.to_csv(),
        }
    }

    /// Rows flattened to dotted column names, plus the run metadata columns.
    fn to_csv(&self) -> Result<String, String> {
        let mut columns: Vec<String> = vec!["tool".into(), "version".into(), "command".into(), "seed".into()];
        let mut flat_rows = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let mut flat = Vec::new();
            flatten("", row, &mut flat);
            for (k, _) in &flat {
                if !columns.contains(k) {
                    columns.push(k.clone());
                }
            }
            flat_rows.push(flat);
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&columns).map_err(|e| e.to_string())?;
        for flat in flat_rows {
            let mut line = vec![self.tool.to_string(), self.version.to_string(), self.command.to_string(), self.seed.to_string()];
            for c in &columns[4..] {
                line.push(flat.iter().find(|(k, _)| k == c).map(|(_, v)| v.clone()).unwrap_or_default());
            }
            w.write_record(&line).map_err(|e| e.to_string())?;
        }
        let bytes = w.into_inner().map_err(|e| e.to_string())?;
        String::from_utf8(bytes).map_err(|e| e.to_string())
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            out.push((prefix.to_string(), items.iter().map(scalar).collect::<Vec<_>>().join(";")));
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn csv_projection() {
        let mut r = Record::new("product", 7, 0);
        r.rows.push(json!({"a": 1.5, "b": {"c": [1, 2]}, "p": "Exact"}));
        r.rows.push(json!({"a": 2, "d": null}));
        let csv = r.render(Format::Csv).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "tool,version,command,seed,a,b.c,p,d");
        assert!(lines[1].ends_with(",product,7,1.5,1;2,Exact,"));
        assert!(lines[2].ends_with(",product,7,2,,,"));
    }
}
