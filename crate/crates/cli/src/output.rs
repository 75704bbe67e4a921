use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Provenance lines every CSV starts with.
pub fn csv_header(command: &str, config: &str) -> String {
    format!("# hypmax {VERSION}\n# command: {command}\n# config: {config}\n")
}

/// JSON documents carry the same record under `header`, next to `schema`.
pub fn json_document(schema: &str, command: &str, config: &str, body: Value) -> Value {
    let mut doc = json!({
        "schema": schema,
        "header": {"version": VERSION, "command": command, "config": config},
    });
    if let (Some(d), Value::Object(b)) = (doc.as_object_mut(), body) {
        d.extend(b);
    }
    doc
}

/// Write to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, bytes: &[u8]) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()
        }
    }
}

pub fn json_bytes(doc: &Value) -> Vec<u8> {
    let mut s = serde_json::to_string_pretty(doc).expect("JSON values always serialize");
    s.push('\n');
    s.into_bytes()
}
