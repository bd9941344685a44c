//! Report assembly. The text form is a rendering of the JSON document and
//! carries nothing beyond it.

use serde_json::{json, Map, Value};

use leafwise::algebra::{fmt_q, Laurent, Series, Q};

use crate::{Cli, CliError, Command, SCHEMA_VERSION};

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub value: Value,
}

impl Report {
    /// Wraps a command result with the schema version, command line echo and
    /// options.
    pub fn new(cli: &Cli, options: Map<String, Value>, body: Map<String, Value>) -> Self {
        let mut top = Map::new();
        top.insert("schema_version".into(), json!(SCHEMA_VERSION));
        top.insert("command".into(), json!(command_name(&cli.command)));
        top.insert("options".into(), Value::Object(options));
        for (k, v) in body {
            top.insert(k, v);
        }
        Report {
            value: Value::Object(top),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.value).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        render(&self.value, 0, &mut out);
        out
    }
}

pub fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Distortion { .. } => "distortion",
        Command::Schwarzian { .. } => "schwarzian",
        Command::Angle { .. } => "angle",
        Command::Riccati { .. } => "riccati",
        Command::Normalform { .. } => "normalform",
        Command::Brjuno { .. } => "brjuno",
        Command::Geodesic { .. } => "geodesic check",
        Command::Index { .. } => "index",
        Command::ProductSurface { .. } => "product-surface",
        Command::Signature { .. } => "signature",
        Command::Expand { .. } => "expand",
    }
}

pub fn error_report(cli: &Cli, e: &CliError) -> Report {
    let mut err = Map::new();
    let kind = match e {
        CliError::Input { path, message } => {
            err.insert("path".into(), json!(path));
            err.insert("message".into(), json!(message));
            "input"
        }
        CliError::Inadmissible(m) => {
            err.insert("message".into(), json!(m));
            "inadmissible"
        }
        CliError::Defect(m) => {
            err.insert("message".into(), json!(m));
            "defect"
        }
    };
    err.insert("kind".into(), json!(kind));
    let mut body = Map::new();
    body.insert("error".into(), Value::Object(err));
    body.insert("exit_code".into(), json!(e.exit_code()));
    let mut options = Map::new();
    options.insert("order".into(), json!(cli.order));
    options.insert("jobs".into(), json!(cli.jobs));
    options.insert("phi".into(), json!(cli.phi));
    options.insert("branch".into(), json!(cli.branch));
    Report::new(cli, options, body)
}

pub fn q(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

pub fn qs(xs: &[Q]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

pub fn opt_q(x: &Option<Q>) -> Value {
    x.as_ref().map_or(Value::Null, q)
}

/// `{vars, order, coeffs: {"i,j": "p/q"}, text}`.
pub fn series(s: &Series) -> Value {
    let mut coeffs = Map::new();
    for (m, c) in s.terms() {
        let key: Vec<String> = m.exps().iter().map(u32::to_string).collect();
        coeffs.insert(key.join(","), q(c));
    }
    json!({
        "vars": s.vars(),
        "order": s.order(),
        "coeffs": coeffs,
        "text": s.to_string(),
    })
}

/// `{var, order, coeffs: {"k": "p/q"}, text}`.
pub fn laurent(l: &Laurent) -> Value {
    let mut coeffs = Map::new();
    for (k, c) in l.coeffs() {
        coeffs.insert(k.to_string(), q(c));
    }
    json!({
        "var": l.var(),
        "order": l.order(),
        "coeffs": coeffs,
        "text": l.to_string(),
    })
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_array() && !x.is_object()) => Some(format!(
            "[{}]",
            a.iter()
                .map(|x| scalar(x).expect("scalar"))
                .collect::<Vec<_>>()
                .join(", ")
        )),
        Value::Object(m) if m.is_empty() => Some("{}".into()),
        _ => None,
    }
}

fn render(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}{k}: {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                match scalar(x) {
                    Some(s) => out.push_str(&format!("{pad}- {s}\n")),
                    None => {
                        out.push_str(&format!("{pad}[{i}]\n"));
                        render(x, depth + 1, out);
                    }
                }
            }
        }
        other => out.push_str(&format!("{pad}{}\n", scalar(other).expect("scalar"))),
    }
}
