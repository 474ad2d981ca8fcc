//! Report records and their JSON/CSV renderings.
//!
//! Both formats render a numeric field through the same 12-significant-digit
//! token, so the outputs of one run carry identical numbers. Infinite values
//! appear exactly as `inf` / `-inf` (quoted in JSON, bare in CSV).

use fenchel::Flag;

pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
    /// Pre-serialized JSON embedded verbatim in JSON output.
    Json(String),
    /// Expanded into `key_0`, `key_1`, ... columns in CSV.
    List(Vec<f64>),
    Flags(Vec<Flag>),
}

pub struct Record {
    pub fields: Vec<(&'static str, Cell)>,
}

impl Record {
    pub fn new(fields: Vec<(&'static str, Cell)>) -> Record {
        Record { fields }
    }
}

/// 12 significant digits, or the bare tokens `inf` / `-inf`.
pub fn fmt_num(v: f64) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.11e}")
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

fn json_num(v: f64) -> String {
    if v.is_infinite() {
        format!("\"{}\"", fmt_num(v))
    } else {
        fmt_num(v)
    }
}

pub fn to_json_line(r: &Record) -> String {
    let mut out = String::from("{");
    for (i, (key, cell)) in r.fields.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&format!("\"{key}\":"));
        match cell {
            Cell::Num(v) => out.push_str(&json_num(*v)),
            Cell::Int(v) => out.push_str(&v.to_string()),
            Cell::Text(s) => out.push_str(&format!("\"{}\"", json_escape(s))),
            Cell::Json(s) => out.push_str(s),
            Cell::List(vs) => {
                out.push('[');
                for (j, v) in vs.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&json_num(*v));
                }
                out.push(']');
            }
            Cell::Flags(fs) => {
                out.push('[');
                for (j, f) in fs.iter().enumerate() {
                    if j > 0 {
                        out.push(',');
                    }
                    out.push_str(&format!("\"{f}\""));
                }
                out.push(']');
            }
        }
    }
    out.push('}');
    out
}

fn csv_quote(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn csv_header(r: &Record) -> String {
    let mut cols = Vec::new();
    for (key, cell) in &r.fields {
        match cell {
            Cell::List(vs) => {
                for i in 0..vs.len() {
                    cols.push(format!("{key}_{i}"));
                }
            }
            _ => cols.push((*key).to_string()),
        }
    }
    cols.join(",")
}

pub fn to_csv_line(r: &Record) -> String {
    let mut cols = Vec::new();
    for (_, cell) in &r.fields {
        match cell {
            Cell::Num(v) => cols.push(fmt_num(*v)),
            Cell::Int(v) => cols.push(v.to_string()),
            Cell::Text(s) => cols.push(csv_quote(s)),
            Cell::Json(s) => cols.push(csv_quote(s)),
            Cell::List(vs) => {
                for v in vs {
                    cols.push(fmt_num(*v));
                }
            }
            Cell::Flags(fs) => {
                let joined = fs
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join(";");
                cols.push(joined);
            }
        }
    }
    cols.join(",")
}
