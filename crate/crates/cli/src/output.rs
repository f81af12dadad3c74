//! Rendering of records as JSON lines, TSV or aligned text.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// One JSON document per record (JSON lines), or a single object.
    Json,
    /// A header line then one tab-separated line per record.
    Tsv,
    /// Aligned columns for reading in a terminal.
    Pretty,
}

fn to_object<T: Serialize>(record: &T) -> serde_json::Map<String, Value> {
    match serde_json::to_value(record).expect("records serialize") {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("value".into(), other);
            m
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// A list of records: JSON lines, or a table whose columns are the keys of
/// the first record.
pub fn rows<T: Serialize>(format: Format, records: &[T]) -> String {
    let objects: Vec<_> = records.iter().map(to_object).collect();
    if format == Format::Json {
        return objects.iter().map(|o| format!("{}\n", Value::Object(o.clone()))).collect();
    }
    let header: Vec<String> = match objects.first() {
        Some(o) => o.keys().cloned().collect(),
        None => return String::new(),
    };
    let table: Vec<Vec<String>> = objects
        .iter()
        .map(|o| header.iter().map(|k| o.get(k).map(cell).unwrap_or_else(|| "-".into())).collect())
        .collect();
    match format {
        Format::Tsv => {
            let mut out = header.join("\t");
            out.push('\n');
            for row in &table {
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
            out
        }
        _ => {
            let widths: Vec<usize> = (0..header.len())
                .map(|c| table.iter().map(|r| r[c].chars().count()).chain([header[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |cells: &[String]| {
                let padded: Vec<String> =
                    cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
                format!("{}\n", padded.join("  ").trim_end())
            };
            let mut out = line(&header);
            for row in &table {
                out.push_str(&line(row));
            }
            out
        }
    }
}

/// A single record: one JSON object, a one-row table, or `key: value` lines.
pub fn object<T: Serialize>(format: Format, record: &T) -> String {
    match format {
        Format::Json => format!("{}\n", serde_json::to_string(record).expect("records serialize")),
        Format::Tsv => rows(format, std::slice::from_ref(record)),
        Format::Pretty => {
            let o = to_object(record);
            let width = o.keys().map(|k| k.len()).max().unwrap_or(0);
            o.iter().map(|(k, v)| format!("{k:<width$}  {}\n", cell(v))).collect()
        }
    }
}
