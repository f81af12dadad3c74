//! Parsing of matrix files, element specs, words and Dynkin sequences.

use std::fs;
use std::path::Path;

use kmq::affine::{AffineElement, AffineSemigroup};
use kmq::quantum::DynkinSequence;
use kmq::{Coweight, Gcm, RootDatum, WeylElement};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct GcmFile {
    labels: Option<Vec<Label>>,
    matrix: Vec<Vec<i64>>,
}

/// A vertex label, written as a JSON string or a non-negative integer.
#[derive(Deserialize, Clone)]
#[serde(untagged)]
pub enum Label {
    Text(String),
    Number(u64),
}

impl Label {
    fn text(&self) -> String {
        match self {
            Label::Text(s) => s.clone(),
            Label::Number(n) => n.to_string(),
        }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementSpec {
    coweight: CoweightSpec,
    #[serde(default)]
    word: Vec<Label>,
}

#[derive(Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
enum CoweightSpec {
    Doubled(Vec<i64>),
    Pairings(Vec<i64>),
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// Reads `{"labels": [...], "matrix": [[...], ...]}`; labels default to
/// `"1"`, ..., `"n"`.
pub fn read_gcm(path: &Path) -> Result<Gcm, CliError> {
    let text = read_text(path)?;
    parse_gcm(&text).map_err(|msg| CliError::Input(format!("{}: {msg}", path.display())))
}

pub fn parse_gcm(text: &str) -> Result<Gcm, String> {
    let file: GcmFile = serde_json::from_str(text).map_err(|e| format!("invalid matrix file: {e}"))?;
    let labels = match file.labels {
        Some(ls) => ls.iter().map(Label::text).collect(),
        None => (1..=file.matrix.len()).map(|i| i.to_string()).collect(),
    };
    Gcm::new(labels, file.matrix).map_err(|e| e.to_string())
}

/// A JSON argument given inline or as `@path`.
pub fn json_argument(arg: &str) -> Result<String, CliError> {
    match arg.strip_prefix('@') {
        Some(path) => read_text(Path::new(path)),
        None => Ok(arg.to_string()),
    }
}

pub fn vertex(gcm: &Gcm, label: &Label) -> Result<usize, CliError> {
    let text = label.text();
    gcm.index_of(&text).ok_or_else(|| CliError::Input(format!("unknown vertex label {text:?}")))
}

/// A word of labels read right to left, as the product of its letters.
pub fn word(datum: &RootDatum, labels: &[Label]) -> Result<WeylElement, CliError> {
    let idx = labels.iter().map(|l| vertex(datum.gcm(), l)).collect::<Result<Vec<_>, _>>()?;
    Ok(WeylElement::reduce_word(datum, &idx))
}

pub fn labels_of(gcm: &Gcm, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| gcm.label(i).to_string()).collect()
}

/// Parses `{"coweight": {"doubled"|"pairings": [...]}, "word": [...]}` and
/// certifies the element in `W⁺`.
pub fn element(g: &AffineSemigroup, arg: &str) -> Result<AffineElement, CliError> {
    let d = g.datum();
    let text = json_argument(arg)?;
    let spec: ElementSpec =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid element: {e}")))?;
    let coweight: Coweight = match spec.coweight {
        CoweightSpec::Doubled(v) => d.coweight(v)?,
        CoweightSpec::Pairings(v) => d.coweight_from_pairings(&v)?,
    };
    let w = word(d, &spec.word)?;
    Ok(g.element(coweight, w)?)
}

/// Parses a JSON array of nonempty levels of labels, `I_1` first.
pub fn sequence(gcm: &Gcm, arg: &str) -> Result<DynkinSequence, CliError> {
    let text = json_argument(arg)?;
    let levels: Vec<Vec<Label>> =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("invalid sequence: {e}")))?;
    if levels.is_empty() {
        return Err(CliError::Input("invalid sequence: no levels".into()));
    }
    let mut masks = Vec::with_capacity(levels.len());
    for (n, level) in levels.iter().enumerate() {
        if level.is_empty() {
            return Err(CliError::Input(format!("invalid sequence: level {} is empty", n + 1)));
        }
        let mut mask = 0u64;
        for l in level {
            mask |= 1 << vertex(gcm, l)?;
        }
        masks.push(mask);
    }
    Ok(DynkinSequence::from_levels(masks))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_labels() {
        let g = parse_gcm(r#"{"matrix": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(g.labels(), ["1", "2"]);
    }

    #[test]
    fn numeric_labels_are_accepted() {
        let g = parse_gcm(r#"{"labels": [0, "b"], "matrix": [[2,-1],[-1,2]]}"#).unwrap();
        assert_eq!(g.labels(), ["0", "b"]);
        assert_eq!(vertex(&g, &Label::Number(0)).unwrap(), 0);
    }

    #[test]
    fn row_and_column_are_reported() {
        let err = parse_gcm(r#"{"matrix": [[2,-1],[1,2]]}"#).unwrap_err();
        assert!(err.contains("row 2, column 1"), "{err}");
    }

    #[test]
    fn empty_levels_are_rejected() {
        let g = parse_gcm(r#"{"matrix": [[2,-1],[-1,2]]}"#).unwrap();
        assert!(sequence(&g, r#"[["1"], []]"#).is_err());
        assert!(sequence(&g, r#"[]"#).is_err());
        assert!(sequence(&g, r#"[["3"]]"#).is_err());
        assert_eq!(sequence(&g, r#"[["1","2"],[2]]"#).unwrap().levels(), [3, 2]);
    }
}
