//! On-disk cache of quantum root sets keyed by the SHA-256 of the matrix.
//!
//! A cached set is accepted only if every entry rebuilds from its word
//! through `−1` pairings, satisfies the length characterization, and the
//! set contains the simple roots and is closed under the generating rule.
//! Otherwise the set is recomputed and the file rewritten.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use kmq::quantum::{self, is_quantum_by_length};
use kmq::roots::{self, coroot_pairing};
use kmq::{Gcm, RealRoot, RootDatum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Serialize, Deserialize)]
struct CacheFile {
    gcm_sha256: String,
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
    roots: Vec<CachedRoot>,
}

#[derive(Serialize, Deserialize)]
struct CachedRoot {
    coroot: Vec<i64>,
    /// `(i_L, …, i_1)` as vertex indices.
    word: Vec<usize>,
}

pub type QuantumSet = Vec<(RealRoot, Vec<usize>)>;

pub fn gcm_sha256(gcm: &Gcm) -> String {
    let canonical = serde_json::json!({ "labels": gcm.labels(), "matrix": gcm.matrix() });
    hex::encode(Sha256::digest(canonical.to_string().as_bytes()))
}

fn entry_path(dir: &Path, gcm: &Gcm) -> PathBuf {
    dir.join(format!("{}.json", gcm_sha256(gcm)))
}

/// The quantum roots sorted by `(height, root)`, through the cache when a
/// directory is given.
pub fn quantum_roots(datum: &RootDatum, dir: Option<&Path>) -> Result<QuantumSet, CliError> {
    let Some(dir) = dir else {
        return compute(datum);
    };
    let path = entry_path(dir, datum.gcm());
    if path.exists() {
        match load(datum, &path) {
            Ok(set) => return Ok(set),
            Err(reason) => eprintln!("kmq: discarding cache entry {}: {reason}", path.display()),
        }
    }
    let set = compute(datum)?;
    store(datum, &path, &set)?;
    Ok(set)
}

fn compute(datum: &RootDatum) -> Result<QuantumSet, CliError> {
    let mut set = quantum::quantum_roots(datum)?;
    sort(&mut set);
    Ok(set)
}

fn sort(set: &mut QuantumSet) {
    set.sort_by(|a, b| (a.0.height(), &a.0).cmp(&(b.0.height(), &b.0)));
}

fn load(datum: &RootDatum, path: &Path) -> Result<QuantumSet, String> {
    let text = fs::read_to_string(path).map_err(|e| e.to_string())?;
    let file: CacheFile = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let gcm = datum.gcm();
    if file.gcm_sha256 != gcm_sha256(gcm) || file.labels != gcm.labels() || file.matrix != gcm.matrix() {
        return Err("matrix does not match".into());
    }
    let mut set = validate(datum, file.roots)?;
    sort(&mut set);
    Ok(set)
}

fn rebuild(datum: &RootDatum, word: &[usize]) -> Option<RealRoot> {
    let n = datum.rank();
    let (&first, rest) = word.split_last()?;
    if first >= n {
        return None;
    }
    let mut beta = RealRoot::simple(n, first);
    for &i in rest.iter().rev() {
        if i >= n || coroot_pairing(datum, &beta, i) != -1 {
            return None;
        }
        beta = roots::reflect(datum, i, &beta);
    }
    Some(beta)
}

fn validate(datum: &RootDatum, entries: Vec<CachedRoot>) -> Result<QuantumSet, String> {
    let n = datum.rank();
    let mut set = Vec::with_capacity(entries.len());
    let mut seen = HashSet::new();
    for e in entries {
        let beta = rebuild(datum, &e.word).ok_or_else(|| format!("word {:?} is not a ladder", e.word))?;
        if beta.coroot_coords() != e.coroot {
            return Err(format!("word {:?} does not give coroot {:?}", e.word, e.coroot));
        }
        if !is_quantum_by_length(datum, &beta) {
            return Err(format!("coroot {:?} is not quantum", e.coroot));
        }
        if !seen.insert(beta.clone()) {
            return Err(format!("coroot {:?} is listed twice", e.coroot));
        }
        set.push((beta, e.word));
    }
    for i in 0..n {
        if !seen.contains(&RealRoot::simple(n, i)) {
            return Err(format!("simple root {} is missing", i + 1));
        }
    }
    for beta in &seen {
        for i in 0..n {
            if coroot_pairing(datum, beta, i) == -1 && !seen.contains(&roots::reflect(datum, i, beta)) {
                return Err(format!("the set is not closed at {:?}", beta.coroot_coords()));
            }
        }
    }
    Ok(set)
}

fn store(datum: &RootDatum, path: &Path, set: &QuantumSet) -> Result<(), CliError> {
    let io = |source| CliError::Io { path: path.to_path_buf(), source };
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io)?;
    }
    let gcm = datum.gcm();
    let file = CacheFile {
        gcm_sha256: gcm_sha256(gcm),
        labels: gcm.labels().to_vec(),
        matrix: gcm.matrix().to_vec(),
        roots: set.iter().map(|(r, w)| CachedRoot { coroot: r.coroot_coords().to_vec(), word: w.clone() }).collect(),
    };
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_string(&file).expect("cache serializes")).map_err(io)?;
    fs::rename(&tmp, path).map_err(io)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> RootDatum {
        RootDatum::doubled(&Gcm::from_matrix(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]).unwrap())
    }

    fn entries(set: &QuantumSet) -> Vec<CachedRoot> {
        set.iter().map(|(r, w)| CachedRoot { coroot: r.coroot_coords().to_vec(), word: w.clone() }).collect()
    }

    #[test]
    fn computed_sets_validate() {
        let d = a3();
        let set = compute(&d).unwrap();
        assert_eq!(set.len(), 6);
        let mut back = validate(&d, entries(&set)).unwrap();
        sort(&mut back);
        assert_eq!(back, set);
    }

    #[test]
    fn missing_and_forged_entries_are_detected() {
        let d = a3();
        let set = compute(&d).unwrap();
        let mut e = entries(&set);
        e.pop();
        assert!(validate(&d, e).is_err());
        let mut e = entries(&set);
        e[0].coroot = vec![1, 1, 0];
        assert!(validate(&d, e).is_err());
        let mut e = entries(&set);
        e.push(CachedRoot { coroot: vec![1, 0, 0], word: vec![0] });
        assert!(validate(&d, e).is_err());
    }

    #[test]
    fn hash_depends_on_labels() {
        let m = vec![vec![2, -1], vec![-1, 2]];
        let a = Gcm::from_matrix(m.clone()).unwrap();
        let b = Gcm::new(vec!["x".into(), "y".into()], m).unwrap();
        assert_ne!(gcm_sha256(&a), gcm_sha256(&b));
        assert_eq!(gcm_sha256(&a).len(), 64);
    }
}
