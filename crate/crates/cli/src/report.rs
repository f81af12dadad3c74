//! Output records of the commands.

use kmq::affine::{AffineElement, AffineReflection};
use kmq::cartan::iter_mask;
use kmq::quantum::{ClassifyFailure, ComponentClass, DynkinSequence};
use kmq::{Gcm, RealRoot, RootDatum};
use serde::Serialize;

use crate::input::labels_of;

#[derive(Serialize)]
pub struct RootRow {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
    pub height: i64,
    pub word: Vec<String>,
    pub quantum: bool,
}

impl RootRow {
    pub fn new(gcm: &Gcm, beta: &RealRoot, word: &[usize], quantum: bool) -> Self {
        RootRow {
            root: beta.root_coords().to_vec(),
            coroot: beta.coroot_coords().to_vec(),
            height: beta.height(),
            word: labels_of(gcm, word),
            quantum,
        }
    }
}

#[derive(Serialize)]
pub struct ClassRow {
    pub kind: &'static str,
    pub base: String,
    pub depth: usize,
    pub j2p: Option<String>,
    pub j2pp: Option<String>,
    pub j3p: Option<String>,
    pub eta: Option<u8>,
    pub n0: Option<usize>,
}

impl ClassRow {
    pub fn new(gcm: &Gcm, c: &ComponentClass) -> Self {
        let label = |v: Option<usize>| v.map(|i| gcm.label(i).to_string());
        ClassRow {
            kind: c.kind.as_str(),
            base: gcm.label(c.base).to_string(),
            depth: c.depth,
            j2p: label(c.j2p),
            j2pp: label(c.j2pp),
            j3p: label(c.j3p),
            eta: c.eta,
            n0: c.n0,
        }
    }
}

pub fn sequence_labels(gcm: &Gcm, seq: &DynkinSequence) -> Vec<Vec<String>> {
    seq.levels().iter().map(|&m| iter_mask(m).map(|i| gcm.label(i).to_string()).collect()).collect()
}

#[derive(Serialize)]
pub struct QuantumRow {
    pub coroot: Vec<i64>,
    pub root: Vec<i64>,
    pub height: i64,
    pub sequence: Vec<Vec<String>>,
    pub classes: Vec<ClassRow>,
    pub word: Vec<String>,
}

#[derive(Serialize)]
pub struct WitnessRow {
    pub root: Vec<i64>,
    pub coroot: Vec<i64>,
    pub height: i64,
    pub word: Vec<String>,
}

#[derive(Serialize)]
pub struct ClassifyReport {
    pub sequence: Vec<Vec<String>>,
    pub accepted: bool,
    pub classes: Vec<ClassRow>,
    pub clause: Option<&'static str>,
    pub reason: Option<String>,
    pub witness: Option<WitnessRow>,
}

impl ClassifyReport {
    pub fn rejected(gcm: &Gcm, seq: &DynkinSequence, failure: &ClassifyFailure) -> Self {
        let mut reason = failure.clause.description().to_string();
        if let Some(n) = failure.level {
            reason.push_str(&format!(" (level {n})"));
        }
        if let Some(v) = failure.vertex {
            reason.push_str(&format!(" (vertex {})", gcm.label(v)));
        }
        for (kind, clause) in &failure.attempts {
            reason.push_str(&format!("; {kind}: {}", clause.name()));
        }
        ClassifyReport {
            sequence: sequence_labels(gcm, seq),
            accepted: false,
            classes: Vec::new(),
            clause: Some(failure.clause.name()),
            reason: Some(reason),
            witness: None,
        }
    }
}

#[derive(Serialize)]
pub struct ElementRow {
    pub coweight: Vec<i64>,
    pub pairings: Vec<i64>,
    pub word: Vec<String>,
    pub length: i64,
}

impl ElementRow {
    pub fn new(datum: &RootDatum, x: &AffineElement) -> Self {
        ElementRow {
            coweight: x.coweight().coords().to_vec(),
            pairings: datum.simple_pairings(x.coweight()),
            word: labels_of(datum.gcm(), x.weyl().word()),
            length: x.length(),
        }
    }
}

#[derive(Serialize)]
pub struct CoverRow {
    #[serde(flatten)]
    pub element: ElementRow,
    pub reflection_coroot: Vec<i64>,
    pub reflection_level: i64,
}

impl CoverRow {
    pub fn new(datum: &RootDatum, y: &AffineElement, refl: &AffineReflection) -> Self {
        CoverRow {
            element: ElementRow::new(datum, y),
            reflection_coroot: refl.root.coroot_coords().to_vec(),
            reflection_level: refl.level,
        }
    }
}

#[derive(Serialize)]
pub struct NodeRow {
    pub id: usize,
    #[serde(flatten)]
    pub element: ElementRow,
}

#[derive(Serialize)]
pub struct EdgeRow {
    pub from: usize,
    pub to: usize,
}

#[derive(Serialize)]
pub struct IntervalReport {
    pub nodes: Vec<NodeRow>,
    pub edges: Vec<[usize; 2]>,
}
