//! Construction of a quantum root from a Dynkin sequence.
//!
//! A positive root is quantum exactly when it is reached from a simple root
//! by simple reflections `r_i` applied to roots `γ` with `⟨γ^∨, α_i⟩ = −1`,
//! each step adding `α_i^∨` to the coroot.  The constructor searches for
//! such a ladder below the target coroot, memoizing dead ends.

use std::collections::HashSet;

use thiserror::Error;

use super::{classify_sequence, dynkin_sequence, is_quantum_by_definition, ClassifyFailure, DynkinSequence, QuantumRootRecord};
use crate::datum::RootDatum;
use crate::roots::{self, coroot_pairing, RealRoot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("sequence rejected: {0}")]
    Rejected(ClassifyFailure),
    #[error("classifier accepted {0:?} but no quantum root realizes it")]
    ConstructionMismatch(DynkinSequence),
}

/// Builds the quantum root of an accepted sequence and verifies it.
pub fn construct_from_sequence(
    datum: &RootDatum,
    seq: &DynkinSequence,
) -> Result<QuantumRootRecord, ConstructError> {
    let classes = classify_sequence(datum, seq).map_err(ConstructError::Rejected)?;
    let (root, witness_word) =
        realize(datum, seq).ok_or_else(|| ConstructError::ConstructionMismatch(seq.clone()))?;
    if dynkin_sequence(&root) != *seq || !is_quantum_by_definition(datum, &root) {
        return Err(ConstructError::ConstructionMismatch(seq.clone()));
    }
    Ok(QuantumRootRecord { root, sequence: seq.clone(), classes: Ok(classes), witness_word })
}

/// Searches for a ladder of `−1` pairings from a simple root up to the
/// coroot of `seq`.  Returns the root and its expression `(i_L, …, i_1)`,
/// or `None` when the sequence is not the sequence of a quantum root.
pub fn realize(datum: &RootDatum, seq: &DynkinSequence) -> Option<(RealRoot, Vec<usize>)> {
    let n = datum.rank();
    if !seq.is_nested() || seq.depth() == 0 || seq.levels().iter().any(|&m| m >> n != 0) {
        return None;
    }
    let target = seq.coroot(n);
    let mut dead: HashSet<Vec<i64>> = HashSet::new();
    for i in (0..n).filter(|&i| target[i] > 0) {
        let mut word = vec![i];
        if let Some(root) = search(datum, &target, RealRoot::simple(n, i), &mut word, &mut dead) {
            word.reverse();
            return Some((root, word));
        }
    }
    None
}

fn search(
    datum: &RootDatum,
    target: &[i64],
    cur: RealRoot,
    word: &mut Vec<usize>,
    dead: &mut HashSet<Vec<i64>>,
) -> Option<RealRoot> {
    if cur.coroot_coords() == target {
        return Some(cur);
    }
    if dead.contains(cur.coroot_coords()) {
        return None;
    }
    for i in 0..datum.rank() {
        if cur.coroot_coords()[i] < target[i] && coroot_pairing(datum, &cur, i) == -1 {
            word.push(i);
            if let Some(r) = search(datum, target, roots::reflect(datum, i, &cur), word, dead) {
                return Some(r);
            }
            word.pop();
        }
    }
    dead.insert(cur.coroot_coords().to_vec());
    None
}
