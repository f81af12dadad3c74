//! Quantum roots: the defining predicate, complete enumeration, Dynkin
//! sequences, the classification of Dynkin sequences and the construction
//! of a root from an admissible sequence.

mod classify;
mod construct;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::cartan::{bit, iter_mask, DynkinDiagram};
use crate::datum::RootDatum;
use crate::roots::{self, coroot_pairing, RealRoot};

pub use classify::{classify_sequence, matching_kinds, Clause, ClassKind, ClassifyFailure, ComponentClass};
pub use construct::{construct_from_sequence, realize, ConstructError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuantumError {
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
    #[error("sequences are not mergeable: {0}")]
    NotMergeable(&'static str),
}

/// `⟨β^∨, γ⟩ = 1` for every `γ ∈ Inv(s_β) ∖ {β}`.
pub fn is_quantum_by_definition(datum: &RootDatum, beta: &RealRoot) -> bool {
    let beta = beta.abs();
    let s = roots::reflection_of(datum, &beta);
    roots::inversion_set(datum, &s)
        .iter()
        .filter(|g| **g != beta)
        .all(|g| roots::pairing(datum, &beta, g) == 1)
}

/// `ℓ(s_β) = 2 ht(β^∨) − 1`.
pub fn is_quantum_by_length(datum: &RootDatum, beta: &RealRoot) -> bool {
    let beta = beta.abs();
    roots::reflection_of(datum, &beta).length() as i64 == 2 * beta.height() - 1
}

/// Upper bound `max(6, n + 1)` on the coroot coefficients of quantum roots.
pub fn coefficient_bound(n: usize) -> i64 {
    6.max(n as i64 + 1)
}

/// Upper bound `n^{n+5}` on the number of quantum roots (saturating).
pub fn count_bound(n: usize) -> u128 {
    (0..n + 5).fold(1u128, |acc, _| acc.saturating_mul(n as u128))
}

/// The Dynkin sequence `(I_1, I_2, …)` of vertex sets, stored as masks.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DynkinSequence {
    levels: Vec<u64>,
}

impl fmt::Debug for DynkinSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ls: Vec<Vec<usize>> = self.levels.iter().map(|&m| iter_mask(m).map(|i| i + 1).collect()).collect();
        write!(f, "{:?}", ls)
    }
}

impl DynkinSequence {
    /// Builds a sequence from levels `I_1, I_2, …`; trailing empty levels
    /// are dropped.  Nesting is not enforced here.
    pub fn from_levels(mut levels: Vec<u64>) -> Self {
        while levels.last() == Some(&0) {
            levels.pop();
        }
        DynkinSequence { levels }
    }

    /// `I_n = {i : N_i ≥ n}`.
    pub fn from_coroot(coroot: &[i64]) -> Self {
        let k = coroot.iter().copied().max().unwrap_or(0).max(0) as usize;
        let levels = (1..=k)
            .map(|n| {
                coroot.iter().enumerate().filter(|(_, &c)| c >= n as i64).fold(0, |m, (i, _)| m | bit(i))
            })
            .collect();
        DynkinSequence::from_levels(levels)
    }

    /// `I_n` for `n ≥ 1` (empty beyond the last level).
    pub fn level(&self, n: usize) -> u64 {
        if n == 0 {
            return self.levels.first().copied().unwrap_or(0);
        }
        self.levels.get(n - 1).copied().unwrap_or(0)
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    /// Index `K` of the last nonempty level.
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn is_nested(&self) -> bool {
        self.levels.windows(2).all(|w| w[1] & !w[0] == 0)
    }

    /// `Σ_n Σ_{i∈I_n} α_i^∨` as coefficients over `n` vertices.
    pub fn coroot(&self, n: usize) -> Vec<i64> {
        (0..n).map(|i| self.levels.iter().filter(|&&m| m & bit(i) != 0).count() as i64).collect()
    }
}

/// `I_n(β) = {i : N_i(β) ≥ n}`.
pub fn dynkin_sequence(beta: &RealRoot) -> DynkinSequence {
    DynkinSequence::from_coroot(beta.coroot_coords())
}

/// The coroot vector `Σ_n Σ_{i∈I_n} α_i^∨`.
pub fn root_from_sequence(datum: &RootDatum, seq: &DynkinSequence) -> Vec<i64> {
    seq.coroot(datum.rank())
}

/// A quantum root with its Dynkin sequence and classification.
#[derive(Clone, Debug)]
pub struct QuantumRootRecord {
    pub root: RealRoot,
    pub sequence: DynkinSequence,
    pub classes: Result<Vec<ComponentClass>, ClassifyFailure>,
    /// `(i_L, …, i_1)` with `β = r_{i_L} ⋯ r_{i_2}(α_{i_1})`, each step
    /// pairing to `−1`.
    pub witness_word: Vec<usize>,
}

/// The quantum roots with a witness expression each, by coroot height
/// levels: level 1 holds the simple roots and level `h + 1` the roots
/// `r_i(β)` with `β` in level `h` and `⟨β^∨, α_i⟩ = −1`.
pub fn quantum_roots(datum: &RootDatum) -> Result<Vec<(RealRoot, Vec<usize>)>, QuantumError> {
    let n = datum.rank();
    let coeff_bound = coefficient_bound(n);
    let height_bound = n as i64 * coeff_bound;
    let mut out: Vec<(RealRoot, Vec<usize>)> = (0..n).map(|i| (RealRoot::simple(n, i), vec![i])).collect();
    let mut level: Vec<usize> = (0..n).collect();
    let mut h = 1;
    while !level.is_empty() {
        let mut next: HashMap<RealRoot, Vec<usize>> = HashMap::new();
        for &idx in &level {
            let (beta, word) = &out[idx];
            for i in 0..n {
                if coroot_pairing(datum, beta, i) == -1 && !next.contains_key(&roots::reflect(datum, i, beta)) {
                    let mut w = vec![i];
                    w.extend_from_slice(word);
                    next.insert(roots::reflect(datum, i, beta), w);
                }
            }
        }
        h += 1;
        let mut batch: Vec<(RealRoot, Vec<usize>)> = next.into_iter().collect();
        batch.sort_by(|a, b| a.0.cmp(&b.0));
        if !batch.is_empty() && h > height_bound {
            return Err(QuantumError::InvariantViolation(format!(
                "quantum coroot of height {h} exceeds the bound {height_bound}"
            )));
        }
        for (beta, _) in &batch {
            if let Some(c) = beta.coroot_coords().iter().find(|&&c| c > coeff_bound) {
                return Err(QuantumError::InvariantViolation(format!(
                    "coroot coefficient {c} exceeds the bound {coeff_bound}"
                )));
            }
        }
        let start = out.len();
        out.extend(batch);
        level = (start..out.len()).collect();
        if out.len() as u128 > count_bound(n) {
            return Err(QuantumError::InvariantViolation(format!(
                "more than {} quantum roots",
                count_bound(n)
            )));
        }
    }
    Ok(out)
}

/// All quantum roots with their Dynkin sequences and classifications.
pub fn enumerate_quantum_roots(datum: &RootDatum) -> Result<Vec<QuantumRootRecord>, QuantumError> {
    Ok(quantum_roots(datum)?
        .into_iter()
        .map(|(root, witness_word)| {
            let sequence = dynkin_sequence(&root);
            let classes = classify_sequence(datum, &sequence);
            QuantumRootRecord { root, sequence, classes, witness_word }
        })
        .collect())
}

/// Two sequences with the same `I_1` whose `I_2` are disjoint and not
/// joined by any edge.
pub fn mergeable(datum: &RootDatum, a: &DynkinSequence, b: &DynkinSequence) -> bool {
    merge_check(&datum.diagram(), a, b).is_ok()
}

fn merge_check(d: &DynkinDiagram, a: &DynkinSequence, b: &DynkinSequence) -> Result<(), QuantumError> {
    if a.level(1) != b.level(1) {
        return Err(QuantumError::NotMergeable("different I_1"));
    }
    let (x, y) = (a.level(2), b.level(2));
    if x & y != 0 {
        return Err(QuantumError::NotMergeable("I_2 levels intersect"));
    }
    if iter_mask(x).any(|v| d.neighbor_mask(v) & y != 0) {
        return Err(QuantumError::NotMergeable("I_2 levels are adjacent"));
    }
    Ok(())
}

/// Levelwise union of two mergeable sequences.
pub fn merge(datum: &RootDatum, a: &DynkinSequence, b: &DynkinSequence) -> Result<DynkinSequence, QuantumError> {
    merge_check(&datum.diagram(), a, b)?;
    let k = a.depth().max(b.depth());
    Ok(DynkinSequence::from_levels((1..=k).map(|n| a.level(n) | b.level(n)).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Gcm;

    fn datum(m: Vec<Vec<i64>>) -> RootDatum {
        RootDatum::doubled(&Gcm::from_matrix(m).unwrap())
    }

    #[test]
    fn predicates_on_small_examples() {
        let a2 = datum(vec![vec![2, -1], vec![-1, 2]]);
        let hi = roots::reflect(&a2, 1, &RealRoot::simple(2, 0));
        assert!(is_quantum_by_definition(&a2, &hi));
        assert!(is_quantum_by_length(&a2, &hi));
        let aff = datum(vec![vec![2, -2], vec![-2, 2]]);
        let b = roots::reflect(&aff, 0, &RealRoot::simple(2, 1));
        assert_eq!(b.height(), 3);
        assert!(!is_quantum_by_definition(&aff, &b));
        assert!(!is_quantum_by_length(&aff, &b));
        assert!(is_quantum_by_definition(&aff, &RealRoot::simple(2, 0)));
    }

    #[test]
    fn enumeration_examples() {
        let a3 = datum(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        assert_eq!(quantum_roots(&a3).unwrap().len(), 6);
        let aff = datum(vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(quantum_roots(&aff).unwrap().len(), 2);
        let a2aff = datum(vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]);
        assert_eq!(quantum_roots(&a2aff).unwrap().len(), 6);
        let a3aff = datum(vec![vec![2, -1, 0, -1], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![-1, 0, -1, 2]]);
        assert_eq!(quantum_roots(&a3aff).unwrap().len(), 12);
    }

    #[test]
    fn sequences() {
        assert_eq!(DynkinSequence::from_coroot(&[0, 1, 0]).levels(), &[0b010]);
        assert_eq!(DynkinSequence::from_coroot(&[2, 1]).levels(), &[0b11, 0b01]);
        let s = DynkinSequence::from_levels(vec![0b11, 0b01, 0]);
        assert_eq!(s.coroot(2), vec![2, 1]);
        assert!(s.is_nested());
        assert!(!DynkinSequence::from_levels(vec![0b01, 0b10]).is_nested());
    }

    #[test]
    fn merging() {
        let a5 = datum(vec![
            vec![2, -1, 0, 0, 0],
            vec![-1, 2, -1, 0, 0],
            vec![0, -1, 2, -1, 0],
            vec![0, 0, -1, 2, -1],
            vec![0, 0, 0, -1, 2],
        ]);
        let base = DynkinSequence::from_levels(vec![0b11111]);
        let a = DynkinSequence::from_levels(vec![0b11111, 0b00001]);
        let b = DynkinSequence::from_levels(vec![0b11111, 0b10000]);
        let c = DynkinSequence::from_levels(vec![0b11111, 0b00010]);
        assert_eq!(merge(&a5, &a, &base).unwrap(), a);
        assert_eq!(merge(&a5, &a, &b).unwrap().levels(), &[0b11111, 0b10001]);
        assert!(!mergeable(&a5, &a, &c));
    }
}
