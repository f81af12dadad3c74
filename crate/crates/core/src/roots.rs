//! Real roots with simultaneous root and coroot coordinates, reflections,
//! minimal expressions, inversion sets and bounded enumeration.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::datum::RootDatum;
use crate::weyl::WeylElement;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RootError {
    #[error("root is not positive")]
    NotPositive,
    #[error("not a real root of this datum")]
    NotReachable,
    #[error("enumeration exceeded the cap of {0} roots")]
    CapExceeded(usize),
}

/// A real root `β = Σ m_i α_i` with coroot `β^∨ = Σ N_i α_i^∨`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RealRoot {
    coroot: Vec<i64>,
    root: Vec<i64>,
}

impl fmt::Debug for RealRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "β{:?}/β∨{:?}", self.root, self.coroot)
    }
}

impl RealRoot {
    /// The simple root `α_i` of a rank-`n` datum.
    pub fn simple(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        RealRoot { coroot: e.clone(), root: e }
    }

    /// Simple-root coordinates `m`.
    pub fn root_coords(&self) -> &[i64] {
        &self.root
    }

    /// Simple-coroot coordinates `N`.
    pub fn coroot_coords(&self) -> &[i64] {
        &self.coroot
    }

    pub fn is_positive(&self) -> bool {
        self.coroot.iter().any(|&x| x > 0)
    }

    pub fn negate(&self) -> Self {
        RealRoot {
            coroot: self.coroot.iter().map(|x| -x).collect(),
            root: self.root.iter().map(|x| -x).collect(),
        }
    }

    /// The positive root of `{β, −β}`.
    pub fn abs(&self) -> Self {
        if self.is_positive() {
            self.clone()
        } else {
            self.negate()
        }
    }

    /// `ht(β^∨) = Σ N_i`.
    pub fn height(&self) -> i64 {
        self.coroot.iter().sum()
    }

    pub fn is_simple(&self) -> Option<usize> {
        if self.height() == 1 && self.coroot.iter().all(|&x| x >= 0) {
            self.coroot.iter().position(|&x| x == 1)
        } else {
            None
        }
    }
}

/// `⟨β^∨, α_i⟩ = Σ_j N_j a[j][i]`.
#[inline]
pub fn coroot_pairing(datum: &RootDatum, beta: &RealRoot, i: usize) -> i64 {
    let g = datum.gcm();
    beta.coroot.iter().enumerate().filter(|(_, &n)| n != 0).map(|(j, &n)| n * g.entry(j, i)).sum()
}

/// `⟨α_i^∨, β⟩ = Σ_j a[i][j] m_j`.
#[inline]
pub fn root_pairing(datum: &RootDatum, i: usize, beta: &RealRoot) -> i64 {
    let g = datum.gcm();
    beta.root.iter().enumerate().filter(|(_, &m)| m != 0).map(|(j, &m)| g.entry(i, j) * m).sum()
}

/// `⟨β^∨, γ⟩ = Nᵀ A m`.
pub fn pairing(datum: &RootDatum, beta: &RealRoot, gamma: &RealRoot) -> i64 {
    (0..datum.rank()).filter(|&i| gamma.root[i] != 0).map(|i| coroot_pairing(datum, beta, i) * gamma.root[i]).sum()
}

/// The simple reflection `r_i` on a real root.
pub fn reflect(datum: &RootDatum, i: usize, beta: &RealRoot) -> RealRoot {
    let mut out = beta.clone();
    out.root[i] -= root_pairing(datum, i, beta);
    out.coroot[i] -= coroot_pairing(datum, beta, i);
    out
}

/// A minimal expression `β = r_{i_L} ⋯ r_{i_2}(α_{i_1})`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalExpression {
    /// `(i_L, …, i_2, i_1)`.
    pub word: Vec<usize>,
    /// `γ_1, …, γ_L` with `γ_1 = α_{i_1}` and `γ_L = β`.
    pub trace: Vec<RealRoot>,
}

impl MinimalExpression {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Shortest expression of a positive root, by breadth-first search from
/// the simple roots through positive roots.
pub fn minimal_expression(datum: &RootDatum, beta: &RealRoot) -> Result<MinimalExpression, RootError> {
    if !beta.is_positive() {
        return Err(RootError::NotPositive);
    }
    let n = datum.rank();
    let max_depth = beta.height().min(beta.root.iter().sum()).max(1) as usize;
    let mut parent: HashMap<RealRoot, Option<(usize, RealRoot)>> = HashMap::new();
    let mut frontier: Vec<RealRoot> = (0..n).map(|i| RealRoot::simple(n, i)).collect();
    for r in &frontier {
        parent.insert(r.clone(), None);
    }
    let mut depth = 1;
    loop {
        if parent.contains_key(beta) {
            break;
        }
        if depth >= max_depth || frontier.is_empty() {
            return Err(RootError::NotReachable);
        }
        let mut next = Vec::new();
        for r in &frontier {
            for i in 0..n {
                let s = reflect(datum, i, r);
                if s.is_positive() && !parent.contains_key(&s) {
                    parent.insert(s.clone(), Some((i, r.clone())));
                    next.push(s);
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    let mut trace = vec![beta.clone()];
    let mut word = Vec::new();
    let mut cur = beta.clone();
    while let Some(Some((i, prev))) = parent.get(&cur) {
        word.push(*i);
        trace.push(prev.clone());
        cur = prev.clone();
    }
    word.push(cur.is_simple().expect("search starts at simple roots"));
    trace.reverse();
    Ok(MinimalExpression { word, trace })
}

/// Some expression `β = r_{i_L} ⋯ r_{i_2}(α_{i_1})` (product order), found by
/// lowering the coroot height one reflection at a time.
pub fn descent_expression(datum: &RootDatum, beta: &RealRoot) -> Result<Vec<usize>, RootError> {
    if !beta.is_positive() {
        return Err(RootError::NotPositive);
    }
    let mut cur = beta.clone();
    let mut word = Vec::new();
    loop {
        if let Some(i) = cur.is_simple() {
            word.push(i);
            return Ok(word);
        }
        let i = (0..datum.rank())
            .find(|&i| coroot_pairing(datum, &cur, i) > 0)
            .ok_or(RootError::NotReachable)?;
        cur = reflect(datum, i, &cur);
        if !cur.is_positive() {
            return Err(RootError::NotReachable);
        }
        word.push(i);
    }
}

/// The reflection `s_β = w r_i w⁻¹` for `β = w(α_i)`.
pub fn reflection_of(datum: &RootDatum, beta: &RealRoot) -> WeylElement {
    let beta = beta.abs();
    let expr = descent_expression(datum, &beta).expect("real root");
    reflection_from_expression(datum, &expr)
}

/// The reflection of the root `r_{i_L} ⋯ r_{i_2}(α_{i_1})`, given the word
/// `(i_L, …, i_1)`.
pub fn reflection_from_expression(datum: &RootDatum, expr: &[usize]) -> WeylElement {
    let (&last, prefix) = expr.split_last().expect("nonempty expression");
    let mut w: Vec<usize> = prefix.to_vec();
    w.push(last);
    w.extend(prefix.iter().rev());
    WeylElement::reduce_word(datum, &w)
}

/// `Inv(w) = Φ₊ ∩ w⁻¹Φ₋`, from the telescoping formula on the canonical
/// reduced word, in that order.
pub fn inversion_set(datum: &RootDatum, w: &WeylElement) -> Vec<RealRoot> {
    let word = w.word();
    let n = datum.rank();
    let m = word.len();
    (0..m)
        .rev()
        .map(|k| {
            let mut r = RealRoot::simple(n, word[k]);
            for &s in &word[k + 1..] {
                r = reflect(datum, s, &r);
            }
            r
        })
        .collect()
}

/// All positive real roots with `ht(β^∨) ≤ bound`, with one expression
/// (product order) each, sorted by height then coroot.
pub fn enumerate_real_roots(
    datum: &RootDatum,
    bound: i64,
    cap: usize,
) -> Result<Vec<(RealRoot, Vec<usize>)>, RootError> {
    let n = datum.rank();
    let mut by_height: BTreeMap<i64, Vec<RealRoot>> = BTreeMap::new();
    let mut expr: HashMap<RealRoot, Vec<usize>> = HashMap::new();
    if bound >= 1 {
        for i in 0..n {
            let r = RealRoot::simple(n, i);
            expr.insert(r.clone(), vec![i]);
            by_height.entry(1).or_default().push(r);
        }
    }
    for h in 1..=bound {
        let level = by_height.get(&h).cloned().unwrap_or_default();
        for r in level {
            for i in 0..n {
                let p = coroot_pairing(datum, &r, i);
                if p < 0 && h - p <= bound {
                    let s = reflect(datum, i, &r);
                    if !expr.contains_key(&s) {
                        let mut e = vec![i];
                        e.extend_from_slice(&expr[&r]);
                        expr.insert(s.clone(), e);
                        by_height.entry(h - p).or_default().push(s);
                        if expr.len() > cap {
                            return Err(RootError::CapExceeded(cap));
                        }
                    }
                }
            }
        }
    }
    let mut out: Vec<(RealRoot, Vec<usize>)> = expr.into_iter().collect();
    out.sort_by(|a, b| (a.0.height(), &a.0).cmp(&(b.0.height(), &b.0)));
    Ok(out)
}

/// Positive roots reachable from a simple root in at most `max_depth`
/// simple reflections (minimal expression length `≤ max_depth`).
pub fn roots_by_depth(datum: &RootDatum, max_depth: usize) -> Vec<RealRoot> {
    let n = datum.rank();
    let mut seen: HashSet<RealRoot> = HashSet::new();
    let mut frontier: Vec<RealRoot> = (0..n).map(|i| RealRoot::simple(n, i)).collect();
    let mut out = Vec::new();
    for r in &frontier {
        seen.insert(r.clone());
    }
    for depth in 1..=max_depth {
        out.extend(frontier.iter().cloned());
        if depth == max_depth {
            break;
        }
        let mut next = Vec::new();
        for r in &frontier {
            for i in 0..n {
                let s = reflect(datum, i, r);
                if s.is_positive() && seen.insert(s.clone()) {
                    next.push(s);
                }
            }
        }
        frontier = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Gcm;

    fn datum(m: Vec<Vec<i64>>) -> RootDatum {
        RootDatum::doubled(&Gcm::from_matrix(m).unwrap())
    }

    #[test]
    fn reflect_examples() {
        let d = datum(vec![vec![2, -1], vec![-1, 2]]);
        let a1 = RealRoot::simple(2, 0);
        assert_eq!(reflect(&d, 0, &a1), a1.negate());
        let s = reflect(&d, 1, &a1);
        assert_eq!((s.root_coords(), s.coroot_coords()), (&[1, 1][..], &[1, 1][..]));
        let g = datum(vec![vec![2, -1], vec![-3, 2]]);
        let s = reflect(&g, 0, &RealRoot::simple(2, 1));
        assert_eq!((s.root_coords(), s.coroot_coords()), (&[1, 1][..], &[3, 1][..]));
        assert_eq!(pairing(&g, &s, &s), 2);
    }

    #[test]
    fn minimal_expressions() {
        let d = datum(vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]);
        let hi = RealRoot { coroot: vec![1, 1, 1], root: vec![1, 1, 1] };
        let e = minimal_expression(&d, &hi).unwrap();
        assert_eq!(e.len(), 3);
        assert_eq!(e.trace.last(), Some(&hi));
        assert_eq!(minimal_expression(&d, &RealRoot::simple(3, 1)).unwrap().len(), 1);
        let fake = RealRoot { coroot: vec![1, 0, 1], root: vec![1, 0, 1] };
        assert_eq!(minimal_expression(&d, &fake), Err(RootError::NotReachable));
    }

    #[test]
    fn inversion_sets() {
        let d = datum(vec![vec![2, -1], vec![-1, 2]]);
        let r1 = WeylElement::generator(&d, 0);
        assert_eq!(inversion_set(&d, &r1), vec![RealRoot::simple(2, 0)]);
        assert!(inversion_set(&d, &WeylElement::identity(&d)).is_empty());
        let hi = RealRoot { coroot: vec![1, 1], root: vec![1, 1] };
        let s = reflection_of(&d, &hi);
        assert_eq!(s.length(), 3);
        let mut inv = inversion_set(&d, &s);
        inv.sort();
        let mut want = vec![RealRoot::simple(2, 0), RealRoot::simple(2, 1), hi];
        want.sort();
        assert_eq!(inv, want);
    }

    #[test]
    fn enumeration() {
        let d = datum(vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(enumerate_real_roots(&d, 1, 100).unwrap().len(), 2);
        assert_eq!(enumerate_real_roots(&d, 2, 100).unwrap().len(), 3);
        let aff = datum(vec![vec![2, -2], vec![-2, 2]]);
        let roots = enumerate_real_roots(&aff, 5, 100).unwrap();
        let co: Vec<Vec<i64>> = roots.iter().map(|(r, _)| r.coroot_coords().to_vec()).collect();
        assert_eq!(co, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1], vec![2, 3], vec![3, 2]]
            .into_iter()
            .filter(|v| v.iter().sum::<i64>() <= 5)
            .collect::<Vec<_>>());
    }
}
