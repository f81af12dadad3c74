//! Elements of the vectorial Weyl group `W^v`: canonical forms, length,
//! Bruhat order, enumeration by length, covers and co-covers.
//!
//! Words are stored in product order: `[i_1, …, i_k]` is the element
//! `r_{i_1} ⋯ r_{i_k}`, which acts on vectors from the right end first.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::cartan::bit;
use crate::datum::{dot, Coweight, RootDatum};
use crate::roots::{self, RealRoot};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeylError {
    #[error("enumeration exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
}

/// A Weyl group element, identified by its action on `ρ`.
///
/// `ρ` pairs to 1 with every simple coroot, so it lies in the interior of the
/// fundamental chamber and its stabilizer is trivial.
#[derive(Clone)]
pub struct WeylElement {
    word: Vec<usize>,
    key: Vec<i64>,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}

impl Eq for WeylElement {}

impl Hash for WeylElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.key.hash(state)
    }
}

impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            write!(f, "e")
        } else {
            let w: Vec<String> = self.word.iter().map(|i| format!("r{}", i + 1)).collect();
            write!(f, "{}", w.join("·"))
        }
    }
}

impl WeylElement {
    pub fn identity(datum: &RootDatum) -> Self {
        WeylElement { word: Vec::new(), key: datum.rho().to_vec() }
    }

    pub fn generator(datum: &RootDatum, i: usize) -> Self {
        let mut key = datum.rho().to_vec();
        datum.reflect_weight(i, &mut key);
        WeylElement { word: vec![i], key }
    }

    /// Canonical reduced word in product order.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// The image `w(ρ)`, which determines `w`.
    pub fn canonical_key(&self) -> &[i64] {
        &self.key
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// Rebuilds an element from its key by stripping left descents
    /// (smallest index first).
    fn from_key(datum: &RootDatum, key: Vec<i64>) -> Self {
        let n = datum.rank();
        let mut cur = key.clone();
        let mut word = Vec::new();
        while let Some(i) = (0..n).find(|&i| dot(datum.simple_coroot(i), &cur) < 0) {
            datum.reflect_weight(i, &mut cur);
            word.push(i);
        }
        WeylElement { word, key }
    }

    /// The element of an arbitrary word, in canonical reduced form.
    pub fn reduce_word(datum: &RootDatum, word: &[usize]) -> Self {
        let mut key = datum.rho().to_vec();
        for &i in word.iter().rev() {
            datum.reflect_weight(i, &mut key);
        }
        Self::from_key(datum, key)
    }

    pub fn multiply(&self, datum: &RootDatum, other: &WeylElement) -> Self {
        let mut key = other.key.clone();
        for &i in self.word.iter().rev() {
            datum.reflect_weight(i, &mut key);
        }
        Self::from_key(datum, key)
    }

    /// `r_i w`.
    pub fn left_mul_generator(&self, datum: &RootDatum, i: usize) -> Self {
        let mut key = self.key.clone();
        datum.reflect_weight(i, &mut key);
        Self::from_key(datum, key)
    }

    pub fn inverse(&self, datum: &RootDatum) -> Self {
        let rev: Vec<usize> = self.word.iter().rev().copied().collect();
        Self::reduce_word(datum, &rev)
    }

    /// Whether `ℓ(r_i w) < ℓ(w)`.
    pub fn is_left_descent(&self, datum: &RootDatum, i: usize) -> bool {
        dot(datum.simple_coroot(i), &self.key) < 0
    }

    /// Whether `ℓ(w r_i) < ℓ(w)`, i.e. `w(α_i) ∈ Φ₋`.
    pub fn is_right_descent(&self, datum: &RootDatum, i: usize) -> bool {
        !self.act_on_root(datum, &RealRoot::simple(datum.rank(), i)).is_positive()
    }

    pub fn act_on_coweight(&self, datum: &RootDatum, lambda: &Coweight) -> Coweight {
        let mut out = lambda.clone();
        for &i in self.word.iter().rev() {
            out = datum.reflect_coweight(i, &out);
        }
        out
    }

    pub fn act_on_weight(&self, datum: &RootDatum, x: &[i64]) -> Vec<i64> {
        let mut out = x.to_vec();
        for &i in self.word.iter().rev() {
            datum.reflect_weight(i, &mut out);
        }
        out
    }

    pub fn act_on_root(&self, datum: &RootDatum, beta: &RealRoot) -> RealRoot {
        let mut out = beta.clone();
        for &i in self.word.iter().rev() {
            out = roots::reflect(datum, i, &out);
        }
        out
    }

    /// Bruhat order `u ≤ w`, by walking a reduced word of `w` and lifting
    /// `u` through common left descents.
    pub fn bruhat_leq(&self, datum: &RootDatum, w: &WeylElement) -> bool {
        if self.length() > w.length() {
            return false;
        }
        let mut key = self.key.clone();
        let mut len = self.length();
        for (pos, &s) in w.word.iter().enumerate() {
            if len > w.length() - pos {
                return false;
            }
            if dot(datum.simple_coroot(s), &key) < 0 {
                datum.reflect_weight(s, &mut key);
                len -= 1;
            }
        }
        len == 0
    }

    /// `(w^J, w_J)` with `w = w^J w_J`, `w_J ∈ W_J` and `w^J` of minimal
    /// length in `w W_J`.
    pub fn min_coset_rep(&self, datum: &RootDatum, j_mask: u64) -> (WeylElement, WeylElement) {
        let mut cur = self.clone();
        let mut stripped: Vec<usize> = Vec::new();
        while let Some(i) =
            (0..datum.rank()).find(|&i| j_mask & bit(i) != 0 && cur.is_right_descent(datum, i))
        {
            let mut w = cur.word.clone();
            w.push(i);
            cur = Self::reduce_word(datum, &w);
            stripped.push(i);
        }
        stripped.reverse();
        let part = Self::reduce_word(datum, &stripped);
        (cur, part)
    }

    /// All elements of length `≤ max_len`, sorted by canonical key.
    pub fn enumerate_by_length(
        datum: &RootDatum,
        max_len: usize,
        cap: usize,
    ) -> Result<Vec<WeylElement>, WeylError> {
        let levels = Self::levels(datum, max_len, cap, u64::MAX)?;
        let mut all: Vec<WeylElement> = levels.into_iter().flatten().collect();
        all.sort();
        Ok(all)
    }

    /// Elements of the parabolic subgroup `W_J` grouped by length.
    pub fn levels(
        datum: &RootDatum,
        max_len: usize,
        cap: usize,
        j_mask: u64,
    ) -> Result<Vec<Vec<WeylElement>>, WeylError> {
        let n = datum.rank();
        let mut levels = vec![vec![Self::identity(datum)]];
        let mut total = 1;
        for _ in 0..max_len {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for w in levels.last().unwrap() {
                for i in (0..n).filter(|&i| j_mask & bit(i) != 0) {
                    if !w.is_left_descent(datum, i) {
                        let mut key = w.key.clone();
                        datum.reflect_weight(i, &mut key);
                        if seen.insert(key.clone()) {
                            let mut word = Vec::with_capacity(w.word.len() + 1);
                            word.push(i);
                            word.extend_from_slice(&w.word);
                            next.push(WeylElement { word, key });
                        }
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            total += next.len();
            if total > cap {
                return Err(WeylError::CapExceeded(cap));
            }
            next.sort();
            levels.push(next);
        }
        for level in levels.iter_mut() {
            for w in level.iter_mut() {
                *w = Self::from_key(datum, std::mem::take(&mut w.key));
            }
        }
        Ok(levels)
    }

    /// Bruhat covers of `u`: the elements `s_γ u` of length `ℓ(u) + 1`.
    ///
    /// A reflection `t` with `ℓ(t u) = ℓ(u) + 1` has `ℓ(t) ≤ 2ℓ(u) + 1`, and
    /// a reflection of length `2k + 1` is `s_γ` for a root `γ` reachable from a
    /// simple root in at most `k + 1` steps, so the candidate roots are finite.
    pub fn covers(&self, datum: &RootDatum) -> Vec<WeylElement> {
        let out: BTreeSet<WeylElement> =
            self.cover_reflections(datum).into_iter().map(|(_, w)| w).collect();
        out.into_iter().collect()
    }

    /// The pairs `(γ, s_γ u)` with `γ ∈ Φ₊` and `ℓ(s_γ u) = ℓ(u) + 1`,
    /// sorted by root.
    pub fn cover_reflections(&self, datum: &RootDatum) -> Vec<(RealRoot, WeylElement)> {
        let target = self.length() + 1;
        let mut out = Vec::new();
        for gamma in roots::roots_by_depth(datum, self.length() + 1) {
            let t = roots::reflection_of(datum, &gamma);
            if t.length() > 2 * self.length() + 1 {
                continue;
            }
            let w = t.multiply(datum, self);
            if w.length() == target {
                out.push((gamma, w));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The pairs `(γ, s_γ u)` with `γ ∈ Φ₊` and `ℓ(s_γ u) = ℓ(u) − 1`,
    /// sorted by root.
    pub fn cocover_reflections(&self, datum: &RootDatum) -> Vec<(RealRoot, WeylElement)> {
        let mut out: Vec<(RealRoot, WeylElement)> = roots::inversion_set(datum, &self.inverse(datum))
            .into_iter()
            .filter_map(|gamma| {
                let w = roots::reflection_of(datum, &gamma).multiply(datum, self);
                (w.length() + 1 == self.length()).then_some((gamma, w))
            })
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Bruhat co-covers of `u`: single-letter deletions of length `ℓ(u) − 1`.
    pub fn cocovers(&self, datum: &RootDatum) -> Vec<WeylElement> {
        let mut out = BTreeSet::new();
        for k in 0..self.word.len() {
            let mut w = self.word.clone();
            w.remove(k);
            let e = Self::reduce_word(datum, &w);
            if e.length() + 1 == self.length() {
                out.insert(e);
            }
        }
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cartan::Gcm;

    fn datum(m: Vec<Vec<i64>>) -> RootDatum {
        RootDatum::doubled(&Gcm::from_matrix(m).unwrap())
    }

    fn a2() -> RootDatum {
        datum(vec![vec![2, -1], vec![-1, 2]])
    }

    #[test]
    fn group_laws() {
        let d = a2();
        let r1 = WeylElement::generator(&d, 0);
        let r2 = WeylElement::generator(&d, 1);
        assert!(r1.multiply(&d, &r1).is_identity());
        let r12 = r1.multiply(&d, &r2);
        assert_eq!(r12.length(), 2);
        assert_eq!(r12.inverse(&d), r2.multiply(&d, &r1));
    }

    #[test]
    fn reduction() {
        let d = a2();
        assert!(WeylElement::reduce_word(&d, &[0, 0]).is_identity());
        assert_eq!(WeylElement::reduce_word(&d, &[0, 1, 0]).length(), 3);
        let c = datum(vec![vec![2, 0], vec![0, 2]]);
        assert_eq!(WeylElement::reduce_word(&c, &[0, 1, 0]), WeylElement::generator(&c, 1));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(WeylElement::enumerate_by_length(&a2(), 5, 100).unwrap().len(), 6);
        let aff = datum(vec![vec![2, -2], vec![-2, 2]]);
        assert_eq!(WeylElement::enumerate_by_length(&aff, 4, 100).unwrap().len(), 9);
        assert_eq!(WeylElement::enumerate_by_length(&aff, 0, 100).unwrap().len(), 1);
        assert!(WeylElement::enumerate_by_length(&aff, 40, 10).is_err());
    }

    #[test]
    fn bruhat_examples() {
        let d = a2();
        let e = WeylElement::identity(&d);
        let r1 = WeylElement::generator(&d, 0);
        let w0 = WeylElement::reduce_word(&d, &[1, 0, 1]);
        let r12 = WeylElement::reduce_word(&d, &[0, 1]);
        assert!(e.bruhat_leq(&d, &w0));
        assert!(r1.bruhat_leq(&d, &r12));
        assert!(r1.bruhat_leq(&d, &w0));
        assert!(!r12.bruhat_leq(&d, &r1));
        let r21 = WeylElement::reduce_word(&d, &[1, 0]);
        assert!(!r12.bruhat_leq(&d, &r21));
    }

    #[test]
    fn covers_and_cocovers() {
        let d = a2();
        let e = WeylElement::identity(&d);
        let r1 = WeylElement::generator(&d, 0);
        let r2 = WeylElement::generator(&d, 1);
        let mut gens = vec![r1.clone(), r2.clone()];
        gens.sort();
        assert_eq!(e.covers(&d), gens);
        let r12 = WeylElement::reduce_word(&d, &[0, 1]);
        assert_eq!(r12.cocovers(&d), gens);
        let mut up = vec![r12.clone(), WeylElement::reduce_word(&d, &[1, 0])];
        up.sort();
        assert_eq!(r1.covers(&d), up);
    }

    #[test]
    fn min_coset() {
        let d = a2();
        let r12 = WeylElement::reduce_word(&d, &[0, 1]);
        let (rep, part) = r12.min_coset_rep(&d, 0b10);
        assert_eq!(rep, WeylElement::generator(&d, 0));
        assert_eq!(part, WeylElement::generator(&d, 1));
        let (rep, part) = r12.min_coset_rep(&d, 0);
        assert_eq!((rep, part.is_identity()), (r12.clone(), true));
        let (rep, part) = r12.min_coset_rep(&d, 0b11);
        assert_eq!((rep.is_identity(), part), (true, r12));
    }
}
