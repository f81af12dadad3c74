//! Kac-Moody root data: lattices in duality, simple roots and coroots, the
//! height functional, coweights and Tits cone certification.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cartan::{bit, iter_mask, DynkinDiagram, Gcm};

/// Errors raised by datum operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DatumError {
    #[error("dimension mismatch: expected a vector of length {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("coweight not certified in the Tits cone within a budget of {budget} descent steps")]
    BudgetExceeded { budget: usize },
    #[error("invalid root datum: {0}")]
    InvalidDatum(String),
    #[error("pairing-format coweights require the doubled datum")]
    NotDoubled,
}

/// A coweight: an integer vector in `Y`-coordinates.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Coweight(pub Vec<i64>);

impl fmt::Debug for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl Coweight {
    pub fn zero(d: usize) -> Self {
        Coweight(vec![0; d])
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Coweight) -> Coweight {
        Coweight(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    pub fn scale(&self, k: i64) -> Coweight {
        Coweight(self.0.iter().map(|a| a * k).collect())
    }
}

/// Result of the greedy descent of a coweight into the dominant chamber.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ConeCertificate {
    /// The dominant representative `λ^{++}`.
    pub dominant: Coweight,
    /// A reduced word (product order) of the minimal element `v^λ` with
    /// `λ = v^λ λ^{++}`.
    pub min_word: Vec<usize>,
    /// Mask `J` with `W_{λ^{++}} = W_J`.
    pub fixator: u64,
}

/// Outcome of a Tits cone membership query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Inside(ConeCertificate),
    /// Certified outside `Y⁺`: some positive imaginary root pairs negatively
    /// with the coweight, or an affine parabolic sees it at level zero
    /// without fixing it.
    Outside,
    /// Neither conclusion was reached within the budget.
    Unknown,
}

/// A vector of the imaginary cone, used to certify non-membership.
#[derive(Clone, Debug)]
struct ImaginaryWitness {
    /// Coefficients on simple roots (zero outside the support).
    coeffs: Vec<i64>,
    support: u64,
    /// Null root of an affine support.
    affine: bool,
}

/// A Kac-Moody root datum `(X, Y, α, α^∨, ρ)` with pairing the coordinate
/// dot product.
#[derive(Clone)]
pub struct RootDatum {
    gcm: Gcm,
    d: usize,
    simple_roots: Vec<Vec<i64>>,
    simple_coroots: Vec<Vec<i64>>,
    rho: Vec<i64>,
    doubled: bool,
    witnesses: OnceLock<Vec<ImaginaryWitness>>,
}

impl fmt::Debug for RootDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RootDatum({:?}, d={})", self.gcm, self.d)
    }
}

impl RootDatum {
    /// The doubled realization: `d = 2n`, `α_i^∨ = (e_i, 0)`,
    /// `α_j = (A e_j, e_j)`, `ρ = (1, …, 1, 0, …, 0)`.
    pub fn doubled(gcm: &Gcm) -> Self {
        let n = gcm.rank();
        let d = 2 * n;
        let simple_coroots = (0..n)
            .map(|i| {
                let mut v = vec![0; d];
                v[i] = 1;
                v
            })
            .collect();
        let simple_roots = (0..n)
            .map(|j| {
                let mut v = vec![0; d];
                for i in 0..n {
                    v[i] = gcm.entry(i, j);
                }
                v[n + j] = 1;
                v
            })
            .collect();
        let mut rho = vec![0; d];
        rho[..n].iter_mut().for_each(|x| *x = 1);
        RootDatum {
            gcm: gcm.clone(),
            d,
            simple_roots,
            simple_coroots,
            rho,
            doubled: true,
            witnesses: OnceLock::new(),
        }
    }

    /// An explicit realization, validated against the datum invariants.
    pub fn explicit(
        gcm: &Gcm,
        simple_roots: Vec<Vec<i64>>,
        simple_coroots: Vec<Vec<i64>>,
        rho: Vec<i64>,
    ) -> Result<Self, DatumError> {
        let n = gcm.rank();
        let d = rho.len();
        if simple_roots.len() != n || simple_coroots.len() != n {
            return Err(DatumError::InvalidDatum(format!("expected {n} simple roots and coroots")));
        }
        for v in simple_roots.iter().chain(&simple_coroots) {
            if v.len() != d {
                return Err(DatumError::Dimension { expected: d, got: v.len() });
            }
        }
        for i in 0..n {
            for j in 0..n {
                let p = dot(&simple_coroots[i], &simple_roots[j]);
                if p != gcm.entry(i, j) {
                    return Err(DatumError::InvalidDatum(format!(
                        "pairing of coroot {} with root {} is {p}, expected {}",
                        i + 1,
                        j + 1,
                        gcm.entry(i, j)
                    )));
                }
            }
            if dot(&simple_coroots[i], &rho) != 1 {
                return Err(DatumError::InvalidDatum(format!(
                    "pairing of coroot {} with rho is not 1",
                    i + 1
                )));
            }
        }
        if integer_rank(&simple_roots) != n || integer_rank(&simple_coroots) != n {
            return Err(DatumError::InvalidDatum("simple roots or coroots are dependent".into()));
        }
        Ok(RootDatum {
            gcm: gcm.clone(),
            d,
            simple_roots,
            simple_coroots,
            rho,
            doubled: false,
            witnesses: OnceLock::new(),
        })
    }

    /// The same datum with a different height functional `ρ`.
    pub fn with_rho(&self, rho: Vec<i64>) -> Result<Self, DatumError> {
        RootDatum::explicit(&self.gcm, self.simple_roots.clone(), self.simple_coroots.clone(), rho)
            .map(|mut r| {
                r.doubled = self.doubled;
                r
            })
    }

    pub fn gcm(&self) -> &Gcm {
        &self.gcm
    }

    /// Number of simple roots `n`.
    pub fn rank(&self) -> usize {
        self.gcm.rank()
    }

    /// Lattice rank `d`.
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_doubled(&self) -> bool {
        self.doubled
    }

    pub fn simple_root(&self, i: usize) -> &[i64] {
        &self.simple_roots[i]
    }

    pub fn simple_coroot(&self, i: usize) -> &[i64] {
        &self.simple_coroots[i]
    }

    pub fn rho(&self) -> &[i64] {
        &self.rho
    }

    pub fn diagram(&self) -> DynkinDiagram {
        DynkinDiagram::from_gcm(&self.gcm)
    }

    fn check(&self, v: &[i64]) -> Result<(), DatumError> {
        if v.len() != self.d {
            Err(DatumError::Dimension { expected: self.d, got: v.len() })
        } else {
            Ok(())
        }
    }

    /// The duality bracket `⟨λ, x⟩`.
    pub fn pairing(&self, lambda: &Coweight, x: &[i64]) -> Result<i64, DatumError> {
        self.check(&lambda.0)?;
        self.check(x)?;
        Ok(dot(&lambda.0, x))
    }

    /// `⟨λ, α_i⟩`.
    #[inline]
    pub fn simple_pairing(&self, lambda: &Coweight, i: usize) -> i64 {
        dot(&lambda.0, &self.simple_roots[i])
    }

    /// The vector `(⟨λ, α_i⟩)_i`.
    pub fn simple_pairings(&self, lambda: &Coweight) -> Vec<i64> {
        (0..self.rank()).map(|i| self.simple_pairing(lambda, i)).collect()
    }

    /// `r_i(λ) = λ − ⟨λ, α_i⟩ α_i^∨`.
    pub fn reflect_coweight(&self, i: usize, lambda: &Coweight) -> Coweight {
        let p = self.simple_pairing(lambda, i);
        let mut out = lambda.clone();
        if p != 0 {
            for (o, c) in out.0.iter_mut().zip(&self.simple_coroots[i]) {
                *o -= p * c;
            }
        }
        out
    }

    /// `r_i(x) = x − ⟨α_i^∨, x⟩ α_i` on `X`.
    pub fn reflect_weight(&self, i: usize, x: &mut [i64]) {
        let p = dot(&self.simple_coroots[i], x);
        if p != 0 {
            for (o, a) in x.iter_mut().zip(&self.simple_roots[i]) {
                *o -= p * a;
            }
        }
    }

    /// `ht(λ) = ⟨λ, ρ⟩`.
    pub fn height(&self, lambda: &Coweight) -> i64 {
        dot(&lambda.0, &self.rho)
    }

    /// The coweight `Σ N_i α_i^∨`.
    pub fn coweight_from_coroot(&self, coeffs: &[i64]) -> Coweight {
        let mut out = vec![0; self.d];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (o, v) in out.iter_mut().zip(&self.simple_coroots[i]) {
                    *o += c * v;
                }
            }
        }
        Coweight(out)
    }

    /// The weight `Σ m_i α_i` in `X`.
    pub fn weight_from_root(&self, coeffs: &[i64]) -> Vec<i64> {
        let mut out = vec![0; self.d];
        for (i, &c) in coeffs.iter().enumerate() {
            if c != 0 {
                for (o, v) in out.iter_mut().zip(&self.simple_roots[i]) {
                    *o += c * v;
                }
            }
        }
        out
    }

    /// `⟨λ, β⟩` for a root given by its simple-root coordinates.
    pub fn pair_with_root(&self, lambda: &Coweight, root_coords: &[i64]) -> i64 {
        root_coords
            .iter()
            .enumerate()
            .filter(|(_, &m)| m != 0)
            .map(|(j, &m)| m * self.simple_pairing(lambda, j))
            .sum()
    }

    /// Coweight from the `pairings` input format: in the doubled datum the
    /// first block is zero and the second block holds `⟨λ, α_i⟩`.
    pub fn coweight_from_pairings(&self, pairings: &[i64]) -> Result<Coweight, DatumError> {
        if !self.doubled {
            return Err(DatumError::NotDoubled);
        }
        if pairings.len() != self.rank() {
            return Err(DatumError::Dimension { expected: self.rank(), got: pairings.len() });
        }
        let mut v = vec![0; self.rank()];
        v.extend_from_slice(pairings);
        Ok(Coweight(v))
    }

    /// Validates a coweight given in `Y`-coordinates.
    pub fn coweight(&self, coords: Vec<i64>) -> Result<Coweight, DatumError> {
        self.check(&coords)?;
        Ok(Coweight(coords))
    }

    pub fn is_dominant(&self, lambda: &Coweight) -> bool {
        (0..self.rank()).all(|i| self.simple_pairing(lambda, i) >= 0)
    }

    pub fn is_dominant_regular(&self, lambda: &Coweight) -> bool {
        (0..self.rank()).all(|i| self.simple_pairing(lambda, i) > 0)
    }

    /// The coefficients `c` with `λ = Σ c_i α_i^∨`, when `λ` lies in the
    /// coroot lattice.
    pub fn coroot_coefficients(&self, lambda: &Coweight) -> Option<Vec<i64>> {
        let n = self.rank();
        if self.doubled {
            return lambda.0[n..].iter().all(|&x| x == 0).then(|| lambda.0[..n].to_vec());
        }
        solve_integer(&self.simple_coroots, &lambda.0)
    }

    /// Dominance order: `μ − λ` is a non-negative combination of simple
    /// coroots.
    pub fn dominance_leq(&self, lambda: &Coweight, mu: &Coweight) -> bool {
        self.coroot_coefficients(&mu.sub(lambda)).is_some_and(|c| c.iter().all(|&x| x >= 0))
    }

    /// Whether `⟨λ, α_i⟩ = 0` for every `i`.
    pub fn is_in_y_in(&self, lambda: &Coweight) -> bool {
        (0..self.rank()).all(|i| self.simple_pairing(lambda, i) == 0)
    }

    /// Greedy descent into the dominant chamber: while some `⟨λ, α_i⟩ < 0`
    /// (smallest such `i` first) replace `λ` by `r_i(λ)`.
    pub fn certify_in_tits_cone(
        &self,
        lambda: &Coweight,
        budget: usize,
    ) -> Result<ConeCertificate, DatumError> {
        match self.descend(lambda, budget, false) {
            Membership::Inside(c) => Ok(c),
            _ => Err(DatumError::BudgetExceeded { budget }),
        }
    }

    /// Tits cone membership with certified non-membership where possible.
    pub fn tits_cone_membership(&self, lambda: &Coweight, budget: usize) -> Membership {
        self.descend(lambda, budget, true)
    }

    fn descend(&self, lambda: &Coweight, budget: usize, detect_outside: bool) -> Membership {
        let n = self.rank();
        let mut cur = lambda.clone();
        let mut word = Vec::new();
        loop {
            let p = self.simple_pairings(&cur);
            match (0..n).find(|&i| p[i] < 0) {
                None => {
                    let fixator = (0..n).filter(|&i| p[i] == 0).fold(0, |m, i| m | bit(i));
                    return Membership::Inside(ConeCertificate { dominant: cur, min_word: word, fixator });
                }
                Some(i) => {
                    if detect_outside && self.certainly_outside(&p) {
                        return Membership::Outside;
                    }
                    if word.len() >= budget {
                        return Membership::Unknown;
                    }
                    cur = self.reflect_coweight(i, &cur);
                    word.push(i);
                }
            }
        }
    }

    fn certainly_outside(&self, pairings: &[i64]) -> bool {
        self.imaginary_witnesses().iter().any(|w| {
            let s: i64 = iter_mask(w.support).map(|j| w.coeffs[j] * pairings[j]).sum();
            s < 0 || (w.affine && s == 0 && iter_mask(w.support).any(|j| pairings[j] != 0))
        })
    }

    /// For each minimal connected vertex set of non-finite type, a small
    /// positive integer vector `u` with `A_J u ≤ 0`.
    fn imaginary_witnesses(&self) -> &[ImaginaryWitness] {
        self.witnesses.get_or_init(|| {
            let n = self.rank();
            if n > 16 {
                return Vec::new();
            }
            let diagram = self.diagram();
            let mut minimal: Vec<u64> = Vec::new();
            let mut subsets: Vec<u64> = (1u64..(1u64 << n)).collect();
            subsets.sort_by_key(|m| (m.count_ones(), *m));
            for j in subsets {
                if minimal.iter().any(|&m| m & j == m) {
                    continue;
                }
                let sub = diagram.sub(j);
                if !sub.is_connected() || self.gcm.is_finite_type_on(j) {
                    continue;
                }
                minimal.push(j);
            }
            minimal.into_iter().filter_map(|j| self.find_witness(j)).collect()
        })
    }

    fn find_witness(&self, support: u64) -> Option<ImaginaryWitness> {
        let idx: Vec<usize> = iter_mask(support).collect();
        let k = idx.len();
        let bound: i64 = if k <= 6 { 6 } else { 3 };
        let mut u = vec![1i64; k];
        let mut best: Option<(bool, Vec<i64>)> = None;
        loop {
            let image: Vec<i64> = idx
                .iter()
                .map(|&i| idx.iter().zip(&u).map(|(&j, &x)| self.gcm.entry(i, j) * x).sum())
                .collect();
            if image.iter().all(|&x| x <= 0) {
                let affine = image.iter().all(|&x| x == 0);
                if affine || best.is_none() {
                    best = Some((affine, u.clone()));
                }
                if affine {
                    break;
                }
            }
            let mut t = 0;
            loop {
                if t == k {
                    let (affine, u) = best?;
                    let mut coeffs = vec![0; self.rank()];
                    for (&i, &x) in idx.iter().zip(&u) {
                        coeffs[i] = x;
                    }
                    return Some(ImaginaryWitness { coeffs, support, affine });
                }
                if u[t] < bound {
                    u[t] += 1;
                    break;
                }
                u[t] = 1;
                t += 1;
            }
        }
        let (affine, u) = best?;
        let mut coeffs = vec![0; self.rank()];
        for (&i, &x) in idx.iter().zip(&u) {
            coeffs[i] = x;
        }
        Some(ImaginaryWitness { coeffs, support, affine })
    }

    /// Whether the fixator of the certified coweight is finite.
    pub fn is_spherical(&self, cert: &ConeCertificate) -> bool {
        self.gcm.is_finite_type_on(cert.fixator)
    }
}

#[inline]
pub(crate) fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Rank of an integer matrix (rows as vectors) by fraction-free elimination.
fn integer_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = rows.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..cols {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// The integer solution `c` of `Σ c_i cols[i] = target` for linearly
/// independent `cols`, if any.
fn solve_integer(cols: &[Vec<i64>], target: &[i64]) -> Option<Vec<i64>> {
    let n = cols.len();
    let mut m: Vec<Vec<i128>> = (0..target.len())
        .map(|r| cols.iter().map(|c| c[r] as i128).chain([target[r] as i128]).collect())
        .collect();
    let mut rank = 0;
    for c in 0..n {
        let p = (rank..m.len()).find(|&r| m[r][c] != 0)?;
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] != 0 {
                let (a, b) = (m[rank][c], m[r][c]);
                for k in 0..=n {
                    m[r][k] = m[r][k] * a - m[rank][k] * b;
                }
                let g = m[r].iter().fold(0i128, |g, &x| gcd(g, x));
                if g > 1 {
                    m[r].iter_mut().for_each(|x| *x /= g);
                }
            }
        }
        rank += 1;
    }
    if m[n..].iter().any(|row| row[n] != 0) {
        return None;
    }
    (0..n).map(|k| (m[k][n] % m[k][k] == 0).then(|| (m[k][n] / m[k][k]) as i64)).collect()
}

fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
