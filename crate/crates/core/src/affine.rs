//! The affine Weyl semi-group `W⁺ = Y⁺ ⋊ W^v`: affine roots and
//! reflections, the affine Bruhat length, covers, co-covers, intervals and
//! explicit covers attached to quantum roots.
//!
//! Elements of `Y ⋊ W^v` are written `ϖ^λ w` and multiply as
//! `ϖ^λ w · ϖ^μ u = ϖ^{λ + wμ} wu`.  Covers are found by generating a
//! finite candidate set of affine reflections and keeping the candidates
//! `y = s_{β[n]} x` with `x < y` and `ℓᵃ(y) = ℓᵃ(x) + 1`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::hash::{Hash, Hasher};

use thiserror::Error;

use crate::cartan::{bit, iter_mask};
use crate::datum::{ConeCertificate, Coweight, DatumError, Membership, RootDatum};
use crate::quantum::{self, QuantumError};
use crate::roots::{self, RealRoot};
use crate::weyl::{WeylElement, WeylError};

/// Errors raised by affine operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("coweight not certified in the Tits cone within a budget of {budget} descent steps")]
    BudgetExceeded { budget: usize },
    #[error("coweight {0:?} lies outside the Tits cone")]
    NotInTitsCone(Coweight),
    #[error("co-covers not supported: {0}")]
    NotSupported(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
    #[error("construction failed verification: {0}")]
    VerificationFailed(String),
    #[error("affine root is not positive")]
    NotPositive,
    #[error(transparent)]
    Datum(#[from] DatumError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
}

/// Cone certification budget for a computation spanning `gap` length levels.
pub fn default_budget(gap: usize) -> usize {
    10 * (gap + 16)
}

const ENUMERATION_CAP: usize = 1 << 20;

/// An element `ϖ^λ w` of `Y ⋊ W^v`, not necessarily in `W⁺`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffinePair {
    pub coweight: Coweight,
    pub weyl: WeylElement,
}

impl fmt::Debug for AffinePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ϖ^{:?} {:?}", self.coweight, self.weyl)
    }
}

impl AffinePair {
    pub fn new(coweight: Coweight, weyl: WeylElement) -> Self {
        AffinePair { coweight, weyl }
    }

    pub fn identity(datum: &RootDatum) -> Self {
        AffinePair { coweight: Coweight::zero(datum.dim()), weyl: WeylElement::identity(datum) }
    }

    pub fn translation(datum: &RootDatum, lambda: Coweight) -> Self {
        AffinePair { coweight: lambda, weyl: WeylElement::identity(datum) }
    }

    pub fn multiply(&self, datum: &RootDatum, other: &AffinePair) -> Self {
        AffinePair {
            coweight: self.coweight.add(&self.weyl.act_on_coweight(datum, &other.coweight)),
            weyl: self.weyl.multiply(datum, &other.weyl),
        }
    }

    /// `(ϖ^λ w)⁻¹ = ϖ^{−w⁻¹λ} w⁻¹`.
    pub fn inverse(&self, datum: &RootDatum) -> Self {
        let inv = self.weyl.inverse(datum);
        AffinePair { coweight: inv.act_on_coweight(datum, &self.coweight).scale(-1), weyl: inv }
    }

    /// `ϖ^λ w.(β, n) = (wβ, n + ⟨λ, wβ⟩)`.
    pub fn act(&self, datum: &RootDatum, a: &AffineRoot) -> AffineRoot {
        let root = self.weyl.act_on_root(datum, &a.root);
        let level = a.level + datum.pair_with_root(&self.coweight, root.root_coords());
        AffineRoot { root, level }
    }
}

/// An affine root `(β, n) ∈ Φ × ℤ`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineRoot {
    pub root: RealRoot,
    pub level: i64,
}

impl AffineRoot {
    pub fn new(root: RealRoot, level: i64) -> Self {
        AffineRoot { root, level }
    }

    /// `β[n] = (sgn(n)β, |n|)` for `β ∈ Φ₊`, with `sgn(0) = +1`.
    pub fn bracket(beta: &RealRoot, n: i64) -> Self {
        let beta = beta.abs();
        if n >= 0 {
            AffineRoot { root: beta, level: n }
        } else {
            AffineRoot { root: beta.negate(), level: -n }
        }
    }

    /// `n > 0`, or `n = 0` and `β ∈ Φ₊`.
    pub fn is_positive(&self) -> bool {
        self.level > 0 || (self.level == 0 && self.root.is_positive())
    }

    pub fn negate(&self) -> Self {
        AffineRoot { root: self.root.negate(), level: -self.level }
    }

    /// The pair `(β, n)` with `β ∈ Φ₊` and `self = β[n]`.
    pub fn as_bracket(&self) -> Result<(RealRoot, i64), AffineError> {
        if !self.is_positive() {
            return Err(AffineError::NotPositive);
        }
        if self.root.is_positive() {
            Ok((self.root.clone(), self.level))
        } else {
            Ok((self.root.negate(), -self.level))
        }
    }
}

/// The affine reflection `s_{β[n]} = ϖ^{nβ^∨} s_β`, stored with `β ∈ Φ₊`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineReflection {
    pub root: RealRoot,
    pub level: i64,
}

impl AffineReflection {
    /// Normalizes `(−β, −n)` to `(β, n)`; both give the same reflection.
    pub fn new(root: &RealRoot, level: i64) -> Self {
        if root.is_positive() {
            AffineReflection { root: root.clone(), level }
        } else {
            AffineReflection { root: root.negate(), level: -level }
        }
    }

    pub fn affine_root(&self) -> AffineRoot {
        AffineRoot::bracket(&self.root, self.level)
    }

    pub fn to_pair(&self, datum: &RootDatum) -> AffinePair {
        AffinePair {
            coweight: datum.coweight_from_coroot(self.root.coroot_coords()).scale(self.level),
            weyl: roots::reflection_of(datum, &self.root),
        }
    }

    /// `s_{β[n]} ϖ^λ w = ϖ^{nβ^∨ + s_β λ} s_β w`.
    pub fn apply(&self, datum: &RootDatum, x: &AffinePair) -> AffinePair {
        let p = datum.pair_with_root(&x.coweight, self.root.root_coords());
        let coroot = datum.coweight_from_coroot(self.root.coroot_coords());
        AffinePair {
            coweight: x.coweight.add(&coroot.scale(self.level - p)),
            weyl: roots::reflection_of(datum, &self.root).multiply(datum, &x.weyl),
        }
    }
}

/// Position of `s_a x` relative to `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    /// `s_a x < x`.
    Lower,
    /// `s_a x > x` (when `s_a x ∈ W⁺`).
    Higher,
}

/// Outcome of [`AffineSemigroup::reflection_compare`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionCompare {
    pub side: Side,
    pub image: AffinePair,
}

/// An element `ϖ^λ w ∈ W⁺` with its certified coweight and cached length.
#[derive(Clone)]
pub struct AffineElement {
    pair: AffinePair,
    cert: ConeCertificate,
    min_rep: WeylElement,
    length: i64,
}

impl PartialEq for AffineElement {
    fn eq(&self, other: &Self) -> bool {
        self.pair == other.pair
    }
}

impl Eq for AffineElement {}

impl Hash for AffineElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.pair.hash(state)
    }
}

impl PartialOrd for AffineElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Sorted by `(ℓᵃ, λ, w)`.
impl Ord for AffineElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.length, &self.pair).cmp(&(other.length, &other.pair))
    }
}

impl fmt::Debug for AffineElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} [ℓᵃ={}]", self.pair, self.length)
    }
}

impl AffineElement {
    pub fn pair(&self) -> &AffinePair {
        &self.pair
    }

    pub fn coweight(&self) -> &Coweight {
        &self.pair.coweight
    }

    pub fn weyl(&self) -> &WeylElement {
        &self.pair.weyl
    }

    pub fn certificate(&self) -> &ConeCertificate {
        &self.cert
    }

    /// `λ^{++}`.
    pub fn dominant(&self) -> &Coweight {
        &self.cert.dominant
    }

    /// `v^λ`, the minimal element with `λ = v^λ λ^{++}`.
    pub fn min_rep(&self) -> &WeylElement {
        &self.min_rep
    }

    /// `ℓᵃ(ϖ^λ w) = 2ht(λ^{++}) + ℓ(v⁻¹w) − ℓ(v)` with `v = v^λ`.
    pub fn length(&self) -> i64 {
        self.length
    }
}

/// Data `(λ, v, w, β, n)` of a cover `y = s_{v(β)[n]} x` with
/// `x = ϖ^{vλ} w`, `λ` dominant and `v` minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverShape {
    pub lambda: Coweight,
    pub v: WeylElement,
    pub w: WeylElement,
    pub beta: RealRoot,
    pub n: i64,
}

impl CoverShape {
    /// Whether `n ∈ {0, ⟨λ, β⟩}`, i.e. the dominant class is unchanged.
    pub fn keeps_dominant_class(&self, datum: &RootDatum) -> bool {
        self.n == 0 || self.n == datum.pair_with_root(&self.lambda, self.beta.root_coords())
    }

    /// Whether `n ∈ {0, ⟨λ, β⟩, −1, ⟨λ, β⟩ + 1}`.
    pub fn has_allowed_level(&self, datum: &RootDatum) -> bool {
        let p = datum.pair_with_root(&self.lambda, self.beta.root_coords());
        [0, p, -1, p + 1].contains(&self.n)
    }
}

/// A co-cover set, marked partial when produced by a bounded search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocoverSet {
    pub elements: Vec<AffineElement>,
    pub partial: bool,
}

/// The cover graph of an interval `[x, y]`, nodes sorted by `(ℓᵃ, λ, w)`
/// and edges `(lower, upper)` as node indices.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Interval {
    pub nodes: Vec<AffineElement>,
    pub edges: Vec<(usize, usize)>,
}

impl Interval {
    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Which explicit cover construction to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExplicitVariant {
    /// `ϖ^{v(λ)} v s_β w ⋖ ϖ^{v(λ+β^∨)} v w`, needs `ℓ(s_β w) = ℓ(s_β) + ℓ(w)`.
    One,
    /// `ϖ^{v(λ)} w ⋖ ϖ^{v s_β(λ+β^∨)} s_{v(β)} w`, needs `ℓ(v s_β) = ℓ(v) + ℓ(s_β)`.
    Two,
}

/// The semi-group `W⁺` of a root datum, with the quantum roots and the cone
/// certification budget used by every query.
#[derive(Clone, Debug)]
pub struct AffineSemigroup<'a> {
    datum: &'a RootDatum,
    budget: usize,
    quantum: Vec<RealRoot>,
}

impl<'a> AffineSemigroup<'a> {
    pub fn new(datum: &'a RootDatum, budget: usize) -> Result<Self, AffineError> {
        let quantum = quantum::quantum_roots(datum)?.into_iter().map(|(r, _)| r).collect();
        Ok(AffineSemigroup { datum, budget, quantum })
    }

    /// Uses a precomputed quantum root set.
    pub fn with_quantum_roots(datum: &'a RootDatum, budget: usize, quantum: Vec<RealRoot>) -> Self {
        AffineSemigroup { datum, budget, quantum }
    }

    pub fn datum(&self) -> &'a RootDatum {
        self.datum
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn quantum_roots(&self) -> &[RealRoot] {
        &self.quantum
    }

    /// Certifies `ϖ^λ w ∈ W⁺`, or `None` when `λ` is certified outside `Y⁺`.
    pub fn try_element(&self, pair: AffinePair) -> Result<Option<AffineElement>, AffineError> {
        match self.datum.tits_cone_membership(&pair.coweight, self.budget) {
            Membership::Inside(cert) => Ok(Some(self.build(pair, cert))),
            Membership::Outside => Ok(None),
            Membership::Unknown => Err(AffineError::BudgetExceeded { budget: self.budget }),
        }
    }

    pub fn element(&self, coweight: Coweight, weyl: WeylElement) -> Result<AffineElement, AffineError> {
        let pair = AffinePair::new(coweight, weyl);
        let lambda = pair.coweight.clone();
        self.try_element(pair)?.ok_or(AffineError::NotInTitsCone(lambda))
    }

    pub fn identity(&self) -> AffineElement {
        self.element(Coweight::zero(self.datum.dim()), WeylElement::identity(self.datum))
            .expect("the origin is dominant")
    }

    fn build(&self, pair: AffinePair, cert: ConeCertificate) -> AffineElement {
        let d = self.datum;
        let min_rep = WeylElement::reduce_word(d, &cert.min_word);
        let rel = min_rep.inverse(d).multiply(d, &pair.weyl);
        let length = 2 * d.height(&cert.dominant) + rel.length() as i64 - min_rep.length() as i64;
        AffineElement { pair, cert, min_rep, length }
    }

    /// `ϖ^λ w.(β, n)`.
    pub fn act_on_affine_root(&self, x: &AffinePair, a: &AffineRoot) -> AffineRoot {
        x.act(self.datum, a)
    }

    /// `ℓᵃ` of an element of `W⁺`.
    pub fn affine_length(&self, x: &AffineElement) -> i64 {
        x.length
    }

    /// Compares `s_a x` with `x` for a positive affine root `a = β[n]`:
    /// `s_a x < x` iff `|n| < sgn(n)⟨λ, β⟩`, or `|n| = sgn(n)⟨λ, β⟩` and
    /// `sgn(n) w⁻¹β ∈ Φ₋`.
    pub fn reflection_compare(&self, x: &AffinePair, a: &AffineRoot) -> Result<ReflectionCompare, AffineError> {
        let (beta, n) = a.as_bracket()?;
        let refl = AffineReflection::new(&beta, n);
        Ok(ReflectionCompare { side: self.side(x, &refl), image: refl.apply(self.datum, x) })
    }

    fn side(&self, x: &AffinePair, refl: &AffineReflection) -> Side {
        let d = self.datum;
        let n = refl.level;
        let sgn = if n >= 0 { 1 } else { -1 };
        let p = sgn * d.pair_with_root(&x.coweight, refl.root.root_coords());
        let lower = n.abs() < p
            || (n.abs() == p && {
                let image = x.weyl.inverse(d).act_on_root(d, &refl.root);
                image.is_positive() != (sgn > 0)
            });
        if lower {
            Side::Lower
        } else {
            Side::Higher
        }
    }

    /// The data `(λ, v, w, β, n)` of `s_{γ[m]} x` in the normal form of
    /// covers: `γ = v(β)` up to sign with `β ∈ Φ₊`.
    pub fn decompose(&self, x: &AffineElement, gamma: &RealRoot, m: i64) -> CoverShape {
        let d = self.datum;
        let inv = x.min_rep.inverse(d);
        let beta = inv.act_on_root(d, gamma);
        let (beta, n) = if beta.is_positive() { (beta, m) } else { (beta.negate(), -m) };
        CoverShape { lambda: x.cert.dominant.clone(), v: x.min_rep.clone(), w: x.pair.weyl.clone(), beta, n }
    }

    /// The complete set of covers of `x`, sorted.
    pub fn covers(&self, x: &AffineElement) -> Result<Vec<AffineElement>, AffineError> {
        Ok(self.covers_with_reflections(x)?.into_iter().map(|(y, _)| y).collect())
    }

    /// Covers of `x` with the reflection `s_{γ[m]}` (normalized, `γ ∈ Φ₊`)
    /// sending `x` to each.
    pub fn covers_with_reflections(
        &self,
        x: &AffineElement,
    ) -> Result<Vec<(AffineElement, AffineReflection)>, AffineError> {
        let d = self.datum;
        let lambda = &x.cert.dominant;
        let v = &x.min_rep;
        let u = v.inverse(d).multiply(d, &x.pair.weyl);
        let mut cands: BTreeSet<AffineReflection> = BTreeSet::new();
        for (beta, _) in u.cover_reflections(d) {
            let m = d.pair_with_root(lambda, beta.root_coords());
            cands.insert(AffineReflection::new(&v.act_on_root(d, &beta), m));
        }
        for (gamma, _) in v.cocover_reflections(d) {
            cands.insert(AffineReflection::new(&gamma, 0));
        }
        for beta in &self.quantum {
            let gamma = v.act_on_root(d, beta);
            let p = d.pair_with_root(lambda, beta.root_coords());
            cands.insert(AffineReflection::new(&gamma, -1));
            cands.insert(AffineReflection::new(&gamma, p + 1));
        }
        let mut out = Vec::new();
        for refl in cands {
            let y = refl.apply(d, &x.pair);
            if self.side(&y, &refl) != Side::Lower {
                continue;
            }
            if let Some(e) = self.try_element(y)? {
                if e.length == x.length + 1 {
                    out.push((e, refl));
                }
            }
        }
        out.sort();
        out.dedup_by(|a, b| a.0 == b.0);
        Ok(out)
    }

    /// The complete set of co-covers of `y`, for `y` spherical or with
    /// coweight in `Y_in`.
    pub fn cocovers(&self, y: &AffineElement) -> Result<Vec<AffineElement>, AffineError> {
        let set = self.cocover_search(y, None)?;
        Ok(set.elements)
    }

    /// Co-covers with a bounded search: exact on supported inputs, and on
    /// other inputs the co-covers reachable through coset elements of
    /// length `≤ bound`, marked partial.
    pub fn cocovers_bounded(&self, y: &AffineElement, bound: usize) -> Result<CocoverSet, AffineError> {
        self.cocover_search(y, Some(bound))
    }

    fn cocover_search(&self, y: &AffineElement, bound: Option<usize>) -> Result<CocoverSet, AffineError> {
        let d = self.datum;
        let mu = &y.pair.coweight;
        let w = &y.pair.weyl;
        let mut cands: BTreeSet<AffineReflection> = BTreeSet::new();
        let mut partial = false;
        if d.is_in_y_in(mu) {
            for (gamma, _) in w.cocover_reflections(d) {
                cands.insert(AffineReflection::new(&gamma, 0));
            }
        } else {
            let spherical = d.is_spherical(&y.cert);
            let max_len = match (spherical, bound) {
                (true, _) => usize::MAX,
                (false, Some(b)) => {
                    partial = true;
                    b
                }
                (false, None) => {
                    return Err(AffineError::NotSupported(format!(
                        "coweight {mu:?} is neither spherical nor in Y_in"
                    )))
                }
            };
            let lambda = &y.cert.dominant;
            let vmu = &y.min_rep;
            let coset: Vec<WeylElement> = WeylElement::levels(d, max_len, ENUMERATION_CAP, y.cert.fixator)?
                .into_iter()
                .flatten()
                .map(|z| vmu.multiply(d, &z))
                .collect();
            let big_l = coset.iter().map(|u| u.length()).max().unwrap_or(0);
            for u in &coset {
                for (delta, _) in u.cover_reflections(d) {
                    cands.insert(AffineReflection::new(&delta, 0));
                }
            }
            let t = vmu.inverse(d).multiply(d, w);
            for (beta, _) in t.cocover_reflections(d) {
                let m = d.pair_with_root(lambda, beta.root_coords());
                cands.insert(AffineReflection::new(&vmu.act_on_root(d, &beta), m));
            }
            for v in WeylElement::enumerate_by_length(d, big_l, ENUMERATION_CAP)? {
                for beta in &self.quantum {
                    let gamma = v.act_on_root(d, beta);
                    let p = d.pair_with_root(mu, gamma.root_coords());
                    cands.insert(AffineReflection::new(&gamma, p - 1));
                    cands.insert(AffineReflection::new(&gamma, -1));
                }
            }
        }
        let mut out = Vec::new();
        for refl in cands {
            if self.side(&y.pair, &refl) != Side::Lower {
                continue;
            }
            let x = refl.apply(d, &y.pair);
            let lambda = x.coweight.clone();
            let e = self.try_element(x)?.ok_or(AffineError::NotInTitsCone(lambda))?;
            if e.length + 1 == y.length {
                out.push(e);
            }
        }
        out.sort();
        out.dedup();
        Ok(CocoverSet { elements: out, partial })
    }

    /// The cover graph of `[x, y]`; empty iff `x ≰ y`.
    ///
    /// Walks up from `x` through covers to the length of `y`, skipping
    /// elements whose dominant coweight is not below that of `y` in the
    /// dominance order (covers never lower it), then keeps the elements
    /// from which `y` is reachable.
    pub fn interval(&self, x: &AffineElement, y: &AffineElement) -> Result<Interval, AffineError> {
        let d = self.datum;
        if x.length > y.length || !d.dominance_leq(x.dominant(), y.dominant()) {
            return Ok(Interval::default());
        }
        let mut graph = Graph::default();
        graph.index(x.clone());
        let mut queue = VecDeque::from([x.clone()]);
        while let Some(z) = queue.pop_front() {
            if z.length >= y.length {
                continue;
            }
            let zi = graph.ids[&z];
            for n in self.covers(&z)? {
                if !d.dominance_leq(n.dominant(), y.dominant()) {
                    continue;
                }
                let fresh = !graph.ids.contains_key(&n);
                let ni = graph.index(n.clone());
                graph.edges.push((zi, ni));
                if fresh {
                    queue.push_back(n);
                }
            }
        }
        Ok(graph.restrict(x, y))
    }

    /// `x ≤ y` in the affine Bruhat order.
    pub fn leq(&self, x: &AffineElement, y: &AffineElement) -> Result<bool, AffineError> {
        if x == y {
            return Ok(true);
        }
        if x.length >= y.length {
            return Ok(false);
        }
        Ok(!self.interval(x, y)?.is_empty())
    }

    /// The pair of the explicit cover construction, without checking
    /// preconditions or verifying the result.
    pub fn explicit_pair(
        &self,
        beta: &RealRoot,
        lambda: &Coweight,
        v: &WeylElement,
        w: &WeylElement,
        variant: ExplicitVariant,
    ) -> Result<(AffineElement, AffineElement), AffineError> {
        let d = self.datum;
        let s_beta = roots::reflection_of(d, beta);
        let raised = lambda.add(&d.coweight_from_coroot(beta.coroot_coords()));
        let v_lambda = v.act_on_coweight(d, lambda);
        match variant {
            ExplicitVariant::One => {
                let lower = self.element(v_lambda, v.multiply(d, &s_beta).multiply(d, w))?;
                let upper = self.element(v.act_on_coweight(d, &raised), v.multiply(d, w))?;
                Ok((lower, upper))
            }
            ExplicitVariant::Two => {
                let vs = v.multiply(d, &s_beta);
                let s_vbeta = roots::reflection_of(d, &v.act_on_root(d, beta));
                let lower = self.element(v_lambda, w.clone())?;
                let upper = self.element(vs.act_on_coweight(d, &raised), s_vbeta.multiply(d, w))?;
                Ok((lower, upper))
            }
        }
    }

    /// Explicit cover `(lower, upper)` attached to a quantum root, with the
    /// preconditions checked and `upper ∈ covers(lower)` verified.
    pub fn explicit_cover_up(
        &self,
        beta: &RealRoot,
        lambda: &Coweight,
        v: &WeylElement,
        w: &WeylElement,
        variant: ExplicitVariant,
    ) -> Result<(AffineElement, AffineElement), AffineError> {
        let d = self.datum;
        if !beta.is_positive() || !quantum::is_quantum_by_length(d, beta) {
            return Err(AffineError::PreconditionFailed(format!("{beta:?} is not a quantum root")));
        }
        if !d.is_dominant_regular(lambda) {
            return Err(AffineError::PreconditionFailed(format!("{lambda:?} is not dominant regular")));
        }
        let raised = lambda.add(&d.coweight_from_coroot(beta.coroot_coords()));
        if !d.is_dominant_regular(&raised) {
            return Err(AffineError::PreconditionFailed(format!(
                "λ + β^∨ = {raised:?} is not dominant regular"
            )));
        }
        let s_beta = roots::reflection_of(d, beta);
        match variant {
            ExplicitVariant::One => {
                if s_beta.multiply(d, w).length() != s_beta.length() + w.length() {
                    return Err(AffineError::PreconditionFailed("ℓ(s_β w) ≠ ℓ(s_β) + ℓ(w)".into()));
                }
            }
            ExplicitVariant::Two => {
                if v.multiply(d, &s_beta).length() != v.length() + s_beta.length() {
                    return Err(AffineError::PreconditionFailed("ℓ(v s_β) ≠ ℓ(v) + ℓ(s_β)".into()));
                }
            }
        }
        let (lower, upper) = self.explicit_pair(beta, lambda, v, w, variant)?;
        if upper.length != lower.length + 1 {
            return Err(AffineError::VerificationFailed(format!(
                "length difference {} between {lower:?} and {upper:?}",
                upper.length - lower.length
            )));
        }
        if !self.covers(&lower)?.contains(&upper) {
            return Err(AffineError::VerificationFailed(format!("{upper:?} does not cover {lower:?}")));
        }
        Ok((lower, upper))
    }

    /// `count` distinct co-covers `x_w = ϖ^{w.λ} s_{w(α_i)}` of one element
    /// `ϖ^ν`, for `w` in an infinite proper parabolic subgroup `W_J` of
    /// minimal coset representatives modulo `W_λ`.
    ///
    /// Here `J` is a minimal subset of infinite type, `i ∉ J` is joined to
    /// `J`, `ν` pairs to 3 with the simple roots outside `J` and to 0 with
    /// those in `J`, and `λ = ν − α_i^∨`.
    pub fn cocover_witness_family(&self, count: usize) -> Result<Vec<(AffineElement, AffineElement)>, AffineError> {
        let d = self.datum;
        let n = d.rank();
        let diagram = d.diagram();
        if !diagram.is_connected() {
            return Err(AffineError::HypothesisNotMet("the Cartan matrix is decomposable".into()));
        }
        let full = d.gcm().full_mask();
        let mut subsets: Vec<u64> = (1..full).collect();
        subsets.sort_by_key(|m| (m.count_ones(), *m));
        let j_mask = subsets
            .into_iter()
            .find(|&m| !d.gcm().is_finite_type_on(m))
            .ok_or_else(|| AffineError::HypothesisNotMet("every proper parabolic subgroup is finite".into()))?;
        let (i, _) = (0..n)
            .filter(|&i| j_mask & bit(i) == 0)
            .flat_map(|i| iter_mask(j_mask).map(move |j| (i, j)))
            .find(|&(i, j)| d.gcm().entry(j, i) != 0)
            .expect("connected diagram");
        let pairings: Vec<i64> = (0..n).map(|k| if j_mask & bit(k) != 0 { 0 } else { 3 }).collect();
        let nu = d
            .coweight_from_pairings(&pairings)
            .map_err(|_| AffineError::HypothesisNotMet("the construction needs the doubled datum".into()))?;
        let mut e_i = vec![0; n];
        e_i[i] = 1;
        let lambda = nu.sub(&d.coweight_from_coroot(&e_i));
        let lambda_fix: u64 = (0..n).filter(|&k| d.simple_pairing(&lambda, k) == 0).fold(0, |m, k| m | bit(k));
        let upper = self.element(nu.clone(), WeylElement::identity(d))?;
        let alpha_i = RealRoot::simple(n, i);
        let mut out: Vec<(AffineElement, AffineElement)> = Vec::new();
        let mut max_len = count;
        loop {
            out.clear();
            for w in WeylElement::levels(d, max_len, ENUMERATION_CAP, j_mask)?.into_iter().flatten() {
                if iter_mask(lambda_fix).any(|k| w.is_right_descent(d, k)) {
                    continue;
                }
                let beta = w.act_on_root(d, &alpha_i);
                let w_lambda = w.act_on_coweight(d, &lambda);
                let lower = self.element(w_lambda.clone(), roots::reflection_of(d, &beta))?;
                let refl = AffineReflection::new(&beta, d.pair_with_root(&w_lambda, beta.root_coords()) + 1);
                if refl.apply(d, &lower.pair) != upper.pair {
                    return Err(AffineError::VerificationFailed(format!("{lower:?} is not sent to ϖ^ν")));
                }
                if self.side(&upper.pair, &refl) != Side::Lower || lower.length + 1 != upper.length {
                    return Err(AffineError::VerificationFailed(format!("{lower:?} is not covered by ϖ^ν")));
                }
                out.push((lower, upper.clone()));
                if out.len() == count {
                    return Ok(out);
                }
            }
            max_len *= 2;
        }
    }
}

#[derive(Default)]
struct Graph {
    nodes: Vec<AffineElement>,
    ids: HashMap<AffineElement, usize>,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    fn index(&mut self, e: AffineElement) -> usize {
        if let Some(&i) = self.ids.get(&e) {
            return i;
        }
        let i = self.nodes.len();
        self.ids.insert(e.clone(), i);
        self.nodes.push(e);
        i
    }

    /// Keeps the nodes above `x` and below `y`.
    fn restrict(self, x: &AffineElement, y: &AffineElement) -> Interval {
        let (Some(&xi), Some(&yi)) = (self.ids.get(x), self.ids.get(y)) else {
            return Interval::default();
        };
        let k = self.nodes.len();
        let reach = |from: usize, forward: bool| {
            let mut adj = vec![Vec::new(); k];
            for &(a, b) in &self.edges {
                if forward {
                    adj[a].push(b)
                } else {
                    adj[b].push(a)
                }
            }
            let mut seen = vec![false; k];
            seen[from] = true;
            let mut stack = vec![from];
            while let Some(u) = stack.pop() {
                for &t in &adj[u] {
                    if !seen[t] {
                        seen[t] = true;
                        stack.push(t);
                    }
                }
            }
            seen
        };
        let above = reach(xi, true);
        let below = reach(yi, false);
        let mut keep: Vec<usize> = (0..k).filter(|&t| above[t] && below[t]).collect();
        if keep.is_empty() {
            return Interval::default();
        }
        keep.sort_by(|&a, &b| self.nodes[a].cmp(&self.nodes[b]));
        let mut remap = vec![usize::MAX; k];
        for (new, &old) in keep.iter().enumerate() {
            remap[old] = new;
        }
        let mut edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter(|&&(a, b)| remap[a] != usize::MAX && remap[b] != usize::MAX)
            .map(|&(a, b)| (remap[a], remap[b]))
            .collect();
        edges.sort();
        edges.dedup();
        let nodes = keep.into_iter().map(|t| self.nodes[t].clone()).collect();
        Interval { nodes, edges }
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

    fn word(d: &RootDatum, w: &[usize]) -> WeylElement {
        WeylElement::reduce_word(d, w)
    }

    #[test]
    fn action_examples() {
        let d = a2();
        let n = 2;
        let a = AffineRoot::new(RealRoot::simple(n, 1), 0);
        let id = AffinePair::identity(&d);
        assert_eq!(id.act(&d, &a), a);
        let lambda = d.coweight_from_coroot(&[1, 0]);
        let t = AffinePair::translation(&d, lambda.clone());
        assert_eq!(t.act(&d, &a).level, d.pair_with_root(&lambda, &[0, 1]));
        let x = AffinePair::new(lambda, word(&d, &[0]));
        let img = x.act(&d, &a);
        assert_eq!(img.root.root_coords(), &[1, 1]);
        assert_eq!(img.level, 1);
    }

    #[test]
    fn reflections_are_involutions() {
        let d = a2();
        let x = AffinePair::new(d.coweight(vec![1, -2, 3, 0]).unwrap(), word(&d, &[0, 1]));
        let beta = roots::reflect(&d, 1, &RealRoot::simple(2, 0));
        for n in -3..=3 {
            let r = AffineReflection::new(&beta, n);
            assert_eq!(r.apply(&d, &r.apply(&d, &x)), x);
            assert_eq!(r.apply(&d, &x), r.to_pair(&d).multiply(&d, &x));
        }
    }

    #[test]
    fn compare_matches_inverse_action() {
        let d = a2();
        let g = AffineSemigroup::new(&d, 100).unwrap();
        let x = AffinePair::new(d.coweight_from_pairings(&[2, -1]).unwrap(), word(&d, &[1, 0]));
        let inv = x.inverse(&d);
        for beta in roots::enumerate_real_roots(&d, 4, 100).unwrap().into_iter().map(|(r, _)| r) {
            for n in -4..=4 {
                let a = AffineRoot::bracket(&beta, n);
                let lower = !inv.act(&d, &a).is_positive();
                let side = g.reflection_compare(&x, &a).unwrap().side;
                assert_eq!(side == Side::Lower, lower, "{beta:?} {n}");
            }
        }
    }

    #[test]
    fn length_examples() {
        let d = a2();
        let g = AffineSemigroup::new(&d, 100).unwrap();
        let w = word(&d, &[0, 1, 0]);
        assert_eq!(g.element(Coweight::zero(4), w).unwrap().length(), 3);
        let lambda = d.coweight_from_coroot(&[1, 1]);
        assert!(d.is_dominant_regular(&lambda));
        assert_eq!(g.element(lambda.clone(), word(&d, &[])).unwrap().length(), 4);
        assert_eq!(g.element(lambda, word(&d, &[0])).unwrap().length(), 5);
    }

    #[test]
    fn identity_covers_and_cocovers() {
        let d = a2();
        let g = AffineSemigroup::new(&d, 100).unwrap();
        let e = g.identity();
        let covers = g.covers(&e).unwrap();
        for i in 0..2 {
            assert!(covers.iter().any(|y| y.coweight() == e.coweight() && y.weyl() == &word(&d, &[i])));
        }
        assert!(covers.iter().all(|y| y.length() == 1));
        assert!(g.cocovers(&e).unwrap().is_empty());
    }

    #[test]
    fn interval_trivial_cases() {
        let d = a2();
        let g = AffineSemigroup::new(&d, 100).unwrap();
        let e = g.identity();
        let iv = g.interval(&e, &e).unwrap();
        assert_eq!(iv.nodes, vec![e.clone()]);
        assert!(iv.edges.is_empty());
        let y = g.covers(&e).unwrap().remove(0);
        let iv = g.interval(&e, &y).unwrap();
        assert_eq!(iv.nodes.len(), 2);
        assert_eq!(iv.edges, vec![(0, 1)]);
        assert!(g.leq(&e, &y).unwrap());
        assert!(!g.leq(&y, &e).unwrap());
    }

    #[test]
    fn witness_family_hypotheses() {
        let d = a2();
        let g = AffineSemigroup::new(&d, 100).unwrap();
        assert!(matches!(g.cocover_witness_family(1), Err(AffineError::HypothesisNotMet(_))));
        let d = datum(vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]]);
        let g = AffineSemigroup::new(&d, 100).unwrap();
        let fam = g.cocover_witness_family(3).unwrap();
        assert_eq!(fam.len(), 3);
        assert!(fam.iter().all(|(_, up)| up == &fam[0].1));
    }
}
