//! Decision procedure for Dynkin sequences of quantum roots.
//!
//! A sequence `(I_n)` is accepted when it is nested, `I_1` is a
//! 1-star-convex tree, every level `n >= 2` has vertices of degree at most
//! three with exactly one degree-3 vertex per component, and the component
//! of each degree-3 vertex `j ∈ I_2` matches one of the named kinds.
//! Degrees and supports are taken relative to `I_1`:
//! `deg(i) = Σ_{j ∈ I_1, j ≠ i} w(j, i)` and `supp(i) = {i} ∪ N_{I_1}(i)`.
//!
//! Every condition is a separate [`Clause`], so a rejection names the first
//! condition that failed for each candidate kind.

use std::fmt;

use crate::cartan::{bit, iter_mask, DynkinDiagram};
use crate::datum::RootDatum;

use super::DynkinSequence;

/// The kinds of component sequences around a degree-3 vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ClassKind {
    G2,
    S3,
    C3,
    F3,
    S4,
    A4,
    D4,
    EA4,
    ED1,
    ED2,
    ED3,
    SA1,
    SA2,
}

impl ClassKind {
    pub const ALL: [ClassKind; 13] = [
        ClassKind::G2,
        ClassKind::S3,
        ClassKind::C3,
        ClassKind::F3,
        ClassKind::S4,
        ClassKind::A4,
        ClassKind::D4,
        ClassKind::EA4,
        ClassKind::ED1,
        ClassKind::ED2,
        ClassKind::ED3,
        ClassKind::SA1,
        ClassKind::SA2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ClassKind::G2 => "2G",
            ClassKind::S3 => "3S",
            ClassKind::C3 => "3C",
            ClassKind::F3 => "3F",
            ClassKind::S4 => "4S",
            ClassKind::A4 => "4A",
            ClassKind::D4 => "4D",
            ClassKind::EA4 => "4EA",
            ClassKind::ED1 => "4ED1",
            ClassKind::ED2 => "4ED2",
            ClassKind::ED3 => "4ED3",
            ClassKind::SA1 => "4SA1",
            ClassKind::SA2 => "4SA2",
        }
    }

    /// Size of `supp(j1)` for this kind.
    pub fn support_size(self) -> usize {
        match self {
            ClassKind::G2 => 2,
            ClassKind::S3 | ClassKind::C3 | ClassKind::F3 => 3,
            _ => 4,
        }
    }
}

impl fmt::Display for ClassKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The classification of one component sequence `(I_n(j1))_{n >= 2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentClass {
    pub kind: ClassKind,
    /// The degree-3 vertex `j1`.
    pub base: usize,
    /// `K = N_{j1}(β)`, the last level containing `j1`.
    pub depth: usize,
    pub j2p: Option<usize>,
    pub j2pp: Option<usize>,
    pub j3p: Option<usize>,
    /// Parity offset of kind `4D` when `K` is odd.
    pub eta: Option<u8>,
    /// Ladder start of kind `4ED2`.
    pub n0: Option<usize>,
}

/// A named condition of the decision procedure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Clause {
    /// Vertices lie inside the diagram and `I_1` is nonempty.
    Range,
    /// `I_{n+1} ⊆ I_n`.
    Nesting,
    /// `I_1` is a tree.
    TreeI1,
    /// `I_1` is 1-star-convex.
    StarConvexI1,
    /// `deg(j) <= 3` on `I_n`, `n >= 2`.
    DegreeBound,
    /// Each component of `I_n`, `n >= 2`, has exactly one degree-3 vertex.
    UniqueBranch,
    /// Vertices of `I_2(j1) ∖ {j1}` have at most two neighbours in `I_1`,
    /// all with weight 1 towards them.
    ArmSupport,
    /// No kind is available for `|supp(j1)|`.
    SupportSize,

    G2Shape,
    G2Leaves,
    G2Depth,

    S3Arms,
    S3Leaves,
    S3Depth,

    C3Shape,
    C3Leaves,
    C3Decreasing,

    F3Leaf,
    F3Shape,
    F3Depth,
    F3Leaves,

    S4Arms,
    S4Leaves,
    S4Depth,

    A4Shape,
    A4Leaves,

    D4Depth,
    D4Pair,
    D4Types,
    D4PairLeaves,
    D4PairDepths,
    D4Leaves,
    D4Tail,

    EShape,
    EClosed,
    EChain,
    EAPair,
    EATail,
    EAMiddle,
    EADepth,
    EALeaves,

    EDTail,
    EDThird,
    EDMiddle,
    EDDepth,
    EDLeaves,
    ED1,
    ED2,
    ED3,

    SALeaf,
    SAThird,
    SAChain,
    SA1,
    SA2,
}

impl Clause {
    pub fn name(self) -> &'static str {
        use Clause::*;
        match self {
            Range => "range",
            Nesting => "nesting",
            TreeI1 => "I_1 tree",
            StarConvexI1 => "I_1 1-star-convex",
            DegreeBound => "degree bound",
            UniqueBranch => "unique degree-3 vertex",
            ArmSupport => "arm support",
            SupportSize => "support size",
            G2Shape => "2G shape",
            G2Leaves => "2G leaves",
            G2Depth => "2G depth",
            S3Arms => "3S arms",
            S3Leaves => "3S leaves",
            S3Depth => "3S depth",
            C3Shape => "3C shape",
            C3Leaves => "3C leaves",
            C3Decreasing => "3C decreasing",
            F3Leaf => "3F leaf",
            F3Shape => "3F shape",
            F3Depth => "3F depth",
            F3Leaves => "3F leaves",
            S4Arms => "4S arms",
            S4Leaves => "4S leaves",
            S4Depth => "4S depth",
            A4Shape => "4A shape",
            A4Leaves => "4A leaves",
            D4Depth => "4D depth",
            D4Pair => "4D pair",
            D4Types => "4D types",
            D4PairLeaves => "4D pair leaves",
            D4PairDepths => "4D pair depths",
            D4Leaves => "4D leaves",
            D4Tail => "4D tail",
            EShape => "4E shape",
            EClosed => "closed neighbourhood",
            EChain => "4E chain",
            EAPair => "4EA pair",
            EATail => "4EA tail",
            EAMiddle => "4EA middle",
            EADepth => "4EA depth",
            EALeaves => "4EA leaves",
            EDTail => "4ED tail",
            EDThird => "4ED third level",
            EDMiddle => "4ED middle",
            EDDepth => "4ED depth",
            EDLeaves => "4ED leaves",
            ED1 => "4ED1",
            ED2 => "4ED2",
            ED3 => "4ED3",
            SALeaf => "4SA leaf",
            SAThird => "4SA third level",
            SAChain => "4SA chain",
            SA1 => "4SA1",
            SA2 => "4SA2",
        }
    }

    pub fn description(self) -> &'static str {
        use Clause::*;
        match self {
            Range => "levels are nonempty subsets of the vertex set",
            Nesting => "I_{n+1} is contained in I_n",
            TreeI1 => "I_1 is a tree",
            StarConvexI1 => "I_1 is 1-star-convex",
            DegreeBound => "every vertex of I_n (n >= 2) has degree at most 3",
            UniqueBranch => "every component of I_n (n >= 2) has exactly one vertex of degree 3",
            ArmSupport => "vertices of I_2(j1) other than j1 have support of size <= 3 and unit incoming weights",
            SupportSize => "|supp(j1)| is 2, 3 or 4",
            G2Shape => "I_2(j1) is of type G with special vertex j1",
            G2Leaves => "j1 is the only leaf of I_2(j1) that is a leaf of I_1",
            G2Depth => "I_3(j1) is empty",
            S3Arms => "I_2(j1) minus j1 has two nonempty parts",
            S3Leaves => "leaves of I_2(j1) are not leaves of I_1",
            S3Depth => "I_3(j1) is empty",
            C3Shape => "each I_n(j1) is of type C with special vertex j1",
            C3Leaves => "leaves of I_2(j1) are not leaves of I_1",
            C3Decreasing => "the sizes of I_n(j1) strictly decrease",
            F3Leaf => "j2' is a leaf of I_1 lying in I_2(j1)",
            F3Shape => "I_2(j1) minus j2' and I_3(j1) are of type C with special vertex j1",
            F3Depth => "I_4(j1) is empty",
            F3Leaves => "leaves of I_3(j1) (of I_2(j1) minus j2') are not leaves of I_2(j1) (of I_1)",
            S4Arms => "I_2(j1) minus j1 has three nonempty parts",
            S4Leaves => "leaves of I_2(j1) are not leaves of I_1",
            S4Depth => "I_3(j1) is empty",
            A4Shape => "each I_n(j1) is of type A",
            A4Leaves => "leaves of I_n(j1) are not leaves of I_{n-1}(j1)",
            D4Depth => "K >= 5",
            D4Pair => "j2'' is a leaf of I_1 and j2' a leaf of I_2(j1) but not of I_1",
            D4Types => "I_n(j1) is of type D up to the parity threshold and of type A afterwards",
            D4PairLeaves => "j2' and j2'' are leaves of the levels containing them",
            D4Leaves => "other leaves of I_n(j1) leave at level n+1",
            D4PairDepths => "N(j2') and N(j2'') interleave with N(j1) = K",
            D4Tail => "the third neighbour j2 lies in I_{K-1}(j1)",
            EShape => "I_2(j1) is of type E with branch vertex j1",
            EClosed => "every neighbour of j1 has all of its neighbours in I_2(j1)",
            EChain => "the third neighbour j2 lies in I_{n-1}(j1) whenever j1 lies in I_n(j1), n <= 6 (n <= 5 for 4ED2)",
            EAPair => "j2'' is a leaf of I_1 outside I_3(j1)",
            EATail => "supp(j2') = {j1, j2', j3'} with j3' a leaf of I_1 in I_2 and outside I_3",
            EAMiddle => "I_3, I_4, I_5 are of type A, j2' is a leaf of I_3 and absent from I_5",
            EADepth => "j1 lies in I_4, I_7(j1) is empty, and j2' is absent from I_4 when I_5 is empty",
            EALeaves => "other leaves of I_n(j1) leave at level n+1",
            EDTail => "supp(j2') = {j1, j2', j3'} with j3' a leaf of I_1 outside I_3",
            EDThird => "j2'' is a leaf of I_1, I_3(j1) is of type D with leaves j2', j2'' and j2'' is absent from I_4",
            EDMiddle => "I_4, I_5 are nonempty of type A, j1 is a leaf of I_5 and j2' is absent from I_5",
            EDDepth => "I_7(j1) is empty",
            EDLeaves => "other leaves of I_n(j1) leave at level n+1",
            ED1 => "j2' in I_4 and I_6 empty",
            ED2 => "j2' in I_4, I_6 = {j1} and I_n minus {j2', j2'', j3'} shrinks by one vertex for n in [n0+1, 6] after a flat step at n0",
            ED3 => "j2' not in I_4 and I_5 differs from I_6",
            SALeaf => "j2'' is the unique neighbour of j1 that is a leaf of I_2, and the unique leaf of I_2 that is a leaf of I_1",
            SAThird => "I_3(j1) is nonempty of type A",
            SAChain => "if j1 lies in I_4 then a neighbour of j1 other than j2'' lies in I_3",
            SA1 => "j1 not a leaf of I_3, I_4 empty, leaves of I_3 are not leaves of I_2",
            SA2 => "j1 a leaf of I_3, I_4 of type A with j1 as its only leaf shared with I_3, I_5 empty",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.name(), self.description())
    }
}

/// Why a sequence was rejected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassifyFailure {
    /// The first violated clause (for a component, the first clause of the
    /// first candidate kind).
    pub clause: Clause,
    /// The level at which a global clause failed.
    pub level: Option<usize>,
    /// The vertex at which the failure was detected.
    pub vertex: Option<usize>,
    /// For components: the first failing clause of each candidate kind.
    pub attempts: Vec<(ClassKind, Clause)>,
}

impl ClassifyFailure {
    fn global(clause: Clause, level: Option<usize>, vertex: Option<usize>) -> Self {
        ClassifyFailure { clause, level, vertex, attempts: Vec::new() }
    }
}

impl fmt::Display for ClassifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.clause)?;
        if let Some(n) = self.level {
            write!(f, " (level {n})")?;
        }
        if let Some(v) = self.vertex {
            write!(f, " (vertex {})", v + 1)?;
        }
        for (k, c) in &self.attempts {
            write!(f, "; {k}: {}", c.name())?;
        }
        Ok(())
    }
}

impl std::error::Error for ClassifyFailure {}

/// `deg(v) = Σ_{u ∈ I_1 ∖ {v}} w(u, v)`.
fn degree(t: &DynkinDiagram, v: usize) -> u32 {
    t.vertices().filter(|&u| u != v).map(|u| t.weight(u, v)).sum()
}

/// Decides whether `seq` is the Dynkin sequence of a quantum root.  On
/// success returns the classification of each degree-3 component, ordered
/// by base vertex.
pub fn classify_sequence(datum: &RootDatum, seq: &DynkinSequence) -> Result<Vec<ComponentClass>, ClassifyFailure> {
    let full = datum.diagram();
    let n = datum.rank();
    let levels = seq.levels();
    if levels.is_empty() || levels.iter().any(|&m| m >> n != 0) {
        return Err(ClassifyFailure::global(Clause::Range, None, None));
    }
    check_global(&full, seq)?;
    let t = full.sub(seq.level(1));
    let bases: Vec<usize> = iter_mask(seq.level(2)).filter(|&v| degree(&t, v) == 3).collect();
    let mut out = Vec::with_capacity(bases.len());
    for b in bases {
        out.push(classify_component(&t, seq, b)?);
    }
    Ok(out)
}

/// Conditions (1)-(3): nesting, the shape of `I_1`, degrees on `I_n`.
pub(crate) fn check_global(full: &DynkinDiagram, seq: &DynkinSequence) -> Result<(), ClassifyFailure> {
    let levels = seq.levels();
    for (n, w) in levels.windows(2).enumerate() {
        if w[1] & !w[0] != 0 {
            return Err(ClassifyFailure::global(Clause::Nesting, Some(n + 2), Some((w[1] & !w[0]).trailing_zeros() as usize)));
        }
    }
    let t = full.sub(seq.level(1));
    if t.is_tree() != Ok(true) {
        return Err(ClassifyFailure::global(Clause::TreeI1, Some(1), None));
    }
    if t.one_star_convex_basepoints() == 0 {
        return Err(ClassifyFailure::global(Clause::StarConvexI1, Some(1), None));
    }
    for n in 2..=seq.depth() {
        let lvl = t.sub(seq.level(n));
        if let Some(v) = lvl.vertices().find(|&v| degree(&t, v) > 3) {
            return Err(ClassifyFailure::global(Clause::DegreeBound, Some(n), Some(v)));
        }
        for c in lvl.connected_components() {
            if iter_mask(c).filter(|&v| degree(&t, v) == 3).count() != 1 {
                return Err(ClassifyFailure::global(Clause::UniqueBranch, Some(n), Some(c.trailing_zeros() as usize)));
            }
        }
    }
    Ok(())
}

/// Level data around one degree-3 vertex.
pub(crate) struct Component<'a> {
    t: &'a DynkinDiagram,
    b: usize,
    /// `c[n]` is the component of `b` in `I_n` for `n >= 2`, `c[1] = I_1`.
    c: Vec<u64>,
    /// `K`, the last level containing `b`.
    k: usize,
}

impl<'a> Component<'a> {
    fn new(t: &'a DynkinDiagram, seq: &DynkinSequence, b: usize) -> Self {
        let mut c = vec![0, t.mask()];
        let mut k = 1;
        for n in 2..=seq.depth() {
            let m = t.sub(seq.level(n)).component_of(b);
            if m != 0 {
                k = n;
            }
            c.push(m);
        }
        Component { t, b, c, k }
    }

    /// The number of levels of the component containing `v`.
    fn count(&self, v: usize) -> usize {
        (1..self.c.len()).filter(|&n| self.has(n, v)).count()
    }

    fn at(&self, n: usize) -> u64 {
        self.c.get(n).copied().unwrap_or(0)
    }

    fn diag(&self, n: usize) -> DynkinDiagram {
        self.t.sub(self.at(n))
    }

    fn has(&self, n: usize, v: usize) -> bool {
        self.at(n) & bit(v) != 0
    }

    fn leaves(&self, n: usize) -> u64 {
        self.diag(n).leaves()
    }

    fn is_leaf(&self, n: usize, v: usize) -> bool {
        self.leaves(n) & bit(v) != 0
    }

    fn tleaf(&self, v: usize) -> bool {
        self.t.is_leaf(v)
    }

    fn neighbors(&self) -> Vec<usize> {
        self.t.neighbors(self.b)
    }

    /// Type `A` (nonempty).
    fn is_a(&self, n: usize) -> bool {
        self.diag(n).is_type_a()
    }

    fn is_a_or_empty(&self, n: usize) -> bool {
        self.at(n) == 0 || self.is_a(n)
    }

    /// Type `C` (or `G` for `heavy = 3`) with special vertex `b`, allowing
    /// the one-vertex diagram `{b}`.
    fn is_special(&self, mask: u64, heavy: u32) -> bool {
        mask == bit(self.b) || self.t.sub(mask).is_special_vertex(self.b, heavy)
    }

    fn is_d(&self, n: usize) -> bool {
        matches!(self.diag(n).type_d_vertices(), Some((j1, _)) if j1 == self.b)
    }

    fn is_e(&self, n: usize) -> bool {
        matches!(self.diag(n).type_e_vertices(), Some((j1, _)) if j1 == self.b)
    }

    /// Leaves of `I_n(j1)` outside `keep` are absent from `I_{n+1}(j1)`,
    /// for `n` in `1..=upto`.
    fn leaves_leave(&self, keep: u64, upto: usize) -> bool {
        (1..=upto).all(|n| self.leaves(n) & !keep & self.at(n + 1) == 0)
    }

}

fn ensure(ok: bool, clause: Clause) -> Result<(), Clause> {
    if ok {
        Ok(())
    } else {
        Err(clause)
    }
}

fn classify_component(t: &DynkinDiagram, seq: &DynkinSequence, b: usize) -> Result<ComponentClass, ClassifyFailure> {
    let cp = Component::new(t, seq, b);
    let fail = |clause| ClassifyFailure { clause, level: None, vertex: Some(b), attempts: Vec::new() };
    arm_support(&cp).map_err(fail)?;
    let supp = cp.neighbors().len() + 1;
    let kinds: Vec<ClassKind> = ClassKind::ALL.iter().copied().filter(|k| k.support_size() == supp).collect();
    if kinds.is_empty() {
        return Err(fail(Clause::SupportSize));
    }
    let mut attempts = Vec::new();
    for kind in kinds {
        match match_kind(&cp, kind) {
            Ok(class) => return Ok(class),
            Err(c) => attempts.push((kind, c)),
        }
    }
    Err(ClassifyFailure { clause: attempts[0].1, level: None, vertex: Some(b), attempts })
}

/// All kinds matched by the component of `b` (for diagnostics and tests).
pub fn matching_kinds(datum: &RootDatum, seq: &DynkinSequence, b: usize) -> Vec<ClassKind> {
    let full = datum.diagram();
    let t = full.sub(seq.level(1));
    let cp = Component::new(&t, seq, b);
    if degree(&t, b) != 3 || !cp.has(2, b) || arm_support(&cp).is_err() {
        return Vec::new();
    }
    let supp = cp.neighbors().len() + 1;
    ClassKind::ALL
        .iter()
        .copied()
        .filter(|&k| k.support_size() == supp && match_kind(&cp, k).is_ok())
        .collect()
}

fn arm_support(cp: &Component) -> Result<(), Clause> {
    let t = cp.t;
    let ok = iter_mask(cp.at(2) & !bit(cp.b)).all(|v| {
        let nb = t.neighbor_mask(v);
        nb.count_ones() <= 2 && iter_mask(nb).all(|u| t.weight(u, v) == 1)
    });
    ensure(ok, Clause::ArmSupport)
}

fn base_class(cp: &Component, kind: ClassKind) -> ComponentClass {
    ComponentClass { kind, base: cp.b, depth: cp.k, j2p: None, j2pp: None, j3p: None, eta: None, n0: None }
}

fn match_kind(cp: &Component, kind: ClassKind) -> Result<ComponentClass, Clause> {
    match kind {
        ClassKind::G2 => kind_2g(cp),
        ClassKind::S3 => kind_3s(cp),
        ClassKind::C3 => kind_3c(cp),
        ClassKind::F3 => kind_3f(cp),
        ClassKind::S4 => kind_4s(cp),
        ClassKind::A4 => kind_4a(cp),
        ClassKind::D4 => kind_4d(cp),
        ClassKind::EA4 => kind_4ea(cp),
        ClassKind::ED1 | ClassKind::ED2 | ClassKind::ED3 => kind_4ed(cp, kind),
        ClassKind::SA1 | ClassKind::SA2 => kind_4sa(cp, kind),
    }
}

/// Tries every assignment of the neighbours of `b` to the roles
/// `(j2', j2'', j2)`; returns the first success or the first failure.
fn over_roles(
    cp: &Component,
    f: impl Fn(usize, usize, usize) -> Result<ComponentClass, Clause>,
) -> Result<ComponentClass, Clause> {
    let nb = cp.neighbors();
    let mut first = None;
    for &p in &nb {
        for &pp in &nb {
            if p == pp {
                continue;
            }
            let q = nb.iter().copied().find(|&x| x != p && x != pp).unwrap_or(p);
            match f(p, pp, q) {
                Ok(c) => return Ok(c),
                Err(c) => {
                    first.get_or_insert(c);
                }
            }
        }
    }
    Err(first.unwrap_or(Clause::SupportSize))
}

/// Neighbours of `b` ordered by incoming weight `w(u, b)`, heaviest first.
fn by_weight(cp: &Component) -> Vec<usize> {
    let mut nb = cp.neighbors();
    nb.sort_by_key(|&u| std::cmp::Reverse(cp.t.weight(u, cp.b)));
    nb
}

mod clauses {
    //! The individual conditions, one function per [`Clause`](super::Clause).

    use super::*;

    pub fn g2_shape(cp: &Component) -> bool {
        cp.is_special(cp.at(2), 3)
    }

    pub fn g2_leaves(cp: &Component) -> bool {
        cp.leaves(2) & cp.t.leaves() & !bit(cp.b) == 0
    }

    pub fn depth_at_most(cp: &Component, k: usize) -> bool {
        cp.at(k + 1) == 0
    }

    pub fn leaves_of_2_not_leaves_of_1(cp: &Component) -> bool {
        cp.leaves(2) & cp.t.leaves() == 0
    }

    pub fn all_neighbours_in_2(cp: &Component) -> bool {
        cp.neighbors().iter().all(|&u| cp.has(2, u))
    }

    pub fn c3_shape(cp: &Component) -> bool {
        (2..=cp.k).all(|n| cp.is_special(cp.at(n), 2))
    }

    pub fn strictly_decreasing(cp: &Component) -> bool {
        (3..=cp.k).all(|n| cp.at(n).count_ones() < cp.at(n - 1).count_ones())
    }

    pub fn f3_leaf(cp: &Component, j2p: usize) -> bool {
        cp.tleaf(j2p) && cp.has(2, j2p)
    }

    pub fn f3_shape(cp: &Component, j2p: usize) -> bool {
        cp.has(3, cp.b) && cp.is_special(cp.at(2) & !bit(j2p), 2) && cp.is_special(cp.at(3), 2)
    }

    pub fn f3_leaves(cp: &Component, j2p: usize) -> bool {
        let c2 = cp.at(2) & !bit(j2p);
        cp.leaves(3) & cp.leaves(2) == 0 && cp.t.sub(c2).leaves() & cp.t.leaves() == 0
    }

    pub fn a4_shape(cp: &Component) -> bool {
        (2..=cp.k).all(|n| cp.is_a(n))
    }

    pub fn a4_leaves(cp: &Component) -> bool {
        (2..=cp.k).all(|n| cp.leaves(n) & cp.leaves(n - 1) == 0)
    }

    pub fn d4_pair(cp: &Component, j2p: usize, j2pp: usize) -> bool {
        cp.tleaf(j2pp) && cp.is_leaf(2, j2p) && !cp.tleaf(j2p)
    }

    /// The number of leading levels (from 2) of type D, if the remaining
    /// levels up to `K` are of type A.
    pub fn d_prefix(cp: &Component) -> Option<usize> {
        let mut n = 2;
        while n <= cp.k && cp.is_d(n) {
            n += 1;
        }
        let last_d = n - 1;
        (n..=cp.k).all(|m| cp.is_a(m)).then_some(last_d)
    }

    pub fn d4_types(cp: &Component) -> Option<Option<u8>> {
        let last_d = d_prefix(cp)?;
        let k = cp.k;
        if k.is_multiple_of(2) {
            (last_d == k / 2).then_some(None)
        } else {
            let h = (k - 1) / 2;
            if last_d == h {
                Some(Some(0))
            } else if last_d == h + 1 {
                Some(Some(1))
            } else {
                None
            }
        }
    }

    pub fn pair_leaves(cp: &Component, j2p: usize, j2pp: usize) -> bool {
        (2..=cp.k).all(|n| {
            [j2p, j2pp].iter().all(|&v| !cp.has(n, v) || cp.is_leaf(n, v))
        })
    }

    /// With `m = ⌊K/2⌋`: for even `K`, `N(j2') ∈ {m, m+1}` and
    /// `N(j2'') = m`; for odd `K`, `N(j2') = m+1` and `N(j2'') ∈ {m, m+1}`.
    pub fn d4_pair_depths(cp: &Component, j2p: usize, j2pp: usize) -> bool {
        let (a, c, m) = (cp.count(j2p), cp.count(j2pp), cp.k / 2);
        if cp.k.is_multiple_of(2) {
            (a == m || a == m + 1) && c == m
        } else {
            a == m + 1 && (c == m || c == m + 1)
        }
    }

    /// `supp(j2') = {j1, j2', j3'}`; returns `j3'`.
    pub fn tail_vertex(cp: &Component, j2p: usize) -> Option<usize> {
        let nb = cp.t.neighbor_mask(j2p) & !bit(cp.b);
        (cp.t.neighbor_mask(j2p) & bit(cp.b) != 0 && nb.count_ones() == 1).then(|| nb.trailing_zeros() as usize)
    }

    /// `j1 ∈ I_n` implies `j2 ∈ I_{n-1}` for `n <= upto`.
    pub fn e_chain(cp: &Component, j2: usize, upto: usize) -> bool {
        cp.has(cp.k.clamp(2, upto) - 1, j2)
    }

    /// Every neighbour of `j1` has all its neighbours in `I_2(j1)`.
    pub fn closed_neighbourhood(cp: &Component) -> bool {
        cp.neighbors().iter().all(|&u| (cp.t.neighbor_mask(u) | bit(u)) & !cp.at(2) == 0)
    }

    pub fn ea_middle(cp: &Component, j2p: usize) -> bool {
        cp.is_a(3) && cp.is_a_or_empty(4) && cp.is_a_or_empty(5) && cp.is_leaf(3, j2p) && !cp.has(5, j2p)
    }

    pub fn ed_third(cp: &Component, j2p: usize, j2pp: usize) -> bool {
        cp.tleaf(j2pp)
            && cp.is_d(3) && cp.is_leaf(3, j2p) && cp.is_leaf(3, j2pp) && !cp.has(4, j2pp)
    }

    pub fn ed_middle(cp: &Component, j2p: usize) -> bool {
        cp.is_a(4) && cp.is_a(5) && cp.is_leaf(5, cp.b) && !cp.has(5, j2p)
    }

    /// The `4ED2` ladder: `I_n ∖ X` loses exactly one vertex at each step
    /// `n ∈ [n0 + 1, 6]` and is unchanged from `n0 - 1` to `n0`, where
    /// `X = {j2', j2'', j3'}`.  Returns `n0`.
    pub fn ed2_ladder(cp: &Component, x: u64) -> Option<usize> {
        let a = |n: usize| cp.at(n) & !x;
        let keep = x | bit(cp.b);
        (2..=6).find(|&n0| {
            let drops = (n0 + 1..=6).all(|n| (a(n - 1) & !a(n)).count_ones() == 1);
            let flat = a(n0 - 1) == a(n0);
            let leaves = (2..n0).all(|n| cp.leaves(n) & !keep & cp.leaves(n - 1) == 0);
            drops && flat && leaves
        })
    }

    pub fn sa_leaf(cp: &Component, j2pp: usize) -> bool {
        let nb = cp.neighbors();
        cp.is_leaf(2, j2pp)
            && nb.iter().all(|&u| u == j2pp || !cp.is_leaf(2, u))
            && cp.leaves(2) & cp.t.leaves() == bit(j2pp)
    }

    pub fn sa1(cp: &Component) -> bool {
        !cp.is_leaf(3, cp.b) && cp.at(4) == 0 && cp.leaves(3) & cp.leaves(2) == 0
    }

    pub fn sa2(cp: &Component) -> bool {
        let b = bit(cp.b);
        cp.is_leaf(3, cp.b)
            && (cp.at(4) == 0 || (cp.is_a(4) && cp.leaves(4) & cp.leaves(3) == b))
            && cp.at(5) == 0
            && cp.leaves(3) & cp.leaves(2) == 0
    }
}

use clauses as cl;

fn kind_2g(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cl::g2_shape(cp), Clause::G2Shape)?;
    ensure(cl::g2_leaves(cp), Clause::G2Leaves)?;
    ensure(cl::depth_at_most(cp, 2), Clause::G2Depth)?;
    Ok(base_class(cp, ClassKind::G2))
}

fn kind_3s(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cp.has(2, by_weight(cp)[1]), Clause::S3Arms)?;
    ensure(cl::leaves_of_2_not_leaves_of_1(cp), Clause::S3Leaves)?;
    ensure(cl::depth_at_most(cp, 2), Clause::S3Depth)?;
    Ok(base_class(cp, ClassKind::S3))
}

fn kind_3c(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cl::c3_shape(cp), Clause::C3Shape)?;
    ensure(cl::leaves_of_2_not_leaves_of_1(cp), Clause::C3Leaves)?;
    ensure(cl::strictly_decreasing(cp), Clause::C3Decreasing)?;
    Ok(base_class(cp, ClassKind::C3))
}

fn kind_3f(cp: &Component) -> Result<ComponentClass, Clause> {
    let nb = by_weight(cp);
    let j2p = nb[1];
    ensure(cl::f3_leaf(cp, j2p), Clause::F3Leaf)?;
    ensure(cl::f3_shape(cp, j2p), Clause::F3Shape)?;
    ensure(cl::depth_at_most(cp, 3), Clause::F3Depth)?;
    ensure(cl::f3_leaves(cp, j2p), Clause::F3Leaves)?;
    Ok(ComponentClass { j2p: Some(j2p), ..base_class(cp, ClassKind::F3) })
}

fn kind_4s(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cl::all_neighbours_in_2(cp), Clause::S4Arms)?;
    ensure(cl::leaves_of_2_not_leaves_of_1(cp), Clause::S4Leaves)?;
    ensure(cl::depth_at_most(cp, 2), Clause::S4Depth)?;
    Ok(base_class(cp, ClassKind::S4))
}

fn kind_4a(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cl::a4_shape(cp), Clause::A4Shape)?;
    ensure(cl::a4_leaves(cp), Clause::A4Leaves)?;
    Ok(base_class(cp, ClassKind::A4))
}

fn kind_4d(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cp.k >= 3, Clause::D4Depth)?;
    ensure(cl::all_neighbours_in_2(cp), Clause::D4Pair)?;
    ensure((2..=cp.k).all(|n| cp.at(n) != cp.at(n - 1)), Clause::D4Types)?;
    over_roles(cp, |j2p, j2pp, j2| {
        ensure(cl::d4_pair(cp, j2p, j2pp), Clause::D4Pair)?;
        let eta = cl::d4_types(cp).ok_or(Clause::D4Types)?;
        ensure(cl::pair_leaves(cp, j2p, j2pp), Clause::D4PairLeaves)?;
        ensure(cl::d4_pair_depths(cp, j2p, j2pp), Clause::D4PairDepths)?;
        let keep = bit(cp.b) | bit(j2p) | bit(j2pp);
        ensure(cp.leaves_leave(keep, cp.k - 1), Clause::D4Leaves)?;
        ensure(cp.has(cp.k - 1, j2), Clause::D4Tail)?;
        Ok(ComponentClass { j2p: Some(j2p), j2pp: Some(j2pp), eta, ..base_class(cp, ClassKind::D4) })
    })
}

fn kind_4ea(cp: &Component) -> Result<ComponentClass, Clause> {
    ensure(cp.is_e(2), Clause::EShape)?;
    ensure(cl::closed_neighbourhood(cp), Clause::EClosed)?;
    over_roles(cp, |j2p, j2pp, j2| {
        ensure(cp.tleaf(j2pp) && !cp.has(3, j2pp), Clause::EAPair)?;
        ensure(cl::e_chain(cp, j2, 6), Clause::EChain)?;
        let j3p = cl::tail_vertex(cp, j2p).ok_or(Clause::EATail)?;
        ensure(cp.tleaf(j3p) && cp.is_leaf(2, j3p) && !cp.has(3, j3p), Clause::EATail)?;
        ensure(cl::ea_middle(cp, j2p), Clause::EAMiddle)?;
        ensure(cp.k >= 4 && cl::depth_at_most(cp, 6) && (cp.at(5) != 0 || !cp.has(4, j2p)), Clause::EADepth)?;
        let keep = bit(cp.b) | bit(j2p) | bit(j3p) | bit(j2pp);
        ensure(cp.leaves_leave(keep, cp.k), Clause::EALeaves)?;
        Ok(ComponentClass { j2p: Some(j2p), j2pp: Some(j2pp), j3p: Some(j3p), ..base_class(cp, ClassKind::EA4) })
    })
}

fn kind_4ed(cp: &Component, kind: ClassKind) -> Result<ComponentClass, Clause> {
    ensure(cp.is_e(2), Clause::EShape)?;
    ensure(cl::closed_neighbourhood(cp), Clause::EClosed)?;
    over_roles(cp, |j2p, j2pp, j2| {
        let upto = if kind == ClassKind::ED2 { 5 } else { 6 };
        ensure(cl::e_chain(cp, j2, upto), Clause::EChain)?;
        let j3p = cl::tail_vertex(cp, j2p).ok_or(Clause::EDTail)?;
        ensure(cp.tleaf(j3p) && !cp.has(3, j3p), Clause::EDTail)?;
        ensure(cl::ed_third(cp, j2p, j2pp), Clause::EDThird)?;
        ensure(cl::ed_middle(cp, j2p), Clause::EDMiddle)?;
        ensure(cl::depth_at_most(cp, 6), Clause::EDDepth)?;
        let x = bit(j2p) | bit(j2pp) | bit(j3p);
        let keep = bit(cp.b) | x;
        let mut class = ComponentClass { j2p: Some(j2p), j2pp: Some(j2pp), j3p: Some(j3p), ..base_class(cp, kind) };
        match kind {
            ClassKind::ED1 => {
                ensure(cp.has(4, j2p) && cp.at(6) == 0, Clause::ED1)?;
                ensure(cp.leaves_leave(keep, cp.k), Clause::EDLeaves)?;
            }
            ClassKind::ED2 => {
                ensure(cp.has(4, j2p) && cp.at(6) == bit(cp.b), Clause::ED2)?;
                class.n0 = Some(cl::ed2_ladder(cp, x).ok_or(Clause::ED2)?);
            }
            _ => {
                ensure(!cp.has(4, j2p) && cp.at(5) != cp.at(6), Clause::ED3)?;
                ensure(cp.leaves_leave(keep, cp.k), Clause::EDLeaves)?;
            }
        }
        Ok(class)
    })
}

fn kind_4sa(cp: &Component, kind: ClassKind) -> Result<ComponentClass, Clause> {
    ensure(cl::closed_neighbourhood(cp), Clause::EClosed)?;
    let nb = cp.neighbors();
    let mut first = None;
    for &j2pp in &nb {
        let r = (|| {
            ensure(cl::sa_leaf(cp, j2pp), Clause::SALeaf)?;
            ensure(cp.is_a(3), Clause::SAThird)?;
            let others = cp.t.neighbor_mask(cp.b) & !bit(j2pp);
            ensure(!cp.has(4, cp.b) || cp.at(3) & others != 0, Clause::SAChain)?;
            if kind == ClassKind::SA1 {
                ensure(cl::sa1(cp), Clause::SA1)?;
            } else {
                ensure(cl::sa2(cp), Clause::SA2)?;
            }
            Ok(ComponentClass { j2pp: Some(j2pp), ..base_class(cp, kind) })
        })();
        match r {
            Ok(c) => return Ok(c),
            Err(c) => {
                first.get_or_insert(c);
            }
        }
    }
    Err(first.unwrap_or(Clause::SALeaf))
}
