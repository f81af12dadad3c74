//! Generalized Cartan matrices, Dynkin diagrams and the graph predicates
//! used by the quantum-root classification.
//!
//! Vertices are the positions `0..n` of the matrix labels.  Vertex sets are
//! stored as `u64` bit masks, so the rank of a matrix is limited to 64.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest supported rank (vertex sets are `u64` masks).
pub const MAX_RANK: usize = 64;

/// Errors raised while building or querying matrices and diagrams.
///
/// Row and column numbers in messages are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CartanError {
    #[error("matrix is empty")]
    Empty,
    #[error("rank {0} exceeds the supported maximum of 64")]
    TooLarge(usize),
    #[error("matrix has {rows} rows but {labels} labels were given")]
    LabelCount { rows: usize, labels: usize },
    #[error("row {} has {len} entries, expected {expected}", .row + 1)]
    RowLength { row: usize, len: usize, expected: usize },
    #[error("row {}, column {}: diagonal entry is {value}, expected 2", .row + 1, .row + 1)]
    Diagonal { row: usize, value: i64 },
    #[error("row {}, column {}: off-diagonal entry is {value}, expected a value <= 0", .row + 1, .col + 1)]
    Positive { row: usize, col: usize, value: i64 },
    #[error(
        "row {}, column {}: entry is zero but the transposed entry is {other}",
        .row + 1, .col + 1
    )]
    ZeroPattern { row: usize, col: usize, other: i64 },
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("edge ({}, {}) has no reverse edge", .0 + 1, .1 + 1)]
    AsymmetricEdge(usize, usize),
    #[error("self-loop at vertex {}", .0 + 1)]
    SelfLoop(usize),
    #[error("diagram is not connected")]
    Disconnected,
}

/// A generalized Cartan matrix `a[i][j]` over a labelled index set.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gcm {
    labels: Vec<String>,
    matrix: Vec<Vec<i64>>,
}

impl fmt::Debug for Gcm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gcm{:?}", self.matrix)
    }
}

impl Gcm {
    /// Validates and builds a matrix with the given vertex labels.
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let n = matrix.len();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        if n > MAX_RANK {
            return Err(CartanError::TooLarge(n));
        }
        if labels.len() != n {
            return Err(CartanError::LabelCount { rows: n, labels: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(CartanError::DuplicateLabel(l.clone()));
            }
        }
        for (row, r) in matrix.iter().enumerate() {
            if r.len() != n {
                return Err(CartanError::RowLength { row, len: r.len(), expected: n });
            }
        }
        for row in 0..n {
            if matrix[row][row] != 2 {
                return Err(CartanError::Diagonal { row, value: matrix[row][row] });
            }
            for col in 0..n {
                if row == col {
                    continue;
                }
                let value = matrix[row][col];
                if value > 0 {
                    return Err(CartanError::Positive { row, col, value });
                }
                let other = matrix[col][row];
                if value == 0 && other != 0 {
                    return Err(CartanError::ZeroPattern { row, col, other });
                }
            }
        }
        Ok(Gcm { labels, matrix })
    }

    /// Builds a matrix labelled `"1"`, ..., `"n"`.
    pub fn from_matrix(matrix: Vec<Vec<i64>>) -> Result<Self, CartanError> {
        let labels = (1..=matrix.len()).map(|i| i.to_string()).collect();
        Gcm::new(labels, matrix)
    }

    /// Number of vertices `|I|`.
    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    /// The entry `a[i][j]`.
    #[inline]
    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Mask of all vertices.
    pub fn full_mask(&self) -> u64 {
        mask_below(self.rank())
    }

    /// Principal submatrix on the vertices of `mask`, in index order.
    pub fn restrict(&self, mask: u64) -> Gcm {
        let idx: Vec<usize> = iter_mask(mask).collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let matrix = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.matrix[i][j]).collect())
            .collect();
        Gcm { labels, matrix }
    }

    /// True iff every principal minor is positive.
    pub fn is_finite_type(&self) -> bool {
        self.is_finite_type_on(self.full_mask())
    }

    /// Finite-type test for the principal submatrix on `mask`.
    pub fn is_finite_type_on(&self, mask: u64) -> bool {
        let idx: Vec<usize> = iter_mask(mask).collect();
        let k = idx.len();
        (1u64..(1u64 << k)).all(|sub| {
            let verts: Vec<usize> = iter_mask(sub).map(|t| idx[t]).collect();
            determinant(self, &verts) > 0
        })
    }
}

/// Exact determinant of the principal submatrix on `verts` (Bareiss).
pub fn determinant(gcm: &Gcm, verts: &[usize]) -> i128 {
    let k = verts.len();
    if k == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = verts
        .iter()
        .map(|&i| verts.iter().map(|&j| gcm.entry(i, j) as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for p in 0..k {
        if m[p][p] == 0 {
            match (p + 1..k).find(|&r| m[r][p] != 0) {
                Some(r) => {
                    m.swap(p, r);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for r in p + 1..k {
            for c in p + 1..k {
                m[r][c] = (m[r][c] * m[p][p] - m[r][p] * m[p][c]) / prev;
            }
        }
        prev = m[p][p];
    }
    sign * m[k - 1][k - 1]
}

/// Mask with the low `n` bits set.
#[inline]
pub fn mask_below(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of `mask` in increasing order.
pub fn iter_mask(mask: u64) -> impl Iterator<Item = usize> {
    let mut m = mask;
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

#[inline]
pub fn bit(i: usize) -> u64 {
    1u64 << i
}

/// A Dynkin diagram `(I, E, w)`: a vertex subset of a labelled index set
/// together with per-direction edge weights.
///
/// Subdiagrams share the weight table and differ only in their vertex mask,
/// so restricting is cheap.
#[derive(Clone)]
pub struct DynkinDiagram {
    labels: Arc<Vec<String>>,
    weights: Arc<Vec<Vec<u32>>>,
    mask: u64,
}

impl fmt::Debug for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verts: Vec<&str> = self.vertices().map(|v| self.labels[v].as_str()).collect();
        let edges: Vec<String> = self
            .edges()
            .map(|(i, j, w)| format!("{}->{}:{}", self.labels[i], self.labels[j], w))
            .collect();
        write!(f, "Dynkin{{{:?}, {:?}}}", verts, edges)
    }
}

impl PartialEq for DynkinDiagram {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
            && self.labels == other.labels
            && self.edges().eq(other.edges())
    }
}

impl Eq for DynkinDiagram {}

impl DynkinDiagram {
    /// Builds a diagram from explicit directed edges `(i, j, w(i, j))` over
    /// `labels`; every edge must come with its reverse.
    pub fn from_edges(
        labels: Vec<String>,
        edges: &[(usize, usize, u32)],
    ) -> Result<Self, CartanError> {
        let n = labels.len();
        if n == 0 {
            return Err(CartanError::Empty);
        }
        if n > MAX_RANK {
            return Err(CartanError::TooLarge(n));
        }
        let mut w = vec![vec![0u32; n]; n];
        for &(i, j, x) in edges {
            if i == j {
                return Err(CartanError::SelfLoop(i));
            }
            w[i][j] = x;
        }
        for i in 0..n {
            for j in 0..n {
                if (w[i][j] == 0) != (w[j][i] == 0) {
                    return Err(CartanError::AsymmetricEdge(i.min(j), i.max(j)));
                }
            }
        }
        Ok(DynkinDiagram { labels: Arc::new(labels), weights: Arc::new(w), mask: mask_below(n) })
    }

    /// The diagram of a matrix: edges where `a[i][j] < 0`, `w(i,j) = -a[i][j]`.
    pub fn from_gcm(gcm: &Gcm) -> Self {
        let n = gcm.rank();
        let w = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 0 } else { (-gcm.entry(i, j)) as u32 }).collect())
            .collect();
        DynkinDiagram {
            labels: Arc::new(gcm.labels().to_vec()),
            weights: Arc::new(w),
            mask: gcm.full_mask(),
        }
    }

    /// The matrix of the diagram, over its vertices in index order.
    pub fn to_gcm(&self) -> Gcm {
        let idx: Vec<usize> = self.vertices().collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let matrix = idx
            .iter()
            .map(|&i| {
                idx.iter()
                    .map(|&j| if i == j { 2 } else { -(self.weights[i][j] as i64) })
                    .collect()
            })
            .collect();
        Gcm { labels, matrix }
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, v: usize) -> bool {
        v < 64 && self.mask & bit(v) != 0
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        iter_mask(self.mask)
    }

    /// The weight `w(i, j)`, zero when `(i, j)` is not an edge of this diagram.
    #[inline]
    pub fn weight(&self, i: usize, j: usize) -> u32 {
        if self.contains(i) && self.contains(j) {
            self.weights[i][j]
        } else {
            0
        }
    }

    /// Directed edges `(i, j, w(i, j))` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.vertices().flat_map(move |i| {
            self.vertices()
                .filter(move |&j| self.weights[i][j] > 0)
                .map(move |j| (i, j, self.weights[i][j]))
        })
    }

    /// Mask of the neighbours of `v` inside this diagram.
    #[inline]
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        let row = &self.weights[v];
        let mut m = 0u64;
        for u in iter_mask(self.mask) {
            if row[u] > 0 {
                m |= bit(u);
            }
        }
        m
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        iter_mask(self.neighbor_mask(v)).collect()
    }

    /// Number of neighbours of `v` in this diagram.
    pub fn valence(&self, v: usize) -> usize {
        self.neighbor_mask(v).count_ones() as usize
    }

    /// A vertex with at most one neighbour.
    pub fn is_leaf(&self, v: usize) -> bool {
        self.contains(v) && self.valence(v) <= 1
    }

    /// Mask of the leaves.
    pub fn leaves(&self) -> u64 {
        self.vertices().filter(|&v| self.valence(v) <= 1).fold(0, |m, v| m | bit(v))
    }

    /// The induced subdiagram on `mask ∩ vertices`.
    pub fn sub(&self, mask: u64) -> DynkinDiagram {
        DynkinDiagram { labels: self.labels.clone(), weights: self.weights.clone(), mask: self.mask & mask }
    }

    /// The subdiagram with the vertices of `mask` removed.
    pub fn without(&self, mask: u64) -> DynkinDiagram {
        self.sub(!mask)
    }

    /// Vertex set of the component containing `v` (empty if `v` is absent).
    pub fn component_of(&self, v: usize) -> u64 {
        if !self.contains(v) {
            return 0;
        }
        let mut seen = bit(v);
        let mut frontier = bit(v);
        while frontier != 0 {
            let mut next = 0;
            for u in iter_mask(frontier) {
                next |= self.neighbor_mask(u);
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// Connected components, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<u64> {
        let mut rest = self.mask;
        let mut out = Vec::new();
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            let c = self.component_of(v);
            out.push(c);
            rest &= !c;
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.valence(v)).sum::<usize>() / 2
    }

    /// Tree test for a connected diagram.
    pub fn is_tree(&self) -> Result<bool, CartanError> {
        if !self.is_connected() {
            return Err(CartanError::Disconnected);
        }
        Ok(self.edge_count() + 1 == self.len())
    }

    /// Tree whose vertices all have at most two neighbours.
    pub fn is_segment(&self) -> bool {
        self.is_tree().unwrap_or(false) && self.vertices().all(|v| self.valence(v) <= 2)
    }

    /// All base points `i0` at which the diagram is 1-star-convex.
    pub fn one_star_convex_basepoints(&self) -> u64 {
        self.vertices().filter(|&v| self.reach_by_unit_edges(v) == self.mask).fold(0, |m, v| m | bit(v))
    }

    /// Whether the diagram is 1-star-convex at `v`.
    pub fn is_one_star_convex_at(&self, v: usize) -> bool {
        self.contains(v) && self.reach_by_unit_edges(v) == self.mask
    }

    fn reach_by_unit_edges(&self, v: usize) -> u64 {
        let mut seen = bit(v);
        let mut frontier = bit(v);
        while frontier != 0 {
            let mut next = 0;
            for u in iter_mask(frontier) {
                for x in iter_mask(self.mask) {
                    if self.weights[u][x] == 1 {
                        next |= bit(x);
                    }
                }
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// Leaf-pruning test for trees: repeatedly delete a leaf `j` whose
    /// neighbour `i` has `w(i, j) = 1`.  Returns the last remaining vertex,
    /// or `None` if pruning gets stuck with two or more vertices left.
    pub fn leaf_pruning_basepoint(&self) -> Option<usize> {
        let mut cur = self.clone();
        loop {
            match cur.len() {
                0 => return None,
                1 => return cur.vertices().next(),
                _ => {}
            }
            let prunable = cur.vertices().find(|&j| {
                let nb = cur.neighbor_mask(j);
                nb.count_ones() == 1 && cur.weights[nb.trailing_zeros() as usize][j] == 1
            })?;
            cur = cur.without(bit(prunable));
        }
    }

    /// Classifies the diagram among the families A, C, D, E, F, G.
    pub fn standard_type(&self) -> Result<StandardType, CartanError> {
        if !self.is_connected() {
            return Err(CartanError::Disconnected);
        }
        let rank = self.len();
        let none = StandardType { family: Family::None, rank, special: None, branch: None, leaves: 0 };
        if self.is_type_a() {
            return Ok(StandardType { family: Family::A, leaves: self.leaves(), ..none });
        }
        if let Some(j0) = self.special_vertex(2) {
            return Ok(StandardType { family: Family::C, special: Some(j0), leaves: self.leaves(), ..none });
        }
        if let Some(j0) = self.special_vertex(3) {
            return Ok(StandardType { family: Family::G, special: Some(j0), leaves: self.leaves(), ..none });
        }
        if let Some((jm1, j0)) = self.type_f_vertices() {
            return Ok(StandardType {
                family: Family::F,
                special: Some(j0),
                leaves: bit(jm1),
                ..none
            });
        }
        if let Some((j1, pair)) = self.type_d_vertices() {
            return Ok(StandardType { family: Family::D, branch: Some(j1), leaves: pair, ..none });
        }
        if let Some((j1, j3)) = self.type_e_vertices() {
            return Ok(StandardType { family: Family::E, branch: Some(j1), leaves: bit(j3), ..none });
        }
        Ok(none)
    }

    /// Type `A_n`: a segment whose weights all equal 1.
    pub fn is_type_a(&self) -> bool {
        !self.is_empty() && self.is_segment() && self.edges().all(|(_, _, w)| w == 1)
    }

    /// For type `C_n` (`heavy = 2`) or `G_n` (`heavy = 3`), the special
    /// vertex `j0`: a leaf with `(w(j0,j1), w(j1,j0)) = (1, heavy)` whose
    /// removal leaves type `A`.  Requires at least two vertices.
    pub fn special_vertex(&self, heavy: u32) -> Option<usize> {
        if self.len() < 2 || !self.is_segment() {
            return None;
        }
        self.vertices().find(|&j0| self.is_special_vertex(j0, heavy))
    }

    /// Whether `j0` is a special vertex in the sense of [`special_vertex`].
    ///
    /// [`special_vertex`]: DynkinDiagram::special_vertex
    pub fn is_special_vertex(&self, j0: usize, heavy: u32) -> bool {
        if self.len() < 2 || !self.contains(j0) || !self.is_segment() {
            return false;
        }
        let nb = self.neighbor_mask(j0);
        if nb.count_ones() != 1 {
            return false;
        }
        let j1 = nb.trailing_zeros() as usize;
        self.weight(j0, j1) == 1 && self.weight(j1, j0) == heavy && self.without(bit(j0)).is_type_a()
    }

    /// Type `F_n` (`n >= 4`): returns `(j_{-1}, j0)`.
    pub fn type_f_vertices(&self) -> Option<(usize, usize)> {
        if self.len() < 4 || !self.is_segment() {
            return None;
        }
        self.vertices().find_map(|jm1| {
            let nb = self.neighbor_mask(jm1);
            if nb.count_ones() != 1 {
                return None;
            }
            let j0 = nb.trailing_zeros() as usize;
            let rest = self.without(bit(jm1));
            if self.weight(jm1, j0) == 1 && self.weight(j0, jm1) == 1 && rest.is_special_vertex(j0, 2) {
                Some((jm1, j0))
            } else {
                None
            }
        })
    }

    /// Type `D_n` (`n >= 4`): returns the branch vertex `j1` and the mask of
    /// the two leaves `{j2', j2''}` (the smallest valid pair).
    pub fn type_d_vertices(&self) -> Option<(usize, u64)> {
        if self.len() < 4 || self.is_tree() != Ok(true) {
            return None;
        }
        let leaves: Vec<usize> = iter_mask(self.leaves()).collect();
        for (a, &x) in leaves.iter().enumerate() {
            for &y in &leaves[a + 1..] {
                if let Some(j1) = self.type_d_with_pair(x, y) {
                    return Some((j1, bit(x) | bit(y)));
                }
            }
        }
        None
    }

    /// Checks the type `D` condition for a given leaf pair, returning `j1`.
    pub fn type_d_with_pair(&self, x: usize, y: usize) -> Option<usize> {
        if self.len() < 4 || x == y || !self.contains(x) || !self.contains(y) {
            return None;
        }
        let nx = self.neighbor_mask(x);
        if nx.count_ones() != 1 || nx != self.neighbor_mask(y) {
            return None;
        }
        let j1 = nx.trailing_zeros() as usize;
        let unit = |u: usize| self.weight(u, j1) == 1 && self.weight(j1, u) == 1;
        let rest = self.without(bit(x) | bit(y));
        if unit(x) && unit(y) && rest.is_type_a() && rest.is_leaf(j1) {
            Some(j1)
        } else {
            None
        }
    }

    /// Type `E_n` (`n >= 6`): returns `(j1, j3')`.
    pub fn type_e_vertices(&self) -> Option<(usize, usize)> {
        if self.len() < 6 || self.is_tree() != Ok(true) || self.type_d_vertices().is_some() {
            return None;
        }
        let branches: Vec<usize> = self.vertices().filter(|&v| self.valence(v) >= 3).collect();
        if branches.len() != 1 || self.valence(branches[0]) != 3 {
            return None;
        }
        let j1 = branches[0];
        iter_mask(self.leaves())
            .find(|&j3| self.without(bit(j3)).type_d_vertices().is_some())
            .map(|j3| (j1, j3))
    }
}

/// The families of the standard diagram types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    C,
    D,
    E,
    F,
    G,
    None,
}

/// Standard type of a connected diagram with its distinguished vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardType {
    pub family: Family,
    pub rank: usize,
    /// Special vertex `j0` (types C, F, G).
    pub special: Option<usize>,
    /// Branch vertex `j1` (types D, E).
    pub branch: Option<usize>,
    /// Distinguished leaves: `{j2', j2''}` for D, `{j3'}` for E,
    /// `{j_{-1}}` for F, all leaves for A, C, G.
    pub leaves: u64,
}
