//! Shared fixtures and brute-force oracles for the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;

use kmq::cartan::Gcm;
use kmq::datum::RootDatum;
use kmq::quantum::is_quantum_by_definition;
use kmq::roots::enumerate_real_roots;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn datum(m: Vec<Vec<i64>>) -> RootDatum {
    RootDatum::doubled(&Gcm::from_matrix(m).unwrap())
}

/// Named fixtures used across the suites.
pub fn named() -> Vec<(&'static str, Vec<Vec<i64>>)> {
    vec![
        ("A1", vec![vec![2]]),
        ("A2", vec![vec![2, -1], vec![-1, 2]]),
        ("B2", vec![vec![2, -2], vec![-1, 2]]),
        ("G2", vec![vec![2, -3], vec![-1, 2]]),
        ("A1^(1)", vec![vec![2, -2], vec![-2, 2]]),
        ("A3", vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]]),
        ("B3", vec![vec![2, -1, 0], vec![-1, 2, -2], vec![0, -1, 2]]),
        ("A2^(1)", vec![vec![2, -1, -1], vec![-1, 2, -1], vec![-1, -1, 2]]),
        ("H3-all-2", vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]]),
        ("D4", vec![vec![2, -1, 0, 0], vec![-1, 2, -1, -1], vec![0, -1, 2, 0], vec![0, -1, 0, 2]]),
        ("A3^(1)", vec![vec![2, -1, 0, -1], vec![-1, 2, -1, 0], vec![0, -1, 2, -1], vec![-1, 0, -1, 2]]),
        ("D4-star-2", vec![vec![2, -1, -1, -1], vec![-2, 2, 0, 0], vec![-1, 0, 2, 0], vec![-1, 0, 0, 2]]),
    ]
}

const OFF: [(i64, i64); 10] =
    [(0, 0), (-1, -1), (-1, -2), (-1, -3), (-2, -1), (-2, -2), (-2, -3), (-3, -1), (-3, -2), (-3, -3)];

fn build(n: usize, choice: &[usize]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    let mut k = 0;
    for i in 0..n {
        m[i][i] = 2;
        for j in i + 1..n {
            let (a, b) = OFF[choice[k]];
            m[i][j] = a;
            m[j][i] = b;
            k += 1;
        }
    }
    m
}

fn permute(m: &[Vec<i64>], p: &[usize]) -> Vec<Vec<i64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[p[i]][p[j]]).collect()).collect()
}

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// All connected GCMs of rank `n` with off-diagonal entries in
/// `{0, -1, -2, -3}`, one per isomorphism class.
pub fn family(n: usize) -> Vec<Vec<Vec<i64>>> {
    let pairs = n * (n - 1) / 2;
    let ps = perms(n);
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let total = 10usize.pow(pairs as u32);
    for code in 0..total {
        let choice: Vec<usize> = (0..pairs).map(|k| (code / 10usize.pow(k as u32)) % 10).collect();
        let m = build(n, &choice);
        if Gcm::from_matrix(m.clone()).map(|g| kmq::cartan::DynkinDiagram::from_gcm(&g).is_connected()) != Ok(true) {
            continue;
        }
        let canon = ps.iter().map(|p| permute(&m, p)).min().unwrap();
        if seen.insert(canon.clone()) {
            out.push(canon);
        }
    }
    out
}

/// A seeded sample of connected rank-`n` matrices from the same family.
pub fn sample(n: usize, count: usize, seed: u64) -> Vec<Vec<Vec<i64>>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = n * (n - 1) / 2;
    let mut out = Vec::new();
    while out.len() < count {
        let choice: Vec<usize> = (0..pairs)
            .map(|_| if rng.gen_bool(0.45) { 0 } else { rng.gen_range(1..10) })
            .collect();
        let m = build(n, &choice);
        if Gcm::from_matrix(m.clone()).map(|g| kmq::cartan::DynkinDiagram::from_gcm(&g).is_connected()) == Ok(true) {
            out.push(m);
        }
    }
    out
}

/// Quantum coroots by the definition over all real roots up to the
/// height bound `|I| · max(6, |I| + 1)`.
pub fn oracle_quantum(d: &RootDatum) -> BTreeSet<Vec<i64>> {
    let n = d.rank() as i64;
    enumerate_real_roots(d, n * 6.max(n + 1), 10_000_000)
        .unwrap()
        .into_iter()
        .filter(|(r, _)| is_quantum_by_definition(d, r))
        .map(|(r, _)| r.coroot_coords().to_vec())
        .collect()
}

/// Every vector in `{0, …, max}^n` except zero.
pub fn coefficient_vectors(n: usize, max: i64) -> Vec<Vec<i64>> {
    let base = (max + 1) as usize;
    (1..base.pow(n as u32))
        .map(|code| (0..n).map(|i| ((code / base.pow(i as u32)) % base) as i64).collect())
        .collect()
}

/// Canonical form of an unlabelled tree given by adjacency lists.
fn tree_canon(adj: &[Vec<usize>]) -> String {
    fn enc(adj: &[Vec<usize>], v: usize, p: usize) -> String {
        let mut ch: Vec<String> = adj[v].iter().filter(|&&u| u != p).map(|&u| enc(adj, u, v)).collect();
        ch.sort();
        format!("({})", ch.concat())
    }
    let n = adj.len();
    (0..n).map(|r| enc(adj, r, usize::MAX)).min().unwrap()
}

/// All unlabelled trees on `n` vertices as edge lists.
pub fn trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut cur: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for size in 2..=n {
        let mut seen = BTreeSet::new();
        let mut next = Vec::new();
        for t in &cur {
            for v in 0..size - 1 {
                let mut e = t.clone();
                e.push((v, size - 1));
                let mut adj = vec![vec![]; size];
                for &(a, b) in &e {
                    adj[a].push(b);
                    adj[b].push(a);
                }
                if seen.insert(tree_canon(&adj)) {
                    next.push(e);
                }
            }
        }
        cur = next;
    }
    cur
}

/// The matrix of a tree with weights `(w(a,b), w(b,a))` per edge.
pub fn tree_matrix(n: usize, edges: &[(usize, usize)], weights: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut m = vec![vec![0i64; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 2;
    }
    for (k, &(a, b)) in edges.iter().enumerate() {
        let (x, y) = weights.get(k).copied().unwrap_or((1, 1));
        m[a][b] = -x;
        m[b][a] = -y;
    }
    m
}

// ---------------------------------------------------------------------------
// Affine oracles.

use kmq::affine::{AffineElement, AffinePair, AffineReflection, AffineRoot, AffineSemigroup};
use kmq::datum::Coweight;
use kmq::roots::RealRoot;
use kmq::weyl::WeylElement;

/// Coroot height bound `|I|·max(6, |I|+1)`, raised so that every root
/// `v(β)` with `β` of that height and `ℓ(v) ≤ reach` is still included.
pub fn sweep_height(rank: usize, reach: usize) -> i64 {
    let base = rank as i64 * std::cmp::max(6, rank as i64 + 1);
    base.max(4 * reach as i64 + 8)
}

fn sweep_roots(g: &AffineSemigroup, reach: usize) -> Vec<RealRoot> {
    let d = g.datum();
    enumerate_real_roots(d, sweep_height(d.rank(), reach), 1 << 20).unwrap().into_iter().map(|(r, _)| r).collect()
}

fn level_bound(g: &AffineSemigroup, lambda: &Coweight, roots: &[RealRoot]) -> i64 {
    let d = g.datum();
    roots.iter().map(|r| d.pair_with_root(lambda, r.root_coords()).abs()).max().unwrap_or(0) + 1
}

/// Whether `s_{γ[m]} z < z`, decided by the sign of `z⁻¹(γ[m])`.
pub fn below_by_action(g: &AffineSemigroup, z: &AffinePair, gamma: &RealRoot, m: i64) -> bool {
    let d = g.datum();
    !z.inverse(d).act(d, &AffineRoot::bracket(gamma, m)).is_positive()
}

/// Every `y = s_{γ[m]} x` with `ht(γ^∨)` and `|m|` bounded, `x < y`,
/// `y ∈ W⁺` and `ℓᵃ(y) = ℓᵃ(x) + 1`, with the reflections producing it.
pub fn oracle_covers(g: &AffineSemigroup, x: &AffineElement) -> Vec<(AffineElement, Vec<(RealRoot, i64)>)> {
    let d = g.datum();
    let reach = x.min_rep().length() + x.weyl().length();
    let roots = sweep_roots(g, reach);
    let nb = level_bound(g, x.coweight(), &roots) + 2;
    let mut found: std::collections::BTreeMap<AffineElement, Vec<(RealRoot, i64)>> = Default::default();
    for gamma in &roots {
        for m in -nb..=nb {
            let y = AffineReflection::new(gamma, m).apply(d, x.pair());
            if !below_by_action(g, &y, gamma, m) {
                continue;
            }
            if let Ok(Some(e)) = g.try_element(y) {
                if e.length() == x.length() + 1 {
                    found.entry(e).or_default().push((gamma.clone(), m));
                }
            }
        }
    }
    found.into_iter().collect()
}

/// Every `x = s_{γ[m]} y` with bounded `ht(γ^∨)` and `|m|`, `x < y` and
/// `ℓᵃ(x) = ℓᵃ(y) − 1`.
pub fn oracle_cocovers(g: &AffineSemigroup, y: &AffineElement, reach: usize) -> BTreeSet<AffineElement> {
    let d = g.datum();
    let roots = sweep_roots(g, reach);
    let nb = level_bound(g, y.coweight(), &roots) + 2;
    let mut out = BTreeSet::new();
    for gamma in &roots {
        for m in -nb..=nb {
            if !below_by_action(g, y.pair(), gamma, m) {
                continue;
            }
            let x = AffineReflection::new(gamma, m).apply(d, y.pair());
            let e = g.try_element(x).unwrap().expect("elements below W⁺ stay in W⁺");
            if e.length() + 1 == y.length() {
                out.insert(e);
            }
        }
    }
    out
}

/// Random elements `ϖ^λ w ∈ W⁺` with `|ℓᵃ| ≤ max_len` and `ℓ(v^λ) ≤ max_v`.
pub fn sample_elements(
    g: &AffineSemigroup,
    count: usize,
    seed: u64,
    max_len: i64,
    max_v: usize,
) -> Vec<AffineElement> {
    let d = g.datum();
    let n = d.rank();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out: Vec<AffineElement> = Vec::new();
    let mut tries = 0;
    while out.len() < count {
        tries += 1;
        assert!(tries < 100_000, "sampler stalled");
        let coords: Vec<i64> = (0..d.dim()).map(|_| rng.gen_range(-2..=2)).collect();
        let len = rng.gen_range(0..=4);
        let word: Vec<usize> = (0..len).map(|_| rng.gen_range(0..n)).collect();
        let w = WeylElement::reduce_word(d, &word);
        let Ok(Some(e)) = g.try_element(AffinePair::new(Coweight(coords), w)) else { continue };
        if e.length().abs() <= max_len && e.min_rep().length() <= max_v && !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

/// Nodes and edges of `[x, y]` from an upward sweep through covers only.
pub fn interval_by_covers(
    g: &AffineSemigroup,
    x: &AffineElement,
    y: &AffineElement,
) -> (BTreeSet<AffineElement>, BTreeSet<(AffineElement, AffineElement)>) {
    let mut up: Vec<AffineElement> = vec![x.clone()];
    let mut seen: BTreeSet<AffineElement> = up.iter().cloned().collect();
    let mut edges = BTreeSet::new();
    let mut frontier = up.clone();
    while let Some(z) = frontier.pop() {
        if z.length() >= y.length() {
            continue;
        }
        for c in g.covers(&z).unwrap() {
            edges.insert((z.clone(), c.clone()));
            if seen.insert(c.clone()) {
                up.push(c.clone());
                frontier.push(c);
            }
        }
    }
    let mut below: BTreeSet<AffineElement> = BTreeSet::new();
    if seen.contains(y) {
        below.insert(y.clone());
        loop {
            let add: Vec<AffineElement> = edges
                .iter()
                .filter(|(a, b)| below.contains(b) && !below.contains(a))
                .map(|(a, _)| a.clone())
                .collect();
            if add.is_empty() {
                break;
            }
            below.extend(add);
        }
    }
    let nodes: BTreeSet<AffineElement> = below.into_iter().filter(|z| seen.contains(z)).collect();
    let edges = edges.into_iter().filter(|(a, b)| nodes.contains(a) && nodes.contains(b)).collect();
    (nodes, edges)
}
