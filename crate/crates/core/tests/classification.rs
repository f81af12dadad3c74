mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::*;
use kmq::cartan::{iter_mask, DynkinDiagram};
use kmq::quantum::*;
use kmq::RootDatum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn tree_degree(t: &DynkinDiagram, v: usize) -> u32 {
    t.vertices().filter(|&u| u != v).map(|u| t.weight(u, v)).sum()
}

/// Forward and converse agreement of the classifier with the definition on
/// one datum.  The converse walks nested level sequences from every 1-star
/// convex tree `I_1` whose levels keep each degree at most 3 and each
/// component holding exactly one degree-3 vertex.
fn round_trip(m: &[Vec<i64>], max_depth: usize, kinds: &mut BTreeMap<&'static str, usize>) {
    let d = datum(m.to_vec());
    let n = d.rank();
    let full = d.diagram();
    let q: BTreeSet<Vec<i64>> =
        quantum_roots(&d).unwrap().into_iter().map(|(r, _)| r.coroot_coords().to_vec()).collect();
    for v in &q {
        let s = DynkinSequence::from_coroot(v);
        let classes = classify_sequence(&d, &s).unwrap_or_else(|e| panic!("{m:?} {v:?} rejected: {e}"));
        for c in classes {
            *kinds.entry(c.kind.as_str()).or_default() += 1;
            assert_eq!(matching_kinds(&d, &s, c.base), vec![c.kind], "{m:?} {v:?}");
        }
    }
    for i1 in 1u64..(1 << n) {
        let t = full.sub(i1);
        if !t.is_connected() || t.is_tree() != Ok(true) || t.one_star_convex_basepoints() == 0 {
            continue;
        }
        let valid: Vec<u64> = (1u64..(1 << n))
            .filter(|&s| s & !i1 == 0)
            .filter(|&s| {
                let l = t.sub(s);
                l.vertices().all(|v| tree_degree(&t, v) <= 3)
                    && l.connected_components()
                        .iter()
                        .all(|&c| iter_mask(c).filter(|&v| tree_degree(&t, v) == 3).count() == 1)
            })
            .collect();
        let mut stack: Vec<Vec<u64>> = vec![vec![i1]];
        while let Some(levels) = stack.pop() {
            let s = DynkinSequence::from_levels(levels.clone());
            let accepted = classify_sequence(&d, &s).is_ok();
            assert_eq!(accepted, q.contains(&s.coroot(n)), "{m:?} {levels:?}");
            if levels.len() < max_depth {
                let last = *levels.last().unwrap();
                for &s2 in valid.iter().filter(|&&s2| s2 & !last == 0) {
                    let mut l = levels.clone();
                    l.push(s2);
                    stack.push(l);
                }
            }
        }
    }
}

#[test]
fn trees_up_to_seven_vertices() {
    let mut kinds = BTreeMap::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let weights = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 2)];
    for n in 4..=7 {
        for edges in trees(n) {
            round_trip(&tree_matrix(n, &edges, &[]), 8, &mut kinds);
            for _ in 0..4 {
                let w: Vec<(i64, i64)> = edges
                    .iter()
                    .map(|_| if rng.gen_bool(0.7) { (1, 1) } else { weights[rng.gen_range(0..weights.len())] })
                    .collect();
                round_trip(&tree_matrix(n, &edges, &w), 8, &mut kinds);
            }
        }
    }
    assert_kinds(&kinds, &["2G", "3S", "3C", "3F", "4S", "4A", "4D", "4EA"]);
}

fn assert_kinds(kinds: &BTreeMap<&'static str, usize>, expected: &[&str]) {
    for kind in expected {
        assert!(kinds.contains_key(kind), "kind {kind} never met; seen {kinds:?}");
    }
}

#[test]
fn trees_with_eight_vertices() {
    let mut kinds = BTreeMap::new();
    for edges in trees(8) {
        round_trip(&tree_matrix(8, &edges, &[]), 6, &mut kinds);
    }
    assert_kinds(&kinds, &["4ED1", "4ED2", "4ED3", "4SA1", "4SA2"]);
}

fn fixtures() -> Vec<Vec<Vec<i64>>> {
    let mut out: Vec<Vec<Vec<i64>>> = named().into_iter().map(|(_, m)| m).collect();
    out.extend(family(2));
    out.extend(family(3));
    out.extend(sample(4, 150, 7));
    out
}

/// Every nested sequence of nonempty levels of depth at most `max_depth`
/// over `n` vertices.
fn nested_sequences(n: usize, max_depth: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    let mut stack: Vec<Vec<u64>> = (1u64..(1 << n)).map(|m| vec![m]).collect();
    while let Some(levels) = stack.pop() {
        if levels.len() < max_depth {
            let last = *levels.last().unwrap();
            for s in (1u64..(1 << n)).filter(|&s| s & !last == 0) {
                let mut l = levels.clone();
                l.push(s);
                stack.push(l);
            }
        }
        out.push(levels);
    }
    out
}

#[test]
fn fixture_round_trip_with_construction() {
    let fx = fixtures();
    let mut seqs: BTreeMap<usize, Vec<Vec<u64>>> = BTreeMap::new();
    for m in &fx {
        let d: RootDatum = datum(m.clone());
        let n = d.rank();
        let oracle = oracle_quantum(&d);
        let all = seqs.entry(n).or_insert_with(|| nested_sequences(n, if n <= 3 { 7 } else { 5 }));
        for levels in all.iter() {
            let s = DynkinSequence::from_levels(levels.clone());
            let coroot = s.coroot(n);
            match classify_sequence(&d, &s) {
                Ok(_) => {
                    let rec = construct_from_sequence(&d, &s).unwrap_or_else(|e| panic!("{m:?} {levels:?}: {e}"));
                    assert_eq!(rec.sequence, s);
                    assert_eq!(rec.root.coroot_coords(), &coroot[..]);
                    assert!(oracle.contains(&coroot));
                }
                Err(_) => assert!(!oracle.contains(&coroot), "{m:?} {levels:?} rejected but quantum"),
            }
        }
        for v in &oracle {
            assert!(classify_sequence(&d, &DynkinSequence::from_coroot(v)).is_ok(), "{m:?} {v:?}");
        }
    }
}

fn e_type(n: usize) -> Vec<Vec<i64>> {
    // Chain 0-2-3-4-…-(n-1) with vertex 1 attached to 3.
    let mut edges = vec![(0, 2), (1, 3)];
    edges.extend((2..n - 1).map(|i| (i, i + 1)));
    tree_matrix(n, &edges, &[])
}

#[test]
fn e6_highest_root_is_4d() {
    let d = datum(e_type(6));
    let hi = [1, 2, 2, 3, 2, 1];
    let s = DynkinSequence::from_coroot(&hi);
    let classes = classify_sequence(&d, &s).unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].kind, ClassKind::D4);
    assert_eq!(classes[0].depth, 3);
    assert_eq!(construct_from_sequence(&d, &s).unwrap().root.coroot_coords(), &hi);
}

#[test]
fn e8_highest_root_is_4ed2() {
    let d = datum(e_type(8));
    let hi = [2, 3, 4, 6, 5, 4, 3, 2];
    let s = DynkinSequence::from_coroot(&hi);
    assert!(is_quantum_by_definition(&d, &construct_from_sequence(&d, &s).unwrap().root));
    let classes = classify_sequence(&d, &s).unwrap();
    assert_eq!(classes.len(), 1);
    assert_eq!(classes[0].kind, ClassKind::ED2);
    assert_eq!(classes[0].n0, Some(2));
}

#[test]
fn rejections_name_a_clause() {
    let d = datum(e_type(6));
    let bad = DynkinSequence::from_coroot(&[1, 1, 1, 3, 1, 1]);
    let err = classify_sequence(&d, &bad).unwrap_err();
    assert!(!err.to_string().is_empty());
    assert!(!quantum_roots(&d).unwrap().iter().any(|(r, _)| r.coroot_coords() == [1, 1, 1, 3, 1, 1]));
}
