mod common;

use std::collections::BTreeSet;

use common::*;
use kmq::affine::{AffineError, AffinePair, AffineSemigroup, ExplicitVariant};
use kmq::datum::Coweight;
use kmq::quantum::is_quantum_by_definition;
use kmq::roots::{self, RealRoot};
use kmq::weyl::WeylElement;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn a2() -> kmq::RootDatum {
    datum(vec![vec![2, -1], vec![-1, 2]])
}

fn a1_affine() -> kmq::RootDatum {
    datum(vec![vec![2, -2], vec![-2, 2]])
}

fn check_covers(d: &kmq::RootDatum, seed: u64, count: usize) {
    let g = AffineSemigroup::new(d, 400).unwrap();
    for x in sample_elements(&g, count, seed, 20, 4) {
        let got: BTreeSet<_> = g.covers(&x).unwrap().into_iter().collect();
        let oracle = oracle_covers(&g, &x);
        let want: BTreeSet<_> = oracle.iter().map(|(y, _)| y.clone()).collect();
        assert_eq!(got, want, "covers of {x:?}");
        for (y, refls) in &oracle {
            assert_eq!(refls.len(), 1, "cover {y:?} of {x:?} from several reflections");
            let (gamma, m) = &refls[0];
            let shape = g.decompose(&x, gamma, *m);
            assert!(shape.has_allowed_level(d), "{shape:?}");
            if !shape.keeps_dominant_class(d) {
                assert!(is_quantum_by_definition(d, &shape.beta), "{shape:?}");
                assert_ne!(y.dominant(), x.dominant());
            } else {
                assert_eq!(y.dominant(), x.dominant());
            }
        }
    }
}

#[test]
fn covers_match_oracle_a2() {
    check_covers(&a2(), 11, 25);
}

#[test]
fn covers_match_oracle_affine_a1() {
    check_covers(&a1_affine(), 12, 25);
}

#[test]
fn covers_match_oracle_b2_and_g2() {
    check_covers(&datum(vec![vec![2, -2], vec![-1, 2]]), 13, 10);
    check_covers(&datum(vec![vec![2, -3], vec![-1, 2]]), 14, 10);
}

fn check_cocovers(d: &kmq::RootDatum, seed: u64, count: usize) {
    let g = AffineSemigroup::new(d, 400).unwrap();
    let mut checked = 0;
    for y in sample_elements(&g, 4 * count, seed, 20, 4) {
        if !(d.is_spherical(y.certificate()) || d.is_in_y_in(y.coweight())) {
            assert!(matches!(g.cocovers(&y), Err(AffineError::NotSupported(_))));
            continue;
        }
        let got: BTreeSet<_> = g.cocovers(&y).unwrap().into_iter().collect();
        let reach = y.min_rep().length() + y.weyl().length() + 6;
        assert_eq!(got, oracle_cocovers(&g, &y, reach), "co-covers of {y:?}");
        checked += 1;
        if checked == count {
            break;
        }
    }
    assert_eq!(checked, count);
}

#[test]
fn cocovers_match_oracle_a2() {
    check_cocovers(&a2(), 21, 20);
}

#[test]
fn cocovers_match_oracle_affine_a1() {
    check_cocovers(&a1_affine(), 22, 20);
}

#[test]
fn y_in_elements_have_weyl_cocovers() {
    for d in [a2(), a1_affine()] {
        let g = AffineSemigroup::new(&d, 400).unwrap();
        let n = d.rank();
        let mut lam = vec![0i64; 2 * n];
        lam[0] = 1;
        for j in 0..n {
            lam[n + j] = -d.gcm().entry(0, j);
        }
        let lambda = Coweight(lam);
        assert!(d.is_in_y_in(&lambda));
        for w in WeylElement::enumerate_by_length(&d, 3, 1000).unwrap() {
            let y = g.element(lambda.clone(), w.clone()).unwrap();
            let got: Vec<_> = g.cocovers(&y).unwrap().into_iter().map(|x| x.pair().clone()).collect();
            let mut want: Vec<_> = w.cocovers(&d).into_iter().map(|c| AffinePair::new(lambda.clone(), c)).collect();
            want.sort();
            let mut got = got;
            got.sort();
            assert_eq!(got, want);
        }
    }
}

#[test]
fn y_in_rigidity() {
    let d = a2();
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let lambda = Coweight(vec![1, 0, -2, 1]);
    assert!(d.is_in_y_in(&lambda));
    let ws = WeylElement::enumerate_by_length(&d, 3, 100).unwrap();
    let mus = [lambda.clone(), Coweight(vec![0, 0, 0, 0]), d.coweight_from_coroot(&[1, 0]).add(&lambda)];
    for v in &ws {
        let top = g.element(lambda.clone(), v.clone()).unwrap();
        for mu in &mus {
            for w in &ws {
                let x = g.element(mu.clone(), w.clone()).unwrap();
                let expected = *mu == lambda && w.bruhat_leq(&d, v);
                assert_eq!(g.leq(&x, &top).unwrap(), expected, "{x:?} ≤ {top:?}");
            }
        }
    }
}

#[test]
fn identity_covers_golden() {
    let d = a2();
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let e = g.identity();
    let covers = g.covers(&e).unwrap();
    let oracle: Vec<_> = oracle_covers(&g, &e).into_iter().map(|(y, _)| y).collect();
    assert_eq!(covers, oracle);
    let same_class = covers.iter().filter(|y| y.dominant() == e.dominant()).count();
    assert_eq!(same_class, 2);
    assert_eq!(covers.len(), 3);
}

#[test]
fn intervals_agree_with_cover_sweep() {
    for (d, seed) in [(a2(), 31u64), (a1_affine(), 32)] {
        let g = AffineSemigroup::new(&d, 400).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for x in sample_elements(&g, 6, seed, 12, 3) {
            let mut y = x.clone();
            for _ in 0..rng.gen_range(0..=4) {
                let c = g.covers(&y).unwrap();
                y = c[rng.gen_range(0..c.len())].clone();
            }
            let iv = g.interval(&x, &y).unwrap();
            let (nodes, edges) = interval_by_covers(&g, &x, &y);
            let got: BTreeSet<_> = iv.nodes.iter().cloned().collect();
            assert_eq!(got, nodes);
            let got_edges: BTreeSet<_> =
                iv.edges.iter().map(|&(a, b)| (iv.nodes[a].clone(), iv.nodes[b].clone())).collect();
            assert_eq!(got_edges, edges);
            for &(a, b) in &iv.edges {
                assert_eq!(iv.nodes[b].length(), iv.nodes[a].length() + 1);
            }
            assert!(g.leq(&x, &y).unwrap());
        }
    }
}

#[test]
fn interval_golden_a2() {
    let d = a2();
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let e = g.identity();
    let top = g.element(d.coweight_from_coroot(&[1, 1]), WeylElement::identity(&d)).unwrap();
    let iv = g.interval(&e, &top).unwrap();
    let (nodes, edges) = interval_by_covers(&g, &e, &top);
    assert_eq!(iv.nodes.len(), nodes.len());
    assert_eq!(iv.edges.len(), edges.len());
    assert_eq!((iv.nodes.len(), iv.edges.len()), (12, 22));
}

#[test]
fn incomparable_siblings() {
    let d = a2();
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let covers = g.covers(&g.identity()).unwrap();
    assert!(!g.leq(&covers[0], &covers[1]).unwrap());
    assert!(!g.leq(&covers[1], &covers[0]).unwrap());
}

#[test]
fn explicit_covers_examples() {
    let d = a2();
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let e = WeylElement::identity(&d);
    let beta = roots::reflect(&d, 1, &RealRoot::simple(2, 0));
    let lambda = d.coweight_from_pairings(&[2, 2]).unwrap();
    let (lo, up) = g.explicit_cover_up(&beta, &lambda, &e, &e, ExplicitVariant::One).unwrap();
    assert_eq!(up.length() - lo.length(), 1);
    assert_eq!(lo.weyl(), &roots::reflection_of(&d, &beta));
    assert_eq!(up.coweight(), &lambda.add(&d.coweight_from_coroot(&[1, 1])));
    let (lo, up) = g.explicit_cover_up(&beta, &lambda, &e, &e, ExplicitVariant::Two).unwrap();
    assert_eq!(up.length() - lo.length(), 1);
    let small = d.coweight_from_pairings(&[1, 0]).unwrap();
    assert!(matches!(
        g.explicit_cover_up(&beta, &small, &e, &e, ExplicitVariant::One),
        Err(AffineError::PreconditionFailed(_))
    ));
}

#[test]
fn explicit_pair_for_non_quantum_root_is_not_a_cover() {
    let d = a1_affine();
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let e = WeylElement::identity(&d);
    let beta = roots::reflect(&d, 0, &RealRoot::simple(2, 1));
    assert!(!is_quantum_by_definition(&d, &beta));
    let lambda = d.coweight_from_pairings(&[3, 3]).unwrap();
    for variant in [ExplicitVariant::One, ExplicitVariant::Two] {
        let (lo, up) = g.explicit_pair(&beta, &lambda, &e, &e, variant).unwrap();
        assert_ne!(up.length() - lo.length(), 1);
        assert!(matches!(
            g.explicit_cover_up(&beta, &lambda, &e, &e, variant),
            Err(AffineError::PreconditionFailed(_))
        ));
    }
}

#[test]
fn witness_family_on_all_minus_two() {
    let d = datum(vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]]);
    let g = AffineSemigroup::new(&d, 400).unwrap();
    let fam = g.cocover_witness_family(12).unwrap();
    let lowers: BTreeSet<_> = fam.iter().map(|(x, _)| x.clone()).collect();
    assert_eq!(lowers.len(), 12);
    let upper = &fam[0].1;
    assert!(!d.is_spherical(upper.certificate()));
    assert!(matches!(g.cocovers(upper), Err(AffineError::NotSupported(_))));
    let partial = g.cocovers_bounded(upper, 4).unwrap();
    assert!(partial.partial);
    for (x, y) in &fam {
        assert_eq!(y, upper);
        assert!(g.covers(x).unwrap().contains(y));
    }
    let single = g.cocover_witness_family(1).unwrap();
    assert_eq!(single.len(), 1);
}

#[test]
fn budget_exceeded_is_reported() {
    let d = datum(vec![vec![2, -2, -2], vec![-2, 2, -2], vec![-2, -2, 2]]);
    let g = AffineSemigroup::new(&d, 2).unwrap();
    let lambda = d.coweight_from_pairings(&[-1, 5, 5]).unwrap();
    let far = WeylElement::reduce_word(&d, &[1, 2, 1, 2]).act_on_coweight(&d, &lambda);
    assert!(matches!(g.element(far, WeylElement::identity(&d)), Err(AffineError::BudgetExceeded { .. })));
}
