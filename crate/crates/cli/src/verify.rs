//! Verification suites run by `kmq verify`.
//!
//! Each check reports PASS, FAIL or SKIP (not applicable to the matrix)
//! together with the property it checks.

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::ValueEnum;
use kmq::affine::{default_budget, AffineElement, AffineError, AffineSemigroup, ExplicitVariant};
use kmq::quantum::{
    classify_sequence, coefficient_bound, construct_from_sequence, count_bound, dynkin_sequence,
    is_quantum_by_definition, DynkinSequence,
};
use kmq::roots::{self, coroot_pairing};
use kmq::{Gcm, RealRoot, RootDatum, WeylElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cache::{self, QuantumSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Ade,
    SimpleOnly,
    AffineA,
    Bound,
    Grading,
    Classification,
    ExplicitCovers,
    All,
}

impl Suite {
    const EACH: [Suite; 7] = [
        Suite::Ade,
        Suite::SimpleOnly,
        Suite::AffineA,
        Suite::Bound,
        Suite::Grading,
        Suite::Classification,
        Suite::ExplicitCovers,
    ];

    fn name(self) -> &'static str {
        match self {
            Suite::Ade => "ade",
            Suite::SimpleOnly => "simple-only",
            Suite::AffineA => "affine-a",
            Suite::Bound => "bound",
            Suite::Grading => "grading",
            Suite::Classification => "classification",
            Suite::ExplicitCovers => "explicit-covers",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Serialize)]
pub struct Check {
    pub status: Status,
    pub suite: &'static str,
    pub fixture: String,
    pub check: &'static str,
    pub property: &'static str,
    pub detail: String,
}

pub struct Fixture {
    pub name: String,
    pub datum: RootDatum,
}

impl Fixture {
    pub fn new(name: impl Into<String>, gcm: &Gcm) -> Self {
        Fixture { name: name.into(), datum: RootDatum::doubled(gcm) }
    }
}

/// The matrices used when no `--gcm` is given.
pub fn builtin_fixtures() -> Vec<Fixture> {
    let m = |rows: &[&[i64]]| Gcm::from_matrix(rows.iter().map(|r| r.to_vec()).collect()).expect("valid fixture");
    vec![
        Fixture::new("A2", &m(&[&[2, -1], &[-1, 2]])),
        Fixture::new("A3", &m(&[&[2, -1, 0], &[-1, 2, -1], &[0, -1, 2]])),
        Fixture::new("D4", &m(&[&[2, -1, 0, 0], &[-1, 2, -1, -1], &[0, -1, 2, 0], &[0, -1, 0, 2]])),
        Fixture::new("B2", &m(&[&[2, -2], &[-1, 2]])),
        Fixture::new("G2", &m(&[&[2, -3], &[-1, 2]])),
        Fixture::new("A1^(1)", &m(&[&[2, -2], &[-2, 2]])),
        Fixture::new("A2^(1)", &m(&[&[2, -1, -1], &[-1, 2, -1], &[-1, -1, 2]])),
        Fixture::new(
            "A3^(1)",
            &m(&[&[2, -1, 0, -1], &[-1, 2, -1, 0], &[0, -1, 2, -1], &[-1, 0, -1, 2]]),
        ),
        Fixture::new("chain(-2)", &m(&[&[2, -2, 0], &[-2, 2, -2], &[0, -2, 2]])),
        Fixture::new("triangle(-2)", &m(&[&[2, -2, -2], &[-2, 2, -2], &[-2, -2, 2]])),
    ]
}

pub struct Options {
    pub seed: u64,
    pub budget: Option<usize>,
    pub cache: Option<PathBuf>,
}

struct Ctx<'a> {
    suite: Suite,
    fixture: &'a Fixture,
    checks: &'a mut Vec<Check>,
}

impl Ctx<'_> {
    fn push(&mut self, check: &'static str, property: &'static str, status: Status, detail: String) {
        self.checks.push(Check {
            status,
            suite: self.suite.name(),
            fixture: self.fixture.name.clone(),
            check,
            property,
            detail,
        });
    }

    fn result(&mut self, check: &'static str, property: &'static str, r: Result<String, String>) {
        match r {
            Ok(detail) => self.push(check, property, Status::Pass, detail),
            Err(detail) => self.push(check, property, Status::Fail, detail),
        }
    }
}

pub fn run(suite: Suite, fixtures: &[Fixture], opts: &Options) -> Vec<Check> {
    let suites: Vec<Suite> = if suite == Suite::All { Suite::EACH.to_vec() } else { vec![suite] };
    let mut checks = Vec::new();
    for fixture in fixtures {
        let quantum = cache::quantum_roots(&fixture.datum, opts.cache.as_deref()).map_err(|e| e.to_string());
        for &s in &suites {
            let mut ctx = Ctx { suite: s, fixture, checks: &mut checks };
            let q = match &quantum {
                Ok(q) => q,
                Err(e) => {
                    ctx.push("enumeration", "quantum roots enumerate within the bounds", Status::Fail, e.clone());
                    continue;
                }
            };
            match s {
                Suite::Ade => ade(&mut ctx, q),
                Suite::SimpleOnly => simple_only(&mut ctx, q),
                Suite::AffineA => affine_a(&mut ctx, q),
                Suite::Bound => bound(&mut ctx, q),
                Suite::Grading => grading(&mut ctx, q, opts),
                Suite::Classification => classification(&mut ctx, q, opts),
                Suite::ExplicitCovers => explicit_covers(&mut ctx, q, opts),
                Suite::All => unreachable!(),
            }
        }
    }
    checks
}

fn coroots(q: &QuantumSet) -> BTreeSet<Vec<i64>> {
    q.iter().map(|(r, _)| r.coroot_coords().to_vec()).collect()
}

fn off_diagonal(gcm: &Gcm) -> impl Iterator<Item = i64> + '_ {
    let n = gcm.rank();
    (0..n).flat_map(move |i| (0..n).filter(move |&j| j != i).map(move |j| gcm.entry(i, j)))
}

fn compare(got: &BTreeSet<Vec<i64>>, want: &BTreeSet<Vec<i64>>) -> Result<String, String> {
    if got == want {
        Ok(format!("{} roots", got.len()))
    } else {
        let extra: Vec<_> = got.difference(want).take(3).collect();
        let missing: Vec<_> = want.difference(got).take(3).collect();
        Err(format!("{} vs {} roots; unexpected {extra:?}; missing {missing:?}", got.len(), want.len()))
    }
}

fn ade(ctx: &mut Ctx, q: &QuantumSet) {
    const PROPERTY: &str = "finite simply-laced: quantum roots are all positive roots";
    let d = &ctx.fixture.datum;
    let gcm = d.gcm();
    if !gcm.is_finite_type() || off_diagonal(gcm).any(|a| a < -1) {
        ctx.push("quantum-equals-positive", PROPERTY, Status::Skip, "not finite simply-laced".into());
        return;
    }
    let r = roots::enumerate_real_roots(d, 64, 100_000)
        .map_err(|e| e.to_string())
        .and_then(|all| compare(&coroots(q), &all.iter().map(|(r, _)| r.coroot_coords().to_vec()).collect()));
    ctx.result("quantum-equals-positive", PROPERTY, r);
}

fn simple_only(ctx: &mut Ctx, q: &QuantumSet) {
    const PROPERTY: &str = "no entry equal to -1: quantum roots are the simple roots";
    let d = &ctx.fixture.datum;
    if off_diagonal(d.gcm()).any(|a| a == -1) {
        ctx.push("quantum-equals-simple", PROPERTY, Status::Skip, "some entry equals -1".into());
        return;
    }
    let n = d.rank();
    let simple = (0..n).map(|i| RealRoot::simple(n, i).coroot_coords().to_vec()).collect();
    let r = compare(&coroots(q), &simple);
    ctx.result("quantum-equals-simple", PROPERTY, r);
}

/// The vertices of a cycle in cyclic order, when the matrix is that of a
/// cycle of length at least 3 with all edges `-1`.
fn cycle_order(gcm: &Gcm) -> Option<Vec<usize>> {
    let n = gcm.rank();
    if n < 3 || off_diagonal(gcm).any(|a| a != 0 && a != -1) {
        return None;
    }
    let nbrs: Vec<Vec<usize>> = (0..n).map(|i| (0..n).filter(|&j| j != i && gcm.entry(i, j) == -1).collect()).collect();
    if nbrs.iter().any(|v| v.len() != 2) {
        return None;
    }
    let mut order = vec![0, nbrs[0][0]];
    while order.len() < n {
        let (prev, cur) = (order[order.len() - 2], order[order.len() - 1]);
        let next = if nbrs[cur][0] == prev { nbrs[cur][1] } else { nbrs[cur][0] };
        if next == 0 {
            return None;
        }
        order.push(next);
    }
    (nbrs[*order.last()?].contains(&0)).then_some(order)
}

fn affine_a(ctx: &mut Ctx, q: &QuantumSet) {
    const PROPERTY: &str = "cyclic type A: quantum roots are the arcs of at most n consecutive vertices";
    let d = &ctx.fixture.datum;
    let Some(order) = cycle_order(d.gcm()) else {
        ctx.push("arc-family", PROPERTY, Status::Skip, "not a cycle with -1 edges".into());
        return;
    };
    let size = order.len();
    let mut arcs = BTreeSet::new();
    for start in 0..size {
        for len in 1..size {
            let mut c = vec![0i64; size];
            for k in 0..len {
                c[order[(start + k) % size]] = 1;
            }
            arcs.insert(c);
        }
    }
    let r = compare(&coroots(q), &arcs);
    ctx.result("arc-family", PROPERTY, r);
}

fn bound(ctx: &mut Ctx, q: &QuantumSet) {
    let n = ctx.fixture.datum.rank();
    let count = q.len() as u128;
    let r = if count <= count_bound(n) {
        Ok(format!("{count} <= {}", count_bound(n)))
    } else {
        Err(format!("{count} > {}", count_bound(n)))
    };
    ctx.result("count", "the number of quantum roots is at most n^(n+5)", r);
    let max = q.iter().flat_map(|(r, _)| r.coroot_coords().iter().copied()).max().unwrap_or(0);
    let cap = coefficient_bound(n);
    let r = if max <= cap { Ok(format!("{max} <= {cap}")) } else { Err(format!("{max} > {cap}")) };
    ctx.result("coefficients", "coroot coefficients of quantum roots are at most max(6, n+1)", r);
}

fn random_word(d: &RootDatum, rng: &mut ChaCha8Rng, max_len: usize) -> WeylElement {
    let len = rng.gen_range(0..=max_len);
    let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..d.rank())).collect();
    WeylElement::reduce_word(d, &w)
}

/// `ϖ^{v(λ)} w` with `λ` dominant, pairings in `0..=2`, and short `v`, `w`.
fn random_element(g: &AffineSemigroup, rng: &mut ChaCha8Rng) -> Result<AffineElement, AffineError> {
    let d = g.datum();
    let pairings: Vec<i64> = (0..d.rank()).map(|_| rng.gen_range(0..=2)).collect();
    let lambda = d.coweight_from_pairings(&pairings)?;
    let v = random_word(d, rng, 3);
    let w = random_word(d, rng, 3);
    g.element(v.act_on_coweight(d, &lambda), w)
}

fn semigroup<'a>(d: &'a RootDatum, q: &QuantumSet, opts: &Options, gap: usize) -> AffineSemigroup<'a> {
    let budget = opts.budget.unwrap_or_else(|| default_budget(gap));
    AffineSemigroup::with_quantum_roots(d, budget, q.iter().map(|(r, _)| r.clone()).collect())
}

const SAMPLES: usize = 10;
const MAX_GAP: usize = 4;

fn grading(ctx: &mut Ctx, q: &QuantumSet, opts: &Options) {
    const COVERS: &str = "every cover raises the length by exactly one";
    const INTERVALS: &str = "intervals are finite and graded by the length";
    let d = &ctx.fixture.datum;
    let g = semigroup(d, q, opts, MAX_GAP);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut covers_seen = 0;
    let mut nodes_seen = 0;
    let mut covers_result = Ok(());
    let mut interval_result = Ok(());
    for _ in 0..SAMPLES {
        let outcome = (|| -> Result<(), String> {
            let x = random_element(&g, &mut rng).map_err(|e| e.to_string())?;
            let mut y = x.clone();
            for _ in 0..rng.gen_range(1..=MAX_GAP) {
                let c = g.covers(&y).map_err(|e| e.to_string())?;
                covers_seen += c.len();
                if let Some(bad) = c.iter().find(|z| z.length() != y.length() + 1) {
                    covers_result = Err(format!("{bad:?} listed as a cover of {y:?}"));
                }
                if c.is_empty() {
                    covers_result = Err(format!("{y:?} has no cover"));
                    break;
                }
                y = c[rng.gen_range(0..c.len())].clone();
            }
            let iv = g.interval(&x, &y).map_err(|e| e.to_string())?;
            nodes_seen += iv.nodes.len();
            if !iv.nodes.contains(&x) || !iv.nodes.contains(&y) {
                return Err(format!("[{x:?}, {y:?}] misses an endpoint"));
            }
            for &(a, b) in &iv.edges {
                if iv.nodes[b].length() != iv.nodes[a].length() + 1 {
                    return Err(format!("edge {:?} -> {:?} skips a length", iv.nodes[a], iv.nodes[b]));
                }
            }
            for (i, z) in iv.nodes.iter().enumerate() {
                if *z != x && !iv.edges.iter().any(|&(_, b)| b == i) {
                    return Err(format!("{z:?} has no lower neighbour in [{x:?}, {y:?}]"));
                }
                if *z != y && !iv.edges.iter().any(|&(a, _)| a == i) {
                    return Err(format!("{z:?} has no upper neighbour in [{x:?}, {y:?}]"));
                }
            }
            Ok(())
        })();
        if let Err(e) = outcome {
            interval_result = Err(e);
            break;
        }
    }
    let covers_result = covers_result.map(|()| format!("{covers_seen} covers over {SAMPLES} walks"));
    ctx.result("cover-lengths", COVERS, covers_result);
    let interval_result = interval_result.map(|()| format!("{SAMPLES} intervals, {nodes_seen} nodes"));
    ctx.result("interval-grading", INTERVALS, interval_result);
}

/// A random nested sequence with nonempty levels.
fn random_sequence(n: usize, rng: &mut ChaCha8Rng) -> DynkinSequence {
    let full = (1u64 << n) - 1;
    let mut levels = vec![rng.gen_range(1..=full)];
    while levels.len() < 6 && rng.gen_bool(0.6) {
        let last = *levels.last().expect("nonempty");
        let next = rng.gen_range(0..=full) & last;
        if next == 0 {
            break;
        }
        levels.push(next);
    }
    DynkinSequence::from_levels(levels)
}

const RANDOM_SEQUENCES: usize = 300;

fn classification(ctx: &mut Ctx, q: &QuantumSet, opts: &Options) {
    const FORWARD: &str = "the sequence of every quantum root is accepted and rebuilds the root";
    const CONVERSE: &str = "accepted sequences are realized by quantum roots, rejected ones by none";
    let d = &ctx.fixture.datum;
    let forward = q
        .iter()
        .try_for_each(|(beta, _)| {
            let s = dynkin_sequence(beta);
            let rec = construct_from_sequence(d, &s).map_err(|e| format!("{:?}: {e}", beta.coroot_coords()))?;
            if rec.root == *beta {
                Ok(())
            } else {
                Err(format!("{:?} rebuilt as {:?}", beta.coroot_coords(), rec.root.coroot_coords()))
            }
        })
        .map(|()| format!("{} roots", q.len()));
    ctx.result("forward", FORWARD, forward);
    let set = coroots(q);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut accepted = 0;
    let mut converse = Ok(());
    for _ in 0..RANDOM_SEQUENCES {
        let s = random_sequence(d.rank(), &mut rng);
        let coroot = s.coroot(d.rank());
        match classify_sequence(d, &s) {
            Ok(_) => {
                accepted += 1;
                match construct_from_sequence(d, &s) {
                    Ok(rec) if is_quantum_by_definition(d, &rec.root) && set.contains(&coroot) => {}
                    Ok(_) => converse = Err(format!("{s:?} accepted but its root is not quantum")),
                    Err(e) => converse = Err(format!("{s:?}: {e}")),
                }
            }
            Err(_) if set.contains(&coroot) => converse = Err(format!("{s:?} rejected but quantum")),
            Err(_) => {}
        }
        if converse.is_err() {
            break;
        }
    }
    let converse = converse.map(|()| format!("{RANDOM_SEQUENCES} sequences, {accepted} accepted"));
    ctx.result("converse", CONVERSE, converse);
}

const EXPLICIT_SAMPLES: usize = 5;
const EXPLICIT_TRIES: usize = 200;

fn explicit_covers(ctx: &mut Ctx, q: &QuantumSet, opts: &Options) {
    const PROPERTY: &str = "explicit pairs attached to quantum roots are covers";
    let d = &ctx.fixture.datum;
    let g = semigroup(d, q, opts, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut made = 0;
    let r = (|| -> Result<(), String> {
        for (beta, _) in q {
            for variant in [ExplicitVariant::One, ExplicitVariant::Two] {
                let mut ok = 0;
                for _ in 0..EXPLICIT_TRIES {
                    let pairings: Vec<i64> = (0..d.rank())
                        .map(|i| 1.max(1 - coroot_pairing(d, beta, i)) + rng.gen_range(0..=1))
                        .collect();
                    let lambda = d.coweight_from_pairings(&pairings).map_err(|e| e.to_string())?;
                    let v = random_word(d, &mut rng, 2);
                    let w = random_word(d, &mut rng, 2);
                    match g.explicit_cover_up(beta, &lambda, &v, &w, variant) {
                        Ok(_) => ok += 1,
                        Err(AffineError::PreconditionFailed(_)) => continue,
                        Err(e) => return Err(format!("{:?} {variant:?}: {e}", beta.coroot_coords())),
                    }
                    if ok == EXPLICIT_SAMPLES {
                        break;
                    }
                }
                if ok < EXPLICIT_SAMPLES {
                    return Err(format!(
                        "{:?} {variant:?}: only {ok} samples met the preconditions",
                        beta.coroot_coords()
                    ));
                }
                made += ok;
            }
        }
        Ok(())
    })();
    ctx.result("explicit-covers", PROPERTY, r.map(|()| format!("{made} verified covers")));
}
