//! The acceptance criteria as runnable checks, shared by the test suite and
//! the `verify` command. Every check is exact and seeded.

pub mod oracles;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::automorphisms::{random_composite, Automorphism, Side};
use crate::error::Error;
use crate::graphprod::{
    classify_virtually_abelian, gp_invert, gp_multiply, gp_pipeline_qm, join_decompose,
    normal_form, GPWord, VertexGraph,
};
use crate::norms::{
    acl_upper, bfs_norm, cl_upper, orbit_closure, prop32_bound, sacl_estimate,
    transvection_witness, AclSearch, Factor,
};
use crate::quasimorphisms::{
    brooks_defect_bound, check_invariance, defect_enumerate, homogenise_numeric, product_average,
    signed_permutation_group, Quasimorphism, Rational,
};
use crate::whitehead::{in_proper_free_factor, is_primitive, whitehead_graph, DEFAULT_LEVEL_LIMIT};
use crate::words::Word;

pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed_ms: u128,
    pub limit_ms: u128,
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {:<24} {:>8} ms (limit {} ms)  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.elapsed_ms,
            self.limit_ms,
            self.detail
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Lemma23,
    Prop37,
    Lemma63,
    Section5,
    Whitehead,
    NormalForm,
}

impl Suite {
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::All => (1..=13).collect(),
            Suite::Lemma23 => vec![1],
            Suite::Prop37 => vec![2, 10],
            Suite::Lemma63 => vec![5, 6, 7],
            Suite::Section5 => vec![9, 12],
            Suite::Whitehead => vec![8],
            Suite::NormalForm => vec![11],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(match s {
            "all" => Suite::All,
            "lemma23" => Suite::Lemma23,
            "prop37" => Suite::Prop37,
            "lemma63" => Suite::Lemma63,
            "section5" => Suite::Section5,
            "whitehead" => Suite::Whitehead,
            "normalform" => Suite::NormalForm,
            other => return Err(Error::InvalidParameter(format!("unknown suite `{other}`"))),
        })
    }
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(Failure(format!($($msg)*)));
        }
    };
}

type Check = fn(&mut ChaCha8Rng) -> Outcome;

const CRITERIA: [(&str, u64, Check); 13] = [
    ("ad-equivariance", 10, ad_equivariance),
    ("autocommutator-transport", 10, autocommutator_transport),
    ("homogenisation-bound", 300, homogenisation_bound),
    ("conjugation-invariance", 10, conjugation_invariance),
    ("acl-of-basis-letter", 1, acl_of_basis_letter),
    ("achiral-commutator", 30, achiral_commutator),
    ("free-factor-powers", 10, free_factor_powers),
    ("whitehead", 120, whitehead_suite),
    ("product-average", 120, product_average_suite),
    ("finite-average", 180, finite_average_suite),
    ("graph-products", 300, graph_products),
    ("pipeline", 60, pipeline),
    ("acl-below-cl", 300, acl_below_cl),
];

pub fn criterion_name(id: u8) -> Option<&'static str> {
    CRITERIA.get(usize::from(id).checked_sub(1)?).map(|c| c.0)
}

pub fn run_criterion(id: u8, seed: u64) -> CriterionReport {
    let (name, limit_s, check) = CRITERIA[usize::from(id) - 1];
    let mut rng = ChaCha8Rng::seed_from_u64(
        seed.wrapping_add(u64::from(id).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
    );
    let start = Instant::now();
    let outcome = check(&mut rng);
    let elapsed = start.elapsed();
    let limit = Duration::from_secs(limit_s);
    let (passed, detail) = match outcome {
        Ok(d) if elapsed <= limit => (true, d),
        Ok(d) => (false, format!("too slow: {d}")),
        Err(Failure(d)) => (false, d),
    };
    CriterionReport {
        id,
        name,
        passed,
        detail,
        elapsed_ms: elapsed.as_millis(),
        limit_ms: limit.as_millis(),
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Vec<CriterionReport> {
    suite
        .criteria()
        .into_iter()
        .map(|id| run_criterion(id, seed))
        .collect()
}

fn word(rng: &mut ChaCha8Rng, rank: usize, min: usize, max: usize) -> Word {
    let n = rng.gen_range(min..=max);
    Word::random(rng, rank, n)
}

fn parse(s: &str) -> Word {
    crate::notation::parse_word(s, 2).expect("valid literal")
}

fn ad_equivariance(rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for rank in [2, 3] {
        for _ in 0..100 {
            let depth = rng.gen_range(0..=6);
            let phi = random_composite(rng, rank, depth);
            let g = word(rng, rank, 0, 20);
            let lhs = Automorphism::ad(&phi.apply(&g)?);
            let rhs = phi.conjugate(&Automorphism::ad(&g))?;
            ensure!(lhs == rhs, "fails for φ = {}, g = {g}", phi.witness());
            n += 1;
        }
    }
    Ok(format!("{n} pairs in ranks 2 and 3"))
}

fn autocommutator_transport(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..200 {
        let rank = 2 + i % 2;
        let (dp, dq) = (rng.gen_range(0..=6), rng.gen_range(0..=6));
        let psi = random_composite(rng, rank, dp);
        let phi = random_composite(rng, rank, dq);
        let g = word(rng, rank, 0, 20);
        let lhs = psi.apply(&phi.autocommutator(&g)?)?;
        let rhs = psi.conjugate(&phi)?.autocommutator(&psi.apply(&g)?)?;
        ensure!(
            lhs == rhs,
            "fails for ψ = {}, φ = {}, g = {g}",
            psi.witness(),
            phi.witness()
        );
    }
    Ok("200 triples".into())
}

fn homogenisation_bound(rng: &mut ChaCha8Rng) -> Outcome {
    let mut worst = Rational::zero();
    for _ in 0..50 {
        let w = word(rng, 2, 1, 4);
        let g = word(rng, 2, 1, 12);
        let f = Quasimorphism::brooks(&w)?;
        let h = Quasimorphism::brooks_homogeneous(&w)?;
        let exact = h.evaluate(&g)?;
        let naive = oracles::brooks_homogeneous(g.letters(), w.letters());
        ensure!(
            exact == Rational::from_integer(naive),
            "homogeneous value {exact} on {g} for pattern {w}, oracle {naive}"
        );
        let b = brooks_defect_bound(w.len());
        for n in [8u32, 16, 32, 64] {
            let est = homogenise_numeric(&f, &g, n)?;
            let gap = (est.estimate - exact).abs();
            let allowed = b / Rational::from_integer(i64::from(n));
            ensure!(
                gap <= allowed,
                "pattern {w}, g = {g}, N = {n}: gap {gap} > {allowed}"
            );
            worst = worst.max(gap * Rational::from_integer(i64::from(n)) / b);
        }
    }
    let mut gate_max = Rational::zero();
    let patterns: Vec<Word> = Word::enumerate(2, 4)
        .into_iter()
        .filter(|w| !w.is_empty())
        .collect();
    for w in &patterns {
        let f = Quasimorphism::brooks(w)?;
        let cert = defect_enumerate(&f, 8)?;
        let b = brooks_defect_bound(w.len());
        ensure!(
            cert.value <= b,
            "pattern {w}: enumerated defect {} > {b}",
            cert.value
        );
        gate_max = gate_max.max(cert.value / b);
    }
    Ok(format!(
        "worst N·gap/B = {worst}; L = 8 gate over {} patterns, worst defect/B = {gate_max}",
        patterns.len()
    ))
}

fn conjugation_invariance(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..200 {
        let w = word(rng, 2, 1, 4);
        let g = word(rng, 2, 0, 12);
        let c = word(rng, 2, 0, 8);
        let f = Quasimorphism::brooks_homogeneous(&w)?;
        let x = f.evaluate(&g)?;
        let y = f.evaluate(&g.conjugate_by(&c)?)?;
        ensure!(
            x == y,
            "pattern {w}: f({g}) = {x} but conjugate by {c} gives {y}"
        );
    }
    Ok("200 conjugate pairs".into())
}

fn acl_of_basis_letter(_: &mut ChaCha8Rng) -> Outcome {
    let a = parse("a");
    let r = acl_upper(&a, &AclSearch::default());
    ensure!(r.finite() == Some(1), "acl_upper(a) = {:?}", r.value);
    ensure!(r.verifies(&a), "witness does not replay to a");
    let expected = Automorphism::transvection(2, 2, 1, Side::Left)?;
    match &r.witness.as_deref() {
        Some([Factor::Autocommutator { auto, word }]) => {
            ensure!(
                *auto == expected && *word == parse("b"),
                "unexpected witness [{}, {word}]",
                auto.witness()
            );
        }
        other => return Err(Failure(format!("unexpected witness {other:?}"))),
    }
    Ok("acl(a) = 1 via [b ↦ ab, b]".into())
}

fn achiral_commutator(_: &mut ChaCha8Rng) -> Outcome {
    let c = parse("abAB");
    let swap = Automorphism::transposition(2, 1, 2)?;
    for n in 1..=8 {
        let lhs = swap.autocommutator(&c.power(-n))?;
        ensure!(lhs == c.power(2 * n), "[swap, [a,b]^-{n}] = {lhs}");
    }
    sacl_upper_at_most(&c, Rational::new(1, 16))
}

fn free_factor_powers(_: &mut ChaCha8Rng) -> Outcome {
    let a = parse("a");
    for n in 1..=8 {
        let (phi, x) = transvection_witness(&a, 2, n)?;
        ensure!(
            phi.autocommutator(&x)? == a.power(n),
            "transvection witness fails at n = {n}"
        );
    }
    sacl_upper_at_most(&a, Rational::new(1, 16))
}

fn sacl_upper_at_most(g: &Word, bound: Rational) -> Outcome {
    let est = sacl_estimate(g, 16, &AclSearch::default(), &[])?;
    for t in &est.trace {
        if t.acl.finite().is_some() {
            ensure!(
                t.acl.verifies(&g.power(i64::from(t.n))),
                "witness for n = {} does not replay",
                t.n
            );
        }
    }
    let upper = est
        .upper
        .ok_or_else(|| Failure("no power factorized".into()))?;
    ensure!(upper <= bound, "sacl upper bound {upper} > {bound}");
    Ok(format!("sacl({g}) <= {upper}"))
}

fn whitehead_suite(_: &mut ChaCha8Rng) -> Outcome {
    for (w, expected) in [("a", true), ("ab", true), ("abb", true)]
        .into_iter()
        .chain([("aa", false), ("abAB", false), ("aabb", false)])
    {
        ensure!(
            is_primitive(&parse(w))? == expected,
            "is_primitive({w}) != {expected}"
        );
    }
    let c = parse("abAB");
    ensure!(
        !in_proper_free_factor(&c, DEFAULT_LEVEL_LIMIT)?,
        "[a,b] reported in a free factor"
    );
    let graph = whitehead_graph(&c)?;
    ensure!(
        graph.connected && !graph.has_cut_vertex && graph.certifies_not_in_free_factor(),
        "Whitehead graph of [a,b] does not certify"
    );
    ensure!(
        in_proper_free_factor(&parse("b"), DEFAULT_LEVEL_LIMIT)?,
        "b not in a free factor"
    );

    let all = oracles::reduced_words(6);
    let mut checked = 0;
    for letters in all.iter().filter(|w| !w.is_empty()) {
        let w = Word::reduce(letters.iter().copied(), 2)?;
        let prim = is_primitive(&w)?;
        ensure!(
            prim == oracles::primitive_f2(letters, &all),
            "is_primitive({w}) = {prim} disagrees with the commutator oracle"
        );
        let ff = in_proper_free_factor(&w, DEFAULT_LEVEL_LIMIT)?;
        ensure!(
            ff == oracles::in_proper_free_factor_f2(letters, &all),
            "in_proper_free_factor({w}) = {ff} disagrees with the root oracle"
        );
        if whitehead_graph(&w.cyclic_reduce().0.to_word())?.certifies_not_in_free_factor() {
            ensure!(!ff, "certificate contradicts the orbit search on {w}");
        }
        checked += 1;
    }
    Ok(format!("fixed examples and {checked} words of length <= 6"))
}

fn product_average_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let f = Quasimorphism::brooks_homogeneous(&parse("aab"))?;
    let big = product_average(&f, 3, 3)?;
    let e = Word::identity(2);
    for _ in 0..100 {
        let h = word(rng, 2, 0, 12);
        ensure!(
            big.evaluate(&[h.clone(), e.clone(), e.clone()])? == f.evaluate(&h)?,
            "restriction differs at {h}"
        );
    }
    let perms = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    for _ in 0..100 {
        let t: Vec<Word> = (0..3).map(|_| word(rng, 2, 0, 10)).collect();
        let v = big.evaluate(&t)?;
        for p in perms {
            let moved: Vec<Word> = p.iter().map(|&i| t[i].clone()).collect();
            ensure!(big.evaluate(&moved)? == v, "not invariant under {p:?}");
        }
    }
    let mut details = Vec::new();
    for pattern in ["ab", "bA"] {
        let f = Quasimorphism::brooks(&parse(pattern))?;
        let d = f.defect_bound().ok_or(Error::UnknownDefect)?;
        for (k, len) in [(2usize, 2usize), (3, 1)] {
            let cert = defect_enumerate(&f, len)?;
            let p = product_average(&f, k, k)?;
            let (value, _, _) = p.defect_enumerate(len, 100_000_000)?;
            let kk = Rational::from_integer(k as i64);
            ensure!(value <= kk * d, "{pattern}, k = {k}: defect {value} > k·B");
            ensure!(
                value == kk * cert.value,
                "{pattern}, k = {k}: defect {value} != k × {}",
                cert.value
            );
            let (g, h) = cert
                .witness
                .clone()
                .ok_or_else(|| Failure("no witness".into()))?;
            let combined = p.defect_at(&vec![g; k], &vec![h; k])?;
            ensure!(
                combined == value,
                "combined witness gives {combined}, not {value}"
            );
            details.push(format!("{pattern} k={k} L={len}: {value}"));
        }
    }
    Ok(details.join("; "))
}

fn finite_average_suite(rng: &mut ChaCha8Rng) -> Outcome {
    let group = signed_permutation_group(2);
    ensure!(
        group.len() == 8,
        "signed permutation group has order {}",
        group.len()
    );
    let f = Quasimorphism::brooks_homogeneous(&parse("aaba"))?.finite_average(&group)?;
    let d = f.defect_bound().ok_or(Error::UnknownDefect)?;
    let samples: Vec<Word> = (0..200).map(|_| word(rng, 2, 0, 12)).collect();
    let report = check_invariance(&f, &group, &samples)?;
    ensure!(
        report.is_invariant(),
        "violations: {:?}",
        report.violations.first()
    );

    let set = [parse("a"), parse("b")];
    let closure = orbit_closure(&set, &group)?;
    let special = parse("aabaBB");
    let mut positive = 0;
    for i in 0..100 {
        let g = if i % 4 == 0 {
            special.clone()
        } else {
            word(rng, 2, 0, 6)
        };
        let norm = bfs_norm(&g, &closure, 6)?;
        let n = norm
            .finite()
            .ok_or_else(|| Failure(format!("no norm <= 6 for {g}")))?;
        let bound = prop32_bound(&f, &set, &g)?;
        ensure!(
            bound <= Rational::from_integer(n as i64),
            "bound {bound} exceeds norm {n} at {g}"
        );
        if bound > Rational::zero() {
            positive += 1;
        }
    }
    for _ in 0..200 {
        let phi = group.choose(rng).expect("nonempty");
        let g = word(rng, 2, 0, 12);
        let v = f.evaluate(&phi.autocommutator(&g)?)?.abs();
        ensure!(v <= d, "|f([φ, {g}])| = {v} > {d}");
    }
    Ok(format!("D = {d}; {positive} of 100 norm bounds nonzero"))
}

fn random_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> Arc<VertexGraph> {
    let n = rng.gen_range(1..=max_vertices);
    let labels: Vec<u32> = (0..n)
        .map(|_| *[0, 2, 3, 4].choose(rng).expect("nonempty"))
        .collect();
    let edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    Arc::new(VertexGraph::new(labels, &edges).expect("valid graph"))
}

/// Applies one defining relation of the graph product somewhere in `raw`.
fn rewrite(rng: &mut ChaCha8Rng, g: &VertexGraph, raw: &mut Vec<(usize, i64)>) {
    match rng.gen_range(0..4) {
        0 => {
            let v = rng.gen_range(0..g.len());
            let e = rng.gen_range(1..=3);
            let p = rng.gen_range(0..=raw.len());
            raw.splice(p..p, [(v, e), (v, -e)]);
        }
        1 => {
            let swappable: Vec<usize> = (1..raw.len())
                .filter(|&i| raw[i - 1].0 != raw[i].0 && g.adjacent(raw[i - 1].0, raw[i].0))
                .collect();
            if let Some(&i) = swappable.choose(rng) {
                raw.swap(i - 1, i);
            }
        }
        2 => {
            if let Some(s) = raw.choose_mut(rng) {
                let m = i64::from(g.label(s.0));
                s.1 += m * [-1, 1].choose(rng).expect("nonempty");
            }
        }
        _ => {
            if !raw.is_empty() {
                let i = rng.gen_range(0..raw.len());
                let (v, e) = raw[i];
                let part = rng.gen_range(-3..=3);
                raw.splice(i..=i, [(v, part), (v, e - part)]);
            }
        }
    }
}

fn graph_products(rng: &mut ChaCha8Rng) -> Outcome {
    for _ in 0..10 {
        let g = random_graph(rng, 6);
        for _ in 0..100 {
            let len = rng.gen_range(0..=10);
            let mut raw: Vec<(usize, i64)> = (0..len)
                .map(|_| (rng.gen_range(0..g.len()), rng.gen_range(-4..=4)))
                .collect();
            let before = normal_form(&g, &raw)?;
            for _ in 0..3 {
                rewrite(rng, &g, &mut raw);
            }
            let after = normal_form(&g, &raw)?;
            ensure!(before == after, "relation changed {before} into {after}");
        }
    }

    let d = Arc::new(VertexGraph::new(vec![2, 2], &[])?);
    let mut seqs: Vec<Vec<usize>> = vec![Vec::new()];
    let mut frontier = seqs.clone();
    for _ in 0..8 {
        frontier = frontier
            .iter()
            .flat_map(|s| {
                (0..2).map(move |v| {
                    let mut t = s.clone();
                    t.push(v);
                    t
                })
            })
            .collect();
        seqs.extend(frontier.iter().cloned());
    }
    let mut to_model: HashMap<GPWord, oracles::Dihedral> = HashMap::new();
    let mut to_nf: HashMap<oracles::Dihedral, GPWord> = HashMap::new();
    for s in &seqs {
        let raw: Vec<(usize, i64)> = s.iter().map(|&v| (v, 1)).collect();
        let x = normal_form(&d, &raw)?;
        let m = s.iter().fold(oracles::Dihedral::ONE, |acc, &v| {
            acc * if v == 0 {
                oracles::Dihedral::U
            } else {
                oracles::Dihedral::V
            }
        });
        ensure!(
            *to_model.entry(x.clone()).or_insert(m) == m,
            "{x} maps to two model elements"
        );
        ensure!(
            *to_nf.entry(m).or_insert(x.clone()) == x,
            "{m:?} has two normal forms"
        );
    }
    ensure!(
        to_model.len() == 17,
        "ball of radius 8 has {} elements, not 17",
        to_model.len()
    );

    let mut graphs = 0;
    for n in 0..=5usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            let g = Arc::new(VertexGraph::new(vec![0; n], &edges)?);
            let dec = join_decompose(&g);
            let blocks = oracles::finest_join_partition(&g);
            let gamma0: Vec<usize> = blocks
                .iter()
                .filter(|b| b.len() == 1)
                .map(|b| b[0])
                .collect();
            let mut factors: Vec<Vec<usize>> = blocks.into_iter().filter(|b| b.len() > 1).collect();
            factors.sort();
            let mut ours = dec.factors.clone();
            ours.sort();
            let mut ours0 = dec.gamma0.clone();
            ours0.sort_unstable();
            ensure!(
                ours0 == gamma0 && ours == factors,
                "join decomposition differs on {:?}",
                edges
            );
            for f in &dec.factors {
                ensure!(
                    !oracles::is_nontrivial_join(&g, f),
                    "factor {f:?} is itself a join"
                );
            }
            graphs += 1;
        }
    }

    let mut labelled = 0;
    for n in 0..=3usize {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> k & 1 == 1)
                .map(|(_, &p)| p)
                .collect();
            for code in 0..3usize.pow(n as u32) {
                let labels: Vec<u32> = (0..n)
                    .map(|i| [0, 2, 3][code / 3usize.pow(i as u32) % 3])
                    .collect();
                let g = Arc::new(VertexGraph::new(labels.clone(), &edges)?);
                ensure!(
                    classify_virtually_abelian(&g) == oracles::hand_classify(&g),
                    "classifier disagrees on labels {labels:?}, edges {edges:?}"
                );
                labelled += 1;
            }
        }
    }
    let c4 = Arc::new(VertexGraph::new(
        vec![2; 4],
        &[(0, 1), (1, 2), (2, 3), (3, 0)],
    )?);
    ensure!(
        classify_virtually_abelian(&c4),
        "C4 with ℤ/2 labels not virtually abelian"
    );
    let f2 = Arc::new(VertexGraph::new(vec![0, 0], &[])?);
    ensure!(
        !classify_virtually_abelian(&f2),
        "free group classified virtually abelian"
    );
    Ok(format!(
        "1000 rewrites, D∞ ball of 17, {graphs} graphs joined, {labelled} labelled graphs classified"
    ))
}

/// K₁ ∗ (F₂ pair) ∗ (F₂ pair): vertex 0 central, pairs {1,2} and {3,4}.
pub fn pipeline_graph() -> Arc<VertexGraph> {
    let edges = [
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
    ];
    Arc::new(VertexGraph::new(vec![0; 5], &edges).expect("valid graph"))
}

fn pipeline(rng: &mut ChaCha8Rng) -> Outcome {
    let g = pipeline_graph();
    let d = join_decompose(&g);
    let ab = parse("ab");
    let f = Quasimorphism::brooks_homogeneous(&ab)?;
    let q = gp_pipeline_qm(&d, &[0, 1], &f)?;
    let rand_x = |rng: &mut ChaCha8Rng| {
        let n = rng.gen_range(0..=10);
        GPWord::random(&g, rng, n)
    };
    let oracle = |x: &GPWord| -> i64 {
        [[1usize, 2], [3, 4]]
            .iter()
            .map(|pair| {
                let letters: Vec<i32> = x
                    .syllables()
                    .iter()
                    .filter_map(|&(v, e)| {
                        pair.iter().position(|&p| p == v).map(|k| (k as i32 + 1, e))
                    })
                    .flat_map(|(l, e)| {
                        std::iter::repeat_n(l * e.signum() as i32, e.unsigned_abs() as usize)
                    })
                    .collect();
                oracles::brooks_homogeneous(&letters, &[1, 2])
            })
            .sum()
    };
    for k in -10..=10 {
        let z = normal_form(&g, &[(0, k)])?;
        ensure!(q.evaluate(&z)?.is_zero(), "nonzero on central element {z}");
    }
    for _ in 0..100 {
        let x = rand_x(rng);
        let z = normal_form(&g, &[(0, rng.gen_range(-5..=5))])?;
        let v = q.evaluate(&x)?;
        ensure!(
            v == Rational::from_integer(oracle(&x)),
            "value {v} at {x} disagrees with oracle"
        );
        ensure!(
            q.evaluate(&gp_multiply(&x, &z)?)? == v,
            "not constant on the H₀-coset of {x}"
        );
        ensure!(
            q.evaluate(&q.permute_factors(&x, &[1, 0])?)? == v,
            "swap changes value at {x}"
        );
        let c = rand_x(rng);
        let conj = gp_multiply(&gp_multiply(&c, &x)?, &gp_invert(&c))?;
        ensure!(
            q.evaluate(&conj)? == v,
            "conjugation by {c} changes value at {x}"
        );
    }
    for m in 1..=10 {
        let x = q.place(0, &ab.power(m))?;
        ensure!(
            q.evaluate(&x)? == Rational::from_integer(m),
            "value at (ab)^{m} is not {m}"
        );
    }
    Ok("100 samples; values m on (ab)^m".into())
}

fn acl_below_cl(rng: &mut ChaCha8Rng) -> Outcome {
    let params = AclSearch {
        pool_depth: 1,
        elem_len: 2,
        k_max: 2,
    };
    let mut done = 0;
    let mut tries = 0;
    while done < 30 {
        tries += 1;
        ensure!(
            tries <= 2000,
            "only {done} comparable products in 2000 tries"
        );
        let k = rng.gen_range(1..=2);
        let mut g = Word::identity(2);
        for _ in 0..k {
            let u = word(rng, 2, 1, 2);
            let v = word(rng, 2, 1, 2);
            g = g.multiply(&Word::commutator(&u, &v)?)?;
        }
        let cl = cl_upper(&g, 2, 2);
        let acl = acl_upper(&g, &params);
        let (Some(c), Some(a)) = (cl.finite(), acl.finite()) else {
            continue;
        };
        ensure!(
            cl.verifies(&g) && acl.verifies(&g),
            "witness for {g} does not replay"
        );
        ensure!(a <= c, "acl_upper({g}) = {a} > cl_upper = {c}");
        done += 1;
    }
    Ok(format!("30 products ({tries} drawn)"))
}
