//! Word norms: exact breadth-first norms over finite generating sets,
//! witness searches for autocommutator and commutator length, stable
//! autocommutator length estimates, and the lower bounds that invariant
//! quasimorphisms give for all of these.

use std::collections::{HashMap, HashSet};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::automorphisms::{composites_up_to, AutoWitness, Automorphism, Side};
use crate::error::{Error, Result};
use crate::quasimorphisms::{Quasimorphism, Rational};
use crate::words::Word;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormValue {
    Finite {
        value: usize,
    },
    /// The exact norm exceeds the cutoff.
    GreaterThanCutoff {
        cutoff: usize,
    },
    /// The element is not in the generated submonoid.
    Infinite,
    /// An upper-bound search found no factorization with at most `cap`
    /// factors. Says nothing about the true norm.
    NoWitnessWithin {
        cap: usize,
    },
}

/// One factor of a norm witness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Factor {
    Element { index: usize, word: Word },
    Autocommutator { auto: Automorphism, word: Word },
    Commutator { left: Word, right: Word },
}

impl Factor {
    pub fn value(&self) -> Result<Word> {
        match self {
            Factor::Element { word, .. } => Ok(word.clone()),
            Factor::Autocommutator { auto, word } => auto.autocommutator(word),
            Factor::Commutator { left, right } => Word::commutator(left, right),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormResult {
    pub value: NormValue,
    pub witness: Option<Vec<Factor>>,
}

impl NormResult {
    fn found(witness: Vec<Factor>) -> Self {
        NormResult {
            value: NormValue::Finite {
                value: witness.len(),
            },
            witness: Some(witness),
        }
    }

    fn without(value: NormValue) -> Self {
        NormResult {
            value,
            witness: None,
        }
    }

    pub fn finite(&self) -> Option<usize> {
        match self.value {
            NormValue::Finite { value } => Some(value),
            _ => None,
        }
    }

    /// Multiplies the witness out.
    pub fn replay(&self, rank: usize) -> Result<Option<Word>> {
        let Some(factors) = &self.witness else {
            return Ok(None);
        };
        let mut acc = Word::identity(rank);
        for f in factors {
            acc = acc.multiply(&f.value()?)?;
        }
        Ok(Some(acc))
    }

    /// A finite result whose witness has exactly that many factors and
    /// multiplies out to `g`.
    pub fn verifies(&self, g: &Word) -> bool {
        match (self.finite(), &self.witness) {
            (Some(k), Some(w)) => {
                w.len() == k && matches!(self.replay(g.rank()), Ok(Some(ref x)) if x == g)
            }
            _ => false,
        }
    }
}

/// `{α(s) : α ∈ A, s ∈ S}` without repeats, in order of first appearance.
pub fn orbit_closure(set: &[Word], group: &[Automorphism]) -> Result<Vec<Word>> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in set {
        for a in group {
            let x = a.apply(s)?;
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
    }
    Ok(out)
}

type Parents = HashMap<Word, (usize, Option<(Word, usize)>)>;

fn path_to(map: &Parents, mut w: Word) -> Vec<usize> {
    let mut out = Vec::new();
    while let Some((_, Some((prev, s)))) = map.get(&w) {
        out.push(*s);
        w = prev.clone();
    }
    out
}

/// Exact `|g|_S` (products of elements of `S`, no inverses added) when it
/// is at most `cutoff`, by bidirectional breadth-first search. Among
/// shortest factorizations the witness is lexicographically least by
/// generator index, over the meeting points found.
pub fn bfs_norm(g: &Word, set: &[Word], cutoff: usize) -> Result<NormResult> {
    if set.is_empty() {
        return Err(Error::InvalidParameter("generating set is empty".into()));
    }
    if let Some(s) = set.iter().find(|s| s.rank() != g.rank()) {
        return Err(Error::RankMismatch {
            left: g.rank(),
            right: s.rank(),
        });
    }
    if g.is_empty() {
        return Ok(NormResult::found(Vec::new()));
    }
    let rank = g.rank();
    let inverses: Vec<Word> = set.iter().map(Word::invert).collect();
    let start = Word::identity(rank);
    let mut fwd: Parents = HashMap::from([(start.clone(), (0, None))]);
    let mut bwd: Parents = HashMap::from([(g.clone(), (0, None))]);
    let mut fwd_frontier = vec![start];
    let mut bwd_frontier = vec![g.clone()];
    let (mut i, mut j) = (0usize, 0usize);
    loop {
        if i + j >= cutoff {
            return Ok(NormResult::without(NormValue::GreaterThanCutoff { cutoff }));
        }
        let forward = fwd_frontier.len() <= bwd_frontier.len();
        let (frontier, map, other, step) = if forward {
            (&mut fwd_frontier, &mut fwd, &bwd, set)
        } else {
            (&mut bwd_frontier, &mut bwd, &fwd, &inverses[..])
        };
        if frontier.is_empty() {
            return Ok(NormResult::without(NormValue::Infinite));
        }
        let depth = if forward { i + 1 } else { j + 1 };
        let mut next = Vec::new();
        let mut hits = Vec::new();
        for u in frontier.iter() {
            for (k, s) in step.iter().enumerate() {
                let v = u * s;
                if map.contains_key(&v) {
                    continue;
                }
                map.insert(v.clone(), (depth, Some((u.clone(), k))));
                if other.contains_key(&v) {
                    hits.push(v.clone());
                }
                next.push(v);
            }
        }
        *frontier = next;
        if forward {
            i += 1;
        } else {
            j += 1;
        }
        if !hits.is_empty() {
            let best = hits
                .into_iter()
                .map(|m| {
                    let mut seq = path_to(&fwd, m.clone());
                    seq.reverse();
                    seq.extend(path_to(&bwd, m));
                    seq
                })
                .min()
                .expect("nonempty");
            debug_assert_eq!(best.len(), i + j);
            let witness = best
                .into_iter()
                .map(|k| Factor::Element {
                    index: k,
                    word: set[k].clone(),
                })
                .collect();
            return Ok(NormResult::found(witness));
        }
    }
}

/// Parameters of the autocommutator factorization search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AclSearch {
    /// Composites of at most this many elementary automorphisms.
    pub pool_depth: usize,
    /// Bound on `|h|` in `[φ, h]` and on `|u|` for inner automorphisms `ad(u)`.
    pub elem_len: usize,
    /// Largest number of factors tried.
    pub k_max: usize,
}

impl Default for AclSearch {
    fn default() -> Self {
        AclSearch {
            pool_depth: 1,
            elem_len: 2,
            k_max: 2,
        }
    }
}

/// A finite, ordered, value-deduplicated list of candidate factors.
struct FactorPool {
    factors: Vec<(Word, Factor)>,
    index: HashMap<Word, usize>,
}

impl FactorPool {
    fn new() -> Self {
        FactorPool {
            factors: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn push(&mut self, value: Word, factor: Factor) {
        if value.is_empty() || self.index.contains_key(&value) {
            return;
        }
        self.index.insert(value.clone(), self.factors.len());
        self.factors.push((value, factor));
    }

    fn lookup(&self, g: &Word) -> Option<Factor> {
        self.index.get(g).map(|&i| self.factors[i].1.clone())
    }

    /// Least `k <= k_max` with `g` a product of `k` factors; the last factor
    /// may also come from `last`, the whole of `g` from `whole`.
    fn search(
        &self,
        g: &Word,
        k_max: usize,
        last: &dyn Fn(&Word) -> Option<Factor>,
        whole: &dyn Fn(&Word) -> Option<Factor>,
    ) -> NormResult {
        if g.is_empty() {
            return NormResult::found(Vec::new());
        }
        if k_max >= 1 {
            if let Some(f) = self.lookup(g).or_else(|| last(g)).or_else(|| whole(g)) {
                return NormResult::found(vec![f]);
            }
        }
        for k in 2..=k_max {
            let mut prefix = Vec::with_capacity(k);
            if let Some(w) = self.extend(g, k, &mut prefix, last) {
                return NormResult::found(w);
            }
        }
        NormResult::without(NormValue::NoWitnessWithin { cap: k_max })
    }

    fn extend(
        &self,
        rest: &Word,
        k: usize,
        prefix: &mut Vec<Factor>,
        last: &dyn Fn(&Word) -> Option<Factor>,
    ) -> Option<Vec<Factor>> {
        if k == 1 {
            if rest.is_empty() {
                return None;
            }
            let f = self.lookup(rest).or_else(|| last(rest))?;
            let mut out = prefix.clone();
            out.push(f);
            return Some(out);
        }
        for (value, factor) in &self.factors {
            let next = &value.invert() * rest;
            prefix.push(factor.clone());
            if let Some(w) = self.extend(&next, k - 1, prefix, last) {
                return Some(w);
            }
            prefix.pop();
        }
        None
    }
}

/// Automorphisms searched by [`acl_upper`]: elementary composites up to
/// `pool_depth` (identity excluded), then `ad(u)` for `0 < |u| <= elem_len`,
/// deduplicated by basis images.
pub fn acl_auto_pool(rank: usize, params: &AclSearch) -> Vec<Automorphism> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let composites = composites_up_to(rank, params.pool_depth)
        .into_iter()
        .map(|(_, a)| a);
    let inner = Word::enumerate(rank, params.elem_len)
        .into_iter()
        .map(|u| Automorphism::ad(&u));
    for a in composites.chain(inner) {
        if !a.is_identity() && seen.insert(a.clone()) {
            out.push(a);
        }
    }
    out
}

/// The automorphism `x ↦ g^n x` fixing the other basis letters, together
/// with `x`, so that `[φ, x] = g^n`. Requires the generator `x` not to occur
/// in `g`.
pub fn transvection_witness(g: &Word, x: usize, n: i64) -> Result<(Automorphism, Word)> {
    let rank = g.rank();
    if x == 0 || x > rank {
        return Err(Error::InvalidParameter(format!(
            "generator {x} out of range for rank {rank}"
        )));
    }
    if g.uses_generator(x) {
        return Err(Error::InvalidParameter(format!(
            "generator {x} occurs in {g}"
        )));
    }
    let letters = g.power(n).letters().to_vec();
    let factors = letters
        .iter()
        .rev()
        .map(|&m| AutoWitness::Transvection {
            target: x,
            multiplier: m,
            side: Side::Left,
        })
        .collect();
    let phi = AutoWitness::Composite { factors }.build(rank)?;
    Ok((phi, Word::letter(rank, x as i32)?))
}

fn free_factor_witness(g: &Word) -> Option<Factor> {
    let x = (1..=g.rank()).find(|&x| !g.uses_generator(x))?;
    let (auto, word) = transvection_witness(g, x, 1).ok()?;
    Some(Factor::Autocommutator { auto, word })
}

fn power_family_witness(g: &Word, pool: &[Automorphism]) -> Option<Factor> {
    let (core, conj) = g.cyclic_reduce();
    let (root, m) = core.root();
    // the canonical rotation of root^m is the m-th power of the root's
    let root = root.to_word();
    let m = m as i64;
    let js = (1..=m).flat_map(|j| [-j, j]);
    for a in pool {
        for j in js.clone() {
            let h = root.power(j).conjugate_by(&conj).ok()?;
            if a.autocommutator(&h).ok()? == *g {
                return Some(Factor::Autocommutator {
                    auto: a.clone(),
                    word: h,
                });
            }
        }
    }
    None
}

/// Upper bound on autocommutator length by explicit factorization.
///
/// Candidate factors are `[φ, h]` for `φ` in [`acl_auto_pool`] and
/// `|h| <= elem_len`, in pool order. The last factor may also be a
/// free-factor transvection witness (when it omits a basis generator), and
/// a single-factor answer may also use `h` a power of the root of `g`,
/// which is how achirality witnesses such as `[swap, [a,b]^-n]` are found.
pub fn acl_upper(g: &Word, params: &AclSearch) -> NormResult {
    if g.is_empty() {
        return NormResult::found(Vec::new());
    }
    let autos = acl_auto_pool(g.rank(), params);
    let hs = Word::enumerate(g.rank(), params.elem_len);
    let mut pool = FactorPool::new();
    for a in &autos {
        for h in &hs {
            let v = a.autocommutator(h).expect("equal ranks");
            pool.push(
                v,
                Factor::Autocommutator {
                    auto: a.clone(),
                    word: h.clone(),
                },
            );
        }
    }
    pool.search(g, params.k_max, &free_factor_witness, &|w| {
        power_family_witness(w, &autos)
    })
}

/// Upper bound on commutator length: least `k <= k_max` with `g` a product
/// of `k` commutators `[u, v]`, `|u|, |v| <= len_cap`.
pub fn cl_upper(g: &Word, len_cap: usize, k_max: usize) -> NormResult {
    let ws = Word::enumerate(g.rank(), len_cap);
    let mut pool = FactorPool::new();
    for u in &ws {
        for v in &ws {
            pool.push(
                Word::commutator(u, v).expect("equal ranks"),
                Factor::Commutator {
                    left: u.clone(),
                    right: v.clone(),
                },
            );
        }
    }
    pool.search(g, k_max, &|_| None, &|_| None)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PowerTrace {
    pub n: u32,
    pub acl: NormResult,
}

/// Lower bound from a quasimorphism invariant under a finite group `A`; it
/// bounds the stable norm over autocommutators `[φ, h]` with `φ ∈ A` only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictedBound {
    pub value: Rational,
    pub group_order: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SaclEstimate {
    /// `min_n acl_upper(g^n)/n` over powers with a witness.
    pub upper: Option<Rational>,
    /// Lower bound on the true stable autocommutator length.
    pub lower: Rational,
    /// Best bound on the `A`-restricted stable norm, reported separately.
    pub restricted_lower: Option<RestrictedBound>,
    pub trace: Vec<PowerTrace>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scope", rename_all = "snake_case")]
pub enum BavardBound {
    /// From a quasimorphism asserted to be invariant under all automorphisms.
    FullAut {
        value: Rational,
    },
    Restricted(RestrictedBound),
}

/// `|f(g)| / (2 D(f))` for a homogeneous invariant quasimorphism `f`.
pub fn bavard_bound(f: &Quasimorphism, g: &Word) -> Result<BavardBound> {
    if !f.is_homogeneous() {
        return Err(Error::InvalidParameter(
            "duality bounds need a homogeneous quasimorphism".into(),
        ));
    }
    let d = f.defect_bound().ok_or(Error::UnknownDefect)?;
    if d.is_zero() {
        return Err(Error::InvalidParameter("declared defect is zero".into()));
    }
    let value = f.evaluate(g)?.abs() / (d * 2);
    if f.is_aut_invariant() {
        Ok(BavardBound::FullAut { value })
    } else if let Some(group) = f.invariance_group() {
        Ok(BavardBound::Restricted(RestrictedBound {
            value,
            group_order: group.len(),
        }))
    } else {
        Err(Error::InvalidParameter(
            "quasimorphism carries no invariance certificate".into(),
        ))
    }
}

pub fn sacl_estimate(
    g: &Word,
    n_max: u32,
    params: &AclSearch,
    family: &[Quasimorphism],
) -> Result<SaclEstimate> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    let mut trace = Vec::new();
    let mut upper: Option<Rational> = None;
    for n in 1..=n_max {
        let acl = acl_upper(&g.power(i64::from(n)), params);
        if let Some(k) = acl.finite() {
            let r = Rational::new(k as i64, i64::from(n));
            upper = Some(upper.map_or(r, |u| u.min(r)));
        }
        trace.push(PowerTrace { n, acl });
    }
    let mut lower = Rational::zero();
    let mut restricted_lower: Option<RestrictedBound> = None;
    for f in family {
        match bavard_bound(f, g) {
            Ok(BavardBound::FullAut { value }) => lower = lower.max(value),
            Ok(BavardBound::Restricted(b)) => {
                if restricted_lower.as_ref().is_none_or(|r| b.value > r.value) {
                    restricted_lower = Some(b);
                }
            }
            Err(_) => {}
        }
    }
    Ok(SaclEstimate {
        upper,
        lower,
        restricted_lower,
        trace,
    })
}

/// `|f(g)| / (sup_{s∈S} |f(s)| + D(f))`, a lower bound on `|g|` over the
/// closure of `S` under the finite group `f` is averaged over.
pub fn prop32_bound(f: &Quasimorphism, set: &[Word], g: &Word) -> Result<Rational> {
    if f.invariance_group().is_none() && !f.is_aut_invariant() {
        return Err(Error::InvalidParameter(
            "quasimorphism carries no invariance certificate".into(),
        ));
    }
    let d = f.defect_bound().ok_or(Error::UnknownDefect)?;
    let mut sup = Rational::zero();
    for s in set {
        sup = sup.max(f.evaluate(s)?.abs());
    }
    let denom = sup + d;
    if denom.is_zero() {
        return Err(Error::InvalidParameter(
            "quasimorphism vanishes on the set and has zero defect".into(),
        ));
    }
    Ok(f.evaluate(g)?.abs() / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_word;
    use crate::quasimorphisms::signed_permutation_group;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn letters() -> Vec<Word> {
        vec![w("a"), w("A"), w("b"), w("B")]
    }

    #[test]
    fn orbit_closure_examples() {
        let group = signed_permutation_group(2);
        let mut c = orbit_closure(&[w("a")], &group).unwrap();
        c.sort();
        assert_eq!(c, letters());
        let id = [Automorphism::identity(2)];
        assert_eq!(
            orbit_closure(&[w("ab"), w("b")], &id).unwrap(),
            vec![w("ab"), w("b")]
        );
        let closure = orbit_closure(&[w("ab")], &group).unwrap();
        for a in &group {
            let mut moved: Vec<Word> = closure.iter().map(|x| a.apply(x).unwrap()).collect();
            moved.sort();
            let mut orig = closure.clone();
            orig.sort();
            assert_eq!(moved, orig);
        }
    }

    #[test]
    fn bfs_examples() {
        let s = letters();
        let r = bfs_norm(&Word::identity(2), &s, 5).unwrap();
        assert_eq!(r.finite(), Some(0));
        assert_eq!(bfs_norm(&w("a"), &s, 5).unwrap().finite(), Some(1));
        let closure = orbit_closure(&[w("a"), w("b")], &signed_permutation_group(2)).unwrap();
        let r = bfs_norm(&w("abAB"), &closure, 8).unwrap();
        assert_eq!(r.finite(), Some(4));
        assert!(r.verifies(&w("abAB")));
    }

    #[test]
    fn bfs_cutoff_and_infinite() {
        let r = bfs_norm(&w("abAB"), &letters(), 3).unwrap();
        assert_eq!(r.value, NormValue::GreaterThanCutoff { cutoff: 3 });
        // only positive powers of a are reachable from {a}, and the
        // backward search from a⁻¹ runs forever, so the cutoff decides
        let r = bfs_norm(&w("A"), &[w("a")], 6).unwrap();
        assert_eq!(r.value, NormValue::GreaterThanCutoff { cutoff: 6 });
        // {ε}: the forward side is exhausted at once
        let r = bfs_norm(&w("a"), &[Word::identity(2)], 6).unwrap();
        assert_eq!(r.value, NormValue::Infinite);
        assert!(bfs_norm(&w("a"), &[], 3).is_err());
    }

    #[test]
    fn bfs_matches_unidirectional_oracle() {
        // plain BFS from ε over a non-symmetric set
        let s = vec![w("ab"), w("B"), w("aa")];
        let mut dist: HashMap<Word, usize> = HashMap::from([(Word::identity(2), 0)]);
        let mut frontier = vec![Word::identity(2)];
        for d in 1..=5 {
            let mut next = Vec::new();
            for u in &frontier {
                for x in &s {
                    let v = u * x;
                    if !dist.contains_key(&v) {
                        dist.insert(v.clone(), d);
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        for (g, &d) in &dist {
            let r = bfs_norm(g, &s, 5).unwrap();
            assert_eq!(r.finite(), Some(d), "{g}");
            assert!(r.verifies(g));
        }
    }

    #[test]
    fn bfs_subadditive_and_invariant() {
        let group = signed_permutation_group(2);
        let s = orbit_closure(&[w("a"), w("bb")], &group).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..60 {
            let (lg, lh) = (rng.gen_range(0..5), rng.gen_range(0..5));
            let g = Word::random(&mut rng, 2, lg);
            let h = Word::random(&mut rng, 2, lh);
            let (ng, nh, ngh) = (
                bfs_norm(&g, &s, 8).unwrap().finite(),
                bfs_norm(&h, &s, 8).unwrap().finite(),
                bfs_norm(&(&g * &h), &s, 8).unwrap().finite(),
            );
            if let (Some(a), Some(b), Some(c)) = (ng, nh, ngh) {
                assert!(c <= a + b);
            }
            for alpha in &group {
                let moved = bfs_norm(&alpha.apply(&g).unwrap(), &s, 8).unwrap().finite();
                assert_eq!(moved, ng);
            }
        }
    }

    #[test]
    fn acl_examples() {
        let r = acl_upper(&w("a"), &AclSearch::default());
        assert_eq!(r.finite(), Some(1));
        assert!(r.verifies(&w("a")));
        match &r.witness.as_ref().unwrap()[0] {
            Factor::Autocommutator { auto, word } => {
                assert_eq!(
                    auto,
                    &Automorphism::transvection(2, 2, 1, Side::Left).unwrap()
                );
                assert_eq!(word, &w("b"));
            }
            other => panic!("unexpected witness {other:?}"),
        }
        assert_eq!(
            acl_upper(&Word::identity(2), &AclSearch::default()).finite(),
            Some(0)
        );
        let c = w("abAB");
        for n in 1..=8 {
            let g = c.power(2 * n);
            let r = acl_upper(&g, &AclSearch::default());
            assert_eq!(r.finite(), Some(1), "n = {n}");
            assert!(r.verifies(&g));
        }
    }

    #[test]
    fn transvection_witness_examples() {
        let (phi, x) = transvection_witness(&w("a"), 2, 3).unwrap();
        assert_eq!(phi.apply(&w("b")).unwrap(), w("aaab"));
        assert_eq!(phi.autocommutator(&x).unwrap(), w("aaa"));
        let (phi, x) = transvection_witness(&w("a"), 2, 0).unwrap();
        assert!(phi.is_identity());
        assert!(phi.autocommutator(&x).unwrap().is_empty());
        let ab = parse_word("ab", 3).unwrap();
        let (phi, x) = transvection_witness(&ab, 3, 2).unwrap();
        assert_eq!(phi.autocommutator(&x).unwrap(), ab.power(2));
        assert!(transvection_witness(&w("ab"), 2, 1).is_err());
    }

    #[test]
    fn sacl_examples() {
        let e = sacl_estimate(&Word::identity(2), 3, &AclSearch::default(), &[]).unwrap();
        assert_eq!(e.upper, Some(Rational::zero()));
        assert_eq!(e.lower, Rational::zero());
        let e = sacl_estimate(&w("abAB"), 8, &AclSearch::default(), &[]).unwrap();
        assert_eq!(e.upper, Some(Rational::new(1, 8)));
        let e = sacl_estimate(&w("a"), 8, &AclSearch::default(), &[]).unwrap();
        assert!(e.upper.unwrap() <= Rational::new(1, 8));
        for t in &e.trace {
            assert!(t.acl.verifies(&w("a").power(i64::from(t.n))));
        }
    }

    #[test]
    fn cl_examples() {
        let c = w("abAB");
        assert_eq!(cl_upper(&c, 1, 2).finite(), Some(1));
        assert_eq!(cl_upper(&Word::identity(2), 1, 2).finite(), Some(0));
        let c2 = c.power(2);
        let cl = cl_upper(&c2, 1, 2);
        assert!(cl.finite().unwrap() <= 2);
        assert!(cl.verifies(&c2));
        let acl = acl_upper(&c2, &AclSearch::default());
        assert!(acl.finite().unwrap() <= cl.finite().unwrap());
        assert_eq!(
            cl_upper(&w("a"), 1, 2).value,
            NormValue::NoWitnessWithin { cap: 2 }
        );
    }

    #[test]
    fn invariant_quasimorphism_bounds() {
        let group = signed_permutation_group(2);
        let f = Quasimorphism::brooks_homogeneous(&w("aaba"))
            .unwrap()
            .finite_average(&group)
            .unwrap();
        let s = [w("a"), w("b")];
        let closure = orbit_closure(&s, &group).unwrap();
        let g = w("aabaBB");
        let mut last = Rational::zero();
        for m in 1..=3 {
            let gm = g.power(m);
            let bound = prop32_bound(&f, &s, &gm).unwrap();
            assert!(bound > last);
            last = bound;
            let norm = bfs_norm(&gm, &closure, 24).unwrap().finite().unwrap();
            assert!(bound <= Rational::from_integer(norm as i64));
        }
        assert_eq!(prop32_bound(&f, &s, &w("abAB")).unwrap(), Rational::zero());
        let zero = Quasimorphism::zero(2).finite_average(&group).unwrap();
        assert!(prop32_bound(&zero, &s, &g).is_err());
        let plain = Quasimorphism::brooks_homogeneous(&w("ab")).unwrap();
        assert!(prop32_bound(&plain, &s, &g).is_err());

        let b = bavard_bound(&f, &g).unwrap();
        assert!(matches!(
            b,
            BavardBound::Restricted(RestrictedBound { group_order: 8, .. })
        ));
        let e = sacl_estimate(&g, 2, &AclSearch::default(), std::slice::from_ref(&f)).unwrap();
        assert_eq!(e.lower, Rational::zero());
        assert!(e.restricted_lower.unwrap().value > Rational::zero());
    }
}
