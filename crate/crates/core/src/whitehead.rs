//! Whitehead's algorithm on conjugacy classes of a free group.
//!
//! Minimisation is greedy length descent under Whitehead automorphisms; the
//! minimal level of an orbit is the closure of a minimiser under the
//! length-preserving moves. Both rely on the classical peak-reduction
//! theorem, which is not re-proved here but is cross-checked against brute
//! force in the tests.

use std::collections::{BTreeMap, HashMap, VecDeque};

use crate::automorphisms::{AutoWitness, Automorphism, Side};
use crate::error::{Error, Result};
use crate::words::{alphabet, letter_key, CyclicWord, Letter, Word};

/// Default bound on the size of a minimal orbit level.
pub const DEFAULT_LEVEL_LIMIT: usize = 200_000;

/// Signed permutations of the basis, the identity first.
pub fn signed_permutations(rank: usize) -> Vec<Automorphism> {
    let mut perms: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..rank {
        perms = perms
            .into_iter()
            .flat_map(|p| {
                (1..=rank)
                    .filter(|j| !p.contains(j))
                    .map(|j| {
                        let mut q = p.clone();
                        q.push(j);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out = Vec::new();
    for p in &perms {
        let perm = Automorphism::permutation(rank, p).expect("valid permutation");
        for signs in 0u32..(1 << rank) {
            let mut phi = perm.clone();
            for i in 0..rank {
                if signs & (1 << i) != 0 {
                    let inv = Automorphism::inversion(rank, i + 1).expect("valid index");
                    phi = inv.compose(&phi).expect("equal ranks");
                }
            }
            out.push(phi);
        }
    }
    out
}

/// The Whitehead automorphism of the second kind with multiplier letter `a`
/// and cut set `cut` (which must contain `a` and not `a⁻¹`).
pub fn whitehead_type_two(rank: usize, cut: &[Letter], a: Letter) -> Result<Automorphism> {
    if !cut.contains(&a) || cut.contains(&-a) {
        return Err(Error::InvalidParameter(
            "cut set must contain the multiplier and not its inverse".into(),
        ));
    }
    let mut factors = Vec::new();
    for x in 1..=rank {
        if x == a.unsigned_abs() as usize {
            continue;
        }
        let xl = x as Letter;
        if cut.contains(&xl) {
            factors.push(AutoWitness::Transvection {
                target: x,
                multiplier: a,
                side: Side::Right,
            });
        }
        if cut.contains(&-xl) {
            factors.push(AutoWitness::Transvection {
                target: x,
                multiplier: -a,
                side: Side::Left,
            });
        }
    }
    AutoWitness::Composite { factors }.build(rank)
}

/// All Whitehead automorphisms of the given rank: signed permutations of the
/// basis first (the identity leads), then the non-trivial multiplier/cut-set
/// automorphisms, deduplicated by basis images.
pub fn whitehead_autos(rank: usize) -> Vec<Automorphism> {
    let mut out = signed_permutations(rank);
    let mut seen: std::collections::HashSet<Automorphism> = out.iter().cloned().collect();
    for a in alphabet(rank) {
        let others: Vec<Letter> = alphabet(rank)
            .into_iter()
            .filter(|x| x.unsigned_abs() != a.unsigned_abs())
            .collect();
        for mask in 0u64..(1 << others.len()) {
            let mut cut = vec![a];
            cut.extend(
                others
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &x)| x),
            );
            let phi = whitehead_type_two(rank, &cut, a).expect("well-formed cut set");
            if seen.insert(phi.clone()) {
                out.push(phi);
            }
        }
    }
    out
}

fn type_two_autos(rank: usize) -> Vec<Automorphism> {
    let n_type_one = signed_permutations(rank).len();
    whitehead_autos(rank).split_off(n_type_one)
}

/// Result of [`minimize`]: a shortest representative of the Aut-orbit of a
/// conjugacy class and the moves that reach it.
#[derive(Clone, Debug)]
pub struct Minimization {
    pub min_word: Word,
    pub trace: Vec<Automorphism>,
}

/// Replays a move trace: cyclically reduce, apply each move, cyclically reduce.
pub fn replay(w: &Word, trace: &[Automorphism]) -> Result<CyclicWord> {
    trace.iter().try_fold(CyclicWord::of(w), |c, phi| {
        Ok(CyclicWord::of(&phi.apply(&c.to_word())?))
    })
}

pub fn minimize(w: &Word) -> Minimization {
    let autos = type_two_autos(w.rank());
    let mut current = CyclicWord::of(w);
    let mut trace = Vec::new();
    'descent: loop {
        for phi in &autos {
            let next = CyclicWord::of(&phi.apply(&current.to_word()).expect("equal ranks"));
            if next.len() < current.len() {
                current = next;
                trace.push(phi.clone());
                continue 'descent;
            }
        }
        break;
    }
    Minimization {
        min_word: current.to_word(),
        trace,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrbitMove {
    pub from: usize,
    pub to: usize,
    /// Index into [`whitehead_autos`] for the rank.
    pub auto: usize,
}

/// The minimal-length cyclic words of an Aut-orbit, connected by
/// length-preserving Whitehead moves.
#[derive(Clone, Debug)]
pub struct OrbitLevel {
    pub words: Vec<CyclicWord>,
    pub moves: Vec<OrbitMove>,
}

impl OrbitLevel {
    pub fn contains(&self, c: &CyclicWord) -> bool {
        self.words.contains(c)
    }

    pub fn word_length(&self) -> usize {
        self.words.first().map_or(0, CyclicWord::len)
    }
}

/// Breadth-first closure of `minimize(w)` under length-preserving Whitehead
/// moves. Fails with [`Error::Cutoff`] if more than `limit` words are found.
pub fn min_orbit_level(w: &Word, limit: usize) -> Result<OrbitLevel> {
    let autos = whitehead_autos(w.rank());
    let start = CyclicWord::of(&minimize(w).min_word);
    let len = start.len();
    let mut index: HashMap<CyclicWord, usize> = HashMap::from([(start.clone(), 0)]);
    let mut words = vec![start];
    let mut moves = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let word = words[i].to_word();
        for (k, phi) in autos.iter().enumerate() {
            let next = CyclicWord::of(&phi.apply(&word)?);
            debug_assert!(next.len() >= len, "level start was not minimal");
            if next.len() != len {
                continue;
            }
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if words.len() >= limit {
                        return Err(Error::Cutoff {
                            what: "minimal orbit level",
                            limit,
                        });
                    }
                    let j = words.len();
                    index.insert(next.clone(), j);
                    words.push(next);
                    queue.push_back(j);
                    j
                }
            };
            if i != j {
                moves.push(OrbitMove {
                    from: i,
                    to: j,
                    auto: k,
                });
            }
        }
    }
    Ok(OrbitLevel { words, moves })
}

pub fn is_primitive(w: &Word) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::IdentityNotAllowed);
    }
    Ok(minimize(w).min_word.len() == 1)
}

/// Whether `w` is conjugate into a proper free factor: some minimal
/// representative of its orbit omits a basis generator.
pub fn in_proper_free_factor(w: &Word, limit: usize) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::IdentityNotAllowed);
    }
    let rank = w.rank();
    let level = min_orbit_level(w, limit)?;
    Ok(level.words.iter().any(|c| {
        let word = c.to_word();
        (1..=rank).any(|i| !word.uses_generator(i))
    }))
}

/// Whitehead graph of a cyclic word: one vertex per signed letter and one
/// edge `{x⁻¹, y}` for every cyclically adjacent pair `x y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WhiteheadGraph {
    pub rank: usize,
    /// Edge multiplicities keyed by vertex pairs `(u, v)` with `u <= v`,
    /// vertices numbered by `letter_key(x) - 1`.
    pub edges: BTreeMap<(usize, usize), usize>,
    pub connected: bool,
    pub has_cut_vertex: bool,
}

/// Vertex index of a signed letter.
pub fn vertex_of(x: Letter) -> usize {
    letter_key(x) as usize - 1
}

impl WhiteheadGraph {
    pub fn vertex_count(&self) -> usize {
        2 * self.rank
    }

    pub fn edge_count(&self) -> usize {
        self.edges.values().sum()
    }

    /// Connected without a cut vertex: the classical certificate that the
    /// word does not lie in a proper free factor.
    pub fn certifies_not_in_free_factor(&self) -> bool {
        self.connected && !self.has_cut_vertex
    }

    fn components(&self, removed: Option<usize>) -> usize {
        let n = self.vertex_count();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(u, v) in self.edges.keys() {
            if Some(u) == removed || Some(v) == removed {
                continue;
            }
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            parent[ru] = rv;
        }
        (0..n)
            .filter(|&x| Some(x) != removed && find(&mut parent, x) == x)
            .count()
    }
}

pub fn whitehead_graph(w: &Word) -> Result<WhiteheadGraph> {
    if w.is_empty() {
        return Err(Error::IdentityNotAllowed);
    }
    if !w.is_cyclically_reduced() {
        return Err(Error::NotCyclicallyReduced);
    }
    let l = w.letters();
    let mut edges = BTreeMap::new();
    for i in 0..l.len() {
        let (x, y) = (l[i], l[(i + 1) % l.len()]);
        let (u, v) = (vertex_of(-x), vertex_of(y));
        *edges.entry((u.min(v), u.max(v))).or_insert(0) += 1;
    }
    let mut g = WhiteheadGraph {
        rank: w.rank(),
        edges,
        connected: false,
        has_cut_vertex: false,
    };
    let base = g.components(None);
    g.connected = base == 1;
    g.has_cut_vertex = (0..g.vertex_count()).any(|v| g.components(Some(v)) > base);
    Ok(g)
}
