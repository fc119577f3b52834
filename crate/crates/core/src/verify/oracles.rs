//! Independent reference implementations used to cross-check the library.
//! They work on raw letter vectors and avoid the library's algorithms.

use crate::graphprod::VertexGraph;

pub fn free_reduce(letters: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::new();
    for &x in letters {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

pub fn cyclic_core(letters: &[i32]) -> Vec<i32> {
    let mut w = free_reduce(letters);
    while w.len() >= 2 && w[0] == -w[w.len() - 1] {
        w = w[1..w.len() - 1].to_vec();
    }
    w
}

pub fn inverse(letters: &[i32]) -> Vec<i32> {
    letters.iter().rev().map(|x| -x).collect()
}

pub fn commutator(u: &[i32], v: &[i32]) -> Vec<i32> {
    let mut w = u.to_vec();
    w.extend(v);
    w.extend(inverse(u));
    w.extend(inverse(v));
    free_reduce(&w)
}

pub fn conjugate(u: &[i32], v: &[i32]) -> bool {
    let (a, b) = (cyclic_core(u), cyclic_core(v));
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    let doubled: Vec<i32> = a.iter().chain(&a).copied().collect();
    doubled.windows(b.len()).any(|win| win == b)
}

/// Occurrences of `pattern` in the periodic word of the cyclic core, minus
/// those of its inverse.
pub fn brooks_homogeneous(letters: &[i32], pattern: &[i32]) -> i64 {
    let c = cyclic_core(letters);
    if c.is_empty() {
        return 0;
    }
    let reps = pattern.len() / c.len() + 2;
    let long: Vec<i32> = c.iter().cycle().take(c.len() * reps).copied().collect();
    let count = |p: &[i32]| (0..c.len()).filter(|&i| long[i..i + p.len()] == *p).count() as i64;
    count(pattern) - count(&inverse(pattern))
}

/// All words over `{±1, ±2}` of length exactly `n` (not necessarily reduced).
fn all_sequences(n: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                [1, -1, 2, -2].into_iter().map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

/// Reduced words of `F_2` up to length `n`.
pub fn reduced_words(n: usize) -> Vec<Vec<i32>> {
    let mut out: Vec<Vec<i32>> = (0..=n)
        .flat_map(all_sequences)
        .filter(|w| free_reduce(w) == *w)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// In `F_2`, `u` and `v` form a basis iff `[u, v]` is conjugate to
/// `[a, b]^{±1}`. A primitive `w` is tested against partners of length at
/// most `|w|`.
pub fn primitive_f2(w: &[i32], partners: &[Vec<i32>]) -> bool {
    let w = free_reduce(w);
    let ab = commutator(&[1], &[2]);
    let ba = inverse(&ab);
    partners.iter().filter(|v| v.len() <= w.len()).any(|v| {
        let c = commutator(&w, v);
        conjugate(&c, &ab) || conjugate(&c, &ba)
    })
}

/// Proper free factors of `F_2` are cyclic and generated by primitives, so
/// `w ≠ 1` lies in one up to conjugacy iff the root of its cyclic core is
/// primitive.
pub fn in_proper_free_factor_f2(w: &[i32], partners: &[Vec<i32>]) -> bool {
    let c = cyclic_core(w);
    let n = c.len();
    let period = (1..=n)
        .find(|&p| n.is_multiple_of(p) && (0..n).all(|i| c[i] == c[i % p]))
        .unwrap_or(n);
    primitive_f2(&c[..period], partners)
}

/// `ℤ ⋊ ℤ/2` acting on ℤ: `(t, s)` is `x ↦ (-1)^s x + t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dihedral {
    pub t: i64,
    pub s: bool,
}

impl Dihedral {
    pub const ONE: Dihedral = Dihedral { t: 0, s: false };
    /// Reflections `x ↦ -x` and `x ↦ 1 - x`.
    pub const U: Dihedral = Dihedral { t: 0, s: true };
    pub const V: Dihedral = Dihedral { t: 1, s: true };
}

impl std::ops::Mul for Dihedral {
    type Output = Dihedral;
    fn mul(self, o: Dihedral) -> Dihedral {
        Dihedral {
            t: self.t + if self.s { -o.t } else { o.t },
            s: self.s ^ o.s,
        }
    }
}

/// The finest partition of the vertices into parts that are pairwise fully
/// adjacent, by scanning every set partition.
pub fn finest_join_partition(g: &VertexGraph) -> Vec<Vec<usize>> {
    fn partitions(n: usize) -> Vec<Vec<usize>> {
        // restricted growth strings
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        fn go(i: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if i == cur.len() {
                out.push(cur.clone());
                return;
            }
            for b in 0..=max + 1 {
                cur[i] = b;
                go(i + 1, max.max(b), cur, out);
            }
        }
        if n == 0 {
            return vec![Vec::new()];
        }
        go(1, 0, &mut cur, &mut out);
        out
    }
    let n = g.len();
    let best = partitions(n)
        .into_iter()
        .filter(|p| (0..n).all(|i| (0..n).all(|j| p[i] == p[j] || g.adjacent(i, j))))
        .max_by_key(|p| p.iter().max().map_or(0, |m| m + 1))
        .unwrap_or_default();
    let blocks = best.iter().max().map_or(0, |m| m + 1);
    let mut out: Vec<Vec<usize>> = (0..blocks)
        .map(|b| (0..n).filter(|&i| best[i] == b).collect())
        .collect();
    out.sort();
    out
}

/// Whether the subgraph on `part` splits into two nonempty fully adjacent
/// pieces.
pub fn is_nontrivial_join(g: &VertexGraph, part: &[usize]) -> bool {
    let k = part.len();
    (1..(1u32 << k) - 1).any(|mask| {
        (0..k).all(|i| {
            (0..k).all(|j| (mask >> i & 1) == (mask >> j & 1) || g.adjacent(part[i], part[j]))
        })
    })
}

/// Virtual abelianness for graphs on at most three vertices, read off case
/// by case: a non-adjacent pair must be two copies of ℤ/2 with nothing else
/// obstructing.
pub fn hand_classify(g: &VertexGraph) -> bool {
    let n = g.len();
    assert!(n <= 3, "hand table covers at most three vertices");
    let non_edges: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !g.adjacent(i, j))
        .collect();
    match non_edges.as_slice() {
        [] => true,
        [(i, j)] => g.label(*i) == 2 && g.label(*j) == 2,
        _ => false,
    }
}
