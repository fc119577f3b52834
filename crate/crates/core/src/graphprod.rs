//! Graph products of cyclic groups.
//!
//! A [`VertexGraph`] labels each vertex with the order of its cyclic group
//! (0 for ℤ). Elements are [`GPWord`]s kept in a canonical normal form:
//! fully merged syllables, shuffled so that among commuting neighbours the
//! lower vertex comes first.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quasimorphisms::{Construction, Quasimorphism, Rational};
use crate::words::Word;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRecord", into = "GraphRecord")]
pub struct VertexGraph {
    labels: Vec<u32>,
    adj: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct GraphRecord {
    labels: Vec<u32>,
    edges: Vec<(usize, usize)>,
}

impl TryFrom<GraphRecord> for VertexGraph {
    type Error = Error;
    fn try_from(r: GraphRecord) -> Result<Self> {
        VertexGraph::new(r.labels, &r.edges)
    }
}

impl From<VertexGraph> for GraphRecord {
    fn from(g: VertexGraph) -> Self {
        GraphRecord {
            edges: g.edges(),
            labels: g.labels,
        }
    }
}

impl VertexGraph {
    /// Repeated edges are merged; loops and label 1 are rejected.
    pub fn new(labels: Vec<u32>, edges: &[(usize, usize)]) -> Result<Self> {
        if let Some(i) = labels.iter().position(|&m| m == 1) {
            return Err(Error::InvalidParameter(format!(
                "vertex {i} has trivial label 1"
            )));
        }
        let n = labels.len();
        let mut adj = vec![vec![false; n]; n];
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({i}, {j}) out of range for {n} vertices"
                )));
            }
            if i == j {
                return Err(Error::InvalidParameter(format!("loop at vertex {i}")));
            }
            adj[i][j] = true;
            adj[j][i] = true;
        }
        Ok(VertexGraph { labels, adj })
    }

    pub fn complete(labels: Vec<u32>) -> Self {
        let n = labels.len();
        let adj = (0..n).map(|i| (0..n).map(|j| i != j).collect()).collect();
        VertexGraph { labels, adj }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> u32 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u][v]
    }

    /// Distinct vertices commute exactly when adjacent.
    fn commute(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u][v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adj[i][j])
            .collect()
    }

    pub fn is_complete(&self) -> bool {
        self.edges().len() == self.len() * self.len().saturating_sub(1) / 2
    }

    /// Subgraph induced on `vertices`, renumbered in the given order.
    pub fn induced(&self, vertices: &[usize]) -> VertexGraph {
        VertexGraph {
            labels: vertices.iter().map(|&v| self.labels[v]).collect(),
            adj: vertices
                .iter()
                .map(|&u| vertices.iter().map(|&v| self.adj[u][v]).collect())
                .collect(),
        }
    }

    /// Line format: `vertices n`, then `label i m` and `edge i j` lines.
    /// Unlabelled vertices are ℤ. `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n: Option<usize> = None;
        let mut labels = Vec::new();
        let mut edges = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.is_empty() {
                continue;
            }
            let err = |column: usize, message: String| Error::Parse {
                line: ln + 1,
                column,
                message,
            };
            let num = |k: usize| -> Result<usize> {
                let t = toks
                    .get(k)
                    .ok_or_else(|| err(line.len() + 1, "missing number".into()))?;
                let col = raw.find(t).map_or(1, |c| c + 1);
                t.parse()
                    .map_err(|_| err(col, format!("expected a number, found `{t}`")))
            };
            let check_len = |k: usize| {
                if toks.len() != k {
                    Err(err(1, format!("`{}` takes {} arguments", toks[0], k - 1)))
                } else {
                    Ok(())
                }
            };
            match (toks[0], n) {
                ("vertices", None) => {
                    check_len(2)?;
                    let count = num(1)?;
                    n = Some(count);
                    labels = vec![0; count];
                }
                ("vertices", Some(_)) => return Err(err(1, "repeated header".into())),
                (_, None) => return Err(err(1, "expected `vertices n` header".into())),
                ("label", Some(count)) => {
                    check_len(3)?;
                    let i = num(1)?;
                    if i >= count {
                        return Err(err(1, format!("vertex {i} out of range")));
                    }
                    labels[i] = num(2)? as u32;
                }
                ("edge", Some(_)) => {
                    check_len(3)?;
                    edges.push((num(1)?, num(2)?));
                }
                (other, _) => return Err(err(1, format!("unknown directive `{other}`"))),
            }
        }
        if n.is_none() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "expected `vertices n` header".into(),
            });
        }
        VertexGraph::new(labels, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("vertices {}\n", self.len());
        for (i, m) in self.labels.iter().enumerate() {
            out += &format!("label {i} {m}\n");
        }
        for (i, j) in self.edges() {
            out += &format!("edge {i} {j}\n");
        }
        out
    }
}

/// A finitely generated abelian vertex group: `ℤ^free_rank ⊕ ⊕ ℤ/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroup {
    pub free_rank: u32,
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    pub fn cyclic(order: u32) -> Self {
        if order == 0 {
            AbelianGroup {
                free_rank: 1,
                torsion: vec![],
            }
        } else {
            AbelianGroup {
                free_rank: 0,
                torsion: vec![u64::from(order)],
            }
        }
    }
}

fn prime_powers(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut q = 1;
            while n.is_multiple_of(p) {
                n /= p;
                q *= p;
            }
            out.push(q);
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Replaces every vertex by a complete cluster of primary cyclic vertices
/// (and ℤ's for the free rank) inheriting its adjacencies. Also returns,
/// per input vertex, its cluster in the output.
pub fn refine(
    groups: &[AbelianGroup],
    edges: &[(usize, usize)],
) -> Result<(VertexGraph, Vec<Vec<usize>>)> {
    let mut labels = Vec::new();
    let mut clusters = Vec::new();
    for g in groups {
        let mut parts: Vec<u32> = vec![0; g.free_rank as usize];
        let mut tors = Vec::new();
        for &t in &g.torsion {
            if t == 0 {
                return Err(Error::InvalidParameter(
                    "torsion coefficient 0; count it in the free rank".into(),
                ));
            }
            for q in prime_powers(t) {
                tors.push(u32::try_from(q).map_err(|_| {
                    Error::InvalidParameter(format!("torsion order {q} too large"))
                })?);
            }
        }
        tors.sort_unstable();
        parts.extend(tors);
        clusters.push((labels.len()..labels.len() + parts.len()).collect::<Vec<_>>());
        labels.extend(parts);
    }
    let mut out_edges = Vec::new();
    for c in &clusters {
        for (k, &u) in c.iter().enumerate() {
            out_edges.extend(c[k + 1..].iter().map(|&v| (u, v)));
        }
    }
    for &(i, j) in edges {
        if i >= groups.len() || j >= groups.len() || i == j {
            return Err(Error::InvalidParameter(format!("bad edge ({i}, {j})")));
        }
        for &u in &clusters[i] {
            out_edges.extend(clusters[j].iter().map(|&v| (u, v)));
        }
    }
    Ok((VertexGraph::new(labels, &out_edges)?, clusters))
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GPWord {
    graph: Arc<VertexGraph>,
    syllables: Vec<(usize, i64)>,
}

impl GPWord {
    pub fn identity(graph: &Arc<VertexGraph>) -> Self {
        GPWord {
            graph: graph.clone(),
            syllables: Vec::new(),
        }
    }

    pub fn graph(&self) -> &Arc<VertexGraph> {
        &self.graph
    }

    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Sum of `|e|` over syllables, exponents taken in `(-m/2, m/2]` for
    /// finite labels.
    pub fn length(&self) -> u64 {
        self.syllables
            .iter()
            .map(|&(v, e)| {
                let m = i64::from(self.graph.label(v));
                if m > 0 && e > m / 2 {
                    (m - e).unsigned_abs()
                } else {
                    e.unsigned_abs()
                }
            })
            .sum()
    }

    /// Parses `v^e` tokens (vertices from 0); `ε` or an empty string is the
    /// identity.
    pub fn parse(graph: &Arc<VertexGraph>, text: &str) -> Result<Self> {
        let mut raw = Vec::new();
        let mut col = 1;
        for piece in text.split(' ') {
            let tok = piece.trim();
            if !tok.is_empty() && tok != "ε" {
                let bad = |m: String| Error::Parse {
                    line: 1,
                    column: col,
                    message: m,
                };
                let (v, e) = tok
                    .split_once('^')
                    .ok_or_else(|| bad(format!("expected `v^e`, found `{tok}`")))?;
                let v: usize = v.parse().map_err(|_| bad(format!("bad vertex `{v}`")))?;
                let e: i64 = e.parse().map_err(|_| bad(format!("bad exponent `{e}`")))?;
                if v >= graph.len() {
                    return Err(bad(format!("vertex {v} out of range")));
                }
                raw.push((v, e));
            }
            col += piece.chars().count() + 1;
        }
        normal_form(graph, &raw)
    }

    pub fn random<R: rand::Rng + ?Sized>(
        graph: &Arc<VertexGraph>,
        rng: &mut R,
        syllables: usize,
    ) -> Self {
        if graph.is_empty() {
            return GPWord::identity(graph);
        }
        let raw: Vec<(usize, i64)> = (0..syllables)
            .map(|_| {
                let v = rng.gen_range(0..graph.len());
                let e = match graph.label(v) {
                    0 => *[-2, -1, 1, 2].get(rng.gen_range(0..4)).unwrap(),
                    m => rng.gen_range(1..i64::from(m)),
                };
                (v, e)
            })
            .collect();
        normal_form(graph, &raw).expect("valid syllables")
    }
}

impl fmt::Display for GPWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(v, e)| format!("{v}^{e}"))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

fn reduce_exponent(m: u32, e: i64) -> i64 {
    if m == 0 {
        e
    } else {
        e.rem_euclid(i64::from(m))
    }
}

/// Merges across commuting syllables, drops trivial ones, then takes the
/// lexicographically least (by vertex) shuffle.
pub fn normal_form(graph: &Arc<VertexGraph>, raw: &[(usize, i64)]) -> Result<GPWord> {
    let mut reduced: Vec<(usize, i64)> = Vec::with_capacity(raw.len());
    for &(v, e) in raw {
        if v >= graph.len() {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} out of range for {} vertices",
                graph.len()
            )));
        }
        let e = reduce_exponent(graph.label(v), e);
        if e == 0 {
            continue;
        }
        let mut merged = false;
        for i in (0..reduced.len()).rev() {
            let (u, d) = reduced[i];
            if u == v {
                let s = reduce_exponent(graph.label(v), d + e);
                if s == 0 {
                    reduced.remove(i);
                } else {
                    reduced[i].1 = s;
                }
                merged = true;
                break;
            }
            if !graph.commute(u, v) {
                break;
            }
        }
        if !merged {
            reduced.push((v, e));
        }
    }
    let n = reduced.len();
    let mut placed = vec![false; n];
    let mut syllables = Vec::with_capacity(n);
    for _ in 0..n {
        let next = (0..n)
            .filter(|&j| {
                !placed[j] && (0..j).all(|i| placed[i] || graph.commute(reduced[i].0, reduced[j].0))
            })
            .min_by_key(|&j| reduced[j].0)
            .expect("acyclic dependencies");
        placed[next] = true;
        syllables.push(reduced[next]);
    }
    Ok(GPWord {
        graph: graph.clone(),
        syllables,
    })
}

pub fn gp_multiply(x: &GPWord, y: &GPWord) -> Result<GPWord> {
    if x.graph != y.graph {
        return Err(Error::GraphMismatch);
    }
    let raw: Vec<_> = x.syllables.iter().chain(&y.syllables).copied().collect();
    normal_form(&x.graph, &raw)
}

pub fn gp_invert(x: &GPWord) -> GPWord {
    let raw: Vec<_> = x.syllables.iter().rev().map(|&(v, e)| (v, -e)).collect();
    normal_form(&x.graph, &raw).expect("valid syllables")
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinDecomposition {
    /// Vertices adjacent to every other vertex.
    pub gamma0: Vec<usize>,
    /// Components of the complement with at least two vertices, ordered by
    /// least vertex.
    pub factors: Vec<Vec<usize>>,
    /// Factor indices grouped by labelled isomorphism type.
    pub classes: Vec<Vec<usize>>,
    #[serde(skip)]
    graph: Arc<VertexGraph>,
}

impl JoinDecomposition {
    pub fn graph(&self) -> &Arc<VertexGraph> {
        &self.graph
    }

    pub fn factor_graph(&self, i: usize) -> VertexGraph {
        self.graph.induced(&self.factors[i])
    }
}

pub fn join_decompose(graph: &Arc<VertexGraph>) -> JoinDecomposition {
    let n = graph.len();
    let mut comp = vec![usize::MAX; n];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp[s] = id;
        let mut members = vec![s];
        let mut k = 0;
        while k < members.len() {
            let u = members[k];
            for (v, c) in comp.iter_mut().enumerate() {
                if v != u && !graph.adjacent(u, v) && *c == usize::MAX {
                    *c = id;
                    members.push(v);
                }
            }
            k += 1;
        }
        members.sort_unstable();
        comps.push(members);
    }
    let (singles, factors): (Vec<_>, Vec<_>) = comps.into_iter().partition(|c| c.len() == 1);
    let gamma0 = singles.into_iter().flatten().collect();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for i in 0..factors.len() {
        match classes
            .iter_mut()
            .find(|c| labelled_isomorphism(graph, &factors[c[0]], &factors[i]).is_some())
        {
            Some(c) => c.push(i),
            None => classes.push(vec![i]),
        }
    }
    JoinDecomposition {
        gamma0,
        factors,
        classes,
        graph: graph.clone(),
    }
}

/// The lexicographically least label- and adjacency-preserving bijection
/// from the subgraph on `a` to the subgraph on `b`, as positions in `b`.
pub fn labelled_isomorphism(graph: &VertexGraph, a: &[usize], b: &[usize]) -> Option<Vec<usize>> {
    fn go(
        g: &VertexGraph,
        a: &[usize],
        b: &[usize],
        map: &mut Vec<usize>,
        used: &mut [bool],
    ) -> bool {
        let k = map.len();
        if k == a.len() {
            return true;
        }
        for j in 0..b.len() {
            if used[j] || g.label(a[k]) != g.label(b[j]) {
                continue;
            }
            if (0..k).any(|i| g.adjacent(a[i], a[k]) != g.adjacent(b[map[i]], b[j])) {
                continue;
            }
            used[j] = true;
            map.push(j);
            if go(g, a, b, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    if a.len() != b.len() {
        return None;
    }
    let mut map = Vec::with_capacity(a.len());
    let mut used = vec![false; b.len()];
    go(graph, a, b, &mut map, &mut used).then_some(map)
}

/// Two non-adjacent vertices, both of order 2.
pub fn is_dinfty(graph: &VertexGraph, factor: &[usize]) -> bool {
    matches!(factor, &[u, v] if !graph.adjacent(u, v) && graph.label(u) == 2 && graph.label(v) == 2)
}

/// Whether the graph product is virtually abelian: every join factor is a
/// copy of D∞.
pub fn classify_virtually_abelian(graph: &Arc<VertexGraph>) -> bool {
    let d = join_decompose(graph);
    d.factors.iter().all(|f| is_dinfty(graph, f))
}

/// Image in the product of the factor groups after killing `gamma0`; the
/// i-th component lives on [`JoinDecomposition::factor_graph`]`(i)`.
pub fn project_kill_h0(x: &GPWord, d: &JoinDecomposition) -> Result<Vec<GPWord>> {
    if *x.graph != *d.graph {
        return Err(Error::GraphMismatch);
    }
    let mut owner = vec![None; x.graph.len()];
    for (i, f) in d.factors.iter().enumerate() {
        for (k, &v) in f.iter().enumerate() {
            owner[v] = Some((i, k));
        }
    }
    let mut raw: Vec<Vec<(usize, i64)>> = vec![Vec::new(); d.factors.len()];
    for &(v, e) in &x.syllables {
        if let Some((i, k)) = owner[v] {
            raw[i].push((k, e));
        }
    }
    raw.iter()
        .enumerate()
        .map(|(i, r)| normal_form(&Arc::new(d.factor_graph(i)), r))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FactorKind {
    /// Edgeless with every label ℤ: a free group on the factor's vertices.
    Free,
    Dinfty,
    Other,
}

pub fn factor_kind(graph: &VertexGraph, factor: &[usize]) -> FactorKind {
    let sub = graph.induced(factor);
    if is_dinfty(graph, factor) {
        FactorKind::Dinfty
    } else if sub.edges().is_empty() && sub.labels().iter().all(|&m| m == 0) {
        FactorKind::Free
    } else {
        FactorKind::Other
    }
}

/// `x ↦ Σ_i f(π_i(x))` over `k` pairwise isomorphic join factors.
///
/// Factor `i` is identified with the first chosen factor by the least
/// labelled isomorphism; a free factor on `r` vertices evaluates `f` on
/// `F_r` with its `j`-th vertex (after that identification) as generator
/// `j + 1`. D∞ factors only admit the zero quasimorphism.
#[derive(Clone, Debug)]
pub struct GraphProductQm {
    decomposition: JoinDecomposition,
    factor_indices: Vec<usize>,
    /// `isos[i][k]`: position in the reference factor of the `k`-th vertex
    /// of chosen factor `i`.
    isos: Vec<Vec<usize>>,
    kind: FactorKind,
    inner: Quasimorphism,
}

pub fn gp_pipeline_qm(
    d: &JoinDecomposition,
    factor_indices: &[usize],
    f: &Quasimorphism,
) -> Result<GraphProductQm> {
    let graph = &d.graph;
    let Some(&first) = factor_indices.first() else {
        return Err(Error::InvalidParameter("no factors chosen".into()));
    };
    let mut seen = BTreeSet::new();
    for &i in factor_indices {
        if i >= d.factors.len() {
            return Err(Error::FactorMismatch(format!("no factor {i}")));
        }
        if !seen.insert(i) {
            return Err(Error::FactorMismatch(format!("factor {i} chosen twice")));
        }
    }
    let reference = &d.factors[first];
    let mut isos = Vec::new();
    for &i in factor_indices {
        let to_ref = labelled_isomorphism(graph, &d.factors[i], reference).ok_or_else(|| {
            Error::FactorMismatch(format!("factor {i} is not isomorphic to factor {first}"))
        })?;
        isos.push(to_ref);
    }
    let kind = factor_kind(graph, reference);
    match kind {
        FactorKind::Free if f.rank() != reference.len() => {
            return Err(Error::FactorMismatch(format!(
                "free factor of rank {} but quasimorphism of rank {}",
                reference.len(),
                f.rank()
            )))
        }
        FactorKind::Free => {}
        FactorKind::Dinfty if matches!(f.construction(), Construction::Zero { .. }) => {}
        FactorKind::Dinfty => {
            return Err(Error::FactorMismatch(
                "D∞ factors carry only the zero homogeneous quasimorphism".into(),
            ))
        }
        FactorKind::Other => {
            return Err(Error::FactorMismatch(
                "no evaluator for this factor type".into(),
            ))
        }
    }
    Ok(GraphProductQm {
        decomposition: d.clone(),
        factor_indices: factor_indices.to_vec(),
        isos,
        kind,
        inner: f.clone(),
    })
}

impl GraphProductQm {
    pub fn k(&self) -> usize {
        self.factor_indices.len()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.inner.is_homogeneous()
    }

    pub fn defect_bound(&self) -> Option<Rational> {
        self.inner
            .defect_bound()
            .map(|d| d * Rational::from_integer(self.k() as i64))
    }

    pub fn decomposition(&self) -> &JoinDecomposition {
        &self.decomposition
    }

    fn embed(&self, slot: usize, x: &GPWord) -> Result<Word> {
        let rank = self.inner.rank();
        let letters = x.syllables.iter().flat_map(|&(k, e)| {
            let g = (self.isos[slot][k] + 1) as i32;
            std::iter::repeat_n(e.signum() as i32 * g, e.unsigned_abs() as usize)
        });
        Word::reduce(letters, rank)
    }

    pub fn evaluate(&self, x: &GPWord) -> Result<Rational> {
        let parts = project_kill_h0(x, &self.decomposition)?;
        if self.kind == FactorKind::Dinfty {
            return Ok(Rational::zero());
        }
        let mut total = Rational::zero();
        for (slot, &i) in self.factor_indices.iter().enumerate() {
            total += self.inner.evaluate(&self.embed(slot, &parts[i])?)?;
        }
        Ok(total)
    }

    /// Places `w ∈ F_r` in chosen factor `slot`.
    pub fn place(&self, slot: usize, w: &Word) -> Result<GPWord> {
        let factor = &self.decomposition.factors[self.factor_indices[slot]];
        let mut from_ref = vec![0; factor.len()];
        for (k, &r) in self.isos[slot].iter().enumerate() {
            from_ref[r] = factor[k];
        }
        let raw: Vec<(usize, i64)> = w
            .letters()
            .iter()
            .map(|&l| {
                (
                    from_ref[l.unsigned_abs() as usize - 1],
                    i64::from(l.signum()),
                )
            })
            .collect();
        normal_form(&self.decomposition.graph, &raw)
    }

    /// The graph automorphism sending chosen factor `slot` onto chosen factor
    /// `perm[slot]` through the fixed identifications, fixing all other
    /// vertices.
    pub fn permute_factors(&self, x: &GPWord, perm: &[usize]) -> Result<GPWord> {
        let k = self.k();
        let mut sorted = perm.to_vec();
        sorted.sort_unstable();
        if sorted != (0..k).collect::<Vec<_>>() {
            return Err(Error::InvalidParameter(format!(
                "{perm:?} is not a permutation of {k} factors"
            )));
        }
        if *x.graph != *self.decomposition.graph {
            return Err(Error::GraphMismatch);
        }
        let mut image: Vec<usize> = (0..x.graph.len()).collect();
        for (slot, &dst_slot) in perm.iter().enumerate() {
            let src = &self.decomposition.factors[self.factor_indices[slot]];
            let dst = &self.decomposition.factors[self.factor_indices[dst_slot]];
            for (a, &v) in src.iter().enumerate() {
                let r = self.isos[slot][a];
                let b = self.isos[dst_slot]
                    .iter()
                    .position(|&q| q == r)
                    .expect("bijection");
                image[v] = dst[b];
            }
        }
        let raw: Vec<_> = x.syllables.iter().map(|&(v, e)| (image[v], e)).collect();
        normal_form(&x.graph, &raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_word;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn graph(labels: Vec<u32>, edges: &[(usize, usize)]) -> Arc<VertexGraph> {
        Arc::new(VertexGraph::new(labels, edges).unwrap())
    }

    fn nf(g: &Arc<VertexGraph>, raw: &[(usize, i64)]) -> Vec<(usize, i64)> {
        normal_form(g, raw).unwrap().syllables().to_vec()
    }

    /// K₁ ∗ (F₂ pair) ∗ (F₂ pair): vertex 0 central, pairs {1,2} and {3,4}.
    pub(crate) fn pipeline_graph() -> Arc<VertexGraph> {
        let mut edges = vec![(0, 1), (0, 2), (0, 3), (0, 4)];
        edges.extend([(1, 3), (1, 4), (2, 3), (2, 4)]);
        graph(vec![0; 5], &edges)
    }

    #[test]
    fn refine_examples() {
        let (g, c) = refine(&[AbelianGroup::cyclic(6)], &[]).unwrap();
        assert_eq!(g.labels(), &[2, 3]);
        assert!(g.adjacent(0, 1));
        assert_eq!(c, vec![vec![0, 1]]);
        let (g, _) = refine(&[AbelianGroup::cyclic(0)], &[]).unwrap();
        assert_eq!(g.labels(), &[0]);
        let z2 = AbelianGroup {
            free_rank: 2,
            torsion: vec![],
        };
        let (g, _) = refine(&[z2], &[]).unwrap();
        assert_eq!(g.labels(), &[0, 0]);
        assert!(g.adjacent(0, 1));
        let (g, c) = refine(
            &[AbelianGroup::cyclic(12), AbelianGroup::cyclic(5)],
            &[(0, 1)],
        )
        .unwrap();
        assert_eq!(g.labels(), &[3, 4, 5]);
        assert_eq!(c[1], vec![2]);
        assert!(g.adjacent(0, 2) && g.adjacent(1, 2));
    }

    #[test]
    fn normal_form_examples() {
        let edge = graph(vec![0, 0], &[(0, 1)]);
        assert!(nf(&edge, &[(1, 1), (1, -1)]).is_empty());
        assert_eq!(nf(&edge, &[(1, 1), (0, 1)]), vec![(0, 1), (1, 1)]);
        // path u–v–w with u, w non-adjacent
        let path = graph(vec![0, 0, 0], &[(0, 1), (1, 2)]);
        let (u, v, w) = (0, 1, 2);
        assert_eq!(
            nf(&path, &[(u, 1), (w, 1), (u, 1)]),
            vec![(u, 1), (w, 1), (u, 1)]
        );
        assert_eq!(nf(&path, &[(u, 1), (v, 1), (u, 1)]), vec![(u, 2), (v, 1)]);
        assert_eq!(nf(&path, &[(u, 1), (v, 1), (v, -1), (u, 1)]), vec![(u, 2)]);
        assert_eq!(nf(&path, &[(w, 1), (u, 1)]), vec![(w, 1), (u, 1)]);
        let z3 = graph(vec![3], &[]);
        assert_eq!(nf(&z3, &[(0, 2), (0, 2)]), vec![(0, 1)]);
        assert_eq!(nf(&z3, &[(0, -1)]), vec![(0, 2)]);
        assert!(normal_form(&z3, &[(1, 1)]).is_err());
    }

    #[test]
    fn dinfty_arithmetic() {
        let d = graph(vec![2, 2], &[]);
        let uv = GPWord::parse(&d, "0^1 1^1").unwrap();
        let cube = gp_multiply(&gp_multiply(&uv, &uv).unwrap(), &uv).unwrap();
        let inv_sq = gp_invert(&gp_multiply(&uv, &uv).unwrap());
        assert_eq!(gp_multiply(&cube, &inv_sq).unwrap(), uv);
    }

    #[test]
    fn multiply_group_laws() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = graph(vec![0, 2, 3, 0], &[(0, 1), (1, 2), (2, 3)]);
        for _ in 0..200 {
            let x = GPWord::random(&g, &mut rng, 8);
            let y = GPWord::random(&g, &mut rng, 8);
            let z = GPWord::random(&g, &mut rng, 8);
            assert!(gp_multiply(&x, &gp_invert(&x)).unwrap().is_identity());
            let l = gp_multiply(&gp_multiply(&x, &y).unwrap(), &z).unwrap();
            let r = gp_multiply(&x, &gp_multiply(&y, &z).unwrap()).unwrap();
            assert_eq!(l, r);
        }
        let other = graph(vec![0], &[]);
        assert!(gp_multiply(&GPWord::identity(&g), &GPWord::identity(&other)).is_err());
    }

    #[test]
    fn join_examples() {
        let k3 = Arc::new(VertexGraph::complete(vec![0, 2, 3]));
        let d = join_decompose(&k3);
        assert_eq!(d.gamma0, vec![0, 1, 2]);
        assert!(d.factors.is_empty());
        let pair = graph(vec![0, 0], &[]);
        assert_eq!(join_decompose(&pair).factors, vec![vec![0, 1]]);
        let c4 = graph(vec![2; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let d = join_decompose(&c4);
        assert!(d.gamma0.is_empty());
        assert_eq!(d.factors, vec![vec![0, 2], vec![1, 3]]);
        assert_eq!(d.classes, vec![vec![0, 1]]);
        let d = join_decompose(&pipeline_graph());
        assert_eq!(d.gamma0, vec![0]);
        assert_eq!(d.factors, vec![vec![1, 2], vec![3, 4]]);
    }

    #[test]
    fn classification_examples() {
        let c4 = graph(vec![2; 4], &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        assert!(classify_virtually_abelian(&c4));
        assert!(!classify_virtually_abelian(&graph(vec![0, 0], &[])));
        assert!(classify_virtually_abelian(&Arc::new(
            VertexGraph::complete(vec![0, 3, 2])
        )));
        assert!(is_dinfty(&graph(vec![2, 2], &[]), &[0, 1]));
        assert!(!is_dinfty(&graph(vec![0, 0], &[]), &[0, 1]));
        assert!(!is_dinfty(&graph(vec![2, 2, 2], &[]), &[0, 1, 2]));
    }

    #[test]
    fn projection() {
        let g = pipeline_graph();
        let d = join_decompose(&g);
        let z = GPWord::parse(&g, "0^3").unwrap();
        assert!(project_kill_h0(&z, &d)
            .unwrap()
            .iter()
            .all(GPWord::is_identity));
        let x = GPWord::parse(&g, "0^1 1^1 2^1 3^1").unwrap();
        let p = project_kill_h0(&x, &d).unwrap();
        assert_eq!(p[0].syllables(), &[(0, 1), (1, 1)]);
        assert_eq!(p[1].syllables(), &[(0, 1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let x = GPWord::random(&g, &mut rng, 6);
            let y = GPWord::random(&g, &mut rng, 6);
            let pxy = project_kill_h0(&gp_multiply(&x, &y).unwrap(), &d).unwrap();
            let (px, py) = (
                project_kill_h0(&x, &d).unwrap(),
                project_kill_h0(&y, &d).unwrap(),
            );
            for i in 0..2 {
                assert_eq!(pxy[i], gp_multiply(&px[i], &py[i]).unwrap());
            }
        }
    }

    #[test]
    fn pipeline_examples() {
        let g = pipeline_graph();
        let d = join_decompose(&g);
        let f = Quasimorphism::brooks_homogeneous(&parse_word("ab", 2).unwrap()).unwrap();
        let q = gp_pipeline_qm(&d, &[0, 1], &f).unwrap();
        assert_eq!(q.defect_bound(), f.defect_bound().map(|b| b * 2));
        let ab = parse_word("ab", 2).unwrap();
        for m in 1..5 {
            let x = q.place(0, &ab.power(m)).unwrap();
            assert_eq!(q.evaluate(&x).unwrap(), Rational::from_integer(m));
            let swapped = q.permute_factors(&x, &[1, 0]).unwrap();
            assert_eq!(swapped, q.place(1, &ab.power(m)).unwrap());
            assert_eq!(q.evaluate(&swapped).unwrap(), Rational::from_integer(m));
        }
        let z = GPWord::parse(&g, "0^-2").unwrap();
        assert!(q.evaluate(&z).unwrap().is_zero());
        let zero_on_dinfty = graph(vec![2, 2], &[]);
        let dd = join_decompose(&zero_on_dinfty);
        assert!(gp_pipeline_qm(&dd, &[0], &f).is_err());
        assert!(gp_pipeline_qm(&dd, &[0], &Quasimorphism::zero(2)).is_ok());
        let mixed = graph(vec![0, 0, 2, 2], &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        let dm = join_decompose(&mixed);
        assert!(gp_pipeline_qm(&dm, &[0, 1], &f).is_err());
    }

    #[test]
    fn text_round_trip() {
        let g = pipeline_graph();
        assert_eq!(VertexGraph::parse(&g.to_text()).unwrap(), *g);
        let e = VertexGraph::parse("vertices 2\nedge 0 x\n").unwrap_err();
        assert!(matches!(
            e,
            Error::Parse {
                line: 2,
                column: 8,
                ..
            }
        ));
        assert!(VertexGraph::parse("label 0 2\n").is_err());
        let x = GPWord::parse(&g, "1^2 0^1").unwrap();
        assert_eq!(x.to_string(), "0^1 1^2");
        assert_eq!(GPWord::parse(&g, &x.to_string()).unwrap(), x);
        assert!(GPWord::parse(&g, "ε").unwrap().is_identity());
        assert!(matches!(
            GPWord::parse(&g, "0^1 9^1"),
            Err(Error::Parse { column: 5, .. })
        ));
    }
}
