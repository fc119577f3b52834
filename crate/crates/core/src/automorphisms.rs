//! Automorphisms of free groups stored as basis-image tables.
//!
//! Every [`Automorphism`] carries the images of the basis under itself and
//! under its inverse, plus the [`AutoWitness`] it was assembled from. The
//! two tables are checked against each other whenever a value is built, so
//! an `Automorphism` in hand is always a genuine automorphism.

use std::collections::HashSet;
use std::fmt;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::notation::parse_word;
use crate::words::{alphabet, CyclicWord, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `x_t ↦ m · x_t`
    Left,
    /// `x_t ↦ x_t · m`
    Right,
}

/// How an automorphism was built. Rebuilding from the witness reproduces
/// the automorphism exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AutoWitness {
    Identity,
    Transvection {
        target: usize,
        multiplier: Letter,
        side: Side,
    },
    Inversion {
        index: usize,
    },
    /// Generator `i` maps to generator `images[i - 1]`.
    Permutation {
        images: Vec<usize>,
    },
    ConjugationByWord {
        word: Word,
    },
    /// `factors[0] ∘ factors[1] ∘ …`, so the last factor acts first.
    Composite {
        factors: Vec<AutoWitness>,
    },
}

impl AutoWitness {
    pub fn build(&self, rank: usize) -> Result<Automorphism> {
        match self {
            AutoWitness::Identity => Ok(Automorphism::identity(rank)),
            AutoWitness::Transvection {
                target,
                multiplier,
                side,
            } => Automorphism::transvection(rank, *target, *multiplier, *side),
            AutoWitness::Inversion { index } => Automorphism::inversion(rank, *index),
            AutoWitness::Permutation { images } => Automorphism::permutation(rank, images),
            AutoWitness::ConjugationByWord { word } => {
                if word.rank() != rank {
                    return Err(Error::RankMismatch {
                        left: rank,
                        right: word.rank(),
                    });
                }
                Ok(Automorphism::ad(word))
            }
            AutoWitness::Composite { factors } => factors
                .iter()
                .try_fold(Automorphism::identity(rank), |acc, f| {
                    acc.compose(&f.build(rank)?)
                }),
        }
    }

    /// Number of elementary factors.
    pub fn depth(&self) -> usize {
        match self {
            AutoWitness::Identity => 0,
            AutoWitness::Composite { factors } => factors.iter().map(AutoWitness::depth).sum(),
            _ => 1,
        }
    }

    /// Reads the notation printed by `Display`: factors such as `id`,
    /// `tv(b->ab)`, `tv(b->bA)`, `inv(1)`, `perm(2,1)` and `ad(ab)` joined
    /// by `*`, outermost first. Words inside `ad(..)` get rank `rank`.
    pub fn parse(s: &str, rank: usize) -> Result<AutoWitness> {
        let mut factors = Vec::new();
        let mut depth = 0i32;
        let mut start = 0;
        for (i, c) in s.char_indices().chain([(s.len(), '*')]) {
            match c {
                '(' => depth += 1,
                ')' => depth -= 1,
                '*' if depth == 0 => {
                    factors.push(Self::parse_factor(&s[start..i], start, rank)?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if depth != 0 {
            return Err(Error::Parse {
                line: 1,
                column: s.len() + 1,
                message: "unbalanced parentheses".into(),
            });
        }
        Ok(match factors.len() {
            1 => factors.pop().unwrap(),
            _ => AutoWitness::Composite { factors },
        })
    }

    fn parse_factor(raw: &str, offset: usize, rank: usize) -> Result<AutoWitness> {
        let column = offset + raw.len() - raw.trim_start().len() + 1;
        let bad = |message: String| Error::Parse {
            line: 1,
            column,
            message,
        };
        let t = raw.trim();
        if t == "id" {
            return Ok(AutoWitness::Identity);
        }
        let (name, rest) = t
            .split_once('(')
            .ok_or_else(|| bad(format!("unrecognised factor `{t}`")))?;
        let arg = rest
            .strip_suffix(')')
            .ok_or_else(|| bad(format!("missing `)` in `{t}`")))?;
        let index = |x: &str| -> Result<usize> {
            x.trim()
                .parse()
                .map_err(|_| bad(format!("expected an index, found `{x}`")))
        };
        match name {
            "inv" => Ok(AutoWitness::Inversion { index: index(arg)? }),
            "perm" => Ok(AutoWitness::Permutation {
                images: arg.split(',').map(index).collect::<Result<_>>()?,
            }),
            "ad" => Ok(AutoWitness::ConjugationByWord {
                word: parse_word(arg, rank)?,
            }),
            "tv" => {
                let (lhs, rhs) = arg
                    .split_once("->")
                    .ok_or_else(|| bad(format!("expected `x->mx` or `x->xm`, found `{arg}`")))?;
                let lhs = crate::notation::parse_letters(lhs)?;
                let rhs = crate::notation::parse_letters(rhs)?;
                match (lhs.as_slice(), rhs.as_slice()) {
                    (&[x], &[m, y]) if x > 0 && y == x && m.abs() != x => {
                        Ok(AutoWitness::Transvection {
                            target: x as usize,
                            multiplier: m,
                            side: Side::Left,
                        })
                    }
                    (&[x], &[y, m]) if x > 0 && y == x && m.abs() != x => {
                        Ok(AutoWitness::Transvection {
                            target: x as usize,
                            multiplier: m,
                            side: Side::Right,
                        })
                    }
                    _ => Err(bad(format!("malformed transvection `{t}`"))),
                }
            }
            other => Err(bad(format!("unknown factor `{other}`"))),
        }
    }

    fn flatten_into(self, out: &mut Vec<AutoWitness>) {
        match self {
            AutoWitness::Identity => {}
            AutoWitness::Composite { factors } => {
                for f in factors {
                    f.flatten_into(out);
                }
            }
            other => out.push(other),
        }
    }

    fn then(self, inner: AutoWitness) -> AutoWitness {
        let mut factors = Vec::new();
        self.flatten_into(&mut factors);
        inner.flatten_into(&mut factors);
        match factors.len() {
            0 => AutoWitness::Identity,
            1 => factors.pop().unwrap(),
            _ => AutoWitness::Composite { factors },
        }
    }

    fn inverse(&self) -> AutoWitness {
        match self {
            AutoWitness::Identity | AutoWitness::Inversion { .. } => self.clone(),
            AutoWitness::Transvection {
                target,
                multiplier,
                side,
            } => AutoWitness::Transvection {
                target: *target,
                multiplier: -*multiplier,
                side: *side,
            },
            AutoWitness::Permutation { images } => {
                let mut inv = vec![0; images.len()];
                for (i, &j) in images.iter().enumerate() {
                    inv[j - 1] = i + 1;
                }
                AutoWitness::Permutation { images: inv }
            }
            AutoWitness::ConjugationByWord { word } => AutoWitness::ConjugationByWord {
                word: word.invert(),
            },
            AutoWitness::Composite { factors } => AutoWitness::Composite {
                factors: factors.iter().rev().map(AutoWitness::inverse).collect(),
            },
        }
    }
}

impl fmt::Display for AutoWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AutoWitness::Identity => f.write_str("id"),
            AutoWitness::Transvection {
                target,
                multiplier,
                side,
            } => {
                let t = crate::notation::format_letters(&[*target as Letter]);
                let m = crate::notation::format_letters(&[*multiplier]);
                match side {
                    Side::Left => write!(f, "tv({t}->{m}{t})"),
                    Side::Right => write!(f, "tv({t}->{t}{m})"),
                }
            }
            AutoWitness::Inversion { index } => write!(f, "inv({index})"),
            AutoWitness::Permutation { images } => {
                let parts: Vec<String> = images.iter().map(|i| i.to_string()).collect();
                write!(f, "perm({})", parts.join(","))
            }
            AutoWitness::ConjugationByWord { word } => write!(f, "ad({word})"),
            AutoWitness::Composite { factors } => {
                let parts: Vec<String> = factors.iter().map(|w| w.to_string()).collect();
                f.write_str(&parts.join("*"))
            }
        }
    }
}

/// An automorphism of the free group of rank `rank`.
#[derive(Clone)]
pub struct Automorphism {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
    witness: AutoWitness,
}

impl PartialEq for Automorphism {
    fn eq(&self, other: &Self) -> bool {
        self.images == other.images
    }
}

impl Eq for Automorphism {}

impl Hash for Automorphism {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.images.hash(state);
    }
}

fn substitute(table: &[Word], w: &Word, rank: usize) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    let mut push = |x: Letter| {
        if out.last() == Some(&-x) {
            out.pop();
        } else {
            out.push(x);
        }
    };
    for &x in w.letters() {
        let image = &table[x.unsigned_abs() as usize - 1];
        if x > 0 {
            image.letters().iter().for_each(|&y| push(y));
        } else {
            image.letters().iter().rev().for_each(|&y| push(-y));
        }
    }
    Word::from_reduced(rank, out)
}

impl Automorphism {
    /// Builds an automorphism from both tables, verifying that they are
    /// mutually inverse on the basis.
    pub fn from_tables(
        images: Vec<Word>,
        inverse_images: Vec<Word>,
        witness: AutoWitness,
    ) -> Result<Self> {
        let rank = images.len();
        if rank == 0 || inverse_images.len() != rank {
            return Err(Error::InvalidParameter(
                "image tables must be nonempty and of equal length".into(),
            ));
        }
        if let Some(w) = images
            .iter()
            .chain(&inverse_images)
            .find(|w| w.rank() != rank)
        {
            return Err(Error::RankMismatch {
                left: rank,
                right: w.rank(),
            });
        }
        let phi = Automorphism {
            rank,
            images,
            inverse_images,
            witness,
        };
        for i in 1..=rank {
            let x = Word::from_reduced(rank, vec![i as Letter]);
            let there = substitute(
                &phi.inverse_images,
                &substitute(&phi.images, &x, rank),
                rank,
            );
            let back = substitute(
                &phi.images,
                &substitute(&phi.inverse_images, &x, rank),
                rank,
            );
            if there != x || back != x {
                return Err(Error::BrokenAutomorphism { generator: i });
            }
        }
        Ok(phi)
    }

    pub fn identity(rank: usize) -> Self {
        let basis: Vec<Word> = (1..=rank)
            .map(|i| Word::from_reduced(rank, vec![i as Letter]))
            .collect();
        Automorphism {
            rank,
            images: basis.clone(),
            inverse_images: basis,
            witness: AutoWitness::Identity,
        }
    }

    fn check_index(rank: usize, i: usize) -> Result<()> {
        if i == 0 || i > rank {
            Err(Error::InvalidParameter(format!(
                "generator index {i} out of range for rank {rank}"
            )))
        } else {
            Ok(())
        }
    }

    /// The Nielsen transvection `x_target ↦ m·x_target` (left) or
    /// `x_target ↦ x_target·m` (right), where `m` is a signed letter.
    pub fn transvection(
        rank: usize,
        target: usize,
        multiplier: Letter,
        side: Side,
    ) -> Result<Self> {
        Self::check_index(rank, target)?;
        Self::check_index(rank, multiplier.unsigned_abs() as usize)?;
        if multiplier.unsigned_abs() as usize == target {
            return Err(Error::InvalidParameter(
                "transvection needs distinct target and multiplier generators".into(),
            ));
        }
        let x = target as Letter;
        let table = |m: Letter| {
            let mut t = Self::identity(rank).images;
            t[target - 1] = match side {
                Side::Left => Word::from_reduced(rank, vec![m, x]),
                Side::Right => Word::from_reduced(rank, vec![x, m]),
            };
            t
        };
        Self::from_tables(
            table(multiplier),
            table(-multiplier),
            AutoWitness::Transvection {
                target,
                multiplier,
                side,
            },
        )
    }

    /// `x_i ↦ x_i⁻¹`.
    pub fn inversion(rank: usize, index: usize) -> Result<Self> {
        Self::check_index(rank, index)?;
        let mut t = Self::identity(rank).images;
        t[index - 1] = Word::from_reduced(rank, vec![-(index as Letter)]);
        Self::from_tables(t.clone(), t, AutoWitness::Inversion { index })
    }

    /// `x_i ↦ x_{images[i-1]}`.
    pub fn permutation(rank: usize, images: &[usize]) -> Result<Self> {
        let mut seen = vec![false; rank];
        if images.len() != rank {
            return Err(Error::InvalidParameter(
                "permutation has wrong length".into(),
            ));
        }
        for &j in images {
            Self::check_index(rank, j)?;
            if std::mem::replace(&mut seen[j - 1], true) {
                return Err(Error::InvalidParameter(format!(
                    "{j} repeated in permutation"
                )));
            }
        }
        let mut inv = vec![Word::identity(rank); rank];
        let fwd: Vec<Word> = images
            .iter()
            .enumerate()
            .map(|(i, &j)| {
                inv[j - 1] = Word::from_reduced(rank, vec![(i + 1) as Letter]);
                Word::from_reduced(rank, vec![j as Letter])
            })
            .collect();
        Self::from_tables(
            fwd,
            inv,
            AutoWitness::Permutation {
                images: images.to_vec(),
            },
        )
    }

    /// Swaps generators `i` and `j`.
    pub fn transposition(rank: usize, i: usize, j: usize) -> Result<Self> {
        Self::check_index(rank, i)?;
        Self::check_index(rank, j)?;
        let mut p: Vec<usize> = (1..=rank).collect();
        p.swap(i - 1, j - 1);
        Self::permutation(rank, &p)
    }

    /// Inner automorphism `x ↦ g x g⁻¹`.
    pub fn ad(g: &Word) -> Self {
        let rank = g.rank();
        let gi = g.invert();
        let conj = |a: &Word, b: &Word| -> Vec<Word> {
            (1..=rank)
                .map(|i| {
                    let x = Word::from_reduced(rank, vec![i as Letter]);
                    &(a * &x) * b
                })
                .collect()
        };
        Automorphism {
            rank,
            images: conj(g, &gi),
            inverse_images: conj(&gi, g),
            witness: if g.is_empty() {
                AutoWitness::Identity
            } else {
                AutoWitness::ConjugationByWord { word: g.clone() }
            },
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn witness(&self) -> &AutoWitness {
        &self.witness
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.letters() == [(i + 1) as Letter])
    }

    fn check_rank(&self, rank: usize) -> Result<()> {
        if self.rank == rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                left: self.rank,
                right: rank,
            })
        }
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        self.check_rank(w.rank())?;
        Ok(substitute(&self.images, w, self.rank))
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        self.check_rank(other.rank)?;
        let images = other
            .images
            .iter()
            .map(|w| substitute(&self.images, w, self.rank))
            .collect();
        let inverse_images = self
            .inverse_images
            .iter()
            .map(|w| substitute(&other.inverse_images, w, self.rank))
            .collect();
        Self::from_tables(
            images,
            inverse_images,
            self.witness.clone().then(other.witness.clone()),
        )
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
            witness: self.witness.inverse(),
        }
    }

    /// `self ∘ other ∘ self⁻¹`.
    pub fn conjugate(&self, other: &Automorphism) -> Result<Automorphism> {
        self.compose(other)?.compose(&self.inverse())
    }

    /// The autocommutator `[φ, g] = φ(g)·g⁻¹`.
    pub fn autocommutator(&self, g: &Word) -> Result<Word> {
        self.apply(g)?.multiply(&g.invert())
    }

    pub fn to_record(&self) -> AutomorphismRecord {
        AutomorphismRecord {
            rank: self.rank,
            images: self.images.iter().map(Word::to_string).collect(),
            witness: self.witness.clone(),
        }
    }
}

impl fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let images: Vec<String> = self.images.iter().map(Word::to_string).collect();
        write!(f, "Automorphism[{}]({})", images.join(", "), self.witness)
    }
}

/// Serialized form: basis images as strings plus the witness trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismRecord {
    pub rank: usize,
    pub images: Vec<String>,
    pub witness: AutoWitness,
}

impl TryFrom<AutomorphismRecord> for Automorphism {
    type Error = Error;

    fn try_from(rec: AutomorphismRecord) -> Result<Self> {
        let phi = rec.witness.build(rec.rank)?;
        let images = rec
            .images
            .iter()
            .map(|s| parse_word(s, rec.rank))
            .collect::<Result<Vec<_>>>()?;
        if images != phi.images {
            return Err(Error::InvalidParameter(
                "basis images do not match the witness".into(),
            ));
        }
        Ok(phi)
    }
}

impl Serialize for Automorphism {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_record().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Automorphism {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rec = AutomorphismRecord::deserialize(d)?;
        Automorphism::try_from(rec).map_err(serde::de::Error::custom)
    }
}

/// Nielsen generators in canonical order: transpositions, inversions, then
/// transvections ordered by target, multiplier letter and side.
pub fn elementary_generators(rank: usize) -> Vec<Automorphism> {
    let mut out = Vec::new();
    for i in 1..=rank {
        for j in i + 1..=rank {
            out.push(Automorphism::transposition(rank, i, j).expect("valid indices"));
        }
    }
    for i in 1..=rank {
        out.push(Automorphism::inversion(rank, i).expect("valid index"));
    }
    for t in 1..=rank {
        for m in alphabet(rank) {
            if m.unsigned_abs() as usize == t {
                continue;
            }
            for side in [Side::Left, Side::Right] {
                out.push(Automorphism::transvection(rank, t, m, side).expect("valid transvection"));
            }
        }
    }
    out
}

/// All composites of at most `depth` elementary generators, deduplicated by
/// basis images, listed by depth and then in generation order. The identity
/// comes first at depth 0.
pub fn composites_up_to(rank: usize, depth: usize) -> Vec<(usize, Automorphism)> {
    let gens = elementary_generators(rank);
    let id = Automorphism::identity(rank);
    let mut seen: HashSet<Vec<Word>> = HashSet::from([id.images.clone()]);
    let mut out = vec![(0, id)];
    let mut layer_start = 0;
    for d in 1..=depth {
        let layer_end = out.len();
        for p in layer_start..layer_end {
            for g in &gens {
                let phi = out[p].1.compose(g).expect("equal ranks");
                if seen.insert(phi.images.clone()) {
                    out.push((d, phi));
                }
            }
        }
        layer_start = layer_end;
    }
    out
}

/// A random composite of `depth` elementary generators.
pub fn random_composite<R: Rng + ?Sized>(rng: &mut R, rank: usize, depth: usize) -> Automorphism {
    let gens = elementary_generators(rank);
    (0..depth).fold(Automorphism::identity(rank), |acc, _| {
        acc.compose(&gens[rng.gen_range(0..gens.len())])
            .expect("equal ranks")
    })
}

/// Looks for `φ` (a composite of at most `depth` elementary generators) and
/// `1 <= k <= k_max` with `φ(g^k)` conjugate to `g^{-k}`. Returns the first
/// witness in canonical order: least depth, then generation order, then
/// least `k`. `None` does not prove chirality.
pub fn achirality_search(
    g: &Word,
    k_max: u32,
    depth: usize,
) -> Result<Option<(Automorphism, u32)>> {
    if g.is_empty() {
        return Err(Error::IdentityNotAllowed);
    }
    let targets: Vec<(Word, CyclicWord)> = (1..=k_max)
        .map(|k| {
            let gk = g.power(i64::from(k));
            let inv = CyclicWord::of(&gk.invert());
            (gk, inv)
        })
        .collect();
    for (_, phi) in composites_up_to(g.rank(), depth) {
        for (k, (gk, target)) in (1..=k_max).zip(&targets) {
            if CyclicWord::of(&phi.apply(gk)?) == *target {
                return Ok(Some((phi, k)));
            }
        }
    }
    Ok(None)
}

/// A homomorphism between free groups given by generator images.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Homomorphism {
    source_rank: usize,
    target_rank: usize,
    images: Vec<Word>,
}

impl Homomorphism {
    pub fn new(target_rank: usize, images: Vec<Word>) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidParameter(
                "homomorphism needs a nonempty basis".into(),
            ));
        }
        if let Some(w) = images.iter().find(|w| w.rank() != target_rank) {
            return Err(Error::RankMismatch {
                left: target_rank,
                right: w.rank(),
            });
        }
        Ok(Homomorphism {
            source_rank: images.len(),
            target_rank,
            images,
        })
    }

    pub fn identity(rank: usize) -> Self {
        Homomorphism {
            source_rank: rank,
            target_rank: rank,
            images: Automorphism::identity(rank).images,
        }
    }

    pub fn source_rank(&self) -> usize {
        self.source_rank
    }

    pub fn target_rank(&self) -> usize {
        self.target_rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn apply(&self, w: &Word) -> Result<Word> {
        if w.rank() != self.source_rank {
            return Err(Error::RankMismatch {
                left: self.source_rank,
                right: w.rank(),
            });
        }
        Ok(substitute(&self.images, w, self.target_rank))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn w(s: &str) -> Word {
        parse_word(s, 2).unwrap()
    }

    fn rand_word(
        rng: &mut ChaCha8Rng,
        rank: usize,
        lens: impl rand::distributions::uniform::SampleRange<usize>,
    ) -> Word {
        let len = rng.gen_range(lens);
        Word::random(rng, rank, len)
    }

    fn rand_auto(
        rng: &mut ChaCha8Rng,
        rank: usize,
        depths: impl rand::distributions::uniform::SampleRange<usize>,
    ) -> Automorphism {
        let d = rng.gen_range(depths);
        random_composite(rng, rank, d)
    }

    fn b_to_ab() -> Automorphism {
        Automorphism::transvection(2, 2, 1, Side::Left).unwrap()
    }

    #[test]
    fn elementary_examples() {
        let t = b_to_ab();
        assert_eq!(t.images(), &[w("a"), w("ab")]);
        assert_eq!(t.inverse_images(), &[w("a"), w("Ab")]);
        let inv = Automorphism::inversion(2, 1).unwrap();
        assert_eq!(inv.images(), &[w("A"), w("b")]);
        assert_eq!(inv.inverse(), inv);
        let swap = Automorphism::transposition(2, 1, 2).unwrap();
        assert_eq!(swap.images(), &[w("b"), w("a")]);
        assert!(swap.compose(&swap).unwrap().is_identity());
    }

    #[test]
    fn transvection_rejects_equal_indices() {
        assert!(Automorphism::transvection(2, 1, 1, Side::Left).is_err());
        assert!(Automorphism::transvection(2, 1, -1, Side::Right).is_err());
        assert!(Automorphism::transvection(2, 3, 1, Side::Right).is_err());
    }

    #[test]
    fn broken_tables_are_rejected() {
        let err = Automorphism::from_tables(
            vec![w("a"), w("ab")],
            vec![w("a"), w("ab")],
            AutoWitness::Identity,
        );
        assert!(matches!(err, Err(Error::BrokenAutomorphism { .. })));
    }

    #[test]
    fn apply_examples() {
        let swap = Automorphism::transposition(2, 1, 2).unwrap();
        let c = w("abAB");
        assert_eq!(swap.apply(&c).unwrap(), w("baBA"));
        assert_eq!(swap.apply(&c).unwrap(), c.invert());
        assert_eq!(Automorphism::identity(2).apply(&c).unwrap(), c);
        assert_eq!(b_to_ab().apply(&w("b")).unwrap(), w("ab"));
        assert!(b_to_ab().apply(&Word::identity(2)).unwrap().is_empty());
        assert!(b_to_ab().apply(&Word::identity(3)).is_err());
    }

    #[test]
    fn compose_and_inverse_examples() {
        let t = b_to_ab();
        let tt = t.compose(&t).unwrap();
        assert_eq!(tt.apply(&w("b")).unwrap(), w("aab"));
        assert_eq!(t.inverse().images(), &[w("a"), w("Ab")]);
        assert!(t.compose(&t.inverse()).unwrap().is_identity());
        assert_eq!(
            Automorphism::identity(2).inverse(),
            Automorphism::identity(2)
        );
        assert!(t.compose(&Automorphism::identity(3)).is_err());
    }

    #[test]
    fn ad_examples() {
        assert!(Automorphism::ad(&Word::identity(2)).is_identity());
        let ada = Automorphism::ad(&w("a"));
        assert_eq!(ada.images(), &[w("a"), w("abA")]);
    }

    #[test]
    fn autocommutator_examples() {
        assert_eq!(b_to_ab().autocommutator(&w("b")).unwrap(), w("a"));
        assert!(Automorphism::identity(2)
            .autocommutator(&w("abAB"))
            .unwrap()
            .is_empty());
        let swap = Automorphism::transposition(2, 1, 2).unwrap();
        let c = w("abAB");
        for n in 1..=8i64 {
            assert_eq!(swap.autocommutator(&c.power(n)).unwrap(), c.power(-2 * n));
        }
    }

    #[test]
    fn achirality_examples() {
        let swap = Automorphism::transposition(2, 1, 2).unwrap();
        let (phi, k) = achirality_search(&w("abAB"), 3, 1).unwrap().unwrap();
        assert_eq!((phi, k), (swap, 1));
        let (phi, k) = achirality_search(&w("a"), 3, 1).unwrap().unwrap();
        assert_eq!((phi, k), (Automorphism::inversion(2, 1).unwrap(), 1));
        assert!(achirality_search(&w("abAB"), 3, 0).unwrap().is_none());
        assert!(achirality_search(&Word::identity(2), 3, 1).is_err());
    }

    #[test]
    fn witness_rebuilds_and_serializes() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let phi = random_composite(&mut rng, 3, 6)
                .compose(&Automorphism::ad(&Word::random(&mut rng, 3, 4)))
                .unwrap();
            assert_eq!(phi.witness().build(3).unwrap(), phi);
            let json = serde_json::to_string(&phi).unwrap();
            let back: Automorphism = serde_json::from_str(&json).unwrap();
            assert_eq!(back, phi);
            assert_eq!(phi.inverse().inverse(), phi);
        }
    }

    #[test]
    fn ad_is_a_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let g = rand_word(&mut rng, 2, 0..12);
            let h = rand_word(&mut rng, 2, 0..12);
            let lhs = Automorphism::ad(&(&g * &h));
            let rhs = Automorphism::ad(&g).compose(&Automorphism::ad(&h)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inner_conjugation_formula() {
        // ad(φ(g)) = φ ∘ ad(g) ∘ φ⁻¹
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for rank in [2, 3] {
            for _ in 0..200 {
                let phi = rand_auto(&mut rng, rank, 0..=6);
                let g = rand_word(&mut rng, rank, 0..=20);
                let lhs = Automorphism::ad(&phi.apply(&g).unwrap());
                let rhs = phi.conjugate(&Automorphism::ad(&g)).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn autocommutator_equivariance() {
        // ψ([φ, g]) = [ψφψ⁻¹, ψ(g)]
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let rank = rng.gen_range(2..=3);
            let phi = rand_auto(&mut rng, rank, 0..=6);
            let psi = rand_auto(&mut rng, rank, 0..=6);
            let g = rand_word(&mut rng, rank, 0..=20);
            let lhs = psi.apply(&phi.autocommutator(&g).unwrap()).unwrap();
            let rhs = psi
                .conjugate(&phi)
                .unwrap()
                .autocommutator(&psi.apply(&g).unwrap())
                .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn composites_are_deduplicated() {
        let all = composites_up_to(2, 2);
        let distinct: HashSet<&Automorphism> = all.iter().map(|(_, a)| a).collect();
        assert_eq!(distinct.len(), all.len());
        assert_eq!(all[0].0, 0);
        assert_eq!(all.iter().filter(|(d, _)| *d == 1).count(), 11);
    }

    #[test]
    fn homomorphism_kills_generator() {
        let hom = Homomorphism::new(2, vec![w("a"), w("b"), Word::identity(2)]).unwrap();
        let c = parse_word("cacB", 3).unwrap();
        assert_eq!(hom.apply(&c).unwrap(), w("aB"));
        assert!(hom.apply(&w("a")).is_err());
    }

    #[test]
    fn witness_notation_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for rank in [2, 3] {
            for _ in 0..100 {
                let phi = rand_auto(&mut rng, rank, 0..=5);
                let text = phi.witness().to_string();
                let back = AutoWitness::parse(&text, rank)
                    .unwrap()
                    .build(rank)
                    .unwrap();
                assert_eq!(back, phi, "{text}");
            }
        }
        let phi = AutoWitness::parse("tv(b->ab) * ad(aB)*perm(2,1)*inv(1)*id", 2).unwrap();
        assert_eq!(phi.depth(), 4);
        let t = AutoWitness::parse("tv(b->bA)", 2).unwrap();
        assert_eq!(
            t,
            AutoWitness::Transvection {
                target: 2,
                multiplier: -1,
                side: Side::Right
            }
        );
        assert!(matches!(
            AutoWitness::parse("id*foo", 2),
            Err(Error::Parse { column: 4, .. })
        ));
        assert!(AutoWitness::parse("tv(b->aa)", 2).is_err());
        assert!(AutoWitness::parse("inv(1", 2).is_err());
    }
}
