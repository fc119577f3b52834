//! Reduced words in a free group of fixed rank.
//!
//! Letters are signed generator indices: `i` stands for the `i`-th basis
//! element and `-i` for its inverse, with `1 <= |i| <= rank`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Mul;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Letter = i32;

/// Sort key for letters: `1 < -1 < 2 < -2 < ...`.
#[inline]
pub fn letter_key(x: Letter) -> u32 {
    2 * x.unsigned_abs() - u32::from(x > 0)
}

/// Shortlex comparison of letter sequences under [`letter_key`].
pub fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| {
        a.iter()
            .map(|&x| letter_key(x))
            .cmp(b.iter().map(|&x| letter_key(x)))
    })
}

#[inline]
fn push_reduced(stack: &mut Vec<Letter>, x: Letter) {
    if stack.last() == Some(&-x) {
        stack.pop();
    } else {
        stack.push(x);
    }
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawWord", into = "RawWord")]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

#[derive(Serialize, Deserialize)]
struct RawWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl TryFrom<RawWord> for Word {
    type Error = Error;

    fn try_from(raw: RawWord) -> Result<Self> {
        Word::reduce(raw.letters, raw.rank)
    }
}

impl From<Word> for RawWord {
    fn from(w: Word) -> Self {
        RawWord {
            rank: w.rank,
            letters: w.letters,
        }
    }
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    /// The one-letter word `x`.
    pub fn letter(rank: usize, x: Letter) -> Result<Self> {
        Self::reduce([x], rank)
    }

    /// Freely reduces an arbitrary letter sequence.
    pub fn reduce<I: IntoIterator<Item = Letter>>(letters: I, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidParameter("rank must be positive".into()));
        }
        let mut stack = Vec::new();
        for x in letters {
            if x == 0 || x.unsigned_abs() as usize > rank {
                return Err(Error::MalformedLetter {
                    letter: i64::from(x),
                    rank,
                });
            }
            push_reduced(&mut stack, x);
        }
        Ok(Word {
            rank,
            letters: stack,
        })
    }

    /// Builds a word from letters that are already known to be valid and reduced.
    pub(crate) fn from_reduced(rank: usize, letters: Vec<Letter>) -> Self {
        debug_assert!(letters.windows(2).all(|p| p[0] != -p[1]));
        debug_assert!(letters
            .iter()
            .all(|&x| x != 0 && x.unsigned_abs() as usize <= rank));
        Word { rank, letters }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_rank(&self, other: &Word) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            })
        }
    }

    pub fn multiply(&self, other: &Word) -> Result<Word> {
        self.check_rank(other)?;
        let mut stack = self.letters.clone();
        stack.reserve(other.len());
        for &x in &other.letters {
            push_reduced(&mut stack, x);
        }
        Ok(Word::from_reduced(self.rank, stack))
    }

    pub fn invert(&self) -> Word {
        Word::from_reduced(self.rank, self.letters.iter().rev().map(|&x| -x).collect())
    }

    pub fn power(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Vec::with_capacity(base.len() * k.unsigned_abs() as usize);
        for _ in 0..k.unsigned_abs() {
            for &x in &base.letters {
                push_reduced(&mut out, x);
            }
        }
        Word::from_reduced(self.rank, out)
    }

    /// `w · self · w⁻¹`.
    pub fn conjugate_by(&self, w: &Word) -> Result<Word> {
        w.multiply(self)?.multiply(&w.invert())
    }

    /// The commutator `[u, v] = u v u⁻¹ v⁻¹`.
    pub fn commutator(u: &Word, v: &Word) -> Result<Word> {
        u.multiply(v)?.multiply(&u.invert())?.multiply(&v.invert())
    }

    /// Whether the basis generator `i` (in either sign) occurs in the word.
    pub fn uses_generator(&self, i: usize) -> bool {
        self.letters.iter().any(|&x| x.unsigned_abs() as usize == i)
    }

    /// Number of occurrences of `pattern` as a subword, overlaps allowed.
    pub fn count_occurrences(&self, pattern: &[Letter]) -> usize {
        if pattern.is_empty() || pattern.len() > self.len() {
            return 0;
        }
        self.letters
            .windows(pattern.len())
            .filter(|w| *w == pattern)
            .count()
    }

    /// Splits off a maximal conjugating prefix: `self = conjugator · core · conjugator⁻¹`,
    /// where `core` is the canonical rotation of the cyclic reduction.
    pub fn cyclic_reduce(&self) -> (CyclicWord, Word) {
        let l = &self.letters;
        let (mut i, mut j) = (0, l.len());
        while j - i >= 2 && l[i] == -l[j - 1] {
            i += 1;
            j -= 1;
        }
        let core = &l[i..j];
        let r = least_rotation(core);
        let mut conj = l[..i].to_vec();
        conj.extend_from_slice(&core[..r]);
        let mut rotated = core[r..].to_vec();
        rotated.extend_from_slice(&core[..r]);
        (
            CyclicWord {
                rank: self.rank,
                letters: rotated,
            },
            Word::from_reduced(self.rank, conj),
        )
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        self.letters.len() < 2 || self.letters[0] != -self.letters[self.letters.len() - 1]
    }

    pub fn is_conjugate(&self, other: &Word) -> Result<bool> {
        self.check_rank(other)?;
        Ok(self.cyclic_reduce().0 == other.cyclic_reduce().0)
    }

    /// A uniformly random reduced word of exactly `len` letters.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, rank: usize, len: usize) -> Word {
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        while letters.len() < len {
            let g = rng.gen_range(1..=rank as Letter);
            let x = if rng.gen_bool(0.5) { g } else { -g };
            if letters.last() != Some(&-x) {
                letters.push(x);
            }
        }
        Word::from_reduced(rank, letters)
    }

    /// All reduced words of length at most `max_len`, in shortlex order.
    pub fn enumerate(rank: usize, max_len: usize) -> Vec<Word> {
        let alphabet = alphabet(rank);
        let mut out = vec![Word::identity(rank)];
        let mut layer = vec![Vec::<Letter>::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * (2 * rank - 1).max(1));
            for w in &layer {
                for &x in &alphabet {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
            out.extend(next.iter().cloned().map(|l| Word::from_reduced(rank, l)));
            layer = next;
        }
        out
    }
}

/// Letters of the free group of the given rank in [`letter_key`] order.
pub fn alphabet(rank: usize) -> Vec<Letter> {
    (1..=rank as Letter).flat_map(|i| [i, -i]).collect()
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex order (rank first).
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank
            .cmp(&other.rank)
            .then_with(|| shortlex(&self.letters, &other.letters))
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Panics on rank mismatch; use [`Word::multiply`] for the fallible form.
    fn mul(self, rhs: &Word) -> Word {
        self.multiply(rhs).expect("rank mismatch in word product")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::notation::format_letters(&self.letters))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

fn least_rotation(l: &[Letter]) -> usize {
    let n = l.len();
    let key = |start: usize| (0..n).map(move |k| letter_key(l[(start + k) % n]));
    (1..n).fold(0, |best, r| if key(r).lt(key(best)) { r } else { best })
}

/// A conjugacy class, stored as the least rotation of a cyclically reduced word.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CyclicWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl CyclicWord {
    pub fn of(w: &Word) -> CyclicWord {
        w.cyclic_reduce().0
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_word(&self) -> Word {
        Word::from_reduced(self.rank, self.letters.clone())
    }

    /// Decomposes the class as `root^exponent` with `root` not a proper power.
    pub fn root(&self) -> (CyclicWord, usize) {
        let n = self.len();
        if n == 0 {
            return (self.clone(), 1);
        }
        let period = (1..=n)
            .find(|&p| {
                n.is_multiple_of(p) && (p..n).all(|i| self.letters[i] == self.letters[i - p])
            })
            .unwrap_or(n);
        let root = CyclicWord::of(&Word::from_reduced(
            self.rank,
            self.letters[..period].to_vec(),
        ));
        (root, n / period)
    }

    /// Number of start positions `p` in one period at which `pattern`
    /// occurs in the bi-infinite periodic word.
    pub fn periodic_occurrences(&self, pattern: &[Letter]) -> usize {
        let n = self.len();
        if n == 0 || pattern.is_empty() {
            return 0;
        }
        (0..n)
            .filter(|&p| {
                pattern
                    .iter()
                    .enumerate()
                    .all(|(k, &x)| self.letters[(p + k) % n] == x)
            })
            .count()
    }

    /// Every rotation of the class, in start-position order.
    pub fn rotations(&self) -> impl Iterator<Item = Word> + '_ {
        let n = self.len();
        (0..n.max(1)).map(move |r| {
            let mut l = self.letters[r.min(n)..].to_vec();
            l.extend_from_slice(&self.letters[..r.min(n)]);
            Word::from_reduced(self.rank, l)
        })
    }
}

impl fmt::Display for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", crate::notation::format_letters(&self.letters))
    }
}

impl fmt::Debug for CyclicWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CyclicWord{self}")
    }
}
