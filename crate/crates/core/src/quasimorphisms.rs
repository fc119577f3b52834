//! Quasimorphisms on free groups with exact rational values.
//!
//! A [`Quasimorphism`] is stored as its construction tree; evaluation walks
//! the tree. Each node also carries a declared defect bound and a
//! homogeneity flag derived from how it was built.

use std::collections::HashSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::automorphisms::{Automorphism, Homomorphism};
use crate::error::{Error, Result};
use crate::words::Word;

pub type Rational = Ratio<i64>;

/// Multiplier in the declared defect bound `B(ℓ) = 6ℓ` of a Brooks
/// quasimorphism with a pattern of length `ℓ`.
pub const BROOKS_DEFECT_FACTOR: i64 = 6;

pub fn brooks_defect_bound(pattern_len: usize) -> Rational {
    Rational::from_integer(BROOKS_DEFECT_FACTOR * pattern_len as i64)
}

/// Formats a rational as `p/q` in lowest terms.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidParameter(format!("not a rational: '{s}'"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q == 0 {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Construction {
    Zero {
        rank: usize,
    },
    /// Overlapping occurrences of `pattern` minus those of its inverse.
    Brooks {
        pattern: Word,
    },
    /// Homogenisation of [`Construction::Brooks`], computed on the periodic
    /// word of the cyclic reduction.
    BrooksHomogeneous {
        pattern: Word,
    },
    Pullback {
        inner: Box<Quasimorphism>,
        hom: Homomorphism,
    },
    FiniteAverage {
        inner: Box<Quasimorphism>,
        group: Vec<Automorphism>,
    },
    Linear {
        terms: Vec<(Rational, Quasimorphism)>,
    },
}

#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QuasimorphismRecord", into = "QuasimorphismRecord")]
pub struct Quasimorphism {
    rank: usize,
    construction: Construction,
    defect_bound: Option<Rational>,
    homogeneous: bool,
    aut_invariant: bool,
}

#[derive(Serialize, Deserialize)]
struct QuasimorphismRecord {
    construction: Construction,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    aut_invariant: bool,
}

impl TryFrom<QuasimorphismRecord> for Quasimorphism {
    type Error = Error;

    fn try_from(rec: QuasimorphismRecord) -> Result<Self> {
        let q = Quasimorphism::from_construction(rec.construction)?;
        Ok(if rec.aut_invariant {
            q.assume_aut_invariant()
        } else {
            q
        })
    }
}

impl From<Quasimorphism> for QuasimorphismRecord {
    fn from(q: Quasimorphism) -> Self {
        QuasimorphismRecord {
            construction: q.construction,
            aut_invariant: q.aut_invariant,
        }
    }
}

fn check_group(group: &[Automorphism], rank: usize) -> Result<()> {
    if group.is_empty() {
        return Err(Error::NotAGroup("empty set".into()));
    }
    if let Some(a) = group.iter().find(|a| a.rank() != rank) {
        return Err(Error::RankMismatch {
            left: rank,
            right: a.rank(),
        });
    }
    let members: HashSet<&Automorphism> = group.iter().collect();
    if members.len() != group.len() {
        return Err(Error::NotAGroup("repeated element".into()));
    }
    for a in group {
        if !members.contains(&a.inverse()) {
            return Err(Error::NotAGroup(format!("missing inverse of {a:?}")));
        }
        for b in group {
            if !members.contains(&a.compose(b)?) {
                return Err(Error::NotAGroup(format!("not closed: {a:?} ∘ {b:?}")));
            }
        }
    }
    Ok(())
}

impl Quasimorphism {
    /// Validates a construction tree and derives its defect bound and
    /// homogeneity flag.
    pub fn from_construction(construction: Construction) -> Result<Self> {
        let (rank, defect_bound, homogeneous) = match &construction {
            Construction::Zero { rank } => (*rank, Some(Rational::zero()), true),
            Construction::Brooks { pattern } => {
                if pattern.is_empty() {
                    return Err(Error::IdentityNotAllowed);
                }
                (
                    pattern.rank(),
                    Some(brooks_defect_bound(pattern.len())),
                    false,
                )
            }
            Construction::BrooksHomogeneous { pattern } => {
                if pattern.is_empty() {
                    return Err(Error::IdentityNotAllowed);
                }
                // homogenisation at most doubles the defect
                let d = brooks_defect_bound(pattern.len()) * 2;
                (pattern.rank(), Some(d), true)
            }
            Construction::Pullback { inner, hom } => {
                if hom.target_rank() != inner.rank {
                    return Err(Error::RankMismatch {
                        left: inner.rank,
                        right: hom.target_rank(),
                    });
                }
                (hom.source_rank(), inner.defect_bound, inner.homogeneous)
            }
            Construction::FiniteAverage { inner, group } => {
                check_group(group, inner.rank)?;
                (inner.rank, inner.defect_bound, inner.homogeneous)
            }
            Construction::Linear { terms } => {
                let rank = terms
                    .first()
                    .map(|(_, q)| q.rank)
                    .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
                if let Some((_, q)) = terms.iter().find(|(_, q)| q.rank != rank) {
                    return Err(Error::RankMismatch {
                        left: rank,
                        right: q.rank,
                    });
                }
                let bound = terms.iter().try_fold(Rational::zero(), |acc, (c, q)| {
                    q.defect_bound.map(|d| acc + c.abs() * d)
                });
                (rank, bound, terms.iter().all(|(_, q)| q.homogeneous))
            }
        };
        Ok(Quasimorphism {
            rank,
            construction,
            defect_bound,
            homogeneous,
            aut_invariant: false,
        })
    }

    pub fn zero(rank: usize) -> Self {
        Self::from_construction(Construction::Zero { rank }).expect("zero is valid")
    }

    pub fn brooks(pattern: &Word) -> Result<Self> {
        Self::from_construction(Construction::Brooks {
            pattern: pattern.clone(),
        })
    }

    pub fn brooks_homogeneous(pattern: &Word) -> Result<Self> {
        Self::from_construction(Construction::BrooksHomogeneous {
            pattern: pattern.clone(),
        })
    }

    /// `g ↦ self(hom(g))`.
    pub fn pullback(&self, hom: &Homomorphism) -> Result<Self> {
        Self::from_construction(Construction::Pullback {
            inner: Box::new(self.clone()),
            hom: hom.clone(),
        })
    }

    /// `g ↦ (1/|A|) Σ_{α∈A} self(α(g))`; `group` must be closed under
    /// composition and inverses.
    pub fn finite_average(&self, group: &[Automorphism]) -> Result<Self> {
        Self::from_construction(Construction::FiniteAverage {
            inner: Box::new(self.clone()),
            group: group.to_vec(),
        })
    }

    pub fn linear(terms: Vec<(Rational, Quasimorphism)>) -> Result<Self> {
        Self::from_construction(Construction::Linear { terms })
    }

    /// Marks the quasimorphism as invariant under the whole automorphism
    /// group. This is a caller assertion; nothing here can check it.
    pub fn assume_aut_invariant(mut self) -> Self {
        self.aut_invariant = true;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn construction(&self) -> &Construction {
        &self.construction
    }

    pub fn defect_bound(&self) -> Option<Rational> {
        self.defect_bound
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_aut_invariant(&self) -> bool {
        self.aut_invariant
    }

    /// The finite group this quasimorphism is exactly invariant under, when
    /// it was built by [`Quasimorphism::finite_average`].
    pub fn invariance_group(&self) -> Option<&[Automorphism]> {
        match &self.construction {
            Construction::FiniteAverage { group, .. } => Some(group),
            _ => None,
        }
    }

    /// Radius `r` such that the value on a reduced product `uv` is
    /// `f(u) + f(v)` plus a term depending only on the last `r` letters of
    /// `u` and the first `r` letters of `v`, with `f(x⁻¹) = -f(x)`.
    pub fn locality(&self) -> Option<usize> {
        match &self.construction {
            Construction::Zero { .. } => Some(0),
            Construction::Brooks { pattern } => Some(pattern.len() - 1),
            Construction::Linear { terms } => terms
                .iter()
                .try_fold(0, |acc, (_, q)| q.locality().map(|r| acc.max(r))),
            _ => None,
        }
    }

    pub fn evaluate(&self, g: &Word) -> Result<Rational> {
        if g.rank() != self.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: g.rank(),
            });
        }
        Ok(match &self.construction {
            Construction::Zero { .. } => Rational::zero(),
            Construction::Brooks { pattern } => {
                let plus = g.count_occurrences(pattern.letters()) as i64;
                let minus = g.count_occurrences(pattern.invert().letters()) as i64;
                Rational::from_integer(plus - minus)
            }
            Construction::BrooksHomogeneous { pattern } => {
                let c = g.cyclic_reduce().0;
                let plus = c.periodic_occurrences(pattern.letters()) as i64;
                let minus = c.periodic_occurrences(pattern.invert().letters()) as i64;
                Rational::from_integer(plus - minus)
            }
            Construction::Pullback { inner, hom } => inner.evaluate(&hom.apply(g)?)?,
            Construction::FiniteAverage { inner, group } => {
                let mut sum = Rational::zero();
                for a in group {
                    sum += inner.evaluate(&a.apply(g)?)?;
                }
                sum / Rational::from_integer(group.len() as i64)
            }
            Construction::Linear { terms } => {
                let mut sum = Rational::zero();
                for (c, q) in terms {
                    sum += c * q.evaluate(g)?;
                }
                sum
            }
        })
    }

    /// `|f(g) + f(h) - f(gh)|`.
    pub fn defect_at(&self, g: &Word, h: &Word) -> Result<Rational> {
        Ok((self.evaluate(g)? + self.evaluate(h)? - self.evaluate(&g.multiply(h)?)?).abs())
    }
}

impl fmt::Debug for Quasimorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quasimorphism({})", self)
    }
}

impl fmt::Display for Quasimorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.construction {
            Construction::Zero { .. } => f.write_str("0"),
            Construction::Brooks { pattern } => write!(f, "brooks({pattern})"),
            Construction::BrooksHomogeneous { pattern } => write!(f, "hbrooks({pattern})"),
            Construction::Pullback { inner, .. } => write!(f, "pullback({inner})"),
            Construction::FiniteAverage { inner, group } => {
                write!(f, "avg[{}]({inner})", group.len())
            }
            Construction::Linear { terms } => {
                let parts: Vec<String> = terms
                    .iter()
                    .map(|(c, q)| format!("{}*{q}", format_rational(c)))
                    .collect();
                f.write_str(&parts.join(" + "))
            }
        }
    }
}

/// Estimate of the homogenisation `lim f(g^n)/n` from a single power.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomogenisationEstimate {
    pub estimate: Rational,
    pub error_bound: Rational,
}

/// `f(g^N)/N`, within `D/N` of the homogenisation of `f` at `g`.
pub fn homogenise_numeric(f: &Quasimorphism, g: &Word, n: u32) -> Result<HomogenisationEstimate> {
    let d = f.defect_bound.ok_or(Error::UnknownDefect)?;
    if n == 0 {
        return Err(Error::InvalidParameter("power must be at least 1".into()));
    }
    let big_n = Rational::from_integer(i64::from(n));
    Ok(HomogenisationEstimate {
        estimate: f.evaluate(&g.power(i64::from(n)))? / big_n,
        error_bound: d / big_n,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundType {
    EnumeratedLower,
    DeclaredUpper,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DefectCertificate {
    pub bound_type: BoundType,
    pub value: Rational,
    /// The pair attaining `value` (enumerated certificates only).
    pub witness: Option<(Word, Word)>,
    /// Length cap of the enumeration.
    pub range: Option<usize>,
}

pub fn declared_defect(f: &Quasimorphism) -> Result<DefectCertificate> {
    Ok(DefectCertificate {
        bound_type: BoundType::DeclaredUpper,
        value: f.defect_bound.ok_or(Error::UnknownDefect)?,
        witness: None,
        range: None,
    })
}

/// Exact maximum of `|f(g) + f(h) - f(gh)|` over reduced `g`, `h` of length
/// at most `max_len`, with the first maximising pair in shortlex order.
///
/// For local quasimorphisms (see [`Quasimorphism::locality`]) only pairs
/// `g = ax`, `h = x⁻¹b` with `|a|, |x|, |b| <= r` are scanned: truncating
/// `a` to its last `r` letters and `x`, `b` to their first `r` letters
/// leaves the defect unchanged and only shortens the pair.
pub fn defect_enumerate(f: &Quasimorphism, max_len: usize) -> Result<DefectCertificate> {
    match f.locality() {
        Some(r) if r < max_len => defect_enumerate_local(f, max_len, r),
        _ => defect_enumerate_all(f, max_len),
    }
}

fn better(best: &mut (Rational, Option<(Word, Word)>), d: Rational, g: &Word, h: &Word) {
    let replace = match &best.1 {
        None => true,
        Some((bg, bh)) => d > best.0 || (d == best.0 && (g, h) < (bg, bh)),
    };
    if replace {
        *best = (d, Some((g.clone(), h.clone())));
    }
}

/// Brute force over every pair.
pub fn defect_enumerate_all(f: &Quasimorphism, max_len: usize) -> Result<DefectCertificate> {
    let words = Word::enumerate(f.rank, max_len);
    let values: Vec<Rational> = words.iter().map(|w| f.evaluate(w)).collect::<Result<_>>()?;
    let mut best: (Rational, Option<(Word, Word)>) = (Rational::zero(), None);
    for (g, fg) in words.iter().zip(&values) {
        for (h, fh) in words.iter().zip(&values) {
            let d = (fg + fh - f.evaluate(&(g * h))?).abs();
            if d > best.0 || best.1.is_none() {
                best = (d, Some((g.clone(), h.clone())));
            }
        }
    }
    Ok(DefectCertificate {
        bound_type: BoundType::EnumeratedLower,
        value: best.0,
        witness: best.1,
        range: Some(max_len),
    })
}

fn defect_enumerate_local(
    f: &Quasimorphism,
    max_len: usize,
    r: usize,
) -> Result<DefectCertificate> {
    let short = Word::enumerate(f.rank, r);
    let mut best: (Rational, Option<(Word, Word)>) = (Rational::zero(), None);
    for x in &short {
        for a in &short {
            if a.len() + x.len() > max_len {
                continue;
            }
            if let (Some(&al), Some(&xf)) = (a.letters().last(), x.letters().first()) {
                if al == -xf {
                    continue;
                }
            }
            let g = a * x;
            for b in &short {
                if x.len() + b.len() > max_len {
                    continue;
                }
                if let (Some(&xf), Some(&bf)) = (x.letters().first(), b.letters().first()) {
                    if xf == bf {
                        continue;
                    }
                }
                if let (Some(&al), Some(&bf)) = (a.letters().last(), b.letters().first()) {
                    if al == -bf {
                        continue;
                    }
                }
                let h = &x.invert() * b;
                let d = f.defect_at(&g, &h)?;
                better(&mut best, d, &g, &h);
            }
        }
    }
    Ok(DefectCertificate {
        bound_type: BoundType::EnumeratedLower,
        value: best.0,
        witness: best.1,
        range: Some(max_len),
    })
}

/// The averaging operator on `n`-tuples: `(h_1, …, h_n) ↦ Σ_{i≤k} f(h_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductQuasimorphism {
    factor: Quasimorphism,
    k: usize,
    n: usize,
}

pub fn product_average(f: &Quasimorphism, k: usize, n: usize) -> Result<ProductQuasimorphism> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(ProductQuasimorphism {
        factor: f.clone(),
        k,
        n,
    })
}

impl ProductQuasimorphism {
    pub fn factor(&self) -> &Quasimorphism {
        &self.factor
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_homogeneous(&self) -> bool {
        self.factor.homogeneous
    }

    pub fn defect_bound(&self) -> Option<Rational> {
        self.factor
            .defect_bound
            .map(|d| d * Rational::from_integer(self.k as i64))
    }

    pub fn evaluate(&self, tuple: &[Word]) -> Result<Rational> {
        if tuple.len() != self.n {
            return Err(Error::InvalidParameter(format!(
                "expected a {}-tuple, got {}",
                self.n,
                tuple.len()
            )));
        }
        tuple[..self.k].iter().try_fold(Rational::zero(), |acc, h| {
            Ok(acc + self.factor.evaluate(h)?)
        })
    }

    /// `|F(g) + F(h) - F(gh)|` with componentwise products.
    pub fn defect_at(&self, g: &[Word], h: &[Word]) -> Result<Rational> {
        let gh: Vec<Word> = g
            .iter()
            .zip(h)
            .map(|(x, y)| x.multiply(y))
            .collect::<Result<_>>()?;
        Ok((self.evaluate(g)? + self.evaluate(h)? - self.evaluate(&gh)?).abs())
    }

    /// Brute-force defect over all pairs of tuples whose coordinates have
    /// length at most `max_len`. Refuses to scan more than `limit` pairs.
    pub fn defect_enumerate(
        &self,
        max_len: usize,
        limit: usize,
    ) -> Result<(Rational, Vec<Word>, Vec<Word>)> {
        let words = Word::enumerate(self.factor.rank, max_len);
        let tuples = words.len().checked_pow(self.n as u32).unwrap_or(usize::MAX);
        if tuples.saturating_mul(tuples) > limit {
            return Err(Error::Cutoff {
                what: "tuple pairs in product defect enumeration",
                limit,
            });
        }
        let all: Vec<Vec<Word>> = (0..tuples)
            .map(|mut i| {
                (0..self.n)
                    .map(|_| {
                        let w = words[i % words.len()].clone();
                        i /= words.len();
                        w
                    })
                    .collect()
            })
            .collect();
        let mut best = (Rational::zero(), all[0].clone(), all[0].clone());
        for g in &all {
            for h in &all {
                let d = self.defect_at(g, h)?;
                if d > best.0 {
                    best = (d, g.clone(), h.clone());
                }
            }
        }
        Ok(best)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceViolation {
    pub auto_index: usize,
    pub sample: Word,
    pub value: Rational,
    pub image_value: Rational,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub checked: usize,
    pub violations: Vec<InvarianceViolation>,
}

impl InvarianceReport {
    pub fn is_invariant(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Compares `f(α(g))` with `f(g)` exactly for every pair.
pub fn check_invariance(
    f: &Quasimorphism,
    autos: &[Automorphism],
    samples: &[Word],
) -> Result<InvarianceReport> {
    let mut violations = Vec::new();
    for g in samples {
        let value = f.evaluate(g)?;
        for (i, a) in autos.iter().enumerate() {
            let image_value = f.evaluate(&a.apply(g)?)?;
            if image_value != value {
                violations.push(InvarianceViolation {
                    auto_index: i,
                    sample: g.clone(),
                    value,
                    image_value,
                });
            }
        }
    }
    Ok(InvarianceReport {
        checked: samples.len() * autos.len(),
        violations,
    })
}

/// The signed permutations of the basis, a group of order `2^n n!`.
pub fn signed_permutation_group(rank: usize) -> Vec<Automorphism> {
    crate::whitehead::signed_permutations(rank)
}
