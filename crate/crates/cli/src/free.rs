use anyhow::Result;
use autqm::automorphisms::{achirality_search, elementary_generators};
use autqm::norms::{
    acl_upper, bavard_bound, bfs_norm, cl_upper, orbit_closure, prop32_bound, sacl_estimate,
    BavardBound, NormValue,
};
use autqm::notation::parse_word;
use autqm::quasimorphisms::{
    check_invariance, declared_defect, defect_enumerate, product_average, signed_permutation_group,
};
use autqm::whitehead::{
    in_proper_free_factor, is_primitive, min_orbit_level, minimize, whitehead_graph,
};
use autqm::{AclSearch, AutoWitness, Automorphism, Quasimorphism, Word};
use clap::{Args, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::records::{self, rat, word as w_rec};
use crate::{Ctx, Status};

#[derive(Subcommand)]
pub enum WordCmd {
    /// Freely reduce a word
    Reduce {
        word: String,
    },
    /// Product of two words
    Mul {
        left: String,
        right: String,
    },
    Inv {
        word: String,
    },
    Pow {
        word: String,
        #[arg(allow_hyphen_values = true)]
        exponent: i64,
    },
    /// Cyclic reduction: canonical core, conjugator and root
    Cyc {
        word: String,
    },
    /// Whether two words are conjugate
    Conj {
        left: String,
        right: String,
    },
}

#[derive(Subcommand)]
pub enum AutoCmd {
    /// Image of a word
    Apply {
        #[arg(long)]
        auto: String,
        #[arg(long)]
        word: String,
    },
    /// `outer ∘ inner`
    Compose { outer: String, inner: String },
    /// Inner automorphism x ↦ w x w⁻¹
    Ad {
        #[arg(long)]
        word: String,
    },
    /// [φ, w] = φ(w) w⁻¹
    Autocomm {
        #[arg(long)]
        auto: String,
        #[arg(long)]
        word: String,
    },
    /// Search for φ with φ(w^k) conjugate to w^-k
    Achiral {
        #[arg(long)]
        word: String,
        #[arg(long, default_value_t = 4)]
        k_max: u32,
        #[arg(long, default_value_t = 2)]
        depth: usize,
    },
}

#[derive(Subcommand)]
pub enum WhCmd {
    /// Minimal-length representative of the orbit, with the move trace
    Min {
        #[arg(long)]
        word: String,
    },
    Primitive {
        #[arg(long)]
        word: String,
    },
    /// Whether the word is conjugate into a proper free factor
    Freefactor {
        #[arg(long)]
        word: String,
    },
    Graph {
        #[arg(long)]
        word: String,
    },
}

/// A Brooks quasimorphism, optionally homogenised and averaged over the
/// signed permutations.
#[derive(Args, Clone)]
pub struct QmSpec {
    #[arg(long)]
    pattern: String,
    #[arg(long)]
    homogeneous: bool,
    #[arg(long)]
    average: bool,
}

impl QmSpec {
    fn build(&self, rank: usize) -> Result<Quasimorphism> {
        let p = parse_word(&self.pattern, rank)?;
        let f = if self.homogeneous {
            Quasimorphism::brooks_homogeneous(&p)?
        } else {
            Quasimorphism::brooks(&p)?
        };
        Ok(if self.average {
            f.finite_average(&signed_permutation_group(rank))?
        } else {
            f
        })
    }
}

#[derive(Subcommand)]
pub enum QmCmd {
    Brooks {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        word: String,
    },
    Homog {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        word: String,
    },
    /// Declared defect bound and exhaustive lower bound
    Defect {
        #[command(flatten)]
        spec: QmSpec,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Average over the signed permutations of the basis
    Average {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        homogeneous: bool,
        #[arg(long)]
        word: String,
    },
    /// Sum of f over the first k coordinates of a tuple
    ProductAverage {
        #[command(flatten)]
        spec: QmSpec,
        #[arg(long)]
        k: usize,
        #[arg(long, num_args = 1.., required = true)]
        tuple: Vec<String>,
    },
    /// Compare f∘φ with f on random samples
    Invariance {
        #[command(flatten)]
        spec: QmSpec,
        #[arg(long, value_enum, default_value_t = Group::Elementary)]
        group: Group,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 12)]
        max_sample_len: usize,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
pub enum Group {
    /// Nielsen generators; invariance under them is invariance under Aut
    Elementary,
    Signed,
}

#[derive(Args, Clone)]
pub struct SearchArgs {
    #[arg(long)]
    pool_depth: Option<usize>,
    #[arg(long)]
    elem_len: Option<usize>,
    #[arg(long)]
    k_max: Option<usize>,
}

impl SearchArgs {
    fn resolve(&self, ctx: &Ctx) -> AclSearch {
        AclSearch {
            pool_depth: self.pool_depth.unwrap_or(ctx.cfg.pool_depth),
            elem_len: self.elem_len.unwrap_or(ctx.cfg.elem_len),
            k_max: self.k_max.unwrap_or(ctx.cfg.k_max),
        }
    }
}

#[derive(Subcommand)]
pub enum NormCmd {
    /// Exact word norm over a finite set, by bidirectional search
    Bfs {
        #[arg(long)]
        word: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        /// Close the set under the signed permutations first
        #[arg(long)]
        closure: bool,
        #[arg(long)]
        cutoff: Option<usize>,
    },
    /// Autocommutator length upper bound with witness
    Acl {
        #[arg(long)]
        word: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Stable autocommutator length bounds
    Sacl {
        #[arg(long)]
        word: String,
        #[arg(long)]
        n_max: Option<u32>,
        #[command(flatten)]
        search: SearchArgs,
        /// Patterns whose averaged homogeneous Brooks quasimorphisms give
        /// lower bounds
        #[arg(long, value_delimiter = ',')]
        pattern: Vec<String>,
    },
    /// Commutator length upper bound with witness
    Cl {
        #[arg(long)]
        word: String,
        #[arg(long)]
        len_cap: Option<usize>,
        #[arg(long)]
        k_max: Option<usize>,
    },
    /// Norm lower bound from an averaged homogeneous Brooks quasimorphism
    Bound32 {
        #[arg(long)]
        pattern: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<String>,
        #[arg(long)]
        word: String,
    },
    /// |f(g)| / 2D for an averaged homogeneous Brooks quasimorphism
    Bavard {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        word: String,
    },
}

fn parse_auto(s: &str, rank: usize) -> Result<Automorphism> {
    Ok(AutoWitness::parse(s, rank)?.build(rank)?)
}

fn parse_set(set: &[String], rank: usize) -> Result<Vec<Word>> {
    set.iter().map(|s| Ok(parse_word(s, rank)?)).collect()
}

pub fn word_cmd(ctx: &mut Ctx, cmd: &WordCmd) -> Result<Status> {
    let r = ctx.cfg.rank;
    let p = |s: &str| parse_word(s, r);
    let (name, body) = match cmd {
        WordCmd::Reduce { word } => {
            let w = p(word)?;
            (
                "word reduce",
                json!({"input": word, "value": w_rec(&w), "letters": w.letters(), "length": w.len()}),
            )
        }
        WordCmd::Mul { left, right } => {
            let w = p(left)?.multiply(&p(right)?)?;
            (
                "word mul",
                json!({"left": left, "right": right, "value": w_rec(&w)}),
            )
        }
        WordCmd::Inv { word } => (
            "word inv",
            json!({"input": word, "value": w_rec(&p(word)?.invert())}),
        ),
        WordCmd::Pow { word, exponent } => (
            "word pow",
            json!({"input": word, "exponent": exponent, "value": w_rec(&p(word)?.power(*exponent))}),
        ),
        WordCmd::Cyc { word } => {
            let (core, conj) = p(word)?.cyclic_reduce();
            let (root, exp) = core.root();
            (
                "word cyc",
                json!({
                    "input": word,
                    "core": w_rec(&core.to_word()),
                    "conjugator": w_rec(&conj),
                    "root": w_rec(&root.to_word()),
                    "exponent": exp,
                }),
            )
        }
        WordCmd::Conj { left, right } => (
            "word conj",
            json!({"left": left, "right": right, "conjugate": p(left)?.is_conjugate(&p(right)?)?}),
        ),
    };
    ctx.out.emit(name, body)?;
    Ok(Status::Ok)
}

pub fn auto_cmd(ctx: &mut Ctx, cmd: &AutoCmd) -> Result<Status> {
    let r = ctx.cfg.rank;
    let (name, body) = match cmd {
        AutoCmd::Apply { auto, word } => {
            let phi = parse_auto(auto, r)?;
            let v = phi.apply(&parse_word(word, r)?)?;
            (
                "auto apply",
                json!({"auto": records::auto(&phi), "word": word, "value": w_rec(&v)}),
            )
        }
        AutoCmd::Compose { outer, inner } => {
            let c = parse_auto(outer, r)?.compose(&parse_auto(inner, r)?)?;
            (
                "auto compose",
                json!({"outer": outer, "inner": inner, "value": records::auto(&c)}),
            )
        }
        AutoCmd::Ad { word } => {
            let a = Automorphism::ad(&parse_word(word, r)?);
            ("auto ad", json!({"word": word, "value": records::auto(&a)}))
        }
        AutoCmd::Autocomm { auto, word } => {
            let phi = parse_auto(auto, r)?;
            let v = phi.autocommutator(&parse_word(word, r)?)?;
            (
                "auto autocomm",
                json!({"auto": records::auto(&phi), "word": word, "value": w_rec(&v)}),
            )
        }
        AutoCmd::Achiral { word, k_max, depth } => {
            let found = achirality_search(&parse_word(word, r)?, *k_max, *depth)?;
            let value = found.map(|(phi, k)| json!({"auto": records::auto(&phi), "k": k}));
            (
                "auto achiral",
                json!({"word": word, "k_max": k_max, "depth": depth, "found": value}),
            )
        }
    };
    ctx.out.emit(name, body)?;
    Ok(Status::Ok)
}

fn vertex_name(v: usize) -> String {
    let g = (v / 2 + 1) as i32;
    autqm::notation::format_letters(&[if v.is_multiple_of(2) { g } else { -g }])
}

pub fn wh_cmd(ctx: &mut Ctx, cmd: &WhCmd) -> Result<Status> {
    let r = ctx.cfg.rank;
    let (name, body) = match cmd {
        WhCmd::Min { word } => {
            let m = minimize(&parse_word(word, r)?);
            (
                "wh min",
                json!({
                    "word": word,
                    "min_word": w_rec(&m.min_word),
                    "length": m.min_word.len(),
                    "trace": m.trace.iter().map(|a| a.witness().to_string()).collect::<Vec<_>>(),
                }),
            )
        }
        WhCmd::Primitive { word } => (
            "wh primitive",
            json!({"word": word, "primitive": is_primitive(&parse_word(word, r)?)?}),
        ),
        WhCmd::Freefactor { word } => {
            let w = parse_word(word, r)?;
            let limit = ctx.cfg.level_limit;
            let inside = in_proper_free_factor(&w, limit)?;
            let level = min_orbit_level(&w, limit)?;
            let graph = whitehead_graph(&w.cyclic_reduce().0.to_word())?;
            (
                "wh freefactor",
                json!({
                    "word": word,
                    "in_proper_free_factor": inside,
                    "min_level_size": level.words.len(),
                    "min_length": level.word_length(),
                    "graph_certificate": graph.certifies_not_in_free_factor(),
                }),
            )
        }
        WhCmd::Graph { word } => {
            let g = whitehead_graph(&parse_word(word, r)?.cyclic_reduce().0.to_word())?;
            let edges: Vec<_> = g
                .edges
                .iter()
                .map(|(&(u, v), &m)| json!([vertex_name(u), vertex_name(v), m]))
                .collect();
            (
                "wh graph",
                json!({
                    "word": word,
                    "edges": edges,
                    "connected": g.connected,
                    "has_cut_vertex": g.has_cut_vertex,
                    "certifies_not_in_free_factor": g.certifies_not_in_free_factor(),
                }),
            )
        }
    };
    ctx.out.emit(name, body)?;
    Ok(Status::Ok)
}

pub fn qm_cmd(ctx: &mut Ctx, cmd: &QmCmd) -> Result<Status> {
    let r = ctx.cfg.rank;
    match cmd {
        QmCmd::Brooks { pattern, word } | QmCmd::Homog { pattern, word } => {
            let homogeneous = matches!(cmd, QmCmd::Homog { .. });
            let spec = QmSpec {
                pattern: pattern.clone(),
                homogeneous,
                average: false,
            };
            let f = spec.build(r)?;
            let v = f.evaluate(&parse_word(word, r)?)?;
            let name = if homogeneous { "qm homog" } else { "qm brooks" };
            ctx.out.emit(
                name,
                json!({"pattern": pattern, "word": word, "value": rat(&v), "defect_bound": f.defect_bound().as_ref().map(rat)}),
            )?;
        }
        QmCmd::Defect { spec, max_len } => {
            let f = spec.build(r)?;
            let declared = declared_defect(&f)?;
            let len = max_len.unwrap_or(ctx.cfg.max_len);
            let found = defect_enumerate(&f, len)?;
            ctx.out.emit(
                "qm defect",
                json!({
                    "pattern": spec.pattern,
                    "homogeneous": spec.homogeneous,
                    "average": spec.average,
                    "declared_upper": rat(&declared.value),
                    "enumerated_lower": rat(&found.value),
                    "max_len": len,
                    "witness": found.witness.as_ref().map(|(g, h)| json!([w_rec(g), w_rec(h)])),
                }),
            )?;
        }
        QmCmd::Average {
            pattern,
            homogeneous,
            word,
        } => {
            let spec = QmSpec {
                pattern: pattern.clone(),
                homogeneous: *homogeneous,
                average: true,
            };
            let f = spec.build(r)?;
            let v = f.evaluate(&parse_word(word, r)?)?;
            ctx.out.emit(
                "qm average",
                json!({"pattern": pattern, "homogeneous": homogeneous, "word": word, "group_order": f.invariance_group().map_or(0, |g| g.len()), "value": rat(&v)}),
            )?;
        }
        QmCmd::ProductAverage { spec, k, tuple } => {
            let f = spec.build(r)?;
            let p = product_average(&f, *k, tuple.len())?;
            let t = parse_set(tuple, r)?;
            let v = p.evaluate(&t)?;
            ctx.out.emit(
                "qm product-average",
                json!({"pattern": spec.pattern, "k": k, "n": tuple.len(), "tuple": tuple, "value": rat(&v), "defect_bound": p.defect_bound().as_ref().map(rat)}),
            )?;
        }
        QmCmd::Invariance {
            spec,
            group,
            samples,
            max_sample_len,
        } => {
            let f = spec.build(r)?;
            let autos = match group {
                Group::Elementary => elementary_generators(r),
                Group::Signed => signed_permutation_group(r),
            };
            let n = samples.unwrap_or(ctx.cfg.samples);
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.cfg.seed);
            let words: Vec<Word> = (0..n)
                .map(|_| {
                    let len = rng.gen_range(0..=*max_sample_len);
                    Word::random(&mut rng, r, len)
                })
                .collect();
            let report = check_invariance(&f, &autos, &words)?;
            let first = report.violations.first().map(|v| {
                json!({
                    "auto": autos[v.auto_index].witness().to_string(),
                    "sample": w_rec(&v.sample),
                    "value": rat(&v.value),
                    "image_value": rat(&v.image_value),
                })
            });
            ctx.out.emit(
                "qm invariance",
                json!({
                    "pattern": spec.pattern,
                    "seed": ctx.cfg.seed,
                    "checked": report.checked,
                    "violations": report.violations.len(),
                    "invariant": report.is_invariant(),
                    "first_violation": first,
                }),
            )?;
        }
    }
    Ok(Status::Ok)
}

fn averaged_homogeneous(pattern: &str, rank: usize) -> Result<Quasimorphism> {
    QmSpec {
        pattern: pattern.into(),
        homogeneous: true,
        average: true,
    }
    .build(rank)
}

pub fn norm_cmd(ctx: &mut Ctx, cmd: &NormCmd) -> Result<Status> {
    let r = ctx.cfg.rank;
    let mut status = Status::Ok;
    let mut flag = |v: &NormValue| {
        if !matches!(v, NormValue::Finite { .. } | NormValue::Infinite) {
            status = Status::Cutoff;
        }
    };
    match cmd {
        NormCmd::Bfs {
            word,
            set,
            closure,
            cutoff,
        } => {
            let mut s = parse_set(set, r)?;
            if *closure {
                s = orbit_closure(&s, &signed_permutation_group(r))?;
            }
            let c = cutoff.unwrap_or(ctx.cfg.cutoff);
            let res = bfs_norm(&parse_word(word, r)?, &s, c)?;
            flag(&res.value);
            ctx.out.emit(
                "norm bfs",
                json!({"word": word, "set": s.iter().map(w_rec).collect::<Vec<_>>(), "cutoff": c, "norm": records::norm(&res, r)}),
            )?;
        }
        NormCmd::Acl { word, search } => {
            let params = search.resolve(ctx);
            let res = acl_upper(&parse_word(word, r)?, &params);
            flag(&res.value);
            ctx.out.emit(
                "norm acl",
                json!({"word": word, "search": params, "norm": records::norm(&res, r)}),
            )?;
        }
        NormCmd::Sacl {
            word,
            n_max,
            search,
            pattern,
        } => {
            let params = search.resolve(ctx);
            let n = n_max.unwrap_or(ctx.cfg.n_max);
            let family = pattern
                .iter()
                .map(|p| averaged_homogeneous(p, r))
                .collect::<Result<Vec<_>>>()?;
            let g = parse_word(word, r)?;
            let est = sacl_estimate(&g, n, &params, &family)?;
            let trace: Vec<_> = est
                .trace
                .iter()
                .map(|t| json!({"n": t.n, "acl": records::norm(&t.acl, r)}))
                .collect();
            ctx.out.emit(
                "norm sacl",
                json!({
                    "word": word,
                    "n_max": n,
                    "search": params,
                    "upper": est.upper.as_ref().map(rat),
                    "lower": rat(&est.lower),
                    "restricted_lower": est.restricted_lower.as_ref().map(|b| json!({"value": rat(&b.value), "group_order": b.group_order})),
                    "trace": trace,
                }),
            )?;
        }
        NormCmd::Cl {
            word,
            len_cap,
            k_max,
        } => {
            let cap = len_cap.unwrap_or(ctx.cfg.len_cap);
            let k = k_max.unwrap_or(ctx.cfg.k_max);
            let res = cl_upper(&parse_word(word, r)?, cap, k);
            flag(&res.value);
            ctx.out.emit(
                "norm cl",
                json!({"word": word, "len_cap": cap, "k_max": k, "norm": records::norm(&res, r)}),
            )?;
        }
        NormCmd::Bound32 { pattern, set, word } => {
            let f = averaged_homogeneous(pattern, r)?;
            let s = parse_set(set, r)?;
            let b = prop32_bound(&f, &s, &parse_word(word, r)?)?;
            ctx.out.emit(
                "norm bound32",
                json!({"pattern": pattern, "set": set, "word": word, "lower_bound": rat(&b), "closure_group_order": f.invariance_group().map_or(0, |g| g.len())}),
            )?;
        }
        NormCmd::Bavard { pattern, word } => {
            let f = averaged_homogeneous(pattern, r)?;
            let body = match bavard_bound(&f, &parse_word(word, r)?)? {
                BavardBound::FullAut { value } => {
                    json!({"scope": "full_aut", "lower_bound": rat(&value)})
                }
                BavardBound::Restricted(b) => {
                    json!({"scope": "restricted", "group_order": b.group_order, "lower_bound": rat(&b.value)})
                }
            };
            let mut body = body;
            body["pattern"] = json!(pattern);
            body["word"] = json!(word);
            ctx.out.emit("norm bavard", body)?;
        }
    }
    Ok(status)
}
