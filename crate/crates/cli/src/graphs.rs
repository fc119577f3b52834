use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{Context, Result};
use autqm::graphprod::{
    classify_virtually_abelian, factor_kind, gp_multiply, gp_pipeline_qm, is_dinfty,
    join_decompose, project_kill_h0, FactorKind,
};
use autqm::notation::parse_word;
use autqm::{GPWord, Quasimorphism, VertexGraph};
use clap::Subcommand;
use serde_json::{json, Value};

use crate::records::rat;
use crate::{Ctx, Status};

#[derive(Subcommand)]
pub enum GpCmd {
    /// Normal form of a syllable sequence such as `0^1 1^-2`
    Nf {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    Mul {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        left: String,
        #[arg(long, allow_hyphen_values = true)]
        right: String,
    },
    /// Join decomposition with isomorphism classes of factors
    Join {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Which join factors are copies of the infinite dihedral group
    Dinfty {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Whether the graph product is virtually abelian
    Classify {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Image after killing the complete part, one element per factor
    Project {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Evaluate the homogeneous Brooks quasimorphism of `pattern`, summed
    /// over the chosen isomorphic free factors
    Pipeline {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value = "ab")]
        pattern: String,
        /// Factor indices; defaults to the first isomorphism class
        #[arg(long, value_delimiter = ',')]
        factors: Vec<usize>,
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
}

fn load(path: &Path) -> Result<Arc<VertexGraph>> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading graph {}", path.display()))?;
    let g = VertexGraph::parse(&text).with_context(|| format!("in graph {}", path.display()))?;
    Ok(Arc::new(g))
}

fn graph_rec(g: &VertexGraph) -> Value {
    json!({"labels": g.labels(), "edges": g.edges()})
}

fn gp_rec(x: &GPWord) -> Value {
    Value::String(x.to_string())
}

pub fn gp_cmd(ctx: &mut Ctx, cmd: &GpCmd) -> Result<Status> {
    let (name, body) = match cmd {
        GpCmd::Nf { graph, word } => {
            let g = load(graph)?;
            let x = GPWord::parse(&g, word)?;
            (
                "gp nf",
                json!({"graph": graph_rec(&g), "input": word, "value": gp_rec(&x)}),
            )
        }
        GpCmd::Mul { graph, left, right } => {
            let g = load(graph)?;
            let x = gp_multiply(&GPWord::parse(&g, left)?, &GPWord::parse(&g, right)?)?;
            (
                "gp mul",
                json!({"graph": graph_rec(&g), "left": left, "right": right, "value": gp_rec(&x)}),
            )
        }
        GpCmd::Join { graph } => {
            let g = load(graph)?;
            let d = join_decompose(&g);
            (
                "gp join",
                json!({"graph": graph_rec(&g), "decomposition": d}),
            )
        }
        GpCmd::Dinfty { graph } => {
            let g = load(graph)?;
            let d = join_decompose(&g);
            let factors: Vec<_> = d
                .factors
                .iter()
                .map(|f| json!({"vertices": f, "dinfty": is_dinfty(&g, f)}))
                .collect();
            (
                "gp dinfty",
                json!({"graph": graph_rec(&g), "factors": factors}),
            )
        }
        GpCmd::Classify { graph } => {
            let g = load(graph)?;
            (
                "gp classify",
                json!({"graph": graph_rec(&g), "virtually_abelian": classify_virtually_abelian(&g)}),
            )
        }
        GpCmd::Project { graph, word } => {
            let g = load(graph)?;
            let d = join_decompose(&g);
            let parts = project_kill_h0(&GPWord::parse(&g, word)?, &d)?;
            let comps: Vec<_> = d
                .factors
                .iter()
                .zip(&parts)
                .map(|(f, x)| json!({"vertices": f, "value": gp_rec(x)}))
                .collect();
            (
                "gp project",
                json!({"graph": graph_rec(&g), "input": word, "components": comps}),
            )
        }
        GpCmd::Pipeline {
            graph,
            pattern,
            factors,
            word,
        } => {
            let g = load(graph)?;
            let d = join_decompose(&g);
            let chosen = if factors.is_empty() {
                d.classes.first().cloned().unwrap_or_default()
            } else {
                factors.clone()
            };
            let first = chosen
                .first()
                .and_then(|&i| d.factors.get(i))
                .context("no join factor to evaluate on")?;
            let f = match factor_kind(&g, first) {
                FactorKind::Free => {
                    Quasimorphism::brooks_homogeneous(&parse_word(pattern, first.len())?)?
                }
                _ => Quasimorphism::zero(first.len()),
            };
            let q = gp_pipeline_qm(&d, &chosen, &f)?;
            let v = q.evaluate(&GPWord::parse(&g, word)?)?;
            (
                "gp pipeline",
                json!({
                    "graph": graph_rec(&g),
                    "pattern": pattern,
                    "factors": chosen,
                    "input": word,
                    "value": rat(&v),
                    "defect_bound": q.defect_bound().as_ref().map(rat),
                }),
            )
        }
    };
    ctx.out.emit(name, body)?;
    Ok(Status::Ok)
}
