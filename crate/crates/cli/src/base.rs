//! Base law specifications.
//!
//! ```text
//! trivial                 the trivial subgroup (rank from --rank)
//! file:<path.sgr>         a finite Schreier graph at its own root
//! uniform:file:<path>     the same graph at a uniformly random vertex
//! normalizer:<spec>       the normalizer perturbation of <spec>, using --p
//! poulsen:<spec>          the percolation construction over <spec>, using --p
//! ```

use std::fs;
use std::path::Path;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use schreier::finite::FiniteSchreierGraph;
use schreier::samplers::{Dirac, Law, NormalizerLaw, PoulsenLaw, RootSlot, UniformRoot};
use schreier::{sgr, Cayley, Prob};

pub fn read_graph(path: &Path) -> Result<FiniteSchreierGraph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let view = sgr::parse(&text)?;
    Ok(view.to_finite()?)
}

/// A finite base for exact enumeration: `file:` roots it at its own root,
/// `uniform:file:` at a uniform vertex.
pub enum FiniteBase {
    Rooted(FiniteSchreierGraph),
    Uniform(FiniteSchreierGraph),
}

pub fn parse_finite(spec: &str) -> Result<FiniteBase> {
    if let Some(path) = spec.strip_prefix("file:") {
        Ok(FiniteBase::Rooted(read_graph(Path::new(path))?))
    } else if let Some(path) = spec.strip_prefix("uniform:file:") {
        Ok(FiniteBase::Uniform(read_graph(Path::new(path))?))
    } else {
        bail!(schreier::Error::Invalid(format!(
            "exact enumeration needs file:<path> or uniform:file:<path>, got {spec:?}"
        )))
    }
}

pub fn parse_law(spec: &str, rank: usize, p: Option<Prob>) -> Result<Law> {
    let need_p = |what: &str| {
        p.ok_or_else(|| schreier::Error::Invalid(format!("{what} needs --p")))
    };
    if spec == "trivial" {
        if rank == 0 {
            bail!(schreier::Error::Invalid("rank must be at least 1".into()));
        }
        return Ok(Arc::new(Dirac::new(Cayley::oracle(rank), "trivial")));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let g = read_graph(Path::new(path))?;
        return Ok(Arc::new(Dirac::new(g.into_oracle(), spec)));
    }
    if let Some(path) = spec.strip_prefix("uniform:file:") {
        let g = read_graph(Path::new(path))?;
        return Ok(Arc::new(UniformRoot::new(g, format!("file:{path}"))));
    }
    if let Some(inner) = spec.strip_prefix("normalizer:") {
        let p = need_p("normalizer")?;
        let base = parse_law(inner, rank, Some(p))?;
        return Ok(Arc::new(NormalizerLaw::new(base, p, RootSlot::Uniform)));
    }
    if let Some(inner) = spec.strip_prefix("poulsen:") {
        let p = need_p("poulsen")?;
        let base = parse_law(inner, rank, Some(p))?;
        return Ok(Arc::new(PoulsenLaw::new(base, p)));
    }
    bail!(schreier::Error::Invalid(format!("unknown base {spec:?}")))
}
