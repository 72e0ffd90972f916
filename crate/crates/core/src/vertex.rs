use std::fmt;
use std::sync::Arc;

use crate::word::Word;

/// Canonical vertex token. Two tokens are equal exactly when they name the
/// same vertex of the graph that produced them.
///
/// The rendered form never contains whitespace, so tokens can be written to
/// the line-oriented graph format directly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexId {
    /// A coset named by its shortlex-minimal representative.
    Word(Word),
    /// A vertex of an explicit finite graph.
    Index(u32),
    /// A token read from a file.
    Named(Arc<str>),
    /// Normalizer construction: an unmarked coset (`slot == None`) or one of
    /// the three vertices replacing a marked coset.
    Marked { base: Arc<VertexId>, slot: Option<u8> },
    /// Percolation construction: `inner` lives in the copy reached through the
    /// attachment points in `path` (empty path = the level-0 copy).
    Copy {
        path: Arc<[VertexId]>,
        inner: Arc<VertexId>,
    },
    /// Subshift encoding: the Cayley vertex `g` (`cycle == None`) or position
    /// `j` on the cycle hanging off the subdivided edge `(g, g s1)`.
    Encoded { g: Word, cycle: Option<u32> },
}

impl VertexId {
    pub fn named(s: &str) -> Self {
        VertexId::Named(Arc::from(s))
    }

    /// Stable byte encoding used as hash input.
    pub fn encode(&self, out: &mut Vec<u8>) {
        match self {
            VertexId::Word(w) => {
                out.push(0);
                encode_word(w, out);
            }
            VertexId::Index(i) => {
                out.push(1);
                out.extend_from_slice(&i.to_le_bytes());
            }
            VertexId::Named(s) => {
                out.push(2);
                out.extend_from_slice(&(s.len() as u32).to_le_bytes());
                out.extend_from_slice(s.as_bytes());
            }
            VertexId::Marked { base, slot } => {
                out.push(3);
                base.encode(out);
                out.push(slot.unwrap_or(0xff));
            }
            VertexId::Copy { path, inner } => {
                out.push(4);
                out.extend_from_slice(&(path.len() as u32).to_le_bytes());
                for p in path.iter() {
                    p.encode(out);
                }
                inner.encode(out);
            }
            VertexId::Encoded { g, cycle } => {
                out.push(5);
                encode_word(g, out);
                match cycle {
                    None => out.push(0),
                    Some(j) => {
                        out.push(1);
                        out.extend_from_slice(&j.to_le_bytes());
                    }
                }
            }
        }
    }
}

fn encode_word(w: &Word, out: &mut Vec<u8>) {
    out.extend_from_slice(&(w.len() as u32).to_le_bytes());
    out.extend(w.letters().iter().map(|l| l.code() as u8));
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexId::Word(w) => write!(f, "{w}"),
            VertexId::Index(i) => write!(f, "v{i}"),
            VertexId::Named(s) => f.write_str(s),
            VertexId::Marked { base, slot: None } => write!(f, "N({base})"),
            VertexId::Marked {
                base,
                slot: Some(k),
            } => write!(f, "N({base}|{k})"),
            VertexId::Copy { path, inner } => {
                f.write_str("P(")?;
                for (i, p) in path.iter().enumerate() {
                    if i > 0 {
                        f.write_str("/")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ";{inner})")
            }
            VertexId::Encoded { g, cycle: None } => write!(f, "C({g})"),
            VertexId::Encoded { g, cycle: Some(j) } => write!(f, "Y({g},{j})"),
        }
    }
}

impl From<Word> for VertexId {
    fn from(w: Word) -> Self {
        VertexId::Word(w)
    }
}
