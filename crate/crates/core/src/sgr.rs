//! The `.sgr` line-oriented graph format.
//!
//! ```text
//! schreier r=2
//! radius 1
//! root e
//! e s1 s1
//! s1^-1 s1 e
//! a * b
//! boundary s1
//! ```
//!
//! Lines starting with `#` are comments. The `radius` line is optional; when
//! absent the radius is the root's eccentricity. Tokens are read back as
//! opaque names.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::ball::BallView;
use crate::error::{Error, Result};
use crate::vertex::VertexId;

pub fn emit(view: &BallView) -> String {
    let mut s = String::new();
    writeln!(s, "schreier r={}", view.rank()).unwrap();
    writeln!(s, "radius {}", view.radius()).unwrap();
    writeln!(s, "root {}", view.root()).unwrap();
    for (a, g, b) in view.edges() {
        writeln!(s, "{} s{} {}", view.label(a), g + 1, view.label(b)).unwrap();
    }
    for (a, b) in view.stars() {
        writeln!(s, "{} * {}", view.label(a), view.label(b)).unwrap();
    }
    for v in 0..view.len() as u32 {
        if view.is_boundary(v) {
            writeln!(s, "boundary {}", view.label(v)).unwrap();
        }
    }
    s
}

pub fn parse(text: &str) -> Result<BallView> {
    let mut rank: Option<usize> = None;
    let mut radius: Option<usize> = None;
    let mut root: Option<u32> = None;
    let mut labels: Vec<VertexId> = Vec::new();
    let mut index: HashMap<String, u32> = HashMap::new();
    let mut edges = Vec::new();
    let mut stars = Vec::new();
    let mut boundary = Vec::new();

    let mut intern = |tok: &str, labels: &mut Vec<VertexId>| -> u32 {
        if let Some(&i) = index.get(tok) {
            return i;
        }
        let i = labels.len() as u32;
        index.insert(tok.to_string(), i);
        labels.push(VertexId::named(tok));
        i
    };

    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        if rank.is_none() {
            match fields.as_slice() {
                ["schreier", r] => {
                    let r = r
                        .strip_prefix("r=")
                        .and_then(|x| x.parse::<usize>().ok())
                        .filter(|&x| x >= 1)
                        .ok_or_else(|| Error::parse(line, "expected header `schreier r=<rank>`"))?;
                    rank = Some(r);
                    continue;
                }
                _ => return Err(Error::parse(line, "expected header `schreier r=<rank>`")),
            }
        }
        let r = rank.expect("header read");
        match fields.as_slice() {
            ["radius", n] => {
                radius = Some(
                    n.parse()
                        .map_err(|_| Error::parse(line, "radius must be a nonnegative integer"))?,
                );
            }
            ["root", tok] => {
                if root.is_some() {
                    return Err(Error::parse(line, "duplicate root line"));
                }
                root = Some(intern(tok, &mut labels));
            }
            ["boundary", tok] => boundary.push(intern(tok, &mut labels)),
            [a, "*", b] => {
                let (a, b) = (intern(a, &mut labels), intern(b, &mut labels));
                stars.push((a, b));
            }
            [a, label, b] => {
                let g = label
                    .strip_prefix('s')
                    .and_then(|x| x.parse::<usize>().ok())
                    .filter(|&g| g >= 1 && g <= r)
                    .ok_or_else(|| {
                        Error::parse(line, format!("edge label {label:?} is not s1..s{r} or *"))
                    })?;
                let (a, b) = (intern(a, &mut labels), intern(b, &mut labels));
                edges.push((a, g - 1, b));
            }
            _ => return Err(Error::parse(line, format!("unrecognised line {t:?}"))),
        }
    }
    let rank = rank.ok_or_else(|| Error::parse(1, "missing header"))?;
    let root = root.ok_or_else(|| Error::parse(1, "missing root line"))?;
    BallView::from_parts(rank, radius, labels, root, &edges, &stars, &boundary)
}

/// Graphviz rendering with labels as edge attributes; `*` edges undirected.
pub fn to_dot(view: &BallView) -> String {
    let mut s = String::from("digraph schreier {\n");
    for v in 0..view.len() as u32 {
        let shape = if v == 0 { "doublecircle" } else { "circle" };
        let style = if view.is_boundary(v) { ",style=dashed" } else { "" };
        writeln!(
            s,
            "  n{v} [label=\"{}\",shape={shape}{style}];",
            view.label(v)
        )
        .unwrap();
    }
    for (a, g, b) in view.edges() {
        writeln!(s, "  n{a} -> n{b} [label=\"s{}\"];", g + 1).unwrap();
    }
    for (a, b) in view.stars() {
        writeln!(s, "  n{a} -> n{b} [label=\"*\",dir=none];").unwrap();
    }
    s.push_str("}\n");
    s
}
