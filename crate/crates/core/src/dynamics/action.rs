//! Finite actions of `F_r` given by permutations, and their file format.
//!
//! ```text
//! points 4
//! perm s1: (0 1)(2 3)
//! perm s2: (0 2)
//! ```
//!
//! Points are `0..n`; cycles list images in order (`(a b c)` sends `a` to
//! `b`). Omitted points are fixed. Every generator `s1..sr` needs a line.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::word::{Letter, Word};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAction {
    perms: Vec<Vec<u32>>,
    inv: Vec<Vec<u32>>,
}

impl FiniteAction {
    pub fn new(perms: Vec<Vec<u32>>) -> Result<Self> {
        let n = perms.first().map_or(0, |p| p.len());
        if perms.is_empty() || n == 0 {
            return Err(Error::Invalid("an action needs at least one point and one generator".into()));
        }
        let mut inv = Vec::with_capacity(perms.len());
        for (i, p) in perms.iter().enumerate() {
            if p.len() != n {
                return Err(Error::Invalid(format!("s{} acts on {} points, not {n}", i + 1, p.len())));
            }
            let mut q = vec![u32::MAX; n];
            for (x, &y) in p.iter().enumerate() {
                if y as usize >= n || q[y as usize] != u32::MAX {
                    return Err(Error::Invalid(format!("s{} is not a permutation", i + 1)));
                }
                q[y as usize] = x as u32;
            }
            inv.push(q);
        }
        Ok(FiniteAction { perms, inv })
    }

    /// Every generator acts trivially.
    pub fn trivial(rank: usize, n: u32) -> Self {
        Self::new(vec![(0..n).collect(); rank]).expect("identity")
    }

    pub fn rank(&self) -> usize {
        self.perms.len()
    }

    pub fn len(&self) -> usize {
        self.perms[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn perm(&self, gen: usize) -> &[u32] {
        &self.perms[gen]
    }

    pub fn perms(&self) -> &[Vec<u32>] {
        &self.perms
    }

    /// Image of `x` under one letter: `s_i` applies `perm_i`, `s_i^-1` its
    /// inverse.
    pub fn step(&self, x: u32, l: Letter) -> u32 {
        if l.is_inverse() {
            self.inv[l.gen()][x as usize]
        } else {
            self.perms[l.gen()][x as usize]
        }
    }

    /// `x·w`: letters applied left to right.
    pub fn act(&self, x: u32, w: &Word) -> u32 {
        w.letters().iter().fold(x, |y, &l| self.step(y, l))
    }

    /// Points reachable from `x`, in breadth-first order.
    pub fn orbit(&self, x: u32) -> Vec<u32> {
        let mut seen = vec![false; self.len()];
        let mut order = vec![x];
        seen[x as usize] = true;
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            for l in Letter::all(self.rank()) {
                let t = self.step(v, l);
                if !seen[t as usize] {
                    seen[t as usize] = true;
                    order.push(t);
                }
            }
        }
        order
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.len()
    }

    pub fn check_point(&self, x: u32) -> Result<()> {
        if (x as usize) < self.len() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("point {x} outside 0..{}", self.len())))
        }
    }
}

pub(crate) fn parse_cycles(text: &str, n: usize, line: usize) -> Result<Vec<u32>> {
    let mut p: Vec<u32> = (0..n as u32).collect();
    let mut moved = vec![false; n];
    let mut rest = text.trim();
    while !rest.is_empty() {
        let body = rest
            .strip_prefix('(')
            .and_then(|r| r.split_once(')'))
            .ok_or_else(|| Error::parse(line, format!("bad cycle notation {text:?}")))?;
        let pts = body
            .0
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<u32>()
                    .ok()
                    .filter(|&x| (x as usize) < n)
                    .ok_or_else(|| Error::parse(line, format!("bad point {s:?}")))
            })
            .collect::<Result<Vec<u32>>>()?;
        for (k, &x) in pts.iter().enumerate() {
            if moved[x as usize] {
                return Err(Error::parse(line, format!("point {x} appears twice")));
            }
            moved[x as usize] = true;
            p[x as usize] = pts[(k + 1) % pts.len()];
        }
        rest = body.1.trim_start();
    }
    Ok(p)
}

pub(crate) fn emit_cycles(p: &[u32]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        out.push('(');
        let mut x = start;
        let mut first = true;
        while !seen[x] {
            seen[x] = true;
            if !first {
                out.push(' ');
            }
            write!(out, "{x}").unwrap();
            first = false;
            x = p[x] as usize;
        }
        out.push(')');
    }
    if out.is_empty() {
        out.push_str("()");
    }
    out
}

/// Reads `points` and `perm` lines, handing any other line to `other`.
pub(crate) fn parse_with(
    text: &str,
    mut other: impl FnMut(usize, &[&str]) -> Result<bool>,
) -> Result<FiniteAction> {
    let mut n: Option<usize> = None;
    let mut perms: Vec<Option<Vec<u32>>> = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = no + 1;
        let t = raw.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split_whitespace().collect();
        match fields[0] {
            "points" => {
                let k = fields
                    .get(1)
                    .and_then(|s| s.parse::<usize>().ok())
                    .filter(|&k| k >= 1 && fields.len() == 2)
                    .ok_or_else(|| Error::parse(line, "expected `points <n>` with n >= 1"))?;
                if n.replace(k).is_some() {
                    return Err(Error::parse(line, "duplicate points line"));
                }
            }
            "perm" => {
                let n = n.ok_or_else(|| Error::parse(line, "perm before points"))?;
                let (head, cycles) = t["perm".len()..]
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, "expected `perm s<i>: <cycles>`"))?;
                let i = head
                    .trim()
                    .strip_prefix('s')
                    .and_then(|x| x.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::parse(line, format!("bad generator {:?}", head.trim())))?;
                if perms.len() < i {
                    perms.resize(i, None);
                }
                if perms[i - 1].is_some() {
                    return Err(Error::parse(line, format!("duplicate perm for s{i}")));
                }
                perms[i - 1] = Some(parse_cycles(cycles, n, line)?);
            }
            _ => {
                if !other(line, &fields)? {
                    return Err(Error::parse(line, format!("unrecognised line {t:?}")));
                }
            }
        }
    }
    if n.is_none() {
        return Err(Error::parse(1, "missing points line"));
    }
    let perms = perms
        .into_iter()
        .enumerate()
        .map(|(i, p)| p.ok_or_else(|| Error::parse(1, format!("missing perm for s{}", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    if perms.is_empty() {
        return Err(Error::parse(1, "no perm lines"));
    }
    FiniteAction::new(perms)
}

pub fn parse_action(text: &str) -> Result<FiniteAction> {
    parse_with(text, |_, _| Ok(false))
}

pub fn emit_action(a: &FiniteAction) -> String {
    let mut s = format!("points {}\n", a.len());
    for (i, p) in a.perms.iter().enumerate() {
        writeln!(s, "perm s{}: {}", i + 1, emit_cycles(p)).unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycle_notation_round_trip() {
        let a = parse_action("points 5\nperm s1: (0 1 2)(3 4)\nperm s2: ()\n").unwrap();
        assert_eq!(a.perm(0), &[1, 2, 0, 4, 3]);
        assert_eq!(a.perm(1), &[0, 1, 2, 3, 4]);
        assert_eq!(parse_action(&emit_action(&a)).unwrap(), a);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(parse_action("perm s1: (0 1)\n").is_err());
        assert!(parse_action("points 2\nperm s1: (0 2)\n").is_err());
        assert!(parse_action("points 3\nperm s1: (0 1)(1 2)\n").is_err());
        assert!(parse_action("points 2\nperm s2: (0 1)\n").is_err());
        assert!(parse_action("points 2\nfoo\n").is_err());
    }

    #[test]
    fn right_action_order() {
        let a = FiniteAction::new(vec![vec![1, 2, 0], vec![0, 2, 1]]).unwrap();
        let w: Word = "s1s2".parse().unwrap();
        assert_eq!(a.act(0, &w), a.step(a.step(0, Letter::pos(0)), Letter::pos(1)));
        assert_eq!(a.act(a.act(1, &w), &w.inverse()), 1);
    }
}
