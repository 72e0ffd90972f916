//! Periodic symbolic configurations `x ∈ {1..n}^{F_r}` carried by labelled
//! finite actions.
//!
//! A labelled action with basepoint `b` defines `x(g) = label(α(g)^-1 b)`,
//! where `α(s_i)` is the permutation given for `s_i`. Translation is
//! `(f·x)(g) = x(f^-1 g)`, realised by moving the basepoint to `α(f) b`.
//!
//! File format: an action file plus
//!
//! ```text
//! alphabet 2
//! label 0 1
//! label 1 2
//! basepoint 0
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use crate::dynamics::action::{emit_cycles, parse_with, FiniteAction};
use crate::error::{Error, Result};
use crate::word::{Letter, Word};

/// A finite action with a symbol on every point. Its points form a closed
/// invariant set of configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subshift {
    action: FiniteAction,
    labels: Vec<u32>,
    alphabet: u32,
}

impl Subshift {
    pub fn new(action: FiniteAction, labels: Vec<u32>, alphabet: u32) -> Result<Self> {
        if alphabet == 0 {
            return Err(Error::InvalidAlphabet(0));
        }
        if labels.len() != action.len() {
            return Err(Error::Invalid(format!(
                "{} labels for {} points",
                labels.len(),
                action.len()
            )));
        }
        if action.rank() < 2 {
            return Err(Error::Invalid("the encoding needs rank at least 2".into()));
        }
        if let Some(&bad) = labels.iter().find(|&&s| s == 0 || s > alphabet) {
            return Err(Error::InvalidAlphabet(bad));
        }
        Ok(Subshift {
            action,
            labels,
            alphabet,
        })
    }

    pub fn action(&self) -> &FiniteAction {
        &self.action
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn alphabet(&self) -> u32 {
        self.alphabet
    }

    pub fn rank(&self) -> usize {
        self.action.rank()
    }

    pub fn len(&self) -> usize {
        self.action.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Classes of points defining the same configuration: coarsest partition
    /// refining the labels and stable under every generator.
    pub fn configuration_classes(&self) -> Vec<u32> {
        let n = self.len();
        let mut class: Vec<u32> = self.labels.clone();
        let mut count = distinct(&class);
        loop {
            let sigs: Vec<Vec<u32>> = (0..n as u32)
                .map(|x| {
                    let mut s = vec![class[x as usize]];
                    s.extend(Letter::all(self.rank()).map(|l| class[self.action.step(x, l) as usize]));
                    s
                })
                .collect();
            let mut sorted = sigs.clone();
            sorted.sort();
            sorted.dedup();
            let next: Vec<u32> = sigs
                .iter()
                .map(|s| sorted.binary_search(s).expect("present") as u32)
                .collect();
            let c = distinct(&next);
            class = next;
            if c == count {
                return class;
            }
            count = c;
        }
    }
}

fn distinct(v: &[u32]) -> usize {
    let mut s = v.to_vec();
    s.sort();
    s.dedup();
    s.len()
}

/// One configuration: a subshift and a basepoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubshiftPoint {
    space: Arc<Subshift>,
    base: u32,
}

impl SubshiftPoint {
    pub fn new(space: Arc<Subshift>, base: u32) -> Result<Self> {
        space.action.check_point(base)?;
        Ok(SubshiftPoint { space, base })
    }

    pub fn space(&self) -> &Arc<Subshift> {
        &self.space
    }

    pub fn basepoint(&self) -> u32 {
        self.base
    }

    pub fn rank(&self) -> usize {
        self.space.rank()
    }

    /// The point `α(g)^-1 b` whose label is `x(g)`.
    pub fn point_at(&self, g: &Word) -> u32 {
        g.letters()
            .iter()
            .fold(self.base, |y, &l| self.space.action.step(y, l.inverse()))
    }

    pub fn value(&self, g: &Word) -> u32 {
        self.space.labels[self.point_at(g) as usize]
    }

    /// `f·x`.
    pub fn translate(&self, f: &Word) -> SubshiftPoint {
        let base = f
            .letters()
            .iter()
            .rev()
            .fold(self.base, |y, &l| self.space.action.step(y, l));
        SubshiftPoint {
            space: self.space.clone(),
            base,
        }
    }
}

pub fn parse_subshift(text: &str) -> Result<(Subshift, u32)> {
    let mut alphabet: Option<u32> = None;
    let mut labels: Vec<(usize, u32, u32)> = Vec::new();
    let mut base: Option<u32> = None;
    let action = parse_with(text, |line, fields| {
        let num = |s: &str| {
            s.parse::<u32>()
                .map_err(|_| Error::parse(line, format!("bad number {s:?}")))
        };
        match fields {
            ["alphabet", n] => {
                let n = num(n)?;
                if n == 0 {
                    return Err(Error::InvalidAlphabet(0));
                }
                alphabet = Some(n);
            }
            ["label", p, s] => labels.push((line, num(p)?, num(s)?)),
            ["basepoint", p] => base = Some(num(p)?),
            _ => return Ok(false),
        }
        Ok(true)
    })?;
    let alphabet = alphabet.ok_or_else(|| Error::parse(1, "missing alphabet line"))?;
    let n = action.len();
    let mut lab = vec![0u32; n];
    for (line, p, s) in labels {
        if p as usize >= n {
            return Err(Error::parse(line, format!("point {p} outside 0..{n}")));
        }
        if lab[p as usize] != 0 {
            return Err(Error::parse(line, format!("point {p} labelled twice")));
        }
        if s == 0 || s > alphabet {
            return Err(Error::InvalidAlphabet(s));
        }
        lab[p as usize] = s;
    }
    if let Some(p) = lab.iter().position(|&s| s == 0) {
        return Err(Error::parse(1, format!("point {p} has no label")));
    }
    let base = base.ok_or_else(|| Error::parse(1, "missing basepoint line"))?;
    action.check_point(base)?;
    Ok((Subshift::new(action, lab, alphabet)?, base))
}

pub fn emit_subshift(s: &Subshift, base: u32) -> String {
    let mut out = format!("alphabet {}\npoints {}\n", s.alphabet, s.len());
    for (i, p) in s.action.perms().iter().enumerate() {
        writeln!(out, "perm s{}: {}", i + 1, emit_cycles(p)).unwrap();
    }
    for (p, l) in s.labels.iter().enumerate() {
        writeln!(out, "label {p} {l}").unwrap();
    }
    writeln!(out, "basepoint {base}").unwrap();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn period_two() -> Subshift {
        let a = FiniteAction::new(vec![vec![1, 0], vec![1, 0]]).unwrap();
        Subshift::new(a, vec![1, 2], 2).unwrap()
    }

    #[test]
    fn translation_law() {
        let a = FiniteAction::new(vec![vec![1, 2, 0], vec![0, 2, 1]]).unwrap();
        let s = Arc::new(Subshift::new(a, vec![1, 2, 3], 3).unwrap());
        let x = SubshiftPoint::new(s, 0).unwrap();
        for f in crate::word::ball_words(2, 2) {
            let fx = x.translate(&f);
            for g in crate::word::ball_words(2, 2) {
                assert_eq!(fx.value(&g), x.value(&f.inverse().mul(&g)));
            }
        }
    }

    #[test]
    fn classes() {
        let s = period_two();
        let c = s.configuration_classes();
        assert_ne!(c[0], c[1]);
        let a = FiniteAction::new(vec![vec![1, 0], vec![0, 1]]).unwrap();
        let same = Subshift::new(a, vec![1, 1], 1).unwrap();
        let c = same.configuration_classes();
        assert_eq!(c[0], c[1]);
    }

    #[test]
    fn file_round_trip() {
        let s = period_two();
        let text = emit_subshift(&s, 1);
        let (back, b) = parse_subshift(&text).unwrap();
        assert_eq!(back, s);
        assert_eq!(b, 1);
        assert!(matches!(
            parse_subshift("alphabet 1\npoints 1\nperm s1: ()\nperm s2: ()\nlabel 0 0\nbasepoint 0\n"),
            Err(Error::InvalidAlphabet(0))
        ));
        assert!(parse_subshift("alphabet 1\npoints 2\nperm s1: ()\nperm s2: ()\nlabel 0 1\nbasepoint 0\n").is_err());
    }
}
