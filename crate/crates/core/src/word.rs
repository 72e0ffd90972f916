//! Letters and reduced words of the free group `F_r`.
//!
//! Letters are ordered `s1 < s1^-1 < s2 < s2^-1 < ...`; words are compared in
//! shortlex order (length first, then lexicographically by letter).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A generator `s_i` or its inverse. `gen` is zero-based; `s1` has `gen == 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    gen: u8,
    inv: bool,
}

impl Letter {
    pub fn new(gen: usize, inv: bool) -> Self {
        assert!(gen < 256, "generator index {gen} out of range");
        Letter { gen: gen as u8, inv }
    }

    /// `s_{gen+1}`
    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    /// `s_{gen+1}^{-1}`
    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    pub fn gen(self) -> usize {
        self.gen as usize
    }

    pub fn is_inverse(self) -> bool {
        self.inv
    }

    pub fn inverse(self) -> Self {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }

    /// Position in the letter order: `2*gen + inv`.
    pub fn code(self) -> usize {
        2 * self.gen as usize + self.inv as usize
    }

    pub fn from_code(code: usize) -> Self {
        Letter::new(code / 2, code % 2 == 1)
    }

    /// All `2r` letters in order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * rank).map(Letter::from_code)
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code().cmp(&other.code())
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "s{}^-1", self.gen + 1)
        } else {
            write!(f, "s{}", self.gen + 1)
        }
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Builds the reduced form of an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    /// `s_{gen+1}^exp`
    pub fn power(gen: usize, exp: i64) -> Self {
        let l = Letter::new(gen, exp < 0);
        Word(vec![l; exp.unsigned_abs() as usize])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a letter, cancelling against the last letter when possible.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inverse()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    /// Reduced product `self * other`.
    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.clone();
        for &l in &other.0 {
            out.push(l);
        }
        out
    }

    /// `g * self * g^-1`, reduced.
    pub fn conjugate_by(&self, g: &Word) -> Word {
        g.mul(self).mul(&g.inverse())
    }

    /// Largest generator index used, plus one.
    pub fn min_rank(&self) -> usize {
        self.0.iter().map(|l| l.gen() + 1).max().unwrap_or(0)
    }
}

/// Free reduction of a letter sequence.
pub fn reduce(letters: &[Letter]) -> Word {
    Word::from_letters(letters.iter().copied())
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `e`, or a sequence of `s<i>` tokens each optionally followed by
    /// `^<int>`. Whitespace, `.` and `*` between tokens are ignored.
    fn from_str(s: &str) -> Result<Word> {
        let bad = |msg: &str| Error::Invalid(format!("word {s:?}: {msg}"));
        let t = s.trim();
        if t.is_empty() || t == "e" || t == "1" {
            return Ok(Word::identity());
        }
        let bytes = t.as_bytes();
        let mut i = 0;
        let mut out = Word::identity();
        while i < bytes.len() {
            match bytes[i] {
                b' ' | b'\t' | b'.' | b'*' => {
                    i += 1;
                    continue;
                }
                b's' => {}
                _ => return Err(bad("expected 's<index>'")),
            }
            i += 1;
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let index: usize = t[start..i]
                .parse()
                .map_err(|_| bad("missing generator index"))?;
            if index == 0 || index > 256 {
                return Err(bad("generator index must be in 1..=256"));
            }
            let mut exp: i64 = 1;
            if i < bytes.len() && bytes[i] == b'^' {
                i += 1;
                let start = i;
                if i < bytes.len() && bytes[i] == b'-' {
                    i += 1;
                }
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                exp = t[start..i].parse().map_err(|_| bad("bad exponent"))?;
            }
            let l = Letter::new(index - 1, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                out.push(l);
            }
        }
        Ok(out)
    }
}

/// All reduced words of length at most `radius` over `rank` generators, in
/// shortlex order (identity first).
pub fn ball_words(rank: usize, radius: usize) -> Vec<Word> {
    let mut out = vec![Word::identity()];
    let mut frontier = vec![Word::identity()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for l in Letter::all(rank) {
                if w.0.last() == Some(&l.inverse()) {
                    continue;
                }
                let mut x = w.clone();
                x.0.push(l);
                next.push(x);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// `|B(radius)|` in `F_rank`: `1 + 2r((2r-1)^R - 1)/(2r-2)`, or `2R+1` for `r = 1`.
pub fn ball_size(rank: usize, radius: usize) -> usize {
    if rank == 0 {
        return 1;
    }
    let mut total = 1;
    let mut sphere = 2 * rank;
    for _ in 0..radius {
        total += sphere;
        sphere *= 2 * rank - 1;
    }
    total
}
