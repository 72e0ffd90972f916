//! Exact probabilities and the mark laws `u_p`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use crate::error::{Error, Result};

/// A rational probability strictly between 0 and 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Prob {
    num: u64,
    den: u64,
}

impl Prob {
    pub fn new(num: u64, den: u64) -> Result<Prob> {
        if den == 0 || num == 0 || num >= den {
            return Err(Error::InvalidProbability(format!("{num}/{den}")));
        }
        let g = num.gcd(&den);
        Ok(Prob {
            num: num / g,
            den: den / g,
        })
    }

    pub fn num(self) -> u64 {
        self.num
    }

    pub fn den(self) -> u64 {
        self.den
    }

    pub fn as_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    pub fn to_big(self) -> BigRational {
        BigRational::new(BigInt::from(self.num), BigInt::from(self.den))
    }

    /// Accepts only the `a/b` form.
    pub fn parse_exact(s: &str) -> Result<Prob> {
        let t = s.trim();
        let (a, b) = t
            .split_once('/')
            .ok_or_else(|| Error::Invalid(format!("expected a rational a/b, got {t:?}")))?;
        let a = a
            .trim()
            .parse()
            .map_err(|_| Error::InvalidProbability(t.to_string()))?;
        let b = b
            .trim()
            .parse()
            .map_err(|_| Error::InvalidProbability(t.to_string()))?;
        Prob::new(a, b)
    }

    /// True with probability exactly `num/den` when `u` is uniform on `u64`.
    #[inline]
    pub fn bernoulli(self, u: u64) -> bool {
        (u as u128) * (self.den as u128) < (self.num as u128) << 64
    }
}

impl FromStr for Prob {
    type Err = Error;

    /// `a/b` or a finite decimal such as `0.05` (converted exactly).
    fn from_str(s: &str) -> Result<Prob> {
        let t = s.trim();
        if t.contains('/') {
            return Prob::parse_exact(t);
        }
        let bad = || Error::InvalidProbability(t.to_string());
        let (int, frac) = t.split_once('.').unwrap_or((t, ""));
        if frac.len() > 18 || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let den = 10u64.pow(frac.len() as u32);
        let int: u64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
        let frac: u64 = if frac.is_empty() { 0 } else { frac.parse().map_err(|_| bad())? };
        let num = int
            .checked_mul(den)
            .and_then(|x| x.checked_add(frac))
            .ok_or_else(bad)?;
        Prob::new(num, den)
    }
}

impl fmt::Display for Prob {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// `u_p` on `{0, 1, ..., r}`: mass `1-p` at 0 and `p/r` at each positive mark.
/// The root uses `u_q` with `q = 3p/(1+2p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MarkLaw {
    p: Prob,
    q: Prob,
    rank: usize,
}

impl MarkLaw {
    pub fn new(p: Prob, rank: usize) -> MarkLaw {
        assert!(rank >= 1);
        let (a, b) = (p.num as u128, p.den as u128);
        let (qn, qd) = (3 * a, b + 2 * a);
        let g = qn.gcd(&qd);
        let q = Prob::new((qn / g) as u64, (qd / g) as u64).expect("q lies in (0,1) when p does");
        MarkLaw { p, q, rank }
    }

    pub fn p(&self) -> Prob {
        self.p
    }

    pub fn q(&self) -> Prob {
        self.q
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn law(&self, at_root: bool) -> Prob {
        if at_root {
            self.q
        } else {
            self.p
        }
    }

    /// Maps 128 uniform bits to a mark.
    pub fn sample(&self, bits: [u64; 2], at_root: bool) -> u8 {
        if !self.law(at_root).bernoulli(bits[0]) {
            0
        } else {
            1 + ((bits[1] as u128 * self.rank as u128) >> 64) as u8
        }
    }

    /// Exact mass of mark `i`.
    pub fn mass(&self, i: usize, at_root: bool) -> BigRational {
        let x = self.law(at_root).to_big();
        if i == 0 {
            BigRational::from_integer(1.into()) - x
        } else {
            x / BigInt::from(self.rank)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsing() {
        assert_eq!("1/2".parse::<Prob>().unwrap(), Prob::new(1, 2).unwrap());
        assert_eq!("0.05".parse::<Prob>().unwrap(), Prob::new(1, 20).unwrap());
        assert_eq!("2/4".parse::<Prob>().unwrap().to_string(), "1/2");
        assert!("0".parse::<Prob>().is_err());
        assert!("1".parse::<Prob>().is_err());
        assert!("1.5".parse::<Prob>().is_err());
        assert!(Prob::parse_exact("0.5").is_err());
        assert!(Prob::new(0, 3).is_err());
    }

    #[test]
    fn q_of_half_is_three_quarters() {
        let law = MarkLaw::new(Prob::new(1, 2).unwrap(), 2);
        assert_eq!(law.q(), Prob::new(3, 4).unwrap());
    }

    #[test]
    fn masses_sum_to_one() {
        let law = MarkLaw::new(Prob::new(3, 10).unwrap(), 3);
        for root in [false, true] {
            let total: BigRational = (0..=3).map(|i| law.mass(i, root)).sum();
            assert_eq!(total, BigRational::from_integer(1.into()));
        }
    }

    #[test]
    fn bernoulli_edges() {
        let p = Prob::new(1, 2).unwrap();
        assert!(p.bernoulli(0));
        assert!(p.bernoulli((1u64 << 63) - 1));
        assert!(!p.bernoulli(1u64 << 63));
        assert!(!p.bernoulli(u64::MAX));
    }
}
