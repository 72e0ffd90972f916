//! Monte Carlo estimation of cylinder masses, conjugation-invariance reports
//! and `p → 0` sweeps.
//!
//! Sample `i` of a run with seed `s` is always drawn with sub-seed
//! `subseed(s, "sample", i)`, so results do not depend on how the work is
//! split across threads.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::keyed::subseed;
use crate::oracle::{conjugate, Oracle};
use crate::prob::Prob;
use crate::samplers::enumerate::GraphLaw;
use crate::samplers::law::SubgroupLaw;
use crate::subgroup::cylinder_fingerprint;
use crate::word::{ball_size, Letter, Word};

pub use crate::measure::tv_distance;

/// The cylinder `C(F, r)`: subgroups `H` with `H ∩ B(r) = F`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CylinderSpec {
    fingerprint: Vec<Word>,
    radius: usize,
}

impl CylinderSpec {
    pub fn new(mut fingerprint: Vec<Word>, radius: usize) -> Result<Self> {
        fingerprint.sort();
        fingerprint.dedup();
        if fingerprint.first() != Some(&Word::identity()) {
            return Err(Error::Invalid("a cylinder fingerprint must contain e".into()));
        }
        for w in &fingerprint {
            if w.len() > radius {
                return Err(Error::Invalid(format!("{w} is longer than the radius {radius}")));
            }
            if fingerprint.binary_search(&w.inverse()).is_err() {
                return Err(Error::Invalid(format!("fingerprint has {w} but not its inverse")));
            }
        }
        Ok(CylinderSpec {
            fingerprint,
            radius,
        })
    }

    /// `C({e}, r)`.
    pub fn trivial(radius: usize) -> Self {
        CylinderSpec {
            fingerprint: vec![Word::identity()],
            radius,
        }
    }

    pub fn fingerprint(&self) -> &[Word] {
        &self.fingerprint
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn contains(&self, o: &dyn crate::oracle::SchreierOracle) -> bool {
        cylinder_fingerprint(o, self.radius) == self.fingerprint
    }
}

/// Parses `F@r` where `F` is a comma-separated word list, e.g. `e,s1^2,s1^-2@2`.
impl FromStr for CylinderSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (f, r) = s
            .rsplit_once('@')
            .ok_or_else(|| Error::Invalid(format!("expected <words>@<radius>, got {s:?}")))?;
        let radius = r
            .trim()
            .parse()
            .map_err(|_| Error::Invalid(format!("bad radius {r:?}")))?;
        let words = f
            .split(',')
            .map(|w| w.parse::<Word>())
            .collect::<Result<Vec<_>>>()?;
        CylinderSpec::new(words, radius)
    }
}

impl fmt::Display for CylinderSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", join_words(&self.fingerprint), self.radius)
    }
}

fn join_words(ws: &[Word]) -> String {
    ws.iter().map(|w| w.to_string()).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq)]
pub struct EstimateReport {
    pub hits: u64,
    pub n: u64,
    pub seed: u64,
}

impl EstimateReport {
    pub fn estimate(&self) -> Ratio<u64> {
        Ratio::new(self.hits, self.n)
    }

    pub fn estimate_f64(&self) -> f64 {
        self.hits as f64 / self.n as f64
    }

    /// `sqrt(p̂(1-p̂)/N)`.
    pub fn stderr(&self) -> f64 {
        let p = self.estimate_f64();
        (p * (1.0 - p) / self.n as f64).sqrt()
    }
}

fn sample(law: &dyn SubgroupLaw, seed: u64, i: u64) -> Oracle {
    law.sample(subseed(seed, "sample", i))
}

/// Fraction of `n` draws lying in `spec`.
pub fn estimate_cylinder(
    law: &dyn SubgroupLaw,
    spec: &CylinderSpec,
    n: u64,
    seed: u64,
) -> Result<EstimateReport> {
    if n == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let hits = (0..n)
        .into_par_iter()
        .filter(|&i| spec.contains(sample(law, seed, i).as_ref()))
        .count() as u64;
    Ok(EstimateReport { hits, n, seed })
}

/// One cell of an invariance table: the empirical masses of `C` and of
/// `g·C`, the latter read off the conjugated samples.
#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceRow {
    pub cylinder: Vec<Word>,
    pub letter: Letter,
    pub mass: f64,
    pub moved: f64,
    pub deviation: f64,
    pub z: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InvarianceReport {
    pub radius: usize,
    pub n: u64,
    pub seed: u64,
    pub min_mass: f64,
    pub rows: Vec<InvarianceRow>,
}

impl InvarianceReport {
    pub fn max_z(&self) -> f64 {
        self.rows.iter().map(|r| r.z).fold(0.0, f64::max)
    }
}

/// Pooled two-proportion z-score for equal sample sizes.
pub fn pooled_z(p1: f64, p2: f64, n: u64) -> f64 {
    let pbar = (p1 + p2) / 2.0;
    let var = pbar * (1.0 - pbar) * 2.0 / n as f64;
    if var == 0.0 {
        0.0
    } else {
        (p1 - p2).abs() / var.sqrt()
    }
}

type Counts = BTreeMap<(Vec<Word>, usize), u64>;

/// Compares `η̂(C)` with `η̂(g·C)` for every radius-`radius` cylinder and
/// generator letter `g`; cells where both masses are below `min_mass` are
/// omitted.
pub fn invariance_report(
    law: &dyn SubgroupLaw,
    radius: usize,
    n: u64,
    seed: u64,
    min_mass: f64,
) -> Result<InvarianceReport> {
    if n == 0 {
        return Err(Error::Invalid("sample count must be positive".into()));
    }
    let rank = law.rank();
    let letters: Vec<Letter> = Letter::all(rank).collect();
    let conj: Vec<Word> = letters.iter().map(|&l| Word::letter(l)).collect();
    // Slot 0 counts the unmoved fingerprint; slot k+1 the one conjugated by
    // letter k.
    let counts: Counts = (0..n)
        .into_par_iter()
        .fold(Counts::new, |mut acc, i| {
            let o = sample(law, seed, i);
            *acc.entry((cylinder_fingerprint(o.as_ref(), radius), 0)).or_default() += 1;
            for (k, g) in conj.iter().enumerate() {
                let f = cylinder_fingerprint(conjugate(&o, g).as_ref(), radius);
                *acc.entry((f, k + 1)).or_default() += 1;
            }
            acc
        })
        .reduce(Counts::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    let mut cylinders: Vec<&Vec<Word>> = counts.keys().map(|(f, _)| f).collect();
    cylinders.dedup();
    let get = |f: &Vec<Word>, k: usize| *counts.get(&(f.clone(), k)).unwrap_or(&0) as f64 / n as f64;
    let mut rows = Vec::new();
    for f in cylinders {
        for (k, &l) in letters.iter().enumerate() {
            let (a, b) = (get(f, 0), get(f, k + 1));
            if a.max(b) < min_mass {
                continue;
            }
            rows.push(InvarianceRow {
                cylinder: f.clone(),
                letter: l,
                mass: a,
                moved: b,
                deviation: (a - b).abs(),
                z: pooled_z(a, b, n),
            });
        }
    }
    Ok(InvarianceReport {
        radius,
        n,
        seed,
        min_mass,
        rows,
    })
}

/// Exact deviations `η(C) - η(g·C)` of an enumerated law.
pub fn exact_invariance_report(law: &GraphLaw, radius: usize) -> Vec<(Vec<Word>, Letter, BigRational)> {
    law.cylinder_deviations(radius)
}

/// Mass of `spec` under a finitely supported law, when known exactly.
pub fn exact_cylinder(law: &dyn SubgroupLaw, spec: &CylinderSpec) -> Option<Ratio<u64>> {
    let atoms = law.atoms()?;
    Some(
        atoms
            .iter()
            .filter(|(o, _)| spec.contains(o.as_ref()))
            .map(|(_, m)| *m)
            .fold(Ratio::from_integer(0), |a, b| a + b),
    )
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub p: Prob,
    pub report: EstimateReport,
    pub deviation: f64,
    /// `2(1 - (1-p)^{|B(r)|}) + 3·stderr`.
    pub bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub base_value: f64,
    pub base_exact: bool,
    pub rows: Vec<SweepRow>,
}

/// Estimates `spec` under `make(p)` for every `p`, rows ordered by `p`
/// descending, and compares with the base law's mass of `spec` (exact when
/// the base is finitely supported, otherwise estimated with the same `n`).
pub fn convergence_sweep(
    base: &dyn SubgroupLaw,
    make: impl Fn(Prob) -> Box<dyn SubgroupLaw>,
    p_list: &[Prob],
    spec: &CylinderSpec,
    n: u64,
    seed: u64,
) -> Result<Sweep> {
    let (base_value, base_exact) = match exact_cylinder(base, spec) {
        Some(r) => (r.to_f64().expect("finite"), true),
        None => (estimate_cylinder(base, spec, n, subseed(seed, "base", 0))?.estimate_f64(), false),
    };
    let mut ps = p_list.to_vec();
    ps.sort_by(|a, b| b.to_big().cmp(&a.to_big()));
    let vol = ball_size(base.rank(), spec.radius()) as i32;
    let mut rows = Vec::with_capacity(ps.len());
    for (i, p) in ps.into_iter().enumerate() {
        let law = make(p);
        let report = estimate_cylinder(law.as_ref(), spec, n, subseed(seed, "sweep", i as u64))?;
        let eps = 1.0 - (1.0 - p.as_f64()).powi(vol);
        rows.push(SweepRow {
            deviation: (report.estimate_f64() - base_value).abs(),
            bound: 2.0 * eps + 3.0 * report.stderr(),
            p,
            report,
        });
    }
    Ok(Sweep {
        base_value,
        base_exact,
        rows,
    })
}

/// Output format for tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "csv" => Ok(Format::Csv),
            _ => Err(Error::Invalid(format!("unknown format {s:?}"))),
        }
    }
}

/// A small table rendered either aligned or as CSV.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Table {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn render(&self, format: Format) -> String {
        let mut out = String::new();
        match format {
            Format::Csv => {
                for row in std::iter::once(&self.header).chain(&self.rows) {
                    let cells: Vec<String> = row.iter().map(|c| csv_cell(c)).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
            }
            Format::Text => {
                let mut width = vec![0; self.header.len()];
                for row in std::iter::once(&self.header).chain(&self.rows) {
                    for (w, c) in width.iter_mut().zip(row) {
                        *w = (*w).max(c.chars().count());
                    }
                }
                for row in std::iter::once(&self.header).chain(&self.rows) {
                    let cells: Vec<String> = row
                        .iter()
                        .zip(&width)
                        .map(|(c, &w)| format!("{c:<w$}"))
                        .collect();
                    out.push_str(cells.join("  ").trim_end());
                    out.push('\n');
                }
            }
        }
        out
    }
}

fn csv_cell(c: &str) -> String {
    if c.contains([',', '"', '\n']) {
        format!("\"{}\"", c.replace('"', "\"\""))
    } else {
        c.to_string()
    }
}

/// Fixed-precision rendering so reports are byte-stable.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.6}")
}

pub fn fmt_cylinder(ws: &[Word]) -> String {
    format!("{{{}}}", join_words(ws))
}

pub fn estimate_table(spec: &CylinderSpec, r: &EstimateReport) -> Table {
    let mut t = Table::new(["cylinder", "hits", "n", "estimate", "stderr"]);
    t.push([
        spec.to_string(),
        r.hits.to_string(),
        r.n.to_string(),
        fmt_f64(r.estimate_f64()),
        fmt_f64(r.stderr()),
    ]);
    t
}

pub fn invariance_table(r: &InvarianceReport) -> Table {
    let mut t = Table::new(["cylinder", "g", "mass", "moved", "deviation", "z"]);
    for row in &r.rows {
        t.push([
            fmt_cylinder(&row.cylinder),
            row.letter.to_string(),
            fmt_f64(row.mass),
            fmt_f64(row.moved),
            fmt_f64(row.deviation),
            format!("{:.3}", row.z),
        ]);
    }
    t
}

pub fn exact_invariance_table(rows: &[(Vec<Word>, Letter, BigRational)]) -> Table {
    let mut t = Table::new(["cylinder", "g", "deviation"]);
    for (f, l, d) in rows {
        t.push([fmt_cylinder(f), l.to_string(), d.to_string()]);
    }
    t
}

pub fn sweep_table(s: &Sweep) -> Table {
    let mut t = Table::new(["p", "estimate", "stderr", "deviation", "bound"]);
    for row in &s.rows {
        t.push([
            row.p.to_string(),
            fmt_f64(row.report.estimate_f64()),
            fmt_f64(row.report.stderr()),
            fmt_f64(row.deviation),
            fmt_f64(row.bound),
        ]);
    }
    t
}

/// Exact total variation distance between two enumerated laws.
pub fn law_tv(a: &GraphLaw, b: &GraphLaw) -> BigRational {
    tv_distance(a.measure(), b.measure())
}

/// True when every exact deviation is zero.
pub fn all_zero(rows: &[(Vec<Word>, Letter, BigRational)]) -> bool {
    rows.iter().all(|(_, _, d)| d.is_zero())
}

/// `a/b` as an exact rational.
pub fn ratio_big(r: Ratio<u64>) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}
