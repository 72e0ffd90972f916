mod base;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use num_traits::Zero;

use schreier::dynamics::{
    first_return, is_totally_nonfree, parse_action, stab_equal,
    stab_pushforward_law, FiniteAction, SubsetMask,
};
use schreier::encoder::{
    decode_view, parse_subshift, phi, uniform_on_orbit, PsiOracle, Subshift, SubshiftPoint,
    XSpace,
};
use schreier::keyed::{subseed, SeededKey};
use schreier::oracle::conjugate;
use schreier::samplers::{
    enumerate_normalizer_law, BaseRoot, Enumeration, NormalizerLaw, PoulsenGamma, PoulsenLaw,
    RootSlot, SubgroupLaw,
};
use schreier::stats::{
    all_zero, convergence_sweep, estimate_cylinder, estimate_table, exact_invariance_table,
    fmt_cylinder, invariance_report, invariance_table, sweep_table, CylinderSpec, Format, Table,
};
use schreier::subgroup::{cylinder_fingerprint, first_disagreement};
use schreier::{ball, root_isomorphic, sgr, Error, Letter, Prob, VertexId, Word, DEFAULT_BUDGET};

use base::{parse_finite, parse_law, read_graph, FiniteBase};

#[derive(Parser)]
#[command(name = "schreier", version, about = "Subgroups of free groups as Schreier graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Global {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Vertex budget for graph exploration and enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Worker threads for sampling; output does not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Table format.
    #[arg(long, global = true, default_value = "text")]
    format: Format,
}

#[derive(Args, Clone)]
struct LawArgs {
    /// Base specification: trivial, file:<path>, uniform:file:<path>,
    /// normalizer:<spec>, poulsen:<spec>.
    #[arg(long)]
    base: String,
    /// Perturbation parameter, as a/b or a decimal.
    #[arg(long)]
    p: Option<Prob>,
    /// Rank of the free group for `trivial`.
    #[arg(long, default_value_t = 2)]
    rank: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Radius-R ball of a sampled subgroup, as .sgr.
    Ball {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        radius: usize,
        /// Emit Graphviz instead of .sgr.
        #[arg(long)]
        dot: bool,
    },
    /// Distance between two sampled subgroups.
    Metric {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        p: Option<Prob>,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        #[arg(long, default_value_t = 6)]
        max_radius: usize,
    },
    /// The words of length at most R in a sampled subgroup.
    Fingerprint {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        radius: usize,
    },
    /// Automorphism count of a finite Schreier graph.
    Aut {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Ball of one normalizer-perturbed sample.
    SampleNormalizer {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        radius: usize,
        /// `uniform`, or a fixed slot 0, 1 or 2 (not invariant).
        #[arg(long, default_value = "uniform")]
        root_slot: String,
    },
    /// Ball of one percolation-construction sample.
    SamplePoulsen {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long)]
        radius: usize,
        /// Show the graph before surgery, with its * edges.
        #[arg(long)]
        no_surgery: bool,
    },
    /// Exact law of the normalizer construction over a finite base.
    EnumerateNormalizer {
        /// file:<path> (own root) or uniform:file:<path>.
        #[arg(long)]
        base: String,
        /// Exact rational a/b.
        #[arg(long)]
        p: String,
        #[arg(long)]
        check_invariance: bool,
        #[arg(long, default_value_t = 2)]
        radius: usize,
        #[arg(long, default_value = "uniform")]
        root_slot: String,
    },
    /// Ball of the encoded subgroup of a subshift point.
    Encode {
        #[arg(long)]
        subshift: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover a configuration from a ball of its encoding.
    Decode {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        radius: usize,
    },
    /// Compare encodings of translates with conjugated encodings.
    CheckEquivariance {
        #[arg(long)]
        subshift: PathBuf,
        #[arg(long, default_value_t = 20)]
        trials: u64,
        #[arg(long, default_value_t = 4)]
        radius: usize,
        #[arg(long, default_value_t = 3)]
        max_len: u64,
    },
    /// Retract a subgroup onto the encoded set.
    Upsilon {
        #[arg(long)]
        subshift: PathBuf,
        /// Conjugate the encoding by this word first.
        #[arg(long)]
        conjugate: Option<Word>,
        /// Use this law's sample instead of the encoding.
        #[arg(long)]
        base: Option<String>,
        #[arg(long)]
        p: Option<Prob>,
        #[arg(long)]
        radius: Option<usize>,
    },
    /// The lifted measure for the uniform measure on the basepoint's orbit.
    Lambda {
        #[arg(long)]
        subshift: PathBuf,
    },
    /// Law of the stabilizer of a uniform point.
    StabLaw {
        #[arg(long)]
        action: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Whether distinct points have distinct stabilizers.
    TnfCheck {
        #[arg(long)]
        action: PathBuf,
    },
    /// First-return map of one generator to a subset.
    FirstReturn {
        #[arg(long)]
        action: PathBuf,
        /// Generator index, 1-based.
        #[arg(long)]
        gen: usize,
        /// Bitmask (13, 0b1101, 0xd) or point list {0,2,3}.
        #[arg(long)]
        subset: String,
    },
    /// Monte Carlo mass of a cylinder set.
    Estimate {
        #[command(flatten)]
        law: LawArgs,
        /// Fingerprint and radius, e.g. `e@2` or `e,s1^2,s1^-2@2`.
        #[arg(long)]
        cylinder: CylinderSpec,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
    },
    /// Conjugation-invariance z-scores on cylinders.
    Invariance {
        #[command(flatten)]
        law: LawArgs,
        #[arg(long, default_value_t = 1)]
        radius: usize,
        #[arg(long, default_value_t = 20_000)]
        n: u64,
        #[arg(long, default_value_t = 0.01)]
        min_mass: f64,
        #[arg(long, default_value_t = 4.0)]
        z_threshold: f64,
        /// Use the documented non-invariant variant: normalizer over the base
        /// with the root pinned to slot 0.
        #[arg(long)]
        negative_control: bool,
    },
    /// Cylinder estimates as p decreases.
    Sweep {
        #[arg(long)]
        base: String,
        #[arg(long, default_value_t = 2)]
        rank: usize,
        /// `poulsen` or `normalizer`.
        #[arg(long, default_value = "poulsen")]
        construction: String,
        /// Comma-separated list, e.g. 0.2,0.1,0.05,0.01.
        #[arg(long, value_delimiter = ',')]
        p_list: Vec<Prob>,
        #[arg(long)]
        cylinder: CylinderSpec,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
    },
}

/// A run that completed but whose check failed.
struct Verification(String);

struct Run {
    global: Global,
    out: String,
}

impl Run {
    fn header(&mut self, cmd: &str, fields: &[(&str, String)]) {
        writeln!(self.out, "# schreier {cmd}").unwrap();
        writeln!(self.out, "# seed: {}", self.global.seed).unwrap();
        writeln!(self.out, "# budget: {}", self.global.budget).unwrap();
        for (k, v) in fields {
            writeln!(self.out, "# {k}: {v}").unwrap();
        }
    }

    fn line(&mut self, s: impl AsRef<str>) {
        self.out.push_str(s.as_ref());
        self.out.push('\n');
    }

    fn table(&mut self, t: &Table) {
        self.out.push_str(&t.render(self.global.format));
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_subshift(path: &Path) -> Result<(Subshift, u32)> {
    Ok(parse_subshift(&read(path)?)?)
}

fn read_action(path: &Path) -> Result<FiniteAction> {
    Ok(parse_action(&read(path)?)?)
}

fn opt_p(p: Option<Prob>) -> String {
    p.map_or("-".into(), |p| p.to_string())
}

fn root_slot(s: &str) -> Result<RootSlot> {
    match s {
        "uniform" => Ok(RootSlot::Uniform),
        "0" | "1" | "2" => Ok(RootSlot::Fixed(s.parse().unwrap())),
        _ => Err(Error::Invalid(format!("root slot must be uniform, 0, 1 or 2, got {s:?}")).into()),
    }
}

fn execute(run: &mut Run, cmd: Cmd) -> Result<Option<Verification>> {
    let seed = run.global.seed;
    let budget = run.global.budget;
    match cmd {
        Cmd::Ball { law, radius, dot } => {
            let l = parse_law(&law.base, law.rank, law.p)?;
            run.header(
                "ball",
                &[("base", l.describe()), ("p", opt_p(law.p)), ("radius", radius.to_string())],
            );
            let view = ball(l.sample(seed).as_ref(), radius, budget)?;
            let text = if dot { sgr::to_dot(&view) } else { sgr::emit(&view) };
            run.line(text.trim_end());
        }
        Cmd::Metric { a, b, p, rank, max_radius } => {
            let (la, lb) = (parse_law(&a, rank, p)?, parse_law(&b, rank, p)?);
            run.header(
                "metric",
                &[("a", la.describe()), ("b", lb.describe()), ("max-radius", max_radius.to_string())],
            );
            let oa = la.sample(subseed(seed, "metric", 0));
            let ob = lb.sample(subseed(seed, "metric", 1));
            match first_disagreement(oa.as_ref(), ob.as_ref(), max_radius, budget)? {
                Some(n) => run.line(format!("distance 1/{}\nfirst differing radius {n}", n + 1)),
                None => run.line(format!("distance <= 1/{}\nagree through radius {max_radius}", max_radius + 2)),
            }
        }
        Cmd::Fingerprint { law, radius } => {
            let l = parse_law(&law.base, law.rank, law.p)?;
            run.header(
                "fingerprint",
                &[("base", l.describe()), ("p", opt_p(law.p)), ("radius", radius.to_string())],
            );
            for w in cylinder_fingerprint(l.sample(seed).as_ref(), radius) {
                run.line(w.to_string());
            }
        }
        Cmd::Aut { graph } => {
            let g = read_graph(&graph)?;
            run.header("aut", &[("graph", graph.display().to_string())]);
            let a = g.aut_count();
            run.line(format!("vertices {}", g.len()));
            run.line(format!("aut_count {a}"));
            run.line(format!("self-normalizing {}", if a == 1 { "yes" } else { "no" }));
        }
        Cmd::SampleNormalizer { law, radius, root_slot: slot } => {
            let p = law.p.ok_or_else(|| Error::Invalid("sample-normalizer needs --p".into()))?;
            let base = parse_law(&law.base, law.rank, Some(p))?;
            let l = NormalizerLaw::new(base, p, root_slot(&slot)?);
            run.header(
                "sample-normalizer",
                &[("law", l.describe()), ("radius", radius.to_string())],
            );
            let view = ball(l.sample(seed).as_ref(), radius, budget)?;
            run.line(sgr::emit(&view).trim_end());
        }
        Cmd::SamplePoulsen { law, radius, no_surgery } => {
            let p = law.p.ok_or_else(|| Error::Invalid("sample-poulsen needs --p".into()))?;
            let base = parse_law(&law.base, law.rank, Some(p))?;
            let l = PoulsenLaw::new(base.clone(), p);
            run.header(
                "sample-poulsen",
                &[
                    ("law", l.describe()),
                    ("radius", radius.to_string()),
                    ("surgery", (!no_surgery).to_string()),
                ],
            );
            let view = if no_surgery {
                let gamma = PoulsenGamma::new(base, p, subseed(seed, "poulsen", 0));
                ball(&gamma, radius, budget)?
            } else {
                ball(l.sample(seed).as_ref(), radius, budget)?
            };
            run.line(sgr::emit(&view).trim_end());
        }
        Cmd::EnumerateNormalizer { base, p, check_invariance, radius, root_slot: slot } => {
            let p = Prob::parse_exact(&p)?;
            let (graph, root) = match parse_finite(&base)? {
                FiniteBase::Rooted(g) => (g, BaseRoot::Fixed),
                FiniteBase::Uniform(g) => (g, BaseRoot::Uniform),
            };
            let opts = Enumeration {
                p,
                slot: root_slot(&slot)?,
                root,
                budget,
            };
            run.header(
                "enumerate-normalizer",
                &[
                    ("base", base.clone()),
                    ("p", p.to_string()),
                    ("root-slot", slot.clone()),
                    ("radius", radius.to_string()),
                ],
            );
            let law = enumerate_normalizer_law(&graph, &opts)?;
            let mut t = Table::new(["atom", "vertices", "aut", "mass"]);
            for (i, (g, m)) in law.iter().enumerate() {
                t.push([i.to_string(), g.len().to_string(), g.aut_count().to_string(), m.to_string()]);
            }
            run.table(&t);
            run.line(format!("atoms {}", law.len()));
            run.line(format!("total {}", law.total()));
            run.line(format!("self-normalizing mass {}", law.trivial_aut_mass()));
            if check_invariance {
                let rows = law.cylinder_deviations(radius);
                if all_zero(&rows) {
                    run.line(format!("cylinder/generator pairs {}", rows.len()));
                    run.line("exact invariance: PASS");
                } else {
                    let bad: Vec<_> = rows.into_iter().filter(|(_, _, d)| !d.is_zero()).collect();
                    run.table(&exact_invariance_table(&bad));
                    run.line("exact invariance: FAIL");
                    return Ok(Some(Verification(format!("{} nonzero deviations", bad.len()))));
                }
            }
        }
        Cmd::Encode { subshift, radius, out } => {
            let (s, b) = read_subshift(&subshift)?;
            run.header(
                "encode",
                &[("subshift", subshift.display().to_string()), ("radius", radius.to_string())],
            );
            let x = SubshiftPoint::new(Arc::new(s), b)?;
            let view = ball(&PsiOracle::new(x), radius, budget)?;
            let text = sgr::emit(&view);
            match out {
                Some(path) => {
                    fs::write(&path, &text).with_context(|| format!("writing {}", path.display()))?;
                    run.line(format!("wrote {} vertices to {}", view.len(), path.display()));
                }
                None => run.line(text.trim_end()),
            }
        }
        Cmd::Decode { graph, radius } => {
            let view = sgr::parse(&read(&graph)?)?;
            run.header(
                "decode",
                &[("graph", graph.display().to_string()), ("radius", radius.to_string())],
            );
            let x = decode_view(&view, radius)?;
            let mut t = Table::new(["g", "x(g)"]);
            for (g, v) in &x {
                t.push([g.to_string(), v.to_string()]);
            }
            run.table(&t);
        }
        Cmd::CheckEquivariance { subshift, trials, radius, max_len } => {
            let (s, b) = read_subshift(&subshift)?;
            run.header(
                "check-equivariance",
                &[
                    ("subshift", subshift.display().to_string()),
                    ("trials", trials.to_string()),
                    ("radius", radius.to_string()),
                    ("max-len", max_len.to_string()),
                ],
            );
            let rank = s.rank();
            let x = SubshiftPoint::new(Arc::new(s), b)?;
            let psi: schreier::Oracle = Arc::new(PsiOracle::new(x.clone()));
            let mut fails = 0;
            let mut t = Table::new(["trial", "f", "result"]);
            for k in 0..trials {
                let f = random_word(subseed(seed, "trial", k), rank, max_len);
                let lhs = ball(&PsiOracle::new(x.translate(&f)), radius, budget)?;
                let rhs = ball(conjugate(&psi, &phi(&f)).as_ref(), radius, budget)?;
                let ok = root_isomorphic(&lhs, &rhs);
                fails += !ok as u64;
                t.push([k.to_string(), f.to_string(), if ok { "ok" } else { "MISMATCH" }.to_string()]);
            }
            run.table(&t);
            if fails > 0 {
                run.line(format!("equivariance: FAIL ({fails}/{trials})"));
                return Ok(Some(Verification(format!("{fails} mismatches"))));
            }
            run.line("equivariance: PASS");
        }
        Cmd::Upsilon { subshift, conjugate: g, base, p, radius } => {
            let (s, b) = read_subshift(&subshift)?;
            let radius = radius.unwrap_or(s.alphabet() as usize + 3);
            let rank = s.rank();
            let space = XSpace::new(Arc::new(s), budget);
            let (desc, k) = match &base {
                Some(spec) => {
                    let l = parse_law(spec, rank, p)?;
                    (l.describe(), l.sample(seed))
                }
                None => {
                    let g = g.clone().unwrap_or_else(Word::identity);
                    (format!("encoding conjugated by {g}"), conjugate(&space.psi(b), &g))
                }
            };
            run.header(
                "upsilon",
                &[
                    ("subshift", subshift.display().to_string()),
                    ("subgroup", desc),
                    ("radius", radius.to_string()),
                ],
            );
            let (f, z) = space.upsilon(&k, radius)?;
            run.line(format!("translate {f}"));
            match z.root() {
                VertexId::Encoded { g, .. } => run.line(format!("lands at the vertex of {g}")),
                other => run.line(format!("lands at {other}")),
            }
            run.line(format!("in Z: {}", space.in_z(z.as_ref(), radius)?));
        }
        Cmd::Lambda { subshift } => {
            let (s, b) = read_subshift(&subshift)?;
            run.header("lambda", &[("subshift", subshift.display().to_string())]);
            let a = s.action().clone();
            let space = XSpace::new(Arc::new(s), budget);
            let eta = uniform_on_orbit(&a, b);
            let lambda = space.lambda(&eta)?;
            let mut t = Table::new(["atom", "mass"]);
            for (k, m) in lambda.iter() {
                t.push([k.to_string(), m.to_string()]);
            }
            run.table(&t);
            let l = space.translates().len();
            run.line(format!("total {} (|L| = {l})", lambda.total()));
            let z_ok = lambda.restrict(|k| k.cycle.is_none()) == space.psi_pushforward(&eta);
            let inv_ok = space
                .lambda_deviations(&lambda)
                .iter()
                .all(|(_, _, d)| d.is_zero());
            run.line(format!("restriction to Z: {}", if z_ok { "PASS" } else { "FAIL" }));
            run.line(format!("invariance: {}", if inv_ok { "PASS" } else { "FAIL" }));
            if !(z_ok && inv_ok) {
                return Ok(Some(Verification("lambda checks failed".into())));
            }
        }
        Cmd::StabLaw { action, radius } => {
            let a = read_action(&action)?;
            run.header(
                "stab-law",
                &[("action", action.display().to_string()), ("radius", radius.to_string())],
            );
            match stab_pushforward_law(&a) {
                Ok(law) => {
                    let words = schreier::word::ball_words(a.rank(), radius);
                    let mut t = Table::new(["atom", "index", "mass", "fingerprint"]);
                    for (i, (g, m)) in law.iter().enumerate() {
                        let f = schreier::samplers::enumerate::finite_fingerprint(g, &words);
                        t.push([i.to_string(), g.len().to_string(), m.to_string(), fmt_cylinder(&f)]);
                    }
                    run.table(&t);
                    run.line("invariance: PASS");
                }
                Err(Error::NotInvariant(msg)) => {
                    run.line(format!("invariance: FAIL ({msg})"));
                    return Ok(Some(Verification(msg)));
                }
                Err(e) => return Err(e.into()),
            }
        }
        Cmd::TnfCheck { action } => {
            let a = read_action(&action)?;
            run.header("tnf-check", &[("action", action.display().to_string())]);
            let tnf = is_totally_nonfree(&a)?;
            run.line(format!("totally non-free: {}", if tnf { "yes" } else { "no" }));
            if !tnf {
                'outer: for x in 0..a.len() as u32 {
                    for y in x + 1..a.len() as u32 {
                        if stab_equal(&a, x, y)? {
                            run.line(format!("points {x} and {y} have equal stabilizers"));
                            break 'outer;
                        }
                    }
                }
            }
            let orbits = (0..a.len() as u32)
                .filter(|&x| a.orbit(x).iter().all(|&y| y >= x))
                .count();
            run.line(format!("orbits {orbits}"));
        }
        Cmd::FirstReturn { action, gen, subset } => {
            let a = read_action(&action)?;
            if gen == 0 || gen > a.rank() {
                return Err(Error::Invalid(format!("generator {gen} outside 1..={}", a.rank())).into());
            }
            let y = SubsetMask::parse(&subset, a.len())?;
            run.header(
                "first-return",
                &[
                    ("action", action.display().to_string()),
                    ("gen", format!("s{gen}")),
                    ("subset", y.to_string()),
                ],
            );
            let map = first_return(a.perm(gen - 1), &y)?;
            let mut t = Table::new(["y", "return"]);
            for (k, v) in map {
                t.push([k.to_string(), v.to_string()]);
            }
            run.table(&t);
        }
        Cmd::Estimate { law, cylinder, n } => {
            let l = parse_law(&law.base, law.rank, law.p)?;
            run.header(
                "estimate",
                &[("law", l.describe()), ("cylinder", cylinder.to_string()), ("n", n.to_string())],
            );
            let r = estimate_cylinder(l.as_ref(), &cylinder, n, seed)?;
            run.table(&estimate_table(&cylinder, &r));
        }
        Cmd::Invariance { law, radius, n, min_mass, z_threshold, negative_control } => {
            let mut l = parse_law(&law.base, law.rank, law.p)?;
            if negative_control {
                let p = law.p.ok_or_else(|| Error::Invalid("the negative control needs --p".into()))?;
                l = Arc::new(NormalizerLaw::new(l, p, RootSlot::Fixed(0)));
            }
            run.header(
                "invariance",
                &[
                    ("law", l.describe()),
                    ("radius", radius.to_string()),
                    ("n", n.to_string()),
                    ("min-mass", min_mass.to_string()),
                    ("z-threshold", z_threshold.to_string()),
                ],
            );
            if n < 1000 {
                return Err(Error::Invalid("invariance needs n >= 1000".into()).into());
            }
            let r = invariance_report(l.as_ref(), radius, n, seed, min_mass)?;
            run.table(&invariance_table(&r));
            let z = r.max_z();
            run.line(format!("max z {z:.3}"));
            if z > z_threshold {
                run.line("invariance: FAIL");
                return Ok(Some(Verification(format!("z-score {z:.3} exceeds {z_threshold}"))));
            }
            run.line("invariance: PASS");
        }
        Cmd::Sweep { base, rank, construction, p_list, cylinder, n } => {
            let base_law = parse_law(&base, rank, None)?;
            let slot = match construction.as_str() {
                "poulsen" => None,
                "normalizer" => Some(RootSlot::Uniform),
                other => return Err(Error::Invalid(format!("unknown construction {other:?}")).into()),
            };
            let ps: Vec<String> = p_list.iter().map(|p| p.to_string()).collect();
            run.header(
                "sweep",
                &[
                    ("base", base_law.describe()),
                    ("construction", construction.clone()),
                    ("p-list", ps.join(",")),
                    ("cylinder", cylinder.to_string()),
                    ("n", n.to_string()),
                ],
            );
            let inner = base_law.clone();
            let sweep = convergence_sweep(
                base_law.as_ref(),
                move |p| -> Box<dyn SubgroupLaw> {
                    match slot {
                        None => Box::new(PoulsenLaw::new(inner.clone(), p)),
                        Some(s) => Box::new(NormalizerLaw::new(inner.clone(), p, s)),
                    }
                },
                &p_list,
                &cylinder,
                n,
                seed,
            )?;
            run.line(format!(
                "base value {:.6} ({})",
                sweep.base_value,
                if sweep.base_exact { "exact" } else { "estimated" }
            ));
            run.table(&sweep_table(&sweep));
            let over = sweep.rows.iter().filter(|r| r.deviation > r.bound).count();
            if over > 0 {
                run.line(format!("bound: FAIL ({over} rows)"));
                return Ok(Some(Verification(format!("{over} rows exceed the bound"))));
            }
            run.line("bound: PASS");
        }
    }
    Ok(None)
}

/// A reduced word of length at most `max_len` drawn from `seed`.
fn random_word(seed: u64, rank: usize, max_len: u64) -> Word {
    let idx = VertexId::Index(0);
    let len = SeededKey::new(seed, "length", &idx).below(max_len + 1);
    let mut w = Word::identity();
    let mut k = 0;
    while (w.len() as u64) < len {
        let at = VertexId::Index(k);
        let code = SeededKey::new(seed, "letter", &at).below(2 * rank as u64);
        w.push(Letter::from_code(code as usize));
        k += 1;
    }
    w
}

fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_budget() => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.global.threads {
        if k == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(1);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
            .expect("thread pool set once");
    }
    let mut run = Run {
        global: cli.global,
        out: String::new(),
    };
    let result = execute(&mut run, cli.cmd);
    print!("{}", run.out);
    match result {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(Verification(msg))) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
