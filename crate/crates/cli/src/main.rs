//! `pathdef`: command-line front end for reduction systems and their
//! deformations.
//!
//! Exit codes: 0 pass, 1 fail, 2 usage or parse error, 3 budget exceeded,
//! inconclusive or not well defined.

mod problem;
mod report;

use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use pathdef::cohomology::hh2;
use pathdef::quantization::{
    cochain_polys, commutator_system, enumerate_graphs, brute_force_graph_count, graphical_operator, quantize_check,
    schouten_jacobi_check, CommPoly, PoissonBivector, DEFAULT_GRAPH_CAP,
};
use pathdef::quiver::PathDisplay;
use pathdef::reduction::OverlapStatus;
use pathdef::star::{gauge_check, mc_check, McReport};
use pathdef::variety::{mc_equations, mc_equations_for, DegreeCondition};
use pathdef::{
    complete, DeformationCochain, Error, GaugeOnArrows, Result, StarProduct, Var, Verdict, DEFAULT_BUDGET,
};

use problem::{GaugeFile, Problem, Trunc};
use report::Report;

#[derive(Parser, Debug)]
#[command(name = "pathdef", version, about = "Reduction systems and deformations of path algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Truncation order in the formal parameter, or `none`.
    #[arg(long, global = true)]
    trunc: Option<Trunc>,
    /// Reduction step budget.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Normal form of an element.
    Reduce {
        file: String,
        element: String,
        /// Reduce with the deformed rules `s -> φ_s + φ̃_s`.
        #[arg(long)]
        deformed: bool,
    },
    /// Diamond condition on every overlap.
    Diamond { file: String },
    /// Left ambiguities `S_n` (n ≥ 2; `S_2` is the set of left sides).
    Ambiguities {
        file: String,
        #[arg(default_value_t = 3)]
        n: usize,
    },
    /// Irreducible paths.
    Irr {
        file: String,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Star product of two elements.
    Star { file: String, a: String, b: String },
    /// Maurer–Cartan test of the `deform` block.
    Mc { file: String },
    /// Checks that the map in a transformation file is a gauge equivalence.
    Gauge { file: String, psi: String },
    /// Second Hochschild cohomology.
    Hh2 {
        file: String,
        /// Path length cap for infinite-dimensional algebras.
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Maurer–Cartan equations.
    Variety {
        file: String,
        /// `strict` or `order`; ignored when the file has a `deform` block.
        #[arg(long)]
        cond: Option<String>,
    },
    /// Completes a set of relations to a confluent system.
    Complete {
        file: String,
        relations: String,
        #[arg(long, default_value_t = 16)]
        rounds: usize,
    },
    /// Polynomial algebras and Poisson structures.
    Quantize {
        #[command(subcommand)]
        command: Quantize,
    },
}

#[derive(Subcommand, Debug)]
enum Quantize {
    /// Jacobi identity of the first-order part of the `deform` block.
    Jacobi { file: String },
    /// Associativity of the star product on every `x_k x_j x_i`.
    Check { file: String },
    /// Number of admissible graphs with `k` internal vertices.
    Graphs {
        k: usize,
        #[arg(long, default_value_t = DEFAULT_GRAPH_CAP)]
        cap: usize,
        /// Also count by brute force.
        #[arg(long)]
        brute: bool,
    },
    /// Graph expansion against reduction on monomial pairs.
    Compare {
        file: String,
        #[arg(long, default_value_t = 2)]
        max_degree: u32,
        #[arg(long, default_value_t = DEFAULT_GRAPH_CAP)]
        cap: usize,
    },
}

fn read_source(path: &str) -> Result<String> {
    let mut s = String::new();
    if path == "-" {
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::usage(format!("stdin: {e}")))?;
    } else {
        s = std::fs::read_to_string(path).map_err(|e| Error::usage(format!("{path}: {e}")))?;
    }
    Ok(s)
}

fn load(path: &str) -> Result<Problem> {
    let src = read_source(path)?;
    Problem::parse(&src).map_err(|e| match e {
        Error::Usage(m) => Error::usage(format!("{path}: {m}")),
        other => other,
    })
}

struct Ctx {
    trunc: Option<Trunc>,
    budget: Option<u64>,
}

impl Ctx {
    fn budget(&self, p: &Problem) -> u64 {
        self.budget.or(p.budget).unwrap_or(DEFAULT_BUDGET)
    }
}

fn element(p: &Problem, src: &str) -> Result<pathdef::Element> {
    pathdef::text::parse_element(&p.quiver, src, &p.symbols)
}

fn mc_report(name: &str, p: &Problem, report: McReport) -> Report {
    let q = &p.quiver;
    let mut out = Report::new(name);
    for e in &report.entries {
        let key = e.ambiguity.display(q).to_string();
        let value = match &e.outcome {
            Ok((l, r)) if l == r => "ok".to_string(),
            Ok((l, r)) => format!("defect {}", l - r),
            Err(err) => err.to_string(),
        };
        out.push(key, value);
    }
    out.with_verdict(report.verdict)
}

fn run(cli: Cli) -> Result<Report> {
    let ctx = Ctx { trunc: cli.trunc, budget: cli.budget };
    match cli.command {
        Command::Reduce { file, element: src, deformed } => {
            let p = load(&file)?;
            let a = element(&p, &src)?;
            let budget = ctx.budget(&p);
            let nf = if deformed {
                let n = p.truncation(ctx.trunc);
                let phi = p.cochain(n)?;
                StarProduct::new(&p.system, &phi, budget).normal_form(&a.truncate(n))?
            } else {
                p.system.reduce_full(&a, budget)?
            };
            let mut r = Report::new("reduce");
            r.line(nf.to_string());
            Ok(r)
        }
        Command::Diamond { file } => {
            let p = load(&file)?;
            let report = p.system.check_diamond(ctx.budget(&p));
            let mut r = Report::new("diamond");
            for (amb, status) in &report.entries {
                let value = match status {
                    OverlapStatus::Resolved => "resolved".to_string(),
                    OverlapStatus::Failed { left, right } => format!("failed {left} | {right}"),
                    OverlapStatus::BudgetExceeded => "budget exceeded".to_string(),
                };
                r.push(amb.display(&p.quiver).to_string(), value);
            }
            Ok(r.with_verdict(report.verdict))
        }
        Command::Ambiguities { file, n } => {
            if n < 2 {
                return Err(Error::usage("ambiguity index must be at least 2"));
            }
            let p = load(&file)?;
            let ambs = p.system.ambiguities(n - 2);
            let mut r = Report::new("ambiguities");
            for a in &ambs {
                r.line(a.display(&p.quiver).to_string());
            }
            r.push("count", ambs.len().to_string());
            Ok(r)
        }
        Command::Irr { file, max_len } => {
            let p = load(&file)?;
            let paths = p.system.irreducible_paths(max_len)?;
            let mut r = Report::new("irr");
            for path in &paths {
                r.line(PathDisplay(&p.quiver, path).to_string());
            }
            r.push("count", paths.len().to_string());
            Ok(r)
        }
        Command::Star { file, a, b } => {
            let p = load(&file)?;
            let n = p.truncation(ctx.trunc);
            let phi = p.cochain(n)?;
            let (a, b) = (element(&p, &a)?, element(&p, &b)?);
            let prod = StarProduct::new(&p.system, &phi, ctx.budget(&p)).star(&a, &b)?;
            let mut r = Report::new("star");
            r.line(prod.to_string());
            Ok(r)
        }
        Command::Mc { file } => {
            let p = load(&file)?;
            let phi = p.cochain(p.truncation(ctx.trunc))?;
            Ok(mc_report("mc", &p, mc_check(&p.system, &phi, ctx.budget(&p))))
        }
        Command::Gauge { file, psi } => {
            let mut p = load(&file)?;
            let src = read_source(&psi)?;
            let g = GaugeFile::parse(&src, &mut p).map_err(|e| match e {
                Error::Usage(m) => Error::usage(format!("{psi}: {m}")),
                other => other,
            })?;
            let n = p.truncation(ctx.trunc);
            let phi = p.cochain(n)?;
            let source = DeformationCochain::new(&p.system, g.source, n)?;
            let map = GaugeOnArrows::new(&p.system, g.psi)?;
            let report = gauge_check(&map, &p.system, &phi, &source, ctx.budget(&p));
            let mut r = Report::new("gauge");
            for e in &report.entries {
                let value = match &e.outcome {
                    Ok((l, rr)) if l == rr => "ok".to_string(),
                    Ok((l, rr)) => format!("defect {}", l - rr),
                    Err(err) => err.to_string(),
                };
                r.push(PathDisplay(&p.quiver, &e.lhs_path).to_string(), value);
            }
            Ok(r.with_verdict(report.verdict))
        }
        Command::Hh2 { file, cap } => {
            let p = load(&file)?;
            let h = hh2(&p.system, cap, ctx.budget(&p))?;
            let mut r = Report::new("hh2");
            r.push("cochains", h.cocycles.basis.len().to_string());
            r.push("cocycles", h.cocycles.kernel.len().to_string());
            r.push("coboundaries", h.coboundaries.rank.to_string());
            r.push("dim", h.dim.to_string());
            for (i, rep) in h.representatives.iter().enumerate() {
                let values = h.cocycles.basis.values(&p.quiver, rep);
                let text: Vec<String> =
                    values.iter().map(|(s, v)| format!("{} -> {v}", PathDisplay(&p.quiver, s))).collect();
                r.push(format!("class {}", i + 1), text.join(", "));
            }
            Ok(r)
        }
        Command::Variety { file, cond } => {
            let p = load(&file)?;
            let budget = ctx.budget(&p);
            let mut r = Report::new("variety");
            let eqs = if p.deform.is_empty() {
                let cond: DegreeCondition =
                    cond.or(p.cond.clone()).as_deref().unwrap_or("strict").parse()?;
                let (generic, eqs) = mc_equations(&p.system, cond, &p.order, budget)?;
                for ((s, u), v) in &generic.entries {
                    r.push(
                        format!("unknown {}", v.name()),
                        format!("{} -> {}", PathDisplay(&p.quiver, s), PathDisplay(&p.quiver, u)),
                    );
                }
                eqs
            } else {
                mc_equations_for(&p.system, p.deform.clone(), budget)?
            };
            for e in &eqs.equations {
                r.line(format!("{e} = 0"));
            }
            Ok(r)
        }
        Command::Complete { file, relations, rounds } => {
            let mut p = load(&file)?;
            let src = read_source(&relations)?;
            let gens = problem::parse_relations(&src, &mut p).map_err(|e| match e {
                Error::Usage(m) => Error::usage(format!("{relations}: {m}")),
                other => other,
            })?;
            let sys = complete(&p.quiver, &gens, &p.order, rounds, ctx.budget(&p))?;
            let mut r = Report::new("complete");
            for rule in sys.rules() {
                r.line(format!("rule {} -> {}", PathDisplay(&p.quiver, &rule.lhs), rule.rhs));
            }
            Ok(r)
        }
        Command::Quantize { command } => quantize(command, &ctx),
    }
}

/// The single declared parameter, playing the role of `ħ`.
fn hbar(p: &Problem) -> Result<Var> {
    let params: Vec<&Var> = p.symbols.params().collect();
    match params.as_slice() {
        [h] => Ok((*h).clone()),
        _ => Err(Error::usage("declare exactly one `param` as the formal parameter")),
    }
}

/// Requires the rules to be `x_j*x_i -> x_i*x_j` for `j > i` in declaration order.
fn require_commutator(p: &Problem) -> Result<()> {
    let names: Vec<&str> = p.quiver.arrows().iter().map(|a| a.name.as_str()).collect();
    let expected = commutator_system(&names)?;
    let same = p.quiver.num_vertices() == 1
        && expected.rules().len() == p.system.rules().len()
        && expected.rules().iter().all(|e| {
            p.system.rule_for(&e.lhs).is_some_and(|r| r.rhs.to_string() == e.rhs.to_string())
        });
    if same {
        Ok(())
    } else {
        Err(Error::usage("quantize needs the commutator rules `x_j*x_i -> x_i*x_j` on one vertex"))
    }
}

fn monomials(d: usize, max_degree: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|m: Vec<u32>| {
                let used: u32 = m.iter().sum();
                (0..=max_degree - used).map(move |e| {
                    let mut m = m.clone();
                    m.push(e);
                    m
                })
            })
            .collect();
    }
    out
}

fn quantize(command: Quantize, ctx: &Ctx) -> Result<Report> {
    match command {
        Quantize::Graphs { k, cap, brute } => {
            let n = enumerate_graphs(k, cap)?.len();
            let mut r = Report::new("quantize graphs");
            r.line(n.to_string());
            if brute {
                r.push("brute force", brute_force_graph_count(k).to_string());
            }
            Ok(r)
        }
        Quantize::Jacobi { file } => {
            let p = load(&file)?;
            require_commutator(&p)?;
            let h = hbar(&p)?;
            let d = p.quiver.num_arrows();
            let mut entries = Vec::new();
            for (s, v) in &p.deform {
                let w = s.arrows();
                let eta = CommPoly::from_element(v).map_coeffs(|c| c.coeff_of_power(&h, 1));
                entries.push(((w[0] as usize, w[1] as usize), eta));
            }
            let eta = PoissonBivector::new(d, entries)?;
            let report = schouten_jacobi_check(&eta);
            let names: Vec<String> = p.quiver.arrows().iter().map(|a| a.name.clone()).collect();
            let mut r = Report::new("quantize jacobi");
            for ((a, b, c), poly) in &report.defect {
                r.push(format!("{} {} {}", names[*a], names[*b], names[*c]), poly.display(&names).to_string());
            }
            Ok(r.with_verdict(report.verdict))
        }
        Quantize::Check { file } => {
            let p = load(&file)?;
            require_commutator(&p)?;
            let phi = p.cochain(p.truncation(ctx.trunc))?;
            Ok(mc_report("quantize check", &p, quantize_check(&p.system, &phi, ctx.budget(&p))))
        }
        Quantize::Compare { file, max_degree, cap } => {
            let p = load(&file)?;
            require_commutator(&p)?;
            let Some(n) = p.truncation(ctx.trunc) else {
                return Err(Error::usage("compare needs a finite truncation order"));
            };
            let phi = p.cochain(Some(n))?;
            let polys = cochain_polys(&p.system, &phi)?;
            let d = p.quiver.num_arrows();
            let op = graphical_operator(&polys, d, n, cap)?;
            let engine = StarProduct::new(&p.system, &phi, ctx.budget(&p));
            let names: Vec<String> = p.quiver.arrows().iter().map(|a| a.name.clone()).collect();
            let one = pathdef::PolyScalar::one();
            let monos = monomials(d, max_degree);
            let mut r = Report::new("quantize compare");
            let mut pairs = 0;
            let mut bad = 0;
            for a in &monos {
                for b in &monos {
                    let (f, g) = (CommPoly::monomial(d, a, one.clone()), CommPoly::monomial(d, b, one.clone()));
                    let graph = op.apply(&f, &g, Some(n));
                    let red = CommPoly::from_element(&engine.star(&f.to_element(&p.quiver)?, &g.to_element(&p.quiver)?)?);
                    pairs += 1;
                    if graph != red {
                        bad += 1;
                        r.push(
                            format!("{} * {}", f.display(&names), g.display(&names)),
                            format!("graphs {} | reduction {}", graph.display(&names), red.display(&names)),
                        );
                    }
                }
            }
            r.push("pairs", pairs.to_string());
            r.push("mismatches", bad.to_string());
            Ok(r.with_verdict(if bad == 0 { Verdict::Pass } else { Verdict::Fail }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let format = cli.format;
    match run(cli) {
        Ok(report) => {
            match format {
                Format::Text => print!("{}", report.text()),
                Format::Json => print!("{}", report.json()),
            }
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::Usage(_) => 2,
                _ => 3,
            })
        }
    }
}
