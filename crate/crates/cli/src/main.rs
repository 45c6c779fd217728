//! `focsp`: command-line front end for the fo-csp library.

mod report;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fo_csp::construct::{
    decode_power, exponential, link_product, one_tolerant_power, power, pp_define, product, quotient, set_structure,
    subset_members, Partition,
};
use fo_csp::decide::{
    consistency_check, core_of, failure_tree, fo_check_general, fo_core_check, is_biredundant, square_dismantles_to_diagonal,
    tree_duality_hom, FoCoreVerdict,
};
use fo_csp::dismantle::{dismantle_second_coordinate, dismantle_to_stable, DismantlingTrace};
use fo_csp::generate::{
    directed_path, link_structure, parse_dimacs, random_cnf3, random_structure, sat_reduction, transitive_tournament,
};
use fo_csp::construct::Relation;
use fo_csp::solve::{brute_force_hom, count_homs, SolveOutcome, Solver};
use fo_csp::{parse_structure, Error, Limits, Signature, Structure};

use report::{Failure, Format, Report};

type Result<T> = std::result::Result<T, Failure>;

#[derive(Parser)]
#[command(name = "focsp", version, about = "Homomorphisms, dismantling and first-order definable CSPs")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Opts {
    /// Largest universe any construction may build.
    #[arg(long, global = true, value_name = "ELEMENTS")]
    cap: Option<usize>,
    /// Node budget for backtracking searches.
    #[arg(long, global = true, value_name = "NODES")]
    budget: Option<u64>,
    /// Size bound for core computation and the general FO check.
    #[arg(long, global = true, value_name = "N")]
    max_size: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Print dismantling steps.
    #[arg(long, global = true)]
    trace: bool,
    /// Add element decoders as comments to constructed structures.
    #[arg(long, global = true)]
    annotate: bool,
    /// Print a failure tree when the consistency check fails.
    #[arg(long, global = true)]
    witness: bool,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Is the structure a core whose CSP is first-order definable?
    CheckCoreFo { structure: PathBuf },
    /// Is the CSP of the structure first-order definable?
    CheckFo { structure: PathBuf },
    /// Does the structure have tree duality?
    TreeDuality { structure: PathBuf },
    /// Run the hyperedge consistency check of an instance against a template.
    Consistency { instance: PathBuf, template: PathBuf },
    /// Find a homomorphism by dismantling the product with the template.
    Solve { instance: PathBuf, template: PathBuf },
    /// Find a homomorphism by backtracking.
    Hom {
        instance: PathBuf,
        template: PathBuf,
        #[arg(long)]
        no_prune: bool,
    },
    /// Count homomorphisms.
    Count { instance: PathBuf, template: PathBuf },
    /// Compute a core.
    Core { structure: PathBuf },
    /// Greedily dismantle a structure.
    Dismantle {
        structure: PathBuf,
        /// Elements that must not be removed.
        #[arg(long, value_name = "ELEMENTS")]
        frozen: Option<String>,
        /// Dismantle STRUCTURE × TEMPLATE within the fibers of its first coordinate.
        #[arg(long, value_name = "TEMPLATE", conflicts_with = "frozen")]
        template: Option<PathBuf>,
    },
    /// Build a derived structure.
    #[command(subcommand)]
    Construct(Construct),
    /// Generate a structure.
    #[command(subcommand)]
    Gen(Gen),
    /// Does some relation force two coordinates equal on at least two values?
    Biredundant {
        structure: PathBuf,
        /// Only check this symbol.
        #[arg(long)]
        symbol: Option<String>,
    },
}

#[derive(Subcommand)]
enum Construct {
    Product { left: PathBuf, right: PathBuf },
    Power { structure: PathBuf, n: usize },
    /// Quotient by a partition such as "0 1 | 2 3".
    Quotient { structure: PathBuf, partition: String },
    /// One-tolerant power.
    Tolerant { structure: PathBuf, n: usize },
    /// Exponential BASE^EXPONENT.
    Exp { base: PathBuf, exponent: PathBuf },
    /// Structure of non-empty subsets.
    Setstruct { structure: PathBuf },
    /// Link product of length N.
    Linkprod { structure: PathBuf, n: usize },
    /// Relation defined by a structure with marked elements.
    Ppdef {
        definer: PathBuf,
        marked: String,
        template: PathBuf,
    },
}

#[derive(Subcommand)]
enum Gen {
    /// Transitive tournament.
    Tn { n: usize },
    /// Directed path with K arcs.
    Path { k: usize },
    /// Link over a signature such as "E/2 R/3".
    Link { signature: String, n: usize },
    /// Digraph from a 3-CNF; random when no file is given.
    Sat {
        dimacs: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        vars: usize,
        #[arg(long, default_value_t = 3)]
        clauses: usize,
    },
    /// Random structure with one density per symbol.
    Random {
        signature: String,
        size: usize,
        #[arg(num_args = 1.., required = true)]
        density: Vec<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let limits = limits(&cli.opts);
    let format = match cli.opts.format {
        OutputFormat::Text => Format::Text,
        OutputFormat::Structured => Format::Structured,
    };
    let report = run(&cli.command, &cli.opts, &limits).unwrap_or_else(|e| Report::error(&e));
    if report.verdict == Some("error") && format == Format::Text {
        eprintln!("error: {}", report.detail.join("; "));
    } else {
        print!("{}", report.render(format, cli.opts.trace));
    }
    ExitCode::from(report.exit as u8)
}

fn limits(opts: &Opts) -> Limits {
    let mut limits = Limits::default();
    if let Some(cap) = opts.cap {
        limits.universe_cap = cap;
    }
    if let Some(budget) = opts.budget {
        limits.node_budget = budget;
    }
    if let Some(max) = opts.max_size {
        limits.max_size = max;
        limits.link_max_size = limits.link_max_size.max(max);
    }
    limits
}

fn read_text(path: &Path) -> Result<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("stdin: {e}")))?;
        return Ok(text);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Structure> {
    parse_structure(&read_text(path)?).map_err(|e| match e {
        Error::Parse { line, message } => usage(format!("{}:{line}: {message}", path.display())),
        other => other.into(),
    })
}

/// Elements given by label or index, separated by spaces or commas.
fn elements(s: &Structure, text: &str) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|tok| {
            if let Some(i) = s.labels().and_then(|l| l.iter().position(|x| x == tok)) {
                return Ok(i);
            }
            match tok.parse::<usize>() {
                Ok(i) if i < s.size() => Ok(i),
                _ => Err(usage(format!("unknown element {tok:?}"))),
            }
        })
        .collect()
}

fn trace_lines(trace: &DismantlingTrace, s: &Structure) -> Vec<String> {
    trace.to_lines(|x| s.label(x)).lines().map(str::to_owned).collect()
}

fn run(command: &Command, opts: &Opts, limits: &Limits) -> Result<Report> {
    match command {
        Command::CheckCoreFo { structure } => {
            let a = load(structure)?;
            let mut report = match fo_core_check(&a, limits)? {
                FoCoreVerdict::CoreWithFoCsp => Report::verdict("yes", true),
                FoCoreVerdict::SquareNotDismantlable => {
                    Report::verdict("no", false).with_detail("square-not-dismantlable")
                }
                FoCoreVerdict::NotCore { a: x, b: y, witness } => Report::verdict("not-core", false)
                    .with_detail(format!("identify {} {}", a.label(x), a.label(y)))
                    .with_mapping(&witness, &a, &a),
            };
            if opts.trace {
                if let Some(t) = square_dismantles_to_diagonal(&a, limits)? {
                    report.trace = trace_lines(&t, &power(&a, 2, limits)?);
                }
            }
            Ok(report)
        }
        Command::CheckFo { structure } => {
            let a = load(structure)?;
            let core = core_of(&a, limits)?;
            let fo = fo_check_general(&a, limits)?;
            let report = if fo { Report::verdict("yes", true) } else { Report::verdict("no", false) };
            Ok(report
                .with_detail(format!("core size {}", core.structure.size()))
                .with_mapping(&core.retraction.then(&core.embedding)?, &a, &a))
        }
        Command::TreeDuality { structure } => {
            let a = load(structure)?;
            match tree_duality_hom(&a, limits)? {
                Some(h) => {
                    let u = set_structure(&a, limits)?;
                    let mut report = Report::verdict("yes", true).with_detail("homomorphism U(A) -> A");
                    report.mapping = (0..u.size()).map(|x| (subset_label(&a, x), a.label(h.apply(x)))).collect();
                    Ok(report)
                }
                None => {
                    let u = set_structure(&a, limits)?;
                    let loops = u.loops();
                    let detail = if !loops.is_empty() && a.loops().is_empty() {
                        format!("U(A) has a loop at {} and A has none", subset_label(&a, loops[0]))
                    } else {
                        "no homomorphism U(A) -> A".to_owned()
                    };
                    Ok(Report::verdict("no", false).with_detail(detail))
                }
            }
        }
        Command::Consistency { instance, template } => {
            let (b, a) = (load(instance)?, load(template)?);
            let table = consistency_check(&b, &a)?;
            let mut report = if table.is_stable() {
                Report::verdict("yes", true)
            } else {
                Report::verdict("no", false)
            };
            for x in 0..b.size() {
                let list: Vec<String> = table.list(x).into_iter().map(|y| a.label(y)).collect();
                report = report.with_detail(format!("{}: {{{}}}", b.label(x), list.join(", ")));
            }
            if opts.witness {
                if let Some((tree, into_b)) = failure_tree(&b, &a, limits.universe_cap.min(10_000))? {
                    report = report.with_detail("failure tree:".to_owned()).with_detail(tree.to_string());
                    report.mapping = (0..tree.size()).map(|x| (x.to_string(), b.label(into_b.apply(x)))).collect();
                }
            }
            Ok(report)
        }
        Command::Solve { instance, template } => {
            let (b, a) = (load(instance)?, load(template)?);
            let (outcome, fd) = Solver::new(&a, limits)?.solve_traced(&b)?;
            let mut report = match &outcome {
                SolveOutcome::Hom(f) => Report::verdict("yes", true).with_mapping(f, &b, &a),
                other => Report::verdict("no", false).with_detail(other.tag()),
            };
            let m = a.size();
            report.trace = fd
                .trace
                .to_lines(|p| format!("({},{})", b.label(p / m), a.label(p % m)))
                .lines()
                .map(str::to_owned)
                .collect();
            Ok(report)
        }
        Command::Hom {
            instance,
            template,
            no_prune,
        } => {
            let (b, a) = (load(instance)?, load(template)?);
            Ok(match brute_force_hom(&b, &a, !no_prune, limits)? {
                Some(f) => Report::verdict("yes", true).with_mapping(&f, &b, &a),
                None => Report::verdict("no", false),
            })
        }
        Command::Count { instance, template } => {
            let (b, a) = (load(instance)?, load(template)?);
            let n = count_homs(&b, &a, limits)?;
            let mut report = Report::verdict("ok", true);
            report.verdict = None;
            Ok(report.with_detail(n.to_string()))
        }
        Command::Core { structure } => {
            let a = load(structure)?;
            let core = core_of(&a, limits)?;
            let labels: Vec<String> = core.embedding.values().iter().map(|&x| a.label(x)).collect();
            let text = core.structure.clone().with_labels(labels)?.to_string();
            let mut report = Report::body(text);
            report.mapping = (0..a.size())
                .map(|x| (a.label(x), a.label(core.embedding.apply(core.retraction.apply(x)))))
                .collect();
            if opts.format == OutputFormat::Text && !opts.annotate {
                report.mapping.clear();
            }
            if opts.annotate {
                let lines: Vec<String> = report.mapping.iter().map(|(x, y)| format!("# {x} -> {y}")).collect();
                report.mapping.clear();
                report = report.with_detail(lines.join("\n"));
            }
            Ok(report)
        }
        Command::Dismantle {
            structure,
            frozen,
            template,
        } => {
            let s = load(structure)?;
            let mut report = Report::verdict("ok", true);
            report.verdict = None;
            match template {
                Some(path) => {
                    let a = load(path)?;
                    let fd = dismantle_second_coordinate(&s, &a)?;
                    for (x, fiber) in fd.fibers().iter().enumerate() {
                        let f: Vec<String> = fiber.iter().map(|&y| a.label(y)).collect();
                        report = report.with_detail(format!("{}: {{{}}}", s.label(x), f.join(", ")));
                    }
                    let m = a.size();
                    report.trace = fd
                        .trace
                        .to_lines(|p| format!("({},{})", s.label(p / m), a.label(p % m)))
                        .lines()
                        .map(str::to_owned)
                        .collect();
                }
                None => {
                    let frozen = match frozen {
                        Some(list) => elements(&s, list)?,
                        None => Vec::new(),
                    };
                    let trace = dismantle_to_stable(&s, &frozen);
                    let kept: Vec<String> = trace.kept.iter().map(|&x| s.label(x)).collect();
                    report = report.with_detail(format!("kept {}", kept.join(" ")));
                    report.trace = trace_lines(&trace, &s);
                }
            }
            Ok(report)
        }
        Command::Construct(c) => construct(c, opts, limits),
        Command::Gen(g) => generate(g, opts),
        Command::Biredundant { structure, symbol } => {
            let s = load(structure)?;
            let symbols: Vec<usize> = match symbol {
                Some(name) => vec![s
                    .signature()
                    .index_of(name)
                    .ok_or_else(|| usage(format!("unknown symbol {name}")))?],
                None => (0..s.signature().len()).collect(),
            };
            let mut any = false;
            let mut lines = Vec::new();
            for sym in symbols {
                let rel = Relation::new(s.size(), s.relation(sym).clone())?;
                let b = is_biredundant(&rel)?;
                any |= b;
                lines.push(format!("{}: {}", s.signature().symbols()[sym].name, if b { "biredundant" } else { "irredundant" }));
            }
            let mut report = if any { Report::verdict("yes", true) } else { Report::verdict("no", false) };
            report.detail = lines;
            Ok(report)
        }
    }
}

fn subset_label(a: &Structure, x: usize) -> String {
    let members: Vec<String> = subset_members(x).into_iter().map(|y| a.label(y)).collect();
    format!("{{{}}}", members.join(","))
}

fn annotated(s: &Structure, decoder: Option<&dyn Fn(usize) -> String>) -> Report {
    let mut text = String::new();
    if let Some(decode) = decoder {
        for x in 0..s.size() {
            text.push_str(&format!("# {x} = {}\n", decode(x)));
        }
    }
    text.push_str(&s.to_string());
    Report::body(text)
}

fn tuple(parts: impl IntoIterator<Item = String>) -> String {
    format!("({})", parts.into_iter().collect::<Vec<_>>().join(", "))
}

fn construct(c: &Construct, opts: &Opts, limits: &Limits) -> Result<Report> {
    let ann = opts.annotate;
    Ok(match c {
        Construct::Product { left, right } => {
            let (a, b) = (load(left)?, load(right)?);
            let p = product(&a, &b)?;
            let m = b.size();
            annotated(&p, ann.then_some(&|x: usize| tuple([a.label(x / m), b.label(x % m)]) as _))
        }
        Construct::Power { structure, n } => {
            let a = load(structure)?;
            let p = power(&a, *n, limits)?;
            annotated(&p, ann.then_some(&|x: usize| power_label(&a, x, *n) as _))
        }
        Construct::Quotient { structure, partition } => {
            let a = load(structure)?;
            let labels = partition
                .split('|')
                .map(|part| elements(&a, part).map(|xs| xs.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")))
                .collect::<Result<Vec<_>>>()?
                .join(" | ");
            let p = Partition::parse(a.size(), &labels)?;
            let q = quotient(&a, &p)?;
            annotated(&q, ann.then_some(&|k: usize| {
                let members: Vec<String> = p.members(k).into_iter().map(|x| a.label(x)).collect();
                format!("{{{}}}", members.join(", "))
            } as _))
        }
        Construct::Tolerant { structure, n } => {
            let a = load(structure)?;
            let t = one_tolerant_power(&a, *n, limits)?;
            annotated(&t, ann.then_some(&|x: usize| power_label(&a, x, *n) as _))
        }
        Construct::Exp { base, exponent } => {
            let (b, a) = (load(base)?, load(exponent)?);
            let e = exponential(&b, &a, limits)?;
            annotated(&e.structure, ann.then_some(&|x: usize| {
                let f = e.decode(x);
                let parts: Vec<String> = (0..a.size()).map(|y| format!("{}->{}", a.label(y), b.label(f.apply(y)))).collect();
                format!("[{}]", parts.join(" "))
            } as _))
        }
        Construct::Setstruct { structure } => {
            let a = load(structure)?;
            let u = set_structure(&a, limits)?;
            annotated(&u, ann.then_some(&|x: usize| subset_label(&a, x) as _))
        }
        Construct::Linkprod { structure, n } => {
            let a = load(structure)?;
            let lp = link_product(&a, *n, limits)?;
            annotated(&lp.structure, ann.then_some(&|c: usize| {
                let (k, x, y) = lp.representative(c);
                let x = if k == *n { "*".to_owned() } else { a.label(x) };
                let y = if k == 0 { "*".to_owned() } else { a.label(y) };
                tuple([k.to_string(), x, y])
            } as _))
        }
        Construct::Ppdef {
            definer,
            marked,
            template,
        } => {
            let (x, a) = (load(definer)?, load(template)?);
            let marked = elements(&x, marked)?;
            let rel = pp_define(&x, &marked, &a, limits)?;
            let mut s = rel.to_structure("R")?;
            if let Some(l) = a.labels() {
                s = s.with_labels(l.to_vec())?;
            }
            Report::body(s.to_string())
        }
    })
}

fn power_label(a: &Structure, x: usize, n: usize) -> String {
    tuple(decode_power(x, a.size(), n).into_iter().map(|y| a.label(y)))
}

fn generate(g: &Gen, opts: &Opts) -> Result<Report> {
    let s = match g {
        Gen::Tn { n } => {
            if *n == 0 {
                return Err(usage("tournament needs at least one vertex"));
            }
            transitive_tournament(*n)
        }
        Gen::Path { k } => {
            if *k == 0 {
                return Err(usage("path needs at least one arc"));
            }
            directed_path(*k)
        }
        Gen::Link { signature, n } => link_structure(&Signature::parse_decl(signature)?, *n),
        Gen::Sat { dimacs, vars, clauses } => {
            let (formula, random) = match dimacs {
                Some(path) => (parse_dimacs(&read_text(path)?)?, false),
                None => {
                    if *vars < 2 || *clauses == 0 {
                        return Err(usage("random formulas need at least 2 variables and 1 clause"));
                    }
                    (random_cnf3(*vars, *clauses, opts.seed), true)
                }
            };
            let h = sat_reduction(&formula);
            let mut text = String::new();
            if random || opts.annotate {
                for line in formula.to_dimacs().lines() {
                    text.push_str(&format!("# {line}\n"));
                }
            }
            if opts.annotate {
                for v in 0..h.size() {
                    text.push_str(&format!("# {v} = clause {} literal {}\n", v / 3 + 1, formula.clauses()[v / 3][v % 3]));
                }
            }
            text.push_str(&h.to_string());
            return Ok(Report::body(text));
        }
        Gen::Random { signature, size, density } => {
            random_structure(&Signature::parse_decl(signature)?, *size, density, opts.seed)?
        }
    };
    Ok(Report::body(s.to_string()))
}

fn usage(message: impl Into<String>) -> Failure {
    Failure::Usage(message.into())
}
