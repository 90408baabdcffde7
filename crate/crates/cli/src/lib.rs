//! Batch front end: `check`, `normalize`, `semantics`, `higher` and `stdlib`.
//!
//! Exit codes: 0 success, 1 type error or FAIL record, 2 parse or catalog
//! error, 3 I/O error, 4 enumeration bound too large.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::rc::Rc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mltt_core::stdlib::stdlib_source;
use mltt_core::{check_source, CheckedModule, Checker, CheckerConfig, Decl, Mode, Term, DEFAULT_FUEL};
use mltt_higher::{build_theory, compare_free, estimate_cells, omega_ops, parse_globular, small_graphs, FreeConfig, GlobularSet};
use mltt_semantics::sweep::{groupoid_checks, soundness_sweep, SweepConfig, DEFAULT_SEED};
use mltt_semantics::wfs::{functor_catalog, verify_wfs, WFS_GROUPOIDS};
use mltt_semantics::{default_catalog, parse_catalog, FiniteGroupoid, Record, Report};
use thiserror::Error;

pub const EXIT_FAIL: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_IO: u8 = 3;
pub const EXIT_BOUND: u8 = 4;

/// Default limit on the estimated number of terms `higher` may enumerate.
pub const DEFAULT_CELL_LIMIT: u128 = 1_000_000;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Type(String),
    #[error("bound too large: an estimated {} cells exceeds the limit of {limit}", show_estimate(*.estimate))]
    Bound { estimate: u128, limit: u128 },
    #[error("writing output: {0}")]
    Output(#[from] std::io::Error),
}

fn show_estimate(n: u128) -> String {
    if n == u128::MAX {
        format!("more than {n}")
    } else {
        n.to_string()
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Type(_) => EXIT_FAIL,
            CliError::Parse(_) => EXIT_PARSE,
            CliError::Io { .. } | CliError::Output(_) => EXIT_IO,
            CliError::Bound { .. } => EXIT_BOUND,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "mltt", version, about = "Type checker and model explorer for Martin-Löf type theory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct KernelOpts {
    /// Check with the identity-reflection rule.
    #[arg(long)]
    pub extensional: bool,
    /// Reduction steps allowed per judgement.
    #[arg(long, env = "MLTT_FUEL", default_value_t = DEFAULT_FUEL)]
    pub fuel: u64,
}

impl KernelOpts {
    pub fn config(&self) -> Result<CheckerConfig, CliError> {
        let mode = if self.extensional { Mode::Extensional } else { Mode::Intensional };
        CheckerConfig::new(mode, self.fuel).map_err(|e| CliError::Parse(format!("--fuel: {e}")))
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// `PASS|FAIL <check> <id> <target>` lines, sorted.
    #[default]
    Lines,
    /// The same lines followed by details for failures and a summary.
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check `.mltt` files.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[command(flatten)]
        kernel: KernelOpts,
    },
    /// Print the normal form of a definition.
    Normalize {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[command(flatten)]
        kernel: KernelOpts,
    },
    /// Interpret files in finite groupoids and run the model and lifting
    /// checks. Without files, the standard library is used.
    Semantics {
        files: Vec<PathBuf>,
        /// Groupoid catalog; the bundled one by default.
        #[arg(long)]
        catalog: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Skip the lifting-property sweep.
        #[arg(long)]
        no_wfs: bool,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
        #[command(flatten)]
        kernel: KernelOpts,
    },
    /// Compare free groupoids on graphs, or instantiate low-dimensional
    /// operations on a globular set.
    Higher(HigherArgs),
    /// Regenerate the standard library, check it and optionally write it out.
    Stdlib {
        /// Where to write the generated source.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        kernel: KernelOpts,
    },
}

#[derive(Debug, Args)]
pub struct HigherArgs {
    /// Graph file in the globular format, dimension at most 1.
    #[arg(long, conflicts_with_all = ["globular", "all_graphs"])]
    pub graph: Option<PathBuf>,
    /// Every graph up to isomorphism with at most `--max-vertices` vertices
    /// and `--max-edges` edges.
    #[arg(long, conflicts_with = "globular")]
    pub all_graphs: bool,
    #[arg(long, default_value_t = 3)]
    pub max_vertices: usize,
    #[arg(long, default_value_t = 3)]
    pub max_edges: usize,
    /// Globular set whose operations to instantiate.
    #[arg(long)]
    pub globular: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub wordlen: usize,
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    #[arg(long, default_value_t = 2)]
    pub maxdim: usize,
    /// Terms kept per reduced word.
    #[arg(long, default_value_t = 2)]
    pub reps: usize,
    /// Sampled instances per groupoid law.
    #[arg(long, default_value_t = 24)]
    pub laws: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Largest estimated enumeration allowed.
    #[arg(long, default_value_t = DEFAULT_CELL_LIMIT)]
    pub cell_limit: u128,
    #[arg(long, value_enum, default_value_t)]
    pub format: Format,
    #[command(flatten)]
    pub kernel: KernelOpts,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parses and checks a source text; syntax errors are fatal, type errors are
/// left in the module.
fn load(label: &str, text: &str, cfg: CheckerConfig) -> Result<CheckedModule, CliError> {
    check_source(text, cfg).map_err(|diags| {
        let lines: Vec<String> = diags.iter().map(|d| format!("{label}:{d}")).collect();
        CliError::Parse(lines.join("\n"))
    })
}

fn type_errors(label: &str, m: &CheckedModule) -> Option<String> {
    let lines: Vec<String> = m.diagnostics().iter().map(|d| format!("{label}:{d}")).collect();
    (!lines.is_empty()).then(|| lines.join("\n"))
}

fn emit(out: &mut dyn Write, report: &Report, format: Format) -> Result<u8, CliError> {
    for r in report.records() {
        writeln!(out, "{r}")?;
        if format == Format::Text && !r.pass {
            if let Some(d) = &r.detail {
                writeln!(out, "    {d}")?;
            }
        }
    }
    if format == Format::Text {
        writeln!(out, "{} records, {} FAIL", report.len(), report.failures().len())?;
    }
    Ok(if report.all_pass() { 0 } else { EXIT_FAIL })
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Check { files, kernel } => cmd_check(files, kernel.config()?, out),
        Command::Normalize { file, term, kernel } => cmd_normalize(file, term, kernel.config()?, out),
        Command::Semantics {
            files,
            catalog,
            seed,
            no_wfs,
            format,
            kernel,
        } => {
            let cfg = kernel.config()?;
            let catalog = match catalog {
                Some(p) => parse_catalog(&read(p)?).map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?,
                None => default_catalog(),
            };
            let mut modules = Vec::new();
            if files.is_empty() {
                modules.push(("stdlib".to_string(), stdlib_source()));
            }
            for f in files {
                modules.push((f.display().to_string(), read(f)?));
            }
            let sweep = SweepConfig {
                seed: *seed,
                ..SweepConfig::default()
            };
            let report = cmd_semantics(&modules, &catalog, cfg, &sweep, !no_wfs)?;
            emit(out, &report, *format)
        }
        Command::Higher(args) => cmd_higher(args, out),
        Command::Stdlib { out: path, kernel } => cmd_stdlib(path.as_deref(), kernel.config()?, out),
    }
}

pub fn cmd_check(files: &[PathBuf], cfg: CheckerConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    let mut texts = Vec::new();
    for f in files {
        texts.push((f.display().to_string(), read(f)?));
    }
    let mut worst = 0;
    let mut messages = Vec::new();
    for (label, text) in &texts {
        match load(label, text, cfg) {
            Err(e) => {
                worst = worst.max(EXIT_PARSE);
                messages.push(e.to_string());
            }
            Ok(m) => match type_errors(label, &m) {
                Some(e) => {
                    worst = worst.max(EXIT_FAIL);
                    messages.push(e);
                }
                None => writeln!(out, "ok {label}: {} declarations", m.reports.len())?,
            },
        }
    }
    for m in messages {
        eprintln!("{m}");
    }
    Ok(worst)
}

pub fn cmd_normalize(file: &Path, name: &str, cfg: CheckerConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    let label = file.display().to_string();
    let m = load(&label, &read(file)?, cfg)?;
    if let Some(e) = type_errors(&label, &m) {
        return Err(CliError::Type(e));
    }
    let nf = match m.signature.get(name) {
        Some(Decl::Def { body, .. }) => Checker::new(&m.signature, cfg)
            .normalize_term(body)
            .map_err(|e| CliError::Type(format!("{name}: {e}")))?,
        Some(Decl::TermConst { .. }) => Term::constant(name),
        _ => return Err(CliError::Type(format!("unknown term {name}"))),
    };
    writeln!(out, "{nf}")?;
    Ok(0)
}

/// Soundness sweeps of each module, the groupoid checks and, when asked,
/// the lifting sweep over the catalog's small groupoids.
pub fn cmd_semantics(
    modules: &[(String, String)],
    catalog: &[Rc<FiniteGroupoid>],
    cfg: CheckerConfig,
    sweep: &SweepConfig,
    wfs: bool,
) -> Result<Report, CliError> {
    let mut report = Report::new();
    for (label, text) in modules {
        let m = load(label, text, cfg)?;
        if let Some(e) = type_errors(label, &m) {
            return Err(CliError::Type(e));
        }
        report.extend(soundness_sweep(&m, cfg, catalog, sweep));
    }
    report.extend(groupoid_checks(catalog));
    if wfs {
        let small: Vec<_> = catalog.iter().filter(|g| WFS_GROUPOIDS.contains(&g.name())).cloned().collect();
        report.extend(verify_wfs(&functor_catalog(&small)));
    }
    Ok(report)
}

fn load_globular(path: &Path) -> Result<GlobularSet, CliError> {
    parse_globular(&read(path)?).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

pub fn cmd_higher(args: &HigherArgs, out: &mut dyn Write) -> Result<u8, CliError> {
    let cfg = args.kernel.config()?;
    if let Some(p) = &args.globular {
        let g = load_globular(p)?;
        return emit(out, &ops_report(&g, args.maxdim, cfg)?, args.format);
    }
    let graphs: Vec<(String, GlobularSet)> = match (&args.graph, args.all_graphs) {
        (Some(p), _) => {
            let g = load_globular(p)?;
            if !g.is_graph() {
                return Err(CliError::Parse(format!("{}: a graph has cells of dimension at most 1", p.display())));
            }
            let name = p.file_stem().map_or("graph".into(), |s| s.to_string_lossy().into_owned());
            vec![(name, g)]
        }
        (None, true) => small_graphs(args.max_vertices, args.max_edges),
        (None, false) => return Err(CliError::Parse("one of --graph, --all-graphs or --globular is required".into())),
    };
    let free = FreeConfig {
        word_len: args.wordlen,
        depth: args.depth,
        reps: args.reps,
        law_samples: args.laws,
        seed: args.seed,
        checker: cfg,
    };
    let estimate = graphs
        .iter()
        .map(|(_, g)| estimate_cells(g, args.wordlen, args.depth, args.reps))
        .fold(0u128, u128::saturating_add);
    if estimate > args.cell_limit {
        return Err(CliError::Bound {
            estimate,
            limit: args.cell_limit,
        });
    }
    let mut report = Report::new();
    for (name, g) in &graphs {
        let r = compare_free(name, g, &free).map_err(|e| CliError::Type(format!("{name}: {e}")))?;
        report.extend(r.to_report());
    }
    emit(out, &report, args.format)
}

/// One record per operation instance, plus completeness of the table.
pub fn ops_report(g: &GlobularSet, max_dim: usize, cfg: CheckerConfig) -> Result<Report, CliError> {
    let th = build_theory(g, cfg).map_err(|e| CliError::Type(e.to_string()))?;
    let table = omega_ops(&th, g, max_dim, cfg);
    let mut report = Report::new();
    for i in &table.instances {
        let mut r = Record::new(i.op, &i.args.join(","), &format!("dim{}", i.dim), i.result.is_ok());
        if let Err(e) = &i.result {
            r = r.with_detail(e.to_string());
        }
        report.push(r);
    }
    let dims: Vec<usize> = (1..=max_dim.min(2)).filter(|&d| g.count(d) > 0).collect();
    report.push(Record::new("complete", "operations", &format!("dim1-{}", max_dim.min(2)), table.is_complete(&dims)));
    Ok(report)
}

pub fn cmd_stdlib(path: Option<&Path>, cfg: CheckerConfig, out: &mut dyn Write) -> Result<u8, CliError> {
    let text = stdlib_source();
    if let Some(p) = path {
        std::fs::write(p, &text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        })?;
    }
    let m = load("stdlib", &text, cfg)?;
    let mut report = Report::new();
    for r in &m.reports {
        let Some(name) = r.name() else { continue };
        let mut rec = Record::new("derivation", name, "stdlib", r.is_ok());
        if let Err(e) = &r.result {
            rec = rec.with_detail(e.to_string());
        }
        report.push(rec);
    }
    emit(out, &report, Format::Lines)
}
