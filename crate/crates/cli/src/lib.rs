//! Command-line front end. [`run_cli`] does all the work and returns the
//! exit code with the text to print, so the binary is a thin wrapper.
//!
//! Exit codes: 0 for a positive verdict, 1 for a negative one, 2 for usage,
//! parse, file or configuration errors.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ncrw::oracle::solution_keys;
use ncrw::{
    alpha_eq, c_alpha_eq, c_match, check_quantified_fixpoint, check_termination_with, derive_fresh, fresh_constraints,
    naive_match, normalize, parse_atom, parse_atoms, parse_ctx, parse_perm, parse_problem, parse_term, Atom,
    EnumConfig, Error, InstanceConfig, MatchProblem, MatchSolution, NormalizeStatus, ProblemFile, QuantifiedFixpoint,
    Signature, Term,
};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ncrw", version, about = "Nominal rewriting modulo commutativity")]
struct Cli {
    /// Print `key: value` records instead of the report.
    #[arg(long, global = true)]
    porcelain: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that every rule is oriented by the ordering on ground instances.
    Check {
        file: PathBuf,
        /// Atoms used to build instances.
        #[arg(long, default_value = "a")]
        atoms: String,
        /// Maximum depth of the terms substituted for unknowns.
        #[arg(long, default_value_t = 2)]
        depth: usize,
        /// Also substitute terms containing abstractions.
        #[arg(long)]
        abstractions: bool,
    },
    /// Rewrite a term to normal form.
    Rewrite {
        file: PathBuf,
        /// The start term, or `@name` for a term declared in the file.
        #[arg(long)]
        term: String,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
        /// Show every step.
        #[arg(long)]
        trace: bool,
        /// Freshness facts about the unknowns of the term.
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Decide whether two terms are equivalent.
    Equiv {
        file: PathBuf,
        left: String,
        right: String,
        #[arg(long, value_enum, default_value_t = Modulo::Alpha)]
        modulo: Modulo,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Decide whether an atom is fresh for a term.
    Fresh {
        file: PathBuf,
        atom: String,
        term: String,
        #[arg(long, default_value = "")]
        ctx: String,
    },
    /// Decide whether a permutation fixes a ground term.
    Fixpoint {
        file: PathBuf,
        perm: String,
        term: String,
        /// Atoms quantified by `new`.
        #[arg(long, default_value = "")]
        new: String,
    },
    /// Split a permutation into the cycles touching the given atoms and the rest.
    Factorize {
        perm: String,
        #[arg(long, default_value = "")]
        new: String,
    },
    /// Match a pattern against a subject modulo commutativity.
    Match {
        file: PathBuf,
        pattern: String,
        subject: String,
        /// Freshness context the solutions must satisfy.
        #[arg(long, default_value = "")]
        rule_ctx: String,
        /// Cross-check against brute-force enumeration (ground subjects only).
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Modulo {
    /// α-equivalence only.
    #[value(name = "alpha", alias = "a")]
    Alpha,
    /// α-equivalence and commutativity.
    #[value(name = "c")]
    C,
}

/// The result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn error(message: impl std::fmt::Display) -> Self {
        Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: format!("error: {message}\n") }
    }
}

/// Runs one command line. `argv[0]` is the program name.
pub fn run_cli<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: EXIT_ERROR, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_YES, stdout: text, stderr: String::new() }
            };
        }
    };
    let mut report = Report::new(cli.porcelain);
    match execute(cli.command, &mut report) {
        Ok(verdict) => {
            Outcome { code: if verdict { EXIT_YES } else { EXIT_NO }, stdout: report.out, stderr: String::new() }
        }
        Err(e) => Outcome::error(e),
    }
}

/// Collects either human-readable lines or porcelain records.
struct Report {
    porcelain: bool,
    out: String,
}

impl Report {
    fn new(porcelain: bool) -> Self {
        Report { porcelain, out: String::new() }
    }

    fn human(&mut self, line: impl std::fmt::Display) {
        if !self.porcelain {
            let _ = writeln!(self.out, "{line}");
        }
    }

    fn record(&mut self, key: &str, value: impl std::fmt::Display) {
        if self.porcelain {
            let _ = writeln!(self.out, "{key}: {value}");
        }
    }

    /// A line shared by both modes.
    fn both(&mut self, key: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.out, "{key}: {value}");
    }
}

#[derive(Debug)]
enum CliError {
    Io(PathBuf, std::io::Error),
    Core(Error),
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(path, e) => write!(f, "{}: {e}", path.display()),
            CliError::Core(e) => e.fmt(f),
            CliError::Usage(msg) => f.write_str(msg),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

type CliResult<T> = Result<T, CliError>;

fn load(path: &PathBuf) -> CliResult<ProblemFile> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.clone(), e))?;
    parse_problem(&text).map_err(|e| CliError::Usage(format!("{}:{e}", path.display())))
}

/// A term argument: concrete syntax, or `@name` for a declared term.
fn term_arg(file: &ProblemFile, arg: &str) -> CliResult<Term> {
    match arg.strip_prefix('@') {
        Some(name) => {
            file.term(name).cloned().ok_or_else(|| CliError::Usage(format!("no term named `{name}` in the file")))
        }
        None => Ok(parse_term(arg, &file.sig)?),
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn execute(command: Command, r: &mut Report) -> CliResult<bool> {
    match command {
        Command::Check { file, atoms, depth, abstractions } => {
            let file = load(&file)?;
            let sys = file.system()?;
            let cfg = file.crpo_config()?;
            let inst = InstanceConfig {
                atoms: parse_atoms(&atoms)?,
                max_depth: depth,
                include_abstractions: abstractions,
                ..InstanceConfig::default()
            };
            let report = check_termination_with(&sys, &cfg, &inst)?;
            r.human(&report);
            for v in &report.rules {
                r.record(&format!("rule.{}", v.rule), if v.oriented() { "oriented" } else { "not-oriented" });
                r.record(&format!("instances.{}", v.rule), v.instances);
                if let Some(cex) = &v.counterexample {
                    r.record(&format!("counterexample.{}", v.rule), format!("{} -> {}", cex.lhs, cex.rhs));
                }
            }
            r.record("verdict", if report.accepted() { "ACCEPTED" } else { "NOT-ORIENTED" });
            Ok(report.accepted())
        }
        Command::Rewrite { file, term, steps, trace, ctx } => {
            let file = load(&file)?;
            let sys = file.system()?;
            let ctx = parse_ctx(&ctx)?;
            let start = term_arg(&file, &term)?;
            let out = normalize(&sys, &ctx, &start, steps);
            if trace {
                let mut current = start.clone();
                for (i, step) in out.steps.iter().enumerate() {
                    r.human(format!(
                        "{:>4}. {current}  --{} at {}-->  {}",
                        i + 1,
                        step.rule,
                        step.position,
                        step.result
                    ));
                    r.record(&format!("step.{}", i + 1), format!("{} {} {}", step.rule, step.position, step.result));
                    current = step.result.clone();
                }
            }
            r.both("result", &out.term);
            r.both("status", out.status);
            r.both("steps", out.steps.len());
            Ok(out.status == NormalizeStatus::NormalForm)
        }
        Command::Equiv { file, left, right, modulo, ctx } => {
            let file = load(&file)?;
            let ctx = parse_ctx(&ctx)?;
            let t = term_arg(&file, &left)?;
            let u = term_arg(&file, &right)?;
            let eq = match modulo {
                Modulo::Alpha => alpha_eq(&ctx, &t, &u),
                Modulo::C => c_alpha_eq(&ctx, &t, &u, &file.sig),
            };
            let rel = if modulo == Modulo::C { "≈α,C" } else { "≈α" };
            r.human(format!("{t} {} {u}", if eq { rel } else { "not" }));
            r.record("equivalent", yes_no(eq));
            r.record("modulo", if modulo == Modulo::C { "c" } else { "alpha" });
            Ok(eq)
        }
        Command::Fresh { file, atom, term, ctx } => {
            let file = load(&file)?;
            let ctx = parse_ctx(&ctx)?;
            let a = parse_atom(&atom)?;
            let t = term_arg(&file, &term)?;
            let fresh = derive_fresh(&ctx, &a, &t);
            r.human(format!("{a} # {t}: {}", if fresh { "derivable" } else { "not derivable" }));
            r.record("fresh", yes_no(fresh));
            if !fresh {
                match fresh_constraints(&a, &t) {
                    Some(needed) => {
                        r.human(format!("would hold under {needed}"));
                        r.record("needs", needed);
                    }
                    None => r.human("fails under every context"),
                }
            }
            Ok(fresh)
        }
        Command::Fixpoint { file, perm, term, new } => {
            let file = load(&file)?;
            let p = parse_perm(&perm)?;
            let t = term_arg(&file, &term)?;
            let c = QuantifiedFixpoint::new(atoms_arg(&new)?, p, t)?;
            let holds = check_quantified_fixpoint(&c, &file.sig)?;
            r.human(format!("{c}: {}", if holds { "holds" } else { "fails" }));
            r.record("holds", yes_no(holds));
            Ok(holds)
        }
        Command::Factorize { perm, new } => {
            let p = parse_perm(&perm)?;
            let quantified: BTreeSet<Atom> = atoms_arg(&new)?.into_iter().collect();
            let (pc, pnc) = p.factorize(&quantified);
            r.both("pc", pc);
            r.both("pnc", pnc);
            Ok(true)
        }
        Command::Match { file, pattern, subject, rule_ctx, oracle } => {
            let file = load(&file)?;
            let pattern = term_arg(&file, &pattern)?;
            let subject = term_arg(&file, &subject)?;
            if !pattern.vars().is_disjoint(&subject.vars()) {
                return Err(CliError::Usage("pattern and subject must not share unknowns".into()));
            }
            let problem = MatchProblem::new(pattern, subject).with_rule_ctx(parse_ctx(&rule_ctx)?);
            let sols = c_match(&problem, &file.sig);
            r.human(format!("{} solution(s)", sols.len()));
            r.record("solutions", sols.len());
            for (i, sol) in sols.iter().enumerate() {
                r.human(format!("  {}", describe(sol)));
                r.record(&format!("solution.{}", i + 1), describe(sol));
            }
            let mut agree = true;
            if oracle {
                let naive = naive_match(&problem, &file.sig, &oracle_universe(&problem, &file.sig)?);
                agree = solution_keys(&sols, &file.sig) == solution_keys(&naive, &file.sig);
                r.human(format!("oracle: {} solution(s), {}", naive.len(), if agree { "agrees" } else { "DISAGREES" }));
                r.record("oracle", if agree { "agree" } else { "disagree" });
            }
            Ok(agree && !sols.is_empty())
        }
    }
}

fn atoms_arg(s: &str) -> CliResult<Vec<Atom>> {
    if s.trim().is_empty() {
        Ok(Vec::new())
    } else {
        Ok(parse_atoms(s)?)
    }
}

fn describe(sol: &MatchSolution) -> String {
    if sol.obligations.is_empty() {
        sol.subst.to_string()
    } else {
        format!("{} provided {}", sol.subst, sol.obligations)
    }
}

const ORACLE_LIMIT: u128 = 200_000;

/// Every term no deeper than the subject over the atoms of the problem and
/// one spare atom for binders.
fn oracle_universe(p: &MatchProblem, sig: &Signature) -> CliResult<EnumConfig> {
    if !p.subject.is_ground() {
        return Err(CliError::Usage("--oracle needs a ground subject".into()));
    }
    let mut atoms: BTreeSet<Atom> = p.subject.all_atoms();
    atoms.extend(p.pattern.all_atoms());
    atoms.extend(p.rule_ctx.iter().map(|(a, _)| a.clone()));
    atoms.insert(Atom::fresh(&atoms));
    let names: Vec<&str> = atoms.iter().map(Atom::name).collect();
    let cfg = EnumConfig::new(sig.clone(), &names, p.subject.depth(), contains_abs(&p.subject));
    if cfg.count() > ORACLE_LIMIT {
        return Err(CliError::Usage(format!("the oracle universe has {} terms, above {ORACLE_LIMIT}", cfg.count())));
    }
    Ok(cfg)
}

fn contains_abs(t: &Term) -> bool {
    match t {
        Term::Abs(..) => true,
        Term::App(_, args) => args.iter().any(contains_abs),
        _ => false,
    }
}
