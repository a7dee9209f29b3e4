//! The `ofl` command line.
//!
//! Exit codes: 0 SAT or success, 1 UNSAT (or a rejected certificate, or
//! fuzz failures), 2 UNKNOWN, 3 usage errors, 4 input errors, 5 a written
//! certificate that failed re-verification.

use std::ffi::OsString;
use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::algebra::{classify, operators_used, parse_term_file, OpSet, Term, TermFile, Vocabulary};
use crate::error::{Error, Result};
use crate::fuzz::{run_case, run_fuzz, Suite};
use crate::normalform::{to_normal_form, to_normal_form_with, NfKind, NfOptions};
use crate::reductions::{
    grid_sentence, infinity_axiom, infinity_axiom_c_free, modal_to_term, ol_to_term, s52_to_term, tiling_to_term,
    ModalFormula, TileSet,
};
use crate::semantics::{evaluate, parse_fo, satisfied, Structure};
use crate::solvers::{
    oracle_sat, size_bound, solve_onedim_eq_with, solve_ordered_eq_with, onedim, ordered, OracleOptions,
    SatVerdict, SolverOptions,
};

pub const EXIT_SUCCESS: i32 = 0;
pub const EXIT_UNSAT: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_INPUT: i32 = 4;
pub const EXIT_CERTIFICATE: i32 = 5;

const SCHEMA: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "ofl", version, about = "Relational algebra for ordered fragments of first-order logic")]
pub struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse a term file and print it back in canonical form.
    Parse { file: PathBuf },
    /// Report the operators of a term and the complexity of its fragment.
    Classify { file: PathBuf },
    /// Evaluate a term on a structure.
    Eval { file: PathBuf, structure: PathBuf },
    /// Convert a sentence to normal form.
    Nf {
        file: PathBuf,
        /// Guess the truth value of 0-ary subterms instead of padding.
        #[arg(long)]
        no_padding: bool,
        #[arg(long, value_enum)]
        kind: Option<KindArg>,
    },
    /// Decide satisfiability of a sentence.
    Sat(SatArgs),
    /// Build a reduction into the algebra and print it as a term file.
    Translate {
        #[arg(value_enum)]
        kind: TranslateKind,
        /// Input file, `-` for standard input; unused by grid and infinity.
        input: Option<PathBuf>,
        /// For infinity: the variant without the one-dimensional intersection.
        #[arg(long)]
        c_free: bool,
    },
    /// Check that a model satisfies a sentence.
    Certify { file: PathBuf, model: PathBuf },
    /// Differential and law testing on seeded random cases.
    Fuzz(FuzzArgs),
}

#[derive(Debug, clap::Args)]
pub struct SatArgs {
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = SolverArg::Auto)]
    pub solver: SolverArg,
    /// Largest domain the oracle searches when no size bound applies.
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    /// Time limit in seconds; hitting it yields UNKNOWN.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Write the model JSON here and re-verify it.
    #[arg(long)]
    pub certify: Option<PathBuf>,
    /// Print the guesses of the accepting run.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, clap::Args)]
pub struct FuzzArgs {
    #[arg(long, env = "OFL_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Cases per suite.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    #[arg(long, value_enum)]
    pub suite: Vec<Suite>,
    /// Directory for failure artifacts.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Rerun a single case from its case seed.
    #[arg(long)]
    pub replay: Option<u64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverArg {
    Auto,
    Oracle,
    Ordered,
    Onedim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Ordered,
    Onedim,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TranslateKind {
    Modal,
    S52,
    Ol,
    Tiling,
    Grid,
    Infinity,
}

impl ValueEnum for Suite {
    fn value_variants<'a>() -> &'a [Self] {
        &Suite::ALL
    }

    fn to_possible_value(&self) -> Option<clap::builder::PossibleValue> {
        Some(clap::builder::PossibleValue::new(self.name()))
    }
}

enum Failure {
    Usage(String),
    Input(Error),
    Certificate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(Error::Io(e))
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Runs the command line on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{text}");
                EXIT_SUCCESS
            } else {
                let _ = write!(err, "{text}");
                EXIT_USAGE
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
        Err(Failure::Certificate(msg)) => {
            let _ = writeln!(err, "error: certificate failed re-verification: {msg}");
            EXIT_CERTIFICATE
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let json = cli.json;
    match &cli.command {
        Command::Parse { file } => cmd_parse(file, json, out),
        Command::Classify { file } => cmd_classify(file, json, out),
        Command::Eval { file, structure } => cmd_eval(file, structure, json, out),
        Command::Nf { file, no_padding, kind } => cmd_nf(file, !no_padding, *kind, json, out),
        Command::Sat(args) => cmd_sat(args, json, out),
        Command::Translate { kind, input, c_free } => cmd_translate(*kind, input.as_deref(), *c_free, json, out),
        Command::Certify { file, model } => cmd_certify(file, model, json, out),
        Command::Fuzz(args) => cmd_fuzz(args, json, out),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
    }
}

fn read_term(path: &Path) -> Result<TermFile> {
    parse_term_file(&read_input(path)?)
}

fn read_sentence(path: &Path) -> Result<TermFile> {
    let file = read_term(path)?;
    if file.term.arity() != 0 {
        return Err(Error::NotSentence(file.term.arity()));
    }
    Ok(file)
}

fn print_json(out: &mut dyn Write, value: serde_json::Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("json value serializes"))
}

fn cmd_parse(path: &Path, json: bool, out: &mut dyn Write) -> CliResult {
    let file = read_term(path)?;
    let t = &file.term;
    if json {
        print_json(
            out,
            json!({
                "schema": SCHEMA,
                "vocab": file.vocab.to_string(),
                "term": t.to_string(),
                "arity": t.arity(),
                "operators": operators_used(t).to_string(),
                "depth": t.depth(),
                "size": t.size(),
            }),
        )?;
    } else {
        write!(out, "{}", file.render())?;
    }
    Ok(EXIT_SUCCESS)
}

fn cmd_classify(path: &Path, json: bool, out: &mut dyn Write) -> CliResult {
    let file = read_term(path)?;
    let v = classify(&file.term);
    let row = v.row.map(|r| r.ops.to_string());
    if json {
        print_json(
            out,
            json!({
                "schema": SCHEMA,
                "operators": v.ops.to_string(),
                "row": row,
                "status": v.label(),
                "note": v.note,
            }),
        )?;
    } else {
        writeln!(out, "operators {}", v.ops)?;
        writeln!(out, "row {}", row.as_deref().unwrap_or("none"))?;
        writeln!(out, "status {}", v.label())?;
        if let Some(note) = &v.note {
            writeln!(out, "note {note}")?;
        }
    }
    Ok(EXIT_SUCCESS)
}

fn cmd_eval(path: &Path, structure: &Path, json: bool, out: &mut dyn Write) -> CliResult {
    let file = read_term(path)?;
    let s = Structure::from_json(&read_input(structure)?, Some(&file.vocab))?;
    let r = evaluate(&file.term, &s);
    if json {
        let mut v = json!({ "schema": SCHEMA, "arity": r.arity(), "tuples": r.tuples() });
        if r.arity() == 0 {
            v["value"] = json!(r.is_top0());
        }
        print_json(out, v)?;
    } else if r.arity() == 0 {
        writeln!(out, "{}", r.is_top0())?;
    } else {
        writeln!(out, "arity {} tuples {}", r.arity(), r.len())?;
        for t in r.tuples() {
            let t: Vec<String> = t.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", t.join(" "))?;
        }
    }
    Ok(EXIT_SUCCESS)
}

fn cmd_nf(path: &Path, padding: bool, kind: Option<KindArg>, json: bool, out: &mut dyn Write) -> CliResult {
    let file = read_sentence(path)?;
    let kind = kind.map(|k| match k {
        KindArg::Ordered => NfKind::Ordered,
        KindArg::Onedim => NfKind::OneDim,
    });
    let branches = to_normal_form_with(&file.term, &file.vocab, NfOptions { padding, kind })?;
    if json {
        let items: Vec<_> = branches
            .iter()
            .map(|nf| {
                json!({
                    "kind": format!("{:?}", nf.kind).to_lowercase(),
                    "vocab": nf.vocab.to_string(),
                    "term": nf.to_term().to_string(),
                    "kappa": nf.kappa.len(),
                    "lambda": nf.lambda.len(),
                    "existential": nf.existential.len(),
                    "universal": nf.universal.len(),
                    "padded": nf.padding.is_some(),
                })
            })
            .collect();
        print_json(out, json!({ "schema": SCHEMA, "branches": items }))?;
    } else {
        for (i, nf) in branches.iter().enumerate() {
            if branches.len() > 1 {
                writeln!(out, "# branch {}", i + 1)?;
            }
            writeln!(
                out,
                "# kappa {} lambda {} existential {} universal {}{}",
                nf.kappa.len(),
                nf.lambda.len(),
                nf.existential.len(),
                nf.universal.len(),
                if nf.padding.is_some() { " padded" } else { "" }
            )?;
            writeln!(out, "{nf}")?;
        }
    }
    Ok(EXIT_SUCCESS)
}

/// Size bound of the term's fragment, taken over all normal-form branches.
fn fragment_bound(term: &Term) -> Option<usize> {
    let ops: OpSet = operators_used(&term.desugar());
    let branches = to_normal_form(term, &term.vocabulary()).ok()?;
    branches.iter().map(|nf| size_bound(nf, ops).ok()).collect::<Option<Vec<_>>>()?.into_iter().max()
}

fn run_solver(args: &SatArgs, term: &Term, vocab: &Vocabulary) -> Result<(&'static str, Option<usize>, SatVerdict)> {
    let timeout = args.timeout.map(Duration::from_secs_f64);
    let opts = SolverOptions { timeout, trace: args.trace };
    let ops = operators_used(term);
    let choice = match args.solver {
        SolverArg::Auto if ops.is_subset(ordered::FRAGMENT) => SolverArg::Ordered,
        SolverArg::Auto if ops.is_subset(onedim::FRAGMENT) => SolverArg::Onedim,
        s => s,
    };
    match choice {
        SolverArg::Ordered => Ok(("ordered", None, solve_ordered_eq_with(term, &opts)?)),
        SolverArg::Onedim => Ok(("onedim", None, solve_onedim_eq_with(term, &opts)?)),
        _ => {
            let bound = fragment_bound(term);
            let max = match (args.solver, bound) {
                (SolverArg::Auto, Some(b)) => b,
                _ => args.max_size,
            };
            let mut o = OracleOptions::up_to(max).timeout(timeout).vocab(vocab);
            if let Some(b) = bound {
                o = o.complete(b);
            }
            Ok(("oracle", Some(max), oracle_sat(term, &o)?))
        }
    }
}

/// The model over the full declared vocabulary, with undeclared-but-used symbols kept.
fn widen(model: &Structure, vocab: &Vocabulary) -> Structure {
    let mut s = Structure::new(model.domain(), vocab);
    for (name, rel) in model.relations() {
        s.set(name, rel.clone());
    }
    s
}

fn cmd_sat(args: &SatArgs, json: bool, out: &mut dyn Write) -> CliResult {
    let file = read_sentence(&args.file)?;
    let term = &file.term;
    let (solver, searched, verdict) = run_solver(args, term, &file.vocab)?;
    let model = verdict.model().map(|m| widen(m, &file.vocab));
    if let Some(m) = &model {
        if !satisfied(m, term)? {
            return Err(Failure::Certificate("the model does not satisfy the term".into()));
        }
        if let Some(path) = &args.certify {
            fs::write(path, m.to_json() + "\n")?;
            let back = Structure::from_json(&fs::read_to_string(path)?, Some(&file.vocab))?;
            if !satisfied(&back, term)? {
                return Err(Failure::Certificate(format!("{} does not satisfy the term", path.display())));
            }
        }
    }
    let stats = &verdict.stats;
    if json {
        print_json(
            out,
            json!({
                "schema": SCHEMA,
                "verdict": verdict.label(),
                "solver": solver,
                "max_size": searched,
                "model": model.as_ref().map(Structure::to_json_value),
                "certificate": args.certify.as_ref().filter(|_| model.is_some()).map(|p| p.display().to_string()),
                "stats": {
                    "branches": stats.branches,
                    "max_size_tried": stats.max_size_tried,
                    "elapsed_ms": stats.elapsed.as_millis() as u64,
                },
                "trace": verdict.trace,
            }),
        )?;
    } else {
        for line in &verdict.trace {
            writeln!(out, "{line}")?;
        }
        match (&model, searched) {
            (None, Some(n)) if !verdict.is_unsat() => writeln!(out, "UNKNOWN (no model up to size {n})")?,
            _ => writeln!(out, "{}", verdict.label())?,
        }
        writeln!(out, "solver {solver}")?;
        if let Some(m) = &model {
            writeln!(out, "{}", m.to_json())?;
        }
    }
    Ok(if verdict.is_sat() {
        EXIT_SUCCESS
    } else if verdict.is_unsat() {
        EXIT_UNSAT
    } else {
        EXIT_UNKNOWN
    })
}

fn cmd_translate(kind: TranslateKind, input: Option<&Path>, c_free: bool, json: bool, out: &mut dyn Write) -> CliResult {
    let text = || -> std::result::Result<String, Failure> {
        let path = input.ok_or_else(|| Failure::Usage(format!("{kind:?} translation needs an input file")))?;
        Ok(read_input(path)?)
    };
    let (term, vocab) = match kind {
        TranslateKind::Modal => modal_to_term(&ModalFormula::parse(text()?.trim())?)?,
        TranslateKind::S52 => s52_to_term(&ModalFormula::parse(text()?.trim())?)?,
        TranslateKind::Ol => {
            let t = ol_to_term(&parse_fo(text()?.trim())?)?;
            let v = t.vocabulary();
            (t, v)
        }
        TranslateKind::Tiling => tiling_to_term(&TileSet::from_json(&text()?)?)?,
        TranslateKind::Grid => {
            let t = grid_sentence();
            (t, crate::reductions::grid::grid_vocabulary())
        }
        TranslateKind::Infinity => {
            let t = if c_free { infinity_axiom_c_free() } else { infinity_axiom() };
            let v = t.vocabulary();
            (t, v)
        }
    };
    let file = TermFile { vocab, term };
    if json {
        print_json(out, json!({ "schema": SCHEMA, "vocab": file.vocab.to_string(), "term": file.term.to_string() }))?;
    } else {
        write!(out, "{}", file.render())?;
    }
    Ok(EXIT_SUCCESS)
}

fn cmd_certify(path: &Path, model: &Path, json: bool, out: &mut dyn Write) -> CliResult {
    let file = read_sentence(path)?;
    let s = Structure::from_json(&read_input(model)?, Some(&file.vocab))?;
    let ok = satisfied(&s, &file.term)?;
    if json {
        print_json(out, json!({ "schema": SCHEMA, "valid": ok }))?;
    } else {
        writeln!(out, "{}", if ok { "certificate valid" } else { "certificate rejected" })?;
    }
    Ok(if ok { EXIT_SUCCESS } else { EXIT_UNSAT })
}

fn cmd_fuzz(args: &FuzzArgs, json: bool, out: &mut dyn Write) -> CliResult {
    let suites: Vec<Suite> = if args.suite.is_empty() { Suite::ALL.to_vec() } else { args.suite.clone() };
    if let Some(case_seed) = args.replay {
        let &[suite] = suites.as_slice() else {
            return Err(Failure::Usage("--replay needs exactly one --suite".into()));
        };
        let result = run_case(suite, case_seed)?;
        match &result {
            None => writeln!(out, "{} seed {case_seed} ok", suite.name())?,
            Some((term, detail)) => writeln!(out, "FAIL {} seed {case_seed}: {term} | {detail}", suite.name())?,
        }
        return Ok(if result.is_none() { EXIT_SUCCESS } else { EXIT_UNSAT });
    }
    let report = run_fuzz(args.seed, args.count, &suites)?;
    if let Some(dir) = &args.out {
        fs::create_dir_all(dir)?;
        for f in &report.failures {
            let path = dir.join(format!("{}-{}.json", f.suite.name(), f.case_seed));
            let body = json!({
                "schema": SCHEMA,
                "seed": report.seed,
                "failure": f,
                "replay": format!("ofl fuzz --suite {} --replay {}", f.suite.name(), f.case_seed),
            });
            fs::write(path, serde_json::to_string_pretty(&body).expect("json value serializes") + "\n")?;
        }
    }
    if json {
        print_json(out, serde_json::to_value(&report).map_err(Error::Json)?)?;
    } else {
        write!(out, "{}", report.render())?;
    }
    Ok(if report.failures.is_empty() { EXIT_SUCCESS } else { EXIT_UNSAT })
}
