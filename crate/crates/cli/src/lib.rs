//! The `scalc` command line: spec-file driven verification, weakest
//! preconditions, the law suite, SMT export and relation dumps.
//!
//! Every command returns an [`Output`] instead of printing, so the binary
//! and the tests share one code path. Exit codes: 0 success, 1 a property
//! failed, 2 bad usage or input.

pub mod spec;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Map, Value};

use scalc_core::export::{export_vc, ExportOptions};
use scalc_core::hoare::verify_with;
use scalc_core::laws::{self, Enumeration, LawConfig, LawKind};
use scalc_core::predicates::pred_to_set;
use scalc_core::semantics::denote_with;
use scalc_core::{wp, Exec, Mode, StateSpace};

pub use spec::{Model, SpecFile};

pub const DEFAULT_MAX_STATES: usize = 1 << 24;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}:{line}: {message}")]
    Spec { origin: String, line: usize, message: String },
    #[error("{origin}:{line}:{column}: {message}")]
    Located {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Core(#[from] scalc_core::Error),
}

/// What a command wants printed, and its exit status.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, Parser)]
#[command(name = "scalc", version, about = "Finite-model Hoare logic verifier")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Debug, Args)]
pub struct Global {
    /// Correctness notion; overrides the spec file.
    #[arg(long, global = true, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// Seed for the law suite.
    #[arg(long, global = true, default_value_t = laws::DEFAULT_SEED)]
    pub seed: u64,
    /// Random trials per law and size.
    #[arg(long, global = true, default_value_t = laws::DEFAULT_TRIALS)]
    pub trials: usize,
    /// Largest state space to enumerate.
    #[arg(long, global = true, env = "SCALC_MAX_STATES", default_value_t = DEFAULT_MAX_STATES)]
    pub max_states: usize,
    /// Machine output only: no summary on stderr, JSON for dump-relation.
    #[arg(long, global = true)]
    pub json: bool,
    /// Loop unrolling bound for export-smt; overrides the spec file.
    #[arg(long, global = true)]
    pub unroll: Option<usize>,
}

impl Default for Global {
    fn default() -> Self {
        Global {
            mode: None,
            seed: laws::DEFAULT_SEED,
            trials: laws::DEFAULT_TRIALS,
            max_states: DEFAULT_MAX_STATES,
            json: false,
            unroll: None,
        }
    }
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    s.parse()
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide {pre} program {post}.
    Verify { spec: PathBuf },
    /// List the weakest precondition of the program for the postcondition.
    Wp {
        spec: PathBuf,
        /// Maximum number of states listed.
        #[arg(long, default_value_t = 100)]
        limit: usize,
    },
    /// Check the law suite on random and exhaustive finite models.
    Laws(LawArgs),
    /// Write the verification condition as SMT-LIB 2.
    ExportSmt {
        spec: PathBuf,
        /// Output file, `-` for stdout; defaults to the spec path with `.smt2`.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Export loops even without an unrolling bound.
        #[arg(long)]
        allow_partial_unroll: bool,
    },
    /// Print the program's relation as sorted `(i,j)` index pairs.
    DumpRelation { spec: PathBuf },
}

#[derive(Clone, Debug, Default, Args)]
pub struct LawArgs {
    /// Law to check; repeatable. Defaults to every theorem.
    #[arg(long = "law")]
    pub laws: Vec<String>,
    /// Enumerate every binding instead of sampling.
    #[arg(long)]
    pub exhaustive: bool,
    /// Space size; repeatable. Defaults to 1..4, or 1..2 with --exhaustive.
    #[arg(long = "size")]
    pub sizes: Vec<usize>,
    /// Also run the printed variants and converses that are not theorems.
    #[arg(long)]
    pub diagnostics: bool,
    /// Also run the deliberately false laws.
    #[arg(long)]
    pub negative_controls: bool,
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let g = &cli.global;
    match &cli.command {
        Command::Verify { spec } => run_verify(spec, g),
        Command::Wp { spec, limit } => run_wp(spec, *limit, g),
        Command::Laws(args) => run_laws(args, g),
        Command::ExportSmt {
            spec,
            output,
            allow_partial_unroll,
        } => run_export(spec, output.as_deref(), *allow_partial_unroll, g),
        Command::DumpRelation { spec } => run_dump(spec, g),
    }
}

fn load(path: &Path, g: &Global) -> Result<(SpecFile, Model), CliError> {
    let spec = SpecFile::load(path)?;
    let model = spec.model(g.max_states)?;
    Ok((spec, model))
}

fn state_json(space: &StateSpace, index: usize) -> Value {
    let mut obj = Map::new();
    for (name, value) in space.describe(index) {
        obj.insert(name.to_string(), json!(value));
    }
    Value::Object(obj)
}

fn line(v: &Value) -> String {
    format!("{v}\n")
}

pub fn run_verify(path: &Path, g: &Global) -> Result<Output, CliError> {
    let (spec, m) = load(path, g)?;
    let mode = g.mode.or(spec.mode).unwrap_or_default();
    let start = Instant::now();
    let report = verify_with(&m.program, &m.pre, &m.post, mode, &m.space, Exec::default())?;
    let elapsed = start.elapsed();
    let mut out = Output {
        code: if report.verdict.holds { 0 } else { 1 },
        stdout: line(&report.to_json()),
        stderr: String::new(),
    };
    if !g.json {
        let adverb = match mode {
            Mode::Total => "totally",
            Mode::Partial => "partially",
        };
        let mut s = String::new();
        if report.verdict.holds {
            let _ = writeln!(s, "{adverb} correct");
        } else {
            let _ = writeln!(s, "not {adverb} correct");
        }
        if let Some(c) = report.verdict.counterexample {
            let _ = writeln!(s, "  {}: from {}", c.kind.as_str(), m.space.display(c.initial));
            if let Some(y) = c.witness_final {
                let _ = writeln!(s, "  reaches {}", m.space.display(y));
            }
        }
        let _ = writeln!(
            s,
            "  {} states, {} in wp, {:.1} ms",
            m.space.size(),
            report.wp_size,
            elapsed.as_secs_f64() * 1e3
        );
        out.stderr = s;
    }
    Ok(out)
}

pub fn run_wp(path: &Path, limit: usize, g: &Global) -> Result<Output, CliError> {
    let (_, m) = load(path, g)?;
    let s = denote_with(&m.program, &m.space, Exec::default())?;
    let q = pred_to_set(&m.post, &m.space)?;
    let w = wp(&s, &q)?;
    let states: Vec<Value> = w.iter().take(limit).map(|k| state_json(&m.space, k)).collect();
    let report = json!({
        "count": w.count(),
        "states": states,
        "truncated": w.count() > limit,
    });
    let stderr = if g.json {
        String::new()
    } else {
        format!("wp holds in {} of {} states\n", w.count(), m.space.size())
    };
    Ok(Output {
        code: 0,
        stdout: line(&report),
        stderr,
    })
}

pub fn run_laws(args: &LawArgs, g: &Global) -> Result<Output, CliError> {
    let ids: Vec<String> = if args.laws.is_empty() {
        let mut kinds = vec![LawKind::Theorem];
        if args.negative_controls {
            kinds.push(LawKind::NegativeControl);
        }
        if args.diagnostics {
            kinds.push(LawKind::Diagnostic);
        }
        laws::law_ids(&kinds).into_iter().map(String::from).collect()
    } else {
        args.laws.clone()
    };
    let sizes = match (args.sizes.is_empty(), args.exhaustive) {
        (false, _) => args.sizes.clone(),
        (true, true) => vec![1, 2],
        (true, false) => laws::DEFAULT_SIZES.to_vec(),
    };
    let config = LawConfig {
        trials: g.trials,
        sizes,
        seed: g.seed,
        enumeration: if args.exhaustive {
            Enumeration::Exhaustive
        } else {
            Enumeration::Auto
        },
        exec: Exec::default(),
    };
    let mut out = Output::default();
    let mut failed = false;
    for id in &ids {
        let r = laws::check_law_with(id, &config)?;
        failed |= r.violation_count > 0;
        out.stdout.push_str(&line(&r.to_json()));
        if !g.json {
            let verdict = match (r.kind, r.passed()) {
                (LawKind::NegativeControl, true) => "detected as expected",
                (LawKind::NegativeControl, false) => "NOT detected",
                (LawKind::Diagnostic, true) => "no violation found",
                (LawKind::Diagnostic, false) => "violated",
                (_, true) => "ok",
                (_, false) => "VIOLATED",
            };
            let _ = writeln!(
                out.stderr,
                "{:<20} {:<16} {:>7} trials {:>6} violations  {verdict}",
                r.law,
                r.kind.as_str(),
                r.trials,
                r.violation_count
            );
            if let Some(v) = r.violations.first() {
                let _ = writeln!(out.stderr, "    first: {}", v.to_json());
            }
        }
    }
    out.code = if failed { 1 } else { 0 };
    Ok(out)
}

pub fn run_export(path: &Path, output: Option<&Path>, allow_partial_unroll: bool, g: &Global) -> Result<Output, CliError> {
    let (spec, m) = load(path, g)?;
    let mode = g.mode.or(spec.mode).unwrap_or_default();
    let options = ExportOptions {
        unroll: g.unroll.or(spec.unroll).unwrap_or(0),
        allow_partial_unroll,
    };
    let doc = export_vc(&m.program, &m.pre, &m.post, mode, options)?;
    let text = doc.render();
    if output == Some(Path::new("-")) {
        return Ok(Output {
            code: 0,
            stdout: text,
            stderr: String::new(),
        });
    }
    let target = output.map(Path::to_path_buf).unwrap_or_else(|| path.with_extension("smt2"));
    fs::write(&target, &text).map_err(|source| CliError::Io {
        path: target.display().to_string(),
        source,
    })?;
    let report = json!({
        "output": target.display().to_string(),
        "logic": doc.logic,
        "bytes": text.len(),
    });
    let mut stderr = String::new();
    if !g.json {
        let _ = writeln!(stderr, "wrote {} ({}, {} symbols)", target.display(), doc.logic, doc.declarations.len());
        for note in &doc.notes {
            let _ = writeln!(stderr, "  note: {note}");
        }
    }
    Ok(Output {
        code: 0,
        stdout: line(&report),
        stderr,
    })
}

pub fn run_dump(path: &Path, g: &Global) -> Result<Output, CliError> {
    let (_, m) = load(path, g)?;
    let r = denote_with(&m.program, &m.space, Exec::default())?;
    let stdout = if g.json {
        line(&Value::Array(r.pairs().map(|(x, y)| json!([x, y])).collect()))
    } else {
        r.dump()
    };
    let stderr = if g.json {
        String::new()
    } else {
        format!("{} pairs over {} states\n", r.pair_count(), m.space.size())
    };
    Ok(Output { code: 0, stdout, stderr })
}
