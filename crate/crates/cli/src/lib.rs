//! Subcommand dispatch for the `vanilla` binary.
//!
//! [`run`] takes the argument vector and standard input and returns the exit
//! code with both output streams, so the whole front end is testable without
//! spawning a process. Exit codes: 0 success, 1 negative verdict, 2 usage or
//! parse error.

use std::fmt::Write as _;
use std::fs;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use vanilla_core::rewriting::{self, normalize, reduction_graph, RuleId, RuleSet, Strategy};
use vanilla_core::structeq::{bisim_probe, equiv_bounded, Equivalence};
use vanilla_core::terms::{parse_natural, parse_term, parse_vanilla, AnyTerm, Calculus};
use vanilla_core::testkit::{self, GenConfig};
use vanilla_core::translate::{self, nd_to_sc, sc_to_nd};
use vanilla_core::typing::{self, check_nd, check_sc, infer, parse_ctx_entries, Formula, TypeCtx};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn verdict(ok: bool, stdout: String) -> Self {
        Outcome {
            code: if ok { 0 } else { 1 },
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: impl Into<String>) -> Self {
        let mut stderr = stderr.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "vanilla",
    version,
    about = "Natural and vanilla call-by-value calculi"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse a term and print it back.
    Parse {
        #[arg(long, value_enum, default_value_t = CalcArg::Natural)]
        calculus: CalcArg,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Check a term against a formula.
    Typecheck {
        #[arg(long, value_enum, default_value_t = CalcArg::Natural)]
        calculus: CalcArg,
        #[arg(long, default_value = "")]
        ctx: String,
        #[arg(long = "type")]
        formula: String,
        /// Also print the derivation.
        #[arg(long, value_enum)]
        derivation: Option<Format>,
        #[command(flatten)]
        input: Input,
    },
    /// Infer a formula; context entries may be `x:?`.
    Infer {
        #[arg(long, value_enum, default_value_t = CalcArg::Natural)]
        calculus: CalcArg,
        #[arg(long, default_value = "")]
        ctx: String,
        #[command(flatten)]
        input: Input,
    },
    /// Rewrite under a rule set and strategy.
    Reduce {
        #[arg(long, value_enum, default_value_t = RulesArg::Vsc)]
        calculus: RulesArg,
        #[arg(long, value_enum, default_value_t = StrategyArg::Lo)]
        strategy: StrategyArg,
        #[arg(long, default_value_t = 100)]
        fuel: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        trace: Format,
        #[command(flatten)]
        input: Input,
    },
    /// Translate between the two calculi.
    Translate {
        #[arg(long, value_enum)]
        direction: DirectionArg,
        #[command(flatten)]
        input: Input,
    },
    /// Replay every redex of a term in the other calculus.
    Simulate {
        #[arg(long, value_enum)]
        direction: SimDirection,
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        input: Input,
    },
    /// Search for a chain of structural moves between two vanilla terms.
    Equiv {
        left: String,
        right: String,
        #[arg(long, default_value_t = 4)]
        budget: usize,
        /// Also close every cut-elimination diagram between the two terms.
        #[arg(long)]
        probe: bool,
    },
    /// Explore every reduction path, reporting termination.
    SnProbe {
        #[arg(long, value_enum, default_value_t = RulesArg::Vanilla)]
        calculus: RulesArg,
        #[arg(long, default_value_t = 10_000)]
        cap: usize,
        #[command(flatten)]
        input: Input,
    },
    /// Print a generated corpus.
    Gen {
        #[arg(long, value_enum, default_value_t = GenKind::Typed)]
        kind: GenKind,
        #[arg(long, value_enum, default_value_t = CalcArg::Vanilla)]
        calculus: CalcArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 10)]
        max_size: usize,
        #[arg(long, default_value = "X,Y", value_delimiter = ',')]
        atoms: Vec<String>,
        #[arg(long, default_value_t = 3)]
        pool: usize,
    },
}

#[derive(Args, Debug)]
struct Input {
    /// Term source; read from standard input when absent.
    term: Option<String>,
    #[arg(long, conflicts_with = "term")]
    file: Option<String>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CalcArg {
    Natural,
    Vanilla,
}

impl From<CalcArg> for Calculus {
    fn from(c: CalcArg) -> Calculus {
        match c {
            CalcArg::Natural => Calculus::Natural,
            CalcArg::Vanilla => Calculus::Vanilla,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum RulesArg {
    Sc,
    Vsc,
    PlotkinWeak,
    PlotkinStrong,
    Vanilla,
}

impl From<RulesArg> for RuleSet {
    fn from(r: RulesArg) -> RuleSet {
        match r {
            RulesArg::Sc => RuleSet::Sc,
            RulesArg::Vsc => RuleSet::Vsc,
            RulesArg::PlotkinWeak => RuleSet::PlotkinWeak,
            RulesArg::PlotkinStrong => RuleSet::PlotkinStrong,
            RulesArg::Vanilla => RuleSet::Vanilla,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum StrategyArg {
    Lo,
    Ri,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DirectionArg {
    NdToSc,
    ScToNd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SimDirection {
    VanillaToVsc,
    VscToVanilla,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenKind {
    Typed,
    CutFree,
    Untyped,
    Values,
}

/// Errors that end a command with exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn source(input: &Input, stdin: &str) -> Result<String, Usage> {
    match (&input.term, &input.file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(path)) => {
            fs::read_to_string(path).map_err(|e| Usage(format!("cannot read {path}: {e}")))
        }
        (None, None) => Ok(stdin.to_string()),
    }
}

fn json_line(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn run<I, S>(argv: I, stdin: &str) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(2, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    match dispatch(cli.command, stdin) {
        Ok(out) => out,
        Err(Usage(msg)) => Outcome::fail(2, format!("error: {msg}")),
    }
}

fn dispatch(cmd: Command, stdin: &str) -> Result<Outcome, Usage> {
    match cmd {
        Command::Parse {
            calculus,
            json,
            input,
        } => {
            let t = parse_term(calculus.into(), &source(&input, stdin)?)?;
            Ok(Outcome::ok(if json {
                let (size, fv) = match &t {
                    AnyTerm::Natural(n) => term_facts(n),
                    AnyTerm::Vanilla(v) => term_facts(v),
                };
                json_line(json!({
                    "calculus": t.calculus().to_string(),
                    "term": t.to_string(),
                    "size": size,
                    "free_vars": fv,
                }))
            } else {
                format!("{t}\n")
            }))
        }
        Command::Typecheck {
            calculus,
            ctx,
            formula,
            derivation,
            input,
        } => {
            let g = TypeCtx::parse(&ctx)?;
            let a = Formula::parse(&formula)?;
            let t = parse_term(calculus.into(), &source(&input, stdin)?)?;
            let res = match &t {
                AnyTerm::Natural(n) => check_nd(&g, n, &a),
                AnyTerm::Vanilla(v) => check_sc(&g, v, &a),
            };
            Ok(match res {
                Ok(d) => Outcome::ok(match derivation {
                    None => format!("ok: {g} |- {t} : {a}\n"),
                    Some(Format::Text) => d.to_text(),
                    Some(Format::Json) => json_line(d.to_json()),
                }),
                Err(e) => type_failure(e),
            })
        }
        Command::Infer {
            calculus,
            ctx,
            input,
        } => {
            let entries = parse_ctx_entries(&ctx)?;
            let t = parse_term(calculus.into(), &source(&input, stdin)?)?;
            Ok(match infer(calculus.into(), &entries, &t) {
                Ok(inf) => {
                    let mut out = format!("{t} : {}\n", inf.formula);
                    for (x, f) in &inf.assignment {
                        let _ = writeln!(out, "  {x} : {f}");
                    }
                    Outcome::ok(out)
                }
                Err(e) => type_failure(e),
            })
        }
        Command::Reduce {
            calculus,
            strategy,
            fuel,
            trace,
            input,
        } => {
            let rules: RuleSet = calculus.into();
            let strategy = match strategy {
                StrategyArg::Lo => Strategy::LeftmostOutermost,
                StrategyArg::Ri => Strategy::RightmostInnermost,
            };
            let t = parse_term(rules.calculus(), &source(&input, stdin)?)?;
            let out = match &t {
                AnyTerm::Natural(n) => {
                    render_trace(&normalize(n, rules.rules(), strategy, fuel)?, trace)
                }
                AnyTerm::Vanilla(v) => {
                    render_trace(&normalize(v, rules.rules(), strategy, fuel)?, trace)
                }
            };
            Ok(Outcome::ok(out))
        }
        Command::Translate { direction, input } => {
            let src = source(&input, stdin)?;
            let out = match direction {
                DirectionArg::NdToSc => nd_to_sc(&parse_natural(&src)?).to_string(),
                DirectionArg::ScToNd => sc_to_nd(&parse_vanilla(&src)?).to_string(),
            };
            Ok(Outcome::ok(out + "\n"))
        }
        Command::Simulate {
            direction,
            json,
            input,
        } => {
            let src = source(&input, stdin)?;
            match direction {
                SimDirection::VanillaToVsc => {
                    let t = parse_vanilla(&src)?;
                    let reports = rewriting::vanilla_redexes(&t, &[RuleId::CutElim])
                        .into_iter()
                        .map(|r| (r.clone(), translate::simulate_cut_in_vsc(&t, &r)));
                    Ok(render_sims(reports, json))
                }
                SimDirection::VscToVanilla => {
                    let t = parse_natural(&src)?;
                    let reports = rewriting::natural_redexes(&t, RuleSet::Vsc.rules())
                        .into_iter()
                        .map(|r| (r.clone(), translate::simulate_vsc_in_vanilla(&t, &r)));
                    Ok(render_sims(reports, json))
                }
            }
        }
        Command::Equiv {
            left,
            right,
            budget,
            probe,
        } => {
            let (t, u) = (parse_vanilla(&left)?, parse_vanilla(&right)?);
            let mut out = String::new();
            let found = match equiv_bounded(&t, &u, budget) {
                Equivalence::Equivalent(path) => {
                    let _ = writeln!(out, "equivalent in {} moves", path.len() - 1);
                    for p in &path {
                        let _ = writeln!(out, "  {p}");
                    }
                    true
                }
                Equivalence::NotFound { explored } => {
                    let _ = writeln!(
                        out,
                        "not found within {budget} moves ({explored} terms explored)"
                    );
                    false
                }
            };
            if !probe || !found {
                return Ok(Outcome::verdict(found, out));
            }
            match bisim_probe(&t, &u, budget) {
                Ok(ds) => {
                    for d in ds {
                        let _ = writeln!(
                            out,
                            "{:?}: {} -> {} answered by {} -> {} ({} moves)",
                            d.side, d.step, d.reduct, d.answer, d.answer_reduct, d.moves
                        );
                    }
                    Ok(Outcome::ok(out))
                }
                Err(e) => {
                    let _ = writeln!(out, "{e}");
                    Ok(Outcome::verdict(false, out))
                }
            }
        }
        Command::SnProbe {
            calculus,
            cap,
            input,
        } => {
            let rules: RuleSet = calculus.into();
            let t = parse_term(rules.calculus(), &source(&input, stdin)?)?;
            let rep = match &t {
                AnyTerm::Natural(n) => reduction_graph(n, rules.rules(), cap)?,
                AnyTerm::Vanilla(v) => reduction_graph(v, rules.rules(), cap)?,
            };
            Ok(Outcome::verdict(rep.terminates(), format!("{rep}\n")))
        }
        Command::Gen {
            kind,
            calculus,
            seed,
            count,
            max_size,
            atoms,
            pool,
        } => {
            let atom_universe = atoms.into_iter().filter(|a| !a.is_empty()).collect();
            let cfg = GenConfig {
                seed,
                max_size,
                atom_universe,
                variable_pool: pool,
            };
            let calculus: Calculus = calculus.into();
            let out = match kind {
                GenKind::Typed => {
                    testkit::write_corpus(&cfg, testkit::gen_typed(calculus, &cfg)?.take(count))
                }
                GenKind::CutFree => {
                    testkit::write_corpus(&cfg, testkit::gen_cut_free(&cfg)?.take(count))
                }
                GenKind::Untyped => {
                    testkit::write_corpus(&cfg, testkit::gen_untyped(calculus, &cfg)?.take(count))
                }
                GenKind::Values => {
                    testkit::write_corpus(&cfg, testkit::gen_value(calculus, &cfg)?.take(count))
                }
            };
            Ok(Outcome::ok(out))
        }
    }
}

fn term_facts<T: vanilla_core::terms::Term>(t: &T) -> (usize, Vec<String>) {
    (
        t.size(),
        t.free_vars().iter().map(ToString::to_string).collect(),
    )
}

fn type_failure(e: typing::TypeError) -> Outcome {
    Outcome {
        code: 1,
        stdout: String::new(),
        stderr: format!("type error: {e}\n"),
    }
}

fn render_trace<T: vanilla_core::terms::Term>(
    trace: &rewriting::Trace<T>,
    format: Format,
) -> String {
    match format {
        Format::Text => trace.to_text(),
        Format::Json => json_line(trace.to_json()),
    }
}

fn render_sims<T: vanilla_core::terms::Term>(
    reports: impl Iterator<
        Item = (
            rewriting::Redex,
            Result<translate::SimReport<T>, translate::SimError>,
        ),
    >,
    json: bool,
) -> Outcome {
    let mut all_ok = true;
    let mut text = String::new();
    let mut items = Vec::new();
    for (r, rep) in reports {
        match rep {
            Ok(rep) => {
                let _ = writeln!(text, "{r}: {} -> {}", rep.shape, rep.target.last());
                items.push(rep.to_json());
            }
            Err(e) => {
                all_ok = false;
                let _ = writeln!(text, "{r}: {e}");
                items.push(
                    json!({ "source": r.to_string(), "matched": false, "error": e.to_string() }),
                );
            }
        }
    }
    if items.is_empty() {
        text.push_str("no redexes\n");
    }
    Outcome::verdict(all_ok, if json { json_line(json!(items)) } else { text })
}
