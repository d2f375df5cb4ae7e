//! The `ddl` command: read programs, ground, enumerate answer sets or
//! answer a query, and print the result.
//!
//! Solver flags follow the single-dash `-key=value` convention of DLV and
//! are parsed here. The `bench` subcommand uses clap.

use std::collections::HashSet;
use std::io::{self, Read, Write};
use std::path::PathBuf;

use ddl_core::checker::{check, Verdict};
use ddl_core::frontends::{answer, format_substitution, Mode as QueryMode};
use ddl_core::model::{GroundLiteral, Term};
use ddl_core::{
    enumerate_answer_sets, ground_program, EnumerationLimit, GroundError, GroundProgram, Input, Interpretation,
    LoadError,
};
use thiserror::Error;

pub mod bench;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_SAFETY: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Solve,
    Brave,
    Cautious,
    GroundOnly,
    Check,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RunConfig {
    /// `-` reads standard input.
    pub inputs: Vec<PathBuf>,
    pub mode: Mode,
    /// 0 means all.
    pub max_answer_sets: usize,
    pub max_int: Option<u64>,
    /// Predicate names to print; empty prints everything.
    pub filter: Vec<String>,
    pub stats: bool,
    pub unique: bool,
}

#[derive(Debug)]
pub enum Command {
    Run(RunConfig),
    Bench(Vec<String>),
    Help,
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct UsageError(pub String);

pub const USAGE: &str = "\
usage: ddl [options] <file>...
       ddl bench <run|generate|encoding> ...

Files are read in order as one program; `-` is standard input.

options:
  -n=<N>            print at most N answer sets (0: all)
  -N=<maxint>       integers 0..maxint are available to #int, #succ, + and *
  -filter=<p,...>   print only literals of these predicates
  -brave            answer the query (l1, ..., lk?) in some answer set
  -cautious         answer the query in every answer set
  --ground-only     print the ground program and stop
  --check           check the candidate set {l1, ..., lk} given in the input
  --stats           grounding and search statistics on the error stream
  --unique          print each filtered answer set once
";

/// Reads the command line (without the program name).
pub fn parse_args<S: AsRef<str>>(args: &[S]) -> Result<Command, UsageError> {
    let args: Vec<&str> = args.iter().map(|a| a.as_ref()).collect();
    if args.first() == Some(&"bench") {
        return Ok(Command::Bench(args[1..].iter().map(|s| s.to_string()).collect()));
    }
    let mut c = RunConfig::default();
    let mut modes = Vec::new();
    let number = |flag: &str, v: &str| -> Result<u64, UsageError> {
        v.parse()
            .map_err(|_| UsageError(format!("{flag} needs a non-negative integer, found `{v}`")))
    };
    for a in args {
        if let Some(v) = a.strip_prefix("-n=") {
            c.max_answer_sets = number("-n", v)? as usize;
        } else if let Some(v) = a.strip_prefix("-N=") {
            c.max_int = Some(number("-N", v)?);
        } else if let Some(v) = a.strip_prefix("-filter=") {
            c.filter.extend(v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from));
        } else {
            match a {
                "-h" | "--help" => return Ok(Command::Help),
                "-brave" => modes.push(Mode::Brave),
                "-cautious" => modes.push(Mode::Cautious),
                "--ground-only" => modes.push(Mode::GroundOnly),
                "--check" => modes.push(Mode::Check),
                "--stats" => c.stats = true,
                "--unique" => c.unique = true,
                "-" => c.inputs.push(PathBuf::from("-")),
                _ if a.starts_with('-') => return Err(UsageError(format!("unknown option `{a}`"))),
                _ => c.inputs.push(PathBuf::from(a)),
            }
        }
    }
    modes.dedup();
    c.mode = match modes[..] {
        [] => Mode::Solve,
        [m] => m,
        _ => return Err(UsageError("-brave, -cautious, --ground-only and --check exclude each other".into())),
    };
    if c.inputs.is_empty() {
        return Err(UsageError("no input files".into()));
    }
    Ok(Command::Run(c))
}

/// `{l1, l2, ...}` with the literals of `x` whose predicate is in `filter`
/// (all when `filter` is empty), ordered by predicate name, arguments and
/// sign.
pub fn print_answer_set(gp: &GroundProgram, x: &Interpretation, filter: &[String]) -> String {
    let symbols = gp.symbols();
    let mut lits: Vec<&GroundLiteral> = x
        .iter()
        .map(|l| gp.literal(l))
        .filter(|l| filter.is_empty() || filter.iter().any(|p| p == symbols.pred_name(l.pred)))
        .collect();
    lits.sort_by(|a, b| a.output_cmp(b, symbols));
    let body: Vec<String> = lits.iter().map(|l| l.display(symbols).to_string()).collect();
    format!("{{{}}}", body.join(", "))
}

#[derive(Debug, Error)]
enum RunError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: io::Error },
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error("cannot write output: {0}")]
    Output(#[from] io::Error),
}

impl RunError {
    fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) | RunError::Load(LoadError::Parse(_)) => EXIT_PARSE,
            RunError::Load(LoadError::Arity(_)) | RunError::Ground(GroundError::Safety(_)) => EXIT_SAFETY,
            RunError::Ground(GroundError::Resource { .. }) | RunError::Io { .. } | RunError::Output(_) => {
                EXIT_RESOURCE
            }
        }
    }
}

/// Runs the pipeline and returns the exit code. Results go to `out`,
/// diagnostics and statistics to `err`.
pub fn run(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match execute(config, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_input(path: &PathBuf) -> Result<String, RunError> {
    let io_err = |source| RunError::Io {
        path: path.display().to_string(),
        source,
    };
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(io_err)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(io_err)
    }
}

fn execute(config: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), RunError> {
    let mut input = Input::new();
    for path in &config.inputs {
        let src = read_input(path)?;
        let name = if path.as_os_str() == "-" {
            "<stdin>".to_string()
        } else {
            path.display().to_string()
        };
        input.add_source(&name, &src)?;
    }
    if let Some(n) = config.max_int {
        input.program.max_int = n;
    }
    let query = input.query.take();
    let needs_query = matches!(config.mode, Mode::Brave | Mode::Cautious);
    if needs_query && query.is_none() {
        return Err(RunError::Usage("query mode needs a query `l1, ..., lk?` in the input".into()));
    }
    if config.mode == Mode::Check && input.candidate.is_none() {
        return Err(RunError::Usage("--check needs a candidate set `{l1, ..., lk}` in the input".into()));
    }

    let grounding = ground_program(&input.program)?;
    let gp = grounding.program;
    if config.stats {
        let s = grounding.stats;
        writeln!(
            err,
            "ground rules: {}\nground literals: {}\nrule instances: {}",
            s.ground_rules, s.ground_literals, s.instances
        )?;
    }

    match config.mode {
        Mode::GroundOnly => write!(out, "{gp}")?,
        Mode::Solve => {
            let limit = EnumerationLimit::at_most(config.max_answer_sets);
            let mut seen = HashSet::new();
            let mut sets = enumerate_answer_sets(&gp, limit);
            for x in sets.by_ref() {
                let line = print_answer_set(&gp, &x, &config.filter);
                if !config.unique || seen.insert(line.clone()) {
                    writeln!(out, "{line}")?;
                }
            }
            if config.stats {
                writeln!(err, "{}", sets.stats())?;
            }
        }
        Mode::Brave | Mode::Cautious => {
            let query = query.unwrap();
            let mode = if config.mode == Mode::Brave {
                QueryMode::Brave
            } else {
                QueryMode::Cautious
            };
            let a = answer(&gp, &input.program.herbrand_universe(), &query, mode);
            if a.no_answer_sets {
                writeln!(out, "% no answer sets")?;
            }
            if a.variables.is_empty() {
                writeln!(out, "{}", a.holds())?;
            } else if a.substitutions.is_empty() {
                writeln!(out, "false")?;
            } else {
                for s in &a.substitutions {
                    writeln!(out, "{}", format_substitution(gp.symbols(), &a.variables, s))?;
                }
            }
            if config.stats {
                writeln!(err, "{}", a.stats)?;
            }
        }
        Mode::Check => {
            let (lits, span) = input.candidate.take().unwrap();
            writeln!(out, "{}", check_candidate(&gp, &lits).map_err(|m| RunError::Usage(format!("{span}: {m}")))?)?;
        }
    }
    Ok(())
}

/// `answer set`, or `not an answer set: ` and the failed condition.
fn check_candidate(gp: &GroundProgram, lits: &[ddl_core::model::Literal]) -> Result<String, String> {
    let symbols = gp.symbols();
    let mut ids = Vec::new();
    for l in lits {
        let args = l
            .atom
            .args
            .iter()
            .map(|t| match t {
                Term::Const(v) => Ok(*v),
                Term::Var(_) => Err("candidate literals must be ground".to_string()),
            })
            .collect::<Result<Box<[_]>, _>>()?;
        let g = GroundLiteral {
            pred: l.atom.pred,
            strong_neg: l.strong_neg,
            args,
        };
        match gp.lookup_literal(&g) {
            Some(id) => ids.push(id),
            // no rule instance can derive it
            None => {
                return Ok(format!(
                    "not an answer set: not minimal, {} is not derivable",
                    g.display(symbols)
                ))
            }
        }
    }
    let x = Interpretation::new(ids);
    Ok(match check(gp, &x) {
        Verdict::AnswerSet => "answer set".to_string(),
        Verdict::Inconsistent { literal } => format!(
            "not an answer set: inconsistent, contains {} and its complement",
            gp.display_literal(literal)
        ),
        Verdict::NotClosed { rule } => format!(
            "not an answer set: not closed, violates {}",
            gp.display_rule(&gp.rules()[rule])
        ),
        Verdict::NotMinimal { smaller } => format!(
            "not an answer set: not minimal, {} is also closed",
            print_answer_set(gp, &smaller, &[])
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(args: &[&str]) -> RunConfig {
        match parse_args(args).unwrap() {
            Command::Run(c) => c,
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn flags() {
        let c = config(&["-n=3", "-N=10", "-filter=p,q", "--stats", "a.lp", "b.lp"]);
        assert_eq!(c.max_answer_sets, 3);
        assert_eq!(c.max_int, Some(10));
        assert_eq!(c.filter, ["p", "q"]);
        assert!(c.stats && !c.unique);
        assert_eq!(c.inputs, [PathBuf::from("a.lp"), PathBuf::from("b.lp")]);
        assert_eq!(c.mode, Mode::Solve);
        assert_eq!(config(&["-brave", "x"]).mode, Mode::Brave);
        assert_eq!(config(&["--check", "x"]).mode, Mode::Check);
    }

    #[test]
    fn usage_errors() {
        assert!(parse_args(&["-brave", "-cautious", "x"]).is_err());
        assert!(parse_args(&["-n=x", "a"]).is_err());
        assert!(parse_args(&["--frobnicate", "a"]).is_err());
        assert!(parse_args::<&str>(&[]).is_err());
        assert!(matches!(parse_args(&["bench", "run"]), Ok(Command::Bench(_))));
        assert!(matches!(parse_args(&["--help"]), Ok(Command::Help)));
    }

    fn ground(src: &str) -> GroundProgram {
        let mut input = Input::new();
        input.add_source("t", src).unwrap();
        ground_program(&input.program).unwrap().program
    }

    #[test]
    fn answer_set_lines() {
        let gp = ground("b. a. -p(2). p(1). arc(a,b). inPath(a,b).");
        let all: Interpretation = (0..gp.num_literals() as u32).map(ddl_core::LitId).collect();
        assert_eq!(
            print_answer_set(&gp, &all, &[]),
            "{a, arc(a,b), b, inPath(a,b), p(1), -p(2)}"
        );
        assert_eq!(print_answer_set(&gp, &all, &["inPath".into()]), "{inPath(a,b)}");
        assert_eq!(print_answer_set(&gp, &Interpretation::default(), &[]), "{}");
    }

    #[test]
    fn integers_sort_before_symbols() {
        let gp = ground("p(b). p(10). p(a). p(9).");
        let all: Interpretation = (0..gp.num_literals() as u32).map(ddl_core::LitId).collect();
        assert_eq!(print_answer_set(&gp, &all, &[]), "{p(9), p(10), p(a), p(b)}");
    }
}
