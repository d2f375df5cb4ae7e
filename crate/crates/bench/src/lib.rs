//! Benchmark problems for the solver: encodings, seeded instance generators,
//! brute-force oracles and a small runner.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use ddl_core::{enumerate_answer_sets, ground_program, EnumerationLimit, GroundError, Input, LoadError};
use thiserror::Error;

pub mod encoding;
pub mod instance;
pub mod oracle;
pub mod rng;

pub use encoding::{encoding, solution_predicate};
pub use instance::{generate, Instance, InstanceSpec, Kind, Problem};
pub use oracle::{oracle, Solutions};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("instance too large for the oracle: {0}")]
    OracleCap(String),
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error(transparent)]
    Ground(#[from] GroundError),
}

/// Encoding, facts and any extra rules as one program text.
pub fn program_text(instance: &Instance, extra: &str) -> String {
    format!("{}{}{extra}", encoding(instance.kind()), instance.facts())
}

/// Answer sets of `text`, each projected onto the solution predicate of
/// `kind` and sorted. Projections are not deduplicated.
pub fn solve_projected(kind: Kind, text: &str, limit: EnumerationLimit) -> Result<Vec<Vec<String>>, BenchError> {
    let mut input = Input::new();
    input.add_source(kind.name(), text)?;
    let gp = ground_program(&input.program)?.program;
    let pred = solution_predicate(kind);
    let symbols = gp.symbols().clone();
    Ok(enumerate_answer_sets(&gp, limit)
        .map(|x| {
            let mut v: Vec<String> = x
                .iter()
                .filter(|&l| symbols.pred_name(gp.literal(l).pred) == pred)
                .map(|l| gp.display_literal(l).to_string())
                .collect();
            v.sort();
            v
        })
        .collect())
}

/// Whether `found` lists exactly the `expected` solutions, each once.
pub fn one_to_one(found: &[Vec<String>], expected: &Solutions) -> bool {
    let distinct: Solutions = found.iter().cloned().collect();
    distinct.len() == found.len() && &distinct == expected
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Enumerate every answer set and compare with the oracle.
    pub oracle: bool,
    /// Overrides the default number of answer sets to look for.
    pub limit: Option<EnumerationLimit>,
}

/// Answer sets a benchmark run looks for by default: one coloring or path,
/// every strategic set of the chosen company, every prime implicant.
pub fn default_limit(kind: Kind) -> EnumerationLimit {
    match kind {
        Kind::ThreeCol | Kind::Hpath => EnumerationLimit::at_most(1),
        Kind::Stratcomp | Kind::Prime => EnumerationLimit::ALL,
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub spec: InstanceSpec,
    pub answer_sets: usize,
    pub wall: Duration,
    /// Oracle agreement, when requested.
    pub oracle: Option<bool>,
}

/// Generates, grounds and solves one instance. The wall time covers
/// parsing, grounding and enumeration but not generation or the oracle.
pub fn run(spec: &InstanceSpec, options: RunOptions) -> Result<Report, BenchError> {
    let instance = generate(spec)?;
    let extra = instance.query_rules();
    let text = program_text(&instance, &extra);
    let limit = match (options.oracle, options.limit) {
        (true, _) => EnumerationLimit::ALL,
        (false, Some(l)) => l,
        (false, None) => default_limit(spec.kind()),
    };
    let start = Instant::now();
    let found = solve_projected(spec.kind(), &text, limit)?;
    let wall = start.elapsed();
    let oracle = if options.oracle {
        let mut expected = oracle(&instance)?;
        if let Instance::Stratcomp { chosen, .. } = &instance {
            let atom = format!("strat({})", instance::company(*chosen));
            expected.retain(|s| s.contains(&atom));
        }
        Some(one_to_one(&found, &expected))
    } else {
        None
    };
    Ok(Report {
        spec: *spec,
        answer_sets: found.len(),
        wall,
        oracle,
    })
}

fn oracle_word(r: &Report) -> &'static str {
    match r.oracle {
        None => "-",
        Some(true) => "agree",
        Some(false) => "MISMATCH",
    }
}

/// Aligned plain-text table of `reports`.
pub fn table(reports: &[Report]) -> String {
    let rows: Vec<[String; 4]> = reports
        .iter()
        .map(|r| {
            [
                r.spec.to_string(),
                r.answer_sets.to_string(),
                format!("{:.3}", r.wall.as_secs_f64()),
                oracle_word(r).to_string(),
            ]
        })
        .collect();
    let header = ["instance", "answer sets", "wall s", "oracle"].map(String::from);
    let mut width = header.clone().map(|h| h.len());
    for row in &rows {
        for (w, cell) in width.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let line = format!(
            "{:<w0$}  {:>w1$}  {:>w2$}  {}",
            row[0],
            row[1],
            row[2],
            row[3],
            w0 = width[0],
            w1 = width[1],
            w2 = width[2]
        );
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

/// One `key=value` line per report.
pub fn machine_lines(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        write!(out, "result kind={}", r.spec.kind()).unwrap();
        for (k, v) in r.spec.problem.params() {
            write!(out, " {k}={v}").unwrap();
        }
        writeln!(
            out,
            " seed={} answer_sets={} wall_ms={} oracle={}",
            r.spec.seed,
            r.answer_sets,
            r.wall.as_millis(),
            oracle_word(r)
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(oracle: Option<bool>) -> Report {
        Report {
            spec: InstanceSpec::new(Problem::Hpath { nodes: 4, arcs: 6 }, 1),
            answer_sets: 2,
            wall: Duration::from_millis(1500),
            oracle,
        }
    }

    #[test]
    fn table_is_aligned() {
        let t = table(&[report(Some(true)), report(None)]);
        let lines: Vec<&str> = t.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("instance"));
        assert!(lines[1].starts_with("hpath nodes=4 arcs=6 seed=1"));
        assert_eq!(lines[1].find("1.500"), lines[2].find("1.500"));
    }

    #[test]
    fn machine_line_format() {
        assert_eq!(
            machine_lines(&[report(Some(false))]),
            "result kind=hpath nodes=4 arcs=6 seed=1 answer_sets=2 wall_ms=1500 oracle=MISMATCH\n"
        );
    }

    #[test]
    fn one_to_one_rejects_repeats() {
        let s = |x: &str| vec![x.to_string()];
        let expected: Solutions = [s("a"), s("b")].into();
        assert!(one_to_one(&[s("b"), s("a")], &expected));
        assert!(!one_to_one(&[s("a"), s("a"), s("b")], &expected));
        assert!(!one_to_one(&[s("a")], &expected));
    }
}
