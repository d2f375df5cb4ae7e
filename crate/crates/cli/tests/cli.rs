#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::path::{Path, PathBuf};
use std::process::Command as Process;

use ddl_cli::{run, Mode, RunConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// (exit code, stdout, stderr)
fn ddl(args: &[&str], files: &[(&str, &str)]) -> (i32, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let mut argv: Vec<String> = args.iter().map(|s| s.to_string()).collect();
    for (name, text) in files {
        argv.push(write(dir.path(), name, text).display().to_string());
    }
    let out = Process::new(env!("CARGO_BIN_EXE_ddl")).args(&argv).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn in_process(config: &RunConfig) -> (i32, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(config, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap())
}

const TRIANGLE: &str = "node(a). node(b). node(c). arc(a,b). arc(b,c). arc(c,a). start(a).";

#[test]
fn disjunction_prints_two_answer_sets() {
    assert_eq!(ddl(&[], &[("p.lp", "a v b.")]), (0, "{a}\n{b}\n".into(), String::new()));
}

#[test]
fn hamiltonian_path_on_a_triangle() {
    let hpath = ddl_bench::encoding(ddl_bench::Kind::Hpath);
    let (code, out, _) = ddl(&["-filter=inPath"], &[("hp.lp", &hpath), ("tri.lp", TRIANGLE)]);
    assert_eq!((code, out.as_str()), (0, "{inPath(a,b), inPath(b,c)}\n"));
}

#[test]
fn unsafe_rule_exits_with_2() {
    let (code, out, err) = ddl(&[], &[("p.lp", "p(X) :- not q(X).")]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.contains("`X`") && err.contains("p.lp:1:"), "{err}");
}

#[test]
fn exit_codes() {
    assert_eq!(ddl(&[], &[("p.lp", "p(X :- q.")]).0, 1);
    assert_eq!(ddl(&[], &[("p.lp", "p(a). p(a,b).")]).0, 2);
    assert_eq!(ddl(&["/no/such/file.lp"], &[]).0, 3);
    assert_eq!(ddl(&["-brave", "-cautious"], &[("p.lp", "a.")]).0, 1);
    assert_eq!(ddl(&["-brave"], &[("p.lp", "a.")]).0, 1);
    // zero answer sets is still a success
    assert_eq!(ddl(&[], &[("p.lp", "a. :- a.")]), (0, String::new(), String::new()));
}

#[test]
fn files_are_read_in_order_as_one_program() {
    let (code, out, _) = ddl(&[], &[("a.lp", "p(a)."), ("b.lp", "q(X) :- p(X).")]);
    assert_eq!((code, out.as_str()), (0, "{p(a), q(a)}\n"));
}

#[test]
fn strong_negation_sorts_after_the_positive_literal() {
    let (_, out, _) = ddl(&[], &[("p.lp", "-p(2). p(1). b. a.")]);
    assert_eq!(out, "{a, b, p(1), -p(2)}\n");
}

#[test]
fn max_int_flag() {
    let (_, out, _) = ddl(&["-N=3"], &[("p.lp", "n(X) :- #int(X), X > 1.")]);
    assert_eq!(out, "{n(2), n(3)}\n");
}

#[test]
fn query_modes() {
    let sc = ddl_bench::encoding(ddl_bench::Kind::Stratcomp);
    let facts = "produced_by(p1,c1,c2). strat(X)?";
    assert_eq!(ddl(&["-brave"], &[("s.lp", &sc), ("f.lp", facts)]).1, "X=c1\nX=c2\n");
    assert_eq!(ddl(&["-cautious"], &[("s.lp", &sc), ("f.lp", facts)]).1, "false\n");
    assert_eq!(ddl(&["-brave"], &[("p.lp", "a v b. a?")]).1, "true\n");
    assert_eq!(ddl(&["-cautious"], &[("p.lp", "a v b. a?")]).1, "false\n");
    assert_eq!(ddl(&["-cautious"], &[("p.lp", "a. -a. b?")]).1, "% no answer sets\ntrue\n");
}

#[test]
fn check_mode_names_the_failed_condition() {
    let run = |src: &str| ddl(&["--check"], &[("p.lp", src)]).1;
    assert_eq!(run("a v b. {a}"), "answer set\n");
    assert_eq!(run("a v b. {a, b}"), "not an answer set: not minimal, {b} is also closed\n");
    assert_eq!(run("a :- b. b v c. {b}"), "not an answer set: not closed, violates a :- b.\n");
    assert!(run("a v -a. {a, -a}").starts_with("not an answer set: inconsistent"));
    assert!(run("a v b. {c}").starts_with("not an answer set: not minimal, c"));
}

#[test]
fn ground_only_prints_the_ground_program() {
    let (code, out, _) = ddl(&["--ground-only"], &[("p.lp", "e(a,b). r(X) :- e(X,Y), not s(Y).")]);
    assert_eq!((code, out.as_str()), (0, "e(a,b).\nr(a).\n"));
}

#[test]
fn unique_collapses_equal_projections() {
    let src = "a v b. c.";
    assert_eq!(ddl(&["-filter=c"], &[("p.lp", src)]).1, "{c}\n{c}\n");
    assert_eq!(ddl(&["-filter=c", "--unique"], &[("p.lp", src)]).1, "{c}\n");
}

#[test]
fn stats_go_to_the_error_stream() {
    let (_, out, err) = ddl(&["--stats"], &[("p.lp", "a v b.")]);
    assert_eq!(out, "{a}\n{b}\n");
    assert!(err.contains("answer sets: 2"), "{err}");
}

#[test]
fn bench_subcommand() {
    let (code, out, _) = ddl(&["bench", "run", "hpath", "--params", "nodes=5,arcs=12", "--runs", "2", "--oracle"], &[]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("instance") && lines[0].contains("answer sets") && lines[0].contains("wall"));
    assert!(lines[1].starts_with("hpath nodes=5 arcs=12 seed=1"));
    assert!(lines[4].starts_with("result kind=hpath nodes=5 arcs=12 seed=1 answer_sets="));
    assert!(lines[4].ends_with("oracle=agree"));
    let (code, facts, _) = ddl(&["bench", "generate", "hpath", "--params", "nodes=4,arcs=6"], &[]);
    assert_eq!(code, 0);
    assert_eq!(facts.lines().count(), 11);
    let (code, _, err) = ddl(&["bench", "run", "3col", "--params", "nodes=3,edges=4"], &[]);
    assert_eq!(code, 1);
    assert!(err.contains("infeasible"));
    assert_eq!(ddl(&["bench", "encoding", "3col"], &[]).1, ddl_bench::encoding::THREE_COL);
}

fn random_program(seed: u64) -> String {
    common::random_program_source(&mut ChaCha8Rng::seed_from_u64(seed), false)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn limited_output_is_a_prefix(seed in any::<u64>(), k in 1usize..4) {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.lp", &random_program(seed));
        let mut config = RunConfig { inputs: vec![p], ..RunConfig::default() };
        let (code, all) = in_process(&config);
        prop_assert_eq!(code, 0);
        config.max_answer_sets = k;
        let (_, first) = in_process(&config);
        let want: String = all.lines().take(k).map(|l| format!("{l}\n")).collect();
        prop_assert_eq!(first, want);
    }

    #[test]
    fn filtering_keeps_the_number_of_answer_sets(seed in any::<u64>(), pred in 0usize..3) {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.lp", &random_program(seed));
        let mut config = RunConfig { inputs: vec![p], ..RunConfig::default() };
        let (_, all) = in_process(&config);
        config.filter = vec![["p", "q", "r"][pred].to_string()];
        let (_, filtered) = in_process(&config);
        prop_assert_eq!(all.lines().count(), filtered.lines().count());
    }

    #[test]
    fn output_is_deterministic(seed in any::<u64>()) {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "p.lp", &random_program(seed));
        for mode in [Mode::Solve, Mode::GroundOnly] {
            let config = RunConfig { inputs: vec![p.clone()], mode, ..RunConfig::default() };
            prop_assert_eq!(in_process(&config), in_process(&config));
        }
    }
}
