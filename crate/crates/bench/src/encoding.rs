//! Guess&Check encodings of the benchmark problems.
//!
//! HPATH and STRATCOMP are the classic programs for Hamiltonian paths and
//! strategic companies. 3COL and PRIME are written for this repository:
//!
//! * 3COL guesses one of three colors per node and forbids equal colors on
//!   the endpoints of an edge.
//! * PRIME stores a clause with `k` positive literals as `ck(A,B,C)`, the
//!   positive variables first. `imp(v)` puts `v` into the implicant and
//!   `-imp(v)` puts its negation there. Each clause must contain a chosen
//!   literal, and answer-set minimality leaves exactly the prime
//!   implicants. Strong negation rules out choosing both `v` and `not v`.

use crate::Kind;

pub const HPATH: &str = "\
inPath(X,Y) v outPath(X,Y) :- arc(X,Y).
:- inPath(X,Y), inPath(X,Y1), Y <> Y1.
:- inPath(X,Y), inPath(X1,Y), X <> X1.
:- node(X), not reached(X).
reached(X) :- start(X).
reached(X) :- reached(Y), inPath(Y,X).
";

/// Removes the arc back into the start node, so that answer sets are paths
/// rather than cycles.
pub const HPATH_STRIP: &str = ":- start(Y), inPath(_,Y).\n";

pub const STRATCOMP: &str = "\
strat(Y) v strat(Z) :- produced_by(X,Y,Z).
strat(W) :- controlled_by(W,X,Y,Z), strat(X), strat(Y), strat(Z).
";

pub const THREE_COL: &str = "\
col(X,r) v col(X,g) v col(X,b) :- node(X).
:- edge(X,Y), col(X,C), col(Y,C).
";

pub const PRIME: &str = "\
imp(X) v imp(Y) v imp(Z) :- c3(X,Y,Z).
imp(X) v imp(Y) v -imp(Z) :- c2(X,Y,Z).
imp(X) v -imp(Y) v -imp(Z) :- c1(X,Y,Z).
-imp(X) v -imp(Y) v -imp(Z) :- c0(X,Y,Z).
";

/// The program text for `kind`. HPATH includes the path-stripping
/// constraint.
pub fn encoding(kind: Kind) -> String {
    match kind {
        Kind::ThreeCol => THREE_COL.to_string(),
        Kind::Hpath => format!("{HPATH}{HPATH_STRIP}"),
        Kind::Stratcomp => STRATCOMP.to_string(),
        Kind::Prime => PRIME.to_string(),
    }
}

/// Predicate an answer set is projected onto when compared with a solution.
pub fn solution_predicate(kind: Kind) -> &'static str {
    match kind {
        Kind::ThreeCol => "col",
        Kind::Hpath => "inPath",
        Kind::Stratcomp => "strat",
        Kind::Prime => "imp",
    }
}
