//! Brave and cautious query answering over the answer sets of a program.
//!
//! A query is a conjunction of literals, each possibly under `not`. Query
//! variables are bound by joining the positive conjuncts with an answer
//! set; variables that only occur under `not` range over the Herbrand
//! universe of the program.

use rustc_hash::{FxHashMap, FxHashSet};

use crate::ground::GroundProgram;
use crate::grounder::{ground_program, GroundError};
use crate::model::{Interpretation, PredId, Program, Sym, SymbolTable, Term, Value};
use crate::parser::Query;
use crate::solver::{enumerate_answer_sets, EnumerationLimit, Stats};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Brave,
    Cautious,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryAnswer {
    pub mode: Mode,
    /// Query variables in order of first occurrence.
    pub variables: Vec<Sym>,
    /// Satisfying substitutions, one value per variable, sorted. A ground
    /// query that holds has the single empty substitution.
    pub substitutions: Vec<Box<[Value]>>,
    /// For a ground query, an answer set in which it holds (brave) or fails
    /// (cautious).
    pub witness: Option<Interpretation>,
    /// The program has no answer sets; a cautious `true` is vacuous.
    pub no_answer_sets: bool,
    pub stats: Stats,
}

impl QueryAnswer {
    pub fn holds(&self) -> bool {
        !self.substitutions.is_empty()
    }
}

pub fn brave(program: &Program, query: &Query) -> Result<QueryAnswer, GroundError> {
    let g = ground_program(program)?;
    Ok(answer(&g.program, &program.herbrand_universe(), query, Mode::Brave))
}

pub fn cautious(program: &Program, query: &Query) -> Result<QueryAnswer, GroundError> {
    let g = ground_program(program)?;
    Ok(answer(&g.program, &program.herbrand_universe(), query, Mode::Cautious))
}

/// Answers `query` over a ground program; `universe` is the range of
/// variables not bound by a positive conjunct.
pub fn answer(gp: &GroundProgram, universe: &[Value], query: &Query, mode: Mode) -> QueryAnswer {
    let eval = QueryEval::new(gp, universe, query);
    let mut sets = enumerate_answer_sets(gp, EnumerationLimit::ALL);
    let mut acc: Option<FxHashSet<Box<[Value]>>> = None;
    let mut witness = None;
    let mut seen_any = false;
    let ground = eval.vars.is_empty();
    for x in sets.by_ref() {
        seen_any = true;
        let subs: FxHashSet<Box<[Value]>> = eval.substitutions(&x).into_iter().collect();
        match mode {
            Mode::Brave => {
                let acc = acc.get_or_insert_with(FxHashSet::default);
                if ground && !subs.is_empty() {
                    witness = Some(x);
                    acc.extend(subs);
                    break;
                }
                acc.extend(subs);
            }
            Mode::Cautious => {
                let next = match acc.take() {
                    None => subs,
                    Some(prev) => prev.intersection(&subs).cloned().collect(),
                };
                let empty = next.is_empty();
                acc = Some(next);
                if empty {
                    if ground {
                        witness = Some(x);
                    }
                    break;
                }
            }
        }
    }
    let stats = sets.stats();
    let substitutions = match acc {
        Some(s) => s,
        None if mode == Mode::Cautious => eval.all_substitutions(),
        None => FxHashSet::default(),
    };
    let mut substitutions: Vec<Box<[Value]>> = substitutions.into_iter().collect();
    let symbols = gp.symbols();
    substitutions.sort_by(|a, b| symbols.compare_tuples(a, b));
    QueryAnswer {
        mode,
        variables: eval.vars,
        substitutions,
        witness,
        no_answer_sets: !seen_any,
        stats,
    }
}

struct QueryEval<'a> {
    gp: &'a GroundProgram,
    universe: &'a [Value],
    vars: Vec<Sym>,
    pos: Vec<QLit>,
    neg: Vec<QLit>,
}

struct QLit {
    pred: PredId,
    strong_neg: bool,
    args: Vec<QTerm>,
}

#[derive(Clone, Copy)]
enum QTerm {
    Var(usize),
    Const(Value),
}

impl<'a> QueryEval<'a> {
    fn new(gp: &'a GroundProgram, universe: &'a [Value], query: &Query) -> Self {
        let vars = query.variables();
        let conv = |c: &crate::parser::QueryLiteral| QLit {
            pred: c.literal.atom.pred,
            strong_neg: c.literal.strong_neg,
            args: c
                .literal
                .atom
                .args
                .iter()
                .map(|t| match t {
                    Term::Var(v) => QTerm::Var(vars.iter().position(|w| w == v).unwrap()),
                    Term::Const(c) => QTerm::Const(*c),
                })
                .collect(),
        };
        let pos = query.conjuncts.iter().filter(|c| !c.default_neg).map(conv).collect();
        let neg = query.conjuncts.iter().filter(|c| c.default_neg).map(conv).collect();
        Self {
            gp,
            universe,
            vars,
            pos,
            neg,
        }
    }

    fn substitutions(&self, x: &Interpretation) -> Vec<Box<[Value]>> {
        let mut by_key: FxHashMap<(PredId, bool), Vec<&[Value]>> = FxHashMap::default();
        for l in x.iter() {
            let g = self.gp.literal(l);
            by_key.entry((g.pred, g.strong_neg)).or_default().push(&g.args);
        }
        let mut out = Vec::new();
        let mut b: Vec<Option<Value>> = vec![None; self.vars.len()];
        self.join(0, &by_key, x, &mut b, &mut out);
        out
    }

    fn join(
        &self,
        i: usize,
        by_key: &FxHashMap<(PredId, bool), Vec<&[Value]>>,
        x: &Interpretation,
        b: &mut Vec<Option<Value>>,
        out: &mut Vec<Box<[Value]>>,
    ) {
        let Some(lit) = self.pos.get(i) else {
            self.fill(0, x, b, out);
            return;
        };
        let Some(tuples) = by_key.get(&(lit.pred, lit.strong_neg)) else {
            return;
        };
        for t in tuples {
            if t.len() != lit.args.len() {
                continue;
            }
            let saved = b.clone();
            let ok = lit.args.iter().zip(t.iter()).all(|(a, v)| match *a {
                QTerm::Const(c) => c == *v,
                QTerm::Var(k) => match b[k] {
                    Some(w) => w == *v,
                    None => {
                        b[k] = Some(*v);
                        true
                    }
                },
            });
            if ok {
                self.join(i + 1, by_key, x, b, out);
            }
            *b = saved;
        }
    }

    /// Binds the remaining variables over the universe, then checks the
    /// `not` conjuncts.
    fn fill(&self, k: usize, x: &Interpretation, b: &mut Vec<Option<Value>>, out: &mut Vec<Box<[Value]>>) {
        if k == b.len() {
            let vals: Box<[Value]> = b.iter().map(|v| v.unwrap()).collect();
            if self.neg.iter().all(|l| !self.holds(l, &vals, x)) {
                out.push(vals);
            }
            return;
        }
        if b[k].is_some() {
            return self.fill(k + 1, x, b, out);
        }
        for &u in self.universe {
            b[k] = Some(u);
            self.fill(k + 1, x, b, out);
        }
        b[k] = None;
    }

    fn holds(&self, l: &QLit, vals: &[Value], x: &Interpretation) -> bool {
        let args: Vec<Value> = l
            .args
            .iter()
            .map(|t| match *t {
                QTerm::Var(k) => vals[k],
                QTerm::Const(c) => c,
            })
            .collect();
        match self.gp.lookup(l.pred, l.strong_neg, &args) {
            Some(id) => x.contains(id),
            None => false,
        }
    }

    /// Every substitution satisfies a query over an empty family.
    fn all_substitutions(&self) -> FxHashSet<Box<[Value]>> {
        let mut out = FxHashSet::default();
        let n = self.vars.len();
        let u = self.universe.len();
        if n > 0 && u == 0 {
            return out;
        }
        let mut idx = vec![0usize; n];
        loop {
            out.insert(idx.iter().map(|&i| self.universe[i]).collect());
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < u {
                    break;
                }
                idx[k] = 0;
            }
        }
    }
}

/// `X=c1, Y=c2`, or `true` for the empty substitution.
pub fn format_substitution(symbols: &SymbolTable, vars: &[Sym], values: &[Value]) -> String {
    if vars.is_empty() {
        return "true".to_string();
    }
    vars.iter()
        .zip(values)
        .map(|(v, x)| format!("{}={}", symbols.name(*v), symbols.value(*x)))
        .collect::<Vec<_>>()
        .join(", ")
}
