//! Test-only oracles and random program generators.
//!
//! Nothing here calls the checker, solver or grounder: answer sets are
//! found by trying every subset of the literal table, and full grounding
//! instantiates every rule over the whole Herbrand universe.

#![allow(dead_code)]

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashSet};

use ddl_core::ground::GroundProgramBuilder;
use ddl_core::model::{BuiltinKind, CmpOp, GroundLiteral, Literal, Program, Term, Value};
use ddl_core::{GroundProgram, Interpretation, LitId, Query};
use rand::{Rng, RngCore};

/// A ground program over `atoms` propositional atoms. Every literal `pi`
/// and `-pi` is in the table, so the table is the whole Herbrand base.
pub fn random_ground_program(rng: &mut dyn RngCore, max_atoms: usize, max_rules: usize) -> GroundProgram {
    let atoms = rng.random_range(1..=max_atoms);
    let mut b = GroundProgramBuilder::new();
    let lits: Vec<LitId> = (0..atoms)
        .flat_map(|i| [format!("p{i}"), format!("-p{i}")])
        .map(|s| b.prop(&s))
        .collect();
    // bias towards positive literals so that strong negation stays occasional
    let pick = |rng: &mut dyn RngCore| {
        let i = rng.random_range(0..atoms);
        let neg = rng.random_range(0..4) == 0;
        lits[2 * i + neg as usize]
    };
    let rules = rng.random_range(0..=max_rules);
    for _ in 0..rules {
        let nh = match rng.random_range(0..10) {
            0 => 0,
            1..=5 => 1,
            6..=8 => 2,
            _ => 3,
        };
        let np = rng.random_range(0..=2);
        let nn = rng.random_range(0..=2);
        let head: Vec<LitId> = (0..nh).map(|_| pick(rng)).collect();
        let pos: Vec<LitId> = (0..np).map(|_| pick(rng)).collect();
        let neg: Vec<LitId> = (0..nn).map(|_| pick(rng)).collect();
        b.rule(&head, &pos, &neg);
    }
    b.build()
}

struct MaskRule {
    head: u32,
    pos: u32,
    neg: u32,
}

fn mask(ids: &[LitId]) -> u32 {
    ids.iter().fold(0, |m, l| m | 1 << l.0)
}

/// Every answer set of `gp`, found by testing each subset of the literal
/// table against the definition. Limited to 20 literals.
pub fn brute_force_answer_sets(gp: &GroundProgram) -> BTreeSet<Vec<LitId>> {
    let n = gp.num_literals();
    assert!(n <= 20, "too many literals for brute force");
    let rules: Vec<MaskRule> = gp
        .rules()
        .iter()
        .map(|r| MaskRule {
            head: mask(r.head()),
            pos: mask(r.pos()),
            neg: mask(r.neg()),
        })
        .collect();
    let lits = gp.literals();
    let mut complement_pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&lits[i], &lits[j]);
            if a.pred == b.pred && a.args == b.args && a.strong_neg != b.strong_neg {
                complement_pairs.push((1u32 << i) | (1u32 << j));
            }
        }
    }
    let closed = |y: u32, reduct: &[&MaskRule]| {
        reduct
            .iter()
            .all(|r| r.pos & !y != 0 || r.head & y != 0)
    };
    let mut out = BTreeSet::new();
    for x in 0u32..(1u32 << n) {
        if complement_pairs.iter().any(|p| x & p == *p) {
            continue;
        }
        let reduct: Vec<&MaskRule> = rules.iter().filter(|r| r.neg & x == 0).collect();
        if !closed(x, &reduct) {
            continue;
        }
        // proper subsets of x
        let mut minimal = true;
        let mut y = x;
        while y != 0 {
            y = (y - 1) & x;
            if closed(y, &reduct) {
                minimal = false;
                break;
            }
        }
        if minimal {
            out.insert((0..n as u32).filter(|i| x & (1 << i) != 0).map(LitId).collect());
        }
    }
    out
}

pub fn as_set(sets: impl IntoIterator<Item = Interpretation>) -> BTreeSet<Vec<LitId>> {
    sets.into_iter().map(|x| x.as_slice().to_vec()).collect()
}

/// Answer sets rendered as sorted literal strings, comparable across
/// different groundings of one program.
pub fn rendered(gp: &GroundProgram, sets: impl IntoIterator<Item = Vec<LitId>>) -> BTreeSet<Vec<String>> {
    sets.into_iter()
        .map(|x| {
            let mut v: Vec<String> = x.iter().map(|l| gp.display_literal(*l).to_string()).collect();
            v.sort();
            v
        })
        .collect()
}

fn order(p: &Program, a: Value, b: Value) -> Ordering {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => x.cmp(&y),
        (Value::Int(_), Value::Sym(_)) => Ordering::Less,
        (Value::Sym(_), Value::Int(_)) => Ordering::Greater,
        (Value::Sym(x), Value::Sym(y)) => p.symbols.name(x).as_bytes().cmp(p.symbols.name(y).as_bytes()),
    }
}

fn builtin_holds(p: &Program, kind: BuiltinKind, v: &[Value]) -> bool {
    let int = |x: Value| match x {
        Value::Int(n) => Some(n),
        Value::Sym(_) => None,
    };
    let in_range = |n: u64| n <= p.max_int;
    match kind {
        BuiltinKind::Int => int(v[0]).is_some_and(in_range),
        BuiltinKind::Succ => match (int(v[0]), int(v[1])) {
            (Some(x), Some(y)) => in_range(y) && x + 1 == y,
            _ => false,
        },
        BuiltinKind::Plus => match (int(v[0]), int(v[1]), int(v[2])) {
            (Some(x), Some(y), Some(z)) => in_range(z) && x.checked_add(y) == Some(z),
            _ => false,
        },
        BuiltinKind::Times => match (int(v[0]), int(v[1]), int(v[2])) {
            (Some(x), Some(y), Some(z)) => in_range(z) && x.checked_mul(y) == Some(z),
            _ => false,
        },
        BuiltinKind::Cmp(op) => {
            let o = order(p, v[0], v[1]);
            match op {
                CmpOp::Lt => o == Ordering::Less,
                CmpOp::Le => o != Ordering::Greater,
                CmpOp::Gt => o == Ordering::Greater,
                CmpOp::Ge => o != Ordering::Less,
                CmpOp::Eq => o == Ordering::Equal,
                CmpOp::Ne => o != Ordering::Equal,
            }
        }
    }
}

/// Ground(P): every rule instantiated over the whole Herbrand universe,
/// keeping the instances whose built-ins hold. No simplification.
pub fn naive_ground(p: &Program) -> GroundProgram {
    let universe = p.herbrand_universe();
    let mut b = GroundProgramBuilder::with_symbols((*p.symbols).clone());
    for r in &p.rules {
        let vars = r.variables();
        let total = universe.len().pow(vars.len() as u32);
        for n in 0..total {
            let mut idx = vec![0usize; vars.len()];
            let mut rest = n;
            for k in idx.iter_mut() {
                *k = rest % universe.len();
                rest /= universe.len();
            }
            let val = |t: &Term| match t {
                Term::Const(c) => *c,
                Term::Var(v) => universe[idx[vars.iter().position(|w| w == v).unwrap()]],
            };
            let ok = r
                .builtins
                .iter()
                .all(|bi| builtin_holds(p, bi.kind, &bi.args.iter().map(val).collect::<Vec<_>>()));
            if !ok {
                continue;
            }
            let mut inst = |ls: &[Literal]| -> Vec<LitId> {
                ls.iter()
                    .map(|l| {
                        b.literal(GroundLiteral {
                            pred: l.atom.pred,
                            strong_neg: l.strong_neg,
                            args: l.atom.args.iter().map(val).collect(),
                        })
                    })
                    .collect()
            };
            let head = inst(&r.head);
            let pos = inst(&r.pos_body);
            let neg = inst(&r.neg_body);
            b.rule(&head, &pos, &neg);
        }
    }
    b.build()
}

/// Source text of a random safe program over unary `p`, `q`, binary `r`,
/// constants `a`, `b` and (when `ints`) the integers up to `max_int`.
pub fn random_program_source(rng: &mut dyn RngCore, ints: bool) -> String {
    let mut consts: Vec<String> = vec!["a".into(), "b".into()];
    if ints {
        consts.push("0".into());
        consts.push("1".into());
    }
    let preds = [("p", 1), ("q", 1), ("r", 2)];
    let mut out = String::new();
    let facts = rng.random_range(1..=4);
    for _ in 0..facts {
        let (name, ar) = preds[rng.random_range(0..preds.len())];
        let args: Vec<String> = (0..ar).map(|_| consts[rng.random_range(0..consts.len())].clone()).collect();
        out.push_str(&atom(name, &args));
        out.push_str(".\n");
    }
    let rules = rng.random_range(1..=5);
    for _ in 0..rules {
        let vars = ["X", "Y"];
        let mut bound: Vec<&str> = Vec::new();
        let mut body: Vec<String> = Vec::new();
        for _ in 0..rng.random_range(1..=2) {
            let (name, ar) = preds[rng.random_range(0..preds.len())];
            let args: Vec<String> = (0..ar)
                .map(|_| {
                    if rng.random_range(0..4) == 0 {
                        consts[rng.random_range(0..consts.len())].clone()
                    } else {
                        let v = vars[rng.random_range(0..2)];
                        if !bound.contains(&v) {
                            bound.push(v);
                        }
                        v.to_string()
                    }
                })
                .collect();
            let neg = if rng.random_range(0..5) == 0 { "-" } else { "" };
            body.push(format!("{neg}{}", atom(name, &args)));
        }
        let term = |rng: &mut dyn RngCore| -> String {
            if bound.is_empty() || rng.random_range(0..3) == 0 {
                consts[rng.random_range(0..consts.len())].clone()
            } else {
                bound[rng.random_range(0..bound.len())].to_string()
            }
        };
        if rng.random_range(0..3) == 0 {
            let (name, ar) = preds[rng.random_range(0..preds.len())];
            let args: Vec<String> = (0..ar).map(|_| term(rng)).collect();
            body.push(format!("not {}", atom(name, &args)));
        }
        if bound.len() == 2 && rng.random_range(0..3) == 0 {
            let op = ["<", "!=", "="][rng.random_range(0..3)];
            body.push(format!("X {op} Y"));
        }
        let heads = match rng.random_range(0..8) {
            0 => 0,
            1..=4 => 1,
            _ => 2,
        };
        let head: Vec<String> = (0..heads)
            .map(|_| {
                let (name, ar) = preds[rng.random_range(0..preds.len())];
                let args: Vec<String> = (0..ar).map(|_| term(rng)).collect();
                let neg = if rng.random_range(0..6) == 0 { "-" } else { "" };
                format!("{neg}{}", atom(name, &args))
            })
            .collect();
        out.push_str(&head.join(" v "));
        out.push_str(if head.is_empty() { ":- " } else { " :- " });
        out.push_str(&body.join(", "));
        out.push_str(".\n");
    }
    out
}

fn atom(name: &str, args: &[String]) -> String {
    if args.is_empty() {
        name.to_string()
    } else {
        format!("{name}({})", args.join(","))
    }
}

/// A random query over the predicates of [`random_program_source`].
pub fn random_query(rng: &mut dyn RngCore) -> String {
    let terms = ["X", "Y", "a", "b"];
    let mut conj = Vec::new();
    for i in 0..rng.random_range(1..=2) {
        let (name, ar) = [("p", 1), ("q", 1), ("r", 2)][rng.random_range(0..3)];
        let args: Vec<&str> = (0..ar).map(|_| terms[rng.random_range(0..4)]).collect();
        let not = if i > 0 && rng.random_range(0..3) == 0 { "not " } else { "" };
        let neg = if rng.random_range(0..6) == 0 { "-" } else { "" };
        conj.push(format!("{not}{neg}{name}({})", args.join(",")));
    }
    format!("{}?", conj.join(", "))
}

/// Substitutions satisfying `query` in `x`, by trying every assignment
/// of the query variables over `universe`.
pub fn satisfying(
    gp: &ddl_core::GroundProgram,
    universe: &[Value],
    query: &Query,
    x: &Interpretation,
) -> HashSet<Vec<Value>> {
    use ddl_core::model::Term;
    let vars = query.variables();
    let total = universe.len().pow(vars.len() as u32);
    let mut out = HashSet::new();
    for n in 0..total {
        let mut rest = n;
        let vals: Vec<Value> = vars
            .iter()
            .map(|_| {
                let v = universe[rest % universe.len()];
                rest /= universe.len();
                v
            })
            .collect();
        let holds = query.conjuncts.iter().all(|c| {
            let args: Vec<Value> = c
                .literal
                .atom
                .args
                .iter()
                .map(|t| match t {
                    Term::Const(v) => *v,
                    Term::Var(s) => vals[vars.iter().position(|w| w == s).unwrap()],
                })
                .collect();
            let present = gp
                .lookup(c.literal.atom.pred, c.literal.strong_neg, &args)
                .is_some_and(|id| x.contains(id));
            present != c.default_neg
        });
        if holds {
            out.insert(vals);
        }
    }
    out
}

pub fn all_tuples(universe: &[Value], k: usize) -> Vec<Vec<Value>> {
    let total = universe.len().pow(k as u32);
    (0..total)
        .map(|mut n| {
            (0..k)
                .map(|_| {
                    let v = universe[n % universe.len()];
                    n /= universe.len();
                    v
                })
                .collect()
        })
        .collect()
}
