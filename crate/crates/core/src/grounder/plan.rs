//! Compiled rules and nested-loop join plans.

use crate::model::{BuiltinKind, CmpOp, Rule, Sym, SymbolTable, Term, Value};

use super::{rel_key, Store};

#[derive(Clone, Copy, Debug)]
pub(crate) enum CTerm {
    Var(u32),
    Const(Value),
}

impl CTerm {
    #[inline]
    fn get(self, b: &[Value]) -> Value {
        match self {
            CTerm::Var(s) => b[s as usize],
            CTerm::Const(v) => v,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CLit {
    pub key: usize,
    pub args: Vec<CTerm>,
}

impl CLit {
    pub fn instantiate(&self, b: &[Value]) -> Vec<Value> {
        self.args.iter().map(|t| t.get(b)).collect()
    }

    pub fn instantiate_into(&self, b: &[Value], out: &mut Vec<Value>) {
        out.clear();
        out.extend(self.args.iter().map(|t| t.get(b)));
    }
}

#[derive(Clone, Debug)]
pub(crate) struct CBuiltin {
    kind: BuiltinKind,
    args: Vec<CTerm>,
}

#[derive(Clone, Debug)]
pub(crate) struct CRule {
    pub head: Vec<CLit>,
    pub pos: Vec<CLit>,
    pub neg: Vec<CLit>,
    builtins: Vec<CBuiltin>,
    pub nvars: usize,
}

#[derive(Clone, Copy, Debug)]
enum Arg {
    /// Part of the index key.
    Key,
    Assign(u32),
    /// Must equal an already known value.
    Same(CTerm),
}

#[derive(Clone, Debug)]
enum Step {
    Lit {
        pos: usize,
        mask: u64,
        args: Vec<Arg>,
    },
    Check(usize),
    /// Compute the output argument of `#succ` or arithmetic.
    Assign(usize, u32),
    /// `#int(X)` with `X` unbound.
    Enumerate(u32),
}

#[derive(Clone, Debug)]
pub(crate) struct Plan {
    steps: Vec<Step>,
}

pub(crate) type Range = (usize, usize);

#[derive(Default)]
pub(crate) struct SearchStats {
    pub overflow: u64,
}

impl CRule {
    pub fn compile(rule: &Rule) -> CRule {
        let mut vars: Vec<Sym> = Vec::new();
        let mut term = |t: &Term| match *t {
            Term::Const(v) => CTerm::Const(v),
            Term::Var(s) => {
                let i = match vars.iter().position(|v| *v == s) {
                    Some(i) => i,
                    None => {
                        vars.push(s);
                        vars.len() - 1
                    }
                };
                CTerm::Var(i as u32)
            }
        };
        let lits = |ls: &[crate::model::Literal], term: &mut dyn FnMut(&Term) -> CTerm| {
            ls.iter()
                .map(|l| CLit {
                    key: rel_key(l.atom.pred, l.strong_neg),
                    args: l.atom.args.iter().map(&mut *term).collect(),
                })
                .collect::<Vec<_>>()
        };
        let pos = lits(&rule.pos_body, &mut term);
        let builtins = rule
            .builtins
            .iter()
            .map(|b| CBuiltin {
                kind: b.kind,
                args: b.args.iter().map(&mut term).collect(),
            })
            .collect();
        let neg = lits(&rule.neg_body, &mut term);
        let head = lits(&rule.head, &mut term);
        drop(term);
        CRule {
            head,
            pos,
            neg,
            builtins,
            nvars: vars.len(),
        }
    }

    /// Orders the body for evaluation. `delta` is joined first.
    pub fn plan(&self, delta: Option<usize>) -> Plan {
        let mut bound = vec![false; self.nvars];
        let mut lit_done = vec![false; self.pos.len()];
        let mut bi_done = vec![false; self.builtins.len()];
        let mut steps = Vec::new();
        let is_bound = |t: &CTerm, bound: &[bool]| match t {
            CTerm::Const(_) => true,
            CTerm::Var(s) => bound[*s as usize],
        };

        loop {
            // built-ins that can be evaluated now
            let mut progress = true;
            while progress {
                progress = false;
                for (i, b) in self.builtins.iter().enumerate() {
                    if bi_done[i] {
                        continue;
                    }
                    if b.args.iter().all(|t| is_bound(t, &bound)) {
                        steps.push(Step::Check(i));
                    } else {
                        let out = match b.kind {
                            BuiltinKind::Succ if is_bound(&b.args[0], &bound) => b.args[1],
                            BuiltinKind::Plus | BuiltinKind::Times
                                if is_bound(&b.args[0], &bound) && is_bound(&b.args[1], &bound) =>
                            {
                                b.args[2]
                            }
                            _ => continue,
                        };
                        let CTerm::Var(s) = out else { unreachable!() };
                        steps.push(Step::Assign(i, s));
                        bound[s as usize] = true;
                    }
                    bi_done[i] = true;
                    progress = true;
                }
            }

            let next = match delta.filter(|d| !lit_done[*d]) {
                Some(d) => Some(d),
                None => (0..self.pos.len()).filter(|i| !lit_done[*i]).max_by_key(|&i| {
                    let n = self.pos[i].args.iter().filter(|t| is_bound(t, &bound)).count();
                    (n, std::cmp::Reverse(i))
                }),
            };
            if let Some(i) = next {
                lit_done[i] = true;
                let mut mask = 0u64;
                let mut args = Vec::with_capacity(self.pos[i].args.len());
                let before = bound.clone();
                for (j, t) in self.pos[i].args.iter().enumerate() {
                    if is_bound(t, &before) && j < 64 {
                        mask |= 1 << j;
                        args.push(Arg::Key);
                    } else {
                        match *t {
                            CTerm::Var(s) if !bound[s as usize] => {
                                bound[s as usize] = true;
                                args.push(Arg::Assign(s));
                            }
                            t => args.push(Arg::Same(t)),
                        }
                    }
                }
                steps.push(Step::Lit { pos: i, mask, args });
                continue;
            }

            let int = self.builtins.iter().enumerate().find(|(i, b)| {
                !bi_done[*i] && b.kind == BuiltinKind::Int && !is_bound(&b.args[0], &bound)
            });
            match int {
                Some((i, b)) => {
                    let CTerm::Var(s) = b.args[0] else { unreachable!() };
                    bi_done[i] = true;
                    bound[s as usize] = true;
                    steps.push(Step::Enumerate(s));
                }
                None => break,
            }
        }
        debug_assert!(bi_done.iter().all(|d| *d), "rule was not safe");
        Plan { steps }
    }
}

/// Runs `plan` and returns the satisfying bindings, flattened with
/// `max(nvars, 1)` values per binding. `ranges` restricts the tuple
/// positions each positive literal may match.
pub(crate) fn run(
    store: &mut Store,
    symbols: &SymbolTable,
    max_int: u64,
    rule: &CRule,
    plan: &Plan,
    ranges: &[Range],
    stats: &mut SearchStats,
) -> Vec<Value> {
    for s in &plan.steps {
        if let Step::Lit { pos, mask, .. } = s {
            if *mask != 0 {
                store.ensure_index(rule.pos[*pos].key, *mask);
            }
        }
    }
    if ranges.iter().any(|(lo, hi)| lo >= hi) {
        return Vec::new();
    }
    let mut cx = Search {
        store,
        symbols,
        max_int,
        rule,
        plan,
        ranges,
        stats,
        out: Vec::new(),
        keys: vec![Vec::new(); plan.steps.len()],
    };
    let mut b = vec![Value::Int(0); rule.nvars.max(1)];
    cx.step(0, &mut b);
    cx.out
}

struct Search<'a> {
    store: &'a Store,
    symbols: &'a SymbolTable,
    max_int: u64,
    rule: &'a CRule,
    plan: &'a Plan,
    ranges: &'a [Range],
    stats: &'a mut SearchStats,
    out: Vec<Value>,
    keys: Vec<Vec<Value>>,
}

impl Search<'_> {
    fn step(&mut self, i: usize, b: &mut [Value]) {
        let Some(step) = self.plan.steps.get(i) else {
            self.out.extend_from_slice(b);
            return;
        };
        match step {
            Step::Check(k) => {
                if self.holds(&self.rule.builtins[*k], b) {
                    self.step(i + 1, b);
                }
            }
            Step::Assign(k, s) => {
                let bi = &self.rule.builtins[*k];
                let x = bi.args[0].get(b);
                let r = match bi.kind {
                    BuiltinKind::Succ => int(x).map(|x| x.checked_add(1)),
                    BuiltinKind::Plus => int(x)
                        .zip(int(bi.args[1].get(b)))
                        .map(|(x, y)| x.checked_add(y)),
                    BuiltinKind::Times => int(x)
                        .zip(int(bi.args[1].get(b)))
                        .map(|(x, y)| x.checked_mul(y)),
                    _ => unreachable!(),
                };
                match r {
                    None => {}
                    Some(Some(v)) if v <= self.max_int => {
                        b[*s as usize] = Value::Int(v);
                        self.step(i + 1, b);
                    }
                    Some(_) => self.stats.overflow += 1,
                }
            }
            Step::Enumerate(s) => {
                for v in 0..=self.max_int {
                    b[*s as usize] = Value::Int(v);
                    self.step(i + 1, b);
                }
            }
            Step::Lit { pos, mask, args } => {
                let lit = &self.rule.pos[*pos];
                let (lo, hi) = self.ranges[*pos];
                let store = self.store;
                let tuples = &store.rels[lit.key].tuples;
                if *mask == 0 {
                    for &id in &tuples[lo..hi] {
                        self.bind(i, args, &store.lits[id.index()].args, b);
                    }
                    return;
                }
                let mut key = std::mem::take(&mut self.keys[i]);
                key.clear();
                for (j, t) in lit.args.iter().enumerate() {
                    if mask & (1 << j) != 0 {
                        key.push(t.get(b));
                    }
                }
                if let Some(list) = store.index(lit.key, *mask).map.get(key.as_slice()) {
                    let a = list.partition_point(|&p| (p as usize) < lo);
                    let z = list.partition_point(|&p| (p as usize) < hi);
                    for &p in &list[a..z] {
                        let id = tuples[p as usize];
                        self.bind(i, args, &store.lits[id.index()].args, b);
                    }
                }
                self.keys[i] = key;
            }
        }
    }

    #[inline]
    fn bind(&mut self, i: usize, args: &[Arg], tuple: &[Value], b: &mut [Value]) {
        for (a, v) in args.iter().zip(tuple) {
            match *a {
                Arg::Key => {}
                Arg::Assign(s) => b[s as usize] = *v,
                Arg::Same(t) => {
                    if t.get(b) != *v {
                        return;
                    }
                }
            }
        }
        self.step(i + 1, b);
    }

    fn holds(&self, bi: &CBuiltin, b: &[Value]) -> bool {
        let a = |k: usize| bi.args[k].get(b);
        match bi.kind {
            BuiltinKind::Int => matches!(a(0), Value::Int(n) if n <= self.max_int),
            BuiltinKind::Succ => match (a(0), a(1)) {
                (Value::Int(x), Value::Int(y)) => x.checked_add(1) == Some(y),
                _ => false,
            },
            BuiltinKind::Plus => match (a(0), a(1), a(2)) {
                (Value::Int(x), Value::Int(y), Value::Int(z)) => x.checked_add(y) == Some(z),
                _ => false,
            },
            BuiltinKind::Times => match (a(0), a(1), a(2)) {
                (Value::Int(x), Value::Int(y), Value::Int(z)) => x.checked_mul(y) == Some(z),
                _ => false,
            },
            BuiltinKind::Cmp(op) => cmp(self.symbols, op, a(0), a(1)),
        }
    }
}

#[inline]
fn int(v: Value) -> Option<u64> {
    match v {
        Value::Int(n) => Some(n),
        Value::Sym(_) => None,
    }
}

#[inline]
fn cmp(symbols: &SymbolTable, op: CmpOp, x: Value, y: Value) -> bool {
    op.holds(symbols.compare(x, y))
}
