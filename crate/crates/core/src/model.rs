//! Terms, literals, rules and programs.
//!
//! Names (predicates, constant symbols, variables) are interned into a
//! [`SymbolTable`] at parse time; everything downstream works on the dense
//! ids. Constants are ordered as follows: integers by value, every integer
//! below every symbol, symbols by the byte order of their spelling.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;

use crate::parser::SourceSpan;

/// An interned name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sym(pub u32);

/// Dense predicate id; a predicate name has exactly one arity per program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredId(pub u32);

impl PredId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predicate {
    pub name: Sym,
    pub arity: usize,
}

/// A ground constant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Int(u64),
    Sym(Sym),
}

/// Prefix of generated names for anonymous variables; never produced by the lexer.
pub(crate) const ANON_PREFIX: &str = "_#";

#[derive(Clone, Debug, Default)]
pub struct SymbolTable {
    names: Vec<Box<str>>,
    index: FxHashMap<Box<str>, Sym>,
    preds: Vec<Predicate>,
    pred_index: FxHashMap<Sym, PredId>,
    anon: u32,
}

impl SymbolTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> Sym {
        if let Some(&s) = self.index.get(name) {
            return s;
        }
        let s = Sym(self.names.len() as u32);
        self.names.push(name.into());
        self.index.insert(name.into(), s);
        s
    }

    pub fn lookup(&self, name: &str) -> Option<Sym> {
        self.index.get(name).copied()
    }

    pub fn name(&self, s: Sym) -> &str {
        &self.names[s.0 as usize]
    }

    /// A variable name that no other occurrence shares (for `_`).
    pub fn fresh_anonymous(&mut self) -> Sym {
        self.anon += 1;
        let name = format!("{ANON_PREFIX}{}", self.anon);
        self.intern(&name)
    }

    pub fn is_anonymous(&self, s: Sym) -> bool {
        self.name(s).starts_with(ANON_PREFIX)
    }

    /// Registers `name/arity`. Returns the existing arity on a clash.
    pub fn predicate(&mut self, name: &str, arity: usize) -> Result<PredId, usize> {
        let sym = self.intern(name);
        if let Some(&p) = self.pred_index.get(&sym) {
            let known = self.preds[p.index()].arity;
            return if known == arity { Ok(p) } else { Err(known) };
        }
        let p = PredId(self.preds.len() as u32);
        self.preds.push(Predicate { name: sym, arity });
        self.pred_index.insert(sym, p);
        Ok(p)
    }

    pub fn find_predicate(&self, name: &str) -> Option<PredId> {
        self.lookup(name).and_then(|s| self.pred_index.get(&s).copied())
    }

    pub fn pred(&self, p: PredId) -> &Predicate {
        &self.preds[p.index()]
    }

    pub fn pred_name(&self, p: PredId) -> &str {
        self.name(self.preds[p.index()].name)
    }

    pub fn num_predicates(&self) -> usize {
        self.preds.len()
    }

    /// Total order on constants used by comparison built-ins and output.
    pub fn compare(&self, a: Value, b: Value) -> Ordering {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => x.cmp(&y),
            (Value::Int(_), Value::Sym(_)) => Ordering::Less,
            (Value::Sym(_), Value::Int(_)) => Ordering::Greater,
            (Value::Sym(x), Value::Sym(y)) => {
                if x == y {
                    Ordering::Equal
                } else {
                    self.name(x).as_bytes().cmp(self.name(y).as_bytes())
                }
            }
        }
    }

    pub fn compare_tuples(&self, a: &[Value], b: &[Value]) -> Ordering {
        for (&x, &y) in a.iter().zip(b) {
            match self.compare(x, y) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        a.len().cmp(&b.len())
    }

    pub fn value(&self, v: Value) -> ValueDisplay<'_> {
        ValueDisplay { symbols: self, value: v }
    }
}

pub struct ValueDisplay<'a> {
    symbols: &'a SymbolTable,
    value: Value,
}

impl fmt::Display for ValueDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => f.write_str(self.symbols.name(s)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Sym),
    Const(Value),
}

impl Term {
    pub fn is_ground(&self) -> bool {
        matches!(self, Term::Const(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Atom {
    pub pred: PredId,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn is_ground(&self) -> bool {
        self.args.iter().all(Term::is_ground)
    }

    pub fn vars(&self) -> impl Iterator<Item = Sym> + '_ {
        self.args.iter().filter_map(|t| match t {
            Term::Var(v) => Some(*v),
            Term::Const(_) => None,
        })
    }
}

/// An atom, possibly strongly negated (`-a`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub atom: Atom,
    pub strong_neg: bool,
}

impl Literal {
    pub fn new(atom: Atom, strong_neg: bool) -> Self {
        Self { atom, strong_neg }
    }

    pub fn complement(&self) -> Literal {
        Literal {
            atom: self.atom.clone(),
            strong_neg: !self.strong_neg,
        }
    }

    pub fn is_ground(&self) -> bool {
        self.atom.is_ground()
    }
}

/// True iff no literal of `lits` has its complement in `lits`.
pub fn is_consistent<'a>(lits: impl IntoIterator<Item = &'a Literal>) -> bool {
    let set: HashSet<&Literal> = lits.into_iter().collect();
    set.iter().all(|l| {
        let c = l.complement();
        !set.contains(&c)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            CmpOp::Lt => ord == Ordering::Less,
            CmpOp::Le => ord != Ordering::Greater,
            CmpOp::Gt => ord == Ordering::Greater,
            CmpOp::Ge => ord != Ordering::Less,
            CmpOp::Eq => ord == Ordering::Equal,
            CmpOp::Ne => ord != Ordering::Equal,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BuiltinKind {
    /// `#int(X)`: X is an integer in `0..=max_int`.
    Int,
    /// `#succ(X,Y)`: Y = X + 1.
    Succ,
    Cmp(CmpOp),
    /// `plus(X,Y,Z)`, written `Z = X + Y`.
    Plus,
    /// `times(X,Y,Z)`, written `Z = X * Y`.
    Times,
}

impl BuiltinKind {
    pub fn arity(self) -> usize {
        match self {
            BuiltinKind::Int => 1,
            BuiltinKind::Succ | BuiltinKind::Cmp(_) => 2,
            BuiltinKind::Plus | BuiltinKind::Times => 3,
        }
    }

    /// Built-ins whose domain is the integer range `0..=max_int`.
    pub fn is_integer(self) -> bool {
        !matches!(self, BuiltinKind::Cmp(_))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BuiltinAtom {
    pub kind: BuiltinKind,
    pub args: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub head: Vec<Literal>,
    pub pos_body: Vec<Literal>,
    pub neg_body: Vec<Literal>,
    pub builtins: Vec<BuiltinAtom>,
    pub span: SourceSpan,
}

impl Rule {
    pub fn is_constraint(&self) -> bool {
        self.head.is_empty()
    }

    pub fn is_fact(&self) -> bool {
        self.head.len() == 1 && self.body_len() == 0
    }

    pub fn body_len(&self) -> usize {
        self.pos_body.len() + self.neg_body.len() + self.builtins.len()
    }

    /// Variables in order of first occurrence (head, positive, negative, built-ins).
    pub fn variables(&self) -> Vec<Sym> {
        let mut out = Vec::new();
        let mut push = |t: &Term| {
            if let Term::Var(v) = t {
                if !out.contains(v) {
                    out.push(*v);
                }
            }
        };
        for l in self.head.iter().chain(&self.pos_body).chain(&self.neg_body) {
            l.atom.args.iter().for_each(&mut push);
        }
        for b in &self.builtins {
            b.args.iter().for_each(&mut push);
        }
        out
    }

    pub fn literals(&self) -> impl Iterator<Item = &Literal> {
        self.head.iter().chain(&self.pos_body).chain(&self.neg_body)
    }
}

#[derive(Clone, Debug, Default)]
pub struct Program {
    pub rules: Vec<Rule>,
    pub symbols: Arc<SymbolTable>,
    pub max_int: u64,
}

impl Program {
    pub fn symbols_mut(&mut self) -> &mut SymbolTable {
        Arc::make_mut(&mut self.symbols)
    }

    /// Predicates occurring in the rules, in id order.
    pub fn predicates(&self) -> Vec<PredId> {
        let mut seen = vec![false; self.symbols.num_predicates()];
        for r in &self.rules {
            for l in r.literals() {
                seen[l.atom.pred.index()] = true;
            }
        }
        seen.iter()
            .enumerate()
            .filter(|(_, &s)| s)
            .map(|(i, _)| PredId(i as u32))
            .collect()
    }

    fn uses_integers(&self) -> bool {
        self.rules.iter().any(|r| {
            r.builtins.iter().any(|b| b.kind.is_integer())
                || r.literals()
                    .flat_map(|l| &l.atom.args)
                    .chain(r.builtins.iter().flat_map(|b| &b.args))
                    .any(|t| matches!(t, Term::Const(Value::Int(_))))
        })
    }

    /// The Herbrand universe, sorted by the constant order.
    pub fn herbrand_universe(&self) -> Vec<Value> {
        let mut seen = rustc_hash::FxHashSet::default();
        let mut out = Vec::new();
        for r in &self.rules {
            let terms = r
                .literals()
                .flat_map(|l| &l.atom.args)
                .chain(r.builtins.iter().flat_map(|b| &b.args));
            for t in terms {
                if let Term::Const(v) = t {
                    if seen.insert(*v) {
                        out.push(*v);
                    }
                }
            }
        }
        if self.uses_integers() {
            for i in 0..=self.max_int {
                if seen.insert(Value::Int(i)) {
                    out.push(Value::Int(i));
                }
            }
        }
        out.sort_by(|a, b| self.symbols.compare(*a, *b));
        out
    }

    /// Every ground literal over the program's predicates and universe, both signs.
    pub fn herbrand_base(&self) -> Vec<GroundLiteral> {
        let universe = self.herbrand_universe();
        let mut out = Vec::new();
        for p in self.predicates() {
            let arity = self.symbols.pred(p).arity;
            if arity > 0 && universe.is_empty() {
                continue;
            }
            let mut tuple = vec![0usize; arity];
            'tuples: loop {
                let args: Box<[Value]> = tuple.iter().map(|&i| universe[i]).collect();
                for strong_neg in [false, true] {
                    out.push(GroundLiteral {
                        pred: p,
                        strong_neg,
                        args: args.clone(),
                    });
                }
                // odometer, last position fastest
                for k in (0..arity).rev() {
                    tuple[k] += 1;
                    if tuple[k] < universe.len() {
                        continue 'tuples;
                    }
                    tuple[k] = 0;
                }
                break;
            }
        }
        out
    }
}

/// Dense index of a ground literal inside a ground program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LitId(pub u32);

impl LitId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundLiteral {
    pub pred: PredId,
    pub strong_neg: bool,
    pub args: Box<[Value]>,
}

impl GroundLiteral {
    pub fn complement(&self) -> GroundLiteral {
        GroundLiteral {
            pred: self.pred,
            strong_neg: !self.strong_neg,
            args: self.args.clone(),
        }
    }

    pub fn display<'a>(&'a self, symbols: &'a SymbolTable) -> GroundLiteralDisplay<'a> {
        GroundLiteralDisplay { lit: self, symbols }
    }

    /// Output order: predicate name, then arguments, then sign (positive first).
    pub fn output_cmp(&self, other: &GroundLiteral, symbols: &SymbolTable) -> Ordering {
        symbols
            .pred_name(self.pred)
            .as_bytes()
            .cmp(symbols.pred_name(other.pred).as_bytes())
            .then_with(|| symbols.compare_tuples(&self.args, &other.args))
            .then_with(|| self.strong_neg.cmp(&other.strong_neg))
    }
}

pub struct GroundLiteralDisplay<'a> {
    lit: &'a GroundLiteral,
    symbols: &'a SymbolTable,
}

impl fmt::Display for GroundLiteralDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lit.strong_neg {
            f.write_str("-")?;
        }
        f.write_str(self.symbols.pred_name(self.lit.pred))?;
        if !self.lit.args.is_empty() {
            f.write_str("(")?;
            for (i, v) in self.lit.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.symbols.value(*v))?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

/// A set of ground literals of one ground program, kept sorted by id.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interpretation {
    lits: Vec<LitId>,
}

impl Interpretation {
    pub fn new(mut lits: Vec<LitId>) -> Self {
        lits.sort_unstable();
        lits.dedup();
        Self { lits }
    }

    pub fn contains(&self, l: LitId) -> bool {
        self.lits.binary_search(&l).is_ok()
    }

    pub fn len(&self) -> usize {
        self.lits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = LitId> + '_ {
        self.lits.iter().copied()
    }

    pub fn as_slice(&self) -> &[LitId] {
        &self.lits
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.lits.iter().all(|l| other.contains(*l))
    }

    /// Membership bitmap over `0..n`.
    pub fn to_mask(&self, n: usize) -> Vec<bool> {
        let mut m = vec![false; n];
        for l in &self.lits {
            m[l.index()] = true;
        }
        m
    }
}

impl FromIterator<LitId> for Interpretation {
    fn from_iter<T: IntoIterator<Item = LitId>>(iter: T) -> Self {
        Self::new(iter.into_iter().collect())
    }
}
