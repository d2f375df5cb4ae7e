//! Ground programs over a dense literal table.

use std::fmt;
use std::sync::Arc;

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::model::{GroundLiteral, LitId, PredId, Program, SymbolTable, Term, Value};
use crate::parser::SourceSpan;

/// A ground rule. Each part is sorted by literal id and free of duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundRule {
    lits: Box<[LitId]>,
    n_head: u32,
    n_pos: u32,
}

impl GroundRule {
    pub fn new(head: &[LitId], pos: &[LitId], neg: &[LitId]) -> Self {
        let mut lits = Vec::with_capacity(head.len() + pos.len() + neg.len());
        let part = |src: &[LitId], lits: &mut Vec<LitId>| {
            let start = lits.len();
            lits.extend_from_slice(src);
            lits[start..].sort_unstable();
            let mut w = start;
            for r in start..lits.len() {
                if w == start || lits[w - 1] != lits[r] {
                    lits[w] = lits[r];
                    w += 1;
                }
            }
            lits.truncate(w);
            (w - start) as u32
        };
        let n_head = part(head, &mut lits);
        let n_pos = part(pos, &mut lits);
        part(neg, &mut lits);
        Self {
            lits: lits.into_boxed_slice(),
            n_head,
            n_pos,
        }
    }

    #[inline]
    pub fn head(&self) -> &[LitId] {
        &self.lits[..self.n_head as usize]
    }

    #[inline]
    pub fn pos(&self) -> &[LitId] {
        &self.lits[self.n_head as usize..(self.n_head + self.n_pos) as usize]
    }

    #[inline]
    pub fn neg(&self) -> &[LitId] {
        &self.lits[(self.n_head + self.n_pos) as usize..]
    }

    pub fn body_len(&self) -> usize {
        self.lits.len() - self.n_head as usize
    }

    pub fn is_constraint(&self) -> bool {
        self.n_head == 0
    }

    pub fn is_fact(&self) -> bool {
        self.n_head == 1 && self.body_len() == 0
    }

    pub(crate) fn remap(&self, map: &[u32]) -> GroundRule {
        let m = |s: &[LitId]| -> Vec<LitId> { s.iter().map(|l| LitId(map[l.index()])).collect() };
        GroundRule::new(&m(self.head()), &m(self.pos()), &m(self.neg()))
    }
}

#[derive(Clone, Debug)]
pub struct GroundProgram {
    symbols: Arc<SymbolTable>,
    literals: Vec<GroundLiteral>,
    rules: Vec<GroundRule>,
    facts: Vec<bool>,
    complement: Vec<Option<LitId>>,
    index: FxHashMap<(PredId, bool), FxHashMap<Box<[Value]>, LitId>>,
}

impl GroundProgram {
    /// Assembles a ground program; every id in `rules` must index `literals`.
    pub fn from_parts(
        symbols: Arc<SymbolTable>,
        literals: Vec<GroundLiteral>,
        rules: Vec<GroundRule>,
    ) -> Self {
        let mut index: FxHashMap<(PredId, bool), FxHashMap<Box<[Value]>, LitId>> =
            FxHashMap::default();
        for (i, l) in literals.iter().enumerate() {
            index
                .entry((l.pred, l.strong_neg))
                .or_default()
                .insert(l.args.clone(), LitId(i as u32));
        }
        let complement = literals
            .iter()
            .map(|l| {
                index
                    .get(&(l.pred, !l.strong_neg))
                    .and_then(|m| m.get(&l.args).copied())
            })
            .collect();
        let mut facts = vec![false; literals.len()];
        for r in &rules {
            assert!(r.lits.iter().all(|l| l.index() < literals.len()));
            if r.is_fact() {
                facts[r.head()[0].index()] = true;
            }
        }
        Self {
            symbols,
            literals,
            rules,
            facts,
            complement,
            index,
        }
    }

    pub fn symbols(&self) -> &Arc<SymbolTable> {
        &self.symbols
    }

    pub fn num_literals(&self) -> usize {
        self.literals.len()
    }

    pub fn literals(&self) -> &[GroundLiteral] {
        &self.literals
    }

    pub fn literal(&self, id: LitId) -> &GroundLiteral {
        &self.literals[id.index()]
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }

    pub fn is_fact(&self, id: LitId) -> bool {
        self.facts[id.index()]
    }

    pub fn facts(&self) -> impl Iterator<Item = LitId> + '_ {
        self.facts
            .iter()
            .enumerate()
            .filter(|(_, &f)| f)
            .map(|(i, _)| LitId(i as u32))
    }

    pub fn complement(&self, id: LitId) -> Option<LitId> {
        self.complement[id.index()]
    }

    pub fn lookup(&self, pred: PredId, strong_neg: bool, args: &[Value]) -> Option<LitId> {
        self.index.get(&(pred, strong_neg))?.get(args).copied()
    }

    pub fn lookup_literal(&self, l: &GroundLiteral) -> Option<LitId> {
        self.lookup(l.pred, l.strong_neg, &l.args)
    }

    pub fn display_literal(&self, id: LitId) -> impl fmt::Display + '_ {
        self.literal(id).display(&self.symbols)
    }

    pub fn display_rule<'a>(&'a self, r: &'a GroundRule) -> GroundRuleDisplay<'a> {
        GroundRuleDisplay { gp: self, rule: r }
    }
}

pub struct GroundRuleDisplay<'a> {
    gp: &'a GroundProgram,
    rule: &'a GroundRule,
}

impl fmt::Display for GroundRuleDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.rule;
        for (i, h) in r.head().iter().enumerate() {
            if i > 0 {
                f.write_str(" v ")?;
            }
            write!(f, "{}", self.gp.display_literal(*h))?;
        }
        if r.body_len() > 0 || r.is_constraint() {
            f.write_str(if r.is_constraint() { ":-" } else { " :-" })?;
            let mut first = true;
            for l in r.pos() {
                f.write_str(if first { " " } else { ", " })?;
                first = false;
                write!(f, "{}", self.gp.display_literal(*l))?;
            }
            for l in r.neg() {
                f.write_str(if first { " " } else { ", " })?;
                first = false;
                write!(f, "not {}", self.gp.display_literal(*l))?;
            }
        }
        f.write_str(".")
    }
}

/// One rule per line, in rule order.
impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{}", self.display_rule(r))?;
        }
        Ok(())
    }
}

/// Incremental construction of a ground program, e.g. for tests or tools
/// that produce ground rules directly.
#[derive(Debug, Default)]
pub struct GroundProgramBuilder {
    symbols: SymbolTable,
    literals: Vec<GroundLiteral>,
    index: FxHashMap<GroundLiteral, LitId>,
    rules: Vec<GroundRule>,
}

impl GroundProgramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_symbols(symbols: SymbolTable) -> Self {
        Self {
            symbols,
            ..Self::default()
        }
    }

    pub fn symbols_mut(&mut self) -> &mut SymbolTable {
        &mut self.symbols
    }

    pub fn literal(&mut self, lit: GroundLiteral) -> LitId {
        if let Some(&id) = self.index.get(&lit) {
            return id;
        }
        let id = LitId(self.literals.len() as u32);
        self.literals.push(lit.clone());
        self.index.insert(lit, id);
        id
    }

    /// Interns a propositional literal written `a` or `-a`.
    ///
    /// Panics if `a` is already known with a non-zero arity.
    pub fn prop(&mut self, text: &str) -> LitId {
        let (neg, name) = match text.strip_prefix('-') {
            Some(n) => (true, n),
            None => (false, text),
        };
        let pred = self
            .symbols
            .predicate(name, 0)
            .expect("propositional atom reused with arguments");
        self.literal(GroundLiteral {
            pred,
            strong_neg: neg,
            args: Box::new([]),
        })
    }

    pub fn rule(&mut self, head: &[LitId], pos: &[LitId], neg: &[LitId]) -> &mut Self {
        self.rules.push(GroundRule::new(head, pos, neg));
        self
    }

    pub fn build(self) -> GroundProgram {
        GroundProgram::from_parts(Arc::new(self.symbols), self.literals, self.rules)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{span}: rule is not ground or uses built-ins")]
pub struct NotGround {
    pub span: SourceSpan,
}

/// Converts a variable-free, built-in-free program into a ground program
/// rule for rule, with no simplification.
pub fn verbatim(program: &Program) -> Result<GroundProgram, NotGround> {
    let mut b = GroundProgramBuilder::with_symbols((*program.symbols).clone());
    for r in &program.rules {
        if !r.builtins.is_empty() || r.literals().any(|l| !l.is_ground()) {
            return Err(NotGround {
                span: r.span.clone(),
            });
        }
        let mut conv = |ls: &[crate::model::Literal]| -> Vec<LitId> {
            ls.iter()
                .map(|l| {
                    b.literal(GroundLiteral {
                        pred: l.atom.pred,
                        strong_neg: l.strong_neg,
                        args: l
                            .atom
                            .args
                            .iter()
                            .map(|t| match t {
                                Term::Const(v) => *v,
                                Term::Var(_) => unreachable!(),
                            })
                            .collect(),
                    })
                })
                .collect()
        };
        let head = conv(&r.head);
        let pos = conv(&r.pos_body);
        let neg = conv(&r.neg_body);
        b.rule(&head, &pos, &neg);
    }
    Ok(b.build())
}
