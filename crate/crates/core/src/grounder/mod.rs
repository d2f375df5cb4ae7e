//! Intelligent grounding.
//!
//! Rules are instantiated bottom-up along the components of the dependency
//! graph. A ground atom is a *candidate* once it heads an emitted ground
//! rule; positive body literals are only matched against candidates, so
//! instances whose positive body can never hold are never produced. Inside a
//! recursive component instantiation is semi-naive: each round joins at
//! least one literal against the atoms that became candidates in the
//! previous round.
//!
//! Emitted rules are simplified: known facts are removed from positive
//! bodies, a rule is dropped when a negative body atom or a head literal is
//! a fact, and negative body atoms that can never be derived are removed.

mod depgraph;
mod plan;
mod safety;

use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};
use thiserror::Error;

use crate::ground::{GroundProgram, GroundRule};
use crate::model::{GroundLiteral, LitId, Program, Rule, SymbolTable, Value};
use plan::{CRule, Range, SearchStats};

pub use depgraph::{build_dependency_graph, DependencyGraph, Edge, EdgeKind};
pub use safety::{check_safety, SafetyError};

#[derive(Clone, Debug)]
pub struct GroundOptions {
    /// Upper bound on emitted ground rules; exceeding it is a resource error.
    pub max_ground_rules: usize,
}

impl Default for GroundOptions {
    fn default() -> Self {
        Self {
            max_ground_rules: 50_000_000,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GroundError {
    #[error(transparent)]
    Safety(#[from] SafetyError),
    #[error("grounding exceeded the budget of {limit} ground rules")]
    Resource { limit: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroundStats {
    /// Instances dropped because an arithmetic result left `0..=max_int`.
    pub overflow_instances: u64,
    /// Rule instances produced by the joins, before simplification.
    pub instances: u64,
    pub ground_rules: usize,
    pub ground_literals: usize,
}

#[derive(Clone, Debug)]
pub struct Grounding {
    pub program: GroundProgram,
    pub stats: GroundStats,
}

/// Ground literal table plus the candidate relations the joins read.
pub(crate) struct Store {
    pub lits: Vec<GroundLiteral>,
    maps: Vec<FxHashMap<Box<[Value]>, LitId>>,
    pub candidate: Vec<bool>,
    pub fact: Vec<bool>,
    pub rels: Vec<Relation>,
}

#[derive(Default)]
pub(crate) struct Relation {
    pub tuples: Vec<LitId>,
    indexes: Vec<(u64, Index)>,
}

#[derive(Default)]
pub(crate) struct Index {
    covered: usize,
    pub map: FxHashMap<Box<[Value]>, Vec<u32>>,
}

/// Relation key of a (predicate, sign) pair.
#[inline]
pub(crate) fn rel_key(pred: crate::model::PredId, strong_neg: bool) -> usize {
    pred.index() * 2 + strong_neg as usize
}

impl Store {
    fn new(num_preds: usize) -> Self {
        Self {
            lits: Vec::new(),
            maps: (0..num_preds * 2).map(|_| FxHashMap::default()).collect(),
            candidate: Vec::new(),
            fact: Vec::new(),
            rels: (0..num_preds * 2).map(|_| Relation::default()).collect(),
        }
    }

    fn lookup(&self, key: usize, args: &[Value]) -> Option<LitId> {
        self.maps[key].get(args).copied()
    }

    fn intern(&mut self, key: usize, args: &[Value]) -> LitId {
        if let Some(id) = self.maps[key].get(args) {
            return *id;
        }
        let id = LitId(self.lits.len() as u32);
        self.lits.push(GroundLiteral {
            pred: crate::model::PredId((key / 2) as u32),
            strong_neg: key % 2 == 1,
            args: args.into(),
        });
        self.maps[key].insert(args.into(), id);
        self.candidate.push(false);
        self.fact.push(false);
        id
    }

    fn add_candidate(&mut self, id: LitId) {
        if !self.candidate[id.index()] {
            self.candidate[id.index()] = true;
            let l = &self.lits[id.index()];
            let key = rel_key(l.pred, l.strong_neg);
            self.rels[key].tuples.push(id);
        }
    }

    /// Brings the index on `mask` of relation `key` up to date.
    pub(crate) fn ensure_index(&mut self, key: usize, mask: u64) {
        let rel = &mut self.rels[key];
        let pos = match rel.indexes.iter().position(|(m, _)| *m == mask) {
            Some(p) => p,
            None => {
                rel.indexes.push((mask, Index::default()));
                rel.indexes.len() - 1
            }
        };
        let (_, index) = &mut rel.indexes[pos];
        let mut scratch = Vec::new();
        for i in index.covered..rel.tuples.len() {
            let args = &self.lits[rel.tuples[i].index()].args;
            scratch.clear();
            for (j, v) in args.iter().enumerate() {
                if mask & (1 << j) != 0 {
                    scratch.push(*v);
                }
            }
            match index.map.get_mut(scratch.as_slice()) {
                Some(v) => v.push(i as u32),
                None => {
                    index.map.insert(scratch.as_slice().into(), vec![i as u32]);
                }
            }
        }
        index.covered = rel.tuples.len();
    }

    pub(crate) fn index(&self, key: usize, mask: u64) -> &Index {
        &self.rels[key]
            .indexes
            .iter()
            .find(|(m, _)| *m == mask)
            .expect("index not prepared")
            .1
    }
}

/// One instance of a rule produced by [`ground_rule`], built-ins removed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundInstance {
    pub head: Vec<GroundLiteral>,
    pub pos_body: Vec<GroundLiteral>,
    pub neg_body: Vec<GroundLiteral>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RuleInstances {
    pub instances: Vec<GroundInstance>,
    pub overflow_instances: u64,
}

/// Instantiates `rule` by matching its positive body against `candidates`
/// and evaluating its built-ins. No other simplification is applied.
pub fn ground_rule(
    rule: &Rule,
    symbols: &SymbolTable,
    max_int: u64,
    candidates: &[GroundLiteral],
) -> Result<RuleInstances, SafetyError> {
    check_safety(rule, symbols)?;
    let mut store = Store::new(symbols.num_predicates());
    for c in candidates {
        let id = store.intern(rel_key(c.pred, c.strong_neg), &c.args);
        store.add_candidate(id);
    }
    let crule = CRule::compile(rule);
    let plan = crule.plan(None);
    let ranges: Vec<Range> = crule
        .pos
        .iter()
        .map(|l| (0, store.rels[l.key].tuples.len()))
        .collect();
    let mut stats = SearchStats::default();
    let bindings = plan::run(&mut store, symbols, max_int, &crule, &plan, &ranges, &mut stats);
    let mut out = RuleInstances {
        instances: Vec::new(),
        overflow_instances: stats.overflow,
    };
    for b in bindings.chunks(crule.nvars.max(1)) {
        let inst = |ls: &[plan::CLit]| -> Vec<GroundLiteral> {
            ls.iter()
                .map(|l| GroundLiteral {
                    pred: crate::model::PredId((l.key / 2) as u32),
                    strong_neg: l.key % 2 == 1,
                    args: l.instantiate(b).into(),
                })
                .collect()
        };
        let gi = GroundInstance {
            head: inst(&crule.head),
            pos_body: inst(&crule.pos),
            neg_body: inst(&crule.neg),
        };
        if !out.instances.contains(&gi) {
            out.instances.push(gi);
        }
    }
    Ok(out)
}

pub fn ground_program(program: &Program) -> Result<Grounding, GroundError> {
    ground_program_with(program, &GroundOptions::default())
}

pub fn ground_program_with(
    program: &Program,
    options: &GroundOptions,
) -> Result<Grounding, GroundError> {
    for r in &program.rules {
        check_safety(r, &program.symbols)?;
    }
    let graph = build_dependency_graph(program);
    let mut g = Grounder {
        program,
        options,
        store: Store::new(program.symbols.num_predicates()),
        rules: Vec::new(),
        origin: Vec::new(),
        seen: FxHashSet::default(),
        stats: GroundStats::default(),
    };

    let crules: Vec<CRule> = program.rules.iter().map(CRule::compile).collect();
    let mut by_component: Vec<Vec<usize>> = vec![Vec::new(); graph.components.len()];
    let mut constraints = Vec::new();
    for (i, r) in program.rules.iter().enumerate() {
        match r.head.first() {
            Some(h) => by_component[graph.component_of(h.atom.pred)].push(i),
            None => constraints.push(i),
        }
    }

    for (c, members) in by_component.iter().enumerate() {
        if members.is_empty() {
            continue;
        }
        g.ground_component(&graph, c, members, &crules)?;
    }
    let n = graph.components.len();
    for &i in &constraints {
        let crule = &crules[i];
        let plan = crule.plan(None);
        let ranges: Vec<Range> = crule
            .pos
            .iter()
            .map(|l| (0, g.store.rels[l.key].tuples.len()))
            .collect();
        g.instantiate(i, crule, &plan, &ranges, &graph, n)?;
    }

    Ok(g.finish())
}

struct Grounder<'a> {
    program: &'a Program,
    options: &'a GroundOptions,
    store: Store,
    rules: Vec<GroundRule>,
    /// Source rule of each emitted rule.
    origin: Vec<u32>,
    seen: FxHashSet<GroundRule>,
    stats: GroundStats,
}

impl Grounder<'_> {
    fn ground_component(
        &mut self,
        graph: &DependencyGraph,
        component: usize,
        members: &[usize],
        crules: &[CRule],
    ) -> Result<(), GroundError> {
        let preds = &graph.components[component];
        let keys: Vec<usize> = preds
            .iter()
            .flat_map(|p| [rel_key(*p, false), rel_key(*p, true)])
            .collect();
        let in_component = |key: usize| keys.contains(&key);
        let recursive_positions = |r: &CRule| -> Vec<usize> {
            r.pos
                .iter()
                .enumerate()
                .filter(|(_, l)| in_component(l.key & !1) || in_component(l.key | 1))
                .map(|(i, _)| i)
                .collect()
        };

        // Rules without recursive positive literals see complete inputs: one pass.
        for &i in members {
            let r = &crules[i];
            if recursive_positions(r).is_empty() {
                let plan = r.plan(None);
                let ranges: Vec<Range> = r
                    .pos
                    .iter()
                    .map(|l| (0, self.store.rels[l.key].tuples.len()))
                    .collect();
                self.instantiate(i, r, &plan, &ranges, graph, component)?;
            }
        }

        let recursive: Vec<(usize, Vec<usize>)> = members
            .iter()
            .map(|&i| (i, recursive_positions(&crules[i])))
            .filter(|(_, p)| !p.is_empty())
            .collect();
        if recursive.is_empty() {
            return Ok(());
        }
        let plans: Vec<Vec<plan::Plan>> = recursive
            .iter()
            .map(|(i, positions)| positions.iter().map(|&p| crules[*i].plan(Some(p))).collect())
            .collect();

        let mut old: FxHashMap<usize, usize> = keys.iter().map(|&k| (k, 0)).collect();
        loop {
            let new: FxHashMap<usize, usize> = keys
                .iter()
                .map(|&k| (k, self.store.rels[k].tuples.len()))
                .collect();
            if keys.iter().all(|k| old[k] == new[k]) {
                break;
            }
            for ((i, positions), rule_plans) in recursive.iter().zip(&plans) {
                let r = &crules[*i];
                for (&delta, plan) in positions.iter().zip(rule_plans) {
                    let dkey = r.pos[delta].key;
                    if old[&dkey] == new[&dkey] {
                        continue;
                    }
                    let ranges: Vec<Range> = r
                        .pos
                        .iter()
                        .enumerate()
                        .map(|(j, l)| {
                            if !old.contains_key(&l.key) {
                                (0, self.store.rels[l.key].tuples.len())
                            } else if j == delta {
                                (old[&l.key], new[&l.key])
                            } else if positions.contains(&j) && j < delta {
                                (0, old[&l.key])
                            } else {
                                (0, new[&l.key])
                            }
                        })
                        .collect();
                    self.instantiate(*i, r, plan, &ranges, graph, component)?;
                }
            }
            old = new;
        }
        Ok(())
    }

    /// Runs one join plan and emits the resulting (simplified) ground rules.
    fn instantiate(
        &mut self,
        source: usize,
        r: &CRule,
        plan: &plan::Plan,
        ranges: &[Range],
        graph: &DependencyGraph,
        component: usize,
    ) -> Result<(), GroundError> {
        let mut stats = SearchStats::default();
        let bindings = plan::run(
            &mut self.store,
            &self.program.symbols,
            self.program.max_int,
            r,
            plan,
            ranges,
            &mut stats,
        );
        self.stats.overflow_instances += stats.overflow;
        // negative literals over completed components are final
        let neg_final: Vec<bool> = r
            .neg
            .iter()
            .map(|l| graph.component_of(crate::model::PredId((l.key / 2) as u32)) < component)
            .collect();
        let width = r.nvars.max(1);
        let mut args = Vec::new();
        let (mut head, mut pos, mut neg) = (Vec::new(), Vec::new(), Vec::new());
        'inst: for b in bindings.chunks(width) {
            self.stats.instances += 1;
            head.clear();
            pos.clear();
            neg.clear();
            for l in &r.pos {
                l.instantiate_into(b, &mut args);
                let id = self
                    .store
                    .lookup(l.key, &args)
                    .expect("positive literal matched a candidate");
                if !self.store.fact[id.index()] {
                    pos.push(id);
                }
            }
            for (l, &fin) in r.neg.iter().zip(&neg_final) {
                l.instantiate_into(b, &mut args);
                match self.store.lookup(l.key, &args) {
                    Some(id) if self.store.fact[id.index()] => continue 'inst,
                    Some(id) if self.store.candidate[id.index()] || !fin => neg.push(id),
                    None if !fin => neg.push(self.store.intern(l.key, &args)),
                    _ => {}
                }
            }
            for l in &r.head {
                l.instantiate_into(b, &mut args);
                let id = self.store.intern(l.key, &args);
                if self.store.fact[id.index()] {
                    continue 'inst;
                }
                head.push(id);
            }
            self.emit(source, &head, &pos, &neg)?;
        }
        Ok(())
    }

    fn emit(
        &mut self,
        source: usize,
        head: &[LitId],
        pos: &[LitId],
        neg: &[LitId],
    ) -> Result<(), GroundError> {
        let rule = GroundRule::new(head, pos, neg);
        if intersects(rule.head(), rule.pos()) || intersects(rule.pos(), rule.neg()) {
            return Ok(());
        }
        if self.seen.contains(&rule) {
            return Ok(());
        }
        if self.rules.len() >= self.options.max_ground_rules {
            return Err(GroundError::Resource {
                limit: self.options.max_ground_rules,
            });
        }
        if rule.is_fact() {
            self.store.fact[rule.head()[0].index()] = true;
        }
        for &h in rule.head() {
            self.store.add_candidate(h);
        }
        self.seen.insert(rule.clone());
        self.rules.push(rule);
        self.origin.push(source as u32);
        Ok(())
    }

    /// Re-simplifies against the final fact and candidate sets, then
    /// renumbers the surviving literals densely.
    fn finish(mut self) -> Grounding {
        drop(std::mem::take(&mut self.seen));
        let store = &mut self.store;
        let mut alive = vec![true; self.rules.len()];
        loop {
            let mut changed = false;
            for (i, r) in self.rules.iter_mut().enumerate() {
                if !alive[i] || r.is_fact() {
                    continue;
                }
                if r.neg().iter().any(|l| store.fact[l.index()])
                    || r.head().iter().any(|l| store.fact[l.index()])
                {
                    alive[i] = false;
                    continue;
                }
                let pos_keep = r.pos().iter().filter(|l| !store.fact[l.index()]).count();
                let neg_keep = r.neg().iter().filter(|l| store.candidate[l.index()]).count();
                if pos_keep != r.pos().len() || neg_keep != r.neg().len() {
                    let pos: Vec<LitId> =
                        r.pos().iter().copied().filter(|l| !store.fact[l.index()]).collect();
                    let neg: Vec<LitId> =
                        r.neg().iter().copied().filter(|l| store.candidate[l.index()]).collect();
                    *r = GroundRule::new(r.head(), &pos, &neg);
                    if r.is_fact() {
                        store.fact[r.head()[0].index()] = true;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }

        let mut used = vec![false; store.lits.len()];
        for (r, _) in self.rules.iter().zip(&alive).filter(|(_, a)| **a) {
            for part in [r.head(), r.pos(), r.neg()] {
                for l in part {
                    used[l.index()] = true;
                }
            }
        }
        let mut map = vec![u32::MAX; store.lits.len()];
        let mut literals = Vec::new();
        for (i, lit) in std::mem::take(&mut store.lits).into_iter().enumerate() {
            if used[i] {
                map[i] = literals.len() as u32;
                literals.push(lit);
            }
        }
        // present rules in source order, instances in derivation order
        let mut order: Vec<usize> = (0..self.rules.len()).filter(|&i| alive[i]).collect();
        order.sort_by_key(|&i| self.origin[i]);
        let mut seen = FxHashSet::default();
        let mut rules = Vec::new();
        for i in order {
            let r = self.rules[i].remap(&map);
            if seen.insert(r.clone()) {
                rules.push(r);
            }
        }
        self.stats.ground_rules = rules.len();
        self.stats.ground_literals = literals.len();
        Grounding {
            program: GroundProgram::from_parts(Arc::clone(&self.program.symbols), literals, rules),
            stats: self.stats,
        }
    }
}

fn intersects(a: &[LitId], b: &[LitId]) -> bool {
    // both sorted
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return true,
        }
    }
    false
}
