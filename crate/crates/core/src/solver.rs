//! Model generator: answer-set candidates by three-valued propagation and
//! chronological backtracking. Every total assignment that survives
//! propagation is handed to the checker before it is reported.
//!
//! Propagation closes a partial assignment under
//!
//! * forward inference: a rule whose body holds and whose head has exactly
//!   one non-false literal makes that literal true;
//! * contraposition: a rule whose head is false and whose body holds except
//!   for one undefined element makes that element fail;
//! * consistency: a true literal makes its complement false;
//! * support: a literal that heads no rule which could still support it is
//!   false, and a true literal with exactly one such rule forces that
//!   rule's body true and its other head literals false.
//!
//! A rule *supports* a head literal while its body is not false and no
//! other head literal is true.

use std::fmt;

use crate::checker;
use crate::ground::GroundProgram;
use crate::model::{Interpretation, LitId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruthValue {
    True,
    False,
    Undefined,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EnumerationLimit {
    /// 0 means all answer sets.
    pub max_answer_sets: usize,
}

impl EnumerationLimit {
    pub const ALL: EnumerationLimit = EnumerationLimit { max_answer_sets: 0 };

    pub fn at_most(n: usize) -> Self {
        Self { max_answer_sets: n }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub choices: u64,
    pub backtracks: u64,
    pub candidates: u64,
    pub rejected: u64,
    pub answer_sets: u64,
}

impl fmt::Display for Stats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "choices: {}\nbacktracks: {}\ncandidates: {}\nrejected by checker: {}\nanswer sets: {}",
            self.choices, self.backtracks, self.candidates, self.rejected, self.answer_sets
        )
    }
}

/// Two contradictory assignments were derived.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conflict {
    pub level: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Role {
    Head,
    Pos,
    Neg,
}

#[derive(Clone, Copy, Default)]
struct Counters {
    /// Body elements not yet satisfied.
    body_open: u32,
    /// Body elements already falsified.
    body_false: u32,
    head_nonfalse: u32,
    head_true: u32,
}

#[derive(Clone, Copy)]
struct Decision {
    lit: LitId,
    trail_len: usize,
    flipped: bool,
}

pub struct SolverState<'a> {
    gp: &'a GroundProgram,
    val: Vec<TruthValue>,
    occ_start: Vec<u32>,
    occ: Vec<(u32, Role)>,
    rules: Vec<Counters>,
    support: Vec<u32>,
    trail: Vec<LitId>,
    decisions: Vec<Decision>,
    rule_queue: Vec<u32>,
    lit_queue: Vec<LitId>,
    pub stats: Stats,
}

impl<'a> SolverState<'a> {
    pub fn new(gp: &'a GroundProgram) -> Self {
        let n = gp.num_literals();
        let live: Vec<bool> = gp.rules().iter().map(|r| !trivial(r)).collect();
        let mut count = vec![0u32; n + 1];
        for r in gp.rules().iter().zip(&live).filter(|(_, l)| **l).map(|(r, _)| r) {
            for l in r.head().iter().chain(r.pos()).chain(r.neg()) {
                count[l.index() + 1] += 1;
            }
        }
        for i in 0..n {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut occ = vec![(0, Role::Head); count[n] as usize];
        let mut rules = Vec::with_capacity(gp.rules().len());
        let mut support = vec![0u32; n];
        for (k, r) in gp.rules().iter().enumerate() {
            if !live[k] {
                // never fires and never violated: looks satisfied forever
                rules.push(Counters {
                    head_true: 1,
                    ..Counters::default()
                });
                continue;
            }
            for (part, role) in [(r.head(), Role::Head), (r.pos(), Role::Pos), (r.neg(), Role::Neg)] {
                for l in part {
                    occ[fill[l.index()] as usize] = (k as u32, role);
                    fill[l.index()] += 1;
                }
            }
            for h in r.head() {
                support[h.index()] += 1;
            }
            rules.push(Counters {
                body_open: r.body_len() as u32,
                body_false: 0,
                head_nonfalse: r.head().len() as u32,
                head_true: 0,
            });
        }
        let mut s = Self {
            gp,
            val: vec![TruthValue::Undefined; n],
            occ_start: count,
            occ,
            rules,
            support,
            trail: Vec::new(),
            decisions: Vec::new(),
            rule_queue: (0..gp.rules().len() as u32).filter(|&k| live[k as usize]).collect(),
            lit_queue: Vec::new(),
            stats: Stats::default(),
        };
        s.lit_queue = (0..n as u32).map(LitId).filter(|l| s.support[l.index()] == 0).collect();
        s
    }

    pub fn value(&self, l: LitId) -> TruthValue {
        self.val[l.index()]
    }

    pub fn decision_level(&self) -> usize {
        self.decisions.len()
    }

    /// Assigned literals in assignment order.
    pub fn trail(&self) -> &[LitId] {
        &self.trail
    }

    fn occurrences(&self, l: LitId) -> std::ops::Range<usize> {
        self.occ_start[l.index()] as usize..self.occ_start[l.index() + 1] as usize
    }

    fn conflict(&mut self) -> Conflict {
        self.rule_queue.clear();
        self.lit_queue.clear();
        Conflict {
            level: self.decisions.len(),
        }
    }

    fn assign(&mut self, l: LitId, v: bool) -> Result<(), Conflict> {
        let want = if v { TruthValue::True } else { TruthValue::False };
        match self.val[l.index()] {
            TruthValue::Undefined => {}
            cur if cur == want => return Ok(()),
            _ => return Err(self.conflict()),
        }
        self.val[l.index()] = want;
        self.trail.push(l);
        for i in self.occurrences(l) {
            let (k, role) = self.occ[i];
            self.update(k as usize, l, role, v, true);
            self.rule_queue.push(k);
        }
        if v {
            if let Some(c) = self.gp.complement(l) {
                self.assign(c, false)?;
            }
            self.lit_queue.push(l);
        }
        Ok(())
    }

    fn unassign(&mut self, l: LitId) {
        let v = self.val[l.index()] == TruthValue::True;
        for i in self.occurrences(l).rev() {
            let (k, role) = self.occ[i];
            self.update(k as usize, l, role, v, false);
        }
        self.val[l.index()] = TruthValue::Undefined;
    }

    /// Applies (`forward`) or reverts the effect of `l := v` on rule `k`.
    fn update(&mut self, k: usize, l: LitId, role: Role, v: bool, forward: bool) {
        let c = &mut self.rules[k];
        match (role, v) {
            (Role::Head, true) => {
                if forward {
                    c.head_true += 1;
                    let before = c.head_true - 1;
                    if c.body_false == 0 {
                        self.head_true_changed(k, l, before, false);
                    }
                } else {
                    c.head_true -= 1;
                    let after = c.head_true;
                    if c.body_false == 0 {
                        self.head_true_changed(k, l, after, true);
                    }
                }
            }
            (Role::Head, false) => {
                if forward {
                    c.head_nonfalse -= 1
                } else {
                    c.head_nonfalse += 1
                }
            }
            (Role::Pos, true) | (Role::Neg, false) => {
                if forward {
                    c.body_open -= 1
                } else {
                    c.body_open += 1
                }
            }
            (Role::Pos, false) | (Role::Neg, true) => {
                if forward {
                    c.body_false += 1;
                    if c.body_false == 1 {
                        self.body_false_changed(k, false);
                    }
                } else {
                    c.body_false -= 1;
                    if c.body_false == 0 {
                        self.body_false_changed(k, true);
                    }
                }
            }
        }
    }

    /// Rule `k` (body not false) had `others` true head literals besides
    /// `l` when `l` became true, or has them after `l` is retracted.
    fn head_true_changed(&mut self, k: usize, l: LitId, others: u32, gain: bool) {
        let gp = self.gp;
        match others {
            0 => {
                for &h in gp.rules()[k].head() {
                    if h != l {
                        self.change_support(h, gain);
                    }
                }
            }
            1 => {
                let t = gp.rules()[k]
                    .head()
                    .iter()
                    .copied()
                    .find(|&h| h != l && self.val[h.index()] == TruthValue::True)
                    .expect("one other true head literal");
                self.change_support(t, gain);
            }
            _ => {}
        }
    }

    fn body_false_changed(&mut self, k: usize, gain: bool) {
        let gp = self.gp;
        let c = self.rules[k];
        match c.head_true {
            0 => {
                for &h in gp.rules()[k].head() {
                    self.change_support(h, gain);
                }
            }
            1 => {
                let t = gp.rules()[k]
                    .head()
                    .iter()
                    .copied()
                    .find(|&h| self.val[h.index()] == TruthValue::True)
                    .expect("one true head literal");
                self.change_support(t, gain);
            }
            _ => {}
        }
    }

    #[inline]
    fn change_support(&mut self, h: LitId, gain: bool) {
        if gain {
            self.support[h.index()] += 1;
        } else {
            self.support[h.index()] -= 1;
            if self.support[h.index()] <= 1 {
                self.lit_queue.push(h);
            }
        }
    }

    fn supports(&self, k: usize, h: LitId) -> bool {
        let c = self.rules[k];
        c.body_false == 0
            && (c.head_true == 0
                || (c.head_true == 1 && self.val[h.index()] == TruthValue::True))
    }

    /// Closes the assignment under the propagation rules.
    pub fn propagate(&mut self) -> Result<(), Conflict> {
        loop {
            if let Some(k) = self.rule_queue.pop() {
                self.propagate_rule(k as usize)?;
            } else if let Some(l) = self.lit_queue.pop() {
                self.propagate_support(l)?;
            } else {
                return Ok(());
            }
        }
    }

    fn propagate_rule(&mut self, k: usize) -> Result<(), Conflict> {
        let c = self.rules[k];
        if c.body_false > 0 || c.head_true > 0 {
            return Ok(());
        }
        let r = &self.gp.rules()[k];
        if c.body_open == 0 {
            match c.head_nonfalse {
                0 => return Err(self.conflict()),
                1 => {
                    let h = r
                        .head()
                        .iter()
                        .copied()
                        .find(|h| self.val[h.index()] == TruthValue::Undefined)
                        .expect("one open head literal");
                    self.assign(h, true)?;
                }
                _ => {}
            }
        } else if c.body_open == 1 && c.head_nonfalse == 0 {
            let val = &self.val;
            let open = r
                .pos()
                .iter()
                .map(|l| (*l, false))
                .chain(r.neg().iter().map(|l| (*l, true)))
                .find(|(l, _)| val[l.index()] == TruthValue::Undefined)
                .expect("one open body element");
            self.assign(open.0, open.1)?;
        }
        Ok(())
    }

    fn propagate_support(&mut self, l: LitId) -> Result<(), Conflict> {
        match (self.support[l.index()], self.val[l.index()]) {
            (0, TruthValue::True) => Err(self.conflict()),
            (0, TruthValue::Undefined) => self.assign(l, false),
            (1, TruthValue::True) => {
                let k = self
                    .occurrences(l)
                    .map(|i| self.occ[i])
                    .filter(|(_, role)| *role == Role::Head)
                    .map(|(k, _)| k as usize)
                    .find(|&k| self.supports(k, l))
                    .expect("the supporting rule");
                let r = &self.gp.rules()[k];
                for &p in r.pos() {
                    self.assign(p, true)?;
                }
                for &n in r.neg() {
                    self.assign(n, false)?;
                }
                for &h in r.head() {
                    if h != l {
                        self.assign(h, false)?;
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn rule_satisfied(&self, k: usize) -> bool {
        let c = self.rules[k];
        c.body_false > 0 || c.head_true > 0
    }

    /// The undefined literal with most occurrences in bodies of unsatisfied
    /// rules (lowest id on ties), or `None` when no unsatisfied rule has an
    /// undefined literal.
    pub fn choose_branch(&self) -> Option<LitId> {
        let mut best: Option<(u32, LitId)> = None;
        for l in (0..self.val.len() as u32).map(LitId) {
            if self.val[l.index()] != TruthValue::Undefined {
                continue;
            }
            let mut relevant = false;
            let mut score = 0u32;
            for i in self.occurrences(l) {
                let (k, role) = self.occ[i];
                if !self.rule_satisfied(k as usize) {
                    relevant = true;
                    if role != Role::Head {
                        score += 1;
                    }
                }
            }
            if relevant && best.is_none_or(|(s, _)| score > s) {
                best = Some((score, l));
            }
        }
        best.map(|(_, l)| l)
    }

    /// Opens a new decision level assigning `l := v`.
    pub fn decide(&mut self, l: LitId, v: bool) -> Result<(), Conflict> {
        self.decisions.push(Decision {
            lit: l,
            trail_len: self.trail.len(),
            flipped: !v,
        });
        self.assign(l, v)
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            self.unassign(l);
        }
        self.rule_queue.clear();
        self.lit_queue.clear();
    }

    /// Retracts to the most recent unflipped decision and flips it.
    /// Returns false once the search space is exhausted.
    fn backtrack(&mut self) -> bool {
        while let Some(d) = self.decisions.pop() {
            self.undo_to(d.trail_len);
            if !d.flipped {
                self.stats.backtracks += 1;
                self.decisions.push(Decision { flipped: true, ..d });
                if self.assign(d.lit, false).is_ok() {
                    return true;
                }
                // the flip itself conflicts: keep unwinding
                continue;
            }
        }
        false
    }

    /// Assigns false to every remaining undefined literal. Only valid when
    /// they occur solely in satisfied rules, where no literal can be
    /// supported.
    fn complete(&mut self) -> Result<(), Conflict> {
        for l in (0..self.val.len() as u32).map(LitId) {
            if self.val[l.index()] == TruthValue::Undefined {
                self.assign(l, false)?;
            }
        }
        self.propagate()
    }

    fn model(&self) -> Interpretation {
        (0..self.val.len() as u32)
            .map(LitId)
            .filter(|l| self.val[l.index()] == TruthValue::True)
            .collect()
    }
}

/// A rule whose head meets its positive body is always satisfied, and one
/// whose positive and negative bodies meet never applies. Neither affects
/// the answer sets.
fn trivial(r: &crate::ground::GroundRule) -> bool {
    let meets = |a: &[LitId], b: &[LitId]| a.iter().any(|l| b.binary_search(l).is_ok());
    meets(r.head(), r.pos()) || meets(r.pos(), r.neg())
}

/// Lazily enumerates the answer sets of a ground program.
pub struct AnswerSets<'a> {
    state: SolverState<'a>,
    limit: EnumerationLimit,
    started: bool,
    done: bool,
}

impl<'a> AnswerSets<'a> {
    pub fn stats(&self) -> Stats {
        self.state.stats
    }

    /// Continues the search to the next total, conflict-free assignment.
    fn next_candidate(&mut self) -> Option<Interpretation> {
        let s = &mut self.state;
        if !self.started {
            self.started = true;
        } else if !s.backtrack() {
            return None;
        }
        loop {
            let ok = s.propagate().is_ok()
                && match s.choose_branch() {
                    Some(l) => {
                        s.stats.choices += 1;
                        if s.decide(l, true).is_err() && !s.backtrack() {
                            return None;
                        }
                        continue;
                    }
                    None => s.complete().is_ok(),
                };
            if ok {
                return Some(s.model());
            }
            if !s.backtrack() {
                return None;
            }
        }
    }
}

impl Iterator for AnswerSets<'_> {
    type Item = Interpretation;

    fn next(&mut self) -> Option<Interpretation> {
        if self.done {
            return None;
        }
        let limit = self.limit.max_answer_sets as u64;
        while let Some(x) = self.next_candidate() {
            self.state.stats.candidates += 1;
            if checker::is_answer_set(self.state.gp, &x) {
                self.state.stats.answer_sets += 1;
                if limit > 0 && self.state.stats.answer_sets >= limit {
                    self.done = true;
                }
                return Some(x);
            }
            self.state.stats.rejected += 1;
        }
        self.done = true;
        None
    }
}

pub fn enumerate_answer_sets(gp: &GroundProgram, limit: EnumerationLimit) -> AnswerSets<'_> {
    AnswerSets {
        state: SolverState::new(gp),
        limit,
        started: false,
        done: false,
    }
}
