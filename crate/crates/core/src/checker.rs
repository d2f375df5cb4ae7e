//! Answer-set verification via the Gelfond-Lifschitz reduct.

use crate::ground::{GroundProgram, GroundRule};
use crate::model::{Interpretation, LitId};

/// A ground program without default negation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PositiveGroundProgram {
    rules: Vec<GroundRule>,
}

impl PositiveGroundProgram {
    /// Panics if some rule has a negative body.
    pub fn new(rules: Vec<GroundRule>) -> Self {
        assert!(rules.iter().all(|r| r.neg().is_empty()));
        Self { rules }
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }
}

/// Drops the rules whose negative body meets `x` and strips the negative
/// body from the rest.
pub fn reduct(gp: &GroundProgram, x: &Interpretation) -> PositiveGroundProgram {
    let rules = gp
        .rules()
        .iter()
        .filter(|r| !r.neg().iter().any(|l| x.contains(*l)))
        .map(|r| GroundRule::new(r.head(), r.pos(), &[]))
        .collect();
    PositiveGroundProgram { rules }
}

pub fn is_closed(i: &Interpretation, pp: &PositiveGroundProgram) -> bool {
    violated_rule(i, pp).is_none()
}

fn violated_rule(i: &Interpretation, pp: &PositiveGroundProgram) -> Option<usize> {
    pp.rules.iter().position(|r| {
        r.pos().iter().all(|l| i.contains(*l)) && !r.head().iter().any(|l| i.contains(*l))
    })
}

/// Whether no proper subset of `i` is closed under `pp`; `i` must be closed.
pub fn is_minimal_model(i: &Interpretation, pp: &PositiveGroundProgram) -> bool {
    smaller_model(i, pp).is_none()
}

/// A closed proper subset of the closed interpretation `i`, if one exists.
pub fn smaller_model(i: &Interpretation, pp: &PositiveGroundProgram) -> Option<Interpretation> {
    let mut facts: Vec<LitId> = pp
        .rules
        .iter()
        .filter(|r| r.pos().is_empty() && r.head().len() == 1)
        .map(|r| r.head()[0])
        .collect();
    facts.sort_unstable();
    let atoms = i.as_slice();
    smaller_closed_subset(
        i,
        pp.rules.iter(),
        |l| facts.binary_search(&l).is_ok(),
        |l| atoms.binary_search(&l).ok(),
    )
}

/// `is_fact` marks literals that every closed subset contains; they are
/// left out of the search.
fn smaller_closed_subset<'r>(
    i: &Interpretation,
    rules: impl Iterator<Item = &'r GroundRule>,
    is_fact: impl Fn(LitId) -> bool,
    position: impl Fn(LitId) -> Option<usize>,
) -> Option<Interpretation> {
    let atoms = i.as_slice();
    let local = Local::new(atoms, rules, is_fact, position);
    if local.n == 0 {
        return None;
    }
    let found = if local.horn {
        let lm = least_model(&local);
        if lm.iter().all(|v| *v) {
            None
        } else {
            Some(lm)
        }
    } else {
        Dpll::new(&local).solve()
    };
    found.map(|mask| {
        atoms
            .iter()
            .zip(&local.index)
            .filter(|(_, &k)| k == FIXED || mask[k as usize])
            .map(|(l, _)| *l)
            .collect()
    })
}

const FIXED: u32 = u32::MAX;

/// The rules whose body lies inside an interpretation, renumbered over its
/// non-fact atoms, with heads cut down to the interpretation. Rules with a
/// fact in the head are dropped, as are facts in bodies.
struct Local {
    n: usize,
    /// local number of each interpretation atom, or `FIXED`
    index: Vec<u32>,
    /// rule k has body `atoms[start[k]..mid[k]]` and head `atoms[mid[k]..start[k + 1]]`
    start: Vec<u32>,
    mid: Vec<u32>,
    atoms: Vec<u32>,
    horn: bool,
}

impl Local {
    /// `position` locates a literal in `interp`.
    fn new<'r>(
        interp: &[LitId],
        rules: impl Iterator<Item = &'r GroundRule>,
        is_fact: impl Fn(LitId) -> bool,
        position: impl Fn(LitId) -> Option<usize>,
    ) -> Self {
        let mut n = 0;
        let index: Vec<u32> = interp
            .iter()
            .map(|&l| {
                if is_fact(l) {
                    FIXED
                } else {
                    n += 1;
                    n as u32 - 1
                }
            })
            .collect();
        // None: outside the interpretation
        let local = |l: &LitId| position(*l).map(|k| index[k]);
        let mut out = Local {
            n,
            index: Vec::new(),
            start: vec![0],
            mid: Vec::new(),
            atoms: Vec::new(),
            horn: true,
        };
        'rules: for r in rules {
            let mark = out.atoms.len();
            for l in r.pos() {
                match local(l) {
                    Some(FIXED) => {}
                    Some(a) => out.atoms.push(a),
                    None => {
                        out.atoms.truncate(mark);
                        continue 'rules;
                    }
                }
            }
            let mid = out.atoms.len();
            for l in r.head() {
                match local(l) {
                    Some(FIXED) => {
                        out.atoms.truncate(mark);
                        continue 'rules;
                    }
                    Some(a) => out.atoms.push(a),
                    None => {}
                }
            }
            let heads = out.atoms.len() - mid;
            debug_assert!(heads > 0, "interpretation is not closed");
            out.horn &= heads == 1;
            out.mid.push(mid as u32);
            out.start.push(out.atoms.len() as u32);
        }
        out.index = index;
        out
    }

    fn len(&self) -> usize {
        self.mid.len()
    }

    fn body(&self, k: usize) -> &[u32] {
        &self.atoms[self.start[k] as usize..self.mid[k] as usize]
    }

    fn head(&self, k: usize) -> &[u32] {
        &self.atoms[self.mid[k] as usize..self.start[k + 1] as usize]
    }
}

fn least_model(rules: &Local) -> Vec<bool> {
    let n = rules.n;
    let mut occurs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut missing: Vec<usize> = Vec::with_capacity(rules.len());
    let mut queue = Vec::new();
    let mut val = vec![false; n];
    for k in 0..rules.len() {
        let body = rules.body(k);
        for &b in body {
            occurs[b as usize].push(k);
        }
        missing.push(body.len());
        let h = rules.head(k)[0] as usize;
        if body.is_empty() && !val[h] {
            val[h] = true;
            queue.push(h as u32);
        }
    }
    while let Some(a) = queue.pop() {
        for &k in &occurs[a as usize] {
            missing[k] -= 1;
            if missing[k] == 0 {
                let h = rules.head(k)[0] as usize;
                if !val[h] {
                    val[h] = true;
                    queue.push(h as u32);
                }
            }
        }
    }
    val
}

/// Search for an assignment over the atoms of an interpretation that
/// satisfies every rule and leaves at least one atom false.
struct Dpll<'a> {
    rules: &'a Local,
    /// rules mentioning atom a: `occurs[occ_start[a]..occ_start[a + 1]]`
    occ_start: Vec<u32>,
    occurs: Vec<u32>,
    /// 0 undefined, 1 true, 2 false
    val: Vec<u8>,
    trail: Vec<u32>,
    n_false: usize,
    /// every atom before this one is assigned
    next: usize,
}

const UNDEF: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

impl<'a> Dpll<'a> {
    fn new(rules: &'a Local) -> Self {
        let mut occ_start = vec![0u32; rules.n + 1];
        for &a in &rules.atoms {
            occ_start[a as usize + 1] += 1;
        }
        for a in 0..rules.n {
            occ_start[a + 1] += occ_start[a];
        }
        let mut fill = occ_start.clone();
        let mut occurs = vec![0u32; rules.atoms.len()];
        for k in 0..rules.len() {
            for &a in rules.body(k).iter().chain(rules.head(k)) {
                occurs[fill[a as usize] as usize] = k as u32;
                fill[a as usize] += 1;
            }
        }
        Self {
            rules,
            occ_start,
            occurs,
            val: vec![UNDEF; rules.n],
            trail: Vec::new(),
            n_false: 0,
            next: 0,
        }
    }

    fn solve(mut self) -> Option<Vec<bool>> {
        let all: Vec<u32> = (0..self.rules.len() as u32).collect();
        if !self.propagate(all) {
            return None;
        }
        if self.search() {
            Some(self.val.iter().map(|v| *v == TRUE).collect())
        } else {
            None
        }
    }

    fn occurrences(&self, a: usize) -> &[u32] {
        &self.occurs[self.occ_start[a] as usize..self.occ_start[a + 1] as usize]
    }

    fn set(&mut self, a: u32, v: u8) {
        debug_assert_eq!(self.val[a as usize], UNDEF);
        self.val[a as usize] = v;
        self.n_false += (v == FALSE) as usize;
        self.trail.push(a);
    }

    fn undo(&mut self, mark: usize) {
        for a in self.trail.drain(mark..) {
            self.n_false -= (self.val[a as usize] == FALSE) as usize;
            self.val[a as usize] = UNDEF;
        }
    }

    /// Unit propagation starting from `pending`; false on conflict.
    fn propagate(&mut self, mut pending: Vec<u32>) -> bool {
        let mut head = self.trail.len();
        loop {
            while let Some(k) = pending.pop() {
                let k = k as usize;
                let mut open_body = None;
                let mut n_open_body = 0;
                let mut body_false = false;
                for &b in self.rules.body(k) {
                    match self.val[b as usize] {
                        FALSE => {
                            body_false = true;
                            break;
                        }
                        UNDEF => {
                            n_open_body += 1;
                            open_body = Some(b);
                        }
                        _ => {}
                    }
                }
                if body_false {
                    continue;
                }
                let mut open_head = None;
                let mut n_open_head = 0;
                let mut head_true = false;
                for &h in self.rules.head(k) {
                    match self.val[h as usize] {
                        TRUE => {
                            head_true = true;
                            break;
                        }
                        UNDEF => {
                            n_open_head += 1;
                            open_head = Some(h);
                        }
                        _ => {}
                    }
                }
                if head_true {
                    continue;
                }
                match (n_open_body, n_open_head) {
                    (0, 0) => return false,
                    (0, 1) => self.set(open_head.unwrap(), TRUE),
                    (1, 0) => self.set(open_body.unwrap(), FALSE),
                    _ => {}
                }
            }
            // the closed subset must be proper
            if self.n_false == 0 {
                match self.rules.n - self.trail.len() {
                    0 => return false,
                    1 => {
                        let a = self.val.iter().position(|v| *v == UNDEF).unwrap();
                        self.set(a as u32, FALSE);
                    }
                    _ => {}
                }
            }
            if head == self.trail.len() {
                return true;
            }
            for &a in &self.trail[head..] {
                pending.extend_from_slice(self.occurrences(a as usize));
            }
            head = self.trail.len();
        }
    }

    fn search(&mut self) -> bool {
        let saved = self.next;
        while self.next < self.val.len() && self.val[self.next] != UNDEF {
            self.next += 1;
        }
        if self.next == self.val.len() {
            return true;
        }
        let a = self.next;
        for v in [FALSE, TRUE] {
            let mark = self.trail.len();
            self.set(a as u32, v);
            let ok = self.propagate(self.occurrences(a).to_vec());
            if ok && self.search() {
                return true;
            }
            self.undo(mark);
        }
        self.next = saved;
        false
    }
}

/// Outcome of checking an interpretation, naming the failed condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    AnswerSet,
    /// Contains this literal and its complement.
    Inconsistent { literal: LitId },
    /// This rule of the ground program is violated under the reduct.
    NotClosed { rule: usize },
    /// This proper subset is closed under the reduct.
    NotMinimal { smaller: Interpretation },
}

pub fn check(gp: &GroundProgram, x: &Interpretation) -> Verdict {
    const OUT: u32 = u32::MAX;
    let mut position = vec![OUT; gp.num_literals()];
    for (k, l) in x.iter().enumerate() {
        position[l.index()] = k as u32;
    }
    let inside = |l: &LitId| position[l.index()] != OUT;
    for l in x.iter() {
        if let Some(c) = gp.complement(l) {
            if inside(&c) {
                return Verdict::Inconsistent { literal: l.min(c) };
            }
        }
    }
    let kept = || gp.rules().iter().filter(|r| !r.neg().iter().any(inside));
    if let Some(rule) = gp.rules().iter().position(|r| {
        !r.neg().iter().any(inside) && r.pos().iter().all(inside) && !r.head().iter().any(inside)
    }) {
        return Verdict::NotClosed { rule };
    }
    let found = smaller_closed_subset(
        x,
        kept(),
        |l| gp.is_fact(l),
        |l| Some(position[l.index()]).filter(|&k| k != OUT).map(|k| k as usize),
    );
    match found {
        Some(smaller) => Verdict::NotMinimal { smaller },
        None => Verdict::AnswerSet,
    }
}

pub fn is_answer_set(gp: &GroundProgram, x: &Interpretation) -> bool {
    check(gp, x) == Verdict::AnswerSet
}
