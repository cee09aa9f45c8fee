//! A small CDCL SAT solver: two watched literals, first-UIP learning,
//! activity-based branching with phase saving, Luby restarts.

use alloc::vec;
use alloc::vec::Vec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lit(u32);

impl Lit {
    pub fn new(var: usize, positive: bool) -> Lit {
        Lit(((var as u32) << 1) | (!positive) as u32)
    }

    pub fn var(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Lit {
        Lit(self.0 ^ 1)
    }

    fn index(self) -> usize {
        self.0 as usize
    }
}

const NO_REASON: usize = usize::MAX;

#[derive(Clone, Debug, Default)]
pub struct Solver {
    clauses: Vec<Vec<Lit>>,
    watches: Vec<Vec<usize>>,
    values: Vec<i8>,
    level: Vec<u32>,
    reason: Vec<usize>,
    trail: Vec<Lit>,
    trail_lim: Vec<usize>,
    qhead: usize,
    activity: Vec<f64>,
    var_inc: f64,
    phase: Vec<bool>,
    seen: Vec<bool>,
    inconsistent: bool,
}

impl Solver {
    pub fn new() -> Solver {
        Solver { var_inc: 1.0, ..Solver::default() }
    }

    pub fn num_vars(&self) -> usize {
        self.values.len()
    }

    pub fn new_var(&mut self) -> usize {
        let v = self.values.len();
        self.values.push(0);
        self.level.push(0);
        self.reason.push(NO_REASON);
        self.activity.push(0.0);
        self.phase.push(false);
        self.seen.push(false);
        self.watches.push(Vec::new());
        self.watches.push(Vec::new());
        v
    }

    fn lit_value(&self, l: Lit) -> i8 {
        let v = self.values[l.var()];
        if l.is_positive() {
            v
        } else {
            -v
        }
    }

    /// Value of a variable in the last model.
    pub fn value(&self, var: usize) -> bool {
        self.values[var] > 0
    }

    fn decision_level(&self) -> u32 {
        self.trail_lim.len() as u32
    }

    fn enqueue(&mut self, l: Lit, reason: usize) {
        let v = l.var();
        self.values[v] = if l.is_positive() { 1 } else { -1 };
        self.level[v] = self.decision_level();
        self.reason[v] = reason;
        self.trail.push(l);
    }

    /// Add a clause; must be called at decision level 0.
    pub fn add_clause(&mut self, lits: &[Lit]) {
        if self.inconsistent {
            return;
        }
        self.backtrack(0);
        let mut c: Vec<Lit> = lits.to_vec();
        c.sort();
        c.dedup();
        if c.windows(2).any(|w| w[0].var() == w[1].var()) {
            return;
        }
        if c.iter().any(|&l| self.lit_value(l) > 0) {
            return;
        }
        c.retain(|&l| self.lit_value(l) == 0);
        match c.len() {
            0 => self.inconsistent = true,
            1 => {
                self.enqueue(c[0], NO_REASON);
                if self.propagate().is_some() {
                    self.inconsistent = true;
                }
            }
            _ => {
                let cref = self.clauses.len();
                self.watches[c[0].index()].push(cref);
                self.watches[c[1].index()].push(cref);
                self.clauses.push(c);
            }
        }
    }

    fn propagate(&mut self) -> Option<usize> {
        while self.qhead < self.trail.len() {
            let p = self.trail[self.qhead];
            self.qhead += 1;
            let false_lit = p.negate();
            let ws = core::mem::take(&mut self.watches[false_lit.index()]);
            let mut kept = Vec::with_capacity(ws.len());
            let mut conflict = None;
            let mut i = 0;
            while i < ws.len() {
                let cref = ws[i];
                i += 1;
                if self.clauses[cref][0] == false_lit {
                    self.clauses[cref].swap(0, 1);
                }
                let first = self.clauses[cref][0];
                if self.lit_value(first) > 0 {
                    kept.push(cref);
                    continue;
                }
                let len = self.clauses[cref].len();
                let mut moved = false;
                for k in 2..len {
                    let l = self.clauses[cref][k];
                    if self.lit_value(l) >= 0 {
                        self.clauses[cref].swap(1, k);
                        self.watches[l.index()].push(cref);
                        moved = true;
                        break;
                    }
                }
                if moved {
                    continue;
                }
                kept.push(cref);
                if self.lit_value(first) < 0 {
                    conflict = Some(cref);
                    kept.extend_from_slice(&ws[i..]);
                    break;
                }
                self.enqueue(first, cref);
            }
            self.watches[false_lit.index()] = kept;
            if conflict.is_some() {
                self.qhead = self.trail.len();
                return conflict;
            }
        }
        None
    }

    fn bump(&mut self, v: usize) {
        self.activity[v] += self.var_inc;
        if self.activity[v] > 1e100 {
            self.activity.iter_mut().for_each(|a| *a *= 1e-100);
            self.var_inc *= 1e-100;
        }
    }

    fn analyze(&mut self, mut confl: usize) -> (Vec<Lit>, u32) {
        let mut learnt = vec![Lit(0)];
        let mut path = 0usize;
        let mut p: Option<Lit> = None;
        let mut idx = self.trail.len();
        loop {
            let start = usize::from(p.is_some());
            let clause = self.clauses[confl].clone();
            for &q in &clause[start..] {
                let v = q.var();
                if !self.seen[v] && self.level[v] > 0 {
                    self.bump(v);
                    self.seen[v] = true;
                    if self.level[v] >= self.decision_level() {
                        path += 1;
                    } else {
                        learnt.push(q);
                    }
                }
            }
            loop {
                idx -= 1;
                if self.seen[self.trail[idx].var()] {
                    break;
                }
            }
            let lit = self.trail[idx];
            p = Some(lit);
            confl = self.reason[lit.var()];
            self.seen[lit.var()] = false;
            path -= 1;
            if path == 0 {
                break;
            }
        }
        learnt[0] = p.unwrap().negate();
        for l in &learnt[1..] {
            self.seen[l.var()] = false;
        }
        let mut bt = 0;
        if learnt.len() > 1 {
            let mut best = 1;
            for i in 2..learnt.len() {
                if self.level[learnt[i].var()] > self.level[learnt[best].var()] {
                    best = i;
                }
            }
            learnt.swap(1, best);
            bt = self.level[learnt[1].var()];
        }
        (learnt, bt)
    }

    fn backtrack(&mut self, level: u32) {
        if self.decision_level() <= level {
            return;
        }
        let lim = self.trail_lim[level as usize];
        for l in self.trail.drain(lim..) {
            let v = l.var();
            self.phase[v] = l.is_positive();
            self.values[v] = 0;
            self.reason[v] = NO_REASON;
        }
        self.trail_lim.truncate(level as usize);
        self.qhead = self.trail.len();
    }

    fn pick_branch(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        for v in 0..self.values.len() {
            if self.values[v] == 0 && best.map_or(true, |b| self.activity[v] > self.activity[b]) {
                best = Some(v);
            }
        }
        best
    }

    /// Search for a model. The solver may be extended with more clauses and
    /// solved again afterwards.
    pub fn solve(&mut self) -> bool {
        if self.inconsistent {
            return false;
        }
        self.backtrack(0);
        if self.propagate().is_some() {
            self.inconsistent = true;
            return false;
        }
        let mut restart = 0u32;
        loop {
            let limit = 64 * luby(restart);
            restart += 1;
            match self.search(limit) {
                Some(result) => return result,
                None => self.backtrack(0),
            }
        }
    }

    fn search(&mut self, conflict_limit: u64) -> Option<bool> {
        let mut conflicts = 0u64;
        loop {
            if let Some(confl) = self.propagate() {
                conflicts += 1;
                if self.decision_level() == 0 {
                    self.inconsistent = true;
                    return Some(false);
                }
                let (learnt, bt) = self.analyze(confl);
                self.backtrack(bt);
                if learnt.len() == 1 {
                    self.enqueue(learnt[0], NO_REASON);
                } else {
                    let cref = self.clauses.len();
                    self.watches[learnt[0].index()].push(cref);
                    self.watches[learnt[1].index()].push(cref);
                    let asserting = learnt[0];
                    self.clauses.push(learnt);
                    self.enqueue(asserting, cref);
                }
                self.var_inc /= 0.95;
            } else {
                if conflicts >= conflict_limit {
                    return None;
                }
                match self.pick_branch() {
                    None => return Some(true),
                    Some(v) => {
                        self.trail_lim.push(self.trail.len());
                        let l = Lit::new(v, self.phase[v]);
                        self.enqueue(l, NO_REASON);
                    }
                }
            }
        }
    }
}

fn luby(mut i: u32) -> u64 {
    // Finite subsequences of the Luby sequence: 1,1,2,1,1,2,4,...
    let mut size = 1u64;
    let mut seq = 0u32;
    while size < u64::from(i) + 1 {
        seq += 1;
        size = 2 * size + 1;
    }
    let mut x = u64::from(i);
    while size - 1 != x {
        size = (size - 1) >> 1;
        seq -= 1;
        x %= size;
    }
    i = seq;
    1u64 << i
}
