//! Propositional grounding over a fixed universe.
//!
//! Function tables are taken from a template structure; predicates become
//! propositional variables. The hash-consed circuit is Tseitin-encoded for the
//! SAT solver. A table entry equal to [`UNDEFINED`] makes every instance that
//! needs it vanish: universal instances are dropped and existential instances
//! do not count, which is how truncated term universes are handled.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::model::eval::{CForm, CTerm};
use crate::model::{Compiled, FiniteStructure};
use crate::sat::{Lit, Solver};

/// Marker for a partial function table entry.
pub const UNDEFINED: usize = usize::MAX;

pub type NodeId = usize;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Node {
    True,
    False,
    Atom(usize, usize),
    Not(NodeId),
    And(Vec<NodeId>),
    Or(Vec<NodeId>),
}

pub struct Grounder<'a> {
    template: &'a FiniteStructure,
    nodes: Vec<Node>,
    memo: BTreeMap<Node, NodeId>,
    dropped: usize,
}

pub const TRUE: NodeId = 0;
pub const FALSE: NodeId = 1;

impl<'a> Grounder<'a> {
    pub fn new(template: &'a FiniteStructure) -> Grounder<'a> {
        let mut g = Grounder { template, nodes: Vec::new(), memo: BTreeMap::new(), dropped: 0 };
        g.intern(Node::True);
        g.intern(Node::False);
        g
    }

    fn intern(&mut self, n: Node) -> NodeId {
        if let Some(&id) = self.memo.get(&n) {
            return id;
        }
        let id = self.nodes.len();
        self.nodes.push(n.clone());
        self.memo.insert(n, id);
        id
    }

    pub fn atom(&mut self, pred: usize, tuple: usize) -> NodeId {
        self.intern(Node::Atom(pred, tuple))
    }

    pub fn not(&mut self, a: NodeId) -> NodeId {
        match self.nodes[a] {
            Node::True => FALSE,
            Node::False => TRUE,
            Node::Not(b) => b,
            _ => self.intern(Node::Not(a)),
        }
    }

    fn junction(&mut self, items: Vec<NodeId>, is_and: bool) -> NodeId {
        let (unit, zero) = if is_and { (TRUE, FALSE) } else { (FALSE, TRUE) };
        let mut cs = Vec::with_capacity(items.len());
        for c in items {
            if c == zero {
                return zero;
            }
            if c == unit {
                continue;
            }
            match (&self.nodes[c], is_and) {
                (Node::And(sub), true) | (Node::Or(sub), false) => cs.extend(sub.iter().copied()),
                _ => cs.push(c),
            }
        }
        cs.sort_unstable();
        cs.dedup();
        for &c in &cs {
            if let Node::Not(b) = self.nodes[c] {
                if cs.binary_search(&b).is_ok() {
                    return zero;
                }
            }
        }
        match cs.len() {
            0 => unit,
            1 => cs[0],
            _ => self.intern(if is_and { Node::And(cs) } else { Node::Or(cs) }),
        }
    }

    pub fn and(&mut self, items: Vec<NodeId>) -> NodeId {
        self.junction(items, true)
    }

    pub fn or(&mut self, items: Vec<NodeId>) -> NodeId {
        self.junction(items, false)
    }

    /// Circuit for a compiled sentence.
    pub fn sentence(&mut self, c: &Compiled) -> NodeId {
        let mut env = vec![0; c.slots.max(1)];
        self.form(&c.form, &mut env).unwrap_or(TRUE)
    }

    fn term(&self, t: &CTerm, env: &[usize]) -> usize {
        match t {
            CTerm::Var(s) => env[*s],
            CTerm::Fn(i, args) => {
                let size = self.template.size;
                let mut idx = 0;
                for a in args {
                    let v = self.term(a, env);
                    if v == UNDEFINED {
                        return UNDEFINED;
                    }
                    idx = idx * size + v;
                }
                self.template.tables[*i][idx]
            }
        }
    }

    /// `None` when the subformula mentions an undefined term.
    fn form(&mut self, f: &CForm, env: &mut [usize]) -> Option<NodeId> {
        Some(match f {
            CForm::Atom(p, args) => {
                let size = self.template.size;
                let mut idx = 0;
                for a in args {
                    let v = self.term(a, env);
                    if v == UNDEFINED {
                        return None;
                    }
                    idx = idx * size + v;
                }
                self.atom(*p, idx)
            }
            CForm::Eq(s, t) => {
                let (a, b) = (self.term(s, env), self.term(t, env));
                if a == UNDEFINED || b == UNDEFINED {
                    return None;
                }
                if a == b {
                    TRUE
                } else {
                    FALSE
                }
            }
            CForm::Not(g) => {
                let x = self.form(g, env)?;
                self.not(x)
            }
            CForm::And(cs) | CForm::Or(cs) => {
                let mut items = Vec::with_capacity(cs.len());
                for c in cs {
                    items.push(self.form(c, env)?);
                }
                self.junction(items, matches!(f, CForm::And(_)))
            }
            CForm::Forall(slots, g) | CForm::Exists(slots, g) => {
                let universal = matches!(f, CForm::Forall(..));
                let mut items = Vec::new();
                self.instances(slots, 0, g, env, &mut items);
                self.junction(items, universal)
            }
            CForm::Const(b) => {
                if *b {
                    TRUE
                } else {
                    FALSE
                }
            }
        })
    }

    fn instances(&mut self, slots: &[usize], i: usize, body: &CForm, env: &mut [usize], out: &mut Vec<NodeId>) {
        if i == slots.len() {
            match self.form(body, env) {
                Some(x) => out.push(x),
                None => self.dropped += 1,
            }
            return;
        }
        for e in 0..self.template.size {
            env[slots[i]] = e;
            self.instances(slots, i + 1, body, env, out);
        }
    }

    /// Quantifier instances skipped so far because a term was undefined.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    /// Value of a circuit node when atoms are read from `a`, which must share
    /// the template's signature and universe.
    pub fn evaluate(&self, root: NodeId, a: &FiniteStructure) -> bool {
        // Children are interned before their parents.
        let mut val = vec![false; root + 1];
        for id in 0..=root {
            val[id] = match &self.nodes[id] {
                Node::True => true,
                Node::False => false,
                Node::Atom(p, t) => a.relations[*p][*t],
                Node::Not(x) => !val[*x],
                Node::And(xs) => xs.iter().all(|x| val[*x]),
                Node::Or(xs) => xs.iter().any(|x| val[*x]),
            };
        }
        val[root]
    }

    /// A structure extending the template's function tables in which `root`
    /// is true, if one exists. Unconstrained atoms are false.
    pub fn solve(&self, root: NodeId) -> Option<FiniteStructure> {
        if root == FALSE {
            return None;
        }
        let mut enc = Encoder { solver: Solver::new(), lits: vec![None; self.nodes.len()], atoms: Vec::new() };
        let l = enc.encode(self, root);
        enc.solver.add_clause(&[l]);
        if !enc.solver.solve() {
            return None;
        }
        let mut out = self.template.clone();
        out.relations.iter_mut().for_each(|r| r.iter_mut().for_each(|b| *b = false));
        for (p, t, v) in enc.atoms {
            out.relations[p][t] = enc.solver.value(v);
        }
        Some(out)
    }
}

struct Encoder {
    solver: Solver,
    lits: Vec<Option<Lit>>,
    atoms: Vec<(usize, usize, usize)>,
}

impl Encoder {
    fn encode(&mut self, g: &Grounder<'_>, id: NodeId) -> Lit {
        if let Some(l) = self.lits[id] {
            return l;
        }
        let l = match &g.nodes[id] {
            Node::True | Node::False => {
                let v = self.solver.new_var();
                let t = Lit::new(v, true);
                self.solver.add_clause(&[t]);
                if id == TRUE {
                    t
                } else {
                    t.negate()
                }
            }
            Node::Atom(p, t) => {
                let v = self.solver.new_var();
                self.atoms.push((*p, *t, v));
                Lit::new(v, true)
            }
            Node::Not(a) => self.encode(g, *a).negate(),
            Node::And(cs) | Node::Or(cs) => {
                let is_and = matches!(g.nodes[id], Node::And(_));
                let ls: Vec<Lit> = cs.iter().map(|&c| self.encode(g, c)).collect();
                let v = Lit::new(self.solver.new_var(), true);
                // For ∧: v → l_i and (∧ l_i) → v. For ∨ the dual.
                let (v_side, big_head) = if is_and { (v.negate(), v) } else { (v, v.negate()) };
                let mut big = vec![big_head];
                for &l in &ls {
                    let li = if is_and { l } else { l.negate() };
                    self.solver.add_clause(&[v_side, li]);
                    big.push(li.negate());
                }
                self.solver.add_clause(&big);
                v
            }
        };
        self.lits[id] = Some(l);
        l
    }
}
