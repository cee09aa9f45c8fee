//! Ordered resolution with selection for clauses without equality.
//!
//! Terms are ordered by a lexicographic path ordering over a symbol
//! precedence; atoms with different predicates compare by precedence alone,
//! which is what the ordering does on every ground instance. Selected
//! literals are resolved all at once against positive premises, in the
//! style of hyperresolution. Saturation runs a given-clause loop with
//! tautology deletion, condensation and forward subsumption, and records
//! every inference so that refutations can be traced back to their inputs.

use alloc::collections::{BTreeMap, BTreeSet, BinaryHeap};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Reverse;

use crate::normal::{normal_form_clauses, NormalFormError, NormalFormMode, DEFAULT_SIZE_GUARD};
use crate::syntax::{Formula, Term};
use crate::transform::skolemize;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProverError {
    #[error("limit reached: {0}")]
    LimitHit(String),
    #[error("equality is not supported")]
    EqualityNotSupported,
    #[error("not a clause member: {0}")]
    NotALiteral(String),
    #[error("symbol `{0}` used with two arities")]
    ArityClash(String),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PTerm {
    Var(u32),
    App(u32, Vec<PTerm>),
}

impl PTerm {
    fn depth(&self) -> usize {
        match self {
            PTerm::Var(_) => 0,
            PTerm::App(_, args) => 1 + args.iter().map(PTerm::depth).max().unwrap_or(0),
        }
    }

    fn size(&self) -> usize {
        match self {
            PTerm::Var(_) => 1,
            PTerm::App(_, args) => 1 + args.iter().map(PTerm::size).sum::<usize>(),
        }
    }

    fn shift(&self, by: u32) -> PTerm {
        match self {
            PTerm::Var(v) => PTerm::Var(v + by),
            PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| a.shift(by)).collect()),
        }
    }

    fn max_var(&self) -> Option<u32> {
        match self {
            PTerm::Var(v) => Some(*v),
            PTerm::App(_, args) => args.iter().filter_map(PTerm::max_var).max(),
        }
    }

    fn occurs(&self, v: u32) -> bool {
        match self {
            PTerm::Var(w) => *w == v,
            PTerm::App(_, args) => args.iter().any(|a| a.occurs(v)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PLit {
    pub positive: bool,
    pub pred: u32,
    pub args: Vec<PTerm>,
}

impl PLit {
    fn same_atom(&self, other: &PLit) -> bool {
        self.pred == other.pred && self.args == other.args
    }

    fn shift(&self, by: u32) -> PLit {
        PLit { positive: self.positive, pred: self.pred, args: self.args.iter().map(|a| a.shift(by)).collect() }
    }
}

/// A disjunction of literals; the empty clause is falsity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub lits: Vec<PLit>,
}

impl Clause {
    pub fn is_empty(&self) -> bool {
        self.lits.is_empty()
    }

    fn var_span(&self) -> u32 {
        self.lits.iter().flat_map(|l| l.args.iter().filter_map(PTerm::max_var)).max().map_or(0, |m| m + 1)
    }

    fn weight(&self) -> usize {
        self.lits.iter().map(|l| 1 + l.args.iter().map(PTerm::size).sum::<usize>()).sum()
    }

    fn depth(&self) -> usize {
        self.lits.iter().flat_map(|l| l.args.iter().map(PTerm::depth)).max().unwrap_or(0)
    }

    fn is_tautology(&self) -> bool {
        self.lits.iter().enumerate().any(|(i, a)| self.lits[i + 1..].iter().any(|b| a.positive != b.positive && a.same_atom(b)))
    }

    /// Drops repeated literals and numbers variables by first occurrence.
    fn normalized(mut self) -> Clause {
        let mut seen = BTreeSet::new();
        self.lits.retain(|l| seen.insert(l.clone()));
        let mut map = BTreeMap::new();
        fn rename(t: &PTerm, map: &mut BTreeMap<u32, u32>) -> PTerm {
            match t {
                PTerm::Var(v) => {
                    let next = map.len() as u32;
                    PTerm::Var(*map.entry(*v).or_insert(next))
                }
                PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| rename(a, map)).collect()),
            }
        }
        let lits = self
            .lits
            .iter()
            .map(|l| PLit { positive: l.positive, pred: l.pred, args: l.args.iter().map(|a| rename(a, &mut map)).collect() })
            .collect();
        Clause { lits }
    }

    fn signature_mask(&self) -> u64 {
        self.lits.iter().fold(0, |m, l| m | 1 << ((l.pred as u64 * 2 + l.positive as u64) % 64))
    }
}

/// Interned predicate and function symbols.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Symbols {
    names: Vec<String>,
    arity: Vec<usize>,
    is_pred: Vec<bool>,
    lookup: BTreeMap<(bool, String), u32>,
}

impl Symbols {
    pub fn new() -> Symbols {
        Symbols::default()
    }

    fn intern(&mut self, pred: bool, name: &str, arity: usize) -> Result<u32, ProverError> {
        if let Some(&id) = self.lookup.get(&(pred, name.to_string())) {
            if self.arity[id as usize] != arity {
                return Err(ProverError::ArityClash(name.into()));
            }
            return Ok(id);
        }
        let id = self.names.len() as u32;
        self.names.push(name.into());
        self.arity.push(arity);
        self.is_pred.push(pred);
        self.lookup.insert((pred, name.into()), id);
        Ok(id)
    }

    pub fn name(&self, id: u32) -> &str {
        &self.names[id as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    fn term(&mut self, t: &Term, vars: &mut BTreeMap<String, u32>) -> Result<PTerm, ProverError> {
        Ok(match t {
            Term::Var(v) => {
                let next = vars.len() as u32;
                PTerm::Var(*vars.entry(v.clone()).or_insert(next))
            }
            Term::Const(c) => PTerm::App(self.intern(false, c, 0)?, Vec::new()),
            Term::App(f, args) => {
                let id = self.intern(false, f, args.len())?;
                PTerm::App(id, args.iter().map(|a| self.term(a, vars)).collect::<Result<_, _>>()?)
            }
        })
    }

    /// Reads a clause given as a list of literal formulas.
    pub fn clause(&mut self, lits: &[Formula]) -> Result<Clause, ProverError> {
        let mut vars = BTreeMap::new();
        let mut out = Vec::with_capacity(lits.len());
        for l in lits {
            let (positive, atom) = match l {
                Formula::Not(a) => (false, &**a),
                a => (true, a),
            };
            match atom {
                Formula::Atom(p, args) => {
                    let pred = self.intern(true, p, args.len())?;
                    let args = args.iter().map(|a| self.term(a, &mut vars)).collect::<Result<_, _>>()?;
                    out.push(PLit { positive, pred, args });
                }
                Formula::Eq(..) => return Err(ProverError::EqualityNotSupported),
                other => return Err(ProverError::NotALiteral(format!("{other}"))),
            }
        }
        Ok(Clause { lits: out }.normalized())
    }

    pub fn term_formula(&self, t: &PTerm, var: &impl Fn(u32) -> String) -> Term {
        match t {
            PTerm::Var(v) => Term::Var(var(*v)),
            PTerm::App(f, args) if args.is_empty() => Term::Const(self.name(*f).into()),
            PTerm::App(f, args) => Term::App(self.name(*f).into(), args.iter().map(|a| self.term_formula(a, var)).collect()),
        }
    }

    pub fn literal_formula(&self, l: &PLit, var: &impl Fn(u32) -> String) -> Formula {
        let atom = Formula::Atom(self.name(l.pred).into(), l.args.iter().map(|a| self.term_formula(a, var)).collect());
        if l.positive {
            atom
        } else {
            Formula::negate(atom)
        }
    }

    /// The clause as a disjunction with variables named by `var`.
    pub fn clause_formula(&self, c: &Clause, var: &impl Fn(u32) -> String) -> Formula {
        Formula::or(c.lits.iter().map(|l| self.literal_formula(l, var)).collect())
    }

    /// Universal closure of the clause.
    pub fn clause_sentence(&self, c: &Clause) -> Formula {
        let name = |v: u32| format!("X{v}");
        let vars = (0..c.var_span()).map(name).collect();
        Formula::forall(vars, self.clause_formula(c, &name))
    }
}

/// Symbol precedence and literal selection.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OrderingConfig {
    /// Predicates placed above all others.
    pub top_predicates: BTreeSet<String>,
    /// Predicates whose negative literals are selected. They rank above the
    /// remaining predicates.
    pub selected: BTreeSet<String>,
    /// Function symbols placed below all other function symbols.
    pub bottom_functions: BTreeSet<String>,
}

/// Per-symbol rank; larger is greater. Groups from the top: top predicates,
/// selected predicates, other predicates, other functions, bottom
/// functions. Within a group the order is by name.
struct Precedence {
    rank: Vec<(u8, String)>,
    selected: Vec<bool>,
}

impl Precedence {
    fn new(syms: &Symbols, config: &OrderingConfig) -> Precedence {
        let mut rank = Vec::with_capacity(syms.len());
        let mut selected = Vec::with_capacity(syms.len());
        for i in 0..syms.len() {
            let name = &syms.names[i];
            let group = if syms.is_pred[i] {
                if config.top_predicates.contains(name) {
                    4
                } else if config.selected.contains(name) {
                    3
                } else {
                    2
                }
            } else if config.bottom_functions.contains(name) {
                0
            } else {
                1
            };
            rank.push((group, name.clone()));
            selected.push(syms.is_pred[i] && config.selected.contains(name));
        }
        Precedence { rank, selected }
    }

    fn sym_gt(&self, f: u32, g: u32) -> bool {
        self.rank[f as usize] > self.rank[g as usize]
    }

    fn lpo_gt(&self, s: &PTerm, t: &PTerm) -> bool {
        match (s, t) {
            (PTerm::Var(_), _) => false,
            (_, PTerm::Var(x)) => s.occurs(*x),
            (PTerm::App(f, ss), PTerm::App(g, ts)) => {
                if ss.iter().any(|si| si == t || self.lpo_gt(si, t)) {
                    return true;
                }
                if self.sym_gt(*f, *g) {
                    return ts.iter().all(|tj| self.lpo_gt(s, tj));
                }
                if f == g {
                    return match ss.iter().zip(ts).position(|(a, b)| a != b) {
                        Some(i) => self.lpo_gt(&ss[i], &ts[i]) && ts[i + 1..].iter().all(|tj| self.lpo_gt(s, tj)),
                        None => false,
                    };
                }
                false
            }
        }
    }

    /// Atom ordering lifted from ground instances: predicates first, then
    /// arguments lexicographically.
    fn atom_gt(&self, a: &PLit, b: &PLit) -> bool {
        if a.pred != b.pred {
            return self.sym_gt(a.pred, b.pred);
        }
        match a.args.iter().zip(&b.args).position(|(x, y)| x != y) {
            Some(i) => self.lpo_gt(&a.args[i], &b.args[i]),
            None => false,
        }
    }

    /// `¬A ≻ A`, otherwise literals compare by their atoms.
    fn lit_gt(&self, a: &PLit, b: &PLit) -> bool {
        self.atom_gt(a, b) || (a.same_atom(b) && !a.positive && b.positive)
    }

    fn has_selection(&self, c: &Clause) -> bool {
        c.lits.iter().any(|l| self.is_selected(l))
    }

    fn is_selected(&self, l: &PLit) -> bool {
        !l.positive && self.selected[l.pred as usize]
    }

    /// `c.lits[i]` is maximal: no other literal is greater.
    fn maximal(&self, c: &[PLit], i: usize) -> bool {
        c.iter().enumerate().all(|(j, l)| j == i || !self.lit_gt(l, &c[i]))
    }

    /// `c.lits[i]` is strictly maximal: no other literal is greater or equal.
    fn strictly_maximal(&self, c: &[PLit], i: usize) -> bool {
        c.iter().enumerate().all(|(j, l)| j == i || (!self.lit_gt(l, &c[i]) && l != &c[i]))
    }
}

type Binding = BTreeMap<u32, PTerm>;

fn resolve(t: &PTerm, sub: &Binding) -> PTerm {
    match t {
        PTerm::Var(v) => match sub.get(v) {
            Some(u) => resolve(u, sub),
            None => t.clone(),
        },
        PTerm::App(f, args) => PTerm::App(*f, args.iter().map(|a| resolve(a, sub)).collect()),
    }
}

fn unify(s: &PTerm, t: &PTerm, sub: &mut Binding) -> bool {
    let (s, t) = (resolve(s, sub), resolve(t, sub));
    match (&s, &t) {
        (PTerm::Var(x), PTerm::Var(y)) if x == y => true,
        (PTerm::Var(x), u) | (u, PTerm::Var(x)) => {
            if u.occurs(*x) {
                return false;
            }
            sub.insert(*x, u.clone());
            true
        }
        (PTerm::App(f, xs), PTerm::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(a, b)| unify(a, b, sub))
        }
    }
}

fn unify_atoms(a: &PLit, b: &PLit, sub: &mut Binding) -> bool {
    a.pred == b.pred && a.args.len() == b.args.len() && a.args.iter().zip(&b.args).all(|(x, y)| unify(x, y, sub))
}

fn apply_lit(l: &PLit, sub: &Binding) -> PLit {
    PLit { positive: l.positive, pred: l.pred, args: l.args.iter().map(|a| resolve(a, sub)).collect() }
}

/// One-sided matching: binds variables of `p` only.
fn match_term(p: &PTerm, t: &PTerm, sub: &mut Binding) -> bool {
    match p {
        PTerm::Var(v) => match sub.get(v) {
            Some(bound) => bound == t,
            None => {
                sub.insert(*v, t.clone());
                true
            }
        },
        PTerm::App(f, ps) => match t {
            PTerm::App(g, ts) => f == g && ps.len() == ts.len() && ps.iter().zip(ts).all(|(a, b)| match_term(a, b, sub)),
            PTerm::Var(_) => false,
        },
    }
}

fn match_lits(c: &[PLit], d: &[PLit], sub: &Binding) -> bool {
    let Some((first, rest)) = c.split_first() else {
        return true;
    };
    for l in d {
        if l.positive != first.positive || l.pred != first.pred {
            continue;
        }
        let mut s = sub.clone();
        if first.args.iter().zip(&l.args).all(|(a, b)| match_term(a, b, &mut s)) && match_lits(rest, d, &s) {
            return true;
        }
    }
    false
}

/// Some instance of `c` is a subset of `d`, and `c` is no longer than `d`.
pub fn subsumes(c: &Clause, d: &Clause) -> bool {
    c.lits.len() <= d.lits.len() && match_lits(&c.lits, &d.lits, &Binding::new())
}

/// Replaces the clause by a proper instance that is also a subset, while
/// one exists.
pub fn condense(mut c: Clause) -> Clause {
    'outer: loop {
        for i in 0..c.lits.len() {
            for j in i + 1..c.lits.len() {
                let (a, b) = (&c.lits[i], &c.lits[j]);
                if a.positive != b.positive {
                    continue;
                }
                let mut sub = Binding::new();
                if !unify_atoms(a, b, &mut sub) {
                    continue;
                }
                let smaller = Clause { lits: c.lits.iter().map(|l| apply_lit(l, &sub)).collect() }.normalized();
                if smaller.lits.len() < c.lits.len() && subsumes(&smaller, &c) {
                    c = smaller;
                    continue 'outer;
                }
            }
        }
        return c;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ProverLimits {
    /// Kept clauses, inputs included.
    pub max_clauses: usize,
    /// Deeper clauses are dropped; saturation then reports a limit.
    pub max_depth: usize,
}

impl Default for ProverLimits {
    fn default() -> Self {
        ProverLimits { max_clauses: 50_000, max_depth: 16 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Origin {
    /// An input clause with a caller-chosen tag.
    Input(usize),
    /// The first premise holds the resolved negative literals, the others
    /// the positive partners in order.
    Resolution(Vec<usize>),
    Factoring(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub clause: Clause,
    pub origin: Origin,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// Id of the derived empty clause.
    Refuted(usize),
    Saturated,
}

/// Given-clause saturation with a recorded derivation graph.
pub struct Saturator {
    prec: Precedence,
    limits: ProverLimits,
    pub nodes: Vec<Node>,
    active: Vec<usize>,
    passive: BinaryHeap<Reverse<(usize, usize)>>,
    kept: Vec<(u64, usize)>,
    dropped_deep: usize,
    pub inferences: usize,
}

impl Saturator {
    pub fn new(syms: &Symbols, config: &OrderingConfig, limits: ProverLimits) -> Saturator {
        Saturator {
            prec: Precedence::new(syms, config),
            limits,
            nodes: Vec::new(),
            active: Vec::new(),
            passive: BinaryHeap::new(),
            kept: Vec::new(),
            dropped_deep: 0,
            inferences: 0,
        }
    }

    /// Simplifies and stores a clause unless it is redundant. Returns its id.
    fn insert(&mut self, clause: Clause, origin: Origin) -> Result<Option<usize>, ProverError> {
        if clause.is_tautology() {
            return Ok(None);
        }
        if clause.depth() > self.limits.max_depth {
            self.dropped_deep += 1;
            return Ok(None);
        }
        let clause = condense(clause.normalized());
        let mask = clause.signature_mask();
        if self.kept.iter().any(|&(m, id)| m & !mask == 0 && subsumes(&self.nodes[id].clause, &clause)) {
            return Ok(None);
        }
        if self.kept.len() >= self.limits.max_clauses {
            return Err(ProverError::LimitHit(format!("more than {} clauses", self.limits.max_clauses)));
        }
        let id = self.nodes.len();
        self.passive.push(Reverse((clause.weight(), id)));
        self.kept.push((mask, id));
        self.nodes.push(Node { clause, origin });
        Ok(Some(id))
    }

    pub fn add_input(&mut self, clause: Clause, tag: usize) -> Result<Option<usize>, ProverError> {
        self.insert(clause, Origin::Input(tag))
    }

    /// Clauses currently kept, in insertion order.
    pub fn kept_clauses(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.kept.iter().map(|&(_, id)| id).collect();
        ids.sort_unstable();
        ids
    }

    pub fn run(&mut self) -> Result<Outcome, ProverError> {
        if let Some(id) = self.kept.iter().map(|&(_, id)| id).find(|&id| self.nodes[id].clause.is_empty()) {
            return Ok(Outcome::Refuted(id));
        }
        while let Some(Reverse((_, given))) = self.passive.pop() {
            self.active.push(given);
            for (clause, origin) in self.infer(given) {
                self.inferences += 1;
                if let Some(id) = self.insert(clause, origin)? {
                    if self.nodes[id].clause.is_empty() {
                        return Ok(Outcome::Refuted(id));
                    }
                }
            }
        }
        if self.dropped_deep > 0 {
            return Err(ProverError::LimitHit(format!("{} clauses beyond term depth {}", self.dropped_deep, self.limits.max_depth)));
        }
        Ok(Outcome::Saturated)
    }

    fn infer(&self, given: usize) -> Vec<(Clause, Origin)> {
        let mut out = Vec::new();
        let g = &self.nodes[given].clause;
        if !self.prec.has_selection(g) {
            self.factor(given, &mut out);
        }
        // `given` as the negative premise, partners from the active set.
        self.resolve_negative(given, None, &mut out);
        // `given` as a positive partner of an earlier active clause.
        if !self.prec.has_selection(g) {
            for &d in &self.active {
                if d != given {
                    self.resolve_negative(d, Some(given), &mut out);
                }
            }
        }
        out
    }

    fn factor(&self, id: usize, out: &mut Vec<(Clause, Origin)>) {
        let c = &self.nodes[id].clause.lits;
        for i in 0..c.len() {
            for j in i + 1..c.len() {
                if !(c[i].positive && c[j].positive) {
                    continue;
                }
                let mut sub = Binding::new();
                if !unify_atoms(&c[i], &c[j], &mut sub) {
                    continue;
                }
                let inst: Vec<PLit> = c.iter().map(|l| apply_lit(l, &sub)).collect();
                if !self.prec.maximal(&inst, i) {
                    continue;
                }
                let lits = inst.into_iter().enumerate().filter(|(k, _)| *k != j).map(|(_, l)| l).collect();
                out.push((Clause { lits }, Origin::Factoring(id)));
            }
        }
    }

    /// Resolution steps whose negative premise is `d`. With `required`, at
    /// least one positive partner must be that clause.
    fn resolve_negative(&self, d: usize, required: Option<usize>, out: &mut Vec<(Clause, Origin)>) {
        let dc = &self.nodes[d].clause;
        let selected: Vec<usize> = (0..dc.lits.len()).filter(|&i| self.prec.is_selected(&dc.lits[i])).collect();
        let targets: Vec<Vec<usize>> = if selected.is_empty() {
            (0..dc.lits.len()).filter(|&i| !dc.lits[i].positive).map(|i| vec![i]).collect()
        } else {
            vec![selected.clone()]
        };
        let partners: Vec<usize> = self
            .active
            .iter()
            .copied()
            .chain(required)
            .filter(|&p| !self.prec.has_selection(&self.nodes[p].clause))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        for target in targets {
            let mut chosen = Vec::new();
            self.hyper(d, &target, selected.is_empty(), &partners, required, dc.var_span(), &mut chosen, Binding::new(), out);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn hyper(
        &self,
        d: usize,
        target: &[usize],
        check_max: bool,
        partners: &[usize],
        required: Option<usize>,
        offset: u32,
        chosen: &mut Vec<(usize, usize, u32)>,
        sub: Binding,
        out: &mut Vec<(Clause, Origin)>,
    ) {
        let dc = &self.nodes[d].clause;
        let k = chosen.len();
        if k == target.len() {
            if let Some(r) = required {
                if !chosen.iter().any(|&(p, _, _)| p == r) {
                    return;
                }
            }
            let d_inst: Vec<PLit> = dc.lits.iter().map(|l| apply_lit(l, &sub)).collect();
            if check_max && !self.prec.maximal(&d_inst, target[0]) {
                return;
            }
            let mut lits: Vec<PLit> = d_inst.into_iter().enumerate().filter(|(i, _)| !target.contains(i)).map(|(_, l)| l).collect();
            for &(p, a, shift) in chosen.iter() {
                let inst: Vec<PLit> = self.nodes[p].clause.lits.iter().map(|l| apply_lit(&l.shift(shift), &sub)).collect();
                if !self.prec.strictly_maximal(&inst, a) {
                    return;
                }
                lits.extend(inst.into_iter().enumerate().filter(|(i, _)| *i != a).map(|(_, l)| l));
            }
            let mut premises = vec![d];
            premises.extend(chosen.iter().map(|&(p, _, _)| p));
            out.push((Clause { lits }, Origin::Resolution(premises)));
            return;
        }
        let neg = &dc.lits[target[k]];
        for &p in partners {
            let pc = &self.nodes[p].clause;
            for (a, lit) in pc.lits.iter().enumerate() {
                if !lit.positive || lit.pred != neg.pred {
                    continue;
                }
                let shifted = lit.shift(offset);
                let mut s = sub.clone();
                if !unify_atoms(&shifted, neg, &mut s) {
                    continue;
                }
                chosen.push((p, a, offset));
                self.hyper(d, target, check_max, partners, required, offset + pc.var_span(), chosen, s, out);
                chosen.pop();
            }
        }
    }

    /// Input clauses the given node was derived from, by tag.
    pub fn input_ancestors(&self, id: usize) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut leaves = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            match &self.nodes[n].origin {
                Origin::Input(_) => {
                    leaves.insert(n);
                }
                Origin::Resolution(ps) => stack.extend(ps.iter().copied()),
                Origin::Factoring(p) => stack.push(*p),
            }
        }
        leaves
    }

    /// Inference nodes in the derivation of `id`, with their premises.
    pub fn derivation(&self, id: usize) -> Vec<usize> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![id];
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            match &self.nodes[n].origin {
                Origin::Input(_) => {}
                Origin::Resolution(ps) => stack.extend(ps.iter().copied()),
                Origin::Factoring(p) => stack.push(*p),
            }
        }
        seen.into_iter().collect()
    }
}

/// Clauses of the Skolemized CNF of a closed sentence.
pub fn clausify(f: &Formula, syms: &mut Symbols) -> Result<Vec<Clause>, ProverError> {
    if f.has_equality() {
        return Err(ProverError::EqualityNotSupported);
    }
    let sk = skolemize(f);
    normal_form_clauses(&sk.matrix, NormalFormMode::Cnf, DEFAULT_SIZE_GUARD)?
        .iter()
        .map(|c| syms.clause(c))
        .collect()
}

/// `true` when saturation derives the empty clause from `f`; `false` when
/// the clause set saturates without it.
pub fn refute(f: &Formula, limits: ProverLimits) -> Result<bool, ProverError> {
    let mut syms = Symbols::new();
    let clauses = clausify(f, &mut syms)?;
    let mut sat = Saturator::new(&syms, &OrderingConfig::default(), limits);
    for c in clauses {
        sat.add_input(c, 0)?;
    }
    Ok(matches!(sat.run()?, Outcome::Refuted(_)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{check_equivalence, Equivalence};
    use crate::parser::parse;

    fn clauses(syms: &mut Symbols, text: &[&str]) -> Vec<Clause> {
        text.iter()
            .map(|t| {
                let f = parse(t).unwrap();
                let lits = match f {
                    Formula::Or(ls) => ls,
                    l => vec![l],
                };
                syms.clause(&lits).unwrap()
            })
            .collect()
    }

    fn saturate(text: &[&str], config: &OrderingConfig) -> (Symbols, Saturator, Outcome) {
        let mut syms = Symbols::new();
        let cs = clauses(&mut syms, text);
        let mut sat = Saturator::new(&syms, config, ProverLimits::default());
        for c in cs {
            sat.add_input(c, 0).unwrap();
        }
        let out = sat.run().unwrap();
        (syms, sat, out)
    }

    fn texts(syms: &Symbols, sat: &Saturator) -> BTreeSet<String> {
        sat.kept_clauses().iter().map(|&i| format!("{}", syms.clause_formula(&sat.nodes[i].clause, &|v| format!("X{v}")))).collect()
    }

    #[test]
    fn unit_propagation() {
        // r is above q, so ¬r(X) is maximal.
        let (syms, sat, out) = saturate(&["r(a)", "~r(X) | q(X)"], &OrderingConfig::default());
        assert_eq!(out, Outcome::Saturated);
        assert!(texts(&syms, &sat).contains("q(a)"));
        // p is below q: the ordering forbids the step.
        let (syms, sat, _) = saturate(&["p(a)", "~p(X) | q(X)"], &OrderingConfig::default());
        assert!(!texts(&syms, &sat).contains("q(a)"));
    }

    #[test]
    fn direct_refutation() {
        let (_, sat, out) = saturate(&["p(X)", "~p(a)"], &OrderingConfig::default());
        let Outcome::Refuted(id) = out else { panic!("expected a refutation") };
        assert_eq!(sat.input_ancestors(id).len(), 2);
    }

    #[test]
    fn selection_restricts_resolution() {
        let config = OrderingConfig { selected: BTreeSet::from(["r".to_string()]), ..OrderingConfig::default() };
        let (syms, sat, _) = saturate(&["~r(X) | ~q(X)", "q(a)", "r(b)"], &config);
        let all = texts(&syms, &sat);
        // Only the selected ¬r(X) may be resolved away.
        assert!(all.contains("~q(b)"), "{all:?}");
        assert!(!all.contains("~r(a)"), "{all:?}");
        for id in sat.kept_clauses() {
            if let Origin::Resolution(ps) = &sat.nodes[id].origin {
                let d = &sat.nodes[ps[0]].clause;
                if d.lits.iter().any(|l| !l.positive && syms.name(l.pred) == "r") {
                    assert!(sat.nodes[id].clause.lits.iter().all(|l| syms.name(l.pred) != "r" || l.positive));
                }
            }
        }
    }

    #[test]
    fn ordering_blocks_non_maximal_literals() {
        let config = OrderingConfig { top_predicates: BTreeSet::from(["p".to_string()]), ..OrderingConfig::default() };
        let (syms, sat, out) = saturate(&["p(X) | q(X)", "~q(a)"], &config);
        assert_eq!(out, Outcome::Saturated);
        assert!(!texts(&syms, &sat).contains("p(a)"));
        let (syms, sat, _) = saturate(&["p(X) | q(X)", "~q(a)"], &OrderingConfig::default());
        assert!(texts(&syms, &sat).contains("p(a)"));
    }

    #[test]
    fn factoring_and_condensation() {
        let mut syms = Symbols::new();
        let c = clauses(&mut syms, &["p(X) | p(Y) | q(Y)"]).remove(0);
        assert_eq!(condense(c).lits.len(), 2);
        let (_, _, out) = saturate(&["p(X) | p(a)", "~p(a)"], &OrderingConfig::default());
        assert!(matches!(out, Outcome::Refuted(_)));
    }

    #[test]
    fn subsumption_is_one_sided() {
        let mut syms = Symbols::new();
        let cs = clauses(&mut syms, &["p(X, Y)", "p(a, Z)", "p(X, X) | q(X)"]);
        assert!(subsumes(&cs[0], &cs[1]));
        assert!(!subsumes(&cs[1], &cs[0]));
        assert!(subsumes(&cs[0], &cs[2]));
    }

    #[test]
    fn refutation_of_sentences() {
        let lim = ProverLimits::default();
        assert!(refute(&parse("(forall X. (p(X) | q(X))) & (exists Y. (~p(Y) & ~q(Y)))").unwrap(), lim).unwrap());
        assert!(!refute(&parse("forall X. exists Y. (p(X) | q(Y))").unwrap(), lim).unwrap());
        assert_eq!(refute(&parse("exists X. X = X").unwrap(), lim), Err(ProverError::EqualityNotSupported));
    }

    #[test]
    fn every_inference_is_sound() {
        let (syms, sat, _) = saturate(
            &["~p(X) | q(X, f(X))", "p(a) | r(a)", "~q(X, Y) | ~r(Y)", "r(f(a)) | p(X)"],
            &OrderingConfig { selected: BTreeSet::from(["r".to_string()]), ..OrderingConfig::default() },
        );
        for id in sat.kept_clauses() {
            let premises: Vec<usize> = match &sat.nodes[id].origin {
                Origin::Input(_) => continue,
                Origin::Resolution(ps) => ps.clone(),
                Origin::Factoring(p) => vec![*p],
            };
            let lhs = Formula::and(premises.iter().map(|&p| syms.clause_sentence(&sat.nodes[p].clause)).collect());
            let both = Formula::and(vec![lhs.clone(), syms.clause_sentence(&sat.nodes[id].clause)]);
            // premises ⊨ conclusion iff premises ≡ premises ∧ conclusion.
            assert_eq!(check_equivalence(&lhs, &both, 2), Ok(Equivalence::Pass));
        }
    }
}
