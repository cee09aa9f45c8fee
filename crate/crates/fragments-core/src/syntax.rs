//! Abstract syntax of first-order formulas.
//!
//! Variables are uppercase-initial names, constants and function symbols are
//! lowercase-initial names. Connectives are n-ary.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: &str) -> Term {
        Term::Const(name.into())
    }

    pub fn app(f: &str, args: Vec<Term>) -> Term {
        if args.is_empty() {
            Term::Const(f.into())
        } else {
            Term::App(f.into(), args)
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) => true,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn contains_var(&self, v: &str) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_var(v)),
        }
    }

    /// Nesting depth of function applications; variables and constants have depth 0.
    pub fn depth(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
            _ => 0,
        }
    }

    /// Number of symbol occurrences.
    pub fn size(&self) -> usize {
        match self {
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            _ => 1,
        }
    }

    pub fn collect_functions(&self, out: &mut Vec<(String, usize)>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => out.push((c.clone(), 0)),
            Term::App(f, args) => {
                out.push((f.clone(), args.len()));
                args.iter().for_each(|a| a.collect_functions(out));
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    /// An opaque unit for Boolean normal forms, keyed by an id.
    Frozen(usize, Box<Formula>),
    True,
    False,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Quantifier {
    Forall,
    Exists,
}

impl Quantifier {
    pub fn dual(self) -> Quantifier {
        match self {
            Quantifier::Forall => Quantifier::Exists,
            Quantifier::Exists => Quantifier::Forall,
        }
    }
}

impl Formula {
    pub fn atom(p: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(p.into(), args)
    }

    pub fn negate(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn quantified(q: Quantifier, vars: Vec<String>, body: Formula) -> Formula {
        match q {
            Quantifier::Forall => Formula::forall(vars, body),
            Quantifier::Exists => Formula::exists(vars, body),
        }
    }

    /// Conjunction with flattening, unit elimination and singleton collapse.
    pub fn and(items: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::True => {}
                Formula::False => return Formula::False,
                Formula::And(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction with flattening, unit elimination and singleton collapse.
    pub fn or(items: Vec<Formula>) -> Formula {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::False => {}
                Formula::True => return Formula::True,
                Formula::Or(cs) => out.extend(cs),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(..) | Formula::Eq(..))
    }

    pub fn is_literal(&self) -> bool {
        match self {
            Formula::Not(inner) => inner.is_atomic(),
            f => f.is_atomic(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            for v in vs {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| add_term(t, bound, out)),
            Formula::Eq(a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Not(f) | Formula::Frozen(_, f) => f.collect_free(bound, out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_free(bound, out)),
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                f.collect_free(bound, out);
                bound.truncate(n);
            }
            Formula::True | Formula::False => {}
        }
    }

    /// All variable names, free or bound.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.walk(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_vars(&mut out)),
            Formula::Eq(a, b) => {
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
            Formula::Forall(vs, _) | Formula::Exists(vs, _) => out.extend(vs.iter().cloned()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn walk<F: FnMut(&Formula)>(&self, visit: &mut F) {
        visit(self);
        match self {
            Formula::Not(f) | Formula::Frozen(_, f) | Formula::Forall(_, f) | Formula::Exists(_, f) => {
                f.walk(visit)
            }
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.walk(visit)),
            _ => {}
        }
    }

    /// Atomic subformulas in left-to-right order, with repetitions.
    pub fn atoms(&self) -> Vec<Formula> {
        let mut out = Vec::new();
        self.walk(&mut |f| {
            if f.is_atomic() {
                out.push(f.clone());
            }
        });
        out
    }

    /// Distinct atomic subformulas in order of first occurrence.
    pub fn distinct_atoms(&self) -> Vec<Formula> {
        let mut seen = BTreeSet::new();
        self.atoms().into_iter().filter(|a| seen.insert(a.clone())).collect()
    }

    /// Literal occurrences of an NNF formula, left to right.
    pub fn literals(&self) -> Vec<Literal> {
        let mut out = Vec::new();
        collect_literals(self, &mut out);
        out
    }

    pub fn has_equality(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| found |= matches!(f, Formula::Eq(..)));
        found
    }

    pub fn has_quantifier(&self) -> bool {
        let mut found = false;
        self.walk(&mut |f| found |= matches!(f, Formula::Forall(..) | Formula::Exists(..)));
        found
    }

    /// Predicate symbols with arities, in order of first occurrence.
    pub fn predicates(&self) -> Vec<(String, usize)> {
        let mut out: Vec<(String, usize)> = Vec::new();
        self.walk(&mut |f| {
            if let Formula::Atom(p, args) = f {
                if !out.iter().any(|(q, k)| q == p && *k == args.len()) {
                    out.push((p.clone(), args.len()));
                }
            }
        });
        out
    }

    /// Function and constant symbols with arities (constants have arity 0).
    pub fn functions(&self) -> Vec<(String, usize)> {
        let mut all = Vec::new();
        self.walk(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_functions(&mut all)),
            Formula::Eq(a, b) => {
                a.collect_functions(&mut all);
                b.collect_functions(&mut all);
            }
            _ => {}
        });
        let mut out: Vec<(String, usize)> = Vec::new();
        for s in all {
            if !out.contains(&s) {
                out.push(s);
            }
        }
        out
    }

    pub fn max_function_arity(&self) -> usize {
        self.functions().iter().map(|(_, k)| *k).max().unwrap_or(0)
    }

    pub fn has_nonconstant_functions(&self) -> bool {
        self.max_function_arity() > 0
    }

    /// Number of symbol occurrences, counting each connective, quantified
    /// variable, predicate, function symbol and variable occurrence once.
    pub fn len(&self) -> usize {
        match self {
            Formula::Atom(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
            Formula::Eq(a, b) => 1 + a.size() + b.size(),
            Formula::Not(f) => 1 + f.len(),
            Formula::Frozen(_, f) => f.len(),
            Formula::And(cs) | Formula::Or(cs) => {
                cs.len().saturating_sub(1) + cs.iter().map(Formula::len).sum::<usize>()
            }
            Formula::Forall(vs, f) | Formula::Exists(vs, f) => 1 + vs.len() + f.len(),
            Formula::True | Formula::False => 1,
        }
    }

    /// Replace every `Frozen` unit by its content.
    pub fn unfreeze(&self) -> Formula {
        match self {
            Formula::Frozen(_, f) => f.unfreeze(),
            Formula::Not(f) => Formula::negate(f.unfreeze()),
            Formula::And(cs) => Formula::And(cs.iter().map(Formula::unfreeze).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(Formula::unfreeze).collect()),
            Formula::Forall(vs, f) => Formula::Forall(vs.clone(), Box::new(f.unfreeze())),
            Formula::Exists(vs, f) => Formula::Exists(vs.clone(), Box::new(f.unfreeze())),
            other => other.clone(),
        }
    }

    /// True if the formula uses only atoms, negated atoms, ∧, ∨ and quantifiers.
    pub fn is_nnf(&self) -> bool {
        match self {
            Formula::Not(f) => f.is_atomic(),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().all(Formula::is_nnf),
            Formula::Forall(_, f) | Formula::Exists(_, f) | Formula::Frozen(_, f) => f.is_nnf(),
            _ => true,
        }
    }

    /// Map every atom through `f`, leaving the connective structure intact.
    pub fn map_atoms<F: FnMut(&Formula) -> Formula>(&self, f: &mut F) -> Formula {
        match self {
            Formula::Atom(..) | Formula::Eq(..) => f(self),
            Formula::Not(g) => Formula::negate(g.map_atoms(f)),
            Formula::Frozen(id, g) => Formula::Frozen(*id, Box::new(g.map_atoms(f))),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.map_atoms(f)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.map_atoms(f)).collect()),
            Formula::Forall(vs, g) => Formula::Forall(vs.clone(), Box::new(g.map_atoms(f))),
            Formula::Exists(vs, g) => Formula::Exists(vs.clone(), Box::new(g.map_atoms(f))),
            Formula::True | Formula::False => self.clone(),
        }
    }

    /// Variables of an atomic formula.
    pub fn atom_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|t| t.collect_vars(&mut out)),
            Formula::Eq(a, b) => {
                a.collect_vars(&mut out);
                b.collect_vars(&mut out);
            }
            _ => {}
        }
        out
    }
}

fn collect_literals(f: &Formula, out: &mut Vec<Literal>) {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => out.push(Literal::new(true, f.clone())),
        Formula::Not(g) if g.is_atomic() => out.push(Literal::new(false, (**g).clone())),
        Formula::Not(g) | Formula::Frozen(_, g) | Formula::Forall(_, g) | Formula::Exists(_, g) => {
            collect_literals(g, out)
        }
        Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| collect_literals(c, out)),
        Formula::True | Formula::False => {}
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub positive: bool,
    /// An `Atom` or `Eq` formula.
    pub atom: Formula,
}

impl Literal {
    pub fn new(positive: bool, atom: Formula) -> Literal {
        debug_assert!(atom.is_atomic());
        Literal { positive, atom }
    }

    pub fn to_formula(&self) -> Formula {
        if self.positive {
            self.atom.clone()
        } else {
            Formula::negate(self.atom.clone())
        }
    }

    pub fn vars(&self) -> BTreeSet<String> {
        self.atom.atom_vars()
    }

    /// Read a literal back from a formula, if it is one.
    pub fn from_formula(f: &Formula) -> Option<Literal> {
        match f {
            Formula::Not(g) if g.is_atomic() => Some(Literal::new(false, (**g).clone())),
            g if g.is_atomic() => Some(Literal::new(true, g.clone())),
            _ => None,
        }
    }
}

/// Symbol table of a formula: predicate and function arities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SymbolTable {
    pub predicates: BTreeMap<String, usize>,
    pub functions: BTreeMap<String, usize>,
}

impl SymbolTable {
    pub fn of(f: &Formula) -> SymbolTable {
        SymbolTable {
            predicates: f.predicates().into_iter().collect(),
            functions: f.functions().into_iter().collect(),
        }
    }
}
