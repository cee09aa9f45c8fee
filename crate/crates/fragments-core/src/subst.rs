//! Substitutions and capture-avoiding application.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::names::NameSupply;
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Substitution {
    map: BTreeMap<String, Term>,
}

impl Substitution {
    pub fn new() -> Substitution {
        Substitution::default()
    }

    pub fn singleton(v: &str, t: Term) -> Substitution {
        let mut s = Substitution::new();
        s.insert(v, t);
        s
    }

    /// Binds `v`, dropping trivial bindings `v ↦ v`.
    pub fn insert(&mut self, v: &str, t: Term) {
        if t == Term::Var(v.into()) {
            self.map.remove(v);
        } else {
            self.map.insert(v.into(), t);
        }
    }

    pub fn get(&self, v: &str) -> Option<&Term> {
        self.map.get(v)
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Term)> {
        self.map.iter()
    }

    pub fn domain(&self) -> BTreeSet<String> {
        self.map.keys().cloned().collect()
    }

    pub fn range_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.map.values().for_each(|t| t.collect_vars(&mut out));
        out
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.map.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::Const(_) => t.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| self.apply_term(a)).collect()),
        }
    }

    /// `self` followed by `other`: `t(self ∘ other) = (t self) other`.
    pub fn then(&self, other: &Substitution) -> Substitution {
        let mut out = Substitution::new();
        for (v, t) in &self.map {
            out.insert(v, other.apply_term(t));
        }
        for (v, t) in &other.map {
            if !self.map.contains_key(v) {
                out.insert(v, t.clone());
            }
        }
        out
    }

    /// Applies the substitution to its own range until nothing changes.
    /// Returns `None` when bindings are cyclic.
    pub fn normalized(&self) -> Option<Substitution> {
        let mut cur = self.clone();
        for _ in 0..=self.map.len() {
            let next = cur.then(&cur);
            if next == cur {
                return Some(cur);
            }
            cur = next;
        }
        None
    }

    pub fn is_idempotent(&self) -> bool {
        let dom = self.domain();
        self.range_vars().is_disjoint(&dom)
    }
}

impl FromIterator<(String, Term)> for Substitution {
    fn from_iter<I: IntoIterator<Item = (String, Term)>>(iter: I) -> Self {
        let mut s = Substitution::new();
        for (v, t) in iter {
            s.insert(&v, t);
        }
        s
    }
}

/// Replace free occurrences, renaming binders that would capture a variable
/// of an inserted term.
pub fn apply_substitution(f: &Formula, s: &Substitution) -> Formula {
    let mut names = NameSupply::new(f.all_vars());
    for v in s.domain().into_iter().chain(s.range_vars()) {
        names.reserve(&v);
    }
    apply_rec(f, s, &mut names)
}

fn apply_rec(f: &Formula, s: &Substitution, names: &mut NameSupply) -> Formula {
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|t| s.apply_term(t)).collect()),
        Formula::Eq(a, b) => Formula::Eq(s.apply_term(a), s.apply_term(b)),
        Formula::Not(g) => Formula::negate(apply_rec(g, s, names)),
        Formula::Frozen(id, g) => Formula::Frozen(*id, Box::new(apply_rec(g, s, names))),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| apply_rec(c, s, names)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| apply_rec(c, s, names)).collect()),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let free = g.free_vars();
            let mut inner = Substitution::new();
            for (v, t) in s.iter() {
                if !vs.contains(v) && free.contains(v) {
                    inner.insert(v, t.clone());
                }
            }
            let danger = inner.range_vars();
            let mut new_vars = Vec::with_capacity(vs.len());
            for v in vs {
                if danger.contains(v) {
                    let w = names.fresh(v);
                    inner.insert(v, Term::Var(w.clone()));
                    new_vars.push(w);
                } else {
                    new_vars.push(v.clone());
                }
            }
            let body = Box::new(apply_rec(g, &inner, names));
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(new_vars, body)
            } else {
                Formula::Exists(new_vars, body)
            }
        }
        Formula::True | Formula::False => f.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn ground_instance() {
        let f = parse("p(X)").unwrap();
        let s = Substitution::singleton("X", Term::constant("a"));
        assert_eq!(apply_substitution(&f, &s), parse("p(a)").unwrap());
    }

    #[test]
    fn binder_renamed_to_avoid_capture() {
        let f = parse("forall X. p(X,Y)").unwrap();
        let s = Substitution::singleton("Y", parse_term("f(X)"));
        assert_eq!(apply_substitution(&f, &s), parse("forall X1. p(X1,f(X))").unwrap());
    }

    #[test]
    fn repeated_variable() {
        let f = parse("p(X,X)").unwrap();
        let s = Substitution::singleton("X", parse_term("g(Z)"));
        assert_eq!(apply_substitution(&f, &s), parse("p(g(Z),g(Z))").unwrap());
    }

    #[test]
    fn normalization_reaches_idempotence() {
        let s: Substitution =
            [("X".into(), Term::var("Y")), ("Y".into(), Term::constant("a"))].into_iter().collect();
        let n = s.normalized().unwrap();
        assert!(n.is_idempotent());
        assert_eq!(n.get("X"), Some(&Term::constant("a")));
    }

    fn parse_term(text: &str) -> Term {
        match parse(&alloc::format!("q({text})")).unwrap() {
            Formula::Atom(_, mut args) => args.remove(0),
            _ => unreachable!(),
        }
    }
}
