//! Tarskian evaluation. Formulas are compiled once against a signature so
//! that the inner loops work on slot and table indices only.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{FiniteStructure, ModelError, Signature};
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug)]
pub(crate) enum CTerm {
    Var(usize),
    Fn(usize, Vec<CTerm>),
}

#[derive(Clone, Debug)]
pub(crate) enum CForm {
    Atom(usize, Vec<CTerm>),
    Eq(CTerm, CTerm),
    Not(Box<CForm>),
    And(Vec<CForm>),
    Or(Vec<CForm>),
    Forall(Vec<usize>, Box<CForm>),
    Exists(Vec<usize>, Box<CForm>),
    Const(bool),
}

/// A formula compiled against a signature.
#[derive(Clone, Debug)]
pub struct Compiled {
    pub(crate) form: CForm,
    /// Number of variable slots.
    pub(crate) slots: usize,
    /// Free variables and their slots.
    pub(crate) free: Vec<(String, usize)>,
}

struct Compiler<'a> {
    sig: &'a Signature,
    scope: Vec<(String, usize)>,
    free: Vec<(String, usize)>,
    slots: usize,
}

impl Compiler<'_> {
    fn var(&mut self, v: &str) -> usize {
        if let Some((_, s)) = self.scope.iter().rev().find(|(w, _)| w == v) {
            return *s;
        }
        if let Some((_, s)) = self.free.iter().find(|(w, _)| w == v) {
            return *s;
        }
        let s = self.slots;
        self.slots += 1;
        self.free.push((v.into(), s));
        s
    }

    fn term(&mut self, t: &Term) -> Result<CTerm, ModelError> {
        Ok(match t {
            Term::Var(v) => CTerm::Var(self.var(v)),
            Term::Const(c) => CTerm::Fn(self.function(c, 0)?, Vec::new()),
            Term::App(g, args) => {
                let i = self.function(g, args.len())?;
                CTerm::Fn(i, args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
            }
        })
    }

    fn function(&self, g: &str, arity: usize) -> Result<usize, ModelError> {
        match self.sig.function_index(g) {
            Some(i) if self.sig.functions[i].1 == arity => Ok(i),
            _ => Err(ModelError::MissingInterpretation(g.into())),
        }
    }

    fn formula(&mut self, f: &Formula) -> Result<CForm, ModelError> {
        Ok(match f {
            Formula::Atom(p, args) => match self.sig.predicate_index(p) {
                Some(i) if self.sig.predicates[i].1 == args.len() => {
                    CForm::Atom(i, args.iter().map(|a| self.term(a)).collect::<Result<_, _>>()?)
                }
                _ => return Err(ModelError::MissingInterpretation(p.clone())),
            },
            Formula::Eq(a, b) => CForm::Eq(self.term(a)?, self.term(b)?),
            Formula::Not(g) => CForm::Not(Box::new(self.formula(g)?)),
            Formula::Frozen(_, g) => self.formula(g)?,
            Formula::And(cs) => CForm::And(cs.iter().map(|c| self.formula(c)).collect::<Result<_, _>>()?),
            Formula::Or(cs) => CForm::Or(cs.iter().map(|c| self.formula(c)).collect::<Result<_, _>>()?),
            Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
                let depth = self.scope.len();
                let mut slots = Vec::new();
                for v in vs {
                    let s = self.slots;
                    self.slots += 1;
                    self.scope.push((v.clone(), s));
                    slots.push(s);
                }
                let body = Box::new(self.formula(g)?);
                self.scope.truncate(depth);
                if matches!(f, Formula::Forall(..)) {
                    CForm::Forall(slots, body)
                } else {
                    CForm::Exists(slots, body)
                }
            }
            Formula::True => CForm::Const(true),
            Formula::False => CForm::Const(false),
        })
    }
}

fn term_slots(t: &CTerm, out: &mut BTreeSet<usize>) {
    match t {
        CTerm::Var(s) => {
            out.insert(*s);
        }
        CTerm::Fn(_, args) => args.iter().for_each(|a| term_slots(a, out)),
    }
}

/// Every slot mentioned in `f`. Binders get fresh slots, so for a slot bound
/// outside `f` this is exactly "occurs free".
fn form_slots(f: &CForm, out: &mut BTreeSet<usize>) {
    match f {
        CForm::Atom(_, args) => args.iter().for_each(|a| term_slots(a, out)),
        CForm::Eq(s, t) => {
            term_slots(s, out);
            term_slots(t, out);
        }
        CForm::Not(g) | CForm::Forall(_, g) | CForm::Exists(_, g) => form_slots(g, out),
        CForm::And(cs) | CForm::Or(cs) => cs.iter().for_each(|c| form_slots(c, out)),
        CForm::Const(_) => {}
    }
}

fn slots(f: &CForm) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    form_slots(f, &mut out);
    out
}

/// Moves quantifiers inward (miniscoping), bottom-up. Only equivalences
/// valid over non-empty domains are used, so truth values are unchanged;
/// evaluation then ranges over independent variable groups separately.
fn push_quantifiers(f: CForm) -> CForm {
    match f {
        CForm::Not(g) => CForm::Not(Box::new(push_quantifiers(*g))),
        CForm::And(cs) => CForm::And(cs.into_iter().map(push_quantifiers).collect()),
        CForm::Or(cs) => CForm::Or(cs.into_iter().map(push_quantifiers).collect()),
        CForm::Forall(vs, g) => push(true, vs, push_quantifiers(*g)),
        CForm::Exists(vs, g) => push(false, vs, push_quantifiers(*g)),
        other => other,
    }
}

fn quantifier(universal: bool, vs: Vec<usize>, body: CForm) -> CForm {
    if universal {
        CForm::Forall(vs, Box::new(body))
    } else {
        CForm::Exists(vs, Box::new(body))
    }
}

fn push(universal: bool, vs: Vec<usize>, body: CForm) -> CForm {
    let occurring = slots(&body);
    let vs: Vec<usize> = vs.into_iter().filter(|v| occurring.contains(v)).collect();
    if vs.is_empty() {
        return body;
    }
    match body {
        // `∀` over `∧` and `∃` over `∨` distribute.
        CForm::And(cs) if universal => CForm::And(cs.into_iter().map(|c| push(true, vs.clone(), c)).collect()),
        CForm::Or(cs) if !universal => CForm::Or(cs.into_iter().map(|c| push(false, vs.clone(), c)).collect()),
        // Otherwise split the children into groups connected through `vs`.
        CForm::And(cs) | CForm::Or(cs) => {
            let conjunctive = !universal;
            let child_slots: Vec<BTreeSet<usize>> =
                cs.iter().map(|c| slots(c).into_iter().filter(|s| vs.contains(s)).collect()).collect();
            let mut group: Vec<usize> = (0..cs.len()).collect();
            fn find(group: &mut [usize], i: usize) -> usize {
                let mut r = i;
                while group[r] != r {
                    r = group[r];
                }
                group[i] = r;
                r
            }
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    if !child_slots[i].is_disjoint(&child_slots[j]) {
                        let (a, b) = (find(&mut group, i), find(&mut group, j));
                        group[a] = b;
                    }
                }
            }
            let mut parts: BTreeMap<usize, Vec<CForm>> = BTreeMap::new();
            let mut free = Vec::new();
            for (i, c) in cs.into_iter().enumerate() {
                if child_slots[i].is_empty() {
                    free.push(c);
                } else {
                    let root = find(&mut group, i);
                    parts.entry(root).or_default().push(c);
                }
            }
            for (_, mut members) in parts {
                let single = members.len() == 1;
                let inner = if members.len() == 1 {
                    members.pop().unwrap()
                } else if conjunctive {
                    CForm::And(members)
                } else {
                    CForm::Or(members)
                };
                let own: Vec<usize> = vs.iter().copied().filter(|v| slots(&inner).contains(v)).collect();
                free.push(if single { push(universal, own, inner) } else { quantifier(universal, own, inner) });
            }
            if free.len() == 1 {
                free.pop().unwrap()
            } else if conjunctive {
                CForm::And(free)
            } else {
                CForm::Or(free)
            }
        }
        // Quantifiers of one kind commute.
        CForm::Forall(ws, g) if universal => push(true, vs.into_iter().chain(ws).collect(), *g),
        CForm::Exists(ws, g) if !universal => push(false, vs.into_iter().chain(ws).collect(), *g),
        other => quantifier(universal, vs, other),
    }
}

impl Compiled {
    pub fn new(f: &Formula, sig: &Signature) -> Result<Compiled, ModelError> {
        let mut c = Compiler { sig, scope: Vec::new(), free: Vec::new(), slots: 0 };
        let form = push_quantifiers(c.formula(f)?);
        Ok(Compiled { form, slots: c.slots, free: c.free })
    }

    pub fn free_vars(&self) -> impl Iterator<Item = &str> {
        self.free.iter().map(|(v, _)| v.as_str())
    }

    /// Truth value under an assignment of the free variables.
    pub fn eval_with(&self, a: &FiniteStructure, beta: &BTreeMap<String, usize>) -> Result<bool, ModelError> {
        let mut env = vec![0; self.slots.max(1)];
        for (v, s) in &self.free {
            match beta.get(v) {
                Some(&e) if e < a.size => env[*s] = e,
                _ => return Err(ModelError::UnassignedVariable(v.clone())),
            }
        }
        Ok(self.eval(a, &mut env))
    }

    /// Truth value of a sentence.
    pub fn eval_closed(&self, a: &FiniteStructure) -> bool {
        debug_assert!(self.free.is_empty());
        let mut env = vec![0; self.slots.max(1)];
        self.eval(a, &mut env)
    }

    /// Evaluate with an environment indexed by slot.
    pub fn eval(&self, a: &FiniteStructure, env: &mut [usize]) -> bool {
        eval_form(&self.form, a, env)
    }
}

pub(crate) fn eval_term(t: &CTerm, a: &FiniteStructure, env: &[usize]) -> usize {
    match t {
        CTerm::Var(s) => env[*s],
        CTerm::Fn(i, args) => {
            let mut idx = 0;
            for arg in args {
                idx = idx * a.size + eval_term(arg, a, env);
            }
            a.tables[*i][idx]
        }
    }
}

fn eval_form(f: &CForm, a: &FiniteStructure, env: &mut [usize]) -> bool {
    match f {
        CForm::Atom(p, args) => {
            let mut idx = 0;
            for arg in args {
                idx = idx * a.size + eval_term(arg, a, env);
            }
            a.relations[*p][idx]
        }
        CForm::Eq(s, t) => eval_term(s, a, env) == eval_term(t, a, env),
        CForm::Not(g) => !eval_form(g, a, env),
        CForm::And(cs) => cs.iter().all(|c| eval_form(c, a, env)),
        CForm::Or(cs) => cs.iter().any(|c| eval_form(c, a, env)),
        CForm::Forall(slots, g) => quantify(slots, 0, g, a, env, true),
        CForm::Exists(slots, g) => quantify(slots, 0, g, a, env, false),
        CForm::Const(b) => *b,
    }
}

fn quantify(slots: &[usize], i: usize, body: &CForm, a: &FiniteStructure, env: &mut [usize], universal: bool) -> bool {
    if i == slots.len() {
        return eval_form(body, a, env);
    }
    for e in 0..a.size {
        env[slots[i]] = e;
        if quantify(slots, i + 1, body, a, env, universal) != universal {
            return !universal;
        }
    }
    universal
}

/// `A, β ⊨ f`.
pub fn evaluate(a: &FiniteStructure, beta: &BTreeMap<String, usize>, f: &Formula) -> Result<bool, ModelError> {
    Compiled::new(f, &a.signature)?.eval_with(a, beta)
}

/// `A ⊨ f` for a sentence.
pub fn holds(a: &FiniteStructure, f: &Formula) -> Result<bool, ModelError> {
    evaluate(a, &BTreeMap::new(), f)
}
