//! Translation of Skolem sentences whose atoms carry at most one variable
//! into sentences over unary predicates, and model transfer in both
//! directions.
//!
//! Atoms are compared up to renaming (`≃`) through a canonical form in which
//! the single variable is called `X1`. The closure `At′` adds the mgu image
//! of every unifiable pair until nothing new appears; each member `A_i` gets
//! a fresh unary predicate `P_i`.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::ground::{Grounder, UNDEFINED};
use crate::model::{evaluate, holds, Compiled, FiniteStructure, ModelError, Signature};
use crate::names::NameSupply;
use crate::subst::{apply_substitution, Substitution};
use crate::syntax::{Formula, Term};
use crate::transform::{check_skolem_shape, SkolemSentence};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MonadizeError {
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("shape violation: {0}")]
    ShapeViolation(String),
    #[error("equality is not supported")]
    EqualityNotSupported,
    #[error("input structure is not a model")]
    InputNotAModel,
    #[error("constructed structure falsifies {0}")]
    ModelCheckFailed(String),
    #[error("term {0} exceeds the depth cap")]
    DepthBoundaryIncomplete(Term),
    #[error(transparent)]
    Model(#[from] ModelError),
}

const CANONICAL_VAR: &str = "X1";

fn atom_parts(a: &Formula) -> Option<(&str, Vec<&Term>)> {
    match a {
        Formula::Atom(p, xs) => Some((p.as_str(), xs.iter().collect())),
        Formula::Eq(s, t) => Some(("=", vec![s, t])),
        _ => None,
    }
}

fn single_var(a: &Formula) -> Result<Option<String>, MonadizeError> {
    let vs = a.atom_vars();
    if vs.len() > 1 {
        return Err(MonadizeError::PreconditionViolated(format!("{a} has more than one variable")));
    }
    Ok(vs.into_iter().next())
}

fn rename_var(a: &Formula, to: &str) -> Formula {
    match a.atom_vars().into_iter().next() {
        Some(v) if v != to => apply_substitution(a, &Substitution::singleton(&v, Term::Var(to.into()))),
        _ => a.clone(),
    }
}

/// Representative of the `≃`-class of an atom with at most one variable.
pub fn canonical_atom(a: &Formula) -> Formula {
    rename_var(a, CANONICAL_VAR)
}

/// Equal up to renaming of the (single) variable.
pub fn is_variant(a: &Formula, b: &Formula) -> bool {
    canonical_atom(a) == canonical_atom(b)
}

fn unify_terms(mut eqs: Vec<(Term, Term)>) -> Option<Substitution> {
    let mut sub = Substitution::new();
    while let Some((s, t)) = eqs.pop() {
        let (s, t) = (sub.apply_term(&s), sub.apply_term(&t));
        match (s, t) {
            (Term::Var(a), Term::Var(b)) if a == b => {}
            (Term::Var(v), t) | (t, Term::Var(v)) => {
                if t.contains_var(&v) {
                    return None;
                }
                sub = sub.then(&Substitution::singleton(&v, t));
            }
            (Term::Const(a), Term::Const(b)) => {
                if a != b {
                    return None;
                }
            }
            (Term::App(f, xs), Term::App(g, ys)) => {
                if f != g || xs.len() != ys.len() {
                    return None;
                }
                eqs.extend(xs.into_iter().zip(ys));
            }
            _ => return None,
        }
    }
    Some(sub)
}

/// Most general unifier of two variable-disjoint atoms with at most one
/// variable each.
pub fn unify_atoms(a: &Formula, b: &Formula) -> Result<Option<Substitution>, MonadizeError> {
    let va = single_var(a)?;
    let vb = single_var(b)?;
    if va.is_some() && va == vb {
        return Err(MonadizeError::PreconditionViolated(format!("{a} and {b} share a variable")));
    }
    let (Some((p, xs)), Some((q, ys))) = (atom_parts(a), atom_parts(b)) else {
        return Err(MonadizeError::PreconditionViolated("not an atom".into()));
    };
    if p != q || xs.len() != ys.len() {
        return Ok(None);
    }
    Ok(unify_terms(xs.into_iter().cloned().zip(ys.into_iter().cloned()).collect()))
}

fn match_term(p: &Term, t: &Term, sub: &mut Substitution) -> bool {
    match (p, t) {
        (Term::Var(v), _) => match sub.get(v) {
            Some(bound) => bound == t,
            None => {
                sub.insert(v, t.clone());
                true
            }
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, sub))
        }
        _ => false,
    }
}

/// `θ` with `pattern θ = target`, treating the variables of `target` as
/// constants.
pub fn match_atom(pattern: &Formula, target: &Formula) -> Option<Substitution> {
    let (p, xs) = atom_parts(pattern)?;
    let (q, ys) = atom_parts(target)?;
    if p != q || xs.len() != ys.len() {
        return None;
    }
    let mut sub = Substitution::new();
    xs.iter().zip(&ys).all(|(x, y)| match_term(x, y, &mut sub)).then_some(sub)
}

/// The closure `At′` with its predicate names and the constant `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AtomClosure {
    /// Canonical members `A_1 … A_q`.
    pub atoms: Vec<Formula>,
    /// Canonical form of each input atom to its member index.
    pub index: BTreeMap<Formula, usize>,
    pub predicates: Vec<String>,
    pub d: String,
    /// Number of distinct input atoms up to `≃`.
    pub seeds: usize,
}

impl AtomClosure {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Member index of an atom up to renaming.
    pub fn position(&self, a: &Formula) -> Option<usize> {
        self.index.get(&canonical_atom(a)).copied()
    }

    /// `A_i` with its variable renamed to `X{i+1}`, so members are pairwise
    /// variable-disjoint.
    pub fn member(&self, i: usize) -> Formula {
        rename_var(&self.atoms[i], &format!("X{}", i + 1))
    }
}

pub fn build_atom_closure(atoms: &[Formula], d: &str) -> Result<AtomClosure, MonadizeError> {
    let mut list: Vec<Formula> = Vec::new();
    let mut index: BTreeMap<Formula, usize> = BTreeMap::new();
    for a in atoms {
        single_var(a)?;
        if atom_parts(a).is_none() {
            return Err(MonadizeError::PreconditionViolated(format!("{a} is not an atom")));
        }
        let c = canonical_atom(a);
        if !index.contains_key(&c) {
            index.insert(c.clone(), list.len());
            list.push(c);
        }
    }
    let seeds = list.len();
    let mut i = 0;
    while i < list.len() {
        for j in 0..i {
            let left = rename_var(&list[j], "V1");
            let right = rename_var(&list[i], "V2");
            if let Some(theta) = unify_atoms(&left, &right)? {
                let c = canonical_atom(&apply_substitution(&left, &theta));
                if !index.contains_key(&c) {
                    index.insert(c.clone(), list.len());
                    list.push(c);
                }
            }
        }
        i += 1;
    }
    let mut names = NameSupply::new(list.iter().flat_map(|a| a.predicates()).map(|(p, _)| p));
    let predicates = (0..list.len()).map(|_| names.fresh("m")).collect();
    Ok(AtomClosure { atoms: list, index, predicates, d: d.into(), seeds })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonadizationResult {
    pub source: SkolemSentence,
    pub closure: AtomClosure,
    /// `∀ū. matrix` with every atom replaced by its unary counterpart.
    pub phi_mon: Formula,
    /// Bridge biconditionals as `(left, right)` pairs over `x_*`.
    pub psi: Vec<(Formula, Formula)>,
    pub psi_prime: Vec<(Formula, Formula)>,
    pub x_star: String,
    /// `φ_Mon ∧ ∀x_*. ⋀(Ψ ∪ Ψ′)`.
    pub phi_prime: Formula,
    /// `d` was not a constant of the input.
    pub d_injected: bool,
}

impl MonadizationResult {
    pub fn phi_sk(&self) -> Formula {
        self.source.to_formula()
    }

    /// `τ_*`: every variable becomes `x_*`.
    pub fn tau_star(&self, t: &Term) -> Term {
        match t {
            Term::Var(_) => Term::Var(self.x_star.clone()),
            Term::Const(_) => t.clone(),
            Term::App(f, xs) => Term::App(f.clone(), xs.iter().map(|x| self.tau_star(x)).collect()),
        }
    }

    /// Function and constant symbols shared by both sentences.
    pub fn herbrand_functions(&self) -> Vec<(String, usize)> {
        let mut sig = Signature::of(&self.phi_sk());
        sig.add_function(&self.closure.d, 0);
        sig.functions
    }
}

fn unary(name: &str, t: Term) -> Formula {
    Formula::Atom(name.into(), vec![t])
}

fn iff(a: Formula, b: Formula) -> Formula {
    Formula::and(vec![
        Formula::or(vec![Formula::negate(a.clone()), b.clone()]),
        Formula::or(vec![a, Formula::negate(b)]),
    ])
}

pub fn monadize(s: &SkolemSentence) -> Result<MonadizationResult, MonadizeError> {
    if s.matrix.has_equality() {
        return Err(MonadizeError::EqualityNotSupported);
    }
    let shape = check_skolem_shape(&s.matrix);
    if let Some((f, k)) = &shape.wide_function {
        return Err(MonadizeError::ShapeViolation(format!("function {f} has arity {k}")));
    }
    if let Some(a) = &shape.multi_variable_atom {
        return Err(MonadizeError::ShapeViolation(format!("atom {a} has several variables")));
    }
    if let Some(t) = &shape.deep_term {
        return Err(MonadizeError::ShapeViolation(format!("argument {t} is nested")));
    }
    let functions = s.matrix.functions();
    let least = functions.iter().filter(|(_, k)| *k == 0).map(|(c, _)| c.clone()).min();
    let d_injected = least.is_none();
    let d = least.unwrap_or_else(|| {
        let mut names = NameSupply::new(functions.iter().map(|(f, _)| f.clone()));
        names.keep_or_fresh("d0")
    });
    let closure = build_atom_closure(&s.matrix.distinct_atoms(), &d)?;
    let matrix = s.matrix.map_atoms(&mut |a| {
        let i = closure.position(a).expect("atom missing from closure");
        match a.atom_vars().into_iter().next() {
            Some(x) => unary(&closure.predicates[i], Term::Var(x)),
            None => unary(&closure.predicates[i], Term::Const(d.clone())),
        }
    });
    let phi_mon = Formula::forall(s.universals.clone(), matrix);

    let mut vars = NameSupply::new(phi_mon.all_vars().into_iter().chain(s.universals.iter().cloned()));
    let x_star = vars.fresh("X");
    let xs = Term::Var(x_star.clone());
    let mut m = MonadizationResult {
        source: s.clone(),
        closure,
        phi_mon,
        psi: Vec::new(),
        psi_prime: Vec::new(),
        x_star,
        phi_prime: Formula::True,
        d_injected,
    };
    let q = m.closure.len();
    for i in 0..q {
        if m.closure.atoms[i].atom_vars().is_empty() {
            continue;
        }
        for j in 0..q {
            if i == j {
                continue;
            }
            let target = m.closure.member(j);
            if let Some(theta) = match_atom(&m.closure.atoms[i], &target) {
                let image = theta.apply_term(&Term::Var(CANONICAL_VAR.into()));
                m.psi.push((unary(&m.closure.predicates[i], m.tau_star(&image)), unary(&m.closure.predicates[j], xs.clone())));
            }
        }
    }
    for j in 0..q {
        if m.closure.atoms[j].atom_vars().is_empty() {
            let name = &m.closure.predicates[j];
            m.psi_prime.push((unary(name, xs.clone()), unary(name, Term::Const(d.clone()))));
        }
    }
    let bridges: Vec<Formula> = m.psi.iter().chain(&m.psi_prime).map(|(a, b)| iff(a.clone(), b.clone())).collect();
    m.phi_prime = if bridges.is_empty() {
        m.phi_mon.clone()
    } else {
        Formula::and(vec![m.phi_mon.clone(), Formula::forall(vec![m.x_star.clone()], Formula::and(bridges))])
    };
    Ok(m)
}

fn conjuncts(f: &Formula) -> Vec<Formula> {
    match f {
        Formula::And(cs) => cs.clone(),
        other => vec![other.clone()],
    }
}

/// Builds `B ⊨ φ′_Sk` from `A ⊨ φ_Sk` on the same universe.
pub fn transfer_model_forward(a: &FiniteStructure, m: &MonadizationResult) -> Result<FiniteStructure, MonadizeError> {
    if !holds(a, &m.phi_sk())? {
        return Err(MonadizeError::InputNotAModel);
    }
    let mut sig = Signature::of(&m.phi_prime);
    for (f, k) in &a.signature.functions {
        sig.add_function(f, *k);
    }
    let mut b = FiniteStructure::new(sig.clone(), a.size);
    for (i, (f, _)) in a.signature.functions.iter().enumerate() {
        let j = sig.function_index(f).expect("function kept");
        b.tables[j] = a.tables[i].clone();
    }
    for (i, atom) in m.closure.atoms.iter().enumerate() {
        let name = &m.closure.predicates[i];
        let ground = atom.atom_vars().is_empty();
        let whole = ground && holds(a, atom)?;
        for t in 0..a.size {
            let v = if ground {
                whole
            } else {
                let beta = [(CANONICAL_VAR.to_string(), t)].into_iter().collect();
                evaluate(a, &beta, atom)?
            };
            b.set(name, &[t], v);
        }
    }
    if !holds(&b, &m.phi_prime)? {
        let culprit = conjuncts(&m.phi_prime).into_iter().find(|c| !holds(&b, c).unwrap_or(false));
        return Err(MonadizeError::ModelCheckFailed(culprit.map_or_else(|| m.phi_prime.to_string(), |c| c.to_string())));
    }
    Ok(b)
}

/// Ground terms up to a nesting depth, with function tables that are
/// undefined where the image would be deeper.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HerbrandUniverse {
    pub depth: usize,
    pub terms: Vec<Term>,
    pub index: BTreeMap<Term, usize>,
    /// Function tables over `terms`; no predicates.
    pub template: FiniteStructure,
}

impl HerbrandUniverse {
    pub fn element(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    /// Value of a term under an assignment, `None` beyond the cap.
    pub fn eval(&self, t: &Term, beta: &BTreeMap<String, usize>) -> Option<usize> {
        match t {
            Term::Var(v) => beta.get(v).copied(),
            Term::Const(c) => self.template.apply(c, &[]).filter(|&e| e != UNDEFINED),
            Term::App(f, xs) => {
                let args = xs.iter().map(|x| self.eval(x, beta)).collect::<Option<Vec<_>>>()?;
                self.template.apply(f, &args).filter(|&e| e != UNDEFINED)
            }
        }
    }
}

/// Requires at least one constant.
pub fn herbrand_universe(functions: &[(String, usize)], depth: usize) -> Result<HerbrandUniverse, MonadizeError> {
    let mut terms: Vec<Term> = functions.iter().filter(|(_, k)| *k == 0).map(|(c, _)| Term::Const(c.clone())).collect();
    if terms.is_empty() {
        return Err(MonadizeError::PreconditionViolated("no constant symbol".into()));
    }
    let mut index: BTreeMap<Term, usize> = terms.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    for _ in 0..depth {
        let current = terms.clone();
        for (f, k) in functions.iter().filter(|(_, k)| *k > 0) {
            for_each_tuple(current.len(), *k, &mut |tuple| {
                let t = Term::App(f.clone(), tuple.iter().map(|&i| current[i].clone()).collect());
                if !index.contains_key(&t) {
                    index.insert(t.clone(), terms.len());
                    terms.push(t);
                }
            });
        }
    }
    let sig = Signature { predicates: Vec::new(), functions: functions.to_vec() };
    let mut template = FiniteStructure::new(sig, terms.len());
    for (fi, (f, k)) in functions.iter().enumerate() {
        let size = terms.len();
        for_each_tuple(size, *k, &mut |tuple| {
            let t = if *k == 0 {
                Term::Const(f.clone())
            } else {
                Term::App(f.clone(), tuple.iter().map(|&i| terms[i].clone()).collect())
            };
            let slot = tuple.iter().fold(0, |acc, &e| acc * size + e);
            template.tables[fi][slot] = index.get(&t).copied().unwrap_or(UNDEFINED);
        });
    }
    Ok(HerbrandUniverse { depth, terms, index, template })
}

fn for_each_tuple(size: usize, arity: usize, visit: &mut impl FnMut(&[usize])) {
    let mut tuple = vec![0; arity];
    loop {
        visit(&tuple);
        let mut i = arity;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            tuple[i] += 1;
            if tuple[i] < size {
                break;
            }
            tuple[i] = 0;
        }
    }
}

/// A model of `f` over the truncated universe in which instances that need
/// an undefined term are skipped.
pub fn herbrand_model(f: &Formula, hu: &HerbrandUniverse) -> Result<Option<FiniteStructure>, MonadizeError> {
    let template = hu.template.extend_signature(&Signature::of(f));
    let compiled = Compiled::new(f, &template.signature)?;
    let mut g = Grounder::new(&template);
    let root = g.sentence(&compiled);
    Ok(g.solve(root))
}

/// Truth of a sentence over a truncated universe, plus the number of
/// skipped instances.
pub fn holds_truncated(a: &FiniteStructure, f: &Formula) -> Result<(bool, usize), MonadizeError> {
    let compiled = Compiled::new(f, &a.signature)?;
    let mut g = Grounder::new(a);
    let root = g.sentence(&compiled);
    Ok((g.evaluate(root, a), g.dropped()))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BackwardTransfer {
    pub structure: FiniteStructure,
    /// Universal instances skipped at the depth boundary while checking.
    pub dropped_instances: usize,
}

fn ground_subterms(t: &Term, out: &mut BTreeSet<Term>) {
    if t.is_ground() {
        out.insert(t.clone());
    }
    if let Term::App(_, xs) = t {
        xs.iter().for_each(|x| ground_subterms(x, out));
    }
}

fn ground_terms_of(f: &Formula, out: &mut BTreeSet<Term>) {
    for a in f.distinct_atoms() {
        if let Some((_, xs)) = atom_parts(&a) {
            xs.into_iter().for_each(|x| ground_subterms(x, out));
        }
    }
}

/// Builds `A ⊨ φ_Sk` from a model `B ⊨ φ′_Sk` over a truncated term
/// universe, with `Q^A = S1 ∪ S2`.
pub fn transfer_model_backward(
    b: &FiniteStructure,
    hu: &HerbrandUniverse,
    m: &MonadizationResult,
) -> Result<BackwardTransfer, MonadizeError> {
    if b.size != hu.terms.len() {
        return Err(MonadizeError::PreconditionViolated("structure is not over the term universe".into()));
    }
    let phi_sk = m.phi_sk();
    let mut needed = BTreeSet::new();
    ground_terms_of(&phi_sk, &mut needed);
    ground_terms_of(&m.phi_prime, &mut needed);
    m.closure.atoms.iter().filter(|a| a.atom_vars().is_empty()).for_each(|a| ground_terms_of(a, &mut needed));
    if let Some(t) = needed.into_iter().find(|t| hu.element(t).is_none()) {
        return Err(MonadizeError::DepthBoundaryIncomplete(t));
    }
    let b_full = b.extend_signature(&hu.template.signature);
    if !holds_truncated(&b_full, &m.phi_prime)?.0 {
        return Err(MonadizeError::InputNotAModel);
    }

    let mut sig = Signature::of(&phi_sk);
    for (f, k) in &hu.template.signature.functions {
        sig.add_function(f, *k);
    }
    let mut a = FiniteStructure::new(sig.clone(), b.size);
    for (i, (f, _)) in hu.template.signature.functions.iter().enumerate() {
        a.tables[sig.function_index(f).unwrap()] = hu.template.tables[i].clone();
    }
    let p_holds = |j: usize, e: usize| b.holds(&m.closure.predicates[j], &[e]).unwrap_or(false);
    let d = hu.element(&Term::Const(m.closure.d.clone())).expect("d is a constant");
    for atom in phi_sk.distinct_atoms() {
        let Some(x) = atom.atom_vars().into_iter().next() else { continue };
        let j = m.closure.position(&atom).expect("atom in closure");
        let (q, args) = atom_parts(&atom).unwrap();
        for e in 0..b.size {
            if !p_holds(j, e) {
                continue;
            }
            let beta = [(x.clone(), e)].into_iter().collect();
            if let Some(tuple) = args.iter().map(|s| hu.eval(s, &beta)).collect::<Option<Vec<_>>>() {
                a.set(q, &tuple, true);
            }
        }
    }
    for (j, atom) in m.closure.atoms.iter().enumerate() {
        if !atom.atom_vars().is_empty() || !p_holds(j, d) {
            continue;
        }
        let (q, args) = atom_parts(atom).unwrap();
        if sig.predicate_index(q).is_none() {
            continue;
        }
        let tuple: Vec<usize> = args.iter().map(|s| hu.element(s).expect("checked above")).collect();
        a.set(q, &tuple, true);
    }
    let (ok, dropped) = holds_truncated(&a, &phi_sk)?;
    if !ok {
        return Err(MonadizeError::ModelCheckFailed(phi_sk.to_string()));
    }
    Ok(BackwardTransfer { structure: a, dropped_instances: dropped })
}
