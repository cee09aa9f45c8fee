//! Negation normal form, standard (prenex) form, miniscoping and Boolean
//! normal forms over opaque units.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::names::NameSupply;
use crate::syntax::{Formula, Quantifier};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum NormalFormError {
    #[error("free variable `{0}` in a sentence")]
    FreeVariable(String),
    #[error("normal form exceeds {0} clauses")]
    SizeGuardExceeded(usize),
}

/// Default clause cap for DNF/CNF conversion.
pub const DEFAULT_SIZE_GUARD: usize = 1_000_000;

/// One `∀x̄_i ∃ȳ_i` pair of a standard-form prefix.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub universal: Vec<String>,
    pub existential: Vec<String>,
}

/// `∀x̄_1 ∃ȳ_1 … ∀x̄_n ∃ȳ_n. matrix` with a quantifier-free NNF matrix.
/// Only `x̄_1` and `ȳ_n` may be empty.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StandardForm {
    pub blocks: Vec<Block>,
    pub matrix: Formula,
}

impl StandardForm {
    /// Number of block pairs.
    pub fn n(&self) -> usize {
        self.blocks.len()
    }

    /// 1-based block index of a quantified variable.
    pub fn idx(&self, v: &str) -> Option<usize> {
        self.blocks
            .iter()
            .position(|b| b.universal.iter().any(|x| x == v) || b.existential.iter().any(|y| y == v))
            .map(|i| i + 1)
    }

    pub fn universal_vars(&self) -> BTreeSet<String> {
        self.blocks.iter().flat_map(|b| b.universal.iter().cloned()).collect()
    }

    pub fn existential_vars(&self) -> BTreeSet<String> {
        self.blocks.iter().flat_map(|b| b.existential.iter().cloned()).collect()
    }

    /// `x̄_i` for 1 ≤ i ≤ n.
    pub fn x(&self, i: usize) -> &[String] {
        &self.blocks[i - 1].universal
    }

    /// `ȳ_i` for 1 ≤ i ≤ n.
    pub fn y(&self, i: usize) -> &[String] {
        &self.blocks[i - 1].existential
    }

    pub fn is_universal(&self, v: &str) -> bool {
        self.blocks.iter().any(|b| b.universal.iter().any(|x| x == v))
    }

    pub fn is_existential(&self, v: &str) -> bool {
        self.blocks.iter().any(|b| b.existential.iter().any(|y| y == v))
    }

    /// Quantifier prefix as a flat list.
    pub fn prefix(&self) -> Vec<(Quantifier, String)> {
        let mut out = Vec::new();
        for b in &self.blocks {
            out.extend(b.universal.iter().map(|v| (Quantifier::Forall, v.clone())));
            out.extend(b.existential.iter().map(|v| (Quantifier::Exists, v.clone())));
        }
        out
    }

    /// Maximal runs of equal quantifiers, outermost first.
    pub fn runs(&self) -> Vec<(Quantifier, Vec<String>)> {
        runs_of(&self.prefix())
    }

    /// True for an `∃*∀*` prefix.
    pub fn is_exists_forall(&self) -> bool {
        let runs = self.runs();
        match runs.as_slice() {
            [] | [_] => true,
            [(Quantifier::Exists, _), (Quantifier::Forall, _)] => true,
            _ => false,
        }
    }

    pub fn to_formula(&self) -> Formula {
        let mut f = self.matrix.clone();
        for b in self.blocks.iter().rev() {
            f = Formula::exists(b.existential.clone(), f);
            f = Formula::forall(b.universal.clone(), f);
        }
        f
    }

    /// Build from a flat prefix; adjacent equal quantifiers are merged.
    pub fn from_prefix(prefix: &[(Quantifier, String)], matrix: Formula) -> StandardForm {
        let mut blocks: Vec<Block> = Vec::new();
        for (q, v) in prefix {
            match q {
                Quantifier::Forall => {
                    if blocks.last().map_or(true, |b| !b.existential.is_empty()) {
                        blocks.push(Block::default());
                    }
                    blocks.last_mut().unwrap().universal.push(v.clone());
                }
                Quantifier::Exists => {
                    if blocks.is_empty() {
                        blocks.push(Block::default());
                    }
                    blocks.last_mut().unwrap().existential.push(v.clone());
                }
            }
        }
        StandardForm { blocks, matrix }
    }
}

fn runs_of(prefix: &[(Quantifier, String)]) -> Vec<(Quantifier, Vec<String>)> {
    let mut out: Vec<(Quantifier, Vec<String>)> = Vec::new();
    for (q, v) in prefix {
        match out.last_mut() {
            Some((k, vs)) if k == q => vs.push(v.clone()),
            _ => out.push((*q, vec![v.clone()])),
        }
    }
    out
}

/// Push negations to atoms; constants are simplified away where possible.
pub fn nnf(f: &Formula) -> Formula {
    nnf_pol(f, true)
}

fn nnf_pol(f: &Formula, positive: bool) -> Formula {
    match f {
        Formula::Atom(..) | Formula::Eq(..) => {
            if positive {
                f.clone()
            } else {
                Formula::negate(f.clone())
            }
        }
        Formula::Not(g) => nnf_pol(g, !positive),
        Formula::And(cs) | Formula::Or(cs) => {
            let items = cs.iter().map(|c| nnf_pol(c, positive)).collect();
            if matches!(f, Formula::And(_)) == positive {
                Formula::and(items)
            } else {
                Formula::or(items)
            }
        }
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let body = nnf_pol(g, positive);
            let universal = matches!(f, Formula::Forall(..)) == positive;
            if matches!(body, Formula::True | Formula::False) {
                return body;
            }
            if universal {
                Formula::forall(vs.clone(), body)
            } else {
                Formula::exists(vs.clone(), body)
            }
        }
        Formula::Frozen(id, g) => {
            if positive {
                Formula::Frozen(*id, g.clone())
            } else {
                Formula::negate(Formula::Frozen(*id, g.clone()))
            }
        }
        Formula::True => {
            if positive {
                Formula::True
            } else {
                Formula::False
            }
        }
        Formula::False => {
            if positive {
                Formula::False
            } else {
                Formula::True
            }
        }
    }
}

/// Rename bound variables so that no variable is bound twice or both free and
/// bound; the first binder of a name keeps it. Vacuous binders are dropped.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut names = NameSupply::new(f.all_vars());
    let mut seen: BTreeSet<String> = f.free_vars();
    rename_rec(f, &BTreeMap::new(), &mut names, &mut seen)
}

fn rename_rec(
    f: &Formula,
    scope: &BTreeMap<String, String>,
    names: &mut NameSupply,
    seen: &mut BTreeSet<String>,
) -> Formula {
    let rename_term = |t: &crate::syntax::Term| rename_term(t, scope);
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(rename_term).collect()),
        Formula::Eq(a, b) => Formula::Eq(rename_term(a), rename_term(b)),
        Formula::Not(g) => Formula::negate(rename_rec(g, scope, names, seen)),
        Formula::Frozen(id, g) => Formula::Frozen(*id, Box::new(rename_rec(g, scope, names, seen))),
        Formula::And(cs) => Formula::And(cs.iter().map(|c| rename_rec(c, scope, names, seen)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| rename_rec(c, scope, names, seen)).collect()),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let free = g.free_vars();
            let mut inner = scope.clone();
            let mut new_vars = Vec::new();
            for v in vs {
                if !free.contains(v) || new_vars.contains(v) {
                    inner.remove(v);
                    continue;
                }
                let w = if seen.insert(v.clone()) { v.clone() } else { names.fresh(v) };
                seen.insert(w.clone());
                inner.insert(v.clone(), w.clone());
                new_vars.push(w);
            }
            // A duplicate variable in one binder list binds once.
            let mut dedup = Vec::new();
            for w in new_vars {
                if !dedup.contains(&w) {
                    dedup.push(w);
                }
            }
            let body = rename_rec(g, &inner, names, seen);
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(dedup, body)
            } else {
                Formula::exists(dedup, body)
            }
        }
        Formula::True | Formula::False => f.clone(),
    }
}

fn rename_term(t: &crate::syntax::Term, scope: &BTreeMap<String, String>) -> crate::syntax::Term {
    use crate::syntax::Term;
    match t {
        Term::Var(v) => Term::Var(scope.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::Const(_) => t.clone(),
        Term::App(g, args) => Term::App(g.clone(), args.iter().map(|a| rename_term(a, scope)).collect()),
    }
}

/// Which quantifier kind to pull out first when merging sibling prefixes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum PullPolicy {
    /// Try both kinds at every junction and keep the one with fewer runs.
    FewestAlternations,
    ExistsFirst,
}

fn pull_out(f: &Formula, policy: PullPolicy) -> (Vec<(Quantifier, String)>, Formula) {
    match f {
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let q = if matches!(f, Formula::Forall(..)) { Quantifier::Forall } else { Quantifier::Exists };
            let (mut prefix, m) = pull_out(g, policy);
            let mut head: Vec<(Quantifier, String)> = vs.iter().map(|v| (q, v.clone())).collect();
            head.append(&mut prefix);
            (head, m)
        }
        Formula::And(cs) | Formula::Or(cs) => {
            let parts: Vec<_> = cs.iter().map(|c| pull_out(c, policy)).collect();
            let prefixes: Vec<_> = parts.iter().map(|(p, _)| p.clone()).collect();
            let matrices: Vec<_> = parts.into_iter().map(|(_, m)| m).collect();
            let prefix = match policy {
                PullPolicy::ExistsFirst => merge_prefixes(&prefixes, Quantifier::Exists),
                PullPolicy::FewestAlternations => {
                    let e = merge_prefixes(&prefixes, Quantifier::Exists);
                    let a = merge_prefixes(&prefixes, Quantifier::Forall);
                    if runs_of(&a).len() < runs_of(&e).len() {
                        a
                    } else {
                        e
                    }
                }
            };
            let m = if matches!(f, Formula::And(_)) { Formula::and(matrices) } else { Formula::or(matrices) };
            (prefix, m)
        }
        Formula::Frozen(_, g) => pull_out(g, policy),
        other => (Vec::new(), other.clone()),
    }
}

/// Interleave prefixes of independent conjuncts/disjuncts: repeatedly take
/// every leading quantifier of the current kind from each sibling.
fn merge_prefixes(prefixes: &[Vec<(Quantifier, String)>], start: Quantifier) -> Vec<(Quantifier, String)> {
    let mut pos = vec![0usize; prefixes.len()];
    let mut out = Vec::new();
    let mut kind = start;
    while prefixes.iter().zip(&pos).any(|(p, &i)| i < p.len()) {
        for (p, i) in prefixes.iter().zip(pos.iter_mut()) {
            while *i < p.len() && p[*i].0 == kind {
                out.push(p[*i].clone());
                *i += 1;
            }
        }
        kind = kind.dual();
    }
    out
}

fn check_closed(f: &Formula) -> Result<(), NormalFormError> {
    match f.free_vars().into_iter().next() {
        Some(v) => Err(NormalFormError::FreeVariable(v)),
        None => Ok(()),
    }
}

/// Equivalent standard-form sentence. Siblings' prefixes are interleaved so as
/// to keep the number of quantifier alternations small.
pub fn normalize_standard_form(f: &Formula) -> Result<StandardForm, NormalFormError> {
    check_closed(f)?;
    let g = rename_apart(&nnf(&f.unfreeze()));
    let (prefix, matrix) = pull_out(&g, PullPolicy::FewestAlternations);
    Ok(StandardForm::from_prefix(&prefix, matrix))
}

/// Prenex form pulling existential quantifiers out before universal ones.
pub fn prenex(f: &Formula) -> Result<StandardForm, NormalFormError> {
    check_closed(f)?;
    let g = rename_apart(&nnf(&f.unfreeze()));
    let (prefix, matrix) = pull_out(&g, PullPolicy::ExistsFirst);
    Ok(StandardForm::from_prefix(&prefix, matrix))
}

/// Move quantifiers inward as far as the miniscoping rules allow, then rename
/// bound variables apart.
pub fn miniscope(f: &Formula) -> Formula {
    rename_apart(&ms(f))
}

fn ms(f: &Formula) -> Formula {
    match f {
        Formula::And(cs) => Formula::and(cs.iter().map(ms).collect()),
        Formula::Or(cs) => Formula::or(cs.iter().map(ms).collect()),
        Formula::Forall(vs, g) | Formula::Exists(vs, g) => {
            let q = if matches!(f, Formula::Forall(..)) { Quantifier::Forall } else { Quantifier::Exists };
            let mut r = ms(g);
            for v in vs.iter().rev() {
                r = push(q, v, r);
            }
            r
        }
        other => other.clone(),
    }
}

fn bind(q: Quantifier, v: &str, body: Formula) -> Formula {
    match (q, body) {
        (Quantifier::Forall, Formula::Forall(mut ws, b)) => {
            ws.insert(0, v.into());
            Formula::Forall(ws, b)
        }
        (Quantifier::Exists, Formula::Exists(mut ws, b)) => {
            ws.insert(0, v.into());
            Formula::Exists(ws, b)
        }
        (q, body) => Formula::quantified(q, vec![v.into()], body),
    }
}

fn push(q: Quantifier, v: &str, f: Formula) -> Formula {
    if !f.free_vars().contains(v) {
        return f;
    }
    // ∀ distributes over ∧ and ∃ over ∨.
    let distributes = |g: &Formula| match q {
        Quantifier::Forall => matches!(g, Formula::And(_)),
        Quantifier::Exists => matches!(g, Formula::Or(_)),
    };
    match f {
        ref g if distributes(g) => {
            let cs = match f {
                Formula::And(cs) | Formula::Or(cs) => cs,
                _ => unreachable!(),
            };
            let pushed = cs.into_iter().map(|c| push(q, v, c)).collect();
            match q {
                Quantifier::Forall => Formula::and(pushed),
                Quantifier::Exists => Formula::or(pushed),
            }
        }
        Formula::And(ref cs) | Formula::Or(ref cs) if cs.len() >= 2 => {
            let is_and = matches!(f, Formula::And(_));
            let (with, without): (Vec<_>, Vec<_>) = cs.iter().cloned().partition(|c| c.free_vars().contains(v));
            if without.is_empty() {
                return bind(q, v, f);
            }
            let first = cs.iter().position(|c| c.free_vars().contains(v)).unwrap();
            let group = if is_and { Formula::and(with) } else { Formula::or(with) };
            let pushed = push(q, v, group);
            let mut items = Vec::new();
            let mut rest = without.into_iter();
            for i in 0..cs.len() {
                if i == first {
                    items.push(pushed.clone());
                } else if !cs[i].free_vars().contains(v) {
                    items.push(rest.next().unwrap());
                }
            }
            if is_and {
                Formula::and(items)
            } else {
                Formula::or(items)
            }
        }
        Formula::Forall(ws, b) if q == Quantifier::Forall && !ws.iter().any(|w| w == v) => {
            Formula::forall(ws, push(q, v, *b))
        }
        Formula::Exists(ws, b) if q == Quantifier::Exists && !ws.iter().any(|w| w == v) => {
            Formula::exists(ws, push(q, v, *b))
        }
        other => bind(q, v, other),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFormMode {
    Dnf,
    Cnf,
}

/// Clauses of a DNF (conjunctions) or CNF (disjunctions) over units.
/// Anything that is not `∧`/`∨`/`⊤`/`⊥` is a unit.
pub fn normal_form_clauses(
    f: &Formula,
    mode: NormalFormMode,
    guard: usize,
) -> Result<Vec<Vec<Formula>>, NormalFormError> {
    let clauses = nf_rec(f, mode, guard)?;
    Ok(dedup_clauses(clauses))
}

fn nf_rec(f: &Formula, mode: NormalFormMode, guard: usize) -> Result<Vec<Vec<Formula>>, NormalFormError> {
    // In DNF mode, ∨ concatenates and ∧ multiplies; CNF swaps the roles.
    let (concat, product) = match (f, mode) {
        (Formula::Or(cs), NormalFormMode::Dnf) | (Formula::And(cs), NormalFormMode::Cnf) => (Some(cs), None),
        (Formula::And(cs), NormalFormMode::Dnf) | (Formula::Or(cs), NormalFormMode::Cnf) => (None, Some(cs)),
        _ => (None, None),
    };
    if let Some(cs) = concat {
        let mut out = Vec::new();
        for c in cs {
            out.extend(nf_rec(c, mode, guard)?);
            if out.len() > guard {
                return Err(NormalFormError::SizeGuardExceeded(guard));
            }
        }
        return Ok(dedup_clauses(out));
    }
    if let Some(cs) = product {
        let mut acc: Vec<Vec<Formula>> = vec![Vec::new()];
        for c in cs {
            let part = nf_rec(c, mode, guard)?;
            if acc.len().saturating_mul(part.len()) > guard {
                return Err(NormalFormError::SizeGuardExceeded(guard));
            }
            let mut next = Vec::with_capacity(acc.len() * part.len());
            for a in &acc {
                for p in &part {
                    let mut clause = a.clone();
                    for u in p {
                        if !clause.contains(u) {
                            clause.push(u.clone());
                        }
                    }
                    next.push(clause);
                }
            }
            acc = dedup_clauses(next);
        }
        return Ok(acc);
    }
    let neutral = match mode {
        NormalFormMode::Dnf => Formula::True,
        NormalFormMode::Cnf => Formula::False,
    };
    Ok(match f {
        g if *g == neutral => vec![Vec::new()],
        Formula::True | Formula::False => Vec::new(),
        unit => vec![vec![unit.clone()]],
    })
}

/// Drops duplicate clauses, clauses holding a unit and its negation, and
/// clauses that contain another clause.
fn dedup_clauses(clauses: Vec<Vec<Formula>>) -> Vec<Vec<Formula>> {
    let mut keyed: Vec<(BTreeSet<Formula>, Vec<Formula>)> = Vec::new();
    let mut seen: BTreeSet<Vec<Formula>> = BTreeSet::new();
    for c in clauses {
        let key: BTreeSet<Formula> = c.iter().cloned().collect();
        let complementary = c.iter().any(|u| match u {
            Formula::Not(inner) => key.contains(inner),
            _ => false,
        });
        if !complementary && seen.insert(key.iter().cloned().collect()) {
            keyed.push((key, c));
        }
    }
    let mut order: Vec<usize> = (0..keyed.len()).collect();
    order.sort_by_key(|&i| keyed[i].0.len());
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        if !kept.iter().any(|&k| keyed[k].0.is_subset(&keyed[i].0)) {
            kept.push(i);
        }
    }
    kept.sort_unstable();
    kept.into_iter().map(|i| core::mem::take(&mut keyed[i].1)).collect()
}

/// Reassemble clauses produced by [`normal_form_clauses`].
pub fn clauses_to_formula(clauses: &[Vec<Formula>], mode: NormalFormMode) -> Formula {
    let inner = |c: &Vec<Formula>| match mode {
        NormalFormMode::Dnf => Formula::and(c.clone()),
        NormalFormMode::Cnf => Formula::or(c.clone()),
    };
    let items = clauses.iter().map(inner).collect();
    match mode {
        NormalFormMode::Dnf => Formula::or(items),
        NormalFormMode::Cnf => Formula::and(items),
    }
}

/// DNF or CNF of an NNF formula whose units are literals or frozen subformulas.
pub fn boolean_normal_form(f: &Formula, mode: NormalFormMode, guard: usize) -> Result<Formula, NormalFormError> {
    Ok(clauses_to_formula(&normal_form_clauses(f, mode, guard)?, mode))
}

fn is_unit(f: &Formula) -> bool {
    !matches!(f, Formula::And(_) | Formula::Or(_) | Formula::True | Formula::False)
}

/// Syntactic check for the shape produced by [`boolean_normal_form`].
pub fn is_normal_form(f: &Formula, mode: NormalFormMode) -> bool {
    let (outer_is, inner_is): (fn(&Formula) -> bool, fn(&Formula) -> bool) = match mode {
        NormalFormMode::Dnf => (|g| matches!(g, Formula::Or(_)), |g| matches!(g, Formula::And(_))),
        NormalFormMode::Cnf => (|g| matches!(g, Formula::And(_)), |g| matches!(g, Formula::Or(_))),
    };
    let clause_ok = |g: &Formula| match g {
        Formula::And(cs) | Formula::Or(cs) if inner_is(g) => cs.iter().all(is_unit),
        g => is_unit(g),
    };
    match f {
        Formula::True | Formula::False => true,
        Formula::And(cs) | Formula::Or(cs) if outer_is(f) => cs.iter().all(clause_ok),
        g => clause_ok(g),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    fn p(s: &str) -> Formula {
        parse(s).unwrap()
    }

    #[test]
    fn prenex_exists_y_forall_x() {
        let s = normalize_standard_form(&p("exists Y. forall X. p(X,Y)")).unwrap();
        assert_eq!(s.n(), 2);
        assert!(s.x(1).is_empty());
        assert_eq!(s.y(1), ["Y"]);
        assert_eq!(s.x(2), ["X"]);
        assert!(s.y(2).is_empty());
        assert_eq!(s.matrix, p("p(X,Y)"));
    }

    #[test]
    fn dualization() {
        let s = normalize_standard_form(&p("~(exists Y. ~p(Y))")).unwrap();
        assert_eq!(s.n(), 1);
        assert_eq!(s.x(1), ["Y"]);
        assert_eq!(s.matrix, p("p(Y)"));
    }

    #[test]
    fn free_variable_rejected() {
        assert_eq!(normalize_standard_form(&p("p(X)")), Err(NormalFormError::FreeVariable("X".into())));
    }

    #[test]
    fn rebinding_gets_fresh_name() {
        let s = normalize_standard_form(&p("(forall X. p(X)) & (exists X. q(X))")).unwrap();
        let vars: Vec<_> = s.prefix().into_iter().map(|(_, v)| v).collect();
        assert_eq!(vars.len(), 2);
        assert!(vars.contains(&"X".into()) && vars.contains(&"X1".into()));
    }

    #[test]
    fn idempotent() {
        let f = p("forall X. ((exists Y. r(X,Y)) | (forall Z. ~r(Z,X)))");
        let s = normalize_standard_form(&f).unwrap();
        assert_eq!(normalize_standard_form(&s.to_formula()).unwrap(), s);
    }

    #[test]
    fn miniscope_examples() {
        assert_eq!(
            miniscope(&p("exists Y. (p(Y) | q(Y))")),
            p("(exists Y. p(Y)) | (exists Y1. q(Y1))")
        );
        assert_eq!(miniscope(&p("forall X. (p(X) & q(a))")), p("(forall X. p(X)) & q(a)"));
        assert_eq!(miniscope(&p("forall X. p(a)")), p("p(a)"));
    }

    #[test]
    fn dnf_and_cnf() {
        let dnf = boolean_normal_form(&p("(a | b) & c"), NormalFormMode::Dnf, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(dnf, p("(a & c) | (b & c)"));
        assert!(is_normal_form(&dnf, NormalFormMode::Dnf));
        let cnf = boolean_normal_form(&p("(a & b) | c"), NormalFormMode::Cnf, DEFAULT_SIZE_GUARD).unwrap();
        assert_eq!(cnf, p("(a | c) & (b | c)"));
        let already = p("(a & b) | c");
        assert_eq!(boolean_normal_form(&already, NormalFormMode::Dnf, DEFAULT_SIZE_GUARD).unwrap(), already);
    }

    #[test]
    fn size_guard_is_an_error() {
        let f = p("(a1 | b1) & (a2 | b2) & (a3 | b3)");
        assert_eq!(
            boolean_normal_form(&f, NormalFormMode::Dnf, 4),
            Err(NormalFormError::SizeGuardExceeded(4))
        );
    }

    #[test]
    fn prenex_exists_first() {
        let s = prenex(&p("(exists Y. p(Y)) & (forall X. q(X))")).unwrap();
        assert_eq!(s.to_formula(), p("exists Y. forall X. (p(Y) & q(X))"));
        let s = prenex(&p("(forall X. p(X)) | (forall Z. q(Z))")).unwrap();
        assert_eq!(s.to_formula(), p("forall X Z. (p(X) | q(Z))"));
    }
}
