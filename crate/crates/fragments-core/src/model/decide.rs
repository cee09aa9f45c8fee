//! Satisfiability by model search, and bounded equivalence checking.
//!
//! Predicates are handled by grounding into SAT; function and constant
//! interpretations are enumerated explicitly. Without non-constant functions
//! the constants are enumerated only up to renaming of elements.

use core::ops::ControlFlow;

use alloc::vec::Vec;

use super::enumerate::for_each_structure;
use super::{pow, structure_count, Compiled, FiniteStructure, ModelError, Signature};
use crate::ground::Grounder;
use crate::normal::StandardForm;
use crate::syntax::Formula;

/// Default cap on the number of structures or function interpretations
/// examined per universe size.
pub const DEFAULT_BUDGET: u128 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Sat(FiniteStructure),
    Unsat,
    UnsatAtBound(usize),
    Unknown(usize),
}

impl Verdict {
    pub fn is_sat(&self) -> bool {
        matches!(self, Verdict::Sat(_))
    }

    pub fn model(&self) -> Option<&FiniteStructure> {
        match self {
            Verdict::Sat(m) => Some(m),
            _ => None,
        }
    }
}

/// Universe size up to which a function-free `∃*∀*` sentence has a model if
/// it has one at all.
pub fn bsr_size_bound(s: &StandardForm) -> usize {
    let consts = Signature::of(&s.matrix).constants().len();
    consts.max(1) + s.existential_vars().len()
}

fn function_interpretation_count(sig: &Signature, size: usize) -> Option<u128> {
    let tables_only = Signature { predicates: Vec::new(), functions: sig.functions.clone() };
    structure_count(&tables_only, size)
}

/// Visit templates carrying every interpretation of the function symbols.
/// Without non-constant functions, constants follow restricted growth order
/// so that each interpretation is visited once up to element renaming.
fn for_each_function_interpretation<F>(sig: &Signature, size: usize, budget: u128, mut visit: F) -> Result<bool, ModelError>
where
    F: FnMut(&FiniteStructure) -> ControlFlow<()>,
{
    match function_interpretation_count(sig, size) {
        Some(c) if c <= budget => {}
        _ => return Err(ModelError::BudgetExceeded(budget)),
    }
    let mut a = FiniteStructure::new(sig.clone(), size);
    let symmetric = !sig.has_nonconstant_functions();
    let digits: Vec<(usize, usize)> = sig
        .functions
        .iter()
        .enumerate()
        .flat_map(|(i, (_, k))| (0..pow(size, *k)).map(move |t| (i, t)))
        .collect();
    loop {
        let canonical = !symmetric || {
            let mut max_seen: Option<usize> = None;
            a.tables.iter().all(|t| {
                let v = t[0];
                let ok = v <= max_seen.map_or(0, |m| m + 1);
                max_seen = Some(max_seen.map_or(v, |m| m.max(v)));
                ok
            })
        };
        if canonical && visit(&a).is_break() {
            return Ok(true);
        }
        let mut carried = true;
        for &(i, t) in &digits {
            a.tables[i][t] += 1;
            if a.tables[i][t] < size {
                carried = false;
                break;
            }
            a.tables[i][t] = 0;
        }
        if carried {
            return Ok(false);
        }
    }
}

/// Search all universe sizes in `sizes` for a model of `f`.
fn search_models(f: &Formula, sizes: core::ops::RangeInclusive<usize>, budget: u128) -> Result<Option<FiniteStructure>, ModelError> {
    let sig = Signature::of(f);
    let compiled = Compiled::new(f, &sig)?;
    for size in sizes {
        let mut found = None;
        for_each_function_interpretation(&sig, size, budget, |template| {
            let mut g = Grounder::new(template);
            let root = g.sentence(&compiled);
            match g.solve(root) {
                Some(m) => {
                    found = Some(m);
                    ControlFlow::Break(())
                }
                None => ControlFlow::Continue(()),
            }
        })?;
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

fn check_closed(f: &Formula) -> Result<(), ModelError> {
    match f.free_vars().into_iter().next() {
        Some(v) => Err(ModelError::FreeVariable(v)),
        None => Ok(()),
    }
}

/// Complete decision for function-free `∃*∀*` sentences.
pub fn decide_bsr(s: &StandardForm) -> Result<Verdict, ModelError> {
    if !s.is_exists_forall() {
        return Err(ModelError::NotBsr("prefix is not exists-forall".into()));
    }
    if s.matrix.has_nonconstant_functions() {
        return Err(ModelError::NotBsr("non-constant function symbol".into()));
    }
    let f = s.to_formula();
    let bound = bsr_size_bound(s);
    Ok(match search_models(&f, 1..=bound, u128::MAX)? {
        Some(m) => Verdict::Sat(m),
        None => Verdict::Unsat,
    })
}

/// Model search up to `max_size`. The answer is upgraded from
/// `UnsatAtBound` to `Unsat` only when a `complete_bound` is supplied and
/// reached; function-free `∃*∀*` sentences are decided by [`decide_bsr`].
pub fn decide_bounded(f: &Formula, max_size: usize, budget: u128, complete_bound: Option<usize>) -> Result<Verdict, ModelError> {
    check_closed(f)?;
    if let Some(m) = search_models(f, 1..=max_size, budget)? {
        return Ok(Verdict::Sat(m));
    }
    Ok(match complete_bound {
        Some(b) if max_size >= b => Verdict::Unsat,
        _ => Verdict::UnsatAtBound(max_size),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Pass,
    Counterexample(FiniteStructure),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EquivalenceMethod {
    /// Evaluate both sentences on every structure.
    Exhaustive,
    /// Ground both sentences per function interpretation and ask the SAT
    /// solver for a structure separating them.
    Grounded,
    /// Exhaustive when the structure count fits the budget, grounded otherwise.
    Auto,
}

/// Exhaustive bounded equivalence check on all sizes `1..=max_size`.
pub fn check_equivalence(f1: &Formula, f2: &Formula, max_size: usize) -> Result<Equivalence, ModelError> {
    check_equivalence_with(f1, f2, max_size, EquivalenceMethod::Exhaustive, DEFAULT_BUDGET)
}

pub fn check_equivalence_with(
    f1: &Formula,
    f2: &Formula,
    max_size: usize,
    method: EquivalenceMethod,
    budget: u128,
) -> Result<Equivalence, ModelError> {
    check_closed(f1)?;
    check_closed(f2)?;
    let sig = Signature::of(f1).union(&Signature::of(f2));
    let c1 = Compiled::new(f1, &sig)?;
    let c2 = Compiled::new(f2, &sig)?;
    for size in 1..=max_size {
        let exhaustive = match method {
            EquivalenceMethod::Exhaustive => true,
            EquivalenceMethod::Grounded => false,
            EquivalenceMethod::Auto => structure_count(&sig, size).is_some_and(|c| c <= budget),
        };
        let mut witness = None;
        if exhaustive {
            for_each_structure(&sig, size, budget, |a| {
                if c1.eval_closed(a) != c2.eval_closed(a) {
                    witness = Some(a.clone());
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })?;
        } else {
            // Renaming elements preserves both truth values, so constants
            // are enumerated up to renaming.
            for_each_function_interpretation(&sig, size, budget, |template| {
                let mut g = Grounder::new(template);
                let a = g.sentence(&c1);
                let b = g.sentence(&c2);
                let (na, nb) = (g.not(a), g.not(b));
                let left = g.and(alloc::vec![a, nb]);
                let right = g.and(alloc::vec![na, b]);
                let root = g.or(alloc::vec![left, right]);
                match g.solve(root) {
                    Some(m) => {
                        witness = Some(m);
                        ControlFlow::Break(())
                    }
                    None => ControlFlow::Continue(()),
                }
            })?;
        }
        if let Some(w) = witness {
            return Ok(Equivalence::Counterexample(w));
        }
    }
    Ok(Equivalence::Pass)
}
