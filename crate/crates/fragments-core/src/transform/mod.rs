//! Equivalence-preserving rewrites between fragments, and Skolemization.
//!
//! Both staged rewrites work from the innermost quantifier block outwards.
//! Each stage computes a DNF, pushes an existential block onto the members
//! that need it, computes a CNF and pushes the universal block. Subformulas
//! created by a push are frozen so that later normal forms treat them as
//! opaque units.

mod gaf_unnest;
mod gbsr_bsr;
mod skolem;

pub use gaf_unnest::{gaf_unnest, has_nested_universal, UnnestTrace};
pub use gbsr_bsr::{gbsr_to_bsr, StageRecord, TransformTrace};
pub use skolem::{check_skolem_shape, skolemize, ShapeReport, SkolemSentence, SkolemSymbol};

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

use crate::classify::ClassifyError;
use crate::normal::NormalFormError;
use crate::syntax::{Formula, Literal, Term};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TransformError {
    #[error("sentence is not in GBSR")]
    NotGbsr,
    #[error("sentence is not in GAF")]
    NotGaf,
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error("grouping invariant broken: {0}")]
    Grouping(String),
}

/// Interns frozen units so that equal bodies share an id, and remembers a
/// group tag per id.
struct Freezer<T> {
    ids: BTreeMap<Formula, usize>,
    tags: BTreeMap<usize, T>,
}

impl<T: Clone> Freezer<T> {
    fn new() -> Freezer<T> {
        Freezer { ids: BTreeMap::new(), tags: BTreeMap::new() }
    }

    fn freeze(&mut self, body: Formula, tag: T) -> Formula {
        let next = self.ids.len();
        let id = *self.ids.entry(body.clone()).or_insert(next);
        self.tags.entry(id).or_insert(tag);
        Formula::Frozen(id, Box::new(body))
    }

    fn tag(&self, id: usize) -> Option<T> {
        self.tags.get(&id).cloned()
    }
}

fn bound_filter(block: &[String], free: &BTreeSet<String>) -> Vec<String> {
    block.iter().filter(|v| free.contains(*v)).cloned().collect()
}

/// Match `pattern` against `target` with a variable bijection.
fn match_term(p: &Term, t: &Term, map: &mut BTreeMap<String, String>, inverse: &mut BTreeMap<String, String>) -> bool {
    match (p, t) {
        (Term::Var(a), Term::Var(b)) => match (map.get(a), inverse.get(b)) {
            (None, None) => {
                map.insert(a.clone(), b.clone());
                inverse.insert(b.clone(), a.clone());
                true
            }
            (Some(x), Some(y)) => x == b && y == a,
            _ => false,
        },
        (Term::Const(a), Term::Const(b)) => a == b,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, map, inverse))
        }
        _ => false,
    }
}

/// `a` equals `b` after an injective renaming of variables.
pub fn same_literal_up_to_renaming(a: &Literal, b: &Literal) -> bool {
    if a.positive != b.positive {
        return false;
    }
    let (mut m, mut inv) = (BTreeMap::new(), BTreeMap::new());
    match (&a.atom, &b.atom) {
        (Formula::Atom(p, xs), Formula::Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| match_term(x, y, &mut m, &mut inv))
        }
        (Formula::Eq(s1, t1), Formula::Eq(s2, t2)) => {
            match_term(s1, s2, &mut m, &mut inv) && match_term(t1, t2, &mut m, &mut inv)
        }
        _ => false,
    }
}

/// Every literal of `output` occurs in `input` up to variable renaming.
pub fn literals_conserved(input: &Formula, output: &Formula) -> bool {
    let source = input.literals();
    output.literals().iter().all(|l| source.iter().any(|s| same_literal_up_to_renaming(s, l)))
}
