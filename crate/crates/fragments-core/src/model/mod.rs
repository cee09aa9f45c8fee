//! Finite structures and their semantics.

mod decide;
mod enumerate;
pub(crate) mod eval;

pub use decide::{
    check_equivalence, check_equivalence_with, decide_bounded, decide_bsr, bsr_size_bound, Equivalence,
    EquivalenceMethod, Verdict, DEFAULT_BUDGET,
};
pub use enumerate::{enumerate_structures, for_each_structure, structure_count};
pub use eval::{evaluate, holds, Compiled};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("no interpretation for symbol `{0}`")]
    MissingInterpretation(String),
    #[error("variable `{0}` has no value")]
    UnassignedVariable(String),
    #[error("more than {0} structures to examine")]
    BudgetExceeded(u128),
    #[error("not a function-free exists-forall sentence: {0}")]
    NotBsr(String),
    #[error("subset not closed: {0}")]
    NotClosed(String),
    #[error("free variable `{0}` in a sentence")]
    FreeVariable(String),
}

/// Predicate and function symbols with arities, sorted by name.
/// Constants are functions of arity 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    pub predicates: Vec<(String, usize)>,
    pub functions: Vec<(String, usize)>,
}

impl Signature {
    pub fn new(predicates: &[(&str, usize)], functions: &[(&str, usize)]) -> Signature {
        let mut sig = Signature::default();
        for (p, k) in predicates {
            sig.add_predicate(p, *k);
        }
        for (f, k) in functions {
            sig.add_function(f, *k);
        }
        sig
    }

    pub fn of(f: &Formula) -> Signature {
        let mut sig = Signature::default();
        for (p, k) in f.predicates() {
            sig.add_predicate(&p, k);
        }
        for (g, k) in f.functions() {
            sig.add_function(&g, k);
        }
        sig
    }

    pub fn add_predicate(&mut self, name: &str, arity: usize) {
        if let Err(i) = self.predicates.binary_search_by(|(p, _)| p.as_str().cmp(name)) {
            self.predicates.insert(i, (name.into(), arity));
        }
    }

    pub fn add_function(&mut self, name: &str, arity: usize) {
        if let Err(i) = self.functions.binary_search_by(|(p, _)| p.as_str().cmp(name)) {
            self.functions.insert(i, (name.into(), arity));
        }
    }

    pub fn union(&self, other: &Signature) -> Signature {
        let mut out = self.clone();
        for (p, k) in &other.predicates {
            out.add_predicate(p, *k);
        }
        for (g, k) in &other.functions {
            out.add_function(g, *k);
        }
        out
    }

    pub fn predicate_index(&self, name: &str) -> Option<usize> {
        self.predicates.binary_search_by(|(p, _)| p.as_str().cmp(name)).ok()
    }

    pub fn function_index(&self, name: &str) -> Option<usize> {
        self.functions.binary_search_by(|(p, _)| p.as_str().cmp(name)).ok()
    }

    pub fn constants(&self) -> Vec<String> {
        self.functions.iter().filter(|(_, k)| *k == 0).map(|(c, _)| c.clone()).collect()
    }

    pub fn has_nonconstant_functions(&self) -> bool {
        self.functions.iter().any(|(_, k)| *k > 0)
    }
}

pub(crate) fn pow(base: usize, exp: usize) -> usize {
    base.checked_pow(exp as u32).expect("table size overflows usize")
}

/// Universe `{0, …, size−1}` with relations as bit tables and functions as
/// value tables, both indexed by the tuple read as a base-`size` numeral
/// (first argument most significant).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FiniteStructure {
    pub size: usize,
    pub signature: Signature,
    pub relations: Vec<Vec<bool>>,
    pub tables: Vec<Vec<usize>>,
}

impl FiniteStructure {
    /// All relations empty, all functions constantly 0.
    pub fn new(signature: Signature, size: usize) -> FiniteStructure {
        assert!(size >= 1, "universe must be nonempty");
        let relations = signature.predicates.iter().map(|(_, k)| vec![false; pow(size, *k)]).collect();
        let tables = signature.functions.iter().map(|(_, k)| vec![0; pow(size, *k)]).collect();
        FiniteStructure { size, signature, relations, tables }
    }

    pub fn tuple_index(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &e| acc * self.size + e)
    }

    pub fn tuple_at(&self, mut index: usize, arity: usize) -> Vec<usize> {
        let mut out = vec![0; arity];
        for slot in out.iter_mut().rev() {
            *slot = index % self.size;
            index /= self.size;
        }
        out
    }

    pub fn holds(&self, predicate: &str, tuple: &[usize]) -> Option<bool> {
        let i = self.signature.predicate_index(predicate)?;
        Some(self.relations[i][self.tuple_index(tuple)])
    }

    pub fn set(&mut self, predicate: &str, tuple: &[usize], value: bool) {
        let i = self.signature.predicate_index(predicate).expect("unknown predicate");
        let t = self.tuple_index(tuple);
        self.relations[i][t] = value;
    }

    pub fn apply(&self, function: &str, args: &[usize]) -> Option<usize> {
        let i = self.signature.function_index(function)?;
        Some(self.tables[i][self.tuple_index(args)])
    }

    pub fn set_function(&mut self, function: &str, args: &[usize], value: usize) {
        let i = self.signature.function_index(function).expect("unknown function");
        let t = self.tuple_index(args);
        self.tables[i][t] = value;
    }

    /// Tuples in a relation, in increasing order.
    pub fn relation_tuples(&self, predicate: &str) -> Option<Vec<Vec<usize>>> {
        let i = self.signature.predicate_index(predicate)?;
        let k = self.signature.predicates[i].1;
        Some(
            self.relations[i]
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(t, _)| self.tuple_at(t, k))
                .collect(),
        )
    }

    /// Every table entry lies in the universe and tables have the right length.
    pub fn is_well_formed(&self) -> bool {
        self.size >= 1
            && self.relations.len() == self.signature.predicates.len()
            && self.tables.len() == self.signature.functions.len()
            && self.signature.predicates.iter().zip(&self.relations).all(|((_, k), r)| r.len() == pow(self.size, *k))
            && self.signature.functions.iter().zip(&self.tables).all(|((_, k), t)| {
                t.len() == pow(self.size, *k) && t.iter().all(|&v| v < self.size)
            })
    }

    /// The same structure over a larger signature; new relations are empty and
    /// new functions constantly 0.
    pub fn extend_signature(&self, signature: &Signature) -> FiniteStructure {
        let full = self.signature.union(signature);
        let mut out = FiniteStructure::new(full.clone(), self.size);
        for (i, (p, _)) in self.signature.predicates.iter().enumerate() {
            let j = full.predicate_index(p).unwrap();
            out.relations[j] = self.relations[i].clone();
        }
        for (i, (g, _)) in self.signature.functions.iter().enumerate() {
            let j = full.function_index(g).unwrap();
            out.tables[j] = self.tables[i].clone();
        }
        out
    }

    /// Substructure induced by `subset`; elements are renumbered in
    /// increasing order. The subset must contain every constant and be closed
    /// under every function.
    pub fn induced_substructure(&self, subset: &BTreeSet<usize>) -> Result<FiniteStructure, ModelError> {
        if subset.is_empty() {
            return Err(ModelError::NotClosed("empty subset".into()));
        }
        if let Some(&e) = subset.iter().find(|&&e| e >= self.size) {
            return Err(ModelError::NotClosed(format!("element {e} outside the universe")));
        }
        let elements: Vec<usize> = subset.iter().copied().collect();
        let new_index: BTreeMap<usize, usize> = elements.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let m = elements.len();
        let mut out = FiniteStructure::new(self.signature.clone(), m);
        for (i, (_, k)) in self.signature.predicates.iter().enumerate() {
            for t in 0..pow(m, *k) {
                let small = out.tuple_at(t, *k);
                let big: Vec<usize> = small.iter().map(|&e| elements[e]).collect();
                out.relations[i][t] = self.relations[i][self.tuple_index(&big)];
            }
        }
        for (i, (g, k)) in self.signature.functions.iter().enumerate() {
            for t in 0..pow(m, *k) {
                let small = out.tuple_at(t, *k);
                let big: Vec<usize> = small.iter().map(|&e| elements[e]).collect();
                let v = self.tables[i][self.tuple_index(&big)];
                match new_index.get(&v) {
                    Some(&w) => out.tables[i][t] = w,
                    None if *k == 0 => return Err(ModelError::NotClosed(format!("constant {g} = {v}"))),
                    None => return Err(ModelError::NotClosed(format!("{g}{big:?} = {v}"))),
                }
            }
        }
        Ok(out)
    }
}
