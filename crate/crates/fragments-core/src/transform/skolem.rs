//! Skolemization of closed NNF sentences and the shape check used before
//! monadization.

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

use crate::names::NameSupply;
use crate::normal::{nnf, rename_apart};
use crate::subst::Substitution;
use crate::syntax::{Formula, Term};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemSymbol {
    pub name: String,
    pub arity: usize,
    /// Universal variables the symbol is applied to, outermost first.
    pub args: Vec<String>,
    /// The existential variable it replaces.
    pub replaced: String,
}

/// `∀ universals. matrix`, with `matrix` quantifier-free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkolemSentence {
    pub universals: Vec<String>,
    pub matrix: Formula,
    pub table: Vec<SkolemSymbol>,
}

impl SkolemSentence {
    pub fn to_formula(&self) -> Formula {
        Formula::forall(self.universals.clone(), self.matrix.clone())
    }
}

/// Replaces every `∃y` by a fresh function of the universals in scope and
/// moves all universals to the front. The input must be closed.
pub fn skolemize(f: &Formula) -> SkolemSentence {
    let g = rename_apart(&nnf(&f.unfreeze()));
    let mut names = NameSupply::new(g.functions().into_iter().map(|(n, _)| n).chain(g.predicates().into_iter().map(|(p, _)| p)));
    let mut universals = Vec::new();
    let mut table = Vec::new();
    let matrix = sk_rec(&g, &mut Vec::new(), &mut universals, &mut table, &mut names);
    SkolemSentence { universals, matrix, table }
}

fn sk_rec(
    f: &Formula,
    scope: &mut Vec<String>,
    universals: &mut Vec<String>,
    table: &mut Vec<SkolemSymbol>,
    names: &mut NameSupply,
) -> Formula {
    match f {
        Formula::Forall(vs, b) => {
            let depth = scope.len();
            scope.extend(vs.iter().cloned());
            universals.extend(vs.iter().cloned());
            let out = sk_rec(b, scope, universals, table, names);
            scope.truncate(depth);
            out
        }
        Formula::Exists(vs, b) => {
            let mut sub = Substitution::new();
            for v in vs {
                let name = names.fresh("sk");
                let term = if scope.is_empty() {
                    Term::Const(name.clone())
                } else {
                    Term::App(name.clone(), scope.iter().map(|x| Term::Var(x.clone())).collect())
                };
                table.push(SkolemSymbol { name, arity: scope.len(), args: scope.clone(), replaced: v.clone() });
                sub.insert(v, term);
            }
            // Renamed apart, so no binder in `b` can capture.
            let body = crate::subst::apply_substitution(b, &sub);
            sk_rec(&body, scope, universals, table, names)
        }
        Formula::And(cs) => Formula::And(cs.iter().map(|c| sk_rec(c, scope, universals, table, names)).collect()),
        Formula::Or(cs) => Formula::Or(cs.iter().map(|c| sk_rec(c, scope, universals, table, names)).collect()),
        Formula::Not(b) => Formula::Not(Box::new(sk_rec(b, scope, universals, table, names))),
        other => other.clone(),
    }
}

/// Outcome of the three shape conditions, each with a witness on failure.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ShapeReport {
    /// A function symbol of arity above one.
    pub wide_function: Option<(String, usize)>,
    /// A non-ground atom with more than one distinct variable.
    pub multi_variable_atom: Option<Formula>,
    /// An argument that is not a constant, a variable or `f(variable)`.
    pub deep_term: Option<Term>,
}

impl ShapeReport {
    pub fn unary_functions(&self) -> bool {
        self.wide_function.is_none()
    }

    pub fn single_variable_atoms(&self) -> bool {
        self.multi_variable_atom.is_none()
    }

    pub fn flat_terms(&self) -> bool {
        self.deep_term.is_none()
    }

    pub fn ok(&self) -> bool {
        self.unary_functions() && self.single_variable_atoms() && self.flat_terms()
    }
}

fn flat(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(_) => true,
        Term::App(_, args) => args.len() == 1 && matches!(args[0], Term::Var(_)),
    }
}

pub fn check_skolem_shape(matrix: &Formula) -> ShapeReport {
    let mut report = ShapeReport {
        wide_function: matrix.functions().into_iter().find(|(_, k)| *k > 1),
        ..ShapeReport::default()
    };
    for atom in matrix.distinct_atoms() {
        if report.multi_variable_atom.is_none() && atom.atom_vars().len() > 1 {
            report.multi_variable_atom = Some(atom.clone());
        }
        let args: Vec<&Term> = match &atom {
            Formula::Atom(_, xs) => xs.iter().collect(),
            Formula::Eq(a, b) => alloc::vec![a, b],
            _ => Vec::new(),
        };
        if report.deep_term.is_none() {
            report.deep_term = args.into_iter().find(|t| !flat(t)).cloned();
        }
    }
    report
}
