//! Fragment membership for standard-form sentences.

mod gaf;
mod gbsr;

pub use gaf::{
    analyze_gaf, gaf_axiomatic_witness, gaf_partition_search, GafAnalysis, GafGroup, GafPartition, GafViolation,
};
pub use gbsr::{
    analyze_gbsr, degree, gbsr_axiomatic_witness, gbsr_partition_search, GbsrAnalysis, GbsrViolation,
    PARTITION_SEARCH_CAP,
};

use alloc::collections::BTreeSet;
use alloc::string::String;

use crate::normal::StandardForm;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("non-constant function symbol `{0}`")]
    FunctionsNotAllowed(String),
    #[error("not a partition of the atoms: {0}")]
    NotAPartition(String),
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{0} atoms exceed the partition search cap")]
    TooManyAtoms(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fragment {
    Sf,
    Bsr,
    Ackermann,
    RelationalMonadic,
    Gbsr,
    Gaf,
}

impl Fragment {
    pub fn name(self) -> &'static str {
        match self {
            Fragment::Sf => "SF",
            Fragment::Bsr => "BSR",
            Fragment::Ackermann => "Ackermann",
            Fragment::RelationalMonadic => "relational-monadic",
            Fragment::Gbsr => "GBSR",
            Fragment::Gaf => "GAF",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub fragments: BTreeSet<Fragment>,
    pub has_equality: bool,
    pub has_constants: bool,
    pub has_functions: bool,
    pub max_function_arity: usize,
}

impl Classification {
    pub fn contains(&self, f: Fragment) -> bool {
        self.fragments.contains(&f)
    }
}

/// Separated: apart from a leading existential block, no atom mixes a
/// universal variable with an existential one.
pub fn is_sf(s: &StandardForm) -> bool {
    if s.matrix.has_nonconstant_functions() {
        return false;
    }
    let leading: BTreeSet<&String> = match s.blocks.first() {
        Some(b) if b.universal.is_empty() => b.existential.iter().collect(),
        _ => BTreeSet::new(),
    };
    s.matrix.distinct_atoms().iter().all(|a| {
        let vs = a.atom_vars();
        let universal = vs.iter().any(|v| s.is_universal(v));
        let existential = vs.iter().any(|v| s.is_existential(v) && !leading.contains(v));
        !(universal && existential)
    })
}

pub fn is_bsr(s: &StandardForm) -> bool {
    s.is_exists_forall() && !s.matrix.has_nonconstant_functions()
}

/// Relational `∃*∀∃*` without equality.
pub fn is_ackermann(s: &StandardForm) -> bool {
    s.matrix.functions().is_empty() && !s.matrix.has_equality() && s.universal_vars().len() <= 1
}

/// Predicates of arity at most one and no function or constant symbols.
pub fn is_relational_monadic(s: &StandardForm) -> bool {
    s.matrix.functions().is_empty() && s.matrix.predicates().iter().all(|(_, k)| *k <= 1)
}

pub fn classify(s: &StandardForm) -> Classification {
    let mut fragments = BTreeSet::new();
    if is_sf(s) {
        fragments.insert(Fragment::Sf);
    }
    if is_bsr(s) {
        fragments.insert(Fragment::Bsr);
    }
    if is_ackermann(s) {
        fragments.insert(Fragment::Ackermann);
    }
    if is_relational_monadic(s) {
        fragments.insert(Fragment::RelationalMonadic);
    }
    if analyze_gbsr(s).is_ok_and(|a| a.is_gbsr()) {
        fragments.insert(Fragment::Gbsr);
    }
    if analyze_gaf(s).is_gaf() {
        fragments.insert(Fragment::Gaf);
    }
    let functions = s.matrix.functions();
    Classification {
        fragments,
        has_equality: s.matrix.has_equality(),
        has_constants: functions.iter().any(|(_, k)| *k == 0),
        has_functions: functions.iter().any(|(_, k)| *k > 0),
        max_function_arity: s.matrix.max_function_arity(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::{PHI1, PHI2};
    use crate::normal::normalize_standard_form;
    use crate::parser::parse;

    fn sf(text: &str) -> StandardForm {
        normalize_standard_form(&parse(text).unwrap()).unwrap()
    }

    #[test]
    fn golden_classification() {
        let c1 = classify(&sf(PHI1));
        assert_eq!(c1.fragments, [Fragment::Gaf].into_iter().collect());
        let c2 = classify(&sf(PHI2));
        assert_eq!(c2.fragments, [Fragment::Gbsr, Fragment::Gaf].into_iter().collect());
    }

    #[test]
    fn monadic_bsr_sentence() {
        let c = classify(&sf("exists Y. forall X. (p(Y) & q(X))"));
        for f in [Fragment::Sf, Fragment::Bsr, Fragment::Gbsr, Fragment::Gaf, Fragment::RelationalMonadic, Fragment::Ackermann] {
            assert!(c.contains(f), "{f:?}");
        }
    }

    #[test]
    fn equality_flag() {
        let c = classify(&sf("forall X. c = X"));
        assert!(c.contains(Fragment::Bsr));
        assert!(c.has_equality && c.has_constants && !c.has_functions);
    }

    #[test]
    fn functions_exclude_gbsr() {
        let c = classify(&sf("forall X. exists Y. p(f(X), Y)"));
        assert!(!c.contains(Fragment::Gbsr));
        assert!(c.has_functions);
        assert_eq!(c.max_function_arity, 1);
    }
}
