//! GBSR membership: the literal closures `L_k` over the co-occurrence graph of
//! universal variables, their layered residuals, and the axiomatic atom
//! partition check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::ClassifyError;
use crate::normal::StandardForm;
use crate::syntax::{Formula, Literal};

/// Partitions with more atoms than this are not searched exhaustively.
pub const PARTITION_SEARCH_CAP: usize = 8;

/// A pair `ℓ ≤ k` with `vars(L_k) ∩ x̄_ℓ ≠ ∅`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbsrViolation {
    pub k: usize,
    pub l: usize,
    pub variable: String,
    /// A literal of `L_k` holding `variable`; one that also holds a
    /// variable of `ȳ_k` is preferred.
    pub literal: Literal,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbsrAnalysis {
    pub n: usize,
    /// Literal occurrences of the matrix, left to right.
    pub literals: Vec<Literal>,
    pub literal_vars: Vec<BTreeSet<String>>,
    /// Undirected edges `{x, x'}` of the co-occurrence graph, stored with
    /// `x < x'`.
    pub edges: BTreeSet<(String, String)>,
    pub components: Vec<BTreeSet<String>>,
    /// `l[k]` is `L_k` as occurrence indices; `l[0]` is unused and empty.
    pub l: Vec<BTreeSet<usize>>,
    /// Variables whose presence puts a literal into `L_k`: `ȳ_k` together
    /// with the components reached by the closure.
    pub triggers: Vec<BTreeSet<String>>,
    /// `L̃_0 … L̃_n`.
    pub l_tilde: Vec<BTreeSet<usize>>,
    /// `X̃_0 … X̃_n`.
    pub x_tilde: Vec<BTreeSet<String>>,
    /// Distinct atoms in order of first occurrence.
    pub atoms: Vec<Formula>,
    /// `At_0 … At_n` derived from the residuals, as indices into `atoms`.
    pub partition: Vec<BTreeSet<usize>>,
    pub violation: Option<GbsrViolation>,
}

impl GbsrAnalysis {
    pub fn is_gbsr(&self) -> bool {
        self.violation.is_none()
    }

    /// Index `k` of the residual `L̃_k` a literal with these variables falls
    /// into.
    pub fn group_of_vars(&self, vars: &BTreeSet<String>) -> usize {
        (1..=self.n).rev().find(|&k| vars.iter().any(|v| self.triggers[k].contains(v))).unwrap_or(0)
    }

    /// The derived partition as atom sets.
    pub fn partition_atoms(&self) -> Vec<BTreeSet<Formula>> {
        self.partition.iter().map(|c| c.iter().map(|&i| self.atoms[i].clone()).collect()).collect()
    }
}

pub(crate) fn check_function_free(s: &StandardForm) -> Result<(), ClassifyError> {
    match s.matrix.functions().into_iter().find(|(_, k)| *k > 0) {
        Some((f, _)) => Err(ClassifyError::FunctionsNotAllowed(f)),
        None => Ok(()),
    }
}

fn components(xs: &BTreeSet<String>, edges: &BTreeSet<(String, String)>) -> Vec<BTreeSet<String>> {
    let mut comp: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out: Vec<BTreeSet<String>> = Vec::new();
    for x in xs {
        if comp.contains_key(x.as_str()) {
            continue;
        }
        let id = out.len();
        let mut members = BTreeSet::new();
        let mut stack = vec![x.clone()];
        while let Some(v) = stack.pop() {
            if !members.insert(v.clone()) {
                continue;
            }
            for (a, b) in edges {
                if *a == v && !members.contains(b) {
                    stack.push(b.clone());
                }
                if *b == v && !members.contains(a) {
                    stack.push(a.clone());
                }
            }
        }
        for m in &members {
            comp.insert(xs.get(m).unwrap().as_str(), id);
        }
        out.push(members);
    }
    out
}

pub fn analyze_gbsr(s: &StandardForm) -> Result<GbsrAnalysis, ClassifyError> {
    check_function_free(s)?;
    let n = s.n();
    let xs = s.universal_vars();
    let literals = s.matrix.literals();
    let literal_vars: Vec<BTreeSet<String>> = literals.iter().map(Literal::vars).collect();

    let mut edges = BTreeSet::new();
    for vs in &literal_vars {
        let xv: Vec<&String> = vs.iter().filter(|v| xs.contains(*v)).collect();
        for (i, a) in xv.iter().enumerate() {
            for b in &xv[i + 1..] {
                edges.insert(((*a).clone(), (*b).clone()));
            }
        }
    }
    let components = components(&xs, &edges);
    let component_of = |x: &str| components.iter().position(|c| c.contains(x)).unwrap();

    let mut l = vec![BTreeSet::new(); n + 1];
    let mut triggers = vec![BTreeSet::new(); n + 1];
    for k in 1..=n {
        let mut trig: BTreeSet<String> = s.y(k).iter().cloned().collect();
        let mut members: BTreeSet<usize> = BTreeSet::new();
        loop {
            let mut grew = false;
            for (i, vs) in literal_vars.iter().enumerate() {
                if !members.contains(&i) && vs.iter().any(|v| trig.contains(v)) {
                    members.insert(i);
                    grew = true;
                    for x in vs.iter().filter(|v| xs.contains(*v)) {
                        if !trig.contains(x) {
                            trig.extend(components[component_of(x)].iter().cloned());
                        }
                    }
                }
            }
            if !grew {
                break;
            }
        }
        l[k] = members;
        triggers[k] = trig;
    }

    let mut l_tilde = vec![BTreeSet::new(); n + 1];
    for i in 0..literals.len() {
        let k = (1..=n).rev().find(|&k| l[k].contains(&i)).unwrap_or(0);
        l_tilde[k].insert(i);
    }
    let x_tilde: Vec<BTreeSet<String>> = l_tilde
        .iter()
        .map(|ls| ls.iter().flat_map(|&i| literal_vars[i].iter()).filter(|v| xs.contains(*v)).cloned().collect())
        .collect();

    let atoms = s.matrix.distinct_atoms();
    let mut partition = vec![BTreeSet::new(); n + 1];
    for (k, ls) in l_tilde.iter().enumerate() {
        for &i in ls {
            let a = atoms.iter().position(|a| *a == literals[i].atom).unwrap();
            partition[k].insert(a);
        }
    }

    let mut violation = None;
    'outer: for k in 1..=n {
        for ell in 1..=k {
            for x in s.x(ell) {
                let holders: Vec<usize> = l[k].iter().copied().filter(|&i| literal_vars[i].contains(x)).collect();
                if holders.is_empty() {
                    continue;
                }
                let best = holders
                    .iter()
                    .copied()
                    .find(|&i| s.y(k).iter().any(|y| literal_vars[i].contains(y)))
                    .unwrap_or(holders[0]);
                violation = Some(GbsrViolation { k, l: ell, variable: x.clone(), literal: literals[best].clone() });
                break 'outer;
            }
        }
    }

    Ok(GbsrAnalysis { n, literals, literal_vars, edges, components, l, triggers, l_tilde, x_tilde, atoms, partition, violation })
}

fn allowed_vars(s: &StandardForm, i: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    for j in 1..=i {
        out.extend(s.y(j).iter().cloned());
    }
    for j in i + 1..=s.n() {
        out.extend(s.x(j).iter().cloned());
    }
    out
}

fn check_cover(atoms: &[Formula], classes: &[&BTreeSet<Formula>]) -> Result<(), ClassifyError> {
    let mut seen: BTreeSet<&Formula> = BTreeSet::new();
    for c in classes {
        for a in c.iter() {
            if !atoms.contains(a) {
                return Err(ClassifyError::NotAPartition(format!("{a} is not an atom of the sentence")));
            }
            if !seen.insert(a) {
                return Err(ClassifyError::NotAPartition(format!("{a} lies in two classes")));
            }
        }
    }
    if let Some(a) = atoms.iter().find(|a| !seen.contains(a)) {
        return Err(ClassifyError::NotAPartition(format!("{a} is not covered")));
    }
    Ok(())
}

/// Check the axiomatic conditions on `At_0 … At_n`.
pub fn gbsr_axiomatic_witness(s: &StandardForm, partition: &[BTreeSet<Formula>]) -> Result<bool, ClassifyError> {
    let n = s.n();
    if partition.len() != n + 1 {
        return Err(ClassifyError::NotAPartition(format!("expected {} classes, got {}", n + 1, partition.len())));
    }
    let atoms = s.matrix.distinct_atoms();
    check_cover(&atoms, &partition.iter().collect::<Vec<_>>())?;
    let xs = s.universal_vars();
    let class_vars: Vec<BTreeSet<String>> =
        partition.iter().map(|c| c.iter().flat_map(|a| a.atom_vars()).collect()).collect();
    for (i, vs) in class_vars.iter().enumerate() {
        let allowed = allowed_vars(s, i);
        if !vs.is_subset(&allowed) {
            return Ok(false);
        }
    }
    for i in 0..=n {
        for j in i + 1..=n {
            if class_vars[i].intersection(&class_vars[j]).any(|v| xs.contains(v)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Search all assignments of atoms to `At_0 … At_n` for one meeting the
/// axiomatic conditions. Errors with `TooManyAtoms` above the cap.
pub fn gbsr_partition_search(s: &StandardForm) -> Result<Option<Vec<BTreeSet<Formula>>>, ClassifyError> {
    check_function_free(s)?;
    let atoms = s.matrix.distinct_atoms();
    if atoms.len() > PARTITION_SEARCH_CAP {
        return Err(ClassifyError::TooManyAtoms(atoms.len()));
    }
    let n = s.n();
    let xs = s.universal_vars();
    let vars: Vec<BTreeSet<String>> = atoms.iter().map(Formula::atom_vars).collect();
    let options: Vec<Vec<usize>> = vars
        .iter()
        .map(|vs| (0..=n).filter(|&i| vs.is_subset(&allowed_vars(s, i))).collect())
        .collect();
    // owner[x] = class currently holding x, with a count of holders.
    let mut owner: BTreeMap<String, (usize, usize)> = BTreeMap::new();
    let mut choice = vec![0usize; atoms.len()];

    fn go(
        a: usize,
        vars: &[BTreeSet<String>],
        options: &[Vec<usize>],
        xs: &BTreeSet<String>,
        owner: &mut BTreeMap<String, (usize, usize)>,
        choice: &mut [usize],
    ) -> bool {
        if a == vars.len() {
            return true;
        }
        for &i in &options[a] {
            let ok = vars[a].iter().filter(|v| xs.contains(*v)).all(|x| owner.get(x).map_or(true, |&(c, _)| c == i));
            if !ok {
                continue;
            }
            for x in vars[a].iter().filter(|v| xs.contains(*v)) {
                owner.entry(x.clone()).or_insert((i, 0)).1 += 1;
            }
            choice[a] = i;
            if go(a + 1, vars, options, xs, owner, choice) {
                return true;
            }
            for x in vars[a].iter().filter(|v| xs.contains(*v)) {
                let e = owner.get_mut(x).unwrap();
                e.1 -= 1;
                if e.1 == 0 {
                    owner.remove(x);
                }
            }
        }
        false
    }

    if !go(0, &vars, &options, &xs, &mut owner, &mut choice) {
        return Ok(None);
    }
    let mut out = vec![BTreeSet::new(); n + 1];
    for (a, &i) in choice.iter().enumerate() {
        out[i].insert(atoms[a].clone());
    }
    Ok(Some(out))
}

/// The least `κ ≥ 0` such that each `At_i` (`i < n`) meets `x̄_j` for at most
/// `κ` indices `j > i + 1`.
pub fn degree(s: &StandardForm, partition: &[BTreeSet<Formula>]) -> Result<usize, ClassifyError> {
    match gbsr_axiomatic_witness(s, partition) {
        Ok(true) => {}
        Ok(false) => return Err(ClassifyError::InvalidPartition("axiomatic conditions fail".into())),
        Err(e) => return Err(ClassifyError::InvalidPartition(format!("{e}"))),
    }
    let n = s.n();
    let mut kappa = 0;
    for (i, class) in partition.iter().enumerate().take(n) {
        let vs: BTreeSet<String> = class.iter().flat_map(|a| a.atom_vars()).collect();
        let spread = (i + 2..=n).filter(|&j| s.x(j).iter().any(|x| vs.contains(x))).count();
        kappa = kappa.max(spread);
    }
    Ok(kappa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::normalize_standard_form;
    use crate::parser::parse;
    use crate::examples::{PHI1, PHI2};
    use alloc::string::ToString;

    fn sf(text: &str) -> StandardForm {
        normalize_standard_form(&parse(text).unwrap()).unwrap()
    }

    fn lemma_checks(s: &StandardForm, a: &GbsrAnalysis) {
        let total: usize = a.l_tilde.iter().map(BTreeSet::len).sum();
        assert_eq!(total, a.literals.len());
        for i in 0..=a.n {
            for j in i + 1..=a.n {
                assert!(a.x_tilde[i].is_disjoint(&a.x_tilde[j]));
            }
            let early: BTreeSet<String> = (1..=i).flat_map(|j| s.y(j).iter().cloned()).collect();
            for &o in &a.l_tilde[i] {
                for v in a.literal_vars[o].iter().filter(|v| s.is_existential(v)) {
                    assert!(early.contains(v), "{v} in L~{i}");
                }
            }
            if a.is_gbsr() {
                let late: BTreeSet<String> = (i + 1..=a.n).flat_map(|j| s.x(j).iter().cloned()).collect();
                assert!(a.x_tilde[i].is_subset(&late));
            }
        }
    }

    #[test]
    fn phi2_is_gbsr() {
        let s = sf(PHI2);
        let a = analyze_gbsr(&s).unwrap();
        assert!(a.is_gbsr());
        lemma_checks(&s, &a);
        assert_eq!(gbsr_axiomatic_witness(&s, &a.partition_atoms()), Ok(true));
        let mut lumped = vec![BTreeSet::new(); s.n() + 1];
        lumped[0] = s.matrix.distinct_atoms().into_iter().collect();
        assert_eq!(gbsr_axiomatic_witness(&s, &lumped), Ok(false));
    }

    #[test]
    fn phi1_is_not_gbsr() {
        let s = sf(PHI1);
        let a = analyze_gbsr(&s).unwrap();
        lemma_checks(&s, &a);
        let w = a.violation.clone().unwrap();
        assert_eq!(w.literal.atom.to_string(), "q(X,V)");
        assert_eq!((w.k, w.l), (2, 2));
        assert_eq!(gbsr_partition_search(&s), Ok(None));
    }

    #[test]
    fn single_universal() {
        let s = sf("forall X. p(X)");
        let a = analyze_gbsr(&s).unwrap();
        assert!(a.is_gbsr());
        assert_eq!(a.components.len(), 1);
        assert_eq!(a.l_tilde[0].len(), 1);
        assert_eq!(degree(&s, &a.partition_atoms()), Ok(0));
    }

    #[test]
    fn functions_are_rejected() {
        let s = sf("forall X. p(f(X))");
        assert_eq!(analyze_gbsr(&s), Err(ClassifyError::FunctionsNotAllowed("f".into())));
    }

    #[test]
    fn partition_must_cover() {
        let s = sf("forall X. (p(X) | q(X))");
        let bad = vec![[parse("p(X)").unwrap()].into_iter().collect()];
        assert!(matches!(gbsr_axiomatic_witness(&s, &bad), Err(ClassifyError::NotAPartition(_))));
    }

    #[test]
    fn monadic_degrees() {
        let s = sf(
            "forall X1. exists Y1. forall X2. exists Y2. forall X3. exists Y3. \
             ((p(X1) | q(Y1)) & (p(X2) | q(Y2)) & (p(X3) | q(Y3)))",
        );
        assert_eq!(s.n(), 3);
        let atoms = s.matrix.distinct_atoms();
        let universal = |a: &Formula| a.atom_vars().iter().any(|v| s.is_universal(v));
        let mut fine = vec![BTreeSet::new(); 4];
        for a in &atoms {
            let i = match a.atom_vars().iter().next().and_then(|v| if s.is_universal(v) { s.idx(v) } else { None }) {
                Some(j) => j - 1,
                None => 3,
            };
            fine[i].insert(a.clone());
        }
        assert_eq!(degree(&s, &fine), Ok(0));
        let mut coarse = vec![BTreeSet::new(); 4];
        for a in &atoms {
            coarse[if universal(a) { 0 } else { 3 }].insert(a.clone());
        }
        let coarse_degree = degree(&s, &coarse).unwrap();
        assert!(coarse_degree > 0);
        assert_eq!(coarse_degree, 2);
    }
}
