//! GAF membership: upward closures over existential variables, the literal
//! sets `L_x` and their block-wise refinements, and the axiomatic partition
//! check.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::gbsr::PARTITION_SEARCH_CAP;
use super::ClassifyError;
use crate::normal::StandardForm;
use crate::syntax::{Formula, Literal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GafViolation {
    /// An atom with two universal variables.
    TwoUniversals(Formula),
    /// `y` lies in both `vars(L_x)` and `vars(L_x')` with
    /// `idx(x) ≤ idx(x')` and `idx(y) ≥ idx(x)`.
    SharedExistential { x: String, x2: String, y: String },
}

/// Which residual a literal falls into.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum GafGroup {
    Zero,
    /// `L_{x,k}`; `k = 0` is the part below `idx(x)`.
    X(String, usize),
}

/// `At_0` and one atom set per universal variable.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GafPartition {
    pub at0: BTreeSet<Formula>,
    pub per_x: BTreeMap<String, BTreeSet<Formula>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GafAnalysis {
    pub n: usize,
    pub literals: Vec<Literal>,
    pub literal_vars: Vec<BTreeSet<String>>,
    pub idx: BTreeMap<String, usize>,
    /// Directed edges `y → y'` with `idx(y) ≤ idx(y')` and a shared atom.
    pub edges: BTreeSet<(String, String)>,
    /// Upward closure of every existential variable.
    pub upward: BTreeMap<String, BTreeSet<String>>,
    pub l_x: BTreeMap<String, BTreeSet<usize>>,
    pub l_0: BTreeSet<usize>,
    pub y_x: BTreeMap<String, BTreeSet<String>>,
    /// `L_{x,k}` for `k = 0` and `idx(x) ≤ k ≤ n`.
    pub l_xk: BTreeMap<String, BTreeMap<usize, BTreeSet<usize>>>,
    pub y_xk: BTreeMap<String, BTreeMap<usize, BTreeSet<String>>>,
    pub atoms: Vec<Formula>,
    pub violation: Option<GafViolation>,
    pub has_equality: bool,
    pub has_functions: bool,
}

impl GafAnalysis {
    pub fn is_gaf(&self) -> bool {
        self.violation.is_none()
    }

    /// Residual of a literal with the given variables. Meaningful when the
    /// sentence is in GAF, where the `L_x` are disjoint.
    pub fn group_of_vars(&self, vars: &BTreeSet<String>) -> GafGroup {
        for (x, trig) in self.triggers() {
            if vars.iter().any(|v| trig.contains(v)) {
                let refined = self.refined_triggers(&x);
                let k = refined
                    .iter()
                    .rev()
                    .find(|(_, t)| vars.iter().any(|v| t.contains(v)))
                    .map_or(0, |(k, _)| *k);
                return GafGroup::X(x, k);
            }
        }
        GafGroup::Zero
    }

    /// Variables whose presence puts a literal into `L_x`: `x` and the
    /// upward closures drawn in.
    fn triggers(&self) -> Vec<(String, BTreeSet<String>)> {
        self.l_x
            .keys()
            .map(|x| {
                let mut t: BTreeSet<String> = BTreeSet::new();
                t.insert(x.clone());
                for y in &self.y_x[x] {
                    t.extend(self.upward[y].iter().cloned());
                }
                (x.clone(), t)
            })
            .collect()
    }

    /// For `k ≥ idx(x)`, the union of upward closures of `vars(L_x) ∩ ȳ_k`.
    fn refined_triggers(&self, x: &str) -> Vec<(usize, BTreeSet<String>)> {
        let ix = self.idx[x];
        (ix..=self.n)
            .map(|k| {
                let t = self.y_x[x]
                    .iter()
                    .filter(|y| self.idx[*y] == k)
                    .flat_map(|y| self.upward[y].iter().cloned())
                    .collect();
                (k, t)
            })
            .collect()
    }

    /// `At_0` from `L_0` and `At_x` from `L_x`.
    pub fn derived_partition(&self) -> GafPartition {
        let atoms_of = |ls: &BTreeSet<usize>| ls.iter().map(|&i| self.literals[i].atom.clone()).collect();
        GafPartition {
            at0: atoms_of(&self.l_0),
            per_x: self.l_x.iter().map(|(x, ls)| (x.clone(), atoms_of(ls))).collect(),
        }
    }
}

fn vars_of(lits: &BTreeSet<usize>, literal_vars: &[BTreeSet<String>]) -> BTreeSet<String> {
    lits.iter().flat_map(|&i| literal_vars[i].iter().cloned()).collect()
}

fn touching(literal_vars: &[BTreeSet<String>], vs: &BTreeSet<String>) -> BTreeSet<usize> {
    (0..literal_vars.len()).filter(|&i| literal_vars[i].iter().any(|v| vs.contains(v))).collect()
}

pub fn analyze_gaf(s: &StandardForm) -> GafAnalysis {
    let n = s.n();
    let xs = s.universal_vars();
    let ys = s.existential_vars();
    let mut idx = BTreeMap::new();
    for k in 1..=n {
        for v in s.x(k).iter().chain(s.y(k)) {
            idx.insert(v.clone(), k);
        }
    }
    let literals = s.matrix.literals();
    let literal_vars: Vec<BTreeSet<String>> = literals.iter().map(Literal::vars).collect();
    let atoms = s.matrix.distinct_atoms();

    let mut edges = BTreeSet::new();
    for a in &atoms {
        let yv: Vec<String> = a.atom_vars().into_iter().filter(|v| ys.contains(v)).collect();
        for y in &yv {
            for y2 in &yv {
                if y != y2 && idx[y] <= idx[y2] {
                    edges.insert((y.clone(), y2.clone()));
                }
            }
        }
    }
    let mut upward = BTreeMap::new();
    for y in &ys {
        let mut seen = BTreeSet::new();
        let mut stack = alloc::vec![y.clone()];
        while let Some(v) = stack.pop() {
            if seen.insert(v.clone()) {
                stack.extend(edges.iter().filter(|(a, _)| *a == v).map(|(_, b)| b.clone()));
            }
        }
        upward.insert(y.clone(), seen);
    }

    let mut l_x = BTreeMap::new();
    let mut y_x = BTreeMap::new();
    for x in &xs {
        let ix = idx[x];
        let mut members = touching(&literal_vars, &[x.clone()].into_iter().collect());
        loop {
            let grown: BTreeSet<String> = vars_of(&members, &literal_vars)
                .into_iter()
                .filter(|v| ys.contains(v) && idx[v] >= ix)
                .flat_map(|y| upward[&y].iter().cloned().collect::<Vec<_>>())
                .collect();
            let more = touching(&literal_vars, &grown);
            if more.is_subset(&members) {
                break;
            }
            members.extend(more);
        }
        let yx: BTreeSet<String> =
            vars_of(&members, &literal_vars).into_iter().filter(|v| ys.contains(v) && idx[v] >= ix).collect();
        l_x.insert(x.clone(), members);
        y_x.insert(x.clone(), yx);
    }
    let l_0: BTreeSet<usize> = (0..literals.len()).filter(|i| l_x.values().all(|m: &BTreeSet<usize>| !m.contains(i))).collect();

    let mut l_xk = BTreeMap::new();
    let mut y_xk = BTreeMap::new();
    for x in &xs {
        let ix = idx[x];
        let lx: &BTreeSet<usize> = &l_x[x];
        let lx_vars = vars_of(lx, &literal_vars);
        let mut parts: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        let mut taken: BTreeSet<usize> = BTreeSet::new();
        for k in (ix..=n).rev() {
            let closure: BTreeSet<String> = s
                .y(k)
                .iter()
                .filter(|y| lx_vars.contains(*y))
                .flat_map(|y| upward[y].iter().cloned())
                .collect();
            let part: BTreeSet<usize> = touching(&literal_vars, &closure).difference(&taken).copied().collect();
            taken.extend(part.iter().copied());
            parts.insert(k, part);
        }
        parts.insert(0, lx.difference(&taken).copied().collect());
        let yk = parts
            .iter()
            .map(|(k, ls)| (*k, vars_of(ls, &literal_vars).intersection(&y_x[x]).cloned().collect()))
            .collect();
        l_xk.insert(x.clone(), parts);
        y_xk.insert(x.clone(), yk);
    }

    let mut violation = atoms
        .iter()
        .find(|a| a.atom_vars().iter().filter(|v| xs.contains(*v)).count() > 1)
        .map(|a| GafViolation::TwoUniversals(a.clone()));
    if violation.is_none() {
        'outer: for x in &xs {
            for x2 in &xs {
                if x == x2 || idx[x] > idx[x2] {
                    continue;
                }
                let v1 = vars_of(&l_x[x], &literal_vars);
                let v2 = vars_of(&l_x[x2], &literal_vars);
                if let Some(y) = v1.intersection(&v2).find(|v| ys.contains(*v) && idx[*v] >= idx[x]) {
                    violation = Some(GafViolation::SharedExistential { x: x.clone(), x2: x2.clone(), y: y.clone() });
                    break 'outer;
                }
            }
        }
    }

    GafAnalysis {
        n,
        literals,
        literal_vars,
        idx,
        edges,
        upward,
        l_x,
        l_0,
        y_x,
        l_xk,
        y_xk,
        atoms,
        violation,
        has_equality: s.matrix.has_equality(),
        has_functions: s.matrix.has_nonconstant_functions(),
    }
}

fn check_cover(s: &StandardForm, atoms: &[Formula], p: &GafPartition) -> Result<(), ClassifyError> {
    let xs = s.universal_vars();
    if let Some(x) = p.per_x.keys().find(|x| !xs.contains(*x)) {
        return Err(ClassifyError::NotAPartition(format!("{x} is not a universal variable")));
    }
    let mut seen: BTreeSet<&Formula> = BTreeSet::new();
    for a in p.at0.iter().chain(p.per_x.values().flatten()) {
        if !atoms.contains(a) {
            return Err(ClassifyError::NotAPartition(format!("{a} is not an atom of the sentence")));
        }
        if !seen.insert(a) {
            return Err(ClassifyError::NotAPartition(format!("{a} lies in two classes")));
        }
    }
    if let Some(a) = atoms.iter().find(|a| !seen.contains(a)) {
        return Err(ClassifyError::NotAPartition(format!("{a} is not covered")));
    }
    Ok(())
}

fn conditions_hold(s: &StandardForm, p: &GafPartition) -> bool {
    let xs = s.universal_vars();
    let ys = s.existential_vars();
    let vars = |c: &BTreeSet<Formula>| -> BTreeSet<String> { c.iter().flat_map(|a| a.atom_vars()).collect() };
    let v0 = vars(&p.at0);
    if v0.iter().any(|v| xs.contains(v)) {
        return false;
    }
    let vx: BTreeMap<&String, BTreeSet<String>> = p.per_x.iter().map(|(x, c)| (x, vars(c))).collect();
    // A universal variable with no atom has an empty class; the condition
    // then reads vars(At_x) ∩ x̄ ⊆ {x}.
    for (x, vs) in &vx {
        if vs.iter().any(|v| xs.contains(v) && v != *x) {
            return false;
        }
    }
    for y in &ys {
        let holders: Vec<&String> = vx.iter().filter(|(_, vs)| vs.contains(y)).map(|(x, _)| *x).collect();
        if holders.is_empty() {
            continue;
        }
        let iy = s.idx(y).unwrap();
        let first = holders.iter().all(|x| iy < s.idx(x).unwrap());
        let second = holders.len() == 1 && !v0.contains(y) && iy >= s.idx(holders[0]).unwrap();
        if !(first || second) {
            return false;
        }
    }
    true
}

/// Check conditions (a), (b) and (c) on a partition of the atoms.
pub fn gaf_axiomatic_witness(s: &StandardForm, partition: &GafPartition) -> Result<bool, ClassifyError> {
    let atoms = s.matrix.distinct_atoms();
    check_cover(s, &atoms, partition)?;
    Ok(conditions_hold(s, partition))
}

/// Search all partitions of the atoms for one meeting the axiomatic
/// conditions. An atom holding a universal variable can only go to that
/// variable's class; the others are tried in every class.
pub fn gaf_partition_search(s: &StandardForm) -> Result<Option<GafPartition>, ClassifyError> {
    let atoms = s.matrix.distinct_atoms();
    if atoms.len() > PARTITION_SEARCH_CAP {
        return Err(ClassifyError::TooManyAtoms(atoms.len()));
    }
    let xs: Vec<String> = s.universal_vars().into_iter().collect();
    let mut fixed = GafPartition::default();
    for x in &xs {
        fixed.per_x.insert(x.clone(), BTreeSet::new());
    }
    let mut free = Vec::new();
    for a in &atoms {
        let av = a.atom_vars();
        let held: Vec<&String> = xs.iter().filter(|x| av.contains(*x)).collect();
        match held.as_slice() {
            [] => free.push(a.clone()),
            [x] => {
                fixed.per_x.get_mut(*x).unwrap().insert(a.clone());
            }
            _ => return Ok(None),
        }
    }
    let classes = xs.len() + 1;
    let mut choice = alloc::vec![0usize; free.len()];
    loop {
        let mut p = fixed.clone();
        for (a, &c) in free.iter().zip(&choice) {
            if c == 0 {
                p.at0.insert(a.clone());
            } else {
                p.per_x.get_mut(&xs[c - 1]).unwrap().insert(a.clone());
            }
        }
        if conditions_hold(s, &p) {
            return Ok(Some(p));
        }
        let mut i = 0;
        loop {
            if i == choice.len() {
                return Ok(None);
            }
            choice[i] += 1;
            if choice[i] < classes {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}
