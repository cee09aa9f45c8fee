//! GBSR to BSR. Members of every normal form are grouped by the residual
//! `L̃_ℓ` they stem from; frozen units inherit the group of their members.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{bound_filter, Freezer, TransformError};
use crate::classify::GbsrAnalysis;
use crate::normal::{normal_form_clauses, prenex, NormalFormMode, StandardForm};
use crate::syntax::{Formula, Literal};

/// One block pair processed, innermost first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub stage: usize,
    /// DNF clauses; each member carries its group label.
    pub dnf: Vec<Vec<(String, Formula)>>,
    /// Existential units created at this stage.
    pub pushed_exists: Vec<Formula>,
    pub cnf: Vec<Vec<(String, Formula)>>,
    /// Universal units created at this stage.
    pub split_foralls: Vec<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransformTrace {
    pub stages: Vec<StageRecord>,
    pub result: StandardForm,
}

struct Grouper<'a> {
    analysis: &'a GbsrAnalysis,
    freezer: Freezer<usize>,
}

impl Grouper<'_> {
    fn tag(&self, unit: &Formula) -> usize {
        match unit {
            Formula::Frozen(id, _) => self.freezer.tag(*id).expect("frozen unit without a tag"),
            other => {
                let lit = Literal::from_formula(other).expect("normal form member is a literal or a unit");
                self.analysis.group_of_vars(&lit.vars())
            }
        }
    }

    fn labelled(&self, clauses: &[Vec<Formula>]) -> Vec<Vec<(String, Formula)>> {
        clauses
            .iter()
            .map(|c| c.iter().map(|u| (format!("{}", self.tag(u)), u.unfreeze())).collect())
            .collect()
    }
}

/// Equivalent `∃*∀*` sentence whose literals all occur in `s` up to
/// renaming.
pub fn gbsr_to_bsr(s: &StandardForm, a: &GbsrAnalysis, guard: usize) -> Result<TransformTrace, TransformError> {
    if !a.is_gbsr() {
        return Err(TransformError::NotGbsr);
    }
    let mut g = Grouper { analysis: a, freezer: Freezer::new() };
    let mut body = s.matrix.clone();
    let mut stages = Vec::new();
    for j in (1..=s.n()).rev() {
        let mut record = StageRecord { stage: j, dnf: Vec::new(), pushed_exists: Vec::new(), cnf: Vec::new(), split_foralls: Vec::new() };

        if !s.y(j).is_empty() {
            let dnf = normal_form_clauses(&body, NormalFormMode::Dnf, guard)?;
            record.dnf = g.labelled(&dnf);
            let mut conjuncts = Vec::with_capacity(dnf.len());
            for clause in dnf {
                let (high, low): (Vec<Formula>, Vec<Formula>) = clause.into_iter().partition(|u| g.tag(u) >= j);
                if let Some(u) = low.iter().find(|u| s.y(j).iter().any(|y| u.free_vars().contains(y))) {
                    return Err(TransformError::Grouping(format!("{} keeps a variable of block {j}", u.unfreeze())));
                }
                let inner = Formula::and(high.clone());
                let bind = bound_filter(s.y(j), &inner.free_vars());
                let mut members = low;
                if bind.is_empty() {
                    members.extend(high);
                } else {
                    let tag = high.iter().map(|u| g.tag(u)).max().unwrap_or(j);
                    let unit = Formula::exists(bind, inner);
                    record.pushed_exists.push(unit.unfreeze());
                    members.push(g.freezer.freeze(unit, tag));
                }
                conjuncts.push(Formula::and(members));
            }
            body = Formula::or(conjuncts);
        }

        if !s.x(j).is_empty() {
            let cnf = normal_form_clauses(&body, NormalFormMode::Cnf, guard)?;
            record.cnf = g.labelled(&cnf);
            let mut disjuncts = Vec::with_capacity(cnf.len());
            for clause in cnf {
                let mut buckets: BTreeMap<usize, Vec<Formula>> = BTreeMap::new();
                for u in clause {
                    buckets.entry(g.tag(&u)).or_default().push(u);
                }
                let mut claimed: BTreeSet<String> = BTreeSet::new();
                let mut members = Vec::new();
                for (tag, units) in buckets {
                    let inner = Formula::or(units.clone());
                    let bind = bound_filter(s.x(j), &inner.free_vars());
                    if let Some(x) = bind.iter().find(|x| claimed.contains(*x)) {
                        return Err(TransformError::Grouping(format!("{x} is shared by two groups")));
                    }
                    claimed.extend(bind.iter().cloned());
                    if bind.is_empty() {
                        members.extend(units);
                    } else {
                        let unit = Formula::forall(bind, inner);
                        record.split_foralls.push(unit.unfreeze());
                        members.push(g.freezer.freeze(unit, tag));
                    }
                }
                disjuncts.push(Formula::or(members));
            }
            body = Formula::and(disjuncts);
        }
        stages.push(record);
    }
    let result = prenex(&body)?;
    if !result.is_exists_forall() {
        return Err(TransformError::Grouping("result is not exists-forall".into()));
    }
    Ok(TransformTrace { stages, result })
}
