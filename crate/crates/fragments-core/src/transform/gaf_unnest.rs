//! GAF to a sentence without nested universal quantifiers.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{bound_filter, Freezer, StageRecord, TransformError};
use crate::classify::{GafAnalysis, GafGroup};
use crate::normal::{normal_form_clauses, rename_apart, NormalFormMode, StandardForm};
use crate::syntax::{Formula, Literal};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnnestTrace {
    pub stages: Vec<StageRecord>,
    /// Closed NNF sentence; no `∀` lies in the scope of another `∀`.
    pub result: Formula,
}

fn label(g: &GafGroup) -> String {
    match g {
        GafGroup::Zero => "0".into(),
        GafGroup::X(x, k) => format!("{x}:{k}"),
    }
}

struct Grouper<'a> {
    analysis: &'a GafAnalysis,
    freezer: Freezer<GafGroup>,
}

impl Grouper<'_> {
    fn tag(&self, unit: &Formula) -> GafGroup {
        match unit {
            Formula::Frozen(id, _) => self.freezer.tag(*id).expect("frozen unit without a tag"),
            other => {
                let lit = Literal::from_formula(other).expect("normal form member is a literal or a unit");
                self.analysis.group_of_vars(&lit.vars())
            }
        }
    }

    fn labelled(&self, clauses: &[Vec<Formula>]) -> Vec<Vec<(String, Formula)>> {
        clauses.iter().map(|c| c.iter().map(|u| (label(&self.tag(u)), u.unfreeze())).collect()).collect()
    }
}

fn claim(claimed: &mut BTreeSet<String>, bind: &[String]) -> Result<(), TransformError> {
    if let Some(v) = bind.iter().find(|v| claimed.contains(*v)) {
        return Err(TransformError::Grouping(format!("{v} is shared by two groups")));
    }
    claimed.extend(bind.iter().cloned());
    Ok(())
}

pub fn gaf_unnest(s: &StandardForm, a: &GafAnalysis, guard: usize) -> Result<UnnestTrace, TransformError> {
    if !a.is_gaf() {
        return Err(TransformError::NotGaf);
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
                // Zero group first, then one group per universal variable.
                let mut buckets: BTreeMap<Option<String>, Vec<Formula>> = BTreeMap::new();
                let mut rest = Vec::new();
                for u in clause {
                    match g.tag(&u) {
                        GafGroup::Zero => buckets.entry(None).or_default().push(u),
                        GafGroup::X(x, k) if k >= j => buckets.entry(Some(x)).or_default().push(u),
                        GafGroup::X(..) => rest.push(u),
                    }
                }
                if let Some(u) = rest.iter().find(|u| s.y(j).iter().any(|y| u.free_vars().contains(y))) {
                    return Err(TransformError::Grouping(format!("{} keeps a variable of block {j}", u.unfreeze())));
                }
                let mut claimed = BTreeSet::new();
                let mut members = rest;
                for (key, units) in buckets {
                    let inner = Formula::and(units.clone());
                    let bind = bound_filter(s.y(j), &inner.free_vars());
                    claim(&mut claimed, &bind)?;
                    if bind.is_empty() {
                        members.extend(units);
                        continue;
                    }
                    let tag = match key {
                        None => GafGroup::Zero,
                        Some(x) => GafGroup::X(x, j),
                    };
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
                let mut buckets: BTreeMap<String, Vec<Formula>> = BTreeMap::new();
                let mut members = Vec::new();
                for u in clause {
                    match g.tag(&u) {
                        GafGroup::X(x, _) if s.x(j).contains(&x) => buckets.entry(x).or_default().push(u),
                        _ => members.push(u),
                    }
                }
                if let Some(u) = members.iter().find(|u| s.x(j).iter().any(|x| u.free_vars().contains(x))) {
                    return Err(TransformError::Grouping(format!("{} keeps a variable of block {j}", u.unfreeze())));
                }
                for (x, units) in buckets {
                    let inner = Formula::or(units);
                    let bind = bound_filter(s.x(j), &inner.free_vars());
                    if bind.iter().any(|v| *v != x) {
                        return Err(TransformError::Grouping(format!("group of {x} mentions another universal")));
                    }
                    if bind.is_empty() {
                        // `x` no longer occurs: the group is a vacuous `∀x` unit.
                        members.push(g.freezer.freeze(inner, GafGroup::Zero));
                        continue;
                    }
                    let unit = Formula::forall(bind, inner);
                    record.split_foralls.push(unit.unfreeze());
                    members.push(g.freezer.freeze(unit, GafGroup::Zero));
                }
                disjuncts.push(Formula::or(members));
            }
            body = Formula::and(disjuncts);
        }
        stages.push(record);
    }
    let result = rename_apart(&body.unfreeze());
    if has_nested_universal(&result) {
        return Err(TransformError::Grouping("a universal quantifier is still nested".into()));
    }
    Ok(UnnestTrace { stages, result })
}

/// Some `∀` lies in the scope of another `∀`.
pub fn has_nested_universal(f: &Formula) -> bool {
    fn go(f: &Formula, under: bool) -> bool {
        match f {
            Formula::Forall(_, b) => under || go(b, true),
            Formula::Exists(_, b) | Formula::Not(b) | Formula::Frozen(_, b) => go(b, under),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| go(c, under)),
            _ => false,
        }
    }
    go(f, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::analyze_gaf;
    use crate::examples::{PHI1, PHI1_PRIME, PHI2};
    use crate::model::{check_equivalence, Equivalence};
    use crate::normal::{normalize_standard_form, DEFAULT_SIZE_GUARD};
    use crate::parser::parse;
    use crate::transform::literals_conserved;

    fn run(text: &str) -> (StandardForm, Formula) {
        let s = normalize_standard_form(&parse(text).unwrap()).unwrap();
        let a = analyze_gaf(&s);
        let t = gaf_unnest(&s, &a, DEFAULT_SIZE_GUARD).unwrap();
        (s, t.result)
    }

    #[test]
    fn nesting_detector() {
        assert!(has_nested_universal(&parse("forall X. exists Y. forall Z. p(X,Y,Z)").unwrap()));
        assert!(!has_nested_universal(&parse("(forall X. p(X)) & (exists Y. forall Z. q(Y,Z))").unwrap()));
    }

    #[test]
    fn phi1_unnested() {
        let (s, out) = run(PHI1);
        assert!(!has_nested_universal(&out));
        assert!(out.is_nnf() && out.free_vars().is_empty());
        assert!(literals_conserved(&s.matrix, &out));
        assert_eq!(check_equivalence(&s.to_formula(), &out, 2), Ok(Equivalence::Pass));
        let prime = parse(PHI1_PRIME).unwrap();
        assert!(!has_nested_universal(&prime));
        assert_eq!(check_equivalence(&prime, &out, 2), Ok(Equivalence::Pass));
    }

    #[test]
    fn phi2_unnested() {
        let (s, out) = run(PHI2);
        assert!(!has_nested_universal(&out));
        assert!(literals_conserved(&s.matrix, &out));
        assert_eq!(check_equivalence(&s.to_formula(), &out, 3), Ok(Equivalence::Pass));
    }

    #[test]
    fn existential_unit_that_lost_its_universal() {
        // `∃Y20. p0(Y20,Y10)` leaves the `X20` group once split off, and
        // must then share the outer `∃Y10` with the `∀X20` units.
        let (s, out) = run("forall X11. exists Y10. forall X20. exists Y20 Y21. (p0(Y20,Y10) | (~p1(Y20,X20) & p1(X11,Y21)))");
        assert!(!has_nested_universal(&out));
        assert_eq!(check_equivalence(&s.to_formula(), &out, 3), Ok(Equivalence::Pass));
    }

    #[test]
    fn non_gaf_rejected() {
        let s = normalize_standard_form(&parse("forall X. forall Z. p(X,Z)").unwrap()).unwrap();
        assert_eq!(gaf_unnest(&s, &analyze_gaf(&s), DEFAULT_SIZE_GUARD), Err(TransformError::NotGaf));
    }
}
