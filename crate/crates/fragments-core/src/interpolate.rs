//! Craig-Lyndon interpolants for relational BSR and GBSR sentences without
//! equality, read off an ordered-resolution refutation.
//!
//! For `φ = ∃ȳ∀x̄.φ′` and `ψ = ∃v̄∀ū.ψ′` with `φ ⊨ ψ`, predicates are split
//! by polarity into Π1..Π4, Π2 literals are flipped, `ȳ` becomes fresh
//! constants and `ū` fresh functions of `v̄`. Both clause sets are saturated
//! separately, their union is refuted, and the clauses of the φ side that
//! the refutation uses form the interpolant after the constants are turned
//! back into `∃ȳ` and the flip is undone.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::classify::{analyze_gbsr, ClassifyError};
use crate::names::NameSupply;
use crate::normal::{nnf, normal_form_clauses, normalize_standard_form, NormalFormError, NormalFormMode, StandardForm, DEFAULT_SIZE_GUARD};
use crate::resolution::{refute, Clause, OrderingConfig, Outcome, PTerm, ProverError, ProverLimits, Saturator, Symbols};
use crate::subst::{apply_substitution, Substitution};
use crate::syntax::{Formula, Term};
use crate::transform::{gbsr_to_bsr, TransformError};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum InterpolationError {
    #[error("the first sentence does not entail the second")]
    NotEntailed,
    #[error("limit reached: {0}")]
    LimitHit(String),
    #[error("equality is not supported")]
    EqualityNotSupported,
    #[error("sentence is not BSR")]
    NotBsr,
    #[error("sentence is not GBSR")]
    NotGbsr,
    #[error("symbol `{0}` is a function or constant; input must be relational")]
    NotRelational(String),
    #[error(transparent)]
    Prover(ProverError),
    #[error(transparent)]
    NormalForm(#[from] NormalFormError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error("used clause violates the polarity case analysis: {0}")]
    Assertion(String),
    #[error("interpolant check failed: {0}")]
    Verification(String),
}

impl From<ProverError> for InterpolationError {
    fn from(e: ProverError) -> Self {
        match e {
            ProverError::LimitHit(m) => InterpolationError::LimitHit(m),
            ProverError::EqualityNotSupported => InterpolationError::EqualityNotSupported,
            other => InterpolationError::Prover(other),
        }
    }
}

/// Predicates of `φ′` grouped by how they occur relative to `ψ′`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PolarityPartition {
    /// In `φ′`, not in `ψ′`.
    pub pi1: BTreeSet<String>,
    /// Positive in `φ′`, not positive in `ψ′`, not in Π1.
    pub pi2: BTreeSet<String>,
    /// Negative in `φ′`, not negative in `ψ′`, in neither Π1 nor Π2.
    pub pi3: BTreeSet<String>,
    /// The remaining predicates of `φ′`.
    pub pi4: BTreeSet<String>,
}

/// Predicates with a positive and with a negative occurrence, counting
/// enclosing negations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Polarities {
    pub positive: BTreeSet<String>,
    pub negative: BTreeSet<String>,
}

impl Polarities {
    pub fn all(&self) -> BTreeSet<String> {
        self.positive.union(&self.negative).cloned().collect()
    }
}

pub fn polarities(f: &Formula) -> Result<Polarities, InterpolationError> {
    fn go(f: &Formula, positive: bool, out: &mut Polarities) -> Result<(), InterpolationError> {
        match f {
            Formula::Atom(p, _) => {
                if positive {
                    out.positive.insert(p.clone());
                } else {
                    out.negative.insert(p.clone());
                }
            }
            Formula::Eq(..) => return Err(InterpolationError::EqualityNotSupported),
            Formula::Not(g) => go(g, !positive, out)?,
            Formula::And(cs) | Formula::Or(cs) => {
                for c in cs {
                    go(c, positive, out)?;
                }
            }
            Formula::Forall(_, g) | Formula::Exists(_, g) | Formula::Frozen(_, g) => go(g, positive, out)?,
            Formula::True | Formula::False => {}
        }
        Ok(())
    }
    let mut out = Polarities::default();
    go(f, true, &mut out)?;
    Ok(out)
}

pub fn polarity_partition(phi: &Formula, psi: &Formula) -> Result<PolarityPartition, InterpolationError> {
    let (a, b) = (polarities(phi)?, polarities(psi)?);
    let in_psi = b.all();
    let mut part = PolarityPartition::default();
    for p in a.all() {
        if !in_psi.contains(&p) {
            part.pi1.insert(p);
        } else if a.positive.contains(&p) && !b.positive.contains(&p) {
            part.pi2.insert(p);
        } else if a.negative.contains(&p) && !b.negative.contains(&p) {
            part.pi3.insert(p);
        } else {
            part.pi4.insert(p);
        }
    }
    Ok(part)
}

/// Every predicate occurring positively (negatively) in `chi` occurs
/// positively (negatively) in both `phi` and `psi`.
pub fn polarity_condition(chi: &Formula, phi: &Formula, psi: &Formula) -> Result<bool, InterpolationError> {
    let (c, a, b) = (polarities(chi)?, polarities(phi)?, polarities(psi)?);
    Ok(c.positive.iter().all(|p| a.positive.contains(p) && b.positive.contains(p))
        && c.negative.iter().all(|p| a.negative.contains(p) && b.negative.contains(p)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Degenerate {
    /// `φ` is unsatisfiable; `χ = ⊥`.
    Bottom,
    /// `ψ` is valid; `χ = ⊤`.
    Top,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interpolant {
    pub chi: Formula,
    pub partition: PolarityPartition,
    pub degenerate: Option<Degenerate>,
    /// Sizes of `N`, `M`, `N_*`, `M_*`.
    pub n_clauses: usize,
    pub m_clauses: usize,
    pub n_saturated: usize,
    pub m_saturated: usize,
    /// The clauses of `N_*` used by the refutation, as formulas over the
    /// Skolem constants.
    pub used: Vec<Formula>,
    /// `φ ∧ ¬χ` refuted.
    pub left_verified: bool,
    /// `χ ∧ ¬ψ` refuted.
    pub right_verified: bool,
    pub polarity_ok: bool,
}

fn flip(clauses: &[Vec<Formula>], pi2: &BTreeSet<String>) -> Vec<Vec<Formula>> {
    clauses
        .iter()
        .map(|c| {
            c.iter()
                .map(|l| match l {
                    Formula::Atom(p, _) if pi2.contains(p) => Formula::negate(l.clone()),
                    Formula::Not(a) if matches!(&**a, Formula::Atom(p, _) if pi2.contains(p)) => (**a).clone(),
                    _ => l.clone(),
                })
                .collect()
        })
        .collect()
}

fn cnf_formula(clauses: &[Vec<Formula>]) -> Formula {
    Formula::and(clauses.iter().map(|c| Formula::or(c.clone())).collect())
}

fn check_relational(f: &Formula) -> Result<(), InterpolationError> {
    if f.has_equality() {
        return Err(InterpolationError::EqualityNotSupported);
    }
    match f.functions().into_iter().next() {
        Some((name, _)) => Err(InterpolationError::NotRelational(name)),
        None => Ok(()),
    }
}

fn bsr_form(f: &Formula) -> Result<StandardForm, InterpolationError> {
    check_relational(f)?;
    let s = normalize_standard_form(f)?;
    if !s.is_exists_forall() {
        return Err(InterpolationError::NotBsr);
    }
    Ok(s)
}

fn interpolant_only(chi: Formula, degenerate: Degenerate, partition: PolarityPartition) -> Interpolant {
    Interpolant {
        chi,
        partition,
        degenerate: Some(degenerate),
        n_clauses: 0,
        m_clauses: 0,
        n_saturated: 0,
        m_saturated: 0,
        used: Vec::new(),
        left_verified: true,
        right_verified: true,
        polarity_ok: true,
    }
}

fn saturate(syms: &Symbols, config: &OrderingConfig, limits: ProverLimits, clauses: &[Clause]) -> Result<Vec<Clause>, InterpolationError> {
    let mut sat = Saturator::new(syms, config, limits);
    for c in clauses {
        sat.add_input(c.clone(), 0)?;
    }
    match sat.run()? {
        Outcome::Saturated => Ok(sat.kept_clauses().into_iter().map(|i| sat.nodes[i].clause.clone()).collect()),
        Outcome::Refuted(_) => Err(InterpolationError::Assertion("a side was refuted on its own after the degenerate checks".into())),
    }
}

fn exists_part(s: &StandardForm) -> Vec<String> {
    s.blocks.iter().flat_map(|b| b.existential.iter().cloned()).collect()
}

fn forall_part(s: &StandardForm) -> Vec<String> {
    s.blocks.iter().flat_map(|b| b.universal.iter().cloned()).collect()
}

pub fn interpolate_bsr(phi: &Formula, psi: &Formula, limits: ProverLimits) -> Result<Interpolant, InterpolationError> {
    let (sphi, spsi) = (bsr_form(phi)?, bsr_form(psi)?);
    let (phi_n, psi_n) = (sphi.to_formula(), spsi.to_formula());

    if !refute(&Formula::and(alloc::vec![phi_n.clone(), Formula::negate(psi_n.clone())]), limits)? {
        return Err(InterpolationError::NotEntailed);
    }

    let phi_cnf = normal_form_clauses(&sphi.matrix, NormalFormMode::Cnf, DEFAULT_SIZE_GUARD)?;
    let psi_cnf = normal_form_clauses(&spsi.matrix, NormalFormMode::Cnf, DEFAULT_SIZE_GUARD)?;
    let partition = polarity_partition(&cnf_formula(&phi_cnf), &cnf_formula(&psi_cnf))?;

    if refute(&phi_n, limits)? {
        return Ok(interpolant_only(Formula::False, Degenerate::Bottom, partition));
    }
    if refute(&Formula::negate(psi_n.clone()), limits)? {
        return Ok(interpolant_only(Formula::True, Degenerate::Top, partition));
    }

    let mut names = NameSupply::new(
        phi_n.predicates().into_iter().chain(psi_n.predicates()).map(|(p, _)| p).chain(phi_n.all_vars()).chain(psi_n.all_vars()),
    );

    // φ̂_Sk: ȳ ↦ fresh constants.
    let ys = exists_part(&sphi);
    let mut to_const = Substitution::new();
    let mut const_to_y = BTreeMap::new();
    for y in &ys {
        let c = names.fresh("c");
        to_const.insert(y, Term::Const(c.clone()));
        const_to_y.insert(c, y.clone());
    }
    let n_formulas: Vec<Vec<Formula>> =
        flip(&phi_cnf, &partition.pi2).iter().map(|c| c.iter().map(|l| apply_substitution(l, &to_const)).collect()).collect();

    // ψ̂_Sk: ¬ψ̂′ with ū ↦ fresh functions of v̄.
    let vs: Vec<Term> = exists_part(&spsi).into_iter().map(Term::Var).collect();
    let mut to_fun = Substitution::new();
    let mut skolem_functions = BTreeSet::new();
    for u in forall_part(&spsi) {
        let f = names.fresh("f");
        let t = if vs.is_empty() { Term::Const(f.clone()) } else { Term::App(f.clone(), vs.clone()) };
        to_fun.insert(&u, t);
        skolem_functions.insert(f);
    }
    let neg_psi_hat = Formula::negate(cnf_formula(&flip(&psi_cnf, &partition.pi2)));
    let m_formulas = normal_form_clauses(&nnf(&apply_substitution(&neg_psi_hat, &to_fun)), NormalFormMode::Cnf, DEFAULT_SIZE_GUARD)?;

    let mut syms = Symbols::new();
    let n: Vec<Clause> = n_formulas.iter().map(|c| syms.clause(c)).collect::<Result<_, _>>()?;
    let m: Vec<Clause> = m_formulas.iter().map(|c| syms.clause(c)).collect::<Result<_, _>>()?;
    let config = OrderingConfig {
        top_predicates: partition.pi1.clone(),
        selected: partition.pi2.union(&partition.pi3).cloned().collect(),
        bottom_functions: const_to_y.keys().cloned().collect(),
    };
    let n_star = saturate(&syms, &config, limits, &n)?;
    let m_star = saturate(&syms, &config, limits, &m)?;

    let mut sat = Saturator::new(&syms, &config, limits);
    for c in &n_star {
        sat.add_input(c.clone(), 0)?;
    }
    for c in &m_star {
        sat.add_input(c.clone(), 1)?;
    }
    let Outcome::Refuted(root) = sat.run()? else {
        return Err(InterpolationError::Verification("the joint clause set saturated without the empty clause".into()));
    };
    let used: Vec<Clause> = sat
        .input_ancestors(root)
        .into_iter()
        .filter(|&i| matches!(sat.nodes[i].origin, crate::resolution::Origin::Input(0)))
        .map(|i| sat.nodes[i].clause.clone())
        .collect();

    for c in &used {
        for l in &c.lits {
            let p = syms.name(l.pred);
            if partition.pi1.contains(p) || (!l.positive && config.selected.contains(p)) {
                return Err(InterpolationError::Assertion(format!("{}", syms.clause_sentence(c))));
            }
        }
    }

    // De-Skolemize: constants back to ȳ, clause variables to fresh z̄.
    let mut zs = Vec::new();
    let mut body = Vec::with_capacity(used.len());
    for c in &used {
        let mut local = BTreeMap::new();
        let lits = c
            .lits
            .iter()
            .map(|l| {
                let args = l.args.iter().map(|t| deskolem(t, &syms, &const_to_y, &mut local, &mut zs, &mut names)).collect();
                let atom = Formula::Atom(syms.name(l.pred).to_string(), args);
                if l.positive {
                    atom
                } else {
                    Formula::negate(atom)
                }
            })
            .collect::<Vec<_>>();
        body.push(lits);
    }
    let chi_matrix = cnf_formula(&flip(&body, &partition.pi2));
    let free = chi_matrix.free_vars();
    let used_ys: Vec<String> = ys.iter().filter(|y| free.contains(*y)).cloned().collect();
    let chi = Formula::exists(used_ys, Formula::forall(zs, chi_matrix));

    let left = refute(&Formula::and(alloc::vec![phi_n.clone(), Formula::negate(chi.clone())]), limits)?;
    let right = refute(&Formula::and(alloc::vec![chi.clone(), Formula::negate(psi_n.clone())]), limits)?;
    if !left {
        return Err(InterpolationError::Verification("φ ∧ ¬χ was not refuted".into()));
    }
    if !right {
        return Err(InterpolationError::Verification("χ ∧ ¬ψ was not refuted".into()));
    }
    let polarity_ok = polarity_condition(&chi, phi, psi)?;
    if !polarity_ok {
        return Err(InterpolationError::Verification("polarity condition".into()));
    }

    Ok(Interpolant {
        chi,
        partition,
        degenerate: None,
        n_clauses: n.len(),
        m_clauses: m.len(),
        n_saturated: n_star.len(),
        m_saturated: m_star.len(),
        used: used.iter().map(|c| syms.clause_sentence(c)).collect(),
        left_verified: left,
        right_verified: right,
        polarity_ok,
    })
}

fn deskolem(
    t: &PTerm,
    syms: &Symbols,
    const_to_y: &BTreeMap<String, String>,
    local: &mut BTreeMap<u32, String>,
    zs: &mut Vec<String>,
    names: &mut NameSupply,
) -> Term {
    match t {
        PTerm::Var(v) => Term::Var(
            local
                .entry(*v)
                .or_insert_with(|| {
                    let z = names.fresh("Z");
                    zs.push(z.clone());
                    z
                })
                .clone(),
        ),
        PTerm::App(f, args) => {
            let name = syms.name(*f);
            match const_to_y.get(name) {
                Some(y) if args.is_empty() => Term::Var(y.clone()),
                // Only the constants for ȳ can reach the φ side.
                _ => Term::App(name.into(), args.iter().map(|a| deskolem(a, syms, const_to_y, local, zs, names)).collect()),
            }
        }
    }
}

/// GBSR sentences are first turned into BSR; the polarity condition is also
/// checked against the inputs.
pub fn interpolate_gbsr(phi: &Formula, psi: &Formula, limits: ProverLimits) -> Result<Interpolant, InterpolationError> {
    let mut bsr = Vec::with_capacity(2);
    for f in [phi, psi] {
        check_relational(f)?;
        let s = normalize_standard_form(f)?;
        let a = analyze_gbsr(&s)?;
        if !a.is_gbsr() {
            return Err(InterpolationError::NotGbsr);
        }
        bsr.push(gbsr_to_bsr(&s, &a, DEFAULT_SIZE_GUARD)?.result.to_formula());
    }
    let out = interpolate_bsr(&bsr[0], &bsr[1], limits)?;
    if !polarity_condition(&out.chi, phi, psi)? {
        return Err(InterpolationError::Verification("polarity condition against the GBSR inputs".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples::PHI2;
    use crate::model::{check_equivalence, Equivalence};
    use crate::parser::parse;

    fn p(t: &str) -> Formula {
        parse(t).unwrap()
    }

    fn set(items: &[&str]) -> BTreeSet<String> {
        items.iter().map(|s| s.to_string()).collect()
    }

    /// `a ⊨ b` on all structures up to the given size.
    fn entails_up_to(a: &Formula, b: &Formula, size: usize) -> bool {
        let both = Formula::and(alloc::vec![a.clone(), b.clone()]);
        check_equivalence(a, &both, size) == Ok(Equivalence::Pass)
    }

    #[test]
    fn partition_examples() {
        let part = polarity_partition(&p("p(X) & ~q(X)"), &p("p(X) | ~q(X)")).unwrap();
        assert!(part.pi1.is_empty() && part.pi2.is_empty() && part.pi3.is_empty());
        assert_eq!(part.pi4, set(&["p", "q"]));
        let part = polarity_partition(&p("p(X) & r(X)"), &p("p(X)")).unwrap();
        assert_eq!((part.pi1, part.pi4), (set(&["r"]), set(&["p"])));
        let part = polarity_partition(&p("p(X)"), &p("~p(X) | s(X)")).unwrap();
        assert_eq!(part.pi2, set(&["p"]));
        assert_eq!(polarity_partition(&p("X = X"), &p("p(X)")), Err(InterpolationError::EqualityNotSupported));
    }

    #[test]
    fn polarity_counts_negations() {
        let pol = polarities(&p("~(p(X) & ~q(X)) | ~~r(X)")).unwrap();
        assert_eq!(pol.positive, set(&["q", "r"]));
        assert_eq!(pol.negative, set(&["p"]));
    }

    fn check(phi: &str, psi: &str) -> Interpolant {
        let (a, b) = (p(phi), p(psi));
        let out = interpolate_bsr(&a, &b, ProverLimits::default()).unwrap();
        assert!(out.left_verified && out.right_verified && out.polarity_ok);
        assert!(entails_up_to(&a, &out.chi, 3), "{} does not follow", out.chi);
        assert!(entails_up_to(&out.chi, &b, 3), "{} too weak", out.chi);
        out
    }

    #[test]
    fn drops_the_extra_conjunct() {
        let out = check("forall X. (p(X) & q(X))", "forall X. (p(X) | r(X))");
        let pol = polarities(&out.chi).unwrap();
        assert_eq!(pol.positive, set(&["p"]));
        assert!(pol.negative.is_empty());
        assert_eq!(out.partition.pi1, set(&["q"]));
    }

    #[test]
    fn degenerate_cases() {
        let out = interpolate_bsr(&p("exists Y. (p(Y) & ~p(Y))"), &p("forall X. q(X)"), ProverLimits::default()).unwrap();
        assert_eq!((out.chi, out.degenerate), (Formula::False, Some(Degenerate::Bottom)));
        let out = interpolate_bsr(&p("exists Y. p(Y)"), &p("forall X. (q(X) | ~q(X))"), ProverLimits::default()).unwrap();
        assert_eq!((out.chi, out.degenerate), (Formula::True, Some(Degenerate::Top)));
    }

    #[test]
    fn existential_witness_survives() {
        let out = check("exists Y. forall X. (r(Y) & (~r(X) | s(X)) & t(X))", "exists Y. s(Y)");
        assert!(out.partition.pi1.contains("t"));
        assert!(!out.chi.predicates().iter().any(|(q, _)| q == "t"));
    }

    #[test]
    fn flipped_predicates() {
        // p is positive on the left and negative on the right: Π2.
        let out = check("exists Y. forall X. (p(Y) & (~p(X) | q(X)))", "exists Y. forall X. (q(Y) | ~p(X))");
        assert_eq!(out.partition.pi2, set(&["p"]));
        assert_eq!(out.partition.pi4, set(&["q"]));
    }

    #[test]
    fn non_entailing_pair() {
        assert_eq!(
            interpolate_bsr(&p("exists Y. p(Y)"), &p("forall X. p(X)"), ProverLimits::default()),
            Err(InterpolationError::NotEntailed)
        );
    }

    #[test]
    fn rejects_other_fragments() {
        let lim = ProverLimits::default();
        assert_eq!(interpolate_bsr(&p("forall X. exists Y. p(X, Y)"), &p("p(X, X) | ~p(X, X)").clone(), lim).err(), Some(InterpolationError::NotBsr));
        assert_eq!(interpolate_bsr(&p("p(a)"), &p("p(a)"), lim).err(), Some(InterpolationError::NotRelational("a".into())));
        assert_eq!(
            interpolate_bsr(&p("exists Y. Y = Y"), &p("exists Y. Y = Y"), lim).err(),
            Some(InterpolationError::EqualityNotSupported)
        );
    }

    #[test]
    fn gbsr_reflexive() {
        let phi = p("forall X. exists Y. forall Z. ((p(Y) | r(X)) & (q(Z) | r(X)))");
        let out = interpolate_gbsr(&phi, &phi, ProverLimits::default()).unwrap();
        assert!(entails_up_to(&phi, &out.chi, 2) && entails_up_to(&out.chi, &phi, 2));
        assert!(polarity_condition(&out.chi, &phi, &phi).unwrap());
    }

    #[test]
    fn gbsr_extra_predicate_absent() {
        let phi = p("forall X. exists Y. ((p(Y) | r(X)) & s(X))");
        let psi = p("forall X. exists Y. (p(Y) | r(X))");
        let out = interpolate_gbsr(&phi, &psi, ProverLimits::default()).unwrap();
        assert!(out.partition.pi1.contains("s"));
        assert!(!out.chi.predicates().iter().any(|(q, _)| q == "s"));
        assert!(entails_up_to(&phi, &out.chi, 3) && entails_up_to(&out.chi, &psi, 3));
    }

    #[test]
    fn gbsr_example_against_itself() {
        let phi = p(PHI2);
        match interpolate_gbsr(&phi, &phi, ProverLimits::default()) {
            Ok(out) => assert!(out.left_verified && out.right_verified && out.polarity_ok),
            Err(InterpolationError::LimitHit(_)) => {}
            Err(e) => panic!("{e}"),
        }
    }
}
