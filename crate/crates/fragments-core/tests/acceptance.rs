//! One PASS/FAIL line per acceptance criterion.
//!
//! Run with `cargo test -p fragments-core --test acceptance -- --nocapture`
//! to see the report.

mod common;

use std::collections::BTreeSet;
use std::ops::ControlFlow;
use std::time::{Duration, Instant};

use common::{ground_terms, random_sentence, random_structure, random_term, rng, single_variable_atom, Bias, Shape};
use fragments_core::classify::{
    analyze_gaf, analyze_gbsr, classify, degree, gaf_partition_search, gbsr_partition_search, Fragment,
};
use fragments_core::examples::{PHI1, PHI2};
use fragments_core::interpolate::{interpolate_bsr, interpolate_gbsr, polarity_condition, Interpolant, InterpolationError};
use fragments_core::model::{
    bsr_size_bound, check_equivalence_with, decide_bounded, decide_bsr, for_each_structure, holds, structure_count,
    Equivalence, EquivalenceMethod, Signature, Verdict, DEFAULT_BUDGET,
};
use fragments_core::monadic::{
    herbrand_model, herbrand_universe, holds_truncated, is_variant, match_atom, monadize, transfer_model_backward,
    transfer_model_forward, unify_atoms, MonadizeError,
};
use fragments_core::normal::{normal_form_clauses, normalize_standard_form, DEFAULT_SIZE_GUARD};
use fragments_core::resolution::ProverLimits;
use fragments_core::shrink::{is_uniform, lemma_bound, outcomes, shrink, ShrinkError};
use fragments_core::transform::{
    check_skolem_shape, gaf_unnest, gbsr_to_bsr, has_nested_universal, literals_conserved, skolemize,
};
use fragments_core::{apply_substitution, parse, Formula, NormalFormMode, StandardForm, Substitution, Term};
use rand::Rng;

/// `len(φ′_Sk) ≤ C · len(φ_Sk)^4`. Fitted once as the largest ratio on a
/// calibration sample (seed 99, 1000 pipelines; see
/// `calibrate_monadization_constant`) and kept fixed. The maximum comes
/// from the smallest inputs, where the fixed overhead dominates.
const MONADIZATION_C: f64 = 1.125;

struct Outcome {
    ok: bool,
    detail: String,
    elapsed: Duration,
}

fn timed(run: impl FnOnce() -> (bool, String)) -> Outcome {
    let start = Instant::now();
    let (ok, detail) = run();
    Outcome { ok, detail, elapsed: start.elapsed() }
}

/// Structures per size enumerated one by one; larger sizes are checked by
/// grounding to SAT instead.
const ENUMERATION_BUDGET: u128 = 1 << 18;

/// Equivalence on every structure of size 1 to 3. Returns whether the check
/// passed and whether some size went through the grounded route.
fn equivalent_up_to_3(a: &Formula, b: &Formula) -> (bool, bool) {
    let sig = Signature::of(a).union(&Signature::of(b));
    let grounded = structure_count(&sig, 3).is_none_or(|c| c > ENUMERATION_BUDGET);
    let pass = check_equivalence_with(a, b, 3, EquivalenceMethod::Auto, ENUMERATION_BUDGET) == Ok(Equivalence::Pass);
    (pass, grounded)
}

fn sf(f: &Formula) -> StandardForm {
    normalize_standard_form(f).expect("closed sentence")
}

fn small_preds(rng: &mut rand_chacha::ChaCha8Rng, count: usize, arity: usize) -> Vec<(String, usize)> {
    common::predicates(rng, count, arity)
}

fn shape_with(preds: Vec<(String, usize)>, max_blocks: usize, max_atoms: usize, bias: Bias) -> Shape {
    Shape { predicates: preds, ..Shape::new(max_blocks, max_atoms, &[], bias) }
}

// 1. Golden classification of the two worked examples.
fn criterion_1() -> (bool, String) {
    let mut ok = true;
    let mut notes = Vec::new();
    for (name, text, expected) in [
        ("phi1", PHI1, BTreeSet::from([Fragment::Gaf])),
        ("phi2", PHI2, BTreeSet::from([Fragment::Gbsr, Fragment::Gaf])),
    ] {
        let start = Instant::now();
        let c = classify(&sf(&parse(text).unwrap()));
        let took = start.elapsed();
        let good = c.fragments == expected && took < Duration::from_secs(1);
        ok &= good;
        let names: Vec<&str> = c.fragments.iter().map(|f| f.name()).collect();
        notes.push(format!("{name} {names:?} in {took:?}"));
    }
    (ok, notes.join("; "))
}

// 2. Axiomatic search and algorithmic analysis agree, for both fragments.
fn criterion_2() -> (bool, String) {
    let mut r = rng(2);
    let (mut gbsr_dis, mut gaf_dis, mut gbsr_yes, mut gaf_yes) = (0, 0, 0, 0);
    for i in 0..500 {
        let bias = [Bias::None, Bias::Gbsr, Bias::Gaf][i % 3];
        let preds = small_preds(&mut r, 3, 3);
        let s = sf(&random_sentence(&mut r, &shape_with(preds, 3, 6, bias)));
        let axiomatic = gbsr_partition_search(&s).expect("within the search cap").is_some();
        let algorithmic = analyze_gbsr(&s).unwrap().is_gbsr();
        gbsr_dis += usize::from(axiomatic != algorithmic);
        gbsr_yes += usize::from(algorithmic);
        let axiomatic = gaf_partition_search(&s).unwrap().is_some();
        let algorithmic = analyze_gaf(&s).is_gaf();
        gaf_dis += usize::from(axiomatic != algorithmic);
        gaf_yes += usize::from(algorithmic);
    }
    (
        gbsr_dis == 0 && gaf_dis == 0,
        format!("500 sentences, GBSR {gbsr_yes} members / {gbsr_dis} disagreements, GAF {gaf_yes} members / {gaf_dis} disagreements"),
    )
}

fn random_gbsr(seed: u64, count: usize) -> Vec<StandardForm> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let preds = small_preds(&mut r, 2, 2);
        let s = sf(&random_sentence(&mut r, &shape_with(preds, 3, 5, Bias::Gbsr)));
        if !s.is_exists_forall() && analyze_gbsr(&s).unwrap().is_gbsr() {
            out.push(s);
        }
    }
    out
}

fn random_gaf(seed: u64, count: usize) -> Vec<StandardForm> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let preds = small_preds(&mut r, 2, 2);
        let s = sf(&random_sentence(&mut r, &shape_with(preds, 3, 5, Bias::Gaf)));
        if has_nested_universal(&s.to_formula()) && analyze_gaf(&s).is_gaf() {
            out.push(s);
        }
    }
    out
}

// 3. GBSR to BSR.
fn criterion_3() -> (bool, String) {
    let mut cases = vec![sf(&parse(PHI2).unwrap())];
    cases.extend(random_gbsr(3, 200));
    let (mut bad, mut grounded) = (Vec::new(), 0);
    for (i, s) in cases.iter().enumerate() {
        let a = analyze_gbsr(s).unwrap();
        let out = match gbsr_to_bsr(s, &a, DEFAULT_SIZE_GUARD) {
            Ok(t) => t.result,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if !out.is_exists_forall() {
            bad.push(format!("#{i}: prefix"));
        } else if !literals_conserved(&s.matrix, &out.matrix) {
            bad.push(format!("#{i}: literals"));
        } else {
            let (pass, ground) = equivalent_up_to_3(&s.to_formula(), &out.to_formula());
            grounded += usize::from(ground);
            if !pass {
                bad.push(format!("#{i}: counterexample"));
            }
        }
    }
    (bad.is_empty(), format!("{} sentences ({grounded} needed the grounded check at size 3), failures {:?}", cases.len(), bad))
}

// 4. GAF un-nesting and the Skolem shape.
fn criterion_4() -> (bool, String) {
    let mut cases = vec![sf(&parse(PHI1).unwrap())];
    cases.extend(random_gaf(4, 200));
    let (mut bad, mut grounded) = (Vec::new(), 0);
    for (i, s) in cases.iter().enumerate() {
        let out = match gaf_unnest(s, &analyze_gaf(s), DEFAULT_SIZE_GUARD) {
            Ok(t) => t.result,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if has_nested_universal(&out) {
            bad.push(format!("#{i}: nested"));
        } else if !check_skolem_shape(&skolemize(&out).matrix).ok() {
            bad.push(format!("#{i}: shape"));
        } else {
            let (pass, ground) = equivalent_up_to_3(&s.to_formula(), &out);
            grounded += usize::from(ground);
            if !pass {
                bad.push(format!("#{i}: counterexample"));
            }
        }
    }
    (bad.is_empty(), format!("{} sentences ({grounded} needed the grounded check at size 3), failures {:?}", cases.len(), bad))
}

fn pipelines(seed: u64, count: usize) -> Vec<fragments_core::transform::SkolemSentence> {
    let mut cases = vec![sf(&parse(PHI1).unwrap())];
    cases.extend(random_gaf(seed, count));
    cases
        .iter()
        .map(|s| skolemize(&gaf_unnest(s, &analyze_gaf(s), DEFAULT_SIZE_GUARD).expect("GAF input").result))
        .collect()
}

/// Largest `len(φ′_Sk) / len(φ_Sk)^4` over the pipelines of one seed.
fn monadization_ratio(seed: u64, count: usize) -> f64 {
    pipelines(seed, count)
        .iter()
        .filter_map(|sk| monadize(sk).ok())
        .map(|m| m.phi_prime.len() as f64 / (m.phi_sk().len() as f64).powi(4))
        .fold(0.0, f64::max)
}

/// Prints the ratio that `MONADIZATION_C` was fitted to.
#[test]
#[ignore]
fn calibrate_monadization_constant() {
    println!("max ratio on the calibration seed: {}", monadization_ratio(99, 1000));
}

// 5. Monadization size bounds.
fn criterion_5() -> (bool, String) {
    let mut bad = Vec::new();
    let mut worst: f64 = 0.0;
    let cases = pipelines(5, 150);
    for (i, sk) in cases.iter().enumerate() {
        let m = match monadize(sk) {
            Ok(m) => m,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let at = sk.matrix.distinct_atoms().len();
        let ratio = m.phi_prime.len() as f64 / (m.phi_sk().len() as f64).powi(4);
        worst = worst.max(ratio);
        if m.closure.len() > at * at {
            bad.push(format!("#{i}: |At'| {} > {}", m.closure.len(), at * at));
        }
        if m.psi.len() > at * at * at {
            bad.push(format!("#{i}: |Psi| {}", m.psi.len()));
        }
        if ratio > MONADIZATION_C {
            bad.push(format!("#{i}: length ratio {ratio:.3e}"));
        }
        if m.phi_prime.predicates().iter().any(|(_, k)| *k != 1) {
            bad.push(format!("#{i}: non-unary predicate"));
        }
    }
    (bad.is_empty(), format!("{} runs, max len ratio {worst:.3e} (C = {MONADIZATION_C}), failures {:?}", cases.len(), bad))
}

// 6. Unification of single-variable atoms against ground-instance search.
fn criterion_6() -> (bool, String) {
    let mut r = rng(6);
    let ground = ground_terms(3);
    let mut bad = Vec::new();
    let mut unifiable = 0;
    for i in 0..1000 {
        let a = single_variable_atom(&mut r, "X1", 1);
        // Every other pair is related: `a` renamed, with one argument redrawn.
        let b = if i % 2 == 0 {
            single_variable_atom(&mut r, "X2", 1)
        } else {
            let Formula::Atom(q, mut args) = apply_substitution(&a, &Substitution::singleton("X1", Term::Var("X2".into())))
            else {
                unreachable!()
            };
            let k = r.gen_range(0..args.len());
            args[k] = random_term(&mut r, "X2", 1);
            Formula::Atom(q, args)
        };
        let mgu = unify_atoms(&a, &b).expect("single-variable atoms");
        let mut found = Vec::new();
        for s in &ground {
            let ai = apply_substitution(&a, &Substitution::singleton("X1", s.clone()));
            for t in &ground {
                if ai == apply_substitution(&b, &Substitution::singleton("X2", t.clone())) {
                    found.push(ai.clone());
                }
            }
        }
        match mgu {
            None if found.is_empty() => {}
            None => bad.push(format!("#{i}: oracle unifies {a} and {b}")),
            Some(_) if found.is_empty() => bad.push(format!("#{i}: no ground unifier for {a}, {b}")),
            Some(theta) => {
                unifiable += 1;
                let (at, bt) = (apply_substitution(&a, &theta), apply_substitution(&b, &theta));
                if at != bt {
                    bad.push(format!("#{i}: not a unifier"));
                }
                if !(is_variant(&at, &a) || is_variant(&bt, &b) || at.atom_vars().is_empty()) {
                    bad.push(format!("#{i}: trichotomy fails for {a}, {b}"));
                }
                if let Some(g) = found.iter().find(|g| match_atom(&at, g).is_none()) {
                    bad.push(format!("#{i}: {g} is not an instance of {at}"));
                }
            }
        }
    }
    (bad.is_empty(), format!("1000 pairs, {unifiable} unifiable, failures {:?}", bad))
}

// 7. Model transfer in both directions.
fn criterion_7() -> (bool, String) {
    let cases = pipelines(7, 60);
    let (mut forward, mut backward_free, mut backward_deep) = (0, 0, 0);
    let mut bad = Vec::new();
    for (i, sk) in cases.iter().enumerate() {
        let Ok(m) = monadize(sk) else {
            bad.push(format!("#{i}: monadize"));
            continue;
        };
        if let Ok(Verdict::Sat(a)) = decide_bounded(&m.phi_sk(), 3, DEFAULT_BUDGET, None) {
            forward += 1;
            match transfer_model_forward(&a, &m) {
                Ok(b) if holds(&b, &m.phi_prime) == Ok(true) => {}
                other => bad.push(format!("#{i}: forward {:?}", other.err())),
            }
        }
        let function_free = m.herbrand_functions().iter().all(|(_, k)| *k == 0);
        let depth = if function_free { 0 } else { 2 };
        let hu = herbrand_universe(&m.herbrand_functions(), depth).unwrap();
        if hu.terms.len() > 12 {
            continue;
        }
        let Ok(Some(b)) = herbrand_model(&m.phi_prime, &hu) else { continue };
        match transfer_model_backward(&b, &hu, &m) {
            Ok(t) if function_free => {
                backward_free += 1;
                if t.dropped_instances != 0 || holds(&t.structure, &m.phi_sk()) != Ok(true) {
                    bad.push(format!("#{i}: backward (function-free)"));
                }
            }
            Ok(t) => {
                backward_deep += 1;
                if holds_truncated(&t.structure, &m.phi_sk()).map(|r| r.0) != Ok(true) {
                    bad.push(format!("#{i}: backward (depth 2)"));
                }
            }
            Err(MonadizeError::DepthBoundaryIncomplete(t)) => bad.push(format!("#{i}: boundary {t}")),
            Err(e) => bad.push(format!("#{i}: backward {e}")),
        }
    }
    (
        bad.is_empty() && forward > 0 && backward_free > 0 && backward_deep > 0,
        format!("{forward} forward, {backward_free} function-free and {backward_deep} depth-2 backward transfers, failures {bad:?}"),
    )
}

// 8. Shrinking through uniform strategies.
fn criterion_8() -> (bool, String) {
    let mut r = rng(8);
    let mut bad = Vec::new();
    let (mut done, mut attempts, mut largest) = (0, 0, 0);
    while done < 50 && attempts < 5000 {
        attempts += 1;
        let preds = small_preds(&mut r, 2, 2);
        let mut shape = shape_with(preds, 2, 4, Bias::Gbsr);
        shape.max_block_vars = 1;
        let s = sf(&random_sentence(&mut r, &shape));
        let analysis = analyze_gbsr(&s).unwrap();
        let relational = Signature::of(&s.matrix).functions.is_empty();
        if s.n() > 2 || !relational || !analysis.is_gbsr() || s.existential_vars().is_empty() {
            continue;
        }
        let size = 2 + done % 5;
        let sig = Signature::of(&s.matrix);
        let Some(a) = (0..40).map(|_| random_structure(&mut r, &sig, size, 0.6)).find(|a| holds(a, &s.to_formula()) == Ok(true))
        else {
            continue;
        };
        let report = match shrink(&a, &s) {
            Ok(rep) => rep,
            Err(ShrinkError::GuardrailExceeded(_)) => continue,
            Err(e) => {
                bad.push(format!("#{done}: {e}"));
                done += 1;
                continue;
            }
        };
        done += 1;
        largest = largest.max(size);
        let partition = analysis.partition_atoms();
        let kappa = degree(&s, &partition).unwrap();
        let bound = lemma_bound(s.n(), s.existential_vars().len(), kappa, analysis.atoms.len()).max(1);
        if is_uniform(&a, &s, &partition, &report.uniform) != Ok(true) {
            bad.push(format!("#{done}: not uniform"));
        }
        let before = outcomes(&a, &s, &report.strategy).unwrap();
        let after = outcomes(&a, &s, &report.uniform).unwrap();
        if !after.is_subset_of(&before) {
            bad.push(format!("#{done}: new outcome"));
        }
        if holds(&report.structure, &s.to_formula()) != Ok(true) {
            bad.push(format!("#{done}: B is not a model"));
        }
        if report.structure.size as u128 > bound {
            bad.push(format!("#{done}: |U_B| = {} > {bound}", report.structure.size));
        }
    }
    (
        bad.is_empty() && done == 50,
        format!("{done} pairs (universe up to {largest}), failures {bad:?}"),
    )
}

fn interpolation_pairs() -> Vec<(Formula, Formula, bool)> {
    let hand: &[(&str, &str, bool)] = &[
        ("forall X. (p(X) & q(X))", "forall X. (p(X) | r(X))", false),
        ("exists Y. forall X. (r(Y) & (~r(X) | s(X)) & t(X))", "exists Y. s(Y)", false),
        ("exists Y. forall X. (p(Y) & (~p(X) | q(X)))", "exists Y. forall X. (q(Y) | ~p(X))", false),
        ("(forall X. (~p(X) | q(X))) & (forall X. (~q(X) | r(X)))", "forall X. (~p(X) | r(X))", false),
        ("exists Y1 Y2. (p(Y1) & ~p(Y2))", "(exists Y1 Y2. (p(Y1) & ~p(Y2))) | (exists Y. q(Y))", false),
        ("exists Y. forall X. (e(Y, X) & s(X))", "forall X. exists Y. forall Z. ((e(Y, Z) | ~s(Z)) & s(X))", true),
        ("forall X. exists Y. ((p(Y) | r(X)) & s(X))", "forall X. exists Y. (p(Y) | r(X))", true),
        ("forall X. exists Y. forall Z. ((p(Y) | r(X)) & (q(Z) | r(X)))", "forall X. exists Y. forall Z. ((p(Y) | r(X)) & (q(Z) | r(X)))", true),
        ("(exists Y. forall X. (~p(X) | q(Y))) & (exists Y. p(Y))", "exists Y. q(Y)", false),
        ("(forall X Z. (~e(X, Z) | e(Z, X))) & (exists Y. e(Y, Y))", "exists Y. e(Y, Y)", false),
    ];
    let mut out: Vec<(Formula, Formula, bool)> = hand.iter().map(|(a, b, g)| (parse(a).unwrap(), parse(b).unwrap(), *g)).collect();
    // Weakenings of random BSR sentences: add a disjunct, or drop clauses.
    let mut r = rng(9);
    while out.len() < 30 {
        let preds = small_preds(&mut r, 3, 2);
        let mut shape = shape_with(preds, 1, 5, Bias::None);
        shape.exists_forall = true;
        let s = sf(&random_sentence(&mut r, &shape));
        if !Signature::of(&s.matrix).functions.is_empty() {
            continue;
        }
        let lits: Vec<Formula> = s.matrix.literals().into_iter().map(|l| l.to_formula()).collect();
        let weaker = if out.len() % 2 == 0 {
            let extra = lits[lits.len() / 2].clone();
            let extra = if matches!(extra, Formula::Not(_)) { extra } else { Formula::negate(extra) };
            StandardForm { blocks: s.blocks.clone(), matrix: Formula::or(vec![s.matrix.clone(), extra]) }
        } else {
            let cnf = normal_form_clauses(&s.matrix, NormalFormMode::Cnf, DEFAULT_SIZE_GUARD).unwrap();
            if cnf.len() < 2 {
                continue;
            }
            let kept = cnf.iter().step_by(2).map(|c| Formula::or(c.clone())).collect();
            StandardForm { blocks: s.blocks.clone(), matrix: Formula::and(kept) }
        };
        out.push((s.to_formula(), weaker.to_formula(), false));
    }
    out
}

/// `a ⊨ b` on every structure up to size 3.
fn entails_up_to_3(a: &Formula, b: &Formula) -> bool {
    equivalent_up_to_3(a, &Formula::and(vec![a.clone(), b.clone()])).0
}

// 9. Interpolation.
fn criterion_9() -> (bool, String) {
    let limits = ProverLimits::default();
    let mut bad = Vec::new();
    let (mut proper, mut degenerate) = (0, 0);
    for (i, (phi, psi, gbsr)) in interpolation_pairs().iter().enumerate() {
        let run = if *gbsr { interpolate_gbsr(phi, psi, limits) } else { interpolate_bsr(phi, psi, limits) };
        let out: Interpolant = match run {
            Ok(out) => out,
            Err(InterpolationError::Assertion(c)) => {
                bad.push(format!("#{i}: N'_* assertion fired on {c}"));
                continue;
            }
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        if out.degenerate.is_some() {
            degenerate += 1;
        } else {
            proper += 1;
        }
        let polarity = polarity_condition(&out.chi, phi, psi) == Ok(true);
        if !(out.left_verified && out.right_verified && out.polarity_ok && polarity) {
            bad.push(format!("#{i}: verification flags"));
        }
        if !entails_up_to_3(phi, &out.chi) || !entails_up_to_3(&out.chi, psi) {
            bad.push(format!("#{i}: finite-model oracle rejects {}", out.chi));
        }
    }
    let bottom = interpolate_bsr(&parse("exists Y. (p(Y) & ~p(Y))").unwrap(), &parse("forall X. q(X)").unwrap(), limits);
    let top = interpolate_bsr(&parse("exists Y. p(Y)").unwrap(), &parse("forall X. (q(X) | ~q(X))").unwrap(), limits);
    if bottom.map(|o| o.chi) != Ok(Formula::False) {
        bad.push("bottom case".into());
    }
    if top.map(|o| o.chi) != Ok(Formula::True) {
        bad.push("top case".into());
    }
    (bad.is_empty(), format!("30 pairs ({proper} proper, {degenerate} degenerate), explicit ⊥/⊤ cases, failures {bad:?}"))
}

// 10. Complete BSR decision against enumeration of all small structures.
fn criterion_10() -> (bool, String) {
    let mut r = rng(10);
    let mut bad = Vec::new();
    let (mut count, mut sat) = (0, 0);
    while count < 100 {
        let preds = small_preds(&mut r, 2, 2);
        let mut shape = shape_with(preds, 1, 5, Bias::None);
        shape.exists_forall = true;
        if count % 3 == 0 {
            shape.constants = vec!["c".into()];
        }
        let s = sf(&random_sentence(&mut r, &shape));
        let bound = bsr_size_bound(&s);
        if bound > 4 {
            continue;
        }
        count += 1;
        let f = s.to_formula();
        let sig = Signature::of(&f);
        let oracle = (1..=bound).any(|size| {
            for_each_structure(&sig, size, u128::MAX, |a| {
                if holds(a, &f) == Ok(true) {
                    ControlFlow::Break(())
                } else {
                    ControlFlow::Continue(())
                }
            })
            .unwrap()
        });
        sat += usize::from(oracle);
        match decide_bsr(&s) {
            Ok(Verdict::Sat(m)) if oracle && holds(&m, &f) == Ok(true) => {}
            Ok(Verdict::Unsat) if !oracle => {}
            other => bad.push(format!("{f}: {other:?} vs oracle {oracle}")),
        }
    }
    (bad.is_empty(), format!("100 sentences ({sat} satisfiable), failures {bad:?}"))
}

#[test]
fn acceptance() {
    let criteria: [(usize, fn() -> (bool, String)); 10] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
        (10, criterion_10),
    ];
    let mut failed = Vec::new();
    for (n, run) in criteria {
        let o = timed(run);
        let verdict = if o.ok { "PASS" } else { "FAIL" };
        // Written to the raw handle so the line shows up without `--nocapture`.
        let line = format!("criterion {n:>2}: {verdict} ({:.1?}) {}\n", o.elapsed, o.detail);
        std::io::Write::write_all(&mut std::io::stderr(), line.as_bytes()).unwrap();
        if !o.ok {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
