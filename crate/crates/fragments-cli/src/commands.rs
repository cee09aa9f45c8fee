//! One function per subcommand. Each fills the report and says whether the
//! verdict was positive.

use std::path::{Path, PathBuf};

use fragments_core::classify::{analyze_gaf, analyze_gbsr, classify as classify_sentence, degree, ClassifyError, GafViolation, GbsrAnalysis};
use fragments_core::interpolate::{interpolate_bsr, interpolate_gbsr, Degenerate, InterpolationError};
use fragments_core::model::{
    check_equivalence_with, decide_bounded, decide_bsr, holds, Equivalence, EquivalenceMethod, FiniteStructure, ModelError,
    Signature, Verdict, DEFAULT_BUDGET,
};
use fragments_core::monadic::{herbrand_model, herbrand_universe, monadize, transfer_model_backward, MonadizeError};
use fragments_core::normal::{normalize_standard_form, NormalFormError};
use fragments_core::resolution::ProverLimits;
use fragments_core::shrink::{shrink as shrink_model, ShrinkError};
use fragments_core::transform::{
    check_skolem_shape, gaf_unnest, gbsr_to_bsr, has_nested_universal, skolemize as skolemize_sentence, StageRecord,
    TransformError,
};
use fragments_core::{parse, Formula, StandardForm};
use serde_json::{json, Value};

use crate::report::Report;
use crate::structure;
use crate::{DecideMethod, Options};

pub enum Exit {
    Success,
    Negative,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("resource limit: {0}")]
    Limit(String),
    #[error("internal check failed: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Limit(_) => 3,
            CliError::Internal(_) => 4,
        }
    }
}

impl From<NormalFormError> for CliError {
    fn from(e: NormalFormError) -> Self {
        match e {
            NormalFormError::SizeGuardExceeded(_) => CliError::Limit(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::BudgetExceeded(_) => CliError::Limit(e.to_string()),
            ModelError::MissingInterpretation(_) | ModelError::FreeVariable(_) | ModelError::NotBsr(_) => CliError::Input(e.to_string()),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        match e {
            TransformError::NormalForm(n) => n.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        CliError::Internal(e.to_string())
    }
}

impl From<MonadizeError> for CliError {
    fn from(e: MonadizeError) -> Self {
        match e {
            MonadizeError::DepthBoundaryIncomplete(_) => CliError::Limit(e.to_string()),
            MonadizeError::Model(m) => m.into(),
            _ => CliError::Internal(e.to_string()),
        }
    }
}

fn read_sentence(path: &str) -> Result<Formula, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{path}: {e}")))?;
    parse(&text).map_err(|e| CliError::Input(format!("{path}: {e}")))
}

fn standard_form(path: &str) -> Result<(Formula, StandardForm), CliError> {
    let f = read_sentence(path)?;
    let s = normalize_standard_form(&f)?;
    Ok((f, s))
}

/// `dir/name.fol` with suffix `.bsr.fol` becomes `dir/name.bsr.fol`.
fn artifact_path(input: &str, suffix: &str) -> PathBuf {
    let path = Path::new(input);
    let stem = match path.extension() {
        Some(ext) if ext == "fol" || ext == "json" => path.with_extension(""),
        _ => path.to_path_buf(),
    };
    let mut name = stem.into_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn write_artifact(report: &mut Report, input: &str, suffix: &str, contents: &str) -> Result<(), CliError> {
    let path = artifact_path(input, suffix);
    std::fs::write(&path, contents).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    report.artifacts.push(path.display().to_string());
    Ok(())
}

fn write_model(report: &mut Report, input: &str, suffix: &str, a: &FiniteStructure) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(&structure::to_json(a)).expect("structure is plain data");
    write_artifact(report, input, suffix, &(text + "\n"))
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Value {
    Value::from(items.into_iter().map(|x| x.to_string()).collect::<Vec<_>>())
}

fn big(n: u128) -> Value {
    u64::try_from(n).map(Value::from).unwrap_or_else(|_| Value::from(n.to_string()))
}

fn prefix_counts(s: &StandardForm) -> Value {
    json!({ "blocks": s.n(), "existentials": s.existential_vars().len(), "universals": s.universal_vars().len() })
}

fn gbsr_witness(a: &GbsrAnalysis) -> Value {
    match &a.violation {
        None => Value::Null,
        Some(v) => json!({ "k": v.k, "l": v.l, "variable": v.variable, "literal": v.literal.to_string() }),
    }
}

fn gaf_witness(v: &GafViolation) -> Value {
    match v {
        GafViolation::TwoUniversals(atom) => json!({ "two_universals": atom.to_string() }),
        GafViolation::SharedExistential { x, x2, y } => json!({ "shared_existential": { "x": x, "x2": x2, "y": y } }),
    }
}

fn stage_json(stage: &StageRecord) -> Value {
    let labelled = |clauses: &[Vec<(String, Formula)>]| -> Value {
        clauses
            .iter()
            .map(|c| c.iter().map(|(tag, l)| json!([tag, l.to_string()])).collect::<Vec<_>>())
            .collect::<Vec<_>>()
            .into()
    };
    json!({
        "stage": stage.stage,
        "dnf": labelled(&stage.dnf),
        "pushed_exists": strings(&stage.pushed_exists),
        "cnf": labelled(&stage.cnf),
        "split_foralls": strings(&stage.split_foralls),
    })
}

pub fn classify(input: &str, report: &mut Report) -> Result<Exit, CliError> {
    let (_, s) = standard_form(input)?;
    let c = classify_sentence(&s);
    report.set("fragments", strings(c.fragments.iter().map(|f| f.name())));
    report.set("standard_form", s.to_formula().to_string());
    report.set("prefix", prefix_counts(&s));
    match analyze_gbsr(&s) {
        Ok(a) => {
            if a.is_gbsr() {
                let partition = a.partition_atoms();
                report.set("degree", degree(&s, &partition)?);
                report.set("gbsr_partition", partition.iter().map(strings).collect::<Vec<_>>());
            } else {
                report.set("gbsr_witness", gbsr_witness(&a));
            }
            let l_tilde: Vec<Value> = a.l_tilde.iter().map(|set| strings(set.iter().map(|&i| &a.literals[i]))).collect();
            report.set("l_tilde", l_tilde);
            report.set("x_tilde", a.x_tilde.iter().map(strings).collect::<Vec<_>>());
        }
        Err(ClassifyError::FunctionsNotAllowed(f)) => report.set("gbsr_witness", json!({ "function": f })),
        Err(e) => return Err(e.into()),
    }
    let gaf = analyze_gaf(&s);
    if let Some(v) = &gaf.violation {
        report.set("gaf_witness", gaf_witness(v));
    }
    Ok(Exit::Success)
}

pub fn to_bsr(input: &str, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    let (_, s) = standard_form(input)?;
    let a = match analyze_gbsr(&s) {
        Ok(a) => a,
        Err(ClassifyError::FunctionsNotAllowed(f)) => {
            report.set("gbsr", false);
            report.set("witness", json!({ "function": f }));
            return Ok(Exit::Negative);
        }
        Err(e) => return Err(e.into()),
    };
    if !a.is_gbsr() {
        report.set("gbsr", false);
        report.set("witness", gbsr_witness(&a));
        return Ok(Exit::Negative);
    }
    let trace = gbsr_to_bsr(&s, &a, opts.size_guard)?;
    let text = trace.result.to_formula().to_string();
    report.set("gbsr", true);
    report.set("result", text.clone());
    report.set("prefix", prefix_counts(&trace.result));
    if opts.trace {
        report.set("stages", trace.stages.iter().map(stage_json).collect::<Vec<_>>());
    }
    write_artifact(report, input, ".bsr.fol", &(text + "\n"))?;
    Ok(Exit::Success)
}

/// The GAF un-nesting of `s`, or the violation that prevents it.
fn unnest(s: &StandardForm, opts: &Options, report: &mut Report) -> Result<Option<Formula>, CliError> {
    let a = analyze_gaf(s);
    if let Some(v) = &a.violation {
        report.set("gaf", false);
        report.set("witness", gaf_witness(v));
        return Ok(None);
    }
    if a.has_functions {
        report.set("gaf", false);
        report.set("witness", json!({ "function": true }));
        return Ok(None);
    }
    let trace = gaf_unnest(s, &a, opts.size_guard)?;
    report.set("gaf", true);
    if opts.trace {
        report.set("unnest_stages", trace.stages.iter().map(stage_json).collect::<Vec<_>>());
    }
    Ok(Some(trace.result))
}

pub fn to_unnested(input: &str, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    let (_, s) = standard_form(input)?;
    match unnest(&s, opts, report)? {
        Some(f) => {
            report.set("result", f.to_string());
            Ok(Exit::Success)
        }
        None => Ok(Exit::Negative),
    }
}

fn skolem_json(f: &Formula, report: &mut Report) -> fragments_core::transform::SkolemSentence {
    let sk = skolemize_sentence(f);
    report.set("universals", strings(&sk.universals));
    report.set("matrix", sk.matrix.to_string());
    let table: Vec<Value> = sk
        .table
        .iter()
        .map(|t| json!({ "name": t.name, "arity": t.arity, "args": t.args, "replaces": t.replaced }))
        .collect();
    report.set("skolem_symbols", table);
    sk
}

pub fn skolemize(input: &str, report: &mut Report) -> Result<Exit, CliError> {
    let f = read_sentence(input)?;
    normalize_standard_form(&f)?;
    let sk = skolem_json(&f, report);
    report.set("result", sk.to_formula().to_string());
    Ok(Exit::Success)
}

pub fn check_shape(input: &str, report: &mut Report) -> Result<Exit, CliError> {
    let f = read_sentence(input)?;
    normalize_standard_form(&f)?;
    let sk = skolem_json(&f, report);
    let shape = check_skolem_shape(&sk.matrix);
    report.set("shape_ok", shape.ok());
    if let Some((name, arity)) = &shape.wide_function {
        report.set("wide_function", json!({ "name": name, "arity": arity }));
    }
    if let Some(atom) = &shape.multi_variable_atom {
        report.set("multi_variable_atom", atom.to_string());
    }
    if let Some(t) = &shape.deep_term {
        report.set("deep_term", t.to_string());
    }
    Ok(if shape.ok() { Exit::Success } else { Exit::Negative })
}

pub fn to_monadic(input: &str, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    let (f, s) = standard_form(input)?;
    let flat = if has_nested_universal(&s.to_formula()) {
        match unnest(&s, opts, report)? {
            Some(g) => g,
            None => return Ok(Exit::Negative),
        }
    } else {
        f
    };
    let sk = skolemize_sentence(&flat);
    let m = match monadize(&sk) {
        Ok(m) => m,
        Err(e @ (MonadizeError::PreconditionViolated(_) | MonadizeError::ShapeViolation(_) | MonadizeError::EqualityNotSupported)) => {
            report.set("monadizable", false);
            report.set("reason", e.to_string());
            return Ok(Exit::Negative);
        }
        Err(e) => return Err(e.into()),
    };
    let phi_sk = m.phi_sk();
    report.set("monadizable", true);
    report.set("phi_sk", phi_sk.to_string());
    let closure: Vec<Value> = m
        .closure
        .atoms
        .iter()
        .zip(&m.closure.predicates)
        .map(|(atom, p)| json!({ "predicate": p, "atom": atom.to_string() }))
        .collect();
    report.set("closure", closure);
    report.set("d", m.closure.d.clone());
    report.set("d_injected", m.d_injected);
    report.set("x_star", m.x_star.clone());
    report.set(
        "sizes",
        json!({
            "atoms": phi_sk.distinct_atoms().len(),
            "closure": m.closure.len(),
            "psi": m.psi.len(),
            "psi_prime": m.psi_prime.len(),
            "phi_sk_length": phi_sk.len(),
            "phi_prime_length": m.phi_prime.len(),
        }),
    );
    write_artifact(report, input, ".mon.fol", &(m.phi_prime.to_string() + "\n"))?;
    if let Some(depth) = opts.depth {
        let hu = herbrand_universe(&m.herbrand_functions(), depth)?;
        match herbrand_model(&m.phi_prime, &hu)? {
            Some(b) => {
                let back = transfer_model_backward(&b, &hu, &m)?;
                report.set("herbrand_model", true);
                report.set("dropped_instances", back.dropped_instances);
                write_model(report, input, ".model.json", &back.structure)?;
            }
            None => report.set("herbrand_model", false),
        }
    }
    Ok(Exit::Success)
}

fn report_verdict(v: Verdict, f: &Formula, input: &str, report: &mut Report) -> Result<Exit, CliError> {
    match v {
        Verdict::Sat(a) => {
            if holds(&a, f)? {
                report.set("verdict", "Sat");
                report.set("model_size", a.size);
                write_model(report, input, ".model.json", &a)?;
                Ok(Exit::Success)
            } else {
                Err(CliError::Internal("returned structure is not a model".into()))
            }
        }
        Verdict::Unsat => {
            report.set("verdict", "Unsat");
            Ok(Exit::Negative)
        }
        Verdict::UnsatAtBound(n) => {
            report.set("verdict", "UnsatAtBound");
            report.set("bound", n);
            Ok(Exit::Negative)
        }
        Verdict::Unknown(n) => Err(CliError::Limit(format!("search budget exhausted at size {n}"))),
    }
}

pub fn decide(input: &str, method: DecideMethod, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    let (f, s) = standard_form(input)?;
    let function_free = !Signature::of(&f).has_nonconstant_functions();
    let bsr = function_free && s.is_exists_forall();
    let route = match method {
        DecideMethod::Bsr if !bsr => return Err(CliError::Input("not a function-free exists-forall sentence".into())),
        DecideMethod::Bsr => "bsr",
        DecideMethod::Bounded => "bounded",
        DecideMethod::Auto if bsr => "bsr",
        DecideMethod::Auto if function_free && analyze_gbsr(&s).is_ok_and(|a| a.is_gbsr()) => "gbsr",
        DecideMethod::Auto => "bounded",
    };
    report.set("method", route);
    let verdict = match route {
        "bsr" => decide_bsr(&s)?,
        "gbsr" => {
            let a = analyze_gbsr(&s)?;
            let t = gbsr_to_bsr(&s, &a, opts.size_guard)?;
            decide_bsr(&t.result)?
        }
        _ => decide_bounded(&f, opts.max_size, DEFAULT_BUDGET, None)?,
    };
    report_verdict(verdict, &f, input, report)
}

pub fn check_equiv(first: &str, second: &str, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    let (f1, _) = standard_form(first)?;
    let (f2, _) = standard_form(second)?;
    report.set("max_size", opts.max_size);
    match check_equivalence_with(&f1, &f2, opts.max_size, EquivalenceMethod::Auto, DEFAULT_BUDGET)? {
        Equivalence::Pass => {
            report.set("verdict", "Equivalent");
            Ok(Exit::Success)
        }
        Equivalence::Counterexample(a) => {
            report.set("verdict", "Counterexample");
            report.set("first_holds", holds(&a, &f1)?);
            report.set("second_holds", holds(&a, &f2)?);
            report.set("counterexample", structure::to_json(&a));
            Ok(Exit::Negative)
        }
    }
}

pub fn shrink(model: &str, sentence: &str, report: &mut Report) -> Result<Exit, CliError> {
    let (f, s) = standard_form(sentence)?;
    let text = std::fs::read_to_string(model).map_err(|e| CliError::Input(format!("{model}: {e}")))?;
    let a = structure::from_json(&text, &Signature::of(&f)).map_err(|e| CliError::Input(format!("{model}: {e}")))?;
    let r = match shrink_model(&a, &s) {
        Ok(r) => r,
        Err(e @ (ShrinkError::NotGbsr | ShrinkError::NotAModel | ShrinkError::NotRelational(_))) => {
            report.set("shrunk", false);
            report.set("reason", e.to_string());
            return Ok(Exit::Negative);
        }
        Err(e @ ShrinkError::GuardrailExceeded(_)) => return Err(CliError::Limit(e.to_string())),
        Err(e) => return Err(CliError::Internal(e.to_string())),
    };
    report.set("shrunk", true);
    report.set("input_size", a.size);
    report.set("output_size", r.structure.size);
    report.set("elements", r.elements.clone());
    report.set("degree", r.degree);
    report.set("atom_count", r.atom_count);
    report.set("existential_count", r.existential_count);
    report.set("lemma_bound", big(r.lemma_bound));
    report.set("theorem_bound", big(r.theorem_bound));
    report.set("structure", structure::to_json(&r.structure));
    write_model(report, sentence, ".shrunk.model.json", &r.structure)?;
    Ok(Exit::Success)
}

pub fn interpolate(phi: &str, psi: &str, opts: &Options, report: &mut Report) -> Result<Exit, CliError> {
    let (f1, s1) = standard_form(phi)?;
    let (f2, s2) = standard_form(psi)?;
    let limits = ProverLimits { max_clauses: opts.clause_cap, ..ProverLimits::default() };
    let bsr = s1.is_exists_forall() && s2.is_exists_forall();
    report.set("route", if bsr { "bsr" } else { "gbsr" });
    let run = if bsr { interpolate_bsr(&f1, &f2, limits) } else { interpolate_gbsr(&f1, &f2, limits) };
    let out = match run {
        Ok(out) => out,
        Err(
            e @ (InterpolationError::NotEntailed
            | InterpolationError::NotBsr
            | InterpolationError::NotGbsr
            | InterpolationError::NotRelational(_)
            | InterpolationError::EqualityNotSupported),
        ) => {
            report.set("interpolant", Value::Null);
            report.set("reason", e.to_string());
            return Ok(Exit::Negative);
        }
        Err(e @ InterpolationError::LimitHit(_)) => return Err(CliError::Limit(e.to_string())),
        Err(InterpolationError::NormalForm(e)) => return Err(e.into()),
        Err(e) => return Err(CliError::Internal(e.to_string())),
    };
    report.set("interpolant", out.chi.to_string());
    report.set(
        "degenerate",
        match out.degenerate {
            None => Value::Null,
            Some(Degenerate::Bottom) => "bottom".into(),
            Some(Degenerate::Top) => "top".into(),
        },
    );
    let p = &out.partition;
    report.set(
        "partition",
        json!({ "pi1": strings(&p.pi1), "pi2": strings(&p.pi2), "pi3": strings(&p.pi3), "pi4": strings(&p.pi4) }),
    );
    report.set(
        "clauses",
        json!({ "n": out.n_clauses, "m": out.m_clauses, "n_saturated": out.n_saturated, "m_saturated": out.m_saturated }),
    );
    report.set("used_clauses", strings(&out.used));
    report.set(
        "verification",
        json!({ "phi_entails_chi": out.left_verified, "chi_entails_psi": out.right_verified, "polarity": out.polarity_ok }),
    );
    Ok(Exit::Success)
}
