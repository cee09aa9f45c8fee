//! Seeded random sentences and structures shared by the integration suites.

#![allow(dead_code)]

use fragments_core::model::{FiniteStructure, Signature};
use fragments_core::{Formula, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How atom arguments are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bias {
    /// Any quantified variable.
    None,
    /// Each atom picks a level `i` and draws from `ȳ_1..ȳ_i ∪ x̄_{i+1}..x̄_n`.
    Gbsr,
    /// At most one universal variable per atom.
    Gaf,
}

#[derive(Clone, Debug)]
pub struct Shape {
    pub max_blocks: usize,
    pub max_block_vars: usize,
    pub max_atoms: usize,
    pub predicates: Vec<(String, usize)>,
    pub bias: Bias,
    /// `∃*∀*` prefix instead of a general one.
    pub exists_forall: bool,
    pub constants: Vec<String>,
}

impl Shape {
    pub fn new(max_blocks: usize, max_atoms: usize, predicates: &[(&str, usize)], bias: Bias) -> Shape {
        Shape {
            max_blocks,
            max_block_vars: 2,
            max_atoms,
            predicates: predicates.iter().map(|(p, k)| (p.to_string(), *k)).collect(),
            bias,
            exists_forall: false,
            constants: Vec::new(),
        }
    }
}

/// Predicates `p0, p1, ...` with random arities in `1..=max_arity`.
pub fn predicates(rng: &mut ChaCha8Rng, count: usize, max_arity: usize) -> Vec<(String, usize)> {
    (0..count).map(|i| (format!("p{i}"), rng.gen_range(1..=max_arity))).collect()
}

pub struct Prefix {
    pub universal: Vec<Vec<String>>,
    pub existential: Vec<Vec<String>>,
}

fn random_prefix(rng: &mut ChaCha8Rng, shape: &Shape) -> Prefix {
    let n = rng.gen_range(1..=shape.max_blocks);
    let mut universal = Vec::new();
    let mut existential = Vec::new();
    for i in 1..=n {
        let lo_x = usize::from(i > 1);
        let lo_y = usize::from(i < n);
        let xs = rng.gen_range(lo_x..=shape.max_block_vars);
        let ys = rng.gen_range(lo_y..=shape.max_block_vars);
        universal.push((0..xs).map(|j| format!("X{i}{j}")).collect());
        existential.push((0..ys).map(|j| format!("Y{i}{j}")).collect());
    }
    Prefix { universal, existential }
}

fn exists_forall_prefix(rng: &mut ChaCha8Rng, shape: &Shape) -> Prefix {
    let ys = rng.gen_range(0..=shape.max_block_vars);
    let xs = rng.gen_range(0..=shape.max_block_vars);
    Prefix {
        universal: vec![Vec::new(), (0..xs).map(|j| format!("X{j}")).collect()],
        existential: vec![(0..ys).map(|j| format!("Y{j}")).collect(), Vec::new()],
    }
}

fn pick_args(rng: &mut ChaCha8Rng, pool: &[String], constants: &[String], arity: usize) -> Vec<Term> {
    (0..arity)
        .map(|_| {
            if !constants.is_empty() && (pool.is_empty() || rng.gen_bool(0.2)) {
                Term::Const(constants.choose(rng).unwrap().clone())
            } else if pool.is_empty() {
                Term::Const("c0".into())
            } else {
                Term::Var(pool.choose(rng).unwrap().clone())
            }
        })
        .collect()
}

fn random_atom(rng: &mut ChaCha8Rng, shape: &Shape, prefix: &Prefix) -> Formula {
    let (p, arity) = shape.predicates.choose(rng).unwrap().clone();
    let n = prefix.universal.len();
    let all_x: Vec<String> = prefix.universal.iter().flatten().cloned().collect();
    let all_y: Vec<String> = prefix.existential.iter().flatten().cloned().collect();
    let pool: Vec<String> = match shape.bias {
        Bias::None => all_x.iter().chain(&all_y).cloned().collect(),
        Bias::Gbsr => {
            let i = rng.gen_range(0..=n);
            let ys = prefix.existential[..i].iter().flatten();
            let xs = prefix.universal[i..].iter().flatten();
            ys.chain(xs).cloned().collect()
        }
        Bias::Gaf => {
            let mut pool = all_y.clone();
            if let Some(x) = all_x.choose(rng) {
                if rng.gen_bool(0.7) {
                    pool.push(x.clone());
                }
            }
            pool
        }
    };
    let args = pick_args(rng, &pool, &shape.constants, arity);
    Formula::Atom(p, args)
}

fn random_tree(rng: &mut ChaCha8Rng, mut lits: Vec<Formula>) -> Formula {
    if lits.len() == 1 {
        return lits.pop().unwrap();
    }
    let cut = rng.gen_range(1..lits.len());
    let right = lits.split_off(cut);
    let (a, b) = (random_tree(rng, lits), random_tree(rng, right));
    if rng.gen_bool(0.5) {
        Formula::and(vec![a, b])
    } else {
        Formula::or(vec![a, b])
    }
}

/// A closed prenex sentence with an NNF matrix over `1..=max_atoms` literal
/// occurrences.
pub fn random_sentence(rng: &mut ChaCha8Rng, shape: &Shape) -> Formula {
    let prefix = if shape.exists_forall { exists_forall_prefix(rng, shape) } else { random_prefix(rng, shape) };
    let count = rng.gen_range(1..=shape.max_atoms);
    let lits: Vec<Formula> = (0..count)
        .map(|_| {
            let a = random_atom(rng, shape, &prefix);
            if rng.gen_bool(0.4) {
                Formula::negate(a)
            } else {
                a
            }
        })
        .collect();
    let mut f = random_tree(rng, lits);
    for (xs, ys) in prefix.universal.iter().zip(&prefix.existential).rev() {
        f = Formula::exists(ys.clone(), f);
        f = Formula::forall(xs.clone(), f);
    }
    f
}

pub fn random_structure(rng: &mut ChaCha8Rng, sig: &Signature, size: usize, density: f64) -> FiniteStructure {
    let mut a = FiniteStructure::new(sig.clone(), size);
    for (p, k) in &sig.predicates {
        for i in 0..size.pow(*k as u32) {
            let tuple = a.tuple_at(i, *k);
            a.set(p, &tuple, rng.gen_bool(density));
        }
    }
    for (f, k) in &sig.functions {
        for i in 0..size.pow(*k as u32) {
            let tuple = a.tuple_at(i, *k);
            a.set_function(f, &tuple, rng.gen_range(0..size));
        }
    }
    a
}

/// Random term over unary `f`, `h`, constants `a`, `b` and the single
/// variable `var`.
pub fn random_term(rng: &mut ChaCha8Rng, var: &str, depth: usize) -> Term {
    if depth == 0 || rng.gen_bool(0.4) {
        return match rng.gen_range(0..4) {
            0 => Term::Const("a".into()),
            1 => Term::Const("b".into()),
            _ => Term::Var(var.into()),
        };
    }
    let f = if rng.gen_bool(0.5) { "f" } else { "h" };
    Term::App(f.into(), vec![random_term(rng, var, depth - 1)])
}

/// `q(t1, t2, t3)` whose only variable (if any) is `var`.
pub fn single_variable_atom(rng: &mut ChaCha8Rng, var: &str, depth: usize) -> Formula {
    Formula::Atom("q".into(), (0..3).map(|_| random_term(rng, var, depth)).collect())
}

/// Every ground term over `f`, `h`, `a`, `b` up to the given depth.
pub fn ground_terms(depth: usize) -> Vec<Term> {
    let mut all = vec![Term::Const("a".into()), Term::Const("b".into())];
    let mut layer = all.clone();
    for _ in 0..depth {
        layer = layer.iter().flat_map(|t| ["f", "h"].map(|f| Term::App(f.into(), vec![t.clone()]))).collect();
        all.extend(layer.iter().cloned());
    }
    all
}
