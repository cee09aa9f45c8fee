//! Small models of relational GBSR sentences.
//!
//! A model is read as a strategy for the existential player. The strategy
//! is made uniform with respect to fingerprints, the nested sets of atoms
//! an element tuple can still reach, and the elements it selects induce a
//! substructure that is again a model and whose size is bounded in terms of
//! the sentence alone.
//!
//! Tuples over `𝔘^m` are coded as integers with the first component most
//! significant. A sequence `(b̄_1 … b̄_k)` is a slice of such codes.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::classify::{analyze_gbsr, degree, gbsr_axiomatic_witness, ClassifyError};
use crate::model::{holds, FiniteStructure, ModelError};
use crate::normal::StandardForm;
use crate::syntax::{Formula, Term};

/// Above these sizes the fingerprint tables grow too fast to be useful.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShrinkLimits {
    pub max_blocks: usize,
    pub max_universe: usize,
    pub max_atoms: usize,
}

impl Default for ShrinkLimits {
    fn default() -> Self {
        ShrinkLimits { max_blocks: 3, max_universe: 6, max_atoms: 8 }
    }
}

/// Hard cap on the number of coded tuple sequences of one length.
const MAX_SEQUENCES: usize = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ShrinkError {
    #[error("symbol `{0}` is not allowed in a relational sentence")]
    NotRelational(String),
    #[error("structure is not a model of the sentence")]
    NotAModel,
    #[error("sentence is not in GBSR")]
    NotGbsr,
    #[error("guardrail exceeded: {0}")]
    GuardrailExceeded(String),
    #[error("strategy does not fit the sentence and structure")]
    StrategyMismatch,
    #[error("no representative for a fingerprint class at block {0}")]
    RepresentativeMissing(usize),
    #[error("uniformization check failed: {0}")]
    Uniformization(String),
    #[error("shrunken structure check failed: {0}")]
    Verification(String),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `2↑↑k m`, saturating at `u128::MAX`.
pub fn tetration(k: usize, m: u128) -> u128 {
    let mut v = m;
    for _ in 0..k {
        v = if v >= 128 { u128::MAX } else { 1u128 << v };
    }
    v
}

/// `n·|ȳ|·(2↑↑(κ+1) |At|)^{n²}`, saturating.
pub fn lemma_bound(n: usize, existentials: usize, kappa: usize, atoms: usize) -> u128 {
    let base = tetration(kappa + 1, atoms as u128);
    ((n * existentials) as u128).saturating_mul(saturating_pow(base, n * n))
}

/// `len(φ)²·(2↑↑(∂φ+1) len(φ))^{n²}`, saturating.
pub fn theorem_bound(len: usize, n: usize, kappa: usize) -> u128 {
    let base = tetration(kappa + 1, len as u128);
    ((len as u128).saturating_mul(len as u128)).saturating_mul(saturating_pow(base, n * n))
}

fn saturating_pow(base: u128, exp: usize) -> u128 {
    base.saturating_pow(u32::try_from(exp).unwrap_or(u32::MAX))
}

/// Choices of the existential player: `tables[k-1][i]` is the `ȳ_k` tuple
/// chosen after the `i`-th sequence `(b̄_1 … b̄_k)` in mixed-radix order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strategy {
    pub size: usize,
    pub x_arity: Vec<usize>,
    pub y_arity: Vec<usize>,
    pub tables: Vec<Vec<Vec<usize>>>,
}

impl Strategy {
    pub fn n(&self) -> usize {
        self.tables.len()
    }

    /// Number of `x̄_k` tuples, `k` 1-based.
    pub fn radix(&self, k: usize) -> usize {
        self.size.pow(self.x_arity[k - 1] as u32)
    }

    pub fn index(&self, seq: &[usize]) -> usize {
        seq.iter().enumerate().fold(0, |acc, (i, &c)| acc * self.radix(i + 1) + c)
    }

    /// `σ_k(b̄_1 … b̄_k)` where `k = seq.len()`.
    pub fn choice(&self, seq: &[usize]) -> &[usize] {
        &self.tables[seq.len() - 1][self.index(seq)]
    }

    /// Every element some `σ_k` selects.
    pub fn elements(&self) -> BTreeSet<usize> {
        self.tables.iter().flatten().flatten().copied().collect()
    }

    /// Elements selected by `σ_k`, `k` 1-based.
    pub fn block_elements(&self, k: usize) -> BTreeSet<usize> {
        self.tables[k - 1].iter().flatten().copied().collect()
    }
}

enum AtomEval {
    Pred(usize, Vec<usize>),
    Eq(usize, usize),
}

/// Compiled sentence over a structure; variables live in slots in prefix
/// order.
struct Game<'a> {
    a: &'a FiniteStructure,
    n: usize,
    xs: Vec<Vec<usize>>,
    ys: Vec<Vec<usize>>,
    slots: usize,
    atoms: Vec<Formula>,
    evals: Vec<AtomEval>,
    index: BTreeMap<Formula, usize>,
    matrix: Formula,
    rx: Vec<usize>,
    ry: Vec<usize>,
}

fn checked_pow(base: usize, exp: usize) -> Result<usize, ShrinkError> {
    u32::try_from(exp)
        .ok()
        .and_then(|e| base.checked_pow(e))
        .filter(|&v| v <= MAX_SEQUENCES)
        .ok_or_else(|| ShrinkError::GuardrailExceeded(format!("{base}^{exp} tuples")))
}

fn check_relational(s: &StandardForm) -> Result<(), ShrinkError> {
    match s.matrix.functions().into_iter().next() {
        Some((f, _)) => Err(ShrinkError::NotRelational(f)),
        None => Ok(()),
    }
}

impl<'a> Game<'a> {
    fn new(a: &'a FiniteStructure, s: &StandardForm) -> Result<Game<'a>, ShrinkError> {
        check_relational(s)?;
        let mut slot_of = BTreeMap::new();
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for b in &s.blocks {
            let mut take = |vs: &[String]| {
                vs.iter()
                    .map(|v| {
                        let next = slot_of.len();
                        *slot_of.entry(v.clone()).or_insert(next)
                    })
                    .collect::<Vec<usize>>()
            };
            xs.push(take(&b.universal));
            ys.push(take(&b.existential));
        }
        let slot = |t: &Term| match t {
            Term::Var(v) => slot_of.get(v).copied().ok_or_else(|| ShrinkError::Model(ModelError::FreeVariable(v.clone()))),
            Term::Const(c) | Term::App(c, _) => Err(ShrinkError::NotRelational(c.clone())),
        };
        let atoms = s.matrix.distinct_atoms();
        if atoms.len() > 64 {
            return Err(ShrinkError::GuardrailExceeded(format!("{} atoms", atoms.len())));
        }
        let mut evals = Vec::with_capacity(atoms.len());
        for atom in &atoms {
            evals.push(match atom {
                Formula::Atom(p, args) => {
                    let i = a
                        .signature
                        .predicate_index(p)
                        .filter(|&i| a.signature.predicates[i].1 == args.len())
                        .ok_or_else(|| ShrinkError::Model(ModelError::MissingInterpretation(p.clone())))?;
                    AtomEval::Pred(i, args.iter().map(slot).collect::<Result<_, _>>()?)
                }
                Formula::Eq(l, r) => AtomEval::Eq(slot(l)?, slot(r)?),
                other => unreachable!("distinct_atoms returned {other:?}"),
            });
        }
        let rx = xs.iter().map(|x| checked_pow(a.size, x.len())).collect::<Result<Vec<_>, _>>()?;
        let ry = ys.iter().map(|y| checked_pow(a.size, y.len())).collect::<Result<Vec<_>, _>>()?;
        let index = atoms.iter().cloned().enumerate().map(|(i, f)| (f, i)).collect();
        Ok(Game { a, n: s.n(), xs, ys, slots: slot_of.len(), atoms, evals, index, matrix: s.matrix.clone(), rx, ry })
    }

    fn fits(&self, sigma: &Strategy) -> bool {
        sigma.size == self.a.size
            && sigma.n() == self.n
            && (0..self.n).all(|i| sigma.x_arity[i] == self.xs[i].len() && sigma.y_arity[i] == self.ys[i].len())
            && (1..=self.n).all(|k| {
                sigma.tables[k - 1].len() == self.sequences(k)
                    && sigma.tables[k - 1].iter().all(|t| t.len() == self.ys[k - 1].len() && t.iter().all(|&e| e < self.a.size))
            })
    }

    fn sequences(&self, k: usize) -> usize {
        self.rx[..k].iter().product()
    }

    fn decode(&self, mut code: usize, arity: usize) -> Vec<usize> {
        let mut out = vec![0; arity];
        for d in out.iter_mut().rev() {
            *d = code % self.a.size;
            code /= self.a.size;
        }
        out
    }

    fn write(&self, env: &mut [usize], slots: &[usize], code: usize) {
        for (s, v) in slots.iter().zip(self.decode(code, slots.len())) {
            env[*s] = v;
        }
    }

    fn atom(&self, i: usize, env: &[usize]) -> bool {
        match &self.evals[i] {
            AtomEval::Pred(p, args) => {
                let idx = args.iter().fold(0, |acc, &s| acc * self.a.size + env[s]);
                self.a.relations[*p][idx]
            }
            AtomEval::Eq(l, r) => env[*l] == env[*r],
        }
    }

    fn mask(&self, env: &[usize], within: u64) -> u64 {
        (0..self.atoms.len()).filter(|&i| within >> i & 1 == 1 && self.atom(i, env)).fold(0, |m, i| m | 1 << i)
    }

    fn all_atoms(&self) -> u64 {
        if self.atoms.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.atoms.len()) - 1
        }
    }

    /// The matrix as a Boolean formula over the atoms.
    fn psi_bool(&self, mask: u64) -> bool {
        fn go(g: &Game<'_>, f: &Formula, mask: u64) -> bool {
            match f {
                Formula::True => true,
                Formula::False => false,
                Formula::Not(b) => !go(g, b, mask),
                Formula::And(cs) => cs.iter().all(|c| go(g, c, mask)),
                Formula::Or(cs) => cs.iter().any(|c| go(g, c, mask)),
                Formula::Frozen(_, b) => go(g, b, mask),
                atom => mask >> g.index[atom] & 1 == 1,
            }
        }
        go(self, &self.matrix, mask)
    }

    /// Set `x̄_k` and `ȳ_k` for every block in `seq`.
    fn play(&self, sigma: &Strategy, seq: &[usize], env: &mut [usize]) {
        for k in 1..=seq.len() {
            self.write(env, &self.xs[k - 1], seq[k - 1]);
            for (s, v) in self.ys[k - 1].iter().zip(sigma.choice(&seq[..k])) {
                env[*s] = *v;
            }
        }
    }

    fn for_each_sequence(&self, k: usize, mut visit: impl FnMut(&[usize])) {
        let mut seq = vec![0; k];
        loop {
            visit(&seq);
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                seq[i] += 1;
                if seq[i] < self.rx[i] {
                    break;
                }
                seq[i] = 0;
            }
        }
    }

    fn search(&self, k: usize, seq: &mut Vec<usize>, env: &mut [usize], tables: &mut [Vec<Vec<usize>>]) -> bool {
        if k > self.n {
            return self.psi_bool(self.mask(env, self.all_atoms()));
        }
        for b in 0..self.rx[k - 1] {
            self.write(env, &self.xs[k - 1], b);
            seq.push(b);
            let idx = seq.iter().enumerate().fold(0, |acc, (i, &c)| acc * self.rx[i] + c);
            let mut found = false;
            for c in 0..self.ry[k - 1] {
                self.write(env, &self.ys[k - 1], c);
                if self.search(k + 1, seq, env, tables) {
                    tables[k - 1][idx] = self.decode(c, self.ys[k - 1].len());
                    found = true;
                    break;
                }
            }
            seq.pop();
            if !found {
                return false;
            }
        }
        true
    }
}

/// Backtracking search through the quantifier prefix. Returns a satisfying
/// strategy exactly when `a ⊨ s`; candidates are tried in increasing order.
pub fn find_strategy(a: &FiniteStructure, s: &StandardForm) -> Result<Option<Strategy>, ShrinkError> {
    let g = Game::new(a, s)?;
    let mut tables: Vec<Vec<Vec<usize>>> =
        (1..=g.n).map(|k| vec![vec![0; g.ys[k - 1].len()]; g.sequences(k)]).collect();
    let mut env = vec![0; g.slots.max(1)];
    if !g.search(1, &mut Vec::new(), &mut env, &mut tables) {
        return Ok(None);
    }
    Ok(Some(Strategy {
        size: a.size,
        x_arity: g.xs.iter().map(Vec::len).collect(),
        y_arity: g.ys.iter().map(Vec::len).collect(),
        tables,
    }))
}

/// All outcomes of a strategy. Bit `i` of an outcome stands for `atoms[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OutcomeSet {
    pub atoms: Vec<Formula>,
    pub outcomes: BTreeSet<u64>,
    /// Every outcome, read as a valuation, satisfies the matrix.
    pub all_satisfy: bool,
}

impl OutcomeSet {
    pub fn atom_set(&self, outcome: u64) -> BTreeSet<Formula> {
        self.atoms.iter().enumerate().filter(|(i, _)| outcome >> i & 1 == 1).map(|(_, a)| a.clone()).collect()
    }

    /// `S ∩ class`.
    pub fn slice(&self, outcome: u64, class: &BTreeSet<Formula>) -> BTreeSet<Formula> {
        self.atom_set(outcome).intersection(class).cloned().collect()
    }

    pub fn is_subset_of(&self, other: &OutcomeSet) -> bool {
        self.atoms == other.atoms && self.outcomes.is_subset(&other.outcomes)
    }
}

pub fn outcomes(a: &FiniteStructure, s: &StandardForm, sigma: &Strategy) -> Result<OutcomeSet, ShrinkError> {
    let g = Game::new(a, s)?;
    if !g.fits(sigma) {
        return Err(ShrinkError::StrategyMismatch);
    }
    Ok(outcomes_in(&g, sigma))
}

fn outcomes_in(g: &Game<'_>, sigma: &Strategy) -> OutcomeSet {
    let mut env = vec![0; g.slots.max(1)];
    let mut set = BTreeSet::new();
    g.for_each_sequence(g.n, |seq| {
        g.play(sigma, seq, &mut env);
        set.insert(g.mask(&env, g.all_atoms()));
    });
    let all_satisfy = set.iter().all(|&m| g.psi_bool(m));
    OutcomeSet { atoms: g.atoms.clone(), outcomes: set, all_satisfy }
}

/// Value of a fingerprint function. `Atoms` holds a subset of the atom list
/// as a bit mask; `Set` is a set of fingerprints one level deeper.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Fingerprint {
    Atoms(u64),
    Set(BTreeSet<Fingerprint>),
}

impl Fingerprint {
    pub fn cardinality(&self) -> usize {
        match self {
            Fingerprint::Atoms(m) => m.count_ones() as usize,
            Fingerprint::Set(s) => s.len(),
        }
    }
}

/// `(ℓ, k, ā_1 … ā_ℓ flattened, codes of b̄_{ℓ+1} … b̄_k)`.
type MuKey = (usize, usize, Vec<usize>, Vec<usize>);

/// Memoized fingerprint values together with their images under a
/// strategy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FingerprintTable {
    pub atoms: Vec<Formula>,
    /// Atom mask of each partition class `At_0 … At_n`.
    pub classes: Vec<u64>,
    pub values: BTreeMap<MuKey, Fingerprint>,
    /// `im_σ(μ_{ℓ,k})` keyed by `(ℓ, k)`.
    pub images: BTreeMap<(usize, usize), BTreeSet<Fingerprint>>,
    /// Pairs `(ℓ, k)`, `k < n`, with `vars(At_ℓ) ∩ x̄_{k+1} = ∅`.
    pub singleton_pairs: BTreeSet<(usize, usize)>,
}

impl FingerprintTable {
    pub fn value(&self, l: usize, k: usize, a: &[usize], b: &[usize]) -> Option<&Fingerprint> {
        self.values.get(&(l, k, a.to_vec(), b.to_vec()))
    }

    pub fn image(&self, l: usize, k: usize) -> Option<&BTreeSet<Fingerprint>> {
        self.images.get(&(l, k))
    }

    pub fn atom_set(&self, mask: u64) -> BTreeSet<Formula> {
        self.atoms.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect()
    }

    /// Image sizes grow at most exponentially per level, and levels that
    /// skip a block collapse to singletons.
    pub fn check_claims(&self) -> Result<(), String> {
        for (&(l, k), im) in &self.images {
            if let Some(next) = self.images.get(&(l, k + 1)) {
                let cap = if next.len() >= 128 { u128::MAX } else { 1u128 << next.len() };
                if im.len() as u128 > cap {
                    return Err(format!("|im(mu_{l},{k})| = {} exceeds 2^{}", im.len(), next.len()));
                }
            }
        }
        for ((l, k, _, _), v) in &self.values {
            if self.singleton_pairs.contains(&(*l, *k)) && v.cardinality() != 1 {
                return Err(format!("mu_{l},{k} has a value of size {}", v.cardinality()));
            }
        }
        Ok(())
    }
}

struct Mu<'g, 'a> {
    game: &'g Game<'a>,
    classes: Vec<u64>,
    memo: BTreeMap<MuKey, Fingerprint>,
}

impl Mu<'_, '_> {
    fn get(&mut self, l: usize, k: usize, a: &[usize], b: &[usize]) -> Fingerprint {
        let key = (l, k, a.to_vec(), b.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let g = self.game;
        let v = if k == g.n {
            let mut env = vec![0; g.slots.max(1)];
            let mut rest = a.iter();
            for ys in &g.ys[..l] {
                for s in ys {
                    env[*s] = *rest.next().expect("one value per existential");
                }
            }
            for (i, &code) in b.iter().enumerate() {
                g.write(&mut env, &g.xs[l + i], code);
            }
            Fingerprint::Atoms(g.mask(&env, self.classes[l]))
        } else {
            let mut longer = b.to_vec();
            longer.push(0);
            let mut set = BTreeSet::new();
            for c in 0..g.rx[k] {
                *longer.last_mut().expect("nonempty") = c;
                set.insert(self.get(l, k + 1, a, &longer));
            }
            Fingerprint::Set(set)
        };
        self.memo.insert(key, v.clone());
        v
    }

    /// `μ_{ℓ,k}(σ_1(b̄_1), …, σ_ℓ(b̄_1 … b̄_ℓ), b̄_{ℓ+1}, …, b̄_k)`, `k = seq.len()`.
    fn under(&mut self, sigma: &Strategy, l: usize, seq: &[usize]) -> Fingerprint {
        let a: Vec<usize> = (1..=l).flat_map(|i| sigma.choice(&seq[..i]).to_vec()).collect();
        self.get(l, seq.len(), &a, &seq[l..])
    }

    /// Fingerprints the uniformity condition compares for `seq`, column by
    /// column.
    fn signature(&mut self, sigma: &Strategy, seq: &[usize]) -> Vec<Fingerprint> {
        let mut out = Vec::new();
        for kp in 1..=seq.len() {
            for l in 0..kp {
                out.push(self.under(sigma, l, &seq[..kp]));
            }
        }
        out
    }

    fn images(&mut self, sigma: &Strategy) -> BTreeMap<(usize, usize), BTreeSet<Fingerprint>> {
        let g = self.game;
        let mut out = BTreeMap::new();
        for k in 1..=g.n {
            let mut seqs = Vec::new();
            g.for_each_sequence(k, |seq| seqs.push(seq.to_vec()));
            for l in 0..k {
                let im: BTreeSet<Fingerprint> = seqs.iter().map(|seq| self.under(sigma, l, seq)).collect();
                out.insert((l, k), im);
            }
        }
        out
    }
}

fn prepare<'g, 'a>(g: &'g Game<'a>, s: &StandardForm, partition: &[BTreeSet<Formula>]) -> Result<Mu<'g, 'a>, ShrinkError> {
    if !gbsr_axiomatic_witness(s, partition)? {
        return Err(ClassifyError::InvalidPartition("axiomatic conditions fail".into()).into());
    }
    let classes = partition
        .iter()
        .map(|c| c.iter().filter_map(|atom| g.index.get(atom)).fold(0u64, |m, &i| m | 1 << i))
        .collect();
    Ok(Mu { game: g, classes, memo: BTreeMap::new() })
}

fn table(mu: Mu<'_, '_>, s: &StandardForm, partition: &[BTreeSet<Formula>], sigma: &Strategy) -> FingerprintTable {
    let mut mu = mu;
    let images = mu.images(sigma);
    let n = s.n();
    let mut singleton_pairs = BTreeSet::new();
    for (l, class) in partition.iter().enumerate().take(n) {
        let vars: BTreeSet<String> = class.iter().flat_map(Formula::atom_vars).collect();
        for k in l + 1..n {
            if s.x(k + 1).iter().all(|x| !vars.contains(x)) {
                singleton_pairs.insert((l, k));
            }
        }
    }
    FingerprintTable { atoms: mu.game.atoms.clone(), classes: mu.classes, values: mu.memo, images, singleton_pairs }
}

/// Fingerprint values reachable under `sigma`, with their images.
pub fn fingerprints(
    a: &FiniteStructure,
    s: &StandardForm,
    partition: &[BTreeSet<Formula>],
    sigma: &Strategy,
) -> Result<FingerprintTable, ShrinkError> {
    let g = Game::new(a, s)?;
    if !g.fits(sigma) {
        return Err(ShrinkError::StrategyMismatch);
    }
    let mu = prepare(&g, s, partition)?;
    Ok(table(mu, s, partition, sigma))
}

fn uniform_in(mu: &mut Mu<'_, '_>, sigma: &Strategy) -> bool {
    let g = mu.game;
    for k in 1..=g.n {
        let mut seqs = Vec::new();
        g.for_each_sequence(k, |seq| seqs.push(seq.to_vec()));
        let rows: Vec<(Vec<Fingerprint>, &[usize])> =
            seqs.iter().map(|seq| (mu.signature(sigma, seq), sigma.choice(seq))).collect();
        for (i, (sig, choice)) in rows.iter().enumerate() {
            if rows[i + 1..].iter().any(|(other, c)| other == sig && c != choice) {
                return false;
            }
        }
    }
    true
}

/// Pairwise check of the uniformity condition on every block.
pub fn is_uniform(
    a: &FiniteStructure,
    s: &StandardForm,
    partition: &[BTreeSet<Formula>],
    sigma: &Strategy,
) -> Result<bool, ShrinkError> {
    let g = Game::new(a, s)?;
    if !g.fits(sigma) {
        return Err(ShrinkError::StrategyMismatch);
    }
    let mut mu = prepare(&g, s, partition)?;
    Ok(uniform_in(&mut mu, sigma))
}

fn uniformize_in(mu: &mut Mu<'_, '_>, sigma: &Strategy) -> Result<Strategy, ShrinkError> {
    let g = mu.game;
    // Representatives per class label; a label is the sequence of columns
    // `S_0 … S_{k-1}` for every level up to `k`.
    let mut reps: Vec<BTreeMap<Vec<Fingerprint>, Vec<usize>>> = Vec::new();
    for k in 1..=g.n {
        let parents: Vec<(Vec<Fingerprint>, Vec<usize>)> = match k {
            1 => vec![(Vec::new(), Vec::new())],
            _ => reps[k - 2].iter().map(|(l, c)| (l.clone(), c.clone())).collect(),
        };
        let mut candidates = Vec::new();
        for (label, prefix) in parents {
            for b in 0..g.rx[k - 1] {
                let mut seq = prefix.clone();
                seq.push(b);
                let mut full = label.clone();
                for l in 0..k {
                    full.push(mu.under(sigma, l, &seq));
                }
                candidates.push((seq, full));
            }
        }
        candidates.sort();
        let mut level = BTreeMap::new();
        for (seq, label) in candidates {
            level.entry(label).or_insert(seq);
        }
        reps.push(level);
    }

    let mut hat = Strategy {
        size: sigma.size,
        x_arity: sigma.x_arity.clone(),
        y_arity: sigma.y_arity.clone(),
        tables: (1..=g.n).map(|k| vec![vec![0; g.ys[k - 1].len()]; g.sequences(k)]).collect(),
    };
    for k in 1..=g.n {
        let mut seqs = Vec::new();
        g.for_each_sequence(k, |seq| seqs.push(seq.to_vec()));
        for seq in seqs {
            let label = mu.signature(&hat, &seq);
            let rep = reps[k - 1].get(&label).ok_or(ShrinkError::RepresentativeMissing(k))?;
            let choice = sigma.choice(rep).to_vec();
            let idx = hat.index(&seq);
            hat.tables[k - 1][idx] = choice;
        }
    }
    Ok(hat)
}

/// Uniform strategy built from one representative per fingerprint class,
/// the lexicographically least sequence of each. Checks uniformity and
/// that no new outcome appears.
pub fn uniformize(
    a: &FiniteStructure,
    s: &StandardForm,
    partition: &[BTreeSet<Formula>],
    sigma: &Strategy,
) -> Result<Strategy, ShrinkError> {
    let g = Game::new(a, s)?;
    if !g.fits(sigma) {
        return Err(ShrinkError::StrategyMismatch);
    }
    let mut mu = prepare(&g, s, partition)?;
    let hat = uniformize_in(&mut mu, sigma)?;
    if !uniform_in(&mut mu, &hat) {
        return Err(ShrinkError::Uniformization("result is not uniform".into()));
    }
    if !outcomes_in(&g, &hat).is_subset_of(&outcomes_in(&g, sigma)) {
        return Err(ShrinkError::Uniformization("new outcome".into()));
    }
    Ok(hat)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShrinkReport {
    pub structure: FiniteStructure,
    /// Elements of the input kept, in increasing order; element `i` of
    /// `structure` is `elements[i]`.
    pub elements: Vec<usize>,
    pub strategy: Strategy,
    pub uniform: Strategy,
    pub degree: usize,
    pub atom_count: usize,
    pub existential_count: usize,
    pub lemma_bound: u128,
    pub theorem_bound: u128,
}

pub fn shrink(a: &FiniteStructure, s: &StandardForm) -> Result<ShrinkReport, ShrinkError> {
    shrink_with(a, s, ShrinkLimits::default())
}

pub fn shrink_with(a: &FiniteStructure, s: &StandardForm, limits: ShrinkLimits) -> Result<ShrinkReport, ShrinkError> {
    check_relational(s)?;
    let atom_count = s.matrix.distinct_atoms().len();
    if s.n() > limits.max_blocks {
        return Err(ShrinkError::GuardrailExceeded(format!("{} blocks", s.n())));
    }
    if a.size > limits.max_universe {
        return Err(ShrinkError::GuardrailExceeded(format!("universe of size {}", a.size)));
    }
    if atom_count > limits.max_atoms {
        return Err(ShrinkError::GuardrailExceeded(format!("{atom_count} atoms")));
    }
    let analysis = analyze_gbsr(s)?;
    if !analysis.is_gbsr() {
        return Err(ShrinkError::NotGbsr);
    }
    let partition = analysis.partition_atoms();
    let kappa = degree(s, &partition)?;

    let g = Game::new(a, s)?;
    let mut mu = prepare(&g, s, &partition)?;
    let sigma = {
        let mut tables: Vec<Vec<Vec<usize>>> =
            (1..=g.n).map(|k| vec![vec![0; g.ys[k - 1].len()]; g.sequences(k)]).collect();
        let mut env = vec![0; g.slots.max(1)];
        if !g.search(1, &mut Vec::new(), &mut env, &mut tables) {
            return Err(ShrinkError::NotAModel);
        }
        Strategy { size: a.size, x_arity: g.xs.iter().map(Vec::len).collect(), y_arity: g.ys.iter().map(Vec::len).collect(), tables }
    };
    let hat = uniformize_in(&mut mu, &sigma)?;
    if !uniform_in(&mut mu, &hat) {
        return Err(ShrinkError::Uniformization("result is not uniform".into()));
    }
    let out_hat = outcomes_in(&g, &hat);
    if !out_hat.is_subset_of(&outcomes_in(&g, &sigma)) {
        return Err(ShrinkError::Uniformization("new outcome".into()));
    }
    if !out_hat.all_satisfy {
        return Err(ShrinkError::Uniformization("an outcome falsifies the matrix".into()));
    }
    for strategy in [&sigma, &hat] {
        let t = table(Mu { game: &g, classes: mu.classes.clone(), memo: BTreeMap::new() }, s, &partition, strategy);
        t.check_claims().map_err(ShrinkError::Verification)?;
    }

    let mut target = hat.elements();
    if target.is_empty() {
        target.insert(0);
    }
    let structure = a.induced_substructure(&target)?;
    if !holds(&structure, &s.to_formula())? {
        return Err(ShrinkError::Verification("substructure is not a model".into()));
    }
    let existential_count = s.existential_vars().len();
    let lemma_bound = lemma_bound(s.n(), existential_count, kappa, atom_count);
    let theorem_bound = theorem_bound(s.to_formula().len(), s.n(), kappa);
    let size = structure.size as u128;
    if size > lemma_bound.max(1) {
        return Err(ShrinkError::Verification(format!("{size} elements exceed the bound {lemma_bound}")));
    }
    if size > theorem_bound.max(1) {
        return Err(ShrinkError::Verification(format!("{size} elements exceed the bound {theorem_bound}")));
    }
    Ok(ShrinkReport {
        structure,
        elements: target.into_iter().collect(),
        strategy: sigma,
        uniform: hat,
        degree: kappa,
        atom_count,
        existential_count,
        lemma_bound,
        theorem_bound,
    })
}
