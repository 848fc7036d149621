use std::collections::BTreeMap;

use indexmap::IndexSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{
    Configuration, Control, Guard, Halt, ModelError, Omega, RunOptions, RunTrace, SimError, StateId, Step,
    StepDetail, SymbolId, Tape, Verdict,
};
use crate::linalg::{Rational, RowVector, SquareMatrix};

/// Which entry a state tests, and against what.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CheckSpec {
    /// One-based vector index.
    pub entry: usize,
    pub constant: Rational,
}

impl CheckSpec {
    pub fn new(entry: usize, constant: Rational) -> Self {
        CheckSpec { entry, constant }
    }

    pub fn standard() -> Self {
        CheckSpec::new(1, Rational::one())
    }

    pub fn is_standard(&self) -> bool {
        self.entry == 1 && self.constant.is_one()
    }

    fn omega(&self, v: &RowVector) -> Omega {
        if v.entries()[self.entry - 1] == self.constant {
            Omega::Eq
        } else {
            Omega::Ne
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorMove {
    pub target: StateId,
    pub matrix: SquareMatrix,
}

/// Real-time vector automaton: deterministic or not, blind or not.
///
/// Non-blind machines test `check[q]` before every step and branch on the
/// outcome. A run accepts when it ends in an accepting state whose
/// accept-relevant entry equals `accept_value`; that entry is the final state's
/// check entry, or entry 1 for blind machines.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorAutomaton {
    pub control: Control,
    pub initial_vector: RowVector,
    pub deterministic: bool,
    pub blind: bool,
    /// Indexed by state; unused when blind.
    pub checks: Vec<CheckSpec>,
    pub accept_value: Rational,
    transitions: BTreeMap<(StateId, Tape, Guard), Vec<VectorMove>>,
}

impl VectorAutomaton {
    pub fn new(
        control: Control,
        initial_vector: RowVector,
        deterministic: bool,
        blind: bool,
        checks: Vec<CheckSpec>,
        accept_value: Rational,
        transitions: BTreeMap<(StateId, Tape, Guard), Vec<VectorMove>>,
    ) -> Result<Self, ModelError> {
        // Blind machines never consult their checks; keep them canonical.
        let checks = if blind {
            vec![CheckSpec::standard(); control.num_states()]
        } else {
            checks
        };
        let m = VectorAutomaton {
            control,
            initial_vector,
            deterministic,
            blind,
            checks,
            accept_value,
            transitions,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.initial_vector.dim()
    }

    /// Size metric: number of states times dimension.
    pub fn size(&self) -> usize {
        self.control.num_states() * self.dim()
    }

    pub fn kind_name(&self) -> &'static str {
        match (self.deterministic, self.blind) {
            (true, false) => "dva",
            (true, true) => "dbva",
            (false, false) => "nva",
            (false, true) => "nbva",
        }
    }

    pub fn transitions(&self) -> &BTreeMap<(StateId, Tape, Guard), Vec<VectorMove>> {
        &self.transitions
    }

    pub fn matrices(&self) -> impl Iterator<Item = &SquareMatrix> {
        self.transitions.values().flatten().map(|mv| &mv.matrix)
    }

    pub fn check(&self, q: StateId) -> &CheckSpec {
        &self.checks[q.0]
    }

    /// Zero-based index of the entry compared with `accept_value` in state `q`.
    pub fn accept_entry(&self, q: StateId) -> usize {
        if self.blind {
            0
        } else {
            self.checks[q.0].entry - 1
        }
    }

    fn validate(&self) -> Result<(), ModelError> {
        let k = self.dim();
        let n = self.control.num_states();
        if !self.blind && self.checks.len() != n {
            return Err(ModelError::Invalid(format!(
                "expected {n} check specs, found {}",
                self.checks.len()
            )));
        }
        if !self.blind {
            for (q, c) in self.checks.iter().enumerate() {
                if c.entry == 0 || c.entry > k {
                    return Err(ModelError::Invalid(format!(
                        "state {} checks entry {} of a dimension-{k} vector",
                        self.control.state_name(StateId(q)),
                        c.entry
                    )));
                }
            }
        }
        for ((q, sym, guard), moves) in &self.transitions {
            if q.0 >= n {
                return Err(ModelError::Invalid(format!("state index {} out of range", q.0)));
            }
            if let Tape::Symbol(s) = sym {
                if s.0 >= self.control.alphabet.len() {
                    return Err(ModelError::Invalid(format!("symbol index {} out of range", s.0)));
                }
            }
            if self.blind && *guard != Guard::Any {
                return Err(ModelError::BlindGuard(self.control.state_name(*q).to_string()));
            }
            for mv in moves {
                if mv.target.0 >= n {
                    return Err(ModelError::Invalid(format!(
                        "target index {} out of range",
                        mv.target.0
                    )));
                }
                if mv.matrix.dim() != k {
                    return Err(ModelError::Dimension {
                        expected: k,
                        found: mv.matrix.dim(),
                    });
                }
            }
        }
        if self.deterministic {
            for q in self.control.states() {
                for sym in self.tape_symbols() {
                    for omega in [Omega::Eq, Omega::Ne] {
                        if self.lookup(q, sym, Some(omega)).count() > 1 {
                            return Err(ModelError::Nondeterministic {
                                state: self.control.state_name(q).to_string(),
                                symbol: self.control.alphabet.tape_name(sym).to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn tape_symbols(&self) -> impl Iterator<Item = Tape> + '_ {
        std::iter::once(Tape::Left)
            .chain(self.control.alphabet.ids().map(Tape::Symbol))
            .chain(std::iter::once(Tape::Right))
    }

    fn lookup(&self, q: StateId, sym: Tape, omega: Option<Omega>) -> impl Iterator<Item = &VectorMove> {
        let exact = omega.and_then(|o| self.transitions.get(&(q, sym, o.into())));
        let any = self.transitions.get(&(q, sym, Guard::Any));
        exact.into_iter().chain(any).flatten()
    }

    fn has_any_move(&self, q: StateId, sym: Tape) -> bool {
        [Guard::Any, Guard::Eq, Guard::Ne]
            .iter()
            .any(|g| self.transitions.contains_key(&(q, sym, *g)))
    }

    fn omega(&self, q: StateId, v: &RowVector) -> Option<Omega> {
        (!self.blind).then(|| self.checks[q.0].omega(v))
    }

    /// Successor configurations. Omitted endmarker transitions stay put with the identity.
    fn successors(&self, q: StateId, sym: Tape, v: &RowVector) -> Successors<'_> {
        if sym.is_endmarker() && !self.has_any_move(q, sym) {
            return Successors::Stay;
        }
        Successors::Moves(self.lookup(q, sym, self.omega(q, v)).collect())
    }

    pub fn accepts_config(&self, q: StateId, v: &RowVector) -> bool {
        self.control.is_accepting(q) && v.entries()[self.accept_entry(q)] == self.accept_value
    }

    /// Deterministic real-time run over `¢ w $`.
    pub fn run(&self, word: &[SymbolId]) -> Result<RunTrace, SimError> {
        if !self.deterministic {
            return Err(SimError::NotDeterministic);
        }
        let mut state = self.control.initial();
        let mut vector = self.initial_vector.clone();
        let mut steps = Vec::with_capacity(word.len() + 2);
        for (position, sym) in Control::tape(word).enumerate() {
            match self.successors(state, sym, &vector) {
                Successors::Stay => {}
                Successors::Moves(moves) => match moves.first() {
                    Some(mv) => {
                        vector = vector.mul_mat(&mv.matrix)?;
                        state = mv.target;
                    }
                    None => {
                        return Ok(RunTrace {
                            initial: Some(self.initial_config()),
                            steps,
                            verdict: Verdict::Reject,
                            halt: Some(Halt::UndefinedTransition {
                                step: position,
                                state,
                                symbol: sym,
                            }),
                        })
                    }
                },
            }
            steps.push(Step {
                position,
                symbol: sym,
                detail: StepDetail::Config(Configuration::Vector {
                    state,
                    vector: vector.clone(),
                }),
            });
        }
        let verdict = if self.accepts_config(state, &vector) {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        Ok(RunTrace {
            initial: Some(self.initial_config()),
            steps,
            verdict,
            halt: None,
        })
    }

    fn initial_config(&self) -> Configuration {
        Configuration::Vector {
            state: self.control.initial(),
            vector: self.initial_vector.clone(),
        }
    }

    /// Configuration-set run: each step maps the whole frontier through every
    /// applicable transition. Accepts iff some final configuration accepts.
    pub fn run_nondet(&self, word: &[SymbolId], opts: &RunOptions) -> Result<RunTrace, SimError> {
        let mut frontier = Frontier::new(self, opts);
        let mut steps = Vec::with_capacity(word.len() + 2);
        for (position, sym) in Control::tape(word).enumerate() {
            frontier.advance(sym, position)?;
            steps.push(Step {
                position,
                symbol: sym,
                detail: StepDetail::Frontier {
                    size: frontier.configs.len(),
                    max_bits: frontier.max_bits(),
                },
            });
            if frontier.configs.is_empty() {
                return Ok(RunTrace {
                    initial: Some(self.initial_config()),
                    steps,
                    verdict: Verdict::Reject,
                    halt: Some(Halt::AllBranchesDied { step: position }),
                });
            }
        }
        let verdict = if frontier.any_accepting() {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        Ok(RunTrace {
            initial: Some(self.initial_config()),
            steps,
            verdict,
            halt: None,
        })
    }

    /// Runs either engine depending on the determinism flag.
    pub fn run_with(&self, word: &[SymbolId], opts: &RunOptions) -> Result<RunTrace, SimError> {
        if self.deterministic {
            self.run(word)
        } else {
            self.run_nondet(word, opts)
        }
    }

    /// Verdict for every prefix of `word` (lengths `0..=|word|`) from a single
    /// pass: after each prefix the `$` step is applied to a copy of the frontier.
    pub fn prefix_verdicts(&self, word: &[SymbolId], opts: &RunOptions) -> Result<Vec<bool>, SimError> {
        let mut frontier = Frontier::new(self, opts);
        frontier.advance(Tape::Left, 0)?;
        let mut out = Vec::with_capacity(word.len() + 1);
        for (i, &s) in word.iter().enumerate() {
            out.push(frontier.accepts_at_end()?);
            frontier.advance(Tape::Symbol(s), i + 1)?;
        }
        out.push(frontier.accepts_at_end()?);
        Ok(out)
    }
}

enum Successors<'a> {
    Stay,
    Moves(Vec<&'a VectorMove>),
}

struct Frontier<'a> {
    machine: &'a VectorAutomaton,
    opts: &'a RunOptions,
    configs: Vec<(StateId, RowVector)>,
    rng: Option<ChaCha8Rng>,
}

impl<'a> Frontier<'a> {
    fn new(machine: &'a VectorAutomaton, opts: &'a RunOptions) -> Self {
        Frontier {
            machine,
            opts,
            configs: vec![(machine.control.initial(), machine.initial_vector.clone())],
            rng: opts.shuffle_seed.map(ChaCha8Rng::seed_from_u64),
        }
    }

    fn advance(&mut self, sym: Tape, position: usize) -> Result<(), SimError> {
        let mut next: IndexSet<(StateId, RowVector)> = IndexSet::new();
        let mut kept = Vec::new();
        for (q, v) in &self.configs {
            let mut succ: Vec<(StateId, RowVector)> = match self.machine.successors(*q, sym, v) {
                Successors::Stay => vec![(*q, v.clone())],
                Successors::Moves(moves) => moves
                    .into_iter()
                    .map(|mv| Ok((mv.target, v.mul_mat(&mv.matrix)?)))
                    .collect::<Result<_, SimError>>()?,
            };
            if let Some(rng) = self.rng.as_mut() {
                succ.shuffle(rng);
            }
            for c in succ {
                if self.opts.dedupe {
                    next.insert(c);
                } else {
                    kept.push(c);
                }
                let size = next.len() + kept.len();
                if size > self.opts.frontier_cap {
                    return Err(SimError::FrontierCap {
                        step: position,
                        size,
                        cap: self.opts.frontier_cap,
                    });
                }
            }
        }
        let mut next: Vec<_> = if self.opts.dedupe {
            next.into_iter().collect()
        } else {
            kept
        };
        if let Some(rng) = self.rng.as_mut() {
            next.shuffle(rng);
        }
        self.configs = next;
        Ok(())
    }

    /// Whether the `$` step would reach an accepting configuration, without
    /// materializing the final frontier.
    fn accepts_at_end(&self) -> Result<bool, SimError> {
        for (q, v) in &self.configs {
            match self.machine.successors(*q, Tape::Right, v) {
                Successors::Stay if self.machine.accepts_config(*q, v) => return Ok(true),
                Successors::Stay => {}
                Successors::Moves(moves) => {
                    for mv in moves {
                        if self.machine.accepts_config(mv.target, &v.mul_mat(&mv.matrix)?) {
                            return Ok(true);
                        }
                    }
                }
            }
        }
        Ok(false)
    }

    fn any_accepting(&self) -> bool {
        self.configs
            .iter()
            .any(|(q, v)| self.machine.accepts_config(*q, v))
    }

    fn max_bits(&self) -> u64 {
        self.configs.iter().map(|(_, v)| v.max_bits()).max().unwrap_or(0)
    }
}

/// Incremental construction by state and symbol names.
pub struct VectorBuilder {
    control: Control,
    initial_vector: RowVector,
    deterministic: bool,
    blind: bool,
    checks: Vec<CheckSpec>,
    accept_value: Rational,
    transitions: BTreeMap<(StateId, Tape, Guard), Vec<VectorMove>>,
}

impl VectorBuilder {
    pub fn new(control: Control, initial_vector: RowVector) -> Self {
        let n = control.num_states();
        VectorBuilder {
            control,
            initial_vector,
            deterministic: true,
            blind: false,
            checks: vec![CheckSpec::standard(); n],
            accept_value: Rational::one(),
            transitions: BTreeMap::new(),
        }
    }

    pub fn nondeterministic(mut self) -> Self {
        self.deterministic = false;
        self
    }

    pub fn blind(mut self) -> Self {
        self.blind = true;
        self
    }

    pub fn accept_value(mut self, value: Rational) -> Self {
        self.accept_value = value;
        self
    }

    pub fn check_all(mut self, spec: CheckSpec) -> Self {
        self.checks.iter_mut().for_each(|c| *c = spec.clone());
        self
    }

    pub fn check(mut self, state: &str, spec: CheckSpec) -> Result<Self, ModelError> {
        let q = self.control.state(state)?;
        self.checks[q.0] = spec;
        Ok(self)
    }

    /// Adds `from --symbol[guard]--> to` multiplying by `matrix`. `symbol` may be `¢` or `$`.
    pub fn on(
        &mut self,
        from: &str,
        symbol: &str,
        guard: Guard,
        to: &str,
        matrix: &SquareMatrix,
    ) -> Result<&mut Self, ModelError> {
        let q = self.control.state(from)?;
        let t = self.control.state(to)?;
        let s = self.control.alphabet.tape(symbol)?;
        self.transitions
            .entry((q, s, guard))
            .or_default()
            .push(VectorMove {
                target: t,
                matrix: matrix.clone(),
            });
        Ok(self)
    }

    pub fn build(self) -> Result<VectorAutomaton, ModelError> {
        VectorAutomaton::new(
            self.control,
            self.initial_vector,
            self.deterministic,
            self.blind,
            self.checks,
            self.accept_value,
            self.transitions,
        )
    }
}
