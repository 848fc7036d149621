//! Machine descriptions and exact simulators.
//!
//! Every real-time machine reads `¢ w $` one cell per step. Transitions on the
//! endmarkers may be omitted: they then keep the state and apply the identity
//! (vector machines), zero increments (counter machines), or multiply by 1 and
//! move right (one-way register machines).

mod alphabet;
mod counter;
mod format;
mod multiply;
mod trace;
mod tufa;
mod vector;

use thiserror::Error;

use crate::linalg::{LinalgError, Rational};

pub use alphabet::{Alphabet, Control, StateId, SymbolId, Tape, LEFT_END, RIGHT_END};
pub use counter::{CounterBuilder, CounterGuard, CounterMachine, CounterMove, Sign, ZeroTest};
pub use format::{FormatError, MachineDoc};
pub use multiply::{Direction, FamBuilder, FamMove, MultiplyAutomaton, Pause};
pub use trace::{Configuration, Halt, RunTrace, Step, StepDetail, Verdict};
pub use tufa::Tufa;
pub use vector::{CheckSpec, VectorAutomaton, VectorBuilder, VectorMove};

/// Outcome of a state's equality test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Omega {
    Eq,
    Ne,
}

/// Transition guard. `Any` fires regardless of the test outcome and is the
/// only guard blind machines may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Guard {
    Any,
    Eq,
    Ne,
}

impl From<Omega> for Guard {
    fn from(o: Omega) -> Self {
        match o {
            Omega::Eq => Guard::Eq,
            Omega::Ne => Guard::Ne,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown state {0:?}")]
    UnknownState(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("symbol {0:?} is a reserved endmarker")]
    ReservedSymbol(String),
    #[error("duplicate name {0:?}")]
    Duplicate(String),
    #[error("{0}")]
    Invalid(String),
    #[error("blind machine uses a guarded transition in state {0:?}")]
    BlindGuard(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("deterministic machine has several moves in state {state:?} on {symbol:?}")]
    Nondeterministic { state: String, symbol: String },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("the deterministic engine was given a nondeterministic machine")]
    NotDeterministic,
    #[error("frontier reached {size} configurations at step {step} (cap {cap})")]
    FrontierCap { step: usize, size: usize, cap: usize },
    #[error("step budget of {budget} exhausted before the right endmarker")]
    StepBudget { budget: u64 },
    #[error("counter overflow at step {step}")]
    CounterOverflow { step: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Resource limits and test hooks for a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub frontier_cap: usize,
    /// Steps allowed to a one-way machine; `None` means `10·(|w|+2)`.
    pub step_budget: Option<u64>,
    /// Structural deduplication of the frontier. Turning it off never changes verdicts.
    pub dedupe: bool,
    /// Shuffles successor order when set. Verdicts must not depend on it.
    pub shuffle_seed: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            frontier_cap: 1_000_000,
            step_budget: None,
            dedupe: true,
            shuffle_seed: None,
        }
    }
}

impl RunOptions {
    pub fn budget_for(&self, word_len: usize) -> u64 {
        self.step_budget.unwrap_or(10 * (word_len as u64 + 2))
    }
}

/// Any supported machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Machine {
    Vector(VectorAutomaton),
    Counter(CounterMachine),
    Multiply(MultiplyAutomaton),
    /// A generalized finite automaton read as the language `{w : f(w) = cutpoint}`.
    Tufa {
        automaton: Tufa,
        cutpoint: Rational,
    },
}

impl Machine {
    /// The `kind` tag used in machine files.
    pub fn kind(&self) -> &'static str {
        match self {
            Machine::Vector(m) => m.kind_name(),
            Machine::Counter(_) => "counter",
            Machine::Multiply(m) if m.with_equality => "fam",
            Machine::Multiply(_) => "famw",
            Machine::Tufa { .. } => "tufa",
        }
    }

    pub fn alphabet(&self) -> &Alphabet {
        match self {
            Machine::Vector(m) => &m.control.alphabet,
            Machine::Counter(m) => &m.control.alphabet,
            Machine::Multiply(m) => &m.control.alphabet,
            Machine::Tufa { automaton, .. } => &automaton.alphabet,
        }
    }

    pub fn control(&self) -> Option<&Control> {
        match self {
            Machine::Vector(m) => Some(&m.control),
            Machine::Counter(m) => Some(&m.control),
            Machine::Multiply(m) => Some(&m.control),
            Machine::Tufa { .. } => None,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        match self {
            Machine::Vector(m) => m.deterministic,
            _ => true,
        }
    }

    pub fn run(&self, word: &[SymbolId], opts: &RunOptions) -> Result<RunTrace, SimError> {
        match self {
            Machine::Vector(m) => m.run_with(word, opts),
            Machine::Counter(m) => m.run(word),
            Machine::Multiply(m) => m.run(word, opts.budget_for(word.len())),
            Machine::Tufa { automaton, cutpoint } => automaton.trace(cutpoint, word),
        }
    }

    /// Membership verdict. An exhausted step budget is an error here, not a rejection.
    pub fn accepts(&self, word: &[SymbolId], opts: &RunOptions) -> Result<bool, SimError> {
        match self {
            Machine::Tufa { automaton, cutpoint } => automaton.member(cutpoint, word),
            _ => {
                let trace = self.run(word, opts)?;
                match trace.verdict {
                    Verdict::BudgetExhausted => Err(SimError::StepBudget {
                        budget: opts.budget_for(word.len()),
                    }),
                    v => Ok(v == Verdict::Accept),
                }
            }
        }
    }

    /// Verdicts for every prefix of `word`, lengths `0..=|word|`.
    pub fn prefix_verdicts(&self, word: &[SymbolId], opts: &RunOptions) -> Result<Vec<bool>, SimError> {
        match self {
            Machine::Vector(m) => m.prefix_verdicts(word, opts),
            Machine::Counter(m) => m.prefix_verdicts(word),
            _ => (0..=word.len()).map(|i| self.accepts(&word[..i], opts)).collect(),
        }
    }

    pub fn as_vector(&self) -> Option<&VectorAutomaton> {
        match self {
            Machine::Vector(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_counter(&self) -> Option<&CounterMachine> {
        match self {
            Machine::Counter(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_multiply(&self) -> Option<&MultiplyAutomaton> {
        match self {
            Machine::Multiply(m) => Some(m),
            _ => None,
        }
    }

    pub fn as_tufa(&self) -> Option<(&Tufa, &Rational)> {
        match self {
            Machine::Tufa { automaton, cutpoint } => Some((automaton, cutpoint)),
            _ => None,
        }
    }
}

impl From<VectorAutomaton> for Machine {
    fn from(m: VectorAutomaton) -> Self {
        Machine::Vector(m)
    }
}

impl From<CounterMachine> for Machine {
    fn from(m: CounterMachine) -> Self {
        Machine::Counter(m)
    }
}

impl From<MultiplyAutomaton> for Machine {
    fn from(m: MultiplyAutomaton) -> Self {
        Machine::Multiply(m)
    }
}
