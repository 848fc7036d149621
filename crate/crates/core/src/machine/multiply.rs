use std::collections::{BTreeMap, BTreeSet, HashSet};

use super::{
    Configuration, Control, Guard, Halt, ModelError, Omega, RunTrace, SimError, StateId, Step, StepDetail,
    SymbolId, Tape, Verdict,
};
use crate::linalg::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Stay,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamMove {
    pub target: StateId,
    pub direction: Direction,
    pub multiplier: Rational,
}

/// Where a one-way machine without equality tests ends up after entering a cell.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pause {
    /// Leaves the cell in `exit` after multiplying the register by `product`.
    Exit { exit: StateId, product: Rational },
    /// Pauses on the cell forever.
    Loop,
    /// Reaches an undefined transition while pausing.
    Undefined,
}

/// One-way deterministic finite automaton with a rational register (1DFAM),
/// or its variant without equality tests (1DFAMW).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiplyAutomaton {
    pub control: Control,
    pub with_equality: bool,
    pub multipliers: BTreeSet<Rational>,
    transitions: BTreeMap<(StateId, Tape, Guard), FamMove>,
}

impl MultiplyAutomaton {
    pub fn new(
        control: Control,
        with_equality: bool,
        multipliers: Option<BTreeSet<Rational>>,
        transitions: BTreeMap<(StateId, Tape, Guard), FamMove>,
    ) -> Result<Self, ModelError> {
        let used: BTreeSet<Rational> = transitions.values().map(|m| m.multiplier.clone()).collect();
        let multipliers = match multipliers {
            Some(set) => {
                if let Some(bad) = used.iter().find(|g| !set.contains(g)) {
                    return Err(ModelError::Invalid(format!(
                        "multiplier {bad} not in the declared set"
                    )));
                }
                set
            }
            None => used,
        };
        let m = MultiplyAutomaton {
            control,
            with_equality,
            multipliers,
            transitions,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn transitions(&self) -> &BTreeMap<(StateId, Tape, Guard), FamMove> {
        &self.transitions
    }

    fn validate(&self) -> Result<(), ModelError> {
        let n = self.control.num_states();
        for ((q, sym, guard), mv) in &self.transitions {
            if q.0 >= n || mv.target.0 >= n {
                return Err(ModelError::Invalid("state index out of range".into()));
            }
            if !self.with_equality && *guard != Guard::Any {
                return Err(ModelError::BlindGuard(self.control.state_name(*q).to_string()));
            }
            if *guard == Guard::Any
                && (self.transitions.contains_key(&(*q, *sym, Guard::Eq))
                    || self.transitions.contains_key(&(*q, *sym, Guard::Ne)))
            {
                return Err(ModelError::Nondeterministic {
                    state: self.control.state_name(*q).to_string(),
                    symbol: self.control.alphabet.tape_name(*sym).to_string(),
                });
            }
        }
        Ok(())
    }

    fn default_endmarker(q: StateId) -> FamMove {
        FamMove {
            target: q,
            direction: Direction::Right,
            multiplier: Rational::one(),
        }
    }

    fn has_any_move(&self, q: StateId, sym: Tape) -> bool {
        [Guard::Any, Guard::Eq, Guard::Ne]
            .iter()
            .any(|g| self.transitions.contains_key(&(q, sym, *g)))
    }

    /// The move from `q` on `sym` given the equality outcome, if defined.
    pub fn lookup(&self, q: StateId, sym: Tape, omega: Option<Omega>) -> Option<FamMove> {
        if sym.is_endmarker() && !self.has_any_move(q, sym) {
            return Some(Self::default_endmarker(q));
        }
        omega
            .and_then(|o| self.transitions.get(&(q, sym, o.into())))
            .or_else(|| self.transitions.get(&(q, sym, Guard::Any)))
            .cloned()
    }

    /// Follows stay-moves from `(q, sym)` until the head moves right. Only
    /// meaningful without equality tests, where the register cannot steer control.
    pub fn pause_closure(&self, q: StateId, sym: Tape) -> Pause {
        let mut state = q;
        let mut product = Rational::one();
        let mut visited = HashSet::new();
        loop {
            if !visited.insert(state) {
                return Pause::Loop;
            }
            let Some(mv) = self.lookup(state, sym, None) else {
                return Pause::Undefined;
            };
            product = &product * &mv.multiplier;
            state = mv.target;
            if mv.direction == Direction::Right {
                return Pause::Exit { exit: state, product };
            }
        }
    }

    /// One-way simulation over `¢ w $`. With equality tests the run stops after
    /// `step_budget` steps. Without them no budget is needed: revisiting a state
    /// while paused on one cell is an infinite loop and rejects immediately.
    pub fn run(&self, word: &[SymbolId], step_budget: u64) -> Result<RunTrace, SimError> {
        let tape: Vec<Tape> = Control::tape(word).collect();
        let mut state = self.control.initial();
        let mut register = Rational::one();
        let initial = Some(Configuration::Register {
            state,
            register: register.clone(),
        });
        let mut steps = Vec::new();
        let mut position = 0usize;
        let mut paused_states: HashSet<StateId> = HashSet::new();
        let halted = |steps, halt| RunTrace {
            initial: initial.clone(),
            steps,
            verdict: Verdict::Reject,
            halt: Some(halt),
        };
        while position < tape.len() {
            if self.with_equality && steps.len() as u64 >= step_budget {
                return Ok(RunTrace {
                    initial,
                    steps,
                    verdict: Verdict::BudgetExhausted,
                    halt: None,
                });
            }
            let sym = tape[position];
            if !self.with_equality && !paused_states.insert(state) {
                let step = steps.len();
                return Ok(halted(
                    steps,
                    Halt::InfiniteLoop {
                        step,
                        state,
                        symbol: sym,
                    },
                ));
            }
            let omega = self
                .with_equality
                .then(|| if register.is_one() { Omega::Eq } else { Omega::Ne });
            let Some(mv) = self.lookup(state, sym, omega) else {
                let step = steps.len();
                return Ok(halted(
                    steps,
                    Halt::UndefinedTransition {
                        step,
                        state,
                        symbol: sym,
                    },
                ));
            };
            register = &register * &mv.multiplier;
            state = mv.target;
            steps.push(Step {
                position,
                symbol: sym,
                detail: StepDetail::Config(Configuration::Register {
                    state,
                    register: register.clone(),
                }),
            });
            if mv.direction == Direction::Right {
                position += 1;
                paused_states.clear();
            }
        }
        let verdict = if self.control.is_accepting(state) && register.is_one() {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        Ok(RunTrace {
            initial,
            steps,
            verdict,
            halt: None,
        })
    }
}

pub struct FamBuilder {
    control: Control,
    with_equality: bool,
    transitions: BTreeMap<(StateId, Tape, Guard), FamMove>,
}

impl FamBuilder {
    pub fn new(control: Control, with_equality: bool) -> Self {
        FamBuilder {
            control,
            with_equality,
            transitions: BTreeMap::new(),
        }
    }

    pub fn on(
        &mut self,
        from: &str,
        symbol: &str,
        guard: Guard,
        to: &str,
        direction: Direction,
        multiplier: Rational,
    ) -> Result<&mut Self, ModelError> {
        let q = self.control.state(from)?;
        let t = self.control.state(to)?;
        let s = self.control.alphabet.tape(symbol)?;
        let previous = self.transitions.insert(
            (q, s, guard),
            FamMove {
                target: t,
                direction,
                multiplier,
            },
        );
        if previous.is_some() {
            return Err(ModelError::Nondeterministic {
                state: from.to_string(),
                symbol: symbol.to_string(),
            });
        }
        Ok(self)
    }

    pub fn build(self) -> Result<MultiplyAutomaton, ModelError> {
        MultiplyAutomaton::new(self.control, self.with_equality, None, self.transitions)
    }
}
