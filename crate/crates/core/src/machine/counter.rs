use std::collections::BTreeMap;

use super::{
    Configuration, Control, Halt, ModelError, RunTrace, SimError, StateId, Step, StepDetail, SymbolId, Tape,
    Verdict,
};

/// How a non-blind counter machine may inspect its counters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ZeroTest {
    /// Dispatch on the zero/nonzero status of each counter.
    PerCounter,
    /// Dispatch only on whether every counter is zero.
    SimultaneousZero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Zero,
    NonZero,
    Any,
}

impl Sign {
    fn admits(self, c: i64) -> bool {
        match self {
            Sign::Zero => c == 0,
            Sign::NonZero => c != 0,
            Sign::Any => true,
        }
    }
}

/// Counter test guarding a transition.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CounterGuard {
    Any,
    Signs(Vec<Sign>),
    AllZero,
    NotAllZero,
}

impl CounterGuard {
    pub fn admits(&self, counters: &[i64]) -> bool {
        match self {
            CounterGuard::Any => true,
            CounterGuard::Signs(s) => s.iter().zip(counters).all(|(s, &c)| s.admits(c)),
            CounterGuard::AllZero => counters.iter().all(|&c| c == 0),
            CounterGuard::NotAllZero => counters.iter().any(|&c| c != 0),
        }
    }

    /// Whether some counter valuation satisfies both guards.
    fn overlaps(&self, other: &CounterGuard, k: usize) -> bool {
        use CounterGuard::*;
        match (self, other) {
            (Any, _) | (_, Any) => true,
            (AllZero, NotAllZero) | (NotAllZero, AllZero) => false,
            (AllZero, AllZero) | (NotAllZero, NotAllZero) => true,
            (Signs(a), Signs(b)) => a
                .iter()
                .zip(b)
                .all(|(x, y)| !matches!((x, y), (Sign::Zero, Sign::NonZero) | (Sign::NonZero, Sign::Zero))),
            (Signs(s), AllZero) | (AllZero, Signs(s)) => s.iter().all(|x| *x != Sign::NonZero),
            (Signs(s), NotAllZero) | (NotAllZero, Signs(s)) => k > 0 && s.iter().any(|x| *x != Sign::Zero),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterMove {
    pub target: StateId,
    pub increment: Vec<i64>,
}

/// Real-time deterministic multicounter automaton, general or blind, with
/// increments bounded by `bound` in absolute value.
///
/// Blind machines, and machines with `accept_on_zero`, additionally require
/// every counter to be zero at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CounterMachine {
    pub control: Control,
    pub counters: usize,
    pub blind: bool,
    pub bound: i64,
    pub zero_test: ZeroTest,
    pub accept_on_zero: bool,
    transitions: BTreeMap<(StateId, Tape), Vec<(CounterGuard, CounterMove)>>,
}

impl CounterMachine {
    pub fn new(
        control: Control,
        counters: usize,
        blind: bool,
        bound: i64,
        zero_test: ZeroTest,
        accept_on_zero: bool,
        transitions: BTreeMap<(StateId, Tape), Vec<(CounterGuard, CounterMove)>>,
    ) -> Result<Self, ModelError> {
        let m = CounterMachine {
            control,
            counters,
            blind,
            bound,
            zero_test,
            accept_on_zero: accept_on_zero || blind,
            transitions,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn transitions(&self) -> &BTreeMap<(StateId, Tape), Vec<(CounterGuard, CounterMove)>> {
        &self.transitions
    }

    fn validate(&self) -> Result<(), ModelError> {
        if self.bound < 1 {
            return Err(ModelError::Invalid("increment bound must be positive".into()));
        }
        let n = self.control.num_states();
        for ((q, sym), moves) in &self.transitions {
            let where_ = || {
                format!(
                    "{} on {}",
                    self.control.state_name(*q),
                    self.control.alphabet.tape_name(*sym)
                )
            };
            if q.0 >= n {
                return Err(ModelError::Invalid(format!("state index {} out of range", q.0)));
            }
            for (i, (g, mv)) in moves.iter().enumerate() {
                if mv.target.0 >= n {
                    return Err(ModelError::Invalid(format!(
                        "target index {} out of range",
                        mv.target.0
                    )));
                }
                if mv.increment.len() != self.counters {
                    return Err(ModelError::Dimension {
                        expected: self.counters,
                        found: mv.increment.len(),
                    });
                }
                if mv.increment.iter().any(|d| d.abs() > self.bound) {
                    return Err(ModelError::Invalid(format!(
                        "increment {:?} exceeds bound {} ({})",
                        mv.increment,
                        self.bound,
                        where_()
                    )));
                }
                let ok = match (g, self.blind, self.zero_test) {
                    (CounterGuard::Any, _, _) => true,
                    (_, true, _) => false,
                    (CounterGuard::Signs(s), false, ZeroTest::PerCounter) => s.len() == self.counters,
                    (CounterGuard::AllZero | CounterGuard::NotAllZero, false, ZeroTest::SimultaneousZero) => {
                        true
                    }
                    _ => false,
                };
                if !ok {
                    return Err(ModelError::Invalid(format!(
                        "guard {g:?} not allowed for this machine ({})",
                        where_()
                    )));
                }
                if moves[..i].iter().any(|(h, _)| h.overlaps(g, self.counters)) {
                    return Err(ModelError::Nondeterministic {
                        state: self.control.state_name(*q).to_string(),
                        symbol: self.control.alphabet.tape_name(*sym).to_string(),
                    });
                }
            }
        }
        Ok(())
    }

    /// The move taken from `q` on `sym`; `None` means undefined. Omitted
    /// endmarker transitions stay in place without touching the counters.
    fn step(&self, q: StateId, sym: Tape, counters: &[i64]) -> Option<CounterMove> {
        match self.transitions.get(&(q, sym)) {
            None if sym.is_endmarker() => Some(CounterMove {
                target: q,
                increment: vec![0; self.counters],
            }),
            None => None,
            Some(moves) => moves
                .iter()
                .find(|(g, _)| g.admits(counters))
                .map(|(_, mv)| mv.clone()),
        }
    }

    fn accepts(&self, q: StateId, counters: &[i64]) -> bool {
        self.control.is_accepting(q) && (!self.accept_on_zero || counters.iter().all(|&c| c == 0))
    }

    pub fn run(&self, word: &[SymbolId]) -> Result<RunTrace, SimError> {
        let mut state = self.control.initial();
        let mut counters = vec![0i64; self.counters];
        let initial = Some(Configuration::Counters {
            state,
            counters: counters.clone(),
        });
        let mut steps = Vec::with_capacity(word.len() + 2);
        for (position, sym) in Control::tape(word).enumerate() {
            let Some(mv) = self.step(state, sym, &counters) else {
                return Ok(RunTrace {
                    initial,
                    steps,
                    verdict: Verdict::Reject,
                    halt: Some(Halt::UndefinedTransition {
                        step: position,
                        state,
                        symbol: sym,
                    }),
                });
            };
            for (c, d) in counters.iter_mut().zip(&mv.increment) {
                *c = c
                    .checked_add(*d)
                    .ok_or(SimError::CounterOverflow { step: position })?;
            }
            state = mv.target;
            steps.push(Step {
                position,
                symbol: sym,
                detail: StepDetail::Config(Configuration::Counters {
                    state,
                    counters: counters.clone(),
                }),
            });
        }
        let verdict = if self.accepts(state, &counters) {
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

    /// Verdicts for every prefix of `word` from one pass.
    pub fn prefix_verdicts(&self, word: &[SymbolId]) -> Result<Vec<bool>, SimError> {
        let mut state = self.control.initial();
        let mut counters = vec![0i64; self.counters];
        let mut alive = true;
        let mut out = Vec::with_capacity(word.len() + 1);
        let apply = |state: &mut StateId, counters: &mut Vec<i64>, sym: Tape| -> bool {
            match self.step(*state, sym, counters) {
                Some(mv) => {
                    for (c, d) in counters.iter_mut().zip(&mv.increment) {
                        *c += d;
                    }
                    *state = mv.target;
                    true
                }
                None => false,
            }
        };
        alive &= apply(&mut state, &mut counters, Tape::Left);
        for i in 0..=word.len() {
            let verdict = alive && {
                let (mut q, mut c) = (state, counters.clone());
                apply(&mut q, &mut c, Tape::Right) && self.accepts(q, &c)
            };
            out.push(verdict);
            if i < word.len() && alive {
                alive &= apply(&mut state, &mut counters, Tape::Symbol(word[i]));
            }
        }
        Ok(out)
    }
}

pub struct CounterBuilder {
    control: Control,
    counters: usize,
    blind: bool,
    bound: i64,
    zero_test: ZeroTest,
    accept_on_zero: bool,
    transitions: BTreeMap<(StateId, Tape), Vec<(CounterGuard, CounterMove)>>,
}

impl CounterBuilder {
    pub fn new(control: Control, counters: usize) -> Self {
        CounterBuilder {
            control,
            counters,
            blind: false,
            bound: 1,
            zero_test: ZeroTest::PerCounter,
            accept_on_zero: false,
            transitions: BTreeMap::new(),
        }
    }

    pub fn blind(mut self) -> Self {
        self.blind = true;
        self
    }

    pub fn bound(mut self, bound: i64) -> Self {
        self.bound = bound;
        self
    }

    pub fn zero_test(mut self, mode: ZeroTest) -> Self {
        self.zero_test = mode;
        self
    }

    pub fn accept_on_zero(mut self) -> Self {
        self.accept_on_zero = true;
        self
    }

    pub fn on(
        &mut self,
        from: &str,
        symbol: &str,
        guard: CounterGuard,
        to: &str,
        increment: &[i64],
    ) -> Result<&mut Self, ModelError> {
        let q = self.control.state(from)?;
        let t = self.control.state(to)?;
        let s = self.control.alphabet.tape(symbol)?;
        self.transitions.entry((q, s)).or_default().push((
            guard,
            CounterMove {
                target: t,
                increment: increment.to_vec(),
            },
        ));
        Ok(self)
    }

    pub fn build(self) -> Result<CounterMachine, ModelError> {
        CounterMachine::new(
            self.control,
            self.counters,
            self.blind,
            self.bound,
            self.zero_test,
            self.accept_on_zero,
            self.transitions,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::Alphabet;

    #[test]
    fn blind_counters_must_end_at_zero() {
        let control = Control::new(&["q"], "q", &["q"], Alphabet::new(["a"]).unwrap()).unwrap();
        let mut b = CounterBuilder::new(control, 2).blind();
        b.on("q", "a", CounterGuard::Any, "q", &[1, 1]).unwrap();
        let m = b.build().unwrap();
        let a = m.control.alphabet.symbol("a").unwrap();
        assert!(m.run(&[]).unwrap().accepted());
        for n in 1..5 {
            let t = m.run(&vec![a; n]).unwrap();
            assert!(!t.accepted());
            assert_eq!(t.steps.len(), n + 2);
        }
        assert_eq!(m.prefix_verdicts(&[a, a]).unwrap(), vec![true, false, false]);
    }

    #[test]
    fn guard_validation() {
        let control = Control::new(&["q"], "q", &["q"], Alphabet::new(["a"]).unwrap()).unwrap();
        let mut b = CounterBuilder::new(control.clone(), 1);
        b.on("q", "a", CounterGuard::Signs(vec![Sign::Zero]), "q", &[1])
            .unwrap();
        b.on("q", "a", CounterGuard::Signs(vec![Sign::Any]), "q", &[1])
            .unwrap();
        assert!(matches!(b.build(), Err(ModelError::Nondeterministic { .. })));

        let mut b = CounterBuilder::new(control.clone(), 1);
        b.on("q", "a", CounterGuard::AllZero, "q", &[1]).unwrap();
        assert!(b.build().is_err(), "simultaneous test on a per-counter machine");

        let mut b = CounterBuilder::new(control.clone(), 1);
        b.on("q", "a", CounterGuard::Any, "q", &[2]).unwrap();
        assert!(b.build().is_err(), "increment above bound");

        let mut b = CounterBuilder::new(control, 1).zero_test(ZeroTest::SimultaneousZero);
        b.on("q", "a", CounterGuard::AllZero, "q", &[1]).unwrap();
        b.on("q", "a", CounterGuard::NotAllZero, "q", &[-1]).unwrap();
        let m = b.build().unwrap();
        let a = m.control.alphabet.symbol("a").unwrap();
        let t = m.run(&[a, a, a]).unwrap();
        let counters: Vec<_> = t
            .configs()
            .map(|c| match c {
                Configuration::Counters { counters, .. } => counters[0],
                _ => unreachable!(),
            })
            .collect();
        assert_eq!(counters, vec![0, 1, 0, 1, 1]);
    }
}
