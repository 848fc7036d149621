use serde::Serialize;
use serde_json::{json, Value};

use super::{Alphabet, Control, StateId, Tape};
use crate::linalg::{Rational, RowVector};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Configuration {
    Vector {
        state: StateId,
        vector: RowVector,
    },
    Counters {
        state: StateId,
        counters: Vec<i64>,
    },
    Register {
        state: StateId,
        register: Rational,
    },
    /// Weight vector of a generalized finite automaton.
    Weights(RowVector),
    /// Acceptance value of a generalized finite automaton.
    Value(Rational),
}

impl Configuration {
    pub fn state(&self) -> Option<StateId> {
        match self {
            Configuration::Vector { state, .. }
            | Configuration::Counters { state, .. }
            | Configuration::Register { state, .. } => Some(*state),
            Configuration::Weights(_) | Configuration::Value(_) => None,
        }
    }

    pub fn max_bits(&self) -> u64 {
        match self {
            Configuration::Vector { vector, .. } => vector.max_bits(),
            Configuration::Counters { counters, .. } => counters
                .iter()
                .map(|c| 64 - c.unsigned_abs().leading_zeros() as u64)
                .max()
                .unwrap_or(0),
            Configuration::Register { register, .. } => register.bits(),
            Configuration::Weights(v) => v.max_bits(),
            Configuration::Value(v) => v.bits(),
        }
    }

    pub fn to_json(&self, control: Option<&Control>) -> Value {
        let state = |q: &StateId| match control {
            Some(c) => json!(c.state_name(*q)),
            None => json!(q.0),
        };
        match self {
            Configuration::Vector { state: q, vector } => {
                json!({ "state": state(q), "vector": vector })
            }
            Configuration::Counters { state: q, counters } => {
                json!({ "state": state(q), "counters": counters })
            }
            Configuration::Register { state: q, register } => {
                json!({ "state": state(q), "register": register })
            }
            Configuration::Weights(v) => json!({ "weights": v }),
            Configuration::Value(v) => json!({ "value": v }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepDetail {
    Config(Configuration),
    /// Nondeterministic runs record the frontier instead of a single configuration.
    Frontier {
        size: usize,
        max_bits: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    /// Zero-based tape position read by this step (0 is `¢`).
    pub position: usize,
    pub symbol: Tape,
    pub detail: StepDetail,
}

impl Step {
    pub fn max_bits(&self) -> u64 {
        match &self.detail {
            StepDetail::Config(c) => c.max_bits(),
            StepDetail::Frontier { max_bits, .. } => *max_bits,
        }
    }

    pub fn frontier_size(&self) -> usize {
        match &self.detail {
            StepDetail::Config(_) => 1,
            StepDetail::Frontier { size, .. } => *size,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Accept,
    Reject,
    /// The one-way machine had not moved past `$` when its step budget ran out.
    BudgetExhausted,
}

/// Why a run stopped before its natural end, if it did.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Halt {
    UndefinedTransition {
        step: usize,
        state: StateId,
        symbol: Tape,
    },
    /// A one-way machine without equality tests would pause forever.
    InfiniteLoop {
        step: usize,
        state: StateId,
        symbol: Tape,
    },
    AllBranchesDied {
        step: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunTrace {
    pub initial: Option<Configuration>,
    pub steps: Vec<Step>,
    pub verdict: Verdict,
    pub halt: Option<Halt>,
}

impl RunTrace {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }

    pub fn final_config(&self) -> Option<&Configuration> {
        self.steps.iter().rev().find_map(|s| match &s.detail {
            StepDetail::Config(c) => Some(c),
            StepDetail::Frontier { .. } => None,
        })
    }

    pub fn configs(&self) -> impl Iterator<Item = &Configuration> {
        self.steps.iter().filter_map(|s| match &s.detail {
            StepDetail::Config(c) => Some(c),
            StepDetail::Frontier { .. } => None,
        })
    }

    pub fn max_frontier(&self) -> usize {
        self.steps.iter().map(Step::frontier_size).max().unwrap_or(1)
    }

    pub fn max_bits(&self) -> u64 {
        let init = self.initial.as_ref().map_or(0, Configuration::max_bits);
        self.steps.iter().map(Step::max_bits).fold(init, u64::max)
    }

    pub fn to_json(&self, control: Option<&Control>, alphabet: &Alphabet) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| {
                let mut v = json!({
                    "position": s.position,
                    "symbol": alphabet.tape_name(s.symbol),
                });
                match &s.detail {
                    StepDetail::Config(c) => v["config"] = c.to_json(control),
                    StepDetail::Frontier { size, max_bits } => {
                        v["frontier"] = json!(size);
                        v["max_bits"] = json!(max_bits);
                    }
                }
                v
            })
            .collect();
        let halt = self.halt.as_ref().map(|h| {
            let name =
                |q: &StateId| control.map_or_else(|| q.0.to_string(), |c| c.state_name(*q).to_string());
            match h {
                Halt::UndefinedTransition { step, state, symbol } => json!({
                    "kind": "undefined_transition", "step": step,
                    "state": name(state), "symbol": alphabet.tape_name(*symbol),
                }),
                Halt::InfiniteLoop { step, state, symbol } => json!({
                    "kind": "infinite_loop", "step": step,
                    "state": name(state), "symbol": alphabet.tape_name(*symbol),
                }),
                Halt::AllBranchesDied { step } => json!({ "kind": "all_branches_died", "step": step }),
            }
        });
        json!({
            "initial": self.initial.as_ref().map(|c| c.to_json(control)),
            "steps": steps,
            "verdict": self.verdict,
            "halt": halt,
        })
    }
}
