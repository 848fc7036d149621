//! JSON machine description files.
//!
//! One document describes one machine. Rationals are `"p/q"` strings (plain
//! integers are accepted on input), matrices are row-major arrays. Vector
//! machine transitions refer to a named `matrices` table or carry an inline
//! matrix; for TuFA documents `matrices` is keyed by symbol.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use thiserror::Error;

use super::{
    Alphabet, CheckSpec, Control, CounterGuard, CounterMachine, CounterMove, Direction, FamMove, Guard,
    Machine, ModelError, MultiplyAutomaton, Sign, Tufa, VectorAutomaton, VectorMove, ZeroTest,
};
use crate::linalg::{Rational, RowVector, SquareMatrix};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed machine file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("missing field `{0}` for this machine kind")]
    Missing(&'static str),
    #[error("unknown machine kind {0:?}")]
    UnknownKind(String),
    #[error("{0}")]
    Bad(String),
    #[error("invalid machine: {0}")]
    Model(#[from] ModelError),
}

/// A machine together with the bookkeeping carried by its file.
#[derive(Clone, Debug, PartialEq)]
pub struct MachineDoc {
    pub machine: Machine,
    pub id: Option<String>,
    /// Free-form record of how the machine was produced.
    pub provenance: Option<Value>,
    pub notes: Vec<String>,
}

#[derive(Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawDoc {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    states: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q0: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accept: Option<Vec<String>>,
    alphabet: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    blind: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    initial_vector: Option<RowVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    final_vector: Option<RowVector>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accept_value: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lambda: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    check: Option<BTreeMap<String, RawCheck>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    zero_test: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    accept_on_zero: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multipliers: Option<Vec<Rational>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrices: Option<BTreeMap<String, SquareMatrix>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    transitions: Option<Vec<RawTransition>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Value>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    entry: usize,
    constant: Rational,
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum MatrixRef {
    Name(String),
    Inline(SquareMatrix),
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(untagged)]
enum RawTest {
    Mode(String),
    Signs(Vec<String>),
}

#[derive(Serialize, Deserialize, Clone)]
#[serde(deny_unknown_fields)]
struct RawTransition {
    from: String,
    symbol: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    omega: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    test: Option<RawTest>,
    to: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<MatrixRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    increment: Option<Vec<i64>>,
    #[serde(default, rename = "move", skip_serializing_if = "Option::is_none")]
    direction: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    multiplier: Option<Rational>,
}

impl RawTransition {
    fn new(from: &str, symbol: &str, to: &str) -> Self {
        RawTransition {
            from: from.into(),
            symbol: symbol.into(),
            omega: None,
            test: None,
            to: to.into(),
            matrix: None,
            increment: None,
            direction: None,
            multiplier: None,
        }
    }
}

fn guard_from(omega: Option<&str>) -> Result<Guard, FormatError> {
    match omega {
        None | Some("*") => Ok(Guard::Any),
        Some("=") => Ok(Guard::Eq),
        Some("!=") | Some("≠") => Ok(Guard::Ne),
        Some(other) => Err(FormatError::Bad(format!(
            "omega must be \"=\" or \"!=\", got {other:?}"
        ))),
    }
}

fn guard_name(g: Guard) -> Option<String> {
    match g {
        Guard::Any => None,
        Guard::Eq => Some("=".into()),
        Guard::Ne => Some("!=".into()),
    }
}

fn counter_guard_from(test: Option<&RawTest>) -> Result<CounterGuard, FormatError> {
    Ok(match test {
        None => CounterGuard::Any,
        Some(RawTest::Mode(m)) => match m.as_str() {
            "*" => CounterGuard::Any,
            "zero" => CounterGuard::AllZero,
            "nonzero" => CounterGuard::NotAllZero,
            other => return Err(FormatError::Bad(format!("unknown counter test {other:?}"))),
        },
        Some(RawTest::Signs(s)) => CounterGuard::Signs(
            s.iter()
                .map(|x| match x.as_str() {
                    "0" => Ok(Sign::Zero),
                    "!0" => Ok(Sign::NonZero),
                    "*" => Ok(Sign::Any),
                    other => Err(FormatError::Bad(format!(
                        "counter sign must be 0, !0 or *, got {other:?}"
                    ))),
                })
                .collect::<Result<_, _>>()?,
        ),
    })
}

fn counter_guard_raw(g: &CounterGuard) -> Option<RawTest> {
    match g {
        CounterGuard::Any => None,
        CounterGuard::AllZero => Some(RawTest::Mode("zero".into())),
        CounterGuard::NotAllZero => Some(RawTest::Mode("nonzero".into())),
        CounterGuard::Signs(s) => Some(RawTest::Signs(
            s.iter()
                .map(|x| match x {
                    Sign::Zero => "0",
                    Sign::NonZero => "!0",
                    Sign::Any => "*",
                })
                .map(String::from)
                .collect(),
        )),
    }
}

fn control_from(raw: &RawDoc, alphabet: Alphabet) -> Result<Control, FormatError> {
    let states = raw.states.as_ref().ok_or(FormatError::Missing("states"))?;
    let q0 = raw.q0.as_ref().ok_or(FormatError::Missing("q0"))?;
    let accept = raw.accept.clone().unwrap_or_default();
    Ok(Control::new(states, q0, &accept, alphabet)?)
}

fn control_raw(control: &Control, raw: &mut RawDoc) {
    raw.states = Some(control.state_names().to_vec());
    raw.q0 = Some(control.state_name(control.initial()).to_string());
    raw.accept = Some(
        control
            .accepting()
            .iter()
            .map(|q| control.state_name(*q).to_string())
            .collect(),
    );
}

fn check_dim(declared: Option<usize>, actual: usize, field: &'static str) -> Result<(), FormatError> {
    match declared {
        Some(d) if d != actual => Err(FormatError::Bad(format!(
            "`{field}` is {d} but the initial vector has {actual} entries"
        ))),
        _ => Ok(()),
    }
}

impl MachineDoc {
    pub fn new(machine: impl Into<Machine>) -> Self {
        MachineDoc {
            machine: machine.into(),
            id: None,
            provenance: None,
            notes: Vec::new(),
        }
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = Some(id.into());
        self
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let raw: RawDoc = serde_json::from_str(text)?;
        Self::from_raw(raw)
    }

    pub fn from_value(value: Value) -> Result<Self, FormatError> {
        Self::from_raw(serde_json::from_value(value)?)
    }

    fn from_raw(raw: RawDoc) -> Result<Self, FormatError> {
        let alphabet = Alphabet::new(raw.alphabet.iter().cloned())?;
        let machine = match raw.kind.as_str() {
            "dva" | "dbva" | "nva" | "nbva" => Machine::Vector(vector_from(&raw, alphabet)?),
            "counter" => Machine::Counter(counter_from(&raw, alphabet)?),
            "fam" | "famw" => Machine::Multiply(fam_from(&raw, alphabet)?),
            "tufa" => tufa_from(&raw, alphabet)?,
            other => return Err(FormatError::UnknownKind(other.to_string())),
        };
        Ok(MachineDoc {
            machine,
            id: raw.id,
            provenance: raw.provenance,
            notes: raw.notes,
        })
    }

    pub fn to_value(&self) -> Value {
        let mut raw = RawDoc {
            kind: self.machine.kind().to_string(),
            id: self.id.clone(),
            alphabet: self.machine.alphabet().names().to_vec(),
            provenance: self.provenance.clone(),
            notes: self.notes.clone(),
            ..RawDoc::default()
        };
        match &self.machine {
            Machine::Vector(m) => vector_raw(m, &mut raw),
            Machine::Counter(m) => counter_raw(m, &mut raw),
            Machine::Multiply(m) => fam_raw(m, &mut raw),
            Machine::Tufa { automaton, cutpoint } => tufa_raw(automaton, cutpoint, &mut raw),
        }
        serde_json::to_value(raw).expect("machine documents always serialize")
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_value()).expect("serializable");
        s.push('\n');
        s
    }

    /// SHA-256 of the compact JSON form, hex encoded.
    pub fn digest(&self) -> String {
        let compact = serde_json::to_string(&self.to_value()).expect("serializable");
        hex::encode(Sha256::digest(compact.as_bytes()))
    }
}

fn vector_from(raw: &RawDoc, alphabet: Alphabet) -> Result<VectorAutomaton, FormatError> {
    let (deterministic, blind) = match raw.kind.as_str() {
        "dva" => (true, false),
        "dbva" => (true, true),
        "nva" => (false, false),
        _ => (false, true),
    };
    let blind = raw.blind.unwrap_or(blind);
    let control = control_from(raw, alphabet)?;
    let v = raw
        .initial_vector
        .clone()
        .ok_or(FormatError::Missing("initial_vector"))?;
    if v.dim() == 0 {
        return Err(FormatError::Bad("initial_vector is empty".into()));
    }
    check_dim(raw.dim.or(raw.k), v.dim(), "dim")?;
    let mut checks = vec![CheckSpec::standard(); control.num_states()];
    if let Some(map) = &raw.check {
        if let Some(default) = map.get("*") {
            checks.fill(CheckSpec::new(default.entry, default.constant.clone()));
        }
        for (name, c) in map.iter().filter(|(n, _)| n.as_str() != "*") {
            let q = control.state(name)?;
            checks[q.0] = CheckSpec::new(c.entry, c.constant.clone());
        }
    }
    let table = raw.matrices.clone().unwrap_or_default();
    let mut transitions: BTreeMap<_, Vec<VectorMove>> = BTreeMap::new();
    for t in raw.transitions.iter().flatten() {
        let q = control.state(&t.from)?;
        let target = control.state(&t.to)?;
        let sym = control.alphabet.tape(&t.symbol)?;
        let guard = guard_from(t.omega.as_deref())?;
        let matrix = match t
            .matrix
            .as_ref()
            .ok_or(FormatError::Missing("transitions[].matrix"))?
        {
            MatrixRef::Name(name) => table
                .get(name)
                .cloned()
                .ok_or_else(|| FormatError::Bad(format!("unknown matrix name {name:?}")))?,
            MatrixRef::Inline(m) => m.clone(),
        };
        transitions
            .entry((q, sym, guard))
            .or_default()
            .push(VectorMove { target, matrix });
    }
    let accept_value = raw.accept_value.clone().unwrap_or_else(Rational::one);
    Ok(VectorAutomaton::new(
        control,
        v,
        deterministic,
        blind,
        checks,
        accept_value,
        transitions,
    )?)
}

fn vector_raw(m: &VectorAutomaton, raw: &mut RawDoc) {
    control_raw(&m.control, raw);
    raw.dim = Some(m.dim());
    raw.initial_vector = Some(m.initial_vector.clone());
    raw.accept_value = Some(m.accept_value.clone());
    if !m.blind {
        let first = &m.checks[0];
        let mut map = BTreeMap::new();
        map.insert(
            "*".to_string(),
            RawCheck {
                entry: first.entry,
                constant: first.constant.clone(),
            },
        );
        for q in m.control.states() {
            let c = m.check(q);
            if c != first {
                map.insert(
                    m.control.state_name(q).to_string(),
                    RawCheck {
                        entry: c.entry,
                        constant: c.constant.clone(),
                    },
                );
            }
        }
        raw.check = Some(map);
    }
    // Distinct matrices get names in order of first use.
    let mut names: Vec<&SquareMatrix> = Vec::new();
    let mut transitions = Vec::new();
    for ((q, sym, guard), moves) in m.transitions() {
        for mv in moves {
            let idx = names.iter().position(|x| *x == &mv.matrix).unwrap_or_else(|| {
                names.push(&mv.matrix);
                names.len() - 1
            });
            let mut t = RawTransition::new(
                m.control.state_name(*q),
                m.control.alphabet.tape_name(*sym),
                m.control.state_name(mv.target),
            );
            t.omega = guard_name(*guard);
            t.matrix = Some(MatrixRef::Name(format!("M{idx}")));
            transitions.push(t);
        }
    }
    raw.matrices = Some(
        names
            .into_iter()
            .enumerate()
            .map(|(i, mat)| (format!("M{i}"), mat.clone()))
            .collect(),
    );
    raw.transitions = Some(transitions);
}

fn counter_from(raw: &RawDoc, alphabet: Alphabet) -> Result<CounterMachine, FormatError> {
    let control = control_from(raw, alphabet)?;
    let k = raw.k.ok_or(FormatError::Missing("k"))?;
    let blind = raw.blind.unwrap_or(false);
    let zero_test = match raw.zero_test.as_deref() {
        None | Some("per_counter") => ZeroTest::PerCounter,
        Some("simultaneous") => ZeroTest::SimultaneousZero,
        Some(other) => {
            return Err(FormatError::Bad(format!(
                "zero_test must be \"per_counter\" or \"simultaneous\", got {other:?}"
            )))
        }
    };
    let mut transitions: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for t in raw.transitions.iter().flatten() {
        let q = control.state(&t.from)?;
        let target = control.state(&t.to)?;
        let sym = control.alphabet.tape(&t.symbol)?;
        let guard = counter_guard_from(t.test.as_ref())?;
        let increment = t
            .increment
            .clone()
            .ok_or(FormatError::Missing("transitions[].increment"))?;
        transitions
            .entry((q, sym))
            .or_default()
            .push((guard, CounterMove { target, increment }));
    }
    Ok(CounterMachine::new(
        control,
        k,
        blind,
        raw.bound.unwrap_or(1),
        zero_test,
        raw.accept_on_zero.unwrap_or(false),
        transitions,
    )?)
}

fn counter_raw(m: &CounterMachine, raw: &mut RawDoc) {
    control_raw(&m.control, raw);
    raw.k = Some(m.counters);
    raw.blind = Some(m.blind);
    raw.bound = Some(m.bound);
    raw.zero_test = Some(
        match m.zero_test {
            ZeroTest::PerCounter => "per_counter",
            ZeroTest::SimultaneousZero => "simultaneous",
        }
        .into(),
    );
    raw.accept_on_zero = Some(m.accept_on_zero);
    let mut transitions = Vec::new();
    for ((q, sym), moves) in m.transitions() {
        for (g, mv) in moves {
            let mut t = RawTransition::new(
                m.control.state_name(*q),
                m.control.alphabet.tape_name(*sym),
                m.control.state_name(mv.target),
            );
            t.test = counter_guard_raw(g);
            t.increment = Some(mv.increment.clone());
            transitions.push(t);
        }
    }
    raw.transitions = Some(transitions);
}

fn fam_from(raw: &RawDoc, alphabet: Alphabet) -> Result<MultiplyAutomaton, FormatError> {
    let control = control_from(raw, alphabet)?;
    let with_equality = raw.kind == "fam";
    let mut transitions = BTreeMap::new();
    for t in raw.transitions.iter().flatten() {
        let q = control.state(&t.from)?;
        let target = control.state(&t.to)?;
        let sym = control.alphabet.tape(&t.symbol)?;
        let guard = guard_from(t.omega.as_deref())?;
        let direction = match t.direction.as_deref() {
            None | Some("right") => Direction::Right,
            Some("stay") => Direction::Stay,
            Some(other) => {
                return Err(FormatError::Bad(format!(
                    "move must be \"stay\" or \"right\", got {other:?}"
                )))
            }
        };
        let multiplier = t.multiplier.clone().unwrap_or_else(Rational::one);
        let mv = FamMove {
            target,
            direction,
            multiplier,
        };
        if transitions.insert((q, sym, guard), mv).is_some() {
            return Err(ModelError::Nondeterministic {
                state: t.from.clone(),
                symbol: t.symbol.clone(),
            }
            .into());
        }
    }
    let multipliers = raw
        .multipliers
        .as_ref()
        .map(|v| v.iter().cloned().collect::<BTreeSet<_>>());
    Ok(MultiplyAutomaton::new(
        control,
        with_equality,
        multipliers,
        transitions,
    )?)
}

fn fam_raw(m: &MultiplyAutomaton, raw: &mut RawDoc) {
    control_raw(&m.control, raw);
    raw.multipliers = Some(m.multipliers.iter().cloned().collect());
    let transitions = m
        .transitions()
        .iter()
        .map(|((q, sym, guard), mv)| {
            let mut t = RawTransition::new(
                m.control.state_name(*q),
                m.control.alphabet.tape_name(*sym),
                m.control.state_name(mv.target),
            );
            t.omega = guard_name(*guard);
            t.direction = Some(
                match mv.direction {
                    Direction::Stay => "stay",
                    Direction::Right => "right",
                }
                .into(),
            );
            t.multiplier = Some(mv.multiplier.clone());
            t
        })
        .collect();
    raw.transitions = Some(transitions);
}

fn tufa_from(raw: &RawDoc, alphabet: Alphabet) -> Result<Machine, FormatError> {
    let v0 = raw
        .initial_vector
        .clone()
        .ok_or(FormatError::Missing("initial_vector"))?;
    let f = raw
        .final_vector
        .clone()
        .ok_or(FormatError::Missing("final_vector"))?;
    if v0.dim() == 0 {
        return Err(FormatError::Bad("initial_vector is empty".into()));
    }
    check_dim(raw.n, v0.dim(), "n")?;
    let table = raw.matrices.as_ref().ok_or(FormatError::Missing("matrices"))?;
    if let Some(extra) = table.keys().find(|s| alphabet.get(s).is_none()) {
        return Err(ModelError::UnknownSymbol(extra.clone()).into());
    }
    let matrices = alphabet
        .names()
        .iter()
        .map(|s| {
            table
                .get(s)
                .cloned()
                .ok_or_else(|| FormatError::Bad(format!("no matrix for symbol {s:?}")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let automaton = Tufa::new(alphabet, v0, matrices, f)?;
    Ok(Machine::Tufa {
        automaton,
        cutpoint: raw.lambda.clone().unwrap_or_else(Rational::one),
    })
}

fn tufa_raw(g: &Tufa, cutpoint: &Rational, raw: &mut RawDoc) {
    raw.n = Some(g.n());
    raw.initial_vector = Some(g.initial.clone());
    raw.final_vector = Some(g.final_vector.clone());
    raw.lambda = Some(cutpoint.clone());
    raw.matrices = Some(
        g.alphabet
            .names()
            .iter()
            .cloned()
            .zip(g.matrices.iter().cloned())
            .collect(),
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn parses_a_small_vector_machine() {
        let doc = MachineDoc::parse(
            r#"{
              "kind": "dva", "states": ["q"], "q0": "q", "accept": ["q"],
              "alphabet": ["a"], "dim": 1, "initial_vector": ["1"],
              "matrices": {"D": [["2"]]},
              "transitions": [{"from": "q", "symbol": "a", "to": "q", "matrix": "D"},
                              {"from": "q", "symbol": "$", "omega": "=", "to": "q", "matrix": [[1]]}]
            }"#,
        )
        .unwrap();
        assert_eq!(doc.machine.kind(), "dva");
        let again = MachineDoc::parse(&doc.to_json_string()).unwrap();
        assert_eq!(again, doc);
        assert_eq!(again.digest(), doc.digest());
    }

    #[test]
    fn reports_problems() {
        let bad_kind = json!({"kind": "pda", "alphabet": ["a"]});
        assert!(matches!(
            MachineDoc::from_value(bad_kind),
            Err(FormatError::UnknownKind(_))
        ));
        let no_states = json!({"kind": "dva", "alphabet": ["a"], "initial_vector": ["1"]});
        assert!(matches!(
            MachineDoc::from_value(no_states),
            Err(FormatError::Missing("states"))
        ));
        let err = MachineDoc::parse("{\n  \"kind\": \"dva\",\n  oops\n}").unwrap_err();
        assert!(err.to_string().contains("line 3"), "{err}");
        let bad_matrix = json!({
            "kind": "dva", "states": ["q"], "q0": "q", "alphabet": ["a"], "initial_vector": ["1"],
            "transitions": [{"from": "q", "symbol": "a", "to": "q", "matrix": "nope"}]
        });
        assert!(MachineDoc::from_value(bad_matrix).is_err());
    }

    #[test]
    fn counter_and_tufa_round_trip() {
        let counter = json!({
            "kind": "counter", "states": ["s", "t"], "q0": "s", "accept": ["t"],
            "alphabet": ["a"], "k": 2, "bound": 2, "zero_test": "per_counter",
            "transitions": [
                {"from": "s", "symbol": "a", "test": ["0", "*"], "to": "t", "increment": [2, -1]},
                {"from": "s", "symbol": "a", "test": ["!0", "*"], "to": "s", "increment": [0, 0]}
            ]
        });
        let doc = MachineDoc::from_value(counter).unwrap();
        assert_eq!(MachineDoc::parse(&doc.to_json_string()).unwrap(), doc);

        let tufa = json!({
            "kind": "tufa", "alphabet": ["a", "b"], "n": 2,
            "initial_vector": ["1", "0"], "final_vector": ["0", "1/2"], "lambda": "1/2",
            "matrices": {"a": [[0, 1], [1, 0]], "b": [["1/3", 0], [0, 1]]}
        });
        let doc = MachineDoc::from_value(tufa).unwrap();
        assert_eq!(MachineDoc::parse(&doc.to_json_string()).unwrap(), doc);
    }
}
