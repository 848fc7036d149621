use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use super::ModelError;

pub const LEFT_END: &str = "¢";
pub const RIGHT_END: &str = "$";

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct StateId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize)]
#[serde(transparent)]
pub struct SymbolId(pub usize);

/// A tape cell: one of the two endmarkers or an input symbol.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Tape {
    Left,
    Symbol(SymbolId),
    Right,
}

impl Tape {
    pub fn is_endmarker(self) -> bool {
        !matches!(self, Tape::Symbol(_))
    }
}

/// Finite input alphabet. Symbols are nonempty strings; the endmarkers are reserved.
#[derive(Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<String>,
    index: HashMap<String, SymbolId>,
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self, ModelError> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        let mut index = HashMap::new();
        for (i, s) in symbols.iter().enumerate() {
            if s.is_empty() || s.chars().any(char::is_whitespace) {
                return Err(ModelError::Invalid(format!("bad symbol name {s:?}")));
            }
            if s == LEFT_END || s == RIGHT_END {
                return Err(ModelError::ReservedSymbol(s.clone()));
            }
            if index.insert(s.clone(), SymbolId(i)).is_some() {
                return Err(ModelError::Duplicate(s.clone()));
            }
        }
        Ok(Alphabet { symbols, index })
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        (0..self.symbols.len()).map(SymbolId)
    }

    pub fn names(&self) -> &[String] {
        &self.symbols
    }

    pub fn name(&self, id: SymbolId) -> &str {
        &self.symbols[id.0]
    }

    pub fn get(&self, name: &str) -> Option<SymbolId> {
        self.index.get(name).copied()
    }

    pub fn symbol(&self, name: &str) -> Result<SymbolId, ModelError> {
        self.get(name)
            .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))
    }

    /// Resolves a tape cell name, accepting the endmarker names.
    pub fn tape(&self, name: &str) -> Result<Tape, ModelError> {
        match name {
            LEFT_END => Ok(Tape::Left),
            RIGHT_END => Ok(Tape::Right),
            _ => self.symbol(name).map(Tape::Symbol),
        }
    }

    pub fn tape_name(&self, t: Tape) -> &str {
        match t {
            Tape::Left => LEFT_END,
            Tape::Right => RIGHT_END,
            Tape::Symbol(s) => self.name(s),
        }
    }

    /// Splits `input` into symbols. Whitespace separates tokens; inside a token
    /// the longest matching symbol name is taken first.
    pub fn tokenize(&self, input: &str) -> Result<Vec<SymbolId>, ModelError> {
        let longest = self.symbols.iter().map(String::len).max().unwrap_or(0);
        let mut out = Vec::new();
        for token in input.split_whitespace() {
            let mut rest = token;
            'outer: while !rest.is_empty() {
                let mut n = longest.min(rest.len());
                while n > 0 {
                    if let Some(prefix) = rest.get(..n) {
                        if let Some(id) = self.get(prefix) {
                            out.push(id);
                            rest = &rest[n..];
                            continue 'outer;
                        }
                    }
                    n -= 1;
                }
                return Err(ModelError::UnknownSymbol(rest.to_string()));
            }
        }
        Ok(out)
    }

    pub fn render(&self, word: &[SymbolId]) -> String {
        word.iter().map(|&s| self.name(s)).collect()
    }

    pub fn word_names<'a>(&'a self, word: &[SymbolId]) -> Vec<&'a str> {
        word.iter().map(|&s| self.name(s)).collect()
    }

    pub fn contains_all(&self, other: &Alphabet) -> bool {
        other.symbols.iter().all(|s| self.index.contains_key(s))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.symbols).finish()
    }
}

/// The finite-state part shared by every machine family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Control {
    states: Vec<String>,
    initial: StateId,
    accepting: BTreeSet<StateId>,
    pub alphabet: Alphabet,
}

impl Control {
    pub fn new<S: AsRef<str>>(
        states: &[S],
        initial: &str,
        accepting: &[S],
        alphabet: Alphabet,
    ) -> Result<Self, ModelError> {
        let names: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        if names.is_empty() {
            return Err(ModelError::Invalid("a machine needs at least one state".into()));
        }
        let mut seen = BTreeSet::new();
        for n in &names {
            if !seen.insert(n.as_str()) {
                return Err(ModelError::Duplicate(n.clone()));
            }
        }
        let mut control = Control {
            states: names,
            initial: StateId(0),
            accepting: BTreeSet::new(),
            alphabet,
        };
        control.initial = control.state(initial)?;
        for a in accepting {
            let id = control.state(a.as_ref())?;
            control.accepting.insert(id);
        }
        Ok(control)
    }

    pub fn from_parts(
        states: Vec<String>,
        initial: StateId,
        accepting: BTreeSet<StateId>,
        alphabet: Alphabet,
    ) -> Self {
        Control {
            states,
            initial,
            accepting,
            alphabet,
        }
    }

    pub fn state(&self, name: &str) -> Result<StateId, ModelError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0]
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        (0..self.states.len()).map(StateId)
    }

    pub fn initial(&self) -> StateId {
        self.initial
    }

    pub fn is_accepting(&self, q: StateId) -> bool {
        self.accepting.contains(&q)
    }

    pub fn accepting(&self) -> &BTreeSet<StateId> {
        &self.accepting
    }

    /// The tape for `word`: `¢ w $`.
    pub fn tape(word: &[SymbolId]) -> impl Iterator<Item = Tape> + '_ {
        std::iter::once(Tape::Left)
            .chain(word.iter().map(|&s| Tape::Symbol(s)))
            .chain(std::iter::once(Tape::Right))
    }
}
