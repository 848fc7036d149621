use super::{
    Alphabet, Configuration, ModelError, RunTrace, SimError, Step, StepDetail, SymbolId, Tape, Verdict,
};
use crate::linalg::{Rational, RowVector, SquareMatrix};

/// Rational generalized finite automaton: `f(w) = v0 · A_{w1} ··· A_{wn} · f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tufa {
    pub alphabet: Alphabet,
    pub initial: RowVector,
    /// Indexed by symbol id.
    pub matrices: Vec<SquareMatrix>,
    /// The final column vector, stored as its entries.
    pub final_vector: RowVector,
}

impl Tufa {
    pub fn new(
        alphabet: Alphabet,
        initial: RowVector,
        matrices: Vec<SquareMatrix>,
        final_vector: RowVector,
    ) -> Result<Self, ModelError> {
        let n = initial.dim();
        if final_vector.dim() != n {
            return Err(ModelError::Dimension {
                expected: n,
                found: final_vector.dim(),
            });
        }
        if matrices.len() != alphabet.len() {
            return Err(ModelError::Invalid(format!(
                "{} matrices for an alphabet of {} symbols",
                matrices.len(),
                alphabet.len()
            )));
        }
        if let Some(m) = matrices.iter().find(|m| m.dim() != n) {
            return Err(ModelError::Dimension {
                expected: n,
                found: m.dim(),
            });
        }
        Ok(Tufa {
            alphabet,
            initial,
            matrices,
            final_vector,
        })
    }

    /// Number of states.
    pub fn n(&self) -> usize {
        self.initial.dim()
    }

    pub fn matrix(&self, s: SymbolId) -> &SquareMatrix {
        &self.matrices[s.0]
    }

    /// The row vector `v0 · A_w` before the final product.
    pub fn weights(&self, word: &[SymbolId]) -> Result<RowVector, SimError> {
        let mut v = self.initial.clone();
        for &s in word {
            if s.0 >= self.matrices.len() {
                return Err(ModelError::Invalid(format!("symbol index {} outside the alphabet", s.0)).into());
            }
            v = v.mul_mat(&self.matrices[s.0])?;
        }
        Ok(v)
    }

    pub fn eval(&self, word: &[SymbolId]) -> Result<Rational, SimError> {
        Ok(self.weights(word)?.dot(&self.final_vector)?)
    }

    pub fn member(&self, lambda: &Rational, word: &[SymbolId]) -> Result<bool, SimError> {
        Ok(&self.eval(word)? == lambda)
    }

    /// Per-symbol trace of the weight vector, closed by a `$` step carrying the value.
    pub fn trace(&self, lambda: &Rational, word: &[SymbolId]) -> Result<RunTrace, SimError> {
        let mut v = self.initial.clone();
        let mut steps = Vec::with_capacity(word.len() + 1);
        for (i, &s) in word.iter().enumerate() {
            v = v.mul_mat(self.matrices.get(s.0).ok_or_else(|| {
                ModelError::Invalid(format!("symbol index {} outside the alphabet", s.0))
            })?)?;
            steps.push(Step {
                position: i + 1,
                symbol: Tape::Symbol(s),
                detail: StepDetail::Config(Configuration::Weights(v.clone())),
            });
        }
        let value = v.dot(&self.final_vector)?;
        let verdict = if &value == lambda {
            Verdict::Accept
        } else {
            Verdict::Reject
        };
        steps.push(Step {
            position: word.len() + 1,
            symbol: Tape::Right,
            detail: StepDetail::Config(Configuration::Value(value)),
        });
        Ok(RunTrace {
            initial: Some(Configuration::Weights(self.initial.clone())),
            steps,
            verdict,
            halt: None,
        })
    }
}
