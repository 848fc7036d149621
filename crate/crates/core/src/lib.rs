//! Exact simulation and conversion of real-time vector automata and their
//! neighbouring machine models: multicounter automata, finite automata with
//! multiplication, and rational generalized finite automata.

pub mod diffcheck;
pub mod linalg;
pub mod machine;
pub mod transforms;
pub mod zoo;

pub use linalg::{elementary_matrix, swap_matrix, LinalgError, Rational, RowVector, SquareMatrix};
pub use machine::{
    Alphabet, CheckSpec, Configuration, CounterMachine, Guard, Machine, MachineDoc, MultiplyAutomaton,
    RunOptions, RunTrace, StateId, SymbolId, Tape, Tufa, VectorAutomaton, Verdict,
};
