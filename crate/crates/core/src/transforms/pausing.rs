use std::collections::BTreeMap;

use super::{not_applicable, TransformError};
use crate::linalg::{Rational, RowVector, SquareMatrix};
use crate::machine::{
    CheckSpec, Control, Guard, MultiplyAutomaton, Pause, StateId, Tape, VectorAutomaton, VectorMove,
};

/// Compiles a one-way register machine without equality tests into a blind
/// real-time machine of dimension 1. Each `(state, cell)` pair is replaced by
/// the product of multipliers applied while the head pauses there; pauses
/// that loop or hit an undefined move go to a fresh rejecting sink.
pub fn famw_to_rtdbva1(m: &MultiplyAutomaton) -> Result<VectorAutomaton, TransformError> {
    if m.with_equality {
        return not_applicable(
            "machine tests its register; only the variant without equality tests compiles",
        );
    }
    let mut names = m.control.state_names().to_vec();
    let mut sink = String::from("dead");
    while names.contains(&sink) {
        sink.push('\'');
    }
    names.push(sink);
    let dead = StateId(names.len() - 1);
    let control = Control::from_parts(
        names,
        m.control.initial(),
        m.control.accepting().clone(),
        m.control.alphabet.clone(),
    );
    let cells: Vec<Tape> = std::iter::once(Tape::Left)
        .chain(m.control.alphabet.ids().map(Tape::Symbol))
        .chain(std::iter::once(Tape::Right))
        .collect();
    let mut transitions = BTreeMap::new();
    for q in m.control.states() {
        for &sym in &cells {
            let (target, product) = match m.pause_closure(q, sym) {
                Pause::Exit { exit, product } => (exit, product),
                Pause::Loop | Pause::Undefined => (dead, Rational::one()),
            };
            transitions.insert(
                (q, sym, Guard::Any),
                vec![VectorMove {
                    target,
                    matrix: SquareMatrix::diagonal(vec![product]),
                }],
            );
        }
    }
    for &sym in &cells {
        transitions.insert(
            (dead, sym, Guard::Any),
            vec![VectorMove {
                target: dead,
                matrix: SquareMatrix::identity(1),
            }],
        );
    }
    let n = control.num_states();
    Ok(VectorAutomaton::new(
        control,
        RowVector::from_ints(&[1]),
        true,
        true,
        vec![CheckSpec::standard(); n],
        Rational::one(),
        transitions,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{Alphabet, Direction, FamBuilder};

    #[test]
    fn pausing_doubles_compile_to_four() {
        let control = Control::new(&["p", "r"], "p", &["p"], Alphabet::new(["a"]).unwrap()).unwrap();
        let mut b = FamBuilder::new(control, false);
        b.on("p", "a", Guard::Any, "r", Direction::Stay, Rational::from(2))
            .unwrap();
        b.on("r", "a", Guard::Any, "p", Direction::Right, Rational::from(2))
            .unwrap();
        let fam = b.build().unwrap();
        let v = famw_to_rtdbva1(&fam).unwrap();
        let a = fam.control.alphabet.symbol("a").unwrap();
        let t = v.run(&[a, a]).unwrap();
        assert_eq!(t.steps.len(), 4);
        assert_eq!(
            t.final_config(),
            Some(&crate::machine::Configuration::Vector {
                state: StateId(0),
                vector: RowVector::from_ints(&[16])
            })
        );
        for n in 0..8 {
            let w = vec![a; n];
            assert_eq!(
                v.run(&w).unwrap().accepted(),
                fam.run(&w, 1000).unwrap().accepted()
            );
        }
    }

    #[test]
    fn equality_tests_are_refused() {
        let control = Control::new(&["p"], "p", &["p"], Alphabet::new(["a"]).unwrap()).unwrap();
        let fam = FamBuilder::new(control, true).build().unwrap();
        assert!(famw_to_rtdbva1(&fam).is_err());
    }
}
