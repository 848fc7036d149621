//! Conversions between generalized finite automata and blind deterministic vector machines.

use std::collections::BTreeMap;

use super::{normalize_check_value, not_applicable, TransformError};
use crate::linalg::{Rational, RowVector, SquareMatrix};
use crate::machine::{Alphabet, CheckSpec, Control, Guard, Tape, Tufa, VectorAutomaton, VectorMove};

/// One-state blind machine whose `$` step multiplies by a matrix with the
/// (rescaled) final vector as its first column, so that entry 1 of the final
/// vector is `f(w)/λ`. For `λ = 0` a constant extra coordinate turns the test
/// `f(w) = 0` into `f(w) + 1 = 1`.
pub fn tufa_to_dbva(g: &Tufa, lambda: &Rational) -> Result<VectorAutomaton, TransformError> {
    let (initial, matrices, f) = if lambda.is_zero() {
        (
            g.initial.extended(Rational::one()),
            g.matrices
                .iter()
                .map(SquareMatrix::extended_with_one)
                .collect::<Vec<_>>(),
            g.final_vector.extended(Rational::one()),
        )
    } else {
        let scale = lambda.recip()?;
        let f = RowVector::new(g.final_vector.entries().iter().map(|x| x * &scale).collect())?;
        (g.initial.clone(), g.matrices.clone(), f)
    };
    let n = initial.dim();
    let mut finish = SquareMatrix::zeros(n);
    for (i, x) in f.entries().iter().enumerate() {
        finish.set(i, 0, x.clone());
    }
    let control = Control::new(&["q"], "q", &["q"], g.alphabet.clone())?;
    let q = control.initial();
    let mut transitions = BTreeMap::new();
    for (s, mat) in g.alphabet.ids().zip(matrices) {
        transitions.insert(
            (q, Tape::Symbol(s), Guard::Any),
            vec![VectorMove {
                target: q,
                matrix: mat,
            }],
        );
    }
    transitions.insert(
        (q, Tape::Right, Guard::Any),
        vec![VectorMove {
            target: q,
            matrix: finish,
        }],
    );
    Ok(VectorAutomaton::new(
        control,
        initial,
        true,
        true,
        vec![CheckSpec::standard()],
        Rational::one(),
        transitions,
    )?)
}

/// Block construction: one `k`-sized segment per state, block `(i, j)` of
/// `A_σ` holding the matrix of the move `q_i → q_j` on `σ`. The endmarker
/// steps are folded into the initial and final vectors. Returns the automaton
/// and the cutpoint whose equality language is the machine's language.
///
/// A run that dies or ends in a rejecting state contributes 0, which is only
/// distinguishable from acceptance when the accept value is nonzero. For
/// accept value 0 the machine is first lifted to test `= 1`, unless every
/// state accepts and every move is defined.
pub fn dbva_to_tufa(m: &VectorAutomaton) -> Result<(Tufa, Rational), TransformError> {
    if !m.blind || !m.deterministic {
        return not_applicable("only blind deterministic machines have a block encoding");
    }
    let total = m.control.states().all(|q| {
        m.control.is_accepting(q)
            && m.control
                .alphabet
                .ids()
                .all(|s| m.transitions().contains_key(&(q, Tape::Symbol(s), Guard::Any)))
    });
    if m.accept_value.is_zero() && !total {
        let lifted = normalize_check_value(m)?;
        return block_encoding(&lifted);
    }
    block_encoding(m)
}

fn step(
    m: &VectorAutomaton,
    q: crate::machine::StateId,
    sym: Tape,
) -> Option<(crate::machine::StateId, SquareMatrix)> {
    match m.transitions().get(&(q, sym, Guard::Any)) {
        Some(moves) => moves.first().map(|mv| (mv.target, mv.matrix.clone())),
        None if sym.is_endmarker() => Some((q, SquareMatrix::identity(m.dim()))),
        None => None,
    }
}

fn block_encoding(m: &VectorAutomaton) -> Result<(Tufa, Rational), TransformError> {
    let k = m.dim();
    let states = m.control.num_states();
    let n = k * states;
    let mut initial = vec![Rational::zero(); n];
    if let Some((q, mat)) = step(m, m.control.initial(), Tape::Left) {
        let v = m.initial_vector.mul_mat(&mat)?;
        for (i, x) in v.into_entries().into_iter().enumerate() {
            initial[q.0 * k + i] = x;
        }
    }
    let mut final_vector = vec![Rational::zero(); n];
    for q in m.control.states() {
        if let Some((target, mat)) = step(m, q, Tape::Right) {
            if m.control.is_accepting(target) {
                for i in 0..k {
                    final_vector[q.0 * k + i] = mat.get(i, 0).clone();
                }
            }
        }
    }
    let mut matrices = Vec::with_capacity(m.control.alphabet.len());
    for s in m.control.alphabet.ids() {
        let mut big = SquareMatrix::zeros(n);
        for q in m.control.states() {
            if let Some((target, mat)) = step(m, q, Tape::Symbol(s)) {
                for r in 0..k {
                    for c in 0..k {
                        big.set(q.0 * k + r, target.0 * k + c, mat.get(r, c).clone());
                    }
                }
            }
        }
        matrices.push(big);
    }
    let alphabet: Alphabet = m.control.alphabet.clone();
    let g = Tufa::new(
        alphabet,
        RowVector::new(initial)?,
        matrices,
        RowVector::new(final_vector)?,
    )?;
    Ok((g, m.accept_value.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::{SymbolId, VectorBuilder};

    fn mod3() -> Tufa {
        let cyc = SquareMatrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        Tufa::new(
            Alphabet::new(["a"]).unwrap(),
            RowVector::from_ints(&[1, 0, 0]),
            vec![cyc],
            RowVector::from_ints(&[0, 1, 1]),
        )
        .unwrap()
    }

    #[test]
    fn forward_is_exact() {
        let g = mod3();
        let v = tufa_to_dbva(&g, &Rational::one()).unwrap();
        assert_eq!(v.control.num_states(), 1);
        assert_eq!(v.dim(), 3);
        for n in 0..10 {
            let w = vec![SymbolId(0); n];
            let t = v.run(&w).unwrap();
            let Some(crate::machine::Configuration::Vector { vector, .. }) = t.final_config() else {
                panic!()
            };
            assert_eq!(vector.entries()[0], g.eval(&w).unwrap());
            assert_eq!(t.accepted(), n % 3 != 0);
        }
        let zero = tufa_to_dbva(&g, &Rational::zero()).unwrap();
        assert_eq!(zero.dim(), 4);
        let half = tufa_to_dbva(&g, &Rational::frac(1, 2)).unwrap();
        for n in 0..7 {
            let w = vec![SymbolId(0); n];
            assert_eq!(zero.run(&w).unwrap().accepted(), n % 3 == 0);
            assert!(!half.run(&w).unwrap().accepted());
        }
    }

    #[test]
    fn one_state_machine_keeps_its_matrices() {
        let control = Control::new(&["q"], "q", &["q"], Alphabet::new(["a"]).unwrap()).unwrap();
        let m2 = SquareMatrix::from_int_rows(&[&[1, 1], &[0, 2]]);
        let mut b = VectorBuilder::new(control, RowVector::from_ints(&[1, 0])).blind();
        b.on("q", "a", Guard::Any, "q", &m2).unwrap();
        let (g, lambda) = dbva_to_tufa(&b.build().unwrap()).unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.matrices, vec![m2]);
        assert_eq!(g.final_vector, RowVector::from_ints(&[1, 0]));
        assert!(lambda.is_one());
    }

    #[test]
    fn non_blind_is_refused() {
        let control = Control::new(&["q"], "q", &["q"], Alphabet::new(["a"]).unwrap()).unwrap();
        let m = VectorBuilder::new(control, RowVector::from_ints(&[1]))
            .build()
            .unwrap();
        assert!(dbva_to_tufa(&m).is_err());
    }
}
