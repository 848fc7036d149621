use std::collections::BTreeMap;

use super::{not_applicable, TransformError};
use crate::linalg::{elementary_matrix, mat_mul, swap_matrix, Rational, SquareMatrix};
use crate::machine::{CheckSpec, VectorAutomaton, VectorMove};

fn rebuild(
    m: &VectorAutomaton,
    initial: crate::linalg::RowVector,
    checks: Vec<CheckSpec>,
    accept_value: Rational,
    mut rewrite: impl FnMut(crate::machine::StateId, &VectorMove) -> Result<SquareMatrix, TransformError>,
) -> Result<VectorAutomaton, TransformError> {
    let mut transitions = BTreeMap::new();
    for (key, moves) in m.transitions() {
        let rewritten = moves
            .iter()
            .map(|mv| {
                Ok(VectorMove {
                    target: mv.target,
                    matrix: rewrite(key.0, mv)?,
                })
            })
            .collect::<Result<Vec<_>, TransformError>>()?;
        transitions.insert(*key, rewritten);
    }
    Ok(VectorAutomaton::new(
        m.control.clone(),
        initial,
        m.deterministic,
        m.blind,
        checks,
        accept_value,
        transitions,
    )?)
}

/// Moves every state's checked entry to position 1 by conjugating with swap
/// matrices: the vector is stored as `v·J_q` while in state `q`, and a move
/// `q → q'` by `M` becomes `J_q·M·J_q'`.
pub fn normalize_check_entry(m: &VectorAutomaton) -> Result<VectorAutomaton, TransformError> {
    if m.blind {
        return not_applicable("blind machines have no per-state checks");
    }
    let k = m.dim();
    let swaps = m
        .checks
        .iter()
        .map(|c| swap_matrix(c.entry, k))
        .collect::<Result<Vec<_>, _>>()?;
    let initial = m.initial_vector.mul_mat(&swaps[m.control.initial().0])?;
    let checks = m
        .checks
        .iter()
        .map(|c| CheckSpec::new(1, c.constant.clone()))
        .collect();
    rebuild(m, initial, checks, m.accept_value.clone(), |q, mv| {
        Ok(mat_mul(&mat_mul(&swaps[q.0], &mv.matrix)?, &swaps[mv.target.0])?)
    })
}

/// The common constant every state compares entry 1 with. Blind machines only
/// compare at the end, against `accept_value`.
fn uniform_constant(m: &VectorAutomaton) -> Result<Rational, TransformError> {
    if m.blind {
        return Ok(m.accept_value.clone());
    }
    if m.checks.iter().any(|c| c.entry != 1) {
        return not_applicable("every state must check entry 1; run normalize_check_entry first");
    }
    let c = m.checks[0].constant.clone();
    if m.checks.iter().any(|x| x.constant != c) {
        return not_applicable("states compare entry 1 against different constants");
    }
    Ok(c)
}

/// Lifts a machine testing `entry 1 = c` to dimension `k+1` testing `= 1`.
/// The extra coordinate is constantly 1 and is used to keep entry 1 shifted by `1-c`.
pub fn normalize_check_value(m: &VectorAutomaton) -> Result<VectorAutomaton, TransformError> {
    let c = uniform_constant(m)?;
    let k1 = m.dim() + 1;
    let shift = &Rational::one() - &c;
    let down = elementary_matrix(k1, k1, shift.clone())?;
    let up = elementary_matrix(k1, k1, -shift.clone())?;
    let initial = m.initial_vector.extended(Rational::one()).mul_mat(&down)?;
    let checks = vec![CheckSpec::standard(); m.control.num_states()];
    let accept_value = &m.accept_value + &shift;
    rebuild(m, initial, checks, accept_value, |_, mv| {
        Ok(mat_mul(&mat_mul(&up, &mv.matrix.extended_with_one())?, &down)?)
    })
}

/// Same-dimension alternative for a nonzero constant `c`: entry 1 is stored divided by `c`.
pub fn normalize_check_value_multiplicative(m: &VectorAutomaton) -> Result<VectorAutomaton, TransformError> {
    let c = uniform_constant(m)?;
    if c.is_zero() {
        return not_applicable("the check constant is 0; use normalize_check_value instead");
    }
    let k = m.dim();
    let scale_up = elementary_matrix(1, k, c.clone())?;
    let scale_down = elementary_matrix(1, k, c.recip()?)?;
    let initial = m.initial_vector.mul_mat(&scale_down)?;
    let checks = vec![CheckSpec::standard(); m.control.num_states()];
    let accept_value = m.accept_value.checked_div(&c)?;
    rebuild(m, initial, checks, accept_value, |_, mv| {
        Ok(mat_mul(&mat_mul(&scale_up, &mv.matrix)?, &scale_down)?)
    })
}
