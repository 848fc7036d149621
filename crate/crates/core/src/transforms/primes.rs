//! Prime encodings between one-dimensional vector machines and counter machines.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::{not_applicable, TransformError};
use crate::linalg::{Rational, RowVector, SquareMatrix};
use crate::machine::{
    CheckSpec, CounterGuard, CounterMachine, CounterMove, Guard, VectorAutomaton, VectorMove, ZeroTest,
};

/// The first `k` primes.
pub fn first_primes(k: usize) -> Vec<u64> {
    let mut out: Vec<u64> = Vec::with_capacity(k);
    let mut n = 2u64;
    while out.len() < k {
        if out
            .iter()
            .take_while(|p| *p * *p <= n)
            .all(|p| !n.is_multiple_of(*p))
        {
            out.push(n);
        }
        n += 1;
    }
    out
}

fn prime_factors(n: &BigInt, into: &mut BTreeSet<u64>) {
    let mut n = n.abs();
    let mut p = 2u64;
    while BigInt::from(p) * BigInt::from(p) <= n {
        let bp = BigInt::from(p);
        if n.is_multiple_of(&bp) {
            into.insert(p);
            while n.is_multiple_of(&bp) {
                n /= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        into.insert(
            n.to_u64()
                .expect("cofactor below the square of a u64 trial divisor"),
        );
    }
}

/// Exponent of each prime in `x`, or `None` if `x` has other prime factors,
/// is negative, or is zero.
pub fn prime_exponents(x: &Rational, primes: &[u64]) -> Option<Vec<i64>> {
    if !x.numer().is_positive() {
        return None;
    }
    let mut exps = vec![0i64; primes.len()];
    let mut num = x.numer().clone();
    let mut den = x.denom().clone();
    for (e, &p) in exps.iter_mut().zip(primes) {
        let bp = BigInt::from(p);
        while num.is_multiple_of(&bp) {
            num /= &bp;
            *e += 1;
        }
        while den.is_multiple_of(&bp) {
            den /= &bp;
            *e -= 1;
        }
    }
    (num.is_one() && den.is_one()).then_some(exps)
}

/// Ascending primes dividing some numerator or denominator of the machine's multipliers.
pub fn factor_base(m: &VectorAutomaton) -> Vec<u64> {
    let mut set = BTreeSet::new();
    for mat in m.matrices() {
        let x = mat.get(0, 0);
        prime_factors(x.numer(), &mut set);
        prime_factors(x.denom(), &mut set);
    }
    set.into_iter().collect()
}

/// Simulates a one-dimensional vector machine with one counter per prime of
/// its factor base; the vector value is always `Π p_i^{c_i}`. Returns the
/// counter machine and the primes in counter order.
pub fn dva1_to_counter_machine(m: &VectorAutomaton) -> Result<(CounterMachine, Vec<u64>), TransformError> {
    if m.dim() != 1 {
        return not_applicable(format!("expected dimension 1, found {}", m.dim()));
    }
    if !m.deterministic {
        return not_applicable("machine is nondeterministic");
    }
    if !m.initial_vector.entries()[0].is_one() {
        return not_applicable("initial vector must be [1] so that it encodes empty counters");
    }
    if !m.accept_value.is_one() || (!m.blind && m.checks.iter().any(|c| !c.is_standard())) {
        return not_applicable("machine must test entry 1 against 1; normalize it first");
    }
    if let Some(z) = m.matrices().find(|x| x.get(0, 0).is_zero()) {
        return Err(TransformError::NotRepresentable(format!(
            "multiplier {:?} is zero and has no prime encoding",
            z
        )));
    }
    let primes = factor_base(m);
    let mut transitions: BTreeMap<_, Vec<_>> = BTreeMap::new();
    let mut bound = 1i64;
    for ((q, sym, guard), moves) in m.transitions() {
        let g = match guard {
            Guard::Any => CounterGuard::Any,
            Guard::Eq => CounterGuard::AllZero,
            Guard::Ne => CounterGuard::NotAllZero,
        };
        for mv in moves {
            let x = mv.matrix.get(0, 0);
            let increment = prime_exponents(x, &primes)
                .ok_or_else(|| TransformError::NotRepresentable(format!("multiplier {x} is negative")))?;
            bound = increment.iter().map(|d| d.abs()).fold(bound, i64::max);
            transitions.entry((*q, *sym)).or_default().push((
                g.clone(),
                CounterMove {
                    target: mv.target,
                    increment,
                },
            ));
        }
    }
    let machine = CounterMachine::new(
        m.control.clone(),
        primes.len(),
        m.blind,
        bound,
        ZeroTest::SimultaneousZero,
        true,
        transitions,
    )?;
    Ok((machine, primes))
}

/// The reverse simulation with the first `k` primes. Only machines that test
/// all counters for zero simultaneously (or never test) are covered.
pub fn counter_machine_to_dva1(m: &CounterMachine) -> Result<VectorAutomaton, TransformError> {
    let dispatches_per_counter = m
        .transitions()
        .values()
        .flatten()
        .any(|(g, _)| matches!(g, CounterGuard::Signs(_)));
    if dispatches_per_counter {
        return not_applicable("machine dispatches on individual counter signs");
    }
    if !m.accept_on_zero {
        return not_applicable(
            "acceptance ignores the counters; a one-dimensional vector cannot express that",
        );
    }
    let primes = first_primes(m.counters);
    let mut transitions: BTreeMap<_, Vec<_>> = BTreeMap::new();
    for ((q, sym), moves) in m.transitions() {
        for (g, mv) in moves {
            let guard = match g {
                CounterGuard::Any => Guard::Any,
                CounterGuard::AllZero => Guard::Eq,
                CounterGuard::NotAllZero => Guard::Ne,
                CounterGuard::Signs(_) => unreachable!("rejected above"),
            };
            let mut x = Rational::one();
            for (&p, &d) in primes.iter().zip(&mv.increment) {
                let pd = Rational::from(p as i64).pow(d as i32)?;
                x = &x * &pd;
            }
            transitions
                .entry((*q, *sym, guard))
                .or_default()
                .push(VectorMove {
                    target: mv.target,
                    matrix: SquareMatrix::diagonal(vec![x]),
                });
        }
    }
    Ok(VectorAutomaton::new(
        m.control.clone(),
        RowVector::from_ints(&[1]),
        true,
        m.blind,
        vec![CheckSpec::standard(); m.control.num_states()],
        Rational::one(),
        transitions,
    )?)
}
