use crate::linalg::{mat_mul, swap_matrix, Rational, RowVector, SquareMatrix};
use crate::machine::{
    Alphabet, CheckSpec, Control, CounterBuilder, CounterGuard, CounterMachine, Direction, FamBuilder, Guard,
    ModelError, MultiplyAutomaton, Sign, Tufa, VectorAutomaton, VectorBuilder, ZeroTest,
};
use crate::transforms::first_primes;

type R<T> = Result<T, ModelError>;

fn q(s: &str) -> Rational {
    s.parse().expect("rational literal")
}

/// Matrix from string rows such as `&["1/2", "0"]`.
pub(crate) fn mat(rows: &[&[&str]]) -> SquareMatrix {
    SquareMatrix::from_rows(rows.iter().map(|r| r.iter().map(|x| q(x)).collect()).collect())
        .expect("square matrix literal")
}

fn control(states: &[&str], q0: &str, accept: &[&str], symbols: &[&str]) -> R<Control> {
    Control::new(states, q0, accept, Alphabet::new(symbols.iter().copied())?)
}

fn fib_matrices() -> (SquareMatrix, SquareMatrix) {
    let m1 = SquareMatrix::from_int_rows(&[
        &[0, 0, 0, 0, 0],
        &[1, 1, 1, 0, 0],
        &[1, 1, 0, 0, 0],
        &[-1, 0, 0, 1, 0],
        &[-1, 0, 0, 1, 1],
    ]);
    let m2 = SquareMatrix::from_int_rows(&[
        &[0, 0, 0, 0, 0],
        &[1, 1, 0, 0, 0],
        &[0, 0, 1, 0, 0],
        &[-1, 0, 0, 1, 0],
        &[-1, 0, 0, 1, 1],
    ]);
    (m1, m2)
}

/// Fibonacci lengths. The literal one-state machine also accepts the empty
/// word; the shipped machine starts in a rejecting copy of that state.
pub fn ufibonacci(literal: bool) -> R<VectorAutomaton> {
    let (m1, m2) = fib_matrices();
    let zero = CheckSpec::new(1, Rational::zero());
    let v0 = RowVector::from_ints(&[0, 1, 0, 0, 1]);
    let (states, q0): (&[&str], &str) = if literal {
        (&["q"], "q")
    } else {
        (&["start", "q"], "start")
    };
    let mut b = VectorBuilder::new(control(states, q0, &["q"], &["a"])?, v0)
        .check_all(zero)
        .accept_value(Rational::zero());
    for from in states {
        b.on(from, "a", Guard::Eq, "q", &m1)?;
        b.on(from, "a", Guard::Ne, "q", &m2)?;
    }
    b.build()
}

/// The Fibonacci machine with coordinates 1 and 3 exchanged, so it checks entry 3.
pub fn ufibonacci_entry3() -> R<VectorAutomaton> {
    let base = ufibonacci(false)?;
    let p = swap_matrix(3, 5)?;
    let mut b = VectorBuilder::new(base.control.clone(), base.initial_vector.mul_mat(&p)?)
        .check_all(CheckSpec::new(3, Rational::zero()))
        .accept_value(Rational::zero());
    for ((from, sym, guard), moves) in base.transitions() {
        for mv in moves {
            let conj = mat_mul(&mat_mul(&p, &mv.matrix)?, &p)?;
            b.on(
                base.control.state_name(*from),
                base.control.alphabet.tape_name(*sym),
                *guard,
                base.control.state_name(mv.target),
                &conj,
            )?;
        }
    }
    b.build()
}

/// `a^{n²+n}` with vector `[2^c1, 2^c2]`. In phase `B` the two coordinates are
/// stored swapped so that the watched counter always sits in entry 1.
pub fn ugauss_dva2() -> R<VectorAutomaton> {
    let c = control(&["S", "A", "B", "Acc", "Rej"], "S", &["Acc"], &["a"])?;
    let mut b = VectorBuilder::new(c, RowVector::from_ints(&[1, 1]));
    let m1 = mat(&[&["2", "0"], &["0", "1"]]);
    let m2 = mat(&[&["1/2", "0"], &["0", "2"]]);
    let a_to_b = mat(&[&["0", "2"], &["1/2", "0"]]);
    let b_to_a = mat(&[&["0", "1"], &["2", "0"]]);
    let id = SquareMatrix::identity(2);
    b.on("S", "a", Guard::Any, "A", &m1)?
        .on("S", "$", Guard::Any, "Acc", &id)?
        .on("A", "a", Guard::Ne, "A", &m2)?
        .on("A", "a", Guard::Eq, "B", &a_to_b)?
        .on("B", "a", Guard::Ne, "B", &m2)?
        .on("B", "a", Guard::Eq, "A", &b_to_a)?
        .on("A", "$", Guard::Eq, "Acc", &id)?
        .on("A", "$", Guard::Ne, "Rej", &id)?
        .on("B", "$", Guard::Any, "Rej", &id)?;
    b.build()
}

/// The same machine with entry 1 stored doubled; it tests `= 2`.
pub fn ugauss_doubled() -> R<VectorAutomaton> {
    let base = ugauss_dva2()?;
    let d = mat(&[&["2", "0"], &["0", "1"]]);
    let d_inv = mat(&[&["1/2", "0"], &["0", "1"]]);
    let two = CheckSpec::new(1, Rational::from(2));
    let mut b = VectorBuilder::new(base.control.clone(), base.initial_vector.mul_mat(&d)?)
        .check_all(two)
        .accept_value(Rational::from(2));
    for ((from, sym, guard), moves) in base.transitions() {
        for mv in moves {
            let conj = mat_mul(&mat_mul(&d_inv, &mv.matrix)?, &d)?;
            b.on(
                base.control.state_name(*from),
                base.control.alphabet.tape_name(*sym),
                *guard,
                base.control.state_name(mv.target),
                &conj,
            )?;
        }
    }
    b.build()
}

/// Two counters moving in opposite directions, swapping roles when the
/// decreasing one reaches zero.
pub fn ugauss_2ca() -> R<CounterMachine> {
    use Sign::{Any, NonZero, Zero};
    let c = control(&["S", "A", "B", "Acc", "Rej"], "S", &["Acc"], &["a"])?;
    let mut b = CounterBuilder::new(c, 2);
    let s = |x: Sign, y: Sign| CounterGuard::Signs(vec![x, y]);
    b.on("S", "a", CounterGuard::Any, "A", &[1, 0])?
        .on("S", "$", CounterGuard::Any, "Acc", &[0, 0])?
        .on("A", "a", s(NonZero, Any), "A", &[-1, 1])?
        .on("A", "a", s(Zero, Any), "B", &[1, -1])?
        .on("B", "a", s(Any, NonZero), "B", &[1, -1])?
        .on("B", "a", s(Any, Zero), "A", &[1, 0])?
        .on("A", "$", s(Zero, Any), "Acc", &[0, 0])?
        .on("A", "$", s(NonZero, Any), "Rej", &[0, 0])?
        .on("B", "$", CounterGuard::Any, "Rej", &[0, 0])?;
    b.build()
}

/// The two-counter loop above restricted to simultaneous zero tests. It can
/// no longer see either counter alone, so it accepts only the empty word.
pub fn ugauss_2ca_restricted() -> R<CounterMachine> {
    let c = control(&["S", "A", "B", "Acc", "Rej"], "S", &["S", "Acc"], &["a"])?;
    let mut b = CounterBuilder::new(c, 2)
        .zero_test(ZeroTest::SimultaneousZero)
        .accept_on_zero();
    b.on("S", "a", CounterGuard::Any, "A", &[1, 0])?
        .on("A", "a", CounterGuard::NotAllZero, "A", &[-1, 1])?
        .on("A", "a", CounterGuard::AllZero, "B", &[1, -1])?
        .on("B", "a", CounterGuard::NotAllZero, "B", &[1, -1])?
        .on("B", "a", CounterGuard::AllZero, "A", &[1, 0])?
        .on("A", "$", CounterGuard::AllZero, "Acc", &[0, 0])?
        .on("A", "$", CounterGuard::NotAllZero, "Rej", &[0, 0])?
        .on("B", "$", CounterGuard::Any, "Rej", &[0, 0])?;
    b.build()
}

/// Counts to three with increments of 2 and simultaneous zero tests.
pub fn mod3_2ca_restricted() -> R<CounterMachine> {
    let c = control(&["A"], "A", &["A"], &["a"])?;
    let mut b = CounterBuilder::new(c, 2)
        .bound(2)
        .zero_test(ZeroTest::SimultaneousZero)
        .accept_on_zero();
    b.on("A", "a", CounterGuard::AllZero, "A", &[2, 2])?.on(
        "A",
        "a",
        CounterGuard::NotAllZero,
        "A",
        &[-1, -1],
    )?;
    b.build()
}

pub fn lng_symbols(k: usize) -> Vec<String> {
    (0..=k).map(|i| format!("a{i}")).collect()
}

/// Equal counts of `a0..ak`: `ai` multiplies by the `i`-th prime and `a0`
/// divides by their product.
pub fn lng(k: usize) -> R<VectorAutomaton> {
    let symbols = lng_symbols(k);
    let syms: Vec<&str> = symbols.iter().map(String::as_str).collect();
    let mut b = VectorBuilder::new(control(&["q"], "q", &["q"], &syms)?, RowVector::from_ints(&[1]));
    let primes = first_primes(k);
    let product: i64 = primes.iter().map(|&p| p as i64).product();
    b.on(
        "q",
        "a0",
        Guard::Any,
        "q",
        &SquareMatrix::diagonal(vec![Rational::frac(1, product)]),
    )?;
    for (i, p) in primes.iter().enumerate() {
        b.on(
            "q",
            syms[i + 1],
            Guard::Any,
            "q",
            &SquareMatrix::diagonal(vec![Rational::from(*p as i64)]),
        )?;
    }
    b.build()
}

/// Blocks `a^m b^n`, `m ≥ n ≥ 1`, with entry 1 as a counter. `literal` uses
/// the printed reset followed by the increment on the first `a` of a block.
pub fn geqstar_dva2(literal: bool) -> R<VectorAutomaton> {
    let c = control(&["S", "InA", "InB", "Dead"], "S", &["S", "InB"], &["a", "b"])?;
    let mut b = VectorBuilder::new(c, RowVector::from_ints(&[0, 1]))
        .check_all(CheckSpec::new(1, Rational::zero()))
        .accept_value(Rational::zero());
    let ma = SquareMatrix::from_int_rows(&[&[1, 0], &[1, 1]]);
    let mb = SquareMatrix::from_int_rows(&[&[1, 0], &[-1, 1]]);
    let printed_reset = SquareMatrix::from_int_rows(&[&[0, 0], &[1, 1]]);
    let true_reset = SquareMatrix::from_int_rows(&[&[0, 0], &[0, 1]]);
    let restart = if literal {
        mat_mul(&printed_reset, &ma).map_err(ModelError::from)?
    } else {
        mat_mul(&true_reset, &ma).map_err(ModelError::from)?
    };
    let id = SquareMatrix::identity(2);
    b.on("S", "a", Guard::Any, "InA", &ma)?
        .on("S", "b", Guard::Any, "Dead", &id)?
        .on("InA", "a", Guard::Any, "InA", &ma)?
        .on("InA", "b", Guard::Eq, "Dead", &id)?
        .on("InA", "b", Guard::Ne, "InB", &mb)?
        .on("InB", "b", Guard::Eq, "Dead", &id)?
        .on("InB", "b", Guard::Ne, "InB", &mb)?
        .on("InB", "a", Guard::Any, "InA", &restart)?
        .on("InA", "$", Guard::Any, "Dead", &id)?
        .on("InB", "$", Guard::Any, "InB", &true_reset)?
        .on("Dead", "a", Guard::Any, "Dead", &id)?
        .on("Dead", "b", Guard::Any, "Dead", &id)?;
    b.build()
}

/// The same language on a one-way register machine: powers of two count, and
/// the head pauses at block boundaries while the register drains back to 1.
pub fn geqstar_fam() -> R<MultiplyAutomaton> {
    use Direction::{Right, Stay};
    let c = control(
        &["S", "InA", "InB", "Acc", "Dead"],
        "S",
        &["S", "Acc"],
        &["a", "b"],
    )?;
    let mut b = FamBuilder::new(c, true);
    let (one, two, half) = (Rational::one(), Rational::from(2), Rational::frac(1, 2));
    b.on("S", "a", Guard::Any, "InA", Right, two.clone())?
        .on("S", "b", Guard::Any, "Dead", Right, one.clone())?
        .on("InA", "a", Guard::Any, "InA", Right, two.clone())?
        .on("InA", "b", Guard::Eq, "Dead", Right, one.clone())?
        .on("InA", "b", Guard::Ne, "InB", Right, half.clone())?
        .on("InA", "$", Guard::Any, "Dead", Right, one.clone())?
        .on("InB", "b", Guard::Eq, "Dead", Right, one.clone())?
        .on("InB", "b", Guard::Ne, "InB", Right, half.clone())?
        .on("InB", "a", Guard::Eq, "InA", Right, two)?
        .on("InB", "a", Guard::Ne, "InB", Stay, half.clone())?
        .on("InB", "$", Guard::Ne, "InB", Stay, half)?
        .on("InB", "$", Guard::Eq, "Acc", Right, one.clone())?
        .on("Dead", "a", Guard::Any, "Dead", Right, one.clone())?
        .on("Dead", "b", Guard::Any, "Dead", Right, one)?;
    b.build()
}

/// `u c reverse(u)`: `u` is written as a decimal number with digits 1 and 2
/// and then peeled off digit by digit. Every state accepts; wrong shapes are
/// rejected through the value, by parking the vector at `[1, 1]`.
pub fn mpal_dbva2() -> R<VectorAutomaton> {
    let c = control(&["W", "R", "Dead"], "W", &["W", "R", "Dead"], &["a", "b", "c"])?;
    let mut b = VectorBuilder::new(c, RowVector::from_ints(&[0, 1]))
        .blind()
        .accept_value(Rational::zero());
    let push_a = mat(&[&["10", "0"], &["1", "1"]]);
    let push_b = mat(&[&["10", "0"], &["2", "1"]]);
    let pop_a = mat(&[&["1/10", "0"], &["-1/10", "1"]]);
    let pop_b = mat(&[&["1/10", "0"], &["-2/10", "1"]]);
    let park = mat(&[&["0", "0"], &["1", "1"]]);
    let id = SquareMatrix::identity(2);
    b.on("W", "a", Guard::Any, "W", &push_a)?
        .on("W", "b", Guard::Any, "W", &push_b)?
        .on("W", "c", Guard::Any, "R", &id)?
        .on("W", "$", Guard::Any, "Dead", &park)?
        .on("R", "a", Guard::Any, "R", &pop_a)?
        .on("R", "b", Guard::Any, "R", &pop_b)?
        .on("R", "c", Guard::Any, "Dead", &park)?;
    for s in ["a", "b", "c"] {
        b.on("Dead", s, Guard::Any, "Dead", &park)?;
    }
    b.build()
}

/// `a^i` with `i mod k ≠ 0` at cutpoint 1.
pub fn mod_tufa(k: usize) -> R<Tufa> {
    let mut shift = SquareMatrix::zeros(k);
    for i in 0..k {
        shift.set(i, (i + 1) % k, Rational::one());
    }
    let mut f = vec![Rational::one(); k];
    f[0] = Rational::zero();
    Tufa::new(
        Alphabet::new(["a"])?,
        RowVector::unit(k, 0),
        vec![shift],
        RowVector::new(f)?,
    )
}

/// `t#a1#...#an#`: `t` goes into entry 1, each guessed `a_i` into entry 2,
/// which is then subtracted from entry 1 and cleared in the same step.
/// `literal` subtracts without clearing.
pub fn subsetsum_nbva3(literal: bool) -> R<VectorAutomaton> {
    let c = control(
        &["T0", "T", "B0", "B", "Sel", "Skip"],
        "T0",
        &["B"],
        &["0", "1", "#"],
    )?;
    let mut b = VectorBuilder::new(c, RowVector::from_ints(&[0, 0, 1]))
        .nondeterministic()
        .blind()
        .accept_value(Rational::zero());
    let m = [
        SquareMatrix::from_int_rows(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        SquareMatrix::from_int_rows(&[&[2, 0, 0], &[0, 1, 0], &[1, 0, 1]]),
    ];
    let n = [
        SquareMatrix::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 0, 1]]),
        SquareMatrix::from_int_rows(&[&[1, 0, 0], &[0, 2, 0], &[0, 1, 1]]),
    ];
    let subtract = if literal {
        SquareMatrix::from_int_rows(&[&[1, 0, 0], &[-1, 1, 0], &[0, 0, 1]])
    } else {
        SquareMatrix::from_int_rows(&[&[1, 0, 0], &[-1, 0, 0], &[0, 0, 1]])
    };
    let id = SquareMatrix::identity(3);
    for (d, digit) in ["0", "1"].into_iter().enumerate() {
        b.on("T0", digit, Guard::Any, "T", &m[d])?
            .on("T", digit, Guard::Any, "T", &m[d])?;
        for start in ["B0", "B"] {
            b.on(start, digit, Guard::Any, "Sel", &n[d])?
                .on(start, digit, Guard::Any, "Skip", &id)?;
        }
        b.on("Sel", digit, Guard::Any, "Sel", &n[d])?
            .on("Skip", digit, Guard::Any, "Skip", &id)?;
    }
    b.on("T", "#", Guard::Any, "B0", &id)?
        .on("Sel", "#", Guard::Any, "B", &subtract)?
        .on("Skip", "#", Guard::Any, "B", &id)?;
    b.build()
}

/// `a^{k+2^k}`, `k ≥ 1`: double for a guessed `k` steps, then count down.
/// `literal` lets the countdown start before the first doubling.
pub fn pow_nbva2(literal: bool) -> R<VectorAutomaton> {
    let c = control(&["S0", "S1", "S2"], "S0", &["S1", "S2"], &["a"])?;
    let mut b = VectorBuilder::new(c, RowVector::from_ints(&[1, 1]))
        .nondeterministic()
        .blind()
        .accept_value(Rational::zero());
    let m1 = SquareMatrix::from_int_rows(&[&[2, 0], &[0, 1]]);
    let m2 = SquareMatrix::from_int_rows(&[&[1, 0], &[-1, 1]]);
    b.on("S0", "a", Guard::Any, "S1", &m1)?
        .on("S1", "a", Guard::Any, "S1", &m1)?
        .on("S1", "a", Guard::Any, "S2", &m2)?
        .on("S2", "a", Guard::Any, "S2", &m2)?;
    if literal {
        b.on("S0", "a", Guard::Any, "S2", &m2)?;
    }
    b.build()
}

/// One-way register machine without equality tests that pauses: each `a`
/// doubles twice on the same cell, each `b` halves, and an `a` after a `b`
/// enters a pausing loop.
pub fn famw_pausing() -> R<MultiplyAutomaton> {
    use Direction::{Right, Stay};
    let c = control(&["P", "Pa", "Bst", "L1", "L2"], "P", &["P", "Bst"], &["a", "b"])?;
    let mut b = FamBuilder::new(c, false);
    b.on("P", "a", Guard::Any, "Pa", Stay, Rational::from(2))?
        .on("Pa", "a", Guard::Any, "P", Right, Rational::from(2))?
        .on("P", "b", Guard::Any, "Bst", Right, Rational::frac(1, 2))?
        .on("Bst", "b", Guard::Any, "Bst", Right, Rational::frac(1, 2))?
        .on("Bst", "a", Guard::Any, "L1", Stay, Rational::one())?
        .on("L1", "a", Guard::Any, "L2", Stay, Rational::from(3))?
        .on("L2", "a", Guard::Any, "L1", Stay, Rational::frac(1, 3))?;
    b.build()
}
