//! Property tests over randomly generated machines. Each machine is drawn
//! from a ChaCha8 stream seeded by proptest, so failures shrink to a seed.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rtva::diffcheck::{enumerate_words, equivalence_test, sample_words, step_sync_probe, word_count, Words};
use rtva::machine::{
    Control, CounterBuilder, CounterGuard, Direction, FamBuilder, VectorBuilder, ZeroTest, LEFT_END,
    RIGHT_END,
};
use rtva::transforms::{
    counter_machine_to_dva1, dbva_to_tufa, dva1_to_counter_machine, famw_to_rtdbva1, first_primes,
    normalize_check_entry, normalize_check_value, normalize_check_value_multiplicative, tufa_to_dbva,
};
use rtva::{
    linalg::mat_mul, swap_matrix, Alphabet, CheckSpec, Configuration, CounterMachine, Guard, Machine,
    MachineDoc, MultiplyAutomaton, Rational, RowVector, RunOptions, SquareMatrix, SymbolId, Tufa,
    VectorAutomaton,
};

const TAPE: [&str; 4] = [LEFT_END, "a", "b", RIGHT_END];

fn ab() -> Alphabet {
    Alphabet::new(["a", "b"]).unwrap()
}

fn word(ixs: &[usize]) -> Vec<SymbolId> {
    ixs.iter().map(|&i| SymbolId(i)).collect()
}

fn small(rng: &mut ChaCha8Rng) -> Rational {
    Rational::frac(rng.random_range(-2..=2), rng.random_range(1..=2))
}

fn random_matrix(rng: &mut ChaCha8Rng, k: usize) -> SquareMatrix {
    let rows = (0..k).map(|_| (0..k).map(|_| small(rng)).collect()).collect();
    SquareMatrix::from_rows(rows).unwrap()
}

fn random_vector(rng: &mut ChaCha8Rng, k: usize) -> RowVector {
    RowVector::new((0..k).map(|_| small(rng)).collect()).unwrap()
}

fn random_control(rng: &mut ChaCha8Rng, n: usize) -> (Vec<String>, Control) {
    let names: Vec<String> = (0..n).map(|i| format!("q{i}")).collect();
    let accepting: Vec<String> = names.iter().filter(|_| rng.random_bool(0.5)).cloned().collect();
    let control = Control::new(&names, "q0", &accepting, ab()).unwrap();
    (names, control)
}

#[derive(Clone, Copy)]
enum Checks {
    /// Per-state entry and constant.
    Mixed,
    /// Every state checks entry `e` against the same constant.
    Uniform { entry: Option<usize>, nonzero: bool },
}

struct Shape {
    blind: bool,
    deterministic: bool,
    checks: Checks,
}

/// Symbol moves are always defined, so deterministic runs never halt early.
/// Endmarker moves are sometimes left to the identity default.
fn random_vector_machine(seed: u64, shape: Shape) -> VectorAutomaton {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=3);
    let k = rng.random_range(1..=3);
    let (names, control) = random_control(rng, n);
    let mut b = VectorBuilder::new(control, random_vector(rng, k)).accept_value(small(rng));
    if shape.blind {
        b = b.blind();
    }
    if !shape.deterministic {
        b = b.nondeterministic();
    }
    match shape.checks {
        Checks::Mixed => {
            for q in &names {
                let spec = CheckSpec::new(rng.random_range(1..=k), small(rng));
                b = b.check(q, spec).unwrap();
            }
        }
        Checks::Uniform { entry, nonzero } => {
            let mut c = small(rng);
            if nonzero && c.is_zero() {
                c = Rational::one();
            }
            let e = entry.unwrap_or_else(|| rng.random_range(1..=k)).min(k);
            b = b.check_all(CheckSpec::new(e, c));
        }
    }
    for q in &names {
        for sym in TAPE {
            if (sym == LEFT_END || sym == RIGHT_END) && rng.random_bool(0.3) {
                continue;
            }
            let guards: &[Guard] = if shape.blind || rng.random_bool(0.4) {
                &[Guard::Any]
            } else {
                &[Guard::Eq, Guard::Ne]
            };
            for &g in guards {
                let moves = if shape.deterministic {
                    1
                } else {
                    rng.random_range(1..=2)
                };
                for _ in 0..moves {
                    let to = &names[rng.random_range(0..n)];
                    b.on(q, sym, g, to, &random_matrix(rng, k)).unwrap();
                }
            }
        }
    }
    b.build().unwrap()
}

fn dva(seed: u64) -> VectorAutomaton {
    random_vector_machine(
        seed,
        Shape {
            blind: false,
            deterministic: true,
            checks: Checks::Mixed,
        },
    )
}

/// One-dimensional, initial vector `[1]`, standard checks, positive multipliers.
fn random_dva1(seed: u64) -> VectorAutomaton {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let pool = [
        (1, 1),
        (2, 1),
        (3, 1),
        (1, 2),
        (1, 3),
        (2, 3),
        (3, 2),
        (6, 1),
        (5, 4),
    ];
    let n = rng.random_range(1..=3);
    let (names, control) = random_control(rng, n);
    let blind = rng.random_bool(0.3);
    let mut b = VectorBuilder::new(control, RowVector::from_ints(&[1]));
    if blind {
        b = b.blind();
    }
    for q in &names {
        for sym in TAPE {
            let guards: &[Guard] = if blind || rng.random_bool(0.4) {
                &[Guard::Any]
            } else {
                &[Guard::Eq, Guard::Ne]
            };
            for &g in guards {
                let (p, d) = pool[rng.random_range(0..pool.len())];
                let to = &names[rng.random_range(0..n)];
                b.on(q, sym, g, to, &SquareMatrix::diagonal(vec![Rational::frac(p, d)]))
                    .unwrap();
            }
        }
    }
    b.build().unwrap()
}

/// Counters tested only all-at-once, acceptance also requiring empty counters.
fn random_counter_machine(seed: u64) -> CounterMachine {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=3);
    let k = rng.random_range(1..=3);
    let (names, control) = random_control(rng, n);
    let mut b = CounterBuilder::new(control, k)
        .bound(2)
        .zero_test(ZeroTest::SimultaneousZero)
        .accept_on_zero();
    for q in &names {
        for sym in TAPE {
            if (sym == LEFT_END || sym == RIGHT_END) && rng.random_bool(0.3) {
                continue;
            }
            let guards = if rng.random_bool(0.4) {
                vec![CounterGuard::Any]
            } else {
                vec![CounterGuard::AllZero, CounterGuard::NotAllZero]
            };
            for g in guards {
                let inc: Vec<i64> = (0..k).map(|_| rng.random_range(-2..=2)).collect();
                let to = &names[rng.random_range(0..n)];
                b.on(q, sym, g, to, &inc).unwrap();
            }
        }
    }
    b.build().unwrap()
}

fn random_tufa(seed: u64) -> Tufa {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(1..=3);
    let matrices = (0..2).map(|_| random_matrix(rng, n)).collect();
    Tufa::new(ab(), random_vector(rng, n), matrices, random_vector(rng, n)).unwrap()
}

/// One-way machine without equality tests; some moves are undefined and
/// stay moves may loop.
fn random_famw(seed: u64) -> MultiplyAutomaton {
    let rng = &mut ChaCha8Rng::seed_from_u64(seed);
    let pool = [(1, 1), (2, 1), (1, 2), (3, 1), (-1, 1)];
    let n = rng.random_range(1..=3);
    let (names, control) = random_control(rng, n);
    let mut b = FamBuilder::new(control, false);
    for q in &names {
        for sym in TAPE {
            if rng.random_bool(0.15) {
                continue;
            }
            let dir = if rng.random_bool(0.3) {
                Direction::Stay
            } else {
                Direction::Right
            };
            let (p, d) = pool[rng.random_range(0..pool.len())];
            let to = &names[rng.random_range(0..n)];
            b.on(q, sym, Guard::Any, to, dir, Rational::frac(p, d)).unwrap();
        }
    }
    b.build().unwrap()
}

fn vector_of(c: &Configuration) -> &RowVector {
    match c {
        Configuration::Vector { vector, .. } => vector,
        other => panic!("expected a vector configuration, found {other:?}"),
    }
}

fn words() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..2usize, 0..7)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn deterministic_runs_are_real_time_and_repeatable(seed: u64, w in words()) {
        let m = dva(seed);
        let w = word(&w);
        let t1 = m.run(&w).unwrap();
        let t2 = m.run(&w).unwrap();
        prop_assert_eq!(&t1, &t2);
        prop_assert!(t1.halt.is_none());
        prop_assert_eq!(t1.steps.len(), w.len() + 2);

        let nd = m.run_nondet(&w, &RunOptions::default()).unwrap();
        prop_assert_eq!(nd.accepted(), t1.accepted());
        prop_assert!(nd.max_frontier() <= 1);

        let prefixes = m.prefix_verdicts(&w, &RunOptions::default()).unwrap();
        prop_assert_eq!(prefixes.len(), w.len() + 1);
        prop_assert_eq!(prefixes[w.len()], t1.accepted());
    }

    #[test]
    fn counter_runs_are_real_time(seed: u64, w in words()) {
        let m = random_counter_machine(seed);
        let w = word(&w);
        let t = m.run(&w).unwrap();
        prop_assert!(t.halt.is_none());
        prop_assert_eq!(t.steps.len(), w.len() + 2);
        prop_assert_eq!(&t, &m.run(&w).unwrap());
    }

    #[test]
    fn frontier_order_and_dedupe_do_not_change_verdicts(
        seed: u64,
        shuffle: u64,
        blind: bool,
        w in words(),
    ) {
        let m = random_vector_machine(seed, Shape { blind, deterministic: false, checks: Checks::Mixed });
        let w = word(&w);
        let base = m.run_nondet(&w, &RunOptions::default()).unwrap();
        let shuffled = RunOptions { shuffle_seed: Some(shuffle), ..RunOptions::default() };
        prop_assert_eq!(m.run_nondet(&w, &shuffled).unwrap().accepted(), base.accepted());
        let raw = RunOptions { dedupe: false, ..RunOptions::default() };
        let undeduped = m.run_nondet(&w, &raw).unwrap();
        prop_assert_eq!(undeduped.accepted(), base.accepted());
        prop_assert!(undeduped.max_frontier() >= base.max_frontier());
    }

    #[test]
    fn entry_normalization_conjugates_by_swaps(seed: u64, w in words()) {
        let m = dva(seed);
        let n = normalize_check_entry(&m).unwrap();
        prop_assert!(n.checks.iter().all(|c| c.entry == 1));
        let k = m.dim();
        let j = |q: rtva::StateId| swap_matrix(m.check(q).entry, k).unwrap();
        for (((q, s, g), moves), ((q2, s2, g2), moves2)) in m.transitions().iter().zip(n.transitions()) {
            prop_assert_eq!((q, s, g), (q2, s2, g2));
            for (mv, mv2) in moves.iter().zip(moves2) {
                let expect = mat_mul(&mat_mul(&j(*q), &mv.matrix).unwrap(), &j(mv.target)).unwrap();
                prop_assert_eq!(&mv2.matrix, &expect);
            }
        }
        let w = word(&w);
        prop_assert_eq!(n.run(&w).unwrap().accepted(), m.run(&w).unwrap().accepted());
    }

    #[test]
    fn value_normalization_keeps_the_language(seed: u64, blind: bool, w in words()) {
        let checks = Checks::Uniform { entry: Some(1), nonzero: false };
        let m = random_vector_machine(seed, Shape { blind, deterministic: true, checks });
        let n = normalize_check_value(&m).unwrap();
        prop_assert_eq!(n.dim(), m.dim() + 1);
        let w = word(&w);
        let t = n.run(&w).unwrap();
        prop_assert_eq!(t.accepted(), m.run(&w).unwrap().accepted());
        for c in t.configs() {
            prop_assert!(vector_of(c).entries().last().unwrap().is_one());
        }
    }

    #[test]
    fn multiplicative_normalization_keeps_the_language(seed: u64, blind: bool, w in words()) {
        let checks = Checks::Uniform { entry: Some(1), nonzero: true };
        let m = random_vector_machine(seed, Shape { blind, deterministic: true, checks });
        if blind && m.accept_value.is_zero() {
            prop_assert!(normalize_check_value_multiplicative(&m).is_err());
            return Ok(());
        }
        let n = normalize_check_value_multiplicative(&m).unwrap();
        prop_assert_eq!(n.dim(), m.dim());
        let w = word(&w);
        prop_assert_eq!(n.run(&w).unwrap().accepted(), m.run(&w).unwrap().accepted());
    }

    #[test]
    fn entry_then_value_normalization_composes(seed: u64, w in words()) {
        let checks = Checks::Uniform { entry: None, nonzero: false };
        let m = random_vector_machine(seed, Shape { blind: false, deterministic: true, checks });
        let n = normalize_check_value(&normalize_check_entry(&m).unwrap()).unwrap();
        prop_assert!(n.checks.iter().all(CheckSpec::is_standard));
        let w = word(&w);
        prop_assert_eq!(n.run(&w).unwrap().accepted(), m.run(&w).unwrap().accepted());
    }

    #[test]
    fn dva1_and_counters_simulate_each_other_stepwise(seed: u64, w in words()) {
        let m = random_dva1(seed);
        let (c, primes) = dva1_to_counter_machine(&m).unwrap();
        let w = word(&w);
        prop_assert_eq!(c.run(&w).unwrap().accepted(), m.run(&w).unwrap().accepted());
        let listed = Words::Listed { label: "w".into(), words: vec![w.clone()] };
        prop_assert!(step_sync_probe(&m, &c, &primes, &listed).unwrap().is_clean());

        let back = counter_machine_to_dva1(&c).unwrap();
        prop_assert_eq!(back.run(&w).unwrap().accepted(), m.run(&w).unwrap().accepted());
    }

    #[test]
    fn counters_to_dva1_is_exact(seed: u64, w in words()) {
        let c = random_counter_machine(seed);
        let m = counter_machine_to_dva1(&c).unwrap();
        let w = word(&w);
        prop_assert_eq!(m.run(&w).unwrap().accepted(), c.run(&w).unwrap().accepted());
        let listed = Words::Listed { label: "w".into(), words: vec![w] };
        let report = step_sync_probe(&m, &c, &first_primes(c.counters), &listed).unwrap();
        prop_assert!(report.is_clean());
    }

    #[test]
    fn tufa_to_dbva_decides_the_cutpoint(seed: u64, lambda in -2i64..=2, w in words()) {
        let g = random_tufa(seed);
        let lambda = Rational::from(lambda);
        let m = tufa_to_dbva(&g, &lambda).unwrap();
        let w = word(&w);
        let t = m.run(&w).unwrap();
        prop_assert_eq!(t.accepted(), g.member(&lambda, &w).unwrap());
        if lambda.is_one() {
            let v = vector_of(t.final_config().unwrap());
            prop_assert_eq!(&v.entries()[0], &g.eval(&w).unwrap());
        }
    }

    #[test]
    fn dbva_block_encoding_is_exact(seed: u64, w in words()) {
        let m = random_vector_machine(seed, Shape {
            blind: true,
            deterministic: true,
            checks: Checks::Uniform { entry: Some(1), nonzero: false },
        });
        let (g, cut) = dbva_to_tufa(&m).unwrap();
        let w = word(&w);
        prop_assert_eq!(g.member(&cut, &w).unwrap(), m.run(&w).unwrap().accepted());
    }

    #[test]
    fn pausing_machines_compile_to_real_time(seed: u64, w in words()) {
        let f = random_famw(seed);
        let m = famw_to_rtdbva1(&f).unwrap();
        let w = word(&w);
        let expect = Machine::Multiply(f).accepts(&w, &RunOptions::default()).unwrap();
        let t = m.run(&w).unwrap();
        prop_assert_eq!(t.accepted(), expect);
        prop_assert_eq!(t.steps.len(), w.len() + 2);
    }

    #[test]
    fn documents_round_trip(seed: u64, kind in 0..5u8) {
        let machine: Machine = match kind {
            0 => dva(seed).into(),
            1 => random_vector_machine(seed, Shape { blind: true, deterministic: false, checks: Checks::Mixed }).into(),
            2 => random_counter_machine(seed).into(),
            3 => random_famw(seed).into(),
            _ => Machine::Tufa { automaton: random_tufa(seed), cutpoint: Rational::frac(1, 2) },
        };
        let doc = MachineDoc::new(machine.clone()).with_id("random");
        let text = doc.to_json_string();
        let parsed = MachineDoc::parse(&text).unwrap();
        prop_assert_eq!(&parsed.machine, &machine);
        prop_assert_eq!(parsed.to_json_string(), text);
        prop_assert_eq!(parsed.digest(), doc.digest());
    }

    #[test]
    fn counterexamples_replay(s1: u64, s2: u64) {
        let (m1, m2): (Machine, Machine) = (dva(s1).into(), dva(s2).into());
        let opts = RunOptions::default();
        let report = equivalence_test(&m1, &m2, &ab(), &Words::Exhaustive(4), &opts).unwrap();
        if let Some(cx) = report.counterexample {
            let w = ab().tokenize(&cx.word).unwrap();
            prop_assert_eq!(m1.accepts(&w, &opts).unwrap(), cx.left);
            prop_assert_eq!(m2.accepts(&w, &opts).unwrap(), cx.right);
            prop_assert_ne!(cx.left, cx.right);
        } else {
            prop_assert_eq!(report.words_tested as u128, word_count(2, 4));
        }
    }

    #[test]
    fn sampling_is_seeded(seed: u64, max_len in 0usize..10, count in 0usize..50) {
        let a = sample_words(&ab(), max_len, count, seed);
        prop_assert_eq!(&a, &sample_words(&ab(), max_len, count, seed));
        prop_assert_eq!(a.len(), count);
        prop_assert!(a.iter().all(|w| w.len() <= max_len && w.iter().all(|s| s.0 < 2)));
    }

    #[test]
    fn enumeration_matches_the_count(symbols in 1usize..4, max_len in 0usize..6) {
        let names: Vec<String> = (0..symbols).map(|i| format!("s{i}")).collect();
        let alphabet = Alphabet::new(names).unwrap();
        let all: Vec<_> = enumerate_words(&alphabet, max_len).collect();
        prop_assert_eq!(all.len() as u128, word_count(symbols, max_len));
        prop_assert!(all.windows(2).all(|p| (p[0].len(), &p[0]) < (p[1].len(), &p[1])));
    }
}

#[test]
fn zoo_nondeterministic_machines_ignore_frontier_order() {
    let runner = proptest::test_runner::Config::with_cases(32);
    let mut runner = proptest::test_runner::TestRunner::new(runner);
    for id in ["subsetsum", "pow-nbva2"] {
        let entry = rtva::zoo::build(id, false).unwrap();
        let n = entry.alphabet().len();
        let strategy = (prop::collection::vec(0..n, 0..10), any::<u64>());
        runner
            .run(&strategy, |(w, shuffle)| {
                let w = word(&w);
                let m = &entry.machine;
                let base = m.accepts(&w, &RunOptions::default()).unwrap();
                let shuffled = RunOptions {
                    shuffle_seed: Some(shuffle),
                    ..RunOptions::default()
                };
                prop_assert_eq!(m.accepts(&w, &shuffled).unwrap(), base);
                let raw = RunOptions {
                    dedupe: false,
                    ..RunOptions::default()
                };
                prop_assert_eq!(m.accepts(&w, &raw).unwrap(), base);
                let names = entry.alphabet().word_names(&w);
                prop_assert_eq!(entry.oracle_accepts(&names), base);
                Ok(())
            })
            .unwrap();
    }
}

#[test]
fn zoo_deterministic_machines_are_real_time() {
    let mut runner = proptest::test_runner::TestRunner::new(proptest::test_runner::Config::with_cases(32));
    for id in rtva::zoo::ids() {
        let entry = rtva::zoo::build(id, false).unwrap();
        let total = match &entry.machine {
            Machine::Vector(v) => v.deterministic,
            Machine::Counter(_) => true,
            _ => false,
        };
        if !total {
            continue;
        }
        let n = entry.alphabet().len();
        runner
            .run(&prop::collection::vec(0..n, 0..12), |w| {
                let w = word(&w);
                let t = entry.machine.run(&w, &RunOptions::default()).unwrap();
                if t.halt.is_none() {
                    prop_assert_eq!(t.steps.len(), w.len() + 2, "{}", id);
                }
                prop_assert_eq!(&t, &entry.machine.run(&w, &RunOptions::default()).unwrap());
                Ok(())
            })
            .unwrap();
    }
}
