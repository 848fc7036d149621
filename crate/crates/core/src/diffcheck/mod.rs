//! Bounded verification: word enumeration and sampling, machine-versus-oracle
//! and machine-versus-machine comparison, and per-step resource probes.
//!
//! Words are checked in chunks on the rayon pool. Within a chunk the first
//! disagreement in enumeration order wins, and chunks are processed in order,
//! so reports do not depend on scheduling.

use num_bigint::BigInt;
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::linalg::{Rational, SquareMatrix};
use crate::machine::{
    Alphabet, Configuration, CounterMachine, Machine, RunOptions, SimError, SymbolId, VectorAutomaton,
    Verdict,
};

const CHUNK: usize = 4096;

/// All words of length `0..=max_len` in length-then-lexicographic order,
/// where symbols are ordered as in the alphabet.
pub fn enumerate_words(alphabet: &Alphabet, max_len: usize) -> WordIter {
    WordIter {
        symbols: alphabet.len(),
        max_len,
        next: Some(Vec::new()),
    }
}

/// `Σ_{i=0..max_len} s^i`.
pub fn word_count(symbols: usize, max_len: usize) -> u128 {
    (0..=max_len as u32).map(|i| (symbols as u128).pow(i)).sum()
}

pub struct WordIter {
    symbols: usize,
    max_len: usize,
    next: Option<Vec<SymbolId>>,
}

impl Iterator for WordIter {
    type Item = Vec<SymbolId>;

    fn next(&mut self) -> Option<Vec<SymbolId>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                // Every position wrapped: move to the next length.
                self.next = (succ.len() < self.max_len && self.symbols > 0)
                    .then(|| vec![SymbolId(0); succ.len() + 1]);
                break;
            }
            i -= 1;
            if succ[i].0 + 1 < self.symbols {
                succ[i].0 += 1;
                self.next = Some(succ);
                break;
            }
            succ[i] = SymbolId(0);
        }
        Some(current)
    }
}

/// `count` words with a uniformly drawn length in `0..=max_len` and uniform symbols.
pub fn sample_words(alphabet: &Alphabet, max_len: usize, count: usize, seed: u64) -> Vec<Vec<SymbolId>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = alphabet.len();
    (0..count)
        .map(|_| {
            let len = rng.random_range(0..=max_len);
            (0..len).map(|_| SymbolId(rng.random_range(0..n))).collect()
        })
        .collect()
}

/// Well-formed subset-sum inputs `t#a1#...#an#` with values below `2^bits`
/// and `1 ≤ n ≤ max_items`, as strings over `0`, `1` and `#`.
pub fn subset_sum_instances(count: usize, bits: u32, max_items: usize, seed: u64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(1..=max_items);
            let items: Vec<u64> = (0..n).map(|_| rng.random_range(0..1u64 << bits)).collect();
            // Half the targets are reachable by construction.
            let t = if rng.random_bool(0.5) {
                items.iter().filter(|_| rng.random_bool(0.5)).sum()
            } else {
                rng.random_range(0..1u64 << bits)
            };
            std::iter::once(t)
                .chain(items)
                .map(|x| format!("{x:b}#"))
                .collect::<String>()
        })
        .collect()
}

/// Where the tested words came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WordSource {
    Exhaustive { max_len: usize },
    Sampled { max_len: usize, count: usize, seed: u64 },
    Listed { label: String, count: usize },
}

/// A word set to check.
#[derive(Clone, Debug)]
pub enum Words {
    Exhaustive(usize),
    Sampled {
        max_len: usize,
        count: usize,
        seed: u64,
    },
    Listed {
        label: String,
        words: Vec<Vec<SymbolId>>,
    },
}

impl Words {
    pub fn source(&self) -> WordSource {
        match self {
            Words::Exhaustive(n) => WordSource::Exhaustive { max_len: *n },
            Words::Sampled { max_len, count, seed } => WordSource::Sampled {
                max_len: *max_len,
                count: *count,
                seed: *seed,
            },
            Words::Listed { label, words } => WordSource::Listed {
                label: label.clone(),
                count: words.len(),
            },
        }
    }

    pub fn iter<'a>(&'a self, alphabet: &Alphabet) -> Box<dyn Iterator<Item = Vec<SymbolId>> + 'a> {
        match self {
            Words::Exhaustive(n) => Box::new(enumerate_words(alphabet, *n)),
            Words::Sampled { max_len, count, seed } => {
                Box::new(sample_words(alphabet, *max_len, *count, *seed).into_iter())
            }
            Words::Listed { words, .. } => Box::new(words.iter().cloned()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub word: String,
    pub symbols: Vec<String>,
    /// Verdict of the machine under test.
    pub left: bool,
    /// Verdict of the oracle or the second machine.
    pub right: bool,
    /// For probes: the zero-based step at which the identity failed.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TestReport {
    pub machines: Vec<String>,
    pub source: WordSource,
    pub words_tested: u64,
    pub counterexample: Option<Counterexample>,
    pub max_frontier: usize,
    pub max_bits: u64,
}

impl TestReport {
    pub fn is_clean(&self) -> bool {
        self.counterexample.is_none()
    }

    pub fn with_ids<S: Into<String>>(mut self, ids: impl IntoIterator<Item = S>) -> Self {
        self.machines = ids.into_iter().map(Into::into).collect();
        self
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error("on word {word:?}: {source}")]
    Sim { word: String, source: SimError },
    #[error("symbol {0:?} is not in the alphabet of the machine")]
    Alphabet(String),
}

fn translate(from: &Alphabet, to: &Alphabet) -> Result<Vec<SymbolId>, CheckError> {
    from.names()
        .iter()
        .map(|n| to.get(n).ok_or_else(|| CheckError::Alphabet(n.clone())))
        .collect()
}

#[derive(Clone, Copy, Default)]
struct Stats {
    frontier: usize,
    bits: u64,
}

impl Stats {
    fn merge(self, o: Stats) -> Stats {
        Stats {
            frontier: self.frontier.max(o.frontier),
            bits: self.bits.max(o.bits),
        }
    }
}

fn evaluate(m: &Machine, word: &[SymbolId], opts: &RunOptions) -> Result<(bool, Stats), SimError> {
    let trace = m.run(word, opts)?;
    if trace.verdict == Verdict::BudgetExhausted {
        return Err(SimError::StepBudget {
            budget: opts.budget_for(word.len()),
        });
    }
    let stats = Stats {
        frontier: trace.max_frontier(),
        bits: trace.max_bits(),
    };
    Ok((trace.accepted(), stats))
}

enum Outcome {
    Agree(Stats),
    Disagree(bool, bool, Stats),
}

/// Runs `check` over `words`, stopping at the first disagreement in order.
fn drive<F>(alphabet: &Alphabet, words: &Words, ids: Vec<String>, check: F) -> Result<TestReport, CheckError>
where
    F: Fn(&[SymbolId]) -> Result<Outcome, SimError> + Sync,
{
    let mut report = TestReport {
        machines: ids,
        source: words.source(),
        words_tested: 0,
        counterexample: None,
        max_frontier: 0,
        max_bits: 0,
    };
    let mut stream = words.iter(alphabet).peekable();
    while stream.peek().is_some() {
        let chunk: Vec<Vec<SymbolId>> = stream.by_ref().take(CHUNK).collect();
        let results: Vec<Result<Outcome, SimError>> = chunk.par_iter().map(|w| check(w)).collect();
        for (w, r) in chunk.iter().zip(results) {
            report.words_tested += 1;
            let outcome = r.map_err(|source| CheckError::Sim {
                word: alphabet.render(w),
                source,
            })?;
            let stats = match outcome {
                Outcome::Agree(s) => s,
                Outcome::Disagree(left, right, s) => {
                    report.counterexample = Some(Counterexample {
                        word: alphabet.render(w),
                        symbols: alphabet.word_names(w).iter().map(|s| s.to_string()).collect(),
                        left,
                        right,
                        step: None,
                        detail: None,
                    });
                    s
                }
            };
            report.max_frontier = report.max_frontier.max(stats.frontier);
            report.max_bits = report.max_bits.max(stats.bits);
            if report.counterexample.is_some() {
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Compares the machine's verdict with `oracle` on every word over `alphabet`.
pub fn differential_test(
    machine: &Machine,
    oracle: &(dyn Fn(&[&str]) -> bool + Sync),
    alphabet: &Alphabet,
    words: &Words,
    opts: &RunOptions,
) -> Result<TestReport, CheckError> {
    let map = translate(alphabet, machine.alphabet())?;
    drive(
        alphabet,
        words,
        vec![machine.kind().to_string(), "oracle".into()],
        |w| {
            let mapped: Vec<SymbolId> = w.iter().map(|s| map[s.0]).collect();
            let (got, stats) = evaluate(machine, &mapped, opts)?;
            let expected = oracle(&alphabet.word_names(w));
            Ok(if got == expected {
                Outcome::Agree(stats)
            } else {
                Outcome::Disagree(got, expected, stats)
            })
        },
    )
}

/// Compares two machines on every word over `alphabet`; symbols are matched by name.
pub fn equivalence_test(
    m1: &Machine,
    m2: &Machine,
    alphabet: &Alphabet,
    words: &Words,
    opts: &RunOptions,
) -> Result<TestReport, CheckError> {
    let map1 = translate(alphabet, m1.alphabet())?;
    let map2 = translate(alphabet, m2.alphabet())?;
    drive(
        alphabet,
        words,
        vec![m1.kind().to_string(), m2.kind().to_string()],
        |w| {
            let w1: Vec<SymbolId> = w.iter().map(|s| map1[s.0]).collect();
            let w2: Vec<SymbolId> = w.iter().map(|s| map2[s.0]).collect();
            let (a, s1) = evaluate(m1, &w1, opts)?;
            let (b, s2) = evaluate(m2, &w2, opts)?;
            let s = s1.merge(s2);
            Ok(if a == b {
                Outcome::Agree(s)
            } else {
                Outcome::Disagree(a, b, s)
            })
        },
    )
}

/// Per-step bit budget: after the `t`-th multiplication every number in the
/// configuration has at most `b0 + t·bmax` bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BitBound {
    pub b0: u64,
    pub bmax: u64,
}

impl BitBound {
    pub fn at(&self, t: u64) -> u64 {
        self.b0 + t * self.bmax
    }
}

fn int_bits(x: &BigInt) -> u64 {
    x.magnitude().bits()
}

/// Scaling `v` by the lcm `L_v` of its denominators and each matrix by the
/// lcm `L` of all matrix denominators gives integer products whose entries
/// are at most `|L_v v| · (k·A)^t`, with `A` the largest scaled matrix entry
/// (the identity included, for default endmarker moves).
fn linear_bound(initial: &[Rational], matrices: &[&SquareMatrix], k: usize) -> BitBound {
    let lv = Rational::lcm_denominators(initial);
    let n0 = initial
        .iter()
        .map(|x| (x.numer() * &lv / x.denom()).abs())
        .max()
        .unwrap_or_default();
    let l = Rational::lcm_denominators(matrices.iter().flat_map(|m| m.entries()));
    let a = matrices
        .iter()
        .flat_map(|m| m.entries())
        .map(|x| (x.numer() * &l / x.denom()).abs())
        .fold(l.clone(), |acc, x| acc.max(x));
    BitBound {
        b0: int_bits(&n0).max(int_bits(&lv)),
        bmax: int_bits(&(a * BigInt::from(k))).max(int_bits(&l)),
    }
}

/// Bit budget derived from the machine's initial data and matrices.
pub fn bit_bound(machine: &Machine) -> BitBound {
    match machine {
        Machine::Vector(m) => linear_bound(
            m.initial_vector.entries(),
            &m.matrices().collect::<Vec<_>>(),
            m.dim(),
        ),
        Machine::Counter(m) => BitBound {
            b0: 1,
            bmax: int_bits(&BigInt::from(m.bound)),
        },
        Machine::Multiply(m) => BitBound {
            b0: 1,
            bmax: m.multipliers.iter().map(Rational::bits).max().unwrap_or(1).max(1),
        },
        Machine::Tufa { automaton, .. } => {
            // The final vector is applied as one more matrix with f as its first column.
            let n = automaton.n();
            let mut fin = SquareMatrix::zeros(n);
            for (i, x) in automaton.final_vector.entries().iter().enumerate() {
                fin.set(i, 0, x.clone());
            }
            let all: Vec<SquareMatrix> = automaton.matrices.iter().cloned().chain([fin]).collect();
            linear_bound(automaton.initial.entries(), &all.iter().collect::<Vec<_>>(), n)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BitViolation {
    pub word: String,
    pub step: usize,
    pub bits: u64,
    pub bound: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BitGrowthReport {
    pub bound: BitBound,
    pub words: u64,
    pub steps: u64,
    pub max_bits: u64,
    /// Largest increase in bit length between consecutive configurations.
    pub max_growth: u64,
    /// Largest value of `max_bits - (b0 + (|w|+2)·bmax)` over all words; at most 0 when the whole-run bound holds.
    pub worst_slack: i64,
    pub violations: Vec<BitViolation>,
}

/// Checks the per-step bound `bits(step s) ≤ b0 + (s+1)·bmax` on every run,
/// and the whole-run bound with `|w| + 2` steps.
pub fn bitgrowth_probe<'a>(
    machine: &Machine,
    words: impl IntoIterator<Item = &'a [SymbolId]>,
    opts: &RunOptions,
) -> Result<BitGrowthReport, CheckError> {
    let bound = bit_bound(machine);
    let alphabet = machine.alphabet();
    let mut report = BitGrowthReport {
        bound,
        words: 0,
        steps: 0,
        max_bits: 0,
        max_growth: 0,
        worst_slack: i64::MIN,
        violations: Vec::new(),
    };
    for w in words {
        let trace = machine.run(w, opts).map_err(|source| CheckError::Sim {
            word: alphabet.render(w),
            source,
        })?;
        report.words += 1;
        let mut prev = trace.initial.as_ref().map(Configuration::max_bits);
        for (s, step) in trace.steps.iter().enumerate() {
            let bits = step.max_bits();
            let limit = bound.at(s as u64 + 1);
            if bits > limit {
                report.violations.push(BitViolation {
                    word: alphabet.render(w),
                    step: s,
                    bits,
                    bound: limit,
                });
            }
            if let Some(p) = prev {
                report.max_growth = report.max_growth.max(bits.saturating_sub(p));
            }
            prev = Some(bits);
        }
        report.steps += trace.steps.len() as u64;
        let run_bits = trace.max_bits();
        report.max_bits = report.max_bits.max(run_bits);
        let whole = bound.at(w.len() as u64 + 2);
        report.worst_slack = report.worst_slack.max(run_bits as i64 - whole as i64);
    }
    Ok(report)
}

/// Checks `vector = Π primes[i]^{counters[i]}` at every step of the two
/// step-synchronous machines.
pub fn step_sync_probe(
    m_vec: &VectorAutomaton,
    m_ctr: &CounterMachine,
    primes: &[u64],
    words: &Words,
) -> Result<TestReport, CheckError> {
    let alphabet = &m_vec.control.alphabet;
    let map = translate(alphabet, &m_ctr.control.alphabet)?;
    let ids = vec![m_vec.kind_name().to_string(), "counter".to_string()];
    let mut report = TestReport {
        machines: ids,
        source: words.source(),
        words_tested: 0,
        counterexample: None,
        max_frontier: 1,
        max_bits: 0,
    };
    for w in words.iter(alphabet) {
        report.words_tested += 1;
        let render = |source| CheckError::Sim {
            word: alphabet.render(&w),
            source,
        };
        let tv = m_vec.run(&w).map_err(render)?;
        let wc: Vec<SymbolId> = w.iter().map(|s| map[s.0]).collect();
        let tc = m_ctr.run(&wc).map_err(render)?;
        report.max_bits = report.max_bits.max(tv.max_bits());
        let configs = tv.configs().zip(tc.configs());
        let steps = tv.steps.len().max(tc.steps.len());
        let mut failure = None;
        for (s, (cv, cc)) in configs.enumerate() {
            let (Configuration::Vector { vector, .. }, Configuration::Counters { counters, .. }) = (cv, cc)
            else {
                failure = Some((s, "unexpected configuration kind".to_string()));
                break;
            };
            let mut product = Rational::one();
            for (&p, &c) in primes.iter().zip(counters) {
                product = &product
                    * &Rational::from(p as i64)
                        .pow(c as i32)
                        .map_err(|e| render(e.into()))?;
            }
            if vector.entries()[0] != product {
                failure = Some((
                    s,
                    format!(
                        "vector {} but counters {:?} encode {}",
                        vector.entries()[0],
                        counters,
                        product
                    ),
                ));
                break;
            }
        }
        if failure.is_none() && tv.steps.len() != tc.steps.len() {
            failure = Some((
                steps.min(tv.steps.len()).min(tc.steps.len()),
                "runs have different lengths".into(),
            ));
        }
        if let Some((step, detail)) = failure {
            report.counterexample = Some(Counterexample {
                word: alphabet.render(&w),
                symbols: alphabet.word_names(&w).iter().map(|s| s.to_string()).collect(),
                left: tv.accepted(),
                right: tc.accepted(),
                step: Some(step),
                detail: Some(detail),
            });
            return Ok(report);
        }
    }
    Ok(report)
}
