//! Workloads shared by the benchmarks.

use rtva::diffcheck::Words;
use rtva::zoo::{self, ZooEntry};
use rtva::SymbolId;

pub fn entry(id: &str) -> ZooEntry {
    zoo::build(id, false).expect("zoo id")
}

/// `a^n` over a one-letter alphabet.
pub fn unary(n: usize) -> Vec<SymbolId> {
    vec![SymbolId(0); n]
}

/// Every word up to `max_len`, listed once so iteration is not timed.
pub fn exhaustive(e: &ZooEntry, max_len: usize) -> Words {
    let words = rtva::diffcheck::enumerate_words(e.alphabet(), max_len).collect();
    Words::Listed {
        label: format!("all words up to length {max_len}"),
        words,
    }
}
