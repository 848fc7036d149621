//! Example machines, each paired with a brute-force membership oracle.
//!
//! Every entry can also be built in fidelity mode, which reproduces the
//! printed construction without corrections so that the discrepancy can be
//! audited.

mod machines;
pub mod oracles;

use std::fmt;
use std::sync::Arc;

use crate::linalg::Rational;
use crate::machine::{Alphabet, Machine, ModelError};

pub use machines::{
    famw_pausing, geqstar_dva2, geqstar_fam, lng, lng_symbols, mod3_2ca_restricted, mod_tufa, mpal_dbva2,
    pow_nbva2, subsetsum_nbva3, ufibonacci, ufibonacci_entry3, ugauss_2ca, ugauss_2ca_restricted,
    ugauss_doubled, ugauss_dva2,
};

/// Membership predicate over symbol names.
pub type Oracle = Arc<dyn Fn(&[&str]) -> bool + Send + Sync>;

#[derive(Clone)]
pub struct ZooEntry {
    pub id: String,
    pub machine: Machine,
    pub oracle: Oracle,
    /// Deviations from the printed construction, with a counterexample when
    /// the printed version disagrees with the oracle.
    pub fidelity_notes: Vec<String>,
}

impl ZooEntry {
    fn new(
        id: &str,
        machine: impl Into<Machine>,
        oracle: impl Fn(&[&str]) -> bool + Send + Sync + 'static,
    ) -> Self {
        ZooEntry {
            id: id.to_string(),
            machine: machine.into(),
            oracle: Arc::new(oracle),
            fidelity_notes: Vec::new(),
        }
    }

    fn note(mut self, text: &str) -> Self {
        self.fidelity_notes.push(text.to_string());
        self
    }

    pub fn alphabet(&self) -> &Alphabet {
        self.machine.alphabet()
    }

    pub fn oracle_accepts(&self, word: &[&str]) -> bool {
        (self.oracle)(word)
    }
}

impl fmt::Debug for ZooEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZooEntry")
            .field("id", &self.id)
            .field("kind", &self.machine.kind())
            .field("fidelity_notes", &self.fidelity_notes)
            .finish()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ZooError {
    #[error("unknown zoo id `{0}`; see `zoo list`")]
    Unknown(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Fixed ids, in listing order. `lng-<k>` and `mod<k>-tufa` accept any
/// `k ≥ 1` and `k ≥ 2` respectively; the listed ones are examples.
pub const IDS: &[&str] = &[
    "ufibonacci",
    "ufibonacci-entry3",
    "ugauss-dva2",
    "ugauss-doubled",
    "ugauss-2ca",
    "ugauss-2ca-restricted",
    "mod3-2ca-restricted",
    "lng-1",
    "lng-2",
    "geqstar-dva2",
    "geqstar-fam",
    "mpal-dbva2",
    "mod2-tufa",
    "mod3-tufa",
    "mod5-tufa",
    "subsetsum",
    "pow-nbva2",
    "famw-pausing",
];

pub fn ids() -> &'static [&'static str] {
    IDS
}

const FIB_EPSILON: &str =
    "The printed machine starts with entry 1 equal to 0 in its only state and so accepts the \
empty word, which is not in the language. The shipped machine starts in a non-accepting copy of that state. \
Counterexample for the printed machine: \"\" (n = 0).";
const GEQ_RESET: &str =
    "The printed reset matrix has rows [0,0],[1,1] and maps [x,1] to [1,1], so the first a of a \
new block leaves the counter at 2. The shipped machine resets with rows [0,0],[0,1]. Counterexamples for the \
printed matrix: \"ababb\" and \"aababb\".";
const SUBSET_CLEAR: &str =
    "The printed subtraction E^2_3(-1) does not clear entry 2, so a later selected number is \
appended to the previous one. The shipped machine subtracts and clears in one matrix with rows \
[1,0,0],[-1,0,0],[0,0,1]. Counterexample for the printed matrix: \"11#1#10#\".";
const POW_ZERO: &str =
    "Allowing the second stage from the start corresponds to k = 0 and accepts a^1. The shipped \
machine only switches after at least one doubling. Counterexample: \"a\".";
const LNG_INDEX: &str = "`lng-<k>` is the construction with k+1 primes over the alphabet a0..a(k+1).";

/// Builds a zoo entry. With `fidelity` set, entries with a documented
/// correction use the uncorrected construction instead.
pub fn build(id: &str, fidelity: bool) -> Result<ZooEntry, ZooError> {
    use oracles as o;
    let entry = match id {
        "ufibonacci" => ZooEntry::new(id, ufibonacci(fidelity)?, o::fibonacci).note(FIB_EPSILON),
        "ufibonacci-entry3" => ZooEntry::new(id, ufibonacci_entry3()?, o::fibonacci)
            .note("Test fixture: coordinates 1 and 3 exchanged so that entry 3 is checked."),
        "ugauss-dva2" => ZooEntry::new(id, ugauss_dva2()?, o::gauss).note(
            "The swap between the two phases is folded into the phase-change matrices so that entry 1 is \
             always the counter being tested.",
        ),
        "ugauss-doubled" => ZooEntry::new(id, ugauss_doubled()?, o::gauss)
            .note("Test fixture: entry 1 scaled by 2, so every check compares against 2."),
        "ugauss-2ca" => ZooEntry::new(id, ugauss_2ca()?, o::gauss),
        "ugauss-2ca-restricted" => ZooEntry::new(id, ugauss_2ca_restricted()?, o::empty_unary).note(
            "Test fixture: the two-counter loop with simultaneous zero tests only. It accepts only the empty word.",
        ),
        "mod3-2ca-restricted" => ZooEntry::new(id, mod3_2ca_restricted()?, o::unary_multiple_of_three)
            .note("Test fixture for the prime encoding with simultaneous zero tests."),
        "geqstar-dva2" => ZooEntry::new(id, geqstar_dva2(fidelity)?, o::geq_star).note(GEQ_RESET),
        "geqstar-fam" => ZooEntry::new(id, geqstar_fam()?, o::geq_star),
        "mpal-dbva2" => ZooEntry::new(id, mpal_dbva2()?, o::marked_palindrome).note(
            "Every state accepts and every move is defined; malformed words are rejected through the value by \
             parking the vector at [1,1].",
        ),
        "subsetsum" => ZooEntry::new(id, subsetsum_nbva3(fidelity)?, o::subset_sum).note(SUBSET_CLEAR),
        "pow-nbva2" => ZooEntry::new(id, pow_nbva2(fidelity)?, o::pow).note(POW_ZERO),
        "famw-pausing" => ZooEntry::new(id, famw_pausing()?, o::a_n_b_2n)
            .note("Test fixture: pauses on every a and loops forever on an a after a b."),
        _ => return parametric(id),
    };
    Ok(entry)
}

fn parametric(id: &str) -> Result<ZooEntry, ZooError> {
    let unknown = || ZooError::Unknown(id.to_string());
    if let Some(k) = id.strip_prefix("lng-") {
        let k: usize = k.parse().map_err(|_| unknown())?;
        if k == 0 {
            return Err(unknown());
        }
        return Ok(ZooEntry::new(id, lng(k + 1)?, oracles::equal_counts(k + 1)).note(LNG_INDEX));
    }
    if let Some(k) = id.strip_prefix("mod").and_then(|r| r.strip_suffix("-tufa")) {
        let k: usize = k.parse().map_err(|_| unknown())?;
        if k < 2 {
            return Err(unknown());
        }
        let machine = Machine::Tufa {
            automaton: mod_tufa(k)?,
            cutpoint: Rational::one(),
        };
        return Ok(ZooEntry::new(id, machine, oracles::unary_not_multiple(k)));
    }
    Err(unknown())
}
