//! Exact computation of the three complexity measures with validated
//! witnesses, the associated lower/upper bound formulas, and the
//! verification harnesses built on top of them.
//!
//! Search strategy, shared by all measures: for an ascending number of
//! states `q`, enumerate accepting-path candidates whose transitions all lie
//! on the path (states numbered by first occurrence, a single accept state)
//! and hand every complete candidate to the independent validators in
//! [`crate::automata`]. The first validated candidate at the first
//! successful level is the answer; exhausting a level proves no smaller
//! witness exists.

mod aminus;
mod an;
mod bounds;
mod budget;
mod survey;
#[cfg(test)]
mod tests;
mod total;
mod verify;

use std::fmt;

use thiserror::Error;

use crate::automata::{is_unique_dfa_witness, is_unique_nfa_witness, Nfa, PartialDfa, StateId};
use crate::words::Word;

pub use bounds::{hyde_bound, mainy_lower_bound, mainy_lower_bound_with_period, occurrence_bounds, BoundReport};
pub use survey::{survey_hyde_fraction, SurveyReport, SURVEY_EXHAUSTIVE_LIMIT};
pub use verify::{
    verify_christmas, verify_hyde, verify_mainy, verify_refute_nsf, verify_shortpowers,
    ChristmasEntry, ChristmasReport, HydeReport, MainyCase, MainyReport, RefuteNsfReport,
    ShortPowersReport,
};

pub(crate) use an::witness_path_with_exact_states;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Fewest NFA states with a unique accepting path of the word's length.
    NfaUniquePath,
    /// Fewest partial-DFA states accepting exactly the word at its length.
    PartialDfa,
    /// Fewest total-DFA states accepting exactly the word at its length.
    TotalDfa,
}

impl Measure {
    pub fn token(self) -> &'static str {
        match self {
            Measure::NfaUniquePath => "an",
            Measure::PartialDfa => "aminus",
            Measure::TotalDfa => "a",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Debug, Error)]
pub enum SolverError {
    /// The search ran out of its node or time budget. The value is known to
    /// lie in `lower ..= upper`; no guess is returned.
    #[error("budget exhausted computing {measure} of {word:?}: value is in {lower}..={upper}")]
    BudgetExhausted { measure: Measure, word: String, lower: usize, upper: usize },
    #[error("survey of length {n} exceeds the exhaustive limit {limit} (pass force to override)")]
    SurveyTooLarge { n: usize, limit: usize },
}

/// Which of the correctness-neutral prunes the searches may apply. Each can
/// be toggled independently; disabling any of them changes speed only.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PruneConfig {
    /// Cap per-state occurrence counts using the register-derived bound
    /// sequence; applies only when an [`FsrHint`] is present and the word's
    /// powers actually obey the hinted bound.
    pub occurrence_bounds: bool,
    /// Backtrack when the remaining steps cannot introduce the states still
    /// missing at the current level.
    pub state_feasibility: bool,
    /// Backtrack as soon as the partial path structure already admits two
    /// walks to the current position.
    pub walk_cap: bool,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig { occurrence_bounds: true, state_feasibility: true, walk_cap: true }
    }
}

/// Declares that the input word was produced by a `stage_count`-stage
/// register (with the given run period, when known). Enables the occurrence
/// prune and the register lower bound in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FsrHint {
    pub stage_count: usize,
    pub period: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub max_nodes: Option<u64>,
    pub max_seconds: Option<f64>,
    /// Worker count for fanning out subtrees; 1 keeps the search fully
    /// sequential (and the witness identity deterministic).
    pub threads: usize,
    /// First state count to try; exhaustive ascent starts here.
    pub start_level: usize,
    pub prune: PruneConfig,
    pub fsr_hint: Option<FsrHint>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            max_nodes: None,
            max_seconds: None,
            threads: 1,
            start_level: 1,
            prune: PruneConfig::default(),
            fsr_hint: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchStats {
    /// Candidate extensions examined across all levels.
    pub nodes: u64,
    pub seconds: f64,
    /// State counts fully exhausted below the returned value.
    pub levels_exhausted: usize,
}

/// A witness automaton together with the validator that certifies it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Nfa(Nfa),
    Dfa(PartialDfa),
}

impl Witness {
    pub fn state_count(&self) -> usize {
        match self {
            Witness::Nfa(m) => m.state_count(),
            Witness::Dfa(m) => m.state_count(),
        }
    }

    /// Runs the matching uniqueness validator.
    pub fn validates(&self, x: &Word) -> bool {
        match self {
            Witness::Nfa(m) => is_unique_nfa_witness(m, x),
            Witness::Dfa(m) => is_unique_dfa_witness(m, x),
        }
    }

    pub fn to_dot(&self) -> String {
        match self {
            Witness::Nfa(m) => m.to_dot(),
            Witness::Dfa(m) => m.to_dot(),
        }
    }

    pub fn transitions(&self) -> Vec<(StateId, crate::words::Symbol, StateId)> {
        match self {
            Witness::Nfa(m) => m.transitions().to_vec(),
            Witness::Dfa(m) => m.transitions(),
        }
    }

    pub fn start(&self) -> StateId {
        match self {
            Witness::Nfa(m) => m.start(),
            Witness::Dfa(m) => m.start(),
        }
    }

    pub fn accepts_states(&self) -> Vec<StateId> {
        match self {
            Witness::Nfa(m) => m.accepts_set().iter().copied().collect(),
            Witness::Dfa(m) => m.accepts_set().iter().copied().collect(),
        }
    }

    pub fn alphabet_size(&self) -> u32 {
        match self {
            Witness::Nfa(m) => m.alphabet_size(),
            Witness::Dfa(m) => m.alphabet_size(),
        }
    }
}

/// An exact measure value with its certificate and search accounting.
#[derive(Debug, Clone)]
pub struct ComplexityResult {
    pub measure: Measure,
    pub value: usize,
    pub witness: Witness,
    pub stats: SearchStats,
}

pub use aminus::compute_aminus;
pub use an::compute_an;
pub use total::compute_a;
