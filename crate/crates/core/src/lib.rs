//! Exact automatic complexity of finite words.
//!
//! Three measures are computed, each with a machine-checked witness:
//!
//! * `A_N(x)` — the least number of states of an NFA that accepts `x` and has
//!   exactly one accepting path of length `|x|`;
//! * `A⁻(x)` — the least number of states of a partial DFA whose accepted
//!   language meets `Σ^|x|` in exactly `{x}`;
//! * `A(x)` — the same with a total transition function.
//!
//! The crate also ships the sequence-generation side: combinatorial and
//! linear feedback shift registers, maximal-length sequence enumeration,
//! full-cycle (de Bruijn) feedback enumeration, and Berlekamp–Massey linear
//! complexity, so that complexity results about register-generated words can
//! be reproduced end to end.
//!
//! Everything is plain value types; all operations are safe to call from any
//! number of threads.

pub mod automata;
pub mod fsr;
pub mod solvers;
pub mod words;

pub use automata::{AbstractNfa, Nfa, PartialDfa, StatePeriod, StateSequence};
pub use fsr::{FeedbackFunction, Fsr, FsrRun, LinearComplexity};
pub use solvers::{BoundReport, ComplexityResult, Measure, SearchOptions};
pub use words::{PowerOccurrence, Word};
