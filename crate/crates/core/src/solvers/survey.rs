//! Exhaustive survey of how many words attain the universal upper bound.

use rayon::prelude::*;

use crate::words::{Symbol, Word};

use super::{bounds, compute_an, SearchOptions, SolverError};

/// Exact fraction of binary length-`n` words whose unique-path NFA measure
/// equals `⌊n/2⌋ + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SurveyReport {
    pub n: usize,
    pub attained: u64,
    pub total: u64,
}

impl SurveyReport {
    pub fn fraction(&self) -> f64 {
        self.attained as f64 / self.total as f64
    }
}

pub const SURVEY_EXHAUSTIVE_LIMIT: usize = 12;

/// Computes the survey over all `2^n` binary words. Lengths above the
/// exhaustive limit are refused unless `force` is set.
pub fn survey_hyde_fraction(n: usize, force: bool) -> Result<SurveyReport, SolverError> {
    if n > SURVEY_EXHAUSTIVE_LIMIT && !force {
        return Err(SolverError::SurveyTooLarge { n, limit: SURVEY_EXHAUSTIVE_LIMIT });
    }
    let bound = bounds::hyde_bound(n);
    let opts = SearchOptions::default();
    let total = 1u64 << n;
    let attained = (0..total)
        .into_par_iter()
        .filter(|&bits| {
            let symbols: Vec<Symbol> = (0..n).map(|i| ((bits >> i) & 1) as Symbol).collect();
            let word = Word::new(symbols, 2).expect("binary symbols");
            let result = compute_an(&word, &opts).expect("unbudgeted search cannot exhaust");
            result.value == bound
        })
        .count() as u64;
    Ok(SurveyReport { n, attained, total })
}
