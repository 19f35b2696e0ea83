//! Exact `A`: total-DFA complexity via completion of partial witnesses.
//!
//! A minimal total witness can be assumed to have at most one state off its
//! accepting run: surplus accept states can be dropped, and every transition
//! into the off-run region can be redirected to a single absorbing dead
//! state without changing the set of accepted length-`n` words. So either
//! some partial witness at the `A⁻` level admits a total completion that
//! still accepts exactly one word of length `n` — giving `A = A⁻` — or no
//! completion exists anywhere at that level and `A = A⁻ + 1` via the dead
//! state.

use std::ops::ControlFlow;
use std::time::Instant;

use crate::automata::{PartialDfa, StateId};
use crate::words::Word;

use super::budget::Budget;
use super::{aminus, ComplexityResult, Measure, SearchOptions, SearchStats, SolverError, Witness};

/// Depth-first assignment of the undefined slots, keeping the accepted
/// length-`n` word count at one; the count is monotone in the defined slots.
fn complete_to_total(witness: &PartialDfa, x: &Word, budget: &Budget) -> Result<Option<PartialDfa>, ()> {
    let q = witness.state_count();
    let sigma = witness.alphabet_size();
    let n = x.len();
    let mut map: Vec<Option<StateId>> = (0..q)
        .flat_map(|s| (0..sigma).map(move |c| witness.target(s, c)))
        .collect();
    let slots: Vec<usize> = map.iter().enumerate().filter(|(_, t)| t.is_none()).map(|(i, _)| i).collect();
    let accepts: Vec<StateId> = witness.accepts_set().iter().copied().collect();

    fn dfs(
        map: &mut Vec<Option<StateId>>,
        slots: &[usize],
        i: usize,
        q: usize,
        sigma: u32,
        n: usize,
        start: StateId,
        accepts: &[StateId],
        budget: &Budget,
    ) -> Result<Option<PartialDfa>, ()> {
        let probe = PartialDfa::from_map(q, sigma, map.clone(), start, accepts.iter().copied());
        if probe.count_words(n, 2) > 1 {
            return Ok(None);
        }
        if i == slots.len() {
            return Ok(Some(probe));
        }
        for target in 0..q {
            if budget.tick() {
                return Err(());
            }
            map[slots[i]] = Some(target);
            let result = dfs(map, slots, i + 1, q, sigma, n, start, accepts, budget)?;
            if result.is_some() {
                return Ok(result);
            }
            map[slots[i]] = None;
        }
        Ok(None)
    }

    dfs(&mut map, &slots, 0, q, sigma, n, witness.start(), &accepts, budget)
}

/// Routes every undefined slot to a fresh absorbing dead state.
fn with_dead_state(witness: &PartialDfa) -> PartialDfa {
    let q = witness.state_count();
    let sigma = witness.alphabet_size();
    let dead = q;
    let mut map = Vec::with_capacity((q + 1) * sigma as usize);
    for s in 0..q {
        for c in 0..sigma {
            map.push(Some(witness.target(s, c).unwrap_or(dead)));
        }
    }
    for _ in 0..sigma {
        map.push(Some(dead));
    }
    PartialDfa::from_map(q + 1, sigma, map, witness.start(), witness.accepts_set().iter().copied())
}

/// Fewest total-DFA states accepting exactly `{x}` among words of length
/// `|x|`. Sequential: the completion pass reuses the partial-witness
/// enumeration at the `A⁻` level.
pub fn compute_a(x: &Word, opts: &SearchOptions) -> Result<ComplexityResult, SolverError> {
    let started = Instant::now();
    let base = super::compute_aminus(x, opts)?;
    let q = base.value;
    let budget = Budget::new(opts);
    let mut completed: Option<PartialDfa> = None;
    let mut aborted = false;
    let outcome = aminus::for_each_level_witness(x, q, opts, &budget, |partial| {
        match complete_to_total(&partial, x, &budget) {
            Ok(Some(total)) => {
                completed = Some(total);
                ControlFlow::Break(())
            }
            Ok(None) => ControlFlow::Continue(()),
            Err(()) => {
                aborted = true;
                ControlFlow::Break(())
            }
        }
    });
    if aborted || matches!(outcome, aminus::DfaLevelOutcome::Aborted) {
        return Err(SolverError::BudgetExhausted {
            measure: Measure::TotalDfa,
            word: x.render(),
            lower: q,
            upper: q + 1,
        });
    }
    let stats = |value: usize| SearchStats {
        nodes: base.stats.nodes + budget.nodes(),
        seconds: started.elapsed().as_secs_f64(),
        levels_exhausted: value - 1,
    };
    match completed {
        Some(total) => {
            debug_assert!(total.is_total());
            let witness = Witness::Dfa(total);
            debug_assert!(witness.validates(x));
            Ok(ComplexityResult { measure: Measure::TotalDfa, value: q, witness, stats: stats(q) })
        }
        None => {
            let Witness::Dfa(partial) = &base.witness else {
                unreachable!("partial-DFA search returns DFA witnesses")
            };
            let total = with_dead_state(partial);
            debug_assert!(total.is_total());
            let witness = Witness::Dfa(total);
            debug_assert!(witness.validates(x));
            Ok(ComplexityResult { measure: Measure::TotalDfa, value: q + 1, witness, stats: stats(q + 1) })
        }
    }
}
