//! Exact `A⁻`: ascending exhaustive search over partial-DFA run candidates.
//!
//! A partial witness is determined by how the transition map is filled in
//! while the word is read: a defined slot forces the move, an undefined slot
//! branches over the states seen so far plus one fresh state. Transitions
//! never touched by the run can be dropped from any witness without changing
//! acceptance of `x` or adding accepted words, so the minimum is attained by
//! a run-defined map with the run's final state as the only accept state.

use std::ops::ControlFlow;
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::automata::{is_unique_dfa_witness, PartialDfa, StateId};
use crate::words::{Symbol, Word};

use super::budget::Budget;
use super::{ComplexityResult, Measure, SearchOptions, SearchStats, SolverError, Witness};

pub(super) enum DfaLevelOutcome {
    Found(PartialDfa),
    Exhausted,
    Aborted,
}

enum Flow {
    Continue,
    Found,
    Abort,
}

struct DfaSearcher<'a, F> {
    word: &'a Word,
    x: &'a [Symbol],
    n: usize,
    q: usize,
    sigma: usize,
    budget: &'a Budget,
    prune_walk: bool,
    prune_feas: bool,
    seq: Vec<StateId>,
    used: usize,
    delta: Vec<Option<StateId>>,
    in_list: Vec<Vec<StateId>>,
    rows: Vec<u8>,
    /// Invoked with every validated witness at this level; `Break` stops the
    /// enumeration.
    on_witness: F,
}

impl<'a, F> DfaSearcher<'a, F>
where
    F: FnMut(PartialDfa) -> ControlFlow<()>,
{
    fn new(word: &'a Word, q: usize, budget: &'a Budget, prune_walk: bool, prune_feas: bool, on_witness: F) -> Self {
        let n = word.len();
        let sigma = word.alphabet_size() as usize;
        let mut searcher = DfaSearcher {
            word,
            x: word.symbols(),
            n,
            q,
            sigma,
            budget,
            prune_walk,
            prune_feas,
            seq: Vec::with_capacity(n + 1),
            used: 1,
            delta: vec![None; q * sigma],
            in_list: vec![Vec::new(); q],
            rows: vec![0u8; (n + 1) * q],
            on_witness,
        };
        searcher.seq.push(0);
        searcher.rows[0] = 1;
        searcher
    }

    fn recompute_row(&mut self, t: usize) -> u8 {
        let v = *self.seq.last().expect("nonempty path");
        let (prev_rows, next_rows) = self.rows.split_at_mut((t + 1) * self.q);
        let prev = &prev_rows[t * self.q..];
        let next = &mut next_rows[..self.q];
        for (w, slot) in next.iter_mut().enumerate() {
            let mut acc = 0u8;
            for &z in &self.in_list[w] {
                acc = (acc + prev[z]).min(2);
            }
            *slot = acc;
        }
        next[v]
    }

    /// Extends the run with `v`, defining the slot when `define` is set.
    fn push(&mut self, t: usize, v: StateId, define: bool) -> bool {
        let u = self.seq[t];
        let fresh = v == self.used;
        if self.prune_feas && self.used + fresh as usize + (self.n - t - 1) < self.q {
            return false;
        }
        if define {
            self.delta[u * self.sigma + self.x[t] as usize] = Some(v);
            self.in_list[v].push(u);
        }
        self.seq.push(v);
        if self.prune_walk && self.recompute_row(t) >= 2 {
            self.seq.pop();
            if define {
                self.delta[u * self.sigma + self.x[t] as usize] = None;
                self.in_list[v].pop();
            }
            return false;
        }
        self.used += fresh as usize;
        true
    }

    fn pop(&mut self, t: usize, v: StateId, was_fresh: bool, defined: bool) {
        self.seq.pop();
        self.used -= was_fresh as usize;
        if defined {
            let u = self.seq[t];
            self.delta[u * self.sigma + self.x[t] as usize] = None;
            self.in_list[v].pop();
        }
    }

    fn dfs(&mut self, t: usize) -> Flow {
        if t == self.n {
            if self.used == self.q {
                let witness = PartialDfa::from_map(
                    self.q,
                    self.sigma as u32,
                    self.delta.clone(),
                    0,
                    [self.seq[self.n]],
                );
                if is_unique_dfa_witness(&witness, self.word) {
                    if let ControlFlow::Break(()) = (self.on_witness)(witness) {
                        return Flow::Found;
                    }
                }
            }
            return Flow::Continue;
        }
        let u = self.seq[t];
        if let Some(v) = self.delta[u * self.sigma + self.x[t] as usize] {
            if self.budget.tick() {
                return Flow::Abort;
            }
            let was_fresh = v == self.used;
            if !self.push(t, v, false) {
                return Flow::Continue;
            }
            let flow = self.dfs(t + 1);
            if let Flow::Continue = flow {
                self.pop(t, v, was_fresh, false);
            }
            return flow;
        }
        let max_v = self.used.min(self.q - 1);
        for v in 0..=max_v {
            if self.budget.tick() {
                return Flow::Abort;
            }
            let was_fresh = v == self.used;
            if !self.push(t, v, true) {
                continue;
            }
            match self.dfs(t + 1) {
                Flow::Continue => self.pop(t, v, was_fresh, true),
                other => return other,
            }
        }
        Flow::Continue
    }

    fn replay(&mut self, prefix: &[StateId]) -> bool {
        for (t, &v) in prefix.iter().enumerate().skip(1) {
            let t = t - 1;
            let u = self.seq[t];
            match self.delta[u * self.sigma + self.x[t] as usize] {
                Some(target) if target != v => return false,
                Some(_) => {
                    if !self.push(t, v, false) {
                        return false;
                    }
                }
                None => {
                    if !self.push(t, v, true) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// Deterministic run prefixes of the given depth (canonical state order).
fn enumerate_prefixes(x: &Word, q: usize, depth: usize) -> Vec<Vec<StateId>> {
    let sym = x.symbols();
    let mut prefixes = vec![vec![0usize]];
    for t in 0..depth {
        let mut next = Vec::new();
        for prefix in &prefixes {
            let used = prefix.iter().max().unwrap() + 1;
            let u = prefix[t];
            let forced = prefix
                .windows(2)
                .enumerate()
                .find(|(i, w)| w[0] == u && sym[*i] == sym[t])
                .map(|(_, w)| w[1]);
            match forced {
                Some(v) => {
                    let mut extended = prefix.clone();
                    extended.push(v);
                    next.push(extended);
                }
                None => {
                    for v in 0..=used.min(q - 1) {
                        let mut extended = prefix.clone();
                        extended.push(v);
                        next.push(extended);
                    }
                }
            }
        }
        prefixes = next;
    }
    prefixes
}

fn search_level_parallel(
    x: &Word,
    q: usize,
    budget: &Budget,
    prune_walk: bool,
    prune_feas: bool,
    threads: usize,
) -> DfaLevelOutcome {
    let n = x.len();
    let mut depth = 0;
    let mut count = 1usize;
    while depth < n && count < threads * 32 {
        depth += 1;
        count = count.saturating_mul(q.min(depth + 1));
    }
    let prefixes = enumerate_prefixes(x, q, depth);
    let found: Mutex<Option<PartialDfa>> = Mutex::new(None);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
    let run = |prefix: &Vec<StateId>| {
        let local: Mutex<Option<PartialDfa>> = Mutex::new(None);
        let mut searcher = DfaSearcher::new(x, q, budget, prune_walk, prune_feas, |w| {
            *local.lock().expect("local slot poisoned") = Some(w);
            ControlFlow::Break(())
        });
        if !searcher.replay(prefix) {
            return;
        }
        let flow = searcher.dfs(depth);
        drop(searcher);
        if let Flow::Found = flow {
            let witness = local.into_inner().expect("local slot poisoned");
            let mut slot = found.lock().expect("witness slot poisoned");
            if slot.is_none() {
                *slot = witness;
            }
            budget.request_stop();
        }
    };
    match pool {
        Ok(pool) => pool.install(|| prefixes.par_iter().for_each(run)),
        Err(_) => prefixes.par_iter().for_each(run),
    }
    let found = found.into_inner().expect("witness slot poisoned");
    match found {
        Some(witness) => DfaLevelOutcome::Found(witness),
        None if budget.exhausted() => DfaLevelOutcome::Aborted,
        None => DfaLevelOutcome::Exhausted,
    }
}

/// Runs `on_witness` over every validated level-`q` witness in canonical
/// order until it breaks; sequential.
pub(super) fn for_each_level_witness(
    x: &Word,
    q: usize,
    opts: &SearchOptions,
    budget: &Budget,
    on_witness: impl FnMut(PartialDfa) -> ControlFlow<()>,
) -> DfaLevelOutcome {
    if q > x.len() + 1 {
        return DfaLevelOutcome::Exhausted;
    }
    let cell: Mutex<Option<PartialDfa>> = Mutex::new(None);
    let mut on_witness = on_witness;
    let mut searcher = DfaSearcher::new(
        x,
        q,
        budget,
        opts.prune.walk_cap,
        opts.prune.state_feasibility,
        |w| {
            let flow = on_witness(w.clone());
            if flow.is_break() {
                *cell.lock().expect("cell poisoned") = Some(w);
            }
            flow
        },
    );
    let flow = searcher.dfs(0);
    drop(searcher);
    match flow {
        Flow::Found => DfaLevelOutcome::Found(cell.into_inner().expect("cell poisoned").expect("witness recorded")),
        Flow::Abort => DfaLevelOutcome::Aborted,
        Flow::Continue => DfaLevelOutcome::Exhausted,
    }
}

pub(super) fn search_level(x: &Word, q: usize, opts: &SearchOptions, budget: &Budget) -> DfaLevelOutcome {
    if q > x.len() + 1 {
        return DfaLevelOutcome::Exhausted;
    }
    if opts.threads > 1 && x.len() > 4 {
        return search_level_parallel(
            x,
            q,
            budget,
            opts.prune.walk_cap,
            opts.prune.state_feasibility,
            opts.threads,
        );
    }
    for_each_level_witness(x, q, opts, budget, |_| ControlFlow::Break(()))
}

/// Fewest partial-DFA states accepting exactly `{x}` among words of length
/// `|x|`.
pub fn compute_aminus(x: &Word, opts: &SearchOptions) -> Result<ComplexityResult, SolverError> {
    let started = Instant::now();
    let budget = Budget::new(opts);
    let upper = x.len() + 1;
    let mut levels_exhausted = 0usize;
    for q in opts.start_level.max(1)..=upper {
        match search_level(x, q, opts, &budget) {
            DfaLevelOutcome::Found(witness) => {
                let witness = Witness::Dfa(witness);
                debug_assert!(witness.validates(x));
                return Ok(ComplexityResult {
                    measure: Measure::PartialDfa,
                    value: q,
                    witness,
                    stats: SearchStats {
                        nodes: budget.nodes(),
                        seconds: started.elapsed().as_secs_f64(),
                        levels_exhausted,
                    },
                });
            }
            DfaLevelOutcome::Exhausted => levels_exhausted += 1,
            DfaLevelOutcome::Aborted => {
                return Err(SolverError::BudgetExhausted {
                    measure: Measure::PartialDfa,
                    word: x.render(),
                    lower: q,
                    upper,
                })
            }
        }
    }
    unreachable!("the straight-line run on n+1 states is always a witness")
}
