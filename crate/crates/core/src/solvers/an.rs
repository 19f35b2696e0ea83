//! Exact `A_N`: ascending exhaustive search over accepting-path candidates.
//!
//! A witness in path normal form is determined by the state sequence
//! `s_0 … s_n` of its unique accepting path: the transitions are exactly
//! `(s_t, x_t, s_{t+1})`, the start is `s_0` and the only accept state is
//! `s_n`. Deleting off-path transitions and surplus accept states from any
//! witness preserves acceptance of `x` and cannot create accepting paths, so
//! at the minimal state count the accepting path visits every state and the
//! normal form is exhaustive. States are numbered by first occurrence along
//! the path, which removes relabeling symmetry.
//!
//! Two structural facts drive the search. In a valid witness every traversed
//! edge carries exactly one label (a second label would yield a second
//! accepting path along the same walk), so a candidate reusing an edge under
//! a different symbol is dead. And every prefix of the walk count table is
//! monotone in the edge set, so a partial path that already admits two walks
//! to its current position can never validate; this is the `walk_cap` prune.
//! Neither fact is consulted when a complete candidate is finally judged:
//! that is done by the independent counting validator.

use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use crate::automata::{is_unique_nfa_witness, nfa_from_state_path, StateId};
use crate::words::{scan_powers, Symbol, Word};

use super::budget::Budget;
use super::{bounds, ComplexityResult, Measure, SearchOptions, SearchStats, SolverError, Witness};

pub(super) enum LevelOutcome {
    Found(Vec<StateId>),
    Exhausted,
    Aborted,
}

enum Flow {
    Continue,
    Found,
    Abort,
}

struct Searcher<'a> {
    word: &'a Word,
    x: &'a [Symbol],
    n: usize,
    q: usize,
    budget: &'a Budget,
    prune_walk: bool,
    prune_feas: bool,
    // bcount[c] = how many states may reach an occurrence count of c.
    bcount: Option<&'a [u32]>,
    seq: Vec<StateId>,
    used: usize,
    edge_label: Vec<Option<Symbol>>,
    in_list: Vec<Vec<StateId>>,
    rows: Vec<u8>,
    counts: Vec<u32>,
    hist: Vec<u32>,
}

impl<'a> Searcher<'a> {
    fn new(
        word: &'a Word,
        q: usize,
        budget: &'a Budget,
        prune_walk: bool,
        prune_feas: bool,
        bcount: Option<&'a [u32]>,
    ) -> Self {
        let n = word.len();
        let mut searcher = Searcher {
            word,
            x: word.symbols(),
            n,
            q,
            budget,
            prune_walk,
            prune_feas,
            bcount,
            seq: Vec::with_capacity(n + 1),
            used: 1,
            edge_label: vec![None; q * q],
            in_list: vec![Vec::new(); q],
            rows: vec![0u8; (n + 1) * q],
            counts: vec![0u32; q],
            hist: vec![0u32; n + 2],
        };
        searcher.seq.push(0);
        searcher.counts[0] = 1;
        searcher.hist[1] = 1;
        searcher.rows[0] = 1;
        searcher
    }

    /// Applies every admissibility check for extending the path at position
    /// `t` with state `v`; mutates on success.
    fn try_push(&mut self, t: usize, v: StateId) -> bool {
        let u = self.seq[t];
        let c = self.x[t];
        let slot = u * self.q + v;
        match self.edge_label[slot] {
            Some(label) if label != c => return false,
            _ => {}
        }
        let fresh = v == self.used;
        if self.prune_feas && self.used + fresh as usize + (self.n - t - 1) < self.q {
            return false;
        }
        if let Some(bcount) = self.bcount {
            let reached = (self.counts[v] + 1) as usize;
            if self.hist[reached] + 1 > bcount[reached] {
                return false;
            }
        }
        let new_edge = self.edge_label[slot].is_none();
        if new_edge {
            self.edge_label[slot] = Some(c);
            self.in_list[v].push(u);
        }
        if self.prune_walk {
            let (prev_rows, next_rows) = self.rows.split_at_mut((t + 1) * self.q);
            let prev = &prev_rows[t * self.q..];
            let next = &mut next_rows[..self.q];
            for (w, slot_value) in next.iter_mut().enumerate() {
                let mut acc = 0u8;
                for &z in &self.in_list[w] {
                    acc = (acc + prev[z]).min(2);
                }
                *slot_value = acc;
            }
            if next[v] >= 2 {
                if new_edge {
                    self.edge_label[slot] = None;
                    self.in_list[v].pop();
                }
                return false;
            }
        }
        self.seq.push(v);
        self.used += fresh as usize;
        self.counts[v] += 1;
        self.hist[self.counts[v] as usize] += 1;
        true
    }

    fn pop(&mut self, t: usize, v: StateId, was_fresh: bool, was_new_edge: bool) {
        self.hist[self.counts[v] as usize] -= 1;
        self.counts[v] -= 1;
        self.seq.pop();
        self.used -= was_fresh as usize;
        if was_new_edge {
            let u = self.seq[t];
            self.edge_label[u * self.q + v] = None;
            self.in_list[v].pop();
        }
    }

    fn dfs(&mut self, t: usize) -> Flow {
        if t == self.n {
            if self.used == self.q {
                let nfa = nfa_from_state_path(&self.seq, self.word);
                if is_unique_nfa_witness(&nfa, self.word) {
                    return Flow::Found;
                }
            }
            return Flow::Continue;
        }
        let max_v = self.used.min(self.q - 1);
        for v in 0..=max_v {
            if self.budget.tick() {
                return Flow::Abort;
            }
            let was_fresh = v == self.used;
            let was_new_edge = self.edge_label[self.seq[t] * self.q + v].is_none();
            if !self.try_push(t, v) {
                continue;
            }
            match self.dfs(t + 1) {
                Flow::Continue => self.pop(t, v, was_fresh, was_new_edge),
                other => return other,
            }
        }
        Flow::Continue
    }

    /// Replays a previously enumerated prefix; false when a prune rejects it.
    fn replay(&mut self, prefix: &[StateId]) -> bool {
        for (t, &v) in prefix.iter().enumerate().skip(1) {
            if !self.try_push(t - 1, v) {
                return false;
            }
        }
        true
    }
}

/// Canonical label-consistent prefixes of the given depth, used to fan the
/// level search out to worker threads.
fn enumerate_prefixes(x: &Word, q: usize, depth: usize) -> Vec<Vec<StateId>> {
    let sym = x.symbols();
    let mut prefixes = vec![vec![0usize]];
    for t in 0..depth {
        let mut next = Vec::new();
        for prefix in &prefixes {
            let used = prefix.iter().max().unwrap() + 1;
            let u = prefix[t];
            for v in 0..=used.min(q - 1) {
                let consistent = prefix
                    .windows(2)
                    .enumerate()
                    .all(|(i, w)| (w[0], w[1]) != (u, v) || sym[i] == sym[t]);
                if consistent {
                    let mut extended = prefix.clone();
                    extended.push(v);
                    next.push(extended);
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
    bcount: Option<&[u32]>,
    threads: usize,
) -> LevelOutcome {
    let n = x.len();
    let mut depth = 0;
    let mut count = 1usize;
    while depth < n && count < threads * 32 {
        depth += 1;
        count = count.saturating_mul(q.min(depth + 1));
    }
    let prefixes = enumerate_prefixes(x, q, depth);
    let found: Mutex<Option<Vec<StateId>>> = Mutex::new(None);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build();
    let run = |prefix: &Vec<StateId>| {
        let mut searcher = Searcher::new(x, q, budget, prune_walk, prune_feas, bcount);
        if !searcher.replay(prefix) {
            return;
        }
        if let Flow::Found = searcher.dfs(depth) {
            let mut slot = found.lock().expect("witness slot poisoned");
            if slot.is_none() {
                *slot = Some(searcher.seq.clone());
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
        Some(seq) => LevelOutcome::Found(seq),
        None if budget.exhausted() => LevelOutcome::Aborted,
        None => LevelOutcome::Exhausted,
    }
}

/// Exhaustive search for a witness whose accepting path visits exactly `q`
/// distinct states.
pub(super) fn search_level(
    x: &Word,
    q: usize,
    opts: &SearchOptions,
    budget: &Budget,
    occurrence_k: Option<usize>,
) -> LevelOutcome {
    let n = x.len();
    if q > n + 1 {
        return LevelOutcome::Exhausted;
    }
    let bcount_store;
    let mut bcount = None;
    if let Some(k) = occurrence_k {
        let caps = bounds::occurrence_bounds(k, q);
        if caps.iter().sum::<u64>() < (n as u64) + 1 {
            // The q largest occurrence caps cannot cover the whole path.
            return LevelOutcome::Exhausted;
        }
        let mut table = vec![0u32; n + 2];
        for (c, entry) in table.iter_mut().enumerate() {
            *entry = caps.iter().filter(|&&b| b >= c as u64).count() as u32;
        }
        bcount_store = table;
        bcount = Some(&bcount_store[..]);
    }
    if opts.threads > 1 && n > 4 {
        return search_level_parallel(
            x,
            q,
            budget,
            opts.prune.walk_cap,
            opts.prune.state_feasibility,
            bcount,
            opts.threads,
        );
    }
    let mut searcher = Searcher::new(x, q, budget, opts.prune.walk_cap, opts.prune.state_feasibility, bcount);
    match searcher.dfs(0) {
        Flow::Found => LevelOutcome::Found(searcher.seq),
        Flow::Abort => LevelOutcome::Aborted,
        Flow::Continue => LevelOutcome::Exhausted,
    }
}

/// Enables the occurrence prune only when the hinted register bound is
/// actually obeyed by every power in the word, which is exactly the
/// hypothesis the cap sequence is derived from.
fn occurrence_hint(x: &Word, opts: &SearchOptions) -> Option<usize> {
    if !opts.prune.occurrence_bounds {
        return None;
    }
    let hint = opts.fsr_hint?;
    let k = hint.stage_count;
    let ok = scan_powers(x)
        .iter()
        .all(|p| p.exponent as u64 <= (k as u64).div_ceil(p.period_len as u64));
    ok.then_some(k)
}

/// Fewest NFA states admitting exactly one accepting path of length `|x|`,
/// with that path reading `x`.
pub fn compute_an(x: &Word, opts: &SearchOptions) -> Result<ComplexityResult, SolverError> {
    let started = Instant::now();
    let budget = Budget::new(opts);
    let upper = bounds::hyde_bound(x.len());
    let occurrence_k = occurrence_hint(x, opts);
    let mut levels_exhausted = 0usize;
    for q in opts.start_level.max(1)..=upper {
        match search_level(x, q, opts, &budget, occurrence_k) {
            LevelOutcome::Found(path) => {
                let witness = Witness::Nfa(nfa_from_state_path(&path, x));
                debug_assert!(witness.validates(x));
                return Ok(ComplexityResult {
                    measure: Measure::NfaUniquePath,
                    value: q,
                    witness,
                    stats: SearchStats {
                        nodes: budget.nodes(),
                        seconds: started.elapsed().as_secs_f64(),
                        levels_exhausted,
                    },
                });
            }
            LevelOutcome::Exhausted => levels_exhausted += 1,
            LevelOutcome::Aborted => {
                return Err(SolverError::BudgetExhausted {
                    measure: Measure::NfaUniquePath,
                    word: x.render(),
                    lower: q,
                    upper,
                })
            }
        }
    }
    unreachable!("the ⌊n/2⌋+1 level always contains a witness")
}

/// A witness path visiting exactly `q` states, if one exists; unbudgeted.
pub(crate) fn witness_path_with_exact_states(
    x: &Word,
    q: usize,
    opts: &SearchOptions,
) -> Option<Vec<StateId>> {
    let budget = Budget::unlimited();
    match search_level(x, q, opts, &budget, None) {
        LevelOutcome::Found(path) => Some(path),
        _ => None,
    }
}
