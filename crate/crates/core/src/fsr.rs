//! Combinatorial and linear feedback shift registers.
//!
//! A `k`-stage register over `{0, …, q−1}` holds a fill `(x_0, …, x_{k−1})`
//! with the oldest symbol first. One step shifts left and appends the
//! feedback value: `(x_0, …, x_{k−1}) ↦ (x_1, …, x_{k−1}, F(x_0, …, x_{k−1}))`.
//! The emitted stream is the sequence of first coordinates, so the fill at
//! time `t` is `(x_t, …, x_{t+k−1})`.

use std::collections::HashMap;

use thiserror::Error;

use crate::words::{Symbol, Word};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FsrError {
    #[error("stage count must be at least 1")]
    NoStages,
    #[error("alphabet size must be at least 2")]
    AlphabetTooSmall,
    #[error("fill has length {got}, expected {expected}")]
    FillLength { expected: usize, got: usize },
    #[error("symbol {symbol} out of range for alphabet size {alphabet_size}")]
    SymbolOutOfRange { symbol: Symbol, alphabet_size: u32 },
    #[error("coefficient list has length {got}, expected {expected}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("truth table has {got} entries, expected {expected}")]
    TableLength { expected: usize, got: usize },
    #[error("no repeated register state within {max_steps} steps")]
    NoRecurrence { max_steps: usize },
    #[error("initial fill must be nonzero")]
    ZeroFill,
    #[error("run period {period} is not the maximal period {expected}")]
    NotMaximalPeriod { period: usize, expected: usize },
}

/// The rule computing the new symbol from the current fill: either a linear
/// combination of the stages modulo `q`, or an arbitrary truth table indexed
/// by the fill read as a base-`q` numeral with the oldest stage most
/// significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeedbackKind {
    Linear { taps: Vec<Symbol> },
    Table { table: Vec<Symbol> },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackFunction {
    stage_count: usize,
    alphabet_size: u32,
    kind: FeedbackKind,
}

impl FeedbackFunction {
    pub fn linear(stage_count: usize, alphabet_size: u32, taps: Vec<Symbol>) -> Result<Self, FsrError> {
        Self::check_shape(stage_count, alphabet_size)?;
        if taps.len() != stage_count {
            return Err(FsrError::CoefficientLength { expected: stage_count, got: taps.len() });
        }
        check_symbols(&taps, alphabet_size)?;
        Ok(FeedbackFunction { stage_count, alphabet_size, kind: FeedbackKind::Linear { taps } })
    }

    pub fn table(stage_count: usize, alphabet_size: u32, table: Vec<Symbol>) -> Result<Self, FsrError> {
        Self::check_shape(stage_count, alphabet_size)?;
        let expected = (alphabet_size as usize).pow(stage_count as u32);
        if table.len() != expected {
            return Err(FsrError::TableLength { expected, got: table.len() });
        }
        check_symbols(&table, alphabet_size)?;
        Ok(FeedbackFunction { stage_count, alphabet_size, kind: FeedbackKind::Table { table } })
    }

    fn check_shape(stage_count: usize, alphabet_size: u32) -> Result<(), FsrError> {
        if stage_count == 0 {
            return Err(FsrError::NoStages);
        }
        if alphabet_size < 2 {
            return Err(FsrError::AlphabetTooSmall);
        }
        Ok(())
    }

    pub fn stage_count(&self) -> usize {
        self.stage_count
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn kind(&self) -> &FeedbackKind {
        &self.kind
    }

    /// The truth table as a string of symbol digits, for the table kind.
    pub fn table_string(&self) -> Option<String> {
        match &self.kind {
            FeedbackKind::Table { table } => Some(table.iter().map(|s| s.to_string()).collect()),
            FeedbackKind::Linear { .. } => None,
        }
    }

    pub fn eval(&self, fill: &[Symbol]) -> Symbol {
        debug_assert_eq!(fill.len(), self.stage_count);
        let q = u64::from(self.alphabet_size);
        match &self.kind {
            FeedbackKind::Linear { taps } => {
                let sum: u64 = taps.iter().zip(fill).map(|(&c, &x)| u64::from(c) * u64::from(x)).sum();
                (sum % q) as Symbol
            }
            FeedbackKind::Table { table } => {
                let mut index = 0u64;
                for &x in fill {
                    index = index * q + u64::from(x);
                }
                table[index as usize]
            }
        }
    }
}

fn check_symbols(symbols: &[Symbol], alphabet_size: u32) -> Result<(), FsrError> {
    match symbols.iter().find(|&&s| s >= alphabet_size) {
        Some(&symbol) => Err(FsrError::SymbolOutOfRange { symbol, alphabet_size }),
        None => Ok(()),
    }
}

/// A feedback shift register: the shift-and-append map induced by a
/// feedback function.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fsr {
    feedback: FeedbackFunction,
}

/// One terminated register run: `output[t]` is the first coordinate of the
/// fill at time `t`, and the fill sequence repeats with the given eventual
/// period after the preperiod.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsrRun {
    pub initial_fill: Vec<Symbol>,
    pub output: Word,
    pub preperiod: usize,
    pub period: usize,
}

impl Fsr {
    pub fn new(feedback: FeedbackFunction) -> Self {
        Fsr { feedback }
    }

    pub fn feedback(&self) -> &FeedbackFunction {
        &self.feedback
    }

    pub fn stage_count(&self) -> usize {
        self.feedback.stage_count
    }

    pub fn alphabet_size(&self) -> u32 {
        self.feedback.alphabet_size
    }

    fn check_fill(&self, fill: &[Symbol]) -> Result<(), FsrError> {
        if fill.len() != self.feedback.stage_count {
            return Err(FsrError::FillLength { expected: self.feedback.stage_count, got: fill.len() });
        }
        check_symbols(fill, self.feedback.alphabet_size)
    }

    /// Applies the register map once.
    pub fn step(&self, fill: &[Symbol]) -> Result<Vec<Symbol>, FsrError> {
        self.check_fill(fill)?;
        let mut next = fill[1..].to_vec();
        next.push(self.feedback.eval(fill));
        Ok(next)
    }

    /// The first `len` emitted symbols, without period detection.
    pub fn output_prefix(&self, fill: &[Symbol], len: usize) -> Result<Word, FsrError> {
        self.check_fill(fill)?;
        let mut state = fill.to_vec();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(state[0]);
            state = self.step(&state)?;
        }
        Ok(Word::new(out, self.feedback.alphabet_size).expect("register emits in-range symbols"))
    }

    /// Runs until the first repeated fill. The preperiod is the time of the
    /// earlier occurrence of that fill and the period is the gap between the
    /// two occurrences; the output covers `preperiod + period` symbols.
    ///
    /// Fails only when `max_steps` is smaller than `q^k`, the pigeonhole
    /// guarantee of recurrence.
    pub fn run_until_periodic(&self, fill: &[Symbol], max_steps: usize) -> Result<FsrRun, FsrError> {
        self.check_fill(fill)?;
        let mut seen: HashMap<Vec<Symbol>, usize> = HashMap::new();
        let mut output = Vec::new();
        let mut state = fill.to_vec();
        seen.insert(state.clone(), 0);
        output.push(state[0]);
        for t in 1..=max_steps {
            state = self.step(&state)?;
            if let Some(&j) = seen.get(&state) {
                output.truncate(t);
                let output = Word::new(output, self.feedback.alphabet_size)
                    .expect("register emits in-range symbols");
                return Ok(FsrRun {
                    initial_fill: fill.to_vec(),
                    output,
                    preperiod: j,
                    period: t - j,
                });
            }
            seen.insert(state.clone(), t);
            output.push(state[0]);
        }
        Err(FsrError::NoRecurrence { max_steps })
    }
}

/// Generates one full period of a maximal-length binary register sequence.
/// The stage count is the length of `taps`; the run must have eventual
/// period `2^k − 1`, otherwise the taps are not maximal (or the fill is
/// zero) and an error is returned.
pub fn generate_m_sequence(taps: &[Symbol], initial_fill: &[Symbol]) -> Result<Word, FsrError> {
    let k = taps.len();
    let feedback = FeedbackFunction::linear(k, 2, taps.to_vec())?;
    let fsr = Fsr::new(feedback);
    // The zero fill is a fixed point of every linear map.
    if initial_fill.len() == k && initial_fill.iter().all(|&s| s == 0) {
        return Err(FsrError::ZeroFill);
    }
    let max_steps = (1usize << k) + 1;
    let run = fsr.run_until_periodic(initial_fill, max_steps)?;
    let expected = (1usize << k) - 1;
    if run.period != expected {
        return Err(FsrError::NotMaximalPeriod { period: run.period, expected });
    }
    let symbols = run.output.symbols()[..expected].to_vec();
    Ok(Word::new(symbols, 2).expect("binary output"))
}

/// All distinct maximal-length sequences of span `k`: every tap vector whose
/// run from some nonzero fill has period `2^k − 1` contributes the first
/// `2^k − 1` output symbols. Sorted lexicographically.
pub fn enumerate_m_sequences(k: usize) -> Vec<Word> {
    assert!((1..=16).contains(&k), "stage count {k} out of supported range");
    let mut words = std::collections::BTreeSet::new();
    for taps_bits in 0u32..(1 << k) {
        let taps: Vec<Symbol> = (0..k).map(|i| (taps_bits >> i) & 1).collect();
        for fill_bits in 1u32..(1 << k) {
            let fill: Vec<Symbol> = (0..k).map(|i| (fill_bits >> i) & 1).collect();
            if let Ok(word) = generate_m_sequence(&taps, &fill) {
                words.insert(word);
            }
        }
    }
    words.into_iter().collect()
}

/// All binary truth tables of span `k` whose register map is a permutation
/// of `{0,1}^k` consisting of a single cycle of length `2^k`. Ordered by the
/// truth table read as a numeral with entry 0 least significant.
pub fn enumerate_full_cycle_feedbacks(k: usize) -> Vec<FeedbackFunction> {
    assert!((1..=4).contains(&k), "full-cycle scan supports 1 ≤ k ≤ 4, got {k}");
    let states = 1usize << k;
    let low_mask = (states >> 1) - 1; // keeps the k−1 youngest stages
    let mut out = Vec::new();
    for table_bits in 0u64..(1u64 << states) {
        // Follow the orbit of state 0; a first return after exactly 2^k
        // steps forces a single cycle through every state.
        let mut state = 0usize;
        let mut steps = 0usize;
        loop {
            let fed = ((table_bits >> state) & 1) as usize;
            state = ((state & low_mask) << 1) | fed;
            steps += 1;
            if state == 0 || steps == states {
                break;
            }
        }
        if state == 0 && steps == states {
            let table: Vec<Symbol> = (0..states).map(|i| ((table_bits >> i) & 1) as Symbol).collect();
            out.push(FeedbackFunction::table(k, 2, table).expect("scan builds valid tables"));
        }
    }
    out
}

/// Result of Berlekamp–Massey synthesis: the shortest linear recurrence
/// `x_n = Σ c_i · x_{n−i}` (mod 2) generating the analyzed word from its
/// first `length` symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearComplexity {
    pub length: usize,
    pub connection: Vec<u8>,
}

impl LinearComplexity {
    /// Whether the recurrence regenerates `x` from its first `length`
    /// symbols.
    pub fn regenerates(&self, x: &Word) -> bool {
        let s = x.symbols();
        (self.length..s.len()).all(|i| {
            let predicted: u32 = (1..=self.length).map(|j| u32::from(self.connection[j - 1]) * s[i - j]).sum();
            predicted % 2 == s[i]
        })
    }
}

/// Berlekamp–Massey over the binary field.
pub fn berlekamp_massey(x: &Word) -> LinearComplexity {
    assert_eq!(x.alphabet_size(), 2, "Berlekamp–Massey is implemented for binary words");
    let s: Vec<u8> = x.symbols().iter().map(|&v| v as u8).collect();
    let n = s.len();
    let mut c = vec![0u8; n + 1];
    let mut b = vec![0u8; n + 1];
    c[0] = 1;
    b[0] = 1;
    let mut l = 0usize;
    let mut m = 1usize;
    for i in 0..n {
        let mut d = s[i];
        for j in 1..=l {
            d ^= c[j] & s[i - j];
        }
        if d == 0 {
            m += 1;
        } else if 2 * l <= i {
            let t = c.clone();
            for j in 0..=n - m {
                c[j + m] ^= b[j];
            }
            l = i + 1 - l;
            b = t;
            m = 1;
        } else {
            for j in 0..=n - m {
                c[j + m] ^= b[j];
            }
            m += 1;
        }
    }
    LinearComplexity { length: l, connection: c[1..=l].to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Taps and fill of the 5-stage register driven throughout the test
    /// suite; emits a 31-symbol maximal-length sequence.
    pub(crate) const DEMO_TAPS: [Symbol; 5] = [1, 0, 1, 1, 1];
    pub(crate) const DEMO_FILL: [Symbol; 5] = [0, 0, 0, 1, 0];
    pub(crate) const DEMO_M_SEQUENCE: &str = "0001010110100001100100111110111";

    /// Oracle for the tap/fill convention: simulate the mirrored layout
    /// (newest symbol first, matrix row on top, output read from the last
    /// coordinate) and compare streams.
    fn mirrored_lfsr_output(row: [u32; 5], init: [u32; 5], steps: usize) -> (Vec<u32>, [u32; 5]) {
        let mut v = init;
        let mut out = Vec::with_capacity(steps);
        for _ in 0..steps {
            out.push(v[4]);
            let top = row.iter().zip(v.iter()).map(|(r, x)| r * x).sum::<u32>() % 2;
            v = [top, v[0], v[1], v[2], v[3]];
        }
        (out, v)
    }

    fn demo_fsr() -> Fsr {
        Fsr::new(FeedbackFunction::linear(5, 2, DEMO_TAPS.to_vec()).unwrap())
    }

    #[test]
    fn step_linear_example() {
        let fsr = demo_fsr();
        assert_eq!(fsr.step(&DEMO_FILL).unwrap(), vec![0, 0, 1, 0, 1]);
    }

    #[test]
    fn step_table_one_stage() {
        let f = FeedbackFunction::table(1, 2, vec![1, 0]).unwrap();
        let fsr = Fsr::new(f);
        assert_eq!(fsr.step(&[0]).unwrap(), vec![1]);
        assert_eq!(fsr.step(&[1]).unwrap(), vec![0]);
    }

    #[test]
    fn step_table_three_stages() {
        // F with F(0,0,0) = 1; the two full-cycle tables of span 3 share it.
        for f in enumerate_full_cycle_feedbacks(3) {
            let fsr = Fsr::new(f);
            assert_eq!(fsr.step(&[0, 0, 0]).unwrap(), vec![0, 0, 1]);
        }
    }

    #[test]
    fn step_rejects_bad_fill() {
        let fsr = demo_fsr();
        assert_eq!(fsr.step(&[0, 1]), Err(FsrError::FillLength { expected: 5, got: 2 }));
        assert_eq!(
            fsr.step(&[0, 0, 0, 0, 2]),
            Err(FsrError::SymbolOutOfRange { symbol: 2, alphabet_size: 2 })
        );
    }

    #[test]
    fn shift_invariant_holds() {
        let f = FeedbackFunction::table(3, 3, (0..27).map(|i| i % 3).collect()).unwrap();
        let fsr = Fsr::new(f);
        for a in 0..3 {
            for b in 0..3 {
                for c in 0..3 {
                    let fill = [a, b, c];
                    let next = fsr.step(&fill).unwrap();
                    assert_eq!(&next[..2], &fill[1..]);
                }
            }
        }
    }

    #[test]
    fn run_two_cycle() {
        let f = FeedbackFunction::table(1, 2, vec![1, 0]).unwrap();
        let run = Fsr::new(f).run_until_periodic(&[0], 4).unwrap();
        assert_eq!(run.period, 2);
        assert_eq!(run.preperiod, 0);
        assert_eq!(run.output.render(), "01");
    }

    #[test]
    fn run_demo_register_has_period_31() {
        let run = demo_fsr().run_until_periodic(&DEMO_FILL, 40).unwrap();
        assert_eq!(run.period, 31);
        assert_eq!(run.preperiod, 0);
    }

    #[test]
    fn run_full_cycle_span_three_has_period_8() {
        for f in enumerate_full_cycle_feedbacks(3) {
            let run = Fsr::new(f).run_until_periodic(&[0, 0, 0], 9).unwrap();
            assert_eq!(run.period, 8);
            assert_eq!(run.preperiod, 0);
        }
    }

    #[test]
    fn run_budget_too_small_fails() {
        let fsr = demo_fsr();
        assert_eq!(
            fsr.run_until_periodic(&DEMO_FILL, 5),
            Err(FsrError::NoRecurrence { max_steps: 5 })
        );
    }

    #[test]
    fn rerun_from_preperiod_state_returns_in_exactly_period_steps() {
        let cases: Vec<(Fsr, Vec<Symbol>)> = vec![
            (demo_fsr(), DEMO_FILL.to_vec()),
            (Fsr::new(FeedbackFunction::table(2, 2, vec![1, 1, 0, 1]).unwrap()), vec![0, 0]),
            (Fsr::new(FeedbackFunction::table(2, 3, vec![2, 1, 0, 0, 1, 2, 1, 1, 0]).unwrap()), vec![0, 1]),
        ];
        for (fsr, fill) in cases {
            let q = fsr.alphabet_size() as usize;
            let bound = q.pow(fsr.stage_count() as u32) + 1;
            let run = fsr.run_until_periodic(&fill, bound).unwrap();
            let mut state = fill.clone();
            for _ in 0..run.preperiod {
                state = fsr.step(&state).unwrap();
            }
            let anchor = state.clone();
            for t in 1..=run.period {
                state = fsr.step(&state).unwrap();
                if t < run.period {
                    assert_ne!(state, anchor, "returned early");
                }
            }
            assert_eq!(state, anchor);
        }
    }

    #[test]
    fn m_sequence_matches_mirrored_convention() {
        let (mirror_out, mirror_final) = mirrored_lfsr_output([1, 1, 1, 0, 1], [0, 1, 0, 0, 0], 31);
        let word = generate_m_sequence(&DEMO_TAPS, &DEMO_FILL).unwrap();
        assert_eq!(word.symbols(), &mirror_out[..]);
        assert_eq!(word.render(), DEMO_M_SEQUENCE);
        // Both conventions return to their initial register contents.
        assert_eq!(mirror_final, [0, 1, 0, 0, 0]);
        let mut state = DEMO_FILL.to_vec();
        let fsr = demo_fsr();
        for _ in 0..31 {
            state = fsr.step(&state).unwrap();
        }
        assert_eq!(state, DEMO_FILL.to_vec());
    }

    #[test]
    fn m_sequence_zero_fill_rejected() {
        assert_eq!(generate_m_sequence(&DEMO_TAPS, &[0; 5]), Err(FsrError::ZeroFill));
    }

    #[test]
    fn m_sequence_non_maximal_taps_rejected() {
        // taps (1,0,0,0,0): new symbol equals the symbol leaving; period 5 ≠ 31.
        let err = generate_m_sequence(&[1, 0, 0, 0, 0], &DEMO_FILL).unwrap_err();
        assert!(matches!(err, FsrError::NotMaximalPeriod { expected: 31, .. }));
    }

    #[test]
    fn m_sequence_single_stage() {
        // Exhaust the k = 1 linear maps: only identity taps from fill (1)
        // keep period 1 = 2^1 − 1 with output "1"; the no-tap map also decays
        // to period 1 and emits the same first symbol.
        let word = generate_m_sequence(&[1], &[1]).unwrap();
        assert_eq!(word.render(), "1");
        assert_eq!(enumerate_m_sequences(1), vec![Word::parse("1", 2).unwrap()]);
    }

    #[test]
    fn enumerate_counts() {
        assert_eq!(enumerate_m_sequences(2).len(), 3);
        assert_eq!(enumerate_m_sequences(3).len(), 14);
    }

    #[test]
    fn enumerated_words_are_balanced() {
        for k in 1..=5 {
            for word in enumerate_m_sequences(k) {
                assert_eq!(word.len(), (1 << k) - 1);
                let ones: usize = word.symbols().iter().map(|&s| s as usize).sum();
                assert_eq!(ones, 1 << (k - 1), "word {word}");
            }
        }
    }

    #[test]
    fn full_cycle_counts_small_spans() {
        assert_eq!(enumerate_full_cycle_feedbacks(1).len(), 1);
        assert_eq!(enumerate_full_cycle_feedbacks(2).len(), 1);
        assert_eq!(enumerate_full_cycle_feedbacks(3).len(), 2);
        assert_eq!(enumerate_full_cycle_feedbacks(4).len(), 16);
    }

    #[test]
    fn full_cycle_single_stage_is_complement() {
        let fs = enumerate_full_cycle_feedbacks(1);
        assert_eq!(fs[0].table_string().unwrap(), "10");
    }

    #[test]
    fn full_cycle_maps_are_single_cycle_permutations() {
        for k in 1..=4 {
            for f in enumerate_full_cycle_feedbacks(k) {
                let fsr = Fsr::new(f);
                let mut state = vec![0; k];
                let mut seen = std::collections::HashSet::new();
                for _ in 0..(1 << k) {
                    assert!(seen.insert(state.clone()));
                    state = fsr.step(&state).unwrap();
                }
                assert_eq!(state, vec![0; k]);
            }
        }
    }

    #[test]
    fn berlekamp_massey_zero_word() {
        let lc = berlekamp_massey(&Word::parse("000000", 2).unwrap());
        assert_eq!(lc.length, 0);
        assert!(lc.connection.is_empty());
    }

    #[test]
    fn berlekamp_massey_late_one() {
        let lc = berlekamp_massey(&Word::parse("0001", 2).unwrap());
        assert_eq!(lc.length, 4);
    }

    #[test]
    fn berlekamp_massey_demo_sequence() {
        let word = Word::parse(DEMO_M_SEQUENCE, 2).unwrap();
        let lc = berlekamp_massey(&word);
        assert_eq!(lc.length, 5);
        assert!(lc.regenerates(&word));
    }

    #[test]
    fn berlekamp_massey_regenerates_every_analyzed_word() {
        for bits in 0u32..(1 << 10) {
            let symbols: Vec<Symbol> = (0..10).map(|i| (bits >> i) & 1).collect();
            let word = Word::new(symbols, 2).unwrap();
            let lc = berlekamp_massey(&word);
            assert!(lc.regenerates(&word), "word {word}");
        }
    }
}
