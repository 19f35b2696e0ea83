//! Finite words over `{0, …, q−1}` and detection of repeated blocks
//! (powers) inside them.

use std::fmt;

use thiserror::Error;

/// A single symbol; always less than the alphabet size of its word.
pub type Symbol = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("alphabet size must be at least 1")]
    EmptyAlphabet,
    #[error("symbol {symbol} out of range for alphabet size {alphabet_size}")]
    SymbolOutOfRange { symbol: Symbol, alphabet_size: u32 },
    #[error("malformed word text {text:?}: {reason}")]
    Malformed { text: String, reason: String },
    #[error("period length {period_len} out of range for word of length {len}")]
    PeriodOutOfRange { period_len: usize, len: usize },
}

/// An immutable finite sequence over the alphabet `{0, …, q−1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    symbols: Vec<Symbol>,
    alphabet_size: u32,
}

impl Word {
    /// Builds a word, checking every symbol against the alphabet size.
    pub fn new(symbols: Vec<Symbol>, alphabet_size: u32) -> Result<Self, WordError> {
        if alphabet_size == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        if let Some(&symbol) = symbols.iter().find(|&&s| s >= alphabet_size) {
            return Err(WordError::SymbolOutOfRange { symbol, alphabet_size });
        }
        Ok(Word { symbols, alphabet_size })
    }

    pub fn empty(alphabet_size: u32) -> Self {
        assert!(alphabet_size >= 1, "alphabet size must be at least 1");
        Word { symbols: Vec::new(), alphabet_size }
    }

    /// Convenience constructor for binary words given as 0/1 values.
    pub fn binary(bits: &[u8]) -> Self {
        let symbols = bits.iter().map(|&b| Symbol::from(b)).collect();
        Word::new(symbols, 2).expect("binary symbols must be 0 or 1")
    }

    /// Parses the textual form: one digit per symbol when `q ≤ 10`,
    /// comma-separated decimal symbols otherwise. The empty string is the
    /// empty word in both syntaxes.
    pub fn parse(text: &str, alphabet_size: u32) -> Result<Self, WordError> {
        if alphabet_size == 0 {
            return Err(WordError::EmptyAlphabet);
        }
        if text.is_empty() {
            return Ok(Word::empty(alphabet_size));
        }
        let malformed = |reason: &str| WordError::Malformed {
            text: text.to_owned(),
            reason: reason.to_owned(),
        };
        let symbols = if alphabet_size <= 10 {
            text.chars()
                .map(|c| c.to_digit(10).ok_or_else(|| malformed("expected a digit")))
                .collect::<Result<Vec<_>, _>>()?
        } else {
            text.split(',')
                .map(|tok| {
                    tok.trim()
                        .parse::<Symbol>()
                        .map_err(|_| malformed("expected comma-separated decimal symbols"))
                })
                .collect::<Result<Vec<_>, _>>()?
        };
        Word::new(symbols, alphabet_size)
    }

    /// Inverse of [`Word::parse`].
    pub fn render(&self) -> String {
        if self.alphabet_size <= 10 {
            self.symbols.iter().map(|s| s.to_string()).collect()
        } else {
            let parts: Vec<String> = self.symbols.iter().map(|s| s.to_string()).collect();
            parts.join(",")
        }
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn alphabet_size(&self) -> u32 {
        self.alphabet_size
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word { symbols, alphabet_size: self.alphabet_size }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({:?}, q={})", self.render(), self.alphabet_size)
    }
}

/// A maximal repetition inside a word: the block of length `period_len`
/// starting at `start` repeats exactly `exponent` times, and the repetition
/// extends by a full block neither to the left nor to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PowerOccurrence {
    pub start: usize,
    pub period_len: usize,
    pub exponent: usize,
}

impl PowerOccurrence {
    /// Checks the defining index equalities against `x`.
    pub fn holds_in(&self, x: &Word) -> bool {
        let s = self.period_len;
        let u = self.exponent;
        if s == 0 || u == 0 || self.start + s * u > x.len() {
            return false;
        }
        let sym = x.symbols();
        (0..s * (u - 1)).all(|t| sym[self.start + t] == sym[self.start + t + s])
    }
}

/// Run lengths of positions where `x[i] == x[i + s]`, scanning right to left.
/// `run[i]` is the number of consecutive matches starting at `i`.
fn match_runs(sym: &[Symbol], s: usize) -> Vec<usize> {
    let n = sym.len();
    if s >= n {
        return Vec::new();
    }
    let mut run = vec![0usize; n - s];
    for i in (0..n - s).rev() {
        if sym[i] == sym[i + s] {
            run[i] = 1 + if i + 1 < n - s { run[i + 1] } else { 0 };
        }
    }
    run
}

/// Every maximal power occurrence with exponent at least 2, for every period
/// length `1 ≤ s ≤ ⌊n/2⌋`, ordered by start position then period length.
pub fn scan_powers(x: &Word) -> Vec<PowerOccurrence> {
    let n = x.len();
    let sym = x.symbols();
    let mut out = Vec::new();
    for s in 1..=n / 2 {
        let run = match_runs(sym, s);
        for i in 0..n - s {
            let exponent = run[i] / s + 1;
            if exponent < 2 {
                continue;
            }
            // Left-maximal: the same block does not already repeat one full
            // period earlier.
            if i >= s && run[i - s] >= s {
                continue;
            }
            out.push(PowerOccurrence { start: i, period_len: s, exponent });
        }
    }
    out.sort_by_key(|p| (p.start, p.period_len));
    out
}

/// The largest `u` such that some block of length `s` repeats `u` times
/// consecutively in `x`; 1 when there is no repetition.
pub fn max_exponent_for_period(x: &Word, s: usize) -> Result<usize, WordError> {
    let n = x.len();
    if s == 0 || s > n {
        return Err(WordError::PeriodOutOfRange { period_len: s, len: n });
    }
    let run = match_runs(x.symbols(), s);
    Ok(run.iter().map(|&r| r / s + 1).max().unwrap_or(1))
}

#[cfg(test)]
mod tests {
    use super::*;

    // Literal-minded power scan used as the oracle: test every
    // (start, period, exponent) triple by direct symbol comparison.
    fn scan_powers_naive(x: &Word) -> Vec<PowerOccurrence> {
        let n = x.len();
        let sym = x.symbols();
        let is_power = |start: usize, s: usize, u: usize| -> bool {
            start + s * u <= n && (0..s * (u - 1)).all(|t| sym[start + t] == sym[start + t + s])
        };
        let mut out = Vec::new();
        for start in 0..n {
            for s in 1..=n / 2 {
                let mut u = 1;
                while is_power(start, s, u + 1) {
                    u += 1;
                }
                let left_extends = start >= s && is_power(start - s, s, u + 1);
                if u >= 2 && !left_extends {
                    out.push(PowerOccurrence { start, period_len: s, exponent: u });
                }
            }
        }
        out
    }

    fn all_words(len: usize, q: u32) -> Vec<Word> {
        let mut words = vec![Vec::new()];
        for _ in 0..len {
            words = words
                .into_iter()
                .flat_map(|w| {
                    (0..q).map(move |c| {
                        let mut w2 = w.clone();
                        w2.push(c);
                        w2
                    })
                })
                .collect();
        }
        words.into_iter().map(|w| Word::new(w, q).unwrap()).collect()
    }

    #[test]
    fn parse_examples() {
        let w = Word::parse("00011101", 2).unwrap();
        assert_eq!(w.len(), 8);
        assert_eq!(w.alphabet_size(), 2);

        assert!(Word::parse("", 2).unwrap().is_empty());

        let y = Word::parse("0123456", 7).unwrap();
        assert_eq!(y.len(), 7);
        assert_eq!(y.symbols(), &[0, 1, 2, 3, 4, 5, 6]);
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(
            Word::parse("012", 2),
            Err(WordError::SymbolOutOfRange { symbol: 2, alphabet_size: 2 })
        );
        assert!(matches!(Word::parse("0a1", 2), Err(WordError::Malformed { .. })));
        assert!(matches!(Word::parse("3,x", 12), Err(WordError::Malformed { .. })));
        assert_eq!(
            Word::parse("3,12", 12),
            Err(WordError::SymbolOutOfRange { symbol: 12, alphabet_size: 12 })
        );
        assert_eq!(Word::parse("0", 0), Err(WordError::EmptyAlphabet));
    }

    #[test]
    fn parse_comma_syntax_round_trips() {
        let w = Word::parse("3, 11, 0", 12).unwrap();
        assert_eq!(w.symbols(), &[3, 11, 0]);
        assert_eq!(w.render(), "3,11,0");
        assert_eq!(Word::parse(&w.render(), 12).unwrap(), w);
    }

    #[test]
    fn scan_powers_run_of_equal_symbols() {
        let x = Word::parse("000", 2).unwrap();
        let powers = scan_powers(&x);
        assert!(powers.contains(&PowerOccurrence { start: 0, period_len: 1, exponent: 3 }));
    }

    #[test]
    fn scan_powers_prefix_run() {
        let x = Word::parse("00011101", 2).unwrap();
        let max_exp = scan_powers(&x)
            .iter()
            .filter(|p| p.period_len == 1)
            .map(|p| p.exponent)
            .max()
            .unwrap();
        assert_eq!(max_exp, 3);
    }

    #[test]
    fn scan_powers_square_at_start() {
        let x = Word::parse("0101101", 2).unwrap();
        let expected = scan_powers_naive(&x);
        assert_eq!(scan_powers(&x), expected);
        assert!(expected.contains(&PowerOccurrence { start: 0, period_len: 2, exponent: 2 }));
    }

    #[test]
    fn scan_powers_matches_naive_small_exhaustive() {
        for q in [2u32, 3] {
            for len in 0..=8 {
                for x in all_words(len, q) {
                    assert_eq!(scan_powers(&x), scan_powers_naive(&x), "word {x}");
                }
            }
        }
    }

    #[test]
    fn scan_powers_occurrences_hold() {
        for x in all_words(9, 2) {
            for p in scan_powers(&x) {
                assert!(p.holds_in(&x), "{p:?} in {x}");
            }
        }
    }

    #[test]
    fn max_exponent_examples() {
        let w = Word::parse("0000", 2).unwrap();
        assert_eq!(max_exponent_for_period(&w, 1).unwrap(), 4);

        let w = Word::parse("00011101", 2).unwrap();
        assert_eq!(max_exponent_for_period(&w, 1).unwrap(), 3);

        let w = Word::parse("0101101", 2).unwrap();
        assert_eq!(max_exponent_for_period(&w, 2).unwrap(), 2);
    }

    #[test]
    fn max_exponent_range_checks() {
        let w = Word::parse("0101", 2).unwrap();
        assert!(max_exponent_for_period(&w, 0).is_err());
        assert!(max_exponent_for_period(&w, 5).is_err());
        // s = |x| is allowed and trivially gives exponent 1.
        assert_eq!(max_exponent_for_period(&w, 4).unwrap(), 1);
    }

    #[test]
    fn max_exponent_agrees_with_scan() {
        for x in all_words(10, 2) {
            let powers = scan_powers(&x);
            for s in 1..=x.len() {
                let from_scan = powers
                    .iter()
                    .filter(|p| p.period_len == s)
                    .map(|p| p.exponent)
                    .max()
                    .unwrap_or(1);
                assert_eq!(max_exponent_for_period(&x, s).unwrap(), from_scan);
            }
        }
    }
}
