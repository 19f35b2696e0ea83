use super::*;
use crate::automata::hyde_witness;
use crate::fsr::generate_m_sequence;
use crate::words::Word;

fn an(text: &str, q: u32) -> usize {
    let word = Word::parse(text, q).unwrap();
    compute_an(&word, &SearchOptions::default()).unwrap().value
}

fn aminus(text: &str) -> usize {
    let word = Word::parse(text, 2).unwrap();
    compute_aminus(&word, &SearchOptions::default()).unwrap().value
}

fn a(text: &str) -> usize {
    let word = Word::parse(text, 2).unwrap();
    compute_a(&word, &SearchOptions::default()).unwrap().value
}

fn all_binary_words(len: usize) -> Vec<Word> {
    (0u32..(1 << len))
        .map(|bits| Word::new((0..len).map(|i| (bits >> i) & 1).collect(), 2).unwrap())
        .collect()
}

#[test]
fn an_empty_word() {
    assert_eq!(an("", 2), 1);
}

#[test]
fn an_constant_word() {
    assert_eq!(an("00000", 2), 1);
}

#[test]
fn an_de_bruijn_output_is_four() {
    let word = Word::parse("00011101", 2).unwrap();
    let result = compute_an(&word, &SearchOptions::default()).unwrap();
    assert_eq!(result.value, 4);
    assert_eq!(result.stats.levels_exhausted, 3);
    assert_eq!(result.witness.state_count(), 4);
    assert!(result.witness.validates(&word));
}

#[test]
fn an_seven_symbol_progression_is_four() {
    assert_eq!(an("0123456", 7), 4);
}

#[test]
fn an_reversal_invariance() {
    for text in ["00011101", "010011", "1101000101", "0110"] {
        let word = Word::parse(text, 2).unwrap();
        let forward = compute_an(&word, &SearchOptions::default()).unwrap();
        let backward = compute_an(&word.reversed(), &SearchOptions::default()).unwrap();
        assert_eq!(forward.value, backward.value, "word {text}");
        // The reversed witness certifies the reversed word directly.
        let Witness::Nfa(nfa) = &forward.witness else { unreachable!() };
        let reversed = nfa.reversed().unwrap();
        assert!(crate::automata::is_unique_nfa_witness(&reversed, &word.reversed()));
    }
}

#[test]
fn an_values_do_not_depend_on_prunes_or_threads() {
    let word = generate_m_sequence(&[1, 1], &[0, 1]).unwrap(); // span 2, length 3
    let mut words: Vec<Word> = all_binary_words(6);
    words.push(word);
    for word in &words {
        let baseline = compute_an(word, &SearchOptions::default()).unwrap().value;
        for occurrence in [false, true] {
            for feasibility in [false, true] {
                for walk in [false, true] {
                    let opts = SearchOptions {
                        prune: PruneConfig {
                            occurrence_bounds: occurrence,
                            state_feasibility: feasibility,
                            walk_cap: walk,
                        },
                        fsr_hint: occurrence.then_some(FsrHint { stage_count: 2, period: None }),
                        ..SearchOptions::default()
                    };
                    assert_eq!(compute_an(word, &opts).unwrap().value, baseline, "word {word}");
                }
            }
        }
        let threaded = SearchOptions { threads: 3, ..SearchOptions::default() };
        assert_eq!(compute_an(word, &threaded).unwrap().value, baseline);
    }
}

#[test]
fn an_budget_exhaustion_reports_bounds() {
    let word = Word::parse("0001010110100001", 2).unwrap();
    let opts = SearchOptions { max_nodes: Some(50), ..SearchOptions::default() };
    match compute_an(&word, &opts) {
        Err(SolverError::BudgetExhausted { measure, lower, upper, .. }) => {
            assert_eq!(measure, Measure::NfaUniquePath);
            assert!(lower >= 1 && lower <= upper);
            assert_eq!(upper, bounds::hyde_bound(word.len()));
        }
        other => panic!("expected budget exhaustion, got {other:?}"),
    }
}

#[test]
fn aminus_constant_words() {
    for n in 1..=6 {
        assert_eq!(aminus(&"0".repeat(n)), 1);
    }
}

#[test]
fn aminus_chain_holds_on_short_words() {
    for word in all_binary_words(5) {
        let opts = SearchOptions::default();
        let an = compute_an(&word, &opts).unwrap().value;
        let aminus = compute_aminus(&word, &opts).unwrap().value;
        let a = compute_a(&word, &opts).unwrap().value;
        assert!(an <= aminus && aminus <= a && a <= aminus + 1, "word {word}: {an} {aminus} {a}");
    }
}

#[test]
fn a_constant_words_need_a_dead_state() {
    for n in 1..=5 {
        let word = Word::parse(&"0".repeat(n), 2).unwrap();
        let result = compute_a(&word, &SearchOptions::default()).unwrap();
        assert_eq!(result.value, 2);
        let Witness::Dfa(dfa) = &result.witness else { unreachable!() };
        assert!(dfa.is_total());
        assert!(result.witness.validates(&word));
    }
}

#[test]
fn a_empty_word() {
    assert_eq!(a(""), 1);
}

#[test]
fn a_unary_alphabet_needs_no_dead_state() {
    let word = Word::new(vec![0; 4], 1).unwrap();
    let result = compute_a(&word, &SearchOptions::default()).unwrap();
    assert_eq!(result.value, 1);
}

#[test]
fn survey_length_one_attains_everywhere() {
    let report = survey_hyde_fraction(1, false).unwrap();
    assert_eq!(report.attained, 2);
    assert_eq!(report.total, 2);
    assert_eq!(report.fraction(), 1.0);
}

#[test]
fn survey_refuses_large_lengths_without_force() {
    assert!(matches!(
        survey_hyde_fraction(SURVEY_EXHAUSTIVE_LIMIT + 1, false),
        Err(SolverError::SurveyTooLarge { .. })
    ));
}

#[test]
fn hyde_witness_even_lengths_validate() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for n in [2usize, 4, 6, 8, 10] {
        for _ in 0..20 {
            let word = Word::new((0..n).map(|_| rng.gen_range(0..2)).collect(), 2).unwrap();
            let witness = hyde_witness(&word);
            assert!(witness.state_count() <= bounds::hyde_bound(n));
            assert!(crate::automata::is_unique_nfa_witness(&witness, &word), "word {word}");
        }
    }
}

#[test]
fn christmas_small_spans_pass() {
    let report = verify_christmas(3, &SearchOptions::default());
    assert!(report.passed, "{report:?}");
    assert_eq!(report.entries.len(), 1 + 3 + 14);
    for entry in report.entries.iter().filter(|e| e.span == 3) {
        assert_eq!(entry.value, Some(4));
    }
}

#[test]
fn shortpowers_randomized_bound_holds() {
    let report = verify_shortpowers(40, 3, 0xfeed);
    assert!(report.passed, "{:?}", report.violations);
}

#[test]
fn hyde_randomized_check_passes() {
    let report = verify_hyde(6, 25, 0xbeef, &SearchOptions::default());
    assert!(report.passed, "{report:?}");
}

#[test]
fn mainy_randomized_check_passes() {
    let report = verify_mainy(8, 0xcafe, &SearchOptions::default());
    assert!(report.passed, "{report:?}");
    assert!(report.example_ok && report.inapplicable_ok);
}

#[test]
fn refute_nsf_budget_exhaustion_is_reported() {
    let opts = SearchOptions { max_nodes: Some(1_000), ..SearchOptions::default() };
    let report = verify_refute_nsf(&opts);
    assert!(!report.passed);
    assert!(report.exhausted.is_some());
}
