//! Closed-form bounds attached to complexity results.

/// Universal upper bound `⌊n/2⌋ + 1` on the unique-path NFA measure.
pub fn hyde_bound(n: usize) -> usize {
    n / 2 + 1
}

/// Lower-bound report for words produced by a `k`-stage register. The bound
/// `(n+1)/2 − k(k−1)/2` applies when the run period exceeds `k` and
/// `n + 1 ≥ 2k(k−1)`; it can be a half-integer, so it is carried as twice
/// its value in exact integer arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BoundReport {
    pub n: usize,
    pub hyde_upper: usize,
    pub stage_count: Option<usize>,
    pub period: Option<usize>,
    pub mainy_applicable: bool,
    pub mainy_twice: Option<i64>,
}

impl BoundReport {
    pub fn mainy_value(&self) -> Option<f64> {
        self.mainy_twice.map(|t| t as f64 / 2.0)
    }

    /// `value ≥ bound`, evaluated without rounding.
    pub fn admits(&self, value: usize) -> bool {
        match self.mainy_twice {
            Some(twice) => 2 * value as i64 >= twice,
            None => true,
        }
    }
}

fn build_report(n: usize, k: usize, period: Option<usize>) -> BoundReport {
    assert!(n >= 1 && k >= 1, "word length and stage count must be positive");
    let arithmetic_ok = (n as i64 + 1) >= 2 * k as i64 * (k as i64 - 1);
    let period_ok = period.is_none_or(|p| p > k);
    let applicable = arithmetic_ok && period_ok;
    BoundReport {
        n,
        hyde_upper: hyde_bound(n),
        stage_count: Some(k),
        period,
        mainy_applicable: applicable,
        mainy_twice: applicable.then(|| (n as i64 + 1) - k as i64 * (k as i64 - 1)),
    }
}

/// Register lower bound with the run period left unchecked (the caller is
/// responsible for the period hypothesis).
pub fn mainy_lower_bound(n: usize, k: usize) -> BoundReport {
    build_report(n, k, None)
}

/// Register lower bound with both hypotheses checked.
pub fn mainy_lower_bound_with_period(n: usize, k: usize, period: usize) -> BoundReport {
    build_report(n, k, Some(period))
}

/// The cap sequence for per-state occurrence counts along a unique accepting
/// path of a word produced by a `k`-stage register: the value `⌈k/i⌉ + 1`
/// repeated `i` times, for `i = 1, 2, …`.
pub fn occurrence_bounds(k: usize, count: usize) -> Vec<u64> {
    assert!(k >= 1, "stage count must be positive");
    let mut out = Vec::with_capacity(count);
    let mut block = 1u64;
    while out.len() < count {
        let value = (k as u64).div_ceil(block) + 1;
        for _ in 0..block {
            if out.len() == count {
                break;
            }
            out.push(value);
        }
        block += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_example_single_stage() {
        let report = mainy_lower_bound(7, 1);
        assert!(report.mainy_applicable);
        assert_eq!(report.mainy_twice, Some(8));
        assert_eq!(report.mainy_value(), Some(4.0));
        assert_eq!(report.hyde_upper, 4);
    }

    #[test]
    fn bound_hypothesis_fails_for_demo_register() {
        // n + 1 = 32 < 2·5·4 = 40.
        let report = mainy_lower_bound(31, 5);
        assert!(!report.mainy_applicable);
        assert_eq!(report.mainy_twice, None);
    }

    #[test]
    fn bound_example_two_stages() {
        let report = mainy_lower_bound(15, 2);
        assert!(report.mainy_applicable);
        assert_eq!(report.mainy_value(), Some(7.0));
    }

    #[test]
    fn period_hypothesis_is_checked_when_known() {
        let report = mainy_lower_bound_with_period(7, 1, 1);
        assert!(!report.mainy_applicable);
        let report = mainy_lower_bound_with_period(7, 1, 7);
        assert!(report.mainy_applicable);
    }

    #[test]
    fn bound_never_exceeds_hyde_upper() {
        for n in 1..=40 {
            for k in 1..=6 {
                let report = mainy_lower_bound(n, k);
                if let Some(value) = report.mainy_value() {
                    assert!(value <= report.hyde_upper as f64, "n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn occurrence_bounds_examples() {
        assert_eq!(occurrence_bounds(3, 6), vec![4, 3, 3, 2, 2, 2]);
        assert_eq!(occurrence_bounds(1, 5), vec![2, 2, 2, 2, 2]);
    }

    #[test]
    fn occurrence_bounds_prefix_sum_within_register_budget() {
        // Entries above 2 stop before block k; their total stays within
        // 2k(k−1) for k = 5.
        let k = 5;
        let bounds = occurrence_bounds(k, 64);
        let above_two: u64 = bounds.iter().take_while(|&&b| b > 2).sum();
        assert_eq!(bounds.iter().take_while(|&&b| b > 2).count(), k * (k - 1) / 2);
        assert!(above_two <= 2 * (k as u64) * (k as u64 - 1));
    }
}
