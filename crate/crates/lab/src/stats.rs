//! Wilson score intervals for Bernoulli estimates.

const Z95: f64 = 1.96;

/// 95% Wilson score interval for `failures` successes in `trials` draws.
/// Degenerate inputs (zero trials) return the full unit interval.
pub fn wilson_interval(failures: u64, trials: u64) -> (f64, f64) {
    assert!(failures <= trials, "failures exceed trials");
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = p + z2 / (2.0 * n);
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    let lo = ((center - half) / denom).max(0.0);
    let hi = ((center + half) / denom).min(1.0);
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorEstimate {
    pub failures: u64,
    pub trials: u64,
    pub p_hat: f64,
    pub ci95: (f64, f64),
}

impl ErrorEstimate {
    pub fn from_counts(failures: u64, trials: u64) -> Self {
        assert!(failures <= trials);
        let p_hat = if trials == 0 { 0.0 } else { failures as f64 / trials as f64 };
        ErrorEstimate { failures, trials, p_hat, ci95: wilson_interval(failures, trials) }
    }

    pub fn upper(&self) -> f64 {
        self.ci95.1
    }

    pub fn half_width(&self) -> f64 {
        (self.ci95.1 - self.ci95.0) / 2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_matches_hand_computation() {
        // One failure in ten trials, z = 1.96: worked by hand from the score
        // interval formula.
        let (lo, hi) = wilson_interval(1, 10);
        assert!((lo - 0.017876).abs() < 1e-4, "lo = {lo}");
        assert!((hi - 0.404157).abs() < 1e-4, "hi = {hi}");
    }

    #[test]
    fn wilson_edge_cases_stay_in_unit_interval() {
        let (lo, hi) = wilson_interval(0, 50);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.1);
        let (lo, hi) = wilson_interval(50, 50);
        assert!(lo > 0.9 && lo < 1.0);
        assert_eq!(hi, 1.0);
        assert_eq!(wilson_interval(0, 0), (0.0, 1.0));
    }

    #[test]
    fn interval_contains_the_point_estimate() {
        for (f, t) in [(0u64, 7u64), (3, 11), (500, 1000), (999, 1000)] {
            let e = ErrorEstimate::from_counts(f, t);
            assert!(e.ci95.0 <= e.p_hat && e.p_hat <= e.ci95.1);
        }
    }
}
