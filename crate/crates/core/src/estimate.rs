use crate::math;

/// z-score of the two-sided 95% normal interval.
pub const Z95: f64 = 1.96;

/// Binomial proportion estimate with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub successes: u64,
    pub point_estimate: f64,
    pub ci_half_width: f64,
}

impl McEstimate {
    /// # Panics
    /// If `trials == 0` or `successes > trials`.
    pub fn from_counts(successes: u64, trials: u64) -> Self {
        assert!(trials > 0, "an estimate needs at least one trial");
        assert!(successes <= trials, "more successes than trials");
        let p = successes as f64 / trials as f64;
        Self { trials, successes, point_estimate: p, ci_half_width: Z95 * math::sqrt(p * (1.0 - p) / trials as f64) }
    }

    /// Standard error `sqrt(p(1-p)/trials)` of the point estimate.
    pub fn std_error(&self) -> f64 {
        self.ci_half_width / Z95
    }

    /// Standard error of a proportion `p` measured over this many trials.
    pub fn std_error_at(&self, p: f64) -> f64 {
        math::sqrt(p * (1.0 - p) / self.trials as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_width_matches_formula() {
        let e = McEstimate::from_counts(250, 1000);
        assert_eq!(e.point_estimate, 0.25);
        let expected = 1.96 * (0.25f64 * 0.75 / 1000.0).sqrt();
        assert!((e.ci_half_width - expected).abs() < 1e-15);
    }

    #[test]
    fn degenerate_proportions_have_zero_width() {
        assert_eq!(McEstimate::from_counts(0, 10).ci_half_width, 0.0);
        assert_eq!(McEstimate::from_counts(10, 10).ci_half_width, 0.0);
    }
}
