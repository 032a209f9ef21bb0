/// Probability `1/(n+1)!` that a fixed path of `n` edges is open at ε = 0,
/// i.e. that `n + 1` i.i.d. uniforms are strictly decreasing.
///
/// Underflows to zero for `n >= 170`; see [`eps0_path_log_probability`].
pub fn eps0_path_probability(n: u32) -> f64 {
    (2..=n + 1).fold(1.0, |acc, k| acc / f64::from(k))
}

/// `-ln((n+1)!)`.
pub fn eps0_path_log_probability(n: u32) -> f64 {
    -(2..=n + 1).map(|k| crate::math::ln(f64::from(k))).sum::<f64>()
}
