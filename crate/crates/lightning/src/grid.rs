use crate::error::{CliError, CliResult};

/// Parses `start:stop:step`. `stop` is included when a grid point lands
/// within 1e-12 of it; points are rounded to 12 decimals.
pub fn parse_grid(text: &str) -> CliResult<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err(CliError::validation(format!("grid `{text}` is not start:stop:step")));
    };
    let num = |s: &str| {
        s.trim().parse::<f64>().map_err(|_| CliError::validation(format!("grid `{text}`: `{s}` is not a number")))
    };
    let (start, stop, step) = (num(start)?, num(stop)?, num(step)?);
    if !(step.is_finite() && step > 0.0) {
        return Err(CliError::validation(format!("grid `{text}`: step must be positive")));
    }
    if !(start.is_finite() && stop.is_finite()) || start > stop {
        return Err(CliError::validation(format!("grid `{text}`: need start <= stop")));
    }
    let count = ((stop - start) / step + 1e-12 / step).floor() as u64 + 1;
    if count > 1_000_000 {
        return Err(CliError::validation(format!("grid `{text}` has too many points")));
    }
    let grid: Vec<f64> = (0..count).map(|k| round12(start + k as f64 * step)).collect();
    check_grid(&grid)?;
    Ok(grid)
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Finite, strictly increasing, inside `[0, 1]`.
pub fn check_grid(grid: &[f64]) -> CliResult<()> {
    if grid.is_empty() {
        return Err(CliError::validation("empty eps grid"));
    }
    if let Some(bad) = grid.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        return Err(CliError::validation(format!("grid point {bad} outside [0, 1]")));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::validation("eps grid must be strictly increasing"));
    }
    Ok(())
}
