//! Trial fan-out shared by the Monte Carlo estimators.
//!
//! Each trial owns a per-worker scratch value; per-trial results are merged
//! with an associative, commutative `combine`, so totals do not depend on
//! scheduling or thread count.

#[cfg(feature = "parallel")]
pub(crate) fn fold_trials<W, A, I, F, C>(trials: u64, init: I, trial: F, zero: A, combine: C) -> A
where
    W: Send,
    A: Send + Clone + Sync,
    I: Fn() -> W + Sync + Send,
    F: Fn(&mut W, u64) -> A + Sync + Send,
    C: Fn(A, A) -> A + Sync + Send,
{
    use rayon::prelude::*;
    (0..trials).into_par_iter().map_init(&init, |w, t| trial(w, t)).reduce(|| zero.clone(), &combine)
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn fold_trials<W, A, I, F, C>(trials: u64, init: I, trial: F, zero: A, combine: C) -> A
where
    I: Fn() -> W,
    F: Fn(&mut W, u64) -> A,
    C: Fn(A, A) -> A,
{
    let mut w = init();
    (0..trials).fold(zero, |acc, t| combine(acc, trial(&mut w, t)))
}

pub(crate) fn count_trials<W, I, F>(trials: u64, init: I, trial: F) -> u64
where
    W: Send,
    I: Fn() -> W + Sync + Send,
    F: Fn(&mut W, u64) -> bool + Sync + Send,
{
    fold_trials(trials, init, |w, t| u64::from(trial(w, t)), 0u64, |a, b| a + b)
}
