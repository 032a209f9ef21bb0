//! Monte Carlo estimators of finite-box percolation events.
//!
//! "Percolates" is proxied by reaching the outer layer `max(|x|, |y|) = r` of
//! `B_r`. Trial `t` draws its field from `rng.substream(t)`, so a trial's
//! outcome depends only on `(rng, t)` and never on scheduling.

use alloc::vec;
use alloc::vec::Vec;

use super::reach::{Orientation, Workspace};
use crate::error::{Error, Result};
use crate::estimate::McEstimate;
use crate::lattice::{edge_map_into, opens, sample_into, BoxRegion, EdgeConfig, Epsilon, Vertex};
use crate::parallel::{count_trials, fold_trials};
use crate::rng::{PotentialSampler, RngSeed};

/// Per-trial outcomes for one configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Indicators {
    /// The origin reaches the boundary layer.
    pub weak: bool,
    /// The origin's strong cluster meets the boundary layer.
    pub strong: bool,
    /// The boundary layer reaches the origin.
    pub attracting: bool,
}

impl Indicators {
    fn counts(self) -> [u64; 3] {
        [u64::from(self.weak), u64::from(self.strong), u64::from(self.attracting)]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PercolationEstimates {
    pub weak: McEstimate,
    pub strong: McEstimate,
    pub attracting: McEstimate,
}

impl PercolationEstimates {
    fn from_counts(c: [u64; 3], trials: u64) -> Self {
        Self {
            weak: McEstimate::from_counts(c[0], trials),
            strong: McEstimate::from_counts(c[1], trials),
            attracting: McEstimate::from_counts(c[2], trials),
        }
    }
}

/// Scratch buffers owned by one worker.
#[derive(Debug, Clone)]
pub struct TrialWorkspace {
    values: Vec<f64>,
    config: EdgeConfig,
    bfs: Workspace,
}

impl TrialWorkspace {
    pub fn new() -> Self {
        Self { values: Vec::new(), config: EdgeConfig::empty(BoxRegion::new(0)), bfs: Workspace::new() }
    }

    fn load(&mut self, region: BoxRegion, rng: RngSeed) {
        sample_into(region, rng, &mut self.values);
    }

    fn configure(&mut self, region: BoxRegion, eps: Epsilon) -> (&EdgeConfig, &mut Workspace) {
        edge_map_into(region, &self.values, eps, &mut self.config);
        (&self.config, &mut self.bfs)
    }
}

impl Default for TrialWorkspace {
    fn default() -> Self {
        Self::new()
    }
}

fn origin_index(config: &EdgeConfig) -> usize {
    config.region().index(Vertex::ORIGIN).expect("every box contains the origin")
}

pub(crate) fn weak_indicator(config: &EdgeConfig, ws: &mut Workspace) -> bool {
    let region = config.region();
    ws.bfs(config, origin_index(config), Orientation::Forward, 0, None, |i| region.is_boundary_index(i))
}

pub(crate) fn attracting_indicator(config: &EdgeConfig, ws: &mut Workspace) -> bool {
    let region = config.region();
    ws.bfs(config, origin_index(config), Orientation::Backward, 0, None, |i| region.is_boundary_index(i))
}

pub(crate) fn strong_indicator(config: &EdgeConfig, ws: &mut Workspace) -> bool {
    let region = config.region();
    ws.bfs(config, origin_index(config), Orientation::Forward, 0, None, |_| false);
    if !ws.visited().iter().any(|&i| region.is_boundary_index(i as usize)) {
        return false;
    }
    // A vertex reaching the origin that the origin also reaches lies on a
    // cycle through the origin, all of whose vertices are forward-reachable.
    let forward = ws.epoch();
    ws.bfs(config, origin_index(config), Orientation::Backward, 1, Some(forward), |i| region.is_boundary_index(i))
}

/// All three indicators of one configuration.
pub fn percolation_indicators(config: &EdgeConfig, ws: &mut Workspace) -> Indicators {
    let strong = strong_indicator(config, ws);
    let weak = strong || weak_indicator(config, ws);
    let attracting = attracting_indicator(config, ws);
    Indicators { weak, strong, attracting }
}

fn check(r: u32, trials: u64) -> Result<BoxRegion> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1"));
    }
    if r == 0 {
        return Err(Error::InvalidParameter("box half-width must be at least 1"));
    }
    if r > BoxRegion::MAX_HALF_WIDTH {
        return Err(Error::InvalidParameter("box half-width too large"));
    }
    Ok(BoxRegion::new(r))
}

fn mc_single(
    eps: Epsilon,
    r: u32,
    trials: u64,
    rng: RngSeed,
    indicator: fn(&EdgeConfig, &mut Workspace) -> bool,
) -> Result<McEstimate> {
    let region = check(r, trials)?;
    let hits = count_trials(trials, TrialWorkspace::new, |w, t| {
        w.load(region, rng.substream(t));
        let (config, bfs) = w.configure(region, eps);
        indicator(config, bfs)
    });
    Ok(McEstimate::from_counts(hits, trials))
}

/// Fraction of trials in which the origin reaches the boundary of `B_r`.
pub fn mc_weak(eps: Epsilon, r: u32, trials: u64, rng: RngSeed) -> Result<McEstimate> {
    mc_single(eps, r, trials, rng, weak_indicator)
}

/// Fraction of trials in which the origin's strong cluster meets the boundary of `B_r`.
pub fn mc_strong(eps: Epsilon, r: u32, trials: u64, rng: RngSeed) -> Result<McEstimate> {
    mc_single(eps, r, trials, rng, strong_indicator)
}

/// Fraction of trials in which the boundary of `B_r` reaches the origin.
pub fn mc_attracting(eps: Epsilon, r: u32, trials: u64, rng: RngSeed) -> Result<McEstimate> {
    mc_single(eps, r, trials, rng, attracting_indicator)
}

fn add3(a: [u64; 3], b: [u64; 3]) -> [u64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// All three percolation estimates, computed from one shared set of trials.
pub fn simulate(eps: Epsilon, r: u32, trials: u64, rng: RngSeed) -> Result<PercolationEstimates> {
    let region = check(r, trials)?;
    let counts = fold_trials(
        trials,
        TrialWorkspace::new,
        |w, t| {
            w.load(region, rng.substream(t));
            let (config, bfs) = w.configure(region, eps);
            percolation_indicators(config, bfs).counts()
        },
        [0; 3],
        add3,
    );
    Ok(PercolationEstimates::from_counts(counts, trials))
}

/// Coupled sweep: trial `t` uses one field for every ε of the grid, so the
/// per-trial indicators are nondecreasing along an increasing grid.
pub fn mc_sweep(grid: &[Epsilon], r: u32, trials: u64, rng: RngSeed) -> Result<Vec<PercolationEstimates>> {
    let region = check(r, trials)?;
    let k = grid.len();
    let counts = fold_trials(
        trials,
        TrialWorkspace::new,
        |w, t| {
            w.load(region, rng.substream(t));
            grid.iter()
                .map(|&eps| {
                    let (config, bfs) = w.configure(region, eps);
                    percolation_indicators(config, bfs).counts()
                })
                .collect::<Vec<_>>()
        },
        vec![[0u64; 3]; k],
        |a, b| a.into_iter().zip(b).map(|(x, y)| add3(x, y)).collect(),
    );
    Ok(counts.into_iter().map(|c| PercolationEstimates::from_counts(c, trials)).collect())
}

/// Fraction of trials in which the straight path `(0,0) → (1,0) → … → (n,0)`
/// of `n` edges is open.
pub fn mc_fixed_path(eps: Epsilon, n: u32, trials: u64, rng: RngSeed) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1"));
    }
    let e = eps.value();
    let hits = count_trials(
        trials,
        || vec![0.0; n as usize + 1],
        |buf, t| {
            PotentialSampler::new(rng.substream(t)).fill_row(Vertex::ORIGIN, buf);
            buf.windows(2).all(|w| opens(w[0], w[1], e))
        },
    );
    Ok(McEstimate::from_counts(hits, trials))
}
