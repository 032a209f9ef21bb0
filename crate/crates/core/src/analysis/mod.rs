//! Graph analytics on edge configurations: directed reachability, strongly
//! connected clusters, crossing-cluster counts and Monte Carlo estimators.

mod cluster;
pub mod fixtures;
mod mc;
pub mod oracle;
mod reach;
mod scc;
mod site;

pub use cluster::{cluster_count, cluster_count_auto, ClusterCountResult};
pub use mc::{
    mc_attracting, mc_fixed_path, mc_strong, mc_sweep, mc_weak, percolation_indicators, simulate, Indicators,
    PercolationEstimates, TrialWorkspace,
};
pub use oracle::{scc_oracle, ORACLE_MAX_HALF_WIDTH};
pub use reach::{backward_reach, forward_reach, strong_cluster, ReachSet, Workspace};
pub use scc::{all_sccs, SccPartition};
pub use site::{site_coupling_clusters, SiteClusters};
