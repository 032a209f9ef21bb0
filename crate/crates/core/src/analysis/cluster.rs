use alloc::vec;

use super::all_sccs;
use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeConfig};

/// `C(m, n, r)`: strongly connected clusters of the configuration restricted
/// to `B_r` that meet both `B_m` and the complement of `B_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClusterCountResult {
    pub m: u32,
    pub n: u32,
    pub r: u32,
    pub count: usize,
    /// The mutual-reachability relation on `B_r` is the same whether computed
    /// inside `B_r` or inside the whole configuration box. The count is then
    /// constant for every radius from `r` up to the box half-width.
    pub stabilized: bool,
    /// The relation on `B_n` is unchanged from `B_{r-1}` to `B_r` (requires `r - 1 > n`).
    pub unchanged_from_previous: bool,
}

fn check_radii(config: &EdgeConfig, m: u32, n: u32, r: u32) -> Result<()> {
    let limit = config.region().half_width();
    if 0 < m && m < n && n < r && r <= limit {
        Ok(())
    } else {
        Err(Error::RadiusOrdering { m, n, r, limit })
    }
}

pub fn cluster_count(config: &EdgeConfig, m: u32, n: u32, r: u32) -> Result<ClusterCountResult> {
    check_radii(config, m, n, r)?;
    let outer = BoxRegion::new(r);
    let partition = all_sccs(config, outer)?;

    let mut inner_hit = vec![false; partition.component_count()];
    let mut outer_hit = vec![false; partition.component_count()];
    for (i, &l) in partition.labels().iter().enumerate() {
        let norm = outer.vertex(i).norm();
        if norm <= m {
            inner_hit[l as usize] = true;
        }
        if norm > n {
            outer_hit[l as usize] = true;
        }
    }
    let count = inner_hit.iter().zip(&outer_hit).filter(|(a, b)| **a && **b).count();

    // Relations only grow with the radius, so agreement with the full box
    // pins every intermediate radius. Any cycle through B_m that would later
    // reach beyond B_n crosses layer n + 1 <= r and would change this relation.
    let limit = config.region().half_width();
    let stabilized = r == limit || {
        let full = all_sccs(config, config.region())?;
        partition.relation_on(outer) == full.relation_on(outer)
    };
    // The relation on B_n is only defined for radii beyond n.
    let unchanged_from_previous = r - 1 > n && {
        let previous = all_sccs(config, BoxRegion::new(r - 1))?;
        let core = BoxRegion::new(n);
        partition.relation_on(core) == previous.relation_on(core)
    };
    Ok(ClusterCountResult { m, n, r, count, stabilized, unchanged_from_previous })
}

/// Grow `r` from `n + 1` up to the region half-width and stop at the first
/// radius reporting `stabilized`; otherwise return the count at the largest radius.
pub fn cluster_count_auto(config: &EdgeConfig, m: u32, n: u32) -> Result<ClusterCountResult> {
    let limit = config.region().half_width();
    check_radii(config, m, n, limit)?;
    let mut last = None;
    for r in n + 1..=limit {
        let res = cluster_count(config, m, n, r)?;
        if res.stabilized {
            return Ok(res);
        }
        last = Some(res);
    }
    Ok(last.expect("n < limit guarantees one radius"))
}
