//! Brute-force transitive-closure oracle for SCC decompositions.
//!
//! Deliberately shares no traversal code with [`all_sccs`](super::all_sccs):
//! it walks the public [`EdgeConfig::is_open`] predicate on vertex pairs.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::SccPartition;
use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, EdgeConfig, Vertex};

pub const ORACLE_MAX_HALF_WIDTH: u32 = 8;

/// Full reachability matrix by one BFS per vertex, then components from
/// mutual reachability. Restriction half-width at most 8 (289 vertices).
pub fn scc_oracle(config: &EdgeConfig, restriction: BoxRegion) -> Result<SccPartition> {
    let h = restriction.half_width();
    if h > ORACLE_MAX_HALF_WIDTH {
        return Err(Error::OracleTooLarge { half_width: h, limit: ORACLE_MAX_HALF_WIDTH });
    }
    if !config.region().contains_region(restriction) {
        return Err(Error::RegionTooSmall { required: h, available: config.region().half_width() });
    }
    let verts: Vec<Vertex> = restriction.vertices().collect();
    let n = verts.len();
    let id = |v: Vertex| verts.iter().position(|&w| w == v);

    let mut reach = vec![vec![false; n]; n];
    for (s, row) in reach.iter_mut().enumerate() {
        let mut queue = VecDeque::from([s]);
        row[s] = true;
        while let Some(u) = queue.pop_front() {
            let a = verts[u];
            for b in [(1, 0), (-1, 0), (0, 1), (0, -1)].map(|(dx, dy)| Vertex::new(a.x + dx, a.y + dy)) {
                if !restriction.contains(b) || !config.is_open(a, b) {
                    continue;
                }
                let w = id(b).expect("neighbour inside restriction");
                if !row[w] {
                    row[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut label = vec![u32::MAX; n];
    let mut next = 0;
    for u in 0..n {
        if label[u] != u32::MAX {
            continue;
        }
        for w in u..n {
            if reach[u][w] && reach[w][u] {
                label[w] = next;
            }
        }
        next += 1;
    }
    Ok(SccPartition::from_raw(restriction, &label))
}
