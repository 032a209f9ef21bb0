use alloc::vec;
use alloc::vec::Vec;

use super::SccPartition;
use crate::lattice::{BoxRegion, Direction, Epsilon, PotentialField, Vertex};

/// Undirected nearest-neighbour clusters of `S = {a : φ_a > 1 - ε}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SiteClusters {
    region: BoxRegion,
    /// Cluster label per vertex, `None` outside `S`.
    labels: Vec<Option<u32>>,
    count: usize,
}

impl SiteClusters {
    pub fn region(&self) -> BoxRegion {
        self.region
    }

    pub fn cluster_count(&self) -> usize {
        self.count
    }

    pub fn label(&self, v: Vertex) -> Option<u32> {
        self.region.index(v).and_then(|i| self.labels[i])
    }

    pub fn occupied(&self) -> usize {
        self.labels.iter().filter(|l| l.is_some()).count()
    }

    /// Every site cluster lies inside a single strongly connected component
    /// of `partition`, which must cover the same box.
    pub fn within(&self, partition: &SccPartition) -> bool {
        if partition.restriction() != self.region {
            return false;
        }
        let mut owner: Vec<Option<u32>> = vec![None; self.count];
        self.labels.iter().zip(partition.labels()).all(|(site, &scc)| match site {
            None => true,
            Some(c) => *owner[*c as usize].get_or_insert(scc) == scc,
        })
    }
}

pub fn site_coupling_clusters(field: &PotentialField, eps: Epsilon) -> SiteClusters {
    let region = field.region();
    let threshold = 1.0 - eps.value();
    let occupied: Vec<bool> = field.values().iter().map(|&v| v > threshold).collect();
    let mut labels = vec![None; region.len()];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..region.len() {
        if !occupied[start] || labels[start].is_some() {
            continue;
        }
        labels[start] = Some(next);
        stack.push(start);
        while let Some(i) = stack.pop() {
            for d in Direction::ALL {
                if let Some(j) = region.neighbour_index(i, d) {
                    if occupied[j] && labels[j].is_none() {
                        labels[j] = Some(next);
                        stack.push(j);
                    }
                }
            }
        }
        next += 1;
    }
    SiteClusters { region, labels, count: next as usize }
}
