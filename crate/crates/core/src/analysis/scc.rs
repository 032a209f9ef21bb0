use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::{BoxRegion, Direction, EdgeConfig, Vertex};

/// Labelling of the vertices of a restriction box by strongly connected
/// component of the induced subgraph.
///
/// Labels are canonical: components are numbered in order of their first
/// vertex in row-major order, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SccPartition {
    restriction: BoxRegion,
    labels: Vec<u32>,
    count: usize,
}

impl SccPartition {
    /// Canonicalise an arbitrary labelling of `restriction`.
    pub(crate) fn from_raw(restriction: BoxRegion, raw: &[u32]) -> Self {
        let mut remap = vec![u32::MAX; raw.len()];
        let mut next = 0u32;
        let labels = raw
            .iter()
            .map(|&l| {
                let slot = &mut remap[l as usize];
                if *slot == u32::MAX {
                    *slot = next;
                    next += 1;
                }
                *slot
            })
            .collect();
        Self { restriction, labels, count: next as usize }
    }

    pub fn restriction(&self) -> BoxRegion {
        self.restriction
    }

    pub fn component_count(&self) -> usize {
        self.count
    }

    pub fn label(&self, v: Vertex) -> Option<u32> {
        self.restriction.index(v).map(|i| self.labels[i])
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn same_component(&self, a: Vertex, b: Vertex) -> bool {
        matches!((self.label(a), self.label(b)), (Some(x), Some(y)) if x == y)
    }

    /// Members of the component containing `v`, row-major.
    pub fn component_of(&self, v: Vertex) -> Vec<Vertex> {
        let Some(l) = self.label(v) else { return Vec::new() };
        self.restriction.vertices().filter(|&w| self.labels[self.restriction.index_unchecked(w)] == l).collect()
    }

    /// Component sizes indexed by label.
    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.count];
        for &l in &self.labels {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// Canonical labelling of the vertices of the centred sub-box `inner`,
    /// i.e. the mutual-reachability relation restricted to `inner`.
    pub fn relation_on(&self, inner: BoxRegion) -> Option<Vec<u32>> {
        if !self.restriction.contains_region(inner) {
            return None;
        }
        let raw: Vec<u32> = inner.vertices().map(|v| self.labels[self.restriction.index_unchecked(v)]).collect();
        let mut remap = alloc::collections::BTreeMap::new();
        Some(
            raw.iter()
                .map(|l| {
                    let n = remap.len() as u32;
                    *remap.entry(*l).or_insert(n)
                })
                .collect(),
        )
    }
}

/// Strongly connected components of the subgraph induced on `restriction`
/// (iterative Tarjan, linear time).
pub fn all_sccs(config: &EdgeConfig, restriction: BoxRegion) -> Result<SccPartition> {
    let region = config.region();
    if !region.contains_region(restriction) {
        return Err(Error::RegionTooSmall { required: restriction.half_width(), available: region.half_width() });
    }
    let n = restriction.len();
    let outer_index = |i: usize| region.index_unchecked(restriction.vertex(i));
    // Out-neighbours of restriction vertex `i`, in restriction indices.
    let successor = |i: usize, d: Direction| -> Option<usize> {
        if config.out_bits(outer_index(i)) & d.bit() == 0 {
            return None;
        }
        restriction.neighbour_index(i, d)
    };

    const UNSEEN: u32 = u32::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0u32; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<u32> = Vec::new();
    let mut comp = vec![UNSEEN; n];
    let mut next_index = 0u32;
    let mut next_comp = 0u32;
    // (vertex, next direction to explore)
    let mut calls: Vec<(u32, u8)> = Vec::new();

    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        calls.push((root as u32, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root as u32);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut dir)) = calls.last_mut() {
            let v = v as usize;
            if (*dir as usize) < Direction::ALL.len() {
                let d = Direction::ALL[*dir as usize];
                *dir += 1;
                let Some(w) = successor(v, d) else { continue };
                if index[w] == UNSEEN {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w as u32);
                    on_stack[w] = true;
                    calls.push((w as u32, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            calls.pop();
            if let Some(&(parent, _)) = calls.last() {
                let parent = parent as usize;
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                while let Some(w) = stack.pop() {
                    on_stack[w as usize] = false;
                    comp[w as usize] = next_comp;
                    if w as usize == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    Ok(SccPartition::from_raw(restriction, &comp))
}
