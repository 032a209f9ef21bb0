use alloc::vec::Vec;

use crate::error::Result;
use crate::lattice::{BoxRegion, Direction, EdgeConfig, Vertex};

/// Vertices reachable from (forward) or reaching (backward) a source vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachSet {
    source: Vertex,
    region: BoxRegion,
    members: Vec<u32>,
}

impl ReachSet {
    fn from_indices(source: Vertex, region: BoxRegion, mut members: Vec<u32>) -> Self {
        members.sort_unstable();
        Self { source, region, members }
    }

    pub fn source(&self) -> Vertex {
        self.source
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.region.index(v).is_some_and(|i| self.members.binary_search(&(i as u32)).is_ok())
    }

    /// Members in row-major order.
    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.members.iter().map(|&i| self.region.vertex(i as usize))
    }

    /// Whether some member lies on the outer layer of the box.
    pub fn touches_boundary(&self) -> bool {
        self.members.iter().any(|&i| self.region.is_boundary_index(i as usize))
    }

    pub fn intersection(&self, other: &ReachSet) -> ReachSet {
        let members = self.members.iter().copied().filter(|i| other.members.binary_search(i).is_ok()).collect();
        ReachSet { source: self.source, region: self.region, members }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Orientation {
    Forward,
    Backward,
}

/// Reusable BFS scratch: epoch-stamped visit marks, so no clearing between runs.
#[derive(Debug, Clone, Default)]
pub struct Workspace {
    marks: [Vec<u32>; 2],
    epoch: u32,
    queue: Vec<u32>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    fn next_epoch(&mut self, len: usize, layer: usize) -> u32 {
        for m in &mut self.marks {
            if m.len() < len {
                m.resize(len, 0);
            }
        }
        // Only a layer-0 run may wrap: a layer-1 run still filters on the previous epoch.
        if layer == 0 && self.epoch >= u32::MAX - 1 {
            self.epoch = 0;
            for m in &mut self.marks {
                m.iter_mut().for_each(|x| *x = 0);
            }
        }
        self.epoch += 1;
        self.epoch
    }

    /// BFS from `start` on mark layer `layer`. If `within` is set, only
    /// vertices already carrying `within` on layer 0 are entered. Returns
    /// early with `true` as soon as `stop` accepts a visited vertex.
    pub(crate) fn bfs(
        &mut self,
        config: &EdgeConfig,
        start: usize,
        orientation: Orientation,
        layer: usize,
        within: Option<u32>,
        mut stop: impl FnMut(usize) -> bool,
    ) -> bool {
        let region = config.region();
        let epoch = self.next_epoch(region.len(), layer);
        let Workspace { marks, queue, .. } = self;
        let (first, second) = marks.split_at_mut(1);
        let (mark, filter) = if layer == 0 { (&mut first[0], None) } else { (&mut second[0], Some(&first[0])) };
        let admissible = |i: usize| match (within, filter) {
            (Some(w), Some(f)) => f[i] == w,
            _ => true,
        };

        queue.clear();
        mark[start] = epoch;
        queue.push(start as u32);
        if stop(start) {
            return true;
        }
        let mut head = 0;
        while head < queue.len() {
            let i = queue[head] as usize;
            head += 1;
            for d in Direction::ALL {
                let next = match orientation {
                    Orientation::Forward => {
                        if config.out_bits(i) & d.bit() == 0 {
                            continue;
                        }
                        region.neighbour_index(i, d)
                    }
                    Orientation::Backward => config.in_open(i, d),
                };
                let Some(j) = next else { continue };
                if mark[j] == epoch || !admissible(j) {
                    continue;
                }
                mark[j] = epoch;
                queue.push(j as u32);
                if stop(j) {
                    return true;
                }
            }
        }
        false
    }

    pub(crate) fn epoch(&self) -> u32 {
        self.epoch
    }

    pub(crate) fn visited(&self) -> &[u32] {
        &self.queue
    }
}

fn reach(config: &EdgeConfig, source: Vertex, orientation: Orientation) -> Result<ReachSet> {
    let region = config.region();
    let start = region.check(source)?;
    let mut ws = Workspace::new();
    ws.bfs(config, start, orientation, 0, None, |_| false);
    Ok(ReachSet::from_indices(source, region, ws.queue))
}

/// All `b` with an open directed path `source → b`, including `source`.
pub fn forward_reach(config: &EdgeConfig, source: Vertex) -> Result<ReachSet> {
    reach(config, source, Orientation::Forward)
}

/// All `b` with an open directed path `b → sink`, including `sink`.
pub fn backward_reach(config: &EdgeConfig, sink: Vertex) -> Result<ReachSet> {
    reach(config, sink, Orientation::Backward)
}

/// Strongly connected cluster of `a`: forward ∩ backward reach.
pub fn strong_cluster(config: &EdgeConfig, a: Vertex) -> Result<ReachSet> {
    Ok(forward_reach(config, a)?.intersection(&backward_reach(config, a)?))
}
