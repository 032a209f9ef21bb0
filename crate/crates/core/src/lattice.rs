//! Vertex configurations on a finite box and the ε-open edge configurations
//! they induce.
//!
//! Boxes have a free boundary: a slot whose target lies outside the box does
//! not exist and is always closed.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::rng::{PotentialSampler, RngSeed};

/// A vertex of ℤ².
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Vertex {
    pub x: i32,
    pub y: i32,
}

impl Vertex {
    pub const ORIGIN: Vertex = Vertex { x: 0, y: 0 };

    pub const fn new(x: i32, y: i32) -> Self {
        Self { x, y }
    }

    /// Max-norm `max(|x|, |y|)`.
    pub fn norm(self) -> u32 {
        self.x.unsigned_abs().max(self.y.unsigned_abs())
    }

    pub fn step(self, dir: Direction) -> Self {
        let (dx, dy) = dir.offset();
        Self::new(self.x + dx, self.y + dy)
    }

    pub fn direction_to(self, other: Vertex) -> Option<Direction> {
        Direction::ALL.into_iter().find(|&d| self.step(d) == other)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Outgoing slot of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    East,
    North,
    West,
    South,
}

impl Direction {
    pub const ALL: [Direction; 4] = [Direction::East, Direction::North, Direction::West, Direction::South];

    pub const fn offset(self) -> (i32, i32) {
        match self {
            Direction::East => (1, 0),
            Direction::North => (0, 1),
            Direction::West => (-1, 0),
            Direction::South => (0, -1),
        }
    }

    pub const fn reverse(self) -> Direction {
        match self {
            Direction::East => Direction::West,
            Direction::North => Direction::South,
            Direction::West => Direction::East,
            Direction::South => Direction::North,
        }
    }

    #[inline]
    pub const fn bit(self) -> u8 {
        1 << self as u8
    }
}

/// The box `B_r = {v : max(|x|, |y|) <= r}`, indexed row-major from `(-r, -r)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoxRegion {
    half_width: u32,
}

impl BoxRegion {
    /// Largest half-width whose vertex count fits comfortably in `u32` indices.
    pub const MAX_HALF_WIDTH: u32 = 16_000;

    /// # Panics
    /// If `half_width` exceeds [`Self::MAX_HALF_WIDTH`].
    pub fn new(half_width: u32) -> Self {
        assert!(half_width <= Self::MAX_HALF_WIDTH, "box half-width {half_width} too large");
        Self { half_width }
    }

    pub fn half_width(self) -> u32 {
        self.half_width
    }

    /// Side length `2r + 1`.
    pub fn side(self) -> usize {
        2 * self.half_width as usize + 1
    }

    /// Number of vertices, `(2r + 1)²`.
    pub fn len(self) -> usize {
        self.side() * self.side()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, v: Vertex) -> bool {
        v.norm() <= self.half_width
    }

    pub fn contains_region(self, other: BoxRegion) -> bool {
        other.half_width <= self.half_width
    }

    pub fn index(self, v: Vertex) -> Option<usize> {
        self.contains(v).then(|| self.index_unchecked(v))
    }

    pub(crate) fn index_unchecked(self, v: Vertex) -> usize {
        let r = self.half_width as i64;
        ((i64::from(v.y) + r) as usize) * self.side() + (i64::from(v.x) + r) as usize
    }

    /// # Panics
    /// If `idx >= self.len()`.
    pub fn vertex(self, idx: usize) -> Vertex {
        assert!(idx < self.len());
        let side = self.side();
        let r = self.half_width as i32;
        Vertex::new((idx % side) as i32 - r, (idx / side) as i32 - r)
    }

    pub fn vertices(self) -> impl Iterator<Item = Vertex> {
        (0..self.len()).map(move |i| self.vertex(i))
    }

    /// Index of the neighbour of `idx` in direction `dir`, if inside the box.
    #[inline]
    pub fn neighbour_index(self, idx: usize, dir: Direction) -> Option<usize> {
        let side = self.side();
        let (col, row) = (idx % side, idx / side);
        match dir {
            Direction::East => (col + 1 < side).then(|| idx + 1),
            Direction::West => (col > 0).then(|| idx - 1),
            Direction::North => (row + 1 < side).then(|| idx + side),
            Direction::South => (row > 0).then(|| idx - side),
        }
    }

    /// True for vertices of the outer layer `max(|x|, |y|) = r`.
    #[inline]
    pub fn is_boundary_index(self, idx: usize) -> bool {
        let side = self.side();
        let (col, row) = (idx % side, idx / side);
        col == 0 || row == 0 || col + 1 == side || row + 1 == side
    }

    pub(crate) fn check(self, v: Vertex) -> Result<usize> {
        self.index(v).ok_or(Error::OutsideRegion { vertex: v, half_width: self.half_width })
    }
}

/// Edge-opening tolerance ε ∈ [0, 1].
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Epsilon(f64);

impl Epsilon {
    pub const ZERO: Epsilon = Epsilon(0.0);
    pub const ONE: Epsilon = Epsilon(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            Ok(Self(value))
        } else {
            Err(Error::EpsilonOutOfRange(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for Epsilon {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Self::new(value)
    }
}

/// Potentials in `[0, 1]` on every vertex of a box.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    region: BoxRegion,
    values: Vec<f64>,
}

impl PotentialField {
    /// Field from row-major values (see [`BoxRegion::vertex`]).
    pub fn from_values(region: BoxRegion, values: Vec<f64>) -> Result<Self> {
        if values.len() != region.len() {
            return Err(Error::LengthMismatch { expected: region.len(), found: values.len() });
        }
        if let Some(&bad) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::PotentialOutOfRange(bad));
        }
        Ok(Self { region, values })
    }

    pub fn from_fn(region: BoxRegion, mut f: impl FnMut(Vertex) -> f64) -> Result<Self> {
        Self::from_values(region, region.vertices().map(&mut f).collect())
    }

    pub fn constant(region: BoxRegion, value: f64) -> Result<Self> {
        Self::from_values(region, vec![value; region.len()])
    }

    pub fn region(&self) -> BoxRegion {
        self.region
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn get(&self, v: Vertex) -> Option<f64> {
        self.region.index(v).map(|i| self.values[i])
    }

    /// Restriction to a smaller centred box.
    pub fn restrict(&self, sub: BoxRegion) -> Result<Self> {
        if !self.region.contains_region(sub) {
            return Err(Error::RegionTooSmall { required: sub.half_width(), available: self.region.half_width() });
        }
        let values = sub.vertices().map(|v| self.values[self.region.index_unchecked(v)]).collect();
        Ok(Self { region: sub, values })
    }

    /// Apply a value map that keeps potentials inside `[0, 1]`.
    pub(crate) fn map_indexed(&self, mut f: impl FnMut(usize, f64) -> f64) -> Self {
        let values = self.values.iter().enumerate().map(|(i, &v)| f(i, v)).collect();
        Self { region: self.region, values }
    }
}

/// Draw i.i.d. uniform potentials on `region` from the counter-based stream `rng`.
pub fn sample_potentials(region: BoxRegion, rng: RngSeed) -> PotentialField {
    let mut values = Vec::new();
    sample_into(region, rng, &mut values);
    PotentialField { region, values }
}

pub(crate) fn sample_into(region: BoxRegion, rng: RngSeed, values: &mut Vec<f64>) {
    let mut sampler = PotentialSampler::new(rng);
    let side = region.side();
    let r = region.half_width() as i32;
    values.resize(region.len(), 0.0);
    for (row, chunk) in values.chunks_exact_mut(side).enumerate() {
        sampler.fill_row(Vertex::new(-r, row as i32 - r), chunk);
    }
}

/// ε-openness of `a → b`: `φ_b < φ_a + ε`, evaluated as `φ_b - φ_a < ε`.
///
/// The difference form is exact for the 2⁻⁵³-grid potentials produced by the
/// sampler and their involutions, which makes the mirror identity hold bit for bit.
#[inline]
pub fn opens(from: f64, to: f64, eps: f64) -> bool {
    to - from < eps
}

/// Directed open-edge subgraph of a box, four outgoing slot bits per vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeConfig {
    region: BoxRegion,
    bits: Vec<u8>,
}

impl EdgeConfig {
    /// No open edges.
    pub fn empty(region: BoxRegion) -> Self {
        Self { region, bits: vec![0; region.len()] }
    }

    /// Every in-region slot open.
    pub fn complete(region: BoxRegion) -> Self {
        let bits = (0..region.len())
            .map(|i| {
                Direction::ALL
                    .into_iter()
                    .filter(|&d| region.neighbour_index(i, d).is_some())
                    .fold(0u8, |acc, d| acc | d.bit())
            })
            .collect();
        Self { region, bits }
    }

    pub fn region(&self) -> BoxRegion {
        self.region
    }

    fn slot(&self, a: Vertex, b: Vertex) -> Result<(usize, Direction)> {
        let ia = self.region.check(a)?;
        self.region.check(b)?;
        let dir = a.direction_to(b).ok_or(Error::NotNeighbours { a, b })?;
        Ok((ia, dir))
    }

    /// Whether `a → b` is open. Pairs that are not in-region neighbours are closed.
    pub fn is_open(&self, a: Vertex, b: Vertex) -> bool {
        self.slot(a, b).is_ok_and(|(i, d)| self.bits[i] & d.bit() != 0)
    }

    pub fn set_open(&mut self, a: Vertex, b: Vertex, open: bool) -> Result<()> {
        let (i, d) = self.slot(a, b)?;
        if open {
            self.bits[i] |= d.bit();
        } else {
            self.bits[i] &= !d.bit();
        }
        Ok(())
    }

    #[inline]
    pub(crate) fn out_bits(&self, idx: usize) -> u8 {
        self.bits[idx]
    }

    /// Whether the in-edge from the `dir` neighbour of `idx` into `idx` is open.
    #[inline]
    pub(crate) fn in_open(&self, idx: usize, dir: Direction) -> Option<usize> {
        let from = self.region.neighbour_index(idx, dir)?;
        (self.bits[from] & dir.reverse().bit() != 0).then_some(from)
    }

    /// All open ordered pairs, in row-major order of the tail.
    pub fn open_edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.bits.len()).flat_map(move |i| {
            let a = self.region.vertex(i);
            Direction::ALL.into_iter().filter(move |d| self.bits[i] & d.bit() != 0).map(move |d| (a, a.step(d)))
        })
    }

    pub fn open_count(&self) -> usize {
        self.bits.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// `self ⪯ other`: every open edge of `self` is open in `other`.
    pub fn refines(&self, other: &EdgeConfig) -> bool {
        self.region == other.region && self.bits.iter().zip(&other.bits).all(|(a, b)| a & !b == 0)
    }
}

/// `f_ε(φ)`: open `a → b` iff `φ_b < φ_a + ε`.
pub fn edge_map(field: &PotentialField, eps: Epsilon) -> EdgeConfig {
    let mut config = EdgeConfig::empty(field.region);
    edge_map_into(field.region, &field.values, eps, &mut config);
    config
}

pub(crate) fn edge_map_into(region: BoxRegion, values: &[f64], eps: Epsilon, out: &mut EdgeConfig) {
    let side = region.side();
    let eps = eps.value();
    out.region = region;
    out.bits.clear();
    out.bits.resize(region.len(), 0);
    for row in 0..side {
        let base = row * side;
        for col in 0..side {
            let i = base + col;
            let here = values[i];
            let mut b = 0u8;
            if col + 1 < side && opens(here, values[i + 1], eps) {
                b |= Direction::East.bit();
            }
            if row + 1 < side && opens(here, values[i + side], eps) {
                b |= Direction::North.bit();
            }
            if col > 0 && opens(here, values[i - 1], eps) {
                b |= Direction::West.bit();
            }
            if row > 0 && opens(here, values[i - side], eps) {
                b |= Direction::South.bit();
            }
            out.bits[i] = b;
        }
    }
}

/// `I(φ)_a = 1 - φ_a`.
pub fn involution(field: &PotentialField) -> PotentialField {
    field.map_indexed(|_, v| 1.0 - v)
}

/// Reverse every edge: `open'(a, b) = open(b, a)`.
pub fn mirror(config: &EdgeConfig) -> EdgeConfig {
    let region = config.region;
    let bits = (0..region.len())
        .map(|i| {
            Direction::ALL.into_iter().filter(|&d| config.in_open(i, d).is_some()).fold(0u8, |acc, d| acc | d.bit())
        })
        .collect();
    EdgeConfig { region, bits }
}

/// Self-check of the monotone coupling `f_ε1(φ) ⪯ f_ε2(φ)` for `ε1 <= ε2`.
pub fn coupling_refines(field: &PotentialField, eps1: Epsilon, eps2: Epsilon) -> Result<bool> {
    if eps1 > eps2 {
        return Err(Error::InvalidParameter("coupling check requires eps1 <= eps2"));
    }
    Ok(edge_map(field, eps1).refines(&edge_map(field, eps2)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn box_counts_and_membership() {
        let b = BoxRegion::new(3);
        assert_eq!(b.len(), 49);
        assert_eq!(b.vertices().filter(|&v| b.contains(v)).count(), 49);
        assert!(!b.contains(Vertex::new(4, 0)));
        assert!(b.contains(Vertex::new(-3, 3)));
        for (i, v) in b.vertices().enumerate() {
            assert_eq!(b.index(v), Some(i));
        }
    }

    #[test]
    fn neighbour_indices_match_steps() {
        let b = BoxRegion::new(2);
        for i in 0..b.len() {
            let v = b.vertex(i);
            for d in Direction::ALL {
                assert_eq!(b.neighbour_index(i, d), b.index(v.step(d)));
            }
            assert_eq!(b.is_boundary_index(i), v.norm() == 2);
        }
    }

    #[test]
    fn epsilon_range() {
        assert!(Epsilon::new(-0.1).is_err());
        assert!(Epsilon::new(1.1).is_err());
        assert!(Epsilon::new(f64::NAN).is_err());
        assert!(Epsilon::new(0.0).is_ok() && Epsilon::new(1.0).is_ok());
    }

    #[test]
    fn single_vertex_box_sample() {
        let f = sample_potentials(BoxRegion::new(0), RngSeed::new(42, 0));
        assert_eq!(f.values().len(), 1);
        assert!((0.0..1.0).contains(&f.values()[0]));
    }

    #[test]
    fn sampling_is_deterministic() {
        let b = BoxRegion::new(6);
        assert_eq!(sample_potentials(b, RngSeed::new(3, 4)), sample_potentials(b, RngSeed::new(3, 4)));
        assert_ne!(sample_potentials(b, RngSeed::new(3, 4)), sample_potentials(b, RngSeed::new(3, 5)));
    }

    #[test]
    fn sample_mean_is_one_half() {
        let f = sample_potentials(BoxRegion::new(50), RngSeed::new(1, 0));
        assert_eq!(f.values().len(), 10_201);
        let mean = f.values().iter().sum::<f64>() / f.values().len() as f64;
        assert!((mean - 0.5).abs() <= 0.01, "mean {mean}");
    }

    #[test]
    fn sub_box_consistency() {
        let seed = RngSeed::new(77, 2);
        let big = sample_potentials(BoxRegion::new(12), seed);
        let small = sample_potentials(BoxRegion::new(5), seed);
        assert_eq!(big.restrict(BoxRegion::new(5)).unwrap(), small);
    }

    #[test]
    fn field_validation() {
        let b = BoxRegion::new(1);
        assert!(matches!(PotentialField::constant(b, 1.5), Err(Error::PotentialOutOfRange(_))));
        assert!(matches!(PotentialField::from_values(b, vec![0.5; 3]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn edge_rule_is_strict() {
        let b = BoxRegion::new(1);
        let a = Vertex::new(0, 0);
        let c = Vertex::new(1, 0);
        let field = PotentialField::from_fn(b, |v| {
            if v == a {
                0.5
            } else if v == c {
                0.3
            } else {
                0.0
            }
        })
        .unwrap();
        let z = edge_map(&field, eps(0.1));
        assert!(z.is_open(a, c));
        assert!(!z.is_open(c, a));
        // equality is closed: 0.5 - 0.25 == 0.25
        let field = PotentialField::from_fn(b, |v| if v == a { 0.25 } else { 0.5 }).unwrap();
        assert!(!edge_map(&field, eps(0.25)).is_open(a, c));
    }

    #[test]
    fn eps_one_opens_everything() {
        let f = sample_potentials(BoxRegion::new(7), RngSeed::new(8, 0));
        assert_eq!(edge_map(&f, Epsilon::ONE), EdgeConfig::complete(f.region()));
    }

    #[test]
    fn strictly_decreasing_path_at_eps_zero() {
        let b = BoxRegion::new(4);
        let field = PotentialField::from_fn(b, |v| if v.y == 0 { (4 - v.x) as f64 / 10.0 } else { 0.95 }).unwrap();
        let z = edge_map(&field, Epsilon::ZERO);
        for x in -4..4 {
            assert!(z.is_open(Vertex::new(x, 0), Vertex::new(x + 1, 0)));
            assert!(!z.is_open(Vertex::new(x + 1, 0), Vertex::new(x, 0)));
        }
    }

    #[test]
    fn complete_config_has_no_boundary_slots() {
        let z = EdgeConfig::complete(BoxRegion::new(2));
        // 2 * (2 * side * (side - 1)) directed edges
        assert_eq!(z.open_count(), 2 * 2 * 5 * 4);
        assert!(!z.is_open(Vertex::new(2, 0), Vertex::new(3, 0)));
    }

    #[test]
    fn involution_examples() {
        let b = BoxRegion::new(2);
        let f = PotentialField::constant(b, 0.25).unwrap();
        assert_eq!(involution(&f), PotentialField::constant(b, 0.75).unwrap());
        let g = sample_potentials(b, RngSeed::new(1, 1));
        assert_eq!(involution(&involution(&g)), g);
    }

    #[test]
    fn mirror_examples() {
        let b = BoxRegion::new(2);
        let full = EdgeConfig::complete(b);
        assert_eq!(mirror(&full), full);
        let mut single = EdgeConfig::empty(b);
        let (a, c) = (Vertex::new(0, 0), Vertex::new(0, 1));
        single.set_open(a, c, true).unwrap();
        let m = mirror(&single);
        assert_eq!(m.open_edges().collect::<Vec<_>>(), vec![(c, a)]);
        assert_eq!(mirror(&m), single);
    }

    #[test]
    fn set_open_rejects_bad_pairs() {
        let mut z = EdgeConfig::empty(BoxRegion::new(1));
        assert!(matches!(z.set_open(Vertex::new(0, 0), Vertex::new(1, 1), true), Err(Error::NotNeighbours { .. })));
        assert!(matches!(z.set_open(Vertex::new(1, 0), Vertex::new(2, 0), true), Err(Error::OutsideRegion { .. })));
    }

    #[test]
    fn coupling_precondition() {
        let f = sample_potentials(BoxRegion::new(3), RngSeed::new(2, 0));
        assert!(coupling_refines(&f, eps(0.5), eps(0.2)).is_err());
        assert!(coupling_refines(&f, eps(0.1), eps(0.3)).unwrap());
        assert!(coupling_refines(&f, eps(0.3), eps(0.3)).unwrap());
    }
}
