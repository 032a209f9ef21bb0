//! Layer rescaling `Ψₙ^η` on `B_{2n}` and Monte Carlo checks of which edges
//! it can break.
//!
//! Layer `L_i` is the set of vertices with max-norm `2n - i`, so `L_0` is the
//! boundary of `B_{2n}` and `L_{2n}` is the origin. `Ψ` multiplies the
//! potential on `L_i` by `(1-η)^i` and leaves everything outside `B_{2n}`
//! alone.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::estimate::McEstimate;
use crate::lattice::{opens, BoxRegion, Direction, Epsilon, PotentialField, Vertex};
use crate::math;
use crate::parallel::{count_trials, fold_trials};
use crate::rng::{PotentialSampler, RngSeed};

/// Layer of `v` inside `B_{2n}`, or `None` outside it.
pub fn layer(v: Vertex, n: u32) -> Option<u32> {
    (2 * n).checked_sub(v.norm())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsiParams {
    n: u32,
    eta: f64,
    eps: Epsilon,
}

impl PsiParams {
    /// Arbitrary `η ∈ [0, 1)`; `η = 0` gives the identity.
    pub fn new(eps: Epsilon, n: u32, eta: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be positive"));
        }
        if 2 * n > BoxRegion::MAX_HALF_WIDTH {
            return Err(Error::InvalidParameter("n too large"));
        }
        if !(0.0..1.0).contains(&eta) {
            return Err(Error::InvalidParameter("eta must lie in [0, 1)"));
        }
        Ok(Self { n, eta, eps })
    }

    /// `η = ln(1/ε)/n`, which needs `n > ln(1/ε)` to stay below 1.
    pub fn canonical(eps: Epsilon, n: u32) -> Result<Self> {
        if eps.value() <= 0.0 {
            return Err(Error::InvalidParameter("canonical eta needs eps > 0"));
        }
        if n == 0 || f64::from(n) <= math::ln(1.0 / eps.value()) {
            return Err(Error::InvalidParameter("canonical eta needs n > ln(1/eps)"));
        }
        Self::new(eps, n, Self::canonical_eta(eps, n))
    }

    fn canonical_eta(eps: Epsilon, n: u32) -> f64 {
        math::ln(1.0 / eps.value()) / f64::from(n)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn eps(&self) -> Epsilon {
        self.eps
    }

    pub fn is_canonical(&self) -> bool {
        self.eps.value() > 0.0 && self.eta == Self::canonical_eta(self.eps, self.n)
    }

    /// `B_{2n}`.
    pub fn support(&self) -> BoxRegion {
        BoxRegion::new(2 * self.n)
    }

    /// `(1-η)^i` for `i = 0..=2n`.
    fn factors(&self) -> Vec<f64> {
        (0..=2 * self.n).map(|i| math::powi(1.0 - self.eta, i)).collect()
    }
}

fn check_support(region: BoxRegion, params: &PsiParams) -> Result<()> {
    if region.half_width() < 2 * params.n {
        return Err(Error::RegionTooSmall { required: 2 * params.n, available: region.half_width() });
    }
    Ok(())
}

pub fn psi(field: &PotentialField, params: &PsiParams) -> Result<PotentialField> {
    let region = field.region();
    check_support(region, params)?;
    let factors = params.factors();
    Ok(field.map_indexed(|idx, value| match layer(region.vertex(idx), params.n) {
        Some(i) => factors[i as usize] * value,
        None => value,
    }))
}

/// `Ψ` applied only on `cluster`; every other vertex keeps its potential.
pub fn psi_hat(field: &PotentialField, params: &PsiParams, cluster: &[Vertex]) -> Result<PotentialField> {
    let region = field.region();
    let mut inside = alloc::vec![false; region.len()];
    for &v in cluster {
        inside[region.check(v)?] = true;
    }
    let factors = params.factors();
    Ok(field.map_indexed(|idx, value| match layer(region.vertex(idx), params.n) {
        Some(i) if inside[idx] => factors[i as usize] * value,
        _ => value,
    }))
}

/// Position of an ordered nearest-neighbour pair relative to the layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EdgeClass {
    /// Both endpoints in `L_layer`.
    Lateral { layer: u32 },
    /// `L_layer → L_{layer+1}`.
    Inwards { layer: u32 },
    /// `L_{depth+1} → L_depth`.
    Outwards { depth: u32 },
    /// At least one endpoint outside `B_{2n}`.
    Exterior,
}

pub fn classify_edge(a: Vertex, b: Vertex, n: u32) -> Result<EdgeClass> {
    if a.direction_to(b).is_none() {
        return Err(Error::NotNeighbours { a, b });
    }
    Ok(classify(a, b, n))
}

fn classify(a: Vertex, b: Vertex, n: u32) -> EdgeClass {
    match (layer(a, n), layer(b, n)) {
        (Some(i), Some(j)) if i == j => EdgeClass::Lateral { layer: i },
        (Some(i), Some(j)) if j == i + 1 => EdgeClass::Inwards { layer: i },
        (Some(_), Some(j)) => EdgeClass::Outwards { depth: j },
        _ => EdgeClass::Exterior,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BrokenEdge {
    pub from: Vertex,
    pub to: Vertex,
    pub class: EdgeClass,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BreakReport {
    pub broken_edges: Vec<BrokenEdge>,
    pub any_broken: bool,
}

/// Calls `visit` on every edge open before `Ψ` and closed after it. Stops
/// early when `visit` returns `false`. Only edges inside `B_{2n}` can break.
fn scan_breaks(
    region: BoxRegion,
    before: &[f64],
    factors: &[f64],
    params: &PsiParams,
    mut visit: impl FnMut(Vertex, Vertex) -> bool,
) {
    let n = params.n;
    let eps = params.eps.value();
    let support = params.support();
    for a in support.vertices() {
        let ia = region.index_unchecked(a);
        let la = layer(a, n).unwrap_or(0) as usize;
        let (pa, qa) = (before[ia], factors[la] * before[ia]);
        for dir in Direction::ALL {
            let b = a.step(dir);
            let Some(lb) = layer(b, n) else { continue };
            let ib = region.index_unchecked(b);
            let (pb, qb) = (before[ib], factors[lb as usize] * before[ib]);
            if opens(pa, pb, eps) && !opens(qa, qb, eps) && !visit(a, b) {
                return;
            }
        }
    }
}

/// Every edge that is open in `edge_map(field)` and closed in `edge_map(psi(field))`.
pub fn break_report(field: &PotentialField, params: &PsiParams) -> Result<BreakReport> {
    let region = field.region();
    check_support(region, params)?;
    let factors = params.factors();
    let mut broken_edges = Vec::new();
    scan_breaks(region, field.values(), &factors, params, |from, to| {
        broken_edges.push(BrokenEdge { from, to, class: classify(from, to, params.n) });
        true
    });
    let any_broken = !broken_edges.is_empty();
    Ok(BreakReport { broken_edges, any_broken })
}

/// Whether every nearest-neighbour pair of `B_n` is open both ways after `Ψ`.
///
/// Requires the canonical `η` and `n > ln(1/ε)`, under which it holds for
/// every field.
pub fn central_box_bidirectional(field: &PotentialField, params: &PsiParams) -> Result<bool> {
    if !params.is_canonical() {
        return Err(Error::InvalidParameter("central box check needs the canonical eta"));
    }
    let region = field.region();
    check_support(region, params)?;
    let factors = params.factors();
    let eps = params.eps.value();
    let value = |v: Vertex| {
        let i = layer(v, params.n).expect("inside B_n");
        factors[i as usize] * field.values()[region.index_unchecked(v)]
    };
    let centre = BoxRegion::new(params.n);
    for a in centre.vertices() {
        let pa = value(a);
        for dir in [Direction::East, Direction::North] {
            let b = a.step(dir);
            if !centre.contains(b) {
                continue;
            }
            let pb = value(b);
            if !(opens(pa, pb, eps) && opens(pb, pa, eps)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Empirical probability that `Ψ` breaks no edge, next to the asymptotic
/// floor `ε^{8/ε}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoBreakEstimate {
    pub estimate: McEstimate,
    pub asymptotic_floor: f64,
}

/// No-break frequency for the canonical `η`; requires `n > 1/ε`.
pub fn estimate_no_break(eps: Epsilon, n: u32, trials: u64, rng: RngSeed) -> Result<NoBreakEstimate> {
    if eps.value() <= 0.0 || f64::from(n) <= 1.0 / eps.value() {
        return Err(Error::InvalidParameter("no-break estimate needs n > 1/eps"));
    }
    estimate_no_break_with(&PsiParams::canonical(eps, n)?, trials, rng)
}

/// No-break frequency for arbitrary parameters, on fields sampled over `B_{2n}`.
pub fn estimate_no_break_with(params: &PsiParams, trials: u64, rng: RngSeed) -> Result<NoBreakEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1"));
    }
    let region = params.support();
    let factors = params.factors();
    let clean = count_trials(trials, Vec::new, |values, t| {
        crate::lattice::sample_into(region, rng.substream(t), values);
        let mut broken = false;
        scan_breaks(region, values, &factors, params, |_, _| {
            broken = true;
            false
        });
        !broken
    });
    let e = params.eps.value();
    let asymptotic_floor = if e > 0.0 { math::exp(8.0 / e * math::ln(e)) } else { 0.0 };
    Ok(NoBreakEstimate { estimate: McEstimate::from_counts(clean, trials), asymptotic_floor })
}

/// Break frequency of the outer edge `(2n-1, 0) → (2n, 0)` for the canonical `η`.
pub fn outer_edge_break_rate(eps: Epsilon, n: u32, trials: u64, rng: RngSeed) -> Result<McEstimate> {
    outward_edge_break_rate(&PsiParams::canonical(eps, n)?, 0, trials, rng)
}

/// Break frequency of the outwards edge `(2n-1-depth, 0) → (2n-depth, 0)`
/// from `L_{depth+1}` to `L_depth`. Only the two endpoint potentials are drawn,
/// at their positions in the sampled field.
pub fn outward_edge_break_rate(params: &PsiParams, depth: u32, trials: u64, rng: RngSeed) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be at least 1"));
    }
    if depth >= 2 * params.n {
        return Err(Error::InvalidParameter("depth must be below 2n"));
    }
    let edge = 2 * params.n - depth;
    let a = Vertex::new(edge as i32 - 1, 0);
    let b = Vertex::new(edge as i32, 0);
    let fa = math::powi(1.0 - params.eta, depth + 1);
    let fb = math::powi(1.0 - params.eta, depth);
    let eps = params.eps.value();
    let broken = count_trials(
        trials,
        || (),
        |_, t| {
            let mut s = PotentialSampler::new(rng.substream(t));
            let (pa, pb) = (s.at(a), s.at(b));
            opens(pa, pb, eps) && !opens(fa * pa, fb * pb, eps)
        },
    );
    Ok(McEstimate::from_counts(broken, trials))
}

/// Per-field property tallies over sampled fields.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct PropertySummary {
    pub fields: u64,
    /// Fields whose image has a fully bidirectional `B_n`.
    pub central_bidirectional: u64,
    /// Fields with no broken edge.
    pub no_break: u64,
    pub broken_edges: u64,
    pub broken_lateral: u64,
    pub broken_inwards: u64,
    /// Broken outwards edges at depth `>= 1/ε`.
    pub broken_deep_outwards: u64,
    pub broken_exterior: u64,
    /// Broken edges with an endpoint more than `⌊1/ε⌋` layers inside `B_{2n}`.
    pub unlocalized: u64,
}

impl PropertySummary {
    fn merge(self, o: Self) -> Self {
        Self {
            fields: self.fields + o.fields,
            central_bidirectional: self.central_bidirectional + o.central_bidirectional,
            no_break: self.no_break + o.no_break,
            broken_edges: self.broken_edges + o.broken_edges,
            broken_lateral: self.broken_lateral + o.broken_lateral,
            broken_inwards: self.broken_inwards + o.broken_inwards,
            broken_deep_outwards: self.broken_deep_outwards + o.broken_deep_outwards,
            broken_exterior: self.broken_exterior + o.broken_exterior,
            unlocalized: self.unlocalized + o.unlocalized,
        }
    }
}

/// Runs [`central_box_bidirectional`] and [`break_report`] on `fields`
/// independent fields over `B_{2n}`; field `t` uses `rng.substream(t)`.
pub fn property_summary(params: &PsiParams, fields: u64, rng: RngSeed) -> Result<PropertySummary> {
    if fields == 0 {
        return Err(Error::InvalidParameter("fields must be at least 1"));
    }
    if !params.is_canonical() {
        return Err(Error::InvalidParameter("property summary needs the canonical eta"));
    }
    let region = params.support();
    let e = params.eps.value();
    let reach = math::floor(1.0 / e) as u32;
    let summary = fold_trials(
        fields,
        || (),
        |_, t| {
            let field = crate::lattice::sample_potentials(region, rng.substream(t));
            let mut s = PropertySummary { fields: 1, ..Default::default() };
            if central_box_bidirectional(&field, params).unwrap_or(false) {
                s.central_bidirectional = 1;
            }
            let report = break_report(&field, params).expect("field covers the support");
            s.no_break = u64::from(!report.any_broken);
            for edge in &report.broken_edges {
                s.broken_edges += 1;
                match edge.class {
                    EdgeClass::Lateral { .. } => s.broken_lateral += 1,
                    EdgeClass::Inwards { .. } => s.broken_inwards += 1,
                    EdgeClass::Outwards { depth } if f64::from(depth) >= 1.0 / e => s.broken_deep_outwards += 1,
                    EdgeClass::Outwards { .. } => {}
                    EdgeClass::Exterior => s.broken_exterior += 1,
                }
                let depth_of = |v: Vertex| layer(v, params.n).unwrap_or(0);
                if depth_of(edge.from) > reach || depth_of(edge.to) > reach {
                    s.unlocalized += 1;
                }
            }
            s
        },
        PropertySummary::default(),
        PropertySummary::merge,
    );
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{edge_map, sample_potentials};

    fn eps(v: f64) -> Epsilon {
        Epsilon::new(v).unwrap()
    }

    #[test]
    fn layers() {
        assert_eq!(layer(Vertex::new(6, 0), 3), Some(0));
        assert_eq!(layer(Vertex::ORIGIN, 3), Some(6));
        assert_eq!(layer(Vertex::new(7, 2), 3), None);
    }

    #[test]
    fn classification() {
        let n = 4;
        let c = |a: (i32, i32), b: (i32, i32)| classify_edge(Vertex::new(a.0, a.1), Vertex::new(b.0, b.1), n).unwrap();
        assert_eq!(c((8, 0), (7, 0)), EdgeClass::Inwards { layer: 0 });
        assert_eq!(c((8, 0), (8, 1)), EdgeClass::Lateral { layer: 0 });
        assert_eq!(c((7, 0), (8, 0)), EdgeClass::Outwards { depth: 0 });
        assert_eq!(c((8, 0), (9, 0)), EdgeClass::Exterior);
        assert_eq!(classify_edge(Vertex::ORIGIN, Vertex::new(1, 0), 1).unwrap(), EdgeClass::Outwards { depth: 1 });
        assert!(classify_edge(Vertex::ORIGIN, Vertex::new(1, 1), n).is_err());
    }

    #[test]
    fn parameters() {
        assert!(PsiParams::canonical(eps(0.2), 1).is_err()); // ln 5 ≈ 1.61
        assert!(PsiParams::canonical(eps(0.2), 2).is_ok());
        assert!(PsiParams::canonical(Epsilon::ZERO, 10).is_err());
        assert!(PsiParams::new(eps(0.2), 5, 1.0).is_err());
        assert!(PsiParams::new(eps(0.2), 0, 0.1).is_err());
        let p = PsiParams::canonical(eps(0.3), 40).unwrap();
        assert!(p.is_canonical());
        assert!(!PsiParams::new(eps(0.3), 40, 0.01).unwrap().is_canonical());
    }

    #[test]
    fn psi_scales_by_layer() {
        let p = PsiParams::new(eps(0.2), 3, 0.25).unwrap();
        let field = PotentialField::constant(BoxRegion::new(8), 0.8).unwrap();
        let out = psi(&field, &p).unwrap();
        assert_eq!(out.get(Vertex::new(6, 2)), Some(0.8));
        assert_eq!(out.get(Vertex::new(8, 8)), Some(0.8));
        assert!((out.get(Vertex::new(5, 0)).unwrap() - 0.6).abs() < 1e-15);
        assert!((out.get(Vertex::ORIGIN).unwrap() - 0.8 * 0.75f64.powi(6)).abs() < 1e-15);
        assert!(psi(&field.restrict(BoxRegion::new(5)).unwrap(), &p).is_err());
    }

    #[test]
    fn identity_at_zero_eta() {
        let p = PsiParams::new(eps(0.4), 5, 0.0).unwrap();
        let field = sample_potentials(BoxRegion::new(10), RngSeed::new(3, 0));
        assert_eq!(psi(&field, &p).unwrap(), field);
        assert!(!break_report(&field, &p).unwrap().any_broken);
    }

    #[test]
    fn report_matches_edge_maps() {
        let p = PsiParams::canonical(eps(0.3), 6).unwrap();
        for seed in 0..20 {
            let field = sample_potentials(BoxRegion::new(14), RngSeed::new(seed, 1));
            let before = edge_map(&field, p.eps());
            let after = edge_map(&psi(&field, &p).unwrap(), p.eps());
            let mut want: Vec<_> = before.open_edges().filter(|&(a, b)| !after.is_open(a, b)).collect();
            let mut got: Vec<_> =
                break_report(&field, &p).unwrap().broken_edges.iter().map(|e| (e.from, e.to)).collect();
            want.sort_by_key(|&(a, b)| (a.x, a.y, b.x, b.y));
            got.sort_by_key(|&(a, b)| (a.x, a.y, b.x, b.y));
            assert_eq!(got, want);
        }
    }

    #[test]
    fn central_box_needs_canonical_eta() {
        let field = sample_potentials(BoxRegion::new(10), RngSeed::new(5, 0));
        let p = PsiParams::new(eps(0.2), 5, 0.1).unwrap();
        assert!(central_box_bidirectional(&field, &p).is_err());
        let p = PsiParams::canonical(eps(0.9), 5).unwrap();
        assert!(central_box_bidirectional(&field, &p).unwrap());
    }

    #[test]
    fn psi_hat_cases() {
        let p = PsiParams::canonical(eps(0.5), 3).unwrap();
        let field = sample_potentials(BoxRegion::new(7), RngSeed::new(9, 0));
        assert_eq!(psi_hat(&field, &p, &[]).unwrap(), field);
        let all: Vec<_> = p.support().vertices().collect();
        assert_eq!(psi_hat(&field, &p, &all).unwrap(), psi(&field, &p).unwrap());
        assert!(psi_hat(&field, &p, &[Vertex::new(8, 0)]).is_err());
    }

    #[test]
    fn summary_counts_fields() {
        let p = PsiParams::canonical(eps(0.5), 6).unwrap();
        let s = property_summary(&p, 12, RngSeed::new(1, 1)).unwrap();
        assert_eq!(s.fields, 12);
        assert_eq!(s.central_bidirectional, 12);
        assert_eq!(s.broken_lateral + s.broken_inwards + s.broken_deep_outwards + s.unlocalized, 0);
        assert!(property_summary(&PsiParams::new(eps(0.5), 6, 0.1).unwrap(), 5, RngSeed::default()).is_err());
    }

    #[test]
    fn estimator_preconditions() {
        let rng = RngSeed::default();
        assert!(estimate_no_break(eps(0.5), 2, 10, rng).is_err());
        assert!(outward_edge_break_rate(&PsiParams::canonical(eps(0.5), 3).unwrap(), 6, 10, rng).is_err());
        let id = PsiParams::new(eps(0.5), 3, 0.0).unwrap();
        assert_eq!(estimate_no_break_with(&id, 50, rng).unwrap().estimate.point_estimate, 1.0);
        assert_eq!(outward_edge_break_rate(&id, 0, 50, rng).unwrap().successes, 0);
    }
}
