//! The eleven instance reductions as executable transformers.
//!
//! Each reduction maps a source instance to a target instance and emits a
//! [`ReductionCert`] that implements the solution mapping g, the
//! reasonable-solution predicate used for tightness checking, and enough
//! parameters to reproduce the construction.
//!
//! ```
//! use plslab::engine::{is_local_optimum, standard_solution, PivotRule};
//! use plslab::exact::int;
//! use plslab::graph::WeightedGraph;
//! use plslab::problems::{Instance, ProblemKind};
//! use plslab::reductions::{map_solution, r1_distinct};
//!
//! let mut g = WeightedGraph::new(3);
//! g.add_edge(0, 1, int(2)).unwrap();
//! g.add_edge(1, 2, int(3)).unwrap();
//! let src = Instance::graph(ProblemKind::MaxCutDeg5, g).unwrap();
//! let (target, cert) = r1_distinct(&src).unwrap();
//! let opt = standard_solution(&target, PivotRule::FirstImprovement).unwrap();
//! let back = map_solution(&cert, &opt).unwrap();
//! assert!(is_local_optimum(&src, &back).unwrap());
//! ```

mod cut;
mod embed;
mod nae;

pub use cut::{r11_sparsest, r1_distinct, r6_densest, r6_densest_with_params};
pub use embed::{r10_euclid, r7_two_means, r8_lift_kmeans, r9_sq_euclid, r9_sq_euclid_signed};
pub use nae::{r2_nae3, r2_nae3_with_level2_weight, r3_nae3_to_nae2, r4_nonneg, r5_bisection};

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::graph::{Bipartition, Clustering, WeightedGraph};
use crate::problems::{Assignment, Instance, ProblemKind, Solution};
use num::Zero;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReductionId {
    R1,
    R2,
    R3,
    R4,
    R5Max,
    R5Min,
    R6,
    R7,
    R8,
    R9,
    R10,
    R11,
}

pub const ALL_REDUCTIONS: [ReductionId; 12] = [
    ReductionId::R1,
    ReductionId::R2,
    ReductionId::R3,
    ReductionId::R4,
    ReductionId::R5Max,
    ReductionId::R5Min,
    ReductionId::R6,
    ReductionId::R7,
    ReductionId::R8,
    ReductionId::R9,
    ReductionId::R10,
    ReductionId::R11,
];

impl ReductionId {
    pub fn name(self) -> &'static str {
        match self {
            ReductionId::R1 => "r1",
            ReductionId::R2 => "r2",
            ReductionId::R3 => "r3",
            ReductionId::R4 => "r4",
            ReductionId::R5Max => "r5max",
            ReductionId::R5Min => "r5min",
            ReductionId::R6 => "r6",
            ReductionId::R7 => "r7",
            ReductionId::R8 => "r8",
            ReductionId::R9 => "r9",
            ReductionId::R10 => "r10",
            ReductionId::R11 => "r11",
        }
    }

    pub fn parse(s: &str) -> Result<ReductionId> {
        ALL_REDUCTIONS
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::IncompatiblePath(format!("unknown reduction id {s:?}")))
    }
}

impl std::fmt::Display for ReductionId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NaeGadgetParams {
    pub n: usize,
    #[serde(with = "crate::serdes::int_string")]
    pub big_n: Int,
    #[serde(with = "crate::serdes::int_string")]
    pub l: Int,
    #[serde(with = "crate::serdes::int_string")]
    pub m: Int,
    #[serde(with = "crate::serdes::int_string")]
    pub delta_min: Int,
    #[serde(with = "crate::serdes::int_string")]
    pub delta_max: Int,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VarRole {
    Level1(usize),
    Level2(usize),
    Level3(usize),
}

impl NaeGadgetParams {
    /// Variable layout: vertices, then one q_v per vertex, then the 2n+1
    /// balancing variables.
    pub fn var_role(&self, var: usize) -> Result<VarRole> {
        if var < self.n {
            Ok(VarRole::Level1(var))
        } else if var < 2 * self.n {
            Ok(VarRole::Level2(var - self.n))
        } else if var < 4 * self.n + 1 {
            Ok(VarRole::Level3(var - 2 * self.n))
        } else {
            Err(Error::Dimension(format!("variable {var} out of range")))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensestParams {
    pub source_n: usize,
    #[serde(with = "crate::serdes::int_string")]
    pub aux_base: Int,
    pub matching_size: usize,
    #[serde(with = "crate::serdes::int_string")]
    pub matching_weight: Int,
    pub matching_pairs: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    /// true for squared-Euclidean targets, false for Euclidean ones
    pub squared: bool,
    /// column id -> source edge, in witness column order
    pub edge_columns: Vec<(usize, usize)>,
    /// per-vertex radicand of the diagonal padding coordinate
    #[serde(with = "crate::serdes::rat_string_vec")]
    pub alpha_radicands: Vec<Rat>,
    #[serde(with = "crate::serdes::int_string_opt")]
    pub scale_c: Option<Int>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum CertParams {
    Distinct {
        original_n: usize,
    },
    NaeGadget(NaeGadgetParams),
    Split {
        scale: u32,
    },
    Shift {
        #[serde(with = "crate::serdes::int_string")]
        shift: Int,
        half: usize,
    },
    BisectionMax,
    BisectionMin {
        #[serde(with = "crate::serdes::int_string")]
        shift_k: Int,
    },
    Densest(DensestParams),
    TwoMeans {
        n: usize,
        #[serde(with = "crate::serdes::int_string")]
        total_weight: Int,
    },
    Lift {
        added_point: usize,
        #[serde(with = "crate::serdes::int_string")]
        offset: Int,
        k: usize,
    },
    Embedding(EmbeddingParams),
    Complement {
        #[serde(with = "crate::serdes::int_string")]
        max_weight: Int,
    },
    Chain {
        stages: Vec<ReductionCert>,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionCert {
    pub id: ReductionId,
    #[serde(with = "crate::serdes::kind_string")]
    pub kind_from: ProblemKind,
    #[serde(with = "crate::serdes::kind_string")]
    pub kind_to: ProblemKind,
    pub source_size: usize,
    pub target_size: usize,
    pub params: CertParams,
}

/// The deterministic fallback for badly-shaped target solutions, whose
/// g-image may be arbitrary because they are provably never locally
/// optimal. Mirrors algorithm A's rule.
pub fn canonical_start(kind: ProblemKind, n: usize) -> Result<Solution> {
    let half = n.div_ceil(2);
    Ok(match kind {
        ProblemKind::KMeans(k) => Solution::Clusters(Clustering::new((0..n).map(|i| i % k).collect(), k)?),
        k if k.is_formula() => Solution::Truth(Assignment::new((0..n).map(|v| v < half).collect())),
        _ => Solution::Cut(Bipartition::new((0..n).map(|v| v < half).collect())),
    })
}

fn check_target_shape(cert: &ReductionCert, s: &Solution) -> Result<()> {
    if s.len() != cert.target_size {
        return Err(Error::Validation(format!(
            "target solution of length {} against target size {}",
            s.len(),
            cert.target_size
        )));
    }
    Ok(())
}

/// The solution mapping g. Total on feasible target solutions; documented
/// fallbacks cover the shapes the source problem cannot express.
pub fn map_solution(cert: &ReductionCert, s: &Solution) -> Result<Solution> {
    check_target_shape(cert, s)?;
    match &cert.params {
        CertParams::Distinct { original_n } => {
            let p = s.as_cut()?;
            Ok(Solution::Cut(Bipartition::new(p.sides()[..*original_n].to_vec())))
        }
        CertParams::NaeGadget(g) => {
            let a = s.as_truth()?;
            Ok(Solution::Cut(Bipartition::new(a.truth()[..g.n].to_vec())))
        }
        CertParams::Split { .. } | CertParams::Shift { .. } => Ok(s.clone()),
        CertParams::BisectionMax | CertParams::BisectionMin { .. } => {
            let p = s.as_cut()?;
            Ok(Solution::Truth(Assignment::new(p.sides().to_vec())))
        }
        CertParams::Densest(d) => {
            let p = s.as_cut()?;
            let restricted = Bipartition::new(p.sides()[..d.source_n].to_vec());
            if restricted.imbalance() == 1 {
                Ok(Solution::Cut(restricted))
            } else {
                canonical_start(cert.kind_from, d.source_n)
            }
        }
        CertParams::TwoMeans { n, .. } => {
            let c = s.as_clusters()?;
            Ok(Solution::Cut(Bipartition::new(
                (0..*n).map(|p| c.cluster(p) == 0).collect(),
            )))
        }
        CertParams::Lift { added_point, k, .. } => {
            let c = s.as_clusters()?;
            let z = c.cluster(*added_point);
            let alone = (0..c.len()).all(|p| p == *added_point || c.cluster(p) != z);
            if alone {
                let assign = (0..*added_point)
                    .map(|p| {
                        let cl = c.cluster(p);
                        if cl > z {
                            cl - 1
                        } else {
                            cl
                        }
                    })
                    .collect();
                Ok(Solution::Clusters(Clustering::new(assign, *k)?))
            } else {
                canonical_start(cert.kind_from, *added_point)
            }
        }
        CertParams::Embedding(_) => {
            let p = s.as_cut()?;
            if p.imbalance() == 1 {
                Ok(s.clone())
            } else {
                canonical_start(cert.kind_from, cert.source_size)
            }
        }
        CertParams::Complement { .. } => Ok(s.clone()),
        CertParams::Chain { stages } => {
            let mut cur = s.clone();
            for stage in stages.iter().rev() {
                cur = map_solution(stage, &cur)?;
            }
            Ok(cur)
        }
    }
}

/// Membership in the reasonable set R used for tightness.
pub fn is_reasonable(cert: &ReductionCert, s: &Solution) -> Result<bool> {
    check_target_shape(cert, s)?;
    match &cert.params {
        CertParams::Densest(d) => {
            let p = s.as_cut()?;
            let matching_cut = d
                .matching_pairs
                .iter()
                .all(|&(a, b)| p.side(a) != p.side(b));
            let restricted = Bipartition::new(p.sides()[..d.source_n].to_vec());
            Ok(matching_cut && restricted.imbalance() == 1)
        }
        CertParams::TwoMeans { .. } => {
            let c = s.as_clusters()?;
            let sizes = c.cluster_sizes();
            Ok(sizes.iter().all(|&sz| sz > 0))
        }
        CertParams::Lift { added_point, .. } => {
            let c = s.as_clusters()?;
            let z = c.cluster(*added_point);
            Ok((0..c.len()).all(|p| p == *added_point || c.cluster(p) != z))
        }
        CertParams::Embedding(_) => Ok(s.as_cut()?.imbalance() == 1),
        _ => Ok(true),
    }
}

/// Canonical section of g over R: a reasonable target solution mapping back
/// to the given source solution. Used by the tightness surjectivity check.
pub fn lift_solution(cert: &ReductionCert, source: &Solution) -> Result<Solution> {
    if source.len() != cert.source_size {
        return Err(Error::Validation(format!(
            "source solution of length {} against source size {}",
            source.len(),
            cert.source_size
        )));
    }
    match &cert.params {
        CertParams::Split { .. } | CertParams::Shift { .. } | CertParams::Complement { .. } => {
            Ok(source.clone())
        }
        CertParams::BisectionMax | CertParams::BisectionMin { .. } => {
            let a = source.as_truth()?;
            Ok(Solution::Cut(Bipartition::new(a.truth().to_vec())))
        }
        CertParams::Densest(d) => {
            let p = source.as_cut()?;
            let mut sides = p.sides().to_vec();
            for _ in &d.matching_pairs {
                sides.push(true);
                sides.push(false);
            }
            Ok(Solution::Cut(Bipartition::new(sides)))
        }
        CertParams::TwoMeans { n, .. } => {
            let p = source.as_cut()?;
            let assign = (0..*n).map(|v| usize::from(!p.side(v))).collect();
            Ok(Solution::Clusters(Clustering::new(assign, 2)?))
        }
        CertParams::Lift { added_point, k, .. } => {
            let c = source.as_clusters()?;
            let mut assign: Vec<usize> = c.assignments().to_vec();
            assign.push(*k);
            debug_assert_eq!(assign.len(), *added_point + 1);
            Ok(Solution::Clusters(Clustering::new(assign, k + 1)?))
        }
        CertParams::Embedding(_) => Ok(source.clone()),
        _ => Err(Error::NotApplicable(format!(
            "no canonical section for {}",
            cert.id
        ))),
    }
}

/// Flip deltas over every placement of each vertex's neighborhood:
/// d(v, Q) = sum over Q of w(vu) minus the sum over the other neighbors.
/// Returns (min nonzero |d|, max |d|), with the min defaulting to 1 when
/// every delta is zero.
pub fn compute_delta_min_max(g: &WeightedGraph) -> Result<(Int, Int)> {
    let mut min_nonzero: Option<Int> = None;
    let mut max_abs = Int::zero();
    for v in 0..g.num_vertices() {
        for d in vertex_flip_deltas(g, v)? {
            let a = num::abs(d);
            if a > max_abs {
                max_abs = a.clone();
            }
            if !a.is_zero() && min_nonzero.as_ref().map_or(true, |m| a < *m) {
                min_nonzero = Some(a);
            }
        }
    }
    Ok((min_nonzero.unwrap_or_else(|| Int::from(1)), max_abs))
}

/// All 2^deg(v) flip deltas of one vertex, in neighbor-subset mask order.
pub fn vertex_flip_deltas(g: &WeightedGraph, v: usize) -> Result<Vec<Int>> {
    let nbrs = g.neighbors(v);
    if nbrs.len() > 5 {
        return Err(Error::Validation(format!(
            "vertex {v} has degree {} > 5; subset enumeration refused",
            nbrs.len()
        )));
    }
    let mut out = Vec::with_capacity(1 << nbrs.len());
    for q in 0..1u32 << nbrs.len() {
        let mut d = Int::zero();
        for (i, (_, w)) in nbrs.iter().enumerate() {
            if q >> i & 1 == 1 {
                d += w;
            } else {
                d -= w;
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// Expected source kind of each reduction (k-Means matches any k).
pub fn source_kind(id: ReductionId) -> ProblemKind {
    match id {
        ReductionId::R1 => ProblemKind::MaxCutDeg5,
        ReductionId::R2 => ProblemKind::DistinctMaxCutDeg5,
        ReductionId::R3 => ProblemKind::OddHalfPosNae3Sat,
        ReductionId::R4 | ReductionId::R5Max | ReductionId::R5Min => ProblemKind::OddHalfPosNae2Sat,
        ReductionId::R6 => ProblemKind::OddMaxBisection,
        ReductionId::R7 | ReductionId::R11 => ProblemKind::DensestCut,
        ReductionId::R8 => ProblemKind::KMeans(2),
        ReductionId::R9 | ReductionId::R10 => ProblemKind::OddMinBisection,
    }
}

fn kind_matches(expected: ProblemKind, actual: ProblemKind) -> bool {
    match (expected, actual) {
        (ProblemKind::KMeans(_), ProblemKind::KMeans(_)) => true,
        (a, b) => a == b,
    }
}

pub fn apply_reduction(id: ReductionId, source: &Instance) -> Result<(Instance, ReductionCert)> {
    if !kind_matches(source_kind(id), source.kind) {
        return Err(Error::IncompatiblePath(format!(
            "{} expects a {} source, got {}",
            id,
            source_kind(id).tag(),
            source.kind.tag()
        )));
    }
    match id {
        ReductionId::R1 => r1_distinct(source),
        ReductionId::R2 => r2_nae3(source),
        ReductionId::R3 => r3_nae3_to_nae2(source),
        ReductionId::R4 => r4_nonneg(source),
        ReductionId::R5Max => r5_bisection(source, crate::problems::Orientation::Maximize),
        ReductionId::R5Min => r5_bisection(source, crate::problems::Orientation::Minimize),
        ReductionId::R6 => r6_densest(source),
        ReductionId::R7 => r7_two_means(source),
        ReductionId::R8 => r8_lift_kmeans(source),
        ReductionId::R9 => r9_sq_euclid(source),
        ReductionId::R10 => r10_euclid(source),
        ReductionId::R11 => r11_sparsest(source),
    }
}

/// Composes reductions along a path of compatible arrows. The composed g
/// applies the stage mappings in reverse order.
pub fn chain_reduce(source: &Instance, path: &[ReductionId]) -> Result<(Instance, ReductionCert)> {
    if path.is_empty() {
        return Err(Error::IncompatiblePath("empty reduction path".into()));
    }
    let mut current = source.clone();
    let mut stages = Vec::new();
    for &id in path {
        let (next, cert) = apply_reduction(id, &current).map_err(|e| match e {
            Error::IncompatiblePath(msg) => {
                Error::IncompatiblePath(format!("at step {}: {msg}", id))
            }
            other => other,
        })?;
        stages.push(cert);
        current = next;
    }
    let cert = ReductionCert {
        id: *path.last().expect("nonempty"),
        kind_from: source.kind,
        kind_to: current.kind,
        source_size: source.size(),
        target_size: current.size(),
        params: CertParams::Chain { stages },
    };
    Ok((current, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn c4() -> Instance {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(1, 2, int(1)).unwrap();
        g.add_edge(2, 3, int(1)).unwrap();
        g.add_edge(0, 3, int(1)).unwrap();
        Instance::graph(ProblemKind::MaxCutDeg5, g).unwrap()
    }

    #[test]
    fn chain_r1_r2_sizes() {
        // every C4 vertex has even degree, so r1 doubles the vertex count
        let (tgt, cert) = chain_reduce(&c4(), &[ReductionId::R1, ReductionId::R2]).unwrap();
        assert_eq!(tgt.size(), 4 * 8 + 1);
        assert_eq!(cert.source_size, 4);
        assert_eq!(cert.target_size, 33);
        let CertParams::Chain { stages } = &cert.params else { panic!() };
        assert_eq!(stages.len(), 2);
    }

    #[test]
    fn chain_rejects_bad_path() {
        let err = chain_reduce(&c4(), &[ReductionId::R1, ReductionId::R5Min]).unwrap_err();
        assert!(matches!(err, Error::IncompatiblePath(_)));
    }

    #[test]
    fn chain_mapping_composes() {
        let (tgt, cert) = chain_reduce(&c4(), &[ReductionId::R1, ReductionId::R2]).unwrap();
        let s = canonical_start(tgt.kind, tgt.size()).unwrap();
        let mapped = map_solution(&cert, &s).unwrap();
        // variables 0..8 are the post-r1 vertices; the cut restricts twice
        let cut = mapped.as_cut().unwrap();
        assert_eq!(cut.len(), 4);
        assert!(cut.sides().iter().all(|&x| x));
    }

    #[test]
    fn densest_mapping_restricts_or_falls_back() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(0, 2, int(2)).unwrap();
        g.add_edge(1, 2, int(3)).unwrap();
        let src = Instance::graph(ProblemKind::OddMaxBisection, g).unwrap();
        let (_, cert) = r6_densest_with_params(&src, 1, int(1), None).unwrap();
        let good = Solution::Cut(Bipartition::new(vec![true, false, false, true, false]));
        let mapped = map_solution(&cert, &good).unwrap();
        assert_eq!(mapped.as_cut().unwrap().sides(), &[true, false, false]);
        // restriction with imbalance 3 falls back to the canonical start
        let bad = Solution::Cut(Bipartition::new(vec![true, true, true, true, false]));
        let fallback = map_solution(&cert, &bad).unwrap();
        assert_eq!(fallback, canonical_start(src.kind, 3).unwrap());
    }

    #[test]
    fn lift_mapping_drops_added_point() {
        let cert = ReductionCert {
            id: ReductionId::R8,
            kind_from: ProblemKind::KMeans(2),
            kind_to: ProblemKind::KMeans(3),
            source_size: 3,
            target_size: 4,
            params: CertParams::Lift { added_point: 3, offset: int(5), k: 2 },
        };
        let s = Solution::Clusters(Clustering::new(vec![0, 2, 0, 1], 3).unwrap());
        let mapped = map_solution(&cert, &s).unwrap();
        assert_eq!(mapped.as_clusters().unwrap().assignments(), &[0, 1, 0]);
        // z sharing a cluster falls back
        let shared = Solution::Clusters(Clustering::new(vec![0, 1, 1, 1], 3).unwrap());
        let fb = map_solution(&cert, &shared).unwrap();
        assert_eq!(fb, canonical_start(ProblemKind::KMeans(2), 3).unwrap());
    }

    #[test]
    fn lift_solution_sections_g() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(0, 2, int(2)).unwrap();
        g.add_edge(1, 2, int(3)).unwrap();
        let src = Instance::graph(ProblemKind::DensestCut, g).unwrap();
        let (_, cert) = r7_two_means(&src).unwrap();
        let s = Solution::Cut(Bipartition::new(vec![true, false, true]));
        let lifted = lift_solution(&cert, &s).unwrap();
        assert!(is_reasonable(&cert, &lifted).unwrap());
        assert_eq!(map_solution(&cert, &lifted).unwrap(), s);
    }

    #[test]
    fn delta_bounds_star() {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(0, 2, int(8)).unwrap();
        g.add_edge(0, 3, int(3)).unwrap();
        let (dmin, dmax) = compute_delta_min_max(&g).unwrap();
        assert_eq!((dmin, dmax), (int(1), int(12)));
        // restricted to the center the min nonzero |d| is 4
        let center: Vec<Int> = vertex_flip_deltas(&g, 0).unwrap();
        let min = center.iter().map(|d| num::abs(d.clone())).filter(|d| !d.is_zero()).min().unwrap();
        assert_eq!(min, int(4));
    }

    #[test]
    fn delta_fallback_on_all_zero() {
        let mut g = WeightedGraph::new(2);
        g.add_edge(0, 1, int(0)).unwrap();
        let (dmin, dmax) = compute_delta_min_max(&g).unwrap();
        assert_eq!((dmin, dmax), (int(1), int(0)));
    }

    #[test]
    fn reduction_id_roundtrip() {
        for id in ALL_REDUCTIONS {
            assert_eq!(ReductionId::parse(id.name()).unwrap(), id);
        }
        assert!(ReductionId::parse("r12").is_err());
    }
}
