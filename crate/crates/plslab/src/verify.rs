//! Brute-force verification oracles: local-optimum enumeration independent
//! of the transition-graph builder, preservation and tightness checkers for
//! the reductions, exact cost-identity checks, the distinct-cost and
//! vertex-type lemma checks, and the seeded instance generators behind the
//! test corpus.
//!
//! ```
//! use plslab::engine::DEFAULT_CAP;
//! use plslab::problems::ProblemKind;
//! use plslab::reductions::ReductionId;
//! use plslab::verify::{check_preservation, random_instance};
//!
//! let src = random_instance(ProblemKind::MaxCutDeg5, 6, 8, 1).unwrap();
//! let report = check_preservation(ReductionId::R1, &src, DEFAULT_CAP).unwrap();
//! assert!(report.ok());
//! assert!(report.sinks_checked > 0);
//! ```

use crate::engine::{build_transition_graph, enumerate_solutions, improving_move, PivotRule};
use crate::error::{Error, Result};
use crate::exact::{int, rat_int, Int, PointMatrix, SqrtCoord};
use crate::graph::{Bipartition, WeightedGraph};
use crate::problems::{
    cost, is_feasible, zero_flip_delta, Evaluator, Instance, NaeClause, NaeFormula, Orientation,
    ProblemKind, Solution,
};
use crate::reductions::{
    apply_reduction, is_reasonable, lift_solution, map_solution, r6_densest_with_params,
    source_kind, CertParams, ReductionCert, ReductionId,
};
use num::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// Sinks of the transition graph, found by direct scan over all feasible
/// solutions. Deliberately independent of `build_transition_graph` so the
/// two can cross-check each other.
pub fn enumerate_local_optima(instance: &Instance, cap: u128) -> Result<Vec<Solution>> {
    let ev = Evaluator::new(instance)?;
    let mut out = Vec::new();
    for s in enumerate_solutions(instance, cap)? {
        let mut improving = false;
        for m in ev.moves(&s)? {
            if ev.improves(&ev.delta(&s, m)?) {
                improving = true;
                break;
            }
        }
        if !improving {
            out.push(s);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PreservationReport {
    pub reduction: String,
    pub digest: String,
    pub sinks_checked: usize,
    pub violations: Vec<String>,
}

impl PreservationReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// The PLS-reduction contract: every target local optimum maps under g to a
/// source local optimum.
pub fn check_preservation(id: ReductionId, source: &Instance, cap: u128) -> Result<PreservationReport> {
    let (target, cert) = apply_reduction(id, source)?;
    check_preservation_with(source, &target, &cert, cap)
}

pub fn check_preservation_with(
    source: &Instance,
    target: &Instance,
    cert: &ReductionCert,
    cap: u128,
) -> Result<PreservationReport> {
    let mut violations = Vec::new();
    let sinks = enumerate_local_optima(target, cap)?;
    for sink in &sinks {
        let mapped = map_solution(cert, sink)?;
        if !is_feasible(source, &mapped)? {
            violations.push(format!("sink {sink:?} maps to infeasible {mapped:?}"));
            continue;
        }
        if let Some((m, d)) = improving_move(source, &mapped, PivotRule::FirstImprovement)? {
            violations.push(format!(
                "sink {sink:?} maps to {mapped:?}, improvable by moving {} to part {} (delta {d})",
                m.element, m.target
            ));
        }
    }
    Ok(PreservationReport {
        reduction: cert.id.name().into(),
        digest: crate::io::instance_digest(source)?,
        sinks_checked: sinks.len(),
        violations,
    })
}

/// Sampled preservation for targets too large to enumerate: draws random
/// target solutions, and whenever one happens to be a sink checks its
/// g-image. Reports how many sampled solutions were sinks.
pub fn check_preservation_sampled(
    source: &Instance,
    target: &Instance,
    cert: &ReductionCert,
    samples: usize,
    seed: u64,
) -> Result<PreservationReport> {
    let ev = Evaluator::new(target)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = target.size();
    let mut violations = Vec::new();
    let mut sinks_checked = 0;
    for _ in 0..samples {
        let s = random_solution(target.kind, n, &mut rng);
        if !ev.is_feasible(&s)? {
            continue;
        }
        let mut improving = false;
        for m in ev.moves(&s)? {
            if ev.improves(&ev.delta(&s, m)?) {
                improving = true;
                break;
            }
        }
        if improving {
            continue;
        }
        sinks_checked += 1;
        let mapped = map_solution(cert, &s)?;
        if !is_feasible(source, &mapped)? {
            violations.push(format!("sampled sink maps to infeasible {mapped:?}"));
        } else if let Some((m, d)) = improving_move(source, &mapped, PivotRule::FirstImprovement)? {
            violations.push(format!(
                "sampled sink maps to {mapped:?}, improvable by moving {} to part {} (delta {d})",
                m.element, m.target
            ));
        }
    }
    Ok(PreservationReport {
        reduction: cert.id.name().into(),
        digest: crate::io::instance_digest(source)?,
        sinks_checked,
        violations,
    })
}

fn random_solution(kind: ProblemKind, n: usize, rng: &mut ChaCha8Rng) -> Solution {
    match kind {
        ProblemKind::KMeans(k) => Solution::Clusters(
            crate::graph::Clustering::new((0..n).map(|_| rng.gen_range(0..k)).collect(), k)
                .expect("cluster ids in range"),
        ),
        k if k.is_formula() => {
            Solution::Truth(crate::problems::Assignment::new((0..n).map(|_| rng.gen()).collect()))
        }
        _ => Solution::Cut(Bipartition::new((0..n).map(|_| rng.gen()).collect())),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TightnessReport {
    pub reduction: String,
    pub digest: String,
    pub reasonable_nodes: usize,
    pub source_nodes: usize,
    pub violations: Vec<String>,
}

impl TightnessReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Tight-reduction checks over exhaustive transition graphs:
/// 1. every target sink lies in the reasonable set R;
/// 2. every source solution is the g-image of an R member (via the
///    canonical section);
/// 3. improving arcs never leave R, every move out of R strictly worsens
///    the objective, and for each t in R the improving arcs of t biject
///    with the improving arcs of g(t) in the source graph.
/// Together with |R| = |source| where g is injective this gives the
/// restricted-isomorphism statements; for the k-Means lift g is
/// (k+1)-to-1 and the per-node arc bijection is the honest claim.
pub fn check_tightness(id: ReductionId, source: &Instance, cap: u128) -> Result<TightnessReport> {
    let (target, cert) = apply_reduction(id, source)?;
    check_tightness_with(source, &target, &cert, cap)
}

pub fn check_tightness_with(
    source: &Instance,
    target: &Instance,
    cert: &ReductionCert,
    cap: u128,
) -> Result<TightnessReport> {
    let mut violations = Vec::new();
    let tg = build_transition_graph(target, cap)?;
    let sg = build_transition_graph(source, cap)?;
    let sindex: HashMap<&Solution, usize> =
        sg.nodes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let ev = Evaluator::new(target)?;
    let orientation = target.kind.orientation();

    let in_r: Vec<bool> = tg
        .nodes
        .iter()
        .map(|s| is_reasonable(cert, s))
        .collect::<Result<Vec<_>>>()?;
    let reasonable_nodes = in_r.iter().filter(|&&b| b).count();

    for i in tg.sinks() {
        if !in_r[i] {
            violations.push(format!("target sink {:?} outside R", tg.nodes[i]));
        }
    }

    for s in &sg.nodes {
        let lifted = lift_solution(cert, s)?;
        if !ev.is_feasible(&lifted)? {
            violations.push(format!("canonical section of {s:?} is infeasible"));
            continue;
        }
        if !is_reasonable(cert, &lifted)? {
            violations.push(format!("canonical section of {s:?} is outside R"));
        } else if &map_solution(cert, &lifted)? != s {
            violations.push(format!("canonical section of {s:?} does not map back"));
        }
    }

    if !matches!(cert.params, CertParams::Lift { .. }) && reasonable_nodes != sg.nodes.len() {
        violations.push(format!(
            "|R| = {reasonable_nodes} but the source has {} solutions; g cannot be a bijection",
            sg.nodes.len()
        ));
    }

    for (i, t) in tg.nodes.iter().enumerate() {
        if !in_r[i] {
            continue;
        }
        let image = map_solution(cert, t)?;
        let Some(&si) = sindex.get(&image) else {
            violations.push(format!("g-image {image:?} of an R member is not a source solution"));
            continue;
        };
        let mut mapped: Vec<usize> = Vec::new();
        for (j, _) in &tg.arcs[i] {
            if !in_r[*j] {
                violations.push(format!("improving arc leaves R: {:?} -> {:?}", t, tg.nodes[*j]));
                continue;
            }
            match sindex.get(&map_solution(cert, &tg.nodes[*j])?) {
                Some(&sj) => mapped.push(sj),
                None => violations.push(format!("arc successor maps outside the source graph")),
            }
        }
        // every move out of R strictly worsens the objective
        for m in ev.moves(t)? {
            let succ = ev.apply(t, m)?;
            if is_reasonable(cert, &succ)? {
                continue;
            }
            let d = ev.delta(t, m)?;
            let worsens = match orientation {
                Orientation::Maximize => d.is_negative(),
                Orientation::Minimize => d.is_positive(),
            };
            if !worsens {
                violations.push(format!(
                    "move {} -> part {} exits R without strictly worsening (delta {d})",
                    m.element, m.target
                ));
            }
        }
        mapped.sort_unstable();
        let mut expect: Vec<usize> = sg.arcs[si].iter().map(|(j, _)| *j).collect();
        expect.sort_unstable();
        if mapped != expect {
            violations.push(format!(
                "arc mismatch at {t:?}: target improving arcs map to {mapped:?}, source has {expect:?}"
            ));
        }
    }

    Ok(TightnessReport {
        reduction: cert.id.name().into(),
        digest: crate::io::instance_digest(source)?,
        reasonable_nodes,
        source_nodes: sg.nodes.len(),
        violations,
    })
}

/// Exact cost identities relating source and target objectives, checked
/// over every solution (not just local optima).
pub fn check_identities(id: ReductionId, source: &Instance, cap: u128) -> Result<Vec<String>> {
    let (target, cert) = apply_reduction(id, source)?;
    let mut violations = Vec::new();
    match (&cert.params, id) {
        (CertParams::Split { scale }, _) => {
            let f = source.as_formula()?;
            let tf = target.as_formula()?;
            let n = f.num_vars;
            check_cap(1u128 << n, cap)?;
            for mask in 0..1u64 << n {
                let a = crate::problems::Assignment::from_mask(n, mask);
                if f.cost(a.truth()) * int(i64::from(*scale)) != tf.cost(a.truth()) {
                    violations.push(format!("split cost mismatch at mask {mask}"));
                }
            }
        }
        (CertParams::Shift { shift, half }, _) => {
            let offset = rat_int(&(int((*half as i64) * (*half as i64 + 1)) * shift));
            for s in enumerate_solutions(source, cap)? {
                if cost(source, &s)? + &offset != cost(&target, &s)? {
                    violations.push(format!("shift identity fails at {s:?}"));
                }
            }
        }
        (CertParams::BisectionMin { shift_k }, _) => {
            let f = source.as_formula()?;
            let h = (f.num_vars - 1) / 2;
            let pairs = int((h as i64 + 1) * h as i64);
            let merged = f.merged_pairs()?;
            for s in enumerate_solutions(&target, cap)? {
                let cut = s.as_cut()?;
                let mut max_cost = Int::zero();
                for (&(x, y), w) in &merged {
                    if cut.side(x) != cut.side(y) {
                        max_cost += w;
                    }
                }
                let expect = rat_int(&(&pairs * shift_k - max_cost));
                if cost(&target, &s)? != expect {
                    violations.push(format!("bisection anti-correspondence fails at {s:?}"));
                }
            }
        }
        (CertParams::BisectionMax, _) => {
            for s in enumerate_solutions(&target, cap)? {
                let truth = Solution::Truth(crate::problems::Assignment::new(
                    s.as_cut()?.sides().to_vec(),
                ));
                if cost(&target, &s)? != cost(source, &truth)? {
                    violations.push(format!("bisection correspondence fails at {s:?}"));
                }
            }
        }
        (CertParams::TwoMeans { n, .. }, _) => {
            let g = source.as_graph()?;
            let w_e = rat_int(&g.total_weight());
            let nn = rat_int(&int(*n as i64));
            check_cap(1u128 << n, cap)?;
            for mask in 1..(1u64 << n) - 1 {
                let cut = Bipartition::from_mask(*n, mask);
                let q = cut.sides().iter().filter(|&&b| b).count();
                let r = n - q;
                let w_cut = rat_int(&crate::graph::cut_edge_weight(g, &cut)?);
                let expect = rat_int(&int(2)) * &w_e
                    - &nn * &w_cut / rat_int(&int((q * r) as i64));
                let clusters = Solution::Clusters(crate::graph::Clustering::new(
                    cut.sides().iter().map(|&b| usize::from(!b)).collect(),
                    2,
                )?);
                if cost(&target, &clusters)? != expect {
                    violations.push(format!("2-means identity fails at mask {mask}"));
                }
            }
        }
        (CertParams::Embedding(p), _) => {
            let g = source.as_graph()?;
            let w_e = g.total_weight();
            let n = g.num_vertices();
            let witness = target.as_euclidean()?.witness.as_ref().unwrap();
            let c = p.scale_c.clone().unwrap_or_else(Int::one);
            let tgraph = target.as_graph()?;
            for u in 0..n {
                if p.squared {
                    let norm = witness.row_norm_sq(u);
                    if norm != rat_int(&w_e) / rat_int(&int(2)) {
                        violations.push(format!("row norm of {u} is {norm}, expected w(E)/2"));
                    }
                }
                for v in u + 1..n {
                    let expect = &c * &w_e - g.weight(u, v);
                    let have = tgraph.weight(u, v);
                    let d2 = witness.squared_distance(u, v)?;
                    if p.squared {
                        if rat_int(&have) != d2 || have != expect {
                            violations.push(format!("squared distance mismatch at ({u}, {v})"));
                        }
                    } else if rat_int(&(&have * &have)) != d2 || have != expect {
                        violations.push(format!("distance mismatch at ({u}, {v})"));
                    }
                }
            }
            check_cap(1u128 << n, cap)?;
            for mask in 0..1u64 << n {
                let cut = Bipartition::from_mask(n, mask);
                let x = cut.sides().iter().filter(|&&b| b).count();
                let w_cut = crate::graph::cut_edge_weight(g, &cut)?;
                let expect = rat_int(&(&c * int((x * (n - x)) as i64) * &w_e - w_cut));
                if cost(&target, &Solution::Cut(cut))? != expect {
                    violations.push(format!("cut cost identity fails at mask {mask}"));
                }
            }
        }
        (CertParams::Complement { max_weight }, _) => {
            let n = source.size();
            check_cap(1u128 << n, cap)?;
            let m = rat_int(max_weight);
            for mask in 1..(1u64 << n) - 1 {
                let s = Solution::Cut(Bipartition::from_mask(n, mask));
                if cost(source, &s)? + cost(&target, &s)? != m {
                    violations.push(format!("density complement fails at mask {mask}"));
                }
            }
        }
        _ => {
            return Err(Error::NotApplicable(format!(
                "no cost identity registered for {id}"
            )))
        }
    }
    Ok(violations)
}

fn check_cap(needed: u128, cap: u128) -> Result<()> {
    if needed > cap {
        return Err(Error::CapExceeded { needed, cap });
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistinctReport {
    pub digest: String,
    pub cuts_checked: u64,
    /// A cut (as sides) and a vertex whose flip keeps the weight, if any.
    pub violation: Option<(Vec<bool>, usize)>,
}

impl DistinctReport {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exhaustive distinct-cost check: over every cut, every flip must change
/// the cut weight. Runs on machine integers when the weights fit.
pub fn check_distinct_costs(g: &WeightedGraph, cap: u128) -> Result<DistinctReport> {
    let n = g.num_vertices();
    if n >= 64 {
        return Err(Error::CapExceeded { needed: u128::MAX, cap });
    }
    check_cap(1u128 << n, cap)?;
    let digest = crate::io::instance_digest(&Instance::graph(ProblemKind::MaxCut, g.clone())?)?;

    let small: Option<Vec<Vec<(usize, i64)>>> = (0..n)
        .map(|v| {
            g.neighbors(v)
                .into_iter()
                .map(|(u, w)| w.to_i64().map(|w| (u, w)))
                .collect()
        })
        .collect();
    let mut violation = None;
    'outer: for mask in 0..1u64 << n {
        for v in 0..n {
            let zero = if let Some(adj) = &small {
                let mut d = 0i64;
                for &(u, w) in &adj[v] {
                    if (mask >> u ^ mask >> v) & 1 == 0 {
                        d += w;
                    } else {
                        d -= w;
                    }
                }
                d == 0
            } else {
                let mut d = Int::zero();
                for (u, w) in g.neighbors(v) {
                    if (mask >> u ^ mask >> v) & 1 == 0 {
                        d += w;
                    } else {
                        d -= w;
                    }
                }
                d.is_zero()
            };
            if zero {
                violation = Some((Bipartition::from_mask(n, mask).sides().to_vec(), v));
                break 'outer;
            }
        }
    }
    Ok(DistinctReport { digest, cuts_checked: 1 << n, violation })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum VertexType {
    TypeI,
    TypeII,
    TypeIII,
    Other,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VertexTypeReport {
    pub vertex: usize,
    /// Incident weights sorted descending, padded with zeros to length 4.
    #[serde(with = "int_vec_string")]
    pub sorted_incident: Vec<Int>,
    pub vtype: VertexType,
}

mod int_vec_string {
    use super::Int;
    use crate::exact::parse_int;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Int], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(Int::to_string))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Int>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|r| parse_int(r).map_err(D::Error::custom)).collect()
    }
}

/// Vertex classification for max-degree-4 graphs: with incident weights
/// a >= b >= c >= d (absent edges as 0), TypeI means a > b + c + d, TypeII
/// means a + d > b + c but a < b + c + d, TypeIII means a + d < b + c.
/// Boundary equalities fall into Other.
pub fn classify_vertex(g: &WeightedGraph, v: usize) -> Result<VertexTypeReport> {
    let mut ws: Vec<Int> = g.neighbors(v).into_iter().map(|(_, w)| w).collect();
    if ws.len() > 4 {
        return Err(Error::Validation(format!(
            "vertex {v} has degree {} > 4; types are defined for max degree 4",
            ws.len()
        )));
    }
    ws.resize(4, Int::zero());
    ws.sort_by(|a, b| b.cmp(a));
    let (a, b, c, d) = (&ws[0], &ws[1], &ws[2], &ws[3]);
    let vtype = if *a > b + c + d {
        VertexType::TypeI
    } else if a + d > b + c && *a < b + c + d {
        VertexType::TypeII
    } else if a + d < b + c {
        VertexType::TypeIII
    } else {
        VertexType::Other
    };
    Ok(VertexTypeReport { vertex: v, sorted_incident: ws, vtype })
}

/// The typed-flip lemma: flipping a TypeI/II/III vertex changes the cut
/// weight in every cut. Exhaustive over all cuts.
pub fn check_typed_flip_distinct(g: &WeightedGraph, v: usize, cap: u128) -> Result<bool> {
    let report = classify_vertex(g, v)?;
    if report.vtype == VertexType::Other {
        return Err(Error::NotApplicable(format!(
            "vertex {v} is on a type boundary; the lemma does not cover it"
        )));
    }
    let n = g.num_vertices();
    check_cap(1u128 << n, cap)?;
    let nbrs = g.neighbors(v);
    for mask in 0..1u64 << n {
        let mut delta = Int::zero();
        for (u, w) in &nbrs {
            if (mask >> *u ^ mask >> v) & 1 == 0 {
                delta += w;
            } else {
                delta -= w;
            }
        }
        if delta.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Seeded random instance generation; identical arguments give identical
/// instances. Weights are drawn from 1..=weight_max (signed variants for
/// the NAE kinds that allow negative clause weights).
pub fn random_instance(kind: ProblemKind, n: usize, weight_max: u32, seed: u64) -> Result<Instance> {
    if weight_max == 0 {
        return Err(Error::Validation("weight_max must be positive".into()));
    }
    if n < 2 {
        return Err(Error::Validation(format!("instance size {n} too small")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let odd_required = matches!(
        kind,
        ProblemKind::OddHalfPosNae3Sat
            | ProblemKind::OddHalfPosNae2Sat
            | ProblemKind::OddMaxBisection
            | ProblemKind::OddMinBisection
            | ProblemKind::EuclideanMaxCut
    );
    if odd_required && n % 2 == 0 {
        return Err(Error::Validation(format!("{} requires an odd size, got {n}", kind.tag())));
    }
    let wmax = i64::from(weight_max);
    match kind {
        ProblemKind::MaxCut | ProblemKind::DensestCut | ProblemKind::SparsestCut => {
            let g = random_graph(n, n, wmax, true, &mut rng)?;
            Instance::graph(kind, g)
        }
        ProblemKind::MaxCutDeg5 => {
            let g = random_graph(n, 5, wmax, false, &mut rng)?;
            Instance::graph(kind, g)
        }
        ProblemKind::DistinctMaxCutDeg5 => {
            for _ in 0..10_000 {
                let g = random_graph(n, 5, wmax, false, &mut rng)?;
                if zero_flip_delta(&g).is_none() {
                    return Instance::graph(kind, g);
                }
            }
            Err(Error::Validation(
                "could not sample a distinct-cost instance; raise weight_max".into(),
            ))
        }
        ProblemKind::PosNae3Sat
        | ProblemKind::OddHalfPosNae3Sat
        | ProblemKind::OddHalfPosNae2Sat => {
            let two_only = kind == ProblemKind::OddHalfPosNae2Sat;
            let signed = kind != ProblemKind::PosNae3Sat;
            let m = 2 * n;
            let mut clauses = Vec::with_capacity(m);
            for _ in 0..m {
                let size = if two_only || rng.gen() { 2 } else { 3 };
                let mut lits = Vec::new();
                while lits.len() < size {
                    let v = rng.gen_range(0..n);
                    if !lits.contains(&v) {
                        lits.push(v);
                    }
                }
                let w = if signed {
                    let mag = rng.gen_range(1..=wmax);
                    if rng.gen() {
                        mag
                    } else {
                        -mag
                    }
                } else {
                    rng.gen_range(1..=wmax)
                };
                clauses.push(NaeClause::new(lits, int(w))?);
            }
            Instance::formula(kind, NaeFormula::new(n, clauses)?)
        }
        ProblemKind::OddMaxBisection | ProblemKind::OddMinBisection => {
            // the geometric reductions degenerate on w(E) = 0, so keep every
            // vertex incident to at least one positive edge
            let g = random_graph(n, n, wmax, true, &mut rng)?;
            Instance::graph(kind, g)
        }
        ProblemKind::KMeans(k) => {
            if k > n {
                return Err(Error::Validation(format!("k = {k} exceeds point count {n}")));
            }
            let witness = random_aligned_matrix(n, 4, wmax, &mut rng)?;
            Instance::euclidean(kind, distance_graph(&witness, true)?, Some(witness))
        }
        ProblemKind::SqEuclideanMaxCut => {
            let witness = random_aligned_matrix(n, 4, wmax, &mut rng)?;
            Instance::euclidean(kind, distance_graph(&witness, true)?, Some(witness))
        }
        ProblemKind::EuclideanMaxCut => {
            let bis = random_instance(ProblemKind::OddMinBisection, n, weight_max, seed ^ 0x9e37)?;
            let (target, _) = crate::reductions::r10_euclid(&bis)?;
            Ok(target)
        }
    }
}

fn random_graph(
    n: usize,
    max_degree: usize,
    wmax: i64,
    no_isolated: bool,
    rng: &mut ChaCha8Rng,
) -> Result<WeightedGraph> {
    let mut g = WeightedGraph::new(n);
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    // visit pairs in seeded order so the degree bound does not bias low ids
    for i in (1..pairs.len()).rev() {
        pairs.swap(i, rng.gen_range(0..=i));
    }
    for (u, v) in pairs {
        if g.degree(u) >= max_degree || g.degree(v) >= max_degree {
            continue;
        }
        if rng.gen() {
            g.add_edge(u, v, int(rng.gen_range(1..=wmax)))?;
        }
    }
    if no_isolated {
        for v in 0..n {
            if g.degree(v) == 0 {
                let u = (v + 1) % n;
                g.add_edge(v.min(u), v.max(u), int(rng.gen_range(1..=wmax)))?;
            }
        }
    }
    Ok(g)
}

/// Column-aligned random points: each column draws one integer radicand and
/// every entry is -1, 0 or +1 times its square root, keeping all pairwise
/// squared distances integral.
fn random_aligned_matrix(
    n: usize,
    dims: usize,
    wmax: i64,
    rng: &mut ChaCha8Rng,
) -> Result<PointMatrix> {
    let mut rows = vec![Vec::with_capacity(dims); n];
    for _ in 0..dims {
        let rad = rat_int(&int(rng.gen_range(1..=wmax)));
        for row in rows.iter_mut() {
            row.push(match rng.gen_range(0..3) {
                0 => SqrtCoord::zero(),
                1 => SqrtCoord::sqrt(rad.clone())?,
                _ => SqrtCoord::neg_sqrt(rad.clone())?,
            });
        }
    }
    PointMatrix::new(rows)
}

fn distance_graph(witness: &PointMatrix, squared: bool) -> Result<WeightedGraph> {
    let n = witness.num_points();
    let mut g = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let d2 = witness.squared_distance(u, v)?;
            if !d2.is_integer() {
                return Err(Error::InvalidMatrix(format!(
                    "non-integer squared distance at ({u}, {v})"
                )));
            }
            if squared {
                g.add_edge(u, v, d2.to_integer())?;
            } else {
                let d = d2.to_integer().sqrt();
                if &d * &d != d2.to_integer() {
                    return Err(Error::InvalidMatrix(format!(
                        "non-integer distance at ({u}, {v})"
                    )));
                }
                g.add_edge(u, v, d)?;
            }
        }
    }
    Ok(g)
}

/// r6 with constants small enough for exhaustive target enumeration: the
/// matching shrinks to two pairs and the density-squeezing base keeps its
/// faithful n^9 scale.
pub fn r6_oracle_params(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let n = source.size() as u32;
    r6_densest_with_params(source, 2, Int::from(n).pow(9), None)
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub digest: String,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub reduction: Option<String>,
    pub trials: usize,
    pub violation_count: usize,
    pub outcomes: Vec<SuiteOutcome>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.violation_count == 0
    }

    fn push(&mut self, digest: String, violations: Vec<String>) {
        self.violation_count += violations.len();
        self.outcomes.push(SuiteOutcome { digest, violations });
    }

    fn finish(mut self) -> SuiteReport {
        // deterministic merge order regardless of trial scheduling
        self.outcomes.sort_by(|a, b| a.digest.cmp(&b.digest));
        self
    }
}

pub const SUITES: [&str; 5] = ["preservation", "tightness", "identities", "distinct", "types"];

/// Seeded corpus runner behind `verify`. Suites: preservation, tightness,
/// identities, distinct, types.
pub fn run_suite(
    suite: &str,
    reduction: Option<ReductionId>,
    n: usize,
    trials: usize,
    seed: u64,
    weight_max: u32,
    cap: u128,
) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        suite: suite.into(),
        reduction: reduction.map(|r| r.name().into()),
        trials,
        violation_count: 0,
        outcomes: Vec::new(),
    };
    match suite {
        "preservation" => {
            let id = reduction
                .ok_or_else(|| Error::Validation("preservation needs --reduction".into()))?;
            for t in 0..trials {
                let src = suite_source(id, n, weight_max, seed.wrapping_add(t as u64))?;
                let r = if id == ReductionId::R6 {
                    let (target, cert) = r6_oracle_params(&src)?;
                    check_preservation_with(&src, &target, &cert, cap)?
                } else {
                    check_preservation(id, &src, cap)?
                };
                report.push(r.digest.clone(), r.violations);
            }
        }
        "tightness" => {
            let id = reduction
                .ok_or_else(|| Error::Validation("tightness needs --reduction".into()))?;
            for t in 0..trials {
                let src = suite_source(id, n, weight_max, seed.wrapping_add(t as u64))?;
                let r = check_tightness(id, &src, cap)?;
                report.push(r.digest.clone(), r.violations);
            }
        }
        "identities" => {
            let id = reduction
                .ok_or_else(|| Error::Validation("identities needs --reduction".into()))?;
            for t in 0..trials {
                let src = suite_source(id, n, weight_max, seed.wrapping_add(t as u64))?;
                let violations = check_identities(id, &src, cap)?;
                report.push(crate::io::instance_digest(&src)?, violations);
            }
        }
        "distinct" => {
            for t in 0..trials {
                let src =
                    random_instance(ProblemKind::MaxCutDeg5, n, weight_max, seed.wrapping_add(t as u64))?;
                let (target, _) = crate::reductions::r1_distinct(&src)?;
                let r = check_distinct_costs(target.as_graph()?, cap)?;
                let violations = match r.violation {
                    None => Vec::new(),
                    Some((cut, v)) => vec![format!("flip of {v} keeps the weight at cut {cut:?}")],
                };
                report.push(r.digest.clone(), violations);
            }
        }
        "types" => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..trials {
                let g = random_graph(n, 4, i64::from(weight_max), false, &mut rng)?;
                let digest =
                    crate::io::instance_digest(&Instance::graph(ProblemKind::MaxCut, g.clone())?)?;
                let mut violations = Vec::new();
                for v in 0..g.num_vertices() {
                    let rep = classify_vertex(&g, v)?;
                    if rep.vtype == VertexType::Other {
                        continue;
                    }
                    if !check_typed_flip_distinct(&g, v, cap)? {
                        violations.push(format!(
                            "vertex {v} of {:?} admits a cost-preserving flip",
                            rep.vtype
                        ));
                    }
                }
                report.push(digest, violations);
            }
        }
        other => {
            return Err(Error::Validation(format!(
                "unknown suite {other:?}; expected one of {SUITES:?}"
            )))
        }
    }
    Ok(report.finish())
}

/// Source instance of the right kind for a reduction trial. Sizes that
/// violate a kind constraint (parity) are nudged down to the nearest legal
/// size so corpus loops can sweep n freely.
pub fn suite_source(id: ReductionId, n: usize, weight_max: u32, seed: u64) -> Result<Instance> {
    let kind = source_kind(id);
    let odd_required = matches!(
        kind,
        ProblemKind::OddHalfPosNae3Sat
            | ProblemKind::OddHalfPosNae2Sat
            | ProblemKind::OddMaxBisection
            | ProblemKind::OddMinBisection
    );
    let n = if odd_required && n % 2 == 0 { n - 1 } else { n };
    let inst = random_instance(kind, n, weight_max, seed)?;
    // r5 consumes r4's output, so its corpus needs the shift applied
    if matches!(id, ReductionId::R5Max | ReductionId::R5Min) {
        let (shifted, _) = crate::reductions::r4_nonneg(&inst)?;
        return Ok(shifted);
    }
    Ok(inst)
}

/// Deliberately broken constructions; each must make the checkers report at
/// least one violation somewhere on a small corpus, proving they can fail.
pub fn negative_controls(n: usize, trials: usize, seed: u64, weight_max: u32, cap: u128) -> Result<Vec<(String, usize)>> {
    let mut out = Vec::new();

    // r2 with the level-2 magnitude raised to M, collapsing the weight
    // hierarchy between clause levels
    let mut r2_violations = 0;
    for t in 0..trials {
        let src = random_instance(
            ProblemKind::DistinctMaxCutDeg5,
            n,
            weight_max,
            seed.wrapping_add(t as u64),
        )?;
        let (_, honest) = crate::reductions::r2_nae3(&src)?;
        let CertParams::NaeGadget(p) = &honest.params else { unreachable!() };
        let (target, cert) = crate::reductions::r2_nae3_with_level2_weight(&src, p.m.clone())?;
        r2_violations += check_preservation_with(&src, &target, &cert, cap)?.violations.len();
    }
    out.push(("r2 level-2 weight set to M".into(), r2_violations));

    // r9 with signed incidence entries, flipping every inner product
    let mut r9_violations = 0;
    for t in 0..trials {
        let nn = if n % 2 == 0 { n - 1 } else { n };
        let src = random_instance(
            ProblemKind::OddMinBisection,
            nn,
            weight_max,
            seed.wrapping_add(t as u64),
        )?;
        let (target, cert) = crate::reductions::r9_sq_euclid_signed(&src)?;
        r9_violations += check_preservation_with(&src, &target, &cert, cap)?.violations.len();
    }
    out.push(("r9 signed incidence entries".into(), r9_violations));

    // r6 with the heavy matching degraded to weight 1
    let mut r6_violations = 0;
    for t in 0..trials {
        let nn = if n % 2 == 0 { n - 1 } else { n };
        let src = random_instance(
            ProblemKind::OddMaxBisection,
            nn,
            weight_max,
            seed.wrapping_add(t as u64),
        )?;
        let scale = Int::from(nn as u32).pow(9);
        let (target, cert) = r6_densest_with_params(&src, 2, scale, Some(Int::one()))?;
        r6_violations += check_preservation_with(&src, &target, &cert, cap)?.violations.len();
    }
    out.push(("r6 matching weight 1".into(), r6_violations));

    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::DEFAULT_CAP;

    #[test]
    fn oracle_matches_transition_sinks() {
        for seed in 0..5 {
            let inst = random_instance(ProblemKind::MaxCut, 5, 6, seed).unwrap();
            let oracle = enumerate_local_optima(&inst, DEFAULT_CAP).unwrap();
            let tg = build_transition_graph(&inst, DEFAULT_CAP).unwrap();
            let sinks: Vec<&Solution> = tg.sinks().into_iter().map(|i| &tg.nodes[i]).collect();
            assert_eq!(oracle.iter().collect::<Vec<_>>(), sinks);
        }
    }

    #[test]
    fn k3_local_optima_are_the_nontrivial_cuts() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(0, 2, int(1)).unwrap();
        g.add_edge(1, 2, int(1)).unwrap();
        let inst = Instance::graph(ProblemKind::MaxCut, g).unwrap();
        let optima = enumerate_local_optima(&inst, DEFAULT_CAP).unwrap();
        assert_eq!(optima.len(), 6);
        for s in &optima {
            let cut = s.as_cut().unwrap();
            let x = cut.sides().iter().filter(|&&b| b).count();
            assert!(x == 1 || x == 2);
        }
    }

    #[test]
    fn preservation_r3_small() {
        for seed in 0..5 {
            let src = random_instance(ProblemKind::OddHalfPosNae3Sat, 5, 5, seed).unwrap();
            let r = check_preservation(ReductionId::R3, &src, DEFAULT_CAP).unwrap();
            assert!(r.ok(), "{:?}", r.violations);
        }
    }

    #[test]
    fn tightness_r5_and_r11_small() {
        for seed in 0..3 {
            let src = random_instance(ProblemKind::OddHalfPosNae2Sat, 5, 4, seed).unwrap();
            let (shifted, _) = crate::reductions::r4_nonneg(&src).unwrap();
            for id in [ReductionId::R5Max, ReductionId::R5Min] {
                let r = check_tightness(id, &shifted, DEFAULT_CAP).unwrap();
                assert!(r.ok(), "{id}: {:?}", r.violations);
            }
            let dc = random_instance(ProblemKind::DensestCut, 5, 4, seed).unwrap();
            let r = check_tightness(ReductionId::R11, &dc, DEFAULT_CAP).unwrap();
            assert!(r.ok(), "r11: {:?}", r.violations);
        }
    }

    #[test]
    fn tightness_r7_r8_small() {
        for seed in 0..3 {
            let src = random_instance(ProblemKind::DensestCut, 4, 3, seed).unwrap();
            let r = check_tightness(ReductionId::R7, &src, DEFAULT_CAP).unwrap();
            assert!(r.ok(), "r7: {:?}", r.violations);
            let km = random_instance(ProblemKind::KMeans(2), 4, 3, seed).unwrap();
            let r = check_tightness(ReductionId::R8, &km, DEFAULT_CAP).unwrap();
            assert!(r.ok(), "r8: {:?}", r.violations);
        }
    }

    #[test]
    fn identities_r9_small() {
        for seed in 0..3 {
            let src = random_instance(ProblemKind::OddMinBisection, 5, 4, seed).unwrap();
            assert!(check_identities(ReductionId::R9, &src, DEFAULT_CAP).unwrap().is_empty());
            assert!(check_identities(ReductionId::R10, &src, DEFAULT_CAP).unwrap().is_empty());
        }
    }

    #[test]
    fn distinct_costs_examples() {
        let mut k2 = WeightedGraph::new(2);
        k2.add_edge(0, 1, int(0)).unwrap();
        assert!(!check_distinct_costs(&k2, DEFAULT_CAP).unwrap().ok());

        let mut k3 = WeightedGraph::new(3);
        k3.add_edge(0, 1, int(1)).unwrap();
        k3.add_edge(0, 2, int(1)).unwrap();
        k3.add_edge(1, 2, int(1)).unwrap();
        assert!(!check_distinct_costs(&k3, DEFAULT_CAP).unwrap().ok());

        let src = random_instance(ProblemKind::MaxCutDeg5, 6, 5, 7).unwrap();
        let (target, _) = crate::reductions::r1_distinct(&src).unwrap();
        assert!(check_distinct_costs(target.as_graph().unwrap(), DEFAULT_CAP).unwrap().ok());
    }

    #[test]
    fn vertex_type_examples() {
        let star = |ws: [i64; 4]| {
            let mut g = WeightedGraph::new(5);
            for (i, w) in ws.into_iter().enumerate() {
                g.add_edge(0, i + 1, int(w)).unwrap();
            }
            g
        };
        let cases = [
            ([10, 1, 1, 1], VertexType::TypeI),
            ([5, 4, 3, 3], VertexType::TypeII),
            ([4, 4, 4, 1], VertexType::TypeIII),
            ([2, 1, 1, 0], VertexType::Other),
        ];
        for (ws, expect) in cases {
            let g = star(ws);
            assert_eq!(classify_vertex(&g, 0).unwrap().vtype, expect, "{ws:?}");
            if expect != VertexType::Other {
                assert!(check_typed_flip_distinct(&g, 0, DEFAULT_CAP).unwrap());
            } else {
                assert!(check_typed_flip_distinct(&g, 0, DEFAULT_CAP).is_err());
            }
        }
    }

    #[test]
    fn random_instances_are_deterministic_and_valid() {
        let kinds = [
            ProblemKind::MaxCut,
            ProblemKind::MaxCutDeg5,
            ProblemKind::DistinctMaxCutDeg5,
            ProblemKind::OddHalfPosNae3Sat,
            ProblemKind::OddHalfPosNae2Sat,
            ProblemKind::OddMaxBisection,
            ProblemKind::OddMinBisection,
            ProblemKind::DensestCut,
            ProblemKind::SparsestCut,
            ProblemKind::KMeans(2),
            ProblemKind::SqEuclideanMaxCut,
            ProblemKind::EuclideanMaxCut,
        ];
        for kind in kinds {
            let a = random_instance(kind, 5, 6, 42).unwrap();
            let b = random_instance(kind, 5, 6, 42).unwrap();
            assert_eq!(a, b, "{}", kind.tag());
            assert!(
                crate::problems::validate_instance(&a).is_empty(),
                "{}: {:?}",
                kind.tag(),
                crate::problems::validate_instance(&a)
            );
        }
        assert!(random_instance(ProblemKind::OddMaxBisection, 6, 5, 1).is_err());
    }
}
