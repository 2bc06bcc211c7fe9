//! Cut-to-cut reductions: distinct-cost padding (r1), the bisection-to-
//! densest-cut blowup (r6), and weight complementation (r11).

use super::{CertParams, DensestParams, ReductionCert, ReductionId};
use crate::error::{Error, Result};
use crate::exact::Int;
use crate::graph::WeightedGraph;
use crate::problems::{Instance, ProblemKind};
use num::{Signed, Zero};

/// r1: Max Cut-5 to Distinct Max Cut-5. Weights are scaled by 10, every
/// even-degree vertex receives a dummy neighbor over an explicit zero-weight
/// edge, and then every edge weight grows by 1. All explicit degrees end up
/// odd, which forces every flip to change the cut weight.
pub fn r1_distinct(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    let n = g.num_vertices();
    for v in 0..n {
        let d = g.degree(v);
        if d > 5 {
            return Err(Error::Validation(format!("vertex {v} has degree {d} > 5")));
        }
    }
    let dummies: Vec<usize> = (0..n).filter(|&v| g.degree(v) % 2 == 0).collect();
    let mut h = WeightedGraph::new(n + dummies.len());
    for (u, v, w) in g.edges() {
        h.add_edge(u, v, w * 10 + 1)?;
    }
    for (j, &v) in dummies.iter().enumerate() {
        h.add_edge(v, n + j, Int::from(1))?;
    }
    let target_size = h.num_vertices();
    let target = Instance::graph(ProblemKind::DistinctMaxCutDeg5, h)?;
    let cert = ReductionCert {
        id: ReductionId::R1,
        kind_from: source.kind,
        kind_to: ProblemKind::DistinctMaxCutDeg5,
        source_size: n,
        target_size,
        params: CertParams::Distinct { original_n: n },
    };
    Ok((target, cert))
}

/// r6 with the faithful constants: matching size n^4 and weight scale n^9.
pub fn r6_densest(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let n = source.size() as u32;
    r6_densest_with_params(source, (n.pow(4)) as usize, Int::from(n).pow(9), None)
}

/// r6: Odd Max Bisection to Densest Cut. The source graph is completed with
/// every pair weight raised by scale·wmax, squeezing all densities into a
/// narrow band, and a heavy matching of fresh vertex pairs forces local
/// optima into balanced shapes. `matching_size` and `scale` are
/// parameterized so the brute-force oracles can enumerate small instances;
/// `matching_weight_override` exists purely as a negative-control hook.
pub fn r6_densest_with_params(
    source: &Instance,
    matching_size: usize,
    scale: Int,
    matching_weight_override: Option<Int>,
) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    let n = g.num_vertices();
    if n % 2 == 0 || n < 3 {
        return Err(Error::Validation(format!("odd vertex count >= 3 required, got {n}")));
    }
    if let Some((u, v, w)) = g.edges().find(|(_, _, w)| w.is_negative()) {
        return Err(Error::Validation(format!("negative weight {w} on edge ({u}, {v})")));
    }
    let wmax_hat = g.max_weight().unwrap_or_else(Int::zero);
    let base: Int = &scale * &wmax_hat;
    let w_max: Int = &base + &wmax_hat;
    let matching_weight = matching_weight_override.unwrap_or_else(|| Int::from(n as u64) * &w_max);

    let mut h = WeightedGraph::new(n + 2 * matching_size);
    for u in 0..n {
        for v in u + 1..n {
            h.add_edge(u, v, &base + g.weight(u, v))?;
        }
    }
    let mut matching_pairs = Vec::with_capacity(matching_size);
    for j in 0..matching_size {
        let (a, b) = (n + 2 * j, n + 2 * j + 1);
        h.add_edge(a, b, matching_weight.clone())?;
        matching_pairs.push((a, b));
    }
    let target_size = h.num_vertices();
    let target = Instance::graph(ProblemKind::DensestCut, h)?;
    let cert = ReductionCert {
        id: ReductionId::R6,
        kind_from: source.kind,
        kind_to: ProblemKind::DensestCut,
        source_size: n,
        target_size,
        params: CertParams::Densest(DensestParams {
            source_n: n,
            aux_base: base,
            matching_size,
            matching_weight,
            matching_pairs,
        }),
    };
    Ok((target, cert))
}

/// r11: Densest Cut to Sparsest Cut by complementing every pair weight
/// against the maximum. Densities complement in lockstep, so the two
/// instances share their local optima.
pub fn r11_sparsest(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    let n = g.num_vertices();
    let mut max_weight = Int::zero();
    for u in 0..n {
        for v in u + 1..n {
            let w = g.weight(u, v);
            if w > max_weight {
                max_weight = w;
            }
        }
    }
    let mut h = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            h.add_edge(u, v, &max_weight - g.weight(u, v))?;
        }
    }
    let target = Instance::graph(ProblemKind::SparsestCut, h)?;
    let cert = ReductionCert {
        id: ReductionId::R11,
        kind_from: source.kind,
        kind_to: ProblemKind::SparsestCut,
        source_size: n,
        target_size: n,
        params: CertParams::Complement { max_weight },
    };
    Ok((target, cert))
}
