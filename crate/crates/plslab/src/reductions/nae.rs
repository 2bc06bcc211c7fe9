//! Reductions through weighted positive NAE satisfiability: the three-level
//! clause gadget (r2), clause splitting (r3), the non-negativity shift (r4),
//! and the bisection correspondences (r5).

use super::{
    CertParams, NaeGadgetParams, ReductionCert, ReductionId, compute_delta_min_max,
};
use crate::error::{Error, Result};
use crate::exact::Int;
use crate::graph::WeightedGraph;
use crate::problems::{Instance, NaeClause, NaeFormula, Orientation, ProblemKind, zero_flip_delta};
use num::{Integer, Signed, Zero};

/// r2: Distinct Max Cut-5 to Odd-Half Pos NAE 3-SAT. The target has 4n+1
/// variables: one per vertex, one selector q_v per vertex, and 2n+1
/// balancing variables a_i. Level-1 clauses carry the cut, level-2 clauses
/// force each q_v against its vertex's neighborhood, level-3 clauses break
/// the remaining ties.
pub fn r2_nae3(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    if zero_flip_delta(g).is_some() {
        return Err(Error::Validation(
            "source admits a zero flip delta; neighboring cut costs are not distinct".into(),
        ));
    }
    build_nae_gadget(source, None)
}

/// Test hook: r2 with the level-2 clause magnitude overridden (the honest
/// construction uses L). Used as a negative control by the verifiers.
pub fn r2_nae3_with_level2_weight(
    source: &Instance,
    level2_weight: Int,
) -> Result<(Instance, ReductionCert)> {
    build_nae_gadget(source, Some(level2_weight))
}

fn build_nae_gadget(source: &Instance, level2_override: Option<Int>) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    let n = g.num_vertices();
    let (delta_min, delta_max) = compute_delta_min_max(g)?;
    let big_n = Int::from(2 * n + 1);
    let l: Int = Int::from(64) * &big_n;
    let m: Int = Int::from(5) * &delta_max * &l + Int::from(32) * &big_n + Int::from(1);
    let level2_weight = level2_override.unwrap_or_else(|| l.clone());

    let num_vars = 4 * n + 1;
    let q = |v: usize| n + v;
    let a = |i: usize| 2 * n + i;

    let mut clauses = Vec::new();
    for (u, v, w) in g.edges() {
        clauses.push(NaeClause::new(vec![u, v], &m * w)?);
    }
    for v in 0..n {
        for (u, w) in g.neighbors(v) {
            clauses.push(NaeClause::new(vec![q(v), u], -(&level2_weight * w))?);
        }
    }
    for i in 0..2 * n + 1 {
        for v in 0..n {
            let nbrs = g.neighbors(v);
            for subset in neighbor_subsets(&nbrs) {
                let mut d = Int::zero();
                for (j, (_, w)) in nbrs.iter().enumerate() {
                    if subset >> j & 1 == 1 {
                        d += w;
                    } else {
                        d -= w;
                    }
                }
                let weight = if d.is_positive() { Int::from(-1) } else { Int::zero() };
                clauses.push(NaeClause::new(vec![v, q(v), a(i)], weight)?);
            }
        }
    }

    let formula = NaeFormula::new(num_vars, clauses)?;
    let target = Instance::formula(ProblemKind::OddHalfPosNae3Sat, formula)?;
    let cert = ReductionCert {
        id: ReductionId::R2,
        kind_from: source.kind,
        kind_to: ProblemKind::OddHalfPosNae3Sat,
        source_size: n,
        target_size: num_vars,
        params: CertParams::NaeGadget(NaeGadgetParams { n, big_n, l, m, delta_min, delta_max }),
    };
    Ok((target, cert))
}

/// Subset bitmasks of a neighborhood ordered by decreasing subset size,
/// then lexicographically by the contained neighbor ids. This is the order
/// the clause table of the source construction lists them in.
fn neighbor_subsets(nbrs: &[(usize, Int)]) -> Vec<u32> {
    let mut masks: Vec<u32> = (0..1u32 << nbrs.len()).collect();
    masks.sort_by_key(|&mask| {
        let members: Vec<usize> = (0..nbrs.len()).filter(|&j| mask >> j & 1 == 1).map(|j| nbrs[j].0).collect();
        (std::cmp::Reverse(members.len()), members)
    });
    masks
}

/// r3: Odd-Half Pos NAE 3-SAT to the 2-SAT variant. Three-literal clauses
/// of weight W split into the three pair clauses of weight W/2. If any
/// clause weight is odd, all weights are doubled first; the recorded scale
/// (1 or 2) relates the two cost functions exactly.
pub fn r3_nae3_to_nae2(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let f = source.as_formula()?;
    let scale: u32 = if f.clauses.iter().all(|c| c.weight.is_even()) { 1 } else { 2 };
    let factor = Int::from(scale);
    let mut clauses = Vec::new();
    for c in &f.clauses {
        let w = &c.weight * &factor;
        match c.lits.as_slice() {
            [x, y] => clauses.push(NaeClause::new(vec![*x, *y], w)?),
            [x, y, z] => {
                let half: Int = &w / 2;
                clauses.push(NaeClause::new(vec![*x, *y], half.clone())?);
                clauses.push(NaeClause::new(vec![*x, *z], half.clone())?);
                clauses.push(NaeClause::new(vec![*y, *z], half)?);
            }
            _ => unreachable!("clause sizes validated at construction"),
        }
    }
    let target = Instance::formula(ProblemKind::OddHalfPosNae2Sat, NaeFormula::new(f.num_vars, clauses)?)?;
    let cert = ReductionCert {
        id: ReductionId::R3,
        kind_from: source.kind,
        kind_to: ProblemKind::OddHalfPosNae2Sat,
        source_size: f.num_vars,
        target_size: f.num_vars,
        params: CertParams::Split { scale },
    };
    Ok((target, cert))
}

/// r4: shift to non-negative weights. Duplicate pair clauses merge, every
/// missing pair appears with weight zero, and all weights gain
/// S = 1 + max(0, -min weight). Every feasible assignment on 2h+1 variables
/// satisfies exactly h(h+1) pair clauses, so costs shift by h(h+1)·S.
pub fn r4_nonneg(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let f = source.as_formula()?;
    let vars = f.num_vars;
    if vars % 2 == 0 {
        return Err(Error::Validation(format!("odd variable count required, got {vars}")));
    }
    let half = (vars - 1) / 2;
    let mut merged = f.merged_pairs()?;
    for x in 0..vars {
        for y in x + 1..vars {
            merged.entry((x, y)).or_insert_with(Int::zero);
        }
    }
    let min = merged.values().min().cloned().unwrap_or_else(Int::zero);
    let shift = Int::from(1) + if min.is_negative() { -min } else { Int::zero() };
    let clauses = merged
        .into_iter()
        .map(|((x, y), w)| NaeClause::new(vec![x, y], w + &shift))
        .collect::<Result<Vec<_>>>()?;
    let target = Instance::formula(ProblemKind::OddHalfPosNae2Sat, NaeFormula::new(vars, clauses)?)?;
    let cert = ReductionCert {
        id: ReductionId::R4,
        kind_from: source.kind,
        kind_to: ProblemKind::OddHalfPosNae2Sat,
        source_size: vars,
        target_size: vars,
        params: CertParams::Shift { shift, half },
    };
    Ok((target, cert))
}

/// r5: variables become vertices, merged pair clauses become edges. The max
/// orientation stops there; the min orientation completes the graph,
/// negates, and shifts by K = max weight so all weights stay non-negative.
pub fn r5_bisection(source: &Instance, orientation: Orientation) -> Result<(Instance, ReductionCert)> {
    let f = source.as_formula()?;
    let vars = f.num_vars;
    if vars % 2 == 0 {
        return Err(Error::Validation(format!("odd variable count required, got {vars}")));
    }
    if let Some(c) = f.clauses.iter().find(|c| c.weight.is_negative()) {
        return Err(Error::Validation(format!(
            "negative clause weight {}; apply the non-negativity shift first",
            c.weight
        )));
    }
    let merged = f.merged_pairs()?;
    let (kind, mut g) = match orientation {
        Orientation::Maximize => {
            let mut g = WeightedGraph::new(vars);
            for ((x, y), w) in &merged {
                g.add_edge(*x, *y, w.clone())?;
            }
            (ProblemKind::OddMaxBisection, g)
        }
        Orientation::Minimize => (ProblemKind::OddMinBisection, WeightedGraph::new(vars)),
    };
    let shift_k = if orientation == Orientation::Minimize {
        let k = merged.values().max().cloned().unwrap_or_else(Int::zero);
        for x in 0..vars {
            for y in x + 1..vars {
                let w = merged.get(&(x, y)).cloned().unwrap_or_else(Int::zero);
                g.add_edge(x, y, &k - w)?;
            }
        }
        Some(k)
    } else {
        None
    };
    let target = Instance::graph(kind, g)?;
    let cert = ReductionCert {
        id: if orientation == Orientation::Maximize { ReductionId::R5Max } else { ReductionId::R5Min },
        kind_from: source.kind,
        kind_to: kind,
        source_size: vars,
        target_size: vars,
        params: match shift_k {
            None => CertParams::BisectionMax,
            Some(k) => CertParams::BisectionMin { shift_k: k },
        },
    };
    Ok((target, cert))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat_int};
    use crate::problems::{cost, Assignment, Instance, ProblemKind, Solution};

    fn star_1_8_3() -> Instance {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(0, 2, int(8)).unwrap();
        g.add_edge(0, 3, int(3)).unwrap();
        Instance::graph(ProblemKind::DistinctMaxCutDeg5, g).unwrap()
    }

    #[test]
    fn gadget_constants_and_weights() {
        let (target, cert) = r2_nae3(&star_1_8_3()).unwrap();
        let CertParams::NaeGadget(p) = &cert.params else { panic!("wrong cert") };
        assert_eq!(p.big_n, int(9));
        assert_eq!(p.l, int(576));
        assert_eq!(p.m, int(34849));
        assert_eq!(p.delta_min, int(1));
        assert_eq!(p.delta_max, int(12));

        let f = target.as_formula().unwrap();
        assert_eq!(f.num_vars, 17);
        assert_eq!(f.clauses.len(), 3 + 6 + 9 * 14);
        let w1: Vec<Int> = f.clauses[..3].iter().map(|c| c.weight.clone()).collect();
        assert_eq!(w1, vec![&p.m * 1, &p.m * 8, &p.m * 3]);
        let q0: Vec<Int> = f
            .clauses
            .iter()
            .filter(|c| c.lits.len() == 2 && c.lits.contains(&4))
            .map(|c| c.weight.clone())
            .collect();
        assert_eq!(q0, vec![-&p.l * 1, -&p.l * 8, -&p.l * 3]);
        // level-3 block of the first balancing variable at the star center,
        // in subset order {1,2,3}, {1,2}, {1,3}, {2,3}, {1}, {2}, {3}, {}
        let block: Vec<Int> = f.clauses[9..17].iter().map(|c| c.weight.clone()).collect();
        let expect = [-1, -1, 0, -1, 0, -1, 0, 0].map(Int::from);
        assert_eq!(block, expect);
        for c in &f.clauses[9..17] {
            assert_eq!(c.lits, vec![0, 4, 8]);
        }
    }

    #[test]
    fn gadget_rejects_tied_neighbors() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(1, 2, int(1)).unwrap();
        let inst = Instance::graph(ProblemKind::DistinctMaxCutDeg5, g).unwrap();
        assert!(r2_nae3(&inst).is_err());
    }

    #[test]
    fn split_keeps_costs() {
        let f = NaeFormula::new(3, vec![NaeClause::new(vec![0, 1, 2], int(4)).unwrap()]).unwrap();
        let src = Instance::formula(ProblemKind::OddHalfPosNae3Sat, f).unwrap();
        let (tgt, cert) = r3_nae3_to_nae2(&src).unwrap();
        assert_eq!(cert.params, CertParams::Split { scale: 1 });
        let tf = tgt.as_formula().unwrap();
        assert_eq!(tf.clauses.len(), 3);
        assert!(tf.clauses.iter().all(|c| c.weight == int(2)));
        for mask in 0..1u64 << 3 {
            let a = crate::problems::Assignment::from_mask(3, mask);
            assert_eq!(src.as_formula().unwrap().cost(a.truth()), tf.cost(a.truth()));
        }
    }

    #[test]
    fn split_doubles_odd_weights() {
        let f = NaeFormula::new(3, vec![NaeClause::new(vec![0, 1, 2], int(3)).unwrap()]).unwrap();
        let src = Instance::formula(ProblemKind::OddHalfPosNae3Sat, f).unwrap();
        let (tgt, cert) = r3_nae3_to_nae2(&src).unwrap();
        assert_eq!(cert.params, CertParams::Split { scale: 2 });
        let tf = tgt.as_formula().unwrap();
        for mask in 0..1u64 << 3 {
            let a = crate::problems::Assignment::from_mask(3, mask);
            assert_eq!(src.as_formula().unwrap().cost(a.truth()) * 2, tf.cost(a.truth()));
        }
    }

    #[test]
    fn shift_example() {
        let f = NaeFormula::new(
            3,
            vec![
                NaeClause::new(vec![0, 1], int(-2)).unwrap(),
                NaeClause::new(vec![0, 2], int(5)).unwrap(),
            ],
        )
        .unwrap();
        let src = Instance::formula(ProblemKind::OddHalfPosNae2Sat, f).unwrap();
        let (tgt, cert) = r4_nonneg(&src).unwrap();
        assert_eq!(cert.params, CertParams::Shift { shift: int(3), half: 1 });
        let mut weights: Vec<Int> =
            tgt.as_formula().unwrap().clauses.iter().map(|c| c.weight.clone()).collect();
        weights.sort();
        assert_eq!(weights, vec![int(1), int(3), int(8)]);
        // every feasible assignment shifts by half*(half+1)*S = 2*3
        for mask in 0..1u64 << 3 {
            let a = Assignment::from_mask(3, mask);
            if a.imbalance() != 1 {
                continue;
            }
            let s = Solution::Truth(a);
            assert_eq!(cost(&src, &s).unwrap() + rat_int(&int(6)), cost(&tgt, &s).unwrap());
        }
    }

    #[test]
    fn bisection_both_orientations() {
        let f = NaeFormula::new(3, vec![NaeClause::new(vec![0, 1], int(3)).unwrap()]).unwrap();
        let src = Instance::formula(ProblemKind::OddHalfPosNae2Sat, f).unwrap();
        let (max_t, max_c) = r5_bisection(&src, Orientation::Maximize).unwrap();
        assert_eq!(max_c.params, CertParams::BisectionMax);
        let g = max_t.as_graph().unwrap();
        assert_eq!(g.weight(0, 1), int(3));
        assert_eq!(g.weight(0, 2), int(0));

        let (min_t, min_c) = r5_bisection(&src, Orientation::Minimize).unwrap();
        assert_eq!(min_c.params, CertParams::BisectionMin { shift_k: int(3) });
        let h = min_t.as_graph().unwrap();
        assert_eq!(h.weight(0, 1), int(0));
        assert_eq!(h.weight(0, 2), int(3));
        assert_eq!(h.weight(1, 2), int(3));

        // cut ({a},{b,c}) in the max instance equals the NAE cost of (T,F,F)
        let cut = Solution::Cut(crate::graph::Bipartition::from_mask(3, 0b001));
        assert_eq!(cost(&max_t, &cut).unwrap(), rat_int(&int(3)));
    }

    #[test]
    fn bisection_rejects_negative_weights() {
        let f = NaeFormula::new(3, vec![NaeClause::new(vec![0, 1], int(-1)).unwrap()]).unwrap();
        let src = Instance::formula(ProblemKind::OddHalfPosNae2Sat, f).unwrap();
        assert!(r5_bisection(&src, Orientation::Maximize).is_err());
    }
}
