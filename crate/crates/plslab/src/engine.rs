//! The standard local-search machinery: deterministic initial solutions,
//! pivoting, full runs, and exhaustive transition-graph construction for
//! desk-scale instances.
//!
//! ```
//! use plslab::engine::{build_transition_graph, DEFAULT_CAP};
//! use plslab::exact::int;
//! use plslab::graph::WeightedGraph;
//! use plslab::problems::{Instance, ProblemKind};
//!
//! let mut g = WeightedGraph::new(2);
//! g.add_edge(0, 1, int(7)).unwrap();
//! let inst = Instance::graph(ProblemKind::MaxCut, g).unwrap();
//! let tg = build_transition_graph(&inst, DEFAULT_CAP).unwrap();
//! assert_eq!(tg.nodes.len(), 4);
//! assert_eq!(tg.num_arcs(), 4);
//! assert_eq!(tg.sinks().len(), 2);
//! ```

use crate::error::{Error, Result};
use crate::exact::Rat;
use crate::graph::{Bipartition, Clustering};
use crate::problems::{Assignment, Evaluator, Instance, Move, ProblemKind, Solution};
use std::collections::HashMap;

pub const DEFAULT_CAP: u128 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PivotRule {
    /// Fixed scan order: lowest element id, then lowest target id.
    FirstImprovement,
    /// Largest improvement; ties broken toward the lowest element id.
    BestImprovement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchTrace {
    pub start: Solution,
    pub moves: Vec<(usize, usize, Rat)>,
    pub final_solution: Solution,
    pub iterations: usize,
    pub truncated: bool,
}

/// Deterministic feasible start (algorithm A): cut problems put vertices
/// 0..ceil(n/2)-1 on side X, k-Means assigns point i to cluster i mod k,
/// formulas set variables 0..ceil(n/2)-1 true.
pub fn initial_solution(instance: &Instance) -> Result<Solution> {
    let n = instance.size();
    let kind = instance.kind;
    if kind.balance_constrained() && n % 2 == 0 {
        return Err(Error::Validation(format!(
            "{} needs an odd element count, got {n}",
            kind.tag()
        )));
    }
    let half = n.div_ceil(2);
    let s = match kind {
        ProblemKind::KMeans(k) => {
            Solution::Clusters(Clustering::new((0..n).map(|i| i % k).collect(), k)?)
        }
        k if k.is_formula() => Solution::Truth(Assignment::new((0..n).map(|v| v < half).collect())),
        _ => Solution::Cut(Bipartition::new((0..n).map(|v| v < half).collect())),
    };
    let ev = Evaluator::new(instance)?;
    if !ev.is_feasible(&s)? {
        return Err(Error::Validation(format!(
            "no feasible initial solution for {} with n = {n}",
            kind.tag()
        )));
    }
    Ok(s)
}

/// Algorithm C: a strictly improving feasible move, or None at a local
/// optimum.
pub fn improving_move(instance: &Instance, s: &Solution, rule: PivotRule) -> Result<Option<(Move, Rat)>> {
    let ev = Evaluator::new(instance)?;
    improving_move_with(&ev, s, rule)
}

pub fn improving_move_with(
    ev: &Evaluator,
    s: &Solution,
    rule: PivotRule,
) -> Result<Option<(Move, Rat)>> {
    let mut best: Option<(Move, Rat)> = None;
    for m in ev.moves(s)? {
        let d = ev.delta(s, m)?;
        if !ev.improves(&d) {
            continue;
        }
        match rule {
            PivotRule::FirstImprovement => return Ok(Some((m, d))),
            PivotRule::BestImprovement => {
                let better = match &best {
                    None => true,
                    // moves arrive in element order, so strict comparison
                    // keeps the lowest element id on ties
                    Some((_, cur)) => match ev.kind().orientation() {
                        crate::problems::Orientation::Maximize => d > *cur,
                        crate::problems::Orientation::Minimize => d < *cur,
                    },
                };
                if better {
                    best = Some((m, d));
                }
            }
        }
    }
    Ok(best)
}

/// Runs algorithm C to a sink. `max_iters` caps the number of applied moves;
/// hitting the cap yields a trace flagged truncated, not an error.
pub fn run_local_search(
    instance: &Instance,
    start: Solution,
    rule: PivotRule,
    max_iters: Option<usize>,
) -> Result<SearchTrace> {
    let ev = Evaluator::new(instance)?;
    if !ev.is_feasible(&start)? {
        return Err(Error::Validation("local search started at an infeasible solution".into()));
    }
    let mut current = start.clone();
    let mut moves = Vec::new();
    let mut truncated = false;
    loop {
        if let Some(cap) = max_iters {
            if moves.len() >= cap {
                truncated = improving_move_with(&ev, &current, rule)?.is_some();
                break;
            }
        }
        match improving_move_with(&ev, &current, rule)? {
            None => break,
            Some((m, d)) => {
                current = ev.apply(&current, m)?;
                moves.push((m.element, m.target, d));
            }
        }
    }
    let iterations = moves.len();
    Ok(SearchTrace { start, moves, final_solution: current, iterations, truncated })
}

/// The unique solution the standard algorithm reaches from algorithm A's
/// start under the given pivot rule.
pub fn standard_solution(instance: &Instance, rule: PivotRule) -> Result<Solution> {
    let start = initial_solution(instance)?;
    Ok(run_local_search(instance, start, rule, None)?.final_solution)
}

pub fn is_local_optimum(instance: &Instance, s: &Solution) -> Result<bool> {
    Evaluator::new(instance)?.is_local_optimum(s)
}

/// All feasible solutions in canonical encoding order. The raw encoding
/// space (2^n or k^n) must fit under the cap.
pub fn enumerate_solutions(instance: &Instance, cap: u128) -> Result<Vec<Solution>> {
    let n = instance.size();
    let ev = Evaluator::new(instance)?;
    let raw: u128 = match instance.kind {
        ProblemKind::KMeans(k) => (k as u128)
            .checked_pow(n as u32)
            .ok_or(Error::CapExceeded { needed: u128::MAX, cap })?,
        _ => {
            if n >= 64 {
                return Err(Error::CapExceeded { needed: u128::MAX, cap });
            }
            1u128 << n
        }
    };
    if raw > cap {
        return Err(Error::CapExceeded { needed: raw, cap });
    }
    let mut out = Vec::new();
    match instance.kind {
        ProblemKind::KMeans(k) => {
            let mut assign = vec![0usize; n];
            loop {
                let c = Solution::Clusters(Clustering::new(assign.clone(), k)?);
                if ev.is_feasible(&c)? {
                    out.push(c);
                }
                // mixed-radix increment, least significant digit first
                let mut i = 0;
                while i < n {
                    assign[i] += 1;
                    if assign[i] < k {
                        break;
                    }
                    assign[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
            }
        }
        kind => {
            for mask in 0..raw as u64 {
                let s = if kind.is_formula() {
                    Solution::Truth(Assignment::from_mask(n, mask))
                } else {
                    Solution::Cut(Bipartition::from_mask(n, mask))
                };
                if ev.is_feasible(&s)? {
                    out.push(s);
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TransitionGraph {
    pub nodes: Vec<Solution>,
    pub costs: Vec<Rat>,
    /// Improving arcs: for each node, (successor index, delta).
    pub arcs: Vec<Vec<(usize, Rat)>>,
    /// Shortest distance to a sink along arcs.
    pub heights: Vec<usize>,
}

impl TransitionGraph {
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.nodes.len()).filter(|&i| self.arcs[i].is_empty()).collect()
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.iter().map(Vec::len).sum()
    }
}

/// Exhaustive transition graph with heights by reverse BFS from the sinks.
pub fn build_transition_graph(instance: &Instance, cap: u128) -> Result<TransitionGraph> {
    let ev = Evaluator::new(instance)?;
    let nodes = enumerate_solutions(instance, cap)?;
    let index: HashMap<&Solution, usize> = nodes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut costs = Vec::with_capacity(nodes.len());
    for s in &nodes {
        costs.push(ev.cost(s)?);
    }
    let mut arcs = vec![Vec::new(); nodes.len()];
    let mut preds = vec![Vec::new(); nodes.len()];
    for (i, s) in nodes.iter().enumerate() {
        for m in ev.moves(s)? {
            let d = ev.delta(s, m)?;
            if !ev.improves(&d) {
                continue;
            }
            let t = ev.apply(s, m)?;
            let j = *index.get(&t).ok_or_else(|| {
                Error::Validation("improving move left the feasible solution set".into())
            })?;
            arcs[i].push((j, d));
            preds[j].push(i);
        }
    }
    let mut heights = vec![usize::MAX; nodes.len()];
    let mut queue: std::collections::VecDeque<usize> = (0..nodes.len())
        .filter(|&i| arcs[i].is_empty())
        .inspect(|&i| heights[i] = 0)
        .collect();
    while let Some(i) = queue.pop_front() {
        for &p in &preds[i] {
            if heights[p] == usize::MAX {
                heights[p] = heights[i] + 1;
                queue.push_back(p);
            }
        }
    }
    if heights.iter().any(|&h| h == usize::MAX) {
        return Err(Error::Validation("transition graph has a node with no path to a sink".into()));
    }
    Ok(TransitionGraph { nodes, costs, arcs, heights })
}
