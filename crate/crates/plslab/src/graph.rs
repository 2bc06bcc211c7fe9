//! Weighted graphs and the solution carriers shared by the cut and
//! clustering problems.
//!
//! Edges are explicit: a stored pair is an edge even when its weight is zero,
//! and an absent pair is a non-edge of weight zero. Degree and parity count
//! explicit edges only. The distinction matters because one reduction pads
//! vertices with zero-weight edges precisely to fix their parity.

use crate::error::{Error, Result};
use crate::exact::Int;
use num::Zero;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    n: usize,
    edges: BTreeMap<(usize, usize), Int>,
}

impl WeightedGraph {
    pub fn new(n: usize) -> Self {
        WeightedGraph { n, edges: BTreeMap::new() }
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    fn key(&self, u: usize, v: usize) -> Result<(usize, usize)> {
        if u == v {
            return Err(Error::Validation(format!("self-loop at vertex {u}")));
        }
        if u >= self.n || v >= self.n {
            return Err(Error::Dimension(format!(
                "edge ({u}, {v}) out of range for {} vertices",
                self.n
            )));
        }
        Ok((u.min(v), u.max(v)))
    }

    /// Inserts or replaces an explicit edge. Weight zero is allowed and makes
    /// the pair an explicit zero-weight edge.
    pub fn add_edge(&mut self, u: usize, v: usize, w: Int) -> Result<()> {
        let k = self.key(u, v)?;
        self.edges.insert(k, w);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let k = self.key(u, v)?;
        self.edges.remove(&k);
        Ok(())
    }

    /// Weight of the pair, zero for non-edges.
    pub fn weight(&self, u: usize, v: usize) -> Int {
        match self.key(u, v) {
            Ok(k) => self.edges.get(&k).cloned().unwrap_or_else(Int::zero),
            Err(_) => Int::zero(),
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.key(u, v).map_or(false, |k| self.edges.contains_key(&k))
    }

    /// Explicit edges in sorted order, zero weights included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Int)> {
        self.edges.iter().map(|(&(u, v), w)| (u, v, w))
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Number of explicit incident edges.
    pub fn degree(&self, v: usize) -> usize {
        self.edges.keys().filter(|&&(a, b)| a == v || b == v).count()
    }

    /// Explicit neighbors of v with weights, sorted by neighbor id.
    pub fn neighbors(&self, v: usize) -> Vec<(usize, Int)> {
        let mut out = Vec::new();
        for (&(a, b), w) in &self.edges {
            if a == v {
                out.push((b, w.clone()));
            } else if b == v {
                out.push((a, w.clone()));
            }
        }
        out.sort_by_key(|&(u, _)| u);
        out
    }

    /// Adjacency lists for all vertices at once, nonzero-weight edges only.
    pub fn adjacency(&self) -> Vec<Vec<(usize, Int)>> {
        let mut adj = vec![Vec::new(); self.n];
        for (&(u, v), w) in &self.edges {
            if w.is_zero() {
                continue;
            }
            adj[u].push((v, w.clone()));
            adj[v].push((u, w.clone()));
        }
        adj
    }

    pub fn total_weight(&self) -> Int {
        self.edges.values().sum()
    }

    pub fn max_weight(&self) -> Option<Int> {
        self.edges.values().max().cloned()
    }

    pub fn min_weight(&self) -> Option<Int> {
        self.edges.values().min().cloned()
    }
}

/// A two-sided vertex partition; `true` means side X.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bipartition {
    side: Vec<bool>,
}

impl Bipartition {
    pub fn new(side: Vec<bool>) -> Self {
        Bipartition { side }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Bipartition { side: (0..n).map(|v| mask >> v & 1 == 1).collect() }
    }

    pub fn mask(&self) -> u64 {
        self.side.iter().enumerate().fold(0, |m, (v, &s)| m | (u64::from(s) << v))
    }

    pub fn len(&self) -> usize {
        self.side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.side.is_empty()
    }

    pub fn side(&self, v: usize) -> bool {
        self.side[v]
    }

    pub fn sides(&self) -> &[bool] {
        &self.side
    }

    pub fn count_x(&self) -> usize {
        self.side.iter().filter(|&&s| s).count()
    }

    pub fn count_y(&self) -> usize {
        self.side.len() - self.count_x()
    }

    /// Absolute side-size difference.
    pub fn imbalance(&self) -> usize {
        let x = self.count_x();
        let y = self.side.len() - x;
        x.abs_diff(y)
    }

    /// The partition with vertex v moved to the other side.
    pub fn flip(&self, v: usize) -> Result<Bipartition> {
        if v >= self.side.len() {
            return Err(Error::Dimension(format!(
                "flip of vertex {v} in a partition of {} vertices",
                self.side.len()
            )));
        }
        let mut side = self.side.clone();
        side[v] = !side[v];
        Ok(Bipartition { side })
    }
}

/// Total weight of edges crossing the partition.
pub fn cut_edge_weight(g: &WeightedGraph, p: &Bipartition) -> Result<Int> {
    if p.len() != g.num_vertices() {
        return Err(Error::Dimension(format!(
            "partition of {} vertices against a graph with {}",
            p.len(),
            g.num_vertices()
        )));
    }
    let mut total = Int::zero();
    for (u, v, w) in g.edges() {
        if p.side(u) != p.side(v) {
            total += w;
        }
    }
    Ok(total)
}

/// An assignment of points to the clusters 0..k. Clusters may be empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Clustering {
    assign: Vec<usize>,
    k: usize,
}

impl Clustering {
    pub fn new(assign: Vec<usize>, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::Validation("clustering needs at least one cluster".into()));
        }
        if let Some(&bad) = assign.iter().find(|&&c| c >= k) {
            return Err(Error::Validation(format!("cluster id {bad} out of range for k = {k}")));
        }
        Ok(Clustering { assign, k })
    }

    pub fn len(&self) -> usize {
        self.assign.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assign.is_empty()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn cluster(&self, p: usize) -> usize {
        self.assign[p]
    }

    pub fn assignments(&self) -> &[usize] {
        &self.assign
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &c in &self.assign {
            sizes[c] += 1;
        }
        sizes
    }

    /// The clustering with point p reassigned to cluster c.
    pub fn reassign(&self, p: usize, c: usize) -> Result<Clustering> {
        if p >= self.assign.len() {
            return Err(Error::Dimension(format!("point {p} out of range")));
        }
        if c >= self.k {
            return Err(Error::InfeasibleMove(format!("cluster {c} out of range for k = {}", self.k)));
        }
        let mut assign = self.assign.clone();
        assign[p] = c;
        Ok(Clustering { assign, k: self.k })
    }
}
