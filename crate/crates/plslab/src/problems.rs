//! The eight local search problems: feasibility, exact cost, orientation,
//! and Flip-move deltas.
//!
//! Every problem uses the Flip neighborhood: move exactly one element to
//! another part. The bisection and odd-half kinds constrain which flips keep
//! a solution feasible; all cost arithmetic is exact rational.
//!
//! ```
//! use plslab::exact::{int, rat};
//! use plslab::graph::{Bipartition, WeightedGraph};
//! use plslab::problems::{Evaluator, Instance, ProblemKind, Solution};
//!
//! let mut g = WeightedGraph::new(3);
//! g.add_edge(0, 1, int(1)).unwrap();
//! g.add_edge(0, 2, int(2)).unwrap();
//! g.add_edge(1, 2, int(4)).unwrap();
//! let inst = Instance::graph(ProblemKind::MaxCut, g).unwrap();
//! let ev = Evaluator::new(&inst).unwrap();
//! let s = Solution::Cut(Bipartition::from_mask(3, 0b001));
//! assert_eq!(ev.cost(&s).unwrap(), rat(3, 1));
//! ```

use crate::error::{Error, Result};
use crate::exact::{rat_int, Int, PointMatrix, Rat};
use crate::graph::{cut_edge_weight, Bipartition, Clustering, WeightedGraph};
use num::{Signed, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemKind {
    MaxCut,
    MaxCutDeg5,
    DistinctMaxCutDeg5,
    PosNae3Sat,
    OddHalfPosNae3Sat,
    OddHalfPosNae2Sat,
    OddMaxBisection,
    OddMinBisection,
    DensestCut,
    SparsestCut,
    KMeans(usize),
    SqEuclideanMaxCut,
    EuclideanMaxCut,
}

impl ProblemKind {
    pub fn orientation(self) -> Orientation {
        match self {
            ProblemKind::OddMinBisection | ProblemKind::SparsestCut | ProblemKind::KMeans(_) => {
                Orientation::Minimize
            }
            _ => Orientation::Maximize,
        }
    }

    pub fn is_formula(self) -> bool {
        matches!(
            self,
            ProblemKind::PosNae3Sat | ProblemKind::OddHalfPosNae3Sat | ProblemKind::OddHalfPosNae2Sat
        )
    }

    pub fn is_euclidean(self) -> bool {
        matches!(
            self,
            ProblemKind::KMeans(_) | ProblemKind::SqEuclideanMaxCut | ProblemKind::EuclideanMaxCut
        )
    }

    pub fn is_graph(self) -> bool {
        !self.is_formula() && !self.is_euclidean()
    }

    /// Kinds where sides must differ in size by exactly one.
    pub fn balance_constrained(self) -> bool {
        matches!(
            self,
            ProblemKind::OddHalfPosNae3Sat
                | ProblemKind::OddHalfPosNae2Sat
                | ProblemKind::OddMaxBisection
                | ProblemKind::OddMinBisection
        )
    }

    /// Kinds where an empty side makes the objective undefined.
    pub fn forbids_empty_side(self) -> bool {
        matches!(self, ProblemKind::DensestCut | ProblemKind::SparsestCut)
    }

    pub fn tag(self) -> String {
        match self {
            ProblemKind::MaxCut => "maxcut".into(),
            ProblemKind::MaxCutDeg5 => "maxcut5".into(),
            ProblemKind::DistinctMaxCutDeg5 => "distinct-maxcut5".into(),
            ProblemKind::PosNae3Sat => "pos-nae3sat".into(),
            ProblemKind::OddHalfPosNae3Sat => "odd-half-pos-nae3sat".into(),
            ProblemKind::OddHalfPosNae2Sat => "odd-half-pos-nae2sat".into(),
            ProblemKind::OddMaxBisection => "odd-max-bisection".into(),
            ProblemKind::OddMinBisection => "odd-min-bisection".into(),
            ProblemKind::DensestCut => "densest-cut".into(),
            ProblemKind::SparsestCut => "sparsest-cut".into(),
            ProblemKind::KMeans(_) => "kmeans".into(),
            ProblemKind::SqEuclideanMaxCut => "sq-euclidean-maxcut".into(),
            ProblemKind::EuclideanMaxCut => "euclidean-maxcut".into(),
        }
    }

    /// Inverse of `tag`; k-Means needs its cluster count supplied.
    pub fn from_tag(tag: &str, k: Option<usize>) -> Result<ProblemKind> {
        Ok(match tag {
            "maxcut" => ProblemKind::MaxCut,
            "maxcut5" => ProblemKind::MaxCutDeg5,
            "distinct-maxcut5" => ProblemKind::DistinctMaxCutDeg5,
            "pos-nae3sat" => ProblemKind::PosNae3Sat,
            "odd-half-pos-nae3sat" => ProblemKind::OddHalfPosNae3Sat,
            "odd-half-pos-nae2sat" => ProblemKind::OddHalfPosNae2Sat,
            "odd-max-bisection" => ProblemKind::OddMaxBisection,
            "odd-min-bisection" => ProblemKind::OddMinBisection,
            "densest-cut" => ProblemKind::DensestCut,
            "sparsest-cut" => ProblemKind::SparsestCut,
            "kmeans" => {
                let k = k.ok_or_else(|| Error::Parse("kmeans requires \"k\"".into()))?;
                if k < 2 {
                    return Err(Error::Validation(format!("kmeans needs k >= 2, got {k}")));
                }
                ProblemKind::KMeans(k)
            }
            "sq-euclidean-maxcut" => ProblemKind::SqEuclideanMaxCut,
            "euclidean-maxcut" => ProblemKind::EuclideanMaxCut,
            other => return Err(Error::Parse(format!("unknown problem tag {other:?}"))),
        })
    }
}

/// A weighted NAE clause over 2 or 3 distinct positive variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaeClause {
    pub lits: Vec<usize>,
    pub weight: Int,
}

impl NaeClause {
    pub fn new(lits: Vec<usize>, weight: Int) -> Result<Self> {
        if lits.len() < 2 || lits.len() > 3 {
            return Err(Error::Validation(format!("clause size must be 2 or 3, got {}", lits.len())));
        }
        for i in 0..lits.len() {
            for j in i + 1..lits.len() {
                if lits[i] == lits[j] {
                    return Err(Error::Validation(format!("repeated literal {} in clause", lits[i])));
                }
            }
        }
        Ok(NaeClause { lits, weight })
    }

    /// NAE satisfaction: literals neither all true nor all false.
    pub fn satisfied(&self, truth: &[bool]) -> bool {
        let first = truth[self.lits[0]];
        self.lits.iter().any(|&v| truth[v] != first)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NaeFormula {
    pub num_vars: usize,
    pub clauses: Vec<NaeClause>,
}

impl NaeFormula {
    pub fn new(num_vars: usize, clauses: Vec<NaeClause>) -> Result<Self> {
        for c in &clauses {
            if let Some(&bad) = c.lits.iter().find(|&&v| v >= num_vars) {
                return Err(Error::Validation(format!("literal {bad} out of range for {num_vars} variables")));
            }
        }
        Ok(NaeFormula { num_vars, clauses })
    }

    pub fn cost(&self, truth: &[bool]) -> Int {
        let mut total = Int::zero();
        for c in &self.clauses {
            if c.satisfied(truth) {
                total += &c.weight;
            }
        }
        total
    }

    /// Pair clauses summed by unordered pair. Used by the reductions that
    /// merge duplicates; three-literal clauses are rejected.
    pub fn merged_pairs(&self) -> Result<BTreeMap<(usize, usize), Int>> {
        let mut map: BTreeMap<(usize, usize), Int> = BTreeMap::new();
        for c in &self.clauses {
            if c.lits.len() != 2 {
                return Err(Error::Validation("merged_pairs requires all clauses of size 2".into()));
            }
            let (a, b) = (c.lits[0].min(c.lits[1]), c.lits[0].max(c.lits[1]));
            *map.entry((a, b)).or_insert_with(Int::zero) += &c.weight;
        }
        Ok(map)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Assignment {
    truth: Vec<bool>,
}

impl Assignment {
    pub fn new(truth: Vec<bool>) -> Self {
        Assignment { truth }
    }

    pub fn from_mask(n: usize, mask: u64) -> Self {
        Assignment { truth: (0..n).map(|v| mask >> v & 1 == 1).collect() }
    }

    pub fn len(&self) -> usize {
        self.truth.len()
    }

    pub fn is_empty(&self) -> bool {
        self.truth.is_empty()
    }

    pub fn truth(&self) -> &[bool] {
        &self.truth
    }

    pub fn value(&self, v: usize) -> bool {
        self.truth[v]
    }

    pub fn count_true(&self) -> usize {
        self.truth.iter().filter(|&&t| t).count()
    }

    pub fn imbalance(&self) -> usize {
        let t = self.count_true();
        t.abs_diff(self.truth.len() - t)
    }

    pub fn flip(&self, v: usize) -> Result<Assignment> {
        if v >= self.truth.len() {
            return Err(Error::Dimension(format!("flip of variable {v} out of range")));
        }
        let mut truth = self.truth.clone();
        truth[v] = !truth[v];
        Ok(Assignment { truth })
    }
}

/// Graph plus optional exact coordinate realization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclideanInstance {
    pub graph: WeightedGraph,
    pub witness: Option<PointMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceBody {
    Graph(WeightedGraph),
    Formula(NaeFormula),
    Euclidean(EuclideanInstance),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub kind: ProblemKind,
    pub body: InstanceBody,
}

impl Instance {
    pub fn graph(kind: ProblemKind, graph: WeightedGraph) -> Result<Instance> {
        if !kind.is_graph() {
            return Err(Error::Validation(format!("{} is not a plain graph kind", kind.tag())));
        }
        Ok(Instance { kind, body: InstanceBody::Graph(graph) })
    }

    pub fn formula(kind: ProblemKind, formula: NaeFormula) -> Result<Instance> {
        if !kind.is_formula() {
            return Err(Error::Validation(format!("{} is not a formula kind", kind.tag())));
        }
        Ok(Instance { kind, body: InstanceBody::Formula(formula) })
    }

    pub fn euclidean(kind: ProblemKind, graph: WeightedGraph, witness: Option<PointMatrix>) -> Result<Instance> {
        if !kind.is_euclidean() {
            return Err(Error::Validation(format!("{} is not a point kind", kind.tag())));
        }
        Ok(Instance { kind, body: InstanceBody::Euclidean(EuclideanInstance { graph, witness }) })
    }

    /// Number of vertices, variables, or points.
    pub fn size(&self) -> usize {
        match &self.body {
            InstanceBody::Graph(g) => g.num_vertices(),
            InstanceBody::Formula(f) => f.num_vars,
            InstanceBody::Euclidean(e) => e.graph.num_vertices(),
        }
    }

    pub fn as_graph(&self) -> Result<&WeightedGraph> {
        match &self.body {
            InstanceBody::Graph(g) => Ok(g),
            InstanceBody::Euclidean(e) => Ok(&e.graph),
            InstanceBody::Formula(_) => Err(Error::Validation("instance is a formula, not a graph".into())),
        }
    }

    pub fn as_formula(&self) -> Result<&NaeFormula> {
        match &self.body {
            InstanceBody::Formula(f) => Ok(f),
            _ => Err(Error::Validation("instance is not a formula".into())),
        }
    }

    pub fn as_euclidean(&self) -> Result<&EuclideanInstance> {
        match &self.body {
            InstanceBody::Euclidean(e) => Ok(e),
            _ => Err(Error::Validation("instance carries no point data".into())),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Solution {
    Cut(Bipartition),
    Truth(Assignment),
    Clusters(Clustering),
}

impl Solution {
    pub fn len(&self) -> usize {
        match self {
            Solution::Cut(p) => p.len(),
            Solution::Truth(a) => a.len(),
            Solution::Clusters(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn as_cut(&self) -> Result<&Bipartition> {
        match self {
            Solution::Cut(p) => Ok(p),
            _ => Err(Error::Dimension("expected a bipartition solution".into())),
        }
    }

    pub fn as_truth(&self) -> Result<&Assignment> {
        match self {
            Solution::Truth(a) => Ok(a),
            _ => Err(Error::Dimension("expected a truth assignment".into())),
        }
    }

    pub fn as_clusters(&self) -> Result<&Clustering> {
        match self {
            Solution::Clusters(c) => Ok(c),
            _ => Err(Error::Dimension("expected a clustering".into())),
        }
    }

    /// Part index of an element: side/truth as 0 or 1, or the cluster id.
    pub fn part(&self, element: usize) -> usize {
        match self {
            Solution::Cut(p) => usize::from(p.side(element)),
            Solution::Truth(a) => usize::from(a.value(element)),
            Solution::Clusters(c) => c.cluster(element),
        }
    }
}

/// A Flip move: put `element` into part `target` (side/truth 0 or 1, or a
/// cluster id).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Move {
    pub element: usize,
    pub target: usize,
}

/// Evaluation context for one instance. Precomputes adjacency and clause
/// incidence so repeated delta queries stay cheap inside enumeration loops.
pub struct Evaluator<'a> {
    instance: &'a Instance,
    adjacency: Vec<Vec<(usize, Int)>>,
    incidence: Vec<Vec<usize>>,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance) -> Result<Evaluator<'a>> {
        let (adjacency, incidence) = match &instance.body {
            InstanceBody::Graph(g) => (g.adjacency(), Vec::new()),
            InstanceBody::Euclidean(e) => (e.graph.adjacency(), Vec::new()),
            InstanceBody::Formula(f) => {
                let mut inc = vec![Vec::new(); f.num_vars];
                for (i, c) in f.clauses.iter().enumerate() {
                    for &v in &c.lits {
                        inc[v].push(i);
                    }
                }
                (Vec::new(), inc)
            }
        };
        Ok(Evaluator { instance, adjacency, incidence })
    }

    pub fn instance(&self) -> &Instance {
        self.instance
    }

    pub fn kind(&self) -> ProblemKind {
        self.instance.kind
    }

    fn check_shape(&self, s: &Solution) -> Result<()> {
        if s.len() != self.instance.size() {
            return Err(Error::Dimension(format!(
                "solution of length {} against instance of size {}",
                s.len(),
                self.instance.size()
            )));
        }
        let ok = match (self.instance.kind, s) {
            (k, Solution::Cut(_)) if !k.is_formula() && !matches!(k, ProblemKind::KMeans(_)) => true,
            (k, Solution::Truth(_)) if k.is_formula() => true,
            (ProblemKind::KMeans(k), Solution::Clusters(c)) => {
                if c.k() != k {
                    return Err(Error::Dimension(format!(
                        "clustering with k = {} against KMeans({k})",
                        c.k()
                    )));
                }
                true
            }
            _ => false,
        };
        if !ok {
            return Err(Error::Dimension(format!(
                "solution type does not match problem kind {}",
                self.instance.kind.tag()
            )));
        }
        Ok(())
    }

    pub fn is_feasible(&self, s: &Solution) -> Result<bool> {
        self.check_shape(s)?;
        let kind = self.instance.kind;
        if kind.balance_constrained() {
            let imbalance = match s {
                Solution::Cut(p) => p.imbalance(),
                Solution::Truth(a) => a.imbalance(),
                Solution::Clusters(_) => unreachable!(),
            };
            return Ok(imbalance == 1);
        }
        if kind.forbids_empty_side() {
            let p = s.as_cut()?;
            return Ok(p.count_x() >= 1 && p.count_y() >= 1);
        }
        Ok(true)
    }

    pub fn cost(&self, s: &Solution) -> Result<Rat> {
        self.check_shape(s)?;
        match self.instance.kind {
            ProblemKind::DensestCut | ProblemKind::SparsestCut => {
                let p = s.as_cut()?;
                let (x, y) = (p.count_x(), p.count_y());
                if x == 0 || y == 0 {
                    return Err(Error::UndefinedObjective(
                        "cut density with an empty side".into(),
                    ));
                }
                let w = cut_edge_weight(self.instance.as_graph()?, p)?;
                Ok(Rat::new(w, Int::from(x * y)))
            }
            ProblemKind::KMeans(_) => Ok(self.kmeans_cost(s.as_clusters()?)),
            k if k.is_formula() => {
                Ok(rat_int(&self.instance.as_formula()?.cost(s.as_truth()?.truth())))
            }
            _ => {
                let w = cut_edge_weight(self.instance.as_graph()?, s.as_cut()?)?;
                Ok(rat_int(&w))
            }
        }
    }

    fn kmeans_cost(&self, c: &Clustering) -> Rat {
        let g = self.instance.as_graph().expect("kmeans carries a graph");
        let mut sums = vec![Int::zero(); c.k()];
        for (u, v, w) in g.edges() {
            if c.cluster(u) == c.cluster(v) {
                sums[c.cluster(u)] += w;
            }
        }
        let sizes = c.cluster_sizes();
        let mut total = Rat::zero();
        for (i, s) in sums.into_iter().enumerate() {
            if sizes[i] > 0 {
                total += Rat::new(s, Int::from(sizes[i]));
            }
        }
        total
    }

    /// All feasible moves from s in canonical scan order: element ascending,
    /// then target ascending.
    pub fn moves(&self, s: &Solution) -> Result<Vec<Move>> {
        self.check_shape(s)?;
        let kind = self.instance.kind;
        let n = s.len();
        let mut out = Vec::new();
        match s {
            Solution::Clusters(c) => {
                for p in 0..n {
                    for t in 0..c.k() {
                        if t != c.cluster(p) {
                            out.push(Move { element: p, target: t });
                        }
                    }
                }
            }
            _ => {
                let larger = {
                    // the part (0 or 1) with more elements, for balance kinds
                    let ones = (0..n).filter(|&v| s.part(v) == 1).count();
                    usize::from(ones * 2 > n)
                };
                for v in 0..n {
                    let cur = s.part(v);
                    if kind.balance_constrained() && cur != larger {
                        continue;
                    }
                    if kind.forbids_empty_side() {
                        let side_size = (0..n).filter(|&u| s.part(u) == cur).count();
                        if side_size <= 1 {
                            continue;
                        }
                    }
                    out.push(Move { element: v, target: 1 - cur });
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, s: &Solution, m: Move) -> Result<Solution> {
        self.check_shape(s)?;
        Ok(match s {
            Solution::Cut(p) => Solution::Cut(p.flip(m.element)?),
            Solution::Truth(a) => Solution::Truth(a.flip(m.element)?),
            Solution::Clusters(c) => Solution::Clusters(c.reassign(m.element, m.target)?),
        })
    }

    /// cost(after) − cost(before), computed incrementally.
    pub fn delta(&self, s: &Solution, m: Move) -> Result<Rat> {
        self.check_shape(s)?;
        if m.element >= s.len() {
            return Err(Error::Dimension(format!("move element {} out of range", m.element)));
        }
        let kind = self.instance.kind;
        match s {
            Solution::Clusters(c) => self.kmeans_delta(c, m),
            _ => {
                if m.target > 1 || m.target == s.part(m.element) {
                    return Err(Error::InfeasibleMove(format!(
                        "target part {} invalid for element {}",
                        m.target, m.element
                    )));
                }
                if kind.balance_constrained() {
                    let after_imbalance = {
                        let n = s.len();
                        let ones = (0..n).filter(|&v| s.part(v) == 1).count();
                        let ones_after = if m.target == 1 { ones + 1 } else { ones - 1 };
                        ones_after.abs_diff(n - ones_after)
                    };
                    if after_imbalance != 1 {
                        return Err(Error::InfeasibleMove(
                            "flip would unbalance the bisection".into(),
                        ));
                    }
                }
                match kind {
                    k if k.is_formula() => self.nae_delta(s.as_truth()?, m.element),
                    ProblemKind::DensestCut | ProblemKind::SparsestCut => {
                        self.density_delta(s.as_cut()?, m.element)
                    }
                    _ => Ok(rat_int(&self.cut_delta(s, m.element))),
                }
            }
        }
    }

    /// Change of cut weight when flipping v: edges to v's own side become
    /// cut, edges across stop being cut.
    fn cut_delta(&self, s: &Solution, v: usize) -> Int {
        let own = s.part(v);
        let mut d = Int::zero();
        for (u, w) in &self.adjacency[v] {
            if s.part(*u) == own {
                d += w;
            } else {
                d -= w;
            }
        }
        d
    }

    fn nae_delta(&self, a: &Assignment, v: usize) -> Result<Rat> {
        let f = self.instance.as_formula()?;
        let flipped = a.flip(v)?;
        let mut d = Int::zero();
        for &ci in &self.incidence[v] {
            let c = &f.clauses[ci];
            let before = c.satisfied(a.truth());
            let after = c.satisfied(flipped.truth());
            if before != after {
                if after {
                    d += &c.weight;
                } else {
                    d -= &c.weight;
                }
            }
        }
        Ok(rat_int(&d))
    }

    fn density_delta(&self, p: &Bipartition, v: usize) -> Result<Rat> {
        let (x, y) = (p.count_x(), p.count_y());
        let (own, _) = if p.side(v) { (x, y) } else { (y, x) };
        if own <= 1 {
            return Err(Error::InfeasibleMove("flip would empty a side".into()));
        }
        let g = self.instance.as_graph()?;
        let num = cut_edge_weight(g, p)?;
        let dnum = self.cut_delta(&Solution::Cut(p.clone()), v);
        let (nx, ny) = if p.side(v) { (x - 1, y + 1) } else { (x + 1, y - 1) };
        let before = Rat::new(num.clone(), Int::from(x * y));
        let after = Rat::new(num + dnum, Int::from(nx * ny));
        Ok(after - before)
    }

    fn kmeans_delta(&self, c: &Clustering, m: Move) -> Result<Rat> {
        let (p, to) = (m.element, m.target);
        let from = c.cluster(p);
        if to >= c.k() {
            return Err(Error::InfeasibleMove(format!("cluster {to} out of range")));
        }
        if to == from {
            return Err(Error::InfeasibleMove("point already in target cluster".into()));
        }
        let g = self.instance.as_graph()?;
        let sizes = c.cluster_sizes();
        let mut s_from = Int::zero();
        let mut s_to = Int::zero();
        for (u, v, w) in g.edges() {
            let (cu, cv) = (c.cluster(u), c.cluster(v));
            if cu == cv {
                if cu == from {
                    s_from += w;
                } else if cu == to {
                    s_to += w;
                }
            }
        }
        let mut w_p_from = Int::zero();
        let mut w_p_to = Int::zero();
        for (u, w) in &self.adjacency[p] {
            if c.cluster(*u) == from {
                w_p_from += w;
            } else if c.cluster(*u) == to {
                w_p_to += w;
            }
        }
        let contrib = |sum: Int, size: usize| {
            if size == 0 {
                Rat::zero()
            } else {
                Rat::new(sum, Int::from(size))
            }
        };
        let before = contrib(s_from.clone(), sizes[from]) + contrib(s_to.clone(), sizes[to]);
        let after = contrib(s_from - w_p_from, sizes[from] - 1) + contrib(s_to + w_p_to, sizes[to] + 1);
        Ok(after - before)
    }

    /// Strict improvement test in the problem's orientation.
    pub fn improves(&self, delta: &Rat) -> bool {
        match self.instance.kind.orientation() {
            Orientation::Maximize => delta.is_positive(),
            Orientation::Minimize => delta.is_negative(),
        }
    }

    pub fn is_local_optimum(&self, s: &Solution) -> Result<bool> {
        for m in self.moves(s)? {
            if self.improves(&self.delta(s, m)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn is_feasible(instance: &Instance, s: &Solution) -> Result<bool> {
    Evaluator::new(instance)?.is_feasible(s)
}

pub fn cost(instance: &Instance, s: &Solution) -> Result<Rat> {
    Evaluator::new(instance)?.cost(s)
}

pub fn flip_delta(instance: &Instance, s: &Solution, element: usize, target: usize) -> Result<Rat> {
    Evaluator::new(instance)?.delta(s, Move { element, target })
}

pub fn neighbors(instance: &Instance, s: &Solution) -> Result<Vec<Solution>> {
    let ev = Evaluator::new(instance)?;
    if !ev.is_feasible(s)? {
        return Err(Error::Validation("neighbors of an infeasible solution".into()));
    }
    ev.moves(s)?.into_iter().map(|m| ev.apply(s, m)).collect()
}

/// Structural checks; returns human-readable violations rather than failing.
pub fn validate_instance(instance: &Instance) -> Vec<String> {
    let mut out = Vec::new();
    let kind = instance.kind;
    match (&instance.body, kind) {
        (InstanceBody::Graph(_), k) if !k.is_graph() => {
            out.push(format!("{} instance carries the wrong body type", k.tag()))
        }
        (InstanceBody::Formula(_), k) if !k.is_formula() => {
            out.push(format!("{} instance carries the wrong body type", k.tag()))
        }
        (InstanceBody::Euclidean(_), k) if !k.is_euclidean() => {
            out.push(format!("{} instance carries the wrong body type", k.tag()))
        }
        _ => {}
    }
    if matches!(kind, ProblemKind::MaxCutDeg5 | ProblemKind::DistinctMaxCutDeg5) {
        if let Ok(g) = instance.as_graph() {
            for v in 0..g.num_vertices() {
                let d = g.degree(v);
                if d > 5 {
                    out.push(format!("vertex {v} has degree {d} > 5"));
                }
            }
            if kind == ProblemKind::DistinctMaxCutDeg5 && out.is_empty() {
                if let Some((v, _)) = zero_flip_delta(g) {
                    out.push(format!("vertex {v} admits a zero flip delta; costs are not distinct"));
                }
            }
        }
    }
    if kind.balance_constrained() && instance.size() % 2 == 0 {
        out.push(format!("{} requires an odd element count, got {}", kind.tag(), instance.size()));
    }
    if kind.is_formula() {
        if let Ok(f) = instance.as_formula() {
            let want_two = kind == ProblemKind::OddHalfPosNae2Sat;
            for (i, c) in f.clauses.iter().enumerate() {
                if want_two && c.lits.len() != 2 {
                    out.push(format!("clause {i} has size {}, expected 2", c.lits.len()));
                }
            }
        }
    }
    if let InstanceBody::Euclidean(e) = &instance.body {
        if let ProblemKind::KMeans(k) = kind {
            if k < 2 {
                out.push(format!("kmeans needs k >= 2, got {k}"));
            }
        }
        match &e.witness {
            Some(m) => {
                if m.num_points() != e.graph.num_vertices() {
                    out.push(format!(
                        "witness has {} points for {} vertices",
                        m.num_points(),
                        e.graph.num_vertices()
                    ));
                } else {
                    let n = e.graph.num_vertices();
                    for u in 0..n {
                        for v in u + 1..n {
                            let d2 = match m.squared_distance(u, v) {
                                Ok(d) => d,
                                Err(err) => {
                                    out.push(format!("witness distance ({u},{v}): {err}"));
                                    continue;
                                }
                            };
                            let w = e.graph.weight(u, v);
                            let ok = match kind {
                                ProblemKind::EuclideanMaxCut => rat_int(&(&w * &w)) == d2,
                                _ => rat_int(&w) == d2,
                            };
                            if !ok {
                                out.push(format!(
                                    "witness distance mismatch at pair ({u},{v}): weight {w}, squared distance {d2}"
                                ));
                            }
                        }
                    }
                }
            }
            None => {
                if kind == ProblemKind::EuclideanMaxCut {
                    out.push("no witness certifies that the distances are realizable".into());
                }
            }
        }
    }
    out
}

/// First (vertex, neighbor-subset) pair whose flip delta is zero, if any.
/// Enumerates every placement of each vertex's neighborhood, which covers
/// every flip in every cut. Vertices need degree <= 5 for this to be cheap.
pub fn zero_flip_delta(g: &WeightedGraph) -> Option<(usize, u32)> {
    for v in 0..g.num_vertices() {
        let nbrs = g.neighbors(v);
        if nbrs.len() > 8 {
            continue;
        }
        for q in 0..1u32 << nbrs.len() {
            let mut d = Int::zero();
            for (i, (_, w)) in nbrs.iter().enumerate() {
                if q >> i & 1 == 1 {
                    d += w;
                } else {
                    d -= w;
                }
            }
            if d.is_zero() {
                return Some((v, q));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat, SqrtCoord};

    fn k3_ones() -> Instance {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(1, 2, int(1)).unwrap();
        g.add_edge(0, 2, int(1)).unwrap();
        Instance::graph(ProblemKind::MaxCut, g).unwrap()
    }

    fn cut(bits: &[bool]) -> Solution {
        Solution::Cut(Bipartition::new(bits.to_vec()))
    }

    #[test]
    fn bisection_feasibility() {
        let mut g = WeightedGraph::new(5);
        g.add_edge(0, 1, int(1)).unwrap();
        let inst = Instance::graph(ProblemKind::OddMaxBisection, g).unwrap();
        assert!(is_feasible(&inst, &cut(&[true, true, true, false, false])).unwrap());
        assert!(!is_feasible(&inst, &cut(&[true, true, true, true, false])).unwrap());
    }

    #[test]
    fn densest_cost_and_empty_side() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(1, 2, int(1)).unwrap();
        g.add_edge(0, 2, int(1)).unwrap();
        let inst = Instance::graph(ProblemKind::DensestCut, g).unwrap();
        assert_eq!(cost(&inst, &cut(&[true, false, false])).unwrap(), rat(1, 1));
        assert!(!is_feasible(&inst, &cut(&[true, true, true])).unwrap());
        assert!(matches!(
            cost(&inst, &cut(&[true, true, true])),
            Err(Error::UndefinedObjective(_))
        ));
    }

    #[test]
    fn kmeans_cost_graph_vs_points() {
        // single edge of weight 4; both endpoints in one cluster -> 4/2 = 2.
        // Point cross-check: 0 and 2 on a line, centroid 1, cost 1 + 1 = 2.
        let mut g = WeightedGraph::new(2);
        g.add_edge(0, 1, int(4)).unwrap();
        let witness = PointMatrix::new(vec![
            vec![SqrtCoord::zero()],
            vec![SqrtCoord::from_int(&int(2))],
        ])
        .unwrap();
        let inst = Instance::euclidean(ProblemKind::KMeans(2), g, Some(witness)).unwrap();
        assert!(validate_instance(&inst).is_empty());
        let together = Solution::Clusters(Clustering::new(vec![0, 0], 2).unwrap());
        assert_eq!(cost(&inst, &together).unwrap(), rat(2, 1));
        let split = Solution::Clusters(Clustering::new(vec![0, 1], 2).unwrap());
        assert_eq!(cost(&inst, &split).unwrap(), rat(0, 1));
    }

    #[test]
    fn nae_cost() {
        let f = NaeFormula::new(2, vec![NaeClause::new(vec![0, 1], int(5)).unwrap()]).unwrap();
        let inst = Instance::formula(ProblemKind::OddHalfPosNae2Sat, f).unwrap();
        let mixed = Solution::Truth(Assignment::new(vec![true, false]));
        let same = Solution::Truth(Assignment::new(vec![true, true]));
        assert_eq!(cost(&inst, &mixed).unwrap(), rat(5, 1));
        assert_eq!(cost(&inst, &same).unwrap(), rat(0, 1));
    }

    #[test]
    fn flip_delta_k3() {
        let inst = k3_ones();
        let s = cut(&[true, false, false]);
        assert_eq!(flip_delta(&inst, &s, 1, 1).unwrap(), rat(0, 1));
        let all = cut(&[true, true, true]);
        // vertex with incident weights {1,1}: gains both
        assert_eq!(flip_delta(&inst, &all, 0, 0).unwrap(), rat(2, 1));
    }

    #[test]
    fn flip_delta_star() {
        let mut g = WeightedGraph::new(4);
        g.add_edge(0, 1, int(1)).unwrap();
        g.add_edge(0, 2, int(8)).unwrap();
        g.add_edge(0, 3, int(3)).unwrap();
        let inst = Instance::graph(ProblemKind::MaxCut, g).unwrap();
        let all_own = cut(&[true, true, true, true]);
        assert_eq!(flip_delta(&inst, &all_own, 0, 0).unwrap(), rat(12, 1));
    }

    #[test]
    fn neighbor_counts() {
        let inst = k3_ones();
        assert_eq!(neighbors(&inst, &cut(&[true, false, false])).unwrap().len(), 3);

        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(1)).unwrap();
        let bis = Instance::graph(ProblemKind::OddMaxBisection, g).unwrap();
        assert_eq!(neighbors(&bis, &cut(&[true, true, false])).unwrap().len(), 2);

        let mut g4 = WeightedGraph::new(4);
        g4.add_edge(0, 1, int(1)).unwrap();
        let km = Instance::euclidean(ProblemKind::KMeans(3), g4, None).unwrap();
        let c = Solution::Clusters(Clustering::new(vec![0, 1, 2, 0], 3).unwrap());
        assert_eq!(neighbors(&km, &c).unwrap().len(), 8);
    }

    #[test]
    fn validate_degree_and_parity() {
        let mut k7 = WeightedGraph::new(7);
        for u in 0..7 {
            for v in u + 1..7 {
                k7.add_edge(u, v, int(1)).unwrap();
            }
        }
        let inst = Instance::graph(ProblemKind::MaxCutDeg5, k7).unwrap();
        assert!(!validate_instance(&inst).is_empty());

        let mut k6 = WeightedGraph::new(6);
        for u in 0..6 {
            for v in u + 1..6 {
                k6.add_edge(u, v, int(1)).unwrap();
            }
        }
        let inst6 = Instance::graph(ProblemKind::MaxCutDeg5, k6).unwrap();
        assert!(validate_instance(&inst6).is_empty());

        let bis = Instance::graph(ProblemKind::OddMaxBisection, WeightedGraph::new(4)).unwrap();
        assert_eq!(validate_instance(&bis).len(), 1);
    }

    #[test]
    fn witness_mismatch_flagged() {
        let mut g = WeightedGraph::new(2);
        g.add_edge(0, 1, int(3)).unwrap();
        let witness = PointMatrix::new(vec![
            vec![SqrtCoord::zero()],
            vec![SqrtCoord::from_int(&int(1))],
        ])
        .unwrap();
        let inst = Instance::euclidean(ProblemKind::SqEuclideanMaxCut, g, Some(witness)).unwrap();
        assert!(!validate_instance(&inst).is_empty());
    }

    #[test]
    fn infeasible_moves_rejected() {
        let mut g = WeightedGraph::new(3);
        g.add_edge(0, 1, int(2)).unwrap();
        let bis = Instance::graph(ProblemKind::OddMinBisection, g).unwrap();
        let s = cut(&[true, true, false]);
        // flipping the lone vertex of the smaller side would give a 3/0 split
        assert!(matches!(flip_delta(&bis, &s, 2, 1), Err(Error::InfeasibleMove(_))));
    }
}
