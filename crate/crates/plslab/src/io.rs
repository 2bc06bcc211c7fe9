//! On-disk formats. All numbers travel as decimal strings so 10^4-digit
//! weights survive round trips bit-exactly; serialization is canonical
//! (fixed field order, pretty two-space indent, trailing newline).

use crate::engine::{SearchTrace, TransitionGraph};
use crate::error::{Error, Result};
use crate::exact::{format_rat, parse_int, parse_rat, Int, PointMatrix, SqrtCoord};
use crate::graph::{Bipartition, Clustering, WeightedGraph};
use crate::problems::{Assignment, Instance, NaeClause, NaeFormula, ProblemKind, Solution};
use num::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseRecord {
    pub lits: Vec<usize>,
    pub w: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoordRecord {
    pub s: i8,
    pub num: String,
    pub den: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub rows: Vec<Vec<CoordRecord>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceFile {
    pub problem: String,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<(usize, usize, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub explicit_zero_edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub clauses: Vec<ClauseRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFile {
    pub problem: String,
    pub assignment: Vec<usize>,
}

fn graph_records(g: &WeightedGraph) -> (Vec<(usize, usize, String)>, Vec<(usize, usize)>) {
    let mut edges = Vec::new();
    let mut zeros = Vec::new();
    for (u, v, w) in g.edges() {
        if w.is_zero() {
            zeros.push((u, v));
        } else {
            edges.push((u, v, w.to_string()));
        }
    }
    (edges, zeros)
}

fn witness_record(m: &PointMatrix) -> WitnessRecord {
    WitnessRecord {
        rows: m
            .rows()
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| CoordRecord {
                        s: c.sign(),
                        num: c.radicand().numer().to_string(),
                        den: c.radicand().denom().to_string(),
                    })
                    .collect()
            })
            .collect(),
    }
}

impl InstanceFile {
    pub fn from_instance(inst: &Instance) -> InstanceFile {
        let (k, problem) = match inst.kind {
            ProblemKind::KMeans(k) => (Some(k), inst.kind.tag()),
            _ => (None, inst.kind.tag()),
        };
        let mut file = InstanceFile {
            problem,
            n: inst.size(),
            edges: Vec::new(),
            explicit_zero_edges: Vec::new(),
            clauses: Vec::new(),
            witness: None,
            k,
        };
        if let Ok(f) = inst.as_formula() {
            file.clauses = f
                .clauses
                .iter()
                .map(|c| ClauseRecord { lits: c.lits.clone(), w: c.weight.to_string() })
                .collect();
        } else if let Ok(e) = inst.as_euclidean() {
            let (edges, zeros) = graph_records(&e.graph);
            file.edges = edges;
            file.explicit_zero_edges = zeros;
            file.witness = e.witness.as_ref().map(witness_record);
        } else if let Ok(g) = inst.as_graph() {
            let (edges, zeros) = graph_records(g);
            file.edges = edges;
            file.explicit_zero_edges = zeros;
        }
        file
    }

    pub fn to_instance(&self) -> Result<Instance> {
        let kind = ProblemKind::from_tag(&self.problem, self.k)?;
        if kind.is_formula() {
            let clauses = self
                .clauses
                .iter()
                .map(|c| NaeClause::new(c.lits.clone(), parse_int(&c.w)?))
                .collect::<Result<Vec<_>>>()?;
            return Instance::formula(kind, NaeFormula::new(self.n, clauses)?);
        }
        let mut g = WeightedGraph::new(self.n);
        for (u, v, w) in &self.edges {
            g.add_edge(*u, *v, parse_int(w)?)?;
        }
        for &(u, v) in &self.explicit_zero_edges {
            g.add_edge(u, v, Int::zero())?;
        }
        if kind.is_euclidean() {
            let witness = self
                .witness
                .as_ref()
                .map(|w| {
                    let rows = w
                        .rows
                        .iter()
                        .map(|row| {
                            row.iter()
                                .map(|c| {
                                    let rad = parse_rat(&format!("{}/{}", c.num, c.den))?;
                                    SqrtCoord::new(c.s, rad)
                                })
                                .collect::<Result<Vec<_>>>()
                        })
                        .collect::<Result<Vec<_>>>()?;
                    PointMatrix::new(rows)
                })
                .transpose()?;
            Instance::euclidean(kind, g, witness)
        } else {
            Instance::graph(kind, g)
        }
    }
}

impl SolutionFile {
    pub fn from_solution(kind: ProblemKind, s: &Solution) -> SolutionFile {
        SolutionFile {
            problem: kind.tag(),
            assignment: (0..s.len()).map(|e| s.part(e)).collect(),
        }
    }

    pub fn to_solution(&self, kind: ProblemKind) -> Result<Solution> {
        if kind.tag() != self.problem {
            return Err(Error::Validation(format!(
                "solution for problem {} applied to {}",
                self.problem,
                kind.tag()
            )));
        }
        match kind {
            ProblemKind::KMeans(k) => {
                Ok(Solution::Clusters(Clustering::new(self.assignment.clone(), k)?))
            }
            k => {
                let bits = self
                    .assignment
                    .iter()
                    .map(|&a| match a {
                        0 => Ok(false),
                        1 => Ok(true),
                        other => Err(Error::Validation(format!("assignment entry {other} not 0/1"))),
                    })
                    .collect::<Result<Vec<bool>>>()?;
                if k.is_formula() {
                    Ok(Solution::Truth(Assignment::new(bits)))
                } else {
                    Ok(Solution::Cut(Bipartition::new(bits)))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceFile {
    pub start: Vec<usize>,
    /// (element, target part, exact delta)
    pub moves: Vec<(usize, usize, String)>,
    pub final_assignment: Vec<usize>,
    pub iterations: usize,
    pub truncated: bool,
}

impl TraceFile {
    pub fn from_trace(t: &SearchTrace) -> TraceFile {
        TraceFile {
            start: (0..t.start.len()).map(|e| t.start.part(e)).collect(),
            moves: t.moves.iter().map(|(e, p, d)| (*e, *p, format_rat(d))).collect(),
            final_assignment: (0..t.final_solution.len()).map(|e| t.final_solution.part(e)).collect(),
            iterations: t.iterations,
            truncated: t.truncated,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionNodeRecord {
    pub assignment: Vec<usize>,
    pub cost: String,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionArcRecord {
    pub from: usize,
    pub to: usize,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransitionGraphFile {
    pub nodes: Vec<TransitionNodeRecord>,
    pub arcs: Vec<TransitionArcRecord>,
    pub sinks: Vec<usize>,
}

impl TransitionGraphFile {
    pub fn from_graph(t: &TransitionGraph) -> TransitionGraphFile {
        let nodes = t
            .nodes
            .iter()
            .zip(&t.costs)
            .zip(&t.heights)
            .map(|((s, c), &h)| TransitionNodeRecord {
                assignment: (0..s.len()).map(|e| s.part(e)).collect(),
                cost: format_rat(c),
                height: h,
            })
            .collect();
        let mut arcs = Vec::new();
        for (from, out) in t.arcs.iter().enumerate() {
            for (to, delta) in out {
                arcs.push(TransitionArcRecord { from, to: *to, delta: format_rat(delta) });
            }
        }
        TransitionGraphFile { nodes, arcs, sinks: t.sinks() }
    }
}

/// DOT rendering of a transition graph: nodes labeled with cost and height,
/// arcs labeled with their deltas, sinks drawn doubled.
pub fn transition_graph_dot(t: &TransitionGraph) -> String {
    let mut out = String::from("digraph transition {\n");
    for (i, (c, h)) in t.costs.iter().zip(&t.heights).enumerate() {
        let shape = if t.arcs[i].is_empty() { "doublecircle" } else { "circle" };
        out.push_str(&format!(
            "  n{i} [label=\"{} h={h}\", shape={shape}];\n",
            format_rat(c)
        ));
    }
    for (from, arcs) in t.arcs.iter().enumerate() {
        for (to, delta) in arcs {
            out.push_str(&format!("  n{from} -> n{to} [label=\"{}\"];\n", format_rat(delta)));
        }
    }
    out.push_str("}\n");
    out
}

/// Canonical serialization: pretty JSON with a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Parse(format!("serialization failed: {e}")))?;
    s.push('\n');
    Ok(s)
}

pub fn from_json<T: for<'de> Deserialize<'de>>(raw: &str) -> Result<T> {
    serde_json::from_str(raw).map_err(|e| Error::Parse(format!("parse failed: {e}")))
}

/// Stable content digest of an instance: sha256 of its canonical file form.
pub fn instance_digest(inst: &Instance) -> Result<String> {
    let json = to_canonical_json(&InstanceFile::from_instance(inst))?;
    let mut hasher = Sha256::new();
    hasher.update(json.as_bytes());
    Ok(format!("{:x}", hasher.finalize()))
}
