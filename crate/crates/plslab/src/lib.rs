//! plslab: an exact-arithmetic laboratory for Flip-neighborhood local search.
//!
//! The crate implements eight local search problems (Max Cut and its
//! degree-bounded and distinct-cost variants, weighted positive NAE SAT,
//! odd bisections, Densest/Sparsest Cut, graph k-Means, and (squared)
//! Euclidean Max Cut), the standard local-search algorithm over the Flip
//! neighborhood, exhaustive transition graphs for small instances, and a
//! chain of eleven cost-preserving instance reductions with solution-mapping
//! certificates. Brute-force oracles verify every construction.
//!
//! ```
//! use plslab::exact::int;
//! use plslab::graph::WeightedGraph;
//! use plslab::problems::{Instance, ProblemKind};
//! use plslab::engine::{standard_solution, is_local_optimum, PivotRule};
//!
//! let mut g = WeightedGraph::new(3);
//! g.add_edge(0, 1, int(1)).unwrap();
//! g.add_edge(1, 2, int(2)).unwrap();
//! g.add_edge(0, 2, int(3)).unwrap();
//! let inst = Instance::graph(ProblemKind::MaxCut, g).unwrap();
//! let s = standard_solution(&inst, PivotRule::FirstImprovement).unwrap();
//! assert!(is_local_optimum(&inst, &s).unwrap());
//! ```

pub mod engine;
pub mod error;
pub mod exact;
pub mod graph;
pub mod io;
pub mod problems;
pub mod reductions;
pub mod serdes;
pub mod verify;

pub use error::{Error, Result};
