//! Geometric reductions: the 2-Means embedding (r7), the k to k+1 lift
//! (r8), and the (squared) Euclidean Max Cut embeddings (r9, r10).

use super::{CertParams, EmbeddingParams, ReductionCert, ReductionId};
use crate::error::{Error, Result};
use crate::exact::{ceil_rat, rat_int, Int, PointMatrix, Rat, SqrtCoord};
use crate::graph::WeightedGraph;
use crate::problems::{Instance, ProblemKind};
use num::{One, Signed, Zero};

fn require_nonnegative(g: &WeightedGraph) -> Result<()> {
    if let Some((u, v, w)) = g.edges().find(|(_, _, w)| w.is_negative()) {
        return Err(Error::Validation(format!("negative weight {w} on edge ({u}, {v})")));
    }
    Ok(())
}

fn rat_to_int(r: &Rat, what: &str) -> Result<Int> {
    if !r.is_integer() {
        return Err(Error::Validation(format!("{what} is not an integer: {r}")));
    }
    Ok(r.to_integer())
}

/// r7: Densest Cut to 2-Means. One coordinate per edge, valued +sqrt(w) at
/// the smaller endpoint and -sqrt(w) at the larger one; the 2-Means
/// instance's weights are the exact pairwise squared distances, and
/// cost(Q,R) = 2 w(E) - n w(Q,R) / (|Q| |R|), so lower clustering cost is
/// exactly higher cut density.
pub fn r7_two_means(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    require_nonnegative(g)?;
    let n = g.num_vertices();
    let adjacency = g.adjacency();
    if let Some(v) = (0..n).find(|&v| adjacency[v].is_empty()) {
        return Err(Error::Validation(format!(
            "vertex {v} has no nonzero-weight edge; the embedding needs none isolated"
        )));
    }
    let edges: Vec<(usize, usize, Int)> = g
        .edges()
        .filter(|(_, _, w)| !w.is_zero())
        .map(|(u, v, w)| (u, v, w.clone()))
        .collect();
    let mut rows = vec![Vec::with_capacity(edges.len()); n];
    for &(u, v, ref w) in &edges {
        let rad = rat_int(w);
        for (x, row) in rows.iter_mut().enumerate() {
            row.push(if x == u {
                SqrtCoord::sqrt(rad.clone())?
            } else if x == v {
                SqrtCoord::neg_sqrt(rad.clone())?
            } else {
                SqrtCoord::zero()
            });
        }
    }
    let witness = PointMatrix::new(rows)?;
    let mut h = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let d2 = witness.squared_distance(u, v)?;
            h.add_edge(u, v, rat_to_int(&d2, "squared distance")?)?;
        }
    }
    let total_weight = g.total_weight();
    let target = Instance::euclidean(ProblemKind::KMeans(2), h, Some(witness))?;
    let cert = ReductionCert {
        id: ReductionId::R7,
        kind_from: source.kind,
        kind_to: ProblemKind::KMeans(2),
        source_size: n,
        target_size: n,
        params: CertParams::TwoMeans { n, total_weight },
    };
    Ok((target, cert))
}

/// r8: k-Means to (k+1)-Means. One extra point z sits at a copy of point 0
/// pushed out along a fresh coordinate by an integer T large enough that no
/// local optimum shares z's cluster; every new squared distance is the old
/// one plus T².
pub fn r8_lift_kmeans(source: &Instance) -> Result<(Instance, ReductionCert)> {
    let e = source.as_euclidean()?;
    let ProblemKind::KMeans(k) = source.kind else {
        return Err(Error::Validation("r8 requires a k-Means source".into()));
    };
    let witness = e
        .witness
        .as_ref()
        .ok_or_else(|| Error::Validation("r8 requires a witness point matrix".into()))?;
    let n = e.graph.num_vertices();
    if k + 1 > n + 1 {
        return Err(Error::Validation(format!("k + 1 = {} exceeds the lifted point count {}", k + 1, n + 1)));
    }
    let mut total = Rat::zero();
    for i in 0..n {
        for j in i + 1..n {
            total += witness.squared_distance(i, j)?;
        }
    }
    let dims = witness.num_columns();
    // T only has to satisfy T^2 >= (3nD)^2 * dims; ceiling of 3nD*dims does,
    // as does 1 when every distance is zero.
    let mut t = ceil_rat(&(Rat::from_integer(Int::from(3 * n as u64 * dims as u64)) * &total));
    if t < Int::one() {
        t = Int::one();
    }
    let t_sq = &t * &t;

    let mut rows: Vec<Vec<SqrtCoord>> = witness.rows().to_vec();
    for row in &mut rows {
        row.push(SqrtCoord::zero());
    }
    let mut z_row = witness.row(0).to_vec();
    z_row.push(SqrtCoord::from_int(&t));
    rows.push(z_row);
    let lifted = PointMatrix::new(rows)?;

    let mut h = WeightedGraph::new(n + 1);
    for (u, v, w) in e.graph.edges() {
        h.add_edge(u, v, w.clone())?;
    }
    h.add_edge(0, n, t_sq.clone())?;
    for v in 1..n {
        h.add_edge(v, n, e.graph.weight(0, v) + &t_sq)?;
    }
    let target = Instance::euclidean(ProblemKind::KMeans(k + 1), h, Some(lifted))?;
    let cert = ReductionCert {
        id: ReductionId::R8,
        kind_from: source.kind,
        kind_to: ProblemKind::KMeans(k + 1),
        source_size: n,
        target_size: n + 1,
        params: CertParams::Lift { added_point: n, offset: t, k },
    };
    Ok((target, cert))
}

pub fn r9_sq_euclid(source: &Instance) -> Result<(Instance, ReductionCert)> {
    r9_embed(source, false)
}

/// Test hook: r9 with signed incidence entries. The signed convention flips
/// the inner products, breaking the cost identity; the verifiers use it as
/// a negative control.
pub fn r9_sq_euclid_signed(source: &Instance) -> Result<(Instance, ReductionCert)> {
    r9_embed(source, true)
}

/// r9: Odd Min Bisection to Squared Euclidean Max Cut. Each vertex gets one
/// coordinate per incident edge valued +sqrt(w/2) (unsigned incidence) plus
/// a private padding coordinate alpha_v lifting its norm to w(E)/2, so that
/// squared distances come out to w(E) - w(uv) and every cut's target value
/// is |X||Y| w(E) - w(X,Y).
fn r9_embed(source: &Instance, signed: bool) -> Result<(Instance, ReductionCert)> {
    let g = source.as_graph()?;
    require_nonnegative(g)?;
    let n = g.num_vertices();
    let w_e = rat_int(&g.total_weight());
    let half = |w: &Int| rat_int(w) / rat_int(&Int::from(2));

    let edges: Vec<(usize, usize, Int)> = g
        .edges()
        .filter(|(_, _, w)| !w.is_zero())
        .map(|(u, v, w)| (u, v, w.clone()))
        .collect();
    let mut rows = vec![Vec::with_capacity(edges.len() + n); n];
    for &(u, v, ref w) in &edges {
        let rad = half(w);
        for (x, row) in rows.iter_mut().enumerate() {
            row.push(if x == u {
                SqrtCoord::sqrt(rad.clone())?
            } else if x == v && signed {
                SqrtCoord::neg_sqrt(rad.clone())?
            } else if x == v {
                SqrtCoord::sqrt(rad.clone())?
            } else {
                SqrtCoord::zero()
            });
        }
    }
    let mut alpha_radicands = Vec::with_capacity(n);
    for v in 0..n {
        let incident: Rat = g.neighbors(v).iter().map(|(_, w)| half(w)).sum();
        let rad = &w_e / rat_int(&Int::from(2)) - incident;
        if rad.is_negative() {
            return Err(Error::Validation(format!("padding radicand for vertex {v} is negative")));
        }
        alpha_radicands.push(rad);
    }
    for v in 0..n {
        for (x, row) in rows.iter_mut().enumerate() {
            row.push(if x == v {
                SqrtCoord::sqrt(alpha_radicands[v].clone())?
            } else {
                SqrtCoord::zero()
            });
        }
    }
    let witness = PointMatrix::new(rows)?;
    let mut h = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let d2 = witness.squared_distance(u, v)?;
            h.add_edge(u, v, rat_to_int(&d2, "squared distance")?)?;
        }
    }
    let target = Instance::euclidean(ProblemKind::SqEuclideanMaxCut, h, Some(witness))?;
    let cert = ReductionCert {
        id: ReductionId::R9,
        kind_from: source.kind,
        kind_to: ProblemKind::SqEuclideanMaxCut,
        source_size: n,
        target_size: n,
        params: CertParams::Embedding(EmbeddingParams {
            squared: true,
            edge_columns: edges.iter().map(|&(u, v, _)| (u, v)).collect(),
            alpha_radicands,
            scale_c: None,
        }),
    };
    Ok((target, cert))
}

/// r10: Odd Min Bisection to Euclidean Max Cut with scale C >= 2. Entries
/// are sqrt(C·w(e)·w(E) - w(e)²/2) at both endpoints plus a padding
/// coordinate, making every pairwise distance the integer C·w(E) - w(uv).
pub fn r10_euclid(source: &Instance) -> Result<(Instance, ReductionCert)> {
    r10_euclid_with_scale(source, Int::from(2))
}

pub fn r10_euclid_with_scale(source: &Instance, c: Int) -> Result<(Instance, ReductionCert)> {
    if c < Int::from(2) {
        return Err(Error::Validation(format!("scale C must be at least 2, got {c}")));
    }
    let g = source.as_graph()?;
    require_nonnegative(g)?;
    let n = g.num_vertices();
    let w_e = g.total_weight();
    let two = rat_int(&Int::from(2));
    // column radicand for edge e: C w(e) w(E) - w(e)^2 / 2
    let col_rad = |w: &Int| rat_int(&(&c * w * &w_e)) - rat_int(&(w * w)) / &two;

    let edges: Vec<(usize, usize, Int)> = g
        .edges()
        .filter(|(_, _, w)| !w.is_zero())
        .map(|(u, v, w)| (u, v, w.clone()))
        .collect();
    let mut rows = vec![Vec::with_capacity(edges.len() + n); n];
    for &(u, v, ref w) in &edges {
        let rad = col_rad(w);
        if rad.is_negative() {
            return Err(Error::Validation(format!("edge radicand negative on ({u}, {v})")));
        }
        for (x, row) in rows.iter_mut().enumerate() {
            row.push(if x == u || x == v {
                SqrtCoord::sqrt(rad.clone())?
            } else {
                SqrtCoord::zero()
            });
        }
    }
    let norm_sq = rat_int(&(&c * &c * &w_e * &w_e)) / &two;
    let mut alpha_radicands = Vec::with_capacity(n);
    for v in 0..n {
        let incident: Rat = g
            .neighbors(v)
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(_, w)| col_rad(w))
            .sum();
        let rad = &norm_sq - incident;
        if rad.is_negative() {
            return Err(Error::Validation(format!("padding radicand for vertex {v} is negative")));
        }
        alpha_radicands.push(rad);
    }
    for v in 0..n {
        for (x, row) in rows.iter_mut().enumerate() {
            row.push(if x == v {
                SqrtCoord::sqrt(alpha_radicands[v].clone())?
            } else {
                SqrtCoord::zero()
            });
        }
    }
    let witness = PointMatrix::new(rows)?;
    let mut h = WeightedGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            let dist = &c * &w_e - g.weight(u, v);
            let d2 = witness.squared_distance(u, v)?;
            if rat_int(&(&dist * &dist)) != d2 {
                return Err(Error::Validation(format!(
                    "distance mismatch at pair ({u}, {v}): expected {dist}, squared distance {d2}"
                )));
            }
            h.add_edge(u, v, dist)?;
        }
    }
    let target = Instance::euclidean(ProblemKind::EuclideanMaxCut, h, Some(witness))?;
    let cert = ReductionCert {
        id: ReductionId::R10,
        kind_from: source.kind,
        kind_to: ProblemKind::EuclideanMaxCut,
        source_size: n,
        target_size: n,
        params: CertParams::Embedding(EmbeddingParams {
            squared: false,
            edge_columns: edges.iter().map(|&(u, v, _)| (u, v)).collect(),
            alpha_radicands,
            scale_c: Some(c),
        }),
    };
    Ok((target, cert))
}
