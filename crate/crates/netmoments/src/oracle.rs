//! Brute-force reference implementations.
//!
//! Everything here trades speed for directness: exhaustive enumeration
//! over subsets, tuples, or vertex maps, with no shared code paths into
//! the closed forms it is used to check. The test suites (and the
//! acceptance suite) run these side by side with the production
//! implementations.

use itertools::Itertools;

use crate::graph::{Graph, NodeSet};
use crate::motif::{canonical_key, CountMode, Motif};

/// Deterministic Erdos-Renyi graph from a counter-based stream.
pub fn er_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if crate::rng::pair_uniform(seed, i, j) < p {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

/// Injective homomorphism count over all ordered vertex tuples.
pub fn naive_injective_homomorphisms(g: &Graph, pattern: &Graph) -> u128 {
    let n = g.node_count();
    let pn = pattern.node_count();
    if pn > n {
        return 0;
    }
    (0..n)
        .permutations(pn)
        .filter(|map| pattern.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b])))
        .count() as u128
}

/// Induced count by brute force over node subsets.
pub fn naive_count_induced(g: &Graph, pattern: &Graph) -> u128 {
    let n = g.node_count();
    let r = pattern.node_count();
    if r > n {
        return 0;
    }
    let target = canonical_key(pattern).unwrap();
    (0..n)
        .combinations(r)
        .filter(|subset| {
            let sub = g.induced_subgraph(&NodeSet::new(subset.clone()).unwrap()).unwrap();
            canonical_key(&sub).unwrap() == target
        })
        .count() as u128
}

/// The subsampled moment of every b-subset of the host, in subset
/// enumeration order.
pub fn enumerated_subsample_moments(
    g: &Graph,
    motif: &Motif,
    b: usize,
    mode: CountMode,
) -> Vec<f64> {
    (0..g.node_count())
        .combinations(b)
        .map(|subset| {
            let sub = g.induced_subgraph(&NodeSet::new(subset).unwrap()).unwrap();
            crate::motif::network_moment(&sub, motif, mode).unwrap()
        })
        .collect()
}

/// Mean of U_R over all C(n, b) subsets.
pub fn enumerated_subsample_mean(g: &Graph, motif: &Motif, b: usize) -> f64 {
    let values = enumerated_subsample_moments(g, motif, b, CountMode::NonInduced);
    values.iter().sum::<f64>() / values.len() as f64
}

/// Covariance of (U_R, U_R') over all C(n, b) subsets.
pub fn enumerated_subsample_covariance(g: &Graph, left: &Motif, right: &Motif, b: usize) -> f64 {
    let xs: Vec<f64> = enumerated_subsample_moments(g, left, b, CountMode::NonInduced);
    let ys: Vec<f64> = enumerated_subsample_moments(g, right, b, CountMode::NonInduced);
    let k = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / k;
    let mean_y = ys.iter().sum::<f64>() / k;
    xs.iter().zip(&ys).map(|(x, y)| (x - mean_x) * (y - mean_y)).sum::<f64>() / k
}

/// Variance of sum over an ordered without-replacement sample of b of
/// the given per-node values, by enumerating every ordered tuple.
pub fn ordered_sample_sum_variance(values: &[f64], b: usize) -> f64 {
    let sums: Vec<f64> = (0..values.len())
        .permutations(b)
        .map(|tuple| tuple.iter().map(|&i| values[i]).sum())
        .collect();
    let k = sums.len() as f64;
    let mean = sums.iter().sum::<f64>() / k;
    sums.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>() / k
}

/// Midpoint-rule tensor-grid quadrature of a bivariate function on
/// the unit square, used to cross-check quasi-random estimates.
pub fn grid_integral_2d(f: impl Fn(f64, f64) -> f64, cells_per_axis: usize) -> f64 {
    let h = 1.0 / cells_per_axis as f64;
    let mut total = 0.0;
    for i in 0..cells_per_axis {
        let u = (i as f64 + 0.5) * h;
        for j in 0..cells_per_axis {
            let v = (j as f64 + 0.5) * h;
            total += f(u, v);
        }
    }
    total * h * h
}

/// Midpoint-rule tensor-grid quadrature over the unit cube.
pub fn grid_integral_3d(f: impl Fn(f64, f64, f64) -> f64, cells_per_axis: usize) -> f64 {
    let h = 1.0 / cells_per_axis as f64;
    let mut total = 0.0;
    for i in 0..cells_per_axis {
        let u = (i as f64 + 0.5) * h;
        for j in 0..cells_per_axis {
            let v = (j as f64 + 0.5) * h;
            for k in 0..cells_per_axis {
                let w = (k as f64 + 0.5) * h;
                total += f(u, v, w);
            }
        }
    }
    total * h * h * h
}
