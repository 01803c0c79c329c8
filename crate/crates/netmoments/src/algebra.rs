//! The combinatorial algebra of motif pairs: merge sets, multiplicities,
//! the linearity identity, and the exact finite-sample moments of
//! subsampled network moments.
//!
//! A merge table for motifs R and R' lists every unlabeled graph S that
//! can be formed by overlaying one copy of R and one copy of R', grouped
//! by the number q of shared nodes, together with the multiplicity c_S:
//! the number of ordered pairs of subgraphs (R_1, R_2) of S with
//! R_1 isomorphic to R, R_2 isomorphic to R', whose vertex and edge sets
//! cover S. These tables drive the product identity
//! X_R(G) X_R'(G) = sum over S of c_S X_S(G) and every covariance
//! formula downstream.

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::{Graph, NodeSet};
use crate::motif::{
    self, canonical_key, choose_f64, count_pattern_noninduced, injective_homomorphisms, CountMode,
    Motif, MAX_PATTERN_NODES,
};

/// One merged graph S with its multiplicity.
#[derive(Clone, Debug)]
pub struct MergeEntry {
    /// Canonical representative of S (possibly disconnected).
    pub merged: Graph,
    pub canonical_key: u64,
    /// Number of shared nodes q; node count is r + r' - q.
    pub q: usize,
    /// s = |V(S)|.
    pub node_count: usize,
    /// Edge count of S.
    pub edge_count: usize,
    /// c_S: ordered (R_1, R_2) decompositions of S.
    pub multiplicity: u64,
    /// |Aut(S)|.
    pub aut_count: u64,
}

/// All merge entries for one motif pair, sorted by (q, canonical key).
#[derive(Clone, Debug)]
pub struct MergeTable {
    pub left: Motif,
    pub right: Motif,
    pub entries: Vec<MergeEntry>,
}

impl MergeTable {
    pub fn entries_with_q(&self, q: usize) -> impl Iterator<Item = &MergeEntry> {
        self.entries.iter().filter(move |e| e.q == q)
    }
}

/// Distinct subgraph copies of `pattern` inside `host`, as
/// (vertex bitmask, edge bitmask over host edge indices).
fn subgraph_copies(host: &Graph, pattern: &Graph) -> Result<Vec<(u32, u32)>> {
    let host_edges = host.edges();
    let edge_index: HashMap<(usize, usize), usize> =
        host_edges.iter().enumerate().map(|(k, &e)| (e, k)).collect();

    let pn = pattern.node_count();
    let mut copies: HashSet<(u32, u32)> = HashSet::new();
    // Enumerate injective maps and collapse each to its image subgraph.
    for map in (0..host.node_count()).permutations(pn) {
        let ok = pattern.edges().iter().all(|&(a, b)| host.has_edge(map[a], map[b]));
        if !ok {
            continue;
        }
        let mut vmask = 0u32;
        for &v in &map {
            vmask |= 1 << v;
        }
        let mut emask = 0u32;
        for &(a, b) in &pattern.edges() {
            let (x, y) = (map[a].min(map[b]), map[a].max(map[b]));
            emask |= 1 << edge_index[&(x, y)];
        }
        copies.insert((vmask, emask));
    }
    let mut out: Vec<_> = copies.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

/// c_S by direct definition: ordered pairs of copies covering S.
fn covering_pair_count(s: &Graph, left: &Motif, right: &Motif) -> Result<u64> {
    let full_v = (1u32 << s.node_count()) - 1;
    let full_e = if s.edge_count() == 0 { 0 } else { (1u32 << s.edge_count()) - 1 };
    let left_copies = subgraph_copies(s, left.template())?;
    let right_copies = if right.canonical_key() == left.canonical_key() {
        left_copies.clone()
    } else {
        subgraph_copies(s, right.template())?
    };
    let mut count = 0u64;
    for &(v1, e1) in &left_copies {
        for &(v2, e2) in &right_copies {
            if v1 | v2 == full_v && e1 | e2 == full_e {
                count += 1;
            }
        }
    }
    Ok(count)
}

fn build_merge_table(left: &Motif, right: &Motif) -> Result<MergeTable> {
    let r = left.node_count();
    let rp = right.node_count();
    if r + rp > MAX_PATTERN_NODES {
        return Err(Error::PatternTooLarge { size: r + rp, max: MAX_PATTERN_NODES });
    }

    // Enumerate every gluing: pick q nodes of R' and overlay them onto
    // q nodes of R in every injective way; dedupe unions by canonical key.
    let mut seen: HashMap<u64, Graph> = HashMap::new();
    for q in 0..=r.min(rp) {
        for merged_right in (0..rp).combinations(q) {
            for targets in (0..r).permutations(q) {
                let mut map = vec![usize::MAX; rp];
                for (k, &src) in merged_right.iter().enumerate() {
                    map[src] = targets[k];
                }
                let mut fresh = r;
                for slot in map.iter_mut() {
                    if *slot == usize::MAX {
                        *slot = fresh;
                        fresh += 1;
                    }
                }
                let mut edges = left.template().edges();
                for &(a, b) in &right.template().edges() {
                    let (x, y) = (map[a].min(map[b]), map[a].max(map[b]));
                    edges.push((x, y));
                }
                edges.sort_unstable();
                edges.dedup();
                let union = Graph::from_edges(r + rp - q, &edges);
                let key = canonical_key(&union)?;
                seen.entry(key).or_insert(union);
            }
        }
    }

    let mut entries = Vec::with_capacity(seen.len());
    for (key, merged) in seen {
        let s = merged.node_count();
        let multiplicity = covering_pair_count(&merged, left, right)?;
        debug_assert!(multiplicity >= 1);
        entries.push(MergeEntry {
            q: r + rp - s,
            node_count: s,
            edge_count: merged.edge_count() as usize,
            multiplicity,
            aut_count: motif::automorphism_count(&merged)?,
            canonical_key: key,
            merged,
        });
    }
    entries.sort_by_key(|e| (e.q, e.canonical_key));

    let table = MergeTable { left: left.clone(), right: right.clone(), entries };
    debug_assert!(table.complete_graph_self_check().unwrap_or(false));
    Ok(table)
}

impl MergeTable {
    /// Evaluates the linearity identity on K_{r+r'}.
    fn complete_graph_self_check(&self) -> Result<bool> {
        let host = Graph::complete(self.left.node_count() + self.right.node_count());
        let report = check_linearity_with(&host, self)?;
        Ok(report.holds)
    }
}

/// Builds (or fetches) the merge table for a motif pair. Tables are
/// memoized by the unordered canonical key pair.
pub fn merge_table(left: &Motif, right: &Motif) -> Result<Arc<MergeTable>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, u64), Arc<MergeTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    // c_S is symmetric in (R, R'), so one orientation serves both.
    let key = {
        let (a, b) = (left.canonical_key(), right.canonical_key());
        (a.min(b), a.max(b))
    };
    if let Some(table) = cache.lock().unwrap().get(&key) {
        return Ok(table.clone());
    }
    let table = Arc::new(build_merge_table(left, right)?);
    cache.lock().unwrap().insert(key, table.clone());
    Ok(table)
}

/// Outcome of checking X_R(G) X_R'(G) = sum c_S X_S(G) exactly.
#[derive(Clone, Debug)]
pub struct LinearityReport {
    pub holds: bool,
    pub product: u128,
    pub merged_sum: u128,
    /// Per-entry contributions (canonical key, c_S, X_S), for diffing.
    pub terms: Vec<(u64, u64, u128)>,
}

fn check_linearity_with(g: &Graph, table: &MergeTable) -> Result<LinearityReport> {
    let x_left = motif::count_noninduced(g, &table.left)?;
    let x_right = motif::count_noninduced(g, &table.right)?;
    let product = x_left.checked_mul(x_right).ok_or(Error::CountOverflow)?;
    let mut merged_sum: u128 = 0;
    let mut terms = Vec::with_capacity(table.entries.len());
    for entry in &table.entries {
        let x_s = count_pattern_noninduced(g, &entry.merged)?;
        let contribution =
            x_s.checked_mul(entry.multiplicity as u128).ok_or(Error::CountOverflow)?;
        merged_sum = merged_sum.checked_add(contribution).ok_or(Error::CountOverflow)?;
        terms.push((entry.canonical_key, entry.multiplicity, x_s));
    }
    Ok(LinearityReport { holds: product == merged_sum, product, merged_sum, terms })
}

/// Checks the linearity identity for one pair on one graph.
pub fn verify_linearity(g: &Graph, left: &Motif, right: &Motif) -> Result<LinearityReport> {
    let table = merge_table(left, right)?;
    check_linearity_with(g, &table)
}

/// E over uniform b-subsets of U_R of the induced subgraph: exactly
/// U_R(G). Exists so pipelines can assert unbiasedness without
/// resampling.
pub fn subsample_expectation(g: &Graph, motif: &Motif, b: usize) -> Result<f64> {
    let n = g.node_count();
    if b < motif.node_count() || b > n {
        return Err(Error::SubsampleSize { b, min: motif.node_count(), max: n });
    }
    motif::network_moment(g, motif, CountMode::NonInduced)
}

/// C(b, s) / C(n, s) as a stable product; zero when s > b.
fn subset_ratio(b: usize, n: usize, s: usize) -> f64 {
    if s > b {
        return 0.0;
    }
    (0..s).map(|k| (b - k) as f64 / (n - k) as f64).product()
}

/// Exact conditional covariance of two subsampled moments,
/// cov over uniform b-subsets of (U_R, U_R') of the induced subgraph.
///
/// Evaluated through the merge table with C(b, s) set to zero whenever
/// s > b, which extends the identity below its r + r' < b regime; the
/// extension is enumeration-checked in tests.
pub fn subsample_covariance(
    g: &Graph,
    left: &Motif,
    right: &Motif,
    b: usize,
) -> Result<f64> {
    let n = g.node_count();
    let min_b = left.node_count().max(right.node_count());
    if b < min_b || b > n {
        return Err(Error::SubsampleSize { b, min: min_b, max: n });
    }
    let table = merge_table(left, right)?;
    let mut merged_term = 0.0;
    for entry in &table.entries {
        let ratio = subset_ratio(b, n, entry.node_count);
        if ratio == 0.0 {
            continue;
        }
        let x_s = count_pattern_noninduced(g, &entry.merged)? as f64;
        merged_term += entry.multiplicity as f64 * ratio * x_s;
    }
    let u_left = motif::network_moment(g, &table.left, CountMode::NonInduced)?;
    let u_right = motif::network_moment(g, &table.right, CountMode::NonInduced)?;
    let scale = choose_f64(b, table.left.node_count()) * choose_f64(b, table.right.node_count());
    Ok(merged_term / scale - u_left * u_right)
}

/// The linear Hoeffding kernel of the subsampled moment at node v:
/// (n - 1)/b * [U_R(G) - U_R(G minus v)].
pub fn hoeffding_g1(g: &Graph, motif: &Motif, v: usize, b: usize) -> Result<f64> {
    let n = g.node_count();
    let r = motif.node_count();
    if n < r + 1 {
        return Err(Error::GraphTooSmall { n, min: r + 1 });
    }
    if v >= n {
        return Err(Error::NodeOutOfRange { index: v, n });
    }
    let u_full = motif::network_moment(g, motif, CountMode::NonInduced)?;
    let rest: Vec<usize> = (0..n).filter(|&x| x != v).collect();
    let without = g.induced_subgraph(&NodeSet::new(rest)?)?;
    let u_without = motif::network_moment(&without, motif, CountMode::NonInduced)?;
    Ok((n as f64 - 1.0) / b as f64 * (u_full - u_without))
}

/// g1 at every node, one deletion per node.
pub fn hoeffding_g1_all(g: &Graph, motif: &Motif, b: usize) -> Result<Vec<f64>> {
    (0..g.node_count()).map(|v| hoeffding_g1(g, motif, v, b)).collect()
}

/// Covariance of (g1_R, g1_R') over a uniformly drawn node, computed
/// directly from per-node g1 values.
pub fn g1_node_covariance(g: &Graph, left: &Motif, right: &Motif, b: usize) -> Result<f64> {
    let xs = hoeffding_g1_all(g, left, b)?;
    let ys = hoeffding_g1_all(g, right, b)?;
    let n = xs.len() as f64;
    let mean_x: f64 = xs.iter().sum::<f64>() / n;
    let mean_y: f64 = ys.iter().sum::<f64>() / n;
    let cross: f64 = xs.iter().zip(&ys).map(|(x, y)| x * y).sum::<f64>() / n;
    Ok(cross - mean_x * mean_y)
}

/// The same node covariance through the merge-table closed form:
/// pref_R pref_R' * sum over S of c_S (n q - r r') / n^2 * X_S(G),
/// with pref_R = r! (n - r - 1)! / [b (n - 2)!].
pub fn g1_node_covariance_merge_form(
    g: &Graph,
    left: &Motif,
    right: &Motif,
    b: usize,
) -> Result<f64> {
    let n = g.node_count();
    let r = left.node_count();
    let rp = right.node_count();
    if n < r.max(rp) + 1 {
        return Err(Error::GraphTooSmall { n, min: r.max(rp) + 1 });
    }
    let prefactor = |size: usize| -> f64 {
        let factorial: f64 = (1..=size).map(|k| k as f64).product();
        let falling: f64 = (n - size..=n - 2).map(|k| k as f64).product();
        factorial / (b as f64 * falling)
    };
    let table = merge_table(left, right)?;
    let nf = n as f64;
    let mut sum = 0.0;
    for entry in &table.entries {
        let x_s = count_pattern_noninduced(g, &entry.merged)? as f64;
        let weight = (nf * entry.q as f64 - (r * rp) as f64) / (nf * nf);
        sum += entry.multiplicity as f64 * weight * x_s;
    }
    Ok(prefactor(r) * prefactor(rp) * sum)
}

/// Covariance of the summed linear terms over a without-replacement
/// sample of b nodes: b(n - b)/(n - 1) times the node covariance.
pub fn g1_sum_covariance(g: &Graph, left: &Motif, right: &Motif, b: usize) -> Result<f64> {
    let n = g.node_count() as f64;
    let factor = b as f64 * (n - b as f64) / (n - 1.0);
    Ok(factor * g1_node_covariance(g, left, right, b)?)
}

/// Recovers X_S via inj(S, G) / |Aut(S)| for external callers that hold
/// merged patterns.
pub fn count_merged(g: &Graph, entry: &MergeEntry) -> Result<u128> {
    let inj = injective_homomorphisms(g, &entry.merged)?;
    Ok(inj / entry.aut_count as u128)
}
