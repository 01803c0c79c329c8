//! Exact motif counting: non-induced and induced counts, injective
//! homomorphisms, automorphism groups, and network moments.
//!
//! Counts are held in 128-bit integers; moments are doubles computed
//! from exact counts. Patterns up to 8 nodes (connected or not) are
//! supported so the merge algebra can count merged graphs directly.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Largest pattern handled by canonical labeling and the enumerator.
pub const MAX_PATTERN_NODES: usize = 8;
/// Largest motif size accepted as a counting template.
pub const MAX_MOTIF_NODES: usize = 5;

/// Which count a moment is based on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMode {
    NonInduced,
    Induced,
}

impl std::fmt::Display for CountMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CountMode::NonInduced => write!(f, "noninduced"),
            CountMode::Induced => write!(f, "induced"),
        }
    }
}

impl std::str::FromStr for CountMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "noninduced" => Ok(CountMode::NonInduced),
            "induced" => Ok(CountMode::Induced),
            other => Err(format!("unknown count mode {other:?}")),
        }
    }
}

/// Packs the upper-triangle adjacency of a small graph into one word.
fn pack_bits(g: &Graph) -> u32 {
    let n = g.node_count();
    debug_assert!(n <= MAX_PATTERN_NODES);
    let mut bits = 0u32;
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                bits |= 1 << k;
            }
            k += 1;
        }
    }
    bits
}

fn pack_bits_permuted(g: &Graph, perm: &[usize]) -> u32 {
    let n = g.node_count();
    let mut bits = 0u32;
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(perm[i], perm[j]) {
                bits |= 1 << k;
            }
            k += 1;
        }
    }
    bits
}

/// A canonical isomorphism-class key: node count plus the minimal
/// packed adjacency over all vertex permutations.
pub fn canonical_key(g: &Graph) -> Result<u64> {
    let n = g.node_count();
    if n > MAX_PATTERN_NODES {
        return Err(Error::PatternTooLarge { size: n, max: MAX_PATTERN_NODES });
    }
    let min_bits = (0..n)
        .permutations(n)
        .map(|perm| pack_bits_permuted(g, &perm))
        .min()
        .unwrap_or(0);
    Ok((n as u64) << 28 | min_bits as u64)
}

/// |Aut(g)| by exhaustive permutation check (patterns up to 8 nodes).
pub fn automorphism_count(g: &Graph) -> Result<u64> {
    let n = g.node_count();
    if n > MAX_PATTERN_NODES {
        return Err(Error::PatternTooLarge { size: n, max: MAX_PATTERN_NODES });
    }
    if n == 0 {
        return Ok(1);
    }
    let own = pack_bits(g);
    let count = (0..n).permutations(n).filter(|perm| pack_bits_permuted(g, perm) == own).count();
    Ok(count as u64)
}

/// Counting strategy for one pattern, resolved once.
#[derive(Clone, Debug)]
enum Shape {
    Edge,
    TwoStar,
    ThreeStar,
    Triangle,
    Path4,
    Cycle4,
    Generic(Graph),
}

struct CatalogKeys {
    edge: u64,
    twostar: u64,
    threestar: u64,
    triangle: u64,
    path4: u64,
    cycle4: u64,
}

fn catalog_keys() -> &'static CatalogKeys {
    static KEYS: OnceLock<CatalogKeys> = OnceLock::new();
    KEYS.get_or_init(|| CatalogKeys {
        edge: canonical_key(&Graph::path(2)).unwrap(),
        twostar: canonical_key(&Graph::path(3)).unwrap(),
        threestar: canonical_key(&Graph::star(3)).unwrap(),
        triangle: canonical_key(&Graph::complete(3)).unwrap(),
        path4: canonical_key(&Graph::path(4)).unwrap(),
        cycle4: canonical_key(&Graph::cycle(4)).unwrap(),
    })
}

fn classify(pattern: &Graph, key: u64) -> Shape {
    let keys = catalog_keys();
    if key == keys.edge {
        Shape::Edge
    } else if key == keys.twostar {
        Shape::TwoStar
    } else if key == keys.threestar {
        Shape::ThreeStar
    } else if key == keys.triangle {
        Shape::Triangle
    } else if key == keys.path4 {
        Shape::Path4
    } else if key == keys.cycle4 {
        Shape::Cycle4
    } else {
        Shape::Generic(pattern.clone())
    }
}

/// A small connected template graph whose copies are counted.
#[derive(Clone, Debug)]
pub struct Motif {
    name: String,
    template: Graph,
    aut_count: u64,
    canonical_key: u64,
    shape: Shape,
}

impl Motif {
    /// Wraps a connected template of 2..=5 nodes.
    pub fn new(name: impl Into<String>, template: Graph) -> Result<Self> {
        let n = template.node_count();
        if !(2..=MAX_MOTIF_NODES).contains(&n) {
            return Err(Error::MotifTooLarge { n, max: MAX_MOTIF_NODES });
        }
        if !template.is_connected() {
            return Err(Error::DisconnectedMotif);
        }
        let aut_count = automorphism_count(&template)?;
        let canonical_key = canonical_key(&template)?;
        let shape = classify(&template, canonical_key);
        Ok(Motif { name: name.into(), template, aut_count, canonical_key, shape })
    }

    /// Stable CLI/report name.
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn template(&self) -> &Graph {
        &self.template
    }

    /// r: node count.
    pub fn node_count(&self) -> usize {
        self.template.node_count()
    }

    /// Edge count of the template.
    pub fn edge_count(&self) -> usize {
        self.template.edge_count() as usize
    }

    pub fn aut_count(&self) -> u64 {
        self.aut_count
    }

    pub fn canonical_key(&self) -> u64 {
        self.canonical_key
    }

    /// Looks up a catalog name.
    pub fn by_name(name: &str) -> Result<Motif> {
        let template = match name {
            "edge" => Graph::path(2),
            "twostar" => Graph::path(3),
            "triangle" => Graph::complete(3),
            "threestar" => Graph::star(3),
            "path4" => Graph::path(4),
            "cycle4" => Graph::cycle(4),
            "paw" => Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2), (0, 3)]),
            "diamond" => Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]),
            "k4" => Graph::complete(4),
            _ => return Err(Error::UnknownMotif(name.to_string())),
        };
        Motif::new(name, template)
    }

    /// Parses either a catalog name or an inline edge list such as
    /// "0-1,1-2,2-0".
    pub fn parse(spec: &str) -> Result<Motif> {
        if !spec.contains('-') {
            return Motif::by_name(spec);
        }
        let mut edges = Vec::new();
        let mut max_node = 0usize;
        for part in spec.split(',') {
            let (a, b) = part
                .trim()
                .split_once('-')
                .ok_or_else(|| Error::UnknownMotif(spec.to_string()))?;
            let a: usize = a.trim().parse().map_err(|_| Error::UnknownMotif(spec.to_string()))?;
            let b: usize = b.trim().parse().map_err(|_| Error::UnknownMotif(spec.to_string()))?;
            if a == b {
                return Err(Error::UnknownMotif(spec.to_string()));
            }
            max_node = max_node.max(a).max(b);
            edges.push((a, b));
        }
        if edges.is_empty() || max_node + 1 > MAX_MOTIF_NODES {
            return Err(Error::UnknownMotif(spec.to_string()));
        }
        Motif::new(spec, Graph::from_edges(max_node + 1, &edges))
    }

    /// Parses a comma-separated list of motif specs.
    pub fn parse_list(specs: &str) -> Result<Vec<Motif>> {
        specs.split(',').map(|s| Motif::parse(s.trim())).collect()
    }
}

/// All connected graphs on up to 4 nodes, under their stable names.
pub fn catalog() -> Vec<Motif> {
    ["edge", "twostar", "triangle", "threestar", "path4", "cycle4", "paw", "diamond", "k4"]
        .iter()
        .map(|name| Motif::by_name(name).unwrap())
        .collect()
}

/// Orders pattern vertices so each vertex (after a component root)
/// follows at least one already-placed neighbor.
fn embedding_order(pattern: &Graph) -> Vec<usize> {
    let n = pattern.node_count();
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    let mut components = pattern.connected_components();
    components.sort_by_key(|c| std::cmp::Reverse(c.len()));
    for comp in components {
        let root = *comp.iter().max_by_key(|&&v| pattern.degree(v)).unwrap();
        order.push(root);
        placed[root] = true;
        for _ in 1..comp.len() {
            let (_, _, v) = comp
                .iter()
                .filter(|&&v| !placed[v])
                .map(|&v| {
                    let anchored = pattern.neighbors(v).iter().filter(|&&u| placed[u]).count();
                    (anchored, pattern.degree(v), v)
                })
                .max()
                .unwrap();
            order.push(v);
            placed[v] = true;
        }
    }
    order
}

/// Number of injective graph homomorphisms from `pattern` into `g`.
///
/// Pattern may be disconnected; injectivity is enforced across the
/// whole mapping. Backtracking with degree and adjacency pruning.
pub fn injective_homomorphisms(g: &Graph, pattern: &Graph) -> Result<u128> {
    let pn = pattern.node_count();
    if pn > MAX_PATTERN_NODES {
        return Err(Error::PatternTooLarge { size: pn, max: MAX_PATTERN_NODES });
    }
    if pn == 0 {
        return Ok(1);
    }
    if pn > g.node_count() {
        return Ok(0);
    }
    let order = embedding_order(pattern);
    // For each position k, the pattern neighbors of order[k] placed earlier.
    let placed_neighbors: Vec<Vec<usize>> = order
        .iter()
        .enumerate()
        .map(|(k, &v)| {
            pattern
                .neighbors(v)
                .into_iter()
                .filter_map(|u| order[..k].iter().position(|&w| w == u))
                .collect()
        })
        .collect();
    let pattern_degrees: Vec<usize> = order.iter().map(|&v| pattern.degree(v)).collect();

    fn descend(
        g: &Graph,
        k: usize,
        placed_neighbors: &[Vec<usize>],
        pattern_degrees: &[usize],
        used: &mut [bool],
        image: &mut [usize],
        total: &mut u128,
    ) -> Result<()> {
        if k == image.len() {
            *total = total.checked_add(1).ok_or(Error::CountOverflow)?;
            return Ok(());
        }
        let anchors = &placed_neighbors[k];
        if let Some(&first) = anchors.first() {
            for cand in g.neighbors(image[first]) {
                if used[cand]
                    || g.degree(cand) < pattern_degrees[k]
                    || anchors[1..].iter().any(|&a| !g.has_edge(image[a], cand))
                {
                    continue;
                }
                used[cand] = true;
                image[k] = cand;
                descend(g, k + 1, placed_neighbors, pattern_degrees, used, image, total)?;
                used[cand] = false;
            }
        } else {
            for cand in 0..used.len() {
                if used[cand] || g.degree(cand) < pattern_degrees[k] {
                    continue;
                }
                used[cand] = true;
                image[k] = cand;
                descend(g, k + 1, placed_neighbors, pattern_degrees, used, image, total)?;
                used[cand] = false;
            }
        }
        Ok(())
    }

    let mut used = vec![false; g.node_count()];
    let mut image = vec![0usize; pn];
    let mut total: u128 = 0;
    descend(g, 0, &placed_neighbors, &pattern_degrees, &mut used, &mut image, &mut total)?;
    Ok(total)
}

/// Non-induced count of an arbitrary small pattern: inj / |Aut|.
pub fn count_pattern_noninduced(g: &Graph, pattern: &Graph) -> Result<u128> {
    let inj = injective_homomorphisms(g, pattern)?;
    let aut = automorphism_count(pattern)? as u128;
    debug_assert_eq!(inj % aut, 0);
    Ok(inj / aut)
}

/// Exact X_R(G): subgraphs of g isomorphic to the motif template.
pub fn count_noninduced(g: &Graph, motif: &Motif) -> Result<u128> {
    if motif.node_count() > g.node_count() {
        return Ok(0);
    }
    let inj = injective_homomorphisms(g, motif.template())?;
    Ok(inj / motif.aut_count() as u128)
}

pub(crate) fn choose_u128(n: u128, k: u128) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)?;
        acc /= i + 1;
    }
    Some(acc)
}

fn count_by_shape(g: &Graph, shape: &Shape) -> Result<u128> {
    let n = g.node_count();
    let count = match shape {
        Shape::Edge => g.edge_count() as u128,
        Shape::TwoStar => (0..n)
            .map(|i| choose_u128(g.degree(i) as u128, 2).ok_or(Error::CountOverflow))
            .sum::<Result<u128>>()?,
        Shape::ThreeStar => (0..n)
            .map(|i| choose_u128(g.degree(i) as u128, 3).ok_or(Error::CountOverflow))
            .sum::<Result<u128>>()?,
        Shape::Triangle => {
            let closed: u128 =
                g.edges().iter().map(|&(i, j)| g.common_neighbors(i, j) as u128).sum();
            debug_assert_eq!(closed % 3, 0);
            closed / 3
        }
        Shape::Path4 => g
            .edges()
            .iter()
            .map(|&(i, j)| {
                let wedge = (g.degree(i) as u128).saturating_sub(1)
                    * (g.degree(j) as u128).saturating_sub(1);
                wedge - g.common_neighbors(i, j) as u128
            })
            .sum(),
        Shape::Cycle4 => {
            let mut doubled: u128 = 0;
            for i in 0..n {
                for j in i + 1..n {
                    doubled += choose_u128(g.common_neighbors(i, j) as u128, 2)
                        .ok_or(Error::CountOverflow)?;
                }
            }
            debug_assert_eq!(doubled % 2, 0);
            doubled / 2
        }
        Shape::Generic(pattern) => {
            if pattern.node_count() > n {
                0
            } else {
                count_pattern_noninduced(g, pattern)?
            }
        }
    };
    Ok(count)
}

/// Closed-form counts for the degree/common-neighbor motifs; all other
/// motifs fall back to the generic enumerator. Returns X_R(G) exactly.
pub fn fast_count(g: &Graph, motif: &Motif) -> Result<u128> {
    if motif.node_count() > g.node_count() {
        return Ok(0);
    }
    count_by_shape(g, &motif.shape)
}

/// The integer combination of non-induced counts that yields an
/// induced count: X-tilde_R = sum over supergraphs H of mu_H * X_H.
#[derive(Debug)]
struct InducedPlan {
    terms: Vec<(Shape, i128)>,
}

fn spanning_copy_count(sub: &Graph, host: &Graph) -> Result<u64> {
    // Number of spanning subgraphs of `host` isomorphic to `sub`:
    // edge subsets of host of the right size, same vertex set.
    let n = host.node_count();
    debug_assert_eq!(n, sub.node_count());
    let host_edges = host.edges();
    let want = sub.edge_count() as usize;
    let target = canonical_key(sub)?;
    let mut count = 0u64;
    for subset in host_edges.iter().combinations(want) {
        let edges: Vec<(usize, usize)> = subset.into_iter().copied().collect();
        let candidate = Graph::from_edges(n, &edges);
        if canonical_key(&candidate)? == target {
            count += 1;
        }
    }
    Ok(count)
}

fn build_induced_plan(template: &Graph, own_key: u64) -> Result<InducedPlan> {
    let r = template.node_count();
    // Upward closure: all isomorphism classes obtained by adding edges.
    let mut non_edges = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            if !template.has_edge(i, j) {
                non_edges.push((i, j));
            }
        }
    }
    let mut closure: Vec<(u64, Graph)> = Vec::new();
    for mask in 0u32..1 << non_edges.len() {
        let mut edges = template.edges();
        for (bit, &e) in non_edges.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                edges.push(e);
            }
        }
        let h = Graph::from_edges(r, &edges);
        let key = canonical_key(&h)?;
        if !closure.iter().any(|(k, _)| *k == key) {
            closure.push((key, h));
        }
    }
    // Top-down back-substitution, most edges first.
    closure.sort_by_key(|(_, h)| std::cmp::Reverse(h.edge_count()));
    // mu[i]: coefficients expressing the induced count of closure[i]
    // in terms of non-induced counts of closure members.
    let mut mu: Vec<Vec<i128>> = vec![vec![0; closure.len()]; closure.len()];
    for i in 0..closure.len() {
        mu[i][i] = 1;
        for j in 0..i {
            let a = spanning_copy_count(&closure[i].1, &closure[j].1)? as i128;
            if a == 0 {
                continue;
            }
            for k in 0..closure.len() {
                let term = a.checked_mul(mu[j][k]).ok_or(Error::CountOverflow)?;
                mu[i][k] = mu[i][k].checked_sub(term).ok_or(Error::CountOverflow)?;
            }
        }
    }
    let own = closure
        .iter()
        .position(|(k, _)| *k == own_key)
        .expect("closure contains the motif itself");
    let terms = closure
        .iter()
        .zip(&mu[own])
        .filter(|(_, &coef)| coef != 0)
        .map(|((key, h), &coef)| (classify(h, *key), coef))
        .collect();
    Ok(InducedPlan { terms })
}

fn induced_plan(motif: &Motif) -> Result<Arc<InducedPlan>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<InducedPlan>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(plan) = cache.lock().unwrap().get(&motif.canonical_key()) {
        return Ok(plan.clone());
    }
    let plan = Arc::new(build_induced_plan(motif.template(), motif.canonical_key())?);
    cache.lock().unwrap().insert(motif.canonical_key(), plan.clone());
    Ok(plan)
}

/// Exact induced count: node subsets whose induced subgraph is
/// isomorphic to the motif.
pub fn count_induced(g: &Graph, motif: &Motif) -> Result<u128> {
    if motif.node_count() > g.node_count() {
        return Ok(0);
    }
    let plan = induced_plan(motif)?;
    let mut total: i128 = 0;
    for (shape, coef) in &plan.terms {
        let count = i128::try_from(count_by_shape(g, shape)?).map_err(|_| Error::CountOverflow)?;
        total = total
            .checked_add(coef.checked_mul(count).ok_or(Error::CountOverflow)?)
            .ok_or(Error::CountOverflow)?;
    }
    u128::try_from(total).map_err(|_| Error::CountOverflow)
}

/// X_R(G) or X-tilde_R(G) by mode.
pub fn count(g: &Graph, motif: &Motif, mode: CountMode) -> Result<u128> {
    match mode {
        CountMode::NonInduced => fast_count(g, motif),
        CountMode::Induced => count_induced(g, motif),
    }
}

/// U_R(G) = X_R(G) / C(n, r) in the requested mode.
pub fn network_moment(g: &Graph, motif: &Motif, mode: CountMode) -> Result<f64> {
    let n = g.node_count();
    let r = motif.node_count();
    if n < r {
        return Err(Error::GraphTooSmall { n, min: r });
    }
    Ok(count(g, motif, mode)? as f64 / choose_f64(n, r))
}

/// C(n, k) as a double.
pub fn choose_f64(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut acc = 1.0;
    for i in 0..k {
        acc *= (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{er_graph, naive_count_induced, naive_injective_homomorphisms};

    #[test]
    fn automorphism_counts_for_catalog() {
        let expected = [
            ("edge", 2),
            ("twostar", 2),
            ("triangle", 6),
            ("threestar", 6),
            ("path4", 2),
            ("cycle4", 8),
            ("paw", 2),
            ("diamond", 4),
            ("k4", 24),
        ];
        for (name, aut) in expected {
            assert_eq!(Motif::by_name(name).unwrap().aut_count(), aut, "{name}");
        }
    }

    #[test]
    fn aut_divides_r_factorial() {
        for motif in catalog() {
            let r_fact: u64 = (1..=motif.node_count() as u64).product();
            assert_eq!(r_fact % motif.aut_count(), 0, "{}", motif.name());
        }
    }

    #[test]
    fn catalog_pairwise_non_isomorphic() {
        let keys: Vec<u64> = catalog().iter().map(|m| m.canonical_key()).collect();
        let mut dedup = keys.clone();
        dedup.sort_unstable();
        dedup.dedup();
        assert_eq!(dedup.len(), keys.len());
    }

    #[test]
    fn canonical_key_invariant_under_relabeling() {
        let a = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = Graph::from_edges(4, &[(2, 0), (0, 3), (3, 1)]); // P4 relabeled
        assert_eq!(canonical_key(&a).unwrap(), canonical_key(&b).unwrap());
        let c = Graph::star(3);
        assert_ne!(canonical_key(&a).unwrap(), canonical_key(&c).unwrap());
    }

    #[test]
    fn noninduced_counts_small_cases() {
        let triangle = Motif::by_name("triangle").unwrap();
        let twostar = Motif::by_name("twostar").unwrap();
        assert_eq!(count_noninduced(&Graph::complete(4), &triangle).unwrap(), 4);
        assert_eq!(count_noninduced(&Graph::complete(5), &twostar).unwrap(), 30);
        assert_eq!(count_noninduced(&Graph::path(4), &twostar).unwrap(), 2);
        // Motif larger than the graph counts zero.
        assert_eq!(count_noninduced(&Graph::path(2), &triangle).unwrap(), 0);
    }

    #[test]
    fn induced_counts_small_cases() {
        let triangle = Motif::by_name("triangle").unwrap();
        let twostar = Motif::by_name("twostar").unwrap();
        assert_eq!(count_induced(&Graph::complete(4), &triangle).unwrap(), 4);
        assert_eq!(count_induced(&Graph::cycle(4), &twostar).unwrap(), 4);
        assert_eq!(count_induced(&Graph::cycle(4), &triangle).unwrap(), 0);
    }

    #[test]
    fn moments_small_cases() {
        let triangle = Motif::by_name("triangle").unwrap();
        let twostar = Motif::by_name("twostar").unwrap();
        let edge = Motif::by_name("edge").unwrap();
        assert_eq!(
            network_moment(&Graph::complete(4), &triangle, CountMode::NonInduced).unwrap(),
            1.0
        );
        assert_eq!(network_moment(&Graph::empty(5), &edge, CountMode::NonInduced).unwrap(), 0.0);
        assert_eq!(
            network_moment(&Graph::path(4), &twostar, CountMode::NonInduced).unwrap(),
            0.5
        );
        assert!(network_moment(&Graph::path(2), &triangle, CountMode::NonInduced).is_err());
    }

    #[test]
    fn fast_count_examples() {
        let triangle = Motif::by_name("triangle").unwrap();
        let twostar = Motif::by_name("twostar").unwrap();
        let cycle4 = Motif::by_name("cycle4").unwrap();
        assert_eq!(fast_count(&Graph::complete(5), &triangle).unwrap(), 10);
        assert_eq!(fast_count(&Graph::star(5), &twostar).unwrap(), 10);
        assert_eq!(fast_count(&Graph::cycle(4), &cycle4).unwrap(), 1);
    }

    #[test]
    fn oracle_equivalence_on_random_graphs() {
        // fast_count == generic == naive inj / |Aut| for every catalog
        // motif on a deterministic random suite.
        let motifs = catalog();
        for trial in 0..200u64 {
            let n = 4 + (trial % 9) as usize; // 4..=12
            let p = 0.15 + 0.6 * (trial as f64 / 200.0);
            let g = er_graph(n, p, 1000 + trial);
            for motif in &motifs {
                let generic = count_noninduced(&g, motif).unwrap();
                let fast = fast_count(&g, motif).unwrap();
                let naive =
                    naive_injective_homomorphisms(&g, motif.template()) / motif.aut_count() as u128;
                assert_eq!(generic, fast, "{} on trial {trial}", motif.name());
                assert_eq!(generic, naive, "{} on trial {trial}", motif.name());
            }
        }
    }

    #[test]
    fn induced_matches_subset_enumeration() {
        let motifs = catalog();
        for trial in 0..40u64 {
            let n = 5 + (trial % 5) as usize;
            let g = er_graph(n, 0.45, 77 + trial);
            for motif in &motifs {
                assert_eq!(
                    count_induced(&g, motif).unwrap(),
                    naive_count_induced(&g, motif.template()),
                    "{} on trial {trial}",
                    motif.name()
                );
            }
        }
    }

    #[test]
    fn complete_graph_law() {
        // X_R(K_n) = C(n, r) * r! / |Aut(R)|.
        for motif in catalog() {
            let r = motif.node_count();
            let r_fact: u128 = (1..=r as u128).product();
            for n in r..=8 {
                let expected = choose_u128(n as u128, r as u128).unwrap() * r_fact
                    / motif.aut_count() as u128;
                assert_eq!(
                    count_noninduced(&Graph::complete(n), &motif).unwrap(),
                    expected,
                    "{} on K_{n}",
                    motif.name()
                );
            }
        }
    }

    #[test]
    fn adding_an_edge_never_decreases_noninduced_counts() {
        let motifs = catalog();
        for trial in 0..20u64 {
            let n = 6;
            let g = er_graph(n, 0.4, 31 + trial);
            let mut missing = None;
            'outer: for i in 0..n {
                for j in i + 1..n {
                    if !g.has_edge(i, j) {
                        missing = Some((i, j));
                        break 'outer;
                    }
                }
            }
            let Some(extra) = missing else { continue };
            let mut edges = g.edges();
            edges.push(extra);
            let g_plus = Graph::from_edges(n, &edges);
            for motif in &motifs {
                assert!(
                    count_noninduced(&g_plus, motif).unwrap()
                        >= count_noninduced(&g, motif).unwrap()
                );
            }
        }
    }

    #[test]
    fn disconnected_patterns_count_exactly() {
        // Two disjoint edges in P4: only {0-1, 2-3}.
        let p4 = Graph::path(4);
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        assert_eq!(count_pattern_noninduced(&p4, &two_edges).unwrap(), 1);
        // Cross-check against the naive enumerator on a random graph.
        let g = er_graph(8, 0.5, 5);
        let aut = automorphism_count(&two_edges).unwrap() as u128;
        assert_eq!(
            count_pattern_noninduced(&g, &two_edges).unwrap(),
            naive_injective_homomorphisms(&g, &two_edges) / aut
        );
    }

    #[test]
    fn inline_motif_spec() {
        let m = Motif::parse("0-1,1-2,2-0").unwrap();
        assert_eq!(m.canonical_key(), Motif::by_name("triangle").unwrap().canonical_key());
        assert!(Motif::parse("0-0").is_err());
        assert!(Motif::parse("nosuch").is_err());
        // Disconnected inline spec is rejected.
        assert!(Motif::parse("0-1,2-3").is_err());
    }
}
