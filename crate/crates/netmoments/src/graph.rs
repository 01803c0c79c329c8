//! Simple undirected graphs with fast pairwise adjacency tests.
//!
//! Adjacency is stored as per-node bitset rows up to 2^16 nodes and as
//! sorted neighbor lists above that; both back the same query surface.
//! Graphs are immutable once built and safe to share across workers.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::io::BufRead;

use crate::error::{Error, Result};

const BITSET_MAX_NODES: usize = 1 << 16;

#[derive(Clone, Debug)]
enum Adjacency {
    /// Row-major bitset: row i occupies `words_per_row` u64 words.
    Bits { words_per_row: usize, bits: Vec<u64> },
    /// Sorted neighbor list per node.
    Lists(Vec<Vec<u32>>),
}

/// A simple undirected labeled graph.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    m: u64,
    degrees: Vec<u32>,
    adjacency: Adjacency,
    /// Original labels of the nodes, for reporting; identity by default.
    orig_ids: Vec<u64>,
}

/// Strictly increasing node indices into a host graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeSet(Vec<usize>);

impl NodeSet {
    pub fn new(indices: Vec<usize>) -> Result<Self> {
        if indices.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::UnsortedNodeSet);
        }
        Ok(NodeSet(indices))
    }

    /// Sorts (and dedups) arbitrary indices into a valid set.
    pub fn from_unsorted(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        NodeSet(indices)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }
}

/// Options for [`Graph::load_edge_list`].
#[derive(Clone, Copy, Debug)]
pub struct LoadOptions {
    /// Smallest legal node id in the input (0 or 1).
    pub index_base: u64,
    /// Treat '#'-prefixed lines as comments.
    pub allow_comments: bool,
    /// Silently drop self-loops instead of rejecting the file.
    pub drop_self_loops: bool,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions { index_base: 0, allow_comments: true, drop_self_loops: false }
    }
}

impl Graph {
    /// Builds a graph from undirected edges over nodes 0..n.
    /// Duplicate edges and orientation are normalized; self-loops panic.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut norm: Vec<(usize, usize)> = edges
            .iter()
            .map(|&(a, b)| {
                assert!(a != b, "self-loop on node {a}");
                assert!(a < n && b < n, "edge ({a},{b}) out of range for n={n}");
                (a.min(b), a.max(b))
            })
            .collect();
        norm.sort_unstable();
        norm.dedup();
        Self::from_normalized_edges(n, &norm, (0..n as u64).collect())
    }

    fn from_normalized_edges(n: usize, edges: &[(usize, usize)], orig_ids: Vec<u64>) -> Self {
        let mut degrees = vec![0u32; n];
        for &(a, b) in edges {
            degrees[a] += 1;
            degrees[b] += 1;
        }
        let adjacency = if n <= BITSET_MAX_NODES {
            let words_per_row = n.div_ceil(64);
            let mut bits = vec![0u64; n * words_per_row];
            for &(a, b) in edges {
                bits[a * words_per_row + b / 64] |= 1 << (b % 64);
                bits[b * words_per_row + a / 64] |= 1 << (a % 64);
            }
            Adjacency::Bits { words_per_row, bits }
        } else {
            let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
            for i in 0..n {
                lists[i].reserve(degrees[i] as usize);
            }
            for &(a, b) in edges {
                lists[a].push(b as u32);
                lists[b].push(a as u32);
            }
            for list in &mut lists {
                list.sort_unstable();
            }
            Adjacency::Lists(lists)
        };
        let g = Graph { n, m: edges.len() as u64, degrees, adjacency, orig_ids };
        debug_assert!(g.check_consistency());
        g
    }

    /// Parses a whitespace-separated edge list, one edge per line.
    /// Node ids are compacted to [0, n) in sorted original-id order.
    pub fn load_edge_list<R: BufRead>(reader: R, options: LoadOptions) -> Result<Self> {
        let mut raw_edges: Vec<(u64, u64)> = Vec::new();
        for (lineno, line) in reader.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let trimmed = line.trim();
            if trimmed.is_empty() {
                continue;
            }
            if options.allow_comments && trimmed.starts_with('#') {
                continue;
            }
            let mut fields = trimmed.split_whitespace();
            let next_id = |fields: &mut dyn Iterator<Item = &str>| -> Result<u64> {
                let token = fields.next().unwrap_or("");
                token.parse::<u64>().map_err(|_| Error::EdgeListParse {
                    line: lineno,
                    token: token.to_string(),
                })
            };
            let a = next_id(&mut fields)?;
            let b = next_id(&mut fields)?;
            for id in [a, b] {
                if id < options.index_base {
                    return Err(Error::IndexBase { line: lineno, id, base: options.index_base });
                }
            }
            if a == b {
                if options.drop_self_loops {
                    continue;
                }
                return Err(Error::SelfLoop { line: lineno, node: a });
            }
            raw_edges.push((a.min(b), a.max(b)));
        }

        let mut ids: Vec<u64> = raw_edges.iter().flat_map(|&(a, b)| [a, b]).collect();
        ids.sort_unstable();
        ids.dedup();
        let index_of: HashMap<u64, usize> =
            ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        let mut edges: Vec<(usize, usize)> =
            raw_edges.iter().map(|&(a, b)| (index_of[&a], index_of[&b])).collect();
        edges.sort_unstable();
        edges.dedup();
        Ok(Self::from_normalized_edges(ids.len(), &edges, ids))
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> u64 {
        self.m
    }

    #[inline]
    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i] as usize
    }

    /// Original label of node `i` as read from the input file.
    pub fn original_id(&self, i: usize) -> u64 {
        self.orig_ids[i]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        match &self.adjacency {
            Adjacency::Bits { words_per_row, bits } => {
                bits[i * words_per_row + j / 64] >> (j % 64) & 1 == 1
            }
            Adjacency::Lists(lists) => lists[i].binary_search(&(j as u32)).is_ok(),
        }
    }

    pub fn neighbors(&self, i: usize) -> Vec<usize> {
        match &self.adjacency {
            Adjacency::Bits { words_per_row, bits } => {
                let row = &bits[i * words_per_row..(i + 1) * words_per_row];
                let mut out = Vec::with_capacity(self.degrees[i] as usize);
                for (w, &word) in row.iter().enumerate() {
                    let mut word = word;
                    while word != 0 {
                        let bit = word.trailing_zeros() as usize;
                        out.push(w * 64 + bit);
                        word &= word - 1;
                    }
                }
                out
            }
            Adjacency::Lists(lists) => lists[i].iter().map(|&x| x as usize).collect(),
        }
    }

    /// Number of common neighbors of i and j.
    pub fn common_neighbors(&self, i: usize, j: usize) -> usize {
        match &self.adjacency {
            Adjacency::Bits { words_per_row, bits } => {
                let a = &bits[i * words_per_row..(i + 1) * words_per_row];
                let b = &bits[j * words_per_row..(j + 1) * words_per_row];
                a.iter().zip(b).map(|(x, y)| (x & y).count_ones() as usize).sum()
            }
            Adjacency::Lists(lists) => {
                let (a, b) = (&lists[i], &lists[j]);
                let (mut x, mut y, mut count) = (0, 0, 0);
                while x < a.len() && y < b.len() {
                    match a[x].cmp(&b[y]) {
                        std::cmp::Ordering::Less => x += 1,
                        std::cmp::Ordering::Greater => y += 1,
                        std::cmp::Ordering::Equal => {
                            count += 1;
                            x += 1;
                            y += 1;
                        }
                    }
                }
                count
            }
        }
    }

    /// Edges as sorted (min, max) pairs.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m as usize);
        for i in 0..self.n {
            for j in self.neighbors(i) {
                if j > i {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// rho-hat: the network moment of the edge motif, 2m / [n(n-1)].
    pub fn edge_density(&self) -> Result<f64> {
        if self.n < 2 {
            return Err(Error::GraphTooSmall { n: self.n, min: 2 });
        }
        Ok(2.0 * self.m as f64 / (self.n as f64 * (self.n as f64 - 1.0)))
    }

    /// Induced subgraph on `nodes`, relabeled to 0..|nodes| in set order.
    pub fn induced_subgraph(&self, nodes: &NodeSet) -> Result<Graph> {
        let sel = nodes.indices();
        if let Some(&bad) = sel.iter().find(|&&v| v >= self.n) {
            return Err(Error::NodeOutOfRange { index: bad, n: self.n });
        }
        let b = sel.len();
        let mut edges = Vec::new();
        for (bi, &vi) in sel.iter().enumerate() {
            for (bj, &vj) in sel.iter().enumerate().skip(bi + 1) {
                if self.has_edge(vi, vj) {
                    edges.push((bi, bj));
                }
            }
        }
        let orig = sel.iter().map(|&v| self.orig_ids[v]).collect();
        Ok(Self::from_normalized_edges(b, &edges, orig))
    }

    /// Connected components as sorted index lists.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut queue = vec![start];
            let mut comp = Vec::new();
            seen[start] = true;
            while let Some(v) = queue.pop() {
                comp.push(v);
                for u in self.neighbors(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push(u);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        components
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.connected_components().len() == 1
    }

    /// Induced subgraph on the largest component, nodes relabeled
    /// contiguously. Ties broken by the smallest minimum original id.
    pub fn largest_connected_component(&self) -> Graph {
        if self.n == 0 {
            return Graph::from_edges(0, &[]);
        }
        let best = self
            .connected_components()
            .into_iter()
            .min_by_key(|comp| {
                let min_orig = comp.iter().map(|&v| self.orig_ids[v]).min().unwrap();
                (std::cmp::Reverse(comp.len()), min_orig)
            })
            .unwrap();
        self.induced_subgraph(&NodeSet(best)).unwrap()
    }

    /// Canonical text serialization: sorted 0-indexed pairs, one per
    /// line, '\n'-terminated. Bit-exact round trips.
    pub fn to_canonical_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in self.edges() {
            writeln!(out, "{a} {b}").unwrap();
        }
        out
    }

    fn check_consistency(&self) -> bool {
        let degree_sum: u64 = self.degrees.iter().map(|&d| d as u64).sum();
        if degree_sum != 2 * self.m || self.orig_ids.len() != self.n {
            return false;
        }
        for i in 0..self.n {
            if self.has_edge(i, i) {
                return false;
            }
            for j in self.neighbors(i) {
                if !self.has_edge(j, i) {
                    return false;
                }
            }
        }
        true
    }

    // Small named graphs, used by the motif catalog and all over tests.

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        Graph::from_edges(n, &edges)
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Graph::from_edges(n, &edges)
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges)
    }

    /// Star with `leaves` leaves: node 0 is the center.
    pub fn star(leaves: usize) -> Graph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        Graph::from_edges(leaves + 1, &edges)
    }

    pub fn empty(n: usize) -> Graph {
        Graph::from_edges(n, &[])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn load(text: &str, options: LoadOptions) -> Result<Graph> {
        Graph::load_edge_list(std::io::Cursor::new(text), options)
    }

    #[test]
    fn load_dedups_edges() {
        let g = load("0 1\n1 2\n0 1\n", LoadOptions::default()).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
    }

    #[test]
    fn load_relabels_one_based_ids() {
        let g = load("1 2\n2 3\n", LoadOptions { index_base: 1, ..Default::default() }).unwrap();
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        assert_eq!((0..3).map(|i| g.original_id(i)).collect::<Vec<_>>(), vec![1, 2, 3]);
        assert!(g.has_edge(0, 1) && g.has_edge(1, 2) && !g.has_edge(0, 2));
    }

    #[test]
    fn load_rejects_malformed_line() {
        match load("a b\n", LoadOptions::default()) {
            Err(Error::EdgeListParse { line: 1, .. }) => {}
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn load_rejects_zero_id_with_base_one() {
        match load("0 1\n", LoadOptions { index_base: 1, ..Default::default() }) {
            Err(Error::IndexBase { line: 1, id: 0, base: 1 }) => {}
            other => panic!("expected index base error, got {other:?}"),
        }
    }

    #[test]
    fn self_loop_policy() {
        match load("3 3\n0 1\n", LoadOptions::default()) {
            Err(Error::SelfLoop { line: 1, node: 3 }) => {}
            other => panic!("expected self-loop error, got {other:?}"),
        }
        let g = load("3 3\n0 1\n", LoadOptions { drop_self_loops: true, ..Default::default() })
            .unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let g = load("# header\n\n0 1\n", LoadOptions::default()).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_density_values() {
        for n in 2..=8 {
            assert_eq!(Graph::complete(n).edge_density().unwrap(), 1.0);
        }
        assert_eq!(Graph::empty(4).edge_density().unwrap(), 0.0);
        assert_eq!(Graph::path(4).edge_density().unwrap(), 0.5);
        assert!(Graph::empty(1).edge_density().is_err());
    }

    #[test]
    fn induced_subgraph_cases() {
        let k4 = Graph::complete(4);
        let sub = k4.induced_subgraph(&NodeSet::new(vec![0, 1, 2]).unwrap()).unwrap();
        assert_eq!(sub.node_count(), 3);
        assert_eq!(sub.edge_count(), 3);

        let p4 = Graph::path(4);
        let sub = p4.induced_subgraph(&NodeSet::new(vec![0, 1, 3]).unwrap()).unwrap();
        assert_eq!(sub.edge_count(), 1);
        assert!(sub.has_edge(0, 1));

        let all = NodeSet::new((0..4).collect()).unwrap();
        let same = p4.induced_subgraph(&all).unwrap();
        assert_eq!(same.edges(), p4.edges());

        assert!(p4.induced_subgraph(&NodeSet::new(vec![0, 9]).unwrap()).is_err());
    }

    #[test]
    fn largest_component_selection() {
        let p4 = Graph::path(4);
        assert_eq!(p4.largest_connected_component().edges(), p4.edges());

        // K3 on {0,1,2} plus K2 on {3,4}.
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (3, 4)]);
        let lcc = g.largest_connected_component();
        assert_eq!(lcc.node_count(), 3);
        assert_eq!(lcc.edge_count(), 3);

        // Two K2 components; tie goes to the one containing node 0.
        let g = Graph::from_edges(4, &[(2, 3), (0, 1)]);
        let lcc = g.largest_connected_component();
        assert_eq!(lcc.node_count(), 2);
        assert_eq!(lcc.original_id(0), 0);

        assert_eq!(Graph::empty(0).largest_connected_component().node_count(), 0);
    }

    #[test]
    fn lcc_output_is_connected() {
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (3, 4), (4, 5), (5, 3), (5, 6)]);
        assert!(g.largest_connected_component().is_connected());
    }

    #[test]
    fn canonical_serialization_round_trips() {
        let g = Graph::from_edges(4, &[(2, 3), (0, 1), (1, 2)]);
        let text = g.to_canonical_edge_list();
        assert_eq!(text, "0 1\n1 2\n2 3\n");
        let back = load(&text, LoadOptions::default()).unwrap();
        assert_eq!(back.to_canonical_edge_list(), text);
    }

    #[test]
    fn neighbor_list_storage_matches_bitset_semantics() {
        // Force the list path through a graph just above the bitset cap
        // is too slow for a unit test; instead check both code paths on
        // the same small structure by constructing lists directly.
        let edges = [(0usize, 1usize), (1, 2), (2, 0), (2, 3)];
        let bits = Graph::from_edges(4, &edges);
        let mut lists: Vec<Vec<u32>> = vec![vec![]; 4];
        for &(a, b) in &edges {
            lists[a].push(b as u32);
            lists[b].push(a as u32);
        }
        for l in &mut lists {
            l.sort_unstable();
        }
        let list_graph = Graph {
            n: 4,
            m: 4,
            degrees: (0..4).map(|i| lists[i].len() as u32).collect(),
            adjacency: Adjacency::Lists(lists),
            orig_ids: (0..4).collect(),
        };
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(bits.has_edge(i, j), list_graph.has_edge(i, j));
            }
            assert_eq!(bits.neighbors(i), list_graph.neighbors(i));
            for j in 0..4 {
                assert_eq!(bits.common_neighbors(i, j), list_graph.common_neighbors(i, j));
            }
        }
    }

    proptest! {
        #[test]
        fn induced_induction_composes(seedbits in 0u64..1 << 15) {
            // 6-node graph from the low bits of the seed.
            let mut edges = Vec::new();
            let mut k = 0;
            for i in 0..6usize {
                for j in i + 1..6 {
                    if seedbits >> k & 1 == 1 {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            let g = Graph::from_edges(6, &edges);
            let outer = NodeSet::new(vec![0, 2, 3, 5]).unwrap();
            let inner = NodeSet::new(vec![1, 2, 3]).unwrap(); // indices into outer
            let once = g.induced_subgraph(&outer).unwrap();
            let twice = once.induced_subgraph(&inner).unwrap();
            let direct = g.induced_subgraph(&NodeSet::new(vec![2, 3, 5]).unwrap()).unwrap();
            prop_assert_eq!(twice.to_canonical_edge_list(), direct.to_canonical_edge_list());
        }
    }
}
