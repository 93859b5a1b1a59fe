//! Simple undirected graphs with dense vertex ids `0..n`.
//!
//! Adjacency is kept as sorted neighbor lists, plus an `n x n` bit matrix for
//! graphs up to [`MATRIX_LIMIT`] vertices so that edge queries are O(1) on the
//! sizes where the oracle and the verifier spend their time.

use std::fmt;

use thiserror::Error;

/// Largest vertex count for which the adjacency bit matrix is kept.
pub const MATRIX_LIMIT: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range (n = {1})")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

/// Square bit matrix used for O(1) adjacency tests.
#[derive(Clone, PartialEq, Eq)]
pub(crate) struct BitMatrix {
    n: usize,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub(crate) fn new(n: usize) -> Self {
        let words_per_row = n.div_ceil(64);
        BitMatrix { n, words_per_row, bits: vec![0; words_per_row * n] }
    }

    #[inline]
    pub(crate) fn set(&mut self, i: usize, j: usize) {
        self.bits[i * self.words_per_row + j / 64] |= 1 << (j % 64);
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.words_per_row + j / 64] >> (j % 64) & 1 == 1
    }
}

/// An undirected simple graph on vertices `0..n`.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<usize>>,
    matrix: Option<BitMatrix>,
}

impl Graph {
    /// Graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        let matrix = (n <= MATRIX_LIMIT).then(|| BitMatrix::new(n));
        Graph { n, m: 0, adj: vec![Vec::new(); n], matrix }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        g.sort_adjacency();
        Ok(g)
    }

    fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].push(v);
        self.adj[v].push(u);
        if let Some(m) = &mut self.matrix {
            m.set(u, v);
            m.set(v, u);
        }
        self.m += 1;
        Ok(())
    }

    fn sort_adjacency(&mut self) {
        for list in &mut self.adj {
            list.sort_unstable();
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match &self.matrix {
            Some(m) => m.get(u, v),
            None => self.adj[u].binary_search(&v).is_ok(),
        }
    }

    /// Neighbors of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    /// All edges as pairs `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.m);
        for u in 0..self.n {
            for &v in &self.adj[u] {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edge-set complement on the same vertex set.
    pub fn complement(&self) -> Graph {
        let mut edges = Vec::new();
        for u in 0..self.n {
            let mut it = self.adj[u].iter().copied().peekable();
            for v in u + 1..self.n {
                while it.peek().is_some_and(|&w| w < v) {
                    it.next();
                }
                if it.peek() != Some(&v) {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, &edges).expect("complement of a valid graph is valid")
    }

    /// Induced subgraph on `s`, re-indexed densely. Returns the subgraph plus
    /// the map back to original ids (`to_orig[new] = old`) and the forward map
    /// (`to_sub[old] = Some(new)` for `old` in `s`).
    pub fn induced_subgraph(&self, s: &[usize]) -> Result<InducedSubgraph, GraphError> {
        let mut sorted: Vec<usize> = s.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for &v in &sorted {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange(v, self.n));
            }
        }
        let mut to_sub = vec![None; self.n];
        for (new, &old) in sorted.iter().enumerate() {
            to_sub[old] = Some(new);
        }
        let mut edges = Vec::new();
        for (new_u, &old_u) in sorted.iter().enumerate() {
            for &old_v in &self.adj[old_u] {
                if old_v > old_u {
                    if let Some(new_v) = to_sub[old_v] {
                        edges.push((new_u, new_v));
                    }
                }
            }
        }
        let graph = Graph::from_edges(sorted.len(), &edges)?;
        Ok(InducedSubgraph { graph, to_orig: sorted, to_sub })
    }

    /// Connected components as sorted vertex lists, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut comps = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut head = 0;
            while head < comp.len() {
                let u = comp[head];
                head += 1;
                for &v in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Connected components of the complement, computed without materializing
    /// it: BFS where the frontier absorbs every unvisited non-neighbor.
    pub fn co_components(&self) -> Vec<Vec<usize>> {
        let mut comps = Vec::new();
        // Doubly linked list over unvisited vertices.
        let mut next: Vec<usize> = (1..=self.n).collect();
        let mut prev: Vec<usize> = (0..self.n).map(|v| v.wrapping_sub(1)).collect();
        let mut head = 0;
        let remove = |v: usize, head: &mut usize, next: &mut [usize], prev: &mut [usize]| {
            if *head == v {
                *head = next[v];
            }
            if prev[v] != usize::MAX {
                next[prev[v]] = next[v];
            }
            if next[v] < self.n {
                prev[next[v]] = prev[v];
            }
        };
        let mut mark = vec![false; self.n];
        while head < self.n {
            let start = head;
            remove(start, &mut head, &mut next, &mut prev);
            let mut comp = vec![start];
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &w in &self.adj[u] {
                    mark[w] = true;
                }
                let mut v = head;
                let mut grabbed = Vec::new();
                while v < self.n {
                    if !mark[v] {
                        grabbed.push(v);
                    }
                    v = next[v];
                }
                for &w in &self.adj[u] {
                    mark[w] = false;
                }
                for w in grabbed {
                    remove(w, &mut head, &mut next, &mut prev);
                    comp.push(w);
                    queue.push(w);
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.adj == other.adj
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Result of [`Graph::induced_subgraph`].
pub struct InducedSubgraph {
    pub graph: Graph,
    /// `to_orig[new] = old`
    pub to_orig: Vec<usize>,
    /// `to_sub[old] = Some(new)` iff `old` was selected
    pub to_sub: Vec<Option<usize>>,
}

/// Fixed small graphs used throughout the tests and fixtures.
pub mod fixtures {
    use super::Graph;

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((0, n - 1));
        Graph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).unwrap()
    }

    /// Star `K_{1,k}` with hub 0.
    pub fn star(k: usize) -> Graph {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::from_edges(k + 1, &edges).unwrap()
    }

    /// P4 `0-1-2-3` plus a universal vertex 4.
    pub fn gem() -> Graph {
        Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (0, 4), (1, 4), (2, 4), (3, 4)]).unwrap()
    }

    /// Complement of P5: a 5-cycle with one chord.
    pub fn house() -> Graph {
        fixtures_complement(&path(5))
    }

    /// Two 4-cycles sharing an edge: C6 `0..5` plus the chord 0-3.
    pub fn domino() -> Graph {
        Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]).unwrap()
    }

    /// `K_{1,3}` with every edge subdivided once: hub 0, middles 1..=3, tips 4..=6.
    pub fn spider() -> Graph {
        Graph::from_edges(7, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 5), (3, 6)]).unwrap()
    }

    fn fixtures_complement(g: &Graph) -> Graph {
        g.complement()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn build_and_query() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 3);
        assert!(g.has_edge(1, 0));
        assert!(!g.has_edge(0, 2));
        assert_eq!(g.neighbors(1), &[0, 2]);
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(3, &[(0, 3)]), Err(GraphError::VertexOutOfRange(3, 3)));
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        );
    }

    #[test]
    fn complement_examples() {
        assert_eq!(complete(3).complement(), Graph::empty(3));
        // C5 and P4 are self-complementary.
        assert_eq!(cycle(5).complement(), Graph::from_edges(5, &[(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]).unwrap());
        let p4c = path(4).complement();
        assert_eq!(p4c.m(), 3);
        assert_eq!(p4c.degree(0), 2);
    }

    #[test]
    fn induced_subgraph_examples() {
        let c5 = cycle(5);
        let sub = c5.induced_subgraph(&[0, 1, 2]).unwrap();
        assert_eq!(sub.graph, path(3));
        assert_eq!(sub.to_orig, vec![0, 1, 2]);

        let all = c5.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(all.graph, c5);

        let none = c5.induced_subgraph(&[]).unwrap();
        assert_eq!(none.graph.n(), 0);

        assert!(c5.induced_subgraph(&[7]).is_err());
    }

    #[test]
    fn components_and_co_components() {
        let g = Graph::from_edges(5, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3], vec![4]]);
        // complement of the above is connected
        assert_eq!(g.co_components().len(), 1);
        // complement of K3 has three co-components... i.e. K3 itself splits
        assert_eq!(complete(3).co_components(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(path(4).co_components().len(), 1);
    }

    #[test]
    fn matrix_and_list_agree() {
        let g = cycle(9);
        for u in 0..9 {
            for v in 0..9 {
                let expected = (u + 1) % 9 == v || (v + 1) % 9 == u;
                assert_eq!(g.has_edge(u, v), expected);
            }
        }
    }

    #[test]
    fn fixture_shapes() {
        assert_eq!(gem().m(), 7);
        assert_eq!(house().m(), 6);
        assert_eq!(domino().m(), 7);
        assert_eq!(spider().n(), 7);
        assert_eq!(star(3), Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap());
    }
}
