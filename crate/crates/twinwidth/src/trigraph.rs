//! Trigraphs: vertex sets with disjoint black and red edge sets, produced by
//! contracting vertices of a [`Graph`]. Each active vertex keeps the set of
//! original vertices it stands for.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TrigraphError {
    #[error("vertex {0} is not active")]
    Inactive(usize),
    #[error("cannot contract a vertex with itself ({0})")]
    EqualVertices(usize),
}

/// Edge color between two active vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    None,
    Black,
    Red,
}

/// A trigraph over original vertices `0..n0`. Vertices created by contraction
/// get fresh ids; `parts` maps each active vertex to the original vertices it
/// represents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trigraph {
    n0: usize,
    black: BTreeMap<usize, BTreeSet<usize>>,
    red: BTreeMap<usize, BTreeSet<usize>>,
    parts: BTreeMap<usize, Vec<usize>>,
}

impl Trigraph {
    /// The trigraph of a plain graph: all edges black, every part a singleton.
    pub fn from_graph(g: &Graph) -> Self {
        let mut black = BTreeMap::new();
        let mut red = BTreeMap::new();
        let mut parts = BTreeMap::new();
        for v in g.vertices() {
            black.insert(v, g.neighbors(v).iter().copied().collect());
            red.insert(v, BTreeSet::new());
            parts.insert(v, vec![v]);
        }
        Trigraph { n0: g.n(), black, red, parts }
    }

    pub fn n0(&self) -> usize {
        self.n0
    }

    pub fn active_count(&self) -> usize {
        self.parts.len()
    }

    pub fn is_active(&self, v: usize) -> bool {
        self.parts.contains_key(&v)
    }

    pub fn active_vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.parts.keys().copied()
    }

    /// The original vertices represented by `v` (sorted).
    pub fn part(&self, v: usize) -> &[usize] {
        &self.parts[&v]
    }

    pub fn black_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.black[&v]
    }

    pub fn red_neighbors(&self, v: usize) -> &BTreeSet<usize> {
        &self.red[&v]
    }

    pub fn red_degree(&self, v: usize) -> usize {
        self.red[&v].len()
    }

    pub fn max_red_degree(&self) -> usize {
        self.red.values().map(|s| s.len()).max().unwrap_or(0)
    }

    pub fn red_edge_count(&self) -> usize {
        self.red.values().map(|s| s.len()).sum::<usize>() / 2
    }

    /// Red edges as sorted pairs.
    pub fn red_edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (&u, nbrs) in &self.red {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_kind(&self, u: usize, v: usize) -> EdgeKind {
        if self.black[&u].contains(&v) {
            EdgeKind::Black
        } else if self.red[&u].contains(&v) {
            EdgeKind::Red
        } else {
            EdgeKind::None
        }
    }

    /// Contracts `u` and `v` into the fresh vertex `fresh`, returning the new
    /// trigraph (the receiver is unchanged). For every other active vertex
    /// `y`: the new edge is black iff `y` was a common black neighbor, absent
    /// iff `y` saw neither, and red otherwise.
    pub fn contract_into(&self, u: usize, v: usize, fresh: usize) -> Result<Trigraph, TrigraphError> {
        if u == v {
            return Err(TrigraphError::EqualVertices(u));
        }
        if !self.is_active(u) {
            return Err(TrigraphError::Inactive(u));
        }
        if !self.is_active(v) {
            return Err(TrigraphError::Inactive(v));
        }
        debug_assert!(!self.is_active(fresh), "fresh id {fresh} already active");

        let mut next = self.clone();
        let bu = next.black.remove(&u).unwrap();
        let bv = next.black.remove(&v).unwrap();
        let ru = next.red.remove(&u).unwrap();
        let rv = next.red.remove(&v).unwrap();
        let mut pu = next.parts.remove(&u).unwrap();
        let pv = next.parts.remove(&v).unwrap();

        let mut black_new = BTreeSet::new();
        let mut red_new = BTreeSet::new();
        let mut touched: BTreeSet<usize> = BTreeSet::new();
        touched.extend(bu.iter().chain(bv.iter()).chain(ru.iter()).chain(rv.iter()));
        touched.remove(&u);
        touched.remove(&v);
        for &y in &touched {
            let common_black = bu.contains(&y) && bv.contains(&y);
            if common_black {
                black_new.insert(y);
            } else {
                red_new.insert(y);
            }
        }
        for (&y, set) in next.black.iter_mut() {
            set.remove(&u);
            set.remove(&v);
            if black_new.contains(&y) {
                set.insert(fresh);
            }
        }
        for (&y, set) in next.red.iter_mut() {
            set.remove(&u);
            set.remove(&v);
            if red_new.contains(&y) {
                set.insert(fresh);
            }
        }
        pu.extend(pv);
        pu.sort_unstable();
        next.black.insert(fresh, black_new);
        next.red.insert(fresh, red_new);
        next.parts.insert(fresh, pu);
        Ok(next)
    }

    /// Checks the defining invariants against the original graph by brute
    /// force: black/red disjoint, parts partition `0..n0`, and each pair of
    /// parts colored by homogeneity of the bipartite relation in `g`.
    pub fn check_invariants(&self, g: &Graph) -> Result<(), String> {
        let mut seen = vec![false; self.n0];
        for part in self.parts.values() {
            for &x in part {
                if x >= self.n0 {
                    return Err(format!("original vertex {x} out of range"));
                }
                if seen[x] {
                    return Err(format!("original vertex {x} in two parts"));
                }
                seen[x] = true;
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err("parts do not cover the original vertex set".into());
        }
        let ids: Vec<usize> = self.active_vertices().collect();
        for &x in &ids {
            if let Some(y) = self.black[&x].intersection(&self.red[&x]).next() {
                return Err(format!("edge {x}-{y} is both black and red"));
            }
            for &y in self.black[&x].iter().chain(self.red[&x].iter()) {
                if !self.is_active(y) {
                    return Err(format!("edge {x}-{y} references inactive vertex"));
                }
            }
        }
        for (i, &x) in ids.iter().enumerate() {
            for &y in &ids[i + 1..] {
                let mut any_edge = false;
                let mut any_non_edge = false;
                for &a in self.part(x) {
                    for &b in self.part(y) {
                        if g.has_edge(a, b) {
                            any_edge = true;
                        } else {
                            any_non_edge = true;
                        }
                    }
                }
                let expected = match (any_edge, any_non_edge) {
                    (true, true) => EdgeKind::Red,
                    (true, false) => EdgeKind::Black,
                    (false, _) => EdgeKind::None,
                };
                if self.edge_kind(x, y) != expected {
                    return Err(format!(
                        "pair {x}-{y}: stored {:?}, brute force says {:?}",
                        self.edge_kind(x, y),
                        expected
                    ));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn contract_twins_in_p3() {
        // P3 0-1-2: contracting the false twins 0,2 leaves a black K2.
        let g = path(3);
        let h = Trigraph::from_graph(&g);
        let h2 = h.contract_into(0, 2, 3).unwrap();
        assert_eq!(h2.active_count(), 2);
        assert_eq!(h2.edge_kind(1, 3), EdgeKind::Black);
        assert_eq!(h2.red_edge_count(), 0);
        assert_eq!(h2.part(3), &[0, 2]);
        h2.check_invariants(&g).unwrap();
    }

    #[test]
    fn contract_adjacent_in_p3_makes_red() {
        let g = path(3);
        let h = Trigraph::from_graph(&g);
        let h2 = h.contract_into(0, 1, 3).unwrap();
        assert_eq!(h2.edge_kind(2, 3), EdgeKind::Red);
        assert_eq!(h2.max_red_degree(), 1);
        h2.check_invariants(&g).unwrap();
    }

    #[test]
    fn contract_k2_to_point() {
        let g = complete(2);
        let h = Trigraph::from_graph(&g);
        let h2 = h.contract_into(0, 1, 2).unwrap();
        assert_eq!(h2.active_count(), 1);
        assert_eq!(h2.red_edge_count(), 0);
        h2.check_invariants(&g).unwrap();
    }

    #[test]
    fn contract_is_commutative_up_to_fresh_id() {
        let g = gem();
        let h = Trigraph::from_graph(&g);
        let a = h.contract_into(1, 3, 5).unwrap();
        let b = h.contract_into(3, 1, 5).unwrap();
        assert_eq!(a.part(5), b.part(5));
        let ids: Vec<usize> = a.active_vertices().collect();
        for &x in &ids {
            for &y in &ids {
                if x != y {
                    assert_eq!(a.edge_kind(x, y), b.edge_kind(x, y));
                }
            }
        }
    }

    #[test]
    fn contract_rejects_bad_input() {
        let h = Trigraph::from_graph(&path(3));
        assert_eq!(h.contract_into(0, 0, 3), Err(TrigraphError::EqualVertices(0)));
        assert_eq!(h.contract_into(0, 7, 3), Err(TrigraphError::Inactive(7)));
    }

    #[test]
    fn red_stays_red() {
        // contract 0,1 in P4 -> red (4,2); then contracting 4,2 keeps a red
        // edge to 3 because red edges never turn black.
        let g = path(4);
        let h = Trigraph::from_graph(&g).contract_into(0, 1, 4).unwrap();
        assert_eq!(h.edge_kind(4, 2), EdgeKind::Red);
        let h2 = h.contract_into(4, 2, 5).unwrap();
        assert_eq!(h2.edge_kind(5, 3), EdgeKind::Red);
        h2.check_invariants(&g).unwrap();
    }
}
