//! Permutation graph machinery: realisers (pairs of linear orders whose
//! inversions are the edges), recognition via transitive orientation of the
//! prime quotients, extremal vertices, interval queries, permutation diagram
//! layout, and the realiser built from a 1-contraction sequence.

use std::collections::{BTreeSet, HashMap, VecDeque};

use thiserror::Error;

use crate::graph::Graph;
use crate::modular::{modular_decomposition, MDTree, ModuleKind, NodeId};
use crate::sequence::{verify_sequence, ContractionSequence};

/// Two linear orders on the vertex set; `u` and `v` are adjacent in the
/// realised graph iff the orders disagree on them. Positions are 1-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Realiser {
    n: usize,
    sigma: Vec<usize>,
    tau: Vec<usize>,
}

impl Realiser {
    /// Builds a realiser from the two orders given as vertex lists.
    pub fn from_orders(sigma_order: &[usize], tau_order: &[usize]) -> Self {
        let n = sigma_order.len();
        assert_eq!(n, tau_order.len());
        let mut sigma = vec![0; n];
        let mut tau = vec![0; n];
        for (i, &v) in sigma_order.iter().enumerate() {
            sigma[v] = i + 1;
        }
        for (i, &v) in tau_order.iter().enumerate() {
            tau[v] = i + 1;
        }
        let r = Realiser { n, sigma, tau };
        debug_assert!(r.sigma.iter().all(|&p| p >= 1 && p <= n));
        r
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// 1-based position of `v` in sigma.
    pub fn sigma_pos(&self, v: usize) -> usize {
        self.sigma[v]
    }

    /// 1-based position of `v` in tau.
    pub fn tau_pos(&self, v: usize) -> usize {
        self.tau[v]
    }

    /// Vertices in sigma order.
    pub fn sigma_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.n];
        for v in 0..self.n {
            order[self.sigma[v] - 1] = v;
        }
        order
    }

    /// Vertices in tau order.
    pub fn tau_order(&self) -> Vec<usize> {
        let mut order = vec![0; self.n];
        for v in 0..self.n {
            order[self.tau[v] - 1] = v;
        }
        order
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        u != v
            && (self.sigma[u] < self.sigma[v]) != (self.tau[u] < self.tau[v])
    }

    /// Exchanging the two orders realises the same graph.
    pub fn swapped(&self) -> Realiser {
        Realiser { n: self.n, sigma: self.tau.clone(), tau: self.sigma.clone() }
    }

    /// Reversing both orders realises the same graph.
    pub fn reversed_both(&self) -> Realiser {
        Realiser {
            n: self.n,
            sigma: self.sigma.iter().map(|&p| self.n + 1 - p).collect(),
            tau: self.tau.iter().map(|&p| self.n + 1 - p).collect(),
        }
    }

    /// Reversing one order realises the complement graph.
    pub fn reversed_tau(&self) -> Realiser {
        Realiser {
            n: self.n,
            sigma: self.sigma.clone(),
            tau: self.tau.iter().map(|&p| self.n + 1 - p).collect(),
        }
    }
}

/// A position interval in one of the two orders, 1-based inclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderSel {
    Sigma,
    Tau,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntervalRef {
    pub order: OrderSel,
    pub lo: usize,
    pub hi: usize,
}

impl IntervalRef {
    pub fn vertices(&self, r: &Realiser) -> Vec<usize> {
        assert!(1 <= self.lo && self.lo <= self.hi && self.hi <= r.n());
        let order = match self.order {
            OrderSel::Sigma => r.sigma_order(),
            OrderSel::Tau => r.tau_order(),
        };
        order[self.lo - 1..self.hi].to_vec()
    }
}

/// The inversion graph of a realiser, by pair scan.
pub fn graph_from_realiser(r: &Realiser) -> Graph {
    let mut edges = Vec::new();
    for u in 0..r.n() {
        for v in u + 1..r.n() {
            if r.adjacent(u, v) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(r.n(), &edges).unwrap()
}

/// The (at most 4) vertices sitting first or last in sigma or tau.
pub fn extremal_vertices(r: &Realiser) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    if r.n() == 0 {
        return out;
    }
    let so = r.sigma_order();
    let to = r.tau_order();
    out.insert(so[0]);
    out.insert(*so.last().unwrap());
    out.insert(to[0]);
    out.insert(*to.last().unwrap());
    out
}

/// True iff `s` occupies a contiguous position range in both orders. A common
/// interval is always a module of the realised graph.
pub fn is_common_interval_module(g: &Graph, r: &Realiser, s: &[usize]) -> bool {
    assert!(!s.is_empty(), "interval query on an empty set");
    let contiguous = |pos: &dyn Fn(usize) -> usize| {
        let lo = s.iter().map(|&v| pos(v)).min().unwrap();
        let hi = s.iter().map(|&v| pos(v)).max().unwrap();
        hi - lo + 1 == s.len()
    };
    let common = contiguous(&|v| r.sigma_pos(v)) && contiguous(&|v| r.tau_pos(v));
    if common {
        debug_assert!(
            (0..g.n()).filter(|v| !s.contains(v)).all(|x| {
                let adj = g.has_edge(x, s[0]);
                s.iter().all(|&v| g.has_edge(x, v) == adj)
            }),
            "common interval {s:?} is not a module"
        );
    }
    common
}

/// One line segment per vertex between two horizontal rails: x positions are
/// the 1-based slots in sigma (top) and tau (bottom).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Segment {
    pub vertex: usize,
    pub top: usize,
    pub bottom: usize,
}

pub fn diagram_layout(r: &Realiser) -> Vec<Segment> {
    (0..r.n()).map(|v| Segment { vertex: v, top: r.sigma_pos(v), bottom: r.tau_pos(v) }).collect()
}

// ---------------------------------------------------------------------------
// Recognition: transitive orientation by forcing closure
// ---------------------------------------------------------------------------

/// Directed assignment over unordered pairs: key is (min, max), value is
/// true iff the edge is oriented min -> max.
type Orientation = HashMap<(usize, usize), bool>;

fn orient_get(o: &Orientation, a: usize, b: usize) -> Option<bool> {
    let key = (a.min(b), a.max(b));
    o.get(&key).map(|&fwd| if a < b { fwd } else { !fwd })
}

fn orient_set(o: &mut Orientation, a: usize, b: usize) {
    let key = (a.min(b), a.max(b));
    o.insert(key, a < b);
}

/// Forcing closure for a transitive orientation of the edges of `g`:
/// orienting a->b forces a->c whenever ac is an edge but bc is not, and c->b
/// whenever cb is an edge but ca is not. A conflict proves `g` is not a
/// comparability graph. On a prime graph a single seed reaches every edge;
/// the caller double-checks the result, so under-forcing on non-prime input
/// can only lead to a rejected candidate, never a wrong accept.
fn transitive_orientation(g: &Graph) -> Option<Orientation> {
    let mut orient = Orientation::new();
    let mut queue: VecDeque<(usize, usize)> = VecDeque::new();
    for (u, v) in g.edges() {
        if orient_get(&orient, u, v).is_some() {
            continue;
        }
        orient_set(&mut orient, u, v);
        queue.push_back((u, v));
        while let Some((a, b)) = queue.pop_front() {
            for &c in g.neighbors(a) {
                if c != b && !g.has_edge(b, c) {
                    match orient_get(&orient, a, c) {
                        None => {
                            orient_set(&mut orient, a, c);
                            queue.push_back((a, c));
                        }
                        Some(true) => {}
                        Some(false) => return None,
                    }
                }
            }
            for &c in g.neighbors(b) {
                if c != a && !g.has_edge(a, c) {
                    match orient_get(&orient, c, b) {
                        None => {
                            orient_set(&mut orient, c, b);
                            queue.push_back((c, b));
                        }
                        Some(true) => {}
                        Some(false) => return None,
                    }
                }
            }
        }
    }
    Some(orient)
}

/// Forcing closure on the complement without materializing it. Directions
/// are held in a byte matrix; only in/out degree counts are returned. The
/// forcing candidates for a non-edge a->b are read off the neighbor lists of
/// `g` itself, which keeps the pass near-linear in the number of non-edges
/// for sparse graphs.
struct CoOrientation {
    /// for each vertex, number of co-edges oriented into it
    indeg: Vec<usize>,
}

fn co_orientation(g: &Graph) -> Option<CoOrientation> {
    let n = g.n();
    // 0 unassigned, 1 forward (min->max), 2 backward
    let mut status = vec![0u8; n * n];
    let mut indeg = vec![0usize; n];
        let mut queue: VecDeque<(usize, usize)> = VecDeque::new();

    let idx = |a: usize, b: usize| a.min(b) * n + a.max(b);
    let get = |status: &[u8], a: usize, b: usize| -> Option<bool> {
        match status[idx(a, b)] {
            0 => None,
            s => Some((s == 1) == (a < b)),
        }
    };

    let assign = |status: &mut [u8],
                      indeg: &mut [usize],
                      queue: &mut VecDeque<(usize, usize)>,
                      a: usize,
                      b: usize|
     -> bool {
        match get(status, a, b) {
            Some(true) => true,
            Some(false) => false,
            None => {
                status[idx(a, b)] = if a < b { 1 } else { 2 };
                indeg[b] += 1;
                queue.push_back((a, b));
                true
            }
        }
    };

    for u in 0..n {
        for v in u + 1..n {
            if g.has_edge(u, v) || get(&status, u, v).is_some() {
                continue;
            }
            assign(&mut status, &mut indeg, &mut queue, u, v);
            while let Some((a, b)) = queue.pop_front() {
                // a->b forces a->c for co-edges ac with bc an edge of g
                for &c in g.neighbors(b) {
                    if c != a && !g.has_edge(a, c) {
                        if !assign(&mut status, &mut indeg, &mut queue, a, c) {
                            return None;
                        }
                    }
                }
                // and c->b for co-edges cb with ca an edge of g
                for &c in g.neighbors(a) {
                    if c != b && !g.has_edge(c, b) {
                        if !assign(&mut status, &mut indeg, &mut queue, c, b) {
                            return None;
                        }
                    }
                }
            }
        }
    }
    Some(CoOrientation { indeg })
}

/// Realiser of a prime graph from transitive orientations of the graph and
/// its complement, read off as in/out degree scores of the combined
/// tournaments. Distinct scores certify the tournaments are transitive.
fn realise_prime(q: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = q.n();
    let orient = transitive_orientation(q)?;
    let co = co_orientation(q)?;

    let mut edge_in = vec![0usize; n];
    let mut edge_out = vec![0usize; n];
    for (&(u, v), &fwd) in &orient {
        let (a, b) = if fwd { (u, v) } else { (v, u) };
        edge_out[a] += 1;
        edge_in[b] += 1;
    }

    let order_by_score = |score: Vec<usize>| -> Option<Vec<usize>> {
        let mut slots = vec![usize::MAX; n];
        for (v, &s) in score.iter().enumerate() {
            if s >= n || slots[s] != usize::MAX {
                return None;
            }
            slots[s] = v;
        }
        Some(slots)
    };

    let sigma_score: Vec<usize> = (0..n).map(|v| edge_in[v] + co.indeg[v]).collect();
    let tau_score: Vec<usize> = (0..n).map(|v| edge_out[v] + co.indeg[v]).collect();
    let sigma_order = order_by_score(sigma_score)?;
    let tau_order = order_by_score(tau_score)?;
    Some((sigma_order, tau_order))
}

/// Checks that the realiser's inversion set is exactly the edge set of `g`,
/// in O(n log n + m): count the inversions with a Fenwick tree and confirm
/// every edge of `g` is one of them.
fn realiser_matches(g: &Graph, r: &Realiser) -> bool {
    let n = g.n();
    if r.n() != n {
        return false;
    }
    for (u, v) in g.edges() {
        if !r.adjacent(u, v) {
            return false;
        }
    }
    // perm[i] = tau position of the vertex at sigma position i (0-based)
    let so = r.sigma_order();
    let perm: Vec<usize> = so.iter().map(|&v| r.tau_pos(v) - 1).collect();
    let mut fen = vec![0usize; n + 1];
    let mut inversions = 0usize;
    for (i, &p) in perm.iter().enumerate() {
        // count previous entries greater than p
        let mut k = p + 1;
        let mut below = 0;
        while k > 0 {
            below += fen[k];
            k -= k & k.wrapping_neg();
        }
        inversions += i - below;
        let mut k = p + 1;
        while k <= n {
            fen[k] += 1;
            k += k & k.wrapping_neg();
        }
    }
    inversions == g.m()
}

/// Computes a realiser of `g`, or `None` iff `g` is not a permutation graph.
/// Works through the modular decomposition: degenerate nodes concatenate
/// child realisers, prime quotients are oriented by forcing. The round trip
/// against `g` is always checked before returning.
pub fn compute_realiser(g: &Graph) -> Option<Realiser> {
    if g.n() == 0 {
        return Some(Realiser::from_orders(&[], &[]));
    }
    let t = modular_decomposition(g);
    compute_realiser_with_tree(g, &t)
}

pub fn compute_realiser_with_tree(g: &Graph, t: &MDTree) -> Option<Realiser> {
    let (so, to) = realise_node(g, t, t.root())?;
    let r = Realiser::from_orders(&so, &to);
    realiser_matches(g, &r).then_some(r)
}

fn realise_node(g: &Graph, t: &MDTree, id: NodeId) -> Option<(Vec<usize>, Vec<usize>)> {
    if let Some(v) = t.leaf_vertex(id) {
        return Some((vec![v], vec![v]));
    }
    let children = t.children(id);
    let parts: Vec<(Vec<usize>, Vec<usize>)> =
        children.iter().map(|&c| realise_node(g, t, c)).collect::<Option<_>>()?;
    match t.kind(id).unwrap() {
        ModuleKind::Parallel => {
            let sigma: Vec<usize> = parts.iter().flat_map(|p| p.0.iter().copied()).collect();
            let tau: Vec<usize> = parts.iter().flat_map(|p| p.1.iter().copied()).collect();
            Some((sigma, tau))
        }
        ModuleKind::Series => {
            let sigma: Vec<usize> = parts.iter().flat_map(|p| p.0.iter().copied()).collect();
            let tau: Vec<usize> = parts.iter().rev().flat_map(|p| p.1.iter().copied()).collect();
            Some((sigma, tau))
        }
        ModuleKind::Prime => {
            let q = t.quotient(id).unwrap();
            let (qs, qt) = realise_prime(q)?;
            let sigma: Vec<usize> = qs.iter().flat_map(|&i| parts[i].0.iter().copied()).collect();
            let tau: Vec<usize> = qt.iter().flat_map(|&i| parts[i].1.iter().copied()).collect();
            Some((sigma, tau))
        }
    }
}

// ---------------------------------------------------------------------------
// Realiser from a 1-contraction sequence
// ---------------------------------------------------------------------------

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BuildRealiserError {
    #[error("sequence is not a complete 1-sequence: {0}")]
    NotWidthOne(String),
    #[error("internal: {0}")]
    Internal(String),
}

/// Builds a realiser of `g` from a complete width-1 contraction sequence,
/// following the decomposition read off the 3-vertex trigraph of the
/// sequence: the part not incident to the red edge is a module M, the
/// sequence restricts to G-M and G[M], and the two realisers are concatenated
/// according to how M attaches (universal, isolated, or against the final
/// split of G-M).
///
/// The result satisfies: every part of every intermediate trigraph is an
/// interval of sigma or tau, and for a red edge the union of the endpoint
/// parts is an interval of one order while both parts are intervals of the
/// other.
pub fn build_realiser_from_sequence(
    g: &Graph,
    seq: &ContractionSequence,
) -> Result<Realiser, BuildRealiserError> {
    match verify_sequence(g, seq, 1) {
        Ok(rep) if rep.ok && rep.complete => {}
        Ok(rep) => {
            return Err(BuildRealiserError::NotWidthOne(format!(
                "verification failed: {:?}, complete: {}",
                rep.violation, rep.complete
            )))
        }
        Err(e) => return Err(BuildRealiserError::NotWidthOne(e.to_string())),
    }
    let steps: Vec<(usize, usize)> = seq.steps.clone();
    let (so, to) = build_rec(g, &steps)?;
    let r = Realiser::from_orders(&so, &to);
    if !realiser_matches(g, &r) {
        return Err(BuildRealiserError::Internal("constructed orders do not realise the graph".into()));
    }
    Ok(r)
}

/// Recursive construction on a local graph with a complete local sequence.
fn build_rec(g: &Graph, steps: &[(usize, usize)]) -> Result<(Vec<usize>, Vec<usize>), BuildRealiserError> {
    let n = g.n();
    if n <= 3 {
        return tiny_realiser(g).ok_or_else(|| BuildRealiserError::Internal("no realiser for <=3 vertices".into()));
    }

    // Simulate down to 3 parts and read off M.
    let mut parts: HashMap<usize, Vec<usize>> = (0..n).map(|v| (v, vec![v])).collect();
    for (k, &(u, v)) in steps.iter().enumerate() {
        if parts.len() == 3 {
            break;
        }
        let mut merged = parts.remove(&u).ok_or_else(|| BuildRealiserError::Internal("bad id".into()))?;
        let mut right = parts.remove(&v).ok_or_else(|| BuildRealiserError::Internal("bad id".into()))?;
        merged.append(&mut right);
        merged.sort_unstable();
        parts.insert(n + k, merged);
    }
    let ids: Vec<usize> = parts.keys().copied().collect();
    debug_assert_eq!(ids.len(), 3);
    // find the red pair, if any: parts with a non-homogeneous relation
    let rel = |a: &Vec<usize>, b: &Vec<usize>| -> (bool, bool) {
        let mut any = false;
        let mut non = false;
        for &x in a {
            for &y in b {
                if g.has_edge(x, y) {
                    any = true;
                } else {
                    non = true;
                }
            }
        }
        (any, non)
    };
    let mut sorted_ids = ids.clone();
    sorted_ids.sort_unstable();
    let mut red_pair: Option<(usize, usize)> = None;
    for i in 0..3 {
        for j in i + 1..3 {
            let (any, non) = rel(&parts[&sorted_ids[i]], &parts[&sorted_ids[j]]);
            if any && non {
                red_pair = Some((sorted_ids[i], sorted_ids[j]));
            }
        }
    }
    let (a_id, b_id) = red_pair.unwrap_or((sorted_ids[0], sorted_ids[1]));
    let v_id = *sorted_ids.iter().find(|&&x| x != a_id && x != b_id).unwrap();
    let module: Vec<usize> = parts[&v_id].clone();

    // Split the sequence.
    let in_module = |v: usize| module.binary_search(&v).is_ok();
    let rest: Vec<usize> = (0..n).filter(|&v| !in_module(v)).collect();
    let (g_m, seq_m) = restrict(g, steps, &module);
    let (g_r, seq_r) = restrict(g, steps, &rest);
    let (s2, t2) = build_rec(&g_m, &seq_m)?;
    let (s1, t1) = build_rec(&g_r, &seq_r)?;
    // lift local ids back to g's ids
    let lift = |order: Vec<usize>, map: &[usize]| -> Vec<usize> { order.into_iter().map(|v| map[v]).collect() };
    let s2 = lift(s2, &module);
    let t2 = lift(t2, &module);
    let mut s1 = lift(s1, &rest);
    let mut t1 = lift(t1, &rest);

    // How does M attach?
    let neighbors: Vec<usize> = rest.iter().copied().filter(|&x| g.has_edge(x, module[0])).collect();
    debug_assert!(
        rest.iter().all(|&x| {
            let adj = g.has_edge(x, module[0]);
            module.iter().all(|&v| g.has_edge(x, v) == adj)
        }),
        "M is not a module"
    );
    if neighbors.len() == rest.len() {
        // universal: sigma1 . sigma2, tau2 . tau1
        let sigma: Vec<usize> = s1.iter().chain(s2.iter()).copied().collect();
        let tau: Vec<usize> = t2.iter().chain(t1.iter()).copied().collect();
        return Ok((sigma, tau));
    }
    if neighbors.is_empty() {
        let sigma: Vec<usize> = s1.iter().chain(s2.iter()).copied().collect();
        let tau: Vec<usize> = t1.iter().chain(t2.iter()).copied().collect();
        return Ok((sigma, tau));
    }

    // General case: B = N(M), A = non-neighbors; both are intervals of a
    // common order of (s1, t1), after possibly reversing both orders.
    let is_b = |v: usize| neighbors.binary_search(&v).is_ok();
    let block_of = |order: &[usize]| -> Option<bool> {
        // Some(true) if order = B-block then A-block, Some(false) if A then B
        let k = order.iter().take_while(|&&v| is_b(v)).count();
        if k > 0 && order[k..].iter().all(|&v| !is_b(v)) {
            return Some(true);
        }
        let k = order.iter().take_while(|&&v| !is_b(v)).count();
        if k > 0 && order[k..].iter().all(|&v| is_b(v)) {
            return Some(false);
        }
        None
    };

    // try sigma1 first, then tau1 (swapping the construction's roles)
    for attempt in 0..2 {
        let (first, second): (&mut Vec<usize>, &mut Vec<usize>) = if attempt == 0 { (&mut s1, &mut t1) } else { (&mut t1, &mut s1) };
        match block_of(first) {
            Some(b_first) => {
                if !b_first {
                    first.reverse();
                    second.reverse();
                }
                let bs: Vec<usize> = first.iter().copied().filter(|&v| is_b(v)).collect();
                let as_: Vec<usize> = first.iter().copied().filter(|&v| !is_b(v)).collect();
                let (sigma, tau) = if attempt == 0 {
                    let sigma: Vec<usize> = bs.iter().chain(s2.iter()).chain(as_.iter()).copied().collect();
                    let tau: Vec<usize> = t2.iter().chain(t1.iter()).copied().collect();
                    (sigma, tau)
                } else {
                    let tau: Vec<usize> = bs.iter().chain(t2.iter()).chain(as_.iter()).copied().collect();
                    let sigma: Vec<usize> = s2.iter().chain(s1.iter()).copied().collect();
                    (sigma, tau)
                };
                return Ok((sigma, tau));
            }
            None => continue,
        }
    }
    Err(BuildRealiserError::Internal(
        "final split of G-M is not an interval of either order".into(),
    ))
}

/// Restriction of a sequence to an induced subgraph: keep the steps whose
/// both sides intersect `set`, tracked through the part relabeling.
fn restrict(g: &Graph, steps: &[(usize, usize)], set: &[usize]) -> (Graph, Vec<(usize, usize)>) {
    let sub = g.induced_subgraph(set).expect("valid subset");
    let k = set.len();
    let n = g.n();
    // handle[current global id] = Some(current local id)
    let mut handle: HashMap<usize, usize> = HashMap::new();
    for (local, &orig) in set.iter().enumerate() {
        handle.insert(orig, local);
    }
    let mut out = Vec::new();
    let mut fresh_local = k;
    for (idx, &(u, v)) in steps.iter().enumerate() {
        let z = n + idx;
        let hu = handle.remove(&u);
        let hv = handle.remove(&v);
        match (hu, hv) {
            (Some(a), Some(b)) => {
                out.push((a, b));
                handle.insert(z, fresh_local);
                fresh_local += 1;
            }
            (Some(a), None) => {
                handle.insert(z, a);
            }
            (None, Some(b)) => {
                handle.insert(z, b);
            }
            (None, None) => {}
        }
    }
    (sub.graph, out)
}

/// Deterministic realiser for a graph on at most 3 vertices: first pair of
/// orders, in lexicographic order, whose inversions match the edges.
fn tiny_realiser(g: &Graph) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    if n == 0 {
        return Some((vec![], vec![]));
    }
    let mut sigmas = Vec::new();
    let mut buf: Vec<usize> = (0..n).collect();
    permute(&mut buf, 0, &mut |p| sigmas.push(p.to_vec()));
    sigmas.sort();
    for sigma in &sigmas {
        for tau in &sigmas {
            let r = Realiser::from_orders(sigma, tau);
            if (0..n).all(|u| (u + 1..n).all(|v| r.adjacent(u, v) == g.has_edge(u, v))) {
                return Some((sigma.clone(), tau.clone()));
            }
        }
    }
    None
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;

    #[test]
    fn graph_from_realiser_examples() {
        let n = 5;
        let id: Vec<usize> = (0..n).collect();
        let rev: Vec<usize> = (0..n).rev().collect();
        assert_eq!(graph_from_realiser(&Realiser::from_orders(&id, &id)), Graph::empty(n));
        assert_eq!(graph_from_realiser(&Realiser::from_orders(&id, &rev)), complete(n));

        // sigma identity, tau = (2,4,1,3) gives a P4
        let r = Realiser::from_orders(&[0, 1, 2, 3], &[2, 0, 3, 1]);
        let g = graph_from_realiser(&r);
        assert_eq!(g.edges(), vec![(0, 2), (1, 2), (1, 3)]);
        assert_eq!(g.m(), 3);
        // it is a path: degrees 1,2,2,1
        let mut degs: Vec<usize> = (0..4).map(|v| g.degree(v)).collect();
        degs.sort_unstable();
        assert_eq!(degs, vec![1, 1, 2, 2]);
    }

    #[test]
    fn c4_from_known_orders() {
        // sigma = identity, tau = (3,4,1,2)
        let r = Realiser::from_orders(&[0, 1, 2, 3], &[2, 3, 0, 1]);
        let g = graph_from_realiser(&r);
        assert_eq!(g.edges(), vec![(0, 2), (0, 3), (1, 2), (1, 3)]);
    }

    #[test]
    fn compute_realiser_round_trips() {
        for g in [path(4), cycle(4), gem(), star(3), complete(5), path(7), Graph::empty(3), house()] {
            let r = compute_realiser(&g).unwrap_or_else(|| panic!("no realiser for {g:?}"));
            assert_eq!(graph_from_realiser(&r), g, "round trip failed for {g:?}");
        }
    }

    #[test]
    fn c5_has_no_realiser() {
        assert!(compute_realiser(&cycle(5)).is_none());
        // C6 is not a permutation graph either (it contains no AT but its
        // complement forcing conflicts)
        assert!(compute_realiser(&cycle(6)).is_none());
    }

    #[test]
    fn spider_has_no_realiser() {
        // the subdivided claw has an asteroidal triple
        assert!(compute_realiser(&spider()).is_none());
    }

    #[test]
    fn extremal_vertices_examples() {
        let one = Realiser::from_orders(&[0], &[0]);
        assert_eq!(extremal_vertices(&one), BTreeSet::from([0]));

        let id: Vec<usize> = (0..5).collect();
        let rev: Vec<usize> = (0..5).rev().collect();
        let r = Realiser::from_orders(&id, &rev);
        assert_eq!(extremal_vertices(&r), BTreeSet::from([0, 4]));

        let p4 = Realiser::from_orders(&[0, 1, 2, 3], &[2, 0, 3, 1]);
        assert_eq!(extremal_vertices(&p4), BTreeSet::from([0, 1, 2, 3]));
    }

    #[test]
    fn common_interval_examples() {
        let r = Realiser::from_orders(&[0, 1, 2, 3], &[2, 0, 3, 1]);
        let g = graph_from_realiser(&r);
        let all: Vec<usize> = (0..4).collect();
        assert!(is_common_interval_module(&g, &r, &all));
        for v in 0..4 {
            assert!(is_common_interval_module(&g, &r, &[v]));
        }
        // 0,1 are sigma-consecutive but not tau-consecutive
        assert!(!is_common_interval_module(&g, &r, &[0, 1]));
    }

    #[test]
    fn interval_ref_reads_positions() {
        let r = Realiser::from_orders(&[3, 1, 0, 2], &[0, 1, 2, 3]);
        let iv = IntervalRef { order: OrderSel::Sigma, lo: 2, hi: 3 };
        assert_eq!(iv.vertices(&r), vec![1, 0]);
        let iv = IntervalRef { order: OrderSel::Tau, lo: 1, hi: 2 };
        assert_eq!(iv.vertices(&r), vec![0, 1]);
    }

    #[test]
    fn diagram_layout_shapes() {
        let id: Vec<usize> = (0..3).collect();
        let segs = diagram_layout(&Realiser::from_orders(&id, &id));
        assert!(segs.iter().all(|s| s.top == s.bottom));
        let rev: Vec<usize> = (0..3).rev().collect();
        let segs = diagram_layout(&Realiser::from_orders(&id, &rev));
        assert_eq!(segs[0], Segment { vertex: 0, top: 1, bottom: 3 });
        // P4 realiser has exactly 3 crossings
        let r = Realiser::from_orders(&[0, 1, 2, 3], &[2, 0, 3, 1]);
        let segs = diagram_layout(&r);
        let mut crossings = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                if (segs[i].top < segs[j].top) != (segs[i].bottom < segs[j].bottom) {
                    crossings += 1;
                }
            }
        }
        assert_eq!(crossings, 3);
    }

    #[test]
    fn complement_duality() {
        for g in [path(4), gem(), star(4), cycle(4)] {
            let r = compute_realiser(&g).unwrap();
            assert_eq!(graph_from_realiser(&r.reversed_tau()), g.complement(), "{g:?}");
        }
    }

    #[test]
    fn symmetries_realise_same_graph() {
        let g = gem();
        let r = compute_realiser(&g).unwrap();
        for s in [r.swapped(), r.reversed_both(), r.swapped().reversed_both()] {
            assert_eq!(graph_from_realiser(&s), g);
        }
    }

    #[test]
    fn build_realiser_from_p4_sequence() {
        let g = path(4);
        let seq = ContractionSequence::new(4, vec![(0, 1), (4, 2), (5, 3)], 1);
        let r = build_realiser_from_sequence(&g, &seq).unwrap();
        assert_eq!(graph_from_realiser(&r), g);
    }

    #[test]
    fn build_realiser_from_p3_sequence_keeps_interval() {
        // P3 0-1-2 contracted as (0,2) then (3,1): {0,2} must end up a
        // common interval
        let g = path(3);
        let seq = ContractionSequence::new(3, vec![(0, 2), (3, 1)], 1);
        let r = build_realiser_from_sequence(&g, &seq).unwrap();
        assert_eq!(graph_from_realiser(&r), g);
        assert!(is_common_interval_module(&g, &r, &[0, 2]));
    }

    #[test]
    fn build_realiser_k2() {
        let g = complete(2);
        let seq = ContractionSequence::new(2, vec![(0, 1)], 1);
        let r = build_realiser_from_sequence(&g, &seq).unwrap();
        assert_eq!(graph_from_realiser(&r), g);
    }

    #[test]
    fn build_realiser_rejects_bad_sequence() {
        let g = cycle(5);
        let all = crate::oracle::enumerate_complete_sequences(5);
        let seq = ContractionSequence::new(5, all[0].clone(), 1);
        assert!(matches!(
            build_realiser_from_sequence(&g, &seq),
            Err(BuildRealiserError::NotWidthOne(_))
        ));
    }

    #[test]
    fn random_realisers_round_trip() {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..60 {
            let n = rng.gen_range(1..=40);
            let mut sigma: Vec<usize> = (0..n).collect();
            let mut tau: Vec<usize> = (0..n).collect();
            sigma.shuffle(&mut rng);
            tau.shuffle(&mut rng);
            let r = Realiser::from_orders(&sigma, &tau);
            let g = graph_from_realiser(&r);
            let r2 = compute_realiser(&g).expect("permutation graph must be recognised");
            assert_eq!(graph_from_realiser(&r2), g);
        }
    }
}
