//! Modular decomposition: the tree of strong modules with series, parallel
//! and prime internal nodes, quotient graphs on prime nodes, the cograph
//! test, and sequence assembly through the tree.
//!
//! The algorithm is the classic recursion: components give a parallel node,
//! co-components a series node, and a connected co-connected graph has a
//! prime root whose children are the maximal proper modules. Those are found
//! with partition refinement (maximal modules avoiding a pivot) plus a module
//! closure pass that reconstitutes the pivot's own class. Everything is
//! test-guarded against brute force on small graphs rather than tuned for the
//! strictly linear bound from the literature.

use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::sequence::ContractionSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ModuleKind {
    Series,
    Parallel,
    Prime,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct NodeId(pub usize);

#[derive(Debug, Clone)]
struct Node {
    kind: Option<ModuleKind>, // None for leaves
    leaf: Option<usize>,
    children: Vec<NodeId>,
    /// Range into the tree's leaf tour covered by this subtree.
    leaf_start: usize,
    leaf_len: usize,
    /// Smallest original vertex in the subtree, for canonical ordering.
    min_vertex: usize,
    /// Quotient graph for prime nodes; vertex i corresponds to children[i].
    quotient: Option<Graph>,
}

/// The modular decomposition tree of a graph. Subtree vertex sets are held
/// as ranges into one shared leaf tour, so the tree stays linear-size even
/// when it is deep.
#[derive(Debug, Clone)]
pub struct MDTree {
    nodes: Vec<Node>,
    root: NodeId,
    tour: Vec<usize>,
}

impl MDTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        self.nodes[id.0].leaf.is_some()
    }

    pub fn leaf_vertex(&self, id: NodeId) -> Option<usize> {
        self.nodes[id.0].leaf
    }

    pub fn kind(&self, id: NodeId) -> Option<ModuleKind> {
        self.nodes[id.0].kind
    }

    pub fn children(&self, id: NodeId) -> &[NodeId] {
        &self.nodes[id.0].children
    }

    /// Sorted original vertex set of the subtree (a strong module).
    pub fn vertices(&self, id: NodeId) -> Vec<usize> {
        let n = &self.nodes[id.0];
        let mut out = self.tour[n.leaf_start..n.leaf_start + n.leaf_len].to_vec();
        out.sort_unstable();
        out
    }

    pub fn subtree_size(&self, id: NodeId) -> usize {
        self.nodes[id.0].leaf_len
    }

    pub fn min_vertex(&self, id: NodeId) -> usize {
        self.nodes[id.0].min_vertex
    }

    /// Quotient graph of a prime node: vertex `i` stands for `children[i]`.
    pub fn quotient(&self, id: NodeId) -> Option<&Graph> {
        self.nodes[id.0].quotient.as_ref()
    }

    pub fn node_ids(&self) -> impl Iterator<Item = NodeId> {
        (0..self.nodes.len()).map(NodeId)
    }

    pub fn internal_nodes(&self) -> Vec<NodeId> {
        self.node_ids().filter(|&id| !self.is_leaf(id)).collect()
    }

    pub fn prime_nodes(&self) -> Vec<NodeId> {
        self.node_ids().filter(|&id| self.kind(id) == Some(ModuleKind::Prime)).collect()
    }

    /// JSON view for the CLI's decompose command.
    pub fn to_json(&self) -> serde_json::Value {
        fn rec(t: &MDTree, id: NodeId) -> serde_json::Value {
            if let Some(v) = t.leaf_vertex(id) {
                return serde_json::json!({ "leaf": v });
            }
            let kind = match t.kind(id).unwrap() {
                ModuleKind::Series => "series",
                ModuleKind::Parallel => "parallel",
                ModuleKind::Prime => "prime",
            };
            let children: Vec<_> = t.children(id).iter().map(|&c| rec(t, c)).collect();
            let mut obj = serde_json::json!({
                "kind": kind,
                "vertices": t.vertices(id),
                "children": children,
            });
            if let Some(q) = t.quotient(id) {
                obj["quotient_edges"] = serde_json::json!(q.edges());
            }
            obj
        }
        rec(self, self.root)
    }
}

/// True iff the decomposition has no prime node, i.e. the graph is a cograph.
pub fn is_cograph(t: &MDTree) -> bool {
    t.prime_nodes().is_empty()
}

/// Computes the canonical modular decomposition tree. Deterministic: children
/// are ordered by their smallest original vertex.
///
/// Twins are contracted first (their merge forest is a cotree), the
/// twin-free core is decomposed recursively, and the cotrees are substituted
/// back for the core's leaves. On twin-rich inputs this keeps the expensive
/// recursion on a small core.
pub fn modular_decomposition(g: &Graph) -> MDTree {
    assert!(g.n() >= 1, "modular decomposition needs at least one vertex");
    let t_red = std::time::Instant::now();
    let reduction = twin_reduce(g);
    if std::env::var("TWW_DBG").is_ok() {
        eprintln!("twin_reduce: {:.0}ms, leaders {}", t_red.elapsed().as_secs_f64()*1000.0, reduction.leaders.len());
    }
    let t_dec = std::time::Instant::now();
    let mut b = Builder { nodes: Vec::new(), tour: Vec::new() };
    let root = decompose(g, &reduction.leaders, &reduction, &mut b);
    if std::env::var("TWW_DBG").is_ok() {
        eprintln!("decompose: {:.0}ms", t_dec.elapsed().as_secs_f64()*1000.0);
    }
    // drop arena nodes orphaned by the flattening splices
    let mut keep = vec![false; b.nodes.len()];
    let mut stack = vec![root];
    while let Some(id) = stack.pop() {
        keep[id.0] = true;
        stack.extend(b.nodes[id.0].children.iter().copied());
    }
    let mut remap = vec![usize::MAX; b.nodes.len()];
    let mut nodes = Vec::with_capacity(keep.iter().filter(|&&k| k).count());
    for (old, node) in b.nodes.into_iter().enumerate() {
        if keep[old] {
            remap[old] = nodes.len();
            nodes.push(node);
        }
    }
    for node in &mut nodes {
        for c in &mut node.children {
            *c = NodeId(remap[c.0]);
        }
    }
    MDTree { nodes, root: NodeId(remap[root.0]), tour: b.tour }
}

struct Builder {
    nodes: Vec<Node>,
    tour: Vec<usize>,
}

impl Builder {
    fn leaf(&mut self, v: usize) -> NodeId {
        self.tour.push(v);
        self.nodes.push(Node {
            kind: None,
            leaf: Some(v),
            children: Vec::new(),
            leaf_start: self.tour.len() - 1,
            leaf_len: 1,
            min_vertex: v,
            quotient: None,
        });
        NodeId(self.nodes.len() - 1)
    }

    /// Internal node over already-built children; their tour segments must
    /// jointly cover one contiguous block.
    fn internal(&mut self, kind: ModuleKind, mut children: Vec<NodeId>, quotient: Option<Graph>) -> NodeId {
        children.sort_by_key(|&c| self.nodes[c.0].min_vertex);
        let leaf_start = children.iter().map(|&c| self.nodes[c.0].leaf_start).min().unwrap();
        let leaf_len = children.iter().map(|&c| self.nodes[c.0].leaf_len).sum();
        let min_vertex = children.iter().map(|&c| self.nodes[c.0].min_vertex).min().unwrap();
        self.nodes.push(Node {
            kind: Some(kind),
            leaf: None,
            children,
            leaf_start,
            leaf_len,
            min_vertex,
            quotient,
        });
        NodeId(self.nodes.len() - 1)
    }
}

enum CotreeNode {
    Leaf(usize),
    Internal { series: bool, children: Vec<usize> },
}

struct TwinReduction {
    /// one representative (its smallest vertex) per twin class, sorted
    leaders: Vec<usize>,
    /// cotree arena; `root_of[leader]` is the class cotree
    cotree: Vec<CotreeNode>,
    root_of: BTreeMap<usize, usize>,
}

/// Contracts twin groups in rounds: vertices are bucketed by a hash of their
/// open (false twins) or closed (true twins) neighborhood, each group merges
/// into its smallest member under one cotree node, and only vertices whose
/// neighborhood changed are re-examined in the next round.
fn twin_reduce(g: &Graph) -> TwinReduction {
    use std::collections::hash_map::DefaultHasher;
    use std::hash::{Hash, Hasher};

    let n = g.n();
    let mut alive = vec![true; n];
    let mut nb: Vec<std::collections::BTreeSet<usize>> =
        (0..n).map(|v| g.neighbors(v).iter().copied().collect()).collect();
    let mut cotree: Vec<CotreeNode> = (0..n).map(CotreeNode::Leaf).collect();
    let mut root_of: BTreeMap<usize, usize> = (0..n).map(|v| (v, v)).collect();

    let hash_open = |set: &std::collections::BTreeSet<usize>| -> u64 {
        let mut h = DefaultHasher::new();
        for &x in set {
            x.hash(&mut h);
        }
        h.finish()
    };
    let hash_closed = |set: &std::collections::BTreeSet<usize>, v: usize| -> u64 {
        let mut h = DefaultHasher::new();
        let mut pushed = false;
        for &x in set {
            if !pushed && v < x {
                v.hash(&mut h);
                pushed = true;
            }
            x.hash(&mut h);
        }
        if !pushed {
            v.hash(&mut h);
        }
        h.finish()
    };

    let mut dirty: std::collections::BTreeSet<usize> = (0..n).collect();
    let mut rounds_dbg = 0u32;
    while !dirty.is_empty() {
        rounds_dbg += 1;
        if std::env::var("TWW_DBG").is_ok() {
            eprintln!("round {} alive {} dirty {}", rounds_dbg, alive.iter().filter(|&&a| a).count(), dirty.len());
        }
        // bucket the candidates; twins of a clean vertex are found because
        // at least one side of any newly formed twin pair is dirty, and the
        // buckets below scan all alive vertices sharing a dirty hash
        let mut open_map: HashMap<u64, Vec<usize>> = HashMap::new();
        let mut closed_map: HashMap<u64, Vec<usize>> = HashMap::new();
        for v in (0..n).filter(|&v| alive[v]) {
            open_map.entry(hash_open(&nb[v])).or_default().push(v);
            closed_map.entry(hash_closed(&nb[v], v)).or_default().push(v);
        }
        let mut merged_any = false;
        let mut next_dirty: std::collections::BTreeSet<usize> = std::collections::BTreeSet::new();
        let mut consumed = vec![false; n];

        let mut do_group = |members: Vec<usize>,
                            series: bool,
                            alive: &mut Vec<bool>,
                            nb: &mut Vec<std::collections::BTreeSet<usize>>,
                            cotree: &mut Vec<CotreeNode>,
                            root_of: &mut BTreeMap<usize, usize>,
                            next_dirty: &mut std::collections::BTreeSet<usize>,
                            consumed: &mut Vec<bool>,
                            merged_any: &mut bool| {
            if members.len() < 2 {
                return;
            }
            let keep = members[0];
            for &drop in &members[1..] {
                alive[drop] = false;
                consumed[drop] = true;
                let drop_nbrs: Vec<usize> = nb[drop].iter().copied().collect();
                for x in drop_nbrs {
                    nb[x].remove(&drop);
                    if x != keep {
                        next_dirty.insert(x);
                    }
                }
                nb[drop].clear();
                nb[keep].remove(&drop);
            }
            // one cotree node absorbs the whole group
            let roots: Vec<usize> = members.iter().map(|m| match root_of.get(m) {
                Some(&r) => r,
                None => unreachable!(),
            }).collect();
            for drop in &members[1..] {
                root_of.remove(drop);
            }
            let merged = merge_cotree_group(cotree, &roots, series);
            root_of.insert(keep, merged);
            consumed[keep] = true;
            next_dirty.insert(keep);
            *merged_any = true;
        };

        // false twins first, then true twins among what is left
        for (map, series) in [(open_map, false), (closed_map, true)] {
            let mut keys: Vec<u64> = map.keys().copied().collect();
            keys.sort_unstable();
            for key in keys {
                let bucket: Vec<usize> =
                    map[&key].iter().copied().filter(|&v| alive[v] && !consumed[v]).collect();
                if bucket.len() < 2 {
                    continue;
                }
                // confirm hash groups exactly
                let mut groups: Vec<Vec<usize>> = Vec::new();
                'member: for &v in &bucket {
                    for grp in groups.iter_mut() {
                        let w = grp[0];
                        let equal = if series {
                            (nb[v].contains(&w) || nb[w].contains(&v))
                                && nb[v].iter().filter(|&&x| x != w).eq(nb[w].iter().filter(|&&x| x != v))
                        } else {
                            nb[v] == nb[w]
                        };
                        if equal {
                            grp.push(v);
                            continue 'member;
                        }
                    }
                    groups.push(vec![v]);
                }
                for grp in groups {
                    do_group(
                        grp,
                        series,
                        &mut alive,
                        &mut nb,
                        &mut cotree,
                        &mut root_of,
                        &mut next_dirty,
                        &mut consumed,
                        &mut merged_any,
                    );
                }
            }
        }
        if !merged_any {
            break;
        }
        dirty = next_dirty;
    }

    let leaders: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    TwinReduction { leaders, cotree, root_of }
}

fn merge_cotree_group(arena: &mut Vec<CotreeNode>, roots: &[usize], series: bool) -> usize {
    let mut children = Vec::new();
    for &node in roots {
        match &arena[node] {
            CotreeNode::Internal { series: s, children: c } if *s == series => {
                children.extend(c.iter().copied());
            }
            _ => children.push(node),
        }
    }
    arena.push(CotreeNode::Internal { series, children });
    arena.len() - 1
}

/// Builds the subtree for one twin class: its cotree with same-kind chains
/// flattened, emitted iteratively so deep cotrees cannot overflow the stack.
fn build_class_subtree(red: &TwinReduction, leader: usize, b: &mut Builder) -> NodeId {
    let root = red.root_of[&leader];
    // post-order over the cotree with an explicit stack
    let mut result: HashMap<usize, NodeId> = HashMap::new();
    let mut stack: Vec<(usize, bool)> = vec![(root, false)];
    while let Some((ct, expanded)) = stack.pop() {
        match &red.cotree[ct] {
            CotreeNode::Leaf(v) => {
                let id = b.leaf(*v);
                result.insert(ct, id);
            }
            CotreeNode::Internal { series, children } => {
                if !expanded {
                    stack.push((ct, true));
                    for &c in children.iter().rev() {
                        stack.push((c, false));
                    }
                } else {
                    // splice same-kind descendants that the pairwise merge
                    // construction may have left nested
                    let kind = if *series { ModuleKind::Series } else { ModuleKind::Parallel };
                    let mut kids = Vec::with_capacity(children.len());
                    for &c in children {
                        let built = result[&c];
                        if b.nodes[built.0].kind == Some(kind) {
                            kids.extend(b.nodes[built.0].children.iter().copied());
                        } else {
                            kids.push(built);
                        }
                    }
                    let id = b.internal(kind, kids, None);
                    result.insert(ct, id);
                }
            }
        }
    }
    result[&root]
}

fn decompose(g: &Graph, set: &[usize], red: &TwinReduction, b: &mut Builder) -> NodeId {
    if set.len() == 1 {
        return build_class_subtree(red, set[0], b);
    }
    let sub = g.induced_subgraph(set).expect("set is valid");
    let local = &sub.graph;

    let comps = local.components();
    if comps.len() > 1 {
        return internal(g, set, &sub.to_orig, comps, ModuleKind::Parallel, red, b);
    }
    let cocomps = local.co_components();
    if cocomps.len() > 1 {
        return internal(g, set, &sub.to_orig, cocomps, ModuleKind::Series, red, b);
    }

    // Connected and co-connected: prime root over the maximal proper modules.
    let classes = maximal_modules_avoiding(local, 0);
    let pivot_class = pivot_module(local, 0, &classes);
    let mut parts: Vec<Vec<usize>> = vec![pivot_class.clone()];
    for c in &classes {
        if !pivot_class.contains(&c[0]) {
            parts.push(c.clone());
        }
    }
    debug_assert!(parts.len() >= 4, "prime quotient must have at least 4 vertices");
    internal(g, set, &sub.to_orig, parts, ModuleKind::Prime, red, b)
}

fn internal(
    g: &Graph,
    _set: &[usize],
    to_orig: &[usize],
    local_parts: Vec<Vec<usize>>,
    kind: ModuleKind,
    red: &TwinReduction,
    b: &mut Builder,
) -> NodeId {
    let mut parts: Vec<Vec<usize>> = local_parts
        .into_iter()
        .map(|p| {
            let mut q: Vec<usize> = p.into_iter().map(|v| to_orig[v]).collect();
            q.sort_unstable();
            q
        })
        .collect();
    parts.sort_by_key(|p| p[0]);
    let quotient = (kind == ModuleKind::Prime).then(|| {
        let reps: Vec<usize> = parts.iter().map(|p| p[0]).collect();
        let mut edges = Vec::new();
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                if g.has_edge(reps[i], reps[j]) {
                    edges.push((i, j));
                }
            }
        }
        Graph::from_edges(reps.len(), &edges).unwrap()
    });
    let mut children = Vec::with_capacity(parts.len());
    for p in &parts {
        let built = decompose(g, p, red, b);
        // flatten same-kind degenerate boundaries (a twin-class cotree root
        // can carry the same kind as this node)
        if kind != ModuleKind::Prime && b.nodes[built.0].kind == Some(kind) {
            children.extend(b.nodes[built.0].children.iter().copied());
        } else {
            children.push(built);
        }
    }
    b.internal(kind, children, quotient)
}

/// Maximal modules of `g` avoiding `pivot`, as the non-pivot classes of the
/// coarsest partition refining `{{pivot}, rest}` in which every class is a
/// module. Returned classes are sorted internally and by smallest member;
/// the `{pivot}` singleton is included.
fn maximal_modules_avoiding(g: &Graph, pivot: usize) -> Vec<Vec<usize>> {
    let n = g.n();
    let mut class_of = vec![0usize; n];
    class_of[pivot] = 1;
    let mut members: Vec<Vec<usize>> = vec![(0..n).filter(|&v| v != pivot).collect(), vec![pivot]];

    let mut queued = vec![true; n];
    let mut queue: std::collections::VecDeque<usize> = (0..n).collect();

    while let Some(x) = queue.pop_front() {
        queued[x] = false;
        // neighbor counts per class
        let mut cnt: BTreeMap<usize, usize> = BTreeMap::new();
        for &y in g.neighbors(x) {
            if class_of[y] != class_of[x] {
                *cnt.entry(class_of[y]).or_insert(0) += 1;
            }
        }
        for (&cls, &k) in &cnt {
            if k == 0 || k == members[cls].len() {
                continue;
            }
            // split: neighbors of x leave cls for a fresh class
            let old = std::mem::take(&mut members[cls]);
            let fresh = members.len();
            members.push(Vec::new());
            let mut stay = Vec::new();
            for v in old {
                if g.has_edge(x, v) {
                    class_of[v] = fresh;
                    members[fresh].push(v);
                } else {
                    stay.push(v);
                }
            }
            members[cls] = stay;
            for &v in members[cls].iter().chain(members[fresh].iter()) {
                if !queued[v] {
                    queued[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }

    let mut classes: Vec<Vec<usize>> = members.into_iter().filter(|c| !c.is_empty()).collect();
    for c in &mut classes {
        c.sort_unstable();
    }
    classes.sort_by_key(|c| c[0]);
    classes
}

/// The maximal proper module containing `pivot` in a connected, co-connected
/// graph: grow by absorbing whole classes whose module closure with the
/// current set stays proper.
fn pivot_module(g: &Graph, pivot: usize, classes: &[Vec<usize>]) -> Vec<usize> {
    let n = g.n();
    let mut w = ClosureState::new(g);
    w.add(pivot);
    w.close();
    debug_assert!(w.size < n, "closure of a single vertex is itself");
    for c in classes {
        if c == &[pivot] || c.iter().all(|&v| w.contains(v)) {
            continue;
        }
        let mut trial = w.clone();
        for &v in c {
            trial.add(v);
        }
        trial.close();
        if trial.size < n {
            w = trial;
        }
    }
    let mut out: Vec<usize> = (0..n).filter(|&v| w.contains(v)).collect();
    out.sort_unstable();
    out
}

/// Incremental smallest-module closure: maintains a vertex set W and absorbs
/// splitters (vertices with both a neighbor and a non-neighbor in W) until W
/// is a module. The set of outside vertices complete to W is tracked
/// explicitly: a vertex complete to W has degree at least |W|, so the total
/// size of these sets over a run is bounded by the edge count.
#[derive(Clone)]
struct ClosureState<'a> {
    g: &'a Graph,
    in_w: Vec<bool>,
    cnt: Vec<usize>,
    size: usize,
    pending: Vec<usize>,
    full_list: Vec<usize>,
    is_full: Vec<bool>,
}

impl<'a> ClosureState<'a> {
    fn new(g: &'a Graph) -> Self {
        ClosureState {
            g,
            in_w: vec![false; g.n()],
            cnt: vec![0; g.n()],
            size: 0,
            pending: Vec::new(),
            full_list: Vec::new(),
            is_full: vec![false; g.n()],
        }
    }

    fn contains(&self, v: usize) -> bool {
        self.in_w[v]
    }

    fn add(&mut self, v: usize) {
        self.pending.push(v);
    }

    fn absorb(&mut self, v: usize) {
        if self.in_w[v] {
            return;
        }
        self.in_w[v] = true;
        self.is_full[v] = false;
        self.size += 1;
        for &u in self.g.neighbors(v) {
            if !self.in_w[u] {
                self.cnt[u] += 1;
            }
        }
        // vertices that were complete to W and missed v become splitters
        let mut kept = Vec::with_capacity(self.full_list.len());
        for &u in &self.full_list {
            if self.in_w[u] || !self.is_full[u] {
                continue;
            }
            if self.cnt[u] == self.size {
                kept.push(u);
            } else {
                self.is_full[u] = false;
                self.pending.push(u);
            }
        }
        self.full_list = kept;
        for &u in self.g.neighbors(v) {
            if self.in_w[u] || self.is_full[u] {
                continue;
            }
            if self.cnt[u] == self.size {
                self.is_full[u] = true;
                self.full_list.push(u);
            } else {
                // 0 < cnt < size: u distinguishes W
                self.pending.push(u);
            }
        }
    }

    fn close(&mut self) {
        while let Some(v) = self.pending.pop() {
            self.absorb(v);
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum QuotientError {
    #[error("partition does not cover every vertex exactly once")]
    NotAPartition,
    #[error("vertex {splitter} splits part {part:?}")]
    NotModular { splitter: usize, part: Vec<usize> },
}

/// Quotient of `g` by a modular partition: one representative (the smallest
/// member) per part. Parts are validated by brute force for small graphs.
pub fn quotient(g: &Graph, partition: &[Vec<usize>]) -> Result<Graph, QuotientError> {
    let mut seen = vec![false; g.n()];
    for part in partition {
        if part.is_empty() {
            return Err(QuotientError::NotAPartition);
        }
        for &v in part {
            if v >= g.n() || seen[v] {
                return Err(QuotientError::NotAPartition);
            }
            seen[v] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(QuotientError::NotAPartition);
    }
    if g.n() <= 512 {
        for part in partition {
            for x in g.vertices() {
                if part.contains(&x) {
                    continue;
                }
                let adj = g.has_edge(x, part[0]);
                if part.iter().any(|&v| g.has_edge(x, v) != adj) {
                    let mut p = part.clone();
                    p.sort_unstable();
                    return Err(QuotientError::NotModular { splitter: x, part: p });
                }
            }
        }
    }
    let mut parts: Vec<Vec<usize>> = partition.to_vec();
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort_by_key(|p| p[0]);
    let reps: Vec<usize> = parts.iter().map(|p| p[0]).collect();
    let mut edges = Vec::new();
    for i in 0..reps.len() {
        for j in i + 1..reps.len() {
            if g.has_edge(reps[i], reps[j]) {
                edges.push((i, j));
            }
        }
    }
    Ok(Graph::from_edges(reps.len(), &edges).unwrap())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AssembleError {
    #[error("no sequence supplied for prime node {0:?}")]
    MissingPrimeSequence(NodeId),
    #[error("sequence for prime node {node:?} expects {seq_n0} vertices but the quotient has {quotient_n}")]
    WrongQuotientSize { node: NodeId, seq_n0: usize, quotient_n: usize },
    #[error("sequence for prime node {0:?} is not complete")]
    IncompleteSequence(NodeId),
}

/// Builds a complete contraction sequence for the whole graph from the tree:
/// each subtree is contracted to a single vertex bottom-up; degenerate nodes
/// contract twins (the two lowest current ids first), prime nodes replay the
/// supplied quotient sequence. The result has width max over the prime
/// sequences' claimed widths.
pub fn assemble_sequence(
    g: &Graph,
    t: &MDTree,
    prime_seqs: &BTreeMap<NodeId, ContractionSequence>,
) -> Result<ContractionSequence, AssembleError> {
    let n0 = g.n();
    let mut steps: Vec<(usize, usize)> = Vec::with_capacity(n0.saturating_sub(1));
    let mut width = 0usize;
    let root_rep = contract_subtree(t, t.root(), n0, &mut steps, &mut width, prime_seqs)?;
    let _ = root_rep;
    Ok(ContractionSequence::new(n0, steps, width))
}

fn contract_subtree(
    t: &MDTree,
    id: NodeId,
    n0: usize,
    steps: &mut Vec<(usize, usize)>,
    width: &mut usize,
    prime_seqs: &BTreeMap<NodeId, ContractionSequence>,
) -> Result<usize, AssembleError> {
    if let Some(v) = t.leaf_vertex(id) {
        return Ok(v);
    }
    let mut reps = Vec::new();
    for &c in t.children(id) {
        reps.push(contract_subtree(t, c, n0, steps, width, prime_seqs)?);
    }
    match t.kind(id).unwrap() {
        ModuleKind::Series | ModuleKind::Parallel => {
            let mut active: std::collections::BTreeSet<usize> = reps.into_iter().collect();
            while active.len() > 1 {
                let a = *active.iter().next().unwrap();
                active.remove(&a);
                let b = *active.iter().next().unwrap();
                active.remove(&b);
                let fresh = n0 + steps.len();
                steps.push((a, b));
                active.insert(fresh);
            }
            Ok(active.into_iter().next().unwrap())
        }
        ModuleKind::Prime => {
            let seq = prime_seqs.get(&id).ok_or(AssembleError::MissingPrimeSequence(id))?;
            let k = t.children(id).len();
            if seq.n0 != k {
                return Err(AssembleError::WrongQuotientSize { node: id, seq_n0: seq.n0, quotient_n: k });
            }
            if !seq.is_complete() {
                return Err(AssembleError::IncompleteSequence(id));
            }
            *width = (*width).max(seq.claimed_width);
            // local quotient id -> current global id
            let mut map: Vec<usize> = reps;
            for &(u, v) in &seq.steps {
                let gu = map[u];
                let gv = map[v];
                let fresh = n0 + steps.len();
                steps.push((gu, gv));
                map.push(fresh);
            }
            Ok(*map.last().unwrap())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::sequence::verify_sequence;

    fn md(g: &Graph) -> MDTree {
        modular_decomposition(g)
    }

    /// all modules of g by brute force (nonempty subsets), as sorted vecs
    fn brute_modules(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let mut out = Vec::new();
        for mask in 1u32..(1 << n) {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            let is_module = (0..n).filter(|v| mask >> v & 1 == 0).all(|x| {
                let adj = g.has_edge(x, set[0]);
                set.iter().all(|&v| g.has_edge(x, v) == adj)
            });
            if is_module {
                out.push(set);
            }
        }
        out
    }

    fn brute_strong_modules(g: &Graph) -> Vec<Vec<usize>> {
        let mods = brute_modules(g);
        let overlaps = |a: &Vec<usize>, b: &Vec<usize>| {
            let inter = a.iter().filter(|v| b.contains(v)).count();
            inter > 0 && inter < a.len() && inter < b.len()
        };
        mods.iter()
            .filter(|m| mods.iter().all(|other| !overlaps(m, other)))
            .cloned()
            .collect()
    }

    fn tree_vertex_sets(t: &MDTree) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = t.node_ids().map(|id| t.vertices(id).to_vec()).collect();
        sets.sort();
        sets
    }

    #[test]
    fn p4_is_prime() {
        let t = md(&path(4));
        assert_eq!(t.kind(t.root()), Some(ModuleKind::Prime));
        assert_eq!(t.children(t.root()).len(), 4);
        assert!(!is_cograph(&t));
        assert_eq!(t.quotient(t.root()).unwrap(), &path(4));
    }

    #[test]
    fn k3_is_series() {
        let t = md(&complete(3));
        assert_eq!(t.kind(t.root()), Some(ModuleKind::Series));
        assert_eq!(t.children(t.root()).len(), 3);
        assert!(is_cograph(&t));
    }

    #[test]
    fn c5_is_prime() {
        let t = md(&cycle(5));
        assert_eq!(t.kind(t.root()), Some(ModuleKind::Prime));
        assert_eq!(t.children(t.root()).len(), 5);
    }

    #[test]
    fn gem_is_series_over_prime() {
        let t = md(&gem());
        assert_eq!(t.kind(t.root()), Some(ModuleKind::Series));
        assert_eq!(t.children(t.root()).len(), 2);
        assert!(!is_cograph(&t));
        let kinds: Vec<_> = t.children(t.root()).iter().map(|&c| t.kind(c)).collect();
        assert!(kinds.contains(&Some(ModuleKind::Prime)) && kinds.contains(&None));
    }

    #[test]
    fn twin_expansion_shows_module() {
        // C5 plus a true twin of vertex 0: {0,5} must be a strong module
        let mut edges = cycle(5).edges();
        edges.push((5, 1));
        edges.push((5, 4));
        edges.push((5, 0));
        let g = Graph::from_edges(6, &edges).unwrap();
        let t = md(&g);
        assert_eq!(t.kind(t.root()), Some(ModuleKind::Prime));
        assert!(tree_vertex_sets(&t).contains(&vec![0, 5]));
        // quotient is C5 again
        let q = t.quotient(t.root()).unwrap();
        assert_eq!(q.n(), 5);
        assert_eq!(q.m(), 5);
        assert!(q.vertices().all(|v| q.degree(v) == 2));
    }

    #[test]
    fn strong_modules_match_brute_force_up_to_n7() {
        // all graphs on up to 5 vertices, plus named fixtures
        for n in 1..=5usize {
            let pairs: Vec<(usize, usize)> =
                (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            for mask in 0u32..1 << pairs.len() {
                let edges: Vec<_> = pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &e)| e)
                    .collect();
                let g = Graph::from_edges(n, &edges).unwrap();
                let t = md(&g);
                let mut expected = brute_strong_modules(&g);
                expected.sort();
                expected.dedup();
                assert_eq!(tree_vertex_sets(&t), expected, "graph {g:?}");
                check_tree_shape(&g, &t);
            }
        }
        for g in [gem(), house(), domino(), spider(), cycle(7)] {
            let t = md(&g);
            let mut expected = brute_strong_modules(&g);
            expected.sort();
            expected.dedup();
            assert_eq!(tree_vertex_sets(&t), expected, "graph {g:?}");
            check_tree_shape(&g, &t);
        }
    }

    fn check_tree_shape(g: &Graph, t: &MDTree) {
        for id in t.node_ids() {
            if t.is_leaf(id) {
                continue;
            }
            assert!(t.children(id).len() >= 2);
            // no two adjacent degenerate nodes of the same kind
            for &c in t.children(id) {
                if let (Some(k1), Some(k2)) = (t.kind(id), t.kind(c)) {
                    if k1 != ModuleKind::Prime {
                        assert_ne!(k1, k2, "adjacent degenerate nodes of the same kind");
                    }
                }
            }
            if t.kind(id) == Some(ModuleKind::Prime) {
                let q = t.quotient(id).unwrap();
                assert!(q.n() >= 4);
                // prime quotients have only trivial modules
                for m in brute_modules(q) {
                    assert!(m.len() == 1 || m.len() == q.n(), "prime quotient has module {m:?}");
                }
            }
        }
        // leaves are exactly the vertex set
        let mut leaves: Vec<usize> = t.node_ids().filter_map(|id| t.leaf_vertex(id)).collect();
        leaves.sort_unstable();
        let all: Vec<usize> = g.vertices().collect();
        assert_eq!(leaves, all);
    }

    #[test]
    fn decomposition_is_deterministic() {
        let g = gem();
        let a = md(&g).to_json();
        let b = md(&g).to_json();
        assert_eq!(a, b);
    }

    #[test]
    fn quotient_examples() {
        let k3 = complete(3);
        let q = quotient(&k3, &[vec![0, 1], vec![2]]).unwrap();
        assert_eq!(q, complete(2));

        let p4 = path(4);
        let q = quotient(&p4, &[vec![0], vec![1], vec![2], vec![3]]).unwrap();
        assert_eq!(q, p4);

        // C5 plus a true twin of 0, quotient by the twin pair gives C5 back
        let mut edges = cycle(5).edges();
        edges.extend([(5, 1), (5, 4), (5, 0)]);
        let g = Graph::from_edges(6, &edges).unwrap();
        let q = quotient(&g, &[vec![0, 5], vec![1], vec![2], vec![3], vec![4]]).unwrap();
        assert_eq!(q, cycle(5));

        // non-modular partition is rejected with a splitter: 3 sees 2 but not 0
        let err = quotient(&p4, &[vec![0, 2], vec![1], vec![3]]).unwrap_err();
        assert_eq!(err, QuotientError::NotModular { splitter: 3, part: vec![0, 2] });

        assert_eq!(
            quotient(&p4, &[vec![0], vec![1]]).unwrap_err(),
            QuotientError::NotAPartition
        );
    }

    #[test]
    fn assemble_cograph_zero_sequence() {
        let g = star(3);
        let t = md(&g);
        let seq = assemble_sequence(&g, &t, &BTreeMap::new()).unwrap();
        assert!(seq.is_complete());
        assert_eq!(seq.claimed_width, 0);
        let rep = verify_sequence(&g, &seq, 0).unwrap();
        assert!(rep.ok);
        assert_eq!(rep.max_red_degree, 0);
    }

    #[test]
    fn assemble_p4_identity() {
        let g = path(4);
        let t = md(&g);
        let root = t.root();
        let inner = ContractionSequence::new(4, vec![(0, 1), (4, 2), (5, 3)], 1);
        let mut map = BTreeMap::new();
        map.insert(root, inner.clone());
        let seq = assemble_sequence(&g, &t, &map).unwrap();
        assert_eq!(seq, inner);
    }

    #[test]
    fn assemble_gem_width_one() {
        let g = gem();
        let t = md(&g);
        let prime = t.prime_nodes()[0];
        // quotient of the prime node is P4 on children 0..3
        assert_eq!(t.quotient(prime).unwrap(), &path(4));
        let mut map = BTreeMap::new();
        map.insert(prime, ContractionSequence::new(4, vec![(0, 1), (4, 2), (5, 3)], 1));
        let seq = assemble_sequence(&g, &t, &map).unwrap();
        let rep = verify_sequence(&g, &seq, 1).unwrap();
        assert!(rep.ok, "{rep:?}");
        assert!(seq.is_complete());
    }

    #[test]
    fn assemble_missing_prime_sequence() {
        let g = path(4);
        let t = md(&g);
        let err = assemble_sequence(&g, &t, &BTreeMap::new()).unwrap_err();
        assert_eq!(err, AssembleError::MissingPrimeSequence(t.prime_nodes()[0]));
    }

    #[test]
    fn md_tree_roundtrip_reconstructs_graph() {
        // adjacency is recoverable from the tree: two vertices are adjacent
        // iff their lowest common ancestor is series, or prime with the
        // corresponding quotient edge
        for g in [gem(), house(), domino(), spider(), cycle(6), path(5)] {
            let t = md(&g);
            for u in g.vertices() {
                for v in g.vertices() {
                    if u < v {
                        assert_eq!(adjacent_via_tree(&t, u, v), g.has_edge(u, v), "{g:?} {u} {v}");
                    }
                }
            }
        }
    }

    fn adjacent_via_tree(t: &MDTree, u: usize, v: usize) -> bool {
        // find LCA by walking from root
        let mut id = t.root();
        loop {
            let mut next = None;
            for &c in t.children(id) {
                let vs = t.vertices(c);
                if vs.binary_search(&u).is_ok() && vs.binary_search(&v).is_ok() {
                    next = Some(c);
                    break;
                }
            }
            match next {
                Some(c) => id = c,
                None => break,
            }
        }
        match t.kind(id).unwrap() {
            ModuleKind::Series => true,
            ModuleKind::Parallel => false,
            ModuleKind::Prime => {
                let children = t.children(id);
                let iu = children.iter().position(|&c| t.vertices(c).binary_search(&u).is_ok()).unwrap();
                let iv = children.iter().position(|&c| t.vertices(c).binary_search(&v).is_ok()).unwrap();
                t.quotient(id).unwrap().has_edge(iu, iv)
            }
        }
    }
}
