//! Exhaustive twin-width computation on small graphs.
//!
//! The search walks the space of vertex partitions (the trigraph reachable by
//! a set of contractions is determined by the partition of the original
//! vertex set), memoized on a canonical key: the sorted list of part bitmasks.
//! Two states with the same key are literally the same trigraph, so the memo
//! can never merge inequivalent states.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::Graph;

/// Hard cap beyond which the oracle refuses to run (partition space blows up).
pub const DEFAULT_MAX_N: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} vertices; oracle is capped at {max_n}")]
    TooLarge { n: usize, max_n: usize },
    #[error("vertex {0} out of range")]
    BadVertex(usize),
}

/// An exhaustive-search answer. `Inconclusive` is only produced when an
/// explicit budget runs out; it is never a wrong number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleResult<T> {
    Exact(T),
    Inconclusive,
}

impl<T> OracleResult<T> {
    pub fn exact(self) -> Option<T> {
        match self {
            OracleResult::Exact(t) => Some(t),
            OracleResult::Inconclusive => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct OracleOptions {
    pub max_n: usize,
    /// Maximum number of distinct states to expand before giving up.
    pub budget: Option<u64>,
}

impl Default for OracleOptions {
    fn default() -> Self {
        OracleOptions { max_n: DEFAULT_MAX_N, budget: None }
    }
}

struct Exhausted;

type Mask = u16;

struct Search {
    adj: Vec<Mask>,
    budget: Option<u64>,
}

impl Search {
    fn new(g: &Graph, budget: Option<u64>) -> Self {
        let mut adj = vec![0 as Mask; g.n()];
        for u in 0..g.n() {
            for &v in g.neighbors(u) {
                adj[u] |= 1 << v;
            }
        }
        Search { adj, budget }
    }

    fn spend(&mut self) -> Result<(), Exhausted> {
        if let Some(b) = &mut self.budget {
            if *b == 0 {
                return Err(Exhausted);
            }
            *b -= 1;
        }
        Ok(())
    }

    /// Relation between two parts: 0 = none, 1 = black, 2 = red.
    fn relation(&self, a: Mask, b: Mask) -> u8 {
        let mut any_edge = false;
        let mut any_non = false;
        let mut rest = a;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let hits = self.adj[v] & b;
            if hits != 0 {
                any_edge = true;
            }
            if hits != b {
                any_non = true;
            }
            if any_edge && any_non {
                return 2;
            }
        }
        match (any_edge, any_non) {
            (true, false) => 1,
            (false, _) => 0,
            (true, true) => 2,
        }
    }

    fn max_red_degree(&self, parts: &[Mask]) -> usize {
        let k = parts.len();
        let mut deg = vec![0usize; k];
        for i in 0..k {
            for j in i + 1..k {
                if self.relation(parts[i], parts[j]) == 2 {
                    deg[i] += 1;
                    deg[j] += 1;
                }
            }
        }
        deg.into_iter().max().unwrap_or(0)
    }

    fn red_incident_mask(&self, parts: &[Mask]) -> Mask {
        let k = parts.len();
        let mut touched = 0 as Mask;
        for i in 0..k {
            for j in i + 1..k {
                if self.relation(parts[i], parts[j]) == 2 {
                    touched |= parts[i] | parts[j];
                }
            }
        }
        touched
    }

    fn key(parts: &[Mask]) -> Vec<Mask> {
        let mut k = parts.to_vec();
        k.sort_unstable();
        k
    }

    /// Children ordered by the red degree of the merged part, then by pair.
    fn children(&self, parts: &[Mask]) -> Vec<(usize, Vec<Mask>)> {
        let k = parts.len();
        let mut out = Vec::with_capacity(k * (k - 1) / 2);
        for i in 0..k {
            for j in i + 1..k {
                let merged = parts[i] | parts[j];
                let mut child: Vec<Mask> = Vec::with_capacity(k - 1);
                let mut merged_red = 0usize;
                for (t, &p) in parts.iter().enumerate() {
                    if t != i && t != j {
                        child.push(p);
                        if self.relation(merged, p) == 2 {
                            merged_red += 1;
                        }
                    }
                }
                child.push(merged);
                out.push((merged_red, child));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)));
        out
    }

    /// Can the partition reach a single part through states of max red
    /// degree <= d?
    fn decide(&mut self, parts: Vec<Mask>, d: usize, memo: &mut HashMap<Vec<Mask>, bool>) -> Result<bool, Exhausted> {
        if parts.len() == 1 {
            return Ok(true);
        }
        let key = Self::key(&parts);
        if let Some(&hit) = memo.get(&key) {
            return Ok(hit);
        }
        self.spend()?;
        let mut ok = false;
        for (_, child) in self.children(&parts) {
            if self.max_red_degree(&child) <= d && self.decide(child, d, memo)? {
                ok = true;
                break;
            }
        }
        memo.insert(key, ok);
        Ok(ok)
    }

    fn decide_with_last(
        &mut self,
        parts: Vec<Mask>,
        touched: Mask,
        s_bit: Mask,
        full: Mask,
        memo: &mut HashMap<(Vec<Mask>, Mask), bool>,
    ) -> Result<bool, Exhausted> {
        if parts.len() == 1 {
            return Ok(true);
        }
        let key = (Self::key(&parts), touched);
        if let Some(&hit) = memo.get(&key) {
            return Ok(hit);
        }
        self.spend()?;
        let mut ok = false;
        for (_, child) in self.children(&parts) {
            if self.max_red_degree(&child) > 1 {
                continue;
            }
            let touched_next = touched | self.red_incident_mask(&child);
            // s may only become red-incident once everyone already has
            if touched_next & s_bit != 0 && touched_next != full {
                continue;
            }
            if self.decide_with_last(child, touched_next, s_bit, full, memo)? {
                ok = true;
                break;
            }
        }
        memo.insert(key, ok);
        Ok(ok)
    }
}

fn check_size(g: &Graph, opts: &OracleOptions) -> Result<(), OracleError> {
    if g.n() > opts.max_n.min(16) {
        return Err(OracleError::TooLarge { n: g.n(), max_n: opts.max_n.min(16) });
    }
    Ok(())
}

fn discrete(n: usize) -> Vec<Mask> {
    (0..n).map(|v| 1 << v).collect()
}

/// Decides `tww(g) <= d` by exhaustive search.
pub fn tww_at_most_with(g: &Graph, d: usize, opts: &OracleOptions) -> Result<OracleResult<bool>, OracleError> {
    check_size(g, opts)?;
    if g.n() <= 1 {
        return Ok(OracleResult::Exact(true));
    }
    let mut search = Search::new(g, opts.budget);
    let mut memo = HashMap::new();
    match search.decide(discrete(g.n()), d, &mut memo) {
        Ok(b) => Ok(OracleResult::Exact(b)),
        Err(Exhausted) => Ok(OracleResult::Inconclusive),
    }
}

pub fn tww_at_most(g: &Graph, d: usize) -> Result<OracleResult<bool>, OracleError> {
    tww_at_most_with(g, d, &OracleOptions::default())
}

/// Exact twin-width by iterative deepening on the width bound.
pub fn brute_force_tww_with(g: &Graph, opts: &OracleOptions) -> Result<OracleResult<usize>, OracleError> {
    check_size(g, opts)?;
    if g.n() <= 1 {
        return Ok(OracleResult::Exact(0));
    }
    let mut search = Search::new(g, opts.budget);
    for d in 0..g.n() {
        let mut memo = HashMap::new();
        match search.decide(discrete(g.n()), d, &mut memo) {
            Ok(true) => return Ok(OracleResult::Exact(d)),
            Ok(false) => continue,
            Err(Exhausted) => return Ok(OracleResult::Inconclusive),
        }
    }
    unreachable!("every graph has a complete contraction sequence of width < n")
}

pub fn brute_force_tww(g: &Graph) -> Result<OracleResult<usize>, OracleError> {
    brute_force_tww_with(g, &OracleOptions::default())
}

/// Is there a 1-sequence of `g` in which `s` is the last vertex to become
/// incident to a red edge? Sequences with no red edges at all satisfy the
/// condition vacuously.
pub fn brute_force_has_1_sequence_with_last(g: &Graph, s: usize) -> Result<OracleResult<bool>, OracleError> {
    brute_force_has_1_sequence_with_last_with(g, s, &OracleOptions::default())
}

pub fn brute_force_has_1_sequence_with_last_with(
    g: &Graph,
    s: usize,
    opts: &OracleOptions,
) -> Result<OracleResult<bool>, OracleError> {
    check_size(g, opts)?;
    if s >= g.n() {
        return Err(OracleError::BadVertex(s));
    }
    if g.n() <= 1 {
        return Ok(OracleResult::Exact(true));
    }
    let mut search = Search::new(g, opts.budget);
    let mut memo = HashMap::new();
    let full: Mask = if g.n() == 16 { !0 } else { (1 << g.n()) - 1 };
    match search.decide_with_last(discrete(g.n()), 0, 1 << s, full, &mut memo) {
        Ok(b) => Ok(OracleResult::Exact(b)),
        Err(Exhausted) => Ok(OracleResult::Inconclusive),
    }
}

/// Every complete contraction step list on `n` vertices under the fresh-id
/// naming convention. Only feasible for tiny `n`; used as a test oracle.
pub fn enumerate_complete_sequences(n: usize) -> Vec<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    let mut steps = Vec::new();
    let active: Vec<usize> = (0..n).collect();
    fn rec(active: Vec<usize>, fresh: usize, steps: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        if active.len() <= 1 {
            out.push(steps.clone());
            return;
        }
        for i in 0..active.len() {
            for j in i + 1..active.len() {
                let mut next: Vec<usize> = active
                    .iter()
                    .copied()
                    .filter(|&x| x != active[i] && x != active[j])
                    .collect();
                next.push(fresh);
                steps.push((active[i], active[j]));
                rec(next, fresh + 1, steps, out);
                steps.pop();
            }
        }
    }
    rec(active, n, &mut steps, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Graph;

    fn tww(g: &Graph) -> usize {
        brute_force_tww(g).unwrap().exact().unwrap()
    }

    #[test]
    fn known_values() {
        assert_eq!(tww(&cycle(5)), 2);
        assert_eq!(tww(&cycle(6)), 2);
        assert_eq!(tww(&cycle(7)), 2);
        for n in 1..=8 {
            assert_eq!(tww(&complete(n)), 0, "K_{n}");
        }
        assert_eq!(tww(&spider()), 2);
        assert_eq!(tww(&path(4)), 1);
        assert_eq!(tww(&gem()), 1);
        assert_eq!(tww(&star(3)), 0);
        assert_eq!(tww(&Graph::empty(0)), 0);
        assert_eq!(tww(&Graph::empty(1)), 0);
    }

    #[test]
    fn decision_matches_value() {
        let gs = [path(4), cycle(5), gem(), spider(), complete(6), star(4)];
        for g in &gs {
            let t = tww(g);
            for d in 0..4 {
                assert_eq!(
                    tww_at_most(g, d).unwrap().exact().unwrap(),
                    d >= t,
                    "decision mismatch on {g:?} at d={d}"
                );
            }
        }
    }

    #[test]
    fn has_last_examples() {
        let p4 = path(4);
        assert_eq!(brute_force_has_1_sequence_with_last(&p4, 0).unwrap(), OracleResult::Exact(true));
        // cographs: vacuous via a red-free sequence
        for s in 0..4 {
            assert_eq!(
                brute_force_has_1_sequence_with_last(&star(3), s).unwrap(),
                OracleResult::Exact(true)
            );
        }
        for s in 0..5 {
            assert_eq!(
                brute_force_has_1_sequence_with_last(&cycle(5), s).unwrap(),
                OracleResult::Exact(false)
            );
        }
    }

    #[test]
    fn budget_exhaustion_is_explicit() {
        let opts = OracleOptions { max_n: 10, budget: Some(3) };
        assert_eq!(brute_force_tww_with(&cycle(7), &opts).unwrap(), OracleResult::Inconclusive);
    }

    #[test]
    fn size_cap_is_enforced() {
        let g = Graph::empty(11);
        assert_eq!(
            brute_force_tww(&g),
            Err(OracleError::TooLarge { n: 11, max_n: 10 })
        );
    }

    #[test]
    fn determinism() {
        let g = cycle(6);
        let a = brute_force_tww(&g).unwrap();
        let b = brute_force_tww(&g).unwrap();
        assert_eq!(a, b);
        let x = brute_force_has_1_sequence_with_last(&path(5), 2).unwrap();
        let y = brute_force_has_1_sequence_with_last(&path(5), 2).unwrap();
        assert_eq!(x, y);
    }

    #[test]
    fn sequence_enumeration_count() {
        // C(4,2)*C(3,2)*C(2,2) = 18 complete sequences on 4 vertices
        assert_eq!(enumerate_complete_sequences(4).len(), 18);
        assert_eq!(enumerate_complete_sequences(5).len(), 180);
    }

    #[test]
    fn complement_invariance_small() {
        for g in [path(4), cycle(5), gem(), star(3), spider()] {
            assert_eq!(tww(&g), tww(&g.complement()));
        }
    }
}
