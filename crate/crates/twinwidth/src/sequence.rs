//! Contraction sequences and the d-sequence verifier.
//!
//! Naming convention: step `k` (1-based) contracts `(u, v)` and introduces the
//! fresh vertex `n0 + k - 1`, so sequence files are reproducible byte for byte
//! and can be verified without the run that produced them.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// An ordered list of contractions over a graph with `n0` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionSequence {
    pub n0: usize,
    pub steps: Vec<(usize, usize)>,
    pub claimed_width: usize,
}

impl ContractionSequence {
    pub fn new(n0: usize, steps: Vec<(usize, usize)>, claimed_width: usize) -> Self {
        ContractionSequence { n0, steps, claimed_width }
    }

    /// A complete sequence reduces the graph to a single vertex.
    pub fn is_complete(&self) -> bool {
        self.n0 == 0 || self.steps.len() == self.n0 - 1
    }

    /// Fresh id introduced by 1-based step `k`.
    pub fn fresh_id(&self, k: usize) -> usize {
        self.n0 + k - 1
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SequenceError {
    #[error("step {step}: vertex {id} is not an original vertex or an earlier contraction result")]
    BadId { step: usize, id: usize },
    #[error("step {step}: vertex {id} was already contracted")]
    ReusedId { step: usize, id: usize },
    #[error("step {step}: contracting vertex {id} with itself")]
    EqualIds { step: usize, id: usize },
    #[error("sequence has {got} steps but the graph admits at most {max}")]
    TooManySteps { got: usize, max: usize },
    #[error("sequence declared for n0 = {seq_n0} but the graph has {graph_n} vertices")]
    WrongVertexCount { seq_n0: usize, graph_n: usize },
}

/// Outcome of verifying a sequence at width `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    /// True iff every intermediate trigraph has maximum red degree <= d.
    pub ok: bool,
    /// First step (1-based) and vertex exceeding the bound, if any.
    pub violation: Option<(usize, usize)>,
    /// Red edge count after each step, for diagnostics.
    pub red_counts: Vec<usize>,
    /// Maximum red degree seen anywhere in the simulation.
    pub max_red_degree: usize,
    /// Whether the sequence contracts down to a single vertex.
    pub complete: bool,
}

/// Simulates `seq` on `g` and checks that the maximum red degree stays at
/// most `d` in every intermediate trigraph. Red edges are recomputed
/// incrementally: a contraction only changes edges incident to the merged
/// vertices.
pub fn verify_sequence(g: &Graph, seq: &ContractionSequence, d: usize) -> Result<VerifyReport, SequenceError> {
    if seq.n0 != g.n() {
        return Err(SequenceError::WrongVertexCount { seq_n0: seq.n0, graph_n: g.n() });
    }
    if g.n() > 0 && seq.steps.len() > g.n() - 1 {
        return Err(SequenceError::TooManySteps { got: seq.steps.len(), max: g.n() - 1 });
    }

    let n0 = g.n();
    let slots = n0 + seq.steps.len();
    let mut alive = vec![false; slots];
    let mut black: Vec<HashSet<usize>> = Vec::with_capacity(slots);
    let mut red: Vec<HashSet<usize>> = Vec::with_capacity(slots);
    for v in 0..n0 {
        alive[v] = true;
        black.push(g.neighbors(v).iter().copied().collect());
        red.push(HashSet::new());
    }
    for _ in n0..slots {
        black.push(HashSet::new());
        red.push(HashSet::new());
    }

    let mut red_count = 0usize;
    let mut red_counts = Vec::with_capacity(seq.steps.len());
    let mut max_red = 0usize;
    let mut violation: Option<(usize, usize)> = None;

    for (idx, &(u, v)) in seq.steps.iter().enumerate() {
        let step = idx + 1;
        let x = n0 + idx;
        if u == v {
            return Err(SequenceError::EqualIds { step, id: u });
        }
        for &id in &[u, v] {
            if id >= x {
                return Err(SequenceError::BadId { step, id });
            }
            if !alive[id] {
                return Err(SequenceError::ReusedId { step, id });
            }
        }

        alive[u] = false;
        alive[v] = false;
        alive[x] = true;

        let mut removed = red[u].len() + red[v].len();
        if red[u].contains(&v) {
            removed -= 1; // the u-v edge itself would be counted twice
        }
        red_count -= removed;

        let mut touched: Vec<usize> = black[u]
            .iter()
            .chain(black[v].iter())
            .chain(red[u].iter())
            .chain(red[v].iter())
            .copied()
            .filter(|&y| y != u && y != v)
            .collect();
        touched.sort_unstable();
        touched.dedup();

        let bu = std::mem::take(&mut black[u]);
        let bv = std::mem::take(&mut black[v]);
        red[u].clear();
        red[v].clear();

        for &y in &touched {
            black[y].remove(&u);
            black[y].remove(&v);
            red[y].remove(&u);
            red[y].remove(&v);
            if bu.contains(&y) && bv.contains(&y) {
                black[x].insert(y);
                black[y].insert(x);
            } else {
                red[x].insert(y);
                red[y].insert(x);
                red_count += 1;
            }
        }

        // Only x and its touched neighbors can have gained red degree.
        let mut worst_here = red[x].len();
        let mut offender = (worst_here > d).then_some(x);
        for &y in &touched {
            let dy = red[y].len();
            if dy > d && dy > worst_here {
                worst_here = dy;
                offender = Some(y);
            } else if dy > d && offender.is_none() {
                offender = Some(y);
            }
            max_red = max_red.max(dy);
        }
        max_red = max_red.max(red[x].len());
        if violation.is_none() {
            if let Some(bad) = offender {
                // report the smallest offending vertex at this step
                let mut candidates: Vec<usize> =
                    touched.iter().copied().chain([x]).filter(|&y| red[y].len() > d).collect();
                candidates.sort_unstable();
                violation = Some((step, *candidates.first().unwrap_or(&bad)));
            }
        }
        red_counts.push(red_count);
    }

    Ok(VerifyReport {
        ok: violation.is_none(),
        violation,
        red_counts,
        max_red_degree: max_red,
        complete: seq.is_complete(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::trigraph::Trigraph;

    fn seq(n0: usize, steps: &[(usize, usize)], w: usize) -> ContractionSequence {
        ContractionSequence::new(n0, steps.to_vec(), w)
    }

    #[test]
    fn k3_twins_width_zero() {
        let r = verify_sequence(&complete(3), &seq(3, &[(0, 1), (3, 2)], 0), 0).unwrap();
        assert!(r.ok && r.complete);
        assert_eq!(r.red_counts, vec![0, 0]);
        assert_eq!(r.max_red_degree, 0);
    }

    #[test]
    fn p4_peel_from_endpoint_width_one() {
        let r = verify_sequence(&path(4), &seq(4, &[(0, 1), (4, 2), (5, 3)], 1), 1).unwrap();
        assert!(r.ok && r.complete);
        assert_eq!(r.max_red_degree, 1);
    }

    #[test]
    fn c5_has_no_1_sequence() {
        // every complete sequence of C5 must fail at width 1
        let g = cycle(5);
        let all = crate::oracle::enumerate_complete_sequences(g.n());
        for steps in all {
            let r = verify_sequence(&g, &seq(5, &steps, 1), 1).unwrap();
            assert!(!r.ok, "C5 accepted sequence {steps:?} at width 1");
        }
    }

    #[test]
    fn structural_errors_are_distinct() {
        let g = path(4);
        assert_eq!(
            verify_sequence(&g, &seq(4, &[(0, 9)], 1), 1),
            Err(SequenceError::BadId { step: 1, id: 9 })
        );
        assert_eq!(
            verify_sequence(&g, &seq(4, &[(0, 1), (0, 2)], 1), 1),
            Err(SequenceError::ReusedId { step: 2, id: 0 })
        );
        assert_eq!(
            verify_sequence(&g, &seq(4, &[(2, 2)], 1), 1),
            Err(SequenceError::EqualIds { step: 1, id: 2 })
        );
        assert_eq!(
            verify_sequence(&g, &seq(3, &[(0, 1)], 1), 1),
            Err(SequenceError::WrongVertexCount { seq_n0: 3, graph_n: 4 })
        );
    }

    #[test]
    fn prefix_of_accepted_sequence_is_accepted() {
        let g = path(4);
        let full = [(0, 1), (4, 2), (5, 3)];
        for k in 0..=full.len() {
            let r = verify_sequence(&g, &seq(4, &full[..k], 1), 1).unwrap();
            assert!(r.ok);
            assert_eq!(r.complete, k == 3);
        }
    }

    #[test]
    fn simulation_matches_pure_contract() {
        let g = gem();
        let steps = [(0usize, 3usize), (5, 1), (6, 2), (7, 4)];
        let mut t = Trigraph::from_graph(&g);
        let mut counts = Vec::new();
        for (k, &(u, v)) in steps.iter().enumerate() {
            t = t.contract_into(u, v, g.n() + k).unwrap();
            t.check_invariants(&g).unwrap();
            counts.push(t.red_edge_count());
        }
        let r = verify_sequence(&g, &seq(5, &steps, 2), 2).unwrap();
        assert_eq!(r.red_counts, counts);
    }

    #[test]
    fn violation_reports_step_and_vertex() {
        // contracting the two endpoints of P5 leaves the merged vertex with
        // red edges to both former neighbors
        let g = path(5);
        let r = verify_sequence(&g, &seq(5, &[(0, 4), (5, 2)], 1), 1).unwrap();
        assert!(!r.ok);
        assert_eq!(r.violation, Some((1, 5)));
        // at width 2 the same prefix is fine
        let r2 = verify_sequence(&g, &seq(5, &[(0, 4), (5, 2)], 2), 2).unwrap();
        assert!(r2.ok);
    }
}
