//! Best-response dynamics and accessibility on the oriented cube.

use std::collections::VecDeque;

use serde::Serialize;

use crate::equilibrium::is_pne;
use crate::hypercube::{flip, Dimension, VertexId, VertexSet};
use crate::randgame::MarkSource;
use crate::rng::Stream;

/// Players with a strictly profitable deviation at `v`, in increasing order.
pub fn improving_players<S: MarkSource + ?Sized>(cube: &S, v: VertexId) -> Vec<u32> {
    cube.dim()
        .players()
        .filter(|&i| cube.is_outgoing(v, i))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "vertex", rename_all = "snake_case")]
pub enum BrdOutcome {
    Converged(VertexId),
    StepLimit,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrdTrace {
    pub start: VertexId,
    /// Visited vertices, starting with `start`.
    pub path: Vec<VertexId>,
    pub steps: u64,
    pub outcome: BrdOutcome,
}

/// Step count and outcome of a run, without the path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BrdSummary {
    pub steps: u64,
    pub outcome: BrdOutcome,
    pub last: VertexId,
}

/// `64 * n * 2^n`.
pub fn default_max_steps(dim: Dimension) -> u64 {
    64 * dim.get() as u64 * dim.vertex_count() as u64
}

fn walk<S: MarkSource + ?Sized>(
    cube: &S,
    start: VertexId,
    seed: u64,
    max_steps: u64,
    mut visit: impl FnMut(VertexId),
) -> BrdSummary {
    let stream = Stream::new(seed, "brd");
    let n = cube.dim().get();
    let mut buf = [0u32; 32];
    let mut current = start;
    let mut steps = 0u64;
    visit(current);
    loop {
        let mut k = 0usize;
        for i in 0..n {
            if cube.is_outgoing(current, i) {
                buf[k] = i;
                k += 1;
            }
        }
        if k == 0 {
            return BrdSummary {
                steps,
                outcome: BrdOutcome::Converged(current),
                last: current,
            };
        }
        if steps == max_steps {
            return BrdSummary {
                steps,
                outcome: BrdOutcome::StepLimit,
                last: current,
            };
        }
        let pick = buf[stream.below(steps, k as u32) as usize];
        current = flip(current, pick);
        steps += 1;
        visit(current);
    }
}

/// Random BRD from `start`: at each step a player is drawn uniformly among
/// those with a strictly profitable deviation, and switches.
///
/// The draw at step `k` is word `k` of the `"brd"` stream keyed by `seed`.
pub fn brd_run<S: MarkSource + ?Sized>(
    cube: &S,
    start: VertexId,
    seed: u64,
    max_steps: u64,
) -> BrdTrace {
    let mut path = Vec::new();
    let s = walk(cube, start, seed, max_steps, |v| path.push(v));
    BrdTrace {
        start,
        path,
        steps: s.steps,
        outcome: s.outcome,
    }
}

/// Same run as [`brd_run`] without recording the path.
pub fn brd_summary<S: MarkSource + ?Sized>(
    cube: &S,
    start: VertexId,
    seed: u64,
    max_steps: u64,
) -> BrdSummary {
    walk(cube, start, seed, max_steps, |_| {})
}

/// `L` = `start` plus everything reachable along directed edges; `M` = the rest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AccessPartition {
    pub start: VertexId,
    pub accessible: VertexSet,
}

impl AccessPartition {
    pub fn inaccessible(&self) -> VertexSet {
        self.accessible.complement()
    }
}

/// Breadth-first search over outgoing edges.
pub fn accessible_set<S: MarkSource + ?Sized>(cube: &S, start: VertexId) -> AccessPartition {
    let dim = cube.dim();
    let mut seen = VertexSet::empty(dim);
    seen.insert(start);
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for i in dim.players() {
            if cube.is_outgoing(u, i) {
                let w = flip(u, i);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    AccessPartition {
        start,
        accessible: seen,
    }
}

/// Pure equilibria outside `L^start`, increasing.
pub fn unreachable_equilibria<S: MarkSource + ?Sized>(cube: &S, start: VertexId) -> Vec<VertexId> {
    let part = accessible_set(cube, start);
    part.inaccessible()
        .iter()
        .filter(|&v| is_pne(cube, v))
        .collect()
}

/// Vertices whose every incident edge is a tie, increasing.
pub fn all_tie_vertices<S: MarkSource + ?Sized>(cube: &S) -> Vec<VertexId> {
    let dim = cube.dim();
    dim.vertices()
        .filter(|&v| {
            dim.players()
                .all(|i| cube.mark_at(v, i) == crate::randgame::EdgeMark::Tie)
        })
        .collect()
}
