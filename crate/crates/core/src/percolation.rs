//! Bond percolation on the `n`-cube and the exploration coupling between an
//! oriented cube and a percolation configuration.

use std::collections::VecDeque;

use serde::Serialize;

use crate::dynamics::accessible_set;
use crate::hypercube::{flip, Dimension, VertexId, VertexSet};
use crate::randgame::{EdgeMark, MarkSource};
use crate::rng::Stream;
use crate::{Error, Result};

/// Open/closed flag per canonical edge.
#[derive(Clone, Debug, PartialEq)]
pub struct BondConfig {
    dim: Dimension,
    open: Vec<bool>,
    /// Open probability used to sample the configuration; `None` when derived.
    p: Option<f64>,
}

impl BondConfig {
    pub fn from_flags(dim: Dimension, open: Vec<bool>, p: Option<f64>) -> Result<Self> {
        if open.len() != dim.edge_count() {
            return Err(Error::Validation(format!(
                "bond configuration for n={dim} needs {} flags, got {}",
                dim.edge_count(),
                open.len()
            )));
        }
        if let Some(p) = p {
            check_probability(p)?;
        }
        Ok(BondConfig { dim, open, p })
    }

    pub fn all(dim: Dimension, open: bool) -> Self {
        BondConfig {
            dim,
            open: vec![open; dim.edge_count()],
            p: Some(if open { 1.0 } else { 0.0 }),
        }
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    pub fn p(&self) -> Option<f64> {
        self.p
    }

    pub fn flags(&self) -> &[bool] {
        &self.open
    }

    #[inline]
    pub fn is_open(&self, edge_index: usize) -> bool {
        self.open[edge_index]
    }

    #[inline]
    pub fn is_open_at(&self, v: VertexId, player: u32) -> bool {
        self.open[self.dim.edge_index(v, player)]
    }

    pub fn set(&mut self, edge_index: usize, open: bool) {
        self.open[edge_index] = open;
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "open probability must lie in [0, 1], got {p}"
        )))
    }
}

fn sample_from_stream(dim: Dimension, p: f64, stream: &Stream) -> BondConfig {
    BondConfig {
        dim,
        open: (0..dim.edge_count() as u64)
            .map(|e| stream.bernoulli(e, p))
            .collect(),
        p: Some(p),
    }
}

/// Each edge open independently with probability `p`.
pub fn sample_bond(dim: Dimension, p: f64, seed: u64) -> Result<BondConfig> {
    check_probability(p)?;
    Ok(sample_from_stream(dim, p, &Stream::new(seed, "bond")))
}

/// Union-find with path halving and union by size.
struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a as usize] < self.size[b as usize] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b as usize] = a;
        self.size[a as usize] += self.size[b as usize];
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComponentStats {
    /// Smallest vertex of the component containing each vertex.
    pub component_id: Vec<VertexId>,
    /// Component sizes, largest first.
    pub sizes: Vec<usize>,
    pub largest_size: usize,
    pub isolated_count: usize,
}

impl ComponentStats {
    /// Every component other than one largest component is a single vertex.
    pub fn rest_are_singletons(&self) -> bool {
        self.sizes.iter().skip(1).all(|&s| s == 1)
    }
}

pub fn components(bond: &BondConfig) -> ComponentStats {
    let dim = bond.dim;
    let nv = dim.vertex_count();
    let mut sets = DisjointSets::new(nv);
    for (e, &open) in bond.open.iter().enumerate() {
        if open {
            let edge = dim.edge_at(e);
            sets.union(edge.base, edge.top());
        }
    }
    let mut min_of_root = vec![VertexId::MAX; nv];
    let mut roots = Vec::with_capacity(nv);
    for v in 0..nv as u32 {
        let r = sets.find(v) as usize;
        roots.push(r as u32);
        // v ascends, so the first hit is the minimum
        if min_of_root[r] == VertexId::MAX {
            min_of_root[r] = v;
        }
    }
    let component_id = roots.iter().map(|&r| min_of_root[r as usize]).collect();
    let mut sizes: Vec<usize> = (0..nv)
        .filter(|&v| sets.parent[v] == v as u32)
        .map(|r| sets.size[r] as usize)
        .collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    ComponentStats {
        component_id,
        largest_size: sizes[0],
        isolated_count: sizes.iter().filter(|&&s| s == 1).count(),
        sizes,
    }
}

/// Connected component of `v` in the open subgraph.
pub fn cluster_of(bond: &BondConfig, v: VertexId) -> VertexSet {
    let dim = bond.dim;
    let mut seen = VertexSet::empty(dim);
    seen.insert(v);
    let mut queue = VecDeque::from([v]);
    while let Some(u) = queue.pop_front() {
        for i in dim.players() {
            if bond.is_open_at(u, i) {
                let w = flip(u, i);
                if seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    seen
}

/// Edge open iff it is oriented (either direction).
pub fn orientation_subgraph<S: MarkSource + ?Sized>(cube: &S) -> BondConfig {
    let dim = cube.dim();
    BondConfig {
        dim,
        open: (0..dim.edge_count())
            .map(|e| cube.mark(e) != EdgeMark::Tie)
            .collect(),
        p: None,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CouplingOutput {
    pub bond: BondConfig,
    pub explored: VertexSet,
    /// Number of expansion rounds until the explored set stopped growing.
    pub rounds: u64,
}

/// Couple the oriented cube with a bond percolation of parameter `beta`.
///
/// Starts from an independent configuration `B_1` (stream `"coupling"` keyed
/// by `seed`) and explores `P_1 = {start}`, `P_{k+1} = P_k ∪ ΔP_k`, where
/// `ΔP_k` holds the out-neighbors of `P_k`. Every edge between `P_k` and its
/// outer boundary is reset to open iff it is oriented outward; all other edges
/// keep their `B_1` state. At the fixed point the explored set is the cluster
/// of `start` in the final configuration and equals the accessible set.
pub fn coupled_percolation<S: MarkSource + ?Sized>(
    cube: &S,
    start: VertexId,
    seed: u64,
) -> Result<CouplingOutput> {
    let alpha = cube.tie_parameter().ok_or_else(|| {
        Error::Domain("coupling needs the generating tie parameter, which is unknown".into())
    })?;
    let dim = cube.dim();
    dim.check_vertex(start)?;
    let mut bond = sample_from_stream(dim, alpha.beta(), &Stream::new(seed, "coupling"));
    let mut explored = VertexSet::empty(dim);
    explored.insert(start);
    // Boundary edges of older members were already reset to the same values,
    // so each round only needs to scan the members added in the previous one.
    let mut layer = vec![start];
    let mut rounds = 0u64;
    let cap = dim.vertex_count() as u64;
    while !layer.is_empty() {
        let mut next = Vec::new();
        for &u in &layer {
            for i in dim.players() {
                let w = flip(u, i);
                if explored.contains(w) {
                    continue;
                }
                let out = cube.is_outgoing(u, i);
                bond.set(dim.edge_index(u, i), out);
                if out {
                    next.push(w);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        for &w in &next {
            explored.insert(w);
        }
        rounds += 1;
        if rounds > cap {
            return Err(Error::Internal(format!(
                "coupling did not stabilize within {cap} rounds"
            )));
        }
        layer = next;
    }
    Ok(CouplingOutput {
        bond,
        explored,
        rounds,
    })
}

/// Checks the two guarantees of [`coupled_percolation`] on one output.
pub fn coupling_holds<S: MarkSource + ?Sized>(
    cube: &S,
    start: VertexId,
    out: &CouplingOutput,
) -> bool {
    out.explored == accessible_set(cube, start).accessible
        && cluster_of(&out.bond, start) == out.explored
}
