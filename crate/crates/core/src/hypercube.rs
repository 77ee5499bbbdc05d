//! Bit-level primitives for the `n`-cube.
//!
//! A vertex is an unsigned integer below `2^n`; bit `i` (0-based) is the
//! action of player `i`. Edges are stored densely: the edge of player `i`
//! at the vertex `base` (bit `i` of `base` clear) has index
//! `i * 2^(n-1) + compact(base, i)`, where `compact` deletes bit `i`.

use crate::{Error, Result};

/// Default upper bound on the number of players.
pub const MAX_DIMENSION: u32 = 26;

/// Largest dimension accepted even with an explicit cap override.
const ABSOLUTE_MAX_DIMENSION: u32 = 31;

pub type VertexId = u32;

/// Number of players, `1 <= n <= cap`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dimension(u32);

impl Dimension {
    pub fn new(n: u32) -> Result<Self> {
        Self::with_cap(n, MAX_DIMENSION)
    }

    /// Like [`Dimension::new`] with a different upper bound.
    pub fn with_cap(n: u32, cap: u32) -> Result<Self> {
        let cap = cap.min(ABSOLUTE_MAX_DIMENSION);
        if n == 0 || n > cap {
            return Err(Error::Dimension(format!(
                "number of players must be in 1..={cap}, got {n}"
            )));
        }
        Ok(Dimension(n))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn vertex_count(self) -> usize {
        1usize << self.0
    }

    /// `n * 2^(n-1)`.
    #[inline]
    pub fn edge_count(self) -> usize {
        (self.0 as usize) << (self.0 - 1)
    }

    /// Number of edges belonging to one player, `2^(n-1)`.
    #[inline]
    pub fn edges_per_player(self) -> usize {
        1usize << (self.0 - 1)
    }

    #[inline]
    pub fn contains(self, v: VertexId) -> bool {
        (v as u64) < (1u64 << self.0)
    }

    pub fn vertices(self) -> std::ops::Range<VertexId> {
        0..(self.vertex_count() as VertexId)
    }

    pub fn players(self) -> std::ops::Range<u32> {
        0..self.0
    }

    pub fn check_vertex(self, v: VertexId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "vertex {v} out of range for n={}",
                self.0
            )))
        }
    }

    pub fn check_player(self, i: u32) -> Result<()> {
        if i < self.0 {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "player {i} out of range for n={}",
                self.0
            )))
        }
    }

    /// Neighbor of `v` along dimension `i`.
    pub fn flip(self, v: VertexId, i: u32) -> Result<VertexId> {
        self.check_player(i)?;
        self.check_vertex(v)?;
        Ok(flip(v, i))
    }

    /// Dense index of the edge of player `i` incident to `v` (either endpoint).
    #[inline]
    pub fn edge_index(self, v: VertexId, i: u32) -> usize {
        ((i as usize) << (self.0 - 1)) | compact(v, i) as usize
    }

    /// Inverse of [`Dimension::edge_index`].
    #[inline]
    pub fn edge_at(self, index: usize) -> EdgeRef {
        let per = self.edges_per_player();
        let player = (index / per) as u32;
        EdgeRef {
            base: expand((index % per) as u32, player),
            player,
        }
    }

    /// All edges in storage order.
    pub fn edges(self) -> impl Iterator<Item = EdgeRef> {
        (0..self.edge_count()).map(move |e| self.edge_at(e))
    }

    /// The vertices of `B_r(v)` in increasing order.
    pub fn ball(self, v: VertexId, r: u32) -> Result<Vec<VertexId>> {
        self.check_vertex(v)?;
        let n = self.0;
        let mut out = Vec::new();
        for k in 0..=r.min(n) {
            // Gosper's hack over all n-bit masks with k bits set.
            if k == 0 {
                out.push(v);
                continue;
            }
            let limit = 1u64 << n;
            let mut mask: u64 = (1u64 << k) - 1;
            while mask < limit {
                out.push(v ^ mask as VertexId);
                let c = mask & mask.wrapping_neg();
                let ripple = mask + c;
                mask = (((ripple ^ mask) >> 2) / c) | ripple;
            }
        }
        out.sort_unstable();
        Ok(out)
    }
}

impl std::fmt::Display for Dimension {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

#[inline]
pub fn flip(v: VertexId, i: u32) -> VertexId {
    v ^ (1 << i)
}

#[inline]
pub fn hamming(u: VertexId, v: VertexId) -> u32 {
    (u ^ v).count_ones()
}

/// Delete bit `i` of `v`, shifting higher bits down.
#[inline]
pub fn compact(v: VertexId, i: u32) -> VertexId {
    let low = v & ((1 << i) - 1);
    ((v >> (i + 1)) << i) | low
}

/// Insert a zero at bit `i` of `j`.
#[inline]
pub fn expand(j: VertexId, i: u32) -> VertexId {
    let low = j & ((1 << i) - 1);
    ((j >> i) << (i + 1)) | low
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

/// Parity of the coordinate sum; the two classes form the bipartition.
#[inline]
pub fn parity(v: VertexId) -> Parity {
    if v.count_ones().is_multiple_of(2) {
        Parity::Even
    } else {
        Parity::Odd
    }
}

/// An undirected edge in canonical form: `base` has bit `player` clear.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EdgeRef {
    pub base: VertexId,
    pub player: u32,
}

impl EdgeRef {
    /// Canonical edge of player `player` at `v`; `v` may be either endpoint.
    pub fn at(dim: Dimension, v: VertexId, player: u32) -> Result<Self> {
        dim.check_player(player)?;
        dim.check_vertex(v)?;
        Ok(EdgeRef {
            base: v & !(1 << player),
            player,
        })
    }

    /// The endpoint with bit `player` set.
    #[inline]
    pub fn top(self) -> VertexId {
        self.base | (1 << self.player)
    }

    #[inline]
    pub fn endpoints(self) -> (VertexId, VertexId) {
        (self.base, self.top())
    }
}

/// Dense bitset over the vertices of one cube.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn empty(dim: Dimension) -> Self {
        let len = dim.vertex_count();
        VertexSet {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn full(dim: Dimension) -> Self {
        let mut s = Self::empty(dim);
        s.words.iter_mut().for_each(|w| *w = u64::MAX);
        s.clear_tail();
        s
    }

    pub fn from_vertices(dim: Dimension, vs: impl IntoIterator<Item = VertexId>) -> Self {
        let mut s = Self::empty(dim);
        for v in vs {
            s.insert(v);
        }
        s
    }

    fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Number of vertices in the ambient cube.
    pub fn universe(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        let v = v as usize;
        v < self.len && self.words[v / 64] >> (v % 64) & 1 == 1
    }

    /// Returns `true` if `v` was not already present.
    #[inline]
    pub fn insert(&mut self, v: VertexId) -> bool {
        let v = v as usize;
        let (w, b) = (v / 64, 1u64 << (v % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn complement(&self) -> Self {
        let mut s = VertexSet {
            words: self.words.iter().map(|w| !w).collect(),
            len: self.len,
        };
        s.clear_tail();
        s
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.len == other.len
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut bits = w;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros();
                bits &= bits - 1;
                Some((wi * 64) as VertexId + t)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<VertexId> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
