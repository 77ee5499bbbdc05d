//! Random game instances.
//!
//! Two routes produce an [`OrientedCube`]: draw a full [`PayoffTable`] from a
//! [`DiscreteDistribution`] and compare payoffs edge by edge ([`marks_of`]),
//! or draw each edge mark directly from the tie parameter
//! ([`sample_marks`]). Every downstream computation reads marks only, through
//! the [`MarkSource`] trait, so the two routes are interchangeable.

use std::str::FromStr;

use crate::hypercube::{Dimension, VertexId};
use crate::rng::Stream;
use crate::{Error, Result};

/// Probability `alpha` that two independent payoffs tie; `beta = (1 - alpha) / 2`
/// is the probability of each strict order.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct TieParameter {
    alpha: f64,
}

impl TieParameter {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::Validation(format!(
                "tie parameter alpha must lie in [0, 1], got {alpha}"
            )));
        }
        Ok(TieParameter { alpha })
    }

    #[inline]
    pub fn alpha(self) -> f64 {
        self.alpha
    }

    #[inline]
    pub fn beta(self) -> f64 {
        (1.0 - self.alpha) / 2.0
    }
}

impl std::fmt::Display for TieParameter {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.alpha.fmt(f)
    }
}

/// A purely atomic payoff law.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteDistribution {
    support: Vec<f64>,
    probs: Vec<f64>,
    cumulative: Vec<f64>,
}

impl DiscreteDistribution {
    pub fn new(support: Vec<f64>, probs: Vec<f64>) -> Result<Self> {
        if support.is_empty() || support.len() != probs.len() {
            return Err(Error::Validation(format!(
                "distribution needs matching nonempty support and probabilities (got {} and {})",
                support.len(),
                probs.len()
            )));
        }
        if support.iter().any(|x| !x.is_finite()) {
            return Err(Error::Validation("support values must be finite".into()));
        }
        if support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Validation(
                "support values must be strictly increasing".into(),
            ));
        }
        if probs.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
            return Err(Error::Validation(
                "probabilities must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!(
                "probabilities must sum to 1, got {total}"
            )));
        }
        let cumulative = probs
            .iter()
            .scan(0.0, |acc, p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        Ok(DiscreteDistribution {
            support,
            probs,
            cumulative,
        })
    }

    /// Equal mass on each of `values`, which are sorted first.
    pub fn uniform(mut values: Vec<f64>) -> Result<Self> {
        values.sort_by(f64::total_cmp);
        let k = values.len();
        let probs = vec![1.0 / k as f64; k];
        // 1/k summed k times is not always exactly 1; validation tolerates that.
        Self::new(values, probs)
    }

    pub fn point(value: f64) -> Result<Self> {
        Self::new(vec![value], vec![1.0])
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `alpha = sum_k p_k^2`.
    pub fn tie_parameter(&self) -> TieParameter {
        let alpha: f64 = self.probs.iter().map(|p| p * p).sum();
        TieParameter {
            alpha: alpha.clamp(0.0, 1.0),
        }
    }

    /// Inverse-CDF lookup for `u` in `[0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        let k = self.cumulative.partition_point(|&c| c <= u);
        self.support[k.min(self.support.len() - 1)]
    }
}

/// `alpha` of a payoff law.
pub fn alpha_of(dist: &DiscreteDistribution) -> TieParameter {
    dist.tie_parameter()
}

impl FromStr for DiscreteDistribution {
    type Err = Error;

    /// `uniform:v1,v2,...`, `atoms:v1@p1,v2@p2,...` or `point:v`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').ok_or_else(|| {
            Error::Validation(format!("distribution `{s}` lacks a `kind:` prefix"))
        })?;
        let num = |t: &str| -> Result<f64> {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::Validation(format!("bad number `{t}` in distribution `{s}`")))
        };
        match kind.trim() {
            "uniform" => Self::uniform(body.split(',').map(num).collect::<Result<_>>()?),
            "point" => Self::point(num(body)?),
            "atoms" => {
                let mut pairs = body
                    .split(',')
                    .map(|item| {
                        let (v, p) = item.split_once('@').ok_or_else(|| {
                            Error::Validation(format!("atom `{item}` must be `value@prob`"))
                        })?;
                        Ok((num(v)?, num(p)?))
                    })
                    .collect::<Result<Vec<_>>>()?;
                pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
                let (support, probs) = pairs.into_iter().unzip();
                Self::new(support, probs)
            }
            other => Err(Error::Validation(format!(
                "unknown distribution kind `{other}` (expected uniform, atoms or point)"
            ))),
        }
    }
}

/// State of one edge `(base, player)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum EdgeMark {
    /// Strictly higher payoff at the endpoint with the bit set.
    TowardOne,
    /// Strictly higher payoff at `base`.
    TowardZero,
    Tie,
}

impl EdgeMark {
    /// Whether the edge points away from the endpoint whose bit is `at_top`.
    #[inline]
    pub fn leaves(self, at_top: bool) -> bool {
        match self {
            EdgeMark::TowardOne => !at_top,
            EdgeMark::TowardZero => at_top,
            EdgeMark::Tie => false,
        }
    }

    /// Whether the edge points into the endpoint whose bit is `at_top`.
    #[inline]
    pub fn enters(self, at_top: bool) -> bool {
        match self {
            EdgeMark::TowardOne => at_top,
            EdgeMark::TowardZero => !at_top,
            EdgeMark::Tie => false,
        }
    }
}

/// Read access to the edge marks of a partially oriented cube.
pub trait MarkSource {
    fn dim(&self) -> Dimension;

    fn mark(&self, edge_index: usize) -> EdgeMark;

    /// Tie parameter the marks were generated with, if known.
    fn tie_parameter(&self) -> Option<TieParameter>;

    #[inline]
    fn mark_at(&self, v: VertexId, player: u32) -> EdgeMark {
        self.mark(self.dim().edge_index(v, player))
    }

    /// Player `player` strictly gains by deviating from `v`.
    #[inline]
    fn is_outgoing(&self, v: VertexId, player: u32) -> bool {
        self.mark_at(v, player).leaves(v >> player & 1 == 1)
    }

    /// Player `player` strictly loses by deviating from `v`.
    #[inline]
    fn is_incoming(&self, v: VertexId, player: u32) -> bool {
        self.mark_at(v, player).enters(v >> player & 1 == 1)
    }
}

/// Marks drawn on demand from a counter-based stream.
///
/// Edge `e` always receives the same mark for a given `(alpha, seed)`, so a
/// sampler and the cube it [materializes](MarkSampler::materialize) agree
/// everywhere; the sampler lets short-circuiting scans skip most edges.
#[derive(Clone, Copy, Debug)]
pub struct MarkSampler {
    dim: Dimension,
    alpha: TieParameter,
    stream: Stream,
    one_threshold: f64,
}

impl MarkSampler {
    pub fn new(dim: Dimension, alpha: TieParameter, seed: u64) -> Self {
        MarkSampler {
            dim,
            alpha,
            stream: Stream::new(seed, "marks"),
            one_threshold: alpha.alpha() + alpha.beta(),
        }
    }

    pub fn materialize(&self) -> OrientedCube {
        OrientedCube {
            dim: self.dim,
            marks: (0..self.dim.edge_count()).map(|e| self.mark(e)).collect(),
            alpha: Some(self.alpha),
        }
    }
}

impl MarkSource for MarkSampler {
    #[inline]
    fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    fn mark(&self, edge_index: usize) -> EdgeMark {
        let u = self.stream.unit(edge_index as u64);
        if u < self.alpha.alpha() {
            EdgeMark::Tie
        } else if u < self.one_threshold {
            EdgeMark::TowardOne
        } else {
            EdgeMark::TowardZero
        }
    }

    fn tie_parameter(&self) -> Option<TieParameter> {
        Some(self.alpha)
    }
}

/// Dense partially oriented `n`-cube.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedCube {
    dim: Dimension,
    marks: Vec<EdgeMark>,
    alpha: Option<TieParameter>,
}

impl OrientedCube {
    pub fn from_marks(
        dim: Dimension,
        marks: Vec<EdgeMark>,
        alpha: Option<TieParameter>,
    ) -> Result<Self> {
        if marks.len() != dim.edge_count() {
            return Err(Error::Validation(format!(
                "cube with n={dim} needs {} marks, got {}",
                dim.edge_count(),
                marks.len()
            )));
        }
        Ok(OrientedCube { dim, marks, alpha })
    }

    /// Every edge a tie; the generating `alpha` is 1.
    pub fn all_tie(dim: Dimension) -> Self {
        Self::uniform(dim, EdgeMark::Tie)
    }

    /// Every edge carries `mark`.
    pub fn uniform(dim: Dimension, mark: EdgeMark) -> Self {
        OrientedCube {
            dim,
            marks: vec![mark; dim.edge_count()],
            alpha: (mark == EdgeMark::Tie).then_some(TieParameter { alpha: 1.0 }),
        }
    }

    pub fn marks(&self) -> &[EdgeMark] {
        &self.marks
    }

    pub fn set_mark(&mut self, edge_index: usize, mark: EdgeMark) {
        self.marks[edge_index] = mark;
    }

    pub fn set_tie_parameter(&mut self, alpha: Option<TieParameter>) {
        self.alpha = alpha;
    }

    pub fn tie_count(&self) -> usize {
        self.marks.iter().filter(|&&m| m == EdgeMark::Tie).count()
    }
}

impl MarkSource for OrientedCube {
    #[inline]
    fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    fn mark(&self, edge_index: usize) -> EdgeMark {
        self.marks[edge_index]
    }

    fn tie_parameter(&self) -> Option<TieParameter> {
        self.alpha
    }
}

impl<S: MarkSource + ?Sized> MarkSource for &S {
    fn dim(&self) -> Dimension {
        (**self).dim()
    }

    fn mark(&self, edge_index: usize) -> EdgeMark {
        (**self).mark(edge_index)
    }

    fn tie_parameter(&self) -> Option<TieParameter> {
        (**self).tie_parameter()
    }
}

/// Each edge independently: tie w.p. `alpha`, `TowardOne` / `TowardZero` w.p. `beta` each.
pub fn sample_marks(dim: Dimension, alpha: TieParameter, seed: u64) -> OrientedCube {
    MarkSampler::new(dim, alpha, seed).materialize()
}

/// Realized payoffs `z[player * 2^n + profile]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PayoffTable {
    dim: Dimension,
    z: Vec<f64>,
    alpha: Option<TieParameter>,
}

impl PayoffTable {
    /// Payoffs from explicit values laid out as `z[player * 2^n + profile]`.
    pub fn from_values(dim: Dimension, z: Vec<f64>) -> Result<Self> {
        let want = dim.get() as usize * dim.vertex_count();
        if z.len() != want {
            return Err(Error::Validation(format!(
                "payoff table for n={dim} needs {want} entries, got {}",
                z.len()
            )));
        }
        if let Some(k) = z.iter().position(|x| !x.is_finite()) {
            return Err(Error::Validation(format!("payoff entry {k} is not finite")));
        }
        Ok(PayoffTable {
            dim,
            z,
            alpha: None,
        })
    }

    /// Payoffs given per profile, `rows[s][i]` being player `i`'s payoff at `s`.
    pub fn from_profiles(dim: Dimension, rows: &[Vec<f64>]) -> Result<Self> {
        let nv = dim.vertex_count();
        let n = dim.get() as usize;
        if rows.len() != nv || rows.iter().any(|r| r.len() != n) {
            return Err(Error::Validation(format!(
                "expected {nv} profiles of {n} payoffs each"
            )));
        }
        let mut z = vec![0.0; n * nv];
        for (s, row) in rows.iter().enumerate() {
            for (i, &x) in row.iter().enumerate() {
                z[i * nv + s] = x;
            }
        }
        Self::from_values(dim, z)
    }

    pub fn dim(&self) -> Dimension {
        self.dim
    }

    #[inline]
    pub fn get(&self, player: u32, profile: VertexId) -> f64 {
        self.z[player as usize * self.dim.vertex_count() + profile as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.z
    }

    pub fn tie_parameter(&self) -> Option<TieParameter> {
        self.alpha
    }

    /// Apply `f` to every payoff; keeps the recorded `alpha`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        let mut t = Self::from_values(self.dim, self.z.iter().map(|&x| f(x)).collect())?;
        t.alpha = self.alpha;
        Ok(t)
    }
}

/// `n * 2^n` i.i.d. draws from `dist`.
pub fn sample_payoffs(dim: Dimension, dist: &DiscreteDistribution, seed: u64) -> PayoffTable {
    let stream = Stream::new(seed, "payoffs");
    let len = dim.get() as usize * dim.vertex_count();
    PayoffTable {
        dim,
        z: (0..len)
            .map(|k| dist.quantile(stream.unit(k as u64)))
            .collect(),
        alpha: Some(dist.tie_parameter()),
    }
}

/// Orient every edge from the lower to the higher payoff of the deviating player.
pub fn marks_of(payoffs: &PayoffTable) -> OrientedCube {
    let dim = payoffs.dim;
    let marks = dim
        .edges()
        .map(|e| {
            let low = payoffs.get(e.player, e.base);
            let high = payoffs.get(e.player, e.top());
            if low < high {
                EdgeMark::TowardOne
            } else if low > high {
                EdgeMark::TowardZero
            } else {
                EdgeMark::Tie
            }
        })
        .collect();
    OrientedCube {
        dim,
        marks,
        alpha: payoffs.alpha,
    }
}

/// A fixed three-player game without ties whose only pure equilibria are
/// `(0,0,0)` and `(1,1,0)`; every start reaches one of them.
pub fn example_three_player_game() -> PayoffTable {
    // rows indexed by profile, bit 0 = player 1
    let rows = vec![
        vec![0.542, 0.709, 0.426], // (0,0,0)
        vec![0.292, 0.684, 0.126], // (1,0,0)
        vec![0.209, 0.659, 0.569], // (0,1,0)
        vec![0.815, 0.774, 0.508], // (1,1,0)
        vec![0.202, 0.549, 0.174], // (0,0,1)
        vec![0.110, 0.567, 0.794], // (1,0,1)
        vec![0.199, 0.097, 0.319], // (0,1,1)
        vec![0.949, 0.530, 0.055], // (1,1,1)
    ];
    PayoffTable::from_profiles(Dimension::new(3).expect("n=3"), &rows).expect("valid table")
}
