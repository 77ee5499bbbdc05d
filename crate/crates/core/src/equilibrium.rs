//! Pure and strict pure Nash equilibria, and closed-form moments of their counts.
//!
//! A vertex is a PNE when no incident edge points away from it, and an SPNE
//! when every incident edge points into it.

use rayon::prelude::*;
use serde::Serialize;

use crate::hypercube::VertexId;
use crate::randgame::{MarkSource, TieParameter};
use crate::{Error, Result};

pub fn is_pne<S: MarkSource + ?Sized>(cube: &S, v: VertexId) -> bool {
    cube.dim().players().all(|i| !cube.is_outgoing(v, i))
}

pub fn is_spne<S: MarkSource + ?Sized>(cube: &S, v: VertexId) -> bool {
    cube.dim().players().all(|i| cube.is_incoming(v, i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    pub pne: Vec<VertexId>,
    pub spne: Vec<VertexId>,
    pub pne_count: usize,
    pub spne_count: usize,
}

/// Vertex ranges below this size are scanned without splitting work.
const PAR_CHUNK: usize = 1 << 14;

/// Full scan; both lists come out in increasing order.
pub fn enumerate<S: MarkSource + Sync + ?Sized>(cube: &S) -> EquilibriumReport {
    let nv = cube.dim().vertex_count();
    let chunks: Vec<(Vec<VertexId>, Vec<VertexId>)> = (0..nv.div_ceil(PAR_CHUNK))
        .into_par_iter()
        .map(|c| {
            let lo = (c * PAR_CHUNK) as VertexId;
            let hi = ((c + 1) * PAR_CHUNK).min(nv) as VertexId;
            let mut pne = Vec::new();
            let mut spne = Vec::new();
            for v in lo..hi {
                if is_pne(cube, v) {
                    pne.push(v);
                    if is_spne(cube, v) {
                        spne.push(v);
                    }
                }
            }
            (pne, spne)
        })
        .collect();
    let (pne, spne): (Vec<_>, Vec<_>) = chunks.into_iter().unzip();
    let pne: Vec<VertexId> = pne.concat();
    let spne: Vec<VertexId> = spne.concat();
    EquilibriumReport {
        pne_count: pne.len(),
        spne_count: spne.len(),
        pne,
        spne,
    }
}

pub fn count_pne<S: MarkSource + ?Sized>(cube: &S) -> usize {
    cube.dim().vertices().filter(|&v| is_pne(cube, v)).count()
}

pub fn count_spne<S: MarkSource + ?Sized>(cube: &S) -> usize {
    cube.dim().vertices().filter(|&v| is_spne(cube, v)).count()
}

/// `E|PNE| = (1 + alpha)^n`.
pub fn mean_pne(n: u32, alpha: TieParameter) -> f64 {
    (1.0 + alpha.alpha()).powi(n as i32)
}

/// `E|SPNE| = (1 - alpha)^n = (2 beta)^n`.
pub fn mean_spne(n: u32, alpha: TieParameter) -> f64 {
    (1.0 - alpha.alpha()).powi(n as i32)
}

/// `Var|PNE| = 2^n b_n + 2^n n (alpha q^(2n-2) - q^(2n))` with `q = 1 - beta`
/// and `b_n = q^n (1 - q^n)`.
///
/// Each product of powers is assembled in log space.
pub fn var_pne(n: u32, alpha: TieParameter) -> f64 {
    let moments = ClosedFormMoments::new(n, alpha);
    moments.tau_sq
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClosedFormMoments {
    pub mean: f64,
    pub b_n: f64,
    pub tau_sq: f64,
}

impl ClosedFormMoments {
    pub fn new(n: u32, alpha: TieParameter) -> Self {
        let a = alpha.alpha();
        let ln_q = (1.0 - alpha.beta()).ln();
        let nf = n as f64;
        let ln2n = nf * std::f64::consts::LN_2;
        let q_n = (nf * ln_q).exp();
        let b_n = q_n * (1.0 - q_n);
        // 2^n q^n = (1 + alpha)^n
        let mean = (ln2n + nf * ln_q).exp();
        let single = mean * (1.0 - q_n);
        let pair_both = if a > 0.0 {
            (ln2n + nf.ln() + a.ln() + (2.0 * nf - 2.0) * ln_q).exp()
        } else {
            0.0
        };
        let pair_indep = (ln2n + nf.ln() + 2.0 * nf * ln_q).exp();
        ClosedFormMoments {
            mean,
            b_n,
            tau_sq: single + pair_both - pair_indep,
        }
    }
}

/// `(count - (1 + alpha)^n) / (1 + alpha)^(n / 2)`; requires `alpha > 0`.
pub fn clt_statistic(count: usize, n: u32, alpha: TieParameter) -> Result<f64> {
    if alpha.alpha() <= 0.0 {
        return Err(Error::Domain("the CLT rescaling requires alpha > 0".into()));
    }
    let base = 1.0 + alpha.alpha();
    let mean = base.powi(n as i32);
    Ok((count as f64 - mean) / base.powf(n as f64 / 2.0))
}

/// `m = floor(-1 / ln((1 + alpha) / 2))`; the BRD convergence guarantee needs `m <= 3`.
pub fn brd_threshold(alpha: TieParameter) -> Result<u32> {
    let a = alpha.alpha();
    if a <= 0.0 || a >= 1.0 {
        return Err(Error::Domain(format!(
            "BRD threshold needs 0 < alpha < 1, got {a}"
        )));
    }
    let q: f64 = (1.0 + a) / 2.0;
    Ok((-1.0 / q.ln()).floor() as u32)
}
