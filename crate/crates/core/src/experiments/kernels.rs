//! Per-trial kernels, per-group reports and acceptance checks of each experiment.

use serde::Serialize;

use super::stats::{
    chi_square_quantile, ks_distance, ks_two_sample, median, normal_cdf, poisson_chi_square,
    SummaryStats,
};
use super::{run_trials, CheckResult, ExperimentConfig, Observables, TrialRecord};
use crate::dynamics::{
    accessible_set, all_tie_vertices, brd_summary, default_max_steps, BrdOutcome,
};
use crate::equilibrium::{
    clt_statistic, count_pne, count_spne, is_pne, mean_pne, mean_spne, var_pne,
};
use crate::exact::{accessible_size_law, cluster_size_law};
use crate::hypercube::{Dimension, VertexId};
use crate::percolation::{
    cluster_of, components, coupled_percolation, coupling_holds, sample_bond,
};
use crate::randgame::{MarkSampler, TieParameter};
use crate::rng::Stream;
use crate::Result;

type Group = (usize, Dimension, f64);

fn groups(config: &ExperimentConfig, reps: usize) -> Vec<Group> {
    let mut out = Vec::new();
    for rep in 0..reps {
        for &d in &config.n_values {
            for &p in &config.params {
                out.push((rep, d, p));
            }
        }
    }
    out
}

fn tie(alpha: f64) -> Result<TieParameter> {
    TieParameter::new(alpha)
}

fn scope(n: u32, key: &str, value: f64) -> String {
    format!("n={n} {key}={value}")
}

fn column<T: Copy>(records: &[TrialRecord], f: impl Fn(&Observables) -> Option<T>) -> Vec<T> {
    records.iter().filter_map(|r| f(&r.obs)).collect()
}

fn usize_f64(xs: &[usize]) -> Vec<f64> {
    xs.iter().map(|&x| x as f64).collect()
}

fn fraction(flags: &[bool]) -> f64 {
    flags.iter().filter(|&&b| b).count() as f64 / flags.len() as f64
}

/// `|mean - target| / SE`, with a zero-SE sample scoring 0 on an exact hit.
fn z_score(stats: &SummaryStats, target: f64) -> f64 {
    let gap = (stats.mean - target).abs();
    if stats.standard_error > 0.0 {
        gap / stats.standard_error
    } else if gap <= 1e-12 * target.abs().max(1.0) {
        0.0
    } else {
        f64::INFINITY
    }
}

// ---------------------------------------------------------------- mean-pne

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanPneRow {
    pub n: u32,
    pub alpha: f64,
    pub pne_count: SummaryStats,
    /// `(1 + alpha)^n`.
    pub expected: f64,
    pub closed_form_variance: f64,
    pub z: f64,
    pub within_4se: bool,
}

pub fn exp_mean_pne(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, Vec<MeanPneRow>)> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (rep, dim, a) in groups(config, 1) {
        let alpha = tie(a)?;
        let recs = run_trials(config, rep, dim, a, |d, _, seed| {
            Ok(Observables {
                pne_count: Some(count_pne(&MarkSampler::new(d, alpha, seed))),
                ..Default::default()
            })
        })?;
        let stats = SummaryStats::from_samples(&usize_f64(&column(&recs, |o| o.pne_count)))?;
        let expected = mean_pne(dim.get(), alpha);
        let z = z_score(&stats, expected);
        rows.push(MeanPneRow {
            n: dim.get(),
            alpha: a,
            within_4se: stats.covers(expected),
            pne_count: stats,
            expected,
            closed_form_variance: var_pne(dim.get(), alpha),
            z,
        });
        records.extend(recs);
    }
    Ok((records, rows))
}

pub(super) fn checks_mean_pne(config: &ExperimentConfig, rows: &[MeanPneRow]) -> Vec<CheckResult> {
    let thr = config.threshold("max_abs_z");
    rows.iter()
        .map(|r| CheckResult::new("max_abs_z", scope(r.n, "alpha", r.alpha), r.z, "<=", thr))
        .collect()
}

// ---------------------------------------------------------------- clt

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CltRow {
    pub n: u32,
    pub alpha: f64,
    /// Rescaled statistic pooled over repetitions.
    pub clt_stat: SummaryStats,
    /// KS distance to the standard normal, one per repetition.
    pub ks: Vec<f64>,
    pub mean_ks: f64,
    /// Same with the count standardized by its exact standard deviation.
    pub ks_standardized: Vec<f64>,
    pub mean_ks_standardized: f64,
}

pub fn exp_clt(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, Vec<CltRow>)> {
    let mut records = Vec::new();
    let mut rows: Vec<CltRow> = Vec::new();
    for (rep, dim, a) in groups(config, config.reps) {
        let alpha = tie(a)?;
        let n = dim.get();
        let recs = run_trials(config, rep, dim, a, |d, _, seed| {
            let count = count_pne(&MarkSampler::new(d, alpha, seed));
            Ok(Observables {
                pne_count: Some(count),
                clt_stat: Some(clt_statistic(count, d.get(), alpha)?),
                ..Default::default()
            })
        })?;
        let stat = column(&recs, |o| o.clt_stat);
        let ks = ks_distance(&stat, normal_cdf)?;
        let (mu, sd) = (mean_pne(n, alpha), var_pne(n, alpha).sqrt());
        let standardized: Vec<f64> = column(&recs, |o| o.pne_count)
            .into_iter()
            .map(|c| (c as f64 - mu) / sd)
            .collect();
        let ks_std = if sd > 0.0 {
            ks_distance(&standardized, normal_cdf)?
        } else {
            f64::NAN
        };
        match rows.iter_mut().find(|r| r.n == n && r.alpha == a) {
            Some(row) => {
                row.ks.push(ks);
                row.ks_standardized.push(ks_std);
            }
            None => rows.push(CltRow {
                n,
                alpha: a,
                clt_stat: SummaryStats::from_samples(&stat)?,
                ks: vec![ks],
                mean_ks: 0.0,
                ks_standardized: vec![ks_std],
                mean_ks_standardized: 0.0,
            }),
        }
        records.extend(recs);
    }
    for row in &mut rows {
        let pooled: Vec<f64> = records
            .iter()
            .filter(|r| r.n == row.n && r.alpha == row.alpha)
            .filter_map(|r| r.obs.clt_stat)
            .collect();
        row.clt_stat = SummaryStats::from_samples(&pooled)?;
        row.mean_ks = super::stats::compensated_sum(row.ks.iter().copied()) / row.ks.len() as f64;
        row.mean_ks_standardized =
            super::stats::compensated_sum(row.ks_standardized.iter().copied())
                / row.ks_standardized.len() as f64;
    }
    Ok((records, rows))
}

pub(super) fn checks_clt(config: &ExperimentConfig, rows: &[CltRow]) -> Vec<CheckResult> {
    let thr = config.threshold("ks_max");
    let mut out: Vec<CheckResult> = rows
        .iter()
        .map(|r| CheckResult::new("ks_max", scope(r.n, "alpha", r.alpha), r.mean_ks, "<=", thr))
        .collect();
    let decay = config.threshold("ks_decay");
    for &a in &config.params {
        let mut by_n: Vec<&CltRow> = rows.iter().filter(|r| r.alpha == a).collect();
        by_n.sort_by_key(|r| r.n);
        if let (Some(lo), Some(hi)) = (by_n.first(), by_n.last()) {
            if lo.n != hi.n {
                out.push(CheckResult::new(
                    "ks_decay",
                    format!("n={}..{} alpha={a}", lo.n, hi.n),
                    hi.mean_ks - lo.mean_ks,
                    "<",
                    decay,
                ));
            }
        }
    }
    out
}

// ---------------------------------------------------------------- spne

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpneRow {
    pub n: u32,
    pub alpha: f64,
    /// Carries the Poisson(1) chi-square fit when `alpha = 0`.
    pub spne_count: SummaryStats,
    /// `(2 beta)^n`, which bounds `P(spne_count >= 1)`.
    pub markov_bound: f64,
    pub trials_with_spne: usize,
    pub fraction_with_spne: f64,
}

pub fn exp_spne(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, Vec<SpneRow>)> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (rep, dim, a) in groups(config, 1) {
        let alpha = tie(a)?;
        let recs = run_trials(config, rep, dim, a, |d, _, seed| {
            Ok(Observables {
                spne_count: Some(count_spne(&MarkSampler::new(d, alpha, seed))),
                ..Default::default()
            })
        })?;
        let counts = column(&recs, |o| o.spne_count);
        let mut stats = SummaryStats::from_samples(&usize_f64(&counts))?;
        if a == 0.0 {
            let ints: Vec<u64> = counts.iter().map(|&c| c as u64).collect();
            // too few trials to bin leaves the fit absent, which fails its check
            stats.chi_square = poisson_chi_square(&ints, 1.0).ok();
        }
        let with = counts.iter().filter(|&&c| c >= 1).count();
        rows.push(SpneRow {
            n: dim.get(),
            alpha: a,
            spne_count: stats,
            markov_bound: mean_spne(dim.get(), alpha),
            trials_with_spne: with,
            fraction_with_spne: with as f64 / counts.len() as f64,
        });
        records.extend(recs);
    }
    Ok((records, rows))
}

pub(super) fn checks_spne(config: &ExperimentConfig, rows: &[SpneRow]) -> Result<Vec<CheckResult>> {
    let mut out = Vec::new();
    for r in rows {
        let s = scope(r.n, "alpha", r.alpha);
        if r.alpha == 0.0 {
            let m = r.spne_count.mean;
            out.push(CheckResult::new(
                "mean_min",
                s.clone(),
                m,
                ">=",
                config.threshold("mean_min"),
            ));
            out.push(CheckResult::new(
                "mean_max",
                s.clone(),
                m,
                "<=",
                config.threshold("mean_max"),
            ));
            let (stat, crit) = match &r.spne_count.chi_square {
                Some(fit) => (
                    fit.statistic,
                    chi_square_quantile(
                        config.threshold("chi_square_level"),
                        fit.degrees_of_freedom,
                    )?,
                ),
                None => (f64::NAN, f64::NAN),
            };
            out.push(CheckResult::new("chi_square_level", s, stat, "<", crit));
        } else {
            out.push(CheckResult::new(
                "spne_trials_max",
                s,
                r.trials_with_spne as f64,
                "<=",
                config.threshold("spne_trials_max"),
            ));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------- isolated

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IsolatedRow {
    pub n: u32,
    pub p: f64,
    /// Carries the Poisson(1) chi-square fit when `p = 1/2`.
    pub isolated_count: SummaryStats,
    pub largest_size: SummaryStats,
    pub singletons_fraction: f64,
}

pub fn exp_isolated(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, Vec<IsolatedRow>)> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (rep, dim, p) in groups(config, 1) {
        let recs = run_trials(config, rep, dim, p, |d, p, seed| {
            let c = components(&sample_bond(d, p, seed)?);
            Ok(Observables {
                isolated_count: Some(c.isolated_count),
                largest_size: Some(c.largest_size),
                rest_singletons: Some(c.rest_are_singletons()),
                ..Default::default()
            })
        })?;
        let iso = column(&recs, |o| o.isolated_count);
        let mut stats = SummaryStats::from_samples(&usize_f64(&iso))?;
        if p == 0.5 {
            let ints: Vec<u64> = iso.iter().map(|&c| c as u64).collect();
            stats.chi_square = poisson_chi_square(&ints, 1.0).ok();
        }
        rows.push(IsolatedRow {
            n: dim.get(),
            p,
            isolated_count: stats,
            largest_size: SummaryStats::from_samples(&usize_f64(&column(&recs, |o| {
                o.largest_size
            })))?,
            singletons_fraction: fraction(&column(&recs, |o| o.rest_singletons)),
        });
        records.extend(recs);
    }
    Ok((records, rows))
}

/// Applied to `p = 1/2` groups only.
pub(super) fn checks_isolated(config: &ExperimentConfig, rows: &[IsolatedRow]) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| r.p == 0.5) {
        let s = scope(r.n, "p", r.p);
        let (m, v) = (r.isolated_count.mean, r.isolated_count.variance);
        for (name, obs, rel) in [
            ("mean_min", m, ">="),
            ("mean_max", m, "<="),
            ("variance_min", v, ">="),
            ("variance_max", v, "<="),
            ("singletons_min", r.singletons_fraction, ">="),
        ] {
            out.push(CheckResult::new(
                name,
                s.clone(),
                obs,
                rel,
                config.threshold(name),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------- coupling

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingExactRow {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    /// `(size, probability)` atoms of `|L^start|`.
    pub accessible_law: Vec<(usize, f64)>,
    /// `(size, probability)` atoms of the cluster size at `p = beta`.
    pub cluster_law: Vec<(usize, f64)>,
    pub max_atom_error: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingRow {
    pub n: u32,
    pub alpha: f64,
    pub beta: f64,
    pub accessible_size: SummaryStats,
    pub cluster_size: SummaryStats,
    pub two_sample_ks: f64,
    pub failures: usize,
    /// Open frequency of each edge in the coupled configuration (`≤ 64` edges only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_open_frequency: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge_max_abs_z: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CouplingReport {
    pub exact: Vec<CouplingExactRow>,
    pub monte_carlo: Vec<CouplingRow>,
}

/// Exact `|L^0|` and cluster-size laws on the 2-cube.
pub fn coupling_exact(alpha: TieParameter) -> Result<CouplingExactRow> {
    let dim = Dimension::new(2)?;
    let acc = accessible_size_law(dim, alpha, 0)?;
    let clu = cluster_size_law(dim, alpha.beta(), 0)?;
    let mut err = 0.0f64;
    for k in acc.keys().chain(clu.keys()) {
        let a = acc.get(k).copied().unwrap_or(0.0);
        let c = clu.get(k).copied().unwrap_or(0.0);
        err = err.max((a - c).abs());
    }
    Ok(CouplingExactRow {
        n: 2,
        alpha: alpha.alpha(),
        beta: alpha.beta(),
        accessible_law: acc.into_iter().collect(),
        cluster_law: clu.into_iter().collect(),
        max_atom_error: err,
    })
}

pub fn exp_coupling(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, CouplingReport)> {
    let mut exact = Vec::new();
    for &a in &config.params {
        exact.push(coupling_exact(tie(a)?)?);
    }
    let start = config.start;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (rep, dim, a) in groups(config, 1) {
        let alpha = tie(a)?;
        let beta = alpha.beta();
        let with_mask = dim.edge_count() <= 64;
        let recs = run_trials(config, rep, dim, a, |d, _, seed| {
            let cube = MarkSampler::new(d, alpha, seed).materialize();
            let accessible = accessible_set(&cube, start).accessible.len();
            let cluster = cluster_of(&sample_bond(d, beta, seed)?, start).len();
            let coupled = coupled_percolation(&cube, start, seed)?;
            let mask = with_mask.then(|| {
                coupled
                    .bond
                    .flags()
                    .iter()
                    .enumerate()
                    .fold(0u64, |m, (e, &o)| m | (o as u64) << e)
            });
            Ok(Observables {
                accessible_size: Some(accessible),
                cluster_size: Some(cluster),
                coupling_equal: Some(coupling_holds(&cube, start, &coupled)),
                open_mask: mask,
                ..Default::default()
            })
        })?;
        let acc = usize_f64(&column(&recs, |o| o.accessible_size));
        let clu = usize_f64(&column(&recs, |o| o.cluster_size));
        let failures = column(&recs, |o| o.coupling_equal)
            .iter()
            .filter(|&&ok| !ok)
            .count();
        let (freq, zmax) = if with_mask {
            let masks = column(&recs, |o| o.open_mask);
            let mut freq = Vec::with_capacity(dim.edge_count());
            let mut zmax = 0.0f64;
            for e in 0..dim.edge_count() {
                let bits: Vec<f64> = masks.iter().map(|m| (m >> e & 1) as f64).collect();
                let s = SummaryStats::from_samples(&bits)?;
                zmax = zmax.max(z_score(&s, beta));
                freq.push(s.mean);
            }
            (Some(freq), Some(zmax))
        } else {
            (None, None)
        };
        rows.push(CouplingRow {
            n: dim.get(),
            alpha: a,
            beta,
            two_sample_ks: ks_two_sample(&acc, &clu)?,
            accessible_size: SummaryStats::from_samples(&acc)?,
            cluster_size: SummaryStats::from_samples(&clu)?,
            failures,
            edge_open_frequency: freq,
            edge_max_abs_z: zmax,
        });
        records.extend(recs);
    }
    Ok((
        records,
        CouplingReport {
            exact,
            monte_carlo: rows,
        },
    ))
}

pub(super) fn checks_coupling(config: &ExperimentConfig, rep: &CouplingReport) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for r in &rep.exact {
        out.push(CheckResult::new(
            "exact_atom_error_max",
            scope(r.n, "alpha", r.alpha),
            r.max_atom_error,
            "<=",
            config.threshold("exact_atom_error_max"),
        ));
    }
    for r in &rep.monte_carlo {
        let s = scope(r.n, "alpha", r.alpha);
        out.push(CheckResult::new(
            "ks_max",
            s.clone(),
            r.two_sample_ks,
            "<=",
            config.threshold("ks_max"),
        ));
        out.push(CheckResult::new(
            "failures_max",
            s.clone(),
            r.failures as f64,
            "<=",
            config.threshold("failures_max"),
        ));
        if let Some(z) = r.edge_max_abs_z {
            out.push(CheckResult::new(
                "edge_z_max",
                s,
                z,
                "<=",
                config.threshold("edge_z_max"),
            ));
        }
    }
    out
}

// ---------------------------------------------------------------- accessibility

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AccessibilityRow {
    pub n: u32,
    pub alpha: f64,
    pub start: VertexId,
    pub all_accessible_fraction: f64,
    pub unreachable_present_fraction: f64,
    pub unreachable_pne_count: SummaryStats,
    pub all_tie_count: SummaryStats,
    pub pne_count: SummaryStats,
}

pub fn exp_accessibility(
    config: &ExperimentConfig,
) -> Result<(Vec<TrialRecord>, Vec<AccessibilityRow>)> {
    let start = config.start;
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (rep, dim, a) in groups(config, 1) {
        let alpha = tie(a)?;
        let recs = run_trials(config, rep, dim, a, |d, _, seed| {
            let cube = MarkSampler::new(d, alpha, seed).materialize();
            let acc = accessible_set(&cube, start).accessible;
            let (mut pne, mut unreachable) = (0usize, 0usize);
            for v in d.vertices().filter(|&v| is_pne(&cube, v)) {
                pne += 1;
                unreachable += usize::from(!acc.contains(v));
            }
            Ok(Observables {
                pne_count: Some(pne),
                unreachable_pne_count: Some(unreachable),
                all_tie_count: Some(all_tie_vertices(&cube).len()),
                accessible_size: Some(acc.len()),
                ..Default::default()
            })
        })?;
        let unreachable = column(&recs, |o| o.unreachable_pne_count);
        let present: Vec<bool> = unreachable.iter().map(|&u| u > 0).collect();
        rows.push(AccessibilityRow {
            n: dim.get(),
            alpha: a,
            start,
            all_accessible_fraction: 1.0 - fraction(&present),
            unreachable_present_fraction: fraction(&present),
            unreachable_pne_count: SummaryStats::from_samples(&usize_f64(&unreachable))?,
            all_tie_count: SummaryStats::from_samples(&usize_f64(&column(&recs, |o| {
                o.all_tie_count
            })))?,
            pne_count: SummaryStats::from_samples(&usize_f64(&column(&recs, |o| o.pne_count)))?,
        });
        records.extend(recs);
    }
    Ok((records, rows))
}

/// The check applied depends on the regime: `alpha < 1/2`, `= 1/2` or `> 1/2`.
pub(super) fn checks_accessibility(
    config: &ExperimentConfig,
    rows: &[AccessibilityRow],
) -> Vec<CheckResult> {
    rows.iter()
        .map(|r| {
            let s = scope(r.n, "alpha", r.alpha);
            let (name, obs) = if r.alpha < 0.5 {
                ("all_accessible_min", r.all_accessible_fraction)
            } else if r.alpha == 0.5 {
                ("unreachable_critical_min", r.unreachable_present_fraction)
            } else {
                ("unreachable_min", r.unreachable_present_fraction)
            };
            CheckResult::new(name, s, obs, ">=", config.threshold(name))
        })
        .collect()
}

// ---------------------------------------------------------------- brd-steps

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BrdRow {
    pub n: u32,
    pub alpha: f64,
    pub max_steps: u64,
    pub converged: usize,
    pub converged_fraction: f64,
    /// Over converged runs only; absent when none converged.
    pub median_steps: Option<f64>,
    pub steps: Option<SummaryStats>,
}

/// Largest tie parameter for which convergence is guaranteed.
const BRD_ALPHA_MAX: f64 = 0.55;

pub fn exp_brd(config: &ExperimentConfig) -> Result<(Vec<TrialRecord>, Vec<BrdRow>)> {
    let mut records = Vec::new();
    let mut rows = Vec::new();
    for (rep, dim, a) in groups(config, 1) {
        let alpha = tie(a)?;
        let max_steps = config.max_steps.unwrap_or_else(|| default_max_steps(dim));
        let recs = run_trials(config, rep, dim, a, |d, _, seed| {
            let sampler = MarkSampler::new(d, alpha, seed);
            let start = Stream::new(seed, "start").below(0, d.vertex_count() as u32);
            let s = brd_summary(&sampler, start, seed, max_steps);
            Ok(Observables {
                start: Some(start),
                brd_steps: Some(s.steps),
                brd_converged: Some(matches!(s.outcome, BrdOutcome::Converged(_))),
                final_vertex: Some(s.last),
                ..Default::default()
            })
        })?;
        let converged: Vec<f64> = recs
            .iter()
            .filter(|r| r.obs.brd_converged == Some(true))
            .filter_map(|r| r.obs.brd_steps.map(|s| s as f64))
            .collect();
        rows.push(BrdRow {
            n: dim.get(),
            alpha: a,
            max_steps,
            converged: converged.len(),
            converged_fraction: converged.len() as f64 / recs.len() as f64,
            median_steps: median(&converged),
            steps: SummaryStats::from_samples(&converged).ok(),
        });
        records.extend(recs);
    }
    Ok((records, rows))
}

pub(super) fn checks_brd(config: &ExperimentConfig, rows: &[BrdRow]) -> Vec<CheckResult> {
    let mut out = Vec::new();
    for r in rows.iter().filter(|r| r.alpha <= BRD_ALPHA_MAX) {
        out.push(CheckResult::new(
            "converged_min",
            scope(r.n, "alpha", r.alpha),
            r.converged_fraction,
            ">=",
            config.threshold("converged_min"),
        ));
    }
    for &a in &config.params {
        let mut by_n: Vec<&BrdRow> = rows.iter().filter(|r| r.alpha == a).collect();
        by_n.sort_by_key(|r| r.n);
        if by_n.len() < 2 {
            continue;
        }
        let meds: Vec<f64> = by_n
            .iter()
            .map(|r| r.median_steps.unwrap_or(f64::NAN))
            .collect();
        let decreases = if meds.iter().any(|m| m.is_nan()) {
            f64::NAN
        } else {
            meds.windows(2).filter(|w| w[1] < w[0]).count() as f64
        };
        let range = format!("n={}..{} alpha={a}", by_n[0].n, by_n[by_n.len() - 1].n);
        out.push(CheckResult::new(
            "median_decreases_max",
            range.clone(),
            decreases,
            "<=",
            config.threshold("median_decreases_max"),
        ));
        out.push(CheckResult::new(
            "median_ratio_max",
            range,
            meds[meds.len() - 1] / meds[0],
            "<=",
            config.threshold("median_ratio_max"),
        ));
    }
    out
}
