//! Seeded Monte Carlo experiments.
//!
//! Each experiment maps an [`ExperimentConfig`] to a list of [`TrialRecord`]s
//! and a JSON summary. Trial `t` of group `(rep, n, param)` draws everything
//! from a seed that depends only on the master seed, the experiment name and
//! those indices, so results do not depend on the thread schedule.

mod config;
mod kernels;
mod output;
pub mod stats;
mod thresholds;

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::hypercube::{Dimension, VertexId};
use crate::rng::Stream;
use crate::{Error, Result};

pub use config::parse_config;
pub use kernels::{
    exp_accessibility, exp_brd, exp_clt, exp_coupling, exp_isolated, exp_mean_pne, exp_spne,
    AccessibilityRow, BrdRow, CltRow, CouplingExactRow, CouplingReport, CouplingRow, IsolatedRow,
    MeanPneRow, SpneRow,
};
pub use output::{records_csv, summary_json, write_outputs};
pub use stats::{ks_distance, normal_cdf, poisson_chi_square, SummaryStats};
pub use thresholds::{default_threshold, threshold_names};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    MeanPne,
    Clt,
    Spne,
    Isolated,
    Coupling,
    Accessibility,
    BrdSteps,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::MeanPne,
        ExperimentKind::Clt,
        ExperimentKind::Spne,
        ExperimentKind::Isolated,
        ExperimentKind::Coupling,
        ExperimentKind::Accessibility,
        ExperimentKind::BrdSteps,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::MeanPne => "mean-pne",
            ExperimentKind::Clt => "clt",
            ExperimentKind::Spne => "spne",
            ExperimentKind::Isolated => "isolated",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::Accessibility => "accessibility",
            ExperimentKind::BrdSteps => "brd-steps",
        }
    }

    /// Observable columns after the fixed `experiment,n,alpha,trial,seed`.
    pub fn columns(self) -> &'static [Column] {
        use Column::*;
        match self {
            ExperimentKind::MeanPne => &[PneCount],
            ExperimentKind::Clt => &[Rep, PneCount, CltStat],
            ExperimentKind::Spne => &[SpneCount],
            ExperimentKind::Isolated => &[IsolatedCount, LargestSize, RestSingletons],
            ExperimentKind::Coupling => &[AccessibleSize, ClusterSize, CouplingEqual, OpenMask],
            ExperimentKind::Accessibility => {
                &[PneCount, UnreachablePneCount, AllTieCount, AccessibleSize]
            }
            ExperimentKind::BrdSteps => &[Start, BrdSteps, BrdConverged, FinalVertex],
        }
    }

    /// Whether the per-group parameter is a bond probability rather than alpha.
    pub fn takes_bond_probability(self) -> bool {
        self == ExperimentKind::Isolated
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = ExperimentKind::ALL.iter().map(|k| k.name()).collect();
                Error::Validation(format!(
                    "unknown experiment `{s}` (expected one of: {})",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n_values: Vec<Dimension>,
    /// Tie parameters, or bond probabilities for `isolated`.
    pub params: Vec<f64>,
    pub trials: usize,
    pub master_seed: u64,
    /// BRD step cap; `None` means `64 n 2^n`.
    pub max_steps: Option<u64>,
    /// Independent repetitions of the whole trial set (used by `clt`).
    pub reps: usize,
    /// Start vertex for `accessibility` and `coupling`.
    pub start: VertexId,
    /// Output prefix; `<prefix>.csv` and `<prefix>.json` are written.
    pub output: Option<PathBuf>,
    pub checks_enabled: bool,
    pub threshold_overrides: Vec<(String, f64)>,
}

impl ExperimentConfig {
    /// Defaults reproducing the reference setting of each experiment.
    pub fn preset(kind: ExperimentKind) -> Self {
        let dims = |r: std::ops::RangeInclusive<u32>| -> Vec<Dimension> {
            r.map(|n| Dimension::new(n).expect("preset dimension"))
                .collect()
        };
        let (n_values, params, trials) = match kind {
            ExperimentKind::MeanPne => (dims(2..=15), vec![0.5], 100),
            ExperimentKind::Clt => (dims(15..=15), vec![0.9], 500),
            ExperimentKind::Spne => (dims(12..=12), vec![0.0], 2000),
            ExperimentKind::Isolated => (dims(12..=12), vec![0.5], 2000),
            ExperimentKind::Coupling => (dims(8..=8), vec![0.5], 10_000),
            ExperimentKind::Accessibility => (dims(14..=14), vec![0.3, 0.5, 0.7], 1000),
            ExperimentKind::BrdSteps => (dims(8..=16), vec![0.5], 100),
        };
        ExperimentConfig {
            kind,
            n_values,
            params,
            trials,
            master_seed: 0,
            max_steps: None,
            reps: 1,
            start: 0,
            output: None,
            checks_enabled: true,
            threshold_overrides: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(msg));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if self.reps == 0 {
            return bad("reps must be at least 1".into());
        }
        if self.n_values.is_empty() {
            return bad("at least one value of n is required".into());
        }
        if self.params.is_empty() {
            return bad("at least one parameter value is required".into());
        }
        for &p in &self.params {
            if !(0.0..=1.0).contains(&p) {
                return bad(format!("parameter {p} is outside [0, 1]"));
            }
            if self.kind == ExperimentKind::Clt && p == 0.0 {
                return bad("clt needs alpha > 0".into());
            }
        }
        for d in &self.n_values {
            d.check_vertex(self.start)?;
        }
        let known = threshold_names(self.kind);
        for (name, _) in &self.threshold_overrides {
            if !known.contains(&name.as_str()) {
                return bad(format!(
                    "unknown check `{name}` for {} (known: {})",
                    self.kind,
                    known.join(", ")
                ));
            }
        }
        Ok(())
    }

    pub fn threshold(&self, name: &str) -> f64 {
        self.threshold_overrides
            .iter()
            .rev()
            .find(|(k, _)| k == name)
            .map_or_else(|| default_threshold(self.kind, name), |&(_, v)| v)
    }
}

/// Per-trial observables; each experiment fills the subset named by its columns.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Observables {
    pub pne_count: Option<usize>,
    pub spne_count: Option<usize>,
    pub clt_stat: Option<f64>,
    pub brd_steps: Option<u64>,
    pub brd_converged: Option<bool>,
    pub isolated_count: Option<usize>,
    pub largest_size: Option<usize>,
    pub unreachable_pne_count: Option<usize>,
    pub all_tie_count: Option<usize>,
    pub rest_singletons: Option<bool>,
    pub accessible_size: Option<usize>,
    pub cluster_size: Option<usize>,
    pub coupling_equal: Option<bool>,
    /// Open edges of the coupled bond configuration as a bit mask (at most 64 edges).
    pub open_mask: Option<u64>,
    pub start: Option<VertexId>,
    pub final_vertex: Option<VertexId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Column {
    Rep,
    PneCount,
    SpneCount,
    CltStat,
    BrdSteps,
    BrdConverged,
    IsolatedCount,
    LargestSize,
    UnreachablePneCount,
    AllTieCount,
    RestSingletons,
    AccessibleSize,
    ClusterSize,
    CouplingEqual,
    OpenMask,
    Start,
    FinalVertex,
}

impl Column {
    pub fn name(self) -> &'static str {
        match self {
            Column::Rep => "rep",
            Column::PneCount => "pne_count",
            Column::SpneCount => "spne_count",
            Column::CltStat => "clt_stat",
            Column::BrdSteps => "brd_steps",
            Column::BrdConverged => "brd_converged",
            Column::IsolatedCount => "isolated_count",
            Column::LargestSize => "largest_size",
            Column::UnreachablePneCount => "unreachable_pne_count",
            Column::AllTieCount => "all_tie_count",
            Column::RestSingletons => "rest_singletons",
            Column::AccessibleSize => "accessible_size",
            Column::ClusterSize => "cluster_size",
            Column::CouplingEqual => "coupling_equal",
            Column::OpenMask => "open_mask",
            Column::Start => "start",
            Column::FinalVertex => "final_vertex",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrialRecord {
    pub n: u32,
    /// Tie parameter, or bond probability for `isolated`.
    pub alpha: f64,
    pub rep: usize,
    pub trial: usize,
    pub seed: u64,
    pub obs: Observables,
}

impl TrialRecord {
    /// CSV cell for `col`; empty when the observable is absent.
    pub fn cell(&self, col: Column) -> String {
        fn opt<T: ToString>(v: &Option<T>) -> String {
            v.as_ref().map_or_else(String::new, T::to_string)
        }
        let o = &self.obs;
        match col {
            Column::Rep => self.rep.to_string(),
            Column::PneCount => opt(&o.pne_count),
            Column::SpneCount => opt(&o.spne_count),
            Column::CltStat => opt(&o.clt_stat),
            Column::BrdSteps => opt(&o.brd_steps),
            Column::BrdConverged => opt(&o.brd_converged),
            Column::IsolatedCount => opt(&o.isolated_count),
            Column::LargestSize => opt(&o.largest_size),
            Column::UnreachablePneCount => opt(&o.unreachable_pne_count),
            Column::AllTieCount => opt(&o.all_tie_count),
            Column::RestSingletons => opt(&o.rest_singletons),
            Column::AccessibleSize => opt(&o.accessible_size),
            Column::ClusterSize => opt(&o.cluster_size),
            Column::CouplingEqual => opt(&o.coupling_equal),
            Column::OpenMask => opt(&o.open_mask),
            Column::Start => opt(&o.start),
            Column::FinalVertex => opt(&o.final_vertex),
        }
    }
}

/// Seed of trial `trial` in group `(rep, n, param)`.
pub fn trial_seed(
    master_seed: u64,
    kind: ExperimentKind,
    rep: usize,
    n: u32,
    param: f64,
    trial: usize,
) -> u64 {
    Stream::new(master_seed, kind.name())
        .substream(rep as u64)
        .substream(n as u64)
        .substream(param.to_bits())
        .word(trial as u64)
}

/// Runs `kernel(dim, param, seed)` for every trial of one group, in parallel,
/// returning records in trial order.
pub fn run_trials<K>(
    config: &ExperimentConfig,
    rep: usize,
    dim: Dimension,
    param: f64,
    kernel: K,
) -> Result<Vec<TrialRecord>>
where
    K: Fn(Dimension, f64, u64) -> Result<Observables> + Sync,
{
    (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let seed = trial_seed(config.master_seed, config.kind, rep, dim.get(), param, t);
            Ok(TrialRecord {
                n: dim.get(),
                alpha: param,
                rep,
                trial: t,
                seed,
                obs: kernel(dim, param, seed)?,
            })
        })
        .collect()
}

/// Outcome of one acceptance check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    /// Group the check was evaluated on, e.g. `n=12 alpha=0.5`.
    pub scope: String,
    pub observed: f64,
    pub threshold: f64,
    /// `"<="`, `">="` or `"<"`.
    pub relation: &'static str,
    pub passed: bool,
}

impl CheckResult {
    fn new(
        name: &str,
        scope: String,
        observed: f64,
        relation: &'static str,
        threshold: f64,
    ) -> Self {
        let passed = match relation {
            "<=" => observed <= threshold,
            ">=" => observed >= threshold,
            "<" => observed < threshold,
            _ => unreachable!("unknown relation {relation}"),
        };
        CheckResult {
            name: name.to_string(),
            scope,
            observed,
            threshold,
            relation,
            passed,
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}]: observed {} {} {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.scope,
            self.observed,
            self.relation,
            self.threshold
        )
    }
}

/// Everything an experiment run produces.
#[derive(Clone, Debug)]
pub struct ExperimentOutput {
    pub config: ExperimentConfig,
    pub records: Vec<TrialRecord>,
    pub report: serde_json::Value,
    pub checks: Vec<CheckResult>,
}

impl ExperimentOutput {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Runs the configured experiment.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    config.validate()?;
    let (records, report, checks) = match config.kind {
        ExperimentKind::MeanPne => {
            let (r, rows) = exp_mean_pne(config)?;
            let c = kernels::checks_mean_pne(config, &rows);
            (r, json(&rows)?, c)
        }
        ExperimentKind::Clt => {
            let (r, rows) = exp_clt(config)?;
            let c = kernels::checks_clt(config, &rows);
            (r, json(&rows)?, c)
        }
        ExperimentKind::Spne => {
            let (r, rows) = exp_spne(config)?;
            let c = kernels::checks_spne(config, &rows)?;
            (r, json(&rows)?, c)
        }
        ExperimentKind::Isolated => {
            let (r, rows) = exp_isolated(config)?;
            let c = kernels::checks_isolated(config, &rows);
            (r, json(&rows)?, c)
        }
        ExperimentKind::Coupling => {
            let (r, rep) = exp_coupling(config)?;
            let c = kernels::checks_coupling(config, &rep);
            (r, json(&rep)?, c)
        }
        ExperimentKind::Accessibility => {
            let (r, rows) = exp_accessibility(config)?;
            let c = kernels::checks_accessibility(config, &rows);
            (r, json(&rows)?, c)
        }
        ExperimentKind::BrdSteps => {
            let (r, rows) = exp_brd(config)?;
            let c = kernels::checks_brd(config, &rows);
            (r, json(&rows)?, c)
        }
    };
    let checks = if config.checks_enabled {
        checks
    } else {
        Vec::new()
    };
    Ok(ExperimentOutput {
        config: config.clone(),
        records,
        report,
        checks,
    })
}

fn json<T: Serialize>(value: &T) -> Result<serde_json::Value> {
    serde_json::to_value(value).map_err(|e| Error::Internal(format!("report serialization: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kind_names_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(k.name().parse::<ExperimentKind>().unwrap(), k);
        }
        assert!("fig4".parse::<ExperimentKind>().is_err());
    }

    #[test]
    fn seeds_depend_on_every_index() {
        let k = ExperimentKind::MeanPne;
        let base = trial_seed(1, k, 0, 8, 0.5, 3);
        assert_eq!(base, trial_seed(1, k, 0, 8, 0.5, 3));
        for other in [
            trial_seed(2, k, 0, 8, 0.5, 3),
            trial_seed(1, ExperimentKind::Clt, 0, 8, 0.5, 3),
            trial_seed(1, k, 1, 8, 0.5, 3),
            trial_seed(1, k, 0, 9, 0.5, 3),
            trial_seed(1, k, 0, 8, 0.25, 3),
            trial_seed(1, k, 0, 8, 0.5, 4),
        ] {
            assert_ne!(base, other);
        }
    }

    #[test]
    fn single_trial_gives_one_record() {
        let mut c = ExperimentConfig::preset(ExperimentKind::MeanPne);
        c.trials = 1;
        c.n_values = vec![Dimension::new(4).unwrap()];
        let out = run(&c).unwrap();
        assert_eq!(out.records.len(), 1);
        assert_eq!(out.records[0].trial, 0);
    }

    #[test]
    fn validation() {
        let mut c = ExperimentConfig::preset(ExperimentKind::Clt);
        c.params = vec![0.0];
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::preset(ExperimentKind::MeanPne);
        c.trials = 0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::preset(ExperimentKind::MeanPne);
        c.threshold_overrides.push(("nonsense".into(), 1.0));
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::preset(ExperimentKind::Accessibility);
        c.start = 1 << 20;
        assert!(c.validate().is_err());
    }

    #[test]
    fn overrides_take_the_last_value() {
        let mut c = ExperimentConfig::preset(ExperimentKind::Clt);
        assert_eq!(c.threshold("ks_max"), 0.08);
        c.threshold_overrides.push(("ks_max".into(), 0.1));
        c.threshold_overrides.push(("ks_max".into(), 0.2));
        assert_eq!(c.threshold("ks_max"), 0.2);
    }
}
