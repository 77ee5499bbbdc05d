//! Acceptance thresholds for every experiment check.
//!
//! The underlying results are limit statements; every number below is a
//! calibration for desk-scale sample sizes, overridable per config with
//! `check.<name> = <value>`.

use super::ExperimentKind;

struct Threshold {
    kind: ExperimentKind,
    name: &'static str,
    value: f64,
}

const fn t(kind: ExperimentKind, name: &'static str, value: f64) -> Threshold {
    Threshold { kind, name, value }
}

use ExperimentKind::*;

const TABLE: &[Threshold] = &[
    // |sample mean - (1+alpha)^n| / SE; a 4-SE band
    t(MeanPne, "max_abs_z", 4.0),
    // KS of the rescaled count against the standard normal at 500 trials
    t(Clt, "ks_max", 0.08),
    // mean KS at the largest n minus mean KS at the smallest n must be below this
    t(Clt, "ks_decay", 0.0),
    // Poisson(1) mean and chi-square level at alpha = 0, 2000 trials
    t(Spne, "mean_min", 0.85),
    t(Spne, "mean_max", 1.15),
    t(Spne, "chi_square_level", 0.999),
    // trials with at least one SPNE when alpha > 0
    t(Spne, "spne_trials_max", 0.0),
    // Poisson(1) moments of isolated vertices at p = 1/2, 2000 trials
    t(Isolated, "mean_min", 0.85),
    t(Isolated, "mean_max", 1.15),
    t(Isolated, "variance_min", 0.8),
    t(Isolated, "variance_max", 1.25),
    // fraction of trials whose non-largest components are all singletons
    t(Isolated, "singletons_min", 0.9),
    // exact n = 2 laws, per atom
    t(Coupling, "exact_atom_error_max", 1e-12),
    // two-sample KS at 10^4 trials per side
    t(Coupling, "ks_max", 0.03),
    t(Coupling, "failures_max", 0.0),
    // per-edge open frequency vs beta, in SE units
    t(Coupling, "edge_z_max", 4.0),
    // alpha < 1/2: every PNE accessible
    t(Accessibility, "all_accessible_min", 0.95),
    // alpha = 1/2: some PNE unreachable with positive probability
    t(Accessibility, "unreachable_critical_min", 0.3),
    // alpha > 1/2: inaccessible PNE all but certain
    t(Accessibility, "unreachable_min", 0.9),
    // convergence frequency for alpha <= 0.55
    t(BrdSteps, "converged_min", 0.98),
    // number of decreases of the median step count along increasing n
    t(BrdSteps, "median_decreases_max", 0.0),
    // median(largest n) / median(smallest n)
    t(BrdSteps, "median_ratio_max", 16.0),
];

pub fn threshold_names(kind: ExperimentKind) -> Vec<&'static str> {
    TABLE
        .iter()
        .filter(|t| t.kind == kind)
        .map(|t| t.name)
        .collect()
}

/// Panics on a name not in the table; config validation rejects those first.
pub fn default_threshold(kind: ExperimentKind, name: &str) -> f64 {
    TABLE
        .iter()
        .find(|t| t.kind == kind && t.name == name)
        .unwrap_or_else(|| panic!("no threshold `{name}` for {kind}"))
        .value
}
