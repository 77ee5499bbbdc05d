//! CSV trial records and JSON summaries.

use std::path::{Path, PathBuf};

use serde_json::json;

use super::{ExperimentKind, ExperimentOutput, TrialRecord};
use crate::{Error, Result};

pub const FORMAT_VERSION: u32 = 1;

/// CSV with header `experiment,n,alpha,trial,seed,<observables...>`.
pub fn records_csv(kind: ExperimentKind, records: &[TrialRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| Error::Internal(format!("csv encoding: {e}"));
    let mut header = vec!["experiment", "n", "alpha", "trial", "seed"];
    header.extend(kind.columns().iter().map(|c| c.name()));
    w.write_record(&header).map_err(fail)?;
    for r in records {
        let mut row = vec![
            kind.name().to_string(),
            r.n.to_string(),
            r.alpha.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
        ];
        row.extend(kind.columns().iter().map(|&c| r.cell(c)));
        w.write_record(&row).map_err(fail)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Internal(format!("csv encoding: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Internal(e.to_string()))
}

/// Pretty-printed summary document, newline terminated.
pub fn summary_json(out: &ExperimentOutput) -> String {
    let c = &out.config;
    let n: Vec<u32> = c.n_values.iter().map(|d| d.get()).collect();
    let param_key = if c.kind.takes_bond_probability() {
        "p"
    } else {
        "alpha"
    };
    let doc = json!({
        "format": FORMAT_VERSION,
        "experiment": c.kind.name(),
        "config": {
            "n": n,
            param_key: c.params,
            "trials": c.trials,
            "master_seed": c.master_seed,
            "max_steps": c.max_steps,
            "reps": c.reps,
            "start": c.start,
        },
        "report": out.report,
        "checks": out.checks,
        "passed": out.passed(),
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("summary serializes");
    s.push('\n');
    s
}

/// Writes `<prefix>.csv` and `<prefix>.json`, creating parent directories.
pub fn write_outputs(out: &ExperimentOutput, prefix: &Path) -> Result<(PathBuf, PathBuf)> {
    let with_ext = |ext: &str| {
        let mut p = prefix.as_os_str().to_owned();
        p.push(ext);
        PathBuf::from(p)
    };
    let (csv_path, json_path) = (with_ext(".csv"), with_ext(".json"));
    if let Some(dir) = prefix.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let csv = records_csv(out.config.kind, &out.records)?;
    std::fs::write(&csv_path, csv).map_err(|e| Error::io(&csv_path, e))?;
    std::fs::write(&json_path, summary_json(out)).map_err(|e| Error::io(&json_path, e))?;
    Ok((csv_path, json_path))
}
