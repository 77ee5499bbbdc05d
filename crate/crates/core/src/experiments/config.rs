//! Flat `key = value` experiment configs.
//!
//! ```text
//! # mean PNE count, n = 2..15
//! experiment = mean-pne
//! n = 2..15
//! alpha = 0.5
//! trials = 100
//! seed = 0
//! check.max_abs_z = 4
//! ```
//!
//! Keys: `experiment`, `n` (comma list of integers or inclusive `a..b`
//! ranges), `alpha` (or `p` for `isolated`; comma list), `trials`, `seed`,
//! `max_steps`, `reps`, `start`, `output`, `checks` (`on`/`off`) and
//! `check.<name>`. Text after `#` is a comment. Keys may appear once.

use std::collections::HashSet;
use std::path::PathBuf;

use super::{ExperimentConfig, ExperimentKind};
use crate::hypercube::Dimension;
use crate::{Error, Result};

fn parse_int<T: std::str::FromStr>(s: &str, line: usize, col: usize, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::parse(line, col, format!("bad {what} `{}`", s.trim())))
}

fn parse_dims(value: &str, line: usize, col: usize) -> Result<Vec<Dimension>> {
    let mut out = Vec::new();
    for item in value.split(',') {
        let (lo, hi) = match item.split_once("..") {
            Some((a, b)) => (
                parse_int::<u32>(a, line, col, "n")?,
                parse_int::<u32>(b, line, col, "n")?,
            ),
            None => {
                let n = parse_int::<u32>(item, line, col, "n")?;
                (n, n)
            }
        };
        if lo > hi {
            return Err(Error::parse(
                line,
                col,
                format!("empty range `{}`", item.trim()),
            ));
        }
        for n in lo..=hi {
            out.push(Dimension::new(n).map_err(|e| Error::parse(line, col, e.to_string()))?);
        }
    }
    Ok(out)
}

fn parse_floats(value: &str, line: usize, col: usize) -> Result<Vec<f64>> {
    value
        .split(',')
        .map(|s| {
            let s = s.trim();
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::parse(line, col, format!("bad number `{s}`")))
        })
        .collect()
}

/// Parses a config for experiment `kind`, starting from its preset.
pub fn parse_config(text: &str, kind: ExperimentKind) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::preset(kind);
    let param_key = if kind.takes_bond_probability() {
        "p"
    } else {
        "alpha"
    };
    let mut seen = HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| Error::parse(line, 1, "expected `key = value`"))?;
        let col = body.find('=').map_or(1, |i| i + 2);
        let key = key.trim();
        let value = value.trim();
        if !seen.insert(key.to_string()) {
            return Err(Error::parse(line, 1, format!("duplicate key `{key}`")));
        }
        match key {
            "experiment" => {
                let named: ExperimentKind = value
                    .parse()
                    .map_err(|e: Error| Error::parse(line, col, e.to_string()))?;
                if named != kind {
                    return Err(Error::parse(
                        line,
                        col,
                        format!("config is for `{named}`, not `{kind}`"),
                    ));
                }
            }
            "n" => cfg.n_values = parse_dims(value, line, col)?,
            k if k == param_key => cfg.params = parse_floats(value, line, col)?,
            "trials" => cfg.trials = parse_int(value, line, col, "trial count")?,
            "seed" => cfg.master_seed = parse_int(value, line, col, "seed")?,
            "max_steps" => cfg.max_steps = Some(parse_int(value, line, col, "step cap")?),
            "reps" => cfg.reps = parse_int(value, line, col, "repetition count")?,
            "start" => cfg.start = parse_int(value, line, col, "start vertex")?,
            "output" => cfg.output = Some(PathBuf::from(value)),
            "checks" => {
                cfg.checks_enabled = match value {
                    "on" => true,
                    "off" => false,
                    _ => return Err(Error::parse(line, col, "checks must be `on` or `off`")),
                }
            }
            k if k.starts_with("check.") => {
                let name = &k["check.".len()..];
                let v = parse_floats(value, line, col)?;
                if v.len() != 1 {
                    return Err(Error::parse(line, col, "a check takes a single number"));
                }
                cfg.threshold_overrides.push((name.to_string(), v[0]));
            }
            _ => {
                return Err(Error::parse(
                    line,
                    1,
                    format!("unknown key `{key}` for experiment {kind}"),
                ))
            }
        }
    }
    cfg.validate()?;
    Ok(cfg)
}
