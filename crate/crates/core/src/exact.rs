//! Exhaustive enumeration over every mark (or bond) configuration of a small cube.
//!
//! A census tabulates an integer observable against the number of ties (or
//! open edges) of each configuration. Weighting the table by
//! `alpha^ties * beta^(E - ties)` (resp. `p^open (1-p)^(E - open)`) then gives
//! the exact law of the observable for any parameter without re-enumerating.

use std::collections::BTreeMap;

use crate::dynamics::accessible_set;
use crate::equilibrium::count_pne;
use crate::hypercube::{Dimension, VertexId};
use crate::percolation::{cluster_of, BondConfig};
use crate::randgame::{EdgeMark, OrientedCube, TieParameter};
use crate::{Error, Result};

/// Enumeration is refused beyond this many edges (3^16 ≈ 4.3e7 configurations).
pub const MAX_EXACT_EDGES: usize = 16;

/// Occurrence counts keyed by `(special edges, observable value)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    edges: usize,
    table: BTreeMap<(usize, usize), u64>,
}

impl Census {
    fn law(&self, special: f64, other: f64) -> BTreeMap<usize, f64> {
        let mut out = BTreeMap::new();
        for (&(k, value), &count) in &self.table {
            let w = special.powi(k as i32) * other.powi((self.edges - k) as i32);
            *out.entry(value).or_insert(0.0) += count as f64 * w;
        }
        out
    }

    pub fn configurations(&self) -> u64 {
        self.table.values().sum()
    }
}

fn check_size(dim: Dimension) -> Result<usize> {
    let e = dim.edge_count();
    if e > MAX_EXACT_EDGES {
        return Err(Error::Validation(format!(
            "exact enumeration supports at most {MAX_EXACT_EDGES} edges, n={dim} has {e}"
        )));
    }
    Ok(e)
}

/// Tabulate `observable` over all `3^E` mark configurations.
pub fn mark_census(dim: Dimension, observable: impl Fn(&OrientedCube) -> usize) -> Result<Census> {
    let edges = check_size(dim)?;
    const CYCLE: [EdgeMark; 3] = [EdgeMark::Tie, EdgeMark::TowardOne, EdgeMark::TowardZero];
    let mut digits = vec![0u8; edges];
    let mut cube = OrientedCube::all_tie(dim);
    let mut table = BTreeMap::new();
    loop {
        let ties = digits.iter().filter(|&&d| d == 0).count();
        *table.entry((ties, observable(&cube))).or_insert(0) += 1;
        // odometer increment
        let mut k = 0;
        loop {
            if k == edges {
                return Ok(Census { edges, table });
            }
            digits[k] = (digits[k] + 1) % 3;
            cube.set_mark(k, CYCLE[digits[k] as usize]);
            if digits[k] != 0 {
                break;
            }
            k += 1;
        }
    }
}

/// Tabulate `observable` over all `2^E` bond configurations.
pub fn bond_census(dim: Dimension, observable: impl Fn(&BondConfig) -> usize) -> Result<Census> {
    let edges = check_size(dim)?;
    let mut table = BTreeMap::new();
    let mut bond = BondConfig::all(dim, false);
    for mask in 0u64..(1u64 << edges) {
        for e in 0..edges {
            bond.set(e, mask >> e & 1 == 1);
        }
        *table
            .entry((mask.count_ones() as usize, observable(&bond)))
            .or_insert(0) += 1;
    }
    Ok(Census { edges, table })
}

/// Exact law of an observable of the random oriented cube.
pub fn mark_law(census: &Census, alpha: TieParameter) -> BTreeMap<usize, f64> {
    census.law(alpha.alpha(), alpha.beta())
}

/// Exact law of an observable of bond percolation with open probability `p`.
pub fn bond_law(census: &Census, p: f64) -> BTreeMap<usize, f64> {
    census.law(p, 1.0 - p)
}

/// Mean and variance of a law on the integers.
pub fn moments(law: &BTreeMap<usize, f64>) -> (f64, f64) {
    let mean: f64 = law.iter().map(|(&k, &w)| k as f64 * w).sum();
    let var: f64 = law
        .iter()
        .map(|(&k, &w)| (k as f64 - mean).powi(2) * w)
        .sum();
    (mean, var)
}

/// Exact mean and variance of the PNE count.
pub fn pne_count_moments(dim: Dimension, alpha: TieParameter) -> Result<(f64, f64)> {
    let census = mark_census(dim, count_pne)?;
    Ok(moments(&mark_law(&census, alpha)))
}

/// Exact law of `|L^start|` in the oriented model.
pub fn accessible_size_law(
    dim: Dimension,
    alpha: TieParameter,
    start: VertexId,
) -> Result<BTreeMap<usize, f64>> {
    let census = mark_census(dim, |c| accessible_set(c, start).accessible.len())?;
    Ok(mark_law(&census, alpha))
}

/// Exact law of the size of the cluster of `start` under bond percolation.
pub fn cluster_size_law(dim: Dimension, p: f64, start: VertexId) -> Result<BTreeMap<usize, f64>> {
    let census = bond_census(dim, |b| cluster_of(b, start).len())?;
    Ok(bond_law(&census, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::{count_spne, mean_spne};

    fn dim(n: u32) -> Dimension {
        Dimension::new(n).unwrap()
    }

    #[test]
    fn census_visits_every_configuration_once() {
        let c = mark_census(dim(2), |_| 0).unwrap();
        assert_eq!(c.configurations(), 81);
        let b = bond_census(dim(2), |_| 0).unwrap();
        assert_eq!(b.configurations(), 16);
        assert!(mark_census(dim(4), |_| 0).is_err());
    }

    #[test]
    fn laws_are_normalized() {
        let census = mark_census(dim(2), count_pne).unwrap();
        for a in [0.0, 0.3, 1.0] {
            let total: f64 = mark_law(&census, TieParameter::new(a).unwrap())
                .values()
                .sum();
            assert!((total - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn single_edge_law() {
        // |PNE| = 1 + 1{tie}
        let a = TieParameter::new(0.3).unwrap();
        let law = mark_law(&mark_census(dim(1), count_pne).unwrap(), a);
        assert_eq!(law.len(), 2);
        assert!((law[&2] - 0.3).abs() < 1e-15);
        assert!((law[&1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn spne_mean_by_enumeration() {
        let a = TieParameter::new(0.5).unwrap();
        let law = mark_law(&mark_census(dim(2), count_spne).unwrap(), a);
        let (mean, _) = moments(&law);
        assert!((mean - 0.25).abs() < 1e-14);
        assert!((mean - mean_spne(2, a)).abs() < 1e-14);
    }
}
