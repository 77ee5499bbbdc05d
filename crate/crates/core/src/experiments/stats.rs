//! Summary statistics and goodness-of-fit distances.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

use crate::{Error, Result};

/// Neumaier-compensated sum; the result does not depend on how the
/// summands were produced, only on their order, which callers fix.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in values {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiSquareFit {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    /// 0.999 quantile of the reference chi-square law.
    pub critical_999: f64,
    /// Bin lower edges; the last bin is open-ended.
    pub bin_edges: Vec<u64>,
    pub observed: Vec<u64>,
    pub expected: Vec<f64>,
}

impl ChiSquareFit {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_999
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance (0 when `count == 1`).
    pub variance: f64,
    pub standard_error: f64,
    pub interval: [f64; 2],
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ks_distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chi_square: Option<ChiSquareFit>,
}

impl SummaryStats {
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::Validation("summary of an empty sample".into()));
        }
        let k = samples.len() as f64;
        let mean = compensated_sum(samples.iter().copied()) / k;
        let variance = if samples.len() > 1 {
            compensated_sum(samples.iter().map(|x| (x - mean) * (x - mean))) / (k - 1.0)
        } else {
            0.0
        };
        let se = (variance / k).sqrt();
        Ok(SummaryStats {
            count: samples.len(),
            mean,
            variance,
            standard_error: se,
            interval: [mean - 4.0 * se, mean + 4.0 * se],
            ks_distance: None,
            chi_square: None,
        })
    }

    /// Whether `value` lies in `mean ± 4 SE` (closed interval).
    pub fn covers(&self, value: f64) -> bool {
        self.interval[0] <= value && value <= self.interval[1]
    }
}

/// Standard normal CDF.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / std::f64::consts::SQRT_2)
}

/// One-sample Kolmogorov distance `sup |F_k - cdf|`, evaluated on both sides
/// of every jump of the empirical CDF.
pub fn ks_distance(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Validation("KS distance of an empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let k = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / k - f).max(f - i as f64 / k);
    }
    Ok(d)
}

/// Two-sample Kolmogorov distance `sup |F_a - F_b|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::Validation("KS distance of an empty sample".into()));
    }
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Pearson chi-square of integer counts against Poisson(`lambda`).
///
/// Bins start as `{0}, {1}, {2}, {3}, {≥4}`; scanning upward, a bin whose
/// expected count is below 5 is merged with the next one, and a short
/// remainder at the top joins the last closed bin.
pub fn poisson_chi_square(counts: &[u64], lambda: f64) -> Result<ChiSquareFit> {
    if counts.is_empty() {
        return Err(Error::Validation("chi-square of an empty sample".into()));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Validation(format!(
            "Poisson rate must be > 0, got {lambda}"
        )));
    }
    let law = Poisson::new(lambda).map_err(|e| Error::Validation(e.to_string()))?;
    let total = counts.len() as f64;
    const TOP: u64 = 4;
    let mut raw_expected: Vec<f64> = (0..TOP).map(|k| total * law.pmf(k)).collect();
    raw_expected.push(total * law.sf(TOP - 1));
    let mut raw_observed = vec![0u64; TOP as usize + 1];
    for &c in counts {
        raw_observed[c.min(TOP) as usize] += 1;
    }

    let mut edges = Vec::new();
    let mut observed = Vec::new();
    let mut expected = Vec::new();
    let (mut acc_o, mut acc_e, mut open_edge) = (0u64, 0.0f64, None);
    for k in 0..=TOP as usize {
        open_edge.get_or_insert(k as u64);
        acc_o += raw_observed[k];
        acc_e += raw_expected[k];
        if acc_e >= 5.0 {
            edges.push(open_edge.take().unwrap());
            observed.push(acc_o);
            expected.push(acc_e);
            acc_o = 0;
            acc_e = 0.0;
        }
    }
    if let (Some(_), Some(o), Some(e)) = (open_edge, observed.last_mut(), expected.last_mut()) {
        *o += acc_o;
        *e += acc_e;
    }
    if expected.len() < 2 {
        return Err(Error::Validation(format!(
            "chi-square binning degenerates to {} bin(s) for {} samples at lambda={lambda}",
            expected.len(),
            counts.len()
        )));
    }
    let statistic = compensated_sum(
        observed
            .iter()
            .zip(&expected)
            .map(|(&o, &e)| (o as f64 - e).powi(2) / e),
    );
    let dof = expected.len() - 1;
    Ok(ChiSquareFit {
        statistic,
        degrees_of_freedom: dof,
        critical_999: chi_square_quantile(0.999, dof)?,
        bin_edges: edges,
        observed,
        expected,
    })
}

pub fn chi_square_quantile(p: f64, dof: usize) -> Result<f64> {
    let law = ChiSquared::new(dof as f64).map_err(|e| Error::Validation(e.to_string()))?;
    Ok(law.inverse_cdf(p))
}

/// Median of a nonempty sample (mean of the two central values for even sizes).
pub fn median(samples: &[f64]) -> Option<f64> {
    if samples.is_empty() {
        return None;
    }
    let mut s = samples.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    Some(if s.len() % 2 == 1 {
        s[m]
    } else {
        0.5 * (s[m - 1] + s[m])
    })
}
