//! Order statistics over trial batches.

use super::{TrialBatch, Variant};

/// Two-sided coverage of the median interval.
const CI_ALPHA: f64 = 0.05;

/// Median; the mean of the two middle values for even counts. NaN if empty.
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        v[n / 2]
    } else {
        midpoint(v[n / 2 - 1], v[n / 2])
    }
}

fn midpoint(a: f64, b: f64) -> f64 {
    if a == b {
        a
    } else {
        a + (b - a) / 2.0
    }
}

/// Linear-interpolation percentile (`p` in [0, 100]) of sorted order
/// statistics. Infinite values are allowed.
pub fn percentile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    let h = (v.len() - 1) as f64 * (p / 100.0).clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    let f = h - lo as f64;
    if lo == hi || f == 0.0 || v[lo] == v[hi] {
        v[lo]
    } else if v[hi].is_infinite() {
        v[hi]
    } else {
        v[lo] + f * (v[hi] - v[lo])
    }
}

/// 1-based ranks `(j, n - j + 1)` of the distribution-free 95% interval for
/// the median: the largest `j` with `P(B(n, 1/2) <= j - 1) <= 0.025`.
/// `None` when `n` is too small for any such `j`.
pub fn median_ci_ranks(n: usize) -> Option<(usize, usize)> {
    if n == 0 {
        return None;
    }
    // ln C(n, k) accumulated incrementally.
    let ln_half_n = n as f64 * 0.5f64.ln();
    let mut ln_choose = 0.0;
    let mut cdf = 0.0;
    let mut best = None;
    for k in 0..n {
        if k > 0 {
            ln_choose += ((n - k + 1) as f64).ln() - (k as f64).ln();
        }
        cdf += (ln_choose + ln_half_n).exp();
        if cdf <= CI_ALPHA / 2.0 {
            best = Some(k + 1);
        } else {
            break;
        }
    }
    best.map(|j| (j, n - j + 1))
}

/// Threshold used for time-to-3-sigma, taken from a reference batch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaReference {
    pub variant: Variant,
    pub median_final: f64,
    /// Half the 15.9th to 84.1st percentile spread of final costs.
    pub sigma: f64,
}

impl SigmaReference {
    pub fn threshold(&self) -> f64 {
        self.median_final + 3.0 * self.sigma
    }
}

pub fn sigma_reference(batch: &TrialBatch) -> SigmaReference {
    let finals = batch.final_costs();
    let hi = percentile(&finals, 84.1);
    let lo = percentile(&finals, 15.9);
    let sigma = if hi == lo { 0.0 } else { (hi - lo) / 2.0 };
    SigmaReference {
        variant: batch.variant,
        median_final: median(&finals),
        sigma,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggregateStats {
    pub variant: Variant,
    pub checkpoints: Vec<usize>,
    pub median_cost: Vec<f64>,
    /// Lower interval bound per checkpoint; `None` where the interval is
    /// degenerate (too few trials, or more than half unsolved).
    pub ci_low: Vec<Option<f64>>,
    pub ci_high: Vec<Option<f64>>,
    /// Non-parametric spread of this batch's final costs.
    pub sigma_nonparam: f64,
    /// Threshold the per-trial times below refer to.
    pub threshold: f64,
    /// Seconds until each trial first reached the threshold, `None` if never.
    pub time_to_3sigma: Vec<Option<f64>>,
    /// Iterations until each trial first reached the threshold.
    pub iterations_to_3sigma: Vec<Option<usize>>,
    pub final_costs: Vec<f64>,
    pub seeds: Vec<u64>,
}

impl AggregateStats {
    pub fn is_degenerate(&self, checkpoint_index: usize) -> bool {
        self.ci_low[checkpoint_index].is_none()
    }

    /// Median of the per-trial times, never-reached counting as infinite.
    pub fn median_time_to_3sigma(&self) -> f64 {
        let t: Vec<f64> = self
            .time_to_3sigma
            .iter()
            .map(|t| t.unwrap_or(f64::INFINITY))
            .collect();
        median(&t)
    }

    pub fn median_iterations_to_3sigma(&self) -> f64 {
        let t: Vec<f64> = self
            .iterations_to_3sigma
            .iter()
            .map(|t| t.map_or(f64::INFINITY, |i| i as f64))
            .collect();
        median(&t)
    }

    pub fn median_final(&self) -> f64 {
        median(&self.final_costs)
    }
}

/// Per-checkpoint medians with order-statistic intervals, plus per-trial
/// time to reach `reference.threshold()`. Trials without a solution at a
/// checkpoint count as infinite cost.
pub fn aggregate(batch: &TrialBatch, checkpoints: &[usize], reference: &SigmaReference) -> AggregateStats {
    let n = batch.trials.len();
    let ranks = median_ci_ranks(n);
    let mut median_cost = Vec::with_capacity(checkpoints.len());
    let mut ci_low = Vec::with_capacity(checkpoints.len());
    let mut ci_high = Vec::with_capacity(checkpoints.len());
    for &cp in checkpoints {
        let mut costs: Vec<f64> = batch.trials.iter().map(|t| t.cost_at(cp)).collect();
        costs.sort_by(f64::total_cmp);
        median_cost.push(median(&costs));
        let unsolved = costs.iter().filter(|c| c.is_infinite()).count();
        match ranks {
            Some((j, k)) if 2 * unsolved <= n => {
                ci_low.push(Some(costs[j - 1]));
                ci_high.push(Some(costs[k - 1]));
            }
            _ => {
                ci_low.push(None);
                ci_high.push(None);
            }
        }
    }
    let threshold = reference.threshold();
    let reached: Vec<Option<(usize, f64)>> = batch.trials.iter().map(|t| t.first_reaching(threshold)).collect();
    let own = sigma_reference(batch);
    AggregateStats {
        variant: batch.variant,
        checkpoints: checkpoints.to_vec(),
        median_cost,
        ci_low,
        ci_high,
        sigma_nonparam: own.sigma,
        threshold,
        time_to_3sigma: reached.iter().map(|r| r.map(|(_, t)| t)).collect(),
        iterations_to_3sigma: reached.iter().map(|r| r.map(|(i, _)| i)).collect(),
        final_costs: batch.final_costs(),
        seeds: batch.seeds.clone(),
    }
}
