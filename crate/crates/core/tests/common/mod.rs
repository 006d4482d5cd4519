//! Closed-form reference distributions, written independently of the library
//! so Monte-Carlo runs of the estimators can be checked against them.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Angle with sin²θ = p.
pub fn theta(p: f64) -> f64 {
    p.sqrt().asin()
}

/// Smallest m with m² ≥ 1/p, found by counting up.
pub fn iterations_for(p: f64) -> u64 {
    let mut m = 1u64;
    while ((m * m) as f64) * p < 1.0 {
        m += 1;
    }
    m
}

/// Success probability of one measurement after `m` iterates.
pub fn amplified(p: f64, m: u64) -> f64 {
    ((2 * m + 1) as f64 * theta(p)).sin().powi(2)
}

/// Probe at assumed probability `assumed`, true probability `p`.
pub fn probe_success(p: f64, assumed: f64) -> f64 {
    amplified(p, iterations_for(assumed))
}

/// Where a doubling run stops: `Some(j)` for a success at round j, `None` for the floor.
pub fn doubling_distribution(p: f64, epsilon: f64) -> BTreeMap<Option<u32>, f64> {
    let mut out = BTreeMap::new();
    let mut alive = 1.0;
    let mut j = 0u32;
    loop {
        let assumed = 0.5f64.powi(j as i32);
        let s = probe_success(p, assumed);
        *out.entry(Some(j)).or_insert(0.0) += alive * s;
        alive *= 1.0 - s;
        if assumed < epsilon {
            out.insert(None, alive);
            return out;
        }
        j += 1;
    }
}

/// Iterates applied by a doubling run that stops at round j: Σ_{i ≤ j} m_i.
pub fn doubling_cumulative_iterations(j: u32) -> u64 {
    (0..=j).map(|i| iterations_for(0.5f64.powi(i as i32))).sum()
}

/// Outcome of a bisection run: segment endpoints as bit patterns plus the closed flag.
pub type SegmentKey = (u64, u64, bool);

pub fn key(low: f64, high: f64, closed: bool) -> SegmentKey {
    (low.to_bits(), high.to_bits(), closed)
}

/// Exact law of the segment returned by the bisection estimator.
pub fn bisection_distribution(p: f64, epsilon: f64) -> BTreeMap<SegmentKey, f64> {
    let mut out = BTreeMap::new();
    let s = probe_success(p, 0.5);
    out.insert(key(0.5, 1.0, true), s);
    let mut stack = vec![(0.0f64, 0.5f64, 1.0 - s)];
    while let Some((left, right, weight)) = stack.pop() {
        if weight == 0.0 {
            continue;
        }
        let mid = 0.5 * (left + right);
        let s = probe_success(p, mid);
        for (l, r, w) in [(mid, right, weight * s), (left, mid, weight * (1.0 - s))] {
            let done = (l > 0.0 && iterations_for(l) == iterations_for(r)) || r < 0.01 || r - l < epsilon;
            if done {
                *out.entry(key(l, r, false)).or_insert(0.0) += w;
            } else {
                stack.push((l, r, w));
            }
        }
    }
    out
}

/// Expected A-applications of QSearch with growth `c` and `max_rounds`.
pub fn qsearch_expected_a(p: f64, c: f64, max_rounds: u32) -> f64 {
    let mut expected = 1.0;
    let mut alive = 1.0 - p;
    for l in 1..=max_rounds {
        let m = c.powi(l as i32).ceil() as u64;
        let mean_cost = 1.0 + (m + 1) as f64 / 2.0;
        let mean_success = (1..=m).map(|j| amplified(p, j)).sum::<f64>() / m as f64;
        expected += alive * mean_cost;
        alive *= 1.0 - mean_success;
    }
    expected
}

/// Probability of each phase-estimation outcome y ∈ [0, M) when sin²θ = p.
pub fn est_amp_distribution(p: f64, m: usize) -> Vec<f64> {
    let phase = m as f64 * theta(p) / PI;
    let fejer = |d: f64| {
        let den = m as f64 * (PI * d / m as f64).sin();
        if den.abs() < 1e-12 {
            1.0
        } else {
            ((PI * d).sin() / den).powi(2)
        }
    };
    (0..m).map(|y| 0.5 * (fejer(y as f64 - phase) + fejer(y as f64 + phase))).collect()
}

/// Doubling ladder rows: [½, 1], then [2^-(k+1), 2^-k).
pub fn doubling_row(p: f64) -> Option<usize> {
    if (0.5..=1.0).contains(&p) {
        return Some(0);
    }
    (1..30).find(|&k| p >= 0.5f64.powi(k + 1) && p < 0.5f64.powi(k)).map(|k| k as usize)
}

/// Bisection ladder rows, monotone, ending at the 0.01 cutoff bracket.
pub const BISECTION_LADDER: [(f64, f64); 8] = [
    (0.5, 1.0),
    (0.25, 0.5),
    (0.125, 0.25),
    (0.0625, 0.125),
    (0.046875, 0.0625),
    (0.03125, 0.046875),
    (0.0234375, 0.03125),
    (0.015625, 0.0234375),
];

/// Bisection ladder row that contains the segment [low, high).
pub fn bisection_row(low: f64, high: f64) -> Option<usize> {
    BISECTION_LADDER.iter().position(|&(l, h)| low >= l && high <= h)
}

pub fn bisection_row_of(p: f64) -> Option<usize> {
    BISECTION_LADDER.iter().position(|&(l, h)| p >= l && (p < h || (h == 1.0 && p <= 1.0)))
}

/// Index of the largest weight; ties go to the earliest key.
pub fn mode<K: Clone + Ord>(weights: &BTreeMap<K, f64>) -> K {
    let mut best: Option<(&K, f64)> = None;
    for (k, &w) in weights {
        if best.is_none_or(|(_, bw)| w > bw) {
            best = Some((k, w));
        }
    }
    best.unwrap().0.clone()
}

/// Pearson chi-square p-value of `observed` counts against `expected`
/// probabilities, pooling cells with expected count below 5.
pub fn chi_square_p_value(observed: &[u64], expected: &[f64]) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    let n: u64 = observed.iter().sum();
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let (mut pool_o, mut pool_e) = (0.0, 0.0);
    for (&o, &e) in observed.iter().zip(expected) {
        let e = e * n as f64;
        if e >= 5.0 {
            cells.push((o as f64, e));
        } else {
            pool_o += o as f64;
            pool_e += e;
        }
    }
    if pool_e > 0.0 {
        if pool_e >= 5.0 || cells.is_empty() {
            cells.push((pool_o, pool_e));
        } else {
            let last = cells.last_mut().unwrap();
            last.0 += pool_o;
            last.1 += pool_e;
        }
    }
    if cells.len() < 2 {
        return 1.0;
    }
    let stat: f64 = cells.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    ChiSquared::new((cells.len() - 1) as f64).unwrap().sf(stat)
}

/// Binomial two-sided normal-approximation p-value for `hits` out of `n` at rate `q`.
pub fn binomial_p_value(hits: u64, n: u64, q: f64) -> f64 {
    use statrs::distribution::{ContinuousCDF, Normal};
    let sd = (n as f64 * q * (1.0 - q)).sqrt();
    if sd == 0.0 {
        return if hits as f64 == n as f64 * q { 1.0 } else { 0.0 };
    }
    let z = ((hits as f64 - n as f64 * q).abs() - 0.5).max(0.0) / sd;
    2.0 * Normal::new(0.0, 1.0).unwrap().sf(z)
}
