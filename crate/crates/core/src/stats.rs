//! Small descriptive statistics used by the experiment reports.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Fraction of `sorted` that is `<= m`.
pub fn ecdf_at(sorted: &[f64], m: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    sorted.partition_point(|&x| x <= m) as f64 / sorted.len() as f64
}

/// Nearest-rank quantile: the smallest sample with ECDF at least `p`.
pub fn quantile_nearest_rank(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of an empty sample");
    let rank = (p.clamp(0.0, 1.0) * sorted.len() as f64).ceil() as usize;
    sorted[rank.clamp(1, sorted.len()) - 1]
}

pub fn median(sorted: &[f64]) -> f64 {
    assert!(!sorted.is_empty(), "median of an empty sample");
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Unbiased sample standard deviation; zero for fewer than two samples.
pub fn std_dev(xs: &[f64]) -> f64 {
    if xs.len() < 2 {
        return 0.0;
    }
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

pub fn standard_error(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        std_dev(xs) / (xs.len() as f64).sqrt()
    }
}

/// Half-width of a 95% interval for a binomial proportion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProportionInterval {
    pub half_width: f64,
    pub standard_error: f64,
    /// True when both `n p̂ >= 10` and `n (1 - p̂) >= 10`, so the Wald
    /// interval was used; otherwise the Wilson score interval.
    pub wald: bool,
}

pub fn proportion_interval(p_hat: f64, n: usize) -> ProportionInterval {
    if n == 0 {
        return ProportionInterval {
            half_width: 0.0,
            standard_error: 0.0,
            wald: false,
        };
    }
    let nf = n as f64;
    let wald_se = (p_hat * (1.0 - p_hat) / nf).sqrt();
    if nf * p_hat >= 10.0 && nf * (1.0 - p_hat) >= 10.0 {
        return ProportionInterval {
            half_width: Z95 * wald_se,
            standard_error: wald_se,
            wald: true,
        };
    }
    let z2 = Z95 * Z95;
    let half = Z95 / (1.0 + z2 / nf) * (p_hat * (1.0 - p_hat) / nf + z2 / (4.0 * nf * nf)).sqrt();
    ProportionInterval {
        half_width: half,
        standard_error: half / Z95,
        wald: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BootstrapSummary {
    /// Half the width of the 2.5%–97.5% percentile interval.
    pub half_width: f64,
    /// Standard deviation of the resampled statistic.
    pub standard_error: f64,
}

/// Percentile bootstrap of the median with a seeded ChaCha stream.
pub fn bootstrap_median(data: &[f64], resamples: usize, seed: u64) -> BootstrapSummary {
    if data.len() < 2 || resamples == 0 {
        return BootstrapSummary {
            half_width: 0.0,
            standard_error: 0.0,
        };
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scratch = vec![0.0; data.len()];
    let mut medians = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        for slot in scratch.iter_mut() {
            *slot = data[rng.gen_range(0..data.len())];
        }
        scratch.sort_unstable_by(f64::total_cmp);
        medians.push(median(&scratch));
    }
    let se = std_dev(&medians);
    medians.sort_unstable_by(f64::total_cmp);
    let lo = quantile_nearest_rank(&medians, 0.025);
    let hi = quantile_nearest_rank(&medians, 0.975);
    BootstrapSummary {
        half_width: 0.5 * (hi - lo),
        standard_error: se,
    }
}

/// One-sample Kolmogorov–Smirnov statistic against Uniform[0, 1).
pub fn ks_uniform(sorted: &[f64]) -> f64 {
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let above = (i + 1) as f64 / n - x;
            let below = x - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max)
}

/// Two-sample Kolmogorov–Smirnov statistic.
pub fn ks_two_sample(a_sorted: &[f64], b_sorted: &[f64]) -> f64 {
    let (na, nb) = (a_sorted.len() as f64, b_sorted.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < a_sorted.len() && j < b_sorted.len() {
        let x = a_sorted[i].min(b_sorted[j]);
        while i < a_sorted.len() && a_sorted[i] <= x {
            i += 1;
        }
        while j < b_sorted.len() && b_sorted[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic coefficient `c(α)` with critical value `c(α)/√n_eff`.
pub fn ks_coefficient(alpha: f64) -> f64 {
    (-0.5 * (alpha / 2.0).ln()).sqrt()
}

pub fn ks_critical_one_sample(n: usize, alpha: f64) -> f64 {
    ks_coefficient(alpha) / (n as f64).sqrt()
}

pub fn ks_critical_two_sample(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_coefficient(alpha) * ((n + m) / (n * m)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ecdf_and_quantiles() {
        let xs = [1.0, 2.0, 2.0, 3.0, 10.0];
        assert_eq!(ecdf_at(&xs, 0.5), 0.0);
        assert_eq!(ecdf_at(&xs, 2.0), 0.6);
        assert_eq!(ecdf_at(&xs, 10.0), 1.0);
        assert_eq!(quantile_nearest_rank(&xs, 0.5), 2.0);
        assert_eq!(quantile_nearest_rank(&xs, 0.9), 10.0);
        assert_eq!(quantile_nearest_rank(&xs, 0.0), 1.0);
        assert_eq!(median(&xs), 2.0);
        assert_eq!(median(&[1.0, 4.0]), 2.5);
    }

    #[test]
    fn mean_and_spread() {
        let xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0];
        assert_eq!(mean(&xs), 5.0);
        assert!((std_dev(&xs) - (32.0f64 / 7.0).sqrt()).abs() < 1e-12);
        assert_eq!(std_dev(&[3.0]), 0.0);
    }

    #[test]
    fn proportion_intervals() {
        let w = proportion_interval(0.5, 400);
        assert!(w.wald);
        assert!((w.half_width - Z95 * 0.025).abs() < 1e-12);
        let edge = proportion_interval(0.0, 50);
        assert!(!edge.wald);
        assert!(edge.half_width > 0.0);
        assert!(proportion_interval(1.0, 2).half_width > 0.0);
    }

    #[test]
    fn bootstrap_degenerate_and_reproducible() {
        let flat = vec![7.0; 50];
        let b = bootstrap_median(&flat, 1000, 1);
        assert_eq!((b.half_width, b.standard_error), (0.0, 0.0));
        let xs: Vec<f64> = (0..101).map(|i| i as f64).collect();
        let a = bootstrap_median(&xs, 500, 9);
        assert_eq!(a, bootstrap_median(&xs, 500, 9));
        assert!(a.half_width > 0.0 && a.standard_error > 0.0);
    }

    #[test]
    fn ks_statistics() {
        // Evenly spaced midpoints are the closest possible fit: D = 1/(2n).
        let n = 100;
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        assert!((ks_uniform(&xs) - 0.005).abs() < 1e-12);
        assert_eq!(ks_two_sample(&xs, &xs), 0.0);
        let shifted: Vec<f64> = xs.iter().map(|x| x + 10.0).collect();
        assert_eq!(ks_two_sample(&xs, &shifted), 1.0);
        assert!((ks_coefficient(0.05) - 1.3581).abs() < 1e-3);
        assert!((ks_coefficient(0.01) - 1.6276).abs() < 1e-3);
    }
}
