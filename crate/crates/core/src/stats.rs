//! Goodness-of-fit tests and least-squares fits used by the experiments.

use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, StudentsT};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TestResult {
    pub statistic: f64,
    pub p_value: f64,
    pub samples: u64,
}

impl TestResult {
    pub fn passes(&self, alpha: f64) -> bool {
        self.p_value >= alpha
    }
}

/// Pearson chi-square of `observed` counts against `k` equally likely classes.
/// Classes never observed may be left out of `observed`; they still count.
pub fn chi_square_uniform(observed: &[u64], k: usize) -> TestResult {
    assert!(observed.len() <= k && k >= 2);
    let n: u64 = observed.iter().sum();
    let e = n as f64 / k as f64;
    let seen: f64 = observed.iter().map(|&o| (o as f64 - e).powi(2) / e).sum();
    let statistic = seen + (k - observed.len()) as f64 * e;
    let dist = ChiSquared::new((k - 1) as f64).unwrap();
    TestResult {
        statistic,
        p_value: dist.sf(statistic),
        samples: n,
    }
}

/// Survival function of the Kolmogorov distribution.
pub fn kolmogorov_sf(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.3 {
        // The alternating series converges slowly here and the value is 1
        // to double precision.
        return 1.0;
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Kolmogorov–Smirnov test of samples on `{1, 2, …}` against the geometric law
/// `P(X = x) = (1 − q)^{x−1} q`. The asymptotic p-value is conservative for a
/// discrete law.
pub fn ks_geometric(samples: &[u64], q: f64) -> TestResult {
    assert!(!samples.is_empty() && q > 0.0 && q <= 1.0);
    let mut xs = samples.to_vec();
    xs.sort_unstable();
    let n = xs.len() as f64;
    let cdf = |x: u64| 1.0 - (1.0 - q).powf(x as f64);
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < xs.len() {
        let x = xs[i];
        let mut j = i;
        while j < xs.len() && xs[j] == x {
            j += 1;
        }
        // The empirical cdf jumps only at observed values, and the model cdf
        // is constant between integers.
        d = d.max((j as f64 / n - cdf(x)).abs());
        d = d.max((i as f64 / n - cdf(x - 1)).abs());
        i = j;
    }
    TestResult {
        statistic: d,
        p_value: kolmogorov_sf(d * n.sqrt()),
        samples: xs.len() as u64,
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
    /// Half-width of the 95% confidence interval for the slope.
    pub slope_ci95: f64,
    pub points: usize,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> LinearFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let (stderr, ci) = if x.len() > 2 {
        let rss: f64 = x
            .iter()
            .zip(y)
            .map(|(a, b)| (b - intercept - slope * a).powi(2))
            .sum();
        let se = (rss / (n - 2.0) / sxx).sqrt();
        let t = StudentsT::new(0.0, 1.0, n - 2.0).unwrap().inverse_cdf(0.975);
        (se, t * se)
    } else {
        (f64::NAN, f64::NAN)
    };
    LinearFit {
        slope,
        intercept,
        slope_stderr: stderr,
        slope_ci95: ci,
        points: x.len(),
    }
}

/// Fit of `ln y` on `ln x` over the points with both coordinates positive.
pub fn log_log_fit(x: &[f64], y: &[f64]) -> LinearFit {
    let (lx, ly): (Vec<f64>, Vec<f64>) = x
        .iter()
        .zip(y)
        .filter(|(a, b)| **a > 0.0 && **b > 0.0)
        .map(|(a, b)| (a.ln(), b.ln()))
        .unzip();
    linear_fit(&lx, &ly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn chi_square_flat_counts() {
        let r = chi_square_uniform(&[100, 100, 100, 100], 4);
        assert_eq!(r.statistic, 0.0);
        assert!((r.p_value - 1.0).abs() < 1e-12);
        let r = chi_square_uniform(&[400], 4);
        assert!(r.p_value < 1e-10);
    }

    #[test]
    fn kolmogorov_known_values() {
        assert!((kolmogorov_sf(1.36) - 0.0494).abs() < 1e-3);
        assert!((kolmogorov_sf(1.95) - 0.0010).abs() < 1e-4);
    }

    #[test]
    fn ks_accepts_geometric_and_rejects_shifted() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let q = 0.2;
        let xs: Vec<u64> = (0..5000)
            .map(|_| {
                let mut k = 1;
                while !rng.gen_bool(q) {
                    k += 1;
                }
                k
            })
            .collect();
        assert!(ks_geometric(&xs, q).passes(1e-3));
        assert!(!ks_geometric(&xs, 0.3).passes(1e-3));
    }

    #[test]
    fn exact_line() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let y = [3.0, 5.0, 7.0, 9.0];
        let f = linear_fit(&x, &y);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        assert!(f.slope_stderr < 1e-9);
    }
}
