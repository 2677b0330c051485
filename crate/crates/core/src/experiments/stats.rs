//! Summary statistics, two-sample Kolmogorov–Smirnov and chi-square tests.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub distance: f64,
    pub n1: usize,
    pub n2: usize,
    /// Asymptotic Kolmogorov p-value.
    pub p_value: f64,
}

/// Two-sample KS distance on raw samples. Equal values are stepped over
/// together, so ties never create spurious jumps.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> KsResult {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n1, n2) = (x.len(), y.len());
    let (mut i, mut j, mut d) = (0, 0, 0.0f64);
    while i < n1 && j < n2 {
        let v = if x[i] <= y[j] { x[i] } else { y[j] };
        while i < n1 && x[i] == v {
            i += 1;
        }
        while j < n2 && y[j] == v {
            j += 1;
        }
        d = d.max((i as f64 / n1 as f64 - j as f64 / n2 as f64).abs());
    }
    let ne = (n1 * n2) as f64 / (n1 + n2) as f64;
    KsResult { distance: d, n1, n2, p_value: kolmogorov_p(d, ne) }
}

/// `P(K > λ)` for the Kolmogorov distribution at
/// `λ = (√n + 0.12 + 0.11/√n)·d`.
pub fn kolmogorov_p(d: f64, n_eff: f64) -> f64 {
    let s = n_eff.sqrt();
    let lambda = (s + 0.12 + 0.11 / s) * d;
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    let mut sign = 1.0;
    for k in 1..=100 {
        let term = sign * (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        sum += term;
        if term.abs() < 1e-12 * sum.abs() {
            break;
        }
        sign = -sign;
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: f64,
    pub sd: f64,
    pub stderr: f64,
}

pub fn moments(xs: &[f64]) -> Moments {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = if xs.len() > 1 { xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Moments { mean, sd: var.sqrt(), stderr: (var / n).sqrt() }
}

/// Linear-interpolation quantile of sorted data.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChiSquare {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson goodness of fit of counts against cell probabilities.
pub fn chi_square(observed: &[u64], probs: &[f64]) -> ChiSquare {
    let total: u64 = observed.iter().sum();
    let norm: f64 = probs.iter().sum();
    let statistic = observed
        .iter()
        .zip(probs)
        .map(|(&o, &p)| {
            let e = total as f64 * p / norm;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    let df = observed.len().saturating_sub(1).max(1);
    let p_value = 1.0 - ChiSquared::new(df as f64).expect("positive df").cdf(statistic);
    ChiSquare { statistic, df, p_value }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub slope_stderr: f64,
}

/// Least squares `y = a + b x`.
pub fn fit_line(x: &[f64], y: &[f64]) -> LineFit {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = x.iter().zip(y).map(|(a, b)| (b - intercept - slope * a).powi(2)).sum();
    let slope_stderr = if x.len() > 2 { (rss / (n - 2.0) / sxx).sqrt() } else { f64::NAN };
    LineFit { slope, intercept, slope_stderr }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ks_of_identical_samples_is_zero() {
        let a = [1.0, 2.0, 2.0, 3.0];
        assert_eq!(ks_two_sample(&a, &a).distance, 0.0);
        let r = ks_two_sample(&[0.0, 1.0], &[2.0, 3.0]);
        assert_eq!(r.distance, 1.0);
    }

    #[test]
    fn ks_handles_ties_across_samples() {
        // both step at 1 together (1/2 vs 1/4), then 1 vs 1/4 at 2
        let r = ks_two_sample(&[1.0, 2.0], &[1.0, 3.0, 3.0, 3.0]);
        assert!((r.distance - 0.75).abs() < 1e-15);
        let r = ks_two_sample(&[1.0, 1.0], &[1.0]);
        assert_eq!(r.distance, 0.0);
    }

    #[test]
    fn kolmogorov_tail_values() {
        // classical critical value 1.358 at the 5% level
        assert!((kolmogorov_p(1.358e-3, 1e6) - 0.05).abs() < 1e-3);
        assert_eq!(kolmogorov_p(0.0, 100.0), 1.0);
    }

    #[test]
    fn quantiles_and_fits() {
        let s = sorted(&[3.0, 1.0, 2.0]);
        assert_eq!(quantile(&s, 0.5), 2.0);
        assert_eq!(quantile(&s, 0.25), 1.5);
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[1.0, 3.0, 5.0, 7.0]);
        assert!((f.slope - 2.0).abs() < 1e-12 && (f.intercept - 1.0).abs() < 1e-12);
        let c = chi_square(&[50, 50], &[0.5, 0.5]);
        assert_eq!(c.statistic, 0.0);
        assert!((c.p_value - 1.0).abs() < 1e-12);
    }
}
