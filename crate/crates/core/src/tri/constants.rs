use serde::{Deserialize, Serialize};

use super::ttree::GwParams;
use crate::trees::increment_vectors;

/// Moments of a multitype Galton–Watson tree with label displacements,
/// enough to get the contour and label scaling constants.
#[derive(Clone, Debug)]
pub struct MultitypeMoments {
    /// `mean[i][j]`: expected number of type-j children of a type-i vertex.
    pub mean: Vec<Vec<f64>>,
    /// `fact2[i][j][k]`: `E[N_j N_k − 1{j=k} N_j]` for a type-i parent.
    pub fact2: Vec<Vec<Vec<f64>>>,
    /// `disp[i][j]`: expected sum, over the type-j children of a type-i
    /// vertex, of the variance of their label displacement.
    pub disp: Vec<Vec<f64>>,
    /// The type whose population is the size parameter.
    pub counted: usize,
}

/// Perron data and scaling constants of a critical multitype tree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scaling {
    pub spectral_radius: f64,
    /// Left eigenvector, summing to 1.
    pub a: Vec<f64>,
    /// Right eigenvector, normalized by `a·b = 1`.
    pub b: Vec<f64>,
    pub a_q_b: f64,
    pub lambda: f64,
    pub sigma2: f64,
    pub kappa: f64,
}

const TOL: f64 = 1e-15;
const MAX_ITER: usize = 1_000_000;

/// Perron eigenvector of `m` (right if `left` is false) by power iteration
/// on `(m + I)/2`; the shift removes the periodicity of the type graph.
/// Returns the eigenvector (max-norm 1) and the spectral radius of `m`.
pub fn perron_vector(m: &[Vec<f64>], left: bool) -> (Vec<f64>, f64) {
    let d = m.len();
    let mut x = vec![1.0; d];
    let mut rho = 0.0;
    for _ in 0..MAX_ITER {
        let mut y = vec![0.0; d];
        for i in 0..d {
            for j in 0..d {
                let mij = if left { m[j][i] } else { m[i][j] };
                y[i] += mij * x[j];
            }
        }
        for i in 0..d {
            y[i] = 0.5 * (y[i] + x[i]);
        }
        let norm = y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
        rho = 2.0 * norm - 1.0;
        for v in &mut y {
            *v /= norm;
        }
        let diff = x.iter().zip(&y).fold(0.0f64, |acc, (a, b)| acc.max((a - b).abs()));
        x = y;
        if diff < TOL {
            break;
        }
    }
    (x, rho)
}

impl MultitypeMoments {
    pub fn scaling(&self) -> Scaling {
        let d = self.mean.len();
        let (mut a, rho) = perron_vector(&self.mean, true);
        let (mut b, _) = perron_vector(&self.mean, false);
        let sa: f64 = a.iter().sum();
        for v in &mut a {
            *v /= sa;
        }
        let ab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        for v in &mut b {
            *v /= ab;
        }
        let mut a_q_b = 0.0;
        let mut sigma2 = 0.0;
        for i in 0..d {
            let mut q = 0.0;
            for j in 0..d {
                for k in 0..d {
                    q += self.fact2[i][j][k] * b[j] * b[k];
                }
                sigma2 += a[i] * self.disp[i][j] * b[j];
            }
            a_q_b += a[i] * q;
        }
        let lambda = (a_q_b * a[self.counted]).sqrt();
        let kappa = (lambda / 2.0).sqrt() / sigma2.sqrt();
        Scaling { spectral_radius: rho, a, b, a_q_b, lambda, sigma2, kappa }
    }
}

/// Moments of the critical four-type tree behind triangulations, with
/// type-2 labels shifted by −1/2 so every displacement is centered.
pub fn tri_moments(gw: GwParams) -> MultitypeMoments {
    let (beta, alpha) = (gw.beta, gw.alpha);
    let z = vec![0.0; 4];
    let mut mean = vec![z.clone(); 4];
    let geo_mean = beta / (1.0 - beta);
    mean[0][2] = geo_mean;
    mean[1][3] = 1.0;
    mean[2][1] = 1.0;
    mean[3][0] = alpha;
    mean[3][1] = 2.0 * (1.0 - alpha);
    let mut fact2 = vec![vec![z.clone(); 4]; 4];
    fact2[0][2][2] = 2.0 * geo_mean * geo_mean;
    fact2[3][1][1] = 2.0 * (1.0 - alpha);
    let mut disp = vec![z; 4];
    // a fair {0,1} step into type 2 and a fair {−1,0} step into type 1
    disp[2][1] = 0.25;
    disp[3][0] = alpha * 0.25;
    MultitypeMoments { mean, fact2, disp, counted: 0 }
}

/// Moments of the two-type tree behind 2p-angulations (type 0 white,
/// type 1 black), with displacement variances summed exactly over the
/// uniform increment vectors.
pub fn bipartite_moments(p: usize) -> MultitypeMoments {
    let pf = p as f64;
    let m = 1.0 / (pf - 1.0);
    let mean = vec![vec![0.0, m], vec![pf - 1.0, 0.0]];
    let beta = 1.0 / pf;
    let mut fact2 = vec![vec![vec![0.0; 2]; 2]; 2];
    fact2[0][1][1] = 2.0 * (beta / (1.0 - beta)).powi(2);
    fact2[1][0][0] = (pf - 1.0) * (pf - 2.0);
    let vecs = increment_vectors(p);
    let count = vecs.len() as f64;
    let mut total = 0.0;
    for c in 1..p {
        let sums: Vec<f64> = vecs.iter().map(|v| v[..c].iter().sum::<i32>() as f64).collect();
        let mu = sums.iter().sum::<f64>() / count;
        total += sums.iter().map(|s| (s - mu).powi(2)).sum::<f64>() / count;
    }
    let disp = vec![vec![0.0, 0.0], vec![total, 0.0]];
    MultitypeMoments { mean, fact2, disp, counted: 1 }
}

/// Scaling constants for 2p-angulations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteConstants {
    pub p: usize,
    pub lambda_p: f64,
    pub kappa_p: f64,
    /// `(9/(q(q−2)))^{1/4}` at `q = 2p`.
    pub c_q: f64,
}

/// Numerically derived constants for triangulations and 2p-angulations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriConstants {
    pub beta: f64,
    pub alpha: f64,
    pub mean: Vec<Vec<f64>>,
    pub spectral_radius: f64,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_q_b: f64,
    pub lambda: f64,
    pub sigma2: f64,
    pub kappa: f64,
    /// `κ · 2^{1/4}`: the constant for distances rescaled by the face count.
    pub c_3: f64,
    pub bipartite: Vec<BipartiteConstants>,
}

/// Distance scaling constant `c_q` for q-angulations, q = 3 or q even.
pub fn c_q(q: usize) -> f64 {
    if q == 3 {
        6f64.powf(0.25)
    } else {
        let q = q as f64;
        (9.0 / (q * (q - 2.0))).powf(0.25)
    }
}

/// Closed forms the numerics are compared against.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosedForms {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub a_q_b: f64,
    pub lambda: f64,
    pub sigma2: f64,
    pub kappa: f64,
}

impl ClosedForms {
    pub fn triangulations() -> Self {
        let s3 = 3f64.sqrt();
        let z = 6.0 - s3;
        ClosedForms {
            a: vec![1.0 / z, (3.0 - s3) / z, (s3 - 1.0) / z, (3.0 - s3) / z],
            b: vec![z / 4.0 * (s3 - 1.0), z / 4.0, z / 4.0, z / 4.0],
            a_q_b: (6.0 - 3.0 * s3) * z / 8.0,
            lambda: (3.0 - s3) / 4.0,
            sigma2: (s3 - 1.0) / 8.0,
            kappa: 3f64.powf(0.25),
        }
    }
}

/// Bipartite closed forms `λ_p = ½√(p/(p−1))`, `κ_p = (9/(4p(p−1)))^{1/4}`.
pub fn bipartite_closed_forms(p: usize) -> (f64, f64) {
    let pf = p as f64;
    (0.5 * (pf / (pf - 1.0)).sqrt(), (9.0 / (4.0 * pf * (pf - 1.0))).powf(0.25))
}

/// Computes all constants numerically from the offspring laws.
pub fn verify_tri_constants() -> TriConstants {
    let gw = GwParams::critical();
    let mom = tri_moments(gw);
    let s = mom.scaling();
    let bipartite = (2..=5)
        .map(|p| {
            let sp = bipartite_moments(p).scaling();
            BipartiteConstants { p, lambda_p: sp.lambda, kappa_p: sp.kappa, c_q: c_q(2 * p) }
        })
        .collect();
    TriConstants {
        beta: gw.beta,
        alpha: gw.alpha,
        mean: mom.mean,
        spectral_radius: s.spectral_radius,
        c_3: s.kappa * 2f64.powf(0.25),
        a: s.a,
        b: s.b,
        a_q_b: s.a_q_b,
        lambda: s.lambda,
        sigma2: s.sigma2,
        kappa: s.kappa,
        bipartite,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn triangulation_constants_match_closed_forms() {
        let c = verify_tri_constants();
        let f = ClosedForms::triangulations();
        assert!((c.spectral_radius - 1.0).abs() < EPS);
        for i in 0..4 {
            assert!((c.a[i] - f.a[i]).abs() < EPS, "a[{i}]");
            assert!((c.b[i] - f.b[i]).abs() < EPS, "b[{i}]");
        }
        assert!((c.a_q_b - f.a_q_b).abs() < EPS);
        assert!((c.lambda - f.lambda).abs() < EPS);
        assert!((c.sigma2 - f.sigma2).abs() < EPS);
        assert!((c.kappa - f.kappa).abs() < EPS);
        assert!((c.c_3 - c_q(3)).abs() < EPS);
    }

    #[test]
    fn bipartite_constants_match_closed_forms() {
        for b in verify_tri_constants().bipartite {
            let (l, k) = bipartite_closed_forms(b.p);
            assert!((b.lambda_p - l).abs() < EPS, "p={}", b.p);
            assert!((b.kappa_p - k).abs() < EPS, "p={}", b.p);
            assert!((b.kappa_p - b.c_q).abs() < EPS);
        }
    }

    #[test]
    fn decimal_values() {
        assert!((c_q(4) - (9.0f64 / 8.0).powf(0.25)).abs() < 1e-15);
        assert!((c_q(6) - (3.0f64 / 8.0).powf(0.25)).abs() < 1e-15);
    }
}
