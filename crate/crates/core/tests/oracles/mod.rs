#![allow(dead_code)]
//! Independent reference implementations shared by the test targets.

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Lowess by brute force: for every point, sort all distances, take the
/// r-th smallest as the bandwidth, weight every point by tricube times its
/// robustness weight and solve the 2x2 normal equations directly.
pub fn lowess_oracle(pts: &[(f64, f64)], span: f64, iters: usize) -> Vec<f64> {
    let n = pts.len();
    let r = ((span * n as f64) - 1e-9).ceil() as usize;
    let r = r.min(n);
    let x_range = pts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max)
        - pts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let mut robust = vec![1.0; n];
    let mut fit = vec![0.0; n];
    for pass in 0..=iters {
        for i in 0..n {
            let xi = pts[i].0;
            let mut d: Vec<f64> = pts.iter().map(|p| (p.0 - xi).abs()).collect();
            d.sort_by(f64::total_cmp);
            let h = d[r - 1];
            let w: Vec<f64> = pts
                .iter()
                .zip(&robust)
                .map(|(p, rw)| {
                    rw * if h > 0.0 {
                        tricube_ref((p.0 - xi) / h)
                    } else {
                        1.0
                    }
                })
                .collect();
            let s0: f64 = w.iter().sum();
            let s1: f64 = w.iter().zip(pts).map(|(w, p)| w * p.0).sum();
            let s2: f64 = w.iter().zip(pts).map(|(w, p)| w * p.0 * p.0).sum();
            let t0: f64 = w.iter().zip(pts).map(|(w, p)| w * p.1).sum();
            let t1: f64 = w.iter().zip(pts).map(|(w, p)| w * p.0 * p.1).sum();
            let var = s2 / s0 - (s1 / s0).powi(2);
            fit[i] = if var.max(0.0).sqrt() <= 1e-3 * x_range {
                t0 / s0
            } else {
                let det = s0 * s2 - s1 * s1;
                let b = (s0 * t1 - s1 * t0) / det;
                let a = (t0 - b * s1) / s0;
                a + b * xi
            };
        }
        if pass == iters {
            break;
        }
        let mut abs: Vec<f64> = pts.iter().zip(&fit).map(|(p, f)| (p.1 - f).abs()).collect();
        abs.sort_by(f64::total_cmp);
        let mad = if n % 2 == 1 {
            abs[n / 2]
        } else {
            0.5 * (abs[n / 2 - 1] + abs[n / 2])
        };
        let s = 6.0 * mad;
        let y_range = pts.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max)
            - pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        // residuals already negligible: further passes change nothing
        if s <= 1e-10 * y_range {
            break;
        }
        for (rw, (p, f)) in robust.iter_mut().zip(pts.iter().zip(&fit)) {
            let u = (p.1 - f) / s;
            *rw = if u.abs() < 1.0 {
                (1.0 - u * u).powi(2)
            } else {
                0.0
            };
        }
    }
    fit
}

pub fn tricube_ref(u: f64) -> f64 {
    if u.abs() < 1.0 {
        (1.0 - u.abs().powi(3)).powi(3)
    } else {
        0.0
    }
}

pub fn random_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<(f64, f64)> {
    (0..n)
        .map(|_| {
            let x: f64 = rng.gen_range(0.0..10.0);
            let y = (x * 0.7).sin() * 3.0 + 0.2 * x + rng.gen_range(-1.0..1.0);
            (x, y)
        })
        .collect()
}

pub fn standardized(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let (n, p) = (rows.len(), rows[0].len());
    let mut m = DMatrix::from_fn(n, p, |i, j| rows[i][j]);
    for j in 0..p {
        let mean = m.column(j).mean();
        let var = m.column(j).iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        for i in 0..n {
            m[(i, j)] = (m[(i, j)] - mean) / var.sqrt();
        }
    }
    m
}

/// Scores on the k-th component from nalgebra's symmetric eigensolver, with
/// the loading sign fixed so the first nonzero entry is positive.
pub fn pca_oracle(rows: &[Vec<f64>], k: usize) -> Vec<f64> {
    let m = standardized(rows);
    let corr = m.transpose() * &m / (rows.len() - 1) as f64;
    let eig = corr.symmetric_eigen();
    let mut idx: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let mut v = eig.eigenvectors.column(idx[k - 1]).into_owned();
    if v.iter().find(|x| x.abs() > 1e-12).is_some_and(|x| *x < 0.0) {
        v = -v;
    }
    (m * v).iter().copied().collect()
}

pub fn names(p: usize) -> Vec<String> {
    (0..p).map(|j| format!("c{j}")).collect()
}

pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            let f: f64 = rng.gen_range(-1.0..1.0);
            (0..p)
                .map(|j| {
                    f * (j as f64 + 0.5)
                        + rng.gen_range(-1.0..1.0) * (1.0 + j as f64)
                        + 3.0 * j as f64
                })
                .collect()
        })
        .collect()
}
