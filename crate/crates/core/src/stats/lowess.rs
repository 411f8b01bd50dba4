//! Locally weighted linear scatterplot smoothing (Cleveland's lowess).
//!
//! For every point the `r = ceil(span * n)` nearest abscissas form the local
//! neighborhood; weights are tricube in distance scaled by the largest
//! distance in the neighborhood, and the local weighted line is evaluated at
//! the point. Each robustness pass reweights points with the bisquare of the
//! residual over six median absolute residuals and refits.

use serde::{Deserialize, Serialize};

use super::StatsError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowessParams {
    /// Fraction of points in each local neighborhood, in (0, 1].
    pub span: f64,
    pub robust_iters: usize,
}

impl Default for LowessParams {
    fn default() -> Self {
        LowessParams {
            span: 2.0 / 3.0,
            robust_iters: 3,
        }
    }
}

impl LowessParams {
    pub fn new(span: f64, robust_iters: usize) -> Self {
        LowessParams { span, robust_iters }
    }

    /// Neighborhood size for `n` points.
    pub fn neighborhood(&self, n: usize) -> Result<usize, StatsError> {
        if !(self.span > 0.0 && self.span <= 1.0) {
            return Err(StatsError::InvalidSpan {
                span: self.span,
                size: 0,
                n,
            });
        }
        // the epsilon keeps exact products such as 2/3 * 51 from rounding up
        let r = ((self.span * n as f64) - 1e-9).ceil().max(0.0) as usize;
        let r = r.min(n);
        if r < 2 {
            return Err(StatsError::InvalidSpan {
                span: self.span,
                size: r,
                n,
            });
        }
        Ok(r)
    }
}

/// Tricube kernel `(1 - |u|^3)^3` on `|u| < 1`, zero elsewhere.
pub fn tricube(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        0.0
    } else {
        let t = 1.0 - a * a * a;
        t * t * t
    }
}

fn bisquare(u: f64) -> f64 {
    let a = u.abs();
    if a >= 1.0 {
        0.0
    } else {
        let t = 1.0 - a * a;
        t * t
    }
}

/// Relative size below which the local weighted spread of x is treated as
/// zero and the local fit falls back to the weighted mean.
const FLAT_NEIGHBORHOOD: f64 = 1e-3;

/// Robustness passes stop once six median absolute residuals fall below this
/// fraction of the y range.
const EXACT_FIT: f64 = 1e-10;

fn check_points(points: &[(f64, f64)]) -> Result<(), StatsError> {
    if points.len() < 3 {
        return Err(StatsError::TooFewPoints(points.len()));
    }
    if let Some(i) = points
        .iter()
        .position(|(x, y)| !x.is_finite() || !y.is_finite())
    {
        return Err(StatsError::NonFinite(i));
    }
    let x0 = points[0].0;
    if points.iter().all(|p| p.0 == x0) {
        return Err(StatsError::DegenerateAbscissa);
    }
    Ok(())
}

/// Fitted lowess values at each input abscissa, in input order.
pub fn lowess_fit(points: &[(f64, f64)], params: LowessParams) -> Result<Vec<f64>, StatsError> {
    check_points(points)?;
    let n = points.len();
    let r = params.neighborhood(n)?;

    // sorted by (x, input index)
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| points[a].0.total_cmp(&points[b].0).then(a.cmp(&b)));
    let xs: Vec<f64> = order.iter().map(|&i| points[i].0).collect();
    let ys: Vec<f64> = order.iter().map(|&i| points[i].1).collect();
    let x_range = xs[n - 1] - xs[0];
    let (y_min, y_max) = ys
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });

    let windows = neighborhoods(&xs, r);
    let mut robustness = vec![1.0; n];
    let mut fitted = vec![0.0; n];
    for pass in 0..=params.robust_iters {
        let previous = fitted.clone();
        for (p, &(lo, h)) in windows.iter().enumerate() {
            fitted[p] = local_fit(&xs, &ys, &robustness, p, lo, r, h, x_range)
                .unwrap_or(if pass == 0 { ys[p] } else { previous[p] });
        }
        if pass == params.robust_iters {
            break;
        }
        let residuals: Vec<f64> = ys.iter().zip(&fitted).map(|(y, f)| y - f).collect();
        let scale = 6.0 * median_abs(&residuals);
        if scale <= EXACT_FIT * (y_max - y_min) || y_max == y_min {
            break;
        }
        for (w, e) in robustness.iter_mut().zip(&residuals) {
            *w = bisquare(e / scale);
        }
    }

    let mut out = vec![0.0; n];
    for (p, &i) in order.iter().enumerate() {
        out[i] = fitted[p];
    }
    Ok(out)
}

/// `y - lowess_fit(points)` in input order.
pub fn lowess_residuals(
    points: &[(f64, f64)],
    params: LowessParams,
) -> Result<Vec<f64>, StatsError> {
    let fit = lowess_fit(points, params)?;
    Ok(points.iter().zip(fit).map(|((_, y), f)| y - f).collect())
}

/// For each sorted position, the start of its r-point window and the
/// neighborhood radius. Windows only move right as x increases.
fn neighborhoods(xs: &[f64], r: usize) -> Vec<(usize, f64)> {
    let n = xs.len();
    let mut lo = 0;
    xs.iter()
        .map(|&x| {
            while lo + r < n && x - xs[lo] > xs[lo + r] - x {
                lo += 1;
            }
            let h = (x - xs[lo]).max(xs[lo + r - 1] - x);
            (lo, h)
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn local_fit(
    xs: &[f64],
    ys: &[f64],
    robustness: &[f64],
    p: usize,
    lo: usize,
    r: usize,
    h: f64,
    x_range: f64,
) -> Option<f64> {
    let x0 = xs[p];
    let idx = lo..lo + r;
    let weight = |j: usize| -> f64 {
        let k = if h > 0.0 {
            tricube((xs[j] - x0) / h)
        } else {
            1.0
        };
        k * robustness[j]
    };
    let sw: f64 = idx.clone().map(weight).sum();
    if sw <= 0.0 {
        return None;
    }
    let xbar = idx.clone().map(|j| weight(j) * xs[j]).sum::<f64>() / sw;
    let ybar = idx.clone().map(|j| weight(j) * ys[j]).sum::<f64>() / sw;
    let sxx: f64 = idx
        .clone()
        .map(|j| weight(j) * (xs[j] - xbar) * (xs[j] - xbar))
        .sum();
    if (sxx / sw).sqrt() <= FLAT_NEIGHBORHOOD * x_range {
        return Some(ybar);
    }
    let sxy: f64 = idx
        .map(|j| weight(j) * (xs[j] - xbar) * (ys[j] - ybar))
        .sum();
    Some(ybar + sxy / sxx * (x0 - xbar))
}

fn median_abs(values: &[f64]) -> f64 {
    let mut a: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    a.sort_by(f64::total_cmp);
    let n = a.len();
    if n % 2 == 1 {
        a[n / 2]
    } else {
        0.5 * (a[n / 2 - 1] + a[n / 2])
    }
}
