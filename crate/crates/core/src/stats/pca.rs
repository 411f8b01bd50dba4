use super::StatsError;

/// Scores on the `k`-th (1-based) principal component of the standardized
/// columns. `rows[i][j]` is observation `i` of column `names[j]`.
///
/// Columns are centered and scaled by their sample standard deviation, so the
/// components are eigenvectors of the correlation matrix. The eigenvector sign
/// is fixed so that its first nonzero loading is positive.
pub fn pca_scores(names: &[String], rows: &[Vec<f64>], k: usize) -> Result<Vec<f64>, StatsError> {
    let p = names.len();
    let n = rows.len();
    if n < 2 {
        return Err(StatsError::TooFewRows(n));
    }
    if k == 0 || k > p {
        return Err(StatsError::InvalidComponent { k, columns: p });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != p {
            return Err(StatsError::RaggedMatrix(i));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(StatsError::NonFinite(i * p + j));
        }
    }

    let mut z = rows.to_vec();
    for (j, name) in names.iter().enumerate() {
        let mean = rows.iter().map(|r| r[j]).sum::<f64>() / n as f64;
        let var = rows.iter().map(|r| (r[j] - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let sd = var.sqrt();
        if sd.is_nan() || sd <= 1e-12 * mean.abs().max(1.0) {
            return Err(StatsError::ZeroVariance(name.clone()));
        }
        for r in z.iter_mut() {
            r[j] = (r[j] - mean) / sd;
        }
    }

    let mut corr = vec![vec![0.0; p]; p];
    for a in 0..p {
        for b in a..p {
            let c = z.iter().map(|r| r[a] * r[b]).sum::<f64>() / (n - 1) as f64;
            corr[a][b] = c;
            corr[b][a] = c;
        }
    }

    let (values, vectors) = jacobi_eigen(corr);
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let col = order[k - 1];
    let mut v: Vec<f64> = (0..p).map(|i| vectors[i][col]).collect();
    if let Some(first) = v.iter().find(|x| x.abs() > 1e-12) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    Ok(z.iter()
        .map(|r| r.iter().zip(&v).map(|(a, b)| a * b).sum())
        .collect())
}

/// Cyclic Jacobi rotations. Returns the eigenvalues and a matrix whose
/// columns are the matching unit eigenvectors.
fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let p = a.len();
    let mut v: Vec<Vec<f64>> = (0..p)
        .map(|i| (0..p).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..p)
            .flat_map(|i| (0..p).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for i in 0..p {
            for j in i + 1..p {
                if a[i][j].abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[j][j] - a[i][i]) / (2.0 * a[i][j]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (x, y) = (row[i], row[j]);
                    row[i] = c * x - s * y;
                    row[j] = s * x + c * y;
                }
                let (lo, hi) = a.split_at_mut(j);
                for (x, y) in lo[i].iter_mut().zip(hi[0].iter_mut()) {
                    (*x, *y) = (c * *x - s * *y, s * *x + c * *y);
                }
                for row in v.iter_mut() {
                    let (x, y) = (row[i], row[j]);
                    row[i] = c * x - s * y;
                    row[j] = s * x + c * y;
                }
            }
        }
    }
    ((0..p).map(|i| a[i][i]).collect(), v)
}
