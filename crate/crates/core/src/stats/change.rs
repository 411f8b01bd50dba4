use super::StatsError;

/// Percent change against the value `lag` periods earlier (lag 4 for
/// over-the-year change in quarterly data). The first `lag` entries, entries
/// with a missing operand and entries with a zero base are `None`.
pub fn over_year_pct_change(
    series: &[Option<f64>],
    lag: usize,
) -> Result<Vec<Option<f64>>, StatsError> {
    if lag == 0 || series.len() <= lag {
        return Err(StatsError::InvalidLag {
            lag,
            len: series.len(),
        });
    }
    let mut out = vec![None; lag];
    out.extend(series.windows(lag + 1).map(|w| match (w[0], w[lag]) {
        (Some(base), Some(now)) if base != 0.0 => Some(100.0 * (now - base) / base),
        _ => None,
    }));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_series_has_no_change() {
        let s = vec![Some(7.0); 9];
        let out = over_year_pct_change(&s, 4).unwrap();
        assert_eq!(&out[..4], &[None; 4]);
        assert!(out[4..].iter().all(|v| *v == Some(0.0)));
    }

    #[test]
    fn ten_percent_over_lag() {
        let s = [Some(100.0), Some(1.0), Some(2.0), Some(3.0), Some(110.0)];
        let out = over_year_pct_change(&s, 4).unwrap();
        assert!((out[4].unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn zero_base_is_missing_not_failure() {
        let s = [Some(0.0), Some(5.0), Some(1.0), Some(6.0)];
        let out = over_year_pct_change(&s, 2).unwrap();
        assert_eq!(out[2], None);
        assert!((out[3].unwrap() - 20.0).abs() < 1e-12);
    }

    #[test]
    fn lag_must_fit() {
        assert!(over_year_pct_change(&[Some(1.0); 4], 4).is_err());
        assert!(over_year_pct_change(&[Some(1.0); 4], 0).is_err());
    }
}
