use serde::Serialize;

/// Linear map from a data domain onto a coordinate range. The range may be
/// inverted (y axes grow downward).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AxisScale {
    pub domain: (f64, f64),
    pub range: (f64, f64),
    pub ticks: Vec<f64>,
    pub tick_labels: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Padding {
    /// Fraction of the data extent added on each side.
    pub fraction: f64,
    /// Force zero into the domain (bar columns).
    pub include_zero: bool,
}

impl Default for Padding {
    fn default() -> Self {
        Padding {
            fraction: 0.05,
            include_zero: false,
        }
    }
}

impl AxisScale {
    pub fn position(&self, v: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        r0 + (v - d0) / (d1 - d0) * (r1 - r0)
    }

    /// Inverse of [`position`](Self::position).
    pub fn value_at(&self, x: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        d0 + (x - r0) / (r1 - r0) * (d1 - d0)
    }

    pub fn with_range(&self, r0: f64, r1: f64) -> AxisScale {
        AxisScale {
            range: (r0, r1),
            ..self.clone()
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        let (d0, d1) = self.domain;
        let eps = 1e-9 * (d1 - d0);
        v >= d0 - eps && v <= d1 + eps
    }
}

/// Domain covering every finite value and reference, padded on both sides,
/// with 3 to 7 ticks on a 1-2-5 ladder. The range is `(0, 1)`; callers set
/// the real one with [`AxisScale::with_range`].
pub fn fit_axis(values: &[f64], references: &[f64], padding: Padding) -> AxisScale {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &v in values.iter().chain(references) {
        if v.is_finite() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    if padding.include_zero {
        lo = lo.min(0.0);
        hi = hi.max(0.0);
    }
    let (d0, d1) = if !lo.is_finite() {
        (0.0, 1.0)
    } else if lo == hi {
        let w = if lo == 0.0 { 1.0 } else { 0.1 * lo.abs() };
        (lo - w, hi + w)
    } else {
        let pad = padding.fraction * (hi - lo);
        (lo - pad, hi + pad)
    };
    let (ticks, tick_labels) = ladder_ticks(d0, d1);
    AxisScale {
        domain: (d0, d1),
        range: (0.0, 1.0),
        ticks,
        tick_labels,
    }
}

/// Smallest 1-2-5 step giving between 3 and 7 ticks inside `[lo, hi]`.
pub fn ladder_ticks(lo: f64, hi: f64) -> (Vec<f64>, Vec<String>) {
    let span = hi - lo;
    let top = span.log10().floor() as i32;
    let mut fallback = None;
    for e in (top - 3)..=(top + 1) {
        for m in [1i64, 2, 5] {
            let step = tick_value(m, e);
            let first = (lo / step - 1e-9).ceil() as i64;
            let last = (hi / step + 1e-9).floor() as i64;
            let count = last - first + 1;
            if !(1..=7).contains(&count) {
                continue;
            }
            let ticks: Vec<f64> = (first..=last).map(|k| tick_value(k * m, e)).collect();
            let decimals = (-e).max(0) as usize;
            let labels = ticks.iter().map(|t| format_tick(*t, decimals)).collect();
            if count >= 3 {
                return (ticks, labels);
            }
            fallback.get_or_insert((ticks, labels));
        }
    }
    fallback.unwrap_or_else(|| (vec![lo, hi], vec![format_tick(lo, 2), format_tick(hi, 2)]))
}

/// `k * 10^e`, exact for the integer part.
fn tick_value(k: i64, e: i32) -> f64 {
    if e >= 0 {
        k as f64 * 10f64.powi(e)
    } else {
        k as f64 / 10f64.powi(-e)
    }
}

pub fn format_tick(v: f64, decimals: usize) -> String {
    let s = format!("{v:.decimals$}");
    if s.starts_with('-') && s[1..].bytes().all(|b| b == b'0' || b == b'.') {
        s[1..].to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_to_hundred() {
        let v: Vec<f64> = (0..=100).map(f64::from).collect();
        let a = fit_axis(&v, &[], Padding::default());
        assert_eq!(a.domain, (-5.0, 105.0));
        assert_eq!(a.ticks, vec![0.0, 20.0, 40.0, 60.0, 80.0, 100.0]);
        assert_eq!(a.tick_labels, vec!["0", "20", "40", "60", "80", "100"]);
    }

    #[test]
    fn repeated_value() {
        let a = fit_axis(&[5.0, 5.0], &[], Padding::default());
        assert_eq!(a.domain, (4.5, 5.5));
        let z = fit_axis(&[0.0], &[], Padding::default());
        assert_eq!(z.domain, (-1.0, 1.0));
    }

    #[test]
    fn references_extend_domain() {
        let a = fit_axis(&[1.0, 2.0], &[10.0], Padding::default());
        assert!(a.contains(10.0));
        assert!(a.domain.1 > 10.0);
    }

    #[test]
    fn small_decimals_and_no_negative_zero() {
        let a = fit_axis(&[-0.013, 0.02], &[], Padding::default());
        assert!(a.ticks.len() >= 3 && a.ticks.len() <= 7);
        assert!(a.tick_labels.iter().all(|l| l != "-0.00" && l != "-0"));
        assert_eq!(format_tick(-0.0001, 2), "0.00");
    }

    #[test]
    fn inverted_range() {
        let s = fit_axis(&[0.0, 10.0], &[], Padding::default()).with_range(100.0, 0.0);
        assert!(s.position(s.domain.0) == 100.0);
        assert!((s.value_at(s.position(3.0)) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn include_zero() {
        let a = fit_axis(
            &[5.0, 8.0],
            &[],
            Padding {
                include_zero: true,
                ..Padding::default()
            },
        );
        assert!(a.contains(0.0));
    }
}
