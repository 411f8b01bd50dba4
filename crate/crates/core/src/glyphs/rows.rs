use super::{
    check_finite, AxisScale, GlyphError, GlyphMetrics, GlyphRow, Mark, RowKey, Shape, Style,
};
use crate::stats::Percentiles;

fn missing(row: &RowKey) -> GlyphRow {
    GlyphRow {
        region: row.id.clone(),
        marks: Vec::new(),
        missing: true,
    }
}

fn present(row: &RowKey, marks: Vec<Mark>) -> GlyphRow {
    GlyphRow {
        region: row.id.clone(),
        marks,
        missing: false,
    }
}

fn dot(row: &RowKey, x: f64, m: &GlyphMetrics) -> Mark {
    Mark::new(
        Shape::Circle {
            cx: x,
            cy: 0.0,
            r: m.dot_radius,
        },
        "dot",
        Style::filled_outline(&row.color, m.ink, 0.4),
    )
    .of(row)
}

/// One dot per row, with a horizontal interval bar when `ci` is given.
pub fn dot_column(
    rows: &[RowKey],
    values: &[Option<f64>],
    ci: Option<&[Option<(f64, f64)>]>,
    scale: &AxisScale,
    m: &GlyphMetrics,
) -> Result<Vec<GlyphRow>, GlyphError> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Some(v) = values[i] else {
            out.push(missing(row));
            continue;
        };
        let mut marks = Vec::new();
        if let Some((lo, hi)) = ci.and_then(|c| c[i]) {
            if lo > hi {
                return Err(GlyphError::InvertedInterval(row.id.clone()));
            }
            marks.push(
                Mark::new(
                    Shape::Line {
                        x1: scale.position(lo),
                        y1: 0.0,
                        x2: scale.position(hi),
                        y2: 0.0,
                    },
                    "ci",
                    Style::stroke(&row.color, 1.6 * m.line_width),
                )
                .of(row),
            );
        }
        marks.push(dot(row, scale.position(v), m));
        out.push(present(row, marks));
    }
    check_finite(&out)?;
    Ok(out)
}

/// Arrow from `from` to `to` with the head at `to`. Equal endpoints give a
/// point mark.
pub fn arrow_column(
    rows: &[RowKey],
    from: &[Option<f64>],
    to: &[Option<f64>],
    scale: &AxisScale,
    m: &GlyphMetrics,
) -> Result<Vec<GlyphRow>, GlyphError> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let (Some(a), Some(b)) = (from[i], to[i]) else {
            out.push(missing(row));
            continue;
        };
        let (x1, x2) = (scale.position(a), scale.position(b));
        let mark = if a == b {
            Mark::new(
                Shape::Circle {
                    cx: x1,
                    cy: 0.0,
                    r: 0.6 * m.dot_radius,
                },
                "arrow-point",
                Style::fill(&row.color),
            )
        } else {
            Mark::new(
                Shape::Arrow {
                    x1,
                    y1: 0.0,
                    x2,
                    y2: 0.0,
                    head: m.arrow_head,
                },
                "arrow",
                Style::stroke(&row.color, 1.4 * m.line_width),
            )
        };
        out.push(present(row, vec![mark.of(row)]));
    }
    check_finite(&out)?;
    Ok(out)
}

/// Bars from zero to each value.
pub fn bar_column(
    rows: &[RowKey],
    values: &[Option<f64>],
    scale: &AxisScale,
    m: &GlyphMetrics,
) -> Result<Vec<GlyphRow>, GlyphError> {
    let zero = scale.position(0.0);
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Some(v) = values[i] else {
            out.push(missing(row));
            continue;
        };
        let x = scale.position(v);
        let mark = Mark::new(
            Shape::Rect {
                x: zero.min(x),
                y: -0.5 * m.bar_height,
                w: (x - zero).abs(),
                h: m.bar_height,
            },
            "bar",
            Style::fill(&row.color),
        );
        out.push(present(row, vec![mark.of(row)]));
    }
    check_finite(&out)?;
    Ok(out)
}

/// Stacked shares filling the scale from 0 to 1. Later segments are drawn
/// lighter.
pub fn segmented_bar_column(
    rows: &[RowKey],
    shares: &[Option<Vec<f64>>],
    scale: &AxisScale,
    m: &GlyphMetrics,
) -> Result<Vec<GlyphRow>, GlyphError> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Some(parts) = &shares[i] else {
            out.push(missing(row));
            continue;
        };
        if parts.iter().any(|p| *p < 0.0) {
            return Err(GlyphError::NegativeShare(row.id.clone()));
        }
        let total: f64 = parts.iter().sum();
        let k = parts.len();
        let mut acc = 0.0;
        let mut marks = Vec::with_capacity(k);
        for (j, p) in parts.iter().enumerate() {
            let (a, b) = if total > 0.0 {
                (acc / total, (acc + p) / total)
            } else {
                (0.0, 0.0)
            };
            acc += p;
            let (x0, x1) = (scale.position(a), scale.position(b));
            let mut style = Style::fill(&row.color);
            style.opacity = Some(1.0 - 0.65 * j as f64 / (k.max(2) - 1) as f64);
            marks.push(
                Mark::new(
                    Shape::Rect {
                        x: x0.min(x1),
                        y: -0.5 * m.bar_height,
                        w: (x1 - x0).abs(),
                        h: m.bar_height,
                    },
                    "segment",
                    style,
                )
                .of(row),
            );
        }
        out.push(present(row, marks));
    }
    check_finite(&out)?;
    Ok(out)
}

/// Box over the quartiles, median line, and whiskers to the 10th and 90th
/// percentiles.
pub fn boxplot_column(
    rows: &[RowKey],
    pct: &[Option<Percentiles>],
    scale: &AxisScale,
    m: &GlyphMetrics,
) -> Result<Vec<GlyphRow>, GlyphError> {
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let Some(p) = pct[i] else {
            out.push(missing(row));
            continue;
        };
        if !p.is_ordered() {
            return Err(GlyphError::UnorderedPercentiles(row.id.clone()));
        }
        let [x10, x25, x50, x75, x90] = p.as_array().map(|v| scale.position(v));
        let h = m.box_height;
        let whisker = |a: f64, b: f64| {
            Mark::new(
                Shape::Line {
                    x1: a,
                    y1: 0.0,
                    x2: b,
                    y2: 0.0,
                },
                "whisker",
                Style::stroke(&row.color, m.line_width),
            )
            .of(row)
        };
        let marks = vec![
            whisker(x10, x25),
            whisker(x75, x90),
            Mark::new(
                Shape::Rect {
                    x: x25.min(x75),
                    y: -0.5 * h,
                    w: (x75 - x25).abs(),
                    h,
                },
                "box",
                Style::filled_outline(&row.color, &row.color, 0.5),
            )
            .of(row),
            Mark::new(
                Shape::Line {
                    x1: x50,
                    y1: -0.5 * h,
                    x2: x50,
                    y2: 0.5 * h,
                },
                "median",
                Style::stroke(m.ink, 1.2 * m.line_width),
            )
            .of(row),
        ];
        out.push(present(row, marks));
    }
    check_finite(&out)?;
    Ok(out)
}
