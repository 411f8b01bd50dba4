use std::ops::Range;

use serde::Serialize;

use super::{fit_axis, AxisScale, GlyphMetrics, Mark, Padding, RowKey, Shape, Style};
use crate::grouping::Palette;
use crate::model::{LineStyle, ReferenceValue};
use crate::stats::{lowess_fit, LowessParams};

/// Reference panel box all panels of a column are drawn in. The renderer
/// scales it uniformly into each band.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PanelBox {
    pub width: f64,
    pub height: f64,
    /// Room on the left for y tick labels.
    pub inset_left: f64,
    pub inset: f64,
}

impl PanelBox {
    fn x_range(&self) -> (f64, f64) {
        (self.inset_left, self.width - self.inset)
    }

    fn y_range(&self) -> (f64, f64) {
        (self.height - self.inset, self.inset)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelGlyphs {
    pub group: usize,
    pub marks: Vec<Mark>,
}

/// Output of a panel column builder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelColumn {
    pub panels: Vec<PanelGlyphs>,
    pub x: AxisScale,
    pub y: AxisScale,
    /// Regions left out for lack of data.
    pub skipped: Vec<String>,
    pub warnings: Vec<String>,
}

/// Vertical reference lines from `y0` to `y1`, in input order.
pub fn reference_lines(
    refs: &[ReferenceValue],
    scale: &AxisScale,
    y0: f64,
    y1: f64,
    palette: &Palette,
    width: f64,
) -> Vec<Mark> {
    refs.iter()
        .map(|r| {
            let x = scale.position(r.value);
            Mark::new(
                Shape::Line {
                    x1: x,
                    y1: y0,
                    x2: x,
                    y2: y1,
                },
                "reference",
                Style::stroke(&palette.reference, width).dashed(r.style == LineStyle::Dashed),
            )
        })
        .collect()
}

fn y_tick_labels(y: &AxisScale, b: &PanelBox, size: f64, ink: &str) -> Vec<Mark> {
    let n = y.ticks.len();
    if n == 0 {
        return Vec::new();
    }
    [0, n - 1]
        .into_iter()
        .filter(|&i| i == 0 || n > 1)
        .map(|i| {
            Mark::new(
                Shape::Text {
                    x: b.inset_left - 1.5,
                    y: y.position(y.ticks[i]) + 0.35 * size,
                    text: y.tick_labels[i].clone(),
                    anchor: super::Anchor::End,
                    size,
                },
                "y-tick",
                Style::fill(ink),
            )
        })
        .collect()
}

fn frame(b: &PanelBox, ink: &str) -> Mark {
    let (x0, x1) = b.x_range();
    let (y1, y0) = b.y_range();
    Mark::new(
        Shape::Rect {
            x: x0,
            y: y0,
            w: x1 - x0,
            h: y1 - y0,
        },
        "panel-frame",
        Style::stroke(ink, 0.4),
    )
}

pub struct TimeseriesInput<'a> {
    pub rows: &'a [RowKey],
    pub labels: &'a [String],
    /// One series per display row.
    pub series: &'a [Vec<Option<f64>>],
    pub groups: &'a [Range<usize>],
    pub references: &'a [ReferenceValue],
}

/// One panel per group with a polyline per member. Gaps break the line; the
/// y scale is shared by every panel of the column.
pub fn timeseries_column(
    input: &TimeseriesInput,
    b: &PanelBox,
    m: &GlyphMetrics,
    palette: &Palette,
) -> PanelColumn {
    let mut skipped = Vec::new();
    let usable: Vec<bool> = input
        .series
        .iter()
        .zip(input.rows)
        .map(|(s, row)| {
            let ok = s.iter().flatten().count() >= 2;
            if !ok {
                skipped.push(row.id.clone());
            }
            ok
        })
        .collect();

    let values: Vec<f64> = input
        .series
        .iter()
        .zip(&usable)
        .filter(|(_, u)| **u)
        .flat_map(|(s, _)| s.iter().flatten().copied())
        .collect();
    let refs: Vec<f64> = input.references.iter().map(|r| r.value).collect();
    let (yr0, yr1) = b.y_range();
    let y = fit_axis(&values, &refs, Padding::default()).with_range(yr0, yr1);
    let (xr0, xr1) = b.x_range();
    let x = time_axis(input.labels).with_range(xr0, xr1);

    let text_size = 0.8 * m.row_height * 0.6;
    let panels = input
        .groups
        .iter()
        .enumerate()
        .map(|(gi, range)| {
            let mut marks = vec![frame(b, "#B3B3B3")];
            if y.domain.0 < 0.0 && y.domain.1 > 0.0 {
                let y0 = y.position(0.0);
                marks.push(Mark::new(
                    Shape::Line {
                        x1: xr0,
                        y1: y0,
                        x2: xr1,
                        y2: y0,
                    },
                    "zero-line",
                    Style::stroke("#999999", 0.5),
                ));
            }
            for r in input.references {
                let yv = y.position(r.value);
                marks.push(Mark::new(
                    Shape::Line {
                        x1: xr0,
                        y1: yv,
                        x2: xr1,
                        y2: yv,
                    },
                    "reference",
                    Style::stroke(&palette.reference, 0.8).dashed(r.style == LineStyle::Dashed),
                ));
            }
            for pos in range.clone() {
                if !usable[pos] {
                    continue;
                }
                let row = &input.rows[pos];
                for run in runs(&input.series[pos]) {
                    let pts: Vec<[f64; 2]> = run
                        .iter()
                        .map(|&(i, v)| [x.position(i as f64), y.position(v)])
                        .collect();
                    let (shape, style) = if pts.len() == 1 {
                        let dot = Shape::Circle {
                            cx: pts[0][0],
                            cy: pts[0][1],
                            r: 0.5 * m.line_width + 0.4,
                        };
                        (dot, Style::fill(&row.color))
                    } else {
                        let line = Shape::Polyline { points: pts };
                        (line, Style::stroke(&row.color, m.line_width))
                    };
                    marks.push(Mark::new(shape, "series", style).of(row));
                }
            }
            marks.extend(y_tick_labels(&y, b, text_size, m.ink));
            PanelGlyphs { group: gi, marks }
        })
        .collect();
    PanelColumn {
        panels,
        x,
        y,
        skipped,
        warnings: Vec::new(),
    }
}

/// Maximal runs of consecutive present values as (index, value) pairs.
fn runs(series: &[Option<f64>]) -> Vec<Vec<(usize, f64)>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    for (i, v) in series.iter().enumerate() {
        match v {
            Some(v) => cur.push((i, *v)),
            None if !cur.is_empty() => out.push(std::mem::take(&mut cur)),
            None => {}
        }
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

/// Index axis over time labels; ticks at the ends and up to three interior
/// points.
fn time_axis(labels: &[String]) -> AxisScale {
    let t = labels.len();
    let domain = if t >= 2 {
        (0.0, (t - 1) as f64)
    } else {
        (-0.5, 0.5)
    };
    let picks: Vec<usize> = if t <= 5 {
        (0..t).collect()
    } else {
        let mut v: Vec<usize> = (0..5).map(|k| (k * (t - 1) + 2) / 4).collect();
        v.dedup();
        v
    };
    AxisScale {
        domain,
        range: (0.0, 1.0),
        ticks: picks.iter().map(|&i| i as f64).collect(),
        tick_labels: picks.iter().map(|&i| labels[i].clone()).collect(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ScatterOptions {
    pub identity_line: bool,
    pub lowess: Option<LowessParams>,
}

pub struct ScatterInput<'a> {
    pub rows: &'a [RowKey],
    pub x: &'a [Option<f64>],
    pub y: &'a [Option<f64>],
    pub groups: &'a [Range<usize>],
    pub references: &'a [ReferenceValue],
    pub options: ScatterOptions,
}

/// Every panel shows all points; the current group's members are filled in
/// their colors and the rest are open neutral circles. The optional lowess
/// curve is fit once on the pooled points.
pub fn scatter_column(
    input: &ScatterInput,
    b: &PanelBox,
    m: &GlyphMetrics,
    palette: &Palette,
) -> PanelColumn {
    let mut skipped = Vec::new();
    let mut warnings = Vec::new();
    let points: Vec<Option<(f64, f64)>> = input
        .x
        .iter()
        .zip(input.y)
        .zip(input.rows)
        .map(|((x, y), row)| {
            let p = x.zip(*y);
            if p.is_none() {
                skipped.push(row.id.clone());
            }
            p
        })
        .collect();
    let xs: Vec<f64> = points.iter().flatten().map(|p| p.0).collect();
    let ys: Vec<f64> = points.iter().flatten().map(|p| p.1).collect();
    let refs: Vec<f64> = input.references.iter().map(|r| r.value).collect();
    let (xr0, xr1) = b.x_range();
    let (yr0, yr1) = b.y_range();
    let x = fit_axis(&xs, &refs, Padding::default()).with_range(xr0, xr1);
    let y = fit_axis(&ys, &[], Padding::default()).with_range(yr0, yr1);

    let curve = input.options.lowess.and_then(|params| {
        let pts: Vec<(f64, f64)> = xs.iter().copied().zip(ys.iter().copied()).collect();
        match lowess_fit(&pts, params) {
            Ok(fit) => {
                let mut order: Vec<usize> = (0..pts.len()).collect();
                order.sort_by(|&a, &b| pts[a].0.total_cmp(&pts[b].0).then(a.cmp(&b)));
                Some(
                    order
                        .iter()
                        .map(|&i| [x.position(pts[i].0), y.position(fit[i])])
                        .collect::<Vec<_>>(),
                )
            }
            Err(e) => {
                warnings.push(format!("lowess overlay skipped: {e}"));
                None
            }
        }
    });

    let diagonal = if input.options.identity_line {
        let lo = x.domain.0.max(y.domain.0);
        let hi = x.domain.1.min(y.domain.1);
        (lo < hi).then(|| Shape::Line {
            x1: x.position(lo),
            y1: y.position(lo),
            x2: x.position(hi),
            y2: y.position(hi),
        })
    } else {
        None
    };

    let r = 0.85 * m.dot_radius;
    let text_size = 0.8 * m.row_height * 0.6;
    let panels = input
        .groups
        .iter()
        .enumerate()
        .map(|(gi, range)| {
            let mut marks = vec![frame(b, "#B3B3B3")];
            marks.extend(reference_lines(
                input.references,
                &x,
                yr1,
                yr0,
                palette,
                0.8,
            ));
            if let Some(d) = &diagonal {
                marks.push(Mark::new(
                    d.clone(),
                    "identity",
                    Style::stroke("#7F7F7F", 0.6),
                ));
            }
            if let Some(c) = &curve {
                marks.push(Mark::new(
                    Shape::Polyline { points: c.clone() },
                    "lowess",
                    Style::stroke(m.ink, 1.0),
                ));
            }
            for (pos, p) in points.iter().enumerate() {
                if let (Some((px, py)), false) = (p, range.contains(&pos)) {
                    marks.push(
                        Mark::new(
                            Shape::Circle {
                                cx: x.position(*px),
                                cy: y.position(*py),
                                r,
                            },
                            "point-open",
                            Style::filled_outline("none", &palette.outline, 0.5),
                        )
                        .of(&input.rows[pos]),
                    );
                }
            }
            for pos in range.clone() {
                if let Some((px, py)) = points[pos] {
                    let row = &input.rows[pos];
                    marks.push(
                        Mark::new(
                            Shape::Circle {
                                cx: x.position(px),
                                cy: y.position(py),
                                r,
                            },
                            "point-filled",
                            Style::filled_outline(&row.color, m.ink, 0.4),
                        )
                        .of(row),
                    );
                }
            }
            marks.extend(y_tick_labels(&y, b, text_size, m.ink));
            PanelGlyphs { group: gi, marks }
        })
        .collect();
    PanelColumn {
        panels,
        x,
        y,
        skipped,
        warnings,
    }
}
