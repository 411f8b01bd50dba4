//! Format-independent drawing primitives for each glyph column.
//!
//! Row glyphs use column-local x (the scale range) and y relative to the row
//! center. Panel glyphs (time series, scatter) use a reference panel box with
//! the origin at its top-left corner.

mod axis;
mod panels;
mod rows;

pub use axis::{fit_axis, format_tick, ladder_ticks, AxisScale, Padding};
pub use panels::{
    reference_lines, scatter_column, timeseries_column, PanelBox, PanelGlyphs, ScatterInput,
    ScatterOptions, TimeseriesInput,
};
pub use rows::{arrow_column, bar_column, boxplot_column, dot_column, segmented_bar_column};

use serde::Serialize;
use thiserror::Error;

use crate::grouping::ColorRole;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GlyphError {
    #[error("interval for {0} has lo > hi")]
    InvertedInterval(String),
    #[error("negative share for {0}")]
    NegativeShare(String),
    #[error("percentiles out of order for {0}")]
    UnorderedPercentiles(String),
    #[error("non-finite coordinate for {0}")]
    NonFinite(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Anchor {
    Start,
    Middle,
    End,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Shape {
    Circle {
        cx: f64,
        cy: f64,
        r: f64,
    },
    Line {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
    },
    Rect {
        x: f64,
        y: f64,
        w: f64,
        h: f64,
    },
    Polyline {
        points: Vec<[f64; 2]>,
    },
    /// Shaft from (x1, y1) to (x2, y2) with the head at the second point.
    Arrow {
        x1: f64,
        y1: f64,
        x2: f64,
        y2: f64,
        head: f64,
    },
    Text {
        x: f64,
        y: f64,
        text: String,
        anchor: Anchor,
        size: f64,
    },
}

impl Shape {
    /// Every x coordinate the shape touches.
    pub fn xs(&self) -> Vec<f64> {
        match self {
            Shape::Circle { cx, .. } => vec![*cx],
            Shape::Line { x1, x2, .. } | Shape::Arrow { x1, x2, .. } => vec![*x1, *x2],
            Shape::Rect { x, w, .. } => vec![*x, x + w],
            Shape::Polyline { points } => points.iter().map(|p| p[0]).collect(),
            Shape::Text { x, .. } => vec![*x],
        }
    }

    pub fn ys(&self) -> Vec<f64> {
        match self {
            Shape::Circle { cy, .. } => vec![*cy],
            Shape::Line { y1, y2, .. } | Shape::Arrow { y1, y2, .. } => vec![*y1, *y2],
            Shape::Rect { y, h, .. } => vec![*y, y + h],
            Shape::Polyline { points } => points.iter().map(|p| p[1]).collect(),
            Shape::Text { y, .. } => vec![*y],
        }
    }

    pub fn is_finite(&self) -> bool {
        self.xs()
            .iter()
            .chain(self.ys().iter())
            .all(|v| v.is_finite())
    }

    pub fn is_text(&self) -> bool {
        matches!(self, Shape::Text { .. })
    }

    /// The shape under `p -> (tx + s*x, ty + s*y)`. Radii, heads and text
    /// sizes scale with it.
    pub fn transformed(&self, tx: f64, ty: f64, s: f64) -> Shape {
        let x = |v: f64| tx + s * v;
        let y = |v: f64| ty + s * v;
        match self {
            Shape::Circle { cx, cy, r } => Shape::Circle {
                cx: x(*cx),
                cy: y(*cy),
                r: s * r,
            },
            Shape::Line { x1, y1, x2, y2 } => Shape::Line {
                x1: x(*x1),
                y1: y(*y1),
                x2: x(*x2),
                y2: y(*y2),
            },
            Shape::Rect { x: rx, y: ry, w, h } => Shape::Rect {
                x: x(*rx),
                y: y(*ry),
                w: s * w,
                h: s * h,
            },
            Shape::Polyline { points } => Shape::Polyline {
                points: points.iter().map(|p| [x(p[0]), y(p[1])]).collect(),
            },
            Shape::Arrow {
                x1,
                y1,
                x2,
                y2,
                head,
            } => Shape::Arrow {
                x1: x(*x1),
                y1: y(*y1),
                x2: x(*x2),
                y2: y(*y2),
                head: s * head,
            },
            Shape::Text {
                x: tx0,
                y: ty0,
                text,
                anchor,
                size,
            } => Shape::Text {
                x: x(*tx0),
                y: y(*ty0),
                text: text.clone(),
                anchor: *anchor,
                size: s * size,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Style {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fill: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stroke: Option<String>,
    pub stroke_width: f64,
    pub dashed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub opacity: Option<f64>,
}

impl Style {
    pub fn fill(color: &str) -> Style {
        Style {
            fill: Some(color.to_string()),
            stroke: None,
            stroke_width: 0.0,
            dashed: false,
            opacity: None,
        }
    }

    pub fn stroke(color: &str, width: f64) -> Style {
        Style {
            fill: None,
            stroke: Some(color.to_string()),
            stroke_width: width,
            dashed: false,
            opacity: None,
        }
    }

    pub fn filled_outline(fill: &str, stroke: &str, width: f64) -> Style {
        Style {
            fill: Some(fill.to_string()),
            stroke: Some(stroke.to_string()),
            stroke_width: width,
            dashed: false,
            opacity: None,
        }
    }

    pub fn dashed(mut self, on: bool) -> Style {
        self.dashed = on;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mark {
    pub shape: Shape,
    /// Semantic tag such as `dot`, `ci`, `whisker` or `point-filled`.
    pub tag: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub role: Option<ColorRole>,
    pub style: Style,
}

impl Mark {
    pub fn new(shape: Shape, tag: &str, style: Style) -> Mark {
        Mark {
            shape,
            tag: tag.to_string(),
            region: None,
            role: None,
            style,
        }
    }

    pub fn of(mut self, row: &RowKey) -> Mark {
        self.region = Some(row.id.clone());
        self.role = Some(row.role);
        self
    }
}

/// Identity and color of one display row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowKey {
    pub id: String,
    pub role: ColorRole,
    pub color: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlyphRow {
    pub region: String,
    pub marks: Vec<Mark>,
    /// Set when data was missing and the row shows no mark.
    pub missing: bool,
}

/// Sizes shared by the glyph builders, in user units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GlyphMetrics {
    pub row_height: f64,
    pub dot_radius: f64,
    pub line_width: f64,
    pub bar_height: f64,
    pub box_height: f64,
    pub arrow_head: f64,
    pub ink: &'static str,
}

impl GlyphMetrics {
    pub fn for_row_height(h: f64) -> GlyphMetrics {
        GlyphMetrics {
            row_height: h,
            dot_radius: 0.26 * h,
            line_width: (0.1 * h).max(0.8),
            bar_height: 0.55 * h,
            box_height: 0.55 * h,
            arrow_head: 0.3 * h,
            ink: "#333333",
        }
    }
}

fn check_finite(rows: &[GlyphRow]) -> Result<(), GlyphError> {
    for r in rows {
        if r.marks.iter().any(|m| !m.shape.is_finite()) {
            return Err(GlyphError::NonFinite(r.region.clone()));
        }
    }
    Ok(())
}
