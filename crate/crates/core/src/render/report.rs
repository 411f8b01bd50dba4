use serde::Serialize;

use super::layout::ColumnKind;
use crate::glyphs::{AxisScale, GlyphRow, Mark};
use crate::grouping::{ColorRole, Palette};
use crate::model::{Direction, GlyphKind, LineStyle, ShadingMode};

/// Machine-readable account of a rendered figure. Coordinates are the
/// unrounded values the SVG was written from.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LayoutReport {
    pub width: f64,
    pub height: f64,
    pub title: String,
    pub subtitle: String,
    pub atlas: String,
    pub sort: String,
    pub direction: Direction,
    pub shading: ShadingMode,
    pub row_height: f64,
    pub groups: Vec<GroupReport>,
    pub rows: Vec<RowReport>,
    /// One map panel per group.
    pub panels: Vec<MapPanelReport>,
    pub columns: Vec<ColumnReport>,
    pub palette: Palette,
    pub footnotes: Vec<String>,
    pub dropped: Vec<String>,
    pub absent: Vec<String>,
    pub warnings: Vec<String>,
}

impl LayoutReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn row(&self, id: &str) -> Option<&RowReport> {
        self.rows.iter().find(|r| r.id == id)
    }

    /// Data columns only, in spec order.
    pub fn data_columns(&self) -> impl Iterator<Item = &ColumnReport> {
        self.columns.iter().filter(|c| c.kind == ColumnKind::Data)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupReport {
    pub index: usize,
    pub ids: Vec<String>,
    pub y0: f64,
    pub y1: f64,
    pub median: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RowReport {
    pub id: String,
    /// Full display name, even when the label was truncated.
    pub name: String,
    pub label: String,
    pub truncated: bool,
    pub position: usize,
    pub group: usize,
    pub y: f64,
    pub role: ColorRole,
    pub fill: String,
    pub sort_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapPanelReport {
    pub group: usize,
    pub x: f64,
    pub y: f64,
    pub scale: f64,
    pub highlighted: Vec<String>,
    pub prior: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceReport {
    pub value: f64,
    pub label: String,
    pub style: LineStyle,
    /// Absolute x for vertical lines; `None` for horizontal ones drawn
    /// inside panels.
    pub x: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelReport {
    pub group: usize,
    pub x: f64,
    pub y: f64,
    pub scale: f64,
    /// Marks in absolute page coordinates.
    pub marks: Vec<Mark>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnReport {
    pub index: usize,
    pub kind: ColumnKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub glyph: Option<GlyphKind>,
    pub title: String,
    pub x0: f64,
    pub x1: f64,
    /// Horizontal axis in absolute x. Panel columns report it for a
    /// full-size panel.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axis: Option<AxisScale>,
    /// Vertical axis of panel columns, in reference panel coordinates.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y_axis: Option<AxisScale>,
    pub references: Vec<ReferenceReport>,
    /// Row glyphs in absolute coordinates.
    pub rows: Vec<GlyphRow>,
    pub panels: Vec<PanelReport>,
    pub missing: Vec<String>,
}

impl ColumnReport {
    pub fn row(&self, id: &str) -> Option<&GlyphRow> {
        self.rows.iter().find(|r| r.region == id)
    }

    /// Every mark of the column, rows first.
    pub fn marks(&self) -> impl Iterator<Item = &Mark> {
        self.rows
            .iter()
            .flat_map(|r| r.marks.iter())
            .chain(self.panels.iter().flat_map(|p| p.marks.iter()))
    }
}
