//! Declarative figure description and its JSON codec.
//!
//! ```json
//! {
//!   "title": "Software developers, 2023",
//!   "sort": {"column": "lq"},
//!   "direction": "descending",
//!   "columns": [
//!     {"glyph": "dot", "title": "LQ", "bindings": {"value": "lq"},
//!      "reference_values": [{"value": 1.0, "label": "Nation"}]}
//!   ]
//! }
//! ```

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::grouping::Palette;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlotSpec {
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub subtitle: String,
    pub sort: SortSpec,
    #[serde(default)]
    pub direction: Direction,
    pub columns: Vec<ColumnSpec>,
    #[serde(default)]
    pub shading: ShadingMode,
    /// Drop rows whose sort value is missing instead of failing.
    #[serde(default)]
    pub drop_missing_sort: bool,
    #[serde(default)]
    pub labels: LabelMode,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub palette: Option<Palette>,
    #[serde(default)]
    pub page: PageOptions,
}

impl PlotSpec {
    pub fn from_json(text: &str) -> Result<PlotSpec, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

/// Sort variable: a table column or a score derived from several columns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SortSpec {
    Column(String),
    Pca {
        k: usize,
        columns: Vec<String>,
    },
    LowessResidual {
        x: String,
        y: String,
        #[serde(default = "default_span")]
        span: f64,
        #[serde(default = "default_iters")]
        robust_iters: usize,
    },
}

impl SortSpec {
    /// Every table column the sort reads.
    pub fn referenced_columns(&self) -> Vec<&str> {
        match self {
            SortSpec::Column(c) => vec![c.as_str()],
            SortSpec::Pca { columns, .. } => columns.iter().map(String::as_str).collect(),
            SortSpec::LowessResidual { x, y, .. } => vec![x.as_str(), y.as_str()],
        }
    }

    pub fn describe(&self) -> String {
        match self {
            SortSpec::Column(c) => c.clone(),
            SortSpec::Pca { k, columns } => format!("pca({k}, [{}])", columns.join(", ")),
            SortSpec::LowessResidual { x, y, span, .. } => {
                format!("lowess_residual({x}, {y}, {span})")
            }
        }
    }
}

fn default_span() -> f64 {
    2.0 / 3.0
}

fn default_iters() -> usize {
    3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Ascending,
    #[default]
    Descending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShadingMode {
    #[default]
    CurrentGroup,
    Cumulative,
}

/// Text shown in the label column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelMode {
    #[default]
    Name,
    Id,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlyphKind {
    Dot,
    DotCi,
    Arrow,
    Bar,
    SegmentedBar,
    Boxplot,
    Timeseries,
    Scatter,
}

impl GlyphKind {
    pub fn name(self) -> &'static str {
        match self {
            GlyphKind::Dot => "dot",
            GlyphKind::DotCi => "dot_ci",
            GlyphKind::Arrow => "arrow",
            GlyphKind::Bar => "bar",
            GlyphKind::SegmentedBar => "segmented_bar",
            GlyphKind::Boxplot => "boxplot",
            GlyphKind::Timeseries => "timeseries",
            GlyphKind::Scatter => "scatter",
        }
    }

    /// Binding roles: (role, required, arity).
    pub fn roles(self) -> &'static [(&'static str, bool, Arity)] {
        use Arity::*;
        match self {
            GlyphKind::Dot | GlyphKind::Bar => &[("value", true, One)],
            GlyphKind::DotCi => &[
                ("value", true, One),
                ("prse", false, One),
                ("lo", false, One),
                ("hi", false, One),
            ],
            GlyphKind::Arrow => &[("from", true, One), ("to", true, One)],
            GlyphKind::SegmentedBar => &[("parts", true, Many)],
            GlyphKind::Boxplot => &[
                ("p10", true, One),
                ("p25", true, One),
                ("p50", true, One),
                ("p75", true, One),
                ("p90", true, One),
            ],
            GlyphKind::Timeseries => &[("series", true, One)],
            GlyphKind::Scatter => &[("x", true, One), ("y", true, One)],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    One,
    Many,
}

/// A binding names one column or, for multi-part glyphs, a list of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BindingRef {
    One(String),
    Many(Vec<String>),
}

impl BindingRef {
    pub fn names(&self) -> Vec<&str> {
        match self {
            BindingRef::One(s) => vec![s.as_str()],
            BindingRef::Many(v) => v.iter().map(String::as_str).collect(),
        }
    }

    pub fn as_one(&self) -> Option<&str> {
        match self {
            BindingRef::One(s) => Some(s),
            BindingRef::Many(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnSpec {
    pub glyph: GlyphKind,
    #[serde(default)]
    pub title: String,
    pub bindings: BTreeMap<String, BindingRef>,
    #[serde(default)]
    pub reference_values: Vec<ReferenceValue>,
    #[serde(default)]
    pub options: ColumnOptions,
}

impl ColumnSpec {
    pub fn binding(&self, role: &str) -> Option<&str> {
        self.bindings.get(role).and_then(BindingRef::as_one)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceValue {
    pub value: f64,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub style: LineStyle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineStyle {
    #[default]
    Solid,
    Dashed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnOptions {
    /// Confidence level for intervals built from a PRSE binding.
    #[serde(default = "default_ci_level")]
    pub ci_level: f64,
    /// Scatter columns: lowess overlay span; no overlay when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lowess_span: Option<f64>,
    #[serde(default = "default_iters")]
    pub lowess_iters: usize,
    /// Scatter columns: draw y = x.
    #[serde(default)]
    pub identity_line: bool,
    /// Relative column width.
    #[serde(default = "default_weight")]
    pub weight: f64,
    /// Timeseries columns: plot percent change over this many periods.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pct_change_lag: Option<usize>,
}

impl Default for ColumnOptions {
    fn default() -> Self {
        ColumnOptions {
            ci_level: default_ci_level(),
            lowess_span: None,
            lowess_iters: default_iters(),
            identity_line: false,
            weight: default_weight(),
            pct_change_lag: None,
        }
    }
}

fn default_ci_level() -> f64 {
    0.90
}

fn default_weight() -> f64 {
    1.0
}

/// Page geometry in SVG user units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PageOptions {
    pub width: f64,
    pub margin: f64,
    pub row_height: f64,
    pub group_gap: f64,
    pub map_width: f64,
    pub label_max_width: f64,
    pub column_gap: f64,
    pub font_size: f64,
    /// Minimum on-screen size of any region in a map panel.
    pub min_region_size: f64,
}

impl Default for PageOptions {
    fn default() -> Self {
        PageOptions {
            width: 960.0,
            margin: 12.0,
            row_height: 13.0,
            group_gap: 7.0,
            map_width: 110.0,
            label_max_width: 120.0,
            column_gap: 14.0,
            font_size: 9.0,
            min_region_size: 2.5,
        }
    }
}
