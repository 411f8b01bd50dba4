//! Shared domain types: atlases, data tables, plot specs, and the binding
//! step that resolves a spec against both.

pub mod atlas;
mod bind;
pub mod spec;
mod table;
mod validate;

pub use atlas::{Atlas, AtlasError, BBox, Point, Polygon, Region};
pub use bind::{bind_spec, BindError, BoundColumn, BoundFigureModel, ColumnData};
pub use spec::{
    Arity, BindingRef, ColumnOptions, ColumnSpec, Direction, GlyphKind, LabelMode, LineStyle,
    PageOptions, PlotSpec, ReferenceValue, ShadingMode, SortSpec,
};
pub use table::{parse_time_label, time_column_name, DataTable, TableError, TimeEntry};
pub use validate::{validate_spec, Issue, IssueKind, ValidationReport};
