//! Figure composition: layout, glyph placement, SVG emission and the layout
//! report.

mod layout;
mod report;
mod svg;

pub use layout::{
    char_em, compute_layout, fit_text, text_width, Band, ColumnBox, ColumnKind, FigureLayout,
};
pub use report::{
    ColumnReport, GroupReport, LayoutReport, MapPanelReport, PanelReport, ReferenceReport,
    RowReport,
};
pub use svg::{emit_svg, sanitize_id};

use thiserror::Error;

use crate::glyphs::{
    arrow_column, bar_column, boxplot_column, dot_column, fit_axis, scatter_column,
    segmented_bar_column, timeseries_column, AxisScale, GlyphError, GlyphMetrics, GlyphRow, Mark,
    Padding, PanelBox, RowKey, ScatterInput, ScatterOptions, Shape, TimeseriesInput,
};
use crate::grouping::{assign_colors, ColorAssignment, GroupingError, Palette, PerceptualGrouping};
use crate::maprender::{build_panel_maps, project_atlas, PanelGeometry, PanelMap, RegionStyle};
use crate::model::{
    bind_spec, validate_spec, Atlas, BindError, BoundColumn, BoundFigureModel, ColumnData,
    DataTable, GlyphKind, IssueKind, PageOptions, PlotSpec, ValidationReport,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RenderError {
    #[error(transparent)]
    Bind(#[from] BindError),
    #[error(transparent)]
    Grouping(#[from] GroupingError),
    #[error("page width {width} is too narrow; need at least {minimum:.1}")]
    TooNarrow { width: f64, minimum: f64 },
    #[error("column {column}: {source}")]
    Glyph { column: usize, source: GlyphError },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RenderedFigure {
    pub svg: String,
    pub report: LayoutReport,
}

/// Map simplification tolerance in panel units.
const MAP_TOLERANCE: f64 = 0.3;
/// Room left and right of row glyphs inside their column.
const ROW_INSET: f64 = 4.5;
const MAX_LISTED: usize = 12;

/// Panel glyphs placed into one band: `page = (tx, ty) + scale * local`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlacedPanel {
    pub group: usize,
    pub tx: f64,
    pub ty: f64,
    pub scale: f64,
    pub marks: Vec<Mark>,
}

/// Everything drawn for one data column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnGlyphs {
    pub title: String,
    pub axis: AxisScale,
    pub y_axis: Option<AxisScale>,
    /// Row glyphs in absolute coordinates.
    pub rows: Vec<GlyphRow>,
    /// Vertical reference lines per band, absolute.
    pub references: Vec<Mark>,
    pub panels: Vec<PlacedPanel>,
    pub missing: Vec<String>,
    pub warnings: Vec<String>,
}

/// Binds `spec` and renders it with the spec's palette and page options.
pub fn render_spec(
    spec: &PlotSpec,
    table: &DataTable,
    atlas: &Atlas,
) -> Result<RenderedFigure, RenderError> {
    let model = bind_spec(spec, table, atlas)?;
    let palette = spec.palette.clone().unwrap_or_default();
    render_figure(&model, atlas, &palette, &spec.page)
}

/// Validates first and renders only a clean spec. Render failures that
/// validation cannot foresee (a page too narrow, say) come back as an
/// `Unrenderable` issue so callers see one kind of rejection.
pub fn render_validated(
    spec: &PlotSpec,
    table: &DataTable,
    atlas: &Atlas,
) -> Result<RenderedFigure, ValidationReport> {
    let report = validate_spec(spec, table, atlas);
    if !report.is_ok() {
        return Err(report);
    }
    render_spec(spec, table, atlas).map_err(|e| {
        let mut report = ValidationReport::default();
        report.push(IssueKind::Unrenderable, None, e.to_string());
        report
    })
}

pub fn render_figure(
    model: &BoundFigureModel,
    atlas: &Atlas,
    palette: &Palette,
    page: &PageOptions,
) -> Result<RenderedFigure, RenderError> {
    let grouping = PerceptualGrouping::from_model(model)?;
    let colors = assign_colors(&grouping, palette);
    let layout = compute_layout(model, &grouping, page)?;
    let metrics = GlyphMetrics::for_row_height(page.row_height);
    let keys: Vec<RowKey> = colors
        .regions
        .iter()
        .map(|c| RowKey {
            id: c.id.clone(),
            role: c.role,
            color: c.fill.clone(),
        })
        .collect();

    let columns = model
        .columns
        .iter()
        .enumerate()
        .map(|(i, col)| {
            build_column(col, &layout, i, &grouping, &keys, &metrics, palette)
                .map_err(|source| RenderError::Glyph { column: i, source })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let geometry = project_atlas(
        atlas,
        page.map_width,
        layout.panel_height,
        MAP_TOLERANCE,
        page.min_region_size,
    );
    let maps = build_panel_maps(atlas, &grouping, &colors, model.shading);
    let footnotes = footnotes(model, &columns);
    let report = build_report(
        model, atlas, &grouping, &colors, &layout, &geometry, &maps, &columns, footnotes,
    );
    let svg = emit_svg(
        &layout, &report, &geometry, &maps, &columns, &keys, &metrics,
    );
    Ok(RenderedFigure { svg, report })
}

fn default_title(col: &BoundColumn) -> String {
    let spec = &col.spec;
    if !spec.title.is_empty() {
        return spec.title.clone();
    }
    let b = |role: &str| spec.binding(role).unwrap_or("").to_string();
    match spec.glyph {
        GlyphKind::Scatter => format!("{} vs {}", b("y"), b("x")),
        GlyphKind::Arrow => format!("{} to {}", b("from"), b("to")),
        GlyphKind::Boxplot => b("p50"),
        GlyphKind::Timeseries => b("series"),
        GlyphKind::SegmentedBar => spec
            .bindings
            .get("parts")
            .map(|p| p.names().join(", "))
            .unwrap_or_default(),
        GlyphKind::Dot | GlyphKind::DotCi | GlyphKind::Bar => b("value"),
    }
}

fn place_rows(rows: Vec<GlyphRow>, row_y: &[f64]) -> Vec<GlyphRow> {
    rows.into_iter()
        .zip(row_y)
        .map(|(mut r, &y)| {
            for m in &mut r.marks {
                m.shape = m.shape.transformed(0.0, y, 1.0);
            }
            r
        })
        .collect()
}

fn build_column(
    col: &BoundColumn,
    layout: &FigureLayout,
    index: usize,
    grouping: &PerceptualGrouping,
    keys: &[RowKey],
    m: &GlyphMetrics,
    palette: &Palette,
) -> Result<ColumnGlyphs, GlyphError> {
    let cb = &layout.columns[index + 2];
    let title = default_title(col);
    let refs = &col.spec.reference_values;
    let ref_values: Vec<f64> = refs.iter().map(|r| r.value).collect();
    // Reorder a per-model-row vector into display order.
    let by_pos =
        |v: &[Option<f64>]| -> Vec<Option<f64>> { grouping.rows.iter().map(|&r| v[r]).collect() };
    let row_scale = |values: &[f64], include_zero: bool, fraction: f64| {
        fit_axis(
            values,
            &ref_values,
            Padding {
                fraction,
                include_zero,
            },
        )
        .with_range(cb.x0 + ROW_INSET, cb.x1 - ROW_INSET)
    };
    let flat = |vs: &[&[Option<f64>]]| -> Vec<f64> {
        vs.iter()
            .flat_map(|v| v.iter().flatten().copied())
            .collect()
    };

    let (axis, rows) = match &col.data {
        ColumnData::Dot { values, ci } => {
            let values = by_pos(values);
            let ci: Option<Vec<Option<(f64, f64)>>> = ci
                .as_ref()
                .map(|c| grouping.rows.iter().map(|&r| c[r]).collect());
            let mut all = flat(&[&values]);
            if let Some(c) = &ci {
                all.extend(c.iter().flatten().flat_map(|&(lo, hi)| [lo, hi]));
            }
            let axis = row_scale(&all, false, 0.05);
            let rows = dot_column(keys, &values, ci.as_deref(), &axis, m)?;
            (axis, Some(rows))
        }
        ColumnData::Arrow { from, to } => {
            let (from, to) = (by_pos(from), by_pos(to));
            let axis = row_scale(&flat(&[&from, &to]), false, 0.05);
            (
                axis.clone(),
                Some(arrow_column(keys, &from, &to, &axis, m)?),
            )
        }
        ColumnData::Bar { values } => {
            let values = by_pos(values);
            let axis = row_scale(&flat(&[&values]), true, 0.05);
            (axis.clone(), Some(bar_column(keys, &values, &axis, m)?))
        }
        ColumnData::Segmented { shares, .. } => {
            let shares: Vec<Option<Vec<f64>>> =
                grouping.rows.iter().map(|&r| shares[r].clone()).collect();
            let axis = row_scale(&[0.0, 1.0], false, 0.0);
            (
                axis.clone(),
                Some(segmented_bar_column(keys, &shares, &axis, m)?),
            )
        }
        ColumnData::Boxplot { rows } => {
            let pct: Vec<_> = grouping.rows.iter().map(|&r| rows[r]).collect();
            let all: Vec<f64> = pct.iter().flatten().flat_map(|p| p.as_array()).collect();
            let axis = row_scale(&all, false, 0.05);
            (axis.clone(), Some(boxplot_column(keys, &pct, &axis, m)?))
        }
        ColumnData::Timeseries { .. } | ColumnData::Scatter { .. } => {
            return Ok(build_panel_column(
                col, layout, cb, title, grouping, keys, m, palette,
            ));
        }
    };
    let rows = place_rows(rows.unwrap_or_default(), &layout.row_y);
    let missing = rows
        .iter()
        .filter(|r| r.missing)
        .map(|r| r.region.clone())
        .collect();
    let references = layout
        .bands
        .iter()
        .flat_map(|b| crate::glyphs::reference_lines(refs, &axis, b.y0, b.y1, palette, 0.9))
        .collect();
    Ok(ColumnGlyphs {
        title,
        axis,
        y_axis: None,
        rows,
        references,
        panels: Vec::new(),
        missing,
        warnings: Vec::new(),
    })
}

#[allow(clippy::too_many_arguments)]
fn build_panel_column(
    col: &BoundColumn,
    layout: &FigureLayout,
    cb: &ColumnBox,
    title: String,
    grouping: &PerceptualGrouping,
    keys: &[RowKey],
    m: &GlyphMetrics,
    palette: &Palette,
) -> ColumnGlyphs {
    let pbox = PanelBox {
        width: cb.width(),
        height: layout.panel_height,
        inset_left: 18.0,
        inset: 2.0,
    };
    let ranges = grouping.ranges();
    let refs = &col.spec.reference_values;
    let built = match &col.data {
        ColumnData::Timeseries { labels, series } => {
            let series: Vec<Vec<Option<f64>>> =
                grouping.rows.iter().map(|&r| series[r].clone()).collect();
            timeseries_column(
                &TimeseriesInput {
                    rows: keys,
                    labels,
                    series: &series,
                    groups: &ranges,
                    references: refs,
                },
                &pbox,
                m,
                palette,
            )
        }
        ColumnData::Scatter { x, y, lowess } => {
            let x: Vec<Option<f64>> = grouping.rows.iter().map(|&r| x[r]).collect();
            let y: Vec<Option<f64>> = grouping.rows.iter().map(|&r| y[r]).collect();
            scatter_column(
                &ScatterInput {
                    rows: keys,
                    x: &x,
                    y: &y,
                    groups: &ranges,
                    references: refs,
                    options: ScatterOptions {
                        identity_line: col.spec.options.identity_line,
                        lowess: *lowess,
                    },
                },
                &pbox,
                m,
                palette,
            )
        }
        _ => unreachable!("row glyph column"),
    };
    let panels = built
        .panels
        .into_iter()
        .zip(&layout.bands)
        .map(|(p, band)| {
            let scale = band.height() / layout.panel_height;
            PlacedPanel {
                group: p.group,
                tx: cb.x0 + 0.5 * cb.width() * (1.0 - scale),
                ty: band.y0,
                scale,
                marks: p.marks,
            }
        })
        .collect();
    let (xr0, xr1) = built.x.range;
    ColumnGlyphs {
        title,
        axis: built.x.with_range(cb.x0 + xr0, cb.x0 + xr1),
        y_axis: Some(built.y),
        rows: Vec::new(),
        references: Vec::new(),
        panels,
        missing: built.skipped,
        warnings: built.warnings,
    }
}

fn list(ids: &[String]) -> String {
    if ids.len() <= MAX_LISTED {
        ids.join(", ")
    } else {
        format!(
            "{} and {} more",
            ids[..MAX_LISTED].join(", "),
            ids.len() - MAX_LISTED
        )
    }
}

fn footnotes(model: &BoundFigureModel, columns: &[ColumnGlyphs]) -> Vec<String> {
    let mut out = Vec::new();
    for c in columns {
        if !c.missing.is_empty() {
            out.push(format!("{}: no data for {}", c.title, list(&c.missing)));
        }
        for w in &c.warnings {
            out.push(format!("{}: {w}", c.title));
        }
    }
    if !model.dropped.is_empty() {
        out.push(format!(
            "Omitted for missing sort value: {}",
            list(&model.dropped)
        ));
    }
    if !model.absent.is_empty() {
        out.push(format!("Not in the data: {}", list(&model.absent)));
    }
    out
}

fn absolute(marks: &[Mark], p: &PlacedPanel) -> Vec<Mark> {
    marks
        .iter()
        .map(|m| Mark {
            shape: m.shape.transformed(p.tx, p.ty, p.scale),
            ..m.clone()
        })
        .collect()
}

fn reference_x(col: &BoundColumn, c: &ColumnGlyphs, value: f64) -> Option<f64> {
    (col.spec.glyph != GlyphKind::Timeseries).then(|| c.axis.position(value))
}

#[allow(clippy::too_many_arguments)]
fn build_report(
    model: &BoundFigureModel,
    atlas: &Atlas,
    grouping: &PerceptualGrouping,
    colors: &ColorAssignment,
    layout: &FigureLayout,
    geometry: &PanelGeometry,
    maps: &[PanelMap],
    columns: &[ColumnGlyphs],
    footnotes: Vec<String>,
) -> LayoutReport {
    let group_of = grouping.group_of_position();
    let rows = grouping
        .rows
        .iter()
        .enumerate()
        .map(|(pos, &r)| RowReport {
            id: model.ids[r].clone(),
            name: model.label(r).to_string(),
            label: layout.labels[pos].clone(),
            truncated: layout.truncated[pos],
            position: pos,
            group: group_of[pos],
            y: layout.row_y[pos],
            role: colors.regions[pos].role,
            fill: colors.regions[pos].fill.clone(),
            sort_value: model.sort_values[r],
        })
        .collect();
    let groups = grouping
        .groups
        .iter()
        .zip(&layout.bands)
        .enumerate()
        .map(|(i, (g, b))| GroupReport {
            index: i,
            ids: g.clone(),
            y0: b.y0,
            y1: b.y1,
            median: Some(i) == grouping.median_group_index,
        })
        .collect();
    let map_box = &layout.columns[0];
    let panels = maps
        .iter()
        .zip(&layout.bands)
        .map(|(p, band)| {
            let scale = band.height() / geometry.height;
            let pick = |want: fn(&RegionStyle) -> bool| -> Vec<String> {
                atlas
                    .regions()
                    .iter()
                    .zip(&p.styles)
                    .filter(|(_, s)| want(s))
                    .map(|(r, _)| r.id().to_string())
                    .collect()
            };
            MapPanelReport {
                group: p.group,
                x: map_box.x0 + 0.5 * geometry.width * (1.0 - scale),
                y: band.y0,
                scale,
                highlighted: pick(|s| matches!(s, RegionStyle::Highlight(_))),
                prior: pick(|s| matches!(s, RegionStyle::Prior)),
            }
        })
        .collect();

    let mut column_reports = vec![
        bare_column(0, ColumnKind::Map, "", map_box),
        bare_column(1, ColumnKind::Labels, &model.sort_label, &layout.columns[1]),
    ];
    for (i, (col, c)) in model.columns.iter().zip(columns).enumerate() {
        let cb = &layout.columns[i + 2];
        column_reports.push(ColumnReport {
            index: i + 2,
            kind: ColumnKind::Data,
            glyph: Some(col.spec.glyph),
            title: c.title.clone(),
            x0: cb.x0,
            x1: cb.x1,
            axis: Some(c.axis.clone()),
            y_axis: c.y_axis.clone(),
            references: col
                .spec
                .reference_values
                .iter()
                .map(|r| ReferenceReport {
                    value: r.value,
                    label: r.label.clone(),
                    style: r.style,
                    x: reference_x(col, c, r.value),
                })
                .collect(),
            rows: c.rows.clone(),
            panels: c
                .panels
                .iter()
                .map(|p| PanelReport {
                    group: p.group,
                    x: p.tx,
                    y: p.ty,
                    scale: p.scale,
                    marks: absolute(&p.marks, p),
                })
                .collect(),
            missing: c.missing.clone(),
        });
    }
    let height = if footnotes.is_empty() {
        layout.bottom_ticks_y
    } else {
        layout.footnotes_y + (footnotes.len() - 1) as f64 * 1.3 * layout.font_size
    } + layout.font_size;

    LayoutReport {
        width: layout.width,
        height: height + layout.columns[0].x0,
        title: model.title.clone(),
        subtitle: model.subtitle.clone(),
        atlas: model.atlas_id.clone(),
        sort: model.sort_label.clone(),
        direction: model.direction,
        shading: model.shading,
        row_height: layout.row_height,
        groups,
        rows,
        panels,
        columns: column_reports,
        palette: colors.palette.clone(),
        footnotes,
        dropped: model.dropped.clone(),
        absent: model.absent.clone(),
        warnings: columns.iter().flat_map(|c| c.warnings.clone()).collect(),
    }
}

fn bare_column(index: usize, kind: ColumnKind, title: &str, b: &ColumnBox) -> ColumnReport {
    ColumnReport {
        index,
        kind,
        glyph: None,
        title: title.to_string(),
        x0: b.x0,
        x1: b.x1,
        axis: None,
        y_axis: None,
        references: Vec::new(),
        rows: Vec::new(),
        panels: Vec::new(),
        missing: Vec::new(),
    }
}

/// Marks that fall outside their column, as `(column index, tag)`.
pub fn clipping_violations(report: &LayoutReport) -> Vec<(usize, String)> {
    let mut out = Vec::new();
    for c in report.data_columns() {
        let eps = 1e-6;
        for m in c.marks() {
            let mut xs = m.shape.xs();
            if let Shape::Circle { cx, r, .. } = &m.shape {
                xs = vec![cx - r, cx + r];
            }
            if xs.iter().any(|&x| x < c.x0 - eps || x > c.x1 + eps) {
                out.push((c.index, m.tag.clone()));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::atlas::fixtures::strip_atlas;

    fn table(n: usize) -> DataTable {
        let keys: Vec<String> = (0..n).map(|i| format!("R{i:02}")).collect();
        let mut t = DataTable::new("id", &keys).unwrap();
        t.insert_column("a", (0..n).map(|i| Some(i as f64)).collect())
            .unwrap();
        t.insert_column("b", (0..n).map(|i| Some((i * i) as f64 - 3.0)).collect())
            .unwrap();
        t.insert_column(
            "c",
            (0..n)
                .map(|i| (i % 4 != 1).then_some(1.0 + i as f64))
                .collect(),
        )
        .unwrap();
        t
    }

    fn spec(json: &str) -> PlotSpec {
        PlotSpec::from_json(json).unwrap()
    }

    const BASIC: &str = r#"{"title":"T","sort":{"column":"a"},"columns":[
        {"glyph":"dot","bindings":{"value":"a"},"reference_values":[{"value":3}]},
        {"glyph":"bar","bindings":{"value":"c"}},
        {"glyph":"scatter","bindings":{"x":"a","y":"b"}}]}"#;

    #[test]
    fn structure_of_a_small_figure() {
        let f = render_spec(&spec(BASIC), &table(13), &strip_atlas(13)).unwrap();
        let r = &f.report;
        assert_eq!(r.panels.len(), 5);
        assert_eq!(r.rows.len(), 13);
        assert_eq!(r.columns.len(), 5);
        assert!(clipping_violations(r).is_empty());
        let bar = &r.columns[3];
        assert_eq!(bar.missing, vec!["R09", "R05", "R01"]);
        assert!(r.footnotes.iter().any(|n| n.contains("R05")));
        let dot = &r.columns[2];
        assert_eq!(
            dot.references[0].x,
            Some(dot.axis.as_ref().unwrap().position(3.0))
        );
        let scatter = &r.columns[4];
        for (p, g) in scatter.panels.iter().zip(&r.groups) {
            let filled = p.marks.iter().filter(|m| m.tag == "point-filled").count();
            let open = p.marks.iter().filter(|m| m.tag == "point-open").count();
            assert_eq!(filled, g.ids.len());
            assert_eq!(filled + open, 13);
        }
        let doc = roxmltree::Document::parse(&f.svg).unwrap();
        let labels: Vec<&str> = doc
            .descendants()
            .filter(|n| n.attribute("id").is_some_and(|i| i.starts_with("label-")))
            .filter_map(|n| n.text())
            .collect();
        assert_eq!(labels.len(), 13);
        assert_eq!(labels[0], "Region 12");
    }

    #[test]
    fn output_is_deterministic() {
        let s = spec(BASIC);
        let a = render_spec(&s, &table(13), &strip_atlas(13)).unwrap();
        let b = render_spec(&s, &table(13), &strip_atlas(13)).unwrap();
        assert_eq!(a.svg, b.svg);
        assert_eq!(a.report.to_json(), b.report.to_json());
    }

    #[test]
    fn empty_title_moves_content_up() {
        let with = render_spec(&spec(BASIC), &table(13), &strip_atlas(13)).unwrap();
        let without = render_spec(
            &spec(&BASIC.replace(r#""title":"T","#, "")),
            &table(13),
            &strip_atlas(13),
        )
        .unwrap();
        assert!(without.report.groups[0].y0 < with.report.groups[0].y0);
        assert!(without.report.height < with.report.height);
    }

    #[test]
    fn narrow_page_is_an_error() {
        let s = spec(&BASIC.replace(r#""title":"T","#, r#""page":{"width":300},"#));
        match render_spec(&s, &table(13), &strip_atlas(13)) {
            Err(RenderError::TooNarrow { minimum, .. }) => assert!(minimum > 300.0),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validated_render_rejects_before_drawing() {
        let s = spec(
            r#"{"sort":{"column":"a"},"columns":[{"glyph":"dot","bindings":{"value":"nope"}}]}"#,
        );
        let issues = render_validated(&s, &table(7), &strip_atlas(7)).unwrap_err();
        assert_eq!(issues.issues[0].kind, IssueKind::UnresolvedBinding);
        assert!(issues.messages()[0].contains("nope"));

        let s = spec(&BASIC.replace(r#""title":"T","#, r#""page":{"width":300},"#));
        let issues = render_validated(&s, &table(13), &strip_atlas(13)).unwrap_err();
        assert_eq!(issues.issues[0].kind, IssueKind::Unrenderable);

        let s = spec(BASIC);
        let a = render_validated(&s, &table(13), &strip_atlas(13)).unwrap();
        assert_eq!(
            a.svg,
            render_spec(&s, &table(13), &strip_atlas(13)).unwrap().svg
        );
    }

    #[test]
    fn equal_widths_without_weights() {
        let s = spec(
            r#"{"sort":{"column":"a"},"columns":[{"glyph":"dot","bindings":{"value":"a"}},{"glyph":"dot","bindings":{"value":"b"}}]}"#,
        );
        let f = render_spec(&s, &table(7), &strip_atlas(7)).unwrap();
        let w: Vec<f64> = f.report.data_columns().map(|c| c.x1 - c.x0).collect();
        assert!((w[0] - w[1]).abs() < 1e-9);
    }

    #[test]
    fn long_names_are_truncated() {
        let s = spec(
            r#"{"sort":{"column":"a"},"columns":[{"glyph":"dot","bindings":{"value":"a"}}],"page":{"label_max_width":40}}"#,
        );
        let f = render_spec(&s, &table(7), &strip_atlas(7)).unwrap();
        for r in &f.report.rows {
            assert!(r.truncated);
            assert!(r.label.ends_with('…'));
            assert!(r.name.starts_with("Region"));
        }
    }
}
