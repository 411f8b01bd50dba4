use serde::Serialize;
use thiserror::Error;

use super::spec::{ColumnSpec, Direction, GlyphKind, LabelMode, PlotSpec, ShadingMode, SortSpec};
use super::validate::{validate_spec, ValidationReport};
use super::{Atlas, DataTable};
use crate::stats::{
    ci_from_prse, lowess_residuals, over_year_pct_change, pca_scores, LowessParams, Percentiles,
    StatsError,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BindError {
    #[error("spec has validation issues:\n{0}")]
    Invalid(ValidationReport),
    #[error("missing sort value for {}", .0.join(", "))]
    MissingSortValues(Vec<String>),
    #[error("no rows left to plot")]
    NoRows,
    #[error("sort {sort}: {source}")]
    Sort { sort: String, source: StatsError },
    #[error("column {column}: {source}")]
    Column { column: usize, source: StatsError },
}

/// Per-region data for one column, aligned with `BoundFigureModel::ids`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ColumnData {
    Dot {
        values: Vec<Option<f64>>,
        /// Interval per region when the column carries one.
        ci: Option<Vec<Option<(f64, f64)>>>,
    },
    Arrow {
        from: Vec<Option<f64>>,
        to: Vec<Option<f64>>,
    },
    Bar {
        values: Vec<Option<f64>>,
    },
    Segmented {
        parts: Vec<String>,
        /// One share vector per region; `None` if any part is missing.
        shares: Vec<Option<Vec<f64>>>,
    },
    Boxplot {
        rows: Vec<Option<Percentiles>>,
    },
    Timeseries {
        labels: Vec<String>,
        series: Vec<Vec<Option<f64>>>,
    },
    Scatter {
        x: Vec<Option<f64>>,
        y: Vec<Option<f64>>,
        lowess: Option<LowessParams>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundColumn {
    pub spec: ColumnSpec,
    pub data: ColumnData,
}

/// A spec resolved against a table and an atlas. Rows follow atlas order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundFigureModel {
    pub title: String,
    pub subtitle: String,
    pub atlas_id: String,
    pub sort_label: String,
    pub direction: Direction,
    pub shading: ShadingMode,
    pub labels: LabelMode,
    pub ids: Vec<String>,
    pub names: Vec<String>,
    pub sort_values: Vec<f64>,
    pub columns: Vec<BoundColumn>,
    /// Rows removed because their sort value was missing.
    pub dropped: Vec<String>,
    /// Atlas regions with no table row.
    pub absent: Vec<String>,
}

impl BoundFigureModel {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn label(&self, row: usize) -> &str {
        match self.labels {
            LabelMode::Name => &self.names[row],
            LabelMode::Id => &self.ids[row],
        }
    }
}

pub fn bind_spec(
    spec: &PlotSpec,
    table: &DataTable,
    atlas: &Atlas,
) -> Result<BoundFigureModel, BindError> {
    let report = validate_spec(spec, table, atlas);
    if !report.is_ok() {
        return Err(BindError::Invalid(report));
    }

    let mut rows: Vec<(String, String)> = Vec::new();
    let mut absent = Vec::new();
    for r in atlas.regions() {
        if table.row_index(r.id()).is_some() {
            rows.push((r.id().to_string(), r.name().to_string()));
        } else {
            absent.push(r.id().to_string());
        }
    }
    let col = |name: &str, ids: &[&str]| -> Vec<Option<f64>> {
        ids.iter().map(|k| table.value(name, k)).collect()
    };

    let all_ids: Vec<&str> = rows.iter().map(|(id, _)| id.as_str()).collect();
    let sort = sort_values(&spec.sort, &all_ids, &col)?;
    let mut dropped = Vec::new();
    let mut keep = Vec::new();
    for (i, v) in sort.iter().enumerate() {
        match v {
            Some(_) => keep.push(i),
            None => dropped.push(all_ids[i].to_string()),
        }
    }
    if !dropped.is_empty() && !spec.drop_missing_sort {
        return Err(BindError::MissingSortValues(dropped));
    }
    if keep.is_empty() {
        return Err(BindError::NoRows);
    }
    let ids: Vec<String> = keep.iter().map(|&i| rows[i].0.clone()).collect();
    let names: Vec<String> = keep.iter().map(|&i| rows[i].1.clone()).collect();
    let sort_values: Vec<f64> = keep.iter().map(|&i| sort[i].unwrap()).collect();
    let id_refs: Vec<&str> = ids.iter().map(String::as_str).collect();

    let columns = spec
        .columns
        .iter()
        .enumerate()
        .map(|(ci, c)| {
            bind_column(c, table, &id_refs, &col).map_err(|source| BindError::Column {
                column: ci + 1,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    Ok(BoundFigureModel {
        title: spec.title.clone(),
        subtitle: spec.subtitle.clone(),
        atlas_id: atlas.id().to_string(),
        sort_label: spec.sort.describe(),
        direction: spec.direction,
        shading: spec.shading,
        labels: spec.labels,
        ids,
        names,
        sort_values,
        columns,
        dropped,
        absent,
    })
}

/// Values of one column by dataset column name, in the given row order.
type ColumnLookup<'a> = dyn Fn(&str, &[&str]) -> Vec<Option<f64>> + 'a;

/// Sort value per row; `None` where an input is missing. Derived sorts are
/// computed over the complete rows only.
fn sort_values(
    sort: &SortSpec,
    ids: &[&str],
    col: &ColumnLookup,
) -> Result<Vec<Option<f64>>, BindError> {
    let fail = |source| BindError::Sort {
        sort: sort.describe(),
        source,
    };
    match sort {
        SortSpec::Column(c) => Ok(col(c, ids)),
        SortSpec::Pca { k, columns } => {
            let data: Vec<Vec<Option<f64>>> = columns.iter().map(|c| col(c, ids)).collect();
            let complete: Vec<usize> = (0..ids.len())
                .filter(|&i| data.iter().all(|d| d[i].is_some()))
                .collect();
            let matrix: Vec<Vec<f64>> = complete
                .iter()
                .map(|&i| data.iter().map(|d| d[i].unwrap()).collect())
                .collect();
            let scores = pca_scores(columns, &matrix, *k).map_err(fail)?;
            Ok(scatter_back(ids.len(), &complete, scores))
        }
        SortSpec::LowessResidual {
            x,
            y,
            span,
            robust_iters,
        } => {
            let xs = col(x, ids);
            let ys = col(y, ids);
            let complete: Vec<usize> = (0..ids.len())
                .filter(|&i| xs[i].is_some() && ys[i].is_some())
                .collect();
            let points: Vec<(f64, f64)> = complete
                .iter()
                .map(|&i| (xs[i].unwrap(), ys[i].unwrap()))
                .collect();
            let res =
                lowess_residuals(&points, LowessParams::new(*span, *robust_iters)).map_err(fail)?;
            Ok(scatter_back(ids.len(), &complete, res))
        }
    }
}

fn scatter_back(n: usize, at: &[usize], values: Vec<f64>) -> Vec<Option<f64>> {
    let mut out = vec![None; n];
    for (&i, v) in at.iter().zip(values) {
        out[i] = Some(v);
    }
    out
}

fn bind_column(
    c: &ColumnSpec,
    table: &DataTable,
    ids: &[&str],
    col: &ColumnLookup,
) -> Result<BoundColumn, StatsError> {
    let role = |r: &str| c.binding(r).map(|name| col(name, ids));
    let req = |r: &str| role(r).expect("validated binding");
    let data = match c.glyph {
        GlyphKind::Dot | GlyphKind::DotCi => {
            let values = req("value");
            let ci = if let Some(prse) = role("prse") {
                let cis = values
                    .iter()
                    .zip(&prse)
                    .map(|(m, p)| match (m, p) {
                        (Some(m), Some(p)) => ci_from_prse(*m, *p, c.options.ci_level).map(Some),
                        _ => Ok(None),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Some(cis)
            } else if let (Some(lo), Some(hi)) = (role("lo"), role("hi")) {
                Some(
                    lo.iter()
                        .zip(&hi)
                        .map(|(l, h)| l.zip(*h))
                        .collect::<Vec<_>>(),
                )
            } else {
                None
            };
            ColumnData::Dot { values, ci }
        }
        GlyphKind::Arrow => ColumnData::Arrow {
            from: req("from"),
            to: req("to"),
        },
        GlyphKind::Bar => ColumnData::Bar {
            values: req("value"),
        },
        GlyphKind::SegmentedBar => {
            let parts: Vec<String> = c.bindings["parts"]
                .names()
                .into_iter()
                .map(String::from)
                .collect();
            let cols: Vec<Vec<Option<f64>>> = parts.iter().map(|p| col(p, ids)).collect();
            let shares = (0..ids.len())
                .map(|i| cols.iter().map(|c| c[i]).collect::<Option<Vec<f64>>>())
                .collect();
            ColumnData::Segmented { parts, shares }
        }
        GlyphKind::Boxplot => {
            let q: Vec<Vec<Option<f64>>> = ["p10", "p25", "p50", "p75", "p90"]
                .iter()
                .map(|r| req(r))
                .collect();
            let rows = (0..ids.len())
                .map(|i| match (q[0][i], q[1][i], q[2][i], q[3][i], q[4][i]) {
                    (Some(p10), Some(p25), Some(p50), Some(p75), Some(p90)) => Some(Percentiles {
                        p10,
                        p25,
                        p50,
                        p75,
                        p90,
                    }),
                    _ => None,
                })
                .collect();
            ColumnData::Boxplot { rows }
        }
        GlyphKind::Timeseries => {
            let group = table
                .time_group(c.binding("series").expect("validated binding"))
                .expect("validated time group");
            let mut labels: Vec<String> = group.iter().map(|e| e.label.clone()).collect();
            let mut series: Vec<Vec<Option<f64>>> = (0..ids.len())
                .map(|i| {
                    group
                        .iter()
                        .map(|e| table.value(&e.column, ids[i]))
                        .collect()
                })
                .collect();
            if let Some(lag) = c.options.pct_change_lag {
                for s in series.iter_mut() {
                    *s = over_year_pct_change(s, lag)?;
                }
            }
            trim_empty_ends(&mut labels, &mut series);
            ColumnData::Timeseries { labels, series }
        }
        GlyphKind::Scatter => ColumnData::Scatter {
            x: req("x"),
            y: req("y"),
            lowess: c
                .options
                .lowess_span
                .map(|s| LowessParams::new(s, c.options.lowess_iters)),
        },
    };
    Ok(BoundColumn {
        spec: c.clone(),
        data,
    })
}

/// Drops leading and trailing time points that are missing for every row.
fn trim_empty_ends(labels: &mut Vec<String>, series: &mut [Vec<Option<f64>>]) {
    let filled = |t: usize| series.iter().any(|s| s[t].is_some());
    let n = labels.len();
    let start = (0..n).find(|&t| filled(t)).unwrap_or(n);
    let end = (start..n)
        .rev()
        .find(|&t| filled(t))
        .map_or(start, |t| t + 1);
    labels.truncate(end);
    labels.drain(..start);
    for s in series.iter_mut() {
        s.truncate(end);
        s.drain(..start);
    }
}
