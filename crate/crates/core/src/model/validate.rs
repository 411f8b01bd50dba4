use serde::{Deserialize, Serialize};

use super::spec::{Arity, BindingRef, GlyphKind, PlotSpec, SortSpec};
use super::{Atlas, DataTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IssueKind {
    NoColumns,
    UnresolvedBinding,
    MissingBinding,
    UnknownRole,
    BindingArity,
    UnmatchedRegion,
    InvalidOption,
    InvalidReference,
    InvalidSort,
    /// The spec passed every check but the figure could not be laid out.
    Unrenderable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Issue {
    pub kind: IssueKind,
    pub message: String,
    /// Index into `spec.columns`, when the issue belongs to one column.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    pub fn push(&mut self, kind: IssueKind, column: Option<usize>, message: String) {
        self.issues.push(Issue {
            kind,
            message,
            column,
        });
    }

    pub fn messages(&self) -> Vec<&str> {
        self.issues.iter().map(|i| i.message.as_str()).collect()
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, issue) in self.issues.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            match issue.column {
                Some(c) => write!(f, "column {}: {}", c + 1, issue.message)?,
                None => write!(f, "{}", issue.message)?,
            }
        }
        Ok(())
    }
}

/// Checks a spec against a table and an atlas. Problems are returned as
/// data; this never fails.
pub fn validate_spec(spec: &PlotSpec, table: &DataTable, atlas: &Atlas) -> ValidationReport {
    let mut report = ValidationReport::default();
    let unresolved = |report: &mut ValidationReport, col: Option<usize>, name: &str| {
        report.push(
            IssueKind::UnresolvedBinding,
            col,
            format!("unresolved binding {name}"),
        );
    };

    for name in spec.sort.referenced_columns() {
        if !table.has_column(name) {
            unresolved(&mut report, None, name);
        }
    }
    match &spec.sort {
        SortSpec::Column(_) => {}
        SortSpec::Pca { k, columns } => {
            if columns.is_empty() {
                report.push(
                    IssueKind::InvalidSort,
                    None,
                    "pca sort needs at least one column".into(),
                );
            } else if *k == 0 || *k > columns.len() {
                report.push(
                    IssueKind::InvalidSort,
                    None,
                    format!("pca component {k} outside 1..={}", columns.len()),
                );
            }
        }
        SortSpec::LowessResidual { span, .. } => {
            if !(*span > 0.0 && *span <= 1.0) {
                report.push(
                    IssueKind::InvalidSort,
                    None,
                    format!("lowess span {span} outside (0, 1]"),
                );
            }
        }
    }

    if spec.columns.is_empty() {
        report.push(
            IssueKind::NoColumns,
            None,
            "spec has no data columns".into(),
        );
    }

    for (ci, col) in spec.columns.iter().enumerate() {
        let c = Some(ci);
        let roles = col.glyph.roles();
        for (role, required, arity) in roles {
            match col.bindings.get(*role) {
                None if *required => report.push(
                    IssueKind::MissingBinding,
                    c,
                    format!("{} needs binding '{role}'", col.glyph.name()),
                ),
                None => {}
                Some(b) => {
                    match (arity, b) {
                        (Arity::One, BindingRef::Many(_)) => report.push(
                            IssueKind::BindingArity,
                            c,
                            format!("binding '{role}' takes one column"),
                        ),
                        (Arity::Many, BindingRef::Many(v)) if v.len() < 2 => report.push(
                            IssueKind::BindingArity,
                            c,
                            format!("binding '{role}' needs at least two columns"),
                        ),
                        _ => {}
                    }
                    let time_role = col.glyph == GlyphKind::Timeseries;
                    for name in b.names() {
                        let found = if time_role {
                            table.time_group(name).is_some()
                        } else {
                            table.has_column(name)
                        };
                        if !found {
                            unresolved(&mut report, c, name);
                        }
                    }
                }
            }
        }
        for role in col.bindings.keys() {
            if !roles.iter().any(|(r, _, _)| r == role) {
                report.push(
                    IssueKind::UnknownRole,
                    c,
                    format!("{} has no binding role '{role}'", col.glyph.name()),
                );
            }
        }
        if col.glyph == GlyphKind::DotCi {
            let has = |r: &str| col.bindings.contains_key(r);
            let explicit = has("lo") && has("hi");
            if has("lo") != has("hi") {
                report.push(
                    IssueKind::MissingBinding,
                    c,
                    "dot_ci needs both 'lo' and 'hi'".into(),
                );
            }
            if !explicit && !has("prse") {
                report.push(
                    IssueKind::MissingBinding,
                    c,
                    "dot_ci needs binding 'prse' or both 'lo' and 'hi'".into(),
                );
            }
            if explicit && has("prse") {
                report.push(
                    IssueKind::BindingArity,
                    c,
                    "dot_ci takes 'prse' or 'lo'/'hi', not both".into(),
                );
            }
        }

        for r in &col.reference_values {
            if !r.value.is_finite() {
                report.push(
                    IssueKind::InvalidReference,
                    c,
                    "reference value must be finite".into(),
                );
            }
        }
        let o = &col.options;
        if !(o.ci_level > 0.0 && o.ci_level < 1.0) {
            report.push(
                IssueKind::InvalidOption,
                c,
                format!("ci_level {} outside (0, 1)", o.ci_level),
            );
        }
        if let Some(span) = o.lowess_span {
            if !(span > 0.0 && span <= 1.0) {
                report.push(
                    IssueKind::InvalidOption,
                    c,
                    format!("lowess_span {span} outside (0, 1]"),
                );
            }
        }
        if !(o.weight > 0.0 && o.weight.is_finite()) {
            report.push(
                IssueKind::InvalidOption,
                c,
                format!("weight {} must be positive", o.weight),
            );
        }
        if let Some(lag) = o.pct_change_lag {
            let len = col
                .binding("series")
                .and_then(|g| table.time_group(g))
                .map(|g| g.len());
            if lag == 0 || len.is_some_and(|n| n <= lag) {
                report.push(
                    IssueKind::InvalidOption,
                    c,
                    format!("pct_change_lag {lag} does not fit the series"),
                );
            }
        }
    }

    if let Some(p) = &spec.palette {
        for msg in p.check() {
            report.push(IssueKind::InvalidOption, None, msg);
        }
    }

    for key in table.keys() {
        if atlas.region(key).is_none() {
            report.push(
                IssueKind::UnmatchedRegion,
                None,
                format!("unmatched region key {key}"),
            );
        }
    }
    report
}
