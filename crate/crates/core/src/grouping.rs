//! Sorting, perceptual grouping and positional color linking.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{BoundFigureModel, Direction};

pub const MAX_GROUP: usize = 5;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupingError {
    #[error("cannot group zero regions")]
    Empty,
}

/// Row indices of `model` in display order. Ties go to the smaller id
/// whatever the direction.
pub fn sort_rows(model: &BoundFigureModel, direction: Direction) -> Vec<usize> {
    sort_by_value(&model.ids, &model.sort_values, direction)
}

pub fn sort_by_value(ids: &[String], values: &[f64], direction: Direction) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..ids.len()).collect();
    idx.sort_by(|&a, &b| {
        let by_value = values[a].total_cmp(&values[b]);
        let by_value = match direction {
            Direction::Ascending => by_value,
            Direction::Descending => by_value.reverse(),
        };
        match by_value {
            Ordering::Equal => ids[a].cmp(&ids[b]),
            o => o,
        }
    });
    idx
}

/// Group sizes from top to bottom. An odd count puts the median region in a
/// group of its own; each half is cut into `ceil(h/5)` groups as equal as
/// possible with the larger ones toward the outside, mirrored about the
/// middle.
pub fn build_groups(n: usize) -> Result<Vec<usize>, GroupingError> {
    if n == 0 {
        return Err(GroupingError::Empty);
    }
    let half = n / 2;
    let outer_first = split_half(half);
    let mut sizes = outer_first.clone();
    if n % 2 == 1 {
        sizes.push(1);
    }
    sizes.extend(outer_first.iter().rev());
    Ok(sizes)
}

fn split_half(h: usize) -> Vec<usize> {
    if h == 0 {
        return Vec::new();
    }
    let g = h.div_ceil(MAX_GROUP);
    let (base, extra) = (h / g, h % g);
    (0..g).map(|i| base + usize::from(i < extra)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PerceptualGrouping {
    /// Region ids in display order.
    pub order: Vec<String>,
    /// Model row index for each entry of `order`.
    pub rows: Vec<usize>,
    pub groups: Vec<Vec<String>>,
    pub median_group_index: Option<usize>,
}

impl PerceptualGrouping {
    pub fn from_model(model: &BoundFigureModel) -> Result<Self, GroupingError> {
        let rows = sort_rows(model, model.direction);
        let order = rows.iter().map(|&i| model.ids[i].clone()).collect();
        Self::from_order(order, rows)
    }

    pub fn from_order(order: Vec<String>, rows: Vec<usize>) -> Result<Self, GroupingError> {
        let sizes = build_groups(order.len())?;
        let mut groups = Vec::with_capacity(sizes.len());
        let mut at = 0;
        for s in &sizes {
            groups.push(order[at..at + s].to_vec());
            at += s;
        }
        let median_group_index = (order.len() % 2 == 1).then_some(sizes.len() / 2);
        Ok(PerceptualGrouping {
            order,
            rows,
            groups,
            median_group_index,
        })
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Positions in `order` covered by each group.
    pub fn ranges(&self) -> Vec<std::ops::Range<usize>> {
        let mut at = 0;
        self.groups
            .iter()
            .map(|g| {
                let r = at..at + g.len();
                at += g.len();
                r
            })
            .collect()
    }

    /// Group index for each position in `order`.
    pub fn group_of_position(&self) -> Vec<usize> {
        self.groups
            .iter()
            .enumerate()
            .flat_map(|(gi, g)| std::iter::repeat_n(gi, g.len()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Palette {
    /// One color per row position within a group.
    pub colors: Vec<String>,
    pub median: String,
    /// Map fill for regions outside the current group.
    pub neutral: String,
    /// Cumulative mode: regions shown in earlier panels.
    pub prior: String,
    pub outline: String,
    pub reference: String,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            colors: ["#D55E00", "#E69F00", "#009E73", "#0072B2", "#CC79A7"]
                .map(String::from)
                .to_vec(),
            median: "#000000".into(),
            neutral: "#F2F2F2".into(),
            prior: "#BFBFBF".into(),
            outline: "#808080".into(),
            reference: "#2E9E44".into(),
        }
    }
}

impl Palette {
    /// Problems with the palette, if any.
    pub fn check(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.colors.len() != MAX_GROUP {
            out.push(format!(
                "palette needs {MAX_GROUP} colors, got {}",
                self.colors.len()
            ));
        }
        let all = self.colors.iter().chain([
            &self.median,
            &self.neutral,
            &self.prior,
            &self.outline,
            &self.reference,
        ]);
        for c in all {
            if !is_hex_color(c) {
                out.push(format!("invalid color {c:?}"));
            }
        }
        out
    }
}

fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].bytes().all(|b| b.is_ascii_hexdigit())
}

/// Color role of one row: its position within the group, or the median.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColorRole {
    Slot(usize),
    Median,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RegionColor {
    pub id: String,
    pub role: ColorRole,
    pub fill: String,
    pub outline: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColorAssignment {
    pub palette: Palette,
    /// One entry per position of `grouping.order`.
    pub regions: Vec<RegionColor>,
}

impl ColorAssignment {
    pub fn fill(&self, role: ColorRole) -> &str {
        match role {
            ColorRole::Slot(i) => &self.palette.colors[i % self.palette.colors.len()],
            ColorRole::Median => &self.palette.median,
        }
    }
}

pub fn assign_colors(grouping: &PerceptualGrouping, palette: &Palette) -> ColorAssignment {
    let mut regions = Vec::with_capacity(grouping.len());
    for (gi, group) in grouping.groups.iter().enumerate() {
        for (i, id) in group.iter().enumerate() {
            let role = if Some(gi) == grouping.median_group_index {
                ColorRole::Median
            } else {
                ColorRole::Slot(i)
            };
            let fill = match role {
                ColorRole::Slot(i) => palette.colors[i % palette.colors.len()].clone(),
                ColorRole::Median => palette.median.clone(),
            };
            regions.push(RegionColor {
                id: id.clone(),
                role,
                fill,
                outline: palette.outline.clone(),
            });
        }
    }
    ColorAssignment {
        palette: palette.clone(),
        regions,
    }
}
