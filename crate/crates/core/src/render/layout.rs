use serde::Serialize;

use super::RenderError;
use crate::grouping::PerceptualGrouping;
use crate::model::{BoundFigureModel, PageOptions};

/// Width of `c` in em units. A fixed table keeps layout independent of the
/// fonts installed where the figure is rendered.
pub fn char_em(c: char) -> f64 {
    match c {
        ' ' | 'i' | 'j' | 'l' | '.' | ',' | '\'' | ':' | ';' | '|' | '!' => 0.28,
        'f' | 't' | 'r' | 'I' | '(' | ')' | '[' | ']' | '-' | '/' => 0.34,
        'm' | 'w' => 0.84,
        'M' | 'W' => 0.86,
        '0'..='9' | '$' | '#' | '?' | '_' => 0.56,
        'A'..='Z' => 0.68,
        'a'..='z' => 0.54,
        '%' | '@' => 0.9,
        _ => 0.6,
    }
}

pub fn text_width(s: &str, size: f64) -> f64 {
    s.chars().map(char_em).sum::<f64>() * size
}

/// Longest prefix of `s` that fits `max` with a trailing ellipsis, or `s`
/// itself when it fits. The flag reports truncation.
pub fn fit_text(s: &str, size: f64, max: f64) -> (String, bool) {
    if text_width(s, size) <= max {
        return (s.to_string(), false);
    }
    let budget = max - char_em('…') * size;
    let mut out = String::new();
    let mut w = 0.0;
    for c in s.chars() {
        let cw = char_em(c) * size;
        if w + cw > budget {
            break;
        }
        w += cw;
        out.push(c);
    }
    let trimmed = out.trim_end().len();
    out.truncate(trimmed);
    out.push('…');
    (out, true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColumnKind {
    Map,
    Labels,
    Data,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnBox {
    pub kind: ColumnKind,
    pub x0: f64,
    pub x1: f64,
}

impl ColumnBox {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Band {
    pub group: usize,
    pub y0: f64,
    pub y1: f64,
}

impl Band {
    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureLayout {
    pub width: f64,
    pub font_size: f64,
    pub row_height: f64,
    /// Baselines of the title and subtitle, when shown.
    pub title_y: Option<f64>,
    pub subtitle_y: Option<f64>,
    pub column_title_y: f64,
    pub top_ticks_y: f64,
    pub bands: Vec<Band>,
    /// Map, labels, then one box per data column in spec order.
    pub columns: Vec<ColumnBox>,
    /// Row center for each position of the grouping order.
    pub row_y: Vec<f64>,
    pub labels: Vec<String>,
    pub truncated: Vec<bool>,
    pub bottom_ticks_y: f64,
    pub footnotes_y: f64,
    /// Height of the reference panel box (the tallest band).
    pub panel_height: f64,
}

const LABEL_PAD: f64 = 12.0;
const MIN_DATA_WIDTH: f64 = 40.0;

pub fn compute_layout(
    model: &BoundFigureModel,
    grouping: &PerceptualGrouping,
    page: &PageOptions,
) -> Result<FigureLayout, RenderError> {
    let f = page.font_size;
    let m = page.margin;
    let mut y = m;
    let title_y = (!model.title.is_empty()).then(|| {
        y += 1.6 * f;
        y
    });
    let subtitle_y = (!model.subtitle.is_empty()).then(|| {
        y += 1.3 * f;
        y
    });
    if title_y.is_some() || subtitle_y.is_some() {
        y += 0.6 * f;
    }
    let column_title_y = y + f;
    let top_ticks_y = column_title_y + 1.1 * f;
    y = top_ticks_y + 0.5 * f;

    let mut bands = Vec::with_capacity(grouping.groups.len());
    let mut row_y = Vec::with_capacity(grouping.len());
    for (gi, g) in grouping.groups.iter().enumerate() {
        if gi > 0 {
            y += page.group_gap;
        }
        let y0 = y;
        for i in 0..g.len() {
            row_y.push(y0 + (i as f64 + 0.5) * page.row_height);
        }
        y += g.len() as f64 * page.row_height;
        bands.push(Band {
            group: gi,
            y0,
            y1: y,
        });
    }
    let panel_height = bands.iter().map(Band::height).fold(0.0, f64::max);

    let raw: Vec<&str> = grouping.rows.iter().map(|&r| model.label(r)).collect();
    let longest = raw.iter().map(|s| text_width(s, f)).fold(0.0, f64::max);
    let label_w = (longest + LABEL_PAD + 2.0).min(page.label_max_width);
    let (labels, truncated): (Vec<String>, Vec<bool>) = raw
        .iter()
        .map(|s| fit_text(s, f, label_w - LABEL_PAD))
        .unzip();

    let k = model.columns.len().max(1);
    let gaps = (k + 1) as f64 * page.column_gap;
    let fixed = 2.0 * m + page.map_width + label_w + gaps;
    let minimum = fixed + MIN_DATA_WIDTH * k as f64;
    if page.width < minimum {
        return Err(RenderError::TooNarrow {
            width: page.width,
            minimum,
        });
    }
    let avail = page.width - fixed;
    let total_weight: f64 = model.columns.iter().map(|c| c.spec.options.weight).sum();

    let mut columns = Vec::with_capacity(k + 2);
    let mut x = m;
    columns.push(ColumnBox {
        kind: ColumnKind::Map,
        x0: x,
        x1: x + page.map_width,
    });
    x += page.map_width + page.column_gap;
    columns.push(ColumnBox {
        kind: ColumnKind::Labels,
        x0: x,
        x1: x + label_w,
    });
    x += label_w;
    for c in &model.columns {
        x += page.column_gap;
        let w = avail * c.spec.options.weight / total_weight;
        columns.push(ColumnBox {
            kind: ColumnKind::Data,
            x0: x,
            x1: x + w,
        });
        x += w;
    }

    let bottom_ticks_y = y + 1.2 * f;
    let footnotes_y = bottom_ticks_y + 1.6 * f;
    Ok(FigureLayout {
        width: page.width,
        font_size: f,
        row_height: page.row_height,
        title_y,
        subtitle_y,
        column_title_y,
        top_ticks_y,
        bands,
        columns,
        row_y,
        labels,
        truncated,
        bottom_ticks_y,
        footnotes_y,
        panel_height,
    })
}
