use std::fmt::Write;

use super::layout::{fit_text, text_width, ColumnKind, FigureLayout};
use super::report::LayoutReport;
use super::ColumnGlyphs;
use crate::fmt::coord;
use crate::glyphs::{Anchor, GlyphMetrics, Mark, RowKey, Shape, Style};
use crate::maprender::{PanelGeometry, PanelMap, RegionStyle};

const FONT: &str = "Helvetica, Arial, sans-serif";
const BAND_FILL: &str = "#F3F3F3";
const GRID: &str = "#FFFFFF";
/// Panels drawn smaller than this lose their text.
const MIN_TEXT_SCALE: f64 = 0.5;

/// Element id fragment for a region id. Characters outside `[A-Za-z0-9-]`
/// become `_xx` hex escapes, so distinct ids stay distinct.
pub fn sanitize_id(id: &str) -> String {
    let mut out = String::with_capacity(id.len());
    for c in id.chars() {
        if c.is_ascii_alphanumeric() || c == '-' {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                let _ = write!(out, "_{b:02x}");
            }
        }
    }
    out
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

/// Scale factors keep four decimals so scaled panels line up with bands.
fn scale_str(s: f64) -> String {
    let t = format!("{s:.4}");
    let t = t.trim_end_matches('0').trim_end_matches('.');
    if t == "-0" {
        "0".into()
    } else {
        t.to_string()
    }
}

fn style_attrs(out: &mut String, style: &Style, stroke_scale: f64, default_fill: &str) {
    let fill = style.fill.as_deref().unwrap_or(default_fill);
    let _ = write!(out, r#" fill="{}""#, esc(fill));
    if let Some(o) = style.opacity {
        let _ = write!(out, r#" fill-opacity="{}""#, coord(o));
    }
    if let Some(s) = &style.stroke {
        let _ = write!(
            out,
            r#" stroke="{}" stroke-width="{}""#,
            esc(s),
            coord(style.stroke_width / stroke_scale)
        );
        if style.dashed {
            let d = 3.0 / stroke_scale;
            let g = 2.0 / stroke_scale;
            let _ = write!(out, r#" stroke-dasharray="{} {}""#, coord(d), coord(g));
        }
    }
}

fn anchor_name(a: Anchor) -> &'static str {
    match a {
        Anchor::Start => "start",
        Anchor::Middle => "middle",
        Anchor::End => "end",
    }
}

fn shape(out: &mut String, mark: &Mark, stroke_scale: f64) {
    let st = &mark.style;
    match &mark.shape {
        Shape::Circle { cx, cy, r } => {
            let _ = write!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}""#,
                coord(*cx),
                coord(*cy),
                coord(*r)
            );
            style_attrs(out, st, stroke_scale, "none");
        }
        Shape::Line { x1, y1, x2, y2 } => {
            let _ = write!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}""#,
                coord(*x1),
                coord(*y1),
                coord(*x2),
                coord(*y2)
            );
            style_attrs(out, st, stroke_scale, "none");
        }
        Shape::Rect { x, y, w, h } => {
            let _ = write!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}""#,
                coord(*x),
                coord(*y),
                coord(w.max(0.0)),
                coord(h.max(0.0))
            );
            style_attrs(out, st, stroke_scale, "none");
        }
        Shape::Polyline { points } => {
            out.push_str(r#"<polyline points=""#);
            for (i, p) in points.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "{},{}", coord(p[0]), coord(p[1]));
            }
            out.push('"');
            style_attrs(out, st, stroke_scale, "none");
        }
        Shape::Arrow {
            x1,
            y1,
            x2,
            y2,
            head,
        } => {
            let (dx, dy) = (x2 - x1, y2 - y1);
            let len = (dx * dx + dy * dy).sqrt();
            let h = head.min(len);
            let (ux, uy) = (dx / len, dy / len);
            let (bx, by) = (x2 - ux * h, y2 - uy * h);
            let (px, py) = (-uy * 0.5 * h, ux * 0.5 * h);
            let _ = write!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}""#,
                coord(*x1),
                coord(*y1),
                coord(bx),
                coord(by)
            );
            style_attrs(out, st, stroke_scale, "none");
            out.push_str("/>\n");
            let color = st.stroke.as_deref().unwrap_or("#000000");
            let _ = write!(
                out,
                r#"<polygon points="{},{} {},{} {},{}" fill="{}""#,
                coord(*x2),
                coord(*y2),
                coord(bx + px),
                coord(by + py),
                coord(bx - px),
                coord(by - py),
                esc(color)
            );
        }
        Shape::Text {
            x,
            y,
            text,
            anchor,
            size,
        } => {
            let _ = write!(
                out,
                r#"<text x="{}" y="{}" font-size="{}" text-anchor="{}" fill="{}">{}</text>"#,
                coord(*x),
                coord(*y),
                coord(*size),
                anchor_name(*anchor),
                esc(st.fill.as_deref().unwrap_or("#000000")),
                esc(text)
            );
            out.push('\n');
            return;
        }
    }
    out.push_str("/>\n");
}

#[derive(Clone, Copy, PartialEq)]
enum Layer {
    Background,
    Reference,
    Marks,
    Text,
}

fn layer_of(m: &Mark) -> Layer {
    if m.shape.is_text() {
        return Layer::Text;
    }
    match m.tag.as_str() {
        "panel-frame" => Layer::Background,
        "reference" | "zero-line" => Layer::Reference,
        _ => Layer::Marks,
    }
}

fn panel_layer(out: &mut String, columns: &[ColumnGlyphs], layer: Layer) {
    for c in columns {
        for p in &c.panels {
            if layer == Layer::Text && p.scale < MIN_TEXT_SCALE {
                continue;
            }
            let marks: Vec<&Mark> = p.marks.iter().filter(|m| layer_of(m) == layer).collect();
            if marks.is_empty() {
                continue;
            }
            let _ = writeln!(
                out,
                r#"<g transform="translate({} {}) scale({})">"#,
                coord(p.tx),
                coord(p.ty),
                scale_str(p.scale)
            );
            for m in marks {
                shape(out, m, p.scale);
            }
            out.push_str("</g>\n");
        }
    }
}

fn text(out: &mut String, x: f64, y: f64, size: f64, anchor: &str, extra: &str, body: &str) {
    let _ = writeln!(
        out,
        r##"<text x="{}" y="{}" font-size="{}" text-anchor="{anchor}" fill="#222222"{extra}>{}</text>"##,
        coord(x),
        coord(y),
        coord(size),
        esc(body)
    );
}

/// Centered unless that would spill past the column edge.
fn tick_anchor(x: f64, w: f64, x0: f64, x1: f64) -> (f64, &'static str) {
    if x - 0.5 * w < x0 {
        (x0.max(x - 0.5 * w), "start")
    } else if x + 0.5 * w > x1 {
        (x1.min(x + 0.5 * w), "end")
    } else {
        (x, "middle")
    }
}

/// Tick labels that fit side by side: every k-th tick for the smallest k
/// that leaves room between neighbors.
fn visible_ticks(positions: &[f64], labels: &[String], size: f64) -> Vec<usize> {
    let n = positions.len();
    for step in 1..=n.max(1) {
        let picks: Vec<usize> = (0..n).step_by(step).collect();
        let fits = picks.windows(2).all(|w| {
            let need = 0.5 * (text_width(&labels[w[0]], size) + text_width(&labels[w[1]], size));
            (positions[w[1]] - positions[w[0]]).abs() >= need + 2.0
        });
        if fits {
            return picks;
        }
    }
    (0..n.min(1)).collect()
}

/// Writes the figure. Layers follow a fixed order: backgrounds, reference
/// lines, maps, glyph marks, then text.
pub fn emit_svg(
    layout: &FigureLayout,
    report: &LayoutReport,
    geometry: &PanelGeometry,
    maps: &[PanelMap],
    columns: &[ColumnGlyphs],
    keys: &[RowKey],
    m: &GlyphMetrics,
) -> String {
    let f = layout.font_size;
    let palette = &report.palette;
    let mut out = String::with_capacity(64 * 1024);
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" xmlns:xlink="http://www.w3.org/1999/xlink" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="{FONT}">"#,
        w = coord(report.width),
        h = coord(report.height)
    );

    out.push_str("<defs>\n");
    for r in &geometry.regions {
        let _ = writeln!(out, r#"<path id="rg-{}" d="{}"/>"#, sanitize_id(&r.id), r.d);
    }
    if let Some(o) = &geometry.outline {
        let _ = writeln!(out, r#"<path id="atlas-outline" d="{o}"/>"#);
    }
    out.push_str("</defs>\n");

    out.push_str("<g id=\"backgrounds\">\n");
    let _ = writeln!(
        out,
        r##"<rect x="0" y="0" width="{}" height="{}" fill="#FFFFFF"/>"##,
        coord(report.width),
        coord(report.height)
    );
    for (c, cb) in columns.iter().zip(&layout.columns[2..]) {
        if !c.panels.is_empty() || c.y_axis.is_some() {
            continue;
        }
        for b in &layout.bands {
            let _ = writeln!(
                out,
                r#"<rect x="{}" y="{}" width="{}" height="{}" fill="{BAND_FILL}"/>"#,
                coord(cb.x0),
                coord(b.y0),
                coord(cb.width()),
                coord(b.height())
            );
            for &t in &c.axis.ticks {
                let x = c.axis.position(t);
                let _ = writeln!(
                    out,
                    r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="{GRID}" stroke-width="0.8"/>"#,
                    coord(b.y0),
                    coord(b.y1),
                    x = coord(x)
                );
            }
        }
    }
    panel_layer(&mut out, columns, Layer::Background);
    out.push_str("</g>\n");

    out.push_str("<g id=\"reference-lines\">\n");
    for c in columns {
        for r in &c.references {
            shape(&mut out, r, 1.0);
        }
    }
    panel_layer(&mut out, columns, Layer::Reference);
    out.push_str("</g>\n");

    out.push_str("<g id=\"maps\">\n");
    for (p, pr) in maps.iter().zip(&report.panels) {
        let s = pr.scale;
        let _ = writeln!(
            out,
            r#"<g transform="translate({} {}) scale({})">"#,
            coord(pr.x),
            coord(pr.y),
            scale_str(s)
        );
        let sw = coord(0.35 / s);
        for pass in 0..3 {
            for (r, st) in geometry.regions.iter().zip(&p.styles) {
                let fill = match (pass, st) {
                    (0, RegionStyle::Neutral) => &palette.neutral,
                    (1, RegionStyle::Prior) => &palette.prior,
                    (2, RegionStyle::Highlight(c)) => c,
                    _ => continue,
                };
                let _ = writeln!(
                    out,
                    r##"<use xlink:href="#rg-{}" fill="{}" stroke="{}" stroke-width="{sw}"/>"##,
                    sanitize_id(&r.id),
                    esc(fill),
                    esc(&palette.outline)
                );
            }
        }
        if geometry.outline.is_some() {
            let _ = writeln!(
                out,
                r##"<use xlink:href="#atlas-outline" fill="none" stroke="#404040" stroke-width="{}"/>"##,
                coord(0.6 / s)
            );
        }
        for (r, st) in geometry.regions.iter().zip(&p.styles) {
            if let (Some([cx, cy, rad]), RegionStyle::Highlight(c)) = (r.marker, st) {
                let _ = writeln!(
                    out,
                    r#"<circle cx="{}" cy="{}" r="{}" fill="{}" stroke="{}" stroke-width="{sw}"/>"#,
                    coord(cx),
                    coord(cy),
                    coord(rad),
                    esc(c),
                    esc(&palette.outline)
                );
            }
        }
        out.push_str("</g>\n");
    }
    out.push_str("</g>\n");

    out.push_str("<g id=\"marks\">\n");
    let lb = &layout.columns[1];
    for (key, &y) in keys.iter().zip(&layout.row_y) {
        let _ = writeln!(
            out,
            r#"<circle cx="{}" cy="{}" r="{}" fill="{}" stroke="{}" stroke-width="0.3"/>"#,
            coord(lb.x0 + 4.0),
            coord(y),
            coord(0.8 * m.dot_radius),
            esc(&key.color),
            m.ink
        );
    }
    for c in columns {
        for r in &c.rows {
            for mk in &r.marks {
                shape(&mut out, mk, 1.0);
            }
        }
    }
    panel_layer(&mut out, columns, Layer::Marks);
    out.push_str("</g>\n");

    out.push_str("<g id=\"text\">\n");
    let left = layout.columns[0].x0;
    if let Some(y) = layout.title_y {
        text(
            &mut out,
            left,
            y,
            1.4 * f,
            "start",
            r#" font-weight="bold""#,
            &report.title,
        );
    }
    if let Some(y) = layout.subtitle_y {
        text(&mut out, left, y, 1.05 * f, "start", "", &report.subtitle);
    }
    let tick = 0.85 * f;
    for cr in &report.columns {
        let w = cr.x1 - cr.x0;
        if !cr.title.is_empty() {
            let (t, _) = fit_text(&cr.title, f, w);
            let (x, anchor) = match cr.kind {
                ColumnKind::Labels => (cr.x0, "start"),
                _ => (0.5 * (cr.x0 + cr.x1), "middle"),
            };
            text(
                &mut out,
                x,
                layout.column_title_y,
                f,
                anchor,
                r#" font-weight="bold""#,
                &t,
            );
        }
        let Some(axis) = &cr.axis else { continue };
        let pos: Vec<f64> = axis.ticks.iter().map(|&t| axis.position(t)).collect();
        for i in visible_ticks(&pos, &axis.tick_labels, tick) {
            let label = &axis.tick_labels[i];
            let (x, anchor) = tick_anchor(pos[i], text_width(label, tick), cr.x0, cr.x1);
            for y in [layout.top_ticks_y, layout.bottom_ticks_y] {
                text(&mut out, x, y, tick, anchor, "", label);
            }
        }
    }
    for r in &report.rows {
        let extra = format!(r#" id="label-{}""#, sanitize_id(&r.id));
        text(
            &mut out,
            lb.x0 + 10.0,
            r.y + 0.35 * f,
            f,
            "start",
            &extra,
            &r.label,
        );
    }
    panel_layer(&mut out, columns, Layer::Text);
    for (i, note) in report.footnotes.iter().enumerate() {
        let y = layout.footnotes_y + i as f64 * 1.3 * f;
        text(&mut out, left, y, 0.9 * f, "start", "", note);
    }
    out.push_str("</g>\n</svg>\n");
    out
}
