mod common;

use std::collections::{BTreeSet, HashMap};
use std::path::PathBuf;

use micromap_core::glyphs::{Mark, Shape};
use micromap_core::grouping::build_groups;
use micromap_core::model::GlyphKind;
use micromap_core::render::{clipping_violations, sanitize_id, ColumnReport, RenderedFigure};

const KNOWN_ELEMENTS: &[&str] = &[
    "svg", "defs", "g", "path", "use", "rect", "line", "circle", "polyline", "polygon", "text",
];

fn all() -> Vec<(common::Recipe, RenderedFigure)> {
    common::recipes()
        .into_iter()
        .map(|r| {
            let f = common::render(&r);
            (r, f)
        })
        .collect()
}

fn x_of(m: &Mark) -> f64 {
    match &m.shape {
        Shape::Circle { cx, .. } => *cx,
        Shape::Line { x1, .. } => *x1,
        other => panic!("unexpected shape {other:?}"),
    }
}

#[test]
fn every_recipe_has_one_map_panel_per_group() {
    for (r, f) in all() {
        let n = f.report.rows.len();
        let sizes = build_groups(n).unwrap();
        assert_eq!(f.report.panels.len(), sizes.len(), "{}", r.id);
        assert_eq!(f.report.groups.len(), sizes.len(), "{}", r.id);
        let got: Vec<usize> = f.report.groups.iter().map(|g| g.ids.len()).collect();
        assert_eq!(got, sizes, "{}", r.id);
        let expected_rows = if r.atlas.starts_with("us-states") {
            51
        } else {
            62
        };
        assert_eq!(n + f.report.dropped.len(), expected_rows, "{}", r.id);
    }
}

#[test]
fn state_figures_have_eleven_panels_and_county_figures_fourteen() {
    for (r, f) in all() {
        match r.atlas.as_str() {
            "us-states-dc" => assert_eq!(f.report.panels.len(), 11, "{}", r.id),
            "ny-counties" => assert_eq!(f.report.panels.len(), 14, "{}", r.id),
            other => panic!("unexpected atlas {other}"),
        }
    }
}

#[test]
fn each_region_is_highlighted_exactly_once() {
    for (r, f) in all() {
        let mut seen: HashMap<&str, usize> = HashMap::new();
        for (p, g) in f.report.panels.iter().zip(&f.report.groups) {
            let hl: BTreeSet<&str> = p.highlighted.iter().map(String::as_str).collect();
            let ids: BTreeSet<&str> = g.ids.iter().map(String::as_str).collect();
            assert_eq!(hl, ids, "{} group {}", r.id, g.index);
            for id in &p.highlighted {
                *seen.entry(id).or_default() += 1;
            }
        }
        assert_eq!(seen.len(), f.report.rows.len(), "{}", r.id);
        assert!(seen.values().all(|&c| c == 1), "{}", r.id);
    }
}

#[test]
fn rows_follow_the_sort_order() {
    for (r, f) in all() {
        let values: Vec<f64> = f.report.rows.iter().map(|row| row.sort_value).collect();
        let desc = values.windows(2).all(|w| w[0] >= w[1]);
        let asc = values.windows(2).all(|w| w[0] <= w[1]);
        assert!(desc || asc, "{} is not sorted", r.id);
        let ys: Vec<f64> = f.report.rows.iter().map(|row| row.y).collect();
        assert!(ys.windows(2).all(|w| w[0] < w[1]), "{}", r.id);
    }
}

#[test]
fn scatter_panels_show_all_points_and_fill_the_group() {
    for (r, f) in all() {
        for c in f.report.data_columns() {
            if c.glyph != Some(GlyphKind::Scatter) {
                continue;
            }
            let total = c.panels[0]
                .marks
                .iter()
                .filter(|m| m.tag.starts_with("point-"))
                .count();
            for (p, g) in c.panels.iter().zip(&f.report.groups) {
                let filled: Vec<&str> = p
                    .marks
                    .iter()
                    .filter(|m| m.tag == "point-filled")
                    .filter_map(|m| m.region.as_deref())
                    .collect();
                let open = p.marks.iter().filter(|m| m.tag == "point-open").count();
                let members: BTreeSet<&str> = g.ids.iter().map(String::as_str).collect();
                assert!(filled.iter().all(|id| members.contains(id)), "{}", r.id);
                assert_eq!(
                    filled.len()
                        + c.missing
                            .iter()
                            .filter(|m| members.contains(m.as_str()))
                            .count(),
                    g.ids.len(),
                    "{} group {}",
                    r.id,
                    g.index
                );
                assert_eq!(filled.len() + open, total, "{} group {}", r.id, g.index);
            }
        }
    }
}

#[test]
fn nothing_escapes_its_column() {
    for (r, f) in all() {
        let v = clipping_violations(&f.report);
        assert!(v.is_empty(), "{}: {v:?}", r.id);
    }
}

#[test]
fn svg_is_well_formed_and_uses_known_elements() {
    for (r, f) in all() {
        let doc = roxmltree::Document::parse(&f.svg).unwrap_or_else(|e| panic!("{}: {e}", r.id));
        for node in doc.descendants().filter(|n| n.is_element()) {
            let name = node.tag_name().name();
            assert!(KNOWN_ELEMENTS.contains(&name), "{}: <{name}>", r.id);
        }
        let layers: Vec<&str> = doc
            .root_element()
            .children()
            .filter(|n| n.is_element())
            .map(|n| n.attribute("id").unwrap_or(n.tag_name().name()))
            .collect();
        assert_eq!(
            layers,
            [
                "defs",
                "backgrounds",
                "reference-lines",
                "maps",
                "marks",
                "text"
            ],
            "{}",
            r.id
        );
    }
}

#[test]
fn labels_appear_once_in_display_order() {
    for (r, f) in all() {
        let doc = roxmltree::Document::parse(&f.svg).unwrap();
        let labels: Vec<String> = doc
            .descendants()
            .filter_map(|n| n.attribute("id"))
            .filter_map(|id| id.strip_prefix("label-"))
            .map(str::to_string)
            .collect();
        let expected: Vec<String> = f
            .report
            .rows
            .iter()
            .map(|row| sanitize_id(&row.id))
            .collect();
        assert_eq!(labels, expected, "{}", r.id);
    }
}

#[test]
fn rendering_is_deterministic() {
    let r = common::recipe("fig2_2");
    assert_eq!(common::render(&r).svg, common::render(&r).svg);
}

fn column(f: &RenderedFigure, glyph: GlyphKind) -> &ColumnReport {
    f.report
        .data_columns()
        .find(|c| c.glyph == Some(glyph))
        .unwrap()
}

#[test]
fn software_developer_fixture_rows() {
    let f = common::render(&common::recipe("fig3_4"));

    let boxes = column(&f, GlyphKind::Boxplot);
    let axis = boxes.axis.as_ref().unwrap();
    let al = boxes.row("AL").unwrap();
    let mut xs: Vec<f64> = Vec::new();
    for m in &al.marks {
        match (&m.tag[..], &m.shape) {
            ("whisker", Shape::Line { x1, x2, .. }) => xs.extend([*x1, *x2]),
            ("box", Shape::Rect { x, w, .. }) => xs.extend([*x, x + w]),
            ("median", Shape::Line { x1, .. }) => xs.push(*x1),
            _ => {}
        }
    }
    let mut values: Vec<f64> = xs.iter().map(|&x| axis.value_at(x)).collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| (*a - *b).abs() < 1e-6);
    let table = [29.58, 37.73, 49.39, 64.57, 81.29];
    assert_eq!(values.len(), 5, "{values:?}");
    for (v, t) in values.iter().zip(table) {
        assert!((v - t).abs() < 1e-6, "{v} vs {t}");
    }

    let ci = column(&f, GlyphKind::DotCi);
    let axis = ci.axis.as_ref().unwrap();
    let ca = ci.row("CA").unwrap();
    let bar = ca.marks.iter().find(|m| m.tag == "ci").unwrap();
    let Shape::Line { x1, x2, .. } = bar.shape else {
        panic!("ci is a line")
    };
    let (lo, hi) = (axis.value_at(x1.min(x2)), axis.value_at(x1.max(x2)));
    // 83.55 +/- 1.6449 * 0.008 * 83.55
    assert!((lo - 82.45).abs() < 0.01, "{lo}");
    assert!((hi - 84.65).abs() < 0.01, "{hi}");
    let dot = ca.marks.iter().find(|m| m.tag == "dot").unwrap();
    assert!((axis.value_at(x_of(dot)) - 83.55).abs() < 1e-9);

    let refs: Vec<f64> = ci.references.iter().map(|r| r.value).collect();
    assert_eq!(refs, vec![66.0]);
    let x = ci.references[0].x.unwrap();
    assert!((x - axis.position(66.0)).abs() < 1e-9);
}

#[test]
fn county_figure_reports_missing_wage() {
    let f = common::render(&common::recipe("fig2_3"));
    let cols: Vec<&ColumnReport> = f.report.data_columns().collect();
    assert!(cols[0].missing.is_empty());
    assert!(cols[1]
        .missing
        .iter()
        .any(|id| f.report.row(id).unwrap().name == "Schuyler"));
    assert!(f.report.footnotes.iter().any(|n| n.contains("no data for")));
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn golden_svgs() {
    let update = std::env::var_os("UPDATE_GOLDEN").is_some();
    for id in ["fig2_2", "fig2_3", "fig3_4"] {
        let svg = common::render(&common::recipe(id)).svg;
        let path = golden_dir().join(format!("{id}.svg"));
        if update {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&path, &svg).unwrap();
            continue;
        }
        let expected = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{}: {e}; run with UPDATE_GOLDEN=1", path.display()))
            .replace("\r\n", "\n");
        assert!(svg == expected, "{id} differs from {}", path.display());
    }
}
