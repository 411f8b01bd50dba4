use std::collections::HashMap;
use std::fmt::Write;

use serde::Serialize;

use super::simplify::simplify_ring;
use crate::fmt::coord;
use crate::grouping::{ColorAssignment, PerceptualGrouping};
use crate::model::{Atlas, BBox, Point, Polygon, ShadingMode};

/// One region's outline in reference panel coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionPath {
    pub id: String,
    /// SVG path data.
    pub d: String,
    #[serde(skip)]
    pub bbox: BBox,
    /// Circle `(cx, cy, r)` drawn over regions too small to see.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub marker: Option<[f64; 3]>,
}

/// Atlas geometry fitted once into the reference panel box; every panel
/// reuses it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelGeometry {
    pub width: f64,
    pub height: f64,
    pub regions: Vec<RegionPath>,
    pub outline: Option<String>,
}

fn path_data(polygons: &[Polygon], f: &dyn Fn(Point) -> Point, tol: f64) -> (String, BBox) {
    let mut d = String::new();
    let mut bb = BBox::empty();
    for p in polygons {
        for ring in &p.rings {
            let pts: Vec<Point> = ring.iter().map(|&q| f(q)).collect();
            let pts = simplify_ring(&pts, tol);
            for (i, q) in pts[..pts.len() - 1].iter().enumerate() {
                bb.include(*q);
                let cmd = if i == 0 { 'M' } else { 'L' };
                let _ = write!(d, "{cmd}{} {}", coord(q[0]), coord(q[1]));
            }
            d.push('Z');
        }
    }
    (d, bb)
}

/// Fits the atlas into a `width` x `height` box keeping its aspect ratio,
/// simplifies rings to `tolerance` box units, and marks regions whose
/// projected extent is below `min_size`.
pub fn project_atlas(
    atlas: &Atlas,
    width: f64,
    height: f64,
    tolerance: f64,
    min_size: f64,
) -> PanelGeometry {
    let bb = atlas.bbox();
    let margin = 1.0;
    let s = ((width - 2.0 * margin) / bb.width()).min((height - 2.0 * margin) / bb.height());
    let tx = 0.5 * (width - bb.width() * s) - bb.min[0] * s;
    let ty = 0.5 * (height - bb.height() * s) - bb.min[1] * s;
    let f = move |p: Point| [p[0] * s + tx, p[1] * s + ty];

    let regions = atlas
        .regions()
        .iter()
        .map(|r| {
            let (d, pb) = path_data(r.polygons(), &f, tolerance);
            let marker = (pb.width().max(pb.height()) < min_size).then(|| {
                let c = pb.center();
                [c[0], c[1], 0.5 * min_size]
            });
            RegionPath {
                id: r.id().to_string(),
                d,
                bbox: pb,
                marker,
            }
        })
        .collect();
    let outline = atlas.outline().map(|o| path_data(o, &f, tolerance).0);
    PanelGeometry {
        width,
        height,
        regions,
        outline,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "style", content = "color", rename_all = "snake_case")]
pub enum RegionStyle {
    Highlight(String),
    Prior,
    Neutral,
}

/// Styling of every atlas region (in atlas order) for one group's panel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PanelMap {
    pub group: usize,
    pub styles: Vec<RegionStyle>,
}

impl PanelMap {
    pub fn highlighted(&self) -> usize {
        self.styles
            .iter()
            .filter(|s| matches!(s, RegionStyle::Highlight(_)))
            .count()
    }
}

/// One panel per group. Members are highlighted in their colors; in
/// cumulative mode regions of earlier groups get the prior shade. Atlas
/// regions outside the grouping stay neutral.
pub fn build_panel_maps(
    atlas: &Atlas,
    grouping: &PerceptualGrouping,
    colors: &ColorAssignment,
    shading: ShadingMode,
) -> Vec<PanelMap> {
    let group_of = grouping.group_of_position();
    let place: HashMap<&str, (usize, &str)> = grouping
        .order
        .iter()
        .enumerate()
        .map(|(pos, id)| {
            (
                id.as_str(),
                (group_of[pos], colors.regions[pos].fill.as_str()),
            )
        })
        .collect();
    (0..grouping.groups.len())
        .map(|g| PanelMap {
            group: g,
            styles: atlas
                .regions()
                .iter()
                .map(|r| match place.get(r.id()) {
                    Some(&(gi, color)) if gi == g => RegionStyle::Highlight(color.to_string()),
                    Some(&(gi, _)) if gi < g && shading == ShadingMode::Cumulative => {
                        RegionStyle::Prior
                    }
                    _ => RegionStyle::Neutral,
                })
                .collect(),
        })
        .collect()
}
