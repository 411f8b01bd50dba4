//! Boundary loading and per-group map panels.

mod panels;
mod simplify;

pub use panels::{
    build_panel_maps, project_atlas, PanelGeometry, PanelMap, RegionPath, RegionStyle,
};
pub use simplify::{douglas_peucker, simplify_ring};

use std::sync::OnceLock;

use geojson::{feature::Id, GeoJson, Value};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Atlas, AtlasError, Point, Polygon, Region};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MapError {
    #[error(transparent)]
    Atlas(#[from] AtlasError),
    #[error("feature {index} ({id}) has unsupported geometry {kind}")]
    UnsupportedGeometry {
        index: usize,
        id: String,
        kind: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoordinateMode {
    /// Planar when the document says so or when coordinates fall outside
    /// longitude/latitude bounds.
    #[default]
    Auto,
    Planar,
    LonLat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtlasOptions {
    pub id_property: String,
    pub name_property: String,
    pub coordinates: CoordinateMode,
}

impl Default for AtlasOptions {
    fn default() -> Self {
        AtlasOptions {
            id_property: "id".into(),
            name_property: "name".into(),
            coordinates: CoordinateMode::Auto,
        }
    }
}

/// Parses a GeoJSON feature collection. Features whose `kind` property is
/// `outline` form the territory outline; every other feature is a region.
pub fn load_atlas(atlas_id: &str, text: &str, opts: &AtlasOptions) -> Result<Atlas, MapError> {
    let doc: GeoJson = text
        .parse()
        .map_err(|e: geojson::Error| AtlasError::Parse(e.to_string()))?;
    let GeoJson::FeatureCollection(fc) = doc else {
        return Err(AtlasError::Parse("expected a FeatureCollection".into()).into());
    };
    let member = |k: &str| {
        fc.foreign_members
            .as_ref()
            .and_then(|m| m.get(k))
            .and_then(|v| v.as_str())
            .map(str::to_string)
    };
    let declared_planar = member("coordinate_system").as_deref() == Some("planar");
    let crs_note = member("crs_note").unwrap_or_default();

    let mut raw: Vec<(String, String, Vec<Polygon>)> = Vec::new();
    let mut outline: Vec<Polygon> = Vec::new();
    for (index, f) in fc.features.iter().enumerate() {
        let prop = |k: &str| f.properties.as_ref().and_then(|p| p.get(k));
        let is_outline = prop("kind").and_then(|v| v.as_str()) == Some("outline");
        let id = match prop(&opts.id_property) {
            Some(serde_json::Value::String(s)) => Some(s.clone()),
            Some(serde_json::Value::Number(n)) => Some(n.to_string()),
            _ => match &f.id {
                Some(Id::String(s)) if opts.id_property == "id" => Some(s.clone()),
                Some(Id::Number(n)) if opts.id_property == "id" => Some(n.to_string()),
                _ => None,
            },
        };
        let id = match id {
            Some(id) if !id.trim().is_empty() => id.trim().to_string(),
            _ if is_outline => "outline".to_string(),
            _ => return Err(AtlasError::MissingId(index, opts.id_property.clone()).into()),
        };
        let name = prop(&opts.name_property)
            .and_then(|v| v.as_str())
            .map(str::to_string)
            .unwrap_or_else(|| id.clone());
        let Some(geom) = &f.geometry else {
            return Err(AtlasError::EmptyGeometry(id).into());
        };
        let polygons = match &geom.value {
            Value::Polygon(p) => vec![to_polygon(p)],
            Value::MultiPolygon(mp) => mp.iter().map(|p| to_polygon(p)).collect(),
            other => {
                return Err(MapError::UnsupportedGeometry {
                    index,
                    id,
                    kind: other.type_name().to_string(),
                })
            }
        };
        if is_outline {
            outline.extend(polygons);
        } else {
            raw.push((id, name, polygons));
        }
    }

    let lonlat = match opts.coordinates {
        CoordinateMode::Planar => false,
        CoordinateMode::LonLat => true,
        CoordinateMode::Auto => !declared_planar && looks_geographic(&raw, &outline),
    };
    if lonlat {
        let lat0 = mean_latitude(&raw);
        let k = lat0.to_radians().cos();
        let project = |ps: &mut Vec<Polygon>| {
            for p in ps.iter_mut() {
                for ring in p.rings.iter_mut() {
                    for pt in ring.iter_mut() {
                        *pt = [pt[0] * k, -pt[1]];
                    }
                }
            }
        };
        for (_, _, ps) in raw.iter_mut() {
            project(ps);
        }
        project(&mut outline);
    }

    let regions = raw
        .into_iter()
        .map(|(id, name, ps)| Region::new(id, name, ps))
        .collect::<Result<Vec<_>, _>>()?;
    let outline = (!outline.is_empty()).then_some(outline);
    Ok(Atlas::new(atlas_id, regions, outline, crs_note)?)
}

fn to_polygon(rings: &[Vec<Vec<f64>>]) -> Polygon {
    Polygon {
        rings: rings
            .iter()
            .map(|r| {
                r.iter()
                    .map(|p| {
                        [
                            p.first().copied().unwrap_or(f64::NAN),
                            p.get(1).copied().unwrap_or(f64::NAN),
                        ]
                    })
                    .collect()
            })
            .collect(),
    }
}

fn all_points<'a>(
    raw: &'a [(String, String, Vec<Polygon>)],
    outline: &'a [Polygon],
) -> impl Iterator<Item = &'a Point> {
    raw.iter()
        .flat_map(|(_, _, ps)| ps.iter())
        .chain(outline)
        .flat_map(|p| p.rings.iter().flatten())
}

fn looks_geographic(raw: &[(String, String, Vec<Polygon>)], outline: &[Polygon]) -> bool {
    all_points(raw, outline).all(|p| p[0].abs() <= 180.0 && p[1].abs() <= 90.0)
}

fn mean_latitude(raw: &[(String, String, Vec<Polygon>)]) -> f64 {
    let (sum, n) = all_points(raw, &[]).fold((0.0, 0usize), |(s, n), p| (s + p[1], n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

const US_STATES: &str = include_str!("../../assets/atlases/us-states-dc.geojson");
const NY_COUNTIES: &str = include_str!("../../assets/atlases/ny-counties.geojson");

/// Ids of the atlases compiled into the library.
pub const BUNDLED_ATLASES: [&str; 2] = ["ny-counties", "us-states-dc"];

pub fn bundled_atlas(id: &str) -> Option<&'static Atlas> {
    static US: OnceLock<Atlas> = OnceLock::new();
    static NY: OnceLock<Atlas> = OnceLock::new();
    let (cell, text) = match id {
        "us-states-dc" => (&US, US_STATES),
        "ny-counties" => (&NY, NY_COUNTIES),
        _ => return None,
    };
    Some(cell.get_or_init(|| {
        load_atlas(id, text, &AtlasOptions::default()).expect("bundled atlas is valid")
    }))
}
