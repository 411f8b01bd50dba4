//! Region geometry containers.

use std::collections::HashMap;

use thiserror::Error;

/// Planar coordinate pair in layout units. The y axis grows downward, matching
/// SVG user space.
pub type Point = [f64; 2];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AtlasError {
    #[error("malformed boundary document: {0}")]
    Parse(String),
    #[error("feature {0} has no id property {1:?}")]
    MissingId(usize, String),
    #[error("duplicate region id {0}")]
    DuplicateId(String),
    #[error("region {0} has an unclosed ring")]
    UnclosedRing(String),
    #[error("region {0} has a ring with fewer than 3 vertices")]
    DegenerateRing(String),
    #[error("region {0} has non-finite coordinates")]
    NonFinite(String),
    #[error("region {0} has no polygon geometry")]
    EmptyGeometry(String),
    #[error("atlas needs at least 2 regions, found {0}")]
    TooFewRegions(usize),
}

/// A polygon: exterior ring first, then holes. Rings are stored closed
/// (first vertex repeated at the end).
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    pub rings: Vec<Vec<Point>>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BBox {
    pub min: Point,
    pub max: Point,
}

impl BBox {
    pub fn empty() -> Self {
        BBox {
            min: [f64::INFINITY, f64::INFINITY],
            max: [f64::NEG_INFINITY, f64::NEG_INFINITY],
        }
    }

    pub fn include(&mut self, p: Point) {
        self.min[0] = self.min[0].min(p[0]);
        self.min[1] = self.min[1].min(p[1]);
        self.max[0] = self.max[0].max(p[0]);
        self.max[1] = self.max[1].max(p[1]);
    }

    pub fn union(mut self, other: BBox) -> BBox {
        self.include(other.min);
        self.include(other.max);
        self
    }

    pub fn width(&self) -> f64 {
        self.max[0] - self.min[0]
    }

    pub fn height(&self) -> f64 {
        self.max[1] - self.min[1]
    }

    pub fn center(&self) -> Point {
        [
            0.5 * (self.min[0] + self.max[0]),
            0.5 * (self.min[1] + self.max[1]),
        ]
    }

    pub fn is_finite(&self) -> bool {
        self.min
            .iter()
            .chain(self.max.iter())
            .all(|v| v.is_finite())
    }
}

fn polygons_bbox(polygons: &[Polygon]) -> BBox {
    let mut bb = BBox::empty();
    for p in polygons {
        for ring in &p.rings {
            for &pt in ring {
                bb.include(pt);
            }
        }
    }
    bb
}

fn check_polygons(id: &str, polygons: &[Polygon]) -> Result<(), AtlasError> {
    if polygons.is_empty() || polygons.iter().any(|p| p.rings.is_empty()) {
        return Err(AtlasError::EmptyGeometry(id.to_string()));
    }
    for ring in polygons.iter().flat_map(|p| &p.rings) {
        if ring.iter().flatten().any(|v| !v.is_finite()) {
            return Err(AtlasError::NonFinite(id.to_string()));
        }
        // closed ring: 3 distinct vertices plus the repeated first one
        if ring.len() < 4 {
            return Err(AtlasError::DegenerateRing(id.to_string()));
        }
        if ring.first() != ring.last() {
            return Err(AtlasError::UnclosedRing(id.to_string()));
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    id: String,
    name: String,
    polygons: Vec<Polygon>,
    bbox: BBox,
}

impl Region {
    pub fn new(
        id: impl Into<String>,
        name: impl Into<String>,
        polygons: Vec<Polygon>,
    ) -> Result<Self, AtlasError> {
        let id = id.into().trim().to_string();
        check_polygons(&id, &polygons)?;
        let bbox = polygons_bbox(&polygons);
        Ok(Region {
            id,
            name: name.into(),
            polygons,
            bbox,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn polygons(&self) -> &[Polygon] {
        &self.polygons
    }

    pub fn bbox(&self) -> BBox {
        self.bbox
    }
}

/// Named set of regions plus an optional outline of the whole territory.
#[derive(Debug, Clone, PartialEq)]
pub struct Atlas {
    id: String,
    regions: Vec<Region>,
    outline: Option<Vec<Polygon>>,
    crs_note: String,
    index: HashMap<String, usize>,
}

impl Atlas {
    pub fn new(
        id: impl Into<String>,
        regions: Vec<Region>,
        outline: Option<Vec<Polygon>>,
        crs_note: impl Into<String>,
    ) -> Result<Self, AtlasError> {
        if regions.len() < 2 {
            return Err(AtlasError::TooFewRegions(regions.len()));
        }
        let mut index = HashMap::with_capacity(regions.len());
        for (i, r) in regions.iter().enumerate() {
            if index.insert(r.id.clone(), i).is_some() {
                return Err(AtlasError::DuplicateId(r.id.clone()));
            }
        }
        if let Some(outline) = &outline {
            check_polygons("outline", outline)?;
        }
        Ok(Atlas {
            id: id.into(),
            regions,
            outline,
            crs_note: crs_note.into(),
            index,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn regions(&self) -> &[Region] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn region(&self, id: &str) -> Option<&Region> {
        self.index.get(id.trim()).map(|&i| &self.regions[i])
    }

    pub fn region_index(&self, id: &str) -> Option<usize> {
        self.index.get(id.trim()).copied()
    }

    pub fn outline(&self) -> Option<&[Polygon]> {
        self.outline.as_deref()
    }

    pub fn crs_note(&self) -> &str {
        &self.crs_note
    }

    pub fn bbox(&self) -> BBox {
        let mut bb = self
            .regions
            .iter()
            .fold(BBox::empty(), |acc, r| acc.union(r.bbox));
        if let Some(o) = &self.outline {
            bb = bb.union(polygons_bbox(o));
        }
        bb
    }
}
