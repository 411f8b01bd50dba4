//! Linked micromap engine: statistics kernel, perceptual grouping, glyph
//! construction, map panels, and deterministic SVG output.

pub mod fmt;
pub mod glyphs;
pub mod grouping;
pub mod ingest;
pub mod maprender;
pub mod model;
pub mod render;
pub mod stats;
