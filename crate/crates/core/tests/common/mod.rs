#![allow(dead_code)]

use std::path::PathBuf;

use micromap_core::ingest::DataRoot;
use micromap_core::model::PlotSpec;
use micromap_core::render::{render_spec, RenderedFigure};
use serde::Deserialize;

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data")
}

pub fn root() -> DataRoot {
    DataRoot::new(data_dir())
}

#[derive(Debug, Clone, Deserialize)]
pub struct Recipe {
    pub id: String,
    pub spec: String,
    pub dataset: String,
    pub atlas: String,
}

pub fn recipes() -> Vec<Recipe> {
    let text = std::fs::read_to_string(data_dir().join("figures/index.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

pub fn recipe(id: &str) -> Recipe {
    recipes().into_iter().find(|r| r.id == id).unwrap()
}

pub fn load_spec(r: &Recipe) -> PlotSpec {
    let text = std::fs::read_to_string(data_dir().join("figures").join(&r.spec)).unwrap();
    PlotSpec::from_json(&text).unwrap()
}

pub fn render(r: &Recipe) -> RenderedFigure {
    let root = root();
    let (_, table) = root.dataset(&r.dataset).unwrap();
    let atlas = root.atlas(&r.atlas).unwrap();
    render_spec(&load_spec(r), &table, &atlas).unwrap_or_else(|e| panic!("{}: {e}", r.id))
}
