//! CSV extracts, dataset manifests and the on-disk data root.

mod adapter;
mod registry;

pub use adapter::{
    load_csv_dataset, load_csv_str, parse_number, AdapterConfig, ColumnMapping, LongSpec,
    NotANumber, TimeSpec, WidePattern,
};
pub use registry::{
    registry_list, AtlasSummary, ColumnSummary, DataRoot, DatasetManifest, DatasetSummary,
    Provenance, RegistryEntry, SourceSpec, TimeGroupSummary, DATA_ROOT_ENV,
};

use std::path::Path;

use thiserror::Error;

use crate::maprender::MapError;
use crate::model::TableError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("csv: {0}")]
    Csv(String),
    #[error("missing column {0}")]
    MissingColumn(String),
    #[error("line {line}, column {column}: cannot parse {value:?} as a number")]
    BadCell {
        line: usize,
        column: String,
        value: String,
    },
    #[error("duplicate observation for {key} at {label}")]
    DuplicateObservation { key: String, label: String },
    #[error("invalid time pattern {pattern}: {message}")]
    BadPattern { pattern: String, message: String },
    #[error("invalid adapter: {0}")]
    InvalidAdapter(String),
    #[error(transparent)]
    Table(#[from] TableError),
    #[error("manifest {path}: {message}")]
    Manifest { path: String, message: String },
    #[error("unknown dataset {0}")]
    UnknownDataset(String),
    #[error("unknown atlas {0}")]
    UnknownAtlas(String),
    #[error("atlas {id}: {source}")]
    Atlas { id: String, source: MapError },
    #[error("{file}: {source}")]
    InFile {
        file: String,
        source: Box<IngestError>,
    },
}

impl IngestError {
    fn in_file(self, path: &Path) -> IngestError {
        match self {
            e @ IngestError::Io { .. } => e,
            e => IngestError::InFile {
                file: path.display().to_string(),
                source: Box::new(e),
            },
        }
    }

    /// True when the error means an id was not found rather than broken.
    pub fn is_not_found(&self) -> bool {
        matches!(
            self,
            IngestError::UnknownDataset(_) | IngestError::UnknownAtlas(_)
        )
    }
}
