use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{load_csv_dataset, AdapterConfig, IngestError};
use crate::maprender::{bundled_atlas, load_atlas, AtlasOptions, BUNDLED_ATLASES};
use crate::model::{Atlas, DataTable};

/// Environment variable naming the data root when no flag is given.
pub const DATA_ROOT_ENV: &str = "MICROMAP_DATA_ROOT";

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Provenance {
    pub url: String,
    pub vintage: String,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceSpec {
    /// Relative to the manifest's directory.
    pub path: String,
    pub adapter: AdapterConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub id: String,
    #[serde(default)]
    pub title: String,
    pub atlas: String,
    #[serde(default)]
    pub provenance: Provenance,
    pub sources: Vec<SourceSpec>,
}

impl DatasetManifest {
    pub fn read(path: &Path) -> Result<DatasetManifest, IngestError> {
        let err = |message: String| IngestError::Manifest {
            path: path.display().to_string(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| err(e.to_string()))?;
        let m: DatasetManifest = serde_json::from_str(&text).map_err(|e| err(e.to_string()))?;
        if m.id.trim().is_empty() {
            return Err(err("empty dataset id".into()));
        }
        if m.sources.is_empty() {
            return Err(err("no sources".into()));
        }
        let dir = path.parent().unwrap_or(Path::new("."));
        for s in &m.sources {
            s.adapter.check().map_err(|e| err(e.to_string()))?;
            if !dir.join(&s.path).is_file() {
                return Err(err(format!("source file {} not found", s.path)));
            }
        }
        Ok(m)
    }

    /// Loads every source from `dir` and joins them on the key column.
    pub fn load_table(&self, dir: &Path) -> Result<DataTable, IngestError> {
        let mut table: Option<DataTable> = None;
        for s in &self.sources {
            let t = load_csv_dataset(&dir.join(&s.path), &s.adapter)?;
            table = Some(match table {
                None => t,
                Some(acc) => acc.merge(t)?,
            });
        }
        table.ok_or_else(|| IngestError::Manifest {
            path: dir.display().to_string(),
            message: "no sources".into(),
        })
    }

    fn units(&self) -> HashMap<&str, &str> {
        self.sources
            .iter()
            .flat_map(|s| s.adapter.columns.iter())
            .map(|c| (c.name.as_str(), c.unit.as_str()))
            .collect()
    }
}

/// One manifest found under a datasets directory.
#[derive(Debug, Clone, PartialEq)]
pub struct RegistryEntry {
    pub id: String,
    pub dir: PathBuf,
    pub manifest: Result<DatasetManifest, String>,
}

/// Scans `datasets_dir/*/manifest.json`. Entries are ordered by id; broken
/// manifests are listed under their directory name with the error, and a
/// repeated id marks every later directory (in name order) as an error.
pub fn registry_list(datasets_dir: &Path) -> Vec<RegistryEntry> {
    let Ok(read) = std::fs::read_dir(datasets_dir) else {
        return Vec::new();
    };
    let mut dirs: Vec<PathBuf> = read
        .filter_map(Result::ok)
        .map(|e| e.path())
        .filter(|p| p.join("manifest.json").is_file())
        .collect();
    dirs.sort();
    let mut seen: BTreeMap<String, PathBuf> = BTreeMap::new();
    let mut out = Vec::with_capacity(dirs.len());
    for dir in dirs {
        let dir_name = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        let entry = match DatasetManifest::read(&dir.join("manifest.json")) {
            Ok(m) => match seen.get(&m.id) {
                Some(first) => RegistryEntry {
                    id: m.id.clone(),
                    manifest: Err(format!(
                        "duplicate dataset id {} (first defined in {})",
                        m.id,
                        first.display()
                    )),
                    dir,
                },
                None => {
                    seen.insert(m.id.clone(), dir.clone());
                    RegistryEntry {
                        id: m.id.clone(),
                        dir,
                        manifest: Ok(m),
                    }
                }
            },
            Err(e) => RegistryEntry {
                id: dir_name,
                dir,
                manifest: Err(e.to_string()),
            },
        };
        out.push(entry);
    }
    out.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| a.dir.cmp(&b.dir)));
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub name: String,
    #[serde(rename = "type")]
    pub kind: &'static str,
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TimeGroupSummary {
    pub name: String,
    pub labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSummary {
    pub id: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub title: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub atlas: String,
    pub rows: usize,
    pub columns: Vec<ColumnSummary>,
    pub time_groups: Vec<TimeGroupSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl DatasetSummary {
    fn failed(id: &str, error: String) -> DatasetSummary {
        DatasetSummary {
            id: id.to_string(),
            title: String::new(),
            atlas: String::new(),
            rows: 0,
            columns: Vec::new(),
            time_groups: Vec::new(),
            provenance: None,
            error: Some(error),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasSummary {
    pub id: String,
    pub regions: usize,
    pub source: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Directory holding `datasets/<id>/manifest.json` and `atlases/<id>.geojson`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataRoot {
    root: PathBuf,
}

impl DataRoot {
    pub fn new(root: impl Into<PathBuf>) -> DataRoot {
        DataRoot { root: root.into() }
    }

    /// An explicit path wins, then the environment variable, then `./data`.
    pub fn resolve(flag: Option<&Path>) -> DataRoot {
        if let Some(p) = flag {
            return DataRoot::new(p);
        }
        match std::env::var_os(DATA_ROOT_ENV) {
            Some(v) if !v.is_empty() => DataRoot::new(v),
            _ => DataRoot::new("data"),
        }
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    pub fn datasets_dir(&self) -> PathBuf {
        self.root.join("datasets")
    }

    pub fn atlases_dir(&self) -> PathBuf {
        self.root.join("atlases")
    }

    pub fn registry(&self) -> Vec<RegistryEntry> {
        registry_list(&self.datasets_dir())
    }

    pub fn dataset(&self, id: &str) -> Result<(DatasetManifest, DataTable), IngestError> {
        let entry = self
            .registry()
            .into_iter()
            .find(|e| e.id == id && e.manifest.is_ok())
            .ok_or_else(|| IngestError::UnknownDataset(id.to_string()))?;
        let manifest = entry.manifest.expect("filtered to ok entries");
        let table = manifest.load_table(&entry.dir)?;
        Ok((manifest, table))
    }

    pub fn dataset_summaries(&self) -> Vec<DatasetSummary> {
        self.registry()
            .into_iter()
            .map(|e| match e.manifest {
                Err(msg) => DatasetSummary::failed(&e.id, msg),
                Ok(m) => match m.load_table(&e.dir) {
                    Err(err) => DatasetSummary::failed(&e.id, err.to_string()),
                    Ok(t) => summarize(&m, &t),
                },
            })
            .collect()
    }

    /// Bundled atlases take precedence over files with the same id.
    pub fn atlas(&self, id: &str) -> Result<Cow<'static, Atlas>, IngestError> {
        if let Some(a) = bundled_atlas(id) {
            return Ok(Cow::Borrowed(a));
        }
        let valid = !id.is_empty()
            && id
                .chars()
                .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
            && !id.starts_with('.');
        let path = self.atlases_dir().join(format!("{id}.geojson"));
        if !valid || !path.is_file() {
            return Err(IngestError::UnknownAtlas(id.to_string()));
        }
        let text = std::fs::read_to_string(&path).map_err(|e| IngestError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        load_atlas(id, &text, &AtlasOptions::default())
            .map(Cow::Owned)
            .map_err(|source| IngestError::Atlas {
                id: id.to_string(),
                source,
            })
    }

    pub fn atlases(&self) -> Vec<AtlasSummary> {
        let mut out: BTreeMap<String, AtlasSummary> = BTreeMap::new();
        if let Ok(read) = std::fs::read_dir(self.atlases_dir()) {
            for e in read.filter_map(Result::ok) {
                let p = e.path();
                if p.extension().and_then(|x| x.to_str()) != Some("geojson") {
                    continue;
                }
                let Some(id) = p.file_stem().and_then(|s| s.to_str()) else {
                    continue;
                };
                let summary = match self.atlas(id) {
                    Ok(a) => AtlasSummary {
                        id: id.to_string(),
                        regions: a.len(),
                        source: "file",
                        error: None,
                    },
                    Err(err) => AtlasSummary {
                        id: id.to_string(),
                        regions: 0,
                        source: "file",
                        error: Some(err.to_string()),
                    },
                };
                out.insert(id.to_string(), summary);
            }
        }
        for id in BUNDLED_ATLASES {
            let a = bundled_atlas(id).expect("bundled atlas");
            out.insert(
                id.to_string(),
                AtlasSummary {
                    id: id.to_string(),
                    regions: a.len(),
                    source: "bundled",
                    error: None,
                },
            );
        }
        out.into_values().collect()
    }
}

fn summarize(m: &DatasetManifest, t: &DataTable) -> DatasetSummary {
    let units = m.units();
    let columns = t
        .scalar_columns()
        .into_iter()
        .map(|name| ColumnSummary {
            name: name.to_string(),
            kind: "number",
            unit: units.get(name).copied().unwrap_or("").to_string(),
        })
        .collect();
    let time_groups = t
        .time_groups()
        .map(|(name, entries)| TimeGroupSummary {
            name: name.to_string(),
            labels: entries.iter().map(|e| e.label.clone()).collect(),
        })
        .collect();
    DatasetSummary {
        id: m.id.clone(),
        title: m.title.clone(),
        atlas: m.atlas.clone(),
        rows: t.len(),
        columns,
        time_groups,
        provenance: Some(m.provenance.clone()),
        error: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_dataset(root: &Path, dir: &str, id: &str) {
        let d = root.join("datasets").join(dir);
        std::fs::create_dir_all(&d).unwrap();
        std::fs::write(d.join("t.csv"), "K,A\nR1,1\nR2,2\n").unwrap();
        let m = format!(
            r#"{{"id":"{id}","atlas":"strip","sources":[{{"path":"t.csv","adapter":{{"key_column":"K","columns":[{{"source":"A","name":"a","unit":"u"}}]}}}}]}}"#
        );
        std::fs::write(d.join("manifest.json"), m).unwrap();
    }

    #[test]
    fn empty_root_lists_nothing() {
        let tmp = tempfile::tempdir().unwrap();
        let root = DataRoot::new(tmp.path());
        assert!(root.registry().is_empty());
        let ids: Vec<String> = root.atlases().into_iter().map(|a| a.id).collect();
        assert_eq!(ids, vec!["ny-counties", "us-states-dc"]);
    }

    #[test]
    fn entries_sorted_and_duplicates_flagged() {
        let tmp = tempfile::tempdir().unwrap();
        write_dataset(tmp.path(), "b-dir", "zeta");
        write_dataset(tmp.path(), "a-dir", "alpha");
        write_dataset(tmp.path(), "c-dir", "alpha");
        let bad = tmp.path().join("datasets/broken");
        std::fs::create_dir_all(&bad).unwrap();
        std::fs::write(bad.join("manifest.json"), "{").unwrap();

        let list = registry_list(&tmp.path().join("datasets"));
        let ids: Vec<&str> = list.iter().map(|e| e.id.as_str()).collect();
        assert_eq!(ids, vec!["alpha", "alpha", "broken", "zeta"]);
        assert!(list[0].manifest.is_ok());
        assert!(list[1].manifest.as_ref().unwrap_err().contains("duplicate"));
        assert!(list[2].manifest.is_err());
        assert!(list[3].manifest.is_ok());

        let root = DataRoot::new(tmp.path());
        let (m, t) = root.dataset("zeta").unwrap();
        assert_eq!(m.atlas, "strip");
        assert_eq!(t.value("a", "R2"), Some(2.0));
        assert!(root.dataset("nope").unwrap_err().is_not_found());
        let s = root.dataset_summaries();
        assert_eq!(s.len(), 4);
        assert_eq!(s[3].columns[0].unit, "u");
        assert!(s[2].error.is_some());
    }

    #[test]
    fn user_atlas_appears() {
        let tmp = tempfile::tempdir().unwrap();
        let dir = tmp.path().join("atlases");
        std::fs::create_dir_all(&dir).unwrap();
        let sq = |id: &str, x: u32| {
            format!(
                r#"{{"type":"Feature","properties":{{"id":"{id}"}},"geometry":{{"type":"Polygon","coordinates":[[[{x},0],[{x1},0],[{x1},1],[{x},1],[{x},0]]]}}}}"#,
                x1 = x + 1
            )
        };
        let doc = format!(
            r#"{{"type":"FeatureCollection","coordinate_system":"planar","features":[{},{}]}}"#,
            sq("A", 0),
            sq("B", 2)
        );
        std::fs::write(dir.join("pair.geojson"), doc).unwrap();
        let root = DataRoot::new(tmp.path());
        assert_eq!(root.atlas("pair").unwrap().len(), 2);
        assert!(root.atlas("../pair").unwrap_err().is_not_found());
        let list = root.atlases();
        assert_eq!(list.len(), 3);
        assert_eq!(list[1].id, "pair");
        assert_eq!(list[1].source, "file");
    }
}
