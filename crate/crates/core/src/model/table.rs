//! Region-keyed numeric tables.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TableError {
    #[error("duplicate row key {0}")]
    DuplicateKey(String),
    #[error("empty row key at row {0}")]
    EmptyKey(usize),
    #[error("duplicate column {0}")]
    DuplicateColumn(String),
    #[error("column {name} has {got} values, table has {expected} rows")]
    LengthMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
    #[error("time group {group} references unknown column {column}")]
    UnknownTimeColumn { group: String, column: String },
    #[error("time group {group}: labels not strictly ordered at {label}")]
    UnorderedTimeLabels { group: String, label: String },
    #[error("time group {0} is empty")]
    EmptyTimeGroup(String),
}

/// One point of a time-indexed column group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeEntry {
    pub label: String,
    pub column: String,
}

/// Numeric table with one row per region key. Missing cells are `None`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DataTable {
    key_column: String,
    keys: Vec<String>,
    columns: BTreeMap<String, Vec<Option<f64>>>,
    time_groups: BTreeMap<String, Vec<TimeEntry>>,
    #[serde(skip)]
    index: HashMap<String, usize>,
}

impl DataTable {
    /// Keys are trimmed; duplicates after trimming are rejected.
    pub fn new<I, S>(key_column: impl Into<String>, keys: I) -> Result<Self, TableError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut index = HashMap::new();
        let mut out = Vec::new();
        for (i, k) in keys.into_iter().enumerate() {
            let k = k.as_ref().trim().to_string();
            if k.is_empty() {
                return Err(TableError::EmptyKey(i));
            }
            if index.insert(k.clone(), i).is_some() {
                return Err(TableError::DuplicateKey(k));
            }
            out.push(k);
        }
        Ok(Self {
            key_column: key_column.into(),
            keys: out,
            columns: BTreeMap::new(),
            time_groups: BTreeMap::new(),
            index,
        })
    }

    pub fn insert_column(
        &mut self,
        name: impl Into<String>,
        values: Vec<Option<f64>>,
    ) -> Result<(), TableError> {
        let name = name.into();
        if values.len() != self.keys.len() {
            return Err(TableError::LengthMismatch {
                name,
                expected: self.keys.len(),
                got: values.len(),
            });
        }
        if self.columns.contains_key(&name) {
            return Err(TableError::DuplicateColumn(name));
        }
        // Non-finite cells are treated as missing.
        let values = values
            .into_iter()
            .map(|v| v.filter(|x| x.is_finite()))
            .collect();
        self.columns.insert(name, values);
        Ok(())
    }

    pub fn insert_time_group(
        &mut self,
        name: impl Into<String>,
        entries: Vec<TimeEntry>,
    ) -> Result<(), TableError> {
        let name = name.into();
        if entries.is_empty() {
            return Err(TableError::EmptyTimeGroup(name));
        }
        for e in &entries {
            if !self.columns.contains_key(&e.column) {
                return Err(TableError::UnknownTimeColumn {
                    group: name,
                    column: e.column.clone(),
                });
            }
        }
        check_time_order(&name, &entries)?;
        self.time_groups.insert(name, entries);
        Ok(())
    }

    pub fn key_column(&self) -> &str {
        &self.key_column
    }

    pub fn keys(&self) -> &[String] {
        &self.keys
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn row_index(&self, key: &str) -> Option<usize> {
        self.index.get(key.trim()).copied()
    }

    pub fn column(&self, name: &str) -> Option<&[Option<f64>]> {
        self.columns.get(name).map(Vec::as_slice)
    }

    pub fn has_column(&self, name: &str) -> bool {
        self.columns.contains_key(name)
    }

    pub fn columns(&self) -> impl Iterator<Item = (&str, &[Option<f64>])> {
        self.columns.iter().map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    pub fn time_group(&self, name: &str) -> Option<&[TimeEntry]> {
        self.time_groups.get(name).map(Vec::as_slice)
    }

    pub fn time_groups(&self) -> impl Iterator<Item = (&str, &[TimeEntry])> {
        self.time_groups
            .iter()
            .map(|(k, v)| (k.as_str(), v.as_slice()))
    }

    /// Column names that are not members of any time group.
    pub fn scalar_columns(&self) -> Vec<&str> {
        let in_groups: std::collections::BTreeSet<&str> = self
            .time_groups
            .values()
            .flatten()
            .map(|e| e.column.as_str())
            .collect();
        self.columns
            .keys()
            .map(String::as_str)
            .filter(|c| !in_groups.contains(c))
            .collect()
    }

    pub fn value(&self, column: &str, key: &str) -> Option<f64> {
        let row = self.row_index(key)?;
        self.columns.get(column)?[row]
    }

    /// Outer join on row keys. Rows keep first-seen order; cells absent from
    /// one side become missing. Column and time group names must not collide.
    pub fn merge(self, other: DataTable) -> Result<DataTable, TableError> {
        let mut keys = self.keys.clone();
        for k in &other.keys {
            if !self.index.contains_key(k) {
                keys.push(k.clone());
            }
        }
        let mut merged = DataTable::new(self.key_column.clone(), &keys)?;
        for side in [&self, &other] {
            for (name, values) in &side.columns {
                let col = keys
                    .iter()
                    .map(|k| side.row_index(k).and_then(|i| values[i]))
                    .collect();
                merged.insert_column(name.clone(), col)?;
            }
        }
        for side in [self, other] {
            for (name, entries) in side.time_groups {
                if merged.time_groups.contains_key(&name) {
                    return Err(TableError::DuplicateColumn(name));
                }
                merged.insert_time_group(name, entries)?;
            }
        }
        Ok(merged)
    }

    /// Canonical wide CSV: key column first, then scalar columns, then time
    /// group members named `group[label]`, all in name order.
    pub fn to_canonical_csv(&self) -> String {
        let mut header = vec![self.key_column.clone()];
        let mut sources: Vec<&[Option<f64>]> = Vec::new();
        for name in self.scalar_columns() {
            header.push(name.to_string());
            sources.push(&self.columns[name]);
        }
        for (group, entries) in &self.time_groups {
            for e in entries {
                header.push(format!("{group}[{}]", e.label));
                sources.push(&self.columns[&e.column]);
            }
        }
        let mut wtr = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        wtr.write_record(&header).expect("in-memory write");
        for (i, key) in self.keys.iter().enumerate() {
            let mut rec = vec![key.clone()];
            for col in &sources {
                rec.push(col[i].map(|v| v.to_string()).unwrap_or_default());
            }
            wtr.write_record(&rec).expect("in-memory write");
        }
        String::from_utf8(wtr.into_inner().expect("in-memory flush")).expect("utf8 csv")
    }
}

/// Canonical column name for a time group member.
pub fn time_column_name(group: &str, label: &str) -> String {
    format!("{group}[{label}]")
}

/// Sortable key for common period labels: `2020`, `2020q1`, `2020 Q1`,
/// `Q1 2020`, `2020-03`. Returns `(year, sub-period)`.
pub fn parse_time_label(label: &str) -> Option<(i32, u32)> {
    let s = label.trim().to_ascii_lowercase();
    let year = |t: &str| -> Option<i32> {
        if t.len() == 4 && t.bytes().all(|b| b.is_ascii_digit()) {
            t.parse().ok()
        } else {
            None
        }
    };
    let quarter = |t: &str| -> Option<u32> {
        let q: u32 = t.strip_prefix('q')?.parse().ok()?;
        (1..=4).contains(&q).then_some(q)
    };
    if let Some(y) = year(&s) {
        return Some((y, 0));
    }
    let parts: Vec<&str> = s.split([' ', '-', '_']).filter(|p| !p.is_empty()).collect();
    match parts.as_slice() {
        [a] if a.len() == 6 => {
            let (y, q) = a.split_at(4);
            Some((year(y)?, quarter(q)?))
        }
        [a, b] => {
            if let (Some(y), Some(q)) = (year(a), quarter(b)) {
                return Some((y, q));
            }
            if let (Some(q), Some(y)) = (quarter(a), year(b)) {
                return Some((y, q));
            }
            let m: u32 = b.parse().ok()?;
            (1..=12).contains(&m).then_some(())?;
            Some((year(a)?, m))
        }
        _ => None,
    }
}

fn check_time_order(group: &str, entries: &[TimeEntry]) -> Result<(), TableError> {
    let parsed: Option<Vec<(i32, u32)>> =
        entries.iter().map(|e| parse_time_label(&e.label)).collect();
    match parsed {
        Some(keys) => {
            for (i, w) in keys.windows(2).enumerate() {
                if w[0] >= w[1] {
                    return Err(TableError::UnorderedTimeLabels {
                        group: group.to_string(),
                        label: entries[i + 1].label.clone(),
                    });
                }
            }
        }
        None => {
            let mut seen = std::collections::HashSet::new();
            for e in entries {
                if !seen.insert(e.label.as_str()) {
                    return Err(TableError::UnorderedTimeLabels {
                        group: group.to_string(),
                        label: e.label.clone(),
                    });
                }
            }
        }
    }
    Ok(())
}
