use std::collections::HashMap;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::model::{parse_time_label, time_column_name, DataTable, TimeEntry};

/// How one source file maps onto a [`DataTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdapterConfig {
    pub key_column: String,
    #[serde(default)]
    pub columns: Vec<ColumnMapping>,
    /// Cell values read as missing, compared after trimming.
    #[serde(default = "default_missing")]
    pub missing_markers: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<TimeSpec>,
}

fn default_missing() -> Vec<String> {
    vec![String::new()]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ColumnMapping {
    pub source: String,
    pub name: String,
    #[serde(default)]
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum TimeSpec {
    /// Time points spread over columns whose names match a pattern. The
    /// `label` capture group (or the first group) gives the period label.
    Wide(Vec<WidePattern>),
    /// One row per (key, period) pair, pivoted into a time group.
    Long(LongSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WidePattern {
    pub pattern: String,
    pub group: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LongSpec {
    pub time_column: String,
    pub value_column: String,
    pub group: String,
}

impl AdapterConfig {
    pub fn check(&self) -> Result<(), IngestError> {
        let bad = |m: &str| Err(IngestError::InvalidAdapter(m.to_string()));
        if self.key_column.trim().is_empty() {
            return bad("key column is not named");
        }
        if self.columns.is_empty() && self.time.is_none() {
            return bad("adapter maps no columns");
        }
        if matches!(self.time, Some(TimeSpec::Long(_))) && !self.columns.is_empty() {
            return bad("long-format sources carry only the pivoted value column");
        }
        if let Some(TimeSpec::Wide(p)) = &self.time {
            if p.is_empty() {
                return bad("wide time spec lists no patterns");
            }
        }
        let mut seen = HashMap::new();
        for c in &self.columns {
            if c.name.trim().is_empty() {
                return bad("column mapping with empty name");
            }
            if seen.insert(c.name.as_str(), ()).is_some() {
                return Err(IngestError::InvalidAdapter(format!(
                    "column name {} mapped twice",
                    c.name
                )));
            }
        }
        Ok(())
    }
}

/// A cell that is neither a number nor a missing-value code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NotANumber;

/// Parses a numeric cell. Thousands separators are dropped and the decimal
/// point is always `.`, whatever the process locale.
pub fn parse_number(cell: &str, missing: &[String]) -> Result<Option<f64>, NotANumber> {
    let t = cell.trim();
    if missing.iter().any(|m| m.trim() == t) {
        return Ok(None);
    }
    let cleaned: String = t.chars().filter(|&c| c != ',').collect();
    let plain = cleaned
        .bytes()
        .all(|b| b.is_ascii_digit() || matches!(b, b'.' | b'-' | b'+' | b'e' | b'E'));
    if cleaned.is_empty() || !plain {
        return Err(NotANumber);
    }
    match cleaned.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(NotANumber),
    }
}

pub fn load_csv_dataset(path: &Path, adapter: &AdapterConfig) -> Result<DataTable, IngestError> {
    let text = std::fs::read_to_string(path).map_err(|e| IngestError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    load_csv_str(&text, adapter).map_err(|e| e.in_file(path))
}

struct Sheet {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Sheet {
    fn parse(text: &str) -> Result<Sheet, IngestError> {
        let text = text.strip_prefix('\u{feff}').unwrap_or(text);
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(true)
            .flexible(false)
            .from_reader(text.as_bytes());
        let header = rdr
            .headers()
            .map_err(|e| IngestError::Csv(e.to_string()))?
            .iter()
            .map(|h| h.trim().to_string())
            .collect();
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| IngestError::Csv(e.to_string()))?;
            if rec.iter().all(|c| c.trim().is_empty()) {
                continue;
            }
            rows.push(rec.iter().map(str::to_string).collect());
        }
        Ok(Sheet { header, rows })
    }

    fn col(&self, name: &str) -> Result<usize, IngestError> {
        self.header
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| IngestError::MissingColumn(name.to_string()))
    }
}

fn numbers(sheet: &Sheet, col: usize, missing: &[String]) -> Result<Vec<Option<f64>>, IngestError> {
    sheet
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            parse_number(&r[col], missing).map_err(|NotANumber| IngestError::BadCell {
                // Line 1 is the header.
                line: i + 2,
                column: sheet.header[col].clone(),
                value: r[col].clone(),
            })
        })
        .collect()
}

/// Sorts entries by parsed period when every label parses; otherwise keeps
/// the given order.
fn order_labels(labels: &mut [String]) {
    if labels.iter().all(|l| parse_time_label(l).is_some()) {
        labels.sort_by_key(|l| parse_time_label(l));
    }
}

pub fn load_csv_str(text: &str, adapter: &AdapterConfig) -> Result<DataTable, IngestError> {
    adapter.check()?;
    let sheet = Sheet::parse(text)?;
    let key = sheet.col(&adapter.key_column)?;
    if let Some(TimeSpec::Long(spec)) = &adapter.time {
        return pivot_long(&sheet, key, spec, adapter);
    }

    let keys: Vec<&str> = sheet.rows.iter().map(|r| r[key].as_str()).collect();
    let mut table = DataTable::new(&adapter.key_column, &keys)?;
    for m in &adapter.columns {
        let c = sheet.col(&m.source)?;
        table.insert_column(&m.name, numbers(&sheet, c, &adapter.missing_markers)?)?;
    }
    if let Some(TimeSpec::Wide(patterns)) = &adapter.time {
        for p in patterns {
            let re = Regex::new(&p.pattern).map_err(|e| IngestError::BadPattern {
                pattern: p.pattern.clone(),
                message: e.to_string(),
            })?;
            let mut found: Vec<(String, usize)> = Vec::new();
            for (ci, h) in sheet.header.iter().enumerate() {
                if let Some(cap) = re.captures(h) {
                    let label = cap
                        .name("label")
                        .or_else(|| cap.get(1))
                        .or_else(|| cap.get(0))
                        .map(|m| m.as_str().to_string())
                        .unwrap_or_default();
                    found.push((label, ci));
                }
            }
            if found.is_empty() {
                return Err(IngestError::MissingColumn(p.pattern.clone()));
            }
            let mut labels: Vec<String> = found.iter().map(|(l, _)| l.clone()).collect();
            order_labels(&mut labels);
            let by_label: HashMap<&str, usize> =
                found.iter().map(|(l, c)| (l.as_str(), *c)).collect();
            let mut entries = Vec::with_capacity(labels.len());
            for l in &labels {
                let column = time_column_name(&p.group, l);
                let values = numbers(&sheet, by_label[l.as_str()], &adapter.missing_markers)?;
                table.insert_column(&column, values)?;
                entries.push(TimeEntry {
                    label: l.clone(),
                    column,
                });
            }
            table.insert_time_group(&p.group, entries)?;
        }
    }
    Ok(table)
}

fn pivot_long(
    sheet: &Sheet,
    key: usize,
    spec: &LongSpec,
    adapter: &AdapterConfig,
) -> Result<DataTable, IngestError> {
    let tcol = sheet.col(&spec.time_column)?;
    let vcol = sheet.col(&spec.value_column)?;
    let values = numbers(sheet, vcol, &adapter.missing_markers)?;

    let mut keys: Vec<String> = Vec::new();
    let mut key_index: HashMap<String, usize> = HashMap::new();
    let mut labels: Vec<String> = Vec::new();
    let mut cells: HashMap<(usize, String), Option<f64>> = HashMap::new();
    for (row, v) in sheet.rows.iter().zip(values) {
        let k = row[key].trim().to_string();
        let label = row[tcol].trim().to_string();
        let ki = *key_index.entry(k.clone()).or_insert_with(|| {
            keys.push(k.clone());
            keys.len() - 1
        });
        if !labels.contains(&label) {
            labels.push(label.clone());
        }
        if cells.insert((ki, label.clone()), v).is_some() {
            return Err(IngestError::DuplicateObservation { key: k, label });
        }
    }
    order_labels(&mut labels);
    let mut table = DataTable::new(&adapter.key_column, &keys)?;
    let mut entries = Vec::with_capacity(labels.len());
    for l in &labels {
        let column = time_column_name(&spec.group, l);
        let col = (0..keys.len())
            .map(|ki| cells.get(&(ki, l.clone())).copied().flatten())
            .collect();
        table.insert_column(&column, col)?;
        entries.push(TimeEntry {
            label: l.clone(),
            column,
        });
    }
    table.insert_time_group(&spec.group, entries)?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mapping(source: &str, name: &str) -> ColumnMapping {
        ColumnMapping {
            source: source.into(),
            name: name.into(),
            unit: String::new(),
        }
    }

    fn adapter(columns: Vec<ColumnMapping>) -> AdapterConfig {
        AdapterConfig {
            key_column: "ST".into(),
            columns,
            missing_markers: vec!["".into(), "(ND)".into()],
            time: None,
        }
    }

    #[test]
    fn numbers_ignore_locale_and_separators() {
        let m = vec![String::new(), "**".to_string()];
        assert_eq!(parse_number("182,811", &m), Ok(Some(182811.0)));
        assert_eq!(parse_number(" -3.5 ", &m), Ok(Some(-3.5)));
        assert_eq!(parse_number("**", &m), Ok(None));
        assert_eq!(parse_number("", &m), Ok(None));
        assert!(parse_number("3,5x", &m).is_err());
        assert!(parse_number("inf", &m).is_err());
        assert!(parse_number("NaN", &m).is_err());
    }

    #[test]
    fn columns_are_renamed() {
        let t = load_csv_str(
            "ST,A B,C\nAL,\"1,200\",(ND)\nAK,3,4\n",
            &adapter(vec![mapping("A B", "a"), mapping("C", "c")]),
        )
        .unwrap();
        assert_eq!(t.value("a", "AL"), Some(1200.0));
        assert_eq!(t.value("c", "AL"), None);
        assert_eq!(t.value("c", "AK"), Some(4.0));
    }

    #[test]
    fn bad_cell_names_line_and_column() {
        let err =
            load_csv_str("ST,A\nAL,1\nAK,abc\n", &adapter(vec![mapping("A", "a")])).unwrap_err();
        assert_eq!(
            err,
            IngestError::BadCell {
                line: 3,
                column: "A".into(),
                value: "abc".into()
            }
        );
    }

    #[test]
    fn missing_column_and_duplicate_key() {
        let a = adapter(vec![mapping("Z", "z")]);
        assert_eq!(
            load_csv_str("ST,A\nAL,1\n", &a),
            Err(IngestError::MissingColumn("Z".into()))
        );
        let b = adapter(vec![mapping("A", "a")]);
        assert!(matches!(
            load_csv_str("ST,A\nAL,1\nAL,2\n", &b),
            Err(IngestError::Table(_))
        ));
    }

    #[test]
    fn wide_columns_become_a_time_group() {
        let mut a = adapter(vec![]);
        a.time = Some(TimeSpec::Wide(vec![WidePattern {
            pattern: r"^e_(?P<label>\d{4}q\d)$".into(),
            group: "emp".into(),
        }]));
        let t = load_csv_str("ST,e_2020q2,e_2020q1\nAL,2,1\n", &a).unwrap();
        let g = t.time_group("emp").unwrap();
        assert_eq!(g[0].label, "2020q1");
        assert_eq!(t.value(&g[1].column, "AL"), Some(2.0));
    }

    #[test]
    fn long_rows_are_pivoted() {
        let mut a = adapter(vec![]);
        a.time = Some(TimeSpec::Long(LongSpec {
            time_column: "Q".into(),
            value_column: "V".into(),
            group: "w".into(),
        }));
        let mut csv = String::from("ST,Q,V\n");
        for st in ["AL", "AK"] {
            for y in 2020..=2025 {
                for q in 1..=4 {
                    if y == 2025 && q > 1 {
                        continue;
                    }
                    csv.push_str(&format!("{st},Q{q} {y},{}\n", y * 10 + q));
                }
            }
        }
        let t = load_csv_str(&csv, &a).unwrap();
        let g = t.time_group("w").unwrap();
        assert_eq!(g.len(), 21);
        assert_eq!(g[0].label, "Q1 2020");
        assert_eq!(g[20].label, "Q1 2025");
        assert_eq!(t.value(&g[20].column, "AK"), Some(20251.0));
        csv.push_str("AL,Q1 2020,5\n");
        assert!(matches!(
            load_csv_str(&csv, &a),
            Err(IngestError::DuplicateObservation { .. })
        ));
    }

    #[test]
    fn adapter_invariants() {
        assert!(adapter(vec![]).check().is_err());
        let mut a = adapter(vec![mapping("A", "a")]);
        a.key_column = " ".into();
        assert!(a.check().is_err());
        let json = r#"{"key_column":"k","columns":[{"source":"A","name":"a"}],"time":{"wide":[],"long":{"time_column":"t","value_column":"v","group":"g"}}}"#;
        assert!(serde_json::from_str::<AdapterConfig>(json).is_err());
    }
}
