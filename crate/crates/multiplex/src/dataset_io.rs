//! CSV datasets, prepared outputs, label-set files and prediction traces.

use std::collections::{BTreeMap, BTreeSet};

use multiplex_core::dataset::{DatasetRow, PreparedDataset};
use multiplex_core::ensemble::PredictionTrace;

pub const DEFAULT_LABEL_COLUMN: &str = "label_list";
pub const ID_COLUMN: &str = "instance_id";
pub const GROUP_COLUMN: &str = "group_id";
pub const FEATURES_COLUMN: &str = "features";

#[derive(Debug, thiserror::Error)]
pub enum DatasetIoError {
    #[error("missing column `{0}`")]
    MissingColumn(String),
    #[error("row {row}: malformed label cell `{cell}`")]
    MalformedCell { row: usize, cell: String },
    #[error("row {row}: duplicate instance id `{id}`")]
    DuplicateInstance { row: usize, id: String },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Parses a label cell: a JSON array of strings or a `|`-separated list.
/// Blank entries are dropped.
pub fn parse_label_cell(cell: &str) -> Option<BTreeSet<String>> {
    let cell = cell.trim();
    if cell.starts_with('[') {
        let items: Vec<String> = serde_json::from_str(cell).ok()?;
        return Some(items.into_iter().map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect());
    }
    Some(cell.split('|').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect())
}

pub fn label_cell<I, S>(labels: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let items: Vec<String> = labels.into_iter().map(|s| s.as_ref().to_string()).collect();
    serde_json::to_string(&items).expect("string list serializes")
}

/// Reads rows from CSV text. `instance_id` defaults to the 0-based row
/// index, `group_id` and `features` are optional.
pub fn load_dataset(text: &str, label_column: &str) -> Result<Vec<DatasetRow>, DatasetIoError> {
    let mut reader = csv::ReaderBuilder::new().from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let position = |name: &str| headers.iter().position(|h| h.trim() == name);
    let labels_at = position(label_column).ok_or_else(|| DatasetIoError::MissingColumn(label_column.to_string()))?;
    let id_at = position(ID_COLUMN);
    let group_at = position(GROUP_COLUMN);
    let features_at = position(FEATURES_COLUMN);

    let mut rows = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let field = |at: Option<usize>| at.and_then(|a| record.get(a)).map(str::trim);
        let cell = record.get(labels_at).unwrap_or("");
        let labels =
            parse_label_cell(cell).ok_or_else(|| DatasetIoError::MalformedCell { row: i, cell: cell.to_string() })?;
        let instance_id = field(id_at).map(String::from).unwrap_or_else(|| i.to_string());
        if !seen.insert(instance_id.clone()) {
            return Err(DatasetIoError::DuplicateInstance { row: i, id: instance_id });
        }
        rows.push(DatasetRow {
            instance_id,
            group_id: field(group_at).filter(|g| !g.is_empty()).map(String::from),
            features: field(features_at).unwrap_or("").to_string(),
            labels,
        });
    }
    Ok(rows)
}

/// Writes `instance_id,label_list`, one row per entry.
pub fn write_label_sets<'a, I>(rows: I) -> Result<String, DatasetIoError>
where
    I: IntoIterator<Item = (&'a str, &'a BTreeSet<String>)>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([ID_COLUMN, DEFAULT_LABEL_COLUMN])?;
    for (id, labels) in rows {
        writer.write_record([id, &label_cell(labels)])?;
    }
    finish(writer)
}

pub fn load_label_sets(text: &str) -> Result<BTreeMap<String, BTreeSet<String>>, DatasetIoError> {
    Ok(load_dataset(text, DEFAULT_LABEL_COLUMN)?.into_iter().map(|r| (r.instance_id, r.labels)).collect())
}

/// `instance_id` followed by one column per prepared column.
pub fn write_prepared(prepared: &PreparedDataset) -> Result<String, DatasetIoError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    let mut header = vec![ID_COLUMN.to_string()];
    header.extend(prepared.columns.iter().map(|c| c.id.clone()));
    writer.write_record(&header)?;
    for (i, id) in prepared.instance_ids.iter().enumerate() {
        let mut record = vec![id.clone()];
        record.extend(prepared.columns.iter().map(|c| label_cell(&c.cells[i])));
        writer.write_record(&record)?;
    }
    finish(writer)
}

/// `instance_id,<name>` with one value per instance.
pub fn write_column<'a, I>(ids: I, name: &str, values: &[String]) -> Result<String, DatasetIoError>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer.write_record([ID_COLUMN, name])?;
    for (id, value) in ids.into_iter().zip(values) {
        writer.write_record([id, value.as_str()])?;
    }
    finish(writer)
}

pub fn write_traces(traces: &[PredictionTrace]) -> String {
    let mut out = String::new();
    for trace in traces {
        out.push_str(&serde_json::to_string(trace).expect("trace serializes"));
        out.push('\n');
    }
    out
}

pub(crate) fn finish(writer: csv::Writer<Vec<u8>>) -> Result<String, DatasetIoError> {
    let bytes = writer.into_inner().map_err(|e| DatasetIoError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_cell_styles() {
        let text = "instance_id,group_id,label_list\na,g1,\"[\"\"ct\"\", \"\"angiography\"\"]\"\nb,,ct | mri\nc,,\n";
        let rows = load_dataset(text, DEFAULT_LABEL_COLUMN).unwrap();
        assert_eq!(rows[0].labels, ["angiography", "ct"].map(String::from).into());
        assert_eq!(rows[0].group_id.as_deref(), Some("g1"));
        assert_eq!(rows[1].labels, ["ct", "mri"].map(String::from).into());
        assert_eq!(rows[1].group_id, None);
        assert!(rows[2].labels.is_empty());
    }

    #[test]
    fn missing_column_and_malformed_cell() {
        assert!(matches!(load_dataset("id,labels\n1,a\n", "label_list"), Err(DatasetIoError::MissingColumn(_))));
        let err = load_dataset("label_list\nct\n\"[\"\"ct\"\"\"\n", "label_list").unwrap_err();
        assert!(matches!(err, DatasetIoError::MalformedCell { row: 1, .. }));
    }

    #[test]
    fn default_ids_and_round_trip() {
        let rows = load_dataset("label_list\nct|angiography\nmri\n", "label_list").unwrap();
        assert_eq!(rows[1].instance_id, "1");
        let text = write_label_sets(rows.iter().map(|r| (r.instance_id.as_str(), &r.labels))).unwrap();
        assert_eq!(text, "instance_id,label_list\n0,\"[\"\"angiography\"\",\"\"ct\"\"]\"\n1,\"[\"\"mri\"\"]\"\n");
        assert_eq!(load_label_sets(&text).unwrap()["0"], rows[0].labels);
    }
}
