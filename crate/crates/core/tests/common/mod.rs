#![allow(dead_code)]

use meritscan::classify::Dataset;
use meritscan::ingest::{self, ColumnMap, CpiTable, SelectionFilters};
use meritscan::{data, Cleaner, CleanedNarrative, ComplaintRecord, TokenPolicy};

pub fn fixture_records() -> Vec<ComplaintRecord> {
    let parsed = ingest::parse_complaints(data::FIXTURE_COMPLAINTS.as_bytes(), &ColumnMap::default()).unwrap();
    ingest::select_records(&parsed.complaints, &CpiTable::bundled(), &SelectionFilters::default())
        .unwrap()
        .records
}

pub fn fixture_docs(records: &[ComplaintRecord]) -> Vec<CleanedNarrative> {
    Cleaner::default().clean_all(records.iter().map(|r| (r.id.as_str(), r.narrative.as_str())))
}

pub fn fixture_dataset() -> (Dataset, Vec<f64>) {
    let records = fixture_records();
    let docs = fixture_docs(&records);
    let labels = records.iter().map(|r| r.merit).collect();
    let amounts = records.iter().map(|r| r.adjusted_amount).collect();
    (Dataset::new(docs, labels, TokenPolicy::default()).unwrap(), amounts)
}
