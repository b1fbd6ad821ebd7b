//! CFPB-style complaint ingestion.
//!
//! Parses the complaint export, labels each complaint by the company's
//! response, extracts the dollar amount quoted in the narrative and
//! discounts it to a base date with an annual CPI table.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::OnceLock;

use chrono::{Datelike, NaiveDate};
use regex::Regex;

use crate::error::{Error, Result};

/// Upper bound on the quoted amount; larger amounts usually involve
/// business accounts.
pub const MAX_AMOUNT_CENTS: u64 = 1_000_000;

/// A non-negative dollar amount held exactly as whole cents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cents(pub u64);

impl Cents {
    pub fn dollars(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Cents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02}", self.0 / 100, self.0 % 100)
    }
}

/// One row of the complaint export with a non-empty narrative.
#[derive(Debug, Clone, PartialEq)]
pub struct RawComplaint {
    pub id: String,
    pub date_received: NaiveDate,
    pub product: String,
    pub company: String,
    pub narrative: String,
    pub company_response: String,
}

/// A selected complaint with its merit label and discounted amount.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplaintRecord {
    pub id: String,
    pub date_received: NaiveDate,
    pub narrative: String,
    pub merit: bool,
    pub dollar_amount: Cents,
    /// Amount expressed in base-date dollars (`l_i`).
    pub adjusted_amount: f64,
    pub product: String,
    pub company: String,
    pub company_response: String,
}

impl ComplaintRecord {
    /// The raw row this record was selected from.
    pub fn to_raw(&self) -> RawComplaint {
        RawComplaint {
            id: self.id.clone(),
            date_received: self.date_received,
            product: self.product.clone(),
            company: self.company.clone(),
            narrative: self.narrative.clone(),
            company_response: self.company_response.clone(),
        }
    }
}

/// Header names of the columns read from the export.
#[derive(Debug, Clone)]
pub struct ColumnMap {
    pub id: String,
    pub narrative: String,
    pub date: String,
    pub product: String,
    pub company: String,
    pub response: String,
}

impl Default for ColumnMap {
    fn default() -> Self {
        Self {
            id: "Complaint ID".into(),
            narrative: "Consumer complaint narrative".into(),
            date: "Date received".into(),
            product: "Product".into(),
            company: "Company".into(),
            response: "Company response to consumer".into(),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct ParsedComplaints {
    pub complaints: Vec<RawComplaint>,
    pub skipped_empty: usize,
}

/// Reads a header-bearing complaint CSV.
///
/// Rows whose narrative is blank are skipped and counted. The id column is
/// optional; when absent the 1-based data row number is used.
pub fn parse_complaints<R: Read>(reader: R, columns: &ColumnMap) -> Result<ParsedComplaints> {
    let mut rdr = csv::ReaderBuilder::new().flexible(false).from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| headers.iter().position(|h| h.trim() == name);
    let required = |name: &str| {
        find(name).ok_or_else(|| Error::Config(format!("missing column `{name}`")))
    };
    let narrative_col = required(&columns.narrative)?;
    let date_col = required(&columns.date)?;
    let product_col = required(&columns.product)?;
    let company_col = required(&columns.company)?;
    let response_col = required(&columns.response)?;
    let id_col = find(&columns.id);

    let mut out = ParsedComplaints::default();
    for (index, row) in rdr.records().enumerate() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(index as u64 + 2);
        let narrative = row.get(narrative_col).unwrap_or("");
        if narrative.trim().is_empty() {
            out.skipped_empty += 1;
            continue;
        }
        let date_text = row.get(date_col).unwrap_or("");
        let date_received = parse_date(date_text).ok_or_else(|| Error::Csv {
            row: line,
            message: format!("unrecognised date `{date_text}`"),
        })?;
        let id = match id_col {
            Some(c) => row.get(c).unwrap_or("").trim().to_string(),
            None => (index + 1).to_string(),
        };
        out.complaints.push(RawComplaint {
            id,
            date_received,
            product: row.get(product_col).unwrap_or("").trim().to_string(),
            company: row.get(company_col).unwrap_or("").trim().to_string(),
            narrative: narrative.to_string(),
            company_response: row.get(response_col).unwrap_or("").trim().to_string(),
        });
    }
    Ok(out)
}

/// Accepts `YYYY-MM-DD`, `MM/DD/YYYY` and `MM/DD/YY`.
pub fn parse_date(text: &str) -> Option<NaiveDate> {
    let text = text.trim();
    if text.contains('-') {
        return NaiveDate::parse_from_str(text, "%Y-%m-%d").ok();
    }
    let year_part = text.rsplit('/').next()?;
    match year_part.len() {
        4 => NaiveDate::parse_from_str(text, "%m/%d/%Y").ok(),
        2 => NaiveDate::parse_from_str(text, "%m/%d/%y").ok(),
        _ => None,
    }
}

/// A complaint is meritorious when it was closed with monetary or
/// non-monetary relief.
pub fn derive_merit(company_response: &str) -> bool {
    let r = company_response.trim().to_lowercase();
    r == "closed with monetary relief" || r == "closed with non-monetary relief"
}

fn dollar_regex() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"\{?\$\s?((?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?)\}?").expect("valid regex")
    })
}

/// The dollar-amount pattern shared with narrative cleaning.
pub fn dollar_pattern() -> &'static Regex {
    dollar_regex()
}

fn parse_cents(text: &str) -> Option<u64> {
    let plain: String = text.chars().filter(|c| *c != ',').collect();
    let (whole, frac) = match plain.split_once('.') {
        Some((w, f)) => (w, f),
        None => (plain.as_str(), ""),
    };
    let whole: u64 = whole.parse().ok()?;
    let frac_cents = match frac.len() {
        0 => 0,
        1 => frac.parse::<u64>().ok()? * 10,
        2 => frac.parse::<u64>().ok()?,
        // sub-cent digits: only accepted when they are all zero
        _ if frac[2..].bytes().all(|b| b == b'0') => frac[..2].parse::<u64>().ok()?,
        _ => return None,
    };
    whole.checked_mul(100)?.checked_add(frac_cents)
}

/// Every distinct positive amount quoted in a narrative, in order of first
/// appearance.
pub fn extract_dollar_amounts(narrative: &str) -> Vec<Cents> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for cap in dollar_regex().captures_iter(narrative) {
        if let Some(c) = parse_cents(&cap[1]) {
            if c > 0 && seen.insert(c) {
                out.push(Cents(c));
            }
        }
    }
    out
}

/// Annual CPI values and the base date amounts are discounted to.
#[derive(Debug, Clone)]
pub struct CpiTable {
    values: BTreeMap<i32, f64>,
    base_date: NaiveDate,
}

impl CpiTable {
    pub fn new(values: BTreeMap<i32, f64>, base_date: NaiveDate) -> Result<Self> {
        if let Some((y, v)) = values.iter().find(|(_, v)| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Cpi(format!("CPI for {y} must be positive, got {v}")));
        }
        if !values.contains_key(&base_date.year()) {
            return Err(Error::Cpi(format!(
                "base year {} missing from table",
                base_date.year()
            )));
        }
        Ok(Self { values, base_date })
    }

    /// Reads a `year,cpi` CSV with a header row.
    pub fn from_csv<R: Read>(reader: R, base_date: NaiveDate) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut values = BTreeMap::new();
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map(|p| p.line()).unwrap_or(0);
            let bad = |what: &str| Error::Csv {
                row: line,
                message: format!("bad {what} in CPI table"),
            };
            let year: i32 = row.get(0).unwrap_or("").trim().parse().map_err(|_| bad("year"))?;
            let cpi: f64 = row.get(1).unwrap_or("").trim().parse().map_err(|_| bad("value"))?;
            values.insert(year, cpi);
        }
        Self::new(values, base_date)
    }

    pub fn from_path(path: &Path, base_date: NaiveDate) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv(file, base_date)
    }

    /// The bundled CPI-U table with base date 2015-01-01.
    pub fn bundled() -> Self {
        Self::from_csv(crate::data::CPI_U.as_bytes(), default_base_date())
            .expect("bundled CPI table is valid")
    }

    pub fn base_date(&self) -> NaiveDate {
        self.base_date
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        self.values.get(&year).copied()
    }

    /// `amount * CPI(base year) / CPI(year)`.
    pub fn discount(&self, amount: f64, year: i32) -> Option<f64> {
        let base = self.get(self.base_date.year())?;
        Some(amount * (base / self.get(year)?))
    }
}

pub fn default_base_date() -> NaiveDate {
    NaiveDate::from_ymd_opt(2015, 1, 1).expect("valid date")
}

/// Row-selection filters applied before amount extraction.
#[derive(Debug, Clone)]
pub struct SelectionFilters {
    /// Case-insensitive substrings; a row matches when its product contains
    /// any of them. Empty means no product filter.
    pub product_substrings: Vec<String>,
    /// Case-insensitive substring of the company name.
    pub company: Option<String>,
    pub date_from: NaiveDate,
    pub date_to: NaiveDate,
    pub max_amount: Cents,
}

impl Default for SelectionFilters {
    fn default() -> Self {
        Self {
            product_substrings: vec!["credit card".into(), "prepaid card".into()],
            company: Some("bank of america".into()),
            date_from: NaiveDate::from_ymd_opt(2011, 12, 1).expect("valid date"),
            date_to: NaiveDate::from_ymd_opt(2023, 6, 29).expect("valid date"),
            max_amount: Cents(MAX_AMOUNT_CENTS),
        }
    }
}

impl SelectionFilters {
    /// Filters that accept every product, company and date.
    pub fn permissive() -> Self {
        Self {
            product_substrings: Vec::new(),
            company: None,
            date_from: NaiveDate::MIN,
            date_to: NaiveDate::MAX,
            max_amount: Cents(MAX_AMOUNT_CENTS),
        }
    }

    fn matches(&self, raw: &RawComplaint) -> bool {
        let product = raw.product.to_lowercase();
        let product_ok = self.product_substrings.is_empty()
            || self
                .product_substrings
                .iter()
                .any(|p| product.contains(&p.to_lowercase()));
        let company_ok = self
            .company
            .as_ref()
            .is_none_or(|c| raw.company.to_lowercase().contains(&c.to_lowercase()));
        product_ok
            && company_ok
            && raw.date_received >= self.date_from
            && raw.date_received <= self.date_to
    }
}

/// Why a raw row did not become a record.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exclusion {
    Filtered,
    NoAmount,
    MultipleAmounts,
    AmountTooLarge,
}

#[derive(Debug, Clone, Default)]
pub struct Selection {
    pub records: Vec<ComplaintRecord>,
    pub excluded: BTreeMap<Exclusion, usize>,
}

/// Applies the filters, keeps rows quoting exactly one distinct amount no
/// larger than the cap, and attaches merit labels and discounted amounts.
pub fn select_records(
    raws: &[RawComplaint],
    cpi: &CpiTable,
    filters: &SelectionFilters,
) -> Result<Selection> {
    let mut selection = Selection::default();
    let mut kept = Vec::new();
    for raw in raws {
        let reason = if !filters.matches(raw) {
            Some(Exclusion::Filtered)
        } else {
            match extract_dollar_amounts(&raw.narrative).as_slice() {
                [] => Some(Exclusion::NoAmount),
                [a] if *a > filters.max_amount => Some(Exclusion::AmountTooLarge),
                [a] => {
                    kept.push((raw, *a));
                    None
                }
                _ => Some(Exclusion::MultipleAmounts),
            }
        };
        if let Some(r) = reason {
            *selection.excluded.entry(r).or_default() += 1;
        }
    }

    let missing: BTreeSet<i32> = kept
        .iter()
        .map(|(r, _)| r.date_received.year())
        .filter(|y| cpi.get(*y).is_none())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingCpiYears {
            missing: missing.into_iter().collect(),
        });
    }

    selection.records = kept
        .into_iter()
        .map(|(raw, amount)| {
            let adjusted = cpi
                .discount(amount.dollars(), raw.date_received.year())
                .expect("years checked above");
            ComplaintRecord {
                id: raw.id.clone(),
                date_received: raw.date_received,
                narrative: raw.narrative.clone(),
                merit: derive_merit(&raw.company_response),
                dollar_amount: amount,
                adjusted_amount: adjusted,
                product: raw.product.clone(),
                company: raw.company.clone(),
                company_response: raw.company_response.clone(),
            }
        })
        .collect();
    Ok(selection)
}

const RECORD_HEADER: [&str; 6] = ["id", "date", "merit", "amount", "adjusted_amount", "narrative"];

/// Writes `id,date,merit,amount,adjusted_amount,narrative`.
pub fn write_records<W: Write>(writer: W, records: &[ComplaintRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(RECORD_HEADER)?;
    for r in records {
        w.write_record([
            r.id.as_str(),
            &r.date_received.to_string(),
            if r.merit { "1" } else { "0" },
            &r.dollar_amount.to_string(),
            &r.adjusted_amount.to_string(),
            r.narrative.as_str(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<records>", e))?;
    Ok(())
}

/// A row of the record file as read back by later stages.
#[derive(Debug, Clone, PartialEq)]
pub struct StoredRecord {
    pub id: String,
    pub date: NaiveDate,
    pub merit: bool,
    pub amount: Cents,
    pub adjusted_amount: f64,
    pub narrative: String,
}

pub fn read_records<R: Read>(reader: R) -> Result<Vec<StoredRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.iter().collect::<Vec<_>>() != RECORD_HEADER {
        return Err(Error::Parse(format!(
            "record file header must be `{}`",
            RECORD_HEADER.join(",")
        )));
    }
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        let bad = |what: &str| Error::Csv {
            row: line,
            message: format!("bad {what}"),
        };
        out.push(StoredRecord {
            id: row[0].to_string(),
            date: parse_date(&row[1]).ok_or_else(|| bad("date"))?,
            merit: match &row[2] {
                "1" => true,
                "0" => false,
                _ => return Err(bad("merit flag")),
            },
            amount: parse_cents(&row[3]).map(Cents).ok_or_else(|| bad("amount"))?,
            adjusted_amount: row[4].parse().map_err(|_| bad("adjusted amount"))?,
            narrative: row[5].to_string(),
        });
    }
    Ok(out)
}

/// Index from id to position, rejecting duplicate ids.
pub fn index_by_id<'a, I>(ids: I) -> Result<HashMap<&'a str, usize>>
where
    I: IntoIterator<Item = &'a str>,
{
    let mut map = HashMap::new();
    for (i, id) in ids.into_iter().enumerate() {
        if map.insert(id, i).is_some() {
            return Err(Error::Parse(format!("duplicate id `{id}`")));
        }
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(id: &str, date: &str, narrative: &str, response: &str) -> RawComplaint {
        RawComplaint {
            id: id.into(),
            date_received: parse_date(date).unwrap(),
            product: "Credit card".into(),
            company: "BANK OF AMERICA, NATIONAL ASSOCIATION".into(),
            narrative: narrative.into(),
            company_response: response.into(),
        }
    }

    #[test]
    fn empty_narratives_are_skipped() {
        let csv = "Complaint ID,Date received,Product,Company,Consumer complaint narrative,Company response to consumer\n\
                   1,2016-11-10,Credit card,BOA,Charged $5.00,Closed with explanation\n\
                   2,2016-11-11,Credit card,BOA,   ,Closed with explanation\n\
                   3,2016-11-12,Credit card,BOA,Charged $6.00,Closed with monetary relief\n";
        let parsed = parse_complaints(csv.as_bytes(), &ColumnMap::default()).unwrap();
        assert_eq!(parsed.complaints.len(), 2);
        assert_eq!(parsed.skipped_empty, 1);
        assert_eq!(parsed.complaints[1].id, "3");
    }

    #[test]
    fn missing_response_column_is_a_config_error() {
        let csv = "Date received,Product,Company,Consumer complaint narrative\n2016-11-10,a,b,c\n";
        let err = parse_complaints(csv.as_bytes(), &ColumnMap::default()).unwrap_err();
        match err {
            Error::Config(msg) => assert!(msg.contains("Company response to consumer")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_csv_reports_row() {
        let csv = "Date received,Product,Company,Consumer complaint narrative,Company response to consumer\n\
                   2016-11-10,a,b,c,d\n\
                   2016-11-10,a,b\n";
        match parse_complaints(csv.as_bytes(), &ColumnMap::default()).unwrap_err() {
            Error::Csv { row, .. } => assert_eq!(row, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bundled_fixture_has_fifty_rows() {
        let parsed =
            parse_complaints(crate::data::FIXTURE_COMPLAINTS.as_bytes(), &ColumnMap::default())
                .unwrap();
        assert_eq!(parsed.complaints.len(), 50);
        assert_eq!(parsed.skipped_empty, 0);
    }

    #[test]
    fn merit_labels() {
        assert!(derive_merit("Closed with monetary relief"));
        assert!(!derive_merit("Closed with explanation"));
        assert!(derive_merit("  closed with NON-MONETARY relief "));
        assert!(!derive_merit("Closed"));
        assert!(!derive_merit(""));
    }

    #[test]
    fn dollar_amounts() {
        assert_eq!(extract_dollar_amounts("charged {$170.00} was made"), vec![Cents(17000)]);
        assert!(extract_dollar_amounts("no amounts here").is_empty());
        assert_eq!(
            extract_dollar_amounts("paid $1,200.50 then $1,200.50 again"),
            vec![Cents(120050)]
        );
        assert_eq!(
            extract_dollar_amounts("$5 and {$5.00} and $0.00 and $7.5"),
            vec![Cents(500), Cents(750)]
        );
    }

    #[test]
    fn dates() {
        let d = NaiveDate::from_ymd_opt(2016, 11, 10).unwrap();
        assert_eq!(parse_date("2016-11-10"), Some(d));
        assert_eq!(parse_date("11/10/2016"), Some(d));
        assert_eq!(parse_date("11/10/16"), Some(d));
        assert_eq!(parse_date("10.11.2016"), None);
    }

    #[test]
    fn selection_rules() {
        let cpi = CpiTable::bundled();
        let raws = vec![
            raw("a", "2016-11-10", "paid $10.00 and $20.00", "Closed"),
            raw("b", "2016-11-10", "paid $10,500.00", "Closed"),
            raw("c", "2015-03-01", "paid {$230.00}", "Closed with monetary relief"),
            raw("d", "2016-11-10", "no amount", "Closed"),
            raw("e", "2010-01-01", "paid $3.00", "Closed"),
            raw("f", "2016-11-10", "paid $10,000.00", "Closed"),
        ];
        let sel = select_records(&raws, &cpi, &SelectionFilters::default()).unwrap();
        let ids: Vec<_> = sel.records.iter().map(|r| r.id.as_str()).collect();
        assert_eq!(ids, ["c", "f"]);
        assert_eq!(sel.records[0].adjusted_amount, 230.0);
        assert!(sel.records[0].merit);
        assert_eq!(sel.excluded[&Exclusion::MultipleAmounts], 1);
        assert_eq!(sel.excluded[&Exclusion::AmountTooLarge], 1);
        assert_eq!(sel.excluded[&Exclusion::NoAmount], 1);
        assert_eq!(sel.excluded[&Exclusion::Filtered], 1);
    }

    #[test]
    fn missing_cpi_years_are_listed() {
        let mut values = BTreeMap::new();
        values.insert(2015, 237.017);
        let cpi = CpiTable::new(values, default_base_date()).unwrap();
        let raws = vec![
            raw("a", "2016-11-10", "paid $10.00", "Closed"),
            raw("b", "2018-01-10", "paid $10.00", "Closed"),
            raw("c", "2016-01-10", "paid $12.00", "Closed"),
        ];
        match select_records(&raws, &cpi, &SelectionFilters::default()).unwrap_err() {
            Error::MissingCpiYears { missing } => assert_eq!(missing, vec![2016, 2018]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cpi_table_validation() {
        let bad = "year,cpi\n2015,0\n";
        assert!(CpiTable::from_csv(bad.as_bytes(), default_base_date()).is_err());
        let no_base = "year,cpi\n2016,240\n";
        assert!(CpiTable::from_csv(no_base.as_bytes(), default_base_date()).is_err());
        let cpi = CpiTable::bundled();
        let ratio = cpi.get(2015).unwrap() / cpi.get(2022).unwrap();
        assert_eq!(cpi.discount(170.0, 2022).unwrap(), 170.0 * ratio);
    }

    #[test]
    fn fixture_selection_and_idempotence() {
        let parsed =
            parse_complaints(crate::data::FIXTURE_COMPLAINTS.as_bytes(), &ColumnMap::default())
                .unwrap();
        let cpi = CpiTable::bundled();
        let filters = SelectionFilters::default();
        let first = select_records(&parsed.complaints, &cpi, &filters).unwrap();
        assert_eq!(first.records.len(), 43);
        assert_eq!(first.records.iter().filter(|r| r.merit).count(), 21);
        for r in &first.records {
            assert!(r.dollar_amount.0 > 0 && r.dollar_amount.0 <= MAX_AMOUNT_CENTS);
            assert!(r.adjusted_amount > 0.0);
        }
        let raws: Vec<_> = first.records.iter().map(ComplaintRecord::to_raw).collect();
        let second = select_records(&raws, &cpi, &filters).unwrap();
        assert_eq!(first.records, second.records);
    }

    #[test]
    fn record_file_round_trip() {
        let cpi = CpiTable::bundled();
        let raws = vec![raw("x,1", "2017-02-03", "said \"hi\", paid $12.34\nthen left", "Closed")];
        let sel = select_records(&raws, &cpi, &SelectionFilters::default()).unwrap();
        let mut buf = Vec::new();
        write_records(&mut buf, &sel.records).unwrap();
        let back = read_records(buf.as_slice()).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0].id, "x,1");
        assert_eq!(back[0].amount, Cents(1234));
        assert_eq!(back[0].adjusted_amount, sel.records[0].adjusted_amount);
        assert_eq!(back[0].narrative, sel.records[0].narrative);
    }
}
