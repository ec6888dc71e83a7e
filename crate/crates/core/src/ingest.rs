//! Surveillance CSV ingest: parsing, validation and national annual
//! aggregation.
//!
//! Format: UTF-8, comma separated, header `region,year,cases,deaths`, no
//! quoting (region names must not contain commas). Blank lines are ignored.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::TimeSeries;

pub const HEADER: [&str; 4] = ["region", "year", "cases", "deaths"];

/// Region count of the Philippine surveillance system.
pub const EXPECTED_REGIONS: usize = 17;

const YEAR_RANGE: std::ops::RangeInclusive<i32> = 1900..=2100;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveillanceRecord {
    pub region: String,
    pub year: i32,
    pub cases: u64,
    pub deaths: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Dataset {
    pub records: Vec<SurveillanceRecord>,
    pub source_note: String,
}

impl Dataset {
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

pub fn parse_csv(bytes: &[u8]) -> Result<Dataset> {
    let text = std::str::from_utf8(bytes).map_err(|_| Error::Encoding)?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, line)| (i + 1, line))
        .filter(|(_, line)| !line.trim().is_empty());

    let header = lines.next().map(|(_, line)| line).unwrap_or("");
    let fields: Vec<&str> = header.split(',').map(str::trim).collect();
    if fields != HEADER {
        return Err(Error::Header(header.to_string()));
    }

    let mut records = Vec::new();
    let mut seen: HashSet<(String, i32)> = HashSet::new();
    for (line_no, line) in lines {
        let record = parse_row(line_no, line)?;
        if !seen.insert((record.region.clone(), record.year)) {
            return Err(Error::Duplicate {
                region: record.region,
                year: record.year,
            });
        }
        records.push(record);
    }
    Ok(Dataset {
        records,
        source_note: String::new(),
    })
}

fn parse_row(line: usize, text: &str) -> Result<SurveillanceRecord> {
    let row_err = |reason: String| Error::Row { line, reason };
    let fields: Vec<&str> = text.split(',').map(str::trim).collect();
    let [region, year, cases, deaths] = fields[..] else {
        return Err(row_err(format!("expected 4 fields, found {}", fields.len())));
    };
    if region.is_empty() {
        return Err(row_err("empty region name".into()));
    }
    let year: i32 = year
        .parse()
        .map_err(|_| row_err(format!("bad year `{year}`")))?;
    if !YEAR_RANGE.contains(&year) {
        return Err(row_err(format!("year {year} outside 1900-2100")));
    }
    let count = |name: &str, raw: &str| -> Result<u64> {
        let value: i64 = raw
            .parse()
            .map_err(|_| row_err(format!("bad {name} count `{raw}`")))?;
        u64::try_from(value).map_err(|_| row_err(format!("negative {name} count {value}")))
    };
    let cases = count("cases", cases)?;
    let deaths = count("deaths", deaths)?;
    if deaths > cases {
        return Err(row_err(format!("deaths ({deaths}) exceed cases ({cases})")));
    }
    Ok(SurveillanceRecord {
        region: region.to_string(),
        year,
        cases,
        deaths,
    })
}

/// Serializes records back to the ingest format, preserving order.
pub fn to_csv(ds: &Dataset) -> String {
    let mut out = HEADER.join(",");
    out.push('\n');
    for r in &ds.records {
        out.push_str(&format!("{},{},{},{}\n", r.region, r.year, r.cases, r.deaths));
    }
    out
}

/// Total cases per year across all regions.
pub fn annual_totals(ds: &Dataset) -> BTreeMap<i32, u64> {
    let mut totals = BTreeMap::new();
    for r in &ds.records {
        *totals.entry(r.year).or_insert(0) += r.cases;
    }
    totals
}

/// National series: cases summed over regions for each year from the first
/// to the last year present. Missing years are an error.
pub fn aggregate_annual(ds: &Dataset) -> Result<TimeSeries> {
    let totals = annual_totals(ds);
    let (Some((&first, _)), Some((&last, _))) = (totals.first_key_value(), totals.last_key_value()) else {
        return Err(Error::Empty);
    };
    let missing: Vec<i32> = (first..=last).filter(|y| !totals.contains_key(y)).collect();
    if !missing.is_empty() {
        return Err(Error::Gap(missing));
    }
    Ok(TimeSeries::new(totals.values().map(|&c| c as f64).collect(), first))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegionWarning {
    pub year: i32,
    pub regions: usize,
}

impl fmt::Display for RegionWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} reports {} distinct regions (expected {EXPECTED_REGIONS})",
            self.year, self.regions
        )
    }
}

/// Flags years whose distinct-region count differs from 17. Never fails:
/// other countries' data are legal input.
pub fn validate_regions(ds: &Dataset) -> Vec<RegionWarning> {
    let mut by_year: BTreeMap<i32, BTreeSet<&str>> = BTreeMap::new();
    for r in &ds.records {
        by_year.entry(r.year).or_default().insert(r.region.as_str());
    }
    by_year
        .into_iter()
        .filter(|(_, regions)| regions.len() != EXPECTED_REGIONS)
        .map(|(year, regions)| RegionWarning {
            year,
            regions: regions.len(),
        })
        .collect()
}
