//! Text file formats: statements CSV, `key=value` assumptions, comparables
//! CSV and plain numeric columns.

use std::collections::BTreeMap;

use accval_core::forecast::Assumptions;
use accval_core::multiples::{Comparable, Driver};
use accval_core::statements::{Item, StatementBuilder, StatementSet};

use crate::error::{AppError, Result};

const STATEMENTS_HEADER: [&str; 3] = ["period", "item", "value"];

fn reader(text: &str, flexible: bool) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .flexible(flexible)
        .from_reader(text.as_bytes())
}

fn line_of(rec: &csv::StringRecord) -> u64 {
    rec.position().map_or(0, |p| p.line())
}

fn csv_error(source: &str, e: csv::Error) -> AppError {
    let line = e.position().map_or(0, |p| p.line());
    AppError::parse(source, line, e.to_string())
}

fn number(source: &str, line: u64, what: &str, raw: &str) -> Result<f64> {
    raw.parse::<f64>()
        .map_err(|_| AppError::parse(source, line, format!("invalid number `{raw}` for {what}")))
}

/// Parses a `period,item,value` file into a validated statement set.
pub fn parse_statements(text: &str, source: &str) -> Result<StatementSet> {
    if text.trim().is_empty() {
        return Err(accval_core::Error::NoPeriods.into());
    }
    let mut rdr = reader(text, false);
    let header = rdr.headers().map_err(|e| csv_error(source, e))?.clone();
    if header.iter().ne(STATEMENTS_HEADER) {
        return Err(AppError::parse(
            source,
            1,
            format!("expected header `period,item,value`, found `{}`", header.iter().collect::<Vec<_>>().join(",")),
        ));
    }
    let mut b = StatementBuilder::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(source, e))?;
        let line = line_of(&rec);
        let item: Item = rec[1]
            .parse()
            .map_err(|e: accval_core::statements::UnknownItem| AppError::parse(source, line, e.to_string()))?;
        let value = number(source, line, item.as_str(), &rec[2])?;
        b.insert(&rec[0], item, value)
            .map_err(|e| AppError::parse(source, line, e.to_string()))?;
    }
    Ok(b.build()?)
}

/// Writes a statement set back out in the same layout, one row per present
/// item, values at full precision.
pub fn write_statements(set: &StatementSet) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(STATEMENTS_HEADER).expect("in-memory write");
    for (period, item, value) in set.records() {
        w.write_record([period, item.as_str(), &value.to_string()])
            .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Parses `key=value` lines. Blank lines and `#` comments are ignored.
pub fn parse_assumptions(text: &str, source: &str) -> Result<Assumptions> {
    let mut seen: BTreeMap<String, (u64, String)> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let l = raw.trim();
        if l.is_empty() || l.starts_with('#') {
            continue;
        }
        let (k, v) = l
            .split_once('=')
            .ok_or_else(|| AppError::parse(source, line, format!("expected key=value, found `{l}`")))?;
        let k = k.trim().to_string();
        if seen.contains_key(&k) {
            return Err(AppError::parse(source, line, format!("duplicate key `{k}`")));
        }
        seen.insert(k, (line, v.trim().to_string()));
    }

    let num = |key: &str| -> Result<Option<f64>> {
        seen.get(key)
            .map(|(line, v)| number(source, *line, key, v))
            .transpose()
    };
    let required = |key: &str| -> Result<f64> {
        num(key)?.ok_or_else(|| AppError::input(source, format!("missing key `{key}`")))
    };

    const KEYS: [&str; 9] = [
        "growth",
        "wacc",
        "equity_cost",
        "horizon",
        "tax_rate",
        "profit_margin",
        "shares",
        "oi_anchor",
        "noa_anchor",
    ];
    if let Some((k, (line, _))) = seen.iter().find(|(k, _)| !KEYS.contains(&k.as_str())) {
        return Err(AppError::parse(source, *line, format!("unknown key `{k}`")));
    }

    let horizon = match seen.get("horizon") {
        Some((line, v)) => v.parse::<usize>().map_err(|_| {
            AppError::parse(source, *line, format!("horizon must be a non-negative integer, found `{v}`"))
        })?,
        None => return Err(AppError::input(source, "missing key `horizon`")),
    };
    let mut a = Assumptions::new(required("growth")?, required("wacc")?, horizon, required("shares")?);
    a.equity_cost = num("equity_cost")?;
    a.tax_rate = num("tax_rate")?;
    a.profit_margin = num("profit_margin")?;
    a.oi_anchor = num("oi_anchor")?;
    a.noa_anchor = num("noa_anchor")?;
    a.validate()?;
    Ok(a)
}

/// Parses `name,entity_value,<driver>...`. An empty `entity_value` means the
/// driver columns already hold multiples; empty driver cells are skipped.
pub fn parse_comparables(text: &str, source: &str) -> Result<Vec<Comparable>> {
    let mut rdr = reader(text, false);
    let header = rdr.headers().map_err(|e| csv_error(source, e))?.clone();
    if header.len() < 3 || &header[0] != "name" || &header[1] != "entity_value" {
        return Err(AppError::parse(
            source,
            1,
            "header must be `name,entity_value` followed by driver columns",
        ));
    }
    let drivers: Vec<Driver> = header
        .iter()
        .skip(2)
        .map(|h| {
            h.parse()
                .map_err(|_| AppError::parse(source, 1, format!("unknown driver column `{h}`")))
        })
        .collect::<Result<_>>()?;

    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(source, e))?;
        let line = line_of(&rec);
        let entity_value = match &rec[1] {
            "" => None,
            v => Some(number(source, line, "entity_value", v)?),
        };
        let mut map = BTreeMap::new();
        for (d, raw) in drivers.iter().zip(rec.iter().skip(2)) {
            if !raw.is_empty() {
                map.insert(*d, number(source, line, d.as_str(), raw)?);
            }
        }
        out.push(Comparable {
            name: rec[0].to_string(),
            entity_value,
            drivers: map,
        });
    }
    if out.is_empty() {
        return Err(AppError::input(source, "no comparables"));
    }
    Ok(out)
}

/// Reads numbers from a CSV file with a header row.
///
/// With `column`, that column is read and empty cells skipped. Without it,
/// a `value` column is used when present, otherwise every cell that parses
/// as a number.
pub fn read_numbers(text: &str, source: &str, column: Option<&str>) -> Result<Vec<f64>> {
    let mut rdr = reader(text, true);
    let header = rdr.headers().map_err(|e| csv_error(source, e))?.clone();
    let wanted = column.or_else(|| header.iter().any(|h| h == "value").then_some("value"));
    let idx = match wanted {
        Some(c) => Some(
            header
                .iter()
                .position(|h| h == c)
                .ok_or_else(|| AppError::input(source, format!("no column `{c}`")))?,
        ),
        None => None,
    };
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| csv_error(source, e))?;
        match idx {
            Some(i) => match rec.get(i) {
                Some("") | None => {}
                Some(raw) => out.push(number(source, line_of(&rec), header.get(i).unwrap_or(""), raw)?),
            },
            None => out.extend(rec.iter().filter_map(|c| c.parse::<f64>().ok())),
        }
    }
    Ok(out)
}
