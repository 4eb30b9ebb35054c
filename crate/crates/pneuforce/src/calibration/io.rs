//! Dataset CSV schema: optional `# key=value` metadata lines, the fixed
//! six-series header, a leading force-0 row with each mounting's zero
//! readings, ascending force-level rows, and a trailing force-0 row with the
//! final zeros of the unrotated series.
//!
//! The force-0 cells of the decreasing columns (X4, X6) sit in the leading
//! row: they are the readings that close those up/down cycles. Numbers are
//! written in shortest round-trip form so parse(serialize(ds)) is
//! bit-exact.

use super::{CalibrationDataset, SeriesData, SeriesId};
use crate::error::{Error, Result};

pub const HEADER: &str = "force_kgf,X1_0,X2_0,X3_360,X4_360,X5_180,X6_180";

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_cell(cell: &str, line: usize, column: usize) -> Result<f64> {
    cell.trim()
        .parse::<f64>()
        .map_err(|_| parse_err(line, column, format!("non-numeric cell '{}'", cell.trim())))
}

/// Parse a dataset from CSV text, validating all layout invariants.
pub fn parse_dataset(text: &str) -> Result<CalibrationDataset> {
    let mut zero_indication = None;
    let mut temp_start_c = None;
    let mut temp_end_c = None;

    let mut lines = text.lines().enumerate().peekable();

    // Metadata prologue.
    while let Some((idx, line)) = lines.peek().copied() {
        let trimmed = line.trim();
        if !trimmed.starts_with('#') {
            break;
        }
        lines.next();
        let body = trimmed.trim_start_matches('#').trim();
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| parse_err(idx + 1, 1, "metadata line is not 'key=value'"))?;
        let (key, value) = (key.trim(), value.trim());
        match key {
            "zero_indication" => zero_indication = Some(parse_cell(value, idx + 1, 1)?),
            "temp_start_C" => temp_start_c = Some(parse_cell(value, idx + 1, 1)?),
            "temp_end_C" => temp_end_c = Some(parse_cell(value, idx + 1, 1)?),
            "force_unit" => {
                if value != "kgf" {
                    return Err(parse_err(
                        idx + 1,
                        1,
                        format!("unsupported force_unit '{value}', expected kgf"),
                    ));
                }
            }
            other => {
                return Err(parse_err(idx + 1, 1, format!("unknown metadata key '{other}'")));
            }
        }
    }

    // Header.
    let (header_idx, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, 1, "missing header"))?;
    let header = header.trim();
    if header != HEADER {
        let found: Vec<&str> = header.split(',').map(str::trim).collect();
        for (col, expected) in HEADER.split(',').enumerate() {
            if !found.contains(&expected) {
                return Err(parse_err(
                    header_idx + 1,
                    col + 1,
                    format!("missing column {expected}"),
                ));
            }
        }
        return Err(parse_err(
            header_idx + 1,
            1,
            format!("header must be exactly '{HEADER}'"),
        ));
    }

    struct Row {
        line: usize,
        force: f64,
        cells: Vec<Option<f64>>,
    }

    let mut rows: Vec<Row> = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != 7 {
            return Err(parse_err(
                idx + 1,
                cells.len().min(7),
                format!("expected 7 cells, got {}", cells.len()),
            ));
        }
        let force = parse_cell(cells[0], idx + 1, 1)?;
        let mut values = Vec::with_capacity(6);
        for (c, cell) in cells[1..].iter().enumerate() {
            if cell.trim().is_empty() {
                values.push(None);
            } else {
                values.push(Some(parse_cell(cell, idx + 1, c + 2)?));
            }
        }
        rows.push(Row {
            line: idx + 1,
            force,
            cells: values,
        });
    }

    if rows.len() < 3 {
        return Err(parse_err(header_idx + 2, 1, "missing zero rows"));
    }

    let leading = rows.first().unwrap();
    if leading.force != 0.0 {
        return Err(parse_err(
            leading.line,
            1,
            "first data row must carry the force-0 zero readings",
        ));
    }
    for (i, cell) in leading.cells.iter().enumerate() {
        if cell.is_none() {
            return Err(parse_err(
                leading.line,
                i + 2,
                format!(
                    "leading zero row is missing the {} reading",
                    SeriesId::ALL[i].column()
                ),
            ));
        }
    }

    let trailing = rows.last().unwrap();
    if trailing.force != 0.0 {
        return Err(parse_err(
            trailing.line,
            1,
            "last data row must carry the trailing force-0 readings (missing zero rows)",
        ));
    }
    for id in [SeriesId::X3, SeriesId::X4, SeriesId::X5, SeriesId::X6] {
        if trailing.cells[id.index()].is_some() {
            return Err(parse_err(
                trailing.line,
                id.index() + 2,
                format!(
                    "unexpected trailing zero for {}: the up/down cycles close in the leading row",
                    id.column()
                ),
            ));
        }
    }

    let level_rows = &rows[1..rows.len() - 1];
    if level_rows.len() < 8 {
        return Err(parse_err(
            trailing.line,
            1,
            format!("fewer than 8 force levels ({})", level_rows.len()),
        ));
    }
    let mut force_levels = Vec::with_capacity(level_rows.len());
    let mut readings: Vec<Vec<f64>> =
        (0..6).map(|_| Vec::with_capacity(level_rows.len())).collect();
    let mut previous = 0.0_f64;
    for row in level_rows {
        if row.force <= previous {
            return Err(parse_err(row.line, 1, "non-monotonic force levels"));
        }
        previous = row.force;
        force_levels.push(row.force);
        for (i, cell) in row.cells.iter().enumerate() {
            match cell {
                Some(v) => readings[i].push(*v),
                None => {
                    return Err(parse_err(
                        row.line,
                        i + 2,
                        format!(
                            "missing {} reading at force {}",
                            SeriesId::ALL[i].column(),
                            row.force
                        ),
                    ));
                }
            }
        }
    }

    let mut series = Vec::with_capacity(6);
    for (i, id) in SeriesId::ALL.iter().enumerate() {
        let (zero_start, zero_end) = match id {
            SeriesId::X1 | SeriesId::X2 => (leading.cells[i], trailing.cells[i]),
            SeriesId::X3 | SeriesId::X5 => (leading.cells[i], None),
            SeriesId::X4 | SeriesId::X6 => (None, leading.cells[i]),
        };
        series.push(SeriesData {
            id: *id,
            readings: std::mem::take(&mut readings[i]),
            zero_start,
            zero_end,
        });
    }

    let ds = CalibrationDataset {
        zero_indication,
        temp_start_c,
        temp_end_c,
        force_levels,
        series,
    };
    ds.validate().map_err(|e| match e {
        Error::Schedule(msg) => parse_err(trailing.line, 1, msg),
        other => other,
    })?;
    Ok(ds)
}

fn push_opt(out: &mut String, value: Option<f64>) {
    if let Some(v) = value {
        out.push_str(&v.to_string());
    }
}

/// Serialize a dataset to the CSV schema (LF line endings, shortest
/// round-trip numbers).
pub fn serialize_dataset(ds: &CalibrationDataset) -> String {
    let mut out = String::new();
    if let Some(z) = ds.zero_indication {
        out.push_str(&format!("# zero_indication={z}\n"));
    }
    if let Some(t) = ds.temp_start_c {
        out.push_str(&format!("# temp_start_C={t}\n"));
    }
    if let Some(t) = ds.temp_end_c {
        out.push_str(&format!("# temp_end_C={t}\n"));
    }
    out.push_str("# force_unit=kgf\n");
    out.push_str(HEADER);
    out.push('\n');

    // Leading force-0 row: zero_start for the increasing series, the cycle
    // closing reading for the decreasing ones.
    out.push('0');
    for id in SeriesId::ALL {
        out.push(',');
        let s = ds.series(id);
        match id {
            SeriesId::X4 | SeriesId::X6 => push_opt(&mut out, s.zero_end),
            _ => push_opt(&mut out, s.zero_start),
        }
    }
    out.push('\n');

    for (row, force) in ds.force_levels.iter().enumerate() {
        out.push_str(&force.to_string());
        for id in SeriesId::ALL {
            out.push(',');
            out.push_str(&ds.series(id).readings[row].to_string());
        }
        out.push('\n');
    }

    // Trailing force-0 row: final zeros of X1 and X2.
    out.push('0');
    for id in SeriesId::ALL {
        out.push(',');
        match id {
            SeriesId::X1 | SeriesId::X2 => push_opt(&mut out, ds.series(id).zero_end),
            _ => {}
        }
    }
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const REFERENCE: &str = include_str!("../../data/reference_calibration.csv");

    #[test]
    fn parses_reference_dataset() {
        let ds = parse_dataset(REFERENCE).unwrap();
        assert_eq!(ds.force_levels.len(), 8);
        assert_eq!(ds.zero_indication, Some(2.341453525));
        assert_eq!(ds.series(SeriesId::X1).readings[7], 4.701769621);
        assert_eq!(ds.series(SeriesId::X1).zero_start, Some(2.360837426));
        assert_eq!(ds.series(SeriesId::X1).zero_end, Some(2.349537962));
        assert_eq!(ds.series(SeriesId::X4).zero_end, Some(2.322302802));
        assert_eq!(ds.series(SeriesId::X6).zero_end, Some(2.31811396));
        assert_eq!(ds.series(SeriesId::X3).zero_end, None);
    }

    #[test]
    fn reference_round_trips_bit_exactly() {
        let ds = parse_dataset(REFERENCE).unwrap();
        let text = serialize_dataset(&ds);
        let ds2 = parse_dataset(&text).unwrap();
        assert_eq!(ds, ds2);
    }

    #[test]
    fn missing_column_is_named() {
        let broken = REFERENCE.replace(",X4_360", "");
        let err = parse_dataset(&broken).unwrap_err();
        assert!(err.to_string().contains("X4_360"), "{err}");
    }

    #[test]
    fn non_monotonic_levels_rejected() {
        let broken = REFERENCE.replace("\n1,", "\n0.4,");
        let err = parse_dataset(&broken).unwrap_err();
        assert!(err.to_string().contains("non-monotonic"), "{err}");
    }

    #[test]
    fn too_few_levels_rejected() {
        let mut lines: Vec<&str> = REFERENCE.lines().collect();
        // Drop the 1 kgf row, leaving 7 levels.
        lines.retain(|l| !l.starts_with("1,"));
        let err = parse_dataset(&lines.join("\n")).unwrap_err();
        assert!(err.to_string().contains("fewer than 8"), "{err}");
    }

    #[test]
    fn empty_input_reports_missing_header() {
        let err = parse_dataset("").unwrap_err();
        assert!(err.to_string().contains("missing header"), "{err}");
    }

    #[test]
    fn non_numeric_cell_has_coordinates() {
        let broken = REFERENCE.replace("2.38038", "oops");
        let err = parse_dataset(&broken).unwrap_err();
        match err {
            Error::Parse { line, column, .. } => {
                assert!(line > 0);
                assert_eq!(column, 2);
            }
            other => panic!("unexpected error {other}"),
        }
    }
}
