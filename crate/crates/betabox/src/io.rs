//! Table, report, and plot-data formats. Everything here maps structs to
//! strings and back; callers own the actual file handling.
//!
//! Renderers are canonical: writing a parsed table reproduces the original
//! bytes exactly. Parsers are structural only; a file with repeated entries
//! parses fine and simply reports `is_bijective() == false`, since analysis
//! accepts arbitrary tables. Operations that need a permutation (inversion)
//! do their own check.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::CryptoReport;
use crate::error::{Error, Result};
use crate::latency::LatencyRow;
use crate::sbox::{Provenance, SBoxTable};

/// The hex grid is an 8-bit format: 16 lines of 16 uppercase two-digit
/// entries, so the value at row r, column c is S(16r + c).
pub fn render_hex_grid(table: &SBoxTable) -> Result<String> {
    if table.word_bits() != 8 {
        return Err(Error::WordSizeUnsupported(table.word_bits()));
    }
    let mut out = String::with_capacity(16 * 48);
    for row in table.entries().chunks(16) {
        for (c, entry) in row.iter().enumerate() {
            if c > 0 {
                out.push(' ');
            }
            write!(out, "{entry:02X}").expect("string write");
        }
        out.push('\n');
    }
    Ok(out)
}

/// Accepts any whitespace layout and either hex case, but insists on exactly
/// 256 two-digit tokens. Parsed tables carry no generation record.
pub fn parse_hex_grid(text: &str) -> Result<SBoxTable> {
    let mut entries = Vec::with_capacity(256);
    for token in text.split_whitespace() {
        if token.len() != 2 || !token.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::TableFormat(format!(
                "expected a two-digit hex entry, got {token:?}"
            )));
        }
        entries.push(u16::from_str_radix(token, 16).expect("checked hex"));
    }
    SBoxTable::from_entries(8, entries, Provenance::File)
}

#[derive(Serialize, Deserialize)]
struct TableFile {
    n: u8,
    table: Vec<u16>,
    provenance: Provenance,
}

/// JSON table format: `{"n", "table", "provenance"}`, pretty-printed with a
/// trailing newline. Unlike the hex grid this keeps the full generation
/// record, so a written table can later be re-analyzed against its own
/// parameters.
pub fn render_table_json(table: &SBoxTable) -> Result<String> {
    let file = TableFile {
        n: table.word_bits(),
        table: table.entries().to_vec(),
        provenance: table.provenance().clone(),
    };
    let mut out = serde_json::to_string_pretty(&file)?;
    out.push('\n');
    Ok(out)
}

pub fn parse_table_json(text: &str) -> Result<SBoxTable> {
    let file: TableFile = serde_json::from_str(text)?;
    SBoxTable::from_entries(file.n, file.table, file.provenance)
}

/// Format sniffing for `read from wherever`: JSON starts with a brace,
/// anything else is treated as a hex grid.
pub fn parse_table(text: &str) -> Result<SBoxTable> {
    if text.trim_start().starts_with('{') {
        parse_table_json(text)
    } else {
        parse_hex_grid(text)
    }
}

pub fn render_report_json(report: &CryptoReport) -> Result<String> {
    let mut out = serde_json::to_string_pretty(report)?;
    out.push('\n');
    Ok(out)
}

fn histogram_csv(header: &str, histogram: &BTreeMap<u32, u64>) -> String {
    let mut out = String::from(header);
    out.push('\n');
    for (value, count) in histogram {
        writeln!(out, "{value},{count}").expect("string write");
    }
    out
}

/// `value,count` rows over the occupied difference-table cells.
pub fn ddt_histogram_csv(histogram: &BTreeMap<u32, u64>) -> String {
    histogram_csv("value,count", histogram)
}

/// `abs_bias,count` rows over the occupied bias magnitudes.
pub fn lat_histogram_csv(histogram: &BTreeMap<u32, u64>) -> String {
    histogram_csv("abs_bias,count", histogram)
}

fn opt_cell<T: std::fmt::Display>(value: &Option<T>) -> String {
    value.as_ref().map(|v| v.to_string()).unwrap_or_default()
}

/// Machine-readable comparison rows. Point designs (closed-form model,
/// fixed baselines) have no spread, so their P95 cells are empty.
pub fn latency_csv(rows: &[LatencyRow]) -> String {
    let mut out = String::from("design,k,median_cycles,p95_cycles,median_us,p95_us\n");
    for row in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            row.design,
            opt_cell(&row.gate_rank),
            row.median_cycles,
            opt_cell(&row.p95_cycles),
            row.median_us,
            opt_cell(&row.p95_us),
        )
        .expect("string write");
    }
    out
}

/// Human-readable view of the same rows, aligned and rounded. The CSV is the
/// stable format; this one is for terminals.
pub fn latency_table(rows: &[LatencyRow]) -> String {
    let header = ["design", "k", "med cycles", "p95 cycles", "med us", "p95 us"];
    let mut cells: Vec<[String; 6]> = vec![header.map(String::from)];
    for row in rows {
        cells.push([
            row.design.clone(),
            row.gate_rank.map(|k| k.to_string()).unwrap_or_default(),
            format!("{:.1}", row.median_cycles),
            row.p95_cycles.map(|c| format!("{c:.1}")).unwrap_or_else(|| "-".into()),
            format!("{:.3}", row.median_us),
            row.p95_us.map(|c| format!("{c:.3}")).unwrap_or_else(|| "-".into()),
        ]);
    }
    let mut widths = [0usize; 6];
    for row in &cells {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &cells {
        // first column left-aligned, numbers right-aligned
        write!(out, "{:<width$}", row[0], width = widths[0]).expect("string write");
        for (cell, width) in row.iter().zip(widths).skip(1) {
            write!(out, "  {cell:>width$}").expect("string write");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sbox::gf256;

    #[test]
    fn hex_grid_shape_and_first_row() {
        let grid = render_hex_grid(&gf256::baseline()).unwrap();
        let lines: Vec<&str> = grid.lines().collect();
        assert_eq!(lines.len(), 16);
        assert_eq!(
            lines[0],
            "63 7C 77 7B F2 6B 6F C5 30 01 67 2B FE D7 AB 76"
        );
        assert!(grid.ends_with('\n'));
        assert_eq!(grid.len(), 16 * 48);
    }

    #[test]
    fn hex_grid_round_trips_byte_exactly() {
        let table = gf256::baseline();
        let grid = render_hex_grid(&table).unwrap();
        let back = parse_hex_grid(&grid).unwrap();
        assert_eq!(back.entries(), table.entries());
        assert_eq!(render_hex_grid(&back).unwrap(), grid);
        assert_eq!(*back.provenance(), Provenance::File);
    }

    #[test]
    fn hex_grid_parse_is_layout_tolerant() {
        let table = parse_hex_grid("00 01 02 ff\n".repeat(64).as_str()).unwrap();
        assert_eq!(table.get(3), 0xff);
        assert!(!table.is_bijective());
    }

    #[test]
    fn hex_grid_rejections() {
        assert!(matches!(
            parse_hex_grid("63 7C XX"),
            Err(Error::TableFormat(_))
        ));
        assert!(matches!(
            parse_hex_grid("6 3 7C"),
            Err(Error::TableFormat(_))
        ));
        assert!(matches!(
            parse_hex_grid("63 7C 77"),
            Err(Error::WrongTableLength { len: 3, .. })
        ));
        let long = "00 ".repeat(257);
        assert!(matches!(
            parse_hex_grid(&long),
            Err(Error::WrongTableLength { len: 257, .. })
        ));
    }

    #[test]
    fn hex_grid_is_eight_bit_only() {
        let small = SBoxTable::identity(4).unwrap();
        assert!(matches!(
            render_hex_grid(&small),
            Err(Error::WordSizeUnsupported(4))
        ));
    }

    #[test]
    fn json_round_trips_with_provenance() {
        let table = gf256::baseline();
        let text = render_table_json(&table).unwrap();
        assert!(text.ends_with('\n'));
        assert!(text.contains("\"kind\": \"gf-baseline\""));
        let back = parse_table_json(&text).unwrap();
        assert_eq!(back, table);
        assert_eq!(render_table_json(&back).unwrap(), text);
    }

    #[test]
    fn json_rejections() {
        assert!(matches!(parse_table_json("{"), Err(Error::Json(_))));
        let wrong_n = r#"{"n": 2, "table": [0, 1, 2], "provenance": {"kind": "file"}}"#;
        assert!(matches!(
            parse_table_json(wrong_n),
            Err(Error::WrongTableLength { len: 3, expected: 4 })
        ));
        let wide = r#"{"n": 2, "table": [0, 1, 2, 9], "provenance": {"kind": "file"}}"#;
        assert!(matches!(
            parse_table_json(wide),
            Err(Error::EntryTooWide { entry: 9, bits: 2 })
        ));
    }

    #[test]
    fn sniffing_picks_the_right_parser() {
        let table = gf256::baseline();
        let json = render_table_json(&table).unwrap();
        let hex = render_hex_grid(&table).unwrap();
        assert_eq!(parse_table(&json).unwrap().entries(), table.entries());
        assert_eq!(parse_table(&hex).unwrap().entries(), table.entries());
        assert_eq!(
            parse_table(&format!("  \n {json}")).unwrap().entries(),
            table.entries()
        );
    }

    #[test]
    fn histogram_csv_layout() {
        let mut histogram = BTreeMap::new();
        histogram.insert(4u32, 255u64);
        histogram.insert(0, 32895);
        histogram.insert(2, 32130);
        assert_eq!(
            ddt_histogram_csv(&histogram),
            "value,count\n0,32895\n2,32130\n4,255\n"
        );
        assert_eq!(
            lat_histogram_csv(&BTreeMap::new()),
            "abs_bias,count\n"
        );
    }

    #[test]
    fn latency_csv_layout() {
        let rows = vec![
            LatencyRow {
                design: "mc".into(),
                gate_rank: Some(3),
                median_cycles: 13586.0,
                p95_cycles: Some(19523.0),
                median_us: 67.93,
                p95_us: Some(97.615),
            },
            LatencyRow::point("rom-load", None, 64.0, 2.0e8),
        ];
        let csv = latency_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "design,k,median_cycles,p95_cycles,median_us,p95_us"
        );
        assert_eq!(lines.next().unwrap(), "mc,3,13586,19523,67.93,97.615");
        assert_eq!(lines.next().unwrap(), "rom-load,,64,,0.32,");
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn latency_text_alignment() {
        let rows = vec![LatencyRow::point("gf-inv-affine", None, 256.0, 2.0e8)];
        let text = latency_table(&rows);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("design"));
        assert!(lines[1].starts_with("gf-inv-affine"));
        assert!(lines[1].contains("256.0"));
        assert!(lines[1].contains('-'));
        assert!(lines[1].contains("1.280"));
        // every row is padded to the same visual width
        assert_eq!(lines[0].len(), lines[1].len());
    }
}
