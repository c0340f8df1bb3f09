//! Result tables: CSV for plotting scripts, aligned text for people.
//!
//! The CSV keeps times in seconds; the text table shows milliseconds.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// One row of the benchmark. Columns for a method that was not run are
/// `None` and show up as empty CSV fields.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub image: String,
    /// dB, `+inf` for an exact reconstruction.
    pub psnr_naive: Option<f64>,
    pub psnr_cutoff: Option<f64>,
    /// Seconds spent in the backward solve.
    pub time_naive: Option<f64>,
    pub time_cutoff: Option<f64>,
    pub modes_retained: usize,
    pub m_eps: f64,
}

pub const CSV_HEADER: &str = "image,psnr_naive,psnr_cutoff,time_naive,time_cutoff,modes_retained,m_eps";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tables {
    pub csv: String,
    pub text: String,
}

struct Row {
    image: String,
    psnr_naive: Option<f64>,
    psnr_cutoff: Option<f64>,
    time_naive: Option<f64>,
    time_cutoff: Option<f64>,
    modes: f64,
    m_eps: f64,
}

fn mean_of(records: &[BenchRecord], f: impl Fn(&BenchRecord) -> Option<f64>) -> Option<f64> {
    let vals: Vec<f64> = records.iter().filter_map(f).collect();
    (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
}

fn num(v: Option<f64>, prec: usize) -> String {
    match v {
        None => String::new(),
        Some(x) if x == f64::INFINITY => "inf".into(),
        Some(x) => format!("{x:.prec$}"),
    }
}

/// Builds the CSV and the text table: one row per record, then an `Avg.` row.
///
/// Averages skip missing values. An infinite PSNR makes its average `inf`.
pub fn emit_tables(records: &[BenchRecord]) -> Result<Tables> {
    if records.is_empty() {
        return Err(Error::EmptyRecords);
    }
    let mut rows: Vec<Row> = records
        .iter()
        .map(|r| Row {
            image: r.image.clone(),
            psnr_naive: r.psnr_naive,
            psnr_cutoff: r.psnr_cutoff,
            time_naive: r.time_naive,
            time_cutoff: r.time_cutoff,
            modes: r.modes_retained as f64,
            m_eps: r.m_eps,
        })
        .collect();
    rows.push(Row {
        image: "Avg.".into(),
        psnr_naive: mean_of(records, |r| r.psnr_naive),
        psnr_cutoff: mean_of(records, |r| r.psnr_cutoff),
        time_naive: mean_of(records, |r| r.time_naive),
        time_cutoff: mean_of(records, |r| r.time_cutoff),
        modes: records.iter().map(|r| r.modes_retained as f64).sum::<f64>() / records.len() as f64,
        m_eps: records.iter().map(|r| r.m_eps).sum::<f64>() / records.len() as f64,
    });

    let mut csv = format!("{CSV_HEADER}\n");
    for r in &rows {
        let modes = if r.modes.fract() == 0.0 {
            format!("{}", r.modes as u64)
        } else {
            format!("{:.2}", r.modes)
        };
        writeln!(
            csv,
            "{},{},{},{},{},{},{:.10}",
            r.image,
            num(r.psnr_naive, 6),
            num(r.psnr_cutoff, 6),
            num(r.time_naive, 6),
            num(r.time_cutoff, 6),
            modes,
            r.m_eps
        )
        .expect("writing to a String");
    }

    let header = ["image", "PSNR naive", "PSNR cutoff", "ms naive", "ms cutoff", "|Theta|", "M"];
    let cells: Vec<[String; 7]> = rows
        .iter()
        .map(|r| {
            let dash = |s: String| if s.is_empty() { "-".to_string() } else { s };
            [
                r.image.clone(),
                dash(num(r.psnr_naive, 2)),
                dash(num(r.psnr_cutoff, 2)),
                dash(num(r.time_naive.map(|t| t * 1e3), 3)),
                dash(num(r.time_cutoff.map(|t| t * 1e3), 3)),
                if r.modes.fract() == 0.0 {
                    format!("{}", r.modes as u64)
                } else {
                    format!("{:.1}", r.modes)
                },
                format!("{:.4}", r.m_eps),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let mut text = String::new();
    let mut line = |cols: &[String]| {
        let mut s = String::new();
        for (i, (c, w)) in cols.iter().zip(&widths).enumerate() {
            if i == 0 {
                write!(s, "{c:<w$}").unwrap();
            } else {
                write!(s, "  {c:>w$}").unwrap();
            }
        }
        text.push_str(s.trim_end());
        text.push('\n');
    };
    line(&header.map(String::from));
    line(&widths.map(|w| "-".repeat(w)));
    let (body, avg) = cells.split_at(cells.len() - 1);
    for row in body {
        line(row);
    }
    line(&widths.map(|w| "-".repeat(w)));
    line(&avg[0]);
    Ok(Tables { csv, text })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(name: &str, naive: f64, cutoff: f64) -> BenchRecord {
        BenchRecord {
            image: name.into(),
            psnr_naive: Some(naive),
            psnr_cutoff: Some(cutoff),
            time_naive: Some(0.02),
            time_cutoff: Some(0.01),
            modes_retained: 242,
            m_eps: std::f64::consts::LN_10,
        }
    }

    #[test]
    fn single_record_average_matches_row() {
        let t = emit_tables(&[rec("a", 12.5, 14.25)]).unwrap();
        let lines: Vec<&str> = t.csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 3);
        let row = lines[1].split_once(',').unwrap().1;
        let avg = lines[2].split_once(',').unwrap();
        assert_eq!(avg.0, "Avg.");
        assert_eq!(avg.1, row);
    }

    #[test]
    fn two_records_average() {
        let t = emit_tables(&[rec("a", 10.0, 10.0), rec("b", 20.0, 20.0)]).unwrap();
        let avg = t.text.lines().last().unwrap();
        assert!(avg.starts_with("Avg."));
        assert!(avg.contains("15.00"), "{avg}");
        assert!(t.csv.lines().last().unwrap().starts_with("Avg.,15.000000,15.000000"));
    }

    #[test]
    fn missing_and_infinite_values() {
        let mut r = rec("x", f64::INFINITY, 0.0);
        r.psnr_cutoff = None;
        r.time_cutoff = None;
        let t = emit_tables(&[r]).unwrap();
        let row = t.csv.lines().nth(1).unwrap();
        assert!(row.starts_with("x,inf,,0.020000,,242,"), "{row}");
        assert!(t.text.contains("inf"));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(emit_tables(&[]), Err(Error::EmptyRecords)));
    }

    #[test]
    fn text_columns_line_up() {
        let t = emit_tables(&[rec("a_long_name", 10.0, 12.0), rec("b", 20.0, 22.0)]).unwrap();
        let lens: Vec<usize> = t.text.lines().map(str::len).collect();
        assert!(lens.windows(2).all(|w| w[0] == w[1]), "{}", t.text);
    }
}
