//! CSV output: one row per length, one column per detector configuration.
//!
//! Columns are `length_km,rate_dual_bps,rate_fast_bps,rate_slow_bps`. Cells
//! for configurations not computed are empty. Rates are the raw (unclamped)
//! values in scientific notation with six significant digits; lengths carry
//! two decimals.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::scenario::Mode;
use crate::sweep::RateCurve;

pub const HEADER: [&str; 4] = [
    "length_km",
    "rate_dual_bps",
    "rate_fast_bps",
    "rate_slow_bps",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Dual,
    Fast,
    Slow,
}

impl Column {
    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Dual | Mode::DualNoPa => Column::Dual,
            Mode::SingleFast => Column::Fast,
            Mode::SingleSlow => Column::Slow,
        }
    }

    fn index(self) -> usize {
        match self {
            Column::Dual => 0,
            Column::Fast => 1,
            Column::Slow => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub length_km: f64,
    /// Raw rates in dual, fast, slow order.
    pub rates: [Option<f64>; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct RateTable {
    pub rows: Vec<TableRow>,
}

pub fn format_length(l: f64) -> String {
    format!("{l:.2}")
}

pub fn format_rate(r: f64) -> String {
    format!("{r:.5e}")
}

fn parse_f64(field: &str, line: usize) -> Result<f64> {
    field
        .parse::<f64>()
        .map_err(|e| Error::Config(format!("line {line}: cannot parse {field:?}: {e}")))
}

impl RateTable {
    /// Lays out curves sampled on the same lengths.
    pub fn from_curves(curves: &[(Column, &RateCurve)]) -> Result<Self> {
        let Some((_, first)) = curves.first() else {
            return Ok(Self::default());
        };
        let mut rows: Vec<TableRow> = first
            .lengths()
            .map(|length_km| TableRow {
                length_km,
                rates: [None; 3],
            })
            .collect();
        for (col, curve) in curves {
            if curve.len() != rows.len()
                || curve.lengths().zip(&rows).any(|(l, r)| l != r.length_km)
            {
                return Err(Error::Grid(
                    "curves in one table must share their lengths".into(),
                ));
            }
            for (row, p) in rows.iter_mut().zip(&curve.points) {
                row.rates[col.index()] = Some(p.raw_rate);
            }
        }
        Ok(Self { rows })
    }

    /// The curve stored in `col`, rows with an empty cell skipped.
    pub fn curve(&self, col: Column) -> Result<RateCurve> {
        RateCurve::from_raw(
            self.rows
                .iter()
                .filter_map(|r| r.rates[col.index()].map(|v| (r.length_km, v))),
        )
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let io = |e: csv::Error| Error::Config(format!("cannot write CSV: {e}"));
        w.write_record(HEADER).map_err(io)?;
        for row in &self.rows {
            let mut rec = vec![format_length(row.length_km)];
            rec.extend(
                row.rates
                    .iter()
                    .map(|r| r.map(format_rate).unwrap_or_default()),
            );
            w.write_record(&rec).map_err(io)?;
        }
        w.flush()
            .map_err(|e| Error::Config(format!("cannot write CSV: {e}")))?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is ASCII")
    }

    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(true)
            .from_reader(input);
        let headers = r
            .headers()
            .map_err(|e| Error::Config(format!("cannot read CSV header: {e}")))?
            .clone();
        if headers.iter().ne(HEADER.iter().copied()) {
            return Err(Error::Config(format!("unexpected CSV header {headers:?}")));
        }
        let mut rows = Vec::new();
        for (i, rec) in r.records().enumerate() {
            let line = i + 2;
            let rec = rec.map_err(|e| Error::Config(format!("line {line}: {e}")))?;
            let length_km = parse_f64(&rec[0], line)?;
            let mut rates = [None; 3];
            for (slot, field) in rates.iter_mut().zip(rec.iter().skip(1)) {
                if !field.is_empty() {
                    *slot = Some(parse_f64(field, line)?);
                }
            }
            rows.push(TableRow { length_km, rates });
        }
        Ok(Self { rows })
    }
}
