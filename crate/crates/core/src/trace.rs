//! Finite discrete traces and their CSV form.

use std::io::{Read, Write};
use std::path::Path;

use thiserror::Error;

use crate::time::{format_real, parse_real, quantize, QuantizeError, Real};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("cannot read trace: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("trace header must start with `tick` followed by at least one signal")]
    BadHeader,
    #[error("duplicate signal `{0}` in header")]
    DuplicateSignal(String),
    #[error("row {row}: expected tick {expected}, found `{found}`")]
    MissingTick {
        row: usize,
        expected: u64,
        found: String,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    Ragged {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("row {row}, column `{column}`: cannot parse `{text}`")]
    BadNumber {
        row: usize,
        column: String,
        text: String,
    },
    #[error("row {row}, column `{column}`: {source}")]
    Quantize {
        row: usize,
        column: String,
        source: QuantizeError,
    },
    #[error("trace has no rows")]
    Empty,
    #[error("tick period must be positive")]
    BadDt,
    #[error("quantization factor must be positive")]
    BadFactor,
    #[error("row {row} has {found} values for {expected} signals")]
    Dimension {
        row: usize,
        expected: usize,
        found: usize,
    },
}

/// Signal values sampled once per tick, stored as scaled integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscreteTrace {
    dt: Real,
    signals: Vec<String>,
    values: Vec<Vec<i64>>,
    factor: i64,
}

impl DiscreteTrace {
    /// Builds a trace from already scaled rows.
    pub fn new(
        dt: Real,
        signals: Vec<String>,
        values: Vec<Vec<i64>>,
        factor: i64,
    ) -> Result<Self, TraceError> {
        if dt <= Real::from_integer(0) {
            return Err(TraceError::BadDt);
        }
        if factor <= 0 {
            return Err(TraceError::BadFactor);
        }
        if signals.is_empty() {
            return Err(TraceError::BadHeader);
        }
        if values.is_empty() {
            return Err(TraceError::Empty);
        }
        for (row, v) in values.iter().enumerate() {
            if v.len() != signals.len() {
                return Err(TraceError::Dimension {
                    row,
                    expected: signals.len(),
                    found: v.len(),
                });
            }
        }
        Ok(Self {
            dt,
            signals,
            values,
            factor,
        })
    }

    /// Builds a trace from real-valued rows, quantizing each value.
    pub fn from_reals(
        dt: Real,
        signals: Vec<String>,
        rows: &[Vec<Real>],
        factor: i64,
    ) -> Result<Self, TraceError> {
        let mut values = Vec::with_capacity(rows.len());
        for (row, r) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(r.len());
            for (col, v) in r.iter().enumerate() {
                out.push(quantize(*v, factor).map_err(|source| TraceError::Quantize {
                    row,
                    column: signals.get(col).cloned().unwrap_or_default(),
                    source,
                })?);
            }
            values.push(out);
        }
        Self::new(dt, signals, values, factor)
    }

    pub fn dt(&self) -> Real {
        self.dt
    }

    pub fn signals(&self) -> &[String] {
        &self.signals
    }

    pub fn factor(&self) -> i64 {
        self.factor
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Scaled valuation at tick `k`.
    pub fn row(&self, k: usize) -> &[i64] {
        &self.values[k]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.values
    }

    /// Column of one signal, if present.
    pub fn column(&self, signal: &str) -> Option<Vec<i64>> {
        let idx = self.signals.iter().position(|s| s == signal)?;
        Some(self.values.iter().map(|r| r[idx]).collect())
    }

    /// Writes the trace in the `tick,SIG...` CSV layout with decimal values.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), TraceError> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["tick".to_string()];
        header.extend(self.signals.iter().cloned());
        w.write_record(&header)?;
        for (k, row) in self.values.iter().enumerate() {
            let mut rec = vec![k.to_string()];
            rec.extend(row.iter().map(|v| format_real(&Real::new(*v, self.factor))));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Reads a `tick,SIG...` CSV file and quantizes its values.
pub fn load_trace(path: impl AsRef<Path>, dt: Real, factor: i64) -> Result<DiscreteTrace, TraceError> {
    let file = std::fs::File::open(path)?;
    read_trace(file, dt, factor)
}

/// Like [`load_trace`] over any reader.
pub fn read_trace<R: Read>(input: R, dt: Real, factor: i64) -> Result<DiscreteTrace, TraceError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(input);
    let header = reader.headers()?.clone();
    if header.len() < 2 || &header[0] != "tick" {
        return Err(TraceError::BadHeader);
    }
    let signals: Vec<String> = header.iter().skip(1).map(str::to_string).collect();
    for (i, s) in signals.iter().enumerate() {
        if s.is_empty() {
            return Err(TraceError::BadHeader);
        }
        if signals[..i].contains(s) {
            return Err(TraceError::DuplicateSignal(s.clone()));
        }
    }
    let mut rows = Vec::new();
    for (row, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != header.len() {
            return Err(TraceError::Ragged {
                row,
                expected: header.len(),
                found: record.len(),
            });
        }
        let tick = &record[0];
        if tick.parse::<u64>().ok() != Some(row as u64) {
            return Err(TraceError::MissingTick {
                row,
                expected: row as u64,
                found: tick.to_string(),
            });
        }
        let mut values = Vec::with_capacity(signals.len());
        for (col, text) in record.iter().skip(1).enumerate() {
            let v = parse_real(text).map_err(|_| TraceError::BadNumber {
                row,
                column: signals[col].clone(),
                text: text.to_string(),
            })?;
            values.push(v);
        }
        rows.push(values);
    }
    DiscreteTrace::from_reals(dt, signals, &rows, factor)
}
