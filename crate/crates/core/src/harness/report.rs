//! CSV output of measurements.

use std::io;
use std::path::Path;

use super::experiment::Measurement;
use super::HarnessError;

pub const COLUMNS: [&str; 15] = [
    "structure",
    "params",
    "width",
    "n",
    "iteration",
    "seed",
    "insert_ns",
    "query_ns",
    "delete_ns",
    "insert_ops_s",
    "query_ops_s",
    "delete_ops_s",
    "peak_bytes",
    "bytes_after_insert",
    "bits_per_key",
];

const MISSING: &str = "NA";

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| MISSING.to_string(), |v| v.to_string())
}

fn record(m: &Measurement) -> [String; 15] {
    [
        m.structure.clone(),
        m.params.clone(),
        m.width.to_string(),
        m.n.to_string(),
        m.iteration.map_or_else(|| "avg".to_string(), |i| i.to_string()),
        m.seed.to_string(),
        m.insert_ns.to_string(),
        m.query_ns.to_string(),
        m.delete_ns.to_string(),
        m.insert_ops_s.to_string(),
        m.query_ops_s.to_string(),
        m.delete_ops_s.to_string(),
        opt(m.peak_bytes),
        opt(m.bytes_after_insert),
        opt(m.bits_per_key),
    ]
}

/// Writes a header and one row per measurement.
pub fn write_csv<W: io::Write>(out: W, rows: &[Measurement]) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for m in rows {
        w.write_record(record(m))?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(path: &Path, rows: &[Measurement]) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(|e| HarnessError::Io {
        path: path.to_path_buf(),
        source: e,
    })?;
    write_csv(io::BufWriter::new(file), rows).map_err(|e| HarnessError::Csv {
        path: path.to_path_buf(),
        source: e,
    })
}

fn field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<T, String> {
    let raw = rec.get(i).ok_or_else(|| format!("missing column {}", COLUMNS[i]))?;
    raw.parse().map_err(|_| format!("bad {} value {raw:?}", COLUMNS[i]))
}

fn opt_field<T: std::str::FromStr>(rec: &csv::StringRecord, i: usize) -> Result<Option<T>, String> {
    if rec.get(i) == Some(MISSING) {
        Ok(None)
    } else {
        field(rec, i).map(Some)
    }
}

/// Parses a file produced by [`write_csv`].
pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<Measurement>, String> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(|e| e.to_string())?.clone();
    if header.iter().ne(COLUMNS) {
        return Err(format!("unexpected header {header:?}"));
    }
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(|e| e.to_string())?;
        let iteration = match rec.get(4) {
            Some("avg") => None,
            _ => Some(field(&rec, 4)?),
        };
        rows.push(Measurement {
            structure: field(&rec, 0)?,
            params: field(&rec, 1)?,
            width: field(&rec, 2)?,
            n: field(&rec, 3)?,
            iteration,
            seed: field(&rec, 5)?,
            insert_ns: field(&rec, 6)?,
            query_ns: field(&rec, 7)?,
            delete_ns: field(&rec, 8)?,
            insert_ops_s: field(&rec, 9)?,
            query_ops_s: field(&rec, 10)?,
            delete_ops_s: field(&rec, 11)?,
            peak_bytes: opt_field(&rec, 12)?,
            bytes_after_insert: opt_field(&rec, 13)?,
            bits_per_key: opt_field(&rec, 14)?,
        });
    }
    Ok(rows)
}
