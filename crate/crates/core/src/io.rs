//! CSV ingestion and emission, the GNP log-return transform and JSON result envelopes.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::Series;

/// Read one numeric column (by header name, or by 0-based index if no header matches) of a CSV
/// file with a header row. Values are returned raw.
pub fn read_column(path: &Path, column: &str) -> Result<Vec<f64>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::Input(format!("cannot open {}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(file);
    let headers = rdr.headers()?.clone();
    let idx = match headers.iter().position(|h| h == column) {
        Some(i) => i,
        None => column
            .parse::<usize>()
            .ok()
            .filter(|i| *i < headers.len())
            .ok_or_else(|| Error::Input(format!("column `{column}` not found in {}", path.display())))?,
    };
    let mut out = Vec::new();
    for (row, rec) in rdr.records().enumerate() {
        let rec = rec?;
        // Row numbers are 1-based and count the header line.
        let line = row + 2;
        let cell = rec.get(idx).ok_or_else(|| Error::Input(format!("row {line}: missing column `{column}`")))?;
        let v: f64 = cell
            .parse()
            .map_err(|_| Error::Input(format!("row {line}: non-numeric value `{cell}` in column `{column}`")))?;
        if !v.is_finite() {
            return Err(Error::Input(format!("row {line}: non-finite value `{cell}`")));
        }
        out.push(v);
    }
    Ok(out)
}

/// Read a column and remove its sample mean.
pub fn ingest_csv(path: &Path, column: &str) -> Result<Series> {
    Series::demeaned(read_column(path, column)?)
}

/// Log-returns in percent, `100 (ln x_t - ln x_{t-1})`.
pub fn log_returns(levels: &[f64]) -> Result<Vec<f64>> {
    if let Some(i) = levels.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
        return Err(Error::Input(format!("level at row {} is not positive: {}", i + 1, levels[i])));
    }
    Ok(levels.windows(2).map(|w| 100.0 * (w[1].ln() - w[0].ln())).collect())
}

/// Demeaned percent log-returns of a level series (at least 3 levels).
pub fn gnp_transform(levels: &[f64]) -> Result<Series> {
    Series::demeaned(log_returns(levels)?)
}

/// Write columns under the given headers. Floats use the shortest decimal form that parses back
/// to the same bits.
pub fn write_columns<W: Write>(out: W, headers: &[&str], columns: &[&[f64]]) -> Result<()> {
    if columns.len() != headers.len() {
        return Err(Error::Contract(format!("{} headers for {} columns", headers.len(), columns.len())));
    }
    let rows = columns.first().map_or(0, |c| c.len());
    if columns.iter().any(|c| c.len() != rows) {
        return Err(Error::Contract("columns differ in length".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(headers)?;
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| c[i].to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Single-column CSV with header `value`.
pub fn write_series_csv<W: Write>(out: W, values: &[f64]) -> Result<()> {
    write_columns(out, &["value"], &[values])
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta<'a, C: Serialize> {
    pub seed: Option<u64>,
    pub config: &'a C,
    pub version: &'static str,
}

/// `{"meta": {seed, config, version}, "<key>": payload}`.
pub fn envelope<C: Serialize, P: Serialize>(seed: Option<u64>, config: &C, key: &str, payload: &P) -> Result<serde_json::Value> {
    let meta = Meta { seed, config, version: env!("CARGO_PKG_VERSION") };
    let mut map = serde_json::Map::new();
    map.insert("meta".into(), serde_json::to_value(meta)?);
    map.insert(key.into(), serde_json::to_value(payload)?);
    Ok(serde_json::Value::Object(map))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp(contents: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        f
    }

    #[test]
    fn two_rows_demeaned() {
        let f = tmp("x\n1.0\n3.0\n");
        let s = ingest_csv(f.path(), "x").unwrap();
        assert_eq!(s.values(), &[-1.0, 1.0]);
        assert!(s.is_demeaned());
    }

    #[test]
    fn header_only_rejected() {
        let f = tmp("x\n");
        let e = ingest_csv(f.path(), "x").unwrap_err().to_string();
        assert!(e.contains("fewer than 2 observations"), "{e}");
    }

    #[test]
    fn bad_cell_names_row() {
        let f = tmp("a,b\n1,2\n3,oops\n");
        let e = ingest_csv(f.path(), "b").unwrap_err().to_string();
        assert!(e.contains("row 3") && e.contains("oops"), "{e}");
        assert_eq!(read_column(f.path(), "0").unwrap(), vec![1.0, 3.0]);
    }

    #[test]
    fn missing_file_is_input_error() {
        assert!(matches!(ingest_csv(Path::new("/nonexistent/x.csv"), "x"), Err(Error::Input(_))));
    }

    #[test]
    fn gnp_single_return() {
        let r = log_returns(&[100.0, 105.0]).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 4.8790).abs() < 1e-4);
        assert_eq!(r[0] - crate::stats::mean(&r), 0.0);
        // A series needs two points, so two levels cannot form one.
        assert!(gnp_transform(&[100.0, 105.0]).is_err());
    }

    #[test]
    fn gnp_constant_and_nonpositive() {
        let s = gnp_transform(&[5.0; 6]).unwrap();
        assert!(s.values().iter().all(|v| *v == 0.0));
        let e = gnp_transform(&[1.0, 2.0, 0.0]).unwrap_err().to_string();
        assert!(e.contains("row 3"), "{e}");
    }

    #[test]
    fn csv_round_trip_is_bit_exact() {
        let v = vec![std::f64::consts::PI, -1e-300, 1.0 / 3.0, 123456789.123456789, 0.1 + 0.2];
        let mut buf = Vec::new();
        write_series_csv(&mut buf, &v).unwrap();
        let f = tmp(std::str::from_utf8(&buf).unwrap());
        let back = read_column(f.path(), "value").unwrap();
        assert_eq!(back.iter().map(|x| x.to_bits()).collect::<Vec<_>>(), v.iter().map(|x| x.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn envelope_shape() {
        let v = envelope(Some(7), &serde_json::json!({"n": 3}), "draws", &vec![1.0, 2.0]).unwrap();
        assert_eq!(v["meta"]["seed"], 7);
        assert_eq!(v["meta"]["config"]["n"], 3);
        assert_eq!(v["draws"][1], 2.0);
    }
}
